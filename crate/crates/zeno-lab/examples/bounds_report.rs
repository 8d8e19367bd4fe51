//! Every closed-form bound on one model, with the measured value next to it.

use zeno_lab::experiment::bound_reports;
use zeno_lab::models::{build, ModelSpec};

fn main() -> zeno_lab::Result<()> {
    let model = build(&ModelSpec::weak_meas(0.5, 1.0))?;
    for r in bound_reports(&model.cycle, model.t, &[16, 256], 1)? {
        let n = r.inputs.get("n").map(|n| format!("n={n}")).unwrap_or_default();
        if r.is_applicable() {
            println!("{:20} {:8} analytic {:.3e}  measured {:.3e}  holds {}", r.name, n, r.analytic, r.measured, r.holds);
        } else {
            println!("{:20} {:8} inapplicable: {}", r.name, n, r.note.unwrap_or_default());
        }
    }
    Ok(())
}
