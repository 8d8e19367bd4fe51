//! Weak versus projective measurement: total measurement time nτ needed to
//! reach a target distance.

use zeno_lab::models::{efficiency_scan, EfficiencyGrid, StrengthModel};

fn main() -> zeno_lab::Result<()> {
    for model in StrengthModel::all() {
        let scan = efficiency_scan(model, EfficiencyGrid::default_for(model), 1.0, 0.01)?;
        println!(
            "model {}: τ_opt = {:.4}, n = {}, nτ = {:.3}, projective nτ = {}",
            model.label(),
            scan.tau_opt.unwrap(),
            scan.n_opt.unwrap(),
            scan.best_total_time.unwrap(),
            scan.projective_total_time.map(|t| format!("{t:.3}")).unwrap_or_else(|| "unreachable".into())
        );
    }
    Ok(())
}
