//! Zeno generator of a two-kick cycle and convergence of the kicked evolution.

use zeno_lab::linalg::op_norm;
use zeno_lab::models::{build, dephasing_zeno_generator, ModelSpec};
use zeno_lab::zeno::{convergence_scan, zeno_generator};

fn main() -> zeno_lab::Result<()> {
    let model = build(&ModelSpec::cycle(0.3, 2.0))?;
    let zl = zeno_generator(&model.cycle)?;
    println!("‖L_Z − closed form‖ = {:.2e}", op_norm(&(&zl.lz - dephasing_zeno_generator(2.0))));

    let ns: Vec<u64> = (3..=10).flat_map(|k| [(1u64 << k) - 1, 1u64 << k]).collect();
    let scan = convergence_scan(&model.cycle, model.t, &ns)?;
    for p in &scan.points {
        println!("n = {:5} ({:4}): {:.4e}", p.n, p.parity.as_str(), p.distance);
    }
    println!("odd slope {:.3}, even slope {:.3}", scan.odd_slope.unwrap(), scan.even_slope.unwrap());
    Ok(())
}
