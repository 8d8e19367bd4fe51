//! Alternating projective measurements: the Zeno limit lives on the
//! intersection of the measured subspaces.

use zeno_lab::linalg::op_norm;
use zeno_lab::models::{build, multi_proj_projections, ModelSpec};
use zeno_lab::zeno::{convergence_scan, hermitian_intersection, zeno_generator};

fn main() -> zeno_lab::Result<()> {
    let (p1, p2) = multi_proj_projections();
    let inter = hermitian_intersection(&[p1, p2])?;
    println!("P₁ ∧ P₂ = {:.3}", inter.projection);
    for selective in [true, false] {
        let model = build(&ModelSpec::multi_proj(2.0, 1.0, selective))?;
        let zl = zeno_generator(&model.cycle)?;
        let err = op_norm(&(&zl.lz - model.reference.lz.as_ref().unwrap()));
        let scan = convergence_scan(&model.cycle, model.t, &[64, 256, 1024])?;
        println!(
            "selective {selective}: ‖L_Z − reference‖ = {err:.1e}, distance at n = 1024: {:.3e}",
            scan.distance_at(1024).unwrap()
        );
    }
    Ok(())
}
