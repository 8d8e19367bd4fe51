//! Peripheral spectrum, projections and the peripheral inverse of a kick.

use zeno_lab::models::{build, ModelSpec};
use zeno_lab::spectral::decompose_default;

fn main() -> zeno_lab::Result<()> {
    let model = build(&ModelSpec::cptp_kick(0.6, 2.0))?;
    let e = model.cycle.product();
    let dec = decompose_default(&e)?;
    for c in &dec.clusters {
        println!(
            "λ = {:+.6}{:+.6}i  mult {}  peripheral {}  ‖N‖ = {:.1e}",
            c.eigenvalue.re,
            c.eigenvalue.im,
            c.multiplicity,
            c.is_peripheral,
            zeno_lab::linalg::op_norm(&c.nilpotent)
        );
    }
    println!("μ₀ = {:.6}", dec.mu0);
    println!("reconstruction residual {:.2e}", dec.reconstruction_residual);
    let check = &dec.peripheral_inverse * &dec.peripheral_part - &dec.peripheral_projection;
    println!("‖E_φ⁻¹E_φ − P_φ‖ = {:.2e}", zeno_lab::linalg::op_norm(&check));
    Ok(())
}
