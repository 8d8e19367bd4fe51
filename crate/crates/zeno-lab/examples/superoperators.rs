//! Kraus channels and GKLS generators as d²×d² matrices.

use zeno_lab::linalg::{c64, op_norm, CMat};
use zeno_lab::superop::{gkls_to_superop, is_cptp_default, kraus_to_superop, ops, superop_exp, GklsGenerator, KrausSet};

fn main() -> zeno_lab::Result<()> {
    // amplitude damping with γ = 0.3
    let g: f64 = 0.3;
    let k0 = CMat::from_row_slice(2, 2, &[c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64((1.0 - g).sqrt(), 0.0)]);
    let k1 = CMat::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(g.sqrt(), 0.0), c64(0.0, 0.0), c64(0.0, 0.0)]);
    let channel = kraus_to_superop(&KrausSet::from_matrices(vec![k0, k1])?);
    println!("amplitude damping: {:?}, ‖E‖ = {:.6}", is_cptp_default(&channel), op_norm(channel.matrix()));

    let rho = ops::ketbra(2, 1, 1);
    println!("E(|1⟩⟨1|) = {:.4}", channel.apply(&rho));

    // Rabi drive with dephasing
    let h = ops::pauli_x() * c64(0.5, 0.0);
    let l = ops::pauli_z() * c64(0.2, 0.0);
    let gen = gkls_to_superop(&GklsGenerator::new(h, vec![l])?)?;
    for t in [0.5, 2.0, 8.0] {
        let e = superop_exp(&gen, t)?;
        let p1 = e.apply(&ops::ketbra(2, 0, 0))[(1, 1)].re;
        println!("t = {t}: population of |1⟩ = {p1:.6}, {:?}", is_cptp_default(&e));
    }
    Ok(())
}
