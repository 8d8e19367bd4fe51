//! Primary logarithm on a chosen branch cut, g(ad_A), and the first-order
//! BCH correction.

use zeno_lab::linalg::{c64, expm, op_norm};
use zeno_lab::matfunc::{bch_log, primary_log, BranchCut, CutSpec, GOfAd};
use zeno_lab::random;

fn main() -> zeno_lab::Result<()> {
    let mut rng = random::rng(3);
    let a = random::scaled(&mut rng, 3, 1.0);
    let l = random::scaled(&mut rng, 3, 1.0);
    let e = expm(&a);

    let log = primary_log(&e, CutSpec::Auto)?;
    println!("auto cut at angle {:.4}, ‖log E − A‖ = {:.2e}", log.cut.angle(), op_norm(&(&log.matrix - &a)));

    let gl = GOfAd::new(&a)?.apply(&l)?;
    let cut = CutSpec::Fixed(BranchCut::principal());
    for n in [16u64, 64, 256, 1024] {
        let h = 1.0 / n as f64;
        let z = bch_log(&e, &l, 1.0, n, cut)?;
        let rem = op_norm(&(z.matrix - &a - &gl * c64(h, 0.0)));
        println!("n = {n:5}: remainder {rem:.3e}");
    }
    Ok(())
}
