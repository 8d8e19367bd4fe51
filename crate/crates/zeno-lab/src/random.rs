//! Seeded random instances: Kraus channels, GKLS generators and matrices.
//! Every generator takes an explicit RNG so runs are reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg::{c64, op_norm, CMat};
use crate::superop::{gkls_to_superop, kraus_to_superop, GklsGenerator, KrausSet, SuperOperator};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries i.i.d. standard complex Gaussian.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c64(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMat {
    let g = ginibre(rng, d, d);
    (&g + g.adjoint()) * c64(0.5, 0.0)
}

/// Haar-distributed unitary from the QR of a Ginibre matrix.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMat {
    let qr = ginibre(rng, d, d).qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = CMat::from_fn(d, d, |i, j| if i == j { r[(i, i)] / r[(i, i)].norm() } else { c64(0.0, 0.0) });
    q * phases
}

/// `S^{-1/2}` for Hermitian positive definite `S`.
fn inv_sqrt(s: &CMat) -> CMat {
    let eig = s.clone().symmetric_eigen();
    let v = &eig.eigenvectors;
    let diag = CMat::from_fn(s.nrows(), s.nrows(), |i, j| {
        if i == j {
            c64(1.0 / eig.eigenvalues[i].sqrt(), 0.0)
        } else {
            c64(0.0, 0.0)
        }
    });
    v * diag * v.adjoint()
}

/// Random Kraus set `K_j = G_j S^{-1/2}`, `S = Σ G_j†G_j`, so `Σ K_j†K_j = I`.
pub fn kraus<R: Rng + ?Sized>(rng: &mut R, d: usize, rank: usize) -> Result<KrausSet> {
    let gs: Vec<CMat> = (0..rank.max(1)).map(|_| ginibre(rng, d, d)).collect();
    let s = gs.iter().fold(CMat::zeros(d, d), |acc, g| acc + g.adjoint() * g);
    let w = inv_sqrt(&s);
    KrausSet::from_matrices(gs.into_iter().map(|g| g * &w).collect())
}

/// Random CPTP channel with `1..=d²` Kraus operators.
pub fn channel<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Result<SuperOperator> {
    let rank = rng.random_range(1..=d * d);
    Ok(kraus_to_superop(&kraus(rng, d, rank)?))
}

/// Trace-nonincreasing variant: a random channel scaled by `c ∈ [0.5, 1]`.
pub fn subunital_channel<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Result<SuperOperator> {
    let c: f64 = rng.random_range(0.5..=1.0);
    Ok(channel(rng, d)?.scale(c64(c, 0.0)))
}

/// `ρ ↦ UρU†` for Haar `U`.
pub fn unitary_channel<R: Rng + ?Sized>(rng: &mut R, d: usize) -> SuperOperator {
    SuperOperator::conjugation(&unitary(rng, d))
}

/// Random GKLS generator with `jumps` jump operators, normalized so `‖H‖ = 1`
/// and each `‖L_k‖ = jump_scale`.
pub fn gkls<R: Rng + ?Sized>(rng: &mut R, d: usize, jumps: usize, jump_scale: f64) -> Result<SuperOperator> {
    let h = hermitian(rng, d);
    let h = &h * c64(1.0 / op_norm(&h).max(1e-300), 0.0);
    let ls = (0..jumps)
        .map(|_| {
            let l = ginibre(rng, d, d);
            &l * c64(jump_scale / op_norm(&l).max(1e-300), 0.0)
        })
        .collect();
    gkls_to_superop(&GklsGenerator::new(h, ls)?)
}

/// Random matrix scaled to operator norm `scale`.
pub fn scaled<R: Rng + ?Sized>(rng: &mut R, d: usize, scale: f64) -> CMat {
    let g = ginibre(rng, d, d);
    &g * c64(scale / op_norm(&g).max(1e-300), 0.0)
}

/// Random normal matrix `U diag(λ) U†` with `|Re λ|, |Im λ| ≤ scale`.
pub fn normal<R: Rng + ?Sized>(rng: &mut R, d: usize, scale: f64) -> CMat {
    let u = unitary(rng, d);
    let diag = CMat::from_fn(d, d, |i, j| {
        if i == j {
            c64(rng.random_range(-scale..=scale), rng.random_range(-scale..=scale))
        } else {
            c64(0.0, 0.0)
        }
    });
    &u * diag * u.adjoint()
}

/// Random invertible matrix with smallest singular value at least `floor`.
pub fn invertible<R: Rng + ?Sized>(rng: &mut R, d: usize, floor: f64) -> CMat {
    loop {
        let a = ginibre(rng, d, d);
        if crate::linalg::min_singular_value(&a) >= floor {
            return a;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::identity;
    use crate::superop::{is_cptp_default, CpVerdict};

    #[test]
    fn kraus_is_trace_preserving() {
        let mut r = rng(3);
        for d in 1..=3 {
            let k = kraus(&mut r, d, d).unwrap();
            assert!((k.effect() - identity(d)).norm() < 1e-12);
        }
    }

    #[test]
    fn channels_are_cptp() {
        let mut r = rng(11);
        for _ in 0..20 {
            assert_eq!(is_cptp_default(&channel(&mut r, 3).unwrap()), CpVerdict::Cptp);
        }
        assert!(is_cptp_default(&subunital_channel(&mut r, 2).unwrap()).is_cp());
    }

    #[test]
    fn unitary_is_unitary() {
        let mut r = rng(5);
        let u = unitary(&mut r, 3);
        assert!((u.adjoint() * &u - identity(3)).norm() < 1e-12);
    }

    #[test]
    fn same_seed_same_draw() {
        assert_eq!(ginibre(&mut rng(42), 2, 2), ginibre(&mut rng(42), 2, 2));
    }
}
