//! Primary logarithms on an explicit branch cut, the commutator
//! superstructure `ad_A`, and `f(ad_A)`, `g(ad_A) = f(ad_A)⁻¹`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Result, ZenoError};
use crate::linalg::{self, c64, eigenvalues, expm, identity, kron, logm_principal, op_norm, vec, CMat, CVec, C64};

/// Relative spectral clearance a cut must keep from the input spectrum.
pub const CUT_CLEARANCE_TOL: f64 = 1e-8;
/// `E` is treated as singular below `1e-12·max(1, ‖E‖)` in eigenvalue modulus.
pub const SINGULAR_TOL: f64 = 1e-12;
pub const SING_TOL: f64 = 1e-10;
pub const KERNEL_TOL: f64 = 1e-10;
pub const ROUNDTRIP_TOL: f64 = 1e-8;
/// Points on `s ∈ (0, 1]` where `bch_log` re-checks the cut clearance.
pub const BCH_PATH_POINTS: usize = 16;

/// The half-line `{r e^{iφ}, r ≥ 0}`; logarithms take `arg ∈ (φ, φ + 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchCut {
    angle: f64,
}

impl BranchCut {
    pub fn new(angle: f64) -> Result<Self> {
        if !angle.is_finite() {
            return Err(ZenoError::InvalidInput("cut angle must be finite".into()));
        }
        Ok(BranchCut { angle })
    }

    /// The negative real axis, i.e. the principal branch.
    pub fn principal() -> Self {
        BranchCut { angle: -PI }
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// Same ray with the angle folded into `(−2π, 0]`.
    pub fn normalized(&self) -> Self {
        let mut a = self.angle.rem_euclid(2.0 * PI);
        if a > 0.0 {
            a -= 2.0 * PI;
        }
        BranchCut { angle: a }
    }

    /// Euclidean distance from `z` to the cut ray.
    pub fn clearance(&self, z: C64) -> f64 {
        let w = z * C64::from_polar(1.0, -self.angle);
        if w.re >= 0.0 {
            w.im.abs()
        } else {
            z.norm()
        }
    }

    pub fn min_clearance(&self, eigs: &[C64]) -> f64 {
        eigs.iter().map(|&z| self.clearance(z)).fold(f64::INFINITY, f64::min)
    }

    /// Scalar logarithm on this branch.
    pub fn log(&self, z: C64) -> C64 {
        let shift = self.angle + PI;
        (z * C64::from_polar(1.0, -shift)).ln() + c64(0.0, shift)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CutSpec {
    Auto,
    Fixed(BranchCut),
}

#[derive(Debug, Clone)]
pub struct PrimaryLog {
    pub matrix: CMat,
    pub cut: BranchCut,
    /// Distance from the input spectrum to the cut.
    pub clearance: f64,
}

/// Cut through the middle of the largest angular gap of the spectrum,
/// normalized to `(−2π, 0]`.
pub fn auto_cut(eigs: &[C64]) -> Result<BranchCut> {
    if eigs.is_empty() {
        return Ok(BranchCut::principal().normalized());
    }
    let mut args: Vec<f64> = eigs.iter().map(|z| z.arg()).collect();
    args.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut best = (args[0] + 2.0 * PI - args[args.len() - 1], args[args.len() - 1]);
    for w in args.windows(2) {
        let gap = w[1] - w[0];
        if gap > best.0 {
            best = (gap, w[0]);
        }
    }
    BranchCut::new(best.1 + 0.5 * best.0).map(|c| c.normalized())
}

fn scale_of(e: &CMat) -> f64 {
    op_norm(e).max(1.0)
}

/// Primary logarithm of `e` with the spectrum kept off the cut.
pub fn primary_log(e: &CMat, cut: CutSpec) -> Result<PrimaryLog> {
    if e.nrows() != e.ncols() {
        return Err(ZenoError::Dimension("primary_log needs a square matrix".into()));
    }
    let eigs = eigenvalues(e);
    let scale = scale_of(e);
    if let Some(z) = eigs.iter().find(|z| z.norm() <= SINGULAR_TOL * scale) {
        return Err(ZenoError::Singular(format!("eigenvalue {:.3e} at the origin; no logarithm exists", z.norm())));
    }
    let cut = match cut {
        CutSpec::Auto => auto_cut(&eigs)?,
        CutSpec::Fixed(c) => c,
    };
    let clearance = cut.min_clearance(&eigs);
    if !(clearance > CUT_CLEARANCE_TOL * scale) {
        return Err(ZenoError::NoBranchCut(format!(
            "cut at angle {:.6} passes within {:.3e} of the spectrum",
            cut.angle(),
            clearance
        )));
    }
    Ok(PrimaryLog { matrix: log_on_cut(e, &cut), cut, clearance })
}

fn log_on_cut(e: &CMat, cut: &BranchCut) -> CMat {
    let shift = cut.angle() + PI;
    let n = e.nrows();
    let rotated = e * C64::from_polar(1.0, -shift);
    logm_principal(&rotated) + identity(n) * c64(0.0, shift)
}

/// `ad_A = [A, •]` as a matrix on column-stacked vectors.
#[derive(Debug, Clone)]
pub struct AdSuperstructure {
    pub base: CMat,
    pub ad_matrix: CMat,
}

impl AdSuperstructure {
    pub fn apply(&self, x: &CMat) -> CMat {
        linalg::unvec(&(&self.ad_matrix * vec(x)), self.base.nrows())
    }
}

pub fn build_ad(a: &CMat) -> AdSuperstructure {
    let n = a.nrows();
    let id = identity(n);
    let ad_matrix = kron(&id, a) - kron(&a.transpose(), &id);
    AdSuperstructure { base: a.clone(), ad_matrix }
}

/// Matrix of `X ↦ e^{−A} · top-right block of exp([[A, X], [0, A]])`,
/// which is `f(ad_A)` with `f(z) = (1 − e^{−z})/z`.
pub fn f_of_ad(a: &CMat) -> CMat {
    let n = a.nrows();
    let exp_neg = expm(&(-a));
    let mut block = CMat::zeros(2 * n, 2 * n);
    block.view_mut((0, 0), (n, n)).copy_from(a);
    block.view_mut((n, n), (n, n)).copy_from(a);
    let columns: Vec<CVec> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (r, c) = (idx % n, idx / n);
            let mut m = block.clone();
            m[(r, n + c)] = c64(1.0, 0.0);
            let top_right = expm(&m).view((0, n), (n, n)).into_owned();
            vec(&(&exp_neg * top_right))
        })
        .collect();
    CMat::from_columns(&columns)
}

/// `f(M)` as the top-right block of `exp([[−M, I], [0, 0]])`.
pub fn f_of_matrix(m: &CMat) -> CMat {
    let n = m.nrows();
    let mut block = CMat::zeros(2 * n, 2 * n);
    block.view_mut((0, 0), (n, n)).copy_from(&(-m));
    block.view_mut((0, n), (n, n)).copy_from(&identity(n));
    expm(&block).view((0, n), (n, n)).into_owned()
}

/// `g(M) = f(M)⁻¹`.
pub fn g_of_matrix(m: &CMat) -> Result<CMat> {
    linalg::inverse(&f_of_matrix(m)).ok_or_else(|| ZenoError::FNotInvertible("f(M) is singular".into()))
}

/// Eigenvalue of `ad_A` nearest a nonzero multiple of `2πi`.
fn nearest_f_zero(a: &CMat) -> (C64, i64, f64) {
    let eigs = eigenvalues(a);
    let mut best = (c64(0.0, 0.0), 1, f64::INFINITY);
    for x in &eigs {
        for y in &eigs {
            let z = x - y;
            let k = (z.im / (2.0 * PI)).round() as i64;
            let k = if k == 0 { if z.im >= 0.0 { 1 } else { -1 } } else { k };
            let dist = (z - c64(0.0, 2.0 * PI * k as f64)).norm();
            if dist < best.2 {
                best = (z, k, dist);
            }
        }
    }
    best
}

/// Prepared solver for `g(ad_A)` applied to arbitrary operators.
#[derive(Debug, Clone)]
pub struct GOfAd {
    dim: usize,
    f_matrix: CMat,
    lu: nalgebra::LU<C64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl GOfAd {
    pub fn new(a: &CMat) -> Result<Self> {
        let f_matrix = f_of_ad(a);
        let norm = op_norm(&f_matrix);
        let smin = linalg::min_singular_value(&f_matrix);
        if !(smin > SING_TOL * norm) {
            let (z, k, dist) = nearest_f_zero(a);
            return Err(ZenoError::FNotInvertible(format!(
                "σ_min = {smin:.3e}; ad eigenvalue {:.6}{:+.6}i lies {dist:.3e} from the zero 2πi·{k} of f",
                z.re, z.im
            )));
        }
        let lu = f_matrix.clone().lu();
        Ok(GOfAd { dim: a.nrows(), f_matrix, lu })
    }

    pub fn f_matrix(&self) -> &CMat {
        &self.f_matrix
    }

    pub fn apply(&self, l: &CMat) -> Result<CMat> {
        if l.nrows() != self.dim || l.ncols() != self.dim {
            return Err(ZenoError::Dimension("g(ad_A) operand has the wrong shape".into()));
        }
        let y = self
            .lu
            .solve(&vec(l))
            .ok_or_else(|| ZenoError::FNotInvertible("LU solve failed".into()))?;
        Ok(linalg::unvec(&y, self.dim))
    }
}

/// `g(ad_A)(L)` by a linear solve against the `f(ad_A)` matrix.
pub fn g_of_ad_apply(a: &CMat, l: &CMat) -> Result<CMat> {
    GOfAd::new(a)?.apply(l)
}

/// Primary log of `E·exp((t/n)L)` on the branch of `primary_log(E, cut)`.
pub fn bch_log(e: &CMat, l: &CMat, t: f64, n: u64, cut: CutSpec) -> Result<PrimaryLog> {
    if n == 0 {
        return Err(ZenoError::InvalidInput("n must be at least 1".into()));
    }
    if l.shape() != e.shape() {
        return Err(ZenoError::Dimension("E and L must have the same shape".into()));
    }
    let base = primary_log(e, cut)?;
    if t == 0.0 {
        return Ok(base);
    }
    let h = t / n as f64;
    let cut = base.cut;
    let scale = scale_of(e);
    let mut clearance = f64::INFINITY;
    for k in 1..=BCH_PATH_POINTS {
        let s = k as f64 / BCH_PATH_POINTS as f64;
        let z = e * expm(&(l * c64(s * h, 0.0)));
        let c = cut.min_clearance(&eigenvalues(&z));
        if !(c > CUT_CLEARANCE_TOL * scale) {
            return Err(ZenoError::BranchJump(format!(
                "spectrum of E·exp(s(t/n)L) reaches the cut at s = {s:.4} (n = {n}); increase n"
            )));
        }
        clearance = clearance.min(c);
    }
    let z = e * expm(&(l * c64(h, 0.0)));
    let log = log_on_cut(&z, &cut);
    let back = expm(&log);
    let err = op_norm(&(&back - &z));
    if !(err <= ROUNDTRIP_TOL * op_norm(&z).max(1.0)) {
        return Err(ZenoError::BranchJump(format!("exp round trip off by {err:.3e} (n = {n}); increase n")));
    }
    Ok(PrimaryLog { matrix: log, cut, clearance })
}

/// Orthogonal projection onto `ker E`, from singular values below
/// `1e-10·σ_max`.
pub fn kernel_projection(e: &CMat) -> CMat {
    let n = e.ncols();
    let svd = e.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V†");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let mut q = CMat::zeros(n, n);
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s <= KERNEL_TOL * smax {
            let row = v_t.row(i);
            q += row.adjoint() * row;
        }
    }
    // rank-deficient inputs have fewer singular values than columns
    let found = svd.singular_values.len();
    if found < n {
        let mut full = identity(n);
        for i in 0..found {
            let row = v_t.row(i);
            full -= row.adjoint() * row;
        }
        return full;
    }
    if smax == 0.0 {
        return identity(n);
    }
    q
}
