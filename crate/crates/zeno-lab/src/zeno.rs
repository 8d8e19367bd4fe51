//! Zeno limits of kick cycles `(E_m e^{(t/mn)L} ⋯ E_1 e^{(t/mn)L})ⁿ`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, ZenoError};
use crate::linalg::{self, c64, identity, loglog_slope, matrix_power, op_norm, zeros, CMat};
use crate::spectral::{decompose_default, SpectralDecomposition};
use crate::superop::{is_cptp_default, superop_exp, SuperOperator};

/// Idempotency and Hermiticity tolerance for projection inputs.
pub const PROJECTION_TOL: f64 = 1e-9;

/// Ordered kicks `[E_1, …, E_m]` and the generator acting between them.
#[derive(Debug, Clone)]
pub struct KickCycle {
    kicks: Vec<SuperOperator>,
    generator: SuperOperator,
}

impl KickCycle {
    /// Checks dimensions and that every kick is completely positive.
    pub fn new(kicks: Vec<SuperOperator>, generator: SuperOperator) -> Result<Self> {
        let cycle = KickCycle::new_unchecked(kicks, generator)?;
        for (j, k) in cycle.kicks.iter().enumerate() {
            if !is_cptp_default(k).is_cp() {
                return Err(ZenoError::InvalidInput(format!("kick {} is not completely positive", j + 1)));
            }
        }
        Ok(cycle)
    }

    /// Skips the CP check, for cycles of arbitrary linear maps.
    pub fn new_unchecked(kicks: Vec<SuperOperator>, generator: SuperOperator) -> Result<Self> {
        if kicks.is_empty() {
            return Err(ZenoError::InvalidInput("a kick cycle needs at least one kick".into()));
        }
        let d = generator.dim();
        if kicks.iter().any(|k| k.dim() != d) {
            return Err(ZenoError::Dimension("kicks and generator act on different dimensions".into()));
        }
        Ok(KickCycle { kicks, generator })
    }

    pub fn single(kick: SuperOperator, generator: SuperOperator) -> Result<Self> {
        KickCycle::new(vec![kick], generator)
    }

    pub fn kicks(&self) -> &[SuperOperator] {
        &self.kicks
    }

    pub fn generator(&self) -> &SuperOperator {
        &self.generator
    }

    pub fn m(&self) -> usize {
        self.kicks.len()
    }

    pub fn dim(&self) -> usize {
        self.generator.dim()
    }

    /// `E = E_m ⋯ E_1`.
    pub fn product(&self) -> CMat {
        self.kicks.iter().fold(identity(self.dim() * self.dim()), |acc, k| k.matrix() * acc)
    }
}

#[derive(Debug, Clone)]
pub struct ZenoLimit {
    pub product: CMat,
    pub decomposition: SpectralDecomposition,
    pub lbar: CMat,
    pub lz: CMat,
    /// True when the peripheral spectrum is empty and the dynamics decays.
    pub decays_to_zero: bool,
}

impl ZenoLimit {
    pub fn peripheral_projection(&self) -> &CMat {
        &self.decomposition.peripheral_projection
    }

    pub fn peripheral_part(&self) -> &CMat {
        &self.decomposition.peripheral_part
    }
}

/// Averaged generator `L̄` and Zeno generator `L_Z = Σ_k P_k L̄ P_k` over
/// peripheral clusters.
pub fn zeno_generator(cycle: &KickCycle) -> Result<ZenoLimit> {
    let n = cycle.dim() * cycle.dim();
    let l = cycle.generator.matrix();
    let kicks: Vec<&CMat> = cycle.kicks.iter().map(|k| k.matrix()).collect();
    let m = kicks.len();
    // prefix[j] = E_j ⋯ E_1, suffix[j] = E_m ⋯ E_{j+1} (0-based kick j+1)
    let mut prefix = vec![identity(n)];
    for k in &kicks {
        let next = *k * prefix.last().unwrap();
        prefix.push(next);
    }
    let mut suffix = vec![identity(n); m + 1];
    for j in (0..m).rev() {
        suffix[j] = &suffix[j + 1] * kicks[j];
    }
    let product = prefix[m].clone();
    let decomposition = decompose_default(&product)?;

    let mut inner = zeros(n);
    for j in 1..m {
        inner += &suffix[j] * l * &prefix[j];
    }
    let lbar = if m == 1 {
        l.clone()
    } else {
        (l + &decomposition.peripheral_inverse * inner) / c64(m as f64, 0.0)
    };
    let lz = decomposition
        .peripheral()
        .fold(zeros(n), |acc, c| acc + &c.projection * &lbar * &c.projection);
    let decays_to_zero = !decomposition.has_peripheral();
    Ok(ZenoLimit { product, decomposition, lbar, lz, decays_to_zero })
}

/// One cycle `Ẽ_n = E_m U ⋯ E_1 U` with `U = exp((t/mn)L)`.
pub fn kicked_step(cycle: &KickCycle, t: f64, n: u64) -> Result<SuperOperator> {
    if n == 0 {
        return Err(ZenoError::InvalidInput("n must be at least 1".into()));
    }
    if !(t >= 0.0) {
        return Err(ZenoError::InvalidInput(format!("time must be nonnegative, got {t}")));
    }
    let dt = t / (cycle.m() as f64 * n as f64);
    let u = superop_exp(&cycle.generator, dt)?;
    let step = cycle
        .kicks
        .iter()
        .fold(identity(cycle.dim() * cycle.dim()), |acc, k| k.matrix() * u.matrix() * acc);
    SuperOperator::new(cycle.dim(), step)
}

/// `Ẽ_nⁿ` by repeated squaring.
pub fn kicked_evolution(cycle: &KickCycle, t: f64, n: u64) -> Result<SuperOperator> {
    Ok(kicked_step(cycle, t, n)?.pow(n))
}

/// `E_φⁿ exp(t L_Z)` with `E_φ⁰ = I`.
pub fn zeno_limit_map(zl: &ZenoLimit, t: f64, n: u64) -> Result<SuperOperator> {
    let d = (zl.lz.nrows() as f64).sqrt().round() as usize;
    let lz = SuperOperator::new(d, zl.lz.clone())?;
    let e = superop_exp(&lz, t)?;
    SuperOperator::new(d, zl.decomposition.peripheral_power(n) * e.matrix())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: u64) -> Self {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScanPoint {
    pub n: u64,
    pub distance: f64,
    pub parity: Parity,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceScan {
    pub t: f64,
    pub points: Vec<ScanPoint>,
    pub odd_slope: Option<f64>,
    pub even_slope: Option<f64>,
}

impl ConvergenceScan {
    pub fn distance_at(&self, n: u64) -> Option<f64> {
        self.points.iter().find(|p| p.n == n).map(|p| p.distance)
    }
}

fn check_n_list(n_list: &[u64]) -> Result<()> {
    if n_list.is_empty() || n_list[0] == 0 || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ZenoError::InvalidInput("n_list must be strictly increasing positive integers".into()));
    }
    Ok(())
}

/// `‖Ẽ_nⁿ − E_φⁿ e^{tL_Z}‖` for each `n`, with log-log slopes per parity.
pub fn convergence_scan(cycle: &KickCycle, t: f64, n_list: &[u64]) -> Result<ConvergenceScan> {
    check_n_list(n_list)?;
    let zl = zeno_generator(cycle)?;
    let limit_exp = superop_exp(&SuperOperator::new(cycle.dim(), zl.lz.clone())?, t)?;
    let points = n_list
        .par_iter()
        .map(|&n| {
            let evolved = kicked_evolution(cycle, t, n)?;
            let limit = zl.decomposition.peripheral_power(n) * limit_exp.matrix();
            Ok(ScanPoint { n, distance: op_norm(&(evolved.matrix() - limit)), parity: Parity::of(n) })
        })
        .collect::<Result<Vec<_>>>()?;
    let slope = |parity: Parity| {
        let pts: Vec<(f64, f64)> =
            points.iter().filter(|p| p.parity == parity).map(|p| (p.n as f64, p.distance)).collect();
        loglog_slope(&pts)
    };
    Ok(ConvergenceScan { t, odd_slope: slope(Parity::Odd), even_slope: slope(Parity::Even), points })
}

fn check_hermitian_projection(p: &CMat, label: &str) -> Result<()> {
    let scale = op_norm(p).max(1.0);
    let idem = op_norm(&(p * p - p));
    let herm = op_norm(&(p - p.adjoint()));
    if idem > PROJECTION_TOL * scale || herm > PROJECTION_TOL * scale {
        return Err(ZenoError::NotProjection(format!(
            "{label}: ‖P² − P‖ = {idem:.3e}, ‖P − P†‖ = {herm:.3e}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct Intersection {
    pub projection: CMat,
    /// Spectrum of the product `P_m ⋯ P_1`.
    pub eigenvalues: Vec<linalg::C64>,
    /// `max_j max(‖P_φ P_j − P_φ‖, ‖P_j P_φ − P_φ‖)`.
    pub residual: f64,
}

/// Projection onto the intersection of ranges, as the `λ = 1` spectral
/// projection of `P_m ⋯ P_1`.
pub fn hermitian_intersection(projs: &[CMat]) -> Result<Intersection> {
    let first = projs.first().ok_or_else(|| ZenoError::InvalidInput("no projections given".into()))?;
    let n = first.nrows();
    for (j, p) in projs.iter().enumerate() {
        if p.nrows() != n || p.ncols() != n {
            return Err(ZenoError::Dimension("projections differ in size".into()));
        }
        check_hermitian_projection(p, &format!("projection {}", j + 1))?;
    }
    let product = projs.iter().fold(identity(n), |acc, p| p * acc);
    let dec = decompose_default(&product)?;
    let projection = dec
        .peripheral()
        .filter(|c| (c.eigenvalue - c64(1.0, 0.0)).norm() <= dec.peripheral_tol.max(1e-9))
        .fold(zeros(n), |acc, c| acc + &c.projection);
    let residual = projs
        .iter()
        .map(|p| op_norm(&(&projection * p - &projection)).max(op_norm(&(p * &projection - &projection))))
        .fold(0.0, f64::max);
    let eigenvalues = dec.clusters.iter().flat_map(|c| c.members.clone()).collect();
    Ok(Intersection { projection, eigenvalues, residual })
}

#[derive(Debug, Clone)]
pub struct ProjectiveLimit {
    pub peripheral_projection: CMat,
    pub lz: CMat,
    /// `P_φ exp(t P_φ L P_φ)`.
    pub limit: CMat,
    /// Distance of the cycled product at the requested `n`.
    pub distance: f64,
}

/// Zeno limit for a cycle of Hermitian CP superprojections.
pub fn corollary2_limit(projs: &[SuperOperator], l: &SuperOperator, t: f64, n: u64) -> Result<ProjectiveLimit> {
    let mats: Vec<CMat> = projs.iter().map(|p| p.matrix().clone()).collect();
    let pphi = hermitian_intersection(&mats)?.projection;
    let lz = &pphi * l.matrix() * &pphi;
    let d = l.dim();
    let e = superop_exp(&SuperOperator::new(d, lz.clone())?, t)?;
    let limit = &pphi * e.matrix();
    let cycle = KickCycle::new_unchecked(projs.to_vec(), l.clone())?;
    let evolved = kicked_evolution(&cycle, t, n)?;
    let distance = op_norm(&(evolved.matrix() - &limit));
    Ok(ProjectiveLimit { peripheral_projection: pphi, lz, limit, distance })
}

#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticCheck {
    pub points: Vec<(u64, f64)>,
    pub slope: Option<f64>,
}

/// `‖E_nⁿ − (P E_n P)ⁿ‖` along a sequence of operators.
pub fn asymptotic_projection_check<F>(factory: F, p: &CMat, n_list: &[u64]) -> Result<AsymptoticCheck>
where
    F: Fn(u64) -> Result<CMat> + Sync,
{
    check_n_list(n_list)?;
    let idem = op_norm(&(p * p - p));
    if idem > PROJECTION_TOL * op_norm(p).max(1.0) {
        return Err(ZenoError::NotProjection(format!("‖P² − P‖ = {idem:.3e}")));
    }
    let points = n_list
        .par_iter()
        .map(|&n| {
            let e = factory(n)?;
            let full = matrix_power(&e, n);
            let projected = matrix_power(&(p * &e * p), n);
            Ok((n, op_norm(&(full - projected))))
        })
        .collect::<Result<Vec<_>>>()?;
    let pts: Vec<(f64, f64)> = points.iter().map(|&(n, r)| (n as f64, r)).collect();
    Ok(AsymptoticCheck { slope: loglog_slope(&pts), points })
}
