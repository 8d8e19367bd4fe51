//! Closed-form error bounds and their dominance checks against measured
//! quantities. All norms are spectral (largest singular value).

use std::collections::BTreeMap;
use std::f64::consts::{E, PI};

use serde::Serialize;

use crate::error::{Result, ZenoError};
use crate::linalg::{c64, condition_number, eigenvalues, expm, matrix_power, op_norm, spectral_radius, CMat, C64};
use crate::matfunc::{g_of_matrix, primary_log, BranchCut, CutSpec, GOfAd};
use crate::spectral::{decompose_default, decompose_matrix, default_cluster_tol, schur_split, SpectralDecomposition, PERIPHERAL_TOL, SEMISIMPLE_TOL};
use crate::superop::SuperOperator;
use crate::zeno::{kicked_step, KickCycle};

/// Relative slack in `holds`.
pub const HOLDS_REL_TOL: f64 = 1e-12;
/// Largest `n₀` searched by [`n0_mu_tradeoff`].
pub const N0_CAP: u64 = 1 << 62;
/// Nodes per contour piece in the quadrature cross-checks.
pub const QUAD_NODES: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundStatus {
    Applicable,
    Inapplicable,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub analytic: f64,
    pub measured: f64,
    pub holds: bool,
    pub status: BoundStatus,
    /// Why the bound does not apply, if it does not.
    pub note: Option<String>,
    pub inputs: BTreeMap<String, f64>,
}

impl BoundReport {
    pub fn new(name: &str, analytic: f64, measured: f64) -> Self {
        BoundReport {
            name: name.to_string(),
            analytic,
            measured,
            holds: dominates(analytic, measured),
            status: BoundStatus::Applicable,
            note: None,
            inputs: BTreeMap::new(),
        }
    }

    pub fn inapplicable(name: &str, measured: f64, note: impl Into<String>) -> Self {
        BoundReport {
            name: name.to_string(),
            analytic: f64::INFINITY,
            measured,
            holds: true,
            status: BoundStatus::Inapplicable,
            note: Some(note.into()),
            inputs: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.inputs.insert(key.to_string(), value);
        self
    }

    pub fn is_applicable(&self) -> bool {
        self.status == BoundStatus::Applicable
    }
}

pub fn dominates(analytic: f64, measured: f64) -> bool {
    measured <= analytic * (1.0 + HOLDS_REL_TOL)
}

/// `‖E‖ ≤ √d` for any quantum operation on a `d`-level system.
pub fn bound_channel_norm(d: usize) -> f64 {
    (d as f64).sqrt()
}

/// `‖Ẽ_n − E‖ ≤ d^{m/2} (t/n)‖L‖ e^{(t/n)‖L‖}`.
pub fn bound_cycle_perturbation(d: usize, m: usize, t: f64, n: u64, norm_l: f64) -> f64 {
    let s = t / n as f64 * norm_l;
    (d as f64).powf(m as f64 / 2.0) * s * s.exp()
}

pub fn cycle_perturbation_check(cycle: &KickCycle, t: f64, n: u64) -> Result<BoundReport> {
    let norm_l = op_norm(cycle.generator().matrix());
    let step = kicked_step(cycle, t, n)?;
    let measured = op_norm(&(step.matrix() - cycle.product()));
    let analytic = bound_cycle_perturbation(cycle.dim(), cycle.m(), t, n, norm_l);
    Ok(BoundReport::new("cycle_perturbation", analytic, measured)
        .with("d", cycle.dim() as f64)
        .with("m", cycle.m() as f64)
        .with("t", t)
        .with("n", n as f64)
        .with("norm_l", norm_l))
}

/// Constants of the power bound `‖E'^k‖ ≤ K μ^k`.
#[derive(Debug, Clone, Serialize)]
pub struct PowerBound {
    pub d: usize,
    pub mu: f64,
    pub mu0: f64,
    /// Spectral-radius threshold: `√(μ μ₀)`, or `μ/2` when `μ₀ = 0`.
    pub mu1: f64,
    /// `e^{2√d/μ₁+1} (D/(e ln(μ/μ₁)))^D` with `D = d² − 1`.
    pub k: f64,
    /// Prefactor of the tighter form `K k^D μ^k`, `K = e^{2√d/μ+1}`.
    pub k_tight: f64,
    /// The closed form in terms of `μ₀` is undefined because `μ₀ = 0`.
    pub vacuous: bool,
}

impl PowerBound {
    pub fn exponent(&self) -> i32 {
        (self.d * self.d - 1) as i32
    }

    pub fn bound(&self, k: u64) -> f64 {
        self.k * self.mu.powf(k as f64)
    }

    pub fn tight_bound(&self, k: u64) -> f64 {
        self.k_tight * (k as f64).powi(self.exponent()) * self.mu.powf(k as f64)
    }
}

/// `K = e^{2√(d/μμ₀)+1} (2D/(e ln(μ/μ₀)))^D`, `D = d² − 1`.
pub fn power_bound_k_remark(d: usize, mu: f64, mu0: f64) -> f64 {
    let dd = (d * d - 1) as f64;
    (2.0 * (d as f64 / (mu * mu0)).sqrt() + 1.0).exp() * (2.0 * dd / (E * (mu / mu0).ln())).powf(dd)
}

fn power_bound_k_general(d: usize, mu: f64, mu1: f64) -> f64 {
    let dd = (d * d - 1) as f64;
    (2.0 * (d as f64).sqrt() / mu1 + 1.0).exp() * (dd / (E * (mu / mu1).ln())).powf(dd)
}

pub fn power_bound_constants(e_limit: &SuperOperator, mu: f64) -> Result<PowerBound> {
    let dec = decompose_default(e_limit.matrix())?;
    power_bound_from_mu0(e_limit.dim(), dec.mu0, mu)
}

pub fn power_bound_from_mu0(d: usize, mu0: f64, mu: f64) -> Result<PowerBound> {
    if !(mu > mu0 && mu < 1.0) {
        return Err(ZenoError::Precondition(format!("μ = {mu} must lie in (μ₀, 1) with μ₀ = {mu0}")));
    }
    let vacuous = mu0 == 0.0;
    let mu1 = if vacuous { mu / 2.0 } else { (mu * mu0).sqrt() };
    let k = power_bound_k_general(d, mu, mu1);
    let k_tight = (2.0 * (d as f64).sqrt() / mu + 1.0).exp();
    Ok(PowerBound { d, mu, mu0, mu1, k, k_tight, vacuous })
}

/// `E' = E − P E P`.
pub fn off_peripheral(e: &CMat, p: &CMat) -> CMat {
    e - p * e * p
}

/// Checks `‖E'^k‖ ≤ Kμ^k` (and the tighter form) for `k = 1..=k_max`.
/// Reports the worst ratio of measured to bound, so `analytic = 1`.
pub fn power_bound_check(pb: &PowerBound, e_n: &CMat, p: &CMat, k_max: u64) -> Vec<BoundReport> {
    let ep = off_peripheral(e_n, p);
    let r = spectral_radius(&ep);
    let mut worst = 0.0f64;
    let mut worst_tight = 0.0f64;
    let mut pow = ep.clone();
    for k in 1..=k_max {
        let nrm = op_norm(&pow);
        worst = worst.max(nrm / pb.bound(k));
        worst_tight = worst_tight.max(nrm / pb.tight_bound(k));
        pow = &pow * &ep;
    }
    let general = if r <= pb.mu1 {
        BoundReport::new("power_bound", 1.0, worst)
    } else {
        BoundReport::inapplicable("power_bound", worst, format!("r(E') = {r} exceeds μ₁ = {}", pb.mu1))
    };
    let tight = if r <= pb.mu {
        BoundReport::new("power_bound_tight", 1.0, worst_tight)
    } else {
        BoundReport::inapplicable("power_bound_tight", worst_tight, format!("r(E') = {r} exceeds μ = {}", pb.mu))
    };
    [general, tight]
        .into_iter()
        .map(|b| {
            b.with("d", pb.d as f64)
                .with("mu", pb.mu)
                .with("mu0", pb.mu0)
                .with("mu1", pb.mu1)
                .with("k", pb.k)
                .with("k_tight", pb.k_tight)
                .with("r_off", r)
                .with("k_max", k_max as f64)
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct N0Tradeoff {
    pub n0: u64,
    pub mu: f64,
    pub mu0: f64,
    /// Left side of the trade-off inequality at `n₀`.
    pub lhs: f64,
    /// `‖N_{n₀}‖` of the Schur form of `Θ_{n₀}`.
    pub nilpotent_norm: f64,
    /// `r(Ẽ'_n)` at `n₀` and `2n₀`.
    pub radius_at_n0: f64,
    pub radius_at_2n0: f64,
}

impl N0Tradeoff {
    pub fn dominance_holds(&self) -> bool {
        self.radius_at_n0 < self.mu && self.radius_at_2n0 < self.mu
    }
}

struct TradeoffCtx<'a> {
    cycle: &'a KickCycle,
    e: CMat,
    p: CMat,
    t: f64,
    mu0: f64,
    norm_l: f64,
}

impl TradeoffCtx<'_> {
    fn lhs(&self, n: u64) -> Result<(f64, f64)> {
        let d = self.cycle.dim() as f64;
        let m = self.cycle.m() as f64;
        let s = self.t / n as f64 * self.norm_l;
        let c = (1.0 + d) * d.powf(m / 2.0 + 2.0) * s * s.exp();
        let diff = kicked_step(self.cycle, self.t, n)?.matrix() - &self.e;
        let theta = &diff - &self.p * &diff * &self.p;
        let nn = op_norm(&schur_split(&theta).strict_upper);
        Ok((self.mu0 + c.powf(1.0 / (d * d)) * (1.0 + nn), nn))
    }

    fn off_radius(&self, n: u64) -> Result<f64> {
        let step = kicked_step(self.cycle, self.t, n)?;
        Ok(spectral_radius(&off_peripheral(step.matrix(), &self.p)))
    }
}

/// Smallest `n₀` with `μ₀ + ((1+d) d^{m/2+2} (t/n₀)‖L‖ e^{(t/n₀)‖L‖})^{1/d²} (1 + ‖N_{n₀}‖) ≤ μ`.
pub fn n0_mu_tradeoff(cycle: &KickCycle, mu: f64, t: f64) -> Result<N0Tradeoff> {
    let e = cycle.product();
    let dec = decompose_default(&e)?;
    let mu0 = dec.mu0;
    if !(mu > mu0 && mu < 1.0) {
        return Err(ZenoError::Precondition(format!("μ = {mu} must lie in (μ₀, 1) with μ₀ = {mu0}")));
    }
    let ctx = TradeoffCtx {
        cycle,
        e,
        p: dec.peripheral_projection.clone(),
        t,
        mu0,
        norm_l: op_norm(cycle.generator().matrix()),
    };
    let ok = |n: u64| -> Result<bool> { Ok(ctx.lhs(n)?.0 <= mu) };
    let mut hi = 1u64;
    while !ok(hi)? {
        if hi >= N0_CAP {
            return Err(ZenoError::Infeasible(format!(
                "no n₀ ≤ 2^62 satisfies the trade-off for μ = {mu}, μ₀ = {mu0}"
            )));
        }
        hi *= 2;
    }
    let mut lo = hi / 2;
    if hi > 1 {
        // lo fails, hi succeeds
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if ok(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
    let (lhs, nilpotent_norm) = ctx.lhs(hi)?;
    Ok(N0Tradeoff {
        n0: hi,
        mu,
        mu0,
        lhs,
        nilpotent_norm,
        radius_at_n0: ctx.off_radius(hi)?,
        radius_at_2n0: ctx.off_radius(hi.saturating_mul(2))?,
    })
}

/// `M_log = (r+R)(1 + √(ln²(r+R) + max(φ², (φ+2π)²)))` for the cut at angle `φ`.
pub fn m_log(r: f64, radius: f64, cut: BranchCut) -> f64 {
    let rho = r + radius;
    let phi = cut.angle();
    let arg2 = (phi * phi).max((phi + 2.0 * PI).powi(2));
    rho * (1.0 + (rho.ln().powi(2) + arg2).sqrt())
}

/// `(1/2π)∮|log z||dz|` over the circle of radius `r+R` plus both sides of the cut.
pub fn m_log_quadrature(r: f64, radius: f64, cut: BranchCut) -> f64 {
    let rho = r + radius;
    let phi = cut.angle();
    let h = 2.0 * PI / QUAD_NODES as f64;
    let circle: f64 = (0..QUAD_NODES)
        .map(|j| {
            let th = phi + (j as f64 + 0.5) * h;
            c64(rho.ln(), th).norm() * rho * h
        })
        .sum();
    circle / (2.0 * PI) + rho
}

/// Closed-form `M_g` on the rectangle `|Re z| ≤ r+R`, `|Im z| ≤ 2π−δ+R`.
pub fn m_g(r: f64, radius: f64, delta: f64) -> f64 {
    let a = r + radius;
    let b = 2.0 * PI - delta + radius;
    let y = delta - radius;
    let denom = if y.cos() > 0.0 { y.sin().abs() } else { 1.0 };
    2.0 / PI * (a * a + b * b).sqrt() * (b / 2.0 / (a / 2.0).tanh() + a / denom)
}

fn g_scalar(z: C64) -> C64 {
    if z.norm() < 1e-8 {
        return c64(1.0, 0.0) + z / 2.0;
    }
    z / (c64(1.0, 0.0) - (-z).exp())
}

/// `(1/2π)∮|g(z)||dz|` over the same rectangle.
pub fn m_g_quadrature(r: f64, radius: f64, delta: f64) -> f64 {
    let a = r + radius;
    let b = 2.0 * PI - delta + radius;
    let side = |z0: C64, z1: C64| -> f64 {
        let len = (z1 - z0).norm();
        let h = 1.0 / QUAD_NODES as f64;
        (0..QUAD_NODES)
            .map(|j| g_scalar(z0 + (z1 - z0) * ((j as f64 + 0.5) * h)).norm() * len * h)
            .sum()
    };
    let corners = [c64(a, -b), c64(a, b), c64(-a, b), c64(-a, -b)];
    let total: f64 = (0..4).map(|i| side(corners[i], corners[(i + 1) % 4])).sum();
    total / (2.0 * PI)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HSpec {
    /// Matrix logarithm on the given cut.
    Log(CutSpec),
    /// `g(z) = z/(1 − e^{−z})` on the strip `|Im z| < 2π`.
    G,
}

/// `β = (D P/R) Σ_{q<D} (N/R)^q` from the spectral decomposition of `X`.
pub fn beta(dec: &SpectralDecomposition, radius: f64) -> (f64, f64, f64) {
    let d = dec.size();
    let p = dec.clusters.iter().map(|c| op_norm(&c.projection)).fold(0.0, f64::max);
    let n = dec.clusters.iter().map(|c| op_norm(&c.nilpotent)).fold(0.0, f64::max);
    let ratio = n / radius;
    let series: f64 = (0..d).map(|q| ratio.powi(q as i32)).sum();
    (d as f64 * p / radius * series, p, n)
}

/// Perturbation bound `‖h(X+Y) − h(X)‖ ≤ M β² ‖Y‖ / (1 − β‖Y‖)`.
/// `radius` defaults to half the clearance of the spectrum from the
/// singularities of `h`.
pub fn matfunc_perturbation_bound(x: &CMat, y: &CMat, h: HSpec, radius: Option<f64>) -> Result<BoundReport> {
    if x.shape() != y.shape() || !x.is_square() {
        return Err(ZenoError::Dimension(format!("X is {:?}, Y is {:?}", x.shape(), y.shape())));
    }
    let eigs = eigenvalues(x);
    let r = eigs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let dec = decompose_matrix(x, default_cluster_tol(&eigs), PERIPHERAL_TOL)?;
    let ny = op_norm(y);
    let (name, delta, m, measured) = match h {
        HSpec::Log(spec) => {
            let base = primary_log(x, spec)?;
            let delta = base.clearance;
            let rad = radius.unwrap_or(0.5 * delta);
            let m = m_log(r, rad, base.cut);
            let measured = match primary_log(&(x + y), CutSpec::Fixed(base.cut)) {
                Ok(l) => op_norm(&(l.matrix - &base.matrix)),
                Err(_) => f64::INFINITY,
            };
            ("matfunc_log", delta, (m, rad, base.cut.angle()), measured)
        }
        HSpec::G => {
            let max_im = eigs.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
            let delta = 2.0 * PI - max_im;
            let rad = radius.unwrap_or(0.5 * delta);
            let m = m_g(r, rad, delta);
            let measured = match (g_of_matrix(&(x + y)), g_of_matrix(x)) {
                (Ok(a), Ok(b)) => op_norm(&(a - b)),
                _ => f64::INFINITY,
            };
            ("matfunc_g", delta, (m, rad, f64::NAN), measured)
        }
    };
    let (m, rad, angle) = m;
    if !(delta > 0.0) || !(rad > 0.0 && rad < delta) {
        return Err(ZenoError::Precondition(format!("contour radius R = {rad} must lie in (0, δ = {delta})")));
    }
    let (b, p, n) = beta(&dec, rad);
    let report = if b * ny < 1.0 {
        BoundReport::new(name, m * b * b * ny / (1.0 - b * ny), measured)
    } else {
        BoundReport::inapplicable(name, measured, format!("β‖Y‖ = {} ≥ 1", b * ny))
    };
    let mut report = report
        .with("D", dec.size() as f64)
        .with("r", r)
        .with("R", rad)
        .with("delta", delta)
        .with("M", m)
        .with("beta", b)
        .with("P", p)
        .with("N", n)
        .with("norm_y", ny);
    if angle.is_finite() {
        report = report.with("cut_angle", angle);
    }
    Ok(report)
}

/// Orthonormal basis of the range of a rank-`k` projection.
fn range_basis(p: &CMat, k: usize) -> CMat {
    let svd = p.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    CMat::from_fn(p.nrows(), k, |i, j| u[(i, idx[j])])
}

/// Quantities entering the BCH remainder bound for a diagonalizable `X`.
#[derive(Debug, Clone, Serialize)]
pub struct BchConstants {
    pub d: usize,
    pub alpha: f64,
    pub chi: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub radius: f64,
    pub m: f64,
    pub m_log: f64,
    pub m_g: f64,
    pub cut_angle: f64,
}

impl BchConstants {
    /// Denominator term `(1 + 2MD⁴/R²)(D² e^α/R) tχ‖Y‖ e^{tχ‖Y‖}`.
    pub fn denominator_term(&self, t: f64, norm_y: f64) -> f64 {
        let d = self.d as f64;
        let s = t * self.chi * norm_y;
        (1.0 + 2.0 * self.m * d.powi(4) / self.radius.powi(2)) * (d * d * self.alpha.exp() / self.radius) * s * s.exp()
    }

    pub fn bound(&self, t: f64, norm_y: f64) -> Option<f64> {
        let q = self.denominator_term(t, norm_y);
        if q >= 1.0 {
            return None;
        }
        let d = self.d as f64;
        let s = t * self.chi * norm_y;
        let num = 2.0 * self.m.powi(2) * d.powi(9) * self.alpha.exp() / self.radius.powi(4)
            * t
            * t
            * self.chi.powi(3)
            * norm_y
            * norm_y
            * s.exp();
        Some(num / (1.0 - q))
    }

    /// Largest `t` with denominator term equal to `target`.
    pub fn t_for_denominator(&self, norm_y: f64, target: f64) -> f64 {
        if norm_y == 0.0 {
            return f64::INFINITY;
        }
        let mut hi = 1.0;
        while self.denominator_term(hi, norm_y) < target {
            hi *= 2.0;
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.denominator_term(mid, norm_y) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

pub fn bch_constants(x: &CMat, radius: Option<f64>) -> Result<BchConstants> {
    let eigs = eigenvalues(x);
    let dec = decompose_matrix(x, default_cluster_tol(&eigs), PERIPHERAL_TOL)?;
    let scale = op_norm(x).max(1.0);
    let nil = dec.clusters.iter().map(|c| op_norm(&c.nilpotent)).fold(0.0, f64::max);
    if nil > SEMISIMPLE_TOL * scale {
        return Err(ZenoError::Unsupported(format!(
            "X is not diagonalizable (nilpotent part {nil:.3e}); the defective case is not evaluated"
        )));
    }
    let max_im = eigs.iter().map(|z| z.im).fold(f64::NEG_INFINITY, f64::max);
    let min_im = eigs.iter().map(|z| z.im).fold(f64::INFINITY, f64::min);
    let delta2 = 2.0 * PI - (max_im - min_im);
    if !(delta2 > 0.0) {
        return Err(ZenoError::Precondition(format!("spectrum of X spans {} ≥ 2π vertically", max_im - min_im)));
    }
    let cut = BranchCut::new(0.5 * (max_im + min_im) - PI)?;
    let exps: Vec<C64> = eigs.iter().map(|z| z.exp()).collect();
    let delta1 = cut.min_clearance(&exps);
    let rad = radius.unwrap_or(0.5 * delta1.min(delta2));
    if !(rad > 0.0 && rad < delta1.min(delta2)) {
        return Err(ZenoError::Precondition(format!("R = {rad} must lie in (0, min(δ₁, δ₂)) = (0, {})", delta1.min(delta2))));
    }
    let alpha = eigs.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let basis: Vec<CMat> = dec.clusters.iter().map(|c| range_basis(&c.projection, c.multiplicity)).collect();
    let cols: usize = basis.iter().map(|b| b.ncols()).sum();
    if cols != x.nrows() {
        return Err(ZenoError::Unsupported("eigenvector basis is rank deficient".into()));
    }
    let mut t = CMat::zeros(x.nrows(), cols);
    let mut at = 0;
    for b in &basis {
        t.view_mut((0, at), (b.nrows(), b.ncols())).copy_from(b);
        at += b.ncols();
    }
    let chi = condition_number(&t);
    let r_ad = eigs.iter().flat_map(|a| eigs.iter().map(move |b| (a - b).norm())).fold(0.0, f64::max);
    let ml = m_log(alpha.exp(), rad, cut);
    let mg = m_g(r_ad, rad, delta2);
    Ok(BchConstants {
        d: x.nrows(),
        alpha,
        chi,
        delta1,
        delta2,
        radius: rad,
        m: ml.max(mg),
        m_log: ml,
        m_g: mg,
        cut_angle: cut.angle(),
    })
}

/// Bound on `‖W(t)‖ = ‖log(e^X e^{tY}) − X − t g(ad_X)(Y)‖` for diagonalizable `X`.
pub fn bch_remainder_bound(x: &CMat, y: &CMat, t: f64) -> Result<BoundReport> {
    if x.shape() != y.shape() || !x.is_square() {
        return Err(ZenoError::Dimension(format!("X is {:?}, Y is {:?}", x.shape(), y.shape())));
    }
    let bc = bch_constants(x, None)?;
    let ny = op_norm(y);
    let cut = BranchCut::new(bc.cut_angle)?;
    let product = expm(x) * expm(&(y * c64(t, 0.0)));
    let measured = match primary_log(&product, CutSpec::Fixed(cut)) {
        Ok(z) => {
            let lin = GOfAd::new(x)?.apply(y)? * c64(t, 0.0);
            op_norm(&(z.matrix - x - lin))
        }
        Err(_) => f64::INFINITY,
    };
    let report = match bc.bound(t, ny) {
        Some(b) => BoundReport::new("bch_remainder", b, measured),
        None => BoundReport::inapplicable(
            "bch_remainder",
            measured,
            format!("denominator term {} ≥ 1", bc.denominator_term(t, ny)),
        ),
    };
    Ok(report
        .with("D", bc.d as f64)
        .with("t", t)
        .with("norm_y", ny)
        .with("alpha", bc.alpha)
        .with("chi", bc.chi)
        .with("delta1", bc.delta1)
        .with("delta2", bc.delta2)
        .with("R", bc.radius)
        .with("M", bc.m)
        .with("M_log", bc.m_log)
        .with("M_g", bc.m_g)
        .with("cut_angle", bc.cut_angle))
}

/// `M[(1 + KC_n/(1−μ))² exp(MKnC_n²/(1−μ)) − 1] + Kμⁿ`.
pub fn total_correction_bound(m: f64, k: f64, mu: f64, c_n: f64, n: u64) -> Result<f64> {
    if !(0.0..1.0).contains(&mu) {
        return Err(ZenoError::Precondition(format!("μ = {mu} must lie in [0, 1)")));
    }
    if m < 0.0 || k < 0.0 || c_n < 0.0 {
        return Err(ZenoError::InvalidInput("constants must be nonnegative".into()));
    }
    let nf = n as f64;
    let a = 1.0 + k * c_n / (1.0 - mu);
    Ok(m * (a * a * (m * k * nf * c_n * c_n / (1.0 - mu)).exp() - 1.0) + k * mu.powf(nf))
}

/// `C_n = max(‖E'_n P‖, ‖P E'_n‖)`.
pub fn contact_norm(e_n: &CMat, p: &CMat) -> f64 {
    let ep = off_peripheral(e_n, p);
    op_norm(&(&ep * p)).max(op_norm(&(p * &ep)))
}

/// Compares `‖E_nⁿ − (P E_n P)ⁿ‖` with the total correction bound, using
/// `M = √d`, `μ = (1+μ₀)/2` and `K` from the power bound.
pub fn total_correction_check(e_n: &SuperOperator, limit: &SpectralDecomposition, n: u64) -> Result<BoundReport> {
    let d = e_n.dim();
    let p = &limit.peripheral_projection;
    let mu = 0.5 * (1.0 + limit.mu0);
    let pb = power_bound_from_mu0(d, limit.mu0, mu)?;
    let m = bound_channel_norm(d);
    let c_n = contact_norm(e_n.matrix(), p);
    let pep = p * e_n.matrix() * p;
    let measured = op_norm(&(matrix_power(e_n.matrix(), n) - matrix_power(&pep, n)));
    let r_off = spectral_radius(&off_peripheral(e_n.matrix(), p));
    let report = if r_off <= pb.mu1 {
        BoundReport::new("total_correction", total_correction_bound(m, pb.k, mu, c_n, n)?, measured)
    } else {
        BoundReport::inapplicable("total_correction", measured, format!("r(E'_n) = {r_off} exceeds μ₁ = {}", pb.mu1))
    };
    Ok(report
        .with("d", d as f64)
        .with("n", n as f64)
        .with("M", m)
        .with("K", pb.k)
        .with("mu", mu)
        .with("mu0", limit.mu0)
        .with("C_n", c_n))
}

/// Leading term of the weak-measurement distance:
/// `(Ωt/2n) a (√((Ωt)²/4 + 1) + √((Ωt)²/4 + a⁻²))`, `a = 2/p − 1`.
pub fn analytic_distance_81(p: f64, omega_t: f64, n: u64) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(ZenoError::InvalidInput(format!("measurement strength p = {p} must lie in (0, 1]")));
    }
    if !(omega_t >= 0.0) || n == 0 {
        return Err(ZenoError::InvalidInput("need Ωt ≥ 0 and n ≥ 1".into()));
    }
    let a = 2.0 / p - 1.0;
    let w = omega_t * omega_t / 4.0;
    Ok(omega_t / (2.0 * n as f64) * a * ((w + 1.0).sqrt() + (w + 1.0 / (a * a)).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn channel_norm() {
        assert_eq!(bound_channel_norm(1), 1.0);
        assert!((bound_channel_norm(2) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn weak_meas_formula_value() {
        let v = analytic_distance_81(1.0, 1.0, 100).unwrap();
        assert!((v - 1.25f64.sqrt() / 100.0).abs() < 1e-15);
        assert_eq!(analytic_distance_81(0.5, 0.0, 3).unwrap(), 0.0);
        assert!(analytic_distance_81(0.0, 1.0, 3).is_err());
    }

    #[test]
    fn total_correction_edge() {
        let v = total_correction_bound(2f64.sqrt(), 3.0, 0.5, 0.0, 10).unwrap();
        assert!((v - 3.0 * 0.5f64.powi(10)).abs() < 1e-15);
        assert!(total_correction_bound(1.0, 1.0, 1.0, 0.1, 1).is_err());
    }

    #[test]
    fn closed_forms_dominate_quadrature() {
        for &(r, rad) in &[(1.0, 0.1), (2.5, 0.3), (0.4, 0.05)] {
            for &phi in &[-PI, -0.3, -5.0, 1.0] {
                let cut = BranchCut::new(phi).unwrap();
                assert!(m_log(r, rad, cut) >= m_log_quadrature(r, rad, cut));
            }
            for &delta in &[0.5, 2.0, PI, 5.0] {
                assert!(m_g(r, rad, delta) >= m_g_quadrature(r, rad, delta), "r={r} R={rad} δ={delta}");
            }
        }
    }

    #[test]
    fn remark_matches_general_form() {
        let pb = power_bound_from_mu0(2, 0.5, 0.75).unwrap();
        assert!((pb.k / power_bound_k_remark(2, 0.75, 0.5) - 1.0).abs() < 1e-12);
        assert!(power_bound_from_mu0(2, 0.5, 0.5).is_err());
        assert!(power_bound_from_mu0(2, 0.0, 0.5).unwrap().vacuous);
    }
}
