//! The worked examples: weak measurements on a qubit, a CPTP kick on a
//! qutrit, a two-kick cycle, alternating projective measurements and the
//! finite-measurement-time efficiency study.
//!
//! Parameters are dimensionless products with the total time (`Ωt`, `Γt`,
//! `gt`), so every model evolves for `t = 1`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::analytic_distance_81;
use crate::error::{Result, ZenoError};
use crate::linalg::{c64, identity, matrix_unit, real_matrix, CMat, C64};
use crate::superop::{gkls_to_superop, kraus_to_superop, ops, GklsGenerator, KrausSet, SuperOperator};
use crate::zeno::KickCycle;

fn default_p() -> f64 {
    0.5
}
fn default_one() -> f64 {
    1.0
}
fn default_q() -> f64 {
    0.3
}
fn default_gamma_t() -> f64 {
    2.0
}
fn default_omega2_t() -> f64 {
    2.0
}
fn default_target() -> f64 {
    0.01
}

/// Measurement strength as a function of the measurement time `τ/T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrengthModel {
    /// `1 − e^{−τ/T}`
    A,
    /// `sin(πτ/2T)`
    B,
    /// `sin²(πτ/2T)`
    C,
}

impl StrengthModel {
    pub fn strength(self, tau_over_t: f64) -> f64 {
        use std::f64::consts::FRAC_PI_2;
        match self {
            StrengthModel::A => 1.0 - (-tau_over_t).exp(),
            StrengthModel::B => (FRAC_PI_2 * tau_over_t).sin(),
            StrengthModel::C => (FRAC_PI_2 * tau_over_t).sin().powi(2),
        }
    }

    /// Default `τ/T` range of the grid.
    pub fn tau_range(self) -> (f64, f64) {
        match self {
            StrengthModel::A => (0.01, 5.0),
            StrengthModel::B | StrengthModel::C => (0.01, 1.0),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            StrengthModel::A => "a",
            StrengthModel::B => "b",
            StrengthModel::C => "c",
        }
    }

    pub fn all() -> [StrengthModel; 3] {
        [StrengthModel::A, StrengthModel::B, StrengthModel::C]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", deny_unknown_fields)]
pub enum ModelSpec {
    #[serde(rename = "weak_meas_81")]
    WeakMeas {
        #[serde(default = "default_p")]
        p: f64,
        #[serde(default = "default_one")]
        omega_t: f64,
    },
    #[serde(rename = "cptp_kick_82")]
    CptpKick {
        #[serde(default = "default_q")]
        q: f64,
        #[serde(default = "default_gamma_t")]
        gamma_t: f64,
        #[serde(default)]
        omega0_t: f64,
        #[serde(default = "default_one")]
        omega1_t: f64,
        #[serde(default = "default_omega2_t")]
        omega2_t: f64,
    },
    #[serde(rename = "cycle_83")]
    Cycle {
        #[serde(default = "default_q")]
        q: f64,
        #[serde(default = "default_gamma_t")]
        gamma_t: f64,
        #[serde(default)]
        omega0_t: f64,
        #[serde(default = "default_one")]
        omega1_t: f64,
        #[serde(default = "default_omega2_t")]
        omega2_t: f64,
    },
    #[serde(rename = "multi_proj_84")]
    MultiProj {
        #[serde(default = "default_gamma_t")]
        gamma_t: f64,
        #[serde(default = "default_one")]
        g_t: f64,
        #[serde(default)]
        selective: bool,
    },
    #[serde(rename = "efficiency_85")]
    Efficiency {
        strength: StrengthModel,
        #[serde(default = "default_one")]
        omega_t: f64,
        #[serde(default = "default_target")]
        target: f64,
    },
}

impl ModelSpec {
    pub fn id(&self) -> &'static str {
        match self {
            ModelSpec::WeakMeas { .. } => "weak_meas_81",
            ModelSpec::CptpKick { .. } => "cptp_kick_82",
            ModelSpec::Cycle { .. } => "cycle_83",
            ModelSpec::MultiProj { .. } => "multi_proj_84",
            ModelSpec::Efficiency { .. } => "efficiency_85",
        }
    }

    pub fn weak_meas(p: f64, omega_t: f64) -> Self {
        ModelSpec::WeakMeas { p, omega_t }
    }

    pub fn cptp_kick(q: f64, gamma_t: f64) -> Self {
        ModelSpec::CptpKick { q, gamma_t, omega0_t: 0.0, omega1_t: 1.0, omega2_t: 2.0 }
    }

    pub fn cycle(q: f64, gamma_t: f64) -> Self {
        ModelSpec::Cycle { q, gamma_t, omega0_t: 0.0, omega1_t: 1.0, omega2_t: 2.0 }
    }

    pub fn multi_proj(gamma_t: f64, g_t: f64, selective: bool) -> Self {
        ModelSpec::MultiProj { gamma_t, g_t, selective }
    }

    /// Range diagnostics; empty when the parameters are admissible.
    pub fn diagnostics(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut finite = |name: &str, v: f64| {
            if !v.is_finite() {
                out.push(format!("{name} must be finite"));
                false
            } else {
                true
            }
        };
        let mut checks: Vec<(String, bool)> = Vec::new();
        match *self {
            ModelSpec::WeakMeas { p, omega_t } => {
                if finite("p", p) {
                    checks.push(("p must lie in (0, 1]".into(), p > 0.0 && p <= 1.0));
                }
                if finite("omega_t", omega_t) {
                    checks.push(("omega_t must be ≥ 0".into(), omega_t >= 0.0));
                }
            }
            ModelSpec::CptpKick { q, gamma_t, omega0_t, omega1_t, omega2_t }
            | ModelSpec::Cycle { q, gamma_t, omega0_t, omega1_t, omega2_t } => {
                if finite("q", q) {
                    checks.push(("q must lie in [0, 1); the model is restricted to the case q < 1".into(), (0.0..1.0).contains(&q)));
                }
                if finite("gamma_t", gamma_t) {
                    checks.push(("gamma_t must be ≥ 0".into(), gamma_t >= 0.0));
                }
                for (name, v) in [("omega0_t", omega0_t), ("omega1_t", omega1_t), ("omega2_t", omega2_t)] {
                    finite(name, v);
                }
            }
            ModelSpec::MultiProj { gamma_t, g_t, .. } => {
                if finite("gamma_t", gamma_t) {
                    checks.push(("gamma_t must be ≥ 0".into(), gamma_t >= 0.0));
                }
                finite("g_t", g_t);
            }
            ModelSpec::Efficiency { omega_t, target, .. } => {
                if finite("omega_t", omega_t) {
                    checks.push(("omega_t must be ≥ 0".into(), omega_t >= 0.0));
                }
                checks.push(("target must be > 0".into(), target > 0.0));
            }
        }
        out.extend(checks.into_iter().filter(|(_, ok)| !ok).map(|(m, _)| m));
        out
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.diagnostics();
        if d.is_empty() {
            Ok(())
        } else {
            Err(ZenoError::InvalidInput(d.join("; ")))
        }
    }
}

/// Closed forms printed alongside each model.
#[derive(Debug, Clone, Default)]
pub struct AnalyticReference {
    pub peripheral_projection: Option<CMat>,
    pub peripheral_part: Option<CMat>,
    pub lz: Option<CMat>,
    /// Peripheral eigenvalues with their spectral projections.
    pub peripheral_clusters: Vec<(C64, CMat)>,
    /// Hilbert-space projections and their intersection, where applicable.
    pub hilbert_projections: Vec<CMat>,
    pub hilbert_intersection: Option<CMat>,
}

#[derive(Debug, Clone)]
pub struct BuiltModel {
    pub spec: ModelSpec,
    pub cycle: KickCycle,
    /// Total evolution time; parameters are scaled so that `t = 1`.
    pub t: f64,
    pub reference: AnalyticReference,
}

/// `|a⟩⟨b|` on the qutrit.
fn kb(a: usize, b: usize) -> CMat {
    matrix_unit(3, a, b)
}

/// Embeds a qubit operator in the `{|0⟩, |1⟩}` block of a qutrit.
fn embed(m: &CMat) -> CMat {
    let mut out = CMat::zeros(3, 3);
    out.view_mut((0, 0), (2, 2)).copy_from(m);
    out
}

fn r(x: f64) -> C64 {
    c64(x, 0.0)
}

fn sup(m: CMat) -> SuperOperator {
    SuperOperator::from_matrix(m).expect("square superoperator")
}

/// `X ↦ A ⟨2|X|2⟩`.
fn times_22(a: &CMat) -> CMat {
    SuperOperator::trace_map(a, &kb(2, 2)).into_matrix()
}

fn dephasing_generator(gamma_t: f64, omegas: [f64; 3]) -> Result<SuperOperator> {
    let h = CMat::from_diagonal(&crate::linalg::CVec::from_vec(omegas.iter().map(|&w| r(w)).collect()));
    let l = (kb(1, 1) + kb(2, 2)) * r(gamma_t.sqrt());
    gkls_to_superop(&GklsGenerator::new(h, vec![l])?)
}

/// `L_Z = −½Γ(|0⟩⟨0|•|1⟩⟨1| + |1⟩⟨1|•|0⟩⟨0|)`.
pub fn dephasing_zeno_generator(gamma_t: f64) -> CMat {
    let a = SuperOperator::sandwich(&kb(0, 0), &kb(1, 1)).into_matrix();
    let b = SuperOperator::sandwich(&kb(1, 1), &kb(0, 0)).into_matrix();
    (a + b) * r(-0.5 * gamma_t)
}

/// `P = ½(1 + X•X)` of the weak-measurement qubit.
pub fn weak_meas_projection() -> CMat {
    (identity(4) + SuperOperator::conjugation(&ops::pauli_x()).into_matrix()) * r(0.5)
}

/// Spectrum `{λ₊₊, λ₊₋, λ₋₊, λ₋₋}` of one weak-measurement step at `Ωt/n`.
pub fn weak_meas_eigenvalues(p: f64, omega_dt: f64) -> [C64; 4] {
    let a = 2.0 / p - 1.0;
    let eta = r(1.0 - a * a * omega_dt.sin().powi(2)).sqrt();
    let base = r((1.0 - 0.5 * p) * omega_dt.cos());
    [r(1.0), r(1.0 - p), base + eta * (0.5 * p), base - eta * (0.5 * p)]
}

fn build_weak_meas(p: f64, omega_t: f64) -> Result<BuiltModel> {
    let proj = weak_meas_projection();
    let kick = identity(4) * r(1.0 - p) + &proj * r(p);
    let h = ops::pauli_z() * r(0.5 * omega_t);
    let l = SuperOperator::hamiltonian(&h);
    let reference = AnalyticReference {
        peripheral_projection: Some(proj.clone()),
        peripheral_part: Some(proj.clone()),
        lz: Some(CMat::zeros(4, 4)),
        peripheral_clusters: vec![(r(1.0), proj)],
        ..Default::default()
    };
    let spec = ModelSpec::WeakMeas { p, omega_t };
    Ok(BuiltModel { spec, cycle: KickCycle::single(sup(kick), l)?, t: 1.0, reference })
}

fn relaxation_kraus(k0: CMat, q: f64) -> Result<SuperOperator> {
    let k1 = kb(0, 2) * r((1.0 - q).sqrt());
    Ok(kraus_to_superop(&KrausSet::from_matrices(vec![k0, k1])?))
}

fn build_cptp_kick(spec: &ModelSpec, q: f64, gamma_t: f64, omegas: [f64; 3]) -> Result<BuiltModel> {
    let k0 = embed(&ops::pauli_x()) + kb(2, 2) * r(q.sqrt());
    let kick = relaxation_kraus(k0, q)?;
    let l = dephasing_generator(gamma_t, omegas)?;
    let (p, x, y, z) = (embed(&identity(2)), embed(&ops::pauli_x()), embed(&ops::pauli_y()), embed(&ops::pauli_z()));
    let c = (1.0 - q) / (1.0 + q);
    let tm = |a: &CMat, b: &CMat| SuperOperator::trace_map(a, b).into_matrix();
    let p0 = (tm(&p, &identity(3)) + tm(&x, &x)) * r(0.5);
    let p1 = (tm(&y, &y) + tm(&z, &z) - times_22(&z) * r(c)) * r(0.5);
    let pphi = SuperOperator::conjugation(&p).into_matrix() + times_22(&(&p - &z * r(c))) * r(0.5);
    let ephi = SuperOperator::conjugation(&x).into_matrix() + times_22(&(&p + &z * r(c))) * r(0.5);
    let reference = AnalyticReference {
        peripheral_projection: Some(pphi),
        peripheral_part: Some(ephi),
        lz: Some(dephasing_zeno_generator(gamma_t)),
        peripheral_clusters: vec![(r(1.0), p0), (r(-1.0), p1)],
        ..Default::default()
    };
    Ok(BuiltModel { spec: spec.clone(), cycle: KickCycle::single(kick, l)?, t: 1.0, reference })
}

fn build_cycle(spec: &ModelSpec, q: f64, gamma_t: f64, omegas: [f64; 3]) -> Result<BuiltModel> {
    let s = kb(2, 2) * r(q.sqrt());
    let e1 = relaxation_kraus(embed(&ops::pauli_z()) + &s, q)?;
    let e2 = relaxation_kraus(embed(&ops::pauli_y()) + &s, q)?;
    let l = dephasing_generator(gamma_t, omegas)?;
    let (p, x, y, z) = (embed(&identity(2)), embed(&ops::pauli_x()), embed(&ops::pauli_y()), embed(&ops::pauli_z()));
    let c = (1.0 - q).powi(2) / (1.0 + q * q);
    let tm = |a: &CMat, b: &CMat| SuperOperator::trace_map(a, b).into_matrix();
    let p0 = (tm(&p, &identity(3)) + tm(&x, &x)) * r(0.5);
    let p1 = (tm(&y, &y) + tm(&z, &z) + times_22(&z) * r(c)) * r(0.5);
    let pphi = SuperOperator::conjugation(&p).into_matrix() + times_22(&(&p + &z * r(c))) * r(0.5);
    let ephi = SuperOperator::conjugation(&x).into_matrix() + times_22(&(&p - &z * r(c))) * r(0.5);
    let reference = AnalyticReference {
        peripheral_projection: Some(pphi),
        peripheral_part: Some(ephi),
        lz: Some(dephasing_zeno_generator(gamma_t)),
        peripheral_clusters: vec![(r(1.0), p0), (r(-1.0), p1)],
        ..Default::default()
    };
    Ok(BuiltModel { spec: spec.clone(), cycle: KickCycle::new(vec![e1, e2], l)?, t: 1.0, reference })
}

/// The two measurement projections `P₁ = diag(0, 1, 1)` and `P₂`.
pub fn multi_proj_projections() -> (CMat, CMat) {
    let p1 = real_matrix(3, &[0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
    let p2 = real_matrix(3, &[0.5, 0.5, 0.0, 0.5, 0.5, 0.0, 0.0, 0.0, 1.0]);
    (p1, p2)
}

/// `H = g(|0⟩⟨1| + |1⟩⟨2| + h.c.)`.
pub fn multi_proj_hamiltonian(g_t: f64) -> CMat {
    (kb(0, 1) + kb(1, 0) + kb(1, 2) + kb(2, 1)) * r(g_t)
}

fn build_multi_proj(gamma_t: f64, g_t: f64, selective: bool) -> Result<BuiltModel> {
    let (p1, p2) = multi_proj_projections();
    let h = multi_proj_hamiltonian(g_t);
    let jump = kb(1, 2) * r(gamma_t.sqrt());
    let l = gkls_to_superop(&GklsGenerator::new(h, vec![jump])?)?;
    let conj = |m: &CMat| SuperOperator::conjugation(m).into_matrix();
    let two = kb(2, 2);
    let p = embed(&identity(2));
    let (kicks, pphi, lz) = if selective {
        let pphi = conj(&two);
        let lz = conj(&two) * r(-gamma_t);
        (vec![sup(conj(&p1)), sup(conj(&p2))], pphi, lz)
    } else {
        let q1 = identity(3) - &p1;
        let q2 = identity(3) - &p2;
        let k1 = conj(&p1) + conj(&q1);
        let k2 = conj(&p2) + conj(&q2);
        let pphi = SuperOperator::trace_map(&p, &p).into_matrix() * r(0.5) + conj(&two);
        let lz = times_22(&(&two - &p * r(0.5))) * r(-gamma_t);
        (vec![sup(k1), sup(k2)], pphi, lz)
    };
    let reference = AnalyticReference {
        peripheral_projection: Some(pphi.clone()),
        peripheral_part: Some(pphi.clone()),
        lz: Some(lz),
        peripheral_clusters: vec![(r(1.0), pphi)],
        hilbert_projections: vec![p1, p2],
        hilbert_intersection: Some(two),
    };
    let spec = ModelSpec::MultiProj { gamma_t, g_t, selective };
    Ok(BuiltModel { spec, cycle: KickCycle::new(kicks, l)?, t: 1.0, reference })
}

/// Kick cycle and analytic references for a model. The efficiency study
/// builds the weak-measurement model at the projective strength `p = 1`.
pub fn build(spec: &ModelSpec) -> Result<BuiltModel> {
    spec.validate()?;
    match *spec {
        ModelSpec::WeakMeas { p, omega_t } => build_weak_meas(p, omega_t),
        ModelSpec::CptpKick { q, gamma_t, omega0_t, omega1_t, omega2_t } => {
            build_cptp_kick(spec, q, gamma_t, [omega0_t, omega1_t, omega2_t])
        }
        ModelSpec::Cycle { q, gamma_t, omega0_t, omega1_t, omega2_t } => {
            build_cycle(spec, q, gamma_t, [omega0_t, omega1_t, omega2_t])
        }
        ModelSpec::MultiProj { gamma_t, g_t, selective } => build_multi_proj(gamma_t, g_t, selective),
        ModelSpec::Efficiency { omega_t, .. } => {
            let mut m = build_weak_meas(1.0, omega_t)?;
            m.spec = spec.clone();
            Ok(m)
        }
    }
}

/// Grid of the efficiency study; `τ` is measured in units of `T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyGrid {
    pub tau_min: f64,
    pub tau_max: f64,
    pub tau_points: usize,
    pub n_max: u64,
    pub n_points: usize,
}

impl EfficiencyGrid {
    pub fn default_for(model: StrengthModel) -> Self {
        let (tau_min, tau_max) = model.tau_range();
        EfficiencyGrid { tau_min, tau_max, tau_points: 200, n_max: 10_000, n_points: 200 }
    }

    pub fn taus(&self) -> Vec<f64> {
        if self.tau_points == 1 {
            return vec![self.tau_min];
        }
        let step = (self.tau_max - self.tau_min) / (self.tau_points - 1) as f64;
        (0..self.tau_points).map(|i| self.tau_min + step * i as f64).collect()
    }

    /// Log-spaced integers in `[1, n_max]`, deduplicated.
    pub fn ns(&self) -> Vec<u64> {
        let top = (self.n_max.max(1) as f64).ln();
        let mut out: Vec<u64> = (0..self.n_points)
            .map(|i| {
                let f = if self.n_points == 1 { 1.0 } else { i as f64 / (self.n_points - 1) as f64 };
                (top * f).exp().round() as u64
            })
            .collect();
        out.dedup();
        out
    }

    fn diagnostics(&self) -> Vec<String> {
        let mut d = Vec::new();
        if !(self.tau_min > 0.0 && self.tau_max > self.tau_min) {
            d.push("efficiency grid needs 0 < tau_min < tau_max".into());
        }
        if self.tau_points == 0 || self.n_points == 0 || self.n_max == 0 {
            d.push("efficiency grid sizes must be positive".into());
        }
        d
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct EfficiencyCell {
    pub n: u64,
    pub tau: f64,
    pub p: f64,
    pub distance: f64,
    pub total_time: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EfficiencyScan {
    pub model: StrengthModel,
    pub omega_t: f64,
    pub target: f64,
    pub grid: EfficiencyGrid,
    pub surface: Vec<EfficiencyCell>,
    /// `τ/T` minimizing the total measurement time `nτ` at the target.
    pub tau_opt: Option<f64>,
    pub n_opt: Option<u64>,
    pub best_total_time: Option<f64>,
    /// Smallest `nτ` with the most projective strength on the grid.
    pub projective_total_time: Option<f64>,
    pub nonprojective_wins: bool,
    /// Set for an infinite target, where every `n` is feasible.
    pub degenerate: bool,
    /// True when `τ_opt` sits at the end of the feasible `τ` range rather
    /// than at a stationary point of the objective.
    pub budget_limited: bool,
}

/// Distance surface over `(n, τ)` and the optimal measurement time.
pub fn efficiency_scan(model: StrengthModel, grid: EfficiencyGrid, omega_t: f64, target: f64) -> Result<EfficiencyScan> {
    let diag = grid.diagnostics();
    if !diag.is_empty() {
        return Err(ZenoError::InvalidInput(diag.join("; ")));
    }
    if !(target > 0.0) || !(omega_t >= 0.0) {
        return Err(ZenoError::InvalidInput("need target > 0 and omega_t ≥ 0".into()));
    }
    let taus = grid.taus();
    let ns = grid.ns();
    let rows: Vec<Vec<EfficiencyCell>> = taus
        .par_iter()
        .map(|&tau| {
            let p = model.strength(tau);
            ns.iter()
                .map(|&n| {
                    let distance = if p > 0.0 { analytic_distance_81(p, omega_t, n).unwrap_or(f64::INFINITY) } else { f64::INFINITY };
                    EfficiencyCell { n, tau, p, distance, total_time: n as f64 * tau }
                })
                .collect()
        })
        .collect();
    let degenerate = target.is_infinite();
    let min_feasible = |row: &[EfficiencyCell]| row.iter().find(|c| c.distance <= target).copied();
    let per_tau: Vec<Option<EfficiencyCell>> = rows.iter().map(|r| min_feasible(r)).collect();
    let best = if degenerate {
        rows.first().and_then(|r| r.first().copied())
    } else {
        per_tau
            .iter()
            .flatten()
            .copied()
            .min_by(|a, b| a.total_time.partial_cmp(&b.total_time).unwrap().then(a.tau.partial_cmp(&b.tau).unwrap()))
    };
    if best.is_none() {
        return Err(ZenoError::Infeasible(format!(
            "no grid point reaches distance {target:.3e} for model {}",
            model.label()
        )));
    }
    let best = best.unwrap();
    let projective = per_tau.last().copied().flatten().map(|c| c.total_time);
    let nonprojective_wins = match projective {
        Some(pt) => best.total_time < pt && best.p < 1.0,
        None => best.p < 1.0,
    };
    let feasible: Vec<f64> = per_tau.iter().flatten().map(|c| c.tau).collect();
    let budget_limited = !degenerate
        && (feasible.first() == Some(&best.tau) || feasible.last() == Some(&best.tau));
    Ok(EfficiencyScan {
        model,
        omega_t,
        target,
        grid,
        surface: rows.into_iter().flatten().collect(),
        tau_opt: Some(best.tau),
        n_opt: Some(best.n),
        best_total_time: Some(best.total_time),
        projective_total_time: projective,
        nonprojective_wins,
        degenerate,
        budget_limited,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superop::{is_cptp_default, CpVerdict};

    #[test]
    fn projective_weak_measurement_is_projection() {
        let m = build(&ModelSpec::weak_meas(1.0, 1.0)).unwrap();
        assert!((m.cycle.kicks()[0].matrix() - weak_meas_projection()).norm() < 1e-15);
    }

    #[test]
    fn kraus_sets_are_trace_preserving() {
        for spec in [ModelSpec::cptp_kick(0.3, 2.0), ModelSpec::cycle(0.6, 2.0), ModelSpec::multi_proj(2.0, 1.0, false)] {
            let m = build(&spec).unwrap();
            for k in m.cycle.kicks() {
                assert_eq!(is_cptp_default(k), CpVerdict::Cptp, "{}", spec.id());
            }
        }
        let sel = build(&ModelSpec::multi_proj(2.0, 1.0, true)).unwrap();
        for k in sel.cycle.kicks() {
            assert_eq!(is_cptp_default(k), CpVerdict::CpOnly);
        }
    }

    #[test]
    fn product_of_projections() {
        let (p1, p2) = multi_proj_projections();
        let want = real_matrix(3, &[0.0, 0.5, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 1.0]);
        assert!((p2 * p1 - want).norm() < 1e-15);
    }

    #[test]
    fn q_one_is_rejected() {
        let d = ModelSpec::cptp_kick(1.0, 2.0).diagnostics();
        assert_eq!(d.len(), 1);
        assert!(d[0].contains("q < 1"));
        assert!(build(&ModelSpec::cycle(1.0, 0.0)).is_err());
    }

    #[test]
    fn strength_models() {
        assert_eq!(StrengthModel::C.strength(1.0), 1.0);
        assert_eq!(StrengthModel::B.strength(1.0), 1.0);
        assert!((StrengthModel::A.strength(1.0) - (1.0 - (-1.0f64).exp())).abs() < 1e-16);
    }

    #[test]
    fn spec_json_roundtrip() {
        let spec = ModelSpec::cycle(0.6, 2.0);
        let text = serde_json::to_string(&spec).unwrap();
        assert!(text.contains("\"id\":\"cycle_83\""));
        let back: ModelSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
        let with_defaults: ModelSpec = serde_json::from_str(r#"{"id":"weak_meas_81"}"#).unwrap();
        assert_eq!(with_defaults, ModelSpec::weak_meas(0.5, 1.0));
    }

    #[test]
    fn infinite_target_is_degenerate() {
        let s = efficiency_scan(StrengthModel::C, EfficiencyGrid::default_for(StrengthModel::C), 1.0, f64::INFINITY).unwrap();
        assert!(s.degenerate);
        assert_eq!(s.tau_opt, Some(0.01));
    }

    #[test]
    fn grid_ns_are_increasing() {
        let ns = EfficiencyGrid::default_for(StrengthModel::A).ns();
        assert_eq!(ns[0], 1);
        assert_eq!(*ns.last().unwrap(), 10_000);
        assert!(ns.windows(2).all(|w| w[0] < w[1]));
    }
}
