//! Spectral decomposition `A = Σ_k (λ_k P_k + N_k)` with a peripheral split.
//!
//! Projections come from a reordered complex Schur form and a triangular
//! Sylvester solve, which handles semisimple and defective clusters alike.
//! The Riesz contour integral is kept as an independent cross-check.

use serde::Serialize;

use crate::error::{Result, ZenoError};
use crate::linalg::{self, c64, identity, op_norm, schur, zeros, CMat, C64};
use crate::superop::SuperOperator;

pub const CLUSTER_REL_TOL: f64 = 1e-7;
pub const PERIPHERAL_TOL: f64 = 1e-9;
pub const RECONSTRUCTION_TOL: f64 = 1e-6;
pub const SEMISIMPLE_TOL: f64 = 1e-7;
pub const CONTOUR_NODES: usize = 64;

#[derive(Debug, Clone)]
pub struct SpectralCluster {
    /// Cluster representative; unimodular for peripheral clusters.
    pub eigenvalue: C64,
    /// Raw eigenvalues merged into this cluster.
    pub members: Vec<C64>,
    pub projection: CMat,
    pub nilpotent: CMat,
    pub multiplicity: usize,
    pub is_peripheral: bool,
}

#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub clusters: Vec<SpectralCluster>,
    pub peripheral_projection: CMat,
    pub peripheral_part: CMat,
    pub peripheral_inverse: CMat,
    /// Spectral radius of the nonperipheral part (0 if there is none).
    pub mu0: f64,
    pub cluster_tol: f64,
    pub peripheral_tol: f64,
    pub reconstruction_residual: f64,
    pub warnings: Vec<String>,
}

impl SpectralDecomposition {
    pub fn size(&self) -> usize {
        self.peripheral_projection.nrows()
    }

    pub fn peripheral(&self) -> impl Iterator<Item = &SpectralCluster> {
        self.clusters.iter().filter(|c| c.is_peripheral)
    }

    pub fn has_peripheral(&self) -> bool {
        self.clusters.iter().any(|c| c.is_peripheral)
    }

    pub fn max_peripheral_nilpotent(&self) -> f64 {
        self.peripheral().map(|c| op_norm(&c.nilpotent)).fold(0.0, f64::max)
    }

    /// `E_φⁿ = Σ λ_kⁿ P_k` over peripheral clusters, with `E_φ⁰ = I`.
    pub fn peripheral_power(&self, n: u64) -> CMat {
        if n == 0 {
            return identity(self.size());
        }
        self.peripheral().fold(zeros(self.size()), |acc, c| acc + &c.projection * unimodular_power(c.eigenvalue, n))
    }

    /// Σ_k (λ_k P_k + N_k).
    pub fn reconstruct(&self) -> CMat {
        self.clusters
            .iter()
            .fold(zeros(self.size()), |acc, c| acc + &c.projection * c.eigenvalue + &c.nilpotent)
    }

    pub fn report(&self) -> SpectralReport {
        SpectralReport {
            size: self.size(),
            mu0: self.mu0,
            reconstruction_residual: self.reconstruction_residual,
            warnings: self.warnings.clone(),
            clusters: self
                .clusters
                .iter()
                .map(|c| ClusterReport {
                    eigenvalue: [c.eigenvalue.re, c.eigenvalue.im],
                    modulus: c.eigenvalue.norm(),
                    multiplicity: c.multiplicity,
                    peripheral: c.is_peripheral,
                    nilpotent_norm: op_norm(&c.nilpotent),
                })
                .collect(),
        }
    }
}

/// Exportable summary of a decomposition.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralReport {
    pub size: usize,
    pub mu0: f64,
    pub reconstruction_residual: f64,
    pub warnings: Vec<String>,
    pub clusters: Vec<ClusterReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClusterReport {
    pub eigenvalue: [f64; 2],
    pub modulus: f64,
    pub multiplicity: usize,
    pub peripheral: bool,
    pub nilpotent_norm: f64,
}

fn unimodular_power(z: C64, n: u64) -> C64 {
    C64::from_polar(1.0, (z.arg() * n as f64).rem_euclid(2.0 * std::f64::consts::PI))
}

/// Default cluster tolerance `1e-7 · max|λ|`.
pub fn default_cluster_tol(eigs: &[C64]) -> f64 {
    let m = eigs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if m > 0.0 {
        CLUSTER_REL_TOL * m
    } else {
        CLUSTER_REL_TOL
    }
}

/// Single-linkage clustering; returns groups of indices into `eigs`.
fn cluster_indices(eigs: &[C64], tol: f64, warnings: &mut Vec<String>) -> Vec<Vec<usize>> {
    let n = eigs.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut j = i;
        while p[j] != r {
            let next = p[j];
            p[j] = r;
            j = next;
        }
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (eigs[i] - eigs[j]).norm() <= tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b] = a;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_of[r] {
            Some(g) => groups[g].push(i),
            None => {
                root_of[r] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }
    loop {
        let centers: Vec<C64> = groups.iter().map(|g| mean(g.iter().map(|&i| eigs[i]))).collect();
        let mut merged = false;
        'outer: for a in 0..groups.len() {
            for b in (a + 1)..groups.len() {
                let gap = (centers[a] - centers[b]).norm();
                if gap <= 2.0 * tol {
                    warnings.push(format!(
                        "clusters at {:.6}{:+.6}i and {:.6}{:+.6}i are {:.3e} apart (< 2·cluster_tol); merged",
                        centers[a].re, centers[a].im, centers[b].re, centers[b].im, gap
                    ));
                    let moved = groups.remove(b);
                    groups[a].extend(moved);
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            break;
        }
    }
    groups
}

fn mean(it: impl Iterator<Item = C64>) -> C64 {
    let (mut s, mut k) = (c64(0.0, 0.0), 0usize);
    for z in it {
        s += z;
        k += 1;
    }
    s / k as f64
}

/// Decomposes a square matrix into spectral clusters.
pub fn decompose_matrix(a: &CMat, cluster_tol: f64, peripheral_tol: f64) -> Result<SpectralDecomposition> {
    if a.nrows() != a.ncols() || a.nrows() == 0 {
        return Err(ZenoError::Dimension("decompose needs a nonempty square matrix".into()));
    }
    if !(cluster_tol > 0.0 && peripheral_tol > 0.0) {
        return Err(ZenoError::InvalidInput("tolerances must be positive".into()));
    }
    let n = a.nrows();
    let (q, t) = schur(a);
    let eigs: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();
    let mut warnings = Vec::new();
    let groups = cluster_indices(&eigs, cluster_tol, &mut warnings);

    let (v, d, w, offsets) = linalg::block_diagonalize_schur(&q, &t, &groups);
    let mut clusters: Vec<SpectralCluster> = groups
        .iter()
        .enumerate()
        .map(|(k, g)| {
            let members: Vec<C64> = g.iter().map(|&i| eigs[i]).collect();
            let center = mean(members.iter().copied());
            let is_peripheral = (center.norm() - 1.0).abs() <= peripheral_tol;
            let eigenvalue = if is_peripheral { center / center.norm() } else { center };
            let (o, p) = (offsets[k], g.len());
            let vk = v.columns(o, p);
            let wk = w.rows(o, p);
            let shifted = d.view((o, o), (p, p)) - identity(p) * eigenvalue;
            let nilpotent = vk * shifted * wk;
            let projection = vk * wk;
            SpectralCluster { eigenvalue, multiplicity: members.len(), members, projection, nilpotent, is_peripheral }
        })
        .collect();
    clusters.sort_by(|x, y| {
        y.eigenvalue
            .norm()
            .partial_cmp(&x.eigenvalue.norm())
            .unwrap()
            .then(x.eigenvalue.arg().partial_cmp(&y.eigenvalue.arg()).unwrap())
    });

    let mut pphi = zeros(n);
    let mut ephi = zeros(n);
    let mut einv = zeros(n);
    let mut mu0: f64 = 0.0;
    for c in &clusters {
        if c.is_peripheral {
            pphi += &c.projection;
            ephi += &c.projection * c.eigenvalue;
            einv += &c.projection * (c64(1.0, 0.0) / c.eigenvalue);
        } else {
            for z in &c.members {
                mu0 = mu0.max(z.norm());
            }
        }
    }
    let mut dec = SpectralDecomposition {
        clusters,
        peripheral_projection: pphi,
        peripheral_part: ephi,
        peripheral_inverse: einv,
        mu0,
        cluster_tol,
        peripheral_tol,
        reconstruction_residual: 0.0,
        warnings,
    };
    let residual = op_norm(&(dec.reconstruct() - a));
    dec.reconstruction_residual = residual;
    let tol = RECONSTRUCTION_TOL * op_norm(a).max(1.0);
    if !(residual <= tol) {
        return Err(ZenoError::Reconstruction { residual, tol });
    }
    Ok(dec)
}

/// Decomposition of a superoperator with explicit tolerances.
pub fn decompose(a: &SuperOperator, cluster_tol: f64, peripheral_tol: f64) -> Result<SpectralDecomposition> {
    decompose_matrix(a.matrix(), cluster_tol, peripheral_tol)
}

/// Decomposition with the default tolerances.
pub fn decompose_default(a: &CMat) -> Result<SpectralDecomposition> {
    let eigs = linalg::eigenvalues(a);
    decompose_matrix(a, default_cluster_tol(&eigs), PERIPHERAL_TOL)
}

/// `Σ_{|λ_k| = 1} λ_k⁻¹ P_k`; the zero map when the peripheral spectrum is empty.
pub fn peripheral_inverse(dec: &SpectralDecomposition) -> CMat {
    dec.peripheral_inverse.clone()
}

/// Trapezoid-rule Riesz projection `(1/2πi) ∮ (z - A)⁻¹ dz` over the circle
/// `|z - center| = radius`.
pub fn spectral_projection_via_contour(a: &CMat, center: C64, radius: f64, quad_points: usize) -> Result<CMat> {
    if !(radius > 0.0) || quad_points < 4 {
        return Err(ZenoError::InvalidInput("contour needs radius > 0 and at least 4 nodes".into()));
    }
    let n = a.nrows();
    let margin = 0.01 * radius;
    for z in linalg::eigenvalues(a) {
        let gap = ((z - center).norm() - radius).abs();
        if gap < margin {
            return Err(ZenoError::ContourTooClose(format!(
                "eigenvalue {:.6}{:+.6}i lies {:.3e} from the circle",
                z.re, z.im, gap
            )));
        }
    }
    let id = identity(n);
    let mut acc = zeros(n);
    for j in 0..quad_points {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / quad_points as f64;
        let w = C64::from_polar(radius, theta);
        let z = center + w;
        let resolvent = linalg::solve(&(&id * z - a), &id)
            .ok_or_else(|| ZenoError::Singular("resolvent on the contour".into()))?;
        acc += resolvent * w;
    }
    Ok(acc / c64(quad_points as f64, 0.0))
}

/// Contour projection for one cluster, on a circle of half the distance to
/// the rest of the spectrum.
pub fn cluster_projection_via_contour(a: &CMat, dec: &SpectralDecomposition, k: usize) -> Result<CMat> {
    let center = dec.clusters[k].eigenvalue;
    let spread = dec.clusters[k].members.iter().map(|z| (z - center).norm()).fold(0.0, f64::max);
    let gap = dec
        .clusters
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != k)
        .flat_map(|(_, c)| c.members.iter().map(move |z| (z - center).norm()))
        .fold(f64::INFINITY, f64::min);
    let radius = if gap.is_finite() { 0.5 * gap } else { 1.0 + 2.0 * spread };
    spectral_projection_via_contour(a, center, radius.max(2.0 * spread), CONTOUR_NODES)
}

/// Unitary triangularization `A = U†(Λ + N)U`.
#[derive(Debug, Clone)]
pub struct SchurSplit {
    pub diagonal: CMat,
    pub strict_upper: CMat,
    pub unitary: CMat,
}

pub fn schur_split(a: &CMat) -> SchurSplit {
    let (q, t) = schur(a);
    let n = t.nrows();
    let mut diagonal = zeros(n);
    let mut strict_upper = t.clone();
    for i in 0..n {
        diagonal[(i, i)] = t[(i, i)];
        strict_upper[(i, i)] = c64(0.0, 0.0);
    }
    SchurSplit { diagonal, strict_upper, unitary: q.adjoint() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real_matrix;

    #[test]
    fn identity_has_single_cluster() {
        let dec = decompose_default(&identity(4)).unwrap();
        assert_eq!(dec.clusters.len(), 1);
        let c = &dec.clusters[0];
        assert!(c.is_peripheral);
        assert_eq!(c.multiplicity, 4);
        assert!((&c.projection - identity(4)).norm() < 1e-14);
        assert!(c.nilpotent.norm() < 1e-14);
    }

    #[test]
    fn jordan_block_nilpotent() {
        let a = real_matrix(2, &[0.5, 1.0, 0.0, 0.5]);
        let dec = decompose_default(&a).unwrap();
        assert_eq!(dec.clusters.len(), 1);
        assert!((op_norm(&dec.clusters[0].nilpotent) - 1.0).abs() < 1e-12);
        assert_eq!(dec.mu0, 0.5);
    }

    #[test]
    fn contour_projection_examples() {
        let a = real_matrix(2, &[2.0, 0.0, 0.0, 0.0]);
        let p = spectral_projection_via_contour(&a, c64(2.0, 0.0), 0.5, 64).unwrap();
        assert!((p - real_matrix(2, &[1.0, 0.0, 0.0, 0.0])).norm() < 1e-12);
        let j = real_matrix(2, &[1.0, 1.0, 0.0, 1.0]);
        let p = spectral_projection_via_contour(&j, c64(1.0, 0.0), 0.5, 64).unwrap();
        assert!((p - identity(2)).norm() < 1e-12);
        assert!(spectral_projection_via_contour(&a, c64(1.0, 0.0), 1.0, 64).is_err());
    }

    #[test]
    fn contour_agrees_with_schur_path() {
        let a = CMat::from_fn(5, 5, |i, j| c64(((i * 7 + j * 3) % 5) as f64 * 0.2 - 0.3, (i as f64 - j as f64) * 0.05));
        let dec = decompose_default(&a).unwrap();
        for k in 0..dec.clusters.len() {
            let pc = cluster_projection_via_contour(&a, &dec, k).unwrap();
            assert!((pc - &dec.clusters[k].projection).norm() < 1e-6, "cluster {k}");
        }
    }

    #[test]
    fn empty_peripheral_spectrum() {
        let a = identity(4) * c64(0.5, 0.0);
        let dec = decompose_default(&a).unwrap();
        assert!(!dec.has_peripheral());
        assert_eq!(peripheral_inverse(&dec), zeros(4));
        assert_eq!(dec.mu0, 0.5);
    }

    #[test]
    fn schur_split_cases() {
        let n = real_matrix(2, &[0.0, 1.0, 0.0, 0.0]);
        let s = schur_split(&n);
        assert!(s.diagonal.norm() < 1e-15);
        assert!((op_norm(&s.strict_upper) - 1.0).abs() < 1e-14);
        let h = real_matrix(2, &[1.0, 2.0, 2.0, -1.0]);
        let s = schur_split(&h);
        assert!(s.strict_upper.norm() < 1e-12);
        let back = s.unitary.adjoint() * (&s.diagonal + &s.strict_upper) * &s.unitary;
        assert!((back - h).norm() < 1e-12);
    }

    #[test]
    fn close_clusters_merge_with_warning() {
        let a = CMat::from_diagonal(&crate::linalg::CVec::from_vec(vec![c64(1.0, 0.0), c64(1.0 + 1.5e-7, 0.0), c64(0.2, 0.0)]));
        let dec = decompose_matrix(&a, 1e-7, 1e-9).unwrap();
        assert_eq!(dec.clusters.len(), 2);
        assert!(!dec.warnings.is_empty());
    }

    #[test]
    fn unimodular_powers_are_exact_phases() {
        let z = C64::from_polar(1.0, 2.0);
        let p = unimodular_power(z, 1_000_001);
        assert!((p.norm() - 1.0).abs() < 1e-15);
        assert!((p - z.powu(1_000_001)).norm() < 1e-6);
    }
}
