//! Superoperators on the Hilbert–Schmidt space of `d × d` operators.
//!
//! A superoperator is stored as its `d² × d²` matrix acting on column-stacked
//! operators. Kraus channels, GKLS generators, adjoints, norms and a Choi
//! matrix physicality test live here.

use serde::{Deserialize, Serialize};

use crate::error::{Result, ZenoError};
use crate::linalg::{
    self, c64, hermitian_eigenvalues, identity, kron, matrix_unit, unvec, vec, CMat, C64, IM, ONE,
};

/// Default CP tolerance per unit dimension (`tol = 1e-9 · d`).
pub const CP_TOL_PER_DIM: f64 = 1e-9;
/// Default trace-preservation tolerance.
pub const TP_TOL: f64 = 1e-10;
/// Relative Hermiticity tolerance for Hamiltonians.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Cap on `‖tL‖` accepted by [`superop_exp`].
pub const EXP_NORM_CAP: f64 = 1e4;
/// Tolerance for the subunital check on Kraus sets.
pub const KRAUS_TOL: f64 = 1e-10;

/// Vectorization convention tag. Only column stacking is supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    #[default]
    ColumnStacking,
}

/// A `d × d` complex operator on the system Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct HilbertOperator {
    entries: CMat,
}

impl HilbertOperator {
    pub fn new(entries: CMat) -> Result<Self> {
        if entries.nrows() == 0 || entries.nrows() != entries.ncols() {
            return Err(ZenoError::Dimension(format!(
                "operator must be square with d ≥ 1, got {}×{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if !linalg::is_finite(&entries) {
            return Err(ZenoError::InvalidInput("operator has non-finite entries".into()));
        }
        Ok(HilbertOperator { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.entries
    }

    pub fn into_matrix(self) -> CMat {
        self.entries
    }

    pub fn dagger(&self) -> HilbertOperator {
        HilbertOperator { entries: self.entries.adjoint() }
    }

    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        hermiticity_residual(&self.entries) <= rel_tol * linalg::op_norm(&self.entries)
    }
}

fn hermiticity_residual(h: &CMat) -> f64 {
    linalg::op_norm(&(h - h.adjoint()))
}

/// An operator-sum representation `Σ_j K_j • K_j†`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    dim: usize,
    operators: Vec<HilbertOperator>,
}

impl KrausSet {
    /// Validates dimensions and the subunital condition `Σ K_j†K_j ≤ I`.
    pub fn new(operators: Vec<HilbertOperator>) -> Result<Self> {
        Self::with_tolerance(operators, KRAUS_TOL)
    }

    pub fn with_tolerance(operators: Vec<HilbertOperator>, tol: f64) -> Result<Self> {
        let first = operators
            .first()
            .ok_or_else(|| ZenoError::InvalidInput("a Kraus set needs at least one operator".into()))?;
        let dim = first.dim();
        if let Some(bad) = operators.iter().find(|k| k.dim() != dim) {
            return Err(ZenoError::Dimension(format!(
                "Kraus operators of dimension {} and {}",
                dim,
                bad.dim()
            )));
        }
        if operators.len() > dim * dim {
            return Err(ZenoError::InvalidInput(format!(
                "{} Kraus operators exceed d² = {}",
                operators.len(),
                dim * dim
            )));
        }
        let set = KrausSet { dim, operators };
        let deficit = identity(dim) - set.effect();
        let min_eig = hermitian_eigenvalues(&deficit)[0];
        if min_eig < -tol {
            return Err(ZenoError::InvalidInput(format!(
                "Σ K†K exceeds the identity (min eigenvalue of I - Σ K†K is {min_eig:.3e})"
            )));
        }
        Ok(set)
    }

    pub fn from_matrices(ops: Vec<CMat>) -> Result<Self> {
        let ops = ops.into_iter().map(HilbertOperator::new).collect::<Result<Vec<_>>>()?;
        KrausSet::new(ops)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[HilbertOperator] {
        &self.operators
    }

    /// `Σ_j K_j† K_j`.
    pub fn effect(&self) -> CMat {
        self.operators
            .iter()
            .fold(CMat::zeros(self.dim, self.dim), |acc, k| acc + k.matrix().adjoint() * k.matrix())
    }

    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        linalg::op_norm(&(self.effect() - identity(self.dim))) <= tol
    }
}

/// A linear map on `d × d` operators, stored as a `d² × d²` matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperOperator {
    dim: usize,
    #[serde(with = "crate::io::cmat_serde")]
    matrix: CMat,
    #[serde(default)]
    convention: Convention,
}

impl SuperOperator {
    pub fn new(dim: usize, matrix: CMat) -> Result<Self> {
        let n = dim * dim;
        if dim == 0 || matrix.nrows() != n || matrix.ncols() != n {
            return Err(ZenoError::Dimension(format!(
                "superoperator on d = {dim} needs a {n}×{n} matrix, got {}×{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(SuperOperator { dim, matrix, convention: Convention::ColumnStacking })
    }

    /// Wraps a square matrix whose size is a perfect square.
    pub fn from_matrix(matrix: CMat) -> Result<Self> {
        let n = matrix.nrows();
        let dim = (n as f64).sqrt().round() as usize;
        SuperOperator::new(dim, matrix)
    }

    pub fn identity(dim: usize) -> Self {
        SuperOperator::new(dim, identity(dim * dim)).unwrap()
    }

    pub fn zero(dim: usize) -> Self {
        SuperOperator::new(dim, CMat::zeros(dim * dim, dim * dim)).unwrap()
    }

    /// The map `X ↦ A X B`.
    pub fn sandwich(a: &CMat, b: &CMat) -> Self {
        SuperOperator::from_matrix(kron(&b.transpose(), a)).unwrap()
    }

    /// The map `X ↦ A X A†`.
    pub fn conjugation(a: &CMat) -> Self {
        SuperOperator::sandwich(a, &a.adjoint())
    }

    /// The map `X ↦ A tr(B X)`.
    pub fn trace_map(a: &CMat, b: &CMat) -> Self {
        let va = vec(a);
        let vb = vec(&b.transpose());
        SuperOperator::from_matrix(&va * vb.transpose()).unwrap()
    }

    /// `-i[H, •]`.
    pub fn hamiltonian(h: &CMat) -> Self {
        let d = h.nrows();
        let id = identity(d);
        let m = (kron(&id, h) - kron(&h.transpose(), &id)) * (-IM);
        SuperOperator::new(d, m).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMat {
        self.matrix
    }

    pub fn apply(&self, x: &CMat) -> CMat {
        unvec(&(&self.matrix * vec(x)), self.dim)
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &SuperOperator) -> SuperOperator {
        assert_eq!(self.dim, other.dim, "composing superoperators of different dimension");
        SuperOperator { dim: self.dim, matrix: &self.matrix * &other.matrix, convention: self.convention }
    }

    pub fn add(&self, other: &SuperOperator) -> SuperOperator {
        assert_eq!(self.dim, other.dim);
        SuperOperator { dim: self.dim, matrix: &self.matrix + &other.matrix, convention: self.convention }
    }

    pub fn sub(&self, other: &SuperOperator) -> SuperOperator {
        assert_eq!(self.dim, other.dim);
        SuperOperator { dim: self.dim, matrix: &self.matrix - &other.matrix, convention: self.convention }
    }

    pub fn scale(&self, s: C64) -> SuperOperator {
        SuperOperator { dim: self.dim, matrix: &self.matrix * s, convention: self.convention }
    }

    pub fn pow(&self, n: u64) -> SuperOperator {
        SuperOperator { dim: self.dim, matrix: linalg::matrix_power(&self.matrix, n), convention: self.convention }
    }

    pub fn distance(&self, other: &SuperOperator) -> f64 {
        linalg::op_norm(&(&self.matrix - &other.matrix))
    }
}

/// A GKLS generator `-i[H, •] + Σ_j (L_j • L_j† - ½{L_j†L_j, •})`.
#[derive(Debug, Clone, PartialEq)]
pub struct GklsGenerator {
    pub hamiltonian: HilbertOperator,
    pub jumps: Vec<HilbertOperator>,
}

impl GklsGenerator {
    pub fn new(hamiltonian: CMat, jumps: Vec<CMat>) -> Result<Self> {
        let hamiltonian = HilbertOperator::new(hamiltonian)?;
        let jumps = jumps.into_iter().map(HilbertOperator::new).collect::<Result<Vec<_>>>()?;
        let g = GklsGenerator { hamiltonian, jumps };
        g.validate()?;
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        if let Some(j) = self.jumps.iter().find(|j| j.dim() != d) {
            return Err(ZenoError::Dimension(format!("jump operator of dimension {} for d = {d}", j.dim())));
        }
        let h = self.hamiltonian.matrix();
        let residual = hermiticity_residual(h);
        if residual > HERMITIAN_TOL * linalg::op_norm(h) {
            return Err(ZenoError::NonHermitian { residual });
        }
        Ok(())
    }
}

pub fn kraus_to_superop(k: &KrausSet) -> SuperOperator {
    let d = k.dim();
    let m = k
        .operators()
        .iter()
        .fold(CMat::zeros(d * d, d * d), |acc, op| acc + kron(&op.matrix().conjugate(), op.matrix()));
    SuperOperator::new(d, m).unwrap()
}

pub fn gkls_to_superop(g: &GklsGenerator) -> Result<SuperOperator> {
    g.validate()?;
    let d = g.dim();
    let id = identity(d);
    let mut m = SuperOperator::hamiltonian(g.hamiltonian.matrix()).into_matrix();
    for j in &g.jumps {
        let l = j.matrix();
        let ll = l.adjoint() * l;
        m += kron(&l.conjugate(), l) - kron(&id, &ll) * c64(0.5, 0.0) - kron(&ll.transpose(), &id) * c64(0.5, 0.0);
    }
    SuperOperator::new(d, m)
}

/// `exp(tL)`, rejecting `‖tL‖ > EXP_NORM_CAP`.
pub fn superop_exp(l: &SuperOperator, t: f64) -> Result<SuperOperator> {
    superop_exp_capped(l, t, EXP_NORM_CAP)
}

pub fn superop_exp_capped(l: &SuperOperator, t: f64, cap: f64) -> Result<SuperOperator> {
    if !t.is_finite() {
        return Err(ZenoError::InvalidInput(format!("non-finite time {t}")));
    }
    let scaled = l.matrix() * c64(t, 0.0);
    if linalg::fro_norm(&scaled) > cap {
        let norm = linalg::op_norm(&scaled);
        if norm > cap {
            return Err(ZenoError::ExpOverflow { norm, cap });
        }
    }
    SuperOperator::new(l.dim(), linalg::expm(&scaled))
}

pub fn op_norm(a: &SuperOperator) -> f64 {
    linalg::op_norm(a.matrix())
}

/// Result of the Choi-matrix physicality test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CpVerdict {
    Cptp,
    CpOnly,
    NotCp,
}

impl CpVerdict {
    pub fn is_cp(self) -> bool {
        self != CpVerdict::NotCp
    }
}

/// Detailed physicality figures behind [`is_cptp`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Physicality {
    pub choi_min_eigenvalue: f64,
    pub choi_hermiticity: f64,
    pub trace_residual: f64,
    pub verdict: CpVerdict,
}

/// Choi matrix `Σ_ij E_ij ⊗ A(E_ij)`.
pub fn choi_matrix(a: &SuperOperator) -> CMat {
    let d = a.dim();
    let mut c = CMat::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            let e = matrix_unit(d, i, j);
            c += kron(&e, &a.apply(&e));
        }
    }
    c
}

pub fn physicality(a: &SuperOperator, cp_tol: f64, tp_tol: f64) -> Physicality {
    let d = a.dim();
    let c = choi_matrix(a);
    let choi_hermiticity = linalg::op_norm(&(&c - c.adjoint()));
    let choi_min_eigenvalue = hermitian_eigenvalues(&c)[0];
    let mut trace_residual: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let tr = a.apply(&matrix_unit(d, i, j)).trace();
            let target = if i == j { ONE } else { C64::new(0.0, 0.0) };
            trace_residual = trace_residual.max((tr - target).norm());
        }
    }
    let cp = choi_min_eigenvalue >= -cp_tol && choi_hermiticity <= cp_tol.max(1e-12);
    let verdict = match (cp, trace_residual <= tp_tol) {
        (false, _) => CpVerdict::NotCp,
        (true, true) => CpVerdict::Cptp,
        (true, false) => CpVerdict::CpOnly,
    };
    Physicality { choi_min_eigenvalue, choi_hermiticity, trace_residual, verdict }
}

/// CP iff the Choi matrix is PSD within `tol`; TP iff `tr A(E_ij) = δ_ij`
/// within [`TP_TOL`].
pub fn is_cptp(a: &SuperOperator, tol: f64) -> CpVerdict {
    physicality(a, tol, TP_TOL).verdict
}

/// [`is_cptp`] with the default tolerance `1e-9 · d`.
pub fn is_cptp_default(a: &SuperOperator) -> CpVerdict {
    is_cptp(a, CP_TOL_PER_DIM * a.dim() as f64)
}

/// Hilbert–Schmidt adjoint.
pub fn adjoint(a: &SuperOperator) -> SuperOperator {
    SuperOperator::new(a.dim(), a.matrix().adjoint()).unwrap()
}

/// Pauli and projector helpers used by examples and models.
pub mod ops {
    use crate::linalg::{c64, CMat};

    pub fn pauli_x() -> CMat {
        CMat::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)])
    }

    pub fn pauli_y() -> CMat {
        CMat::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(0.0, -1.0), c64(0.0, 1.0), c64(0.0, 0.0)])
    }

    pub fn pauli_z() -> CMat {
        CMat::from_row_slice(2, 2, &[c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(-1.0, 0.0)])
    }

    /// `|a⟩⟨b|` in dimension `d`.
    pub fn ketbra(d: usize, a: usize, b: usize) -> CMat {
        crate::linalg::matrix_unit(d, a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real_matrix;

    fn kraus_82(q: f64) -> KrausSet {
        let k0 = real_matrix(3, &[0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, q.sqrt()]);
        let k1 = real_matrix(3, &[0.0, 0.0, (1.0 - q).sqrt(), 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        KrausSet::from_matrices(vec![k0, k1]).unwrap()
    }

    #[test]
    fn identity_channel() {
        let k = KrausSet::from_matrices(vec![identity(2)]).unwrap();
        let s = kraus_to_superop(&k);
        assert_eq!(s.matrix(), &identity(4));
        assert_eq!(is_cptp_default(&s), CpVerdict::Cptp);
    }

    #[test]
    fn pauli_flip_acts_on_units() {
        let x = ops::pauli_x();
        let s = kraus_to_superop(&KrausSet::from_matrices(vec![x.clone()]).unwrap());
        for a in 0..2 {
            for b in 0..2 {
                let e = matrix_unit(2, a, b);
                assert!((s.apply(&e) - &x * &e * &x).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn cptp_kick_is_trace_preserving() {
        let k = kraus_82(0.3);
        assert!(k.is_trace_preserving(1e-12));
        assert_eq!(is_cptp_default(&kraus_to_superop(&k)), CpVerdict::Cptp);
    }

    #[test]
    fn oversized_kraus_sum_rejected() {
        let k = identity(2) * c64(1.1, 0.0);
        assert!(KrausSet::from_matrices(vec![k]).is_err());
    }

    #[test]
    fn transpose_is_not_cp() {
        let mut m = CMat::zeros(4, 4);
        for a in 0..2 {
            for b in 0..2 {
                m[(b + 2 * a, a + 2 * b)] = ONE;
            }
        }
        let t = SuperOperator::new(2, m).unwrap();
        assert_eq!(t.apply(&ops::pauli_y()), ops::pauli_y().transpose());
        assert_eq!(is_cptp_default(&t), CpVerdict::NotCp);
    }

    #[test]
    fn gkls_matches_definition() {
        let h = real_matrix(2, &[0.3, 0.1, 0.1, -0.2]);
        let l = CMat::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(0.5, 0.2), c64(0.1, 0.0), c64(0.0, 0.3)]);
        let g = GklsGenerator::new(h.clone(), vec![l.clone()]).unwrap();
        let s = gkls_to_superop(&g).unwrap();
        let rho = CMat::from_row_slice(2, 2, &[c64(0.6, 0.0), c64(0.1, -0.2), c64(0.1, 0.2), c64(0.4, 0.0)]);
        let ll = l.adjoint() * &l;
        let expected = (&h * &rho - &rho * &h) * (-IM) - (&ll * &rho + &rho * &ll - (&l * &rho * l.adjoint()) * c64(2.0, 0.0)) * c64(0.5, 0.0);
        assert!((s.apply(&rho) - expected).norm() < 1e-14);
    }

    #[test]
    fn non_hermitian_hamiltonian_rejected() {
        let h = real_matrix(2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(GklsGenerator::new(h, vec![]), Err(ZenoError::NonHermitian { .. })));
    }

    #[test]
    fn zero_generator_and_exponential() {
        let g = GklsGenerator::new(CMat::zeros(2, 2), vec![]).unwrap();
        let l = gkls_to_superop(&g).unwrap();
        assert_eq!(l.matrix(), &CMat::zeros(4, 4));
        assert_eq!(superop_exp(&l, 3.0).unwrap().matrix(), &identity(4));
    }

    #[test]
    fn unitary_rotation() {
        let omega = 1.3;
        let h = ops::pauli_z() * c64(0.5 * omega, 0.0);
        let l = SuperOperator::hamiltonian(&h);
        let t = 0.7;
        let e = superop_exp(&l, t).unwrap();
        let u = linalg::expm(&(&h * (-IM * t)));
        let x = ops::pauli_x();
        assert!((e.apply(&x) - &u * &x * u.adjoint()).norm() < 1e-13);
        assert!((e.apply(&ops::pauli_z()) - ops::pauli_z()).norm() < 1e-13);
        let rotated = ops::pauli_x() * c64((omega * t).cos(), 0.0) + ops::pauli_y() * c64((omega * t).sin(), 0.0);
        assert!((e.apply(&x) - rotated).norm() < 1e-13);
    }

    #[test]
    fn dephasing_conserves_populations() {
        let h = CMat::from_diagonal(&crate::linalg::CVec::from_vec(vec![c64(0.0, 0.0), c64(1.0, 0.0), c64(2.0, 0.0)]));
        let j = real_matrix(3, &[0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]) * c64(2f64.sqrt(), 0.0);
        let l = gkls_to_superop(&GklsGenerator::new(h, vec![j]).unwrap()).unwrap();
        let e = superop_exp(&l, 1.0).unwrap();
        for a in 0..3 {
            let out = e.apply(&matrix_unit(3, a, a));
            assert!((out - matrix_unit(3, a, a)).norm() < 1e-13);
        }
        assert_eq!(is_cptp_default(&e), CpVerdict::Cptp);
    }

    #[test]
    fn exponential_cap() {
        let l = SuperOperator::identity(2);
        assert!(matches!(superop_exp(&l, 2e4), Err(ZenoError::ExpOverflow { .. })));
    }

    #[test]
    fn adjoint_is_kraus_dagger() {
        let k = kraus_82(0.3);
        let s = kraus_to_superop(&k);
        let kd = KrausSet::with_tolerance(k.operators().iter().map(|o| o.dagger()).collect(), 1.0).unwrap();
        assert!((adjoint(&s).matrix() - kraus_to_superop(&kd).matrix()).norm() < 1e-15);
        let unital = adjoint(&s).apply(&identity(3));
        assert!((unital - identity(3)).norm() < 1e-14);
    }

    #[test]
    fn trace_map_and_sandwich() {
        let a = real_matrix(2, &[1.0, 2.0, 3.0, 4.0]);
        let b = real_matrix(2, &[0.0, 1.0, -1.0, 0.5]);
        let x = CMat::from_row_slice(2, 2, &[c64(0.2, 0.1), c64(-1.0, 0.0), c64(0.3, 0.3), c64(0.0, 2.0)]);
        let t = SuperOperator::trace_map(&a, &b);
        assert!((t.apply(&x) - &a * (&b * &x).trace()).norm() < 1e-14);
        let s = SuperOperator::sandwich(&a, &b);
        assert!((s.apply(&x) - &a * &x * &b).norm() < 1e-14);
    }

    #[test]
    fn norm_of_qubit_channel_at_most_sqrt_two() {
        let k = KrausSet::from_matrices(vec![
            real_matrix(2, &[1.0, 0.0, 0.0, 0.0]),
            real_matrix(2, &[0.0, 1.0, 0.0, 0.0]),
        ])
        .unwrap();
        let n = op_norm(&kraus_to_superop(&k));
        assert!(n <= 2f64.sqrt() + 1e-12 && n > 1.0);
    }
}
