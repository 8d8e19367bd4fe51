//! Dense complex linear algebra shared by the rest of the crate.
//!
//! Everything is column-major `nalgebra` storage, so `vec` is plain column
//! stacking and `vec(AXB) = (Bᵀ ⊗ A) vec(X)`.

use nalgebra::{DMatrix, DVector, Schur};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const IM: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn zeros(n: usize) -> CMat {
    CMat::zeros(n, n)
}

/// Builds a matrix from real row-major entries.
pub fn real_matrix(n: usize, rows: &[f64]) -> CMat {
    assert_eq!(rows.len(), n * n, "expected {} entries", n * n);
    CMat::from_fn(n, n, |i, j| c64(rows[i * n + j], 0.0))
}

/// Matrix unit `E_ab = |a⟩⟨b|`.
pub fn matrix_unit(n: usize, a: usize, b: usize) -> CMat {
    let mut m = zeros(n);
    m[(a, b)] = ONE;
    m
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Column-stacking vectorization.
pub fn vec(x: &CMat) -> CVec {
    CVec::from_column_slice(x.as_slice())
}

pub fn unvec(v: &CVec, d: usize) -> CMat {
    assert_eq!(v.len(), d * d, "vector length is not d²");
    CMat::from_column_slice(d, d, v.as_slice())
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn is_finite(a: &CMat) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Largest singular value (spectral norm).
pub fn op_norm(a: &CMat) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.singular_values().max()
}

pub fn min_singular_value(a: &CMat) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.singular_values().min()
}

/// Ratio of extreme singular values; infinite for singular input.
pub fn condition_number(a: &CMat) -> f64 {
    let s = a.singular_values();
    let lo = s.min();
    if lo == 0.0 {
        f64::INFINITY
    } else {
        s.max() / lo
    }
}

pub fn fro_norm(a: &CMat) -> f64 {
    a.norm()
}

pub fn one_norm(a: &CMat) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn hermitian_part(a: &CMat) -> CMat {
    (a + a.adjoint()).scale(0.5)
}

pub fn trace(a: &CMat) -> C64 {
    a.trace()
}

/// Matrix exponential (Padé scaling and squaring from `nalgebra`).
pub fn expm(a: &CMat) -> CMat {
    a.exp()
}

/// Exact integer power by repeated squaring.
pub fn matrix_power(a: &CMat, mut n: u64) -> CMat {
    let mut result = identity(a.nrows());
    let mut base = a.clone();
    while n > 0 {
        if n & 1 == 1 {
            result = &result * &base;
        }
        n >>= 1;
        if n > 0 {
            base = &base * &base;
        }
    }
    result
}

pub fn solve(a: &CMat, b: &CMat) -> Option<CMat> {
    a.clone().lu().solve(b)
}

pub fn inverse(a: &CMat) -> Option<CMat> {
    a.clone().try_inverse()
}

/// QR sweeps allowed per row before giving up on an iteration.
const SCHUR_SWEEPS_PER_ROW: usize = 100;

fn cabs1(z: C64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Givens rotation `G = [[c, s], [−s̄, c]]` with `G [x; y] = [r; 0]`.
fn givens(x: C64, y: C64) -> (f64, C64) {
    let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
    if r == 0.0 {
        return (1.0, ZERO);
    }
    if x.norm() == 0.0 {
        return (0.0, ONE);
    }
    let c = x.norm() / r;
    (c, x / x.norm() * y.conj() / r)
}

/// Single-shift complex QR on the Hessenberg form, deflating on
/// `|h_{k,k−1}| ≤ ε (|h_kk| + |h_{k−1,k−1}|)` or `≤ ε‖H‖`, with an
/// exceptional shift every tenth sweep.
fn hessenberg_qr(a: &CMat) -> Option<(CMat, CMat)> {
    let n = a.nrows();
    let (mut z, mut h) = a.clone().hessenberg().unpack();
    let eps = f64::EPSILON;
    let abs_tol = eps * h.norm();
    let mut ihi = n.saturating_sub(1);
    let mut iter = 0usize;
    let mut total = 0usize;
    while ihi > 0 {
        let mut l = ihi;
        while l > 0 {
            let sub = cabs1(h[(l, l - 1)]);
            let tst = cabs1(h[(l - 1, l - 1)]) + cabs1(h[(l, l)]);
            if sub <= eps * tst || sub <= abs_tol {
                break;
            }
            l -= 1;
        }
        if l > 0 {
            h[(l, l - 1)] = ZERO;
        }
        if l == ihi {
            ihi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > SCHUR_SWEEPS_PER_ROW * n {
            return None;
        }
        let shift = if iter % 10 == 0 {
            h[(ihi, ihi)] + c64(0.75 * h[(ihi, ihi - 1)].re.abs(), 0.0)
        } else {
            let (a11, a12, a21, a22) = (h[(ihi - 1, ihi - 1)], h[(ihi - 1, ihi)], h[(ihi, ihi - 1)], h[(ihi, ihi)]);
            let half = (a11 - a22) * 0.5;
            let disc = (half * half + a12 * a21).sqrt();
            let m1 = a22 + half + disc;
            let m2 = a22 + half - disc;
            if (m1 - a22).norm() <= (m2 - a22).norm() {
                m1
            } else {
                m2
            }
        };
        for k in l..ihi {
            let (x, y) = if k == l { (h[(l, l)] - shift, h[(l + 1, l)]) } else { (h[(k, k - 1)], h[(k + 1, k - 1)]) };
            let (c, s) = givens(x, y);
            let cc = c64(c, 0.0);
            let from = if k == l { l } else { k - 1 };
            for j in from..n {
                let (u, v) = (h[(k, j)], h[(k + 1, j)]);
                h[(k, j)] = cc * u + s * v;
                h[(k + 1, j)] = -s.conj() * u + cc * v;
            }
            let to = (k + 2).min(ihi);
            for i in 0..=to {
                let (u, v) = (h[(i, k)], h[(i, k + 1)]);
                h[(i, k)] = u * cc + v * s.conj();
                h[(i, k + 1)] = -u * s + v * cc;
            }
            for i in 0..n {
                let (u, v) = (z[(i, k)], z[(i, k + 1)]);
                z[(i, k)] = u * cc + v * s.conj();
                z[(i, k + 1)] = -u * s + v * cc;
            }
            if k > l {
                h[(k + 1, k - 1)] = ZERO;
            }
        }
    }
    Some((z, h))
}

/// Complex Schur form `A = Q T Q†` with `T` upper triangular.
///
/// Uses `nalgebra`'s iteration, whose one-ulp relative deflation test can
/// stall on highly degenerate input such as commutator superoperators; those
/// cases fall back to [`hessenberg_qr`].
pub fn schur(a: &CMat) -> (CMat, CMat) {
    let n = a.nrows();
    let cap = SCHUR_SWEEPS_PER_ROW * n.max(1);
    let (q, mut t) = Schur::try_new(a.clone(), f64::EPSILON, cap)
        .map(|s| s.unpack())
        .or_else(|| hessenberg_qr(a))
        .expect("Schur iteration failed to converge");
    for j in 0..n {
        for i in (j + 1)..n {
            t[(i, j)] = ZERO;
        }
    }
    (q, t)
}

pub fn eigenvalues(a: &CMat) -> Vec<C64> {
    if a.nrows() == 0 {
        return Vec::new();
    }
    let (_, t) = schur(a);
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

pub fn spectral_radius(a: &CMat) -> f64 {
    eigenvalues(a).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(a: &CMat) -> Vec<f64> {
    let h = hermitian_part(a);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev
}

/// Swaps the adjacent diagonal entries `k` and `k + 1` of an upper
/// triangular `t`, updating `q` so that `q t q†` is unchanged.
pub fn swap_schur_adjacent(q: &mut CMat, t: &mut CMat, k: usize) {
    let t11 = t[(k, k)];
    let t22 = t[(k + 1, k + 1)];
    let x1 = t[(k, k + 1)];
    let x2 = t22 - t11;
    let r = (x1.norm_sqr() + x2.norm_sqr()).sqrt();
    if r == 0.0 {
        return;
    }
    let (v1, v2) = (x1 / r, x2 / r);
    let g = CMat::from_row_slice(2, 2, &[v1, -v2.conj(), v2, v1.conj()]);
    let gh = g.adjoint();
    let n = t.nrows();
    let rows = t.rows(k, 2).into_owned();
    t.rows_mut(k, 2).copy_from(&(&gh * rows));
    let cols = t.columns(k, 2).into_owned();
    t.columns_mut(k, 2).copy_from(&(cols * &g));
    let qc = q.columns(k, 2).into_owned();
    q.columns_mut(k, 2).copy_from(&(qc * &g));
    t[(k + 1, k)] = ZERO;
    t[(k, k)] = t22;
    t[(k + 1, k + 1)] = t11;
    debug_assert_eq!(n, t.ncols());
}

/// Reorders a Schur form so that the selected diagonal entries come first.
/// Returns the number of selected entries.
pub fn reorder_schur(q: &mut CMat, t: &mut CMat, select: &[bool]) -> usize {
    let mut sel = select.to_vec();
    let n = sel.len();
    let mut slot = 0;
    for j in 0..n {
        if sel[j] {
            let mut i = j;
            while i > slot {
                swap_schur_adjacent(q, t, i - 1);
                sel.swap(i - 1, i);
                i -= 1;
            }
            slot += 1;
        }
    }
    slot
}

/// Solves `T11 X - X T22 = C` for upper triangular `T11`, `T22` with
/// disjoint spectra.
pub fn triangular_sylvester(t11: &CMat, t22: &CMat, c: &CMat) -> CMat {
    let p = t11.nrows();
    let r = t22.nrows();
    let mut x = CMat::zeros(p, r);
    for j in 0..r {
        let mut rhs: CVec = c.column(j).into_owned();
        for i in 0..j {
            let coef = t22[(i, j)];
            if coef != ZERO {
                rhs += x.column(i) * coef;
            }
        }
        let shift = t22[(j, j)];
        for row in (0..p).rev() {
            let mut acc = rhs[row];
            for col in (row + 1)..p {
                acc -= t11[(row, col)] * x[(col, j)];
            }
            x[(row, j)] = acc / (t11[(row, row)] - shift);
        }
    }
    x
}

/// Spectral projection of `A = Q T Q†` onto the invariant subspace of the
/// selected Schur eigenvalues, along the complementary one.
pub fn schur_projection(q: &CMat, t: &CMat, select: &[bool]) -> CMat {
    let n = t.nrows();
    let mut q = q.clone();
    let mut t = t.clone();
    let p = reorder_schur(&mut q, &mut t, select);
    if p == 0 {
        return zeros(n);
    }
    if p == n {
        return identity(n);
    }
    let t11 = t.view((0, 0), (p, p)).into_owned();
    let t12 = t.view((0, p), (p, n - p)).into_owned();
    let t22 = t.view((p, p), (n - p, n - p)).into_owned();
    let x = triangular_sylvester(&t11, &t22, &(-t12));
    let mut core = zeros(n);
    for i in 0..p {
        core[(i, i)] = ONE;
    }
    core.view_mut((0, p), (p, n - p)).copy_from(&(-x));
    &q * core * q.adjoint()
}

/// Block diagonalization of a Schur form `A = Q T Q†` along index groups.
///
/// Returns `(V, D, W, offsets)` with `A = V D W`, `W = V⁻¹`, `D` block diagonal
/// and group `k` occupying rows and columns `offsets[k]..offsets[k + 1]` of
/// `D`. The spectral projection of group `k` is `V[:, k] W[k, :]`.
pub fn block_diagonalize_schur(q: &CMat, t: &CMat, groups: &[Vec<usize>]) -> (CMat, CMat, CMat, Vec<usize>) {
    let n = t.nrows();
    let mut key = vec![0usize; n];
    for (g, members) in groups.iter().enumerate() {
        for &i in members {
            key[i] = g;
        }
    }
    let mut q = q.clone();
    let mut t = t.clone();
    // stable bubble sort by group through adjacent Schur swaps
    for pass in 0..n {
        let mut swapped = false;
        for k in 0..n.saturating_sub(1 + pass) {
            if key[k] > key[k + 1] {
                swap_schur_adjacent(&mut q, &mut t, k);
                key.swap(k, k + 1);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    let mut offsets = vec![0usize];
    for members in groups {
        offsets.push(offsets.last().unwrap() + members.len());
    }
    let mut v = q.clone();
    let mut w = q.adjoint();
    for k in 0..groups.len() {
        let (o, e) = (offsets[k], offsets[k + 1]);
        if e == n || e == o {
            continue;
        }
        let t11 = t.view((o, o), (e - o, e - o)).into_owned();
        let t22 = t.view((e, e), (n - e, n - e)).into_owned();
        let t12 = t.view((o, e), (e - o, n - e)).into_owned();
        let x = triangular_sylvester(&t11, &t22, &(-t12));
        let vx = v.columns(o, e - o) * &x;
        let mut vr = v.columns_mut(e, n - e);
        vr += vx;
        let xw = &x * w.rows(e, n - e);
        let mut wb = w.rows_mut(o, e - o);
        wb -= xw;
        t.view_mut((o, e), (e - o, n - e)).fill(ZERO);
    }
    (v, t, w, offsets)
}

/// Upper triangular square root of an upper triangular matrix with
/// eigenvalues off the closed negative real axis.
fn sqrt_triangular(t: &CMat) -> CMat {
    let n = t.nrows();
    let mut r = zeros(n);
    for i in 0..n {
        r[(i, i)] = t[(i, i)].sqrt();
    }
    for d in 1..n {
        for i in 0..(n - d) {
            let j = i + d;
            let mut s = t[(i, j)];
            for k in (i + 1)..j {
                s -= r[(i, k)] * r[(k, j)];
            }
            r[(i, j)] = s / (r[(i, i)] + r[(j, j)]);
        }
    }
    r
}

/// Principal logarithm by inverse scaling and squaring on the Schur
/// triangle. The spectrum must avoid the closed negative real axis.
pub fn logm_principal(a: &CMat) -> CMat {
    let n = a.nrows();
    if n == 0 {
        return a.clone();
    }
    let (q, mut t) = schur(a);
    let id = identity(n);
    let mut s = 0u32;
    while one_norm(&(&t - &id)) > 0.1 && s < 64 {
        t = sqrt_triangular(&t);
        s += 1;
    }
    let x = &t - &id;
    let z = &x * solve(&(&x + &id * c64(2.0, 0.0)), &id).expect("I + X/2 is invertible");
    let z2 = &z * &z;
    let mut term = z.clone();
    let mut sum = z.clone();
    for k in 1..60 {
        term = &term * &z2;
        let add = term.scale(1.0 / (2 * k + 1) as f64);
        let small = one_norm(&add) <= 1e-18 * one_norm(&sum).max(1e-300);
        sum += add;
        if small {
            break;
        }
    }
    let log_t = sum.scale(2.0 * 2f64.powi(s as i32));
    &q * log_t * q.adjoint()
}

/// Least-squares slope of `ln y` against `ln x`, skipping nonpositive `y`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}
