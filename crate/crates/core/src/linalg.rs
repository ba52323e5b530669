//! Small dense helpers on top of nalgebra.

use alloc::vec::Vec;
use nalgebra::{Complex, DMatrix, DVector, Schur, SymmetricEigen};
#[allow(unused_imports)]
use num_traits::Float;

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

pub fn to_complex(a: &DMatrix<f64>) -> CMat {
    a.map(|x| C64::new(x, 0.0))
}

/// (-i)^k
pub fn minus_i_pow(k: usize) -> C64 {
    match k % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, -1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, 1.0),
    }
}

pub fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// All permutations of 0..m in lexicographic order.
pub fn permutations(m: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..m).collect();
    let mut out = alloc::vec![cur.clone()];
    loop {
        let Some(i) = (1..m).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..m).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// Signed elementary symmetric polynomials sigma_0..sigma_q, sigma_h = (-1)^h e_h.
///
/// The input is sorted first so the result is bit-identical under permutation.
pub fn sigma_all(lambda: &[f64]) -> Vec<f64> {
    let mut sorted = lambda.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut e = alloc::vec![0.0; sorted.len() + 1];
    e[0] = 1.0;
    for (n, &x) in sorted.iter().enumerate() {
        for h in (1..=n + 1).rev() {
            e[h] += e[h - 1] * x;
        }
    }
    for (h, v) in e.iter_mut().enumerate() {
        if h % 2 == 1 {
            *v = -*v;
        }
    }
    e
}

/// Complex variant of [`sigma_all`], no sorting.
pub fn sigma_all_complex(z: &[C64]) -> Vec<C64> {
    let mut e = alloc::vec![C64::new(0.0, 0.0); z.len() + 1];
    e[0] = C64::new(1.0, 0.0);
    for (n, &x) in z.iter().enumerate() {
        for h in (1..=n + 1).rev() {
            e[h] = e[h] + e[h - 1] * x;
        }
    }
    for (h, v) in e.iter_mut().enumerate() {
        if h % 2 == 1 {
            *v = -*v;
        }
    }
    e
}

/// Coefficients c_0 = 1, ..., c_m of det(tau I - A) by Faddeev-LeVerrier.
pub fn faddeev_leverrier(a: &DMatrix<f64>) -> Vec<f64> {
    let m = a.nrows();
    let mut c = alloc::vec![0.0; m + 1];
    c[0] = 1.0;
    let mut mk = DMatrix::<f64>::identity(m, m);
    for k in 1..=m {
        let am = a * &mk;
        c[k] = -am.trace() / k as f64;
        mk = am + DMatrix::identity(m, m) * c[k];
    }
    c
}

fn schur_eigenvalues(a: &DMatrix<f64>) -> Option<Vec<C64>> {
    let schur = Schur::try_new(a.clone(), f64::EPSILON, 10_000)?;
    Some(schur.complex_eigenvalues().iter().copied().collect())
}

/// Eigenvalues of a general real matrix via real Schur.
///
/// The QR iteration can stall on exactly shifted nilpotent patterns, so on
/// failure the transpose and then a fixed Householder similarity are tried.
pub fn general_eigenvalues(a: &DMatrix<f64>) -> Option<Vec<C64>> {
    let n = a.nrows();
    if n == 0 {
        return Some(Vec::new());
    }
    schur_eigenvalues(a)
        .or_else(|| schur_eigenvalues(&a.transpose()))
        .or_else(|| {
            let v = DVector::from_fn(n, |k, _| 1.0 + k as f64 / n as f64);
            let h = DMatrix::identity(n, n) - &v * v.transpose() * (2.0 / v.norm_squared());
            schur_eigenvalues(&(&h * a * &h))
        })
}

fn horner_monic(c: &[f64], z: C64) -> (C64, C64) {
    let mut p = C64::new(1.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &ch in &c[1..] {
        dp = dp * z + p;
        p = p * z + ch;
    }
    (p, dp)
}

/// Roots of tau^m + c_1 tau^{m-1} + ... + c_m via the companion matrix,
/// each polished by a few guarded Newton steps on the polynomial.
pub fn monic_roots(c: &[f64]) -> Option<Vec<C64>> {
    let m = c.len() - 1;
    if m == 0 {
        return Some(Vec::new());
    }
    if c[m] == 0.0 {
        let mut r = monic_roots(&c[..m])?;
        r.push(C64::new(0.0, 0.0));
        return Some(r);
    }
    let mut comp = DMatrix::<f64>::zeros(m, m);
    for i in 0..m - 1 {
        comp[(i, i + 1)] = 1.0;
    }
    for j in 0..m {
        comp[(m - 1, j)] = -c[m - j];
    }
    let mut roots = general_eigenvalues(&comp)?;
    for r in roots.iter_mut() {
        let (mut p, _) = horner_monic(c, *r);
        for _ in 0..8 {
            let (_, dp) = horner_monic(c, *r);
            if dp.norm() == 0.0 || p.norm() == 0.0 {
                break;
            }
            let cand = *r - p / dp;
            let (pc, _) = horner_monic(c, cand);
            if !(pc.norm() < p.norm()) {
                break;
            }
            *r = cand;
            p = pc;
        }
    }
    Some(roots)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(a: &CMat) -> Vec<f64> {
    let h = (a + a.adjoint()) * C64::new(0.5, 0.0);
    let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Eigen-decomposition of a real symmetric matrix, eigenvalues ascending.
pub fn symmetric_eigen(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let h = (a + a.transpose()) * 0.5;
    let eig = SymmetricEigen::new(h);
    let n = a.nrows();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, idx[c])]);
    (vals, vecs)
}

/// Eigenvalues of the Hermitian pencil (a, b) with b positive definite, ascending.
///
/// Cholesky whitening; on failure b gets a 1e-12 relative diagonal jitter.
pub fn generalized_hermitian_eigenvalues(a: &CMat, b: &CMat) -> Option<Vec<f64>> {
    let n = b.nrows();
    let bh = (b + b.adjoint()) * C64::new(0.5, 0.0);
    let chol = bh.clone().cholesky().or_else(|| {
        let scale = (0..n)
            .map(|i| bh[(i, i)].re.abs())
            .fold(0.0, f64::max)
            .max(1.0);
        let jitter = CMat::identity(n, n) * C64::new(1e-12 * scale, 0.0);
        (bh + jitter).cholesky()
    })?;
    let l = chol.l();
    let x = l.solve_lower_triangular(a)?;
    let c = l.solve_lower_triangular(&x.adjoint())?;
    Some(hermitian_eigenvalues(&c))
}

pub fn spectral_norm(a: &CMat) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

pub fn spectral_norm_real(a: &DMatrix<f64>) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// Block diagonal matrix with `copies` copies of `block`.
pub fn block_diag<T: nalgebra::Scalar + num_traits::Zero>(
    block: &DMatrix<T>,
    copies: usize,
) -> DMatrix<T> {
    let (r, c) = block.shape();
    let mut out = DMatrix::<T>::zeros(r * copies, c * copies);
    for k in 0..copies {
        out.view_mut((k * r, k * c), (r, c)).copy_from(block);
    }
    out
}

/// v* a v
pub fn quad_form(a: &CMat, v: &CVec) -> C64 {
    v.dotc(&(a * v))
}

/// Relative difference |a-b| / max(|a|, |b|); 0 when both vanish.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    if d == 0.0 {
        0.0
    } else {
        d / a.abs().max(b.abs())
    }
}

/// <xi> = sqrt(1 + |xi|^2)
pub fn bracket(xi: &[f64]) -> f64 {
    (1.0 + xi.iter().map(|x| x * x).sum::<f64>()).sqrt()
}

pub fn norm(xi: &[f64]) -> f64 {
    xi.iter().map(|x| x * x).sum::<f64>().sqrt()
}
