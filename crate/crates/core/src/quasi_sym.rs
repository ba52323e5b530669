//! Quasi-symmetriser Q_eps of a Sylvester matrix with real eigenvalues.

use alloc::format;
use alloc::vec::Vec;
use nalgebra::DMatrix;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{self, factorial, sigma_all, to_complex, C64};
use crate::symbol::MAX_M;

/// lambda with entry i removed.
pub fn delete(lambda: &[f64], i: usize) -> Vec<f64> {
    lambda
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != i)
        .map(|(_, &x)| x)
        .collect()
}

/// Unit lower-triangular P^{(m)}(lambda); row r carries
/// (sigma_r^{(r)}, ..., sigma_1^{(r)}, 1) of (lambda_1..lambda_r).
pub fn build_p(lambda: &[f64]) -> DMatrix<f64> {
    let m = lambda.len();
    let mut p = DMatrix::zeros(m, m);
    for r in 0..m {
        let s = sigma_all(&lambda[..r]);
        for c in 0..r {
            p[(r, c)] = s[r - c];
        }
        p[(r, r)] = 1.0;
    }
    p
}

/// Rows (sigma_{m-1}^{(m-1)}(pi_i lambda), ..., sigma_1^{(m-1)}(pi_i lambda), 1).
pub fn build_w(lambda: &[f64]) -> DMatrix<f64> {
    let m = lambda.len();
    let mut w = DMatrix::zeros(m, m);
    for i in 0..m {
        let s = sigma_all(&delete(lambda, i));
        for c in 0..m {
            w[(i, c)] = s[m - 1 - c];
        }
    }
    w
}

/// Sylvester companion M(lambda): superdiagonal ones, last row (-sigma_m, ..., -sigma_1).
pub fn sylvester_companion(lambda: &[f64]) -> DMatrix<f64> {
    let m = lambda.len();
    let s = sigma_all(lambda);
    let mut mat = DMatrix::zeros(m, m);
    for r in 0..m.saturating_sub(1) {
        mat[(r, r + 1)] = 1.0;
    }
    for c in 0..m {
        mat[(m - 1, c)] = -s[m - c];
    }
    mat
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuasiSymmetriser {
    pub m: usize,
    pub eps: f64,
    /// Sorted eigenvalues the construction used.
    pub lambdas: Vec<f64>,
    pub q_eps: DMatrix<f64>,
    /// Q_0 .. Q_{m-1} with Q_eps = sum eps^{2i} Q_i.
    pub parts: Vec<DMatrix<f64>>,
    pub w: DMatrix<f64>,
}

impl QuasiSymmetriser {
    pub fn q0(&self) -> &DMatrix<f64> {
        &self.parts[0]
    }

    /// Block-diagonal lifting of Q_eps.
    pub fn lifted_q(&self) -> DMatrix<f64> {
        lift_blocks(&self.q_eps)
    }

    pub fn lifted_w(&self) -> DMatrix<f64> {
        lift_blocks(&self.w)
    }
}

/// Q_eps = sum over permutations rho of P_eps(lambda_rho)^T P_eps(lambda_rho).
///
/// Q_i collects row m-1-i of each P(lambda_rho), the row scaled by eps^i in H_eps.
pub fn build_q_eps(lambda: &[f64], eps: f64) -> Result<QuasiSymmetriser> {
    let m = lambda.len();
    if m > MAX_M {
        return Err(Error::Capability(format!(
            "m = {m} exceeds {MAX_M}: permutation sum too large"
        )));
    }
    if m == 0 {
        return Err(Error::Domain("empty eigenvalue vector".into()));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::Domain(format!("eps = {eps} outside (0, 1]")));
    }
    let mut sorted = lambda.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut parts = alloc::vec![DMatrix::<f64>::zeros(m, m); m];
    for rho in linalg::permutations(m) {
        let lr: Vec<f64> = rho.iter().map(|&k| sorted[k]).collect();
        let p = build_p(&lr);
        for (i, part) in parts.iter_mut().enumerate() {
            let row = p.row(m - 1 - i);
            *part += row.transpose() * row;
        }
    }
    let q_eps = parts
        .iter()
        .enumerate()
        .fold(DMatrix::zeros(m, m), |acc, (i, q)| {
            acc + q * eps.powi(2 * i as i32)
        });
    Ok(QuasiSymmetriser {
        m,
        eps,
        w: build_w(&sorted),
        lambdas: sorted,
        q_eps,
        parts,
    })
}

pub fn lift_blocks(block: &DMatrix<f64>) -> DMatrix<f64> {
    linalg::block_diag(block, block.nrows())
}

/// Largest c0 with Q >= c0 diag(Q).
pub fn near_diagonal_constant(q: &DMatrix<f64>) -> Result<f64> {
    let n = q.nrows();
    let d: Vec<f64> = (0..n).map(|i| q[(i, i)]).collect();
    if let Some(k) = d.iter().position(|&x| !(x > 0.0)) {
        return Err(Error::Degenerate(format!("diagonal entry {k} is {}", d[k])));
    }
    let scaled = DMatrix::from_fn(n, n, |i, j| q[(i, j)] / (d[i].sqrt() * d[j].sqrt()));
    Ok(linalg::symmetric_eigen(&scaled).0[0])
}

/// Numerical read-out of the listed quasi-symmetriser properties.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyReport {
    pub m: usize,
    pub eps: f64,
    /// (i) smallest eigenvalue of each Q_i, relative to its largest.
    pub part_min_eig: Vec<f64>,
    /// (ii) C with C^{-1} eps^{2(m-1)} <= Q_eps <= C.
    pub coercivity_constant: f64,
    pub q_min_eig: f64,
    pub q_max_eig: f64,
    /// (iii) max |generalized eigenvalue| of (-i(QM - M^T Q), Q) divided by eps.
    pub commutator_constant: f64,
    /// (iv) |Q_eps - Q_0 - eps^2 sum_i Q_eps^{(m-1)}(pi_i lambda)^#|_F
    pub recursion_residual: f64,
    /// (v) |Q_0 - (m-1)! W^T W|_F / (1 + |Q_0|_F)
    pub w_identity_residual: f64,
    pub det_q0: f64,
    pub vandermonde_sq: f64,
    /// (vi) as printed: det Q_0 against (m-1)! prod (lambda_i - lambda_j)^2, relative.
    pub det_residual_printed: f64,
    /// (vi) with the factor ((m-1)!)^m implied by (v), relative.
    pub det_residual_consistent: f64,
    /// (vii) prod_j q_{0,jj} / prod_{i<j} (lambda_i^2 + lambda_j^2); NaN for a vanishing denominator.
    pub diag_product_ratio: f64,
}

fn sharp(t: &DMatrix<f64>, m: usize) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(m, m);
    out.view_mut((0, 0), t.shape()).copy_from(t);
    out
}

fn q_eps_any(lambda: &[f64], eps: f64) -> Result<DMatrix<f64>> {
    Ok(build_q_eps(lambda, eps)?.q_eps)
}

/// sup over V of |((Q M - M^T Q) V, V)| / (eps (Q V, V)) with M the
/// companion matrix of the construction's eigenvalues.
pub fn commutator_constant(qs: &QuasiSymmetriser) -> Result<f64> {
    let mm = sylvester_companion(&qs.lambdas);
    let comm = &qs.q_eps * &mm - mm.transpose() * &qs.q_eps;
    let herm = to_complex(&comm) * C64::new(0.0, -1.0);
    let gen = linalg::generalized_hermitian_eigenvalues(&herm, &to_complex(&qs.q_eps))
        .ok_or_else(|| Error::Degenerate("Q_eps is not positive definite".into()))?;
    Ok(gen.iter().map(|x| x.abs()).fold(0.0, f64::max) / qs.eps)
}

pub fn verify_properties(lambda: &[f64], eps: f64) -> Result<PropertyReport> {
    let qs = build_q_eps(lambda, eps)?;
    let m = qs.m;
    let lam = &qs.lambdas;

    let part_min_eig = qs
        .parts
        .iter()
        .map(|p| {
            let ev = linalg::symmetric_eigen(p).0;
            let top = ev[m - 1].abs().max(f64::MIN_POSITIVE);
            ev[0] / top
        })
        .collect();

    let ev = linalg::symmetric_eigen(&qs.q_eps).0;
    let (q_min_eig, q_max_eig) = (ev[0], ev[m - 1]);
    let floor = eps.powi(2 * (m as i32 - 1));
    let coercivity_constant = q_max_eig.max(floor / q_min_eig);

    let commutator_constant = commutator_constant(&qs)?;

    let mut rec = &qs.q_eps - qs.q0();
    for i in 0..m {
        let sub = if m == 1 {
            DMatrix::zeros(0, 0)
        } else {
            q_eps_any(&delete(lam, i), eps)?
        };
        rec -= sharp(&sub, m) * (eps * eps);
    }
    let recursion_residual = rec.norm();

    let fact = factorial(m - 1);
    let wtw = qs.w.transpose() * &qs.w;
    let w_identity_residual = (qs.q0() - &wtw * fact).norm() / (1.0 + qs.q0().norm());

    let det_q0 = qs.q0().determinant();
    let mut vandermonde_sq = 1.0;
    let mut pair_sq = 1.0;
    for i in 0..m {
        for j in i + 1..m {
            vandermonde_sq *= (lam[i] - lam[j]).powi(2);
            pair_sq *= lam[i] * lam[i] + lam[j] * lam[j];
        }
    }
    let det_residual_printed = linalg::rel_diff(det_q0, fact * vandermonde_sq);
    let det_residual_consistent = linalg::rel_diff(det_q0, fact.powi(m as i32) * vandermonde_sq);

    let diag_prod: f64 = (0..m).map(|j| qs.q0()[(j, j)]).product();
    let diag_product_ratio = if pair_sq > 0.0 {
        diag_prod / pair_sq
    } else {
        f64::NAN
    };

    Ok(PropertyReport {
        m,
        eps,
        part_min_eig,
        coercivity_constant,
        q_min_eig,
        q_max_eig,
        commutator_constant,
        recursion_residual,
        w_identity_residual,
        det_q0,
        vandermonde_sq,
        det_residual_printed,
        det_residual_consistent,
        diag_product_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn p_examples() {
        assert_eq!(build_p(&[3.0]), DMatrix::from_element(1, 1, 1.0));
        assert_eq!(
            build_p(&[2.5, -1.0]),
            DMatrix::from_row_slice(2, 2, &[1.0, 0.0, -2.5, 1.0])
        );
        let p = build_p(&[0.3, -1.2, 2.0, 0.7]);
        assert!((p.determinant() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn w_examples() {
        let w2 = build_w(&[1.0, 2.0]);
        assert_eq!(w2, DMatrix::from_row_slice(2, 2, &[-2.0, 1.0, -1.0, 1.0]));
        let (a, b, c) = (-1.0, 0.5, 2.0);
        let w3 = build_w(&[a, b, c]);
        assert_eq!(
            w3.row(0).iter().copied().collect::<Vec<_>>(),
            vec![b * c, -(b + c), 1.0]
        );
    }

    #[test]
    fn degenerate_m2() {
        let q = build_q_eps(&[0.4, 0.4], 0.5).unwrap();
        assert!(q.q0().determinant().abs() < 1e-15);
    }

    #[test]
    fn m2_separated_pair() {
        let r = verify_properties(&[1.0, -1.0], 0.1).unwrap();
        assert!((r.det_q0 - 4.0).abs() < 1e-14);
        let q = build_q_eps(&[1.0, -1.0], 0.1).unwrap();
        assert_eq!(
            *q.q0(),
            DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 2.0])
        );
        assert!((near_diagonal_constant(q.q0()).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn near_diagonal_examples() {
        let d = DMatrix::from_row_slice(2, 2, &[3.0, 0.0, 0.0, 5.0]);
        assert!((near_diagonal_constant(&d).unwrap() - 1.0).abs() < 1e-15);
        let r1 = DMatrix::from_element(2, 2, 1.0);
        assert!(near_diagonal_constant(&r1).unwrap().abs() < 1e-15);
        let z = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0]);
        assert!(matches!(
            near_diagonal_constant(&z),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn lift_structure() {
        let b = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let l = lift_blocks(&b);
        assert_eq!(l.shape(), (4, 4));
        assert_eq!(l.view((2, 2), (2, 2)), b.view((0, 0), (2, 2)));
        assert_eq!(l[(0, 2)], 0.0);
        assert_eq!(l[(3, 1)], 0.0);
    }

    #[test]
    fn capability_limit() {
        assert!(matches!(
            build_q_eps(&[0.0; 7], 0.5),
            Err(Error::Capability(_))
        ));
    }
}
