//! The matrix symbol A(t, xi) and its characteristic algebra.

use alloc::format;
use alloc::vec::Vec;
use nalgebra::DMatrix;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{self, bracket, norm};
use crate::poly::Poly;

pub const MAX_M: usize = 6;
pub const CHAR_XCHECK_TOL: f64 = 1e-8;

/// A(t, xi) = sum_p A_p(t) xi_p with polynomial entries in t.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSymbol {
    m: usize,
    n: usize,
    /// One row-major m*m block per spatial direction.
    coeffs: Vec<Vec<Poly>>,
    horizon: f64,
}

impl SystemSymbol {
    pub fn new(m: usize, n: usize, coeffs: Vec<Vec<Poly>>, horizon: f64) -> Result<Self> {
        if m < 1 {
            return Err(Error::Domain(format!("m = {m} must be at least 1")));
        }
        if m > MAX_M {
            return Err(Error::Capability(format!(
                "m = {m} exceeds the supported maximum {MAX_M}"
            )));
        }
        if n < 1 {
            return Err(Error::Domain(format!("n = {n} must be at least 1")));
        }
        if coeffs.len() != n {
            return Err(Error::Shape(format!(
                "expected {n} coefficient matrices, got {}",
                coeffs.len()
            )));
        }
        if let Some(bad) = coeffs.iter().position(|c| c.len() != m * m) {
            return Err(Error::Shape(format!(
                "direction {bad} does not hold {} entries",
                m * m
            )));
        }
        if coeffs
            .iter()
            .flatten()
            .flat_map(|p| p.coeffs())
            .any(|c| !c.is_finite())
        {
            return Err(Error::Domain("non-finite polynomial coefficient".into()));
        }
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::Domain(format!(
                "horizon T = {horizon} must be positive"
            )));
        }
        Ok(Self {
            m,
            n,
            coeffs,
            horizon,
        })
    }

    /// Convenience constructor for n = 1 from row-major ascending coefficient lists.
    pub fn from_rows_1d(m: usize, entries: &[&[f64]], horizon: f64) -> Result<Self> {
        let polys = entries.iter().map(|c| Poly::new(c.to_vec())).collect();
        Self::new(m, 1, alloc::vec![polys], horizon)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn coeffs(&self) -> &[Vec<Poly>] {
        &self.coeffs
    }

    pub fn entry(&self, direction: usize, i: usize, j: usize) -> &Poly {
        &self.coeffs[direction][i * self.m + j]
    }

    /// Symbol whose coefficients are the k-th formal t-derivatives.
    pub fn time_derivative(&self, k: usize) -> SystemSymbol {
        let coeffs = self
            .coeffs
            .iter()
            .map(|dir| dir.iter().map(|p| p.derivative(k)).collect())
            .collect();
        SystemSymbol { coeffs, ..*self }
    }

    pub fn check_point(&self, t: f64, xi: &[f64]) -> Result<()> {
        let slack = 1e-12 * (1.0 + self.horizon);
        if !(t >= -slack && t <= self.horizon + slack) {
            return Err(Error::Domain(format!(
                "t = {t} outside [0, {}]",
                self.horizon
            )));
        }
        if xi.len() != self.n {
            return Err(Error::Shape(format!(
                "xi has {} components, expected {}",
                xi.len(),
                self.n
            )));
        }
        if xi.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("non-finite frequency".into()));
        }
        Ok(())
    }

    /// A(t, xi) without the domain check.
    pub fn eval_unchecked(&self, t: f64, xi: &[f64]) -> DMatrix<f64> {
        let m = self.m;
        DMatrix::from_fn(m, m, |i, j| {
            self.coeffs
                .iter()
                .zip(xi)
                .map(|(dir, &x)| dir[i * m + j].eval(t) * x)
                .sum()
        })
    }
}

/// A(t, xi).
pub fn eval_symbol(s: &SystemSymbol, t: f64, xi: &[f64]) -> Result<DMatrix<f64>> {
    s.check_point(t, xi)?;
    Ok(s.eval_unchecked(t, xi))
}

/// Rescaled eigenvalues of A_0 = A / <xi>.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub lambdas: Vec<f64>,
    pub hyperbolic: bool,
    pub imag_residual: f64,
}

pub fn eig_imag_tol(spectral_radius: f64) -> f64 {
    1e-8 * (1.0 + spectral_radius)
}

/// Spectrum of a real matrix from its characteristic polynomial.
pub fn spectrum_of(a0: &DMatrix<f64>) -> Option<Spectrum> {
    let c = linalg::faddeev_leverrier(a0);
    let roots = linalg::monic_roots(&c)?;
    let rho = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let imag_residual = roots.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let mut lambdas: Vec<f64> = roots.iter().map(|z| z.re).collect();
    lambdas.sort_by(f64::total_cmp);
    Some(Spectrum {
        lambdas,
        hyperbolic: imag_residual <= eig_imag_tol(rho),
        imag_residual,
    })
}

pub fn rescaled_eigenvalues(s: &SystemSymbol, t: f64, xi: &[f64]) -> Result<Spectrum> {
    let a = eval_symbol(s, t, xi)?;
    let a0 = a / bracket(xi);
    spectrum_of(&a0).ok_or(Error::NonConvergence {
        t,
        xi_norm: norm(xi),
    })
}

/// sigma_h^{(q)}(lambda) = (-1)^h e_h(lambda).
pub fn elementary_symmetric(lambda: &[f64], h: usize) -> Result<f64> {
    if h > lambda.len() {
        return Err(Error::Domain(format!(
            "h = {h} exceeds q = {}",
            lambda.len()
        )));
    }
    Ok(linalg::sigma_all(lambda)[h])
}

/// Characteristic coefficients of the unrescaled A(t, xi).
#[derive(Debug, Clone, PartialEq)]
pub struct CharCoeffs {
    /// c_0 = 1, ..., c_m; c_h is homogeneous of degree h in xi.
    pub c: Vec<f64>,
    pub xcheck_residual: f64,
}

/// Faddeev-LeVerrier coefficients cross-checked against the eigenvalues of `a`.
pub fn char_coeffs_of(a: &DMatrix<f64>) -> Option<CharCoeffs> {
    let c = linalg::faddeev_leverrier(a);
    let eig = linalg::general_eigenvalues(a)?;
    let sig = linalg::sigma_all_complex(&eig);
    let scale = a.norm();
    let xcheck_residual = (1..c.len())
        .map(|h| {
            let d = (sig[h] - c[h]).norm();
            if d == 0.0 {
                0.0
            } else {
                d / scale.powi(h as i32)
            }
        })
        .fold(0.0, f64::max);
    Some(CharCoeffs { c, xcheck_residual })
}

pub fn char_coeffs(s: &SystemSymbol, t: f64, xi: &[f64]) -> Result<CharCoeffs> {
    let a = eval_symbol(s, t, xi)?;
    let cc = char_coeffs_of(&a).ok_or(Error::NonConvergence {
        t,
        xi_norm: norm(xi),
    })?;
    if !(cc.xcheck_residual <= CHAR_XCHECK_TOL) {
        return Err(Error::Consistency {
            what: "characteristic coefficients",
            residual: cc.xcheck_residual,
            tol: CHAR_XCHECK_TOL,
        });
    }
    Ok(cc)
}

fn powers(a: &DMatrix<f64>, upto: usize) -> Vec<DMatrix<f64>> {
    let m = a.nrows();
    let mut out = alloc::vec![DMatrix::identity(m, m)];
    for k in 1..=upto {
        let next = &out[k - 1] * a;
        out.push(next);
    }
    out
}

/// Coefficient matrices of adj(tau I - A) as a polynomial in tau, listed
/// from tau^{m-1} down to tau^0.
pub fn adjugate_coeffs_of(a: &DMatrix<f64>) -> Vec<DMatrix<f64>> {
    let m = a.nrows();
    let c = linalg::faddeev_leverrier(a);
    let pw = powers(a, m);
    (0..m)
        .rev()
        .map(|i| {
            let top = m - (i + 1);
            (0..=top).fold(DMatrix::zeros(m, m), |acc, h| acc + &pw[top - h] * c[h])
        })
        .collect()
}

pub fn adjugate_coeff_matrices(s: &SystemSymbol, t: f64, xi: &[f64]) -> Result<Vec<DMatrix<f64>>> {
    Ok(adjugate_coeffs_of(&eval_symbol(s, t, xi)?))
}

/// Evaluates adj(tau I - A) from the coefficient list of [`adjugate_coeffs_of`].
pub fn adjugate_at(coeffs: &[DMatrix<f64>], tau: f64) -> DMatrix<f64> {
    let m = coeffs[0].nrows();
    coeffs
        .iter()
        .fold(DMatrix::zeros(m, m), |acc, b| acc * tau + b)
}

/// det(tau I - A) from characteristic coefficients.
pub fn char_poly_at(c: &[f64], tau: f64) -> f64 {
    c.iter().fold(0.0, |acc, &ch| acc * tau + ch)
}

pub fn cayley_hamilton_residual_of(a: &DMatrix<f64>) -> f64 {
    let m = a.nrows();
    let c = linalg::faddeev_leverrier(a);
    let pw = powers(a, m);
    let sum = (0..=m).fold(DMatrix::zeros(m, m), |acc, h| acc + &pw[m - h] * c[h]);
    sum.norm() / (a.norm().powi(m as i32) + 1.0)
}

pub fn cayley_hamilton_residual(s: &SystemSymbol, t: f64, xi: &[f64]) -> Result<f64> {
    Ok(cayley_hamilton_residual_of(&eval_symbol(s, t, xi)?))
}
