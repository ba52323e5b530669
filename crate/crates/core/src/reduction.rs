//! Block-Sylvester reduction: bold A_h, bold B_h, the m^2 x m^2 pair
//! (calA, calB) and the transformed state.

use alloc::format;
use alloc::vec::Vec;
use nalgebra::DMatrix;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{self, binom, bracket, minus_i_pow, to_complex, CMat, CVec, C64};
use crate::symbol::{self, SystemSymbol};

/// Reduced system at one (t, xi).
#[derive(Debug, Clone)]
pub struct ReducedSystem {
    pub m: usize,
    pub bracket: f64,
    /// Characteristic coefficients c_0..c_m of the unrescaled A(t, xi).
    pub c: Vec<f64>,
    pub cal_a: CMat,
    pub cal_b: CMat,
    /// bold A_0 .. bold A_{m-1}
    pub bold_a: Vec<CMat>,
    /// bold B_1 .. bold B_{m-1}
    pub bold_b: Vec<CMat>,
}

impl ReducedSystem {
    /// Entry b_{ij}^{(l)} as placed in calB (scaled by <xi>^{l-m}); indices 1-based in the math, 0-based here.
    pub fn b_scaled(&self, l: usize, i: usize, j: usize) -> C64 {
        self.cal_b[(i * self.m + self.m - 1, (l - 1) + j * self.m)]
    }
}

/// Caches the time-derivative symbols needed by the reduction.
#[derive(Debug, Clone)]
pub struct Reducer {
    derivs: Vec<SystemSymbol>,
}

impl Reducer {
    pub fn new(s: &SystemSymbol) -> Self {
        let derivs = (0..s.m().max(1)).map(|k| s.time_derivative(k)).collect();
        Self { derivs }
    }

    pub fn symbol(&self) -> &SystemSymbol {
        &self.derivs[0]
    }

    pub fn m(&self) -> usize {
        self.derivs[0].m()
    }

    /// d^k/dt^k A(t, xi) for k = 0..m-1 (real, without the (-i)^k factor).
    pub fn partials(&self, t: f64, xi: &[f64]) -> Vec<DMatrix<f64>> {
        self.derivs
            .iter()
            .map(|d| d.eval_unchecked(t, xi))
            .collect()
    }

    /// D_t^k A = (-i)^k d^k/dt^k A, k = 0..m-1.
    pub fn dt_powers(&self, t: f64, xi: &[f64]) -> Vec<CMat> {
        self.partials(t, xi)
            .iter()
            .enumerate()
            .map(|(k, p)| to_complex(p) * minus_i_pow(k))
            .collect()
    }

    /// Assembly with the characteristic-coefficient cross-check.
    pub fn assemble(&self, t: f64, xi: &[f64]) -> Result<ReducedSystem> {
        let cc = symbol::char_coeffs(self.symbol(), t, xi)?;
        Ok(self.assemble_with(t, xi, cc.c))
    }

    /// Assembly without the eigenvalue cross-check, for inner integrator loops.
    pub fn assemble_fast(&self, t: f64, xi: &[f64]) -> Result<ReducedSystem> {
        self.symbol().check_point(t, xi)?;
        let a = self.symbol().eval_unchecked(t, xi);
        Ok(self.assemble_with(t, xi, linalg::faddeev_leverrier(&a)))
    }

    fn assemble_with(&self, t: f64, xi: &[f64], c: Vec<f64>) -> ReducedSystem {
        let m = self.m();
        let br = bracket(xi);
        let dt = self.dt_powers(t, xi);
        let bold_a = bold_a_from(&dt[0], &c);
        let bold_b = bold_b_from(&bold_a, &dt);

        let mut block = CMat::zeros(m, m);
        for r in 0..m - 1 {
            block[(r, r + 1)] = C64::new(br, 0.0);
        }
        for j in 0..m {
            let h = m - j;
            block[(m - 1, j)] = C64::new(-c[h] * br.powi(1 - h as i32), 0.0);
        }
        let cal_a = linalg::block_diag(&block, m);

        let mut cal_b = CMat::zeros(m * m, m * m);
        for (h, bb) in bold_b.iter().enumerate() {
            let scale = br.powi(h as i32 + 1 - m as i32);
            for i in 0..m {
                for j in 0..m {
                    cal_b[(i * m + m - 1, h + j * m)] = bb[(i, j)] * scale;
                }
            }
        }
        ReducedSystem {
            m,
            bracket: br,
            c,
            cal_a,
            cal_b,
            bold_a,
            bold_b,
        }
    }

    /// (D_t^j u)(t) for j = 0..m-1 from D_t u = A u, by Leibniz.
    pub fn time_jet(&self, t: f64, xi: &[f64], u: &CVec) -> Vec<CVec> {
        let m = self.m();
        let dt = self.dt_powers(t, xi);
        let mut jet = alloc::vec![u.clone()];
        for j in 1..m {
            let mut next = CVec::zeros(m);
            for l in 0..j {
                next += &dt[l] * &jet[j - 1 - l] * C64::new(binom(j - 1, l), 0.0);
            }
            jet.push(next);
        }
        jet
    }

    /// State vector V with V[i*m + j] = <xi>^{m-1-j} (D_t^j u_i)(t).
    pub fn lift_state(&self, t: f64, xi: &[f64], u: &CVec) -> CVec {
        let m = self.m();
        let br = bracket(xi);
        let jet = self.time_jet(t, xi, u);
        CVec::from_fn(m * m, |k, _| {
            let (i, j) = (k / m, k % m);
            jet[j][i] * br.powi((m - 1 - j) as i32)
        })
    }
}

fn bold_a_from(a: &CMat, c: &[f64]) -> Vec<CMat> {
    let m = a.nrows();
    let mut pw = alloc::vec![CMat::identity(m, m)];
    for k in 1..m {
        let next = &pw[k - 1] * a;
        pw.push(next);
    }
    (0..m)
        .map(|h| {
            (0..=h).fold(CMat::zeros(m, m), |acc, hp| {
                acc + &pw[h - hp] * C64::new(c[hp], 0.0)
            })
        })
        .collect()
}

fn bold_b_from(bold_a: &[CMat], dt: &[CMat]) -> Vec<CMat> {
    let m = bold_a.len();
    (0..m.saturating_sub(1))
        .map(|h| {
            (0..=m - 2 - h).fold(CMat::zeros(m, m), |acc, hp| {
                acc + &bold_a[hp] * &dt[m - 1 - h - hp] * C64::new(binom(m - 1 - hp, h), 0.0)
            })
        })
        .collect()
}

/// bold A_h = sum_{h' <= h} c_{h'} A^{h-h'}.
pub fn bold_a(s: &SystemSymbol, h: usize, t: f64, xi: &[f64]) -> Result<CMat> {
    if h >= s.m() {
        return Err(Error::Domain(format!("h = {h} outside 0..{}", s.m() - 1)));
    }
    Ok(Reducer::new(s).assemble(t, xi)?.bold_a.swap_remove(h))
}

/// bold B_{h+1} for h + 1 in 1..m-1.
pub fn bold_b(s: &SystemSymbol, h_plus_1: usize, t: f64, xi: &[f64]) -> Result<CMat> {
    if h_plus_1 == 0 || h_plus_1 >= s.m() {
        return Err(Error::Domain(format!(
            "index {h_plus_1} outside 1..{}",
            s.m() - 1
        )));
    }
    Ok(Reducer::new(s)
        .assemble(t, xi)?
        .bold_b
        .swap_remove(h_plus_1 - 1))
}

pub fn assemble(s: &SystemSymbol, t: f64, xi: &[f64]) -> Result<ReducedSystem> {
    Reducer::new(s).assemble(t, xi)
}

/// Transformed initial state V_0 from u_hat(0, xi).
pub fn transform_initial_data(s: &SystemSymbol, u0hat: &[C64], xi: &[f64]) -> Result<CVec> {
    if u0hat.len() != s.m() {
        return Err(Error::Shape(format!(
            "u0 has {} components, expected {}",
            u0hat.len(),
            s.m()
        )));
    }
    s.check_point(0.0, xi)?;
    Ok(Reducer::new(s).lift_state(0.0, xi, &CVec::from_column_slice(u0hat)))
}

/// Coefficient-wise distance between the two lower-order-term expansions:
/// the nested sum over bold A_h (bold A'_h) against -sum bold B_{h+1} X^h.
pub fn lower_order_consistency(s: &SystemSymbol, t: f64, xi: &[f64]) -> Result<f64> {
    let red = Reducer::new(s);
    let sys = red.assemble(t, xi)?;
    let dt = red.dt_powers(t, xi);
    let m = s.m();
    let mut coef = alloc::vec![CMat::zeros(m, m); m.saturating_sub(1)];
    for h in 0..m.saturating_sub(1) {
        for hp in h..=m - 2 {
            let k = hp + 1 - h;
            let term = &sys.bold_a[h] * &dt[k] * C64::new(binom(m - 1 - h, k), 0.0);
            coef[m - 2 - hp] += term;
        }
    }
    Ok(coef
        .iter()
        .zip(&sys.bold_b)
        .map(|(p, b)| {
            let d = (p - b).norm();
            if d == 0.0 {
                0.0
            } else {
                d / b.norm().max(p.norm())
            }
        })
        .fold(0.0, f64::max))
}

/// Max |entry| of calB over the columns m, 2m, ..., m^2 (1-based), which must vanish.
pub fn cal_b_zero_columns(sys: &ReducedSystem) -> f64 {
    let m = sys.m;
    (0..m)
        .flat_map(|j| (0..m * m).map(move |r| (r, j * m + m - 1)))
        .map(|(r, c)| sys.cal_b[(r, c)].norm())
        .fold(0.0, f64::max)
}

/// Max distance between each calA block's eigenvalues and <xi> * lambda (both sorted by real part).
pub fn block_eigen_mismatch(sys: &ReducedSystem, lambdas: &[f64]) -> Option<f64> {
    let m = sys.m;
    let block = sys.cal_a.view((0, 0), (m, m)).map(|z| z.re);
    let mut ev: Vec<f64> = linalg::general_eigenvalues(&block)?
        .iter()
        .map(|z| z.re)
        .collect();
    ev.sort_by(f64::total_cmp);
    Some(
        ev.iter()
            .zip(lambdas)
            .map(|(e, l)| (e - l * sys.bracket).abs() / sys.bracket)
            .fold(0.0, f64::max),
    )
}

/// max over interior grid points of |D_t U - (calA + calB) U| / (1 + |U|),
/// with U lifted from the trajectory and D_t U = -i dU/dt by a five-point stencil.
pub fn reduction_residual(
    s: &SystemSymbol,
    xi: &[f64],
    t_grid: &[f64],
    u_hat_traj: &[CVec],
) -> Result<f64> {
    if t_grid.len() != u_hat_traj.len() {
        return Err(Error::Shape(format!(
            "grid has {} points, trajectory {}",
            t_grid.len(),
            u_hat_traj.len()
        )));
    }
    if t_grid.len() < 5 {
        return Err(Error::Shape("need at least 5 grid points".into()));
    }
    let h = t_grid[1] - t_grid[0];
    if t_grid
        .windows(2)
        .any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs())
    {
        return Err(Error::Shape("time grid is not uniform".into()));
    }
    let red = Reducer::new(s);
    let us: Vec<CVec> = t_grid
        .iter()
        .zip(u_hat_traj)
        .map(|(&t, u)| red.lift_state(t, xi, u))
        .collect();
    let mut worst: f64 = 0.0;
    for k in 2..t_grid.len() - 2 {
        let du = (&us[k - 2] - &us[k - 1] * C64::new(8.0, 0.0) + &us[k + 1] * C64::new(8.0, 0.0)
            - &us[k + 2])
            / C64::new(12.0 * h, 0.0);
        let dtu = du * C64::new(0.0, -1.0);
        let sys = red.assemble_fast(t_grid[k], xi)?;
        let r = dtu - (&sys.cal_a + &sys.cal_b) * &us[k];
        worst = worst.max(r.norm() / (1.0 + us[k].norm()));
    }
    Ok(worst)
}

/// Differences between the implemented b^{(1)}, b^{(2)} (m = 3, n = 1) and the
/// closed forms printed alongside the m = 3 worked example. Reported only.
#[derive(Debug, Clone, PartialEq)]
pub struct PrintedFormComparison {
    pub max_abs_diff_b1: f64,
    pub max_abs_diff_b2: f64,
}

pub fn compare_printed_b3(s: &SystemSymbol, t: f64, xi: f64) -> Result<PrintedFormComparison> {
    if s.m() != 3 || s.n() != 1 {
        return Err(Error::Domain(
            "printed-form comparison needs m = 3, n = 1".into(),
        ));
    }
    let red = Reducer::new(s);
    let sys = red.assemble(t, &[xi])?;
    let br = bracket(&[xi]);
    let p = red.partials(t, &[1.0]);
    let (a, da, d2a) = (&p[0], &p[1], &p[2]);
    let d1 = minus_i_pow(1);
    let d2 = minus_i_pow(2);
    let tr_a0 = a.trace() * xi / br;
    let (mut e1, mut e2) = (0.0f64, 0.0f64);
    for k in 0..3 {
        for j in 0..2 {
            let b1 = (d2 * d2a[(k, j)] + d1 * (2.0 * da[(k, j)]) - d1 * (tr_a0 * da[(k, j)]))
                * (xi / br);
            let b2 =
                (0..3).map(|l| d1 * (a[(k, l)] * da[(l, j)])).sum::<C64>() * (xi * xi / (br * br));
            e1 = e1.max((b1 - sys.b_scaled(1, k, j)).norm());
            e2 = e2.max((b2 - sys.b_scaled(2, k, j)).norm());
        }
    }
    Ok(PrintedFormComparison {
        max_abs_diff_b1: e1,
        max_abs_diff_b2: e2,
    })
}
