//! Sampled checks of the eigenvalue separation condition, the Levi-type
//! conditions (both forms), the W B sandwich and the zone decomposition.

use alloc::format;
use alloc::vec::Vec;
use nalgebra::DMatrix;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, binom, bracket, sigma_all, to_complex, CMat, CVec, C64};
use crate::quasi_sym::{self, delete};
use crate::reduction::{ReducedSystem, Reducer};
use crate::symbol::{self, SystemSymbol};

pub const ABS_FLOOR: f64 = 1e-14;
pub const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub ts: Vec<f64>,
    pub xis: Vec<Vec<f64>>,
}

impl Grid {
    pub fn new(ts: Vec<f64>, xis: Vec<Vec<f64>>) -> Result<Self> {
        if ts.is_empty() || xis.is_empty() {
            return Err(Error::Domain("empty grid".into()));
        }
        Ok(Self { ts, xis })
    }

    /// Uniform t, log-spaced |xi|; n = 1 uses +-|xi|, n > 1 uses `directions` unit vectors.
    pub fn build(
        horizon: f64,
        t_points: usize,
        r_min: f64,
        r_max: f64,
        r_points: usize,
        n: usize,
        directions: usize,
    ) -> Result<Self> {
        if t_points < 1 || r_points < 1 || !(r_min > 0.0 && r_max >= r_min) {
            return Err(Error::Domain("invalid grid parameters".into()));
        }
        let ts = linspace(0.0, horizon, t_points);
        let radii = logspace(r_min, r_max, r_points);
        let dirs = if n == 1 {
            alloc::vec![alloc::vec![1.0], alloc::vec![-1.0]]
        } else {
            sphere_directions(n, directions)
        };
        let xis = radii
            .iter()
            .flat_map(|&r| dirs.iter().map(move |d| d.iter().map(|x| x * r).collect()))
            .collect();
        Self::new(ts, xis)
    }

    /// 201 t points on [0, T], 32 radii in [1, 1e4], 16 directions for n > 1.
    pub fn default_for(s: &SystemSymbol) -> Self {
        Self::build(s.horizon(), 201, 1.0, 1e4, 32, s.n(), 16)
            .expect("default grid parameters are valid")
    }

    pub fn len(&self) -> usize {
        self.ts.len() * self.xis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points in t-major order.
    pub fn points(&self) -> impl Iterator<Item = (f64, &[f64])> + '_ {
        self.ts
            .iter()
            .flat_map(move |&t| self.xis.iter().map(move |x| (t, x.as_slice())))
    }
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return alloc::vec![a];
    }
    (0..n)
        .map(|k| a + (b - a) * k as f64 / (n - 1) as f64)
        .collect()
}

pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (a.ln(), b.ln());
    linspace(la, lb, n).into_iter().map(f64::exp).collect()
}

fn radical_inverse(mut k: usize, base: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while k > 0 {
        f /= base as f64;
        r += f * (k % base) as f64;
        k /= base;
    }
    r
}

/// Deterministic unit vectors: equal angles for n = 2, a Fibonacci lattice for
/// n = 3, shifted Halton points pushed to the sphere otherwise.
pub fn sphere_directions(n: usize, count: usize) -> Vec<Vec<f64>> {
    const PRIMES: [usize; 8] = [2, 3, 5, 7, 11, 13, 17, 19];
    (0..count)
        .map(|k| match n {
            2 => {
                let a = 2.0 * core::f64::consts::PI * k as f64 / count as f64;
                alloc::vec![a.cos(), a.sin()]
            }
            3 => {
                let golden = (1.0 + 5f64.sqrt()) / 2.0;
                let z = 1.0 - (2.0 * k as f64 + 1.0) / count as f64;
                let r = (1.0 - z * z).sqrt();
                let phi = 2.0 * core::f64::consts::PI * k as f64 / golden;
                alloc::vec![r * phi.cos(), r * phi.sin(), z]
            }
            _ => {
                let v: Vec<f64> = (0..n)
                    .map(|d| {
                        2.0 * radical_inverse(
                            k + 1,
                            PRIMES[d % PRIMES.len()] + 2 * (d / PRIMES.len()),
                        ) - 1.0
                    })
                    .collect();
                let nv = linalg::norm(&v).max(f64::MIN_POSITIVE);
                v.iter().map(|x| x / nv).collect()
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub t: f64,
    pub xi: Vec<f64>,
}

/// Supremum over a grid together with the point attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct SupValue {
    pub value: f64,
    pub witness: Option<Witness>,
}

impl Default for SupValue {
    fn default() -> Self {
        Self {
            value: 0.0,
            witness: None,
        }
    }
}

impl SupValue {
    pub fn absorb(&mut self, v: f64, t: f64, xi: &[f64]) {
        if v > self.value || (v.is_nan() && !self.value.is_nan()) {
            self.value = v;
            self.witness = Some(Witness { t, xi: xi.to_vec() });
        }
    }
}

/// Ratio with the 0/0 convention: numerator below the floor counts as 0,
/// otherwise a vanishing denominator gives infinity.
pub fn guarded_ratio(num: f64, den: f64) -> f64 {
    if num <= ABS_FLOOR {
        0.0
    } else if den <= 0.0 {
        f64::INFINITY
    } else {
        num / den
    }
}

/// max over pairs of (l_i^2 + l_j^2) / (l_i - l_j)^2.
pub fn ks_ratio(lambda: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..lambda.len() {
        for j in i + 1..lambda.len() {
            let num = lambda[i] * lambda[i] + lambda[j] * lambda[j];
            let d = lambda[i] - lambda[j];
            worst = worst.max(guarded_ratio(num, d * d));
        }
    }
    worst
}

/// sum_i |sigma_{m-l}^{(m-1)}(pi_i lambda)|^2, the (l, l) entry of W^T W.
pub fn levi_denominator(lambda: &[f64], l: usize) -> f64 {
    let m = lambda.len();
    (0..m)
        .map(|i| sigma_all(&delete(lambda, i))[m - l].powi(2))
        .sum()
}

/// Diagonal entry q_jj of the symmetriser, normalised as W^T W = Q_0 / (m-1)!.
pub fn symmetriser_diagonal(lambda: &[f64], j: usize) -> Result<f64> {
    if j == 0 || j > lambda.len() {
        return Err(Error::Domain(format!(
            "j = {j} outside 1..{}",
            lambda.len()
        )));
    }
    Ok(levi_denominator(lambda, j))
}

/// Pointwise Levi ratios indexed [l-1][j], l = 1..m-1, j = 0..m-1.
pub fn levi_at(sys: &ReducedSystem, lambda: &[f64]) -> Vec<Vec<f64>> {
    let m = sys.m;
    (1..m)
        .map(|l| {
            let den = levi_denominator(lambda, l);
            (0..m)
                .map(|j| {
                    let num: f64 = (0..m).map(|k| sys.b_scaled(l, k, j).norm_sqr()).sum();
                    guarded_ratio(num, den)
                })
                .collect()
        })
        .collect()
}

/// max_k |d^k_t A_0|_2^2 for k = 1..m-1.
pub fn derivative_size(partials: &[DMatrix<f64>], br: f64) -> f64 {
    partials[1..]
        .iter()
        .map(|p| (linalg::spectral_norm_real(p) / br).powi(2))
        .fold(0.0, f64::max)
}

/// Pointwise derivative-form ratios indexed [j-1], j = 1..m-1.
pub fn thm2_at(deriv: f64, lambda: &[f64]) -> Vec<f64> {
    (1..lambda.len())
        .map(|j| guarded_ratio(deriv, levi_denominator(lambda, j)))
        .collect()
}

/// K_l = (sum_{h'} binom(m-1-h', l-1) alpha_{h'})^2 with
/// alpha_{h'} = sum_{h'' <= h'} |c_{h''}(A_0)| |A_0|^{h'-h''}; bounds the Levi
/// numerators by K_l max_k |D_t^k A_0|^2 when <xi> >= 1.
pub fn implication_factors(a0: &DMatrix<f64>) -> Vec<f64> {
    let m = a0.nrows();
    let c = linalg::faddeev_leverrier(a0);
    let na = linalg::spectral_norm_real(a0);
    let alpha: Vec<f64> = (0..m)
        .map(|h| {
            (0..=h)
                .map(|hh| c[hh].abs() * na.powi((h - hh) as i32))
                .sum()
        })
        .collect();
    (1..m)
        .map(|l| {
            let s: f64 = (0..=m - 1 - l)
                .map(|hp| binom(m - 1 - hp, l - 1) * alpha[hp])
                .sum();
            s * s
        })
        .collect()
}

/// Result of the W B sandwich computation at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Sandwich {
    pub value: f64,
    /// Kernel vector of calW not annihilated by calW calB, when the value is infinite.
    pub witness: Option<CVec>,
}

/// Smallest C with |W B V| <= C |W V| for all V (calW, calB lifted).
pub fn sandwich_constant_of(cal_w: &DMatrix<f64>, cal_b: &CMat) -> Sandwich {
    let n = cal_w.nrows();
    let wb = to_complex(cal_w) * cal_b;
    let (vals, vecs) = linalg::symmetric_eigen(&(cal_w.transpose() * cal_w));
    let sig: Vec<f64> = vals.iter().map(|v| v.max(0.0).sqrt()).collect();
    let smax = sig.iter().copied().fold(0.0, f64::max);
    let tol = RANK_TOL * smax;
    let (ker, range): (Vec<usize>, Vec<usize>) = (0..n).partition(|&k| sig[k] <= tol);
    let leak_tol = RANK_TOL * wb.norm() + ABS_FLOOR;
    let mut leak: Option<(f64, usize)> = None;
    for &k in &ker {
        let col = vecs.column(k).map(|x| C64::new(x, 0.0));
        let size = (&wb * col).norm();
        if size > leak_tol && leak.is_none_or(|(s, _)| size > s) {
            leak = Some((size, k));
        }
    }
    if let Some((_, k)) = leak {
        return Sandwich {
            value: f64::INFINITY,
            witness: Some(vecs.column(k).map(|x| C64::new(x, 0.0))),
        };
    }
    if range.is_empty() {
        return Sandwich {
            value: 0.0,
            witness: None,
        };
    }
    let basis = DMatrix::from_fn(n, range.len(), |r, c| vecs[(r, range[c])] / sig[range[c]]);
    let cb = to_complex(&basis);
    let proj = &wb * &cb;
    let f = proj.adjoint() * &proj;
    let top = linalg::hermitian_eigenvalues(&f)
        .last()
        .copied()
        .unwrap_or(0.0);
    Sandwich {
        value: top.max(0.0).sqrt(),
        witness: None,
    }
}

pub fn sandwich_constant(s: &SystemSymbol, t: f64, xi: &[f64]) -> Result<Sandwich> {
    let red = Reducer::new(s);
    let sys = red.assemble(t, xi)?;
    let sp = symbol::rescaled_eigenvalues(s, t, xi)?;
    let w = quasi_sym::lift_blocks(&quasi_sym::build_w(&sp.lambdas));
    Ok(sandwich_constant_of(&w, &sys.cal_b))
}

/// Everything the condition report needs from one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointEval {
    pub t: f64,
    pub xi: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub hyperbolic: bool,
    pub ks: f64,
    pub levi: Vec<Vec<f64>>,
    pub thm2: Vec<f64>,
    pub sandwich: f64,
    /// max over (l, j) of levi / (K_l thm2); at most 1 when the bound holds.
    pub implication_ratio: f64,
}

pub fn evaluate_point(red: &Reducer, t: f64, xi: &[f64]) -> Result<PointEval> {
    let s = red.symbol();
    let sys = red.assemble(t, xi)?;
    let sp = symbol::rescaled_eigenvalues(s, t, xi)?;
    let lam = &sp.lambdas;
    let br = bracket(xi);
    let levi = levi_at(&sys, lam);
    let partials = red.partials(t, xi);
    let deriv = derivative_size(&partials, br);
    let thm2 = thm2_at(deriv, lam);
    let k = implication_factors(&(&partials[0] / br));
    let mut implication_ratio: f64 = 0.0;
    for (l, row) in levi.iter().enumerate() {
        if thm2[l].is_infinite() {
            continue;
        }
        let num: f64 = row.iter().copied().fold(0.0, f64::max);
        let bound = k[l] * thm2[l] * (1.0 + 1e-9);
        implication_ratio = implication_ratio.max(guarded_ratio(num, bound));
    }
    let w = quasi_sym::lift_blocks(&quasi_sym::build_w(lam));
    let sandwich = sandwich_constant_of(&w, &sys.cal_b).value;
    Ok(PointEval {
        t,
        xi: xi.to_vec(),
        lambdas: sp.lambdas.clone(),
        hyperbolic: sp.hyperbolic,
        ks: ks_ratio(lam),
        levi,
        thm2,
        sandwich,
        implication_ratio,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub m: usize,
    pub grid_points: usize,
    pub nonhyperbolic_points: usize,
    pub ks_constant: SupValue,
    /// [l-1][j]
    pub levi_ratios: Vec<Vec<SupValue>>,
    /// [j-1]
    pub thm2_ratios: Vec<SupValue>,
    pub sandwich_constant: SupValue,
    /// Points where thm2 is finite but a Levi ratio is not, or the K_l bound fails.
    pub implication_failures: usize,
    pub implication_worst: SupValue,
}

/// Folds point evaluations in the given order.
pub fn aggregate(m: usize, points: &[PointEval]) -> Result<ConditionReport> {
    if points.is_empty() {
        return Err(Error::Domain("empty grid".into()));
    }
    let mut rep = ConditionReport {
        m,
        grid_points: points.len(),
        nonhyperbolic_points: 0,
        ks_constant: SupValue::default(),
        levi_ratios: alloc::vec![alloc::vec![SupValue::default(); m]; m - 1],
        thm2_ratios: alloc::vec![SupValue::default(); m - 1],
        sandwich_constant: SupValue::default(),
        implication_failures: 0,
        implication_worst: SupValue::default(),
    };
    for p in points {
        if !p.hyperbolic {
            rep.nonhyperbolic_points += 1;
        }
        rep.ks_constant.absorb(p.ks, p.t, &p.xi);
        for (l, row) in p.levi.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                rep.levi_ratios[l][j].absorb(v, p.t, &p.xi);
            }
        }
        for (j, &v) in p.thm2.iter().enumerate() {
            rep.thm2_ratios[j].absorb(v, p.t, &p.xi);
        }
        rep.sandwich_constant.absorb(p.sandwich, p.t, &p.xi);
        let thm2_finite = p.thm2.iter().all(|v| v.is_finite());
        let levi_finite = p.levi.iter().flatten().all(|v| v.is_finite());
        if (thm2_finite && !levi_finite) || p.implication_ratio > 1.0 {
            rep.implication_failures += 1;
        }
        rep.implication_worst
            .absorb(p.implication_ratio, p.t, &p.xi);
    }
    Ok(rep)
}

pub fn evaluate_grid(s: &SystemSymbol, grid: &Grid) -> Result<Vec<PointEval>> {
    let red = Reducer::new(s);
    grid.points()
        .map(|(t, xi)| evaluate_point(&red, t, xi))
        .collect()
}

pub fn condition_report(s: &SystemSymbol, grid: &Grid) -> Result<ConditionReport> {
    aggregate(s.m(), &evaluate_grid(s, grid)?)
}

pub fn ks_constant(s: &SystemSymbol, grid: &Grid) -> Result<SupValue> {
    let mut sup = SupValue::default();
    for (t, xi) in grid.points() {
        let sp = symbol::rescaled_eigenvalues(s, t, xi)?;
        sup.absorb(ks_ratio(&sp.lambdas), t, xi);
    }
    Ok(sup)
}

pub fn levi_ratios(s: &SystemSymbol, grid: &Grid) -> Result<Vec<Vec<SupValue>>> {
    Ok(condition_report(s, grid)?.levi_ratios)
}

pub fn thm2_ratios(s: &SystemSymbol, grid: &Grid) -> Result<Vec<SupValue>> {
    Ok(condition_report(s, grid)?.thm2_ratios)
}

/// g_h(V) = sum_i |sigma_{m-h}^{(m-1)}(pi_i lambda)|^2 sum_l |V_{h+lm}|^2, h = 1..m.
pub fn zone_weights(v: &CVec, lambda: &[f64]) -> Vec<f64> {
    let m = lambda.len();
    (1..=m)
        .map(|h| {
            let den = levi_denominator(lambda, h);
            let mass: f64 = (0..m).map(|l| v[(h - 1) + l * m].norm_sqr()).sum();
            den * mass
        })
        .collect()
}

/// First h in 1..m-2 whose zone contains V, m-1 for the final complement.
pub fn zone_classify(v: &CVec, lambda: &[f64], deltas: &[f64]) -> usize {
    let m = lambda.len();
    let g = zone_weights(v, lambda);
    for h in 1..m.saturating_sub(1) {
        let tail: f64 = g[h..m - 1].iter().sum();
        if tail <= deltas[h - 1] * g[h - 1] {
            return h;
        }
    }
    m.saturating_sub(1).max(1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZoneStats {
    pub deltas: Vec<f64>,
    /// Sample counts per zone 1..m-1.
    pub counts: Vec<usize>,
    /// min |W V|^2 / g_h(V) over samples in zone h.
    pub lower: Vec<f64>,
    /// max |W B V|^2 / g_h(V) over samples in zone h.
    pub upper: Vec<f64>,
    pub doublings: usize,
}

pub const ZONE_LOWER_TARGET: f64 = 1e-2;

/// Samples uniform complex V at each point and searches a common delta by
/// doubling from 1 until every occupied zone has lower ratio >= ZONE_LOWER_TARGET.
pub fn zone_study<R: Rng + ?Sized>(
    red: &Reducer,
    points: &[(f64, Vec<f64>)],
    samples_per_point: usize,
    rng: &mut R,
) -> Result<ZoneStats> {
    let m = red.m();
    let mut data = Vec::new();
    for (t, xi) in points {
        let sys = red.assemble(*t, xi)?;
        let sp = symbol::rescaled_eigenvalues(red.symbol(), *t, xi)?;
        let w = to_complex(&quasi_sym::lift_blocks(&quasi_sym::build_w(&sp.lambdas)));
        let wb = &w * &sys.cal_b;
        for _ in 0..samples_per_point {
            let v = random_cvec(m * m, rng);
            let wv = (&w * &v).norm_squared();
            let wbv = (&wb * &v).norm_squared();
            data.push((v, sp.lambdas.clone(), wv, wbv));
        }
    }
    let zones = m.saturating_sub(1).max(1);
    let mut delta = 1.0;
    let mut doublings = 0;
    loop {
        let deltas = alloc::vec![delta; m.saturating_sub(2)];
        let mut counts = alloc::vec![0usize; zones];
        let mut lower = alloc::vec![f64::INFINITY; zones];
        let mut upper = alloc::vec![0.0f64; zones];
        for (v, lam, wv, wbv) in &data {
            let h = zone_classify(v, lam, &deltas);
            let g = zone_weights(v, lam)[h - 1];
            counts[h - 1] += 1;
            lower[h - 1] = lower[h - 1].min(guarded_ratio(*wv, g));
            upper[h - 1] = upper[h - 1].max(guarded_ratio(*wbv, g));
        }
        let ok = counts
            .iter()
            .zip(&lower)
            .all(|(&c, &lo)| c == 0 || lo >= ZONE_LOWER_TARGET);
        if ok || doublings >= 40 {
            return Ok(ZoneStats {
                deltas,
                counts,
                lower,
                upper,
                doublings,
            });
        }
        delta *= 2.0;
        doublings += 1;
    }
}

pub fn random_cvec<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVec {
    CVec::from_fn(n, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

/// Unsigned e_q of lambda.
fn e_unsigned(lambda: &[f64], q: usize) -> f64 {
    let s = sigma_all(lambda)[q];
    if q % 2 == 1 {
        -s
    } else {
        s
    }
}

/// Max scaled residual of the difference identity for
/// sigma_{m-k}^{(m-1)}(pi_i lambda) - sigma_{m-k}^{(m-1)}(pi_j lambda), all i, j, k.
pub fn lemma3_residual(lambda: &[f64]) -> f64 {
    let m = lambda.len();
    let scale_base = 1.0 + lambda.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let mut worst: f64 = 0.0;
    for k in 1..m {
        let q = m - k;
        let scale = scale_base.powi(q as i32);
        for i in 0..m {
            for j in 0..m {
                let lhs = sigma_all(&delete(lambda, i))[q] - sigma_all(&delete(lambda, j))[q];
                let rhs = if i == j {
                    0.0
                } else {
                    let rest: Vec<f64> = (0..m)
                        .filter(|&r| r != i && r != j)
                        .map(|r| lambda[r])
                        .collect();
                    let sign = if q.is_multiple_of(2) { 1.0 } else { -1.0 };
                    sign * (lambda[j] - lambda[i]) * e_unsigned(&rest, q - 1)
                };
                worst = worst.max((lhs - rhs).abs() / scale);
            }
        }
    }
    worst
}

/// LHS / RHS of the lower bound sum_{l,i} |sum_{j>=k} sigma_{m-j}(pi_i lambda) V_{j+lm}|^2
/// against sum_i |sigma_{m-k}(pi_i lambda)|^2 sum_l |V_{k+lm}|^2.
pub fn lemma4_ratio(lambda: &[f64], v: &CVec, k: usize) -> f64 {
    let m = lambda.len();
    let sig: Vec<Vec<f64>> = (0..m).map(|i| sigma_all(&delete(lambda, i))).collect();
    let mut lhs = 0.0;
    for l in 0..m {
        for s in &sig {
            let z: C64 = (k..=m).map(|j| v[(j - 1) + l * m] * s[m - j]).sum();
            lhs += z.norm_sqr();
        }
    }
    let rhs =
        levi_denominator(lambda, k) * (0..m).map(|l| v[(k - 1) + l * m].norm_sqr()).sum::<f64>();
    guarded_ratio(lhs, rhs)
}

/// Rejection sample of lambda in [-1, 1]^m with l_i^2 + l_j^2 <= M (l_i - l_j)^2.
pub fn sample_s_m<R: Rng + ?Sized>(m: usize, big_m: f64, rng: &mut R) -> Vec<f64> {
    loop {
        let lam: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
        if ks_ratio(&lam) <= big_m {
            return lam;
        }
    }
}

/// Minimum lower-bound ratio per k = 1..m over `samples` draws.
pub fn lemma4_constants<R: Rng + ?Sized>(
    m: usize,
    big_m: f64,
    samples: usize,
    rng: &mut R,
) -> Vec<f64> {
    let mut best = alloc::vec![f64::INFINITY; m];
    for _ in 0..samples {
        let lam = sample_s_m(m, big_m, rng);
        let v = random_cvec(m * m, rng);
        for k in 1..=m {
            best[k - 1] = best[k - 1].min(lemma4_ratio(&lam, &v, k));
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    /// Scaled residual of the symmetric-function difference identity.
    pub difference_residual: f64,
    /// min over the batch of the lower-bound ratio, per k = 1..m.
    pub lower_bound_ratios: Vec<f64>,
}

/// Difference identity at `lambda` plus the lower-bound ratio over a batch of V.
pub fn lemma_identities_check(lambda: &[f64], batch: &[CVec]) -> Result<LemmaReport> {
    let m = lambda.len();
    if let Some(v) = batch.iter().find(|v| v.len() != m * m) {
        return Err(Error::Shape(format!(
            "state has length {}, expected {}",
            v.len(),
            m * m
        )));
    }
    let lower_bound_ratios = (1..=m)
        .map(|k| {
            batch
                .iter()
                .map(|v| lemma4_ratio(lambda, v, k))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    Ok(LemmaReport {
        difference_residual: lemma3_residual(lambda),
        lower_bound_ratios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ks_examples() {
        let x = 0.37;
        assert!((ks_ratio(&[-x, 0.0, x]) - 1.0).abs() < 1e-15);
        assert_eq!(ks_ratio(&[-1.0, 1.0]), 0.5);
        assert_eq!(ks_ratio(&[1.0, 1.0]), f64::INFINITY);
        assert_eq!(ks_ratio(&[0.0, 0.0]), 0.0);
    }

    #[test]
    fn symmetriser_diagonal_examples() {
        let (a, b) = (0.3, -0.8);
        assert!((symmetriser_diagonal(&[a, b], 1).unwrap() - (a * a + b * b)).abs() < 1e-15);
        let x = 0.6;
        let lam = [-x, 0.0, x];
        // q_11 = sum over pairs of (l_i l_j)^2 = x^4, q_22 = sum (l_i + l_j)^2 = 2 x^2
        assert!((symmetriser_diagonal(&lam, 1).unwrap() - x.powi(4)).abs() < 1e-15);
        assert!((symmetriser_diagonal(&lam, 2).unwrap() - 2.0 * x * x).abs() < 1e-15);
        assert_eq!(symmetriser_diagonal(&[0.0, 0.0, 0.0], 1).unwrap(), 0.0);
        assert!(symmetriser_diagonal(&lam, 0).is_err());
    }

    #[test]
    fn zone_examples() {
        let lam = [-0.5, 0.1, 0.9];
        let zero = CVec::zeros(9);
        assert_eq!(zone_classify(&zero, &lam, &[1.0]), 1);
        let mut v = CVec::zeros(9);
        for idx in [1, 4, 7] {
            v[idx] = C64::new(1.0, -0.5);
        }
        assert_eq!(zone_classify(&v, &lam, &[1e6]), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let v = random_cvec(9, &mut rng);
            let z = zone_classify(&v, &lam, &[2.0]);
            assert_eq!(zone_classify(&(&v * C64::new(-3.0, 0.7)), &lam, &[2.0]), z);
            assert_eq!(zone_classify(&v, &[0.9, -0.5, 0.1], &[2.0]), z);
        }
    }

    #[test]
    fn lemma3_examples() {
        assert!(lemma3_residual(&[1.0, 2.0, 3.0]) == 0.0);
        assert!(lemma3_residual(&[0.4, -1.1]) == 0.0);
        assert!(lemma3_residual(&[0.5, 0.5, 2.0, -1.0]) < 1e-15);
    }

    #[test]
    fn sandwich_zero_for_zero_b() {
        let w = quasi_sym::lift_blocks(&quasi_sym::build_w(&[-0.3, 0.4]));
        assert_eq!(sandwich_constant_of(&w, &CMat::zeros(4, 4)).value, 0.0);
    }

    #[test]
    fn sandwich_infinite_on_kernel_leak() {
        let w = quasi_sym::lift_blocks(&quasi_sym::build_w(&[0.5, 0.5]));
        let mut b = CMat::zeros(4, 4);
        b[(1, 0)] = C64::new(1.0, 0.0);
        let s = sandwich_constant_of(&w, &b);
        assert_eq!(s.value, f64::INFINITY);
        assert!(s.witness.is_some());
    }

    #[test]
    fn grid_shapes() {
        let g = Grid::build(1.0, 201, 1.0, 1e4, 32, 1, 16).unwrap();
        assert_eq!(g.len(), 201 * 64);
        assert_eq!(g.ts[200], 1.0);
        assert!((g.xis[62][0] - 1e4).abs() < 1e-8);
        let d = sphere_directions(3, 16);
        assert!(d.iter().all(|v| (linalg::norm(v) - 1.0).abs() < 1e-12));
        let d5 = sphere_directions(5, 16);
        assert!(d5.iter().all(|v| (linalg::norm(v) - 1.0).abs() < 1e-12));
    }
}
