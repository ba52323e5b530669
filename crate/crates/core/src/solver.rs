//! Per-frequency integration of the original and the reduced system, the
//! energy bookkeeping along reduced trajectories and frequency-growth fits.

use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{bracket, quad_form, to_complex, CMat, CVec, C64, I};
use crate::quasi_sym;
use crate::reduction::{self, Reducer};
use crate::symbol::{self, SystemSymbol};

/// Rule for the quasi-symmetriser parameter as a function of frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsPolicy {
    Fixed(f64),
    /// eps = <xi>^{-1}
    InverseBracket,
    /// eps = <xi>^{-k / (2(m-1) + k)}
    Balanced {
        k: f64,
    },
}

impl Default for EpsPolicy {
    fn default() -> Self {
        EpsPolicy::Balanced { k: 2.0 }
    }
}

impl EpsPolicy {
    pub fn eps(&self, m: usize, xi: &[f64]) -> Result<f64> {
        let br = bracket(xi);
        let e = match *self {
            EpsPolicy::Fixed(e) => e,
            EpsPolicy::InverseBracket => 1.0 / br,
            EpsPolicy::Balanced { k } => {
                if !(k > 0.0) {
                    return Err(Error::Domain(format!(
                        "regularity parameter k = {k} must be positive"
                    )));
                }
                br.powf(-k / (2.0 * (m as f64 - 1.0) + k))
            }
        };
        if !(e > 0.0 && e <= 1.0) {
            return Err(Error::Domain(format!("eps = {e} outside (0, 1]")));
        }
        Ok(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Requested RK4 step; `None` picks cfl / <xi> per frequency.
    pub step: Option<f64>,
    pub cfl: f64,
    pub eps_policy: EpsPolicy,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            step: None,
            cfl: 0.05,
            eps_policy: EpsPolicy::default(),
        }
    }
}

pub const MIN_STEPS: usize = 4;

impl SolverConfig {
    /// Number of steps and the effective step T / n on [0, horizon] at `xi`.
    pub fn plan(&self, horizon: f64, xi: &[f64]) -> Result<(usize, f64)> {
        if !(horizon > 0.0) {
            return Err(Error::Domain(format!("horizon {horizon} must be positive")));
        }
        if !(self.cfl > 0.0) {
            return Err(Error::Domain(format!("cfl {} must be positive", self.cfl)));
        }
        let limit = self.cfl / bracket(xi);
        let step = match self.step {
            Some(h) if !(h > 0.0) => {
                return Err(Error::Domain(format!("step {h} must be positive")))
            }
            Some(h) if h > limit * (1.0 + 1e-12) => {
                return Err(Error::StepGuard { step: h, limit })
            }
            Some(h) => h,
            None => limit,
        };
        let n = ((horizon / step) * (1.0 - 1e-12))
            .ceil()
            .max(MIN_STEPS as f64) as usize;
        Ok((n, horizon / n as f64))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub states: Vec<CVec>,
}

/// Classical RK4 for y' = M(t) y on n uniform steps from t0.
pub fn rk4_linear<F>(mut gen: F, y0: &CVec, t0: f64, h: f64, n: usize) -> Result<Trajectory>
where
    F: FnMut(f64) -> Result<CMat>,
{
    let half = C64::new(h / 2.0, 0.0);
    let full = C64::new(h, 0.0);
    let sixth = C64::new(h / 6.0, 0.0);
    let two = C64::new(2.0, 0.0);
    let mut t = alloc::vec![t0];
    let mut states = alloc::vec![y0.clone()];
    let mut y = y0.clone();
    let mut m_start = gen(t0)?;
    for k in 0..n {
        let tk = t0 + h * k as f64;
        let tn = t0 + h * (k + 1) as f64;
        let m_mid = gen(tk + h / 2.0)?;
        let m_end = gen(tn)?;
        let k1 = &m_start * &y;
        let k2 = &m_mid * (&y + &k1 * half);
        let k3 = &m_mid * (&y + &k2 * half);
        let k4 = &m_end * (&y + &k3 * full);
        y += (k1 + (k2 + k3) * two + k4) * sixth;
        if y.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { t: tn });
        }
        t.push(tn);
        states.push(y.clone());
        m_start = m_end;
    }
    Ok(Trajectory { t, states })
}

/// d/dt u_hat = i A(t, xi) u_hat on [0, T].
pub fn direct_integrate(
    s: &SystemSymbol,
    xi: &[f64],
    u0hat: &[C64],
    cfg: &SolverConfig,
) -> Result<Trajectory> {
    if u0hat.len() != s.m() {
        return Err(Error::Shape(format!(
            "u0 has {} components, expected {}",
            u0hat.len(),
            s.m()
        )));
    }
    s.check_point(0.0, xi)?;
    let (n, h) = cfg.plan(s.horizon(), xi)?;
    rk4_linear(
        |t| Ok(to_complex(&s.eval_unchecked(t, xi)) * I),
        &CVec::from_column_slice(u0hat),
        0.0,
        h,
        n,
    )
}

/// d/dt V = i (calA + calB) V on [0, T].
pub fn propagate_reduced(
    s: &SystemSymbol,
    xi: &[f64],
    v0: &CVec,
    cfg: &SolverConfig,
) -> Result<Trajectory> {
    let m = s.m();
    if v0.len() != m * m {
        return Err(Error::Shape(format!(
            "V0 has length {}, expected {}",
            v0.len(),
            m * m
        )));
    }
    s.check_point(0.0, xi)?;
    let (n, h) = cfg.plan(s.horizon(), xi)?;
    let red = Reducer::new(s);
    rk4_linear(
        |t| {
            let sys = red.assemble_fast(t, xi)?;
            Ok((sys.cal_a + sys.cal_b) * I)
        },
        v0,
        0.0,
        h,
        n,
    )
}

/// Stencil (first index, weights) of a fourth-order first-derivative
/// approximation at sample k of n, before division by the step.
fn fd5_stencil(k: usize, n: usize) -> (usize, [f64; 5]) {
    const C: [f64; 5] = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
    const F0: [f64; 5] = [-25.0 / 12.0, 4.0, -3.0, 4.0 / 3.0, -0.25];
    const F1: [f64; 5] = [-0.25, -10.0 / 12.0, 1.5, -0.5, 1.0 / 12.0];
    match k {
        0 => (0, F0),
        1 => (0, F1),
        _ if k + 2 < n => (k - 2, C),
        _ => {
            let src = if k + 1 == n { F0 } else { F1 };
            let mut w = [0.0; 5];
            for i in 0..5 {
                w[i] = -src[4 - i];
            }
            (n - 5, w)
        }
    }
}

/// Fourth-order derivative of uniformly sampled scalars.
pub fn fd_derivative(samples: &[f64], h: f64) -> Vec<f64> {
    let n = samples.len();
    (0..n)
        .map(|k| {
            let (s, w) = fd5_stencil(k, n);
            w.iter()
                .enumerate()
                .map(|(i, wi)| wi * samples[s + i])
                .sum::<f64>()
                / h
        })
        .collect()
}

fn fd_derivative_at(mats: &[nalgebra::DMatrix<f64>], k: usize, h: f64) -> nalgebra::DMatrix<f64> {
    let (s, w) = fd5_stencil(k, mats.len());
    w.iter().enumerate().fold(
        nalgebra::DMatrix::zeros(mats[0].nrows(), mats[0].ncols()),
        |acc, (i, wi)| acc + &mats[s + i] * *wi,
    ) / h
}

/// Energy quantities sampled along a reduced trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyTrace {
    pub xi: Vec<f64>,
    pub bracket: f64,
    pub eps: f64,
    pub t: Vec<f64>,
    pub v: Vec<CVec>,
    /// (Q V | V)
    pub energy: Vec<f64>,
    /// |(d_t Q V | V)| / (Q V | V)
    pub k_eps: Vec<f64>,
    /// |<xi> ((Q A_0 - A_0^* Q) V | V)|
    pub term2: Vec<f64>,
    /// |((Q B - B^* Q) V | V)|
    pub term3: Vec<f64>,
    /// Commutator constant of Q_eps at the sampled eigenvalues: the bound
    /// term2 <= c <xi> eps E holds whenever calA is their companion matrix.
    pub commutator_bound: Vec<f64>,
    /// d_t E by a fourth-order difference of the energy samples.
    pub energy_rate: Vec<f64>,
    /// min over samples of E / |V|^2 (samples with V = 0 skipped).
    pub coercivity_min: f64,
    pub all_hyperbolic: bool,
}

impl EnergyTrace {
    pub fn step(&self) -> f64 {
        self.t[1] - self.t[0]
    }

    /// Trapezoidal integral of K_eps over [0, T].
    pub fn integral_k(&self) -> f64 {
        let h = self.step();
        let n = self.k_eps.len();
        h * (self.k_eps.iter().sum::<f64>() - 0.5 * (self.k_eps[0] + self.k_eps[n - 1]))
    }
}

pub fn reduced_integrate(
    s: &SystemSymbol,
    xi: &[f64],
    v0: &CVec,
    cfg: &SolverConfig,
) -> Result<EnergyTrace> {
    let eps = cfg.eps_policy.eps(s.m(), xi)?;
    reduced_integrate_eps(s, xi, v0, cfg, eps)
}

/// [`reduced_integrate`] with an explicit eps.
pub fn reduced_integrate_eps(
    s: &SystemSymbol,
    xi: &[f64],
    v0: &CVec,
    cfg: &SolverConfig,
    eps: f64,
) -> Result<EnergyTrace> {
    let traj = propagate_reduced(s, xi, v0, cfg)?;
    let red = Reducer::new(s);
    let h = traj.t[1] - traj.t[0];
    let mut qs = Vec::with_capacity(traj.t.len());
    let mut all_hyperbolic = true;
    let mut term2 = Vec::with_capacity(traj.t.len());
    let mut term3 = Vec::with_capacity(traj.t.len());
    let mut energy = Vec::with_capacity(traj.t.len());
    let mut commutator_bound = Vec::with_capacity(traj.t.len());
    for (&t, v) in traj.t.iter().zip(&traj.states) {
        let sp = symbol::rescaled_eigenvalues(s, t, xi)?;
        all_hyperbolic &= sp.hyperbolic;
        let qs_t = quasi_sym::build_q_eps(&sp.lambdas, eps)?;
        commutator_bound.push(quasi_sym::commutator_constant(&qs_t)?);
        let q = qs_t.lifted_q();
        let qc = to_complex(&q);
        let sys = red.assemble_fast(t, xi)?;
        let e = quad_form(&qc, v).re;
        let c2 = &qc * &sys.cal_a - sys.cal_a.adjoint() * &qc;
        let c3 = &qc * &sys.cal_b - sys.cal_b.adjoint() * &qc;
        energy.push(e);
        term2.push(quad_form(&c2, v).norm());
        term3.push(quad_form(&c3, v).norm());
        qs.push(q);
    }
    let k_eps = (0..qs.len())
        .map(|k| {
            let dq = to_complex(&fd_derivative_at(&qs, k, h));
            crate::conditions::guarded_ratio(quad_form(&dq, &traj.states[k]).norm(), energy[k])
        })
        .collect();
    let coercivity_min = traj
        .states
        .iter()
        .zip(&energy)
        .filter(|(v, _)| v.norm_squared() > 0.0)
        .map(|(v, e)| e / v.norm_squared())
        .fold(f64::INFINITY, f64::min);
    Ok(EnergyTrace {
        xi: xi.to_vec(),
        bracket: bracket(xi),
        eps,
        energy_rate: fd_derivative(&energy, h),
        t: traj.t,
        v: traj.states,
        energy,
        k_eps,
        term2,
        term3,
        commutator_bound,
        coercivity_min,
        all_hyperbolic,
    })
}

/// Envelope constants: C2 = sup term2 / (eps <xi> E), C3 = sup term3 / E.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantsFit {
    pub c2: f64,
    pub c3: f64,
}

pub const ENERGY_FLOOR: f64 = 1e-300;

pub fn fit_constants(traces: &[EnergyTrace]) -> ConstantsFit {
    let mut fit = ConstantsFit { c2: 0.0, c3: 0.0 };
    for tr in traces {
        for k in 0..tr.t.len() {
            let e = tr.energy[k];
            if e <= ENERGY_FLOOR {
                continue;
            }
            fit.c2 = fit.c2.max(tr.term2[k] / (tr.eps * tr.bracket * e));
            fit.c3 = fit.c3.max(tr.term3[k] / e);
        }
    }
    fit
}

/// C2 from the quasi-symmetriser's commutator property along the traces,
/// C3 fitted as in [`fit_constants`]. Unlike the fitted C2 this does not
/// adapt to a calA whose spectrum is not real.
pub fn structural_constants(traces: &[EnergyTrace]) -> ConstantsFit {
    let c2 = traces
        .iter()
        .flat_map(|tr| tr.commutator_bound.iter().copied())
        .fold(0.0, f64::max);
    ConstantsFit {
        c2,
        c3: fit_constants(traces).c3,
    }
}

pub const CONSTANT_SLACK: f64 = 1.05;
pub const INEQUALITY_RTOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    /// d_t E - (K + slack (C2 eps <xi> + C3)) E per sample.
    pub residual: Vec<f64>,
    pub max_residual: f64,
    /// max over samples of residual / (|d_t E| + |bound|), 0 where both vanish.
    pub worst_relative: f64,
    pub tolerance: f64,
    pub witness_t: Option<f64>,
    pub holds: bool,
}

/// Checks d_t E <= (K + 1.05 (C2 eps <xi> + C3)) E sample by sample, each
/// sample relative to its own |d_t E| + bound so decaying traces are not masked.
pub fn energy_inequality_check(trace: &EnergyTrace, fit: &ConstantsFit) -> InequalityReport {
    let growth = CONSTANT_SLACK * (fit.c2 * trace.eps * trace.bracket + fit.c3);
    let mut residual = Vec::with_capacity(trace.t.len());
    let mut max_residual = f64::NEG_INFINITY;
    let mut worst_relative = f64::NEG_INFINITY;
    let mut worst_k = 0;
    for k in 0..trace.t.len() {
        let bound = (trace.k_eps[k] + growth) * trace.energy[k];
        let r = trace.energy_rate[k] - bound;
        let scale = trace.energy_rate[k].abs() + bound.abs();
        let rel = if scale > 0.0 {
            r / scale
        } else if r == 0.0 {
            0.0
        } else {
            f64::NAN
        };
        max_residual = max_residual.max(r);
        if rel > worst_relative || rel.is_nan() {
            worst_relative = rel;
            worst_k = k;
        }
        residual.push(r);
    }
    let holds = worst_relative <= INEQUALITY_RTOL;
    InequalityReport {
        residual,
        max_residual,
        worst_relative,
        tolerance: INEQUALITY_RTOL,
        witness_t: if holds { None } else { Some(trace.t[worst_k]) },
        holds,
    }
}

/// Least-squares line y = slope x + intercept.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let rss = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - slope * a - intercept).powi(2))
        .sum();
    (slope, intercept, rss)
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegralSweep {
    pub xi: Vec<f64>,
    pub eps: Vec<f64>,
    pub integrals: Vec<f64>,
    /// Fitted exponent of int K dt against eps.
    pub slope: f64,
    /// -2(m-1)/k
    pub expected: f64,
    /// max_i integral_i * eps_i^{2(m-1)/k}: the C1 each sample would need.
    pub c1: Vec<f64>,
}

/// int_0^T K_eps dt at fixed xi for each eps, and the log-log slope.
pub fn integral_k_sweep(
    s: &SystemSymbol,
    xi: &[f64],
    v0: &CVec,
    cfg: &SolverConfig,
    eps: &[f64],
    k: f64,
) -> Result<IntegralSweep> {
    if eps.len() < 2 {
        return Err(Error::Domain("eps sweep needs at least two values".into()));
    }
    let integrals: Vec<f64> = eps
        .iter()
        .map(|&e| Ok(reduced_integrate_eps(s, xi, v0, cfg, e)?.integral_k()))
        .collect::<Result<_>>()?;
    let lx: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let ly: Vec<f64> = integrals.iter().map(|v| v.max(ENERGY_FLOOR).ln()).collect();
    let (slope, _, _) = linear_fit(&lx, &ly);
    let expected = -2.0 * (s.m() as f64 - 1.0) / k;
    let c1 = integrals
        .iter()
        .zip(eps)
        .map(|(i, e)| i * e.powf(-expected))
        .collect();
    Ok(IntegralSweep {
        xi: xi.to_vec(),
        eps: eps.to_vec(),
        integrals,
        slope,
        expected,
        c1,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthClass {
    Polynomial,
    Gevrey,
    Exponential,
}

impl GrowthClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            GrowthClass::Polynomial => "polynomial",
            GrowthClass::Gevrey => "gevrey",
            GrowthClass::Exponential => "exponential",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReport {
    pub xi_norms: Vec<f64>,
    pub brackets: Vec<f64>,
    /// log sup_t |V(t)| / |V(0)|, maximised over unit initial data e_i.
    pub log_growth: Vec<f64>,
    pub kappa: f64,
    pub poly_rss: f64,
    pub sigma: f64,
    pub gevrey_coeff: f64,
    pub gevrey_rss: f64,
    pub aic_poly: f64,
    pub aic_gevrey: f64,
    /// Coefficient of <xi> in the sigma = 1 fit.
    pub rate: f64,
    pub class: GrowthClass,
}

pub const SIGMA_POLY_CUTOFF: f64 = 0.05;
pub const SIGMA_EXP_CUTOFF: f64 = 0.95;

/// log sup_t |V(t)| / |V(0)| for V(0) lifted from each unit vector e_i.
pub fn log_growth_at(s: &SystemSymbol, xi: &[f64], cfg: &SolverConfig) -> Result<f64> {
    let m = s.m();
    let mut best = f64::NEG_INFINITY;
    for i in 0..m {
        let mut u0 = alloc::vec![C64::new(0.0, 0.0); m];
        u0[i] = C64::new(1.0, 0.0);
        let v0 = reduction::transform_initial_data(s, &u0, xi)?;
        let n0 = v0.norm();
        let traj = propagate_reduced(s, xi, &v0, cfg)?;
        let sup = traj.states.iter().map(|v| v.norm()).fold(0.0, f64::max);
        best = best.max((sup / n0).ln());
    }
    Ok(best)
}

fn aic(rss: f64, n: usize, params: usize) -> f64 {
    n as f64 * (rss / n as f64).max(ENERGY_FLOOR).ln() + 2.0 * params as f64
}

/// Model selection over precomputed growth samples.
pub fn classify_growth(xi_norms: &[f64], log_growth: &[f64]) -> Result<GrowthReport> {
    let n = xi_norms.len();
    if n < 3 || n != log_growth.len() {
        return Err(Error::Domain(
            "growth fit needs at least three frequencies".into(),
        ));
    }
    let lo = xi_norms.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xi_norms.iter().copied().fold(0.0, f64::max);
    if !(lo > 0.0) || hi / lo < 100.0 * (1.0 - 1e-12) {
        return Err(Error::Domain(format!(
            "frequency grid [{lo}, {hi}] spans less than two decades"
        )));
    }
    let brackets: Vec<f64> = xi_norms.iter().map(|r| (1.0 + r * r).sqrt()).collect();
    let lb: Vec<f64> = brackets.iter().map(|b| b.ln()).collect();
    let (kappa, _, poly_rss) = linear_fit(&lb, log_growth);
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for step in 1..=100 {
        let sigma = step as f64 / 100.0;
        let x: Vec<f64> = brackets.iter().map(|b| b.powf(sigma)).collect();
        let (c, _, rss) = linear_fit(&x, log_growth);
        if rss < best.0 {
            best = (rss, sigma, c);
        }
    }
    let (gevrey_rss, sigma, gevrey_coeff) = best;
    let (rate, _, _) = linear_fit(&brackets, log_growth);
    let aic_poly = aic(poly_rss, n, 2);
    let aic_gevrey = aic(gevrey_rss, n, 3);
    let class = if sigma < SIGMA_POLY_CUTOFF || aic_poly <= aic_gevrey || gevrey_coeff <= 0.0 {
        GrowthClass::Polynomial
    } else if sigma >= SIGMA_EXP_CUTOFF {
        GrowthClass::Exponential
    } else {
        GrowthClass::Gevrey
    };
    Ok(GrowthReport {
        xi_norms: xi_norms.to_vec(),
        brackets,
        log_growth: log_growth.to_vec(),
        kappa,
        poly_rss,
        sigma,
        gevrey_coeff,
        gevrey_rss,
        aic_poly,
        aic_gevrey,
        rate,
        class,
    })
}

/// Growth samples along the first coordinate direction, then model selection.
pub fn growth_fit(s: &SystemSymbol, xi_norms: &[f64], cfg: &SolverConfig) -> Result<GrowthReport> {
    let samples: Vec<f64> = xi_norms
        .iter()
        .map(|&r| {
            let mut xi = alloc::vec![0.0; s.n()];
            xi[0] = r;
            log_growth_at(s, &xi, cfg)
        })
        .collect::<Result<_>>()?;
    classify_growth(xi_norms, &samples)
}

/// max over samples of |V_reduced - lift(u_direct)| / max |lift(u_direct)|.
pub fn oracle_error(
    s: &SystemSymbol,
    xi: &[f64],
    u0hat: &[C64],
    cfg: &SolverConfig,
) -> Result<f64> {
    let direct = direct_integrate(s, xi, u0hat, cfg)?;
    let v0 = reduction::transform_initial_data(s, u0hat, xi)?;
    let reduced = propagate_reduced(s, xi, &v0, cfg)?;
    let red = Reducer::new(s);
    let mut scale: f64 = 0.0;
    let mut worst: f64 = 0.0;
    for ((&t, u), v) in direct.t.iter().zip(&direct.states).zip(&reduced.states) {
        let lifted = red.lift_state(t, xi, u);
        scale = scale.max(lifted.norm());
        worst = worst.max((&lifted - v).norm());
    }
    Ok(if scale > 0.0 { worst / scale } else { worst })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policies() {
        let xi = [3.0];
        let br = 10f64.sqrt();
        assert_eq!(EpsPolicy::Fixed(0.25).eps(2, &xi).unwrap(), 0.25);
        assert!((EpsPolicy::InverseBracket.eps(2, &xi).unwrap() - 1.0 / br).abs() < 1e-15);
        assert!(
            (EpsPolicy::Balanced { k: 2.0 }.eps(2, &xi).unwrap() - br.powf(-0.5)).abs() < 1e-15
        );
        assert!(EpsPolicy::Fixed(1.5).eps(2, &xi).is_err());
        assert!(EpsPolicy::Balanced { k: 0.0 }.eps(2, &xi).is_err());
    }

    #[test]
    fn plan_guard() {
        let cfg = SolverConfig {
            step: Some(0.01),
            ..SolverConfig::default()
        };
        assert!(matches!(
            cfg.plan(1.0, &[100.0]),
            Err(Error::StepGuard { .. })
        ));
        let (n, h) = cfg.plan(1.0, &[1.0]).unwrap();
        assert_eq!(n, 100);
        assert!((h - 0.01).abs() < 1e-15);
        let auto = SolverConfig::default().plan(1.0, &[0.0]).unwrap();
        assert_eq!(auto.0, 20);
    }

    #[test]
    fn fd_is_exact_on_quartics() {
        let h = 0.1;
        let xs: Vec<f64> = (0..9).map(|k| k as f64 * h).collect();
        let f: Vec<f64> = xs.iter().map(|x| x.powi(4) - 2.0 * x * x + x).collect();
        let d = fd_derivative(&f, h);
        for (x, dv) in xs.iter().zip(d) {
            assert!((dv - (4.0 * x.powi(3) - 4.0 * x + 1.0)).abs() < 1e-11);
        }
    }

    #[test]
    fn rk4_scalar_exponential() {
        let y0 = CVec::from_element(1, C64::new(1.0, 0.0));
        let tr = rk4_linear(
            |_| Ok(CMat::from_element(1, 1, C64::new(0.0, 1.0))),
            &y0,
            0.0,
            0.01,
            100,
        )
        .unwrap();
        let exact = (I * 1.0).exp();
        assert!((tr.states[100][0] - exact).norm() < 1e-9);
    }

    #[test]
    fn growth_classes_on_synthetic_data() {
        let r: Vec<f64> = (0..12).map(|k| 10f64.powf(k as f64 * 2.0 / 11.0)).collect();
        let exp: Vec<f64> = r.iter().map(|x| (1.0 + x * x).sqrt() * 1.0 - 0.7).collect();
        let rep = classify_growth(&r, &exp).unwrap();
        assert_eq!(rep.class, GrowthClass::Exponential);
        assert!((rep.rate - 1.0).abs() < 1e-9);
        let poly: Vec<f64> = r
            .iter()
            .map(|x| 0.5 * (1.0 + x * x).sqrt().ln() + 0.2)
            .collect();
        let rep = classify_growth(&r, &poly).unwrap();
        assert_eq!(rep.class, GrowthClass::Polynomial);
        assert!((rep.kappa - 0.5).abs() < 1e-9);
        let gev: Vec<f64> = r
            .iter()
            .map(|x| 2.0 * (1.0 + x * x).sqrt().powf(0.5))
            .collect();
        let rep = classify_growth(&r, &gev).unwrap();
        assert_eq!(rep.class, GrowthClass::Gevrey);
        assert!((rep.sigma - 0.5).abs() < 1e-9);
        assert!(classify_growth(&r[..6], &exp[..6]).is_err());
    }
}
