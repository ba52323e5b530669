//! Periodic 1-D Cauchy problem D_t u = A(t, D_x) u on [0, 2 pi) by FFT in x
//! and the reduced system per Fourier mode.

use hyposym_core::linalg::{bracket, CMat, CVec, C64, I};
use hyposym_core::reduction::Reducer;
use hyposym_core::solver::{rk4_linear, SolverConfig};
use hyposym_core::{Error, Result, SystemSymbol};
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::config::Profile;

pub const PERIOD: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct CauchySolution {
    pub x: Vec<f64>,
    pub times: Vec<f64>,
    /// [snapshot][component][grid point]
    pub fields: Vec<Vec<Vec<C64>>>,
}

pub fn grid(points: usize) -> Vec<f64> {
    (0..points)
        .map(|j| PERIOD * j as f64 / points as f64)
        .collect()
}

/// Signed wave number of FFT bin `k` for `n` points; bin n/2 maps to -n/2.
pub fn wave_number(k: usize, n: usize) -> f64 {
    if k < n / 2 {
        k as f64
    } else {
        k as f64 - n as f64
    }
}

fn profile_value(p: Profile, x: f64) -> f64 {
    let c = PERIOD / 2.0;
    match p {
        Profile::Gaussian => {
            // periodic images of a narrow Gaussian centred at pi
            (-1..=1)
                .map(|k| {
                    let d = x - c + PERIOD * k as f64;
                    (-d * d / (2.0 * 0.3 * 0.3)).exp()
                })
                .sum()
        }
        Profile::Sine => x.sin(),
        Profile::Bump => {
            let r = x - c;
            if r.abs() < 1.0 {
                (1.0 - 1.0 / (1.0 - r * r)).exp()
            } else {
                0.0
            }
        }
    }
}

/// Profile in the first component, zero elsewhere.
pub fn sample_profile(p: Profile, m: usize, points: usize) -> Vec<Vec<C64>> {
    let mut u = vec![vec![C64::new(0.0, 0.0); points]; m];
    for (j, x) in grid(points).into_iter().enumerate() {
        u[0][j] = C64::new(profile_value(p, x), 0.0);
    }
    u
}

fn is_time_independent(s: &SystemSymbol) -> bool {
    s.coeffs().iter().flatten().all(|p| p.coeffs().len() <= 1)
}

/// One RK4 step of y' = M y as a matrix.
fn rk4_step_matrix(m: &CMat, h: f64) -> CMat {
    let hm = m * C64::new(h, 0.0);
    let id = CMat::identity(m.nrows(), m.ncols());
    let hm2 = &hm * &hm;
    let hm3 = &hm2 * &hm;
    let hm4 = &hm3 * &hm;
    id + &hm
        + hm2 * C64::new(0.5, 0.0)
        + hm3 * C64::new(1.0 / 6.0, 0.0)
        + hm4 * C64::new(1.0 / 24.0, 0.0)
}

fn matrix_power(a: &CMat, mut n: usize) -> CMat {
    let mut result = CMat::identity(a.nrows(), a.ncols());
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

/// Reduced state of one mode at each snapshot time.
fn evolve_mode(
    red: &Reducer,
    constant: bool,
    xi: f64,
    u0: &CVec,
    times: &[f64],
    cfg: &SolverConfig,
) -> Result<Vec<CVec>> {
    let x = [xi];
    // plan() enforces the step guard
    cfg.plan(red.symbol().horizon(), &x)?;
    let limit = cfg.step.unwrap_or(cfg.cfl / bracket(&x));
    let mut v = red.lift_state(0.0, &x, u0);
    let mut t = 0.0;
    let mut out = Vec::with_capacity(times.len());
    let gen = |s: f64| -> Result<CMat> {
        let sys = red.assemble_fast(s, &x)?;
        Ok((sys.cal_a + sys.cal_b) * I)
    };
    let const_gen = if constant { Some(gen(0.0)?) } else { None };
    for &target in times {
        let span = target - t;
        if span > 0.0 {
            let n = (span / limit * (1.0 - 1e-12)).ceil().max(1.0) as usize;
            let h = span / n as f64;
            v = match &const_gen {
                Some(m) => matrix_power(&rk4_step_matrix(m, h), n) * &v,
                None => rk4_linear(gen, &v, t, h, n)?
                    .states
                    .pop()
                    .expect("trajectory is non-empty"),
            };
            if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NonFinite { t: target });
            }
            t = target;
        }
        out.push(v.clone());
    }
    Ok(out)
}

/// FFT of each component, per-mode reduced evolution, inverse FFT of the
/// first band rescaled by <xi>^{-(m-1)}.
pub fn solve_cauchy_1d(
    s: &SystemSymbol,
    u0: &[Vec<C64>],
    snapshots: &[f64],
    cfg: &SolverConfig,
) -> Result<CauchySolution> {
    let m = s.m();
    if s.n() != 1 {
        return Err(Error::Domain(format!(
            "the periodic solver needs n = 1, got n = {}",
            s.n()
        )));
    }
    if u0.len() != m {
        return Err(Error::Shape(format!(
            "u0 has {} components, expected {m}",
            u0.len()
        )));
    }
    let points = u0[0].len();
    if points < 2 || !points.is_power_of_two() || u0.iter().any(|c| c.len() != points) {
        return Err(Error::Domain(format!(
            "grid size {points} must be a power of two (and equal per component)"
        )));
    }
    if snapshots.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain("snapshot times must be nondecreasing".into()));
    }
    if let Some(&t) = snapshots
        .iter()
        .find(|&&t| !(0.0..=s.horizon()).contains(&t))
    {
        return Err(Error::Domain(format!(
            "snapshot time {t} outside [0, {}]",
            s.horizon()
        )));
    }

    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(points);
    let inv = planner.plan_fft_inverse(points);
    let mut spectra: Vec<Vec<C64>> = u0.to_vec();
    for comp in spectra.iter_mut() {
        fwd.process(comp);
    }

    let red = Reducer::new(s);
    let constant = is_time_independent(s);
    let modes: Vec<Vec<CVec>> = (0..points)
        .into_par_iter()
        .map(|k| {
            let u = CVec::from_fn(m, |i, _| spectra[i][k]);
            if u.iter().all(|z| *z == C64::new(0.0, 0.0)) {
                return Ok(vec![CVec::zeros(m * m); snapshots.len()]);
            }
            evolve_mode(&red, constant, wave_number(k, points), &u, snapshots, cfg)
        })
        .collect::<Result<_>>()?;

    let scale = 1.0 / points as f64;
    let mut fields = Vec::with_capacity(snapshots.len());
    for snap in 0..snapshots.len() {
        let mut comps = Vec::with_capacity(m);
        for i in 0..m {
            let mut buf: Vec<C64> = (0..points)
                .map(|k| {
                    let br = bracket(&[wave_number(k, points)]);
                    modes[k][snap][i * m] / br.powi(m as i32 - 1)
                })
                .collect();
            inv.process(&mut buf);
            comps.push(buf.into_iter().map(|z| z * scale).collect());
        }
        fields.push(comps);
    }
    Ok(CauchySolution {
        x: grid(points),
        times: snapshots.to_vec(),
        fields,
    })
}
