//! The six commands: each turns a validated config into an [`Outcome`].

use hyposym_core::catalog;
use hyposym_core::conditions::{
    self, aggregate, evaluate_point, ks_ratio, lemma3_residual, lemma4_constants, logspace,
    sample_s_m, zone_study, Grid, PointEval,
};
use hyposym_core::linalg::C64;
use hyposym_core::quasi_sym::{build_q_eps, near_diagonal_constant, verify_properties};
use hyposym_core::reduction::{
    block_eigen_mismatch, cal_b_zero_columns, lower_order_consistency, Reducer,
};
use hyposym_core::solver::{
    classify_growth, energy_inequality_check, fit_constants, integral_k_sweep, log_growth_at,
    oracle_error, reduced_integrate, structural_constants, EnergyTrace, SolverConfig,
};
use hyposym_core::symbol::{
    cayley_hamilton_residual, char_coeffs_of, eval_symbol, rescaled_eigenvalues,
};
use hyposym_core::{reduction, Result, SystemSymbol};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::cauchy::{sample_profile, solve_cauchy_1d};
use crate::config::{Command, RunConfig};
use crate::report::{cmat, fmt_f64, num, nums, sup, Outcome, Table, Violation};

pub const CH_TOL: f64 = 1e-8;
pub const LOWER_ORDER_TOL: f64 = 1e-8;
pub const ZERO_COLUMN_TOL: f64 = 1e-12;
/// Eigenvalues at a triple root are only determined to about eps^{1/3}.
pub const EIGEN_MISMATCH_TOL: f64 = 1e-4;
pub const QS_TOL: f64 = 1e-8;
/// det Q_0 is compared only where the eigenvalues are this well separated.
pub const DET_KS_LIMIT: f64 = 50.0;
/// Allowed excess of the integral exponent beyond -2(m-1)/k, relative.
pub const INTEGRAL_SLOPE_SLACK: f64 = 0.25;

pub fn solver_config(cfg: &RunConfig) -> SolverConfig {
    SolverConfig {
        step: cfg.solver.step,
        cfl: cfg.solver.cfl,
        eps_policy: cfg.solver.eps_policy,
    }
}

pub fn symbol(cfg: &RunConfig) -> Result<SystemSymbol> {
    cfg.system.to_symbol()
}

fn axis_xi(n: usize, r: f64) -> Vec<f64> {
    let mut xi = vec![0.0; n];
    xi[0] = r;
    xi
}

/// u_hat(0) from the config, defaulting to (1, i, 0, ...).
pub fn initial_data(cfg: &RunConfig, m: usize) -> Result<Vec<C64>> {
    if cfg.solver.initial.is_empty() {
        return Ok((0..m)
            .map(|i| match i {
                0 => C64::new(1.0, 0.0),
                1 => C64::new(0.0, 1.0),
                _ => C64::new(0.0, 0.0),
            })
            .collect());
    }
    if cfg.solver.initial.len() != m {
        return Err(hyposym_core::Error::Shape(format!(
            "solver.initial has {} entries, the system has m = {m}",
            cfg.solver.initial.len()
        )));
    }
    Ok(cfg
        .solver
        .initial
        .iter()
        .map(|&(re, im)| C64::new(re, im))
        .collect())
}

pub fn grid(cfg: &RunConfig, s: &SystemSymbol) -> Result<Grid> {
    let g = &cfg.grid;
    Grid::build(
        s.horizon(),
        g.t_points,
        g.xi_min,
        g.xi_max,
        g.xi_points,
        s.n(),
        g.directions,
    )
}

fn xi_cells(xi: &[f64]) -> Vec<String> {
    xi.iter().map(|&x| fmt_f64(x)).collect()
}

fn xi_header(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("xi_{i}")).collect()
}

fn point_witness(t: f64, xi: &[f64]) -> Value {
    json!({ "t": num(t), "xi": nums(xi) })
}

pub fn execute(command: Command, cfg: &RunConfig) -> Result<Outcome> {
    match command {
        Command::Reduce => reduce(cfg),
        Command::VerifyQs => verify_qs(cfg),
        Command::Conditions => conditions_cmd(cfg),
        Command::Solve => solve(cfg),
        Command::Growth => growth(cfg),
        Command::Report => {
            let mut all = Outcome::default();
            for c in [
                Command::Reduce,
                Command::VerifyQs,
                Command::Conditions,
                Command::Solve,
                Command::Growth,
            ] {
                let mut part = execute(c, cfg)?;
                for t in part.tables.iter_mut() {
                    t.name = format!("{}_{}", c.as_str().replace('-', "_"), t.name);
                }
                all.merge(c.as_str(), part);
            }
            Ok(all)
        }
    }
}

struct ReducePoint {
    t: f64,
    xi: Vec<f64>,
    ch: f64,
    xcheck: f64,
    lower_order: f64,
    zero_columns: f64,
    eigen_mismatch: Option<f64>,
}

fn reduce(cfg: &RunConfig) -> Result<Outcome> {
    let s = symbol(cfg)?;
    let grid = grid(cfg, &s)?;
    let red = Reducer::new(&s);
    let pts: Vec<(f64, Vec<f64>)> = grid.points().map(|(t, x)| (t, x.to_vec())).collect();
    let evals: Vec<ReducePoint> = pts
        .par_iter()
        .map(|(t, xi)| {
            let sys = red.assemble(*t, xi)?;
            let sp = rescaled_eigenvalues(&s, *t, xi)?;
            let a = eval_symbol(&s, *t, xi)?;
            let xcheck = char_coeffs_of(&a).map_or(f64::INFINITY, |c| c.xcheck_residual);
            Ok(ReducePoint {
                t: *t,
                xi: xi.clone(),
                ch: cayley_hamilton_residual(&s, *t, xi)?,
                xcheck,
                lower_order: lower_order_consistency(&s, *t, xi)?,
                zero_columns: cal_b_zero_columns(&sys) / sys.cal_b.norm().max(1.0),
                eigen_mismatch: if sp.hyperbolic {
                    block_eigen_mismatch(&sys, &sp.lambdas)
                } else {
                    None
                },
            })
        })
        .collect::<Result<_>>()?;

    let mut out = Outcome::default();
    let mut header = vec!["t".to_string()];
    header.extend(xi_header(s.n()));
    header.extend(
        [
            "cayley_hamilton",
            "char_xcheck",
            "lower_order",
            "zero_columns",
            "eigen_mismatch",
        ]
        .map(String::from),
    );
    let mut table = Table {
        name: "points".into(),
        header,
        rows: Vec::new(),
    };
    let checks: [(&str, f64, fn(&ReducePoint) -> f64); 5] = [
        ("cayley_hamilton", CH_TOL, |p| p.ch),
        ("char_xcheck", hyposym_core::symbol::CHAR_XCHECK_TOL, |p| {
            p.xcheck
        }),
        ("lower_order", LOWER_ORDER_TOL, |p| p.lower_order),
        ("zero_columns", ZERO_COLUMN_TOL, |p| p.zero_columns),
        ("eigen_mismatch", EIGEN_MISMATCH_TOL, |p| {
            p.eigen_mismatch.unwrap_or(0.0)
        }),
    ];
    let mut maxima = Map::new();
    for (name, tol, get) in checks {
        let mut worst = conditions::SupValue::default();
        for p in &evals {
            worst.absorb(get(p), p.t, &p.xi);
        }
        if !(worst.value <= tol) {
            out.violations.push(Violation::new(
                name,
                format!("max {} exceeds {}", fmt_f64(worst.value), fmt_f64(tol)),
                crate::report::witness(&worst.witness),
            ));
        }
        maxima.insert(
            name.into(),
            json!({ "max": sup(&worst), "tolerance": num(tol) }),
        );
    }
    for p in &evals {
        let mut row = vec![fmt_f64(p.t)];
        row.extend(xi_cells(&p.xi));
        row.extend(
            [
                p.ch,
                p.xcheck,
                p.lower_order,
                p.zero_columns,
                p.eigen_mismatch.unwrap_or(f64::NAN),
            ]
            .map(fmt_f64),
        );
        table.push(row);
    }

    let (t, xi) = (s.horizon(), grid.xis[0].clone());
    let sys = red.assemble(t, &xi)?;
    out.results.insert("grid_points".into(), json!(grid.len()));
    out.results.insert("checks".into(), Value::Object(maxima));
    out.results.insert(
        "sample".into(),
        json!({
            "t": num(t),
            "xi": nums(&xi),
            "bracket": num(sys.bracket),
            "char_coeffs": nums(&sys.c),
            "cal_a": cmat(&sys.cal_a),
            "cal_b": cmat(&sys.cal_b),
        }),
    );
    out.tables.push(table);
    Ok(out)
}

fn verify_qs(cfg: &RunConfig) -> Result<Outcome> {
    let s = symbol(cfg)?;
    let m = s.m();
    let q = &cfg.qs;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.output.seed);
    let mut out = Outcome::default();
    let mut per_eps = Vec::new();
    let mut table = Table::new(
        "samples",
        &[
            "eps",
            "sample",
            "recursion",
            "w_identity",
            "det_consistent",
            "det_printed",
            "q_min_eig",
            "commutator",
        ],
    );
    let mut near_diag_mins = Vec::new();
    for &eps in &q.eps {
        let lams: Vec<Vec<f64>> = (0..q.samples)
            .map(|_| {
                (0..m)
                    .map(|_| rand::Rng::random_range(&mut rng, -1.0..1.0))
                    .collect()
            })
            .collect();
        let reps = lams
            .par_iter()
            .map(|l| verify_properties(l, eps))
            .collect::<Result<Vec<_>>>()?;
        let mut rec: f64 = 0.0;
        let mut wid: f64 = 0.0;
        let mut det_c: f64 = 0.0;
        let mut det_p: f64 = 0.0;
        let mut det_skipped = 0usize;
        let mut qmin = f64::INFINITY;
        let mut part_min = f64::INFINITY;
        let mut comm: f64 = 0.0;
        for (k, (l, r)) in lams.iter().zip(&reps).enumerate() {
            let scale = 1.0 + r.q_max_eig.abs();
            rec = rec.max(r.recursion_residual / scale);
            wid = wid.max(r.w_identity_residual);
            if ks_ratio(l) < DET_KS_LIMIT {
                det_c = det_c.max(r.det_residual_consistent);
                det_p = det_p.max(r.det_residual_printed);
            } else {
                det_skipped += 1;
            }
            qmin = qmin.min(r.q_min_eig);
            part_min = r.part_min_eig.iter().copied().fold(part_min, f64::min);
            comm = comm.max(r.commutator_constant);
            table.push(vec![
                fmt_f64(eps),
                k.to_string(),
                fmt_f64(r.recursion_residual),
                fmt_f64(r.w_identity_residual),
                fmt_f64(r.det_residual_consistent),
                fmt_f64(r.det_residual_printed),
                fmt_f64(r.q_min_eig),
                fmt_f64(r.commutator_constant),
            ]);
        }
        for (name, v) in [
            ("recursion", rec),
            ("w_identity", wid),
            ("det_consistent", det_c),
        ] {
            if !(v <= QS_TOL) {
                out.violations.push(Violation::new(
                    name,
                    format!(
                        "eps {}: residual {} exceeds {}",
                        fmt_f64(eps),
                        fmt_f64(v),
                        fmt_f64(QS_TOL)
                    ),
                    json!({ "eps": num(eps) }),
                ));
            }
        }
        if !(qmin > 0.0) {
            out.violations.push(Violation::new(
                "positive_definite",
                format!(
                    "eps {}: smallest eigenvalue {}",
                    fmt_f64(eps),
                    fmt_f64(qmin)
                ),
                json!({ "eps": num(eps) }),
            ));
        }

        let nd_lams: Vec<Vec<f64>> = (0..q.near_diagonal_samples)
            .map(|_| sample_s_m(m, q.big_m, &mut rng))
            .collect();
        let nd = nd_lams
            .par_iter()
            .map(|l| near_diagonal_constant(&build_q_eps(l, eps)?.q_eps))
            .collect::<Result<Vec<f64>>>()?;
        let nd_min = nd.iter().copied().fold(f64::INFINITY, f64::min);
        near_diag_mins.push(nd_min);
        if !(nd_min > 0.0) {
            out.violations.push(Violation::new(
                "near_diagonal",
                format!("eps {}: min constant {}", fmt_f64(eps), fmt_f64(nd_min)),
                json!({ "eps": num(eps) }),
            ));
        }

        per_eps.push(json!({
            "eps": num(eps),
            "samples": q.samples,
            "recursion_residual_max": num(rec),
            "w_identity_residual_max": num(wid),
            "det_residual_consistent_max": num(det_c),
            "det_residual_printed_max": num(det_p),
            "det_samples_skipped": det_skipped,
            "q_min_eig_min": num(qmin),
            "part_min_eig_min": num(part_min),
            "commutator_constant_max": num(comm),
            "near_diagonal_min": num(nd_min),
        }));
    }

    let lemma3 = (0..q.samples)
        .map(|_| {
            lemma3_residual(
                &(0..m)
                    .map(|_| rand::Rng::random_range(&mut rng, -1.0..1.0))
                    .collect::<Vec<_>>(),
            )
        })
        .fold(0.0, f64::max);
    if !(lemma3 <= QS_TOL) {
        out.violations.push(Violation::new(
            "difference_identity",
            format!("residual {}", fmt_f64(lemma3)),
            Value::Null,
        ));
    }
    let lower = lemma4_constants(m, q.big_m, q.samples, &mut rng);
    let (lo, hi) = near_diag_mins
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));

    out.results.insert("m".into(), json!(m));
    out.results.insert("per_eps".into(), Value::Array(per_eps));
    out.results.insert(
        "near_diagonal".into(),
        json!({ "big_m": num(q.big_m), "samples": q.near_diagonal_samples, "min_per_eps": nums(&near_diag_mins),
                "spread": num(if lo > 0.0 { hi / lo } else { f64::INFINITY }) }),
    );
    out.results
        .insert("difference_identity_residual_max".into(), num(lemma3));
    out.results
        .insert("lower_bound_constants".into(), nums(&lower));
    out.results.insert("det_printed_constant_note".into(), json!(
        "det Q_0 = ((m-1)!)^m prod (l_i - l_j)^2 is used for the pass/fail check; the (m-1)! form agrees only for m <= 2"
    ));
    out.tables.push(table);
    Ok(out)
}

fn conditions_cmd(cfg: &RunConfig) -> Result<Outcome> {
    let s = symbol(cfg)?;
    let grid = grid(cfg, &s)?;
    let red = Reducer::new(&s);
    let pts: Vec<(f64, Vec<f64>)> = grid.points().map(|(t, x)| (t, x.to_vec())).collect();
    let evals: Vec<PointEval> = pts
        .par_iter()
        .map(|(t, xi)| evaluate_point(&red, *t, xi))
        .collect::<Result<_>>()?;
    let rep = aggregate(s.m(), &evals)?;

    let ti: Vec<usize> = spread_indices(grid.ts.len(), 8);
    let xi_idx: Vec<usize> = spread_indices(grid.xis.len(), 4);
    let zone_pts: Vec<(f64, Vec<f64>)> = ti
        .iter()
        .flat_map(|&i| xi_idx.iter().map(move |&j| (i, j)))
        .map(|(i, j)| (grid.ts[i], grid.xis[j].clone()))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.output.seed);
    let zones = zone_study(&red, &zone_pts, 32, &mut rng)?;

    let mut out = Outcome::default();
    if rep.nonhyperbolic_points > 0 {
        let p = evals.iter().find(|p| !p.hyperbolic).expect("counted above");
        out.violations.push(Violation::new(
            "hyperbolicity",
            format!(
                "{} grid points with non-real eigenvalues",
                rep.nonhyperbolic_points
            ),
            point_witness(p.t, &p.xi),
        ));
    }
    if rep.implication_failures > 0 {
        out.violations.push(Violation::new(
            "derivative_implies_levi",
            format!(
                "{} points fail; worst ratio {}",
                rep.implication_failures,
                fmt_f64(rep.implication_worst.value)
            ),
            crate::report::witness(&rep.implication_worst.witness),
        ));
    }

    out.results.insert("m".into(), json!(s.m()));
    out.results
        .insert("grid_points".into(), json!(rep.grid_points));
    out.results.insert(
        "nonhyperbolic_points".into(),
        json!(rep.nonhyperbolic_points),
    );
    out.results
        .insert("ks_constant".into(), sup(&rep.ks_constant));
    out.results.insert(
        "levi_ratios".into(),
        Value::Array(
            rep.levi_ratios
                .iter()
                .map(|row| Value::Array(row.iter().map(sup).collect()))
                .collect(),
        ),
    );
    out.results.insert(
        "thm2_ratios".into(),
        Value::Array(rep.thm2_ratios.iter().map(sup).collect()),
    );
    out.results
        .insert("sandwich_constant".into(), sup(&rep.sandwich_constant));
    out.results.insert(
        "implication".into(),
        json!({ "failures": rep.implication_failures, "worst": sup(&rep.implication_worst) }),
    );
    out.results.insert(
        "zones".into(),
        json!({
            "points": zone_pts.len(),
            "samples_per_point": 32,
            "deltas": nums(&zones.deltas),
            "counts": zones.counts,
            "lower": nums(&zones.lower),
            "upper": nums(&zones.upper),
            "doublings": zones.doublings,
        }),
    );

    let mut header = vec!["t".to_string()];
    header.extend(xi_header(s.n()));
    header.extend(["kind", "value"].map(String::from));
    let mut table = Table {
        name: "points".into(),
        header,
        rows: Vec::new(),
    };
    for p in &evals {
        let mut emit = |kind: String, v: f64| {
            let mut row = vec![fmt_f64(p.t)];
            row.extend(xi_cells(&p.xi));
            row.push(kind);
            row.push(fmt_f64(v));
            table.push(row);
        };
        emit("ks".into(), p.ks);
        for (l, row) in p.levi.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                emit(format!("levi_l{}_j{}", l + 1, j + 1), v);
            }
        }
        for (l, &v) in p.thm2.iter().enumerate() {
            emit(format!("derivative_l{}", l + 1), v);
        }
        emit("sandwich".into(), p.sandwich);
        emit("implication".into(), p.implication_ratio);
    }
    out.tables.push(table);
    Ok(out)
}

/// Up to `k` evenly spread indices into 0..n, endpoints included.
fn spread_indices(n: usize, k: usize) -> Vec<usize> {
    if n <= k {
        return (0..n).collect();
    }
    let mut idx: Vec<usize> = (0..k)
        .map(|i| (i * (n - 1) + (k - 1) / 2) / (k - 1))
        .collect();
    idx.dedup();
    idx
}

fn solve(cfg: &RunConfig) -> Result<Outcome> {
    let s = symbol(cfg)?;
    let scfg = solver_config(cfg);
    let u0 = initial_data(cfg, s.m())?;
    let xis: Vec<Vec<f64>> = cfg.solver.xi.iter().map(|&r| axis_xi(s.n(), r)).collect();
    let traces: Vec<EnergyTrace> = xis
        .par_iter()
        .map(|xi| {
            let v0 = reduction::transform_initial_data(&s, &u0, xi)?;
            reduced_integrate(&s, xi, &v0, &scfg)
        })
        .collect::<Result<_>>()?;
    let oracle: Vec<f64> = xis
        .par_iter()
        .map(|xi| oracle_error(&s, xi, &u0, &scfg))
        .collect::<Result<_>>()?;
    let fitted = fit_constants(&traces);
    let fit = structural_constants(&traces);

    let mut out = Outcome::default();
    let mut trace_json = Vec::new();
    let mut table = Table::new(
        "energy",
        &[
            "xi",
            "t",
            "energy",
            "k_eps",
            "term2",
            "term3",
            "energy_rate",
            "inequality_residual",
        ],
    );
    for (tr, err) in traces.iter().zip(&oracle) {
        let rep = energy_inequality_check(tr, &fit);
        if !rep.holds {
            let t = rep.witness_t.unwrap_or(f64::NAN);
            out.violations.push(Violation::new(
                "energy_inequality",
                format!(
                    "xi {}: relative residual {} beyond tolerance {}",
                    fmt_f64(tr.xi[0]),
                    fmt_f64(rep.worst_relative),
                    fmt_f64(rep.tolerance)
                ),
                point_witness(t, &tr.xi),
            ));
        }
        trace_json.push(json!({
            "xi": nums(&tr.xi),
            "bracket": num(tr.bracket),
            "eps": num(tr.eps),
            "steps": tr.t.len() - 1,
            "energy_initial": num(tr.energy[0]),
            "energy_final": num(*tr.energy.last().expect("trace is non-empty")),
            "energy_max": num(tr.energy.iter().copied().fold(0.0, f64::max)),
            "integral_k": num(tr.integral_k()),
            "commutator_bound_max": num(tr.commutator_bound.iter().copied().fold(0.0, f64::max)),
            "coercivity_min": num(tr.coercivity_min),
            "all_hyperbolic": tr.all_hyperbolic,
            "oracle_error": num(*err),
            "inequality": {
                "holds": rep.holds,
                "max_residual": num(rep.max_residual),
                "worst_relative": num(rep.worst_relative),
                "tolerance": num(rep.tolerance),
                "witness_t": rep.witness_t.map_or(Value::Null, num),
            },
        }));
        for (k, &t) in tr.t.iter().enumerate() {
            table.push(
                [
                    tr.xi[0],
                    t,
                    tr.energy[k],
                    tr.k_eps[k],
                    tr.term2[k],
                    tr.term3[k],
                    tr.energy_rate[k],
                    rep.residual[k],
                ]
                .map(fmt_f64)
                .to_vec(),
            );
        }
    }

    let sweep_xi = axis_xi(s.n(), cfg.solver.sweep_xi);
    let v0 = reduction::transform_initial_data(&s, &u0, &sweep_xi)?;
    let sweep = integral_k_sweep(
        &s,
        &sweep_xi,
        &v0,
        &scfg,
        &cfg.solver.eps_sweep,
        cfg.solver.k,
    )?;
    let slope_floor = sweep.expected * (1.0 + INTEGRAL_SLOPE_SLACK);
    if sweep.slope < slope_floor {
        out.violations.push(Violation::new(
            "integral_bound",
            format!(
                "integral of K grows like eps^{} , faster than eps^{}",
                fmt_f64(sweep.slope),
                fmt_f64(sweep.expected)
            ),
            point_witness(f64::NAN, &sweep_xi),
        ));
    }

    out.results.insert(
        "constants".into(),
        json!({
            "c2": num(fit.c2),
            "c3": num(fit.c3),
            "c2_fitted": num(fitted.c2),
            "slack": num(hyposym_core::solver::CONSTANT_SLACK),
            "note": "c2 is the quasi-symmetriser commutator constant along the traces; c3 and c2_fitted are sup envelopes over the traces",
        }),
    );
    out.results
        .insert("traces".into(), Value::Array(trace_json));
    out.results.insert(
        "integral_sweep".into(),
        json!({
            "xi": nums(&sweep.xi),
            "eps": nums(&sweep.eps),
            "integrals": nums(&sweep.integrals),
            "slope": num(sweep.slope),
            "expected": num(sweep.expected),
            "c1": nums(&sweep.c1),
            "c1_sup": num(sweep.c1.iter().copied().fold(0.0, f64::max)),
        }),
    );
    out.tables.push(table);

    if s.n() == 1 && !cfg.cauchy.snapshots.is_empty() {
        let u = sample_profile(cfg.cauchy.profile, s.m(), cfg.cauchy.points);
        let sol = solve_cauchy_1d(&s, &u, &cfg.cauchy.snapshots, &scfg)?;
        let mut header = vec!["t".to_string(), "x".to_string()];
        for i in 1..=s.m() {
            header.push(format!("re_u{i}"));
            header.push(format!("im_u{i}"));
        }
        let mut field = Table {
            name: "field".into(),
            header,
            rows: Vec::new(),
        };
        for (snap, &t) in sol.times.iter().enumerate() {
            for (j, &x) in sol.x.iter().enumerate() {
                let mut row = vec![fmt_f64(t), fmt_f64(x)];
                for comp in &sol.fields[snap] {
                    row.push(fmt_f64(comp[j].re));
                    row.push(fmt_f64(comp[j].im));
                }
                field.push(row);
            }
        }
        out.results.insert(
            "cauchy".into(),
            json!({ "points": cfg.cauchy.points, "profile": cfg.cauchy.profile.as_str(), "snapshots": nums(&sol.times) }),
        );
        out.tables.push(field);
    }
    Ok(out)
}

fn growth(cfg: &RunConfig) -> Result<Outcome> {
    let s = symbol(cfg)?;
    let scfg = solver_config(cfg);
    let g = &cfg.growth;
    let radii = logspace(g.xi_min, g.xi_max, g.xi_points);
    let samples: Vec<f64> = radii
        .par_iter()
        .map(|&r| log_growth_at(&s, &axis_xi(s.n(), r), &scfg))
        .collect::<Result<_>>()?;
    let rep = classify_growth(&radii, &samples)?;
    let mut out = Outcome::default();
    out.results.insert(
        "growth".into(),
        json!({
            "class": rep.class.as_str(),
            "kappa": num(rep.kappa),
            "poly_rss": num(rep.poly_rss),
            "sigma": num(rep.sigma),
            "gevrey_coeff": num(rep.gevrey_coeff),
            "gevrey_rss": num(rep.gevrey_rss),
            "aic_poly": num(rep.aic_poly),
            "aic_gevrey": num(rep.aic_gevrey),
            "rate": num(rep.rate),
            "horizon": num(s.horizon()),
            "thresholds": {
                "sigma_polynomial_below": num(hyposym_core::solver::SIGMA_POLY_CUTOFF),
                "sigma_exponential_from": num(hyposym_core::solver::SIGMA_EXP_CUTOFF),
                "model_selection": "aic = n ln(rss / n) + 2k; polynomial when its aic is not larger",
            },
        }),
    );
    let mut table = Table::new("samples", &["xi", "bracket", "log_growth"]);
    for ((r, b), lg) in rep.xi_norms.iter().zip(&rep.brackets).zip(&rep.log_growth) {
        table.push(vec![fmt_f64(*r), fmt_f64(*b), fmt_f64(*lg)]);
    }
    out.tables.push(table);
    Ok(out)
}

/// Names of the built-in systems, for help text.
pub fn example_names() -> String {
    catalog::NAMES.join(", ")
}
