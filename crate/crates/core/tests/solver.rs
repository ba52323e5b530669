use hyposym_core::catalog;
use hyposym_core::conditions::logspace;
use hyposym_core::linalg::{CVec, C64};
use hyposym_core::reduction::{reduction_residual, transform_initial_data};
use hyposym_core::solver::*;
use hyposym_core::{Poly, SystemSymbol};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn cfg_step(h: f64) -> SolverConfig {
    SolverConfig {
        step: Some(h),
        ..SolverConfig::default()
    }
}

#[test]
fn wave_symbol_matches_rotation_closed_form() {
    // exp(i t xi J) with J^2 = I is cos(t xi) I + i sin(t xi) J
    let s = catalog::m2_wave();
    let xi = 7.0;
    let u0 = [c(1.0, 0.5), c(-0.3, 2.0)];
    let tr = direct_integrate(&s, &[xi], &u0, &cfg_step(1e-3)).unwrap();
    for (t, u) in tr.t.iter().zip(&tr.states).step_by(97) {
        let (co, si) = ((t * xi).cos(), (t * xi).sin());
        let e0 = u0[0] * co + c(0.0, si) * u0[1];
        let e1 = u0[1] * co + c(0.0, si) * u0[0];
        assert!((u[0] - e0).norm() < 1e-9 && (u[1] - e1).norm() < 1e-9);
    }
}

#[test]
fn control_symbol_matches_hyperbolic_functions() {
    // (iJ)^2 = I for J = [[0, 1], [-1, 0]], so exp(t xi iJ) = cosh I + sinh iJ
    let s = catalog::m2_nonhyp_control();
    let xi = 4.0;
    let u0 = [c(1.0, 0.0), c(0.0, 0.0)];
    let tr = direct_integrate(&s, &[xi], &u0, &cfg_step(1e-3)).unwrap();
    let t = *tr.t.last().unwrap();
    let u = tr.states.last().unwrap();
    let (ch, sh) = ((t * xi).cosh(), (t * xi).sinh());
    assert!((u[0] - c(ch, 0.0)).norm() < 1e-8 * ch);
    assert!((u[1] - c(0.0, -sh)).norm() < 1e-8 * ch);
}

#[test]
fn zero_symbol_and_zero_data_are_fixed_points() {
    let z = SystemSymbol::new(2, 1, vec![vec![Poly::zero(); 4]], 1.0).unwrap();
    let u0 = [c(0.2, 0.1), c(-1.0, 0.0)];
    let tr = direct_integrate(&z, &[3.0], &u0, &cfg_step(0.01)).unwrap();
    assert!(tr.states.iter().all(|u| u.as_slice() == u0));

    let s = catalog::m2_glaeser();
    let tr = reduced_integrate(&s, &[10.0], &CVec::zeros(4), &SolverConfig::default()).unwrap();
    assert!(tr.v.iter().all(|v| v.norm() == 0.0));
    assert!(tr.energy.iter().all(|&e| e == 0.0));
    let rep = energy_inequality_check(&tr, &fit_constants(std::slice::from_ref(&tr)));
    assert!(rep.holds);
    assert!(rep.residual.iter().all(|&r| r == 0.0));
}

#[test]
fn reduced_solution_converges_to_lifted_direct_solution() {
    for s in [catalog::m2_glaeser(), catalog::m3_tracezero()] {
        let u0: Vec<C64> = (0..s.m()).map(|i| c(1.0 + i as f64, 0.5)).collect();
        let errs: Vec<f64> = [4e-3, 2e-3, 1e-3]
            .iter()
            .map(|&h| oracle_error(&s, &[9.9], &u0, &cfg_step(h)).unwrap())
            .collect();
        let order = (errs[0] / errs[2]).log2() / 2.0;
        assert!(order >= 3.5, "m={} order {order} {errs:?}", s.m());
        assert!(errs[2] <= 1e-6);

        let res: Vec<f64> = [4e-3, 2e-3, 1e-3]
            .iter()
            .map(|&h| {
                let d = direct_integrate(&s, &[9.9], &u0, &cfg_step(h)).unwrap();
                reduction_residual(&s, &[9.9], &d.t, &d.states).unwrap()
            })
            .collect();
        assert!((res[0] / res[2]).log2() / 2.0 >= 3.5);
        assert!(res[2] <= 1e-6);
    }
}

#[test]
fn constant_hyperbolic_energy_stays_bounded() {
    let s = catalog::m2_wave();
    let xi = [30.0];
    let v0 = transform_initial_data(&s, &[c(1.0, 0.0), c(0.5, -0.5)], &xi).unwrap();
    let tr = reduced_integrate(&s, &xi, &v0, &SolverConfig::default()).unwrap();
    assert!(tr.k_eps.iter().all(|&k| k.abs() < 1e-9));
    assert!(tr.term3.iter().all(|&x| x == 0.0));
    let c2 = fit_constants(std::slice::from_ref(&tr)).c2;
    let kappa = (c2 * tr.eps * tr.bracket * 1.0).exp();
    // slack for the RK4 amplitude error at h <xi> = 0.05
    for &e in &tr.energy {
        let r = e / tr.energy[0];
        assert!(r <= kappa * (1.0 + 1e-6) && r >= 1.0 / kappa / (1.0 + 1e-6));
    }
    assert!(energy_inequality_check(&tr, &fit_constants(std::slice::from_ref(&tr))).holds);
}

#[test]
fn glaeser_energy_inequality_and_coercivity() {
    let s = catalog::m2_glaeser();
    let cfg = SolverConfig::default();
    let traces: Vec<EnergyTrace> = [10.0, 100.0, 1000.0]
        .iter()
        .map(|&x| {
            let v0 = transform_initial_data(&s, &[c(1.0, 0.0), c(0.0, 1.0)], &[x]).unwrap();
            reduced_integrate(&s, &[x], &v0, &cfg).unwrap()
        })
        .collect();
    let fit = fit_constants(&traces);
    assert!(fit.c2.is_finite() && fit.c3.is_finite());
    for tr in &traces {
        assert!(tr.all_hyperbolic);
        assert!(tr.energy.iter().all(|&e| e >= 0.0));
        assert!(tr.coercivity_min >= 0.0);
        let rep = energy_inequality_check(tr, &fit);
        assert!(rep.holds, "xi={:?} max {}", tr.xi, rep.max_residual);
    }
}

#[test]
fn control_energy_inequality_fails_with_glaeser_constants() {
    let g = catalog::m2_glaeser();
    let s = catalog::m2_nonhyp_control();
    let cfg = SolverConfig::default();
    let x = [10.0];
    let v0g = transform_initial_data(&g, &[c(1.0, 0.0), c(0.0, 1.0)], &x).unwrap();
    let fit = fit_constants(&[reduced_integrate(&g, &x, &v0g, &cfg).unwrap()]);
    let v0 = transform_initial_data(&s, &[c(1.0, 0.0), c(0.0, 0.0)], &x).unwrap();
    let tr = reduced_integrate(&s, &x, &v0, &cfg).unwrap();
    assert!(!tr.all_hyperbolic);
    let rep = energy_inequality_check(&tr, &fit);
    assert!(!rep.holds);
    assert!(rep.witness_t.is_some());
}

#[test]
fn growth_classification_on_examples() {
    let cfg = SolverConfig::default();
    let wave = growth_fit(&catalog::m2_wave(), &logspace(10.0, 1e3, 7), &cfg).unwrap();
    assert_eq!(wave.class, GrowthClass::Polynomial);
    assert!(wave.kappa.abs() <= 0.1);

    let ctrl = growth_fit(
        &catalog::m2_nonhyp_control(),
        &logspace(1.0, 100.0, 9),
        &cfg,
    )
    .unwrap();
    assert_eq!(ctrl.class, GrowthClass::Exponential);
    assert!((ctrl.rate - 1.0).abs() < 0.1);

    assert!(growth_fit(&catalog::m2_wave(), &logspace(1.0, 50.0, 7), &cfg).is_err());
}

#[test]
fn step_guard_is_enforced() {
    let s = catalog::m2_glaeser();
    let err =
        direct_integrate(&s, &[1e3], &[c(1.0, 0.0), c(0.0, 0.0)], &cfg_step(1e-3)).unwrap_err();
    assert!(matches!(err, hyposym_core::Error::StepGuard { .. }));
}

#[test]
fn structural_constants_bound_hyperbolic_traces_only() {
    let cfg = SolverConfig::default();
    let g = catalog::m2_glaeser();
    let traces: Vec<EnergyTrace> = [10.0, 100.0]
        .iter()
        .map(|&x| {
            let v0 = transform_initial_data(&g, &[c(1.0, 0.0), c(0.0, 1.0)], &[x]).unwrap();
            reduced_integrate(&g, &[x], &v0, &cfg).unwrap()
        })
        .collect();
    let fitted = fit_constants(&traces);
    let structural = structural_constants(&traces);
    assert!(structural.c2 >= fitted.c2 * (1.0 - 1e-9));
    assert_eq!(structural.c3, fitted.c3);
    // the commutator bound holds pointwise, not just in the sup
    for tr in &traces {
        for k in 0..tr.t.len() {
            assert!(
                tr.term2[k]
                    <= tr.commutator_bound[k] * tr.eps * tr.bracket * tr.energy[k] * (1.0 + 1e-8)
                        + 1e-12
            );
        }
        assert!(energy_inequality_check(tr, &structural).holds);
    }

    let s = catalog::m2_nonhyp_control();
    let traces: Vec<EnergyTrace> = [5.0, 10.0]
        .iter()
        .map(|&x| {
            let v0 = transform_initial_data(&s, &[c(1.0, 0.0), c(0.0, 0.0)], &[x]).unwrap();
            reduced_integrate(&s, &[x], &v0, &cfg).unwrap()
        })
        .collect();
    let structural = structural_constants(&traces);
    assert!(traces
        .iter()
        .any(|tr| !energy_inequality_check(tr, &structural).holds));
}
