//! Cross-validation between the closed forms, the finite-element oracle, and
//! brute-force quadrature.

use hodgelab::complex::{solve_hodge_laplace_mixed, ChainVector};
use hodgelab::estimators::{self, ErrorNorm};
use hodgelab::quadrature;
use hodgelab::rods::analytic::{
    embed, evaluate, solve_cech_analytic, solve_simplicial_matched, Field,
};
use hodgelab::rods::fem::{build_discrete_rods, solve_primal};
use hodgelab::rods::RodParams;

fn reference() -> RodParams {
    RodParams::new(0.2, 1.0, 1.0, 1.0).unwrap()
}

#[test]
fn fem_matches_closed_form_at_fine_mesh() {
    let p = reference();
    let cech = solve_cech_analytic(&p);
    let fem = solve_primal(&p, 1e-3).unwrap();
    let mut worst: f64 = 0.0;
    for (i, &x) in fem.meshes.mesh0.points().iter().enumerate() {
        worst = worst.max((fem.u0[i] - cech.u0(x)).abs());
    }
    for (i, &x) in fem.meshes.mesh1.points().iter().enumerate() {
        worst = worst.max((fem.u1[i] - cech.u1(x)).abs());
    }
    assert!(worst <= 1e-5, "max nodal error {worst:.3e} exceeds 1e-5");
}

#[test]
fn fem_converges_at_second_order() {
    let p = reference();
    let cech = solve_cech_analytic(&p);
    let err_at = |h: f64| -> f64 {
        let fem = solve_primal(&p, h).unwrap();
        let mut worst: f64 = 0.0;
        for (i, &x) in fem.meshes.mesh0.points().iter().enumerate() {
            worst = worst.max((fem.u0[i] - cech.u0(x)).abs());
        }
        for (i, &x) in fem.meshes.mesh1.points().iter().enumerate() {
            worst = worst.max((fem.u1[i] - cech.u1(x)).abs());
        }
        worst
    };
    let (e1, e2) = (err_at(4e-3), err_at(2e-3));
    let ratio = e1 / e2;
    assert!(
        (ratio - 4.0).abs() <= 0.4,
        "halving h gave ratio {ratio:.3} (expected 4 ± 10%)"
    );
}

#[test]
fn primal_and_mixed_solver_agree() {
    // two solver paths, one answer: the banded primal solve and the dense
    // mixed saddle solve on the same discrete complex
    let p = reference();
    let h = 1.0 / 32.0;
    let rods = build_discrete_rods(&p, h).unwrap();
    let fem = solve_primal(&p, h).unwrap();
    let (_, f_chain) = rods.load();
    let mixed = solve_hodge_laplace_mixed(&rods.total, 0, &f_chain).unwrap();
    let (v0, v1) = rods.split_nodal(&mixed.v);
    let scale = fem.u0.amax().max(fem.u1.amax());
    assert!(
        (&v0 - &fem.u0).amax() <= 1e-9 * scale.max(1.0),
        "rod-0 mismatch {:.3e}",
        (&v0 - &fem.u0).amax()
    );
    assert!((&v1 - &fem.u1).amax() <= 1e-9 * scale.max(1.0));
}

#[test]
fn embedded_limit_is_first_order_in_overlap_width() {
    // pointwise distance between the two descriptions at x = -1/2 shrinks
    // like the overlap width
    let mut errs = Vec::new();
    let mut epss = Vec::new();
    for k in 2..7 {
        let eps = 0.4_f64.powi(1) / 2.0_f64.powi(k); // 0.1, 0.05, ...
        let p = RodParams::new(eps, 1.0, 1.0, 1.0).unwrap();
        let cech = solve_cech_analytic(&p);
        let emb = embed(&solve_simplicial_matched(&p), &p);
        let d = (evaluate(&cech, Field::U0, -0.5).unwrap()
            - evaluate(&emb, Field::U0, -0.5).unwrap())
        .abs();
        errs.push(d);
        epss.push(eps);
    }
    for i in 0..errs.len() - 1 {
        let slope = (errs[i] / errs[i + 1]).ln() / (epss[i] / epss[i + 1]).ln();
        assert!(
            (slope - 1.0).abs() <= 0.1,
            "pointwise slope {slope:.3} departs from 1"
        );
    }
}

#[test]
fn error_report_matches_brute_force_quadrature() {
    // independent oracle: dense composite quadrature on 10^4 subintervals
    let p = reference();
    let cech = solve_cech_analytic(&p);
    let emb = embed(&solve_simplicial_matched(&p), &p);
    let report = estimators::compute_errors(&cech, &emb, &p, ErrorNorm::WeightedL2);

    let n = 10_000;
    let brute = |lo: f64, hi: f64, f: &dyn Fn(f64) -> f64| -> f64 {
        // nudge the limits inward so piecewise integrands are never sampled
        // exactly on a branch point
        let (lo, hi) = (lo + 1e-9, hi - 1e-9);
        let mut acc = 0.0;
        for i in 0..n {
            let a = lo + (hi - lo) * i as f64 / n as f64;
            let b = lo + (hi - lo) * (i + 1) as f64 / n as f64;
            // Simpson on each subinterval
            let m = 0.5 * (a + b);
            acc += (b - a) / 6.0 * (f(a).powi(2) + 4.0 * f(m).powi(2) + f(b).powi(2));
        }
        acc
    };
    let e = p.epsilon;
    let du0 = |x: f64| cech.u0(x) - emb.u0(x);
    let du1 = |x: f64| cech.u1(x) - emb.u1(x);
    let eu_outer = (brute(-1.0, -e, &du0) + brute(e, 1.0, &du1)).sqrt();
    assert!(
        (report.e_u - eu_outer).abs() <= 1e-7 * eu_outer,
        "e_u {} vs brute {}",
        report.e_u,
        eu_outer
    );

    let ds0 = |x: f64| cech.sigma0(x) - emb.sigma0(x);
    let ds1 = |x: f64| cech.sigma1(x) - emb.sigma1(x);
    let ds01 = |x: f64| cech.sigma01(x) - emb.sigma01(x);
    let es = (p.w * (brute(-1.0, -e, &ds0) + brute(-e, e, &ds0))
        + p.w * (brute(-e, e, &ds1) + brute(e, 1.0, &ds1))
        + p.w01 / e * brute(-e, e, &ds01))
    .sqrt();
    assert!(
        (report.e_sigma - es).abs() <= 1e-7 * es,
        "e_sigma {} vs brute {}",
        report.e_sigma,
        es
    );
}

#[test]
fn displacement_error_is_orthogonal_to_constants() {
    let p = reference();
    let cech = solve_cech_analytic(&p);
    let emb = embed(&solve_simplicial_matched(&p), &p);
    let report = estimators::compute_errors(&cech, &emb, &p, ErrorNorm::WeightedL2);
    assert!(
        report.u_parts.harmonic <= 1e-10 * report.e_u_full.max(1.0),
        "harmonic component {:.3e} not negligible",
        report.u_parts.harmonic
    );
    // Pythagoras across the parts
    let sum_sq = report.u_parts.exact.powi(2)
        + report.u_parts.harmonic.powi(2)
        + report.u_parts.coexact.powi(2);
    assert!((sum_sq - report.e_u_full.powi(2)).abs() <= 1e-9 * report.e_u_full.powi(2));
}

#[test]
fn stress_error_is_the_differential_of_the_displacement_error() {
    // e_sigma = D e_u pointwise: derivative pieces and the overlap jump
    let p = reference();
    let cech = solve_cech_analytic(&p);
    let emb = embed(&solve_simplicial_matched(&p), &p);
    let h = 1e-6;
    for x in [-0.8, -0.45, 0.5, 0.9] {
        if x < p.epsilon {
            let du = (cech.u0(x + h) - emb.u0(x + h) - cech.u0(x - h) + emb.u0(x - h))
                / (2.0 * h);
            let ds = cech.sigma0(x) - emb.sigma0(x);
            assert!((du - ds).abs() < 1e-6, "at {x}: {du} vs {ds}");
        }
    }
    for x in [-0.1, 0.0, 0.15] {
        let jump = (cech.u1(x) - emb.u1(x)) - (cech.u0(x) - emb.u0(x));
        let ds01 = cech.sigma01(x) - emb.sigma01(x);
        assert!((jump - ds01).abs() < 1e-12);
    }
}

#[test]
fn reference_error_values() {
    // frozen values, cross-checked against an independent quadrature oracle
    let p = reference();
    let cech = solve_cech_analytic(&p);
    let emb = embed(&solve_simplicial_matched(&p), &p);
    let r = estimators::a_posteriori(&cech, &emb, &p, ErrorNorm::WeightedL2);
    assert!((r.e_u - 7.311065e-2).abs() < 1e-7, "e_u = {}", r.e_u);
    assert!((r.e_u_full - 8.460163e-2).abs() < 1e-7, "e_u_full = {}", r.e_u_full);
    assert!((r.e_sigma - 4.369255e-1).abs() < 1e-6, "e_sigma = {}", r.e_sigma);
    assert!((r.efficiency_u - 1.9834).abs() < 1e-3, "eff_u = {}", r.efficiency_u);
    assert!((r.efficiency_sigma - 1.3823).abs() < 1e-3, "eff_s = {}", r.efficiency_sigma);
    assert!(r.reliable_u && r.reliable_sigma);
}

#[test]
fn zero_mean_of_fem_solution() {
    let p = reference();
    let fem = solve_primal(&p, 0.01).unwrap();
    let mut integral = 0.0;
    for e in 0..fem.meshes.mesh0.n_elements() {
        integral += fem.meshes.mesh0.element_len(e) * (fem.u0[e] + fem.u0[e + 1]) / 2.0;
    }
    for e in 0..fem.meshes.mesh1.n_elements() {
        integral += fem.meshes.mesh1.element_len(e) * (fem.u1[e] + fem.u1[e + 1]) / 2.0;
    }
    assert!(integral.abs() < 1e-12);
}

#[test]
fn quadrature_self_check() {
    // the piecewise rule integrates the overlap profile of the coupling
    // stress against its closed-form antiderivative
    let p = reference();
    let cech = solve_cech_analytic(&p);
    let mu = p.mu();
    let c3 = cech.c3;
    let exact = |x: f64| 4.0 * c3 * c3 * (0.5 * x + (2.0 * mu * x).sinh() / (4.0 * mu));
    let direct = quadrature::l2_sq(|x| cech.sigma01(x), -p.epsilon, p.epsilon, &[]);
    let anti = exact(p.epsilon) - exact(-p.epsilon);
    assert!((direct - anti).abs() <= 1e-13 * anti.abs());
}
