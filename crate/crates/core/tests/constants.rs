mod common;

use common::{rel, unit_square};
use mixed_hardy::constants::*;
use mixed_hardy::scenario::*;
use mixed_hardy::sobolev::{enforce_d, norms, trace_sup, GridFunction};
use mixed_hardy::Error;
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use std::f64::consts::PI;

fn opts() -> SolverOptions {
    SolverOptions::default()
}

fn interval(n: usize) -> Built {
    Built::load("interval", Some(n)).unwrap()
}

fn hardy(b: &Built, p: f64) -> HardyReport {
    hardy_constant(&b.domain, &b.labeling, &b.dist, p, &opts()).unwrap()
}

fn poincare(b: &Built, p: f64) -> PoincareReport {
    poincare_constant(&b.domain, &b.labeling, p, &opts()).unwrap()
}

/// Top eigenvalue of `M x = c L x` from a dense symmetric eigensolve of
/// `M^{-1/2} L M^{-1/2}`.
fn dense_top(prob: &RayleighProblem) -> f64 {
    let l = prob.laplacian().to_dense();
    let m = prob.mass();
    let n = prob.len();
    let a = DMatrix::from_fn(n, n, |i, j| l[i][j] / (m[i] * m[j]).sqrt());
    let lambda_min = SymmetricEigen::new(a).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    1.0 / lambda_min
}

#[test]
fn dense_eigensolve_agrees_with_inverse_iteration() {
    let b = interval(128);
    let w: Vec<f64> = b.dist.values.iter().map(|d| d.powi(-2)).collect();
    let prob = RayleighProblem::new(&b.domain, &b.labeling.dirichlet, &w).unwrap();
    let dense = dense_top(&prob);
    let r = hardy(&b, 2.0);
    assert_eq!(r.method, Method::EigP2);
    assert!(rel(r.constant, dense) < 1e-8, "{} vs {dense}", r.constant);
}

#[test]
fn dense_eigensolve_agrees_on_the_square() {
    let b = unit_square(12, "kind = \"plane\"\naxis = 0\nvalue = 0.0");
    let w: Vec<f64> = b.dist.values.iter().map(|d| d.powi(-2)).collect();
    let prob = RayleighProblem::new(&b.domain, &b.labeling.dirichlet, &w).unwrap();
    assert!(rel(hardy(&b, 2.0).constant, dense_top(&prob)) < 1e-8);
    let ones = vec![1.0; b.domain.grid().len()];
    let prob = RayleighProblem::new(&b.domain, &b.labeling.dirichlet, &ones).unwrap();
    assert!(rel(poincare(&b, 2.0).constant, dense_top(&prob)) < 1e-8);
}

#[test]
fn one_dimensional_hardy_increases_towards_four() {
    let c: Vec<f64> = [256, 512, 1024, 2048, 4096].iter().map(|&n| hardy(&interval(n), 2.0).constant).collect();
    assert!(c.windows(2).all(|w| w[1] > w[0]), "{c:?}");
    assert!(c[4] <= 4.05);
    // the trial family x^a has quotient 1/a², so the constant is at least the
    // discrete quotient of an admissible member
    let b = interval(1024);
    let u = enforce_d(&b.domain, &b.labeling, &b.dist, &GridFunction::from_fn(&b.domain, |x| x[0].powf(0.75)), 1);
    let q = norms(&b.domain, &b.labeling.dirichlet, &u, 2.0, Some(&b.dist)).unwrap().hardy_quotient().unwrap();
    assert!(c[2] >= q);
}

#[test]
fn hardy_at_p_four() {
    for n in [128, 512] {
        let b = interval(n);
        let r = hardy(&b, 4.0);
        assert_eq!(r.method, Method::AscentP);
        assert!(r.constant <= 3.17, "{}", r.constant);
        assert!(r.residual < 1e-8);
        // x^0.8 is not admissible as sampled (its first cell is not pinned)
        let u = enforce_d(&b.domain, &b.labeling, &b.dist, &GridFunction::from_fn(&b.domain, |x| x[0].powf(0.8)), 1);
        let q = norms(&b.domain, &b.labeling.dirichlet, &u, 4.0, Some(&b.dist)).unwrap().hardy_quotient().unwrap();
        assert!(r.constant >= q, "n {n}: {} < {q}", r.constant);
    }
}

#[test]
fn ascent_at_p_two_reproduces_the_eigenvalue() {
    let b = unit_square(16, "kind = \"plane\"\naxis = 0\nvalue = 0.0");
    let w: Vec<f64> = b.dist.values.iter().map(|d| d.powi(-2)).collect();
    let prob = RayleighProblem::new(&b.domain, &b.labeling.dirichlet, &w).unwrap();
    let eig = inverse_iteration(&prob, None, &opts()).unwrap();
    let start: Vec<f64> = (0..prob.len()).map(|k| 1.0 + 0.1 * ((k * 7919) % 13) as f64).collect();
    let asc = ascent(&prob, 2.0, &start, &opts()).unwrap();
    assert!(rel(asc.value, eig.value) < 1e-6, "{} vs {}", asc.value, eig.value);
}

#[test]
fn interval_poincare_extrapolates_to_the_eigenvalue() {
    let spec = builtin("interval").unwrap();
    let t = refine_and_compare(&spec, &[128, 256, 512], Task::Poincare { p: 2.0 }, &opts()).unwrap();
    let exact = (2.0 / PI).powi(2);
    assert!(rel(t.extrapolant.unwrap(), exact) < 1e-3, "{:?}", t.extrapolant);
}

#[test]
fn square_poincare_with_full_dirichlet() {
    let b = unit_square(128, "kind = \"all\"");
    let r = poincare(&b, 2.0);
    let exact = 1.0 / (2.0 * PI * PI);
    assert!(rel(r.constant, exact) < 0.02, "{}", r.constant);
    assert!(!r.infinite);
}

#[test]
fn empty_dirichlet_part() {
    let b = unit_square(8, "kind = \"none\"");
    let r = poincare(&b, 2.0);
    assert!(r.infinite && r.constant.is_infinite());
    assert!(matches!(hardy_constant(&b.domain, &b.labeling, &b.dist, 2.0, &opts()), Err(Error::DEmpty)));
}

#[test]
fn exponent_outside_range_is_rejected() {
    let b = interval(16);
    for p in [1.0, 0.5, f64::INFINITY] {
        assert!(matches!(hardy_constant(&b.domain, &b.labeling, &b.dist, p, &opts()), Err(Error::InvalidInput(_))));
    }
}

#[test]
fn poincare_is_bounded_by_hardy() {
    // dist_D ≤ sup dist_D gives ‖u‖_p^p ≤ (sup dist)^p ‖u/dist‖_p^p
    for name in ["interval", "square-edge", "annulus-mixed", "slit-square"] {
        let b = Built::load(name, Some(if name == "interval" { 128 } else { 16 })).unwrap();
        let sup = b.domain.inside_cells().into_iter().map(|i| b.dist.get(i)).fold(0.0, f64::max);
        for p in [2.0, 3.0] {
            let cp = poincare(&b, p).constant;
            let ch = hardy(&b, p).constant;
            assert!(cp <= sup.powf(p) * ch * (1.0 + 1e-6), "{name} p {p}: {cp} vs {ch}");
        }
    }
}

#[test]
fn witnesses_are_admissible_and_reproduce_the_constant() {
    for name in ["interval", "square-edge", "annulus-mixed", "cube-crack"] {
        let b = Built::load(name, Some(if name == "interval" { 256 } else { 8 })).unwrap();
        let g = b.domain.grid();
        for p in [2.0, 3.0] {
            let h = hardy(&b, p);
            assert_eq!(trace_sup(g, &h.witness.values, &b.labeling.dirichlet), 0.0);
            let q = norms(&b.domain, &b.labeling.dirichlet, &h.witness, p, Some(&b.dist)).unwrap().hardy_quotient().unwrap();
            assert!(rel(q, h.constant) < 1e-8, "{name} p {p}: {q} vs {}", h.constant);
            let pc = poincare(&b, p);
            assert_eq!(trace_sup(g, &pc.witness.values, &b.labeling.dirichlet), 0.0);
            let n = norms(&b.domain, &b.labeling.dirichlet, &pc.witness, p, None).unwrap();
            assert!(rel(n.lp_pow / n.grad_pow, pc.constant) < 1e-8);
        }
    }
}

#[test]
fn dilation_covariance() {
    for name in ["square-edge", "annulus-mixed"] {
        let b = Built::load(name, Some(16)).unwrap();
        let big = b.dilate(2.0);
        for p in [2.0, 3.0] {
            let w = hardy(&b, p).witness;
            let q1 = norms(&b.domain, &b.labeling.dirichlet, &w, p, Some(&b.dist)).unwrap().hardy_quotient().unwrap();
            let q2 = norms(&big.domain, &big.labeling.dirichlet, &w, p, Some(&big.dist)).unwrap().hardy_quotient().unwrap();
            assert!(rel(q2, q1) < 1e-12);
            let c1 = poincare(&b, p).constant;
            let c2 = poincare(&big, p).constant;
            assert!(rel(c2, 2f64.powf(p) * c1) < 0.01, "{name} p {p}");
        }
    }
}

#[test]
fn richardson_on_geometric_sequences() {
    // v_k = 1 − 2^{-k}: exact limit with ratio 1/2
    let (x, r) = richardson(&[0.5, 0.75, 0.875]);
    assert!((x.unwrap() - 1.0).abs() < 1e-14);
    assert!((r.unwrap() - 0.5).abs() < 1e-14);
    assert_eq!(richardson(&[1.0]), (None, None));
    assert!(matches!(
        refine_and_compare(&builtin("interval").unwrap(), &[64], Task::Hardy { p: 2.0 }, &opts()),
        Err(Error::InvalidInput(_))
    ));
}

#[test]
fn convergence_table_csv() {
    let t = refine_and_compare(&builtin("interval").unwrap(), &[32, 64, 128], Task::Hardy { p: 2.0 }, &opts()).unwrap();
    assert!(t.increasing && !t.decreasing);
    let csv = t.to_csv();
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.starts_with("resolution,value,iterations\n32,"));
}

#[test]
fn convex_full_dirichlet_chain_is_direct() {
    let b = unit_square(16, "kind = \"all\"");
    let r = hardy_via_bullet(&b, 2.0, &ChainOptions { battery: 4, ..Default::default() }).unwrap();
    assert!(r.dist_monotone);
    for t in &r.terms {
        assert!(rel(t.chained_quotient, t.direct_quotient) < 1e-12);
        assert_eq!(t.weighted_d, t.weighted_bullet);
    }
}

#[test]
fn chain_distance_is_monotone_on_builtins() {
    for (name, _) in catalog() {
        let b = Built::load(&name, None).unwrap();
        if b.labeling.is_empty() {
            continue;
        }
        let r = hardy_via_bullet(&b, 2.0, &ChainOptions { battery: 3, ..Default::default() }).unwrap();
        assert!(r.dist_monotone, "{name}: {} violations", r.dist_violations);
        assert!(r.bullet_check.pass);
        for t in &r.terms {
            assert!(t.weighted_d <= t.weighted_bullet * (1.0 + 1e-12));
            assert_eq!(t.boundary_trace, 0.0);
        }
    }
}

#[test]
fn localized_needs_v_away_from_d() {
    let b = Built::load("cube-triangle", Some(8)).unwrap();
    let loc = b.spec.localize.clone().unwrap();
    let touching = vec![Region { min: vec![-0.5, -0.5, -0.5], max: vec![1.5, 1.5, 1.5] }];
    match localized_hardy(&b, &loc.u, &touching, 2.0, loc.margin, &opts()) {
        Err(Error::ConditionFailed(msg)) => assert!(!msg.is_empty()),
        other => panic!("expected ConditionFailed, got {other:?}"),
    }
    assert!(matches!(localized_from_spec(&Built::load("interval", Some(16)).unwrap(), 2.0, &opts()), Err(Error::Scenario(_))));
}

#[test]
fn degenerate_localization_is_the_direct_constant() {
    let b = Built::load("square-edge", Some(16)).unwrap();
    let all = vec![Region { min: vec![-1.0, -1.0], max: vec![2.0, 2.0] }];
    let r = localized_hardy(&b, &all, &[], 2.0, None, &opts()).unwrap();
    let direct = hardy(&b, 2.0).constant;
    assert!(r.checks.all());
    assert_eq!(r.lipschitz_eta, 0.0);
    assert!(rel(r.c_total, direct) < 0.05, "{} vs {direct}", r.c_total);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn hardy_quotient_is_scale_invariant(seed in 0u64..1000, s in 0.25f64..8.0) {
        let b = match Built::new(&random_scenario(seed)) { Ok(b) => b, Err(_) => return Ok(()) };
        prop_assume!(!b.labeling.is_empty());
        let u = test_battery(&b, 1, seed, None).remove(0).0;
        let q1 = norms(&b.domain, &b.labeling.dirichlet, &u, 2.0, Some(&b.dist)).unwrap().hardy_quotient();
        let big = b.dilate(s);
        let q2 = norms(&big.domain, &big.labeling.dirichlet, &u, 2.0, Some(&big.dist)).unwrap().hardy_quotient();
        if let (Some(a), Some(c)) = (q1, q2) {
            if a.is_finite() {
                prop_assert!(rel(c, a) < 1e-12);
            }
        }
    }
}
