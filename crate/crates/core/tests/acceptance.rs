//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use mixed_hardy::constants::*;
use mixed_hardy::measure::*;
use mixed_hardy::scenario::*;
use mixed_hardy::sobolev::*;
use mixed_hardy::topology::*;
use mixed_hardy::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::Instant;

type Outcome = (bool, String);

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn opts() -> SolverOptions {
    SolverOptions::default()
}

fn load(name: &str, n: Option<usize>) -> Built {
    Built::load(name, n).expect("built-in scenario")
}

fn hardy(b: &Built, p: f64) -> HardyReport {
    hardy_constant(&b.domain, &b.labeling, &b.dist, p, &opts()).expect("hardy solve")
}

fn quotient(b: &Built, u: &GridFunction, p: f64) -> f64 {
    norms(&b.domain, &b.labeling.dirichlet, u, p, Some(&b.dist)).unwrap().hardy_quotient().unwrap()
}

fn dense_top(prob: &RayleighProblem) -> f64 {
    let l = prob.laplacian().to_dense();
    let m = prob.mass();
    let n = prob.len();
    let a = nalgebra::DMatrix::from_fn(n, n, |i, j| l[i][j] / (m[i] * m[j]).sqrt());
    1.0 / nalgebra::SymmetricEigen::new(a).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

fn interval_sharpness() -> Outcome {
    let t0 = Instant::now();
    let b = load("interval", Some(128));
    let w: Vec<f64> = b.dist.values.iter().map(|d| d.powi(-2)).collect();
    let dense = dense_top(&RayleighProblem::new(&b.domain, &b.labeling.dirichlet, &w).unwrap());
    let it = hardy(&b, 2.0).constant;
    let agree = rel(it, dense);
    let c: Vec<f64> = [256, 512, 1024, 2048, 4096].iter().map(|&n| hardy(&load("interval", Some(n)), 2.0).constant).collect();
    let increasing = c.windows(2).all(|w| w[1] > w[0]);
    let secs = t0.elapsed().as_secs_f64();
    let ok = agree < 1e-8 && increasing && c[4] <= 4.05 && secs < 30.0;
    (ok, format!("dense/iterative rel {agree:.1e}; c(n) = {c:.4?}; {secs:.1} s"))
}

fn interval_general_p() -> Outcome {
    let t0 = Instant::now();
    let b = load("interval", Some(512));
    let r = hardy(&b, 4.0);
    let trial = enforce_d(&b.domain, &b.labeling, &b.dist, &GridFunction::from_fn(&b.domain, |x| x[0].powf(0.8)), 1);
    let q = quotient(&b, &trial, 4.0);
    let secs = t0.elapsed().as_secs_f64();
    let ok = r.constant <= 3.17 && r.constant >= q && r.method == Method::AscentP && r.residual < 1e-8 && secs < 60.0;
    (ok, format!("c4 = {:.5}, trial x^0.8 quotient {q:.5}, ascent residual {:.1e}; {secs:.1} s", r.constant, r.residual))
}

fn poincare_quantitative() -> Outcome {
    let t0 = Instant::now();
    let table = refine_and_compare(&builtin("interval").unwrap(), &[128, 256, 512], Task::Poincare { p: 2.0 }, &opts()).unwrap();
    let x = table.extrapolant.unwrap();
    let e1 = rel(x, (2.0 / PI).powi(2));
    let sq = Built::new(
        &ScenarioSpec::from_toml(
            "name = \"sq\"\ndimension = 2\nresolution = 128\n[csg]\nkind = \"box\"\nmin = [0.0, 0.0]\nmax = [1.0, 1.0]\n[dirichlet]\nkind = \"all\"\n",
        )
        .unwrap(),
    )
    .unwrap();
    let c = poincare_constant(&sq.domain, &sq.labeling, 2.0, &opts()).unwrap().constant;
    let e2 = rel(c, 1.0 / (2.0 * PI * PI));
    let secs = t0.elapsed().as_secs_f64();
    let ok = e1 < 1e-3 && e2 < 0.02 && secs < 30.0;
    (ok, format!("interval extrapolant {x:.7} (rel {e1:.1e}); square {c:.6} (rel {e2:.2e}); {secs:.1} s"))
}

fn annulus_bullet() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for n in [32, 64] {
        let b = load("annulus-mixed", Some(n));
        let bullet = build_bullet(&b.domain, &b.labeling);
        let check = verify_bullet(&bullet, &b.domain, &b.labeling);
        let enclosed = bullet.count(HoleClass::DirichletEnclosed);
        let attached = bullet.count(HoleClass::Attached);
        ok &= enclosed == 1
            && attached == 1
            && bullet.boundary_type == BoundaryType::DAndBox
            && check.pass
            && check.discrepancies.is_empty()
            && check.box_discrepancies == 0;
        notes.push(format!("n={n}: {enclosed} enclosed, {attached} attached, {}, {} discrepancies", bullet.boundary_type, check.discrepancies.len()));
    }
    (ok, notes.join("; "))
}

fn dichotomy() -> Outcome {
    let (mut built, mut seed, mut bad) = (0, 0u64, Vec::new());
    let (mut d, mut db) = (0, 0);
    while built < 100 {
        let s = seed;
        seed += 1;
        let Ok(b) = Built::new(&random_scenario(s)) else { continue };
        built += 1;
        let once = build_bullet(&b.domain, &b.labeling);
        let check = verify_bullet(&once, &b.domain, &b.labeling);
        let lab = BoundaryLabeling::from_faces(&once.domain, b.labeling.dirichlet.clone());
        let twice = build_bullet(&once.domain, &lab);
        let idempotent = twice.domain.inside() == once.domain.inside() && twice.domain.blocked() == once.domain.blocked();
        match check.boundary_type {
            BoundaryType::D => d += 1,
            BoundaryType::DAndBox => db += 1,
        }
        if !(check.pass && check.discrepancies.is_empty() && idempotent && check.scan_order_independent) {
            bad.push(s);
        }
    }
    (bad.is_empty(), format!("100 scenarios from seeds 0..{seed}: {d} of type D, {db} of type D ∪ ∂B; failing seeds {bad:?}"))
}

fn crack_isometry() -> Outcome {
    let b = load("slit-square", None);
    let sigma = b.domain.blocked().clone();
    let star = build_star(&b.domain, &sigma).unwrap();
    let g = b.domain.grid();
    let to_slit = distance_to_faces(g, &sigma);
    let mut worst: f64 = 0.0;
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..g.len()).map(|i| if to_slit.get(i) > 2.0 * g.h { rng.gen_range(-1.0..1.0) } else { 0.0 }).collect();
        let u = GridFunction::from_values(&b.domain, values);
        for p in [1.5, 2.0, 3.0] {
            let Ok(ext) = extend_by_zero(&b.domain, &sigma, &u, &star, p) else { return (false, format!("seed {seed} rejected")) };
            let before = norms(&b.domain, &sigma, &u, p, None).unwrap().sobolev();
            let after = norms(&star.domain, &star.e_star, &ext, p, None).unwrap().sobolev();
            worst = worst.max(rel(after, before));
        }
    }
    let touching = GridFunction::from_fn(&b.domain, |_| 1.0);
    let rejected = matches!(extend_by_zero(&b.domain, &sigma, &touching, &star, 2.0), Err(Error::NonzeroNearE { .. }));
    (worst <= 1e-12 && rejected, format!("worst relative norm change {worst:.1e}; touching function rejected: {rejected}"))
}

fn glued_extension() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, levels) in [("annulus-mixed", [32, 64]), ("cube-triangle", [16, 32])] {
        let mut ratios = Vec::new();
        for n in levels {
            let b = load(name, Some(n));
            let g = b.domain.grid();
            let pou = extension_partition(&b.domain, &b.labeling, &b.spec.patches, b.spec.margin.unwrap()).unwrap();
            let mut row = Vec::new();
            for (u, ..) in test_battery(&b, 3, 0, None) {
                let e = glue_extension(&b.domain, &b.labeling, &u, &pou, &b.spec.patches, 2.0).unwrap();
                let identity = b.domain.inside_cells().into_iter().all(|i| e.values[i] == u.values[i]);
                let bound = 10.0 * g.h * gradient(&b.domain, &b.labeling.dirichlet, &u).max_abs();
                ok &= identity && trace_sup(g, &e.values, &b.labeling.dirichlet) <= bound;
                row.push(e.ratio);
            }
            ratios.push(row);
        }
        let drift = ratios[0].iter().zip(&ratios[1]).map(|(a, b)| rel(*b, *a)).fold(0.0, f64::max);
        ok &= drift <= 0.1;
        notes.push(format!("{name} ratios {:.4?} -> {:.4?} (drift {:.1}%)", ratios[0], ratios[1], 100.0 * drift));
    }
    (ok, notes.join("; "))
}

fn measure_suite() -> Outcome {
    let seg = PointCloud::segment(2, [0.0; 3], [1.0, 0.0, 0.0], 0.005);
    let circle = PointCloud::circle([0.0; 3], 1.0, 0.005);
    let point = PointCloud::points(2, vec![[0.0; 3]], 0.005);
    let e = content(&seg, 1.0).unwrap();
    let bracket = e.lower >= 0.45 && e.upper <= 0.55 && e.lower <= 0.5 && 0.5 <= e.upper;
    let thick = check_thickness(&circle, 1.0, 0.5, 0.5, 100, 0).unwrap();
    let point_fails = !check_thickness(&point, 1.0, 0.5, 0.01, 100, 0).unwrap().pass;

    // monotonicity in l, ball by ball, and the power-mean inequality on every cover
    let mut mono = true;
    let mut power_mean = true;
    for cloud in [&seg, &circle] {
        let balls = sample_balls(cloud, 50, 0.02, 0.5, 1);
        let one = thickness_ratios(cloud, 1.0, &balls).unwrap();
        let half = thickness_ratios(cloud, 0.5, &balls).unwrap();
        mono &= one.iter().zip(&half).all(|(a, b)| b.ratio >= a.ratio.sqrt() * (1.0 - 1e-9));
        for l in [0.5, 1.0, 1.5] {
            let est = content(cloud, l).unwrap();
            for m in [0.25 * l, 0.5 * l, 0.75 * l] {
                power_mean &= est.cover.sum(m) >= est.cover.sum(l).powf(m / l) * (1.0 - 1e-12);
            }
        }
    }
    let porous = check_porosity(&seg, &PorosityOptions { r_max: 0.5, ..Default::default() }).kappa_best;
    let solid = check_porosity(&PointCloud::square_area(1.0, 0.01), &PorosityOptions { r_max: 0.5, ..Default::default() }).kappa_best;
    let f = Flat { origin: [0.0; 3], free: vec![] };
    let aikawa = [0.5, 1.0, 1.5].iter().map(|&t| rel(aikawa_integral(&f, 1, t, &[0.0; 3], 1.0, 1e-6).unwrap().ratio, 2.0 / t)).fold(0.0, f64::max);
    let ok = bracket && thick.pass && thick.gamma_min >= 0.5 && point_fails && mono && power_mean && porous >= 0.25 && solid == 0.0 && aikawa < 0.01;
    (
        ok,
        format!(
            "segment [{:.4}, {:.4}]; circle gamma_min {:.3}; point fails {point_fails}; monotone {mono}; power mean {power_mean}; porosity {porous:.2}/{solid:.2}; Aikawa rel {aikawa:.1e}",
            e.lower, e.upper, thick.gamma_min
        ),
    )
}

fn chain_and_localization() -> Outcome {
    let mut monotone = true;
    for (name, _) in catalog() {
        let b = load(&name, None);
        if b.labeling.is_empty() {
            continue;
        }
        let r = hardy_via_bullet(&b, 2.0, &ChainOptions { battery: 3, ..Default::default() }).unwrap();
        monotone &= r.dist_monotone;
    }
    let coarse = localized_from_spec(&load("cube-triangle", Some(16)), 2.0, &opts()).unwrap();
    let fine = localized_from_spec(&load("cube-triangle", Some(32)), 2.0, &opts()).unwrap();
    let checks = coarse.checks.all() && fine.checks.all();
    let finite = coarse.c_total.is_finite() && fine.c_total.is_finite();
    let drift = rel(fine.c_total, coarse.c_total);
    let b = load("cube-triangle", Some(16));
    let all = vec![Region { min: vec![-1.0; 3], max: vec![2.0; 3] }];
    let degenerate = localized_hardy(&b, &all, &[], 2.0, None, &opts()).unwrap().c_total;
    let direct = hardy(&b, 2.0).constant;
    let ok = monotone && checks && finite && drift <= 0.2 && rel(degenerate, direct) <= 0.05;
    let piece = |r: &LocalizedReport| format!("c_total {:.3} (c_lambda {:.4}, L {:.3}, c_P {:.5}, eps {:.4})", r.c_total, r.c_lambda, r.lipschitz_eta, r.c_poincare, r.epsilon);
    (
        ok,
        format!(
            "dist monotone {monotone}; checks {checks}; n=16 {} -> n=32 {} (drift {:.0}%); degenerate {degenerate:.4} vs direct {direct:.4}",
            piece(&coarse),
            piece(&fine),
            100.0 * drift
        ),
    )
}

fn witnesses_and_scaling() -> Outcome {
    let mut worst_q: f64 = 0.0;
    let mut trace_ok = true;
    let mut worst_scale: f64 = 0.0;
    let mut worst_poincare: f64 = 0.0;
    for (name, _) in catalog() {
        let b = load(&name, if name == "interval" { Some(256) } else { Some(12) });
        if b.labeling.is_empty() {
            continue;
        }
        let g = b.domain.grid();
        let big = b.dilate(2.0);
        for p in [2.0, 3.0] {
            let h = hardy(&b, p);
            trace_ok &= trace_sup(g, &h.witness.values, &b.labeling.dirichlet) == 0.0;
            let q = quotient(&b, &h.witness, p);
            worst_q = worst_q.max(rel(q, h.constant) / h.residual.max(1e-10));
            worst_scale = worst_scale.max(rel(quotient(&big, &h.witness, p), q));
            let pc = poincare_constant(&b.domain, &b.labeling, p, &opts()).unwrap();
            trace_ok &= trace_sup(g, &pc.witness.values, &b.labeling.dirichlet) == 0.0;
            let n = norms(&b.domain, &b.labeling.dirichlet, &pc.witness, p, None).unwrap();
            worst_q = worst_q.max(rel(n.lp_pow / n.grad_pow, pc.constant) / pc.residual.max(1e-10));
            let pc2 = poincare_constant(&big.domain, &big.labeling, p, &opts()).unwrap().constant;
            worst_poincare = worst_poincare.max(rel(pc2, 2f64.powf(p) * pc.constant));
        }
    }
    // the reproduced quotient may differ from the reported one by rounding on
    // top of the stopping residual; allow 100 residuals
    let ok = trace_ok && worst_q <= 100.0 && worst_scale <= 1e-12 && worst_poincare <= 0.01;
    (
        ok,
        format!("traces zero {trace_ok}; quotient gap {worst_q:.2} residuals; dilated quotient rel {worst_scale:.1e}; Poincaré 2^p rel {worst_poincare:.1e}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1D Hardy sharpness bracket", interval_sharpness),
        ("1D Hardy general p", interval_general_p),
        ("Poincaré quantitative", poincare_quantitative),
        ("completed domain on annulus-mixed", annulus_bullet),
        ("boundary dichotomy on random scenarios", dichotomy),
        ("crack-removal isometry", crack_isometry),
        ("glued extension", glued_extension),
        ("measure suite", measure_suite),
        ("chain and localization", chain_and_localization),
        ("witness feasibility and scale covariance", witnesses_and_scaling),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let (ok, detail) = run();
        failed += usize::from(!ok);
        println!("{} criterion {} ({name}): {detail}", if ok { "PASS" } else { "FAIL" }, k + 1);
    }
    println!("acceptance: {} of 10 passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
