mod common;

use common::{build, rel, unit_square};
use mixed_hardy::measure::*;
use mixed_hardy::Error;
use proptest::prelude::*;
use std::f64::consts::PI;

const O: [f64; 3] = [0.0; 3];

fn unit_segment(sep: f64) -> PointCloud {
    PointCloud::segment(2, O, [1.0, 0.0, 0.0], sep)
}

/// Simpson's rule with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        s += f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[test]
fn segment_content_brackets_one_half() {
    let e = content(&unit_segment(0.005), 1.0).unwrap();
    assert!(e.lower <= 0.5 && 0.5 <= e.upper, "{} {}", e.lower, e.upper);
    assert!(e.lower >= 0.45 && e.upper <= 0.55);
    assert!(e.cover.covers(&unit_segment(0.005)));
    assert!((e.slack - (e.upper - e.sampled_upper)).abs() < 1e-15);
}

#[test]
fn circle_content_is_two() {
    // a centered ball of radius r covers an arc of 4·asin(r/2) ≤ π·r, so Σr ≥ 2,
    // and one ball of radius 2 reaches the whole circle
    let sep = 0.01;
    let e = content(&PointCloud::circle(O, 1.0, sep), 1.0).unwrap();
    assert!(e.upper >= 2.0 && e.upper <= 2.0 + 2.0 * sep);
    // the soft count loses half a pitch at the rim of the peak ball
    assert!(e.lower <= 2.0 * (1.0 + sep) && e.lower >= 1.9);
    assert!(e.lower <= e.upper);
}

#[test]
fn square_boundary_content() {
    // a ball at an edge midpoint reaching the far corners: radius √5/2
    let truth = 5f64.sqrt() / 2.0;
    let sep = 0.005;
    let e = content(&PointCloud::square_boundary(1.0, sep), 1.0).unwrap();
    assert!(e.upper >= truth - 1e-12 && e.upper <= truth * 1.01, "{}", e.upper);
    assert!(e.lower <= truth * (1.0 + 2.0 * sep) && e.lower >= 0.9 * truth, "{}", e.lower);
}

#[test]
fn a_point_has_no_length() {
    let pt = PointCloud::points(2, vec![[0.3, 0.3, 0.0]], 0.001);
    let e = content(&pt, 1.0).unwrap();
    assert_eq!(e.lower, 0.0);
    assert!(e.upper <= 0.001 + 1e-15);
}

#[test]
fn bad_dimension_is_rejected() {
    assert!(matches!(content(&unit_segment(0.01), 0.0), Err(Error::BadDimension(_))));
    assert!(matches!(content_lower(&unit_segment(0.01), f64::NAN), Err(Error::BadDimension(_))));
}

#[test]
fn content_scales_under_dilation() {
    for l in [0.5, 1.0, 1.5] {
        let a = content(&unit_segment(0.01), l).unwrap();
        let b = content(&unit_segment(0.01).dilate(2.0), l).unwrap();
        let s = 2f64.powf(l);
        assert!(rel(b.upper, s * a.upper) < 1e-9, "l {l}");
        assert!(rel(b.lower, s * a.lower) < 1e-9, "l {l}");
    }
}

#[test]
fn circle_is_one_thick() {
    let r = check_thickness(&PointCloud::circle(O, 1.0, 0.005), 1.0, 0.5, 0.5, 100, 0).unwrap();
    assert!(r.pass);
    assert!(r.gamma_min >= 0.5);
    assert_eq!(r.samples.len(), 100);
    assert!(r.samples.iter().all(|s| s.r <= 0.5));
    assert_eq!(r.gamma_min, r.samples.iter().map(|s| s.ratio).fold(f64::INFINITY, f64::min));
}

#[test]
fn a_point_is_not_one_thick() {
    let r = check_thickness(&PointCloud::points(2, vec![[0.0; 3]], 0.005), 1.0, 0.5, 0.01, 100, 0).unwrap();
    assert!(!r.pass);
    assert_eq!(r.gamma_min, 0.0);
}

#[test]
fn thickness_passes_to_lower_dimensions() {
    // H^∞_m(E) ≥ H^∞_l(E)^{m/l} for m < l, ball by ball
    for cloud in [unit_segment(0.005), PointCloud::circle(O, 1.0, 0.005)] {
        let balls = sample_balls(&cloud, 60, 0.02, 0.5, 3);
        let one = thickness_ratios(&cloud, 1.0, &balls).unwrap();
        let half = thickness_ratios(&cloud, 0.5, &balls).unwrap();
        for (a, b) in one.iter().zip(&half) {
            assert!(b.ratio >= a.ratio.powf(0.5) * (1.0 - 1e-9), "r {}: {} vs {}", a.r, b.ratio, a.ratio);
        }
    }
}

#[test]
fn scale_too_fine_is_reported() {
    assert!(matches!(check_thickness(&unit_segment(0.1), 1.0, 0.2, 0.1, 10, 0), Err(Error::ScaleTooFine { .. })));
}

#[test]
fn segment_is_a_one_set_not_a_two_set() {
    let seg = unit_segment(0.005);
    let one = check_l_set(&seg, 1.0, 100, 0).unwrap();
    assert!(one.pass, "slope {}", one.slope);
    assert!(one.c0 > 0.5 && one.c1 <= 2.0 + 1e-9);
    assert!(!check_l_set(&seg, 2.0, 100, 0).unwrap().pass);
}

#[test]
fn solid_square_is_a_two_set() {
    let r = check_l_set(&PointCloud::square_area(1.0, 0.01), 2.0, 100, 0).unwrap();
    assert!(r.pass, "slope {}", r.slope);
}

#[test]
fn l_set_segment_is_thick() {
    let seg = unit_segment(0.005);
    let lset = check_l_set(&seg, 1.0, 100, 0).unwrap();
    let thick = check_thickness(&seg, 1.0, 0.5, lset.c0 / 4.0, 100, 0).unwrap();
    assert!(thick.pass, "{} < {}", thick.gamma_min, lset.c0 / 4.0);
}

#[test]
fn porosity_examples() {
    let seg = check_porosity(&unit_segment(0.005), &PorosityOptions { r_max: 0.5, ..Default::default() });
    assert!(seg.kappa_best >= 0.25, "{}", seg.kappa_best);
    let area = check_porosity(&PointCloud::square_area(1.0, 0.01), &PorosityOptions { r_max: 0.5, ..Default::default() });
    assert_eq!(area.kappa_best, 0.0);
    assert!(!area.failures.is_empty());
    let pts = PointCloud::points(2, vec![[0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]], 0.01);
    let three = check_porosity(&pts, &PorosityOptions { r_max: 0.5, ..Default::default() });
    assert_eq!(three.kappa_best, 0.5);
}

#[test]
fn aikawa_point_in_one_dimension() {
    let f = Flat { origin: O, free: vec![] };
    for t in [0.25, 0.5, 1.0, 1.5] {
        for r in [0.25, 1.0] {
            let v = aikawa_integral(&f, 1, t, &O, r, 1e-6).unwrap();
            assert!(rel(v.ratio, 2.0 / t) < 0.01, "t {t} r {r}: {}", v.ratio);
        }
    }
}

#[test]
fn aikawa_axis_in_the_plane() {
    // ∫_{unit disk} |y|^{-1/2} = 8 ∫_0^1 √(1 − s⁴) ds
    let oracle = 8.0 * simpson(|s| (1.0 - s.powi(4)).max(0.0).sqrt(), 0.0, 1.0, 1 << 16);
    let axis = Flat { origin: O, free: vec![0] };
    for r in [0.25, 0.5, 1.0] {
        let v = aikawa_integral(&axis, 2, 1.5, &O, r, 1e-5).unwrap();
        assert!(rel(v.ratio, oracle) < 0.01, "r {r}: {} vs {oracle}", v.ratio);
    }
    assert!(matches!(aikawa_integral(&axis, 2, 0.5, &O, 1.0, 1e-5), Err(Error::QuadratureUnderflow { .. })));
    let sweep = aikawa_sweep(&axis, 2, &[0.5, 1.5], &[(O, 1.0)], 1e-5);
    assert_eq!(sweep.rows[0].1, None);
    assert_eq!(sweep.t_min, Some(1.5));
}

#[test]
fn relative_volume_density_examples() {
    let b = unit_square(256, "kind = \"all\"");
    let radii = [0.1, 0.2, 0.3];
    let edge = relative_volume_density(&b.domain, [0.0, 0.5, 0.0], &radii);
    let corner = relative_volume_density(&b.domain, [0.0, 0.0, 0.0], &radii);
    for k in 0..3 {
        assert!(rel(edge.values[k], PI / 2.0) < 0.02, "{}", edge.values[k]);
        assert!(rel(corner.values[k], PI / 4.0) < 0.02, "{}", corner.values[k]);
    }
    assert_eq!(edge.liminf, edge.values.iter().copied().fold(f64::INFINITY, f64::min));
    // the slit removes no volume
    let slit = build(
        r#"
name = "slit"
dimension = 2
resolution = 256
cracks = [{ points = [[0.25, 0.5], [0.75, 0.5]] }]
[csg]
kind = "box"
min = [0.0, 0.0]
max = [1.0, 1.0]
[dirichlet]
kind = "cracks"
"#,
    );
    let mid = relative_volume_density(&slit.domain, [0.5, 0.5, 0.0], &radii);
    assert!(mid.values.iter().all(|v| rel(*v, PI) < 0.02));
}

#[test]
fn face_cloud_carries_boundary_area() {
    let b = unit_square(32, "kind = \"all\"");
    let cloud = PointCloud::from_faces(b.domain.grid(), &b.labeling.dirichlet);
    assert!((cloud.total_mass() - 4.0).abs() < 1e-12);
    assert_eq!(cloud.measure_dim, 1.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bracket_is_ordered(n in 2usize..40, seed in 0u64..1000, l in 0.3f64..2.0) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let a = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), 0.0];
        let b = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), 0.0];
        let len = dist(&a, &b).max(0.05);
        let cloud = PointCloud::segment(2, a, b, len / n as f64);
        let e = content(&cloud, l).unwrap();
        prop_assert!(e.lower <= e.upper * (1.0 + 1e-12));
        prop_assert!(e.cover.covers(&cloud));
    }

    #[test]
    fn covers_satisfy_the_power_mean_inequality(seed in 0u64..1000, l in 0.5f64..2.0, frac in 0.1f64..1.0) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<[f64; 3]> = (0..60).map(|_| [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0), 0.0]).collect();
        let cloud = PointCloud::points(2, pts, 0.01);
        let (cover, sum) = content_upper(&cloud, l, None).unwrap();
        prop_assert!(cover.covers(&cloud));
        let m = frac * l;
        prop_assert!(cover.sum(m) >= sum.powf(m / l) * (1.0 - 1e-12));
    }

    #[test]
    fn porosity_is_downward_closed(seed in 0u64..1000, k in 1usize..6) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<[f64; 3]> = (0..k * 10).map(|_| [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0), 0.0]).collect();
        let r = check_porosity(&PointCloud::points(2, pts, 0.01), &PorosityOptions { n_balls: 30, r_max: 0.5, seed, ..Default::default() });
        let passes: Vec<bool> = r.per_kappa.iter().map(|x| x.1).collect();
        prop_assert!(passes.windows(2).all(|w| w[0] || !w[1]));
        prop_assert!(passes[0]);
    }
}
