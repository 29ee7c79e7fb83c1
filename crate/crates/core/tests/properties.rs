use proptest::prelude::*;

use smallball::oracle::{quadrature_ball_mass, quadrature_error_bound};
use smallball::{
    lsc_probe, Analysis, Ball, GridSpec, IntervalComponent, Measure, PNorm, Point, RadiusSchedule, SegmentComponent,
    Status, TranslationSet,
};

fn norm() -> impl Strategy<Value = PNorm> {
    prop_oneof![Just(PNorm::One), Just(PNorm::Two), Just(PNorm::Infinity)]
}

fn segment() -> impl Strategy<Value = SegmentComponent> {
    (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64, 0.1..3.0f64)
        .prop_filter("degenerate", |(ax, ay, bx, by, _)| {
            (ax - bx).abs() + (ay - by).abs() > 1e-3
        })
        .prop_map(|(ax, ay, bx, by, w)| SegmentComponent::new([ax, ay], [bx, by], w).unwrap())
}

fn segment_measure() -> impl Strategy<Value = Measure> {
    prop::collection::vec(segment(), 1..6).prop_map(|s| Measure::segments("random", s).unwrap())
}

fn plane_point() -> impl Strategy<Value = Point> {
    (-2.5..2.5f64, -2.5..2.5f64).prop_map(|(x, y)| Point::plane(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn mass_is_monotone_in_radius(m in segment_measure(), c in plane_point(), r in 0.01..2.0f64, k in norm()) {
        let small = m.ball_mass(&Ball::new(c, r, k).unwrap()).unwrap();
        let large = m.ball_mass(&Ball::new(c, r * 1.5, k).unwrap()).unwrap();
        prop_assert!(small <= large + 1e-12);
        prop_assert!(large <= m.total_mass() * (1.0 + 1e-12));
    }

    #[test]
    fn mass_is_additive(a in segment_measure(), b in segment_measure(), c in plane_point(), r in 0.01..2.0f64, k in norm()) {
        let ball = Ball::new(c, r, k).unwrap();
        let joined = a.concat(&b).unwrap().ball_mass(&ball).unwrap();
        let parts = a.ball_mass(&ball).unwrap() + b.ball_mass(&ball).unwrap();
        prop_assert!((joined - parts).abs() <= 1e-12 * parts.max(1.0));
    }

    #[test]
    fn mass_commutes_with_translation(m in segment_measure(), c in plane_point(), v in plane_point(), r in 0.01..2.0f64, k in norm()) {
        let here = m.ball_mass(&Ball::new(c, r, k).unwrap()).unwrap();
        let there = m.translated(&v).unwrap().ball_mass(&Ball::new(c + v, r, k).unwrap()).unwrap();
        prop_assert!((here - there).abs() <= 1e-9 * m.total_mass().max(1.0));
    }

    #[test]
    fn clip_length_is_bounded(s in segment(), c in plane_point(), r in 0.01..3.0f64, k in norm()) {
        let len = s.clip_length(&Ball::new(c, r, k).unwrap()).unwrap();
        prop_assert!(len >= 0.0);
        prop_assert!(len <= s.length() * (1.0 + 1e-12));
    }

    #[test]
    fn quadrature_within_bound(m in segment_measure(), c in plane_point(), r in 0.05..2.0f64, k in norm()) {
        let ball = Ball::new(c, r, k).unwrap();
        let exact = m.ball_mass(&ball).unwrap();
        let q = quadrature_ball_mass(&m, &ball, 4096).unwrap();
        prop_assert!((q - exact).abs() <= quadrature_error_bound(&m, 4096));
    }

    #[test]
    fn self_trace_is_one(m in segment_measure(), t in 0.0..1.0f64, k in norm()) {
        let Some(first) = (match m.components() {
            smallball::Components::Segments(s) => s.first().copied(),
            _ => None,
        }) else { unreachable!() };
        let u = Point::R2(first.at(t));
        let a = Analysis::new(&m, k, RadiusSchedule::dyadic(0.5, 12, 4).unwrap());
        let trace = a.ratio_trace(&u, &u).unwrap();
        prop_assert!(trace.ratios().iter().all(|&q| q == 1.0));
    }

    #[test]
    fn lsc_holds_along_approach(m in segment_measure(), x in plane_point(), dir in plane_point(), r in 0.05..1.5f64, k in norm()) {
        let approach: Vec<Point> = (1..=40)
            .map(|j| x + Point::plane(dir.coords()[0] * 1e-12 / j as f64, dir.coords()[1] * 1e-12 / j as f64))
            .collect();
        prop_assert!(lsc_probe(&m, &x, r, k, &approach, 1e-9).unwrap());
    }

    #[test]
    fn interval_mass_is_exact_inside(lo in -3.0..3.0f64, w in 0.1..2.0f64, h in 0.1..5.0f64, t in 0.2..0.8f64) {
        let m = Measure::intervals("one", vec![IntervalComponent::new(lo, lo + w, h).unwrap()]).unwrap();
        let c = lo + t * w;
        let r = 0.1 * w;
        let f = m.ball_mass(&Ball::new(Point::line(c), r, PNorm::Two).unwrap()).unwrap();
        prop_assert!((f - 2.0 * r * h).abs() <= 1e-12 * h);
    }
}

/// Refining a grid that contains the coarse one can only raise the sup.
#[test]
fn grid_refinement_is_monotone() {
    let m = smallball::gallery::build_k_dependence().unwrap();
    let sched = RadiusSchedule::dyadic(0.5, 10, 4).unwrap();
    let u = Point::plane(-1.0, 0.0);
    let mut previous: Option<Vec<f64>> = None;
    for spacing in [1.0 / 4.0, 1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0] {
        let grid = GridSpec::new(Point::plane(-2.0, -1.5), Point::plane(2.0, 1.5), spacing).unwrap();
        let v = Analysis::new(&m, PNorm::Infinity, sched.clone())
            .check_strong_mode(&u, &TranslationSet::from_grid(grid))
            .unwrap();
        let sups: Vec<f64> = v.evidence[0].rows.iter().map(|row| row.f_num).collect();
        if let Some(prev) = &previous {
            assert!(prev.iter().zip(&sups).all(|(a, b)| b >= a));
        }
        previous = Some(sups);
    }
}

/// Strong ⟹ E-strong ⟹ E-weak on a sample with `u − E` inside the grid.
#[test]
fn implication_chain_on_k_dependence() {
    let m = smallball::gallery::build_k_dependence().unwrap();
    let sched = RadiusSchedule::dyadic(0.5, 12, 4).unwrap();
    let grid = GridSpec::new(Point::plane(-2.5, -2.5), Point::plane(2.5, 2.5), 1.0 / 16.0).unwrap();
    let u = Point::plane(1.0, 0.0);
    let e = TranslationSet::from_points(grid.points().unwrap().into_iter().step_by(37).map(|z| u - z).collect());
    let a = Analysis::new(&m, PNorm::One, sched);
    let strong = a.check_strong_mode(&u, &TranslationSet::from_grid(grid)).unwrap();
    let e_strong = a.check_e_strong_mode(&u, &e).unwrap();
    let weak = a.check_weak_mode(&u, &e).unwrap();
    assert_eq!(strong.status, Status::Satisfied);
    assert_eq!(e_strong.status, Status::Satisfied);
    assert_eq!(weak.status, Status::Satisfied);
}
