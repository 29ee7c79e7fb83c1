//! Acceptance suite: one `[PASS]` / `[FAIL]` line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the lines are always
//! printed; exits non-zero when any criterion fails.

use std::f64::consts::SQRT_2;
use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use smallball::density::{lebesgue_ratio_check, rn_limit_check, rn_value, weak_mode_rn_bound};
use smallball::gallery::{self, CrossedSquaresParams, Example, NoModeParams};
use smallball::oracle::{mc_ball_mass, quadrature_ball_mass, quadrature_error_bound, McConfig};
use smallball::{
    lsc_probe, Analysis, Ball, Components, GridSpec, IntervalComponent, Measure, PNorm, Point, RadiusSchedule,
    SegmentComponent, Status, TranslationSet,
};

/// Result of one criterion: verdict, a human summary, and every number the
/// criterion computed (bit patterns), for the determinism check.
struct Outcome {
    pass: bool,
    summary: String,
    digest: String,
}

#[derive(Default)]
struct Digest(String);

impl Digest {
    fn num(&mut self, x: f64) {
        write!(self.0, "{:016x};", x.to_bits()).unwrap();
    }

    fn tag(&mut self, s: impl std::fmt::Display) {
        write!(self.0, "{s};").unwrap();
    }
}

fn within(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() < limit_s
}

// 1. k-dependence closed forms
fn closed_forms() -> Outcome {
    let start = Instant::now();
    let m = gallery::build_k_dependence().unwrap();
    let mut d = Digest::default();
    let mut worst: f64 = 0.0;
    for r in [0.1, 0.25, 0.4] {
        let cases = [
            (-1.0, PNorm::One, 2.0 * SQRT_2 * r),
            (-1.0, PNorm::Infinity, 4.0 * SQRT_2 * r),
            (1.0, PNorm::One, 4.0 * r),
            (1.0, PNorm::Infinity, 4.0 * r),
        ];
        for (x, norm, expected) in cases {
            let f = m.ball_mass(&Ball::new(Point::plane(x, 0.0), r, norm).unwrap()).unwrap();
            d.num(f);
            worst = worst.max((f - expected).abs() / expected);
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: worst <= 1e-9 && within(elapsed, 1.0),
        summary: format!("max relative error {worst:.2e}, {:.3}s", elapsed.as_secs_f64()),
        digest: d.0,
    }
}

// 2. k-dependence strong-mode matrix
fn verdict_matrix() -> Outcome {
    let start = Instant::now();
    let m = gallery::build_k_dependence().unwrap();
    let sched = RadiusSchedule::dyadic(0.5, 18, RadiusSchedule::DEFAULT_TAIL).unwrap();
    let grid = GridSpec::new(Point::plane(-2.5, -2.5), Point::plane(2.5, 2.5), 1.0 / 64.0).unwrap();
    let grid = TranslationSet::from_grid(grid);
    let mut d = Digest::default();
    let mut pass = true;
    let mut cells = Vec::new();
    for (x, norm, want) in [
        (1.0, PNorm::One, Status::Satisfied),
        (-1.0, PNorm::Infinity, Status::Satisfied),
        (1.0, PNorm::Infinity, Status::Violated),
        (-1.0, PNorm::One, Status::Violated),
    ] {
        let v = Analysis::new(&m, norm, sched.clone())
            .check_strong_mode(&Point::plane(x, 0.0), &grid)
            .unwrap();
        for row in &v.evidence[0].rows {
            d.num(row.ratio);
        }
        d.tag(v.status);
        let tail = v.evidence[0].tail(sched.tail_window()).unwrap();
        let ok = v.status == want
            && match want {
                Status::Satisfied => tail.iter().all(|row| (row.ratio - 1.0).abs() <= 1e-9),
                _ => (v.limsup_est - SQRT_2).abs() <= 1e-6,
            };
        pass &= ok;
        let c = if x > 0.0 { "e1" } else { "-e1" };
        cells.push(format!("({c},{}) {} {:.9}", norm.name(), v.status, v.limsup_est));
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: pass && within(elapsed, 30.0),
        summary: format!("{}; {:.2}s", cells.join(", "), elapsed.as_secs_f64()),
        digest: d.0,
    }
}

// 3. crossed-squares band ratios and case-point limits
fn band_ratios() -> Outcome {
    let p = CrossedSquaresParams {
        alpha: 0.875,
        n_crosses: 12,
    };
    let m = gallery::build_crossed_squares(&p).unwrap();
    let mut d = Digest::default();
    let v0 = CrossedSquaresParams::center(0);
    let (lo, hi) = (1.25, 1.0 + p.alpha);
    let mut band_ok = true;
    let mut band_min = f64::INFINITY;
    let mut band_max = f64::NEG_INFINITY;
    for n in 1..=6 {
        let r = CrossedSquaresParams::band_radius(n);
        let f_n = m
            .ball_mass(&Ball::new(CrossedSquaresParams::center(n), r, PNorm::Infinity).unwrap())
            .unwrap();
        let f_0 = m.ball_mass(&Ball::new(v0, r, PNorm::Infinity).unwrap()).unwrap();
        let q = f_n / f_0;
        d.num(q);
        band_min = band_min.min(q);
        band_max = band_max.max(q);
        band_ok &= q > lo + 1e-9 && q < hi - 1e-9;
    }
    // limits at v₁, read off radii 2^-10 .. 2^-14
    let stated = [0.5, 7.0 / 16.0, 11.0 / 16.0];
    let n = 1;
    let center = CrossedSquaresParams::center(n);
    let mut cases_ok = true;
    let mut observed = Vec::new();
    for (z, want) in CrossedSquaresParams::case_points(n).iter().zip(stated) {
        let mut worst_q = want;
        for k in 10..=14 {
            let r = 2f64.powi(-k);
            let f_z = m.ball_mass(&Ball::new(*z, r, PNorm::Infinity).unwrap()).unwrap();
            let f_v = m.ball_mass(&Ball::new(center, r, PNorm::Infinity).unwrap()).unwrap();
            let q = f_z / f_v;
            d.num(q);
            if (q - want).abs() > (worst_q - want).abs() {
                worst_q = q;
            }
            cases_ok &= (q - want).abs() <= 1e-9;
        }
        observed.push(format!("{worst_q:.6} (want {want:.6})"));
    }
    Outcome {
        pass: band_ok && cases_ok,
        summary: format!(
            "band ratios in [{band_min:.6}, {band_max:.6}] vs (1.25, {hi}) {}; case limits {} {}",
            if band_ok { "ok" } else { "out" },
            observed.join(", "),
            if cases_ok { "ok" } else { "mismatch" },
        ),
        digest: d.0,
    }
}

// 4. crossed-squares classifications at v₀, v₁, v₂
fn crossed_classifications() -> Outcome {
    let start = Instant::now();
    let p = CrossedSquaresParams::default();
    let m = gallery::build_crossed_squares(&p).unwrap();
    let weak_sched = RadiusSchedule::dyadic(0.5, 24, RadiusSchedule::DEFAULT_TAIL).unwrap();
    let mut d = Digest::default();
    let mut pass = true;
    let mut notes = Vec::new();
    for k in 0..=2usize {
        let u = CrossedSquaresParams::center(k);
        let mut vs: Vec<Point> = (k + 1..=k + 6).map(|n| u - CrossedSquaresParams::center(n)).collect();
        vs.extend(CrossedSquaresParams::case_points(k).iter().map(|z| u - *z));
        let e = TranslationSet::from_points(vs.clone());

        let weak = Analysis::new(&m, PNorm::Infinity, weak_sched.clone())
            .check_weak_mode(&u, &e)
            .unwrap();
        let band = RadiusSchedule::band(k as u32 + 1, k as u32 + 6, 6).unwrap();
        let band_analysis = Analysis::new(&m, PNorm::Infinity, band);
        let e_strong = band_analysis.check_e_strong_mode(&u, &e).unwrap();
        let uniform: Vec<Status> = vs
            .iter()
            .map(|v_star| band_analysis.check_uniformity(&u, v_star, &e, 0.5).unwrap())
            .map(|v| {
                d.num(v.limsup_est);
                v.status
            })
            .collect();
        d.tag(weak.status);
        d.num(weak.limsup_est);
        d.tag(e_strong.status);
        d.num(e_strong.limsup_est);

        let ok = weak.status == Status::Satisfied
            && e_strong.status == Status::Violated
            && e_strong.limsup_est >= 1.25 - 1e-9
            && uniform.iter().all(|s| *s == Status::Violated);
        pass &= ok;
        notes.push(format!(
            "v{k}: weak {} / E-strong {} ({:.6}) / uniformity {}/{} Violated",
            weak.status,
            e_strong.status,
            e_strong.limsup_est,
            uniform.iter().filter(|s| **s == Status::Violated).count(),
            uniform.len()
        ));
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: pass && within(elapsed, 10.0),
        summary: format!("{}; {:.2}s", notes.join("; "), elapsed.as_secs_f64()),
        digest: d.0,
    }
}

// 5. no-mode density
fn no_mode() -> Outcome {
    let start = Instant::now();
    let p = NoModeParams {
        a: 2.0,
        b: 4.0,
        n_pieces: 16,
    };
    let m = gallery::build_no_mode_density(&p).unwrap();
    let a_n = p.normalizer();
    let mut d = Digest::default();
    let mut mass_err: f64 = 0.0;
    for n in 1..=8 {
        let f = m
            .ball_mass(&Ball::new(Point::line(n as f64), 4f64.powi(-n), PNorm::Two).unwrap())
            .unwrap();
        d.num(f);
        mass_err = mass_err.max((f - 2f64.powi(-n) / a_n).abs());
    }
    let sched = RadiusSchedule::geometric(0.25, 0.25, 12, RadiusSchedule::DEFAULT_TAIL).unwrap();
    let grid = TranslationSet::from_grid(GridSpec::covering(&m, 1.0, 1.0 / 16.0).unwrap());
    let analysis = Analysis::new(&m, PNorm::Two, sched);
    let mut min_witness = f64::INFINITY;
    let mut all_violated = true;
    for u in 1..=8 {
        let x = u as f64;
        let r = 4f64.powi(-(u + 1));
        let ball = |c: f64| Ball::new(Point::line(c), r, PNorm::Two).unwrap();
        let q = m.ball_mass(&ball(x.ceil() + 1.0)).unwrap() / m.ball_mass(&ball(x)).unwrap();
        d.num(q);
        min_witness = min_witness.min(q);
        let v = analysis.check_strong_mode(&Point::line(x), &grid).unwrap();
        d.tag(v.status);
        d.num(v.limsup_est);
        all_violated &= v.status == Status::Violated;
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: mass_err <= 1e-12 && min_witness >= p.b / p.a - 1e-9 && all_violated && within(elapsed, 5.0),
        summary: format!(
            "mass error {mass_err:.1e}, min witness ratio {min_witness:.9}, strong Violated at all of 1..8: {all_violated}; {:.2}s",
            elapsed.as_secs_f64()
        ),
        digest: d.0,
    }
}

fn support_point(m: &Measure, rng: &mut ChaCha8Rng) -> Point {
    let masses = m.component_masses();
    let total: f64 = masses.iter().sum();
    let mut pick = rng.random::<f64>() * total;
    let mut k = 0;
    while k + 1 < masses.len() && pick >= masses[k] {
        pick -= masses[k];
        k += 1;
    }
    // stay off the endpoints so small balls see positive mass on both sides
    let t = 0.05 + 0.9 * rng.random::<f64>();
    match m.components() {
        Components::Segments(s) => Point::R2(s[k].at(t)),
        Components::Intervals(iv) => Point::line(iv[k].lo + t * (iv[k].hi - iv[k].lo)),
    }
}

// 6. Strong ⟹ E-strong ⟹ E-weak
fn implication_chain() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut d = Digest::default();
    let mut broken = 0;
    let mut counts = [0usize; 3];
    let mut total = 0;
    for id in gallery::GALLERY_IDS {
        let m = Example::from_id(id).unwrap().build().unwrap();
        let sched = RadiusSchedule::dyadic(0.25, 10, 4).unwrap();
        let spacing = if m.dim() == 1 { 1.0 / 64.0 } else { 1.0 / 8.0 };
        let grid_spec = GridSpec::covering(&m, 0.5, spacing).unwrap();
        let grid_points = grid_spec.points().unwrap();
        // the known strong modes of k-dependence join the random candidates
        let known: &[(Point, PNorm)] = if id == "k-dependence" {
            &[
                (Point::plane(1.0, 0.0), PNorm::One),
                (Point::plane(-1.0, 0.0), PNorm::Infinity),
            ]
        } else {
            &[]
        };
        let randomized: Vec<(Point, PNorm)> = (0..20)
            .map(|i| (support_point(&m, &mut rng), PNorm::ALL[i % 3]))
            .collect();
        for &(u, norm) in known.iter().chain(&randomized) {
            // E is a random subset of the translates u − z, z on the grid,
            // so u − E ⊂ grid ∪ {u}
            let mut vs = vec![Point::zero(m.dim())];
            vs.extend(
                grid_points
                    .iter()
                    .filter(|_| rng.random::<f64>() < 0.05)
                    .map(|z| u - *z),
            );
            let e = TranslationSet::from_points(vs);
            let grid = TranslationSet::from_grid(grid_spec.clone()).with_points([u]);
            let a = Analysis::new(&m, norm, sched.clone());
            let strong = a.check_strong_mode(&u, &grid).unwrap().status;
            let e_strong = a.check_e_strong_mode(&u, &e).unwrap().status;
            let weak = a.check_weak_mode(&u, &e).unwrap().status;
            for (c, s) in counts.iter_mut().zip([strong, e_strong, weak]) {
                *c += usize::from(s == Status::Satisfied);
                d.tag(s);
            }
            if (strong == Status::Satisfied && e_strong != Status::Satisfied)
                || (e_strong == Status::Satisfied && weak != Status::Satisfied)
            {
                broken += 1;
            }
            total += 1;
        }
    }
    Outcome {
        pass: broken == 0,
        summary: format!(
            "{total} candidates, {broken} broken implications (Satisfied: strong {}, E-strong {}, weak {})",
            counts[0], counts[1], counts[2]
        ),
        digest: d.0,
    }
}

fn random_segment_measure(rng: &mut ChaCha8Rng) -> Measure {
    let n = rng.random_range(1..=6);
    let segs = (0..n)
        .map(|_| {
            let mut c = || rng.random_range(-2.0..2.0);
            let (a, b) = ([c(), c()], [c(), c()]);
            let w = rng.random_range(0.1..3.0);
            SegmentComponent::new(a, b, w).unwrap()
        })
        .collect();
    Measure::segments("random", segs).unwrap()
}

fn random_step_density(rng: &mut ChaCha8Rng) -> Measure {
    let n = rng.random_range(2..=6);
    let mut x = rng.random_range(-3.0..0.0);
    let pieces = (0..n)
        .map(|_| {
            let w = rng.random_range(0.5..1.5);
            let piece = IntervalComponent::new(x, x + w, rng.random_range(0.1..4.0)).unwrap();
            x += w;
            piece
        })
        .collect();
    Measure::intervals("steps", pieces).unwrap()
}

// 7. oracle cross-validation
fn oracles() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut d = Digest::default();
    let fixed = [
        gallery::build_k_dependence().unwrap(),
        gallery::build_crossed_squares(&CrossedSquaresParams::default()).unwrap(),
        gallery::build_no_mode_density(&NoModeParams::default()).unwrap(),
    ];
    let subdivisions = 100_000;
    let (mut mc_ok, mut quad_ok) = (0, 0);
    for case in 0..100u64 {
        let random;
        let m = match case % 5 {
            0..=2 => {
                random = if case % 5 == 2 {
                    random_step_density(&mut rng)
                } else {
                    random_segment_measure(&mut rng)
                };
                &random
            }
            _ => &fixed[rng.random_range(0..fixed.len())],
        };
        let center = support_point(m, &mut rng);
        let norm = PNorm::ALL[rng.random_range(0..3)];
        let ball = Ball::new(center, rng.random_range(0.05..1.0), norm).unwrap();
        let exact = m.ball_mass(&ball).unwrap();
        let mc = mc_ball_mass(m, &ball, &McConfig::new(100_000, 1000 + case).unwrap()).unwrap();
        let q = quadrature_ball_mass(m, &ball, subdivisions).unwrap();
        d.num(exact);
        d.num(mc.estimate);
        d.num(q);
        mc_ok += usize::from((mc.estimate - exact).abs() <= 5.0 * mc.std_error);
        quad_ok += usize::from((q - exact).abs() <= quadrature_error_bound(m, subdivisions));
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: mc_ok >= 95 && quad_ok == 100 && within(elapsed, 60.0),
        summary: format!(
            "MC within 5 SE {mc_ok}/100, quadrature within bound {quad_ok}/100; {:.2}s",
            elapsed.as_secs_f64()
        ),
        digest: d.0,
    }
}

// 8. lower semicontinuity probe
fn lsc() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut d = Digest::default();
    let mut ok = 0;
    for _ in 0..100 {
        let m = random_segment_measure(&mut rng);
        // half the trials sit on the support, where the probe is sharpest
        let x = if rng.random::<bool>() {
            support_point(&m, &mut rng)
        } else {
            Point::plane(rng.random_range(-2.5..2.5), rng.random_range(-2.5..2.5))
        };
        let r = rng.random_range(0.05..1.5);
        let norm = PNorm::ALL[rng.random_range(0..3)];
        let dir = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let approach: Vec<Point> = (1..=40)
            .map(|j| {
                let s = 0.5f64.powi(j);
                x + Point::plane(dir[0] * s, dir[1] * s)
            })
            .collect();
        let pass = lsc_probe(&m, &x, r, norm, &approach, 1e-9).unwrap();
        d.tag(pass);
        ok += usize::from(pass);
    }
    Outcome {
        pass: ok == 100,
        summary: format!("{ok}/100 trials pass"),
        digest: d.0,
    }
}

// 9. Lebesgue differentiation and Radon–Nikodym checks
fn density_checks() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut d = Digest::default();
    let sched = RadiusSchedule::dyadic(0.05, 16, RadiusSchedule::DEFAULT_TAIL).unwrap();

    let mut constant_ok = 0;
    for _ in 0..20 {
        let lo = rng.random_range(-3.0..3.0);
        let w = rng.random_range(0.5..2.0);
        let h = rng.random_range(0.1..5.0);
        let m = Measure::intervals("piece", vec![IntervalComponent::new(lo, lo + w, h).unwrap()]).unwrap();
        let u = Point::line(lo + w * rng.random_range(0.2..0.8));
        let ok = lebesgue_ratio_check(&m, &u, &sched, h, 1e-12).unwrap();
        d.tag(ok);
        constant_ok += usize::from(ok);
    }

    let mut rn_ok = 0;
    for _ in 0..20 {
        let m = random_step_density(&mut rng);
        let Components::Intervals(pieces) = m.components() else {
            unreachable!()
        };
        let i = rng.random_range(0..pieces.len());
        let j = rng.random_range(0..pieces.len());
        let (a, b) = (&pieces[i], &pieces[j]);
        let u = a.lo + (a.hi - a.lo) * rng.random_range(0.2..0.8);
        let target = b.lo + (b.hi - b.lo) * rng.random_range(0.2..0.8);
        let v = u - target;
        let expected = b.height / a.height;
        let value = rn_value(&m, &Point::line(u), v, sched.max_radius()).unwrap();
        let ok = rn_limit_check(&m, &Point::line(u), v, &sched, 1e-9).unwrap() && (value - expected).abs() <= 1e-9;
        d.num(value);
        rn_ok += usize::from(ok);
    }

    // a point of the tallest step is a weak mode for any sample of shifts
    let mut bound_ok = 0;
    for _ in 0..20 {
        let m = random_step_density(&mut rng);
        let Components::Intervals(pieces) = m.components() else {
            unreachable!()
        };
        let top = pieces
            .iter()
            .fold(&pieces[0], |best, p| if p.height > best.height { p } else { best });
        let u = Point::line(top.lo + (top.hi - top.lo) * rng.random_range(0.2..0.8));
        let e = TranslationSet::from_points((0..12).map(|_| Point::line(rng.random_range(-4.0..4.0))).collect());
        let bound = weak_mode_rn_bound(&m, &u, &e, &sched, 1e-9).unwrap();
        if let Some(q) = bound {
            d.num(q);
        }
        bound_ok += usize::from(matches!(bound, Some(q) if q <= 1.0 + 1e-9));
    }

    Outcome {
        pass: constant_ok == 20 && rn_ok == 20 && bound_ok == 20,
        summary: format!(
            "constant pieces {constant_ok}/20, RN limits {rn_ok}/20, weak-mode RN bound ≤ 1 {bound_ok}/20"
        ),
        digest: d.0,
    }
}

type Criterion = (&'static str, fn() -> Outcome);

const CRITERIA: [Criterion; 9] = [
    ("k-dependence closed-form masses", closed_forms),
    ("k-dependence strong-mode matrix", verdict_matrix),
    ("crossed-squares band ratios and case limits", band_ratios),
    ("crossed-squares weak / E-strong / uniformity", crossed_classifications),
    ("no-mode density", no_mode),
    ("implication chain", implication_chain),
    ("oracle cross-validation", oracles),
    ("lower-semicontinuity probe", lsc),
    ("Lebesgue / Radon-Nikodym checks", density_checks),
];

fn main() -> ExitCode {
    let mut all = true;
    let mut first_digests = Vec::new();
    for (i, (name, run)) in CRITERIA.iter().enumerate() {
        let out = run();
        println!(
            "[{}] {:>2}. {name}: {}",
            if out.pass { "PASS" } else { "FAIL" },
            i + 1,
            out.summary
        );
        all &= out.pass;
        first_digests.push(out.digest);
    }
    let mismatched: Vec<usize> = CRITERIA
        .iter()
        .zip(&first_digests)
        .enumerate()
        .filter(|(_, ((_, run), first))| run().digest != **first)
        .map(|(i, _)| i + 1)
        .collect();
    let deterministic = mismatched.is_empty();
    println!(
        "[{}] 10. determinism: {}",
        if deterministic { "PASS" } else { "FAIL" },
        if deterministic {
            "criteria 1-9 bit-identical on a second run".to_string()
        } else {
            format!("criteria {mismatched:?} differ on a second run")
        }
    );
    all &= deterministic;
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
