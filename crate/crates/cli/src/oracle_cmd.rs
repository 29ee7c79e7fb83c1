use std::fmt::Write as _;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use smallball::gallery::{CrossedSquaresParams, Example};
use smallball::oracle::{mc_ball_mass, quadrature_ball_mass, quadrature_error_bound, McConfig};
use smallball::{Ball, Components, Measure, PNorm, Point};

use crate::error::Result;
use crate::output::{emit, num};

#[derive(Clone, Debug, clap::Args)]
pub struct CompareArgs {
    /// Monte Carlo samples per case.
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    /// Quadrature pieces per component.
    #[arg(long, default_value_t = 100_000)]
    pub subdivisions: usize,
    /// Seed for the random cases and the Monte Carlo streams.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Random (measure, ball) cases on top of the fixed ones.
    #[arg(long, default_value_t = 20)]
    pub random: usize,
    /// Output CSV (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

struct Case {
    id: String,
    example: usize,
    ball: Ball,
}

fn support_point(m: &Measure, rng: &mut ChaCha8Rng) -> Point {
    let masses = m.component_masses();
    let mut pick = rng.random::<f64>() * masses.iter().sum::<f64>();
    let mut k = 0;
    while k + 1 < masses.len() && pick >= masses[k] {
        pick -= masses[k];
        k += 1;
    }
    let t = rng.random::<f64>();
    match m.components() {
        Components::Segments(s) => Point::R2(s[k].at(t)),
        Components::Intervals(iv) => Point::line(iv[k].lo + t * (iv[k].hi - iv[k].lo)),
    }
}

pub fn compare(args: &CompareArgs) -> Result<()> {
    let ids = ["k-dependence", "crossed-squares", "no-mode", "two-line-gaussian"];
    let measures = ids
        .iter()
        .map(|id| Example::from_id(id).and_then(|ex| ex.build()))
        .collect::<smallball::Result<Vec<_>>>()?;
    let ball = |c: Point, r: f64, norm: PNorm| Ball::new(c, r, norm);
    let mut cases = vec![
        (0, ball(Point::plane(-1.0, 0.0), 0.25, PNorm::One)?),
        (0, ball(Point::plane(-1.0, 0.0), 0.25, PNorm::Infinity)?),
        (0, ball(Point::plane(1.0, 0.0), 0.25, PNorm::One)?),
        (0, ball(Point::plane(1.0, 0.0), 0.25, PNorm::Infinity)?),
        (1, ball(CrossedSquaresParams::center(2), 0.15, PNorm::Infinity)?),
        (2, ball(Point::line(1.0), 0.1, PNorm::Two)?),
        (3, ball(Point::plane(1.0, 0.5), 0.75, PNorm::Two)?),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    for _ in 0..args.random {
        let k = rng.random_range(0..measures.len());
        let c = support_point(&measures[k], &mut rng);
        let norm = PNorm::ALL[rng.random_range(0..3)];
        cases.push((k, ball(c, rng.random_range(0.05..1.0), norm)?));
    }
    let cases: Vec<Case> = cases
        .into_iter()
        .map(|(example, ball)| Case {
            id: format!(
                "{}/{}/({})/{}",
                ids[example],
                ball.norm().name(),
                // no commas inside a CSV cell
                ball.center()
                    .coords()
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
                ball.radius()
            ),
            example,
            ball,
        })
        .collect();

    let mut out = String::from("case_id,exact,mc_estimate,std_error,quadrature,pass_fail\n");
    for (i, case) in cases.iter().enumerate() {
        let m = &measures[case.example];
        let exact = m.ball_mass(&case.ball)?;
        let cfg = McConfig::new(args.samples, args.seed.wrapping_add(i as u64))?;
        let mc = mc_ball_mass(m, &case.ball, &cfg)?;
        let quad = quadrature_ball_mass(m, &case.ball, args.subdivisions)?;
        let pass = (mc.estimate - exact).abs() <= 5.0 * mc.std_error
            && (quad - exact).abs() <= quadrature_error_bound(m, args.subdivisions);
        writeln!(
            out,
            "{},{},{},{},{},{}",
            case.id,
            num(exact),
            num(mc.estimate),
            num(mc.std_error),
            num(quad),
            if pass { "pass" } else { "fail" }
        )
        .unwrap();
    }
    emit(args.out.as_deref(), &out)
}
