//! Reports for the three counterexamples: CSV tables, ratio curves and
//! support plots, plus a verdict table on stdout.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use smallball::gallery::{self, CrossedSquaresParams, NoModeParams};
use smallball::{Analysis, Ball, GridSpec, Measure, PNorm, Point, RadiusSchedule, RatioTrace, Status, TranslationSet};

use crate::config::gallery_sample;
use crate::error::Result;
use crate::output::{num, write_atomic};
use crate::svg::{ratio_chart, support_plot, Series};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Report {
    #[value(name = "example-4.2")]
    CrossedSquares,
    #[value(name = "example-5.2")]
    NoMode,
    #[value(name = "example-5.3")]
    KDependence,
}

struct Writer<'a> {
    dir: &'a Path,
    csv: bool,
    svg: bool,
    written: Vec<PathBuf>,
}

impl Writer<'_> {
    fn csv(&mut self, name: &str, contents: &str) -> Result<()> {
        if self.csv {
            self.put(name, contents)?;
        }
        Ok(())
    }

    fn svg(&mut self, name: &str, contents: impl FnOnce() -> String) -> Result<()> {
        if self.svg {
            self.put(name, &contents())?;
        }
        Ok(())
    }

    fn put(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        write_atomic(&path, contents)?;
        self.written.push(path);
        Ok(())
    }
}

pub fn run(report: Report, dir: &Path, csv: bool, svg: bool) -> Result<()> {
    let mut w = Writer {
        dir,
        csv,
        svg,
        written: Vec::new(),
    };
    let table = match report {
        Report::CrossedSquares => crossed_squares(&mut w)?,
        Report::NoMode => no_mode(&mut w)?,
        Report::KDependence => k_dependence(&mut w)?,
    };
    print!("{table}");
    for p in &w.written {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn series(name: String, trace: &RatioTrace) -> Series {
    Series {
        name,
        points: trace.rows.iter().map(|row| (row.r, row.ratio)).collect(),
    }
}

fn crossed_squares(w: &mut Writer) -> Result<String> {
    let p = CrossedSquaresParams::default();
    let m = gallery::build_crossed_squares(&p)?;
    let mut table = format!("crossed squares, alpha = {}, {} crosses\n\n", p.alpha, p.n_crosses);

    let v0 = CrossedSquaresParams::center(0);
    let mut bands = String::from("n,r,f_vn,f_v0,ratio,in_open_band\n");
    table.push_str("band ratios f(v_n, r) / f(v_0, r) at r = 1.25*2^-(n+1), expected in (1.25, 1+alpha)\n");
    for n in 1..=6 {
        let r = CrossedSquaresParams::band_radius(n);
        let f_n = m.ball_mass(&Ball::new(CrossedSquaresParams::center(n), r, PNorm::Infinity)?)?;
        let f_0 = m.ball_mass(&Ball::new(v0, r, PNorm::Infinity)?)?;
        let q = f_n / f_0;
        let inside = q > 1.25 && q < 1.0 + p.alpha;
        writeln!(bands, "{n},{},{},{},{},{inside}", num(r), num(f_n), num(f_0), num(q)).unwrap();
        writeln!(
            table,
            "  n = {n}: ratio {q:.12} {}",
            if inside { "inside" } else { "OUTSIDE" }
        )
        .unwrap();
    }
    w.csv("bands.csv", &bands)?;

    let r = 2f64.powi(-12);
    let mut cases = String::from("case,x,y,r,ratio,limit\n");
    table.push_str("\ncase-point ratios at v_1, r = 2^-12\n");
    let v1 = CrossedSquaresParams::center(1);
    let f_v = m.ball_mass(&Ball::new(v1, r, PNorm::Infinity)?)?;
    for (i, (z, limit)) in CrossedSquaresParams::case_points(1)
        .iter()
        .zip(p.case_limits())
        .enumerate()
    {
        let q = m.ball_mass(&Ball::new(*z, r, PNorm::Infinity)?)? / f_v;
        writeln!(
            cases,
            "{},{},{},{},{},{}",
            i + 1,
            num(z.x()),
            num(z.coords()[1]),
            num(r),
            num(q),
            num(limit)
        )
        .unwrap();
        writeln!(table, "  case {}: ratio {q:.12} (construction value {limit})", i + 1).unwrap();
    }
    w.csv("cases.csv", &cases)?;

    let weak_sched = RadiusSchedule::dyadic(0.5, 24, RadiusSchedule::DEFAULT_TAIL)?;
    let mut verdicts =
        String::from("center,weak_status,weak_limsup,estrong_status,estrong_limsup,uniformity_violated\n");
    table.push_str("\ncenter  weak         E-strong (limsup)        uniformity violated\n");
    let mut curves = Vec::new();
    let ex = gallery::Example::CrossedSquares(p);
    for k in 0..=5usize {
        let u = CrossedSquaresParams::center(k);
        let vs = gallery_sample(&ex, &u).expect("centres have a sample");
        let e = TranslationSet::from_points(vs.clone());
        let weak = Analysis::new(&m, PNorm::Infinity, weak_sched.clone()).check_weak_mode(&u, &e)?;
        let band = Analysis::new(
            &m,
            PNorm::Infinity,
            RadiusSchedule::band(k as u32 + 1, k as u32 + 6, 6)?,
        );
        let e_strong = band.check_e_strong_mode(&u, &e)?;
        let violated = vs
            .iter()
            .map(|v| {
                band.check_uniformity(&u, v, &e, 0.5)
                    .map(|v| v.status == Status::Violated)
            })
            .collect::<smallball::Result<Vec<_>>>()?;
        let n_violated = violated.iter().filter(|b| **b).count();
        writeln!(
            verdicts,
            "v{k},{},{},{},{},{n_violated}/{}",
            weak.status,
            num(weak.limsup_est),
            e_strong.status,
            num(e_strong.limsup_est),
            violated.len()
        )
        .unwrap();
        writeln!(
            table,
            "v{k}      {:<12} {:<12} ({:.9})  {n_violated}/{}",
            weak.status.to_string(),
            e_strong.status.to_string(),
            e_strong.limsup_est,
            violated.len()
        )
        .unwrap();
        w.csv(&format!("estrong_trace_v{k}.csv"), &e_strong.evidence[0].to_csv())?;
        curves.push(series(format!("v{k}"), &e_strong.evidence[0]));
    }
    w.csv("verdicts.csv", &verdicts)?;
    w.svg("ratios.svg", || {
        ratio_chart("sup over u-E of f(z, r) / f(u, r), band radii", &curves)
    })?;
    w.svg("support.svg", || support_plot("crossed squares", &m))?;
    Ok(table)
}

fn no_mode(w: &mut Writer) -> Result<String> {
    let p = NoModeParams::default();
    let m = gallery::build_no_mode_density(&p)?;
    let a_n = p.normalizer();
    let mut table = format!("no-mode density, a = {}, b = {}, {} pieces\n\n", p.a, p.b, p.n_pieces);

    let mut masses = String::from("n,r,mass,expected\n");
    for n in 1..=8 {
        let r = p.b.powi(-n);
        let f = m.ball_mass(&Ball::new(Point::line(n as f64), r, PNorm::Two)?)?;
        writeln!(masses, "{n},{},{},{}", num(r), num(f), num(p.a.powi(-n) / a_n)).unwrap();
    }
    w.csv("masses.csv", &masses)?;

    let sched = RadiusSchedule::geometric(0.25, 0.25, 12, RadiusSchedule::DEFAULT_TAIL)?;
    let grid = GridSpec::covering(&m, 1.0, 1.0 / 16.0)?;
    let analysis = Analysis::new(&m, PNorm::Two, sched);
    let mut verdicts = String::from("u,witness_r,witness_ratio,b_over_a,strong_status,limsup_est\n");
    table.push_str("u   witness ratio f(u+1, r)/f(u, r) at r = b^-(u+1)   strong mode\n");
    let mut curves = Vec::new();
    for u in 1..=8 {
        let x = u as f64;
        let r = p.b.powi(-(u + 1));
        let ball = |c: f64| Ball::new(Point::line(c), r, PNorm::Two);
        let q = m.ball_mass(&ball(x + 1.0)?)? / m.ball_mass(&ball(x)?)?;
        let v = analysis.check_strong_mode(&Point::line(x), &TranslationSet::from_grid(grid.clone()))?;
        writeln!(
            verdicts,
            "{u},{},{},{},{},{}",
            num(r),
            num(q),
            num(p.b / p.a),
            v.status,
            num(v.limsup_est)
        )
        .unwrap();
        writeln!(
            table,
            "{u}   {q:<14.9} (b/a = {})                        {}",
            p.b / p.a,
            v.status
        )
        .unwrap();
        w.csv(&format!("strong_trace_u{u}.csv"), &v.evidence[0].to_csv())?;
        curves.push(series(format!("u = {u}"), &v.evidence[0]));
    }
    w.csv("verdicts.csv", &verdicts)?;
    w.svg("ratios.svg", || {
        ratio_chart("sup over grid of f(z, r) / f(u, r)", &curves)
    })?;
    w.svg("support.svg", || support_plot("no-mode density", &m))?;
    Ok(table)
}

fn k_dependence(w: &mut Writer) -> Result<String> {
    let m: Measure = gallery::build_k_dependence()?;
    let sched = RadiusSchedule::dyadic(0.5, 18, RadiusSchedule::DEFAULT_TAIL)?;
    let grid = TranslationSet::from_grid(GridSpec::new(
        Point::plane(-2.5, -2.5),
        Point::plane(2.5, 2.5),
        1.0 / 64.0,
    )?);
    let mut table = String::from(
        "k-dependence strong-mode matrix (grid 1/64 on [-2.5, 2.5]^2)\n\ncenter  norm  status        limsup\n",
    );
    let mut verdicts = String::from("center,norm,status,limsup_est,liminf_est\n");
    let mut curves = Vec::new();
    for (name, x) in [("e1", 1.0), ("-e1", -1.0)] {
        for norm in [PNorm::One, PNorm::Infinity] {
            let v = Analysis::new(&m, norm, sched.clone()).check_strong_mode(&Point::plane(x, 0.0), &grid)?;
            writeln!(
                verdicts,
                "{name},{},{},{},{}",
                norm.name(),
                v.status,
                num(v.limsup_est),
                num(v.liminf_est)
            )
            .unwrap();
            writeln!(
                table,
                "{name:<7} {:<5} {:<13} {:.12}",
                norm.name(),
                v.status.to_string(),
                v.limsup_est
            )
            .unwrap();
            w.csv(
                &format!("strong_trace_{name}_{}.csv", norm.name()),
                &v.evidence[0].to_csv(),
            )?;
            curves.push(series(format!("{name}, {}", norm.name()), &v.evidence[0]));
        }
    }
    w.csv("verdicts.csv", &verdicts)?;
    w.svg("ratios.svg", || {
        ratio_chart("sup over grid of f(z, r) / f(u, r)", &curves)
    })?;
    w.svg("support.svg", || support_plot("k-dependence", &m))?;
    Ok(table)
}
