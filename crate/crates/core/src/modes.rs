//! Ratio traces over shrinking radii and the mode classifications built on
//! them.
//!
//! Every limit `r ↓ 0` is replaced by the last `m` rows of a finite
//! [`RadiusSchedule`] (the tail window). A verdict is *over the sample*: a
//! finite translation set or search grid stands in for `E` or for the whole
//! space, and conclusions about a dense `E` need an analytic argument on top.
//!
//! Tail decision rule for a `≤ 1` condition with tolerance `tol`:
//! Satisfied when every tail ratio is `≤ 1 + tol`; Violated when every tail
//! ratio exceeds `1 + tol`, or at least half of them do; Inconclusive
//! otherwise. The strong and local-mode checks also require every tail ratio
//! to be `≥ 1 − tol` before reporting Satisfied.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{check_radius, PNorm, Point};
use crate::measure::Measure;
use crate::schedule::{RadiusSchedule, TranslationSet};

/// Default tolerance for the `≤ 1` thresholds.
pub const DEFAULT_TOL: f64 = 1e-6;

/// Grid points per work chunk in the sup kernels.
const GRID_CHUNK: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Satisfied,
    Violated,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Satisfied => "Satisfied",
            Status::Violated => "Violated",
            Status::Inconclusive => "Inconclusive",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TraceRow {
    pub r: f64,
    pub f_num: f64,
    pub f_den: f64,
    pub ratio: f64,
}

/// What the numerator of a trace measures.
#[derive(Clone, Debug, PartialEq)]
pub enum Numerator {
    /// `f(z, r)` at a fixed point `z`.
    Point(Point),
    /// `sup f(z, r)` over a named finite set of `size` points.
    SupOverSet { name: String, size: usize },
}

/// Rows `(r, f_num, f_den = f(u, r), f_num / f_den)` in schedule order.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioTrace {
    pub u: Point,
    pub numerator: Numerator,
    pub rows: Vec<TraceRow>,
}

impl RatioTrace {
    fn new(u: Point, numerator: Numerator, radii: &[f64], num: &[f64], den: &[f64]) -> Self {
        let rows = radii
            .iter()
            .zip(num.iter().zip(den))
            .map(|(&r, (&f_num, &f_den))| TraceRow {
                r,
                f_num,
                f_den,
                ratio: f_num / f_den,
            })
            .collect();
        RatioTrace { u, numerator, rows }
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.rows.iter().map(|row| row.ratio).collect()
    }

    pub fn tail(&self, window: usize) -> Result<&[TraceRow]> {
        if window == 0 || window > self.rows.len() {
            return Err(Error::TraceTooShort {
                len: self.rows.len(),
                window,
            });
        }
        Ok(&self.rows[self.rows.len() - window..])
    }

    /// CSV with header `r,f_num,f_den,ratio`, 15 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,f_num,f_den,ratio\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{:.14e},{:.14e},{:.14e},{:.14e}\n",
                row.r, row.f_num, row.f_den, row.ratio
            ));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LimitEstimate {
    /// Mean of the tail ratios.
    pub limit: f64,
    pub limsup: f64,
    pub liminf: f64,
    /// Outcome of the `≤ 1 + tol` test on the tail.
    pub status: Status,
}

/// Tail estimates of `lim`, `limsup` and `liminf` from the last
/// `tail_window` rows.
pub fn estimate_limit(trace: &RatioTrace, tail_window: usize, tol: f64) -> Result<LimitEstimate> {
    let tail: Vec<f64> = trace.tail(tail_window)?.iter().map(|row| row.ratio).collect();
    Ok(estimate_tail(&tail, tol))
}

fn estimate_tail(tail: &[f64], tol: f64) -> LimitEstimate {
    let limsup = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let liminf = tail.iter().copied().fold(f64::INFINITY, f64::min);
    let limit = tail.iter().sum::<f64>() / tail.len() as f64;
    LimitEstimate {
        limit,
        limsup,
        liminf,
        status: upper_status(tail, tol),
    }
}

fn upper_status(tail: &[f64], tol: f64) -> Status {
    let above = tail.iter().filter(|&&q| q > 1.0 + tol).count();
    if above == 0 {
        Status::Satisfied
    } else if 2 * above >= tail.len() {
        Status::Violated
    } else {
        Status::Inconclusive
    }
}

fn two_sided_status(tail: &[f64], tol: f64) -> Status {
    match upper_status(tail, tol) {
        Status::Satisfied if tail.iter().all(|&q| q >= 1.0 - tol) => Status::Satisfied,
        Status::Satisfied => Status::Inconclusive,
        other => other,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub status: Status,
    pub limsup_est: f64,
    pub liminf_est: f64,
    pub limit_est: f64,
    pub tol: f64,
    /// The translate `v` behind the worst ratio, when one is identifiable.
    pub worst_translate: Option<Point>,
    pub evidence: Vec<RatioTrace>,
}

impl Verdict {
    pub fn to_json(&self, trace_file: Option<&str>) -> Result<String> {
        #[derive(Serialize)]
        struct Out<'a> {
            status: Status,
            limsup_est: f64,
            liminf_est: f64,
            tol: f64,
            worst_translate: Option<Point>,
            trace_file: Option<&'a str>,
        }
        Ok(serde_json::to_string_pretty(&Out {
            status: self.status,
            limsup_est: self.limsup_est,
            liminf_est: self.liminf_est,
            tol: self.tol,
            worst_translate: self.worst_translate,
            trace_file,
        })?)
    }
}

/// Localizing neighbourhood `V = B_norm(0, radius)` for local modes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalNeighbourhood {
    pub norm: PNorm,
    pub radius: f64,
}

/// A measure, a ball shape, a radius schedule and a tolerance: everything the
/// classifications share.
#[derive(Clone, Debug)]
pub struct Analysis<'a> {
    measure: &'a Measure,
    norm: PNorm,
    schedule: RadiusSchedule,
    tol: f64,
    exec: Exec,
}

impl<'a> Analysis<'a> {
    pub fn new(measure: &'a Measure, norm: PNorm, schedule: RadiusSchedule) -> Self {
        Analysis {
            measure,
            norm,
            schedule,
            tol: DEFAULT_TOL,
            exec: Exec::default(),
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Result<Self> {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::InvalidParams(format!("tolerance must be positive, got {tol}")));
        }
        self.tol = tol;
        Ok(self)
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn measure(&self) -> &Measure {
        self.measure
    }

    pub fn norm(&self) -> PNorm {
        self.norm
    }

    pub fn schedule(&self) -> &RadiusSchedule {
        &self.schedule
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    fn radii(&self) -> &[f64] {
        self.schedule.radii()
    }

    fn tail_len(&self) -> usize {
        self.schedule.tail_window()
    }

    fn profile(&self, z: &Point) -> Vec<f64> {
        let mut out = vec![0.0; self.radii().len()];
        self.measure.accumulate_profile(z, self.norm, self.radii(), &mut out);
        out
    }

    /// `f(u, r)` on the schedule; fails unless every value is positive.
    fn denominator(&self, u: &Point) -> Result<Vec<f64>> {
        u.expect_dim(self.measure.dim())?;
        let probe = self.schedule.min_radius();
        if !self.measure.support_contains_in(u, probe, self.norm)? {
            return Err(Error::NotInSupport {
                point: *u,
                radius: probe,
            });
        }
        let den = self.profile(u);
        if let Some((&r, _)) = self.radii().iter().zip(&den).find(|(_, f)| **f <= 0.0) {
            return Err(Error::NotInSupport { point: *u, radius: r });
        }
        Ok(den)
    }

    fn check_points(&self, points: &[Point]) -> Result<()> {
        for p in points {
            p.expect_dim(self.measure.dim())?;
        }
        Ok(())
    }

    /// Per-radius maximum of `f(z, r)` over `points`, with the index of the
    /// first maximizer.
    fn sup_profile(&self, points: &[Point]) -> Vec<(f64, usize)> {
        let k = self.radii().len();
        let parts = self.exec.chunks(points.len(), GRID_CHUNK, |range| {
            let mut best = vec![(f64::NEG_INFINITY, usize::MAX); k];
            let mut buf = vec![0.0; k];
            for i in range {
                buf.fill(0.0);
                self.measure
                    .accumulate_profile(&points[i], self.norm, self.radii(), &mut buf);
                for (b, &f) in best.iter_mut().zip(&buf) {
                    if f > b.0 {
                        *b = (f, i);
                    }
                }
            }
            best
        });
        let mut best = vec![(f64::NEG_INFINITY, usize::MAX); k];
        for part in parts {
            for (b, p) in best.iter_mut().zip(part) {
                if p.0 > b.0 {
                    *b = p;
                }
            }
        }
        best
    }

    /// Trace of `f(z, r) / f(u, r)`.
    pub fn ratio_trace(&self, u: &Point, z: &Point) -> Result<RatioTrace> {
        z.expect_dim(self.measure.dim())?;
        let den = self.denominator(u)?;
        let num = self.profile(z);
        Ok(RatioTrace::new(*u, Numerator::Point(*z), self.radii(), &num, &den))
    }

    /// Sup-over-set trace and the translate `u − z*` of the tail maximizer.
    fn sup_trace(&self, u: &Point, den: &[f64], points: &[Point], name: &str) -> (RatioTrace, Point) {
        let sup = self.sup_profile(points);
        let num: Vec<f64> = sup.iter().map(|s| s.0).collect();
        let trace = RatioTrace::new(
            *u,
            Numerator::SupOverSet {
                name: name.to_string(),
                size: points.len(),
            },
            self.radii(),
            &num,
            den,
        );
        let tail_start = trace.rows.len() - self.tail_len();
        let worst_row = (tail_start..trace.rows.len()).fold(tail_start, |best, j| {
            if trace.rows[j].ratio > trace.rows[best].ratio {
                j
            } else {
                best
            }
        });
        let z = points[sup[worst_row].1];
        (trace, *u - z)
    }

    /// E-weak mode: every sampled `v` has tail limsup of
    /// `f(u − v, r) / f(u, r)` at most `1 + tol`.
    pub fn check_weak_mode(&self, u: &Point, e: &TranslationSet) -> Result<Verdict> {
        let den = self.denominator(u)?;
        let vs = e.materialize(self.measure.dim())?;
        let tail = self.tail_len();
        let tol = self.tol;
        let estimates = self.exec.map(&vs, |v| {
            let num = self.profile(&(*u - *v));
            let ratios: Vec<f64> = num.iter().zip(&den).map(|(n, d)| n / d).collect();
            estimate_tail(&ratios[ratios.len() - tail..], tol)
        });
        let worst = (0..vs.len()).fold(0, |best, i| {
            if estimates[i].limsup > estimates[best].limsup {
                i
            } else {
                best
            }
        });
        let status = if estimates.iter().any(|e| e.status == Status::Violated) {
            Status::Violated
        } else if estimates.iter().all(|e| e.status == Status::Satisfied) {
            Status::Satisfied
        } else {
            Status::Inconclusive
        };
        let v = vs[worst];
        let num = self.profile(&(*u - v));
        let trace = RatioTrace::new(*u, Numerator::Point(*u - v), self.radii(), &num, &den);
        let est = estimates[worst];
        Ok(Verdict {
            status,
            limsup_est: est.limsup,
            liminf_est: est.liminf,
            limit_est: est.limit,
            tol,
            worst_translate: Some(v),
            evidence: vec![trace],
        })
    }

    fn sup_verdict(&self, u: &Point, points: &[Point], name: &str, two_sided: bool) -> Result<Verdict> {
        let den = self.denominator(u)?;
        let (trace, worst) = self.sup_trace(u, &den, points, name);
        let ratios = trace.ratios();
        let tail = &ratios[ratios.len() - self.tail_len()..];
        let est = estimate_tail(tail, self.tol);
        let status = if two_sided {
            two_sided_status(tail, self.tol)
        } else {
            est.status
        };
        Ok(Verdict {
            status,
            limsup_est: est.limsup,
            liminf_est: est.liminf,
            limit_est: est.limit,
            tol: self.tol,
            worst_translate: Some(worst),
            evidence: vec![trace],
        })
    }

    fn grid_points(&self, grid: &TranslationSet) -> Result<Vec<Point>> {
        match grid.materialize(self.measure.dim()) {
            Err(Error::EmptySet) => Err(Error::EmptyGrid),
            other => other,
        }
    }

    /// Strong mode: `sup_z f(z, r) / f(u, r) → 1`, the sup taken over the
    /// search grid.
    pub fn check_strong_mode(&self, u: &Point, search_grid: &TranslationSet) -> Result<Verdict> {
        let points = self.grid_points(search_grid)?;
        self.sup_verdict(u, &points, "grid", true)
    }

    /// E-strong mode: tail limsup of `sup_{v ∈ E} f(u − v, r) / f(u, r)` at
    /// most `1 + tol`.
    pub fn check_e_strong_mode(&self, u: &Point, e: &TranslationSet) -> Result<Verdict> {
        u.expect_dim(self.measure.dim())?;
        let vs = e.materialize(self.measure.dim())?;
        let zs: Vec<Point> = vs.iter().map(|v| *u - *v).collect();
        self.sup_verdict(u, &zs, "u-E", false)
    }

    /// Local strong mode with respect to `V`: the sup only sees grid points
    /// `z` with `‖z − u‖ < V.radius` in `V.norm`.
    pub fn check_local_mode(&self, u: &Point, v: LocalNeighbourhood, search_grid: &TranslationSet) -> Result<Verdict> {
        check_radius(v.radius)?;
        u.expect_dim(self.measure.dim())?;
        let points: Vec<Point> = self
            .grid_points(search_grid)?
            .into_iter()
            .filter(|z| u.distance(z, v.norm) < v.radius)
            .collect();
        if points.is_empty() {
            return Err(Error::EmptyGrid);
        }
        self.sup_verdict(u, &points, "grid∩(u−V)", true)
    }

    /// Uniformity: for every scheduled `r < r_star` and every sampled `v`,
    /// `f(u − v*, r) ≥ f(u − v, r) − tol · f(u, r)`.
    ///
    /// The estimates report the largest and smallest normalized shortfall
    /// `(sup_v f(u − v, r) − f(u − v*, r)) / f(u, r)` over those radii.
    pub fn check_uniformity(&self, u: &Point, v_star: &Point, e: &TranslationSet, r_star: f64) -> Result<Verdict> {
        if !(r_star > 0.0 && r_star < 1.0) {
            return Err(Error::InvalidParams(format!("r_star must lie in (0, 1), got {r_star}")));
        }
        let den = self.denominator(u)?;
        let vs = e.materialize(self.measure.dim())?;
        if !vs.contains(v_star) {
            return Err(Error::InvalidParams(format!("v_star {v_star} is not in the E-sample")));
        }
        let zs: Vec<Point> = vs.iter().map(|v| *u - *v).collect();
        let sup = self.sup_profile(&zs);
        let star = self.profile(&(*u - *v_star));
        let rows: Vec<usize> = (0..self.radii().len()).filter(|&j| self.radii()[j] < r_star).collect();
        if rows.is_empty() {
            return Err(Error::InvalidSchedule(format!(
                "no scheduled radius below r_star = {r_star}"
            )));
        }
        let shortfall: Vec<f64> = rows.iter().map(|&j| (sup[j].0 - star[j]) / den[j]).collect();
        let worst = rows
            .iter()
            .zip(&shortfall)
            .fold((rows[0], shortfall[0]), |b, (&j, &s)| if s > b.1 { (j, s) } else { b });
        let status = if shortfall.iter().all(|&s| s <= self.tol) {
            Status::Satisfied
        } else {
            Status::Violated
        };
        let num_sup: Vec<f64> = sup.iter().map(|s| s.0).collect();
        let evidence = vec![
            RatioTrace::new(*u, Numerator::Point(*u - *v_star), self.radii(), &star, &den),
            RatioTrace::new(
                *u,
                Numerator::SupOverSet {
                    name: "u-E".into(),
                    size: zs.len(),
                },
                self.radii(),
                &num_sup,
                &den,
            ),
        ];
        Ok(Verdict {
            status,
            limsup_est: worst.1,
            liminf_est: shortfall.iter().copied().fold(f64::INFINITY, f64::min),
            limit_est: shortfall.iter().sum::<f64>() / shortfall.len() as f64,
            tol: self.tol,
            worst_translate: Some(vs[sup[worst.0].1]),
            evidence,
        })
    }

    /// Coincident limiting ratios: tail limsup and liminf of the sup over
    /// `u − E` agree with those of the sup over the grid, within `tol`.
    ///
    /// The estimates report the grid-minus-E gap of the tail limsup and liminf.
    pub fn check_clr(&self, u: &Point, e: &TranslationSet, search_grid: &TranslationSet) -> Result<Verdict> {
        let den = self.denominator(u)?;
        let vs = e.materialize(self.measure.dim())?;
        let zs: Vec<Point> = vs.iter().map(|v| *u - *v).collect();
        let grid = self.grid_points(search_grid)?;
        self.check_points(&grid)?;
        let (e_trace, _) = self.sup_trace(u, &den, &zs, "u-E");
        let (g_trace, worst) = self.sup_trace(u, &den, &grid, "grid");
        let tail = self.tail_len();
        let e_est = estimate_limit(&e_trace, tail, self.tol)?;
        let g_est = estimate_limit(&g_trace, tail, self.tol)?;
        let sup_gap = g_est.limsup - e_est.limsup;
        let inf_gap = g_est.liminf - e_est.liminf;
        let status = if sup_gap.abs() <= self.tol && inf_gap.abs() <= self.tol {
            Status::Satisfied
        } else {
            Status::Violated
        };
        Ok(Verdict {
            status,
            limsup_est: sup_gap.max(inf_gap),
            liminf_est: sup_gap.min(inf_gap),
            limit_est: g_est.limit - e_est.limit,
            tol: self.tol,
            worst_translate: Some(worst),
            evidence: vec![e_trace, g_trace],
        })
    }
}

/// Lower-semicontinuity probe: the last five values of `f(x_n, r)` along the
/// approach sequence are all at least `f(x, r) − tol`.
pub fn lsc_probe(m: &Measure, x: &Point, r: f64, norm: PNorm, approach: &[Point], tol: f64) -> Result<bool> {
    check_radius(r)?;
    x.expect_dim(m.dim())?;
    if approach.is_empty() {
        return Err(Error::InvalidParams("empty approach sequence".into()));
    }
    let at_x = m.mass_unchecked(x, r, norm);
    let tail = &approach[approach.len().saturating_sub(5)..];
    for p in tail {
        p.expect_dim(m.dim())?;
    }
    Ok(tail.iter().all(|p| m.mass_unchecked(p, r, norm) >= at_x - tol))
}
