//! Checks that only make sense for measures with a Lebesgue density on the
//! line: `f(u, r) / 2r` tends to the density at `u`, and ball-mass ratios
//! tend to the Radon–Nikodym derivative `g(u − v) / g(u)` of the translate.

use crate::error::{Error, Result};
use crate::geometry::{PNorm, Point};
use crate::measure::Measure;
use crate::modes::{Analysis, Status};
use crate::schedule::{RadiusSchedule, TranslationSet};

fn require_line(m: &Measure) -> Result<()> {
    if m.dim() == 1 {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: 1,
            found: m.dim(),
        })
    }
}

/// Density at `x`, which must sit further than `margin` from every breakpoint.
fn interior_density(m: &Measure, x: f64, margin: f64) -> Result<f64> {
    if m.breakpoint_distance(x)? <= margin {
        return Err(Error::InvalidParams(format!(
            "{x} is within {margin:e} of a density breakpoint"
        )));
    }
    m.density_at(x)
}

fn close(value: f64, expected: f64, tol: f64) -> bool {
    (value - expected).abs() <= tol * expected.abs().max(1.0)
}

/// Whether `f(u, r) / 2r` matches `expected_g_u` on every tail radius, to
/// `tol` relative (absolute below magnitude one).
pub fn lebesgue_ratio_check(
    m: &Measure,
    u: &Point,
    sched: &RadiusSchedule,
    expected_g_u: f64,
    tol: f64,
) -> Result<bool> {
    require_line(m)?;
    u.expect_dim(1)?;
    let g = interior_density(m, u.x(), sched.max_radius())?;
    if g <= 0.0 {
        return Err(Error::NotInSupport {
            point: *u,
            radius: sched.min_radius(),
        });
    }
    let tail = &sched.radii()[sched.len() - sched.tail_window()..];
    let masses = m.mass_profile(u, PNorm::Two, tail)?;
    Ok(masses
        .iter()
        .zip(tail)
        .all(|(f, r)| close(f / (2.0 * r), expected_g_u, tol)))
}

/// `g(u − v) / g(u)` from the step heights.
pub fn rn_value(m: &Measure, u: &Point, v: f64, margin: f64) -> Result<f64> {
    require_line(m)?;
    u.expect_dim(1)?;
    let g_u = interior_density(m, u.x(), margin)?;
    if g_u <= 0.0 {
        return Err(Error::NotInSupport {
            point: *u,
            radius: margin,
        });
    }
    let g_shift = interior_density(m, u.x() - v, margin)?;
    Ok(g_shift / g_u)
}

/// Whether the tail of `f(u − v, r) / f(u, r)` equals `g(u − v) / g(u)`.
pub fn rn_limit_check(m: &Measure, u: &Point, v: f64, sched: &RadiusSchedule, tol: f64) -> Result<bool> {
    let expected = rn_value(m, u, v, sched.max_radius())?;
    let analysis = Analysis::new(m, PNorm::Two, sched.clone());
    let trace = analysis.ratio_trace(u, &Point::line(u.x() - v))?;
    Ok(trace
        .tail(sched.tail_window())?
        .iter()
        .all(|row| close(row.ratio, expected, tol)))
}

/// Largest sampled RN value at `u`, provided `u` passes the E-weak check with
/// the same sample. Shifts landing near a breakpoint are skipped.
///
/// Returns `None` when `u` is not a verified weak mode.
pub fn weak_mode_rn_bound(
    m: &Measure,
    u: &Point,
    e: &TranslationSet,
    sched: &RadiusSchedule,
    tol: f64,
) -> Result<Option<f64>> {
    require_line(m)?;
    let verdict = Analysis::new(m, PNorm::Two, sched.clone())
        .with_tol(tol)?
        .check_weak_mode(u, e)?;
    if verdict.status != Status::Satisfied {
        return Ok(None);
    }
    let margin = sched.max_radius();
    let mut best = f64::NEG_INFINITY;
    for v in e.materialize(1)? {
        match rn_value(m, u, v.x(), margin) {
            Ok(q) => best = best.max(q),
            Err(Error::InvalidParams(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(Some(best))
}
