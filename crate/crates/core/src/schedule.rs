//! Radius schedules standing in for `r ↓ 0`, and finite samples of
//! translation sets and search grids.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point, MIN_RADIUS};
use crate::measure::Measure;

/// Hard limit on materialized grid size.
pub const GRID_POINT_LIMIT: u128 = 1 << 22;

/// Size target when picking a default spacing.
pub const DEFAULT_GRID_TARGET: u128 = 1 << 18;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusSchedule {
    radii: Vec<f64>,
    tail_window: usize,
}

impl RadiusSchedule {
    pub const DEFAULT_TAIL: usize = 6;

    pub fn new(radii: Vec<f64>, tail_window: usize) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::InvalidSchedule("no radii".into()));
        }
        if let Some(&r) = radii.iter().find(|r| !(r.is_finite() && **r >= MIN_RADIUS)) {
            return Err(Error::InvalidSchedule(format!("radius {r} below {MIN_RADIUS:e}")));
        }
        if radii.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidSchedule("radii must be strictly decreasing".into()));
        }
        if tail_window < 3 || tail_window > radii.len() {
            return Err(Error::InvalidSchedule(format!(
                "tail window {tail_window} must be in 3..={}",
                radii.len()
            )));
        }
        Ok(RadiusSchedule { radii, tail_window })
    }

    /// `r0 · 2^-k` for `k = 0..=k_max`.
    pub fn dyadic(r0: f64, k_max: u32, tail_window: usize) -> Result<Self> {
        Self::geometric(r0, 0.5, k_max as usize + 1, tail_window)
    }

    /// `r0 · factor^k` for `k = 0..count`.
    pub fn geometric(r0: f64, factor: f64, count: usize, tail_window: usize) -> Result<Self> {
        if !(factor > 0.0 && factor < 1.0) {
            return Err(Error::InvalidSchedule(format!("factor {factor} not in (0, 1)")));
        }
        let radii = std::iter::successors(Some(r0), |r| Some(r * factor))
            .take(count)
            .collect();
        Self::new(radii, tail_window)
    }

    /// `1.25 · 2^-(n+1)` for `n` in `first..=last`: one radius inside each
    /// band `(2^-(n+1), 3·2^-(n+2))`.
    pub fn band(first: u32, last: u32, tail_window: usize) -> Result<Self> {
        if first > last {
            return Err(Error::InvalidSchedule(format!("empty band range {first}..={last}")));
        }
        let radii = (first..=last).map(|n| 1.25 * 0.5_f64.powi(n as i32 + 1)).collect();
        Self::new(radii, tail_window)
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn tail_window(&self) -> usize {
        self.tail_window
    }

    pub fn with_tail_window(self, tail_window: usize) -> Result<Self> {
        Self::new(self.radii, tail_window)
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    pub fn max_radius(&self) -> f64 {
        self.radii[0]
    }

    pub fn min_radius(&self) -> f64 {
        self.radii[self.radii.len() - 1]
    }
}

impl Default for RadiusSchedule {
    fn default() -> Self {
        Self::dyadic(0.5, 24, Self::DEFAULT_TAIL).expect("default schedule is valid")
    }
}

/// Lattice `{k · spacing}` restricted to the closed box `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lo: Point,
    pub hi: Point,
    pub spacing: f64,
}

impl GridSpec {
    pub fn new(lo: Point, hi: Point, spacing: f64) -> Result<Self> {
        if lo.dim() != hi.dim() {
            return Err(Error::DimensionMismatch {
                expected: lo.dim(),
                found: hi.dim(),
            });
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::InvalidParams(format!(
                "grid spacing must be positive, got {spacing}"
            )));
        }
        if !(lo.is_finite() && hi.is_finite()) || lo.coords().iter().zip(hi.coords()).any(|(l, h)| l > h) {
            return Err(Error::InvalidParams(format!("bad grid box {lo}..{hi}")));
        }
        Ok(GridSpec { lo, hi, spacing })
    }

    /// Grid over the support bounding box of `m` inflated by `inflate`.
    pub fn covering(m: &Measure, inflate: f64, spacing: f64) -> Result<Self> {
        let (lo, hi) = m.bounding_box().ok_or(Error::EmptyMeasure)?;
        let shift = |p: Point, s: f64| match p {
            Point::R1([x]) => Point::line(x + s),
            Point::R2([x, y]) => Point::plane(x + s, y + s),
        };
        Self::new(shift(lo, -inflate), shift(hi, inflate), spacing)
    }

    /// Spacing `min radius / 4`, coarsened to a power of two when that would
    /// exceed [`DEFAULT_GRID_TARGET`] points over the covering box.
    pub fn default_spacing(m: &Measure, schedule: &RadiusSchedule) -> Result<f64> {
        let fine = schedule.min_radius() / 4.0;
        let probe = Self::covering(m, schedule.max_radius(), fine)?;
        if probe.point_count() <= DEFAULT_GRID_TARGET {
            return Ok(fine);
        }
        let mut spacing = 2f64.powi(fine.log2().ceil() as i32);
        loop {
            let g = Self::covering(m, schedule.max_radius(), spacing)?;
            if g.point_count() <= DEFAULT_GRID_TARGET {
                return Ok(spacing);
            }
            spacing *= 2.0;
        }
    }

    /// The default search grid for `m` under `schedule`.
    pub fn default_for(m: &Measure, schedule: &RadiusSchedule) -> Result<Self> {
        Self::covering(m, schedule.max_radius(), Self::default_spacing(m, schedule)?)
    }

    fn axis(&self, i: usize) -> (i64, i64) {
        let lo = (self.lo.coords()[i] / self.spacing).ceil();
        let hi = (self.hi.coords()[i] / self.spacing).floor();
        (lo as i64, hi as i64)
    }

    pub fn point_count(&self) -> u128 {
        (0..self.lo.dim())
            .map(|i| {
                let (a, b) = self.axis(i);
                (b - a + 1).max(0) as u128
            })
            .product()
    }

    pub fn points(&self) -> Result<Vec<Point>> {
        let count = self.point_count();
        if count > GRID_POINT_LIMIT {
            return Err(Error::GridTooLarge {
                points: count,
                limit: GRID_POINT_LIMIT,
            });
        }
        let s = self.spacing;
        let (x0, x1) = self.axis(0);
        Ok(match self.lo {
            Point::R1(_) => (x0..=x1).map(|i| Point::line(i as f64 * s)).collect(),
            Point::R2(_) => {
                let (y0, y1) = self.axis(1);
                let mut pts = Vec::with_capacity(count as usize);
                for j in y0..=y1 {
                    for i in x0..=x1 {
                        pts.push(Point::plane(i as f64 * s, j as f64 * s));
                    }
                }
                pts
            }
        })
    }
}

/// Finite sample of a translation set `E`: explicit points, an optional
/// lattice, or both.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TranslationSet {
    pub explicit: Vec<Point>,
    pub grid: Option<GridSpec>,
    /// The sample stands in for a topologically dense set.
    #[serde(default)]
    pub dense_intent: bool,
}

impl TranslationSet {
    pub fn from_points(points: Vec<Point>) -> Self {
        TranslationSet {
            explicit: points,
            grid: None,
            dense_intent: false,
        }
    }

    pub fn from_grid(grid: GridSpec) -> Self {
        TranslationSet {
            explicit: Vec::new(),
            grid: Some(grid),
            dense_intent: true,
        }
    }

    pub fn with_points(mut self, points: impl IntoIterator<Item = Point>) -> Self {
        self.explicit.extend(points);
        self
    }

    /// Explicit points first, then the lattice in row-major order.
    pub fn materialize(&self, dim: usize) -> Result<Vec<Point>> {
        let mut out = self.explicit.clone();
        if let Some(g) = &self.grid {
            out.extend(g.points()?);
        }
        if out.is_empty() {
            return Err(Error::EmptySet);
        }
        for p in &out {
            p.expect_dim(dim)?;
            if !p.is_finite() {
                return Err(Error::InvalidParams(format!("non-finite point {p}")));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_validation() {
        assert!(RadiusSchedule::new(vec![0.5, 0.25, 0.125], 3).is_ok());
        assert!(RadiusSchedule::new(vec![0.5, 0.5, 0.125], 3).is_err());
        assert!(RadiusSchedule::new(vec![0.5, 0.25], 3).is_err());
        assert!(RadiusSchedule::new(vec![0.5, 0.25, 1e-13], 3).is_err());
        assert!(RadiusSchedule::new(vec![0.5, 0.25, 0.1, 0.05], 2).is_err());
    }

    #[test]
    fn dyadic_and_band() {
        let d = RadiusSchedule::default();
        assert_eq!(d.len(), 25);
        assert_eq!(d.max_radius(), 0.5);
        assert_eq!(d.min_radius(), 0.5 * 2f64.powi(-24));
        let b = RadiusSchedule::band(1, 6, 3).unwrap();
        for (n, r) in (1..=6).zip(b.radii()) {
            let lo = 2f64.powi(-(n + 1));
            assert!(lo < *r && *r < 3.0 * 2f64.powi(-(n + 2)));
        }
    }

    #[test]
    fn grid_is_origin_aligned() {
        let g = GridSpec::new(Point::plane(-0.3, -0.1), Point::plane(0.3, 0.1), 0.25).unwrap();
        let pts = g.points().unwrap();
        assert_eq!(g.point_count(), 3);
        assert_eq!(
            pts,
            vec![
                Point::plane(-0.25, 0.0),
                Point::plane(0.0, 0.0),
                Point::plane(0.25, 0.0)
            ]
        );
    }

    #[test]
    fn oversized_grid_is_refused() {
        let g = GridSpec::new(Point::plane(-1.0, -1.0), Point::plane(1.0, 1.0), 1e-6).unwrap();
        assert!(matches!(g.points(), Err(Error::GridTooLarge { .. })));
    }

    #[test]
    fn empty_translation_set() {
        assert!(matches!(TranslationSet::default().materialize(2), Err(Error::EmptySet)));
        let e = TranslationSet::from_points(vec![Point::line(0.0)]);
        assert!(e.materialize(2).is_err());
    }
}
