//! Finite mixtures of constant-density pieces and their exact ball masses.
//!
//! A planar measure is a list of line segments, each carrying a constant
//! density per unit Euclidean length. A measure on the line is a list of
//! disjoint intervals, each carrying a constant Lebesgue density. Every
//! bounded set has finite mass because the lists are finite.

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::geometry::{box_distance_inf, chord_length, interval_overlap, Ball, PNorm, Point};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SegmentComponent {
    pub a: [f64; 2],
    pub b: [f64; 2],
    /// Mass per unit length.
    pub density: f64,
}

impl SegmentComponent {
    pub fn new(a: [f64; 2], b: [f64; 2], density: f64) -> Result<Self> {
        let s = SegmentComponent { a, b, density };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        let finite = self.a.iter().chain(&self.b).all(|c| c.is_finite());
        if !finite {
            return Err(Error::InvalidComponent(format!("non-finite endpoint in {self:?}")));
        }
        if self.a == self.b {
            return Err(Error::InvalidComponent(format!("degenerate segment at {:?}", self.a)));
        }
        if !(self.density.is_finite() && self.density >= 0.0) {
            return Err(Error::InvalidComponent(format!("bad density {}", self.density)));
        }
        Ok(())
    }

    pub fn length(&self) -> f64 {
        (self.b[0] - self.a[0]).hypot(self.b[1] - self.a[1])
    }

    pub fn mass(&self) -> f64 {
        self.density * self.length()
    }

    /// Point at parameter `t ∈ [0, 1]` along the segment.
    pub fn at(&self, t: f64) -> [f64; 2] {
        [
            self.a[0] + t * (self.b[0] - self.a[0]),
            self.a[1] + t * (self.b[1] - self.a[1]),
        ]
    }

    /// Euclidean length of the part of this segment inside the open ball.
    pub fn clip_length(&self, ball: &Ball) -> Result<f64> {
        let c = match ball.center() {
            Point::R2(c) => c,
            p => {
                return Err(Error::DimensionMismatch {
                    expected: 2,
                    found: p.dim(),
                })
            }
        };
        Ok(self.chord(c, ball.radius(), ball.norm()))
    }

    fn chord(&self, c: [f64; 2], r: f64, norm: PNorm) -> f64 {
        chord_length(self.a, self.b, c, r, norm).clamp(0.0, self.length())
    }

    fn bbox(&self) -> ([f64; 2], [f64; 2]) {
        (
            [self.a[0].min(self.b[0]), self.a[1].min(self.b[1])],
            [self.a[0].max(self.b[0]), self.a[1].max(self.b[1])],
        )
    }
}

/// Length of `s ∩ interior(b)`.
pub fn segment_clip_length(s: &SegmentComponent, b: &Ball) -> Result<f64> {
    s.clip_length(b)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntervalComponent {
    pub lo: f64,
    pub hi: f64,
    /// Lebesgue density on `(lo, hi)`.
    pub height: f64,
}

impl IntervalComponent {
    pub fn new(lo: f64, hi: f64, height: f64) -> Result<Self> {
        let c = IntervalComponent { lo, hi, height };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(Error::InvalidComponent(format!(
                "interval needs finite lo < hi, got ({}, {})",
                self.lo, self.hi
            )));
        }
        if !(self.height.is_finite() && self.height >= 0.0) {
            return Err(Error::InvalidComponent(format!("bad height {}", self.height)));
        }
        Ok(())
    }

    pub fn mass(&self) -> f64 {
        self.height * (self.hi - self.lo)
    }

    /// Overlap taken relative to the centre, so a ball inside the piece gets
    /// exactly `2r`.
    fn mass_in(&self, c: f64, r: f64) -> f64 {
        self.height * interval_overlap(self.lo - c, self.hi - c, -r, r)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Components {
    Segments(Vec<SegmentComponent>),
    Intervals(Vec<IntervalComponent>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Measure {
    label: String,
    components: Components,
}

impl Measure {
    pub fn segments(label: impl Into<String>, segments: Vec<SegmentComponent>) -> Result<Self> {
        for s in &segments {
            s.validate()?;
        }
        Ok(Measure {
            label: label.into(),
            components: Components::Segments(segments),
        })
    }

    /// Intervals must be pairwise disjoint up to shared endpoints.
    pub fn intervals(label: impl Into<String>, intervals: Vec<IntervalComponent>) -> Result<Self> {
        for c in &intervals {
            c.validate()?;
        }
        let mut sorted = intervals.clone();
        sorted.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        if let Some(w) = sorted.windows(2).find(|w| w[0].hi > w[1].lo) {
            return Err(Error::InvalidComponent(format!(
                "intervals ({}, {}) and ({}, {}) overlap",
                w[0].lo, w[0].hi, w[1].lo, w[1].hi
            )));
        }
        Ok(Measure {
            label: label.into(),
            components: Components::Intervals(intervals),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn components(&self) -> &Components {
        &self.components
    }

    pub fn dim(&self) -> usize {
        match self.components {
            Components::Segments(_) => 2,
            Components::Intervals(_) => 1,
        }
    }

    pub fn len(&self) -> usize {
        match &self.components {
            Components::Segments(s) => s.len(),
            Components::Intervals(i) => i.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn component_masses(&self) -> Vec<f64> {
        match &self.components {
            Components::Segments(s) => s.iter().map(SegmentComponent::mass).collect(),
            Components::Intervals(i) => i.iter().map(IntervalComponent::mass).collect(),
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.component_masses().iter().sum()
    }

    /// Exact mass of the open ball.
    pub fn ball_mass(&self, ball: &Ball) -> Result<f64> {
        ball.center().expect_dim(self.dim())?;
        Ok(self.mass_unchecked(&ball.center(), ball.radius(), ball.norm()))
    }

    /// `f(center, r)` for every radius in `radii`, in the same order.
    pub fn mass_profile(&self, center: &Point, norm: PNorm, radii: &[f64]) -> Result<Vec<f64>> {
        center.expect_dim(self.dim())?;
        for &r in radii {
            crate::geometry::check_radius(r)?;
        }
        let mut out = vec![0.0; radii.len()];
        self.accumulate_profile(center, norm, radii, &mut out);
        Ok(out)
    }

    /// Profile accumulation without validation; callers check dimensions and
    /// radii up front.
    pub(crate) fn accumulate_profile(&self, center: &Point, norm: PNorm, radii: &[f64], out: &mut [f64]) {
        match (&self.components, center) {
            (Components::Segments(segs), Point::R2(c)) => {
                for s in segs {
                    let (lo, hi) = s.bbox();
                    let gap = box_distance_inf(*c, lo, hi);
                    for (acc, &r) in out.iter_mut().zip(radii) {
                        if gap < r {
                            *acc += s.density * s.chord(*c, r, norm);
                        }
                    }
                }
            }
            (Components::Intervals(ints), Point::R1([c])) => {
                for iv in ints {
                    for (acc, &r) in out.iter_mut().zip(radii) {
                        *acc += iv.mass_in(*c, r);
                    }
                }
            }
            _ => unreachable!("dimension checked by caller"),
        }
    }

    pub(crate) fn mass_unchecked(&self, center: &Point, r: f64, norm: PNorm) -> f64 {
        let mut out = [0.0];
        self.accumulate_profile(center, norm, &[r], &mut out);
        out[0]
    }

    /// Whether `x` has positive mass within `probe_radius` (ℓ∞ ball).
    pub fn support_contains(&self, x: &Point, probe_radius: f64) -> Result<bool> {
        self.support_contains_in(x, probe_radius, PNorm::Infinity)
    }

    pub fn support_contains_in(&self, x: &Point, probe_radius: f64, norm: PNorm) -> Result<bool> {
        let ball = Ball::new(*x, probe_radius, norm)?;
        Ok(self.ball_mass(&ball)? > 0.0)
    }

    /// Lebesgue density at `x` for a measure on the line; zero off the pieces.
    pub fn density_at(&self, x: f64) -> Result<f64> {
        match &self.components {
            Components::Intervals(ints) => Ok(ints
                .iter()
                .find(|iv| iv.lo < x && x < iv.hi)
                .map_or(0.0, |iv| iv.height)),
            Components::Segments(_) => Err(Error::DimensionMismatch { expected: 1, found: 2 }),
        }
    }

    /// Distance from `x` to the nearest breakpoint of a measure on the line.
    pub fn breakpoint_distance(&self, x: f64) -> Result<f64> {
        match &self.components {
            Components::Intervals(ints) => Ok(ints
                .iter()
                .flat_map(|iv| [iv.lo, iv.hi])
                .map(|e| (e - x).abs())
                .fold(f64::INFINITY, f64::min)),
            Components::Segments(_) => Err(Error::DimensionMismatch { expected: 1, found: 2 }),
        }
    }

    /// Axis-aligned bounding box of the support, `None` for an empty measure.
    pub fn bounding_box(&self) -> Option<(Point, Point)> {
        match &self.components {
            Components::Segments(segs) => {
                let mut it = segs.iter().map(SegmentComponent::bbox);
                let first = it.next()?;
                let (lo, hi) = it.fold(first, |(lo, hi), (l, h)| {
                    ([lo[0].min(l[0]), lo[1].min(l[1])], [hi[0].max(h[0]), hi[1].max(h[1])])
                });
                Some((Point::R2(lo), Point::R2(hi)))
            }
            Components::Intervals(ints) => {
                let lo = ints.iter().map(|c| c.lo).reduce(f64::min)?;
                let hi = ints.iter().map(|c| c.hi).reduce(f64::max)?;
                Some((Point::line(lo), Point::line(hi)))
            }
        }
    }

    /// The same measure with every component shifted by `v`.
    pub fn translated(&self, v: &Point) -> Result<Measure> {
        v.expect_dim(self.dim())?;
        let c = v.coords();
        let components = match &self.components {
            Components::Segments(segs) => Components::Segments(
                segs.iter()
                    .map(|s| SegmentComponent {
                        a: [s.a[0] + c[0], s.a[1] + c[1]],
                        b: [s.b[0] + c[0], s.b[1] + c[1]],
                        density: s.density,
                    })
                    .collect(),
            ),
            Components::Intervals(ints) => Components::Intervals(
                ints.iter()
                    .map(|iv| IntervalComponent {
                        lo: iv.lo + c[0],
                        hi: iv.hi + c[0],
                        height: iv.height,
                    })
                    .collect(),
            ),
        };
        Ok(Measure {
            label: self.label.clone(),
            components,
        })
    }

    /// Pushes the measure forward under `x ↦ s·x`, keeping densities per unit
    /// length. Ball masses then scale by `s`.
    pub fn scaled(&self, s: f64) -> Result<Measure> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::InvalidParams(format!("scale factor must be positive, got {s}")));
        }
        let components = match &self.components {
            Components::Segments(segs) => Components::Segments(
                segs.iter()
                    .map(|c| SegmentComponent {
                        a: [c.a[0] * s, c.a[1] * s],
                        b: [c.b[0] * s, c.b[1] * s],
                        density: c.density,
                    })
                    .collect(),
            ),
            Components::Intervals(ints) => Components::Intervals(
                ints.iter()
                    .map(|iv| IntervalComponent {
                        lo: iv.lo * s,
                        hi: iv.hi * s,
                        height: iv.height,
                    })
                    .collect(),
            ),
        };
        Ok(Measure {
            label: self.label.clone(),
            components,
        })
    }

    /// Concatenates the component lists of two measures of equal dimension.
    pub fn concat(&self, other: &Measure) -> Result<Measure> {
        let components = match (&self.components, &other.components) {
            (Components::Segments(a), Components::Segments(b)) => {
                Components::Segments(a.iter().chain(b).copied().collect())
            }
            (Components::Intervals(a), Components::Intervals(b)) => {
                return Measure::intervals(
                    format!("{}+{}", self.label, other.label),
                    a.iter().chain(b).copied().collect(),
                )
            }
            _ => {
                return Err(Error::DimensionMismatch {
                    expected: self.dim(),
                    found: other.dim(),
                })
            }
        };
        Ok(Measure {
            label: format!("{}+{}", self.label, other.label),
            components,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let components = match &self.components {
            Components::Segments(segs) => segs
                .iter()
                .map(|s| {
                    Ok(ComponentOut::Segment {
                        a: [exact(s.a[0])?, exact(s.a[1])?],
                        b: [exact(s.b[0])?, exact(s.b[1])?],
                        density: exact(s.density)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?,
            Components::Intervals(ints) => ints
                .iter()
                .map(|iv| {
                    Ok(ComponentOut::Interval {
                        lo: exact(iv.lo)?,
                        hi: exact(iv.hi)?,
                        height: exact(iv.height)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?,
        };
        let out = MeasureOut {
            dim: self.dim(),
            label: &self.label,
            components,
        };
        Ok(serde_json::to_string_pretty(&out)?)
    }

    pub fn from_json(text: &str) -> Result<Measure> {
        let file: MeasureIn = serde_json::from_str(text)?;
        match file.dim {
            2 => {
                let segs = file
                    .components
                    .into_iter()
                    .map(|c| match c {
                        ComponentIn::Segment { a, b, density } => SegmentComponent::new(a, b, density),
                        ComponentIn::Interval { .. } => {
                            Err(Error::InvalidComponent("interval component in a 2-D measure".into()))
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                Measure::segments(file.label, segs)
            }
            1 => {
                let ints = file
                    .components
                    .into_iter()
                    .map(|c| match c {
                        ComponentIn::Interval { lo, hi, height } => IntervalComponent::new(lo, hi, height),
                        ComponentIn::Segment { .. } => {
                            Err(Error::InvalidComponent("segment component in a 1-D measure".into()))
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                Measure::intervals(file.label, ints)
            }
            d => Err(Error::InvalidParams(format!("dim must be 1 or 2, got {d}"))),
        }
    }
}

/// Free-function form of [`Measure::ball_mass`].
pub fn ball_mass(m: &Measure, b: &Ball) -> Result<f64> {
    m.ball_mass(b)
}

pub fn total_mass(m: &Measure) -> f64 {
    m.total_mass()
}

pub fn support_contains(m: &Measure, x: &Point, probe_radius: f64) -> Result<bool> {
    m.support_contains(x, probe_radius)
}

/// 17 significant digits, enough to round-trip any f64.
fn exact(x: f64) -> Result<Box<RawValue>> {
    Ok(RawValue::from_string(format!("{x:.16e}"))?)
}

#[derive(Serialize)]
struct MeasureOut<'a> {
    dim: usize,
    label: &'a str,
    components: Vec<ComponentOut>,
}

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum ComponentOut {
    Segment {
        a: [Box<RawValue>; 2],
        b: [Box<RawValue>; 2],
        density: Box<RawValue>,
    },
    Interval {
        lo: Box<RawValue>,
        hi: Box<RawValue>,
        height: Box<RawValue>,
    },
}

#[derive(Deserialize)]
struct MeasureIn {
    dim: usize,
    #[serde(default)]
    label: String,
    components: Vec<ComponentIn>,
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum ComponentIn {
    Segment { a: [f64; 2], b: [f64; 2], density: f64 },
    Interval { lo: f64, hi: f64, height: f64 },
}
