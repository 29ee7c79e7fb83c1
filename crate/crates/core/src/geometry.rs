//! Points, ℓp balls and the clipping kernels behind every ball mass.
//!
//! Balls are open. A segment that only touches the boundary of a ball, or
//! runs along one of its edges, contributes zero length. Axis-aligned and
//! ±45° configurations hit those cases exactly: the direction test in the
//! half-plane clipper is an exact zero comparison, and axis-aligned chords of
//! the Euclidean disk are computed from the perpendicular offset directly.

use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest admissible ball radius.
pub const MIN_RADIUS: f64 = 1e-12;

/// A point of R¹ or R².
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Point {
    R1([f64; 1]),
    R2([f64; 2]),
}

impl Point {
    pub const fn line(x: f64) -> Self {
        Point::R1([x])
    }

    pub const fn plane(x: f64, y: f64) -> Self {
        Point::R2([x, y])
    }

    pub fn dim(&self) -> usize {
        match self {
            Point::R1(_) => 1,
            Point::R2(_) => 2,
        }
    }

    pub fn coords(&self) -> &[f64] {
        match self {
            Point::R1(c) => c,
            Point::R2(c) => c,
        }
    }

    pub fn x(&self) -> f64 {
        self.coords()[0]
    }

    pub fn is_finite(&self) -> bool {
        self.coords().iter().all(|c| c.is_finite())
    }

    /// The origin of the given dimension.
    pub fn zero(dim: usize) -> Self {
        if dim == 1 {
            Point::line(0.0)
        } else {
            Point::plane(0.0, 0.0)
        }
    }

    pub fn expect_dim(&self, dim: usize) -> Result<()> {
        if self.dim() == dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            })
        }
    }

    /// Distance to `other` in the given norm. In one dimension every norm is
    /// the absolute value.
    pub fn distance(&self, other: &Point, norm: PNorm) -> f64 {
        match (self, other) {
            (Point::R1([a]), Point::R1([b])) => (a - b).abs(),
            (Point::R2(a), Point::R2(b)) => norm.length([a[0] - b[0], a[1] - b[1]]),
            _ => f64::NAN,
        }
    }

    fn zip_with(self, rhs: Point, f: impl Fn(f64, f64) -> f64) -> Point {
        match (self, rhs) {
            (Point::R1([a]), Point::R1([b])) => Point::R1([f(a, b)]),
            (Point::R2(a), Point::R2(b)) => Point::R2([f(a[0], b[0]), f(a[1], b[1])]),
            (l, r) => panic!("cannot combine points of dimension {} and {}", l.dim(), r.dim()),
        }
    }
}

/// Panics when the dimensions differ; public entry points validate first.
impl Sub for Point {
    type Output = Point;

    fn sub(self, rhs: Point) -> Point {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Add for Point {
    type Output = Point;

    fn add(self, rhs: Point) -> Point {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::R1([x]) => write!(f, "({x})"),
            Point::R2([x, y]) => write!(f, "({x}, {y})"),
        }
    }
}

impl FromStr for Point {
    type Err = Error;

    /// Parses `x` or `x,y`.
    fn from_str(s: &str) -> Result<Self> {
        let coords = s
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::InvalidParams(format!("bad point {s:?}: {e}")))?;
        let p = match coords[..] {
            [x] => Point::line(x),
            [x, y] => Point::plane(x, y),
            _ => {
                return Err(Error::InvalidParams(format!(
                    "point {s:?} must have 1 or 2 coordinates"
                )))
            }
        };
        if !p.is_finite() {
            return Err(Error::InvalidParams(format!("point {s:?} is not finite")));
        }
        Ok(p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PNorm {
    #[serde(rename = "l1")]
    One,
    #[serde(rename = "l2")]
    Two,
    #[serde(rename = "linf")]
    Infinity,
}

impl PNorm {
    pub const ALL: [PNorm; 3] = [PNorm::One, PNorm::Two, PNorm::Infinity];

    pub fn length(self, v: [f64; 2]) -> f64 {
        match self {
            PNorm::One => v[0].abs() + v[1].abs(),
            PNorm::Two => v[0].hypot(v[1]),
            PNorm::Infinity => v[0].abs().max(v[1].abs()),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PNorm::One => "l1",
            PNorm::Two => "l2",
            PNorm::Infinity => "linf",
        }
    }
}

impl fmt::Display for PNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" | "1" | "one" => Ok(PNorm::One),
            "l2" | "2" | "two" => Ok(PNorm::Two),
            "linf" | "inf" | "infinity" | "max" => Ok(PNorm::Infinity),
            _ => Err(Error::InvalidParams(format!("unknown norm {s:?}"))),
        }
    }
}

/// The open ball `center + radius·K` with `K` the unit ball of `norm`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ball {
    center: Point,
    radius: f64,
    norm: PNorm,
}

impl Ball {
    pub fn new(center: Point, radius: f64, norm: PNorm) -> Result<Self> {
        check_radius(radius)?;
        if !center.is_finite() {
            return Err(Error::InvalidParams(format!("ball center {center} is not finite")));
        }
        Ok(Ball { center, radius, norm })
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn norm(&self) -> PNorm {
        self.norm
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.center.distance(p, self.norm) < self.radius
    }
}

pub(crate) fn check_radius(radius: f64) -> Result<()> {
    if radius.is_finite() && radius >= MIN_RADIUS {
        Ok(())
    } else {
        Err(Error::InvalidRadius {
            radius,
            min: MIN_RADIUS,
        })
    }
}

const LINF_NORMALS: [[f64; 2]; 4] = [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]];
const L1_NORMALS: [[f64; 2]; 4] = [[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]];

/// Length of the part of segment `a`–`b` inside the open ball `B(c, r)`.
pub fn chord_length(a: [f64; 2], b: [f64; 2], c: [f64; 2], r: f64, norm: PNorm) -> f64 {
    match norm {
        PNorm::Infinity => clip_half_planes(a, b, c, r, &LINF_NORMALS),
        PNorm::One => clip_half_planes(a, b, c, r, &L1_NORMALS),
        PNorm::Two => clip_disk(a, b, c, r),
    }
}

/// Clips against `n·(x − c) < r` for each normal `n`.
fn clip_half_planes(a: [f64; 2], b: [f64; 2], c: [f64; 2], r: f64, normals: &[[f64; 2]; 4]) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let p = [a[0] - c[0], a[1] - c[1]];
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for n in normals {
        let g0 = n[0] * p[0] + n[1] * p[1];
        let g1 = n[0] * d[0] + n[1] * d[1];
        if g1 == 0.0 {
            // parallel to this edge: in or out for the whole segment
            if g0 >= r {
                return 0.0;
            }
            continue;
        }
        let t = (r - g0) / g1;
        if g1 > 0.0 {
            hi = hi.min(t);
        } else {
            lo = lo.max(t);
        }
        if lo >= hi {
            return 0.0;
        }
    }
    (hi - lo) * d[0].hypot(d[1])
}

fn clip_disk(a: [f64; 2], b: [f64; 2], c: [f64; 2], r: f64) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    if d[1] == 0.0 {
        return axis_chord(a[0], b[0], c[0], a[1] - c[1], r);
    }
    if d[0] == 0.0 {
        return axis_chord(a[1], b[1], c[1], a[0] - c[0], r);
    }
    let p = [a[0] - c[0], a[1] - c[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let len = len2.sqrt();
    // signed perpendicular offset of the center from the carrier line
    let offset = (d[0] * p[1] - d[1] * p[0]) / len;
    if offset.abs() >= r {
        return 0.0;
    }
    let half = ((r - offset.abs()) * (r + offset.abs())).sqrt() / len;
    let foot = -(d[0] * p[0] + d[1] * p[1]) / len2;
    let lo = (foot - half).max(0.0);
    let hi = (foot + half).min(1.0);
    if hi > lo {
        (hi - lo) * len
    } else {
        0.0
    }
}

/// Chord of an axis-aligned segment spanning `[s0, s1]` (either order) on a
/// line at perpendicular `offset` from a disk centred at `center` on that axis.
fn axis_chord(s0: f64, s1: f64, center: f64, offset: f64, r: f64) -> f64 {
    let h = offset.abs();
    if h >= r {
        return 0.0;
    }
    let w = ((r - h) * (r + h)).sqrt();
    interval_overlap(s0.min(s1), s0.max(s1), center - w, center + w)
}

/// Length of `[lo1, hi1] ∩ [lo2, hi2]`, zero when disjoint.
pub fn interval_overlap(lo1: f64, hi1: f64, lo2: f64, hi2: f64) -> f64 {
    (hi1.min(hi2) - lo1.max(lo2)).max(0.0)
}

/// ℓ∞ distance from `p` to the axis-aligned box `[lo, hi]`, zero inside.
pub(crate) fn box_distance_inf(p: [f64; 2], lo: [f64; 2], hi: [f64; 2]) -> f64 {
    let dx = (lo[0] - p[0]).max(p[0] - hi[0]).max(0.0);
    let dy = (lo[1] - p[1]).max(p[1] - hi[1]).max(0.0);
    dx.max(dy)
}
