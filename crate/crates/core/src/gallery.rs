//! Parametric constructions with known small-ball behaviour, and their
//! closed-form ball masses.
//!
//! * `crossed-squares`: crosses of length `2^-n` centred at
//!   `v_n = (2 − 2^(1−n), 0)`, each framed by the square `∂B∞(v_n, 2^-(n+1))`.
//!   Cross arms carry density 1 and square edges density `α/2`. Every `v_n` is
//!   an E-weak mode, none is E-strong. The tail beyond `n_crosses` has mass
//!   `(1+α)·2^(2−n_crosses)`.
//! * `no-mode`: step density with a bump of height `(b/a)^n / 2A_N` on
//!   `(n − b^-n, n + b^-n)`, `A_N = Σ_{n≤N} a^-n`. No strong mode. Normalizing
//!   by the truncated `A_N` keeps total mass exactly one.
//! * `k-dependence`: a diagonal cross at `−e₁` and an axis-aligned cross at
//!   `e₁`, unit arms, density 1. Which centre is the strong mode depends on the
//!   ball shape.
//! * `two-line-gaussian`: half a standard normal on each of the lines
//!   `x = ±1`, discretized into constant-density cells over `[−8, 8]`. The
//!   origin lies off the support.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use crate::error::{Error, Result};
use crate::geometry::{PNorm, Point};
use crate::measure::{IntervalComponent, Measure, SegmentComponent};

pub const GALLERY_IDS: [&str; 4] = ["crossed-squares", "no-mode", "k-dependence", "two-line-gaussian"];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossedSquaresParams {
    pub alpha: f64,
    pub n_crosses: usize,
}

impl Default for CrossedSquaresParams {
    fn default() -> Self {
        CrossedSquaresParams {
            alpha: 0.875,
            n_crosses: 12,
        }
    }
}

impl CrossedSquaresParams {
    fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParams(format!(
                "alpha must be in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.n_crosses == 0 || self.n_crosses > 40 {
            return Err(Error::InvalidParams(format!(
                "n_crosses must be in 1..=40, got {}",
                self.n_crosses
            )));
        }
        Ok(())
    }

    /// Centre `v_n`.
    pub fn center(n: usize) -> Point {
        Point::plane(2.0 - 2f64.powi(1 - n as i32), 0.0)
    }

    /// Half side `2^-(n+1)` of square `n`, also the cross arm length.
    pub fn half_side(n: usize) -> f64 {
        2f64.powi(-(n as i32) - 1)
    }

    /// Radius `1.25 · 2^-(n+1)`, inside the band where the whole of cross `n`
    /// and its square are in the ball but nothing else is.
    pub fn band_radius(n: usize) -> f64 {
        1.25 * Self::half_side(n)
    }

    /// `μ_n(X) = (1 + α) 2^-(n−1)`.
    pub fn block_mass(&self, n: usize) -> f64 {
        (1.0 + self.alpha) * 2f64.powi(1 - n as i32)
    }

    /// One representative point of each local configuration around `v_n`:
    /// inside a cross arm, inside a square edge, and where an arm meets an edge.
    pub fn case_points(n: usize) -> [Point; 3] {
        let v = Self::center(n).x();
        let h = Self::half_side(n);
        [
            Point::plane(v + h / 2.0, 0.0),
            Point::plane(v + h, h / 2.0),
            Point::plane(v + h, 0.0),
        ]
    }

    /// Limits of `f(case point, r) / f(v_n, r)` for this construction:
    /// `1/2`, `α/4` and `(1 + α)/4`, reached for `r ≤ 2^-(n+2)`.
    pub fn case_limits(&self) -> [f64; 3] {
        [0.5, self.alpha / 4.0, (1.0 + self.alpha) / 4.0]
    }
}

pub fn build_crossed_squares(p: &CrossedSquaresParams) -> Result<Measure> {
    p.validate()?;
    let mut segs = Vec::with_capacity(6 * p.n_crosses);
    let edge = p.alpha / 2.0;
    for n in 0..p.n_crosses {
        let v = CrossedSquaresParams::center(n).x();
        let h = CrossedSquaresParams::half_side(n);
        let pieces = [
            ([v - h, 0.0], [v + h, 0.0], 1.0),
            ([v, -h], [v, h], 1.0),
            ([v - h, -h], [v + h, -h], edge),
            ([v + h, -h], [v + h, h], edge),
            ([v - h, h], [v + h, h], edge),
            ([v - h, -h], [v - h, h], edge),
        ];
        for (a, b, w) in pieces {
            segs.push(SegmentComponent::new(a, b, w)?);
        }
    }
    Measure::segments(format!("crossed-squares(alpha={}, n={})", p.alpha, p.n_crosses), segs)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoModeParams {
    pub a: f64,
    pub b: f64,
    pub n_pieces: usize,
}

impl Default for NoModeParams {
    fn default() -> Self {
        NoModeParams {
            a: 2.0,
            b: 4.0,
            n_pieces: 16,
        }
    }
}

impl NoModeParams {
    fn validate(&self) -> Result<()> {
        if !(self.a > 1.0 && self.b > self.a && self.b > 2.0 && self.b.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "need 1 < a < b with b > 2, got a = {}, b = {}",
                self.a, self.b
            )));
        }
        if self.n_pieces == 0 {
            return Err(Error::InvalidParams("n_pieces must be positive".into()));
        }
        Ok(())
    }

    /// `A_N = Σ_{n=1..N} a^-n`.
    pub fn normalizer(&self) -> f64 {
        (1..=self.n_pieces).map(|n| self.a.powi(-(n as i32))).sum()
    }

    /// Half-width `b^-n` of piece `n`.
    pub fn half_width(&self, n: usize) -> f64 {
        self.b.powi(-(n as i32))
    }

    pub fn height(&self, n: usize) -> f64 {
        (self.b / self.a).powi(n as i32) / (2.0 * self.normalizer())
    }

    /// Mass `a^-n / A_N` of piece `n`.
    pub fn piece_mass(&self, n: usize) -> f64 {
        self.a.powi(-(n as i32)) / self.normalizer()
    }
}

pub fn build_no_mode_density(p: &NoModeParams) -> Result<Measure> {
    p.validate()?;
    let pieces = (1..=p.n_pieces)
        .map(|n| {
            let w = p.half_width(n);
            IntervalComponent::new(n as f64 - w, n as f64 + w, p.height(n))
        })
        .collect::<Result<Vec<_>>>()?;
    Measure::intervals(format!("no-mode(a={}, b={}, n={})", p.a, p.b, p.n_pieces), pieces)
}

pub fn build_k_dependence() -> Result<Measure> {
    let t = FRAC_1_SQRT_2;
    let segs = vec![
        SegmentComponent::new([-1.0 - t, -t], [-1.0 + t, t], 1.0)?,
        SegmentComponent::new([-1.0 - t, t], [-1.0 + t, -t], 1.0)?,
        SegmentComponent::new([0.0, 0.0], [2.0, 0.0], 1.0)?,
        SegmentComponent::new([1.0, -1.0], [1.0, 1.0], 1.0)?,
    ];
    Measure::segments("k-dependence", segs)
}

pub const GAUSSIAN_HALF_SPAN: f64 = 8.0;

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-x / SQRT_2)
}

pub fn build_two_line_gaussian(m_segments: usize) -> Result<Measure> {
    if m_segments == 0 {
        return Err(Error::InvalidParams("m_segments must be positive".into()));
    }
    let cell = 2.0 * GAUSSIAN_HALF_SPAN / m_segments as f64;
    let edges: Vec<f64> = (0..=m_segments)
        .map(|k| -GAUSSIAN_HALF_SPAN + k as f64 * cell)
        .collect();
    let mut segs = Vec::with_capacity(2 * m_segments);
    for x in [-1.0, 1.0] {
        for w in edges.windows(2) {
            let mass = 0.5 * (normal_cdf(w[1]) - normal_cdf(w[0]));
            segs.push(SegmentComponent::new([x, w[0]], [x, w[1]], mass / (w[1] - w[0]))?);
        }
    }
    Measure::segments(format!("two-line-gaussian(m={m_segments})"), segs)
}

/// A gallery construction with its parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Example {
    CrossedSquares(CrossedSquaresParams),
    NoMode(NoModeParams),
    KDependence,
    TwoLineGaussian { m_segments: usize },
}

impl Example {
    pub const DEFAULT_GAUSSIAN_SEGMENTS: usize = 400;

    /// Default parameters for a gallery id.
    pub fn from_id(id: &str) -> Result<Self> {
        match id {
            "crossed-squares" => Ok(Example::CrossedSquares(CrossedSquaresParams::default())),
            "no-mode" => Ok(Example::NoMode(NoModeParams::default())),
            "k-dependence" => Ok(Example::KDependence),
            "two-line-gaussian" => Ok(Example::TwoLineGaussian {
                m_segments: Self::DEFAULT_GAUSSIAN_SEGMENTS,
            }),
            other => Err(Error::InvalidParams(format!("unknown gallery id {other:?}"))),
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            Example::CrossedSquares(_) => "crossed-squares",
            Example::NoMode(_) => "no-mode",
            Example::KDependence => "k-dependence",
            Example::TwoLineGaussian { .. } => "two-line-gaussian",
        }
    }

    pub fn build(&self) -> Result<Measure> {
        match self {
            Example::CrossedSquares(p) => build_crossed_squares(p),
            Example::NoMode(p) => build_no_mode_density(p),
            Example::KDependence => build_k_dependence(),
            Example::TwoLineGaussian { m_segments } => build_two_line_gaussian(*m_segments),
        }
    }
}

/// Closed-form `f(center, r)` where the construction's case analysis covers
/// `(center, r, norm)`; `None` otherwise.
pub fn expected_mass(example: &Example, center: &Point, r: f64, norm: PNorm) -> Option<f64> {
    if r.is_nan() || r <= 0.0 {
        return None;
    }
    match example {
        Example::KDependence => {
            let &Point::R2([x, y]) = center else { return None };
            if y != 0.0 || r >= 0.5 {
                return None;
            }
            match (x, norm) {
                (-1.0, PNorm::One) => Some(2.0 * SQRT_2 * r),
                (-1.0, PNorm::Infinity) => Some(4.0 * SQRT_2 * r),
                (1.0, PNorm::One | PNorm::Infinity) | (-1.0 | 1.0, PNorm::Two) => Some(4.0 * r),
                _ => None,
            }
        }
        Example::CrossedSquares(p) => {
            let n = (0..p.n_crosses).find(|&n| CrossedSquaresParams::center(n) == *center)?;
            let h = CrossedSquaresParams::half_side(n);
            if r <= h {
                Some(4.0 * r)
            } else if r < 1.5 * h && norm == PNorm::Infinity {
                Some(p.block_mass(n))
            } else {
                None
            }
        }
        Example::NoMode(p) => {
            let &Point::R1([x]) = center else { return None };
            let n = (1..=p.n_pieces).find(|&n| n as f64 == x)?;
            (r <= p.half_width(n)).then(|| 2.0 * r * p.height(n))
        }
        Example::TwoLineGaussian { .. } => (*center == Point::plane(0.0, 0.0) && r <= 1.0).then_some(0.0),
    }
}
