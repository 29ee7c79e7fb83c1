//! Small-ball masses and mode classification for measures on R¹ and R².
//!
//! A [`Measure`] is a finite mixture of constant-density line segments (in
//! the plane) or of constant-height intervals (on the line). For such
//! measures the mass of an open ℓ1, ℓ2 or ℓ∞ ball is computed exactly by
//! clipping, which makes it possible to study the ratio
//!
//! ```text
//! f(z, r) / f(u, r),   f(x, r) = μ(x + rK)
//! ```
//!
//! along a shrinking radius schedule and classify a candidate `u` as a
//! strong, E-weak, E-strong or local mode ([`Analysis`]).
//!
//! ```
//! use smallball::{gallery, Analysis, PNorm, Point, RadiusSchedule, Status, TranslationSet, GridSpec};
//!
//! let m = gallery::build_k_dependence().unwrap();
//! let sched = RadiusSchedule::dyadic(0.5, 10, 4).unwrap();
//! let grid = GridSpec::covering(&m, 0.5, 1.0 / 16.0).unwrap();
//! let verdict = Analysis::new(&m, PNorm::One, sched)
//!     .check_strong_mode(&Point::plane(1.0, 0.0), &TranslationSet::from_grid(grid))
//!     .unwrap();
//! assert_eq!(verdict.status, Status::Satisfied);
//! ```
//!
//! The grid sups and the oracles run on rayon when the `parallel` feature is
//! on (the default). Both execution policies give bit-identical results.

pub mod density;
pub mod error;
pub mod exec;
pub mod gallery;
pub mod geometry;
pub mod measure;
pub mod modes;
pub mod oracle;
pub mod schedule;

pub use error::{Error, Result};
pub use exec::Exec;
pub use geometry::{Ball, PNorm, Point, MIN_RADIUS};
pub use measure::{
    ball_mass, segment_clip_length, support_contains, total_mass, Components, IntervalComponent, Measure,
    SegmentComponent,
};
pub use modes::{
    estimate_limit, lsc_probe, Analysis, LimitEstimate, LocalNeighbourhood, Numerator, RatioTrace, Status, TraceRow,
    Verdict, DEFAULT_TOL,
};
pub use schedule::{GridSpec, RadiusSchedule, TranslationSet};
