//! Brute-force ball-mass estimators that share nothing with the clipping
//! kernels except the point-in-ball test.
//!
//! The Monte Carlo stream is ChaCha8 seeded with `seed_from_u64(seed)`.
//! Sample `i` consumes exactly two `u64` draws (four 32-bit words) starting at
//! word position `4i`: the first picks a component with probability
//! proportional to its mass, the second a uniform position along it. Any
//! split of the sample range across workers therefore reproduces the
//! single-worker hit count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::{Exec, CHUNK};
use crate::geometry::{Ball, Point};
use crate::measure::{Components, Measure};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McConfig {
    pub n_samples: u64,
    pub seed: u64,
}

impl McConfig {
    pub const MIN_SAMPLES: u64 = 1_000;

    pub fn new(n_samples: u64, seed: u64) -> Result<Self> {
        if n_samples < Self::MIN_SAMPLES {
            return Err(Error::InvalidParams(format!(
                "need at least {} samples, got {n_samples}",
                Self::MIN_SAMPLES
            )));
        }
        Ok(McConfig { n_samples, seed })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub hits: u64,
}

/// Words of the ChaCha stream consumed per sample.
const WORDS_PER_SAMPLE: u128 = 4;

pub fn mc_ball_mass(m: &Measure, b: &Ball, cfg: &McConfig) -> Result<McEstimate> {
    mc_ball_mass_with(m, b, cfg, Exec::default())
}

pub fn mc_ball_mass_with(m: &Measure, b: &Ball, cfg: &McConfig, exec: Exec) -> Result<McEstimate> {
    b.center().expect_dim(m.dim())?;
    let cfg = McConfig::new(cfg.n_samples, cfg.seed)?;
    let cumulative: Vec<f64> = m
        .component_masses()
        .iter()
        .scan(0.0, |acc, w| {
            *acc += w;
            Some(*acc)
        })
        .collect();
    let total = cumulative.last().copied().unwrap_or(0.0);
    if total.is_nan() || total <= 0.0 {
        return Err(Error::EmptyMeasure);
    }
    let n = cfg.n_samples as usize;
    let sample = |rng: &mut ChaCha8Rng| -> Point {
        let pick = rng.random::<f64>() * total;
        let k = cumulative.partition_point(|&c| c <= pick).min(cumulative.len() - 1);
        let t = rng.random::<f64>();
        match m.components() {
            Components::Segments(s) => Point::R2(s[k].at(t)),
            Components::Intervals(iv) => Point::line(iv[k].lo + t * (iv[k].hi - iv[k].lo)),
        }
    };
    let hits: u64 = exec
        .chunks(n, CHUNK, |range| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_word_pos(range.start as u128 * WORDS_PER_SAMPLE);
            range.map(|_| u64::from(b.contains(&sample(&mut rng)))).sum::<u64>()
        })
        .into_iter()
        .sum();
    let p = hits as f64 / cfg.n_samples as f64;
    Ok(McEstimate {
        estimate: total * p,
        std_error: total * (p * (1.0 - p) / cfg.n_samples as f64).sqrt(),
        hits,
    })
}

/// Midpoint rule: each component is cut into `subdivisions` equal pieces and a
/// piece counts in full when its midpoint lies in the ball.
pub fn quadrature_ball_mass(m: &Measure, b: &Ball, subdivisions: usize) -> Result<f64> {
    quadrature_ball_mass_with(m, b, subdivisions, Exec::default())
}

pub fn quadrature_ball_mass_with(m: &Measure, b: &Ball, subdivisions: usize, exec: Exec) -> Result<f64> {
    b.center().expect_dim(m.dim())?;
    if subdivisions == 0 {
        return Err(Error::InvalidParams("subdivisions must be positive".into()));
    }
    let n = subdivisions;
    let chunk = CHUNK * 16;
    let per_component = n.div_ceil(chunk);
    // one work unit per (component, chunk of pieces); counts are integers, so
    // the per-component sums do not depend on how units are scheduled
    let units: Vec<(usize, usize)> = (0..m.len())
        .filter(|&k| !far_from(m, k, b))
        .flat_map(|k| (0..per_component).map(move |c| (k, c)))
        .collect();
    let midpoint = |k: usize, t: f64| match m.components() {
        Components::Segments(s) => Point::R2(s[k].at(t)),
        Components::Intervals(iv) => Point::line(iv[k].lo + t * (iv[k].hi - iv[k].lo)),
    };
    let counts = exec.map(&units, |&(k, c)| {
        (c * chunk..((c + 1) * chunk).min(n))
            .filter(|&j| b.contains(&midpoint(k, (j as f64 + 0.5) / n as f64)))
            .count() as u64
    });
    let mut inside = vec![0u64; m.len()];
    for (&(k, _), count) in units.iter().zip(counts) {
        inside[k] += count;
    }
    let total = m
        .component_masses()
        .iter()
        .zip(&inside)
        .map(|(w, &count)| w * count as f64 / n as f64)
        .sum();
    Ok(total)
}

/// Whether component `k` lies well outside the ℓ∞ hull of the ball, so that no
/// midpoint can land inside. The margin absorbs rounding in the midpoints.
fn far_from(m: &Measure, k: usize, b: &Ball) -> bool {
    let c = b.center();
    let margin = 1e-9 * (1.0 + b.radius());
    let gap = match m.components() {
        Components::Segments(s) => {
            let s = &s[k];
            (0..2)
                .map(|i| {
                    let (lo, hi) = (s.a[i].min(s.b[i]), s.a[i].max(s.b[i]));
                    (lo - c.coords()[i]).max(c.coords()[i] - hi)
                })
                .fold(f64::NEG_INFINITY, f64::max)
        }
        Components::Intervals(iv) => (iv[k].lo - c.x()).max(c.x() - iv[k].hi),
    };
    gap > b.radius() + margin
}

/// `Σ 4 · mass / subdivisions`: a ball is convex, so each component meets its
/// boundary at most twice and each crossing misplaces at most one piece.
pub fn quadrature_error_bound(m: &Measure, subdivisions: usize) -> f64 {
    4.0 * m.total_mass() / subdivisions as f64
}
