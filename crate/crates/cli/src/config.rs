//! Run configuration: where the measure comes from, the ball shape, the
//! radius schedule, the E-sample, the search grid and the output paths.
//!
//! A TOML file can supply any of these; flags on the command line win.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use smallball::gallery::{CrossedSquaresParams, Example, NoModeParams};
use smallball::{GridSpec, LocalNeighbourhood, Measure, PNorm, Point, RadiusSchedule, TranslationSet};

use crate::error::{CliError, Result};
use crate::output::read_to_string;

/// Overrides for the gallery constructions' parameters.
#[derive(Clone, Debug, Default, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct GalleryParams {
    /// Square-edge weight α of crossed-squares, in (0, 1).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Number of crosses (crossed-squares) or of pieces (no-mode).
    #[arg(long)]
    pub n: Option<usize>,
    /// Mass decay base a of no-mode.
    #[arg(long)]
    pub a: Option<f64>,
    /// Width decay base b of no-mode.
    #[arg(long)]
    pub b: Option<f64>,
    /// Half the number of cells per line of two-line-gaussian.
    #[arg(long)]
    pub m: Option<usize>,
}

impl GalleryParams {
    fn merged(&self, under: &GalleryParams) -> GalleryParams {
        GalleryParams {
            alpha: self.alpha.or(under.alpha),
            n: self.n.or(under.n),
            a: self.a.or(under.a),
            b: self.b.or(under.b),
            m: self.m.or(under.m),
        }
    }

    pub fn example(&self, id: &str) -> Result<Example> {
        let mut ex = Example::from_id(id).map_err(|_| CliError::UnknownGallery(id.to_string()))?;
        let unused = |what: &str| CliError::Usage(format!("--{what} does not apply to {id}"));
        match &mut ex {
            Example::CrossedSquares(p) => {
                let CrossedSquaresParams { alpha, n_crosses } = p;
                *alpha = self.alpha.unwrap_or(*alpha);
                *n_crosses = self.n.unwrap_or(*n_crosses);
                for (set, name) in [
                    (self.a.is_some(), "a"),
                    (self.b.is_some(), "b"),
                    (self.m.is_some(), "m"),
                ] {
                    if set {
                        return Err(unused(name));
                    }
                }
            }
            Example::NoMode(p) => {
                let NoModeParams { a, b, n_pieces } = p;
                *a = self.a.unwrap_or(*a);
                *b = self.b.unwrap_or(*b);
                *n_pieces = self.n.unwrap_or(*n_pieces);
                for (set, name) in [(self.alpha.is_some(), "alpha"), (self.m.is_some(), "m")] {
                    if set {
                        return Err(unused(name));
                    }
                }
            }
            Example::KDependence => {
                if self.alpha.is_some() || self.n.is_some() || self.a.is_some() || self.b.is_some() || self.m.is_some()
                {
                    return Err(CliError::Usage("k-dependence takes no parameters".into()));
                }
            }
            Example::TwoLineGaussian { m_segments } => {
                if let Some(m) = self.m {
                    *m_segments = 2 * m;
                }
                for (set, name) in [
                    (self.alpha.is_some(), "alpha"),
                    (self.n.is_some(), "n"),
                    (self.a.is_some(), "a"),
                    (self.b.is_some(), "b"),
                ] {
                    if set {
                        return Err(unused(name));
                    }
                }
            }
        }
        Ok(ex)
    }
}

/// A measure from a JSON file or from the gallery.
#[derive(Clone, Debug, Default, clap::Args)]
pub struct MeasureArgs {
    /// Measure JSON file.
    #[arg(long, conflicts_with = "gallery")]
    pub measure: Option<PathBuf>,
    /// Gallery id.
    #[arg(long)]
    pub gallery: Option<String>,
    #[command(flatten)]
    pub params: GalleryParams,
}

pub struct LoadedMeasure {
    pub measure: Measure,
    pub example: Option<Example>,
}

pub fn load_measure(file: Option<&Path>, gallery: Option<&str>, params: &GalleryParams) -> Result<LoadedMeasure> {
    match (file, gallery) {
        (Some(path), None) => Ok(LoadedMeasure {
            measure: Measure::from_json(&read_to_string(path)?)?,
            example: None,
        }),
        (None, Some(id)) => {
            let ex = params.example(id)?;
            Ok(LoadedMeasure {
                measure: ex.build()?,
                example: Some(ex),
            })
        }
        (Some(_), Some(_)) => Err(CliError::Usage("give either --measure or --gallery, not both".into())),
        (None, None) => Err(CliError::Usage(
            "a measure is required: --measure <file> or --gallery <id>".into(),
        )),
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ScheduleSpec {
    Dyadic {
        r0: Option<f64>,
        k_max: Option<u32>,
        tail: Option<usize>,
    },
    Band {
        first: Option<u32>,
        last: Option<u32>,
        tail: Option<usize>,
    },
    Custom {
        #[serde(default)]
        radii: Vec<f64>,
        tail: Option<usize>,
    },
}

impl ScheduleSpec {
    pub fn blank(kind: ScheduleKind) -> Self {
        match kind {
            ScheduleKind::Dyadic => ScheduleSpec::Dyadic {
                r0: None,
                k_max: None,
                tail: None,
            },
            ScheduleKind::Band => ScheduleSpec::Band {
                first: None,
                last: None,
                tail: None,
            },
            ScheduleKind::Custom => ScheduleSpec::Custom {
                radii: Vec::new(),
                tail: None,
            },
        }
    }

    fn kind(&self) -> ScheduleKind {
        match self {
            ScheduleSpec::Dyadic { .. } => ScheduleKind::Dyadic,
            ScheduleSpec::Band { .. } => ScheduleKind::Band,
            ScheduleSpec::Custom { .. } => ScheduleKind::Custom,
        }
    }

    pub fn build(&self) -> Result<RadiusSchedule> {
        let tail_or = |tail: Option<usize>, len: usize| tail.unwrap_or(RadiusSchedule::DEFAULT_TAIL.min(len));
        Ok(match self {
            ScheduleSpec::Dyadic { r0, k_max, tail } => {
                let k_max = k_max.unwrap_or(24);
                RadiusSchedule::dyadic(r0.unwrap_or(0.5), k_max, tail_or(*tail, k_max as usize + 1))?
            }
            ScheduleSpec::Band { first, last, tail } => {
                let first = first.unwrap_or(1);
                let last = last.unwrap_or(first + 5);
                RadiusSchedule::band(first, last, tail_or(*tail, (last.saturating_sub(first) + 1) as usize))?
            }
            ScheduleSpec::Custom { radii, tail } => {
                if radii.is_empty() {
                    return Err(CliError::Usage("custom schedule needs --radii".into()));
                }
                RadiusSchedule::new(radii.clone(), tail_or(*tail, radii.len()))?
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ScheduleKind {
    Dyadic,
    Band,
    Custom,
}

/// Schedule flags; each overrides the matching field of the configured
/// schedule.
#[derive(Clone, Debug, Default, clap::Args)]
pub struct ScheduleArgs {
    /// Radius schedule family.
    #[arg(long, value_enum)]
    pub schedule: Option<ScheduleKind>,
    /// Largest dyadic radius.
    #[arg(long)]
    pub r0: Option<f64>,
    /// Dyadic schedule runs r0·2^-k for k = 0..=k_max.
    #[arg(long)]
    pub k_max: Option<u32>,
    /// First band index n (radius 1.25·2^-(n+1)).
    #[arg(long)]
    pub band_first: Option<u32>,
    /// Last band index.
    #[arg(long)]
    pub band_last: Option<u32>,
    /// Comma-separated strictly decreasing radii.
    #[arg(long, value_delimiter = ',')]
    pub radii: Option<Vec<f64>>,
    /// Number of trailing radii used for the limit estimates.
    #[arg(long)]
    pub tail: Option<usize>,
}

impl ScheduleArgs {
    fn apply(&self, base: Option<ScheduleSpec>) -> Result<ScheduleSpec> {
        let mut spec = base.unwrap_or_else(|| ScheduleSpec::blank(ScheduleKind::Dyadic));
        if let Some(kind) = self.schedule {
            if kind != spec.kind() {
                spec = ScheduleSpec::blank(kind);
            }
        }
        let kind = spec.kind();
        let misplaced = |flag: &str| CliError::Usage(format!("--{flag} does not apply to a {kind:?} schedule"));
        match &mut spec {
            ScheduleSpec::Dyadic { r0, k_max, tail } => {
                if self.band_first.is_some() || self.band_last.is_some() {
                    return Err(misplaced("band-first/--band-last"));
                }
                if self.radii.is_some() {
                    return Err(misplaced("radii"));
                }
                *r0 = self.r0.or(*r0);
                *k_max = self.k_max.or(*k_max);
                *tail = self.tail.or(*tail);
            }
            ScheduleSpec::Band { first, last, tail } => {
                if self.r0.is_some() || self.k_max.is_some() {
                    return Err(misplaced("r0/--k-max"));
                }
                if self.radii.is_some() {
                    return Err(misplaced("radii"));
                }
                *first = self.band_first.or(*first);
                *last = self.band_last.or(*last);
                *tail = self.tail.or(*tail);
            }
            ScheduleSpec::Custom { radii, tail } => {
                if self.r0.is_some() || self.k_max.is_some() || self.band_first.is_some() || self.band_last.is_some() {
                    return Err(misplaced("r0/--k-max/--band-first/--band-last"));
                }
                if let Some(r) = &self.radii {
                    *radii = r.clone();
                }
                *tail = self.tail.or(*tail);
            }
        }
        Ok(spec)
    }
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub spacing: Option<f64>,
    pub lo: Option<Point>,
    pub hi: Option<Point>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LocalConfig {
    pub norm: Option<PNorm>,
    pub radius: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub verdict: Option<PathBuf>,
    pub trace: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

/// Everything a classification run needs, as read from a TOML file.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub measure: Option<PathBuf>,
    pub gallery: Option<String>,
    #[serde(default)]
    pub params: GalleryParams,
    pub norm: Option<PNorm>,
    pub u: Option<Point>,
    pub tol: Option<f64>,
    pub schedule: Option<ScheduleSpec>,
    /// `"gallery"`, `"grid"` or a `;`-separated list of points.
    pub e: Option<String>,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub local: LocalConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = read_to_string(path)?;
        let mut cfg: RunConfig = toml::from_str(&text).map_err(|source| CliError::Toml {
            path: path.to_path_buf(),
            source,
        })?;
        // relative paths in the file are relative to the file
        let base = path.parent().unwrap_or(Path::new("."));
        let rebase = |p: &mut Option<PathBuf>| {
            if let Some(q) = p.as_mut() {
                if q.is_relative() {
                    *q = base.join(&*q);
                }
            }
        };
        rebase(&mut cfg.measure);
        rebase(&mut cfg.output.verdict);
        rebase(&mut cfg.output.trace);
        rebase(&mut cfg.output.svg);
        Ok(cfg)
    }
}

/// Classification flags, all optional so a config file can fill them in.
#[derive(Clone, Debug, Default, clap::Args)]
pub struct RunArgs {
    /// TOML run configuration; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub source: MeasureArgs,
    /// Candidate point, `x` or `x,y`.
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<Point>,
    /// Ball shape: l1, l2 or linf.
    #[arg(long)]
    pub norm: Option<PNorm>,
    /// Tolerance for the `≤ 1` thresholds.
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
    /// E-sample: `gallery`, `grid`, or points `x,y;x,y;...`.
    #[arg(long, allow_hyphen_values = true)]
    pub e: Option<String>,
    /// Search-grid spacing.
    #[arg(long)]
    pub grid_spacing: Option<f64>,
    /// Lower corner of the search grid.
    #[arg(long, allow_hyphen_values = true)]
    pub grid_lo: Option<Point>,
    /// Upper corner of the search grid.
    #[arg(long, allow_hyphen_values = true)]
    pub grid_hi: Option<Point>,
    /// Norm of the localizing neighbourhood V (local modes; default: --norm).
    #[arg(long)]
    pub v_norm: Option<PNorm>,
    /// Radius of the localizing neighbourhood V (local modes).
    #[arg(long)]
    pub v_radius: Option<f64>,
    /// Also write the verdict JSON here.
    #[arg(long)]
    pub verdict: Option<PathBuf>,
    /// Write the evidence trace CSV here.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Write a ratio-vs-radius SVG here.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

pub enum ESpec {
    Gallery,
    Grid,
    Points(Vec<Point>),
}

impl std::str::FromStr for ESpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "gallery" => Ok(ESpec::Gallery),
            "grid" => Ok(ESpec::Grid),
            list => Ok(ESpec::Points(
                list.split(';')
                    .filter(|p| !p.trim().is_empty())
                    .map(|p| p.parse::<Point>())
                    .collect::<smallball::Result<Vec<_>>>()?,
            )),
        }
    }
}

/// A fully resolved run.
pub struct Run {
    pub loaded: LoadedMeasure,
    pub u: Point,
    pub norm: PNorm,
    pub tol: f64,
    pub schedule: RadiusSchedule,
    e: Option<ESpec>,
    grid: GridConfig,
    pub local: Option<LocalNeighbourhood>,
    pub output: OutputConfig,
}

impl RunArgs {
    pub fn resolve(&self) -> Result<Run> {
        let file = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        let (measure_file, gallery) = match (&self.source.measure, &self.source.gallery) {
            (None, None) => (file.measure.clone(), file.gallery.clone()),
            (m, g) => (m.clone(), g.clone()),
        };
        let params = self.source.params.merged(&file.params);
        let loaded = load_measure(measure_file.as_deref(), gallery.as_deref(), &params)?;
        let u = self
            .u
            .or(file.u)
            .ok_or_else(|| CliError::Usage("a candidate point is required (--u)".into()))?;
        let norm = self.norm.or(file.norm).unwrap_or(PNorm::Two);
        let tol = self.tol.or(file.tol).unwrap_or(smallball::DEFAULT_TOL);
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::Usage(format!("tol must be positive, got {tol}")));
        }
        let schedule = self.schedule.apply(file.schedule.clone())?.build()?;
        let e = self.e.clone().or(file.e.clone()).map(|s| s.parse()).transpose()?;
        let grid = GridConfig {
            spacing: self.grid_spacing.or(file.grid.spacing),
            lo: self.grid_lo.or(file.grid.lo),
            hi: self.grid_hi.or(file.grid.hi),
        };
        let local = match self.v_radius.or(file.local.radius) {
            Some(radius) => Some(LocalNeighbourhood {
                norm: self.v_norm.or(file.local.norm).unwrap_or(norm),
                radius,
            }),
            None => None,
        };
        let output = OutputConfig {
            verdict: self.verdict.clone().or(file.output.verdict),
            trace: self.trace.clone().or(file.output.trace),
            svg: self.svg.clone().or(file.output.svg),
        };
        Ok(Run {
            loaded,
            u,
            norm,
            tol,
            schedule,
            e,
            grid,
            local,
            output,
        })
    }
}

impl Run {
    pub fn measure(&self) -> &Measure {
        &self.loaded.measure
    }

    /// The search grid, with `u` itself added.
    pub fn search_grid(&self) -> Result<TranslationSet> {
        let m = self.measure();
        let spacing = match self.grid.spacing {
            Some(s) => s,
            None => GridSpec::default_spacing(m, &self.schedule)?,
        };
        let spec = match (self.grid.lo, self.grid.hi) {
            (Some(lo), Some(hi)) => GridSpec::new(lo, hi, spacing)?,
            (None, None) => GridSpec::covering(m, self.schedule.max_radius(), spacing)?,
            _ => return Err(CliError::Usage("give both --grid-lo and --grid-hi, or neither".into())),
        };
        Ok(TranslationSet::from_grid(spec).with_points([self.u]))
    }

    /// The E-sample. Without an explicit choice, the gallery's sample when the
    /// construction has one for `u`, else the translates onto the search grid.
    pub fn e_sample(&self) -> Result<TranslationSet> {
        let gallery = || self.loaded.example.as_ref().and_then(|ex| gallery_sample(ex, &self.u));
        let points = match &self.e {
            Some(ESpec::Points(p)) => p.clone(),
            Some(ESpec::Gallery) => gallery()
                .ok_or_else(|| CliError::Usage(format!("no gallery E-sample for this measure at u = {}", self.u)))?,
            Some(ESpec::Grid) => self.grid_translates()?,
            None => match gallery() {
                Some(p) => p,
                None => self.grid_translates()?,
            },
        };
        Ok(TranslationSet::from_points(points))
    }

    fn grid_translates(&self) -> Result<Vec<Point>> {
        let grid = self.search_grid()?.materialize(self.measure().dim())?;
        Ok(grid.into_iter().map(|z| self.u - z).collect())
    }
}

/// The sample each construction is usually probed with at `u`:
///
/// * crossed-squares at a centre `v_k`: translates onto `v_{k+1..k+6}` and
///   onto one point of each local configuration around `v_k`;
/// * no-mode: translates onto every bump centre;
/// * k-dependence and two-line-gaussian: translates onto the two centres `±e₁`.
pub fn gallery_sample(ex: &Example, u: &Point) -> Option<Vec<Point>> {
    match ex {
        Example::CrossedSquares(p) => {
            let k = (0..p.n_crosses).find(|&k| CrossedSquaresParams::center(k) == *u)?;
            let last = (k + 6).min(p.n_crosses - 1);
            let mut vs: Vec<Point> = (k + 1..=last).map(|n| *u - CrossedSquaresParams::center(n)).collect();
            vs.extend(CrossedSquaresParams::case_points(k).iter().map(|z| *u - *z));
            Some(vs)
        }
        Example::NoMode(p) => {
            u.expect_dim(1).ok()?;
            Some((1..=p.n_pieces).map(|n| *u - Point::line(n as f64)).collect())
        }
        Example::KDependence | Example::TwoLineGaussian { .. } => {
            u.expect_dim(2).ok()?;
            Some(vec![*u - Point::plane(1.0, 0.0), *u - Point::plane(-1.0, 0.0)])
        }
    }
}
