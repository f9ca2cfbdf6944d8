//! Flat `section.key = value` experiment configuration.
//!
//! The grammar (documented in `docs/config.md`) is UTF-8 lines of the form
//! `section.key = value` with `#` comments. Unknown keys are errors, so a
//! typo cannot silently fall back to a default. `parse(render(c)) == c`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::floquet::{DrivenModel, Harmonic, HarmonicKind, Perturbation, SpatialProfile};
use crate::grid::{Potential, SpatialGrid};
use crate::spectral::{EpsilonLadder, StaticModel, DEFAULT_DELTA_THR};
use crate::{Error, Result};

/// Named potential family or a samples file.
#[derive(Clone, Debug, PartialEq)]
pub enum PotentialSpec {
    PoschlTeller { depth: f64 },
    GaussianWell { depth: f64, center: f64, width: f64 },
    /// Path to a text file with one sample per line, one per grid point.
    File { path: String },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub half_width: f64,
    pub n_points: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicSpec {
    pub m: u32,
    pub kind: HarmonicKind,
    pub amplitude: f64,
    pub center: f64,
    pub width: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NumericsSpec {
    pub n_max: usize,
    pub epsilon_ladder: Vec<f64>,
    pub delta_thr: f64,
    pub steps_per_period: usize,
    pub stride: usize,
    /// Launch count for the initial-time average; `None` = steps_per_period/4.
    pub n_t0: Option<usize>,
    /// Survival horizon; `None` lets commands pick one from the expected width.
    pub s_max: Option<f64>,
    pub seed: u64,
    /// Box half-width for resolvent boundary values (must comfortably exceed
    /// the propagation box so box levels sit below the smallest epsilon).
    pub resolvent_half_width: f64,
    /// Trial count for genericity sampling.
    pub n_trials: usize,
}

impl Default for NumericsSpec {
    fn default() -> Self {
        Self {
            n_max: 8,
            epsilon_ladder: EpsilonLadder::default().epsilons,
            delta_thr: DEFAULT_DELTA_THR,
            steps_per_period: 32,
            stride: 8,
            n_t0: None,
            s_max: None,
            seed: 0,
            resolvent_half_width: 1040.0,
            n_trials: 100,
        }
    }
}

/// Fully validated experiment description.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub potential: PotentialSpec,
    pub grid: GridSpec,
    pub period: f64,
    pub alphas: Vec<f64>,
    pub harmonics: Vec<HarmonicSpec>,
    pub numerics: NumericsSpec,
    pub output_dir: Option<String>,
}

/// Perturbative range guard on couplings; `|alpha|` beyond this is rejected
/// at parse time because the second-order expansion has no meaning there.
pub const ALPHA_RANGE_BOUND: f64 = 1.0;

fn cfg_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

struct RawConfig {
    // (section, key) -> (line number, value)
    entries: BTreeMap<(String, String), (usize, String)>,
}

impl RawConfig {
    fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw_line) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = match raw_line.split_once('#') {
                Some((before, _)) => before,
                None => raw_line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key_part, value) = line
                .split_once('=')
                .ok_or_else(|| cfg_err(format!("line {lineno}: expected `section.key = value`")))?;
            let key_part = key_part.trim();
            let value = value.trim();
            let (section, key) = key_part.split_once('.').ok_or_else(|| {
                cfg_err(format!(
                    "line {lineno}: key `{key_part}` is not of the form section.key"
                ))
            })?;
            if section.is_empty() || key.is_empty() || key.contains('.') {
                return Err(cfg_err(format!(
                    "line {lineno}: key `{key_part}` is not of the form section.key"
                )));
            }
            if entries
                .insert(
                    (section.to_string(), key.to_string()),
                    (lineno, value.to_string()),
                )
                .is_some()
            {
                return Err(cfg_err(format!("line {lineno}: duplicate key `{key_part}`")));
            }
        }
        Ok(Self { entries })
    }

    fn take(&mut self, section: &str, key: &str) -> Option<String> {
        self.entries
            .remove(&(section.to_string(), key.to_string()))
            .map(|(_, v)| v)
    }

    fn take_f64(&mut self, section: &str, key: &str) -> Result<Option<f64>> {
        self.take(section, key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| cfg_err(format!("{section}.{key}: `{v}` is not a number")))
            })
            .transpose()
    }

    fn take_usize(&mut self, section: &str, key: &str) -> Result<Option<usize>> {
        self.take(section, key)
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|_| cfg_err(format!("{section}.{key}: `{v}` is not a nonnegative integer")))
            })
            .transpose()
    }

    fn take_u64(&mut self, section: &str, key: &str) -> Result<Option<u64>> {
        self.take(section, key)
            .map(|v| {
                v.parse::<u64>()
                    .map_err(|_| cfg_err(format!("{section}.{key}: `{v}` is not an unsigned integer")))
            })
            .transpose()
    }

    fn take_f64_list(&mut self, section: &str, key: &str) -> Result<Option<Vec<f64>>> {
        self.take(section, key)
            .map(|v| {
                v.split(',')
                    .map(|p| {
                        let p = p.trim();
                        p.parse::<f64>()
                            .map_err(|_| cfg_err(format!("{section}.{key}: `{p}` is not a number")))
                    })
                    .collect()
            })
            .transpose()
    }

    fn finish(self) -> Result<()> {
        if let Some(((section, key), (lineno, _))) = self.entries.into_iter().next() {
            return Err(cfg_err(format!(
                "line {lineno}: unknown key `{section}.{key}`"
            )));
        }
        Ok(())
    }
}

fn harmonic_sections(raw: &RawConfig) -> Vec<String> {
    let mut names: Vec<(u32, String)> = raw
        .entries
        .keys()
        .filter_map(|(s, _)| {
            s.strip_prefix("harmonic")
                .and_then(|idx| idx.parse::<u32>().ok())
                .map(|idx| (idx, s.clone()))
        })
        .collect();
    names.sort();
    names.dedup();
    names.into_iter().map(|(_, s)| s).collect()
}

impl ExperimentConfig {
    pub fn parse_str(text: &str) -> Result<Self> {
        let mut raw = RawConfig::parse(text)?;

        let potential = match raw.take("potential", "kind") {
            None => return Err(cfg_err("missing required key: potential.kind")),
            Some(kind) => match kind.as_str() {
                "poschl-teller" => PotentialSpec::PoschlTeller {
                    depth: raw.take_f64("potential", "depth")?.unwrap_or(2.0),
                },
                "gaussian-well" => PotentialSpec::GaussianWell {
                    depth: raw
                        .take_f64("potential", "depth")?
                        .ok_or_else(|| cfg_err("missing required key: potential.depth"))?,
                    center: raw.take_f64("potential", "center")?.unwrap_or(0.0),
                    width: raw
                        .take_f64("potential", "width")?
                        .ok_or_else(|| cfg_err("missing required key: potential.width"))?,
                },
                "file" => PotentialSpec::File {
                    path: raw
                        .take("potential", "file")
                        .ok_or_else(|| cfg_err("missing required key: potential.file"))?,
                },
                other => {
                    return Err(cfg_err(format!(
                        "potential.kind: unknown kind `{other}` (expected poschl-teller, gaussian-well, or file)"
                    )))
                }
            },
        };
        match &potential {
            PotentialSpec::PoschlTeller { depth } | PotentialSpec::GaussianWell { depth, .. }
                if !(*depth > 0.0) =>
            {
                return Err(cfg_err("potential.depth must be positive"));
            }
            PotentialSpec::GaussianWell { width, .. } if !(*width > 0.0) => {
                return Err(cfg_err("potential.width must be positive"));
            }
            _ => {}
        }

        let half_width = raw
            .take_f64("grid", "half_width")?
            .ok_or_else(|| cfg_err("missing required key: grid.half_width"))?;
        let n_points = raw
            .take_usize("grid", "n_points")?
            .ok_or_else(|| cfg_err("missing required key: grid.n_points"))?;
        if !(half_width > 0.0) {
            return Err(cfg_err("grid.half_width must be positive"));
        }
        if n_points < 3 {
            return Err(cfg_err("grid.n_points must be at least 3"));
        }

        let period = raw
            .take_f64("drive", "period")?
            .ok_or_else(|| cfg_err("missing required key: drive.period"))?;
        if !(period > 0.0) {
            return Err(cfg_err("drive.period must be positive"));
        }
        let alphas = raw
            .take_f64_list("drive", "alphas")?
            .ok_or_else(|| cfg_err("missing required key: drive.alphas"))?;
        for &a in &alphas {
            if !a.is_finite() || a.abs() > ALPHA_RANGE_BOUND {
                return Err(cfg_err(format!(
                    "drive.alphas: |alpha| = {} exceeds the perturbative bound {ALPHA_RANGE_BOUND}; \
                     the second-order width formula is only meaningful for weak coupling",
                    a.abs()
                )));
            }
        }

        let sections = harmonic_sections(&raw);
        if sections.is_empty() {
            return Err(cfg_err(
                "missing required key: harmonic1.kind (at least one harmonic section)",
            ));
        }
        let mut harmonics = Vec::new();
        for s in &sections {
            let kind = match raw
                .take(s, "kind")
                .ok_or_else(|| cfg_err(format!("missing required key: {s}.kind")))?
                .as_str()
            {
                "cos" => HarmonicKind::Cos,
                "sin" => HarmonicKind::Sin,
                "static" => HarmonicKind::Static,
                other => {
                    return Err(cfg_err(format!(
                        "{s}.kind: unknown kind `{other}` (expected cos, sin, or static)"
                    )))
                }
            };
            let m = raw.take_usize(s, "m")?.unwrap_or(1) as u32;
            if kind != HarmonicKind::Static && m == 0 {
                return Err(cfg_err(format!("{s}.m must be at least 1 for cos/sin")));
            }
            let amplitude = raw
                .take_f64(s, "amplitude")?
                .ok_or_else(|| cfg_err(format!("missing required key: {s}.amplitude")))?;
            let center = raw.take_f64(s, "center")?.unwrap_or(0.0);
            let width = raw.take_f64(s, "width")?.unwrap_or(1.0);
            if !(width > 0.0) {
                return Err(cfg_err(format!("{s}.width must be positive")));
            }
            harmonics.push(HarmonicSpec {
                m,
                kind,
                amplitude,
                center,
                width,
            });
        }

        let defaults = NumericsSpec::default();
        let numerics = NumericsSpec {
            n_max: raw.take_usize("numerics", "n_max")?.unwrap_or(defaults.n_max),
            epsilon_ladder: raw
                .take_f64_list("numerics", "epsilon_ladder")?
                .unwrap_or(defaults.epsilon_ladder),
            delta_thr: raw
                .take_f64("numerics", "delta_thr")?
                .unwrap_or(defaults.delta_thr),
            steps_per_period: raw
                .take_usize("numerics", "steps_per_period")?
                .unwrap_or(defaults.steps_per_period),
            stride: raw.take_usize("numerics", "stride")?.unwrap_or(defaults.stride),
            n_t0: raw.take_usize("numerics", "n_t0")?,
            s_max: raw.take_f64("numerics", "s_max")?,
            seed: raw.take_u64("numerics", "seed")?.unwrap_or(defaults.seed),
            resolvent_half_width: raw
                .take_f64("numerics", "resolvent_half_width")?
                .unwrap_or(defaults.resolvent_half_width),
            n_trials: raw
                .take_usize("numerics", "n_trials")?
                .unwrap_or(defaults.n_trials),
        };
        if numerics.n_max < 1 {
            return Err(cfg_err("numerics.n_max must be at least 1"));
        }
        EpsilonLadder::new(numerics.epsilon_ladder.clone())
            .map_err(|e| cfg_err(format!("numerics.epsilon_ladder: {e}")))?;
        if !(numerics.delta_thr > 0.0) {
            return Err(cfg_err("numerics.delta_thr must be positive"));
        }
        if numerics.steps_per_period < 2 {
            return Err(cfg_err("numerics.steps_per_period must be at least 2"));
        }
        if numerics.stride == 0 || numerics.steps_per_period % numerics.stride != 0 {
            return Err(cfg_err(
                "numerics.stride must divide numerics.steps_per_period",
            ));
        }
        if let Some(s_max) = numerics.s_max {
            let periods = s_max / period;
            if !(periods >= 1.0) || (periods - periods.round()).abs() > 1e-9 {
                return Err(cfg_err(
                    "numerics.s_max must be a positive multiple of drive.period",
                ));
            }
        }
        if !(numerics.resolvent_half_width >= half_width) {
            return Err(cfg_err(
                "numerics.resolvent_half_width must be at least grid.half_width",
            ));
        }

        let output_dir = raw.take("output", "dir");

        raw.finish()?;
        Ok(Self {
            potential,
            grid: GridSpec {
                half_width,
                n_points,
            },
            period,
            alphas,
            harmonics,
            numerics,
            output_dir,
        })
    }

    pub fn parse_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(|e| {
            cfg_err(format!("cannot read {}: {e}", path.as_ref().display()))
        })?;
        Self::parse_str(&text)
    }

    /// Canonical text form; `parse_str(render()) == self`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        match &self.potential {
            PotentialSpec::PoschlTeller { depth } => {
                writeln!(out, "potential.kind = poschl-teller").unwrap();
                writeln!(out, "potential.depth = {depth}").unwrap();
            }
            PotentialSpec::GaussianWell {
                depth,
                center,
                width,
            } => {
                writeln!(out, "potential.kind = gaussian-well").unwrap();
                writeln!(out, "potential.depth = {depth}").unwrap();
                writeln!(out, "potential.center = {center}").unwrap();
                writeln!(out, "potential.width = {width}").unwrap();
            }
            PotentialSpec::File { path } => {
                writeln!(out, "potential.kind = file").unwrap();
                writeln!(out, "potential.file = {path}").unwrap();
            }
        }
        writeln!(out, "grid.half_width = {}", self.grid.half_width).unwrap();
        writeln!(out, "grid.n_points = {}", self.grid.n_points).unwrap();
        writeln!(out, "drive.period = {}", self.period).unwrap();
        writeln!(out, "drive.alphas = {}", join_f64(&self.alphas)).unwrap();
        for (i, h) in self.harmonics.iter().enumerate() {
            let s = format!("harmonic{}", i + 1);
            let kind = match h.kind {
                HarmonicKind::Cos => "cos",
                HarmonicKind::Sin => "sin",
                HarmonicKind::Static => "static",
            };
            writeln!(out, "{s}.kind = {kind}").unwrap();
            writeln!(out, "{s}.m = {}", h.m).unwrap();
            writeln!(out, "{s}.amplitude = {}", h.amplitude).unwrap();
            writeln!(out, "{s}.center = {}", h.center).unwrap();
            writeln!(out, "{s}.width = {}", h.width).unwrap();
        }
        let n = &self.numerics;
        writeln!(out, "numerics.n_max = {}", n.n_max).unwrap();
        writeln!(
            out,
            "numerics.epsilon_ladder = {}",
            join_f64(&n.epsilon_ladder)
        )
        .unwrap();
        writeln!(out, "numerics.delta_thr = {}", n.delta_thr).unwrap();
        writeln!(out, "numerics.steps_per_period = {}", n.steps_per_period).unwrap();
        writeln!(out, "numerics.stride = {}", n.stride).unwrap();
        if let Some(n_t0) = n.n_t0 {
            writeln!(out, "numerics.n_t0 = {n_t0}").unwrap();
        }
        if let Some(s_max) = n.s_max {
            writeln!(out, "numerics.s_max = {s_max}").unwrap();
        }
        writeln!(out, "numerics.seed = {}", n.seed).unwrap();
        writeln!(
            out,
            "numerics.resolvent_half_width = {}",
            n.resolvent_half_width
        )
        .unwrap();
        writeln!(out, "numerics.n_trials = {}", n.n_trials).unwrap();
        if let Some(dir) = &self.output_dir {
            writeln!(out, "output.dir = {dir}").unwrap();
        }
        out
    }

    /// Stable hash of the canonical rendering, for output provenance.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.render().as_bytes());
        let out = hasher.finalize();
        out.iter().map(|b| format!("{b:02x}")).collect()
    }

    fn potential_on(&self, grid: SpatialGrid) -> Result<Potential> {
        Ok(match &self.potential {
            PotentialSpec::PoschlTeller { depth } => Potential::PoschlTeller { depth: *depth },
            PotentialSpec::GaussianWell {
                depth,
                center,
                width,
            } => Potential::GaussianWell {
                depth: *depth,
                center: *center,
                width: *width,
            },
            PotentialSpec::File { path } => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| cfg_err(format!("cannot read {path}: {e}")))?;
                let samples: Vec<f64> = text
                    .split_whitespace()
                    .map(|t| {
                        t.parse::<f64>()
                            .map_err(|_| cfg_err(format!("{path}: `{t}` is not a number")))
                    })
                    .collect::<Result<_>>()?;
                if samples.len() != grid.n_points() {
                    return Err(cfg_err(format!(
                        "{path}: {} samples for a {}-point grid",
                        samples.len(),
                        grid.n_points()
                    )));
                }
                Potential::Samples(samples)
            }
        })
    }

    pub fn spatial_grid(&self) -> Result<SpatialGrid> {
        SpatialGrid::symmetric(self.grid.half_width, self.grid.n_points)
    }

    pub fn perturbation(&self) -> Perturbation {
        Perturbation::Separable(
            self.harmonics
                .iter()
                .map(|h| Harmonic {
                    m: h.m,
                    kind: h.kind,
                    profile: SpatialProfile::Gaussian {
                        amplitude: h.amplitude,
                        center: h.center,
                        width: h.width,
                    },
                })
                .collect(),
        )
    }

    /// Build the driven model on the configured grid with the given coupling.
    pub fn driven_model(&self, alpha: f64) -> Result<DrivenModel> {
        let grid = self.spatial_grid()?;
        let static_model = StaticModel::new(self.potential_on(grid)?, grid)?;
        DrivenModel::new(static_model, self.perturbation(), self.period, alpha)
    }

    /// The same model on the (larger) resolvent box, same spacing.
    pub fn resolvent_model(&self, alpha: f64) -> Result<DrivenModel> {
        let grid = self.spatial_grid()?;
        let h = grid.h();
        let n_big = 2 * (self.numerics.resolvent_half_width / h).round() as usize + 1;
        let big = SpatialGrid::symmetric((n_big - 1) as f64 * h / 2.0, n_big)?;
        let static_model = StaticModel::new(self.potential_on(big)?, big)?;
        DrivenModel::new(static_model, self.perturbation(), self.period, alpha)
    }
}

fn join_f64(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// The analytic benchmark: Poschl-Teller well, Gaussian monochromatic drive
/// with period pi (one open channel at energy 1).
pub fn benchmark_config() -> ExperimentConfig {
    ExperimentConfig {
        potential: PotentialSpec::PoschlTeller { depth: 2.0 },
        grid: GridSpec {
            half_width: 30.0,
            n_points: 3001,
        },
        period: std::f64::consts::PI,
        alphas: vec![0.1],
        harmonics: vec![HarmonicSpec {
            m: 1,
            kind: HarmonicKind::Cos,
            amplitude: 1.0,
            center: 0.0,
            width: 1.0,
        }],
        numerics: NumericsSpec::default(),
        output_dir: None,
    }
}
