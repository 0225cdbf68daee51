//! TOML run configuration with strict parsing, `section.key=value`
//! overrides, and defaults filled in place so the resolved file can be
//! stored next to the artifacts it produced.
//!
//! ```toml
//! [model]
//! k = 100
//! nu = 0.5
//! growth = { type = "linear", P_M = 1.0, G0 = 1.0 }
//!
//! [grid]
//! L = 40.0
//! m = 800
//!
//! [run]
//! t_final = 12.0
//! snapshot_times = [3.0, 6.0, 9.0]
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::diagnostics::{DiagnosticsOptions, DEFAULT_THETA_FRACTION, DEFAULT_WINDOW};
use crate::error::{Error, Result};
use crate::grid::Geometry;
use crate::io::read_snapshot;
use crate::model::{GrowthLaw, ModelParams};
use crate::solver::{
    GridSpec, InitialData, RunConfig, DEFAULT_CFL_SAFETY, DEFAULT_FRONT_THRESHOLD,
    DEFAULT_OVERSHOOT_TOL,
};

const DEFAULT_AMPLITUDE: f64 = 0.5;
/// Default bump width as a fraction of the domain length.
const DEFAULT_WIDTH_FRACTION: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub model: ModelSection,
    pub grid: GridSection,
    #[serde(default)]
    pub initial: InitialSection,
    pub run: RunSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub k: f64,
    pub nu: f64,
    #[serde(default)]
    pub growth: GrowthSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum GrowthSection {
    /// `G(p) = G0 (1 − p / P_M)`.
    Linear {
        #[serde(rename = "P_M", default = "one")]
        p_m: f64,
        #[serde(rename = "G0", default = "one")]
        g0: f64,
    },
    /// Piecewise-linear through `[p, G]` pairs.
    Table { points: Vec<(f64, f64)> },
}

impl Default for GrowthSection {
    fn default() -> Self {
        GrowthSection::Linear { p_m: 1.0, g0: 1.0 }
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometryKind {
    #[default]
    Line,
    Radial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default)]
    pub geometry: GeometryKind,
    /// Space dimension of a radial grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<u8>,
    #[serde(rename = "L")]
    pub length: f64,
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum InitialSection {
    /// `A · max(0, 1 − ((x − c)/w)²)²`; the width defaults to `L / 4`.
    Bump {
        #[serde(default = "default_amplitude")]
        amplitude: f64,
        #[serde(default)]
        center: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        width: Option<f64>,
    },
    Uniform {
        value: f64,
    },
    /// Density column of a snapshot CSV on the same grid; relative paths
    /// resolve against the config file.
    File {
        path: PathBuf,
    },
}

impl Default for InitialSection {
    fn default() -> Self {
        InitialSection::Bump {
            amplitude: DEFAULT_AMPLITUDE,
            center: 0.0,
            width: None,
        }
    }
}

fn default_amplitude() -> f64 {
    DEFAULT_AMPLITUDE
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub t_final: f64,
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
    #[serde(default = "default_cfl")]
    pub cfl_safety: f64,
    #[serde(default = "default_stride")]
    pub series_stride: usize,
    #[serde(default = "default_threshold")]
    pub front_threshold: f64,
    /// Pressure collar of the complementarity residual; `0.05 · P_M`
    /// when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default = "default_overshoot")]
    pub overshoot_tol: f64,
}

fn default_cfl() -> f64 {
    DEFAULT_CFL_SAFETY
}

fn default_stride() -> usize {
    1
}

fn default_threshold() -> f64 {
    DEFAULT_FRONT_THRESHOLD
}

fn default_overshoot() -> f64 {
    DEFAULT_OVERSHOOT_TOL
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    /// Snapshot, series and summary tables.
    Csv,
    /// Metadata and report documents.
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directory: Option<PathBuf>,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            directory: None,
            formats: default_formats(),
        }
    }
}

fn default_formats() -> Vec<Format> {
    vec![Format::Csv, Format::Json]
}

impl OutputSection {
    pub fn wants(&self, format: Format) -> bool {
        self.formats.contains(&format)
    }
}

fn config_error(path: impl Into<String>, message: impl std::fmt::Display) -> Error {
    Error::Config {
        path: path.into(),
        message: message.to_string(),
    }
}

/// Reads, overrides, parses and validates a config file.
pub fn parse_config(path: &Path, overrides: &[String]) -> Result<ConfigFile> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        config_error(
            path.display().to_string(),
            format!("cannot read config: {e}"),
        )
    })?;
    let mut config = parse_config_str(&text, overrides)?;
    if let InitialSection::File { path: file } = &mut config.initial {
        if file.is_relative() {
            if let Some(dir) = path.parent() {
                *file = dir.join(&*file);
            }
        }
    }
    config.to_run_config()?;
    Ok(config)
}

/// Parses TOML text with overrides and fills defaults. Cross-field
/// checks happen in [`ConfigFile::to_run_config`].
pub fn parse_config_str(text: &str, overrides: &[String]) -> Result<ConfigFile> {
    let mut table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| config_error("<config>", e.message().trim_end()))?;
    for item in overrides {
        apply_override(&mut table, item)?;
    }
    let mut config: ConfigFile = serde_path_to_error::deserialize(toml::Value::Table(table))
        .map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            config_error(
                if path == "." { "<config>".into() } else { path },
                inner.message().trim_end(),
            )
        })?;
    config.fill_defaults();
    Ok(config)
}

/// Applies one `section.key=value` override. The value is read as a TOML
/// value when possible and as a bare string otherwise.
pub fn apply_override(table: &mut toml::Table, item: &str) -> Result<()> {
    let (key, raw) = item
        .split_once('=')
        .ok_or_else(|| config_error(item, "override must look like section.key=value"))?;
    let key = key.trim();
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(config_error(key, "empty key segment"));
    }
    let value = format!("v = {}", raw.trim())
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.trim().to_string()));

    let (last, sections) = parts.split_last().expect("split yields at least one part");
    let mut current = table;
    for (i, part) in sections.iter().enumerate() {
        let entry = current
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        current = entry
            .as_table_mut()
            .ok_or_else(|| config_error(parts[..=i].join("."), "is not a section"))?;
    }
    current.insert(last.to_string(), value);
    Ok(())
}

impl ConfigFile {
    fn fill_defaults(&mut self) {
        if let InitialSection::Bump {
            width: width @ None,
            ..
        } = &mut self.initial
        {
            *width = Some(DEFAULT_WIDTH_FRACTION * self.grid.length);
        }
        if self.run.theta.is_none() {
            let p_m = match &self.model.growth {
                GrowthSection::Linear { p_m, .. } => *p_m,
                GrowthSection::Table { points } => {
                    GrowthLaw::tabulated(points).map_or(1.0, |g| g.homeostatic_pressure())
                }
            };
            self.run.theta = Some(DEFAULT_THETA_FRACTION * p_m);
        }
    }

    pub fn growth_law(&self) -> Result<GrowthLaw> {
        let law = match &self.model.growth {
            GrowthSection::Linear { p_m, g0 } => GrowthLaw::linear(*g0, *p_m),
            GrowthSection::Table { points } => GrowthLaw::tabulated(points),
        };
        law.map_err(|e| config_error("model.growth", e))
    }

    pub fn params(&self) -> Result<ModelParams> {
        ModelParams::new(self.model.k, self.model.nu, self.growth_law()?).map_err(locate)
    }

    pub fn geometry(&self) -> Result<Geometry> {
        match (self.grid.geometry, self.grid.dim) {
            (GeometryKind::Line, None) => Ok(Geometry::Line),
            (GeometryKind::Line, Some(_)) => Err(config_error(
                "grid.dim",
                "only radial grids take a dimension",
            )),
            (GeometryKind::Radial, Some(dim)) => Ok(Geometry::Radial { dim }),
            (GeometryKind::Radial, None) => Err(config_error(
                "grid.dim",
                "radial grids need dim = 1, 2 or 3",
            )),
        }
    }

    /// Validates every value and builds the solver configuration.
    pub fn to_run_config(&self) -> Result<RunConfig> {
        let params = self.params()?;
        let grid = GridSpec {
            geometry: self.geometry()?,
            length: self.grid.length,
            cells: self.grid.m,
        };
        let built = grid.build().map_err(locate)?;

        let initial = match &self.initial {
            InitialSection::Bump {
                amplitude,
                center,
                width,
            } => InitialData::Bump {
                amplitude: *amplitude,
                center: *center,
                width: width.unwrap_or(DEFAULT_WIDTH_FRACTION * self.grid.length),
            },
            InitialSection::Uniform { value } => InitialData::Uniform(*value),
            InitialSection::File { path } => {
                InitialData::Values(read_initial(path, built.centers())?)
            }
        };

        let mut config = RunConfig::new(params, grid, initial, self.run.t_final);
        config.snapshot_times = self.run.snapshot_times.clone();
        config.cfl_safety = self.run.cfl_safety;
        config.series_stride = self.run.series_stride;
        config.front_threshold = self.run.front_threshold;
        config.overshoot_tol = self.run.overshoot_tol;
        config.validate().map_err(locate)?;
        config
            .initial_field(&config.build_grid()?)
            .map_err(locate)?;

        let theta = self.theta();
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(config_error(
                "run.theta",
                format!("must be positive (got {theta})"),
            ));
        }
        if self.output.formats.is_empty() {
            return Err(config_error(
                "output.formats",
                "at least one format is required",
            ));
        }
        Ok(config)
    }

    pub fn theta(&self) -> f64 {
        self.run.theta.unwrap_or(DEFAULT_THETA_FRACTION)
    }

    pub fn diagnostics_options(&self) -> DiagnosticsOptions {
        DiagnosticsOptions {
            front_threshold: self.run.front_threshold,
            theta: self.theta(),
            window: DEFAULT_WINDOW,
        }
    }
}

fn read_initial(path: &Path, centers: &[f64]) -> Result<Vec<f64>> {
    let here = || path.display().to_string();
    let rows = read_snapshot(path)
        .map_err(|e| config_error("initial.path", format!("{}: {e}", here())))?;
    if rows.len() != centers.len() {
        return Err(config_error(
            "initial.path",
            format!(
                "{} holds {} cells but the grid has {}",
                here(),
                rows.len(),
                centers.len()
            ),
        ));
    }
    let dx = if centers.len() > 1 {
        centers[1] - centers[0]
    } else {
        1.0
    };
    if let Some((row, x)) = rows
        .iter()
        .zip(centers)
        .find(|(r, x)| (r.x - **x).abs() > 1e-9 * dx)
    {
        return Err(config_error(
            "initial.path",
            format!(
                "{}: cell at x = {} does not match grid center {x}",
                here(),
                row.x
            ),
        ));
    }
    Ok(rows.into_iter().map(|r| r.n).collect())
}

/// Attaches the config key path to a parameter error.
fn locate(e: Error) -> Error {
    let Error::Param { name, reason } = &e else {
        return match e {
            Error::BoundViolation {
                cell, value, bound, ..
            } => config_error(
                "initial",
                format!("density {value} at cell {cell} lies outside [0, {bound}]"),
            ),
            other => other,
        };
    };
    let path = match *name {
        "k" | "nu" => format!("model.{name}"),
        "L" | "m" | "dim" => format!("grid.{name}"),
        "amplitude" | "center" | "width" => format!("initial.{name}"),
        other => format!("run.{other}"),
    };
    config_error(path, format!("{name} {reason}"))
}
