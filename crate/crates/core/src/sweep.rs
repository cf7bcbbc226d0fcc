//! Parameter sweeps, exhaustive optimisation and the shipped figure presets.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{self, CodingConfig, ConfigError, MetricsRow, ModelOptions};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("sweep grid is empty")]
    EmptyGrid,
    #[error("sweep grid must be strictly increasing (value {0} follows {1})")]
    UnorderedGrid(u64, u64),
    #[error("empty range: lo={lo} > hi={hi}")]
    EmptyRange { lo: u64, hi: u64 },
    #[error("grid step must be positive")]
    ZeroStep,
    #[error("u={0} does not fit the model (1..=63)")]
    FieldBits(u64),
    #[error("at {variable}={value}: {source}")]
    Point {
        variable: Variable,
        value: u64,
        source: ConfigError,
    },
    #[error("unknown figure preset `{0}` (expected one of 1, 2, 3, 4a, 4b)")]
    UnknownPreset(String),
    #[error("pre-code rate {0} outside (0, 1]")]
    PrecodeRate(f64),
}

/// The swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variable {
    /// Symbols per packet.
    #[serde(rename = "n")]
    PacketLen,
    /// Symbol exponent, `q = 2^u`.
    #[serde(rename = "u")]
    FieldBits,
    /// Information symbols per packet (pre-code dimension).
    #[serde(rename = "k")]
    InfoLen,
}

impl Variable {
    pub fn name(self) -> &'static str {
        match self {
            Variable::PacketLen => "n",
            Variable::FieldBits => "u",
            Variable::InfoLen => "k",
        }
    }
}

impl std::fmt::Display for Variable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Variable {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "n" => Ok(Variable::PacketLen),
            "u" => Ok(Variable::FieldBits),
            "k" => Ok(Variable::InfoLen),
            other => Err(format!("unknown sweep variable `{other}` (expected n, u or k)")),
        }
    }
}

/// How `k` is chosen at each grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum PrecodeMode {
    /// No pre-code: `k = n`.
    None,
    /// `k = ceil(rate * n)`.
    FixedRate { rate: f64 },
    /// `k` held fixed.
    FixedInfo { k: u64 },
}

impl PrecodeMode {
    fn validate(&self) -> Result<(), SweepError> {
        if let PrecodeMode::FixedRate { rate } = *self {
            if !(rate > 0.0 && rate <= 1.0) {
                return Err(SweepError::PrecodeRate(rate));
            }
        }
        Ok(())
    }
}

/// `ceil(rate * n)`, ignoring floating-point dust just above an integer.
pub fn info_len_for_rate(rate: f64, n: u64) -> u64 {
    let exact = rate * n as f64;
    let rounded = exact.round();
    let k = if (exact - rounded).abs() < 1e-9 * exact.max(1.0) {
        rounded
    } else {
        exact.ceil()
    };
    (k as u64).clamp(1, n.max(1))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: CodingConfig,
    pub variable: Variable,
    pub grid: Vec<u64>,
    pub precode: PrecodeMode,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), SweepError> {
        let first = *self.grid.first().ok_or(SweepError::EmptyGrid)?;
        let mut prev = first;
        for &v in &self.grid[1..] {
            if v <= prev {
                return Err(SweepError::UnorderedGrid(v, prev));
            }
            prev = v;
        }
        self.precode.validate()
    }

    /// The operating point at grid value `value`.
    pub fn config_at(&self, value: u64) -> Result<CodingConfig, SweepError> {
        let mut c = self.base;
        match self.variable {
            Variable::PacketLen => c.packet_len = value,
            Variable::FieldBits => {
                c.field_bits = u32::try_from(value)
                    .ok()
                    .filter(|u| (1..=63).contains(u))
                    .ok_or(SweepError::FieldBits(value))?
            }
            Variable::InfoLen => c.info_len = value,
        }
        match self.precode {
            PrecodeMode::None if self.variable != Variable::InfoLen => {
                c.precode = false;
                c.info_len = c.packet_len;
            }
            PrecodeMode::None => c.precode = true,
            PrecodeMode::FixedRate { rate } => {
                c.precode = true;
                c.info_len = info_len_for_rate(rate, c.packet_len);
            }
            PrecodeMode::FixedInfo { k } => {
                c.precode = true;
                if self.variable != Variable::InfoLen {
                    c.info_len = k;
                }
            }
        }
        Ok(c)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub variable: Variable,
    pub grid: Vec<u64>,
    pub configs: Vec<CodingConfig>,
    pub rows: Vec<MetricsRow>,
    pub argmax_s: u64,
    pub argmax_r: u64,
}

impl SweepResult {
    pub fn row_at(&self, value: u64) -> Option<&MetricsRow> {
        self.grid.iter().position(|&v| v == value).map(|i| &self.rows[i])
    }
}

/// Objective for [`optimize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Objective {
    /// Throughput `S` (or `S_LB` with a pre-code).
    #[default]
    S,
    /// Data rate `R` (or `R_LB`).
    R,
}

impl std::str::FromStr for Objective {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "S" | "s" => Ok(Objective::S),
            "R" | "r" => Ok(Objective::R),
            other => Err(format!("unknown objective `{other}` (expected S or R)")),
        }
    }
}

impl Objective {
    fn value(self, row: &MetricsRow) -> f64 {
        match self {
            Objective::S => row.s,
            Objective::R => row.r,
        }
    }
}

/// Index of the largest objective value; ties go to the earlier index.
fn argmax(rows: &[MetricsRow], objective: Objective) -> usize {
    let mut best = 0;
    for (i, row) in rows.iter().enumerate().skip(1) {
        if objective.value(row) > objective.value(&rows[best]) {
            best = i;
        }
    }
    best
}

fn evaluate_point(spec: &SweepSpec, value: u64) -> Result<(CodingConfig, MetricsRow), SweepError> {
    let config = spec.config_at(value)?;
    let row = model::throughput(&config).map_err(|source| SweepError::Point {
        variable: spec.variable,
        value,
        source,
    })?;
    Ok((config, row))
}

#[cfg(feature = "parallel")]
fn evaluate_grid(spec: &SweepSpec) -> Result<Vec<(CodingConfig, MetricsRow)>, SweepError> {
    use rayon::prelude::*;
    spec.grid.par_iter().map(|&v| evaluate_point(spec, v)).collect()
}

#[cfg(not(feature = "parallel"))]
fn evaluate_grid(spec: &SweepSpec) -> Result<Vec<(CodingConfig, MetricsRow)>, SweepError> {
    spec.grid.iter().map(|&v| evaluate_point(spec, v)).collect()
}

/// Evaluate the model at every grid point, in grid order.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult, SweepError> {
    spec.validate()?;
    let (configs, rows): (Vec<_>, Vec<_>) = evaluate_grid(spec)?.into_iter().unzip();
    let argmax_s = spec.grid[argmax(&rows, Objective::S)];
    let argmax_r = spec.grid[argmax(&rows, Objective::R)];
    Ok(SweepResult {
        variable: spec.variable,
        grid: spec.grid.clone(),
        configs,
        rows,
        argmax_s,
        argmax_r,
    })
}

/// Exhaustive scan of `lo..=hi`; exact on the scanned range.
pub fn optimize(
    base: &CodingConfig,
    precode: PrecodeMode,
    variable: Variable,
    lo: u64,
    hi: u64,
    objective: Objective,
) -> Result<(u64, MetricsRow), SweepError> {
    if lo > hi {
        return Err(SweepError::EmptyRange { lo, hi });
    }
    let result = run_sweep(&SweepSpec {
        base: *base,
        variable,
        grid: (lo..=hi).collect(),
        precode,
    })?;
    let i = argmax(&result.rows, objective);
    Ok((result.grid[i], result.rows[i]))
}

/// Evenly spaced grid `from, from + step, ...` up to and including `to`.
pub fn linear_grid(from: u64, to: u64, step: u64) -> Result<Vec<u64>, SweepError> {
    if step == 0 {
        return Err(SweepError::ZeroStep);
    }
    if from > to {
        return Err(SweepError::EmptyRange { lo: from, hi: to });
    }
    Ok((from..=to).step_by(step as usize).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridDef {
    Range { from: u64, to: u64, step: u64 },
    Values { values: Vec<u64> },
}

impl GridDef {
    pub fn values(&self) -> Result<Vec<u64>, SweepError> {
        match self {
            GridDef::Range { from, to, step } => linear_grid(*from, *to, *step),
            GridDef::Values { values } => Ok(values.clone()),
        }
    }
}

/// A named figure configuration loaded from `presets/figures.toml`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigurePreset {
    pub name: String,
    pub title: String,
    #[serde(rename = "K")]
    pub generation_size: u64,
    pub u: u32,
    pub n: u64,
    pub snr_db: f64,
    pub variable: Variable,
    pub grid: GridDef,
    pub precode: PrecodeMode,
}

#[derive(Debug, Deserialize)]
struct PresetFile {
    preset: Vec<FigurePreset>,
}

const PRESETS_TOML: &str = include_str!("../presets/figures.toml");

/// All shipped figure presets, in file order.
pub fn figure_presets() -> Vec<FigurePreset> {
    let file: PresetFile = toml::from_str(PRESETS_TOML).expect("shipped presets parse");
    file.preset
}

pub fn figure_preset(name: &str) -> Result<FigurePreset, SweepError> {
    figure_presets()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| SweepError::UnknownPreset(name.to_string()))
}

impl FigurePreset {
    /// The preset as a sweep under the given model options.
    pub fn spec(&self, options: ModelOptions) -> Result<SweepSpec, SweepError> {
        let base = CodingConfig::uncoded(self.generation_size, self.n, self.u, self.snr_db).with_options(options);
        let spec = SweepSpec {
            base,
            variable: self.variable,
            grid: self.grid.values()?,
            precode: self.precode,
        };
        spec.validate()?;
        Ok(spec)
    }
}
