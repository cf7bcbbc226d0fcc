//! Random linear coding over GF(2^u) on an erasure channel whose erasure
//! probability grows with packet length.
//!
//! - [`gf`]: field arithmetic.
//! - [`rlnc`]: encoding and incremental Gaussian-elimination decoding.
//! - [`model`]: closed-form rank distribution, `E[N]`, QAM symbol error,
//!   erasure probability, throughput `S`, data rate `R` and the pre-coded
//!   lower bounds.
//! - [`montecarlo`]: seeded simulation that checks the model empirically.
//! - [`sweep`]: parameter sweeps, optimisation and figure presets.
//! - [`table`]: CSV output.

pub mod gf;
pub mod model;
pub mod montecarlo;
pub mod rlnc;
pub mod special;
pub mod sweep;
pub mod table;

pub use gf::{Field, GfError, Symbol};
pub use model::{CodingConfig, ConfigError, GvForm, MetricsRow, ModelOptions, QamArgument};
pub use montecarlo::{EstimateRow, SimError, SimMode, TrialPlan, ValidationReport};
pub use rlnc::{CodedPacket, Decoder, Generation, RlncError};
pub use sweep::{FigurePreset, Objective, PrecodeMode, SweepError, SweepResult, SweepSpec, Variable};
pub use table::CsvTable;
