//! Seeded Monte Carlo estimates of transmissions-to-decode, throughput and
//! data rate.
//!
//! Every trial owns a ChaCha8 stream selected by its index under the plan's
//! base seed, so trials can run in any order (or in parallel) and the
//! aggregate is bit-identical. Aggregation uses exact integer sums.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{Field, GfError, MAX_DEGREE};
use crate::model::{self, CodingConfig, ConfigError, MetricsRow};
use crate::rlnc::{fill_uniform, Decoder};

/// Transmissions allowed in a single trial before it is abandoned.
pub const TRIAL_CAP: u64 = 100_000_000;

/// Disagreement threshold for [`validate`], in standard errors.
pub const Z_LIMIT: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("simulation needs u <= {MAX_DEGREE} to draw coefficients (got u={0})")]
    FieldTooLarge(u32),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("a trial plan needs at least one trial")]
    NoTrials,
    #[error("trial exceeded the cap of {TRIAL_CAP} transmissions; the erasure probability is too close to 1")]
    TrialCap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimMode {
    /// Drop each packet with the model's erasure probability.
    PacketErasure,
    /// Draw the number of corrupted symbols and drop the packet when it
    /// exceeds the correctable count `t`.
    SymbolLevel,
}

impl SimMode {
    pub fn name(self) -> &'static str {
        match self {
            SimMode::PacketErasure => "packet-erasure",
            SimMode::SymbolLevel => "symbol-level",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialPlan {
    pub config: CodingConfig,
    pub trials: u64,
    pub base_seed: u64,
    pub mode: SimMode,
}

/// Sample statistics of one simulation run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimateRow {
    pub trials: u64,
    /// Mean transmissions until the decoder reached full rank.
    pub mean_t: f64,
    pub stderr_t: f64,
    /// Fraction of all transmissions that were erased.
    pub epsilon_hat: f64,
    pub s_hat: f64,
    pub stderr_s: f64,
    pub r_hat: f64,
    pub stderr_r: f64,
    pub ci95_t: f64,
    pub ci95_s: f64,
    pub ci95_r: f64,
}

/// Per-trial RNG: the base seed picks the key, the trial index the stream.
pub fn trial_rng(base_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    rng.set_stream(trial);
    rng
}

enum Channel {
    Clean,
    Packet(f64),
    Symbols { errors: Binomial, correctable: u64 },
}

impl Channel {
    #[inline]
    fn erased<R: Rng>(&self, rng: &mut R) -> bool {
        match self {
            Channel::Clean => false,
            Channel::Packet(eps) => rng.random::<f64>() < *eps,
            Channel::Symbols { errors, correctable } => errors.sample(rng) > *correctable,
        }
    }
}

struct TrialOutcome {
    transmissions: u64,
    erasures: u64,
}

fn run_trial(field: &Field, size: usize, channel: &Channel, mut rng: ChaCha8Rng) -> Result<TrialOutcome, SimError> {
    let mut decoder = Decoder::new(field, size, 0);
    let mut coefficients = vec![0; size];
    let mut transmissions = 0u64;
    let mut erasures = 0u64;
    while !decoder.is_complete() {
        transmissions += 1;
        if transmissions > TRIAL_CAP {
            return Err(SimError::TrialCap);
        }
        if channel.erased(&mut rng) {
            erasures += 1;
            continue;
        }
        fill_uniform(field, &mut rng, &mut coefficients);
        decoder.absorb_coefficients(&coefficients);
    }
    Ok(TrialOutcome {
        transmissions,
        erasures,
    })
}

fn build_channel(config: &CodingConfig, mode: SimMode, analytic: &MetricsRow) -> Result<Channel, SimError> {
    Ok(match mode {
        SimMode::PacketErasure if analytic.epsilon <= 0.0 => Channel::Clean,
        SimMode::PacketErasure => Channel::Packet(analytic.epsilon),
        SimMode::SymbolLevel if analytic.p_q <= 0.0 => Channel::Clean,
        SimMode::SymbolLevel => Channel::Symbols {
            errors: Binomial::new(config.packet_len, analytic.p_q).expect("p_q lies in [0, 1]"),
            correctable: analytic.t.unwrap_or(0),
        },
    })
}

#[cfg(feature = "parallel")]
fn run_trials(plan: &TrialPlan, field: &Field, channel: &Channel) -> Result<Vec<TrialOutcome>, SimError> {
    use rayon::prelude::*;
    let size = plan.config.generation_size as usize;
    (0..plan.trials)
        .into_par_iter()
        .map(|i| run_trial(field, size, channel, trial_rng(plan.base_seed, i)))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn run_trials(plan: &TrialPlan, field: &Field, channel: &Channel) -> Result<Vec<TrialOutcome>, SimError> {
    let size = plan.config.generation_size as usize;
    (0..plan.trials)
        .map(|i| run_trial(field, size, channel, trial_rng(plan.base_seed, i)))
        .collect()
}

/// Run every trial of `plan` and summarise.
pub fn run(plan: &TrialPlan) -> Result<EstimateRow, SimError> {
    plan.config.validate()?;
    if plan.trials == 0 {
        return Err(SimError::NoTrials);
    }
    if plan.config.field_bits > MAX_DEGREE {
        return Err(SimError::FieldTooLarge(plan.config.field_bits));
    }
    let field = Field::new(plan.config.field_bits)?;
    let analytic = model::throughput(&plan.config)?;
    let channel = build_channel(&plan.config, plan.mode, &analytic)?;
    let outcomes = run_trials(plan, &field, &channel)?;
    Ok(summarise(&plan.config, &outcomes))
}

fn summarise(config: &CodingConfig, outcomes: &[TrialOutcome]) -> EstimateRow {
    let trials = outcomes.len() as u128;
    let (mut sum, mut sum_sq, mut erased) = (0u128, 0u128, 0u128);
    for o in outcomes {
        let t = o.transmissions as u128;
        sum += t;
        sum_sq += t * t;
        erased += o.erasures as u128;
    }
    let mean_t = sum as f64 / trials as f64;
    let variance = if trials > 1 {
        (trials * sum_sq - sum * sum) as f64 / (trials * (trials - 1)) as f64
    } else {
        0.0
    };
    let stderr_t = (variance / trials as f64).sqrt();

    let k = config.generation_size as f64;
    let info = if config.precode {
        config.info_len
    } else {
        config.packet_len
    } as f64;
    let share = info / (config.packet_len + config.generation_size) as f64;
    let bits = info * config.field_bits as f64;
    let s_hat = k / mean_t * share;
    // delta method on K / mean_t
    let stderr_s = s_hat * stderr_t / mean_t;
    let r_hat = s_hat * bits;
    let stderr_r = stderr_s * bits;
    const Z95: f64 = 1.959_963_984_540_054;
    EstimateRow {
        trials: outcomes.len() as u64,
        mean_t,
        stderr_t,
        epsilon_hat: erased as f64 / sum as f64,
        s_hat,
        stderr_s,
        r_hat,
        stderr_r,
        ci95_t: Z95 * stderr_t,
        ci95_s: Z95 * stderr_s,
        ci95_r: Z95 * stderr_r,
    }
}

/// One mode's comparison against the analytic model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeCheck {
    pub mode: SimMode,
    pub seed: u64,
    pub estimate: EstimateRow,
    /// `S` without a pre-code, `S_LB` with one.
    pub target_s: f64,
    pub target_r: f64,
    pub z_s: f64,
    pub z_r: f64,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub analytic: MetricsRow,
    pub checks: Vec<ModeCheck>,
}

impl ValidationReport {
    pub fn all_agree(&self) -> bool {
        self.checks.iter().all(|c| c.agrees)
    }
}

pub fn z_score(estimate: f64, target: f64, stderr: f64) -> f64 {
    if stderr > 0.0 {
        (estimate - target) / stderr
    } else if estimate == target {
        0.0
    } else {
        (estimate - target).signum() * f64::INFINITY
    }
}

/// Seed used for `mode` under a validation base seed.
pub fn mode_seed(base_seed: u64, mode: SimMode) -> u64 {
    match mode {
        SimMode::PacketErasure => base_seed,
        SimMode::SymbolLevel => base_seed.wrapping_add(1),
    }
}

/// Simulate both channel modes and compare each against the model.
pub fn validate(config: &CodingConfig, trials: u64, base_seed: u64) -> Result<ValidationReport, SimError> {
    let analytic = model::throughput(config)?;
    let mut checks = Vec::with_capacity(2);
    for mode in [SimMode::PacketErasure, SimMode::SymbolLevel] {
        let seed = mode_seed(base_seed, mode);
        let estimate = run(&TrialPlan {
            config: *config,
            trials,
            base_seed: seed,
            mode,
        })?;
        let z_s = z_score(estimate.s_hat, analytic.s, estimate.stderr_s);
        let z_r = z_score(estimate.r_hat, analytic.r, estimate.stderr_r);
        checks.push(ModeCheck {
            mode,
            seed,
            estimate,
            target_s: analytic.s,
            target_r: analytic.r,
            z_s,
            z_r,
            agrees: z_s.abs() < Z_LIMIT && z_r.abs() < Z_LIMIT,
        });
    }
    Ok(ValidationReport { analytic, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelOptions;

    fn plan(config: CodingConfig, trials: u64, seed: u64, mode: SimMode) -> TrialPlan {
        TrialPlan {
            config,
            trials,
            base_seed: seed,
            mode,
        }
    }

    #[test]
    fn identical_plans_give_identical_rows() {
        let c = CodingConfig::uncoded(8, 20, 3, 6.0);
        let a = run(&plan(c, 500, 9, SimMode::SymbolLevel)).unwrap();
        let b = run(&plan(c, 500, 9, SimMode::SymbolLevel)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_trials_rejected() {
        let c = CodingConfig::uncoded(8, 20, 3, 6.0);
        assert_eq!(run(&plan(c, 0, 1, SimMode::PacketErasure)), Err(SimError::NoTrials));
    }

    #[test]
    fn oversized_field_rejected() {
        let c = CodingConfig::uncoded(8, 20, 17, 6.0);
        assert_eq!(run(&plan(c, 1, 1, SimMode::PacketErasure)), Err(SimError::FieldTooLarge(17)));
    }

    #[test]
    fn certain_erasure_hits_the_cap() {
        let c = CodingConfig::uncoded(1, 1, 1, 0.0).with_options(ModelOptions {
            constant_erasure: Some(1.0),
            ..Default::default()
        });
        assert_eq!(run(&plan(c, 1, 1, SimMode::PacketErasure)), Err(SimError::TrialCap));
    }

    #[test]
    fn clean_symbol_channel_reproduces_rank_process() {
        // infinite SNR: P_q = 0, so every trial is exactly simulate_N on the
        // trial's stream
        let c = CodingConfig::uncoded(5, 10, 2, f64::INFINITY);
        let row = run(&plan(c, 300, 4, SimMode::SymbolLevel)).unwrap();
        let field = Field::new(2).unwrap();
        let total: u64 = (0..300)
            .map(|i| crate::rlnc::draws_to_full_rank(5, &field, &mut trial_rng(4, i)))
            .sum();
        assert_eq!(row.mean_t, total as f64 / 300.0);
        assert_eq!(row.epsilon_hat, 0.0);
    }

    #[test]
    fn z_score_edge_cases() {
        assert_eq!(z_score(1.0, 1.0, 0.0), 0.0);
        assert_eq!(z_score(2.0, 1.0, 0.0), f64::INFINITY);
        assert_eq!(z_score(0.0, 1.0, 0.0), f64::NEG_INFINITY);
        assert_eq!(z_score(1.5, 1.0, 0.25), 2.0);
    }
}
