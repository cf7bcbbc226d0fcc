//! Closed-form throughput model for random linear coding over an erasure
//! channel whose erasure probability grows with packet length.
//!
//! A packet of `n` symbols over GF(q) carries `K` coefficient symbols of
//! header overhead. Without a pre-code a packet survives only if all `n`
//! symbols are detected correctly; with a rate `k/n` pre-code it survives
//! whenever at most `t` symbols are wrong, where `t` comes from the
//! Gilbert-Varshamov distance of the pre-code.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::special::{gaussian_q, ln_binomial, ln_sum_unimodal};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("generation size K must be at least 1")]
    EmptyGeneration,
    #[error("symbols per packet n must be at least 1")]
    EmptyPacket,
    #[error("information symbols k={k} must satisfy 1 <= k <= n={n}")]
    InfoLength { k: u64, n: u64 },
    #[error("without a pre-code k must equal n (k={k}, n={n})")]
    UncodedInfoLength { k: u64, n: u64 },
    #[error("symbol exponent u={0} must be in 1..=63")]
    FieldBits(u32),
    #[error("SNR per bit must be a number, got {0}")]
    Snr(f64),
    #[error("constant erasure probability {0} outside [0, 1]")]
    ConstantErasure(f64),
}

/// How the QAM symbol error formula treats the Q-function argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QamArgument {
    /// `Q(sqrt(3 g log2 q / (q - 1)))`, the optimum-detector expression.
    #[default]
    SquareRoot,
    /// `Q(3 g log2 q / (q - 1))` with no square root.
    Literal,
}

/// Which distance the Gilbert-Varshamov computation reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GvForm {
    /// Largest `d` with `sum_{i<=d-2} C(n-1,i)(q-1)^i < q^(n-k)`: a code with
    /// at least this distance is guaranteed to exist.
    #[default]
    Guaranteed,
    /// Smallest `d` whose sum reaches `q^(n-k)` (one more than `Guaranteed`).
    Infimum,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ModelOptions {
    pub qam: QamArgument,
    pub gv: GvForm,
    /// Replace the length-dependent erasure model with a fixed probability.
    pub constant_erasure: Option<f64>,
}

/// One operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CodingConfig {
    /// `K`
    pub generation_size: u64,
    /// `n`
    pub packet_len: u64,
    /// `k`; equals `packet_len` when `precode` is off.
    pub info_len: u64,
    /// `u`, with `q = 2^u`.
    pub field_bits: u32,
    pub snr_db: f64,
    pub precode: bool,
    #[serde(default)]
    pub options: ModelOptions,
}

impl CodingConfig {
    /// An uncoded configuration (`k = n`).
    pub fn uncoded(generation_size: u64, packet_len: u64, field_bits: u32, snr_db: f64) -> Self {
        Self {
            generation_size,
            packet_len,
            info_len: packet_len,
            field_bits,
            snr_db,
            precode: false,
            options: ModelOptions::default(),
        }
    }

    pub fn precoded(generation_size: u64, packet_len: u64, info_len: u64, field_bits: u32, snr_db: f64) -> Self {
        Self {
            info_len,
            precode: true,
            ..Self::uncoded(generation_size, packet_len, field_bits, snr_db)
        }
    }

    pub fn with_options(mut self, options: ModelOptions) -> Self {
        self.options = options;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.generation_size == 0 {
            return Err(ConfigError::EmptyGeneration);
        }
        if self.packet_len == 0 {
            return Err(ConfigError::EmptyPacket);
        }
        if self.info_len == 0 || self.info_len > self.packet_len {
            return Err(ConfigError::InfoLength {
                k: self.info_len,
                n: self.packet_len,
            });
        }
        if !self.precode && self.info_len != self.packet_len {
            return Err(ConfigError::UncodedInfoLength {
                k: self.info_len,
                n: self.packet_len,
            });
        }
        if !(1..=63).contains(&self.field_bits) {
            return Err(ConfigError::FieldBits(self.field_bits));
        }
        if self.snr_db.is_nan() {
            return Err(ConfigError::Snr(self.snr_db));
        }
        if let Some(e) = self.options.constant_erasure {
            if !(0.0..=1.0).contains(&e) {
                return Err(ConfigError::ConstantErasure(e));
            }
        }
        Ok(())
    }

    /// Field size as an integer.
    pub fn q(&self) -> u64 {
        1u64 << self.field_bits
    }

    /// Pre-code rate `k / n`.
    pub fn precode_rate(&self) -> f64 {
        self.info_len as f64 / self.packet_len as f64
    }
}

/// Every model output for one operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    /// Symbol error probability.
    pub p_q: f64,
    /// Packet erasure probability. With a pre-code this is the erasure rate of
    /// a bounded-distance decoder correcting `t` errors.
    pub epsilon: f64,
    /// `E[N]`.
    pub expected_n: f64,
    /// Throughput in packets per transmission; equals `s_lb` with a pre-code.
    pub s: f64,
    /// Data rate in bits per transmission; equals `r_lb` with a pre-code.
    pub r: f64,
    pub d: Option<u64>,
    pub t: Option<u64>,
    pub s_lb: Option<f64>,
    pub r_lb: Option<f64>,
}

/// `P(N <= j)`: probability that a uniform random `K x j` matrix over GF(q)
/// has rank `K`.
pub fn rank_cdf(k: u64, q: f64, j: u64) -> f64 {
    if j < k {
        return 0.0;
    }
    ln_rank_cdf(k, q, j).exp()
}

fn ln_rank_cdf(k: u64, q: f64, j: u64) -> f64 {
    // factors (1 - q^-(j-i)) for i = 0..K, i.e. exponents j-K+1 ..= j
    let ln_q = q.ln();
    (j - k + 1..=j).map(|m| (-(-(m as f64) * ln_q).exp()).ln_1p()).sum()
}

/// `E[N] = sum_{i=1}^{K} 1 / (1 - q^-i)`. Zero for `K = 0`.
pub fn expected_n(k: u64, q: f64) -> f64 {
    let ln_q = q.ln();
    // 1 - q^-i as -expm1(-i ln q)
    (1..=k).map(|i| 1.0 / -(-(i as f64) * ln_q).exp_m1()).sum()
}

/// `E[N]` from the tail series `K + sum_{j>=K} P(N > j)`, truncated once a
/// term drops below `1e-12`.
pub fn expected_n_series(k: u64, q: f64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let mut total = k as f64;
    let mut j = k;
    loop {
        let tail = -ln_rank_cdf(k, q, j).exp_m1();
        total += tail;
        if tail < 1e-12 {
            break;
        }
        j += 1;
    }
    total
}

/// Symbol error probability of square `q`-QAM on an AWGN channel with SNR per
/// bit `snr_db` (in dB). Exact for even `log2 q`.
pub fn symbol_error_qam(q: f64, snr_db: f64, argument: QamArgument) -> f64 {
    let gamma_b = 10f64.powf(snr_db / 10.0);
    let energy = 3.0 * gamma_b * q.log2() / (q - 1.0);
    let x = match argument {
        QamArgument::SquareRoot => energy.sqrt(),
        QamArgument::Literal => energy,
    };
    let rail = 2.0 * (1.0 - 1.0 / q.sqrt()) * gaussian_q(x);
    // 1 - (1 - a)^2 without cancellation
    (rail * (2.0 - rail)).clamp(0.0, 1.0)
}

/// `(1 - P_q)^n`: probability that all `n` symbols arrive intact.
pub fn packet_success(n: u64, p_q: f64) -> f64 {
    (n as f64 * (-p_q).ln_1p()).exp()
}

/// `1 - (1 - P_q)^n`.
pub fn erasure_no_precode(n: u64, p_q: f64) -> f64 {
    -(n as f64 * (-p_q).ln_1p()).exp_m1()
}

/// Gilbert-Varshamov distance for a q-ary code of length `n` and dimension
/// `k`. Exact big-integer arithmetic for `n <= 64`, log domain beyond.
pub fn gv_distance(n: u64, k: u64, q: u64, form: GvForm) -> u64 {
    assert!(k >= 1 && k <= n, "gv_distance needs 1 <= k <= n");
    assert!(q >= 2, "gv_distance needs q >= 2");
    let guaranteed = if n <= 64 {
        gv_exact(n, k, q)
    } else {
        gv_log(n, k, q)
    };
    match form {
        GvForm::Guaranteed => guaranteed,
        // the infimum is the first d at which the strict inequality fails
        GvForm::Infimum => guaranteed + 1,
    }
}

fn gv_exact(n: u64, k: u64, q: u64) -> u64 {
    let threshold = BigUint::from(q).pow((n - k) as u32);
    let mut sum = BigUint::from(0u32);
    let mut power = BigUint::from(1u32);
    let mut d = 1;
    // sum holds sum_{i<=d-2}; try d + 1 by adding the term i = d - 1
    while d < n {
        let i = d - 1;
        let binom = crate::special::binomial_exact(n - 1, i).expect("n <= 64");
        sum += BigUint::from(binom) * &power;
        if sum >= threshold {
            break;
        }
        power *= q - 1;
        d += 1;
    }
    d
}

fn gv_log(n: u64, k: u64, q: u64) -> u64 {
    let qf = q as f64;
    let ln_qm1 = (qf - 1.0).ln();
    let threshold = (n - k) as f64 * qf.ln();
    let peak = ((n - 1) as f64 * (qf - 1.0) / qf).floor() as u64;
    let term = |i: u64| ln_binomial(n - 1, i) + i as f64 * ln_qm1;
    // the full sum over i <= n-1 is q^(n-1); past the peak compare the upper
    // remainder instead, which keeps precision when the lower sum is near q^(n-1)
    let complement_threshold = (n - 1) as f64 * qf.ln() + (-qf.powf(1.0 - k as f64)).ln_1p();
    let admissible = |d: u64| {
        if d == 1 {
            true
        } else if d - 2 < peak {
            ln_sum_unimodal(0, d - 2, peak, term) < threshold
        } else {
            ln_sum_unimodal(d - 1, n - 1, peak, term) > complement_threshold
        }
    };
    // largest admissible d in [1, n]; admissibility is a prefix property
    let (mut lo, mut hi) = (1u64, n);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if admissible(mid) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// Symbol errors a bounded-distance decoder corrects at distance `d`.
pub fn correctable_errors(d: u64) -> u64 {
    d.saturating_sub(1) / 2
}

/// `sum_{i=0}^{t} C(n,i) P_q^i (1-P_q)^(n-i)`, evaluated in the log domain.
pub fn decode_success_precode(n: u64, t: u64, p_q: f64) -> f64 {
    bounded_distance_outcome(n, t, p_q).0
}

/// `(P(errors <= t), P(errors > t))` for `Binomial(n, P_q)` errors. Whichever
/// side excludes the mode is summed directly and the other is its complement,
/// so both values keep full relative precision where it matters. The `t = 0`
/// success is exactly `(1 - P_q)^n`.
pub fn bounded_distance_outcome(n: u64, t: u64, p_q: f64) -> (f64, f64) {
    if t >= n || p_q <= 0.0 {
        return (1.0, 0.0);
    }
    if p_q >= 1.0 {
        return (0.0, 1.0);
    }
    let ln_p = p_q.ln();
    let ln_fail = (-p_q).ln_1p();
    let term = |i: u64| ln_binomial(n, i) + i as f64 * ln_p + (n - i) as f64 * ln_fail;
    let peak = ((n + 1) as f64 * p_q).floor() as u64;
    if t > 0 && t > peak {
        let ln_upper = ln_sum_unimodal(t + 1, n, peak, term);
        let upper = ln_upper.exp().min(1.0);
        ((-ln_upper.exp_m1()).clamp(0.0, 1.0), upper)
    } else {
        let ln_lower = ln_sum_unimodal(0, t, peak, term);
        let lower = ln_lower.exp().min(1.0);
        (lower, (-ln_lower.exp_m1()).clamp(0.0, 1.0))
    }
}

/// Evaluate the model with the QAM symbol error probability.
pub fn throughput(config: &CodingConfig) -> Result<MetricsRow, ConfigError> {
    config.validate()?;
    let p_q = symbol_error_qam(config.q() as f64, config.snr_db, config.options.qam);
    evaluate(config, p_q)
}

/// Evaluate the model for an externally supplied symbol error probability.
pub fn evaluate(config: &CodingConfig, p_q: f64) -> Result<MetricsRow, ConfigError> {
    config.validate()?;
    let big_k = config.generation_size;
    let n = config.packet_len;
    let k = config.info_len;
    let bits = config.field_bits as f64;
    let expected = expected_n(big_k, config.q() as f64);
    let coding_efficiency = big_k as f64 / expected;
    let header_share = |info: u64| info as f64 / (n + big_k) as f64;

    if !config.precode {
        let (success, epsilon) = match config.options.constant_erasure {
            Some(e) => (1.0 - e, e),
            None => (packet_success(n, p_q), erasure_no_precode(n, p_q)),
        };
        let s = coding_efficiency * header_share(n) * success;
        return Ok(MetricsRow {
            p_q,
            epsilon,
            expected_n: expected,
            s,
            r: s * n as f64 * bits,
            d: None,
            t: None,
            s_lb: None,
            r_lb: None,
        });
    }

    let d = gv_distance(n, k, config.q(), config.options.gv);
    let t = correctable_errors(d);
    let (success, epsilon) = match config.options.constant_erasure {
        Some(e) => (1.0 - e, e),
        None => bounded_distance_outcome(n, t, p_q),
    };
    let s_lb = coding_efficiency * header_share(k) * success;
    let r_lb = s_lb * k as f64 * bits;
    Ok(MetricsRow {
        p_q,
        epsilon,
        expected_n: expected,
        s: s_lb,
        r: r_lb,
        d: Some(d),
        t: Some(t),
        s_lb: Some(s_lb),
        r_lb: Some(r_lb),
    })
}
