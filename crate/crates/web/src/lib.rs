//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Three interactive operations: throughput/data-rate curves versus packet
//! length, the same versus alphabet size, and a simulated distribution of the
//! number of coded packets needed to decode next to its closed form.
//! The plain-Rust functions carry the logic so they can be tested natively;
//! the `#[wasm_bindgen]` wrappers only convert errors.

use rlnc_core::model::{self, CodingConfig, ModelOptions, QamArgument};
use rlnc_core::montecarlo::trial_rng;
use rlnc_core::rlnc::draws_to_full_rank;
use rlnc_core::sweep::{self, PrecodeMode, SweepSpec, Variable};
use rlnc_core::Field;
use wasm_bindgen::prelude::*;

/// One sampled curve: `S` and `R` over a grid, with their maximisers.
#[wasm_bindgen]
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    x: Vec<f64>,
    s: Vec<f64>,
    r: Vec<f64>,
    argmax_s: u32,
    argmax_r: u32,
}

#[wasm_bindgen]
impl Curve {
    pub fn x(&self) -> Vec<f64> {
        self.x.clone()
    }

    pub fn s(&self) -> Vec<f64> {
        self.s.clone()
    }

    pub fn r(&self) -> Vec<f64> {
        self.r.clone()
    }

    #[wasm_bindgen(getter = argmaxS)]
    pub fn argmax_s(&self) -> u32 {
        self.argmax_s
    }

    #[wasm_bindgen(getter = argmaxR)]
    pub fn argmax_r(&self) -> u32 {
        self.argmax_r
    }
}

fn options(literal: bool) -> ModelOptions {
    ModelOptions {
        qam: if literal {
            QamArgument::Literal
        } else {
            QamArgument::SquareRoot
        },
        ..ModelOptions::default()
    }
}

/// `precode` is `"none"`, `"rate"` (value = k/n) or `"k"` (value = k).
fn precode_mode(precode: &str, value: f64) -> Result<PrecodeMode, String> {
    match precode {
        "none" => Ok(PrecodeMode::None),
        "rate" => Ok(PrecodeMode::FixedRate { rate: value }),
        "k" if value >= 1.0 => Ok(PrecodeMode::FixedInfo { k: value as u64 }),
        "k" => Err(format!("pre-code dimension must be at least 1, got {value}")),
        other => Err(format!("unknown pre-code mode `{other}`")),
    }
}

fn curve(spec: SweepSpec) -> Result<Curve, String> {
    let result = sweep::run_sweep(&spec).map_err(|e| e.to_string())?;
    Ok(Curve {
        x: result.grid.iter().map(|&v| v as f64).collect(),
        s: result.rows.iter().map(|r| r.s).collect(),
        r: result.rows.iter().map(|r| r.r).collect(),
        argmax_s: result.argmax_s as u32,
        argmax_r: result.argmax_r as u32,
    })
}

/// At most this many points per curve; longer ranges are strided.
const MAX_POINTS: u64 = 800;

pub fn curve_vs_packet_len(
    generation_size: u32,
    u: u32,
    snr_db: f64,
    n_max: u32,
    precode: &str,
    precode_value: f64,
    literal: bool,
) -> Result<Curve, String> {
    let n_max = n_max.max(1) as u64;
    let step = n_max.div_ceil(MAX_POINTS).max(1);
    let mode = precode_mode(precode, precode_value)?;
    let from = match mode {
        PrecodeMode::FixedInfo { k } => k,
        _ => 1,
    };
    let grid = sweep::linear_grid(from, n_max.max(from), step).map_err(|e| e.to_string())?;
    curve(SweepSpec {
        base: CodingConfig::uncoded(generation_size as u64, 1, u, snr_db).with_options(options(literal)),
        variable: Variable::PacketLen,
        grid,
        precode: mode,
    })
}

pub fn curve_vs_field_bits(
    generation_size: u32,
    n: u32,
    snr_db: f64,
    u_max: u32,
    precode_k: u32,
    literal: bool,
) -> Result<Curve, String> {
    let mode = if precode_k == 0 {
        PrecodeMode::None
    } else {
        PrecodeMode::FixedInfo { k: precode_k as u64 }
    };
    curve(SweepSpec {
        base: CodingConfig::uncoded(generation_size as u64, n as u64, 1, snr_db).with_options(options(literal)),
        variable: Variable::FieldBits,
        grid: (1..=u_max.clamp(1, 63) as u64).collect(),
        precode: mode,
    })
}

/// Empirical and closed-form CDF of the number of uniform random coefficient
/// vectors needed to reach full rank.
#[wasm_bindgen]
#[derive(Debug, Clone, PartialEq)]
pub struct RankDistribution {
    j: Vec<f64>,
    empirical: Vec<f64>,
    analytic: Vec<f64>,
    mean: f64,
    expected: f64,
}

#[wasm_bindgen]
impl RankDistribution {
    pub fn j(&self) -> Vec<f64> {
        self.j.clone()
    }

    pub fn empirical(&self) -> Vec<f64> {
        self.empirical.clone()
    }

    pub fn analytic(&self) -> Vec<f64> {
        self.analytic.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn mean(&self) -> f64 {
        self.mean
    }

    #[wasm_bindgen(getter)]
    pub fn expected(&self) -> f64 {
        self.expected
    }
}

pub fn rank_distribution_native(generation_size: u32, u: u32, trials: u32, seed: u64) -> Result<RankDistribution, String> {
    if generation_size == 0 || trials == 0 {
        return Err("generation size and trials must be positive".into());
    }
    let field = Field::new(u).map_err(|e| e.to_string())?;
    let size = generation_size as usize;
    let draws: Vec<u64> = (0..trials as u64)
        .map(|i| draws_to_full_rank(size, &field, &mut trial_rng(seed, i)))
        .collect();
    let k = generation_size as u64;
    let max = *draws.iter().max().expect("trials > 0");
    let mut counts = vec![0u64; (max - k + 1) as usize];
    for &d in &draws {
        counts[(d - k) as usize] += 1;
    }
    let q = field.order() as f64;
    let mut running = 0u64;
    let (mut j, mut empirical, mut analytic) = (Vec::new(), Vec::new(), Vec::new());
    for (offset, c) in counts.iter().enumerate() {
        running += c;
        let value = k + offset as u64;
        j.push(value as f64);
        empirical.push(running as f64 / trials as f64);
        analytic.push(model::rank_cdf(k, q, value));
    }
    Ok(RankDistribution {
        j,
        empirical,
        analytic,
        mean: draws.iter().sum::<u64>() as f64 / trials as f64,
        expected: model::expected_n(k, q),
    })
}

#[wasm_bindgen(js_name = throughputVsPacketLength)]
pub fn throughput_vs_packet_length(
    generation_size: u32,
    u: u32,
    snr_db: f64,
    n_max: u32,
    precode: &str,
    precode_value: f64,
    literal: bool,
) -> Result<Curve, JsError> {
    curve_vs_packet_len(generation_size, u, snr_db, n_max, precode, precode_value, literal).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = throughputVsAlphabet)]
pub fn throughput_vs_alphabet(
    generation_size: u32,
    n: u32,
    snr_db: f64,
    u_max: u32,
    precode_k: u32,
    literal: bool,
) -> Result<Curve, JsError> {
    curve_vs_field_bits(generation_size, n, snr_db, u_max, precode_k, literal).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = rankDistribution)]
pub fn rank_distribution(generation_size: u32, u: u32, trials: u32, seed: u32) -> Result<RankDistribution, JsError> {
    rank_distribution_native(generation_size, u, trials, seed as u64).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packet_length_curve_matches_library() {
        let c = curve_vs_packet_len(80, 3, 3.5, 400, "none", 0.0, false).unwrap();
        assert_eq!(c.x.len(), 400);
        assert_eq!(c.argmax_s, 8);
        let direct = model::throughput(&CodingConfig::uncoded(80, 8, 3, 3.5)).unwrap();
        assert_eq!(c.s[7], direct.s);
    }

    #[test]
    fn long_ranges_are_strided() {
        let c = curve_vs_packet_len(80, 3, 3.5, 20_000, "rate", 0.5, false).unwrap();
        assert!(c.x.len() as u64 <= MAX_POINTS);
        assert_eq!(c.x[1] - c.x[0], 25.0);
        let c = curve_vs_packet_len(80, 3, 3.5, 1000, "k", 400.0, false).unwrap();
        assert_eq!(c.x[0], 400.0);
    }

    #[test]
    fn bad_precode_modes() {
        assert!(curve_vs_packet_len(80, 3, 3.5, 10, "rate", 1.5, false).is_err());
        assert!(curve_vs_packet_len(80, 3, 3.5, 10, "k", 0.0, false).is_err());
        assert!(curve_vs_packet_len(80, 3, 3.5, 10, "other", 0.0, false).is_err());
    }

    #[test]
    fn alphabet_curve() {
        let plain = curve_vs_field_bits(80, 200, 3.5, 16, 0, false).unwrap();
        let coded = curve_vs_field_bits(80, 200, 3.5, 16, 100, false).unwrap();
        assert_eq!(plain.x.len(), 16);
        assert!(coded.argmax_s >= plain.argmax_s);
    }

    #[test]
    fn rank_distribution_tracks_closed_form() {
        let d = rank_distribution_native(4, 1, 4000, 7).unwrap();
        assert_eq!(d.j[0], 4.0);
        assert_eq!(*d.empirical.last().unwrap(), 1.0);
        for (e, a) in d.empirical.iter().zip(&d.analytic) {
            // binomial standard error at n = 4000 is below 0.008
            assert!((e - a).abs() < 0.04, "{e} vs {a}");
        }
        assert!((d.mean - d.expected).abs() < 0.2);
        assert!(rank_distribution_native(0, 1, 10, 0).is_err());
        assert!(rank_distribution_native(4, 17, 10, 0).is_err());
    }
}
