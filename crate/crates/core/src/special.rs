//! Numerical helpers: Gaussian tail, log-binomials, and log-domain sums over
//! unimodal sequences.

use std::f64::consts::SQRT_2;

/// Gaussian tail probability `Q(x) = P(Z > x)`.
pub fn gaussian_q(x: f64) -> f64 {
    if x == f64::INFINITY {
        return 0.0;
    }
    0.5 * libm::erfc(x / SQRT_2)
}

/// Exact binomial coefficient for `n <= 64`.
pub fn binomial_exact(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    if n > 64 {
        return None;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) is always an integer at this point
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    Some(acc)
}

/// `ln C(n, k)`; exact for `n <= 64`, log-gamma otherwise.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    if let Some(exact) = binomial_exact(n, k) {
        return (exact as f64).ln();
    }
    if k == 0 || k == n {
        return 0.0;
    }
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Log-domain accumulator.
#[derive(Debug, Clone, Copy)]
pub struct LogSum {
    max: f64,
    scaled: f64,
}

impl Default for LogSum {
    fn default() -> Self {
        Self {
            max: f64::NEG_INFINITY,
            scaled: 0.0,
        }
    }
}

impl LogSum {
    pub fn add(&mut self, ln_term: f64) {
        if ln_term == f64::NEG_INFINITY {
            return;
        }
        if ln_term > self.max {
            self.scaled = self.scaled * (self.max - ln_term).exp() + 1.0;
            self.max = ln_term;
        } else {
            self.scaled += (ln_term - self.max).exp();
        }
    }

    pub fn ln(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.scaled.ln()
        }
    }
}

/// Terms this far below the running peak (in natural log) no longer change a
/// double-precision sum.
const NEGLIGIBLE: f64 = 45.0;

/// `ln sum_{i=lo}^{hi} exp(term(i))` for a log-concave `term` whose peak is
/// near `peak`. Summation starts at the peak (clamped into range) and walks
/// outward until terms are negligible.
pub fn ln_sum_unimodal(lo: u64, hi: u64, peak: u64, term: impl Fn(u64) -> f64) -> f64 {
    if lo > hi {
        return f64::NEG_INFINITY;
    }
    let start = peak.clamp(lo, hi);
    let mut acc = LogSum::default();
    let first = term(start);
    acc.add(first);
    let mut top = first;
    let mut i = start;
    while i > lo {
        i -= 1;
        let t = term(i);
        acc.add(t);
        top = top.max(t);
        if t < top - NEGLIGIBLE {
            break;
        }
    }
    let mut top = first;
    let mut i = start;
    while i < hi {
        i += 1;
        let t = term(i);
        acc.add(t);
        top = top.max(t);
        if t < top - NEGLIGIBLE {
            break;
        }
    }
    acc.ln()
}
