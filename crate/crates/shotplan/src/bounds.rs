//! Closed-form sample-complexity and shot-count bounds.
//!
//! Every bound is available as the exact real value; operations whose
//! contract is a repetition count also ship the integer ceiling. Integer
//! logarithms are computed without floating point so values at exact powers
//! never round the wrong way.

use crate::error::{Error, Result};

/// One-sided Hoeffding tail for `n` i.i.d. samples with range `b − a`:
/// exp(−2nε²/range²).
pub fn hoeffding_tail(n: usize, epsilon: f64, range: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("sample count must be >= 1".into()));
    }
    if range <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "range must be positive, got {range}"
        )));
    }
    if epsilon < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be non-negative, got {epsilon}"
        )));
    }
    Ok((-2.0 * n as f64 * epsilon * epsilon / (range * range)).exp())
}

/// Samples achieving accuracy ε with probability 1 − δ for variables with the
/// given range: ln(2/δ)/(2ε²)·range².
pub fn hoeffding_samples_exact(epsilon: f64, delta: f64, range: f64) -> Result<f64> {
    if epsilon <= 0.0 || delta <= 0.0 {
        return Err(Error::InvalidArgument(
            "epsilon and delta must be positive".into(),
        ));
    }
    if range <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "range must be positive, got {range}"
        )));
    }
    Ok((2.0 / delta).ln() / (2.0 * epsilon * epsilon) * range * range)
}

/// [`hoeffding_samples_exact`], rounded up. With range 2 and δ → δ/m this is
/// the per-observable repetition count used by the scheduler.
pub fn hoeffding_samples(epsilon: f64, delta: f64, range: f64) -> Result<usize> {
    Ok(hoeffding_samples_exact(epsilon, delta, range)?.ceil() as usize)
}

/// Tail bound on a Binomial(n, p) count falling to `c` or below (meaningful
/// for c ≤ n·p): exp(−2n(p − c/n)²).
pub fn coverage_tail(n: usize, p: f64, c: usize) -> Result<f64> {
    coverage_tail_real(n as f64, p, c as f64)
}

/// Real-valued form of [`coverage_tail`], used when the shot count comes from
/// a formula rather than a count.
pub fn coverage_tail_real(n: f64, p: f64, c: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "probability p must be in (0, 1), got {p}"
        )));
    }
    if n < 1.0 {
        return Err(Error::InvalidArgument("shot count must be >= 1".into()));
    }
    if c < 0.0 || c > n * p {
        return Err(Error::InvalidArgument(format!(
            "count c={c} outside [0, n·p={}]",
            n * p
        )));
    }
    let gap = p - c / n;
    Ok((-2.0 * n * gap * gap).exp())
}

/// Minimum shots measuring all weight-≤k Pauli strings (k ≥ 2) at least once
/// with single-qubit operations: ceil(log2 n).
pub fn simple_set_lower_bound(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "lower bound needs n >= 2, got {n}"
        )));
    }
    Ok((usize::BITS - (n - 1).leading_zeros()) as usize)
}

/// Size of a multiset partition proven to exist for all weight-k strings with
/// multiplicity a·ln n each: 2(3^k·a + 3^(2k)·k)·ln n. An existence bound,
/// not a constructive target.
pub fn multiset_existence_bound(k: u32, a: f64, n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "existence bound needs n >= 3, got {n}"
        )));
    }
    if k == 0 || a <= 0.0 {
        return Err(Error::InvalidArgument(
            "need k >= 1 and a > 0".into(),
        ));
    }
    let three_k = 3f64.powi(k as i32);
    Ok(2.0 * (three_k * a + three_k * three_k * k as f64) * (n as f64).ln())
}

fn ceil_log3(n: usize) -> usize {
    let mut power = 1usize;
    let mut e = 0;
    while power < n {
        power = power.saturating_mul(3);
        e += 1;
    }
    e
}

/// Size of the deterministic reference partition for the weight-≤2 problem:
/// 6·ceil(log3 n) + 3.
pub fn reference_partition_size(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "reference partition needs n >= 2, got {n}"
        )));
    }
    Ok(6 * ceil_log3(n) + 3)
}

/// The smooth band (6·log3 n + 3, 6·log3 n + 9) bracketing the reference
/// partition size, used as plot guides.
pub fn reference_partition_band(n: usize) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "reference partition needs n >= 2, got {n}"
        )));
    }
    let log3 = (n as f64).ln() / 3f64.ln();
    Ok((6.0 * log3 + 3.0, 6.0 * log3 + 9.0))
}
