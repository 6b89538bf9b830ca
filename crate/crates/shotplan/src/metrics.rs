//! Standard-deviation model and schedule quality metrics.
//!
//! The estimator standard deviation of a Pauli expectation value, averaged
//! over uniformly random states, is π/(4√w) after w measurements (pure
//! states) or 9π/(32√w) (mixed states). Quality metrics normalize against
//! the theoretical optimum for the nine-basis two-qubit problem, where every
//! observable is measured from every ninth shot. Ratios use the pure-state
//! average; the mixed-state average rescales numerator and reference by the
//! same 9/8 factor and leaves every normalized ratio unchanged.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::schedule::{MeasurementRequest, Schedule};
use crate::verify::validate_schedule;

/// Average standard deviation over pure states after `w` measurements.
pub fn sigma_pure(w: usize) -> Result<f64> {
    if w == 0 {
        return Err(Error::InvalidArgument("w must be >= 1".into()));
    }
    Ok(PI / (4.0 * (w as f64).sqrt()))
}

/// Average standard deviation over mixed states after `w` measurements.
pub fn sigma_mixed(w: usize) -> Result<f64> {
    if w == 0 {
        return Err(Error::InvalidArgument("w must be >= 1".into()));
    }
    Ok(9.0 * PI / (32.0 * (w as f64).sqrt()))
}

/// The optimal average standard deviation with `m_shots` total shots: each
/// observable measured from every ninth shot, σ = (π/4)·√(9/M).
pub fn sigma_optimal(m_shots: usize) -> Result<f64> {
    if m_shots == 0 {
        return Err(Error::InvalidArgument("shot count must be >= 1".into()));
    }
    Ok(PI / 4.0 * (9.0 / m_shots as f64).sqrt())
}

fn require_power_of_two(n: usize) -> Result<usize> {
    if n < 4 || !n.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "QOT ratios require a power-of-two qubit count >= 4, got {n}"
        )));
    }
    Ok(n.trailing_zeros() as usize)
}

fn binomial_f64(n: usize, k: usize) -> f64 {
    let mut r = 1.0f64;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r
}

/// Average standard deviation of the QOT family over all two-qubit
/// observables, normalized by the optimum:
/// 1/(3(n−1)) · √((2·log2 n + 1)/3) ·
/// Σ_i C(log2 n, i)·[1/√(2(log2 n − i) + 1) + 2/√i].
pub fn qot_avg_ratio(n: usize) -> Result<f64> {
    let a = require_power_of_two(n)?;
    let mut sum = 0.0;
    for i in 1..=a {
        let same = 1.0 / ((2 * (a - i) + 1) as f64).sqrt();
        let cross = 2.0 / (i as f64).sqrt();
        sum += binomial_f64(a, i) * (same + cross);
    }
    let prefactor =
        1.0 / (3.0 * (n as f64 - 1.0)) * (((2 * a + 1) as f64) / 3.0).sqrt();
    Ok(prefactor * sum)
}

/// Worst-case QOT standard deviation over all two-qubit observables,
/// normalized by the optimum: √((2·log2 n + 1)/3).
pub fn qot_worst_ratio(n: usize) -> Result<f64> {
    let a = require_power_of_two(n)?;
    Ok((((2 * a + 1) as f64) / 3.0).sqrt())
}

/// The large-n limit of [`qot_avg_ratio`]: (4 + √2)/(3√3) ≈ 1.0420.
pub fn asymptotic_constant() -> f64 {
    (4.0 + 2f64.sqrt()) / (3.0 * 3f64.sqrt())
}

/// Bounds on the trace distance of a k-qubit state reconstructed from
/// expectation values, each off by at most `max_eps`:
/// 2^(−k/2)·max_eps ≤ D ≤ 4^k·max_eps.
pub fn trace_distance_bounds(k: u32, max_eps: f64) -> Result<(f64, f64)> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be >= 1".into()));
    }
    if max_eps < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "max_eps must be non-negative, got {max_eps}"
        )));
    }
    let lower = 2f64.powf(-(k as f64) / 2.0) * max_eps;
    let upper = 4f64.powi(k as i32) * max_eps;
    Ok((lower, upper))
}

/// Quality metrics of a schedule against its requests.
#[derive(Debug, Clone)]
pub struct ScheduleQuality {
    pub total_shots: usize,
    /// Shots serving each observable, scaled by the repeat count.
    pub per_observable_counts: Vec<usize>,
    /// Mean over observables of σ(count)/σ_optimal(total).
    pub avg_sd_ratio: f64,
    /// Maximum of the same ratio.
    pub worst_sd_ratio: f64,
    /// Shot count divided by the requested multiplicity; for non-uniform
    /// requests the minimum multiplicity is used and the flag below is
    /// cleared.
    pub shots_per_repetition: f64,
    pub uniform_multiplicity: bool,
}

/// Evaluate a schedule repeated `repeats` times: with M = repeats·shots total
/// shots, observable o is measured c_o = repeats·|assignment[o]| times and
/// its SD ratio is σ_pure(c_o)/σ_optimal(M).
pub fn schedule_quality(
    schedule: &Schedule,
    requests: &[MeasurementRequest],
    repeats: usize,
) -> Result<ScheduleQuality> {
    if repeats == 0 {
        return Err(Error::InvalidArgument("repeats must be >= 1".into()));
    }
    if requests.is_empty() {
        return Err(Error::InvalidArgument(
            "schedule serves no observables".into(),
        ));
    }
    let report = validate_schedule(schedule, requests, schedule.relation);
    if !report.is_valid() {
        let first = report.violations().first().unwrap();
        return Err(Error::InvalidSchedule(format!(
            "{} violation(s), first: {first}",
            report.violations().len()
        )));
    }

    let total_shots = repeats * schedule.shot_count();
    let reference = sigma_optimal(total_shots)?;
    let mut counts = Vec::with_capacity(requests.len());
    let mut sum = 0.0;
    let mut worst = 0.0f64;
    for assigned in &schedule.assignment {
        let c = repeats * assigned.len();
        counts.push(c);
        let ratio = sigma_pure(c)? / reference;
        sum += ratio;
        worst = worst.max(ratio);
    }
    let avg = sum / requests.len() as f64;

    let min_w = requests.iter().map(|r| r.multiplicity).min().unwrap();
    let max_w = requests.iter().map(|r| r.multiplicity).max().unwrap();
    Ok(ScheduleQuality {
        total_shots,
        per_observable_counts: counts,
        avg_sd_ratio: avg,
        worst_sd_ratio: worst,
        shots_per_repetition: schedule.shot_count() as f64 / min_w as f64,
        uniform_multiplicity: min_w == max_w,
    })
}

/// Quality of a shot family when every consistent measurement is harvested:
/// observable o's count is the number of bases that measure it, not just the
/// slots a scheduler reserved for it. This is the natural reading of a run —
/// a shot yields outcomes for every observable its basis covers — and it is
/// what the closed-form QOT ratios count, so cross-method comparisons use
/// this. Errors if some observable is never measured.
pub fn coverage_quality(
    bases: &[crate::pauli::PauliString],
    observables: &[crate::pauli::PauliString],
    repeats: usize,
) -> Result<ScheduleQuality> {
    let (schedule, requests) = crate::baseline::family_to_schedule(
        bases,
        observables,
        crate::pauli::Relation::QubitWise,
    )?;
    if requests.len() != observables.len() {
        return Err(Error::InvalidArgument(format!(
            "{} of {} observables are never measured by the family",
            observables.len() - requests.len(),
            observables.len()
        )));
    }
    schedule_quality(&schedule, &requests, repeats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baseline::{family_to_schedule, qot_family};
    use crate::pauli::{enumerate_weight_k, Relation, WeightMode};
    use crate::schedule::{greedy_partition, uniform_requests};

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn sigma_examples() {
        close(sigma_pure(1).unwrap(), PI / 4.0, 1e-15);
        close(sigma_pure(4).unwrap(), PI / 8.0, 1e-15);
        close(sigma_mixed(1).unwrap(), 9.0 * PI / 32.0, 1e-15);
        for w in [1usize, 2, 9, 100] {
            close(
                sigma_mixed(w).unwrap() / sigma_pure(w).unwrap(),
                9.0 / 8.0,
                1e-12,
            );
        }
        close(sigma_optimal(9).unwrap(), PI / 4.0, 1e-15);
        close(sigma_optimal(900).unwrap(), PI / 40.0, 1e-15);
        close(sigma_optimal(36).unwrap(), PI / 8.0, 1e-15);
        assert!(sigma_pure(0).is_err());
        assert!(sigma_optimal(0).is_err());
    }

    /// Adaptive Simpson quadrature, the independent oracle for the σ
    /// constants.
    fn simpson<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, tol: f64) -> f64 {
        fn rec<F: Fn(f64) -> f64 + Copy>(
            f: F,
            a: f64,
            b: f64,
            fa: f64,
            fb: f64,
            fm: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let lm = 0.5 * (a + m);
            let rm = 0.5 * (m + b);
            let flm = f(lm);
            let frm = f(rm);
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                left + right + (left + right - whole) / 15.0
            } else {
                rec(f, a, m, fa, fm, flm, left, tol / 2.0, depth - 1)
                    + rec(f, m, b, fm, fb, frm, right, tol / 2.0, depth - 1)
            }
        }
        let fa = f(a);
        let fb = f(b);
        let m = 0.5 * (a + b);
        let fm = f(m);
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        rec(f, a, b, fa, fb, fm, whole, tol, 40)
    }

    #[test]
    fn sigma_pure_matches_bloch_sphere_quadrature() {
        // (1/4π) ∫ dθ dφ sinθ √(1 − cos²θ) over the sphere, φ integrated out.
        let value = simpson(
            |theta| 0.5 * theta.sin() * (1.0 - theta.cos().powi(2)).sqrt(),
            0.0,
            PI,
            1e-10,
        );
        close(value, sigma_pure(1).unwrap(), 1e-6);
    }

    #[test]
    fn sigma_mixed_matches_bloch_ball_quadrature() {
        // (3/4π) ∫ r² dr sinθ dθ dφ √(1 − r²cos²θ), φ integrated out.
        let value = simpson(
            |r| {
                simpson(
                    move |theta| {
                        1.5 * r * r * theta.sin() * (1.0 - (r * theta.cos()).powi(2)).sqrt()
                    },
                    0.0,
                    PI,
                    1e-11,
                )
            },
            0.0,
            1.0,
            1e-10,
        );
        close(value, sigma_mixed(1).unwrap(), 1e-6);
    }

    #[test]
    fn sigma_pure_matches_monte_carlo() {
        // E over uniform sphere points of √(1 − z²) with z ~ U[-1, 1].
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let samples = 1_000_000;
        let mean: f64 = (0..samples)
            .map(|_| {
                let z: f64 = rng.gen_range(-1.0..=1.0);
                (1.0 - z * z).sqrt()
            })
            .sum::<f64>()
            / samples as f64;
        close(mean, PI / 4.0, 1e-3);
    }

    /// Count-based oracle: build the family, count every observable's
    /// multiplicity, average √((6·log2 n + 3)/9)/√c over observables.
    fn qot_ratios_brute_force(n: usize) -> (f64, f64) {
        let family = qot_family(n).unwrap();
        let obs = enumerate_weight_k(n, 2, WeightMode::Exactly).unwrap();
        let counts = crate::verify::coverage_counts(&family.shots, &obs).unwrap();
        let norm = ((family.shots.len() as f64) / 9.0).sqrt();
        let mut sum = 0.0;
        let mut worst = 0.0f64;
        for &c in &counts {
            assert!(c >= 1);
            let ratio = norm / (c as f64).sqrt();
            sum += ratio;
            worst = worst.max(ratio);
        }
        (sum / counts.len() as f64, worst)
    }

    #[test]
    fn qot_avg_ratio_matches_oracle() {
        for n in [4usize, 8, 16, 32, 64] {
            let (avg, _) = qot_ratios_brute_force(n);
            close(qot_avg_ratio(n).unwrap(), avg, 1e-9);
        }
        close(qot_avg_ratio(4).unwrap(), 1.086, 1e-3);
        assert!(qot_avg_ratio(6).is_err());
    }

    #[test]
    fn qot_worst_ratio_matches_oracle() {
        for n in [4usize, 8, 16] {
            let (_, worst) = qot_ratios_brute_force(n);
            close(qot_worst_ratio(n).unwrap(), worst, 1e-12);
        }
        close(qot_worst_ratio(4).unwrap(), (5.0f64 / 3.0).sqrt(), 1e-12);
        close(qot_worst_ratio(16).unwrap(), 3f64.sqrt(), 1e-12);
    }

    #[test]
    fn qot_avg_ratio_peaks_at_32() {
        let values: Vec<f64> = [4usize, 8, 16, 32, 64, 128, 256]
            .iter()
            .map(|&n| qot_avg_ratio(n).unwrap())
            .collect();
        assert!(values[0] < values[1] && values[1] < values[2] && values[2] < values[3]);
        assert!(values[3] > values[4] && values[4] > values[5] && values[5] > values[6]);
    }

    #[test]
    fn asymptotic_constant_value() {
        close(asymptotic_constant(), 1.0420, 1e-4);
        assert!(asymptotic_constant() > 1.0);
        let at_60 = qot_avg_ratio(1usize << 60).unwrap();
        assert!((at_60 - asymptotic_constant()).abs() / asymptotic_constant() < 0.03);
    }

    #[test]
    fn trace_distance_examples() {
        let (lo, hi) = trace_distance_bounds(2, 0.1).unwrap();
        close(lo, 0.05, 1e-12);
        close(hi, 1.6, 1e-12);
        assert_eq!(trace_distance_bounds(3, 0.0).unwrap(), (0.0, 0.0));
        for k in 1..=8 {
            let (lo, hi) = trace_distance_bounds(k, 0.7).unwrap();
            assert!(lo <= hi);
        }
    }

    #[test]
    fn five_shot_strategy_quality() {
        let obs = [
            "Z1 @ n=3",
            "Z2 @ n=3",
            "X1 Z3 @ n=3",
            "X1 X2 @ n=3",
            "X2 X3 @ n=3",
        ]
        .map(|s| crate::pauli::parse_pauli(s).unwrap());
        let reqs = uniform_requests(&obs, 2);
        // Any valid 5-shot schedule gives 5 shots / 2 repetitions.
        let sched = (0..50)
            .map(|seed| greedy_partition(&reqs, Relation::QubitWise, seed).unwrap())
            .find(|s| s.shot_count() == 5)
            .expect("some seed reaches the 5-shot optimum");
        let q = schedule_quality(&sched, &reqs, 1).unwrap();
        close(q.shots_per_repetition, 2.5, 1e-12);
        assert!(q.uniform_multiplicity);
    }

    #[test]
    fn qot_schedule_worst_ratio_matches_closed_form() {
        let family = qot_family(4).unwrap();
        let obs = enumerate_weight_k(4, 2, WeightMode::Exactly).unwrap();
        let (sched, reqs) = family_to_schedule(&family.shots, &obs, Relation::QubitWise).unwrap();
        let q = schedule_quality(&sched, &reqs, 1).unwrap();
        close(q.worst_sd_ratio, qot_worst_ratio(4).unwrap(), 1e-12);
        close(q.avg_sd_ratio, qot_avg_ratio(4).unwrap(), 1e-12);
        // Ratios are invariant under repeating the family.
        let q7 = schedule_quality(&sched, &reqs, 7).unwrap();
        close(q7.worst_sd_ratio, q.worst_sd_ratio, 1e-12);
        close(q7.avg_sd_ratio, q.avg_sd_ratio, 1e-12);
        assert_eq!(q7.total_shots, 7 * 15);
    }

    #[test]
    fn perfect_nine_basis_schedule_is_optimal() {
        // Table of nine bases covering each two-qubit observable exactly
        // once: every ratio is exactly 1.
        let bases = [
            "XXXY", "XYYZ", "XZZX", "YXYX", "YYZY", "YZXZ", "ZYXX", "ZZYY", "ZXZZ",
        ]
        .map(|s| crate::pauli::parse_pauli(s).unwrap());
        let obs = enumerate_weight_k(4, 2, WeightMode::Exactly).unwrap();
        let (sched, reqs) = family_to_schedule(&bases, &obs, Relation::QubitWise).unwrap();
        assert_eq!(reqs.len(), 54);
        let q = schedule_quality(&sched, &reqs, 1).unwrap();
        close(q.avg_sd_ratio, 1.0, 1e-12);
        close(q.worst_sd_ratio, 1.0, 1e-12);
    }

    #[test]
    fn coverage_quality_matches_qot_closed_forms() {
        let family = qot_family(8).unwrap();
        let obs = enumerate_weight_k(8, 2, WeightMode::Exactly).unwrap();
        let q = coverage_quality(&family.shots, &obs, 1).unwrap();
        close(q.avg_sd_ratio, qot_avg_ratio(8).unwrap(), 1e-12);
        close(q.worst_sd_ratio, qot_worst_ratio(8).unwrap(), 1e-12);
    }

    #[test]
    fn coverage_quality_counts_every_consistent_shot() {
        // A greedy schedule's Z-filled bases measure more than the assigned
        // copies; harvesting them drives the average ratio toward 1.
        let obs = enumerate_weight_k(4, 2, WeightMode::Exactly).unwrap();
        let reqs = uniform_requests(&obs, 10);
        let sched = greedy_partition(&reqs, Relation::QubitWise, 1).unwrap();
        let assigned = schedule_quality(&sched, &reqs, 1).unwrap();
        let bases: Vec<_> = sched.shots.iter().map(|s| s.basis.clone()).collect();
        let harvested = coverage_quality(&bases, &obs, 1).unwrap();
        assert!(harvested.avg_sd_ratio <= assigned.avg_sd_ratio);
        assert!(harvested.avg_sd_ratio >= 1.0 - 1e-12);
        // The least-covered observable is exactly the reserved count.
        close(harvested.worst_sd_ratio, assigned.worst_sd_ratio, 1e-12);
    }

    #[test]
    fn coverage_quality_rejects_uncovered_observables() {
        let bases = [crate::pauli::parse_pauli("ZZ").unwrap()];
        let obs = [
            crate::pauli::parse_pauli("Z1 @ n=2").unwrap(),
            crate::pauli::parse_pauli("X1 @ n=2").unwrap(),
        ];
        assert!(coverage_quality(&bases, &obs, 1).is_err());
    }

    #[test]
    fn invalid_schedule_is_rejected() {
        let obs = [crate::pauli::parse_pauli("XZ").unwrap()];
        let reqs = uniform_requests(&obs, 3);
        let sched = greedy_partition(&reqs, Relation::QubitWise, 0).unwrap();
        let short = uniform_requests(&obs, 4);
        assert!(matches!(
            schedule_quality(&sched, &short, 1),
            Err(Error::InvalidSchedule(_))
        ));
    }
}
