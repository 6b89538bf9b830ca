//! Comparison schemes: the overlapping-tomography (QOT) shot family for
//! two-qubit marginals, the binary pair-separating cover, and random Pauli
//! measurement schemes with their closed-form shot predictions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pauli::{PauliLetter, PauliString, Relation};
use crate::schedule::{MeasurementRequest, Schedule, Shot};
use crate::verify::measures;

const NON_IDENTITY: [PauliLetter; 3] = [PauliLetter::X, PauliLetter::Y, PauliLetter::Z];

/// The deterministic shot family covering every two-qubit Pauli string of an
/// n-qubit system (n a power of two): 6·log2(n) + 3 full basis assignments.
#[derive(Debug, Clone)]
pub struct QotFamily {
    pub n: usize,
    pub shots: Vec<PauliString>,
}

fn require_power_of_two(n: usize) -> Result<u32> {
    if n < 4 || !n.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "QOT family requires a power-of-two qubit count >= 4, got {n}"
        )));
    }
    Ok(n.trailing_zeros())
}

/// Build the QOT family: for each bit of the qubit index (qubit i carries the
/// binary code i-1, bit 1 most significant) and each ordered pair (P, Q) of
/// distinct non-identity letters, one shot assigning P where the bit is 0 and
/// Q where it is 1; plus the three uniform shots X..X, Y..Y, Z..Z.
pub fn qot_family(n: usize) -> Result<QotFamily> {
    let bits = require_power_of_two(n)?;
    let mut shots = Vec::with_capacity(6 * bits as usize + 3);
    for b in 1..=bits {
        for p in NON_IDENTITY {
            for q in NON_IDENTITY {
                if p == q {
                    continue;
                }
                let letters: Vec<PauliLetter> = (0..n)
                    .map(|i| {
                        let bit = (i as u64 >> (bits - b)) & 1;
                        if bit == 0 {
                            p
                        } else {
                            q
                        }
                    })
                    .collect();
                shots.push(PauliString::from_letters(&letters)?);
            }
        }
    }
    for p in NON_IDENTITY {
        shots.push(PauliString::from_letters(&vec![p; n])?);
    }
    Ok(QotFamily { n, shots })
}

/// Closed-form number of shots in [`qot_family`]`(n)` measuring P_i Q_j
/// (1-based qubits, i ≠ j): 2·(log2 n − d) + 1 when P = Q and d otherwise,
/// where d is the Hamming distance between the binary codes of the qubits.
pub fn qot_multiplicity(
    n: usize,
    i: usize,
    j: usize,
    p: PauliLetter,
    q: PauliLetter,
) -> Result<usize> {
    let bits = require_power_of_two(n)? as usize;
    if i == 0 || j == 0 || i > n || j > n || i == j {
        return Err(Error::InvalidArgument(format!(
            "qubit pair ({i}, {j}) out of range for n={n}"
        )));
    }
    if p == PauliLetter::I || q == PauliLetter::I {
        return Err(Error::InvalidArgument(
            "multiplicity applies to non-identity letters".into(),
        ));
    }
    let d = (((i - 1) ^ (j - 1)) as u64).count_ones() as usize;
    Ok(if p == q { 2 * (bits - d) + 1 } else { d })
}

/// ceil(log2 n) binary rows whose n columns are pairwise distinct, so every
/// qubit pair is separated by some row. Encoded as measurements, 0 is the
/// Z basis and 1 the X basis.
#[derive(Debug, Clone)]
pub struct BinaryCover {
    pub n: usize,
    /// rows[r][i]: bit r (most significant first) of the code of column i.
    pub rows: Vec<Vec<bool>>,
}

impl BinaryCover {
    /// The rows as measurement settings (0 -> Z, 1 -> X).
    pub fn shots(&self) -> Vec<PauliString> {
        self.rows
            .iter()
            .map(|row| {
                let letters: Vec<PauliLetter> = row
                    .iter()
                    .map(|&b| if b { PauliLetter::X } else { PauliLetter::Z })
                    .collect();
                PauliString::from_letters(&letters).expect("rows are non-empty")
            })
            .collect()
    }

    pub fn row_string(&self, r: usize) -> String {
        self.rows[r]
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }
}

/// Build the cover: column i holds the ceil(log2 n)-bit code of i−1, most
/// significant bit in row 0. All columns are distinct by construction.
pub fn binary_cover(n: usize) -> Result<BinaryCover> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "binary cover needs n >= 2, got {n}"
        )));
    }
    let bits = usize::BITS - (n - 1).leading_zeros(); // ceil(log2 n)
    let rows = (0..bits)
        .map(|r| {
            (0..n)
                .map(|col| (col >> (bits - 1 - r)) & 1 == 1)
                .collect()
        })
        .collect();
    Ok(BinaryCover { n, rows })
}

/// `d` independent uniform basis assignments over {X,Y,Z}^n.
pub fn random_pauli_scheme(n: usize, d: usize, seed: u64) -> Result<Vec<PauliString>> {
    if n == 0 {
        return Err(Error::InvalidArgument("qubit count must be >= 1".into()));
    }
    if d == 0 {
        return Err(Error::InvalidArgument(
            "shot count d must be >= 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..d)
        .map(|_| {
            let letters: Vec<PauliLetter> = (0..n)
                .map(|_| NON_IDENTITY[rng.gen_range(0..3u32) as usize])
                .collect();
            PauliString::from_letters(&letters)
        })
        .collect()
}

/// Shots after which a scheme that measures a given observable with
/// probability `p` per shot has measured all of `m` observables more than `w`
/// times, except with probability below 1/m each: (2pw + ln m)/p².
pub fn random_required_shots_exact(p: f64, w: f64, m: usize) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "probability p must be in (0, 1], got {p}"
        )));
    }
    if w < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "repetition target w must be >= 1, got {w}"
        )));
    }
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "observable count m must be >= 2, got {m}"
        )));
    }
    Ok((2.0 * p * w + (m as f64).ln()) / (p * p))
}

/// [`random_required_shots_exact`], rounded up.
pub fn random_required_shots(p: f64, w: f64, m: usize) -> Result<usize> {
    Ok(random_required_shots_exact(p, w, m)?.ceil() as usize)
}

/// Shot count guaranteeing ε-accurate estimates of m weight-k Pauli strings
/// from random Pauli measurements, with failure probability δ.
#[derive(Debug, Clone, Copy)]
pub struct RandomUpperBound {
    /// ceil(8·3^(k−1)·ln(2m/δ)/ε²).
    pub shots: usize,
    pub shots_exact: f64,
    /// The earlier 68·3^k·ln(2m/δ)/ε² bound, for comparison.
    pub prior_exact: f64,
}

pub fn random_upper_bound(
    k: u32,
    m: usize,
    epsilon: f64,
    delta: f64,
) -> Result<RandomUpperBound> {
    if k == 0 {
        return Err(Error::InvalidArgument("weight k must be >= 1".into()));
    }
    if m == 0 {
        return Err(Error::InvalidArgument(
            "observable count m must be >= 1".into(),
        ));
    }
    if epsilon <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "delta must be in (0, 1), got {delta}"
        )));
    }
    let log_term = (2.0 * m as f64 / delta).ln();
    let shots_exact = 8.0 * 3f64.powi(k as i32 - 1) * log_term / (epsilon * epsilon);
    let prior_exact = 68.0 * 3f64.powi(k as i32) * log_term / (epsilon * epsilon);
    Ok(RandomUpperBound {
        shots: shots_exact.ceil() as usize,
        shots_exact,
        prior_exact,
    })
}

/// Wrap a fixed shot family as a schedule serving `observables`: each
/// observable is assigned every shot that measures it, and its multiplicity
/// is that coverage count. Observables never measured are dropped, so the
/// result always validates. Returns the schedule together with the requests
/// it serves.
pub fn family_to_schedule(
    bases: &[PauliString],
    observables: &[PauliString],
    relation: Relation,
) -> Result<(Schedule, Vec<MeasurementRequest>)> {
    let Some(first) = bases.first() else {
        return Err(Error::InvalidArgument("empty shot family".into()));
    };
    let n = first.num_qubits();
    for s in bases.iter().chain(observables) {
        if s.num_qubits() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: s.num_qubits(),
            });
        }
    }
    let mut requests = Vec::new();
    let mut assignment = Vec::new();
    let mut members_per_shot: Vec<Vec<(usize, usize)>> = vec![Vec::new(); bases.len()];
    for obs in observables {
        let covered: Vec<usize> = bases
            .iter()
            .enumerate()
            .filter(|(_, b)| measures(b, obs))
            .map(|(j, _)| j)
            .collect();
        if covered.is_empty() {
            continue;
        }
        let o = requests.len();
        for (copy, &j) in covered.iter().enumerate() {
            members_per_shot[j].push((o, copy));
        }
        requests.push(MeasurementRequest {
            observable: obs.clone(),
            multiplicity: covered.len(),
        });
        assignment.push(covered);
    }
    let shots = bases
        .iter()
        .zip(members_per_shot)
        .map(|(basis, members)| Shot {
            basis: basis.clone(),
            members,
        })
        .collect();
    Ok((
        Schedule {
            n,
            relation,
            seed: 0,
            shots,
            assignment,
        },
        requests,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{enumerate_weight_k, parse_pauli, WeightMode};
    use crate::verify::{coverage_counts, validate_schedule};
    use std::collections::HashSet;

    /// The published 15-shot QOT family for four qubits.
    pub(crate) const QOT_TABLE_N4: [&str; 15] = [
        "XXYY", "XXZZ", "YYXX", "YYZZ", "ZZXX", "ZZYY", "XYXY", "XZXZ", "YXYX", "YZYZ", "ZXZX",
        "ZYZY", "XXXX", "YYYY", "ZZZZ",
    ];

    #[test]
    fn qot_family_n4_matches_published_table() {
        let family = qot_family(4).unwrap();
        assert_eq!(family.shots.len(), 15);
        let got: HashSet<String> = family.shots.iter().map(|s| s.dense()).collect();
        let want: HashSet<String> = QOT_TABLE_N4.iter().map(|s| s.to_string()).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn qot_family_sizes() {
        assert_eq!(qot_family(16).unwrap().shots.len(), 27);
        assert!(qot_family(6).is_err());
        assert!(qot_family(2).is_err());
    }

    #[test]
    fn qot_family_covers_all_weight_two_strings() {
        let family = qot_family(4).unwrap();
        let obs = enumerate_weight_k(4, 2, WeightMode::Exactly).unwrap();
        let counts = coverage_counts(&family.shots, &obs).unwrap();
        assert_eq!(counts.len(), 54);
        assert!(counts.iter().all(|&c| c >= 1));
    }

    #[test]
    fn qot_multiplicity_examples() {
        // n=16: columns 1 and 16 have codes 0000 and 1111, Hamming distance 4.
        assert_eq!(
            qot_multiplicity(16, 1, 16, PauliLetter::X, PauliLetter::X).unwrap(),
            1
        );
        assert_eq!(
            qot_multiplicity(16, 1, 16, PauliLetter::X, PauliLetter::Y).unwrap(),
            4
        );
        // n=4, adjacent columns (distance 1), same letter.
        assert_eq!(
            qot_multiplicity(4, 1, 2, PauliLetter::Z, PauliLetter::Z).unwrap(),
            3
        );
        assert!(qot_multiplicity(4, 1, 1, PauliLetter::X, PauliLetter::X).is_err());
        assert!(qot_multiplicity(4, 0, 2, PauliLetter::X, PauliLetter::X).is_err());
        assert!(qot_multiplicity(4, 1, 2, PauliLetter::I, PauliLetter::X).is_err());
    }

    /// Count occurrences of P_i Q_j in a generated family directly.
    fn brute_multiplicity(family: &QotFamily, i: usize, j: usize, p: PauliLetter, q: PauliLetter) -> usize {
        family
            .shots
            .iter()
            .filter(|s| s.letter(i - 1) == p && s.letter(j - 1) == q)
            .count()
    }

    #[test]
    fn qot_multiplicity_matches_brute_force() {
        for n in [4usize, 8, 16] {
            let family = qot_family(n).unwrap();
            for i in 1..=n {
                for j in 1..=n {
                    if i == j {
                        continue;
                    }
                    for p in NON_IDENTITY {
                        for q in NON_IDENTITY {
                            assert_eq!(
                                qot_multiplicity(n, i, j, p, q).unwrap(),
                                brute_multiplicity(&family, i, j, p, q),
                                "n={n} i={i} j={j} {p}{q}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn qot_total_occurrences_consistency() {
        // Each shot covers exactly C(n,2) weight-2 strings, so the summed
        // multiplicities equal |family| * C(n,2).
        for n in [4usize, 8, 16] {
            let a = n.trailing_zeros() as usize;
            let mut total = 0usize;
            for i in 1..=n {
                for j in i + 1..=n {
                    for p in NON_IDENTITY {
                        for q in NON_IDENTITY {
                            total += qot_multiplicity(n, i, j, p, q).unwrap();
                        }
                    }
                }
            }
            assert_eq!(total, (6 * a + 3) * n * (n - 1) / 2);
        }
    }

    #[test]
    fn binary_cover_structure() {
        let cover = binary_cover(16).unwrap();
        assert_eq!(cover.rows.len(), 4);
        assert_eq!(cover.row_string(0), "0000000011111111");
        assert_eq!(cover.row_string(1), "0000111100001111");
        assert_eq!(cover.row_string(2), "0011001100110011");
        assert_eq!(cover.row_string(3), "0101010101010101");

        assert_eq!(binary_cover(2).unwrap().row_string(0), "01");

        let five = binary_cover(5).unwrap();
        assert_eq!(five.rows.len(), 3);
        let columns: HashSet<Vec<bool>> = (0..5)
            .map(|c| five.rows.iter().map(|r| r[c]).collect())
            .collect();
        assert_eq!(columns.len(), 5);

        assert!(binary_cover(1).is_err());
    }

    #[test]
    fn binary_cover_separates_every_pair() {
        for n in [2usize, 5, 16, 33] {
            let cover = binary_cover(n).unwrap();
            for i in 0..n {
                for j in i + 1..n {
                    assert!(
                        cover.rows.iter().any(|r| r[i] != r[j]),
                        "columns {i} and {j} equal for n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn random_scheme_is_seeded_and_guarded() {
        let a = random_pauli_scheme(1, 3, 99).unwrap();
        let b = random_pauli_scheme(1, 3, 99).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
        assert!(a.iter().all(|s| s.weight() == 1));
        assert!(random_pauli_scheme(4, 0, 1).is_err());
    }

    #[test]
    fn random_scheme_coverage_probability() {
        // A fixed weight-2 string is measured by a uniform shot with
        // probability 1/9; check the empirical rate over 1e5 shots to 3σ.
        let n = 4;
        let d = 100_000;
        let shots = random_pauli_scheme(n, d, 12345).unwrap();
        let target = parse_pauli("X1 Z3 @ n=4").unwrap();
        let hits = shots.iter().filter(|s| measures(s, &target)).count();
        let p = 1.0 / 9.0;
        let sigma = (d as f64 * p * (1.0 - p)).sqrt();
        let dev = (hits as f64 - d as f64 * p).abs();
        assert!(dev < 3.0 * sigma, "hits={hits}, dev={dev}, 3σ={}", 3.0 * sigma);
    }

    #[test]
    fn random_required_shots_examples() {
        assert_eq!(random_required_shots(1.0 / 9.0, 10.0, 54).unwrap(), 504);
        assert_eq!(random_required_shots(1.0, 1.0, 3).unwrap(), 4);
        assert!(random_required_shots(0.0, 1.0, 3).is_err());
        assert!(random_required_shots(1.1, 1.0, 3).is_err());
        assert!(random_required_shots(0.5, 1.0, 1).is_err());
    }

    #[test]
    fn random_upper_bound_examples() {
        let b = random_upper_bound(2, 54, 0.1, 0.1).unwrap();
        assert_eq!(b.shots, 16764);
        assert!((b.prior_exact / b.shots_exact - 68.0 * 3.0 / 8.0).abs() < 1e-9);

        // epsilon chosen so the bound is exactly one shot.
        let eps = (8.0 * 20f64.ln()).sqrt();
        let b = random_upper_bound(1, 1, eps, 0.1).unwrap();
        assert_eq!(b.shots, 1);
    }

    #[test]
    fn family_schedule_validates() {
        let family = qot_family(4).unwrap();
        let obs = enumerate_weight_k(4, 2, WeightMode::Exactly).unwrap();
        let (schedule, requests) =
            family_to_schedule(&family.shots, &obs, Relation::QubitWise).unwrap();
        assert_eq!(schedule.shot_count(), 15);
        assert_eq!(requests.len(), 54);
        let report = validate_schedule(&schedule, &requests, Relation::QubitWise);
        assert!(report.is_valid(), "{report}");
        // Coverage equals the closed-form multiplicities.
        for (req, assigned) in requests.iter().zip(&schedule.assignment) {
            let support: Vec<usize> = (0..4)
                .filter(|&q| req.observable.letter(q) != PauliLetter::I)
                .collect();
            let expect = qot_multiplicity(
                4,
                support[0] + 1,
                support[1] + 1,
                req.observable.letter(support[0]),
                req.observable.letter(support[1]),
            )
            .unwrap();
            assert_eq!(assigned.len(), expect);
        }
    }
}
