//! Building measurement multisets and partitioning them into shots.
//!
//! The multiset lists every observable as many times as it must be measured.
//! Partitioning it so that each shot holds pairwise-compatible copies (and at
//! most one copy of any observable) is a graph multicolouring problem; the
//! greedy pass here processes the uniformly shuffled copy list and drops each
//! copy into the lowest-index shot that accepts it.
//!
//! Two implementations are provided. [`greedy_partition`] keeps per-shot
//! state (a partial basis assignment for the qubit-wise relation) so a
//! placement probe is O(n) regardless of how many copies a shot already
//! holds. [`greedy_partition_reference`] is a literal transcription of the
//! adjacency-list formulation and exists as a correctness oracle; both
//! produce identical schedules seed for seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pauli::{fully_commutes_unchecked, words_for, PauliString, Relation, WORD_BITS};

/// Accuracy target for a measurement campaign.
///
/// `epsilon` is the allowed absolute error per expectation value, `delta` the
/// total failure probability (split evenly over the observables), and
/// `fraction` the portion of the full repetition counts placed in the
/// multiset; the rest is satisfied by repeating the found partition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracySpec {
    epsilon: f64,
    delta: f64,
    fraction: f64,
}

impl AccuracySpec {
    /// Requires `0 < epsilon <= 2` (observables have eigenvalues ±1, so a
    /// larger error target is vacuous), `delta` in (0,1), `fraction` in (0,1].
    pub fn new(epsilon: f64, delta: f64, fraction: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 2.0) {
            return Err(Error::InvalidArgument(format!(
                "epsilon must be in (0, 2], got {epsilon}"
            )));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "delta must be in (0, 1), got {delta}"
            )));
        }
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "fraction must be in (0, 1], got {fraction}"
            )));
        }
        Ok(AccuracySpec {
            epsilon,
            delta,
            fraction,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn fraction(&self) -> f64 {
        self.fraction
    }
}

/// One observable together with its required repetition count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementRequest {
    pub observable: PauliString,
    pub multiplicity: usize,
}

/// An observable as read from an input file: the string plus an optional
/// explicit multiplicity that overrides the Hoeffding-derived count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservableEntry {
    pub observable: PauliString,
    pub multiplicity_override: Option<usize>,
}

impl ObservableEntry {
    pub fn plain(observable: PauliString) -> Self {
        ObservableEntry {
            observable,
            multiplicity_override: None,
        }
    }
}

/// Repetitions needed to estimate each of `m` ±1-eigenvalue observables to
/// accuracy `epsilon` with total failure probability `delta`:
/// ceil(2·ln(2m/δ)/ε²), with `delta` split evenly as δ/m.
pub fn required_repetitions(spec: &AccuracySpec, m: usize) -> Result<usize> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "need at least one observable".into(),
        ));
    }
    let w = 2.0 * (2.0 * m as f64 / spec.delta).ln() / (spec.epsilon * spec.epsilon);
    Ok(w.ceil() as usize)
}

/// Assign every entry its multiplicity: ceil(fraction · required repetitions),
/// unless the entry carries an explicit override.
pub fn build_multiset(
    entries: &[ObservableEntry],
    spec: &AccuracySpec,
) -> Result<Vec<MeasurementRequest>> {
    let m = entries.len();
    let full = required_repetitions(spec, m)?;
    let scaled = (spec.fraction * full as f64).ceil() as usize;
    entries
        .iter()
        .map(|e| {
            let multiplicity = match e.multiplicity_override {
                Some(w) if w == 0 => {
                    return Err(Error::InvalidArgument(
                        "multiplicity override must be >= 1".into(),
                    ))
                }
                Some(w) => w,
                None => scaled,
            };
            Ok(MeasurementRequest {
                observable: e.observable.clone(),
                multiplicity,
            })
        })
        .collect()
}

/// Requests with the same multiplicity for every observable.
pub fn uniform_requests(observables: &[PauliString], multiplicity: usize) -> Vec<MeasurementRequest> {
    observables
        .iter()
        .map(|s| MeasurementRequest {
            observable: s.clone(),
            multiplicity,
        })
        .collect()
}

/// One shot: a full per-qubit basis assignment plus the observable copies it
/// serves. Qubits no member touches are measured in the Z basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shot {
    pub basis: PauliString,
    /// (observable index, copy index), sorted.
    pub members: Vec<(usize, usize)>,
}

/// A complete measurement schedule: ordered shots plus, per observable, the
/// sorted list of shot indices serving it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub n: usize,
    pub relation: Relation,
    pub seed: u64,
    pub shots: Vec<Shot>,
    pub assignment: Vec<Vec<usize>>,
}

impl Schedule {
    pub fn shot_count(&self) -> usize {
        self.shots.len()
    }
}

pub(crate) fn validate_requests(requests: &[MeasurementRequest]) -> Result<usize> {
    let first = requests
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty request list".into()))?;
    let n = first.observable.num_qubits();
    for r in requests {
        if r.observable.num_qubits() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: r.observable.num_qubits(),
            });
        }
        if r.multiplicity == 0 {
            return Err(Error::InvalidArgument(
                "multiplicity must be >= 1".into(),
            ));
        }
    }
    Ok(n)
}

pub(crate) fn total_copies(requests: &[MeasurementRequest]) -> usize {
    requests.iter().map(|r| r.multiplicity).sum()
}

/// The randomly ordered copy list both greedy paths consume: observable
/// indices, each repeated by its multiplicity, Fisher-Yates shuffled with a
/// ChaCha8 stream seeded from `seed`. Indices are drawn as u64 so the order
/// is identical on every platform.
pub(crate) fn shuffled_copies(requests: &[MeasurementRequest], seed: u64) -> Vec<u32> {
    let mut list: Vec<u32> = Vec::with_capacity(total_copies(requests));
    for (i, r) in requests.iter().enumerate() {
        list.extend(std::iter::repeat(i as u32).take(r.multiplicity));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in (1..list.len()).rev() {
        let j = rng.gen_range(0..=i as u64) as usize;
        list.swap(i, j);
    }
    list
}

/// Mutable per-shot state used during greedy placement.
struct ShotBuilder {
    // Partial basis assignment as bit-planes; `assigned` marks fixed qubits.
    x: Vec<u64>,
    z: Vec<u64>,
    assigned: Vec<u64>,
    members: Vec<(u32, u32)>,
    /// Bitset over observable indices (the copy rule).
    present: Vec<u64>,
}

impl ShotBuilder {
    fn new(words: usize, obs_words: usize) -> Self {
        ShotBuilder {
            x: vec![0; words],
            z: vec![0; words],
            assigned: vec![0; words],
            members: Vec::new(),
            present: vec![0; obs_words],
        }
    }

    fn contains_obs(&self, o: u32) -> bool {
        let o = o as usize;
        self.present[o / WORD_BITS] >> (o % WORD_BITS) & 1 == 1
    }

    /// Letterwise consistency of `s` with the partial basis. Equivalent to
    /// qubit-wise compatibility with every current member.
    fn qwc_fits(&self, s: &PauliString) -> bool {
        let (sx, sz) = (s.x_words(), s.z_words());
        for w in 0..self.x.len() {
            let support = sx[w] | sz[w];
            let differ = (self.x[w] ^ sx[w]) | (self.z[w] ^ sz[w]);
            if support & self.assigned[w] & differ != 0 {
                return false;
            }
        }
        true
    }

    fn place(&mut self, o: u32, copy: u32, s: &PauliString) {
        let (sx, sz) = (s.x_words(), s.z_words());
        for w in 0..self.x.len() {
            // First writer wins per qubit; under QWC all writers agree.
            let fresh = (sx[w] | sz[w]) & !self.assigned[w];
            self.x[w] |= sx[w] & fresh;
            self.z[w] |= sz[w] & fresh;
            self.assigned[w] |= fresh;
        }
        let oi = o as usize;
        self.present[oi / WORD_BITS] |= 1 << (oi % WORD_BITS);
        self.members.push((o, copy));
    }
}

/// Finalize shots from member lists: members sorted, basis derived from the
/// members (first non-identity letter per qubit) with unassigned qubits set
/// to Z.
pub(crate) fn finalize_schedule(
    n: usize,
    relation: Relation,
    seed: u64,
    requests: &[MeasurementRequest],
    mut members_per_shot: Vec<Vec<(u32, u32)>>,
    mut assignment: Vec<Vec<usize>>,
) -> Schedule {
    let words = words_for(n);
    let shots = members_per_shot
        .iter_mut()
        .map(|members| {
            members.sort_unstable();
            let mut x = vec![0u64; words];
            let mut z = vec![0u64; words];
            let mut assigned = vec![0u64; words];
            for &(o, _) in members.iter() {
                let s = &requests[o as usize].observable;
                let (sx, sz) = (s.x_words(), s.z_words());
                for w in 0..words {
                    let fresh = (sx[w] | sz[w]) & !assigned[w];
                    x[w] |= sx[w] & fresh;
                    z[w] |= sz[w] & fresh;
                    assigned[w] |= fresh;
                }
            }
            // Z-fill the rest.
            for w in 0..words {
                z[w] |= !assigned[w];
            }
            Shot {
                basis: PauliString::from_planes(n, x, z),
                members: members
                    .iter()
                    .map(|&(o, c)| (o as usize, c as usize))
                    .collect(),
            }
        })
        .collect();
    for list in &mut assignment {
        list.sort_unstable();
    }
    Schedule {
        n,
        relation,
        seed,
        shots,
        assignment,
    }
}

/// Greedy multiset partition: shuffle all (observable, copy) elements with
/// the seed, then place each in the lowest-index shot that holds no copy of
/// the same observable and is compatible; open a new shot when none fits.
pub fn greedy_partition(
    requests: &[MeasurementRequest],
    relation: Relation,
    seed: u64,
) -> Result<Schedule> {
    let n = validate_requests(requests)?;
    let m = requests.len();
    let words = words_for(n);
    let obs_words = words_for(m);
    let order = shuffled_copies(requests, seed);

    let mut shots: Vec<ShotBuilder> = Vec::new();
    let mut placed: Vec<u32> = vec![0; m];
    let mut assignment: Vec<Vec<usize>> = vec![Vec::new(); m];

    for &o in &order {
        let s = &requests[o as usize].observable;
        let copy = placed[o as usize];
        let mut target = None;
        for (j, shot) in shots.iter().enumerate() {
            if shot.contains_obs(o) {
                continue;
            }
            let fits = match relation {
                Relation::QubitWise => shot.qwc_fits(s),
                // No per-qubit summary captures full commutation; check the
                // candidate against every member of the shot.
                Relation::FullCommute => shot
                    .members
                    .iter()
                    .all(|&(mo, _)| fully_commutes_unchecked(s, &requests[mo as usize].observable)),
            };
            if fits {
                target = Some(j);
                break;
            }
        }
        let j = target.unwrap_or_else(|| {
            shots.push(ShotBuilder::new(words, obs_words));
            shots.len() - 1
        });
        shots[j].place(o, copy, s);
        placed[o as usize] += 1;
        assignment[o as usize].push(j);
    }

    let members_per_shot: Vec<Vec<(u32, u32)>> = shots.into_iter().map(|b| b.members).collect();
    Ok(finalize_schedule(
        n,
        relation,
        seed,
        requests,
        members_per_shot,
        assignment,
    ))
}

/// Instances above this copy count are rejected by the reference path, whose
/// materialized adjacency lists are quadratic in the observable count.
pub const REFERENCE_MAX_COPIES: usize = 20_000;

/// Literal adjacency-list transcription of the greedy multiset algorithm:
/// build an adjacency list per observable (each list containing the
/// observable itself), then run the triple-nested placement loop over the
/// shuffled copy list. Kept as a correctness oracle for [`greedy_partition`];
/// the two produce identical schedules for the same inputs and seed.
pub fn greedy_partition_reference(
    requests: &[MeasurementRequest],
    relation: Relation,
    seed: u64,
) -> Result<Schedule> {
    let n = validate_requests(requests)?;
    let total = total_copies(requests);
    if total > REFERENCE_MAX_COPIES {
        return Err(Error::InstanceTooLarge {
            what: "total copies for the reference path",
            got: total,
            limit: REFERENCE_MAX_COPIES,
        });
    }
    let m = requests.len();

    // Step 1: adjacency lists; i is listed in its own A_i.
    let mut adjacency: Vec<Vec<usize>> = (0..m).map(|i| vec![i]).collect();
    for i in 0..m {
        for j in i + 1..m {
            if !relation.compatible_unchecked(&requests[i].observable, &requests[j].observable) {
                adjacency[i].push(j);
                adjacency[j].push(i);
            }
        }
    }

    // Step 2: greedy placement over the shuffled copy list.
    let order = shuffled_copies(requests, seed);
    let mut shot_lists: Vec<Vec<usize>> = vec![Vec::new(); m]; // per-observable shot indices
    let mut members_per_shot: Vec<Vec<(u32, u32)>> = Vec::new();
    for &o in &order {
        let i = o as usize;
        let copy = shot_lists[i].len() as u32;
        'shot: for j in 0..total {
            for &k in &adjacency[i] {
                if shot_lists[k].contains(&j) {
                    continue 'shot;
                }
            }
            shot_lists[i].push(j);
            if j == members_per_shot.len() {
                members_per_shot.push(Vec::new());
            }
            members_per_shot[j].push((o, copy));
            break;
        }
    }

    Ok(finalize_schedule(
        n,
        relation,
        seed,
        requests,
        members_per_shot,
        shot_lists,
    ))
}

/// Lower bound for partitioning a multiset with per-observable multiplicity
/// `w` when the simple set needs at least `d1_lower` shots: max(d1, w).
pub fn multiset_lower_bound(d1_lower: usize, w: usize) -> usize {
    d1_lower.max(w)
}

/// The geometric-mean form of the same bound, useful for reporting how far a
/// schedule sits from the best possible quadratic improvement.
pub fn multiset_lower_bound_sqrt(d1_lower: usize, w: usize) -> f64 {
    ((d1_lower as f64) * (w as f64)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::parse_pauli;
    use crate::verify::validate_schedule;

    fn spec(epsilon: f64, delta: f64, fraction: f64) -> AccuracySpec {
        AccuracySpec::new(epsilon, delta, fraction).unwrap()
    }

    /// The worked five-observable set on three qubits.
    pub(crate) fn five_observables() -> Vec<PauliString> {
        ["Z1 @ n=3", "Z2 @ n=3", "X1 Z3 @ n=3", "X1 X2 @ n=3", "X2 X3 @ n=3"]
            .iter()
            .map(|s| parse_pauli(s).unwrap())
            .collect()
    }

    #[test]
    fn accuracy_spec_bounds() {
        assert!(AccuracySpec::new(2.1, 0.1, 1.0).is_err());
        assert!(AccuracySpec::new(0.0, 0.1, 1.0).is_err());
        assert!(AccuracySpec::new(0.1, 0.0, 1.0).is_err());
        assert!(AccuracySpec::new(0.1, 1.0, 1.0).is_err());
        assert!(AccuracySpec::new(0.1, 0.1, 0.0).is_err());
        assert!(AccuracySpec::new(0.1, 0.1, 1.1).is_err());
        assert!(AccuracySpec::new(2.0, 0.5, 1.0).is_ok());
    }

    #[test]
    fn required_repetitions_examples() {
        assert_eq!(required_repetitions(&spec(0.1, 0.1, 1.0), 1).unwrap(), 600);
        assert_eq!(required_repetitions(&spec(0.1, 0.1, 1.0), 54).unwrap(), 1397);
        assert_eq!(required_repetitions(&spec(1.0, 0.2, 1.0), 1).unwrap(), 5);
        assert!(required_repetitions(&spec(0.1, 0.1, 1.0), 0).is_err());
    }

    #[test]
    fn build_multiset_examples() {
        let obs: Vec<ObservableEntry> =
            crate::pauli::enumerate_weight_k(4, 2, crate::pauli::WeightMode::Exactly)
                .unwrap()
                .into_iter()
                .map(ObservableEntry::plain)
                .collect();
        let reqs = build_multiset(&obs, &spec(0.1, 0.1, 1.0 / 50.0)).unwrap();
        assert_eq!(reqs.len(), 54);
        assert!(reqs.iter().all(|r| r.multiplicity == 28));

        let reqs = build_multiset(&obs, &spec(0.1, 0.1, 1.0)).unwrap();
        assert!(reqs.iter().all(|r| r.multiplicity == 1397));

        let with_override = vec![ObservableEntry {
            observable: parse_pauli("XX").unwrap(),
            multiplicity_override: Some(7),
        }];
        let reqs = build_multiset(&with_override, &spec(0.1, 0.1, 1.0)).unwrap();
        assert_eq!(reqs[0].multiplicity, 7);
    }

    #[test]
    fn single_observable_needs_one_shot_per_copy() {
        let reqs = uniform_requests(&[parse_pauli("XZ").unwrap()], 5);
        let sched = greedy_partition(&reqs, Relation::QubitWise, 3).unwrap();
        assert_eq!(sched.shot_count(), 5);
        assert_eq!(sched.assignment[0], vec![0, 1, 2, 3, 4]);
        assert!(validate_schedule(&sched, &reqs, Relation::QubitWise).is_valid());
    }

    #[test]
    fn greedy_is_deterministic() {
        let reqs = uniform_requests(&five_observables(), 2);
        let a = greedy_partition(&reqs, Relation::QubitWise, 11).unwrap();
        let b = greedy_partition(&reqs, Relation::QubitWise, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn five_observables_multiset_best_of_20() {
        let reqs = uniform_requests(&five_observables(), 2);
        let best = (0..20)
            .map(|seed| {
                let sched = greedy_partition(&reqs, Relation::QubitWise, seed).unwrap();
                assert!(validate_schedule(&sched, &reqs, Relation::QubitWise).is_valid());
                sched.shot_count()
            })
            .min()
            .unwrap();
        assert!(best <= 6, "expected <= 6 shots, best seed gave {best}");
        assert!(best >= 5, "5 is optimal for this multiset");
    }

    #[test]
    fn simple_set_n4_k2_greedy_range() {
        let obs = crate::pauli::enumerate_weight_k(4, 2, crate::pauli::WeightMode::Exactly).unwrap();
        let reqs = uniform_requests(&obs, 1);
        let mut best = usize::MAX;
        for seed in 0..50 {
            let sched = greedy_partition(&reqs, Relation::QubitWise, seed).unwrap();
            let count = sched.shot_count();
            assert!((9..=15).contains(&count), "seed {seed} gave {count} shots");
            best = best.min(count);
        }
        assert!(best <= 13, "best of 50 seeds was {best}");
    }

    #[test]
    fn reference_matches_fast_path() {
        let sets: Vec<Vec<MeasurementRequest>> = vec![
            uniform_requests(&five_observables(), 2),
            uniform_requests(
                &crate::pauli::enumerate_weight_k(4, 2, crate::pauli::WeightMode::Exactly).unwrap(),
                3,
            ),
            uniform_requests(&[parse_pauli("XZ").unwrap()], 3),
        ];
        for reqs in &sets {
            for seed in [0, 1, 7] {
                for relation in [Relation::QubitWise, Relation::FullCommute] {
                    let fast = greedy_partition(reqs, relation, seed).unwrap();
                    let reference = greedy_partition_reference(reqs, relation, seed).unwrap();
                    assert_eq!(fast, reference);
                }
            }
        }
    }

    #[test]
    fn reference_guard() {
        let reqs = uniform_requests(&[parse_pauli("X").unwrap()], REFERENCE_MAX_COPIES + 1);
        assert!(matches!(
            greedy_partition_reference(&reqs, Relation::QubitWise, 0),
            Err(Error::InstanceTooLarge { .. })
        ));
    }

    #[test]
    fn full_commute_groups_anticommuting_pairs() {
        // XX and ZZ commute as operators but not qubit-wise.
        let obs = vec![parse_pauli("XX").unwrap(), parse_pauli("ZZ").unwrap()];
        let reqs = uniform_requests(&obs, 1);
        let qwc = greedy_partition(&reqs, Relation::QubitWise, 0).unwrap();
        assert_eq!(qwc.shot_count(), 2);
        let fc = greedy_partition(&reqs, Relation::FullCommute, 0).unwrap();
        assert_eq!(fc.shot_count(), 1);
        assert!(validate_schedule(&fc, &reqs, Relation::FullCommute).is_valid());
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(multiset_lower_bound(3, 2), 3);
        assert!((multiset_lower_bound_sqrt(3, 2) - 6.0_f64.sqrt()).abs() < 1e-12);
        assert_eq!(multiset_lower_bound(1, 1), 1);
        assert_eq!(multiset_lower_bound(9, 28), 28);
    }

    #[test]
    fn unassigned_qubits_are_z_filled() {
        let reqs = uniform_requests(&[parse_pauli("X1 @ n=3").unwrap()], 1);
        let sched = greedy_partition(&reqs, Relation::QubitWise, 0).unwrap();
        assert_eq!(sched.shots[0].basis.dense(), "XZZ");
    }

    #[test]
    fn fraction_scaling_rounds_up() {
        // ceil(f·w) repeated ceil(1/f) times always reaches w.
        for &(f, w) in &[(0.02_f64, 1397usize), (0.3, 7), (1.0, 5), (0.5, 1)] {
            let per = (f * w as f64).ceil() as usize;
            let repeats = (1.0 / f).ceil() as usize;
            assert!(per >= 1);
            assert!(per * repeats >= w, "fraction {f} of {w}");
        }
    }

}
