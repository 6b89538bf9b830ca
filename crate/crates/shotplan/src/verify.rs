//! Independent schedule validation.
//!
//! Everything is recomputed from the shots' member lists; the assignment map
//! is derived data and gets cross-checked against the recomputed truth as its
//! own violation category. Malformed input is reported, never rejected.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::pauli::{PauliLetter, PauliString, Relation, WORD_BITS};
use crate::schedule::{MeasurementRequest, Schedule};

/// A single broken invariant, with enough context to locate it.
/// Qubit numbers are 1-based in the rendered text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Two members of one shot are not compatible under the relation.
    IncompatiblePair { shot: usize, a: usize, b: usize },
    /// Two copies of one observable share a shot.
    DuplicateObservable { shot: usize, observable: usize },
    /// An observable is assigned fewer shots than requested.
    MultiplicityShortfall {
        observable: usize,
        assigned: usize,
        requested: usize,
    },
    /// A member's non-identity letter disagrees with the shot's basis.
    BasisMismatch {
        shot: usize,
        observable: usize,
        qubit: usize,
    },
    /// A shot's basis string has the wrong length.
    BasisLength { shot: usize, got: usize },
    /// A member references an observable index outside the request list.
    UnknownObservable { shot: usize, index: usize },
    /// The assignment map names a shot index that does not exist.
    ShotIndexOutOfRange { observable: usize, shot: usize },
    /// The assignment map disagrees with the shots' member lists.
    AssignmentMapMismatch { observable: usize },
    /// The assignment map has the wrong number of entries.
    MalformedAssignment { expected: usize, got: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::IncompatiblePair { shot, a, b } => {
                write!(f, "shot {shot}: observables {a} and {b} are incompatible")
            }
            Violation::DuplicateObservable { shot, observable } => {
                write!(f, "shot {shot}: two copies of observable {observable}")
            }
            Violation::MultiplicityShortfall {
                observable,
                assigned,
                requested,
            } => write!(
                f,
                "observable {observable}: assigned {assigned} shots, requested {requested}"
            ),
            Violation::BasisMismatch {
                shot,
                observable,
                qubit,
            } => write!(
                f,
                "shot {shot}: observable {observable} disagrees with basis at qubit {}",
                qubit + 1
            ),
            Violation::BasisLength { shot, got } => {
                write!(f, "shot {shot}: basis has {got} qubits")
            }
            Violation::UnknownObservable { shot, index } => {
                write!(f, "shot {shot}: unknown observable index {index}")
            }
            Violation::ShotIndexOutOfRange { observable, shot } => {
                write!(
                    f,
                    "assignment[{observable}]: shot index {shot} out of range"
                )
            }
            Violation::AssignmentMapMismatch { observable } => {
                write!(
                    f,
                    "assignment[{observable}] disagrees with the shots' member lists"
                )
            }
            Violation::MalformedAssignment { expected, got } => {
                write!(f, "assignment map has {got} entries, expected {expected}")
            }
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            writeln!(f, "valid")
        } else {
            for v in &self.violations {
                writeln!(f, "violation: {v}")?;
            }
            Ok(())
        }
    }
}

/// Check a schedule against its requests under `relation`: pairwise
/// compatibility within each shot, the one-copy-per-shot rule, multiplicity
/// coverage, member/basis agreement, and assignment-map consistency.
///
/// For the qubit-wise relation, pairwise compatibility inside a shot is
/// checked by folding members into a partial basis and attributing any clash
/// to the member that first fixed the qubit; that reports the same pairs a
/// quadratic scan would. Basis/member agreement is only meaningful for
/// qubit-wise schedules (a commuting group need not share a product basis)
/// and is skipped otherwise.
pub fn validate_schedule(
    schedule: &Schedule,
    requests: &[MeasurementRequest],
    relation: Relation,
) -> ValidationReport {
    let mut violations = Vec::new();
    let n = schedule.n;
    let m = requests.len();
    let mut counts = vec![0usize; m];
    let mut shots_by_obs: Vec<Vec<usize>> = vec![Vec::new(); m];

    for (j, shot) in schedule.shots.iter().enumerate() {
        if shot.basis.num_qubits() != n {
            violations.push(Violation::BasisLength {
                shot: j,
                got: shot.basis.num_qubits(),
            });
        }
        let mut seen: HashSet<usize> = HashSet::new();
        // Which member (by position) first fixed each qubit, and to what.
        let mut owner: Vec<Option<(usize, PauliLetter)>> = vec![None; n];
        for (pos, &(o, _copy)) in shot.members.iter().enumerate() {
            if o >= m {
                violations.push(Violation::UnknownObservable { shot: j, index: o });
                continue;
            }
            if !seen.insert(o) {
                violations.push(Violation::DuplicateObservable {
                    shot: j,
                    observable: o,
                });
            }
            counts[o] += 1;
            shots_by_obs[o].push(j);
            let s = &requests[o].observable;
            if s.num_qubits() != n {
                continue; // reported through MalformedAssignment-level checks below
            }
            match relation {
                Relation::QubitWise => {
                    for q in support_qubits(s) {
                        let letter = s.letter(q);
                        match owner[q] {
                            None => owner[q] = Some((pos, letter)),
                            Some((owner_pos, owner_letter)) => {
                                if owner_letter != letter {
                                    violations.push(Violation::IncompatiblePair {
                                        shot: j,
                                        a: shot.members[owner_pos].0,
                                        b: o,
                                    });
                                }
                            }
                        }
                        if shot.basis.num_qubits() == n && shot.basis.letter(q) != letter {
                            violations.push(Violation::BasisMismatch {
                                shot: j,
                                observable: o,
                                qubit: q,
                            });
                        }
                    }
                }
                Relation::FullCommute => {
                    for &(other, _) in &shot.members[..pos] {
                        if other >= m || requests[other].observable.num_qubits() != n {
                            continue;
                        }
                        if !relation
                            .compatible_unchecked(s, &requests[other].observable)
                        {
                            violations.push(Violation::IncompatiblePair {
                                shot: j,
                                a: other,
                                b: o,
                            });
                        }
                    }
                }
            }
        }
    }

    for (o, req) in requests.iter().enumerate() {
        if counts[o] < req.multiplicity {
            violations.push(Violation::MultiplicityShortfall {
                observable: o,
                assigned: counts[o],
                requested: req.multiplicity,
            });
        }
    }

    if schedule.assignment.len() != m {
        violations.push(Violation::MalformedAssignment {
            expected: m,
            got: schedule.assignment.len(),
        });
    } else {
        for (o, listed) in schedule.assignment.iter().enumerate() {
            let mut ok = true;
            for &j in listed {
                if j >= schedule.shots.len() {
                    violations.push(Violation::ShotIndexOutOfRange {
                        observable: o,
                        shot: j,
                    });
                    ok = false;
                }
            }
            if ok {
                let mut recomputed = shots_by_obs[o].clone();
                recomputed.sort_unstable();
                recomputed.dedup();
                let mut claimed = listed.clone();
                claimed.sort_unstable();
                claimed.dedup();
                if recomputed != claimed {
                    violations.push(Violation::AssignmentMapMismatch { observable: o });
                }
            }
        }
    }

    ValidationReport { violations }
}

fn support_qubits(s: &PauliString) -> impl Iterator<Item = usize> + '_ {
    let (x, z) = (s.x_words(), s.z_words());
    (0..x.len()).flat_map(move |w| {
        let mut bits = x[w] | z[w];
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * WORD_BITS + b)
            }
        })
    })
}

/// For each observable, how many of the given full basis assignments are
/// letterwise consistent with it (i.e. would measure it).
pub fn coverage_counts(
    shots: &[PauliString],
    observables: &[PauliString],
) -> Result<Vec<usize>> {
    let Some(first) = shots.first().or_else(|| observables.first()) else {
        return Ok(Vec::new());
    };
    let n = first.num_qubits();
    for s in shots.iter().chain(observables) {
        if s.num_qubits() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: s.num_qubits(),
            });
        }
    }
    Ok(observables
        .iter()
        .map(|obs| {
            shots
                .iter()
                .filter(|basis| measures(basis, obs))
                .count()
        })
        .collect())
}

/// True iff `basis` has the observable's letter at every non-identity qubit.
pub(crate) fn measures(basis: &PauliString, obs: &PauliString) -> bool {
    let (bx, bz) = (basis.x_words(), basis.z_words());
    let (ox, oz) = (obs.x_words(), obs.z_words());
    for w in 0..bx.len() {
        let support = ox[w] | oz[w];
        let differ = (bx[w] ^ ox[w]) | (bz[w] ^ oz[w]);
        if support & differ != 0 {
            return false;
        }
    }
    true
}
