//! File formats: observable lists and schedule files.
//!
//! Observable files are UTF-8 text, one observable per line, dense
//! (`XIZY`) or sparse (`X1 Z3`), with an optional `* w` multiplicity
//! override and `#` comments. All lines must imply the same qubit count.
//!
//! Schedule files are JSON with fields `version`, `n`, `relation`, `seed`,
//! `shots` (each a basis string over XYZ plus member observable indices),
//! `assignment`, and `provenance` (generator, accuracy parameters,
//! multiplicities, observables). One format serves every generator, so
//! verification and metrics are generator-agnostic.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{parse_pauli, Relation};
use crate::schedule::{MeasurementRequest, ObservableEntry, Schedule, Shot};

/// Parse observable-file text into entries.
pub fn parse_observable_lines(text: &str) -> Result<Vec<ObservableEntry>> {
    struct RawLine {
        line_no: usize,
        body: String,
        override_w: Option<usize>,
    }

    let mut raw = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let uncommented = line.split('#').next().unwrap_or("").trim();
        if uncommented.is_empty() {
            continue;
        }
        let (body, override_w) = match uncommented.split_once('*') {
            Some((left, right)) => {
                let w: usize = right.trim().parse().map_err(|_| {
                    Error::Parse(format!(
                        "line {line_no}: bad multiplicity override {:?}",
                        right.trim()
                    ))
                })?;
                if w == 0 {
                    return Err(Error::Parse(format!(
                        "line {line_no}: multiplicity override must be >= 1"
                    )));
                }
                (left.trim().to_string(), Some(w))
            }
            None => (uncommented.to_string(), None),
        };
        raw.push(RawLine {
            line_no,
            body,
            override_w,
        });
    }
    if raw.is_empty() {
        return Err(Error::Parse("no observables in input".into()));
    }

    // First pass fixes the qubit count: dense lines and explicit `@ n=`
    // suffixes must agree; bare sparse lines only demand enough qubits.
    let mut fixed_n: Option<(usize, usize)> = None; // (n, line_no)
    let mut min_n = 1usize;
    for r in &raw {
        let parsed = parse_pauli(&r.body)
            .map_err(|e| Error::Parse(format!("line {}: {e}", r.line_no)))?;
        let is_fixed = r.body.contains('@')
            || (!r.body.trim().contains(char::is_whitespace)
                && r.body.trim().chars().all(|c| c.is_ascii_alphabetic()));
        if is_fixed {
            match fixed_n {
                None => fixed_n = Some((parsed.num_qubits(), r.line_no)),
                Some((n, first_line)) => {
                    if parsed.num_qubits() != n {
                        return Err(Error::Parse(format!(
                            "line {}: implies n={} but line {first_line} fixed n={n}",
                            r.line_no,
                            parsed.num_qubits()
                        )));
                    }
                }
            }
        }
        min_n = min_n.max(parsed.num_qubits());
    }
    let n = match fixed_n {
        Some((n, _)) if n < min_n => {
            return Err(Error::Parse(format!(
                "a sparse line needs {min_n} qubits but n={n} was fixed"
            )))
        }
        Some((n, _)) => n,
        None => min_n,
    };

    raw.iter()
        .map(|r| {
            let with_n = if r.body.contains('@') {
                r.body.clone()
            } else {
                format!("{} @ n={n}", r.body)
            };
            // Dense lines already carry their length; re-parsing with the
            // explicit count keeps sparse lines at the file-wide n.
            let observable = if r.body.trim().contains(char::is_whitespace)
                || r.body.contains('@')
                || r.body.chars().any(|c| c.is_ascii_digit())
            {
                parse_pauli(&with_n)
            } else {
                parse_pauli(&r.body)
            }
            .map_err(|e| Error::Parse(format!("line {}: {e}", r.line_no)))?;
            Ok(ObservableEntry {
                observable,
                multiplicity_override: r.override_w,
            })
        })
        .collect()
}

pub fn read_observable_file(path: &Path) -> Result<Vec<ObservableEntry>> {
    parse_observable_lines(&std::fs::read_to_string(path)?)
}

/// Generator and input parameters recorded in a schedule file.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Provenance {
    pub generator: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fraction: Option<f64>,
    pub multiplicities: Vec<usize>,
    /// Dense forms, aligned with the 0-based observable indices used in
    /// `shots[].members` and `assignment`.
    pub observables: Vec<String>,
}

pub const SCHEDULE_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ShotFile {
    basis: String,
    members: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct ScheduleFile {
    version: u32,
    n: usize,
    relation: Relation,
    seed: u64,
    shots: Vec<ShotFile>,
    assignment: Vec<Vec<usize>>,
    provenance: Provenance,
}

pub fn schedule_to_json(
    schedule: &Schedule,
    requests: &[MeasurementRequest],
    provenance: &Provenance,
) -> Result<String> {
    let file = ScheduleFile {
        version: SCHEDULE_FORMAT_VERSION,
        n: schedule.n,
        relation: schedule.relation,
        seed: schedule.seed,
        shots: schedule
            .shots
            .iter()
            .map(|s| ShotFile {
                basis: s.basis.dense(),
                members: s.members.iter().map(|&(o, _)| o).collect(),
            })
            .collect(),
        assignment: schedule.assignment.clone(),
        provenance: Provenance {
            multiplicities: requests.iter().map(|r| r.multiplicity).collect(),
            observables: requests.iter().map(|r| r.observable.dense()).collect(),
            ..provenance.clone()
        },
    };
    let mut text = serde_json::to_string_pretty(&file)?;
    text.push('\n');
    Ok(text)
}

pub fn write_schedule(
    path: &Path,
    schedule: &Schedule,
    requests: &[MeasurementRequest],
    provenance: &Provenance,
) -> Result<()> {
    std::fs::write(path, schedule_to_json(schedule, requests, provenance)?)?;
    Ok(())
}

/// Read a schedule file back. Copy indices are reconstructed by numbering
/// each observable's occurrences in shot order. Semantic problems (wrong
/// counts, incompatible members) are left to validation; only unreadable
/// text is an error here.
pub fn schedule_from_json(text: &str) -> Result<(Schedule, Vec<MeasurementRequest>, Provenance)> {
    let file: ScheduleFile = serde_json::from_str(text)?;
    if file.version != SCHEDULE_FORMAT_VERSION {
        return Err(Error::Parse(format!(
            "unsupported schedule format version {}",
            file.version
        )));
    }
    if file.provenance.observables.len() != file.provenance.multiplicities.len() {
        return Err(Error::Parse(
            "provenance observables and multiplicities differ in length".into(),
        ));
    }
    let requests = file
        .provenance
        .observables
        .iter()
        .zip(&file.provenance.multiplicities)
        .map(|(text, &multiplicity)| {
            Ok(MeasurementRequest {
                observable: parse_pauli(text)?,
                multiplicity,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut copies_seen = vec![0usize; requests.len()];
    let shots = file
        .shots
        .iter()
        .map(|s| {
            let basis = parse_pauli(&s.basis)?;
            let members = s
                .members
                .iter()
                .map(|&o| {
                    let copy = copies_seen.get(o).copied().unwrap_or(0);
                    if o < copies_seen.len() {
                        copies_seen[o] += 1;
                    }
                    (o, copy)
                })
                .collect();
            Ok(Shot { basis, members })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok((
        Schedule {
            n: file.n,
            relation: file.relation,
            seed: file.seed,
            shots,
            assignment: file.assignment,
        },
        requests,
        file.provenance,
    ))
}

pub fn read_schedule(path: &Path) -> Result<(Schedule, Vec<MeasurementRequest>, Provenance)> {
    schedule_from_json(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Relation;
    use crate::schedule::{greedy_partition, uniform_requests};
    use crate::verify::validate_schedule;

    #[test]
    fn observable_file_forms() {
        let text = "\
# the five-observable example
Z1 @ n=3
Z2          # sparse, inherits n
X1 Z3
X1 X2 * 4   # explicit multiplicity
IXX
";
        let entries = parse_observable_lines(text).unwrap();
        assert_eq!(entries.len(), 5);
        assert!(entries.iter().all(|e| e.observable.num_qubits() == 3));
        assert_eq!(entries[0].observable.dense(), "ZII");
        assert_eq!(entries[1].observable.dense(), "IZI");
        assert_eq!(entries[3].multiplicity_override, Some(4));
        assert_eq!(entries[4].observable.dense(), "IXX");
    }

    #[test]
    fn observable_file_infers_n_from_sparse_lines() {
        let entries = parse_observable_lines("X1\nZ4\n").unwrap();
        assert!(entries.iter().all(|e| e.observable.num_qubits() == 4));
    }

    #[test]
    fn observable_file_rejects_inconsistent_n() {
        assert!(parse_observable_lines("XX\nXXX\n").is_err());
        assert!(parse_observable_lines("XX\nZ3\n").is_err());
        assert!(parse_observable_lines("X1 @ n=2\nXXX\n").is_err());
        assert!(parse_observable_lines("").is_err());
        assert!(parse_observable_lines("# only a comment\n").is_err());
        assert!(parse_observable_lines("XX * 0\n").is_err());
        assert!(parse_observable_lines("XX * pie\n").is_err());
    }

    #[test]
    fn schedule_roundtrip() {
        let obs = ["Z1 @ n=3", "Z2 @ n=3", "X1 Z3 @ n=3", "X1 X2 @ n=3"]
            .map(|s| parse_pauli(s).unwrap());
        let requests = uniform_requests(&obs, 2);
        let schedule = greedy_partition(&requests, Relation::QubitWise, 5).unwrap();
        let provenance = Provenance {
            generator: "greedy".into(),
            epsilon: Some(0.1),
            delta: Some(0.1),
            fraction: Some(0.02),
            multiplicities: Vec::new(),
            observables: Vec::new(),
        };
        let text = schedule_to_json(&schedule, &requests, &provenance).unwrap();
        let (back, back_requests, back_prov) = schedule_from_json(&text).unwrap();
        assert_eq!(back, schedule);
        assert_eq!(back_requests, requests);
        assert_eq!(back_prov.generator, "greedy");
        assert!(validate_schedule(&back, &back_requests, back.relation).is_valid());
        // Serialization is deterministic.
        assert_eq!(text, schedule_to_json(&schedule, &requests, &provenance).unwrap());
    }

    #[test]
    fn malformed_schedule_text_is_a_parse_error() {
        assert!(schedule_from_json("not json").is_err());
        assert!(schedule_from_json("{\"version\": 99}").is_err());
    }
}
