//! Measurement-shot scheduling for Pauli observables.
//!
//! Estimating many Pauli expectation values to a target accuracy takes a
//! large number of state preparations ("shots"). Instead of partitioning the
//! plain set of observables and repeating that partition, this crate
//! partitions the *multiset* — every observable listed as often as it must
//! be measured — which lets the repetitions of different observables overlap
//! and can cut the shot count by up to a quadratic factor. Partitioning is
//! graph multicolouring; a seeded greedy pass handles large instances and a
//! branch-and-bound solver certifies small ones.
//!
//! What's here:
//!
//! - [`pauli`]: bit-plane Pauli strings, parsing, enumeration, and the two
//!   compatibility relations (qubit-wise commutation, full commutation).
//! - [`schedule`]: Hoeffding repetition counts, multiset construction, the
//!   greedy partitioner and its literal adjacency-list reference.
//! - [`exact`]: exact minimum-shot search with clique lower bounds.
//! - [`baseline`]: overlapping-tomography (QOT) shot families, binary
//!   pair-separating covers, random Pauli schemes, and their closed forms.
//! - [`bounds`]: Hoeffding tails and the shot-count bounds.
//! - [`metrics`]: standard-deviation model and schedule quality ratios.
//! - [`verify`]: generator-independent schedule validation.
//! - [`io`]: observable files and the JSON schedule format.
//! - [`sweep`]: CSV sweeps reproducing the reference figures.
//!
//! Each capability has a runnable example:
//!
//! ```text
//! cargo run --release --example five_observables   # the worked 5-observable instance
//! cargo run --release --example qot_comparison     # QOT vs greedy vs optimal at n=4
//! cargo run --release --example binary_cover       # pair-separating cover, Table-style output
//! cargo run --release --example accuracy_bounds    # repetition counts and bound table
//! cargo run --release --example repetition_scaling # shots/repetition -> 9 as copies grow
//! cargo run --release --example sd_figures         # normalized SD ratio curves (CSV)
//! ```
//!
//! The `shotplan` binary exposes the same functionality as subcommands
//! (`partition`, `baseline`, `verify`, `metrics`, `sweep`, `bounds`).

pub mod baseline;
pub mod bounds;
pub mod cli;
mod error;
pub mod exact;
pub mod io;
pub mod metrics;
pub mod pauli;
pub mod schedule;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use exact::{exact_min_shots, ExactOutcome};
pub use pauli::{
    enumerate_weight_k, fully_commutes, parse_pauli, qubitwise_compatible, PauliLetter,
    PauliString, Relation, WeightMode,
};
pub use schedule::{
    build_multiset, greedy_partition, greedy_partition_reference, required_repetitions,
    uniform_requests, AccuracySpec, MeasurementRequest, ObservableEntry, Schedule, Shot,
};
pub use verify::{coverage_counts, validate_schedule, ValidationReport, Violation};
