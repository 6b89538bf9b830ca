use std::time::{Duration, Instant};
use shotplan::exact::{exact_min_shots, ExactOutcome};
use shotplan::pauli::{enumerate_weight_k, Relation, WeightMode};
use shotplan::schedule::uniform_requests;

fn main() {
    let obs = enumerate_weight_k(4, 2, WeightMode::Exactly).unwrap();
    let reqs = uniform_requests(&obs, 1);
    let start = Instant::now();
    match exact_min_shots(&reqs, Relation::QubitWise, Duration::from_secs(60)).unwrap() {
        ExactOutcome::Optimal(s) => println!("optimal {} shots in {:?}", s.shot_count(), start.elapsed()),
        ExactOutcome::TimedOut { lower_bound, incumbent } => {
            println!("TIMEOUT lb={lower_bound} incumbent={} after {:?}", incumbent.shot_count(), start.elapsed())
        }
    }
}
