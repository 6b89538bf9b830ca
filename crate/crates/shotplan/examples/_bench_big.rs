use std::time::Instant;
use shotplan::metrics::{qot_avg_ratio, schedule_quality};
use shotplan::pauli::Relation;
use shotplan::schedule::greedy_partition;
use shotplan::sweep::standard_multiset;

fn main() {
    for n in [16usize, 32, 64] {
        let reqs = standard_multiset(n).unwrap();
        let copies: usize = reqs.iter().map(|r| r.multiplicity).sum();
        let w = reqs[0].multiplicity;
        let start = Instant::now();
        let sched = greedy_partition(&reqs, Relation::QubitWise, 0).unwrap();
        let t_greedy = start.elapsed();
        let start = Instant::now();
        let q = schedule_quality(&sched, &reqs, 1).unwrap();
        let t_q = start.elapsed();
        println!(
            "n={n}: m={} w={w} copies={copies} shots={} spr={:.3} avg={:.5} worst={:.5} qot_avg={:.5} greedy={t_greedy:?} quality={t_q:?}",
            reqs.len(), sched.shot_count(), q.shots_per_repetition, q.avg_sd_ratio, q.worst_sd_ratio,
            qot_avg_ratio(n).unwrap(),
        );
    }
}
