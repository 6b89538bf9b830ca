use shotplan::pauli::{enumerate_weight_k, Relation, WeightMode};
use shotplan::schedule::{greedy_partition, uniform_requests};
use shotplan::sweep::standard_multiset;

fn main() {
    // n=4, k=2, r=100: criterion-8 style
    let obs = enumerate_weight_k(4, 2, WeightMode::Exactly).unwrap();
    let reqs = uniform_requests(&obs, 100);
    let counts: Vec<usize> = (0..5)
        .map(|s| greedy_partition(&reqs, Relation::QubitWise, s).unwrap().shot_count())
        .collect();
    println!("n=4 r=100 shots over 5 seeds: {counts:?} -> spr best {:.3}",
        *counts.iter().min().unwrap() as f64 / 100.0);

    // n=16 multiset: seed variance
    let reqs = standard_multiset(16).unwrap();
    let w = reqs[0].multiplicity;
    let counts: Vec<usize> = (0..10)
        .map(|s| greedy_partition(&reqs, Relation::QubitWise, s).unwrap().shot_count())
        .collect();
    println!("n=16 w={w} shots over 10 seeds: {counts:?}");
    println!("  best spr {:.4}, need <= 9.92 for ratio 1.05", *counts.iter().min().unwrap() as f64 / w as f64);
}
