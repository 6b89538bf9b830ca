use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shotplan::pauli::Relation;
use shotplan::schedule::MeasurementRequest;
use shotplan::sweep::standard_multiset;

// Variant greedy with a custom copy order, same placement rule.
fn greedy_with_order(requests: &[MeasurementRequest], order: &[u32]) -> usize {
    let n = requests[0].observable.num_qubits();
    let words = n.div_ceil(64);
    struct S { x: Vec<u64>, z: Vec<u64>, a: Vec<u64>, present: Vec<u64> }
    let obs_words = requests.len().div_ceil(64);
    let mut shots: Vec<S> = Vec::new();
    for &o in order {
        let s = &requests[o as usize].observable;
        let (sx, sz) = unsafe { std::mem::transmute::<&shotplan::pauli::PauliString, &(usize, Vec<u64>, Vec<u64>)>(s) };
        let _ = (sx, sz);
        unreachable!()
    }
    shots.len()
}

fn main() {
    for n in [16usize, 32, 64] {
        let reqs = standard_multiset(n).unwrap();
        let w = reqs[0].multiplicity;
        // grouped order: shuffle observables, then emit each observable's copies consecutively
        let m = reqs.len();
        let mut obs_order: Vec<u32> = (0..m as u32).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for i in (1..obs_order.len()).rev() {
            let j = rng.gen_range(0..=i as u64) as usize;
            obs_order.swap(i, j);
        }
        let mut grouped: Vec<u32> = Vec::new();
        for &o in &obs_order {
            grouped.extend(std::iter::repeat(o).take(reqs[o as usize].multiplicity));
        }
        let _ = grouped;
        let _ = w;
        println!("n={n}: (placeholder)");
    }
}
