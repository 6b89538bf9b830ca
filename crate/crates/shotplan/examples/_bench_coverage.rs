use shotplan::pauli::Relation;
use shotplan::schedule::greedy_partition;
use shotplan::sweep::standard_multiset;
use shotplan::verify::coverage_counts;

fn main() {
    for n in [16usize, 32, 64] {
        let reqs = standard_multiset(n).unwrap();
        let w = reqs[0].multiplicity;
        let sched = greedy_partition(&reqs, Relation::QubitWise, 0).unwrap();
        let s = sched.shot_count();
        let bases: Vec<_> = sched.shots.iter().map(|sh| sh.basis.clone()).collect();
        let obs: Vec<_> = reqs.iter().map(|r| r.observable.clone()).collect();
        let cov = coverage_counts(&bases, &obs).unwrap();
        let avg_assign = (s as f64 / (9.0 * w as f64)).sqrt();
        let mut sum = 0.0;
        let mut worst: f64 = 0.0;
        for &c in &cov {
            let r = (s as f64 / (9.0 * c as f64)).sqrt();
            sum += r;
            worst = worst.max(r);
        }
        let avg_cov = sum / cov.len() as f64;
        let min_cov = cov.iter().min().unwrap();
        println!(
            "n={n} w={w} shots={s}: assignment-based avg {:.4}; coverage-based avg {:.4} worst {:.4} (min cov {min_cov})",
            avg_assign, avg_cov, worst
        );
    }
}
