//! Exact minimum-shot search for small instances.
//!
//! The multiset partition is a multicolouring problem: observable `i` needs
//! `w_i` distinct shots and incompatible observables share none. The solver
//! iterates candidate shot counts upward from a weighted-clique lower bound,
//! testing each count with a most-constrained-first backtracking search. An
//! incumbent from a few greedy seeds caps the iteration, so the search only
//! closes the gap between bound and incumbent.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::pauli::{words_for, Relation, WORD_BITS};
use crate::schedule::{
    finalize_schedule, greedy_partition, total_copies, validate_requests, MeasurementRequest,
    Schedule,
};

/// Default guard on the total copy count accepted by [`exact_min_shots`].
pub const EXACT_MAX_COPIES: usize = 200;

const TIME_CHECK_MASK: u64 = 0x3ff;

/// Outcome of the exact search.
#[derive(Debug, Clone)]
pub enum ExactOutcome {
    /// The schedule's shot count is the proven minimum.
    Optimal(Schedule),
    /// Budget exhausted: every count below `lower_bound` is proven
    /// infeasible and `incumbent` is the best schedule found so far.
    TimedOut {
        lower_bound: usize,
        incumbent: Schedule,
    },
}

impl ExactOutcome {
    pub fn best_schedule(&self) -> &Schedule {
        match self {
            ExactOutcome::Optimal(s) => s,
            ExactOutcome::TimedOut { incumbent, .. } => incumbent,
        }
    }
}

/// A lower bound on the shot count: the best multiplicity-weighted clique the
/// greedy heuristic finds in the conflict graph. Copies of one observable are
/// pairwise conflicting, as are copies of conflicting observables, so any
/// clique's total multiplicity is a valid bound.
pub fn clique_lower_bound(requests: &[MeasurementRequest], relation: Relation) -> Result<usize> {
    validate_requests(requests)?;
    let m = requests.len();
    let adj = conflict_bitsets(requests, relation);
    let words = words_for(m);

    let mut best = requests.iter().map(|r| r.multiplicity).max().unwrap();
    for start in 0..m {
        let mut cand = adj[start].clone();
        let mut weight = requests[start].multiplicity;
        loop {
            // Heaviest candidate, breaking ties by conflict degree inside the
            // candidate set.
            let mut pick: Option<(usize, usize, usize)> = None; // (w, deg, v)
            for w in 0..words {
                let mut bits = cand[w];
                while bits != 0 {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let v = w * WORD_BITS + b;
                    let wv = requests[v].multiplicity;
                    let deg = (0..words)
                        .map(|u| (adj[v][u] & cand[u]).count_ones() as usize)
                        .sum();
                    if pick.map(|(bw, bd, _)| (wv, deg) > (bw, bd)).unwrap_or(true) {
                        pick = Some((wv, deg, v));
                    }
                }
            }
            let Some((wv, _, v)) = pick else { break };
            weight += wv;
            for w in 0..words {
                cand[w] &= adj[v][w];
            }
        }
        best = best.max(weight);
    }
    Ok(best)
}

fn conflict_bitsets(requests: &[MeasurementRequest], relation: Relation) -> Vec<Vec<u64>> {
    let m = requests.len();
    let words = words_for(m);
    let mut adj = vec![vec![0u64; words]; m];
    for i in 0..m {
        for j in i + 1..m {
            if !relation.compatible_unchecked(&requests[i].observable, &requests[j].observable) {
                adj[i][j / WORD_BITS] |= 1 << (j % WORD_BITS);
                adj[j][i / WORD_BITS] |= 1 << (i % WORD_BITS);
            }
        }
    }
    adj
}

/// Find the minimum number of shots for the multiset, with a witness
/// schedule, or report a timeout with the best incumbent. Guarded to
/// [`EXACT_MAX_COPIES`] total copies.
pub fn exact_min_shots(
    requests: &[MeasurementRequest],
    relation: Relation,
    budget: Duration,
) -> Result<ExactOutcome> {
    exact_min_shots_with_limit(requests, relation, budget, EXACT_MAX_COPIES)
}

/// As [`exact_min_shots`] with a caller-chosen copy guard.
pub fn exact_min_shots_with_limit(
    requests: &[MeasurementRequest],
    relation: Relation,
    budget: Duration,
    max_copies: usize,
) -> Result<ExactOutcome> {
    let n = validate_requests(requests)?;
    let total = total_copies(requests);
    if total > max_copies {
        return Err(Error::InstanceTooLarge {
            what: "total copies for the exact solver",
            got: total,
            limit: max_copies,
        });
    }
    let deadline = Instant::now() + budget;

    let lower = clique_lower_bound(requests, relation)?;
    let incumbent = (0..5)
        .map(|seed| greedy_partition(requests, relation, seed))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min_by_key(|s| s.shot_count())
        .unwrap();

    let adj = conflict_bitsets(requests, relation);
    let mut k = lower;
    loop {
        if incumbent.shot_count() == k {
            return Ok(ExactOutcome::Optimal(incumbent));
        }
        let mut searcher = Searcher::new(requests, relation, &adj, n, k, deadline);
        match searcher.run() {
            SearchResult::Feasible(members) => {
                debug_assert_eq!(members.len(), k);
                let mut assignment = vec![Vec::new(); requests.len()];
                for (label, shot) in members.iter().enumerate() {
                    for &(o, _) in shot {
                        assignment[o as usize].push(label);
                    }
                }
                return Ok(ExactOutcome::Optimal(finalize_schedule(
                    n, relation, 0, requests, members, assignment,
                )));
            }
            SearchResult::Infeasible => k += 1,
            SearchResult::Timeout => {
                return Ok(ExactOutcome::TimedOut {
                    lower_bound: k,
                    incumbent,
                })
            }
        }
    }
}

enum SearchResult {
    Feasible(Vec<Vec<(u32, u32)>>),
    Infeasible,
    Timeout,
}

/// One colour class during the search: the usual shot state.
struct ClassState {
    x: Vec<u64>,
    z: Vec<u64>,
    assigned: Vec<u64>,
    members: Vec<(u32, u32)>,
}

struct Searcher<'a> {
    requests: &'a [MeasurementRequest],
    relation: Relation,
    adj: &'a [Vec<u64>],
    words: usize,
    k: usize,
    classes: Vec<ClassState>,
    /// Highest class label each observable occupies so far (copies take
    /// strictly increasing labels, which breaks the copy symmetry).
    last_label: Vec<isize>,
    remaining: Vec<usize>,
    total_remaining: usize,
    deadline: Instant,
    nodes: u64,
}

impl<'a> Searcher<'a> {
    fn new(
        requests: &'a [MeasurementRequest],
        relation: Relation,
        adj: &'a [Vec<u64>],
        n: usize,
        k: usize,
        deadline: Instant,
    ) -> Self {
        Searcher {
            requests,
            relation,
            adj,
            words: words_for(n),
            k,
            classes: Vec::new(),
            last_label: vec![-1; requests.len()],
            remaining: requests.iter().map(|r| r.multiplicity).collect(),
            total_remaining: total_copies(requests),
            deadline,
            nodes: 0,
        }
    }

    fn run(&mut self) -> SearchResult {
        match self.search() {
            Some(true) => {
                let members = self
                    .classes
                    .iter()
                    .map(|c| {
                        let mut ms = c.members.clone();
                        ms.sort_unstable();
                        ms
                    })
                    .collect();
                SearchResult::Feasible(members)
            }
            Some(false) => SearchResult::Infeasible,
            None => SearchResult::Timeout,
        }
    }

    fn fits(&self, class: &ClassState, o: usize) -> bool {
        let s = &self.requests[o].observable;
        match self.relation {
            Relation::QubitWise => {
                let (sx, sz) = (s.x_words(), s.z_words());
                for w in 0..self.words {
                    let support = sx[w] | sz[w];
                    let differ = (class.x[w] ^ sx[w]) | (class.z[w] ^ sz[w]);
                    if support & class.assigned[w] & differ != 0 {
                        return false;
                    }
                }
                true
            }
            Relation::FullCommute => class.members.iter().all(|&(mo, _)| {
                self.adj[o][mo as usize / WORD_BITS] >> (mo as usize % WORD_BITS) & 1 == 0
            }),
        }
    }

    /// Labels observable `o`'s next copy may take: strictly above the last
    /// one used, and low enough that the remaining copies still fit below
    /// `k`. Compatible existing labels first, then one fresh class.
    fn feasible_labels(&self, o: usize) -> Vec<usize> {
        let highest = self.k - self.remaining[o]; // inclusive cap
        let start = (self.last_label[o] + 1) as usize;
        let mut labels = Vec::new();
        for label in start..self.classes.len().min(highest + 1) {
            if self.fits(&self.classes[label], o) {
                labels.push(label);
            }
        }
        if self.classes.len() < self.k && self.classes.len() <= highest {
            labels.push(self.classes.len());
        }
        labels
    }

    /// None = timeout, Some(true) = solution held in `self.classes`.
    fn search(&mut self) -> Option<bool> {
        if self.total_remaining == 0 {
            return Some(true);
        }
        self.nodes += 1;
        if self.nodes & TIME_CHECK_MASK == 0 && Instant::now() >= self.deadline {
            return None;
        }

        // Most constrained observable first.
        let mut choice: Option<(usize, Vec<usize>)> = None;
        for o in 0..self.requests.len() {
            if self.remaining[o] == 0 {
                continue;
            }
            let labels = self.feasible_labels(o);
            if labels.is_empty() {
                return Some(false);
            }
            let better = match &choice {
                None => true,
                Some((bo, bl)) => {
                    (labels.len(), std::cmp::Reverse(self.remaining[o]))
                        < (bl.len(), std::cmp::Reverse(self.remaining[*bo]))
                }
            };
            if better {
                choice = Some((o, labels));
            }
        }
        let (o, labels) = choice.expect("total_remaining > 0 implies a pending observable");

        for label in labels {
            let opened = label == self.classes.len();
            if opened {
                self.classes.push(ClassState {
                    x: vec![0; self.words],
                    z: vec![0; self.words],
                    assigned: vec![0; self.words],
                    members: Vec::new(),
                });
            }
            let copy = (self.requests[o].multiplicity - self.remaining[o]) as u32;
            let prev_label = self.last_label[o];
            let saved = self.place(label, o, copy);
            self.last_label[o] = label as isize;
            self.remaining[o] -= 1;
            self.total_remaining -= 1;

            let result = self.search();
            if result != Some(false) {
                // Feasible: leave the assignment in place for `run`.
                // Timeout: state is discarded anyway.
                return result;
            }

            self.total_remaining += 1;
            self.remaining[o] += 1;
            self.last_label[o] = prev_label;
            self.unplace(label, saved);
            if opened {
                self.classes.pop();
            }
        }
        Some(false)
    }

    fn place(&mut self, label: usize, o: usize, copy: u32) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
        let s = &self.requests[o].observable;
        let class = &mut self.classes[label];
        let saved = (class.x.clone(), class.z.clone(), class.assigned.clone());
        let (sx, sz) = (s.x_words(), s.z_words());
        for w in 0..self.words {
            let fresh = (sx[w] | sz[w]) & !class.assigned[w];
            class.x[w] |= sx[w] & fresh;
            class.z[w] |= sz[w] & fresh;
            class.assigned[w] |= fresh;
        }
        class.members.push((o as u32, copy));
        saved
    }

    fn unplace(&mut self, label: usize, saved: (Vec<u64>, Vec<u64>, Vec<u64>)) {
        let class = &mut self.classes[label];
        class.members.pop();
        class.x = saved.0;
        class.z = saved.1;
        class.assigned = saved.2;
    }
}
