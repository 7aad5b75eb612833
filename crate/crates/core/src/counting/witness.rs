//! Backtracking search for a `K_{t,t,t}` subgraph copy.

use crate::graph::Graph;

/// Three disjoint classes of size `t` with every cross pair an edge. The
/// classes themselves need not be independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupWitness {
    pub t: usize,
    pub classes: [Vec<usize>; 3],
}

impl BlowupWitness {
    pub fn verify(&self, g: &Graph) -> bool {
        let mut seen = vec![false; g.n()];
        for class in &self.classes {
            if class.len() != self.t {
                return false;
            }
            for &v in class {
                if v >= g.n() || std::mem::replace(&mut seen[v], true) {
                    return false;
                }
            }
        }
        (0..3).all(|i| {
            (i + 1..3).all(|j| self.classes[i].iter().all(|&u| self.classes[j].iter().all(|&v| g.has_edge(u, v))))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessOutcome {
    Found {
        witness: BlowupWitness,
        expansions: u64,
    },
    /// The search finished without finding a copy: certified absence.
    Absent {
        expansions: u64,
    },
    /// The budget ran out first; nothing is certified.
    BudgetExhausted {
        expansions: u64,
    },
}

impl WitnessOutcome {
    pub fn witness(&self) -> Option<&BlowupWitness> {
        match self {
            WitnessOutcome::Found { witness, .. } => Some(witness),
            _ => None,
        }
    }

    pub fn expansions(&self) -> u64 {
        match *self {
            WitnessOutcome::Found { expansions, .. }
            | WitnessOutcome::Absent { expansions }
            | WitnessOutcome::BudgetExhausted { expansions } => expansions,
        }
    }
}

/// Grows three classes in turn. Vertices are tried by degree, highest first
/// (lowest index among equal degrees). Within a class vertices are taken in
/// increasing rank, and the classes are ordered by the rank of their first
/// vertex, so each copy is visited once. A branch is cut when the candidates
/// left cannot fill the remaining slots.
pub fn find_blowup_witness(g: &Graph, t: usize, budget: u64) -> WitnessOutcome {
    assert!(t >= 1, "t must be positive");
    let n = g.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut rank = vec![0usize; n];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }
    let mut search = Search {
        g,
        t,
        rank,
        budget,
        expansions: 0,
        classes: [Vec::new(), Vec::new(), Vec::new()],
        used: vec![false; n],
    };
    match search.grow(0, &order) {
        Step::Found => {
            let mut classes = search.classes.clone();
            for c in classes.iter_mut() {
                c.sort_unstable();
            }
            let witness = BlowupWitness { t, classes };
            debug_assert!(witness.verify(g));
            WitnessOutcome::Found { witness, expansions: search.expansions }
        }
        Step::Exhausted => WitnessOutcome::Absent { expansions: search.expansions },
        Step::OutOfBudget => WitnessOutcome::BudgetExhausted { expansions: search.expansions },
    }
}

enum Step {
    Found,
    Exhausted,
    OutOfBudget,
}

struct Search<'a> {
    g: &'a Graph,
    t: usize,
    rank: Vec<usize>,
    budget: u64,
    expansions: u64,
    classes: [Vec<usize>; 3],
    used: Vec<bool>,
}

impl Search<'_> {
    /// `pool`: vertices (in rank order) adjacent to every vertex of the
    /// classes before `class`.
    fn grow(&mut self, class: usize, pool: &[usize]) -> Step {
        if class == 3 {
            return Step::Found;
        }
        if self.classes[class].len() == self.t {
            let next: Vec<usize> = pool
                .iter()
                .copied()
                .filter(|&v| !self.used[v] && self.classes[class].iter().all(|&u| self.g.has_edge(u, v)))
                .collect();
            return self.grow(class + 1, &next);
        }
        self.expansions += 1;
        if self.expansions > self.budget {
            return Step::OutOfBudget;
        }
        let need_here = self.t - self.classes[class].len();
        let need_later = self.t * (2 - class);
        let floor = match self.classes[class].last() {
            Some(&last) => self.rank[last] + 1,
            // first vertex of this class ranks above the previous class's first
            None if class > 0 => self.rank[self.classes[class - 1][0]] + 1,
            None => 0,
        };
        let candidates: Vec<usize> = pool.iter().copied().filter(|&v| !self.used[v] && self.rank[v] >= floor).collect();
        for (i, &v) in candidates.iter().enumerate() {
            if candidates.len() - i < need_here {
                break;
            }
            if need_later > 0 {
                // later classes live in the common neighbourhood of this class
                let room = pool
                    .iter()
                    .filter(|&&w| {
                        w != v
                            && !self.used[w]
                            && self.classes[class].iter().all(|&u| self.g.has_edge(u, w))
                            && self.g.has_edge(v, w)
                    })
                    .count();
                if room < need_later {
                    continue;
                }
            }
            self.used[v] = true;
            self.classes[class].push(v);
            match self.grow(class, pool) {
                Step::Exhausted => {}
                other => return other,
            }
            self.classes[class].pop();
            self.used[v] = false;
        }
        Step::Exhausted
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_multipartite, random_graph};

    #[test]
    fn k9_contains_k333() {
        let out = find_blowup_witness(&Graph::complete(9), 3, 1_000_000);
        let w = out.witness().expect("found");
        assert!(w.verify(&Graph::complete(9)));
    }

    #[test]
    fn c5_has_no_triangle() {
        let out = find_blowup_witness(&Graph::cycle(5).unwrap(), 1, 1_000_000);
        assert!(matches!(out, WitnessOutcome::Absent { .. }));
    }

    #[test]
    fn complete_tripartite_hosts() {
        for m in 1..=4 {
            let g = complete_multipartite(&[m, m, m]).unwrap();
            for t in 1..=m {
                assert!(find_blowup_witness(&g, t, 1_000_000).witness().unwrap().verify(&g));
            }
            // not enough room for t = m + 1
            assert!(matches!(find_blowup_witness(&g, m + 1, 10_000_000), WitnessOutcome::Absent { .. }));
        }
    }

    #[test]
    fn tiny_budget_is_reported() {
        let g = random_graph(60, 0.3, 1).unwrap();
        let out = find_blowup_witness(&g, 3, 5);
        assert!(matches!(out, WitnessOutcome::BudgetExhausted { expansions: 6 }));
    }

    #[test]
    fn witness_verification_rejects_bad_classes() {
        let g = Graph::complete(6);
        let bad = BlowupWitness { t: 2, classes: [vec![0, 1], vec![1, 2], vec![3, 4]] };
        assert!(!bad.verify(&g));
    }
}
