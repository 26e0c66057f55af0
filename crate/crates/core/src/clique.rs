//! Complete-subgraph counting and the clique polynomial.
//!
//! Cliques are enumerated by ordered expansion: each clique is grown only by
//! common neighbors that come later in a degeneracy ordering, so every clique
//! is visited exactly once.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::graph::{sorted_intersection, Graph};
use crate::poly::IntPolynomial;

/// Clique counts by size: `counts[k - 1]` is the number of `k`-cliques.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueVector {
    counts: Vec<u64>,
}

impl CliqueVector {
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Clique number; 0 for the empty graph.
    pub fn omega(&self) -> usize {
        self.counts.len()
    }

    /// Number of `k`-cliques (0 when `k` is 0 or exceeds omega).
    pub fn count(&self, k: usize) -> u64 {
        k.checked_sub(1)
            .and_then(|i| self.counts.get(i))
            .copied()
            .unwrap_or(0)
    }

    /// `1 + sum_k c_k x^k`.
    pub fn polynomial(&self) -> IntPolynomial {
        let mut coeffs = Vec::with_capacity(self.counts.len() + 1);
        coeffs.push(BigInt::from(1));
        coeffs.extend(self.counts.iter().map(|&c| BigInt::from(c)));
        IntPolynomial::new(coeffs)
    }
}

/// Orientation of `g` along a degeneracy ordering: `forward[v]` lists the
/// neighbors of `v` that are removed after it, as ranks in that ordering.
struct Oriented {
    forward: Vec<Vec<usize>>,
}

impl Oriented {
    fn new(g: &Graph) -> Self {
        let n = g.vertex_count();
        let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
        let mut removed = vec![false; n];
        let mut rank = vec![0; n];
        for r in 0..n {
            let v = (0..n)
                .filter(|&v| !removed[v])
                .min_by_key(|&v| (degree[v], v))
                .expect("a vertex remains");
            removed[v] = true;
            rank[v] = r;
            for &w in g.neighbors(v) {
                if !removed[w] {
                    degree[w] -= 1;
                }
            }
        }
        let mut forward = vec![Vec::new(); n];
        for v in 0..n {
            let mut later: Vec<usize> = g
                .neighbors(v)
                .iter()
                .map(|&w| rank[w])
                .filter(|&rw| rw > rank[v])
                .collect();
            later.sort_unstable();
            forward[rank[v]] = later;
        }
        Oriented { forward }
    }

    /// Visits every clique once; `visit(size)` returns false to stop early.
    fn expand<F>(&self, size: usize, candidates: &[usize], visit: &mut F) -> bool
    where
        F: FnMut(usize) -> bool,
    {
        for &c in candidates {
            if !visit(size + 1) {
                return false;
            }
            let next = sorted_intersection(candidates, &self.forward[c]);
            if !next.is_empty() && !self.expand(size + 1, &next, visit) {
                return false;
            }
        }
        true
    }

    fn for_each_clique<F>(&self, mut visit: F)
    where
        F: FnMut(usize) -> bool,
    {
        for v in 0..self.forward.len() {
            if !visit(1) {
                return;
            }
            if !self.expand(1, &self.forward[v], &mut visit) {
                return;
            }
        }
    }
}

pub fn count_cliques(g: &Graph) -> CliqueVector {
    let mut counts: Vec<u64> = Vec::new();
    Oriented::new(g).for_each_clique(|size| {
        if counts.len() < size {
            counts.resize(size, 0);
        }
        counts[size - 1] += 1;
        true
    });
    CliqueVector { counts }
}

/// `C(G, x) = 1 + sum_k c_k(G) x^k`.
pub fn clique_polynomial(g: &Graph) -> IntPolynomial {
    count_cliques(g).polynomial()
}

/// True iff `g` has no clique on `t` vertices. Stops at the first one found.
pub fn forbidden_clique_check(g: &Graph, t: usize) -> Result<bool> {
    if t < 2 {
        return Err(Error::argument(format!("forbidden clique size must be >= 2, got {t}")));
    }
    let mut found = false;
    Oriented::new(g).for_each_clique(|size| {
        found = size >= t;
        !found
    });
    Ok(!found)
}
