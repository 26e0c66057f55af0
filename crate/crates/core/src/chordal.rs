//! Chordal graphs: recognition, elimination orderings, clique trees and the
//! closed-form clique polynomial of a clique pasting.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use crate::error::{Error, Precondition, Result};
use crate::graph::{Graph, VertexSet};
use crate::poly::IntPolynomial;

/// A vertex order in which every vertex is simplicial among the vertices
/// that follow it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationOrdering {
    order: Vec<usize>,
    position: Vec<usize>,
    later_neighbor_counts: Vec<usize>,
}

impl EliminationOrdering {
    /// Validates `order` as a perfect elimination ordering of `g`.
    pub fn new(g: &Graph, order: Vec<usize>) -> Result<Self> {
        let n = g.vertex_count();
        let mut position = vec![usize::MAX; n];
        if order.len() != n {
            return Err(Error::argument(format!(
                "ordering has {} entries for {n} vertices",
                order.len()
            )));
        }
        for (i, &v) in order.iter().enumerate() {
            if v >= n || position[v] != usize::MAX {
                return Err(Error::argument("ordering is not a permutation of the vertices"));
            }
            position[v] = i;
        }
        if let Some(w) = find_violation(g, &order, &position) {
            return Err(Error::argument(format!(
                "not a perfect elimination ordering: later neighbors {} and {} of vertex {} are not adjacent",
                w.pair.0, w.pair.1, w.vertex
            )));
        }
        let later_neighbor_counts = (0..n)
            .map(|v| g.neighbors(v).iter().filter(|&&w| position[w] > position[v]).count())
            .collect();
        Ok(EliminationOrdering {
            order,
            position,
            later_neighbor_counts,
        })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Indexed by vertex.
    pub fn later_neighbor_counts(&self) -> &[usize] {
        &self.later_neighbor_counts
    }

    pub fn position(&self, v: usize) -> usize {
        self.position[v]
    }

    /// Neighbors of `v` that come after it, in elimination order.
    pub fn later_neighbors(&self, g: &Graph, v: usize) -> Vec<usize> {
        let mut later: Vec<usize> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| self.position[w] > self.position[v])
            .collect();
        later.sort_unstable_by_key(|&w| self.position[w]);
        later
    }

    fn check_matches(&self, g: &Graph) -> Result<()> {
        let n = g.vertex_count();
        let counts_match = self.order.len() == n
            && (0..n).all(|v| {
                g.neighbors(v)
                    .iter()
                    .filter(|&&w| self.position[w] > self.position[v])
                    .count()
                    == self.later_neighbor_counts[v]
            });
        if !counts_match || find_violation(g, &self.order, &self.position).is_some() {
            return Err(Error::argument("elimination ordering is not valid for this graph"));
        }
        Ok(())
    }
}

/// Evidence that a graph is not chordal: two later neighbors of `vertex`
/// that are not adjacent to each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChordlessWitness {
    pub vertex: usize,
    pub pair: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Perfect(EliminationOrdering),
    Rejected(ChordlessWitness),
}

// For each vertex, its earliest later neighbor must be adjacent to all the
// other later neighbors.
fn find_violation(g: &Graph, order: &[usize], position: &[usize]) -> Option<ChordlessWitness> {
    for &v in order {
        let parent = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| position[w] > position[v])
            .min_by_key(|&w| position[w]);
        let Some(parent) = parent else { continue };
        for &w in g.neighbors(v) {
            if w != parent && position[w] > position[v] && !g.has_edge(parent, w) {
                return Some(ChordlessWitness {
                    vertex: v,
                    pair: (parent.min(w), parent.max(w)),
                });
            }
        }
    }
    None
}

/// Maximum cardinality search. Ties go to the smallest vertex index; the
/// first vertex picked is last in the resulting ordering. Disconnected
/// graphs are handled as well, each component in turn.
pub fn maximum_cardinality_search(g: &Graph) -> SearchOutcome {
    mcs_from(g, None)
}

/// Maximum cardinality search that starts at `start`, which therefore ends
/// up last in the elimination ordering.
pub fn maximum_cardinality_search_from(g: &Graph, start: usize) -> Result<SearchOutcome> {
    if start >= g.vertex_count() {
        return Err(Error::argument(format!("start vertex {start} out of range")));
    }
    Ok(mcs_from(g, Some(start)))
}

fn mcs_from(g: &Graph, start: Option<usize>) -> SearchOutcome {
    let n = g.vertex_count();
    let mut weight = vec![0usize; n];
    let mut numbered = vec![false; n];
    let mut order = vec![0usize; n];
    for slot in (0..n).rev() {
        let v = match start {
            Some(s) if slot == n - 1 => s,
            _ => (0..n)
                .filter(|&v| !numbered[v])
                .max_by_key(|&v| (weight[v], std::cmp::Reverse(v)))
                .expect("an unnumbered vertex remains"),
        };
        numbered[v] = true;
        order[slot] = v;
        for &w in g.neighbors(v) {
            if !numbered[w] {
                weight[w] += 1;
            }
        }
    }
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    match find_violation(g, &order, &position) {
        Some(w) => SearchOutcome::Rejected(w),
        None => SearchOutcome::Perfect(
            EliminationOrdering::new(g, order).expect("violation-free ordering validates"),
        ),
    }
}

pub fn is_chordal(g: &Graph) -> bool {
    matches!(maximum_cardinality_search(g), SearchOutcome::Perfect(_))
}

/// Elimination ordering of a chordal graph, or `NotChordal`.
pub fn perfect_elimination_ordering(g: &Graph) -> Result<EliminationOrdering> {
    match maximum_cardinality_search(g) {
        SearchOutcome::Perfect(peo) => Ok(peo),
        SearchOutcome::Rejected(_) => Err(Error::Precondition(Precondition::NotChordal)),
    }
}

/// Maximal cliques as summands joined into a tree by separator cliques.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CliqueDecomposition {
    #[serde_as(as = "Vec<Vec<DisplayFromStr>>")]
    summands: Vec<Vec<usize>>,
    #[serde_as(as = "Vec<Vec<DisplayFromStr>>")]
    separators: Vec<Vec<usize>>,
    #[serde_as(as = "Vec<(DisplayFromStr, DisplayFromStr)>")]
    tree_edges: Vec<(usize, usize)>,
}

impl CliqueDecomposition {
    /// Assembles a decomposition without checking it against a graph; see
    /// [`CliqueDecomposition::validate`]. Separator `j` belongs to tree edge `j`.
    pub fn from_parts(
        summands: Vec<VertexSet>,
        separators: Vec<VertexSet>,
        tree_edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        if separators.len() != tree_edges.len() {
            return Err(Error::argument("one separator per tree edge is required"));
        }
        if tree_edges.iter().any(|&(a, b)| a >= summands.len() || b >= summands.len() || a == b) {
            return Err(Error::argument("tree edge references a missing summand"));
        }
        Ok(CliqueDecomposition {
            summands: summands.into_iter().map(VertexSet::into_vec).collect(),
            separators: separators.into_iter().map(VertexSet::into_vec).collect(),
            tree_edges,
        })
    }

    pub fn summands(&self) -> &[Vec<usize>] {
        &self.summands
    }

    pub fn separators(&self) -> &[Vec<usize>] {
        &self.separators
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.tree_edges
    }

    pub fn summand_sizes(&self) -> Vec<usize> {
        self.summands.iter().map(Vec::len).collect()
    }

    pub fn separator_sizes(&self) -> Vec<usize> {
        self.separators.iter().map(Vec::len).collect()
    }

    /// Predicted multiplicity of the root -1: the single summand size when
    /// there is one summand, the smallest separator size otherwise.
    pub fn minus_one_multiplicity(&self) -> usize {
        match self.separators.iter().map(Vec::len).min() {
            Some(l) => l,
            None => self.summands.first().map_or(0, Vec::len),
        }
    }

    /// Checks every structural invariant against the graph it decomposes:
    /// summands are exactly the maximal cliques, tree edges form a tree,
    /// separators are the strict intersections of their endpoints, and the
    /// running intersection property holds.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let fail = |msg: String| Err(Error::Consistency(format!("clique decomposition: {msg}")));
        let r = self.summands.len();
        if r == 0 {
            return if g.vertex_count() == 0 { Ok(()) } else { fail("no summands".into()) };
        }
        let sets: Vec<VertexSet> = self.summands.iter().map(|s| VertexSet::new(s.clone())).collect();
        let mut covered = BTreeSet::new();
        for s in &sets {
            if s.members().last().is_some_and(|&v| v >= g.vertex_count()) || !g.is_clique(s)? {
                return fail(format!("summand {:?} is not a clique", s.members()));
            }
            covered.extend(s.members().iter().copied());
        }
        if covered.len() != g.vertex_count() {
            return fail("summands do not cover every vertex".into());
        }
        for (u, v) in g.edges() {
            if !sets.iter().any(|s| s.contains(u) && s.contains(v)) {
                return fail(format!("edge ({u}, {v}) lies in no summand"));
            }
        }
        for (i, a) in sets.iter().enumerate() {
            if sets.iter().enumerate().any(|(j, b)| i != j && a.is_subset(b)) {
                return fail(format!("summand {i} is not maximal"));
            }
        }
        if self.tree_edges.len() != r - 1 || self.separators.len() != r - 1 {
            return fail(format!("{r} summands need {} tree edges", r - 1));
        }
        let mut dsu = DisjointSets::new(r);
        for (j, &(a, b)) in self.tree_edges.iter().enumerate() {
            if a >= r || b >= r || !dsu.union(a, b) {
                return fail("tree edges do not form a tree".into());
            }
            let meet = sets[a].intersection(&sets[b]);
            if meet.members() != self.separators[j].as_slice() {
                return fail(format!("separator {j} is not the intersection of its summands"));
            }
            if meet.len() >= sets[a].len() || meet.len() >= sets[b].len() {
                return fail(format!("separator {j} is not strictly smaller than its summands"));
            }
        }
        for v in covered {
            let holders: Vec<usize> = (0..r).filter(|&i| sets[i].contains(v)).collect();
            let mut dsu = DisjointSets::new(r);
            let mut joined = 0;
            for &(a, b) in &self.tree_edges {
                if sets[a].contains(v) && sets[b].contains(v) && dsu.union(a, b) {
                    joined += 1;
                }
            }
            if joined + 1 != holders.len() {
                return fail(format!("running intersection fails at vertex {v}"));
            }
        }
        Ok(())
    }
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// False when already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Clique tree of a connected chordal graph.
///
/// Summands are the maximal sets `{v} + later(v)`, listed in elimination
/// order of their generating vertex. The tree is a maximum-weight spanning
/// tree of the clique intersection graph; equal weights prefer the
/// lexicographically smallest summand pair.
pub fn clique_tree(g: &Graph, peo: &EliminationOrdering) -> Result<CliqueDecomposition> {
    peo.check_matches(g)?;
    if !g.is_connected() {
        return Err(Error::Precondition(Precondition::NotConnected));
    }
    let candidates: Vec<VertexSet> = peo
        .order()
        .iter()
        .map(|&v| {
            let mut members = peo.later_neighbors(g, v);
            members.push(v);
            VertexSet::new(members)
        })
        .collect();
    let summands: Vec<VertexSet> = candidates
        .iter()
        .enumerate()
        .filter(|&(i, c)| {
            !candidates
                .iter()
                .enumerate()
                .any(|(j, d)| j != i && d.len() > c.len() && c.is_subset(d))
        })
        .map(|(_, c)| c.clone())
        .collect();

    let r = summands.len();
    let mut weighted = Vec::new();
    for i in 0..r {
        for j in i + 1..r {
            let meet = summands[i].intersection(&summands[j]);
            if !meet.is_empty() {
                weighted.push((meet.len(), i, j, meet));
            }
        }
    }
    weighted.sort_by(|a, b| b.0.cmp(&a.0).then((a.1, a.2).cmp(&(b.1, b.2))));

    let mut dsu = DisjointSets::new(r);
    let mut tree_edges = Vec::with_capacity(r.saturating_sub(1));
    let mut separators = Vec::with_capacity(r.saturating_sub(1));
    for (_, i, j, meet) in weighted {
        if dsu.union(i, j) {
            tree_edges.push((i, j));
            separators.push(meet);
        }
    }
    if tree_edges.len() + 1 != r.max(1) {
        return Err(Error::Precondition(Precondition::NotConnected));
    }
    CliqueDecomposition::from_parts(summands, separators, tree_edges)
}

/// `sum_i (1+x)^{n_i} - sum_j (1+x)^{l_j}` over summand and separator sizes.
pub fn closed_form_clique_polynomial(d: &CliqueDecomposition) -> IntPolynomial {
    let plus = d
        .summands
        .iter()
        .fold(IntPolynomial::zero(), |acc, s| &acc + &IntPolynomial::binomial_power(s.len()));
    d.separators
        .iter()
        .fold(plus, |acc, s| &acc - &IntPolynomial::binomial_power(s.len()))
}

/// Clique polynomial of two graphs pasted along a shared clique of size
/// `separator_size`: `c1 + c2 - (1+x)^i`.
pub fn pasting_polynomial(
    c1: &IntPolynomial,
    c2: &IntPolynomial,
    separator_size: usize,
) -> Result<IntPolynomial> {
    if separator_size < 1 {
        return Err(Error::argument("pasting needs a separator clique of size >= 1"));
    }
    Ok(&(c1 + c2) - &IntPolynomial::binomial_power(separator_size))
}

/// `1 + sum_v x (1+x)^{d_v}` with `d_v` the later-neighbor count of `v`:
/// every clique has a unique earliest vertex, and the rest of it is any
/// subset of that vertex's later neighbors.
pub fn fast_chordal_polynomial(g: &Graph, peo: &EliminationOrdering) -> Result<IntPolynomial> {
    peo.check_matches(g)?;
    let x = IntPolynomial::monomial(1.into(), 1);
    Ok(peo
        .later_neighbor_counts()
        .iter()
        .fold(IntPolynomial::one(), |acc, &d| &acc + &(&x * &IntPolynomial::binomial_power(d))))
}

/// Glues `g2` onto `g1` by identifying `q2[k]` with `q1[k]`. Both lists must
/// be cliques of equal size in their graphs. Remaining vertices of `g2` are
/// appended after those of `g1` in increasing order.
pub fn paste(g1: &Graph, q1: &[usize], g2: &Graph, q2: &[usize]) -> Result<Graph> {
    if q1.len() != q2.len() {
        return Err(Error::argument("pasting cliques must have equal size"));
    }
    let set1 = VertexSet::new(q1.to_vec());
    let set2 = VertexSet::new(q2.to_vec());
    if set1.len() != q1.len() || set2.len() != q2.len() {
        return Err(Error::argument("pasting clique lists repeat a vertex"));
    }
    if !g1.is_clique(&set1)? || !g2.is_clique(&set2)? {
        return Err(Error::argument("pasting sets must be cliques"));
    }
    let n1 = g1.vertex_count();
    let mut map = vec![usize::MAX; g2.vertex_count()];
    for (&a, &b) in q1.iter().zip(q2) {
        map[b] = a;
    }
    let mut next = n1;
    for slot in map.iter_mut().filter(|s| **s == usize::MAX) {
        *slot = next;
        next += 1;
    }
    let edges = g1.edges().chain(g2.edges().map(|(u, v)| (map[u], map[v])));
    Graph::from_edges(next, edges)
}
