//! Reduction of a connected K4-free chordal graph to a triangle-free graph
//! whose clique polynomial is the quadratic cofactor of `(1 + x)`.
//!
//! Delete the edges of a spanning tree rooted at `root` (leaving `g_hat`,
//! where `root` is isolated), then delete `root` itself (leaving `g_tilde`).

use std::collections::VecDeque;

use serde::Serialize;
use serde_with::{serde_as, DisplayFromStr};

use crate::chordal::is_chordal;
use crate::clique::{clique_polynomial, count_cliques, forbidden_clique_check};
use crate::error::{Error, Precondition, Result};
use crate::graph::Graph;
use crate::poly::IntPolynomial;
use crate::rng::Rng;

/// `1 + (n-1) x + (m-n+1) x^2`.
pub fn quadratic_factor(n: usize, m: usize) -> Result<IntPolynomial> {
    if n == 0 || m + 1 < n {
        return Err(Error::argument(format!(
            "quadratic factor needs n >= 1 and m >= n - 1, got n = {n}, m = {m}"
        )));
    }
    Ok(IntPolynomial::new(vec![
        1.into(),
        (n - 1).into(),
        (m + 1 - n).into(),
    ]))
}

/// Rejects inputs that are not connected, chordal and K4-free, in that order.
pub fn require_k4_free_chordal(g: &Graph) -> Result<()> {
    if !g.is_connected() {
        return Err(Error::Precondition(Precondition::NotConnected));
    }
    if !is_chordal(g) {
        return Err(Error::Precondition(Precondition::NotChordal));
    }
    if !forbidden_clique_check(g, 4)? {
        return Err(Error::Precondition(Precondition::HasK4));
    }
    Ok(())
}

/// `1 - n + m - t == 0` with `t` the triangle count, i.e. `C(g, -1) == 0`.
pub fn verify_euler_identity(g: &Graph) -> Result<bool> {
    require_k4_free_chordal(g)?;
    let t = count_cliques(g).count(3) as i128;
    Ok(1 - g.vertex_count() as i128 + g.edge_count() as i128 - t == 0)
}

/// The four stages of the reduction.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    #[serde_as(as = "DisplayFromStr")]
    pub root: usize,
    /// `(parent, child)` pairs.
    #[serde_as(as = "Vec<(DisplayFromStr, DisplayFromStr)>")]
    pub tree_edges: Vec<(usize, usize)>,
    #[serde(skip)]
    pub g_hat: Graph,
    #[serde(skip)]
    pub g_tilde: Graph,
    pub q: IntPolynomial,
}

/// Spanning tree from breadth-first search, neighbors in ascending order.
pub fn bfs_spanning_tree(g: &Graph, root: usize) -> Vec<(usize, usize)> {
    let mut seen = vec![false; g.vertex_count()];
    let mut tree = Vec::new();
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                tree.push((u, w));
                queue.push_back(w);
            }
        }
    }
    tree
}

/// Random spanning tree that contains every edge at `root` (so the root ends
/// up isolated once the tree is deleted) and then grows by repeatedly adding
/// a uniformly chosen edge between the tree and the rest of the graph. Not
/// uniform over such trees.
pub fn random_spanning_tree(g: &Graph, root: usize, rng: &mut Rng) -> Vec<(usize, usize)> {
    let mut inside = vec![false; g.vertex_count()];
    inside[root] = true;
    let mut tree: Vec<(usize, usize)> = g.neighbors(root).iter().map(|&w| (root, w)).collect();
    let mut frontier = Vec::new();
    for &(_, w) in &tree {
        inside[w] = true;
    }
    for &(_, w) in &tree {
        frontier.extend(g.neighbors(w).iter().filter(|&&x| !inside[x]).map(|&x| (w, x)));
    }
    while !frontier.is_empty() {
        let (u, w) = frontier.swap_remove(rng.below(frontier.len()));
        if inside[w] {
            continue;
        }
        inside[w] = true;
        tree.push((u, w));
        frontier.extend(g.neighbors(w).iter().filter(|&&x| !inside[x]).map(|&x| (w, x)));
    }
    tree
}

/// Reduction along the breadth-first spanning tree rooted at `root`.
pub fn triangle_free_reduction(g: &Graph, root: usize) -> Result<ReductionTrace> {
    check_root(g, root)?;
    require_k4_free_chordal(g)?;
    reduction_with_tree(g, root, bfs_spanning_tree(g, root))
}

fn check_root(g: &Graph, root: usize) -> Result<()> {
    if root >= g.vertex_count() {
        return Err(Error::argument(format!("root {root} out of range")));
    }
    Ok(())
}

/// Reduction along a caller-supplied spanning tree. The tree must have
/// `n - 1` edges of `g` that connect every vertex, including every edge at
/// `root`.
pub fn reduction_with_tree(
    g: &Graph,
    root: usize,
    tree_edges: Vec<(usize, usize)>,
) -> Result<ReductionTrace> {
    check_root(g, root)?;
    require_k4_free_chordal(g)?;
    let n = g.vertex_count();
    let tree = Graph::from_edges(n, tree_edges.iter().copied())?;
    if tree.edge_count() != n - 1 || tree_edges.len() != n - 1 || !tree.is_connected() {
        return Err(Error::argument("tree edges do not form a spanning tree"));
    }
    if tree.degree(root) != g.degree(root) {
        return Err(Error::argument("the tree must contain every edge at the root"));
    }
    let g_hat = g.delete_edges(&tree_edges)?;
    let g_tilde = g_hat.delete_vertex(root)?;
    Ok(ReductionTrace {
        root,
        tree_edges,
        g_hat,
        g_tilde,
        q: quadratic_factor(n, g.edge_count())?,
    })
}

impl ReductionTrace {
    /// Checks every claimed property of the reduction of `g`: the root is
    /// isolated in `g_hat`, `g_tilde` is triangle-free with `n - 1` vertices
    /// and `m - n + 1` edges, `C(g_tilde) = q`, and `C(g) = (1 + x) q`.
    pub fn verify(&self, g: &Graph) -> Result<()> {
        let (n, m) = (g.vertex_count(), g.edge_count());
        let fail = |what: &str| Err(Error::Consistency(format!("reduction from root {}: {what}", self.root)));
        if self.g_hat.degree(self.root) != 0 {
            return fail("root is not isolated after deleting the tree");
        }
        if self.g_tilde.vertex_count() != n - 1 || self.g_tilde.edge_count() + n != m + 1 {
            return fail("reduced graph has the wrong size");
        }
        if !forbidden_clique_check(&self.g_tilde, 3)? {
            return fail("reduced graph contains a triangle");
        }
        if clique_polynomial(&self.g_tilde) != self.q {
            return fail("clique polynomial of the reduced graph differs from the quadratic factor");
        }
        if clique_polynomial(g) != &IntPolynomial::binomial_power(1) * &self.q {
            return fail("clique polynomial does not factor as (1 + x) q");
        }
        Ok(())
    }

    /// JSON with the four stages as edge lists.
    pub fn to_json(&self, input: &Graph) -> serde_json::Value {
        let edges = |g: &Graph| -> serde_json::Value {
            serde_json::json!({
                "n": g.vertex_count().to_string(),
                "edges": g.edges().map(|(u, v)| [u.to_string(), v.to_string()]).collect::<Vec<_>>(),
            })
        };
        serde_json::json!({
            "root": self.root.to_string(),
            "input": edges(input),
            "tree": self.tree_edges.iter().map(|(u, v)| [u.to_string(), v.to_string()]).collect::<Vec<_>>(),
            "g_hat": edges(&self.g_hat),
            "g_tilde": edges(&self.g_tilde),
            "q": self.q,
        })
    }
}
