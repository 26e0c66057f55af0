//! Simple undirected graphs on dense vertex indices `0..n`.
//!
//! Graphs are immutable once built. Every constructor validates its input, so
//! a `Graph` value never carries self-loops, duplicate edges or asymmetric
//! adjacency.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    m: usize,
    adj: Vec<Vec<usize>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            m: 0,
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list. Duplicate edges (in either
    /// orientation) are merged.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::argument(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::argument(format!("self-loop at vertex {u}")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Self::from_sorted_unique(n, set))
    }

    fn from_sorted_unique(n: usize, edges: BTreeSet<(usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph {
            n,
            m: edges.len(),
            adj,
        }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::from_edges(n, edges).expect("complete graph edges are valid")
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("path edges are valid")
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::argument(format!("a cycle needs 3 vertices, got {n}")));
        }
        Self::from_edges(n, (0..n).map(|v| (v, (v + 1) % n)))
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    /// Sorted neighbors of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::argument(format!(
                "vertex {v} out of range for {} vertices",
                self.n
            )));
        }
        Ok(())
    }

    fn check_set(&self, u: &VertexSet) -> Result<()> {
        match u.members().last() {
            Some(&v) => self.check_vertex(v),
            None => Ok(()),
        }
    }

    /// Subgraph induced on `u`, relabelled order-preservingly to `0..|u|`.
    pub fn induced_subgraph(&self, u: &VertexSet) -> Result<Graph> {
        self.check_set(u)?;
        let members = u.members();
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in members.iter().enumerate() {
            index[v] = i;
        }
        let mut edges = BTreeSet::new();
        for (i, &v) in members.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = index[w];
                if j != usize::MAX && j > i {
                    edges.insert((i, j));
                }
            }
        }
        Ok(Self::from_sorted_unique(members.len(), edges))
    }

    /// True iff every pair of `u` is adjacent (vacuously true for `|u| <= 1`).
    pub fn is_clique(&self, u: &VertexSet) -> Result<bool> {
        self.check_set(u)?;
        Ok(self.is_clique_unchecked(u.members()))
    }

    pub(crate) fn is_clique_unchecked(&self, members: &[usize]) -> bool {
        members
            .iter()
            .enumerate()
            .all(|(i, &a)| members[i + 1..].iter().all(|&b| self.has_edge(a, b)))
    }

    /// Removes the listed edges; every listed edge must exist.
    pub fn delete_edges(&self, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut set: BTreeSet<(usize, usize)> = self.edges().collect();
        for &(u, v) in edges {
            if !set.remove(&(u.min(v), u.max(v))) {
                return Err(Error::argument(format!("edge ({u}, {v}) not present")));
            }
        }
        Ok(Self::from_sorted_unique(self.n, set))
    }

    /// Removes `v` with its incident edges; higher vertices shift down by one.
    pub fn delete_vertex(&self, v: usize) -> Result<Graph> {
        self.check_vertex(v)?;
        let relabel = |w: usize| if w > v { w - 1 } else { w };
        let set = self
            .edges()
            .filter(|&(a, b)| a != v && b != v)
            .map(|(a, b)| (relabel(a), relabel(b)))
            .collect();
        Ok(Self::from_sorted_unique(self.n - 1, set))
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// The empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.components().len() == 1
    }

    /// Disjoint union; vertices of `other` are shifted past `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n;
        let set = self
            .edges()
            .chain(other.edges().map(|(u, v)| (u + shift, v + shift)))
            .collect();
        Self::from_sorted_unique(self.n + other.n, set)
    }
}

/// Sorted, duplicate-free set of vertex indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        VertexSet(members)
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(sorted_intersection(&self.0, &other.0))
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

impl From<Vec<usize>> for VertexSet {
    fn from(members: Vec<usize>) -> Self {
        VertexSet::new(members)
    }
}

impl<const N: usize> From<[usize; N]> for VertexSet {
    fn from(members: [usize; N]) -> Self {
        VertexSet::new(members.to_vec())
    }
}

pub(crate) fn sorted_intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Parses the line-oriented edge-list format.
///
/// Lines starting with `#` and blank lines are skipped. The first data line
/// holds the vertex count; every later data line holds one edge `u v`.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut edges = BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse_int = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::parse(line_no, format!("expected a non-negative integer, got `{s}`")))
        };
        match n {
            None => {
                if fields.len() != 1 {
                    return Err(Error::parse(line_no, "expected the vertex count on its own line"));
                }
                n = Some(parse_int(fields[0])?);
            }
            Some(count) => {
                if fields.len() != 2 {
                    return Err(Error::parse(line_no, format!("expected `u v`, got `{line}`")));
                }
                let u = parse_int(fields[0])?;
                let v = parse_int(fields[1])?;
                if u >= count || v >= count {
                    return Err(Error::parse(
                        line_no,
                        format!("vertex out of range: ({u}, {v}) with n = {count}"),
                    ));
                }
                if u == v {
                    return Err(Error::parse(line_no, format!("self-loop at vertex {u}")));
                }
                edges.insert((u.min(v), u.max(v)));
            }
        }
    }
    let n = n.ok_or_else(|| Error::parse(0, "empty input: missing vertex count"))?;
    Ok(Graph::from_sorted_unique(n, edges))
}

/// Renders the edge-list format accepted by [`parse_edge_list`].
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("{}\n", g.vertex_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

const GRAPH6_HEADER: &str = ">>graph6<<";

/// Decodes one graph6 line. A leading `>>graph6<<` header and surrounding
/// whitespace are tolerated.
pub fn parse_graph6(text: &str) -> Result<Graph> {
    parse_graph6_at(text, 1)
}

pub(crate) fn parse_graph6_at(text: &str, line: usize) -> Result<Graph> {
    let body = text.trim();
    let body = body.strip_prefix(GRAPH6_HEADER).unwrap_or(body);
    if body.is_empty() {
        return Err(Error::parse(line, "empty graph6 input"));
    }
    let mut data = Vec::with_capacity(body.len());
    for (i, c) in body.bytes().enumerate() {
        if !(63..=126).contains(&c) {
            return Err(Error::parse(
                line,
                format!("invalid graph6 character {:?} at offset {i}", c as char),
            ));
        }
        data.push(c - 63);
    }

    let (n, header_len) = if data[0] != 63 {
        (data[0] as usize, 1)
    } else if data.len() >= 2 && data[1] != 63 {
        if data.len() < 4 {
            return Err(Error::parse(line, "truncated graph6 size field"));
        }
        let n = data[1..4].iter().fold(0usize, |acc, &b| (acc << 6) | b as usize);
        (n, 4)
    } else {
        if data.len() < 8 {
            return Err(Error::parse(line, "truncated graph6 size field"));
        }
        let n = data[2..8].iter().fold(0usize, |acc, &b| (acc << 6) | b as usize);
        (n, 8)
    };

    let bits = n * n.saturating_sub(1) / 2;
    let expected = header_len + bits.div_ceil(6);
    if data.len() < expected {
        return Err(Error::parse(
            line,
            format!("truncated graph6 bit vector: need {expected} bytes, got {}", data.len()),
        ));
    }
    if data.len() > expected {
        return Err(Error::parse(
            line,
            format!("trailing data after graph6 bit vector ({} extra bytes)", data.len() - expected),
        ));
    }

    let payload = &data[header_len..];
    let mut edges = BTreeSet::new();
    let mut pos = 0usize;
    for j in 1..n {
        for i in 0..j {
            if (payload[pos / 6] >> (5 - pos % 6)) & 1 == 1 {
                edges.insert((i, j));
            }
            pos += 1;
        }
    }
    Ok(Graph::from_sorted_unique(n, edges))
}

/// Encodes `g` as a graph6 string (no header, no newline).
pub fn encode_graph6(g: &Graph) -> String {
    let n = g.vertex_count();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8);
    } else if n <= 258_047 {
        out.push(63);
        out.extend((0..3).rev().map(|k| ((n >> (6 * k)) & 63) as u8));
    } else {
        out.extend([63, 63]);
        out.extend((0..6).rev().map(|k| ((n >> (6 * k)) & 63) as u8));
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(acc << (6 - filled));
    }
    out.into_iter().map(|b| (b + 63) as char).collect()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn edge_list_examples() {
        let k3 = parse_edge_list("3\n0 1\n1 2\n0 2").unwrap();
        assert_eq!((k3.vertex_count(), k3.edge_count()), (3, 3));
        assert_eq!(k3, Graph::complete(3));

        let k1 = parse_edge_list("1\n").unwrap();
        assert_eq!((k1.vertex_count(), k1.edge_count()), (1, 0));

        match parse_edge_list("2\n0 0") {
            Err(Error::Parse { line: 2, message }) => assert!(message.contains("self-loop")),
            other => panic!("expected self-loop error, got {other:?}"),
        }
    }

    #[test]
    fn edge_list_comments_duplicates_and_errors() {
        let g = parse_edge_list("# triangle\n\n3\n# edges\n0 1\n1 0\n 1   2 \n").unwrap();
        assert_eq!(g.edge_count(), 2);

        assert!(matches!(parse_edge_list(""), Err(Error::Parse { .. })));
        assert!(matches!(parse_edge_list("# only a comment\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_edge_list("3\n0 3"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_edge_list("3\n0 x"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_edge_list("3\n0 1 2"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_edge_list("3 4\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn graph6_examples() {
        // Decoded by hand and with networkx.from_graph6_bytes.
        assert_eq!(parse_graph6("B?").unwrap(), Graph::empty(3));
        assert_eq!(parse_graph6("B_").unwrap(), Graph::from_edges(3, [(0, 1)]).unwrap());
        assert_eq!(parse_graph6("Bw").unwrap(), Graph::complete(3));
        assert_eq!(parse_graph6(">>graph6<<Bw\n").unwrap(), Graph::complete(3));
        assert!(matches!(parse_graph6(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn graph6_rejects_bad_input() {
        assert!(parse_graph6("B w").is_err());
        assert!(parse_graph6("D").is_err(), "truncated bit vector");
        assert!(parse_graph6("Bww").is_err(), "trailing data");
        assert!(parse_graph6("~").is_err(), "truncated size field");
    }

    #[test]
    fn graph6_long_size_field() {
        let g = Graph::path(70);
        let s = encode_graph6(&g);
        assert!(s.starts_with('~'));
        assert_eq!(parse_graph6(&s).unwrap(), g);
    }

    #[test]
    fn induced_subgraph_examples() {
        let k3 = Graph::complete(3);
        assert_eq!(k3.induced_subgraph(&[0, 1].into()).unwrap(), Graph::complete(2));
        assert_eq!(k3.induced_subgraph(&VertexSet::default()).unwrap().vertex_count(), 0);
        let p3 = Graph::path(3);
        let sub = p3.induced_subgraph(&[0, 2].into()).unwrap();
        assert_eq!((sub.vertex_count(), sub.edge_count()), (2, 0));
        assert!(k3.induced_subgraph(&[0, 3].into()).is_err());
    }

    #[test]
    fn is_clique_examples() {
        // K4 plus a pendant edge.
        let k4_plus = Graph::from_edges(5, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)]).unwrap();
        assert!(k4_plus.is_clique(&[0, 1, 3].into()).unwrap());
        assert!(k4_plus.is_clique(&VertexSet::default()).unwrap());
        assert!(!k4_plus.is_clique(&[2, 3, 4].into()).unwrap());
        assert!(!Graph::path(3).is_clique(&[0, 1, 2].into()).unwrap());
        assert!(Graph::path(3).is_clique(&[5].into()).is_err());
    }

    #[test]
    fn deletion_examples() {
        let k3 = Graph::complete(3);
        let p = k3.delete_edges(&[(1, 0)]).unwrap();
        assert_eq!(p, Graph::from_edges(3, [(0, 2), (1, 2)]).unwrap());
        assert!(p.delete_edges(&[(0, 1)]).is_err());

        assert_eq!(Graph::complete(1).delete_vertex(0).unwrap().vertex_count(), 0);
        assert!(Graph::complete(1).delete_vertex(1).is_err());

        let k4 = Graph::complete(4);
        let star = [(0, 1), (0, 2), (0, 3)];
        let rest = k4.delete_edges(&star).unwrap().delete_vertex(0).unwrap();
        assert_eq!((rest.vertex_count(), rest.edge_count()), (3, 3));
    }

    #[test]
    fn components_and_connectivity() {
        let g = Graph::from_edges(5, [(0, 3), (1, 4)]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 3], vec![1, 4], vec![2]]);
        assert!(!g.is_connected());
        assert!(Graph::empty(0).is_connected());
        assert!(Graph::path(4).is_connected());
    }

    pub(crate) fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (0..=max_n).prop_flat_map(|n| {
            let pairs = n * n.saturating_sub(1) / 2;
            proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
                let mut edges = Vec::new();
                let mut k = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if bits[k] {
                            edges.push((u, v));
                        }
                        k += 1;
                    }
                }
                Graph::from_edges(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn graph6_round_trip(g in arb_graph(8)) {
            prop_assert_eq!(parse_graph6(&encode_graph6(&g)).unwrap(), g);
        }

        #[test]
        fn clique_iff_induced_complete(g in arb_graph(7), mask in 0u32..128) {
            let u = VertexSet::new((0..g.vertex_count()).filter(|&v| mask >> v & 1 == 1).collect());
            let sub = g.induced_subgraph(&u).unwrap();
            let k = u.len();
            prop_assert_eq!(g.is_clique(&u).unwrap(), sub.edge_count() == k * k.saturating_sub(1) / 2);
        }

        #[test]
        fn delete_edges_then_vertex_matches_brute_force(g in arb_graph(6), mask in any::<u32>(), pick in any::<usize>()) {
            prop_assume!(g.vertex_count() > 0);
            let all: Vec<_> = g.edges().collect();
            let removed: Vec<_> = all.iter().enumerate().filter(|(i, _)| mask >> (i % 32) & 1 == 1).map(|(_, &e)| e).collect();
            let v = pick % g.vertex_count();
            let out = g.delete_edges(&removed).unwrap().delete_vertex(v).unwrap();
            let expected: BTreeSet<(usize, usize)> = all
                .iter()
                .filter(|e| !removed.contains(e) && e.0 != v && e.1 != v)
                .map(|&(a, b)| (a - (a > v) as usize, b - (b > v) as usize))
                .collect();
            prop_assert_eq!(out.vertex_count(), g.vertex_count() - 1);
            prop_assert_eq!(out.edges().collect::<BTreeSet<_>>(), expected);
        }
    }
}
