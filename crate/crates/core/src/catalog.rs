//! Small-graph catalogs: graph6 catalog files and a built-in enumerator of
//! all graphs up to isomorphism for small orders.

use std::collections::BTreeSet;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::chordal::is_chordal;
use crate::clique::count_cliques;
use crate::error::{Error, Result};
use crate::graph::{parse_graph6_at, Graph};
use crate::par;

/// Largest order the built-in enumerator handles.
pub const MAX_FALLBACK_ORDER: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphPredicate {
    Connected,
    Chordal,
    TriangleFree,
    K4Free,
    K5Free,
}

impl GraphPredicate {
    pub fn holds(self, g: &Graph) -> bool {
        match self {
            GraphPredicate::Connected => g.is_connected(),
            GraphPredicate::Chordal => is_chordal(g),
            GraphPredicate::TriangleFree => count_cliques(g).omega() < 3,
            GraphPredicate::K4Free => count_cliques(g).omega() < 4,
            GraphPredicate::K5Free => count_cliques(g).omega() < 5,
        }
    }

    pub fn all_hold(predicates: &[GraphPredicate], g: &Graph) -> bool {
        predicates.iter().all(|p| p.holds(g))
    }

    fn name(self) -> &'static str {
        match self {
            GraphPredicate::Connected => "connected",
            GraphPredicate::Chordal => "chordal",
            GraphPredicate::TriangleFree => "triangle_free",
            GraphPredicate::K4Free => "k4_free",
            GraphPredicate::K5Free => "k5_free",
        }
    }
}

impl fmt::Display for GraphPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GraphPredicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let all = [
            GraphPredicate::Connected,
            GraphPredicate::Chordal,
            GraphPredicate::TriangleFree,
            GraphPredicate::K4Free,
            GraphPredicate::K5Free,
        ];
        all.into_iter()
            .find(|p| p.name() == s.replace('-', "_"))
            .ok_or_else(|| Error::Config(format!("unknown graph predicate `{s}`")))
    }
}

/// Iterator over the graphs of a graph6 stream, one per non-blank line.
pub struct Graph6Reader<R> {
    lines: std::io::Lines<R>,
    line_no: usize,
}

impl<R: BufRead> Graph6Reader<R> {
    pub fn new(reader: R) -> Self {
        Graph6Reader {
            lines: reader.lines(),
            line_no: 0,
        }
    }
}

impl<R: BufRead> Iterator for Graph6Reader<R> {
    type Item = Result<(String, Graph)>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let line = match self.lines.next()? {
                Ok(line) => line,
                Err(e) => return Some(Err(e.into())),
            };
            self.line_no += 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed == ">>graph6<<" {
                continue;
            }
            let text = trimmed.strip_prefix(">>graph6<<").unwrap_or(trimmed).to_string();
            return Some(parse_graph6_at(&text, self.line_no).map(|g| (text, g)));
        }
    }
}

/// Where exhaustive catalogs come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogSource {
    /// A graph6 file holding every graph of one order.
    File(PathBuf),
    /// The built-in enumerator (orders up to [`MAX_FALLBACK_ORDER`]).
    Builtin,
}

/// Every catalog graph on `n` vertices that satisfies all `predicates`, in
/// catalog order. A catalog file containing a graph of another order is
/// rejected as corrupt.
pub fn exhaustive_catalog(
    n: usize,
    source: &CatalogSource,
    predicates: &[GraphPredicate],
) -> Result<Box<dyn Iterator<Item = Result<Graph>>>> {
    let predicates = predicates.to_vec();
    match source {
        CatalogSource::Builtin => {
            let graphs = all_graphs(n)?;
            Ok(Box::new(
                graphs
                    .into_iter()
                    .filter(move |g| GraphPredicate::all_hold(&predicates, g))
                    .map(Ok),
            ))
        }
        CatalogSource::File(path) => {
            let reader = open_catalog(path)?;
            let iter = Graph6Reader::new(reader).filter_map(move |item| match item {
                Err(e) => Some(Err(Error::Input(format!("corrupt catalog: {e}")))),
                Ok((_, g)) if g.vertex_count() != n => Some(Err(Error::Input(format!(
                    "corrupt catalog: expected graphs on {n} vertices, found one on {}",
                    g.vertex_count()
                )))),
                Ok((_, g)) => GraphPredicate::all_hold(&predicates, &g).then_some(Ok(g)),
            });
            Ok(Box::new(iter))
        }
    }
}

fn open_catalog(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Input(format!("cannot open catalog {}: {e}", path.display())))
}

/// Every graph on `n` vertices up to isomorphism, each in canonical
/// labelling, sorted by canonical code.
///
/// Order `k` graphs are obtained from order `k - 1` graphs by adding a vertex
/// with every possible neighborhood and deduplicating canonical forms; every
/// graph arises this way because deleting any vertex gives a smaller one.
pub fn all_graphs(n: usize) -> Result<Vec<Graph>> {
    if n > MAX_FALLBACK_ORDER {
        return Err(Error::argument(format!(
            "built-in enumeration supports at most {MAX_FALLBACK_ORDER} vertices, got {n}"
        )));
    }
    let mut level = vec![Graph::empty(0)];
    for k in 1..=n {
        let extended = par::map(&level, |g| {
            (0u64..1 << (k - 1))
                .map(|mask| {
                    let edges = g
                        .edges()
                        .chain((0..k - 1).filter(|&v| mask >> v & 1 == 1).map(|v| (v, k - 1)));
                    canonical_code(&Graph::from_edges(k, edges).expect("valid extension"))
                })
                .collect::<Vec<_>>()
        });
        let codes: BTreeSet<u64> = extended.into_iter().flatten().collect();
        level = codes.into_iter().map(|c| graph_from_code(k, c)).collect();
    }
    Ok(level)
}

/// Bit `i < j` of the upper triangle in graph6 column order, first pair in
/// the most significant position.
fn graph_from_code(n: usize, code: u64) -> Graph {
    let total = n * n.saturating_sub(1) / 2;
    let mut edges = Vec::new();
    let mut pos = 0;
    for j in 1..n {
        for i in 0..j {
            if code >> (total - 1 - pos) & 1 == 1 {
                edges.push((i, j));
            }
            pos += 1;
        }
    }
    Graph::from_edges(n, edges).expect("decoded code is a valid graph")
}

/// Isomorphism-invariant code: the largest adjacency code over all vertex
/// orders that sort vertices by (degree, neighbor degree multiset).
pub fn canonical_code(g: &Graph) -> u64 {
    let n = g.vertex_count();
    assert!(n <= 11, "canonical codes fit in 64 bits only up to 11 vertices");
    let labels: Vec<(usize, Vec<usize>)> = (0..n)
        .map(|v| {
            let mut nd: Vec<usize> = g.neighbors(v).iter().map(|&w| g.degree(w)).collect();
            nd.sort_unstable();
            (g.degree(v), nd)
        })
        .collect();
    let mut classes: Vec<&(usize, Vec<usize>)> = labels.iter().collect();
    classes.sort();
    classes.dedup();
    let class_of: Vec<usize> = labels
        .iter()
        .map(|l| classes.binary_search(&l).expect("label present"))
        .collect();
    let mut slot_class = class_of.clone();
    slot_class.sort_unstable();

    let total = n * n.saturating_sub(1) / 2;
    let mut search = CanonSearch {
        g,
        class_of: &class_of,
        slot_class: &slot_class,
        total,
        placed: Vec::with_capacity(n),
        used: vec![false; n],
        best: None,
    };
    search.run(0, 0);
    search.best.unwrap_or(0)
}

struct CanonSearch<'a> {
    g: &'a Graph,
    class_of: &'a [usize],
    slot_class: &'a [usize],
    total: usize,
    placed: Vec<usize>,
    used: Vec<bool>,
    best: Option<u64>,
}

impl CanonSearch<'_> {
    fn run(&mut self, prefix: u64, bits: usize) {
        let slot = self.placed.len();
        if slot == self.g.vertex_count() {
            if self.best.is_none_or(|b| prefix > b) {
                self.best = Some(prefix);
            }
            return;
        }
        for v in 0..self.g.vertex_count() {
            if self.used[v] || self.class_of[v] != self.slot_class[slot] {
                continue;
            }
            let mut code = prefix;
            for &u in &self.placed {
                code = (code << 1) | self.g.has_edge(u, v) as u64;
            }
            let bits_now = bits + slot;
            if let Some(best) = self.best {
                let best_prefix = best >> (self.total - bits_now);
                if code < best_prefix {
                    continue;
                }
            }
            self.used[v] = true;
            self.placed.push(v);
            self.run(code, bits_now);
            self.placed.pop();
            self.used[v] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::encode_graph6;
    use std::io::Write;

    #[test]
    fn counts_match_known_sequences() {
        // Graphs, connected graphs, connected chordal graphs by order.
        let all = [1, 1, 2, 4, 11, 34, 156, 1044];
        let connected = [1, 1, 1, 2, 6, 21, 112, 853];
        let connected_chordal = [1, 1, 1, 2, 5, 15, 58, 272];
        for n in 0..=7 {
            let graphs = all_graphs(n).unwrap();
            assert_eq!(graphs.len(), all[n], "n = {n}");
            let conn: Vec<_> = graphs.iter().filter(|g| g.is_connected()).collect();
            assert_eq!(conn.len(), connected[n], "connected, n = {n}");
            assert_eq!(conn.iter().filter(|g| is_chordal(g)).count(), connected_chordal[n]);
        }
    }

    #[test]
    fn canonical_code_is_label_invariant() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5)]).unwrap();
        let perm = [4, 2, 5, 0, 1, 3];
        let h = Graph::from_edges(6, g.edges().map(|(u, v)| (perm[u], perm[v]))).unwrap();
        assert_eq!(canonical_code(&g), canonical_code(&h));
        assert_ne!(canonical_code(&g), canonical_code(&Graph::path(6)));
    }

    #[test]
    fn builtin_catalog_examples() {
        let connected = [GraphPredicate::Connected];
        let n3: Vec<Graph> = exhaustive_catalog(3, &CatalogSource::Builtin, &connected)
            .unwrap()
            .collect::<Result<_>>()
            .unwrap();
        assert_eq!(n3.len(), 2);
        let chordal = [GraphPredicate::Connected, GraphPredicate::Chordal];
        assert_eq!(exhaustive_catalog(4, &CatalogSource::Builtin, &chordal).unwrap().count(), 5);
        assert_eq!(exhaustive_catalog(2, &CatalogSource::Builtin, &connected).unwrap().count(), 1);
        assert!(exhaustive_catalog(9, &CatalogSource::Builtin, &[]).is_err());
    }

    #[test]
    fn file_catalog_round_trip_and_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("graph4.g6");
        let mut f = File::create(&path).unwrap();
        writeln!(f, ">>graph6<<").unwrap();
        for g in all_graphs(4).unwrap() {
            writeln!(f, "{}", encode_graph6(&g)).unwrap();
        }
        drop(f);
        let chordal = [GraphPredicate::Connected, GraphPredicate::Chordal];
        let from_file: Vec<Graph> = exhaustive_catalog(4, &CatalogSource::File(path.clone()), &chordal)
            .unwrap()
            .collect::<Result<_>>()
            .unwrap();
        assert_eq!(from_file.len(), 5);

        let wrong_order: Result<Vec<Graph>> =
            exhaustive_catalog(5, &CatalogSource::File(path), &[]).unwrap().collect();
        assert!(matches!(wrong_order, Err(Error::Input(_))));

        let missing = exhaustive_catalog(4, &CatalogSource::File(dir.path().join("nope.g6")), &[]);
        assert!(matches!(missing, Err(Error::Input(_))));

        let bad = dir.path().join("bad.g6");
        std::fs::write(&bad, "C~\nC!\n").unwrap();
        let corrupt: Result<Vec<Graph>> =
            exhaustive_catalog(4, &CatalogSource::File(bad), &[]).unwrap().collect();
        assert!(matches!(corrupt, Err(Error::Input(_))));
    }

    #[test]
    fn predicates_parse() {
        assert_eq!("k4_free".parse::<GraphPredicate>().unwrap(), GraphPredicate::K4Free);
        assert_eq!("triangle-free".parse::<GraphPredicate>().unwrap(), GraphPredicate::TriangleFree);
        assert!("planar".parse::<GraphPredicate>().is_err());
    }
}
