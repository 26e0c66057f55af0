//! Seeded generators for complete graphs, k-trees, random clique pastings
//! and filtered catalogs.
//!
//! Graph `i` of a configuration is drawn from [`Rng::stream`]`(seed, i)`, so
//! any single graph can be regenerated without replaying the ones before it.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr, PickFirst};

use crate::catalog::{exhaustive_catalog, CatalogSource, GraphPredicate};
use crate::chordal::CliqueDecomposition;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::rng::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Complete,
    ChordalPasting,
    KTree,
    CatalogFilter,
}

/// Generator settings. Integers serialize as strings and parse from either
/// strings or JSON numbers.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeneratorConfig {
    pub family: Family,
    /// Vertex counts are drawn uniformly from `n_min..=n_max`.
    #[serde_as(as = "PickFirst<(DisplayFromStr, _)>")]
    pub n_min: usize,
    #[serde_as(as = "PickFirst<(DisplayFromStr, _)>")]
    pub n_max: usize,
    #[serde_as(as = "PickFirst<(DisplayFromStr, _)>")]
    pub k: usize,
    #[serde_as(as = "PickFirst<(DisplayFromStr, _)>")]
    pub max_summand_size: usize,
    /// Generate only graphs without a clique of this size.
    #[serde_as(as = "Option<PickFirst<(DisplayFromStr, _)>>")]
    pub forbid_clique: Option<usize>,
    #[serde_as(as = "PickFirst<(DisplayFromStr, _)>")]
    pub min_separator: usize,
    pub predicates: Vec<GraphPredicate>,
    pub catalog: Option<PathBuf>,
    #[serde_as(as = "PickFirst<(DisplayFromStr, _)>")]
    pub seed: u64,
    #[serde_as(as = "PickFirst<(DisplayFromStr, _)>")]
    pub count: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            family: Family::ChordalPasting,
            n_min: 1,
            n_max: 10,
            k: 3,
            max_summand_size: 4,
            forbid_clique: None,
            min_separator: 1,
            predicates: Vec::new(),
            catalog: None,
            seed: 0,
            count: 1,
        }
    }
}

impl GeneratorConfig {
    fn check_range(&self) -> Result<()> {
        if self.n_min > self.n_max {
            return Err(Error::Config(format!(
                "empty size range {}..={}",
                self.n_min, self.n_max
            )));
        }
        Ok(())
    }

    fn limits(&self) -> PastingLimits {
        PastingLimits {
            max_summand_size: self.max_summand_size,
            forbid_clique: self.forbid_clique,
            min_separator: self.min_separator,
        }
    }

    /// Graph number `index` for the random families.
    pub fn generate_one(&self, index: u64) -> Result<Graph> {
        self.check_range()?;
        let mut rng = Rng::stream(self.seed, index);
        let n = rng.between(self.n_min, self.n_max);
        match self.family {
            Family::Complete => Ok(Graph::complete(n)),
            Family::KTree => k_tree_with(self.k, n, &mut rng),
            Family::ChordalPasting => Ok(random_pasting(n, &self.limits(), &mut rng)?.0),
            Family::CatalogFilter => Err(Error::Config(
                "catalog graphs are not indexed by seed; use `generate`".into(),
            )),
        }
    }

    /// Every graph this configuration describes: `count` seeded graphs, or
    /// for catalogs every matching graph with `n` in `n_min..=n_max`.
    pub fn generate(&self) -> Result<Vec<Graph>> {
        self.check_range()?;
        match self.family {
            Family::CatalogFilter => {
                let source = match &self.catalog {
                    Some(path) => CatalogSource::File(path.clone()),
                    None => CatalogSource::Builtin,
                };
                let mut out = Vec::new();
                for n in self.n_min..=self.n_max {
                    for g in exhaustive_catalog(n, &source, &self.predicates)? {
                        out.push(g?);
                    }
                }
                Ok(out)
            }
            _ => (0..self.count as u64).map(|i| self.generate_one(i)).collect(),
        }
    }
}

/// `generate_chordal_pasting` for graph `index` of `config`, returning the
/// decomposition the graph was built from.
pub fn generate_chordal_pasting(
    config: &GeneratorConfig,
    index: u64,
) -> Result<(Graph, CliqueDecomposition)> {
    config.check_range()?;
    let mut rng = Rng::stream(config.seed, index);
    let n = rng.between(config.n_min, config.n_max);
    random_pasting(n, &config.limits(), &mut rng)
}

/// Random k-tree on `n` vertices: start from `K_{k+1}` and attach each new
/// vertex to a uniformly chosen existing k-clique.
pub fn generate_k_tree(k: usize, n: usize, seed: u64) -> Result<Graph> {
    k_tree_with(k, n, &mut Rng::new(seed))
}

fn k_tree_with(k: usize, n: usize, rng: &mut Rng) -> Result<Graph> {
    if k < 1 {
        return Err(Error::argument("k-trees need k >= 1"));
    }
    if n <= k {
        return Err(Error::argument(format!("a {k}-tree needs more than {k} vertices, got {n}")));
    }
    let mut edges: Vec<(usize, usize)> = (0..=k).flat_map(|u| (u + 1..=k).map(move |v| (u, v))).collect();
    // All k-subsets of the starting clique.
    let mut k_cliques: Vec<Vec<usize>> = (0..=k)
        .map(|skip| (0..=k).filter(|&v| v != skip).collect())
        .collect();
    for v in k + 1..n {
        let base = k_cliques[rng.below(k_cliques.len())].clone();
        edges.extend(base.iter().map(|&u| (u, v)));
        for drop in 0..k {
            let mut face: Vec<usize> = base.iter().copied().enumerate().filter(|&(i, _)| i != drop).map(|(_, u)| u).collect();
            face.push(v);
            k_cliques.push(face);
        }
    }
    Graph::from_edges(n, edges)
}

/// Incremental construction by pasting complete graphs along cliques of
/// summands already placed. New vertices are numbered consecutively.
#[derive(Debug, Clone)]
pub struct PastingBuilder {
    n: usize,
    edges: Vec<(usize, usize)>,
    summands: Vec<Vec<usize>>,
    separators: Vec<Vec<usize>>,
    tree_edges: Vec<(usize, usize)>,
}

impl PastingBuilder {
    /// Starts from a complete graph on `first_size >= 1` vertices.
    pub fn new(first_size: usize) -> Result<Self> {
        if first_size == 0 {
            return Err(Error::argument("summands need at least one vertex"));
        }
        let members: Vec<usize> = (0..first_size).collect();
        let mut b = PastingBuilder {
            n: first_size,
            edges: Vec::new(),
            summands: vec![members.clone()],
            separators: Vec::new(),
            tree_edges: Vec::new(),
        };
        b.add_clique_edges(&members);
        Ok(b)
    }

    fn add_clique_edges(&mut self, members: &[usize]) {
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                self.edges.push((u, v));
            }
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn summands(&self) -> &[Vec<usize>] {
        &self.summands
    }

    /// Pastes a new complete graph of `new_size` vertices along `separator`,
    /// which must be a nonempty subset of summand `host` smaller than
    /// `new_size`. Returns the index of the new summand.
    pub fn paste(&mut self, host: usize, separator: &[usize], new_size: usize) -> Result<usize> {
        let host_set = VertexSet::new(
            self.summands
                .get(host)
                .ok_or_else(|| Error::argument(format!("no summand {host}")))?
                .clone(),
        );
        let sep = VertexSet::new(separator.to_vec());
        if sep.is_empty() || sep.len() != separator.len() || !sep.is_subset(&host_set) {
            return Err(Error::argument("separator must be a nonempty subset of the host summand"));
        }
        if new_size <= sep.len() {
            return Err(Error::argument("new summand must be larger than its separator"));
        }
        let mut members = sep.members().to_vec();
        members.extend(self.n..self.n + new_size - sep.len());
        self.n += new_size - sep.len();
        self.add_clique_edges(&members);
        self.summands.push(members);
        self.separators.push(sep.into_vec());
        self.tree_edges.push((host, self.summands.len() - 1));
        Ok(self.summands.len() - 1)
    }

    /// The graph and the decomposition it was built from.
    pub fn finish(self) -> (Graph, CliqueDecomposition) {
        let g = Graph::from_edges(self.n, self.edges).expect("pasted edges are valid");
        let d = CliqueDecomposition::from_parts(
            self.summands.into_iter().map(VertexSet::new).collect(),
            self.separators.into_iter().map(VertexSet::new).collect(),
            self.tree_edges,
        )
        .expect("builder keeps one separator per tree edge");
        (g, d)
    }
}

/// Size limits for random pastings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PastingLimits {
    pub max_summand_size: usize,
    /// No clique of this size may appear.
    pub forbid_clique: Option<usize>,
    pub min_separator: usize,
}

/// Random connected chordal graph on exactly `n` vertices.
///
/// The first summand has between `min_separator + 1` and the size cap
/// vertices. Each later summand picks a uniform host summand, a uniform
/// separator size `i` in `min_separator..|host|`, a uniform subset of the
/// host of that size, and a uniform size in `i+1..=cap` limited by the
/// vertices still missing. Separators are therefore strictly smaller than
/// both summands and the as-built decomposition is a clique tree. Since a
/// pasting creates no clique outside its two sides, capping summand sizes
/// below `forbid_clique` keeps the result free of that clique. The sampler
/// is not uniform over chordal graphs.
pub fn random_pasting(
    n: usize,
    limits: &PastingLimits,
    rng: &mut Rng,
) -> Result<(Graph, CliqueDecomposition)> {
    if limits.max_summand_size == 0 {
        return Err(Error::Config("max_summand_size must be at least 1".into()));
    }
    let cap = match limits.forbid_clique {
        Some(t) if t < 2 => return Err(Error::Config(format!("cannot forbid cliques of size {t}"))),
        Some(t) => limits.max_summand_size.min(t - 1),
        None => limits.max_summand_size,
    };
    let min_sep = limits.min_separator.max(1);
    if n == 0 {
        return Err(Error::Config("pasted graphs need at least one vertex".into()));
    }
    if n == 1 && min_sep == 1 {
        return Ok(PastingBuilder::new(1)?.finish());
    }
    if cap < min_sep + 1 || n < min_sep + 1 {
        return Err(Error::Config(format!(
            "cannot build {n} vertices from summands of size <= {cap} with separators >= {min_sep}"
        )));
    }
    let mut b = PastingBuilder::new(rng.between(min_sep + 1, cap.min(n)))?;
    while b.vertex_count() < n {
        let host = rng.below(b.summands().len());
        let host_members = b.summands()[host].clone();
        let sep_size = rng.between(min_sep, (host_members.len() - 1).min(cap - 1));
        let missing = n - b.vertex_count();
        let new_size = rng.between(sep_size + 1, cap.min(sep_size + missing));
        let sep = rng.subset(&host_members, sep_size);
        b.paste(host, &sep, new_size)?;
    }
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chordal::{closed_form_clique_polynomial, is_chordal};
    use crate::clique::{clique_polynomial, count_cliques, forbidden_clique_check};
    use crate::graph::encode_graph6;

    #[test]
    fn k_tree_examples() {
        assert_eq!(generate_k_tree(3, 4, 9).unwrap(), Graph::complete(4));
        let tree = generate_k_tree(1, 12, 5).unwrap();
        assert!(tree.is_connected());
        assert_eq!(tree.edge_count(), 11);
        let g = generate_k_tree(3, 10, 42).unwrap();
        assert!(is_chordal(&g));
        assert_eq!(count_cliques(&g).omega(), 4);
        assert_eq!(g.edge_count(), 24);
        assert!(generate_k_tree(3, 3, 0).is_err());
        assert!(generate_k_tree(0, 3, 0).is_err());
    }

    #[test]
    fn k_tree_structure_over_many_seeds() {
        for seed in 0..60 {
            for k in 1..=4 {
                let n = k + 1 + (seed as usize % 9);
                let g = generate_k_tree(k, n, seed).unwrap();
                assert!(is_chordal(&g));
                assert_eq!(count_cliques(&g).omega(), k + 1);
                assert_eq!(g.edge_count(), k * n - k * (k + 1) / 2);
                let peo = crate::chordal::perfect_elimination_ordering(&g).unwrap();
                let d = crate::chordal::clique_tree(&g, &peo).unwrap();
                assert_eq!(d.summand_sizes(), vec![k + 1; n - k]);
                assert_eq!(d.separator_sizes(), vec![k; n - k - 1]);
            }
        }
    }

    #[test]
    fn pasting_builder_examples() {
        let (g, d) = PastingBuilder::new(5).unwrap().finish();
        assert_eq!(g, Graph::complete(5));
        assert_eq!(d.summand_sizes(), vec![5]);

        let mut b = PastingBuilder::new(2).unwrap();
        b.paste(0, &[1], 2).unwrap();
        let (g, d) = b.finish();
        assert_eq!(g, Graph::path(3));
        assert_eq!(d.separator_sizes(), vec![1]);

        let mut b = PastingBuilder::new(3).unwrap();
        assert!(b.paste(0, &[3], 2).is_err());
        assert!(b.paste(0, &[0, 1], 2).is_err());
        assert!(b.paste(1, &[0], 2).is_err());
        assert!(b.paste(0, &[], 2).is_err());
    }

    #[test]
    fn capped_pastings_are_k4_free_chordal() {
        let limits = PastingLimits {
            max_summand_size: 3,
            forbid_clique: Some(4),
            min_separator: 1,
        };
        for seed in 0..50 {
            let (g, d) = random_pasting(40, &limits, &mut Rng::new(seed)).unwrap();
            assert_eq!(g.vertex_count(), 40);
            assert!(is_chordal(&g) && g.is_connected());
            assert!(forbidden_clique_check(&g, 4).unwrap());
            assert_eq!(closed_form_clique_polynomial(&d), clique_polynomial(&g));
            d.validate(&g).unwrap();
        }
    }

    #[test]
    fn min_separator_is_respected() {
        let limits = PastingLimits {
            max_summand_size: 6,
            forbid_clique: Some(5),
            min_separator: 2,
        };
        for seed in 0..30 {
            let (g, d) = random_pasting(15, &limits, &mut Rng::new(seed)).unwrap();
            assert!(d.separator_sizes().iter().all(|&l| l >= 2));
            assert!(forbidden_clique_check(&g, 5).unwrap());
        }
    }

    #[test]
    fn unsatisfiable_configs_are_rejected() {
        let k2_free = PastingLimits {
            max_summand_size: 4,
            forbid_clique: Some(2),
            min_separator: 1,
        };
        assert!(matches!(random_pasting(5, &k2_free, &mut Rng::new(0)), Err(Error::Config(_))));
        let singles = PastingLimits {
            max_summand_size: 1,
            forbid_clique: None,
            min_separator: 1,
        };
        assert!(random_pasting(1, &singles, &mut Rng::new(0)).is_ok());
        assert!(matches!(random_pasting(2, &singles, &mut Rng::new(0)), Err(Error::Config(_))));
        let bad_range = GeneratorConfig {
            n_min: 5,
            n_max: 4,
            ..GeneratorConfig::default()
        };
        assert!(matches!(bad_range.generate(), Err(Error::Config(_))));
    }

    #[test]
    fn same_seed_same_bytes() {
        let config = GeneratorConfig {
            family: Family::ChordalPasting,
            n_min: 5,
            n_max: 30,
            max_summand_size: 5,
            seed: 1234,
            count: 40,
            ..GeneratorConfig::default()
        };
        let render = |c: &GeneratorConfig| -> Vec<String> {
            c.generate().unwrap().iter().map(encode_graph6).collect()
        };
        assert_eq!(render(&config), render(&config));
        let other = GeneratorConfig { seed: 1235, ..config.clone() };
        assert_ne!(render(&config), render(&other));
        assert_eq!(encode_graph6(&config.generate_one(7).unwrap()), render(&config)[7]);
    }

    #[test]
    fn config_json_accepts_numbers_and_strings() {
        let a: GeneratorConfig = serde_json::from_str(r#"{"family": "k_tree", "k": 3, "n_min": "4", "n_max": 12, "seed": "7"}"#).unwrap();
        assert_eq!((a.family, a.k, a.n_min, a.n_max, a.seed), (Family::KTree, 3, 4, 12, 7));
        let json = serde_json::to_value(&a).unwrap();
        assert_eq!(json["seed"], "7");
        assert!(serde_json::from_str::<GeneratorConfig>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn catalog_family_filters() {
        let config = GeneratorConfig {
            family: Family::CatalogFilter,
            n_min: 1,
            n_max: 4,
            predicates: vec![GraphPredicate::Connected, GraphPredicate::Chordal],
            ..GeneratorConfig::default()
        };
        assert_eq!(config.generate().unwrap().len(), 1 + 1 + 2 + 5);
        assert!(config.generate_one(0).is_err());
    }
}
