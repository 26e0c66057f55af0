//! Per-graph verdicts: clique polynomial by every applicable method, root
//! analysis, the real-rootedness theorem for K4-free chordal graphs, and the
//! Turán-type edge bound.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use crate::chordal::{
    clique_tree, closed_form_clique_polynomial, fast_chordal_polynomial, maximum_cardinality_search,
    CliqueDecomposition, SearchOutcome,
};
use crate::clique::count_cliques;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::poly::{analyze_roots, IntPolynomial, RootAnalysis};
use crate::reduce::require_k4_free_chordal;

/// Discriminant of `1 + (n-1) x + (m-n+1) x^2` and the bound `3m <= n^2`.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TuranRecord {
    pub bound_holds: bool,
    #[serde_as(as = "DisplayFromStr")]
    pub discriminant: BigInt,
}

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphReport {
    pub graph_id: String,
    #[serde_as(as = "DisplayFromStr")]
    pub n: usize,
    #[serde_as(as = "DisplayFromStr")]
    pub m: usize,
    #[serde_as(as = "DisplayFromStr")]
    pub t: u64,
    #[serde_as(as = "DisplayFromStr")]
    pub omega: usize,
    pub connected: bool,
    pub chordal: bool,
    pub k4_free: bool,
    pub k5_free: bool,
    pub clique_polynomial: IntPolynomial,
    pub root_analysis: RootAnalysis,
    pub decomposition: Option<CliqueDecomposition>,
    pub turan: Option<TuranRecord>,
    /// Present only for connected K4-free chordal graphs.
    pub theorem1_consistent: Option<bool>,
}

impl GraphReport {
    pub fn is_real_rooted(&self) -> bool {
        self.root_analysis.is_real_rooted
    }

    pub fn multiplicity_at_minus_one(&self) -> usize {
        self.root_analysis.multiplicity_at_minus_one
    }

    /// `id, n, m, omega, chordal, k4_free, real_rooted, mult_minus_one, turan_holds`;
    /// the last field is empty when no Turán record exists.
    pub fn csv_row(&self) -> [String; 9] {
        [
            self.graph_id.clone(),
            self.n.to_string(),
            self.m.to_string(),
            self.omega.to_string(),
            self.chordal.to_string(),
            self.k4_free.to_string(),
            self.root_analysis.is_real_rooted.to_string(),
            self.root_analysis.multiplicity_at_minus_one.to_string(),
            self.turan.as_ref().map(|t| t.bound_holds.to_string()).unwrap_or_default(),
        ]
    }

    pub const CSV_HEADER: [&'static str; 9] = [
        "id",
        "n",
        "m",
        "omega",
        "chordal",
        "k4_free",
        "real_rooted",
        "mult_minus_one",
        "turan_holds",
    ];
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AnalyzeOptions {
    /// Report the Turán bound for every connected K4-free graph, chordal or
    /// not, without asserting the discriminant claim.
    pub chordal_relax: bool,
}

fn turan_numbers(n: usize, m: usize) -> (BigInt, bool) {
    let (n, m) = (BigInt::from(n), BigInt::from(m));
    let one = BigInt::from(1);
    let discriminant = (&n - &one) * (&n - &one) - BigInt::from(4) * (&m - &n + &one);
    let bound_holds = BigInt::from(3) * &m <= &n * &n;
    (discriminant, bound_holds)
}

/// Turán check for a connected K4-free chordal graph.
///
/// Besides recording the discriminant and `3m <= n^2`, asserts the chain
/// `m <= ((n+1)/2)^2 - 1 <= n^2/3`, cleared of denominators as
/// `4(m+1) <= (n+1)^2` and `3(n+1)^2 - 12 <= 4n^2`; a failure is a
/// consistency error.
pub fn turan_check(g: &Graph) -> Result<TuranRecord> {
    require_k4_free_chordal(g)?;
    let (n, m) = (g.vertex_count(), g.edge_count());
    let (discriminant, bound_holds) = turan_numbers(n, m);
    let (nb, mb) = (BigInt::from(n), BigInt::from(m));
    let np1 = &nb + 1;
    let first = BigInt::from(4) * (&mb + 1) <= &np1 * &np1;
    let second = BigInt::from(3) * &np1 * &np1 - 12 <= BigInt::from(4) * &nb * &nb;
    if discriminant < BigInt::from(0) || !first || !second || !bound_holds {
        return Err(Error::Consistency(format!(
            "Turán chain fails for n = {n}, m = {m} (discriminant {discriminant})"
        )));
    }
    Ok(TuranRecord {
        bound_holds,
        discriminant,
    })
}

/// Turán numbers with no structural precondition and no assertion.
pub fn turan_check_relaxed(g: &Graph) -> TuranRecord {
    let (discriminant, bound_holds) = turan_numbers(g.vertex_count(), g.edge_count());
    TuranRecord {
        bound_holds,
        discriminant,
    }
}

pub fn analyze_graph(graph_id: &str, g: &Graph) -> Result<GraphReport> {
    analyze_graph_with(graph_id, g, AnalyzeOptions::default())
}

/// Full report for `g` (which needs at least one vertex).
///
/// The clique polynomial is always enumerated; for chordal graphs it is
/// recomputed from the elimination ordering and, when connected, from the
/// clique tree. Any disagreement is a consistency error.
pub fn analyze_graph_with(graph_id: &str, g: &Graph, options: AnalyzeOptions) -> Result<GraphReport> {
    if g.vertex_count() == 0 {
        return Err(Error::argument("cannot analyze a graph with no vertices"));
    }
    let cliques = count_cliques(g);
    let poly = cliques.polynomial();
    let connected = g.is_connected();
    let omega = cliques.omega();
    let (k4_free, k5_free) = (omega < 4, omega < 5);

    let mut decomposition = None;
    let chordal = match maximum_cardinality_search(g) {
        SearchOutcome::Perfect(peo) => {
            let fast = fast_chordal_polynomial(g, &peo)?;
            if fast != poly {
                return Err(Error::Consistency(format!(
                    "{graph_id}: elimination-order polynomial {fast} differs from enumeration {poly}"
                )));
            }
            if connected {
                let d = clique_tree(g, &peo)?;
                let closed = closed_form_clique_polynomial(&d);
                if closed != poly {
                    return Err(Error::Consistency(format!(
                        "{graph_id}: clique-tree polynomial {closed} differs from enumeration {poly}"
                    )));
                }
                decomposition = Some(d);
            }
            true
        }
        SearchOutcome::Rejected(_) => false,
    };

    let root_analysis = analyze_roots(&poly)?;
    let applies = connected && chordal && k4_free;
    let turan = if applies {
        Some(turan_check(g)?)
    } else if options.chordal_relax && connected && k4_free {
        Some(turan_check_relaxed(g))
    } else {
        None
    };
    let theorem1_consistent =
        applies.then_some(root_analysis.is_real_rooted && root_analysis.multiplicity_at_minus_one >= 1);

    Ok(GraphReport {
        graph_id: graph_id.to_string(),
        n: g.vertex_count(),
        m: g.edge_count(),
        t: cliques.count(3),
        omega,
        connected,
        chordal,
        k4_free,
        k5_free,
        clique_polynomial: poly,
        root_analysis,
        decomposition,
        turan,
        theorem1_consistent,
    })
}
