//! Acceptance criteria. Each criterion prints one PASS or FAIL line with its
//! runtime and its limit; the process fails if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;

use cliquepoly::analyze::{analyze_graph, turan_check};
use cliquepoly::catalog::{all_graphs, exhaustive_catalog, CatalogSource, GraphPredicate};
use cliquepoly::chordal::{
    clique_tree, closed_form_clique_polynomial, fast_chordal_polynomial, paste, pasting_polynomial,
    perfect_elimination_ordering, CliqueDecomposition,
};
use cliquepoly::clique::{clique_polynomial, count_cliques};
use cliquepoly::gen::{random_pasting, PastingLimits};
use cliquepoly::par;
use cliquepoly::poly::{analyze_roots, sturm_root_count, Bound};
use cliquepoly::reduce::{quadratic_factor, triangle_free_reduction};
use cliquepoly::rng::Rng;
use cliquepoly::scan::{run_scan, Conjecture, ScanConfig, ScanOptions, ScanOutcome, ScanReport};
use cliquepoly::{Graph, IntPolynomial};

const SEED: u64 = 20_240_229;

/// Clique counts by testing every vertex subset.
fn subset_clique_counts(g: &Graph) -> Vec<u64> {
    let n = g.vertex_count();
    let mut counts = vec![0u64; n + 1];
    for mask in 0u64..1 << n {
        let members: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let clique = members
            .iter()
            .enumerate()
            .all(|(i, &u)| members[i + 1..].iter().all(|&w| g.has_edge(u, w)));
        if clique {
            counts[members.len()] += 1;
        }
    }
    while counts.len() > 1 && counts.last() == Some(&0) {
        counts.pop();
    }
    counts
}

fn has_triangle(g: &Graph) -> bool {
    let n = g.vertex_count();
    (0..n).any(|a| {
        (a + 1..n).any(|b| g.has_edge(a, b) && (b + 1..n).any(|c| g.has_edge(a, c) && g.has_edge(b, c)))
    })
}

fn k4_free_chordal_corpus(max_n: usize) -> Vec<Graph> {
    let preds = [GraphPredicate::Connected, GraphPredicate::Chordal, GraphPredicate::K4Free];
    (1..=max_n)
        .flat_map(|n| exhaustive_catalog(n, &CatalogSource::Builtin, &preds).unwrap())
        .map(Result::unwrap)
        .collect()
}

/// The 500 seeded pastings of criteria 4 and 5: n up to 40, summand sizes up
/// to 2..=6.
fn pasting_corpus() -> Vec<(Graph, CliqueDecomposition)> {
    par::map_range(500, |i| {
        let mut rng = Rng::stream(SEED, i as u64);
        let n = rng.between(1, 40);
        let limits = PastingLimits {
            max_summand_size: rng.between(2, 6),
            forbid_clique: None,
            min_separator: 1,
        };
        random_pasting(n, &limits, &mut rng).unwrap()
    })
}

fn criterion_1() -> String {
    let g = Graph::from_edges(5, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)]).unwrap();
    let c = clique_polynomial(&g);
    assert_eq!(c, IntPolynomial::from_i64s(&[1, 5, 7, 4, 1]));
    let (quotient, mult) = c.divide_out_root(&BigInt::from(-1)).unwrap();
    assert_eq!((quotient.clone(), mult), (IntPolynomial::from_i64s(&[1, 4, 3, 1]), 1));
    assert_eq!(sturm_root_count(&c, &Bound::NegInfinity, &Bound::PosInfinity).unwrap(), 2);
    assert_eq!(sturm_root_count(&quotient, &Bound::NegInfinity, &Bound::PosInfinity).unwrap(), 1);
    let roots = analyze_roots(&c).unwrap();
    assert!(!roots.is_real_rooted);
    assert_eq!(roots.real_root_count_with_multiplicity, 2);
    let report = analyze_graph("k4+", &g).unwrap();
    assert!(!report.is_real_rooted() && !report.k4_free);
    "quartic has 2 real roots, -1 simple".into()
}

fn criterion_2() -> String {
    let corpus = k4_free_chordal_corpus(7);
    assert!(corpus.len() >= 100, "corpus of {} graphs", corpus.len());
    let failures: Vec<String> = par::map(&corpus, |g| {
        let r = analyze_graph("g", g).unwrap();
        let ok = r.theorem1_consistent == Some(true)
            && r.is_real_rooted()
            && r.multiplicity_at_minus_one() >= 1
            && subset_clique_counts(g).len() <= 4;
        (!ok).then(|| cliquepoly::graph::encode_graph6(g))
    })
    .into_iter()
    .flatten()
    .collect();
    assert!(failures.is_empty(), "counterexamples: {failures:?}");
    format!("{} graphs, 0 counterexamples", corpus.len())
}

fn criterion_3() -> String {
    let checked = par::map_range(500, |i| {
        let mut rng = Rng::stream(SEED ^ 3, i as u64);
        let limits = PastingLimits {
            max_summand_size: rng.between(2, 6),
            forbid_clique: None,
            min_separator: 1,
        };
        let (g1, d1) = random_pasting(rng.between(1, 20), &limits, &mut rng).unwrap();
        let (g2, d2) = random_pasting(rng.between(1, 20), &limits, &mut rng).unwrap();
        let c1 = &d1.summands()[rng.below(d1.summands().len())];
        let c2 = &d2.summands()[rng.below(d2.summands().len())];
        let size = rng.between(1, c1.len().min(c2.len()));
        let mut q1 = rng.subset(c1, size);
        rng.shuffle(&mut q1);
        let q2 = rng.subset(c2, size);
        let glued = paste(&g1, &q1, &g2, &q2).unwrap();
        assert_eq!(glued.vertex_count(), g1.vertex_count() + g2.vertex_count() - size);
        let law = pasting_polynomial(&clique_polynomial(&g1), &clique_polynomial(&g2), size).unwrap();
        assert_eq!(clique_polynomial(&glued), law, "pasting {i}");
    });
    format!("{} pastings", checked.len())
}

fn criterion_4(corpus: &[(Graph, CliqueDecomposition)]) -> String {
    let max_n = par::map(corpus, |(g, built)| {
        let enumerated = clique_polynomial(g);
        let peo = perfect_elimination_ordering(g).unwrap();
        let tree = clique_tree(g, &peo).unwrap();
        tree.validate(g).unwrap();
        assert_eq!(closed_form_clique_polynomial(&tree), enumerated);
        assert_eq!(closed_form_clique_polynomial(built), enumerated);
        assert_eq!(fast_chordal_polynomial(g, &peo).unwrap(), enumerated);
        g.vertex_count()
    })
    .into_iter()
    .max()
    .unwrap();
    format!("{} chordal graphs, n up to {max_n}", corpus.len())
}

fn criterion_5(corpus: &[(Graph, CliqueDecomposition)]) -> String {
    let exceptions = par::map(corpus, |(g, _)| {
        let d = clique_tree(g, &perfect_elimination_ordering(g).unwrap()).unwrap();
        let expected = if d.separators().is_empty() {
            d.summands()[0].len()
        } else {
            d.separators().iter().map(Vec::len).min().unwrap()
        };
        let (_, mult) = clique_polynomial(g).divide_out_root(&BigInt::from(-1)).unwrap();
        let reported = analyze_roots(&clique_polynomial(g)).unwrap().multiplicity_at_minus_one;
        usize::from(mult != expected || reported != expected)
    })
    .into_iter()
    .sum::<usize>();
    assert_eq!(exceptions, 0);
    format!("{} graphs, 0 exceptions", corpus.len())
}

fn criterion_6() -> String {
    let corpus = k4_free_chordal_corpus(7);
    let pairs = par::map(&corpus, |g| {
        let (n, m) = (g.vertex_count(), g.edge_count());
        let cofactor = clique_polynomial(g).div_exact(&IntPolynomial::binomial_power(1)).unwrap();
        let q = quadratic_factor(n, m).unwrap();
        assert_eq!(&IntPolynomial::binomial_power(1) * &q, clique_polynomial(g));
        for root in 0..n {
            let t = triangle_free_reduction(g, root).unwrap();
            assert!(!has_triangle(&t.g_tilde), "triangle left from root {root}");
            assert_eq!(t.g_tilde.vertex_count(), n - 1);
            assert_eq!(t.g_tilde.edge_count() + n, m + 1);
            assert_eq!(clique_polynomial(&t.g_tilde), q);
            assert_eq!(t.q, cofactor);
        }
        n
    })
    .into_iter()
    .sum::<usize>();
    format!("{} graphs, {pairs} roots", corpus.len())
}

fn criterion_7() -> String {
    let corpus = k4_free_chordal_corpus(7);
    for g in &corpus {
        let (n, m) = (g.vertex_count() as i64, g.edge_count() as i64);
        let discriminant = (n - 1) * (n - 1) - 4 * (m - n + 1);
        assert!(discriminant >= 0 && 3 * m <= n * n, "n = {n}, m = {m}");
        let record = turan_check(g).unwrap();
        assert_eq!(record.discriminant, BigInt::from(discriminant));
        assert!(record.bound_holds);
    }
    format!("{} graphs, 0 exceptions", corpus.len())
}

/// A random spanning tree plus each remaining pair with probability
/// `density / 8`.
fn random_connected_graph(rng: &mut Rng) -> Graph {
    let n = rng.between(1, 10);
    let density = rng.between(0, 8);
    let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.below(v), v)).collect();
    for v in 0..n {
        for w in v + 1..n {
            if rng.below(8) < density {
                edges.push((v, w));
            }
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut perm);
    Graph::from_edges(n, edges.into_iter().map(|(u, v)| (perm[u], perm[v]))).unwrap()
}

fn criterion_8() -> String {
    let graphs: Vec<Graph> = (0..1000).map(|i| random_connected_graph(&mut Rng::stream(SEED ^ 8, i))).collect();
    let flags = par::map(&graphs, |g| {
        assert!(g.is_connected());
        let p = clique_polynomial(g);
        let roots = analyze_roots(&p).unwrap();
        // Independent witness: p(-1) = 0, a sign change on [-1, 0], or a
        // root counted strictly inside by the chain.
        let at_minus_one = p.eval_int(&BigInt::from(-1));
        let inside = sturm_root_count(&p, &Bound::int(-1), &Bound::int(0)).unwrap();
        let witnessed = at_minus_one == BigInt::from(0) || at_minus_one < BigInt::from(0) || inside > 0;
        roots.has_root_in_unit_negative_interval && witnessed
    });
    let ok = flags.iter().filter(|&&f| f).count();
    assert_eq!(ok, 1000);
    "1000 graphs, all with a root in [-1, 0)".into()
}

fn complete_scan(config: &ScanConfig, options: &ScanOptions) -> ScanReport {
    match run_scan(config, options).unwrap() {
        ScanOutcome::Complete(r) => r,
        ScanOutcome::Halted { .. } => panic!("scan halted"),
    }
}

fn criterion_9() -> String {
    let dir = tempfile::tempdir().unwrap();
    let mut summary = Vec::new();
    for conjecture in [Conjecture::C1ThreeTrees, Conjecture::C2K5FreeMult2] {
        let config = ScanConfig {
            count: 500,
            n_max: 12,
            seed: SEED,
            checkpoint_every: 64,
            ..ScanConfig::new(conjecture)
        };
        let straight = complete_scan(&config, &ScanOptions::default()).to_json().unwrap();
        let parsed = ScanReport::from_json(&straight).unwrap();
        assert_eq!(parsed.total_graphs, 500);

        let checkpoint = dir.path().join(format!("{conjecture}.ckpt"));
        let halting = ScanOptions {
            checkpoint: Some(checkpoint.clone()),
            halt_after_chunks: Some(3),
            timing: false,
        };
        assert!(matches!(run_scan(&config, &halting).unwrap(), ScanOutcome::Halted { .. }));
        let resumed = complete_scan(
            &config,
            &ScanOptions {
                checkpoint: Some(checkpoint),
                ..ScanOptions::default()
            },
        );
        assert_eq!(resumed.to_json().unwrap(), straight, "{conjecture} resume differs");

        match conjecture {
            Conjecture::C1ThreeTrees => {
                assert_eq!(parsed.chordal, 500);
                assert_eq!(parsed.omega.keys().copied().collect::<Vec<_>>(), vec![4]);
            }
            _ => {
                assert!(parsed.omega.keys().all(|&w| w <= 4));
                assert_eq!(parsed.mult_at_minus_one.keys().copied().collect::<Vec<_>>(), vec![2]);
            }
        }
        summary.push(format!("{conjecture}: {} counterexamples", parsed.counterexamples.len()));
    }
    summary.join(", ")
}

fn criterion_10() -> String {
    let mut checked = 0;
    let mut graphs: Vec<Graph> = (0..=6).flat_map(|n| all_graphs(n).unwrap()).collect();
    // Every labelled graph on five vertices as well.
    for mask in 0u32..1 << 10 {
        let pairs = (0..5).flat_map(|j| (0..j).map(move |i| (i, j)));
        let edges = pairs.enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, e)| e);
        graphs.push(Graph::from_edges(5, edges).unwrap());
    }
    for g in &graphs {
        assert_eq!(count_cliques(g).counts(), &subset_clique_counts(g)[1..], "{g:?}");
        checked += 1;
    }
    format!("{checked} graphs")
}

fn main() {
    let corpus = pasting_corpus();
    type Check<'a> = Box<dyn Fn() -> String + 'a>;
    let criteria: Vec<(u32, &str, Duration, Check)> = vec![
        (1, "K4+ golden polynomial", Duration::from_secs(1), Box::new(criterion_1)),
        (2, "K4-free chordal graphs are real-rooted", Duration::from_secs(300), Box::new(criterion_2)),
        (3, "pasting law", Duration::from_secs(120), Box::new(criterion_3)),
        (4, "closed form", Duration::from_secs(300), Box::new(|| criterion_4(&corpus))),
        (5, "multiplicity of -1", Duration::from_secs(300), Box::new(|| criterion_5(&corpus))),
        (6, "triangle-free reduction", Duration::from_secs(300), Box::new(criterion_6)),
        (7, "edge bound", Duration::from_secs(300), Box::new(criterion_7)),
        (8, "root in [-1, 0)", Duration::from_secs(300), Box::new(criterion_8)),
        (9, "conjecture scans", Duration::from_secs(600), Box::new(criterion_9)),
        (10, "clique counts against subsets", Duration::from_secs(120), Box::new(criterion_10)),
    ];

    // Failures are summarized on the criterion line.
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (id, name, limit, check) in &criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check));
        let elapsed = start.elapsed();
        let (verdict, detail) = match outcome {
            Ok(detail) if elapsed < *limit => ("PASS", detail),
            Ok(detail) => ("FAIL", format!("{detail}; over the time limit")),
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                ("FAIL", msg)
            }
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {id:>2} {verdict} {name}: {detail} ({:.3}s, limit {}s)",
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all {} acceptance criteria passed", criteria.len());
}
