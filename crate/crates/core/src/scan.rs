//! Batch scans of graph families against a real-rootedness claim.
//!
//! A scan walks a population in chunks of `checkpoint_every` graphs, analyzes
//! each chunk in parallel and folds the results in population order, so the
//! final report does not depend on thread count or on where a run was
//! interrupted. After every chunk the running state can be written to a
//! checkpoint file and a later run resumes from it.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr, PickFirst};

use crate::analyze::{analyze_graph, GraphReport};
use crate::catalog::GraphPredicate;
use crate::error::{Error, Result};
use crate::gen::{Family, GeneratorConfig};
use crate::graph::{encode_graph6, parse_graph6, Graph};
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conjecture {
    /// Connected K4-free chordal graphs are real-rooted with a root at -1.
    /// This one is a theorem, so a counterexample means a bug.
    Theorem1K4,
    /// 3-trees are real-rooted.
    C1ThreeTrees,
    /// Connected K5-free chordal graphs whose root -1 has multiplicity
    /// exactly 2 are real-rooted.
    C2K5FreeMult2,
}

impl Conjecture {
    pub const ALL: [Conjecture; 3] = [
        Conjecture::Theorem1K4,
        Conjecture::C1ThreeTrees,
        Conjecture::C2K5FreeMult2,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Conjecture::Theorem1K4 => "theorem1_k4",
            Conjecture::C1ThreeTrees => "c1_three_trees",
            Conjecture::C2K5FreeMult2 => "c2_k5_free_mult2",
        }
    }

    /// True for claims that are proved, where a counterexample is a defect.
    pub fn is_theorem(self) -> bool {
        self == Conjecture::Theorem1K4
    }

    /// Whether `report` belongs to the scanned population. Only the c2
    /// population is filtered after generation.
    fn admits(self, report: &GraphReport) -> bool {
        match self {
            Conjecture::C2K5FreeMult2 => report.multiplicity_at_minus_one() == 2,
            _ => true,
        }
    }

    fn violated_by(self, report: &GraphReport) -> bool {
        match self {
            Conjecture::Theorem1K4 => report.theorem1_consistent != Some(true),
            Conjecture::C1ThreeTrees | Conjecture::C2K5FreeMult2 => !report.is_real_rooted(),
        }
    }
}

impl fmt::Display for Conjecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Conjecture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Conjecture::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| Error::Config(format!("unknown conjecture `{s}`")))
    }
}

/// Everything that determines a scan's output.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub conjecture: Conjecture,
    #[serde_as(as = "PickFirst<(DisplayFromStr, _)>")]
    pub n_min: usize,
    #[serde_as(as = "PickFirst<(DisplayFromStr, _)>")]
    pub n_max: usize,
    /// Population size for the generated families; the catalog scan ignores it.
    #[serde_as(as = "PickFirst<(DisplayFromStr, _)>")]
    pub count: usize,
    /// Upper limit on generated candidates for filtered populations.
    #[serde_as(as = "PickFirst<(DisplayFromStr, _)>")]
    pub max_attempts: usize,
    #[serde_as(as = "PickFirst<(DisplayFromStr, _)>")]
    pub seed: u64,
    #[serde_as(as = "PickFirst<(DisplayFromStr, _)>")]
    pub checkpoint_every: usize,
    /// graph6 catalog directory holding `graph{n}.g6`; the built-in
    /// enumerator is used when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catalog_dir: Option<PathBuf>,
}

impl ScanConfig {
    pub fn new(conjecture: Conjecture) -> Self {
        let (n_min, n_max) = match conjecture {
            Conjecture::Theorem1K4 => (1, 7),
            Conjecture::C1ThreeTrees => (4, 12),
            Conjecture::C2K5FreeMult2 => (3, 12),
        };
        ScanConfig {
            conjecture,
            n_min,
            n_max,
            count: 500,
            max_attempts: 50_000,
            seed: 0,
            checkpoint_every: 100,
            catalog_dir: None,
        }
    }

    fn check(&self) -> Result<()> {
        if self.n_min > self.n_max {
            return Err(Error::Config(format!("empty size range {}..={}", self.n_min, self.n_max)));
        }
        if self.checkpoint_every == 0 {
            return Err(Error::Config("checkpoint_every must be positive".into()));
        }
        if self.conjecture == Conjecture::C1ThreeTrees && self.n_min < 4 {
            return Err(Error::Config("3-trees need at least 4 vertices".into()));
        }
        if self.conjecture == Conjecture::C2K5FreeMult2 && self.n_min < 3 {
            return Err(Error::Config("multiplicity 2 at -1 needs at least 3 vertices".into()));
        }
        Ok(())
    }

    fn generator(&self) -> GeneratorConfig {
        let base = GeneratorConfig {
            n_min: self.n_min,
            n_max: self.n_max,
            seed: self.seed,
            count: self.count,
            ..GeneratorConfig::default()
        };
        match self.conjecture {
            Conjecture::Theorem1K4 => GeneratorConfig {
                family: Family::CatalogFilter,
                n_min: self.n_min.max(1),
                predicates: vec![GraphPredicate::Connected, GraphPredicate::Chordal, GraphPredicate::K4Free],
                ..base
            },
            Conjecture::C1ThreeTrees => GeneratorConfig {
                family: Family::KTree,
                k: 3,
                ..base
            },
            // Separators of size >= 2 keep the multiplicity at -1 at least 2,
            // so the exact-2 filter accepts a large share of candidates.
            Conjecture::C2K5FreeMult2 => GeneratorConfig {
                family: Family::ChordalPasting,
                max_summand_size: 4,
                forbid_clique: Some(5),
                min_separator: 2,
                ..base
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Counterexample {
    pub graph6: String,
    pub report: GraphReport,
}

#[serde_as]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanReport {
    pub config: ScanConfig,
    /// Graphs in the scanned population.
    #[serde_as(as = "DisplayFromStr")]
    pub total_graphs: usize,
    /// Candidates generated, including those the population filter rejected.
    #[serde_as(as = "DisplayFromStr")]
    pub attempts: usize,
    #[serde_as(as = "DisplayFromStr")]
    pub real_rooted: usize,
    #[serde_as(as = "DisplayFromStr")]
    pub not_real_rooted: usize,
    #[serde_as(as = "DisplayFromStr")]
    pub chordal: usize,
    #[serde_as(as = "BTreeMap<DisplayFromStr, DisplayFromStr>")]
    pub mult_at_minus_one: BTreeMap<usize, usize>,
    #[serde_as(as = "BTreeMap<DisplayFromStr, DisplayFromStr>")]
    pub omega: BTreeMap<usize, usize>,
    pub counterexamples: Vec<Counterexample>,
    /// Wall-clock seconds of the last session; omitted unless requested,
    /// since it would break byte-for-byte comparison of reports.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_seconds: Option<f64>,
}

impl ScanReport {
    fn empty(config: ScanConfig) -> Self {
        ScanReport {
            config,
            total_graphs: 0,
            attempts: 0,
            real_rooted: 0,
            not_real_rooted: 0,
            chordal: 0,
            mult_at_minus_one: BTreeMap::new(),
            omega: BTreeMap::new(),
            counterexamples: Vec::new(),
            elapsed_seconds: None,
        }
    }

    fn record(&mut self, report: GraphReport) {
        self.total_graphs += 1;
        if report.is_real_rooted() {
            self.real_rooted += 1;
        } else {
            self.not_real_rooted += 1;
        }
        self.chordal += report.chordal as usize;
        *self.mult_at_minus_one.entry(report.multiplicity_at_minus_one()).or_default() += 1;
        *self.omega.entry(report.omega).or_default() += 1;
        if self.config.conjecture.violated_by(&report) {
            self.counterexamples.push(Counterexample {
                graph6: report.graph_id.clone(),
                report,
            });
        }
    }

    /// True when a proved claim failed, which signals a defect.
    pub fn theorem_violated(&self) -> bool {
        self.config.conjecture.is_theorem() && !self.counterexamples.is_empty()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Parses and validates a report.
    pub fn from_json(text: &str) -> Result<Self> {
        let report: ScanReport = serde_json::from_str(text)?;
        report.validate()?;
        Ok(report)
    }

    /// Checks the internal totals and re-analyzes every counterexample from
    /// its graph6 string to confirm the recorded verdict.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Consistency(format!("scan report: {msg}")));
        let total = self.total_graphs;
        if self.real_rooted + self.not_real_rooted != total {
            return fail("verdict counts do not add up to the total".into());
        }
        if self.mult_at_minus_one.values().sum::<usize>() != total
            || self.omega.values().sum::<usize>() != total
        {
            return fail("histograms do not add up to the total".into());
        }
        if self.chordal > total || self.attempts < total || self.counterexamples.len() > total {
            return fail("counts exceed the population".into());
        }
        for c in &self.counterexamples {
            let g = parse_graph6(&c.graph6)?;
            let again = analyze_graph(&c.graph6, &g)?;
            if again != c.report {
                return fail(format!("counterexample {} does not reproduce", c.graph6));
            }
            if !self.config.conjecture.violated_by(&again) || !self.config.conjecture.admits(&again) {
                return fail(format!("{} is not a counterexample", c.graph6));
            }
        }
        Ok(())
    }
}

/// Running state written after each chunk.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Checkpoint {
    #[serde_as(as = "DisplayFromStr")]
    next_index: usize,
    report: ScanReport,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScanOptions {
    /// Read the starting state from, and save progress to, this file.
    pub checkpoint: Option<PathBuf>,
    /// Stop after this many chunks in this session, leaving the checkpoint
    /// in place.
    pub halt_after_chunks: Option<usize>,
    /// Record elapsed seconds in the report.
    pub timing: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScanOutcome {
    Complete(ScanReport),
    Halted { processed: usize },
}

enum Population {
    Fixed(Vec<Graph>),
    Seeded(GeneratorConfig),
}

impl Population {
    fn new(config: &ScanConfig) -> Result<Self> {
        let generator = config.generator();
        Ok(match config.conjecture {
            Conjecture::Theorem1K4 => match &config.catalog_dir {
                None => Population::Fixed(generator.generate()?),
                Some(dir) => {
                    let mut graphs = Vec::new();
                    for n in generator.n_min..=generator.n_max {
                        let per_order = GeneratorConfig {
                            n_min: n,
                            n_max: n,
                            catalog: Some(dir.join(format!("graph{n}.g6"))),
                            ..generator.clone()
                        };
                        graphs.extend(per_order.generate()?);
                    }
                    Population::Fixed(graphs)
                }
            },
            _ => Population::Seeded(generator),
        })
    }

    /// Number of candidates available, if bounded by the population itself.
    fn len(&self, config: &ScanConfig) -> usize {
        match self {
            Population::Fixed(graphs) => graphs.len(),
            Population::Seeded(_) if config.conjecture == Conjecture::C2K5FreeMult2 => config.max_attempts,
            Population::Seeded(_) => config.count,
        }
    }

    fn analyze(&self, index: usize) -> Result<GraphReport> {
        let owned;
        let g = match self {
            Population::Fixed(graphs) => &graphs[index],
            Population::Seeded(generator) => {
                owned = generator.generate_one(index as u64)?;
                &owned
            }
        };
        analyze_graph(&encode_graph6(g), g)
    }
}

/// Runs (or resumes) a scan.
pub fn run_scan(config: &ScanConfig, options: &ScanOptions) -> Result<ScanOutcome> {
    config.check()?;
    let started = Instant::now();
    let population = Population::new(config)?;
    let limit = population.len(config);
    let target = match config.conjecture {
        Conjecture::C2K5FreeMult2 => config.count,
        _ => usize::MAX,
    };

    let mut state = match &options.checkpoint {
        Some(path) if path.exists() => load_checkpoint(path, config)?,
        _ => Checkpoint {
            next_index: 0,
            report: ScanReport::empty(config.clone()),
        },
    };

    let mut chunks = 0;
    while state.next_index < limit && state.report.total_graphs < target {
        if options.halt_after_chunks.is_some_and(|h| chunks >= h) {
            return Ok(ScanOutcome::Halted {
                processed: state.next_index,
            });
        }
        let start = state.next_index;
        let end = (start + config.checkpoint_every).min(limit);
        let reports = par::map_range(end - start, |i| population.analyze(start + i));
        for (offset, report) in reports.into_iter().enumerate() {
            if state.report.total_graphs >= target {
                break;
            }
            let report = report?;
            state.next_index = start + offset + 1;
            state.report.attempts = state.next_index;
            if config.conjecture.admits(&report) {
                state.report.record(report);
            }
        }
        chunks += 1;
        if let Some(path) = &options.checkpoint {
            write_atomic(path, &serde_json::to_string(&state)?)?;
        }
    }

    let mut report = state.report;
    if options.timing {
        report.elapsed_seconds = Some(started.elapsed().as_secs_f64());
    }
    if let Some(path) = &options.checkpoint {
        if path.exists() {
            fs::remove_file(path)?;
        }
    }
    Ok(ScanOutcome::Complete(report))
}

fn load_checkpoint(path: &Path, config: &ScanConfig) -> Result<Checkpoint> {
    let text = fs::read_to_string(path)?;
    let state: Checkpoint = serde_json::from_str(&text)
        .map_err(|e| Error::Input(format!("corrupt checkpoint {}: {e}", path.display())))?;
    if &state.report.config != config {
        return Err(Error::Config(format!(
            "checkpoint {} was written by a scan with a different configuration",
            path.display()
        )));
    }
    Ok(state)
}

/// Writes `contents` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}
