use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cliquepoly::analyze::{analyze_graph_with, AnalyzeOptions, GraphReport};
use cliquepoly::catalog::{Graph6Reader, GraphPredicate};
use cliquepoly::chordal::{clique_tree, perfect_elimination_ordering};
use cliquepoly::gen::{Family, GeneratorConfig};
use cliquepoly::graph::{encode_graph6, parse_edge_list, to_edge_list};
use cliquepoly::reduce::{random_spanning_tree, reduction_with_tree, require_k4_free_chordal, triangle_free_reduction};
use cliquepoly::rng::Rng;
use cliquepoly::scan::{run_scan, write_atomic, Conjecture, ScanConfig, ScanOptions, ScanOutcome};
use cliquepoly::{Error, Graph, Precondition};

#[derive(Parser)]
#[command(name = "cliquepoly", version, about = "Clique polynomials, chordal decompositions and real-rootedness scans")]
struct Cli {
    /// Worker threads for batch work (defaults to one per core).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print one JSON report per input graph.
    Analyze(AnalyzeArgs),
    /// Print the clique-tree decomposition of each connected chordal input graph.
    Decompose(InputArgs),
    /// Print the triangle-free reduction of a connected K4-free chordal graph.
    Reduce(ReduceArgs),
    /// Scan a graph family against a real-rootedness claim.
    Scan(ScanArgs),
    /// Generate graphs.
    Gen(GenArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    EdgeList,
    Graph6,
}

#[derive(Args)]
struct InputArgs {
    /// Input file; standard input when absent or `-`.
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "edge-list")]
    format: Format,
    /// Write output here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Also write a CSV summary row per graph.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Report the edge bound for non-chordal K4-free graphs too.
    #[arg(long)]
    chordal_relax: bool,
}

#[derive(Args)]
struct ReduceArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 0)]
    root: usize,
    /// Use a seeded random spanning tree instead of the breadth-first one.
    #[arg(long)]
    random_tree: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ScanArgs {
    /// theorem1_k4, c1_three_trees or c2_k5_free_mult2.
    conjecture: String,
    /// JSON scan configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    max_attempts: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Directory of graph6 catalogs named `graph{n}.g6`.
    #[arg(long)]
    catalog_dir: Option<PathBuf>,
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Graphs per chunk; a checkpoint is written after each chunk.
    #[arg(long)]
    checkpoint_every: Option<usize>,
    /// Stop after this many chunks, leaving the checkpoint for a later run.
    #[arg(long, hide = true)]
    halt_after_chunks: Option<usize>,
    /// Record elapsed seconds in the report.
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// JSON generator configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    max_summand_size: Option<usize>,
    #[arg(long)]
    forbid_clique: Option<usize>,
    #[arg(long)]
    min_separator: Option<usize>,
    /// Catalog filter, repeatable: connected, chordal, triangle_free, k4_free, k5_free.
    #[arg(long = "predicate")]
    predicates: Vec<String>,
    #[arg(long)]
    catalog: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    count: Option<usize>,
    /// graph6 writes one graph per line; edge-list separates graphs by a blank line.
    #[arg(long, value_enum, default_value = "graph6")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Complete,
    ChordalPasting,
    KTree,
    CatalogFilter,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Complete => Family::Complete,
            FamilyArg::ChordalPasting => Family::ChordalPasting,
            FamilyArg::KTree => Family::KTree,
            FamilyArg::CatalogFilter => Family::CatalogFilter,
        }
    }
}

/// Error paired with the exit status it maps to.
struct Failure {
    code: u8,
    error: Error,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        let code = match &error {
            Error::Consistency(_) => 3,
            Error::Precondition(_) => 4,
            _ => 2,
        };
        Failure { code, error }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Error::Io(e).into()
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e).into()
    }
}

type CmdResult = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads(cli.jobs) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let result = match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Decompose(args) => cmd_decompose(args),
        Command::Reduce(args) => cmd_reduce(args),
        Command::Scan(args) => cmd_scan(args),
        Command::Gen(args) => cmd_gen(args),
    };
    match result {
        Ok(code) => code,
        Err(Failure { code, error }) => {
            match error {
                Error::Precondition(p) => eprintln!("precondition failed: {p}"),
                e => eprintln!("error: {e}"),
            }
            ExitCode::from(code)
        }
    }
}

#[cfg(feature = "parallel")]
fn configure_threads(jobs: Option<usize>) -> Result<(), String> {
    match jobs {
        Some(0) => Err("--jobs must be positive".into()),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string()),
        None => Ok(()),
    }
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(jobs: Option<usize>) -> Result<(), String> {
    match jobs {
        Some(0) => Err("--jobs must be positive".into()),
        _ => Ok(()),
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<String, Failure> {
    let mut text = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => {
            text = fs::read_to_string(p)
                .map_err(|e| Error::Input(format!("cannot read {}: {e}", p.display())))?;
        }
        _ => {
            io::stdin().read_to_string(&mut text)?;
        }
    }
    Ok(text)
}

/// Input graphs with their ids: the graph6 line, or the file name for an
/// edge list.
fn read_graphs(args: &InputArgs) -> Result<Vec<(String, Graph)>, Failure> {
    let text = read_input(&args.input)?;
    let graphs = match args.format {
        Format::EdgeList => {
            let id = match &args.input {
                Some(p) if p.as_os_str() != "-" => p.display().to_string(),
                _ => "stdin".to_string(),
            };
            vec![(id, parse_edge_list(&text)?)]
        }
        Format::Graph6 => Graph6Reader::new(text.as_bytes()).collect::<cliquepoly::Result<Vec<_>>>()?,
    };
    if graphs.is_empty() {
        return Err(Error::Parse {
            line: 0,
            message: "no graphs in input".into(),
        }
        .into());
    }
    Ok(graphs)
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(
            fs::File::create(p).map_err(|e| Error::Input(format!("cannot write {}: {e}", p.display())))?,
        )),
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    })
}

fn cmd_analyze(args: AnalyzeArgs) -> CmdResult {
    let graphs = read_graphs(&args.input)?;
    let options = AnalyzeOptions {
        chordal_relax: args.chordal_relax,
    };
    let reports: Vec<cliquepoly::Result<GraphReport>> =
        cliquepoly::par::map(&graphs, |(id, g)| analyze_graph_with(id, g, options));
    let reports = reports.into_iter().collect::<cliquepoly::Result<Vec<_>>>()?;

    let mut out = output(&args.input.out)?;
    for r in &reports {
        serde_json::to_writer(&mut out, r)?;
        writeln!(out)?;
    }
    out.flush()?;

    if let Some(path) = &args.csv {
        let mut w = csv::Writer::from_path(path)
            .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?;
        let write = |w: &mut csv::Writer<fs::File>, row: &[String]| {
            w.write_record(row).map_err(|e| Error::Input(e.to_string()))
        };
        write(&mut w, &GraphReport::CSV_HEADER.map(String::from))?;
        for r in &reports {
            write(&mut w, &r.csv_row())?;
        }
        w.flush()?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_decompose(args: InputArgs) -> CmdResult {
    let graphs = read_graphs(&args)?;
    let mut out = output(&args.out)?;
    for (_, g) in &graphs {
        if !g.is_connected() {
            return Err(Error::Precondition(Precondition::NotConnected).into());
        }
        let d = clique_tree(g, &perfect_elimination_ordering(g)?)?;
        serde_json::to_writer(&mut out, &d)?;
        writeln!(out)?;
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

/// Prints the trace and then checks it; a trace that fails its claims is
/// still printed so the failing case can be inspected.
fn cmd_reduce(args: ReduceArgs) -> CmdResult {
    let graphs = read_graphs(&args.input)?;
    let mut out = output(&args.input.out)?;
    let mut failure = None;
    for (id, g) in &graphs {
        require_k4_free_chordal(g)?;
        if args.root >= g.vertex_count() {
            return Err(Error::Argument(format!("root {} out of range for {id}", args.root)).into());
        }
        let trace = if args.random_tree {
            let tree = random_spanning_tree(g, args.root, &mut Rng::new(args.seed));
            reduction_with_tree(g, args.root, tree)?
        } else {
            triangle_free_reduction(g, args.root)?
        };
        serde_json::to_writer(&mut out, &trace.to_json(g))?;
        writeln!(out)?;
        if let Err(e) = trace.verify(g) {
            failure.get_or_insert(e);
        }
    }
    out.flush()?;
    match failure {
        Some(e) => Err(e.into()),
        None => Ok(ExitCode::SUCCESS),
    }
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())).into())
}

fn cmd_scan(args: ScanArgs) -> CmdResult {
    let conjecture: Conjecture = args.conjecture.parse()?;
    let mut config = match &args.config {
        Some(path) => {
            let config: ScanConfig = load_json(path)?;
            if config.conjecture != conjecture {
                return Err(Error::Config(format!(
                    "config is for {}, not {conjecture}",
                    config.conjecture
                ))
                .into());
            }
            config
        }
        None => ScanConfig::new(conjecture),
    };
    macro_rules! set {
        ($($field:ident),*) => {$(
            if let Some(v) = args.$field.clone() {
                config.$field = v;
            }
        )*};
    }
    set!(n_min, n_max, count, max_attempts, seed, checkpoint_every);
    if args.catalog_dir.is_some() {
        config.catalog_dir = args.catalog_dir.clone();
    }

    let options = ScanOptions {
        checkpoint: args.checkpoint.clone(),
        halt_after_chunks: args.halt_after_chunks,
        timing: args.timing,
    };
    let report = match run_scan(&config, &options)? {
        ScanOutcome::Complete(report) => report,
        ScanOutcome::Halted { processed } => {
            eprintln!("halted after {processed} candidates; rerun with the same checkpoint to resume");
            return Ok(ExitCode::SUCCESS);
        }
    };
    let json = report.to_json()?;
    match &args.out {
        Some(path) => write_atomic(path, &json)
            .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(json.as_bytes())?;
            stdout.flush()?;
        }
    }
    eprintln!(
        "{conjecture}: {} graphs, {} real-rooted, {} counterexamples",
        report.total_graphs,
        report.real_rooted,
        report.counterexamples.len()
    );
    if report.theorem_violated() {
        return Err(Error::Consistency(format!(
            "{} graphs contradict a proved claim",
            report.counterexamples.len()
        ))
        .into());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_gen(args: GenArgs) -> CmdResult {
    let mut config = match &args.config {
        Some(path) => load_json(path)?,
        None => GeneratorConfig::default(),
    };
    macro_rules! set {
        ($($field:ident),*) => {$(
            if let Some(v) = args.$field.clone() {
                config.$field = v;
            }
        )*};
    }
    set!(n_min, n_max, k, max_summand_size, min_separator, seed, count);
    if let Some(f) = args.family {
        config.family = f.into();
    }
    if args.forbid_clique.is_some() {
        config.forbid_clique = args.forbid_clique;
    }
    if args.catalog.is_some() {
        config.catalog = args.catalog.clone();
    }
    if !args.predicates.is_empty() {
        config.predicates = args
            .predicates
            .iter()
            .map(|p| p.parse::<GraphPredicate>())
            .collect::<cliquepoly::Result<_>>()?;
    }

    let graphs = config.generate()?;
    let mut out = output(&args.out)?;
    for (i, g) in graphs.iter().enumerate() {
        match args.format {
            Format::Graph6 => writeln!(out, "{}", encode_graph6(g))?,
            Format::EdgeList => {
                if i > 0 {
                    writeln!(out)?;
                }
                write!(out, "{}", to_edge_list(g))?;
            }
        }
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}
