//! `pmideal`: graphs, minimal pairs, dimension checks and point censuses
//! from the command line.

mod manifest;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pmideal::budget::Budget;
use pmideal::census::{
    self, count_h_pairs, count_y_bruteforce, records_to_csv, verify_bundle_count, with_jobs, CensusError, CensusRecord,
    RankSpec, StratumSpec, Verification,
};
use pmideal::graphs::{
    self, codim_breakdown, dim_y_formula, enumerate_permissible, minimal_cover_pairs, minimal_permissible_supergraphs,
    permissibility_witness, GraphError, PermissiblePair, SimpleGraph,
};
use pmideal::{FieldError, PrimeModulus};

use manifest::{unix_ms, write_manifest, Outputs, RunManifest};

#[derive(Debug, Parser, Serialize)]
#[command(name = "pmideal", version, about = "Principal minor ideals over prime fields")]
struct Cli {
    /// Where to write run-manifest.json; defaults to the output location,
    /// else the working directory.
    #[arg(long, global = true)]
    manifest_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
enum Command {
    /// Graphs of Plücker vanishing patterns.
    Graphs {
        #[command(subcommand)]
        cmd: GraphsCmd,
    },
    /// Minimal permissible pairs covering K_n.
    Pairs(PairsArgs),
    /// Dimension of the rank n-2 stratum with vanishing principal (n-2)-minors.
    Dimy {
        #[arg(long)]
        n: usize,
    },
    /// Exact point counts of matrix strata.
    Census(CensusArgs),
    /// Exhaustive verification suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Args, Serialize)]
struct GraphInput {
    /// Number of vertices.
    #[arg(long)]
    n: Option<usize>,
    /// Edge list such as "1-2,2-3".
    #[arg(long, requires = "n")]
    edges: Option<String>,
    /// Graph in the "n; i j; i j" format.
    #[arg(long, conflicts_with_all = ["n", "edges"])]
    graph: Option<String>,
}

impl GraphInput {
    fn parse(&self) -> Result<SimpleGraph, Failure> {
        match (&self.graph, self.n) {
            (Some(text), _) => Ok(text.parse()?),
            (None, Some(n)) => Ok(SimpleGraph::parse_edge_list(n, self.edges.as_deref().unwrap_or(""))?),
            (None, None) => Err(Failure::Usage("give --n/--edges or --graph".into())),
        }
    }
}

#[derive(Debug, Subcommand, Serialize)]
enum GraphsCmd {
    /// Is the graph permissible? Prints a witness when it is not.
    Check(GraphInput),
    /// All permissible graphs on n vertices, as DOT files plus index.json.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Codimension of the stratum of a permissible graph.
    Codim(GraphInput),
    /// Minimal permissible supergraphs, as DOT files plus index.json.
    Supergraphs {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Complement of a graph.
    Complement {
        #[command(flatten)]
        input: GraphInput,
        /// Print DOT instead of the edge-list format.
        #[arg(long)]
        dot: bool,
    },
}

#[derive(Debug, Args, Serialize)]
struct PairsArgs {
    #[arg(long)]
    n: usize,
    /// One entry per labeled pair (the default).
    #[arg(long, conflicts_with = "types")]
    labeled: bool,
    /// Collapse to isomorphism types.
    #[arg(long)]
    types: bool,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Method {
    Matrix,
    Grassmann,
    Both,
}

#[derive(Debug, Args, Serialize)]
struct CensusArgs {
    #[arg(long)]
    n: usize,
    /// Exact rank, or "any".
    #[arg(long, default_value = "any")]
    r: String,
    #[arg(long)]
    t: usize,
    #[arg(long)]
    q: u64,
    #[arg(long, value_enum, default_value_t = Method::Matrix)]
    method: Method,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Output file; `.csv` selects CSV, anything else JSON. Prints JSON to
    /// stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Keep wall-clock timings in the records (otherwise they are zeroed so
    /// repeated runs produce identical files).
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Suite {
    Overlap,
    Case3,
    M2,
    Jacobi,
    #[value(name = "n5-example")]
    N5Example,
    GraphPermissible,
    VarDecomp,
}

#[derive(Debug, Args, Serialize)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Field size; each suite has its own default.
    #[arg(long)]
    q: Option<u64>,
    /// Matrix or graph order (largest matrix size for `jacobi`).
    #[arg(long)]
    n: Option<usize>,
    /// Number of columns for `overlap`.
    #[arg(long, default_value_t = 3)]
    s: usize,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Largest constraint set for `var-decomp`.
    #[arg(long, default_value_t = 3)]
    max_edges: usize,
}

#[derive(Debug)]
enum Failure {
    Io(String),
    Usage(String),
    Budget(String),
    Invariant(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Budget(_) => 3,
            Failure::Invariant(_) => 4,
            Failure::Verification(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Io(m)
            | Failure::Usage(m)
            | Failure::Budget(m)
            | Failure::Invariant(m)
            | Failure::Verification(m) => m,
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<FieldError> for Failure {
    fn from(e: FieldError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::OverBudget { .. } => Failure::Budget(e.to_string()),
            GraphError::Invariant(_) => Failure::Invariant(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<CensusError> for Failure {
    fn from(e: CensusError) -> Self {
        match e {
            CensusError::Budget(_) | CensusError::Overflow(_) => Failure::Budget(e.to_string()),
            CensusError::Spec(_) | CensusError::Field(_) | CensusError::TooFewPrimes => Failure::Usage(e.to_string()),
            CensusError::Graph(g) => g.into(),
            _ => Failure::Invariant(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Invariant(e.to_string())
    }
}

fn json_text<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn modulus(q: u64) -> Result<PrimeModulus, Failure> {
    Ok(PrimeModulus::new(q)?)
}

fn one_based(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()
}

#[derive(Serialize)]
struct GraphEntry {
    file: String,
    graph: String,
    edges: usize,
    codim: usize,
}

fn write_graph_set(
    out: &Path,
    prefix: &str,
    graphs: &[SimpleGraph],
    outputs: &mut Outputs,
) -> Result<Vec<GraphEntry>, Failure> {
    let width = graphs.len().to_string().len().max(3);
    graphs
        .iter()
        .enumerate()
        .map(|(k, g)| {
            let file = format!("{prefix}-{:0width$}.dot", k + 1);
            outputs.write(&out.join(&file), &g.to_dot(&format!("{prefix}_{}", k + 1)))?;
            Ok(GraphEntry {
                file,
                graph: g.to_string(),
                edges: g.edge_count(),
                codim: graphs::codim(g)?,
            })
        })
        .collect()
}

fn cmd_graphs(cmd: &GraphsCmd, outputs: &mut Outputs) -> Result<(), Failure> {
    match cmd {
        GraphsCmd::Check(input) => {
            let g = input.parse()?;
            match permissibility_witness(&g) {
                None => println!("permissible: true"),
                Some(w) => {
                    println!("permissible: false");
                    println!("witness: {w}");
                }
            }
        }
        GraphsCmd::Codim(input) => {
            let g = input.parse()?;
            let c = codim_breakdown(&g)?;
            println!("codim: {}", c.value);
            println!("kind={} m={} c={} l={}", c.kind, c.m, c.c, c.l);
        }
        GraphsCmd::Enumerate { n, out } => {
            let graphs = enumerate_permissible(*n)?;
            let entries = write_graph_set(out, "graph", &graphs, outputs)?;
            #[derive(Serialize)]
            struct Index {
                n: usize,
                count: usize,
                graphs: Vec<GraphEntry>,
            }
            let index = Index {
                n: *n,
                count: entries.len(),
                graphs: entries,
            };
            outputs.write(&out.join("index.json"), &json_text(&index)?)?;
            println!(
                "{} permissible graphs on {n} vertices written to {}",
                index.count,
                out.display()
            );
        }
        GraphsCmd::Supergraphs { input, out } => {
            let g = input.parse()?;
            let supers = minimal_permissible_supergraphs(&g)?;
            let entries = write_graph_set(out, "supergraph", &supers, outputs)?;
            #[derive(Serialize)]
            struct Index {
                input: String,
                count: usize,
                supergraphs: Vec<GraphEntry>,
            }
            for e in &entries {
                println!("{}  (codim {})", e.graph, e.codim);
            }
            let index = Index {
                input: g.to_string(),
                count: entries.len(),
                supergraphs: entries,
            };
            outputs.write(&out.join("index.json"), &json_text(&index)?)?;
        }
        GraphsCmd::Complement { input, dot } => {
            let c = input.parse()?.complement();
            if *dot {
                print!("{}", c.to_dot("complement"));
            } else {
                println!("{c}");
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct PairEntry {
    a: usize,
    clique: Vec<usize>,
    s: String,
    t: String,
    codim_s: usize,
    codim_t: usize,
    file: String,
}

fn pair_dot(p: &PermissiblePair, k: usize) -> String {
    format!(
        "{}{}",
        p.s_graph.to_dot(&format!("pair_{k}_S")),
        p.t_graph.to_dot(&format!("pair_{k}_T"))
    )
}

fn cmd_pairs(args: &PairsArgs, outputs: &mut Outputs) -> Result<(), Failure> {
    let mut pairs = minimal_cover_pairs(args.n)?;
    if args.types {
        // clique-plus-isolated graphs are isomorphic exactly when the cliques
        // have the same order; double-check with canonical forms where cheap
        let mut seen = BTreeMap::new();
        for p in &pairs {
            seen.entry(p.clique_order).or_insert(*p);
        }
        if args.n <= graphs::MAX_ENUMERATION_ORDER {
            let mut forms = std::collections::BTreeSet::new();
            for p in &pairs {
                forms.insert(p.s_graph.canonical_form()?);
            }
            if forms.len() != seen.len() {
                return Err(Failure::Invariant(format!(
                    "{} canonical forms but {} clique orders",
                    forms.len(),
                    seen.len()
                )));
            }
        }
        pairs = seen.into_values().collect();
    }
    let mut per_a = BTreeMap::new();
    let mut entries = Vec::new();
    for (k, p) in pairs.iter().enumerate() {
        p.validate()?;
        *per_a.entry(p.clique_order).or_insert(0usize) += 1;
        let file = format!("pair-{:03}.dot", k + 1);
        outputs.write(&args.out.join(&file), &pair_dot(p, k + 1))?;
        entries.push(PairEntry {
            a: p.clique_order,
            clique: one_based(p.clique()),
            s: p.s_graph.to_string(),
            t: p.t_graph.to_string(),
            codim_s: graphs::codim(&p.s_graph)?,
            codim_t: graphs::codim(&p.t_graph)?,
            file,
        });
    }
    #[derive(Serialize)]
    struct Summary {
        n: usize,
        mode: &'static str,
        total: usize,
        per_a: BTreeMap<usize, usize>,
        pairs: Vec<PairEntry>,
    }
    let summary = Summary {
        n: args.n,
        mode: if args.types { "types" } else { "labeled" },
        total: entries.len(),
        per_a,
        pairs: entries,
    };
    outputs.write(&args.out.join("pairs.json"), &json_text(&summary)?)?;
    println!("{} pairs ({}) for n = {}", summary.total, summary.mode, args.n);
    for (a, c) in &summary.per_a {
        println!("  a = {a}: {c}");
    }
    Ok(())
}

fn cmd_dimy(n: usize) -> Result<(), Failure> {
    let d = dim_y_formula(n)?;
    println!("n = {n}");
    println!("combinatorial maximum: {}", d.value);
    println!("formula n^2 - n - 4: {}", d.formula);
    println!(
        "maximizing pair: a = {}, S = {}, T = {}",
        d.maximizer.clique_order, d.maximizer.s_graph, d.maximizer.t_graph
    );
    Ok(())
}

fn cmd_census(args: &CensusArgs, budget: &Budget, outputs: &mut Outputs) -> Result<(), Failure> {
    let q = modulus(args.q)?;
    let r: RankSpec = args.r.parse()?;
    let spec = StratumSpec::new(args.n, r, args.t, q)?;
    let needs_square = |what: &str| match r {
        RankSpec::Exact(r) if r == args.t => Ok(()),
        _ => Err(Failure::Usage(format!("--method {what} needs --r equal to --t"))),
    };
    let mut records = Vec::new();
    let mut verdict = None;
    match args.method {
        Method::Matrix => records.push(with_jobs(args.jobs, || count_y_bruteforce(&spec, budget))??),
        Method::Grassmann => {
            needs_square("grassmann")?;
            records.push(with_jobs(args.jobs, || count_h_pairs(args.n, args.t, q, budget))??);
        }
        Method::Both => {
            needs_square("both")?;
            let check = with_jobs(args.jobs, || verify_bundle_count(args.n, args.t, q, budget))??;
            verdict = Some((check.holds, check.gl));
            records.push(check.matrices);
            records.push(check.pairs);
        }
    }
    if !args.timing {
        records = records.iter().map(CensusRecord::without_timing).collect();
    }
    for rec in &records {
        println!("{}: {}", rec.method, rec.count);
    }
    let text = match &args.out {
        Some(path) if path.extension().is_some_and(|e| e == "csv") => records_to_csv(&records),
        _ => json_text(&records)?,
    };
    match &args.out {
        Some(path) => outputs.write(path, &text)?,
        None => print!("{text}"),
    }
    if let Some((holds, gl)) = verdict {
        if holds {
            println!("bundle identity: OK (|GL({}, {q})| = {gl})", args.t);
        } else {
            return Err(Failure::Verification(format!(
                "bundle identity: FAILED ({} != {} * {gl})",
                records[0].count, records[1].count
            )));
        }
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, budget: &Budget) -> Result<(), Failure> {
    let q = |default: u64| modulus(args.q.unwrap_or(default));
    let v: Verification = match args.suite {
        Suite::Overlap => census::verify_overlap_rule(args.s, q(2)?, budget)?,
        Suite::Case3 => census::verify_case3(q(3)?, args.samples.unwrap_or(5), args.seed, budget)?,
        Suite::M2 => census::verify_m2_overlapping2(q(3)?)?,
        Suite::Jacobi => {
            census::verify_jacobi(args.n.unwrap_or(6), q(101)?, args.samples.unwrap_or(10_000), args.seed)?
        }
        Suite::N5Example => census::verify_n5_example(q(7)?, args.samples.unwrap_or(1000), args.seed)?,
        Suite::GraphPermissible => census::verify_graph_permissible(args.n.unwrap_or(5), q(2)?, budget)?,
        Suite::VarDecomp => census::verify_var_decomposition(args.n.unwrap_or(5), q(2)?, args.max_edges, budget)?,
    };
    if v.passed() {
        println!("{v}");
        Ok(())
    } else {
        Err(Failure::Verification(v.to_string()))
    }
}

fn run(cli: &Cli, budget: &Budget, outputs: &mut Outputs) -> Result<(), Failure> {
    match &cli.command {
        Command::Graphs { cmd } => cmd_graphs(cmd, outputs),
        Command::Pairs(args) => cmd_pairs(args, outputs),
        Command::Dimy { n } => cmd_dimy(*n),
        Command::Census(args) => cmd_census(args, budget, outputs),
        Command::Verify(args) => cmd_verify(args, budget),
    }
}

fn manifest_dir(cli: &Cli) -> PathBuf {
    if let Some(d) = &cli.manifest_dir {
        return d.clone();
    }
    let out = match &cli.command {
        Command::Graphs {
            cmd: GraphsCmd::Enumerate { out, .. } | GraphsCmd::Supergraphs { out, .. },
        } => Some(out.clone()),
        Command::Pairs(args) => Some(args.out.clone()),
        Command::Census(CensusArgs { out: Some(path), .. }) => path
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .map(Path::to_path_buf),
        _ => None,
    };
    out.unwrap_or_else(|| PathBuf::from("."))
}

fn main() -> ExitCode {
    let started = unix_ms();
    let cli = Cli::parse();
    let budget = Budget::from_env();
    let mut outputs = Outputs::default();
    let result = run(&cli, &budget, &mut outputs);
    let code = match &result {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.code()
        }
    };
    let manifest = RunManifest {
        command_line: std::env::args().collect(),
        config: serde_json::to_value(&cli).unwrap_or(serde_json::Value::Null),
        budget_cells: budget.max_cells.to_string(),
        started_unix_ms: started,
        finished_unix_ms: unix_ms(),
        exit_code: code.into(),
        outputs: outputs.files,
    };
    if let Err(e) = write_manifest(&manifest_dir(&cli), &manifest) {
        eprintln!("error: cannot write manifest: {e}");
        return ExitCode::from(if code == 0 { 1 } else { code });
    }
    ExitCode::from(code)
}
