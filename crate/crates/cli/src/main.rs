use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ftreach_core::bench::{bench_size_scaling, parse_sizes, write_csv, BenchConfig};
use ftreach_core::instances::{gen_hard_dual, gen_hard_multi, gen_random_dag, gen_random_digraph, random_pairs};
use ftreach_core::io::{parse_graph, parse_pairs, write_graph, write_pairs};
use ftreach_core::kftrs::DEFAULT_SAMPLE_C;
use ftreach_core::store::{build_structure, parse_queries, BuildOptions, Structure, StructureKind};
use ftreach_core::verify::{check_oracle, default_budget, CheckOptions, Mode, Sampling};
use ftreach_core::{DiGraph, Pair};

#[derive(Parser)]
#[command(name = "ftreach", version, about = "Fault-tolerant reachability preservers and oracles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance graph and its pairs
    Gen(GenArgs),
    /// Build a structure and save it
    Build(BuildArgs),
    /// Answer query lines against a saved structure
    Query(QueryArgs),
    /// Check a structure against brute force
    Verify(VerifyArgs),
    /// Measure structure sizes over a generated family
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Hard2,
    Hardk,
    Gnp,
    GnpDag,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long = "N", default_value_t = 1)]
    levels: usize,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    rho: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random pairs to draw for gnp families
    #[arg(long = "num-pairs", default_value_t = 5)]
    num_pairs: usize,
    /// Graph output file (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long = "pairs-out")]
    pairs_out: Option<PathBuf>,
}

#[derive(Args)]
struct BuildOpts {
    /// Failure budget (k-ftrs build; verification depth)
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long = "sample-c", default_value_t = DEFAULT_SAMPLE_C)]
    sample_c: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "baseline")]
    provider: String,
}

impl BuildOpts {
    fn options(&self) -> BuildOptions {
        BuildOptions { k: self.k.unwrap_or(2), ell: self.ell, sample_c: self.sample_c, seed: self.seed, provider: self.provider.clone() }
    }
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    structure: StructureKind,
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    pairs: PathBuf,
    #[command(flatten)]
    opts: BuildOpts,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct QueryArgs {
    /// Expected structure name; checked against the file header
    #[arg(long)]
    structure: Option<StructureKind>,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    queries: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    structure: StructureKind,
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    pairs: PathBuf,
    /// Saved structure to check instead of building one
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[command(flatten)]
    opts: BuildOpts,
    /// Enumerate every failure set; fail if over the budget
    #[arg(long, conflicts_with = "sample")]
    exhaustive: bool,
    /// Sample this many failure sets when over the budget
    #[arg(long)]
    sample: Option<usize>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value = "scaling")]
    suite: String,
    #[arg(long, default_value = "hard2")]
    family: String,
    /// Comma-separated `N:r` sizes
    #[arg(long)]
    sizes: String,
    #[arg(long, value_delimiter = ',')]
    structures: Option<Vec<StructureKind>>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write 0 for build times so output is byte-identical across runs
    #[arg(long = "no-timing")]
    no_timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Outcome {
    Ok,
    Mismatch,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_inputs(graph: &Path, pairs: &Path) -> Result<(DiGraph, Vec<Pair>)> {
    let g = parse_graph(&read(graph)?).with_context(|| format!("parsing {}", graph.display()))?;
    let p = parse_pairs(&read(pairs)?).with_context(|| format!("parsing {}", pairs.display()))?;
    Ok((g, p))
}

fn need<T>(v: Option<T>, flag: &str, family: &str) -> Result<T> {
    v.with_context(|| format!("--{flag} is required for family {family}"))
}

fn gen(a: GenArgs) -> Result<Outcome> {
    let (g, pairs) = match a.family {
        Family::Hard2 => {
            let inst = gen_hard_dual(a.levels, need(a.r, "r", "hard2")?)?;
            (inst.graph, inst.pairs)
        }
        Family::Hardk => {
            let m = gen_hard_multi(need(a.rho, "rho", "hardk")?, need(a.k, "k", "hardk")?, a.levels)?;
            (m.graph, m.pairs)
        }
        Family::Gnp | Family::GnpDag => {
            let n = need(a.n, "n", "gnp")?;
            let p = need(a.p, "p", "gnp")?;
            let g = match a.family {
                Family::Gnp => gen_random_digraph(n, p, a.seed)?,
                _ => gen_random_dag(n, p, a.seed)?,
            };
            let pairs = random_pairs(n, a.num_pairs, a.seed);
            (g, pairs)
        }
    };
    match &a.out {
        Some(path) => write(path, &write_graph(&g))?,
        None => print!("{}", write_graph(&g)),
    }
    if let Some(path) = &a.pairs_out {
        write(path, &write_pairs(&pairs))?;
    }
    Ok(Outcome::Ok)
}

fn build(a: BuildArgs) -> Result<Outcome> {
    let (g, pairs) = load_inputs(&a.graph, &a.pairs)?;
    let s = build_structure(a.structure, &g, &pairs, &a.opts.options())?;
    write(&a.out, &s.save()?)?;
    eprintln!("built {} for {} pairs on n={} m={}", a.structure, pairs.len(), g.n(), g.m());
    Ok(Outcome::Ok)
}

fn load_structure(path: &Path, expect: Option<StructureKind>) -> Result<Structure> {
    let s = Structure::load(&read(path)?).with_context(|| format!("loading {}", path.display()))?;
    if let Some(k) = expect {
        if s.kind() != k {
            bail!("{} holds a {}, not a {k}", path.display(), s.kind());
        }
    }
    Ok(s)
}

fn query(a: QueryArgs) -> Result<Outcome> {
    let s = load_structure(&a.input, a.structure)?;
    let queries = parse_queries(&read(&a.queries)?).with_context(|| format!("parsing {}", a.queries.display()))?;
    let mut out = String::new();
    for (pair, failure) in queries {
        let ans = s.query(pair, &failure).with_context(|| format!("query {} {} {failure}", pair.0, pair.1))?;
        out.push_str(if ans { "1\n" } else { "0\n" });
    }
    print!("{out}");
    Ok(Outcome::Ok)
}

fn verify(a: VerifyArgs) -> Result<Outcome> {
    let (g, pairs) = load_inputs(&a.graph, &a.pairs)?;
    let s = match &a.input {
        Some(path) => load_structure(path, Some(a.structure))?,
        None => build_structure(a.structure, &g, &pairs, &a.opts.options())?,
    };
    let k = a.opts.k.unwrap_or(a.structure.budget(2));
    let mode = if a.structure == StructureKind::Ftro1Vertex { Mode::Vertex } else { Mode::Edge };
    let opts = CheckOptions {
        budget: default_budget(),
        sampling: if a.exhaustive { None } else { a.sample.map(|count| Sampling { count, seed: a.opts.seed }) },
    };
    let report = check_oracle(&g, &pairs, mode, k, &opts, |pair, f| s.query(pair, f))?;
    for m in &report.mismatches {
        println!("{m}");
    }
    eprintln!(
        "{} {}: {} queries over {} failure sets{}, {} mismatches",
        a.structure,
        if report.passed() { "ok" } else { "FAILED" },
        report.total_queries,
        report.failure_sets,
        if report.sampled { " (sampled)" } else { "" },
        report.mismatches.len()
    );
    Ok(if report.passed() { Outcome::Ok } else { Outcome::Mismatch })
}

fn bench(a: BenchArgs) -> Result<Outcome> {
    if a.suite != "scaling" {
        bail!("unknown bench suite {:?} (expected scaling)", a.suite);
    }
    let cfg = BenchConfig {
        structures: a.structures.unwrap_or_else(|| StructureKind::ALL.to_vec()),
        seed: a.seed,
        timing: !a.no_timing,
        ..Default::default()
    };
    let rows = bench_size_scaling(&a.family, &parse_sizes(&a.sizes)?, &cfg)?;
    let csv = write_csv(&rows)?;
    match &a.out {
        Some(path) => write(path, &csv)?,
        None => print!("{csv}"),
    }
    Ok(Outcome::Ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Build(a) => build(a),
        Command::Query(a) => query(a),
        Command::Verify(a) => verify(a),
        Command::Bench(a) => bench(a),
    };
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Mismatch) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
