use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use nsc_core::bounds::{
    kmax_lower_bound, lp_baseline_alpha, optimized_pick_l, pick_l_upper_bound,
    pick_l_upper_bound_lp, BoundReport, NscDecision, ScoreTable, DEFAULT_CONSTRAINT_BUDGET,
};
use nsc_core::exhaustive::{esm_alpha, estimate_esm_cost, DEFAULT_ESM_BUDGET};
use nsc_core::matrix::{
    gen_gaussian, gen_partial_fourier, load_matrix, MatrixFormat, Provenance, SensingMatrix,
};
use nsc_core::report::ReportRow;
use nsc_core::tomography::{build_random_walk_instance, load_edge_list, Graph};
use nsc_core::tsa::{tsa, TsaLimits, TsaResult};

#[derive(Parser)]
#[command(name = "nsc", version, about = "Null space condition certification for l1 recovery")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "NSC_THREADS")]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file (stdout if absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Gaussian,
    Fourier,
}

#[derive(Args)]
struct MatrixSource {
    /// Matrix file (CSV, or whitespace-separated for other extensions).
    #[arg(long, conflicts_with = "gen")]
    matrix: Option<PathBuf>,
    /// Generator spec `gaussian:MxN[:SEED]` or `fourier:MxN[:SEED]`.
    #[arg(long = "gen")]
    gen: Option<String>,
    /// Scale loaded columns to unit norm.
    #[arg(long)]
    normalize: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a matrix and write it as CSV.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Pick-l upper bound.
    Pick {
        #[command(flatten)]
        src: MatrixSource,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        l: usize,
        /// Solve the LP form instead of sorting.
        #[arg(long)]
        lp: bool,
    },
    /// Optimized pick-l upper bound.
    OptPick {
        #[command(flatten)]
        src: MatrixSource,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        l: usize,
        /// Largest number of constraints to build.
        #[arg(long, default_value_t = DEFAULT_CONSTRAINT_BUDGET)]
        budget: u128,
    },
    /// Tree search: exact value or certified interval.
    Tsa {
        #[command(flatten)]
        src: MatrixSource,
        #[command(flatten)]
        opts: TsaOpts,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        l: usize,
        /// Write the bound trace as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Exhaustive search over all k-subsets.
    Esm {
        #[command(flatten)]
        src: MatrixSource,
        #[arg(long)]
        k: usize,
        /// Largest number of subsets to enumerate.
        #[arg(long, default_value_t = DEFAULT_ESM_BUDGET)]
        budget: u128,
    },
    /// Upper bound from the linear-programming relaxation.
    LpBaseline {
        #[command(flatten)]
        src: MatrixSource,
        #[arg(long)]
        k: usize,
    },
    /// Recoverable sparsity from the exact alpha_l.
    Kmax {
        #[command(flatten)]
        src: MatrixSource,
        #[arg(long, default_value_t = 1)]
        l: usize,
    },
    /// Build a tomography routing matrix and optionally certify it.
    Tomo {
        /// Edge list file, `u v` per line, 1-based.
        #[arg(long, conflicts_with_all = ["complete", "model"])]
        graph: Option<PathBuf>,
        /// Complete graph on this many nodes.
        #[arg(long, conflicts_with = "model")]
        complete: Option<usize>,
        /// 300-node, 400-edge random model.
        #[arg(long)]
        model: bool,
        #[arg(long)]
        paths: usize,
        #[arg(long)]
        walk_len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the routing matrix as CSV.
        #[arg(long)]
        matrix_out: Option<PathBuf>,
        /// Sparsity levels to certify with the tree search (l = 1).
        #[arg(long, value_delimiter = ',')]
        k: Vec<usize>,
        #[command(flatten)]
        opts: TsaOpts,
    },
    /// Run every method on one matrix for a range of k.
    Compare {
        #[command(flatten)]
        src: MatrixSource,
        #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 3, 4])]
        k: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_ESM_BUDGET)]
        esm_budget: u128,
        #[command(flatten)]
        opts: TsaOpts,
    },
}

#[derive(Args, Clone, Copy)]
struct TsaOpts {
    #[arg(long)]
    max_iterations: Option<u64>,
    /// Seconds.
    #[arg(long)]
    max_time: Option<f64>,
    /// Stop once the verdict is settled.
    #[arg(long)]
    certify_only: bool,
}

impl TsaOpts {
    fn limits(self) -> Result<TsaLimits> {
        let max_time = match self.max_time {
            Some(t) if t <= 0.0 || !t.is_finite() => bail!("--max-time must be positive"),
            Some(t) => Some(Duration::from_secs_f64(t)),
            None => None,
        };
        Ok(TsaLimits {
            max_iterations: self.max_iterations,
            max_time,
            certify_only: self.certify_only,
        })
    }
}

#[derive(Serialize)]
struct MatrixInfo {
    rows: usize,
    cols: usize,
    normalized: bool,
    provenance: Provenance,
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    matrix: MatrixInfo,
    results: Vec<ReportRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    details: Option<Value>,
}

impl Report {
    fn new(command: &'static str, a: &SensingMatrix) -> Self {
        Self {
            command,
            matrix: MatrixInfo {
                rows: a.rows(),
                cols: a.cols(),
                normalized: a.is_normalized(),
                provenance: a.provenance().clone(),
            },
            results: Vec::new(),
            details: None,
        }
    }

    fn fails(&self) -> bool {
        self.results.iter().any(|r| r.nsc_decision == NscDecision::Fails)
    }
}

fn parse_gen_spec(spec: &str) -> Result<SensingMatrix> {
    let parts: Vec<&str> = spec.split(':').collect();
    if !(2..=3).contains(&parts.len()) {
        bail!("generator spec must look like gaussian:20x40:7, got {spec:?}");
    }
    let (m, n) = parts[1]
        .split_once('x')
        .with_context(|| format!("bad size {:?}, expected MxN", parts[1]))?;
    let m: usize = m.parse().with_context(|| format!("bad row count {m:?}"))?;
    let n: usize = n.parse().with_context(|| format!("bad column count {n:?}"))?;
    let seed: u64 = match parts.get(2) {
        Some(s) => s.parse().with_context(|| format!("bad seed {s:?}"))?,
        None => 0,
    };
    Ok(match parts[0] {
        "gaussian" => gen_gaussian(m, n, seed)?,
        "fourier" => gen_partial_fourier(m, n, seed)?,
        other => bail!("unknown generator {other:?}"),
    })
}

fn load(src: &MatrixSource) -> Result<SensingMatrix> {
    let a = match (&src.matrix, &src.gen) {
        (Some(path), None) => load_matrix(path, MatrixFormat::from_path(path))
            .with_context(|| format!("loading {}", path.display()))?,
        (None, Some(spec)) => parse_gen_spec(spec)?,
        _ => bail!("give exactly one of --matrix or --gen"),
    };
    Ok(if src.normalize { a.normalize_columns()? } else { a })
}

fn check_kl(k: usize, l: usize) -> Result<()> {
    if l == 0 || k < l {
        bail!("need k >= l >= 1, got k = {k}, l = {l}");
    }
    Ok(())
}

fn esm_row(a: &SensingMatrix, k: usize, budget: u128) -> Result<ReportRow> {
    match esm_alpha(a, k, Some(budget)) {
        Ok(r) => Ok(ReportRow::from(&r.report).with_witness(r.argmax.one_based())),
        Err(e @ nsc_core::Error::BudgetExceeded { .. }) => {
            let est = estimate_esm_cost(a, k, 8, 0)?;
            bail!(
                "{e}; exhaustive search would solve {} LPs over {} subsets, estimated {:.3e} s",
                est.lp_solves,
                est.subsets,
                est.estimated_seconds
            )
        }
        Err(e) => Err(e.into()),
    }
}

fn tsa_row(r: &TsaResult) -> ReportRow {
    let row = ReportRow::from(&r.report());
    match &r.witness {
        Some(w) => row.with_witness(w.subset.one_based()),
        None => row,
    }
}

fn tsa_details(r: &TsaResult) -> Value {
    json!({
        "k": r.k,
        "l": r.l,
        "iterations": r.iterations,
        "nodes_attached": r.nodes_attached,
        "height_k_nodes": r.height_k_nodes,
        "stop_reason": r.stop_reason,
    })
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

fn run(cli: &Cli) -> Result<Option<Report>> {
    let report = match &cli.command {
        Command::Gen { kind, m, n, seed } => {
            let a = match kind {
                GenKind::Gaussian => gen_gaussian(*m, *n, *seed)?,
                GenKind::Fourier => gen_partial_fourier(*m, *n, *seed)?,
            };
            match &cli.out {
                Some(p) => a.save_csv(p)?,
                None => a.write_csv(io::stdout().lock())?,
            }
            return Ok(None);
        }
        Command::Pick { src, k, l, lp } => {
            check_kl(*k, *l)?;
            let a = load(src)?;
            let table = ScoreTable::compute(&a, *l)?;
            let r = if *lp {
                pick_l_upper_bound_lp(&table, *k)?
            } else {
                pick_l_upper_bound(&table, *k)?
            };
            let mut rep = Report::new("pick", &a);
            rep.results.push(ReportRow::from(&r));
            rep
        }
        Command::OptPick { src, k, l, budget } => {
            check_kl(*k, *l)?;
            let a = load(src)?;
            let table = ScoreTable::compute(&a, *l)?;
            let r = optimized_pick_l(&table, *k, *budget)?;
            let mut rep = Report::new("opt-pick", &a);
            rep.results.push(ReportRow::from(&r));
            rep
        }
        Command::Tsa { src, opts, k, l, trace } => {
            check_kl(*k, *l)?;
            let a = load(src)?;
            let r = tsa(&a, *k, *l, opts.limits()?)?;
            if let Some(p) = trace {
                let mut w = create(p)?;
                r.write_trace_csv(&mut w)?;
                w.flush()?;
            }
            let mut rep = Report::new("tsa", &a);
            rep.results.push(tsa_row(&r));
            rep.details = Some(tsa_details(&r));
            rep
        }
        Command::Esm { src, k, budget } => {
            let a = load(src)?;
            let mut rep = Report::new("esm", &a);
            rep.results.push(esm_row(&a, *k, *budget)?);
            rep
        }
        Command::LpBaseline { src, k } => {
            let a = load(src)?;
            let r = lp_baseline_alpha(&a, *k)?;
            let mut rep = Report::new("lp-baseline", &a);
            rep.results.push(ReportRow::from(&r.report));
            rep
        }
        Command::Kmax { src, l } => {
            let a = load(src)?;
            let table = ScoreTable::compute(&a, *l)?;
            let alpha_l = table.max_value();
            let kb = kmax_lower_bound(alpha_l, *l, a.cols())?;
            let mut rep = Report::new("kmax", &a);
            let exact = BoundReport::exact(nsc_core::bounds::Method::Esm, *l, None, alpha_l)
                .with_cost(table.lp_solves(), table.elapsed());
            rep.results.push(ReportRow::from(&exact));
            rep.details = Some(json!({
                "l": l,
                "alpha_l": alpha_l,
                "kmax": kb.k,
                "trivial_null_space": kb.trivial_null_space,
            }));
            rep
        }
        Command::Tomo {
            graph,
            complete,
            model,
            paths,
            walk_len,
            seed,
            matrix_out,
            k,
            opts,
        } => {
            let g = match (graph, complete, model) {
                (Some(p), None, false) => load_edge_list(p)?,
                (None, Some(n), false) => Graph::complete(*n),
                (None, None, true) => Graph::network_model(*seed),
                _ => bail!("give exactly one of --graph, --complete or --model"),
            };
            let inst = build_random_walk_instance(&g, *paths, *walk_len, *seed)?;
            if let Some(p) = matrix_out {
                inst.routing.save_csv(p)?;
            }
            let mut rep = Report::new("tomo", &inst.routing);
            let limits = opts.limits()?;
            let mut runs = Vec::new();
            for &kk in k {
                let r = tsa(&inst.routing, kk, 1, limits)?;
                rep.results.push(tsa_row(&r));
                runs.push(tsa_details(&r));
            }
            let one_based: Vec<Vec<usize>> = inst
                .paths
                .iter()
                .map(|p| p.iter().map(|e| e + 1).collect())
                .collect();
            let edges: Vec<[usize; 2]> = inst.edges.iter().map(|&(u, v)| [u + 1, v + 1]).collect();
            rep.details = Some(json!({
                "num_nodes": inst.num_nodes,
                "edges": edges,
                "paths": one_based,
                "tsa": runs,
            }));
            rep
        }
        Command::Compare {
            src,
            k,
            esm_budget,
            opts,
        } => {
            let a = load(src)?;
            let limits = opts.limits()?;
            let mut rep = Report::new("compare", &a);
            let kmax = k.iter().copied().max().unwrap_or(0);
            if k.is_empty() || k.contains(&0) || kmax > a.cols() {
                bail!("every k must lie in 1..={}", a.cols());
            }
            let t1 = ScoreTable::compute(&a, 1)?;
            let t2 = if a.cols() >= 2 && kmax >= 2 {
                Some(ScoreTable::compute(&a, 2)?)
            } else {
                None
            };
            for &kk in k {
                rep.results.push(ReportRow::from(&pick_l_upper_bound(&t1, kk)?));
                if let (Some(t), true) = (&t2, kk >= 2) {
                    rep.results.push(ReportRow::from(&pick_l_upper_bound(t, kk)?));
                }
                rep.results.push(tsa_row(&tsa(&a, kk, kk.min(2), limits)?));
                match esm_row(&a, kk, *esm_budget) {
                    Ok(r) => rep.results.push(r),
                    Err(e) => log::warn!("skipping exhaustive search at k = {kk}: {e}"),
                }
                rep.results.push(ReportRow::from(&lp_baseline_alpha(&a, kk)?.report));
            }
            rep
        }
    };
    Ok(Some(report))
}

fn method_label(r: &ReportRow) -> String {
    let name = serde_json::to_value(r.method)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default();
    match (name.as_str(), r.l) {
        ("pick_l", Some(l)) => format!("pick{l}"),
        ("optimized_pick_l", Some(l)) => format!("opt_pick{l}"),
        _ => name,
    }
}

fn decision(d: NscDecision) -> &'static str {
    match d {
        NscDecision::Holds => "holds",
        NscDecision::Fails => "fails",
        NscDecision::Inconclusive => "inconclusive",
    }
}

fn shown_value(r: &ReportRow) -> String {
    if r.exact {
        r.display.lower.clone()
    } else if r.lower > 0.0 {
        format!("[{}, {}]", r.display.lower, r.display.upper)
    } else {
        r.display.upper.clone()
    }
}

fn write_csv<W: Write>(rep: &Report, w: &mut W) -> io::Result<()> {
    writeln!(
        w,
        "method,k,l,lower,upper,exact,nsc_decision,lower_shown,upper_shown,lp_solves,elapsed_secs"
    )?;
    for r in &rep.results {
        writeln!(
            w,
            "{},{},{},{:.17e},{:.17e},{},{},{},{},{},{:.6}",
            method_label(r),
            r.k,
            r.l.map(|l| l.to_string()).unwrap_or_default(),
            r.lower,
            r.upper,
            r.exact,
            decision(r.nsc_decision),
            r.display.lower,
            r.display.upper,
            r.lp_solves,
            r.elapsed_secs
        )?;
    }
    Ok(())
}

/// Rows are k, columns are methods, cells the displayed values.
fn write_table<W: Write>(rep: &Report, w: &mut W) -> io::Result<()> {
    writeln!(w, "{} on a {}x{} matrix", rep.command, rep.matrix.rows, rep.matrix.cols)?;
    let mut methods: Vec<String> = Vec::new();
    let mut ks: Vec<usize> = Vec::new();
    for r in &rep.results {
        let m = method_label(r);
        if !methods.contains(&m) {
            methods.push(m);
        }
        if !ks.contains(&r.k) {
            ks.push(r.k);
        }
    }
    let width = methods.iter().map(|m| m.len()).max().unwrap_or(0).max(12);
    write!(w, "{:>4}", "k")?;
    for m in &methods {
        write!(w, "  {m:>width$}")?;
    }
    writeln!(w)?;
    for k in ks {
        write!(w, "{k:>4}")?;
        for m in &methods {
            let cell = rep
                .results
                .iter()
                .find(|r| r.k == k && &method_label(r) == m)
                .map(shown_value)
                .unwrap_or_else(|| "-".into());
            write!(w, "  {cell:>width$}")?;
        }
        writeln!(w)?;
    }
    for r in &rep.results {
        if r.nsc_decision != NscDecision::Inconclusive {
            writeln!(w, "k = {}, {}: NSC {}", r.k, method_label(r), decision(r.nsc_decision))?;
        }
    }
    if let Some(d) = &rep.details {
        if let Some(k) = d.get("kmax") {
            writeln!(w, "kmax = {k}")?;
        }
    }
    Ok(())
}

fn emit(cli: &Cli, rep: &Report) -> Result<()> {
    let mut w: Box<dyn Write> = match &cli.out {
        Some(p) => Box::new(create(p)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match cli.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, rep)?;
            writeln!(w)?;
        }
        Format::Csv => write_csv(rep, &mut w)?,
        Format::Table => write_table(rep, &mut w)?,
    }
    w.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let outcome = run(&cli).and_then(|rep| {
        if let Some(rep) = &rep {
            emit(&cli, rep)?;
        }
        Ok(rep.is_some_and(|r| r.fails()))
    });
    match outcome {
        Ok(true) => ExitCode::from(2),
        Ok(false) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
