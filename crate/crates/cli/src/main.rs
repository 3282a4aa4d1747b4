use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hfactor::collapse::{collapse_full_with, WitnessOrder};
use hfactor::corpus;
use hfactor::density::{density_report, report_record, threshold_descriptor};
use hfactor::diagnostics::{property_report, shearer_check};
use hfactor::factor::{
    count_factors, find_factor, partial_factor, two_phase_factor, Search, SplitMode, TwoPhaseOptions,
    TwoPhaseOutcome, DEFAULT_BUDGET,
};
use hfactor::graph::{parse_graph, write_host, write_pattern, HostGraph, PatternGraph};
use hfactor::random::{sample_dnp, sample_gnp, sample_partitioned, Model};
use hfactor::scalar::format_ratio;
use hfactor::sim::{
    bisect_half_point, curve_csv, estimate_success_prob, metadata, scaling_study, CurveRow, Method, SimConfig,
    DEFAULT_DEPTH,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "hfactor", version, about = "Density analysis, factor search and threshold simulation for H-factors")]
struct Cli {
    /// Master seed for every randomized step
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Node budget of each exact search
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Densities, balance class and threshold of a pattern
    Analyze {
        /// Edge-list file or corpus:<name>
        graph: String,
    },
    /// Run the vertex-collapsing process on a pattern
    Collapse {
        graph: String,
        /// Pick each witness at random (seeded by --seed)
        #[arg(long)]
        random_order: bool,
    },
    /// Sample a random host
    Gen(GenArgs),
    /// Search for an H-factor of a host
    Factor(FactorArgs),
    /// Count the H-factors of a host exactly
    Count { host: String, pattern: String },
    /// Proof diagnostics on a partitioned host
    Diagnose {
        host: String,
        pattern: String,
        /// Edge probability the host was sampled with
        #[arg(long)]
        p: f64,
        /// Also check the entropy inequality over this class
        #[arg(long)]
        shearer: Option<usize>,
    },
    /// Estimate success probabilities, or bisect for the half point
    Simulate(SimulateArgs),
    /// Half points over a list of sizes with a log-log fit
    Scaling(ScalingArgs),
    /// List bundled graphs, or print one
    Corpus { name: Option<String> },
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_parser = parse_model)]
    model: Model,
    /// Pattern whose blowup is sampled (partitioned model)
    #[arg(long)]
    pattern: Option<String>,
    /// Vertex count (gnp, digraph)
    #[arg(long)]
    n: Option<usize>,
    /// Class size (partitioned)
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    p: f64,
}

#[derive(Args)]
struct FactorArgs {
    host: String,
    pattern: String,
    /// Print the number of factors instead of one factor
    #[arg(long, conflicts_with_all = ["partial", "two_phase"])]
    count: bool,
    /// Settle for covering at least (1 - eps) n vertices
    #[arg(long, value_name = "EPS", conflicts_with = "two_phase")]
    partial: Option<f64>,
    /// Two-round construction for non-vertex-balanced patterns
    #[arg(long)]
    two_phase: bool,
    /// Edge split used by --two-phase
    #[arg(long, value_enum, default_value_t = Split::Overlapping)]
    split: Split,
    /// Edge probability assumed by the overlapping split (default: edge density)
    #[arg(long)]
    p: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Split {
    Disjoint,
    Overlapping,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Exact,
    TwoPhase,
}

#[derive(Args)]
struct SimArgs {
    /// Pattern file or corpus:<name>
    #[arg(long)]
    pattern: String,
    #[arg(long, value_parser = parse_model, default_value = "gnp")]
    model: Model,
    #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
    method: MethodArg,
    /// Trials per probe
    #[arg(long, default_value_t = 200)]
    trials: u64,
    /// Bisection steps per size
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    depth: u32,
    /// Write the curve here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Metadata sidecar path (default: <out>.json when --out is given)
    #[arg(long)]
    meta: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: SimArgs,
    /// Host vertex count
    #[arg(long)]
    n: usize,
    /// Edge probabilities to probe; bisects for the half point when omitted
    #[arg(long, value_delimiter = ',')]
    p: Vec<f64>,
}

#[derive(Args)]
struct ScalingArgs {
    #[command(flatten)]
    common: SimArgs,
    /// Increasing host sizes, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    n_list: Vec<usize>,
}

fn parse_model(s: &str) -> Result<Model, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Analyze { graph } => analyze(cli, graph),
        Command::Collapse { graph, random_order } => collapse(cli, graph, *random_order),
        Command::Gen(args) => gen(cli, args),
        Command::Factor(args) => factor(cli, args),
        Command::Count { host, pattern } => count(cli, host, pattern),
        Command::Diagnose {
            host,
            pattern,
            p,
            shearer,
        } => diagnose(cli, host, pattern, *p, *shearer),
        Command::Simulate(args) => simulate(cli, args),
        Command::Scaling(args) => scaling(cli, args),
        Command::Corpus { name } => list_corpus(cli, name.as_deref()),
    }
}

fn read_text(source: &str) -> Result<String> {
    if let Some(name) = source.strip_prefix("corpus:") {
        let entry = corpus::lookup(name).ok_or_else(|| anyhow!("no bundled graph named `{name}`"))?;
        return Ok(write_pattern(&entry.graph));
    }
    fs::read_to_string(source).with_context(|| format!("cannot read {source}"))
}

fn load_pattern(source: &str) -> Result<PatternGraph> {
    if let Some(entry) = source.strip_prefix("corpus:").and_then(corpus::lookup) {
        return Ok(entry.graph);
    }
    let text = read_text(source)?;
    let doc = parse_graph(&text).with_context(|| source.to_string())?;
    doc.to_pattern().with_context(|| source.to_string())
}

fn load_host(source: &str) -> Result<HostGraph> {
    let text = read_text(source)?;
    let doc = parse_graph(&text).with_context(|| source.to_string())?;
    doc.to_host().with_context(|| source.to_string())
}

/// `key=value` lines as two-column CSV.
fn record_csv(record: &str) -> String {
    let mut out = String::from("key,value\n");
    for line in record.lines() {
        let (k, v) = line.split_once('=').unwrap_or((line, ""));
        if v.contains(',') || v.contains(' ') {
            out.push_str(&format!("{k},\"{v}\"\n"));
        } else {
            out.push_str(&format!("{k},{v}\n"));
        }
    }
    out
}

fn to_json(v: &impl serde::Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn analyze(cli: &Cli, source: &str) -> Result<String> {
    let h = load_pattern(source)?;
    let report = density_report::<i64>(&h)?;
    let threshold = threshold_descriptor(&report).ok();
    let record = report_record(&report, threshold.as_ref());
    Ok(match cli.format {
        Format::Json => to_json(&json!({ "report": report, "threshold": threshold }))?,
        Format::Csv => record_csv(&record),
        Format::Text => {
            let mut out = format!(
                "pattern: {} vertices, {} edges\n",
                h.vertex_count(),
                h.edge_count()
            );
            out.push_str(&format!("d(H) = {}\n", format_ratio(&report.d)));
            out.push_str(&format!("m(H) = {}  witness {:?}\n", format_ratio(&report.m), report.m_witness));
            out.push_str(&format!("class {}\n", report.balance_class));
            for (v, w) in report.per_vertex.iter().enumerate() {
                out.push_str(&format!(
                    "  m({}, H) = {}  witness {:?}\n",
                    h.role(v),
                    format_ratio(&w.density),
                    w.vertices
                ));
            }
            match &threshold {
                Some(t) => out.push_str(&format!("threshold {}  [{}]\n", t.formula(), t.status.as_str())),
                None => out.push_str("threshold: none (no edges)\n"),
            }
            out.push('\n');
            out.push_str(&record);
            out
        }
    })
}

fn collapse(cli: &Cli, source: &str, random_order: bool) -> Result<String> {
    let h = load_pattern(source)?;
    let order = if random_order {
        WitnessOrder::Random(cli.seed)
    } else {
        WitnessOrder::Deterministic
    };
    let trace = collapse_full_with::<i64>(&h, order)?;
    let terminal_m = if trace.terminal.pair_count() > 0 {
        Some(format_ratio(&density_report::<i64>(&trace.terminal)?.m))
    } else {
        None
    };
    let terminal_m_text = terminal_m.clone().unwrap_or_else(|| "-".into());
    Ok(match cli.format {
        Format::Json => to_json(&json!({
            "trace": trace,
            "m_terminal": terminal_m,
            "terminal_text": write_pattern(&trace.terminal),
            "h_prime_text": write_pattern(&trace.h_prime),
        }))?,
        Format::Csv => {
            let mut out = String::from("step,witness,vertices_after,edges_after\n");
            for (i, s) in trace.steps.iter().enumerate() {
                let w: Vec<String> = s.witness.iter().map(ToString::to_string).collect();
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    i + 1,
                    w.join(" "),
                    s.result.vertex_count(),
                    s.result.edge_count()
                ));
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for (i, s) in trace.steps.iter().enumerate() {
                out.push_str(&format!(
                    "step {}: contract {:?} -> {} vertices, {} edges\n",
                    i + 1,
                    s.witness,
                    s.result.vertex_count(),
                    s.result.edge_count()
                ));
            }
            if trace.steps.is_empty() {
                out.push_str("no collapse step applies\n");
            }
            if trace.degenerate {
                out.push_str("degenerate: the terminal still has density m(H)\n");
            }
            out.push_str(&format!(
                "certificate: m(H) = {}  m(terminal) = {}\n",
                format_ratio(&trace.m),
                terminal_m_text
            ));
            let clusters: Vec<String> = trace.clusters().iter().map(|c| format!("{c:?}")).collect();
            out.push_str(&format!("clusters: {}\n", clusters.join(" ")));
            out.push_str("# terminal\n");
            out.push_str(&write_pattern(&trace.terminal));
            out.push_str("# collapsed edges (H')\n");
            out.push_str(&write_pattern(&trace.h_prime));
            out
        }
    })
}

fn gen(cli: &Cli, args: &GenArgs) -> Result<String> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| anyhow!("--{flag} is required for this model"));
    let host = match args.model {
        Model::Gnp => sample_gnp(need(args.n, "n")?, args.p, cli.seed)?,
        Model::Digraph => sample_dnp(need(args.n, "n")?, args.p, cli.seed)?,
        Model::Partitioned => {
            let src = args
                .pattern
                .as_deref()
                .ok_or_else(|| anyhow!("--pattern is required for the partitioned model"))?;
            sample_partitioned(&load_pattern(src)?, need(args.r, "r")?, args.p, cli.seed)?
        }
    };
    Ok(match cli.format {
        Format::Text => write_host(&host),
        Format::Csv => {
            let mut out = String::from("u,v,multiplicity\n");
            for ((u, v), m) in host.edges() {
                out.push_str(&format!("{u},{v},{m}\n"));
            }
            out
        }
        Format::Json => to_json(&json!({
            "model": args.model.as_str(),
            "p": args.p,
            "seed": cli.seed,
            "graph": host,
        }))?,
    })
}

fn search_text(label: &str) -> String {
    format!("{label}\n")
}

fn factor(cli: &Cli, args: &FactorArgs) -> Result<String> {
    let g = load_host(&args.host)?;
    let h = load_pattern(&args.pattern)?;
    if args.count {
        return count_output(cli, &g, &h);
    }
    if let Some(eps) = args.partial {
        let r = partial_factor(&g, &h, eps, cli.seed, cli.budget)?;
        return Ok(match cli.format {
            Format::Json => to_json(&r)?,
            _ => {
                let mut out = r.assignment.to_lines(&h);
                out.push_str(&format!(
                    "covered {} of {} (target {}, {})\n",
                    r.assignment.covered_count(),
                    g.vertex_count(),
                    r.target,
                    if r.target_met { "met" } else { "missed" }
                ));
                out
            }
        });
    }
    if args.two_phase {
        let split = match args.split {
            Split::Disjoint => SplitMode::Disjoint,
            Split::Overlapping => SplitMode::Overlapping(args.p),
        };
        let opts = TwoPhaseOptions {
            split,
            ..TwoPhaseOptions::new(cli.seed, cli.budget)
        };
        let out = two_phase_factor(&g, &h, &opts)?;
        return Ok(match (cli.format, &out) {
            (Format::Json, _) => to_json(&out)?,
            (_, TwoPhaseOutcome::Found(f)) => f.to_lines(&h),
            (_, other) => search_text(&other.label()),
        });
    }
    let out = find_factor(&g, &h, cli.budget)?;
    Ok(match (cli.format, &out) {
        (Format::Json, _) => to_json(&out)?,
        (_, Search::Found(f)) => f.to_lines(&h),
        (_, other) => search_text(other.label()),
    })
}

fn count_output(cli: &Cli, g: &HostGraph, h: &PatternGraph) -> Result<String> {
    let phi = count_factors(g, h)?;
    Ok(match cli.format {
        Format::Json => to_json(&json!({ "factors": phi.to_string() }))?,
        Format::Csv => format!("factors\n{phi}\n"),
        Format::Text => format!("{phi}\n"),
    })
}

fn count(cli: &Cli, host: &str, pattern: &str) -> Result<String> {
    count_output(cli, &load_host(host)?, &load_pattern(pattern)?)
}

fn diagnose(cli: &Cli, host: &str, pattern: &str, p: f64, shearer: Option<usize>) -> Result<String> {
    let g = load_host(host)?;
    let h = load_pattern(pattern)?;
    let report = property_report(&g, &h, p)?;
    let check = shearer.map(|c| shearer_check(&g, &h, c)).transpose()?;
    let opt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.6}"));
    let mut record = vec![
        ("phi".to_string(), report.phi.to_string()),
        ("log_phi".to_string(), opt(report.log_phi)),
        ("a_reference".to_string(), format!("{:.6}", report.a_reference)),
        ("a_gap".to_string(), opt(report.a_gap)),
        ("d_p".to_string(), format!("{:.6}", report.d_p)),
        ("d_deviation_max".to_string(), format!("{:.6}", report.d_deviation_max)),
        ("maxr_w".to_string(), opt(report.maxr_w)),
        ("c_sets_checked".to_string(), report.c_sets_checked.to_string()),
        ("c_violations".to_string(), report.c_violations.len().to_string()),
    ];
    if let Some(c) = &check {
        record.push(("shearer.class".into(), c.class.to_string()));
        record.push(("shearer.lhs".into(), format!("{:.9}", c.lhs)));
        record.push(("shearer.rhs".into(), format!("{:.9}", c.rhs)));
        record.push(("shearer.holds".into(), c.holds.to_string()));
    }
    Ok(match cli.format {
        Format::Json => to_json(&json!({ "report": report, "shearer": check }))?,
        Format::Csv => {
            let mut out = String::from("key,value\n");
            for (k, v) in &record {
                out.push_str(&format!("{k},{v}\n"));
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for (k, v) in &record {
                out.push_str(&format!("{k}={v}\n"));
            }
            let degrees: Vec<String> = report.copy_degrees.iter().map(ToString::to_string).collect();
            out.push_str(&format!("copy_degrees={}\n", degrees.join(",")));
            for v in &report.c_violations {
                out.push_str(&format!("c_violation y={:?} max={} median={}\n", v.y, v.max, v.median));
            }
            out
        }
    })
}

fn sim_config(cli: &Cli, args: &SimArgs) -> Result<SimConfig> {
    let pattern = load_pattern(&args.pattern)?;
    Ok(SimConfig {
        model: args.model,
        method: match args.method {
            MethodArg::Exact => Method::Exact,
            MethodArg::TwoPhase => Method::TwoPhase,
        },
        budget: cli.budget,
        ..SimConfig::new(&pattern, args.trials, cli.seed)
    })
}

/// Writes the curve to `--out` (with its sidecar) or returns it for stdout.
fn emit_curve(args: &SimArgs, cfg: &SimConfig, body: String) -> Result<String> {
    let meta = serde_json::to_string_pretty(&metadata(cfg))? + "\n";
    let sidecar = args
        .meta
        .clone()
        .or_else(|| args.out.as_ref().map(|o| sidecar_path(o)));
    if let Some(path) = &sidecar {
        fs::write(path, meta).with_context(|| format!("cannot write {}", path.display()))?;
    }
    match &args.out {
        Some(path) => {
            fs::write(path, body).with_context(|| format!("cannot write {}", path.display()))?;
            Ok(String::new())
        }
        None => Ok(body),
    }
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

fn simulate(cli: &Cli, args: &SimulateArgs) -> Result<String> {
    let cfg = sim_config(cli, &args.common)?;
    let (rows, half) = if args.p.is_empty() {
        let half = bisect_half_point(&cfg, args.n, args.common.depth)?;
        (half.rows.clone(), Some(half))
    } else {
        let rows = args
            .p
            .iter()
            .map(|&p| estimate_success_prob(&cfg, args.n, p))
            .collect::<Result<Vec<CurveRow>, _>>()?;
        (rows, None)
    };
    let body = match cli.format {
        Format::Json => to_json(&json!({ "metadata": metadata(&cfg), "rows": rows, "half_point": half }))?,
        Format::Csv | Format::Text => curve_csv(&rows),
    };
    emit_curve(&args.common, &cfg, body)
}

fn scaling(cli: &Cli, args: &ScalingArgs) -> Result<String> {
    if args.n_list.windows(2).any(|w| w[0] >= w[1]) {
        bail!("--n-list must be increasing");
    }
    let cfg = sim_config(cli, &args.common)?;
    let study = scaling_study(&cfg, &args.n_list, args.common.depth)?;
    let body = match cli.format {
        Format::Json => to_json(&json!({ "metadata": metadata(&cfg), "study": study }))?,
        Format::Csv => curve_csv(study.rows()),
        Format::Text => {
            let mut out = String::from("n,p50,lo,hi,flags\n");
            for p in &study.points {
                let flag = if p.non_bracketing {
                    "non_bracketing"
                } else if p.lower_bound {
                    "lower_bound"
                } else {
                    "-"
                };
                out.push_str(&format!("{},{:.6},{:.6},{:.6},{flag}\n", p.n, p.p50, p.lo, p.hi));
            }
            match &study.fit {
                Some(f) => out.push_str(&format!("slope={:.6} intercept={:.6}\n", f.slope, f.intercept)),
                None => out.push_str("slope=-\n"),
            }
            if let Some(formula) = &study.formula {
                let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(",");
                out.push_str(&format!("reference={formula}\n"));
                out.push_str(&format!("ratio_with_log={}\n", fmt(&study.ratio_with_log)));
                out.push_str(&format!("ratio_without_log={}\n", fmt(&study.ratio_without_log)));
            }
            out
        }
    };
    emit_curve(&args.common, &cfg, body)
}

fn list_corpus(cli: &Cli, name: Option<&str>) -> Result<String> {
    if let Some(name) = name {
        let entry = corpus::lookup(name).ok_or_else(|| anyhow!("no bundled graph named `{name}`"))?;
        return Ok(match cli.format {
            Format::Json => to_json(&json!({
                "name": entry.name,
                "provenance": entry.provenance,
                "digest": entry.digest,
                "graph": entry.graph,
            }))?,
            _ => format!("# {}: {}\n{}", entry.name, entry.provenance, write_pattern(&entry.graph)),
        });
    }
    let entries = corpus::entries();
    Ok(match cli.format {
        Format::Json => to_json(
            &entries
                .iter()
                .map(|e| json!({ "name": e.name, "provenance": e.provenance, "digest": e.digest }))
                .collect::<Vec<_>>(),
        )?,
        Format::Csv => {
            let mut out = String::from("name,vertices,edges,digest\n");
            for e in &entries {
                out.push_str(&format!(
                    "{},{},{},\"{}\"\n",
                    e.name,
                    e.graph.vertex_count(),
                    e.graph.edge_count(),
                    e.digest
                ));
            }
            out
        }
        Format::Text => {
            let width = entries.iter().map(|e| e.name.len()).max().unwrap_or(0);
            entries
                .iter()
                .map(|e| format!("{:width$}  {}\n", e.name, e.provenance))
                .collect()
        }
    })
}
