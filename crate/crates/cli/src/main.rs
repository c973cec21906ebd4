use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use oometrics::evolution::{
    churn_compare, churn_record, module_matrix, yw_rank, Baseline, ChurnComparison, ClassEvolution,
};
use oometrics::model::SystemModel;
use oometrics::report::{
    analyze_facts, analyze_sources, build_report, emit_kiviat_svg, emit_scatter, load_facts, load_history,
    method_points, render_text, Analysis, Config,
};
use oometrics::Error;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "oometrics",
    version,
    about = "Object-oriented metrics and quality reports for Java code"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full report: class metrics, quality criteria, system factors
    Analyze(AnalyzeArgs),
    /// Kiviat diagrams as SVG
    Kiviat(KiviatArgs),
    /// Per-method v(G)/ev(G) scatter data as CSV
    Scatter(ScatterArgs),
    /// Method-count evolution over a history of facts files
    Evolve(EvolveArgs),
    /// Compare two builds by relative complexity against a baseline
    Compare(CompareArgs),
}

#[derive(Args, Debug)]
struct Input {
    /// Java source files or directories
    paths: Vec<PathBuf>,
    /// Read the system from a facts file instead of sources
    #[arg(long, conflicts_with = "paths")]
    facts: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Text => "txt",
        }
    }
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: Input,
    /// Reference system for QMOOD normalization; overrides the config file
    #[arg(long)]
    baseline: Option<PathBuf>,
    /// Directory of facts files, one per version
    #[arg(long)]
    history: Option<PathBuf>,
    /// Write report.json or report.txt here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct KiviatArgs {
    #[command(flatten)]
    input: Input,
    /// Only this class; printed to stdout when --out is absent
    #[arg(long)]
    class: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ScatterArgs {
    #[command(flatten)]
    input: Input,
    /// Write scatter.csv here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EvolveArgs {
    #[arg(long)]
    history: PathBuf,
    /// First version, 1-based
    #[arg(long, default_value_t = 1)]
    from: usize,
    /// Last version; defaults to the newest
    #[arg(long)]
    to: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct CompareArgs {
    /// Baseline build: facts file or source directory
    #[arg(long)]
    baseline: PathBuf,
    earlier: PathBuf,
    later: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn load_config(path: Option<&Path>) -> anyhow::Result<Config> {
    match path {
        Some(p) => Ok(Config::load(p)?),
        None => Ok(Config::default()),
    }
}

fn load_input(input: &Input) -> anyhow::Result<Analysis> {
    let a = match &input.facts {
        Some(f) => analyze_facts(f)?,
        None if input.paths.is_empty() => return Err(Error::NoInput.into()),
        None => analyze_sources(&input.paths)?,
    };
    for e in &a.parse_errors {
        eprintln!("warning: {}: {}", e.path, e.message);
    }
    Ok(a)
}

/// A facts file if the path ends in .json, otherwise Java sources.
fn load_system(path: &Path) -> anyhow::Result<SystemModel> {
    if path.extension().is_some_and(|e| e == "json") {
        Ok(load_facts(path)?)
    } else {
        Ok(analyze_sources(&[path.to_path_buf()])?.model)
    }
}

fn emit(out: Option<&Path>, file: &str, content: &str) -> anyhow::Result<()> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let path = dir.join(file);
            fs::write(&path, content).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

/// Returns whether the result is partial.
fn analyze(args: &AnalyzeArgs) -> anyhow::Result<bool> {
    let mut cfg = load_config(args.input.config.as_deref())?;
    if let Some(b) = &args.baseline {
        cfg.qmood_baseline = Some(b.clone());
    }
    let analysis = load_input(&args.input)?;
    let baseline = cfg.qmood_baseline.as_deref().map(load_system).transpose()?;
    let history = args.history.as_deref().map(load_history).transpose()?;
    let report = build_report(&analysis, &cfg, baseline.as_ref(), history.as_ref())?;
    match args.format {
        Format::Json => emit(args.out.as_deref(), "report.json", &(report.to_json() + "\n"))?,
        Format::Text => emit(args.out.as_deref(), "report.txt", &render_text(&report))?,
    }
    Ok(report.partial)
}

fn file_stem(class: &str) -> String {
    class
        .chars()
        .map(|c| {
            if c.is_alphanumeric() || c == '.' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn kiviat(args: &KiviatArgs) -> anyhow::Result<bool> {
    let cfg = load_config(args.input.config.as_deref())?;
    let analysis = load_input(&args.input)?;
    let report = build_report(&analysis, &cfg, None, None)?;
    let classes: Vec<_> = match &args.class {
        Some(name) => {
            let c = report.classes.iter().find(|c| &c.record.class == name);
            vec![c.ok_or_else(|| Error::UnknownClass(name.clone()))?]
        }
        None if args.out.is_none() => bail!("--out is required unless --class is given"),
        None => report.classes.iter().collect(),
    };
    for c in classes {
        let svg = emit_kiviat_svg(&c.kiviat, &c.record.class)?;
        emit(
            args.out.as_deref(),
            &format!("{}.svg", file_stem(&c.record.class)),
            &svg,
        )?;
    }
    Ok(report.partial)
}

fn scatter(args: &ScatterArgs) -> anyhow::Result<bool> {
    let cfg = load_config(args.input.config.as_deref())?;
    let analysis = load_input(&args.input)?;
    let out = emit_scatter(&method_points(&analysis.model), &cfg.ranges.method);
    emit(args.out.as_deref(), "scatter.csv", &out.csv)?;
    let total: usize = out.counts.values().sum();
    let mut summary = String::new();
    for (q, n) in &out.counts {
        let pct = if total == 0 {
            0.0
        } else {
            100.0 * *n as f64 / total as f64
        };
        let _ = writeln!(summary, "quadrant {:<4} {n:>6} {pct:>6.1}%  {}", q.label(), q.meaning());
    }
    // keep stdout pure CSV when it carries the data
    if args.out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    Ok(!analysis.parse_errors.is_empty())
}

#[derive(Serialize)]
struct EvolveOutput {
    versions: Vec<String>,
    from: usize,
    to: usize,
    classes: Vec<ClassEvolution>,
}

fn evolve(args: &EvolveArgs) -> anyhow::Result<bool> {
    let h = load_history(&args.history)?;
    let to = args.to.unwrap_or(h.len());
    let out = EvolveOutput {
        versions: h.version_ids().map(str::to_string).collect(),
        from: args.from,
        to,
        classes: yw_rank(&h, args.from, to)?,
    };
    let text = match args.format {
        Format::Json => json(&out),
        Format::Text => {
            let mut s = format!("versions {} to {} of {}\n", out.from, out.to, out.versions.join(" -> "));
            let _ = writeln!(s, "{:<48} {:>5} {:>9} {:>9}", "class", "ENOM", "LENOM", "EENOM");
            for c in &out.classes {
                let _ = writeln!(s, "{:<48} {:>5} {:>9.3} {:>9.1}", c.class, c.enom, c.lenom, c.eenom);
            }
            s
        }
    };
    emit(args.out.as_deref(), &format!("evolution.{}", args.format.ext()), &text)?;
    Ok(false)
}

#[derive(Serialize)]
struct CompareOutput {
    baseline_id: String,
    columns: Vec<String>,
    comparison: ChurnComparison,
}

fn compare(args: &CompareArgs) -> anyhow::Result<bool> {
    let cfg = load_config(args.config.as_deref())?;
    let matrix = |p: &Path| -> anyhow::Result<_> { Ok(module_matrix(&load_system(p)?, &cfg.churn_columns)?) };
    let baseline = Baseline::fit(&matrix(&args.baseline)?)?;
    let earlier = churn_record(&matrix(&args.earlier)?, &baseline)?;
    let later = churn_record(&matrix(&args.later)?, &baseline)?;
    let out = CompareOutput {
        baseline_id: baseline.id.clone(),
        columns: baseline.columns.clone(),
        comparison: churn_compare(&earlier, &later)?,
    };
    let text = match args.format {
        Format::Json => json(&out),
        Format::Text => {
            let c = &out.comparison;
            let mut s = format!("baseline {} over {}\n", out.baseline_id, out.columns.join(", "));
            let _ = writeln!(
                s,
                "R1 (earlier) {:.3}\nR2 (later)   {:.3}\nverdict      {:?}",
                c.r1, c.r2, c.verdict
            );
            let _ = writeln!(s, "removed: {}", c.ma.join(" "));
            let _ = writeln!(s, "added:   {}", c.mb.join(" "));
            s
        }
    };
    emit(args.out.as_deref(), &format!("compare.{}", args.format.ext()), &text)?;
    Ok(false)
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Syntax { .. } | Error::Encoding(_) | Error::UnbalancedBlock(_)) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Kiviat(a) => kiviat(a),
        Command::Scatter(a) => scatter(a),
        Command::Evolve(a) => evolve(a),
        Command::Compare(a) => compare(a),
    };
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
