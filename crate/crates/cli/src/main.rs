//! Command-line front end: build formulations, run verification suites,
//! report sizes, import/export JSON artifacts.
//!
//! Exit codes: 0 on success / all claims verified, 1 when a claim is
//! refuted, 2 on usage, parity, or input errors.

use clap::{Args, Parser, Subcommand};
use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use xfkit_core::error::Error as CoreError;
use xfkit_core::ext::ExtendedFormulation;
use xfkit_core::graph::EdgeSpace;
use xfkit_core::num::{parse_rat, Rat};

mod suite;

#[derive(Parser)]
#[command(name = "xfkit")]
#[command(about = "Exact construction and verification of extended formulations for T-join and T-cut polyhedra")]
#[command(version)]
struct Cli {
    /// Override the double-description dimension cap (also: XFKIT_DIM_CAP)
    #[arg(long, global = true)]
    dim_cap: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a formulation and write it as a JSON artifact
    Build(BuildArgs),
    /// Run a verification suite or check an artifact against a target
    Verify(VerifyArgs),
    /// Sweep instance sizes and tabulate inequality-row counts
    ReportSizes(ReportSizesArgs),
    /// Write a named polyhedron as a JSON artifact
    Export(ExportArgs),
    /// Summarize a JSON artifact
    Inspect { file: PathBuf },
}

#[derive(Args)]
struct BuildArgs {
    /// tjoin-flow-piece | tjoin-dominant | tcut-dominant | ve-radial-cone |
    /// nonvertex-radial-cone | main-theorem-face | balas | martin |
    /// radial-cone-lift
    #[arg(long)]
    kind: String,
    #[arg(long)]
    n: Option<usize>,
    /// Terminals: comma-separated node list, or "all"
    #[arg(long)]
    t: Option<String>,
    /// Piece sources S (for tjoin-flow-piece)
    #[arg(long)]
    s: Option<String>,
    /// Join edges, e.g. "12,34" or "1-2,3-4"
    #[arg(long)]
    join: Option<String>,
    /// Rational point, e.g. "1,0,0,0,0,1" or "1/2,1/2,0,0,1/2,1/2"
    #[arg(long)]
    point: Option<String>,
    /// Node subset U1 (for main-theorem-face)
    #[arg(long)]
    u1: Option<String>,
    /// Threshold for the dual extension
    #[arg(long)]
    gamma: Option<String>,
    /// Input artifact(s) for balas / martin / radial-cone-lift
    #[arg(long)]
    input: Vec<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name; see `verify --suite list`
    #[arg(long)]
    suite: Option<String>,
    /// Artifact to verify instead of a suite
    #[arg(long)]
    extension: Option<PathBuf>,
    /// Target for --extension: tjoin-dominant | tcut-dominant
    #[arg(long)]
    target: Option<String>,
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long)]
    t: Option<String>,
    #[arg(long)]
    u1: Option<String>,
    #[arg(long)]
    join: Option<String>,
    /// Worker threads for independent claims
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Write the full JSON report here
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct ReportSizesArgs {
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    #[arg(long, default_value_t = 6)]
    n_max: usize,
    /// Write CSV here (text table goes to stdout either way)
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    /// tjoin-dominant-h | tcut-dominant-h | tjoin-dominant-v | tcut-dominant-v
    #[arg(long)]
    what: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    t: String,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(cap) = cli.dim_cap {
        // Must happen before any conversion reads the cap.
        std::env::set_var(xfkit_core::dd::DIM_CAP_ENV, cap.to_string());
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

#[derive(Debug)]
enum CliError {
    Core(CoreError),
    Usage(String),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn run(cmd: Command) -> CliResult<ExitCode> {
    match cmd {
        Command::Build(args) => cmd_build(args),
        Command::Verify(args) => cmd_verify(args),
        Command::ReportSizes(args) => cmd_report_sizes(args),
        Command::Export(args) => cmd_export(args),
        Command::Inspect { file } => cmd_inspect(file),
    }
}

fn parse_nodes(s: &str, n: usize) -> CliResult<Vec<usize>> {
    if s.trim() == "all" {
        return Ok((1..=n).collect());
    }
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("invalid node {tok:?}")))
        })
        .collect()
}

fn parse_edges(space: &EdgeSpace, s: &str) -> CliResult<Vec<usize>> {
    let mut edges = Vec::new();
    for tok in s.split(',') {
        let tok = tok.trim();
        let (u, v) = if let Some((a, b)) = tok.split_once('-') {
            (
                a.parse::<usize>().map_err(|_| CliError::Usage(format!("invalid edge {tok:?}")))?,
                b.parse::<usize>().map_err(|_| CliError::Usage(format!("invalid edge {tok:?}")))?,
            )
        } else if tok.len() == 2 && tok.chars().all(|c| c.is_ascii_digit()) {
            (tok[..1].parse().unwrap(), tok[1..].parse().unwrap())
        } else {
            return Err(CliError::Usage(format!(
                "invalid edge {tok:?}; use u-v (or two digits like 12)"
            )));
        };
        edges.push(space.edge_index(u, v)?);
    }
    Ok(edges)
}

fn parse_point(s: &str) -> CliResult<Vec<Rat>> {
    s.split(',')
        .map(|tok| parse_rat(tok).map_err(CliError::Usage))
        .collect()
}

fn require<T>(opt: Option<T>, what: &str) -> CliResult<T> {
    opt.ok_or_else(|| CliError::Usage(format!("missing required option {what}")))
}

fn space_from(n: Option<usize>, t: &Option<String>) -> CliResult<EdgeSpace> {
    let n = require(n, "--n")?;
    let t_str = t.clone().unwrap_or_else(|| "all".to_string());
    let terminals = parse_nodes(&t_str, n)?;
    Ok(EdgeSpace::new(n, terminals)?)
}

fn load_formulation(path: &PathBuf) -> CliResult<ExtendedFormulation> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Ok(xfkit_core::json::formulation_from_json(&value)?)
}

fn write_json(path: &PathBuf, value: &serde_json::Value) -> CliResult<()> {
    std::fs::write(path, serde_json::to_string_pretty(value).expect("serializable") + "\n")?;
    Ok(())
}

fn cmd_build(args: BuildArgs) -> CliResult<ExitCode> {
    let ext = match args.kind.as_str() {
        "tjoin-flow-piece" => {
            let space = space_from(args.n, &args.t)?;
            let sources = parse_nodes(&require(args.s.clone(), "--s")?, space.n())?;
            let sel = xfkit_core::ext::PieceSelector::new(&space, sources)?;
            xfkit_core::ext::tjoin_flow_piece(&space, &sel)?
        }
        "tjoin-dominant" => {
            let space = space_from(args.n, &args.t)?;
            xfkit_core::ext::tjoin_dominant_extension(&space)?
        }
        "tcut-dominant" => {
            let space = space_from(args.n, &args.t)?;
            xfkit_core::ext::tcut_dominant_extension(&space)?
        }
        "ve-radial-cone" => {
            let space = space_from(args.n, &args.t)?;
            let edges = parse_edges(&space, &require(args.join.clone(), "--join")?)?;
            let join =
                xfkit_core::graph::EdgeSubset::new(edges, xfkit_core::graph::SubsetKind::TJoin);
            xfkit_core::ext::ve_radial_cone_extension(&space, &join)?
        }
        "nonvertex-radial-cone" => {
            let space = space_from(args.n, &args.t)?;
            let point = parse_point(&require(args.point.clone(), "--point")?)?;
            xfkit_core::ext::nonvertex_radial_cone_extension(&space, &point)?
        }
        "main-theorem-face" => {
            let space = space_from(args.n, &args.t)?;
            let u1: BTreeSet<usize> =
                parse_nodes(&require(args.u1.clone(), "--u1")?, space.n())?.into_iter().collect();
            let face = xfkit_core::ext::face_factorization(&space, &u1)?;
            let value = serde_json::json!({
                "q": xfkit_core::json::polyhedron_to_json(&face.q),
                "q_tilde": xfkit_core::json::polyhedron_to_json(&face.q_tilde),
                "blocks": face.decomposition.blocks.iter().map(|b| serde_json::json!({
                    "label": b.label,
                    "global_edges": b.global_edges,
                    "h": xfkit_core::json::polyhedron_to_json(&b.h),
                })).collect::<Vec<_>>(),
                "t1": face.t1,
                "t2": face.t2,
            });
            write_json(&args.out, &value)?;
            println!(
                "face system: {} rows; factorized: {} rows ({})",
                face.q.num_rows(),
                face.q_tilde.num_rows(),
                xfkit_core::report::COUNT_LABEL
            );
            return Ok(ExitCode::SUCCESS);
        }
        "balas" => {
            if args.input.is_empty() {
                return Err(CliError::Usage("balas needs at least one --input".to_string()));
            }
            let pieces: Vec<ExtendedFormulation> =
                args.input.iter().map(load_formulation).collect::<CliResult<_>>()?;
            let union = xfkit_core::ext::balas_union(&pieces, None)?;
            if let xfkit_core::ext::HullStatus::ClosureOnly { reason } = &union.hull {
                println!("note: closure semantics, equality not certified ({reason})");
            }
            union.formulation
        }
        "martin" => {
            let input = args
                .input
                .first()
                .ok_or_else(|| CliError::Usage("martin needs --input".to_string()))?;
            let gamma = parse_rat(&args.gamma.clone().unwrap_or_else(|| "1".to_string()))
                .map_err(CliError::Usage)?;
            let q = load_formulation(input)?;
            xfkit_core::ext::martin_dual_extension(&q, &gamma)?
        }
        "radial-cone-lift" => {
            let input = args
                .input
                .first()
                .ok_or_else(|| CliError::Usage("radial-cone-lift needs --input".to_string()))?;
            let point = parse_point(&require(args.point.clone(), "--point")?)?;
            let ext = load_formulation(input)?;
            xfkit_core::ext::radial_cone_extension(&ext, &point)?
        }
        other => {
            return Err(CliError::Usage(format!("unknown build kind {other:?}")));
        }
    };
    write_json(&args.out, &xfkit_core::json::formulation_to_json(&ext))?;
    println!(
        "size {} ({}); lifted dimension {}; projects to dimension {}",
        ext.size(),
        xfkit_core::report::COUNT_LABEL,
        ext.lifted_dim(),
        ext.target_dim()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> CliResult<ExitCode> {
    let config_echo = format!(
        "suite={:?} extension={:?} target={:?} n={} t={:?} u1={:?} join={:?} workers={} dim_cap={}",
        args.suite,
        args.extension.as_ref().map(|p| p.display().to_string()),
        args.target,
        args.n,
        args.t,
        args.u1,
        args.join,
        args.workers,
        xfkit_core::dd::effective_dim_cap(),
    );
    let claims = if let Some(path) = &args.extension {
        let target = require(args.target.clone(), "--target")?;
        let ext = load_formulation(path)?;
        suite::artifact_claims(ext, &target, args.n, &args.t)?
    } else {
        let name = require(args.suite.clone(), "--suite (or --extension)")?;
        if name == "list" {
            for s in suite::SUITE_NAMES {
                println!("{s}");
            }
            return Ok(ExitCode::SUCCESS);
        }
        suite::build_suite(&name, args.n, &args.t, &args.u1, &args.join)?
    };

    println!("# config: {config_echo}");
    let reports = suite::run_claims(claims, args.workers);
    let mut all_ok = true;
    let mut json_reports = Vec::new();
    for r in &reports {
        print!("{}", xfkit_core::json::report_to_text(r));
        if r.status == xfkit_core::verify::Status::Refuted {
            all_ok = false;
        }
        json_reports.push(xfkit_core::json::report_to_json(r));
    }
    if let Some(path) = &args.report {
        let doc = serde_json::json!({
            "config": config_echo,
            "reports": json_reports,
        });
        write_json(path, &doc)?;
    }
    println!(
        "{} claims, {} refuted",
        reports.len(),
        reports.iter().filter(|r| r.status == xfkit_core::verify::Status::Refuted).count()
    );
    Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_report_sizes(args: ReportSizesArgs) -> CliResult<ExitCode> {
    let rows = xfkit_core::report::size_sweep(args.n_min, args.n_max)?;
    print!("{}", xfkit_core::report::sweep_to_text(&rows));
    if let Some(path) = &args.csv {
        std::fs::write(path, xfkit_core::report::sweep_to_csv(&rows))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_export(args: ExportArgs) -> CliResult<ExitCode> {
    let space = space_from(Some(args.n), &Some(args.t.clone()))?;
    let value = match args.what.as_str() {
        "tjoin-dominant-h" => {
            xfkit_core::json::polyhedron_to_json(&xfkit_core::poly::tjoin_dominant_h(&space)?)
        }
        "tcut-dominant-h" => {
            xfkit_core::json::polyhedron_to_json(&xfkit_core::poly::tcut_dominant_h(&space)?)
        }
        "tjoin-dominant-v" => {
            xfkit_core::json::vpolyhedron_to_json(&xfkit_core::verify::tjoin_dominant_v(&space)?)
        }
        "tcut-dominant-v" => {
            xfkit_core::json::vpolyhedron_to_json(&xfkit_core::verify::tcut_dominant_v(&space)?)
        }
        other => return Err(CliError::Usage(format!("unknown export target {other:?}"))),
    };
    write_json(&args.out, &value)?;
    println!("wrote {}", args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_inspect(file: PathBuf) -> CliResult<ExitCode> {
    let text = std::fs::read_to_string(&file)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))?;
    if value.get("projection").is_some() {
        let ext = xfkit_core::json::formulation_from_json(&value)?;
        println!(
            "formulation: {} inequality rows, {} equality rows, lifted dimension {}, target dimension {}",
            ext.lifted().ineqs().len(),
            ext.lifted().eqs().len(),
            ext.lifted_dim(),
            ext.target_dim()
        );
        for b in ext.blocks() {
            println!("  block {:<12} start {:>4} len {:>4}", b.label, b.start, b.len);
        }
    } else if value.get("vertices").is_some() {
        let p = xfkit_core::json::vpolyhedron_from_json(&value)?;
        println!(
            "generators: dimension {}, {} vertices, {} rays",
            p.dim(),
            p.vertices().len(),
            p.rays().len()
        );
    } else {
        let p = xfkit_core::json::polyhedron_from_json(&value)?;
        println!(
            "polyhedron: dimension {}, {} inequality rows, {} equality rows",
            p.dim(),
            p.ineqs().len(),
            p.eqs().len()
        );
    }
    Ok(ExitCode::SUCCESS)
}
