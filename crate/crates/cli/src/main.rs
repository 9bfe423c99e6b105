use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use brieskorn::corpus::{render_table, run_corpus};
use brieskorn::report::{analyze, RunConfig};
use clap::{Args, Parser, Subcommand};

/// Fiber invariants of a polynomial map C^2 -> C from its algebraic
/// Brieskorn module.
///
/// Exit status: 0 ok, 1 identity or golden failure, 2 input error,
/// 3 resource bound exceeded.
#[derive(Parser, Debug)]
#[command(name = "brieskorn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analyze one polynomial.
    Analyze(AnalyzeArgs),
    /// Run the bundled examples against their golden expectations.
    Corpus {
        /// Only fixtures whose name contains this string.
        filter: Option<String>,
    },
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// The polynomial, e.g. "y^2 + x^3 - 3*x".
    #[arg(required_unless_present = "file")]
    poly: Option<String>,
    /// Read the polynomial from a file instead.
    #[arg(long, conflicts_with = "poly")]
    file: Option<PathBuf>,
    /// Variable names.
    #[arg(long, value_delimiter = ',', default_value = "x,y")]
    vars: Vec<String>,
    /// Extra rational value to probe (repeatable).
    #[arg(long = "probe", allow_hyphen_values = true)]
    probes: Vec<String>,
    /// Largest ambient degree of the truncation.
    #[arg(long)]
    max_degree: Option<usize>,
    /// First ambient degree of the truncation.
    #[arg(long)]
    start_degree: Option<usize>,
    /// Plateau window.
    #[arg(long)]
    plateau: Option<usize>,
    /// Extra generator degrees above the ambient degree.
    #[arg(long)]
    cap_slack: Option<usize>,
    /// Largest Picard-Fuchs order tried.
    #[arg(long)]
    pf_order: Option<usize>,
    /// Largest Picard-Fuchs coefficient degree tried.
    #[arg(long)]
    pf_degree: Option<usize>,
    /// Form whose Picard-Fuchs operator is derived (repeatable; default 1).
    #[arg(long = "form")]
    forms: Vec<String>,
    /// Do not try extra forms when the atypical scan comes up short.
    #[arg(long)]
    no_adaptive: bool,
    /// Depth of the codimension probe of Dt^-i G^(0).
    #[arg(long)]
    depth: Option<usize>,
    /// Non-unipotent part of the vanishing cycles at infinity, as VALUE=DIM
    /// (repeatable).
    #[arg(long = "nu-ne1", allow_hyphen_values = true)]
    nu_ne1: Vec<String>,
    /// Seed for the regular-value probes.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the JSON report here ("-" for stdout).
    #[arg(long)]
    json: Option<PathBuf>,
    /// Print the text report (default when --json is absent).
    #[arg(long)]
    text: bool,
}

fn config_from(args: &AnalyzeArgs) -> Result<RunConfig, String> {
    let polynomial = match (&args.poly, &args.file) {
        (Some(p), _) => p.clone(),
        (None, Some(path)) => fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?
            .trim()
            .to_string(),
        (None, None) => return Err("no polynomial given".into()),
    };
    let mut c = RunConfig::for_polynomial(&polynomial);
    c.vars = args.vars.clone();
    c.probes = args.probes.clone();
    if args.max_degree.is_some() {
        c.truncation.d_max = args.max_degree;
    }
    if args.start_degree.is_some() {
        c.truncation.d_start = args.start_degree;
    }
    if let Some(w) = args.plateau {
        c.truncation.window = w;
    }
    if let Some(s) = args.cap_slack {
        c.truncation.cap_slack = s;
        c.pf.cap_slack = s;
    }
    if let Some(k) = args.pf_order {
        c.pf.max_order = k;
    }
    if let Some(k) = args.pf_degree {
        c.pf.max_coeff_degree = k;
    }
    if !args.forms.is_empty() {
        c.forms = args.forms.clone();
    }
    c.adaptive_forms = !args.no_adaptive;
    if let Some(d) = args.depth {
        c.depth = d;
    }
    if let Some(s) = args.seed {
        c.seed = s;
    }
    for entry in &args.nu_ne1 {
        let (value, dim) = entry
            .split_once('=')
            .ok_or_else(|| format!("expected VALUE=DIM, got `{entry}`"))?;
        let dim: i64 = dim.trim().parse().map_err(|_| format!("bad dimension in `{entry}`"))?;
        c.non_unipotent.insert(value.trim().to_string(), dim);
    }
    Ok(c)
}

fn run_analyze(args: &AnalyzeArgs) -> ExitCode {
    let config = match config_from(args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let doc = match analyze(&config) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if let Some(path) = &args.json {
        let json = doc.to_json();
        if path.as_os_str() == "-" {
            print!("{json}");
        } else if let Err(e) = fs::write(path, json) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if args.text || args.json.is_none() {
        print!("{}", doc.to_text());
    }
    if doc.passed() {
        ExitCode::SUCCESS
    } else {
        eprintln!("error: {} identities failed", doc.failed_identities().len());
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Analyze(args) => run_analyze(args),
        Command::Corpus { filter } => {
            let outcomes = run_corpus(filter.as_deref());
            print!("{}", render_table(&outcomes));
            if outcomes.iter().all(|o| o.passed()) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
