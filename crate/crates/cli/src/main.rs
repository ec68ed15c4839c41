use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use shiftkit::conversion::{convert_to_shift_enabled, DescriptionMode, PerturbationPolicy, SparsityPattern};
use shiftkit::exact::RationalMatrix;
use shiftkit::io::dot::export_dot;
use shiftkit::io::report::{
    AnalysisReportDocument, CommutationSection, ConversionSection, LocalitySection, PatternSearchSection,
    RepresentabilitySection, ShiftSection,
};
use shiftkit::io::{
    build_shift, digest, parse_graph, parse_matrix, parse_polynomial, parse_values, read_text, InputFormat, ShiftKind,
};
use shiftkit::locality::{apply_filter_locally, density, GraphSignal};
use shiftkit::pattern::{exists_shift_enabled_with_pattern, SearchOutcome};
use shiftkit::real::RealMatrix;
use shiftkit::reproduction::verify_all;
use shiftkit::shift::{commutes, is_shift_enabled, represent_as_polynomial};
use shiftkit::spectral::{symm_eig, ToleranceConfig, TOLERANCE_PROFILE_ENV};
use shiftkit::Error;

#[derive(Parser)]
#[command(name = "shiftkit", version, about = "Exact analysis of graph shift operators and shift-invariant filters")]
struct Cli {
    /// Exit with status 1 when the analysis verdict is negative.
    #[arg(long, global = true)]
    strict_exit: bool,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Tolerance profile; overrides the environment variable.
    #[arg(long, global = true, value_parser = ["default", "tight", "loose"])]
    profile: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphArgs {
    graph: PathBuf,
    /// Input format; inferred from the extension when omitted.
    #[arg(long)]
    format: Option<InputFormat>,
    /// Which shift to build from the input.
    #[arg(long, default_value = "adjacency")]
    kind: ShiftKind,
}

#[derive(Subcommand)]
enum Command {
    /// Shift-enabled report with both polynomials.
    Analyze(GraphArgs),
    /// Does the filter commute with the shift?
    Invariance {
        #[command(flatten)]
        graph: GraphArgs,
        filter: PathBuf,
    },
    /// Is the filter a polynomial in the shift?
    Represent {
        #[command(flatten)]
        graph: GraphArgs,
        filter: PathBuf,
    },
    /// Perturb eigenvalues into a shift-enabled matrix and audit its structure.
    Convert {
        #[command(flatten)]
        graph: GraphArgs,
        filter: PathBuf,
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Look for a shift-enabled matrix on the graph's sparsity pattern.
    SearchPattern {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        filter: Option<PathBuf>,
        #[arg(long, default_value = "strict")]
        mode: DescriptionMode,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Apply a polynomial filter with neighbour-only exchanges.
    Filter {
        #[command(flatten)]
        graph: GraphArgs,
        coeffs: PathBuf,
        signal: PathBuf,
    },
    /// Re-derive the star and 4-cycle counterexamples item by item.
    VerifyPaper,
    /// Graphviz rendering of the shift.
    ExportDot(GraphArgs),
}

struct Output {
    text: String,
    negative: bool,
}

fn load(args: &GraphArgs) -> Result<(RationalMatrix, String), Error> {
    let input = parse_graph(&args.graph, args.format, args.kind)?;
    Ok((build_shift(&input)?, input.digest))
}

fn load_filter(path: &Path, n: usize) -> Result<(RationalMatrix, String), Error> {
    let text = read_text(path)?;
    let h = parse_matrix(&text)?;
    if h.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: h.dim() });
    }
    Ok((h, digest(text.as_bytes())))
}

fn combined(parts: &[&str]) -> String {
    digest(parts.join(":").as_bytes())
}

fn shift_section(s: &RationalMatrix, cfg: &ToleranceConfig) -> (ShiftSection, bool) {
    let report = is_shift_enabled(s, cfg);
    let eig = s.is_symmetric().then(|| symm_eig(s, cfg).ok()).flatten();
    let enabled = report.shift_enabled;
    (ShiftSection::new(&report, eig.as_ref().map(|d| d.eigenvalues.as_slice())), enabled)
}

fn run(cli: &Cli, cfg: &ToleranceConfig) -> Result<Output, Error> {
    let report = |doc: AnalysisReportDocument, negative: bool| Ok(Output { text: doc.to_json(), negative });
    match &cli.command {
        Command::Analyze(g) => {
            let (s, d) = load(g)?;
            let mut doc = AnalysisReportDocument::new("analyze", d);
            let (section, enabled) = shift_section(&s, cfg);
            doc.shift = Some(section);
            report(doc, !enabled)
        }
        Command::Invariance { graph, filter } => {
            let (s, ds) = load(graph)?;
            let (h, dh) = load_filter(filter, s.dim())?;
            let mut doc = AnalysisReportDocument::new("invariance", combined(&[&ds, &dh]));
            let ok = commutes(&h, &s)?;
            doc.shift = Some(shift_section(&s, cfg).0);
            doc.commutation = Some(CommutationSection {
                commutes: ok,
                hs_is_zero: (&h * &s).is_zero(),
                sh_is_zero: (&s * &h).is_zero(),
            });
            report(doc, !ok)
        }
        Command::Represent { graph, filter } => {
            let (s, ds) = load(graph)?;
            let (h, dh) = load_filter(filter, s.dim())?;
            let mut doc = AnalysisReportDocument::new("represent", combined(&[&ds, &dh]));
            let result = represent_as_polynomial(&h, &s)?;
            doc.shift = Some(shift_section(&s, cfg).0);
            doc.representability = Some(RepresentabilitySection::new(&result, result.replay(&h, &s)));
            report(doc, !result.is_representable())
        }
        Command::Convert { graph, filter, epsilon } => {
            let (s, ds) = load(graph)?;
            let (h, dh) = load_filter(filter, s.dim())?;
            let mut doc = AnalysisReportDocument::new("convert", combined(&[&ds, &dh]));
            let mut policy = PerturbationPolicy::default();
            if let Some(e) = epsilon {
                if !(e.is_finite() && *e >= 0.0) {
                    return Err(Error::InvalidTolerance(format!("epsilon must be finite and non-negative, got {e}")));
                }
                policy.epsilon = Some(*e);
            }
            let out = convert_to_shift_enabled(&s, &h, &policy, cfg)?;
            let dens = (density(&RealMatrix::from_rational(&s), 0.0), density(&out.s_tilde, policy.zero_tol));
            doc.shift = Some(shift_section(&s, cfg).0);
            doc.conversion = Some(ConversionSection::new(&out, dens.0, dens.1));
            report(doc, !(out.shift_enabled && out.commutes_with_h))
        }
        Command::SearchPattern { graph, filter, mode, trials, seed } => {
            let (s, ds) = load(graph)?;
            let h = filter.as_deref().map(|f| load_filter(f, s.dim())).transpose()?;
            let d = match &h {
                Some((_, dh)) => combined(&[&ds, dh]),
                None => ds,
            };
            let mut doc = AnalysisReportDocument::new("search-pattern", d);
            let pattern = SparsityPattern::of_matrix(&s, *mode);
            let h = h.map(|(h, _)| h);
            let result = exists_shift_enabled_with_pattern(&pattern, h.as_ref(), *trials, *seed)?;
            let found = matches!(result.outcome, SearchOutcome::Found { .. });
            doc.pattern_search = Some(PatternSearchSection::new(&result, *mode, *trials, *seed, h.as_ref()));
            report(doc, !found)
        }
        Command::Filter { graph, coeffs, signal } => {
            let (s, ds) = load(graph)?;
            let (ct, xt) = (read_text(coeffs)?, read_text(signal)?);
            let h = parse_polynomial(&ct)?;
            let x = GraphSignal::new(parse_values(&xt)?);
            let d = combined(&[&ds, &digest(ct.as_bytes()), &digest(xt.as_bytes())]);
            let mut doc = AnalysisReportDocument::new("filter", d);
            let (y, loc) = apply_filter_locally(&s, &h, &x)?;
            doc.locality = Some(LocalitySection::new(&y.values, &loc));
            report(doc, false)
        }
        Command::VerifyPaper => {
            let items = verify_all(cfg);
            let mut text = String::new();
            for item in &items {
                text.push_str(&format!("{item}\n"));
            }
            let failed = items.iter().filter(|i| !i.passed).count();
            text.push_str(&format!("{} passed, {failed} failed\n", items.len() - failed));
            Ok(Output { text, negative: failed > 0 })
        }
        Command::ExportDot(g) => Ok(Output { text: export_dot(&load(g)?.0), negative: false }),
    }
}

fn tolerances(cli: &Cli) -> Result<ToleranceConfig, Error> {
    let name = cli.profile.clone().or_else(|| std::env::var(TOLERANCE_PROFILE_ENV).ok());
    match name {
        None => Ok(ToleranceConfig::default()),
        Some(name) => ToleranceConfig::profile(name.trim())
            .ok_or_else(|| Error::InvalidTolerance(format!("unknown tolerance profile {name:?}"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = tolerances(&cli).and_then(|cfg| run(&cli, &cfg));
    let output = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &output.text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{}", output.text),
    }
    if cli.strict_exit && output.negative {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
