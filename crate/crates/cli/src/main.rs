use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use cauchylab::curvature::{check_budget, menger_c2, menger_c2_pointwise, ordered_triples};
use cauchylab::density::density_profile;
use cauchylab::diagnostics::{
    cantor_verdict, compactness_verdict, gap_ladder, to_report_json, tv_identity_residual_with,
    Thresholds, VerdictConfig, DEFAULT_TRIPLE_BUDGET,
};
use cauchylab::measure::{
    generate_cantor, generate_circle, generate_disc, generate_segment, load_measure, save_measure,
};
use cauchylab::operator::{build_truncated, operator_norm, KernelId, NormOptions};
use cauchylab::{CantorSpec, Cube, DiscreteMeasure, Error, Point};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Numerical diagnostics for the Cauchy transform of discrete planar measures.
#[derive(Parser, Debug)]
#[command(name = "cauchylab", version)]
struct Cli {
    /// Worker threads (default: available parallelism). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a generated measure to a file (format from the extension).
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Menger curvature c²(μ).
    Curvature {
        #[command(flatten)]
        source: Source,
        /// Also report c²_μ(x) at every atom.
        #[arg(long)]
        pointwise: bool,
        #[arg(long, default_value_t = DEFAULT_TRIPLE_BUDGET)]
        budget: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Multiscale density profile.
    Density {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_parser = parse_ladder)]
        scales: Ladder,
        #[arg(long, default_value_t = 1)]
        exponent: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        out: Output,
    },
    /// L²(μ) norm of the ε-truncated operator.
    Norm {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[command(flatten)]
        kernel: KernelArgs,
        #[command(flatten)]
        norm: NormArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Truncation gaps between consecutive entries of an ε ladder.
    Gaps {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_parser = parse_ladder)]
        eps: Ladder,
        #[command(flatten)]
        norm: NormArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Both sides of the Cauchy-indicator / curvature identity on a cube.
    TvCheck {
        #[command(flatten)]
        source: Source,
        /// Cube as `cx,cy,side` (default: twice the bounding square).
        #[arg(long)]
        cube: Option<String>,
        /// Constant pointwise density; omitted means the density term is 0.
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_TRIPLE_BUDGET)]
        budget: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Compactness verdict from densities, curvature ratios and truncation gaps.
    Verdict {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_parser = parse_ladder)]
        scales: Ladder,
        /// Truncation ladder (default: the scales).
        #[arg(long, value_parser = parse_ladder)]
        eps: Option<Ladder>,
        #[command(flatten)]
        thresholds: ThresholdArgs,
        #[command(flatten)]
        norm: NormArgs,
        #[arg(long, default_value_t = DEFAULT_TRIPLE_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        out: Output,
    },
    /// Generation-matched verdict for a planar Cantor set.
    CantorScan {
        #[command(flatten)]
        cantor: CantorArgs,
        /// Extra generations resolving each square in the curvature scan.
        #[arg(long, default_value_t = 3)]
        resolution: usize,
        #[command(flatten)]
        thresholds: ThresholdArgs,
        #[command(flatten)]
        norm: NormArgs,
        #[arg(long, default_value_t = DEFAULT_TRIPLE_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand, Debug)]
enum GenKind {
    Cantor {
        #[command(flatten)]
        cantor: CantorArgs,
        #[command(flatten)]
        out: Output,
    },
    Segment {
        #[arg(long, default_value_t = 0.0)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: Output,
    },
    Circle {
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: Output,
    },
    Disc {
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        out: Output,
    },
}

/// Exactly one of a measure file or an inline generator.
#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Source {
    #[arg(long, short = 'i')]
    input: Option<PathBuf>,
    /// `cantor:LAMBDA,DEPTH`, `segment:A,B,N`, `circle:R,N` or `disc:R,M`.
    #[arg(long)]
    generate: Option<String>,
}

#[derive(Args, Debug)]
struct Output {
    /// Output file (default: standard output).
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CantorArgs {
    /// Constant scaling factor.
    #[arg(long, conflicts_with = "lambdas", required_unless_present = "lambdas")]
    lambda: Option<f64>,
    /// Per-generation scaling factors.
    #[arg(long, value_delimiter = ',')]
    lambdas: Option<Vec<f64>>,
    #[arg(long)]
    depth: usize,
}

#[derive(Args, Debug)]
struct KernelArgs {
    #[arg(long, value_enum, default_value_t = KernelName::Cauchy)]
    kernel: KernelName,
    /// Riesz order n (the kernel lives in the measure's dimension).
    #[arg(long, default_value_t = 1)]
    riesz_n: u32,
}

#[derive(Args, Debug)]
struct NormArgs {
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
}

#[derive(Args, Debug)]
struct ThresholdArgs {
    #[arg(long, default_value_t = 0.2)]
    density_threshold: f64,
    #[arg(long, default_value_t = 0.2)]
    curvature_threshold: f64,
    #[arg(long, default_value_t = 0.2)]
    gap_threshold: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum KernelName {
    Cauchy,
    ImCauchy,
    Riesz,
}

#[derive(Debug, Clone)]
struct Ladder(Vec<f64>);

fn parse_ladder(s: &str) -> Result<Ladder, String> {
    let values = s
        .split(',')
        .map(|v| f64::from_str(v.trim()).map_err(|e| format!("{v:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() || values.windows(2).any(|w| w[1] >= w[0]) {
        return Err("ladder must be strictly decreasing".into());
    }
    Ok(Ladder(values))
}

/// Failure carrying its exit code: 1 for validation, 2 for budget or
/// convergence.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

type CliResult = Result<Option<String>, Failure>;

fn numbers(s: &str, count: usize, what: &str) -> Result<Vec<f64>, Failure> {
    let v = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| invalid(format!("{what} {s:?}: {e}")))?;
    if v.len() != count {
        return Err(invalid(format!("{what} {s:?}: expected {count} comma-separated numbers")));
    }
    Ok(v)
}

fn count(x: f64, what: &str) -> Result<usize, Failure> {
    if x.fract() != 0.0 || x < 0.0 {
        return Err(invalid(format!("{what} must be a nonnegative integer, got {x}")));
    }
    Ok(x as usize)
}

fn generated(spec: &str) -> Result<DiscreteMeasure, Failure> {
    let (kind, args) = spec
        .split_once(':')
        .ok_or_else(|| invalid(format!("generator {spec:?}: expected KIND:ARGS")))?;
    let mu = match kind {
        "cantor" => {
            let v = numbers(args, 2, "cantor")?;
            generate_cantor(&CantorSpec::constant(v[0], count(v[1], "depth")?)?)?.measure
        }
        "segment" => {
            let v = numbers(args, 3, "segment")?;
            generate_segment(v[0], v[1], count(v[2], "N")?)?
        }
        "circle" => {
            let v = numbers(args, 2, "circle")?;
            generate_circle(v[0], count(v[1], "N")?)?
        }
        "disc" => {
            let v = numbers(args, 2, "disc")?;
            generate_disc(v[0], count(v[1], "M")?)?
        }
        other => return Err(invalid(format!("unknown generator {other:?}"))),
    };
    Ok(mu)
}

impl Source {
    fn load(&self) -> Result<DiscreteMeasure, Failure> {
        match (&self.input, &self.generate) {
            (Some(path), None) => Ok(load_measure(path)?),
            (None, Some(spec)) => generated(spec),
            _ => Err(invalid("give exactly one of --input or --generate")),
        }
    }
}

impl CantorArgs {
    fn spec(&self) -> Result<CantorSpec, Failure> {
        let spec = match (&self.lambdas, self.lambda) {
            (Some(l), _) => CantorSpec::new(l.clone(), self.depth)?,
            (None, Some(l)) => CantorSpec::constant(l, self.depth)?,
            (None, None) => return Err(invalid("give --lambda or --lambdas")),
        };
        Ok(spec)
    }
}

impl NormArgs {
    fn options(&self) -> NormOptions {
        NormOptions {
            tol: self.tol,
            max_iter: self.max_iter,
        }
    }
}

fn config(t: &ThresholdArgs, norm: &NormArgs, budget: u64, resolution: usize) -> VerdictConfig {
    VerdictConfig {
        thresholds: Thresholds {
            density: t.density_threshold,
            curvature: t.curvature_threshold,
            gap: t.gap_threshold,
        },
        norm: norm.options(),
        budget,
        cantor_resolution: resolution,
    }
}

/// Writes `text` to the output file, or returns it for standard output.
fn emit(out: &Output, text: String) -> CliResult {
    match &out.output {
        Some(path) => {
            fs::write(path, text).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

/// Emits the result, then reports non-convergence as exit code 2.
fn emit_checked(out: &Output, text: String, converged: bool) -> CliResult {
    let printed = emit(out, text)?;
    if converged {
        Ok(printed)
    } else {
        if let Some(p) = printed {
            print!("{p}");
        }
        Err(Failure {
            code: 2,
            message: "power iteration did not converge; the last estimate was reported".into(),
        })
    }
}

fn save(mu: &DiscreteMeasure, out: &Output) -> CliResult {
    match &out.output {
        Some(path) => {
            save_measure(mu, path)?;
            Ok(None)
        }
        None => Err(invalid("gen needs --output (the extension selects csv or json)")),
    }
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Gen { kind } => match kind {
            GenKind::Cantor { cantor, out } => save(&generate_cantor(&cantor.spec()?)?.measure, &out),
            GenKind::Segment { a, b, n, out } => save(&generate_segment(a, b, n)?, &out),
            GenKind::Circle { radius, n, out } => save(&generate_circle(radius, n)?, &out),
            GenKind::Disc { radius, m, out } => save(&generate_disc(radius, m)?, &out),
        },
        Command::Curvature {
            source,
            pointwise,
            budget,
            out,
        } => {
            let mu = source.load()?;
            check_budget(ordered_triples(mu.len()), budget)?;
            let r = if pointwise {
                menger_c2_pointwise(&mu)?
            } else {
                menger_c2(&mu)?
            };
            emit(&out, to_report_json(&r))
        }
        Command::Density {
            source,
            scales,
            exponent,
            format,
            out,
        } => {
            let mu = source.load()?;
            let profile = density_profile(&mu, &scales.0, exponent)?;
            let text = match format {
                Format::Json => to_report_json(&profile),
                Format::Csv => profile.to_csv(),
            };
            emit(&out, text)
        }
        Command::Norm {
            source,
            eps,
            kernel,
            norm,
            out,
        } => {
            let mu = source.load()?;
            let k = match kernel.kernel {
                KernelName::Cauchy => KernelId::Cauchy,
                KernelName::ImCauchy => KernelId::ImCauchy,
                KernelName::Riesz => KernelId::riesz(kernel.riesz_n, mu.dim())?,
            };
            let t = build_truncated(&mu, k, eps)?;
            let est = operator_norm(&t, &norm.options())?;
            emit_checked(&out, to_report_json(&est), est.converged)
        }
        Command::Gaps {
            source,
            eps,
            norm,
            out,
        } => {
            let mu = source.load()?;
            let (gaps, _) = gap_ladder(&mu, &eps.0, &norm.options())?;
            let converged = gaps.iter().all(|g| g.converged);
            emit_checked(&out, to_report_json(&gaps), converged)
        }
        Command::TvCheck {
            source,
            cube,
            theta,
            budget,
            out,
        } => {
            let mu = source.load()?;
            let q = match cube {
                Some(s) => {
                    let v = numbers(&s, 3, "cube")?;
                    Cube::new(Point::xy(v[0], v[1]), v[2])?
                }
                None => Cube::enclosing(&mu, 2.0)?,
            };
            let constant = theta.map(|t| move |_: &[f64]| t);
            let density = constant.as_ref().map(|f| f as &dyn Fn(&[f64]) -> f64);
            let r = tv_identity_residual_with(&mu, &q, density, budget)?;
            if let Some(w) = &r.warning {
                eprintln!("warning: {w}");
            }
            emit(&out, to_report_json(&r))
        }
        Command::Verdict {
            source,
            scales,
            eps,
            thresholds,
            norm,
            budget,
            format,
            out,
        } => {
            let mu = source.load()?;
            let ladder = eps.unwrap_or_else(|| scales.clone());
            let cfg = config(&thresholds, &norm, budget, 3);
            let report = compactness_verdict(&mu, &scales.0, &ladder.0, &cfg)?;
            let converged = report.truncation_gaps.iter().all(|g| g.converged);
            let text = match format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
            };
            emit_checked(&out, text, converged)
        }
        Command::CantorScan {
            cantor,
            resolution,
            thresholds,
            norm,
            budget,
            format,
            out,
        } => {
            let cfg = config(&thresholds, &norm, budget, resolution);
            let report = cantor_verdict(&cantor.spec()?, &cfg)?;
            let converged = report.truncation_gaps.iter().all(|g| g.converged);
            let text = match format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
            };
            emit_checked(&out, text, converged)
        }
    }
}

fn main() -> ExitCode {
    // usage errors are validation errors (exit 1); help and version exit 0
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(Some(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
