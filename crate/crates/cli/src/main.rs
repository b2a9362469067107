//! `autfp`: fingerprints of tame automorphisms of C^n from the command line.
//!
//! Exit codes: 0 ok / equal / affine, 1 distinct / not affine / a verify
//! suite failed, 2 parse or usage error, 3 numeric singularity,
//! 4 inconclusive comparison.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod report;

use std::io::{self, Read};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use autfp_core::fingerprint::{affineness, FingerprintError};
use autfp_core::lang::format_complex;
use autfp_core::verify::{run_all, VerifyConfig};
use autfp_core::wirtinger::levi_log_norm;
use autfp_core::{
    compare, fingerprint, parse_automorphism, parse_point, serialize, AutomorphismWord, CMatrix, CVector, Outcome,
    ParseError, SamplingConfig, Thresholds, WirtingerError,
};

use report::{
    CompareResult, ConfigEcho, ErrorBody, ErrorResult, EvalResult, FingerprintResult, InputEcho, InvertResult,
    IsAffineResult, ParseResult, Report, Sample, Suite, VerifyResult,
};

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;
const EXIT_INCONCLUSIVE: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "autfp", version, about = "Jet + Levi-matrix fingerprints of tame automorphisms of C^n")]
struct Cli {
    #[command(flatten)]
    opts: RunOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

impl OutputFormat {
    fn as_str(self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Text => "text",
        }
    }
}

#[derive(Debug, Args)]
struct RunOpts {
    /// Dimension of C^n (required for every command that parses input).
    #[arg(long = "n", global = true)]
    n: Option<usize>,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Sphere radii for sampling, comma separated.
    #[arg(long, global = true, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0])]
    radii: Vec<f64>,
    /// Sample points per radius.
    #[arg(long, global = true, default_value_t = 16)]
    count: usize,
    #[arg(long = "eps-eq", global = true, default_value_t = 1e-8)]
    eps_eq: f64,
    #[arg(long = "eps-distinct", global = true, default_value_t = 1e-4)]
    eps_distinct: f64,
    #[arg(long = "psd-tol", global = true, default_value_t = 1e-9)]
    psd_tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    output: OutputFormat,
}

/// Inputs are a file path, `-` for stdin, or `expr:<word>` inline.
#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a word and print its canonical form.
    Parse { input: String },
    /// Evaluate F and DF at a point.
    Eval {
        input: String,
        /// Point as comma-separated coordinates, e.g. `1,(0.5-2i)`.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Jet at 0 and sampled Levi matrices of log||Θ(F)||.
    Fingerprint {
        input: String,
        /// Extra points at which to report the Levi matrix.
        #[arg(long, allow_hyphen_values = true)]
        at: Vec<String>,
    },
    /// Compare the fingerprints of two words.
    Compare { first: String, second: String },
    /// Sampled affineness test.
    IsAffine { input: String },
    /// Print the inverse word.
    Invert { input: String },
    /// Run the invariant suites over seeded corpora.
    Verify,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Parse { .. } => "parse",
            Command::Eval { .. } => "eval",
            Command::Fingerprint { .. } => "fingerprint",
            Command::Compare { .. } => "compare",
            Command::IsAffine { .. } => "is-affine",
            Command::Invert { .. } => "invert",
            Command::Verify => "verify",
        }
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Parse { input: String, error: ParseError },
    Numeric(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Parse { .. } => EXIT_PARSE,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }

    fn body(&self) -> ErrorBody {
        match self {
            CliError::Usage(m) => ErrorBody {
                kind: "usage".into(),
                message: m.clone(),
                input: None,
                span: None,
            },
            CliError::Parse { input, error } => ErrorBody {
                kind: error.kind.as_str().into(),
                message: error.message.clone(),
                input: Some(input.clone()),
                span: Some([error.span.start, error.span.end]),
            },
            CliError::Numeric(m) => ErrorBody {
                kind: "numeric".into(),
                message: m.clone(),
                input: None,
                span: None,
            },
        }
    }

    fn describe(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::Numeric(m) => m.clone(),
            CliError::Parse { input, error } => format!("{input}: {error}"),
        }
    }
}

impl From<FingerprintError> for CliError {
    fn from(e: FingerprintError) -> Self {
        match e {
            FingerprintError::Wirtinger(w) => CliError::Numeric(w.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<WirtingerError> for CliError {
    fn from(e: WirtingerError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

struct Run {
    opts: RunOpts,
    command: &'static str,
    inputs: Vec<InputEcho>,
}

impl Run {
    fn config_echo(&self) -> ConfigEcho {
        ConfigEcho {
            n: self.opts.n,
            seed: self.opts.seed,
            radii: self.opts.radii.clone(),
            count: self.opts.count,
            eps_eq: self.opts.eps_eq,
            eps_distinct: self.opts.eps_distinct,
            psd_tol: self.opts.psd_tol,
            output: self.opts.output.as_str(),
        }
    }

    fn sampling(&self) -> SamplingConfig {
        SamplingConfig {
            seed: self.opts.seed,
            radii: self.opts.radii.clone(),
            count_per_radius: self.opts.count,
        }
    }

    fn thresholds(&self) -> Thresholds {
        Thresholds {
            eq: self.opts.eps_eq,
            distinct: self.opts.eps_distinct,
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        let o = &self.opts;
        if o.n == Some(0) {
            return Err(CliError::Usage("--n must be at least 1".into()));
        }
        if !(o.eps_eq > 0.0 && o.eps_distinct > 0.0 && o.psd_tol > 0.0) {
            return Err(CliError::Usage("thresholds must be positive".into()));
        }
        if !(o.eps_eq < o.eps_distinct) {
            return Err(CliError::Usage("--eps-eq must be smaller than --eps-distinct".into()));
        }
        self.sampling().validate().map_err(|e| CliError::Usage(e.to_string()))
    }

    fn dim(&self) -> Result<usize, CliError> {
        self.opts
            .n
            .ok_or_else(|| CliError::Usage(format!("`{}` needs the dimension: pass --n", self.command)))
    }

    fn load(&mut self, source: &str) -> Result<AutomorphismWord, CliError> {
        let n = self.dim()?;
        let text = read_input(source)?;
        let word = parse_automorphism(&text, n).map_err(|error| CliError::Parse {
            input: source.to_string(),
            error,
        })?;
        self.inputs.push(InputEcho {
            source: source.to_string(),
            canonical: Some(serialize(&word)),
        });
        Ok(word)
    }

    fn point(&self, text: &str) -> Result<CVector, CliError> {
        parse_point(text, self.dim()?).map_err(|error| CliError::Parse {
            input: text.to_string(),
            error,
        })
    }

    fn emit<R: Serialize>(&self, result: R, text: impl FnOnce() -> String) {
        match self.opts.output {
            OutputFormat::Json => {
                let report = Report {
                    tool: "autfp",
                    version: env!("CARGO_PKG_VERSION"),
                    command: self.command,
                    config: self.config_echo(),
                    inputs: self.inputs.clone(),
                    result,
                };
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            }
            OutputFormat::Text => print!("{}", text()),
        }
    }
}

fn read_input(source: &str) -> Result<String, CliError> {
    if let Some(inline) = source.strip_prefix("expr:") {
        return Ok(inline.to_string());
    }
    if source == "-" {
        let mut buf = String::new();
        io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Usage(format!("reading stdin: {e}")))?;
        return Ok(buf);
    }
    std::fs::read_to_string(source).map_err(|e| CliError::Usage(format!("reading {source}: {e}")))
}

fn fmt_vector(v: &CVector) -> String {
    let entries: Vec<String> = v.iter().map(|c| format_complex(*c)).collect();
    format!("({})", entries.join(", "))
}

fn fmt_matrix(m: &CMatrix) -> String {
    let rows: Vec<String> = m
        .row_iter()
        .map(|row| {
            let entries: Vec<String> = row.iter().map(|c| format_complex(*c)).collect();
            format!("[{}]", entries.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

fn execute(run: &mut Run, command: &Command) -> Result<u8, CliError> {
    run.validate()?;
    match command {
        Command::Parse { input } => {
            let w = run.load(input)?;
            let canonical = serialize(&w);
            let text = format!("{canonical}\n");
            run.emit(
                ParseResult {
                    canonical,
                    generators: w.len(),
                },
                || text,
            );
            Ok(EXIT_OK)
        }
        Command::Invert { input } => {
            let w = run.load(input)?;
            let inverse = serialize(&w.inverse());
            let text = format!("{inverse}\n");
            run.emit(InvertResult { inverse }, || text);
            Ok(EXIT_OK)
        }
        Command::Eval { input, at } => {
            let w = run.load(input)?;
            let z = run.point(at)?;
            let (value, jac) = w
                .evaluate_with_jacobian(&z)
                .expect("point parsed with the word's dimension");
            let text = format!("F(z)  = {}\nDF(z) = {}\n", fmt_vector(&value), fmt_matrix(&jac));
            run.emit(
                EvalResult {
                    point: report::vector(&z),
                    value: report::vector(&value),
                    jacobian: report::matrix(&jac),
                },
                || text,
            );
            Ok(EXIT_OK)
        }
        Command::Fingerprint { input, at } => {
            let w = run.load(input)?;
            let fp = fingerprint(&w, &run.sampling())?;
            let normalized = w.theta_normalize();
            let mut probes = Vec::new();
            for p in at {
                let z = run.point(p)?;
                let levi = levi_log_norm(&normalized, &z)?;
                probes.push((z, levi));
            }
            let mut text = format!(
                "F(0)  = {}\nDF(0) = {}\n",
                fmt_vector(&fp.jet().value_at_zero),
                fmt_matrix(&fp.jet().derivative_at_zero)
            );
            for (z, levi) in &probes {
                text.push_str(&format!("L at {} = {}\n", fmt_vector(z), fmt_matrix(levi.as_matrix())));
            }
            text.push_str(&format!("{} Levi samples\n", fp.samples().len()));
            let result = FingerprintResult::new(&fp, probes.iter().map(|(z, l)| Sample::new(z, l)).collect());
            run.emit(result, || text);
            Ok(EXIT_OK)
        }
        Command::Compare { first, second } => {
            let w1 = run.load(first)?;
            let w2 = run.load(second)?;
            if w1.dim() != w2.dim() {
                return Err(CliError::Usage("inputs have different dimensions".into()));
            }
            let sampling = run.sampling();
            let f1 = fingerprint(&w1, &sampling)?;
            let f2 = fingerprint(&w2, &sampling)?;
            let verdict = compare(&f1, &f2, &run.thresholds())?;
            let mut text = format!(
                "{}\njet equal: {}\nmax Levi distance: {:e}\n",
                verdict.outcome.as_str(),
                verdict.jet_equal,
                verdict.max_levi_distance
            );
            match &verdict.witness {
                Some(autfp_core::Witness::Sample { point, distance, .. }) => {
                    text.push_str(&format!("witness: Levi distance {distance:e} at {}\n", fmt_vector(point)))
                }
                Some(autfp_core::Witness::Jet {
                    value_distance,
                    derivative_distance,
                }) => text.push_str(&format!(
                    "witness: jets differ (|ΔF(0)| = {value_distance:e}, |ΔDF(0)| = {derivative_distance:e})\n"
                )),
                None => {}
            }
            run.emit(CompareResult::from(&verdict), || text);
            Ok(match verdict.outcome {
                Outcome::Equal => EXIT_OK,
                Outcome::Distinct => EXIT_NEGATIVE,
                Outcome::Inconclusive => EXIT_INCONCLUSIVE,
            })
        }
        Command::IsAffine { input } => {
            let w = run.load(input)?;
            let tol = run.opts.eps_eq;
            let rep = affineness(&w, &run.sampling(), tol)?;
            let mut text = format!("affine: {}\nmax deviation: {:e}\n", rep.is_affine, rep.max_distance);
            if let Some((p, d)) = &rep.witness {
                text.push_str(&format!("witness: deviation {d:e} at {}\n", fmt_vector(p)));
            }
            run.emit(IsAffineResult::new(&rep, tol), || text);
            Ok(if rep.is_affine { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Verify => {
            let cfg = VerifyConfig {
                dim: run.opts.n.unwrap_or(2),
                seed: run.opts.seed,
                sampling: run.sampling(),
                thresholds: run.thresholds(),
                psd_tol: run.opts.psd_tol,
            };
            let suites = run_all(&cfg);
            let all_passed = suites.iter().all(|s| s.passed);
            let mut text = String::new();
            for s in &suites {
                text.push_str(&format!(
                    "{} {:<24} cases={:<6} worst={:e} tol={:e}\n",
                    if s.passed { "PASS" } else { "FAIL" },
                    s.name,
                    s.cases,
                    s.worst,
                    s.tolerance
                ));
                for c in &s.counterexamples {
                    text.push_str(&format!("     {}: {}\n", c.word, c.detail));
                }
            }
            run.emit(
                VerifyResult {
                    all_passed,
                    suites: suites.iter().map(Suite::from).collect(),
                },
                || text,
            );
            Ok(if all_passed { EXIT_OK } else { EXIT_NEGATIVE })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut run = Run {
        opts: cli.opts,
        command: cli.command.name(),
        inputs: Vec::new(),
    };
    match execute(&mut run, &cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("autfp: {}", e.describe());
            if run.opts.output == OutputFormat::Json {
                run.emit(ErrorResult { error: e.body() }, String::new);
            }
            ExitCode::from(e.exit_code())
        }
    }
}
