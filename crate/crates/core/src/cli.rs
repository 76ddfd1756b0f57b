//! Command-line front end.
//!
//! Exit status: 0 on success, 1 on a domain error (non-unitary input,
//! degenerate start, ordering ties, ...), 2 on malformed input. Errors are
//! reported on stderr as `{"error": {"kind": .., "message": ..}}`.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::complexmat::{hs_distance, phase_min_distance, Matrix};
use crate::compose::{check_distributivity, parse_gate, CompositionKind};
use crate::config::ToleranceConfig;
use crate::error::Error;
use crate::gateseq::{build_frame, iterate_sequence, ConvergenceReport};
use crate::hamcay::{cayley_rational, cayley_spectral, hamiltonian_from_frame};
use crate::trace::{self, EmitFlags, FrameRecord, StateRecord};

#[derive(Debug, Parser)]
#[command(name = "eigenseq", version, about = "Eigenvector sequences of quantum gates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output format (default: csv for sweep, json otherwise)
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Output file; `-` or absent means stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true)]
    pub tol_conv: Option<f64>,
    #[arg(long, global = true)]
    pub tol_cluster: Option<f64>,
    #[arg(long, global = true)]
    pub tol_zero: Option<f64>,
    #[arg(long, global = true)]
    pub tol_cmp: Option<f64>,
    #[arg(long, global = true)]
    pub tol_unitary: Option<f64>,
}

impl Common {
    fn tolerances(&self) -> Result<ToleranceConfig, CliError> {
        let mut cfg = ToleranceConfig::default();
        let overrides = [
            (&mut cfg.eps_conv, self.tol_conv),
            (&mut cfg.eps_cluster, self.tol_cluster),
            (&mut cfg.eps_zero, self.tol_zero),
            (&mut cfg.eps_cmp, self.tol_cmp),
            (&mut cfg.eps_unitary, self.tol_unitary),
        ];
        for (slot, value) in overrides {
            if let Some(v) = value {
                *slot = v;
            }
        }
        cfg.validate().map_err(|e| CliError::Input(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Frames,
    Hamiltonians,
    Cayleys,
    Spectra,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Kronecker,
    DirectSum,
    Star,
}

impl From<Kind> for CompositionKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Kronecker => CompositionKind::Kronecker,
            Kind::DirectSum => CompositionKind::DirectSum,
            Kind::Star => CompositionKind::Star,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BSign {
    #[value(name = "+1", alias = "pos")]
    Positive,
    #[value(name = "-1", alias = "neg")]
    Negative,
    Both,
}

/// A matrix given either as a gate name or as a path to a matrix JSON file.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Input {
    /// Gate name, e.g. sigmax, hadamard, phase:0.5, boost:1
    #[arg(long)]
    pub gate: Option<String>,
    /// Path to a matrix JSON file
    #[arg(long = "in")]
    pub input: Option<String>,
}

impl Input {
    fn resolve(&self) -> Result<Matrix, CliError> {
        resolve_matrix(self.gate.as_deref().or(self.input.as_deref()).unwrap_or_default())
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Iterate U_{k+1} = F(U_k) and emit the trace
    Iterate {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        max_iter: u64,
        /// Extra per-step payloads (comma separated)
        #[arg(long, value_enum, value_delimiter = ',')]
        emit: Vec<Emit>,
    },
    /// Apply the eigenframe map once
    Frame {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, value_delimiter = ',')]
        emit: Vec<Emit>,
    },
    /// Hamilton operator H with U = exp(-iH)
    Hamiltonian {
        #[command(flatten)]
        input: Input,
    },
    /// Cayley transform (H - iI)(H + iI)^-1 of a hermitian input
    Cayley {
        #[command(flatten)]
        input: Input,
        /// Treat the input as a unitary U and transform its Hamilton operator
        #[arg(long)]
        from_unitary: bool,
    },
    /// Hilbert-Schmidt distance and phase-minimised distance
    Distance {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Kronecker product, direct sum or star product of two matrices
    Compose {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Compare F(A op B) with F(A) op F(B)
    Distributivity {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Iterate [[a, b], [b, -a]] over a grid of a in [0, 1) and classify limits
    Sweep {
        #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u64).range(1..))]
        steps: u64,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        max_iter: u64,
        #[arg(long, value_enum, default_value = "+1", allow_hyphen_values = true)]
        b_sign: BSign,
    },
}

#[derive(Debug)]
pub enum CliError {
    Domain(Error),
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Input(_) => 2,
        }
    }

    /// `{"error": {"kind": "domain" | "input", "message": ...}}`
    pub fn to_json(&self) -> String {
        let (kind, message) = match self {
            CliError::Domain(e) => ("domain", e.to_string()),
            CliError::Input(m) => ("input", m.clone()),
        };
        serde_json::json!({ "error": { "kind": kind, "message": message } }).to_string()
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownGate(_) | Error::InvalidMatrix(_) => CliError::Input(e.to_string()),
            other => CliError::Domain(other),
        }
    }
}

/// Reads a matrix from a JSON file, or parses a gate name when no such file
/// exists.
pub fn resolve_matrix(spec: &str) -> Result<Matrix, CliError> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {spec}: {e}")))?;
        return serde_json::from_str(&text)
            .map_err(|e| CliError::Input(format!("malformed matrix in {spec}: {e}")));
    }
    parse_gate(spec).map_err(|_| {
        CliError::Input(format!("`{spec}` is neither a readable matrix file nor a known gate"))
    })
}

fn emit_flags(list: &[Emit]) -> EmitFlags {
    EmitFlags {
        frames: list.contains(&Emit::Frames),
        hamiltonians: list.contains(&Emit::Hamiltonians),
        cayleys: list.contains(&Emit::Cayleys),
        spectra: list.contains(&Emit::Spectra),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable value");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct IterateOutput<'a> {
    states: Vec<StateRecord>,
    report: &'a ConvergenceReport,
}

#[derive(Serialize)]
struct DistanceOutput {
    hs: f64,
    d: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub a: f64,
    pub b_sign: i32,
    pub steps: usize,
    pub final_distance: f64,
    pub limit: Matrix,
}

/// Runs the sweep grid `a = i / steps`, `i = 0, …, steps − 1`. Rows are
/// ordered by grid index and then by `b_sign` (+1 before −1).
pub fn sweep(steps: usize, max_iter: usize, b_sign: BSign, cfg: &ToleranceConfig) -> Result<Vec<SweepRow>, Error> {
    let signs: &[i32] = match b_sign {
        BSign::Positive => &[1],
        BSign::Negative => &[-1],
        BSign::Both => &[1, -1],
    };
    let grid: Vec<(f64, i32)> = (0..steps)
        .flat_map(|i| signs.iter().map(move |&s| (i as f64 / steps as f64, s)))
        .collect();
    grid.par_iter()
        .map(|&(a, s)| {
            let b = s as f64 * (1.0 - a * a).sqrt();
            let u0 = Matrix::from_real_rows(&[[a, b], [b, -a]]);
            let (_, report) = iterate_sequence(&u0, max_iter, cfg)?;
            Ok(SweepRow {
                a,
                b_sign: s,
                steps: report.steps,
                final_distance: report.final_distance,
                limit: report.limit,
            })
        })
        .collect()
}

fn sweep_csv(rows: &[SweepRow]) -> String {
    let n = rows.first().map_or(2, |r| r.limit.dim());
    let mut out = String::from("a,b_sign,steps,final_distance");
    for i in 1..=n {
        for j in 1..=n {
            let _ = write!(out, ",re_limit_{i}_{j},im_limit_{i}_{j}");
        }
    }
    out.push('\n');
    for r in rows {
        let _ = write!(out, "{:?},{},{},{:?}", r.a, r.b_sign, r.steps, r.final_distance);
        trace::push_entries(&mut out, &r.limit);
        out.push('\n');
    }
    out
}

fn render_matrix(m: &Matrix, format: Format) -> String {
    match format {
        Format::Json => to_json(m),
        Format::Csv => trace::matrix_csv(m),
        Format::Pretty => trace::matrix_pretty(m),
    }
}

/// Executes one command and returns its rendered output.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    let cfg = cli.common.tolerances()?;
    let format = cli.common.format;
    let fmt = format.unwrap_or(Format::Json);

    let output = match &cli.command {
        Command::Iterate { input, max_iter, emit } => {
            let u0 = input.resolve()?;
            let (states, report) = iterate_sequence(&u0, *max_iter as usize, &cfg)?;
            match fmt {
                Format::Json => {
                    let states = trace::trace_records(&states, emit_flags(emit))?;
                    to_json(&IterateOutput { states, report: &report })
                }
                Format::Csv => trace::trace_csv(&states),
                Format::Pretty => {
                    let mut out = String::from("    k   ||U_k - U_k-1||        d(U_k, U_k-1)\n");
                    for s in &states {
                        let f = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.6e}"));
                        let _ = writeln!(out, "{:>5}   {:<20}   {}", s.k, f(s.hs_dist_prev), f(s.d_prev));
                    }
                    let _ = writeln!(
                        out,
                        "\n{:?} after {} steps (final distance {:.3e}); limit:",
                        report.reason, report.steps, report.final_distance
                    );
                    out.push_str(&trace::matrix_pretty(&report.limit));
                    out
                }
            }
        }
        Command::Frame { input, emit } => {
            let u = input.resolve()?;
            let frame = build_frame(&u, &cfg)?;
            match fmt {
                Format::Json => to_json(&FrameRecord::new(&frame, emit.contains(&Emit::Spectra))),
                other => render_matrix(&frame.columns, other),
            }
        }
        Command::Hamiltonian { input } => {
            let u = input.resolve()?;
            let h = hamiltonian_from_frame(&build_frame(&u, &cfg)?)?;
            render_matrix(&h, fmt)
        }
        Command::Cayley { input, from_unitary } => {
            let m = input.resolve()?;
            let v = if *from_unitary {
                let frame = build_frame(&m, &cfg)?;
                cayley_spectral(&frame)?
            } else {
                cayley_rational(&m)?
            };
            render_matrix(&v, fmt)
        }
        Command::Distance { a, b } => {
            let (a, b) = (resolve_matrix(a)?, resolve_matrix(b)?);
            let out = DistanceOutput {
                hs: hs_distance(&a, &b)?,
                d: phase_min_distance(&a, &b, &cfg)?,
            };
            match fmt {
                Format::Json => to_json(&out),
                Format::Csv => format!("hs,d\n{:?},{:?}\n", out.hs, out.d),
                Format::Pretty => format!("hs = {:.12}\nd  = {:.12}\n", out.hs, out.d),
            }
        }
        Command::Compose { kind, a, b } => {
            let (a, b) = (resolve_matrix(a)?, resolve_matrix(b)?);
            render_matrix(&CompositionKind::from(*kind).apply(&a, &b)?, fmt)
        }
        Command::Distributivity { kind, a, b, tol } => {
            let (a, b) = (resolve_matrix(a)?, resolve_matrix(b)?);
            let report = check_distributivity((*kind).into(), &a, &b, *tol, &cfg)?;
            match fmt {
                Format::Json => to_json(&report),
                Format::Csv => format!(
                    "kind,residual,holds\n{},{:?},{}\n",
                    serde_json::to_value(report.kind).unwrap().as_str().unwrap(),
                    report.residual,
                    report.holds
                ),
                Format::Pretty => format!(
                    "{:?}: residual {:.3e} -> {}\n",
                    report.kind,
                    report.residual,
                    if report.holds { "holds" } else { "does not hold" }
                ),
            }
        }
        Command::Sweep { steps, max_iter, b_sign } => {
            let rows = sweep(*steps as usize, *max_iter as usize, *b_sign, &cfg)?;
            match format.unwrap_or(Format::Csv) {
                Format::Json => to_json(&rows),
                Format::Csv => sweep_csv(&rows),
                Format::Pretty => {
                    let mut out = String::from("      a   b   steps   final_distance\n");
                    for r in &rows {
                        let _ = writeln!(out, "{:>7.4}  {:+}   {:>5}   {:.3e}", r.a, r.b_sign, r.steps, r.final_distance);
                    }
                    out
                }
            }
        }
    };
    Ok(output)
}

/// Executes `cli` and writes the result to `--out` or stdout.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let output = execute(cli)?;
    match cli.common.out.as_deref() {
        Some(path) if path != Path::new("-") => fs::write(path, output)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        _ => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(output.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Input(format!("cannot write output: {e}")))
        }
    }
}

/// Binary entry point; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}
