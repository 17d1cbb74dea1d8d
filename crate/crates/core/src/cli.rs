//! Command-line front end. Exit status: 0 when every requested check passes,
//! 1 on a relation failure, 2 on a configuration or usage error.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::algebra::{Generator, Rational};
use crate::error::ConfigError;
use crate::fock::{Basis, ModeSpec, Mutation, Representation, SparseMatrix, DEFAULT_DIMENSION_CAP};
use crate::verify::{
    mutant_report, mutation_selfcheck, run_matrix_suite, symbolic_tilde_identities, FamilySelection, Report,
    SuiteConfig,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "paraklein", version, about = "Exact checks for parafermion/paraboson algebras and their Klein transformation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check every relation family on the Green-ansatz representation.
    Verify {
        #[command(flatten)]
        opts: Options,
        /// Replay the symbolic identities only; build no matrices.
        #[arg(long)]
        symbolic_only: bool,
        /// Run against a deliberately broken construction (exercises failure reporting).
        #[arg(long, value_enum, hide = true)]
        mutant: Option<MutantArg>,
    },
    /// Replay the Klein-transformation identities in the free algebra.
    Symbolic {
        #[command(flatten)]
        opts: Options,
    },
    /// Print one operator matrix (`f+1`, `b-2`, `tf+1`, `tb-1`, `K`, `H`, `N`).
    DumpOp {
        #[command(flatten)]
        opts: Options,
        operator: String,
    },
    /// Print the occupation-number basis.
    Basis {
        #[command(flatten)]
        opts: Options,
    },
    /// Print the eigenvalues of a diagonal operator with multiplicities.
    Spectrum {
        #[command(flatten)]
        opts: Options,
        #[arg(default_value = "N")]
        operator: String,
    },
    /// Check that deliberately broken constructions are caught.
    Selfcheck {
        #[command(flatten)]
        opts: Options,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MutantArg {
    DropBosonDressing,
    UnsignedTilde,
    TrivialKlein,
}

impl From<MutantArg> for Mutation {
    fn from(m: MutantArg) -> Mutation {
        match m {
            MutantArg::DropBosonDressing => Mutation::DropBosonDressing,
            MutantArg::UnsignedTilde => Mutation::UnsignedTilde,
            MutantArg::TrivialKlein => Mutation::TrivialKlein,
        }
    }
}

#[derive(Args, Debug)]
struct Options {
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    p: usize,
    #[arg(long = "boson-cutoff", default_value_t = 4)]
    boson_cutoff: usize,
    /// `all` or a comma-separated list such as `PF,PB,REL_PF`.
    #[arg(long, default_value = "all")]
    families: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "dimension-cap", default_value_t = DEFAULT_DIMENSION_CAP)]
    dimension_cap: usize,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

impl Options {
    fn spec(&self) -> ModeSpec {
        ModeSpec::new(self.m, self.n, self.p, self.boson_cutoff)
    }

    fn suite(&self) -> Result<SuiteConfig, ConfigError> {
        let mut cfg = SuiteConfig::new(self.spec())
            .with_families(FamilySelection::parse(&self.families)?)
            .with_seed(self.seed);
        cfg.dimension_cap = self.dimension_cap;
        Ok(cfg)
    }
}

/// A named operator from the dump grammar.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorName {
    Plain(Generator),
    Tilde(Generator),
    Klein,
    Cartan,
    Number,
}

impl std::str::FromStr for OperatorName {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || ConfigError::UnknownOperator(s.to_string());
        match s {
            "K" => Ok(OperatorName::Klein),
            "H" => Ok(OperatorName::Cartan),
            "N" => Ok(OperatorName::Number),
            _ => match s.strip_prefix('t') {
                Some(rest) => rest.parse().map(OperatorName::Tilde).map_err(|_| unknown()),
                None => s.parse().map(OperatorName::Plain).map_err(|_| unknown()),
            },
        }
    }
}

pub fn operator_matrix(rep: &Representation, name: OperatorName) -> Result<&SparseMatrix, ConfigError> {
    match name {
        OperatorName::Plain(g) => rep.operator(g),
        OperatorName::Tilde(g) => rep.tilde(g),
        OperatorName::Klein => Ok(rep.operator_k()),
        OperatorName::Cartan => Ok(rep.operator_h()),
        OperatorName::Number => Ok(rep.operator_n()),
    }
}

#[derive(Serialize)]
struct MatrixJson {
    operator: String,
    dim: usize,
    nnz: usize,
    /// `[row, col, "p/q"]` in `(col, row)` order.
    entries: Vec<(usize, usize, String)>,
}

#[derive(Serialize)]
struct BasisJson {
    index: usize,
    fermions: String,
    bosons: Vec<usize>,
    level: usize,
}

#[derive(Serialize)]
struct SpectrumJson {
    operator: String,
    dim: usize,
    eigenvalues: Vec<EigenvalueJson>,
}

#[derive(Serialize)]
struct EigenvalueJson {
    value: String,
    multiplicity: usize,
}

fn spectrum(matrix: &SparseMatrix, name: &str) -> Result<BTreeMap<Rational, usize>, ConfigError> {
    if !matrix.is_diagonal() {
        return Err(ConfigError::NotDiagonal(name.to_string()));
    }
    let mut counts = BTreeMap::new();
    for v in matrix.diagonal_entries() {
        *counts.entry(v).or_insert(0) += 1;
    }
    Ok(counts)
}

fn render_report(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

/// Output text and exit status, or a configuration error.
fn execute(command: &Command) -> Result<(String, i32), ConfigError> {
    let report_outcome = |report: Report, format: Format| {
        let code = if report.passed() { EXIT_PASS } else { EXIT_FAIL };
        (render_report(&report, format), code)
    };
    match command {
        Command::Verify { opts, symbolic_only, mutant } => {
            let mut cfg = opts.suite()?;
            cfg.symbolic_only = *symbolic_only;
            let report = match mutant {
                Some(m) if !*symbolic_only => mutant_report(&cfg, (*m).into())?,
                _ => run_matrix_suite(&cfg)?,
            };
            Ok(report_outcome(report, opts.format))
        }
        Command::Symbolic { opts } => {
            Ok(report_outcome(symbolic_tilde_identities(opts.m, opts.n)?, opts.format))
        }
        Command::Selfcheck { opts } => Ok(report_outcome(mutation_selfcheck(&opts.suite()?)?, opts.format)),
        Command::DumpOp { opts, operator } => {
            let name: OperatorName = operator.parse()?;
            let rep = Representation::build(opts.spec(), opts.dimension_cap)?;
            let matrix = operator_matrix(&rep, name)?;
            let text = match opts.format {
                Format::Text => matrix.dump(),
                Format::Json => json(&MatrixJson {
                    operator: operator.clone(),
                    dim: matrix.dim(),
                    nnz: matrix.nnz(),
                    entries: matrix.entries().map(|(r, c, v)| (r, c, v.to_string())).collect(),
                }),
            };
            Ok((text, EXIT_PASS))
        }
        Command::Basis { opts } => {
            let basis = Basis::build(opts.spec(), opts.dimension_cap)?;
            let text = match opts.format {
                Format::Text => basis.dump(),
                Format::Json => json(
                    &basis
                        .states()
                        .iter()
                        .enumerate()
                        .map(|(index, s)| BasisJson {
                            index,
                            fermions: s.fermions.iter().map(|&b| if b { '1' } else { '0' }).collect(),
                            bosons: s.bosons.clone(),
                            level: s.level(),
                        })
                        .collect::<Vec<_>>(),
                ),
            };
            Ok((text, EXIT_PASS))
        }
        Command::Spectrum { opts, operator } => {
            let name: OperatorName = operator.parse()?;
            let rep = Representation::build(opts.spec(), opts.dimension_cap)?;
            let counts = spectrum(operator_matrix(&rep, name)?, operator)?;
            let text = match opts.format {
                Format::Text => counts
                    .iter()
                    .map(|(v, c)| format!("{v} {c}\n"))
                    .collect::<String>(),
                Format::Json => json(&SpectrumJson {
                    operator: operator.clone(),
                    dim: rep.dim(),
                    eigenvalues: counts
                        .iter()
                        .map(|(v, &c)| EigenvalueJson { value: v.to_string(), multiplicity: c })
                        .collect(),
                }),
            };
            Ok((text, EXIT_PASS))
        }
    }
}

fn output_path(command: &Command) -> Option<&PathBuf> {
    match command {
        Command::Verify { opts, .. }
        | Command::Symbolic { opts }
        | Command::DumpOp { opts, .. }
        | Command::Basis { opts }
        | Command::Spectrum { opts, .. }
        | Command::Selfcheck { opts } => opts.output.as_ref(),
    }
}

/// Runs one invocation. `argv[0]` is the program name.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(&cli.command) {
        Ok((text, code)) => {
            let written = match output_path(&cli.command) {
                Some(path) => fs::write(path, text.as_bytes()),
                None => out.write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: cannot write output: {e}");
                return EXIT_CONFIG;
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "configuration error: {e}");
            EXIT_CONFIG
        }
    }
}
