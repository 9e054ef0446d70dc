//! Command-line driver: validate Lie algebra inputs, run tableau checks,
//! build Cartan tableaux, and emit Pfaffian systems and reports.
//!
//! Exit codes: 0 = pass, 1 = mathematical failure (a check did not hold),
//! 2 = input error (unreadable file, bad JSON, missing data).
//!
//! Inputs are JSON files; anywhere a path is expected, `catalog:<name>`
//! pulls the named built-in entry instead.

use std::fs;
use std::process::ExitCode;

use cartan_tableaux::cartan::{verify_cartan_tableau, DecompositionInput};
use cartan_tableaux::catalog::{self, CatalogItem};
use cartan_tableaux::gg0::{emit_gg0, gg0_residual, GG0Grid};
use cartan_tableaux::pfaffian::emit_system;
use cartan_tableaux::tableau::{ConditionOutcome, FlagMode, TableauSpec};
use cartan_tableaux::{Error as CoreError, LieAlgebra};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "cartan-tableaux", version, about = "Tableaux over Lie algebras and their Pfaffian systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed for randomized searches; CARTAN_TABLEAUX_SEED overrides the
    /// default, this flag overrides both.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Number of random flags sampled when hunting for a generic flag.
    #[arg(long, global = true, default_value_t = 32)]
    trials: usize,

    /// Certify generic flags symbolically instead of by sampling.
    #[arg(long, global = true, default_value_t = false)]
    exact_flags: bool,

    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a Lie algebra: structure constants and the Jacobi identity.
    CheckLie { path: String },

    /// Tableau operations.
    Tableau {
        #[command(subcommand)]
        op: TableauOp,
    },

    /// Cartan tableaux from symmetric decompositions.
    Cartan {
        #[command(subcommand)]
        op: CartanOp,
    },

    /// The Pfaffian system of a tableau and its invariants.
    Pfaffian {
        #[command(subcommand)]
        op: PfaffianOp,
    },

    /// Built-in example entries.
    Catalog {
        #[command(subcommand)]
        op: CatalogOp,
    },
}

#[derive(Subcommand)]
enum TableauOp {
    /// Run all three defining conditions.
    Check { path: String },
    /// Characters along a generic flag.
    Characters { path: String },
    /// First prolongation basis and dimension.
    Prolong { path: String },
    /// Cartan's test on the tableau side.
    Involution { path: String },
}

#[derive(Subcommand)]
enum CartanOp {
    /// Build the Cartan tableau of a symmetric decomposition.
    Build { path: String },
    /// Build and verify the full property suite.
    Verify { path: String },
}

#[derive(Subcommand)]
enum PfaffianOp {
    /// Emit the generator 1-forms and independence condition.
    Emit { path: String },
    /// Structure equations: torsion and its absorption.
    Torsion { path: String },
    /// Involutivity from both the tableau and the system side.
    CartanTest { path: String },
    /// The compatibility PDE of a symmetric space.
    Gg0 { path: String },
    /// Finite-difference residual of a sampled map on a grid.
    Residual {
        path: String,
        /// Grid JSON: {"axes": [[...]], "V": nested arrays}.
        #[arg(long)]
        grid: String,
        /// Fail (exit 1) if any residual exceeds this bound.
        #[arg(long)]
        tolerance: Option<f64>,
    },
}

#[derive(Subcommand)]
enum CatalogOp {
    /// List the built-in entries.
    List,
    /// Export an entry as a standard input file.
    Dump { name: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let seed = cli.run.seed.unwrap_or_else(|| {
        std::env::var("CARTAN_TABLEAUX_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(0)
    });
    let mode = if cli.run.exact_flags {
        FlagMode::Exact { seed }
    } else {
        FlagMode::Randomized {
            seed,
            trials: cli.run.trials.max(1),
        }
    };
    match run(&cli.command, &cli.run, mode, seed) {
        Ok((output, pass)) => {
            if let Some(path) = &cli.run.out {
                if let Err(e) = fs::write(path, &output) {
                    eprintln!("error: cannot write {path}: {e}");
                    return ExitCode::from(2);
                }
            } else {
                print!("{output}");
                if !output.ends_with('\n') && !output.is_empty() {
                    println!();
                }
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

#[derive(Debug)]
enum CliError {
    Core(CoreError),
    Input(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Input(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

fn exit_code_for(e: &CliError) -> u8 {
    match e {
        CliError::Input(_) => 2,
        CliError::Core(core) => match core {
            CoreError::InvalidInput(_) | CoreError::Json(_) | CoreError::DimensionMismatch(_) => 2,
            CoreError::Precondition(_)
            | CoreError::Condition { .. }
            | CoreError::NoRegularBasis { .. }
            | CoreError::FlagWitnessNotFound { .. } => 1,
        },
    }
}

type CmdResult = Result<(String, bool), CliError>;

fn run(command: &Command, args: &RunArgs, mode: FlagMode, seed: u64) -> CmdResult {
    match command {
        Command::CheckLie { path } => check_lie(path, args),
        Command::Tableau { op } => tableau(op, args, mode),
        Command::Cartan { op } => cartan(op, args, mode),
        Command::Pfaffian { op } => pfaffian(op, args, mode, seed),
        Command::Catalog { op } => catalog_cmd(op, args),
    }
}

fn read_input(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))
}

fn load_algebra(path: &str) -> Result<LieAlgebra, CliError> {
    if let Some(name) = path.strip_prefix("catalog:") {
        return match catalog::build(name) {
            Some(CatalogItem::Algebra(l)) => Ok(l),
            Some(CatalogItem::Tableau(t)) => Ok(t.algebra),
            Some(CatalogItem::Decomposition { decomposition, .. }) => Ok(decomposition.algebra),
            None => Err(CliError::Input(format!("unknown catalog entry {name:?}"))),
        };
    }
    let text = read_input(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{path}: {e}")))
}

fn load_tableau(path: &str) -> Result<TableauSpec, CliError> {
    if let Some(name) = path.strip_prefix("catalog:") {
        return match catalog::build(name) {
            Some(CatalogItem::Tableau(t)) => Ok(t),
            Some(CatalogItem::Decomposition {
                decomposition,
                abelian,
            }) => Ok(decomposition.build_cartan_tableau(&abelian)?.0),
            Some(CatalogItem::Algebra(_)) => Err(CliError::Input(format!(
                "catalog entry {name:?} is an algebra, not a tableau"
            ))),
            None => Err(CliError::Input(format!("unknown catalog entry {name:?}"))),
        };
    }
    let text = read_input(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{path}: {e}")))
}

fn load_decomposition(path: &str) -> Result<DecompositionInput, CliError> {
    if let Some(name) = path.strip_prefix("catalog:") {
        return match catalog::build(name) {
            Some(CatalogItem::Decomposition {
                decomposition,
                abelian,
            }) => Ok(DecompositionInput {
                decomposition,
                abelian: Some(abelian),
            }),
            Some(_) => Err(CliError::Input(format!(
                "catalog entry {name:?} is not a symmetric decomposition"
            ))),
            None => Err(CliError::Input(format!("unknown catalog entry {name:?}"))),
        };
    }
    let text = read_input(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{path}: {e}")))
}

fn json_out(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization");
    s.push('\n');
    s
}

fn check_lie(path: &str, args: &RunArgs) -> CmdResult {
    let algebra = load_algebra(path)?;
    let violations = algebra.check_jacobi();
    let pass = violations.is_empty();
    let output = match args.format {
        Format::Json => json_out(&serde_json::json!({
            "dim": algebra.dim(),
            "basis": algebra.basis_names(),
            "antisymmetry": "encoded in the storage (i < j only)",
            "jacobi": if pass { serde_json::json!("pass") } else {
                serde_json::json!({"violations": violations})
            },
        })),
        _ => {
            let mut s = format!("dim {}\nantisymmetry: encoded in the storage\n", algebra.dim());
            if pass {
                s.push_str("jacobi: pass\n");
            } else {
                s.push_str("jacobi: FAIL\n");
                for (i, j, k) in &violations {
                    s.push_str(&format!("  violated at basis triple ({i}, {j}, {k})\n"));
                }
            }
            s
        }
    };
    Ok((output, pass))
}

fn condition_line(name: &str, outcome: &ConditionOutcome) -> String {
    match outcome {
        ConditionOutcome::Pass => format!("{name}: pass\n"),
        ConditionOutcome::Fail { witness } => format!(
            "{name}: FAIL at pair ({}, {}), component {}: {}\n",
            witness.pair.0 + 1,
            witness.pair.1 + 1,
            witness.component,
            witness.poly
        ),
        ConditionOutcome::Skipped { reason } => format!("{name}: skipped ({reason})\n"),
    }
}

fn tableau(op: &TableauOp, args: &RunArgs, mode: FlagMode) -> CmdResult {
    match op {
        TableauOp::Check { path } => {
            let spec = load_tableau(path)?;
            let report = spec.is_tableau_over(mode)?;
            let output = match args.format {
                Format::Json => json_out(&serde_json::to_value(&report).map_err(CoreError::from)?),
                _ => {
                    let mut s = String::new();
                    s.push_str(&condition_line("condition 1 (curvature)", &report.condition1));
                    s.push_str(&condition_line("condition 2 (torsion)", &report.condition2));
                    s.push_str(&format!(
                        "condition 3 (involutivity): {} ({} {} {})\n",
                        report.condition3.involutive,
                        report.condition3.prolongation_dim,
                        if report.condition3.involutive { "=" } else { "<" },
                        report.condition3.weighted_character_sum
                    ));
                    s.push_str(&format!("tableau over the algebra: {}\n", report.overall));
                    s
                }
            };
            Ok((output, report.overall))
        }
        TableauOp::Characters { path } => {
            let spec = load_tableau(path)?;
            let report = spec.characters(mode)?;
            let output = match args.format {
                Format::Json => json_out(&serde_json::to_value(&report).map_err(CoreError::from)?),
                _ => {
                    let chars: Vec<String> = report
                        .characters
                        .iter()
                        .enumerate()
                        .map(|(j, s)| format!("s{}={s}", j + 1))
                        .collect();
                    format!("s0={} {}\n", report.s0, chars.join(" "))
                }
            };
            Ok((output, true))
        }
        TableauOp::Prolong { path } => {
            let spec = load_tableau(path)?;
            let result = spec.prolongation();
            let output = match args.format {
                Format::Json => json_out(&serde_json::json!({
                    "dim": result.dim,
                    "basis": result.basis,
                })),
                _ => {
                    let mut s = format!("dim {}\n", result.dim);
                    for (idx, f) in result.basis.iter().enumerate() {
                        s.push_str(&format!("F{} = {f:?}", idx + 1));
                    }
                    s
                }
            };
            Ok((output, true))
        }
        TableauOp::Involution { path } => {
            let spec = load_tableau(path)?;
            let report = spec.involution_test(mode)?;
            let output = match args.format {
                Format::Json => json_out(&serde_json::to_value(&report).map_err(CoreError::from)?),
                _ => format!(
                    "involutive: {} ({} {} {})\n",
                    report.involutive,
                    report.prolongation_dim,
                    if report.involutive { "=" } else { "<" },
                    report.weighted_character_sum
                ),
            };
            Ok((output, report.involutive))
        }
    }
}

fn cartan(op: &CartanOp, args: &RunArgs, mode: FlagMode) -> CmdResult {
    let (path, verify) = match op {
        CartanOp::Build { path } => (path, false),
        CartanOp::Verify { path } => (path, true),
    };
    let input = load_decomposition(path)?;
    let abelian = input.abelian.clone().ok_or_else(|| {
        CliError::Input("decomposition input has no \"a\" (maximal abelian subspace)".into())
    })?;
    let (spec, data) = input.decomposition.build_cartan_tableau(&abelian)?;
    if !verify {
        let output = match args.format {
            Format::Json => json_out(&serde_json::to_value(&spec).map_err(CoreError::from)?),
            _ => format!(
                "built Cartan tableau: dim {} inside Hom(R^{}, R^{})\nregular basis rows: {:?}\n",
                spec.m(),
                spec.k(),
                spec.h(),
                data.regular_basis
            ),
        };
        return Ok((output, true));
    }
    let verification = verify_cartan_tableau(&spec, &data, mode)?;
    let output = match args.format {
        Format::Json => json_out(&serde_json::to_value(&verification).map_err(CoreError::from)?),
        _ => {
            let mut s = String::new();
            s.push_str(&format!("dim m = {}\n", verification.dim_m));
            s.push_str(&format!("characters: {:?}\n", verification.characters));
            s.push_str(&format!(
                "characters match (dim m, 0, ...): {}\n",
                verification.characters_expected
            ));
            s.push_str(&format!(
                "prolongation dim = dim m: {}\n",
                verification.prolongation_matches
            ));
            s.push_str(&format!("mu-map injective: {}\n", verification.mu_injective));
            s.push_str(&format!(
                "mu image = prolongation: {}\n",
                verification.mu_image_equals_prolongation
            ));
            s.push_str(&format!("overall: {}\n", verification.overall));
            s
        }
    };
    Ok((output, verification.overall))
}

fn pfaffian(op: &PfaffianOp, args: &RunArgs, mode: FlagMode, seed: u64) -> CmdResult {
    match op {
        PfaffianOp::Emit { path } => {
            let spec = load_tableau(path)?;
            // Emission presumes the curvature and torsion conditions.
            if let ConditionOutcome::Fail { witness } = spec.curvature_condition()? {
                return Err(CoreError::Condition {
                    condition: 1,
                    detail: format!(
                        "pair ({}, {}), {}: {}",
                        witness.pair.0 + 1,
                        witness.pair.1 + 1,
                        witness.component,
                        witness.poly
                    ),
                }
                .into());
            }
            if let ConditionOutcome::Fail { witness } = spec.torsion_condition()? {
                return Err(CoreError::Condition {
                    condition: 2,
                    detail: format!(
                        "pair ({}, {}), {}: {}",
                        witness.pair.0 + 1,
                        witness.pair.1 + 1,
                        witness.component,
                        witness.poly
                    ),
                }
                .into());
            }
            let sys = emit_system(&spec)?;
            let output = match args.format {
                Format::Json => json_out(&sys.to_json()),
                Format::Latex => sys.render_latex(),
                Format::Text => sys.render_text(),
            };
            Ok((output, true))
        }
        PfaffianOp::Torsion { path } => {
            let spec = load_tableau(path)?;
            let sys = emit_system(&spec)?;
            let sd = sys.absorb_torsion(sys.structure_equations()?)?;
            let output = match args.format {
                Format::Json => json_out(&sd.to_json()),
                Format::Latex => sd.render_latex(),
                Format::Text => {
                    let mut s = format!("sign convention: {}\n", cartan_tableaux::pfaffian::SIGN_CONVENTION);
                    let pairs = spec.pairs();
                    for (idx, t) in sd.torsion.iter().enumerate() {
                        let (pi, j) = (idx / spec.h(), idx % spec.h());
                        let (i, l) = pairs[pi];
                        s.push_str(&format!(
                            "T[eta{}][a{}^a{}] = {}\n",
                            j + 1,
                            i + 1,
                            l + 1,
                            t.render(&spec.coords)
                        ));
                    }
                    s.push_str("absorbed: true (residual torsion identically zero)\n");
                    s
                }
            };
            Ok((output, true))
        }
        PfaffianOp::CartanTest { path } => {
            let spec = load_tableau(path)?;
            let sys = emit_system(&spec)?;
            let report = sys.cartan_test(mode, 10, seed)?;
            let output = match args.format {
                Format::Json => json_out(&serde_json::to_value(&report).map_err(CoreError::from)?),
                _ => {
                    let fmt = |v: &[usize]| {
                        let inner: Vec<String> = v.iter().map(usize::to_string).collect();
                        format!("({})", inner.join(","))
                    };
                    let fiber = report.fiber_dims.first().copied().unwrap_or(0);
                    let mut s = format!(
                        "{} = {}, fiber {}\ninvolutive: {}\n",
                        fmt(&report.tableau_characters),
                        fmt(&report.reduced_characters),
                        fiber,
                        report.involutive
                    );
                    if let Some((j, value)) = report.last_nonzero_character {
                        s.push_str(&format!("last nonzero character: s{j} = {value}\n"));
                    }
                    s
                }
            };
            Ok((output, report.overall))
        }
        PfaffianOp::Gg0 { path } => {
            let input = load_decomposition(path)?;
            let abelian = input.abelian.clone().ok_or_else(|| {
                CliError::Input("decomposition input has no \"a\" (maximal abelian subspace)".into())
            })?;
            let (_, data) = input.decomposition.build_cartan_tableau(&abelian)?;
            let system = emit_gg0(&data)?;
            let output = match args.format {
                Format::Json => json_out(&serde_json::to_value(&system).map_err(CoreError::from)?),
                Format::Latex => system.render_latex(),
                Format::Text => system.render_text(data.decomposition.algebra.basis_names()),
            };
            Ok((output, true))
        }
        PfaffianOp::Residual {
            path,
            grid,
            tolerance,
        } => {
            let input = load_decomposition(path)?;
            let abelian = input.abelian.clone().ok_or_else(|| {
                CliError::Input("decomposition input has no \"a\" (maximal abelian subspace)".into())
            })?;
            let (spec, data) = input.decomposition.build_cartan_tableau(&abelian)?;
            let grid_text = read_input(grid)?;
            let grid_json: serde_json::Value = serde_json::from_str(&grid_text)
                .map_err(|e| CliError::Input(format!("{grid}: {e}")))?;
            let parsed = GG0Grid::from_json(&grid_json, spec.k(), data.m_basis.len())?;
            let residuals = gg0_residual(&data, &parsed)?;
            let pass = match tolerance {
                Some(tol) => residuals.iter().all(|(_, r)| r <= tol),
                None => true,
            };
            let output = match args.format {
                Format::Json => json_out(&serde_json::json!(residuals
                    .iter()
                    .map(|((i, j), r)| serde_json::json!({
                        "pair": [i + 1, j + 1],
                        "max_residual": r,
                    }))
                    .collect::<Vec<_>>())),
                _ => {
                    let mut s = String::new();
                    for ((i, j), r) in &residuals {
                        s.push_str(&format!("pair (x{}, x{}): max residual {r:e}\n", i + 1, j + 1));
                    }
                    s
                }
            };
            Ok((output, pass))
        }
    }
}

fn catalog_cmd(op: &CatalogOp, args: &RunArgs) -> CmdResult {
    match op {
        CatalogOp::List => {
            let entries = catalog::entries();
            let output = match args.format {
                Format::Json => json_out(&serde_json::json!(entries
                    .iter()
                    .map(|e| serde_json::json!({"name": e.name, "summary": e.summary}))
                    .collect::<Vec<_>>())),
                _ => {
                    let mut s = String::new();
                    for e in &entries {
                        s.push_str(&format!("{:<28} {}\n", e.name, e.summary));
                    }
                    s
                }
            };
            Ok((output, true))
        }
        CatalogOp::Dump { name } => {
            let item = catalog::build(name)
                .ok_or_else(|| CliError::Input(format!("unknown catalog entry {name:?}")))?;
            let value = match item {
                CatalogItem::Algebra(l) => serde_json::to_value(&l).map_err(CoreError::from)?,
                CatalogItem::Tableau(t) => serde_json::to_value(&t).map_err(CoreError::from)?,
                CatalogItem::Decomposition {
                    decomposition,
                    abelian,
                } => serde_json::to_value(&DecompositionInput {
                    decomposition,
                    abelian: Some(abelian),
                })
                .map_err(CoreError::from)?,
            };
            Ok((json_out(&value), true))
        }
    }
}
