//! `acf` command line: analyze symmetry structure, synthesize circuits for
//! block targets, simulate and verify, and generate seeded test targets.
//!
//! Exit codes: 0 success, 1 generic failure, 2 parse error, 3 resource
//! budget exceeded, 4 phase obstruction in strict synthesis.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use acf_core::compile::{synth_block_unitary, synth_block_unitary_with_ancilla};
use acf_core::gates::Circuit;
use acf_core::problem::{ProblemSpec, ResourceBudget};
use acf_core::reach::{components, ComponentTable};
use acf_core::report::{run_analyze, run_simulate, run_verify, synth_report};
use acf_core::sector::enumerate_sectors;
use acf_core::target::{sample_block_target, BlockTarget};
use acf_core::AcfError;

#[derive(Parser)]
#[command(
    name = "acf",
    about = "Analysis and synthesis of quantum circuits with Abelian global symmetries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Problem document: {"moduli":[..],"d":..,"letter_charges":[[..],..],"n":..,"k":..}
    #[arg(long)]
    spec: PathBuf,
    /// Override the gate locality k from the spec file.
    #[arg(long)]
    k: Option<usize>,
    /// Override the dense dimension cap (also: ACF_DENSE_CAP).
    #[arg(long)]
    cap: Option<u128>,
}

#[derive(Subcommand)]
enum Command {
    /// Sector, invariant-subspace, and dimension report.
    Analyze {
        #[command(flatten)]
        common: Common,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile a block target into a gate sequence.
    Synth {
        #[command(flatten)]
        common: Common,
        /// Block-target JSON document.
        #[arg(long)]
        target: PathBuf,
        /// Output circuit file.
        #[arg(long)]
        out: PathBuf,
        /// Reject blocks whose determinant is not 1.
        #[arg(long)]
        strict: bool,
        /// Route left-over block phases through one ancilla qudit.
        #[arg(long)]
        ancilla: bool,
    },
    /// Re-simulate a circuit; optionally compare against a target.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        target: Option<PathBuf>,
    },
    /// Dense cross-checks: Lie closure and commutant versus the analysis.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Run the dense oracle cross-checks (default; kept for interface
        /// stability).
        #[arg(long, default_value_t = true)]
        oracle: bool,
    },
    /// Seeded Haar-per-block strict target for reproducible runs.
    GenTarget {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn exit_code_for(err: &AcfError) -> u8 {
    match err {
        AcfError::Parse(_) | AcfError::Structure(_) => 2,
        AcfError::Resource { .. } => 3,
        AcfError::PhaseObstruction(_) => 4,
        _ => 1,
    }
}

fn read_to_string(path: &Path) -> Result<String, AcfError> {
    std::fs::read_to_string(path)
        .map_err(|e| AcfError::Parse(format!("{}: {e}", path.display())))
}

/// Write via a temp file in the same directory so failures never leave a
/// partial document behind.
fn write_atomic(path: &Path, contents: &str) -> Result<(), AcfError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or(Path::new(".")))
        .map_err(|e| AcfError::Parse(format!("temp file: {e}")))?;
    use std::io::Write;
    tmp.write_all(contents.as_bytes())
        .map_err(|e| AcfError::Parse(format!("write: {e}")))?;
    tmp.persist(path)
        .map_err(|e| AcfError::Parse(format!("persist {}: {e}", path.display())))?;
    Ok(())
}

fn load_spec(common: &Common) -> Result<(ProblemSpec, ResourceBudget), AcfError> {
    let text = read_to_string(&common.spec)?;
    let mut spec = ProblemSpec::from_json(&text)?;
    if let Some(k) = common.k {
        spec = spec.with_k(k)?;
    }
    let budget = match common.cap {
        Some(cap) => ResourceBudget::with_dense_cap(cap),
        None => ResourceBudget::default(),
    };
    Ok((spec, budget))
}

fn component_table(
    spec: &ProblemSpec,
    budget: &ResourceBudget,
) -> Result<ComponentTable, AcfError> {
    let table = enumerate_sectors(&spec.rep, &spec.group, spec.n, budget)?;
    components(&table, spec.k)
}

fn run(cli: Cli) -> Result<(), AcfError> {
    match cli.command {
        Command::Analyze { common, out } => {
            let (spec, budget) = load_spec(&common)?;
            let report = run_analyze(&spec, &budget)?;
            let text = serde_json::to_string_pretty(&report)
                .map_err(|e| AcfError::Parse(e.to_string()))?;
            match out {
                Some(path) => write_atomic(&path, &text)?,
                None => println!("{text}"),
            }
        }
        Command::Synth {
            common,
            target,
            out,
            strict,
            ancilla,
        } => {
            let (spec, budget) = load_spec(&common)?;
            let ct = component_table(&spec, &budget)?;
            let target = BlockTarget::from_json(&read_to_string(&target)?, &ct)?;
            let (circuit, unrealized) = if ancilla {
                (synth_block_unitary_with_ancilla(&target, &ct)?, Vec::new())
            } else {
                let outcome = synth_block_unitary(&target, &ct, strict)?;
                (outcome.circuit, outcome.unrealized)
            };
            let report = synth_report(strict, ancilla, circuit.len(), &unrealized);
            write_atomic(&out, &circuit.to_json())?;
            println!(
                "{}",
                serde_json::to_string_pretty(&report).map_err(|e| AcfError::Parse(e.to_string()))?
            );
        }
        Command::Simulate {
            common,
            circuit,
            target,
        } => {
            let (spec, budget) = load_spec(&common)?;
            let circuit = Circuit::from_json(&read_to_string(&circuit)?)?;
            let target = match target {
                Some(path) => {
                    let ct = component_table(&spec, &budget)?;
                    Some(BlockTarget::from_json(&read_to_string(&path)?, &ct)?)
                }
                None => None,
            };
            let report = run_simulate(&spec, &circuit, target.as_ref(), &budget)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&report).map_err(|e| AcfError::Parse(e.to_string()))?
            );
        }
        Command::Verify { common, oracle } => {
            let (spec, budget) = load_spec(&common)?;
            let _ = oracle;
            let report = run_verify(&spec, &budget)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&report).map_err(|e| AcfError::Parse(e.to_string()))?
            );
        }
        Command::GenTarget { common, seed, out } => {
            let (spec, budget) = load_spec(&common)?;
            let ct = component_table(&spec, &budget)?;
            // materializing blocks needs the dense scale anyway
            budget.check_dense(spec.rep.d(), spec.n)?;
            let target = sample_block_target(&ct, seed);
            write_atomic(&out, &target.to_json())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
