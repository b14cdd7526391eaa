use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context as _, Result};
use cartan_super::cohomology::{derivation_space, h2_trivial, CohomologyReport, Mode};
use cartan_super::verify::{run_suite, Suite, SuiteOptions};
use cartan_super::weights::{render_weight_table, weight_table};
use cartan_super::{build_algebra, CartanParams, Family, GradedAlgebra};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "cartan-super",
    version,
    about = "Odd Hamiltonian and odd contact Lie superalgebras over F_p"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, ValueEnum)]
enum FamilyArg {
    #[value(name = "HO", alias = "ho")]
    Ho,
    #[value(name = "KO", alias = "ko")]
    Ko,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Ho => Family::HO,
            FamilyArg::Ko => Family::KO,
        }
    }
}

#[derive(clap::Args)]
struct ParamArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    n: usize,
    /// Comma-separated truncation exponents, one per even variable.
    #[arg(long, value_delimiter = ',', required = true)]
    t: Vec<u32>,
    #[arg(long)]
    p: u32,
}

impl ParamArgs {
    fn params(&self) -> Result<CartanParams> {
        Ok(CartanParams::new(
            self.family.into(),
            self.n,
            &self.t,
            self.p,
        )?)
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum What {
    H2,
    H1dual,
}

#[derive(Copy, Clone, ValueEnum)]
enum ModeArg {
    Full,
    Blockwise,
}

#[derive(Copy, Clone, ValueEnum)]
enum SuiteArg {
    All,
    Fast,
}

#[derive(Subcommand)]
enum Command {
    /// Build HO or KO and print its basis and structure constants as JSON.
    Construct {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Weight table of a constructed algebra.
    Weights {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        degree: Option<i32>,
        /// Plain text instead of JSON.
        #[arg(long)]
        table: bool,
    },
    /// H^2 with trivial coefficients, or H^1 with coefficients in the dual.
    Cohomology {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        what: What,
        #[arg(long, value_enum, default_value = "blockwise")]
        mode: ModeArg,
    },
    /// Run the verification suite.
    Verify {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        /// Exhaustive super-Jacobi over all basis triples.
        #[arg(long)]
        long: bool,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Record wall time per check in the JSON report.
        #[arg(long)]
        timing: bool,
    },
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("CARTAN_SUPER_THREADS") {
        let n: usize = v.parse().with_context(|| {
            format!("CARTAN_SUPER_THREADS must be a positive integer, got {v:?}")
        })?;
        if n == 0 {
            bail!("CARTAN_SUPER_THREADS must be positive");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    Ok(())
}

fn load(path: &PathBuf) -> Result<GradedAlgebra> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    GradedAlgebra::from_json_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n"))
            .with_context(|| format!("writing {}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    configure_threads()?;
    match cli.command {
        Command::Construct { params, out } => {
            let x = build_algebra(&params.params()?)?;
            emit(&x.to_json_string(), out.as_ref())?;
        }
        Command::Weights {
            input,
            degree,
            table,
        } => {
            let x = load(&input)?;
            let rows = weight_table(&x, degree)?;
            if table {
                print!("{}", render_weight_table(&rows));
            } else {
                println!("{}", serde_json::to_string_pretty(&rows)?);
            }
        }
        Command::Cohomology { input, what, mode } => {
            let x = load(&input)?;
            let report = CohomologyReport::new(&x);
            let report = match what {
                What::H2 => {
                    let mode = match mode {
                        ModeArg::Full => Mode::Full,
                        ModeArg::Blockwise => Mode::Blockwise,
                    };
                    report.with_h2(&h2_trivial(&x, mode)?)
                }
                What::H1dual => report.with_h1(&derivation_space(&x, false)?),
            };
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::Verify {
            params,
            suite,
            long,
            json,
            timing,
        } => {
            let opts = SuiteOptions {
                suite: match suite {
                    SuiteArg::All => Suite::All,
                    SuiteArg::Fast => Suite::Fast,
                },
                long,
                timing,
                ..SuiteOptions::default()
            };
            let report = run_suite(&params.params()?, &opts)?;
            print!("{}", report.render());
            if let Some(path) = json {
                fs::write(&path, format!("{}\n", report.to_json_string()))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            return Ok(!report.failed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
