use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use maass_cli::{
    cmd_bessel_identity, cmd_chi10, cmd_classes, cmd_sweep, cmd_verify_maass, load_table, parse_list_i64,
    parse_list_u64, ClassesMode, CliError, Format, Report, SweepSpec, EXIT_USAGE,
};

#[derive(Parser)]
#[command(name = "maass", version, about = "Quadratic form classes, ray class sizes and Maass relation checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Gamma^0(N)-classes of H(dM^2, L; Gamma^0(N)): formula and enumeration
    Classes {
        #[arg(short = 'd', allow_negative_numbers = true)]
        d: i64,
        #[arg(short = 'M', default_value_t = 1)]
        m: u64,
        #[arg(short = 'L', default_value_t = 1)]
        l: u64,
        #[arg(short = 'N', default_value_t = 1)]
        n: u64,
        #[arg(long, conflicts_with = "enumerate")]
        formula_only: bool,
        #[arg(long)]
        enumerate: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Formula, H_1, Corollary and ray class checks over a grid
    Sweep {
        /// discriminants, e.g. `-3,-4,-7`
        #[arg(short = 'd', long = "d", allow_hyphen_values = true)]
        ds: Option<String>,
        /// e.g. `1..3`
        #[arg(short = 'M', long = "m")]
        ms: Option<String>,
        #[arg(short = 'L', long = "l")]
        ls: Option<String>,
        #[arg(short = 'N', long = "n")]
        ns: Option<String>,
        /// run the full acceptance grid; explicit lists override its axes
        #[arg(long)]
        acceptance: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Symbolic check of the Bessel product identity for all L*M <= lm-max
    BesselIdentity {
        #[arg(long, default_value_t = 200)]
        lm_max: u64,
        #[arg(long, default_value = "1,2,3,4,6,12")]
        n2: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Write the theta-product table of chi_10 in SFC format
    Chi10 {
        #[arg(long)]
        bound: u64,
        #[arg(short = 'o', long)]
        output: PathBuf,
    },
    /// Check the Maass relations on an SFC table
    VerifyMaass {
        file: PathBuf,
        /// level-(N1, N2) relations instead of the classical ones
        #[arg(long = "level-N", alias = "level-n")]
        level_n: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

fn list_or(arg: Option<String>, default: Vec<u64>) -> Result<Vec<u64>, CliError> {
    arg.map_or(Ok(default), |s| parse_list_u64(&s)).map_err(CliError::Usage)
}

fn run(cli: Cli) -> Result<Report, CliError> {
    match cli.command {
        Command::Classes { d, m, l, n, formula_only, enumerate, format } => {
            let mode = match (formula_only, enumerate) {
                (true, _) => ClassesMode::FormulaOnly,
                (_, true) => ClassesMode::EnumerateOnly,
                _ => ClassesMode::Both,
            };
            cmd_classes(d, m, l, n, mode, format)
        }
        Command::Sweep { ds, ms, ls, ns, acceptance, format } => {
            let base = if acceptance {
                SweepSpec::acceptance()
            } else {
                SweepSpec { ds: vec![], ms: vec![1], ls: vec![1], ns: vec![1] }
            };
            let spec = SweepSpec::new(
                ds.map_or(Ok(base.ds), |s| parse_list_i64(&s)).map_err(CliError::Usage)?,
                list_or(ms, base.ms)?,
                list_or(ls, base.ls)?,
                list_or(ns, base.ns)?,
            )?;
            Ok(cmd_sweep(&spec, format))
        }
        Command::BesselIdentity { lm_max, n2, format } => {
            let n2 = parse_list_u64(&n2).map_err(CliError::Usage)?;
            cmd_bessel_identity(lm_max, &n2, format)
        }
        Command::Chi10 { bound, output } => cmd_chi10(bound, &output),
        Command::VerifyMaass { file, level_n, format } => {
            let table = load_table(&file)?;
            cmd_verify_maass(&table, level_n, format)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(report) => {
            print!("{}", report.text);
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
