use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use workstats_cli::config::RunConfig;
use workstats_cli::{commands, init_thread_pool, validate, CliError};

#[derive(Parser)]
#[command(
    name = "workstats",
    version,
    about = "Work statistics for sudden quenches of spin-chain Hamiltonians"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct CommonArgs {
    /// TOML configuration file; omit to start from the built-in defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a config key, e.g. --set quench.n_sites=100 (repeatable;
    /// overrides win over the file).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Thermodynamic sweep over lambda0: magnetization, susceptibilities,
    /// free energy, lag.
    Sweep(CommonArgs),
    /// Re chi on a (lambda0, u) grid.
    ChiGrid(CommonArgs),
    /// Equipotential curves u_c(lambda0) of Re chi and their derivatives.
    Levelset(CommonArgs),
    /// Work cumulants K_1..K_max over a lambda0 sweep.
    Cumulants(CommonArgs),
    /// Run the full validation suite; nonzero exit on any failure.
    Validate(CommonArgs),
    /// Two Re chi grids related by the (N, dlam) scaling plus their
    /// difference.
    ScalingReport(CommonArgs),
    /// Perturbative upper bound on the ramp time of a sudden quench.
    SuddenBound(CommonArgs),
}

fn run(cmd: &Command) -> Result<(), CliError> {
    let (name, args) = match cmd {
        Command::Sweep(a) => ("sweep", a),
        Command::ChiGrid(a) => ("chi-grid", a),
        Command::Levelset(a) => ("levelset", a),
        Command::Cumulants(a) => ("cumulants", a),
        Command::Validate(a) => ("validate", a),
        Command::ScalingReport(a) => ("scaling-report", a),
        Command::SuddenBound(a) => ("sudden-bound", a),
    };
    let cfg = RunConfig::load(args.config.as_deref(), &args.set)?;
    let out_dir = args.out.as_path();

    let files = match name {
        "sweep" => commands::run_sweep(&cfg, out_dir)?,
        "chi-grid" => commands::run_chi_grid(&cfg, out_dir)?,
        "levelset" => commands::run_levelset(&cfg, out_dir)?,
        "cumulants" => commands::run_cumulants(&cfg, out_dir)?,
        "scaling-report" => commands::run_scaling_report(&cfg, out_dir)?,
        "sudden-bound" => commands::run_sudden_bound(&cfg, out_dir)?,
        "validate" => {
            let results = validate::run_all();
            let report = validate::render_report(&results);
            print!("{report}");
            std::fs::create_dir_all(out_dir).map_err(|e| CliError::Io(e.to_string()))?;
            let path = out_dir.join("validate.report.txt");
            std::fs::write(&path, &report).map_err(|e| CliError::Io(e.to_string()))?;
            println!("report written to {}", path.display());
            let failed: Vec<&str> = results
                .iter()
                .filter(|r| !r.passed)
                .map(|r| r.id.as_str())
                .collect();
            if !failed.is_empty() {
                return Err(CliError::ValidationFailed(format!(
                    "criteria {{{}}} failed",
                    failed.join(", ")
                )));
            }
            return Ok(());
        }
        _ => unreachable!(),
    };
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    init_thread_pool();
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
