use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod figures;
mod run;
mod selftest;
mod settings;

use settings::{config_err, ConfigError, RawSettings, Settings, DEFAULT_SAMPLES, DEFAULT_SEED};

/// Ergodic capacity of a multi-antenna amplify-and-forward relay under
/// co-channel interference.
#[derive(Parser)]
#[command(name = "relaycap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one operating point; one CSV row per scheme and method.
    Eval(PointArgs),
    /// Sweep rho1 (and optionally N); one CSV row per point.
    Sweep(PointArgs),
    /// Reproduce a figure setup: CSV plus a gnuplot sidecar.
    Figure(FigureArgs),
    /// Run the identity and calibration checks.
    Selftest,
}

#[derive(Args)]
struct PointArgs {
    /// key = value file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// mrc, zf or mmse; comma separated for several
    #[arg(long)]
    scheme: Option<String>,
    /// relay antennas (sweep: list or start:stop:step)
    #[arg(long)]
    n: Option<String>,
    /// interferers; a single --rhoi-db value is replicated m times
    #[arg(long)]
    m: Option<String>,
    /// source SNR in dB (sweep: list or start:stop:step)
    #[arg(long = "rho1-db", allow_hyphen_values = true)]
    rho1_db: Option<String>,
    /// relay SNR in dB; defaults to rho1
    #[arg(long = "rho2-db", allow_hyphen_values = true)]
    rho2_db: Option<String>,
    /// interferer INRs in dB, comma separated; ';' separates profiles
    #[arg(long = "rhoi-db", allow_hyphen_values = true)]
    rhoi_db: Option<String>,
    /// mc, analytic, upper, lower, largen or quadrature; comma separated
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    threads: Option<String>,
    /// write the CSV here instead of stdout
    #[arg(long)]
    output: Option<String>,
}

impl PointArgs {
    fn settings(self) -> anyhow::Result<Settings> {
        let base = match &self.config {
            Some(path) => RawSettings::from_file(path)?,
            None => RawSettings::default(),
        };
        let raw = base.overlay([
            ("scheme", self.scheme),
            ("n", self.n),
            ("m", self.m),
            ("rho1-db", self.rho1_db),
            ("rho2-db", self.rho2_db),
            ("rhoi-db", self.rhoi_db),
            ("method", self.method),
            ("samples", self.samples),
            ("seed", self.seed),
            ("threads", self.threads),
            ("output", self.output),
        ]);
        Settings::resolve(&raw)
    }
}

#[derive(Args)]
struct FigureArgs {
    /// figure number, 2 to 8
    id: u32,
    /// Monte Carlo samples per point
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    threads: Option<usize>,
    /// CSV path; the sidecar goes next to it with a .gp extension
    #[arg(long)]
    output: Option<PathBuf>,
}

fn cmd_points(args: PointArgs, single: bool) -> anyhow::Result<()> {
    let s = args.settings()?;
    if single && (s.n.len() != 1 || s.rho1_db.len() != 1) {
        return Err(config_err("eval takes a single --n and --rho1-db; use sweep for ranges"));
    }
    let points = run::expand(&s);
    let estimates = run::evaluate_all(&points, s.threads)?;
    run::emit(&run::csv_rows(&points, &estimates), s.output.as_deref())
}

fn cmd_figure(args: FigureArgs) -> anyhow::Result<()> {
    if args.threads == Some(0) {
        return Err(config_err("--threads must be at least 1"));
    }
    let fig = figures::preset(args.id, args.samples, args.seed)?;
    let estimates = run::evaluate_all(&fig.points, args.threads)?;
    let csv_path = args.output.unwrap_or_else(|| PathBuf::from(format!("figure{}.csv", fig.id)));
    let gp_path = csv_path.with_extension("gp");
    let csv_name = csv_path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let caps: Vec<f64> = estimates.iter().map(|e| e.value).collect();
    let sidecar = figures::gnuplot(&fig, &csv_name, &caps);
    run::write_atomic(&csv_path, &run::render_csv(&run::csv_rows(&fig.points, &estimates)))?;
    run::write_atomic(&gp_path, &sidecar)?;
    eprintln!("wrote {} and {}", csv_path.display(), gp_path.display());
    Ok(())
}

// 2 for configuration problems, 3 for numeric failures, 1 otherwise
fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<ConfigError>().is_some() {
        return 2;
    }
    match err.downcast_ref::<relaycap::Error>() {
        Some(e) if e.is_config_error() => 2,
        Some(_) => 3,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval(a) => cmd_points(a, true),
        Command::Sweep(a) => cmd_points(a, false),
        Command::Figure(a) => cmd_figure(a),
        Command::Selftest => selftest::run(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("relaycap: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
