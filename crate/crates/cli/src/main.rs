use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bandprec::harness::io::{
    correction_report_to_csv, data_to_csv, outside_band_to_csv, read_data_csv, sym_to_csv,
    write_string,
};
use bandprec::{
    build_omega, correction_decay_report, default_bandwidth, empirical_covariance, estimate,
    outside_band_norm, records_to_csv, render_svg, run_sweep, sample, Error, EstimatorConfig,
    ExperimentPlan, Mode, ModelSpec, PlotAxis,
};

/// Banded precision matrix estimation and rate experiments.
#[derive(Parser, Debug)]
#[command(name = "bandprec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the power-law precision matrix as CSV.
    GenerateModel(ModelArgs),
    /// Draw observations from N(0, Ω⁻¹) and write them as CSV, one row each.
    Sample(SampleArgs),
    /// Estimate a banded precision matrix from a data CSV.
    Estimate(EstimateArgs),
    /// Correction-term decay and outside-band norms for the power-law model.
    Diagnose(DiagnoseArgs),
    /// Run a grid of rate trials and write per-trial records.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
struct ModelArgs {
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long)]
    p: usize,
    /// Off-diagonal amplitude.
    #[arg(long, default_value_t = 0.6, allow_negative_numbers = true)]
    rho: f64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("bandwidth").required(true).multiple(true).args(["alpha", "k"]))]
struct EstimateArgs {
    /// Headerless data CSV, one observation per row.
    #[arg(long)]
    input: PathBuf,
    /// Decay exponent; picks k = ⌊n^(1/(2α+1))⌋ when --k is absent.
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Bandwidth; takes precedence over --alpha.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = Mode::Fast)]
    mode: Mode,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    ridge: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DiagnoseArgs {
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long)]
    p: usize,
    #[arg(long, default_value_t = 0.6, allow_negative_numbers = true)]
    rho: f64,
    /// Block sizes for the correction-decay report.
    #[arg(long, value_delimiter = ',', default_value = "4,8,16,32")]
    ms: Vec<usize>,
    /// Bandwidths for the outside-band report.
    #[arg(long, value_delimiter = ',', default_value = "4,8,16")]
    ks: Vec<usize>,
    /// Correction-decay CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Outside-band CSV; skipped when omitted.
    #[arg(long)]
    band_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    alphas: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    ns: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    ps: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = Mode::Fast)]
    mode: Mode,
    #[arg(long, default_value_t = 0.6, allow_negative_numbers = true)]
    rho: f64,
    /// Fixed bandwidth for every trial instead of ⌊n^(1/(2α+1))⌋.
    #[arg(long)]
    k: Option<usize>,
    /// Record CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// SVG plot of mean error per cell.
    #[arg(long)]
    plot: Option<PathBuf>,
    /// `log_p` or `n_rate`.
    #[arg(long, default_value = "log_p")]
    plot_axis: String,
    /// Write 0 for elapsed_ms so that repeated runs give identical bytes.
    #[arg(long)]
    no_timing: bool,
}

fn emit(out: Option<&Path>, contents: &str) -> bandprec::Result<()> {
    match out {
        Some(path) => write_string(path, contents),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(contents.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::Io {
                    path: PathBuf::from("<stdout>"),
                    source: e,
                })
        }
    }
}

fn generate_model(args: ModelArgs) -> bandprec::Result<()> {
    let model = build_omega(ModelSpec::new(args.alpha, args.p).with_rho(args.rho))?;
    emit(args.out.as_deref(), &sym_to_csv(&model.omega))
}

fn sample_data(args: SampleArgs) -> bandprec::Result<()> {
    let m = &args.model;
    let model = build_omega(ModelSpec::new(m.alpha, m.p).with_rho(m.rho))?;
    if args.n == 0 {
        return Err(Error::Parameter("n must be positive".into()));
    }
    let x = sample(&model, args.n, args.seed);
    emit(m.out.as_deref(), &data_to_csv(&x))
}

fn estimate_cmd(args: EstimateArgs) -> bandprec::Result<()> {
    let x = read_data_csv(&args.input)?;
    let sigma_hat = empirical_covariance(&x)?;
    let k = match (args.k, args.alpha) {
        (Some(k), _) => k,
        (None, Some(alpha)) if alpha > 0.0 && alpha.is_finite() => {
            default_bandwidth(x.rows(), alpha).min(x.cols())
        }
        (None, Some(alpha)) => {
            return Err(Error::Parameter(format!("alpha must be positive, got {alpha}")))
        }
        (None, None) => unreachable!("clap requires --k or --alpha"),
    };
    let config = EstimatorConfig::new(k).with_mode(args.mode).with_ridge(args.ridge);
    let omega_hat = estimate(&sigma_hat, &config)?;
    emit(args.out.as_deref(), &sym_to_csv(&omega_hat))
}

fn diagnose(args: DiagnoseArgs) -> bandprec::Result<()> {
    let model = build_omega(ModelSpec::new(args.alpha, args.p).with_rho(args.rho))?;
    let report = correction_decay_report(&model, &args.ms)?;
    emit(args.out.as_deref(), &correction_report_to_csv(&report))?;
    if let Some(path) = args.band_out {
        if let Some(&bad) = args.ks.iter().find(|&&k| k < 2) {
            return Err(Error::Parameter(format!("bandwidth {bad} < 2")));
        }
        let reports: Vec<_> = args.ks.iter().map(|&k| outside_band_norm(&model.omega, k)).collect();
        write_string(&path, &outside_band_to_csv(&reports))?;
    }
    Ok(())
}

fn sweep(args: SweepArgs) -> bandprec::Result<()> {
    let axis: PlotAxis = args.plot_axis.parse()?;
    let mut plan = ExperimentPlan::new(args.alphas, args.ns, args.ps, args.trials, args.seed);
    plan.mode = args.mode;
    plan.rho_amp = args.rho;
    plan.k_override = args.k;
    plan.record_timing = !args.no_timing;
    let outcome = run_sweep(&plan)?;
    emit(args.out.as_deref(), &records_to_csv(&outcome.records))?;
    if let Some(path) = args.plot {
        write_string(&path, &render_svg(&outcome.records, axis)?)?;
    }
    for failure in &outcome.failures {
        eprintln!("failed trial: {}", failure.error);
    }
    // report the first failure through the exit status
    match outcome.failures.into_iter().next() {
        Some(failure) => Err(failure.error),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::GenerateModel(a) => generate_model(a),
        Command::Sample(a) => sample_data(a),
        Command::Estimate(a) => estimate_cmd(a),
        Command::Diagnose(a) => diagnose(a),
        Command::Sweep(a) => sweep(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
