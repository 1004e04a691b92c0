use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pairstab::plane2d::SeriesMode;
use pairstab_cli::{
    cmd_check_stable, cmd_decompose, cmd_pair_mu, cmd_sample_w, cmd_scan_epsilon,
    cmd_scan_threshold, cmd_spectrum, CliError, Format, RunConfig, Sampled,
};

#[derive(Parser)]
#[command(name = "pairstab", version, about = "Stability and decomposition certificates for pair potentials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Tolerance override.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for randomized cross-checks; echoed in every output.
    #[arg(long, global = true, default_value_t = RunConfig::default().seed)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScanKind {
    Threshold,
    Epsilon,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Asymptotic,
    Quadrature,
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleArg {
    W,
    W1,
}

#[derive(Subcommand)]
enum Command {
    /// Cosine transform of a cyclic kernel and its positive-definiteness verdict.
    Spectrum {
        /// Kernel JSON file, or inline JSON.
        #[arg(long)]
        input: String,
    },
    /// Copositivity of a kernel, or a cut certificate for a density against the chain kernel.
    CheckStable {
        #[arg(long)]
        input: Option<String>,
        /// Number of sites for line kernels.
        #[arg(long)]
        window: Option<usize>,
        /// Line density JSON; switches to the cut certificate.
        #[arg(long)]
        density: Option<String>,
    },
    /// Positive plus positive definite decomposition, or a separating measure.
    Decompose {
        #[arg(long)]
        input: String,
    },
    /// Threshold bisection on the Z5 family, or the planar pairing scan.
    Scan {
        kind: ScanKind,
        #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
        lo: f64,
        #[arg(long, default_value_t = -0.5, allow_negative_numbers = true)]
        hi: f64,
        /// Comma separated, strictly decreasing.
        #[arg(long, value_delimiter = ',', default_value = "0.2,0.1,0.05")]
        eps_list: Vec<f64>,
        #[arg(long, value_enum, default_value_t = ModeArg::Asymptotic)]
        mode: ModeArg,
    },
    /// Tabulate W or W1 on a grid.
    SampleW {
        #[arg(long, value_enum, default_value_t = SampleArg::W)]
        which: SampleArg,
        #[arg(long, default_value_t = -3.0, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 0.25)]
        step: f64,
        /// Comb damping for W1.
        #[arg(long, default_value_t = 0.2)]
        eps: f64,
        /// Line kernel replacing the chain kernel.
        #[arg(long)]
        input: Option<String>,
    },
    /// Pairing of the chain kernel with the separating measure truncated to the given periods.
    PairMu {
        #[arg(long, default_value_t = 1)]
        periods: usize,
    },
}

fn run(cli: Cli) -> Result<String, CliError> {
    let cfg = RunConfig {
        format: match cli.format {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        },
        tol: cli.tol,
        seed: cli.seed,
    };
    match cli.command {
        Command::Spectrum { input } => cmd_spectrum(&input, &cfg),
        Command::CheckStable {
            input,
            window,
            density,
        } => cmd_check_stable(input.as_deref(), window, density.as_deref(), &cfg),
        Command::Decompose { input } => cmd_decompose(&input, &cfg),
        Command::Scan {
            kind: ScanKind::Threshold,
            lo,
            hi,
            ..
        } => cmd_scan_threshold(lo, hi, &cfg),
        Command::Scan {
            kind: ScanKind::Epsilon,
            eps_list,
            mode,
            ..
        } => {
            let mode = match mode {
                ModeArg::Asymptotic => SeriesMode::AsymptoticTail,
                ModeArg::Quadrature => SeriesMode::FullQuadrature,
            };
            cmd_scan_epsilon(&eps_list, mode, &cfg)
        }
        Command::SampleW {
            which,
            from,
            to,
            step,
            eps,
            input,
        } => {
            let which = match which {
                SampleArg::W => Sampled::W,
                SampleArg::W1 => Sampled::W1 { eps },
            };
            cmd_sample_w(which, from, to, step, input.as_deref(), &cfg)
        }
        Command::PairMu { periods } => cmd_pair_mu(periods, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let out = cli.out.clone();
    let report = match run(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("pairstab: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, report) {
                eprintln!("pairstab: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{report}"),
    }
    ExitCode::SUCCESS
}
