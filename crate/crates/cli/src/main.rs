use std::f64::consts::FRAC_PI_4;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use nmrsp::channels::{apply_amplitude_damping, apply_dephasing};
use nmrsp::decoherence::{chi, kappa_complex, kappa_quadrature, transition_thetas};
use nmrsp::experiment::{self, ConfigOverrides, ExperimentConfig, Figure};
use nmrsp::measures::{
    blp_search, divisibility_measure, entanglement_measure, mutual_info_measure, SearchOptions,
};
use nmrsp::rsp::{bell_diagonal, correlation_matrix, rsp_fidelity};
use nmrsp::{BellDiagonalParams, ChannelFamily, DephasingSpec, LorentzSpec, MeasureKind, TimeWindow};

#[derive(Parser)]
#[command(name = "nmrsp", version, about = "Non-Markovian dephasing and amplitude damping: figure data and evaluators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Backflow of optimal vs random pairs against tau_c (dephasing)
    Fig1(FigureArgs),
    /// Closed-form and numeric non-Markovianity over (tau_c, theta)
    Fig2(FigureArgs),
    /// Non-Markovianity and RSP fidelity over theta at tau_c = 3pi/(2 dw)
    Fig3a(FigureArgs),
    /// Non-Markovianity and RSP fidelity over theta at tau_c = 2pi/dw
    Fig3b(FigureArgs),
    /// Backflow of optimal vs random pairs against t_c (Lorentzian)
    Fig4(FigureArgs),
    /// Non-Markovianity and RSP fidelity over Gamma/gamma0
    Fig5(FigureArgs),
    /// Dephasing decoherence function kappa(tau)
    Kappa(KappaArgs),
    /// Lorentzian decoherence function chi(t)
    Chi(ChiArgs),
    /// One non-Markovianity measure over a time window
    Measure(MeasureArgs),
    /// RSP fidelity of a Bell-diagonal resource after decoherence
    Fidelity(FidelityArgs),
    /// Transition angles theta1, theta2 at a control time
    Transition(TransitionArgs),
}

#[derive(Args)]
struct FigureArgs {
    /// TOML configuration file; flags take precedence over its fields
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random pairs
    #[arg(long)]
    pairs: Option<usize>,
    /// Time grid points
    #[arg(long)]
    grid: Option<usize>,
    /// Output CSV path (default <figure>.csv); metadata goes to <out>.meta.toml
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (0 = all cores)
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    dw: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    gamma0: Option<f64>,
    /// Gamma / gamma0
    #[arg(long)]
    ratio: Option<f64>,
}

#[derive(Args)]
struct KappaArgs {
    #[arg(long, default_value_t = FRAC_PI_4)]
    theta: f64,
    #[arg(long, default_value_t = 10.0)]
    dw: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Reduced time
    #[arg(long)]
    tau: f64,
    /// Also evaluate the spectral integral by adaptive quadrature
    #[arg(long)]
    quadrature: bool,
}

#[derive(Args)]
struct ChiArgs {
    #[arg(long, default_value_t = 1.0)]
    gamma0: f64,
    /// Gamma / gamma0
    #[arg(long, default_value_t = 0.1)]
    ratio: f64,
    #[arg(long)]
    t: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Dephasing,
    Lorentz,
}

#[derive(Args)]
struct MeasureArgs {
    /// blp, divisibility, entanglement or mutual-info
    #[arg(long, default_value = "blp")]
    kind: String,
    #[arg(long, value_enum, default_value = "dephasing")]
    model: Model,
    #[arg(long, default_value_t = FRAC_PI_4)]
    theta: f64,
    #[arg(long, default_value_t = 10.0)]
    dw: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma0: f64,
    #[arg(long, default_value_t = 0.1)]
    ratio: f64,
    #[arg(long, default_value_t = 0.0)]
    start: f64,
    /// Window end
    #[arg(long)]
    end: f64,
    #[arg(long, default_value_t = 4001)]
    grid: usize,
    /// Random pairs added to the optimal pairs (blp only)
    #[arg(long, default_value_t = 0)]
    pairs: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Args)]
struct FidelityArgs {
    /// Bell-diagonal coefficients c1,c2,c3
    #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true, required = true)]
    c: Vec<f64>,
    /// Real dephasing factor |kappa|
    #[arg(long, conflicts_with = "chi")]
    kappa: Option<f64>,
    /// Amplitude damping factor
    #[arg(long, allow_hyphen_values = true)]
    chi: Option<f64>,
}

#[derive(Args)]
struct TransitionArgs {
    #[arg(long, default_value_t = 10.0)]
    dw: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long)]
    tauc: f64,
}

fn run_figure(figure: Figure, args: FigureArgs) -> Result<()> {
    let mut o = match &args.config {
        Some(path) => ConfigOverrides::load(path)?,
        None => ConfigOverrides::default(),
    };
    if let Some(from_file) = o.figure {
        if from_file != figure {
            bail!("config file selects {from_file} but the subcommand is {figure}");
        }
    }
    o.figure = Some(figure);
    o.seed = args.seed.or(o.seed);
    o.n_pairs = args.pairs.or(o.n_pairs);
    o.grid_size = args.grid.or(o.grid_size);
    o.output = args.out.or(o.output);
    o.threads = args.threads.or(o.threads);
    o.dephasing.theta = args.theta.or(o.dephasing.theta);
    o.dephasing.delta_omega = args.dw.or(o.dephasing.delta_omega);
    o.dephasing.sigma = args.sigma.or(o.dephasing.sigma);
    o.lorentz.gamma0 = args.gamma0.or(o.lorentz.gamma0);
    o.lorentz.ratio = args.ratio.or(o.lorentz.ratio);

    let config = ExperimentConfig::resolve(o)?;
    let out = config.output.clone().unwrap_or_else(|| PathBuf::from(format!("{figure}.csv")));
    let table = experiment::run(&config)?;
    let meta = experiment::write_outputs(&config, &table, &out)
        .with_context(|| format!("writing {}", out.display()))?;
    println!("wrote {} rows to {} ({})", table.rows().len(), out.display(), meta.display());
    Ok(())
}

fn run_measure(args: MeasureArgs) -> Result<()> {
    let kind: MeasureKind = args.kind.parse()?;
    let family = match args.model {
        Model::Dephasing => ChannelFamily::Dephasing(DephasingSpec::with_separation(args.theta, args.dw, args.sigma)?),
        Model::Lorentz => ChannelFamily::AmplitudeDamping(LorentzSpec::new(args.gamma0, args.ratio * args.gamma0)?),
    };
    let window = TimeWindow::new(args.start, args.end)?;
    let evaluate = || -> nmrsp::Result<f64> {
        let report = match kind {
            MeasureKind::Blp => {
                let opts = SearchOptions { n_pairs: args.pairs, grid_size: args.grid, seed: args.seed, ..Default::default() };
                blp_search(&family, window, &opts)?.report
            }
            MeasureKind::Divisibility => divisibility_measure(&family, window, args.grid)?,
            MeasureKind::Entanglement => entanglement_measure(&family, window, args.grid)?,
            MeasureKind::MutualInformation => mutual_info_measure(&family, window, args.grid)?,
        };
        if let Some(t) = report.divergence_at {
            println!("divergence_at = {t}");
        }
        Ok(report.value)
    };
    let value = if args.threads == 0 {
        evaluate()?
    } else {
        rayon::ThreadPoolBuilder::new().num_threads(args.threads).build()?.install(evaluate)?
    };
    println!("{} = {value}", kind.name());
    Ok(())
}

fn run_fidelity(args: FidelityArgs) -> Result<()> {
    let [c1, c2, c3] = args.c[..] else {
        bail!("--c takes exactly three comma-separated values, got {}", args.c.len());
    };
    let params = BellDiagonalParams::new(c1, c2, c3)?;
    let rho = bell_diagonal(&params);
    let evolved = match (args.kappa, args.chi) {
        (Some(k), None) => apply_dephasing(&rho, Complex64::new(k, 0.0))?,
        (None, Some(x)) => apply_amplitude_damping(&rho, x)?,
        (None, None) => rho,
        (Some(_), Some(_)) => unreachable!("clap rejects both"),
    };
    println!("{}", rsp_fidelity(&correlation_matrix(&evolved)));
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Fig1(a) => run_figure(Figure::Fig1, a),
        Command::Fig2(a) => run_figure(Figure::Fig2, a),
        Command::Fig3a(a) => run_figure(Figure::Fig3a, a),
        Command::Fig3b(a) => run_figure(Figure::Fig3b, a),
        Command::Fig4(a) => run_figure(Figure::Fig4, a),
        Command::Fig5(a) => run_figure(Figure::Fig5, a),
        Command::Kappa(a) => {
            let spec = DephasingSpec::with_separation(a.theta, a.dw, a.sigma)?;
            let k = kappa_complex(&spec, a.tau);
            println!("kappa_abs = {}", k.norm());
            println!("kappa_re = {}", k.re);
            println!("kappa_im = {}", k.im);
            if a.quadrature {
                let q = kappa_quadrature(&spec, a.tau)?;
                println!("quadrature_re = {}", q.re);
                println!("quadrature_im = {}", q.im);
            }
            Ok(())
        }
        Command::Chi(a) => {
            let spec = LorentzSpec::new(a.gamma0, a.ratio * a.gamma0)?;
            println!("{}", chi(&spec, a.t));
            Ok(())
        }
        Command::Measure(a) => run_measure(a),
        Command::Fidelity(a) => run_fidelity(a),
        Command::Transition(a) => {
            let (theta1, theta2) = transition_thetas(a.dw, a.sigma, a.tauc)?;
            println!("theta1 = {theta1}");
            println!("theta2 = {theta2}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let _ = e.print();
            if !e.to_string().contains("Usage:") {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            return ExitCode::from(2);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = format!("{e:#}").replace('\n', " ");
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
