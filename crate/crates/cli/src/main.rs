use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::info;

use areosync::analysis::{certify_passivity, compute_equilibrium};
use areosync::constants::SOL_S;
use areosync::io::{
    write_atomic, write_certification, write_links, write_lyapunov, write_plot, write_report,
    write_trajectory, ConfigDocument, OutputsDoc,
};
use areosync::network::Topology;
use areosync::sim::run;
use areosync::{Error, Scenario64};

const OUT_DIR_ENV: &str = "AREOSYNC_OUT_DIR";
const DEFAULT_OUT_DIR: &str = "out";

#[derive(Parser)]
#[command(
    name = "areosync",
    version,
    about = "Constellation acquisition and station-keeping simulator"
)]
struct Cli {
    /// Log progress to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a scenario and write trajectory, report and plot data.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Disable moon perturbations.
        #[arg(long)]
        no_moons: bool,
        #[arg(long)]
        seed: Option<u64>,
        /// Integration step, s.
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        horizon_sols: Option<f64>,
    },
    /// Simulate a short horizon logged at every step and certify the
    /// passivity inequalities along it. Exits with 3 on any violation.
    Certify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Keep moon perturbations on (they are off by default).
        #[arg(long)]
        with_moons: bool,
        #[arg(long, default_value_t = 1.0)]
        horizon_sols: f64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        dt: Option<f64>,
    },
    /// Print the closed-loop equilibrium of a scenario.
    Equilibrium {
        #[arg(long)]
        config: PathBuf,
    },
    /// Print the incidence matrix of the path graph over N satellites.
    DumpTopology {
        #[arg(long)]
        n: usize,
    },
}

enum Failure {
    Validation(Error),
    Runtime(Error),
    Threshold(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_)
            | Error::InvalidParameter { .. }
            | Error::TooFewSatellites(_)
            | Error::DimensionMismatch { .. }
            | Error::Json(_) => Failure::Validation(e),
            _ => Failure::Runtime(e),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.verbose { "info" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Threshold(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(3)
        }
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Run {
            config,
            out_dir,
            no_moons,
            seed,
            dt,
            horizon_sols,
        } => {
            let (doc, mut sc) = load(&config)?;
            if no_moons {
                sc.moons_enabled = false;
            }
            apply_overrides(&mut sc, seed, dt, horizon_sols)?;
            let outputs = doc.outputs();
            let dir = out_dir_for(out_dir, &outputs);
            run_scenario(&sc, &outputs, &dir)
        }
        Command::Certify {
            config,
            out_dir,
            with_moons,
            horizon_sols,
            seed,
            dt,
        } => {
            let (doc, mut sc) = load(&config)?;
            sc.moons_enabled = with_moons;
            apply_overrides(&mut sc, seed, dt, Some(horizon_sols))?;
            sc.logging_interval = sc.dt;
            sc.validate()?;
            let dir = out_dir_for(out_dir, &doc.outputs());
            certify_scenario(&sc, &dir)
        }
        Command::Equilibrium { config } => {
            let (_, sc) = load(&config)?;
            let eq =
                compute_equilibrium(&sc.desired, &Topology::path(sc.n_sats)?, &sc.link_output)?;
            println!("r_bar_km = {}", eq.r_bar / 1e3);
            println!("r_bar_m = {}", eq.r_bar);
            println!("v_bar_mps = {}", eq.v_bar);
            println!("omega_bar_radps = {:e}", eq.omega_bar);
            let spacing: Vec<String> = eq
                .theta_rel_bar
                .iter()
                .map(|th| format!("{}", th.to_degrees()))
                .collect();
            println!("theta_rel_bar_deg = [{}]", spacing.join(", "));
            println!("spacing_deg = {}", 360.0 / sc.n_sats as f64);
            Ok(())
        }
        Command::DumpTopology { n } => {
            print!("{}", Topology::path(n)?.to_csv());
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<(ConfigDocument, Scenario64), Failure> {
    let text = std::fs::read_to_string(path).map_err(|source| {
        Failure::Validation(Error::Io {
            path: path.to_path_buf(),
            source,
        })
    })?;
    let doc = ConfigDocument::from_json(&text)?;
    let sc = doc.to_scenario()?;
    Ok((doc, sc))
}

fn apply_overrides(
    sc: &mut Scenario64,
    seed: Option<u64>,
    dt: Option<f64>,
    horizon_sols: Option<f64>,
) -> Result<(), Failure> {
    if let Some(seed) = seed {
        sc.seed = seed;
    }
    if let Some(dt) = dt {
        sc.dt = dt;
        // keep the logging cadence valid when only dt is changed
        if sc.logging_interval < dt {
            sc.logging_interval = dt;
        }
    }
    if let Some(h) = horizon_sols {
        sc.horizon = h * SOL_S;
    }
    sc.validate()?;
    Ok(())
}

fn out_dir_for(flag: Option<PathBuf>, outputs: &OutputsDoc) -> PathBuf {
    flag.or_else(|| outputs.dir.as_ref().map(PathBuf::from))
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

fn run_scenario(sc: &Scenario64, outputs: &OutputsDoc, dir: &Path) -> Result<(), Failure> {
    let out = run(sc)?;
    let config = ConfigDocument::from_scenario(sc)?;
    write_atomic(&dir.join("config.json"), config.to_json().as_bytes())?;
    write_trajectory(&out.log, &dir.join(&outputs.trajectory_csv))?;
    write_links(&out.log, &dir.join(&outputs.links_csv))?;
    write_lyapunov(&out.log, &dir.join(&outputs.lyapunov_csv))?;
    write_report(&out.report, &dir.join(&outputs.report_json))?;
    if let Some(plot) = &outputs.plot_csv {
        write_plot(&out.log, outputs.plot_stride, &dir.join(plot))?;
    }
    if let Some(cert_path) = &outputs.certification_json {
        if out.log.len() >= 3 {
            let cert = certify_passivity(&out.log, &out.equilibrium, &sc.gains, &sc.link_output)?;
            write_certification(&cert, Some(&outputs.lyapunov_csv), &dir.join(cert_path))?;
        }
    }
    info!("artifacts written to {}", dir.display());

    let r = &out.report;
    match r.t_acq_sols() {
        Some(t) => println!("acquired: t_acq = {t:.2} Sols"),
        None => println!("not acquired"),
    }
    println!(
        "max |tau_r| = {:.4e} N, max |tau_theta| = {:.4e} N",
        r.max_abs_tau_r, r.max_abs_tau_theta
    );
    println!("saturation events: {}", r.saturation_events);
    println!(
        "final max |omega - omega_d| = {:.3e} rad/s, max |r - r_d| = {:.3e} m",
        r.final_max_omega_err(),
        r.final_max_radial_err()
    );
    if let Some(mono) = r.lyapunov_monotone {
        println!("lyapunov monotone: {mono}");
    }
    match out.abort {
        Some(e) => Err(Failure::Runtime(e)),
        None => Ok(()),
    }
}

fn certify_scenario(sc: &Scenario64, dir: &Path) -> Result<(), Failure> {
    let out = run(sc)?;
    if let Some(e) = out.abort {
        return Err(Failure::Runtime(e));
    }
    let cert = certify_passivity(&out.log, &out.equilibrium, &sc.gains, &sc.link_output)?;
    write_lyapunov(&out.log, &dir.join("lyapunov.csv"))?;
    write_certification(&cert, Some("lyapunov.csv"), &dir.join("certification.json"))?;
    for s in &cert.summaries {
        println!(
            "{:<12} violations {:>4}  worst slack {:>11.3e}  tol {:.3e}",
            s.subsystem.to_string(),
            s.violations,
            s.worst_slack,
            s.tol
        );
    }
    if let Some(eps) = &cert.epsilon {
        println!(
            "epsilon: min {:.4e} mean {:.4e} max {:.4e}",
            eps.min, eps.mean, eps.max
        );
    }
    let total = cert.total_violations();
    println!("total violations: {total}");
    if total > 0 {
        return Err(Failure::Threshold(format!(
            "certification failed: {total} residual violations"
        )));
    }
    Ok(())
}
