use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use vpmetro::acceptance;
use vpmetro::estimation::Accounting;
use vpmetro::experiment::{load_config, preset, run_calibrate, run_scaling, run_sweep, write_sweep, SweepConfig, WORKERS_ENV};
use vpmetro::noise::{NoiseKind, CALIBRATION_PHI};
use vpmetro::stabilizer::{builtin_probe, load_probes, BUILTIN_PROBES};
use vpmetro::{Error, Result};

#[derive(Parser)]
#[command(name = "vpmetro", version, about = "Noisy phase estimation: QEC vs virtual purification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunFlags {
    /// JSON sweep configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in configuration.
    #[arg(long, value_parser = ["fig4", "sm-figs", "scaling"])]
    preset: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, env = WORKERS_ENV)]
    workers: Option<usize>,
    #[arg(long)]
    accounting: Option<Accounting>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep and write CSV tables.
    Sweep(RunFlags),
    /// Fit bias scaling exponents and write a JSON report.
    Scaling(RunFlags),
    /// Noise strengths that give target dominant eigenvalues.
    Calibrate {
        #[arg(long)]
        probe: String,
        /// Extra probe definitions to search.
        #[arg(long)]
        probe_file: Option<PathBuf>,
        #[arg(long, default_value = "depolarizing")]
        noise: NoiseKind,
        #[arg(long, value_delimiter = ',', required = true)]
        lambda: Vec<f64>,
        #[arg(long, default_value_t = CALIBRATION_PHI)]
        phi_ref: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance suite.
    Verify,
    /// List built-in probes.
    Probes,
}

fn resolve(flags: &RunFlags) -> Result<SweepConfig> {
    let mut cfg = match (&flags.config, &flags.preset) {
        (Some(_), Some(_)) => return Err(Error::Config("--config and --preset are exclusive".into())),
        (Some(p), None) => load_config(p)?,
        (None, Some(name)) => preset(name)?,
        (None, None) => return Err(Error::Config("one of --config or --preset is required".into())),
    };
    if let Some(o) = &flags.out {
        cfg.out = Some(o.clone());
    }
    if let Some(s) = flags.seed {
        cfg.seed = s;
    }
    if let Some(w) = flags.workers {
        cfg.workers = Some(w);
    }
    if let Some(a) = flags.accounting {
        cfg.accounting = a;
    }
    Ok(cfg)
}

fn write_json(out: Option<&PathBuf>, value: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(p) => std::fs::write(p, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Sweep(flags) => {
            let cfg = resolve(&flags)?;
            let out = cfg.out.clone().ok_or_else(|| Error::Config("no output path".into()))?;
            let result = run_sweep(&cfg)?;
            for p in write_sweep(&result, &out)? {
                eprintln!("wrote {}", p.display());
            }
            Ok(true)
        }
        Command::Scaling(flags) => {
            let cfg = resolve(&flags)?;
            let entries = run_scaling(&cfg)?;
            let ok = entries.iter().all(|e| e.passed);
            for e in &entries {
                let slope = e.fit.as_ref().map_or(f64::NAN, |f| f.slope);
                eprintln!(
                    "{} {} {} {} slope {slope:.3}",
                    if e.passed { "pass" } else { "FAIL" },
                    e.probe,
                    e.noise,
                    e.scheme
                );
            }
            write_json(cfg.out.as_ref(), &entries)?;
            Ok(ok)
        }
        Command::Calibrate { probe, probe_file, noise, lambda, phi_ref, out } => {
            let p = match probe_file {
                Some(f) => load_probes(&f)?
                    .into_iter()
                    .find(|p| p.name == probe)
                    .ok_or_else(|| Error::UnknownProbe(probe.clone()))?,
                None => builtin_probe(&probe)?,
            };
            write_json(out.as_ref(), &run_calibrate(&p, noise, phi_ref, &lambda)?)?;
            Ok(true)
        }
        Command::Verify => {
            let results = acceptance::run_all();
            for r in &results {
                println!("{r}");
            }
            Ok(results.iter().all(|r| r.passed))
        }
        Command::Probes => {
            for name in BUILTIN_PROBES {
                let p = builtin_probe(name)?;
                let gens: Vec<String> = p.generators.generators().iter().map(|g| g.to_string()).collect();
                println!(
                    "{name}\tqubits={}\tobservable={}\tdomain=[{:.6}, {:.6}]\tgenerators={}",
                    p.n_qubits,
                    p.observable,
                    p.domain.0,
                    p.domain.1,
                    gens.join(",")
                );
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
