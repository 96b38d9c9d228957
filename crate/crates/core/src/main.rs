use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qpburst::campaign::{self, CampaignConfig, Subset};
use qpburst::fit::FitReport;
use qpburst::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_NO_CONVERGENCE: u8 = 3;

#[derive(Parser)]
#[command(name = "qpburst", version, about = "Correlated-error burst simulation and analysis")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalOpts {
    /// Campaign config (JSON); defaults apply for missing keys
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Master seed
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Output directory
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Dotted config override, e.g. detection.threshold_sigma=5
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate datasets with truth sidecars
    Simulate,
    /// Detect impact events in datasets
    Detect {
        #[arg(long, default_value = "weak")]
        subset: Subset,
        /// Dataset files or directories (default: <out>/datasets)
        inputs: Vec<PathBuf>,
    },
    /// Simultaneous-error histogram against the independent-error prediction
    Histogram {
        #[arg(long, default_value = "weak")]
        subset: Subset,
        inputs: Vec<PathBuf>,
    },
    /// Fit the QP tunneling model to a `f_q_GHz,inv_t1_per_s` CSV
    FitSpectrum {
        csv: PathBuf,
        /// Background decay rate subtracted from every point (1/s)
        #[arg(long, default_value_t = 0.0)]
        gamma_bkgd: f64,
    },
    /// Fit the steady-state x_qp(P) curve to a `power,x_qp` CSV
    FitPower { csv: PathBuf },
    /// Bundle campaign artifacts into report/
    Report {
        /// Campaign directory (default: <out>)
        dir: Option<PathBuf>,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) => EXIT_USAGE,
        _ => EXIT_DATA,
    }
}

fn load_config(g: &GlobalOpts) -> qpburst::Result<CampaignConfig> {
    let mut overrides = g.overrides.clone();
    if let Some(seed) = g.seed {
        overrides.push(format!("master_seed={seed}"));
    }
    let mut cfg = CampaignConfig::load(g.config.as_deref(), &overrides)?;
    if let Some(out) = &g.out {
        cfg.output_dir = out.clone();
    }
    Ok(cfg)
}

fn print_fit(report: &FitReport, path: PathBuf) -> u8 {
    for p in report.params.iter().chain(&report.derived) {
        match p.sigma {
            Some(s) => println!("{} = {:.6e} ± {:.2e}", p.name, p.value, s),
            None => println!("{} = {:.6e}", p.name, p.value),
        }
    }
    for n in &report.notes {
        println!("note: {n}");
    }
    println!("converged: {} ({})", report.converged, report.message);
    println!("wrote {}", path.display());
    if report.converged {
        0
    } else {
        EXIT_NO_CONVERGENCE
    }
}

fn run(cli: Cli) -> Result<u8, (u8, Error)> {
    let cfg = load_config(&cli.global).map_err(|e| (EXIT_USAGE, e))?;
    let data = |e: Error| (exit_code(&e), e);
    let out = cfg.output_dir.clone();
    match cli.command {
        Command::Simulate => {
            let s = campaign::cmd_simulate(&cfg).map_err(data)?;
            println!(
                "simulated {} datasets into {}: {} events injected, mean rate {:.4} /s",
                s.n_datasets,
                out.join(campaign::DATASETS_DIR).display(),
                s.total_events_injected,
                s.mean_rate_per_s
            );
        }
        Command::Detect { subset, inputs } => {
            let s = campaign::cmd_detect(&cfg, &inputs, subset).map_err(data)?;
            for (f, e) in &s.failed {
                eprintln!("warning: skipped {f}: {e}");
            }
            println!(
                "{}: {} events in {} datasets ({:.4} /s)",
                subset.name(),
                s.total_events,
                s.n_datasets,
                s.event_rate_per_s
            );
            if let Some(t) = &s.truth {
                println!(
                    "truth: {} injected, {} matched, {} false positives, recall {:.3}, precision {:.3}",
                    t.n_truth,
                    t.true_positives,
                    t.false_positives,
                    t.recall(),
                    t.precision()
                );
            }
            if let (Some(f), Some(i)) = (s.tau_fit_median_s, s.tau_injected_median_s) {
                println!("tau median: fitted {:.2} ms, injected {:.2} ms", f * 1e3, i * 1e3);
            }
            println!("wrote {}", campaign::detection_dir(&out, subset).display());
        }
        Command::Histogram { subset, inputs } => {
            let s = campaign::cmd_histogram(&cfg, &inputs, subset).map_err(data)?;
            for (f, e) in &s.failed {
                eprintln!("warning: skipped {f}: {e}");
            }
            let c = s.chi_square;
            println!(
                "{}: chi-square {:.2} on {} dof, p = {:.4}",
                subset.name(),
                c.statistic,
                c.dof,
                c.p_value
            );
            match s.tail_excess {
                Some(t) if s.high_k_excess => println!(
                    "excess at k >= {}: observed {} vs predicted {:.1} (z = {:.1})",
                    t.k, t.observed_tail, t.predicted_tail, t.z
                ),
                _ => println!("no excess at high k"),
            }
            println!("wrote {}", campaign::histogram_path(&out, subset, "csv").display());
        }
        Command::FitSpectrum { csv, gamma_bkgd } => {
            let r = campaign::cmd_fit_spectrum(&cfg, &csv, gamma_bkgd).map_err(data)?;
            return Ok(print_fit(&r, campaign::fits_dir(&out).join("spectrum.json")));
        }
        Command::FitPower { csv } => {
            let r = campaign::cmd_fit_power(&cfg, &csv).map_err(data)?;
            return Ok(print_fit(&r, campaign::fits_dir(&out).join("power.json")));
        }
        Command::Report { dir } => {
            let dir = dir.unwrap_or(out);
            let r = campaign::cmd_report(&dir).map_err(data)?;
            println!(
                "{} detected events over {:.0} s: {:.4} /s per chip, {:.4} /s/cm²",
                r.detected_events, r.total_duration_s, r.flux.events_per_s_per_chip, r.flux.events_per_s_per_cm2
            );
            if let Some(t) = &r.tau_fit_s {
                println!("tau median {:.2} ms over {} events", t.median * 1e3, t.n);
            }
            println!("wrote {}", dir.join("report").display());
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err((code, e)) => {
            eprintln!("error: {e}");
            ExitCode::from(code)
        }
    }
}
