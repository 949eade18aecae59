use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use contour_monitor::Error;
use contour_monitor::monitoring::Scheme;
use contour_monitor::scenario::{compare_schemes, run_scenario, sweep_initial_delta, ScenarioConfig};

#[derive(Parser)]
#[command(version, about = "Contour-band field monitoring simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scheme over every replicate.
    Run(Scenario),
    /// Run several schemes on identical replicates and merge their traces.
    Compare {
        #[command(flatten)]
        scenario: Scenario,
        /// Comma-separated scheme list.
        #[arg(long, value_delimiter = ',', default_value = "U-SG,LM-fixed,LM-SG")]
        schemes: Vec<Scheme>,
    },
    /// Vary the initial margin and record the margin traces.
    Sweep {
        #[command(flatten)]
        scenario: Scenario,
        /// Comma-separated initial-margin multipliers.
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2")]
        scales: Vec<f64>,
    },
}

macro_rules! overrides {
    ($($field:ident),* $(,)?) => {
        #[derive(Args)]
        struct Scenario {
            /// Scenario file of `key = value` lines; flags override it.
            #[arg(long)]
            config: Option<PathBuf>,
            $(
                #[arg(long, value_name = "VALUE", help = concat!("Overrides `", stringify!($field), "`"))]
                $field: Option<String>,
            )*
        }

        impl Scenario {
            fn resolve(&self) -> Result<ScenarioConfig, String> {
                let mut cfg = match &self.config {
                    Some(path) => ScenarioConfig::from_file(path).map_err(|e| e.to_string())?,
                    None => ScenarioConfig::default(),
                };
                let mut text = String::new();
                $(
                    if let Some(v) = &self.$field {
                        text.push_str(&format!("{} = {}\n", stringify!($field), v));
                    }
                )*
                cfg.apply_text(&text).map_err(|e| match e {
                    Error::Config { message, .. } => format!("flag --{message}"),
                    other => other.to_string(),
                })?;
                cfg.validate().map_err(|e| e.to_string())?;
                Ok(cfg)
            }
        }
    };
}

overrides!(
    n_a, n_b, sigma_a, sigma_b, amplitude_min, amplitude_max, width, height, drift_set,
    sensor_count, noise_sigma, taps, scheme, initial_m, m_max, probe_count, eps_stop, bin_count,
    initial_delta_scale, max_fit_points, grid_p, grid_q, mu, temporal_adapt_delta, periods,
    drift_per_period, master_seed, replicates, output_dir,
);

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(s) => s.resolve().and_then(|cfg| {
            run_scenario(&cfg).map_err(|e| e.to_string())?;
            Ok(cfg.output_dir)
        }),
        Command::Compare { scenario, schemes } => scenario.resolve().and_then(|cfg| {
            compare_schemes(&cfg, &schemes, Some(&cfg.output_dir)).map_err(|e| e.to_string())?;
            Ok(cfg.output_dir)
        }),
        Command::Sweep { scenario, scales } => scenario.resolve().and_then(|cfg| {
            sweep_initial_delta(&cfg, &scales, Some(&cfg.output_dir)).map_err(|e| e.to_string())?;
            Ok(cfg.output_dir)
        }),
    };
    match outcome {
        Ok(dir) => {
            println!("wrote {}", dir.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
