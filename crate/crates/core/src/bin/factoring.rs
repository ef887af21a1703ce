use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use factoring::montecarlo::McConfig;
use factoring::report::{self, ModelSelection, OutputFormat};
use factoring::scenario::{self, Deal, DependenceInput, Scenario, ScenarioErrors};
use factoring::sweep::{run_sweep, SweepParam, SweepSpec};
use factoring::tables;
use factoring::{DealTerms, GumbelDependence, MarginalIntensity};

const EXIT_VALIDATION: u8 = 2;
const EXIT_DEGENERATE: u8 = 3;
const EXIT_MC_CHECK: u8 = 4;

#[derive(Parser)]
#[command(
    name = "factoring",
    version,
    about = "Invoice factoring prices with assignor clawback risk"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Standard,
    Revocatory,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Out {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Param {
    Theta,
    LambdaA,
    LambdaB,
    Delta,
    T,
}

#[derive(Clone, Copy, ValueEnum)]
enum Input {
    /// A scenario document.
    Scenario,
    /// JSON-lines result rows, re-priced from their echoed inputs.
    Rows,
}

#[derive(clap::Args)]
struct McArgs {
    /// Monte Carlo seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo paths.
    #[arg(long)]
    paths: Option<u64>,
    /// Number of path blocks (fixes the RNG stream layout).
    #[arg(long)]
    workers: Option<u32>,
}

impl McArgs {
    fn apply(&self, mut cfg: McConfig) -> McConfig {
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(n) = self.paths {
            cfg.n_paths = n;
        }
        if let Some(w) = self.workers {
            cfg.worker_count = w;
        }
        cfg
    }
}

#[derive(Subcommand)]
enum Command {
    /// Price every deal of a scenario file.
    Price {
        scenario: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        model: Model,
        /// Add Monte Carlo rows next to the closed forms.
        #[arg(long)]
        mc: bool,
        #[arg(long, value_enum, default_value = "csv")]
        out: Out,
        /// Write rows to a file instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "scenario")]
        input: Input,
        #[command(flatten)]
        mc_args: McArgs,
    },
    /// Print one of the two reference price grids.
    Tables {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        table: u8,
        /// Re-price every cell by Monte Carlo and report |MC - closed| / SE.
        #[arg(long)]
        mc_check: bool,
        #[command(flatten)]
        mc_args: McArgs,
    },
    /// Sweep one parameter of a base deal and emit CSV rows.
    Sweep {
        #[arg(long, value_enum)]
        param: Param,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        steps: usize,
        /// Scenario holding the base deal (defaults to the table-1 deal, lambda_A = 0.1, theta = 1).
        #[arg(long)]
        scenario: Option<PathBuf>,
        /// Deal id in the scenario (defaults to the first deal).
        #[arg(long)]
        deal: Option<String>,
        #[arg(long, value_enum, default_value = "csv")]
        out: Out,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Price {
            scenario,
            model,
            mc,
            out,
            output,
            input,
            mc_args,
        } => cmd_price(scenario, model, mc, out, output, input, &mc_args),
        Command::Tables {
            table,
            mc_check,
            mc_args,
        } => cmd_tables(table, mc_check, &mc_args),
        Command::Sweep {
            param,
            from,
            to,
            steps,
            scenario,
            deal,
            out,
        } => cmd_sweep(param, from, to, steps, scenario, deal, out),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn report_validation(errors: &ScenarioErrors) -> u8 {
    for issue in &errors.0 {
        eprintln!("{issue}");
    }
    EXIT_VALIDATION
}

fn format_of(out: Out) -> OutputFormat {
    match out {
        Out::Csv => OutputFormat::Csv,
        Out::Json => OutputFormat::JsonLines,
    }
}

fn cmd_price(
    path: PathBuf,
    model: Model,
    mc: bool,
    out: Out,
    output: Option<PathBuf>,
    input: Input,
    mc_args: &McArgs,
) -> io::Result<u8> {
    let loaded = match input {
        Input::Scenario => scenario::load_scenario(&path),
        Input::Rows => std::fs::read_to_string(&path)
            .map_err(|e| {
                ScenarioErrors(vec![scenario::Issue {
                    line: 0,
                    column: 0,
                    path: path.display().to_string(),
                    message: e.to_string(),
                }])
            })
            .and_then(|t| report::scenario_from_json_rows(&t)),
    };
    let scenario = match loaded {
        Ok(s) => s,
        Err(errors) => return Ok(report_validation(&errors)),
    };
    let cfg = mc_args.apply(scenario.mc.apply(McConfig::default()));
    if mc {
        if let Err(e) = cfg.validate() {
            eprintln!("{e}");
            return Ok(EXIT_VALIDATION);
        }
    }
    let models = match model {
        Model::Standard => ModelSelection::Standard,
        Model::Revocatory => ModelSelection::Revocatory,
        Model::Both => ModelSelection::Both,
    };
    let rows = report::price_scenario(&scenario, models, mc.then_some(&cfg));
    write_to(output, |w| report::write_rows(w, &rows, format_of(out)))?;
    Ok(if rows.iter().any(|r| r.is_degenerate()) {
        EXIT_DEGENERATE
    } else {
        0
    })
}

fn write_to(output: Option<PathBuf>, f: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> io::Result<()> {
    match output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            f(&mut w)?;
            w.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)
        }
    }
}

fn cmd_tables(number: u8, mc_check: bool, mc_args: &McArgs) -> io::Result<u8> {
    let table = tables::reference_table(number).expect("clap restricts the table number");
    let rows = tables::compute(&table).map_err(io::Error::other)?;
    let cfg = mc_args.apply(McConfig::default());
    let color = std::env::var_os("NO_COLOR").is_none();
    if !mc_check {
        print!("{}", tables::render(&table, &rows, None, cfg.confidence_sigmas, color));
        return Ok(0);
    }
    if let Err(e) = cfg.validate() {
        eprintln!("{e}");
        return Ok(EXIT_VALIDATION);
    }
    let checks = tables::mc_check(&table, &rows, &cfg).map_err(io::Error::other)?;
    print!(
        "{}",
        tables::render(&table, &rows, Some(&checks), cfg.confidence_sigmas, color)
    );
    let worst = checks.iter().flat_map(|c| c.z_scores).fold(0.0f64, f64::max);
    println!(
        "max |MC - closed| / SE = {worst:.2} over {} paths (seed {}, {} blocks)",
        cfg.n_paths, cfg.seed, cfg.worker_count
    );
    Ok(if worst < cfg.confidence_sigmas {
        0
    } else {
        EXIT_MC_CHECK
    })
}

fn default_base() -> Deal {
    Deal {
        id: "table1".into(),
        terms: DealTerms::new(100.0, 1.0, 0.5, 0.2, 0.2).expect("valid"),
        lambda_a: MarginalIntensity::new(0.1).expect("valid"),
        lambda_b: MarginalIntensity::new(0.1).expect("valid"),
        dependence: GumbelDependence::independent(),
        dependence_input: DependenceInput::Theta(1.0),
    }
}

fn cmd_sweep(
    param: Param,
    from: f64,
    to: f64,
    steps: usize,
    scenario: Option<PathBuf>,
    deal: Option<String>,
    out: Out,
) -> io::Result<u8> {
    let base = match scenario {
        None => default_base(),
        Some(path) => {
            let s: Scenario = match scenario::load_scenario(&path) {
                Ok(s) => s,
                Err(errors) => return Ok(report_validation(&errors)),
            };
            let found = match &deal {
                Some(id) => s.deals.into_iter().find(|d| &d.id == id),
                None => s.deals.into_iter().next(),
            };
            match found {
                Some(d) => d,
                None => {
                    eprintln!("deal {:?} not found in {}", deal.unwrap_or_default(), path.display());
                    return Ok(EXIT_VALIDATION);
                }
            }
        }
    };
    let param = match param {
        Param::Theta => SweepParam::Theta,
        Param::LambdaA => SweepParam::LambdaA,
        Param::LambdaB => SweepParam::LambdaB,
        Param::Delta => SweepParam::Delta,
        Param::T => SweepParam::T,
    };
    let spec = SweepSpec { param, from, to, steps };
    let report = match run_sweep(&base, &spec) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return Ok(EXIT_VALIDATION);
        }
    };
    write_to(None, |w| report::write_rows(w, &report.rows, format_of(out)))?;
    eprintln!("{}", report.footer());
    Ok(if report.rows.iter().any(|r| r.is_degenerate()) {
        EXIT_DEGENERATE
    } else {
        0
    })
}
