//! `synaudit` command-line interface.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 runtime failure.
//! Only JSON goes to stdout; diagnostics go to stderr.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use synaudit::attacks;
use synaudit::generators::{self, GeneratorKind, GeneratorSpec};
use synaudit::harness::{self, ExperimentConfig, Progress};
use synaudit::metrics::{DistanceConfig, NumericScaling, PrivacyAuditor};
use synaudit::tabular::{self, Schema};
use synaudit::vulnerability::{achilles_scores, select_targets, write_scores_csv};
use synaudit::Error;

#[derive(Parser, Debug)]
#[command(
    name = "synaudit",
    version,
    about = "Privacy auditing for synthetic tabular data"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Worker threads; 0 uses all available cores.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Seed override (generator and sampling seed for `generate`, game seed
    /// for config-driven commands).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Percentile used by the privacy tests, as a fraction.
    #[arg(long, global = true)]
    p: Option<f64>,
    /// Numeric feature scaling for distances.
    #[arg(long, global = true, value_enum)]
    scaling: Option<Scaling>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Scaling {
    None,
    Minmax,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Indhist,
    Baynet,
    PerfectLeaker,
    NullModel,
    UniqueValueLeaker,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the DCR, NNDR and IMS privacy tests on a synthetic dataset.
    Audit {
        #[arg(long)]
        synthetic: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        holdout: PathBuf,
        #[arg(long)]
        schema: PathBuf,
    },
    /// Fit a generator and write a synthetic CSV.
    Generate {
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        schema: PathBuf,
        #[arg(long, value_enum)]
        generator: Family,
        /// Number of synthetic rows.
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 10)]
        bins: usize,
        #[arg(long, default_value_t = 2)]
        max_parents: usize,
        #[arg(long, default_value_t = 1.0)]
        laplace_alpha: f64,
        #[arg(long, default_value_t = 0.9)]
        emit_probability: f64,
        /// Also save the fitted model as JSON.
        #[arg(long)]
        save_model: Option<PathBuf>,
    },
    /// Achilles vulnerability scores of every record.
    Score {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        schema: PathBuf,
        #[arg(long, default_value_t = 5)]
        k: usize,
        /// Number of most vulnerable records to list.
        #[arg(long, default_value_t = 20)]
        top: usize,
        /// Write all scores as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Membership game for one record of the target split.
    Attack {
        #[arg(long)]
        config: PathBuf,
        /// Record index within the target split.
        #[arg(long)]
        index: usize,
        /// Scores CSV path; defaults to `<output_dir>/attack_<index>_scores.csv`.
        #[arg(long)]
        scores: Option<PathBuf>,
    },
    /// Full experiment; artifacts go to the configured output directory.
    Experiment {
        #[arg(long)]
        config: PathBuf,
    },
    /// DCR margin curves for the evaluation datasets of an experiment.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated percentile fractions; defaults to the config grid.
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<f64>>,
    },
    /// Infer a schema from a CSV file.
    InferSchema {
        #[arg(long)]
        csv: PathBuf,
        /// Share of parseable values above which a column is numeric.
        #[arg(long, default_value_t = 0.95)]
        numeric_threshold: f64,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidConfig(_) => 1,
            e if e.is_data_error() => 2,
            _ => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn require_file(path: &Path, what: &str) -> CliResult<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(Failure::usage(format!(
            "{what} file not found: {}",
            path.display()
        )))
    }
}

fn require_parent(path: &Path) -> CliResult<()> {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() && !p.is_dir() => Err(Failure::usage(format!(
            "parent directory does not exist: {}",
            p.display()
        ))),
        _ => Ok(()),
    }
}

fn print_json(value: &impl serde::Serialize) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("output serializes")
    );
}

impl Global {
    fn distance(&self, base: DistanceConfig) -> CliResult<DistanceConfig> {
        let mut cfg = base;
        if let Some(p) = self.p {
            cfg.percentile_p = p;
        }
        if let Some(s) = self.scaling {
            cfg.numeric_scaling = match s {
                Scaling::None => NumericScaling::None,
                Scaling::Minmax => NumericScaling::MinMaxOnTarget,
            };
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn load_config(&self, path: &Path) -> CliResult<ExperimentConfig> {
        require_file(path, "config")?;
        let mut cfg =
            ExperimentConfig::load(path).map_err(|e| Failure::usage(format!("bad config: {e}")))?;
        cfg.distance = self.distance(cfg.distance)?;
        if let Some(seed) = self.seed {
            cfg.game.seed = seed;
        }
        require_file(&cfg.data.csv, "data")?;
        require_file(&cfg.data.schema, "schema")?;
        require_parent(&cfg.output_dir)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn load_schema(path: &Path) -> CliResult<Arc<Schema>> {
    require_file(path, "schema")?;
    Ok(Arc::new(Schema::load(path)?))
}

fn load_data(path: &Path, schema: &Arc<Schema>, what: &str) -> CliResult<tabular::Dataset> {
    require_file(path, what)?;
    tabular::load_csv_with_schema(path, schema.clone())
        .map_err(|e| Failure::from(e).with_context(&format!("{what} {}", path.display())))
}

impl Failure {
    fn with_context(mut self, context: &str) -> Self {
        self.message = format!("{context}: {}", self.message);
        self
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let g = &cli.global;
    match cli.command {
        Command::Audit {
            synthetic,
            target,
            holdout,
            schema,
        } => {
            let schema = load_schema(&schema)?;
            let cfg = g.distance(DistanceConfig::default())?;
            let target = load_data(&target, &schema, "target")?;
            let holdout = load_data(&holdout, &schema, "holdout")?;
            let synthetic = load_data(&synthetic, &schema, "synthetic")?;
            let audit = PrivacyAuditor::<f64>::new(&target, &holdout, &cfg)?.audit(&synthetic)?;
            print_json(&audit.report);
        }
        Command::Generate {
            train,
            schema,
            generator,
            n,
            out,
            bins,
            max_parents,
            laplace_alpha,
            emit_probability,
            save_model,
        } => {
            if n == 0 {
                return Err(Failure::usage("--n must be at least 1"));
            }
            require_parent(&out)?;
            let kind = match generator {
                Family::Indhist => GeneratorKind::IndHist { bins },
                Family::Baynet => GeneratorKind::BayNet {
                    max_parents,
                    bins,
                    laplace_alpha,
                },
                Family::PerfectLeaker => GeneratorKind::PerfectLeaker,
                Family::NullModel => GeneratorKind::NullModel,
                Family::UniqueValueLeaker => GeneratorKind::UniqueValueLeaker {
                    emit_probability,
                    bins,
                },
            };
            let seed = g.seed.unwrap_or(0);
            let spec = GeneratorSpec::new(kind, seed);
            spec.validate()?;
            let schema = load_schema(&schema)?;
            let train = load_data(&train, &schema, "train")?;
            let fitted = generators::fit(&spec, &train)?;
            let syn = fitted.sample(n, seed);
            syn.save_csv(&out)?;
            if let Some(path) = &save_model {
                require_parent(path)?;
                fitted.save(path)?;
            }
            print_json(&json!({
                "generator": spec,
                "rows": syn.len(),
                "out": out,
            }));
        }
        Command::Score {
            data,
            schema,
            k,
            top,
            out,
        } => {
            let schema = load_schema(&schema)?;
            let cfg = g.distance(DistanceConfig::default())?;
            let d = load_data(&data, &schema, "data")?;
            let scores = achilles_scores(&d, k, &cfg)?;
            let ranked = select_targets(&scores, top.min(scores.len()))?;
            if let Some(path) = &out {
                require_parent(path)?;
                let f = std::fs::File::create(path).map_err(|e| Failure {
                    code: 3,
                    message: format!("{}: {e}", path.display()),
                })?;
                write_scores_csv(&scores, std::io::BufWriter::new(f))?;
            }
            let top: Vec<_> = ranked.iter().map(|&i| scores[i]).collect();
            print_json(&json!({ "k": k, "top": top }));
        }
        Command::Attack {
            config,
            index,
            scores,
        } => {
            let cfg = g.load_config(&config)?;
            let data = harness::prepare(&cfg)?;
            if index >= data.target.len() {
                return Err(Error::IndexOutOfRange {
                    index,
                    len: data.target.len(),
                }
                .into());
            }
            let outcome = attacks::run_game(
                &data.target,
                index,
                &data.holdout,
                &data.aux,
                &cfg.generator,
                &cfg.game_for(index),
            )?;
            let path = match scores {
                Some(p) => {
                    require_parent(&p)?;
                    p
                }
                None => {
                    std::fs::create_dir_all(&cfg.output_dir).map_err(|e| Failure {
                        code: 3,
                        message: format!("{}: {e}", cfg.output_dir.display()),
                    })?;
                    cfg.output_dir.join(format!("attack_{index}_scores.csv"))
                }
            };
            outcome.save_scores_csv(&path)?;
            print_json(&outcome);
        }
        Command::Experiment { config } => {
            let cfg = g.load_config(&config)?;
            let progress = |p: Progress| match p {
                Progress::Prepared {
                    target,
                    holdout,
                    aux,
                } => {
                    eprintln!("split: target {target}, holdout {holdout}, aux {aux}")
                }
                Progress::TargetsSelected(t) => eprintln!("targets: {t:?}"),
                Progress::TargetDone { record_index, auc } => {
                    eprintln!("record {record_index}: auc {auc:.4}")
                }
            };
            let report = harness::run_experiment_with_progress(&cfg, &progress)?;
            eprintln!("artifacts written to {}", cfg.output_dir.display());
            print_json(&report);
        }
        Command::Sweep { config, grid } => {
            let cfg = g.load_config(&config)?;
            let grid = grid.unwrap_or_else(|| cfg.sweep_grid.clone());
            if grid.is_empty() {
                return Err(Failure::usage("--grid must not be empty"));
            }
            let curves = harness::sweep_report(&cfg, &grid)?;
            let min_margin = curves
                .iter()
                .flat_map(|c| c.margins.iter().map(|m| m.1))
                .fold(f64::INFINITY, f64::min);
            print_json(&json!({
                "datasets": curves.len(),
                "grid": grid,
                "min_margin": min_margin,
                "all_nonnegative": min_margin >= 0.0,
                "out": cfg.output_dir.join(harness::SWEEP_FILE),
            }));
        }
        Command::InferSchema {
            csv,
            numeric_threshold,
        } => {
            require_file(&csv, "csv")?;
            if !(0.0..=1.0).contains(&numeric_threshold) {
                return Err(Failure::usage("--numeric-threshold must lie in [0, 1]"));
            }
            let schema = tabular::infer_schema(&csv, numeric_threshold)?;
            println!("{}", schema.to_json());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.threads)
        .build_global()
    {
        eprintln!("error: {e}");
        return ExitCode::from(3);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            if f.code == 1 {
                eprintln!("run `synaudit --help` for usage");
            }
            ExitCode::from(f.code)
        }
    }
}
