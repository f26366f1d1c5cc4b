//! Batch entry points wiring the service into the standard workflows:
//! generate, detect, export-train, filter-pseudo, evaluate, resample-eval.
//! Every subcommand drives the HTTP service; with no `--server` a private
//! in-process instance is spawned for the duration of the run.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use revaudit_client::Client;
use revaudit_core::api::*;
use revaudit_core::config::{BackendSet, RunConfig};
use revaudit_core::corpus::{self, PaperBundle, ReviewRecord};
use revaudit_core::integrator::write_training_examples;
use revaudit_core::orchestrator::{FinalOutput, SessionTrace};
use revaudit_core::report::{self, EvalRecord, EvaluationReport};
use revaudit_service::AppState;

#[derive(Parser)]
#[command(name = "revaudit", version, about = "Deficient-review detection toolkit")]
struct Cli {
    /// TOML run configuration (backends, budget, seed).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Use a running service instead of spawning one in-process.
    #[arg(long, global = true)]
    server: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the HTTP service.
    Serve(ServeArgs),
    /// Generate persona-conditioned reviews for a paper file.
    Generate(GenerateArgs),
    /// Run the detection loop over a review file.
    Detect(DetectArgs),
    /// Export supervised training pairs from gold-annotated reviews.
    ExportTrain(ExportTrainArgs),
    /// Build the semi-supervised training set from pseudo-labeled reviews.
    FilterPseudo(FilterPseudoArgs),
    /// Compute evaluation metrics from detection outputs.
    Evaluate(EvaluateArgs),
    /// Robustness metrics over resampled class proportions.
    ResampleEval(ResampleEvalArgs),
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1:8642")]
    addr: String,
}

#[derive(Args)]
struct GenerateArgs {
    /// Corpus file holding the papers to review.
    #[arg(long)]
    papers: PathBuf,
    /// Comma-separated generator ids to stamp on the reviews.
    #[arg(long, value_delimiter = ',')]
    generators: Vec<String>,
    /// Persona ids, or `all` for the nine canonical personas.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    personas: Vec<String>,
    /// Output review file (line-delimited JSON).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DetectArgs {
    #[arg(long)]
    papers: PathBuf,
    #[arg(long)]
    reviews: PathBuf,
    /// Output directory: one final-output and one trace file per review.
    #[arg(long)]
    out: PathBuf,
    /// Tool-call budget per review.
    #[arg(long)]
    budget: Option<u32>,
    /// Cap on orchestrator regenerations per review.
    #[arg(long)]
    regen_cap: Option<u32>,
    /// Concurrent sessions (scripted backends force 1).
    #[arg(long)]
    parallelism: Option<usize>,
}

#[derive(Args)]
struct ExportTrainArgs {
    /// Gold-annotated reviews.
    #[arg(long)]
    reviews: PathBuf,
    #[arg(long)]
    papers: PathBuf,
    /// Directory of detection trace files.
    #[arg(long)]
    traces: PathBuf,
    /// Output training file (line-delimited JSON).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FilterPseudoArgs {
    /// Persona-tagged reviews to pseudo-label.
    #[arg(long)]
    reviews: PathBuf,
    #[arg(long)]
    papers: PathBuf,
    #[arg(long)]
    traces: PathBuf,
    /// Gold training file to concatenate with.
    #[arg(long)]
    gold: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Detection output directory; repeat for multiple runs to average.
    #[arg(long, required = true)]
    pred: Vec<PathBuf>,
    /// Corpus with gold labels and persona tags.
    #[arg(long)]
    reviews: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Also print plain-text result tables.
    #[arg(long)]
    table: bool,
}

#[derive(Args)]
struct ResampleEvalArgs {
    #[arg(long)]
    pred: PathBuf,
    #[arg(long)]
    reviews: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,0.75")]
    proportions: Vec<f64>,
    #[arg(long, default_value_t = 20)]
    n_resamples: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    subset_size: Option<usize>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    table: bool,
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env()
                .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new("warn")),
        )
        .with_writer(std::io::stderr)
        .init();
    let cli = Cli::parse();
    let runtime = tokio::runtime::Runtime::new().expect("tokio runtime");
    match runtime.block_on(run(cli)) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(failed_records) => {
            eprintln!("{failed_records} record(s) failed; see the failure ledger");
            ExitCode::FAILURE
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn load_config(cli_config: &Option<PathBuf>) -> Result<RunConfig> {
    match cli_config {
        Some(path) => RunConfig::load(path)
            .with_context(|| format!("loading config {}", path.display())),
        None => Ok(RunConfig::default()),
    }
}

/// Connects to `--server`, or spawns a private in-process service configured
/// from the run config.
async fn connect(cli: &Cli, config: &RunConfig) -> Result<Client> {
    if let Some(server) = &cli.server {
        return Ok(Client::new(server.clone()));
    }
    let backends = if config.backend.default.is_some()
        || config.backend.orchestrator.is_some()
        || config.backend.tool.is_some()
        || config.backend.integrator.is_some()
        || config.backend.generator.is_some()
    {
        Some(BackendSet::build(config)?)
    } else {
        None
    };
    let state = AppState::from_config(config, backends);
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await?;
    let addr = listener.local_addr()?;
    tokio::spawn(revaudit_service::serve(state, listener));
    Ok(Client::new(format!("http://{addr}")))
}

async fn run(cli: Cli) -> Result<usize> {
    let mut config = load_config(&cli.config)?;
    match &cli.command {
        Command::Serve(args) => {
            let backends = if config.backend.default.is_some()
                || config.backend.orchestrator.is_some()
                || config.backend.tool.is_some()
                || config.backend.integrator.is_some()
                || config.backend.generator.is_some()
            {
                Some(BackendSet::build(&config)?)
            } else {
                None
            };
            let state = AppState::from_config(&config, backends);
            let listener = tokio::net::TcpListener::bind(&args.addr).await?;
            println!("listening on http://{}", listener.local_addr()?);
            revaudit_service::serve(state, listener).await?;
            Ok(0)
        }
        Command::Generate(args) => {
            let client = connect(&cli, &config).await?;
            cmd_generate(&client, args).await
        }
        Command::Detect(args) => {
            if cli.server.is_some()
                && (args.budget.is_some() || args.regen_cap.is_some() || args.parallelism.is_some())
            {
                bail!("--budget/--regen-cap/--parallelism configure the local service; with --server they must be set in the server's config");
            }
            if let Some(budget) = args.budget {
                config.run.budget = budget;
            }
            if let Some(cap) = args.regen_cap {
                config.run.regen_cap = cap;
            }
            if let Some(parallelism) = args.parallelism {
                config.run.parallelism = parallelism;
            }
            config.validate()?;
            let client = connect(&cli, &config).await?;
            cmd_detect(&client, args).await
        }
        Command::ExportTrain(args) => {
            let client = connect(&cli, &config).await?;
            cmd_export_train(&client, args).await
        }
        Command::FilterPseudo(args) => {
            let client = connect(&cli, &config).await?;
            cmd_filter_pseudo(&client, args).await
        }
        Command::Evaluate(args) => {
            let client = connect(&cli, &config).await?;
            cmd_evaluate(&client, args).await
        }
        Command::ResampleEval(args) => {
            let client = connect(&cli, &config).await?;
            cmd_resample_eval(&client, args).await
        }
    }
}

fn load_corpus_file(path: &Path) -> Result<(Vec<PaperBundle>, Vec<ReviewRecord>)> {
    corpus::load_corpus(path).with_context(|| format!("loading corpus {}", path.display()))
}

fn sanitize(id: &str) -> String {
    id.chars()
        .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-') { c } else { '_' })
        .collect()
}

fn write_failures(path: &Path, failures: &[RecordFailure]) -> Result<()> {
    if failures.is_empty() {
        return Ok(());
    }
    let mut out = String::new();
    for failure in failures {
        out.push_str(&serde_json::to_string(failure)?);
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

async fn cmd_generate(client: &Client, args: &GenerateArgs) -> Result<usize> {
    let (papers, _) = load_corpus_file(&args.papers)?;
    if papers.is_empty() {
        bail!("no paper records in {}", args.papers.display());
    }
    if args.generators.is_empty() {
        bail!("--generators requires at least one id");
    }
    let personas = if args.personas.iter().any(|p| p == "all") {
        None
    } else {
        Some(args.personas.clone())
    };

    let mut reviews = Vec::new();
    let mut failures = Vec::new();
    for generator_id in &args.generators {
        let response = client
            .generate(&GenerateRequest {
                papers: papers.clone(),
                generator_id: generator_id.clone(),
                personas: personas.clone(),
            })
            .await?;
        reviews.extend(response.reviews);
        failures.extend(response.failures);
    }

    std::fs::write(&args.out, corpus::write_corpus(&[], &reviews))?;
    write_failures(&args.out.with_extension("failures.jsonl"), &failures)?;
    println!("generated {} review(s), {} failure(s)", reviews.len(), failures.len());
    Ok(failures.len())
}

async fn cmd_detect(client: &Client, args: &DetectArgs) -> Result<usize> {
    let (mut papers, more_reviews) = load_corpus_file(&args.papers)?;
    let (more_papers, mut reviews) = load_corpus_file(&args.reviews)?;
    papers.extend(more_papers);
    reviews.extend(more_reviews);
    if reviews.is_empty() {
        bail!("no review records to detect");
    }
    std::fs::create_dir_all(&args.out)?;

    let response = client
        .detect_batch(&DetectBatchRequest { papers, reviews })
        .await?;

    let mut failures = Vec::new();
    for outcome in &response.outcomes {
        match (&outcome.result, &outcome.error) {
            (Some(result), _) => {
                let stem = sanitize(&outcome.review_id);
                std::fs::write(
                    args.out.join(format!("{stem}.final.json")),
                    serde_json::to_string_pretty(&result.final_output)?,
                )?;
                std::fs::write(
                    args.out.join(format!("{stem}.trace.json")),
                    serde_json::to_string_pretty(&result.trace)?,
                )?;
            }
            (None, Some(error)) => failures.push(RecordFailure {
                id: outcome.review_id.clone(),
                error: error.clone(),
            }),
            (None, None) => failures.push(RecordFailure {
                id: outcome.review_id.clone(),
                error: "no result returned".to_string(),
            }),
        }
    }
    write_failures(&args.out.join("failures.jsonl"), &failures)?;
    println!(
        "detected {} review(s), {} failure(s)",
        response.outcomes.len() - failures.len(),
        failures.len()
    );
    Ok(failures.len())
}

fn read_traces(dir: &Path) -> Result<Vec<SessionTrace>> {
    let mut traces = Vec::new();
    let mut entries: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.to_string_lossy().ends_with(".trace.json"))
        .collect();
    entries.sort();
    for path in entries {
        let text = std::fs::read_to_string(&path)?;
        let trace: SessionTrace = serde_json::from_str(&text)
            .with_context(|| format!("parsing trace {}", path.display()))?;
        traces.push(trace);
    }
    Ok(traces)
}

/// Detection outputs of one run: (review_id, final output), joined through
/// the trace file sharing the same stem.
fn read_run(dir: &Path) -> Result<Vec<(String, FinalOutput)>> {
    let mut outputs = Vec::new();
    for trace in read_traces(dir)? {
        let stem = sanitize(&trace.review_id);
        let final_path = dir.join(format!("{stem}.final.json"));
        let text = std::fs::read_to_string(&final_path)
            .with_context(|| format!("reading {}", final_path.display()))?;
        let final_output: FinalOutput = serde_json::from_str(&text)
            .with_context(|| format!("parsing {}", final_path.display()))?;
        outputs.push((trace.review_id, final_output));
    }
    Ok(outputs)
}

async fn cmd_export_train(client: &Client, args: &ExportTrainArgs) -> Result<usize> {
    let (mut papers, mut reviews) = load_corpus_file(&args.reviews)?;
    let (more_papers, more_reviews) = load_corpus_file(&args.papers)?;
    papers.extend(more_papers);
    reviews.extend(more_reviews);
    let traces = read_traces(&args.traces)?;

    let response = client
        .export_stage1(&ExportStage1Request { reviews, papers, traces })
        .await?;
    std::fs::write(&args.out, write_training_examples(&response.examples))?;
    write_failures(&args.out.with_extension("failures.jsonl"), &response.failures)?;
    println!(
        "exported {} example(s), {} failure(s)",
        response.examples.len(),
        response.failures.len()
    );
    Ok(response.failures.len())
}

fn read_training_file(path: &Path) -> Result<Vec<revaudit_core::integrator::TrainingExample>> {
    let text = std::fs::read_to_string(path)?;
    let mut examples = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        examples.push(
            serde_json::from_str(line)
                .with_context(|| format!("{}:{}", path.display(), i + 1))?,
        );
    }
    Ok(examples)
}

async fn cmd_filter_pseudo(client: &Client, args: &FilterPseudoArgs) -> Result<usize> {
    let (mut papers, mut reviews) = load_corpus_file(&args.reviews)?;
    let (more_papers, more_reviews) = load_corpus_file(&args.papers)?;
    papers.extend(more_papers);
    reviews.extend(more_reviews);
    let traces = read_traces(&args.traces)?;
    let gold = read_training_file(&args.gold)?;

    let response = client
        .filter_pseudo(&FilterPseudoRequest { reviews, papers, traces, gold })
        .await?;
    std::fs::write(&args.out, write_training_examples(&response.examples))?;
    write_failures(&args.out.with_extension("failures.jsonl"), &response.failures)?;
    println!(
        "wrote {} example(s), {} failure(s)",
        response.examples.len(),
        response.failures.len()
    );
    Ok(response.failures.len())
}

fn eval_records(
    run: &[(String, FinalOutput)],
    reviews_by_id: &HashMap<String, ReviewRecord>,
) -> Vec<EvalRecord> {
    run.iter()
        .map(|(review_id, output)| {
            let review = reviews_by_id.get(review_id);
            EvalRecord {
                review_id: review_id.clone(),
                pred_deficient: output.classification,
                pred_labels: output.result.labeled_set().into_iter().collect(),
                gold: review.and_then(|r| r.gold.clone()),
                persona_id: review.and_then(|r| r.persona_id.clone()),
            }
        })
        .collect()
}

/// Multi-run evaluation: per-run reports plus the per-metric mean.
#[derive(Debug, Serialize, Deserialize)]
struct EvaluateRunsReport {
    runs: Vec<EvaluationReport>,
    mean: BTreeMap<String, f64>,
}

async fn cmd_evaluate(client: &Client, args: &EvaluateArgs) -> Result<usize> {
    let (_, reviews) = load_corpus_file(&args.reviews)?;
    let reviews_by_id: HashMap<String, ReviewRecord> =
        reviews.into_iter().map(|r| (r.review_id.clone(), r)).collect();

    let mut runs = Vec::new();
    for dir in &args.pred {
        let run = read_run(dir)?;
        if run.is_empty() {
            bail!("no detection outputs in {}", dir.display());
        }
        let records = eval_records(&run, &reviews_by_id);
        let response = client.evaluate(&EvaluateRequest { records }).await?;
        runs.push(response.report);
    }
    let flattened: Vec<BTreeMap<String, f64>> = runs.iter().map(report::flatten).collect();
    let mean = revaudit_core::metrics::aggregate_runs(&flattened)?;
    let combined = EvaluateRunsReport { runs, mean };
    std::fs::write(&args.out, serde_json::to_string_pretty(&combined)?)?;
    if args.table {
        for (i, run) in combined.runs.iter().enumerate() {
            if combined.runs.len() > 1 {
                println!("run {}:", i + 1);
            }
            print!("{}", report::render_tables(run));
        }
        if combined.runs.len() > 1 {
            println!("mean over {} runs:", combined.runs.len());
            for (key, value) in &combined.mean {
                println!("  {key} = {value:.4}");
            }
        }
    }
    println!("evaluation written to {}", args.out.display());
    Ok(0)
}

async fn cmd_resample_eval(client: &Client, args: &ResampleEvalArgs) -> Result<usize> {
    let (_, reviews) = load_corpus_file(&args.reviews)?;
    let reviews_by_id: HashMap<String, ReviewRecord> =
        reviews.into_iter().map(|r| (r.review_id.clone(), r)).collect();
    let run = read_run(&args.pred)?;
    if run.is_empty() {
        bail!("no detection outputs in {}", args.pred.display());
    }
    let records = eval_records(&run, &reviews_by_id);
    let seed = args.seed.unwrap_or(0);
    let response = client
        .resample_eval(&ResampleEvalRequest {
            records,
            proportions: args.proportions.clone(),
            n_resamples: args.n_resamples,
            seed,
            subset_size: args.subset_size,
        })
        .await?;
    std::fs::write(&args.out, serde_json::to_string_pretty(&response.report)?)?;
    if args.table {
        print!("{}", report::render_resample_table(&response.report));
    }
    println!("resample evaluation written to {}", args.out.display());
    Ok(0)
}
