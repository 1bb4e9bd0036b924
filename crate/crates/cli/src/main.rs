//! `affect` — build datasets, train and evaluate the two affect classifiers,
//! and classify text into emotion quadrants.

mod artifacts;

use std::fs::{self, File};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, bail};
use clap::{Args, Parser, Subcommand};

use affect_core::dataset::{LabeledText, Task, build_balanced, parse_reviews};
use affect_core::emotion::{BaselinePipeline, LexiconPipeline, classify_text};
use affect_core::eval::cross_validate;
use affect_core::features::{BaselineMode, FeatureVector};
use affect_core::lexicon::{
    CategoryLexicon, SentimentLexicon, parse_general_inquirer, parse_sentiwordnet,
};
use affect_core::provenance::RunHeader;
use affect_core::svm::{Hyperparams, Label, LearningSchedule, predict, read_model, write_model};
use affect_core::textproc::segment;

const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Default seed for every source of randomness; override with --seed.
const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(
    name = "affect",
    version,
    about = "Two-axis affect classification for English text"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a balanced training set from star-rated reviews.
    BuildDataset(BuildDatasetArgs),
    /// Train one task's model and write the model file.
    Train(TrainArgs),
    /// Run stratified k-fold cross-validation and write the report.
    Evaluate(EvaluateArgs),
    /// Run a unigram baseline through the same cross-validation harness.
    Baseline(BaselineArgs),
    /// Classify texts with trained polarity and intensity models.
    Classify(ClassifyArgs),
}

fn parse_task(s: &str) -> Result<Task, String> {
    Task::parse(s).ok_or_else(|| format!("unknown task \"{s}\" (expected polarity or intensity)"))
}

/// Where the labeled examples come from: raw reviews (balanced here) or a
/// dataset file written by build-dataset.
#[derive(Args)]
struct SourceArgs {
    /// Star-rated reviews: one JSON record per line with "text" and "stars".
    #[arg(long)]
    reviews: Option<PathBuf>,

    /// Balanced dataset file produced by build-dataset.
    #[arg(long, conflicts_with = "reviews")]
    dataset: Option<PathBuf>,

    /// Examples to sample per class when reading --reviews.
    #[arg(long, conflicts_with = "dataset")]
    per_class: Option<usize>,
}

#[derive(Args)]
struct BuildDatasetArgs {
    #[arg(long)]
    reviews: PathBuf,

    #[arg(long, value_parser = parse_task)]
    task: Task,

    #[arg(long)]
    per_class: usize,

    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    source: SourceArgs,

    #[arg(long, value_parser = parse_task)]
    task: Task,

    /// SentiWordNet 3.0 file.
    #[arg(long)]
    sentiwordnet: PathBuf,

    /// General Inquirer category table.
    #[arg(long)]
    inquirer: PathBuf,

    /// Soft-margin weight.
    #[arg(long, default_value_t = 1.0)]
    c: f64,

    #[arg(long, default_value_t = 50)]
    epochs: usize,

    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Model output path (defaults to `<out>/model-<task>.json`).
    #[arg(long)]
    model: Option<PathBuf>,

    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    #[command(flatten)]
    source: SourceArgs,

    #[arg(long, value_parser = parse_task)]
    task: Task,

    #[arg(long, default_value_t = 10)]
    folds: usize,

    #[arg(long)]
    sentiwordnet: PathBuf,

    #[arg(long)]
    inquirer: PathBuf,

    #[arg(long, default_value_t = 1.0)]
    c: f64,

    #[arg(long, default_value_t = 50)]
    epochs: usize,

    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,

    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BaselineArgs {
    #[command(flatten)]
    source: SourceArgs,

    #[arg(long, value_parser = parse_task)]
    task: Task,

    /// Vocabulary mode: all | adjadv | adj | topk.
    #[arg(long)]
    mode: String,

    /// Vocabulary size for --mode topk.
    #[arg(long, default_value_t = 2000)]
    k: usize,

    #[arg(long, default_value_t = 10)]
    folds: usize,

    /// Needed by modes adjadv and adj for their POS filter.
    #[arg(long)]
    sentiwordnet: Option<PathBuf>,

    #[arg(long, default_value_t = 1.0)]
    c: f64,

    #[arg(long, default_value_t = 50)]
    epochs: usize,

    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,

    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    polarity_model: PathBuf,

    #[arg(long)]
    intensity_model: PathBuf,

    #[arg(long)]
    sentiwordnet: PathBuf,

    #[arg(long)]
    inquirer: PathBuf,

    /// Input file with one document per line; stdin when omitted. Blank
    /// lines are skipped.
    input: Option<PathBuf>,

    /// Also write the records to `<out>/classifications.jsonl`.
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::BuildDataset(args) => build_dataset(args),
        Command::Train(args) => train_command(args),
        Command::Evaluate(args) => evaluate_command(args),
        Command::Baseline(args) => baseline_command(args),
        Command::Classify(args) => classify_command(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("affect: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn open_reader(path: &Path) -> anyhow::Result<BufReader<File>> {
    Ok(BufReader::new(
        File::open(path).with_context(|| format!("opening {}", path.display()))?,
    ))
}

fn load_lexicons(
    sentiwordnet: &Path,
    inquirer: &Path,
) -> anyhow::Result<(SentimentLexicon, CategoryLexicon)> {
    let sentlex = parse_sentiwordnet(open_reader(sentiwordnet)?)
        .with_context(|| format!("parsing sentiment lexicon {}", sentiwordnet.display()))?;
    let catlex = parse_general_inquirer(open_reader(inquirer)?)
        .with_context(|| format!("parsing category lexicon {}", inquirer.display()))?;
    Ok((sentlex, catlex))
}

/// Load examples for one task, either by balancing raw reviews or by reading
/// a prebuilt dataset file. The supplied header gains the input digest.
fn load_examples(
    source: &SourceArgs,
    task: Task,
    seed: u64,
    header: RunHeader,
) -> anyhow::Result<(Vec<LabeledText>, RunHeader)> {
    match (&source.reviews, &source.dataset) {
        (Some(reviews), None) => {
            let per_class = source
                .per_class
                .context("--per-class is required with --reviews")?;
            let header = header.with_input(reviews)?;
            let parsed = parse_reviews(open_reader(reviews)?)
                .with_context(|| format!("reading {}", reviews.display()))?;
            if !parsed.rejects.is_empty() {
                eprintln!(
                    "affect: {} review line(s) rejected (first: line {}: {})",
                    parsed.rejects.len(),
                    parsed.rejects[0].line,
                    parsed.rejects[0].reason
                );
            }
            let examples = build_balanced(&parsed.records, task, per_class, seed)?;
            Ok((examples, header))
        }
        (None, Some(dataset)) => {
            let header = header.with_input(dataset)?;
            let examples = artifacts::read_dataset(open_reader(dataset)?)
                .with_context(|| format!("reading {}", dataset.display()))?;
            if let Some(example) = examples.iter().find(|e| e.task != task) {
                bail!(
                    "dataset {} carries task \"{}\" but --task is \"{}\"",
                    dataset.display(),
                    example.task.as_str(),
                    task.as_str()
                );
            }
            Ok((examples, header))
        }
        _ => bail!("exactly one of --reviews or --dataset is required"),
    }
}

fn hyperparams(c: f64, epochs: usize, seed: u64) -> Hyperparams {
    Hyperparams {
        c,
        epochs,
        schedule: LearningSchedule::InverseT,
        seed,
    }
}

fn build_dataset(args: BuildDatasetArgs) -> anyhow::Result<()> {
    let header = RunHeader::new(TOOL_VERSION, args.seed).with_input(&args.reviews)?;
    let parsed = parse_reviews(open_reader(&args.reviews)?)
        .with_context(|| format!("reading {}", args.reviews.display()))?;
    let examples = build_balanced(&parsed.records, args.task, args.per_class, args.seed)?;

    fs::create_dir_all(&args.out)?;
    let dataset_path = args.out.join(format!("dataset-{}.tsv", args.task.as_str()));
    let mut file = File::create(&dataset_path)?;
    artifacts::write_dataset(&mut file, &header, &examples)?;
    println!(
        "wrote {} examples ({} per class) to {}",
        examples.len(),
        args.per_class,
        dataset_path.display()
    );

    if !parsed.rejects.is_empty() {
        let rejects_path = args.out.join("rejects.tsv");
        artifacts::write_rejects(&rejects_path, &header, &parsed.rejects)?;
        println!(
            "{} rejected line(s) recorded in {}",
            parsed.rejects.len(),
            rejects_path.display()
        );
    }
    Ok(())
}

fn train_command(args: TrainArgs) -> anyhow::Result<()> {
    let model_path = match (&args.model, &args.out) {
        (Some(path), _) => path.clone(),
        (None, Some(out)) => out.join(format!("model-{}.json", args.task.as_str())),
        (None, None) => bail!("either --model or --out is required"),
    };

    let header = RunHeader::new(TOOL_VERSION, args.seed)
        .with_input(&args.sentiwordnet)?
        .with_input(&args.inquirer)?;
    let (sentlex, catlex) = load_lexicons(&args.sentiwordnet, &args.inquirer)?;
    let (examples, header) = load_examples(&args.source, args.task, args.seed, header)?;

    let pipeline = LexiconPipeline {
        task: args.task,
        sentlex: &sentlex,
        catlex: &catlex,
    };
    let descriptor = pipeline.descriptor();
    let mut training: Vec<(FeatureVector, Label)> = Vec::with_capacity(examples.len());
    for example in &examples {
        let doc = segment(&example.text)?;
        training.push((pipeline.extract(&doc), example.label));
    }

    let names = args.task.label_names();
    let model = affect_core::svm::train(
        &descriptor,
        &training,
        &hyperparams(args.c, args.epochs, args.seed),
        (names.0.to_string(), names.1.to_string()),
    )?;

    let correct = training
        .iter()
        .filter(|(v, label)| {
            predict(&model, v)
                .map(|(p, _)| p == *label)
                .unwrap_or(false)
        })
        .count();

    if let Some(parent) = model_path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let file =
        File::create(&model_path).with_context(|| format!("creating {}", model_path.display()))?;
    write_model(file, &model, &header)?;

    println!(
        "trained {} model on {} examples (training accuracy {:.2}%)",
        args.task.as_str(),
        training.len(),
        100.0 * correct as f64 / training.len() as f64
    );
    println!("wrote {}", model_path.display());
    Ok(())
}

fn evaluate_command(args: EvaluateArgs) -> anyhow::Result<()> {
    let header = RunHeader::new(TOOL_VERSION, args.seed)
        .with_input(&args.sentiwordnet)?
        .with_input(&args.inquirer)?;
    let (sentlex, catlex) = load_lexicons(&args.sentiwordnet, &args.inquirer)?;
    let (examples, header) = load_examples(&args.source, args.task, args.seed, header)?;

    let pipeline = LexiconPipeline {
        task: args.task,
        sentlex: &sentlex,
        catlex: &catlex,
    };
    let report = cross_validate(
        &examples,
        &pipeline,
        &hyperparams(args.c, args.epochs, args.seed),
        args.folds,
        args.seed,
    )?;

    fs::create_dir_all(&args.out)?;
    let (json_path, text_path) = artifacts::write_report(
        &args.out,
        &format!("report-{}", args.task.as_str()),
        &artifacts::ReportMeta {
            header: &header,
            task: args.task,
            feature_mode: "lexicon",
            folds: args.folds,
            examples: examples.len(),
        },
        &report,
    )?;

    print!("{}", report.render_table(args.task.label_names()));
    println!("wrote {}", json_path.display());
    println!("wrote {}", text_path.display());
    Ok(())
}

fn parse_mode(mode: &str, k: usize) -> anyhow::Result<BaselineMode> {
    match mode {
        "all" => Ok(BaselineMode::All),
        "adjadv" => Ok(BaselineMode::AdjAdv),
        "adj" => Ok(BaselineMode::Adj),
        "topk" => Ok(BaselineMode::TopK(k)),
        other => bail!("unknown mode \"{other}\" (expected all, adjadv, adj, or topk)"),
    }
}

fn baseline_command(args: BaselineArgs) -> anyhow::Result<()> {
    let mode = parse_mode(&args.mode, args.k)?;

    let mut header = RunHeader::new(TOOL_VERSION, args.seed);
    let sentlex = match &args.sentiwordnet {
        Some(path) => {
            header = header.with_input(path)?;
            Some(
                parse_sentiwordnet(open_reader(path)?)
                    .with_context(|| format!("parsing sentiment lexicon {}", path.display()))?,
            )
        }
        None => None,
    };
    let (examples, header) = load_examples(&args.source, args.task, args.seed, header)?;

    let pipeline = BaselinePipeline {
        mode,
        sentlex: sentlex.as_ref(),
    };
    let report = cross_validate(
        &examples,
        &pipeline,
        &hyperparams(args.c, args.epochs, args.seed),
        args.folds,
        args.seed,
    )?;

    fs::create_dir_all(&args.out)?;
    let mode_tag = match mode {
        BaselineMode::TopK(k) => format!("topk{k}"),
        _ => args.mode.clone(),
    };
    let (json_path, text_path) = artifacts::write_report(
        &args.out,
        &format!("report-baseline-{}-{mode_tag}", args.task.as_str()),
        &artifacts::ReportMeta {
            header: &header,
            task: args.task,
            feature_mode: &format!("baseline/{mode_tag}"),
            folds: args.folds,
            examples: examples.len(),
        },
        &report,
    )?;

    print!("{}", report.render_table(args.task.label_names()));
    println!("wrote {}", json_path.display());
    println!("wrote {}", text_path.display());
    Ok(())
}

fn classify_command(args: ClassifyArgs) -> anyhow::Result<()> {
    let mut header = RunHeader::new(TOOL_VERSION, args.seed)
        .with_input(&args.polarity_model)?
        .with_input(&args.intensity_model)?
        .with_input(&args.sentiwordnet)?
        .with_input(&args.inquirer)?;

    let (sentlex, catlex) = load_lexicons(&args.sentiwordnet, &args.inquirer)?;
    let (polarity_model, _) = read_model(open_reader(&args.polarity_model)?)
        .with_context(|| format!("reading {}", args.polarity_model.display()))?;
    let (intensity_model, _) = read_model(open_reader(&args.intensity_model)?)
        .with_context(|| format!("reading {}", args.intensity_model.display()))?;

    let lines: Vec<String> = match &args.input {
        Some(path) => {
            header = header.with_input(path)?;
            open_reader(path)?.lines().collect::<std::io::Result<_>>()?
        }
        None => {
            let stdin = std::io::stdin();
            stdin.lock().lines().collect::<std::io::Result<_>>()?
        }
    };

    let mut records = Vec::new();
    for line in &lines {
        if line.trim().is_empty() {
            continue;
        }
        let result = classify_text(line, &polarity_model, &intensity_model, &sentlex, &catlex)?;
        let record = serde_json::json!({
            "quadrant": result.quadrant.name(),
            "polarity_label": polarity_model.label_name(result.polarity_label),
            "polarity_decision_value": result.polarity_decision_value,
            "intensity_label": intensity_model.label_name(result.intensity_label),
            "intensity_decision_value": result.intensity_decision_value,
        });
        println!("{record}");
        records.push(record);
    }

    if let Some(out) = &args.out {
        fs::create_dir_all(out)?;
        let path = out.join("classifications.jsonl");
        let mut file = File::create(&path)?;
        writeln!(file, "{}", serde_json::json!({ "header": header }))?;
        for record in &records {
            writeln!(file, "{record}")?;
        }
        eprintln!("affect: wrote {}", path.display());
    }
    Ok(())
}
