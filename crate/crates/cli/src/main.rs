use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

use keytitle::learn::Cutoff;
use keytitle::ErrorKind;

#[derive(Debug, Parser)]
#[command(
    name = "keytitle",
    version,
    about = "Keyword extraction and title-word recommendation for abstracts"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Seed for oversampling and fold shuffling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Stopword list, one word per line, replacing the built-in list.
    #[arg(long, global = true)]
    pub stopwords: Option<PathBuf>,
    /// Part-of-speech source. Defaults to the model's setting where a model is given.
    #[arg(long, global = true, value_enum)]
    pub tagger: Option<TaggerArg>,
    /// PageRank damping factor.
    #[arg(long, global = true)]
    pub damping: Option<f64>,
    /// PositionRank damping factor.
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Convergence tolerance of the iterative rankings.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Iteration cap of the iterative rankings
    #[arg(long, global = true)]
    pub max_iterations: Option<usize>,
    /// Log progress messages as well as warnings.
    #[arg(short, long, global = true)]
    pub verbose: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TaggerArg {
    Builtin,
    PreTagged,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgoArg {
    Nb,
    Lr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Hulth,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert a raw corpus into the JSON-lines format.
    Ingest(IngestArgs),
    /// Print corpus statistics.
    Stats(StatsArgs),
    /// Train a keyword classifier on a corpus.
    Train(TrainArgs),
    /// Rank the keywords of one text with a trained model.
    Extract(ExtractArgs),
    /// Evaluate models.
    #[command(subcommand)]
    Eval(EvalCommand),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long, value_enum)]
    pub format: FormatArg,
    /// Directory of paired .abstr/.uncontr files; repeat for several.
    #[arg(long, required = true)]
    pub input: Vec<PathBuf>,
    #[arg(long)]
    pub output: PathBuf,
    /// Drop documents with fewer sentences.
    #[arg(long, default_value_t = 0)]
    pub min_sentences: usize,
    /// Drop documents with fewer gold keyword phrases.
    #[arg(long, default_value_t = 0)]
    pub min_gold: usize,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// Write here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SmoteArgs {
    /// Oversample positives by this percentage (a multiple of 100).
    #[arg(long)]
    pub smote_percent: Option<u32>,
    #[arg(long, default_value_t = 5)]
    pub smote_k: usize,
}

#[derive(Debug, Clone, Args)]
pub struct LrArgs {
    /// L2 penalty of logistic regression.
    #[arg(long, default_value_t = 1e-8)]
    pub ridge: f64,
    #[arg(long, default_value_t = 100)]
    pub max_epochs: usize,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long, value_enum)]
    pub algo: AlgoArg,
    #[command(flatten)]
    pub smote: SmoteArgs,
    #[command(flatten)]
    pub lr: LrArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Plain-text abstract.
    #[arg(long)]
    pub input: PathBuf,
    /// Number of keywords, or lenW to match the title length.
    #[arg(long, default_value = "10")]
    pub top_k: Cutoff,
    /// Title used by the lenW cutoff.
    #[arg(long)]
    pub title: Option<String>,
    /// Also write the document graph in DOT format.
    #[arg(long)]
    pub dot: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    /// Write the text report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write per-document rows as tab-separated values.
    #[arg(long)]
    pub tsv: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum EvalCommand {
    /// Document-level k-fold cross-validation.
    Cv(CvArgs),
    /// Apply a trained model to another corpus.
    Cross(CrossArgs),
    /// Overlap of top-ranked keywords with title words.
    Title(TitleArgs),
}

#[derive(Debug, Args)]
pub struct CvArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long, value_enum)]
    pub algo: AlgoArg,
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
    #[command(flatten)]
    pub smote: SmoteArgs,
    #[command(flatten)]
    pub lr: LrArgs,
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
    #[command(flatten)]
    pub report: ReportArgs,
}

#[derive(Debug, Args)]
pub struct CrossArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
    #[command(flatten)]
    pub report: ReportArgs,
}

#[derive(Debug, Args)]
pub struct TitleArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub corpus: PathBuf,
    /// Comma-separated cutoffs, e.g. 5,7,10,lenW.
    #[arg(long, value_delimiter = ',', default_value = "5,7,10,lenW")]
    pub at: Vec<Cutoff>,
    #[command(flatten)]
    pub report: ReportArgs,
}

fn init_logging(verbose: bool) {
    let level = if verbose { "info" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format(|buf, record| {
            let level = match record.level() {
                log::Level::Error => "error",
                log::Level::Warn => "warning",
                _ => "info",
            };
            writeln!(buf, "{level}: {}", record.args())
        })
        .init();
}

pub(crate) fn display_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    init_logging(cli.global.verbose);
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.kind() {
                ErrorKind::Usage => 1,
                ErrorKind::Data => 2,
                ErrorKind::Training => 3,
            })
        }
    }
}
