use std::path::Path;
use std::sync::Arc;

use keytitle::corpus::{corpus_stats, filter_corpus, ingest_hulth, read_jsonl, to_jsonl};
use keytitle::eval::{cross_collection_evaluate, cross_validate, title_overlap_evaluate, CvConfig, EvalReport};
use keytitle::features::RankParams;
use keytitle::io::write_atomic;
use keytitle::learn::{
    load_model, rank_keywords, save_model, smote_balance, train_model, Algorithm, LabeledDataset, LrConfig,
    ModelTrainer, SmoteConfig, TrainedModel,
};
use keytitle::pipeline::Pipeline;
use keytitle::textproc::{Document, RuleTagger, StopWords, TaggerMode, TextProcessor};
use keytitle::{Error, Result};

use crate::{
    display_name, AlgoArg, Cli, Command, CrossArgs, CvArgs, EvalCommand, ExtractArgs, GlobalArgs, IngestArgs, LrArgs,
    ReportArgs, SmoteArgs, StatsArgs, TaggerArg, TitleArgs, TrainArgs,
};

/// Settings shared by every command, after defaults are resolved.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    pub rank: RankParams,
    pub tagger: TaggerMode,
    pub stopwords: Option<std::path::PathBuf>,
}

impl RunConfig {
    /// Flags override `base`, which is either the defaults or a model's
    /// training settings.
    fn resolve(global: &GlobalArgs, base_rank: RankParams, base_tagger: TaggerMode) -> Result<Self> {
        let rank = RankParams {
            damping: global.damping.unwrap_or(base_rank.damping),
            alpha: global.alpha.unwrap_or(base_rank.alpha),
            tolerance: global.tolerance.unwrap_or(base_rank.tolerance),
            max_iterations: global.max_iterations.unwrap_or(base_rank.max_iterations),
        };
        rank.validate()?;
        let tagger = match global.tagger {
            Some(TaggerArg::Builtin) => TaggerMode::Builtin,
            Some(TaggerArg::PreTagged) => TaggerMode::PreTagged,
            None => base_tagger,
        };
        Ok(RunConfig {
            seed: global.seed,
            rank,
            tagger,
            stopwords: global.stopwords.clone(),
        })
    }

    fn defaults(global: &GlobalArgs) -> Result<Self> {
        Self::resolve(global, RankParams::default(), TaggerMode::default())
    }

    fn for_model(global: &GlobalArgs, model: &TrainedModel) -> Result<Self> {
        Self::resolve(global, model.training_meta.rank_params, model.training_meta.tagger)
    }

    fn text_processor(&self) -> Result<TextProcessor> {
        let stopwords = match &self.stopwords {
            Some(path) => StopWords::from_file(path)?,
            None => StopWords::english(),
        };
        Ok(TextProcessor::new(stopwords, Arc::new(RuleTagger), self.tagger))
    }

    fn pipeline(&self) -> Result<Pipeline> {
        Ok(Pipeline::new(self.text_processor()?, self.rank))
    }
}

fn algorithm(a: AlgoArg) -> Algorithm {
    match a {
        AlgoArg::Nb => Algorithm::NaiveBayes,
        AlgoArg::Lr => Algorithm::LogisticRegression,
    }
}

fn smote_config(args: &SmoteArgs) -> Result<Option<SmoteConfig>> {
    args.smote_percent
        .map(|percent| {
            let cfg = SmoteConfig {
                percent,
                k: args.smote_k,
            };
            cfg.validate().map(|_| cfg)
        })
        .transpose()
}

fn lr_config(args: &LrArgs) -> Result<LrConfig> {
    let cfg = LrConfig {
        ridge: args.ridge,
        max_epochs: args.max_epochs,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_report(report: &EvalReport, args: &ReportArgs) -> Result<()> {
    if let Some(path) = &args.tsv {
        write_atomic(path, report.to_tsv().as_bytes())?;
    }
    emit(&report.to_text(), args.out.as_deref())
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest(args) => ingest(&cli.global, args),
        Command::Stats(args) => stats(&cli.global, args),
        Command::Train(args) => train(&cli.global, args),
        Command::Extract(args) => extract(&cli.global, args),
        Command::Eval(EvalCommand::Cv(args)) => eval_cv(&cli.global, args),
        Command::Eval(EvalCommand::Cross(args)) => eval_cross(&cli.global, args),
        Command::Eval(EvalCommand::Title(args)) => eval_title(&cli.global, args),
    }
}

fn ingest(_global: &GlobalArgs, args: IngestArgs) -> Result<()> {
    let corpus = ingest_hulth(&args.input)?;
    let kept = filter_corpus(&corpus, args.min_sentences, args.min_gold);
    if kept.len() < corpus.len() {
        log::info!(
            "filters removed {} of {} documents",
            corpus.len() - kept.len(),
            corpus.len()
        );
    }
    write_atomic(&args.output, to_jsonl(&kept)?.as_bytes())?;
    log::info!("wrote {} documents to {}", kept.len(), args.output.display());
    Ok(())
}

fn stats(global: &GlobalArgs, args: StatsArgs) -> Result<()> {
    let config = RunConfig::defaults(global)?;
    let corpus = read_jsonl(&args.corpus)?;
    let s = corpus_stats(&corpus, &config.text_processor()?)?;
    emit(&s.to_string(), args.out.as_deref())
}

fn labeled_corpus(pipeline: &Pipeline, corpus: &[Document]) -> Result<LabeledDataset> {
    let prepared = pipeline.corpus_records(corpus)?;
    if !prepared.skipped.is_empty() {
        log::warn!("{} documents skipped", prepared.skipped.len());
    }
    let records = prepared.documents.into_iter().flat_map(|(_, r)| r).collect();
    LabeledDataset::new(records)
}

fn train(global: &GlobalArgs, args: TrainArgs) -> Result<()> {
    let config = RunConfig::defaults(global)?;
    let smote = smote_config(&args.smote)?;
    let lr = lr_config(&args.lr)?;
    let pipeline = config.pipeline()?;
    let corpus = read_jsonl(&args.corpus)?;
    let mut ds = labeled_corpus(&pipeline, &corpus)?;
    if let Some(s) = smote {
        ds = smote_balance(&ds, s, config.seed)?;
    }
    let mut model = train_model(&ds, algorithm(args.algo), lr, config.seed)?;
    let meta = &mut model.training_meta;
    meta.corpus = display_name(&args.corpus);
    meta.smote = smote;
    meta.rank_params = config.rank;
    meta.tagger = config.tagger;
    log::info!(
        "trained {} on {} records ({} positive, {} synthetic)",
        model.algorithm,
        meta.records,
        meta.positives,
        meta.synthetic
    );
    save_model(&model, &args.out)?;
    Ok(())
}

fn extract(global: &GlobalArgs, args: ExtractArgs) -> Result<()> {
    let model = load_model(&args.model)?;
    let config = RunConfig::for_model(global, &model)?;
    let pipeline = config.pipeline()?;
    let body = std::fs::read_to_string(&args.input).map_err(|e| Error::io(&args.input, e))?;
    let doc = Document::new(display_name(&args.input), args.title.unwrap_or_default(), body);
    if let Some(dot) = &args.dot {
        write_atomic(dot, pipeline.graph(&doc)?.to_dot().as_bytes())?;
    }
    let ranked = rank_keywords(&model, &pipeline, &doc, args.top_k)?;
    let mut text = String::new();
    for (i, e) in ranked.entries.iter().enumerate() {
        text.push_str(&format!("{}\t{}\t{:.6}\n", i + 1, e.stem, e.probability));
    }
    emit(&text, args.out.as_deref())
}

fn eval_cv(global: &GlobalArgs, args: CvArgs) -> Result<()> {
    let config = RunConfig::defaults(global)?;
    let pipeline = config.pipeline()?;
    let corpus = read_jsonl(&args.corpus)?;
    let trainer = ModelTrainer {
        algorithm: algorithm(args.algo),
        lr: lr_config(&args.lr)?,
        seed: config.seed,
    };
    let cv = CvConfig {
        folds: args.folds,
        smote: smote_config(&args.smote)?,
        threshold: args.threshold,
        seed: config.seed,
    };
    let mut report = cross_validate(&pipeline, &corpus, &trainer, &cv)?;
    report.model = trainer.algorithm.to_string();
    report.corpus = display_name(&args.corpus);
    emit_report(&report, &args.report)
}

fn model_label(model: &TrainedModel, path: &Path) -> String {
    format!("{} ({})", model.algorithm, display_name(path))
}

fn eval_cross(global: &GlobalArgs, args: CrossArgs) -> Result<()> {
    let model = load_model(&args.model)?;
    let config = RunConfig::for_model(global, &model)?;
    let corpus = read_jsonl(&args.corpus)?;
    let mut report = cross_collection_evaluate(&config.pipeline()?, &model, &corpus, args.threshold)?;
    report.model = model_label(&model, &args.model);
    report.corpus = display_name(&args.corpus);
    if model.training_meta.corpus == report.corpus {
        report.notes.push("model was trained on this corpus".into());
    }
    emit_report(&report, &args.report)
}

fn eval_title(global: &GlobalArgs, args: TitleArgs) -> Result<()> {
    let model = load_model(&args.model)?;
    let config = RunConfig::for_model(global, &model)?;
    let corpus = read_jsonl(&args.corpus)?;
    let mut report = title_overlap_evaluate(&config.pipeline()?, &model, &corpus, &args.at)?;
    report.model = model_label(&model, &args.model);
    report.corpus = display_name(&args.corpus);
    if model.training_meta.corpus == report.corpus {
        report.notes.push("model was trained on this corpus".into());
    }
    emit_report(&report, &args.report)
}
