//! One function per subcommand. Each reads its predecessor's artifact from
//! the output directory and writes its own.

use std::collections::HashMap;
use std::fs::File;
use std::io::BufReader;

use tweetsent_core::classifiers::{ClassifierModel, ModelKind};
use tweetsent_core::corpus::{
    filter_by_country, ingest_csv, persist_labeled, read_labeled, train_test_split, write_corpus, ColumnMap, Corpus,
    IngestOptions, LabeledDocument, SplitSpec,
};
use tweetsent_core::evaluation::{cross_validate, holdout_evaluate, ClassificationReport, CvOutcome, Evaluation, RocCurve};
use tweetsent_core::features::{build_vocabulary, fit_idf, TfidfModel};
use tweetsent_core::lexicon::{label_corpus, OpinionLexicon};
use tweetsent_core::pipeline::{featurize, FeatureConfig};
use tweetsent_core::report::{render_roc, render_word_cloud, word_frequency_report, SvgStyle};
use tweetsent_core::synthetic::generate_corpus;
use tweetsent_core::text::{StopwordList, TextPipeline, TokenSequence};
use tweetsent_core::{Error, SentimentLabel};

use crate::artifacts::{self as art, OutputDir};
use crate::config::{CorpusSource, PipelineConfig};
use crate::failure::{Failure, Outcome};

pub const SYNTHETIC_CSV: &str = "synthetic.csv";

macro_rules! note {
    ($($arg:tt)*) => { eprintln!("tweetsent: {}", format!($($arg)*)) };
}

pub struct Context {
    pub cfg: PipelineConfig,
    pub out: OutputDir,
}

fn open_file(path: &std::path::Path) -> Outcome<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| Failure::io(path, e))
}

fn source_corpus(cfg: &PipelineConfig) -> Outcome<Corpus> {
    match &cfg.corpus {
        None => Err(Failure::usage("no input corpus; set `input.corpus` to a CSV path or `synthetic`")),
        Some(CorpusSource::Synthetic) => Ok(generate_corpus(&cfg.synth)?),
        Some(CorpusSource::File(path)) => {
            let name = path.display().to_string();
            let ingested = ingest_csv(open_file(path)?, &name, &cfg.columns, &cfg.ingest)?;
            let s = &ingested.stats;
            note!("{name}: {} accepted, {} dropped ({} empty, {} duplicate, {} malformed)",
                s.accepted, s.dropped(), s.dropped_empty, s.dropped_duplicate, s.row_errors.len());
            if s.replaced_sequences > 0 {
                note!("{name}: replaced {} invalid UTF-8 sequences", s.replaced_sequences);
            }
            for (line, msg) in s.row_errors.iter().take(5) {
                note!("{name}:{line}: {msg}");
            }
            Ok(ingested.corpus)
        }
    }
}

pub fn synth(ctx: &Context) -> Outcome {
    let corpus = generate_corpus(&ctx.cfg.synth)?;
    let path = ctx.out.write(SYNTHETIC_CSV, |w| Ok(write_corpus(&corpus, w).map(drop)?))?;
    note!("wrote {} synthetic tweets to {}", corpus.len(), path.display());
    Ok(())
}

pub fn ingest(ctx: &Context) -> Outcome {
    let corpus = source_corpus(&ctx.cfg)?;
    if corpus.is_empty() {
        return Err(Error::InvalidInput("the input holds no usable tweets".into()).into());
    }
    let path = ctx.out.write(art::CORPUS, |w| Ok(write_corpus(&corpus, w).map(drop)?))?;
    note!("wrote {} records to {}", corpus.len(), path.display());
    Ok(())
}

fn text_pipeline(cfg: &PipelineConfig) -> Outcome<TextPipeline> {
    let stopwords = match &cfg.stopwords {
        Some(p) => StopwordList::from_reader(open_file(p)?)?,
        None => StopwordList::bundled(),
    };
    Ok(TextPipeline::new(cfg.cleaning.clone(), stopwords, cfg.stemming))
}

fn lexicon(cfg: &PipelineConfig) -> Outcome<OpinionLexicon> {
    match (&cfg.positive, &cfg.negative) {
        (None, None) => Ok(OpinionLexicon::bundled()),
        (Some(p), Some(n)) => Ok(OpinionLexicon::from_readers(open_file(p)?, open_file(n)?)?),
        _ => Err(Failure::usage("set both `input.positive` and `input.negative`, or neither")),
    }
}

pub fn label(ctx: &Context) -> Outcome {
    let reader = ctx.out.open(art::CORPUS, "ingest")?;
    let mut corpus = ingest_csv(reader, art::CORPUS, &ColumnMap::default(), &IngestOptions::default())?.corpus;
    if let Some(country) = &ctx.cfg.country {
        corpus = filter_by_country(&corpus, country);
        note!("{} records tagged {country}", corpus.len());
    }
    let pipeline = text_pipeline(&ctx.cfg)?;
    let lex = lexicon(&ctx.cfg)?;
    if lex.conflicts() > 0 {
        note!("{} lexicon words are listed under both polarities and ignored", lex.conflicts());
    }
    let labeling = label_corpus(&corpus, &pipeline, &lex.for_pipeline(&pipeline), ctx.cfg.label_threshold)?;
    let path = ctx.out.write(art::LABELED, |w| Ok(persist_labeled(&labeling.docs, w).map(drop)?))?;
    note!("labeled {} positive, {} negative -> {}", labeling.positive, labeling.negative, path.display());
    Ok(())
}

fn load_labeled(ctx: &Context) -> Outcome<Vec<LabeledDocument>> {
    let docs = read_labeled(ctx.out.open(art::LABELED, "label")?)?;
    if docs.is_empty() {
        return Err(Error::InvalidInput(format!("{} holds no documents", art::LABELED)).into());
    }
    Ok(docs)
}

fn tokens(docs: &[LabeledDocument]) -> Vec<TokenSequence> {
    docs.iter().map(|d| d.tokens.clone()).collect()
}

fn labels(docs: &[LabeledDocument]) -> Vec<SentimentLabel> {
    docs.iter().map(|d| d.label).collect()
}

pub fn featurize_cmd(ctx: &Context) -> Outcome {
    let docs = load_labeled(ctx)?;
    let spec = SplitSpec::new(ctx.cfg.test_fraction, ctx.cfg.split_seed(), ctx.cfg.stratified_split)?;
    let split = train_test_split(&labels(&docs), &spec)?;
    let mut set = vec!["train"; docs.len()];
    for &i in &split.test {
        set[i] = "test";
    }
    ctx.out.write(art::SPLIT, |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(["id", "set"])?;
        for (d, s) in docs.iter().zip(&set) {
            csv.write_record([d.id.as_str(), s])?;
        }
        csv.flush().map_err(|e| Failure::io(art::SPLIT, e))
    })?;
    let train: Vec<TokenSequence> = split.train.iter().map(|&i| docs[i].tokens.clone()).collect();
    let vocab = build_vocabulary(&train, &ctx.cfg.features.ngram)?;
    let model: TfidfModel<f64> = fit_idf(vocab, ctx.cfg.features.idf_mode);
    let path = ctx.out.write(art::FEATURES, |w| Ok(model.write_to(w)?))?;
    note!("{} train / {} test documents, {} features -> {}", split.train.len(), split.test.len(), model.n_features(), path.display());
    Ok(())
}

/// Labeled documents divided by the persisted split.
fn split_docs(ctx: &Context) -> Outcome<(Vec<LabeledDocument>, Vec<LabeledDocument>)> {
    let docs = load_labeled(ctx)?;
    let mut reader = csv::Reader::from_reader(ctx.out.open(art::SPLIT, "featurize")?);
    let mut set: HashMap<String, bool> = HashMap::new();
    for row in reader.records() {
        let row = row?;
        let is_test = match row.get(1) {
            Some("test") => true,
            Some("train") => false,
            _ => return Err(Error::Schema(format!("{}: rows must be `id,train|test`", art::SPLIT)).into()),
        };
        set.insert(row[0].to_owned(), is_test);
    }
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for d in docs {
        match set.get(&d.id) {
            Some(true) => test.push(d),
            Some(false) => train.push(d),
            None => {
                return Err(Error::InvalidInput(format!(
                    "document `{}` is not in {}; rerun `tweetsent featurize`",
                    d.id,
                    art::SPLIT
                ))
                .into())
            }
        }
    }
    Ok((train, test))
}

fn load_features(ctx: &Context) -> Outcome<TfidfModel<f64>> {
    Ok(TfidfModel::read_from(ctx.out.open(art::FEATURES, "featurize")?)?)
}

pub fn train(ctx: &Context) -> Outcome {
    let (train, _) = split_docs(ctx)?;
    let features = load_features(ctx)?;
    let (x_docs, y) = (tokens(&train), labels(&train));
    for &kind in &ctx.cfg.models {
        let x = featurize(kind, &features, &x_docs);
        let model = ctx.cfg.model_config(kind).fit(&x, &y)?;
        let path = ctx.out.write(&art::model_file(kind), |w| Ok(model.write_json(w)?))?;
        note!("trained {} on {} documents -> {}", kind.display_name(), train.len(), path.display());
    }
    Ok(())
}

fn write_report(ctx: &Context, prefix: &str, kind: ModelKind, report: &ClassificationReport<f64>) -> Outcome {
    ctx.out.write(&art::per_model(prefix, kind, "csv"), |w| Ok(report.write_csv(w)?))?;
    ctx.out.write_str(&art::per_model(prefix, kind, "txt"), &report.render_text())?;
    Ok(())
}

fn write_cv(ctx: &Context, kind: ModelKind, cv: &CvOutcome<f64>) -> Outcome {
    write_report(ctx, "cv_report", kind, &cv.report)?;
    ctx.out.write(&art::per_model("cv_folds", kind, "csv"), |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(["fold", "size", "accuracy", "auc"])?;
        for (i, f) in cv.folds.iter().enumerate() {
            let auc = f.evaluation.roc.as_ref().map_or(String::new(), |r| format!("{:.4}", r.auc));
            let acc = format!("{:.4}", f.evaluation.report.accuracy);
            csv.write_record([i.to_string(), f.test_indices.len().to_string(), acc, auc])?;
        }
        csv.flush().map_err(|e| Failure::io("cv folds", e))
    })?;
    for w in &cv.warnings {
        note!("{kind} cross-validation: {w}");
    }
    Ok(())
}

pub fn evaluate(ctx: &Context) -> Outcome {
    let (train, test) = split_docs(ctx)?;
    let features = load_features(ctx)?;
    let test_tokens = tokens(&test);
    let mut curves: Vec<(String, RocCurve<f64>)> = Vec::new();
    let mut rows = Vec::new();
    for &kind in &ctx.cfg.models {
        let model: ClassifierModel<f64> = ClassifierModel::read_json(ctx.out.open(&art::model_file(kind), "train")?)?;
        if model.kind() != kind || model.n_features() != features.n_features() {
            return Err(Error::InvalidInput(format!(
                "{} does not match the current features; rerun `tweetsent train`",
                art::model_file(kind)
            ))
            .into());
        }
        let scores = model.predict_scores(&featurize(kind, &features, &test_tokens))?;
        let eval = Evaluation::from_scores(labels(&test), scores, 0.5)?;
        write_report(ctx, "report", kind, &eval.report)?;
        let cm = eval.confusion;
        rows.push([kind.to_string(), format!("{:.4}", eval.report.accuracy), (cm.tp + cm.tn).to_string(), cm.total().to_string()]);
        note!("{}: accuracy {:.4} on {} test documents", kind.display_name(), eval.report.accuracy, cm.total());
        match eval.roc {
            Some(roc) => {
                ctx.out.write(&art::per_model("roc", kind, "csv"), |w| Ok(roc.write_csv(w)?))?;
                curves.push((kind.display_name().to_string(), roc));
            }
            None => note!("{kind}: the test set holds a single class; no ROC curve"),
        }
        if let Some(cv) = &ctx.cfg.cv {
            let all: Vec<LabeledDocument> = train.iter().chain(&test).cloned().collect();
            let outcome = cross_validate::<f64>(&all, &ctx.cfg.features, &ctx.cfg.model_config(kind), cv)?;
            note!("{}: {}-fold accuracy {:.4}", kind.display_name(), cv.k, outcome.report.accuracy);
            write_cv(ctx, kind, &outcome)?;
        }
    }
    ctx.out.write(art::ACCURACY, |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(["model", "accuracy", "correct", "total"])?;
        for r in &rows {
            csv.write_record(r)?;
        }
        csv.flush().map_err(|e| Failure::io(art::ACCURACY, e))
    })?;
    if !curves.is_empty() {
        let svg = render_roc(&curves, &SvgStyle::default())?;
        ctx.out.write_str(art::ROC_SVG, &svg)?;
    }
    Ok(())
}

pub fn compare_features(ctx: &Context) -> Outcome {
    let (train, test) = split_docs(ctx)?;
    let kind = ctx.cfg.models[0];
    let model = ctx.cfg.model_config(kind);
    let word = FeatureConfig { ngram: tweetsent_core::features::NgramConfig::words(ctx.cfg.compare.min_df()), ..ctx.cfg.features };
    let ngram = FeatureConfig { ngram: ctx.cfg.compare, ..ctx.cfg.features };
    let mut rows = Vec::new();
    for (name, features) in [("tfidf-word", word), ("tfidf-ngram", ngram)] {
        let (fitted, eval) = holdout_evaluate::<f64>(&train, &test, &features, &model)?;
        let r = &eval.report;
        note!("{name}: {} accuracy {:.4}", kind.display_name(), r.accuracy);
        rows.push([
            name.to_string(),
            kind.to_string(),
            format!("{}..{}", features.ngram.n_min(), features.ngram.n_max()),
            fitted.features.n_features().to_string(),
            format!("{:.4}", r.accuracy),
            format!("{:.4}", r.weighted_avg.precision),
            format!("{:.4}", r.weighted_avg.recall),
            format!("{:.4}", r.weighted_avg.f1),
        ]);
    }
    ctx.out.write(art::COMPARE, |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(["features", "model", "ngram_range", "n_features", "accuracy", "precision", "recall", "f1"])?;
        for r in &rows {
            csv.write_record(r)?;
        }
        csv.flush().map_err(|e| Failure::io(art::COMPARE, e))
    })?;
    Ok(())
}

pub fn report(ctx: &Context) -> Outcome {
    let docs = load_labeled(ctx)?;
    let style = SvgStyle::default();
    for (label, name) in [(SentimentLabel::Positive, "positive"), (SentimentLabel::Negative, "negative")] {
        let freq = word_frequency_report(&docs, label, ctx.cfg.top_k)?;
        ctx.out.write(&format!("freq_{name}.csv"), |w| Ok(freq.write_csv(w)?))?;
        if freq.entries.is_empty() {
            note!("no {name} documents; skipping its word cloud");
            continue;
        }
        let svg = render_word_cloud(&freq, &style)?;
        ctx.out.write_str(&format!("cloud_{name}.svg"), &svg)?;
        let top: Vec<String> = freq.entries.iter().take(5).map(|(t, c)| format!("{t} {c}")).collect();
        note!("top {name} tokens: {}", top.join(", "));
    }
    Ok(())
}

/// Ingest through evaluate in one go.
pub fn run_all(ctx: &Context) -> Outcome {
    ingest(ctx)?;
    label(ctx)?;
    featurize_cmd(ctx)?;
    train(ctx)?;
    evaluate(ctx)?;
    report(ctx)
}
