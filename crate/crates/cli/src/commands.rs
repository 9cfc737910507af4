use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use riex::classify::{oversample_balance, predict, train_classifier, TrainedExtractor};
use riex::corpus::{read_corpus, tokenize, CorpusStats, Document};
use riex::embedding::{nearest_neighbors, EmbeddingConfig, VectorStore};
use riex::eval::{
    drift_experiment, k_sweep, run_trials, runtime_benchmark, write_plot_data, write_trials_csv,
    ExperimentConfig, ExperimentTag, PlotPoint, TrialSummary,
};
use riex::pipeline::{
    extend_store, featurize_candidates, frozen_stats, labeled_dataset, DocumentIndex,
};
use riex::recognize::{
    load_registry, read_candidates, recognize_document, write_candidates, CandidateAnnotation,
};
use riex::synth::{generate_corpus, SynthSpec};
use serde::Serialize;

use crate::config::{need, PipelineConfig};
use crate::{
    Cli, Command, EmbedArgs, EmbeddingArgs, EvalMode, FeaturizeArgs, NnArgs, PredictArgs,
    RecognizeArgs, StageArgs, StatsArgs, SynthArgs, TrainArgs, TrialArgs,
};

pub fn dispatch(cli: Cli) -> Result<()> {
    let mut cfg = match &cli.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    cfg.settle();
    match cli.command {
        Command::Stats(a) => stats(&cfg, a),
        Command::Embed(a) => embed(&cfg, a),
        Command::Nn(a) => nn(&cfg, a),
        Command::Recognize(a) => recognize(&cfg, a),
        Command::Featurize(a) => featurize(&cfg, a),
        Command::Train(a) => train(cfg, a),
        Command::Predict(a) => predict_cmd(&cfg, a),
        Command::Eval(a) => eval(cfg, a.mode),
        Command::Synth(a) => synth(&cfg, cli.seed, a),
    }
}

fn load_docs(path: &Path) -> Result<Vec<Document>> {
    read_corpus(path).with_context(|| format!("reading corpus {}", path.display()))
}

fn load_candidates(path: &Path) -> Result<Vec<CandidateAnnotation>> {
    read_candidates(path).with_context(|| format!("reading candidates {}", path.display()))
}

fn load_stats(path: &Path) -> Result<CorpusStats> {
    CorpusStats::load(path).with_context(|| format!("reading statistics {}", path.display()))
}

fn load_store(path: &Path) -> Result<VectorStore> {
    VectorStore::load(path).with_context(|| format!("reading vector store {}", path.display()))
}

fn apply_embedding(base: EmbeddingConfig, a: &EmbeddingArgs) -> EmbeddingConfig {
    EmbeddingConfig {
        dim: a.dim.unwrap_or(base.dim),
        sparsity: a.sparsity.unwrap_or(base.sparsity),
        before: a.before.unwrap_or(base.before),
        after: a.after.unwrap_or(base.after),
        master_seed: base.master_seed,
    }
}

struct Stage {
    index: DocumentIndex,
    store: VectorStore,
}

fn load_stage(cfg: &PipelineConfig, a: &StageArgs) -> Result<Stage> {
    let docs = load_docs(&need(&a.corpus, &cfg.paths.corpus, "corpus")?)?;
    let stats = load_stats(&need(&a.stats, &cfg.paths.stats, "stats")?)?;
    let store = load_store(&need(&a.store, &cfg.paths.store, "store")?)?;
    let index = DocumentIndex::normalized(&docs, &stats);
    Ok(Stage { index, store })
}

fn write_jsonl<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let mut w =
        BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    for row in rows {
        serde_json::to_writer(&mut w, &row)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

fn stats(cfg: &PipelineConfig, a: StatsArgs) -> Result<()> {
    let docs = load_docs(&need(&a.corpus, &cfg.paths.corpus, "corpus")?)?;
    let out = need(&a.out, &cfg.paths.stats, "out")?;
    let stats = frozen_stats(&docs, a.theta.unwrap_or(cfg.theta))?;
    stats.save(&out)?;
    println!(
        "documents\t{}\nvocabulary\t{}",
        stats.doc_count(),
        stats.vocabulary_size()
    );
    Ok(())
}

fn embed(cfg: &PipelineConfig, a: EmbedArgs) -> Result<()> {
    let docs = load_docs(&need(&a.corpus, &cfg.paths.corpus, "corpus")?)?;
    let stats = load_stats(&need(&a.stats, &cfg.paths.stats, "stats")?)?;
    let out = need(&a.out, &cfg.paths.store, "out")?;
    let mut store = if a.append {
        let store = load_store(&out)?;
        if store.is_frozen() {
            bail!("store {} is frozen and cannot be extended", out.display());
        }
        let have = *store.config();
        if apply_embedding(have, &a.embedding) != have {
            bail!(
                "embedding flags conflict with the configuration stored in {}",
                out.display()
            );
        }
        store
    } else {
        VectorStore::new(apply_embedding(cfg.embedding, &a.embedding))?
    };
    extend_store(&mut store, &docs, &stats)?;
    if a.freeze {
        store.freeze();
    }
    store.save(&out)?;
    println!("units\t{}\nfrozen\t{}", store.len(), store.is_frozen());
    Ok(())
}

fn nn(cfg: &PipelineConfig, a: NnArgs) -> Result<()> {
    let store = load_store(&need(&a.store, &cfg.paths.store, "store")?)?;
    for (unit, score) in nearest_neighbors(&store, &a.unit, a.k)? {
        println!("{unit}\t{score:.6}");
    }
    Ok(())
}

fn recognize(cfg: &PipelineConfig, a: RecognizeArgs) -> Result<()> {
    let docs = load_docs(&need(&a.corpus, &cfg.paths.corpus, "corpus")?)?;
    let registry = need(&a.registry, &cfg.paths.registry, "registry")?;
    let recognizers = load_registry(&registry)
        .with_context(|| format!("loading recognizers from {}", registry.display()))?;
    let out = need(&a.out, &cfg.paths.candidates, "out")?;
    let candidates: Vec<CandidateAnnotation> = docs
        .iter()
        .flat_map(|d| recognize_document(&recognizers, &tokenize(d)))
        .collect();
    write_candidates(&out, &candidates)?;
    println!("candidates\t{}", candidates.len());
    Ok(())
}

#[derive(Serialize)]
struct FeatureRow<'a> {
    doc_id: &'a str,
    attribute: &'a str,
    i: usize,
    j: usize,
    label: riex::recognize::Label,
    features: Vec<f64>,
}

fn featurize(cfg: &PipelineConfig, a: FeaturizeArgs) -> Result<()> {
    let stage = load_stage(cfg, &a.stage)?;
    let candidates = load_candidates(&need(&a.candidates, &cfg.paths.candidates, "candidates")?)?;
    let out = need(&a.out, &cfg.paths.output, "out")?;
    let window = stage.store.config();
    let (before, after) = (
        a.before.unwrap_or(window.before),
        a.after.unwrap_or(window.after),
    );
    let features = featurize_candidates(&candidates, &stage.index, &stage.store, before, after)?;
    write_jsonl(
        &out,
        candidates
            .iter()
            .zip(features)
            .map(|(c, features)| FeatureRow {
                doc_id: &c.doc_id,
                attribute: &c.attribute,
                i: c.i,
                j: c.j,
                label: c.label,
                features,
            }),
    )?;
    println!("vectors\t{}", candidates.len());
    Ok(())
}

fn train(mut cfg: PipelineConfig, a: TrainArgs) -> Result<()> {
    let stage = load_stage(&cfg, &a.stage)?;
    let labels = load_candidates(&need(&a.labels, &cfg.paths.labels, "labels")?)?;
    let attribute = a
        .attribute
        .or(cfg.attribute.clone())
        .context("missing --attribute")?;
    let out = need(&a.out, &cfg.paths.model, "out")?;
    if let Some(trees) = a.trees {
        cfg.forest.n_trees = trees;
    }
    let window = *stage.store.config();
    let ds = labeled_dataset(
        &labels,
        &attribute,
        &stage.index,
        &stage.store,
        window.before,
        window.after,
    )?;
    if ds.is_empty() {
        bail!("no labeled candidates for attribute {attribute:?}");
    }
    let balanced = oversample_balance(&ds, cfg.seed)?;
    let model = train_classifier(&balanced, &cfg.forest, a.k.unwrap_or(cfg.k))?.with_context(
        attribute,
        window.before,
        window.after,
    );
    model.save(&out)?;
    println!(
        "samples\t{}\npositives\t{}\nnegatives\t{}\nselected\t{:?}",
        ds.len(),
        ds.positives(),
        ds.negatives(),
        model.selected
    );
    Ok(())
}

#[derive(Serialize)]
struct Prediction<'a> {
    #[serde(flatten)]
    candidate: &'a CandidateAnnotation,
    score: f64,
}

fn predict_cmd(cfg: &PipelineConfig, a: PredictArgs) -> Result<()> {
    let stage = load_stage(cfg, &a.stage)?;
    let model_path = need(&a.model, &cfg.paths.model, "model")?;
    let model = TrainedExtractor::load(&model_path)
        .with_context(|| format!("reading model {}", model_path.display()))?;
    let candidates = load_candidates(&need(&a.candidates, &cfg.paths.candidates, "candidates")?)?;
    let out = need(&a.out, &cfg.paths.output, "out")?;
    let mut labeled = Vec::new();
    for c in candidates.iter().filter(|c| c.attribute == model.attribute) {
        let seq = stage.index.get(&c.doc_id)?;
        let fv =
            riex::classify::featurize_annotation(c, seq, &stage.store, model.before, model.after)?;
        let (label, score) = predict(&model, &fv)?;
        labeled.push((CandidateAnnotation { label, ..c.clone() }, score));
    }
    write_jsonl(
        &out,
        labeled.iter().map(|(candidate, score)| Prediction {
            candidate,
            score: *score,
        }),
    )?;
    let correct = labeled
        .iter()
        .filter(|(c, _)| c.label == riex::recognize::Label::Correct)
        .count();
    println!("predictions\t{}\ncorrect\t{}", labeled.len(), correct);
    Ok(())
}

fn apply_trials(cfg: &mut PipelineConfig, t: &TrialArgs) {
    if let Some(n) = t.trials {
        cfg.trials.n_trials = n;
    }
    if let Some(f) = t.train_fraction {
        cfg.trials.train_fraction = f;
    }
    if let Some(k) = t.k {
        cfg.trials.k = k;
    }
}

fn corpus_name(path: &Path) -> String {
    path.file_stem()
        .map_or_else(String::new, |s| s.to_string_lossy().into_owned())
}

fn print_summaries(summaries: &[TrialSummary]) {
    for s in summaries {
        println!(
            "{}\t{}\t{}\tk={}\tP={:.4}\tR={:.4}\tF1={:.4}",
            s.tag.experiment,
            s.tag.corpus,
            s.tag.attribute,
            s.k,
            s.mean_precision,
            s.mean_recall,
            s.mean_f1
        );
    }
}

fn emit_results(
    t: &TrialArgs,
    cfg: &PipelineConfig,
    summaries: &[TrialSummary],
    plot: Vec<PlotPoint>,
) -> Result<()> {
    if let Some(out) = t.out.clone().or_else(|| cfg.paths.output.clone()) {
        write_trials_csv(create(&out)?, summaries)?;
    }
    if let Some(path) = &t.emit_plot_data {
        write_plot_data(create(path)?, &plot)?;
    }
    print_summaries(summaries);
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

fn eval(mut cfg: PipelineConfig, mode: EvalMode) -> Result<()> {
    match mode {
        EvalMode::Trials { stage, trial } => {
            apply_trials(&mut cfg, &trial);
            let (ds, tag) = eval_dataset(&cfg, &stage, &trial, "trials")?;
            let summary = run_trials(&ds, &tag, &cfg.trials, &cfg.forest)?;
            let plot = summary
                .rows
                .iter()
                .map(|r| PlotPoint {
                    series: tag.attribute.clone(),
                    x: r.trial as f64,
                    y: r.prf.f1,
                })
                .collect();
            emit_results(&trial, &cfg, &[summary], plot)
        }
        EvalMode::Ksweep { stage, trial, ks } => {
            apply_trials(&mut cfg, &trial);
            let (ds, tag) = eval_dataset(&cfg, &stage, &trial, "ksweep")?;
            let summaries = k_sweep(&ds, &tag, &ks, &cfg.trials, &cfg.forest)?;
            let plot = summaries
                .iter()
                .map(|s| PlotPoint {
                    series: tag.attribute.clone(),
                    x: s.k as f64,
                    y: s.mean_f1,
                })
                .collect();
            emit_results(&trial, &cfg, &summaries, plot)
        }
        EvalMode::Drift {
            corpora,
            trial,
            embedding,
        } => {
            apply_trials(&mut cfg, &trial);
            let labels = load_candidates(&need(&trial.labels, &cfg.paths.labels, "labels")?)?;
            let attribute = trial
                .attribute
                .clone()
                .or(cfg.attribute.clone())
                .context("missing --attribute")?;
            let named: Vec<(String, Vec<Document>)> = corpora
                .iter()
                .map(|p| Ok((corpus_name(p), load_docs(p)?)))
                .collect::<Result<_>>()?;
            let exp = ExperimentConfig {
                embedding: apply_embedding(cfg.embedding, &embedding),
                theta: cfg.theta,
                trials: cfg.trials,
                forest: cfg.forest,
            };
            let summaries = drift_experiment(&named, &named[0].1, &labels, &attribute, &exp)?;
            let plot = summaries
                .iter()
                .enumerate()
                .map(|(n, s)| PlotPoint {
                    series: attribute.clone(),
                    x: (n + 1) as f64,
                    y: s.mean_f1,
                })
                .collect();
            emit_results(&trial, &cfg, &summaries, plot)
        }
        EvalMode::Bench {
            sizes,
            repeats,
            out,
            emit_plot_data,
            embedding,
        } => {
            let report = runtime_benchmark(
                &sizes,
                apply_embedding(cfg.embedding, &embedding),
                repeats,
                cfg.seed,
            )?;
            if let Some(out) = out.or_else(|| cfg.paths.output.clone()) {
                let mut w = create(&out)?;
                writeln!(w, "tokens,seconds")?;
                for p in &report.points {
                    writeln!(w, "{},{}", p.tokens, p.seconds)?;
                }
                w.flush()?;
            }
            if let Some(path) = emit_plot_data {
                let points: Vec<PlotPoint> = report
                    .points
                    .iter()
                    .map(|p| PlotPoint {
                        series: "seconds".into(),
                        x: p.tokens as f64,
                        y: p.seconds,
                    })
                    .collect();
                write_plot_data(create(&path)?, &points)?;
            }
            for p in &report.points {
                println!("{}\t{:.3}s", p.tokens, p.seconds);
            }
            match report.fit {
                Some(fit) => println!(
                    "fit\tslope={:.3e}s/token\tintercept={:.4}s\tR2={:.4}",
                    fit.slope, fit.intercept, fit.r_squared
                ),
                None => println!("fit\tskipped"),
            }
            Ok(())
        }
    }
}

fn eval_dataset(
    cfg: &PipelineConfig,
    stage: &StageArgs,
    trial: &TrialArgs,
    experiment: &str,
) -> Result<(riex::classify::LabeledDataset, ExperimentTag)> {
    let corpus = need(&stage.corpus, &cfg.paths.corpus, "corpus")?;
    let loaded = load_stage(cfg, stage)?;
    let labels = load_candidates(&need(&trial.labels, &cfg.paths.labels, "labels")?)?;
    let attribute = trial
        .attribute
        .clone()
        .or(cfg.attribute.clone())
        .context("missing --attribute")?;
    let window = *loaded.store.config();
    let ds = labeled_dataset(
        &labels,
        &attribute,
        &loaded.index,
        &loaded.store,
        window.before,
        window.after,
    )?;
    Ok((
        ds,
        ExperimentTag::new(experiment, corpus_name(&corpus), attribute),
    ))
}

fn synth(cfg: &PipelineConfig, seed_flag: Option<u64>, a: SynthArgs) -> Result<()> {
    let mut spec = match &a.spec {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let mut spec: SynthSpec = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", path.display()))?;
            if let Some(seed) = seed_flag {
                spec.seed = seed;
            }
            spec
        }
        None => SynthSpec::high_margin(1000, cfg.seed),
    };
    if let Some(n) = a.docs {
        spec.n_docs = n;
    }
    let corpus = generate_corpus(&spec)?;
    corpus.write(&a.out)?;
    let mut text = serde_json::to_string_pretty(&spec)?;
    text.push('\n');
    std::fs::write(a.out.join("spec.json"), text)?;
    println!(
        "documents\t{}\ntokens\t{}\nlabels\t{}",
        corpus.documents.len(),
        corpus.token_count(),
        corpus.labels.len()
    );
    Ok(())
}
