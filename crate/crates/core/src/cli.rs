//! The `quantlab` command line. Each subcommand resolves the run config,
//! logs it to stderr, delegates to a library module and writes its artifact
//! to `--out` or stdout.

use std::error::Error;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, BufReader};
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::borel::{classify, membership_at_stage, stage, BorelFamily, Concept, ConceptRegistry, FamilySpec};
use crate::config::{parse_lengths, parse_range, RunConfig, CONFIG_ENV};
use crate::lang::{enumerate_words, parse_model_string, Alphabet, Sentence, TokenString, Vocabulary, Word};
use crate::learnlab::{
    compactness_check, dilution_experiment, effective_learning_test, pair_report, prefix_distinguishing_family,
    sample_first_negative, standard_family, universal_family, vc_dimension_bruteforce, witness_search_univ,
    word_order_experiment, HypothesisDescriptor, HypothesisKind, HypothesisSpec, LearningOutcome,
};
use crate::prob::{check_nondegenerate, ConditionalModel, ExactProb, Fallback};
use crate::probe::{
    from_ndjson, generate_dataset, render_report, run_adapter, score, serve_stdio, serve_tcp, to_ndjson,
    AdapterConfig, DatasetSpec, Endpoint, ProbeCase, StubKind,
};
use crate::semantics::{continuation_set, evaluate, satisfies, semantic_consequence, EntailmentOptions, Strictness, TruthVerdict};

type CliResult<T> = Result<T, Box<dyn Error>>;

#[derive(Debug, Parser)]
#[command(name = "quantlab", version, about = "Universal quantification over string-encoded models")]
pub struct Cli {
    /// TOML run config; flags override its values.
    #[arg(long, global = true, env = CONFIG_ENV)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Upper bound on enumerated strings or subsets.
    #[arg(long, global = true)]
    pub cap: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a probe dataset as NDJSON.
    Gen(GenArgs),
    /// Answer a question about a model string.
    Check(CheckArgs),
    /// Bounded entailment between quantified sentences.
    Entail(EntailArgs),
    /// Stages and hierarchy level of a sentence or family.
    Borel(BorelArgs),
    /// Learnability experiments.
    Learn(LearnArgs),
    /// Score an endpoint on a dataset, or serve a built-in stub.
    Probe(ProbeArgs),
    /// Render a JSON probe report as a table and TSV.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Object counts, e.g. `2..10`.
    #[arg(long)]
    pub sizes: Option<String>,
    /// `paper_counts` or `full_positions`.
    #[arg(long)]
    pub scheme: Option<String>,
    #[arg(long)]
    pub underspecified: bool,
    /// Colour the questions ask about.
    #[arg(long, default_value = "blue")]
    pub target: String,
    #[arg(long)]
    pub vocab: Option<String>,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Model string, formal or natural.
    pub context: String,
    #[arg(long)]
    pub question: String,
    #[arg(long)]
    pub vocab: Option<String>,
    /// Fail when an object's status for the predicate is open.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct EntailArgs {
    #[arg(long = "premise")]
    pub premises: Vec<String>,
    #[arg(long)]
    pub goal: String,
    /// Largest model size checked.
    #[arg(long, default_value_t = 4)]
    pub up_to: usize,
    #[arg(long)]
    pub include_empty: bool,
    /// Also list the goal's continuation set at this length.
    #[arg(long)]
    pub list: Option<usize>,
    #[arg(long)]
    pub vocab: Option<String>,
}

#[derive(Debug, Args)]
pub struct BorelArgs {
    #[arg(long, conflicts_with = "family")]
    pub sentence: Option<String>,
    /// TOML family description.
    #[arg(long)]
    pub family: Option<PathBuf>,
    /// Print stages 0 through this one.
    #[arg(long, default_value_t = 3)]
    pub stages: usize,
    /// Prefixes to locate, formal syntax or dotted letter indices.
    #[arg(long = "prefix")]
    pub prefixes: Vec<String>,
    #[arg(long)]
    pub vocab: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    /// `witness` for the universal target, else `effective`.
    Auto,
    Effective,
    Witness,
    Dilution,
    Compactness,
    Vc,
    WordOrder,
    Nondegenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyChoice {
    /// Universal, existential, first_k, count_at_least and window clopens.
    Standard,
    /// Position sets agreeing with the universal up to the training length.
    Prefix,
    /// Nested first_k family.
    FirstK,
}

#[derive(Debug, Args)]
pub struct LearnArgs {
    #[arg(long, value_enum, default_value_t = Experiment::Auto)]
    pub experiment: Experiment,
    /// `universal`, `first_k:K`, `clopen:P;Q`, ... (`@pred` selects a predicate).
    #[arg(long)]
    pub target: Option<String>,
    /// `uniform`, `coin:P` or `table:PATH`.
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub alpha: Option<ExactProb>,
    #[arg(long)]
    pub train_lengths: Option<String>,
    #[arg(long)]
    pub test_length: Option<usize>,
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long, value_enum, default_value_t = FamilyChoice::Standard)]
    pub family: FamilyChoice,
    /// Dilution: base length.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Dilution: extension length.
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub sample_length: Option<usize>,
    /// VC: the universe is every string of this length.
    #[arg(long, default_value_t = 4)]
    pub universe_length: usize,
    #[arg(long)]
    pub vocab: Option<String>,
    /// Write the full result as JSON here; a summary still goes to stdout.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    /// `builtin:KIND`, `tcp://HOST:PORT` or `cmd:PROGRAM ARGS`.
    #[arg(long)]
    pub endpoint: Option<String>,
    /// NDJSON dataset; generated from the config when absent.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    #[arg(long)]
    pub sizes: Option<String>,
    #[arg(long)]
    pub scheme: Option<String>,
    #[arg(long)]
    pub underspecified: bool,
    #[arg(long)]
    pub timeout_ms: Option<u64>,
    #[arg(long)]
    pub retries: Option<u32>,
    #[arg(long)]
    pub concurrency: Option<usize>,
    /// Raw responses as NDJSON.
    #[arg(long)]
    pub responses: Option<PathBuf>,
    #[arg(long)]
    pub vocab: Option<String>,
    /// Serve a built-in stub instead of probing.
    #[arg(long)]
    pub serve_stub: Option<StubKind>,
    /// With `--serve-stub`: listen on this address instead of stdio.
    #[arg(long, requires = "serve_stub")]
    pub listen: Option<String>,
    #[arg(long, requires = "listen")]
    pub max_connections: Option<usize>,
    /// JSON report; stdout when absent.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// JSON report from `probe`.
    pub input: PathBuf,
    #[arg(long)]
    pub tsv: Option<PathBuf>,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

/// Parses `std::env::args`, runs, and maps errors to exit status 1.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

pub fn run(cli: Cli) -> CliResult<()> {
    let mut cfg = RunConfig::discover(cli.config.as_deref())?;
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(c) = cli.cap {
        cfg.cap = c;
    }
    match cli.command {
        Command::Gen(a) => gen(cfg, a),
        Command::Check(a) => check(cfg, a),
        Command::Entail(a) => entail(cfg, a),
        Command::Borel(a) => borel(cfg, a),
        Command::Learn(a) => learn(cfg, a),
        Command::Probe(a) => probe(cfg, a),
        Command::Report(a) => report(cfg, a),
    }
}

fn resolved(cfg: &RunConfig, command: &str) -> CliResult<()> {
    cfg.validate()?;
    eprintln!("# quantlab {command}: resolved config");
    for line in cfg.to_toml().lines() {
        eprintln!("#   {line}");
    }
    Ok(())
}

fn emit(cfg: &RunConfig, out: Option<&Path>, content: &str) -> CliResult<()> {
    match out {
        Some(p) => {
            let p = cfg.artifact_path(p);
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
            }
            fs::write(&p, content).map_err(|e| format!("{}: {e}", p.display()))?;
            eprintln!("wrote {}", p.display());
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable artifact") + "\n"
}

fn dataset_spec(cfg: &RunConfig, target: &str) -> CliResult<DatasetSpec> {
    Ok(DatasetSpec {
        sizes: parse_range(&cfg.probe.sizes)?,
        seed: cfg.seed,
        scheme: cfg.probe.scheme.parse()?,
        target: target.to_string(),
        underspecified: cfg.probe.underspecified,
    })
}

fn gen(mut cfg: RunConfig, a: GenArgs) -> CliResult<()> {
    if let Some(s) = a.sizes {
        cfg.probe.sizes = s;
    }
    if let Some(s) = a.scheme {
        cfg.probe.scheme = s;
    }
    cfg.probe.underspecified |= a.underspecified;
    if let Some(v) = a.vocab {
        cfg.vocabulary = v;
    }
    resolved(&cfg, "gen")?;
    let cases = generate_dataset(&dataset_spec(&cfg, &a.target)?, &cfg.vocabulary())?;
    let inconsistent = cases.iter().filter(|c| c.is_inconsistent()).count();
    eprintln!("{} cases: {} consistent-gold, {} inconsistent", cases.len(), cases.len() - inconsistent, inconsistent);
    emit(&cfg, a.out.as_deref(), &to_ndjson(&cases))
}

fn verdict_word(v: TruthVerdict) -> &'static str {
    match v {
        TruthVerdict::True => "yes",
        TruthVerdict::False => "no",
        TruthVerdict::Undetermined => "unknown",
    }
}

fn check(mut cfg: RunConfig, a: CheckArgs) -> CliResult<()> {
    if let Some(v) = a.vocab {
        cfg.vocabulary = v;
    }
    resolved(&cfg, "check")?;
    let vocab = cfg.vocabulary();
    let d = parse_model_string(&a.context, &vocab)?;
    let phi = Sentence::parse(&a.question, &vocab)?;
    let answer = if a.strict {
        if satisfies(&d, &phi, &vocab, Strictness::Strict)? {
            "yes"
        } else {
            "no"
        }
    } else {
        verdict_word(evaluate(&d, &phi, &vocab)?)
    };
    println!("{answer}");
    Ok(())
}

fn entail(mut cfg: RunConfig, a: EntailArgs) -> CliResult<()> {
    if let Some(v) = a.vocab {
        cfg.vocabulary = v;
    }
    resolved(&cfg, "entail")?;
    let vocab = cfg.vocabulary();
    let gamma = a
        .premises
        .iter()
        .map(|p| Sentence::parse(p, &vocab))
        .collect::<Result<Vec<_>, _>>()?;
    let goal = Sentence::parse(&a.goal, &vocab)?;
    let options = EntailmentOptions {
        include_empty: a.include_empty,
        cap: cfg.cap(),
    };
    let e = semantic_consequence(&gamma, &goal, a.up_to, &vocab, options)?;
    let mut out = format!("{e}\n");
    if let Some(n) = a.list {
        let set = continuation_set(&goal, n, &vocab, cfg.cap())?;
        let _ = writeln!(out, "continuation set at length {n}: {} members", set.len());
        out.push_str(&set.to_lines());
    }
    print!("{out}");
    Ok(())
}

/// Formal model string or dotted letter indices (`0.1.1`, `ε`).
fn parse_word(text: &str, alphabet: &Alphabet) -> CliResult<Word> {
    let t = text.trim();
    if t.is_empty() || t == "ε" {
        return Ok(Word::empty());
    }
    if t.chars().all(|c| c.is_ascii_digit() || c == '.') {
        let letters = t
            .split('.')
            .map(|p| p.parse::<u16>().map_err(|_| format!("bad letter index in `{t}`")))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(l) = letters.iter().find(|&&l| l as usize >= alphabet.size()) {
            return Err(format!("letter {l} outside an alphabet of {}", alphabet.size()).into());
        }
        return Ok(Word::new(letters));
    }
    let d = parse_model_string(t, alphabet.vocabulary())?;
    Ok(alphabet.diagram_to_word(&d)?)
}

fn borel(mut cfg: RunConfig, a: BorelArgs) -> CliResult<()> {
    if let Some(v) = a.vocab {
        cfg.experiment.vocabulary = v;
    }
    resolved(&cfg, "borel")?;
    let vocab = cfg.experiment_vocabulary();
    let alphabet = Alphabet::new(&vocab);
    let mut out = String::new();
    let family = match (&a.sentence, &a.family) {
        (_, Some(path)) => {
            let spec: FamilySpec = toml::from_str(&read(path)?).map_err(|e| format!("{}: {}", path.display(), e.message()))?;
            spec.build(&alphabet)?
        }
        (s, None) => {
            let text = s.as_deref().unwrap_or("Is everything blue?");
            let phi = Sentence::parse(text, &vocab)?;
            let level = classify(&Concept::Sentence(phi.clone()), &vocab, &ConceptRegistry::default())?;
            let _ = writeln!(out, "sentence: {}", phi.question());
            let _ = writeln!(out, "level: {level}");
            BorelFamily::for_sentence(&alphabet, &phi)
        }
    };
    let _ = writeln!(out, "family: {} ({:?})", family.name, family.kind);
    for n in 0..=a.stages {
        let s = stage(&family, n)?;
        let words: Vec<String> = s.base().prefixes().iter().map(|w| w.to_string()).collect();
        let _ = writeln!(out, "stage {n}: {} prefixes: {}", words.len(), words.join(" "));
    }
    for p in &a.prefixes {
        let w = parse_word(p, &alphabet)?;
        let _ = writeln!(out, "prefix {w}: {}", membership_at_stage(&family, &w)?);
    }
    print!("{out}");
    Ok(())
}

fn load_model(spec: &str, alphabet: &Alphabet) -> CliResult<ConditionalModel> {
    let s = spec.trim();
    if s == "uniform" {
        return Ok(ConditionalModel::uniform(alphabet));
    }
    if let Some(p) = s.strip_prefix("coin:") {
        return Ok(ConditionalModel::biased_coin(alphabet, p.parse()?)?);
    }
    if let Some(path) = s.strip_prefix("table:") {
        return Ok(ConditionalModel::load_tsv(&read(Path::new(path))?, alphabet, Fallback::Uniform)?);
    }
    Err(format!("unknown model `{s}` (uniform, coin:P, table:PATH)").into())
}

fn good_mask(target: &HypothesisDescriptor, alphabet: &Alphabet) -> Vec<bool> {
    if target.good.len() == alphabet.size() {
        target.good.clone()
    } else {
        alphabet.letters_with("blue", crate::lang::Polarity::Positive)
    }
}

fn learn(mut cfg: RunConfig, a: LearnArgs) -> CliResult<()> {
    let e = &mut cfg.experiment;
    if let Some(v) = a.vocab.clone() {
        e.vocabulary = v;
    }
    if let Some(v) = a.target.clone() {
        e.target = v;
    }
    if let Some(v) = a.model.clone() {
        e.model = v;
    }
    if let Some(v) = a.alpha.clone() {
        e.alpha = v;
    }
    if let Some(v) = a.train_lengths.clone() {
        e.train_lengths = v;
    }
    if let Some(v) = a.test_length {
        e.test_length = v;
    }
    if let Some(v) = a.horizon {
        e.horizon = v;
    }
    if let Some(v) = a.window {
        e.window = v;
    }
    if let Some(v) = a.samples {
        e.samples = v;
    }
    if let Some(v) = a.sample_length {
        e.sample_length = v;
    }
    if a.experiment == Experiment::WordOrder && a.vocab.is_none() && e.vocabulary == "logical" {
        e.vocabulary = "logical_plus".into();
    }
    resolved(&cfg, "learn")?;
    let e = &cfg.experiment;
    let vocab = cfg.experiment_vocabulary();
    let alphabet = Alphabet::new(&vocab);
    let model = load_model(&e.model, &alphabet)?;
    let train = parse_lengths(&e.train_lengths)?;
    let n = *train.last().expect("nonempty lengths");
    let target_spec: HypothesisSpec = if a.experiment == Experiment::WordOrder && a.target.is_none() {
        HypothesisSpec::Clopen {
            prefixes: vec!["¬blue(a1) A(a1)".into()],
        }
    } else {
        e.target.parse()?
    };
    let target = target_spec.build(&alphabet)?;
    let experiment = match a.experiment {
        Experiment::Auto if target.kind == HypothesisKind::Universal => Experiment::Witness,
        Experiment::Auto => Experiment::Effective,
        other => other,
    };
    let mut text = String::new();
    let artifact = match experiment {
        Experiment::Witness => {
            let r = witness_search_univ(&model, &target, &e.alpha, n, e.horizon)?;
            let _ = writeln!(text, "alpha {} established at n={}: {}", r.alpha, r.base_length, r.alpha_established);
            match &r.witness {
                Some(w) => {
                    let s = w.base.concat(&w.extension);
                    let _ = writeln!(
                        text,
                        "witness m={} string={} ({}) value={}",
                        w.m,
                        s,
                        alphabet.word_to_diagram(&s)?,
                        w.value
                    );
                }
                None => {
                    let _ = writeln!(text, "no witness up to horizon {}", r.horizon);
                }
            }
            json(&r)
        }
        Experiment::Effective => {
            let good = good_mask(&target, &alphabet);
            let family = match a.family {
                FamilyChoice::Standard => standard_family(&good, e.window, cfg.cap())?,
                FamilyChoice::Prefix => prefix_distinguishing_family(n, e.test_length, &good),
                FamilyChoice::FirstK => (0..=e.test_length).map(|k| HypothesisDescriptor::first_k(k, good.clone())).collect(),
            };
            let r = effective_learning_test(&alphabet, &target, &family, &model, &e.alpha, &train, e.test_length)?;
            let _ = writeln!(text, "target {} against {} hypotheses, alpha {}", r.target, r.family.len(), r.alpha);
            for s in &r.snapshots {
                let _ = writeln!(text, "after length {}: selected {} (risk gap {})", s.length, s.selected, s.risk_gap);
            }
            if let Some(i) = &r.interval {
                let _ = writeln!(text, "separating interval ({}, {})", i.lower, i.upper);
            }
            match &r.outcome {
                LearningOutcome::Learned => text.push_str("learned\n"),
                LearningOutcome::WitnessFound { string, length, value, side } => {
                    let _ = writeln!(text, "not learned: {side} score {value} at length {length} for {string}");
                }
            }
            json(&r)
        }
        Experiment::Dilution => {
            let r = dilution_experiment(&model, &good_mask(&target, &alphabet), a.n, a.m)?;
            let _ = writeln!(
                text,
                "n={} m={}: family {} -> {} (cardinality {}), mu_n {} -> {} expected {} (dilution {})",
                r.n,
                r.m,
                r.family_size_n,
                r.family_size_n_plus_m,
                r.cardinality_holds,
                r.mu_n,
                r.mu_n_plus_m,
                r.expected,
                r.dilution_holds
            );
            json(&r)
        }
        Experiment::Compactness => {
            let good = good_mask(&target, &alphabet);
            let samples = sample_first_negative(cfg.seed, e.samples, e.sample_length, &good);
            let r = compactness_check(&universal_family(&alphabet, "blue"), &samples)?;
            let _ = writeln!(text, "exclusion stage matches first bad position: {}/{}", r.matches, r.total);
            json(&r)
        }
        Experiment::Vc => {
            let good = good_mask(&target, &alphabet);
            let universe: Vec<Word> = enumerate_words(alphabet.size(), a.universe_length, cfg.cap())?.collect();
            let family: Vec<HypothesisDescriptor> = match a.family {
                FamilyChoice::Standard => standard_family(&good, e.window, cfg.cap())?,
                FamilyChoice::Prefix => prefix_distinguishing_family(n, e.test_length, &good),
                FamilyChoice::FirstK => (0..=a.universe_length).map(|k| HypothesisDescriptor::first_k(k, good.clone())).collect(),
            };
            let r = vc_dimension_bruteforce(&family, &universe, cfg.cap())?;
            let shattered: Vec<String> = r.shattered.iter().map(|w| w.to_string()).collect();
            let _ = writeln!(
                text,
                "VC dimension {} over {} strings of length {} ({} hypotheses); shattered: {}",
                r.vc_dimension,
                r.universe.len(),
                a.universe_length,
                r.family.len(),
                if shattered.is_empty() { "∅".to_string() } else { shattered.join(" ") }
            );
            json(&r)
        }
        Experiment::WordOrder => {
            let HypothesisKind::Clopen { set } = &target.kind else {
                return Err("word-order needs a clopen target".into());
            };
            let r = match a.target {
                None => pair_report(
                    &alphabet,
                    &model,
                    set,
                    &TokenString::new(["a1", "is", "not", "blue", "a1", "is", "A"]),
                    &[0, 1, 3, 4, 5, 2, 6],
                )?,
                Some(_) => word_order_experiment(&alphabet, &model, set)?,
            };
            let _ = writeln!(text, "first:  {} (in target: {})", r.first, r.first_in_target);
            let _ = writeln!(text, "second: {} (in target: {})", r.second, r.second_in_target);
            let _ = writeln!(text, "order-sensitive: {} vs {}", r.order_sensitive.0, r.order_sensitive.1);
            let _ = writeln!(text, "bag-of-words: {} vs {}", r.bag_of_words.0, r.bag_of_words.1);
            json(&r)
        }
        Experiment::Nondegenerate => {
            let grid = [ExactProb::ratio(1, 2), ExactProb::ratio(1, 4), ExactProb::ratio(1, 8)];
            let r = check_nondegenerate(&model, &target, n, &grid, e.horizon)?;
            let _ = writeln!(
                text,
                "{} pairs: monotone {}, strictly monotone {}",
                r.tested_pairs, r.monotone, r.strictly_monotone
            );
            for d in &r.per_delta {
                let show = |m: Option<usize>| m.map_or("none".to_string(), |m| m.to_string());
                let _ = writeln!(
                    text,
                    "delta {}: exact drop at m={}, at-least drop at m={}",
                    d.delta,
                    show(d.exact_drop_at),
                    show(d.at_least_drop_at)
                );
            }
            json(&r)
        }
        Experiment::Auto => unreachable!("resolved above"),
    };
    print!("{text}");
    if let Some(p) = a.out.as_deref() {
        emit(&cfg, Some(p), &artifact)?;
    }
    Ok(())
}

fn probe(mut cfg: RunConfig, a: ProbeArgs) -> CliResult<()> {
    let p = &mut cfg.probe;
    if let Some(v) = a.endpoint {
        p.endpoint = v;
    }
    if let Some(v) = a.sizes {
        p.sizes = v;
    }
    if let Some(v) = a.scheme {
        p.scheme = v;
    }
    p.underspecified |= a.underspecified;
    if let Some(v) = a.timeout_ms {
        p.timeout_ms = v;
    }
    if let Some(v) = a.retries {
        p.retries = v;
    }
    if let Some(v) = a.concurrency {
        p.concurrency = v;
    }
    if let Some(v) = a.vocab {
        cfg.vocabulary = v;
    }
    resolved(&cfg, "probe")?;
    let vocab: Vocabulary = cfg.vocabulary();
    if let Some(kind) = a.serve_stub {
        return match a.listen {
            Some(addr) => {
                let listener = TcpListener::bind(&addr).map_err(|e| format!("{addr}: {e}"))?;
                eprintln!("serving {kind} on {}", listener.local_addr()?);
                Ok(serve_tcp(kind, &vocab, listener, a.max_connections)?)
            }
            None => {
                let stdin = io::stdin();
                serve_stdio(kind, &vocab, BufReader::new(stdin.lock()), io::stdout().lock())?;
                Ok(())
            }
        };
    }
    let cases: Vec<ProbeCase> = match &a.dataset {
        Some(path) => from_ndjson(&read(path)?)?,
        None => generate_dataset(&dataset_spec(&cfg, "blue")?, &vocab)?,
    };
    let endpoint = Endpoint::parse(&cfg.probe.endpoint, &vocab)?;
    let adapter = AdapterConfig {
        timeout: Duration::from_millis(cfg.probe.timeout_ms),
        retries: cfg.probe.retries,
        concurrency: cfg.probe.concurrency,
    };
    let responses = run_adapter(&cases, &endpoint, &adapter)?;
    if let Some(path) = a.responses.as_deref() {
        emit(&cfg, Some(path), &to_ndjson(&responses))?;
    }
    let report = score(&cases, &responses)?;
    emit(&cfg, a.out.as_deref(), &report.to_json())
}

fn report(cfg: RunConfig, a: ReportArgs) -> CliResult<()> {
    resolved(&cfg, "report")?;
    let (table, tsv) = render_report(&read(&a.input)?)?;
    if let Some(p) = a.tsv.as_deref() {
        emit(&cfg, Some(p), &tsv)?;
    }
    emit(&cfg, a.out.as_deref(), &table)
}
