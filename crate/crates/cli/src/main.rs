use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use proxikey::bench::{run_bench, BenchConfig};
use proxikey::check::{check_plan, random_check, RandomCheckConfig};
use proxikey::config::Config;
use proxikey::corpus::{build_corpus, load_corpus_dir, load_fl_counts};
use proxikey::search::{
    expand_subqueries, search, select_keys, SearchParams, Strategy, TraceEvent,
};
use proxikey::verify::verify_dir;
use proxikey::{Dictionary, Error, Index};

const EXIT_INTERNAL: u8 = 1;
const EXIT_UNSUPPORTED: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "proxikey",
    version,
    about = "Proximity search over stop-word key indexes"
)]
struct Cli {
    /// `key = value` configuration file.
    #[arg(long, global = true, env = "PROXIKEY_CONFIG")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct Overrides {
    #[arg(long)]
    max_distance: Option<u32>,
    #[arg(long)]
    sw_count: Option<u32>,
    #[arg(long)]
    fu_count: Option<u32>,
    #[arg(long)]
    window_size: Option<u32>,
    /// Word-to-lemma dictionary: `word<TAB>lemma[,lemma...]` per line.
    #[arg(long)]
    dictionary: Option<PathBuf>,
    /// Index directory.
    #[arg(long)]
    index: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build an index from a directory of `.txt` documents.
    Build {
        /// Corpus directory; files are numbered in file-name order.
        #[arg(long)]
        corpus: PathBuf,
        /// `lemma<TAB>count` lines replacing corpus counts in the lexicon.
        #[arg(long)]
        fl_counts: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run a stop-word query.
    Query {
        query: String,
        /// Print evaluation events before the results.
        #[arg(long)]
        trace: bool,
        /// Evaluate from the ordinary positional lists.
        #[arg(long)]
        baseline: bool,
        #[arg(long)]
        max_results: Option<usize>,
        /// Lower the first buffer origin of every evaluation window.
        #[arg(long)]
        seed_start: Option<u32>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Check index invariants.
    Verify {
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Compare the engine with the brute-force oracle and the baseline.
    OracleCheck {
        /// Query to check against the index.
        query: Option<String>,
        /// Number of random cases (corpora x 20 subqueries) instead of a query.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Synthetic Zipf benchmark of both evaluation strategies.
    Bench {
        #[arg(long, default_value_t = 10_000)]
        docs: usize,
        #[arg(long, default_value_t = 5_000)]
        vocab: u32,
        #[arg(long, default_value_t = 1.0)]
        zipf: f64,
        #[arg(long, default_value_t = 100)]
        queries: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        overrides: Overrides,
    },
}

fn resolve(config_file: Option<&Path>, o: &Overrides) -> anyhow::Result<Config> {
    let mut cfg = Config::default();
    if let Some(path) = config_file {
        cfg.apply_file(path)?;
    }
    cfg.apply_env(std::env::vars())?;
    if let Some(v) = o.max_distance {
        cfg.max_distance = v;
    }
    if let Some(v) = o.sw_count {
        cfg.sw_count = v;
    }
    if let Some(v) = o.fu_count {
        cfg.fu_count = v;
    }
    if let Some(v) = o.window_size {
        cfg.window_size = v;
    }
    if let Some(v) = &o.dictionary {
        cfg.dictionary = Some(v.clone());
    }
    if let Some(v) = &o.index {
        cfg.index = Some(v.clone());
    }
    Ok(cfg)
}

fn dictionary(cfg: &Config) -> anyhow::Result<Dictionary> {
    match &cfg.dictionary {
        Some(path) => Ok(Dictionary::load(path)?),
        None => Ok(Dictionary::new()),
    }
}

fn index_dir(cfg: &Config) -> anyhow::Result<&Path> {
    cfg.index
        .as_deref()
        .context("no index directory (use --index or the `index` config key)")
}

fn run(cli: Cli, out: &mut impl Write) -> anyhow::Result<u8> {
    let config_file = cli.config.as_deref();
    match cli.command {
        Command::Build {
            corpus,
            fl_counts,
            overrides,
        } => {
            let cfg = resolve(config_file, &overrides)?;
            cfg.validate()?;
            let dir = index_dir(&cfg)?;
            let dict = dictionary(&cfg)?;
            let docs = load_corpus_dir(&corpus)?;
            let counts = match &fl_counts {
                Some(path) => load_fl_counts(path)?,
                None => Default::default(),
            };
            let index = build_corpus(&docs, &dict, &cfg.lexicon(), &counts)?;
            let bytes = index.write(dir)?;
            writeln!(out, "docs={}", index.doc_count())?;
            writeln!(out, "tokens={}", index.meta.total_tokens())?;
            writeln!(out, "lemmas={}", index.lexicon.len())?;
            writeln!(out, "trikeys={}", index.catalog().len())?;
            writeln!(out, "bytes={bytes}")?;
            Ok(0)
        }
        Command::Query {
            query,
            trace,
            baseline,
            max_results,
            seed_start,
            overrides,
        } => {
            let cfg = resolve(config_file, &overrides)?;
            let index = Index::open(index_dir(&cfg)?)?;
            let dict = dictionary(&cfg)?;
            let params = SearchParams {
                window_size: cfg.window_size,
                seed_start,
            };
            let strategy = if baseline {
                Strategy::Baseline
            } else {
                Strategy::TriKey
            };
            let mut events: Vec<TraceEvent> = Vec::new();
            let result = if trace {
                search(&query, &index, &dict, &params, strategy, &mut events)?
            } else {
                search(&query, &index, &dict, &params, strategy, &mut ())?
            };
            for e in &events {
                writeln!(out, "{}", e.render(&index.lexicon))?;
            }
            let limit = max_results.unwrap_or(usize::MAX);
            for r in result.results.iter().take(limit) {
                let frags: Vec<String> = r
                    .fragments
                    .iter()
                    .map(|f| format!("({},{})", f.start, f.end))
                    .collect();
                writeln!(
                    out,
                    "doc={} score={:.6} fragments=[{}]",
                    r.doc,
                    r.score,
                    frags.join(",")
                )?;
            }
            writeln!(out, "postings_read={}", result.postings_read)?;
            Ok(0)
        }
        Command::Verify { overrides } => {
            let cfg = resolve(config_file, &overrides)?;
            let report = verify_dir(index_dir(&cfg)?);
            writeln!(
                out,
                "keys={} postings={} oracle={}",
                report.keys_checked,
                report.postings_checked,
                if report.oracle_checked {
                    "checked"
                } else {
                    "skipped"
                }
            )?;
            for v in &report.violations {
                writeln!(out, "violation: {v}")?;
            }
            if report.passed() {
                writeln!(out, "verify: pass")?;
                Ok(0)
            } else {
                writeln!(out, "verify: FAIL")?;
                Ok(EXIT_VERIFY)
            }
        }
        Command::OracleCheck {
            query,
            random,
            seed,
            overrides,
        } => {
            let cases = match (query, random) {
                (Some(query), None) => {
                    let cfg = resolve(config_file, &overrides)?;
                    let index = Index::open(index_dir(&cfg)?)?;
                    let dict = dictionary(&cfg)?;
                    let docs = index.reconstruct_documents()?;
                    let subqueries = expand_subqueries(
                        &query,
                        &dict,
                        &index.lexicon,
                        &index.meta.lexicon_config(),
                    )?;
                    let mut cases = Vec::new();
                    for sq in subqueries {
                        let plan = select_keys(&sq)?;
                        let label: Vec<&str> =
                            sq.lemmas.iter().map(|&l| index.lexicon.lemma(l)).collect();
                        cases.push(check_plan(&index, &docs, &plan, label.join(" "))?);
                    }
                    cases
                }
                (None, Some(n)) => {
                    let rc = RandomCheckConfig {
                        corpora: n.div_ceil(20),
                        queries_per_corpus: n.min(20),
                        seed,
                        ..RandomCheckConfig::default()
                    };
                    random_check(&rc)?
                }
                _ => bail!("give either a query or --random N"),
            };
            let mut failed = 0;
            for c in &cases {
                let ok = c.matches_oracle && c.window_invariant && c.matches_baseline;
                if !ok {
                    failed += 1;
                    writeln!(
                        out,
                        "mismatch {}: oracle={} windows={} baseline={}",
                        c.label, c.matches_oracle, c.window_invariant, c.matches_baseline
                    )?;
                }
            }
            let fragments: usize = cases.iter().map(|c| c.oracle_fragments).sum();
            writeln!(
                out,
                "cases={} fragments={} failed={failed}",
                cases.len(),
                fragments
            )?;
            Ok(if failed == 0 { 0 } else { EXIT_VERIFY })
        }
        Command::Bench {
            docs,
            vocab,
            zipf,
            queries,
            seed,
            overrides,
        } => {
            let cfg = resolve(config_file, &overrides)?;
            cfg.validate()?;
            let bench = BenchConfig {
                docs,
                vocab,
                zipf_exponent: zipf,
                queries,
                seed,
                lexicon: cfg.lexicon(),
                window_size: cfg.window_size,
                ..BenchConfig::default()
            };
            let report = run_bench(&bench)?;
            write!(out, "{}", report.render())?;
            Ok(0)
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(
            Error::NotStopOnly { .. }
            | Error::SingleLemmaQuery
            | Error::QueryTooLong { .. }
            | Error::EmptyQuery,
        ) => EXIT_UNSUPPORTED,
        _ => EXIT_INTERNAL,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let code = match run(cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    };
    let _ = out.flush();
    ExitCode::from(code)
}
