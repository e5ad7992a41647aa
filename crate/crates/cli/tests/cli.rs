use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(rel)
}

fn proxikey(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_proxikey"))
        .args(args)
        .env_remove("PROXIKEY_CONFIG")
        .env_remove("PROXIKEY_MAX_DISTANCE")
        .env_remove("PROXIKEY_WINDOW_SIZE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn build_band(dir: &Path) -> Output {
    proxikey(&[
        "build",
        "--corpus",
        fixture("band/corpus").to_str().unwrap(),
        "--fl-counts",
        fixture("band/lexicon.tsv").to_str().unwrap(),
        "--max-distance",
        "7",
        "--index",
        dir.to_str().unwrap(),
    ])
}

fn build_reality(dir: &Path) -> Output {
    proxikey(&[
        "build",
        "--corpus",
        fixture("reality/corpus").to_str().unwrap(),
        "--fl-counts",
        fixture("reality/lexicon.tsv").to_str().unwrap(),
        "--dictionary",
        fixture("reality/dictionary.tsv").to_str().unwrap(),
        "--index",
        dir.to_str().unwrap(),
    ])
}

#[test]
fn build_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = build_reality(&dir.path().join("idx"));
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().any(|l| l == "docs=2"), "{text}");
    assert!(text.lines().any(|l| l == "tokens=18"));
    assert!(text.lines().any(|l| l.starts_with("trikeys=")));
    assert!(text.lines().any(|l| l.starts_with("bytes=")));
}

#[test]
fn rebuild_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(build_reality(&a).status.success());
    assert!(build_reality(&b).status.success());
    for name in [
        "meta",
        "lexicon.fl",
        "ordinary.idx",
        "trikey.cat",
        "trikey.idx",
    ] {
        assert_eq!(
            fs::read(a.join(name)).unwrap(),
            fs::read(b.join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn missing_corpus_dir_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = proxikey(&[
        "build",
        "--corpus",
        dir.path().join("nope").to_str().unwrap(),
        "--index",
        dir.path().join("idx").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope"));
}

#[test]
fn traced_query() {
    let dir = tempfile::tempdir().unwrap();
    let idx = dir.path().join("idx");
    assert!(build_band(&idx).status.success());
    let out = proxikey(&[
        "query",
        "--index",
        idx.to_str().unwrap(),
        "--window-size",
        "14",
        "--seed-start",
        "4",
        "--trace",
        "Who I need you",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "Shift Start=4");
    assert_eq!(lines[1], "Read posting (19, 20, 15) key (i, need, who)");
    assert!(lines.contains(&"Buffer switch, Start=18"));
    assert_eq!(lines.iter().filter(|l| l.starts_with("Result")).count(), 1);
    assert!(lines.contains(&"Result (from 15, to 21)"));
    assert!(lines.contains(&"doc=0 score=0.020408 fragments=[(15,21)]"));
    assert!(lines.last().unwrap().starts_with("postings_read="));
}

#[test]
fn baseline_reports_same_fragments_with_more_reads() {
    let dir = tempfile::tempdir().unwrap();
    let idx = dir.path().join("idx");
    assert!(build_band(&idx).status.success());
    let run = |extra: &[&str]| {
        let mut args = vec![
            "query",
            "--index",
            idx.to_str().unwrap(),
            "--window-size",
            "14",
        ];
        args.extend_from_slice(extra);
        args.push("Who I need you");
        stdout(&proxikey(&args))
    };
    let split = |s: String| {
        let (results, reads): (Vec<String>, Vec<String>) = s
            .lines()
            .map(str::to_string)
            .partition(|l| l.starts_with("doc="));
        let n: u64 = reads[0]
            .trim_start_matches("postings_read=")
            .parse()
            .unwrap();
        (results, n)
    };
    let (a, na) = split(run(&[]));
    let (b, nb) = split(run(&["--baseline"]));
    assert_eq!(a, b);
    assert!(nb > na, "{nb} <= {na}");
}

#[test]
fn unsupported_query_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let idx = dir.path().join("idx");
    assert!(build_reality(&idx).status.success());
    let out = proxikey(&["query", "--index", idx.to_str().unwrap(), "who walrus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not stop-only"));
    let out = proxikey(&["query", "--index", idx.to_str().unwrap(), "who"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn no_matches_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let idx = dir.path().join("idx");
    assert!(build_reality(&idx).status.success());
    let out = proxikey(&[
        "query",
        "--index",
        idx.to_str().unwrap(),
        "by the by the by",
    ]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out).lines().collect::<Vec<_>>(),
        vec!["postings_read=0"]
    );
}

#[test]
fn max_results_limits_lines() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    fs::create_dir(&corpus).unwrap();
    for i in 0..5 {
        fs::write(corpus.join(format!("{i}.txt")), "one two one two").unwrap();
    }
    let idx = dir.path().join("idx");
    let out = proxikey(&[
        "build",
        "--corpus",
        corpus.to_str().unwrap(),
        "--index",
        idx.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = proxikey(&[
        "query",
        "--index",
        idx.to_str().unwrap(),
        "--max-results",
        "2",
        "one two",
    ]);
    let docs = stdout(&out)
        .lines()
        .filter(|l| l.starts_with("doc="))
        .count();
    assert_eq!(docs, 2);
}

#[test]
fn verify_pass_and_fail() {
    let dir = tempfile::tempdir().unwrap();
    let idx = dir.path().join("idx");
    assert!(build_reality(&idx).status.success());
    let out = proxikey(&["verify", "--index", idx.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("verify: pass"));

    let path = idx.join("trikey.idx");
    let mut bytes = fs::read(&path).unwrap();
    let mid = bytes.len() / 2;
    bytes[mid] ^= 1;
    fs::write(&path, bytes).unwrap();
    let out = proxikey(&["verify", "--index", idx.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));

    let empty = dir.path().join("empty");
    fs::create_dir(&empty).unwrap();
    let out = proxikey(&["verify", "--index", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn oracle_check_modes() {
    let dir = tempfile::tempdir().unwrap();
    let idx = dir.path().join("idx");
    assert!(build_reality(&idx).status.success());
    let out = proxikey(&[
        "oracle-check",
        "--index",
        idx.to_str().unwrap(),
        "--dictionary",
        fixture("reality/dictionary.tsv").to_str().unwrap(),
        "who are you who",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("cases=2 "));
    let out = proxikey(&["oracle-check", "--random", "40", "--seed", "3"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("cases=40 "));
    assert!(stdout(&out).contains("failed=0"));
}

#[test]
fn config_layering() {
    let dir = tempfile::tempdir().unwrap();
    let idx = dir.path().join("idx");
    assert!(build_band(&idx).status.success());
    let conf = dir.path().join("proxikey.conf");
    fs::write(
        &conf,
        format!("index = {}\nwindow_size = 20\n", idx.display()),
    )
    .unwrap();
    let out = proxikey(&[
        "--config",
        conf.to_str().unwrap(),
        "query",
        "Who I need you",
    ]);
    assert!(out.status.success());
    // Window 8 is below 2M for the index built with M=7.
    let out = Command::new(env!("CARGO_BIN_EXE_proxikey"))
        .args([
            "--config",
            conf.to_str().unwrap(),
            "query",
            "Who I need you",
        ])
        .env("PROXIKEY_WINDOW_SIZE", "8")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = Command::new(env!("CARGO_BIN_EXE_proxikey"))
        .args([
            "--config",
            conf.to_str().unwrap(),
            "query",
            "--window-size",
            "14",
            "Who I need you",
        ])
        .env("PROXIKEY_WINDOW_SIZE", "8")
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn bench_is_reproducible() {
    let args = [
        "bench",
        "--docs",
        "300",
        "--vocab",
        "400",
        "--queries",
        "10",
        "--sw-count",
        "100",
        "--seed",
        "5",
    ];
    let strip = |o: Output| -> Vec<String> {
        stdout(&o)
            .lines()
            .map(|l| {
                // Drop the timing column.
                let cols: Vec<&str> = l.split_whitespace().collect();
                if cols.len() == 4 && (cols[0] == "trikey" || cols[0] == "baseline") {
                    format!("{} {} {}", cols[0], cols[1], cols[3])
                } else {
                    l.to_string()
                }
            })
            .collect()
    };
    let a = strip(proxikey(&args));
    let b = strip(proxikey(&args));
    assert_eq!(a, b);
    assert!(a.iter().any(|l| l.starts_with("reduction_factor=")));
    assert!(a.iter().any(|l| l == "mismatches=0"));

    let out = proxikey(&[
        "bench",
        "--docs",
        "50",
        "--vocab",
        "100",
        "--queries",
        "0",
        "--sw-count",
        "50",
    ]);
    assert!(out.status.success());
    assert!(!stdout(&out).contains("reduction_factor"));
}
