use std::fs;
use std::path::Path;

use cubic_percolation::runner::{
    load_run, report, run_experiment, write_record_file, ExperimentConfig, RunOptions, TrialRecord,
};
use cubic_percolation::stats::parse_probability;
use cubic_percolation::Error;

fn config(dir: &Path, name: &str, body: &str) -> ExperimentConfig {
    let text = format!("{body}\noutput = {}\n", dir.join(name).display());
    ExperimentConfig::parse(&text).unwrap()
}

const SMALL_LOWER: &str = "mode = lower\nkind = bond\nscale = 16\np = 0.05\ntrials = 50\n\
                           base_seed = 1000\nalpha = 0.5";

fn strip_runtime(records: &[TrialRecord]) -> Vec<TrialRecord> {
    records
        .iter()
        .map(|r| TrialRecord {
            runtime_ms: 0,
            ..r.clone()
        })
        .collect()
}

#[test]
fn repeated_runs_agree_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = config(dir.path(), "a.jsonl", SMALL_LOWER);
    let b = config(dir.path(), "b.jsonl", SMALL_LOWER);
    let ra = run_experiment(
        &a,
        &RunOptions {
            workers: Some(1),
            ..Default::default()
        },
    )
    .unwrap();
    let rb = run_experiment(
        &b,
        &RunOptions {
            workers: Some(3),
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(ra.records.len(), 50);
    assert_eq!(ra.successes, rb.successes);
    assert_eq!(strip_runtime(&ra.records), strip_runtime(&rb.records));
    assert_eq!(ra.records.first().unwrap().seed, 1000);
    assert_eq!(ra.records.last().unwrap().seed, 1049);
    let loaded = load_run(&a.output).unwrap();
    assert_eq!(strip_runtime(&loaded.records), strip_runtime(&ra.records));
}

#[test]
fn fully_open_blocks_always_hold() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(
        dir.path(),
        "r.jsonl",
        &SMALL_LOWER.replace("p = 0.05", "p = 1"),
    );
    let out = run_experiment(&cfg, &RunOptions::default()).unwrap();
    assert_eq!(out.successes, 50);
    assert!(out.records.iter().all(|r| r.witness.is_some()));
}

#[test]
fn interrupted_run_resumes_identically() {
    let dir = tempfile::tempdir().unwrap();
    let body = SMALL_LOWER.replace("p = 0.05", "p = 0.3");
    let full = config(dir.path(), "full.jsonl", &body);
    let reference = run_experiment(&full, &RunOptions::default()).unwrap();

    // Keep the header and 20 records, then a torn line.
    let partial = config(dir.path(), "partial.jsonl", &body);
    let text = fs::read_to_string(&full.output).unwrap();
    let mut kept: String = text.lines().take(21).map(|l| format!("{l}\n")).collect();
    kept.push_str("{\"seed\":10");
    fs::write(&partial.output, kept).unwrap();
    assert!(matches!(
        load_run(&partial.output),
        Err(Error::IncompleteRun(_))
    ));

    let resumed = run_experiment(&partial, &RunOptions::default()).unwrap();
    assert_eq!(
        strip_runtime(&resumed.records),
        strip_runtime(&reference.records)
    );
    let reloaded = load_run(&partial.output).unwrap();
    assert_eq!(reloaded.successes, reference.successes);

    // A finished file is returned as is.
    let again = run_experiment(&partial, &RunOptions::default()).unwrap();
    assert_eq!(again.records, reloaded.records);
}

#[test]
fn output_for_other_experiment_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let a = config(dir.path(), "r.jsonl", SMALL_LOWER);
    run_experiment(&a, &RunOptions::default()).unwrap();
    let b = config(
        dir.path(),
        "r.jsonl",
        &SMALL_LOWER.replace("base_seed = 1000", "base_seed = 5"),
    );
    assert!(matches!(
        run_experiment(&b, &RunOptions::default()),
        Err(Error::Config(_))
    ));
}

#[test]
fn tampering_is_detected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(
        dir.path(),
        "r.jsonl",
        &SMALL_LOWER.replace("p = 0.05", "p = 0.3"),
    );
    run_experiment(&cfg, &RunOptions::default()).unwrap();
    let text = fs::read_to_string(&cfg.output).unwrap();

    let flipped = if text.contains("\"event\":false") {
        text.replacen("\"event\":false", "\"event\":true", 1)
    } else {
        text.replacen("\"event\":true", "\"event\":false", 1)
    };
    fs::write(&cfg.output, &flipped).unwrap();
    assert!(matches!(load_run(&cfg.output), Err(Error::Tamper { .. })));

    let digest = cfg.digest();
    let forged = text.replacen(&format!("\"digest\":\"{digest}\""), "\"digest\":\"00\"", 1);
    fs::write(&cfg.output, &forged).unwrap();
    assert!(matches!(load_run(&cfg.output), Err(Error::Tamper { .. })));

    let dropped: String = text
        .lines()
        .enumerate()
        .filter(|(i, _)| *i != 3)
        .map(|(_, l)| format!("{l}\n"))
        .collect();
    fs::write(&cfg.output, dropped).unwrap();
    assert!(matches!(load_run(&cfg.output), Err(Error::Tamper { .. })));
}

#[test]
fn final_runs_cannot_share_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let ledger = dir.path().join("seeds.ledger");
    let opts = RunOptions {
        workers: None,
        final_ledger: Some(ledger.clone()),
    };
    let a = config(dir.path(), "a.jsonl", SMALL_LOWER);
    run_experiment(&a, &opts).unwrap();
    let overlapping = config(
        dir.path(),
        "b.jsonl",
        &SMALL_LOWER.replace("base_seed = 1000", "base_seed = 1040"),
    );
    assert!(matches!(
        run_experiment(&overlapping, &opts),
        Err(Error::SeedReuse { .. })
    ));
    assert!(!overlapping.output.exists());
    let fresh = config(
        dir.path(),
        "c.jsonl",
        &SMALL_LOWER.replace("base_seed = 1000", "base_seed = 1050"),
    );
    run_experiment(&fresh, &opts).unwrap();
    // Pilot runs outside the ledger are not restricted.
    run_experiment(&overlapping, &RunOptions::default()).unwrap();
}

fn synthetic(dir: &Path, name: &str, body: &str, base: u64, events: &[bool]) -> ExperimentConfig {
    let cfg = config(dir, name, body);
    let digest = cfg.digest();
    let records: Vec<TrialRecord> = events
        .iter()
        .enumerate()
        .map(|(i, &event)| TrialRecord {
            seed: base + i as u64,
            event,
            runtime_ms: 0,
            digest: digest.clone(),
            witness: None,
        })
        .collect();
    write_record_file(&cfg, &records).unwrap();
    cfg
}

fn events(n: usize, hits: &[usize], hit_value: bool) -> Vec<bool> {
    (0..n).map(|i| hits.contains(&i) == hit_value).collect()
}

#[test]
fn report_from_synthetic_tables() {
    let dir = tempfile::tempdir().unwrap();
    let alpha = parse_probability("0.999999").unwrap();
    let lower = synthetic(
        dir.path(),
        "bl.jsonl",
        "mode = lower\nkind = bond\nscale = 6500\np = 0.2485\ntrials = 800\nbase_seed = 12345\nalpha = 0.999999",
        12345,
        &events(800, &[17, 230, 411, 702], true),
    );
    let upper = synthetic(
        dir.path(),
        "bu.jsonl",
        "mode = upper\nkind = bond\nscale = 3000\np = 0.2490\ntrials = 400\nbase_seed = 123456\nalpha = 0.999999",
        123456,
        &[true; 400],
    );
    let r = report(&lower.output, &upper.output, &alpha).unwrap();
    assert_eq!(r.verdict.lower_bound, parse_probability("0.2485").unwrap());
    assert_eq!(r.verdict.upper_bound, parse_probability("0.2490").unwrap());
    assert!(r.verdict.fully_certified());
    assert_eq!(r.lower.bad_seeds(), vec![12362, 12575, 12756, 13047]);
    let text = r.render();
    assert!(text.contains("interval: [0.2485, 0.249]"));
    assert!(text.contains("confidence: 99.9999%"));
    assert!(text.contains("8639/10000"));
}

#[test]
fn report_with_too_many_lower_events_falls_back() {
    let dir = tempfile::tempdir().unwrap();
    let alpha = parse_probability("0.999999").unwrap();
    let lower = synthetic(
        dir.path(),
        "l.jsonl",
        "mode = lower\nkind = site\nscale = 64\np = 0.3110\ntrials = 800\nbase_seed = 1\nalpha = 0.999999",
        1,
        &events(800, &[1, 2, 3, 4, 5], true),
    );
    let upper = synthetic(
        dir.path(),
        "u.jsonl",
        "mode = upper\nkind = site\nscale = 32\np = 0.3118\ntrials = 400\nbase_seed = 2000\nalpha = 0.999999",
        2000,
        &events(400, &[7, 8, 9], false),
    );
    let r = report(&lower.output, &upper.output, &alpha).unwrap();
    assert_eq!(r.verdict.lower_bound, parse_probability("0").unwrap());
    assert_eq!(r.verdict.upper_bound, parse_probability("0.3118").unwrap());
    assert!(!r.verdict.fully_certified());
    assert!(r.render().contains("warning: lower side failed"));
    assert_eq!(r.upper.bad_seeds(), vec![2007, 2008, 2009]);

    // Swapped arguments are a contract error, not a verdict.
    assert!(matches!(
        report(&upper.output, &lower.output, &alpha),
        Err(Error::Contract(_))
    ));
}

#[test]
fn unfinished_file_is_not_reported() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "r.jsonl", SMALL_LOWER);
    run_experiment(&cfg, &RunOptions::default()).unwrap();
    let text = fs::read_to_string(&cfg.output).unwrap();
    let cut: String = text
        .lines()
        .filter(|l| !l.starts_with("#SUMMARY"))
        .map(|l| format!("{l}\n"))
        .collect();
    fs::write(&cfg.output, cut).unwrap();
    let alpha = parse_probability("0.5").unwrap();
    assert!(matches!(
        report(&cfg.output, &cfg.output, &alpha),
        Err(Error::IncompleteRun(_))
    ));
}
