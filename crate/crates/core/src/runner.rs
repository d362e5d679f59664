//! Seeded, resumable experiment runs and the final report.
//!
//! A record file looks like
//!
//! ```text
//! #CONFIG {"alpha":"0.999999","base_seed":"1000",...}
//! {"seed":1000,"event":false,"runtime_ms":3,"digest":"9f2c..."}
//! {"seed":1001,"event":true,"runtime_ms":4,"digest":"9f2c...","witness":"centre=(8,8,9) ..."}
//! ...
//! #SUMMARY {"trials":50,"successes":1,"digest":"9f2c..."}
//! ```
//!
//! Record lines carry `seed`, `event`, `runtime_ms`, `digest` and an optional
//! `witness`, in that order. Lines may appear in any order; the summary line
//! is written last, in a single write, once every seed has a record.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::mpsc;
use std::time::Instant;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::events::{lower_event, upper_event};
use crate::lattice::{sample_block, sample_rect, BlockGeometry, Kind, RectGeometry, GENERATOR_ID};
use crate::stats::{
    self, parse_probability, parse_rational, plan, render_decimal, ConfidencePlan, Direction,
    RunSummary, Verdict,
};
use crate::{Error, Result};

/// Environment variable holding the worker count for [`run_experiment`].
pub const WORKERS_ENV: &str = "CUBIC_PERCOLATION_WORKERS";

/// Base seeds of the published final runs, kept for reference only. New
/// final runs must pick fresh, non-overlapping ranges.
pub const REFERENCE_BASE_SEEDS: [u64; 4] = [12345, 123456, 1234567, 12345678];

const CONFIG_KEYS: [&str; 9] = [
    "mode",
    "kind",
    "scale",
    "p",
    "trials",
    "base_seed",
    "alpha",
    "output",
    "generator",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub mode: Direction,
    pub kind: Kind,
    /// Block side `L` in lower mode, rectangle side `s` in upper mode.
    pub scale: usize,
    pub p: BigRational,
    pub trials: u64,
    pub base_seed: u64,
    pub alpha: BigRational,
    pub output: PathBuf,
    pub generator: String,
}

impl ExperimentConfig {
    /// Parses `key = value` lines. `#` starts a comment; blank lines are
    /// skipped. Every key except `generator` is required, and unknown or
    /// repeated keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            let k = k.trim().to_string();
            if pairs.insert(k.clone(), v.trim().to_string()).is_some() {
                return Err(Error::Config(format!("line {}: key {k:?} repeated", n + 1)));
            }
        }
        Self::from_pairs(&pairs)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn from_pairs(pairs: &BTreeMap<String, String>) -> Result<Self> {
        if let Some(k) = pairs.keys().find(|k| !CONFIG_KEYS.contains(&k.as_str())) {
            return Err(Error::Config(format!(
                "unknown key {k:?} (known: {})",
                CONFIG_KEYS.join(", ")
            )));
        }
        let get = |k: &str| {
            pairs
                .get(k)
                .map(String::as_str)
                .ok_or_else(|| Error::Config(format!("missing key {k:?}")))
        };
        let int = |k: &str| -> Result<u64> {
            get(k)?
                .parse::<u64>()
                .map_err(|_| Error::Config(format!("{k} must be a non-negative integer")))
        };
        let cfg = ExperimentConfig {
            mode: get("mode")?.parse()?,
            kind: get("kind")?.parse()?,
            scale: int("scale")? as usize,
            p: parse_probability(get("p")?)?,
            trials: int("trials")?,
            base_seed: int("base_seed")?,
            alpha: parse_rational(get("alpha")?)?,
            output: PathBuf::from(get("output")?),
            generator: pairs
                .get("generator")
                .cloned()
                .unwrap_or_else(|| GENERATOR_ID.to_string()),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_pairs(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("mode".into(), self.mode.to_string());
        m.insert("kind".into(), self.kind.to_string());
        m.insert("scale".into(), self.scale.to_string());
        m.insert("p".into(), render_decimal(&self.p));
        m.insert("trials".into(), self.trials.to_string());
        m.insert("base_seed".into(), self.base_seed.to_string());
        m.insert("alpha".into(), render_decimal(&self.alpha));
        m.insert("output".into(), self.output.display().to_string());
        m.insert("generator".into(), self.generator.clone());
        m
    }

    /// `key = value` text that [`ExperimentConfig::parse`] reads back.
    pub fn render(&self) -> String {
        CONFIG_KEYS
            .iter()
            .map(|k| format!("{k} = {}\n", self.to_pairs()[*k]))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be positive".into()));
        }
        if self.base_seed.checked_add(self.trials - 1).is_none() {
            return Err(Error::Config("seed range overflows u64".into()));
        }
        if self.generator != GENERATOR_ID {
            return Err(Error::Config(format!(
                "generator {:?} is not the one this build provides ({GENERATOR_ID:?})",
                self.generator
            )));
        }
        self.geometry().map(|_| ())
    }

    pub fn seeds(&self) -> std::ops::RangeInclusive<u64> {
        self.base_seed..=self.base_seed + (self.trials - 1)
    }

    pub fn p_f64(&self) -> f64 {
        stats::to_f64(&self.p)
    }

    /// Stable hash of everything except the output path, hex encoded.
    pub fn digest(&self) -> String {
        let mut pairs = self.to_pairs();
        pairs.remove("output");
        let mut h = Sha256::new();
        for (k, v) in &pairs {
            h.update(k.as_bytes());
            h.update(b"=");
            h.update(v.as_bytes());
            h.update(b"\n");
        }
        hex::encode(&h.finalize()[..16])
    }

    pub fn plan(&self) -> Result<ConfidencePlan> {
        plan(
            self.mode,
            self.trials,
            &self.alpha,
            &self.mode.reference_constant().rational(),
        )
    }

    fn geometry(&self) -> Result<Geometry> {
        Ok(match self.mode {
            Direction::Lower => Geometry::Block(BlockGeometry::new(self.scale, self.kind)?),
            Direction::Upper => Geometry::Rect(RectGeometry::new(self.scale, self.kind)?),
        })
    }
}

#[derive(Clone, Copy, Debug)]
enum Geometry {
    Block(BlockGeometry),
    Rect(RectGeometry),
}

impl Geometry {
    fn trial(&self, p: f64, seed: u64) -> Result<(bool, Option<String>)> {
        let (result, grid) = match self {
            Geometry::Block(g) => (lower_event(&sample_block(g, p, seed)?, g)?, g.grid()),
            Geometry::Rect(r) => (upper_event(&sample_rect(r, p, seed)?, r)?, r.grid()),
        };
        let witness = result.witness.map(|w| w.summary(&grid));
        Ok((result.holds, witness))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub event: bool,
    pub runtime_ms: u64,
    pub digest: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct SummaryLine {
    trials: u64,
    successes: u64,
    digest: String,
}

/// A finished (or loaded) run: records sorted by seed.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub config: ExperimentConfig,
    pub records: Vec<TrialRecord>,
    pub successes: u64,
}

impl RunOutcome {
    pub fn summary(&self) -> RunSummary {
        RunSummary {
            p: self.config.p.clone(),
            trials: self.config.trials,
            successes: self.successes,
        }
    }

    /// Seeds that went against the bound being certified: held lower events,
    /// failed upper events.
    pub fn bad_seeds(&self) -> Vec<u64> {
        let bad = self.config.mode == Direction::Lower;
        self.records
            .iter()
            .filter(|r| r.event == bad)
            .map(|r| r.seed)
            .collect()
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Worker threads; falls back to [`WORKERS_ENV`], then to the core count.
    pub workers: Option<usize>,
    /// Register the run as final in this ledger, refusing overlaps.
    pub final_ledger: Option<PathBuf>,
}

fn worker_count(opts: &RunOptions) -> Result<usize> {
    if let Some(w) = opts.workers {
        return Ok(w.max(1));
    }
    match std::env::var(WORKERS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(|w| w.max(1))
            .map_err(|_| Error::Config(format!("{WORKERS_ENV}={v:?} is not a count"))),
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn header_line(cfg: &ExperimentConfig) -> String {
    format!(
        "#CONFIG {}\n",
        serde_json::to_string(&cfg.to_pairs()).expect("string map serializes")
    )
}

fn record_line(r: &TrialRecord) -> String {
    let mut s = serde_json::to_string(r).expect("record serializes");
    s.push('\n');
    s
}

fn summary_line(cfg: &ExperimentConfig, successes: u64) -> String {
    let s = SummaryLine {
        trials: cfg.trials,
        successes,
        digest: cfg.digest(),
    };
    format!(
        "#SUMMARY {}\n",
        serde_json::to_string(&s).expect("summary serializes")
    )
}

/// Writes a complete record file in one go. Used for imported or synthetic
/// outcome lists; live runs go through [`run_experiment`].
pub fn write_record_file(cfg: &ExperimentConfig, records: &[TrialRecord]) -> Result<()> {
    let path = &cfg.output;
    let mut text = header_line(cfg);
    let mut successes = 0;
    for r in records {
        text.push_str(&record_line(r));
        successes += r.event as u64;
    }
    text.push_str(&summary_line(cfg, successes));
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Parsed contents of a record file, complete or not.
struct RecordFile {
    config: ExperimentConfig,
    records: Vec<TrialRecord>,
    summary: Option<SummaryLine>,
    /// Byte length of the well-formed prefix; anything after is a torn line.
    valid_len: u64,
}

fn read_record_file(path: &Path) -> Result<RecordFile> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = BufReader::new(file);
    let tamper = |reason: String| Error::Tamper {
        path: path.to_path_buf(),
        reason,
    };
    let mut config = None;
    let mut records = Vec::new();
    let mut summary = None;
    let mut valid_len = 0u64;
    let mut line = String::new();
    let mut n = 0;
    loop {
        line.clear();
        let read = reader
            .read_line(&mut line)
            .map_err(|e| Error::io(path, e))?;
        if read == 0 {
            break;
        }
        n += 1;
        if !line.ends_with('\n') {
            // Torn final line from an interrupted write.
            break;
        }
        let body = line.trim_end();
        if let Some(json) = body.strip_prefix("#CONFIG ") {
            if n != 1 {
                return Err(tamper(format!("line {n}: config header not first")));
            }
            let pairs: BTreeMap<String, String> = serde_json::from_str(json)
                .map_err(|e| tamper(format!("line {n}: bad header: {e}")))?;
            config = Some(ExperimentConfig::from_pairs(&pairs)?);
        } else if let Some(json) = body.strip_prefix("#SUMMARY ") {
            if summary.is_some() {
                return Err(tamper(format!("line {n}: second summary line")));
            }
            summary = Some(
                serde_json::from_str(json)
                    .map_err(|e| tamper(format!("line {n}: bad summary: {e}")))?,
            );
        } else {
            if n == 1 {
                return Err(tamper("missing #CONFIG header".into()));
            }
            if summary.is_some() {
                return Err(tamper(format!("line {n}: record after summary")));
            }
            records.push(
                serde_json::from_str(body)
                    .map_err(|e| tamper(format!("line {n}: bad record: {e}")))?,
            );
        }
        valid_len += read as u64;
    }
    let config = config.ok_or_else(|| tamper("missing #CONFIG header".into()))?;
    Ok(RecordFile {
        config,
        records,
        summary,
        valid_len,
    })
}

/// Runs every seed of `cfg` that does not already have a record in
/// `cfg.output`, appending records as they finish, then finalizes the file.
pub fn run_experiment(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunOutcome> {
    cfg.validate()?;
    cfg.plan()?;
    let geometry = cfg.geometry()?;
    let digest = cfg.digest();
    let path = cfg.output.clone();

    let ledger = opts
        .final_ledger
        .as_ref()
        .map(|p| SeedLedger::open(p))
        .transpose()?;
    if let Some(l) = &ledger {
        l.check(*cfg.seeds().start(), *cfg.seeds().end(), &digest)?;
    }

    let mut done: BTreeMap<u64, TrialRecord> = BTreeMap::new();
    let mut file = if path.exists() {
        let existing = read_record_file(&path)?;
        if existing.config.digest() != digest {
            return Err(Error::Config(format!(
                "{} holds a different experiment; choose another output",
                path.display()
            )));
        }
        for r in existing.records {
            if r.digest != digest || !cfg.seeds().contains(&r.seed) {
                return Err(Error::Tamper {
                    path: path.clone(),
                    reason: format!("record for seed {} does not belong to this run", r.seed),
                });
            }
            done.insert(r.seed, r);
        }
        if existing.summary.is_some() {
            return load_run(&path);
        }
        let f = OpenOptions::new()
            .write(true)
            .open(&path)
            .map_err(|e| Error::io(&path, e))?;
        f.set_len(existing.valid_len)
            .map_err(|e| Error::io(&path, e))?;
        drop(f);
        OpenOptions::new()
            .append(true)
            .open(&path)
            .map_err(|e| Error::io(&path, e))?
    } else {
        let mut f = OpenOptions::new()
            .create_new(true)
            .append(true)
            .open(&path)
            .map_err(|e| Error::io(&path, e))?;
        f.write_all(header_line(cfg).as_bytes())
            .map_err(|e| Error::io(&path, e))?;
        f
    };

    let todo: Vec<u64> = cfg.seeds().filter(|s| !done.contains_key(s)).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count(opts)?)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let p = cfg.p_f64();
    let (tx, rx) = mpsc::channel::<Result<TrialRecord>>();

    let write_result = std::thread::scope(|scope| {
        scope.spawn(|| {
            pool.install(|| {
                todo.par_iter().for_each_with(tx, |tx, &seed| {
                    let start = Instant::now();
                    let rec = geometry.trial(p, seed).map(|(event, witness)| TrialRecord {
                        seed,
                        event,
                        runtime_ms: start.elapsed().as_millis() as u64,
                        digest: digest.clone(),
                        witness,
                    });
                    let _ = tx.send(rec);
                });
            });
        });
        // Single writer: the calling thread owns the file.
        let mut first_err = None;
        for rec in rx {
            match rec {
                Ok(r) if first_err.is_none() => {
                    if let Err(e) = file.write_all(record_line(&r).as_bytes()) {
                        first_err = Some(Error::io(&path, e));
                    }
                    done.insert(r.seed, r);
                }
                Ok(_) => {}
                Err(e) => {
                    first_err.get_or_insert(e);
                }
            }
        }
        first_err.map_or(Ok(()), Err)
    });
    write_result?;

    let successes = done.values().filter(|r| r.event).count() as u64;
    file.write_all(summary_line(cfg, successes).as_bytes())
        .and_then(|_| file.sync_all())
        .map_err(|e| Error::io(&path, e))?;

    if let Some(l) = &ledger {
        l.register(*cfg.seeds().start(), *cfg.seeds().end(), &digest)?;
    }
    Ok(RunOutcome {
        config: cfg.clone(),
        records: done.into_values().collect(),
        successes,
    })
}

/// Loads a finalized record file, checking it end to end.
pub fn load_run(path: &Path) -> Result<RunOutcome> {
    let file = read_record_file(path)?;
    let tamper = |reason: String| Error::Tamper {
        path: path.to_path_buf(),
        reason,
    };
    let summary = file
        .summary
        .ok_or_else(|| Error::IncompleteRun(path.to_path_buf()))?;
    let cfg = file.config;
    let digest = cfg.digest();
    if summary.digest != digest {
        return Err(tamper("summary digest does not match the header".into()));
    }
    let mut by_seed = BTreeMap::new();
    for r in file.records {
        if r.digest != digest {
            return Err(tamper(format!("seed {}: digest mismatch", r.seed)));
        }
        if !cfg.seeds().contains(&r.seed) {
            return Err(tamper(format!(
                "seed {} outside the configured range",
                r.seed
            )));
        }
        let seed = r.seed;
        if by_seed.insert(seed, r).is_some() {
            return Err(tamper(format!("seed {seed} recorded twice")));
        }
    }
    if by_seed.len() as u64 != cfg.trials {
        return Err(tamper(format!(
            "{} records for {} trials",
            by_seed.len(),
            cfg.trials
        )));
    }
    let successes = by_seed.values().filter(|r| r.event).count() as u64;
    if summary.trials != cfg.trials || summary.successes != successes {
        return Err(tamper(format!(
            "summary claims {}/{} but records give {successes}/{}",
            summary.successes, summary.trials, cfg.trials
        )));
    }
    Ok(RunOutcome {
        config: cfg,
        records: by_seed.into_values().collect(),
        successes,
    })
}

/// Seed ranges already spent on final runs, one `start end digest` line each.
#[derive(Clone, Debug)]
pub struct SeedLedger {
    path: PathBuf,
    entries: Vec<(u64, u64, String)>,
}

impl SeedLedger {
    pub fn open(path: &Path) -> Result<Self> {
        let mut entries = Vec::new();
        match fs::read_to_string(path) {
            Ok(text) => {
                for (n, line) in text.lines().enumerate() {
                    let line = line.trim();
                    if line.is_empty() || line.starts_with('#') {
                        continue;
                    }
                    let parts: Vec<&str> = line.split_whitespace().collect();
                    let parsed = match parts.as_slice() {
                        [a, b, d] => a
                            .parse()
                            .ok()
                            .zip(b.parse().ok())
                            .map(|(a, b)| (a, b, d.to_string())),
                        _ => None,
                    };
                    entries.push(parsed.ok_or_else(|| {
                        Error::Config(format!("{}:{}: bad ledger line", path.display(), n + 1))
                    })?);
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(Error::io(path, e)),
        }
        Ok(SeedLedger {
            path: path.to_path_buf(),
            entries,
        })
    }

    pub fn entries(&self) -> &[(u64, u64, String)] {
        &self.entries
    }

    /// Refuses `start..=end` if it meets any recorded range, unless it is the
    /// very same run being resumed.
    pub fn check(&self, start: u64, end: u64, digest: &str) -> Result<()> {
        for (a, b, d) in &self.entries {
            let same = *a == start && *b == end && d == digest;
            if !same && start <= *b && *a <= end {
                return Err(Error::SeedReuse { start, end });
            }
        }
        Ok(())
    }

    pub fn register(&self, start: u64, end: u64, digest: &str) -> Result<()> {
        if self
            .entries
            .iter()
            .any(|(a, b, d)| *a == start && *b == end && d == digest)
        {
            return Ok(());
        }
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .map_err(|e| Error::io(&self.path, e))?;
        writeln!(f, "{start} {end} {digest}").map_err(|e| Error::io(&self.path, e))
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub verdict: Verdict,
    pub lower: RunOutcome,
    pub upper: RunOutcome,
}

impl Report {
    pub fn render(&self) -> String {
        let mut out = self.verdict.render();
        for c in stats::constants() {
            out.push_str(&format!(
                "constant {}: {} ({})\n",
                c.name, c.value, c.source
            ));
        }
        out.push_str(&format!("generator: {}\n", self.lower.config.generator));
        for (name, run) in [("lower", &self.lower), ("upper", &self.upper)] {
            let cfg = &run.config;
            out.push_str(&format!(
                "{name} run: kind={} scale={} seeds={}..={} digest={}\n",
                cfg.kind,
                cfg.scale,
                cfg.seeds().start(),
                cfg.seeds().end(),
                cfg.digest()
            ));
            let bad: Vec<String> = run.bad_seeds().iter().map(u64::to_string).collect();
            out.push_str(&format!(
                "{name} bad seeds ({}): [{}]\n",
                bad.len(),
                bad.join(", ")
            ));
        }
        out
    }
}

/// Recomputes both success counts from their record files and combines them
/// into a confidence interval at level `alpha`.
pub fn report(lower_path: &Path, upper_path: &Path, alpha: &BigRational) -> Result<Report> {
    let lower = load_run(lower_path)?;
    let upper = load_run(upper_path)?;
    if lower.config.mode != Direction::Lower {
        return Err(Error::Contract(format!(
            "{} is not a lower run",
            lower_path.display()
        )));
    }
    if upper.config.mode != Direction::Upper {
        return Err(Error::Contract(format!(
            "{} is not an upper run",
            upper_path.display()
        )));
    }
    if lower.config.kind != upper.config.kind {
        return Err(Error::Contract(
            "lower and upper runs use different lattices".into(),
        ));
    }
    if lower.config.generator != upper.config.generator {
        return Err(Error::Contract(
            "lower and upper runs use different generators".into(),
        ));
    }
    let verdict = stats::verdict(&lower.summary(), &upper.summary(), alpha)?;
    Ok(Report {
        verdict,
        lower,
        upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg_text(out: &Path) -> String {
        format!(
            "mode = lower\nkind = bond\nscale = 8\np = 0.2\ntrials = 50\nbase_seed = 40\n\
             alpha = 0.5\noutput = {}\n",
            out.display()
        )
    }

    #[test]
    fn config_round_trip_and_errors() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("r.jsonl");
        let cfg = ExperimentConfig::parse(&cfg_text(&out)).unwrap();
        assert_eq!(cfg.seeds(), 40..=89);
        assert_eq!(ExperimentConfig::parse(&cfg.render()).unwrap(), cfg);

        let typo = cfg_text(&out).replace("p = 0.2", "pp = 0.2");
        assert!(matches!(
            ExperimentConfig::parse(&typo),
            Err(Error::Config(_))
        ));
        let twice = format!("{}p = 0.3\n", cfg_text(&out));
        assert!(ExperimentConfig::parse(&twice).is_err());
        let bad_side = cfg_text(&out).replace("scale = 8", "scale = 10");
        assert!(matches!(
            ExperimentConfig::parse(&bad_side),
            Err(Error::InvalidGeometry(_))
        ));
        let other_gen = format!("{}generator = mt19937\n", cfg_text(&out));
        assert!(ExperimentConfig::parse(&other_gen).is_err());
    }

    #[test]
    fn digest_ignores_output_only() {
        let a = ExperimentConfig::parse(&cfg_text(Path::new("a"))).unwrap();
        let b = ExperimentConfig::parse(&cfg_text(Path::new("b"))).unwrap();
        assert_eq!(a.digest(), b.digest());
        let c = ExperimentConfig {
            base_seed: 41,
            ..a.clone()
        };
        assert_ne!(a.digest(), c.digest());
    }

    #[test]
    fn ledger_refuses_overlap() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ledger");
        let l = SeedLedger::open(&path).unwrap();
        l.register(100, 199, "aa").unwrap();
        let l = SeedLedger::open(&path).unwrap();
        assert!(l.check(100, 199, "aa").is_ok());
        assert!(matches!(
            l.check(150, 250, "bb"),
            Err(Error::SeedReuse { .. })
        ));
        assert!(l.check(200, 300, "bb").is_ok());
    }

    #[test]
    fn unwritable_output_fails_before_running() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("missing").join("r.jsonl");
        let cfg = ExperimentConfig::parse(&cfg_text(&out)).unwrap();
        assert!(matches!(
            run_experiment(&cfg, &RunOptions::default()),
            Err(Error::Io { .. })
        ));
    }
}
