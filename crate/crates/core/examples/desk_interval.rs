// End to end: two small runs, then a certified interval.
//
// Writes its record files to a temporary directory, or to the directory
// given as the first argument.

use std::path::Path;

use cubic_percolation::runner::{report, run_experiment, ExperimentConfig, RunOptions};
use cubic_percolation::stats::parse_probability;
use cubic_percolation::Result;

pub fn run_example(dir: &Path, scale: usize) -> Result<()> {
    let lower = ExperimentConfig::parse(&format!(
        "mode = lower\nkind = bond\nscale = {scale}\np = 0.15\ntrials = 800\n\
         base_seed = 70000000\nalpha = 0.999999\noutput = {}\n",
        dir.join("lower.jsonl").display()
    ))?;
    let upper = ExperimentConfig::parse(&format!(
        "mode = upper\nkind = bond\nscale = {scale}\np = 0.35\ntrials = 400\n\
         base_seed = 70000000\nalpha = 0.999999\noutput = {}\n",
        dir.join("upper.jsonl").display()
    ))?;
    for cfg in [&lower, &upper] {
        let out = run_experiment(cfg, &RunOptions::default())?;
        println!("{} run: {}/{} events", cfg.mode, out.successes, cfg.trials);
    }
    let r = report(
        &lower.output,
        &upper.output,
        &parse_probability("0.999999")?,
    )?;
    print!("{}", r.render());
    Ok(())
}

fn main() -> Result<()> {
    let arg = std::env::args().nth(1);
    let tmp;
    let dir = match &arg {
        Some(d) => Path::new(d),
        None => {
            tmp = std::env::temp_dir().join(format!("desk-interval-{}", std::process::id()));
            std::fs::create_dir_all(&tmp).map_err(|e| cubic_percolation::Error::Io {
                path: tmp.clone(),
                source: e,
            })?;
            &tmp
        }
    };
    run_example(dir, 16)
}
