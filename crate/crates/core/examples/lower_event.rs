// Two disjoint open arms from the centre of a block to its surface.
//
// Prints the hit rate over a few seeds at several p, plus one witness.

use cubic_percolation::events::{lower_event, verify_lower_witness, Witness};
use cubic_percolation::lattice::sample_block;
use cubic_percolation::oracle::lower_event_oracle;
use cubic_percolation::{BlockGeometry, Kind, Result};

pub fn run_example(side: usize, seeds: u64) -> Result<()> {
    let g = BlockGeometry::new(side, Kind::Bond)?;
    for p in [0.10, 0.2488, 0.40] {
        let mut hits = 0;
        let mut shown = false;
        for seed in 0..seeds {
            let sample = sample_block(&g, p, seed)?;
            let result = lower_event(&sample, &g)?;
            if side <= 16 {
                assert_eq!(result.holds, lower_event_oracle(&sample, &g)?);
            }
            if result.holds {
                hits += 1;
                if let Some(Witness::Lower(w)) = &result.witness {
                    assert!(verify_lower_witness(&sample, &g, w));
                    if !shown {
                        let lens = [w.arms[0].len(), w.arms[1].len()];
                        println!(
                            "  p={p} seed={seed}: {} (arm lengths {lens:?})",
                            result.witness.as_ref().unwrap().summary(&g.grid())
                        );
                        shown = true;
                    }
                }
            }
        }
        println!("L={side} p={p}: event held in {hits}/{seeds} samples");
    }
    Ok(())
}

fn main() -> Result<()> {
    run_example(12, 40)
}
