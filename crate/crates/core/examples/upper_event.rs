// Uniquely largest clusters in both halves of a double cube, joined.

use cubic_percolation::events::upper_event;
use cubic_percolation::lattice::sample_rect;
use cubic_percolation::oracle::upper_event_oracle;
use cubic_percolation::{Kind, RectGeometry, Result};

pub fn run_example(side: usize, seeds: u64) -> Result<()> {
    for kind in [Kind::Bond, Kind::Site] {
        let r = RectGeometry::new(side, kind)?;
        for p in [0.15, 0.30, 0.45] {
            let mut hits = 0;
            for seed in 0..seeds {
                let sample = sample_rect(&r, p, seed)?;
                let result = upper_event(&sample, &r)?;
                if side <= 8 {
                    assert_eq!(result.holds, upper_event_oracle(&sample, &r)?);
                }
                hits += result.holds as u64;
            }
            println!("{kind} s={side} p={p}: event held in {hits}/{seeds} samples");
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    run_example(6, 40)
}
