// Draw a seeded block sample and look at its geometry.
//
// cargo run --example block_sampling -- 16 0.25 7

use cubic_percolation::lattice::{sample_block, GENERATOR_ID};
use cubic_percolation::{BlockGeometry, Kind, Result};

pub fn run_example(side: usize, p: f64, seed: u64) -> Result<()> {
    for kind in [Kind::Bond, Kind::Site] {
        let g = BlockGeometry::new(side, kind)?;
        let sample = sample_block(&g, p, seed)?;
        println!(
            "{kind} block L={side}: {} vertices, centre {}..{} ({} vertices), surface {}",
            g.grid().vertex_count(),
            g.centre_lo(),
            g.centre_hi(),
            g.centre_count(),
            g.surface_count()
        );
        println!(
            "  p={p} seed={seed}: {}/{} elements open ({:.4})",
            sample.open_count(),
            sample.element_count(),
            sample.open_count() as f64 / sample.element_count() as f64
        );
        // Same seed, larger p: every open element stays open.
        let denser = sample_block(&g, (p + 0.1).min(1.0), seed)?;
        assert!(sample.is_subset_of(&denser));
    }
    println!("generator: {GENERATOR_ID}");
    Ok(())
}

fn main() -> Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let side = args.first().and_then(|s| s.parse().ok()).unwrap_or(16);
    let p = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(0.25);
    let seed = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(7);
    run_example(side, p, seed)
}
