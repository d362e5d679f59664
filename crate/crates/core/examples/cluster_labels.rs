// Label open clusters and find the largest one in each half of a double
// cube.

use cubic_percolation::cluster::{label_clusters, label_clusters_in};
use cubic_percolation::lattice::sample_rect;
use cubic_percolation::{Kind, RectGeometry, Result};

pub fn run_example(side: usize, p: f64, seed: u64) -> Result<()> {
    let r = RectGeometry::new(side, Kind::Bond)?;
    let sample = sample_rect(&r, p, seed)?;
    let whole = label_clusters(&sample);
    println!(
        "{}x{}x{} bond box at p={p}: {} clusters",
        side,
        side,
        2 * side,
        whole.cluster_count()
    );
    let mut sizes: Vec<usize> = whole.sizes().values().copied().collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    println!("  five largest: {:?}", &sizes[..sizes.len().min(5)]);

    for (name, half) in [("lower half", r.half_u()), ("upper half", r.half_v())] {
        let lab = label_clusters_in(&sample, &half);
        match lab.largest_in_box(&half) {
            Some(c) => println!(
                "  {name}: largest cluster has {} vertices (label {}, unique: {})",
                c.size, c.label, c.unique
            ),
            None => println!("  {name}: no clusters"),
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    run_example(8, 0.3, 2024)
}
