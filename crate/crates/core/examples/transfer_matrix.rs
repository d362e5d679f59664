// Count minimal paths in the independence lattice.
//
// cargo run --release --example transfer_matrix -- 4
// cargo run --release --example transfer_matrix -- 6 search

use cubic_percolation::transfer::{search_conventions, transfer_matrix, REFERENCE_M6};
use cubic_percolation::upsilon::{upsilon_degree, upsilon_neighbors, Adjacency};
use cubic_percolation::Result;

pub fn run_example(k: usize, search: bool) -> Result<()> {
    let nb = upsilon_neighbors();
    println!(
        "{} neighbours, by type: {:?}",
        nb.offsets().len(),
        nb.multiplicities()
    );
    for d in 2..=5 {
        println!(
            "  d={d}: {} face-adjacent, {} corner-adjacent",
            upsilon_degree(d, Adjacency::FaceAdjacent)?,
            upsilon_degree(d, Adjacency::CornerAdjacent)?
        );
    }
    print!("{}", transfer_matrix(k)?.render());
    if search {
        let target = if k == 6 {
            REFERENCE_M6
        } else {
            transfer_matrix(k)?.to_f64().map(|r| r.map(|x| x as u64))
        };
        print!("{}", search_conventions(k, &target)?.report());
    }
    Ok(())
}

fn main() -> Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let k = args.first().and_then(|s| s.parse().ok()).unwrap_or(3);
    run_example(k, args.iter().any(|a| a == "search"))
}
