// Exact sign check showing that blocks open with probability below 3/100
// cannot percolate.

use cubic_percolation::certificate::{characteristic_polynomial, verify_threshold};
use cubic_percolation::transfer::TransferMatrix;
use cubic_percolation::Result;

pub fn run_example() -> Result<()> {
    let m = TransferMatrix::reference();
    println!("f(λ) = {}", characteristic_polynomial(&m).render());
    let cert = verify_threshold(&m)?;
    print!("{}", cert.render());
    println!("sharper numeric bound: {:.5}", cert.numeric_bound());
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
