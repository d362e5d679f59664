// How many events are allowed (or required) for a given number of trials.

use cubic_percolation::stats::{
    binom_tail_geq, parse_probability, plan, render_scientific, Direction,
};
use cubic_percolation::Result;

pub fn run_example() -> Result<()> {
    let alpha = parse_probability("0.999999")?;
    for (direction, trials) in [(Direction::Lower, 800), (Direction::Upper, 400)] {
        let p0 = direction.reference_constant().rational();
        print!("{}", plan(direction, trials, &alpha, &p0)?.render());
        println!();
    }
    let tail = binom_tail_geq(400, 378, &parse_probability("0.8639")?)?;
    println!(
        "P(Bin(400, 0.8639) >= 378) = {}",
        render_scientific(&tail, 8)
    );
    for trials in [50, 100, 200, 400] {
        let p0 = Direction::Lower.reference_constant().rational();
        match plan(Direction::Lower, trials, &alpha, &p0) {
            Ok(p) => println!("lower, {trials} trials: at most {} events", p.threshold),
            Err(e) => println!("lower, {trials} trials: {e}"),
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
