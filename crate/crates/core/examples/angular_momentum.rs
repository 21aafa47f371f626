//! Wigner 3j symbols and Hönl-London factors of the A ← X band.

use ionlogic::spectro::honl_london::{honl_london, sum_rule, Branch, SpinComponent};
use ionlogic::spectro::wigner3j;
use ionlogic::HalfInt;

fn main() -> ionlogic::Result<()> {
    let h = HalfInt::from_twice;
    println!("(1/2 1 3/2; 1/2 0 -1/2) = {:+.6}", wigner3j(h(1), h(2), h(3), h(1), h(0), h(-1))?);
    println!("(1 1 1; 1 -1 0)        = {:+.6}", wigner3j(h(2), h(2), h(2), h(2), h(-2), h(0))?);

    println!("\nbranches out of one lower level:\nJ''    {:>8} {:>8}", "sum S", "rule");
    for twice in [1, 3, 5, 11, 21] {
        let j = h(twice);
        let total: f64 = Branch::all()
            .filter(|b| b.lower == SpinComponent::F1)
            .map(|b| honl_london(b, j))
            .sum::<ionlogic::Result<f64>>()?;
        println!("{:<5} {total:>8.4} {:>8.4}", j.to_string(), sum_rule(j));
    }

    println!("\nbranch factors out of J'' = 5/2:");
    for b in Branch::all().filter(|b| b.lower == SpinComponent::F1) {
        println!("  {b:<4} {:.4}", honl_london(b, h(5))?);
    }
    Ok(())
}
