//! Lines of the (2,0) band with N'' ≤ 2 and the decay rate of A(v'=2).

use ionlogic::spectro::{build_line_catalog, upper_state_decay_rate, MolecularConstants};

fn main() -> ionlogic::Result<()> {
    let constants = MolecularConstants::builtin();
    let mut lines = build_line_catalog(&constants, (2, 0), 2)?;
    lines.sort_by(|a, b| a.frequency.total_cmp(&b.frequency));
    println!("{:<10} {:>11} {:>8} {:>12}", "line", "lambda/nm", "S", "|mu|^2/(Cm)^2");
    for l in &lines {
        println!(
            "{:<10} {:>11.4} {:>8.4} {:>12.4e}",
            l.label(),
            l.wavelength() * 1e9,
            l.honl_london,
            l.reduced_dipole_sq
        );
    }
    println!("\nA(v'=2) total decay rate: {:.4e} s^-1", upper_state_decay_rate(&constants, 2)?);
    Ok(())
}
