//! Wigner 3j symbols from the Racah formula.

use std::sync::LazyLock;

use crate::error::{Error, Result};
use crate::halfint::HalfInt;

const LOG_FACTORIAL_SIZE: usize = 256;

static LOG_FACTORIAL: LazyLock<[f64; LOG_FACTORIAL_SIZE]> = LazyLock::new(|| {
    let mut table = [0.0; LOG_FACTORIAL_SIZE];
    for n in 1..LOG_FACTORIAL_SIZE {
        table[n] = table[n - 1] + (n as f64).ln();
    }
    table
});

fn log_fact(n: i32) -> f64 {
    debug_assert!(n >= 0);
    LOG_FACTORIAL[n as usize]
}

fn check_pair(j: HalfInt, m: HalfInt) -> Result<()> {
    if j.twice() < 0 {
        return Err(Error::Domain(format!("negative angular momentum j = {j}")));
    }
    if m.abs() > j {
        return Err(Error::Domain(format!("|m| = |{m}| exceeds j = {j}")));
    }
    if !(j - m).is_integer() {
        return Err(Error::Domain(format!("j - m is not an integer for j = {j}, m = {m}")));
    }
    Ok(())
}

/// Wigner 3j symbol
/// ```text
/// ( j1 j2 j3 )
/// ( m1 m2 m3 )
/// ```
///
/// Returns exactly zero when the triangle rule or `m1 + m2 + m3 = 0` fails.
/// A projection larger than its angular momentum, or of the wrong parity, is a
/// domain error.
pub fn wigner3j(
    j1: HalfInt,
    j2: HalfInt,
    j3: HalfInt,
    m1: HalfInt,
    m2: HalfInt,
    m3: HalfInt,
) -> Result<f64> {
    check_pair(j1, m1)?;
    check_pair(j2, m2)?;
    check_pair(j3, m3)?;

    // twice-values; every combination below is even once the checks pass
    let (a, b, c) = (j1.twice(), j2.twice(), j3.twice());
    let (x, y, z) = (m1.twice(), m2.twice(), m3.twice());

    if x + y + z != 0 {
        return Ok(0.0);
    }
    if (a + b + c) % 2 != 0 || c > a + b || c < (a - b).abs() {
        return Ok(0.0);
    }
    if (a + b + c) / 2 + 1 >= LOG_FACTORIAL_SIZE as i32 {
        return Err(Error::Domain(format!(
            "angular momenta ({j1}, {j2}, {j3}) exceed the factorial table"
        )));
    }

    let h = |v: i32| v / 2;
    let triangle = log_fact(h(a + b - c)) + log_fact(h(a - b + c)) + log_fact(h(-a + b + c))
        - log_fact(h(a + b + c) + 1);
    let projections = log_fact(h(a + x))
        + log_fact(h(a - x))
        + log_fact(h(b + y))
        + log_fact(h(b - y))
        + log_fact(h(c + z))
        + log_fact(h(c - z));
    let prefactor = 0.5 * (triangle + projections);

    // k runs over all values keeping every factorial argument non-negative
    let k_min = 0.max(h(b - c - x)).max(h(a - c + y));
    let k_max = h(a + b - c).min(h(a - x)).min(h(b + y));

    let mut sum = 0.0;
    for k in k_min..=k_max {
        let denom = log_fact(k)
            + log_fact(h(c - b + x) + k)
            + log_fact(h(c - a - y) + k)
            + log_fact(h(a + b - c) - k)
            + log_fact(h(a - x) - k)
            + log_fact(h(b + y) - k);
        let term = (prefactor - denom).exp();
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }

    let phase = h(a - b - z);
    Ok(if phase.rem_euclid(2) == 0 { sum } else { -sum })
}

/// Convenience wrapper taking floating-point arguments, which must all be
/// half-integers.
pub fn wigner3j_f64(j1: f64, j2: f64, j3: f64, m1: f64, m2: f64, m3: f64) -> Result<f64> {
    wigner3j(
        HalfInt::try_from_f64(j1)?,
        HalfInt::try_from_f64(j2)?,
        HalfInt::try_from_f64(j3)?,
        HalfInt::try_from_f64(m1)?,
        HalfInt::try_from_f64(m2)?,
        HalfInt::try_from_f64(m3)?,
    )
}
