//! Rotational line strengths (Hönl-London factors) for a ²Π ← ²Σ band.
//!
//! The upper ²Π state is treated in Hund's case (a), the lower ²Σ state in
//! case (b). For a ²Σ level of given J and parity the case (a) and (b) bases
//! coincide, so every branch factor reduces to a single squared
//! Clebsch-Gordan coefficient coupling Ω'' = Ω' - 1 to Ω'. These are the
//! large-|A/B| limits of the intermediate-coupling expressions.
//!
//! Normalization: summed over the six branches leaving one lower level,
//! `Σ S = NORMALIZATION · (2J'' + 1) · (2 - δ(0, Λ' + Λ''))`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::halfint::HalfInt;

/// Overall scale of the line strengths. Alternative conventions (for example
/// normalizing per upper level) only change this constant and
/// [`sum_rule`].
pub const NORMALIZATION: f64 = 1.0;

/// Λ of the upper (²Π) state.
pub const LAMBDA_UPPER: u32 = 1;
/// Λ of the lower (²Σ) state.
pub const LAMBDA_LOWER: u32 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BranchKind {
    P,
    Q,
    R,
}

impl BranchKind {
    /// J' - J''.
    pub fn delta_j(self) -> i32 {
        match self {
            BranchKind::P => -1,
            BranchKind::Q => 0,
            BranchKind::R => 1,
        }
    }

    pub fn from_delta_j(delta_j: i32) -> Result<Self> {
        match delta_j {
            -1 => Ok(BranchKind::P),
            0 => Ok(BranchKind::Q),
            1 => Ok(BranchKind::R),
            _ => Err(Error::Domain(format!(
                "ΔJ = {delta_j} violates the electric-dipole selection rule"
            ))),
        }
    }
}

/// Spin component label F1 / F2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpinComponent {
    F1,
    F2,
}

impl SpinComponent {
    pub fn index(self) -> u8 {
        match self {
            SpinComponent::F1 => 1,
            SpinComponent::F2 => 2,
        }
    }

    fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(SpinComponent::F1),
            2 => Ok(SpinComponent::F2),
            _ => Err(Error::Domain(format!("spin component F{i} does not exist for a doublet"))),
        }
    }
}

/// One of the twelve ²Π ← ²Σ branches, labelled `<P|Q|R><upper F><lower F>`.
///
/// For the upper state, F1 is the Ω = 3/2 component (inverted ²Π, A < 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Branch {
    pub kind: BranchKind,
    pub upper: SpinComponent,
    pub lower: SpinComponent,
}

impl Branch {
    pub fn new(delta_j: i32, upper: u8, lower: u8) -> Result<Self> {
        Ok(Branch {
            kind: BranchKind::from_delta_j(delta_j)?,
            upper: SpinComponent::from_index(upper)?,
            lower: SpinComponent::from_index(lower)?,
        })
    }

    pub fn all() -> impl Iterator<Item = Branch> {
        [BranchKind::P, BranchKind::Q, BranchKind::R]
            .into_iter()
            .flat_map(|kind| {
                [SpinComponent::F1, SpinComponent::F2].into_iter().flat_map(move |upper| {
                    [SpinComponent::F1, SpinComponent::F2]
                        .into_iter()
                        .map(move |lower| Branch { kind, upper, lower })
                })
            })
    }

    /// Ω' of the upper level for an inverted ²Π state.
    pub fn upper_omega(self) -> HalfInt {
        match self.upper {
            SpinComponent::F1 => HalfInt::from_twice(3),
            SpinComponent::F2 => HalfInt::HALF,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            BranchKind::P => 'P',
            BranchKind::Q => 'Q',
            BranchKind::R => 'R',
        };
        write!(f, "{k}{}{}", self.upper.index(), self.lower.index())
    }
}

impl FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.trim().chars().collect();
        if chars.len() != 3 {
            return Err(Error::Domain(format!("bad branch label '{s}'")));
        }
        let delta_j = match chars[0] {
            'O' => -2,
            'P' => -1,
            'Q' => 0,
            'R' => 1,
            'S' => 2,
            _ => return Err(Error::Domain(format!("bad branch label '{s}'"))),
        };
        let digit = |c: char| {
            c.to_digit(10)
                .map(|d| d as u8)
                .ok_or_else(|| Error::Domain(format!("bad branch label '{s}'")))
        };
        Branch::new(delta_j, digit(chars[1])?, digit(chars[2])?)
    }
}

/// Line strength of the ΔJ transition from lower J'' into the upper
/// component with projection `omega_upper` (1/2 or 3/2).
///
/// Returns zero when the upper J' cannot carry that Ω.
pub fn honl_london_omega(kind: BranchKind, omega_upper: HalfInt, j_lower: HalfInt) -> Result<f64> {
    if j_lower.is_integer() || j_lower.twice() < 1 {
        return Err(Error::Domain(format!(
            "J'' = {j_lower} is not a valid doublet J (needs half-integer >= 1/2)"
        )));
    }
    let j = j_lower.value();
    let s = match (omega_upper.twice(), kind) {
        (3, BranchKind::R) => (2.0 * j + 3.0) * (2.0 * j + 5.0) / (8.0 * (j + 1.0)),
        (3, BranchKind::Q) => {
            (2.0 * j + 1.0) * (2.0 * j + 3.0) * (2.0 * j - 1.0) / (8.0 * j * (j + 1.0))
        }
        (3, BranchKind::P) => (2.0 * j - 3.0) * (2.0 * j - 1.0) / (8.0 * j),
        (1, BranchKind::R) => (2.0 * j + 1.0) * (2.0 * j + 3.0) / (8.0 * (j + 1.0)),
        (1, BranchKind::Q) => (2.0 * j + 1.0).powi(3) / (8.0 * j * (j + 1.0)),
        (1, BranchKind::P) => (2.0 * j - 1.0) * (2.0 * j + 1.0) / (8.0 * j),
        _ => {
            return Err(Error::Domain(format!(
                "Ω' = {omega_upper} is not a ²Π component"
            )))
        }
    };
    // the P branch into Ω' = 3/2 evaluates to -0.0 at J'' = 1/2
    Ok(NORMALIZATION * s.max(0.0))
}

/// Hönl-London factor for a labelled branch out of lower level J''.
pub fn honl_london(branch: Branch, j_lower: HalfInt) -> Result<f64> {
    honl_london_omega(branch.kind, branch.upper_omega(), j_lower)
}

/// The branch sum out of a single lower level implied by [`NORMALIZATION`].
pub fn sum_rule(j_lower: HalfInt) -> f64 {
    let delta = if LAMBDA_UPPER + LAMBDA_LOWER == 0 { 1.0 } else { 0.0 };
    NORMALIZATION * j_lower.multiplicity() as f64 * (2.0 - delta)
}
