use std::fmt;

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::spectro::honl_london::SpinComponent;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Electronic {
    /// X ²Σg+ ground state, Hund's case (b).
    X,
    /// A ²Πu excited state, Hund's case (a).
    A,
}

/// A rovibronic level without its magnetic sub-structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RovibronicLevel {
    pub electronic: Electronic,
    pub v: u32,
    /// Rotational quantum number, defined for the X state only.
    pub n: Option<u32>,
    pub j: HalfInt,
    /// Projection Ω, defined for the A state only.
    pub omega: Option<HalfInt>,
}

impl RovibronicLevel {
    /// X-state level `|v, N, J>` with `J = N ± 1/2`.
    pub fn ground(v: u32, n: u32, j: HalfInt) -> Result<Self> {
        let two_n = 2 * n as i32;
        if j.twice() <= 0 || (j.twice() != two_n + 1 && j.twice() != two_n - 1) {
            return Err(Error::Domain(format!("J = {j} is not N ± 1/2 for N = {n}")));
        }
        Ok(RovibronicLevel {
            electronic: Electronic::X,
            v,
            n: Some(n),
            j,
            omega: None,
        })
    }

    /// A-state level `|v, Ω, J>` with `Ω ∈ {1/2, 3/2}` and `J >= Ω`.
    pub fn excited(v: u32, omega: HalfInt, j: HalfInt) -> Result<Self> {
        if omega.twice() != 1 && omega.twice() != 3 {
            return Err(Error::Domain(format!("Ω = {omega} is not a ²Π component")));
        }
        if j < omega || j.is_integer() {
            return Err(Error::Domain(format!("J = {j} is incompatible with Ω = {omega}")));
        }
        Ok(RovibronicLevel {
            electronic: Electronic::A,
            v,
            n: None,
            j,
            omega: Some(omega),
        })
    }

    /// F1/F2 label of an X-state level.
    pub fn ground_component(&self) -> Option<SpinComponent> {
        let n = self.n? as i32;
        Some(if self.j.twice() == 2 * n + 1 {
            SpinComponent::F1
        } else {
            SpinComponent::F2
        })
    }
}

impl fmt::Display for RovibronicLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.electronic {
            Electronic::X => write!(
                f,
                "X(v={}, N={}, J={})",
                self.v,
                self.n.unwrap_or_default(),
                self.j
            ),
            Electronic::A => write!(
                f,
                "A(v={}, Ω={}, J={})",
                self.v,
                self.omega.unwrap_or(HalfInt::ZERO),
                self.j
            ),
        }
    }
}

/// A molecular state `|v, N, S, J, I, F, m_F>` resolved down to `m_J`.
///
/// Nuclear spin and hyperfine numbers are carried but not used in any
/// energy or line-strength calculation (I = 0 is assumed there).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RovibronicState {
    pub level: RovibronicLevel,
    pub m_j: HalfInt,
    pub spin: HalfInt,
    pub nuclear_spin: Option<u32>,
    pub f: Option<HalfInt>,
    pub m_f: Option<HalfInt>,
}

impl RovibronicState {
    pub fn new(level: RovibronicLevel, m_j: HalfInt) -> Result<Self> {
        if m_j.abs() > level.j || !(level.j - m_j).is_integer() {
            return Err(Error::Domain(format!("m_J = {m_j} is invalid for J = {}", level.j)));
        }
        Ok(RovibronicState {
            level,
            m_j,
            spin: HalfInt::HALF,
            nuclear_spin: None,
            f: None,
            m_f: None,
        })
    }

    /// Shorthand for an X-state `|v, N, J, m_J>`.
    pub fn ground(v: u32, n: u32, j: HalfInt, m_j: HalfInt) -> Result<Self> {
        RovibronicState::new(RovibronicLevel::ground(v, n, j)?, m_j)
    }

    /// Attaches nuclear-spin labels. Only I = 0 or 2 (ortho) is accepted.
    pub fn with_hyperfine(mut self, i: u32, f: HalfInt, m_f: HalfInt) -> Result<Self> {
        if i != 0 && i != 2 {
            return Err(Error::Domain(format!("I = {i} is not an ortho nuclear-spin state")));
        }
        let two_i = 2 * i as i32;
        if f.twice() < (self.level.j.twice() - two_i).abs()
            || f.twice() > self.level.j.twice() + two_i
            || m_f.abs() > f
        {
            return Err(Error::Domain(format!("F = {f}, m_F = {m_f} inconsistent with J, I")));
        }
        self.nuclear_spin = Some(i);
        self.f = Some(f);
        self.m_f = Some(m_f);
        Ok(self)
    }
}

impl fmt::Display for RovibronicState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.level.electronic {
            Electronic::X => write!(
                f,
                "|{},{},{},{}>",
                self.level.v,
                self.level.n.unwrap_or_default(),
                self.level.j,
                self.m_j
            ),
            Electronic::A => write!(f, "{} m_J={}", self.level, self.m_j),
        }
    }
}
