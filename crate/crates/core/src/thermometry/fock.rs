//! Motional Fock-state populations.

use crate::error::{Error, Result};

/// Probability mass allowed beyond the truncation point.
pub const TRUNCATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionKind {
    /// Poissonian populations of a coherent state.
    Coherent,
    /// Geometric populations of a thermal state.
    Thermal,
    /// Arbitrary user-supplied populations.
    Custom,
}

/// Populations p_n of the motional number states n = 0..=n_max.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDistribution {
    pub nbar: f64,
    pub probs: Vec<f64>,
    pub kind: DistributionKind,
}

impl FockDistribution {
    /// Coherent state: `p_n = e^(-n̄) n̄^n / n!`, truncated once the
    /// remaining mass is below [`TRUNCATION_TOLERANCE`].
    pub fn coherent(nbar: f64) -> Result<Self> {
        check_nbar(nbar)?;
        if nbar == 0.0 {
            return Ok(FockDistribution {
                nbar,
                probs: vec![1.0],
                kind: DistributionKind::Coherent,
            });
        }
        // log-space recursion avoids overflow of n̄^n and n! separately
        let ln_nbar = nbar.ln();
        let mut ln_p = -nbar;
        let mut probs = vec![ln_p.exp()];
        let mut total = probs[0];
        let mut n = 0usize;
        while (1.0 - total > TRUNCATION_TOLERANCE || (n as f64) < nbar) && n < 1_000_000 {
            n += 1;
            ln_p += ln_nbar - (n as f64).ln();
            let p = ln_p.exp();
            probs.push(p);
            total += p;
        }
        Ok(FockDistribution {
            nbar,
            probs,
            kind: DistributionKind::Coherent,
        })
    }

    /// Thermal state: `p_n = n̄^n / (n̄ + 1)^(n+1)`.
    pub fn thermal(nbar: f64) -> Result<Self> {
        check_nbar(nbar)?;
        let ratio = nbar / (nbar + 1.0);
        let mut probs = vec![1.0 / (nbar + 1.0)];
        let mut tail = ratio;
        while tail > TRUNCATION_TOLERANCE {
            let p = probs.last().unwrap() * ratio;
            probs.push(p);
            tail *= ratio;
        }
        Ok(FockDistribution {
            nbar,
            probs,
            kind: DistributionKind::Thermal,
        })
    }

    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() || probs.iter().any(|p| !(*p >= 0.0)) {
            return Err(Error::Domain("populations must be nonnegative and non-empty".into()));
        }
        let total: f64 = probs.iter().sum();
        if total > 1.0 + 1e-12 {
            return Err(Error::Domain(format!("populations sum to {total} > 1")));
        }
        let nbar = probs.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
        Ok(FockDistribution {
            nbar,
            probs,
            kind: DistributionKind::Custom,
        })
    }

    /// The number state |n>.
    pub fn number_state(n: usize) -> Self {
        let mut probs = vec![0.0; n + 1];
        probs[n] = 1.0;
        FockDistribution {
            nbar: n as f64,
            probs,
            kind: DistributionKind::Custom,
        }
    }

    pub fn n_max(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(n, p)| n as f64 * p).sum()
    }
}

fn check_nbar(nbar: f64) -> Result<()> {
    if !(nbar >= 0.0) || !nbar.is_finite() {
        return Err(Error::Domain(format!("mean occupation {nbar} must be a nonnegative number")));
    }
    Ok(())
}
