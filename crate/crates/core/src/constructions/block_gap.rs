//! Block vectors whose best-interval error exceeds any prescribed multiple
//! of their best m-term error, certifying that the interval benchmark is not
//! dominated by the set benchmark.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::functionals::{sigma_check, sigma_tilde_with, FunctionalConfig, FunctionalValue};
use crate::vector::CoeffVector;

/// A block instance in l1: `block_count` blocks of (a, 1/m^2 x m), so that
/// removing the m large coordinates needs m disjoint singletons, while any
/// single interval of length m can cover at most one of them.
#[derive(Clone, Debug, Serialize)]
pub struct E1Instance {
    /// Target separation ratio C > 1.
    pub target: f64,
    /// Block count and small-entry run length m.
    pub block_size: usize,
    /// Large coefficient a with a (m - 1) > C.
    pub scale: f64,
    pub x: CoeffVector,
}

/// Builds the instance for a target C > 1 with the deterministic choice
/// m = 3, a = (C + 1) / (m - 1), which satisfies a (m - 1) = C + 1 > C.
pub fn build_e1(target: f64) -> Result<E1Instance> {
    if !(target > 1.0) {
        return Err(Error::Domain(format!("target ratio must exceed 1, got {target}")));
    }
    let m = 3usize;
    let scale = (target + 1.0) / (m as f64 - 1.0);
    let small = 1.0 / (m * m) as f64;
    let mut coeffs = Vec::with_capacity(m * (m + 1));
    for _ in 0..m {
        coeffs.push(scale);
        coeffs.extend(std::iter::repeat(small).take(m));
    }
    Ok(E1Instance { target, block_size: m, scale, x: CoeffVector::from_dense(&coeffs) })
}

/// Verification data: both functionals at step m in l1, and the separation
/// inequalities they certify.
#[derive(Clone, Debug, Serialize)]
pub struct E1Report {
    pub target: f64,
    pub sigma_tilde: FunctionalValue,
    pub sigma_check: FunctionalValue,
    /// sigma-tilde equals 1 exactly (tolerance 1e-12).
    pub tilde_is_one: bool,
    /// sigma-check strictly exceeds the target C.
    pub check_beats_target: bool,
    /// sigma-check > C * sigma-tilde.
    pub separated: bool,
}

impl E1Report {
    pub fn pass(&self) -> bool {
        self.tilde_is_one && self.check_beats_target && self.separated
    }
}

impl E1Instance {
    /// Support size is m (m + 1): m large coordinates plus m^2 small ones.
    pub fn support_size(&self) -> usize {
        self.block_size * (self.block_size + 1)
    }

    pub fn verify(&self, cfg: &FunctionalConfig) -> Result<E1Report> {
        let l1 = super::l1()?;
        let m = self.block_size;
        let tilde = sigma_tilde_with(&self.x, m, &l1, cfg);
        let check = sigma_check(&self.x, m, &l1);
        Ok(E1Report {
            target: self.target,
            tilde_is_one: (tilde.value - 1.0).abs() <= 1e-12,
            check_beats_target: check.value > self.target,
            separated: check.value > self.target * tilde.value,
            sigma_tilde: tilde,
            sigma_check: check,
        })
    }
}
