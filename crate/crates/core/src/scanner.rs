//! Empirical search for progressions `A n + B` on which `Q_t^s` vanishes
//! modulo `m`. Every hit is evidence over a sample range, not a theorem.

use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::PartitionSpec;
use crate::qfactory::Convention;
use crate::series::Ring;
use crate::theorems::q_values;

pub const MIN_SAMPLES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanConfig {
    spec: PartitionSpec,
    convention: Convention,
    moduli: Vec<u64>,
    a_max: u64,
    n_samples: usize,
}

impl ScanConfig {
    /// With no moduli the scan only looks for exactly vanishing progressions.
    pub fn new(
        spec: PartitionSpec,
        convention: Convention,
        moduli: Vec<u64>,
        a_max: u64,
        n_samples: usize,
    ) -> Result<ScanConfig> {
        if a_max < 2 {
            return Err(Error::InvalidParameter(format!(
                "A_max must be >= 2, got {a_max}"
            )));
        }
        if n_samples < MIN_SAMPLES {
            return Err(Error::InvalidParameter(format!(
                "n_samples must be >= {MIN_SAMPLES}, got {n_samples}"
            )));
        }
        if let Some(m) = moduli.iter().find(|&&m| m < 2) {
            return Err(Error::InvalidParameter(format!(
                "modulus must be >= 2, got {m}"
            )));
        }
        let mut moduli = moduli;
        moduli.sort_unstable();
        moduli.dedup();
        Ok(ScanConfig {
            spec,
            convention,
            moduli,
            a_max,
            n_samples,
        })
    }

    pub fn spec(&self) -> PartitionSpec {
        self.spec
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn a_max(&self) -> u64 {
        self.a_max
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn trunc(&self) -> Option<usize> {
        let a = usize::try_from(self.a_max).ok()?;
        a.checked_mul(self.n_samples)?.checked_add(a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanStatus {
    /// Vanishes modulo `m` on every sample, with at least one nonzero value.
    Candidate,
    /// Every sampled value is exactly zero.
    IdenticallyZero,
}

impl fmt::Display for ScanStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScanStatus::Candidate => "candidate",
            ScanStatus::IdenticallyZero => "identically-zero",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    #[serde(rename = "A")]
    pub a: u64,
    #[serde(rename = "B")]
    pub b: u64,
    #[serde(rename = "m")]
    pub modulus: Option<u64>,
    pub support: usize,
    pub status: ScanStatus,
}

impl ScanRow {
    /// `(A, B, m)`.
    pub fn key(&self) -> (u64, u64, Option<u64>) {
        (self.a, self.b, self.modulus)
    }
}

/// Runs the scan. Rows come back ordered by `(A, B, m)`.
pub fn scan(config: &ScanConfig, ceiling: usize) -> Result<Vec<ScanRow>> {
    let trunc = config.trunc().unwrap_or(usize::MAX);
    if trunc > ceiling {
        return Err(Error::TruncationCeiling {
            required: trunc,
            ceiling,
        });
    }
    let values = q_values(config.spec, config.convention, trunc, Ring::Exact)?;
    let residues: Vec<Vec<u64>> = config
        .moduli
        .iter()
        .map(|&m| (0..=trunc).map(|n| values.residue(n, m)).collect())
        .collect();
    let zero: Vec<bool> = (0..=trunc).map(|n| values.coeff(n).is_zero()).collect();

    let cells: Vec<(u64, u64)> = (1..=config.a_max)
        .flat_map(|a| (0..a).map(move |b| (a, b)))
        .collect();
    let n_samples = config.n_samples;
    let rows: Vec<Vec<ScanRow>> = cells
        .par_iter()
        .map(|&(a, b)| {
            let idx = |n: usize| a as usize * n + b as usize;
            let vacuous = (0..n_samples).all(|n| zero[idx(n)]);
            let row = |modulus, status| ScanRow {
                a,
                b,
                modulus,
                support: n_samples,
                status,
            };
            if config.moduli.is_empty() {
                return if vacuous {
                    vec![row(None, ScanStatus::IdenticallyZero)]
                } else {
                    Vec::new()
                };
            }
            config
                .moduli
                .iter()
                .zip(&residues)
                .filter(|(_, res)| (0..n_samples).all(|n| res[idx(n)] == 0))
                .map(|(&m, _)| {
                    let status = if vacuous {
                        ScanStatus::IdenticallyZero
                    } else {
                        ScanStatus::Candidate
                    };
                    row(Some(m), status)
                })
                .collect()
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}
