//! Partition counts by direct dynamic programming over allowed parts.
//!
//! Nothing here touches [`crate::series`]: the tables are built with the
//! textbook knapsack recurrences (0/1 for distinct parts, unbounded for
//! repeated parts) so they can serve as an independent check on series
//! coefficients.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Largest `n` for which explicit partition lists are produced.
pub const WITNESS_LIMIT: u64 = 40;

/// `(t, s)`: distinct parts, none congruent to `s` or `t - s` modulo `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionSpec {
    t: u64,
    s: u64,
}

impl PartitionSpec {
    pub fn new(t: u64, s: u64) -> Result<PartitionSpec> {
        if t == 0 || s == 0 || s > t {
            return Err(Error::InvalidParameter(format!(
                "partition spec needs 1 <= s <= t, got t={t}, s={s}"
            )));
        }
        Ok(PartitionSpec { t, s })
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn forbidden_residues(&self) -> BTreeSet<u64> {
        [self.s % self.t, (self.t - self.s) % self.t]
            .into_iter()
            .collect()
    }

    /// Whether the two forbidden classes coincide (`s = t - s` mod `t`).
    pub fn is_self_paired(&self) -> bool {
        self.forbidden_residues().len() == 1
    }

    pub fn allows(&self, part: u64) -> bool {
        let r = part % self.t;
        r != self.s % self.t && r != (self.t - self.s) % self.t
    }
}

impl fmt::Display for PartitionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q_{}^{}", self.t, self.s)
    }
}

/// The partition families the oracle can count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PartitionKind {
    /// All partitions, `p(n)`.
    Unrestricted,
    /// Distinct parts, `p_d(n)`.
    Distinct,
    /// Odd parts, `p_o(n)`.
    Odd,
    /// No part divisible by `k`, `b_k(n)`.
    NonDivisible(u64),
    /// Distinct parts avoiding the classes of a [`PartitionSpec`].
    Restricted(PartitionSpec),
}

impl PartitionKind {
    fn distinct(&self) -> bool {
        matches!(self, PartitionKind::Distinct | PartitionKind::Restricted(_))
    }

    fn allows(&self, part: u64) -> bool {
        match self {
            PartitionKind::Unrestricted | PartitionKind::Distinct => true,
            PartitionKind::Odd => part % 2 == 1,
            PartitionKind::NonDivisible(k) => !part.is_multiple_of(*k),
            PartitionKind::Restricted(spec) => spec.allows(part),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            PartitionKind::NonDivisible(k) if *k < 2 => Err(Error::InvalidParameter(format!(
                "b_k needs k >= 2, got {k}"
            ))),
            _ => Ok(()),
        }
    }

    /// Counts for every `n` in `0..=n_max` in one pass.
    pub fn table(&self, n_max: usize) -> Result<Vec<BigUint>> {
        self.validate()?;
        let mut c = vec![BigUint::zero(); n_max + 1];
        c[0] = BigUint::one();
        for part in (1..=n_max).filter(|&p| self.allows(p as u64)) {
            if self.distinct() {
                for i in (part..=n_max).rev() {
                    if !c[i - part].is_zero() {
                        let prev = c[i - part].clone();
                        c[i] += prev;
                    }
                }
            } else {
                for i in part..=n_max {
                    let prev = c[i - part].clone();
                    c[i] += prev;
                }
            }
        }
        Ok(c)
    }

    /// The same table with counts reduced modulo `m`.
    pub fn table_mod(&self, n_max: usize, m: u64) -> Result<Vec<u64>> {
        self.validate()?;
        if m < 2 {
            return Err(Error::InvalidParameter(format!(
                "modulus must be >= 2, got {m}"
            )));
        }
        let mut c = vec![0u64; n_max + 1];
        c[0] = 1 % m;
        let add = |a: u64, b: u64| ((a as u128 + b as u128) % m as u128) as u64;
        for part in (1..=n_max).filter(|&p| self.allows(p as u64)) {
            if self.distinct() {
                for i in (part..=n_max).rev() {
                    c[i] = add(c[i], c[i - part]);
                }
            } else {
                for i in part..=n_max {
                    c[i] = add(c[i], c[i - part]);
                }
            }
        }
        Ok(c)
    }

    pub fn count(&self, n: usize) -> Result<BigUint> {
        Ok(self.table(n)?.pop().expect("table has n + 1 entries"))
    }

    /// The partitions themselves, largest part first, in decreasing
    /// lexicographic order. Refused for `n > WITNESS_LIMIT`.
    pub fn witnesses(&self, n: u64) -> Result<Vec<Vec<u64>>> {
        self.validate()?;
        if n > WITNESS_LIMIT {
            return Err(Error::InvalidParameter(format!(
                "witness lists are limited to n <= {WITNESS_LIMIT}, got {n}"
            )));
        }
        let mut out = Vec::new();
        let mut current = Vec::new();
        self.enumerate(n, n, &mut current, &mut out);
        Ok(out)
    }

    fn enumerate(
        &self,
        remaining: u64,
        max_part: u64,
        current: &mut Vec<u64>,
        out: &mut Vec<Vec<u64>>,
    ) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        for part in (1..=max_part.min(remaining)).rev() {
            if !self.allows(part) {
                continue;
            }
            current.push(part);
            let next_max = if self.distinct() { part - 1 } else { part };
            self.enumerate(remaining - part, next_max, current, out);
            current.pop();
        }
    }
}

pub fn count_qts(spec: PartitionSpec, n: usize) -> BigUint {
    PartitionKind::Restricted(spec)
        .count(n)
        .expect("restricted spec is valid")
}

pub fn table_qts(spec: PartitionSpec, n_max: usize) -> Vec<BigUint> {
    PartitionKind::Restricted(spec)
        .table(n_max)
        .expect("restricted spec is valid")
}

pub fn table_qts_mod(spec: PartitionSpec, n_max: usize, m: u64) -> Result<Vec<u64>> {
    PartitionKind::Restricted(spec).table_mod(n_max, m)
}

pub fn count_p(n: usize) -> BigUint {
    table_p(n).pop().expect("nonempty")
}

pub fn count_pd(n: usize) -> BigUint {
    table_pd(n).pop().expect("nonempty")
}

pub fn count_po(n: usize) -> BigUint {
    table_po(n).pop().expect("nonempty")
}

pub fn table_p(n_max: usize) -> Vec<BigUint> {
    PartitionKind::Unrestricted
        .table(n_max)
        .expect("valid kind")
}

pub fn table_pd(n_max: usize) -> Vec<BigUint> {
    PartitionKind::Distinct.table(n_max).expect("valid kind")
}

pub fn table_po(n_max: usize) -> Vec<BigUint> {
    PartitionKind::Odd.table(n_max).expect("valid kind")
}

pub fn count_b_nondiv(n: usize, k: u64) -> Result<BigUint> {
    PartitionKind::NonDivisible(k).count(n)
}

pub fn table_b_nondiv(n_max: usize, k: u64) -> Result<Vec<BigUint>> {
    PartitionKind::NonDivisible(k).table(n_max)
}
