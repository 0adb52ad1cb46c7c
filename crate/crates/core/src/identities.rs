//! Theta-function identities, dissections and binomial congruences, each
//! expressed as a pair of series that must agree up to a truncation order.

use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::qfactory::{Factory, PochhammerSpec, Sign, SpecialTheta, ThetaSpec};
use crate::report::{MismatchRecord, VerificationReport};
use crate::series::{Comparison, Ring, Series};

/// Checks refuse truncation orders below this.
pub const MIN_TRUNC: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IdentityId {
    /// `f(q, q^2) = phi(-q^3) / chi(-q)`
    L21FQq2,
    /// `f(q, q^5) = psi(-q^3) chi(q)`
    L22FQq5,
    /// p-dissection of `f_1`, `p >= 5` prime.
    L23F1Dissection { p: u64 },
    /// p-dissection of `psi(q)`, `p` an odd prime.
    L24PsiDissection { p: u64 },
    /// `f_1 = f_49 (B/C - q A/B - q^2 + q^5 C/A)` at `q^7`.
    L25Septic,
    /// `f_1 = f_25 (R(q^5) - q - q^2 / R(q^5))`.
    L26Quintic,
    /// `f_1^3 = a(q^3) - 3q f_9^3`.
    L27Cubic,
    /// `f_r^{2m} = f_{2r}^m (mod 2)`.
    CT7 { r: usize, m: u32 },
    /// `f_r^{4m} = f_{2r}^{2m} (mod 4)`.
    CV7 { r: usize, m: u32 },
    /// `f(q, q^2) = f_1 (mod 2)`.
    L28FQq2Mod2,
    /// Eta-quotient form of a special theta function equals its definition.
    Special(SpecialTheta),
    /// `(-q; q)_inf = 1 / (q; q^2)_inf`.
    EulerPdPo,
}

impl IdentityId {
    /// The full catalog with the truncation order each entry is checked at by default.
    pub fn catalog() -> Vec<(IdentityId, usize)> {
        let mut out: Vec<(IdentityId, usize)> = SpecialTheta::ALL
            .into_iter()
            .map(|s| (IdentityId::Special(s), 300))
            .collect();
        out.push((IdentityId::EulerPdPo, 300));
        out.push((IdentityId::L21FQq2, 300));
        out.push((IdentityId::L22FQq5, 300));
        for p in [5, 7, 11, 13] {
            out.push((IdentityId::L23F1Dissection { p }, 300));
        }
        for p in [3, 5, 7] {
            out.push((IdentityId::L24PsiDissection { p }, 300));
        }
        out.push((IdentityId::L25Septic, 200));
        out.push((IdentityId::L26Quintic, 150));
        out.push((IdentityId::L27Cubic, 200));
        for r in 1..=3 {
            for m in 1..=2 {
                out.push((IdentityId::CT7 { r, m }, 200));
                out.push((IdentityId::CV7 { r, m }, 200));
            }
        }
        out.push((IdentityId::L28FQq2Mod2, 200));
        out
    }

    /// Parses a catalog name. Parameterized ids take their parameters from
    /// the optional arguments.
    pub fn parse(
        name: &str,
        p: Option<u64>,
        r: Option<usize>,
        m: Option<u32>,
    ) -> Result<IdentityId> {
        let need = |v: Option<u64>, what: &str| {
            v.ok_or_else(|| Error::InvalidParameter(format!("identity {name} needs --{what}")))
        };
        let norm = name.to_ascii_lowercase().replace('-', "_");
        let id =
            match norm.as_str() {
                "l21" | "l21_f_qq2" => IdentityId::L21FQq2,
                "l22" | "l22_f_qq5" => IdentityId::L22FQq5,
                "l23" | "l23_f1_pdissect" => IdentityId::L23F1Dissection { p: need(p, "p")? },
                "l24" | "l24_psi_pdissect" => IdentityId::L24PsiDissection { p: need(p, "p")? },
                "l25" | "l25_septic" => IdentityId::L25Septic,
                "l26" | "l26_quintic" => IdentityId::L26Quintic,
                "l27" | "l27_cubic" => IdentityId::L27Cubic,
                "t7" | "c_t7" => IdentityId::CT7 {
                    r: need(r.map(|v| v as u64), "r")? as usize,
                    m: need(m.map(u64::from), "m")? as u32,
                },
                "v7" | "c_v7" => IdentityId::CV7 {
                    r: need(r.map(|v| v as u64), "r")? as usize,
                    m: need(m.map(u64::from), "m")? as u32,
                },
                "l28" | "l28_fqq2_mod2" => IdentityId::L28FQq2Mod2,
                "euler" | "e_euler_pd_po" => IdentityId::EulerPdPo,
                other => {
                    let special = other.strip_prefix("e_").unwrap_or(other);
                    IdentityId::Special(special.parse().map_err(|_| {
                        Error::InvalidParameter(format!("unknown identity '{name}'"))
                    })?)
                }
            };
        id.validate()?;
        Ok(id)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            IdentityId::L23F1Dissection { p } if p < 5 || !is_prime(p) => Err(
                Error::InvalidParameter(format!("f_1 dissection needs a prime p >= 5, got {p}")),
            ),
            IdentityId::L24PsiDissection { p } if p == 2 || !is_prime(p) => Err(
                Error::InvalidParameter(format!("psi dissection needs an odd prime p, got {p}")),
            ),
            IdentityId::CT7 { r, m } | IdentityId::CV7 { r, m } if r == 0 || m == 0 => {
                Err(Error::InvalidParameter(format!(
                    "binomial congruence needs r, m >= 1, got r={r}, m={m}"
                )))
            }
            _ => Ok(()),
        }
    }

    /// Modulus the two sides are compared at, if the identity is a congruence.
    pub fn modulus(&self) -> Option<u64> {
        match self {
            IdentityId::CT7 { .. } | IdentityId::L28FQq2Mod2 => Some(2),
            IdentityId::CV7 { .. } => Some(4),
            _ => None,
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdentityId::L21FQq2 => f.write_str("L21_f_qq2"),
            IdentityId::L22FQq5 => f.write_str("L22_f_qq5"),
            IdentityId::L23F1Dissection { p } => write!(f, "L23_f1_pdissect(p={p})"),
            IdentityId::L24PsiDissection { p } => write!(f, "L24_psi_pdissect(p={p})"),
            IdentityId::L25Septic => f.write_str("L25_septic"),
            IdentityId::L26Quintic => f.write_str("L26_quintic"),
            IdentityId::L27Cubic => f.write_str("L27_cubic"),
            IdentityId::CT7 { r, m } => write!(f, "C_t7(r={r},m={m})"),
            IdentityId::CV7 { r, m } => write!(f, "C_v7(r={r},m={m})"),
            IdentityId::L28FQq2Mod2 => f.write_str("L28_fqq2_mod2"),
            IdentityId::Special(s) => write!(f, "E_{s}"),
            IdentityId::EulerPdPo => f.write_str("E_euler_pd_po"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lhs,
    Rhs,
}

/// Adds `q^index` to one side, to confirm a check can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Perturbation {
    pub side: Side,
    pub index: usize,
}

/// Both sides of an identity, already reduced when it is a congruence.
#[derive(Debug, Clone)]
pub struct Sides {
    pub lhs: Series,
    pub rhs: Series,
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut b = base as u128 % m128;
    let mut acc = 1u128 % m128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Legendre symbol `(a/p)` by Euler's criterion.
pub fn legendre(a: i64, p: u64) -> Result<i8> {
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidParameter(format!(
            "Legendre symbol needs an odd prime, got {p}"
        )));
    }
    let residue = (a as i128).rem_euclid(p as i128) as u64;
    Ok(match mod_pow(residue, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        v if v == p - 1 => -1,
        v => unreachable!("Euler criterion gave {v} mod {p}"),
    })
}

/// `(p - 1)/6` when `p = 1 (mod 6)`, `(-p - 1)/6` when `p = -1 (mod 6)`.
pub fn dissection_branch(p: u64) -> i64 {
    let p = p as i64;
    if p % 6 == 1 {
        (p - 1) / 6
    } else {
        (-p - 1) / 6
    }
}

fn sign_of_power(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Exponent classes mod `p` of the non-tail terms of a dissection, and the
/// class occupied by the tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DissectionSupport {
    /// `(summation index, exponent mod p)` for every non-tail term.
    pub residues: Vec<(i64, u64)>,
    pub tail_residue: u64,
}

impl DissectionSupport {
    /// First summation index whose term lands in the tail's class.
    pub fn collision(&self) -> Option<(i64, u64)> {
        self.residues
            .iter()
            .copied()
            .find(|&(_, r)| r == self.tail_residue)
    }
}

fn check_f1_prime(p: u64) -> Result<()> {
    IdentityId::L23F1Dissection { p }.validate()
}

fn check_psi_prime(p: u64) -> Result<()> {
    IdentityId::L24PsiDissection { p }.validate()
}

fn f1_dissection_indices(p: u64) -> impl Iterator<Item = i64> {
    let half = (p as i64 - 1) / 2;
    let skip = dissection_branch(p);
    (-half..=half).filter(move |&k| k != skip)
}

pub fn f1_dissection_support(p: u64) -> Result<DissectionSupport> {
    check_f1_prime(p)?;
    let pi = p as i64;
    let residues = f1_dissection_indices(p)
        .map(|k| (k, ((3 * k * k + k) / 2).rem_euclid(pi) as u64))
        .collect();
    Ok(DissectionSupport {
        residues,
        tail_residue: ((p * p - 1) / 24) % p,
    })
}

pub fn psi_dissection_support(p: u64) -> Result<DissectionSupport> {
    check_psi_prime(p)?;
    let residues = (0..=(p as i64 - 3) / 2)
        .map(|m| (m, (((m * m + m) / 2) as u64) % p))
        .collect();
    Ok(DissectionSupport {
        residues,
        tail_residue: ((p * p - 1) / 8) % p,
    })
}

impl Factory {
    /// Right-hand side of the p-dissection of `f_1`.
    pub fn f1_pdissection_rhs(&self, p: u64) -> Result<Series> {
        check_f1_prime(p)?;
        let pi = p as i64;
        let mut acc = Series::zero(self.ring(), self.trunc());
        for k in f1_dissection_indices(p) {
            let x = (3 * pi * pi + (6 * k + 1) * pi) / 2;
            let y = (3 * pi * pi - (6 * k + 1) * pi) / 2;
            let theta = self.theta_sum(ThetaSpec::minus(x as usize, y as usize)?);
            let shift = ((3 * k * k + k) / 2) as usize;
            acc = &acc + &theta.shift(shift).scale(sign_of_power(k));
        }
        let branch = dissection_branch(p);
        let tail = self.f((p * p) as usize)?.shift(((p * p - 1) / 24) as usize);
        Ok(&acc + &tail.scale(sign_of_power(branch)))
    }

    /// Right-hand side of the p-dissection of `psi(q)`.
    pub fn psi_pdissection_rhs(&self, p: u64) -> Result<Series> {
        check_psi_prime(p)?;
        let pi = p as usize;
        let mut acc = Series::zero(self.ring(), self.trunc());
        for m in 0..=(pi - 3) / 2 {
            let x = (pi * pi + (2 * m + 1) * pi) / 2;
            let y = (pi * pi - (2 * m + 1) * pi) / 2;
            let theta = self.theta_sum(ThetaSpec::plus(x, y)?);
            acc = &acc + &theta.shift((m * m + m) / 2);
        }
        let psi = self.special(SpecialTheta::Psi)?.dilate(pi * pi)?;
        Ok(&acc + &psi.shift((pi * pi - 1) / 8))
    }

    /// Expands both sides of an identity.
    pub fn identity_sides(&self, id: IdentityId) -> Result<Sides> {
        id.validate()?;
        let sp = |s| self.special(s);
        let (lhs, rhs) = match id {
            IdentityId::L21FQq2 => (
                self.theta_sum(ThetaSpec::plus(1, 2)?),
                &sp(SpecialTheta::PhiNeg)?.dilate(3)? * &sp(SpecialTheta::ChiNeg)?.invert()?,
            ),
            IdentityId::L22FQq5 => (
                self.theta_sum(ThetaSpec::plus(1, 5)?),
                &sp(SpecialTheta::PsiNeg)?.dilate(3)? * &sp(SpecialTheta::Chi)?,
            ),
            IdentityId::L23F1Dissection { p } => (self.f(1)?, self.f1_pdissection_rhs(p)?),
            IdentityId::L24PsiDissection { p } => {
                (sp(SpecialTheta::Psi)?, self.psi_pdissection_rhs(p)?)
            }
            IdentityId::L25Septic => {
                let (a, b, c) = self.septic_abc()?;
                let (a7, b7, c7) = (a.dilate(7)?, b.dilate(7)?, c.dilate(7)?);
                let inner = &(&(&(&b7 * &c7.invert()?) - &(&a7 * &b7.invert()?).shift(1))
                    - &self.monomial(2, 1))
                    + &(&c7 * &a7.invert()?).shift(5);
                (self.f(1)?, &self.f(49)? * &inner)
            }
            IdentityId::L26Quintic => {
                let r5 = self.rr_quotient()?.dilate(5)?;
                let inner = &(&r5 - &self.monomial(1, 1)) - &r5.invert()?.shift(2);
                (self.f(1)?, &self.f(25)? * &inner)
            }
            IdentityId::L27Cubic => {
                let rhs = &self.cubic_a()?.dilate(3)? - &self.f(9)?.pow(3)?.shift(1).scale(3);
                (self.f(1)?.pow(3)?, rhs)
            }
            IdentityId::CT7 { r, m } => (
                self.f(r)?.pow(2 * i64::from(m))?,
                self.f(2 * r)?.pow(i64::from(m))?,
            ),
            IdentityId::CV7 { r, m } => (
                self.f(r)?.pow(4 * i64::from(m))?,
                self.f(2 * r)?.pow(2 * i64::from(m))?,
            ),
            IdentityId::L28FQq2Mod2 => (self.theta_sum(ThetaSpec::plus(1, 2)?), self.f(1)?),
            IdentityId::Special(s) => (sp(s)?, self.special_definition(s)?),
            IdentityId::EulerPdPo => (
                self.pochhammer(PochhammerSpec::new(Sign::Minus, 1, 1)?),
                self.pochhammer(PochhammerSpec::new(Sign::Plus, 1, 2)?)
                    .invert()?,
            ),
        };
        Ok(match id.modulus() {
            Some(m) if self.ring() == Ring::Exact => Sides {
                lhs: lhs.reduce_mod(m)?,
                rhs: rhs.reduce_mod(m)?,
            },
            _ => Sides { lhs, rhs },
        })
    }
}

fn support_mismatch(id: IdentityId) -> Result<Option<MismatchRecord>> {
    let support = match id {
        IdentityId::L23F1Dissection { p } => f1_dissection_support(p)?,
        IdentityId::L24PsiDissection { p } => psi_dissection_support(p)?,
        _ => return Ok(None),
    };
    Ok(support.collision().map(|(k, r)| MismatchRecord {
        n: k.unsigned_abs(),
        lhs: format!("term k={k} in class {r}"),
        rhs: format!("tail class {}", support.tail_residue),
    }))
}

fn perturb(s: &Series, index: usize) -> Series {
    s + &Series::monomial(s.ring(), s.trunc(), index, 1)
}

/// Expands both sides to `trunc` and compares them exactly (or modulo the
/// identity's modulus).
pub fn verify(id: IdentityId, trunc: usize) -> Result<VerificationReport> {
    verify_inner(id, trunc, None)
}

/// As [`verify`] with one side deliberately perturbed by `+q^index`.
pub fn verify_perturbed(
    id: IdentityId,
    trunc: usize,
    perturbation: Perturbation,
) -> Result<VerificationReport> {
    if perturbation.index > trunc {
        return Err(Error::InvalidParameter(format!(
            "perturbation index {} beyond truncation {trunc}",
            perturbation.index
        )));
    }
    verify_inner(id, trunc, Some(perturbation))
}

fn verify_inner(
    id: IdentityId,
    trunc: usize,
    perturbation: Option<Perturbation>,
) -> Result<VerificationReport> {
    if trunc < MIN_TRUNC {
        return Err(Error::TruncationTooSmall {
            given: trunc,
            minimum: MIN_TRUNC,
        });
    }
    id.validate()?;
    let start = Instant::now();
    let report = VerificationReport::new(id.to_string(), trunc, id.modulus());
    if let Some(m) = support_mismatch(id)? {
        return Ok(report
            .with_note(Some(
                "dissection terms meet the tail's residue class".into(),
            ))
            .conclude(Some(m), true, start.elapsed()));
    }
    let Sides { mut lhs, mut rhs } = Factory::exact(trunc).identity_sides(id)?;
    match perturbation {
        Some(Perturbation {
            side: Side::Lhs,
            index,
        }) => lhs = perturb(&lhs, index),
        Some(Perturbation {
            side: Side::Rhs,
            index,
        }) => rhs = perturb(&rhs, index),
        None => {}
    }
    let mismatch = match lhs.equal_upto(&rhs, trunc)? {
        Comparison::Equal => None,
        Comparison::Differ(m) => Some(record(m.index, &m.lhs, &m.rhs)),
    };
    Ok(report.conclude(mismatch, true, start.elapsed()))
}

fn record(n: usize, lhs: &BigInt, rhs: &BigInt) -> MismatchRecord {
    MismatchRecord {
        n: n as u64,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    }
}
