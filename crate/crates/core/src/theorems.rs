//! Congruence claims for `Q_t^s` and their verification against series
//! coefficients or oracle counts.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::identities::{is_prime, legendre};
use crate::oracle::{self, PartitionKind, PartitionSpec};
use crate::qfactory::{Convention, Factory, SpecialTheta};
use crate::report::{ClaimDetail, MismatchRecord, VerificationReport};
use crate::series::{Ring, Series};

/// Default ceiling on the truncation order a single claim may require.
pub const DEFAULT_MAX_TRUNC: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    T31,
    T32,
    T33,
    T34,
    T35a,
    T35b,
    T36a,
    T36b,
    T37a,
    T37b,
    T38,
    T39,
}

impl Family {
    pub const ALL: [Family; 12] = [
        Family::T31,
        Family::T32,
        Family::T33,
        Family::T34,
        Family::T35a,
        Family::T35b,
        Family::T36a,
        Family::T36b,
        Family::T37a,
        Family::T37b,
        Family::T38,
        Family::T39,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::T31 => "T31",
            Family::T32 => "T32",
            Family::T33 => "T33",
            Family::T34 => "T34",
            Family::T35a => "T35a",
            Family::T35b => "T35b",
            Family::T36a => "T36a",
            Family::T36b => "T36b",
            Family::T37a => "T37a",
            Family::T37b => "T37b",
            Family::T38 => "T38",
            Family::T39 => "T39",
        }
    }

    /// Families selected by a name; `T35`, `T36` and `T37` expand to both parts.
    pub fn select(name: &str) -> Result<Vec<Family>> {
        match name.to_ascii_uppercase().as_str() {
            "T35" => Ok(vec![Family::T35a, Family::T35b]),
            "T36" => Ok(vec![Family::T36a, Family::T36b]),
            "T37" => Ok(vec![Family::T37a, Family::T37b]),
            _ => Ok(vec![name.parse()?]),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown theorem family '{s}'")))
    }
}

/// Parameters a family is instantiated with.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct InstanceParams {
    pub alpha: Option<u64>,
    pub p: Option<u64>,
    pub beta: u32,
    /// Use the offsets/indices exactly as typeset instead of the corrected form.
    pub as_printed: bool,
}

impl InstanceParams {
    pub fn alpha(alpha: u64) -> Self {
        InstanceParams {
            alpha: Some(alpha),
            ..Default::default()
        }
    }

    pub fn alpha_p(alpha: u64, p: u64, beta: u32) -> Self {
        InstanceParams {
            alpha: Some(alpha),
            p: Some(p),
            beta,
            as_printed: false,
        }
    }

    pub fn prime(p: u64, beta: u32) -> Self {
        InstanceParams {
            p: Some(p),
            beta,
            ..Default::default()
        }
    }

    pub fn printed(mut self) -> Self {
        self.as_printed = true;
        self
    }
}

/// Parameters recorded on a concrete claim.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ClaimParams {
    pub alpha: Option<u64>,
    pub p: Option<u64>,
    pub beta: Option<u32>,
    pub j: Option<u64>,
    pub i: Option<u64>,
}

impl fmt::Display for ClaimParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(v) = self.alpha {
            parts.push(format!("alpha={v}"));
        }
        if let Some(v) = self.p {
            parts.push(format!("p={v}"));
        }
        if let Some(v) = self.beta {
            parts.push(format!("beta={v}"));
        }
        if let Some(v) = self.j {
            parts.push(format!("j={v}"));
        }
        if let Some(v) = self.i {
            parts.push(format!("i={v}"));
        }
        f.write_str(&parts.join(","))
    }
}

/// The arguments `A n + B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Progression {
    pub a: u64,
    pub b: u64,
}

impl Progression {
    pub fn index(&self, n: u64) -> u64 {
        self.a * n + self.b
    }
}

impl fmt::Display for Progression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (1, 0) => f.write_str("n"),
            (a, 0) => write!(f, "{a}n"),
            (1, b) => write!(f, "n+{b}"),
            (a, b) => write!(f, "{a}n+{b}"),
        }
    }
}

/// What is asserted about `Q(A n + B)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Relation {
    ZeroMod(u64),
    ExactZero,
    /// `Q(A n + B) = p_o(n)`.
    EqualsOddPartitions,
    /// `Q(A n + B) = b_k(n) (mod modulus)`.
    MatchesNonDivisible {
        k: u64,
        modulus: u64,
    },
    /// `sum_n Q(A n + B) q^n = prod f_k^e (mod modulus)`.
    MatchesEtaQuotient {
        factors: Vec<(usize, i64)>,
        label: &'static str,
        modulus: u64,
    },
}

impl Relation {
    pub fn modulus(&self) -> Option<u64> {
        match self {
            Relation::ZeroMod(m) => Some(*m),
            Relation::ExactZero | Relation::EqualsOddPartitions => None,
            Relation::MatchesNonDivisible { modulus, .. }
            | Relation::MatchesEtaQuotient { modulus, .. } => Some(*modulus),
        }
    }

    pub fn ring(&self) -> Ring {
        match self.modulus() {
            Some(m) => Ring::Mod(m),
            None => Ring::Exact,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceClaim {
    pub family: Family,
    pub params: ClaimParams,
    pub spec: PartitionSpec,
    pub progression: Progression,
    pub relation: Relation,
    pub convention: Convention,
    /// Whether a violation fails the run or is only recorded.
    pub gating: bool,
    pub as_printed: bool,
    pub note: Option<String>,
}

impl CongruenceClaim {
    pub fn id(&self) -> String {
        let mut inner = self.params.to_string();
        if self.as_printed {
            if !inner.is_empty() {
                inner.push(',');
            }
            inner.push_str("as-printed");
        }
        if inner.is_empty() {
            self.family.to_string()
        } else {
            format!("{}({inner})", self.family)
        }
    }

    pub fn statement(&self) -> String {
        let lhs = format!("{}({})", self.spec, self.progression);
        match &self.relation {
            Relation::ZeroMod(m) => format!("{lhs} = 0 (mod {m})"),
            Relation::ExactZero => format!("{lhs} = 0"),
            Relation::EqualsOddPartitions => format!("{lhs} = p_o(n)"),
            Relation::MatchesNonDivisible { k, modulus } => {
                format!("{lhs} = b_{k}(n) (mod {modulus})")
            }
            Relation::MatchesEtaQuotient { label, modulus, .. } => {
                format!("sum {lhs} q^n = {label} (mod {modulus})")
            }
        }
    }

    pub fn required_trunc(&self, n_max: usize) -> Option<usize> {
        usize::try_from(self.progression.index(n_max as u64)).ok()
    }

    pub fn with_convention(mut self, convention: Convention, gating: bool) -> Self {
        self.convention = convention;
        self.gating = gating;
        self
    }

    pub fn detail(&self, n_max: usize) -> ClaimDetail {
        ClaimDetail {
            family: self.family.to_string(),
            t: self.spec.t(),
            s: self.spec.s(),
            a: self.progression.a,
            b: self.progression.b,
            n_max: n_max as u64,
        }
    }
}

fn not_applicable(family: Family, reason: impl Into<String>) -> Error {
    Error::NotApplicable {
        family: family.to_string(),
        reason: reason.into(),
    }
}

fn require(family: Family, value: Option<u64>, what: &str) -> Result<u64> {
    value.ok_or_else(|| not_applicable(family, format!("parameter {what} is required")))
}

fn require_prime(family: Family, params: &InstanceParams) -> Result<u64> {
    let p = require(family, params.p, "p")?;
    if p < 5 || !is_prime(p) {
        return Err(not_applicable(
            family,
            format!("p must be a prime >= 5, got {p}"),
        ));
    }
    Ok(p)
}

fn require_nonresidue(family: Family, a: i64, p: u64) -> Result<()> {
    let symbol = legendre(a, p)?;
    if symbol != -1 {
        return Err(not_applicable(
            family,
            format!("Legendre symbol ({a}/{p}) = {symbol}, need -1"),
        ));
    }
    Ok(())
}

fn checked_pow(family: Family, p: u64, e: u32) -> Result<u64> {
    p.checked_pow(e)
        .ok_or_else(|| not_applicable(family, format!("{p}^{e} overflows 64 bits")))
}

/// `numerator * (p^{2e} - 1) / denominator`, asserting integrality.
fn offset(family: Family, numerator: u64, p: u64, two_e: u32, denominator: u64) -> Result<u64> {
    let total = numerator
        .checked_mul(checked_pow(family, p, two_e)? - 1)
        .ok_or_else(|| not_applicable(family, "offset overflows 64 bits"))?;
    if total % denominator != 0 {
        return Err(not_applicable(
            family,
            format!("offset {numerator}({p}^{two_e} - 1)/{denominator} is not an integer"),
        ));
    }
    Ok(total / denominator)
}

struct ClaimBuilder {
    family: Family,
    spec: PartitionSpec,
    params: ClaimParams,
    as_printed: bool,
    note: Option<String>,
}

impl ClaimBuilder {
    fn new(family: Family, t: u64, s: u64) -> Result<ClaimBuilder> {
        Ok(ClaimBuilder {
            family,
            spec: PartitionSpec::new(t, s)?,
            params: ClaimParams::default(),
            as_printed: false,
            note: None,
        })
    }

    fn claim(&self, params: ClaimParams, a: u64, b: u64, relation: Relation) -> CongruenceClaim {
        CongruenceClaim {
            family: self.family,
            params,
            spec: self.spec,
            progression: Progression { a, b },
            relation,
            convention: Convention::Series,
            gating: true,
            as_printed: self.as_printed,
            note: self.note.clone(),
        }
    }

    fn single(&self, a: u64, b: u64, relation: Relation) -> Vec<CongruenceClaim> {
        vec![self.claim(self.params, a, b, relation)]
    }
}

/// Concrete claims of a theorem family for the given parameters, under the
/// series convention.
pub fn instantiate(family: Family, params: &InstanceParams) -> Result<Vec<CongruenceClaim>> {
    let beta = params.beta;
    match family {
        Family::T31 | Family::T32 => {
            let alpha = require(family, params.alpha, "alpha")?;
            if alpha == 0 {
                return Err(not_applicable(family, "alpha must be >= 1"));
            }
            let p = require_prime(family, params)?;
            let (t, s, symbol, weight) = if family == Family::T31 {
                (2 * alpha, alpha, -2 * alpha as i64, 2 * alpha + 1)
            } else {
                (4 * alpha, alpha, -(alpha as i64), alpha + 1)
            };
            require_nonresidue(family, symbol, p)?;
            let mut b = ClaimBuilder::new(family, t, s)?;
            b.params = ClaimParams {
                alpha: Some(alpha),
                p: Some(p),
                beta: Some(beta),
                ..Default::default()
            };
            let step = checked_pow(family, p, 2 * beta + 2)?;
            let inner = checked_pow(family, p, 2 * beta + 1)?;
            let off = offset(family, weight, p, 2 * beta + 2, 24)?;
            Ok((1..p)
                .map(|j| {
                    let cp = ClaimParams {
                        j: Some(j),
                        ..b.params
                    };
                    b.claim(cp, step, inner * j + off, Relation::ZeroMod(2))
                })
                .collect())
        }
        Family::T33 | Family::T34 => {
            let alpha = require(family, params.alpha, "alpha")?;
            let (base, indices): (u64, &[u64]) = if family == Family::T33 {
                (5, &[3, 4])
            } else {
                (7, &[3, 4, 6])
            };
            if alpha < 2 {
                return Err(not_applicable(
                    family,
                    format!("alpha = {alpha} gives f(q^{base}, q^0), outside |ab| < 1; only alpha >= 2 is checked"),
                ));
            }
            let mut b = ClaimBuilder::new(family, base * alpha, base)?;
            b.params = ClaimParams {
                alpha: Some(alpha),
                ..Default::default()
            };
            if family == Family::T34 {
                b.note = Some("printed index list \"i=,3,4,6\" read as i in {3,4,6}".into());
            }
            Ok(indices
                .iter()
                .map(|&i| {
                    let cp = ClaimParams {
                        i: Some(i),
                        ..b.params
                    };
                    b.claim(cp, base, i, Relation::ZeroMod(2))
                })
                .collect())
        }
        Family::T35a => {
            let b = ClaimBuilder::new(family, 3, 2)?;
            Ok([1, 2]
                .into_iter()
                .map(|i| {
                    let cp = ClaimParams {
                        i: Some(i),
                        ..Default::default()
                    };
                    b.claim(cp, 3, i, Relation::ExactZero)
                })
                .collect())
        }
        Family::T35b => {
            let mut b = ClaimBuilder::new(family, 3, 2)?;
            b.as_printed = params.as_printed;
            b.note = Some(if params.as_printed {
                "as printed: Q_3^2(2n) = p_o(n)".into()
            } else {
                "corrected indexing Q_3^2(3n) = p_o(n); the printed form uses 2n".into()
            });
            let a = if params.as_printed { 2 } else { 3 };
            Ok(b.single(a, 0, Relation::EqualsOddPartitions))
        }
        Family::T36a | Family::T36b => {
            let p = require_prime(family, params)?;
            require_nonresidue(family, -6, p)?;
            let mut b = ClaimBuilder::new(family, 4, 2)?;
            b.as_printed = params.as_printed;
            b.params = ClaimParams {
                p: Some(p),
                beta: Some(beta),
                ..Default::default()
            };
            // the typeset statement uses 5(p^2k - 1)/12; the offset that makes
            // the exponents line up is 5(p^2k - 1)/24
            let denominator = if params.as_printed { 12 } else { 24 };
            b.note = Some(format!("offset 5(p^(2k)-1)/{denominator}"));
            if family == Family::T36a {
                let step = checked_pow(family, p, 2 * beta)?;
                let off = offset(family, 5, p, 2 * beta, denominator)?;
                Ok(b.single(
                    step,
                    off,
                    Relation::MatchesEtaQuotient {
                        factors: vec![(2, 3), (1, -1)],
                        label: "psi(q) f_2",
                        modulus: 4,
                    },
                ))
            } else {
                let step = checked_pow(family, p, 2 * beta + 2)?;
                let inner = checked_pow(family, p, 2 * beta + 1)?;
                let off = offset(family, 5, p, 2 * beta + 2, denominator)?;
                Ok((1..p)
                    .map(|j| {
                        let cp = ClaimParams {
                            j: Some(j),
                            ..b.params
                        };
                        b.claim(cp, step, inner * j + off, Relation::ZeroMod(4))
                    })
                    .collect())
            }
        }
        Family::T37a => Ok(ClaimBuilder::new(family, 4, 3)?.single(2, 1, Relation::ExactZero)),
        Family::T37b => {
            Ok(ClaimBuilder::new(family, 4, 3)?.single(2, 0, Relation::EqualsOddPartitions))
        }
        Family::T38 => Ok(ClaimBuilder::new(family, 6, 2)?.single(
            1,
            0,
            Relation::MatchesNonDivisible { k: 6, modulus: 2 },
        )),
        Family::T39 => Ok(ClaimBuilder::new(family, 12, 2)?.single(3, 2, Relation::ZeroMod(2))),
    }
}

/// Coefficients of `sum Q_t^s(n) q^n` up to `trunc` under a convention.
/// The unsquared convention reads the partition oracle.
pub fn q_values(
    spec: PartitionSpec,
    convention: Convention,
    trunc: usize,
    ring: Ring,
) -> Result<Series> {
    match convention {
        Convention::Series | Convention::Squared => {
            Factory::new(ring, trunc).qts(spec.t(), spec.s(), convention)
        }
        Convention::Unsquared => match ring {
            Ring::Exact => Ok(Series::new(
                oracle::table_qts(spec, trunc).into_iter().map(BigInt::from),
                trunc,
                None,
            )?),
            Ring::Mod(m) => Ok(Series::new(
                oracle::table_qts_mod(spec, trunc, m)?,
                trunc,
                Some(m),
            )?),
        },
    }
}

fn residue_string(values: &Series, idx: usize) -> String {
    values.coeff(idx).to_string()
}

/// Checks `claim` for `n = 0..=n_max` against a precomputed value table.
fn check_against(
    claim: &CongruenceClaim,
    n_max: usize,
    values: &Series,
) -> Result<Option<MismatchRecord>> {
    let idx = |n: usize| claim.progression.index(n as u64) as usize;
    let miss = |n: usize, lhs: String, rhs: String| {
        Some(MismatchRecord {
            n: n as u64,
            lhs,
            rhs,
        })
    };
    match &claim.relation {
        Relation::ZeroMod(m) => {
            for n in 0..=n_max {
                if values.residue(idx(n), *m) != 0 {
                    return Ok(miss(n, residue_string(values, idx(n)), "0".into()));
                }
            }
        }
        Relation::ExactZero => {
            for n in 0..=n_max {
                if !values.is_zero_at(idx(n)) {
                    return Ok(miss(n, residue_string(values, idx(n)), "0".into()));
                }
            }
        }
        Relation::EqualsOddPartitions => {
            let po = oracle::table_po(n_max);
            for (n, expected) in po.iter().enumerate() {
                let got = values.coeff(idx(n));
                if got != BigInt::from(expected.clone()) {
                    return Ok(miss(n, got.to_string(), expected.to_string()));
                }
            }
        }
        Relation::MatchesNonDivisible { k, modulus } => {
            let expected = PartitionKind::NonDivisible(*k).table_mod(n_max, *modulus)?;
            for (n, &e) in expected.iter().enumerate() {
                let got = values.residue(idx(n), *modulus);
                if got != e {
                    return Ok(miss(n, got.to_string(), e.to_string()));
                }
            }
        }
        Relation::MatchesEtaQuotient {
            factors, modulus, ..
        } => {
            let target = Factory::new(Ring::Mod(*modulus), n_max).eta_quotient(factors)?;
            for n in 0..=n_max {
                let got = values.residue(idx(n), *modulus);
                let e = target.residue(n, *modulus);
                if got != e {
                    return Ok(miss(n, got.to_string(), e.to_string()));
                }
            }
        }
    }
    Ok(None)
}

fn claim_report(claim: &CongruenceClaim, n_max: usize) -> VerificationReport {
    let trunc = claim.required_trunc(n_max).unwrap_or(usize::MAX);
    VerificationReport::new(claim.id(), trunc, claim.relation.modulus())
        .with_convention(claim.convention)
        .with_note(claim.note.clone())
        .with_claim(claim.detail(n_max))
}

fn exceeds(claim: &CongruenceClaim, n_max: usize, ceiling: usize) -> Option<String> {
    match claim.required_trunc(n_max) {
        Some(t) if t <= ceiling => None,
        Some(t) => Some(format!("required truncation {t} exceeds ceiling {ceiling}")),
        None => Some("required truncation overflows".into()),
    }
}

/// Verifies one claim for `n = 0..=n_max`. Claims needing more than
/// `ceiling` coefficients are reported as skipped.
pub fn verify_claim(
    claim: &CongruenceClaim,
    n_max: usize,
    ceiling: usize,
) -> Result<VerificationReport> {
    let report = claim_report(claim, n_max);
    if let Some(reason) = exceeds(claim, n_max, ceiling) {
        return Ok(report.skipped(reason));
    }
    let start = Instant::now();
    let trunc = claim.required_trunc(n_max).expect("checked above");
    let values = q_values(claim.spec, claim.convention, trunc, claim.relation.ring())?;
    let mismatch = check_against(claim, n_max, &values)?;
    Ok(report.conclude(mismatch, claim.gating, start.elapsed()))
}

type TableKey = (PartitionSpec, Convention, Ring);

/// Verifies many claims, expanding each distinct `(spec, convention, ring)`
/// table once at the largest truncation any claim needs and sharing it
/// read-only. Reports come back in input order.
pub fn verify_claims(
    jobs: &[(CongruenceClaim, usize)],
    ceiling: usize,
) -> Result<Vec<VerificationReport>> {
    let mut needed: HashMap<TableKey, usize> = HashMap::new();
    for (claim, n_max) in jobs {
        if exceeds(claim, *n_max, ceiling).is_none() {
            let key = (claim.spec, claim.convention, claim.relation.ring());
            let t = claim.required_trunc(*n_max).expect("within ceiling");
            let slot = needed.entry(key).or_insert(0);
            *slot = (*slot).max(t);
        }
    }
    let mut keys: Vec<(TableKey, usize)> = needed.into_iter().collect();
    keys.sort_by_key(|&(key, trunc)| (std::cmp::Reverse(trunc), key));
    let tables: HashMap<TableKey, Arc<Series>> = keys
        .par_iter()
        .map(|&(key, trunc)| q_values(key.0, key.1, trunc, key.2).map(|s| (key, Arc::new(s))))
        .collect::<Result<_>>()?;
    jobs.par_iter()
        .map(|(claim, n_max)| {
            let report = claim_report(claim, *n_max);
            if let Some(reason) = exceeds(claim, *n_max, ceiling) {
                return Ok(report.skipped(reason));
            }
            let start = Instant::now();
            let values = &tables[&(claim.spec, claim.convention, claim.relation.ring())];
            let mismatch = check_against(claim, *n_max, values)?;
            Ok(report.conclude(mismatch, claim.gating, start.elapsed()))
        })
        .collect()
}

/// Whole-series congruence behind a family at `beta = 0`:
/// `Q_{2a}^a = f_1 f_{2a} (mod 2)`, `Q_{4a}^a = f_1 f_a (mod 2)`,
/// `Q_4^2 = psi(q) f_2 (mod 4)`.
pub fn verify_base_congruence(
    family: Family,
    params: &InstanceParams,
    n_max: usize,
    ceiling: usize,
) -> Result<VerificationReport> {
    if params.beta != 0 {
        return Err(Error::InvalidParameter(
            "base congruences are the beta = 0 form".into(),
        ));
    }
    let (t, s, modulus, label) = match family {
        Family::T31 | Family::T32 => {
            let alpha = require(family, params.alpha, "alpha")?;
            if alpha == 0 {
                return Err(not_applicable(family, "alpha must be >= 1"));
            }
            if family == Family::T31 {
                (2 * alpha, alpha, 2, format!("f_1 f_{}", 2 * alpha))
            } else {
                (4 * alpha, alpha, 2, format!("f_1 f_{alpha}"))
            }
        }
        Family::T36a | Family::T36b => (4, 2, 4, "psi(q) f_2".to_string()),
        other => {
            return Err(not_applicable(other, "no base congruence for this family"));
        }
    };
    let id = match params.alpha {
        Some(a) if matches!(family, Family::T31 | Family::T32) => {
            format!("{family}-base(alpha={a})")
        }
        _ => "T36-base".to_string(),
    };
    let report = VerificationReport::new(id, n_max, Some(modulus))
        .with_convention(Convention::Series)
        .with_note(Some(format!("Q_{t}^{s} = {label} (mod {modulus})")))
        .with_claim(ClaimDetail {
            family: family.to_string(),
            t,
            s,
            a: 1,
            b: 0,
            n_max: n_max as u64,
        });
    if n_max > ceiling {
        return Ok(report.skipped(format!(
            "required truncation {n_max} exceeds ceiling {ceiling}"
        )));
    }
    let start = Instant::now();
    let q = Factory::new(Ring::Mod(modulus), n_max);
    let lhs = q.qts_series(t, s)?;
    let rhs = match family {
        Family::T31 => &q.f(1)? * &q.f(t as usize)?,
        Family::T32 => &q.f(1)? * &q.f(s as usize)?,
        _ => &q.special(SpecialTheta::Psi)? * &q.f(2)?,
    };
    let mismatch = lhs
        .equal_upto(&rhs, n_max)?
        .mismatch()
        .map(|m| MismatchRecord {
            n: m.index as u64,
            lhs: m.lhs.to_string(),
            rhs: m.rhs.to_string(),
        });
    Ok(report.conclude(mismatch, true, start.elapsed()))
}
