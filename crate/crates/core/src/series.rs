//! Truncated formal power series in one variable `q`.
//!
//! A [`Series`] stores the coefficients of `q^0 ..= q^trunc` either as exact
//! arbitrary-precision integers or as canonical residues modulo a fixed
//! integer `m >= 2`. Every operation returns a fresh value; binary operations
//! work at the smaller of the two truncation orders.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),
    #[error("modulus mismatch: {left:?} vs {right:?}")]
    ModulusMismatch {
        left: Option<u64>,
        right: Option<u64>,
    },
    #[error("constant term {0} is not invertible")]
    NotInvertible(String),
    #[error("index {index} exceeds truncation order {trunc}")]
    BeyondTruncation { index: usize, trunc: usize },
    #[error("series is already reduced modulo {0}")]
    AlreadyModular(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, SeriesError>;

/// Coefficient ring of a series: exact integers or `Z/mZ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    Exact,
    Mod(u64),
}

impl Ring {
    pub fn new(modulus: Option<u64>) -> Result<Ring> {
        match modulus {
            None => Ok(Ring::Exact),
            Some(m) if m >= 2 => Ok(Ring::Mod(m)),
            Some(m) => Err(SeriesError::InvalidModulus(m)),
        }
    }

    pub fn modulus(self) -> Option<u64> {
        match self {
            Ring::Exact => None,
            Ring::Mod(m) => Some(m),
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Exact => f.write_str("Z"),
            Ring::Mod(m) => write!(f, "Z/{m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    Exact(Vec<BigInt>),
    Modular { modulus: u64, coeffs: Vec<u64> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    repr: Repr,
}

/// First disagreement found by [`Series::equal_upto`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub index: usize,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Comparison {
    Equal,
    Differ(Mismatch),
}

impl Comparison {
    pub fn is_equal(&self) -> bool {
        matches!(self, Comparison::Equal)
    }

    pub fn mismatch(&self) -> Option<&Mismatch> {
        match self {
            Comparison::Equal => None,
            Comparison::Differ(m) => Some(m),
        }
    }
}

fn residue_of(value: &BigInt, m: u64) -> u64 {
    value
        .mod_floor(&BigInt::from(m))
        .to_u64()
        .expect("residue fits the modulus")
}

fn residue_of_i64(value: i64, m: u64) -> u64 {
    (value as i128).rem_euclid(m as i128) as u64
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let g = (a as i128).extended_gcd(&(m as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m as i128) as u64)
}

/// Moduli up to this bound allow `u64` accumulation of whole convolutions.
const SMALL_MODULUS: u64 = 1 << 16;

fn nonzero_count<T: PartialEq + Default>(v: &[T]) -> usize {
    let zero = T::default();
    v.iter().filter(|c| **c != zero).count()
}

fn exact_mul(a: &[BigInt], b: &[BigInt], trunc: usize) -> Vec<BigInt> {
    let (sparse, dense) = if nonzero_count(&a[..=trunc]) <= nonzero_count(&b[..=trunc]) {
        (a, b)
    } else {
        (b, a)
    };
    let mut out = vec![BigInt::zero(); trunc + 1];
    let minus_one = -BigInt::one();
    for (i, ai) in sparse.iter().enumerate().take(trunc + 1) {
        if ai.is_zero() {
            continue;
        }
        let tail = &dense[..=trunc - i];
        if ai.is_one() {
            for (slot, bj) in out[i..].iter_mut().zip(tail) {
                if !bj.is_zero() {
                    *slot += bj;
                }
            }
        } else if *ai == minus_one {
            for (slot, bj) in out[i..].iter_mut().zip(tail) {
                if !bj.is_zero() {
                    *slot -= bj;
                }
            }
        } else {
            for (slot, bj) in out[i..].iter_mut().zip(tail) {
                if !bj.is_zero() {
                    *slot += ai * bj;
                }
            }
        }
    }
    out
}

fn mod_mul(a: &[u64], b: &[u64], trunc: usize, m: u64) -> Vec<u64> {
    let (sparse, dense) = if nonzero_count(&a[..=trunc]) <= nonzero_count(&b[..=trunc]) {
        (a, b)
    } else {
        (b, a)
    };
    if m <= SMALL_MODULUS {
        let mut acc = vec![0u64; trunc + 1];
        for (i, &ai) in sparse.iter().enumerate().take(trunc + 1) {
            if ai == 0 {
                continue;
            }
            for (slot, &bj) in acc[i..].iter_mut().zip(&dense[..=trunc - i]) {
                *slot += ai * bj;
            }
        }
        acc.into_iter().map(|v| v % m).collect()
    } else {
        let wide = m as u128;
        let reduce_each = m > u32::MAX as u64;
        let mut acc = vec![0u128; trunc + 1];
        for (i, &ai) in sparse.iter().enumerate().take(trunc + 1) {
            if ai == 0 {
                continue;
            }
            for (slot, &bj) in acc[i..].iter_mut().zip(&dense[..=trunc - i]) {
                let term = ai as u128 * bj as u128;
                *slot += if reduce_each { term % wide } else { term };
            }
        }
        acc.into_iter().map(|v| (v % wide) as u64).collect()
    }
}

impl Series {
    /// Builds a series from its leading coefficients. Missing coefficients
    /// up to `trunc` are zero; coefficients beyond `trunc` are dropped.
    pub fn new<I, T>(coeffs: I, trunc: usize, modulus: Option<u64>) -> Result<Series>
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let ring = Ring::new(modulus)?;
        let mut exact: Vec<BigInt> = coeffs.into_iter().take(trunc + 1).map(Into::into).collect();
        exact.resize(trunc + 1, BigInt::zero());
        let series = Series {
            repr: Repr::Exact(exact),
        };
        match ring {
            Ring::Exact => Ok(series),
            Ring::Mod(m) => series.reduce_mod(m),
        }
    }

    pub fn zero(ring: Ring, trunc: usize) -> Series {
        let repr = match ring {
            Ring::Exact => Repr::Exact(vec![BigInt::zero(); trunc + 1]),
            Ring::Mod(modulus) => Repr::Modular {
                modulus,
                coeffs: vec![0; trunc + 1],
            },
        };
        Series { repr }
    }

    pub fn one(ring: Ring, trunc: usize) -> Series {
        Series::monomial(ring, trunc, 0, 1)
    }

    /// `coeff * q^exp`, or zero when `exp > trunc`.
    pub fn monomial(ring: Ring, trunc: usize, exp: usize, coeff: i64) -> Series {
        Series::from_terms(ring, trunc, &[(exp, coeff)])
    }

    /// Sums the given `(exponent, coefficient)` terms, ignoring exponents past `trunc`.
    pub fn from_terms(ring: Ring, trunc: usize, terms: &[(usize, i64)]) -> Series {
        let mut s = Series::zero(ring, trunc);
        for &(exp, c) in terms {
            if exp <= trunc {
                s.add_at(exp, c);
            }
        }
        s
    }

    pub fn trunc(&self) -> usize {
        self.len() - 1
    }

    fn len(&self) -> usize {
        match &self.repr {
            Repr::Exact(c) => c.len(),
            Repr::Modular { coeffs, .. } => coeffs.len(),
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        self.ring().modulus()
    }

    pub fn ring(&self) -> Ring {
        match &self.repr {
            Repr::Exact(_) => Ring::Exact,
            Repr::Modular { modulus, .. } => Ring::Mod(*modulus),
        }
    }

    /// Coefficient of `q^n`.
    ///
    /// Panics if `n > trunc`; use [`Series::get`] for a checked read.
    pub fn coeff(&self, n: usize) -> BigInt {
        self.get(n)
            .unwrap_or_else(|| panic!("index {n} beyond truncation order {}", self.trunc()))
    }

    pub fn get(&self, n: usize) -> Option<BigInt> {
        match &self.repr {
            Repr::Exact(c) => c.get(n).cloned(),
            Repr::Modular { coeffs, .. } => coeffs.get(n).map(|&v| BigInt::from(v)),
        }
    }

    /// Coefficient of `q^n` reduced into `[0, m)`.
    pub fn residue(&self, n: usize, m: u64) -> u64 {
        match &self.repr {
            Repr::Exact(c) => residue_of(&c[n], m),
            Repr::Modular { modulus, coeffs } => {
                debug_assert!(
                    modulus % m == 0,
                    "residue modulo {m} of a series mod {modulus}"
                );
                coeffs[n] % m
            }
        }
    }

    pub fn is_zero_at(&self, n: usize) -> bool {
        match &self.repr {
            Repr::Exact(c) => c[n].is_zero(),
            Repr::Modular { coeffs, .. } => coeffs[n] == 0,
        }
    }

    pub fn coeffs(&self) -> Vec<BigInt> {
        (0..=self.trunc()).map(|n| self.coeff(n)).collect()
    }

    pub fn is_zero(&self) -> bool {
        (0..=self.trunc()).all(|n| self.is_zero_at(n))
    }

    /// Nonzero terms as `(exponent, coefficient)` pairs in increasing order.
    pub fn terms(&self) -> Vec<(usize, BigInt)> {
        (0..=self.trunc())
            .filter(|&n| !self.is_zero_at(n))
            .map(|n| (n, self.coeff(n)))
            .collect()
    }

    fn add_at(&mut self, n: usize, c: i64) {
        match &mut self.repr {
            Repr::Exact(v) => v[n] += c,
            Repr::Modular { modulus, coeffs } => {
                let m = *modulus;
                coeffs[n] = ((coeffs[n] as u128 + residue_of_i64(c, m) as u128) % m as u128) as u64;
            }
        }
    }

    fn check_ring(&self, other: &Series) -> Result<Ring> {
        let (l, r) = (self.ring(), other.ring());
        if l != r {
            return Err(SeriesError::ModulusMismatch {
                left: l.modulus(),
                right: r.modulus(),
            });
        }
        Ok(l)
    }

    fn zip_with(
        &self,
        other: &Series,
        exact: impl Fn(&BigInt, &BigInt) -> BigInt,
        modular: impl Fn(u64, u64, u64) -> u64,
    ) -> Result<Series> {
        self.check_ring(other)?;
        let trunc = self.trunc().min(other.trunc());
        let repr = match (&self.repr, &other.repr) {
            (Repr::Exact(a), Repr::Exact(b)) => Repr::Exact(
                a[..=trunc]
                    .iter()
                    .zip(b)
                    .map(|(x, y)| exact(x, y))
                    .collect(),
            ),
            (Repr::Modular { modulus, coeffs: a }, Repr::Modular { coeffs: b, .. }) => {
                let m = *modulus;
                Repr::Modular {
                    modulus: m,
                    coeffs: a[..=trunc]
                        .iter()
                        .zip(b)
                        .map(|(&x, &y)| modular(x, y, m))
                        .collect(),
                }
            }
            _ => unreachable!("rings checked above"),
        };
        Ok(Series { repr })
    }

    pub fn checked_add(&self, other: &Series) -> Result<Series> {
        self.zip_with(
            other,
            |x, y| x + y,
            |x, y, m| ((x as u128 + y as u128) % m as u128) as u64,
        )
    }

    pub fn checked_sub(&self, other: &Series) -> Result<Series> {
        self.zip_with(
            other,
            |x, y| x - y,
            |x, y, m| ((x as u128 + (m - y) as u128) % m as u128) as u64,
        )
    }

    pub fn neg(&self) -> Series {
        let repr = match &self.repr {
            Repr::Exact(c) => Repr::Exact(c.iter().map(|x| -x).collect()),
            Repr::Modular { modulus, coeffs } => Repr::Modular {
                modulus: *modulus,
                coeffs: coeffs.iter().map(|&x| (modulus - x) % modulus).collect(),
            },
        };
        Series { repr }
    }

    /// Cauchy product truncated at the smaller truncation order.
    pub fn checked_mul(&self, other: &Series) -> Result<Series> {
        self.check_ring(other)?;
        let trunc = self.trunc().min(other.trunc());
        let repr = match (&self.repr, &other.repr) {
            (Repr::Exact(a), Repr::Exact(b)) => Repr::Exact(exact_mul(a, b, trunc)),
            (Repr::Modular { modulus, coeffs: a }, Repr::Modular { coeffs: b, .. }) => {
                Repr::Modular {
                    modulus: *modulus,
                    coeffs: mod_mul(a, b, trunc, *modulus),
                }
            }
            _ => unreachable!("rings checked above"),
        };
        Ok(Series { repr })
    }

    pub fn scale(&self, c: i64) -> Series {
        let repr = match &self.repr {
            Repr::Exact(v) => Repr::Exact(v.iter().map(|x| x * c).collect()),
            Repr::Modular { modulus, coeffs } => {
                let m = *modulus as u128;
                let k = residue_of_i64(c, *modulus) as u128;
                Repr::Modular {
                    modulus: *modulus,
                    coeffs: coeffs.iter().map(|&x| (x as u128 * k % m) as u64).collect(),
                }
            }
        };
        Series { repr }
    }

    /// Multiplicative inverse up to the truncation order, via
    /// `b_0 = a_0^{-1}`, `b_n = -a_0^{-1} * sum_{i=1..n} a_i b_{n-i}`.
    pub fn invert(&self) -> Result<Series> {
        let trunc = self.trunc();
        let repr = match &self.repr {
            Repr::Exact(a) => {
                let a0 = &a[0];
                if !a0.abs().is_one() {
                    return Err(SeriesError::NotInvertible(a0.to_string()));
                }
                // a0 = ±1 is its own inverse
                let negate = a0.is_positive();
                let nz: Vec<(usize, &BigInt)> = a
                    .iter()
                    .enumerate()
                    .skip(1)
                    .filter(|(_, c)| !c.is_zero())
                    .collect();
                let mut b: Vec<BigInt> = Vec::with_capacity(trunc + 1);
                b.push(a0.clone());
                for n in 1..=trunc {
                    let mut acc = BigInt::zero();
                    for &(i, ai) in nz.iter().take_while(|(i, _)| *i <= n) {
                        let prev = &b[n - i];
                        if !prev.is_zero() {
                            acc += ai * prev;
                        }
                    }
                    b.push(if negate { -acc } else { acc });
                }
                Repr::Exact(b)
            }
            Repr::Modular { modulus, coeffs: a } => {
                let m = *modulus;
                let inv0 = mod_inverse(a[0], m)
                    .ok_or_else(|| SeriesError::NotInvertible(format!("{} mod {m}", a[0])))?;
                let factor = ((m - inv0) % m) as u128;
                let wide = m as u128;
                let reduce_each = m > u32::MAX as u64;
                let nz: Vec<(usize, u64)> = a
                    .iter()
                    .copied()
                    .enumerate()
                    .skip(1)
                    .filter(|&(_, c)| c != 0)
                    .collect();
                let mut b: Vec<u64> = Vec::with_capacity(trunc + 1);
                b.push(inv0);
                for n in 1..=trunc {
                    let mut acc: u128 = 0;
                    for &(i, ai) in nz.iter().take_while(|(i, _)| *i <= n) {
                        let term = ai as u128 * b[n - i] as u128;
                        acc += if reduce_each { term % wide } else { term };
                    }
                    b.push(((acc % wide) * factor % wide) as u64);
                }
                Repr::Modular {
                    modulus: m,
                    coeffs: b,
                }
            }
        };
        Ok(Series { repr })
    }

    /// Integer power by square-and-multiply; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<Series> {
        let base = if e < 0 { self.invert()? } else { self.clone() };
        let mut exp = e.unsigned_abs();
        let mut result = Series::one(self.ring(), self.trunc());
        let mut power = base;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.checked_mul(&power)?;
            }
            exp >>= 1;
            if exp > 0 {
                power = power.checked_mul(&power)?;
            }
        }
        Ok(result)
    }

    /// Substitutes `q -> q^k`, keeping the truncation order.
    pub fn dilate(&self, k: usize) -> Result<Series> {
        if k == 0 {
            return Err(SeriesError::InvalidArgument(
                "dilation factor must be >= 1".into(),
            ));
        }
        let trunc = self.trunc();
        let mut out = Series::zero(self.ring(), trunc);
        for n in 0..=trunc / k {
            out.set_from(n * k, self, n);
        }
        Ok(out)
    }

    fn set_from(&mut self, dst: usize, src: &Series, idx: usize) {
        match (&mut self.repr, &src.repr) {
            (Repr::Exact(d), Repr::Exact(s)) => d[dst] = s[idx].clone(),
            (Repr::Modular { coeffs: d, .. }, Repr::Modular { coeffs: s, .. }) => d[dst] = s[idx],
            _ => unreachable!("same ring by construction"),
        }
    }

    /// The series `sum_n a_{mn+r} q^n`, truncated at `floor((trunc - r) / m)`.
    pub fn extract_progression(&self, m: usize, r: usize) -> Result<Series> {
        if m == 0 || r >= m {
            return Err(SeriesError::InvalidArgument(format!(
                "progression needs 1 <= m and 0 <= r < m, got m={m}, r={r}"
            )));
        }
        let trunc = self.trunc();
        if r > trunc {
            return Err(SeriesError::BeyondTruncation { index: r, trunc });
        }
        let new_trunc = (trunc - r) / m;
        let mut out = Series::zero(self.ring(), new_trunc);
        for n in 0..=new_trunc {
            out.set_from(n, self, m * n + r);
        }
        Ok(out)
    }

    /// Multiplies by `q^k`, dropping what falls past the truncation order.
    pub fn shift(&self, k: usize) -> Series {
        let trunc = self.trunc();
        let mut out = Series::zero(self.ring(), trunc);
        for n in k..=trunc {
            out.set_from(n, self, n - k);
        }
        out
    }

    pub fn truncate(&self, n: usize) -> Result<Series> {
        let trunc = self.trunc();
        if n > trunc {
            return Err(SeriesError::BeyondTruncation { index: n, trunc });
        }
        let repr = match &self.repr {
            Repr::Exact(c) => Repr::Exact(c[..=n].to_vec()),
            Repr::Modular { modulus, coeffs } => Repr::Modular {
                modulus: *modulus,
                coeffs: coeffs[..=n].to_vec(),
            },
        };
        Ok(Series { repr })
    }

    /// Canonical reduction of an exact series into `Z/mZ`.
    pub fn reduce_mod(&self, m: u64) -> Result<Series> {
        if m < 2 {
            return Err(SeriesError::InvalidModulus(m));
        }
        match &self.repr {
            Repr::Exact(c) => Ok(Series {
                repr: Repr::Modular {
                    modulus: m,
                    coeffs: c.iter().map(|x| residue_of(x, m)).collect(),
                },
            }),
            Repr::Modular { modulus, .. } => Err(SeriesError::AlreadyModular(*modulus)),
        }
    }

    /// Compares coefficients `0..=n`, reporting the first disagreement.
    pub fn equal_upto(&self, other: &Series, n: usize) -> Result<Comparison> {
        self.check_ring(other)?;
        for s in [self, other] {
            if n > s.trunc() {
                return Err(SeriesError::BeyondTruncation {
                    index: n,
                    trunc: s.trunc(),
                });
            }
        }
        let first = match (&self.repr, &other.repr) {
            (Repr::Exact(a), Repr::Exact(b)) => (0..=n).find(|&i| a[i] != b[i]),
            (Repr::Modular { coeffs: a, .. }, Repr::Modular { coeffs: b, .. }) => {
                (0..=n).find(|&i| a[i] != b[i])
            }
            _ => unreachable!("rings checked above"),
        };
        Ok(match first {
            None => Comparison::Equal,
            Some(index) => Comparison::Differ(Mismatch {
                index,
                lhs: self.coeff(index),
                rhs: other.coeff(index),
            }),
        })
    }

    /// In-place multiplication by `(1 + c q^e)`.
    pub(crate) fn mul_binomial_assign(&mut self, c: i64, e: usize) {
        let trunc = self.trunc();
        if e == 0 {
            *self = self.scale(1 + c);
            return;
        }
        if e > trunc {
            return;
        }
        match &mut self.repr {
            Repr::Exact(v) => {
                for i in (e..=trunc).rev() {
                    if v[i - e].is_zero() {
                        continue;
                    }
                    let (lo, hi) = v.split_at_mut(i);
                    match c {
                        1 => hi[0] += &lo[i - e],
                        -1 => hi[0] -= &lo[i - e],
                        _ => hi[0] += &lo[i - e] * c,
                    }
                }
            }
            Repr::Modular { modulus, coeffs } => {
                let m = *modulus as u128;
                let k = residue_of_i64(c, *modulus) as u128;
                for i in (e..=trunc).rev() {
                    let prev = coeffs[i - e] as u128;
                    if prev != 0 {
                        coeffs[i] = ((coeffs[i] as u128 + k * prev) % m) as u64;
                    }
                }
            }
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.terms() {
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c) };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (n, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("q")?,
                (1, false) => write!(f, "{mag}q")?,
                (_, true) => write!(f, "q^{n}")?,
                (_, false) => write!(f, "{mag}q^{n}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.trunc() + 1)?;
        if let Some(m) = self.modulus() {
            write!(f, " (mod {m})")?;
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        /// Panics when the operands live in different rings; use the
        /// `checked_*` method to handle that case.
        impl std::ops::$trait<&Series> for &Series {
            type Output = Series;
            fn $method(self, rhs: &Series) -> Series {
                self.$checked(rhs)
                    .expect("series operands must share a modulus")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl std::ops::Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(c: &[i64], trunc: usize) -> Series {
        Series::new(c.iter().copied(), trunc, None).unwrap()
    }

    fn ints(s: &Series) -> Vec<i64> {
        s.coeffs().iter().map(|c| c.to_i64().unwrap()).collect()
    }

    /// Straight Pochhammer expansion of `prod_{n>=1} (1 - q^n)`, independent of qfactory.
    fn euler_product(trunc: usize) -> Vec<BigInt> {
        let mut c = vec![BigInt::zero(); trunc + 1];
        c[0] = BigInt::one();
        for e in 1..=trunc {
            for i in (e..=trunc).rev() {
                let prev = c[i - e].clone();
                c[i] -= prev;
            }
        }
        c
    }

    #[test]
    fn make_pads_and_reduces() {
        assert_eq!(ints(&exact(&[1], 4)), vec![1, 0, 0, 0, 0]);
        let s = Series::new([1, 7], 2, Some(5)).unwrap();
        assert_eq!(ints(&s), vec![1, 2, 0]);
        assert_eq!(s.modulus(), Some(5));
        let p = exact(&[1, 1, 2, 3, 5, 7], 5);
        assert_eq!(p.coeff(5), BigInt::from(7));
        assert_eq!(exact(&[1, 2, 3], 1).trunc(), 1);
    }

    #[test]
    fn make_rejects_small_modulus() {
        assert_eq!(
            Series::new([1], 3, Some(1)),
            Err(SeriesError::InvalidModulus(1))
        );
        assert_eq!(
            Series::new([1], 3, Some(0)),
            Err(SeriesError::InvalidModulus(0))
        );
    }

    #[test]
    fn add_sub_neg() {
        let a = exact(&[1, 1], 3);
        let b = exact(&[1, -1], 3);
        assert_eq!(ints(&(&a + &b)), vec![2, 0, 0, 0]);
        assert!((&a + &a.neg()).is_zero());
        assert_eq!(ints(&(&a - &b)), vec![0, 2, 0, 0]);
        let short = exact(&[5], 1);
        assert_eq!((&a + &short).trunc(), 1);
    }

    #[test]
    fn modulus_mismatch_is_an_error() {
        let a = exact(&[1, 1], 3);
        let b = a.reduce_mod(2).unwrap();
        assert!(matches!(
            a.checked_add(&b),
            Err(SeriesError::ModulusMismatch { .. })
        ));
        assert!(matches!(
            a.checked_mul(&b),
            Err(SeriesError::ModulusMismatch { .. })
        ));
        let c = a.reduce_mod(3).unwrap();
        assert!(b.checked_sub(&c).is_err());
    }

    #[test]
    fn cauchy_products() {
        let a = exact(&[1, 1], 4);
        assert_eq!(ints(&(&a * &a)), vec![1, 2, 1, 0, 0]);
        let geo = exact(&[1; 11], 10);
        let one_minus = exact(&[1, -1], 10);
        assert_eq!(ints(&(&one_minus * &geo)), {
            let mut v = vec![0; 11];
            v[0] = 1;
            v
        });
        let f1 = Series::new(euler_product(40), 40, None).unwrap();
        let partitions = f1.invert().unwrap();
        assert!((&f1 * &partitions)
            .equal_upto(&Series::one(Ring::Exact, 40), 40)
            .unwrap()
            .is_equal());
    }

    #[test]
    fn inversion() {
        let one_minus = exact(&[1, -1], 8);
        assert_eq!(ints(&one_minus.invert().unwrap()), vec![1; 9]);
        let f1 = Series::new(euler_product(10), 10, None).unwrap();
        assert_eq!(f1.invert().unwrap().coeff(5), BigInt::from(7));
        let tri = exact(&[1, 1, 1], 12);
        assert_eq!(tri.invert().unwrap().invert().unwrap(), tri);
        let neg = exact(&[-1, 2, 3], 6);
        let prod = &neg * &neg.invert().unwrap();
        assert_eq!(prod, Series::one(Ring::Exact, 6));
    }

    #[test]
    fn inversion_rejects_non_units() {
        assert!(matches!(
            exact(&[2, 1], 4).invert(),
            Err(SeriesError::NotInvertible(_))
        ));
        assert!(matches!(
            exact(&[0, 1], 4).invert(),
            Err(SeriesError::NotInvertible(_))
        ));
        let s = Series::new([2, 1], 4, Some(4)).unwrap();
        assert!(s.invert().is_err());
        let s = Series::new([2, 1], 6, Some(5)).unwrap();
        let inv = s.invert().unwrap();
        assert_eq!(&s * &inv, Series::one(Ring::Mod(5), 6));
    }

    #[test]
    fn powers() {
        let a = exact(&[1, 1], 5);
        assert_eq!(ints(&a.pow(2).unwrap()), vec![1, 2, 1, 0, 0, 0]);
        assert_eq!(a.pow(0).unwrap(), Series::one(Ring::Exact, 5));
        let f1 = Series::new(euler_product(30), 30, None).unwrap();
        assert_eq!(f1.pow(-1).unwrap(), f1.invert().unwrap());
        assert_eq!(f1.pow(-3).unwrap(), f1.pow(3).unwrap().invert().unwrap());
        assert!(exact(&[3], 2).pow(-1).is_err());
    }

    #[test]
    fn euler_cube_is_jacobi_sum() {
        // Oracle: f1^3 = sum_{n>=0} (-1)^n (2n+1) q^{n(n+1)/2}
        let n_max = 50;
        let f1 = Series::new(euler_product(n_max), n_max, None).unwrap();
        let cube = &(&f1 * &f1) * &f1;
        let mut expected = vec![0i64; n_max + 1];
        let mut n = 0usize;
        while n * (n + 1) / 2 <= n_max {
            let sign = if n.is_multiple_of(2) { 1 } else { -1 };
            expected[n * (n + 1) / 2] = sign * (2 * n as i64 + 1);
            n += 1;
        }
        assert_eq!(ints(&f1.pow(3).unwrap()), expected);
        assert_eq!(ints(&cube), expected);
    }

    #[test]
    fn dilation_and_extraction() {
        let a = exact(&[1, 1], 6);
        assert_eq!(ints(&a.dilate(3).unwrap()), vec![1, 0, 0, 1, 0, 0, 0]);
        assert!(a.dilate(0).is_err());
        let s = exact(&[3, -1, 4, 1, -5, 9, 2, -6], 7);
        let d = s.dilate(3).unwrap();
        assert_eq!(d.extract_progression(3, 0).unwrap(), s.truncate(2).unwrap());
        assert!(d.extract_progression(3, 1).unwrap().is_zero());
        let geo = exact(&[1; 21], 20);
        assert_eq!(geo.extract_progression(2, 0).unwrap(), exact(&[1; 11], 10));
        assert_eq!(geo.extract_progression(3, 2).unwrap().trunc(), 6);
        assert!(geo.extract_progression(3, 3).is_err());
        assert!(geo.extract_progression(0, 0).is_err());
    }

    #[test]
    fn dilated_f1_is_f5() {
        let n_max = 50;
        let f1 = Series::new(euler_product(10), n_max, None).unwrap();
        let mut f5 = vec![BigInt::zero(); n_max + 1];
        for (n, c) in euler_product(10).into_iter().enumerate() {
            f5[5 * n] = c;
        }
        // the 10-term prefix covers every index <= 50 after dilation by 5
        let dil = f1.dilate(5).unwrap();
        assert_eq!(dil.coeffs(), f5);
    }

    #[test]
    fn reduction() {
        let s = exact(&[1, 2, 3], 2);
        assert_eq!(ints(&s.reduce_mod(2).unwrap()), vec![1, 0, 1]);
        assert_eq!(
            ints(&exact(&[-1, -7], 1).reduce_mod(5).unwrap()),
            vec![4, 3]
        );
        assert_eq!(s.reduce_mod(1), Err(SeriesError::InvalidModulus(1)));
        let r = s.reduce_mod(2).unwrap();
        assert_eq!(r.reduce_mod(2), Err(SeriesError::AlreadyModular(2)));
    }

    #[test]
    fn binomial_congruences_on_f1() {
        let n = 200;
        let f1 = Series::new(euler_product(n), n, None).unwrap();
        let f2 = f1.dilate(2).unwrap();
        let lhs = f1.pow(2).unwrap().reduce_mod(2).unwrap();
        assert!(lhs
            .equal_upto(&f2.reduce_mod(2).unwrap(), n)
            .unwrap()
            .is_equal());
        let lhs = f1.pow(4).unwrap().reduce_mod(4).unwrap();
        let rhs = f2.pow(2).unwrap().reduce_mod(4).unwrap();
        assert!(lhs.equal_upto(&rhs, n).unwrap().is_equal());
    }

    #[test]
    fn comparisons() {
        let s = exact(&[1, 2, 3], 5);
        assert!(s.equal_upto(&s, 5).unwrap().is_equal());
        let a = exact(&[1, 1], 1);
        let b = exact(&[1, -1], 1);
        let cmp = a.equal_upto(&b, 1).unwrap();
        assert_eq!(
            cmp.mismatch(),
            Some(&Mismatch {
                index: 1,
                lhs: BigInt::from(1),
                rhs: BigInt::from(-1)
            })
        );
        assert!(matches!(
            s.equal_upto(&a, 2),
            Err(SeriesError::BeyondTruncation { .. })
        ));
    }

    #[test]
    fn partition_numbers_beyond_machine_words() {
        let n = 2000;
        let p = Series::new(euler_product(n), n, None)
            .unwrap()
            .invert()
            .unwrap();
        assert!(p.coeff(2000).to_u64().is_none());
        assert_eq!(
            p.coeff(2000).to_string(),
            "4720819175619413888601432406799959512200344166"
        );
        assert_eq!(
            p.invert().unwrap(),
            Series::new(euler_product(n), n, None).unwrap()
        );
    }

    #[test]
    fn shift_scale_display() {
        let s = exact(&[1, -1, 0, 2], 3);
        assert_eq!(ints(&s.shift(2)), vec![0, 0, 1, -1]);
        assert_eq!(ints(&s.scale(-3)), vec![-3, 3, 0, -6]);
        assert_eq!(s.to_string(), "1 - q + 2q^3 + O(q^4)");
        assert_eq!(
            s.reduce_mod(3).unwrap().to_string(),
            "1 + 2q + 2q^3 + O(q^4) (mod 3)"
        );
    }

    #[test]
    fn binomial_assign_matches_mul() {
        let s = exact(&[1, 3, -2, 5, 0, 7], 5);
        for (c, e) in [(1, 1), (-1, 2), (3, 3), (-1, 7), (1, 0)] {
            let mut t = s.clone();
            t.mul_binomial_assign(c, e);
            let f = Series::from_terms(Ring::Exact, 5, &[(0, 1), (e, c)]);
            assert_eq!(t, &s * &f, "c={c} e={e}");
            let mut tm = s.reduce_mod(7).unwrap();
            tm.mul_binomial_assign(c, e);
            assert_eq!(tm, (&s * &f).reduce_mod(7).unwrap());
        }
    }
}
