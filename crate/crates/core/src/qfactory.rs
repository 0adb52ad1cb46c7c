//! Constructors for the named q-series: Pochhammer products, the eta
//! functions `f_k = (q^k; q^k)_inf`, Ramanujan's general theta function
//! `f(a, b)` in sum and product form, and the quotients built from them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{Ring, Series};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    fn pow(self, e: u64) -> i64 {
        match self {
            Sign::Minus if e % 2 == 1 => -1,
            _ => 1,
        }
    }
}

/// `f(sign_a * q^exp_a, sign_b * q^exp_b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ThetaSpec {
    sign_a: Sign,
    exp_a: usize,
    sign_b: Sign,
    exp_b: usize,
}

impl ThetaSpec {
    pub fn new(sign_a: Sign, exp_a: usize, sign_b: Sign, exp_b: usize) -> Result<ThetaSpec> {
        if exp_a + exp_b == 0 {
            return Err(Error::InvalidSpec(
                "theta function needs exp_a + exp_b >= 1".into(),
            ));
        }
        Ok(ThetaSpec {
            sign_a,
            exp_a,
            sign_b,
            exp_b,
        })
    }

    /// `f(q^x, q^y)`.
    pub fn plus(x: usize, y: usize) -> Result<ThetaSpec> {
        ThetaSpec::new(Sign::Plus, x, Sign::Plus, y)
    }

    /// `f(-q^x, -q^y)`.
    pub fn minus(x: usize, y: usize) -> Result<ThetaSpec> {
        ThetaSpec::new(Sign::Minus, x, Sign::Minus, y)
    }

    pub fn sign_a(&self) -> Sign {
        self.sign_a
    }

    pub fn exp_a(&self) -> usize {
        self.exp_a
    }

    pub fn sign_b(&self) -> Sign {
        self.sign_b
    }

    pub fn exp_b(&self) -> usize {
        self.exp_b
    }
}

impl fmt::Display for ThetaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arg = |s: Sign, e: usize| {
            let sign = if s == Sign::Minus { "-" } else { "" };
            match e {
                0 => format!("{sign}1"),
                1 => format!("{sign}q"),
                _ => format!("{sign}q^{e}"),
            }
        };
        write!(
            f,
            "f({}, {})",
            arg(self.sign_a, self.exp_a),
            arg(self.sign_b, self.exp_b)
        )
    }
}

/// `(sign * q^start; q^step)_inf = prod_{n>=0} (1 - sign * q^{start + n*step})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PochhammerSpec {
    sign: Sign,
    start: usize,
    step: usize,
}

impl PochhammerSpec {
    pub fn new(sign: Sign, start: usize, step: usize) -> Result<PochhammerSpec> {
        if step == 0 {
            return Err(Error::InvalidSpec("Pochhammer step must be >= 1".into()));
        }
        if start == 0 && sign == Sign::Plus {
            return Err(Error::InvalidSpec(
                "(1; q^k)_inf is identically zero".into(),
            ));
        }
        Ok(PochhammerSpec { sign, start, step })
    }
}

/// Which reading of the restricted-distinct-parts generating function a
/// coefficient comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `f_2 f_t / (f_1 f(q^s, q^{t-s}))`
    Series,
    /// Pochhammer quotient with both denominator factors applied even when they coincide.
    Squared,
    /// Pochhammer quotient with a coinciding factor applied once; equals the partition count.
    Unsquared,
}

impl Convention {
    pub const ALL: [Convention; 3] = [
        Convention::Series,
        Convention::Squared,
        Convention::Unsquared,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Convention::Series => "series",
            Convention::Squared => "squared",
            Convention::Unsquared => "unsquared",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Convention> {
        match s.to_ascii_lowercase().as_str() {
            "series" => Ok(Convention::Series),
            "squared" => Ok(Convention::Squared),
            "unsquared" | "oracle" => Ok(Convention::Unsquared),
            other => Err(Error::InvalidParameter(format!(
                "unknown convention '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpecialTheta {
    Phi,
    Psi,
    FNeg,
    Chi,
    PhiNeg,
    PsiNeg,
    ChiNeg,
}

impl SpecialTheta {
    pub const ALL: [SpecialTheta; 7] = [
        SpecialTheta::Phi,
        SpecialTheta::Psi,
        SpecialTheta::FNeg,
        SpecialTheta::Chi,
        SpecialTheta::PhiNeg,
        SpecialTheta::PsiNeg,
        SpecialTheta::ChiNeg,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SpecialTheta::Phi => "phi",
            SpecialTheta::Psi => "psi",
            SpecialTheta::FNeg => "f_neg",
            SpecialTheta::Chi => "chi",
            SpecialTheta::PhiNeg => "phi_neg",
            SpecialTheta::PsiNeg => "psi_neg",
            SpecialTheta::ChiNeg => "chi_neg",
        }
    }

    /// Exponents `(k, e)` of the eta quotient `prod f_k^e`.
    pub fn eta_factors(self) -> &'static [(usize, i64)] {
        match self {
            SpecialTheta::Phi => &[(2, 5), (1, -2), (4, -2)],
            SpecialTheta::Psi => &[(2, 2), (1, -1)],
            SpecialTheta::FNeg => &[(1, 1)],
            SpecialTheta::Chi => &[(2, 2), (1, -1), (4, -1)],
            SpecialTheta::PhiNeg => &[(1, 2), (2, -1)],
            SpecialTheta::PsiNeg => &[(1, 1), (4, 1), (2, -1)],
            SpecialTheta::ChiNeg => &[(1, 1), (2, -1)],
        }
    }
}

impl FromStr for SpecialTheta {
    type Err = Error;

    fn from_str(s: &str) -> Result<SpecialTheta> {
        let norm = s.to_ascii_lowercase().replace('-', "_");
        SpecialTheta::ALL
            .into_iter()
            .find(|t| t.name() == norm)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown special function '{s}'")))
    }
}

impl fmt::Display for SpecialTheta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn check_ts(t: u64, s: u64) -> Result<()> {
    if s == 0 || s >= t {
        return Err(Error::InvalidParameter(format!(
            "restricted distinct parts need 1 <= s < t, got t={t}, s={s}"
        )));
    }
    Ok(())
}

fn isqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Builds q-series objects in a fixed ring up to a fixed truncation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Factory {
    ring: Ring,
    trunc: usize,
}

impl Factory {
    pub fn new(ring: Ring, trunc: usize) -> Factory {
        Factory { ring, trunc }
    }

    pub fn exact(trunc: usize) -> Factory {
        Factory::new(Ring::Exact, trunc)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn one(&self) -> Series {
        Series::one(self.ring, self.trunc)
    }

    pub fn monomial(&self, exp: usize, coeff: i64) -> Series {
        Series::monomial(self.ring, self.trunc, exp, coeff)
    }

    /// `prod_{n>=0} (1 + c * base_sign^n * q^{start + n*step})`, step >= 1.
    fn binomial_product(&self, c: i64, start: usize, step: usize, base_sign: Sign) -> Series {
        let mut s = self.one();
        let mut e = start;
        let mut n = 0u64;
        while e <= self.trunc {
            s.mul_binomial_assign(c * base_sign.pow(n), e);
            if e == 0 && s.is_zero() {
                return s;
            }
            e += step;
            n += 1;
        }
        s
    }

    pub fn pochhammer(&self, spec: PochhammerSpec) -> Series {
        self.binomial_product(-spec.sign.value(), spec.start, spec.step, Sign::Plus)
    }

    /// `f_k = prod_{n>=1} (1 - q^{kn})`.
    pub fn f(&self, k: usize) -> Result<Series> {
        if k == 0 {
            return Err(Error::InvalidParameter("f_k needs k >= 1".into()));
        }
        Ok(self.pochhammer(PochhammerSpec::new(Sign::Plus, k, k)?))
    }

    /// `prod_k f_k^{e_k}` for the given `(k, e_k)` pairs.
    pub fn eta_quotient(&self, factors: &[(usize, i64)]) -> Result<Series> {
        let mut num = self.one();
        let mut den = self.one();
        for &(k, e) in factors {
            if e == 0 {
                continue;
            }
            let fk = self.f(k)?.pow(e.abs())?;
            if e > 0 {
                num = &num * &fk;
            } else {
                den = &den * &fk;
            }
        }
        Ok(&num * &den.invert()?)
    }

    /// Bilateral sum `sum_n a^{n(n+1)/2} b^{n(n-1)/2}`.
    pub fn theta_sum(&self, spec: ThetaSpec) -> Series {
        let (x, y) = (spec.exp_a as i64, spec.exp_b as i64);
        let bound = 2 + 2 * isqrt(2 * self.trunc / (spec.exp_a + spec.exp_b)) as i64;
        let mut terms = Vec::new();
        for n in -bound..=bound {
            let e = ((x + y) * n * n + (x - y) * n) / 2;
            if e < 0 || e as usize > self.trunc {
                continue;
            }
            let tri_a = (n * (n + 1) / 2) as u64;
            let tri_b = (n * (n - 1) / 2) as u64;
            terms.push((e as usize, spec.sign_a.pow(tri_a) * spec.sign_b.pow(tri_b)));
        }
        Series::from_terms(self.ring, self.trunc, &terms)
    }

    /// Jacobi triple product `(-a; ab)_inf (-b; ab)_inf (ab; ab)_inf`.
    pub fn theta_product(&self, spec: ThetaSpec) -> Series {
        let step = spec.exp_a + spec.exp_b;
        let ab_sign = if spec.sign_a == spec.sign_b {
            Sign::Plus
        } else {
            Sign::Minus
        };
        let mut s = self.binomial_product(spec.sign_a.value(), spec.exp_a, step, ab_sign);
        let b = self.binomial_product(spec.sign_b.value(), spec.exp_b, step, ab_sign);
        s = &s * &b;
        // (ab; ab)_inf = prod_{n>=1} (1 - ab_sign^n q^{n*step})
        let mut e = step;
        let mut n = 1u64;
        while e <= self.trunc {
            s.mul_binomial_assign(-ab_sign.pow(n), e);
            e += step;
            n += 1;
        }
        s
    }

    /// The named special theta function, built from its eta-quotient form.
    pub fn special(&self, name: SpecialTheta) -> Result<Series> {
        self.eta_quotient(name.eta_factors())
    }

    /// The same function from its sum or product definition.
    pub fn special_definition(&self, name: SpecialTheta) -> Result<Series> {
        Ok(match name {
            SpecialTheta::Phi => self.theta_sum(ThetaSpec::plus(1, 1)?),
            SpecialTheta::Psi => self.theta_sum(ThetaSpec::plus(1, 3)?),
            SpecialTheta::FNeg => self.theta_sum(ThetaSpec::minus(1, 2)?),
            SpecialTheta::Chi => self.pochhammer(PochhammerSpec::new(Sign::Minus, 1, 2)?),
            SpecialTheta::PhiNeg => self.theta_sum(ThetaSpec::minus(1, 1)?),
            SpecialTheta::PsiNeg => self.theta_sum(ThetaSpec::minus(1, 3)?),
            SpecialTheta::ChiNeg => self.pochhammer(PochhammerSpec::new(Sign::Plus, 1, 2)?),
        })
    }

    /// `R(q) = (q^2;q^5)(q^3;q^5) / ((q;q^5)(q^4;q^5))`.
    pub fn rr_quotient(&self) -> Result<Series> {
        let p = |j| PochhammerSpec::new(Sign::Plus, j, 5).map(|s| self.pochhammer(s));
        let num = &p(2)? * &p(3)?;
        let den = &p(1)? * &p(4)?;
        Ok(&num * &den.invert()?)
    }

    /// `(A, B, C) = (f(-q^3,-q^4), f(-q^2,-q^5), f(-q,-q^6))`.
    pub fn septic_abc(&self) -> Result<(Series, Series, Series)> {
        Ok((
            self.theta_product(ThetaSpec::minus(3, 4)?),
            self.theta_product(ThetaSpec::minus(2, 5)?),
            self.theta_product(ThetaSpec::minus(1, 6)?),
        ))
    }

    /// `a(q) = f_2^6 f_3 / (f_1^2 f_6^2) + 3q f_1^2 f_6^6 / (f_2^2 f_3^3)`.
    pub fn cubic_a(&self) -> Result<Series> {
        let first = self.eta_quotient(&[(2, 6), (3, 1), (1, -2), (6, -2)])?;
        let second = self.eta_quotient(&[(1, 2), (6, 6), (2, -2), (3, -3)])?;
        Ok(&first + &second.shift(1).scale(3))
    }

    /// `f_2 f_t / (f_1 f(q^s, q^{t-s}))`.
    pub fn qts_series(&self, t: u64, s: u64) -> Result<Series> {
        check_ts(t, s)?;
        let eta = self.eta_quotient(&[(2, 1), (t as usize, 1), (1, -1)])?;
        let theta = self.theta_sum(ThetaSpec::plus(s as usize, (t - s) as usize)?);
        Ok(&eta * &theta.invert()?)
    }

    /// `(-q;q)_inf / ((-q^s;q^t)_inf (-q^{t-s};q^t)_inf)`. When the two
    /// denominator factors coincide (`t = 2s`), `squared` decides whether the
    /// factor is divided out once or twice.
    pub fn qts_product(&self, t: u64, s: u64, squared: bool) -> Result<Series> {
        check_ts(t, s)?;
        let (t, s) = (t as usize, s as usize);
        let num = self.pochhammer(PochhammerSpec::new(Sign::Minus, 1, 1)?);
        let mut den = self.pochhammer(PochhammerSpec::new(Sign::Minus, s, t)?);
        if t != 2 * s || squared {
            den = &den * &self.pochhammer(PochhammerSpec::new(Sign::Minus, t - s, t)?);
        }
        Ok(&num * &den.invert()?)
    }

    /// Generating function of `Q_t^s` under the given convention, built from
    /// q-products (the unsquared convention uses the single-factor quotient).
    pub fn qts(&self, t: u64, s: u64, convention: Convention) -> Result<Series> {
        match convention {
            Convention::Series => self.qts_series(t, s),
            Convention::Squared => self.qts_product(t, s, true),
            Convention::Unsquared => self.qts_product(t, s, false),
        }
    }
}

pub fn pochhammer(spec: PochhammerSpec, trunc: usize) -> Series {
    Factory::exact(trunc).pochhammer(spec)
}

pub fn euler_f(k: usize, trunc: usize) -> Result<Series> {
    Factory::exact(trunc).f(k)
}

pub fn theta_sum(spec: ThetaSpec, trunc: usize) -> Series {
    Factory::exact(trunc).theta_sum(spec)
}

pub fn theta_product(spec: ThetaSpec, trunc: usize) -> Series {
    Factory::exact(trunc).theta_product(spec)
}

pub fn special(name: SpecialTheta, trunc: usize) -> Result<Series> {
    Factory::exact(trunc).special(name)
}

pub fn rr_quotient(trunc: usize) -> Result<Series> {
    Factory::exact(trunc).rr_quotient()
}

pub fn septic_abc(trunc: usize) -> Result<(Series, Series, Series)> {
    Factory::exact(trunc).septic_abc()
}

pub fn cubic_a(trunc: usize) -> Result<Series> {
    Factory::exact(trunc).cubic_a()
}

pub fn qts_series(t: u64, s: u64, trunc: usize) -> Result<Series> {
    Factory::exact(trunc).qts_series(t, s)
}

pub fn qts_product(t: u64, s: u64, trunc: usize, squared: bool) -> Result<Series> {
    Factory::exact(trunc).qts_product(t, s, squared)
}
