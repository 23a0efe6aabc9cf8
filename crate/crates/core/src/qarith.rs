//! Laurent polynomials in `v = q^{1/2}` with rational coefficients, and
//! rational functions in `v` for the linear solves of the PBW module.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// An element of `Q[v, v^{-1}]`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(rat(1), 0)
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: Rational, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { terms }
    }

    /// `v^e`.
    pub fn v_pow(e: i64) -> Self {
        Self::monomial(rat(1), e)
    }

    /// `q^e = v^{2e}`.
    pub fn q_pow(e: i64) -> Self {
        Self::v_pow(2 * e)
    }

    /// Build from `(v-exponent, integer coefficient)` pairs.
    pub fn from_pairs(pairs: &[(i64, i64)]) -> Self {
        let mut p = Self::zero();
        for &(e, c) in pairs {
            p.add_term(e, &rat(c));
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &Rational)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn coeff(&self, exp: i64) -> Rational {
        self.terms.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `Some((c, e))` if this is a single term `c v^e`.
    pub fn as_monomial(&self) -> Option<(&Rational, i64)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(&e, c)| (c, e))
        } else {
            None
        }
    }

    pub fn add_term(&mut self, exp: i64, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(Rational::zero);
        if entry.is_integer() && c.is_integer() {
            *entry = Rational::from_integer(entry.numer() + c.numer());
        } else {
            *entry += c;
        }
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    /// Multiply by `v^e`.
    pub fn shift(&self, e: i64) -> Self {
        if e == 0 {
            return self.clone();
        }
        Self { terms: self.terms.iter().map(|(&k, c)| (k + e, c.clone())).collect() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(&k, x)| (k, x * c)).collect() }
    }

    /// Bar involution `v -> v^{-1}`.
    pub fn bar(&self) -> Self {
        Self { terms: self.terms.iter().map(|(&k, c)| (-k, c.clone())).collect() }
    }

    /// Specialization `v -> 1`.
    pub fn eval_q1(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, c| acc + c)
    }

    /// True iff every `v`-exponent is even, i.e. the element lies in `Q[q, q^{-1}]`.
    pub fn is_q_integral(&self) -> bool {
        self.terms.keys().all(|e| e % 2 == 0)
    }

    /// True iff all coefficients are integers.
    pub fn has_integer_coeffs(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Coefficients as a dense vector in ascending `v` powers, starting at `min_exp`.
    fn dense(&self) -> (i64, Vec<Rational>) {
        match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => {
                let mut v = vec![Rational::zero(); (hi - lo + 1) as usize];
                for (&e, c) in &self.terms {
                    v[(e - lo) as usize] = c.clone();
                }
                (lo, v)
            }
            _ => (0, Vec::new()),
        }
    }

    fn from_dense(lo: i64, coeffs: Vec<Rational>) -> Self {
        let mut terms = BTreeMap::new();
        for (i, c) in coeffs.into_iter().enumerate() {
            if !c.is_zero() {
                terms.insert(lo + i as i64, c);
            }
        }
        Self { terms }
    }

    /// Exact division in `Q[v^{±1}]`. Returns `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some((c, e)) = d.as_monomial() {
            let inv = c.recip();
            return Some(Self { terms: self.terms.iter().map(|(&k, x)| (k - e, x * &inv)).collect() });
        }
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Division with remainder after normalizing both sides to polynomials.
    ///
    /// The quotient and remainder are Laurent polynomials with
    /// `self = q * d + r` and `r` of lower `v`-span than `d`.
    pub fn div_rem(&self, d: &LaurentPoly) -> (LaurentPoly, LaurentPoly) {
        assert!(!d.is_zero(), "division by zero Laurent polynomial");
        let (nlo, mut num) = self.dense();
        let (dlo, den) = d.dense();
        if num.len() < den.len() {
            return (Self::zero(), self.clone());
        }
        let dl = den.len();
        let lead_inv = den[dl - 1].recip();
        let mut quot = vec![Rational::zero(); num.len() - dl + 1];
        for i in (0..quot.len()).rev() {
            let c = &num[i + dl - 1] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in den.iter().enumerate() {
                num[i + j] -= &c * dc;
            }
            quot[i] = c;
        }
        (Self::from_dense(nlo - dlo, quot), Self::from_dense(nlo, num))
    }

    /// Monic gcd, normalized so its lowest exponent is 0.
    pub fn gcd(&self, other: &LaurentPoly) -> LaurentPoly {
        let norm = |p: &LaurentPoly| match p.min_exp() {
            Some(e) => p.shift(-e),
            None => p.clone(),
        };
        let mut a = norm(self);
        let mut b = norm(other);
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = norm(&r);
        }
        match a.max_exp() {
            None => Self::zero(),
            Some(e) => {
                let lead = a.coeff(e).recip();
                a.scale(&lead)
            }
        }
    }

    /// Human-readable form in `q` when possible, otherwise in `v`.
    pub fn pretty(&self) -> String {
        format!("{}", self)
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let in_q = self.is_q_integral();
        let mut first = true;
        for (&e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let (var, pow) = if in_q { ("q", e / 2) } else { ("v", e) };
            let mono = match pow {
                0 => String::new(),
                1 => var.to_string(),
                p => format!("{}^{}", var, p),
            };
            if mono.is_empty() {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "{}", mono)?;
            } else {
                write!(f, "{}*{}", mag, mono)?;
            }
        }
        Ok(())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect() }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.has_integer_coeffs() && rhs.has_integer_coeffs() {
            // skip the gcd normalization of rational products
            let mut acc: BTreeMap<i64, BigInt> = BTreeMap::new();
            for (&a, ca) in &self.terms {
                for (&b, cb) in &rhs.terms {
                    *acc.entry(a + b).or_default() += ca.numer() * cb.numer();
                }
            }
            let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(e, c)| (e, Rational::from_integer(c))).collect();
            return LaurentPoly { terms };
        }
        let mut out = LaurentPoly::zero();
        for (&a, ca) in &self.terms {
            for (&b, cb) in &rhs.terms {
                out.add_term(a + b, &(ca * cb));
            }
        }
        out
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (&e, c) in &rhs.terms {
            self.add_term(e, c);
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (&e, c) in &rhs.terms {
            self.add_term(e, &-c);
        }
    }
}

/// The arithmetic operations exposed for `LaurentPoly` as a single entry point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LaurentOp {
    Add,
    Mul,
    Neg,
    Scale,
}

/// Dispatch one ring operation. `Neg` uses only `x`; `Scale` multiplies `x`
/// by the constant term of `y`.
pub fn laurent_arith(op: LaurentOp, x: &LaurentPoly, y: &LaurentPoly) -> Result<LaurentPoly> {
    Ok(match op {
        LaurentOp::Add => x + y,
        LaurentOp::Mul => x * y,
        LaurentOp::Neg => -x,
        LaurentOp::Scale => match y.as_monomial() {
            Some((c, 0)) => x.scale(c),
            _ if y.is_zero() => LaurentPoly::zero(),
            _ => return Err(Error::Input(format!("scale factor {} is not a constant", y))),
        },
    })
}

/// Result of [`bar_eval`].
#[derive(Clone, Debug, PartialEq)]
pub enum BarEval {
    Poly(LaurentPoly),
    Value(Rational),
    Flag(bool),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BarMode {
    Bar,
    EvalQ1,
    QIntegralTest,
}

pub fn bar_eval(p: &LaurentPoly, mode: BarMode) -> BarEval {
    match mode {
        BarMode::Bar => BarEval::Poly(p.bar()),
        BarMode::EvalQ1 => BarEval::Value(p.eval_q1()),
        BarMode::QIntegralTest => BarEval::Flag(p.is_q_integral()),
    }
}

// Wire format: {"exponent": "p/q"} with exponents ascending.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            m.serialize_entry(&e.to_string(), &c.to_string())?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw: BTreeMap<String, String> = BTreeMap::deserialize(d)?;
        let mut p = LaurentPoly::zero();
        for (k, v) in raw {
            let e: i64 = k.parse().map_err(|_| D::Error::custom(format!("bad exponent {:?}", k)))?;
            let c: Rational = v.parse().map_err(|_| D::Error::custom(format!("bad coefficient {:?}", v)))?;
            p.add_term(e, &c);
        }
        Ok(p)
    }
}

/// A rational function `num / den` in `v`, kept with `gcd(num, den) = 1` and
/// `den` monic with lowest exponent 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RatFunc {
    pub fn zero() -> Self {
        Self { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Self { num: p, den: LaurentPoly::one() }
    }

    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Linear("zero denominator".into()));
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let mut n = num.div_exact(&g).expect("gcd divides numerator");
        let mut d = den.div_exact(&g).expect("gcd divides denominator");
        // normalize the denominator: lowest exponent 0, leading coefficient 1
        let lo = d.min_exp().unwrap_or(0);
        d = d.shift(-lo);
        n = n.shift(-lo);
        let lead = d.coeff(d.max_exp().unwrap_or(0)).recip();
        Ok(Self { num: n.scale(&lead), den: d.scale(&lead) })
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    /// The Laurent polynomial this equals, if its denominator is trivial.
    pub fn as_laurent(&self) -> Option<LaurentPoly> {
        self.den.is_one().then(|| self.num.clone())
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::new(&self.num + &o.num, self.den.clone()).expect("nonzero den");
        }
        RatFunc::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den).expect("nonzero den")
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFunc {
        Self { num: -&self.num, den: self.den.clone() }
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &o.num, &self.den * &o.den).expect("nonzero den")
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        if o.is_zero() {
            return Err(Error::Linear("division by zero".into()));
        }
        RatFunc::new(&self.num * &o.den, &self.den * &o.num)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
