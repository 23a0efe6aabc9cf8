//! Based quantum tori `T(L)` with the normalized monomial basis `X^a`.
//!
//! Coefficients live in `Q[v^{±1}]`, `v = q^{1/2}`. A monomial `X^a` stands for
//! `q^{1/2 sum_{i>j} a_i a_j lambda_ij} X_1^{a_1} ... X_r^{a_r}`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::qarith::{LaurentPoly, Rational};
use crate::rootsys::RootVector;

/// The data of a based quantum torus: `X_i X_j = q^{lambda_ij} X_j X_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusFrame {
    pub lambda: Vec<Vec<i64>>,
    pub degrees: Vec<RootVector>,
    pub sigma_exponents: Vec<i64>,
}

impl TorusFrame {
    pub fn new(lambda: Vec<Vec<i64>>, degrees: Vec<RootVector>, sigma_exponents: Vec<i64>) -> Result<Self> {
        let r = lambda.len();
        if lambda.iter().any(|row| row.len() != r) {
            return Err(Error::Input("lambda is not square".into()));
        }
        for i in 0..r {
            for j in 0..r {
                if lambda[i][j] != -lambda[j][i] {
                    return Err(Error::Input(format!("lambda is not skew-symmetric at ({}, {})", i + 1, j + 1)));
                }
            }
        }
        if degrees.len() != r || sigma_exponents.len() != r {
            return Err(Error::Input("frame data has inconsistent lengths".into()));
        }
        if let Some(k) = degrees.iter().position(|d| !d.in_q_plus()) {
            return Err(Error::Input(format!("degree of generator {} is not in Q_+", k + 1)));
        }
        Ok(Self { lambda, degrees, sigma_exponents })
    }

    /// A frame with trivial grading and sigma data, for pure arithmetic.
    pub fn plain(lambda: Vec<Vec<i64>>) -> Result<Self> {
        let r = lambda.len();
        Self::new(lambda, vec![RootVector::zero(0); r], vec![0; r])
    }

    pub fn rank(&self) -> usize {
        self.lambda.len()
    }

    pub fn degree_of(&self, a: &[i64]) -> RootVector {
        let n = self.degrees.first().map_or(0, RootVector::len);
        let mut out = RootVector::zero(n);
        for (k, &ak) in a.iter().enumerate() {
            if ak != 0 {
                out += &(ak * &self.degrees[k]);
            }
        }
        out
    }

    /// `v`-exponent `sum_{i>j} a_i a_j lambda_ij` relating `X^a` to the ordered product.
    pub fn normalization(&self, a: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..a.len() {
            if a[i] == 0 {
                continue;
            }
            for j in 0..i {
                s += a[i] * a[j] * self.lambda[i][j];
            }
        }
        s
    }
}

/// `X^a X^b = v^e X^{a+b}`; returns `(e, a + b)`.
pub fn mono_mul(a: &[i64], b: &[i64], frame: &TorusFrame) -> (i64, Vec<i64>) {
    let mut e = 0;
    for i in 0..a.len() {
        for j in 0..i {
            let l = frame.lambda[i][j];
            if l != 0 {
                e += (a[i] * b[j] - b[i] * a[j]) * l;
            }
        }
    }
    (e, a.iter().zip(b).map(|(x, y)| x + y).collect())
}

/// A finite combination of normalized monomials of a quantum torus.
#[derive(Clone)]
pub struct TorusElement {
    frame: Arc<TorusFrame>,
    terms: BTreeMap<Vec<i64>, LaurentPoly>,
}

impl PartialEq for TorusElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.frame, &other.frame) || self.frame == other.frame) && self.terms == other.terms
    }
}

impl Eq for TorusElement {}

impl TorusElement {
    pub fn zero(frame: &Arc<TorusFrame>) -> Self {
        Self { frame: frame.clone(), terms: BTreeMap::new() }
    }

    pub fn one(frame: &Arc<TorusFrame>) -> Self {
        Self::scalar(frame, LaurentPoly::one())
    }

    pub fn scalar(frame: &Arc<TorusFrame>, c: LaurentPoly) -> Self {
        Self::monomial(frame, vec![0; frame.rank()], c)
    }

    pub fn monomial(frame: &Arc<TorusFrame>, a: Vec<i64>, c: LaurentPoly) -> Self {
        assert_eq!(a.len(), frame.rank(), "exponent vector has wrong length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(a, c);
        }
        Self { frame: frame.clone(), terms }
    }

    /// The generator `X_k`, `k` 1-based.
    pub fn generator(frame: &Arc<TorusFrame>, k: usize) -> Self {
        let mut a = vec![0; frame.rank()];
        a[k - 1] = 1;
        Self::monomial(frame, a, LaurentPoly::one())
    }

    /// The ordered product `X_1^{a_1} ... X_r^{a_r}`.
    pub fn ordered_monomial(frame: &Arc<TorusFrame>, a: Vec<i64>) -> Self {
        let e = -frame.normalization(&a);
        Self::monomial(frame, a, LaurentPoly::v_pow(e))
    }

    pub fn frame(&self) -> &Arc<TorusFrame> {
        &self.frame
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, a: &[i64]) -> LaurentPoly {
        self.terms.get(a).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, a: Vec<i64>, c: LaurentPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(a) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_frame(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.frame, &other.frame) || self.frame == other.frame {
            Ok(())
        } else {
            Err(Error::FrameMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_frame(other)?;
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&LaurentPoly::constant(crate::qarith::rat(-1)))
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = Self::zero(&self.frame);
        if c.is_zero() {
            return out;
        }
        for (a, x) in &self.terms {
            out.add_term(a.clone(), x * c);
        }
        out
    }

    /// Multiply by `q^e`.
    pub fn q_shift(&self, e: i64) -> Self {
        Self { frame: self.frame.clone(), terms: self.terms.iter().map(|(a, c)| (a.clone(), c.shift(2 * e))).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_frame(other)?;
        let mut out = Self::zero(&self.frame);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let (e, s) = mono_mul(a, b, &self.frame);
                out.add_term(s, (ca * cb).shift(e));
            }
        }
        Ok(out)
    }

    /// `self^n` for `n >= 0`.
    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(&self.frame);
        for _ in 0..n {
            out = out.mul(self).expect("same frame");
        }
        out
    }

    /// Inverse of a single-term element with monomial coefficient.
    pub fn inverse_monomial(&self) -> Result<Self> {
        let (a, c) = match self.terms.iter().next() {
            Some(t) if self.terms.len() == 1 => t,
            _ => return Err(Error::Invariant("only monomials are invertible".into())),
        };
        let (cc, ce) = c.as_monomial().ok_or_else(|| Error::Invariant("coefficient is not a unit".into()))?;
        let neg: Vec<i64> = a.iter().map(|x| -x).collect();
        // X^a X^{-a} = X^0
        Ok(Self::monomial(&self.frame, neg, LaurentPoly::monomial(cc.recip(), -ce)))
    }

    /// Leading term in lex order on exponent vectors.
    pub fn leading(&self) -> Option<(&Vec<i64>, &LaurentPoly)> {
        self.terms.iter().next_back()
    }

    fn exponent_box(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        let r = self.frame.rank();
        let mut it = self.terms.keys();
        let first = it.next()?;
        let (mut lo, mut hi) = (first.clone(), first.clone());
        for a in it {
            for i in 0..r {
                lo[i] = lo[i].min(a[i]);
                hi[i] = hi[i].max(a[i]);
            }
        }
        Some((lo, hi))
    }

    /// Solve `z * d = self` for `z` in the torus.
    pub fn right_divide_exact(&self, d: &Self) -> Result<Self> {
        self.check_frame(d)?;
        let (dlead, dcoef) = match d.leading() {
            Some((a, c)) => (a.clone(), c.clone()),
            None => return Err(Error::Input("division by zero".into())),
        };
        let mut z = Self::zero(&self.frame);
        let (plo, phi) = match self.exponent_box() {
            Some(b) => b,
            None => return Ok(z),
        };
        let (dlo, dhi) = d.exponent_box().expect("nonzero divisor");
        // every exponent of a quotient lies in this box: coordinate extremes add under products
        let zlo: Vec<i64> = plo.iter().zip(&dlo).map(|(p, q)| p - q).collect();
        let zhi: Vec<i64> = phi.iter().zip(&dhi).map(|(p, q)| p - q).collect();
        let mut rem = self.clone();
        while let Some((a, c)) = rem.leading() {
            let e: Vec<i64> = a.iter().zip(&dlead).map(|(x, y)| x - y).collect();
            let in_box = e.iter().zip(zlo.iter().zip(&zhi)).all(|(x, (l, h))| l <= x && x <= h);
            let (s, _) = mono_mul(&e, &dlead, &self.frame);
            let quot = if in_box { c.div_exact(&dcoef.shift(s)) } else { None };
            let Some(cz) = quot else {
                return Err(Error::NotDivisible { remainder: rem.to_string() });
            };
            for (b, cb) in &d.terms {
                let (t, sum) = mono_mul(&e, b, &self.frame);
                rem.add_term(sum, -&(&cz * cb).shift(t));
            }
            z.add_term(e, cz);
        }
        Ok(z)
    }

    /// The twisted bar involution: antilinear in `v`, `sigma(X_k) = q^{e_k} X_k`,
    /// reversing products. On a normalized monomial it is a pure `q`-power.
    pub fn sigma(&self) -> Self {
        let mut out = Self::zero(&self.frame);
        for (a, c) in &self.terms {
            let e: i64 = a.iter().zip(&self.frame.sigma_exponents).map(|(x, s)| x * s).sum();
            out.add_term(a.clone(), c.bar().shift(2 * e));
        }
        out
    }

    /// The common degree of all terms, if the element is homogeneous and nonzero.
    pub fn degree(&self) -> Option<RootVector> {
        let mut it = self.terms.keys().map(|a| self.frame.degree_of(a));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Coefficients relative to the ordered products `X_1^{a_1} ... X_r^{a_r}`.
    pub fn ordered_terms(&self) -> BTreeMap<Vec<i64>, LaurentPoly> {
        self.terms.iter().map(|(a, c)| (a.clone(), c.shift(self.frame.normalization(a)))).collect()
    }

    /// True iff every coefficient relative to the ordered products lies in `Q[q^{±1}]`.
    pub fn is_q_integral(&self) -> bool {
        self.ordered_terms().values().all(LaurentPoly::is_q_integral)
    }

    /// The classical limit: exponent vector to the value of its coefficient at `v = 1`.
    pub fn eval_q1(&self) -> BTreeMap<Vec<i64>, Rational> {
        let mut out = BTreeMap::new();
        for (a, c) in &self.terms {
            let x = c.eval_q1();
            if x != Rational::from_integer(0.into()) {
                out.insert(a.clone(), x);
            }
        }
        out
    }

    /// `Some(e)` if `self * other = q^e other * self`.
    pub fn q_commutation(&self, other: &Self) -> Result<Option<i64>> {
        let xy = self.mul(other)?;
        let yx = other.mul(self)?;
        if xy.is_zero() {
            return Ok(Some(0));
        }
        let (a, c1) = xy.leading().expect("nonzero");
        let c2 = yx.coeff(a);
        let Some(ratio) = c1.div_exact(&c2) else { return Ok(None) };
        match ratio.as_monomial() {
            Some((c, e)) if c == &Rational::from_integer(1.into()) && e % 2 == 0 => {
                Ok((yx.q_shift(e / 2) == xy).then_some(e / 2))
            }
            _ => Ok(None),
        }
    }
}

impl fmt::Debug for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(a, c)| {
                let exps: Vec<String> = a.iter().map(|x| x.to_string()).collect();
                format!("({})*X^[{}]", c, exps.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize)]
struct WireTerm<'a> {
    exponent: &'a [i64],
    coeff: &'a LaurentPoly,
}

// Terms in ascending lex order of exponent vectors.
impl Serialize for TorusElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (a, c) in &self.terms {
            seq.serialize_element(&WireTerm { exponent: a, coeff: c })?;
        }
        seq.end()
    }
}

#[derive(Deserialize)]
struct OwnedWireTerm {
    exponent: Vec<i64>,
    coeff: LaurentPoly,
}

impl TorusElement {
    /// Rebuild an element serialized by the `Serialize` impl against a known frame.
    pub fn from_json(frame: &Arc<TorusFrame>, value: &serde_json::Value) -> Result<Self> {
        let raw: Vec<OwnedWireTerm> =
            serde_json::from_value(value.clone()).map_err(|e| Error::Input(format!("bad torus element: {}", e)))?;
        let mut out = Self::zero(frame);
        for t in raw {
            if t.exponent.len() != frame.rank() {
                return Err(Error::Input("exponent vector has wrong length".into()));
            }
            out.add_term(t.exponent, t.coeff);
        }
        Ok(out)
    }
}
