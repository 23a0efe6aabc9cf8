//! The quantum matrix algebra `A_q(Mat(N))` by normal-form rewriting.
//!
//! Generators are `x_ab`, `1 <= a, b <= N`. A word is normal when its letters
//! are sorted lexicographically by `(a, b)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qarith::{rat, LaurentPoly};

pub type Gen = (usize, usize);
pub type Word = Vec<Gen>;

/// Where to apply the next rewrite inside a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteOrder {
    Leftmost,
    Rightmost,
    Random(u64),
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct QMatrixElement {
    terms: BTreeMap<Word, LaurentPoly>,
}

fn q_minus_q_inv() -> LaurentPoly {
    LaurentPoly::from_pairs(&[(2, 1), (-2, -1)])
}

/// Rewrite the out-of-order adjacent pair `(x_cd, x_ab)`, `(a, b) < (c, d)`.
fn rewrite_pair(cd: Gen, ab: Gen) -> Vec<(LaurentPoly, Word)> {
    let ((c, d), (a, b)) = (cd, ab);
    if a == c || b == d {
        vec![(LaurentPoly::q_pow(-1), vec![ab, cd])]
    } else if b > d {
        vec![(LaurentPoly::one(), vec![ab, cd])]
    } else {
        vec![(LaurentPoly::one(), vec![ab, cd]), (-&q_minus_q_inv(), vec![(a, d), (c, b)])]
    }
}

fn descents(w: &[Gen]) -> Vec<usize> {
    (0..w.len().saturating_sub(1)).filter(|&i| w[i] > w[i + 1]).collect()
}

struct Normalizer {
    strategy: RewriteOrder,
    rng: Option<StdRng>,
    memo: HashMap<Word, QMatrixElement>,
}

impl Normalizer {
    fn new(strategy: RewriteOrder) -> Self {
        let rng = match strategy {
            RewriteOrder::Random(s) => Some(StdRng::seed_from_u64(s)),
            _ => None,
        };
        Self { strategy, rng, memo: HashMap::new() }
    }

    fn nf(&mut self, w: &[Gen]) -> QMatrixElement {
        let ds = descents(w);
        if ds.is_empty() {
            return QMatrixElement::word(w.to_vec(), LaurentPoly::one());
        }
        let memoize = self.rng.is_none();
        if memoize {
            if let Some(x) = self.memo.get(w) {
                return x.clone();
            }
        }
        let pos = match self.strategy {
            RewriteOrder::Leftmost => ds[0],
            RewriteOrder::Rightmost => ds[ds.len() - 1],
            RewriteOrder::Random(_) => ds[self.rng.as_mut().expect("rng").gen_range(0..ds.len())],
        };
        let mut out = QMatrixElement::zero();
        for (c, mid) in rewrite_pair(w[pos], w[pos + 1]) {
            let mut nw = w[..pos].to_vec();
            nw.extend(mid);
            nw.extend_from_slice(&w[pos + 2..]);
            out.add_assign_scaled(&self.nf(&nw), &c);
        }
        if memoize {
            self.memo.insert(w.to_vec(), out.clone());
        }
        out
    }
}

/// Normal form of `coeff * word`.
pub fn normalize(word: &[Gen], coeff: &LaurentPoly) -> QMatrixElement {
    normalize_with(word, coeff, RewriteOrder::Leftmost)
}

pub fn normalize_with(word: &[Gen], coeff: &LaurentPoly, strategy: RewriteOrder) -> QMatrixElement {
    Normalizer::new(strategy).nf(word).scale(coeff)
}

impl QMatrixElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::word(Vec::new(), LaurentPoly::one())
    }

    fn word(w: Word, c: LaurentPoly) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        Self { terms }
    }

    pub fn generator(a: usize, b: usize) -> Self {
        Self::word(vec![(a, b)], LaurentPoly::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &LaurentPoly)> {
        self.terms.iter()
    }

    fn add_assign_scaled(&mut self, other: &Self, c: &LaurentPoly) {
        for (w, x) in &other.terms {
            let e = self.terms.entry(w.clone()).or_default();
            *e += &(x * c);
            if e.is_zero() {
                self.terms.remove(w);
            }
        }
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = Self::zero();
        out.add_assign_scaled(self, c);
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_scaled(other, &LaurentPoly::one());
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_scaled(other, &LaurentPoly::constant(rat(-1)));
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut n = Normalizer::new(RewriteOrder::Leftmost);
        let mut out = Self::zero();
        for (u, a) in &self.terms {
            for (w, b) in &other.terms {
                let mut uw = u.clone();
                uw.extend_from_slice(w);
                out.add_assign_scaled(&n.nf(&uw), &(a * b));
            }
        }
        out
    }
}

impl fmt::Debug for QMatrixElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for QMatrixElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let m: Vec<String> = w.iter().map(|(a, b)| format!("x{}{}", a, b)).collect();
                format!("({})*{}", c, if m.is_empty() { "1".into() } else { m.join("*") })
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Number of inversions of a permutation given as a list of images.
fn inversions(p: &[usize]) -> usize {
    let mut n = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                n += 1;
            }
        }
    }
    n
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// `sum_sigma (-q)^{l(sigma)} x_{i_1 j_sigma(1)} ... x_{i_m j_sigma(m)}`.
pub fn qminor(rows: &[usize], cols: &[usize]) -> Result<QMatrixElement> {
    if rows.len() != cols.len() {
        return Err(Error::Input(format!("minor with {} rows and {} columns", rows.len(), cols.len())));
    }
    let sorted = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]);
    if !sorted(rows) || !sorted(cols) {
        return Err(Error::Input("minor indices must be strictly ascending".into()));
    }
    let mut n = Normalizer::new(RewriteOrder::Leftmost);
    let mut out = QMatrixElement::zero();
    for p in permutations(rows.len()) {
        let l = inversions(&p) as i64;
        let sign = if l % 2 == 0 { 1 } else { -1 };
        let w: Word = rows.iter().zip(&p).map(|(&r, &s)| (r, cols[s])).collect();
        out.add_assign_scaled(&n.nf(&w), &LaurentPoly::monomial(rat(sign), 2 * l));
    }
    Ok(out)
}

/// A permutation of `{1..n}` as images, built from a word in `s_1 .. s_{n-1}`
/// acting with the rightmost letter first.
pub fn perm_of_word(u: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut p: Vec<usize> = (1..=n).collect();
    for &s in u {
        if s == 0 || s >= n {
            return Err(Error::Input(format!("letter s_{} out of range for N = {}", s, n)));
        }
        // composing on the right: (p s)(x) = p(s(x))
        p.swap(s - 1, s);
    }
    Ok(p)
}

/// `u({1, ..., i})`, sorted.
pub fn weyl_subset(u: &[usize], i: usize, n: usize) -> Result<Vec<usize>> {
    let p = perm_of_word(u, n)?;
    let mut s: Vec<usize> = p[..i].to_vec();
    s.sort();
    Ok(s)
}

/// `Delta_{u(w_i), v(w_i)}` with `w_0 = 1` and `w_N = det_q`.
fn flag_minor(u: &[usize], v: &[usize], i: usize, n: usize) -> Result<QMatrixElement> {
    if i == 0 {
        return Ok(QMatrixElement::one());
    }
    qminor(&weyl_subset(u, i, n)?, &weyl_subset(v, i, n)?)
}

/// One case `(u, v, i)` of the minor identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCase {
    pub u: Vec<usize>,
    pub v: Vec<usize>,
    pub i: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityOutcome {
    pub case: IdentityCase,
    /// `None` when the length precondition fails and the case is skipped.
    pub residual: Option<String>,
    pub zero: bool,
}

/// True iff `l(w s_i) = l(w) + 1`.
pub fn length_increases(w: &[usize], i: usize, n: usize) -> Result<bool> {
    let p = perm_of_word(w, n)?;
    Ok(p[i - 1] < p[i])
}

/// Residual of the minor identity for one case, or `None` if skipped.
pub fn identity_residual(n: usize, case: &IdentityCase) -> Result<Option<QMatrixElement>> {
    let i = case.i;
    if i == 0 || i >= n {
        return Err(Error::Input(format!("i = {} out of range for N = {}", i, n)));
    }
    if !length_increases(&case.u, i, n)? || !length_increases(&case.v, i, n)? {
        return Ok(None);
    }
    let with_s = |w: &[usize]| {
        let mut x = w.to_vec();
        x.push(i);
        x
    };
    let (us, vs) = (with_s(&case.u), with_s(&case.v));
    let lhs = flag_minor(&us, &vs, i, n)?.mul(&flag_minor(&case.u, &case.v, i, n)?);
    let cross = flag_minor(&us, &case.v, i, n)?.mul(&flag_minor(&case.u, &vs, i, n)?);
    let prod = flag_minor(&case.u, &case.v, i - 1, n)?.mul(&flag_minor(&case.u, &case.v, i + 1, n)?);
    Ok(Some(lhs.sub(&cross.scale(&LaurentPoly::q_pow(-1))).sub(&prod)))
}

pub fn verify_identity_suite(n: usize, cases: &[IdentityCase]) -> Result<Vec<IdentityOutcome>> {
    cases
        .iter()
        .map(|c| {
            let r = identity_residual(n, c)?;
            Ok(IdentityOutcome {
                case: c.clone(),
                zero: r.as_ref().is_none_or(QMatrixElement::is_zero),
                residual: r.map(|x| x.to_string()),
            })
        })
        .collect()
}

/// Reduced words of all permutations of `{1..n}` of length at most `max_len`, one per element.
pub fn short_elements(n: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut seen = BTreeMap::new();
    let mut frontier = vec![Vec::<usize>::new()];
    seen.insert(perm_of_word(&[], n).expect("valid"), Vec::new());
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for s in 1..n {
                let mut x = w.clone();
                x.push(s);
                let p = perm_of_word(&x, n).expect("valid");
                if inversions(&p) == x.len() && !seen.contains_key(&p) {
                    seen.insert(p, x.clone());
                    next.push(x);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<Vec<usize>> = seen.into_values().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

/// All cases with `|u|, |v| <= max_len` that satisfy the length preconditions.
pub fn standard_cases(n: usize, max_len: usize) -> Vec<IdentityCase> {
    let elems = short_elements(n, max_len);
    let mut out = Vec::new();
    for u in &elems {
        for v in &elems {
            for i in 1..n {
                if length_increases(u, i, n).unwrap_or(false) && length_increases(v, i, n).unwrap_or(false) {
                    out.push(IdentityCase { u: u.clone(), v: v.clone(), i });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x(a: usize, b: usize) -> QMatrixElement {
        QMatrixElement::generator(a, b)
    }

    #[test]
    fn straightening_examples() {
        let p = x(2, 2).mul(&x(1, 1));
        let expected = x(1, 1).mul(&x(2, 2)).sub(&x(1, 2).mul(&x(2, 1)).scale(&q_minus_q_inv()));
        assert_eq!(p, expected);
        assert_eq!(x(1, 2).mul(&x(1, 1)), x(1, 1).mul(&x(1, 2)).scale(&LaurentPoly::q_pow(-1)));
        let w = normalize(&[(1, 3), (2, 1)], &LaurentPoly::one());
        assert_eq!(w.terms().next().unwrap().0, &vec![(1, 3), (2, 1)]);
    }

    #[test]
    fn minors() {
        let d = qminor(&[1, 2], &[1, 2]).unwrap();
        let expected = x(1, 1).mul(&x(2, 2)).sub(&x(1, 2).mul(&x(2, 1)).scale(&LaurentPoly::q_pow(1)));
        assert_eq!(d, expected);
        assert_eq!(qminor(&[2], &[3]).unwrap(), x(2, 3));
        assert!(qminor(&[1, 2], &[1]).is_err());
    }

    #[test]
    fn two_by_two_identity() {
        let lhs = x(2, 2).mul(&x(1, 1)).sub(&x(2, 1).mul(&x(1, 2)).scale(&LaurentPoly::q_pow(-1)));
        assert_eq!(lhs, qminor(&[1, 2], &[1, 2]).unwrap());
        let out = verify_identity_suite(2, &[IdentityCase { u: vec![], v: vec![], i: 1 }]).unwrap();
        assert!(out[0].zero);
    }

    #[test]
    fn determinant_is_central() {
        let d = qminor(&[1, 2, 3], &[1, 2, 3]).unwrap();
        for a in 1..=3 {
            for b in 1..=3 {
                assert_eq!(d.mul(&x(a, b)), x(a, b).mul(&d));
            }
        }
    }

    #[test]
    fn weyl_subsets() {
        assert_eq!(weyl_subset(&[], 2, 3).unwrap(), vec![1, 2]);
        assert_eq!(weyl_subset(&[1], 1, 3).unwrap(), vec![2]);
        assert_eq!(weyl_subset(&[2, 1], 1, 3).unwrap(), vec![3]);
    }

    #[test]
    fn n3_small_cases() {
        let cases = vec![
            IdentityCase { u: vec![], v: vec![], i: 1 },
            IdentityCase { u: vec![], v: vec![], i: 2 },
            IdentityCase { u: vec![1], v: vec![], i: 2 },
        ];
        for o in verify_identity_suite(3, &cases).unwrap() {
            assert!(o.zero, "{:?}", o);
        }
        // u = s_1 has l(u s_1) < l(u): skipped
        let skipped = verify_identity_suite(3, &[IdentityCase { u: vec![1], v: vec![], i: 1 }]).unwrap();
        assert!(skipped[0].residual.is_none());
    }

    #[test]
    fn short_elements_of_s3() {
        assert_eq!(short_elements(3, 2).len(), 5);
        assert_eq!(short_elements(3, 3).len(), 6);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn confluence(word in prop::collection::vec((1usize..=3, 1usize..=3), 0..=6), seed in any::<u64>()) {
            let one = LaurentPoly::one();
            let l = normalize_with(&word, &one, RewriteOrder::Leftmost);
            prop_assert_eq!(&normalize_with(&word, &one, RewriteOrder::Rightmost), &l);
            prop_assert_eq!(&normalize_with(&word, &one, RewriteOrder::Random(seed)), &l);
        }
    }
}
