//! Symmetric Kac–Moody combinatorics.
//!
//! Colors (elements of the index set `I`) are 0-based `usize` throughout the
//! crate; words are read from 1-based letters at the boundary. Positions in a
//! word are 1-based, with 0 meaning "no previous occurrence".

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A symmetric generalized Cartan matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct CartanMatrix {
    entries: Vec<Vec<i64>>,
}

impl CartanMatrix {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::Input("Cartan matrix is empty".into()));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Input(format!("Cartan matrix row {} has length {}", i + 1, row.len())));
            }
            if row[i] != 2 {
                return Err(Error::Input(format!("Cartan diagonal entry a_{0}{0} is {1}, expected 2", i + 1, row[i])));
            }
            for (j, &a) in row.iter().enumerate() {
                if i != j && a > 0 {
                    return Err(Error::Input(format!("off-diagonal entry a_{}{} = {} is positive", i + 1, j + 1, a)));
                }
                if entries[j][i] != a {
                    return Err(Error::Input(format!("Cartan matrix is not symmetric at ({}, {})", i + 1, j + 1)));
                }
            }
        }
        Ok(Self { entries })
    }

    /// Type `A_n` with the standard linear labelling.
    pub fn type_a(n: usize) -> Self {
        let mut m = vec![vec![0; n]; n];
        for i in 0..n {
            m[i][i] = 2;
            if i + 1 < n {
                m[i][i + 1] = -1;
                m[i + 1][i] = -1;
            }
        }
        Self { entries: m }
    }

    /// Type `D_4` with the branch node labelled 3.
    pub fn type_d4() -> Self {
        let mut m = vec![vec![0; 4]; 4];
        for i in 0..4 {
            m[i][i] = 2;
        }
        for leaf in [0, 1, 3] {
            m[leaf][2] = -1;
            m[2][leaf] = -1;
        }
        Self { entries: m }
    }

    /// Affine `A_1^(1)` (the Kronecker Cartan matrix).
    pub fn affine_a1() -> Self {
        Self { entries: vec![vec![2, -2], vec![-2, 2]] }
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.entries
    }

    /// The symmetric bilinear form on the root lattice, `(x, y) = x^T A y`.
    pub fn form(&self, x: &RootVector, y: &RootVector) -> i64 {
        let mut s = 0;
        for (i, &xi) in x.0.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.0.iter().enumerate() {
                s += xi * self.entries[i][j] * yj;
            }
        }
        s
    }

    /// `s_i(y) = y - (alpha_i, y) alpha_i` on the root lattice.
    pub fn reflect_root(&self, i: usize, y: &RootVector) -> RootVector {
        let c: i64 = (0..self.rank()).map(|j| self.entries[i][j] * y.0[j]).sum();
        let mut out = y.clone();
        out.0[i] -= c;
        out
    }
}

impl TryFrom<Vec<Vec<i64>>> for CartanMatrix {
    type Error = Error;
    fn try_from(v: Vec<Vec<i64>>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<CartanMatrix> for Vec<Vec<i64>> {
    fn from(c: CartanMatrix) -> Self {
        c.entries
    }
}

/// An element of the root lattice `Q`, in simple-root coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RootVector(pub Vec<i64>);

impl RootVector {
    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn simple(i: usize, n: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Self(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Membership in `Q_+`.
    pub fn in_q_plus(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    /// Positive (nonzero, all coordinates nonnegative).
    pub fn is_positive(&self) -> bool {
        self.in_q_plus() && !self.is_zero()
    }

    /// `deg` of an element of `Q_+`: the sum of its coordinates.
    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            if mag == 1 {
                write!(f, "{}a{}", sign, i + 1)?;
            } else {
                write!(f, "{}{}a{}", sign, mag, i + 1)?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &RootVector {
    type Output = RootVector;
    fn add(self, rhs: &RootVector) -> RootVector {
        RootVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RootVector {
    type Output = RootVector;
    fn sub(self, rhs: &RootVector) -> RootVector {
        RootVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RootVector {
    type Output = RootVector;
    fn neg(self) -> RootVector {
        RootVector(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<&RootVector> for i64 {
    type Output = RootVector;
    fn mul(self, rhs: &RootVector) -> RootVector {
        RootVector(rhs.0.iter().map(|a| self * a).collect())
    }
}

impl AddAssign<&RootVector> for RootVector {
    fn add_assign(&mut self, rhs: &RootVector) {
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a += b;
        }
    }
}

impl SubAssign<&RootVector> for RootVector {
    fn sub_assign(&mut self, rhs: &RootVector) {
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a -= b;
        }
    }
}

/// A weight `sum omega_i w_i + sum root_i alpha_i`, kept in mixed coordinates.
///
/// The two parts are never converted into each other: fundamental weights are
/// only fixed up to a `W`-invariant element, and every pairing the engine
/// needs is against a pure root-lattice argument.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Weight {
    pub omega: Vec<i64>,
    pub root: RootVector,
}

impl Weight {
    pub fn fundamental(j: usize, n: usize) -> Self {
        let mut omega = vec![0; n];
        omega[j] = 1;
        Self { omega, root: RootVector::zero(n) }
    }

    pub fn from_root(root: RootVector) -> Self {
        Self { omega: vec![0; root.len()], root }
    }

    /// `<x, alpha_i^vee>`.
    pub fn coroot_pairing(&self, i: usize, cartan: &CartanMatrix) -> i64 {
        self.omega[i] + (0..cartan.rank()).map(|j| self.root.0[j] * cartan.a(j, i)).sum::<i64>()
    }

    /// Simple reflection; only the root part changes.
    pub fn reflect(&self, i: usize, cartan: &CartanMatrix) -> Weight {
        let c = self.coroot_pairing(i, cartan);
        let mut out = self.clone();
        out.root.0[i] -= c;
        out
    }

    /// `self - other` when both have the same fundamental-weight part.
    pub fn root_difference(&self, other: &Weight) -> Option<RootVector> {
        (self.omega == other.omega).then(|| &self.root - &other.root)
    }

    pub fn add_root(&self, y: &RootVector) -> Weight {
        Weight { omega: self.omega.clone(), root: &self.root + y }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &c) in self.omega.iter().enumerate() {
            match c {
                0 => {}
                1 => parts.push(format!("w{}", i + 1)),
                _ => parts.push(format!("{}w{}", c, i + 1)),
            }
        }
        if !self.root.is_zero() {
            parts.push(format!("({})", self.root));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `(x, y)` for a weight `x` and a root-lattice element `y`.
///
/// Uses `(alpha_j, w_i) = delta_ij` and `(alpha_i, alpha_j) = a_ij`.
pub fn pair(x: &Weight, y: &RootVector, cartan: &CartanMatrix) -> i64 {
    let fundamental: i64 = y.0.iter().zip(&x.omega).map(|(a, b)| a * b).sum();
    fundamental + cartan.form(&x.root, y)
}

/// A word `(i_1, ..., i_r)` in the simple reflections, stored 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReducedWord {
    colors: Vec<usize>,
}

impl ReducedWord {
    /// Build from 1-based letters.
    pub fn from_letters(letters: &[usize]) -> Result<Self> {
        if let Some(pos) = letters.iter().position(|&l| l == 0) {
            return Err(Error::Input(format!("letter at position {} is 0; letters are 1-based", pos + 1)));
        }
        Ok(Self { colors: letters.iter().map(|&l| l - 1).collect() })
    }

    pub fn from_colors(colors: Vec<usize>) -> Self {
        Self { colors }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Color `i_k` at the 1-based position `k`.
    #[inline]
    pub fn color(&self, k: usize) -> usize {
        self.colors[k - 1]
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn letters(&self) -> Vec<usize> {
        self.colors.iter().map(|c| c + 1).collect()
    }

    fn check_range(&self, cartan: &CartanMatrix) -> Result<()> {
        match self.colors.iter().position(|&c| c >= cartan.rank()) {
            Some(p) => Err(Error::Input(format!(
                "letter {} at position {} is out of range 1..={}",
                self.colors[p] + 1,
                p + 1,
                cartan.rank()
            ))),
            None => Ok(()),
        }
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l: Vec<String> = self.letters().iter().map(|l| l.to_string()).collect();
        write!(f, "({})", l.join(","))
    }
}

fn raw_betas(word: &ReducedWord, cartan: &CartanMatrix) -> Vec<RootVector> {
    let n = cartan.rank();
    (1..=word.len())
        .map(|k| {
            let mut y = RootVector::simple(word.color(k), n);
            for t in (1..k).rev() {
                y = cartan.reflect_root(word.color(t), &y);
            }
            y
        })
        .collect()
}

/// True iff every `beta_k` is a positive root.
pub fn validate_reduced(word: &ReducedWord, cartan: &CartanMatrix) -> Result<bool> {
    word.check_range(cartan)?;
    Ok(raw_betas(word, cartan).iter().all(RootVector::is_positive))
}

/// `beta_k = s_{i_1} ... s_{i_{k-1}}(alpha_{i_k})` for `k = 1..r`.
pub fn beta_roots(word: &ReducedWord, cartan: &CartanMatrix) -> Result<Vec<RootVector>> {
    word.check_range(cartan)?;
    let betas = raw_betas(word, cartan);
    if let Some(k) = betas.iter().position(|b| !b.is_positive()) {
        return Err(Error::NotReduced { position: k + 1, root: betas[k].to_string() });
    }
    Ok(betas)
}

/// `mu(b, j) = s_{i_1} ... s_{i_b}(w_j)`, with `mu(0, j) = w_j`.
pub fn mu_weight(word: &ReducedWord, cartan: &CartanMatrix, b: usize, j: usize) -> Weight {
    let mut x = Weight::fundamental(j, cartan.rank());
    for t in (1..=b).rev() {
        x = x.reflect(word.color(t), cartan);
    }
    x
}

/// Same-letter neighbour structure of a word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexMaps {
    r: usize,
    minus: Vec<usize>,
    plus: Vec<usize>,
    kmin: Vec<usize>,
    kmax: Vec<usize>,
    /// `before[b][j] = b^-(j)` for `b` in `0..=r+1`.
    before: Vec<Vec<usize>>,
}

impl IndexMaps {
    pub fn new(word: &ReducedWord, n: usize) -> Self {
        let r = word.len();
        let mut before = vec![vec![0; n]; r + 2];
        for b in 1..=r + 1 {
            before[b] = before[b - 1].clone();
            if b >= 2 {
                before[b][word.color(b - 1)] = b - 1;
            }
        }
        let mut minus = vec![0; r + 1];
        let mut plus = vec![r + 1; r + 1];
        let mut kmin = vec![0; r + 1];
        let mut kmax = vec![0; r + 1];
        for k in 1..=r {
            minus[k] = before[k][word.color(k)];
        }
        for k in (1..=r).rev() {
            if minus[k] > 0 {
                plus[minus[k]] = k;
            }
        }
        for k in 1..=r {
            kmin[k] = if minus[k] == 0 { k } else { kmin[minus[k]] };
        }
        for k in (1..=r).rev() {
            kmax[k] = if plus[k] == r + 1 { k } else { kmax[plus[k]] };
        }
        Self { r, minus, plus, kmin, kmax, before }
    }

    pub fn len(&self) -> usize {
        self.r
    }

    pub fn is_empty(&self) -> bool {
        self.r == 0
    }

    /// `k^-`: previous position with the same letter, or 0.
    pub fn minus(&self, k: usize) -> usize {
        self.minus[k]
    }

    /// `k^+`: next position with the same letter, or `r + 1`.
    pub fn plus(&self, k: usize) -> usize {
        self.plus[k]
    }

    pub fn kmin(&self, k: usize) -> usize {
        self.kmin[k]
    }

    pub fn kmax(&self, k: usize) -> usize {
        self.kmax[k]
    }

    /// `b^-(j) = max({s < b | i_s = j} ∪ {0})`, for `0 <= b <= r + 1`.
    pub fn before(&self, b: usize, j: usize) -> usize {
        self.before[b][j]
    }

    /// Positions `k` with `k^+ <= r`.
    pub fn mutable_positions(&self) -> Vec<usize> {
        (1..=self.r).filter(|&k| self.plus[k] <= self.r).collect()
    }

    pub fn is_frozen(&self, k: usize) -> bool {
        self.plus[k] > self.r
    }
}

pub fn index_maps(word: &ReducedWord, n: usize) -> IndexMaps {
    IndexMaps::new(word, n)
}

/// A validated reduced word together with its derived data.
#[derive(Clone, Debug)]
pub struct WordData {
    pub cartan: CartanMatrix,
    pub word: ReducedWord,
    pub betas: Vec<RootVector>,
    pub maps: IndexMaps,
    /// `mu[b][j]` for `0 <= b <= r`.
    mu: Vec<Vec<Weight>>,
}

impl WordData {
    pub fn new(cartan: CartanMatrix, word: ReducedWord) -> Result<Self> {
        let betas = beta_roots(&word, &cartan)?;
        let n = cartan.rank();
        let maps = IndexMaps::new(&word, n);
        let mut mu = Vec::with_capacity(word.len() + 1);
        mu.push((0..n).map(|j| Weight::fundamental(j, n)).collect::<Vec<_>>());
        // mu(b, j) = mu(b-1, j) - <w_j, alpha_{i_b}^vee> beta_b
        for b in 1..=word.len() {
            let i = word.color(b);
            let row: Vec<Weight> = (0..n)
                .map(|j| {
                    let prev = &mu[b - 1][j];
                    if j == i {
                        prev.add_root(&-&betas[b - 1])
                    } else {
                        prev.clone()
                    }
                })
                .collect();
            mu.push(row);
        }
        Ok(Self { cartan, word, betas, maps, mu })
    }

    pub fn from_letters(cartan: CartanMatrix, letters: &[usize]) -> Result<Self> {
        Self::new(cartan, ReducedWord::from_letters(letters)?)
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn color(&self, k: usize) -> usize {
        self.word.color(k)
    }

    pub fn beta(&self, k: usize) -> &RootVector {
        &self.betas[k - 1]
    }

    pub fn mu(&self, b: usize, j: usize) -> &Weight {
        &self.mu[b][j]
    }

    /// `mu(b, j) - mu(d, j)`, an element of `Q`.
    pub fn mu_diff(&self, b: usize, d: usize, j: usize) -> RootVector {
        &self.mu[b][j].root - &self.mu[d][j].root
    }

    pub fn pair(&self, x: &Weight, y: &RootVector) -> i64 {
        pair(x, y, &self.cartan)
    }

    pub fn form(&self, x: &RootVector, y: &RootVector) -> i64 {
        self.cartan.form(x, y)
    }
}
