//! Independent oracles shared by the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub type Rows = Vec<Vec<i64>>;

pub fn cartan_a(n: usize) -> Rows {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 2 } else if i.abs_diff(j) == 1 { -1 } else { 0 }).collect())
        .collect()
}

/// D4 with the branch node 3.
pub fn cartan_d4() -> Rows {
    let mut c = vec![vec![0; 4]; 4];
    for i in 0..4 {
        c[i][i] = 2;
    }
    for j in [0, 1, 3] {
        c[2][j] = -1;
        c[j][2] = -1;
    }
    c
}

pub fn cartan_affine_a1() -> Rows {
    vec![vec![2, -2], vec![-2, 2]]
}

/// `s_i(x) = x - <x, alpha_i^v> alpha_i` on root coordinates.
fn reflect(c: &Rows, i: usize, x: &mut [i64]) {
    let p: i64 = (0..c.len()).map(|j| x[j] * c[i][j]).sum();
    x[i] -= p;
}

/// Roots `beta_k = s_{i_1} ... s_{i_{k-1}}(alpha_{i_k})`, letters 1-based.
pub fn betas(c: &Rows, word: &[usize]) -> Vec<Vec<i64>> {
    (0..word.len())
        .map(|k| {
            let mut x = vec![0; c.len()];
            x[word[k] - 1] = 1;
            for t in (0..k).rev() {
                reflect(c, word[t] - 1, &mut x);
            }
            x
        })
        .collect()
}

/// Every reduced word of length at most `max_len`, by depth-first extension.
pub fn reduced_words(c: &Rows, max_len: usize) -> Vec<Vec<usize>> {
    fn rec(c: &Rows, max_len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == max_len {
            return;
        }
        for j in 1..=c.len() {
            cur.push(j);
            let mut x = vec![0; c.len()];
            x[j - 1] = 1;
            for t in (0..cur.len() - 1).rev() {
                reflect(c, cur[t] - 1, &mut x);
            }
            if x.iter().all(|&v| v >= 0) {
                rec(c, max_len, cur, out);
            }
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(c, max_len, &mut Vec::new(), &mut out);
    out
}

/// `(x, y)` for root vectors.
pub fn form(c: &Rows, x: &[i64], y: &[i64]) -> i64 {
    let n = c.len();
    (0..n).map(|i| (0..n).map(|j| x[i] * c[i][j] * y[j]).sum::<i64>()).sum()
}

/// A weight `sum omega_i w_i + sum root_i alpha_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wt {
    pub omega: Vec<i64>,
    pub root: Vec<i64>,
}

impl Wt {
    pub fn fundamental(n: usize, i: usize) -> Self {
        let mut omega = vec![0; n];
        omega[i] = 1;
        Self { omega, root: vec![0; n] }
    }

    fn coroot(&self, c: &Rows, i: usize) -> i64 {
        self.omega[i] + (0..c.len()).map(|j| self.root[j] * c[j][i]).sum::<i64>()
    }

    pub fn reflect(&mut self, c: &Rows, i: usize) {
        let p = self.coroot(c, i);
        self.root[i] -= p;
    }

    /// `(self, y)` with `y` in the root lattice.
    pub fn pair_root(&self, c: &Rows, y: &[i64]) -> i64 {
        (0..c.len()).map(|j| y[j] * self.coroot(c, j)).sum()
    }
}

/// `s_{i_1} ... s_{i_k}(w_i)`, letters 1-based.
pub fn mu(c: &Rows, word: &[usize], k: usize, i: usize) -> Wt {
    let mut w = Wt::fundamental(c.len(), i);
    for t in (0..k).rev() {
        w.reflect(c, word[t] - 1);
    }
    w
}

/// Kostant partition function: the number of ways to write `gamma` as a sum of the given roots.
pub fn kostant(roots: &[Vec<i64>], gamma: &[i64]) -> usize {
    fn rec(roots: &[Vec<i64>], gamma: &mut Vec<i64>) -> usize {
        if gamma.iter().all(|&x| x == 0) {
            return 1;
        }
        let Some((first, rest)) = roots.split_first() else { return 0 };
        let mut total = rec(rest, gamma);
        let mut used = 0;
        loop {
            for (g, r) in gamma.iter_mut().zip(first) {
                *g -= r;
            }
            used += 1;
            if gamma.iter().any(|&x| x < 0) {
                break;
            }
            total += rec(rest, gamma);
        }
        for (g, r) in gamma.iter_mut().zip(first) {
            *g += used * r;
        }
        total
    }
    rec(roots, &mut gamma.to_vec())
}

pub fn random_sequences(mutable: &[usize], count: usize, max_len: usize, rng_seed: u64) -> Vec<Vec<usize>> {
    let mut rng = StdRng::seed_from_u64(rng_seed);
    if mutable.is_empty() {
        return Vec::new();
    }
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            (0..len).map(|_| mutable[rng.gen_range(0..mutable.len())]).collect()
        })
        .collect()
}

/// Commutative Laurent polynomial in `x_1 .. x_r` over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent(pub BTreeMap<Vec<i64>, BigRational>);

impl Laurent {
    pub fn var(r: usize, k: usize) -> Self {
        let mut e = vec![0; r];
        e[k] = 1;
        Self(BTreeMap::from([(e, BigRational::one())]))
    }

    pub fn one(r: usize) -> Self {
        Self(BTreeMap::from([(vec![0; r], BigRational::one())]))
    }

    fn add_term(&mut self, e: Vec<i64>, c: BigRational) {
        let slot = self.0.entry(e.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&e);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.0 {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self(BTreeMap::new());
        for (e, c) in &self.0 {
            for (f, d) in &o.0 {
                out.add_term(e.iter().zip(f).map(|(a, b)| a + b).collect(), c * d);
            }
        }
        out
    }

    pub fn pow(&self, n: i64, r: usize) -> Self {
        (0..n).fold(Self::one(r), |acc, _| acc.mul(self))
    }

    /// Exact quotient, by repeatedly cancelling the lex-largest term.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (de, dc) = d.0.iter().next_back()?;
        let mut rem = self.clone();
        let mut q = Self(BTreeMap::new());
        let mut guard = 0;
        while let Some((e, c)) = rem.0.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            guard += 1;
            if guard > 100_000 {
                return None;
            }
            let t = Self(BTreeMap::from([(e.iter().zip(de).map(|(a, b)| a - b).collect(), c / dc)]));
            rem = rem.add(&t.mul(d).neg());
            q = q.add(&t);
        }
        Some(q)
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|(e, c)| (e.clone(), -c)).collect())
    }
}

/// Commutative mutation of a cluster and its exchange matrix.
pub fn classical_mutate(cluster: &mut [Laurent], b: &mut Rows, mutable: &[usize], k: usize) {
    let r = cluster.len();
    let kc = mutable.iter().position(|&m| m == k).expect("mutable position");
    let mut plus = Laurent::one(r);
    let mut minus = Laurent::one(r);
    for i in 0..r {
        let e = b[i][kc];
        if e > 0 {
            plus = plus.mul(&cluster[i].pow(e, r));
        } else if e < 0 {
            minus = minus.mul(&cluster[i].pow(-e, r));
        }
    }
    cluster[k - 1] = plus.add(&minus).div_exact(&cluster[k - 1]).expect("Laurent phenomenon");
    let old = b.clone();
    for i in 0..r {
        for (j, &mj) in mutable.iter().enumerate() {
            b[i][j] = if i == k - 1 || mj == k {
                -old[i][j]
            } else {
                let (x, y) = (old[i][kc], old[k - 1][j]);
                old[i][j] + (x.abs() * y + x * y.abs()) / 2
            };
        }
    }
}
