//! The initial quantum seed of a reduced word.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qtorus::{TorusElement, TorusFrame};
use crate::rootsys::{CartanMatrix, ReducedWord, RootVector, WordData};

/// Exchange matrix with columns at the mutable positions, kept in place.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExchangeMatrix {
    /// 1-based mutable positions, ascending.
    pub mutable: Vec<usize>,
    /// `r` rows, one column per mutable position.
    pub rows: Vec<Vec<i64>>,
}

impl ExchangeMatrix {
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn column_of(&self, k: usize) -> Option<usize> {
        self.mutable.iter().position(|&m| m == k)
    }

    pub fn is_mutable(&self, k: usize) -> bool {
        self.column_of(k).is_some()
    }

    /// `b_ik` for 1-based positions `i` and mutable `k`.
    pub fn get(&self, i: usize, k: usize) -> i64 {
        let c = self.column_of(k).expect("column at a mutable position");
        self.rows[i - 1][c]
    }

    /// Column at mutable position `k`, as a vector over all `r` rows.
    pub fn column(&self, k: usize) -> Vec<i64> {
        let c = self.column_of(k).expect("column at a mutable position");
        self.rows.iter().map(|row| row[c]).collect()
    }
}

/// An interval module `M[l, k]`, `k <= l`, with `i_k = i_l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "[usize; 2]", from = "[usize; 2]")]
pub struct Label {
    pub l: usize,
    pub k: usize,
}

impl From<Label> for [usize; 2] {
    fn from(x: Label) -> Self {
        [x.l, x.k]
    }
}

impl From<[usize; 2]> for Label {
    fn from(x: [usize; 2]) -> Self {
        Label { l: x[0], k: x[1] }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M[{},{}]", self.l, self.k)
    }
}

/// Arrows of the quiver `Gamma_i` as `(source, target)` pairs with repetition.
pub fn build_gamma(wd: &WordData) -> Vec<(usize, usize)> {
    let r = wd.len();
    let m = &wd.maps;
    let mut arrows = Vec::new();
    for s in 1..=r {
        for t in s + 1..=r {
            let (is, it) = (wd.color(s), wd.color(t));
            if is == it {
                continue;
            }
            if m.plus(t) >= m.plus(s) && m.plus(s) > t {
                for _ in 0..wd.cartan.a(is, it).unsigned_abs() {
                    arrows.push((s, t));
                }
            }
        }
        if m.minus(s) > 0 {
            arrows.push((s, m.minus(s)));
        }
    }
    arrows
}

pub fn build_gamma_btilde(wd: &WordData) -> (Vec<(usize, usize)>, ExchangeMatrix) {
    let r = wd.len();
    let arrows = build_gamma(wd);
    let mut full = vec![vec![0i64; r + 1]; r + 1];
    for &(s, t) in &arrows {
        full[t][s] += 1;
        full[s][t] -= 1;
    }
    let mutable = wd.maps.mutable_positions();
    let rows = (1..=r).map(|i| mutable.iter().map(|&k| full[i][k]).collect()).collect();
    (arrows, ExchangeMatrix { mutable, rows })
}

/// The matrices `R`, `H` and `L = H (R - R^T) H^T`, 0-indexed.
pub struct RhlMatrices {
    pub r: Vec<Vec<i64>>,
    pub h: Vec<Vec<i64>>,
    pub l: Vec<Vec<i64>>,
}

pub fn build_rhl(wd: &WordData) -> RhlMatrices {
    let n = wd.len();
    let mut r = vec![vec![0i64; n]; n];
    let mut h = vec![vec![0i64; n]; n];
    for k in 1..=n {
        r[k - 1][k - 1] = 1;
        for l in 1..k {
            r[k - 1][l - 1] = wd.form(wd.beta(k), wd.beta(l));
        }
        let mut l = k;
        while l > 0 {
            h[k - 1][l - 1] = 1;
            l = wd.maps.minus(l);
        }
    }
    let skew: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| r[i][j] - r[j][i]).collect()).collect();
    let l = mat_mul(&mat_mul(&h, &skew), &transpose(&h));
    RhlMatrices { r, h, l }
}

pub(crate) fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let m = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..m).map(|j| row.iter().zip(b).map(|(x, brow)| x * brow[j]).sum()).collect())
        .collect()
}

pub(crate) fn transpose(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let m = a.first().map_or(0, Vec::len);
    (0..m).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

/// `dim V_k = w_{i_k} - mu(k, i_k)` for `k = 1..r`.
pub fn dim_vectors(wd: &WordData) -> Vec<RootVector> {
    (1..=wd.len()).map(|k| -&wd.mu(k, wd.color(k)).root).collect()
}

/// `dim M[l, k] = mu(k^-, j) - mu(l, j)` for `k <= l` of the same color `j`.
pub fn interval_dim(wd: &WordData, l: usize, k: usize) -> Result<RootVector> {
    if k == 0 || l > wd.len() || k > l {
        return Err(Error::Input(format!("M[{},{}] is not an interval of the word", l, k)));
    }
    let j = wd.color(k);
    if wd.color(l) != j {
        return Err(Error::Input(format!("M[{},{}] joins positions of different colors", l, k)));
    }
    Ok(wd.mu_diff(wd.maps.minus(k), l, j))
}

/// Returns `d` with `sum_k b_kj lambda_ki = d delta_ij` for all rows `i` and mutable `j`.
pub fn check_compatible(lambda: &[Vec<i64>], b: &ExchangeMatrix) -> Result<i64> {
    let r = lambda.len();
    if b.nrows() != r {
        return Err(Error::Input("exchange matrix and lambda have different sizes".into()));
    }
    let mut d = None;
    let mut bad = Vec::new();
    for (c, &j) in b.mutable.iter().enumerate() {
        for i in 1..=r {
            let s: i64 = (0..r).map(|k| b.rows[k][c] * lambda[k][i - 1]).sum();
            if i == j {
                match d {
                    None if s > 0 => d = Some(s),
                    Some(x) if x == s => {}
                    _ => bad.push((i, j)),
                }
            } else if s != 0 {
                bad.push((i, j));
            }
        }
    }
    if !bad.is_empty() {
        let list: Vec<String> = bad.iter().map(|(i, j)| format!("({},{})", i, j)).collect();
        return Err(Error::Incompatible(format!("relation fails at (i, j) = {}", list.join(", "))));
    }
    d.ok_or_else(|| Error::Incompatible("no mutable columns, d is undetermined".into()))
}

/// `N(beta) = (beta, beta)/2 - deg(beta)`.
pub fn n_exponent(cartan: &CartanMatrix, beta: &RootVector) -> i64 {
    cartan.form(beta, beta) / 2 - beta.height()
}

/// A quantum seed whose cluster is expanded in the fixed initial frame.
#[derive(Clone, Debug)]
pub struct QuantumSeed {
    pub word: Arc<WordData>,
    pub frame: Arc<TorusFrame>,
    pub cluster: Vec<TorusElement>,
    pub lambda: Vec<Vec<i64>>,
    pub exchange: ExchangeMatrix,
    pub dims: Vec<RootVector>,
    pub labels: Vec<Option<Label>>,
}

impl PartialEq for QuantumSeed {
    fn eq(&self, other: &Self) -> bool {
        self.word.word == other.word.word
            && self.word.cartan == other.word.cartan
            && self.frame == other.frame
            && self.cluster == other.cluster
            && self.lambda == other.lambda
            && self.exchange == other.exchange
            && self.dims == other.dims
            && self.labels == other.labels
    }
}

impl QuantumSeed {
    pub fn initial(wd: Arc<WordData>) -> Result<Self> {
        let (_, exchange) = build_gamma_btilde(&wd);
        let lambda = build_rhl(&wd).l;
        let dims = dim_vectors(&wd);
        let sigma = dims.iter().map(|d| n_exponent(&wd.cartan, d)).collect();
        let frame = Arc::new(TorusFrame::new(lambda.clone(), dims.clone(), sigma)?);
        let r = wd.len();
        let cluster = (1..=r).map(|k| TorusElement::generator(&frame, k)).collect();
        let labels = (1..=r).map(|k| Some(Label { l: k, k: wd.maps.kmin(k) })).collect();
        let seed = Self { word: wd, frame, cluster, lambda, exchange, dims, labels };
        seed.check_invariants()?;
        Ok(seed)
    }

    pub fn from_word(cartan: CartanMatrix, word: ReducedWord) -> Result<Self> {
        Self::initial(Arc::new(WordData::new(cartan, word)?))
    }

    pub fn from_letters(cartan: CartanMatrix, letters: &[usize]) -> Result<Self> {
        Self::initial(Arc::new(WordData::from_letters(cartan, letters)?))
    }

    pub fn len(&self) -> usize {
        self.cluster.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cluster.is_empty()
    }

    /// Cluster variable at the 1-based position `k`.
    pub fn variable(&self, k: usize) -> &TorusElement {
        &self.cluster[k - 1]
    }

    pub fn lambda_at(&self, i: usize, j: usize) -> i64 {
        self.lambda[i - 1][j - 1]
    }

    pub fn dim(&self, k: usize) -> &RootVector {
        &self.dims[k - 1]
    }

    pub fn position_of(&self, label: Label) -> Option<usize> {
        self.labels.iter().position(|x| *x == Some(label)).map(|p| p + 1)
    }

    /// Compatibility with `d = 2`, degree bookkeeping and the column kernel condition.
    pub fn check_invariants(&self) -> Result<()> {
        if !self.exchange.mutable.is_empty() {
            let d = check_compatible(&self.lambda, &self.exchange)?;
            if d != 2 {
                return Err(Error::Invariant(format!("compatibility degree is {}, expected 2", d)));
            }
        }
        for (k, x) in self.cluster.iter().enumerate() {
            match x.degree() {
                Some(g) if g == self.dims[k] => {}
                g => {
                    return Err(Error::Invariant(format!(
                        "variable {} has degree {:?}, expected {}",
                        k + 1,
                        g.map(|g| g.to_string()),
                        self.dims[k]
                    )))
                }
            }
        }
        let n = self.word.rank();
        for &k in &self.exchange.mutable {
            let mut s = RootVector::zero(n);
            for j in 1..=self.len() {
                s += &(self.exchange.get(j, k) * self.dim(j));
            }
            if !s.is_zero() {
                return Err(Error::Invariant(format!("column {} does not annihilate the dimension vectors", k)));
            }
        }
        Ok(())
    }

    pub fn to_wire(&self) -> SeedWire {
        SeedWire {
            cartan: self.word.cartan.clone(),
            word: self.word.word.letters(),
            frame: (*self.frame).clone(),
            lambda: self.lambda.clone(),
            exchange: self.exchange.clone(),
            dims: self.dims.clone(),
            labels: self.labels.clone(),
            cluster: self.cluster.iter().map(|x| serde_json::to_value(x).expect("serializable")).collect(),
        }
    }

    pub fn from_wire(w: SeedWire) -> Result<Self> {
        let seed = Self::from_wire_unchecked(w)?;
        seed.check_invariants()?;
        Ok(seed)
    }

    /// Load without checking the seed invariants; shapes are still validated.
    pub fn from_wire_unchecked(w: SeedWire) -> Result<Self> {
        let wd = Arc::new(WordData::from_letters(w.cartan, &w.word)?);
        let frame = Arc::new(TorusFrame::new(w.frame.lambda, w.frame.degrees, w.frame.sigma_exponents)?);
        let cluster = w.cluster.iter().map(|v| TorusElement::from_json(&frame, v)).collect::<Result<Vec<_>>>()?;
        let r = wd.len();
        if cluster.len() != r || w.dims.len() != r || w.labels.len() != r || w.lambda.len() != r || frame.rank() != r {
            return Err(Error::Input("seed data does not match the word length".into()));
        }
        let m = w.exchange.mutable.len();
        if w.lambda.iter().any(|row| row.len() != r)
            || w.exchange.rows.len() != r
            || w.exchange.rows.iter().any(|row| row.len() != m)
            || w.exchange.mutable.iter().any(|&k| k == 0 || k > r)
        {
            return Err(Error::Input("lambda or exchange matrix has the wrong shape".into()));
        }
        Ok(Self {
            word: wd,
            frame,
            cluster,
            lambda: w.lambda,
            exchange: w.exchange,
            dims: w.dims,
            labels: w.labels,
        })
    }
}

/// JSON form of a seed; matrices are row-major.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeedWire {
    pub cartan: CartanMatrix,
    pub word: Vec<usize>,
    pub frame: TorusFrame,
    pub lambda: Vec<Vec<i64>>,
    pub exchange: ExchangeMatrix,
    pub dims: Vec<RootVector>,
    pub labels: Vec<Option<Label>>,
    pub cluster: Vec<serde_json::Value>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wd(c: CartanMatrix, w: &[usize]) -> WordData {
        WordData::from_letters(c, w).unwrap()
    }

    fn a3() -> WordData {
        wd(CartanMatrix::type_a(3), &[1, 2, 1, 3, 2, 1])
    }

    #[test]
    fn a2_quiver() {
        let w = wd(CartanMatrix::type_a(2), &[1, 2, 1]);
        let (mut arrows, b) = build_gamma_btilde(&w);
        arrows.sort();
        assert_eq!(arrows, vec![(1, 2), (2, 3), (3, 1)]);
        assert_eq!(b.mutable, vec![1]);
        assert_eq!(b.column(1), vec![0, 1, -1]);
    }

    #[test]
    fn a3_mutable_positions_and_rank_one() {
        let (_, b) = build_gamma_btilde(&a3());
        assert_eq!(b.mutable, vec![1, 2, 3]);
        let (arrows, b) = build_gamma_btilde(&wd(CartanMatrix::type_a(1), &[1]));
        assert!(arrows.is_empty());
        assert!(b.mutable.is_empty());
    }

    #[test]
    fn a2_rhl() {
        let m = build_rhl(&wd(CartanMatrix::type_a(2), &[1, 2, 1]));
        assert_eq!(m.r, vec![vec![1, 0, 0], vec![1, 1, 0], vec![-1, 1, 1]]);
        assert_eq!(m.h, vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 0, 1]]);
        assert_eq!(m.l, vec![vec![0, -1, 1], vec![1, 0, 0], vec![-1, 0, 0]]);
    }

    #[test]
    fn a3_lambda_is_skew_and_h_is_identity_without_repeats() {
        let l = build_rhl(&a3()).l;
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(l[i][j], -l[j][i]);
            }
        }
        let h = build_rhl(&wd(CartanMatrix::type_d4(), &[1, 2, 3, 4])).h;
        for (i, row) in h.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                assert_eq!(x, i64::from(i == j));
            }
        }
    }

    #[test]
    fn a3_dims() {
        let w = a3();
        let d = dim_vectors(&w);
        assert_eq!(d[4], RootVector(vec![1, 2, 1]));
        assert_eq!(interval_dim(&w, 3, 3).unwrap(), RootVector(vec![0, 1, 0]));
        for k in 1..=6 {
            assert_eq!(interval_dim(&w, k, w.maps.kmin(k)).unwrap(), d[k - 1]);
        }
        assert!(interval_dim(&w, 2, 1).is_err());
    }

    #[test]
    fn compatibility_degree() {
        for w in [a3(), wd(CartanMatrix::type_a(2), &[1, 2, 1])] {
            let (_, b) = build_gamma_btilde(&w);
            assert_eq!(check_compatible(&build_rhl(&w).l, &b).unwrap(), 2);
        }
        let w = a3();
        let (_, mut b) = build_gamma_btilde(&w);
        for row in &mut b.rows {
            row.iter_mut().for_each(|x| *x = 0);
        }
        assert!(check_compatible(&build_rhl(&w).l, &b).is_err());
    }

    #[test]
    fn flipped_entry_is_named() {
        let w = wd(CartanMatrix::type_a(2), &[1, 2, 1]);
        let (_, b) = build_gamma_btilde(&w);
        let mut l = build_rhl(&w).l;
        l[1][2] = 1;
        l[2][1] = -1;
        let err = check_compatible(&l, &b).unwrap_err().to_string();
        assert!(err.contains("(3,1)") || err.contains("(2,1)"), "{}", err);
    }

    #[test]
    fn qtor3_weight_pairing_reproduces_lambda() {
        use crate::rootsys::Weight;
        for w in [a3(), wd(CartanMatrix::type_d4(), &[4, 3, 2, 1, 3, 4])] {
            let l = build_rhl(&w).l;
            let dims = dim_vectors(&w);
            let n = w.rank();
            for k in 1..=w.len() {
                for m in k + 1..=w.len() {
                    let il = w.color(m);
                    let mut omega = vec![0; n];
                    omega[il] = 2;
                    // w_{i_l} + mu(l, i_l) = 2 w_{i_l} - dim V_l
                    let x = Weight { omega, root: w.mu(m, il).root.clone() };
                    assert_eq!(w.pair(&x, &dims[k - 1]), l[k - 1][m - 1], "k={} l={}", k, m);
                }
            }
        }
    }

    #[test]
    fn seed_round_trips_through_json() {
        let s = QuantumSeed::initial(Arc::new(a3())).unwrap();
        let text = serde_json::to_string(&s.to_wire()).unwrap();
        let back = QuantumSeed::from_wire(serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, s);
        assert_eq!(s.labels[2], Some(Label { l: 3, k: 1 }));
    }
}
