//! Quantum mutation of seeds, tracked in the fixed initial frame.

use crate::error::{Error, Result};
use crate::qarith::LaurentPoly;
use crate::qtorus::TorusElement;
use crate::rootsys::RootVector;
use crate::seed::{mat_mul, transpose, ExchangeMatrix, Label, QuantumSeed};

/// `mu_k(L, B) = (E^T L E, E B F)`.
pub fn mutate_pair(lambda: &[Vec<i64>], b: &ExchangeMatrix, k: usize) -> Result<(Vec<Vec<i64>>, ExchangeMatrix)> {
    let Some(kc) = b.column_of(k) else { return Err(Error::Frozen(k)) };
    let r = lambda.len();
    let m = b.mutable.len();
    let mut e = vec![vec![0i64; r]; r];
    for (i, row) in e.iter_mut().enumerate() {
        row[i] = 1;
        row[k - 1] = if i == k - 1 { -1 } else { (-b.rows[i][kc]).max(0) };
    }
    let mut f = vec![vec![0i64; m]; m];
    for (j, row) in f.iter_mut().enumerate() {
        row[j] = 1;
    }
    for j in 0..m {
        f[kc][j] = if j == kc { -1 } else { b.rows[k - 1][j].max(0) };
    }
    let l2 = mat_mul(&mat_mul(&transpose(&e), lambda), &e);
    let b2 = mat_mul(&mat_mul(&e, &b.rows), &f);
    Ok((l2, ExchangeMatrix { mutable: b.mutable.clone(), rows: b2 }))
}

/// `[T_i, T_j] = ((dim T_i, dim T_j) + lambda_ij) / 2`.
pub fn hom_dim(seed: &QuantumSeed, i: usize, j: usize) -> Result<i64> {
    let s = seed.word.form(seed.dim(i), seed.dim(j)) + seed.lambda_at(i, j);
    if s % 2 != 0 || s < 0 {
        return Err(Error::Invariant(format!("Hom dimension between positions {} and {} is {}/2", i, j, s)));
    }
    Ok(s / 2)
}

/// `Y_R = q^{-alpha(R)} Y_{T_1}^{a_1} ... Y_{T_r}^{a_r}` for `R = T^a`.
pub fn y_monomial(seed: &QuantumSeed, a: &[u32]) -> Result<TorusElement> {
    let r = seed.len();
    if a.len() != r {
        return Err(Error::Input(format!("multiplicity vector has length {}, expected {}", a.len(), r)));
    }
    let mut alpha = 0i64;
    for i in 1..=r {
        let ai = i64::from(a[i - 1]);
        if ai == 0 {
            continue;
        }
        alpha += ai * (ai - 1) / 2 * hom_dim(seed, i, i)?;
        for j in i + 1..=r {
            let aj = i64::from(a[j - 1]);
            if aj != 0 {
                alpha += ai * aj * hom_dim(seed, i, j)?;
            }
        }
    }
    let mut out = TorusElement::one(&seed.frame);
    for (k, &ak) in a.iter().enumerate() {
        if ak > 0 {
            out = out.mul(&seed.cluster[k].pow(ak))?;
        }
    }
    Ok(out.q_shift(-alpha))
}

/// The two sides of the exchange at `k`: multiplicities of `T'_k` and `T''_k`.
pub fn exchange_multiplicities(seed: &QuantumSeed, k: usize) -> Result<(Vec<u32>, Vec<u32>)> {
    if !seed.exchange.is_mutable(k) {
        return Err(Error::Frozen(k));
    }
    let col = seed.exchange.column(k);
    let neg = col.iter().map(|&b| if b < 0 { (-b) as u32 } else { 0 }).collect();
    let pos = col.iter().map(|&b| if b > 0 { b as u32 } else { 0 }).collect();
    Ok((neg, pos))
}

/// `[T_k^*, T_k] = sum_{b_jk > 0} b_jk [T_j, T_k] - [T_k, T_k]`.
pub fn exchange_exponent(seed: &QuantumSeed, k: usize) -> Result<i64> {
    let (_, pos) = exchange_multiplicities(seed, k)?;
    let mut s = -hom_dim(seed, k, k)?;
    for (j, &m) in pos.iter().enumerate() {
        if m > 0 {
            s += i64::from(m) * hom_dim(seed, j + 1, k)?;
        }
    }
    Ok(s)
}

/// The right-hand side `q^{[T_k^*,T_k]} (q^{-1} Y_{T'} + Y_{T''})` of the exchange relation.
pub fn exchange_numerator(seed: &QuantumSeed, k: usize) -> Result<TorusElement> {
    let (neg, pos) = exchange_multiplicities(seed, k)?;
    let e = exchange_exponent(seed, k)?;
    let sum = y_monomial(seed, &neg)?.q_shift(-1).add(&y_monomial(seed, &pos)?)?;
    Ok(sum.q_shift(e))
}

/// Mutate at `k`; the new variable gets no label.
pub fn mutate_seed(seed: &QuantumSeed, k: usize) -> Result<QuantumSeed> {
    mutate_seed_labeled(seed, k, None)
}

pub fn mutate_seed_labeled(seed: &QuantumSeed, k: usize, label: Option<Label>) -> Result<QuantumSeed> {
    let numerator = exchange_numerator(seed, k)?;
    let new_var = numerator.right_divide_exact(seed.variable(k))?;
    let (lambda, exchange) = mutate_pair(&seed.lambda, &seed.exchange, k)?;
    let n = seed.word.rank();
    let mut dim = -seed.dim(k);
    for j in 1..=seed.len() {
        let b = seed.exchange.get(j, k);
        if b < 0 {
            dim += &((-b) * seed.dim(j));
        }
    }
    debug_assert_eq!(dim.len(), n);
    let mut out = seed.clone();
    out.cluster[k - 1] = new_var;
    out.lambda = lambda;
    out.exchange = exchange;
    out.dims[k - 1] = dim;
    out.labels[k - 1] = label;
    out.check_invariants()?;
    for i in 1..=out.len() {
        hom_dim(&out, i, k)?;
    }
    Ok(out)
}

/// Apply a sequence of mutations.
pub fn mutate_sequence(seed: &QuantumSeed, seq: &[usize]) -> Result<QuantumSeed> {
    let mut s = seed.clone();
    for &k in seq {
        s = mutate_seed(&s, k)?;
    }
    Ok(s)
}

/// Pairwise `q`-commutation exponents of the cluster expansions, or the first failing pair.
pub fn observed_lambda(seed: &QuantumSeed) -> Result<Vec<Vec<i64>>> {
    let r = seed.len();
    let mut l = vec![vec![0i64; r]; r];
    for i in 0..r {
        for j in i + 1..r {
            match seed.cluster[i].q_commutation(&seed.cluster[j])? {
                Some(e) => {
                    l[i][j] = e;
                    l[j][i] = -e;
                }
                None => {
                    return Err(Error::Invariant(format!("variables {} and {} do not q-commute", i + 1, j + 1)))
                }
            }
        }
    }
    Ok(l)
}

/// `sigma(Y) = q^{N(dim)} Y` for every cluster variable.
pub fn sigma_defects(seed: &QuantumSeed) -> Vec<usize> {
    (1..=seed.len())
        .filter(|&k| {
            let y = seed.variable(k);
            let n = crate::seed::n_exponent(&seed.word.cartan, seed.dim(k));
            y.sigma() != y.q_shift(n)
        })
        .collect()
}

/// The dimension vector the mutation at `k` would assign.
pub fn mutated_dim(seed: &QuantumSeed, k: usize) -> Result<RootVector> {
    let (neg, _) = exchange_multiplicities(seed, k)?;
    let mut dim = -seed.dim(k);
    for (j, &m) in neg.iter().enumerate() {
        dim += &(i64::from(m) * seed.dim(j + 1));
    }
    Ok(dim)
}

/// `q^e` as a coefficient.
pub fn qp(e: i64) -> LaurentPoly {
    LaurentPoly::q_pow(e)
}
