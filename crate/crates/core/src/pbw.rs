//! Expansion of torus elements in the dual PBW monomials `Y_M(a)`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qarith::{LaurentPoly, RatFunc};
use crate::qtorus::TorusElement;
use crate::rootsys::{RootVector, WordData};
use crate::seed::{n_exponent, QuantumSeed};
use crate::tsystem::{run_schedule, MinorTable};

/// All `a in N^r` with `sum a_k beta_k = gamma`, in lex order.
pub fn enumerate_degree(wd: &WordData, gamma: &RootVector) -> Vec<Vec<u32>> {
    fn rec(wd: &WordData, k: usize, rest: &RootVector, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k > wd.len() {
            if rest.is_zero() {
                out.push(cur.clone());
            }
            return;
        }
        let beta = wd.beta(k);
        let mut rest = rest.clone();
        let mut m = 0;
        loop {
            cur.push(m);
            rec(wd, k + 1, &rest, cur, out);
            cur.pop();
            rest -= beta;
            if !rest.in_q_plus() {
                break;
            }
            m += 1;
        }
    }
    if !gamma.in_q_plus() {
        return Vec::new();
    }
    let mut out = Vec::new();
    rec(wd, 1, gamma, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// `beta(a) = sum a_k beta_k`.
pub fn weight_of(wd: &WordData, a: &[u32]) -> RootVector {
    let mut g = RootVector::zero(wd.rank());
    for (k, &m) in a.iter().enumerate() {
        g += &(i64::from(m) * wd.beta(k + 1));
    }
    g
}

/// The generators `Y_{M_k} = D(k^-, k)` together with the minors they come from.
#[derive(Clone, Debug)]
pub struct PbwContext {
    pub seed: QuantumSeed,
    pub table: MinorTable,
    pub generators: Vec<TorusElement>,
}

impl PbwContext {
    pub fn new(seed: &QuantumSeed) -> Result<Self> {
        let (_, table) = run_schedule(seed)?;
        let wd = &seed.word;
        let generators =
            (1..=wd.len()).map(|k| table.get(wd.maps.minus(k), k).cloned()).collect::<Result<Vec<_>>>()?;
        Ok(Self { seed: seed.clone(), table, generators })
    }

    pub fn word(&self) -> &Arc<WordData> {
        &self.seed.word
    }

    /// `Y_M(a) = Y_{M_1}^{a_1} ... Y_{M_r}^{a_r}`.
    pub fn monomial(&self, a: &[u32]) -> Result<TorusElement> {
        let mut out = TorusElement::one(&self.seed.frame);
        for (k, &m) in a.iter().enumerate() {
            if m > 0 {
                out = out.mul(&self.generators[k].pow(m))?;
            }
        }
        Ok(out)
    }
}

/// Coefficients of an element in the `Y_M(a)` basis of one degree.
#[derive(Clone, Debug, PartialEq)]
pub struct PbwExpansion {
    pub degree: RootVector,
    pub basis: Vec<Vec<u32>>,
    pub coeffs: Vec<RatFunc>,
}

impl PbwExpansion {
    /// The coefficients as Laurent polynomials, if none has a denominator.
    pub fn polynomial_coeffs(&self) -> Option<Vec<LaurentPoly>> {
        self.coeffs.iter().map(RatFunc::as_laurent).collect()
    }

    pub fn coeff(&self, a: &[u32]) -> Option<&RatFunc> {
        self.basis.iter().position(|b| b == a).map(|i| &self.coeffs[i])
    }

    /// `sum coeff * Y_M(a)`; requires polynomial coefficients.
    pub fn resum(&self, ctx: &PbwContext) -> Result<TorusElement> {
        let coeffs =
            self.polynomial_coeffs().ok_or_else(|| Error::Linear("expansion has non-polynomial coefficients".into()))?;
        let mut out = TorusElement::zero(&ctx.seed.frame);
        for (a, c) in self.basis.iter().zip(&coeffs) {
            out = out.add(&ctx.monomial(a)?.scale(c))?;
        }
        Ok(out)
    }
}

/// Row-reduce `cols` (each a sparse column over torus exponents) augmented
/// with `rhs`. Returns the rank of `cols` and, if consistent, the solution.
fn solve(cols: &[TorusElement], rhs: Option<&TorusElement>) -> Result<(usize, Option<Vec<RatFunc>>)> {
    let mut keys = BTreeSet::new();
    for c in cols.iter().chain(rhs) {
        keys.extend(c.terms().map(|(a, _)| a.clone()));
    }
    let index: BTreeMap<Vec<i64>, usize> = keys.into_iter().enumerate().map(|(i, k)| (k, i)).collect();
    let n = cols.len();
    let mut rows = vec![vec![RatFunc::zero(); n + 1]; index.len()];
    for (j, c) in cols.iter().enumerate().map(|(j, c)| (j, Some(c))).chain(std::iter::once((n, rhs))) {
        if let Some(c) = c {
            for (a, x) in c.terms() {
                rows[index[a]][j] = RatFunc::from_poly(x.clone());
            }
        }
    }
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(row, p);
        let inv = RatFunc::from_poly(LaurentPoly::one()).div(&rows[row][col])?;
        for x in rows[row].iter_mut() {
            *x = x.mul(&inv);
        }
        for i in 0..rows.len() {
            if i != row && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for j in 0..=n {
                    let t = rows[row][j].mul(&f);
                    rows[i][j] = rows[i][j].sub(&t);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let rank = pivots.len();
    if rhs.is_none() {
        return Ok((rank, None));
    }
    if rows[rank..].iter().any(|r| !r[n].is_zero()) {
        return Ok((rank, None));
    }
    let mut sol = vec![RatFunc::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        sol[c] = rows[r][n].clone();
    }
    Ok((rank, Some(sol)))
}

/// Rank of the `Y_M(a)` expansions at degree `gamma`, and the number of vectors `a`.
pub fn graded_rank(ctx: &PbwContext, gamma: &RootVector) -> Result<(usize, usize)> {
    let basis = enumerate_degree(ctx.word(), gamma);
    let cols = basis.iter().map(|a| ctx.monomial(a)).collect::<Result<Vec<_>>>()?;
    Ok((solve(&cols, None)?.0, basis.len()))
}

pub fn expand_in_pbw(x: &TorusElement, ctx: &PbwContext) -> Result<PbwExpansion> {
    let degree = x.degree().ok_or_else(|| Error::Input("element is zero or not homogeneous".into()))?;
    let basis = enumerate_degree(ctx.word(), &degree);
    let cols = basis.iter().map(|a| ctx.monomial(a)).collect::<Result<Vec<_>>>()?;
    let (rank, sol) = solve(&cols, Some(x))?;
    if rank != basis.len() {
        return Err(Error::Linear(format!("Y_M(a) at degree {} have rank {} < {}", degree, rank, basis.len())));
    }
    let coeffs = sol.ok_or_else(|| Error::Linear(format!("element is not in the span of Y_M(a) at degree {}", degree)))?;
    Ok(PbwExpansion { degree, basis, coeffs })
}

/// Outcome of the two characterizing conditions for a dual canonical basis element.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CanonicalReport {
    pub leading_is_one: bool,
    /// (a): every other coefficient lies in `q^{-1} Q[q^{-1}]`.
    pub condition_a: bool,
    /// (b): `sigma(x) = q^{N(beta(a))} x`.
    pub condition_b: bool,
    /// `(a, coefficient)` pairs that violate (a).
    pub offending: Vec<(Vec<u32>, String)>,
}

impl CanonicalReport {
    pub fn passed(&self) -> bool {
        self.leading_is_one && self.condition_a && self.condition_b
    }
}

fn in_q_inverse_ring(p: &LaurentPoly) -> bool {
    p.is_q_integral() && p.max_exp().is_none_or(|e| e <= -2)
}

pub fn canonical_condition_checks(x: &TorusElement, a: &[u32], ctx: &PbwContext) -> Result<CanonicalReport> {
    let exp = expand_in_pbw(x, ctx)?;
    let mut offending = Vec::new();
    let mut leading_is_one = false;
    for (b, c) in exp.basis.iter().zip(&exp.coeffs) {
        if b.as_slice() == a {
            leading_is_one = c.as_laurent().is_some_and(|p| p.is_one());
            if !leading_is_one {
                offending.push((b.clone(), c.to_string()));
            }
        } else if c.is_zero() {
            continue;
        } else if !c.as_laurent().is_some_and(|p| in_q_inverse_ring(&p)) {
            offending.push((b.clone(), c.to_string()));
        }
    }
    let condition_a = leading_is_one && offending.is_empty();
    let n = n_exponent(&ctx.word().cartan, &weight_of(ctx.word(), a));
    let condition_b = x.sigma() == x.q_shift(n);
    Ok(CanonicalReport { leading_is_one, condition_a, condition_b, offending })
}
