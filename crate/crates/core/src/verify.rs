//! Packaged verification suites over a seed.

use std::fmt;
use std::str::FromStr;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mutation::{mutate_seed, observed_lambda, sigma_defects};
use crate::pbw::{canonical_condition_checks, expand_in_pbw, graded_rank, PbwContext};
use crate::qarith::LaurentPoly;
use crate::qmatrix::{standard_cases, verify_identity_suite};
use crate::qtorus::TorusElement;
use crate::rootsys::{CartanMatrix, RootVector, Weight, WordData};
use crate::seed::{check_compatible, QuantumSeed};
use crate::tsystem::{run_schedule, solve_direct, verify_identities};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Compat,
    Laurent,
    Pbw,
    Qmatrix,
    Sigma,
    Tsystem,
}

impl Suite {
    /// All suites, alphabetical.
    pub const ALL: [Suite; 6] = [Suite::Compat, Suite::Laurent, Suite::Pbw, Suite::Qmatrix, Suite::Sigma, Suite::Tsystem];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Compat => "compat",
            Suite::Laurent => "laurent",
            Suite::Pbw => "pbw",
            Suite::Qmatrix => "qmatrix",
            Suite::Sigma => "sigma",
            Suite::Tsystem => "tsystem",
        }
    }

    /// Parse a suite name; `all` expands to every suite.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>> {
        let mut out = Vec::new();
        for part in s.split([',', '+']).map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                out.extend(Suite::ALL);
            } else {
                out.push(part.parse()?);
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown suite {:?}", s)))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Fail,
    Pass,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn new(suite: Suite, name: impl Into<String>, ok: bool, detail: Option<String>) -> Self {
        let status = if ok { Status::Pass } else { Status::Fail };
        Self { suite: suite.name().into(), name: name.into(), status, detail }
    }

    fn from_result(suite: Suite, name: impl Into<String>, r: Result<Option<String>>) -> Self {
        match r {
            Ok(None) => Self::new(suite, name, true, None),
            Ok(Some(d)) => Self::new(suite, name, false, Some(d)),
            Err(e) => Self::new(suite, name, false, Some(e.to_string())),
        }
    }

    fn skip(suite: Suite, name: impl Into<String>, why: &str) -> Self {
        Self { suite: suite.name().into(), name: name.into(), status: Status::Skip, detail: Some(why.into()) }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub rng_seed: u64,
    pub sequences: usize,
    pub max_len: usize,
    /// Largest `|u|`, `|v|` for the quantum-matrix identity cases.
    pub qmatrix_max_len: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { rng_seed: 20100601, sequences: 100, max_len: 8, qmatrix_max_len: 2 }
    }
}

/// Random mutation sequences over the mutable positions, without immediate repeats.
pub fn random_sequences(seed: &QuantumSeed, count: usize, max_len: usize, rng_seed: u64) -> Vec<Vec<usize>> {
    let m = &seed.exchange.mutable;
    if m.is_empty() || max_len == 0 {
        return Vec::new();
    }
    let mut rng = StdRng::seed_from_u64(rng_seed);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            let mut seq: Vec<usize> = Vec::with_capacity(len);
            while seq.len() < len {
                let k = m[rng.gen_range(0..m.len())];
                if m.len() == 1 || seq.last() != Some(&k) {
                    seq.push(k);
                }
            }
            seq
        })
        .collect()
}

fn seq_name(seq: &[usize]) -> String {
    let s: Vec<String> = seq.iter().map(|k| k.to_string()).collect();
    format!("sequence {}", s.join(","))
}

/// Walk a mutation sequence, calling `step` on every intermediate seed.
fn walk<F>(seed: &QuantumSeed, seq: &[usize], mut step: F) -> Result<Option<String>>
where
    F: FnMut(&QuantumSeed, usize) -> Result<Option<String>>,
{
    let mut s = seed.clone();
    for (n, &k) in seq.iter().enumerate() {
        s = mutate_seed(&s, k)?;
        if let Some(msg) = step(&s, k)? {
            return Ok(Some(format!("after step {} (k = {}): {}", n + 1, k, msg)));
        }
    }
    Ok(None)
}

fn compat_suite(seed: &QuantumSeed, opts: &VerifyOptions) -> Vec<Check> {
    let s = Suite::Compat;
    let mut out = Vec::new();
    let l = &seed.lambda;
    let asym: Vec<String> = (0..l.len())
        .flat_map(|i| (i + 1..l.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| l[i][j] != -l[j][i])
        .map(|(i, j)| format!("({},{})", i + 1, j + 1))
        .collect();
    let skew_ok = asym.is_empty();
    out.push(Check::new(s, "L is skew-symmetric", skew_ok, (!skew_ok).then(|| format!("fails at (i, j) = {}", asym.join(", ")))));
    let initial = if seed.exchange.mutable.is_empty() {
        Ok(None)
    } else {
        check_compatible(&seed.lambda, &seed.exchange).map(|d| (d != 2).then(|| format!("d = {}", d)))
    };
    let initial_ok = matches!(initial, Ok(None));
    out.push(Check::from_result(s, "initial pair has d = 2", initial));
    if !initial_ok || !skew_ok {
        return out;
    }
    for seq in random_sequences(seed, opts.sequences, opts.max_len, opts.rng_seed) {
        let r = walk(seed, &seq, |t, _| {
            let d = check_compatible(&t.lambda, &t.exchange)?;
            Ok((d != 2).then(|| format!("d = {}", d)))
        });
        out.push(Check::from_result(s, seq_name(&seq), r));
    }
    out
}

fn laurent_suite(seed: &QuantumSeed, opts: &VerifyOptions) -> Vec<Check> {
    let s = Suite::Laurent;
    random_sequences(seed, opts.sequences, opts.max_len, opts.rng_seed)
        .into_iter()
        .map(|seq| {
            let r = walk(seed, &seq, |t, k| {
                if !t.variable(k).is_q_integral() {
                    return Ok(Some("expansion is not q-integral".into()));
                }
                let seen = observed_lambda(t)?;
                Ok((seen != t.lambda).then(|| "q-commutation exponents differ from tracked L".into()))
            });
            Check::from_result(s, seq_name(&seq), r)
        })
        .collect()
}

fn sigma_suite(seed: &QuantumSeed, opts: &VerifyOptions) -> Vec<Check> {
    let s = Suite::Sigma;
    let defects = |t: &QuantumSeed, k: usize| -> Result<Option<String>> {
        Ok(sigma_defects(t).contains(&k).then(|| format!("sigma eigenvalue fails at position {}", k)))
    };
    let mut out = Vec::new();
    let init = sigma_defects(seed);
    out.push(Check::new(s, "initial variables", init.is_empty(), (!init.is_empty()).then(|| format!("{:?}", init))));
    for seq in random_sequences(seed, opts.sequences, opts.max_len, opts.rng_seed) {
        out.push(Check::from_result(s, seq_name(&seq), walk(seed, &seq, defects)));
    }
    out
}

/// `(w_{i_k} - lambda_k, w_{i_l} + lambda_l)` with `lambda_k = mu(k, i_k)`.
pub fn flag_exponent(wd: &WordData, k: usize, l: usize) -> i64 {
    let il = wd.color(l);
    let dim_k = -&wd.mu(k, wd.color(k)).root;
    let mut omega = vec![0; wd.rank()];
    omega[il] = 2;
    let x = Weight { omega, root: wd.mu(l, il).root.clone() };
    wd.pair(&x, &dim_k)
}

fn tsystem_suite(seed: &QuantumSeed) -> Vec<Check> {
    let s = Suite::Tsystem;
    let mut out = Vec::new();
    let scheduled = run_schedule(seed);
    let table = match scheduled {
        Ok((_, t)) => {
            out.push(Check::new(s, "schedule completes", true, None));
            t
        }
        Err(e) => {
            out.push(Check::new(s, "schedule completes", false, Some(e.to_string())));
            return out;
        }
    };
    let direct = solve_direct(seed).map(|d| (d != table).then(|| "tables differ".to_string()));
    out.push(Check::from_result(s, "direct solver agrees with schedule", direct));
    match verify_identities(&table, &seed.word) {
        Ok(res) => {
            for ((b, d), r) in res {
                out.push(Check::new(s, format!("identity ({},{})", b, d), r.is_zero(), (!r.is_zero()).then(|| r.to_string())));
            }
        }
        Err(e) => out.push(Check::new(s, "identities", false, Some(e.to_string()))),
    }
    let wd = &seed.word;
    let mut bad = Vec::new();
    for k in 1..=wd.len() {
        for l in k + 1..=wd.len() {
            let (x, y) = (table.get(0, k), table.get(0, l));
            let seen = match (x, y) {
                (Ok(x), Ok(y)) => x.q_commutation(y).ok().flatten(),
                _ => None,
            };
            let form = flag_exponent(wd, k, l);
            if seen != Some(form) || form != seed.lambda_at(k, l) {
                bad.push(format!("({},{}): torus {:?}, form {}, lambda {}", k, l, seen, form, seed.lambda_at(k, l)));
            }
        }
    }
    out.push(Check::new(s, "flag minor commutation", bad.is_empty(), (!bad.is_empty()).then(|| bad.join("; "))));
    out
}

/// PBW leading vector of `D(b, d) = Y_{M[d, b^+]}`: one for each position of
/// color `i_d` in `[b^+, d]`.
pub fn minor_leading_vector(wd: &WordData, b: usize, d: usize) -> Vec<u32> {
    let i = wd.color(d);
    let start = if b == 0 { 1 } else { b + 1 };
    (1..=wd.len()).map(|s| u32::from(s >= start && s <= d && wd.color(s) == i)).collect()
}

fn pbw_suite(seed: &QuantumSeed) -> Vec<Check> {
    let s = Suite::Pbw;
    let ctx = match PbwContext::new(seed) {
        Ok(c) => c,
        Err(e) => return vec![Check::new(s, "generators", false, Some(e.to_string()))],
    };
    let mut out = Vec::new();
    let mut degrees: Vec<RootVector> = Vec::new();
    for (&(b, d), x) in &ctx.table.entries {
        let name = format!("D({},{})", b, d);
        let a = minor_leading_vector(&ctx.seed.word, b, d);
        let r = expand_in_pbw(x, &ctx).and_then(|e| {
            if e.polynomial_coeffs().is_none() {
                return Ok(Some("coefficients are not polynomial".to_string()));
            }
            let rep = canonical_condition_checks(x, &a, &ctx)?;
            Ok((!rep.passed()).then(|| format!("{:?}", rep)))
        });
        out.push(Check::from_result(s, name, r));
        if let Some(g) = x.degree() {
            if !degrees.contains(&g) {
                degrees.push(g);
            }
        }
    }
    degrees.sort();
    for g in degrees {
        let r = graded_rank(&ctx, &g).map(|(rank, n)| (rank != n).then(|| format!("rank {} of {}", rank, n)));
        out.push(Check::from_result(s, format!("graded rank at {}", g), r));
    }
    out
}

/// The word `(s_j ... s_1)(s_{j+1} ... s_2) ... (s_n ... s_k)` of `Mat(k, j)`, read as `i_1 .. i_r`.
pub fn mat_word(k: usize, j: usize) -> Vec<usize> {
    let n = j + k - 1;
    let mut written = Vec::new();
    for t in 0..k {
        written.extend((1 + t..=j + t).rev());
    }
    debug_assert_eq!(written.last(), Some(&k));
    debug_assert!(written.iter().all(|&x| x <= n));
    written.reverse();
    written
}

/// `pos[a-1][b-1]` = the position `m` with `beta_m = alpha_a + ... + alpha_{n+1-b}`.
pub fn mat_dictionary(wd: &WordData, k: usize, j: usize) -> Result<Vec<Vec<usize>>> {
    let n = j + k - 1;
    let mut out = vec![vec![0; j]; k];
    for a in 1..=k {
        for b in 1..=j {
            let beta = RootVector((1..=n).map(|t| i64::from(t >= a && t <= n + 1 - b)).collect());
            out[a - 1][b - 1] = wd
                .betas
                .iter()
                .position(|x| *x == beta)
                .map(|p| p + 1)
                .ok_or_else(|| Error::Input(format!("no root {} in the word", beta)))?;
        }
    }
    Ok(out)
}

/// Residuals of the four quantum-matrix relation families for the generators `x`.
pub fn matrix_relation_residuals(x: &[Vec<TorusElement>]) -> Result<Vec<(String, TorusElement)>> {
    let k = x.len();
    let j = x.first().map_or(0, Vec::len);
    let q = LaurentPoly::q_pow(1);
    let qq = LaurentPoly::from_pairs(&[(2, 1), (-2, -1)]);
    let mut out = Vec::new();
    for a in 0..k {
        for b in 0..j {
            for c in 0..k {
                for d in 0..j {
                    let (xab, xcd) = (&x[a][b], &x[c][d]);
                    let name = format!("x{}{} x{}{}", a + 1, b + 1, c + 1, d + 1);
                    let res = if a == c && b < d || b == d && a < c {
                        xab.mul(xcd)?.sub(&xcd.mul(xab)?.scale(&q))?
                    } else if a < c && b > d {
                        xab.mul(xcd)?.sub(&xcd.mul(xab)?)?
                    } else if a < c && b < d {
                        let extra = x[a][d].mul(&x[c][b])?.scale(&qq);
                        xab.mul(xcd)?.sub(&xcd.mul(xab)?)?.sub(&extra)?
                    } else {
                        continue;
                    };
                    out.push((name, res));
                }
            }
        }
    }
    Ok(out)
}

pub const D4_QUADRIC_WORD: [usize; 6] = [4, 3, 2, 1, 3, 4];

/// Residuals of the quadric relations and the two frozen-variable formulas.
pub fn d4_quadric_residuals(ctx: &PbwContext) -> Result<Vec<(String, TorusElement)>> {
    let m = |k: usize| &ctx.generators[k - 1];
    let q = |e: i64| LaurentPoly::q_pow(e);
    let qq = LaurentPoly::from_pairs(&[(2, 1), (-2, -1)]);
    let mut out = Vec::new();
    for i in 1..=6 {
        for j in i + 1..=6 {
            if i + j != 7 {
                out.push((format!("M{} M{}", j, i), m(j).mul(m(i))?.sub(&m(i).mul(m(j))?.scale(&q(1)))?));
            }
        }
    }
    out.push(("M4 M3".into(), m(4).mul(m(3))?.sub(&m(3).mul(m(4))?)?));
    let m34 = m(3).mul(m(4))?;
    let m25 = m(2).mul(m(5))?;
    out.push(("M5 M2".into(), m(5).mul(m(2))?.sub(&m25)?.sub(&m34.scale(&qq))?));
    let inner = m25.sub(&m34.scale(&q(-1)))?;
    out.push(("M6 M1".into(), m(6).mul(m(1))?.sub(&m(1).mul(m(6))?)?.sub(&inner.scale(&qq))?));
    let v = |k: usize| ctx.seed.variable(k);
    out.push(("Y_V5".into(), v(5).sub(&inner)?));
    let pf = m(1).mul(m(6))?.sub(&m25.scale(&q(-1)))?.add(&m34.scale(&q(-2)))?;
    out.push(("Y_V6 quantum Pfaffian".into(), v(6).sub(&pf)?));
    Ok(out)
}

fn type_a_rank(c: &CartanMatrix) -> Option<usize> {
    (*c == CartanMatrix::type_a(c.rank())).then_some(c.rank())
}

fn qmatrix_suite(seed: &QuantumSeed, opts: &VerifyOptions) -> Vec<Check> {
    let s = Suite::Qmatrix;
    let wd = &seed.word;
    let mut out = Vec::new();
    let letters = wd.word.letters();
    if let Some(n) = type_a_rank(&wd.cartan) {
        let big_n = n + 1;
        if big_n <= 4 {
            match verify_identity_suite(big_n, &standard_cases(big_n, opts.qmatrix_max_len)) {
                Ok(res) => {
                    for o in res {
                        let name = format!("minor identity N={} u={:?} v={:?} i={}", big_n, o.case.u, o.case.v, o.case.i);
                        out.push(Check::new(s, name, o.zero, if o.zero { None } else { o.residual }));
                    }
                }
                Err(e) => out.push(Check::new(s, "minor identity", false, Some(e.to_string()))),
            }
        }
        for k in 1..=n {
            let j = n + 1 - k;
            if mat_word(k, j) != letters {
                continue;
            }
            let r = PbwContext::new(seed).and_then(|ctx| {
                let dict = mat_dictionary(wd, k, j)?;
                let x: Vec<Vec<TorusElement>> =
                    dict.iter().map(|row| row.iter().map(|&m| ctx.generators[m - 1].clone()).collect()).collect();
                matrix_relation_residuals(&x)
            });
            push_residuals(&mut out, s, &format!("Mat({},{})", k, j), r);
        }
    }
    if wd.cartan == CartanMatrix::type_d4() && letters == D4_QUADRIC_WORD {
        let r = PbwContext::new(seed).and_then(|ctx| d4_quadric_residuals(&ctx));
        push_residuals(&mut out, s, "D4 quadric", r);
    }
    if out.is_empty() {
        out.push(Check::skip(s, "type A oracle", "no quantum-matrix model applies to this word"));
    }
    out
}

fn push_residuals(out: &mut Vec<Check>, s: Suite, prefix: &str, r: Result<Vec<(String, TorusElement)>>) {
    match r {
        Ok(list) => {
            for (name, res) in list {
                out.push(Check::new(s, format!("{} {}", prefix, name), res.is_zero(), (!res.is_zero()).then(|| res.to_string())));
            }
        }
        Err(e) => out.push(Check::new(s, prefix, false, Some(e.to_string()))),
    }
}

pub fn run_suite(seed: &QuantumSeed, suite: Suite, opts: &VerifyOptions) -> Vec<Check> {
    match suite {
        Suite::Compat => compat_suite(seed, opts),
        Suite::Laurent => laurent_suite(seed, opts),
        Suite::Pbw => pbw_suite(seed),
        Suite::Qmatrix => qmatrix_suite(seed, opts),
        Suite::Sigma => sigma_suite(seed, opts),
        Suite::Tsystem => tsystem_suite(seed),
    }
}
