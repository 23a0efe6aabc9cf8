//! The quantum T-system among unipotent quantum minors `D(b, d)`.

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::mutation::mutate_seed_labeled;
use crate::qtorus::TorusElement;
use crate::rootsys::WordData;
use crate::seed::{Label, QuantumSeed};

/// Exponents of one T-system relation and its product factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TsysData {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    /// `(b^-(j), d^-(j), -a_ij)` for `j != i` with `a_ij != 0`, ascending `j`.
    pub factors: Vec<(usize, usize, u32)>,
}

fn binom2(n: i64) -> i64 {
    n * (n - 1) / 2
}

pub fn exponents_abc(wd: &WordData, b: usize, d: usize) -> Result<TsysData> {
    if b == 0 || b >= d || d > wd.len() {
        return Err(Error::Input(format!("({}, {}) is not a pair 1 <= b < d <= r", b, d)));
    }
    let i = wd.color(b);
    if wd.color(d) != i {
        return Err(Error::Input(format!("positions {} and {} have different colors", b, d)));
    }
    let (bm, dm) = (wd.maps.minus(b), wd.maps.minus(d));
    let a = wd.pair(wd.mu(d, i), &wd.mu_diff(bm, dm, i));
    let bb = wd.pair(wd.mu(dm, i), &wd.mu_diff(bm, d, i));
    let n = wd.rank();
    let cm = &wd.cartan;
    let mut c = 0;
    for j in 0..n {
        if j == i {
            continue;
        }
        for k in j + 1..n {
            if k != i && cm.a(i, j) != 0 && cm.a(i, k) != 0 {
                c += cm.a(i, j) * cm.a(i, k) * wd.pair(wd.mu(d, j), &wd.mu_diff(b, d, k));
            }
        }
        c += binom2(-cm.a(i, j)) * wd.pair(wd.mu(d, j), &wd.mu_diff(b, d, j));
    }
    let factors = (0..n)
        .filter(|&j| j != i && cm.a(i, j) != 0)
        .map(|j| (wd.maps.before(b, j), wd.maps.before(d, j), (-cm.a(i, j)) as u32))
        .collect();
    Ok(TsysData { a, b: bb, c, factors })
}

/// All pairs `1 <= b < d <= r` with `i_b = i_d`, in lex order.
pub fn tsystem_pairs(wd: &WordData) -> Vec<(usize, usize)> {
    let r = wd.len();
    let mut out = Vec::new();
    for b in 1..=r {
        for d in b + 1..=r {
            if wd.color(b) == wd.color(d) {
                out.push((b, d));
            }
        }
    }
    out
}

/// `(b, d) -> D(b, d)`, including the flag minors `D(0, k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MinorTable {
    pub entries: BTreeMap<(usize, usize), TorusElement>,
    one: TorusElement,
}

impl MinorTable {
    fn new(seed: &QuantumSeed) -> Self {
        let mut entries = BTreeMap::new();
        for k in 1..=seed.len() {
            entries.insert((0, k), TorusElement::generator(&seed.frame, k));
        }
        Self { entries, one: TorusElement::one(&seed.frame) }
    }

    /// `D(b, d)`, with `D(b, b) = 1`.
    pub fn get(&self, b: usize, d: usize) -> Result<&TorusElement> {
        if b == d {
            return Ok(&self.one);
        }
        self.entries.get(&(b, d)).ok_or_else(|| Error::Schedule(format!("D({},{}) is not available", b, d)))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl Serialize for MinorTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.entries.len()))?;
        for ((b, d), x) in &self.entries {
            m.serialize_entry(&format!("{},{}", b, d), x)?;
        }
        m.end()
    }
}

fn product_term(table: &MinorTable, t: &TsysData) -> Result<TorusElement> {
    let mut p = table.one.clone();
    for &(x, y, m) in &t.factors {
        p = p.mul(&table.get(x, y)?.pow(m))?;
    }
    Ok(p.q_shift(t.c))
}

/// Run the mutation schedule; returns the final seed and the table of minors.
pub fn run_schedule(seed: &QuantumSeed) -> Result<(QuantumSeed, MinorTable)> {
    let wd = seed.word.clone();
    let mut table = MinorTable::new(seed);
    let mut s = seed.clone();
    for (b, d) in tsystem_pairs(&wd) {
        let from = Label { l: wd.maps.minus(d), k: b };
        let to = Label { l: d, k: wd.maps.plus(b) };
        let Some(pos) = s.position_of(from) else {
            return Err(Error::Schedule(format!("no position labeled {} for the pair ({},{})", from, b, d)));
        };
        s = mutate_seed_labeled(&s, pos, Some(to))?;
        table.entries.insert((b, d), s.variable(pos).clone());
    }
    Ok((s, table))
}

/// Compute every `D(b, d)` by right division in the T-system relation.
pub fn solve_direct(seed: &QuantumSeed) -> Result<MinorTable> {
    let wd = seed.word.clone();
    let mut table = MinorTable::new(seed);
    for (b, d) in tsystem_pairs(&wd) {
        let t = exponents_abc(&wd, b, d)?;
        let (bm, dm) = (wd.maps.minus(b), wd.maps.minus(d));
        let first = table.get(b, dm)?.mul(table.get(bm, d)?)?.q_shift(t.b - 1);
        let rhs = first.add(&product_term(&table, &t)?)?.q_shift(-t.a);
        let x = rhs.right_divide_exact(table.get(bm, dm)?)?;
        table.entries.insert((b, d), x);
    }
    Ok(table)
}

/// One residual per pair, in lex order.
pub fn verify_identities(table: &MinorTable, wd: &WordData) -> Result<Vec<((usize, usize), TorusElement)>> {
    let mut out = Vec::new();
    for (b, d) in tsystem_pairs(wd) {
        let t = exponents_abc(wd, b, d)?;
        let (bm, dm) = (wd.maps.minus(b), wd.maps.minus(d));
        let lhs = table.get(b, d)?.mul(table.get(bm, dm)?)?.q_shift(t.a);
        let first = table.get(b, dm)?.mul(table.get(bm, d)?)?.q_shift(t.b - 1);
        let res = lhs.sub(&first)?.sub(&product_term(table, &t)?)?;
        out.push(((b, d), res));
    }
    Ok(out)
}
