//! Sparse elimination over the rationals and over prime fields.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vector::Rational;

/// Two 31-bit primes used by default.
pub const DEFAULT_PRIMES: [u64; 2] = [2_147_483_647, 2_147_483_629];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoeffMode {
    Exact,
    Modular(Vec<u64>),
}

impl Default for CoeffMode {
    fn default() -> Self {
        CoeffMode::Modular(DEFAULT_PRIMES.to_vec())
    }
}

/// A sparse matrix stored by columns.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub cols: Vec<Vec<(usize, Rational)>>,
}

impl SparseMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> SparseMatrix {
        SparseMatrix {
            nrows,
            ncols,
            cols: vec![Vec::new(); ncols],
        }
    }

    pub fn from_columns(nrows: usize, cols: Vec<Vec<(usize, Rational)>>) -> SparseMatrix {
        SparseMatrix {
            nrows,
            ncols: cols.len(),
            cols,
        }
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.cols[c]
            .iter()
            .find(|(i, _)| *i == r)
            .map(|(_, x)| x.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// `self · other`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, other.nrows);
        let cols = other
            .cols
            .iter()
            .map(|col| {
                let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
                for (k, x) in col {
                    for (i, y) in &self.cols[*k] {
                        *acc.entry(*i).or_insert_with(Rational::zero) += x * y;
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        SparseMatrix::from_columns(self.nrows, cols)
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.iter().all(|(_, x)| x.is_zero()))
    }

    /// Applies a permutation to the rows and another to the columns; `row_perm[i]`
    /// is the new index of row `i`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> SparseMatrix {
        let mut cols = vec![Vec::new(); self.ncols];
        for (j, col) in self.cols.iter().enumerate() {
            cols[col_perm[j]] = col.iter().map(|(i, x)| (row_perm[*i], x.clone())).collect();
        }
        SparseMatrix::from_columns(self.nrows, cols)
    }
}

trait Field {
    type E: Clone;
    fn is_zero(&self, a: &Self::E) -> bool;
    /// `a − f·b`
    fn sub_mul(&self, a: &Self::E, f: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
}

struct Exact;

impl Field for Exact {
    type E = Rational;
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn sub_mul(&self, a: &Rational, f: &Rational, b: &Rational) -> Rational {
        a - f * b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn inv(&self, a: &Rational) -> Rational {
        a.recip()
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
}

struct ModP(u64);

impl ModP {
    fn reduce(&self, x: &Rational) -> Result<u64> {
        let p = BigInt::from(self.0);
        let num = x.numer().mod_floor(&p).to_u64().expect("reduced");
        let den = x.denom().mod_floor(&p).to_u64().expect("reduced");
        if den == 0 {
            return Err(Error::BadPrime(self.0));
        }
        Ok(num * self.inv(&den) % self.0)
    }
}

impl Field for ModP {
    type E = u64;
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn sub_mul(&self, a: &u64, f: &u64, b: &u64) -> u64 {
        let fb = f * b % self.0;
        (a + self.0 - fb) % self.0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.0
    }
    fn inv(&self, a: &u64) -> u64 {
        let (mut base, mut exp, mut acc) = (*a % self.0, self.0 - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.0;
            }
            base = base * base % self.0;
            exp >>= 1;
        }
        acc
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.0 - a % self.0) % self.0
    }
}

type SparseVec<E> = BTreeMap<usize, E>;

/// Incremental row echelon form over a set of column vectors. Pivots are chosen
/// among the rows of lowest weight to limit fill-in.
struct Echelon<'a, F: Field> {
    field: &'a F,
    row_weight: &'a [usize],
    /// pivot row -> index into `pivots`
    pivot_of_row: HashMap<usize, usize>,
    /// normalized vectors (pivot entry one) with the combination of inserted
    /// columns they represent
    pivots: Vec<(usize, SparseVec<F::E>, Option<SparseVec<F::E>>)>,
}

impl<'a, F: Field> Echelon<'a, F> {
    fn new(field: &'a F, row_weight: &'a [usize]) -> Self {
        Echelon {
            field,
            row_weight,
            pivot_of_row: HashMap::new(),
            pivots: Vec::new(),
        }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` by the pivots; the tracked combination follows along. Returns
    /// the reduced vector.
    fn reduce(
        &self,
        mut v: SparseVec<F::E>,
        track: &mut Option<SparseVec<F::E>>,
    ) -> SparseVec<F::E> {
        let f = self.field;
        let mut queue: BTreeSet<usize> = v
            .keys()
            .filter_map(|r| self.pivot_of_row.get(r).copied())
            .collect();
        while let Some(idx) = queue.pop_first() {
            let (row, pv, ptrack) = &self.pivots[idx];
            let Some(factor) = v.get(row).cloned() else {
                continue;
            };
            for (r, x) in pv {
                let new = match v.get(r) {
                    Some(c) => f.sub_mul(c, &factor, x),
                    None => f.neg(&f.mul(&factor, x)),
                };
                if f.is_zero(&new) {
                    v.remove(r);
                } else {
                    if let Some(&j) = self.pivot_of_row.get(r) {
                        if j > idx {
                            queue.insert(j);
                        }
                    }
                    v.insert(*r, new);
                }
            }
            if let (Some(t), Some(pt)) = (track.as_mut(), ptrack.as_ref()) {
                for (c, x) in pt {
                    let new = match t.get(c) {
                        Some(cur) => f.sub_mul(cur, &factor, x),
                        None => f.neg(&f.mul(&factor, x)),
                    };
                    if f.is_zero(&new) {
                        t.remove(c);
                    } else {
                        t.insert(*c, new);
                    }
                }
            }
        }
        v
    }

    /// Inserts a column; returns the tracked combination if it reduced to zero.
    fn insert(
        &mut self,
        v: SparseVec<F::E>,
        mut track: Option<SparseVec<F::E>>,
    ) -> Option<Option<SparseVec<F::E>>> {
        let v = self.reduce(v, &mut track);
        if v.is_empty() {
            return Some(track);
        }
        let row = *v
            .keys()
            .min_by_key(|r| (self.row_weight[**r], **r))
            .expect("nonempty");
        let f = self.field;
        let inv = f.inv(&v[&row]);
        let v: SparseVec<F::E> = v.into_iter().map(|(r, x)| (r, f.mul(&x, &inv))).collect();
        let track = track.map(|t| t.into_iter().map(|(c, x)| (c, f.mul(&x, &inv))).collect());
        self.pivot_of_row.insert(row, self.pivots.len());
        self.pivots.push((row, v, track));
        None
    }
}

fn row_weights(m: &SparseMatrix) -> Vec<usize> {
    let mut w = vec![0usize; m.nrows];
    for col in &m.cols {
        for (r, _) in col {
            w[*r] += 1;
        }
    }
    w
}

/// Columns ordered by increasing number of nonzeros.
fn column_order(m: &SparseMatrix) -> Vec<usize> {
    let mut order: Vec<usize> = (0..m.ncols).collect();
    order.sort_by_key(|&j| (m.cols[j].len(), j));
    order
}

fn rank_in<F: Field>(field: &F, m: &SparseMatrix, conv: impl Fn(&Rational) -> Result<F::E>) -> Result<usize> {
    let weights = row_weights(m);
    let mut ech = Echelon::new(field, &weights);
    for j in column_order(m) {
        let mut v = SparseVec::new();
        for (r, x) in &m.cols[j] {
            let e = conv(x)?;
            if !field.is_zero(&e) {
                v.insert(*r, e);
            }
        }
        if !v.is_empty() {
            ech.insert(v, None);
        }
    }
    Ok(ech.rank())
}

pub fn rank_exact(m: &SparseMatrix) -> usize {
    rank_in(&Exact, m, |x| Ok(x.clone())).expect("exact arithmetic cannot fail")
}

pub fn rank_mod(m: &SparseMatrix, p: u64) -> Result<usize> {
    if p < 3 || p >= 1 << 32 || !is_prime(p) {
        return Err(Error::BadPrime(p));
    }
    let f = ModP(p);
    rank_in(&f, m, |x| f.reduce(x))
}

/// How a rank was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RankMethod {
    Exact,
    Modular(Vec<u64>),
    /// The primes disagreed or divided a denominator.
    Escalated,
}

/// Rank in the requested mode; disagreeing or unusable primes fall back to exact
/// elimination.
pub fn rank(m: &SparseMatrix, mode: &CoeffMode) -> (usize, RankMethod) {
    match mode {
        CoeffMode::Exact => (rank_exact(m), RankMethod::Exact),
        CoeffMode::Modular(primes) => {
            let ranks: Vec<Result<usize>> = primes.iter().map(|&p| rank_mod(m, p)).collect();
            match ranks.first() {
                Some(Ok(r)) if ranks.iter().all(|x| x.as_ref().ok() == Some(r)) => {
                    (*r, RankMethod::Modular(primes.clone()))
                }
                _ => (rank_exact(m), RankMethod::Escalated),
            }
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A basis of the kernel, exactly.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<Vec<(usize, Rational)>> {
    let weights = row_weights(m);
    let mut ech = Echelon::new(&Exact, &weights);
    let mut out = Vec::new();
    for j in column_order(m) {
        let v: SparseVec<Rational> = m.cols[j].iter().filter(|(_, x)| !x.is_zero()).cloned().collect();
        let track: SparseVec<Rational> = [(j, Rational::one())].into_iter().collect();
        if let Some(Some(t)) = ech.insert(v, Some(track)) {
            out.push(t.into_iter().collect());
        }
    }
    out
}

/// Representatives of `ker(outgoing) / im(incoming)`, where `incoming` maps into
/// the space on which `outgoing` is defined.
pub fn cohomology_representatives(
    incoming: &SparseMatrix,
    outgoing: &SparseMatrix,
) -> Vec<Vec<(usize, Rational)>> {
    let dim = outgoing.ncols;
    let kernel = kernel_basis(outgoing);
    let weights = vec![0usize; dim];
    let mut ech = Echelon::new(&Exact, &weights);
    for col in &incoming.cols {
        let v: SparseVec<Rational> = col.iter().filter(|(_, x)| !x.is_zero()).cloned().collect();
        if !v.is_empty() {
            ech.insert(v, None);
        }
    }
    let mut reps = Vec::new();
    for k in kernel {
        let v: SparseVec<Rational> = k.iter().cloned().collect();
        if ech.insert(v, None).is_none() {
            reps.push(normalize(k));
        }
    }
    reps
}

/// Scales a vector to integer entries with positive first entry and no common
/// factor.
fn normalize(v: Vec<(usize, Rational)>) -> Vec<(usize, Rational)> {
    let den = v.iter().fold(BigInt::one(), |acc, (_, x)| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|(_, x)| (x * Rational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = if ints.first().map_or(false, |x| x.is_negative()) { -1 } else { 1 };
    let g = if g.is_zero() { BigInt::one() } else { g * sign };
    v.into_iter()
        .zip(ints)
        .map(|((i, _), x)| (i, Rational::from_integer(x / &g)))
        .collect()
}
