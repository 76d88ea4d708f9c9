//! Exact integer linear algebra: dense Smith normal form with transforms,
//! sparse invariant factors, and sparse rank over Q.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sparse vector: strictly increasing indices with nonzero values.
pub type SparseVec = Vec<(usize, BigInt)>;

/// Big integers as decimal strings in JSON.
pub mod decimal {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(x)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

pub mod decimal_vec {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?.iter().map(|x| x.parse().map_err(D::Error::custom)).collect()
    }
}

/// Dense matrix over Z.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    #[serde(with = "decimal_vec")]
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let data = rows.iter().flat_map(|x| x.iter().map(|&v| BigInt::from(v))).collect();
        Ok(IntMatrix { rows: r, cols: c, data })
    }

    pub fn from_big_rows(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for {rows}x{cols}", data.len())));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.data[i * o.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                match (k + 1..n).find(|&i| !a[i * n + k].is_zero()) {
                    Some(i) => {
                        for j in 0..n {
                            a.swap(k * n + j, i * n + j);
                        }
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j]) / &prev;
                    a[i * n + j] = v;
                }
            }
            prev = a[k * n + k].clone();
        }
        Ok(sign * &a[n * n - 1])
    }

    pub fn to_sparse_columns(&self) -> Vec<SparseVec> {
        (0..self.cols)
            .map(|j| {
                (0..self.rows)
                    .filter(|&i| !self.get(i, j).is_zero())
                    .map(|i| (i, self.get(i, j).clone()))
                    .collect()
            })
            .collect()
    }
}

/// U·M·V = D with U, V unimodular and D diagonal in Smith form.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Nonzero diagonal entries, each dividing the next.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.get(i, i).clone()).filter(|x| !x.is_zero()).collect()
    }
}

struct Snf {
    a: Vec<Vec<BigInt>>,
    u: Option<Vec<Vec<BigInt>>>,
    v: Option<Vec<Vec<BigInt>>>,
}

impl Snf {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
    }
    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in self.a.iter_mut() {
            r.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for r in v.iter_mut() {
                r.swap(i, j);
            }
        }
    }
    /// row_i += c * row_j
    fn add_row(&mut self, i: usize, j: usize, c: &BigInt) {
        let src = self.a[j].clone();
        for (x, y) in self.a[i].iter_mut().zip(src.iter()) {
            if !y.is_zero() {
                *x += c * y;
            }
        }
        if let Some(u) = &mut self.u {
            let src = u[j].clone();
            for (x, y) in u[i].iter_mut().zip(src.iter()) {
                if !y.is_zero() {
                    *x += c * y;
                }
            }
        }
    }
    /// col_i += c * col_j
    fn add_col(&mut self, i: usize, j: usize, c: &BigInt) {
        for r in self.a.iter_mut() {
            if !r[j].is_zero() {
                let t = c * &r[j];
                r[i] += t;
            }
        }
        if let Some(v) = &mut self.v {
            for r in v.iter_mut() {
                if !r[j].is_zero() {
                    let t = c * &r[j];
                    r[i] += t;
                }
            }
        }
    }
    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -std::mem::take(x);
        }
        if let Some(u) = &mut self.u {
            for x in u[i].iter_mut() {
                *x = -std::mem::take(x);
            }
        }
    }

    fn run(&mut self) {
        let rows = self.a.len();
        let cols = if rows == 0 { 0 } else { self.a[0].len() };
        let mut k = 0;
        while k < rows.min(cols) {
            // pivot of least absolute value in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in k..rows {
                for j in k..cols {
                    let x = &self.a[i][j];
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < self.a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            self.swap_rows(k, pi);
            self.swap_cols(k, pj);
            loop {
                let mut clean = true;
                for i in k + 1..rows {
                    if !self.a[i][k].is_zero() {
                        let q = self.a[i][k].div_floor(&self.a[k][k]);
                        self.add_row(i, k, &-q);
                        if !self.a[i][k].is_zero() {
                            clean = false;
                        }
                    }
                }
                for j in k + 1..cols {
                    if !self.a[k][j].is_zero() {
                        let q = self.a[k][j].div_floor(&self.a[k][k]);
                        self.add_col(j, k, &-q);
                        if !self.a[k][j].is_zero() {
                            clean = false;
                        }
                    }
                }
                if clean {
                    // divisibility of the trailing block by the pivot
                    let p = self.a[k][k].clone();
                    let bad = (k + 1..rows).find(|&i| (k + 1..cols).any(|j| !self.a[i][j].is_multiple_of(&p)));
                    match bad {
                        Some(i) => {
                            self.add_row(k, i, &BigInt::one());
                            clean = false;
                        }
                        None => break,
                    }
                }
                if !clean {
                    // move the smallest nonzero entry of row/col k to the pivot
                    let mut best = (k, k);
                    for i in k..rows {
                        let x = &self.a[i][k];
                        if !x.is_zero() && x.abs() < self.a[best.0][best.1].abs() {
                            best = (i, k);
                        }
                    }
                    for j in k..cols {
                        let x = &self.a[k][j];
                        if !x.is_zero() && x.abs() < self.a[best.0][best.1].abs() {
                            best = (k, j);
                        }
                    }
                    self.swap_rows(k, best.0);
                    self.swap_cols(k, best.1);
                }
            }
            if self.a[k][k].is_negative() {
                self.negate_row(k);
            }
            k += 1;
        }
    }
}

fn to_rows(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows).map(|i| m.row(i).to_vec()).collect()
}

fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> IntMatrix {
    let r = rows.len();
    IntMatrix { rows: r, cols, data: rows.into_iter().flatten().collect() }
}

pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let mut s = Snf {
        a: to_rows(m),
        u: Some(to_rows(&IntMatrix::identity(m.rows))),
        v: Some(to_rows(&IntMatrix::identity(m.cols))),
    };
    s.run();
    SnfResult {
        d: from_rows(s.a, m.cols),
        u: from_rows(s.u.unwrap(), m.rows),
        v: from_rows(s.v.unwrap(), m.cols),
    }
}

fn dense_diagonal(rows: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let n = rows.len();
    let mut s = Snf { a: rows, u: None, v: None };
    s.run();
    let c = if n == 0 { 0 } else { s.a[0].len() };
    (0..n.min(c)).map(|i| s.a[i][i].clone()).filter(|x| !x.is_zero()).collect()
}

/// Invariant factors of the direct sum of cyclic groups Z/a_i.
pub fn normalize_torsion(factors: &[BigInt]) -> Vec<BigInt> {
    let f: Vec<&BigInt> = factors.iter().filter(|x| !x.is_one() && !x.is_zero()).collect();
    let n = f.len();
    let mut rows = vec![vec![BigInt::zero(); n]; n];
    for (i, x) in f.iter().enumerate() {
        rows[i][i] = x.abs();
    }
    dense_diagonal(rows).into_iter().filter(|x| !x.is_one()).collect()
}

/// w ← a·w − b·v
fn combine(a: &BigInt, w: &SparseVec, b: &BigInt, v: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(w.len() + v.len());
    let (mut i, mut j) = (0, 0);
    while i < w.len() || j < v.len() {
        let take_w = j >= v.len() || (i < w.len() && w[i].0 < v[j].0);
        let take_v = i >= w.len() || (j < v.len() && v[j].0 < w[i].0);
        if take_w {
            out.push((w[i].0, a * &w[i].1));
            i += 1;
        } else if take_v {
            out.push((v[j].0, -(b * &v[j].1)));
            j += 1;
        } else {
            let x = a * &w[i].1 - b * &v[j].1;
            if !x.is_zero() {
                out.push((w[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

fn primitive(mut v: SparseVec) -> SparseVec {
    let mut g = BigInt::zero();
    for (_, x) in &v {
        g = g.gcd(x);
        if g.is_one() {
            return v;
        }
    }
    if !g.is_zero() && !g.is_one() {
        for (_, x) in v.iter_mut() {
            *x = &*x / &g;
        }
    }
    v
}

/// Incremental row echelon form over Q, kept fraction-free.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = primitive(v.iter().filter(|(_, x)| !x.is_zero()).cloned().collect());
        let mut start = 0;
        loop {
            let Some(pos) = v.iter().position(|(i, _)| *i >= start) else { return v };
            let (lead, coef) = v[pos].clone();
            match self.pivots.get(&lead) {
                Some(p) => {
                    let pc = &p[0].1;
                    let g = pc.gcd(&coef);
                    v = primitive(combine(&(pc / &g), &v, &(&coef / &g), p));
                    start = lead + 1;
                }
                None => start = lead + 1,
            }
        }
    }

    /// Insert a vector; returns true if it increased the rank.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let mut v = primitive(v.iter().filter(|(_, x)| !x.is_zero()).cloned().collect());
        loop {
            let Some((lead, coef)) = v.first().cloned() else { return false };
            match self.pivots.get(&lead) {
                Some(p) => {
                    let pc = &p[0].1;
                    let g = pc.gcd(&coef);
                    v = primitive(combine(&(pc / &g), &v, &(&coef / &g), p));
                }
                None => {
                    self.pivots.insert(lead, v);
                    return true;
                }
            }
        }
    }

    /// Whether `v` lies in the Q-span of the inserted vectors.
    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }
}

/// Rank over Q of a family of sparse vectors.
pub fn rank(vectors: &[SparseVec]) -> usize {
    let mut order: Vec<usize> = (0..vectors.len()).collect();
    order.sort_by_key(|&i| vectors[i].len());
    let mut e = Echelon::new();
    for i in order {
        e.insert(&vectors[i]);
    }
    e.rank()
}

/// Rank over Q of rational vectors, by clearing denominators.
pub fn rank_rational(vectors: &[Vec<(usize, BigRational)>]) -> usize {
    let ints: Vec<SparseVec> = vectors.iter().map(|v| clear_denominators(v)).collect();
    rank(&ints)
}

pub fn clear_denominators(v: &[(usize, BigRational)]) -> SparseVec {
    let l = v.iter().fold(BigInt::one(), |acc, (_, x)| acc.lcm(x.denom()));
    v.iter()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (*i, x.numer() * (&l / x.denom())))
        .collect()
}

/// Rank and nontrivial invariant factors of the matrix whose columns are
/// `vectors` (equivalently its transpose).
pub fn invariant_factors(vectors: &[SparseVec]) -> (usize, Vec<BigInt>) {
    let mut vecs: Vec<Option<SparseVec>> =
        vectors.iter().map(|v| Some(v.iter().filter(|(_, x)| !x.is_zero()).cloned().collect())).collect();
    let mut occurs: HashMap<usize, HashSet<usize>> = HashMap::new();
    for (k, v) in vecs.iter().enumerate() {
        for (i, _) in v.as_ref().unwrap() {
            occurs.entry(*i).or_default().insert(k);
        }
    }
    let mut units = 0usize;
    loop {
        let mut progressed = false;
        let mut order: Vec<usize> = (0..vecs.len()).filter(|&k| vecs[k].as_ref().is_some_and(|v| !v.is_empty())).collect();
        order.sort_by_key(|&k| vecs[k].as_ref().unwrap().len());
        for k in order {
            let Some(v) = vecs[k].as_ref() else { continue };
            let pivot = v
                .iter()
                .filter(|(_, x)| x.abs().is_one())
                .min_by_key(|(i, _)| occurs.get(i).map_or(0, |s| s.len()))
                .cloned();
            let Some((pi, pc)) = pivot else { continue };
            let v = vecs[k].take().unwrap();
            for (i, _) in &v {
                if let Some(s) = occurs.get_mut(i) {
                    s.remove(&k);
                }
            }
            let others: Vec<usize> = occurs.get(&pi).map(|s| s.iter().copied().collect()).unwrap_or_default();
            for o in others {
                let w = vecs[o].take().unwrap();
                let c = &w.iter().find(|(i, _)| *i == pi).unwrap().1 * &pc;
                for (i, _) in &w {
                    if let Some(s) = occurs.get_mut(i) {
                        s.remove(&o);
                    }
                }
                let nw = combine(&BigInt::one(), &w, &c, &v);
                for (i, _) in &nw {
                    occurs.entry(*i).or_default().insert(o);
                }
                vecs[o] = Some(nw);
            }
            occurs.remove(&pi);
            units += 1;
            progressed = true;
        }
        if !progressed {
            break;
        }
    }
    let rest: Vec<SparseVec> = vecs.into_iter().flatten().filter(|v| !v.is_empty()).collect();
    if rest.is_empty() {
        return (units, Vec::new());
    }
    let mut idx: Vec<usize> = rest.iter().flat_map(|v| v.iter().map(|(i, _)| *i)).collect();
    idx.sort_unstable();
    idx.dedup();
    let pos: HashMap<usize, usize> = idx.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let rows: Vec<Vec<BigInt>> = rest
        .iter()
        .map(|v| {
            let mut r = vec![BigInt::zero(); idx.len()];
            for (i, x) in v {
                r[pos[i]] = x.clone();
            }
            r
        })
        .collect();
    let diag = dense_diagonal(rows);
    let r = units + diag.len();
    (r, diag.into_iter().filter(|x| !x.is_one()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_snf(m: &IntMatrix) -> SnfResult {
        let r = smith_normal_form(m);
        assert_eq!(r.u.mul(m).unwrap().mul(&r.v).unwrap(), r.d);
        assert!(r.u.determinant().unwrap().abs().is_one());
        assert!(r.v.determinant().unwrap().abs().is_one());
        let diag = r.diagonal();
        for w in diag.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        r
    }

    #[test]
    fn snf_examples() {
        let z = IntMatrix::zeros(2, 3);
        let r = check_snf(&z);
        assert!(r.d.is_zero());
        assert_eq!(r.u, IntMatrix::identity(2));
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]).unwrap();
        assert_eq!(check_snf(&m).diagonal(), big(&[2, 4]));
        let id = IntMatrix::identity(4);
        assert_eq!(check_snf(&id).d, id);
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]).unwrap();
        assert_eq!(check_snf(&m).diagonal(), big(&[1, 6]));
    }

    #[test]
    fn sparse_agrees_with_dense() {
        let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]).unwrap();
        let dense = check_snf(&m).diagonal();
        assert_eq!(dense, big(&[2, 6, 12]));
        let (r, t) = invariant_factors(&m.to_sparse_columns());
        assert_eq!(r, 3);
        assert_eq!(t, big(&[2, 6, 12]));
        assert_eq!(rank(&m.to_sparse_columns()), 3);
    }

    #[test]
    fn torsion_normalization() {
        assert_eq!(normalize_torsion(&big(&[2, 3])), big(&[6]));
        assert_eq!(normalize_torsion(&big(&[2, 2, 4])), big(&[2, 2, 4]));
        assert_eq!(normalize_torsion(&big(&[4, 6])), big(&[2, 12]));
        assert!(normalize_torsion(&[]).is_empty());
    }

    #[test]
    fn echelon_membership() {
        let mut e = Echelon::new();
        assert!(e.insert(&vec![(0, BigInt::from(2)), (1, BigInt::from(1))]));
        assert!(e.insert(&vec![(1, BigInt::from(3))]));
        assert!(!e.insert(&vec![(0, BigInt::from(1))]));
        assert!(e.contains(&vec![(0, BigInt::from(5)), (1, BigInt::from(7))]));
        assert!(!e.contains(&vec![(2, BigInt::from(1))]));
    }

    #[test]
    fn determinants() {
        let m = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(m.determinant().unwrap(), BigInt::from(-1));
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]).unwrap();
        assert_eq!(m.determinant().unwrap(), BigInt::from(-8));
    }
}
