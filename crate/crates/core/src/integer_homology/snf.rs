use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::sparse::IntMatrix;
use crate::int::Int;
use crate::linalg::ZMat;

/// Invariant factors of an integer matrix.
///
/// Factors equal to 1 are only counted; the rest are kept as a divisibility chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithForm {
    pub rows: usize,
    pub cols: usize,
    pub unit_count: usize,
    /// Factors `> 1`, each dividing the next.
    pub torsion: Vec<Int>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.unit_count + self.torsion.len()
    }

    /// The full chain `d_1 | d_2 | … | d_rank`.
    pub fn invariant_factors(&self) -> Vec<Int> {
        let mut v = vec![Int::ONE; self.unit_count];
        v.extend(self.torsion.iter().cloned());
        v
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().map(Int::to_bigint).product()
    }

    pub fn log_torsion_order(&self) -> f64 {
        // Exact product first; `ln_abs` handles values far past f64 range.
        Int::from(self.torsion_order()).ln_abs()
    }

    /// Builds the chain from an arbitrary list of diagonal entries.
    pub fn from_diagonal(
        rows: usize,
        cols: usize,
        diag: impl IntoIterator<Item = Int>,
    ) -> SmithForm {
        let mut unit_count = 0;
        let mut rest = Vec::new();
        for d in diag {
            let d = d.abs();
            if d.is_one() {
                unit_count += 1;
            } else if !d.is_zero() {
                rest.push(d);
            }
        }
        for i in 0..rest.len() {
            for j in i + 1..rest.len() {
                if rest[i].divides(&rest[j]) {
                    continue;
                }
                let g = rest[i].gcd(&rest[j]);
                let l = rest[i].div_exact(&g) * &rest[j];
                rest[i] = g;
                rest[j] = l;
            }
        }
        // Coprime entries collapse to leading 1s.
        let (ones, torsion): (Vec<Int>, Vec<Int>) = rest.into_iter().partition(Int::is_one);
        SmithForm {
            rows,
            cols,
            unit_count: unit_count + ones.len(),
            torsion,
        }
    }
}

type SparseRow = Vec<(u32, Int)>;

/// `row − f·pivot`, recording columns that become newly nonzero.
fn axpy(row: &[(u32, Int)], f: &Int, pivot: &[(u32, Int)], fresh: &mut Vec<u32>) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map_or(u32::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(u32::MAX, |e| e.0);
        if ci < cj {
            out.push(row[i].clone());
            i += 1;
        } else if cj < ci {
            fresh.push(cj);
            out.push((cj, -(f * &pivot[j].1)));
            j += 1;
        } else {
            let v = &row[i].1 - &(f * &pivot[j].1);
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

struct Eliminator {
    rows: Vec<SparseRow>,
    alive: Vec<bool>,
    /// Rows that may hold each column; stale entries are skipped on use.
    col_rows: Vec<Vec<u32>>,
    units: usize,
}

impl Eliminator {
    fn new(m: &IntMatrix) -> Self {
        let mut rows: Vec<SparseRow> = vec![Vec::new(); m.rows()];
        let mut col_rows = vec![Vec::new(); m.cols()];
        for j in 0..m.cols() {
            for (i, v) in m.column(j) {
                rows[*i as usize].push((j as u32, v.clone()));
                col_rows[j].push(*i);
            }
        }
        let alive = rows.iter().map(|r| !r.is_empty()).collect();
        Eliminator {
            rows,
            alive,
            col_rows,
            units: 0,
        }
    }

    /// Pivots on entries `±1`, shortest rows first, least-populated column first.
    fn unit_phase(&mut self) {
        let mut heap: BinaryHeap<Reverse<(usize, u32)>> = BinaryHeap::new();
        for (i, r) in self.rows.iter().enumerate() {
            if !r.is_empty() {
                heap.push(Reverse((r.len(), i as u32)));
            }
        }
        while let Some(Reverse((len, p))) = heap.pop() {
            let p = p as usize;
            if !self.alive[p] || self.rows[p].len() != len {
                continue;
            }
            let pick = self.rows[p]
                .iter()
                .filter(|e| e.1.is_unit())
                .min_by_key(|e| self.col_rows[e.0 as usize].len())
                .map(|e| (e.0, e.1.clone()));
            let Some((c, u)) = pick else { continue };
            let prow = std::mem::take(&mut self.rows[p]);
            self.alive[p] = false;
            let mut fresh = Vec::new();
            for i in std::mem::take(&mut self.col_rows[c as usize]) {
                let i = i as usize;
                if !self.alive[i] {
                    continue;
                }
                let Ok(k) = self.rows[i].binary_search_by_key(&c, |e| e.0) else {
                    continue;
                };
                let f = &self.rows[i][k].1 * &u;
                fresh.clear();
                self.rows[i] = axpy(&self.rows[i], &f, &prow, &mut fresh);
                for &k in &fresh {
                    self.col_rows[k as usize].push(i as u32);
                }
                if self.rows[i].is_empty() {
                    self.alive[i] = false;
                } else {
                    heap.push(Reverse((self.rows[i].len(), i as u32)));
                }
            }
            self.units += 1;
        }
    }

    /// Remaining nonzero block as a dense matrix.
    fn core(&self) -> Vec<Vec<Int>> {
        let mut cols: Vec<u32> = self
            .rows
            .iter()
            .zip(&self.alive)
            .filter(|(_, a)| **a)
            .flat_map(|(r, _)| r.iter().map(|e| e.0))
            .collect();
        cols.sort_unstable();
        cols.dedup();
        self.rows
            .iter()
            .zip(&self.alive)
            .filter(|(r, a)| **a && !r.is_empty())
            .map(|(r, _)| {
                let mut dense = vec![Int::ZERO; cols.len()];
                for (c, v) in r {
                    dense[cols.binary_search(c).unwrap()] = v.clone();
                }
                dense
            })
            .collect()
    }
}

/// Diagonalizes in place by smallest-pivot elimination; returns the diagonal.
fn dense_diagonal(mut a: Vec<Vec<Int>>) -> Vec<Int> {
    let r = a.len();
    let c = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..r.min(c) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, v) in row.iter().enumerate().skip(t) {
                    if !v.is_zero() && best.map_or(true, |(bi, bj)| v.abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                        if v.is_unit() {
                            break;
                        }
                    }
                }
            }
            let Some((pi, pj)) = best else { return diag };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..r {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_round(&p);
                let (top, rest) = a.split_at_mut(i);
                for (x, y) in rest[0][t..].iter_mut().zip(&top[t][t..]) {
                    *x -= &(&q * y);
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..c {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_round(&p);
                for row in a.iter_mut().skip(t) {
                    let y = row[t].clone();
                    row[j] -= &(&q * &y);
                }
                clean &= a[t][j].is_zero();
            }
            if clean {
                diag.push(p);
                break;
            }
        }
    }
    diag
}

/// Fraction-free elimination with full pivoting: the rank and one nonzero maximal minor.
fn rank_and_minor(a: &[Vec<Int>]) -> (usize, Int) {
    let mut a = a.to_vec();
    let r = a.len();
    let c = a.first().map_or(0, Vec::len);
    let mut prev = Int::ONE;
    for k in 0..r.min(c) {
        let mut best: Option<(usize, usize, u64)> = None;
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, v) in row.iter().enumerate().skip(k) {
                if !v.is_zero() && best.map_or(true, |b| v.bits() < b.2) {
                    best = Some((i, j, v.bits()));
                }
            }
        }
        let Some((pi, pj, _)) = best else {
            return (k, prev);
        };
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        let pivot_row = a[k].clone();
        let p = &pivot_row[k];
        for row in a.iter_mut().skip(k + 1) {
            let lead = std::mem::take(&mut row[k]);
            for (x, y) in row[k + 1..].iter_mut().zip(&pivot_row[k + 1..]) {
                let v = &(&*x * p) - &(&lead * y);
                *x = v.div_exact(&prev);
            }
        }
        prev = p.clone();
    }
    (r.min(c), prev)
}

/// Symmetric residue in `(−m/2, m/2]`.
fn reduce_fully(x: &Int, m: &Int) -> Int {
    let r = x.mod_floor(m);
    if &(&r + &r) > m {
        r - m
    } else {
        r
    }
}

/// Reduces only once `x` has grown well past `m`.
fn reduce(x: Int, m: &Int) -> Int {
    if x.bits() <= m.bits() + 64 {
        x
    } else {
        reduce_fully(&x, m)
    }
}

/// `[x; y] ← [[s, t], [−b, a]] · [x; y]` modulo `m`, entrywise over `from..`.
fn combine(x: &mut [Int], y: &mut [Int], coef: [&Int; 4], m: &Int) {
    let [s, t, b, a] = coef;
    for (u, v) in x.iter_mut().zip(y.iter_mut()) {
        if u.is_zero() && v.is_zero() {
            continue;
        }
        let nu = &(s * &*u) + &(t * &*v);
        let nv = &(a * &*v) - &(b * &*u);
        *u = reduce(nu, m);
        *v = reduce(nv, m);
    }
}

/// A diagonalization over `Z/m`, as the divisors `gcd(e, m)` of its entries; zeros dropped.
fn diagonal_mod(mut a: Vec<Vec<Int>>, m: &Int) -> Vec<Int> {
    let r = a.len();
    let c = a.first().map_or(0, Vec::len);
    for row in a.iter_mut() {
        for x in row.iter_mut() {
            *x = reduce(std::mem::take(x), m);
        }
    }
    let mut diag = Vec::new();
    for t in 0..r.min(c) {
        let mut best: Option<(usize, usize, u64)> = None;
        'scan: for (i, row) in a.iter_mut().enumerate().skip(t) {
            for (j, v) in row.iter_mut().enumerate().skip(t) {
                if v.bits() >= m.bits() {
                    *v = reduce_fully(v, m);
                }
                if !v.is_zero() && best.map_or(true, |b| v.bits() < b.2) {
                    best = Some((i, j, v.bits()));
                    if v.is_unit() {
                        break 'scan;
                    }
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..r {
                if a[i][t].is_zero() {
                    continue;
                }
                let (top, rest) = a.split_at_mut(i);
                let (x, y) = (&mut top[t], &mut rest[0]);
                if x[t].divides(&y[t]) {
                    let q = y[t].div_exact(&x[t]);
                    for (v, u) in y[t..].iter_mut().zip(&x[t..]) {
                        if !u.is_zero() {
                            *v = reduce(&*v - &(&q * u), m);
                        }
                    }
                } else {
                    let (g, s, tt) = x[t].ext_gcd(&y[t]);
                    let (xa, yb) = (x[t].div_exact(&g), y[t].div_exact(&g));
                    combine(&mut x[t..], &mut y[t..], [&s, &tt, &yb, &xa], m);
                }
                debug_assert!(a[i][t].is_zero());
            }
            for j in t + 1..c {
                if a[t][j].is_zero() {
                    continue;
                }
                let (p, v) = (a[t][t].clone(), a[t][j].clone());
                if p.divides(&v) {
                    let q = v.div_exact(&p);
                    for row in a.iter_mut().skip(t) {
                        if !row[t].is_zero() {
                            row[j] = reduce(&row[j] - &(&q * &row[t]), m);
                        }
                    }
                } else {
                    clean = false;
                    let (g, s, tt) = p.ext_gcd(&v);
                    let (pa, vb) = (p.div_exact(&g), v.div_exact(&g));
                    for row in a.iter_mut().skip(t) {
                        let (mut x, mut y) = ([row[t].clone()], [row[j].clone()]);
                        combine(&mut x, &mut y, [&s, &tt, &vb, &pa], m);
                        let [x] = x;
                        let [y] = y;
                        row[t] = x;
                        row[j] = y;
                    }
                }
            }
            if clean {
                break;
            }
        }
        diag.push(a[t][t].gcd(m));
    }
    diag
}

/// Smith diagonal of a dense block, computed modulo twice a nonzero maximal minor.
///
/// Every invariant factor divides that minor, so nothing is lost and entries stay bounded.
fn modular_diagonal(a: Vec<Vec<Int>>) -> Vec<Int> {
    let (rank, minor) = rank_and_minor(&a);
    if rank == 0 {
        return Vec::new();
    }
    let m = minor.abs() * Int::from(2);
    let chain = SmithForm::from_diagonal(0, 0, diagonal_mod(a, &m));
    // Entries equal to `m` are zeros; every true factor divides `minor`, so is below `m`.
    let torsion: Vec<Int> = chain.torsion.into_iter().filter(|d| d != &m).collect();
    let mut diag = vec![Int::ONE; rank - torsion.len()];
    diag.extend(torsion);
    diag
}

/// Cores at most this size in either dimension go through plain elimination.
const SMALL_CORE: usize = 12;

/// Smith form by sparse unit-pivot elimination, then dense elimination of the core.
pub fn snf(m: &IntMatrix) -> SmithForm {
    // Eliminate along the shorter dimension's rows.
    let work = if m.rows() > m.cols() {
        m.transpose()
    } else {
        m.clone()
    };
    let mut e = Eliminator::new(&work);
    e.unit_phase();
    let core = e.core();
    log::debug!(
        "snf {}x{}: {} unit pivots, core {}x{}",
        m.rows(),
        m.cols(),
        e.units,
        core.len(),
        core.first().map_or(0, Vec::len)
    );
    let small = core.len().min(core.first().map_or(0, Vec::len)) <= SMALL_CORE;
    let diag = if small {
        dense_diagonal(core)
    } else {
        modular_diagonal(core)
    };
    let mut s = SmithForm::from_diagonal(m.rows(), m.cols(), diag);
    s.unit_count += e.units;
    s
}

pub fn snf_dense(m: &ZMat) -> SmithForm {
    snf(&IntMatrix::from_dense(m))
}

/// `left · A · right = diag`, with `left` and `right` unimodular.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub diagonal: Vec<Int>,
    pub left: ZMat,
    pub right: ZMat,
}

/// Dense Smith form with transform witnesses; for small matrices.
pub fn smith_with_transforms(a: &ZMat) -> SmithDecomposition {
    let (r, c) = (a.rows(), a.cols());
    let mut m = a.to_rows();
    let mut left = ZMat::identity(r).to_rows();
    let mut right = ZMat::identity(c).to_rows();
    let row_op = |m: &mut Vec<Vec<Int>>, dst: usize, src: usize, q: &Int| {
        let s = m[src].clone();
        for (x, y) in m[dst].iter_mut().zip(&s) {
            *x -= &(q * y);
        }
    };
    let col_op = |m: &mut Vec<Vec<Int>>, dst: usize, src: usize, q: &Int| {
        for row in m.iter_mut() {
            let y = row[src].clone();
            row[dst] -= &(q * &y);
        }
    };
    let mut rank = 0;
    for t in 0..r.min(c) {
        let mut found = false;
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if !m[i][j].is_zero()
                        && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            found = true;
            m.swap(t, pi);
            left.swap(t, pi);
            for row in m.iter_mut().chain(right.iter_mut()) {
                row.swap(t, pj);
            }
            let p = m[t][t].clone();
            let mut clean = true;
            for i in t + 1..r {
                if !m[i][t].is_zero() {
                    let q = m[i][t].div_round(&p);
                    row_op(&mut m, i, t, &q);
                    row_op(&mut left, i, t, &q);
                    clean &= m[i][t].is_zero();
                }
            }
            for j in t + 1..c {
                if !m[t][j].is_zero() {
                    let q = m[t][j].div_round(&p);
                    col_op(&mut m, j, t, &q);
                    col_op(&mut right, j, t, &q);
                    clean &= m[t][j].is_zero();
                }
            }
            if clean {
                break;
            }
        }
        if !found {
            break;
        }
        rank = t + 1;
    }
    // Enforce the divisibility chain on the diagonal with 2×2 moves.
    for i in 0..rank {
        for j in i + 1..rank {
            let (x, y) = (m[i][i].clone(), m[j][j].clone());
            if x.divides(&y) {
                continue;
            }
            let (g, s, t) = x.ext_gcd(&y);
            // Column j added to column i, then rows combined by [[s, t], [−y/g, x/g]].
            col_op(&mut m, i, j, &Int::from(-1));
            col_op(&mut right, i, j, &Int::from(-1));
            for mat in [&mut m, &mut left] {
                let (ri, rj) = (mat[i].clone(), mat[j].clone());
                let (yg, xg) = (y.div_exact(&g), x.div_exact(&g));
                for k in 0..ri.len() {
                    mat[i][k] = &(&s * &ri[k]) + &(&t * &rj[k]);
                    mat[j][k] = &(&xg * &rj[k]) - &(&yg * &ri[k]);
                }
            }
            let q = m[i][j].div_exact(&m[i][i]);
            col_op(&mut m, j, i, &q);
            col_op(&mut right, j, i, &q);
        }
    }
    for i in 0..rank {
        if m[i][i].is_negative() {
            for x in m[i].iter_mut().chain(left[i].iter_mut()) {
                *x = -&*x;
            }
        }
    }
    SmithDecomposition {
        diagonal: (0..rank).map(|i| m[i][i].clone()).collect(),
        left: ZMat::from_rows(&left),
        right: ZMat::from_rows(&right),
    }
}

/// Z-basis of `{x ∈ Z^n : A x = 0}`.
pub fn integer_kernel(a: &ZMat) -> Vec<Vec<Int>> {
    let d = smith_with_transforms(a);
    (d.diagonal.len()..a.cols())
        .map(|j| d.right.column(j))
        .collect()
}
