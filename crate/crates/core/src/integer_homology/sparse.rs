use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{parse_err, Error, Result};
use crate::int::Int;
use crate::linalg::ZMat;

/// Sparse integer matrix, stored by columns with rows sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(u32, Int)>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    /// Duplicate positions are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, Int)>,
    ) -> Self {
        let mut columns: Vec<Vec<(u32, Int)>> = vec![Vec::new(); cols];
        for (r, c, v) in entries {
            assert!(
                r < rows && c < cols,
                "entry ({r}, {c}) outside {rows}x{cols}"
            );
            if !v.is_zero() {
                columns[c].push((r as u32, v));
            }
        }
        for col in &mut columns {
            col.sort_by_key(|e| e.0);
            let mut merged: Vec<(u32, Int)> = Vec::with_capacity(col.len());
            for (r, v) in col.drain(..) {
                match merged.last_mut() {
                    Some(last) if last.0 == r => last.1 += &v,
                    _ => merged.push((r, v)),
                }
            }
            merged.retain(|e| !e.1.is_zero());
            *col = merged;
        }
        IntMatrix {
            rows,
            cols,
            columns,
        }
    }

    pub fn from_dense(m: &ZMat) -> Self {
        let mut t = Vec::new();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if !m.get(i, j).is_zero() {
                    t.push((i, j, m.get(i, j).clone()));
                }
            }
        }
        IntMatrix::from_triplets(m.rows(), m.cols(), t)
    }

    pub fn to_dense(&self) -> ZMat {
        let mut m = ZMat::zeros(self.rows, self.cols);
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                m.set(*i as usize, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn column(&self, j: usize) -> &[(u32, Int)] {
        &self.columns[j]
    }

    pub fn get(&self, i: usize, j: usize) -> Int {
        match self.columns[j].binary_search_by_key(&(i as u32), |e| e.0) {
            Ok(k) => self.columns[j][k].1.clone(),
            Err(_) => Int::ZERO,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Int)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |(i, v)| (*i as usize, j, v)))
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_triplets(
            self.cols,
            self.rows,
            self.triplets().map(|(i, j, v)| (j, i, v.clone())),
        )
    }

    pub fn mul(&self, o: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != o.rows {
            return Err(Error::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut columns = Vec::with_capacity(o.cols);
        let mut acc: Vec<Int> = vec![Int::ZERO; self.rows];
        let mut touched: Vec<u32> = Vec::new();
        for ocol in &o.columns {
            for (k, x) in ocol {
                for (i, y) in &self.columns[*k as usize] {
                    let slot = &mut acc[*i as usize];
                    if slot.is_zero() {
                        touched.push(*i);
                    }
                    *slot += &(x * y);
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let mut col = Vec::new();
            for i in touched.drain(..) {
                let v = std::mem::take(&mut acc[i as usize]);
                if !v.is_zero() {
                    col.push((i, v));
                }
            }
            columns.push(col);
        }
        Ok(IntMatrix {
            rows: self.rows,
            cols: o.cols,
            columns,
        })
    }

    /// Places the columns of `o` to the right of `self`.
    pub fn hcat(&self, o: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != o.rows {
            return Err(Error::Shape(format!(
                "hcat of {} and {} rows",
                self.rows, o.rows
            )));
        }
        let mut columns = self.columns.clone();
        columns.extend(o.columns.iter().cloned());
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols + o.cols,
            columns,
        })
    }

    /// Triplet text: a `rows cols` header, then `row col value` per line.
    pub fn to_triplet_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for (i, j, v) in self.triplets() {
            writeln!(s, "{i} {j} {v}").unwrap();
        }
        s
    }

    pub fn from_triplet_text(text: &str) -> Result<IntMatrix> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| parse_err("matrix", text, "empty input"))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|x| {
                x.parse()
                    .map_err(|_| parse_err("matrix", header, "bad header"))
            })
            .collect::<Result<_>>()?;
        let [rows, cols] = dims[..] else {
            return Err(parse_err("matrix", header, "header needs rows and cols"));
        };
        let mut t = Vec::new();
        for l in lines {
            let f: Vec<&str> = l.split_whitespace().collect();
            if f.len() != 3 {
                return Err(parse_err("matrix", l, "expected `row col value`"));
            }
            let i: usize = f[0]
                .parse()
                .map_err(|_| parse_err("matrix", l, "bad row"))?;
            let j: usize = f[1]
                .parse()
                .map_err(|_| parse_err("matrix", l, "bad col"))?;
            let v: Int = f[2]
                .parse()
                .map_err(|_| parse_err("matrix", l, "bad value"))?;
            if i >= rows || j >= cols {
                return Err(parse_err("matrix", l, "index out of range"));
            }
            t.push((i, j, v));
        }
        Ok(IntMatrix::from_triplets(rows, cols, t))
    }
}
