use serde::{Deserialize, Serialize};

use super::sl2::SL2Mat;
use crate::error::{Error, Result};
use crate::quad_arith::QuadRing;

/// A letter `±(j+1)` stands for generator `j` or its inverse.
pub type Letter = i32;
pub type Word = Vec<Letter>;

pub fn letter(gen: usize, inverse: bool) -> Letter {
    let l = gen as Letter + 1;
    if inverse {
        -l
    } else {
        l
    }
}

pub fn gen_of(l: Letter) -> usize {
    (l.unsigned_abs() - 1) as usize
}

pub fn invert_word(w: &[Letter]) -> Word {
    w.iter().rev().map(|&l| -l).collect()
}

pub fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Free and cyclic reduction.
pub fn cyclic_reduce(w: &[Letter]) -> Word {
    let mut v = free_reduce(w);
    let (mut i, mut j) = (0, v.len());
    while j >= i + 2 && v[i] == -v[j - 1] {
        i += 1;
        j -= 1;
    }
    v.drain(j..);
    v.drain(..i);
    v
}

/// `x^k` as a word.
pub fn power(gen: usize, k: i64) -> Word {
    let l = letter(gen, k < 0);
    vec![l; k.unsigned_abs() as usize]
}

pub fn commutator(x: &[Letter], y: &[Letter]) -> Word {
    let mut w = x.to_vec();
    w.extend_from_slice(y);
    w.extend(invert_word(x));
    w.extend(invert_word(y));
    w
}

/// A finite presentation, optionally with generator matrices in `SL(2, O_D)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Presentation {
    pub generator_count: usize,
    pub names: Vec<String>,
    pub ring: Option<QuadRing>,
    pub matrices: Vec<SL2Mat>,
    pub relators: Vec<Word>,
}

impl Presentation {
    /// A presentation without matrices.
    pub fn abstract_group(generator_count: usize, relators: Vec<Word>) -> Self {
        Presentation {
            generator_count,
            names: (0..generator_count).map(|i| format!("x{i}")).collect(),
            ring: None,
            matrices: Vec::new(),
            relators,
        }
    }

    pub fn with_matrices(
        ring: QuadRing,
        names: Vec<String>,
        matrices: Vec<SL2Mat>,
        relators: Vec<Word>,
    ) -> Self {
        Presentation {
            generator_count: matrices.len(),
            names,
            ring: Some(ring),
            matrices,
            relators,
        }
    }

    pub fn has_matrices(&self) -> bool {
        self.ring.is_some() && self.matrices.len() == self.generator_count
    }

    pub fn ring(&self) -> Option<&QuadRing> {
        self.ring.as_ref()
    }

    pub fn eval_word(&self, w: &[Letter]) -> SL2Mat {
        let ring = self.ring.as_ref().expect("presentation has no matrices");
        eval_word(ring, &self.matrices, w)
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Checks that every relator evaluates to the identity and every generator has determinant one.
    pub fn check(&self) -> Result<()> {
        let ring = self
            .ring
            .as_ref()
            .ok_or_else(|| Error::Degenerate("presentation has no matrices".into()))?;
        for (i, m) in self.matrices.iter().enumerate() {
            if !m.det(ring).is_one() {
                return Err(Error::Degenerate(format!(
                    "generator {} has determinant {}",
                    self.names[i],
                    m.det(ring)
                )));
            }
        }
        for (i, r) in self.relators.iter().enumerate() {
            let v = self.eval_word(r);
            if !v.is_identity() {
                return Err(Error::BadRelator {
                    index: i,
                    value: v.display(ring),
                });
            }
        }
        Ok(())
    }

    pub fn total_relator_length(&self) -> usize {
        self.relators.iter().map(|r| r.len()).sum()
    }

    pub fn format_word(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter()
            .map(|&l| {
                let n = &self.names[gen_of(l)];
                if l < 0 {
                    format!("{n}^-1")
                } else {
                    n.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub fn eval_word(ring: &QuadRing, mats: &[SL2Mat], w: &[Letter]) -> SL2Mat {
    let mut acc = SL2Mat::identity();
    for &l in w {
        let m = &mats[gen_of(l)];
        acc = if l > 0 {
            acc.mul(ring, m)
        } else {
            acc.mul(ring, &m.inverse())
        };
    }
    acc
}
