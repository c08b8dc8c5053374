use serde::Serialize;

use super::sparse::IntMatrix;
use crate::bianchi::{gen_of, Letter, Presentation};
use crate::error::{Error, Result};
use crate::int::Int;
use crate::linalg::ZMat;
use crate::sym_modules::rho_of_word_table;

/// Free chain complex `C_top → … → C_1 → C_0` over `Z`.
#[derive(Clone, Debug, Serialize)]
pub struct ChainComplexZ {
    pub ranks: Vec<usize>,
    /// `boundaries[q − 1]` is `∂_q : C_q → C_{q−1}`.
    pub boundaries: Vec<IntMatrix>,
}

impl ChainComplexZ {
    pub fn new(ranks: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<Self> {
        if boundaries.len() + 1 != ranks.len() {
            return Err(Error::Shape(format!(
                "{} ranks but {} boundaries",
                ranks.len(),
                boundaries.len()
            )));
        }
        for (q, d) in boundaries.iter().enumerate() {
            if d.rows() != ranks[q] || d.cols() != ranks[q + 1] {
                return Err(Error::Shape(format!(
                    "boundary {} is {}x{}",
                    q + 1,
                    d.rows(),
                    d.cols()
                )));
            }
        }
        let c = ChainComplexZ { ranks, boundaries };
        c.check()?;
        Ok(c)
    }

    pub fn top_degree(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn boundary(&self, q: usize) -> Option<&IntMatrix> {
        q.checked_sub(1).and_then(|i| self.boundaries.get(i))
    }

    /// `∂_q ∂_{q+1} = 0` for all `q`.
    pub fn check(&self) -> Result<()> {
        for q in 1..self.boundaries.len() {
            if !self.boundaries[q - 1].mul(&self.boundaries[q])?.is_zero() {
                return Err(Error::CheckFailed {
                    name: "boundary-squared",
                    detail: format!("∂_{q} ∂_{} ≠ 0", q + 1),
                });
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("complex serializes")
    }
}

/// Inverse of a unimodular integer matrix.
pub fn unimodular_inverse(a: &ZMat) -> Result<ZMat> {
    a.to_q()
        .inverse()
        .and_then(|q| q.to_z())
        .ok_or_else(|| Error::Degenerate("action matrix is not invertible over Z".into()))
}

/// Writes an `n × n` block at block position `(bi, bj)`.
fn push_block(t: &mut Vec<(usize, usize, Int)>, bi: usize, bj: usize, b: &ZMat) {
    let n = b.rows();
    for r in 0..n {
        for c in 0..n {
            let v = b.get(r, c);
            if !v.is_zero() {
                t.push((bi * n + r, bj * n + c, v.clone()));
            }
        }
    }
}

/// Per-generator sums for the right Fox derivatives of `w`, and the value of `w`.
///
/// Block `j` is `Σ_{y_p = x_j} A(y_{p+1} ⋯ y_L) − Σ_{y_p = x_j⁻¹} A(y_p ⋯ y_L)`.
pub(crate) fn right_fox(
    w: &[Letter],
    action: &[ZMat],
    inverse: &[ZMat],
) -> (Vec<Option<ZMat>>, ZMat) {
    let n = action[0].rows();
    let mut blocks: Vec<Option<ZMat>> = vec![None; action.len()];
    let mut suffix = ZMat::identity(n);
    for &l in w.iter().rev() {
        let j = gen_of(l);
        if l > 0 {
            add_into(&mut blocks[j], &suffix, false);
            suffix = action[j].mul(&suffix);
        } else {
            suffix = inverse[j].mul(&suffix);
            add_into(&mut blocks[j], &suffix, true);
        }
    }
    (blocks, suffix)
}

/// Per-generator sums for the left Fox derivatives of `w`, used for crossed homomorphisms:
/// `c(w) = Σ_j block_j · c(x_j)`.
pub(crate) fn left_fox(w: &[Letter], action: &[ZMat], inverse: &[ZMat]) -> Vec<Option<ZMat>> {
    let n = action[0].rows();
    let mut blocks: Vec<Option<ZMat>> = vec![None; action.len()];
    let mut prefix = ZMat::identity(n);
    for &l in w {
        let j = gen_of(l);
        if l > 0 {
            add_into(&mut blocks[j], &prefix, false);
            prefix = prefix.mul(&action[j]);
        } else {
            prefix = prefix.mul(&inverse[j]);
            add_into(&mut blocks[j], &prefix, true);
        }
    }
    blocks
}

fn add_into(slot: &mut Option<ZMat>, m: &ZMat, negate: bool) {
    let m = if negate { m.neg() } else { m.clone() };
    *slot = Some(match slot.take() {
        Some(s) => s.add(&m),
        None => m,
    });
}

/// The presentation 2-complex with coefficients in `Z^n`, generator `j` acting by `action[j]`.
///
/// `C_2 = (Z^n)^relators → C_1 = (Z^n)^generators → C_0 = Z^n`.
pub fn fox_complex(pres: &Presentation, action: &[ZMat]) -> Result<ChainComplexZ> {
    let g = pres.generator_count;
    if action.len() != g {
        return Err(Error::Shape(format!(
            "{} action matrices for {g} generators",
            action.len()
        )));
    }
    let n = match action.first() {
        Some(a) => a.rows(),
        None => return Err(Error::Degenerate("presentation has no generators".into())),
    };
    let inverse: Vec<ZMat> = action
        .iter()
        .map(unimodular_inverse)
        .collect::<Result<_>>()?;
    let mut t1 = Vec::new();
    for (j, a) in action.iter().enumerate() {
        push_block(&mut t1, 0, j, &a.sub(&ZMat::identity(n)));
    }
    let d1 = IntMatrix::from_triplets(n, g * n, t1);
    let mut t2 = Vec::new();
    for (i, r) in pres.relators.iter().enumerate() {
        let (blocks, value) = right_fox(r, action, &inverse);
        if !value.is_identity() {
            return Err(Error::NonMultiplicative(i));
        }
        for (j, b) in blocks.iter().enumerate() {
            if let Some(b) = b {
                push_block(&mut t2, j, i, b);
            }
        }
    }
    let d2 = IntMatrix::from_triplets(g * n, pres.relators.len() * n, t2);
    ChainComplexZ::new(vec![n, g * n, pres.relators.len() * n], vec![d1, d2])
}

/// The complex with coefficients in `Λ_m`, using the presentation's matrices.
pub fn fox_complex_sym(pres: &Presentation, m: usize) -> Result<ChainComplexZ> {
    let ring = pres
        .ring()
        .ok_or_else(|| Error::Degenerate("presentation has no matrices".into()))?;
    fox_complex(pres, &rho_of_word_table(ring, &pres.matrices, m))
}

/// Trivial action on `Z^n`.
pub fn trivial_action(generators: usize, n: usize) -> Vec<ZMat> {
    vec![ZMat::identity(n); generators]
}
