use serde::Serialize;

use super::fox::{left_fox, unimodular_inverse};
use super::snf::{integer_kernel, snf, snf_dense};
use super::sparse::IntMatrix;
use crate::bianchi::{Presentation, SL2Mat, Word};
use crate::error::{Error, Result};
use crate::int::Int;
use crate::linalg::ZMat;
use crate::quad_arith::QuadInt;

/// `H^1(Γ; Z^n ⊗ Q)` with the integral cocycles.
#[derive(Clone, Debug, Serialize)]
pub struct CocycleSpace {
    pub module_rank: usize,
    pub generator_count: usize,
    pub h1_dim: usize,
    /// Z-basis of the integral cocycles, each the stacked values on the generators.
    pub cocycles: Vec<Vec<Int>>,
    /// Indices into `cocycles` whose classes form a Q-basis of `H^1`.
    pub class_basis: Vec<usize>,
    /// Column `v` gives the coboundary `g_j ↦ (ρ(g_j) − 1) v`.
    #[serde(skip)]
    pub coboundary: ZMat,
}

/// Relator-linearization matrix: block `(i, j)` sends `c(x_j)` to its share of `c(r_i)`.
pub(crate) fn cocycle_constraints(pres: &Presentation, action: &[ZMat]) -> Result<IntMatrix> {
    let inverse: Vec<ZMat> = action
        .iter()
        .map(unimodular_inverse)
        .collect::<Result<_>>()?;
    let words: Vec<&Word> = pres.relators.iter().collect();
    word_derivatives(&words, action, &inverse)
}

fn word_derivatives(words: &[&Word], action: &[ZMat], inverse: &[ZMat]) -> Result<IntMatrix> {
    let n = action.first().map_or(0, ZMat::rows);
    let mut t = Vec::new();
    for (i, w) in words.iter().enumerate() {
        for (j, b) in left_fox(w, action, inverse).into_iter().enumerate() {
            let Some(b) = b else { continue };
            for r in 0..n {
                for c in 0..n {
                    if !b.get(r, c).is_zero() {
                        t.push((i * n + r, j * n + c, b.get(r, c).clone()));
                    }
                }
            }
        }
    }
    Ok(IntMatrix::from_triplets(
        words.len() * n,
        action.len() * n,
        t,
    ))
}

fn coboundary_matrix(action: &[ZMat]) -> ZMat {
    let n = action.first().map_or(0, ZMat::rows);
    let blocks: Vec<ZMat> = action.iter().map(|a| a.sub(&ZMat::identity(n))).collect();
    let refs: Vec<&ZMat> = blocks.iter().collect();
    ZMat::vcat(&refs)
}

/// Dimension of `H^1` only, by ranks; no kernel basis is formed.
pub fn h1_dimension(pres: &Presentation, action: &[ZMat]) -> Result<usize> {
    let n = action.first().map_or(0, ZMat::rows);
    let f = cocycle_constraints(pres, action)?;
    let b = IntMatrix::from_dense(&coboundary_matrix(action));
    Ok(action.len() * n - snf(&f).rank() - snf(&b).rank())
}

pub fn cocycle_space(pres: &Presentation, action: &[ZMat]) -> Result<CocycleSpace> {
    let g = pres.generator_count;
    if action.len() != g {
        return Err(Error::Shape(format!(
            "{} action matrices for {g} generators",
            action.len()
        )));
    }
    let n = action.first().map_or(0, ZMat::rows);
    let f = cocycle_constraints(pres, action)?;
    let cocycles = if f.rows() == 0 {
        (0..g * n)
            .map(|i| ZMat::identity(g * n).column(i))
            .collect()
    } else {
        integer_kernel(&f.to_dense())
    };
    let coboundary = coboundary_matrix(action);
    let mut span = coboundary.clone();
    let mut rank = snf_dense(&span).rank();
    let base_rank = rank;
    let mut class_basis = Vec::new();
    for (k, z) in cocycles.iter().enumerate() {
        let col = ZMat::from_rows(&[z.clone()]).transpose();
        let next = ZMat::hcat(&[&span, &col]);
        let r = snf_dense(&next).rank();
        if r > rank {
            rank = r;
            span = next;
            class_basis.push(k);
        }
    }
    Ok(CocycleSpace {
        module_rank: n,
        generator_count: g,
        h1_dim: rank - base_rank,
        cocycles,
        class_basis,
        coboundary,
    })
}

/// Values of a cocycle on two parabolic elements.
#[derive(Clone, Debug, Serialize)]
pub struct CuspCocycle {
    pub values: [Vec<Int>; 2],
    /// Translation parts after conjugating the cusp to `∞`.
    pub translations: [QuadInt; 2],
}

/// `w ↦ B w B⁻¹` must be `[[1, x], [0, 1]]`.
fn translation_part(pres: &Presentation, w: &Word, conjugator: &SL2Mat) -> Result<QuadInt> {
    let ring = pres
        .ring()
        .ok_or_else(|| Error::Degenerate("presentation has no matrices".into()))?;
    let m = conjugator
        .mul(ring, &pres.eval_word(w))
        .mul(ring, &conjugator.inverse());
    if !(m.a.is_one() && m.d.is_one() && m.c.is_zero()) {
        return Err(Error::NotParabolic(pres.format_word(w)));
    }
    Ok(m.b)
}

/// `c(w) = Σ_j (∂^L_j w) c(x_j)`, for words `w` in the presentation's generators.
pub fn evaluate_cocycle(action: &[ZMat], cocycle: &[Int], w: &Word) -> Result<Vec<Int>> {
    let inverse: Vec<ZMat> = action
        .iter()
        .map(unimodular_inverse)
        .collect::<Result<_>>()?;
    let n = action.first().map_or(0, ZMat::rows);
    let mut out = vec![Int::ZERO; n];
    for (j, b) in left_fox(w, action, &inverse).into_iter().enumerate() {
        if let Some(b) = b {
            let v = b.mul_vec(&cocycle[j * n..(j + 1) * n]);
            for (o, x) in out.iter_mut().zip(v) {
                *o += &x;
            }
        }
    }
    Ok(out)
}

/// Restriction to the parabolic subgroup generated by `words`.
pub fn restrict_to_cusp(
    pres: &Presentation,
    action: &[ZMat],
    cocycle: &[Int],
    words: &[Word; 2],
    conjugator: &SL2Mat,
) -> Result<CuspCocycle> {
    let translations = [
        translation_part(pres, &words[0], conjugator)?,
        translation_part(pres, &words[1], conjugator)?,
    ];
    Ok(CuspCocycle {
        values: [
            evaluate_cocycle(action, cocycle, &words[0])?,
            evaluate_cocycle(action, cocycle, &words[1])?,
        ],
        translations,
    })
}

/// Rank over `Q` of `H^1(Γ) → ⊕_P H^1(Γ_P)`.
///
/// With `F` the relator constraints, `R` evaluation on the cusp words and `Q` a matrix whose
/// kernel is the cusp coboundaries, the rank is `rank [F; Q R] − rank F`.
pub fn restriction_rank(
    pres: &Presentation,
    action: &[ZMat],
    cusp_words: &[([Word; 2], SL2Mat)],
) -> Result<usize> {
    let n = action.first().map_or(0, ZMat::rows);
    let inverse: Vec<ZMat> = action
        .iter()
        .map(unimodular_inverse)
        .collect::<Result<_>>()?;
    let f = cocycle_constraints(pres, action)?;
    let mut rows = f.transpose();
    for (words, conj) in cusp_words {
        for w in words {
            translation_part(pres, w, conj)?;
        }
        let r = word_derivatives(&[&words[0], &words[1]], action, &inverse)?.to_dense();
        let u: Vec<ZMat> = words
            .iter()
            .map(|w| {
                let mut p = ZMat::identity(n);
                for &l in w {
                    let j = crate::bianchi::gen_of(l);
                    p = p.mul(if l > 0 { &action[j] } else { &inverse[j] });
                }
                p.sub(&ZMat::identity(n))
            })
            .collect();
        let b = ZMat::vcat(&[&u[0], &u[1]]);
        let annihilator = integer_kernel(&b.transpose());
        if annihilator.is_empty() {
            continue;
        }
        let q = ZMat::from_rows(&annihilator).mul(&r);
        rows = rows.hcat(&IntMatrix::from_dense(&q.transpose()))?;
    }
    Ok(snf(&rows).rank() - snf(&f).rank())
}
