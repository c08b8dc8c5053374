use std::collections::HashMap;

use serde::Serialize;

use super::builtin::BuiltinGroup;
use super::coset::CosetTable;
use super::presentation::{invert_word, Word};
use super::shape::PlaneLattice;
use super::sl2::SL2Mat;
use super::subgroup::SubgroupSpec;
use crate::error::{Error, Result};
use crate::quad_arith::{hnf2, QuadInt};

/// One cusp of a finite-index subgroup `H ⊂ SL(2, O_D)`.
#[derive(Clone, Debug, Serialize)]
pub struct CuspData {
    /// Coset `H T` whose transversal element `T` carries `∞` to this cusp.
    pub coset: usize,
    /// `T·∞` as a coprime pair `(a : c)`.
    pub representative: (QuadInt, QuadInt),
    /// `B_P = T⁻¹`, so that `B_P` maps the cusp to `∞`.
    pub conjugator: SL2Mat,
    /// Translations `x` with `B_P⁻¹ [[1,x],[0,1]] B_P ∈ H`, as HNF `{a, b + cω}`.
    pub lattice_hnf: (i64, i64, i64),
    /// Number of cosets in the cusp's orbit.
    pub orbit_size: usize,
    /// Whether no non-unipotent element of `H` fixes the cusp, besides the identity.
    pub unipotent_stabilizer: bool,
    /// Parent-group words for the two lattice basis translations, conjugated into `H`.
    pub parabolic_words: [Word; 2],
}

impl CuspData {
    pub fn lattice(&self, group: &BuiltinGroup) -> PlaneLattice {
        let (a, b, c) = self.lattice_hnf;
        PlaneLattice::from_hnf(group.presentation.ring().unwrap(), a, b, c).unwrap()
    }
}

fn translation_word(group: &BuiltinGroup, p: i64, q: i64) -> Word {
    let [t, u] = &group.translation_words;
    let mut w = Vec::new();
    for (k, x) in [(p, t), (q, u)] {
        let piece = if k < 0 { invert_word(x) } else { x.clone() };
        for _ in 0..k.unsigned_abs() {
            w.extend_from_slice(&piece);
        }
    }
    w
}

/// Stabilizer of coset `i` in the translation group `{t^p u^q}`, as `(HNF, orbit)`.
fn translation_stabilizer(
    group: &BuiltinGroup,
    table: &CosetTable,
    i: usize,
) -> ((i64, i64, i64), HashMap<usize, (i64, i64)>) {
    let [t, u] = &group.translation_words;
    let moves = [
        (t.clone(), (1, 0)),
        (invert_word(t), (-1, 0)),
        (u.clone(), (0, 1)),
        (invert_word(u), (0, -1)),
    ];
    let mut pos: HashMap<usize, (i64, i64)> = HashMap::from([(i, (0, 0))]);
    let mut queue = vec![i];
    let mut diffs: Vec<(i128, i128)> = Vec::new();
    let mut k = 0;
    while k < queue.len() {
        let j = queue[k];
        let (p, q) = pos[&j];
        for (w, (dp, dq)) in &moves {
            let j2 = table.act_word(j, w);
            let np = (p + dp, q + dq);
            match pos.get(&j2) {
                Some(&(p2, q2)) => {
                    let d = ((np.0 - p2) as i128, (np.1 - q2) as i128);
                    if d != (0, 0) {
                        diffs.push(d);
                    }
                }
                None => {
                    pos.insert(j2, np);
                    queue.push(j2);
                }
            }
        }
        k += 1;
    }
    let hnf = hnf2(&diffs).expect("translation stabilizer has rank 2");
    (hnf, pos)
}

/// Cusps as orbits of the stabilizer of `∞` (translations and diagonal units) on cosets.
pub fn cusps(group: &BuiltinGroup, table: &CosetTable) -> Result<Vec<CuspData>> {
    let pres = &group.presentation;
    let ring = *pres
        .ring()
        .ok_or_else(|| Error::Degenerate("presentation has no matrices".into()))?;
    if ![1, 2, 3, 7, 11].contains(&ring.d()) {
        return Err(Error::UnsupportedD(ring.d()));
    }
    let mut words: Vec<Word> = group.translation_words.to_vec();
    words.extend(group.diagonal_words.iter().map(|(_, w)| w.clone()));
    let mut out = Vec::new();
    for orbit in table.orbits(&words) {
        let i = orbit[0];
        let (hnf, torbit) = translation_stabilizer(group, table, i);
        let unipotent_stabilizer = group
            .diagonal_words
            .iter()
            .all(|(_, w)| !torbit.contains_key(&table.act_word(i, w)));
        let rep = pres.eval_word(&table.transversal[i]);
        let ti = &table.transversal[i];
        let ti_inv = invert_word(ti);
        let (a, b, c) = hnf;
        let parabolic_words = [(a, 0), (b, c)]
            .map(|(p, q)| [ti.clone(), translation_word(group, p, q), ti_inv.clone()].concat());
        out.push(CuspData {
            coset: i,
            representative: (rep.a.clone(), rep.c.clone()),
            conjugator: rep.inverse(),
            lattice_hnf: hnf,
            orbit_size: orbit.len(),
            unipotent_stabilizer,
            parabolic_words,
        });
    }
    Ok(out)
}

/// The parabolic lattice at a cusp, solved from the congruence conditions directly.
///
/// Independent of the coset table: `x` is tested by membership of `B_P⁻¹ n(x) B_P`.
pub fn parabolic_lattice(spec: &SubgroupSpec, cusp: &CuspData) -> Result<PlaneLattice> {
    let ring = *spec.ring();
    let mut modulus = spec.ideal.norm();
    if let Some(b) = &spec.base {
        modulus *= b.norm();
    }
    let bp_inv = cusp.conjugator.inverse();
    let conj = |p: i64, q: i64| {
        bp_inv
            .mul(&ring, &SL2Mat::translation(QuadInt::new(p, q)))
            .mul(&ring, &cusp.conjugator)
    };
    let mut gens: Vec<(i128, i128)> = vec![(modulus as i128, 0), (0, modulus as i128)];
    for p in 0..modulus {
        for q in 0..modulus {
            if (p, q) != (0, 0) && spec.is_member(&conj(p, q)) {
                gens.push((p as i128, q as i128));
            }
        }
    }
    let (a, b, c) = hnf2(&gens).ok_or_else(|| Error::Degenerate("empty lattice".into()))?;
    PlaneLattice::from_hnf(&ring, a, b, c)
}
