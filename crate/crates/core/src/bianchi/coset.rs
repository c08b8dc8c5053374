use std::collections::HashMap;
use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::presentation::{gen_of, letter, Letter, Presentation, Word};
use super::sl2::SL2Mat;
use super::subgroup::{SubgroupKind, SubgroupSpec};
use crate::error::{Error, Result};
use crate::quad_arith::{Residue, ResidueRing};

/// Right cosets `H g` of a finite-index subgroup, with the right action of each generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetTable {
    pub index: usize,
    /// `action[j][i]` is the coset `i · x_j`.
    pub action: Vec<Vec<u32>>,
    /// `inverse_action[j][i]` is the coset `i · x_j⁻¹`.
    #[serde(skip)]
    pub inverse_action: Vec<Vec<u32>>,
    /// Spanning tree: coset `i > 0` is `parent.0 · parent.1`.
    #[serde(skip)]
    pub parent: Vec<Option<(u32, Letter)>>,
    /// Schreier representative words, prefix closed, with `transversal[0]` empty.
    pub transversal: Vec<Word>,
}

/// Residue-level model of the right action on coset labels.
enum Labeller {
    Principal(Sl2Mod),
    Hecke(LineMod),
    Intersect(Sl2Mod, LineMod),
}

struct Sl2Mod {
    rr: ResidueRing,
    n: u64,
    gens: Vec<[Residue; 4]>,
    invs: Vec<[Residue; 4]>,
}

struct LineMod {
    rr: ResidueRing,
    n: u64,
    units: Vec<Residue>,
    gens: Vec<[Residue; 4]>,
    invs: Vec<[Residue; 4]>,
}

fn reduce_mat(rr: &ResidueRing, m: &SL2Mat) -> [Residue; 4] {
    [
        rr.encode(&m.a),
        rr.encode(&m.b),
        rr.encode(&m.c),
        rr.encode(&m.d),
    ]
}

impl Sl2Mod {
    fn new(rr: ResidueRing, mats: &[SL2Mat]) -> Self {
        let n = rr.size() as u64;
        let gens = mats.iter().map(|m| reduce_mat(&rr, m)).collect();
        let invs = mats.iter().map(|m| reduce_mat(&rr, &m.inverse())).collect();
        Sl2Mod { rr, n, gens, invs }
    }

    fn pack(&self, x: [Residue; 4]) -> u64 {
        x.iter().fold(0u64, |k, &r| k * self.n + r as u64)
    }

    fn unpack(&self, mut k: u64) -> [Residue; 4] {
        let mut x = [0; 4];
        for i in (0..4).rev() {
            x[i] = (k % self.n) as Residue;
            k /= self.n;
        }
        x
    }

    fn identity(&self) -> u64 {
        let (o, z) = (self.rr.one(), self.rr.zero());
        self.pack([o, z, z, o])
    }

    fn act(&self, key: u64, l: Letter) -> u64 {
        let x = self.unpack(key);
        let g = if l > 0 { &self.gens } else { &self.invs }[gen_of(l)];
        let r = &self.rr;
        let dot = |p: Residue, q: Residue, s: Residue, t: Residue| r.add(r.mul(p, q), r.mul(s, t));
        self.pack([
            dot(x[0], g[0], x[1], g[2]),
            dot(x[0], g[1], x[1], g[3]),
            dot(x[2], g[0], x[3], g[2]),
            dot(x[2], g[1], x[3], g[3]),
        ])
    }
}

impl LineMod {
    fn new(rr: ResidueRing, mats: &[SL2Mat]) -> Self {
        let n = rr.size() as u64;
        let units = rr.units();
        let gens = mats.iter().map(|m| reduce_mat(&rr, m)).collect();
        let invs = mats.iter().map(|m| reduce_mat(&rr, &m.inverse())).collect();
        LineMod {
            rr,
            n,
            units,
            gens,
            invs,
        }
    }

    /// Smallest encoding among the unit multiples of the row `(c, d)`.
    fn canon(&self, c: Residue, d: Residue) -> u64 {
        self.units
            .iter()
            .map(|&u| self.rr.mul(u, c) as u64 * self.n + self.rr.mul(u, d) as u64)
            .min()
            .unwrap()
    }

    fn identity(&self) -> u64 {
        self.canon(self.rr.zero(), self.rr.one())
    }

    fn act(&self, key: u64, l: Letter) -> u64 {
        let (c, d) = ((key / self.n) as Residue, (key % self.n) as Residue);
        let g = if l > 0 { &self.gens } else { &self.invs }[gen_of(l)];
        let r = &self.rr;
        self.canon(
            r.add(r.mul(c, g[0]), r.mul(d, g[2])),
            r.add(r.mul(c, g[1]), r.mul(d, g[3])),
        )
    }
}

impl Labeller {
    fn new(pres: &Presentation, spec: &SubgroupSpec) -> Result<Self> {
        if !pres.has_matrices() {
            return Err(Error::Degenerate("presentation has no matrices".into()));
        }
        let mats = &pres.matrices;
        Ok(match spec.kind {
            SubgroupKind::Principal => {
                Labeller::Principal(Sl2Mod::new(ResidueRing::new(&spec.ideal), mats))
            }
            SubgroupKind::Hecke => {
                Labeller::Hecke(LineMod::new(ResidueRing::new(&spec.ideal), mats))
            }
            SubgroupKind::HeckeIntersect => {
                let base = spec.base.as_ref().unwrap();
                let p = Sl2Mod::new(ResidueRing::new(base), mats);
                let h = LineMod::new(ResidueRing::new(&spec.ideal), mats);
                if p.n
                    .checked_pow(4)
                    .and_then(|x| x.checked_mul(h.n * h.n))
                    .is_none()
                {
                    return Err(Error::Degenerate("level too large for coset labels".into()));
                }
                Labeller::Intersect(p, h)
            }
        })
    }

    fn identity(&self) -> u64 {
        match self {
            Labeller::Principal(p) => p.identity(),
            Labeller::Hecke(h) => h.identity(),
            Labeller::Intersect(p, h) => p.identity() * h.n * h.n + h.identity(),
        }
    }

    fn act(&self, key: u64, l: Letter) -> u64 {
        match self {
            Labeller::Principal(p) => p.act(key, l),
            Labeller::Hecke(h) => h.act(key, l),
            Labeller::Intersect(p, h) => {
                let m = h.n * h.n;
                p.act(key / m, l) * m + h.act(key % m, l)
            }
        }
    }
}

/// Default letter order for the breadth-first transversal: `x_0, x_0⁻¹, x_1, …`.
pub fn default_letter_order(generator_count: usize) -> Vec<Letter> {
    (0..generator_count)
        .flat_map(|j| [letter(j, false), letter(j, true)])
        .collect()
}

/// Builds the coset table of a congruence subgroup from residue labels.
pub fn coset_table(pres: &Presentation, spec: &SubgroupSpec) -> Result<CosetTable> {
    coset_table_with_order(pres, spec, &default_letter_order(pres.generator_count))
}

/// As [`coset_table`], exploring letters in the given order (changes the transversal).
pub fn coset_table_with_order(
    pres: &Presentation,
    spec: &SubgroupSpec,
    order: &[Letter],
) -> Result<CosetTable> {
    let lab = Labeller::new(pres, spec)?;
    let g = pres.generator_count;
    let mut ids: HashMap<u64, u32> = HashMap::new();
    let mut keys = vec![lab.identity()];
    ids.insert(keys[0], 0);
    let mut parent = vec![None];
    let mut transversal: Vec<Word> = vec![vec![]];
    let mut action: Vec<Vec<u32>> = vec![Vec::new(); g];
    let mut queue = VecDeque::from([0u32]);
    while let Some(i) = queue.pop_front() {
        let key = keys[i as usize];
        for &l in order {
            let k2 = lab.act(key, l);
            let j = match ids.get(&k2) {
                Some(&j) => j,
                None => {
                    let j = keys.len() as u32;
                    ids.insert(k2, j);
                    keys.push(k2);
                    parent.push(Some((i, l)));
                    let mut w = transversal[i as usize].clone();
                    w.push(l);
                    transversal.push(w);
                    queue.push_back(j);
                    j
                }
            };
            if l > 0 {
                let col = &mut action[gen_of(l)];
                if col.len() <= i as usize {
                    col.resize(i as usize + 1, u32::MAX);
                }
                col[i as usize] = j;
            }
        }
    }
    let index = keys.len();
    // Letters absent from the order still need their action.
    for (j, col) in action.iter_mut().enumerate() {
        col.resize(index, u32::MAX);
        for (i, slot) in col.iter_mut().enumerate() {
            if *slot == u32::MAX {
                *slot = ids[&lab.act(keys[i], letter(j, false))];
            }
        }
    }
    let table = CosetTable::from_parts(action, parent, transversal)?;
    table.verify(pres)?;
    Ok(table)
}

impl CosetTable {
    fn from_parts(
        action: Vec<Vec<u32>>,
        parent: Vec<Option<(u32, Letter)>>,
        transversal: Vec<Word>,
    ) -> Result<Self> {
        let index = parent.len();
        let mut inverse_action = Vec::with_capacity(action.len());
        for col in &action {
            let mut inv = vec![u32::MAX; index];
            for (i, &j) in col.iter().enumerate() {
                if inv[j as usize] != u32::MAX {
                    return Err(Error::InconsistentTable(
                        "generator action is not a bijection".into(),
                    ));
                }
                inv[j as usize] = i as u32;
            }
            inverse_action.push(inv);
        }
        Ok(CosetTable {
            index,
            action,
            inverse_action,
            parent,
            transversal,
        })
    }

    /// Builds a table from permutations, with a breadth-first transversal.
    pub fn from_permutations(action: Vec<Vec<u32>>) -> Result<Self> {
        let index = action.first().map_or(1, |c| c.len());
        if action.iter().any(|c| c.len() != index) {
            return Err(Error::InconsistentTable(
                "permutations of unequal length".into(),
            ));
        }
        let mut t = CosetTable::from_parts(action, vec![None; index], vec![vec![]; index])?;
        let mut seen = vec![false; index];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let order = default_letter_order(t.action.len());
        while let Some(i) = queue.pop_front() {
            for &l in &order {
                let j = t.act(i, l);
                if !seen[j] {
                    seen[j] = true;
                    t.parent[j] = Some((i as u32, l));
                    let mut w = t.transversal[i].clone();
                    w.push(l);
                    t.transversal[j] = w;
                    queue.push_back(j);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InconsistentTable("action is not transitive".into()));
        }
        Ok(t)
    }

    /// The trivial table of the whole group.
    pub fn trivial(generator_count: usize) -> Self {
        CosetTable::from_permutations(vec![vec![0]; generator_count]).unwrap()
    }

    pub fn generator_count(&self) -> usize {
        self.action.len()
    }

    pub fn act(&self, i: usize, l: Letter) -> usize {
        let j = gen_of(l);
        (if l > 0 {
            self.action[j][i]
        } else {
            self.inverse_action[j][i]
        }) as usize
    }

    pub fn act_word(&self, mut i: usize, w: &[Letter]) -> usize {
        for &l in w {
            i = self.act(i, l);
        }
        i
    }

    /// Checks bijectivity, that relators fix every coset, and that the transversal is valid.
    pub fn verify(&self, pres: &Presentation) -> Result<()> {
        if self.action.len() != pres.generator_count {
            return Err(Error::InconsistentTable("generator count mismatch".into()));
        }
        for r in &pres.relators {
            for i in 0..self.index {
                if self.act_word(i, r) != i {
                    return Err(Error::InconsistentTable(format!("relator moves coset {i}")));
                }
            }
        }
        for (i, w) in self.transversal.iter().enumerate() {
            if self.act_word(0, w) != i {
                return Err(Error::InconsistentTable(format!(
                    "transversal word {i} is wrong"
                )));
            }
        }
        Ok(())
    }

    /// Orbits of the subgroup generated by `words` acting on cosets, each sorted, ordered by minimum.
    pub fn orbits(&self, words: &[Word]) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.index];
        let mut out = Vec::new();
        for s in 0..self.index {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = out.len();
            let mut orbit = vec![s];
            let mut k = 0;
            while k < orbit.len() {
                let i = orbit[k];
                for w in words {
                    for j in [
                        self.act_word(i, w),
                        self.act_word(i, &super::invert_word(w)),
                    ] {
                        if comp[j] == usize::MAX {
                            comp[j] = out.len();
                            orbit.push(j);
                        }
                    }
                }
                k += 1;
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "index": self.index,
            "permutations": self.action,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bianchi::builtin_presentation;
    use crate::quad_arith::{congruence_index, Ideal, QuadRing};

    #[test]
    fn small_indices() {
        let p = builtin_presentation(1).unwrap();
        let r = QuadRing::new(1).unwrap();
        for (s, idx) in [
            ("principal:1+i", 6),
            ("principal:2", 48),
            ("principal:1", 1),
            ("hecke:1+i", 3),
        ] {
            let t = coset_table(&p, &SubgroupSpec::parse(&r, s).unwrap()).unwrap();
            assert_eq!(t.index, idx, "{s}");
        }
    }

    #[test]
    fn principal_index_matches_formula() {
        for d in [1, 2, 3] {
            let p = builtin_presentation(d).unwrap();
            let r = QuadRing::new(d).unwrap();
            for id in Ideal::enumerate_up_to(&r, 12) {
                let t = coset_table(&p, &SubgroupSpec::principal(id.clone())).unwrap();
                assert_eq!(t.index as u64, congruence_index(&r, &id), "D={d} {id}");
            }
        }
    }

    #[test]
    fn alternative_order_same_index() {
        let p = builtin_presentation(3).unwrap();
        let r = QuadRing::new(3).unwrap();
        let s = SubgroupSpec::parse(&r, "principal:2").unwrap();
        let mut order = default_letter_order(p.generator_count);
        order.reverse();
        let t1 = coset_table(&p, &s).unwrap();
        let t2 = coset_table_with_order(&p, &s, &order).unwrap();
        assert_eq!(t1.index, t2.index);
        assert_ne!(t1.transversal, t2.transversal);
    }

    #[test]
    fn wrong_relator_detected() {
        let mut p = builtin_presentation(1).unwrap();
        p.relators.push(vec![3]); // t = 1 is false
        let r = QuadRing::new(1).unwrap();
        let s = SubgroupSpec::parse(&r, "principal:2").unwrap();
        assert!(matches!(
            coset_table(&p, &s),
            Err(Error::InconsistentTable(_))
        ));
    }
}
