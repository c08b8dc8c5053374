use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use super::coset::CosetTable;
use super::presentation::{
    cyclic_reduce, free_reduce, gen_of, invert_word, letter, Letter, Presentation, Word,
};
use super::sl2::SL2Mat;
use crate::error::{Error, Result};

/// A presentation of a finite-index subgroup together with the data to rewrite
/// elements of the subgroup, given as words in the parent generators, into it.
#[derive(Clone, Debug)]
pub struct SubgroupPresentation {
    pub presentation: Presentation,
    /// `schreier_id[i][j]` numbers the Schreier generator `T_i x_j T_{i x_j}⁻¹`; `None` on tree edges.
    schreier_id: Vec<Vec<Option<u32>>>,
    /// Each Schreier generator as a word in the current generators.
    schreier_word: Vec<Word>,
    pub schreier_generator_count: usize,
    pub schreier_relator_count: usize,
}

/// Reidemeister–Schreier presentation of the stabilizer of coset 0, before simplification.
pub fn reidemeister_schreier(
    pres: &Presentation,
    table: &CosetTable,
) -> Result<SubgroupPresentation> {
    let g = pres.generator_count;
    if table.generator_count() != g {
        return Err(Error::InconsistentTable("generator count mismatch".into()));
    }
    let n = table.index;
    let mut schreier_id = vec![vec![None; g]; n];
    let mut tree = vec![vec![false; g]; n];
    for (j, p) in table.parent.iter().enumerate() {
        if let Some((i, l)) = *p {
            if l > 0 {
                tree[i as usize][gen_of(l)] = true;
            } else {
                tree[j][gen_of(l)] = true;
            }
        }
    }
    let mut count = 0u32;
    for i in 0..n {
        for s in 0..g {
            if !tree[i][s] {
                schreier_id[i][s] = Some(count);
                count += 1;
            }
        }
    }
    let mut sp = SubgroupPresentation {
        presentation: Presentation::abstract_group(count as usize, Vec::new()),
        schreier_id,
        schreier_word: (0..count as usize)
            .map(|k| vec![letter(k, false)])
            .collect(),
        schreier_generator_count: count as usize,
        schreier_relator_count: n * pres.relators.len(),
    };
    let mut relators = Vec::with_capacity(sp.schreier_relator_count);
    for k in 0..n {
        for r in &pres.relators {
            relators.push(sp.rewrite_raw(table, r, k));
        }
    }
    sp.presentation.relators = relators;
    if pres.has_matrices() {
        let ring = *pres.ring().unwrap();
        let mut reps = vec![SL2Mat::identity(); n];
        for j in 1..n {
            let (i, l) = table.parent[j].unwrap();
            let m = &pres.matrices[gen_of(l)];
            let m = if l > 0 { m.clone() } else { m.inverse() };
            reps[j] = reps[i as usize].mul(&ring, &m);
        }
        let mut mats = vec![SL2Mat::identity(); count as usize];
        for i in 0..n {
            for s in 0..g {
                if let Some(id) = sp.schreier_id[i][s] {
                    let k = table.action[s][i] as usize;
                    mats[id as usize] = reps[i]
                        .mul(&ring, &pres.matrices[s])
                        .mul(&ring, &reps[k].inverse());
                }
            }
        }
        let names = (0..count as usize).map(|k| format!("y{k}")).collect();
        let rels = std::mem::take(&mut sp.presentation.relators);
        sp.presentation = Presentation::with_matrices(ring, names, mats, rels);
    }
    Ok(sp)
}

impl SubgroupPresentation {
    /// Rewrites a parent word read from coset `start` into raw Schreier generators.
    fn rewrite_raw(&self, table: &CosetTable, w: &[Letter], start: usize) -> Word {
        let mut k = start;
        let mut out = Vec::new();
        for &l in w {
            let s = gen_of(l);
            if l > 0 {
                if let Some(id) = self.schreier_id[k][s] {
                    out.push(letter(id as usize, false));
                }
                k = table.action[s][k] as usize;
            } else {
                k = table.inverse_action[s][k] as usize;
                if let Some(id) = self.schreier_id[k][s] {
                    out.push(letter(id as usize, true));
                }
            }
        }
        out
    }

    /// Rewrites a parent word lying in the subgroup into the current generators.
    pub fn rewrite(&self, table: &CosetTable, w: &[Letter]) -> Result<Word> {
        if table.act_word(0, w) != 0 {
            return Err(Error::Degenerate("word is not in the subgroup".into()));
        }
        let raw = self.rewrite_raw(table, w, 0);
        let mut out = Vec::new();
        for l in raw {
            let x = &self.schreier_word[gen_of(l)];
            if l > 0 {
                out.extend_from_slice(x);
            } else {
                out.extend(invert_word(x));
            }
        }
        Ok(free_reduce(&out))
    }

    /// Simplifies by Tietze moves: drops trivial and duplicate relators and eliminates
    /// generators occurring exactly once in a relator of length at most `max_len`.
    pub fn simplify(&self, max_len: usize) -> SubgroupPresentation {
        let ng = self.presentation.generator_count;
        let mut rels: Vec<Option<Word>> = self
            .presentation
            .relators
            .iter()
            .map(|r| Some(cyclic_reduce(r)))
            .collect();
        let mut version = vec![0u32; rels.len()];
        let mut occ: Vec<Vec<usize>> = vec![Vec::new(); ng];
        let mut heap = BinaryHeap::new();
        for (ri, r) in rels.iter().enumerate() {
            let r = r.as_ref().unwrap();
            for g in distinct_gens(r) {
                occ[g].push(ri);
            }
            heap.push(Reverse((r.len(), ri, 0u32)));
        }
        let mut replacement: Vec<Option<Word>> = vec![None; ng];
        let mut order = Vec::new();
        while let Some(Reverse((len, ri, ver))) = heap.pop() {
            if ver != version[ri] || rels[ri].is_none() {
                continue;
            }
            if len == 0 {
                rels[ri] = None;
                continue;
            }
            if len > max_len {
                break;
            }
            let r = rels[ri].clone().unwrap();
            let Some((pos, x)) = pick_generator(&r, &occ) else {
                continue;
            };
            // r = A x^e B, so x^e = A⁻¹ B⁻¹.
            let mut rhs = invert_word(&r[..pos]);
            rhs.extend(invert_word(&r[pos + 1..]));
            let rhs = if r[pos] > 0 {
                free_reduce(&rhs)
            } else {
                invert_word(&free_reduce(&rhs))
            };
            rels[ri] = None;
            let users = std::mem::take(&mut occ[x]);
            for rj in BTreeSet::from_iter(users) {
                if rj == ri {
                    continue;
                }
                let Some(old) = rels[rj].as_ref() else {
                    continue;
                };
                if !old.iter().any(|&l| gen_of(l) == x) {
                    continue;
                }
                let new = cyclic_reduce(&substitute(old, x, &rhs));
                for g in distinct_gens(&new) {
                    if g != x {
                        occ[g].push(rj);
                    }
                }
                version[rj] += 1;
                heap.push(Reverse((new.len(), rj, version[rj])));
                rels[rj] = Some(new);
            }
            replacement[x] = Some(rhs);
            order.push(x);
        }
        // Renumber the surviving generators.
        let mut new_id = vec![None; ng];
        let mut kept = Vec::new();
        for g in 0..ng {
            if replacement[g].is_none() {
                new_id[g] = Some(kept.len());
                kept.push(g);
            }
        }
        let mut memo: Vec<Option<Word>> = vec![None; ng];
        for g in 0..ng {
            expand(g, &replacement, &new_id, &mut memo);
        }
        let map_word = |w: &[Letter], memo: &[Option<Word>]| -> Word {
            let mut out = Vec::new();
            for &l in w {
                let e = memo[gen_of(l)].as_ref().unwrap();
                if l > 0 {
                    out.extend_from_slice(e);
                } else {
                    out.extend(invert_word(e));
                }
            }
            free_reduce(&out)
        };
        let mut seen = BTreeSet::new();
        let mut relators = Vec::new();
        for r in rels.into_iter().flatten() {
            let r = cyclic_reduce(&map_word(&r, &memo));
            if r.is_empty() {
                continue;
            }
            if seen.insert(canonical_cyclic(&r)) {
                relators.push(r);
            }
        }
        let schreier_word = self
            .schreier_word
            .iter()
            .map(|w| map_word(w, &memo))
            .collect();
        let p = &self.presentation;
        let names: Vec<String> = kept.iter().map(|&g| p.names[g].clone()).collect();
        let presentation = if p.has_matrices() {
            let mats = kept.iter().map(|&g| p.matrices[g].clone()).collect();
            Presentation::with_matrices(*p.ring().unwrap(), names, mats, relators)
        } else {
            let mut q = Presentation::abstract_group(kept.len(), relators);
            q.names = names;
            q
        };
        SubgroupPresentation {
            presentation,
            schreier_id: self.schreier_id.clone(),
            schreier_word,
            schreier_generator_count: self.schreier_generator_count,
            schreier_relator_count: self.schreier_relator_count,
        }
    }
}

fn distinct_gens(w: &[Letter]) -> Vec<usize> {
    let mut g: Vec<usize> = w.iter().map(|&l| gen_of(l)).collect();
    g.sort_unstable();
    g.dedup();
    g
}

/// A generator occurring exactly once in `r`, preferring the one in the fewest relators.
fn pick_generator(r: &[Letter], occ: &[Vec<usize>]) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for (pos, &l) in r.iter().enumerate() {
        let x = gen_of(l);
        if r.iter().filter(|&&m| gen_of(m) == x).count() != 1 {
            continue;
        }
        let cost = occ[x].len();
        if best.is_none_or(|(c, _, bx)| (cost, x) < (c, bx)) {
            best = Some((cost, pos, x));
        }
    }
    best.map(|(_, pos, x)| (pos, x))
}

fn substitute(w: &[Letter], x: usize, rhs: &[Letter]) -> Word {
    let inv = invert_word(rhs);
    let mut out = Vec::with_capacity(w.len());
    for &l in w {
        if gen_of(l) == x {
            out.extend_from_slice(if l > 0 { rhs } else { &inv });
        } else {
            out.push(l);
        }
    }
    free_reduce(&out)
}

fn expand(g: usize, repl: &[Option<Word>], new_id: &[Option<usize>], memo: &mut Vec<Option<Word>>) {
    if memo[g].is_some() {
        return;
    }
    let w = match &repl[g] {
        None => vec![letter(new_id[g].unwrap(), false)],
        Some(r) => {
            let mut out = Vec::new();
            for &l in r {
                expand(gen_of(l), repl, new_id, memo);
                let e = memo[gen_of(l)].as_ref().unwrap();
                if l > 0 {
                    out.extend_from_slice(e);
                } else {
                    out.extend(invert_word(e));
                }
            }
            free_reduce(&out)
        }
    };
    memo[g] = Some(w);
}

/// Minimum over rotations of a word and its inverse.
fn canonical_cyclic(r: &[Letter]) -> Word {
    let inv = invert_word(r);
    let mut best = r.to_vec();
    for w in [r, inv.as_slice()] {
        for k in 0..w.len() {
            let mut c = w[k..].to_vec();
            c.extend_from_slice(&w[..k]);
            if c < best {
                best = c;
            }
        }
    }
    best
}
