use super::presentation::{commutator, eval_word, letter, Presentation, Word};
use super::sl2::SL2Mat;
use crate::error::{Error, Result};
use crate::quad_arith::{QuadInt, QuadRing};

/// A built-in presentation of `SL(2, O_D)` with words for the stabilizer of `∞`.
#[derive(Clone, Debug)]
pub struct BuiltinGroup {
    pub presentation: Presentation,
    /// Words for `[[1,1],[0,1]]` and `[[1,ω],[0,1]]`.
    pub translation_words: [Word; 2],
    /// Words for `diag(ε, ε⁻¹)`, one per unit `ε ≠ 1`.
    pub diagonal_words: Vec<(QuadInt, Word)>,
}

pub const SUPPORTED_D: [i64; 5] = [1, 2, 3, 7, 11];

struct Spec {
    names: &'static [&'static str],
    mats: Vec<SL2Mat>,
    relators: Vec<Word>,
}

fn g(names: &[&str], n: &str) -> i32 {
    letter(names.iter().position(|x| *x == n).unwrap(), false)
}

/// Parses a word such as `"u^-1 a u a"`.
fn w(names: &[&str], s: &str) -> Word {
    s.split_whitespace()
        .flat_map(|tok| {
            let (base, exp) = match tok.split_once('^') {
                Some((b, e)) => (b, e.parse::<i64>().unwrap()),
                None => (tok, 1),
            };
            let l = g(names, base);
            let l = if exp < 0 { -l } else { l };
            vec![l; exp.unsigned_abs() as usize]
        })
        .collect()
}

fn pow(word: Word, k: usize) -> Word {
    word.repeat(k)
}

fn spec_for(ring: &QuadRing) -> Result<Spec> {
    let a = SL2Mat::from_ints([(0, 0), (-1, 0), (1, 0), (0, 0)]);
    let t = SL2Mat::translation(QuadInt::new(1, 0));
    let u = SL2Mat::translation(QuadInt::new(0, 1));
    Ok(match ring.d() {
        1 => {
            let names = &["a", "l", "t", "u"];
            let l = SL2Mat::diagonal(ring, &QuadInt::new(0, 1));
            Spec {
                names,
                mats: vec![a, l, t, u],
                relators: vec![
                    w(names, "a^2"),
                    w(names, "l^2"),
                    pow(w(names, "a l"), 2),
                    pow(w(names, "t l"), 2),
                    pow(w(names, "u l"), 2),
                    pow(w(names, "a t"), 3),
                    pow(w(names, "u a l"), 3),
                    commutator(&w(names, "t"), &w(names, "u")),
                ],
            }
        }
        2 => {
            let names = &["a", "t", "u"];
            Spec {
                names,
                mats: vec![a, t, u],
                relators: vec![
                    w(names, "a^2"),
                    pow(w(names, "a t"), 3),
                    pow(w(names, "u^-1 a u a"), 2),
                    commutator(&w(names, "t"), &w(names, "u")),
                ],
            }
        }
        3 => {
            let names = &["a", "l", "t", "u"];
            let l = SL2Mat::diagonal(ring, &QuadInt::new(0, 1));
            Spec {
                names,
                mats: vec![a, l, t, u],
                relators: vec![
                    w(names, "a^2"),
                    w(names, "l^3"),
                    pow(w(names, "a l"), 2),
                    pow(w(names, "a t"), 3),
                    pow(w(names, "u l^2 a l"), 3),
                    commutator(&w(names, "t"), &w(names, "u")),
                    w(names, "l^-1 t l u"),
                    w(names, "l^-1 u l u t^-1"),
                ],
            }
        }
        7 | 11 => {
            let names = &["a", "t", "u"];
            let k = if ring.d() == 7 { 2 } else { 3 };
            Spec {
                names,
                mats: vec![a, t, u],
                relators: vec![
                    w(names, "a^2"),
                    pow(w(names, "a t"), 3),
                    commutator(&w(names, "t"), &w(names, "u")),
                    pow(w(names, "a t u^-1 a u"), k),
                ],
            }
        }
        d => return Err(Error::UnsupportedD(d)),
    })
}

/// Lifts a presentation of `PSL(2, O_D)` to `SL(2, O_D)` by adjoining the central `z = −I`.
fn lift_to_sl(ring: &QuadRing, spec: Spec) -> Result<Presentation> {
    let k = spec.mats.len();
    let z = letter(k, false);
    let mut names: Vec<String> = spec.names.iter().map(|s| s.to_string()).collect();
    names.push("z".into());
    let mut mats = spec.mats;
    mats.push(SL2Mat::minus_identity());
    let mut relators = Vec::new();
    for (i, r) in spec.relators.into_iter().enumerate() {
        let v = eval_word(ring, &mats, &r);
        let mut r = r;
        if v.is_minus_identity() {
            r.push(z);
        } else if !v.is_identity() {
            return Err(Error::BadRelator {
                index: i,
                value: v.display(ring),
            });
        }
        relators.push(r);
    }
    relators.push(vec![z, z]);
    for j in 0..k {
        relators.push(commutator(&[z], &[letter(j, false)]));
    }
    Ok(Presentation::with_matrices(*ring, names, mats, relators))
}

pub fn builtin_group(d: i64) -> Result<BuiltinGroup> {
    if !SUPPORTED_D.contains(&d) {
        return Err(Error::UnsupportedD(d));
    }
    let ring = QuadRing::new(d)?;
    let spec = spec_for(&ring)?;
    let has_l = spec.names.contains(&"l");
    let pres = lift_to_sl(&ring, spec)?;
    pres.check()?;
    let t = vec![letter(pres.generator_index("t").unwrap(), false)];
    let u = vec![letter(pres.generator_index("u").unwrap(), false)];
    let z = letter(pres.generator_index("z").unwrap(), false);
    let mut diag_gens = vec![vec![z]];
    if has_l {
        diag_gens.push(vec![letter(pres.generator_index("l").unwrap(), false)]);
    }
    // Closure of the diagonal generators; the unit group is tiny.
    let mut found: Vec<(SL2Mat, Word)> = vec![(SL2Mat::identity(), vec![])];
    let mut frontier = 0;
    while frontier < found.len() {
        let (m, wd) = found[frontier].clone();
        for gw in &diag_gens {
            let nm = m.mul(&ring, &pres.eval_word(gw));
            if !found.iter().any(|(x, _)| *x == nm) {
                let mut nw = wd.clone();
                nw.extend_from_slice(gw);
                found.push((nm, nw));
            }
        }
        frontier += 1;
    }
    let diagonal_words = found
        .into_iter()
        .filter(|(m, _)| !m.is_identity())
        .map(|(m, wd)| (m.a.clone(), wd))
        .collect::<Vec<_>>();
    debug_assert_eq!(diagonal_words.len() + 1, ring.units().len());
    Ok(BuiltinGroup {
        presentation: pres,
        translation_words: [t, u],
        diagonal_words,
    })
}

/// The built-in presentation of `SL(2, O_D)` for `D ∈ {1, 2, 3, 7, 11}`.
pub fn builtin_presentation(d: i64) -> Result<Presentation> {
    Ok(builtin_group(d)?.presentation)
}
