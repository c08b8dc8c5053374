use std::collections::BTreeMap;

use serde::Serialize;

use super::sparse::IntMatrix;
use crate::bianchi::SL2Mat;
use crate::error::{Error, Result};
use crate::int::{factorial, Int};
use crate::linalg::ZMat;
use crate::quad_arith::{Ideal, QuadInt};
use crate::sym_modules::{o_matrix_to_z, rho_action};

type Combo = BTreeMap<usize, Int>;

fn combo_axpy(out: &mut Combo, f: &Int, x: &Combo) {
    for (k, v) in x {
        let e = out.entry(*k).or_insert(Int::ZERO);
        *e += &(f * v);
        if e.is_zero() {
            out.remove(k);
        }
    }
}

fn lin(a: &Int, x: &[Int], b: &Int, y: &[Int]) -> Vec<Int> {
    x.iter().zip(y).map(|(u, v)| &(a * u) + &(b * v)).collect()
}

fn lin_combo(a: &Int, x: &Combo, b: &Int, y: &Combo) -> Combo {
    let mut out = Combo::new();
    combo_axpy(&mut out, a, x);
    combo_axpy(&mut out, b, y);
    out
}

/// A sublattice of `Z^n` in echelon form, each basis vector remembering how it was
/// built from the inserted columns.
#[derive(Clone, Debug)]
pub struct TrackedLattice {
    n: usize,
    basis: Vec<Option<(Vec<Int>, Combo)>>,
}

impl TrackedLattice {
    pub fn new(n: usize) -> Self {
        TrackedLattice {
            n,
            basis: vec![None; n],
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.iter().flatten().count()
    }

    /// Adds column number `id` with value `v`.
    pub fn insert(&mut self, id: usize, v: Vec<Int>) {
        assert_eq!(v.len(), self.n);
        let mut v = v;
        let mut combo = Combo::from([(id, Int::ONE)]);
        for r in 0..self.n {
            if v[r].is_zero() {
                continue;
            }
            match self.basis[r].take() {
                None => {
                    if v[r].is_negative() {
                        v = v.iter().map(|x| -x).collect();
                        combo.values_mut().for_each(|x| *x = -&*x);
                    }
                    self.basis[r] = Some((v, combo));
                    return;
                }
                Some((b, bc)) => {
                    let (g, s, t) = b[r].ext_gcd(&v[r]);
                    let (bg, vg) = (b[r].div_exact(&g), v[r].div_exact(&g));
                    // [[s, t], [−v_r/g, b_r/g]] is unimodular.
                    let nb = lin(&s, &b, &t, &v);
                    let nbc = lin_combo(&s, &bc, &t, &combo);
                    v = lin(&-&vg, &b, &bg, &v);
                    combo = lin_combo(&-&vg, &bc, &bg, &combo);
                    self.basis[r] = Some((nb, nbc));
                }
            }
        }
    }

    /// Integer combination of inserted columns equal to `t`, if `t` is in the lattice.
    pub fn express(&self, t: &[Int]) -> Option<Combo> {
        let mut t = t.to_vec();
        let mut out = Combo::new();
        for r in 0..self.n {
            if t[r].is_zero() {
                continue;
            }
            let (b, bc) = self.basis[r].as_ref()?;
            if !b[r].divides(&t[r]) {
                return None;
            }
            let q = t[r].div_exact(&b[r]);
            t = lin(&Int::ONE, &t, &-&q, b);
            combo_axpy(&mut out, &q, bc);
        }
        Some(out)
    }
}

/// Outcome of the inclusion `(m!·𝔞) Λ_m ⊆ Σ_γ (ρ(γ) − Id) Λ_m`.
#[derive(Clone, Debug, Serialize)]
pub struct Ub1Certificate {
    pub m: usize,
    pub ideal: String,
    pub passed: bool,
    /// Generators used before every target was reached.
    pub generators_used: usize,
    /// `X` with `S X = T`: `S` the stacked `ρ(γ) − Id`, `T` the target generators.
    #[serde(skip)]
    pub solution: Option<IntMatrix>,
    #[serde(skip)]
    pub span: IntMatrix,
    #[serde(skip)]
    pub targets: ZMat,
}

impl Ub1Certificate {
    /// Recomputes `S X` and compares with `T`.
    pub fn verify(&self) -> bool {
        let Some(x) = &self.solution else {
            return false;
        };
        match self.span.mul(x) {
            Ok(p) => p.to_dense() == self.targets,
            Err(_) => false,
        }
    }
}

/// Generators of `(m!·𝔞) Λ_m` as columns.
pub fn scaled_ideal_lattice(ideal: &Ideal, m: usize) -> ZMat {
    let ring = ideal.ring();
    let f = factorial(m as u32);
    let n = 2 * (m + 1);
    let mut cols = Vec::new();
    for alpha in ideal.basis() {
        let alpha: QuadInt = alpha.scale(&f);
        let mut diag = vec![vec![QuadInt::zero(); m + 1]; m + 1];
        for (j, row) in diag.iter_mut().enumerate() {
            row[j] = alpha.clone();
        }
        let z = o_matrix_to_z(ring, &diag);
        cols.extend((0..n).map(|c| z.column(c)));
    }
    ZMat::from_rows(&cols).transpose()
}

/// Checks the inclusion generator by generator, stopping once every target is reached.
pub fn check_ub1(ideal: &Ideal, m: usize, generators: &[SL2Mat]) -> Result<Ub1Certificate> {
    let ring = ideal.ring();
    let n = 2 * (m + 1);
    let targets = scaled_ideal_lattice(ideal, m);
    let mut lattice = TrackedLattice::new(n);
    let mut span_triplets = Vec::new();
    let mut used = 0;
    let mut solution = None;
    for g in generators {
        let d = rho_action(ring, g, m).matrix.sub(&ZMat::identity(n));
        for c in 0..n {
            let id = used * n + c;
            let col = d.column(c);
            for (r, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    span_triplets.push((r, id, v.clone()));
                }
            }
            lattice.insert(id, col);
        }
        used += 1;
        if lattice.rank() < n {
            continue;
        }
        let combos: Option<Vec<Combo>> = (0..targets.cols())
            .map(|j| lattice.express(&targets.column(j)))
            .collect();
        if let Some(combos) = combos {
            let t = combos
                .iter()
                .enumerate()
                .flat_map(|(j, c)| c.iter().map(move |(k, v)| (*k, j, v.clone())));
            solution = Some(IntMatrix::from_triplets(used * n, targets.cols(), t));
            break;
        }
    }
    let span = IntMatrix::from_triplets(n, used * n, span_triplets);
    let cert = Ub1Certificate {
        m,
        ideal: ideal.label(),
        passed: solution.is_some(),
        generators_used: used,
        solution,
        span,
        targets,
    };
    if cert.passed && !cert.verify() {
        return Err(Error::CheckFailed {
            name: "ub1",
            detail: "certificate does not reproduce the targets".into(),
        });
    }
    Ok(cert)
}

/// `log [Λ_m : (m!·𝔞)Λ_m] = (m+1) log(m!²·N(𝔞))`, the bound the inclusion gives on `|H_0|`,
/// and the smaller `(m+1) log(m!·N(𝔞))`.
pub fn ub1_log_bounds(norm: i64, m: usize) -> (f64, f64) {
    let lf = factorial(m as u32).ln_abs();
    let ln = (norm as f64).ln();
    let k = (m + 1) as f64;
    (k * (2.0 * lf + ln), k * (lf + ln))
}
