use num_bigint::BigInt;
use serde::{Serialize, Serializer};

use super::fox::ChainComplexZ;
use super::snf::{integer_kernel, snf, snf_dense, SmithForm};
use super::sparse::IntMatrix;
use crate::int::Int;
use crate::linalg::{QMat, ZMat};
use crate::sym_modules::ModuleMap;

/// `H_q ≅ Z^free_rank ⊕ ⊕ Z/d_i`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HomologySummary {
    pub degree: usize,
    pub free_rank: usize,
    /// Factors `> 1`, each dividing the next.
    pub torsion_factors: Vec<Int>,
    #[serde(serialize_with = "as_string")]
    pub torsion_order: BigInt,
    pub log_torsion_order: f64,
}

fn as_string<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl HomologySummary {
    pub fn new(degree: usize, free_rank: usize, torsion_factors: Vec<Int>) -> Self {
        let torsion_order: BigInt = torsion_factors.iter().map(Int::to_bigint).product();
        let log_torsion_order = Int::from(torsion_order.clone()).ln_abs();
        HomologySummary {
            degree,
            free_rank,
            torsion_factors,
            torsion_order,
            log_torsion_order,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion_factors.is_empty()
    }
}

impl std::fmt::Display for HomologySummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        parts.extend(self.torsion_factors.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "H_{} = {}", self.degree, parts.join(" + "))
    }
}

fn smith_or_zero(d: Option<&IntMatrix>, rows: usize) -> SmithForm {
    match d {
        Some(d) => snf(d),
        None => SmithForm {
            rows,
            cols: 0,
            unit_count: 0,
            torsion: Vec::new(),
        },
    }
}

/// `H_q(C)`.
///
/// The torsion of `H_q` equals that of `coker ∂_{q+1}`, since `C_q / ker ∂_q` embeds in the
/// free module `C_{q−1}`; so only the Smith forms of the two adjacent boundaries are needed.
pub fn homology(c: &ChainComplexZ, q: usize) -> HomologySummary {
    let rank_in = c.boundary(q).map_or(0, |d| snf(d).rank());
    let out = smith_or_zero(c.boundary(q + 1), c.ranks[q]);
    HomologySummary::new(q, c.ranks[q] - rank_in - out.rank(), out.torsion)
}

/// All homology groups, each Smith form computed once.
pub fn homology_all(c: &ChainComplexZ) -> Vec<HomologySummary> {
    let forms: Vec<SmithForm> = c.boundaries.iter().map(snf).collect();
    (0..c.ranks.len())
        .map(|q| {
            let rank_in = if q == 0 { 0 } else { forms[q - 1].rank() };
            let (rank_out, tors) = forms
                .get(q)
                .map_or((0, Vec::new()), |f| (f.rank(), f.torsion.clone()));
            HomologySummary::new(q, c.ranks[q] - rank_in - rank_out, tors)
        })
        .collect()
}

/// `H_q` by the quotient-lattice construction: an integral basis `K` of `ker ∂_q`,
/// the image of `∂_{q+1}` written in that basis, then its Smith form. Dense; for small complexes.
pub fn homology_via_kernel_lattice(c: &ChainComplexZ, q: usize) -> HomologySummary {
    let n = c.ranks[q];
    let kernel: Vec<Vec<Int>> = match c.boundary(q) {
        Some(d) => integer_kernel(&d.to_dense()),
        None => (0..n).map(|i| ZMat::identity(n).column(i)).collect(),
    };
    let k = kernel.len();
    if k == 0 {
        return HomologySummary::new(q, 0, Vec::new());
    }
    let basis = ZMat::from_rows(&kernel).transpose().to_q();
    let image = c.boundary(q + 1).map(IntMatrix::to_dense);
    let cols = image.as_ref().map_or(0, ZMat::cols);
    let mut coords = ZMat::zeros(k, cols);
    for j in 0..cols {
        let b = image.as_ref().unwrap().column(j);
        let b: Vec<_> = b
            .iter()
            .map(|x| num_rational::BigRational::from_integer(x.to_bigint()))
            .collect();
        let x = basis.solve(&b).expect("boundary lies in the kernel");
        let x = QMat::from_columns(&[x], k)
            .to_z()
            .expect("kernel basis is saturated");
        for i in 0..k {
            coords.set(i, j, x.get(i, 0).clone());
        }
    }
    let s = snf_dense(&coords);
    HomologySummary::new(q, k - s.rank(), s.torsion)
}

/// `(Λ)_Γ`: the cokernel of the stacked `ρ(g) − Id`.
pub fn coinvariants(generators: &[ModuleMap]) -> HomologySummary {
    let Some(first) = generators.first() else {
        return HomologySummary::new(0, 0, Vec::new());
    };
    let n = first.matrix.rows();
    let mut t = Vec::new();
    for (j, g) in generators.iter().enumerate() {
        let d = g.matrix.sub(&ZMat::identity(n));
        for r in 0..n {
            for c in 0..n {
                if !d.get(r, c).is_zero() {
                    t.push((r, j * n + c, d.get(r, c).clone()));
                }
            }
        }
    }
    let s = snf(&IntMatrix::from_triplets(n, n * generators.len(), t));
    HomologySummary::new(0, n - s.rank(), s.torsion)
}
