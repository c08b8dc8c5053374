use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::int::Int;
use crate::integer_homology::{integer_kernel, smith_with_transforms};
use crate::linalg::{QMat, ZMat};
use crate::quad_arith::{QuadRat, QuadRing, SurdValue};
use crate::sym_modules::FVec;

fn to_integer_columns(gens: &[Vec<BigRational>], rows: usize) -> (ZMat, BigInt) {
    let scale = gens
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut z = ZMat::zeros(rows, gens.len());
    for (j, g) in gens.iter().enumerate() {
        for (i, x) in g.iter().enumerate() {
            z.set(
                i,
                j,
                Int::from((x * BigRational::from(scale.clone())).to_integer()),
            );
        }
    }
    (z, scale)
}

/// A `Z`-basis of the lattice spanned by rational vectors of length `rows`.
pub fn lattice_basis(gens: &[Vec<BigRational>], rows: usize) -> Vec<Vec<BigRational>> {
    if gens.is_empty() {
        return Vec::new();
    }
    let (z, scale) = to_integer_columns(gens, rows);
    let s = smith_with_transforms(&z);
    let img = z.mul(&s.right);
    let scale = BigRational::from(scale);
    (0..s.diagonal.len())
        .map(|j| {
            img.column(j)
                .iter()
                .map(|x| BigRational::from(x.to_bigint()) / &scale)
                .collect()
        })
        .collect()
}

/// Integer combinations of `basis` lying in the subspace where the listed coordinates vanish.
pub(crate) fn saturated_kernel(basis: &[Vec<BigRational>], zero_rows: &[usize]) -> Vec<Vec<Int>> {
    let rows: Vec<Vec<BigRational>> = zero_rows
        .iter()
        .map(|&r| basis.iter().map(|v| v[r].clone()).collect())
        .collect();
    // Transposed so that columns are the constraint rows; clearing denominators keeps the kernel.
    let (zt, _) = to_integer_columns(&rows, basis.len());
    integer_kernel(&zt.transpose())
}

/// A full-rank lattice in `F^k ⊂ C^k` with inner product `scale · Σ Re(z_i w̄_i)`.
#[derive(Clone, Debug, Serialize)]
pub struct HarmonicLattice {
    #[serde(skip)]
    pub ring: QuadRing,
    pub dim: usize,
    pub scale: SurdValue,
    #[serde(skip)]
    pub basis: Vec<FVec>,
}

fn flatten(v: &FVec) -> Vec<BigRational> {
    v.iter().flat_map(|x| [x.a.clone(), x.b.clone()]).collect()
}

fn unflatten(z: &[BigRational]) -> FVec {
    z.chunks(2)
        .map(|c| QuadRat::new(c[0].clone(), c[1].clone()))
        .collect()
}

impl HarmonicLattice {
    /// Reduces generators to a basis; the span must have real rank `2·dim`.
    pub fn from_generators(
        ring: &QuadRing,
        dim: usize,
        scale: SurdValue,
        gens: &[FVec],
    ) -> Result<Self> {
        let flat: Vec<Vec<BigRational>> = gens.iter().map(flatten).collect();
        let basis = lattice_basis(&flat, 2 * dim);
        if basis.len() != 2 * dim {
            return Err(Error::Degenerate(format!(
                "lattice has rank {} in a space of real dimension {}",
                basis.len(),
                2 * dim
            )));
        }
        Ok(HarmonicLattice {
            ring: *ring,
            dim,
            scale,
            basis: basis.iter().map(|b| unflatten(b)).collect(),
        })
    }

    /// Columns are the `{1, ω}` coordinates of the basis vectors.
    pub fn coordinate_matrix(&self) -> QMat {
        let cols: Vec<Vec<BigRational>> = self.basis.iter().map(flatten).collect();
        QMat::from_columns(&cols, 2 * self.dim)
    }

    /// `scale^k · (Im ω)^k · |det|`, exact.
    pub fn covolume(&self) -> SurdValue {
        let d = self.ring.d();
        let im = SurdValue::new(self.ring.im_omega_rational(), 1, d);
        let det = self.coordinate_matrix().det().abs();
        self.scale.mul(&im).powi(self.dim as i32).scale(&det)
    }

    /// The sublattice with every complex coordinate other than `keep` equal to zero,
    /// as a lattice in the line `keep`.
    pub fn restrict_to_coordinate(&self, keep: usize) -> Result<HarmonicLattice> {
        let flat: Vec<Vec<BigRational>> = self.basis.iter().map(flatten).collect();
        let zero_rows: Vec<usize> = (0..self.dim)
            .filter(|&i| i != keep)
            .flat_map(|i| [2 * i, 2 * i + 1])
            .collect();
        let kernel = saturated_kernel(&flat, &zero_rows);
        let gens: Vec<FVec> = kernel
            .iter()
            .map(|x| {
                let mut acc = QuadRat::zero();
                for (c, b) in x.iter().zip(&self.basis) {
                    acc = &acc + &b[keep].scale(&BigRational::from(c.to_bigint()));
                }
                vec![acc]
            })
            .collect();
        HarmonicLattice::from_generators(&self.ring, 1, self.scale.clone(), &gens)
    }

    /// Same lattice with every vector multiplied by `λ ∈ F`.
    pub fn twisted(&self, lambda: &QuadRat) -> HarmonicLattice {
        let basis = self
            .basis
            .iter()
            .map(|v| v.iter().map(|x| self.ring.field_mul(x, lambda)).collect())
            .collect();
        HarmonicLattice {
            basis,
            ..self.clone()
        }
    }
}

fn exact_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer().sqrt(), x.denom().sqrt());
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| BigRational::new(n, d))
}

/// Covolume of the lattice with basis columns `basis` under the inner product `gram`:
/// `√det(Bᵀ G B)`, exact as `r·(√D)^e` when the determinant is a square or `D` times one.
pub fn covolume(basis: &QMat, gram: &QMat, d: i64) -> Result<SurdValue> {
    let g = basis.transpose().mul(gram).mul(basis);
    let det = g.det();
    if !det.is_positive() {
        return Err(Error::Degenerate(
            "basis is dependent or the form is not positive".into(),
        ));
    }
    if let Some(r) = exact_sqrt(&det) {
        return Ok(SurdValue::rational(r, d));
    }
    let dd = BigRational::from(BigInt::from(d));
    if let Some(r) = exact_sqrt(&(&det / &dd)) {
        return Ok(SurdValue::new(r, 1, d));
    }
    Err(Error::Degenerate(format!(
        "covolume² = {det} is not of the form r²·D^e"
    )))
}

/// Floating covolume for a Gram matrix with no exact square root.
pub fn covolume_f64(basis: &QMat, gram: &QMat) -> f64 {
    let g = basis.transpose().mul(gram).mul(basis);
    crate::quad_arith::rational_to_f64(&g.det()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    #[test]
    fn covolume_examples() {
        let id = QMat::identity(2);
        assert_eq!(covolume(&id, &id, 1).unwrap(), SurdValue::one(1));
        for k in 1..5 {
            let sub = QMat::from_rows(vec![vec![q(k, 1), q(3, 1)], vec![q(0, 1), q(1, 1)]]);
            assert_eq!(covolume(&sub, &id, 1).unwrap(), SurdValue::from_int(k, 1));
        }
        // Z[√−2] in C: Gram diag(1, 2).
        let g = QMat::from_rows(vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(2, 1)]]);
        assert_eq!(covolume(&id, &g, 2).unwrap(), SurdValue::sqrt_d(2));
        let dep = QMat::from_rows(vec![vec![q(1, 1), q(2, 1)], vec![q(1, 1), q(2, 1)]]);
        assert!(covolume(&dep, &id, 1).is_err());
    }

    #[test]
    fn basis_of_generators() {
        let gens = vec![
            vec![q(2, 1), q(0, 1)],
            vec![q(0, 1), q(3, 1)],
            vec![q(1, 1), q(1, 1)],
        ];
        let b = lattice_basis(&gens, 2);
        assert_eq!(b.len(), 2);
        let m = QMat::from_columns(&b, 2);
        assert_eq!(m.det().abs(), q(1, 1));
        let halves = vec![vec![q(1, 2), q(0, 1)], vec![q(0, 1), q(1, 3)]];
        assert_eq!(
            QMat::from_columns(&lattice_basis(&halves, 2), 2)
                .det()
                .abs(),
            q(1, 6)
        );
    }

    #[test]
    fn harmonic_lattice_of_the_ring() {
        for d in [1, 2, 3, 7] {
            let ring = QuadRing::new(d).unwrap();
            let l = HarmonicLattice::from_generators(
                &ring,
                1,
                SurdValue::one(d),
                &[
                    vec![QuadRat::from_ints(1, 0)],
                    vec![QuadRat::from_ints(0, 1)],
                ],
            )
            .unwrap();
            assert_eq!(
                l.covolume(),
                crate::bianchi::PlaneLattice::ring_of_integers(&ring).covolume()
            );
        }
    }
}
