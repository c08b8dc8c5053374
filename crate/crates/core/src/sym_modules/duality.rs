use num_rational::BigRational;
use num_traits::One;

use super::action::{dual_action, f_matrix_to_q, rho_action, FVec, SymPowerLattice};
use crate::bianchi::SL2Mat;
use crate::error::{Error, Result};
use crate::int::{binomial, Int};
use crate::linalg::{QMat, ZMat};
use crate::quad_arith::{delta_d, QuadRat, QuadRing};

/// `⟨x, y⟩ = Σ x_j y_j`, with `{v_j}` orthonormal.
pub fn pairing(ring: &QuadRing, x: &[QuadRat], y: &[QuadRat]) -> Result<QuadRat> {
    if x.len() != y.len() {
        return Err(Error::Shape(format!(
            "weights {} and {}",
            x.len() as i64 - 1,
            y.len() as i64 - 1
        )));
    }
    Ok(x.iter()
        .zip(y)
        .fold(QuadRat::zero(), |acc, (a, b)| &acc + &ring.field_mul(a, b)))
}

/// `Σ x_j y_j / C(m, j)`, the pairing induced from `V ⊗ V` on symmetric tensors.
pub fn weighted_pairing(ring: &QuadRing, x: &[QuadRat], y: &[QuadRat]) -> Result<QuadRat> {
    if x.len() != y.len() {
        return Err(Error::Shape("mismatched weights".into()));
    }
    let m = x.len() as u32 - 1;
    Ok(x.iter()
        .zip(y)
        .enumerate()
        .fold(QuadRat::zero(), |acc, (j, (a, b))| {
            let w = BigRational::new(1.into(), binomial(m, j as u32).to_bigint());
            &acc + &ring.field_mul(a, b).scale(&w)
        }))
}

/// The isomorphism `S = ρ_m(A)/δ_D` from `Λ_m` onto `Λ_m^* = δ_D⁻¹ Λ_m`.
#[derive(Clone, Debug)]
pub struct DualityIso {
    pub m: usize,
    pub d: i64,
    pub delta: QuadRat,
    /// Matrix of `S` in the bases `{ω^k v_j}` of `Λ_m` and `{ω^k v_j / δ}` of `Λ_m^*`.
    pub lattice_map: ZMat,
}

fn a_matrix() -> SL2Mat {
    SL2Mat::from_ints([(0, 0), (-1, 0), (1, 0), (0, 0)])
}

pub fn self_duality(ring: &QuadRing, m: usize) -> DualityIso {
    DualityIso {
        m,
        d: ring.d(),
        delta: delta_d(ring).value,
        lattice_map: rho_action(ring, &a_matrix(), m).matrix,
    }
}

impl DualityIso {
    fn ring(&self) -> QuadRing {
        QuadRing::new(self.d).unwrap()
    }

    /// `S` as a rational matrix on `Λ_m ⊗ Q` in the basis `{ω^k v_j}`.
    pub fn field_matrix(&self) -> QMat {
        let ring = self.ring();
        let lat = SymPowerLattice::new(&ring, self.m);
        let inv = ring.field_inv(&self.delta).unwrap();
        lat.scalar_q(&inv).mul(&self.lattice_map.to_q())
    }

    pub fn determinant(&self) -> Int {
        self.lattice_map.det()
    }

    /// `ρ*_m(M) S = S ρ_m(M)`, exactly.
    pub fn intertwines(&self, g: &SL2Mat) -> bool {
        let ring = self.ring();
        let s = self.field_matrix();
        let lhs = dual_action(&ring, g, self.m).matrix.to_q().mul(&s);
        let rhs = s.mul(&rho_action(&ring, g, self.m).matrix.to_q());
        lhs == rhs
    }

    /// Gram matrix of `½ Tr_{F/Q} ⟨x, y⟩` between the basis of `Λ_m` and that of `δ⁻¹ Λ_m`.
    ///
    /// The target is the exact `Z`-dual of `Λ_m` exactly when this is an integer matrix of determinant ±1.
    pub fn dual_gram(&self) -> QMat {
        let ring = self.ring();
        let lat = SymPowerLattice::new(&ring, self.m);
        let inv = ring.field_inv(&self.delta).unwrap();
        let n = lat.rank();
        let mut g = QMat::zeros(n, n);
        for r in 0..n {
            let (j, k) = lat.label(r);
            let x = lat.basis_vector(j, k);
            for c in 0..n {
                let (j2, k2) = lat.label(c);
                let y: FVec = lat
                    .basis_vector(j2, k2)
                    .iter()
                    .map(|e| ring.field_mul(e, &inv))
                    .collect();
                let p = pairing(&ring, &x, &y).unwrap();
                // Re(a + bω) = ½ Tr.
                g.set(r, c, &p.a + &p.b * ring.re_omega());
            }
        }
        g
    }

    pub fn target_is_dual_lattice(&self) -> bool {
        let g = self.dual_gram();
        g.to_z().is_some() && {
            let d = g.det();
            d == BigRational::one() || d == -BigRational::one()
        }
    }
}

/// `ρ_m(M⁻¹)ᵀ` conjugated by the diagonal weights `w_j`: the adjoint inverse of `ρ_m(M)`
/// for the pairing `Σ w_j x_j y_j`, as an `F`-matrix in rational form.
pub fn adjoint_inverse(ring: &QuadRing, g: &SL2Mat, m: usize, weights: &[BigRational]) -> QMat {
    let r = super::action::rho_o(ring, &g.inverse(), m);
    // Entry (j, k) of W⁻¹ Rᵀ W is R[k][j]·w_k/w_j.
    let cols: Vec<FVec> = (0..=m)
        .map(|k| {
            (0..=m)
                .map(|j| r[k][j].to_rat().scale(&(&weights[k] / &weights[j])))
                .collect()
        })
        .collect();
    f_matrix_to_q(ring, &cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bianchi::builtin_presentation;

    #[test]
    fn pairing_examples() {
        let r = QuadRing::new(1).unwrap();
        let lat = SymPowerLattice::new(&r, 2);
        let v0 = lat.basis_vector(0, 0);
        let v1 = lat.basis_vector(1, 0);
        assert_eq!(pairing(&r, &v0, &v0).unwrap(), QuadRat::one());
        assert!(pairing(&r, &v0, &v1).unwrap().is_zero());
        let iv2 = lat.basis_vector(2, 1);
        assert_eq!(
            pairing(&r, &iv2, &lat.basis_vector(2, 0)).unwrap(),
            QuadRat::from_ints(0, 1)
        );
        assert!(pairing(&r, &v0, &[QuadRat::one()]).is_err());
    }

    #[test]
    fn weight_zero_is_multiplication_by_inverse_delta() {
        let r = QuadRing::new(1).unwrap();
        let s = self_duality(&r, 0);
        // 1/δ = −i on O_1.
        let minus_i = SymPowerLattice::new(&r, 0).scalar_q(&QuadRat::from_ints(0, -1));
        assert_eq!(s.field_matrix(), minus_i);
        assert!(s.determinant().abs().is_one());
    }

    #[test]
    fn self_duality_all_generators() {
        for d in [1, 2, 3] {
            let r = QuadRing::new(d).unwrap();
            let p = builtin_presentation(d).unwrap();
            for m in 0..=6 {
                let s = self_duality(&r, m);
                assert!(s.determinant().abs().is_one());
                assert!(s.target_is_dual_lattice(), "D={d} m={m}");
                for g in &p.matrices {
                    assert!(s.intertwines(g));
                }
            }
        }
    }

    #[test]
    fn transpose_inverse_identity() {
        let r = QuadRing::new(1).unwrap();
        let g = SL2Mat::from_ints([(2, 1), (1, 1), (1, 0), (1, 0)]);
        for m in 0..=4usize {
            let dual = dual_action(&r, &g, m).matrix.to_q();
            let ones = vec![BigRational::one(); m + 1];
            let binom: Vec<BigRational> = (0..=m)
                .map(|j| BigRational::new(1.into(), binomial(m as u32, j as u32).to_bigint()))
                .collect();
            // Orthonormal pairing: holds only in weights 0 and 1.
            assert_eq!(dual == adjoint_inverse(&r, &g, m, &ones), m <= 1, "m={m}");
            assert_eq!(dual, adjoint_inverse(&r, &g, m, &binom), "m={m}");
        }
    }
}
