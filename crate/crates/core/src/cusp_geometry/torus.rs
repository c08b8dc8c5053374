use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::lattice::HarmonicLattice;
use super::periods::{
    cusp_width_factor, dual_period_minus, dual_period_plus, period_integral_minus,
    period_integral_plus,
};
use crate::bianchi::{PlaneLattice, SL2Mat};
use crate::error::{Error, Result};
use crate::int::Int;
use crate::integer_homology::{integer_kernel, snf, IntMatrix};
use crate::linalg::{QMat, ZMat};
use crate::quad_arith::{delta_d, QuadInt, QuadRat, QuadRing, SurdValue};
use crate::sym_modules::{o_matrix_to_z, rho_o, FVec, SymPowerLattice};

/// Which factor of `Ē = E ⊕ E*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Coefficients {
    /// `Λ_m` with `ρ_m`.
    Standard,
    /// `Λ_m^* = δ⁻¹ ⊕ O_D v_j^*` with `ρ_m(γ)^{−T}`, stored as `δ·Λ_m^*`.
    Dual,
}

impl Coefficients {
    pub const BOTH: [Coefficients; 2] = [Coefficients::Standard, Coefficients::Dual];
}

/// The flat bundle `E_m` over the torus `Λ_P \ C`.
#[derive(Clone, Debug)]
pub struct TorusBundle {
    ring: QuadRing,
    lattice: PlaneLattice,
    gammas: [QuadInt; 2],
    m: usize,
    standard: [ZMat; 2],
    dual: [ZMat; 2],
}

fn transpose_o(r: &[Vec<QuadInt>]) -> Vec<Vec<QuadInt>> {
    (0..r.len())
        .map(|i| r.iter().map(|row| row[i].clone()).collect())
        .collect()
}

impl TorusBundle {
    /// The basis of `lattice` must lie in `O_D` so that the unipotents preserve `Λ_m`.
    pub fn new(lattice: &PlaneLattice, m: usize) -> Result<Self> {
        let ring = *lattice.ring();
        let gammas = lattice
            .integral_basis()
            .ok_or_else(|| Error::Degenerate("cusp lattice is not contained in O_D".into()))?;
        let unipotent = |g: &QuadInt| SL2Mat::translation(g.clone());
        let standard =
            [0, 1].map(|i| o_matrix_to_z(&ring, &rho_o(&ring, &unipotent(&gammas[i]), m)));
        let dual = [0, 1].map(|i| {
            let inv = rho_o(&ring, &unipotent(&gammas[i]).inverse(), m);
            o_matrix_to_z(&ring, &transpose_o(&inv))
        });
        Ok(TorusBundle {
            ring,
            lattice: lattice.clone(),
            gammas,
            m,
            standard,
            dual,
        })
    }

    pub fn ring(&self) -> &QuadRing {
        &self.ring
    }

    pub fn lattice(&self) -> &PlaneLattice {
        &self.lattice
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn gammas(&self) -> &[QuadInt; 2] {
        &self.gammas
    }

    /// `vol(T_P)`.
    pub fn volume(&self) -> SurdValue {
        self.lattice.covolume()
    }

    pub fn actions(&self, side: Coefficients) -> &[ZMat; 2] {
        match side {
            Coefficients::Standard => &self.standard,
            Coefficients::Dual => &self.dual,
        }
    }

    pub fn width_factor(&self) -> BigInt {
        cusp_width_factor(&self.ring, &self.gammas.clone().map(|g| g.to_rat()))
    }

    pub fn with_weight(&self, m: usize) -> Result<TorusBundle> {
        TorusBundle::new(&self.lattice, m)
    }

    /// The bundle over the cover `Λ' \ C`, for a sublattice `Λ' ⊆ Λ_P`.
    pub fn cover(&self, sub: &PlaneLattice) -> Result<TorusBundle> {
        if !sub.is_sublattice_of(&self.lattice) {
            return Err(Error::Degenerate(
                "cover lattice is not a sublattice".into(),
            ));
        }
        TorusBundle::new(sub, self.m)
    }

    /// The cover by `k Λ_P`, of index `k²`.
    pub fn scaled_cover(&self, k: i64) -> Result<TorusBundle> {
        self.cover(&self.lattice.scale(&QuadRat::from_ints(k, 0)))
    }

    /// `[Γ_P : Γ_{P,i}]` for a cover built from this bundle.
    pub fn cover_index(&self, cover: &TorusBundle) -> Result<BigInt> {
        cover
            .lattice
            .index_in(&self.lattice)
            .ok_or_else(|| Error::Degenerate("not a cover of this torus".into()))
    }

    /// `1` on the standard side, `1/δ_D` on the dual side.
    pub(crate) fn twist(&self, side: Coefficients) -> QuadRat {
        match side {
            Coefficients::Standard => QuadRat::one(),
            Coefficients::Dual => self
                .ring
                .field_inv(&delta_d(&self.ring).value)
                .expect("δ ≠ 0"),
        }
    }

    pub(crate) fn plus_periods(&self, side: Coefficients, i: usize) -> FVec {
        let g = self.gammas[i].to_rat();
        match side {
            Coefficients::Standard => period_integral_plus(&self.ring, self.m, &g),
            Coefficients::Dual => dual_period_plus(&self.ring, self.m, &g),
        }
    }

    pub(crate) fn minus_periods(&self, side: Coefficients, i: usize) -> FVec {
        let g = self.gammas[i].to_rat();
        match side {
            Coefficients::Standard => period_integral_minus(&self.ring, self.m, &g),
            Coefficients::Dual => dual_period_minus(&self.ring, self.m, &g),
        }
    }

    /// Coordinate of `v_m` (standard) or `v_0^*` (dual): the invariant line.
    pub(crate) fn invariant_index(&self, side: Coefficients) -> usize {
        match side {
            Coefficients::Standard => self.m,
            Coefficients::Dual => 0,
        }
    }

    /// Coordinate of `v_0` (standard) or `v_m^*` (dual): the coinvariant line.
    pub(crate) fn coinvariant_index(&self, side: Coefficients) -> usize {
        self.m - self.invariant_index(side)
    }
}

/// `0 → M → M² → M → 0` for two commuting automorphisms of `M = Z^n`.
///
/// `d0 v = ((U1 − 1)v, (U2 − 1)v)` and `d1 (c1, c2) = (U1 − 1)c2 − (U2 − 1)c1`.
#[derive(Clone, Debug)]
pub struct KoszulComplex {
    pub d0: ZMat,
    pub d1: ZMat,
}

pub fn koszul_complex(u: &[ZMat; 2]) -> Result<KoszulComplex> {
    if u[0].mul(&u[1]) != u[1].mul(&u[0]) {
        return Err(Error::Degenerate("the two actions do not commute".into()));
    }
    let n = u[0].rows();
    let a = u[0].sub(&ZMat::identity(n));
    let b = u[1].sub(&ZMat::identity(n));
    Ok(KoszulComplex {
        d0: ZMat::vcat(&[&a, &b]),
        d1: ZMat::hcat(&[&b.neg(), &a]),
    })
}

impl KoszulComplex {
    pub fn ranks(&self) -> [usize; 3] {
        [self.d0.cols(), self.d0.rows(), self.d1.rows()]
    }
}

/// Integral cohomology of the torus, with each free part placed in orthonormal harmonic
/// coordinates.
///
/// `H^0` sits in the invariant line with norm `vol(T)`, `H^1` in the span of the plus and
/// minus harmonic forms with norm `2 vol(T)`, `H^2` in the coinvariant line with norm `1/vol(T)`.
#[derive(Clone, Debug, Serialize)]
pub struct TorusCohomology {
    pub side: Coefficients,
    pub m: usize,
    pub free_ranks: [usize; 3],
    pub torsion: [Vec<Int>; 3],
    pub lattices: [HarmonicLattice; 3],
}

impl TorusCohomology {
    /// Ranks over `C`: half the `Z`-ranks, since `Λ_m` is an `O_D`-module.
    pub fn complex_ranks(&self) -> [usize; 3] {
        self.free_ranks.map(|r| r / 2)
    }

    pub fn covolume(&self, q: usize) -> SurdValue {
        self.lattices[q].covolume()
    }

    /// `L_+` (coordinate 0) or `L_−` (coordinate 1) inside `H^1`.
    pub fn pm_lattice(&self, plus: bool) -> Result<HarmonicLattice> {
        self.lattices[1].restrict_to_coordinate(if plus { 0 } else { 1 })
    }
}

fn fvec_of(ring: &QuadRing, m: usize, z: &[Int]) -> FVec {
    let q: Vec<BigRational> = z.iter().map(|x| BigRational::from(x.to_bigint())).collect();
    SymPowerLattice::new(ring, m).from_q(&q)
}

fn q_column(v: &[FVec]) -> Vec<BigRational> {
    v.iter()
        .flatten()
        .flat_map(|x| [x.a.clone(), x.b.clone()])
        .collect()
}

/// Solves `c = a·P + b·M + δx` over `F`; returns the harmonic coordinates `(a, b)`.
pub(crate) struct HarmonicSolver {
    system: QMat,
}

impl HarmonicSolver {
    pub(crate) fn new(t: &TorusBundle, side: Coefficients) -> Result<Self> {
        let ring = &t.ring;
        let omega = QuadRat::from_ints(0, 1);
        let times =
            |v: &FVec, s: &QuadRat| -> FVec { v.iter().map(|x| ring.field_mul(x, s)).collect() };
        let p: Vec<FVec> = (0..2).map(|i| t.plus_periods(side, i)).collect();
        let mv: Vec<FVec> = (0..2).map(|i| t.minus_periods(side, i)).collect();
        let mut cols = vec![
            q_column(&p),
            q_column(&p.iter().map(|v| times(v, &omega)).collect::<Vec<_>>()),
            q_column(&mv),
            q_column(&mv.iter().map(|v| times(v, &omega)).collect::<Vec<_>>()),
        ];
        let k = koszul_complex(t.actions(side))?;
        cols.extend((0..k.d0.cols()).map(|j| {
            k.d0.column(j)
                .iter()
                .map(|x| BigRational::from(x.to_bigint()))
                .collect()
        }));
        let rows = k.d0.rows();
        Ok(HarmonicSolver {
            system: QMat::from_columns(&cols, rows),
        })
    }

    pub(crate) fn coordinates(&self, cocycle: &[BigRational]) -> Result<[QuadRat; 2]> {
        let x = self
            .system
            .solve(cocycle)
            .ok_or_else(|| Error::Degenerate("cochain is not a cocycle".into()))?;
        Ok([
            QuadRat::new(x[0].clone(), x[1].clone()),
            QuadRat::new(x[2].clone(), x[3].clone()),
        ])
    }
}

/// Harmonic coordinates `(a, b)` of an integral 1-cocycle on the `(v_m ⊗ dz̄, v_0 ⊗ dz)` basis
/// (dual side: `(v_0^* ⊗ dz̄, v_m^* ⊗ dz)`), matched by periods.
pub fn harmonic_coordinates(
    t: &TorusBundle,
    side: Coefficients,
    cocycle: &[Int],
) -> Result<[QuadRat; 2]> {
    let q: Vec<BigRational> = cocycle
        .iter()
        .map(|x| BigRational::from(x.to_bigint()))
        .collect();
    let [a, b] = HarmonicSolver::new(t, side)?.coordinates(&q)?;
    let tw = t.twist(side);
    Ok([t.ring.field_mul(&a, &tw), t.ring.field_mul(&b, &tw)])
}

pub fn torus_cohomology(t: &TorusBundle, side: Coefficients) -> Result<TorusCohomology> {
    let ring = &t.ring;
    let m = t.m;
    let n = 2 * (m + 1);
    let k = koszul_complex(t.actions(side))?;
    let vol = t.volume();
    let tw = t.twist(side);

    let h0_gens: Vec<FVec> = integer_kernel(&k.d0)
        .iter()
        .map(|z| {
            let v = fvec_of(ring, m, z);
            vec![ring.field_mul(&v[t.invariant_index(side)], &tw)]
        })
        .collect();
    let h0 = HarmonicLattice::from_generators(ring, 1, vol.clone(), &h0_gens)?;

    let solver = HarmonicSolver::new(t, side)?;
    let mut h1_gens = Vec::new();
    for z in integer_kernel(&k.d1) {
        let q: Vec<BigRational> = z.iter().map(|x| BigRational::from(x.to_bigint())).collect();
        let [a, b] = solver.coordinates(&q)?;
        h1_gens.push(vec![ring.field_mul(&a, &tw), ring.field_mul(&b, &tw)]);
    }
    let two_vol = vol.scale(&BigRational::from(BigInt::from(2)));
    let h1 = HarmonicLattice::from_generators(ring, 2, two_vol, &h1_gens)?;

    let h2_gens: Vec<FVec> = (0..n)
        .map(|i| {
            let mut e = vec![Int::ZERO; n];
            e[i] = Int::ONE;
            let v = fvec_of(ring, m, &e);
            vec![ring.field_mul(&v[t.coinvariant_index(side)], &tw)]
        })
        .collect();
    let h2 = HarmonicLattice::from_generators(ring, 1, vol.inv(), &h2_gens)?;

    let s0 = snf(&IntMatrix::from_dense(&k.d0));
    let s1 = snf(&IntMatrix::from_dense(&k.d1));
    Ok(TorusCohomology {
        side,
        m,
        free_ranks: [n - s0.rank(), 2 * n - s0.rank() - s1.rank(), n - s1.rank()],
        torsion: [Vec::new(), s0.torsion, s1.torsion],
        lattices: [h0, h1, h2],
    })
}

/// `H^q` for both factors of `Ē`.
pub fn torus_cohomology_full(t: &TorusBundle) -> Result<[TorusCohomology; 2]> {
    Ok([
        torus_cohomology(t, Coefficients::Standard)?,
        torus_cohomology(t, Coefficients::Dual)?,
    ])
}

/// `vol(H^q_free(T; Ē_Z))`: the free parts of the two factors are orthogonal.
pub fn full_covolume(h: &[TorusCohomology; 2], q: usize) -> SurdValue {
    h[0].covolume(q).mul(&h[1].covolume(q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bundle(d: i64, hnf: (i64, i64, i64), m: usize) -> TorusBundle {
        let ring = QuadRing::new(d).unwrap();
        TorusBundle::new(
            &PlaneLattice::from_hnf(&ring, hnf.0, hnf.1, hnf.2).unwrap(),
            m,
        )
        .unwrap()
    }

    #[test]
    fn rank_pattern() {
        for (d, hnf) in [
            (1, (1, 0, 1)),
            (1, (2, 1, 1)),
            (3, (1, 0, 1)),
            (2, (3, 1, 1)),
        ] {
            for m in 0..4 {
                let t = bundle(d, hnf, m);
                let k = koszul_complex(t.actions(Coefficients::Standard)).unwrap();
                assert!(k.d1.mul(&k.d0).is_zero());
                for side in Coefficients::BOTH {
                    let h = torus_cohomology(&t, side).unwrap();
                    assert_eq!(h.complex_ranks(), [1, 2, 1], "D={d} m={m}");
                    let z = |x: &ZMat| snf(&IntMatrix::from_dense(x)).rank();
                    let k = koszul_complex(t.actions(side)).unwrap();
                    let n = 2 * (m + 1);
                    assert_eq!(n - z(&k.d0), 2);
                    assert_eq!(2 * n - z(&k.d0) - z(&k.d1), 4);
                    assert_eq!(n - z(&k.d1), 2);
                }
            }
        }
    }

    #[test]
    fn noncommuting_actions_are_rejected() {
        let a = ZMat::from_rows(&[vec![1, 1], vec![0, 1]]);
        let b = ZMat::from_rows(&[vec![1, 0], vec![1, 1]]);
        assert!(koszul_complex(&[a, b]).is_err());
    }

    #[test]
    fn pure_plus_and_minus_classes() {
        let t = bundle(1, (1, 0, 1), 2);
        let ring = *t.ring();
        for side in Coefficients::BOTH {
            let to_z = |v: [FVec; 2]| -> Vec<Int> {
                let q: Vec<BigRational> = v
                    .iter()
                    .flat_map(|x| SymPowerLattice::new(&ring, 2).to_q(x))
                    .collect();
                q.iter().map(|x| Int::from(x.to_integer())).collect()
            };
            // Periods of weight 2 have denominators dividing 6.
            let six = BigRational::from(BigInt::from(6));
            let scale = |v: FVec| -> FVec { v.iter().map(|x| x.scale(&six)).collect() };
            let plus = to_z([
                scale(t.plus_periods(side, 0)),
                scale(t.plus_periods(side, 1)),
            ]);
            let [a, b] = harmonic_coordinates(&t, side, &plus).unwrap();
            assert_eq!(b, QuadRat::zero());
            assert_eq!(a, t.twist(side).scale(&six));
            let minus = to_z([
                scale(t.minus_periods(side, 0)),
                scale(t.minus_periods(side, 1)),
            ]);
            let [a, b] = harmonic_coordinates(&t, side, &minus).unwrap();
            assert_eq!(a, QuadRat::zero());
            assert_eq!(b, t.twist(side).scale(&six));
        }
    }

    #[test]
    fn cohomology_product_identities() {
        for (d, hnf) in [
            (1, (1, 0, 1)),
            (1, (2, 1, 1)),
            (3, (1, 0, 1)),
            (7, (2, 0, 1)),
        ] {
            for m in 0..4 {
                let t = bundle(d, hnf, m);
                let h = torus_cohomology_full(&t).unwrap();
                let one = SurdValue::one(d);
                assert_eq!(
                    full_covolume(&h, 0).mul(&full_covolume(&h, 2)),
                    one,
                    "D={d} m={m}"
                );
                assert_eq!(full_covolume(&h, 1), one, "D={d} m={m}");
            }
        }
    }
}
