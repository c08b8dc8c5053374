use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::quad_arith::{Ideal, QuadInt, QuadRat, QuadRing, SurdValue};

/// A rank-2 lattice in `C`, with basis in `F = Q(√−D)`.
#[derive(Clone, Debug)]
pub struct PlaneLattice {
    ring: QuadRing,
    basis: [QuadRat; 2],
}

fn rat(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

impl PlaneLattice {
    pub fn new(ring: &QuadRing, basis: [QuadRat; 2]) -> Result<Self> {
        let l = PlaneLattice { ring: *ring, basis };
        if l.coord_det().is_zero() {
            return Err(Error::Degenerate(
                "lattice basis is linearly dependent".into(),
            ));
        }
        Ok(l)
    }

    /// The lattice with basis `{a, b + cω}`.
    pub fn from_hnf(ring: &QuadRing, a: i64, b: i64, c: i64) -> Result<Self> {
        PlaneLattice::new(ring, [QuadRat::from_ints(a, 0), QuadRat::from_ints(b, c)])
    }

    pub fn from_ideal(id: &Ideal) -> Self {
        let (a, b, c) = id.hnf_triple();
        PlaneLattice::from_hnf(id.ring(), a, b, c).unwrap()
    }

    pub fn ring_of_integers(ring: &QuadRing) -> Self {
        PlaneLattice::from_hnf(ring, 1, 0, 1).unwrap()
    }

    pub fn ring(&self) -> &QuadRing {
        &self.ring
    }

    pub fn basis(&self) -> &[QuadRat; 2] {
        &self.basis
    }

    /// The basis as ring elements, when the lattice lies in `O_D`.
    pub fn integral_basis(&self) -> Option<[QuadInt; 2]> {
        Some([self.basis[0].to_quad_int()?, self.basis[1].to_quad_int()?])
    }

    /// Determinant of the basis in `{1, ω}` coordinates.
    pub fn coord_det(&self) -> BigRational {
        let [x, y] = &self.basis;
        &x.a * &y.b - &x.b * &y.a
    }

    /// Area of a fundamental parallelogram.
    pub fn covolume(&self) -> SurdValue {
        SurdValue::new(
            self.coord_det().abs() * self.ring.im_omega_rational(),
            1,
            self.ring.d(),
        )
    }

    pub fn scale(&self, k: &QuadRat) -> PlaneLattice {
        let r = &self.ring;
        PlaneLattice {
            ring: *r,
            basis: [
                r.field_mul(k, &self.basis[0]),
                r.field_mul(k, &self.basis[1]),
            ],
        }
    }

    /// Applies `(v0, v1) ↦ (m00 v0 + m01 v1, m10 v0 + m11 v1)`.
    pub fn change_basis(&self, m: [[i64; 2]; 2]) -> Result<PlaneLattice> {
        let [x, y] = &self.basis;
        let comb = |p: i64, q: i64| &x.scale(&rat(p)) + &y.scale(&rat(q));
        PlaneLattice::new(&self.ring, [comb(m[0][0], m[0][1]), comb(m[1][0], m[1][1])])
    }

    /// Coordinates of `v` in the lattice basis.
    pub fn coordinates(&self, v: &QuadRat) -> [BigRational; 2] {
        let [x, y] = &self.basis;
        let det = self.coord_det();
        [
            (&v.a * &y.b - &v.b * &y.a) / &det,
            (&x.a * &v.b - &x.b * &v.a) / &det,
        ]
    }

    pub fn contains(&self, v: &QuadRat) -> bool {
        self.coordinates(v).iter().all(|c| c.is_integer())
    }

    pub fn is_sublattice_of(&self, o: &PlaneLattice) -> bool {
        self.basis.iter().all(|v| o.contains(v))
    }

    pub fn same_lattice(&self, o: &PlaneLattice) -> bool {
        self.is_sublattice_of(o) && o.is_sublattice_of(self)
    }

    /// `[o : self]` for a sublattice.
    pub fn index_in(&self, o: &PlaneLattice) -> Option<BigInt> {
        if !self.is_sublattice_of(o) {
            return None;
        }
        Some((self.coord_det() / o.coord_det()).abs().to_integer())
    }
}

impl PartialEq for PlaneLattice {
    fn eq(&self, o: &Self) -> bool {
        self.ring == o.ring && self.same_lattice(o)
    }
}

impl Serialize for PlaneLattice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.basis.iter().map(|x| x.to_string()).collect();
        strs.serialize(s)
    }
}

/// The shape of a lattice after rescaling to unit covolume.
#[derive(Clone, Debug, Serialize)]
pub struct LatticeShape {
    /// `τ = v_1/v_0` for a reduced basis, with `|τ| ≥ 1`, `|Re τ| ≤ 1/2`.
    pub tau: (f64, f64),
    pub covolume_before_rescale: f64,
    /// `τ` exactly, in `F`.
    #[serde(skip)]
    pub tau_exact: QuadRat,
}

impl LatticeShape {
    pub fn abs_tau(&self) -> f64 {
        self.tau.0.hypot(self.tau.1)
    }
}

/// Gauss-reduced shape, computed exactly in `F`.
pub fn unimodular_shape(l: &PlaneLattice) -> Result<LatticeShape> {
    let r = &l.ring;
    if l.coord_det().is_zero() {
        return Err(Error::Degenerate(
            "lattice basis is linearly dependent".into(),
        ));
    }
    let norm = |x: &QuadRat| r.field_norm(x);
    let [mut v0, mut v1] = l.basis.clone();
    loop {
        if norm(&v1) < norm(&v0) {
            std::mem::swap(&mut v0, &mut v1);
        }
        let mu = r.field_re_inner(&v1, &v0) / norm(&v0);
        let k = (mu + BigRational::new(1.into(), 2.into())).floor();
        if k.is_zero() {
            break;
        }
        v1 = &v1 - &v0.scale(&k);
        if norm(&v1) >= norm(&v0) {
            break;
        }
    }
    let orient = |v0: &QuadRat, v1: &QuadRat| r.field_mul(v1, &r.field_conj(v0)).b.signum();
    if orient(&v0, &v1).is_negative() {
        v1 = -&v1;
    }
    // Boundary of the fundamental domain: Re τ = −1/2, or |τ| = 1 with Re τ < 0.
    let re2 = |v0: &QuadRat, v1: &QuadRat| r.field_re_inner(v1, v0) * rat(2);
    if re2(&v0, &v1) == -norm(&v0) {
        v1 = &v1 + &v0;
    }
    if norm(&v1) == norm(&v0) && re2(&v0, &v1).is_negative() {
        let t = v0.clone();
        v0 = v1;
        v1 = -&t;
    }
    let tau = r.field_mul(&v1, &r.field_inv(&v0).unwrap());
    let (re, im) = r.field_to_complex(&tau);
    Ok(LatticeShape {
        tau: (re, im),
        covolume_before_rescale: l.covolume().to_f64(),
        tau_exact: tau,
    })
}

/// Sanity value for `covolume_before_rescale`.
#[cfg(test)]
fn covolume_f64(l: &PlaneLattice) -> f64 {
    crate::quad_arith::rational_to_f64(&l.coord_det().abs()) * l.ring.omega_complex().1
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn standard_shapes() {
        let r1 = QuadRing::new(1).unwrap();
        let s = unimodular_shape(&PlaneLattice::ring_of_integers(&r1)).unwrap();
        assert!((s.tau.0).abs() < 1e-15 && (s.tau.1 - 1.0).abs() < 1e-15);
        let two = PlaneLattice::from_hnf(&r1, 2, 0, 2).unwrap();
        let s2 = unimodular_shape(&two).unwrap();
        assert_eq!(s2.tau_exact, s.tau_exact);
        assert!((s2.covolume_before_rescale - 4.0).abs() < 1e-12);
        let r3 = QuadRing::new(3).unwrap();
        let h = unimodular_shape(&PlaneLattice::ring_of_integers(&r3)).unwrap();
        assert!((h.tau.0 - 0.5).abs() < 1e-15 && (h.tau.1 - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!(
            (h.covolume_before_rescale - covolume_f64(&PlaneLattice::ring_of_integers(&r3))).abs()
                < 1e-15
        );
    }

    fn arb_unimodular() -> impl Strategy<Value = [[i64; 2]; 2]> {
        prop::collection::vec((0..4usize, -3i64..=3), 1..6).prop_map(|ops| {
            let mut m = [[1i64, 0], [0, 1]];
            for (op, k) in ops {
                m = match op {
                    0 => [[m[0][0] + k * m[1][0], m[0][1] + k * m[1][1]], m[1]],
                    1 => [m[0], [m[1][0] + k * m[0][0], m[1][1] + k * m[0][1]]],
                    2 => [m[1], m[0]],
                    _ => [[-m[0][0], -m[0][1]], m[1]],
                };
            }
            m
        })
    }

    proptest! {
        #[test]
        fn shape_invariance(d in prop::sample::select(vec![1i64, 2, 3, 7, 11]),
                            a in 1i64..7, b in 0i64..7, c in 1i64..7,
                            m in arb_unimodular(),
                            k in (-4i64..5, -4i64..5, 1i64..4)) {
            let r = QuadRing::new(d).unwrap();
            let l = PlaneLattice::from_hnf(&r, a, b % a, c).unwrap();
            let s = unimodular_shape(&l).unwrap();
            let (re, im) = s.tau;
            prop_assert!(re.abs() <= 0.5 + 1e-12 && re.hypot(im) >= 1.0 - 1e-12 && im > 0.0);
            let l2 = l.change_basis(m).unwrap();
            prop_assert!(l2 == l);
            prop_assert_eq!(&unimodular_shape(&l2).unwrap().tau_exact, &s.tau_exact);
            let (x, y, den) = k;
            prop_assume!(x != 0 || y != 0);
            let scale = QuadRat::from_ints(x, y).scale(&BigRational::new(1.into(), den.into()));
            prop_assert_eq!(&unimodular_shape(&l.scale(&scale)).unwrap().tau_exact, &s.tau_exact);
        }
    }
}
