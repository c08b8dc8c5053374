//! Exact arithmetic in imaginary quadratic orders.

mod ideal;
mod residue;
mod ring;
mod surd;

pub(crate) use ideal::hnf2;
pub use ideal::{congruence_index, format_element, parse_element, Ideal};
pub use residue::{count_sl2_by_enumeration, Residue, ResidueRing};
pub use ring::{is_squarefree, OmegaKind, QuadInt, QuadRat, QuadRing};
pub use surd::{ln_bigint, ln_rational, rational_to_f64, SurdValue};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

/// The element `δ_D` together with its imaginary part.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaD {
    /// `δ_D` in the basis `{1, ω}`.
    pub value: QuadRat,
    /// `Im δ_D = |δ_D|`, exact.
    pub im_part: SurdValue,
}

/// `δ_D = √−D` when `D ≡ 1, 2 (mod 4)` and `√−D/2` when `D ≡ 3 (mod 4)`.
pub fn delta_d(ring: &QuadRing) -> DeltaD {
    let s = ring.sqrt_minus_d().to_rat();
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let (value, im) = match ring.omega_kind() {
        OmegaKind::SqrtMinusD => (s, BigRational::from(BigInt::from(1))),
        OmegaKind::HalfInteger => (s.scale(&half), half),
    };
    DeltaD {
        value,
        im_part: SurdValue::new(im, 1, ring.d()),
    }
}

/// Whether `Γ(𝔞)` passes the torsion-freeness gate: `𝔞 ≠ (1)` and `𝔞` divides none of 2, 3, 4.
pub fn is_torsion_free_level(a: &Ideal) -> bool {
    !a.is_unit() && [2, 3, 4].iter().all(|&n| !a.divides_integer(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_values() {
        let r1 = QuadRing::new(1).unwrap();
        let d1 = delta_d(&r1);
        assert_eq!(d1.value, QuadRat::from_ints(0, 1));
        assert_eq!(d1.im_part, SurdValue::one(1));
        let r3 = QuadRing::new(3).unwrap();
        let d3 = delta_d(&r3);
        let (re, im) = r3.field_to_complex(&d3.value);
        assert!(re.abs() < 1e-12 && (im - 3f64.sqrt() / 2.0).abs() < 1e-12);
        assert!((d3.im_part.to_f64() - 3f64.sqrt() / 2.0).abs() < 1e-12);
        let r2 = QuadRing::new(2).unwrap();
        assert_eq!(delta_d(&r2).value, QuadRat::from_ints(0, 1));
        // |δ|² equals Im(δ)² and the area of O_D.
        for r in [r1, r2, r3, QuadRing::new(7).unwrap()] {
            let d = delta_d(&r);
            assert_eq!(r.field_norm(&d.value), d.im_part.square());
        }
    }

    #[test]
    fn torsion_gate() {
        let r1 = QuadRing::new(1).unwrap();
        let bad = ["1", "1+i", "2", "2+2i", "3"];
        for s in bad {
            assert!(
                !is_torsion_free_level(&Ideal::parse(&r1, s).unwrap()),
                "{s}"
            );
        }
        for s in ["2+i", "1+3i", "3+2i", "4"] {
            let id = Ideal::parse(&r1, s).unwrap();
            if s == "4" {
                assert!(!is_torsion_free_level(&id));
            } else {
                assert!(is_torsion_free_level(&id), "{s}");
            }
        }
    }
}
