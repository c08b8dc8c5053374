use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::int::binomial;
use crate::quad_arith::QuadRat;
use crate::quad_arith::QuadRing;
use crate::sym_modules::FVec;

fn rat(n: BigInt, d: BigInt) -> BigRational {
    BigRational::new(n, d)
}

fn powers(ring: &QuadRing, g: &QuadRat, top: usize) -> Vec<QuadRat> {
    let mut out = vec![QuadRat::one()];
    for k in 0..top {
        out.push(ring.field_mul(&out[k], g));
    }
    out
}

/// Periods of the invariant form `v_m ⊗ dz̄` along `γ`: `γ̄ v_m`.
pub fn period_integral_plus(ring: &QuadRing, m: usize, gamma: &QuadRat) -> FVec {
    let mut v = vec![QuadRat::zero(); m + 1];
    v[m] = ring.field_conj(gamma);
    v
}

/// Periods of `v_0 ⊗ dz` along `γ`: `Σ_k C(m,k) γ^{k+1}/(k+1) v_k`.
pub fn period_integral_minus(ring: &QuadRing, m: usize, gamma: &QuadRat) -> FVec {
    let p = powers(ring, gamma, m + 1);
    (0..=m)
        .map(|k| {
            let c = rat(
                binomial(m as u32, k as u32).to_bigint(),
                BigInt::from(k + 1),
            );
            p[k + 1].scale(&c)
        })
        .collect()
}

/// Dual-side plus periods: `v_0^* ⊗ dz̄` gives `γ̄ v_0^*`.
pub fn dual_period_plus(ring: &QuadRing, m: usize, gamma: &QuadRat) -> FVec {
    let mut v = vec![QuadRat::zero(); m + 1];
    v[0] = ring.field_conj(gamma);
    v
}

/// Dual-side minus periods: `v_m^* ⊗ dz` gives `Σ_k (−1)^k γ^{k+1}/(k+1) v_{m−k}^*`,
/// coordinates in the basis dual to `v_0, …, v_m`.
pub fn dual_period_minus(ring: &QuadRing, m: usize, gamma: &QuadRat) -> FVec {
    let p = powers(ring, gamma, m + 1);
    let mut v = vec![QuadRat::zero(); m + 1];
    for k in 0..=m {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        v[m - k] = p[k + 1].scale(&rat(BigInt::from(sign), BigInt::from(k + 1)));
    }
    v
}

/// Least `w ≥ 1` with `w·γ̄_i ∈ O_D` for both generators.
pub fn cusp_width_factor(ring: &QuadRing, gammas: &[QuadRat; 2]) -> BigInt {
    gammas
        .iter()
        .map(|g| ring.field_conj(g).denominator())
        .fold(BigInt::one(), |acc, d| acc.lcm(&d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bianchi::SL2Mat;
    use crate::quad_arith::QuadInt;
    use crate::sym_modules::rho_o;

    fn q(a: i64, b: i64) -> QuadRat {
        QuadRat::from_ints(a, b)
    }

    fn half(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn spec_examples() {
        let o1 = QuadRing::new(1).unwrap();
        assert_eq!(period_integral_plus(&o1, 0, &q(1, 0)), vec![q(1, 0)]);
        let v = period_integral_plus(&o1, 3, &q(0, 1));
        assert_eq!(v[3], q(0, -1));
        assert!(v[..3].iter().all(QuadRat::is_zero));
        assert_eq!(period_integral_plus(&o1, 1, &q(1, 1))[1], q(1, -1));

        assert_eq!(period_integral_minus(&o1, 0, &q(2, 3)), vec![q(2, 3)]);
        assert_eq!(
            period_integral_minus(&o1, 1, &q(1, 0)),
            vec![q(1, 0), QuadRat::from_rational(half(1, 2))]
        );
        assert_eq!(
            period_integral_minus(&o1, 2, &q(1, 0)),
            vec![q(1, 0), q(1, 0), QuadRat::from_rational(half(1, 3))]
        );
    }

    fn apply(ring: &QuadRing, r: &[Vec<QuadInt>], v: &FVec) -> FVec {
        (0..r.len())
            .map(|i| {
                r[i].iter().zip(v).fold(QuadRat::zero(), |acc, (a, x)| {
                    &acc + &ring.field_mul(&a.to_rat(), x)
                })
            })
            .collect()
    }

    fn add(x: &FVec, y: &FVec) -> FVec {
        x.iter().zip(y).map(|(a, b)| a + b).collect()
    }

    fn dual_unipotent(ring: &QuadRing, g: &QuadInt, m: usize) -> Vec<Vec<QuadInt>> {
        // ρ(u)^{-T} = ρ(u^{-1})^T.
        let r = rho_o(ring, &SL2Mat::translation(-g), m);
        (0..=m)
            .map(|i| (0..=m).map(|j| r[j][i].clone()).collect())
            .collect()
    }

    /// `c(γ + γ') = c(γ) + U_γ c(γ')` on both sides.
    #[test]
    fn periods_are_cocycles() {
        for d in [1, 2, 3, 7] {
            let ring = QuadRing::new(d).unwrap();
            let pairs = [
                (QuadInt::new(1, 0), QuadInt::new(0, 1)),
                (QuadInt::new(2, -1), QuadInt::new(1, 3)),
            ];
            for m in 0..5 {
                for (g, h) in &pairs {
                    let sum = (g + h).to_rat();
                    let ug = rho_o(&ring, &SL2Mat::translation(g.clone()), m);
                    let dg = dual_unipotent(&ring, g, m);
                    let (gr, hr) = (g.to_rat(), h.to_rat());
                    for (f, u) in [
                        (
                            period_integral_plus as fn(&QuadRing, usize, &QuadRat) -> FVec,
                            &ug,
                        ),
                        (period_integral_minus, &ug),
                        (dual_period_plus, &dg),
                        (dual_period_minus, &dg),
                    ] {
                        let lhs = f(&ring, m, &sum);
                        let rhs = add(&f(&ring, m, &gr), &apply(&ring, u, &f(&ring, m, &hr)));
                        assert_eq!(lhs, rhs, "D={d} m={m}");
                    }
                }
            }
        }
    }

    #[test]
    fn width_factor() {
        let o3 = QuadRing::new(3).unwrap();
        assert_eq!(cusp_width_factor(&o3, &[q(1, 0), q(0, 1)]), BigInt::one());
        let half_basis = [
            QuadRat::from_rational(half(1, 2)),
            QuadRat::new(half(0, 1), half(1, 3)),
        ];
        assert_eq!(cusp_width_factor(&o3, &half_basis), BigInt::from(6));
    }
}
