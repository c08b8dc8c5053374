use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::bianchi::SL2Mat;
use crate::int::Int;
use crate::linalg::{QMat, ZMat};
use crate::quad_arith::{QuadInt, QuadRat, QuadRing};

/// `Λ_m` for a given ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SymPowerLattice {
    pub m: usize,
    #[serde(skip)]
    pub ring: QuadRing,
}

/// An element of `Λ_m ⊗ Q` written over `F` in the basis `v_0, …, v_m`.
pub type FVec = Vec<QuadRat>;

impl SymPowerLattice {
    pub fn new(ring: &QuadRing, m: usize) -> Self {
        SymPowerLattice { m, ring: *ring }
    }

    pub fn rank(&self) -> usize {
        2 * (self.m + 1)
    }

    /// `(j, k)` for coordinate `2j + k`.
    pub fn label(&self, idx: usize) -> (usize, usize) {
        (idx / 2, idx % 2)
    }

    /// Rational coordinates of an `F`-vector.
    pub fn to_q(&self, v: &[QuadRat]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.m + 1);
        v.iter().flat_map(|x| [x.a.clone(), x.b.clone()]).collect()
    }

    pub fn from_q(&self, z: &[BigRational]) -> FVec {
        assert_eq!(z.len(), self.rank());
        z.chunks(2)
            .map(|c| QuadRat::new(c[0].clone(), c[1].clone()))
            .collect()
    }

    pub fn basis_vector(&self, j: usize, k: usize) -> FVec {
        let mut v = vec![QuadRat::zero(); self.m + 1];
        v[j] = if k == 0 {
            QuadRat::one()
        } else {
            QuadRat::from_ints(0, 1)
        };
        v
    }

    /// `Q`-matrix of multiplication by the scalar `x ∈ F`.
    pub fn scalar_q(&self, x: &QuadRat) -> QMat {
        let b = mult_block_q(&self.ring, x);
        let mut out = QMat::zeros(self.rank(), self.rank());
        for j in 0..=self.m {
            for r in 0..2 {
                for c in 0..2 {
                    out.set(2 * j + r, 2 * j + c, b[r][c].clone());
                }
            }
        }
        out
    }
}

fn mult_block_q(ring: &QuadRing, x: &QuadRat) -> [[BigRational; 2]; 2] {
    let (p, q) = ring.omega_sq();
    let (p, q) = (
        BigRational::from_integer(p.into()),
        BigRational::from_integer(q.into()),
    );
    [[x.a.clone(), &x.b * &p], [x.b.clone(), &x.a + &x.b * &q]]
}

/// A `Z`-linear endomorphism of `Λ_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    pub m: usize,
    pub d: i64,
    pub matrix: ZMat,
}

impl ModuleMap {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "m": self.m,
            "D": self.d,
            "rows": self.matrix.rows(),
            "cols": self.matrix.cols(),
            "matrix": self.matrix.to_rows(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> crate::Result<ModuleMap> {
        let bad = |s: &str| crate::Error::Degenerate(format!("module map JSON: {s}"));
        let m = v["m"].as_u64().ok_or_else(|| bad("missing m"))? as usize;
        let d = v["D"].as_i64().ok_or_else(|| bad("missing D"))?;
        let rows: Vec<Vec<Int>> = serde_json::from_value(v["matrix"].clone())?;
        let matrix = ZMat::from_rows(&rows);
        if matrix.rows() != 2 * (m + 1) || matrix.cols() != 2 * (m + 1) {
            return Err(bad("shape does not match m"));
        }
        Ok(ModuleMap { m, d, matrix })
    }
}

fn poly_mul(ring: &QuadRing, x: &[QuadInt], y: &[QuadInt]) -> Vec<QuadInt> {
    let mut out = vec![QuadInt::zero(); x.len() + y.len() - 1];
    for (i, a) in x.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in y.iter().enumerate() {
            out[i + j] = &out[i + j] + &ring.mul(a, b);
        }
    }
    out
}

/// The `(m+1) × (m+1)` matrix over `O_D`; column `j` is the image of `v_j`.
///
/// Uses `M e1 = a e1 + c e2` and `M e2 = b e1 + d e2`.
pub fn rho_o(ring: &QuadRing, g: &SL2Mat, m: usize) -> Vec<Vec<QuadInt>> {
    // Polynomials in x = e1/e2, index = power of e1.
    let img1 = [g.c.clone(), g.a.clone()];
    let img2 = [g.d.clone(), g.b.clone()];
    let mut pow1 = vec![vec![QuadInt::one()]];
    let mut pow2 = vec![vec![QuadInt::one()]];
    for k in 0..m {
        pow1.push(poly_mul(ring, &pow1[k], &img1));
        pow2.push(poly_mul(ring, &pow2[k], &img2));
    }
    let mut r = vec![vec![QuadInt::zero(); m + 1]; m + 1];
    for j in 0..=m {
        let col = poly_mul(ring, &pow1[j], &pow2[m - j]);
        for (k, c) in col.into_iter().enumerate() {
            r[k][j] = c;
        }
    }
    r
}

/// Expands an `O_D`-matrix into its integer matrix on the `{1, ω}` coordinates.
pub fn o_matrix_to_z(ring: &QuadRing, r: &[Vec<QuadInt>]) -> ZMat {
    let (p, q) = ring.omega_sq();
    let n = r.len();
    let mut z = ZMat::zeros(2 * n, 2 * r.first().map_or(0, |x| x.len()));
    for (i, row) in r.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            z.set(2 * i, 2 * j, x.a.clone());
            z.set(2 * i, 2 * j + 1, &x.b * p);
            z.set(2 * i + 1, 2 * j, x.b.clone());
            z.set(2 * i + 1, 2 * j + 1, &x.a + &(&x.b * q));
        }
    }
    z
}

/// `ρ_m(M)` on `Λ_m`.
pub fn rho_action(ring: &QuadRing, g: &SL2Mat, m: usize) -> ModuleMap {
    ModuleMap {
        m,
        d: ring.d(),
        matrix: o_matrix_to_z(ring, &rho_o(ring, g, m)),
    }
}

/// `ρ*_m(M) = ρ_m([[d, −c], [−b, a]])`.
pub fn dual_action(ring: &QuadRing, g: &SL2Mat, m: usize) -> ModuleMap {
    let t = SL2Mat::new(g.d.clone(), -&g.c, -&g.b, g.a.clone());
    rho_action(ring, &t, m)
}

/// `ρ_m` of every generator of a presentation.
pub fn rho_of_word_table(ring: &QuadRing, mats: &[SL2Mat], m: usize) -> Vec<ZMat> {
    mats.iter().map(|g| rho_action(ring, g, m).matrix).collect()
}

/// Rational check value: `Q`-matrix of an `F`-matrix given column by column.
pub(crate) fn f_matrix_to_q(ring: &QuadRing, cols: &[FVec]) -> QMat {
    let n = cols.len();
    let mut out = QMat::zeros(2 * n, 2 * n);
    for (j, col) in cols.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            if x.a.is_zero() && x.b.is_zero() {
                continue;
            }
            let b = mult_block_q(ring, x);
            for r in 0..2 {
                for c in 0..2 {
                    out.set(2 * i + r, 2 * j + c, b[r][c].clone());
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad_arith::QuadInt;
    use proptest::prelude::*;

    fn n1() -> SL2Mat {
        SL2Mat::translation(QuadInt::one())
    }

    #[test]
    fn examples() {
        let r = QuadRing::new(1).unwrap();
        for m in 0..4 {
            assert!(rho_action(&r, &SL2Mat::identity(), m).matrix.is_identity());
            let neg = rho_action(&r, &SL2Mat::minus_identity(), m).matrix;
            let sign = if m % 2 == 0 { 1 } else { -1 };
            assert_eq!(neg, ZMat::identity(2 * (m + 1)).scale(&Int::from(sign)));
        }
        // v_0 = e2² ↦ (e1 + e2)² = v_0 + 2v_1 + v_2.
        let o = rho_o(&r, &n1(), 2);
        let col0: Vec<_> = (0..3).map(|k| o[k][0].clone()).collect();
        assert_eq!(
            col0,
            vec![QuadInt::new(1, 0), QuadInt::new(2, 0), QuadInt::new(1, 0)]
        );
        let dual = dual_action(&r, &n1(), 1);
        let lower = SL2Mat::from_ints([(1, 0), (0, 0), (-1, 0), (1, 0)]);
        assert_eq!(dual, rho_action(&r, &lower, 1));
    }

    /// Brute-force oracle: expand `(a e1 + c e2)^j (b e1 + d e2)^(m−j)` term by term.
    fn brute_rho(ring: &QuadRing, g: &SL2Mat, m: usize) -> Vec<Vec<QuadInt>> {
        let mut r = vec![vec![QuadInt::zero(); m + 1]; m + 1];
        for j in 0..=m {
            // Each factor contributes either its e1-part or its e2-part.
            for mask in 0u32..(1 << m) {
                let mut coeff = QuadInt::one();
                let mut e1 = 0;
                for f in 0..m {
                    let take_e1 = mask >> f & 1 == 1;
                    let x = match (f < j, take_e1) {
                        (true, true) => &g.a,
                        (true, false) => &g.c,
                        (false, true) => &g.b,
                        (false, false) => &g.d,
                    };
                    coeff = ring.mul(&coeff, x);
                    e1 += take_e1 as usize;
                }
                r[e1][j] = &r[e1][j] + &coeff;
            }
        }
        r
    }

    fn arb_sl2(d: i64) -> impl Strategy<Value = SL2Mat> {
        prop::collection::vec((0..4usize, -2i64..3, -2i64..3), 0..6).prop_map(move |ops| {
            let r = QuadRing::new(d).unwrap();
            let mut g = SL2Mat::identity();
            let s = SL2Mat::from_ints([(0, 0), (-1, 0), (1, 0), (0, 0)]);
            for (op, x, y) in ops {
                let h = match op {
                    0 => SL2Mat::translation(QuadInt::new(x, y)),
                    1 => SL2Mat::translation(QuadInt::new(x, y)).inverse(),
                    _ => s.clone(),
                };
                g = g.mul(&r, &h);
            }
            g
        })
    }

    fn arb_case() -> impl Strategy<Value = (i64, usize, SL2Mat, SL2Mat)> {
        (prop::sample::select(vec![1i64, 2, 3]), 0usize..6)
            .prop_flat_map(|(d, m)| (Just(d), Just(m), arb_sl2(d), arb_sl2(d)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn multiplicative_and_unimodular((d, m, g, h) in arb_case()) {
            let r = QuadRing::new(d).unwrap();
            let lhs = rho_action(&r, &g.mul(&r, &h), m).matrix;
            let rhs = rho_action(&r, &g, m).matrix.mul(&rho_action(&r, &h, m).matrix);
            prop_assert_eq!(lhs, rhs);
            prop_assert!(rho_action(&r, &g, m).matrix.det().abs().is_one());
            if m <= 4 {
                prop_assert_eq!(rho_o(&r, &g, m), brute_rho(&r, &g, m));
            }
        }
    }
}
