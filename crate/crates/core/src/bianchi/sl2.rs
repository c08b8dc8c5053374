use std::fmt;

use serde::{Deserialize, Serialize};

use crate::int::Int;
use crate::quad_arith::{format_element, QuadInt, QuadRing};

/// A 2×2 matrix `[[a, b], [c, d]]` over `O_D`, normally of determinant one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SL2Mat {
    pub a: QuadInt,
    pub b: QuadInt,
    pub c: QuadInt,
    pub d: QuadInt,
}

impl SL2Mat {
    pub fn new(a: QuadInt, b: QuadInt, c: QuadInt, d: QuadInt) -> Self {
        SL2Mat { a, b, c, d }
    }

    pub fn from_ints(e: [(i64, i64); 4]) -> Self {
        SL2Mat {
            a: QuadInt::new(e[0].0, e[0].1),
            b: QuadInt::new(e[1].0, e[1].1),
            c: QuadInt::new(e[2].0, e[2].1),
            d: QuadInt::new(e[3].0, e[3].1),
        }
    }

    pub fn identity() -> Self {
        SL2Mat::from_ints([(1, 0), (0, 0), (0, 0), (1, 0)])
    }

    pub fn minus_identity() -> Self {
        SL2Mat::from_ints([(-1, 0), (0, 0), (0, 0), (-1, 0)])
    }

    /// The translation `[[1, x], [0, 1]]`.
    pub fn translation(x: QuadInt) -> Self {
        SL2Mat::new(QuadInt::one(), x, QuadInt::zero(), QuadInt::one())
    }

    pub fn diagonal(ring: &QuadRing, unit: &QuadInt) -> Self {
        SL2Mat::new(
            unit.clone(),
            QuadInt::zero(),
            QuadInt::zero(),
            ring.unit_inverse(unit),
        )
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }

    pub fn is_minus_identity(&self) -> bool {
        self == &SL2Mat::minus_identity()
    }

    pub fn det(&self, ring: &QuadRing) -> QuadInt {
        &ring.mul(&self.a, &self.d) - &ring.mul(&self.b, &self.c)
    }

    pub fn mul(&self, ring: &QuadRing, o: &SL2Mat) -> SL2Mat {
        let m =
            |x: &QuadInt, y: &QuadInt, z: &QuadInt, w: &QuadInt| &ring.mul(x, y) + &ring.mul(z, w);
        SL2Mat {
            a: m(&self.a, &o.a, &self.b, &o.c),
            b: m(&self.a, &o.b, &self.b, &o.d),
            c: m(&self.c, &o.a, &self.d, &o.c),
            d: m(&self.c, &o.b, &self.d, &o.d),
        }
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse(&self) -> SL2Mat {
        SL2Mat {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    pub fn neg(&self) -> SL2Mat {
        SL2Mat {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }

    pub fn trace(&self) -> QuadInt {
        &self.a + &self.d
    }

    pub fn entries(&self) -> [&QuadInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Largest absolute coordinate among the entries; a size measure.
    pub fn height(&self) -> Int {
        self.entries()
            .iter()
            .flat_map(|q| [q.a.abs(), q.b.abs()])
            .max()
            .unwrap()
    }

    pub fn display(&self, ring: &QuadRing) -> String {
        let f = |x: &QuadInt| format_element(ring, x);
        format!(
            "[[{}, {}], [{}, {}]]",
            f(&self.a),
            f(&self.b),
            f(&self.c),
            f(&self.d)
        )
    }
}

impl fmt::Display for SL2Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}
