use super::ideal::Ideal;
use super::ring::{QuadInt, QuadRing};

/// Residue element of `O_D/𝔞`, encoded as `x1·a + x0` for the canonical pair.
pub type Residue = u32;

/// The finite ring `O_D/𝔞` with elements encoded as dense indices.
#[derive(Clone, Debug)]
pub struct ResidueRing {
    ideal: Ideal,
    p: i64,
    q: i64,
    a: i64,
    c: i64,
}

impl ResidueRing {
    pub fn new(ideal: &Ideal) -> Self {
        let (p, q) = ideal.ring().omega_sq();
        let (a, _, c) = ideal.hnf_triple();
        ResidueRing {
            ideal: ideal.clone(),
            p,
            q,
            a,
            c,
        }
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn ring(&self) -> &QuadRing {
        self.ideal.ring()
    }

    pub fn size(&self) -> usize {
        (self.a * self.c) as usize
    }

    pub fn encode_pair(&self, x0: i64, x1: i64) -> Residue {
        let (r0, r1) = self.ideal.reduce_pair(x0, x1);
        (r1 * self.a + r0) as Residue
    }

    pub fn encode(&self, x: &QuadInt) -> Residue {
        let (r0, r1) = self.ideal.reduce(x);
        (r1 * self.a + r0) as Residue
    }

    pub fn decode(&self, r: Residue) -> (i64, i64) {
        let r = r as i64;
        (r % self.a, r / self.a)
    }

    pub fn zero(&self) -> Residue {
        0
    }

    pub fn one(&self) -> Residue {
        self.encode_pair(1, 0)
    }

    pub fn add(&self, x: Residue, y: Residue) -> Residue {
        let (x0, x1) = self.decode(x);
        let (y0, y1) = self.decode(y);
        self.encode_pair(x0 + y0, x1 + y1)
    }

    pub fn neg(&self, x: Residue) -> Residue {
        let (x0, x1) = self.decode(x);
        self.encode_pair(-x0, -x1)
    }

    pub fn sub(&self, x: Residue, y: Residue) -> Residue {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: Residue, y: Residue) -> Residue {
        let (x0, x1) = self.decode(x);
        let (y0, y1) = self.decode(y);
        let bb = x1 * y1;
        self.encode_pair(x0 * y0 + self.p * bb, x0 * y1 + x1 * y0 + self.q * bb)
    }

    pub fn elements(&self) -> impl Iterator<Item = Residue> {
        0..self.size() as Residue
    }

    /// Units of `O_D/𝔞`, found by exhaustive search.
    pub fn units(&self) -> Vec<Residue> {
        let one = self.one();
        self.elements()
            .filter(|&x| self.elements().any(|y| self.mul(x, y) == one))
            .collect()
    }

    /// Full addition table, row-major.
    pub fn add_table(&self) -> Vec<Residue> {
        let n = self.size() as Residue;
        (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .map(|(x, y)| self.add(x, y))
            .collect()
    }

    /// Full multiplication table, row-major.
    pub fn mul_table(&self) -> Vec<Residue> {
        let n = self.size() as Residue;
        (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .map(|(x, y)| self.mul(x, y))
            .collect()
    }
}

/// Cardinality of `SL(2, O_D/𝔞)` by direct enumeration of all quadruples.
pub fn count_sl2_by_enumeration(rr: &ResidueRing) -> u64 {
    let n = rr.size();
    let tab = rr.mul_table();
    let one = rr.one();
    // For each value v, count pairs (x, y) with x·y = v.
    let mut prod_count = vec![0u64; n];
    for &v in &tab {
        prod_count[v as usize] += 1;
    }
    let mut total = 0u64;
    for v in 0..n as Residue {
        // ad = v and bc = v − 1
        let w = rr.sub(v, one);
        total += prod_count[v as usize] * prod_count[w as usize];
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad_arith::congruence_index;

    #[test]
    fn sizes() {
        let r1 = QuadRing::new(1).unwrap();
        assert_eq!(
            ResidueRing::new(&Ideal::parse(&r1, "1+i").unwrap()).size(),
            2
        );
        assert_eq!(ResidueRing::new(&Ideal::parse(&r1, "2").unwrap()).size(), 4);
        let triv = ResidueRing::new(&Ideal::unit(&r1));
        assert_eq!(triv.size(), 1);
        assert_eq!(triv.one(), triv.zero());
    }

    #[test]
    fn tables_match_reduction_of_ring_operations() {
        for d in [1, 2, 3, 7] {
            let ring = QuadRing::new(d).unwrap();
            for id in Ideal::enumerate_up_to(&ring, 12) {
                let rr = ResidueRing::new(&id);
                for x in rr.elements() {
                    for y in rr.elements() {
                        let (x0, x1) = rr.decode(x);
                        let (y0, y1) = rr.decode(y);
                        let px = QuadInt::new(x0, x1);
                        let py = QuadInt::new(y0, y1);
                        assert_eq!(rr.mul(x, y), rr.encode(&ring.mul(&px, &py)));
                        assert_eq!(rr.add(x, y), rr.encode(&(&px + &py)));
                    }
                }
            }
        }
    }

    #[test]
    fn sl2_enumeration_oracle_matches_index_formula() {
        for d in [1, 2, 3] {
            let ring = QuadRing::new(d).unwrap();
            for id in Ideal::enumerate_up_to(&ring, 20) {
                let rr = ResidueRing::new(&id);
                assert_eq!(
                    count_sl2_by_enumeration(&rr),
                    congruence_index(&ring, &id),
                    "{id} D={d}"
                );
            }
        }
    }
}
