use std::fmt;
use std::hash::{Hash, Hasher};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::ring::{OmegaKind, QuadInt, QuadRing};
use crate::error::{parse_err, Error, Result};
use crate::int::{factor_u64, Int};

/// A nonzero ideal of `O_D`, stored by the Hermite normal form of a Z-basis.
///
/// The basis is `{a, b + cω}` with `a, c > 0` and `0 ≤ b < a`; the norm is `a·c`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Ideal {
    ring: QuadRing,
    a: i64,
    b: i64,
    c: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generators: Option<Vec<QuadInt>>,
}

impl PartialEq for Ideal {
    fn eq(&self, o: &Self) -> bool {
        self.ring == o.ring && self.hnf() == o.hnf()
    }
}

impl Eq for Ideal {}

impl Hash for Ideal {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.ring.d().hash(h);
        self.hnf().hash(h);
    }
}

impl PartialOrd for Ideal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ideal {
    /// Orders by norm first, then by the HNF entries.
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        (self.ring.d(), self.norm(), self.hnf()).cmp(&(o.ring.d(), o.norm(), o.hnf()))
    }
}

/// HNF `(a, b, c)` of the Z-lattice spanned by `vecs` in coordinates `(1, ω)`.
pub(crate) fn hnf2(vecs: &[(i128, i128)]) -> Option<(i64, i64, i64)> {
    let mut a: i128 = 0;
    let mut piv: Option<(i128, i128)> = None;
    for &(x0, x1) in vecs {
        if x1 == 0 {
            a = a.gcd(&x0);
            continue;
        }
        match piv {
            None => piv = Some((x0, x1)),
            Some((p0, p1)) => {
                let e = p1.extended_gcd(&x1);
                let (g, s, t) = (e.gcd, e.x, e.y);
                let np = (s * p0 + t * x0, g);
                let zero0 = (x1 / g) * p0 - (p1 / g) * x0;
                a = a.gcd(&zero0);
                piv = Some(np);
            }
        }
        if let (Some((p0, p1)), true) = (piv, a > 0) {
            piv = Some((p0.rem_euclid(a), p1));
        }
    }
    let (p0, p1) = piv?;
    if a == 0 {
        return None;
    }
    let (p0, p1) = if p1 < 0 { (-p0, -p1) } else { (p0, p1) };
    Some((a as i64, p0.rem_euclid(a) as i64, p1 as i64))
}

fn small(x: &QuadInt) -> (i128, i128) {
    let (a, b) = x
        .as_i64_pair()
        .expect("ideal generators must have machine-size coordinates");
    (a as i128, b as i128)
}

impl Ideal {
    fn from_hnf(ring: QuadRing, (a, b, c): (i64, i64, i64)) -> Ideal {
        Ideal {
            ring,
            a,
            b,
            c,
            generators: None,
        }
    }

    /// Builds an ideal from an HNF triple, checking that the lattice is `ω`-stable.
    pub fn from_hnf_checked(ring: QuadRing, a: i64, b: i64, c: i64) -> Result<Ideal> {
        if a <= 0 || c <= 0 || b < 0 || b >= a {
            return Err(Error::Degenerate(format!("({a}, {b}, {c}) is not in HNF")));
        }
        let id = Ideal::from_hnf(ring, (a, b, c));
        let w = ring.omega();
        for g in id.basis() {
            if !id.contains(&ring.mul(&g, &w)) {
                return Err(Error::Degenerate(format!(
                    "lattice ({a}, {b}, {c}) is not closed under multiplication by w"
                )));
            }
        }
        Ok(id)
    }

    pub fn from_generators(ring: &QuadRing, gens: &[QuadInt]) -> Result<Ideal> {
        let w = ring.omega();
        let mut vecs = Vec::with_capacity(2 * gens.len());
        for g in gens {
            vecs.push(small(g));
            vecs.push(small(&ring.mul(g, &w)));
        }
        let hnf = hnf2(&vecs).ok_or(Error::ZeroIdeal)?;
        let mut id = Ideal::from_hnf(*ring, hnf);
        id.generators = Some(gens.to_vec());
        Ok(id)
    }

    pub fn principal(ring: &QuadRing, x: &QuadInt) -> Result<Ideal> {
        Ideal::from_generators(ring, std::slice::from_ref(x))
    }

    pub fn unit(ring: &QuadRing) -> Ideal {
        Ideal::from_hnf(*ring, (1, 0, 1))
    }

    pub fn ring(&self) -> &QuadRing {
        &self.ring
    }

    /// Row-major HNF `[a, b, 0, c]`; columns are the basis vectors `a` and `b + cω`.
    pub fn hnf(&self) -> [i64; 4] {
        [self.a, self.b, 0, self.c]
    }

    pub fn hnf_triple(&self) -> (i64, i64, i64) {
        (self.a, self.b, self.c)
    }

    pub fn generators(&self) -> Option<&[QuadInt]> {
        self.generators.as_deref()
    }

    /// Z-basis `{a, b + cω}`.
    pub fn basis(&self) -> [QuadInt; 2] {
        [QuadInt::new(self.a, 0), QuadInt::new(self.b, self.c)]
    }

    pub fn norm(&self) -> i64 {
        self.a * self.c
    }

    pub fn is_unit(&self) -> bool {
        self.norm() == 1
    }

    pub fn contains_pair(&self, x0: i64, x1: i64) -> bool {
        if x1.rem_euclid(self.c) != 0 {
            return false;
        }
        let q = x1 / self.c;
        (x0 as i128 - q as i128 * self.b as i128).rem_euclid(self.a as i128) == 0
    }

    pub fn contains(&self, x: &QuadInt) -> bool {
        match x.as_i64_pair() {
            Some((x0, x1)) => self.contains_pair(x0, x1),
            None => {
                let c = Int::from(self.c);
                if !c.divides(&x.b) {
                    return false;
                }
                let q = x.b.div_exact(&c);
                Int::from(self.a).divides(&(&x.a - &(&q * self.b)))
            }
        }
    }

    /// `self ⊇ other`, i.e. `self` divides `other`.
    pub fn divides(&self, other: &Ideal) -> bool {
        other.basis().iter().all(|g| self.contains(g))
    }

    pub fn divides_integer(&self, n: i64) -> bool {
        self.contains_pair(n, 0)
    }

    pub fn mul(&self, o: &Ideal) -> Ideal {
        let mut vecs = Vec::with_capacity(4);
        for x in self.basis() {
            for y in o.basis() {
                vecs.push(small(&self.ring.mul(&x, &y)));
            }
        }
        Ideal::from_hnf(self.ring, hnf2(&vecs).expect("product of nonzero ideals"))
    }

    pub fn pow(&self, e: u32) -> Ideal {
        let mut acc = Ideal::unit(&self.ring);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn conj(&self) -> Ideal {
        let vecs: Vec<_> = self
            .basis()
            .iter()
            .flat_map(|g| {
                let c = self.ring.conj(g);
                [small(&c), small(&self.ring.mul(&c, &self.ring.omega()))]
            })
            .collect();
        Ideal::from_hnf(self.ring, hnf2(&vecs).expect("nonzero"))
    }

    /// `self / o` when `o` divides `self`.
    pub fn div(&self, o: &Ideal) -> Option<Ideal> {
        if !o.divides(self) {
            return None;
        }
        let p = self.mul(&o.conj());
        let n = o.norm();
        let (a, b, c) = p.hnf_triple();
        if a % n != 0 || b % n != 0 || c % n != 0 {
            return None;
        }
        Some(Ideal::from_hnf(self.ring, (a / n, b / n, c / n)))
    }

    /// Reduces `x` to its canonical residue `(x0, x1)` with `0 ≤ x0 < a`, `0 ≤ x1 < c`.
    pub fn reduce_pair(&self, x0: i64, x1: i64) -> (i64, i64) {
        let q = x1.div_euclid(self.c);
        let r1 = x1 - q * self.c;
        let r0 = (x0 as i128 - q as i128 * self.b as i128).rem_euclid(self.a as i128) as i64;
        (r0, r1)
    }

    pub fn reduce(&self, x: &QuadInt) -> (i64, i64) {
        let a = x.a.mod_floor(&Int::from(self.a * self.c));
        let b = x.b.mod_floor(&Int::from(self.a * self.c));
        // N(𝔞) ∈ 𝔞, so reducing coordinates mod N first keeps them small.
        self.reduce_pair(a.as_i64().unwrap(), b.as_i64().unwrap())
    }

    /// Prime ideals above the rational prime `p`.
    pub fn primes_above(ring: &QuadRing, p: i64) -> Vec<Ideal> {
        let mut out = Vec::new();
        for b in 0..p {
            let n = ring.norm(&QuadInt::new(b, 1));
            if n.mod_floor(&Int::from(p)).is_zero() {
                out.push(Ideal::from_hnf(*ring, (p, b, 1)));
            }
        }
        if out.is_empty() {
            out.push(Ideal::from_hnf(*ring, (p, 0, p)));
        }
        out
    }

    pub fn is_prime(&self) -> bool {
        let f = self.factor();
        f.len() == 1 && f[0].1 == 1
    }

    /// Prime factorization, ordered by norm then HNF.
    pub fn factor(&self) -> Vec<(Ideal, u32)> {
        let mut rest = self.clone();
        rest.generators = None;
        let mut out = Vec::new();
        for (p, _) in factor_u64(self.norm() as u64) {
            for prime in Ideal::primes_above(&self.ring, p as i64) {
                let mut e = 0;
                while prime.divides(&rest) {
                    rest = rest.div(&prime).expect("exact division by a prime factor");
                    e += 1;
                }
                if e > 0 {
                    out.push((prime, e));
                }
            }
        }
        debug_assert!(rest.is_unit());
        out.sort();
        out
    }

    /// All ideals of norm at most `n`, in increasing (norm, HNF) order.
    pub fn enumerate_up_to(ring: &QuadRing, n: i64) -> Vec<Ideal> {
        let mut out = Vec::new();
        let mut c = 1;
        while c * c <= n {
            let mut a = 1;
            while c * c * a <= n {
                for b in 0..a {
                    let nb = ring.norm(&QuadInt::new(b, 1));
                    if nb.mod_floor(&Int::from(a)).is_zero() {
                        out.push(Ideal::from_hnf(*ring, (c * a, c * b, c)));
                    }
                }
                a += 1;
            }
            c += 1;
        }
        out.sort();
        out
    }

    /// A generator of smallest height when the ideal is principal.
    pub fn find_generator(&self) -> Option<QuadInt> {
        if let Some(g) = self.generators.as_ref().filter(|g| g.len() == 1) {
            return Some(g[0].clone());
        }
        let n = Int::from(self.norm());
        let bound = (self.norm() as f64).sqrt().ceil() as i64 + 2;
        let mut best: Option<QuadInt> = None;
        for x1 in -bound..=bound {
            for x0 in -2 * bound..=2 * bound {
                if !self.contains_pair(x0, x1) {
                    continue;
                }
                let x = QuadInt::new(x0, x1);
                if self.ring.norm(&x) == n {
                    let key = |q: &QuadInt| {
                        let (a, b) = q.as_i64_pair().unwrap();
                        (a.abs() + b.abs(), b.abs(), -a, -b)
                    };
                    if best.as_ref().is_none_or(|bst| key(&x) < key(bst)) {
                        best = Some(x);
                    }
                }
            }
        }
        best
    }

    /// Short label for reports: a generator when one is found, else the HNF.
    pub fn label(&self) -> String {
        match self.find_generator() {
            Some(g) => format_element(&self.ring, &g),
            None => format!("[{},{},0,{}]", self.a, self.b, self.c),
        }
    }

    pub fn parse(ring: &QuadRing, s: &str) -> Result<Ideal> {
        let gens = s
            .split(',')
            .map(|t| parse_element(ring, t))
            .collect::<Result<Vec<_>>>()?;
        if gens.iter().all(|g| g.is_zero()) {
            return Err(Error::ZeroIdeal);
        }
        Ideal::from_generators(ring, &gens)
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.label())
    }
}

/// Formats an element with `i` for `D = 1`, `sqrt(-D)` for other `D ≡ 1, 2`, `w` otherwise.
pub fn format_element(ring: &QuadRing, x: &QuadInt) -> String {
    let sym = match (ring.omega_kind(), ring.d()) {
        (OmegaKind::SqrtMinusD, 1) => "i".to_string(),
        (OmegaKind::SqrtMinusD, d) => format!("sqrt(-{d})"),
        (OmegaKind::HalfInteger, _) => "w".to_string(),
    };
    let s = x.to_string();
    if sym == "i" {
        s.replace("*w", "i").replace('w', "i")
    } else {
        s.replace('w', &sym)
    }
}

/// Parses `a+b*w`, `a+b*sqrt(-D)`, `a+bi` and similar sums of terms.
pub fn parse_element(ring: &QuadRing, input: &str) -> Result<QuadInt> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(parse_err("element", input, "empty"));
    }
    let sqrt_tok = format!("sqrt(-{})", ring.d());
    let mut total = QuadInt::zero();
    let mut rest = s.as_str();
    let mut first = true;
    while !rest.is_empty() {
        let mut sign = 1i64;
        if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        } else if let Some(r) = rest.strip_prefix('-') {
            sign = -1;
            rest = r;
        } else if !first {
            return Err(parse_err("element", input, "expected + or -"));
        }
        first = false;
        let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
        rest = &rest[digits.len()..];
        let coeff: i64 = if digits.is_empty() {
            1
        } else {
            digits
                .parse()
                .map_err(|_| parse_err("element", input, "coefficient too large"))?
        };
        if !digits.is_empty() {
            if let Some(r) = rest.strip_prefix('*') {
                rest = r;
            }
        }
        let unit = if let Some(r) = rest.strip_prefix(sqrt_tok.as_str()) {
            rest = r;
            ring.sqrt_minus_d()
        } else if let Some(r) = rest.strip_prefix('w').or_else(|| rest.strip_prefix('ω')) {
            rest = r;
            ring.omega()
        } else if let Some(r) = rest.strip_prefix('i') {
            if ring.d() != 1 {
                return Err(parse_err("element", input, "'i' is only valid for D = 1"));
            }
            rest = r;
            ring.omega()
        } else if digits.is_empty() {
            return Err(parse_err("element", input, "dangling sign"));
        } else {
            QuadInt::one()
        };
        total = &total + &unit.scale(&Int::from(sign * coeff));
    }
    Ok(total)
}

/// The index `[SL(2, O_D) : Γ(𝔞)] = N(𝔞)³ ∏_{𝔭 | 𝔞} (1 − N(𝔭)^{−2})`.
///
/// Panics if the result does not fit in `u64`.
pub fn congruence_index(_ring: &QuadRing, a: &Ideal) -> u64 {
    let mut idx: u64 = 1;
    for (p, e) in a.factor() {
        let q = p.norm() as u64;
        let f = q
            .checked_pow(3 * e - 2)
            .and_then(|v| v.checked_mul(q * q - 1))
            .expect("congruence index overflows u64");
        idx = idx.checked_mul(f).expect("congruence index overflows u64");
    }
    idx
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(d: i64) -> QuadRing {
        QuadRing::new(d).unwrap()
    }

    #[test]
    fn norms_of_small_ideals() {
        let r1 = r(1);
        assert_eq!(Ideal::parse(&r1, "1+i").unwrap().norm(), 2);
        assert_eq!(Ideal::parse(&r1, "2").unwrap().norm(), 4);
        let r3 = r(3);
        assert_eq!(Ideal::parse(&r3, "sqrt(-3)").unwrap().norm(), 3);
        assert!(matches!(Ideal::parse(&r1, "0"), Err(Error::ZeroIdeal)));
    }

    #[test]
    fn parsing_forms_agree() {
        let r1 = r(1);
        let a = Ideal::parse(&r1, "1+i").unwrap();
        assert_eq!(a, Ideal::parse(&r1, "1+1*w").unwrap());
        assert_eq!(a, Ideal::parse(&r1, "1+sqrt(-1)").unwrap());
        assert_eq!(a, Ideal::parse(&r1, "2, 1+i").unwrap());
        let r3 = r(3);
        assert_eq!(parse_element(&r3, "sqrt(-3)").unwrap(), QuadInt::new(-1, 2));
        assert_eq!(parse_element(&r3, "-2+3*w").unwrap(), QuadInt::new(-2, 3));
        assert!(parse_element(&r3, "1+i").is_err());
        assert!(parse_element(&r1, "1+").is_err());
    }

    #[test]
    fn factorizations() {
        let r1 = r(1);
        let two = Ideal::parse(&r1, "2").unwrap();
        let p = Ideal::parse(&r1, "1+i").unwrap();
        // Oracle: (1+i)² and (2) have the same HNF.
        assert_eq!(p.mul(&p), two);
        assert_eq!(two.factor(), vec![(p.clone(), 2)]);
        assert_eq!(p.factor(), vec![(p.clone(), 1)]);
        let five = Ideal::parse(&r1, "5").unwrap();
        let f = five.factor();
        let a = Ideal::parse(&r1, "2+i").unwrap();
        let b = Ideal::parse(&r1, "2-i").unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.contains(&(a.clone(), 1)) && f.contains(&(b.clone(), 1)));
        assert_eq!(a.mul(&b), five);
        // 3 is inert in Z[i].
        assert_eq!(Ideal::parse(&r1, "3").unwrap().factor().len(), 1);
    }

    #[test]
    fn congruence_indices() {
        let r1 = r(1);
        assert_eq!(congruence_index(&r1, &Ideal::parse(&r1, "1+i").unwrap()), 6);
        assert_eq!(congruence_index(&r1, &Ideal::parse(&r1, "2").unwrap()), 48);
        assert_eq!(congruence_index(&r1, &Ideal::unit(&r1)), 1);
        assert_eq!(
            congruence_index(&r1, &Ideal::parse(&r1, "2+i").unwrap()),
            120
        );
    }

    #[test]
    fn enumeration_counts_match_zeta_coefficients() {
        // Ideals of Z[i] of norm n are counted by r2(n)/4.
        let ids = Ideal::enumerate_up_to(&r(1), 25);
        let count = |n: i64| ids.iter().filter(|i| i.norm() == n).count();
        assert_eq!(count(1), 1);
        assert_eq!(count(2), 1);
        assert_eq!(count(3), 0);
        assert_eq!(count(5), 2);
        assert_eq!(count(9), 1);
        assert_eq!(count(25), 3);
        for i in &ids {
            let (a, b, c) = i.hnf_triple();
            Ideal::from_hnf_checked(r(1), a, b, c).unwrap();
        }
    }

    #[test]
    fn residues() {
        let r1 = r(1);
        let two = Ideal::parse(&r1, "2").unwrap();
        assert_eq!(two.reduce(&QuadInt::new(3, -1)), (1, 1));
        let p = Ideal::parse(&r1, "1+i").unwrap();
        assert_eq!(p.reduce(&QuadInt::new(0, 1)), (1, 0));
    }

    fn arb_ring() -> impl Strategy<Value = QuadRing> {
        prop::sample::select(vec![1i64, 2, 3, 7, 11]).prop_map(|d| QuadRing::new(d).unwrap())
    }

    proptest! {
        #[test]
        fn ideal_norm_is_multiplicative(ring in arb_ring(), a in -9i64..9, b in -9i64..9, c in -9i64..9, e in -9i64..9) {
            let (x, y) = (QuadInt::new(a, b), QuadInt::new(c, e));
            prop_assume!(!x.is_zero() && !y.is_zero());
            let i = Ideal::principal(&ring, &x).unwrap();
            let j = Ideal::principal(&ring, &y).unwrap();
            prop_assert_eq!(i.norm(), ring.norm(&x).as_i64().unwrap());
            prop_assert_eq!(i.mul(&j).norm(), i.norm() * j.norm());
            prop_assert_eq!(i.mul(&j), Ideal::principal(&ring, &ring.mul(&x, &y)).unwrap());
            prop_assert!(congruence_index(&ring, &i) >= i.norm() as u64);
        }
    }

    #[test]
    fn factorization_round_trips() {
        for d in [1, 2, 3, 7, 11] {
            let ring = r(d);
            for id in Ideal::enumerate_up_to(&ring, 100) {
                let f = id.factor();
                let mut prod = Ideal::unit(&ring);
                for (p, e) in &f {
                    assert!(is_prime_power(p.norm()), "{p} in D={d}");
                    prod = prod.mul(&p.pow(*e));
                }
                assert_eq!(prod, id, "D={d}");
            }
        }
    }

    fn is_prime_power(n: i64) -> bool {
        factor_u64(n as u64).len() == 1
    }
}
