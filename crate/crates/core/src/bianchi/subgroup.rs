use std::fmt;

use serde::{Serialize, Serializer};

use super::sl2::SL2Mat;
use crate::error::{parse_err, Result};
use crate::quad_arith::{is_torsion_free_level, Ideal, QuadInt, QuadRing};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubgroupKind {
    /// `Γ(𝔞)`: congruent to the identity.
    Principal,
    /// `Γ_0(𝔞)`: lower-left entry in `𝔞`.
    Hecke,
    /// `Γ_0(𝔞) ∩ Γ(𝔟)` for an auxiliary level `𝔟`.
    HeckeIntersect,
}

/// A congruence subgroup of `SL(2, O_D)` given by its level.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubgroupSpec {
    pub kind: SubgroupKind,
    pub ideal: Ideal,
    /// The auxiliary principal level for [`SubgroupKind::HeckeIntersect`].
    pub base: Option<Ideal>,
}

impl SubgroupSpec {
    pub fn principal(ideal: Ideal) -> Self {
        SubgroupSpec {
            kind: SubgroupKind::Principal,
            ideal,
            base: None,
        }
    }

    pub fn hecke(ideal: Ideal) -> Self {
        SubgroupSpec {
            kind: SubgroupKind::Hecke,
            ideal,
            base: None,
        }
    }

    pub fn hecke_intersect(ideal: Ideal, base: Ideal) -> Self {
        SubgroupSpec {
            kind: SubgroupKind::HeckeIntersect,
            ideal,
            base: Some(base),
        }
    }

    /// The whole group `SL(2, O_D)`, as `Γ((1))`.
    pub fn full(ring: &QuadRing) -> Self {
        SubgroupSpec::principal(Ideal::unit(ring))
    }

    pub fn ring(&self) -> &QuadRing {
        self.ideal.ring()
    }

    /// Parses `principal:1+i`, `hecke:1+i` or `hecke-intersect:1+i:base=2`.
    pub fn parse(ring: &QuadRing, s: &str) -> Result<SubgroupSpec> {
        let mut parts = s.trim().splitn(3, ':');
        let kind = parts.next().unwrap_or("");
        let ideal_str = parts
            .next()
            .ok_or_else(|| parse_err("subgroup", s, "expected kind:ideal"))?;
        let ideal = Ideal::parse(ring, ideal_str)?;
        let rest = parts.next();
        match kind {
            "principal" | "hecke" if rest.is_some() => {
                Err(parse_err("subgroup", s, "unexpected trailing field"))
            }
            "principal" => Ok(SubgroupSpec::principal(ideal)),
            "hecke" => Ok(SubgroupSpec::hecke(ideal)),
            "hecke-intersect" => {
                let base = rest
                    .and_then(|r| r.strip_prefix("base="))
                    .ok_or_else(|| parse_err("subgroup", s, "expected base=<ideal>"))?;
                Ok(SubgroupSpec::hecke_intersect(
                    ideal,
                    Ideal::parse(ring, base)?,
                ))
            }
            _ => Err(parse_err(
                "subgroup",
                s,
                "kind must be principal, hecke or hecke-intersect",
            )),
        }
    }

    /// Exact membership by reduction modulo the level.
    pub fn is_member(&self, m: &SL2Mat) -> bool {
        let principal = |id: &Ideal| {
            let one = QuadInt::one();
            id.contains(&(&m.a - &one))
                && id.contains(&(&m.d - &one))
                && id.contains(&m.b)
                && id.contains(&m.c)
        };
        match self.kind {
            SubgroupKind::Principal => principal(&self.ideal),
            SubgroupKind::Hecke => self.ideal.contains(&m.c),
            SubgroupKind::HeckeIntersect => {
                self.ideal.contains(&m.c) && principal(self.base.as_ref().unwrap())
            }
        }
    }

    /// Whether the torsion-freeness gate passes: `Γ(𝔞)` for a gated level, or an
    /// intersection with such a `Γ(𝔟)`.
    pub fn is_torsion_free(&self) -> bool {
        match self.kind {
            SubgroupKind::Principal => is_torsion_free_level(&self.ideal),
            SubgroupKind::Hecke => false,
            SubgroupKind::HeckeIntersect => is_torsion_free_level(self.base.as_ref().unwrap()),
        }
    }

    pub fn label(&self) -> String {
        match self.kind {
            SubgroupKind::Principal => format!("principal:{}", self.ideal.label()),
            SubgroupKind::Hecke => format!("hecke:{}", self.ideal.label()),
            SubgroupKind::HeckeIntersect => format!(
                "hecke-intersect:{}:base={}",
                self.ideal.label(),
                self.base.as_ref().unwrap().label()
            ),
        }
    }
}

impl fmt::Display for SubgroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl Serialize for SubgroupSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r1() -> QuadRing {
        QuadRing::new(1).unwrap()
    }

    #[test]
    fn membership_examples() {
        let r = r1();
        let g2 = SubgroupSpec::parse(&r, "principal:2").unwrap();
        assert!(g2.is_member(&SL2Mat::identity()));
        assert!(g2.is_member(&SL2Mat::translation(QuadInt::new(2, 0))));
        assert!(!g2.is_member(&SL2Mat::translation(QuadInt::new(1, 0))));
        let h = SubgroupSpec::parse(&r, "hecke:1+i").unwrap();
        let a = SL2Mat::from_ints([(0, 0), (-1, 0), (1, 0), (0, 0)]);
        assert!(!h.is_member(&a));
        assert!(h.is_member(&SL2Mat::minus_identity()));
    }

    #[test]
    fn parsing() {
        let r = r1();
        let s = SubgroupSpec::parse(&r, "hecke-intersect:1+i:base=2+i").unwrap();
        assert_eq!(s.kind, SubgroupKind::HeckeIntersect);
        assert_eq!(s.base.as_ref().unwrap().norm(), 5);
        assert!(s.is_torsion_free());
        assert_eq!(SubgroupSpec::parse(&r, &s.label()).unwrap(), s);
        assert!(SubgroupSpec::parse(&r, "foo:2").is_err());
        assert!(SubgroupSpec::parse(&r, "hecke-intersect:2").is_err());
        assert!(SubgroupSpec::parse(&r, "principal").is_err());
    }
}
