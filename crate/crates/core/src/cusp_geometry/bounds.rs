use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::torus::{
    full_covolume as full, torus_cohomology_full, Coefficients, TorusBundle, TorusCohomology,
};
use crate::bianchi::PlaneLattice;
use crate::error::{Error, Result};
use crate::int::factorial;
use crate::linalg::QMat;
use crate::quad_arith::{delta_d, SurdValue};

/// Which part of `H^1` a covolume refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    Plus,
    Minus,
    Full,
}

/// `lower ≤ value ≤ upper`, decided exactly.
#[derive(Clone, Debug, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub lower: Option<SurdValue>,
    pub value: SurdValue,
    pub upper: Option<SurdValue>,
    pub holds: bool,
}

impl BoundCheck {
    pub fn new(
        name: impl Into<String>,
        lower: Option<SurdValue>,
        value: SurdValue,
        upper: Option<SurdValue>,
    ) -> Self {
        let holds = lower.as_ref().is_none_or(|l| *l <= value)
            && upper.as_ref().is_none_or(|u| value <= *u);
        BoundCheck {
            name: name.into(),
            lower,
            value,
            upper,
            holds,
        }
    }

    pub fn equality(name: impl Into<String>, value: SurdValue, target: SurdValue) -> Self {
        BoundCheck::new(name, Some(target.clone()), value, Some(target))
    }

    fn into_result(self) -> Result<BoundCheck> {
        if self.holds {
            Ok(self)
        } else {
            Err(Error::CheckFailed {
                name: "covolume bound",
                detail: format!("{}: {:?}", self.name, self),
            })
        }
    }
}

/// A covolume of a cohomology lattice of a cusp torus, with the checks applied to it.
#[derive(Clone, Debug, Serialize)]
pub struct CovolumeReport {
    pub degree: usize,
    pub part: Part,
    /// `None` for `Ē = E ⊕ E*`.
    pub coefficients: Option<Coefficients>,
    pub covolume: SurdValue,
    pub checks: Vec<BoundCheck>,
}

impl CovolumeReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Rational projections of `H^1 ⊗ Q` onto the plus and minus lines, in the basis of `H^1_free`.
#[derive(Clone, Debug)]
pub struct PlusMinusSplit {
    pub side: Coefficients,
    pub plus_line: &'static str,
    pub minus_line: &'static str,
    /// `e` with `diag(t, 1/t)` acting on the line by `t^e`.
    pub cartan_weights: (i64, i64),
    pub plus_projection: QMat,
    pub minus_projection: QMat,
}

pub fn pm_split(t: &TorusBundle, h: &TorusCohomology) -> Result<PlusMinusSplit> {
    let m = t.m() as i64;
    if m == 0 {
        return Err(Error::Degenerate(
            "weight 0 has no plus/minus splitting".into(),
        ));
    }
    let b = h.lattices[1].coordinate_matrix();
    let binv = b
        .inverse()
        .ok_or_else(|| Error::Degenerate("period matrix is singular".into()))?;
    let keep = |rows: [usize; 2]| {
        let mut e = QMat::zeros(4, 4);
        for r in rows {
            e.set(r, r, BigRational::from(BigInt::from(1)));
        }
        binv.mul(&e).mul(&b)
    };
    let (plus_line, minus_line, cartan_weights) = match h.side {
        Coefficients::Standard => ("v_m ⊗ dz̄", "v_0 ⊗ dz", (m - 2, -m - 2)),
        Coefficients::Dual => ("v_0^* ⊗ dz̄", "v_m^* ⊗ dz", (m - 2, -m - 2)),
    };
    Ok(PlusMinusSplit {
        side: h.side,
        plus_line,
        minus_line,
        cartan_weights,
        plus_projection: keep([0, 1]),
        minus_projection: keep([2, 3]),
    })
}

/// Cohomology of a base torus and one cover, computed once for all checks.
#[derive(Clone, Debug)]
pub struct CoverPair {
    pub index: BigInt,
    pub base: [TorusCohomology; 2],
    pub cover: [TorusCohomology; 2],
}

impl CoverPair {
    pub fn new(base: &TorusBundle, cover: &TorusBundle) -> Result<Self> {
        Ok(CoverPair {
            index: base.cover_index(cover)?,
            base: torus_cohomology_full(base)?,
            cover: torus_cohomology_full(cover)?,
        })
    }

    fn index_power(&self, num: i32, den: i32) -> SurdValue {
        let d = self.base[0].lattices[0].ring.d();
        let idx = SurdValue::rational(BigRational::from(self.index.clone()), d);
        // Real dimensions are multiples of 4, so the exponent is an integer.
        assert_eq!(num % den, 0);
        idx.powi(num / den)
    }
}

fn full_pm(h: &[TorusCohomology; 2], plus: bool) -> Result<SurdValue> {
    Ok(h[0]
        .pm_lattice(plus)?
        .covolume()
        .mul(&h[1].pm_lattice(plus)?.covolume()))
}

/// Real dimension of `H^q(𝔫; V ⊕ V*)`.
pub fn lie_algebra_dimension(q: usize) -> i32 {
    [4, 8, 4][q]
}

/// `1/(vol H^{2−q}(T_P) · idx^{b_q/2}) ≤ vol H^q(T_{P,i}) ≤ vol H^q(T_P) · idx^{b_q/2}`.
pub fn gt19_report(pair: &CoverPair, q: usize) -> CovolumeReport {
    let p = pair.index_power(lie_algebra_dimension(q), 2);
    let value = full(&pair.cover, q);
    let upper = full(&pair.base, q).mul(&p);
    let lower = full(&pair.base, 2 - q).mul(&p).inv();
    CovolumeReport {
        degree: q,
        part: Part::Full,
        coefficients: None,
        covolume: value.clone(),
        checks: vec![BoundCheck::new(
            format!("gt19 q={q}"),
            Some(lower),
            value,
            Some(upper),
        )],
    }
}

pub fn check_prop_gt19(
    base: &TorusBundle,
    cover: &TorusBundle,
    q: usize,
) -> Result<CovolumeReport> {
    if q > 2 {
        return Err(Error::Degenerate(format!("degree {q} on a 2-torus")));
    }
    let r = gt19_report(&CoverPair::new(base, cover)?, q);
    r.checks[0].clone().into_result()?;
    Ok(r)
}

/// Both sides of `1/(vol L_{0,∓} · idx^{b_1/4}) ≤ vol L_{i,±} ≤ vol L_{0,±} · idx^{b_1/4}`,
/// plus `vol L_+ · vol L_− ≥ 1` and `vol H^1 = 1` on the cover.
pub fn gt28_reports(pair: &CoverPair) -> Result<Vec<CovolumeReport>> {
    if pair.base[0].m == 0 {
        return Err(Error::Degenerate(
            "weight 0 has no plus/minus splitting".into(),
        ));
    }
    let d = pair.base[0].lattices[0].ring.d();
    let p = pair.index_power(lie_algebra_dimension(1), 4);
    let mut out = Vec::new();
    for plus in [true, false] {
        let value = full_pm(&pair.cover, plus)?;
        let upper = full_pm(&pair.base, plus)?.mul(&p);
        let lower = full_pm(&pair.base, !plus)?.mul(&p).inv();
        out.push(CovolumeReport {
            degree: 1,
            part: if plus { Part::Plus } else { Part::Minus },
            coefficients: None,
            covolume: value.clone(),
            checks: vec![BoundCheck::new(
                format!("gt28 {}", if plus { "plus" } else { "minus" }),
                Some(lower),
                value,
                Some(upper),
            )],
        });
    }
    let product = full_pm(&pair.cover, true)?.mul(&full_pm(&pair.cover, false)?);
    let total = full(&pair.cover, 1);
    out.push(CovolumeReport {
        degree: 1,
        part: Part::Full,
        coefficients: None,
        covolume: total.clone(),
        checks: vec![
            BoundCheck::equality("vol H^1 = 1", total, SurdValue::one(d)),
            BoundCheck::new(
                "vol L+ · vol L- >= 1",
                Some(SurdValue::one(d)),
                product,
                None,
            ),
        ],
    });
    Ok(out)
}

pub fn check_prop_gt28(base: &TorusBundle, cover: &TorusBundle) -> Result<Vec<CovolumeReport>> {
    let reports = gt28_reports(&CoverPair::new(base, cover)?)?;
    for r in &reports {
        for c in &r.checks {
            c.clone().into_result()?;
        }
    }
    Ok(reports)
}

/// One weight of the plus-line ratio check.
#[derive(Clone, Debug, Serialize)]
pub struct Sr2Entry {
    pub m: usize,
    /// `vol(H^1_free ∩ H^1_+) / (vol H^0 · vol H^2)` for `Ē`.
    pub ratio: SurdValue,
    pub checks: Vec<BoundCheck>,
    /// Least `C` with `1/((m+1)! C^{m+1})² ≤ ratio ≤ C`.
    pub least_constant: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Sr2Certificate {
    pub lattice: PlaneLattice,
    pub width_factor: String,
    pub entries: Vec<Sr2Entry>,
    /// One constant valid for every tested weight.
    pub constant: f64,
    pub passed: bool,
}

pub fn sr2_entry(t: &TorusBundle) -> Result<Sr2Entry> {
    let m = t.m();
    if m == 0 {
        return Err(Error::Degenerate(
            "weight 0 has no plus/minus splitting".into(),
        ));
    }
    let d = t.ring().d();
    let h = torus_cohomology_full(t)?;
    let vol = t.volume();
    let w = SurdValue::rational(BigRational::from(t.width_factor()), d);
    let im_delta = delta_d(t.ring()).im_part;
    let two_vol = vol.scale(&BigRational::from(BigInt::from(2)));
    let fw = SurdValue::rational(BigRational::from(factorial(m as u32 + 1).to_bigint()), d)
        .mul(&w.powi(m as i32 + 1));

    let plus_e = h[0].pm_lattice(true)?.covolume();
    let plus_d = h[1].pm_lattice(true)?.covolume();
    let minus_e = h[0].pm_lattice(false)?.covolume();
    let minus_d = h[1].pm_lattice(false)?.covolume();
    let h0h2 = full(&h, 0).mul(&full(&h, 2));
    let ratio = plus_e.mul(&plus_d).div(&h0h2);

    let checks = vec![
        BoundCheck::equality("vol H^0 · vol H^2 = 1", h0h2, SurdValue::one(d)),
        BoundCheck::new(
            "sr5",
            None,
            plus_e,
            Some(two_vol.mul(&w.powi(2)).mul(&im_delta)),
        ),
        BoundCheck::new(
            "sr5a",
            None,
            plus_d,
            Some(two_vol.mul(&w.powi(2)).div(&im_delta)),
        ),
        BoundCheck::new(
            "lb4",
            None,
            minus_e,
            Some(two_vol.mul(&fw.powi(2)).mul(&im_delta)),
        ),
        BoundCheck::new(
            "lb5",
            None,
            minus_d,
            Some(two_vol.mul(&fw.powi(2)).div(&im_delta)),
        ),
    ];
    let r = ratio.to_f64();
    let lf = factorial(m as u32 + 1).ln_abs();
    // ((m+1)! C^{m+1})² ≥ 1/ratio.
    let from_lower = ((-r.ln() / 2.0 - lf) / (m as f64 + 1.0)).exp();
    Ok(Sr2Entry {
        m,
        ratio,
        checks,
        least_constant: r.max(from_lower),
    })
}

pub fn check_prop_sr2(lattice: &PlaneLattice, weights: &[usize]) -> Result<Sr2Certificate> {
    let entries: Vec<Sr2Entry> = weights
        .iter()
        .map(|&m| sr2_entry(&TorusBundle::new(lattice, m)?))
        .collect::<Result<_>>()?;
    let constant = entries.iter().map(|e| e.least_constant).fold(0.0, f64::max);
    let passed = constant.is_finite() && entries.iter().all(|e| e.checks.iter().all(|c| c.holds));
    let width = TorusBundle::new(lattice, 0)?.width_factor();
    Ok(Sr2Certificate {
        lattice: lattice.clone(),
        width_factor: width.to_string(),
        entries,
        constant,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad_arith::QuadRing;

    fn base(d: i64, hnf: (i64, i64, i64), m: usize) -> TorusBundle {
        let ring = QuadRing::new(d).unwrap();
        TorusBundle::new(
            &PlaneLattice::from_hnf(&ring, hnf.0, hnf.1, hnf.2).unwrap(),
            m,
        )
        .unwrap()
    }

    #[test]
    fn gt19_examples() {
        let t = base(1, (1, 0, 1), 1);
        for q in 0..3 {
            let r = check_prop_gt19(&t, &t, q).unwrap();
            assert!(r.passed());
            let r = check_prop_gt19(&t, &t.scaled_cover(2).unwrap(), q).unwrap();
            assert!(r.passed());
        }
    }

    #[test]
    fn gt28_examples() {
        for (d, m, k) in [(1, 1, 1), (1, 1, 2), (3, 2, 3), (1, 3, 2)] {
            let t = base(d, (1, 0, 1), m);
            let reports = check_prop_gt28(&t, &t.scaled_cover(k).unwrap()).unwrap();
            assert!(
                reports.iter().all(CovolumeReport::passed),
                "D={d} m={m} k={k}"
            );
        }
    }

    #[test]
    fn line_bounds_on_the_ring() {
        // Ratios frozen from a first run; they are also the plus-line covolume products.
        for (d, ratio) in [(1, (1, 4)), (2, (1, 8)), (3, (1, 3))] {
            let e = sr2_entry(&base(d, (1, 0, 1), 1)).unwrap();
            assert!(e.checks.iter().all(|c| c.holds));
            let expect = BigRational::new(BigInt::from(ratio.0), BigInt::from(ratio.1));
            assert_eq!(e.ratio, SurdValue::rational(expect, d));
        }
    }

    #[test]
    fn split_is_rational_and_complementary() {
        let t = base(1, (2, 1, 1), 2);
        for h in torus_cohomology_full(&t).unwrap() {
            let s = pm_split(&t, &h).unwrap();
            let (p, n) = (&s.plus_projection, &s.minus_projection);
            assert_eq!(p.add(n), QMat::identity(4));
            assert_eq!(p.mul(p), *p);
            assert!(p.mul(n).is_zero());
        }
        let t0 = base(1, (1, 0, 1), 0);
        let h0 = torus_cohomology_full(&t0).unwrap();
        assert!(pm_split(&t0, &h0[0]).is_err());
    }

    #[test]
    fn sr2_certificate() {
        let ring = QuadRing::new(1).unwrap();
        let c = check_prop_sr2(&PlaneLattice::ring_of_integers(&ring), &[1, 2, 3]).unwrap();
        assert!(c.passed);
        assert!(c.constant.is_finite() && c.constant > 0.0);
    }
}
