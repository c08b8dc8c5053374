use std::collections::BTreeMap;

use serde::Serialize;

use super::constants::predicted_bounds;
use crate::bianchi::{
    builtin_group, coset_table, cusps, parabolic_lattice, reidemeister_schreier, BuiltinGroup,
    CosetTable, CuspData, PlaneLattice, SL2Mat, SubgroupKind, SubgroupPresentation, SubgroupSpec,
};
use crate::cusp_geometry::{
    check_prop_sr2, cheeger_report, gt19_report, gt28_reports, log_reidemeister_torsion,
    torus_based_complex, CoverPair, TorusBundle,
};
use crate::error::{Error, Result};
use crate::integer_homology::{check_ub1, fox_complex, homology, HomologySummary};
use crate::quad_arith::{congruence_index, QuadRing};
use crate::sym_modules::rho_of_word_table;

/// Names of the exact checks attached to every record, in report order.
pub const CHECK_NAMES: [&str; 7] = ["ub1", "ei1", "gt19", "gt28", "sr2", "cheeger", "gt35"];

/// Tolerance on `|log τ|` for boundary tori.
pub const BOUNDARY_TORSION_TOLERANCE: f64 = 1e-9;

/// A torsion-free subgroup of `SL(2, O_D)` with its presentation and cusps.
pub struct SubgroupData {
    pub ring: QuadRing,
    pub spec: SubgroupSpec,
    pub group: BuiltinGroup,
    pub table: CosetTable,
    pub presentation: SubgroupPresentation,
    pub cusps: Vec<CuspData>,
}

impl SubgroupData {
    /// Runs the torsion-freeness gate, coset enumeration, rewriting and cusp search.
    pub fn build(ring: &QuadRing, spec: &SubgroupSpec) -> Result<Self> {
        if !spec.is_torsion_free() {
            return Err(Error::NotTorsionFree(spec.label()));
        }
        let group = builtin_group(ring.d())?;
        let table = coset_table(&group.presentation, spec)?;
        let presentation = reidemeister_schreier(&group.presentation, &table)?.simplify(12);
        let cusps = cusps(&group, &table)?;
        Ok(SubgroupData {
            ring: *ring,
            spec: spec.clone(),
            group,
            table,
            presentation,
            cusps,
        })
    }

    pub fn index(&self) -> usize {
        self.table.index
    }

    /// Index of the image in `PSL(2, O_D)`.
    pub fn psl_index(&self) -> usize {
        let minus = SL2Mat::from_ints([(-1, 0), (0, 0), (0, 0), (-1, 0)]);
        if self.spec.is_member(&minus) {
            self.index()
        } else {
            self.index() / 2
        }
    }

    pub fn homology(&self, m: usize) -> Result<HomologySummary> {
        let p = &self.presentation.presentation;
        let act = rho_of_word_table(&self.ring, &p.matrices, m);
        Ok(homology(&fox_complex(p, &act)?, 1))
    }

    /// Distinct parabolic lattices over all cusps, in cusp order.
    pub fn cusp_lattices(&self) -> Result<Vec<PlaneLattice>> {
        let mut out: Vec<PlaneLattice> = Vec::new();
        for c in &self.cusps {
            let l = parabolic_lattice(&self.spec, c)?;
            if !out.iter().any(|o| o.same_lattice(&l)) {
                out.push(l);
            }
        }
        Ok(out)
    }
}

/// One `(subgroup, m)` measurement.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentRecord {
    pub d: i64,
    pub subgroup: String,
    pub ideal: String,
    pub norm: i64,
    pub index: usize,
    pub kappa: usize,
    pub m: usize,
    pub h1_rank: usize,
    pub torsion_factors: Vec<String>,
    pub log_torsion: f64,
    /// `log |H_1 tor| / index`.
    pub ratio: f64,
    pub bound_lower: f64,
    pub bound_upper: f64,
    pub checks: BTreeMap<String, bool>,
    pub checks_passed: bool,
}

/// `gt19`, `gt28`, `sr2`, `cheeger` and `gt35` on one cusp lattice against `O_D`.
pub fn cusp_checks(lattice: &PlaneLattice, m: usize) -> Result<BTreeMap<&'static str, bool>> {
    let ring = lattice.ring();
    let base = TorusBundle::new(&PlaneLattice::ring_of_integers(ring), m)?;
    let cover = TorusBundle::new(lattice, m)?;
    let pair = CoverPair::new(&base, &cover)?;
    let mut out = BTreeMap::new();
    out.insert("gt19", (0..3).all(|q| gt19_report(&pair, q).passed()));
    let gt28 = m >= 1 && gt28_reports(&pair)?.iter().all(|r| r.passed());
    out.insert("gt28", gt28);
    out.insert("sr2", m >= 1 && check_prop_sr2(lattice, &[m])?.passed);
    let complex = torus_based_complex(&cover, None)?;
    out.insert("cheeger", cheeger_report(&complex)?.consistent);
    out.insert(
        "gt35",
        log_reidemeister_torsion(&complex)?.abs() < BOUNDARY_TORSION_TOLERANCE,
    );
    Ok(out)
}

/// The level whose principal congruence subgroup contains the subgroup.
fn principal_level(spec: &SubgroupSpec) -> &crate::quad_arith::Ideal {
    match spec.kind {
        SubgroupKind::HeckeIntersect => spec.base.as_ref().expect("intersection has a base"),
        _ => &spec.ideal,
    }
}

pub fn measure(data: &SubgroupData, m: usize) -> Result<ExperimentRecord> {
    if m == 0 {
        return Err(Error::Degenerate(
            "weight 0 is outside the growth theorems".into(),
        ));
    }
    let d = data.ring.d();
    let h1 = data.homology(m)?;
    let index = data.index();
    let level = principal_level(&data.spec);

    let mut checks: BTreeMap<String, bool> = BTreeMap::new();
    let ub1 = check_ub1(level, m, &data.presentation.presentation.matrices)?;
    checks.insert("ub1".into(), ub1.passed);
    let principal_index = congruence_index(&data.ring, level);
    checks.insert("ei1".into(), level.norm() as u64 <= principal_index);
    let mut cusp_flags: BTreeMap<&str, bool> =
        CHECK_NAMES[2..].iter().map(|&n| (n, true)).collect();
    for l in data.cusp_lattices()? {
        for (name, ok) in cusp_checks(&l, m)? {
            *cusp_flags.get_mut(name).expect("known check") &= ok;
        }
    }
    checks.extend(cusp_flags.into_iter().map(|(k, v)| (k.to_string(), v)));

    let bounds = predicted_bounds(d, m)?;
    let checks_passed = checks.values().all(|&b| b);
    Ok(ExperimentRecord {
        d,
        subgroup: data.spec.label(),
        ideal: data.spec.ideal.label(),
        norm: data.spec.ideal.norm(),
        index,
        kappa: data.cusps.len(),
        m,
        h1_rank: h1.free_rank,
        torsion_factors: h1.torsion_factors.iter().map(|x| x.to_string()).collect(),
        log_torsion: h1.log_torsion_order,
        ratio: h1.log_torsion_order / index as f64,
        bound_lower: bounds.bound_lower,
        bound_upper: bounds.bound_upper,
        checks,
        checks_passed,
    })
}
