use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bianchi::{PlaneLattice, SubgroupSpec};
use crate::cusp_geometry::{
    check_prop_gt19, check_prop_gt28, check_prop_sr2, cheeger_report, log_reidemeister_torsion,
    random_based_complex, torus_based_complex, TorusBundle,
};
use crate::error::{Error, Result};
use crate::int::Int;
use crate::integer_homology::{snf, snf_dense, IntMatrix};
use crate::linalg::ZMat;
use crate::quad_arith::QuadRing;

use super::pipeline::SubgroupData;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Snf,
    Cusp,
    Torsion,
    Bounds,
}

impl std::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "snf" => Suite::Snf,
            "cusp" => Suite::Cusp,
            "torsion" => Suite::Torsion,
            "bounds" => Suite::Bounds,
            _ => {
                return Err(Error::Parse {
                    what: "suite",
                    input: s.into(),
                    reason: "expected all|snf|cusp|torsion|bounds".into(),
                })
            }
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteCheck {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(suite: &'static str, name: impl Into<String>, r: Result<bool>) -> SuiteCheck {
    let name = name.into();
    match r {
        Ok(passed) => SuiteCheck {
            suite,
            name,
            passed,
            detail: String::new(),
        },
        Err(e) => SuiteCheck {
            suite,
            name,
            passed: false,
            detail: e.to_string(),
        },
    }
}

fn snf_suite() -> Vec<SuiteCheck> {
    let mut out = Vec::new();
    let m = ZMat::from_rows(&[vec![2i64, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let s = snf_dense(&m);
    out.push(check(
        "snf",
        "invariant factors 2, 6, 12",
        Ok(s.torsion == vec![Int::from(2), Int::from(6), Int::from(12)]),
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let agree = (0..20).all(|_| {
        use rand::Rng;
        let (r, c) = (rng.gen_range(1..7), rng.gen_range(1..7));
        let rows: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..c).map(|_| rng.gen_range(-5..=5)).collect())
            .collect();
        let z = ZMat::from_rows(&rows);
        let a = snf(&IntMatrix::from_dense(&z));
        let b = snf_dense(&z.transpose());
        a.rank() == b.rank() && a.torsion == b.torsion
    });
    out.push(check(
        "snf",
        "sparse form agrees with the transpose",
        Ok(agree),
    ));
    out
}

fn cusp_suite() -> Vec<SuiteCheck> {
    let run = || -> Result<bool> {
        let ring = QuadRing::new(1)?;
        let data = SubgroupData::build(&ring, &SubgroupSpec::parse(&ring, "principal:2+i")?)?;
        let h = data.homology(1)?;
        Ok(data.cusps.len() == 6 && h.free_rank == 2 * data.cusps.len())
    };
    vec![check(
        "cusp",
        "Γ((2+i)) over Z[i]: six cusps, rank H_1 = 2κ at m = 1",
        run(),
    )]
}

fn torsion_suite() -> Vec<SuiteCheck> {
    let mut out = Vec::new();
    for d in [1, 3] {
        let r = (|| -> Result<bool> {
            let ring = QuadRing::new(d)?;
            let lattice = PlaneLattice::ring_of_integers(&ring);
            for m in 0..4 {
                let c = torus_based_complex(&TorusBundle::new(&lattice, m)?, None)?;
                if log_reidemeister_torsion(&c)?.abs() >= 1e-9 || !cheeger_report(&c)?.consistent {
                    return Ok(false);
                }
            }
            Ok(true)
        })();
        out.push(check(
            "torsion",
            format!("boundary torsion and Cheeger on O_{d}, m ≤ 3"),
            r,
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let r = (|| -> Result<bool> {
        for _ in 0..25 {
            if !cheeger_report(&random_based_complex(&mut rng, 3, 6)?)?.consistent {
                return Ok(false);
            }
        }
        Ok(true)
    })();
    out.push(check("torsion", "Cheeger on random complexes", r));
    out
}

fn bounds_suite() -> Vec<SuiteCheck> {
    let mut out = Vec::new();
    for (d, hnf) in [(1, (1, 0, 1)), (1, (2, 1, 1)), (3, (1, 0, 1))] {
        let r = (|| -> Result<bool> {
            let ring = QuadRing::new(d)?;
            let lattice = PlaneLattice::from_hnf(&ring, hnf.0, hnf.1, hnf.2)?;
            for m in 1..3 {
                let base = TorusBundle::new(&lattice, m)?;
                for k in [1, 2] {
                    let cover = base.scaled_cover(k)?;
                    for q in 0..3 {
                        check_prop_gt19(&base, &cover, q)?;
                    }
                    check_prop_gt28(&base, &cover)?;
                }
            }
            Ok(check_prop_sr2(&lattice, &[1, 2])?.passed)
        })();
        out.push(check(
            "bounds",
            format!("covolume bounds, D = {d}, lattice {hnf:?}"),
            r,
        ));
    }
    out
}

pub fn run_suite(suite: Suite) -> Vec<SuiteCheck> {
    match suite {
        Suite::Snf => snf_suite(),
        Suite::Cusp => cusp_suite(),
        Suite::Torsion => torsion_suite(),
        Suite::Bounds => bounds_suite(),
        Suite::All => [snf_suite(), cusp_suite(), torsion_suite(), bounds_suite()].concat(),
    }
}
