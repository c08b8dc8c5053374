//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use torsionlab::bianchi::{
    builtin_group, builtin_presentation, coset_table, reidemeister_schreier, PlaneLattice,
    SubgroupSpec, SUPPORTED_D,
};
use torsionlab::cusp_geometry::{
    check_prop_gt19, check_prop_gt28, check_prop_sr2, cheeger_report, random_based_complex,
    reidemeister_torsion, torus_based_complex, Coefficients, TorusBundle,
};
use torsionlab::growth_lab::{
    c_rho, humbert_volume, predicted_bounds, run_sweep, t2_even, SubgroupData, SweepConfig,
};
use torsionlab::integer_homology::check_ub1;
use torsionlab::quad_arith::{
    congruence_index, count_sl2_by_enumeration, Ideal, QuadRing, ResidueRing,
};
use torsionlab::sym_modules::self_duality;
use torsionlab::Result;

const CATALAN: f64 = 0.915_965_594_177_219_015;

/// Relative error allowed on τ for boundary tori and on the Cheeger comparison.
const TORSION_TOL: f64 = 1e-9;
const CONSTANT_TOL: f64 = 1e-12;
const HUMBERT_TOL: f64 = 1e-8;
const BOUND_TOL: f64 = 1e-4;

const SWEEP_BUDGET: Duration = Duration::from_secs(30 * 60);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        passed,
        detail: detail.into(),
    })
}

fn index_formula() -> Result<Outcome> {
    let mut count = 0;
    for d in [1, 2, 3] {
        let ring = QuadRing::new(d)?;
        for ideal in Ideal::enumerate_up_to(&ring, 50) {
            let brute = count_sl2_by_enumeration(&ResidueRing::new(&ideal));
            if congruence_index(&ring, &ideal) != brute {
                return outcome(false, format!("D = {d}, ideal {}", ideal.label()));
            }
            count += 1;
        }
    }
    outcome(true, format!("{count} ideals"))
}

fn norm_below_index() -> Result<Outcome> {
    let mut count = 0;
    for d in [1, 2, 3] {
        let ring = QuadRing::new(d)?;
        for ideal in Ideal::enumerate_up_to(&ring, 50) {
            if ideal.norm() as u64 > congruence_index(&ring, &ideal) {
                return outcome(false, format!("D = {d}, ideal {}", ideal.label()));
            }
            count += 1;
        }
    }
    outcome(true, format!("{count} ideals"))
}

fn relators() -> Result<Outcome> {
    let mut count = 0;
    for d in SUPPORTED_D {
        let p = builtin_presentation(d)?;
        p.check()?;
        count += p.relators.len();
    }
    outcome(true, format!("{count} relators over D ∈ {SUPPORTED_D:?}"))
}

fn ub1_certificates() -> Result<Outcome> {
    let ring = QuadRing::new(1)?;
    let group = builtin_group(1)?;
    let mut certified = 0;
    let mut weight_zero_failures = 0;
    let ideals = Ideal::enumerate_up_to(&ring, 25);
    for ideal in &ideals {
        let spec = SubgroupSpec::principal(ideal.clone());
        let table = coset_table(&group.presentation, &spec)?;
        let gens = reidemeister_schreier(&group.presentation, &table)?
            .simplify(12)
            .presentation
            .matrices;
        for m in 1..=4 {
            let cert = check_ub1(ideal, m, &gens)?;
            if !(cert.passed && cert.verify()) {
                return outcome(false, format!("ideal {}, m = {m}", ideal.label()));
            }
            certified += 1;
        }
        // Weight 0 is reported, not required.
        if !check_ub1(ideal, 0, &gens)?.passed {
            weight_zero_failures += 1;
        }
    }
    outcome(
        true,
        format!(
            "{certified} certificates over {} ideals; m = 0 fails for {weight_zero_failures} (informational)",
            ideals.len()
        ),
    )
}

fn self_duality_check() -> Result<Outcome> {
    for d in [1, 2, 3] {
        let ring = QuadRing::new(d)?;
        let gens = builtin_presentation(d)?.matrices;
        for m in 0..=6 {
            let s = self_duality(&ring, m);
            let ok = s.determinant().is_unit()
                && s.target_is_dual_lattice()
                && gens.iter().all(|g| s.intertwines(g));
            if !ok {
                return outcome(false, format!("D = {d}, m = {m}"));
            }
        }
    }
    outcome(true, "D ∈ {1, 2, 3}, m ≤ 6")
}

fn cusp_rank() -> Result<Outcome> {
    let ring = QuadRing::new(1)?;
    let mut rows = Vec::new();
    for ideal in Ideal::enumerate_up_to(&ring, 10) {
        let spec = SubgroupSpec::principal(ideal.clone());
        if !spec.is_torsion_free() {
            continue;
        }
        let data = SubgroupData::build(&ring, &spec)?;
        for m in [1, 2] {
            let rank = data.homology(m)?.free_rank;
            let kappa = data.cusps.len();
            if rank != 2 * kappa {
                return outcome(
                    false,
                    format!("{} m = {m}: rank {rank}, κ = {kappa}", ideal.label()),
                );
            }
            rows.push(format!("{}:{m}:{rank}", ideal.label()));
        }
    }
    outcome(!rows.is_empty(), rows.join(" "))
}

fn base_lattices() -> Result<Vec<(&'static str, PlaneLattice)>> {
    let r1 = QuadRing::new(1)?;
    let r3 = QuadRing::new(3)?;
    Ok(vec![
        ("O_1", PlaneLattice::ring_of_integers(&r1)),
        ("(1+i)", PlaneLattice::from_hnf(&r1, 2, 1, 1)?),
        ("O_3", PlaneLattice::ring_of_integers(&r3)),
    ])
}

fn covolume_bounds() -> Result<Outcome> {
    let mut checked = 0;
    for (name, lattice) in base_lattices()? {
        for m in 0..=3 {
            let base = TorusBundle::new(&lattice, m)?;
            // Scaling by k gives a cover of index k².
            for k in [1, 2, 3] {
                let cover = base.scaled_cover(k)?;
                for q in 0..3 {
                    if let Err(e) = check_prop_gt19(&base, &cover, q) {
                        return outcome(false, format!("{name} m = {m} k = {k} q = {q}: {e}"));
                    }
                    checked += 1;
                }
                if m >= 1 {
                    if let Err(e) = check_prop_gt28(&base, &cover) {
                        return outcome(false, format!("{name} m = {m} k = {k}: {e}"));
                    }
                    checked += 1;
                }
            }
        }
        let sr2 = check_prop_sr2(&lattice, &[1, 2, 3])?;
        if !sr2.passed {
            return outcome(false, format!("{name}: product identities"));
        }
    }
    outcome(true, format!("{checked} bound checks"))
}

fn boundary_torsion() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for (name, lattice) in base_lattices()? {
        if name == "(1+i)" {
            continue;
        }
        for m in 0..=3 {
            let c = torus_based_complex(&TorusBundle::new(&lattice, m)?, None)?;
            let err = (reidemeister_torsion(&c)? - 1.0).abs();
            worst = worst.max(err);
            if err > TORSION_TOL {
                return outcome(false, format!("{name} m = {m}: |τ − 1| = {err:e}"));
            }
        }
    }
    outcome(true, format!("max |τ − 1| = {worst:.1e}"))
}

fn cheeger() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..100 {
        let c = random_based_complex(&mut rng, 4, 6)?;
        if !cheeger_report(&c)?.consistent {
            return outcome(false, format!("random complex {i}"));
        }
    }
    let mut tori = 0;
    for (name, lattice) in base_lattices()? {
        for m in 0..=3 {
            let t = TorusBundle::new(&lattice, m)?;
            for coeff in [None, Some(Coefficients::Standard), Some(Coefficients::Dual)] {
                if !cheeger_report(&torus_based_complex(&t, coeff)?)?.consistent {
                    return outcome(false, format!("{name} m = {m} {coeff:?}"));
                }
                tori += 1;
            }
        }
    }
    outcome(
        true,
        format!("100 random complexes, {tori} torus complexes"),
    )
}

fn constants() -> Result<Outcome> {
    use std::f64::consts::PI;
    let c1 = (c_rho(1) - 1.5 * 2f64.ln()).abs();
    let t2 = (t2_even(1) + 13.0 / (6.0 * PI)).abs();
    let vol = humbert_volume(1)?;
    let hv = (vol - CATALAN / 3.0).abs();
    let b = predicted_bounds(1, 2)?.bound_lower;
    let bd = (b - 13.0 / (6.0 * PI) * vol).abs().max((b - 0.2106).abs());
    outcome(
        c1 < CONSTANT_TOL && t2 < CONSTANT_TOL && hv < HUMBERT_TOL && bd < BOUND_TOL,
        format!("c_1 {c1:.1e}, t2 {t2:.1e}, vol {hv:.1e}, bound {b:.6}"),
    )
}

fn growth_trend() -> Result<Outcome> {
    let start = Instant::now();
    let report = run_sweep(&SweepConfig::principal(1, 13, vec![2]))?;
    let elapsed = start.elapsed();
    println!("    ideal    index  log|tor|      ratio   lower   2×lower");
    for r in &report.records {
        println!(
            "    {:<8} {:>5}  {:>9.4}  {:>9.6}  {:.4}  {:.4}",
            r.ideal, r.index, r.log_torsion, r.ratio, r.bound_lower, r.bound_upper
        );
    }
    let positive = !report.records.is_empty() && report.records.iter().all(|r| r.ratio > 0.0);
    outcome(
        positive && elapsed < SWEEP_BUDGET,
        format!(
            "{} records, {} skipped by the gate, {:.0} s",
            report.records.len(),
            report.failures.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn determinism() -> Result<Outcome> {
    let dir = tempfile::tempdir()?;
    let run = |name: &str| -> Result<Vec<u8>> {
        let path = dir.path().join(name);
        let mut config = SweepConfig::principal(1, 10, vec![1, 2]);
        config.csv_out = Some(path.clone());
        run_sweep(&config)?;
        Ok(std::fs::read(path)?)
    };
    let (a, b) = (run("a.csv")?, run("b.csv")?);
    let rows = a.iter().filter(|&&c| c == b'\n').count();
    outcome(a == b, format!("{rows} lines, {} bytes", a.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Result<Outcome>); 12] = [
        ("index formula vs enumeration", index_formula),
        ("norm bounded by index", norm_below_index),
        ("relators are the identity", relators),
        ("ub1 inclusion certificates", ub1_certificates),
        ("self-duality of Λ_m", self_duality_check),
        ("cusp rank identity", cusp_rank),
        ("covolume bounds", covolume_bounds),
        ("boundary torsion vanishes", boundary_torsion),
        ("Cheeger consistency", cheeger),
        ("analytic constants", constants),
        ("growth trend report", growth_trend),
        ("deterministic CSV", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (passed, detail) = match f() {
            Ok(o) => (o.passed, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {detail} [{:.1} s]",
            i + 1,
            if passed { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
