use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use torsionlab::bianchi::{
    builtin_presentation, coset_table, reidemeister_schreier, PlaneLattice, SL2Mat, SubgroupSpec,
};
use torsionlab::cusp_geometry::{
    cheeger_report, full_covolume, random_based_complex, torus_cohomology_full, TorusBundle,
};
use torsionlab::growth_lab::t2_even;
use torsionlab::quad_arith::{Ideal, QuadRing, SurdValue};

fn ring() -> QuadRing {
    QuadRing::new(1).unwrap()
}

fn subgroup_generators(spec: &SubgroupSpec) -> Vec<SL2Mat> {
    let p = builtin_presentation(1).unwrap();
    let table = coset_table(&p, spec).unwrap();
    reidemeister_schreier(&p, &table)
        .unwrap()
        .simplify(12)
        .presentation
        .matrices
}

/// Product of the chosen generators, each inverted when its flag is set.
fn word(gens: &[SL2Mat], picks: &[(usize, bool)]) -> SL2Mat {
    let r = ring();
    picks.iter().fold(SL2Mat::identity(), |acc, &(i, inv)| {
        let g = &gens[i % gens.len()];
        acc.mul(&r, &if inv { g.inverse() } else { g.clone() })
    })
}

fn picks() -> impl Strategy<Value = Vec<(usize, bool)>> {
    prop::collection::vec((0usize..64, any::<bool>()), 1..8)
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 60,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn principal_subgroups_are_normal(level in prop::sample::select(vec!["2+i", "1+i", "3", "2"]),
                                      inner in picks(), outer in picks()) {
        let spec = SubgroupSpec::parse(&ring(), &format!("principal:{level}")).unwrap();
        let gamma = word(&subgroup_generators(&spec), &inner);
        prop_assert!(spec.is_member(&gamma));
        let g = word(&builtin_presentation(1).unwrap().matrices, &outer);
        let conj = g.mul(&ring(), &gamma).mul(&ring(), &g.inverse());
        prop_assert!(spec.is_member(&conj));
    }

    #[test]
    fn intersection_lies_in_the_hecke_group(inner in picks(), outer in picks()) {
        let r = ring();
        let ideal = Ideal::parse(&r, "3").unwrap();
        let base = Ideal::parse(&r, "2+i").unwrap();
        let inter = SubgroupSpec::hecke_intersect(ideal.clone(), base);
        let hecke = SubgroupSpec::hecke(ideal);
        let gamma = word(&subgroup_generators(&inter), &inner);
        prop_assert!(inter.is_member(&gamma) && hecke.is_member(&gamma));
        // Random elements of the full group: membership still implies membership.
        let g = word(&builtin_presentation(1).unwrap().matrices, &outer);
        prop_assert!(!inter.is_member(&g) || hecke.is_member(&g));
    }

    #[test]
    fn cheeger_holds_on_random_complexes(seed in any::<u64>(), len in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_based_complex(&mut rng, len, 6).unwrap();
        prop_assert!(cheeger_report(&c).unwrap().consistent);
    }
}

#[test]
fn t2_is_negative_and_decreasing() {
    let mut prev = f64::INFINITY;
    for l in 0..200 {
        let t = t2_even(l);
        assert!(t < 0.0 && t < prev, "ℓ = {l}");
        prev = t;
    }
}

#[test]
fn scaling_follows_the_power_law() {
    // Doubling the lattice is a cover of index 4; ranks of H^0, H^2 over both sides are 4.
    for d in [1, 3] {
        let r = QuadRing::new(d).unwrap();
        let lattice = PlaneLattice::ring_of_integers(&r);
        let sixteen = SurdValue::from_int(16, d);
        for m in 1..=3 {
            let base = TorusBundle::new(&lattice, m).unwrap();
            let cover = base.scaled_cover(2).unwrap();
            assert_eq!(
                cover.volume(),
                base.volume().mul(&SurdValue::from_int(4, d))
            );
            let (hb, hc) = (
                torus_cohomology_full(&base).unwrap(),
                torus_cohomology_full(&cover).unwrap(),
            );
            let ratio = |q| full_covolume(&hc, q).div(&full_covolume(&hb, q));
            assert_eq!(ratio(0), sixteen, "D = {d} m = {m}");
            assert_eq!(ratio(1), SurdValue::one(d), "D = {d} m = {m}");
            assert_eq!(ratio(2), sixteen.inv(), "D = {d} m = {m}");
        }
    }
}
