//! Cusp cross-section tori `Λ_P \ C` with coefficients in `Λ_m` and its dual.

mod bounds;
mod lattice;
mod periods;
mod torsion;
mod torus;

pub use bounds::{
    check_prop_gt19, check_prop_gt28, check_prop_sr2, gt19_report, gt28_reports,
    lie_algebra_dimension, pm_split, sr2_entry, BoundCheck, CoverPair, CovolumeReport, Part,
    PlusMinusSplit, Sr2Certificate, Sr2Entry,
};
pub use lattice::{covolume, covolume_f64, lattice_basis, HarmonicLattice};
pub use periods::{
    cusp_width_factor, dual_period_minus, dual_period_plus, period_integral_minus,
    period_integral_plus,
};
pub use torsion::{
    cheeger_consistency, cheeger_report, integral_cohomology, log_reidemeister_torsion,
    random_based_complex, reidemeister_torsion, torus_based_complex, BasedComplexR, CheegerReport,
    IntegralCohomology, CHEEGER_TOLERANCE,
};
pub use torus::{
    full_covolume, harmonic_coordinates, koszul_complex, torus_cohomology, torus_cohomology_full,
    Coefficients, KoszulComplex, TorusBundle, TorusCohomology,
};
