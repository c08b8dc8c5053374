mod cocycle;
mod fox;
mod homology;
mod snf;
mod sparse;
mod ub1;

pub use cocycle::{
    cocycle_space, evaluate_cocycle, h1_dimension, restrict_to_cusp, restriction_rank,
    CocycleSpace, CuspCocycle,
};
pub use fox::{fox_complex, fox_complex_sym, trivial_action, unimodular_inverse, ChainComplexZ};
pub use homology::{
    coinvariants, homology, homology_all, homology_via_kernel_lattice, HomologySummary,
};
pub use snf::{
    integer_kernel, smith_with_transforms, snf, snf_dense, SmithDecomposition, SmithForm,
};
pub use sparse::IntMatrix;
pub use ub1::{check_ub1, scaled_ideal_lattice, ub1_log_bounds, TrackedLattice, Ub1Certificate};

#[cfg(test)]
mod tests;
