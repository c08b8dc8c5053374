//! Bianchi groups, congruence subgroups, coset tables and cusps.

mod builtin;
mod coset;
mod cusp;
mod presentation;
mod rewrite;
mod shape;
mod sl2;
mod subgroup;

pub use builtin::{builtin_group, builtin_presentation, BuiltinGroup, SUPPORTED_D};
pub use coset::{coset_table, coset_table_with_order, default_letter_order, CosetTable};
pub use cusp::{cusps, parabolic_lattice, CuspData};
pub use presentation::{
    commutator, cyclic_reduce, eval_word, free_reduce, gen_of, invert_word, letter, power, Letter,
    Presentation, Word,
};
pub use rewrite::{reidemeister_schreier, SubgroupPresentation};
pub use shape::{unimodular_shape, LatticeShape, PlaneLattice};
pub use sl2::SL2Mat;
pub use subgroup::{SubgroupKind, SubgroupSpec};
