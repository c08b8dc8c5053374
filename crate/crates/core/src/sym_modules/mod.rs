//! The lattices `Λ_m = Sym^m(O_D²)` with the action of `SL(2, O_D)`.
//!
//! `Λ_m` is stored over `Z` with rank `2(m+1)`: coordinate `2j + k` is the
//! coefficient of `ω^k v_j`, where `v_j = e1^j e2^(m−j)`.

mod action;
mod duality;

pub use action::{
    dual_action, o_matrix_to_z, rho_action, rho_o, rho_of_word_table, FVec, ModuleMap,
    SymPowerLattice,
};
pub use duality::{adjoint_inverse, pairing, self_duality, weighted_pairing, DualityIso};
