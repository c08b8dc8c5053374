//! Exact torsion homology of congruence subgroups of Bianchi groups.
//!
//! The crate is organised bottom-up:
//!
//! * [`quad_arith`]: elements and ideals of imaginary quadratic orders.
//! * [`bianchi`]: presentations of `SL(2, O_D)`, congruence subgroups,
//!   coset tables, Reidemeister–Schreier rewriting and cusps.
//! * [`sym_modules`]: the symmetric-power lattices `Sym^m(O_D^2)`.
//! * [`integer_homology`]: sparse Smith normal form and Fox-calculus homology.
//! * [`cusp_geometry`]: cohomology of cusp tori, covolumes and Reidemeister torsion.
//! * [`growth_lab`]: analytic constants, sweeps and reports.
//!
//! ```
//! use torsionlab::quad_arith::{QuadRing, Ideal};
//!
//! let ring = QuadRing::new(1).unwrap();
//! let p = Ideal::parse(&ring, "1+i").unwrap();
//! assert_eq!(p.norm(), 2);
//! assert_eq!(torsionlab::quad_arith::congruence_index(&ring, &p), 6);
//! ```

pub mod bianchi;
pub mod cusp_geometry;
pub mod error;
pub mod growth_lab;
pub mod int;
pub mod integer_homology;
pub mod linalg;
pub mod quad_arith;
pub mod sym_modules;

pub use error::{Error, Result};
pub use int::Int;

/// Book chapters compiled as doc-tests so the guide cannot drift from the API.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/quadratic_orders.md")]
    pub mod quadratic_orders {}
    #[doc = include_str!("../../../book/src/bianchi_groups.md")]
    pub mod bianchi_groups {}
    #[doc = include_str!("../../../book/src/coefficients.md")]
    pub mod coefficients {}
    #[doc = include_str!("../../../book/src/homology.md")]
    pub mod homology {}
    #[doc = include_str!("../../../book/src/cusps.md")]
    pub mod cusps {}
    #[doc = include_str!("../../../book/src/growth.md")]
    pub mod growth {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
