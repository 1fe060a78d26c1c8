//! Exact computer algebra over prime fields: sparse multivariate polynomials,
//! Buchberger Gröbner bases, ideals of `p^e`-th roots, the level of a
//! polynomial, and the differential operators `δ` with `δ(1/f) = 1/f^p`.
//!
//! The crate is `no_std` (with `alloc`); all arithmetic is exact over `F_p`.
//!
//! ```
//! use frobdiff_core::{ff::Prime, poly::PolyRing};
//! use frobdiff_core::level::level_of;
//! use frobdiff_core::diffop::construct_operator;
//!
//! let ring = PolyRing::new(Prime::new(2).unwrap(), &["x", "y"]);
//! let f = &(&ring.var(0) * &ring.var(1).pow(3)) + &ring.var(0).pow(3);
//! assert_eq!(level_of(&f).unwrap().level(), 4);
//! let delta = construct_operator(&f).unwrap();
//! assert!(delta.verified());
//! ```

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod diffop;
pub mod ec;
pub mod ff;
pub mod froots;
pub mod ideal;
pub mod level;
pub mod poly;

pub use diffop::{AssociatedOperator, DiffOperator, OpTerm};
pub use ec::{CurveClassification, CurveKind, ScanForm, ScanSummary, WeierstrassCoefficients};
pub use ff::{FpElement, Prime};
pub use froots::RootIdeal;
pub use ideal::{GroebnerBasis, IdealBasis, MonomialOrder, OrderKind};
pub use level::{LevelCertificate, LevelOneCertificate, LevelResult};
pub use poly::{FrobeniusDecomposition, Monomial, MultiPoly, PolyRing};
