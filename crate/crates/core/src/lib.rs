//! Exact generalized Wronskians of multivariate functions.
//!
//! The crate is organised around a handful of modules:
//!
//! * [`wordcomb`]: words over the alphabet `{1, ..., p}`, word sets, full sets and
//!   characteristic sequences.
//! * [`polyring`]: sparse multivariate polynomials and truncated series over the
//!   rationals, partial derivatives, Leibniz and composition formulas.
//! * [`jetdiff`]: differential polynomials in jet variables `u_{j,α}`.
//! * [`wronskian`]: assembly and evaluation of generalized Wronskians.
//! * [`vandermonde`]: geometric Vandermonde determinants and the certification of
//!   their zero sets.
//! * [`dependence`]: the linear-dependence decision procedure for polynomial families.
//! * [`fermat`]: the Wronskian identities used for Fermat hypersurfaces.
//!
//! All arithmetic is exact; there is no floating point in any decision path.

pub mod det;
pub mod dependence;
pub mod error;
pub mod fermat;
pub mod jetdiff;
pub mod linalg;
pub mod polyring;
pub mod rational;
pub mod vandermonde;
pub mod wordcomb;
pub mod wronskian;

pub use error::{Error, Result};
pub use jetdiff::{DiffPoly, JetSpace, JetVar, Multidegree};
pub use polyring::{ExponentOrder, Polynomial, TruncatedSeries};
pub use rational::Rat;
pub use wordcomb::{CharSequence, Word, WordSet};
pub use wronskian::WronskianCombination;

