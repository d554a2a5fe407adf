//! Exact arithmetic for the Carlitz module over F_q[T]: Carlitz factorials, Stirling-Carlitz
//! numbers, Anderson-Thakur polynomials, Bernoulli-Carlitz and multi-poly-Bernoulli-Carlitz
//! numbers, and finite multiple zeta values modulo monic irreducible polynomials.
//!
//! Every quantity is computed exactly, and most are available through two independent
//! routes (a closed formula and a generating series, or a direct sum and a formula) so that
//! the identities connecting them can be checked by comparison.

pub mod anderson_thakur;
pub mod bernoulli;
pub mod bipoly;
pub mod carlitz;
pub mod cli;
pub mod error;
pub mod finite_zeta;
pub mod fq;
pub mod poly;
pub mod ratfunc;
pub mod series;
pub mod stirling;
pub mod text;

pub use anderson_thakur::{ATSeries, AtTable, IndexData, JTuple};
pub use bernoulli::{BernoulliCarlitz, MPBCKey, RecursionWitness};
pub use bipoly::{BiPoly, BiRat};
pub use carlitz::{CarlitzCache, Index};
pub use error::{Error, Result};
pub use finite_zeta::{PrimeModulus, Residue};
pub use fq::{FqElem, FqField};
pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use series::TruncSeries;
pub use stirling::StirlingTable;

/// Power series in z over k = F_q(T).
pub type Series = TruncSeries<RatFunc>;
