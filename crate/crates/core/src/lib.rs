//! Kloosterman sums, Salem-type constants, and hyperbola graphs over finite
//! rings.
//!
//! The crate builds finite rings from a constructor grammar (Z/n, GF(p^k),
//! matrix rings over Galois fields, and direct products), computes the Fourier
//! coefficients of the unit/inverse hyperbola (generalized Kloosterman sums),
//! derives each ring's Kloosterman-Salem number with argmax witnesses, decides
//! extremality exactly through an additive-generation criterion, and builds
//! S-graphs whose spectra come straight from those Fourier coefficients.
//!
//! Modules:
//! - [`ring`]: constructors, exact arithmetic, units, radicals, characters.
//! - [`charsum`]: hyperbola Fourier coefficients and the bound ledger.
//! - [`extremal`]: exact extremality certificates and sum-of-units solvers.
//! - [`sgraph`]: S-graphs, spectra, walks, counting, and graph invariants.

pub mod charsum;
pub mod error;
pub mod extremal;
pub mod ring;
pub mod sgraph;

pub use error::{Error, Result};
pub use ring::{parse_ring_spec, Ring, RingSpec, DEFAULT_SIZE_GUARD};
