//! Bivariate means and the inequalities between them.
//!
//! The crate evaluates seven means of two positive reals (harmonic `H`,
//! geometric `G`, arithmetic `A`, quadratic `Q`, Seiffert `P`,
//! logarithmic `L` and identric `I`) in binary64 with stable paths near the
//! diagonal `x = y` and for extreme magnitudes, turns every inequality between
//! them into a signed *margin* (nonnegative when the stated direction holds),
//! and provides an extended-precision oracle that certifies the sign of any
//! margin.  On top of that sits a small search toolkit used to explore the
//! two open conjectures: sign maps, counterexample hunting, sign-change
//! bracketing and per-exponent minimum profiles.
//!
//! Everything here is `no_std` (with `alloc`) and pure: no global state, no
//! IO, and results that do not depend on evaluation order.  The `means-lab`
//! crate adds the command line, report formats and parallel drivers.
//!
//! ```
//! use means_lab_core::{margins, MeanKind, PositivePair};
//!
//! let pair = PositivePair::new(3.0, 1.0).unwrap();
//! let p = means_lab_core::means::eval(MeanKind::P, pair);
//! assert!((p - 6.0 / core::f64::consts::PI).abs() < 1e-15);
//!
//! // Q + H <= 2P fails for large ratios.
//! let m = margins::margin_seiffert_conj(PositivePair::new(100.0, 1.0).unwrap()).unwrap();
//! assert!(m.value < 0.0);
//! ```
#![no_std]
#![warn(missing_docs)]

extern crate alloc;

pub mod error;
pub mod explore;
pub mod kind;
pub mod margins;
pub mod means;
pub mod oracle;
pub mod pair;

pub use error::{DomainError, ExploreError, LemmaError, MarginError, OracleError};
pub use kind::MeanKind;
pub use margins::{InequalityId, Margin, MarginRecord};
pub use means::{EvalPolicy, MeanSet, WorkingFormat};
pub use oracle::{CertifiedSign, CertifyOptions, HpValue, SignOutcome};
pub use pair::{PositivePair, RatioForm};

/// Relative tolerance used when checking proved inequalities in binary64.
///
/// Margins of inequalities that are theorems must satisfy
/// `margin >= -TOL * magnitude`, where `magnitude` is the larger of the two
/// sides.
pub const TOL: f64 = 1e-12;

/// Relative margin below which a binary64 sign is not trusted and the
/// extended-precision oracle is consulted instead.
pub const NEAR_ZERO: f64 = 1e3 * TOL;

/// Decimal digits reported for plain binary64 evaluations.
pub const BINARY64_DIGITS: u32 = 16;
