//! Analysis and construction of substitution boxes.
//!
//! The crate has four layers:
//!
//! - [`boolfn`] — truth tables, Walsh/Möbius/autocorrelation transforms,
//!   difference tables and GF(2) linear algebra for vectorial Boolean
//!   functions up to 16 variables;
//! - [`metrics`] — the security properties of an S-box (nonlinearity,
//!   algebraic degree and immunity, differential uniformity, robustness,
//!   autocorrelation indicators, and the side-channel indicators SNR,
//!   transparency order and confusion coefficients);
//! - [`search`] — enumeration and genetic search over linear combinations
//!   of an initial S-box's coordinate functions, filtering candidates that
//!   keep the initial box's profile while improving side-channel metrics;
//! - [`oracle`] — deliberately naive reference implementations used to
//!   cross-check every fast path.
//!
//! The crate is `no_std` (with `alloc`); IO and the command-line front end
//! live in the companion `sboxkit-cli` crate.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod boolfn;
pub mod metrics;
pub mod oracle;
pub mod search;

mod error;

pub use error::{Error, Result};
