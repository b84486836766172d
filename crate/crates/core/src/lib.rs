//! Upper bounds on the length scale of a hidden classical substrate that
//! could have carried out a demonstrated computation.
//!
//! A computation of `N_ops` equivalent classical operations in a volume `V3`
//! over a time `T` cannot be reproduced by classical elements spaced more
//! widely than `(V3 c T / N_ops)^(1/4)`. The crate extends that bound to
//! networked labs and to the observable universe (through flat ΛCDM light-cone
//! integrals), and solves for the logical-qubit count at which each bound
//! reaches the Planck length.
//!
//! ```
//! use planckbound::{bounds, quantities::LogQuantity};
//!
//! let gpu = LogQuantity::from_real(3.352e15).unwrap();
//! let l = bounds::max_length(744e-9, 1.0, gpu).unwrap();
//! assert!((l - 5.08e-4).abs() < 1e-6);
//! ```

pub mod bounds;
pub mod config;
pub mod cosmology;
pub mod error;
pub mod figure;
pub mod quadrature;
pub mod quantities;
pub mod thresholds;

pub use error::{Error, Result};
