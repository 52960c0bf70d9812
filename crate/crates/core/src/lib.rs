//! Uncertainty bounds for pairs of quantum channels measured by
//! Wigner–Yanase skew information.
//!
//! For a state `ρ` and channels `N₁ = {E_i}`, `N₂ = {F_j}` the crate computes
//! `I(ρ, N₁)·I(ρ, N₂)` and `I(ρ, N₁) + I(ρ, N₂)`, the Cauchy–Schwarz lower
//! bound `¼ Σ_ij |Tr([√ρ,E_i]†[√ρ,F_j])|²`, and the chains of intermediate
//! bounds between them built from the columns of the commutators `[√ρ, K]`.
//!
//! ```
//! use skewchain::chain::{BoundChain, SReading};
//! use skewchain::example::{example_channels, rho_theta};
//!
//! let (n1, n2) = example_channels(0.5, 0.5)?;
//! let chain = BoundChain::compute(&rho_theta(1.0)?, &n1, &n2, SReading::PairResolved)?;
//! assert!(chain.product >= chain.i_values[0]);
//! assert!((chain.i_values[3] - chain.lemma1).abs() < 1e-12);
//! # Ok::<(), skewchain::Error>(())
//! ```
//!
//! Modules:
//! - [`matrix`]: complex matrices, Hermitian eigensolver, PSD square roots.
//! - [`quantum`]: validated states and Kraus channels, seeded random sampling.
//! - [`skew`]: skew information of operators, observables and channels.
//! - [`chain`]: the bound chains, relabelling search and verification.
//! - [`example`]: the two-qubit worked example and its parameter sweeps.
//! - [`io`]: JSON interchange for states and channels.
//! - [`cli`]: the `skewchain` command-line front end.

pub mod chain;
pub mod cli;
pub mod error;
pub mod example;
pub mod io;
pub mod matrix;
pub mod quantum;
pub mod skew;

pub use error::{Error, Result};
