//! Outage and error-rate analysis of RIS-assisted terahertz links.
//!
//! The crate is layered bottom-up:
//!
//! - [`special_fns`]: log-domain complex gamma function.
//! - [`foxh`]: Fox H-functions by contour quadrature, plus residue asymptotics.
//! - [`channel`]: α-μ fading, THz pointing errors, phase noise, link budget.
//! - [`analysis`]: closed-form densities, outage and BER built on [`foxh`].
//! - [`montecarlo`]: an independent simulator of the same link.
//! - [`cli`]: TOML-driven curve sweeps writing CSV and a JSON manifest.

pub mod quadrature;
pub mod special_fns;
pub mod foxh;
pub mod channel;
pub mod analysis;
pub mod montecarlo;
pub mod cli;
