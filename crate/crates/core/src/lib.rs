//! Exact clearing for financial networks with debt contracts and credit
//! default swaps.
//!
//! The crate covers the network model and clearing function, the clamped
//! interval calculus used to analyse the gate gadgets, Pure-Circuit
//! compilation into gadget networks, and three solvers: fictitious default for
//! debt-only networks (plus the covered-CDS transformation), exhaustive
//! mixed-binary LP search for central-CDS-debtor networks, and a damped
//! fixed-point iteration for general networks.

pub mod circuit;
pub mod claims;
pub mod cli;
pub mod compile;
pub mod covered;
pub mod error;
pub mod examples;
pub mod fixed_point;
pub mod interval;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod mblp;
pub mod network;
pub mod params;
pub mod rational;

pub use error::{Error, Result};
pub use network::{ClearingReport, FinancialNetwork, NetworkBuilder};
pub use rational::Rational;
