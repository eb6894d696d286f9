//! Distortion-region bounds for broadcasting a memoryless source over a
//! degraded broadcast channel, with and without decoder side information.
//!
//! The crate is organized around four layers:
//!
//! * scalar information measures ([`info_math`]) and capacity-region
//!   membership tests for Gaussian and binary broadcast channels
//!   ([`channel`]);
//! * closed-form inner/outer distortion bounds for the quadratic-Gaussian
//!   ([`gaussian`]) and Hamming-binary ([`binary`]) specializations;
//! * region geometry shared by every bound: Pareto reduction, lower convex
//!   hulls, and frontier containment ([`region`]);
//! * empirical validation: a brute-force inner-bound search over small
//!   finite alphabets ([`discrete`]) and a seeded Monte Carlo simulator of
//!   the layered hybrid coding scheme together with covering/packing
//!   threshold experiments ([`hybrid`]).

pub mod binary;
pub mod channel;
pub mod discrete;
pub mod gaussian;
pub mod hybrid;
pub mod info_math;
pub mod region;
