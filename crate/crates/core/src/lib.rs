//! Gaussian pseudorandom samples from sums of binary pseudonoise sequences.
//!
//! Bits come from maximum-length LFSRs ([`lfsr`], [`sequences`]) over GF(2)
//! arithmetic in [`galois`]; [`grng`] turns them into approximately normal
//! samples; [`analysis`] and [`bounds`] measure how close they are.
pub mod analysis;
pub mod bits;
pub mod bounds;
pub mod cli;
pub mod galois;
pub mod grng;
pub mod lfsr;
pub mod sequences;
