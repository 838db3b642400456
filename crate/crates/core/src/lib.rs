//! Residue currents on curves in the projective plane and their Radon and
//! Fantappiè transforms.
//!
//! All residues are normalized by `(2πi)^{-m}` unless a function says
//! otherwise; see [`transforms`] for the bookkeeping between the residue
//! pairing and the transforms.

pub mod expr;
pub mod geometry;
pub mod polyalg;
pub mod residues;
pub mod transforms;

pub use num_complex::Complex64;
