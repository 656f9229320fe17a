//! Capitulation kernels of Σ-ideal class groups for quadratic extensions
//! `K/F` of quadratic number fields, computed through the Galois
//! cohomology of the Σ-unit group of `K` and cross-checked against an
//! ideal-theoretic oracle.
//!
//! The crate is layered bottom-up:
//!
//! * [`abelian`]: finitely generated abelian groups, homomorphisms and the
//!   six-term kernel/cokernel sequence, all on top of an exact Smith normal
//!   form.
//! * [`cohomology`]: modules over a finite cyclic group, Tate cohomology, the
//!   norm subgroup `Ψ_N` and the four-term 2-torsion sequence.
//! * [`quadfield`]: quadratic fields, ideals, class groups, fundamental units
//!   and S-unit groups.
//! * [`biquad`]: biquadratic fields viewed as quadratic extensions of one of
//!   their subfields, unit and S-unit modules with their Galois action.
//! * [`capitulation`]: the capitulation pipeline and its reports.
//! * [`cli`]: batch front end used by the `quadcap` binary.

pub mod abelian;
pub mod biquad;
pub mod capitulation;
pub mod cli;
pub mod cohomology;
pub mod error;
pub mod quadfield;
pub mod serial;
pub mod arith;

pub use error::{Error, Result};
