//! Exact linear algebra over the integers: Smith normal form, finitely
//! generated abelian groups in invariant-factor form, homomorphisms,
//! subquotients and exactness checks.

pub mod exact;
pub mod group;
pub mod matrix;

pub use exact::{random_free_pair, six_term, CheckMethod, NodeCheck, SixTermSequence};
pub use group::{FgAbelianGroup, GroupHom, Presentation, Subquotient};
pub use matrix::{smith_normal_form, IntMatrix, Snf};
