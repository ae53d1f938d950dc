//! Binary quartic forms and lines of `PG(3,q)` relative to the twisted
//! cubic, over finite fields of characteristic at least 5.
//!
//! The crate provides exact field arithmetic, invariants and orbit
//! classification of binary quartics under `PGL2(q)`, the Klein-quadric
//! model of lines with its polar duality and projection to quartics, and
//! exhaustive orbit censuses that check closed-form orbit counts.

pub mod census;
pub mod error;
pub mod field_tower;
pub mod klein;
pub mod linalg;
pub mod poly;
pub mod projective;
pub mod quartic;
pub mod rep_theory;

pub use error::{Error, Result};
pub use field_tower::{make_field, Ext, ExtCtx, FieldCtx, FieldElem, Fq};
pub use klein::{Line, LineLabel};
pub use poly::Poly;
pub use quartic::QuarticLabel;
