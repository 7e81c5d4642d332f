//! Exact toric fan factorization and square-zero cohomology invariants.

pub mod fankit;
pub mod lattice;
pub mod par;
pub mod poly;
pub mod squarezero;
pub mod recovery;
pub mod oracle;
pub mod sample;
pub mod acceptance;
