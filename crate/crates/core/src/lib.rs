//! Hermitian self-orthogonal codes over GF(q²) from genus-0 and curve
//! evaluation constructions, with matrix-level certification and the
//! quantum stabilizer parameters they induce.

pub mod field;
pub mod points;
pub mod curves;
pub mod codes;
pub mod constructions;
pub mod quantum;
pub mod catalog;
