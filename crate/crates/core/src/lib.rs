//! Exact computational engine for ℤ-graded contact algebras, CR algebras,
//! cores, and homogeneous CR models.

pub mod abscore;
pub mod classify7;
pub mod cralg;
pub mod contact;
pub mod linalg;
pub mod models;
pub mod scalar;
