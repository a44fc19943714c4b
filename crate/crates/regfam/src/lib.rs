//! Regular families of finite subsets of ℕ, their Cantor normal form
//! indices, Schreier/Tsirelson-type norms and Ramsey-type witnesses.

pub mod cli;
pub mod dsl;
pub mod family;
pub mod index;
pub mod normspace;
pub mod ordinal;
pub mod ramsey;
pub mod selftest;

pub use family::{Family, FinSet};
pub use ordinal::Ordinal;
