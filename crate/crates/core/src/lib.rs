//! Finite groupoids with executable checks: Morita equivalence, principal
//! bundles, bibundles, and gerbe certificates of groupoid extensions.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod format;
pub mod group;
pub mod groupoid;
pub mod iso;
pub mod quotient;
pub mod report;
pub mod search;
pub mod workspace;
pub mod action;
pub mod bibundle;
pub mod bundle;
pub mod cli;
pub mod construct;
pub mod corpus;
pub mod functor;
pub mod gerbe;
pub mod morita;
