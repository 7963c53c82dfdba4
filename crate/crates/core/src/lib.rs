//! Compiles Turing machines into finite sets of edge-coloured heptagons whose
//! finite tilings of the hyperbolic plane exist exactly when the machine
//! halts, and builds, checks, searches and draws those tilings.

pub mod checker;
pub mod harp;
pub mod heptagrid;
pub mod machine;
pub mod reduction;
pub mod render;
pub mod search;
