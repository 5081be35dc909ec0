//! Area-universality analysis for plane triangulations and construction of
//! straight-line drawings with prescribed face areas.
//!
//! The pipeline: a [`PlaneTriangulation`] is split along separating
//! triangles ([`triangulation::decompose`]); every 4-connected piece gets a
//! predecessor order ([`porder::find_porder`]), from which every vertex
//! coordinate becomes a rational function of one free parameter
//! ([`symbolic::SymbolicPlacement`]). The area of the last face is then a
//! univariate rational function whose degree structure decides the verdict
//! ([`symbolic::analyze`]) and whose real roots give drawings
//! ([`realizer::realize`]).

pub mod cli_io;
pub mod exactmath;
pub mod generators;
pub mod porder;
pub mod realizer;
pub mod symbolic;
pub mod triangulation;

pub use exactmath::{Polynomial, Rational, RationalFunction};
pub use triangulation::PlaneTriangulation;
