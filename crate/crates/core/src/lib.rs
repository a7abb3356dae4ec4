//! Exact Ricci curvature for strongly connected weighted digraphs.
//!
//! The library builds, over exact rational arithmetic, the mean transition
//! kernel of a strongly connected weighted digraph — the average of the
//! out-random-walk kernel and its Perron-measure time reversal — and derives
//! from it the coupling-based Ricci curvature, its variational limit-free
//! form, mean curvatures, Cartesian-product structure, curvature-dimension
//! inequalities, and the spectral/volume/isoperimetric comparison theorems
//! those quantities satisfy.  Every theorem ships with a checker that
//! verifies it on arbitrary valid input.

pub mod comparisons;
pub mod curvature;
pub mod digraph;
pub mod exactnum;
pub mod markov;
pub mod operators;
pub mod product;
pub mod report;
pub mod spectral;
pub mod transport;

pub use exactnum::Rational;
