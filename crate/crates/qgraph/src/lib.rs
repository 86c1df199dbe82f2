//! Complex-weighted digraphs and the quantum states they represent.
//!
//! Three digraph flavors (unit-modulus edge weights, complex vertex weights,
//! and edge weights with positive real loops) map to density matrices through
//! their combinatorial or signless Laplacians, `sigma_G = K(G)/trace(K(G))`.
//! The crate provides:
//!
//! - [`graph`]: the graph model and structural queries;
//! - [`dsl`]: the `.qg` text format parser and canonical serializer;
//! - [`spectra`]: dense complex matrices, a cyclic Jacobi Hermitian
//!   eigensolver, Kronecker products and the two-qubit partial transpose;
//! - [`laplacians`]: adjacency/Laplacian/incidence constructions and the
//!   path-weight zero-eigenvalue predicates;
//! - [`states`]: density matrices, purity classification, spectral mixtures,
//!   and the Peres-Horodecki separability test;
//! - [`entanglers`]: generalized graph products, Bell and Werner state
//!   generation, and a randomized separability experiment;
//! - [`analogies`]: diffusion flow, random-walk stationary distributions, and
//!   the linear-subgraph determinant/permanent expansions;
//! - [`fuzz`]: seeded random graph generation for the property suites.

pub mod analogies;
pub mod dsl;
pub mod entanglers;
pub mod fuzz;
pub mod graph;
pub mod laplacians;
pub mod spectra;
pub mod states;

pub use graph::{GraphKind, WeightedDigraph};
pub use laplacians::MatrixFlavor;
pub use spectra::{Complex, ComplexMatrix};
pub use states::DensityMatrix;
