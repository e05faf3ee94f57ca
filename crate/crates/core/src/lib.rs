//! Persistent homology of simplicial complexes built from networks.
//!
//! The pipeline is graph → complex → filtration → boundary matrix → barcode:
//!
//! ```
//! use homnet::{complex, filtration, graph::Graph, persistence};
//!
//! let g = Graph::cycle(5);
//! let k = complex::clique_complex(&g, None).unwrap();
//! let f = filtration::skeleton_filtration(&k);
//! let b = persistence::barcode(&f).unwrap();
//! assert_eq!(persistence::betti_at(&b, 1).unwrap(), vec![1, 1]);
//! ```
//!
//! [`oracle`] recomputes the same numbers by dense Gaussian elimination and
//! exists to cross-check the persistence engine.

pub mod barcode_io;
pub mod complex;
pub mod filtration;
pub mod graph;
pub mod netgen;
pub mod oracle;
pub mod persistence;
pub mod rng;
