//! Eigenvector sequences of quantum gates.
//!
//! Starting from a unitary `U_0`, each step replaces the current gate by the
//! unitary whose columns are its (normalised, phase-fixed, ordered)
//! eigenvectors: `U_{k+1} = F(U_k)`. Alongside the sequence the crate
//! computes the Hamilton operators `H_k` with `U_k = exp(−iH_k)`, their
//! Cayley transforms, Hilbert-Schmidt distances between gates, and the gate
//! compositions (Kronecker product, direct sum, star product) under which
//! `F` may distribute.
//!
//! ```
//! use eigenseq::{build_frame, gate, Gate, ToleranceConfig};
//!
//! let cfg = ToleranceConfig::default();
//! let frame = build_frame(&gate(Gate::SigmaX), &cfg).unwrap();
//! assert!(frame.columns.max_abs_diff(&gate(Gate::Hadamard)) < 1e-15);
//! ```
//!
//! The guide in `book/` walks through the construction chapter by chapter;
//! its code listings are compiled and run as doctests.

pub mod cli;
pub mod complexmat;
pub mod compose;
pub mod config;
pub mod eig;
pub mod error;
pub mod gateseq;
pub mod hamcay;
pub mod trace;

pub use complexmat::{
    hs_distance, hs_inner, hs_norm, is_hermitian, is_unitary, phase_min_distance, Matrix, C64,
};
pub use compose::{
    check_distributivity, direct_sum, gate, kronecker, parse_gate, so11_boost, star,
    CompositionKind, DistributivityReport, Gate,
};
pub use config::ToleranceConfig;
pub use eig::{
    cluster_eigenvalues, eig_normal, gram_schmidt_projected, EigenCluster, EigenPair, SpectrumKind,
};
pub use error::{Error, Result};
pub use gateseq::{
    build_frame, closed_form_step_2x2, compare_lex, iterate_sequence, phase_fix,
    ConvergenceReport, Eigenframe, SequenceState, StopReason,
};
pub use hamcay::{
    cayley_rational, cayley_spectral, hamiltonian, hamiltonian_from_frame,
    unitary_from_hamiltonian, HamiltonOperator,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/eigenframe.md")]
    mod eigenframe {}
    #[doc = include_str!("../../../book/src/sequence.md")]
    mod sequence {}
    #[doc = include_str!("../../../book/src/hamiltonians.md")]
    mod hamiltonians {}
    #[doc = include_str!("../../../book/src/composition.md")]
    mod composition {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
