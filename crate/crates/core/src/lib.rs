//! Numerical workbench for tt* geometry of exponential Landau-Ginzburg
//! superpotentials `w(x) = t [Σ_k c_k e^{kx} + λ x]`.
//!
//! * [`ring`]: critical chains, chiral ring, residue pairing, coupling matrix.
//! * [`ttstar`]: reality and zero-curvature residuals of metric fields.
//! * [`reduction`]: Fourier symbols and Toeplitz truncations of chain metrics.
//! * [`reduced`]: the Laplace phase equation and the SU(1,1) field equation.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the `*64` aliases
//! below fix the double-precision types used by the command line front-end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fourier;
pub mod grid;
pub mod linalg;
pub mod reduced;
pub mod reduction;
pub mod ring;
pub mod scalar;
pub mod ttstar;

pub use error::{Error, Result};
pub use fourier::ThetaGrid;
pub use grid::PlaneGrid;
pub use linalg::CMatrix;
pub use reduction::{
    commutator_identity_residual, d_matrix, fourier_expand, fourier_expand_periodic, fourier_reduce, interior_indices,
    interior_max_norm, invariance_check, model_b_normalization, rescale_d, su11_element, su11_residual,
    symbol_reality_residual, unrescale_d, MetricSymbol, ToeplitzTruncation,
};
pub use ring::{
    coupling_diagonal, coupling_matrix, deformation_b, eta_matrix, eta_pairing, find_critical_chains,
    model_b_constants, polynomial_roots, residue, CriticalChain, CriticalChainSet, ExpPolynomial, RingElement,
};
pub use scalar::{two_pi, Real};
pub use ttstar::{
    reality_residual, single_coupling_flatness_residual, zero_curvature_map, zero_curvature_operator,
    zero_curvature_residual, MetricField,
};

pub type Complex64 = num_complex::Complex<f64>;
pub type CMatrix64 = CMatrix<f64>;
pub type ExpPolynomial64 = ExpPolynomial<f64>;
pub type CriticalChainSet64 = CriticalChainSet<f64>;
pub type RingElement64 = RingElement<f64>;
pub type MetricField64 = MetricField<f64>;
pub type MetricSymbol64 = MetricSymbol<f64>;
pub type ToeplitzTruncation64 = ToeplitzTruncation<f64>;
pub type PhaseField64 = reduced::PhaseField<f64>;
pub type SymbolField64 = reduced::SymbolField<f64>;
pub type ReducedConnection64 = reduced::ReducedConnection<f64>;

pub type CMatrix32 = CMatrix<f32>;
pub type ExpPolynomial32 = ExpPolynomial<f32>;
pub type MetricSymbol32 = MetricSymbol<f32>;
