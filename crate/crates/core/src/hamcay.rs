//! Hamilton operators and Cayley transforms.
//!
//! For a frame of `U` with eigenphases `θ_j ∈ [0, 2π)` the Hamilton operator
//! is `H = F · diag(−θ) · F*`, so that `U = exp(−iH)`. The Cayley transform
//! of a hermitian `H` is `V = (H − iI)(H + iI)⁻¹`; on a frame it reduces to
//! `V = −F · diag((i + θ)/(i − θ)) · F*`.

use std::ops::Deref;

use crate::complexmat::{hs_norm, Matrix, C64, I};
use crate::config::ToleranceConfig;
use crate::eig::{eig_normal, SpectrumKind};
use crate::error::{Error, Result};
use crate::gateseq::{build_frame, Eigenframe};

const HERMITIAN_EPS: f64 = 1e-9;

/// A hermitian matrix `H` with `U = exp(−iH)` for its source unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonOperator(Matrix);

impl HamiltonOperator {
    /// Wraps `h` after checking hermiticity (relative to `max(1, ‖h‖)`).
    pub fn new(h: Matrix) -> Result<Self> {
        check_hermitian("h", &h)?;
        Ok(Self(h))
    }

    pub fn into_inner(self) -> Matrix {
        self.0
    }
}

impl Deref for HamiltonOperator {
    type Target = Matrix;

    fn deref(&self) -> &Matrix {
        &self.0
    }
}

fn check_hermitian(arg: &'static str, h: &Matrix) -> Result<()> {
    let residual = h.hermiticity_residual();
    if residual > HERMITIAN_EPS * hs_norm(h).max(1.0) {
        return Err(Error::NotHermitian { arg, residual });
    }
    Ok(())
}

fn spectral_sum(frame: &Eigenframe, f: impl Fn(f64) -> C64) -> Matrix {
    let diag: Vec<C64> = frame.phases.iter().map(|&t| f(t)).collect();
    &(&frame.columns * &Matrix::diag(&diag)) * &frame.columns.adjoint()
}

/// `H = F · diag(−θ_1, …, −θ_n) · F*`.
pub fn hamiltonian_from_frame(frame: &Eigenframe) -> Result<HamiltonOperator> {
    if frame.kind != SpectrumKind::Unitary {
        return Err(Error::HermitianFrame);
    }
    let h = spectral_sum(frame, |t| C64::new(-t, 0.0));
    // F is unitary to rounding, so H is hermitian to rounding; symmetrise
    let h = (&h + &h.adjoint()).scale(C64::new(0.5, 0.0));
    Ok(HamiltonOperator(h))
}

/// Hamilton operator of a unitary, via its eigenframe.
pub fn hamiltonian(u: &Matrix, cfg: &ToleranceConfig) -> Result<HamiltonOperator> {
    hamiltonian_from_frame(&build_frame(u, cfg)?)
}

/// `exp(−iH)`, computed spectrally.
pub fn unitary_from_hamiltonian(h: &Matrix) -> Result<Matrix> {
    check_hermitian("h", h)?;
    let n = h.dim();
    let pairs = eig_normal(h)?;
    let mut u = Matrix::zeros(n);
    for p in &pairs {
        let phase = C64::from_polar(1.0, -p.value.re);
        for i in 0..n {
            for j in 0..n {
                u[(i, j)] += phase * p.vector[i] * p.vector[j].conj();
            }
        }
    }
    Ok(u)
}

/// `V = (H − iI)(H + iI)⁻¹`, solved as `(H + iI) V = H − iI`; the two factors
/// commute.
pub fn cayley_rational(h: &Matrix) -> Result<Matrix> {
    check_hermitian("h", h)?;
    let shift = Matrix::identity(h.dim()).scale(I);
    let plus = h + &shift;
    let minus = h - &shift;
    plus.solve(&minus)
}

/// `V = −F · diag((i + θ_j)/(i − θ_j)) · F*`.
pub fn cayley_spectral(frame: &Eigenframe) -> Result<Matrix> {
    if frame.kind != SpectrumKind::Unitary {
        return Err(Error::HermitianFrame);
    }
    Ok(spectral_sum(frame, |t| -(I + t) / (I - t)))
}
