//! Gate constructors and the ways of combining gates: Kronecker product,
//! direct sum and the star product.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::complexmat::{c, hs_distance, Matrix, C64, ONE, ZERO};
use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::gateseq::build_frame;

/// Standard block layout: block `(i, j)` is `a_ij · b`.
pub fn kronecker(a: &Matrix, b: &Matrix) -> Matrix {
    let (m, n) = (a.dim(), b.dim());
    Matrix::from_fn(m * n, |i, j| a[(i / n, j / n)] * b[(i % n, j % n)])
}

/// Block-diagonal `diag(a, b)`.
pub fn direct_sum(a: &Matrix, b: &Matrix) -> Matrix {
    let m = a.dim();
    Matrix::from_fn(m + b.dim(), |i, j| match (i < m, j < m) {
        (true, true) => a[(i, j)],
        (false, false) => b[(i - m, j - m)],
        _ => ZERO,
    })
}

/// Star product of a 2×2 matrix with an n×n matrix: `a` on the four corners,
/// `b` in the central block.
pub fn star(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.dim() != 2 {
        return Err(Error::InvalidParameter(format!(
            "star product needs a 2x2 left factor, got {0}x{0}",
            a.dim()
        )));
    }
    let n = b.dim();
    let last = n + 1;
    Ok(Matrix::from_fn(n + 2, |i, j| {
        let edge_i = i == 0 || i == last;
        let edge_j = j == 0 || j == last;
        match (edge_i, edge_j) {
            (true, true) => a[((i != 0) as usize, (j != 0) as usize)],
            (false, false) => b[(i - 1, j - 1)],
            _ => ZERO,
        }
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompositionKind {
    Kronecker,
    DirectSum,
    Star,
}

impl CompositionKind {
    pub fn apply(self, a: &Matrix, b: &Matrix) -> Result<Matrix> {
        match self {
            CompositionKind::Kronecker => Ok(kronecker(a, b)),
            CompositionKind::DirectSum => Ok(direct_sum(a, b)),
            CompositionKind::Star => star(a, b),
        }
    }
}

impl FromStr for CompositionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kronecker" | "kron" => Ok(Self::Kronecker),
            "direct_sum" | "direct-sum" | "dsum" => Ok(Self::DirectSum),
            "star" => Ok(Self::Star),
            other => Err(Error::InvalidParameter(format!("unknown composition `{other}`"))),
        }
    }
}

/// Named gates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    /// `diag(1, e^{iφ})`.
    Phase(f64),
    Not,
    Hadamard,
    SigmaX,
    SigmaY,
    SigmaZ,
    /// `I_2 ⊕ σx`.
    Cnot,
    /// `I_6 ⊕ σx`.
    Toffoli,
    /// `(1) ⊕ σx ⊕ I_5`.
    Fredkin,
    /// The 8×8 teleportation product, see [`teleport_factors`].
    Teleport,
}

pub fn gate(g: Gate) -> Matrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match g {
        Gate::Phase(phi) => Matrix::diag(&[ONE, C64::from_polar(1.0, phi)]),
        Gate::Not | Gate::SigmaX => Matrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]),
        Gate::Hadamard => Matrix::from_real_rows(&[[h, h], [h, -h]]),
        Gate::SigmaY => Matrix::from_rows(&[[ZERO, c(0.0, -1.0)], [c(0.0, 1.0), ZERO]]),
        Gate::SigmaZ => Matrix::from_real_rows(&[[1.0, 0.0], [0.0, -1.0]]),
        Gate::Cnot => direct_sum(&Matrix::identity(2), &gate(Gate::SigmaX)),
        Gate::Toffoli => direct_sum(&Matrix::identity(6), &gate(Gate::SigmaX)),
        Gate::Fredkin => direct_sum(
            &Matrix::identity(1),
            &direct_sum(&gate(Gate::SigmaX), &Matrix::identity(5)),
        ),
        Gate::Teleport => {
            let [u1, u2, u3, u4, u5, u6, u7, u8] = teleport_factors();
            u8 * u7 * u6 * u5 * u4 * u3 * u2 * u1
        }
    }
}

/// The eight factors `U_1, …, U_8` of the teleportation circuit, in
/// application order. The circuit is `U_8 U_7 ⋯ U_1`.
pub fn teleport_factors() -> [Matrix; 8] {
    let i2 = Matrix::identity(2);
    let i4 = Matrix::identity(4);
    let had = gate(Gate::Hadamard);
    let cnot = gate(Gate::Cnot);
    let not = gate(Gate::Not);
    [
        kronecker(&kronecker(&i2, &had), &i2),
        kronecker(&i2, &cnot),
        kronecker(&cnot, &i2),
        kronecker(&kronecker(&had, &i2), &i2),
        kronecker(&i2, &cnot),
        kronecker(&kronecker(&i2, &i2), &had),
        direct_sum(&direct_sum(&i4, &not), &not),
        kronecker(&kronecker(&i2, &i2), &had),
    ]
}

/// The SO(1,1) boost `[[cosh α, sinh α], [sinh α, cosh α]]`: hermitian,
/// determinant one, not unitary for `α ≠ 0`.
pub fn so11_boost(alpha: f64) -> Result<Matrix> {
    if !alpha.is_finite() || alpha.abs() > 300.0 {
        return Err(Error::InvalidParameter(format!(
            "boost parameter {alpha} out of range (|alpha| <= 300)"
        )));
    }
    let (ch, sh) = (alpha.cosh(), alpha.sinh());
    Ok(Matrix::from_real_rows(&[[ch, sh], [sh, ch]]))
}

/// Parses a gate name: `phase:<φ>`, `not`, `hadamard`, `sigmax`, `sigmay`,
/// `sigmaz`, `cnot`, `toffoli`, `fredkin`, `teleport` or `boost:<α>`.
pub fn parse_gate(name: &str) -> Result<Matrix> {
    let lower = name.trim().to_ascii_lowercase();
    let param = |prefix: &str| -> Option<Result<f64>> {
        lower.strip_prefix(prefix).map(|rest| {
            rest.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::UnknownGate(name.to_string()))
        })
    };
    if let Some(phi) = param("phase:") {
        return Ok(gate(Gate::Phase(phi?)));
    }
    if let Some(alpha) = param("boost:") {
        return so11_boost(alpha?);
    }
    let g = match lower.as_str() {
        "not" => Gate::Not,
        "hadamard" => Gate::Hadamard,
        "sigmax" => Gate::SigmaX,
        "sigmay" => Gate::SigmaY,
        "sigmaz" => Gate::SigmaZ,
        "cnot" => Gate::Cnot,
        "toffoli" => Gate::Toffoli,
        "fredkin" => Gate::Fredkin,
        "teleport" => Gate::Teleport,
        _ => return Err(Error::UnknownGate(name.to_string())),
    };
    Ok(gate(g))
}

/// Both sides of `F(A ∘ B) = F(A) ∘ F(B)` for one composition `∘`.
#[derive(Debug, Clone, Serialize)]
pub struct DistributivityReport {
    pub kind: CompositionKind,
    pub lhs: Matrix,
    pub rhs: Matrix,
    pub residual: f64,
    pub holds: bool,
}

/// Evaluates whether the eigenframe map distributes over `kind` for this
/// particular pair. Reports; asserts nothing.
pub fn check_distributivity(
    kind: CompositionKind,
    ua: &Matrix,
    ub: &Matrix,
    tol: f64,
    cfg: &ToleranceConfig,
) -> Result<DistributivityReport> {
    for (arg, m) in [("ua", ua), ("ub", ub)] {
        let residual = m.unitarity_residual();
        if residual > cfg.eps_unitary {
            return Err(Error::NotUnitary { arg, residual });
        }
    }
    let lhs = build_frame(&kind.apply(ua, ub)?, cfg)?.columns;
    let fa = build_frame(ua, cfg)?.columns;
    let fb = build_frame(ub, cfg)?.columns;
    let rhs = kind.apply(&fa, &fb)?;
    let residual = hs_distance(&lhs, &rhs)?;
    Ok(DistributivityReport {
        kind,
        lhs,
        rhs,
        residual,
        holds: residual <= tol,
    })
}
