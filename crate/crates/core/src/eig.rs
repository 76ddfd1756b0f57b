//! Spectral decomposition of normal matrices.
//!
//! The pipeline is eigensolver → eigenvalue clusters → eigenspace projectors
//! → Gram-Schmidt on the projected standard basis. Everything after the
//! projectors is a function of the projectors alone, so the eigensolver's
//! ordering, phase and degenerate-subspace choices never leak downstream.

use std::f64::consts::TAU;

use nalgebra::Schur;
use serde::{Deserialize, Serialize};

use crate::complexmat::{hs_norm, vdot, vnorm, Matrix, C64};
use crate::config::ToleranceConfig;
use crate::error::{Error, Result};

const NORMALITY_EPS: f64 = 1e-9;
const RESIDUAL_EPS: f64 = 1e-9;
const SCHUR_MAX_ITER: usize = 100_000;
/// A cluster chain longer than this many cluster radii is ill-conditioned.
const CHAIN_LIMIT: f64 = 10.0;

/// Whether eigenvalues live on the unit circle (indexed by eigenphase) or on
/// the real line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKind {
    Unitary,
    Hermitian,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: C64,
    pub vector: Vec<C64>,
}

/// One eigenvalue group.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenCluster {
    pub kind: SpectrumKind,
    /// Eigenphase `θ ∈ [0, 2π)` for unitary sources, the real eigenvalue for
    /// hermitian ones.
    pub value: f64,
    pub multiplicity: usize,
    pub basis: Vec<Vec<C64>>,
    pub projector: Matrix,
}

impl EigenCluster {
    pub fn eigenvalue(&self) -> C64 {
        match self.kind {
            SpectrumKind::Unitary => C64::from_polar(1.0, self.value),
            SpectrumKind::Hermitian => C64::new(self.value, 0.0),
        }
    }
}

/// Eigenpairs of a normal matrix.
///
/// Uses the complex Schur form `A = Q T Q*`; for normal `A` the triangular
/// factor is diagonal, so the columns of `Q` are orthonormal eigenvectors.
pub fn eig_normal(a: &Matrix) -> Result<Vec<EigenPair>> {
    let scale = hs_norm(a).max(1.0);
    let residual = a.normality_residual();
    if residual > NORMALITY_EPS * scale * scale {
        return Err(Error::NotNormal { residual });
    }
    let n = a.dim();
    let schur = Schur::try_new(a.to_nalgebra(), f64::EPSILON, SCHUR_MAX_ITER)
        .ok_or_else(|| Error::EigenSolver("Schur iteration did not converge".into()))?;
    let (q, t) = schur.unpack();

    let pairs: Vec<EigenPair> = (0..n)
        .map(|j| EigenPair {
            value: t[(j, j)],
            vector: q.column(j).iter().copied().collect(),
        })
        .collect();

    for p in &pairs {
        let av = a.mul_vec(&p.vector);
        let r = av
            .iter()
            .zip(&p.vector)
            .map(|(x, v)| (x - p.value * v).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if r > RESIDUAL_EPS * scale {
            return Err(Error::EigenSolver(format!(
                "eigenpair residual {r:.3e} exceeds {:.1e}",
                RESIDUAL_EPS * scale
            )));
        }
    }
    Ok(pairs)
}

/// Maps an eigenvalue to its eigenphase in `[0, 2π)`. Phases within `snap`
/// of `2π` are taken to be `0`.
pub fn eigenphase(value: C64, snap: f64) -> f64 {
    let theta = value.arg().rem_euclid(TAU);
    if theta >= TAU - snap {
        0.0
    } else {
        theta
    }
}

/// Groups eigenpairs into eigenspaces by single-linkage on the eigenvalue
/// coordinate (circular distance for unitary sources), with radius
/// `cfg.eps_cluster`.
///
/// Clusters are returned in increasing order of their representative value.
pub fn cluster_eigenvalues(
    pairs: &[EigenPair],
    kind: SpectrumKind,
    cfg: &ToleranceConfig,
) -> Result<Vec<EigenCluster>> {
    if pairs.is_empty() {
        return Ok(Vec::new());
    }
    let eps = cfg.eps_cluster;
    let coords: Vec<f64> = pairs
        .iter()
        .map(|p| match kind {
            SpectrumKind::Unitary => eigenphase(p.value, eps),
            SpectrumKind::Hermitian => p.value.re,
        })
        .collect();

    let mut order: Vec<usize> = (0..pairs.len()).collect();
    order.sort_by(|&i, &j| coords[i].total_cmp(&coords[j]));
    let m = order.len();

    // gaps[i] separates order[i] from order[i + 1]; for the circle the last
    // gap wraps around from the largest phase back to the smallest.
    let mut gaps: Vec<f64> = order.windows(2).map(|w| coords[w[1]] - coords[w[0]]).collect();
    let circular = kind == SpectrumKind::Unitary;
    if circular {
        gaps.push(coords[order[0]] + TAU - coords[order[m - 1]]);
    }

    let groups: Vec<Vec<usize>> = if circular {
        match gaps.iter().rposition(|&g| g > eps) {
            // every neighbour within eps all the way round the circle
            None => vec![order.clone()],
            Some(cut) => {
                let start = (cut + 1) % m;
                let mut groups: Vec<Vec<usize>> = Vec::new();
                let mut current = Vec::new();
                for step in 0..m {
                    let pos = (start + step) % m;
                    current.push(order[pos]);
                    if gaps[pos] > eps {
                        groups.push(std::mem::take(&mut current));
                    }
                }
                debug_assert!(current.is_empty());
                groups
            }
        }
    } else {
        let mut groups = vec![vec![order[0]]];
        for (pos, &g) in gaps.iter().enumerate() {
            if g > eps {
                groups.push(Vec::new());
            }
            groups.last_mut().unwrap().push(order[pos + 1]);
        }
        groups
    };

    let mut clusters = Vec::with_capacity(groups.len());
    for members in groups {
        let span = chain_span(&members, &coords, circular);
        if span > CHAIN_LIMIT * eps {
            return Err(Error::IllConditionedCluster {
                span,
                limit: CHAIN_LIMIT * eps,
            });
        }
        let value = if circular {
            let (s, c) = members
                .iter()
                .fold((0.0, 0.0), |(s, c), &i| (s + coords[i].sin(), c + coords[i].cos()));
            eigenphase(C64::new(c, s), eps)
        } else {
            members.iter().map(|&i| coords[i]).sum::<f64>() / members.len() as f64
        };
        let vectors: Vec<&[C64]> = members.iter().map(|&i| pairs[i].vector.as_slice()).collect();
        let basis = orthonormalize(&vectors, cfg.eps_zero);
        if basis.len() != members.len() {
            return Err(Error::ClusterRank {
                expected: members.len(),
                found: basis.len(),
            });
        }
        let projector = projector(&basis);
        clusters.push(EigenCluster {
            kind,
            value,
            multiplicity: basis.len(),
            basis,
            projector,
        });
    }
    clusters.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(clusters)
}

/// Length of the chain of consecutive members (circular distance on the unit
/// circle).
fn chain_span(members: &[usize], coords: &[f64], circular: bool) -> f64 {
    members
        .windows(2)
        .map(|w| {
            let d = coords[w[1]] - coords[w[0]];
            if circular {
                d.rem_euclid(TAU)
            } else {
                d
            }
        })
        .sum()
}

/// `Σ v v*` over the given vectors.
pub fn projector(basis: &[Vec<C64>]) -> Matrix {
    let n = basis.first().map_or(0, Vec::len);
    Matrix::from_fn(n, |i, j| basis.iter().map(|v| v[i] * v[j].conj()).sum())
}

/// Modified Gram-Schmidt with one re-orthogonalisation pass. Vectors whose
/// residual norm is at most `eps_zero` are discarded.
fn orthonormalize(vectors: &[&[C64]], eps_zero: f64) -> Vec<Vec<C64>> {
    let mut basis: Vec<Vec<C64>> = Vec::new();
    for v in vectors {
        if let Some(q) = orthogonal_residual(v, &basis, eps_zero) {
            basis.push(q);
        }
    }
    basis
}

fn orthogonal_residual(v: &[C64], basis: &[Vec<C64>], eps_zero: f64) -> Option<Vec<C64>> {
    let mut w = v.to_vec();
    for _pass in 0..2 {
        for q in basis {
            let coeff = vdot(q, &w);
            for (wi, qi) in w.iter_mut().zip(q) {
                *wi -= coeff * qi;
            }
        }
    }
    let norm = vnorm(&w);
    if norm <= eps_zero {
        return None;
    }
    w.iter_mut().for_each(|z| *z /= norm);
    Some(w)
}

/// Orthonormal basis of the cluster's eigenspace obtained from
/// `Π e_1, Π e_2, …, Π e_n` in index order, dropping zero residuals.
///
/// Depends on the projector only, not on the cluster's stored basis.
pub fn gram_schmidt_projected(cluster: &EigenCluster, cfg: &ToleranceConfig) -> Result<Vec<Vec<C64>>> {
    let proj = &cluster.projector;
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(cluster.multiplicity);
    for j in 0..proj.dim() {
        if basis.len() == cluster.multiplicity {
            break;
        }
        // Π e_j is the j-th column of Π
        let column = proj.column(j);
        if let Some(q) = orthogonal_residual(&column, &basis, cfg.eps_zero) {
            basis.push(q);
        }
    }
    if basis.len() != cluster.multiplicity {
        return Err(Error::ClusterRank {
            expected: cluster.multiplicity,
            found: basis.len(),
        });
    }
    Ok(basis)
}

/// Eigenvalue clusters of a unitary or hermitian matrix.
pub fn spectrum(a: &Matrix, kind: SpectrumKind, cfg: &ToleranceConfig) -> Result<Vec<EigenCluster>> {
    let pairs = eig_normal(a)?;
    cluster_eigenvalues(&pairs, kind, cfg)
}

/// `Σ λ Π` over clusters.
pub fn reconstruct(clusters: &[EigenCluster]) -> Option<Matrix> {
    let n = clusters.first()?.projector.dim();
    Some(clusters.iter().fold(Matrix::zeros(n), |acc, cl| {
        &acc + &cl.projector.scale(cl.eigenvalue())
    }))
}
