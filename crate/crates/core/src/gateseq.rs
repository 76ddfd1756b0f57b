//! The eigenframe map and the sequence it generates.
//!
//! `build_frame(U)` returns the unitary whose columns are eigenvectors of `U`,
//! chosen from the eigenspace projectors by Gram-Schmidt, phase-fixed so that
//! the first non-zero entry is real positive, and sorted by the
//! lexicographic column ordering [`compare_lex`]. Iterating the map from a
//! starting gate produces the sequence `U_{k+1} = F(U_k)`.

use std::cmp::Ordering;

use serde::Serialize;

use crate::complexmat::{hs_distance, hs_norm, phase_min_distance, Matrix, C64};
use crate::config::ToleranceConfig;
use crate::eig::{gram_schmidt_projected, spectrum, EigenCluster, SpectrumKind};
use crate::error::{Error, Result};

/// Column ordering. At the first index where the entries differ (by more
/// than `eps_cmp`), the larger modulus comes first; equal moduli are broken
/// by the smaller argument, with arguments taken in `(−π, π]`.
pub fn compare_lex(x: &[C64], y: &[C64], cfg: &ToleranceConfig) -> Ordering {
    assert_eq!(x.len(), y.len(), "compare_lex needs vectors of equal length");
    let eps = cfg.eps_cmp;
    let Some(u) = (0..x.len()).find(|&i| (x[i] - y[i]).norm() > eps) else {
        return Ordering::Equal;
    };
    let (mx, my) = (x[u].norm(), y[u].norm());
    if mx > my + eps {
        Ordering::Less
    } else if my > mx + eps {
        Ordering::Greater
    } else if x[u].arg() < y[u].arg() {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Multiplies `x` by the unit scalar that makes its first entry of modulus
/// above `eps_zero` real and positive.
pub fn phase_fix(x: &[C64], cfg: &ToleranceConfig) -> Result<Vec<C64>> {
    let lead = x
        .iter()
        .find(|z| z.norm() > cfg.eps_zero)
        .ok_or(Error::ZeroVector { eps: cfg.eps_zero })?;
    let factor = lead.norm() / lead;
    let mut y: Vec<C64> = x.iter().map(|z| z * factor).collect();
    // the leading entry is |x_l| exactly; drop rounding in its imaginary part
    let l = x.iter().position(|z| z.norm() > cfg.eps_zero).unwrap();
    y[l] = C64::new(lead.norm(), 0.0);
    Ok(y)
}

/// Output of the eigenframe map.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenframe {
    pub kind: SpectrumKind,
    /// `F(U)`: phase-fixed eigenvectors as columns, in increasing order.
    pub columns: Matrix,
    /// Eigenphase `θ_j ∈ [0, 2π)` (unitary source) or real eigenvalue
    /// (hermitian source) belonging to column `j`.
    pub phases: Vec<f64>,
    /// `permutation[j]` is the pre-sort index of the vector placed in column `j`.
    pub permutation: Vec<usize>,
    pub clusters: Vec<EigenCluster>,
}

impl Eigenframe {
    pub fn source_dim(&self) -> usize {
        self.columns.dim()
    }

    /// `F(U) · diag(e^{iθ}) · F(U)*`, or `F · diag(λ) · F*` for hermitian sources.
    pub fn reassemble(&self) -> Matrix {
        let values: Vec<C64> = self
            .phases
            .iter()
            .map(|&t| match self.kind {
                SpectrumKind::Unitary => C64::from_polar(1.0, t),
                SpectrumKind::Hermitian => C64::new(t, 0.0),
            })
            .collect();
        &(&self.columns * &Matrix::diag(&values)) * &self.columns.adjoint()
    }
}

/// Classifies a matrix as a unitary source or a hermitian one. Unitary wins
/// when both hold.
pub fn source_kind(u: &Matrix, cfg: &ToleranceConfig) -> Result<SpectrumKind> {
    let unitary = u.unitarity_residual();
    if unitary <= cfg.eps_unitary {
        return Ok(SpectrumKind::Unitary);
    }
    let hermitian = u.hermiticity_residual();
    if hermitian <= cfg.eps_unitary * hs_norm(u).max(1.0) {
        return Ok(SpectrumKind::Hermitian);
    }
    Err(Error::UnsupportedSource { unitary, hermitian })
}

/// The eigenframe map `F`.
pub fn build_frame(u: &Matrix, cfg: &ToleranceConfig) -> Result<Eigenframe> {
    let kind = source_kind(u, cfg)?;
    let clusters = spectrum(u, kind, cfg)?;

    let mut vectors: Vec<Vec<C64>> = Vec::with_capacity(u.dim());
    let mut phases = Vec::with_capacity(u.dim());
    for cluster in &clusters {
        for v in gram_schmidt_projected(cluster, cfg)? {
            vectors.push(phase_fix(&v, cfg)?);
            phases.push(cluster.value);
        }
    }

    let order = sort_columns(&vectors, cfg)?;
    let columns = Matrix::from_columns(&order.iter().map(|&i| &vectors[i][..]).collect::<Vec<_>>());
    Ok(Eigenframe {
        kind,
        columns,
        phases: order.iter().map(|&i| phases[i]).collect(),
        permutation: order,
        clusters,
    })
}

/// Insertion sort under `compare_lex`. The tolerance comparator is not a
/// total order in general, so a library sort that checks totality is avoided;
/// any adjacent `Equal` afterwards is a tie error.
fn sort_columns(vectors: &[Vec<C64>], cfg: &ToleranceConfig) -> Result<Vec<usize>> {
    let mut order: Vec<usize> = Vec::with_capacity(vectors.len());
    for i in 0..vectors.len() {
        let pos = order
            .iter()
            .position(|&j| compare_lex(&vectors[i], &vectors[j], cfg) == Ordering::Less)
            .unwrap_or(order.len());
        order.insert(pos, i);
    }
    for w in order.windows(2) {
        if compare_lex(&vectors[w[0]], &vectors[w[1]], cfg) != Ordering::Less {
            return Err(Error::OrderingTie);
        }
    }
    Ok(order)
}

/// One iterate `U_k` together with its frame and the distances to `U_{k−1}`.
#[derive(Debug, Clone)]
pub struct SequenceState {
    pub k: usize,
    pub u: Matrix,
    pub frame: Eigenframe,
    pub hs_dist_prev: Option<f64>,
    pub d_prev: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    DistanceBelowTol,
    FixedPoint,
    MaxIterations,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub converged: bool,
    pub steps: usize,
    pub final_distance: f64,
    pub limit: Matrix,
    pub reason: StopReason,
}

/// Iterates `U_{k+1} = F(U_k)` from `u0` for at most `max_k` steps.
///
/// Stops early once `‖U_{k+1} − U_k‖ ≤ eps_conv`. A starting matrix that is a
/// global phase of the identity is rejected: its frame is the identity and
/// the sequence carries no information.
pub fn iterate_sequence(
    u0: &Matrix,
    max_k: usize,
    cfg: &ToleranceConfig,
) -> Result<(Vec<SequenceState>, ConvergenceReport)> {
    if max_k == 0 {
        return Err(Error::InvalidParameter("max_k must be at least 1".into()));
    }
    let residual = u0.unitarity_residual();
    if residual > cfg.eps_unitary {
        return Err(Error::NotUnitary { arg: "u0", residual });
    }
    let distance = phase_min_distance(u0, &Matrix::identity(u0.dim()), cfg)?;
    if distance <= cfg.eps_conv {
        return Err(Error::GlobalPhaseIdentity { distance });
    }

    let mut states = vec![SequenceState {
        k: 0,
        u: u0.clone(),
        frame: build_frame(u0, cfg)?,
        hs_dist_prev: None,
        d_prev: None,
    }];
    let mut reason = StopReason::MaxIterations;
    let mut final_distance = f64::INFINITY;

    for k in 1..=max_k {
        let prev = states.last().unwrap();
        let next = prev.frame.columns.clone();
        let hs = hs_distance(&next, &prev.u)?;
        let d = phase_min_distance(&next, &prev.u, cfg)?;
        let frame = build_frame(&next, cfg)?;
        states.push(SequenceState {
            k,
            u: next,
            frame,
            hs_dist_prev: Some(hs),
            d_prev: Some(d),
        });
        final_distance = hs;
        if hs == 0.0 {
            reason = StopReason::FixedPoint;
            break;
        }
        if hs <= cfg.eps_conv {
            reason = StopReason::DistanceBelowTol;
            break;
        }
    }

    let last = states.last().unwrap();
    let report = ConvergenceReport {
        converged: reason != StopReason::MaxIterations,
        steps: last.k,
        final_distance,
        limit: last.u.clone(),
        reason,
    };
    Ok((states, report))
}

/// Closed-form first step for `U_0 = [[a, b], [b, −a]]`, `a² + b² = 1`,
/// `b ≠ 0`. Serves as an oracle for [`build_frame`] on this family.
pub fn closed_form_step_2x2(a: f64, b: f64) -> Result<Matrix> {
    if !(a.is_finite() && b.is_finite()) || (a * a + b * b - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "a² + b² must equal 1 (a = {a}, b = {b})"
        )));
    }
    if b == 0.0 {
        return Err(Error::InvalidParameter(
            "b = 0: the matrix is already diagonal".into(),
        ));
    }
    let s = b.signum();
    let rows = if a > 0.0 {
        let (ap, bp) = (((1.0 + a) / 2.0).sqrt(), ((1.0 - a) / 2.0).sqrt());
        [[ap, bp], [s * bp, -s * ap]]
    } else if a < 0.0 {
        let (ap, bp) = (((1.0 - a) / 2.0).sqrt(), ((1.0 + a) / 2.0).sqrt());
        [[ap, bp], [-s * bp, s * ap]]
    } else {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        [[h, h], [h, -h]]
    };
    Ok(Matrix::from_real_rows(&rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexmat::{c, re, ONE, ZERO};
    use crate::compose::{gate, Gate};
    use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn e(n: usize, j: usize) -> Vec<C64> {
        (0..n).map(|i| if i == j { ONE } else { ZERO }).collect()
    }

    #[test]
    fn compare_lex_examples() {
        let cfg = cfg();
        assert_eq!(compare_lex(&e(2, 0), &e(2, 1), &cfg), Ordering::Less);
        assert_eq!(compare_lex(&e(2, 1), &e(2, 0), &cfg), Ordering::Greater);
        assert_eq!(compare_lex(&e(2, 1), &e(2, 1), &cfg), Ordering::Equal);
        let h = FRAC_1_SQRT_2;
        let minus_i = [re(h), c(0.0, -h)];
        let plus_i = [re(h), c(0.0, h)];
        assert_eq!(compare_lex(&minus_i, &plus_i, &cfg), Ordering::Less);
        // arg(−1) = π is the largest argument
        assert_eq!(compare_lex(&[re(h), re(-h)], &[re(h), c(0.0, h)], &cfg), Ordering::Greater);
        let a = (4.0 + 2.0 * SQRT_2).sqrt() / 8f64.sqrt();
        let b = (4.0 - 2.0 * SQRT_2).sqrt() / 8f64.sqrt();
        let col1 = [re(a), ZERO, re(b)];
        let col2 = [re(b), ZERO, re(-a)];
        assert_eq!(compare_lex(&col1, &col2, &cfg), Ordering::Less);
    }

    #[test]
    fn compare_lex_within_tolerance_is_equal() {
        let x = [re(0.6), re(0.8)];
        let y = [re(0.6 + 1e-12), re(0.8)];
        assert_eq!(compare_lex(&x, &y, &cfg()), Ordering::Equal);
    }

    #[test]
    fn phase_fix_examples() {
        let cfg = cfg();
        let h = FRAC_1_SQRT_2;
        let v = [re(h), re(h)];
        assert_eq!(phase_fix(&v, &cfg).unwrap(), v.to_vec());
        // multiply by −i
        let y = phase_fix(&[c(0.0, h), re(h)], &cfg).unwrap();
        assert!((y[0] - re(h)).norm() < 1e-16 && (y[1] - c(0.0, -h)).norm() < 1e-16);
        for phi in [0.3, 2.0, -1.1, 3.1] {
            let rot: Vec<C64> = [c(0.0, h), re(h)].iter().map(|z| z * C64::from_polar(1.0, phi)).collect();
            let z = phase_fix(&rot, &cfg).unwrap();
            assert!(z.iter().zip(&y).all(|(a, b)| (a - b).norm() < 1e-15));
        }
        assert!(matches!(phase_fix(&[ZERO, c(1e-12, 0.0)], &cfg), Err(Error::ZeroVector { .. })));
    }

    #[test]
    fn phase_fix_skips_tiny_leading_entries() {
        let y = phase_fix(&[c(1e-12, 0.0), c(0.0, -1.0)], &cfg()).unwrap();
        assert_eq!(y[1], ONE);
    }

    #[test]
    fn frame_of_sigma_x_is_hadamard() {
        let f = build_frame(&gate(Gate::SigmaX), &cfg()).unwrap();
        assert!(f.columns.max_abs_diff(&gate(Gate::Hadamard)) < 1e-15);
        assert_eq!(f.phases[0], 0.0);
        assert!((f.phases[1] - PI).abs() < 1e-14);
        assert_eq!(f.kind, SpectrumKind::Unitary);
    }

    #[test]
    fn frame_of_sigma_y() {
        let h = FRAC_1_SQRT_2;
        let expect = Matrix::from_rows(&[[re(h), re(h)], [c(0.0, -h), c(0.0, h)]]);
        let f = build_frame(&gate(Gate::SigmaY), &cfg()).unwrap();
        assert!(f.columns.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn frame_of_distinct_diagonal_is_identity() {
        let d = Matrix::diag(&[C64::from_polar(1.0, 2.0), C64::from_polar(1.0, 0.5), re(-1.0), ONE]);
        let f = build_frame(&d, &cfg()).unwrap();
        assert!(f.columns.max_abs_diff(&Matrix::identity(4)) < 1e-15);
        assert!((f.phases[0] - 2.0).abs() < 1e-15);
        assert_eq!(f.phases[3], 0.0);
    }

    #[test]
    fn frame_of_identity_is_identity() {
        let f = build_frame(&Matrix::identity(3), &cfg()).unwrap();
        assert_eq!(f.columns, Matrix::identity(3));
        assert_eq!(f.phases, vec![0.0; 3]);
    }

    #[test]
    fn frame_reassembles_source() {
        let u = gate(Gate::Teleport);
        let f = build_frame(&u, &cfg()).unwrap();
        assert!(f.reassemble().max_abs_diff(&u) < 1e-12);
        assert!(f.columns.unitarity_residual() < 1e-12);
    }

    #[test]
    fn frame_rejects_general_matrix() {
        let m = Matrix::from_real_rows(&[[1.0, 2.0], [0.0, 1.0]]);
        assert!(matches!(build_frame(&m, &cfg()), Err(Error::UnsupportedSource { .. })));
    }

    #[test]
    fn frame_of_boost_is_hadamard() {
        let f = build_frame(&crate::compose::so11_boost(0.5).unwrap(), &cfg()).unwrap();
        assert_eq!(f.kind, SpectrumKind::Hermitian);
        assert!(f.columns.max_abs_diff(&gate(Gate::Hadamard)) < 1e-14);
        assert!((f.phases[0] - 0.5f64.exp()).abs() < 1e-13);
    }

    #[test]
    fn closed_form_branches() {
        let had = gate(Gate::Hadamard);
        assert!(closed_form_step_2x2(0.0, 1.0).unwrap().max_abs_diff(&had) < 1e-16);
        assert!(closed_form_step_2x2(0.0, -1.0).unwrap().max_abs_diff(&had) < 1e-16);
        let s8 = 8f64.sqrt();
        let p = (4.0 + 2.0 * SQRT_2).sqrt() / s8;
        let q = (4.0 - 2.0 * SQRT_2).sqrt() / s8;
        let u2 = Matrix::from_real_rows(&[[p, q], [q, -p]]);
        let h = FRAC_1_SQRT_2;
        assert!(closed_form_step_2x2(h, h).unwrap().max_abs_diff(&u2) < 1e-15);

        // a < 0 branch at a = −1/2, b = √3/2: a' = √(3/4), b' = √(1/4)
        let b = 3f64.sqrt() / 2.0;
        let got = closed_form_step_2x2(-0.5, b).unwrap();
        let expect = Matrix::from_real_rows(&[[b, 0.5], [-0.5, b]]);
        assert!(got.max_abs_diff(&expect) < 1e-15);
        let u0 = Matrix::from_real_rows(&[[-0.5, b], [b, 0.5]]);
        assert!(build_frame(&u0, &cfg()).unwrap().columns.max_abs_diff(&expect) < 1e-12);
    }

    #[test]
    fn closed_form_rejects_bad_input() {
        assert!(closed_form_step_2x2(1.0, 0.0).is_err());
        assert!(closed_form_step_2x2(0.5, 0.5).is_err());
        assert!(closed_form_step_2x2(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn iterate_sigma_x_converges_to_sigma_z() {
        let (states, report) = iterate_sequence(&gate(Gate::SigmaX), 60, &cfg()).unwrap();
        assert!(report.converged);
        assert_eq!(report.reason, StopReason::DistanceBelowTol);
        assert!(report.final_distance <= 1e-8);
        assert!(report.limit.max_abs_diff(&gate(Gate::SigmaZ)) < 1e-8);
        assert!(states[1].u.max_abs_diff(&gate(Gate::Hadamard)) < 1e-15);
        assert!(states[0].hs_dist_prev.is_none() && states[0].d_prev.is_none());
        let d1 = states[1].hs_dist_prev.unwrap();
        assert!((d1 - (4.0 - 2.0 * SQRT_2).sqrt()).abs() < 1e-14);
        assert_eq!(states.len(), report.steps + 1);
    }

    #[test]
    fn iterate_rejects_global_phase_identity() {
        let u = Matrix::identity(3).scale(C64::from_polar(1.0, 0.4));
        let err = iterate_sequence(&u, 10, &cfg()).unwrap_err();
        assert!(matches!(err, Error::GlobalPhaseIdentity { .. }));
        assert!(err.to_string().contains("global phase of identity"));
        assert!(iterate_sequence(&gate(Gate::SigmaX), 0, &cfg()).is_err());
        let boost = crate::compose::so11_boost(1.0).unwrap();
        assert!(matches!(iterate_sequence(&boost, 5, &cfg()), Err(Error::NotUnitary { arg: "u0", .. })));
    }

    #[test]
    fn iterate_fixed_point_on_diagonal() {
        let d = Matrix::diag(&[ONE, re(-1.0)]);
        let (states, report) = iterate_sequence(&d, 10, &cfg()).unwrap();
        // U_1 = I, then F(I) = I exactly
        assert_eq!(states[1].u, Matrix::identity(2));
        assert_eq!(report.reason, StopReason::FixedPoint);
        assert_eq!(report.steps, 2);
    }

    #[test]
    fn iterate_max_iterations() {
        let (_, report) = iterate_sequence(&gate(Gate::SigmaX), 3, &cfg()).unwrap();
        assert!(!report.converged);
        assert_eq!(report.reason, StopReason::MaxIterations);
        assert_eq!(report.steps, 3);
    }
}
