//! Degenerate first-order perturbation theory for `H = H₀ + g·xᵖ yᑫ`.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::assembler::{BlockTemplate, PotentialSpec};
use crate::assignment::min_cost_assignment;
use crate::boxbasis::{BasisSpec, DegenerateGroup};
use crate::error::{PtError, Result};
use crate::matelem::ElementTables;
use crate::pointgroup::IrrepLabel;
use crate::spectral::eigenvalues;

/// First-order corrections of one degenerate group.
#[derive(Debug, Clone)]
pub struct FirstOrderResult {
    pub group: DegenerateGroup,
    /// `W_ij = ⟨φ_i|xᵖ yᑫ|φ_j⟩` over the group members.
    pub w: DMatrix<f64>,
    /// `g` times the eigenvalues of `W`, in ascending order of those eigenvalues.
    pub corrections: Vec<Complex64>,
}

/// Restricts the perturbation to `group` and diagonalizes it.
pub fn first_order(group: &DegenerateGroup, pot: &PotentialSpec) -> FirstOrderResult {
    let max_index = group
        .members
        .iter()
        .map(|md| md.m.max(md.n))
        .max()
        .unwrap_or(1)
        .max(2);
    let tables = ElementTables::new(max_index);
    let k = group.len();
    let w = DMatrix::from_fn(k, k, |i, j| {
        pot.mode_element(&tables, group.members[i], group.members[j])
    });
    let corrections = sorted_eigenvalues(&w)
        .into_iter()
        .map(|x| pot.g() * x)
        .collect();
    FirstOrderResult {
        group: group.clone(),
        w,
        corrections,
    }
}

fn sorted_eigenvalues(w: &DMatrix<f64>) -> Vec<f64> {
    if w.iter().all(|&x| x == 0.0) {
        return vec![0.0; w.nrows()];
    }
    let mut vals: Vec<f64> = SymmetricEigen::new(w.clone()).eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Magnitude of the first-order splitting of the pair `{(m, n), (n, m)}` with
/// `n = m + 2j + 1` under `V = g·xy`:
///
/// `256 m² (2j+m+1)² / (π⁴ (2j+1)⁴ (2j+2m+1)⁴)`.
pub fn first_order_formula(m: usize, j: usize) -> f64 {
    let m = m as f64;
    let j = j as f64;
    let num = 256.0 * m * m * (2.0 * j + m + 1.0).powi(2);
    let den = PI.powi(4) * (2.0 * j + 1.0).powi(4) * (2.0 * j + 2.0 * m + 1.0).powi(4);
    num / den
}

/// A level of one block, identified by its position in the unperturbed order.
///
/// Levels are ordered by unperturbed energy; inside a degenerate cluster of the
/// block they are ordered by ascending first-order coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelRef {
    /// `None` selects the full (unreduced) matrix.
    pub irrep: Option<IrrepLabel>,
    pub index: usize,
}

impl fmt::Display for LevelRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.irrep {
            Some(l) => write!(f, "{l}#{}", self.index),
            None => write!(f, "full#{}", self.index),
        }
    }
}

/// Outcome of comparing a finite-difference slope with first-order theory.
#[derive(Debug, Clone, Copy)]
pub struct SlopeCheck {
    pub level: LevelRef,
    pub unperturbed: f64,
    /// Central difference `(E(a) − E(−a)) / 2a` of the tracked level.
    pub measured: Complex64,
    /// `i·w`, the first-order prediction of `dE/da`.
    pub expected: Complex64,
    /// Relative error when `expected ≠ 0`, otherwise `|measured|`.
    pub discrepancy: f64,
}

impl SlopeCheck {
    pub fn is_relative(&self) -> bool {
        self.expected.norm() > 0.0
    }
}

/// First-order data of every level of a block, in [`LevelRef`] order.
#[derive(Debug, Clone)]
pub struct BlockPrediction {
    pub unperturbed: Vec<f64>,
    /// First-order coefficient `w`: `E ≈ E⁰ + g·w`.
    pub coefficient: Vec<f64>,
}

fn clusters(diag: &[f64]) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..diag.len()).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]).then(i.cmp(&j)));
    let mut out: Vec<Vec<usize>> = Vec::new();
    for i in order {
        match out.last_mut() {
            Some(c) if (diag[i] - diag[c[0]]).abs() <= 1e-9 * diag[i].abs().max(1.0) => c.push(i),
            _ => out.push(vec![i]),
        }
    }
    out
}

/// First-order predictions for all levels of a block.
pub fn block_prediction(template: &BlockTemplate) -> BlockPrediction {
    let diag = template.diagonal();
    let v = template.coupling_matrix();
    let mut unperturbed = Vec::with_capacity(diag.len());
    let mut coefficient = Vec::with_capacity(diag.len());
    for c in clusters(diag) {
        let w = DMatrix::from_fn(c.len(), c.len(), |i, j| v[(c[i], c[j])]);
        for x in sorted_eigenvalues(&w) {
            unperturbed.push(diag[c[0]]);
            coefficient.push(x);
        }
    }
    BlockPrediction {
        unperturbed,
        coefficient,
    }
}

fn template_for(spec: &BasisSpec, pot: &PotentialSpec, irrep: Option<IrrepLabel>) -> Result<BlockTemplate> {
    let tables = ElementTables::new(spec.max_index());
    match irrep {
        Some(label) => BlockTemplate::irrep(spec, &tables, pot, label),
        None => Ok(BlockTemplate::full(spec, &tables, pot)),
    }
}

/// Matches eigenvalues to predictions and returns, for each prediction, the
/// index of its eigenvalue and the matching distance.
fn match_predictions(eig: &[Complex64], pred: &[Complex64]) -> Vec<(usize, f64)> {
    let n = eig.len();
    let mut cost = Vec::with_capacity(n * n);
    for p in pred {
        for e in eig {
            cost.push((e - p).norm());
        }
    }
    let assign = min_cost_assignment(n, &cost);
    (0..n).map(|i| (assign[i], cost[i * n + assign[i]])).collect()
}

/// Central-difference slope of one level at `±a_small`, compared with first
/// order. Only the exponents of `pot` are used.
///
/// Fails with [`PtError::Untrackable`] if the level cannot be identified
/// unambiguously at either end of the stencil.
pub fn slope_check(level: LevelRef, pot: &PotentialSpec, a_small: f64, spec: &BasisSpec) -> Result<SlopeCheck> {
    Ok(slope_checks(level.irrep, pot, a_small, spec, Some(level.index))?.remove(0))
}

/// [`slope_check`] for every level of a block (`only` restricts to one index).
pub fn slope_checks(
    irrep: Option<IrrepLabel>,
    pot: &PotentialSpec,
    a_small: f64,
    spec: &BasisSpec,
    only: Option<usize>,
) -> Result<Vec<SlopeCheck>> {
    if !(a_small > 0.0 && a_small <= 0.1) {
        return Err(PtError::InvalidInput(format!(
            "a_small must lie in (0, 0.1], got {a_small}"
        )));
    }
    let template = template_for(spec, pot, irrep)?;
    let pred = block_prediction(&template);
    let n = pred.unperturbed.len();
    if let Some(i) = only {
        if i >= n {
            return Err(PtError::InvalidInput(format!(
                "level index {i} out of range for a block of dimension {n}"
            )));
        }
    }
    let side = |a: f64| -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let g = Complex64::new(0.0, a);
        let eig = eigenvalues(&template.matrix_at(g))?;
        let p: Vec<Complex64> = (0..n)
            .map(|k| pred.unperturbed[k] + g * pred.coefficient[k])
            .collect();
        Ok((eig, p))
    };
    let (eig_p, pred_p) = side(a_small)?;
    let (eig_m, pred_m) = side(-a_small)?;
    let map_p = match_predictions(&eig_p, &pred_p);
    let map_m = match_predictions(&eig_m, &pred_m);

    let wanted: Vec<usize> = match only {
        Some(i) => vec![i],
        None => (0..n).collect(),
    };
    let mut out = Vec::with_capacity(wanted.len());
    for &k in &wanted {
        for (map, pr) in [(&map_p, &pred_p), (&map_m, &pred_m)] {
            let sep = (0..n)
                .filter(|&j| (pr[j] - pr[k]).norm() > 0.0)
                .map(|j| (pr[j] - pr[k]).norm())
                .fold(f64::INFINITY, f64::min);
            if map[k].1 >= 0.5 * sep {
                return Err(PtError::Untrackable(format!(
                    "level {} at |a| = {a_small}: distance {:.3e} to its prediction vs separation {:.3e}",
                    LevelRef { irrep, index: k },
                    map[k].1,
                    sep
                )));
            }
        }
        // levels whose predictions coincide are interchangeable: pair the two
        // ends of the stencil directly
        let twins: Vec<usize> = (0..n)
            .filter(|&j| pred_p[j] == pred_p[k] && pred_m[j] == pred_m[k])
            .collect();
        let (ep, em) = if twins.len() == 1 {
            (eig_p[map_p[k].0], eig_m[map_m[k].0])
        } else {
            let t = twins.len();
            let mut cost = Vec::with_capacity(t * t);
            for &i in &twins {
                for &j in &twins {
                    cost.push((eig_p[map_p[i].0] - eig_m[map_m[j].0]).norm());
                }
            }
            let assign = min_cost_assignment(t, &cost);
            let pos = twins.iter().position(|&j| j == k).unwrap_or(0);
            (eig_p[map_p[k].0], eig_m[map_m[twins[assign[pos]]].0])
        };
        let measured = (ep - em) / (2.0 * a_small);
        let expected = Complex64::new(0.0, pred.coefficient[k]);
        let err = (measured - expected).norm();
        let discrepancy = if expected.norm() > 0.0 { err / expected.norm() } else { err };
        out.push(SlopeCheck {
            level: LevelRef { irrep, index: k },
            unperturbed: pred.unperturbed[k],
            measured,
            expected,
            discrepancy,
        });
    }
    Ok(out)
}

/// Verdict of the inversion-parity heuristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhasePrediction {
    /// Degenerate levels split into complex pairs as soon as `a ≠ 0`.
    BrokenAtOrigin,
    /// First-order corrections vanish; a window of real spectrum is expected.
    RealWindowExpected,
}

impl fmt::Display for PhasePrediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PhasePrediction::BrokenAtOrigin => "BrokenAtOrigin",
            PhasePrediction::RealWindowExpected => "RealWindowExpected",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhaseVerdict {
    pub prediction: PhasePrediction,
    pub note: &'static str,
}

/// Parity rule on `xᵖ yᑫ` under inversion `(x, y) → (−x, −y)`.
///
/// For odd `p + q` the perturbation is odd under inversion while all box
/// states have definite inversion parity shared by degenerate partners, so
/// every first-order correction vanishes. For even `p + q` degenerate
/// corrections may survive and make the spectrum complex at once. The rule is
/// a heuristic: it says nothing about higher orders.
pub fn classify_phase_transition(pot: &PotentialSpec) -> PhaseVerdict {
    if (pot.p() + pot.q()).is_multiple_of(2) {
        PhaseVerdict {
            prediction: PhasePrediction::BrokenAtOrigin,
            note: "p+q even: the potential is even under inversion and degenerate first-order corrections need not vanish",
        }
    } else {
        PhaseVerdict {
            prediction: PhasePrediction::RealWindowExpected,
            note: "p+q odd: the potential is odd under inversion and all degenerate first-order corrections vanish",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembler::Model;
    use crate::boxbasis::{degenerate_groups, DegeneracyKind, Mode, DEGENERACY_TOL};
    use crate::pointgroup::{Irrep, PointGroup};

    fn pair(m: usize, n: usize) -> DegenerateGroup {
        DegenerateGroup::from_members(vec![Mode::new(m, n).unwrap(), Mode::new(n, m).unwrap()]).unwrap()
    }

    #[test]
    fn lowest_pair_matches_formula() {
        let r = first_order(&pair(1, 2), &Model::Xy.at(1.0));
        let c = 1024.0 / (81.0 * PI.powi(4));
        assert!((r.corrections[0] - Complex64::new(0.0, -c)).norm() < 1e-15);
        assert!((r.corrections[1] - Complex64::new(0.0, c)).norm() < 1e-15);
        let r = first_order(&pair(2, 3), &Model::Xy.at(1.0));
        let c = 9216.0 / (625.0 * PI.powi(4));
        assert!((r.corrections[1].im - c).abs() / c < 1e-13);
    }

    #[test]
    fn formula_over_pairs() {
        for m in 1..=5 {
            for j in 0..=3 {
                let n = m + 2 * j + 1;
                let r = first_order(&pair(m, n), &Model::Xy.at(1.0));
                let f = first_order_formula(m, j);
                for (z, s) in r.corrections.iter().zip([-1.0, 1.0]) {
                    assert_eq!(z.re, 0.0);
                    assert!((z.im - s * f).abs() / f < 1e-12, "({m},{n}) {z} vs {f}");
                }
                let r = first_order(&pair(m, m + 2 * j + 2), &Model::Xy.at(1.0));
                assert!(r.corrections.iter().all(|z| *z == Complex64::new(0.0, 0.0)));
            }
        }
    }

    #[test]
    fn accidental_group_w_is_symmetric() {
        let spec = BasisSpec::new(7).unwrap();
        let groups = degenerate_groups(&spec, DEGENERACY_TOL).unwrap();
        let g = groups
            .iter()
            .find(|g| g.kind == DegeneracyKind::Accidental && g.members.contains(&Mode::new(5, 5).unwrap()))
            .unwrap();
        let r = first_order(g, &Model::Xy.at(1.0));
        assert_eq!(r.w.nrows(), 3);
        assert_eq!(r.w, r.w.transpose());
        assert_eq!(r.corrections.len(), 3);
    }

    #[test]
    fn odd_potential_has_no_first_order() {
        let spec = BasisSpec::new(12).unwrap();
        for g in degenerate_groups(&spec, DEGENERACY_TOL).unwrap() {
            let r = first_order(&g, &Model::Xyy.at(1.0));
            assert!(r.corrections.iter().all(|z| z.norm() == 0.0), "{:?}", g.members);
        }
    }

    #[test]
    fn b1_slope_matches_first_order() {
        let spec = BasisSpec::new(8).unwrap();
        let label = IrrepLabel::new(PointGroup::C2v, Irrep::B1).unwrap();
        let lv = LevelRef { irrep: Some(label), index: 0 };
        let s = slope_check(lv, &Model::Xy.at(0.0), 1e-3, &spec).unwrap();
        let c = 1024.0 / (81.0 * PI.powi(4));
        assert!((s.expected.im - c).abs() < 1e-15);
        assert!(s.discrepancy < 1e-4, "{s:?}");
    }

    #[test]
    fn stencil_bounds_are_enforced() {
        let spec = BasisSpec::new(4).unwrap();
        let lv = LevelRef { irrep: None, index: 0 };
        assert!(slope_check(lv, &Model::Xy.at(0.0), 0.5, &spec).is_err());
        let lv = LevelRef { irrep: None, index: 99 };
        assert!(slope_check(lv, &Model::Xy.at(0.0), 1e-3, &spec).is_err());
    }

    #[test]
    fn parity_rule() {
        let p = |p, q| classify_phase_transition(&PotentialSpec::imaginary(p, q, 1.0).unwrap()).prediction;
        assert_eq!(p(1, 1), PhasePrediction::BrokenAtOrigin);
        assert_eq!(p(1, 2), PhasePrediction::RealWindowExpected);
        assert_eq!(p(2, 2), PhasePrediction::BrokenAtOrigin);
    }
}
