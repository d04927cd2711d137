//! Eigenvalues of dense complex non-Hermitian blocks, characteristic
//! polynomials, and conjugation-pairing analysis.

mod qr;

use std::cmp::Ordering;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::assembler::HamiltonianBlock;
use crate::assignment::min_cost_assignment;
use crate::error::{PtError, Result};

use qr::Dense;

/// Residual bound `‖Hv − λv‖ / ‖H‖` required of every returned eigenpair.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// Largest dimension accepted by [`char_poly`].
pub const CHAR_POLY_MAX_DIM: usize = 36;

#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Sorted by real part, then imaginary part.
    pub eigenvalues: Vec<Complex64>,
    /// Unit-norm eigenvectors as columns, in eigenvalue order.
    pub eigenvectors: Option<DMatrix<Complex64>>,
    /// `‖Hv − λv‖ / ‖H‖_F` per pair when vectors were requested.
    pub residuals: Option<Vec<f64>>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

pub fn eigen_order(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then_with(|| a.im.total_cmp(&b.im))
}

/// Eigen-decomposition of a Hamiltonian block.
pub fn eigen(block: &HamiltonianBlock, want_vectors: bool) -> Result<Spectrum> {
    eigen_matrix(&block.matrix, want_vectors).map_err(|e| match e {
        PtError::NoConvergence { iterations, .. } => PtError::NoConvergence {
            context: block.describe(),
            coupling: format!("{}", block.g),
            iterations,
        },
        other => other,
    })
}

/// Eigenvalues only, unsorted order is not exposed: the result is sorted.
pub fn eigenvalues(matrix: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    Ok(eigen_matrix(matrix, false)?.eigenvalues)
}

pub fn eigen_matrix(matrix: &DMatrix<Complex64>, want_vectors: bool) -> Result<Spectrum> {
    let n = matrix.nrows();
    if n == 0 || matrix.ncols() != n {
        return Err(PtError::InvalidInput(format!(
            "eigenproblem needs a non-empty square matrix, got {}x{}",
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(PtError::InvalidInput("matrix has non-finite entries".into()));
    }
    let dense = Dense::from_column_major(n, matrix.as_slice().to_vec());
    let schur = qr::schur(dense, want_vectors).map_err(|e| PtError::NoConvergence {
        context: format!("{n}x{n} matrix"),
        coupling: "n/a".into(),
        iterations: e.iterations,
    })?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eigen_order(&schur.eigenvalues[i], &schur.eigenvalues[j]));
    let eigenvalues: Vec<Complex64> = order.iter().map(|&i| schur.eigenvalues[i]).collect();

    let Some((t, z, scales)) = schur.factors else {
        return Ok(Spectrum { eigenvalues, eigenvectors: None, residuals: None });
    };
    let vecs = qr::schur_vectors(&t, &z, &scales);
    let vectors = DMatrix::from_fn(n, n, |i, k| vecs.a[i + order[k] * n]);
    let hnorm = matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let hv = matrix * &vectors;
    let mut residuals = Vec::with_capacity(n);
    for (k, lambda) in eigenvalues.iter().enumerate() {
        let r = hv
            .column(k)
            .iter()
            .zip(vectors.column(k).iter())
            .map(|(a, v)| (a - lambda * v).norm_sqr())
            .sum::<f64>()
            .sqrt()
            / hnorm;
        if r > RESIDUAL_TOL {
            return Err(PtError::NoConvergence {
                context: format!("eigenpair {k} residual {r:e}"),
                coupling: "n/a".into(),
                iterations: schur.iterations,
            });
        }
        residuals.push(r);
    }
    Ok(Spectrum {
        eigenvalues,
        eigenvectors: Some(vectors),
        residuals: Some(residuals),
    })
}

/// Monic characteristic polynomial `det(λI − H)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharPoly {
    /// `coefficients[k]` multiplies `λ^(n−k)`; `coefficients[0] = 1`.
    pub coefficients: Vec<Complex64>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coefficients
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// `max_k |Im c_k| / max(1, |c_k|)`.
    pub fn max_relative_imag(&self) -> f64 {
        self.coefficients
            .iter()
            .map(|c| c.im.abs() / c.norm().max(1.0))
            .fold(0.0, f64::max)
    }
}

/// Faddeev–LeVerrier recursion: `M₁ = I`, `c_{n−k} = −tr(A Mₖ)/k`,
/// `Mₖ₊₁ = A Mₖ + c_{n−k} I`.
pub fn char_poly(block: &HamiltonianBlock) -> Result<CharPoly> {
    char_poly_matrix(&block.matrix)
}

pub fn char_poly_matrix(a: &DMatrix<Complex64>) -> Result<CharPoly> {
    let n = a.nrows();
    if n > CHAR_POLY_MAX_DIM {
        return Err(PtError::DimensionGuard { dim: n, max: CHAR_POLY_MAX_DIM });
    }
    let mut coefficients = vec![Complex64::new(1.0, 0.0)];
    let mut m = DMatrix::<Complex64>::identity(n, n);
    for k in 1..=n {
        let am = a * &m;
        let c = -am.trace() / k as f64;
        coefficients.push(c);
        m = am;
        for i in 0..n {
            m[(i, i)] += c;
        }
    }
    Ok(CharPoly { coefficients })
}

/// Matching `s1[i] ↔ s2[j]` with `|s1[i] − conj(s2[j])| ≤ tol`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pairing {
    pub pairs: Vec<(usize, usize)>,
    pub max_distance: f64,
}

/// Pairs each eigenvalue of `s1` with the complex conjugate of one in `s2`.
///
/// Greedy nearest matching first; if that leaves a pair outside `tol`, the
/// optimal assignment decides. Failure carries the worst matched distance.
pub fn conjugation_pairing(s1: &[Complex64], s2: &[Complex64], tol: f64) -> Result<Pairing> {
    if s1.len() != s2.len() {
        return Err(PtError::InvalidInput(format!(
            "spectra have different sizes: {} vs {}",
            s1.len(),
            s2.len()
        )));
    }
    let n = s1.len();
    let dist = |i: usize, j: usize| (s1[i] - s2[j].conj()).norm();

    let mut used = vec![false; n];
    let mut pairs = Vec::with_capacity(n);
    let mut worst = 0.0f64;
    for i in 0..n {
        let (j, d) = (0..n)
            .filter(|&j| !used[j])
            .map(|j| (j, dist(i, j)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("unused partner exists");
        used[j] = true;
        worst = worst.max(d);
        pairs.push((i, j));
    }
    if worst <= tol {
        return Ok(Pairing { pairs, max_distance: worst });
    }

    let cost: Vec<f64> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| dist(i, j)).collect();
    let assign = min_cost_assignment(n, &cost);
    let pairs: Vec<(usize, usize)> = assign.iter().enumerate().map(|(i, &j)| (i, j)).collect();
    let worst = pairs.iter().map(|&(i, j)| dist(i, j)).fold(0.0, f64::max);
    if worst <= tol {
        Ok(Pairing { pairs, max_distance: worst })
    } else {
        Err(PtError::PairingFailed { tol, worst })
    }
}

/// Largest matched distance under the optimal assignment between two
/// equal-size multisets; `∞` if the sizes differ.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let n = a.len();
    let cost: Vec<f64> = a.iter().flat_map(|x| b.iter().map(move |y| (x - y).norm())).collect();
    let assign = min_cost_assignment(n, &cost);
    assign
        .iter()
        .enumerate()
        .map(|(i, &j)| cost[i * n + j])
        .fold(0.0, f64::max)
}

/// Spectrum closed under conjugation: distance of the spectrum to its own conjugate.
pub fn conjugation_defect(s: &[Complex64]) -> f64 {
    let conj: Vec<Complex64> = s.iter().map(|z| z.conj()).collect();
    multiset_distance(s, &conj)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_matrix() {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(3.0, 0.0), c(-1.0, 2.0), c(5.0, -1.0)]));
        let s = eigen_matrix(&d, true).unwrap();
        assert_eq!(s.eigenvalues, vec![c(-1.0, 2.0), c(3.0, 0.0), c(5.0, -1.0)]);
        assert!(s.residuals.unwrap().iter().all(|r| *r <= 1e-15));
    }

    #[test]
    fn two_by_two_analytic() {
        let (d, a, cc) = (4.5, 0.7, 0.3);
        let m = DMatrix::from_row_slice(2, 2, &[c(d, 0.0), c(0.0, a * cc), c(0.0, a * cc), c(d, 0.0)]);
        let s = eigen_matrix(&m, true).unwrap();
        assert!((s.eigenvalues[0] - c(d, -a * cc)).norm() < 1e-14);
        assert!((s.eigenvalues[1] - c(d, a * cc)).norm() < 1e-14);
    }

    #[test]
    fn one_by_one() {
        let m = DMatrix::from_element(1, 1, c(2.0, -3.0));
        let s = eigen_matrix(&m, true).unwrap();
        assert_eq!(s.eigenvalues, vec![c(2.0, -3.0)]);
    }

    #[test]
    fn defective_jordan_block_still_returns() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let s = eigen_matrix(&m, true).unwrap();
        assert!(s.eigenvalues.iter().all(|z| (z - c(1.0, 0.0)).norm() < 1e-7));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(eigen_matrix(&DMatrix::<Complex64>::zeros(0, 0), false).is_err());
        let mut m = DMatrix::<Complex64>::identity(2, 2);
        m[(0, 1)] = c(f64::NAN, 0.0);
        assert!(eigen_matrix(&m, false).is_err());
    }

    #[test]
    fn char_poly_of_known_matrix() {
        // [[2, 1], [1, 3]] -> λ² − 5λ + 5
        let m = DMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(3.0, 0.0)]);
        let p = char_poly_matrix(&m).unwrap();
        assert_eq!(p.coefficients, vec![c(1.0, 0.0), c(-5.0, 0.0), c(5.0, 0.0)]);
        assert_eq!(p.degree(), 2);
        assert!(char_poly_matrix(&DMatrix::<Complex64>::identity(37, 37)).is_err());
    }

    #[test]
    fn pairing_and_negative_control() {
        let s1 = vec![c(1.0, 0.5), c(2.0, -0.25), c(3.0, 0.0)];
        let s2: Vec<Complex64> = s1.iter().rev().map(|z| z.conj()).collect();
        let p = conjugation_pairing(&s1, &s2, 1e-12).unwrap();
        assert_eq!(p.pairs.len(), 3);
        let real = vec![c(1.0, 0.0), c(2.0, 0.0)];
        assert!(conjugation_pairing(&real, &real, 1e-12).is_ok());
        let shifted: Vec<Complex64> = s2.iter().map(|z| z + 1.0).collect();
        match conjugation_pairing(&s1, &shifted, 1e-8) {
            Err(PtError::PairingFailed { worst, .. }) => assert!(worst >= 1.0 - 1e-12),
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn multiset_distance_is_order_free() {
        let a = vec![c(1.0, 1.0), c(-2.0, 0.0), c(0.5, -3.0)];
        let b = vec![c(0.5, -3.0), c(1.0, 1.0 + 1e-9), c(-2.0, 0.0)];
        assert!(multiset_distance(&a, &b) <= 1.1e-9);
        assert_eq!(multiset_distance(&a, &b[..2]), f64::INFINITY);
    }
}
