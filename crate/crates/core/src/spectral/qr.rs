//! Dense complex eigensolver: diagonal balancing, Householder reduction to
//! upper Hessenberg form, then single-shift implicit QR with Wilkinson shifts.
//! Eigenvectors come from back substitution on the Schur factor.

// Index loops mirror the textbook kernels and touch several arrays at once.
#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;

const ULP: f64 = f64::EPSILON;
const SAFE_MIN: f64 = f64::MIN_POSITIVE;
const EXCEPTIONAL_SHIFT: f64 = 0.75;

#[inline]
fn cabs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Column-major square matrix.
#[derive(Debug, Clone)]
pub(crate) struct Dense {
    pub n: usize,
    pub a: Vec<Complex64>,
}

impl Dense {
    pub fn from_column_major(n: usize, a: Vec<Complex64>) -> Self {
        debug_assert_eq!(a.len(), n * n);
        Self { n, a }
    }

    pub fn identity(n: usize) -> Self {
        let mut a = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            a[i + i * n] = Complex64::new(1.0, 0.0);
        }
        Self { n, a }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> Complex64 {
        self.a[i + j * self.n]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.a[i + j * self.n] = z;
    }
}

/// Outcome of the Schur iteration.
pub(crate) struct Schur {
    pub eigenvalues: Vec<Complex64>,
    /// `(T, Z, balancing scales)` when vectors were requested.
    pub factors: Option<(Dense, Dense, Vec<f64>)>,
    pub iterations: usize,
}

pub(crate) struct NotConverged {
    pub iterations: usize,
}

/// Scales rows and columns by powers of two so that off-diagonal row and
/// column norms are comparable. Returns `d` with `B = D⁻¹ A D`.
pub(crate) fn balance(m: &mut Dense) -> Vec<f64> {
    let n = m.n;
    let mut d = vec![1.0; n];
    const RADIX: f64 = 2.0;
    const RADIX_SQ: f64 = RADIX * RADIX;
    loop {
        let mut converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += cabs1(m.at(j, i));
                    r += cabs1(m.at(i, j));
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX_SQ;
            }
            g = r * RADIX;
            while c >= g {
                f /= RADIX;
                c /= RADIX_SQ;
            }
            if (c + r) / f < 0.95 * s {
                converged = false;
                d[i] *= f;
                let inv = 1.0 / f;
                for j in 0..n {
                    m.a[i + j * n] *= inv;
                }
                for j in 0..n {
                    m.a[j + i * n] *= f;
                }
            }
        }
        if converged {
            return d;
        }
    }
}

/// In-place Householder reduction to upper Hessenberg form; accumulates the
/// unitary factor into `q` when given.
pub(crate) fn hessenberg(m: &mut Dense, mut q: Option<&mut Dense>) {
    let n = m.n;
    if n < 3 {
        return;
    }
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n - 2 {
        let len = n - k - 1;
        let tail: f64 = (k + 2..n).map(|i| m.at(i, k).norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let x0 = m.at(k + 1, k);
        let alpha = (x0.norm_sqr() + tail).sqrt();
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let beta = -phase * alpha;
        v[0] = x0 - beta;
        for i in 1..len {
            v[i] = m.at(k + 1 + i, k);
        }
        let vnorm: f64 = v[..len].iter().map(|z| z.norm_sqr()).sum();
        let tau = 2.0 / vnorm;

        // H·A on rows k+1.., columns k+1.. (column k is set explicitly)
        for j in k + 1..n {
            let col = &mut m.a[j * n + k + 1..j * n + n];
            let s: Complex64 = v[..len].iter().zip(col.iter()).map(|(vi, x)| vi.conj() * x).sum();
            let s = s * tau;
            for (x, vi) in col.iter_mut().zip(&v[..len]) {
                *x -= vi * s;
            }
        }
        m.set(k + 1, k, beta);
        for i in k + 2..n {
            m.set(i, k, Complex64::new(0.0, 0.0));
        }

        // A·H on all rows, columns k+1..
        apply_right(&mut m.a, n, k + 1, &v[..len], tau, &mut w);
        if let Some(q) = q.as_deref_mut() {
            apply_right(&mut q.a, n, k + 1, &v[..len], tau, &mut w);
        }
    }
}

/// `A[:, off..] ← A[:, off..] (I − τ v vᴴ)`.
fn apply_right(a: &mut [Complex64], n: usize, off: usize, v: &[Complex64], tau: f64, w: &mut [Complex64]) {
    w.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
    for (j, vj) in v.iter().enumerate() {
        let col = &a[(off + j) * n..(off + j + 1) * n];
        for (wi, x) in w.iter_mut().zip(col) {
            *wi += x * vj;
        }
    }
    for (j, vj) in v.iter().enumerate() {
        let f = vj.conj() * tau;
        let col = &mut a[(off + j) * n..(off + j + 1) * n];
        for (x, wi) in col.iter_mut().zip(w.iter()) {
            *x -= wi * f;
        }
    }
}

/// Rotation `[[c, s], [−s̄, c]]` with `c` real that annihilates `y` in `(x, y)`.
#[inline]
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64, Complex64) {
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0), x);
    }
    let ax = x.norm();
    if ax == 0.0 {
        return (0.0, y.conj() / ay, Complex64::new(ay, 0.0));
    }
    let rho = ax.hypot(ay);
    let c = ax / rho;
    let phase = x / ax;
    let s = phase * y.conj() / rho;
    (c, s, phase * rho)
}

/// Wilkinson shift: eigenvalue of the trailing 2×2 closer to its last entry.
fn wilkinson(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let p = (a - d) * 0.5;
    let bc = b * c;
    let mut disc = (p * p + bc).sqrt();
    if (p.conj() * disc).re < 0.0 {
        disc = -disc;
    }
    let den = p + disc;
    if den.norm() == 0.0 {
        d
    } else {
        d - bc / den
    }
}

/// Runs the shifted QR iteration on an upper Hessenberg matrix.
///
/// Without `z` only the active window is updated, which is enough for the
/// eigenvalues; with `z` the full Schur factor is formed.
pub(crate) fn hessenberg_qr(h: &mut Dense, mut z: Option<&mut Dense>) -> Result<usize, NotConverged> {
    let n = h.n;
    if n == 0 {
        return Ok(0);
    }
    let full = z.is_some();
    let budget = 30 * n.max(10);
    let mut total = 0usize;
    let mut hi = n - 1;
    let mut its = 0usize;
    let smlnum = SAFE_MIN * (n as f64 / ULP);

    while hi > 0 {
        // locate the lowest negligible subdiagonal in [0, hi]
        let mut l = 0;
        let mut k = hi;
        while k > 0 {
            let sub = h.at(k, k - 1);
            if cabs1(sub) <= smlnum {
                l = k;
                break;
            }
            let mut tst = cabs1(h.at(k - 1, k - 1)) + cabs1(h.at(k, k));
            if tst == 0.0 {
                if k >= 2 {
                    tst += cabs1(h.at(k - 1, k - 2));
                }
                if k + 1 < n {
                    tst += cabs1(h.at(k + 1, k));
                }
            }
            if cabs1(sub) <= ULP * tst {
                let ab = cabs1(sub).max(cabs1(h.at(k - 1, k)));
                let ba = cabs1(sub).min(cabs1(h.at(k - 1, k)));
                let diff = cabs1(h.at(k - 1, k - 1) - h.at(k, k));
                let aa = cabs1(h.at(k, k)).max(diff);
                let bb = cabs1(h.at(k, k)).min(diff);
                let s = aa + ab;
                if ba * (ab / s) <= smlnum.max(ULP * (bb * (aa / s))) {
                    l = k;
                    break;
                }
            }
            k -= 1;
        }
        if l > 0 {
            h.set(l, l - 1, Complex64::new(0.0, 0.0));
        }
        if l == hi {
            hi -= 1;
            its = 0;
            continue;
        }

        total += 1;
        its += 1;
        if total > budget {
            return Err(NotConverged { iterations: total });
        }

        let mu = if its == 10 {
            Complex64::new(EXCEPTIONAL_SHIFT * cabs1(h.at(l + 1, l)), 0.0) + h.at(l, l)
        } else if its == 20 {
            Complex64::new(EXCEPTIONAL_SHIFT * cabs1(h.at(hi, hi - 1)), 0.0) + h.at(hi, hi)
        } else {
            wilkinson(h.at(hi - 1, hi - 1), h.at(hi - 1, hi), h.at(hi, hi - 1), h.at(hi, hi))
        };

        let col_end = if full { n } else { hi + 1 };
        let row_start = if full { 0 } else { l };
        let mut x = h.at(l, l) - mu;
        let mut y = h.at(l + 1, l);
        for k in l..hi {
            if k > l {
                x = h.at(k, k - 1);
                y = h.at(k + 1, k - 1);
            }
            let (c, s, r) = givens(x, y);
            if k > l {
                h.set(k, k - 1, r);
                h.set(k + 1, k - 1, Complex64::new(0.0, 0.0));
            }
            let sc = s.conj();
            for j in k..col_end {
                let t1 = h.a[k + j * n];
                let t2 = h.a[k + 1 + j * n];
                h.a[k + j * n] = t1 * c + s * t2;
                h.a[k + 1 + j * n] = t2 * c - sc * t1;
            }
            let row_end = (k + 2).min(hi);
            rotate_columns(&mut h.a, n, k, row_start, row_end + 1, c, s);
            if let Some(z) = z.as_deref_mut() {
                rotate_columns(&mut z.a, n, k, 0, n, c, s);
            }
        }
    }
    Ok(total)
}

#[inline]
fn rotate_columns(a: &mut [Complex64], n: usize, k: usize, r0: usize, r1: usize, c: f64, s: Complex64) {
    let sc = s.conj();
    let (left, right) = a.split_at_mut((k + 1) * n);
    let ck = &mut left[k * n + r0..k * n + r1];
    let ck1 = &mut right[r0..r1];
    for (u, v) in ck.iter_mut().zip(ck1.iter_mut()) {
        let t1 = *u;
        let t2 = *v;
        *u = t1 * c + sc * t2;
        *v = t2 * c - s * t1;
    }
}

/// Full pipeline on a column-major copy of the input.
pub(crate) fn schur(mut m: Dense, want_vectors: bool) -> Result<Schur, NotConverged> {
    let n = m.n;
    let scales = balance(&mut m);
    if want_vectors {
        let mut z = Dense::identity(n);
        hessenberg(&mut m, Some(&mut z));
        let iterations = hessenberg_qr(&mut m, Some(&mut z))?;
        let eigenvalues = (0..n).map(|i| m.at(i, i)).collect();
        Ok(Schur { eigenvalues, factors: Some((m, z, scales)), iterations })
    } else {
        hessenberg(&mut m, None);
        let iterations = hessenberg_qr(&mut m, None)?;
        let eigenvalues = (0..n).map(|i| m.at(i, i)).collect();
        Ok(Schur { eigenvalues, factors: None, iterations })
    }
}

/// Eigenvectors of the original matrix from `A = D Z T Zᴴ D⁻¹`, unit 2-norm columns.
pub(crate) fn schur_vectors(t: &Dense, z: &Dense, scales: &[f64]) -> Dense {
    let n = t.n;
    let tnorm = t.a.iter().map(|x| cabs1(*x)).fold(0.0, f64::max);
    let smin = (ULP * tnorm).max(SAFE_MIN * (n as f64 / ULP));
    let mut out = Dense { n, a: vec![Complex64::new(0.0, 0.0); n * n] };
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        let lambda = t.at(k, k);
        y[k] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut sum = Complex64::new(0.0, 0.0);
            for j in i + 1..=k {
                sum += t.at(i, j) * y[j];
            }
            let mut d = t.at(i, i) - lambda;
            if cabs1(d) < smin {
                d = Complex64::new(smin, 0.0);
            }
            y[i] = -sum / d;
        }
        let col = &mut out.a[k * n..(k + 1) * n];
        for (j, yj) in y.iter().enumerate().take(k + 1) {
            let zc = &z.a[j * n..(j + 1) * n];
            for (o, zi) in col.iter_mut().zip(zc) {
                *o += zi * yj;
            }
        }
        for (o, d) in col.iter_mut().zip(scales) {
            *o *= *d;
        }
        let norm = col.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            col.iter_mut().for_each(|x| *x /= norm);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn to_na(d: &Dense) -> DMatrix<Complex64> {
        DMatrix::from_column_slice(d.n, d.n, &d.a)
    }

    pub(crate) fn probe_matrix(n: usize) -> DMatrix<Complex64> {
        // complex symmetric, diagonal growing like a box spectrum
        DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(((i + 1) * (i + 1)) as f64 * 2.4674, 0.0)
            } else if (i + j) % 2 == 1 {
                let d = (i as f64 - j as f64).abs();
                Complex64::new(0.0, 30.0 * 0.36 / (d * d))
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    #[test]
    fn schur_factors_are_backward_stable() {
        let h = probe_matrix(60);
        let dense = Dense::from_column_major(60, h.as_slice().to_vec());
        let s = schur(dense, true).ok().unwrap();
        let (t, z, d) = s.factors.unwrap();
        assert!(d.iter().all(|x| *x == 1.0));
        let (tn, zn) = (to_na(&t), to_na(&z));
        let hnorm = h.norm();
        let back = (&h * &zn - &zn * &tn).norm() / hnorm;
        let orth = (zn.adjoint() * &zn - DMatrix::identity(60, 60)).norm();
        let lower = (0..60).flat_map(|j| (j + 1..60).map(move |i| (i, j))).map(|(i, j)| tn[(i, j)].norm()).fold(0.0, f64::max);
        assert!(back < 1e-14, "backward error {back:e}");
        assert!(orth < 1e-13, "orthogonality {orth:e}");
        assert_eq!(lower, 0.0);
    }
}

