//! One-dimensional moments `X⁽ᵖ⁾_km = ∫₋₁¹ sin(kπ(x+1)/2) xᵖ sin(mπ(x+1)/2) dx`.
//!
//! Closed forms exist for `p ∈ {0, 1, 2}`; a Gauss–Legendre rule provides an
//! independent route for any exponent.

use std::f64::consts::PI;

use crate::boxbasis::box_function;
use crate::error::{PtError, Result};

/// Node count of the reference quadrature oracle.
pub const ORACLE_NODES: usize = 64;

/// `X⁽¹⁾_km`. Zero when `k + m` is even.
pub fn x_element(k: usize, m: usize) -> f64 {
    if (k + m).is_multiple_of(2) {
        return 0.0;
    }
    let (kf, mf) = (k as f64, m as f64);
    let d = kf * kf - mf * mf;
    -16.0 * kf * mf / (PI * PI * d * d)
}

/// `X⁽²⁾_km`. Zero when `k + m` is odd.
pub fn x2_element(k: usize, m: usize) -> f64 {
    if (k + m) % 2 == 1 {
        return 0.0;
    }
    let (kf, mf) = (k as f64, m as f64);
    if k == m {
        return 1.0 / 3.0 - 2.0 / (kf * kf * PI * PI);
    }
    let d = kf * kf - mf * mf;
    32.0 * kf * mf / (PI * PI * d * d)
}

/// Closed-form moment for `p ≤ 2`; `None` for higher exponents.
pub fn closed_form(p: u32, k: usize, m: usize) -> Option<f64> {
    match p {
        0 => Some(if k == m { 1.0 } else { 0.0 }),
        1 => Some(x_element(k, m)),
        2 => Some(x2_element(k, m)),
        _ => None,
    }
}

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes are roots of `P_n` found by Newton iteration from the
    /// Tricomi initial guesses; weights are `2 / ((1 - x²) P_n'(x)²)`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "quadrature needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d.is_finite() { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let (pn, pn1) = if n == 0 { (1.0, 0.0) } else { (p1, p0) };
    let d = n as f64 * (x * pn - pn1) / (x * x - 1.0);
    (pn, d)
}

/// Moment evaluated with a 64-node Gauss–Legendre rule.
pub fn quadrature_oracle(p: u32, k: usize, m: usize) -> f64 {
    quadrature_with(&GaussLegendre::new(ORACLE_NODES), p, k, m)
}

pub fn quadrature_with(rule: &GaussLegendre, p: u32, k: usize, m: usize) -> f64 {
    rule.integrate(|x| box_function(k, x) * x.powi(p as i32) * box_function(m, x))
}

/// Dense symmetric table of `X⁽ᵖ⁾_km` for `1 ≤ k, m ≤ M`.
#[derive(Debug, Clone, PartialEq)]
pub struct OneDimTable {
    p: u32,
    size: usize,
    entries: Vec<f64>,
}

impl OneDimTable {
    pub fn new(p: u32, max_index: usize) -> Result<Self> {
        if p > 2 {
            return Err(PtError::InvalidInput(format!(
                "closed-form tables exist only for p <= 2, got p = {p}"
            )));
        }
        let size = max_index;
        let mut entries = vec![0.0; size * size];
        for k in 1..=size {
            for m in k..=size {
                // p <= 2 checked above
                let v = closed_form(p, k, m).unwrap_or(0.0);
                entries[(k - 1) * size + (m - 1)] = v;
                entries[(m - 1) * size + (k - 1)] = v;
            }
        }
        Ok(Self { p, size, entries })
    }

    pub fn exponent(&self) -> u32 {
        self.p
    }

    pub fn max_index(&self) -> usize {
        self.size
    }

    /// `X⁽ᵖ⁾_km`, 1-based indices.
    #[inline]
    pub fn get(&self, k: usize, m: usize) -> f64 {
        self.entries[(k - 1) * self.size + (m - 1)]
    }
}

/// The three tables `X⁽⁰⁾, X⁽¹⁾, X⁽²⁾` for one truncation.
#[derive(Debug, Clone)]
pub struct ElementTables {
    tables: [OneDimTable; 3],
}

impl ElementTables {
    pub fn new(max_index: usize) -> Self {
        let build = |p| OneDimTable::new(p, max_index).expect("p <= 2");
        Self {
            tables: [build(0), build(1), build(2)],
        }
    }

    pub fn max_index(&self) -> usize {
        self.tables[0].max_index()
    }

    pub fn table(&self, p: u32) -> &OneDimTable {
        &self.tables[p as usize]
    }

    #[inline]
    pub fn get(&self, p: u32, k: usize, m: usize) -> f64 {
        self.tables[p as usize].get(k, m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_zeros_are_exact() {
        assert_eq!(x_element(1, 1), 0.0);
        assert_eq!(x_element(1, 3), 0.0);
        assert_eq!(x2_element(1, 2), 0.0);
        for k in 1..=15 {
            for m in 1..=15 {
                if (k + m) % 2 == 0 {
                    assert_eq!(x_element(k, m).to_bits(), 0.0f64.to_bits());
                } else {
                    assert_eq!(x2_element(k, m).to_bits(), 0.0f64.to_bits());
                }
            }
        }
    }

    #[test]
    fn x12_squared_is_first_order_coefficient() {
        let c = x_element(1, 2).powi(2);
        let target = 1024.0 / (81.0 * PI.powi(4));
        assert!(((c - target) / target).abs() < 1e-14);
        assert!((c - 0.1297822941826761).abs() < 1e-14);
    }

    // Frozen from an independent 64-node Gauss–Legendre evaluation (numpy leggauss).
    #[test]
    fn x2_values_against_frozen_oracle() {
        let oracle_11 = 0.13069096604865782;
        let oracle_13 = 0.15198177546350672;
        assert!((x2_element(1, 1) - oracle_11).abs() < 1e-14);
        assert!((x2_element(1, 3) - oracle_13).abs() < 1e-14);
        assert!(x2_element(1, 1) > 0.0 && x2_element(1, 1) < 1.0 / 3.0);
    }

    #[test]
    fn oracle_normalization() {
        assert!((quadrature_oracle(0, 3, 3) - 1.0).abs() < 1e-14);
        assert!(quadrature_oracle(0, 3, 5).abs() < 1e-14);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(ORACLE_NODES);
        assert_eq!(rule.len(), 64);
        // ∫ x^126 = 2/127
        let v = rule.integrate(|x| x.powi(126));
        assert!((v - 2.0 / 127.0).abs() < 1e-14);
        let w: f64 = rule.integrate(|_| 1.0);
        assert!((w - 2.0).abs() < 1e-14);
        let odd = GaussLegendre::new(7);
        assert!((odd.integrate(|x| x.powi(12)) - 2.0 / 13.0).abs() < 1e-14);
    }

    #[test]
    fn closed_forms_match_oracle() {
        let rule = GaussLegendre::new(ORACLE_NODES);
        for p in 0..=2 {
            for k in 1..=20 {
                for m in 1..=20 {
                    let cf = closed_form(p, k, m).unwrap();
                    let q = quadrature_with(&rule, p, k, m);
                    assert!((cf - q).abs() <= 1e-12, "p={p} k={k} m={m}: {cf} vs {q}");
                }
            }
        }
    }

    #[test]
    fn tables_are_bitwise_symmetric() {
        let t = ElementTables::new(9);
        for p in 0..=2 {
            for k in 1..=9 {
                for m in 1..=9 {
                    assert_eq!(t.get(p, k, m).to_bits(), t.get(p, m, k).to_bits());
                }
            }
        }
        assert!(OneDimTable::new(3, 4).is_err());
        assert_eq!(closed_form(3, 1, 1), None);
    }
}
