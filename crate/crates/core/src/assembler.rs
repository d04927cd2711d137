//! Hamiltonian matrices for `H = pₓ² + p_y² + g·xᵖ yᑫ` on the truncated box basis.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::boxbasis::{BasisSpec, Mode};
use crate::error::{PtError, Result};
use crate::matelem::ElementTables;
use crate::pointgroup::{build_basis, IrrepLabel, PointGroup, SymFunction, SymKind};

/// The two PT-symmetric models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// `V = g·xy`, symmetry `C2v`.
    Xy,
    /// `V = g·xy²`, symmetry `C2`.
    Xyy,
}

impl Model {
    pub fn exponents(self) -> (u32, u32) {
        match self {
            Model::Xy => (1, 1),
            Model::Xyy => (1, 2),
        }
    }

    /// Potential with `g = i·a`.
    pub fn at(self, a: f64) -> PotentialSpec {
        let (p, q) = self.exponents();
        PotentialSpec { p, q, g: Complex64::new(0.0, a) }
    }

    pub fn group(self) -> PointGroup {
        match self {
            Model::Xy => PointGroup::C2v,
            Model::Xyy => PointGroup::C2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Model::Xy => "xy",
            Model::Xyy => "xyy",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = PtError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "xy" => Ok(Model::Xy),
            "xyy" => Ok(Model::Xyy),
            other => Err(PtError::InvalidInput(format!(
                "unknown potential '{other}' (allowed: xy, xyy)"
            ))),
        }
    }
}

/// Monomial potential `g·xᵖ yᑫ`, `p, q ≤ 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSpec {
    p: u32,
    q: u32,
    g: Complex64,
}

impl PotentialSpec {
    pub fn new(p: u32, q: u32, g: Complex64) -> Result<Self> {
        if p > 2 || q > 2 {
            return Err(PtError::InvalidInput(format!(
                "exponents must be at most 2, got (p, q) = ({p}, {q})"
            )));
        }
        if p == 0 && q == 0 && g != Complex64::new(0.0, 0.0) {
            return Err(PtError::InvalidInput(
                "a constant potential needs g = 0".into(),
            ));
        }
        Ok(Self { p, q, g })
    }

    /// PT-symmetric coupling `g = i·a`.
    pub fn imaginary(p: u32, q: u32, a: f64) -> Result<Self> {
        Self::new(p, q, Complex64::new(0.0, a))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn g(&self) -> Complex64 {
        self.g
    }

    pub fn with_g(&self, g: Complex64) -> Self {
        Self { g, ..*self }
    }

    /// Point group used to block-diagonalize this potential.
    pub fn symmetry_group(&self) -> Result<PointGroup> {
        match (self.p, self.q) {
            (p, q) if p == q && p > 0 => Ok(PointGroup::C2v),
            (p, q) if p != q && q % 2 == 0 => Ok(PointGroup::C2),
            (p, q) => Err(PtError::InvalidInput(format!(
                "no block decomposition wired for x^{p} y^{q}"
            ))),
        }
    }

    /// `⟨φ_a| xᵖ yᑫ |φ_c⟩` over product modes.
    #[inline]
    pub fn mode_element(&self, tables: &ElementTables, a: Mode, c: Mode) -> f64 {
        tables.get(self.p, a.m, c.m) * tables.get(self.q, a.n, c.n)
    }
}

/// Coupling-independent pieces of a block: `H(g) = diag(E⁰) + g·V`.
#[derive(Debug, Clone)]
pub struct BlockTemplate {
    irrep: Option<IrrepLabel>,
    basis: BlockBasis,
    diag: Vec<f64>,
    coupling: DMatrix<f64>,
    p: u32,
    q: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BlockBasis {
    Modes(Vec<Mode>),
    Functions(Vec<SymFunction>),
}

impl BlockBasis {
    pub fn len(&self) -> usize {
        match self {
            BlockBasis::Modes(m) => m.len(),
            BlockBasis::Functions(f) => f.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn energies(&self) -> Vec<f64> {
        match self {
            BlockBasis::Modes(m) => m.iter().map(|m| m.energy()).collect(),
            BlockBasis::Functions(f) => f.iter().map(|f| f.energy()).collect(),
        }
    }
}

impl BlockTemplate {
    /// Product-basis matrix over all `M²` modes.
    pub fn full(spec: &BasisSpec, tables: &ElementTables, pot: &PotentialSpec) -> Self {
        let modes = spec.modes();
        let n = modes.len();
        let coupling = DMatrix::from_fn(n, n, |i, j| pot.mode_element(tables, modes[i], modes[j]));
        Self {
            irrep: None,
            diag: modes.iter().map(|m| m.energy()).collect(),
            basis: BlockBasis::Modes(modes),
            coupling,
            p: pot.p,
            q: pot.q,
        }
    }

    /// Matrix over the symmetry-adapted basis of one irrep.
    pub fn irrep(
        spec: &BasisSpec,
        tables: &ElementTables,
        pot: &PotentialSpec,
        irrep: IrrepLabel,
    ) -> Result<Self> {
        let group = pot.symmetry_group()?;
        if irrep.group() != group {
            return Err(PtError::IncompatibleIrrep {
                irrep: format!("{} of {}", irrep, irrep.group()),
                group: group.to_string(),
            });
        }
        let basis = build_basis(spec, irrep)?;
        let n = basis.len();
        let mut coupling = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = sym_element(tables, pot, &basis[i], &basis[j]);
                coupling[(i, j)] = v;
                coupling[(j, i)] = v;
            }
        }
        Ok(Self {
            irrep: Some(irrep),
            diag: basis.iter().map(|f| f.energy()).collect(),
            basis: BlockBasis::Functions(basis),
            coupling,
            p: pot.p,
            q: pot.q,
        })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn irrep_label(&self) -> Option<IrrepLabel> {
        self.irrep
    }

    pub fn basis(&self) -> &BlockBasis {
        &self.basis
    }

    /// Unperturbed energies along the diagonal.
    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// Real symmetric matrix of `xᵖ yᑫ`.
    pub fn coupling_matrix(&self) -> &DMatrix<f64> {
        &self.coupling
    }

    pub fn matrix_at(&self, g: Complex64) -> DMatrix<Complex64> {
        let n = self.dim();
        let mut h = DMatrix::from_fn(n, n, |i, j| g * self.coupling[(i, j)]);
        for i in 0..n {
            h[(i, i)] += self.diag[i];
        }
        h
    }

    pub fn at(&self, g: Complex64) -> HamiltonianBlock {
        HamiltonianBlock {
            irrep: self.irrep,
            basis: self.basis.clone(),
            matrix: self.matrix_at(g),
            g,
            p: self.p,
            q: self.q,
        }
    }
}

/// Dense Hamiltonian over an ordered basis at one coupling value.
#[derive(Debug, Clone)]
pub struct HamiltonianBlock {
    /// `None` for the full product-basis matrix.
    pub irrep: Option<IrrepLabel>,
    pub basis: BlockBasis,
    pub matrix: DMatrix<Complex64>,
    pub g: Complex64,
    pub p: u32,
    pub q: u32,
}

impl HamiltonianBlock {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Short description used in diagnostics.
    pub fn describe(&self) -> String {
        let which = self.irrep.map_or_else(|| "full".to_string(), |l| l.to_string());
        format!("{which} block (x^{} y^{}, dim {})", self.p, self.q, self.dim())
    }
}

pub fn assemble_full(spec: &BasisSpec, pot: &PotentialSpec) -> HamiltonianBlock {
    let tables = ElementTables::new(spec.max_index());
    BlockTemplate::full(spec, &tables, pot).at(pot.g)
}

pub fn assemble_block(
    spec: &BasisSpec,
    irrep: IrrepLabel,
    pot: &PotentialSpec,
) -> Result<HamiltonianBlock> {
    let tables = ElementTables::new(spec.max_index());
    Ok(BlockTemplate::irrep(spec, &tables, pot, irrep)?.at(pot.g))
}

/// `⟨f| xᵖ yᑫ |h⟩` between symmetry-adapted functions.
///
/// For `p = q` the moment is invariant under swapping both index pairs,
/// `V(ab, cd) = V(ba, dc)`, which collapses the four-term expansion:
///
/// * pair/pair with signs `s, t`: `V(a, c) + s·V(a, c')` if `s = t`, else 0;
/// * single/pair: `(V(a, c) + t·V(a, c'))/√2`.
///
/// Other exponent combinations fall back to the explicit expansion.
pub fn sym_element(tables: &ElementTables, pot: &PotentialSpec, f: &SymFunction, h: &SymFunction) -> f64 {
    let v = |a: Mode, c: Mode| pot.mode_element(tables, a, c);
    let sign = |k: SymKind| if k == SymKind::Minus { -1.0 } else { 1.0 };
    let (a, c) = (f.first(), h.first());
    match (f.kind(), h.kind()) {
        (SymKind::Single, SymKind::Single) => v(a, c),
        _ if pot.p != pot.q => expanded_element(tables, pot, f, h),
        (SymKind::Single, kh) => (v(a, c) + sign(kh) * v(a, c.swapped())) * FRAC_1_SQRT_2,
        (kf, SymKind::Single) => (v(a, c) + sign(kf) * v(a.swapped(), c)) * FRAC_1_SQRT_2,
        (kf, kh) => {
            if kf == kh {
                v(a, c) + sign(kf) * v(a, c.swapped())
            } else {
                0.0
            }
        }
    }
}

/// `Σᵢⱼ cᵢ dⱼ ⟨φ_i|V|φ_j⟩` over the constituent product modes.
pub fn expanded_element(tables: &ElementTables, pot: &PotentialSpec, f: &SymFunction, h: &SymFunction) -> f64 {
    let mut acc = 0.0;
    for (cf, mf) in f.terms() {
        for (ch, mh) in h.terms() {
            acc += cf * ch * pot.mode_element(tables, mf, mh);
        }
    }
    acc
}

/// Largest `|⟨f|H|h⟩|` between functions of different irreps.
pub fn cross_irrep_residual(spec: &BasisSpec, pot: &PotentialSpec) -> Result<f64> {
    let group = pot.symmetry_group()?;
    let tables = ElementTables::new(spec.max_index());
    let mut all = Vec::new();
    for label in group.labels() {
        all.extend(build_basis(spec, label)?);
    }
    let mut worst = 0.0f64;
    for f in &all {
        for h in &all {
            if f.irrep() != h.irrep() {
                // off-diagonal in the unperturbed part; only g·V contributes
                let element = pot.g * expanded_element(&tables, pot, f, h);
                worst = worst.max(element.norm());
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointgroup::{adaptation_matrix, Irrep};
    use std::f64::consts::PI;

    fn c() -> f64 {
        1024.0 / (81.0 * PI.powi(4))
    }

    #[test]
    fn zero_coupling_gives_diagonal_energies() {
        let spec = BasisSpec::new(5).unwrap();
        let h = assemble_full(&spec, &Model::Xy.at(0.0));
        for i in 0..25 {
            for j in 0..25 {
                let expect = if i == j { spec.modes()[i].energy() } else { 0.0 };
                assert_eq!(h.matrix[(i, j)], Complex64::new(expect, 0.0));
            }
        }
        for label in PointGroup::C2v.labels() {
            let b = assemble_block(&spec, label, &Model::Xy.at(0.0)).unwrap();
            for i in 0..b.dim() {
                for j in 0..b.dim() {
                    if i != j {
                        assert_eq!(b.matrix[(i, j)].norm(), 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn real_coupling_is_real_symmetric() {
        let spec = BasisSpec::new(4).unwrap();
        let pot = PotentialSpec::new(1, 1, Complex64::new(0.7, 0.0)).unwrap();
        let h = assemble_full(&spec, &pot);
        assert_eq!(h.matrix, h.matrix.transpose());
        assert!(h.matrix.iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn degenerate_pair_restriction() {
        let spec = BasisSpec::new(2).unwrap();
        let a = 0.8;
        let h = assemble_full(&spec, &Model::Xy.at(a));
        // order: (1,1), (1,2), (2,1), (2,2)
        let off = h.matrix[(1, 2)];
        assert!(off.re == 0.0);
        // X12·X21 = X12², which is itself the first-order coefficient
        assert!((off.im / a - c()).abs() < 1e-15);
        assert!((h.matrix[(1, 1)].re - 5.0 * PI * PI / 4.0).abs() < 1e-13);
    }

    #[test]
    fn m2_b_blocks() {
        let spec = BasisSpec::new(2).unwrap();
        let a = 1.3;
        let pot = Model::Xy.at(a);
        let b1 = assemble_block(&spec, IrrepLabel::new(PointGroup::C2v, Irrep::B1).unwrap(), &pot).unwrap();
        let b2 = assemble_block(&spec, IrrepLabel::new(PointGroup::C2v, Irrep::B2).unwrap(), &pot).unwrap();
        let e0 = 5.0 * PI * PI / 4.0;
        assert_eq!(b1.dim(), 1);
        assert!((b1.matrix[(0, 0)] - Complex64::new(e0, a * c())).norm() < 1e-13);
        assert!((b2.matrix[(0, 0)] - Complex64::new(e0, -a * c())).norm() < 1e-13);
    }

    #[test]
    fn incompatible_irrep_is_rejected() {
        let spec = BasisSpec::new(3).unwrap();
        let a = IrrepLabel::new(PointGroup::C2, Irrep::A).unwrap();
        assert!(assemble_block(&spec, a, &Model::Xy.at(1.0)).is_err());
        let a1 = IrrepLabel::new(PointGroup::C2v, Irrep::A1).unwrap();
        assert!(assemble_block(&spec, a1, &Model::Xyy.at(1.0)).is_err());
        assert!(PotentialSpec::new(3, 1, Complex64::new(0.0, 1.0)).is_err());
        assert!(PotentialSpec::new(0, 0, Complex64::new(0.0, 1.0)).is_err());
        assert!(PotentialSpec::new(0, 0, Complex64::new(0.0, 0.0)).is_ok());
    }

    #[test]
    fn cross_term_algebra_matches_expansion() {
        let spec = BasisSpec::new(8).unwrap();
        let tables = ElementTables::new(8);
        for (p, q) in [(1, 1), (2, 2), (1, 2)] {
            let pot = PotentialSpec::imaginary(p, q, 1.0).unwrap();
            let group = pot.symmetry_group().unwrap();
            let mut all = Vec::new();
            for l in group.labels() {
                all.extend(build_basis(&spec, l).unwrap());
            }
            for f in &all {
                for h in &all {
                    let fast = sym_element(&tables, &pot, f, h);
                    let slow = expanded_element(&tables, &pot, f, h);
                    assert!((fast - slow).abs() <= 1e-15, "({p},{q}) {f} {h}: {fast} vs {slow}");
                }
            }
        }
    }

    #[test]
    fn cross_irrep_residual_vanishes() {
        for m in [2, 6] {
            let spec = BasisSpec::new(m).unwrap();
            assert!(cross_irrep_residual(&spec, &Model::Xy.at(1.0)).unwrap() <= 1e-14);
            assert!(cross_irrep_residual(&spec, &Model::Xyy.at(1.0)).unwrap() <= 1e-14);
            assert_eq!(cross_irrep_residual(&spec, &Model::Xy.at(0.0)).unwrap(), 0.0);
        }
    }

    #[test]
    fn full_matrix_conjugated_by_adaptation_is_block_diagonal() {
        let spec = BasisSpec::new(6).unwrap();
        let tables = ElementTables::new(6);
        for model in [Model::Xy, Model::Xyy] {
            let pot = model.at(2.5);
            let full = assemble_full(&spec, &pot).matrix;
            let (u, ranges) = adaptation_matrix(&spec, model.group()).unwrap();
            let uc = u.map(|x| Complex64::new(x, 0.0));
            let t = uc.transpose() * full * &uc;
            let mut expect = DMatrix::<Complex64>::zeros(36, 36);
            for (label, range) in &ranges {
                let b = BlockTemplate::irrep(&spec, &tables, &pot, *label).unwrap().at(pot.g());
                for (bi, i) in range.clone().enumerate() {
                    for (bj, j) in range.clone().enumerate() {
                        expect[(i, j)] = b.matrix[(bi, bj)];
                    }
                }
            }
            let err = (t - expect).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(err <= 1e-13, "{model}: {err}");
            let dims: usize = ranges.iter().map(|(_, r)| r.len()).sum();
            assert_eq!(dims, 36);
        }
    }

    #[test]
    fn imaginary_coupling_is_complex_symmetric() {
        let spec = BasisSpec::new(5).unwrap();
        let h = assemble_full(&spec, &Model::Xy.at(1.0)).matrix;
        assert_eq!(h, h.transpose());
        assert_ne!(h, h.adjoint());
    }
}
