//! Point-group symmetry of the box models.
//!
//! * `C4v` describes the unperturbed box (`g = 0`).
//! * `C2v = {E, C2, σv1, σv2}` leaves `V = xy` invariant.
//! * `C2 = {E, C2}` with `C2: (x, y) → (x, −y)` leaves `V = xy²` invariant. The
//!   generator differs from the `C2` of `C4v`, so every group carries its own
//!   operation list.
//!
//! The 1D factor obeys `φ_k(−x) = (−1)^{k+1} φ_k(x)`, so every operation maps a
//! product function onto `±` another product function.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::boxbasis::{BasisSpec, Mode};
use crate::error::{PtError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointGroup {
    C4v,
    C2v,
    C2,
}

impl PointGroup {
    pub fn irreps(self) -> &'static [Irrep] {
        match self {
            PointGroup::C4v => &[Irrep::A1, Irrep::A2, Irrep::B1, Irrep::B2, Irrep::E],
            PointGroup::C2v => &[Irrep::A1, Irrep::A2, Irrep::B1, Irrep::B2],
            PointGroup::C2 => &[Irrep::A, Irrep::B],
        }
    }

    /// Irrep labels whose bases block-diagonalize a Hamiltonian with this symmetry.
    pub fn labels(self) -> Vec<IrrepLabel> {
        self.irreps()
            .iter()
            .map(|&irrep| IrrepLabel { group: self, irrep })
            .collect()
    }

    pub fn operations(self) -> &'static [SymOp] {
        use SymOp::*;
        match self {
            PointGroup::C4v => &[E, C4, C4Cubed, C2, SigmaV1, SigmaV2, SigmaD1, SigmaD2],
            PointGroup::C2v => &[E, C2, SigmaV1, SigmaV2],
            PointGroup::C2 => &[E, C2Y],
        }
    }

    /// Antiunitary operator that commutes with the PT-symmetric Hamiltonian of
    /// the model carrying this symmetry.
    pub fn antiunitary(self) -> Antiunitary {
        Antiunitary::Ax
    }
}

impl fmt::Display for PointGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PointGroup::C4v => "C4v",
            PointGroup::C2v => "C2v",
            PointGroup::C2 => "C2",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Irrep {
    A1,
    A2,
    B1,
    B2,
    E,
    A,
    B,
}

impl Irrep {
    pub fn as_str(self) -> &'static str {
        match self {
            Irrep::A1 => "A1",
            Irrep::A2 => "A2",
            Irrep::B1 => "B1",
            Irrep::B2 => "B2",
            Irrep::E => "E",
            Irrep::A => "A",
            Irrep::B => "B",
        }
    }
}

impl fmt::Display for Irrep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Irrep {
    type Err = PtError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "A1" => Irrep::A1,
            "A2" => Irrep::A2,
            "B1" => Irrep::B1,
            "B2" => Irrep::B2,
            "E" => Irrep::E,
            "A" => Irrep::A,
            "B" => Irrep::B,
            other => {
                return Err(PtError::InvalidInput(format!(
                    "unknown irrep '{other}' (allowed: A1, A2, B1, B2, E, A, B)"
                )))
            }
        })
    }
}

/// Irrep of a specific group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IrrepLabel {
    group: PointGroup,
    irrep: Irrep,
}

impl IrrepLabel {
    pub fn new(group: PointGroup, irrep: Irrep) -> Result<Self> {
        if !group.irreps().contains(&irrep) {
            return Err(PtError::IncompatibleIrrep {
                irrep: irrep.to_string(),
                group: group.to_string(),
            });
        }
        Ok(Self { group, irrep })
    }

    pub fn group(&self) -> PointGroup {
        self.group
    }

    pub fn irrep(&self) -> Irrep {
        self.irrep
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.irrep)
    }
}

/// Spatial operation as a signed coordinate map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymOp {
    /// `(x, y) → (x, y)`
    E,
    /// `(x, y) → (y, −x)`
    C4,
    /// `(x, y) → (−y, x)`
    C4Cubed,
    /// `(x, y) → (−x, −y)`
    C2,
    /// `(x, y) → (y, x)`
    SigmaV1,
    /// `(x, y) → (−y, −x)`
    SigmaV2,
    /// `(x, y) → (x, −y)`
    SigmaD1,
    /// `(x, y) → (−x, y)`
    SigmaD2,
    /// Generator of the `C2` model group, `(x, y) → (x, −y)`.
    C2Y,
}

impl SymOp {
    /// `(swap, sign of new x, sign of new y)`.
    fn map(self) -> (bool, i8, i8) {
        match self {
            SymOp::E => (false, 1, 1),
            SymOp::C4 => (true, 1, -1),
            SymOp::C4Cubed => (true, -1, 1),
            SymOp::C2 => (false, -1, -1),
            SymOp::SigmaV1 => (true, 1, 1),
            SymOp::SigmaV2 => (true, -1, -1),
            SymOp::SigmaD1 | SymOp::C2Y => (false, 1, -1),
            SymOp::SigmaD2 => (false, -1, 1),
        }
    }

    pub fn apply_point(self, x: f64, y: f64) -> (f64, f64) {
        let (swap, sx, sy) = self.map();
        let (u, v) = if swap { (y, x) } else { (x, y) };
        (sx as f64 * u, sy as f64 * v)
    }

    /// `φ_mn(R(x, y)) = sign · φ_image(x, y)`.
    pub fn apply_mode(self, mode: Mode) -> (f64, Mode) {
        let (swap, sx, sy) = self.map();
        let sign = reflect_sign(mode.m, sx) * reflect_sign(mode.n, sy);
        let image = if swap { mode.swapped() } else { mode };
        (sign, image)
    }

    pub fn name(self) -> &'static str {
        match self {
            SymOp::E => "E",
            SymOp::C4 => "C4",
            SymOp::C4Cubed => "C4^3",
            SymOp::C2 => "C2",
            SymOp::SigmaV1 => "sigma_v1",
            SymOp::SigmaV2 => "sigma_v2",
            SymOp::SigmaD1 => "sigma_d1",
            SymOp::SigmaD2 => "sigma_d2",
            SymOp::C2Y => "C2(x,-y)",
        }
    }
}

fn reflect_sign(k: usize, s: i8) -> f64 {
    if s < 0 && k.is_multiple_of(2) {
        -1.0
    } else {
        1.0
    }
}

/// Character `χ_S(R)` from the standard tables; `None` if `op` is not in the group.
pub fn character(label: IrrepLabel, op: SymOp) -> Option<i32> {
    match label.group {
        PointGroup::C4v => {
            // classes: E, {C4, C4³}, C2, {σv1, σv2}, {σd1, σd2}
            let row = match label.irrep {
                Irrep::A1 => [1, 1, 1, 1, 1],
                Irrep::A2 => [1, 1, 1, -1, -1],
                Irrep::B1 => [1, -1, 1, 1, -1],
                Irrep::B2 => [1, -1, 1, -1, 1],
                Irrep::E => [2, 0, -2, 0, 0],
                _ => return None,
            };
            let class = match op {
                SymOp::E => 0,
                SymOp::C4 | SymOp::C4Cubed => 1,
                SymOp::C2 => 2,
                SymOp::SigmaV1 | SymOp::SigmaV2 => 3,
                SymOp::SigmaD1 | SymOp::SigmaD2 => 4,
                SymOp::C2Y => return None,
            };
            Some(row[class])
        }
        PointGroup::C2v => {
            // E, C2, σv1, σv2
            let row = match label.irrep {
                Irrep::A1 => [1, 1, 1, 1],
                Irrep::A2 => [1, 1, -1, -1],
                Irrep::B1 => [1, -1, 1, -1],
                Irrep::B2 => [1, -1, -1, 1],
                _ => return None,
            };
            let class = match op {
                SymOp::E => 0,
                SymOp::C2 => 1,
                SymOp::SigmaV1 => 2,
                SymOp::SigmaV2 => 3,
                _ => return None,
            };
            Some(row[class])
        }
        PointGroup::C2 => {
            let row = match label.irrep {
                Irrep::A => [1, 1],
                Irrep::B => [1, -1],
                _ => return None,
            };
            match op {
                SymOp::E => Some(row[0]),
                SymOp::C2Y => Some(row[1]),
                _ => None,
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymKind {
    Single,
    Plus,
    Minus,
}

/// Normalized combination of one or two box modes.
///
/// `Plus`/`Minus` stand for `(φ_mn ± φ_nm)/√2` with `first = (m, n)`. Pairs are
/// stored canonically: odd index first for mixed parity, smaller index first
/// otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymFunction {
    kind: SymKind,
    first: Mode,
    irrep: IrrepLabel,
}

fn canonical_pair(mode: Mode) -> (bool, Mode) {
    let (m, n) = (mode.m, mode.n);
    let flip = if (m + n) % 2 == 1 { m % 2 == 0 } else { m > n };
    if flip {
        (true, mode.swapped())
    } else {
        (false, mode)
    }
}

/// Unlabelled shape together with a sign, produced while mapping functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Shape {
    kind: SymKind,
    first: Mode,
}

impl Shape {
    /// Canonical shape `±` for a raw pair orientation.
    fn pair(kind: SymKind, mode: Mode) -> (f64, Shape) {
        let (flipped, first) = canonical_pair(mode);
        let sign = if flipped && kind == SymKind::Minus { -1.0 } else { 1.0 };
        (sign, Shape { kind, first })
    }

    fn terms(self) -> Vec<(f64, Mode)> {
        match self.kind {
            SymKind::Single => vec![(1.0, self.first)],
            SymKind::Plus => vec![
                (FRAC_1_SQRT_2, self.first),
                (FRAC_1_SQRT_2, self.first.swapped()),
            ],
            SymKind::Minus => vec![
                (FRAC_1_SQRT_2, self.first),
                (-FRAC_1_SQRT_2, self.first.swapped()),
            ],
        }
    }

    /// Maps each mode through `f`, then recognizes the result as `± shape`.
    fn map_modes<F: Fn(Mode) -> (f64, Mode)>(self, f: F) -> (f64, Shape) {
        match self.kind {
            SymKind::Single => {
                let (s, image) = f(self.first);
                (s, Shape { kind: SymKind::Single, first: image })
            }
            SymKind::Plus | SymKind::Minus => {
                let (s1, a) = f(self.first);
                let (s2, _) = f(self.first.swapped());
                let ratio = s1 * s2;
                let own = if self.kind == SymKind::Plus { 1.0 } else { -1.0 };
                // image = s1 φ_a + own·s2 φ_a' = s1 (φ_a + own·ratio φ_a')
                let kind = if own * ratio > 0.0 { SymKind::Plus } else { SymKind::Minus };
                let (sign, shape) = Shape::pair(kind, a);
                (s1 * sign, shape)
            }
        }
    }
}

impl SymFunction {
    pub fn single(mode: Mode, irrep: IrrepLabel) -> Result<Self> {
        Self::labelled(Shape { kind: SymKind::Single, first: mode }, irrep)
    }

    /// `φ⁺` built from either orientation of the pair.
    pub fn plus(mode: Mode, irrep: IrrepLabel) -> Result<Self> {
        Self::pair_checked(SymKind::Plus, mode, irrep).map(|(_, f)| f)
    }

    /// `φ⁻_mn` written as `sign · (canonical φ⁻)`.
    pub fn minus(mode: Mode, irrep: IrrepLabel) -> Result<(f64, Self)> {
        Self::pair_checked(SymKind::Minus, mode, irrep)
    }

    /// Builds a function of the given shape and derives its label in `group`.
    pub fn classified(kind: SymKind, mode: Mode, group: PointGroup) -> Result<(f64, Self)> {
        let (sign, shape) = match kind {
            SymKind::Single => (1.0, Shape { kind, first: mode }),
            _ => {
                if mode.m == mode.n {
                    return Err(PtError::InvalidInput(format!(
                        "± combination needs distinct indices, got {mode}"
                    )));
                }
                Shape::pair(kind, mode)
            }
        };
        let irrep = classify_shape(shape, group)?;
        Ok((sign, SymFunction { kind: shape.kind, first: shape.first, irrep }))
    }

    fn pair_checked(kind: SymKind, mode: Mode, irrep: IrrepLabel) -> Result<(f64, Self)> {
        if mode.m == mode.n {
            return Err(PtError::InvalidInput(format!(
                "± combination needs distinct indices, got {mode}"
            )));
        }
        let (sign, shape) = Shape::pair(kind, mode);
        Ok((sign, Self::labelled(shape, irrep)?))
    }

    fn labelled(shape: Shape, irrep: IrrepLabel) -> Result<Self> {
        let derived = classify_shape(shape, irrep.group)?;
        if derived != irrep {
            return Err(PtError::InvalidInput(format!(
                "{:?} {} transforms as {} in {}, not {}",
                shape.kind, shape.first, derived, irrep.group, irrep
            )));
        }
        Ok(Self { kind: shape.kind, first: shape.first, irrep })
    }

    pub fn kind(&self) -> SymKind {
        self.kind
    }

    /// First mode of the canonical orientation.
    pub fn first(&self) -> Mode {
        self.first
    }

    pub fn irrep(&self) -> IrrepLabel {
        self.irrep
    }

    pub fn modes(&self) -> Vec<Mode> {
        self.shape().terms().into_iter().map(|(_, m)| m).collect()
    }

    /// Expansion `Σ cᵢ φ_{modeᵢ}`.
    pub fn terms(&self) -> Vec<(f64, Mode)> {
        self.shape().terms()
    }

    /// Unperturbed energy shared by all constituent modes.
    pub fn energy(&self) -> f64 {
        self.first.energy()
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.terms().iter().map(|(c, m)| c * m.eval(x, y)).sum()
    }

    fn shape(&self) -> Shape {
        Shape { kind: self.kind, first: self.first }
    }

    fn relabel(&self, shape: Shape) -> Result<Self> {
        let irrep = classify_shape(shape, self.irrep.group)?;
        Ok(Self { kind: shape.kind, first: shape.first, irrep })
    }
}

impl fmt::Display for SymFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sup = match self.kind {
            SymKind::Single => "",
            SymKind::Plus => "+",
            SymKind::Minus => "-",
        };
        write!(f, "phi{}_{}{}", sup, self.first.m, self.first.n)
    }
}

fn classify_shape(shape: Shape, group: PointGroup) -> Result<IrrepLabel> {
    let Shape { kind, first } = shape;
    let (m, n) = (first.m, first.n);
    let odd = |k: usize| k % 2 == 1;
    let same_parity = odd(m) == odd(n);
    let irrep = match (group, kind) {
        (PointGroup::C4v, SymKind::Single) if m == n => {
            Some(if odd(m) { Irrep::A1 } else { Irrep::B1 })
        }
        (PointGroup::C4v, SymKind::Single) if !same_parity => Some(Irrep::E),
        (PointGroup::C4v, SymKind::Plus) if same_parity => {
            Some(if odd(m) { Irrep::A1 } else { Irrep::B1 })
        }
        (PointGroup::C4v, SymKind::Minus) if same_parity => {
            Some(if odd(m) { Irrep::B2 } else { Irrep::A2 })
        }
        (PointGroup::C2v, SymKind::Single) if m == n => Some(Irrep::A1),
        (PointGroup::C2v, SymKind::Plus) => Some(if same_parity { Irrep::A1 } else { Irrep::B1 }),
        (PointGroup::C2v, SymKind::Minus) => Some(if same_parity { Irrep::A2 } else { Irrep::B2 }),
        (PointGroup::C2, SymKind::Single) => Some(if odd(n) { Irrep::A } else { Irrep::B }),
        (PointGroup::C2, _) if same_parity => Some(if odd(n) { Irrep::A } else { Irrep::B }),
        _ => None,
    };
    irrep
        .map(|irrep| IrrepLabel { group, irrep })
        .ok_or_else(|| {
            PtError::InvalidInput(format!(
                "{kind:?} function on {first} matches no {group} family"
            ))
        })
}

/// Label of a function under the `C4v` symmetry of the unperturbed box.
///
/// `E` partners are the single products `φ_{2m−1,2n}` and `φ_{2n,2m−1}`.
pub fn classify_c4v(f: &SymFunction) -> Result<IrrepLabel> {
    classify_shape(f.shape(), PointGroup::C4v)
}

/// Classifies an `E` partner pair: both members must be single products that
/// are each other's index swap with `m + n` odd.
pub fn classify_c4v_pair(a: Mode, b: Mode) -> Result<IrrepLabel> {
    if b != a.swapped() || (a.m + a.n).is_multiple_of(2) {
        return Err(PtError::InvalidInput(format!(
            "({a}, {b}) is not an E partner pair"
        )));
    }
    Ok(IrrepLabel { group: PointGroup::C4v, irrep: Irrep::E })
}

/// Image `f ∘ R` of `f` under a spatial operation, as `sign · image`.
pub fn apply_op(op: SymOp, f: &SymFunction) -> Result<(f64, SymFunction)> {
    let (sign, shape) = f.shape().map_modes(|m| op.apply_mode(m));
    Ok((sign, f.relabel(shape)?))
}

/// Same as [`apply_op`], restricted to the eight operations of `C4v`.
pub fn apply_c4v_op(op: SymOp, f: &SymFunction) -> Result<(f64, SymFunction)> {
    if op == SymOp::C2Y {
        return Err(PtError::InvalidInput(
            "C2(x,-y) is the C2-model generator; use sigma_d1 within C4v".into(),
        ));
    }
    apply_op(op, f)
}

/// Antiunitary symmetries: a parity transformation followed by complex conjugation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Antiunitary {
    /// `Pₓ T`, with `Pₓ: x → −x`.
    Ax,
    /// `P_y T`, with `P_y: y → −y`.
    Ay,
    /// Inversion followed by time reversal.
    Inversion,
}

impl Antiunitary {
    /// Spatial part acting on a box mode; the modes are real so `T` is trivial on them.
    pub fn mode_sign(self, mode: Mode) -> f64 {
        let parity = |k: usize| if k % 2 == 1 { 1.0 } else { -1.0 };
        match self {
            Antiunitary::Ax => parity(mode.m),
            Antiunitary::Ay => parity(mode.n),
            Antiunitary::Inversion => parity(mode.m) * parity(mode.n),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntiunitaryResult {
    pub image: SymFunction,
    pub sign: f64,
    /// Always true: the operators include time reversal.
    pub conjugates: bool,
}

pub fn apply_antiunitary(which: Antiunitary, f: &SymFunction) -> Result<AntiunitaryResult> {
    let (sign, shape) = f.shape().map_modes(|m| (which.mode_sign(m), m));
    Ok(AntiunitaryResult {
        image: f.relabel(shape)?,
        sign,
        conjugates: true,
    })
}

fn sort_functions(fs: &mut [SymFunction]) {
    fs.sort_by(|a, b| {
        a.first
            .norm_sq()
            .cmp(&b.first.norm_sq())
            .then_with(|| a.first.cmp(&b.first))
            .then_with(|| (a.kind as u8).cmp(&(b.kind as u8)))
    });
}

/// Symmetry-adapted basis of a `C2v` irrep, truncated at `M`.
pub fn build_c2v_basis(spec: &BasisSpec, irrep: IrrepLabel) -> Result<Vec<SymFunction>> {
    if irrep.group != PointGroup::C2v {
        return Err(PtError::IncompatibleIrrep {
            irrep: irrep.to_string(),
            group: PointGroup::C2v.to_string(),
        });
    }
    let big_m = spec.max_index();
    let mut out = Vec::new();
    let push = |out: &mut Vec<SymFunction>, kind, m, n| {
        out.push(SymFunction { kind, first: Mode::of(m, n), irrep });
    };
    for m in 1..=big_m {
        for n in 1..=big_m {
            let same = (m + n) % 2 == 0;
            match irrep.irrep {
                Irrep::A1 if m == n => push(&mut out, SymKind::Single, m, n),
                Irrep::A1 if same && m < n => push(&mut out, SymKind::Plus, m, n),
                Irrep::A2 if same && m < n => push(&mut out, SymKind::Minus, m, n),
                Irrep::B1 if !same && m % 2 == 1 => push(&mut out, SymKind::Plus, m, n),
                Irrep::B2 if !same && m % 2 == 1 => push(&mut out, SymKind::Minus, m, n),
                _ => {}
            }
        }
    }
    sort_functions(&mut out);
    Ok(out)
}

/// Basis of a `C2` irrep: `A = {φ_{m,2n−1}}`, `B = {φ_{m,2n}}`.
pub fn build_c2_basis(spec: &BasisSpec, irrep: IrrepLabel) -> Result<Vec<SymFunction>> {
    if irrep.group != PointGroup::C2 {
        return Err(PtError::IncompatibleIrrep {
            irrep: irrep.to_string(),
            group: PointGroup::C2.to_string(),
        });
    }
    let want_odd = irrep.irrep == Irrep::A;
    let mut out: Vec<SymFunction> = spec
        .modes()
        .into_iter()
        .filter(|md| (md.n % 2 == 1) == want_odd)
        .map(|first| SymFunction { kind: SymKind::Single, first, irrep })
        .collect();
    sort_functions(&mut out);
    Ok(out)
}

/// Basis of any irrep of a block-diagonalizing group (`C2v` or `C2`).
pub fn build_basis(spec: &BasisSpec, irrep: IrrepLabel) -> Result<Vec<SymFunction>> {
    match irrep.group {
        PointGroup::C2v => build_c2v_basis(spec, irrep),
        PointGroup::C2 => build_c2_basis(spec, irrep),
        PointGroup::C4v => Err(PtError::IncompatibleIrrep {
            irrep: irrep.to_string(),
            group: "C2v or C2".into(),
        }),
    }
}

/// Columns of one irrep inside the adaptation matrix.
pub type IrrepRange = (IrrepLabel, std::ops::Range<usize>);

/// Orthogonal change of basis from product modes (rows, BasisSpec order) to the
/// concatenated irrep bases (columns), plus the column range of each irrep.
pub fn adaptation_matrix(
    spec: &BasisSpec,
    group: PointGroup,
) -> Result<(DMatrix<f64>, Vec<IrrepRange>)> {
    let modes = spec.modes();
    let index = |m: Mode| modes.iter().position(|x| *x == m).expect("mode in basis");
    let n = spec.size();
    let mut u = DMatrix::zeros(n, n);
    let mut ranges = Vec::new();
    let mut col = 0;
    for label in group.labels() {
        let basis = build_basis(spec, label)?;
        let start = col;
        for f in &basis {
            for (c, m) in f.terms() {
                u[(index(m), col)] = c;
            }
            col += 1;
        }
        ranges.push((label, start..col));
    }
    if col != n {
        return Err(PtError::InvalidInput(format!(
            "irrep bases of {group} hold {col} functions, expected {n}"
        )));
    }
    Ok((u, ranges))
}
