//! Product eigenfunctions of the particle in the square box `[-1, 1]²`.
//!
//! A mode `(m, n)` is `φ_mn(x, y) = sin(mπ(x+1)/2) · sin(nπ(y+1)/2)` with energy
//! `(m² + n²)π²/4`. The one-dimensional factors are orthonormal on `[-1, 1]`.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use crate::error::{PtError, Result};

/// Default absolute tolerance used when grouping degenerate energies.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Pair of positive quantum numbers labelling `φ_mn`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mode {
    pub m: usize,
    pub n: usize,
}

impl Mode {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(PtError::InvalidInput(format!(
                "quantum numbers must be positive, got ({m}, {n})"
            )));
        }
        Ok(Self { m, n })
    }

    /// Constructor for indices already known to be positive.
    pub(crate) const fn of(m: usize, n: usize) -> Self {
        Self { m, n }
    }

    /// `m² + n²`, the integer part of the energy.
    pub fn norm_sq(self) -> u64 {
        (self.m * self.m + self.n * self.n) as u64
    }

    pub fn energy(self) -> f64 {
        unperturbed_energy(self)
    }

    pub fn swapped(self) -> Self {
        Self { m: self.n, n: self.m }
    }

    /// Value of `φ_mn` at `(x, y)`.
    pub fn eval(self, x: f64, y: f64) -> f64 {
        box_function(self.m, x) * box_function(self.n, y)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m, self.n)
    }
}

/// One-dimensional box eigenfunction `sin(kπ(x+1)/2)`.
pub fn box_function(k: usize, x: f64) -> f64 {
    (k as f64 * PI * (x + 1.0) / 2.0).sin()
}

/// `E⁰_mn = (m² + n²)π²/4`.
pub fn unperturbed_energy(mode: Mode) -> f64 {
    mode.norm_sq() as f64 * PI * PI / 4.0
}

/// Deterministic total order: ascending energy, ties broken by `(m, n)`.
pub fn mode_order(a: &Mode, b: &Mode) -> Ordering {
    a.norm_sq().cmp(&b.norm_sq()).then_with(|| a.cmp(b))
}

/// Truncated product basis: both quantum numbers run over `1..=max_index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisSpec {
    max_index: usize,
}

impl BasisSpec {
    pub fn new(max_index: usize) -> Result<Self> {
        if max_index < 2 {
            return Err(PtError::InvalidInput(format!(
                "basis truncation M must be at least 2, got {max_index}"
            )));
        }
        Ok(Self { max_index })
    }

    pub fn max_index(&self) -> usize {
        self.max_index
    }

    /// Number of product functions, `M²`.
    pub fn size(&self) -> usize {
        self.max_index * self.max_index
    }

    pub fn contains(&self, mode: Mode) -> bool {
        mode.m >= 1 && mode.n >= 1 && mode.m <= self.max_index && mode.n <= self.max_index
    }

    /// All `M²` modes in the canonical order.
    pub fn modes(&self) -> Vec<Mode> {
        let mut modes: Vec<Mode> = (1..=self.max_index)
            .flat_map(|m| (1..=self.max_index).map(move |n| Mode::of(m, n)))
            .collect();
        modes.sort_by(mode_order);
        modes
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegeneracyKind {
    Singleton,
    /// Exactly `{(m,n), (n,m)}` with `m ≠ n`.
    SymmetryPair,
    /// Any other coincidence, e.g. `{(7,1), (1,7), (5,5)}`.
    Accidental,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegenerateGroup {
    pub energy: f64,
    /// Members in canonical mode order.
    pub members: Vec<Mode>,
    pub kind: DegeneracyKind,
}

impl DegenerateGroup {
    /// Group built from explicit members; the kind is inferred.
    pub fn from_members(mut members: Vec<Mode>) -> Result<Self> {
        if members.is_empty() {
            return Err(PtError::InvalidInput("empty degenerate group".into()));
        }
        members.sort_by(mode_order);
        members.dedup();
        let e0 = members[0].norm_sq();
        if members.iter().any(|md| md.norm_sq() != e0) {
            return Err(PtError::InvalidInput(format!(
                "modes {members:?} are not degenerate"
            )));
        }
        let kind = classify_members(&members);
        Ok(Self {
            energy: members[0].energy(),
            members,
            kind,
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn classify_members(members: &[Mode]) -> DegeneracyKind {
    match members {
        [_] => DegeneracyKind::Singleton,
        [a, b] if a.m != a.n && *b == a.swapped() => DegeneracyKind::SymmetryPair,
        _ => DegeneracyKind::Accidental,
    }
}

/// Partitions the truncated basis into groups of equal unperturbed energy.
///
/// Energies are compared through the integer `m² + n²` first; two distinct
/// integers are only merged if their energies differ by less than `tol`, which
/// for the default tolerance never happens.
pub fn degenerate_groups(spec: &BasisSpec, tol: f64) -> Result<Vec<DegenerateGroup>> {
    if !(tol > 0.0) {
        return Err(PtError::InvalidInput(format!(
            "degeneracy tolerance must be positive, got {tol}"
        )));
    }
    let modes = spec.modes();
    let mut groups: Vec<Vec<Mode>> = Vec::new();
    for mode in modes {
        match groups.last_mut() {
            Some(last)
                if last[0].norm_sq() == mode.norm_sq()
                    || (mode.energy() - last[0].energy()).abs() < tol =>
            {
                last.push(mode)
            }
            _ => groups.push(vec![mode]),
        }
    }
    Ok(groups
        .into_iter()
        .map(|members| DegenerateGroup {
            energy: members[0].energy(),
            kind: classify_members(&members),
            members,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn energies_match_closed_values() {
        assert!((unperturbed_energy(Mode::of(1, 1)) - 4.934802200544679).abs() < 1e-12);
        assert!((unperturbed_energy(Mode::of(1, 2)) - 12.337005501361698).abs() < 1e-12);
        let e = unperturbed_energy(Mode::of(7, 1));
        assert_eq!(e, unperturbed_energy(Mode::of(1, 7)));
        assert_eq!(e, unperturbed_energy(Mode::of(5, 5)));
        assert!((e - 123.37005501361698).abs() < 1e-10);
    }

    #[test]
    fn invalid_modes_and_specs_are_rejected() {
        assert!(Mode::new(0, 1).is_err());
        assert!(BasisSpec::new(1).is_err());
        assert!(degenerate_groups(&BasisSpec::new(3).unwrap(), 0.0).is_err());
    }

    #[test]
    fn groups_for_m2() {
        let g = degenerate_groups(&BasisSpec::new(2).unwrap(), DEGENERACY_TOL).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g[0].members, vec![Mode::of(1, 1)]);
        assert_eq!(g[0].kind, DegeneracyKind::Singleton);
        assert_eq!(g[1].members, vec![Mode::of(1, 2), Mode::of(2, 1)]);
        assert_eq!(g[1].kind, DegeneracyKind::SymmetryPair);
        assert_eq!(g[2].members, vec![Mode::of(2, 2)]);
        assert_eq!(g[2].kind, DegeneracyKind::Singleton);
    }

    #[test]
    fn accidental_group_at_m7() {
        let groups = degenerate_groups(&BasisSpec::new(7).unwrap(), DEGENERACY_TOL).unwrap();
        let g = groups.iter().find(|g| g.members.contains(&Mode::of(5, 5))).unwrap();
        assert_eq!(g.members, vec![Mode::of(1, 7), Mode::of(5, 5), Mode::of(7, 1)]);
        assert_eq!(g.kind, DegeneracyKind::Accidental);
    }

    #[test]
    fn tiny_tolerance_never_merges_distinct_energies() {
        let groups = degenerate_groups(&BasisSpec::new(12).unwrap(), f64::MIN_POSITIVE).unwrap();
        for g in &groups {
            assert!(g.members.iter().all(|m| m.norm_sq() == g.members[0].norm_sq()));
        }
        for w in groups.windows(2) {
            assert!(w[0].members[0].norm_sq() < w[1].members[0].norm_sq());
        }
    }

    #[test]
    fn explicit_group_kind_inference() {
        let g = DegenerateGroup::from_members(vec![Mode::of(2, 3), Mode::of(3, 2)]).unwrap();
        assert_eq!(g.kind, DegeneracyKind::SymmetryPair);
        assert!(DegenerateGroup::from_members(vec![Mode::of(1, 2), Mode::of(1, 3)]).is_err());
    }
}
