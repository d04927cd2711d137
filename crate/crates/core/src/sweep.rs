//! Coupling sweeps: continuation of eigenvalue curves in `a`, exceptional-point
//! detection and refinement, and PT-breaking reports.

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::assembler::{BlockBasis, BlockTemplate, PotentialSpec};
use crate::assignment::min_cost_assignment;
use crate::boxbasis::BasisSpec;
use crate::error::{PtError, Result};
use crate::matelem::ElementTables;
use crate::pointgroup::{apply_antiunitary, Irrep, IrrepLabel, SymFunction};
use crate::spectral::{eigen_matrix, eigen_order, eigenvalues};

/// Coupling grid `a_min, a_min + step, …, a_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub a_min: f64,
    pub a_max: f64,
    pub step: f64,
}

impl Default for SweepRange {
    fn default() -> Self {
        Self { a_min: 0.0, a_max: 100.0, step: 0.5 }
    }
}

impl SweepRange {
    pub fn new(a_min: f64, a_max: f64, step: f64) -> Result<Self> {
        let r = Self { a_min, a_max, step };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a_min.is_finite() && self.a_max.is_finite() && self.a_min < self.a_max) {
            return Err(PtError::InvalidInput(format!(
                "need a_min < a_max, got [{}, {}]",
                self.a_min, self.a_max
            )));
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(PtError::InvalidInput(format!("step must be positive, got {}", self.step)));
        }
        Ok(())
    }

    /// Grid points; the last one is `a_max` even if the step does not divide the range.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.a_max - self.a_min) / self.step * (1.0 + 1e-12)).floor() as usize;
        let mut pts: Vec<f64> = (0..=n).map(|k| self.a_min + k as f64 * self.step).collect();
        if self.a_max - pts[n] > 1e-9 * self.step {
            pts.push(self.a_max);
        } else {
            pts[n] = self.a_max;
        }
        pts
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOptions {
    /// Labels (lowest at `a_min`) whose gaps drive step halving and which are
    /// reported.
    pub track_levels: usize,
    pub max_halvings: u32,
    pub im_threshold: f64,
    /// Blocks to sweep; `None` sweeps every irrep of the potential's group.
    pub irreps: Option<Vec<IrrepLabel>>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            track_levels: 10,
            max_halvings: 5,
            im_threshold: 1e-9,
            irreps: None,
        }
    }
}

/// Two labels whose eigenvalues turned into a conjugate pair (or back) between
/// two consecutive samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coalescence {
    pub labels: (usize, usize),
    pub a_lo: f64,
    pub a_hi: f64,
    /// `true` for real → complex, `false` for complex → real.
    pub breaking: bool,
}

/// Continued eigenvalue curves of one block.
#[derive(Debug, Clone)]
pub struct BlockSweep {
    pub irrep: IrrepLabel,
    /// Sample points, strictly increasing (base grid plus inserted midpoints).
    pub a: Vec<f64>,
    /// `values[i][label]`: eigenvalue of `label` at `a[i]`. Labels are the
    /// positions in the sorted spectrum at `a_min`.
    pub values: Vec<Vec<Complex64>>,
    pub coalescences: Vec<Coalescence>,
    /// Number of midpoints inserted by step halving.
    pub refinements: usize,
}

impl BlockSweep {
    pub fn dim(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    /// Trajectory of one label.
    pub fn curve(&self, label: usize) -> Vec<(f64, Complex64)> {
        self.a.iter().zip(&self.values).map(|(&a, v)| (a, v[label])).collect()
    }

    /// Whether `label` takes part in a recorded coalescence at or before `a`.
    pub fn is_coalesced(&self, label: usize, a: f64) -> bool {
        self.coalescences
            .iter()
            .any(|c| c.breaking && c.a_hi <= a && (c.labels.0 == label || c.labels.1 == label))
    }
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub pot: PotentialSpec,
    pub spec: BasisSpec,
    pub range: SweepRange,
    pub options: SweepOptions,
    pub blocks: Vec<BlockSweep>,
}

impl SweepResult {
    pub fn block(&self, irrep: Irrep) -> Option<&BlockSweep> {
        self.blocks.iter().find(|b| b.irrep.irrep() == irrep)
    }
}

struct Solver {
    template: BlockTemplate,
}

impl Solver {
    fn new(spec: &BasisSpec, tables: &ElementTables, pot: &PotentialSpec, irrep: IrrepLabel) -> Result<Self> {
        Ok(Self { template: BlockTemplate::irrep(spec, tables, pot, irrep)? })
    }

    fn solve(&self, a: f64) -> Result<Vec<Complex64>> {
        eigenvalues(&self.template.matrix_at(Complex64::new(0.0, a))).map_err(|e| at_coupling(e, a))
    }
}

fn at_coupling(e: PtError, a: f64) -> PtError {
    match e {
        PtError::NoConvergence { context, iterations, .. } => PtError::NoConvergence {
            context,
            coupling: format!("a = {a}"),
            iterations,
        },
        other => other,
    }
}

fn block_labels(pot: &PotentialSpec, options: &SweepOptions) -> Result<Vec<IrrepLabel>> {
    let group = pot.symmetry_group()?;
    match &options.irreps {
        Some(list) => {
            for l in list {
                if l.group() != group {
                    return Err(PtError::IncompatibleIrrep {
                        irrep: l.to_string(),
                        group: group.to_string(),
                    });
                }
            }
            Ok(list.clone())
        }
        None => Ok(group.labels()),
    }
}

/// Sweeps `a` over `range` for every requested block of `pot`'s family
/// (the coupling of `pot` itself is ignored).
///
/// Grid points are solved in parallel; continuation runs sequentially per
/// block and inserts midpoints where a tracked level comes within four times
/// its own step motion of another level.
pub fn sweep(pot: &PotentialSpec, spec: &BasisSpec, range: SweepRange, options: &SweepOptions) -> Result<SweepResult> {
    range.validate()?;
    if !(options.im_threshold > 0.0) {
        return Err(PtError::InvalidInput(format!(
            "im_threshold must be positive, got {}",
            options.im_threshold
        )));
    }
    let labels = block_labels(pot, options)?;
    let tables = ElementTables::new(spec.max_index());
    // blocks that are empty at this truncation have nothing to follow
    let mut solvers = Vec::new();
    let mut kept = Vec::new();
    for &l in &labels {
        let s = Solver::new(spec, &tables, pot, l)?;
        if s.template.dim() > 0 {
            solvers.push(s);
            kept.push(l);
        }
    }
    let labels = kept;
    let grid = range.points();
    let jobs: Vec<(usize, usize)> = (0..solvers.len())
        .flat_map(|b| (0..grid.len()).map(move |k| (b, k)))
        .collect();
    let solved: Vec<Vec<Complex64>> = jobs
        .par_iter()
        .map(|&(b, k)| solvers[b].solve(grid[k]))
        .collect::<Result<_>>()?;

    let blocks = solvers
        .par_iter()
        .enumerate()
        .map(|(b, solver)| {
            let base = &solved[b * grid.len()..(b + 1) * grid.len()];
            continue_block(solver, labels[b], &grid, base, options)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        pot: *pot,
        spec: *spec,
        range,
        options: options.clone(),
        blocks,
    })
}

/// Reorders `next` so that `out[label]` continues `prev[label]`.
fn match_step(prev: &[Complex64], next: &[Complex64]) -> Vec<Complex64> {
    let n = prev.len();
    // mutual nearest neighbours with a clear margin need no global assignment
    let mut pick = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    let mut clear = true;
    for (i, p) in prev.iter().enumerate() {
        let mut best = (usize::MAX, f64::INFINITY);
        let mut second = f64::INFINITY;
        for (j, q) in next.iter().enumerate() {
            let d = (p - q).norm();
            if d < best.1 {
                second = best.1;
                best = (j, d);
            } else if d < second {
                second = d;
            }
        }
        if taken[best.0] || !(best.1 < 0.25 * second) {
            clear = false;
            break;
        }
        taken[best.0] = true;
        pick[i] = best.0;
    }
    if !clear {
        let cost: Vec<f64> = prev
            .iter()
            .flat_map(|p| next.iter().map(move |q| (p - q).norm()))
            .collect();
        pick = min_cost_assignment(n, &cost);
    }
    pick.into_iter().map(|j| next[j]).collect()
}

fn needs_halving(prev: &[Complex64], cur: &[Complex64], tracked: usize) -> bool {
    (0..tracked.min(cur.len())).any(|l| {
        let motion = (cur[l] - prev[l]).norm();
        let gap = cur
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != l)
            .map(|(_, z)| (z - cur[l]).norm())
            .fold(f64::INFINITY, f64::min);
        gap < 4.0 * motion
    })
}

struct Trace<'a> {
    solver: &'a Solver,
    tracked: usize,
    max_halvings: u32,
    a: Vec<f64>,
    values: Vec<Vec<Complex64>>,
    refinements: usize,
}

impl Trace<'_> {
    fn advance(&mut self, a_hi: f64, raw_hi: Vec<Complex64>, depth: u32) -> Result<()> {
        let a_lo = *self.a.last().expect("trace starts with a point");
        let prev = self.values.last().expect("trace starts with a point");
        let cur = match_step(prev, &raw_hi);
        if depth < self.max_halvings && needs_halving(prev, &cur, self.tracked) {
            let mid = 0.5 * (a_lo + a_hi);
            let raw_mid = self.solver.solve(mid)?;
            self.refinements += 1;
            self.advance(mid, raw_mid, depth + 1)?;
            return self.advance(a_hi, raw_hi, depth + 1);
        }
        self.a.push(a_hi);
        self.values.push(cur);
        Ok(())
    }
}

fn continue_block(
    solver: &Solver,
    irrep: IrrepLabel,
    grid: &[f64],
    base: &[Vec<Complex64>],
    options: &SweepOptions,
) -> Result<BlockSweep> {
    let mut first = base[0].clone();
    first.sort_by(eigen_order);
    let mut trace = Trace {
        solver,
        tracked: options.track_levels,
        max_halvings: options.max_halvings,
        a: vec![grid[0]],
        values: vec![first],
        refinements: 0,
    };
    for (k, &a) in grid.iter().enumerate().skip(1) {
        trace.advance(a, base[k].clone(), 0)?;
    }
    let coalescences = find_coalescences(&trace.a, &trace.values, options.im_threshold);
    Ok(BlockSweep {
        irrep,
        a: trace.a,
        values: trace.values,
        coalescences,
        refinements: trace.refinements,
    })
}

fn find_coalescences(a: &[f64], values: &[Vec<Complex64>], thr: f64) -> Vec<Coalescence> {
    let mut out = Vec::new();
    for i in 1..a.len() {
        let (lo, hi) = (&values[i - 1], &values[i]);
        let flipped: Vec<usize> = (0..hi.len())
            .filter(|&l| (lo[l].im.abs() > thr) != (hi[l].im.abs() > thr))
            .collect();
        let mut used = vec![false; flipped.len()];
        for x in 0..flipped.len() {
            if used[x] {
                continue;
            }
            let l = flipped[x];
            let breaking = hi[l].im.abs() > thr;
            // the partner sits at the conjugate on the complex side
            let side = if breaking { hi } else { lo };
            let partner = (x + 1..flipped.len())
                .filter(|&y| !used[y])
                .min_by(|&y, &z| {
                    let dy = (side[flipped[y]] - side[l].conj()).norm();
                    let dz = (side[flipped[z]] - side[l].conj()).norm();
                    dy.total_cmp(&dz)
                });
            let conj_ok = |y: usize| {
                (side[flipped[y]] - side[l].conj()).norm() <= 1e-8 * side[l].norm().max(1.0)
            };
            if let Some(y) = partner.filter(|&y| conj_ok(y)) {
                used[x] = true;
                used[y] = true;
                let m = flipped[y];
                out.push(Coalescence {
                    labels: (l.min(m), l.max(m)),
                    a_lo: a[i - 1],
                    a_hi: a[i],
                    breaking,
                });
            }
        }
    }
    out
}

/// Whether a block's spectrum is closed under conjugation at every real `a`,
/// so that real pairs can merge into conjugate pairs.
pub fn has_real_structure(irrep: IrrepLabel) -> bool {
    matches!(irrep.irrep(), Irrep::A1 | Irrep::A2 | Irrep::A | Irrep::B)
}

#[derive(Debug, Clone, PartialEq)]
pub enum EpStatus {
    Resolved,
    /// Bracketing or verification failed; the message says why.
    Unresolved(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExceptionalPoint {
    pub irrep: IrrepLabel,
    pub pair: (usize, usize),
    pub a_c: f64,
    pub e_c: Complex64,
    pub refinement_width: f64,
    /// Real → complex as `a` increases.
    pub breaking: bool,
    pub status: EpStatus,
}

impl ExceptionalPoint {
    pub fn is_resolved(&self) -> bool {
        self.status == EpStatus::Resolved
    }
}

impl fmt::Display for ExceptionalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}-{} a_c = {:.9} E_c = {:.9}{:+.3e}i",
            self.irrep, self.pair.0, self.pair.1, self.a_c, self.e_c.re, self.e_c.im
        )?;
        if let EpStatus::Unresolved(why) = &self.status {
            write!(f, " (unresolved: {why})")?;
        }
        Ok(())
    }
}

/// Bracket width at which bisection stops.
pub const EP_BRACKET_WIDTH: f64 = 1e-6;
/// Offset of the below/above verification samples.
pub const EP_PROBE_OFFSET: f64 = 1e-4;
/// Largest `|Im E|` accepted as real on the unbroken side of an EP.
pub const EP_REAL_TOL: f64 = 1e-7;

fn nearest_pair(eig: &[Complex64], center: Complex64) -> (Complex64, Complex64) {
    let mut idx: Vec<usize> = (0..eig.len()).collect();
    idx.sort_by(|&i, &j| (eig[i] - center).norm().total_cmp(&(eig[j] - center).norm()).then(i.cmp(&j)));
    let (x, y) = (eig[idx[0]], eig[idx[1]]);
    if eigen_order(&x, &y).is_le() { (x, y) } else { (y, x) }
}

fn pair_is_complex(p: (Complex64, Complex64), thr: f64) -> bool {
    p.0.im.abs().max(p.1.im.abs()) > thr
}

struct Bisection {
    a_c: f64,
    e_c: Complex64,
    width: f64,
}

/// Bisects `[lo, hi]`, whose ends straddle a change of realness of the pair
/// nearest `center`.
fn bisect(solver: &Solver, mut lo: f64, mut hi: f64, center: Complex64, thr: f64) -> Result<std::result::Result<Bisection, String>> {
    let mut center = center;
    let p_lo = nearest_pair(&solver.solve(lo)?, center);
    let p_hi = nearest_pair(&solver.solve(hi)?, center);
    let c_lo = pair_is_complex(p_lo, thr);
    if c_lo == pair_is_complex(p_hi, thr) {
        return Ok(Err(format!("no realness change between a = {lo} and a = {hi}")));
    }
    while hi - lo > EP_BRACKET_WIDTH {
        let mid = 0.5 * (lo + hi);
        let p = nearest_pair(&solver.solve(mid)?, center);
        if pair_is_complex(p, thr) == c_lo {
            lo = mid;
        } else {
            hi = mid;
        }
        center = Complex64::new(0.5 * (p.0.re + p.1.re), 0.0);
    }
    let a_c = 0.5 * (lo + hi);
    let p = nearest_pair(&solver.solve(a_c)?, center);
    Ok(Ok(Bisection { a_c, e_c: 0.5 * (p.0 + p.1), width: hi - lo }))
}

/// Checks the EP invariant at `a_c ∓ offset`: a real distinct pair on the
/// unbroken side and a conjugate pair with `|Im| ≥ thr` on the other.
fn verify(solver: &Solver, a_c: f64, e_c: Complex64, breaking: bool, thr: f64) -> Result<std::result::Result<(), String>> {
    let (real_side, complex_side) = if breaking {
        (a_c - EP_PROBE_OFFSET, a_c + EP_PROBE_OFFSET)
    } else {
        (a_c + EP_PROBE_OFFSET, a_c - EP_PROBE_OFFSET)
    };
    let r = nearest_pair(&solver.solve(real_side)?, e_c);
    let worst = r.0.im.abs().max(r.1.im.abs());
    if worst > EP_REAL_TOL {
        return Ok(Err(format!("|Im E| = {worst:.3e} on the real side")));
    }
    if r.0 == r.1 {
        return Ok(Err("pair not distinct on the real side".into()));
    }
    let c = nearest_pair(&solver.solve(complex_side)?, e_c);
    let least = c.0.im.abs().min(c.1.im.abs());
    let conj = (c.0 - c.1.conj()).norm();
    if least < thr {
        return Ok(Err(format!("|Im E| = {least:.3e} below threshold on the complex side")));
    }
    if conj > 1e-8 * c.0.norm().max(1.0) {
        return Ok(Err(format!("complex side not a conjugate pair (defect {conj:.3e})")));
    }
    Ok(Ok(()))
}

/// Refines every coalescence recorded in the sweep of a block with real
/// structure. Candidates that fail bracketing or verification are returned
/// with [`EpStatus::Unresolved`].
pub fn find_exceptional_points(sr: &SweepResult, im_threshold: f64) -> Result<Vec<ExceptionalPoint>> {
    let tables = ElementTables::new(sr.spec.max_index());
    let mut out = Vec::new();
    for block in sr.blocks.iter().filter(|b| has_real_structure(b.irrep)) {
        let solver = Solver::new(&sr.spec, &tables, &sr.pot, block.irrep)?;
        let tracked = sr.options.track_levels;
        let found: Vec<ExceptionalPoint> = block
            .coalescences
            .par_iter()
            .filter(|c| c.labels.0 < tracked)
            .map(|c| refine(&solver, block, c, im_threshold))
            .collect::<Result<_>>()?;
        out.extend(found);
    }
    Ok(out)
}

fn refine(solver: &Solver, block: &BlockSweep, c: &Coalescence, thr: f64) -> Result<ExceptionalPoint> {
    let i_hi = block.a.iter().position(|&a| a == c.a_hi).expect("coalescence on grid");
    let complex_side = if c.breaking { &block.values[i_hi] } else { &block.values[i_hi - 1] };
    let real_side = if c.breaking { &block.values[i_hi - 1] } else { &block.values[i_hi] };
    let center = 0.25
        * (complex_side[c.labels.0] + complex_side[c.labels.1] + real_side[c.labels.0] + real_side[c.labels.1]);
    let center = Complex64::new(center.re, 0.0);
    let mut ep = ExceptionalPoint {
        irrep: block.irrep,
        pair: c.labels,
        a_c: 0.5 * (c.a_lo + c.a_hi),
        e_c: center,
        refinement_width: c.a_hi - c.a_lo,
        breaking: c.breaking,
        status: EpStatus::Resolved,
    };
    match bisect(solver, c.a_lo, c.a_hi, center, thr)? {
        Ok(b) => {
            ep.a_c = b.a_c;
            ep.e_c = b.e_c;
            ep.refinement_width = b.width;
            if let Err(why) = verify(solver, b.a_c, b.e_c, c.breaking, thr)? {
                ep.status = EpStatus::Unresolved(why);
            }
        }
        Err(why) => ep.status = EpStatus::Unresolved(why),
    }
    Ok(ep)
}

/// An EP re-located in a larger basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceCheck {
    pub max_index: usize,
    /// `None` if the EP could not be bracketed near its old location.
    pub a_c: Option<f64>,
    pub shift: f64,
    pub converged: bool,
}

/// Largest accepted EP shift between `M` and `M + 4`.
pub const EP_CONVERGENCE_TOL: f64 = 1e-4;

/// Re-locates `ep` with the basis grown to `max_index` by bisection in a
/// window around the old `a_c`.
pub fn recheck_ep(ep: &ExceptionalPoint, pot: &PotentialSpec, max_index: usize, im_threshold: f64) -> Result<ConvergenceCheck> {
    let spec = BasisSpec::new(max_index)?;
    let tables = ElementTables::new(max_index);
    let solver = Solver::new(&spec, &tables, pot, ep.irrep)?;
    let center = Complex64::new(ep.e_c.re, 0.0);
    let real_at = |a: f64| -> Result<bool> {
        Ok(!pair_is_complex(nearest_pair(&solver.solve(a)?, center), im_threshold))
    };
    let mut w = EP_PROBE_OFFSET;
    let mut found = None;
    while w <= 0.5 {
        let (lo, hi) = (ep.a_c - w, ep.a_c + w);
        let (r_lo, r_hi) = (real_at(lo)?, real_at(hi)?);
        if r_lo == ep.breaking && r_hi != ep.breaking {
            found = Some((lo, hi));
            break;
        }
        w *= 4.0;
    }
    let Some((lo, hi)) = found else {
        return Ok(ConvergenceCheck { max_index, a_c: None, shift: f64::INFINITY, converged: false });
    };
    let a_c = match bisect(&solver, lo, hi, center, im_threshold)? {
        Ok(b) => b.a_c,
        Err(_) => {
            return Ok(ConvergenceCheck { max_index, a_c: None, shift: f64::INFINITY, converged: false });
        }
    };
    let shift = (a_c - ep.a_c).abs();
    Ok(ConvergenceCheck {
        max_index,
        a_c: Some(a_c),
        shift,
        converged: shift <= EP_CONVERGENCE_TOL,
    })
}

/// What the antiunitary operator does to one eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub enum PtVerdict {
    /// Mapped onto itself up to a unimodular phase.
    Unbroken { phase_defect: f64 },
    /// Mapped onto another eigenvector, here one of `partner_irrep`.
    Broken {
        partner_irrep: IrrepLabel,
        partner_index: usize,
        /// `|E_partner − conj(E)|`.
        energy_mismatch: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelReport {
    pub irrep: IrrepLabel,
    pub index: usize,
    pub energy: Complex64,
    pub verdict: PtVerdict,
    /// Verdict agrees with `|Im E| ≤ tol`.
    pub consistent: bool,
}

struct SolvedBlock {
    label: IrrepLabel,
    basis: Vec<SymFunction>,
    eig: Vec<Complex64>,
    vecs: nalgebra::DMatrix<Complex64>,
}

/// Applies the model's antiunitary symmetry to every eigenvector of every
/// block at coupling `a`.
pub fn pt_breaking_report(spec: &BasisSpec, pot: &PotentialSpec, a: f64, tol: f64) -> Result<Vec<LevelReport>> {
    if !(a > 0.0) {
        return Err(PtError::InvalidInput(format!("coupling must be positive, got {a}")));
    }
    let group = pot.symmetry_group()?;
    let op = group.antiunitary();
    let tables = ElementTables::new(spec.max_index());
    let pot = pot.with_g(Complex64::new(0.0, a));
    let solved: Vec<SolvedBlock> = group
        .labels()
        .into_par_iter()
        .map(|label| {
            let t = BlockTemplate::irrep(spec, &tables, &pot, label)?;
            let BlockBasis::Functions(basis) = t.basis().clone() else {
                unreachable!("irrep blocks carry symmetry functions")
            };
            let s = eigen_matrix(&t.matrix_at(pot.g()), true).map_err(|e| at_coupling(e, a))?;
            Ok(SolvedBlock {
                label,
                basis,
                eig: s.eigenvalues,
                vecs: s.eigenvectors.expect("requested"),
            })
        })
        .collect::<Result<_>>()?;
    let position: HashMap<SymFunction, (usize, usize)> = solved
        .iter()
        .enumerate()
        .flat_map(|(b, s)| s.basis.iter().enumerate().map(move |(i, f)| (*f, (b, i))))
        .collect();

    let mut out = Vec::new();
    for s in &solved {
        // image of each basis function: target block, position and sign
        let images: Vec<(usize, usize, f64)> = s
            .basis
            .iter()
            .map(|f| {
                let r = apply_antiunitary(op, f)?;
                let (b, i) = position[&r.image];
                Ok((b, i, r.sign))
            })
            .collect::<Result<_>>()?;
        let target = images.first().map_or(0, |x| x.0);
        let t = &solved[target];
        for k in 0..s.eig.len() {
            let mut w = vec![Complex64::new(0.0, 0.0); t.basis.len()];
            for (i, &(_, j, sign)) in images.iter().enumerate() {
                w[j] = s.vecs[(i, k)].conj() * sign;
            }
            let wn = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let overlaps: Vec<f64> = (0..t.eig.len())
                .map(|j| {
                    let col = t.vecs.column(j);
                    let dot: Complex64 = col.iter().zip(&w).map(|(c, x)| c.conj() * x).sum();
                    dot.norm() / (col.norm() * wn)
                })
                .collect();
            let best = (0..overlaps.len())
                .max_by(|&i, &j| overlaps[i].total_cmp(&overlaps[j]).then(j.cmp(&i)))
                .unwrap_or(0);
            let energy = s.eig[k];
            let verdict = if target == solved.iter().position(|x| x.label == s.label).unwrap_or(0) && best == k {
                PtVerdict::Unbroken { phase_defect: 1.0 - overlaps[best] }
            } else {
                PtVerdict::Broken {
                    partner_irrep: t.label,
                    partner_index: best,
                    energy_mismatch: (t.eig[best] - energy.conj()).norm(),
                }
            };
            let real = energy.im.abs() <= tol;
            let consistent = match &verdict {
                PtVerdict::Unbroken { phase_defect } => real && *phase_defect < 1e-6,
                PtVerdict::Broken { energy_mismatch, .. } => !real && *energy_mismatch <= 1e-8 * energy.norm().max(1.0),
            };
            out.push(LevelReport { irrep: s.label, index: k, energy, verdict, consistent });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembler::Model;
    use crate::pointgroup::PointGroup;

    fn label(g: PointGroup, i: Irrep) -> IrrepLabel {
        IrrepLabel::new(g, i).unwrap()
    }

    #[test]
    fn grid_ends_at_a_max() {
        let r = SweepRange::new(0.0, 1.0, 0.3).unwrap();
        assert_eq!(r.points(), vec![0.0, 0.3, 0.6, 0.8999999999999999, 1.0]);
        let r = SweepRange::new(0.0, 100.0, 0.5).unwrap();
        let p = r.points();
        assert_eq!(p.len(), 201);
        assert_eq!(*p.last().unwrap(), 100.0);
        assert!(SweepRange::new(1.0, 0.0, 0.1).is_err());
        assert!(SweepRange::new(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn matching_follows_crossing_curves() {
        let prev = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        let next = [Complex64::new(0.9, 0.0), Complex64::new(0.1, 0.0)];
        assert_eq!(match_step(&prev, &next), vec![next[1], next[0]]);
    }

    #[test]
    fn origin_is_unperturbed() {
        let spec = BasisSpec::new(5).unwrap();
        let range = SweepRange::new(0.0, 0.5, 0.25).unwrap();
        let sr = sweep(&Model::Xy.at(0.0), &spec, range, &SweepOptions::default()).unwrap();
        let mut all: Vec<f64> = sr.blocks.iter().flat_map(|b| b.values[0].iter().map(|z| z.re)).collect();
        let mut e0: Vec<f64> = spec.modes().iter().map(|m| m.energy()).collect();
        all.sort_by(f64::total_cmp);
        e0.sort_by(f64::total_cmp);
        assert_eq!(all.len(), 25);
        for (x, y) in all.iter().zip(&e0) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn b1_turns_complex_without_eps() {
        let spec = BasisSpec::new(6).unwrap();
        let range = SweepRange::new(0.0, 0.5, 0.1).unwrap();
        let opts = SweepOptions {
            irreps: Some(vec![label(PointGroup::C2v, Irrep::B1)]),
            ..SweepOptions::default()
        };
        let sr = sweep(&Model::Xy.at(0.0), &spec, range, &opts).unwrap();
        let b = &sr.blocks[0];
        for (a, z) in b.curve(0).into_iter().skip(1) {
            assert!(z.im.abs() > 0.0, "a = {a}: {z}");
        }
        assert!(find_exceptional_points(&sr, 1e-9).unwrap().is_empty());
    }

    #[test]
    fn report_at_small_coupling() {
        let spec = BasisSpec::new(6).unwrap();
        let r = pt_breaking_report(&spec, &Model::Xy.at(0.0), 0.1, 1e-9).unwrap();
        assert_eq!(r.len(), 36);
        for l in &r {
            match l.irrep.irrep() {
                Irrep::B1 | Irrep::B2 => {
                    assert!(matches!(l.verdict, PtVerdict::Broken { .. }), "{l:?}")
                }
                _ => {}
            }
        }
        let a1_low = r.iter().find(|l| l.irrep.irrep() == Irrep::A1 && l.index == 0).unwrap();
        assert!(matches!(a1_low.verdict, PtVerdict::Unbroken { .. }));
        assert!(a1_low.consistent);
        let r = pt_breaking_report(&spec, &Model::Xyy.at(0.0), 0.1, 1e-9).unwrap();
        assert!(r.iter().all(|l| matches!(l.verdict, PtVerdict::Unbroken { .. }) && l.consistent));
    }
}
