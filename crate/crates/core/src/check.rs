//! The property suite behind `ptbox check`: ten numbered criteria, each
//! producing a pass/fail verdict with a one-line summary.

use std::f64::consts::PI;
use std::fs;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use crate::assembler::{assemble_block, assemble_full, Model, PotentialSpec};
use crate::boxbasis::{unperturbed_energy, BasisSpec, DegenerateGroup, Mode};
use crate::error::Result;
use crate::figures::write_figures;
use crate::matelem::{closed_form, quadrature_oracle, x_element};
use crate::perturbation::{
    classify_phase_transition, first_order, first_order_formula, slope_check, LevelRef, PhasePrediction,
};
use crate::pointgroup::{Irrep, IrrepLabel, PointGroup};
use crate::spectral::{
    char_poly, conjugation_defect, conjugation_pairing, eigen, eigen_order, multiset_distance,
};
use crate::sweep::{
    find_exceptional_points, recheck_ep, sweep, ExceptionalPoint, SweepOptions, SweepRange,
    EP_BRACKET_WIDTH, EP_CONVERGENCE_TOL,
};

/// `1024 / (81 π⁴)`, the first-order splitting coefficient of the lowest pair.
pub fn lowest_pair_coefficient() -> f64 {
    1024.0 / (81.0 * PI.powi(4))
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    /// Wall-clock limit for the criterion, if it has one.
    pub budget: Option<Duration>,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "{} [{:>2}] {}: {} ({:.2?})",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed
        )
    }
}

type Verdict = (bool, String);

pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    pub budget: Option<Duration>,
    run: fn() -> Result<Verdict>,
}

pub fn criteria() -> Vec<Criterion> {
    let secs = |s| Some(Duration::from_secs(s));
    vec![
        Criterion { id: 1, title: "unperturbed energies", budget: secs(1), run: unperturbed_energies },
        Criterion { id: 2, title: "matrix elements", budget: secs(5), run: matrix_elements },
        Criterion { id: 3, title: "first-order formula", budget: None, run: first_order_pairs },
        Criterion { id: 4, title: "linear onset of complexity", budget: secs(10), run: linear_onset },
        Criterion { id: 5, title: "conjugation pairing", budget: None, run: conjugation },
        Criterion { id: 6, title: "block/full equivalence", budget: None, run: block_full },
        Criterion { id: 7, title: "characteristic polynomial", budget: None, run: characteristic_polynomial },
        Criterion { id: 8, title: "phase dichotomy", budget: None, run: phase_dichotomy },
        Criterion { id: 9, title: "exceptional points", budget: secs(300), run: exceptional_points },
        Criterion { id: 10, title: "figure determinism", budget: None, run: figure_determinism },
    ]
}

/// Runs the selected criteria (all if `only` is empty), reporting each as it finishes.
pub fn run(only: &[u8], mut report: impl FnMut(&Outcome)) -> Vec<Outcome> {
    let mut out = Vec::new();
    for c in criteria() {
        if !only.is_empty() && !only.contains(&c.id) {
            continue;
        }
        let t = Instant::now();
        let res = (c.run)();
        let elapsed = t.elapsed();
        let (mut passed, mut detail) = match res {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        if let Some(b) = c.budget {
            if elapsed > b {
                passed = false;
                detail.push_str(&format!("; over the {b:.0?} budget"));
            }
        }
        let o = Outcome { id: c.id, title: c.title, passed, detail, elapsed, budget: c.budget };
        report(&o);
        out.push(o);
    }
    out
}

fn label(g: PointGroup, i: Irrep) -> IrrepLabel {
    IrrepLabel::new(g, i).expect("irrep belongs to group")
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn unperturbed_energies() -> Result<Verdict> {
    let spec = BasisSpec::new(20)?;
    let mut worst = 0.0f64;
    for m in 1..=20usize {
        for n in 1..=20usize {
            let exact = ((m * m + n * n) as f64) * PI * PI / 4.0;
            worst = worst.max(rel(unperturbed_energy(Mode::new(m, n)?), exact));
        }
    }
    // the assembled Hamiltonian at zero coupling carries the same values
    let h0 = assemble_full(&spec, &Model::Xy.at(0.0));
    for (i, md) in spec.modes().iter().enumerate() {
        let exact = ((md.m * md.m + md.n * md.n) as f64) * PI * PI / 4.0;
        worst = worst.max(rel(h0.matrix[(i, i)].re, exact));
    }
    Ok((worst <= 1e-12, format!("max relative error {worst:.2e} over m, n <= 20")))
}

fn matrix_elements() -> Result<Verdict> {
    let mut worst = 0.0f64;
    for p in 0..=2u32 {
        for k in 1..=20 {
            for m in 1..=20 {
                let cf = closed_form(p, k, m).expect("closed form for p <= 2");
                worst = worst.max((cf - quadrature_oracle(p, k, m)).abs());
            }
        }
    }
    let x12 = x_element(1, 2);
    let tie = rel(x12 * x12, lowest_pair_coefficient());
    Ok((
        worst <= 1e-12 && tie <= 1e-12,
        format!("closed form vs quadrature {worst:.2e}; (X12)^2 vs 1024/(81 pi^4) {tie:.2e}"),
    ))
}

fn first_order_pairs() -> Result<Verdict> {
    let pot = Model::Xy.at(1.0);
    let mut worst = 0.0f64;
    let mut nonzero_even = 0;
    for m in 1..=5 {
        for j in 0..=3 {
            let n = m + 2 * j + 1;
            let g = DegenerateGroup::from_members(vec![Mode::new(m, n)?, Mode::new(n, m)?])?;
            let r = first_order(&g, &pot);
            let f = first_order_formula(m, j);
            let mut ims: Vec<f64> = r.corrections.iter().map(|z| z.im).collect();
            ims.sort_by(f64::total_cmp);
            worst = worst.max(rel(-ims[0], f)).max(rel(ims[1], f));
            worst = worst.max(r.corrections.iter().map(|z| z.re.abs() / f).fold(0.0, f64::max));

            let n = m + 2 * j + 2;
            let g = DegenerateGroup::from_members(vec![Mode::new(m, n)?, Mode::new(n, m)?])?;
            nonzero_even += first_order(&g, &pot).corrections.iter().filter(|z| z.norm() != 0.0).count();
        }
    }
    Ok((
        worst <= 1e-12 && nonzero_even == 0,
        format!("max relative error {worst:.2e}; {nonzero_even} nonzero corrections for n = m + 2j"),
    ))
}

fn linear_onset() -> Result<Verdict> {
    let spec = BasisSpec::new(20)?;
    let pot = Model::Xy.at(0.0);
    let c = lowest_pair_coefficient();
    let g = PointGroup::C2v;
    let b1 = slope_check(LevelRef { irrep: Some(label(g, Irrep::B1)), index: 0 }, &pot, 1e-3, &spec)?;
    let b2 = slope_check(LevelRef { irrep: Some(label(g, Irrep::B2)), index: 0 }, &pot, 1e-3, &spec)?;
    let a1 = slope_check(LevelRef { irrep: Some(label(g, Irrep::A1)), index: 0 }, &pot, 1e-3, &spec)?;
    let e1 = rel(b1.measured.im, c).max(b1.measured.re.abs() / c);
    let e2 = rel(b2.measured.im, -c).max(b2.measured.re.abs() / c);
    let s = a1.measured.norm();
    Ok((
        e1 <= 1e-4 && e2 <= 1e-4 && s <= 1e-6,
        format!(
            "B1 slope {:.9}i (rel {e1:.1e}), B2 slope {:.9}i (rel {e2:.1e}), |A1 slope| {s:.1e}",
            b1.measured.im, b2.measured.im
        ),
    ))
}

fn conjugation() -> Result<Verdict> {
    let spec = BasisSpec::new(20)?;
    let pot = Model::Xy.at(1.0);
    let g = PointGroup::C2v;
    let b1 = eigen(&assemble_block(&spec, label(g, Irrep::B1), &pot)?, false)?;
    let b2 = eigen(&assemble_block(&spec, label(g, Irrep::B2), &pot)?, false)?;
    let pairing = conjugation_pairing(&b1.eigenvalues, &b2.eigenvalues, 1e-8);
    let full = eigen(&assemble_full(&spec, &pot), false)?;
    let defect = conjugation_defect(&full.eigenvalues);
    let (ok_pair, pair_msg) = match pairing {
        Ok(p) => (true, format!("B1/B2 paired within {:.2e}", p.max_distance)),
        Err(e) => (false, e.to_string()),
    };
    Ok((
        ok_pair && defect <= 1e-10,
        format!("{pair_msg}; full spectrum conjugation defect {defect:.2e}"),
    ))
}

fn block_full() -> Result<Verdict> {
    let spec = BasisSpec::new(10)?;
    let pot = Model::Xy.at(1.0);
    let mut union = Vec::new();
    for l in PointGroup::C2v.labels() {
        union.extend(eigen(&assemble_block(&spec, l, &pot)?, false)?.eigenvalues);
    }
    let full = eigen(&assemble_full(&spec, &pot), false)?;
    let d = multiset_distance(&union, &full.eigenvalues);
    Ok((d <= 1e-8, format!("multiset distance {d:.2e} over {} eigenvalues", union.len())))
}

fn characteristic_polynomial() -> Result<Verdict> {
    let spec = BasisSpec::new(4)?;
    let a = 1.0;
    let full = char_poly(&assemble_full(&spec, &Model::Xy.at(a)))?;
    let full_imag = full.max_relative_imag();
    let g = PointGroup::C2v;
    let mut sym_defect = 0.0f64;
    for i in [Irrep::A1, Irrep::A2] {
        let plus = char_poly(&assemble_block(&spec, label(g, i), &Model::Xy.at(a))?)?;
        let minus = char_poly(&assemble_block(&spec, label(g, i), &Model::Xy.at(-a))?)?;
        for (x, y) in plus.coefficients.iter().zip(&minus.coefficients) {
            sym_defect = sym_defect.max((x - y).norm() / x.norm().max(1.0));
        }
    }
    let b1 = char_poly(&assemble_block(&spec, label(g, Irrep::B1), &Model::Xy.at(a))?)?;
    let b1_imag = b1.coefficients.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    Ok((
        full_imag <= 1e-8 && sym_defect <= 1e-10 && b1_imag > 1e-6,
        format!(
            "full max rel |Im c| {full_imag:.2e}; A1/A2 a -> -a defect {sym_defect:.2e}; B1 max |Im c| {b1_imag:.3e}"
        ),
    ))
}

fn phase_dichotomy() -> Result<Verdict> {
    let spec = BasisSpec::new(20)?;
    let a = 0.1;
    let b1 = eigen(&assemble_block(&spec, label(PointGroup::C2v, Irrep::B1), &Model::Xy.at(a))?, false)?;
    let min_b1 = b1.eigenvalues.iter().take(10).map(|z| z.im.abs()).fold(f64::INFINITY, f64::min);

    let pot2 = Model::Xyy.at(a);
    let mut all = Vec::new();
    for l in PointGroup::C2.labels() {
        all.extend(eigen(&assemble_block(&spec, l, &pot2)?, false)?.eigenvalues);
    }
    all.sort_by(eigen_order);
    let max_xyy = all.iter().take(20).map(|z| z.im.abs()).fold(0.0, f64::max);

    let v1 = classify_phase_transition(&Model::Xy.at(a)).prediction;
    let v2 = classify_phase_transition(&pot2).prediction;
    Ok((
        min_b1 > 1e-6
            && max_xyy <= 1e-8
            && v1 == PhasePrediction::BrokenAtOrigin
            && v2 == PhasePrediction::RealWindowExpected,
        format!("xy: min |Im E| of lowest 10 B1 {min_b1:.3e} ({v1}); xyy: max |Im E| of lowest 20 {max_xyy:.2e} ({v2})"),
    ))
}

/// Reference EPs of the default scan at `M = 20`: irrep, label pair, `a_c`, `Re E_c`.
pub const EP_GOLDENS: &[(Irrep, (usize, usize), f64, f64)] = &[
    (Irrep::A1, (6, 7), 11.397675037384, 81.513510920733),
    (Irrep::A1, (3, 4), 11.700034618378, 46.955936171456),
    (Irrep::A1, (1, 2), 12.879987239838, 22.272992629656),
    (Irrep::A2, (9, 10), 53.594912052155, 191.316344190565),
    (Irrep::A2, (6, 7), 53.868748188019, 136.899934307362),
    (Irrep::A2, (3, 4), 54.631235599518, 92.324746875300),
    (Irrep::A2, (1, 2), 58.956477642059, 57.624904711957),
    (Irrep::A, (5, 6), 19.671886920929, 43.172317515240),
    (Irrep::A, (7, 8), 20.064493656158, 62.947932686898),
    (Irrep::A, (3, 4), 35.286349773407, 29.070847735023),
    (Irrep::A, (9, 10), 37.261000156403, 68.635953224684),
    (Irrep::B, (9, 10), 37.200695514679, 95.827251580438),
    (Irrep::B, (3, 5), 37.263289928436, 46.328957977959),
    (Irrep::B, (0, 1), 48.392017841339, 17.664301077628),
    (Irrep::B, (7, 8), 50.058747768402, 75.224466735427),
    (Irrep::B, (4, 6), 84.325731754303, 54.484858873884),
];

/// Scans both models with the default range and refines every EP.
pub fn default_scan(model: Model) -> Result<(PotentialSpec, Vec<ExceptionalPoint>)> {
    let spec = BasisSpec::new(20)?;
    let irreps = match model {
        Model::Xy => vec![Irrep::A1, Irrep::A2],
        Model::Xyy => vec![Irrep::A, Irrep::B],
    };
    let options = SweepOptions {
        irreps: Some(irreps.into_iter().map(|i| label(model.group(), i)).collect()),
        ..SweepOptions::default()
    };
    let pot = model.at(0.0);
    let sr = sweep(&pot, &spec, SweepRange::default(), &options)?;
    Ok((pot, find_exceptional_points(&sr, options.im_threshold)?))
}

fn exceptional_points() -> Result<Verdict> {
    let mut problems = Vec::new();
    let mut found = Vec::new();
    let mut worst_shift = 0.0f64;
    let mut count = 0;
    for model in [Model::Xy, Model::Xyy] {
        let (pot, eps) = default_scan(model)?;
        let irreps: &[Irrep] = match model {
            Model::Xy => &[Irrep::A1, Irrep::A2],
            Model::Xyy => &[Irrep::A, Irrep::B],
        };
        for &i in irreps {
            if !eps.iter().any(|e| e.irrep.irrep() == i && e.is_resolved()) {
                problems.push(format!("no EP in {i} of {model}"));
            }
        }
        for ep in &eps {
            count += 1;
            if !ep.is_resolved() {
                problems.push(format!("{ep}"));
                continue;
            }
            if ep.refinement_width > EP_BRACKET_WIDTH {
                problems.push(format!("{ep}: bracket {:.1e}", ep.refinement_width));
            }
            let c = recheck_ep(ep, &pot, 24, SweepOptions::default().im_threshold)?;
            worst_shift = worst_shift.max(c.shift);
            if !c.converged {
                problems.push(format!("{ep}: shift {:.2e} at M = 24", c.shift));
            }
            found.push(ep.clone());
        }
    }
    for &(irrep, pair, a_c, e_c) in EP_GOLDENS {
        let hit = found.iter().any(|e| {
            e.irrep.irrep() == irrep
                && e.pair == pair
                && (e.a_c - a_c).abs() <= EP_BRACKET_WIDTH
                && (e.e_c.re - e_c).abs() <= 1e-6 * e_c.abs()
        });
        if !hit {
            problems.push(format!("golden {irrep} {pair:?} at a_c = {a_c} not reproduced"));
        }
    }
    let ok = problems.is_empty() && worst_shift <= EP_CONVERGENCE_TOL;
    let mut detail = format!(
        "{count} EPs, all bracketed to <= {EP_BRACKET_WIDTH:.0e}; largest shift M 20 -> 24 {worst_shift:.2e}"
    );
    if !problems.is_empty() {
        detail.push_str(&format!("; problems: {}", problems.join("; ")));
    }
    Ok((ok, detail))
}

fn scratch_dir(tag: &str) -> PathBuf {
    std::env::temp_dir().join(format!("ptbox-check-{}-{tag}", std::process::id()))
}

fn figure_determinism() -> Result<Verdict> {
    let d1 = scratch_dir("a");
    let d2 = scratch_dir("b");
    let first = write_figures(&d1)?;
    // second run on a differently sized pool
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(2)
        .build()
        .map_err(|e| crate::PtError::InvalidInput(e.to_string()))?;
    let second = pool.install(|| write_figures(&d2))?;
    let mut differing = Vec::new();
    for (a, b) in first.iter().zip(&second) {
        if fs::read(a)? != fs::read(b)? {
            differing.push(a.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default());
        }
    }
    let n = first.len();
    let _ = fs::remove_dir_all(&d1);
    let _ = fs::remove_dir_all(&d2);
    let ok = differing.is_empty() && n == second.len() && n == 10;
    Ok((
        ok,
        if differing.is_empty() {
            format!("{n} panel files byte-identical across two runs")
        } else {
            format!("differing files: {}", differing.join(", "))
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_criteria_pass() {
        for o in run(&[1, 2, 3, 6, 7], |_| {}) {
            assert!(o.passed, "{}", o.line());
        }
    }
}
