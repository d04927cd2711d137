use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use ptbox::assembler::assemble_block;
use ptbox::pointgroup::{Irrep, PointGroup};
use ptbox::spectral::{char_poly, conjugation_defect, eigenvalues, multiset_distance};
use ptbox::{assemble_full, eigen, BasisSpec, IrrepLabel, Model};

fn label(g: PointGroup, i: Irrep) -> IrrepLabel {
    IrrepLabel::new(g, i).unwrap()
}

fn reference_eigenvalues(m: &DMatrix<Complex64>) -> Vec<Complex64> {
    m.clone().schur().eigenvalues().expect("complex Schur form is triangular").iter().copied().collect()
}

fn conj(v: &[Complex64]) -> Vec<Complex64> {
    v.iter().map(|z| z.conj()).collect()
}

#[test]
fn agrees_with_reference_solver() {
    for (model, m, a) in [(Model::Xy, 8, 3.0), (Model::Xy, 12, 40.0), (Model::Xyy, 10, 25.0)] {
        let spec = BasisSpec::new(m).unwrap();
        for l in model.group().labels() {
            let h = assemble_block(&spec, l, &model.at(a)).unwrap().matrix;
            let ours = eigenvalues(&h).unwrap();
            let theirs = reference_eigenvalues(&h);
            let d = multiset_distance(&ours, &theirs);
            assert!(d < 1e-9 * h.norm(), "{model} {l} a={a}: {d:e}");
        }
    }
}

#[test]
fn full_matrix_conjugation_closure() {
    let spec = BasisSpec::new(10).unwrap();
    let s = eigen(&assemble_full(&spec, &Model::Xy.at(1.0)), false).unwrap();
    assert!(conjugation_defect(&s.eigenvalues) <= 1e-10);
}

#[test]
fn real_coupling_gives_real_spectrum() {
    let spec = BasisSpec::new(6).unwrap();
    let pot = ptbox::PotentialSpec::new(1, 1, Complex64::new(3.0, 0.0)).unwrap();
    let s = eigen(&assemble_full(&spec, &pot), false).unwrap();
    assert!(s.eigenvalues.iter().all(|z| z.im.abs() < 1e-12));
}

#[test]
fn residuals_hold_at_strong_coupling() {
    let spec = BasisSpec::new(16).unwrap();
    for l in PointGroup::C2v.labels() {
        let s = eigen(&assemble_block(&spec, l, &Model::Xy.at(60.0)).unwrap(), true).unwrap();
        let worst = s.residuals.unwrap().into_iter().fold(0.0, f64::max);
        assert!(worst <= 1e-12, "{l}: {worst:e}");
    }
}

#[test]
fn char_poly_guard_and_roots() {
    let spec = BasisSpec::new(7).unwrap();
    let full = assemble_full(&spec, &Model::Xy.at(1.0));
    assert!(matches!(char_poly(&full), Err(ptbox::PtError::DimensionGuard { .. })));
    let spec = BasisSpec::new(3).unwrap();
    let b = assemble_full(&spec, &Model::Xy.at(0.5));
    let p = char_poly(&b).unwrap();
    assert_eq!(p.degree(), 9);
    let scale = b.matrix.norm().powi(9);
    for z in eigen(&b, false).unwrap().eigenvalues {
        assert!(p.eval(z).norm() / scale < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn block_union_is_full_spectrum(m in 3usize..7, a in -6.0f64..6.0) {
        let spec = BasisSpec::new(m).unwrap();
        for model in [Model::Xy, Model::Xyy] {
            let pot = model.at(a);
            let mut union = Vec::new();
            for l in model.group().labels() {
                union.extend(eigen(&assemble_block(&spec, l, &pot).unwrap(), false).unwrap().eigenvalues);
            }
            let full = eigen(&assemble_full(&spec, &pot), false).unwrap().eigenvalues;
            prop_assert!(multiset_distance(&union, &full) <= 1e-8);
        }
    }

    #[test]
    fn sign_of_a_conjugates_spectra(m in 3usize..8, a in 0.01f64..30.0) {
        let spec = BasisSpec::new(m).unwrap();
        let g = PointGroup::C2v;
        for l in g.labels() {
            let plus = eigen(&assemble_block(&spec, l, &Model::Xy.at(a)).unwrap(), false).unwrap().eigenvalues;
            let minus = eigen(&assemble_block(&spec, l, &Model::Xy.at(-a)).unwrap(), false).unwrap().eigenvalues;
            prop_assert!(multiset_distance(&plus, &conj(&minus)) <= 1e-10 * (1.0 + a));
            if matches!(l.irrep(), Irrep::A1 | Irrep::A2) {
                prop_assert!(multiset_distance(&plus, &minus) <= 1e-9 * (1.0 + a));
            }
        }
        let b1m = eigen(&assemble_block(&spec, label(g, Irrep::B1), &Model::Xy.at(-a)).unwrap(), false).unwrap().eigenvalues;
        let b2p = eigen(&assemble_block(&spec, label(g, Irrep::B2), &Model::Xy.at(a)).unwrap(), false).unwrap().eigenvalues;
        prop_assert!(multiset_distance(&b1m, &b2p) <= 1e-9 * (1.0 + a));
    }

    #[test]
    fn trace_is_eigenvalue_sum(m in 3usize..9, a in -50.0f64..50.0, xyy in any::<bool>()) {
        let model = if xyy { Model::Xyy } else { Model::Xy };
        let spec = BasisSpec::new(m).unwrap();
        for l in model.group().labels() {
            let b = assemble_block(&spec, l, &model.at(a)).unwrap();
            let tr = b.matrix.trace();
            let sum: Complex64 = eigen(&b, false).unwrap().eigenvalues.iter().sum();
            prop_assert!((sum - tr).norm() <= 1e-9 * tr.norm());
        }
    }

    #[test]
    fn eigenvalues_sorted_by_real_then_imag(m in 2usize..8, a in 0.0f64..80.0) {
        let spec = BasisSpec::new(m).unwrap();
        let s = eigen(&assemble_full(&spec, &Model::Xy.at(a)), false).unwrap().eigenvalues;
        for w in s.windows(2) {
            prop_assert!(w[0].re < w[1].re || (w[0].re == w[1].re && w[0].im <= w[1].im));
        }
    }
}
