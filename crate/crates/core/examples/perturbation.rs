//! First-order degenerate perturbation theory against finite-difference slopes.

use ptbox::boxbasis::{degenerate_groups, DegeneracyKind, DEGENERACY_TOL};
use ptbox::perturbation::{classify_phase_transition, first_order, slope_checks};
use ptbox::pointgroup::Irrep;
use ptbox::{BasisSpec, IrrepLabel, Model};

fn main() -> ptbox::Result<()> {
    let spec = BasisSpec::new(8)?;
    let pot = Model::Xy.at(1.0);
    println!("first-order corrections for V = i xy:");
    for g in degenerate_groups(&spec, DEGENERACY_TOL)?.iter().filter(|g| g.kind != DegeneracyKind::Singleton).take(8) {
        let r = first_order(g, &pot);
        let c: Vec<String> = r.corrections.iter().map(|z| format!("{:+.10}i", z.im)).collect();
        println!("  {:?}: {}", g.members.iter().map(|m| (m.m, m.n)).collect::<Vec<_>>(), c.join(" "));
    }

    let spec = BasisSpec::new(16)?;
    for (model, irrep) in [(Model::Xy, Irrep::B1), (Model::Xy, Irrep::A1), (Model::Xyy, Irrep::A)] {
        let label = IrrepLabel::new(model.group(), irrep)?;
        println!("\nslopes dE/da at a = 0, {model} {label} (measured vs first order):");
        for s in slope_checks(Some(label), &model.at(0.0), 1e-3, &spec, None)?.iter().take(5) {
            println!(
                "  E0 = {:8.4}: {:+.9}i vs {:+.9}i  (discrepancy {:.1e})",
                s.unperturbed, s.measured.im, s.expected.im, s.discrepancy
            );
        }
        let v = classify_phase_transition(&model.at(1.0));
        println!("  parity rule: {} ({})", v.prediction, v.note);
    }
    Ok(())
}
