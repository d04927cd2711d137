//! Eigenvalues of the symmetry blocks at one coupling, with the conjugation
//! structure that separates the two models.

use ptbox::pointgroup::Irrep;
use ptbox::spectral::{conjugation_defect, conjugation_pairing};
use ptbox::{assemble_block, assemble_full, eigen, BasisSpec, IrrepLabel, Model};

fn main() -> ptbox::Result<()> {
    let spec = BasisSpec::new(12)?;
    let a = 1.0;
    for model in [Model::Xy, Model::Xyy] {
        let pot = model.at(a);
        println!("V = i a {model}, a = {a}, M = {}", spec.max_index());
        for label in model.group().labels() {
            let s = eigen(&assemble_block(&spec, label, &pot)?, true)?;
            let worst = s.residuals.as_ref().unwrap().iter().copied().fold(0.0, f64::max);
            let low: Vec<String> = s.eigenvalues.iter().take(4).map(|z| format!("{:.6}{:+.6}i", z.re, z.im)).collect();
            println!("  {label:>2}: dim {:3}, max residual {worst:.1e}, lowest {}", s.len(), low.join("  "));
        }
        let full = eigen(&assemble_full(&spec, &pot), false)?;
        println!("  full spectrum conjugation defect {:.1e}", conjugation_defect(&full.eigenvalues));
    }

    let pot = Model::Xy.at(a);
    let b = |i| IrrepLabel::new(Model::Xy.group(), i);
    let b1 = eigen(&assemble_block(&spec, b(Irrep::B1)?, &pot)?, false)?;
    let b2 = eigen(&assemble_block(&spec, b(Irrep::B2)?, &pot)?, false)?;
    let p = conjugation_pairing(&b1.eigenvalues, &b2.eigenvalues, 1e-8)?;
    println!("B1 and B2 spectra are complex conjugates (worst distance {:.1e})", p.max_distance);
    Ok(())
}
