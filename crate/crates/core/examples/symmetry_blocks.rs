//! Symmetry-adapted bases of both models and the block structure they induce.

use ptbox::assembler::cross_irrep_residual;
use ptbox::boxbasis::{degenerate_groups, DEGENERACY_TOL};
use ptbox::pointgroup::{apply_antiunitary, build_basis};
use ptbox::{assemble_block, BasisSpec, Model};

fn main() -> ptbox::Result<()> {
    let spec = BasisSpec::new(4)?;
    println!("degenerate groups for M = 4:");
    for g in degenerate_groups(&spec, DEGENERACY_TOL)? {
        println!("  E0 = {:9.4}  {:?}  {:?}", g.energy, g.kind, g.members.iter().map(|m| (m.m, m.n)).collect::<Vec<_>>());
    }

    for model in [Model::Xy, Model::Xyy] {
        let group = model.group();
        let pot = model.at(1.0);
        println!("\nV = i a {model}: group {group}");
        for label in group.labels() {
            let basis = build_basis(&spec, label)?;
            let images: Vec<String> = basis
                .iter()
                .map(|f| {
                    let r = apply_antiunitary(group.antiunitary(), f).unwrap();
                    format!("{f} -> {}{}", if r.sign > 0.0 { "+" } else { "-" }, r.image)
                })
                .collect();
            println!("  {label} ({} functions): {}", basis.len(), images.join(", "));
        }
        println!("  largest cross-irrep element: {:.1e}", cross_irrep_residual(&spec, &pot)?);
        if let Some(label) = group.labels().last() {
            let b = assemble_block(&BasisSpec::new(2)?, *label, &pot)?;
            println!("  M = 2 {label} block: {}", b.matrix);
        }
    }
    Ok(())
}
