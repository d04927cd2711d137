//! Follows the lowest levels of each block through a coupling sweep.

use ptbox::sweep::{pt_breaking_report, sweep, PtVerdict, SweepOptions, SweepRange};
use ptbox::{BasisSpec, Model};

fn main() -> ptbox::Result<()> {
    let spec = BasisSpec::new(14)?;
    let range = SweepRange::new(0.0, 20.0, 0.5)?;
    let opts = SweepOptions { track_levels: 4, ..SweepOptions::default() };
    let sr = sweep(&Model::Xy.at(0.0), &spec, range, &opts)?;
    for b in &sr.blocks {
        println!("{} ({} samples, {} inserted):", b.irrep, b.a.len(), b.refinements);
        for (a, vals) in b.a.iter().zip(&b.values).step_by(8) {
            let v: Vec<String> = vals.iter().take(4).map(|z| format!("{:8.3}{:+8.3}i", z.re, z.im)).collect();
            println!("  a = {a:5.2}: {}", v.join(" "));
        }
        for c in b.coalescences.iter().filter(|c| c.labels.0 < opts.track_levels) {
            println!("  labels {:?} coalesce between a = {} and {}", c.labels, c.a_lo, c.a_hi);
        }
    }

    println!("\nantiunitary symmetry at a = 0.1:");
    for model in [Model::Xy, Model::Xyy] {
        let rep = pt_breaking_report(&spec, &model.at(0.0), 0.1, 1e-9)?;
        for l in rep.iter().filter(|l| l.index < 2) {
            let what = match &l.verdict {
                PtVerdict::Unbroken { .. } => "unbroken".to_string(),
                PtVerdict::Broken { partner_irrep, partner_index, .. } => {
                    format!("broken, maps to {partner_irrep} #{partner_index}")
                }
            };
            println!("  {model} {} #{}: E = {:.6}{:+.2e}i, {what}", l.irrep, l.index, l.energy.re, l.energy.im);
        }
    }
    Ok(())
}
