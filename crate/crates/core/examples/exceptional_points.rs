//! Locates exceptional points of both models and re-checks them in a larger basis.

use ptbox::sweep::{find_exceptional_points, recheck_ep, sweep, SweepOptions, SweepRange};
use ptbox::{BasisSpec, IrrepLabel, Model};

fn main() -> ptbox::Result<()> {
    let spec = BasisSpec::new(16)?;
    let range = SweepRange::new(0.0, 40.0, 0.5)?;
    for model in [Model::Xy, Model::Xyy] {
        let irreps: Vec<IrrepLabel> = model
            .group()
            .labels()
            .into_iter()
            .filter(|l| ptbox::sweep::has_real_structure(*l))
            .collect();
        let opts = SweepOptions { track_levels: 6, irreps: Some(irreps), ..SweepOptions::default() };
        let pot = model.at(0.0);
        let sr = sweep(&pot, &spec, range, &opts)?;
        println!("V = i a {model}, a in [0, 40], M = {}:", spec.max_index());
        for ep in find_exceptional_points(&sr, opts.im_threshold)? {
            let c = recheck_ep(&ep, &pot, spec.max_index() + 4, opts.im_threshold)?;
            println!("  {ep}, bracket {:.1e}, shift at M + 4 {:.1e}", ep.refinement_width, c.shift);
        }
    }
    Ok(())
}
