//! Data behind the eigenvalue-versus-coupling plots of both models.

use std::fs;
use std::path::{Path, PathBuf};

use crate::assembler::Model;
use crate::boxbasis::BasisSpec;
use crate::csv::{float, Table};
use crate::error::Result;
use crate::pointgroup::{Irrep, IrrepLabel};
use crate::sweep::{sweep, SweepOptions, SweepRange, SweepResult};

/// Basis size used for the plots.
pub const FIGURE_MAX_INDEX: usize = 20;
/// Number of lowest levels drawn per block.
pub const FIGURE_LEVELS: usize = 10;

/// One plotted panel: a block's real or imaginary parts against `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Panel {
    pub file_name: String,
    pub table: Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Re,
    Im,
}

/// Blocks drawn for each model. `B2` is the mirror image of `B1` and is left out.
pub fn figure_blocks(model: Model) -> (&'static str, &'static [Irrep]) {
    match model {
        Model::Xy => ("fig1", &[Irrep::A1, Irrep::A2, Irrep::B1]),
        Model::Xyy => ("fig2", &[Irrep::A, Irrep::B]),
    }
}

/// Panels of one sweep, long format `a,label,re_E` or `a,label,im_E`.
pub fn panels(sr: &SweepResult, prefix: &str, levels: usize) -> Vec<Panel> {
    let mut out = Vec::new();
    for b in &sr.blocks {
        for part in [Part::Re, Part::Im] {
            let col = match part {
                Part::Re => "re_E",
                Part::Im => "im_E",
            };
            let mut t = Table::new(&["a", "label", col]);
            for (a, vals) in b.a.iter().zip(&b.values) {
                for (label, z) in vals.iter().enumerate().take(levels) {
                    let v = match part {
                        Part::Re => z.re,
                        Part::Im => z.im,
                    };
                    t.push(&[float(*a), label.to_string(), float(v)]);
                }
            }
            let tag = match part {
                Part::Re => "re",
                Part::Im => "im",
            };
            out.push(Panel {
                file_name: format!("{prefix}_{}_{tag}.csv", b.irrep),
                table: t,
            });
        }
    }
    out
}

/// Sweeps one model with the default range and returns its panels.
pub fn model_panels(model: Model) -> Result<Vec<Panel>> {
    let (prefix, irreps) = figure_blocks(model);
    let spec = BasisSpec::new(FIGURE_MAX_INDEX)?;
    let options = SweepOptions {
        track_levels: FIGURE_LEVELS,
        irreps: Some(
            irreps
                .iter()
                .map(|&i| IrrepLabel::new(model.group(), i))
                .collect::<Result<_>>()?,
        ),
        ..SweepOptions::default()
    };
    let sr = sweep(&model.at(0.0), &spec, SweepRange::default(), &options)?;
    Ok(panels(&sr, prefix, FIGURE_LEVELS))
}

/// Writes all panels of both models into `dir` and returns the file paths.
pub fn write_figures(dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for model in [Model::Xy, Model::Xyy] {
        for p in model_panels(model)? {
            let path = dir.join(&p.file_name);
            fs::write(&path, p.table.render())?;
            written.push(path);
        }
    }
    Ok(written)
}
