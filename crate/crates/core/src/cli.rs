//! Command-line front end: argument parsing, the flat `key=value` config file,
//! and CSV output for every subcommand.
//!
//! Exit codes: 0 success, 1 invalid input, 2 numerical failure, 3 a failed
//! property in `check`.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::assembler::{assemble_block, assemble_full, Model, PotentialSpec};
use crate::boxbasis::{degenerate_groups, BasisSpec, DegeneracyKind, DegenerateGroup, Mode, DEGENERACY_TOL};
use crate::check;
use crate::csv::{float, Table};
use crate::error::{PtError, Result};
use crate::figures::write_figures;
use crate::matelem::{closed_form, quadrature_oracle};
use crate::perturbation::{classify_phase_transition, first_order, first_order_formula};
use crate::pointgroup::{build_basis, Irrep, IrrepLabel};
use crate::spectral::eigen;
use crate::sweep::{find_exceptional_points, recheck_ep, sweep, EpStatus, SweepOptions, SweepRange};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

/// Environment variable capping the worker count (`0` = one per core).
pub const THREADS_ENV: &str = "PTBOX_THREADS";

#[derive(Debug, Parser)]
#[command(name = "ptbox", version, about = "Spectra of PT-symmetric box Hamiltonians H = px^2 + py^2 + i a x^p y^q")]
pub struct Cli {
    /// Flat key=value file; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate 1D matrix elements against the quadrature oracle.
    Matelem(MatelemArgs),
    /// List the symmetry-adapted basis (or the degenerate groups).
    Classify(ClassifyArgs),
    /// Eigenvalues of one block, the full matrix, or all blocks.
    Spectrum(SpectrumArgs),
    /// First-order corrections of a degenerate group.
    Perturb(PerturbArgs),
    /// Continued eigenvalue curves over a coupling range.
    Sweep(SweepArgs),
    /// Exceptional points found by a sweep.
    Ep(EpArgs),
    /// Panel data for both models with the default sweep.
    Figures(FiguresArgs),
    /// Run the property suite.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, value_parser = Model::from_str)]
    pub potential: Option<Model>,
    /// Basis truncation: both quantum numbers run over 1..=M.
    #[arg(long = "M")]
    pub max_index: Option<usize>,
    /// Output file (standard output if absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MatelemArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_parser = IrrepChoice::from_str)]
    pub irrep: Option<IrrepChoice>,
    /// Print the degenerate groups of the box instead.
    #[arg(long)]
    pub groups: bool,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, value_parser = IrrepChoice::from_str)]
    pub irrep: Option<IrrepChoice>,
}

#[derive(Debug, Args)]
pub struct PerturbArgs {
    #[command(flatten)]
    pub common: Common,
    /// A member `m,n` of the degenerate group.
    #[arg(long, value_parser = parse_mode)]
    pub group: Mode,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RangeArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub a_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub a_max: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long, value_parser = IrrepChoice::from_str)]
    pub irrep: Option<IrrepChoice>,
    /// Number of lowest levels tracked per block.
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub im_threshold: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub range: RangeArgs,
}

#[derive(Debug, Args)]
pub struct EpArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub range: RangeArgs,
    /// Re-locate each EP with M + 4 and report the shift on stderr.
    #[arg(long)]
    pub converge: bool,
}

#[derive(Debug, Args)]
pub struct FiguresArgs {
    /// Directory for the panel files.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Comma-separated criterion numbers; all when absent.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<u8>,
}

/// `--irrep` values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IrrepChoice {
    All,
    Full,
    One(Irrep),
}

impl FromStr for IrrepChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "all" => Ok(IrrepChoice::All),
            "full" => Ok(IrrepChoice::Full),
            other => other
                .parse::<Irrep>()
                .map(IrrepChoice::One)
                .map_err(|_| format!("unknown irrep '{other}' (allowed: all, full, A1, A2, B1, B2, A, B)")),
        }
    }
}

fn parse_mode(s: &str) -> std::result::Result<Mode, String> {
    let (m, n) = s.split_once(',').ok_or_else(|| format!("expected m,n but got '{s}'"))?;
    let m: usize = m.trim().parse().map_err(|_| format!("bad quantum number '{m}'"))?;
    let n: usize = n.trim().parse().map_err(|_| format!("bad quantum number '{n}'"))?;
    Mode::new(m, n).map_err(|e| e.to_string())
}

/// Settings from a config file, merged under the command-line flags.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunConfig {
    pub potential: Option<Model>,
    pub max_index: Option<usize>,
    pub a: Option<f64>,
    pub a_min: Option<f64>,
    pub a_max: Option<f64>,
    pub step: Option<f64>,
    pub irrep: Option<IrrepChoice>,
    /// Named tolerances, written `tolerances.<name> = value`.
    pub tolerances: BTreeMap<String, f64>,
    pub output_path: Option<PathBuf>,
}

/// Tolerance names accepted in config files.
pub const TOLERANCE_NAMES: &[&str] = &["im_threshold", "degeneracy"];

fn invalid(msg: impl Into<String>) -> PtError {
    PtError::InvalidInput(msg.into())
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = RunConfig::default();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| invalid(format!("config line {}: expected key=value", no + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let num = |v: &str| -> Result<f64> {
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| invalid(format!("config line {}: '{v}' is not a number", no + 1)))
            };
            match key {
                "potential" => c.potential = Some(value.parse()?),
                "M" => {
                    c.max_index = Some(value.parse().map_err(|_| {
                        invalid(format!("config line {}: M must be an integer", no + 1))
                    })?)
                }
                "a" => c.a = Some(num(value)?),
                "a_min" => c.a_min = Some(num(value)?),
                "a_max" => c.a_max = Some(num(value)?),
                "step" => c.step = Some(num(value)?),
                "irrep" => c.irrep = Some(value.parse().map_err(invalid)?),
                "output_path" => c.output_path = Some(PathBuf::from(value)),
                "deterministic" => {
                    if value != "true" {
                        return Err(invalid("deterministic mode cannot be switched off"));
                    }
                }
                k if k.starts_with("tolerances.") => {
                    let name = &k["tolerances.".len()..];
                    if !TOLERANCE_NAMES.contains(&name) {
                        return Err(invalid(format!(
                            "unknown tolerance '{name}' (allowed: {})",
                            TOLERANCE_NAMES.join(", ")
                        )));
                    }
                    let v = num(value)?;
                    if v <= 0.0 {
                        return Err(invalid(format!("tolerance {name} must be positive")));
                    }
                    c.tolerances.insert(name.to_string(), v);
                }
                other => return Err(invalid(format!("unknown config key '{other}'"))),
            }
        }
        Ok(c)
    }

    fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return EXIT_INVALID;
    }
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                EXIT_NUMERICAL
            } else {
                EXIT_INVALID
            }
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| invalid(format!("{THREADS_ENV} must be a non-negative integer, got '{v}'")))?;
    // a pool that already exists (e.g. a second call in one process) is kept
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

struct Settings {
    cfg: RunConfig,
}

impl Settings {
    fn potential(&self, flag: Option<Model>) -> Model {
        flag.or(self.cfg.potential).unwrap_or(Model::Xy)
    }

    fn spec(&self, flag: Option<usize>, default: usize) -> Result<BasisSpec> {
        BasisSpec::new(flag.or(self.cfg.max_index).unwrap_or(default))
    }

    fn out(&self, flag: Option<PathBuf>) -> Option<PathBuf> {
        flag.or_else(|| self.cfg.output_path.clone())
    }

    fn irrep(&self, flag: Option<IrrepChoice>, default: IrrepChoice) -> IrrepChoice {
        flag.or(self.cfg.irrep).unwrap_or(default)
    }

    fn sweep_setup(&self, model: Model, r: &RangeArgs) -> Result<(SweepRange, SweepOptions)> {
        let d = SweepRange::default();
        let range = SweepRange::new(
            r.a_min.or(self.cfg.a_min).unwrap_or(d.a_min),
            r.a_max.or(self.cfg.a_max).unwrap_or(d.a_max),
            r.step.or(self.cfg.step).unwrap_or(d.step),
        )?;
        let defaults = SweepOptions::default();
        let im_threshold = r
            .im_threshold
            .unwrap_or_else(|| self.cfg.tolerance("im_threshold", defaults.im_threshold));
        if !(im_threshold > 0.0) {
            return Err(invalid("im_threshold must be positive"));
        }
        let irreps = match self.irrep(r.irrep, IrrepChoice::All) {
            IrrepChoice::All => None,
            IrrepChoice::Full => return Err(invalid("sweeps run over irrep blocks; use a label or 'all'")),
            IrrepChoice::One(i) => Some(vec![IrrepLabel::new(model.group(), i)?]),
        };
        Ok((
            range,
            SweepOptions {
                track_levels: r.levels.unwrap_or(defaults.track_levels),
                im_threshold,
                irreps,
                ..defaults
            },
        ))
    }
}

fn emit(out: Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(p, text)?;
        }
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())?;
            so.flush()?;
        }
    }
    Ok(())
}

/// Runs a parsed command line.
pub fn execute(cli: Cli) -> Result<i32> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    let s = Settings { cfg };
    match cli.command {
        Command::Matelem(a) => matelem(&s, a),
        Command::Classify(a) => classify(&s, a),
        Command::Spectrum(a) => spectrum(&s, a),
        Command::Perturb(a) => perturb(&s, a),
        Command::Sweep(a) => run_sweep(&s, a),
        Command::Ep(a) => run_ep(&s, a),
        Command::Figures(a) => figures(&s, a),
        Command::Check(a) => run_check(a),
    }
}

fn matelem(s: &Settings, a: MatelemArgs) -> Result<i32> {
    let spec = s.spec(a.common.max_index, 20)?;
    let m_max = spec.max_index();
    let mut t = Table::new(&["p", "k", "m", "closed_form", "quadrature", "abs_diff"]);
    for p in 0..=2u32 {
        for k in 1..=m_max {
            for m in 1..=m_max {
                let cf = closed_form(p, k, m).expect("p <= 2");
                let q = quadrature_oracle(p, k, m);
                t.push(&[p.to_string(), k.to_string(), m.to_string(), float(cf), float(q), float((cf - q).abs())]);
            }
        }
    }
    emit(s.out(a.common.out), &t.render())?;
    Ok(EXIT_OK)
}

fn kind_name(k: DegeneracyKind) -> &'static str {
    match k {
        DegeneracyKind::Singleton => "singleton",
        DegeneracyKind::SymmetryPair => "symmetry-pair",
        DegeneracyKind::Accidental => "accidental",
    }
}

fn classify(s: &Settings, a: ClassifyArgs) -> Result<i32> {
    let spec = s.spec(a.common.max_index, 6)?;
    if a.groups {
        let tol = s.cfg.tolerance("degeneracy", DEGENERACY_TOL);
        let mut t = Table::new(&["energy", "kind", "members"]);
        for g in degenerate_groups(&spec, tol)? {
            let members: Vec<String> = g.members.iter().map(|m| format!("({},{})", m.m, m.n)).collect();
            t.push(&[float(g.energy), kind_name(g.kind).to_string(), members.join(" ")]);
        }
        emit(s.out(a.common.out), &t.render())?;
        return Ok(EXIT_OK);
    }
    let model = s.potential(a.common.potential);
    let group = model.group();
    let labels = match s.irrep(a.irrep, IrrepChoice::All) {
        IrrepChoice::All => group.labels(),
        IrrepChoice::Full => return Err(invalid("classify lists irrep bases; use a label or 'all'")),
        IrrepChoice::One(i) => vec![IrrepLabel::new(group, i)?],
    };
    let mut t = Table::new(&["irrep", "index", "function", "energy"]);
    for l in labels {
        for (i, f) in build_basis(&spec, l)?.iter().enumerate() {
            t.push(&[l.to_string(), i.to_string(), f.to_string(), float(f.energy())]);
        }
    }
    emit(s.out(a.common.out), &t.render())?;
    Ok(EXIT_OK)
}

fn spectrum(s: &Settings, a: SpectrumArgs) -> Result<i32> {
    let model = s.potential(a.common.potential);
    let spec = s.spec(a.common.max_index, 10)?;
    let coupling = a.a.or(s.cfg.a).unwrap_or(1.0);
    let pot = model.at(coupling);
    let blocks = match s.irrep(a.irrep, IrrepChoice::All) {
        IrrepChoice::All => model
            .group()
            .labels()
            .into_iter()
            .map(|l| assemble_block(&spec, l, &pot))
            .collect::<Result<Vec<_>>>()?,
        IrrepChoice::Full => vec![assemble_full(&spec, &pot)],
        IrrepChoice::One(i) => vec![assemble_block(&spec, IrrepLabel::new(model.group(), i)?, &pot)?],
    };
    let mut t = Table::new(&["irrep", "index", "re_E", "im_E", "residual"]);
    for b in blocks.iter().filter(|b| b.dim() > 0) {
        let sp = eigen(b, true)?;
        let name = b.irrep.map_or_else(|| "full".to_string(), |l| l.to_string());
        let res = sp.residuals.unwrap_or_default();
        for (i, z) in sp.eigenvalues.iter().enumerate() {
            t.push(&[name.clone(), i.to_string(), float(z.re), float(z.im), float(res[i])]);
        }
    }
    emit(s.out(a.common.out), &t.render())?;
    Ok(EXIT_OK)
}

/// All modes with the same `m² + n²` as `mode`.
fn full_group(mode: Mode) -> Result<DegenerateGroup> {
    let target = mode.norm_sq();
    let mut members = Vec::new();
    let mut m = 1usize;
    while ((m * m) as u64) < target {
        let rest = target - (m * m) as u64;
        let n = (rest as f64).sqrt().round() as u64;
        if n >= 1 && n * n == rest {
            members.push(Mode::new(m, n as usize)?);
        }
        m += 1;
    }
    DegenerateGroup::from_members(members)
}

fn perturb(s: &Settings, a: PerturbArgs) -> Result<i32> {
    let model = s.potential(a.common.potential);
    let coupling = a.a.or(s.cfg.a).unwrap_or(1.0);
    let pot: PotentialSpec = model.at(coupling);
    let group = full_group(a.group)?;
    let r = first_order(&group, &pot);
    let mut text = String::new();
    let members: Vec<String> = group.members.iter().map(|m| format!("({},{})", m.m, m.n)).collect();
    text.push_str(&format!(
        "group {} kind {} E0 {}\n",
        members.join(" "),
        kind_name(group.kind),
        float(group.energy)
    ));
    text.push_str(&format!("potential {model} a {}\n", float(coupling)));
    for z in &r.corrections {
        text.push_str(&format!("E1 {} {}i\n", float(z.re), float(z.im)));
    }
    if model == Model::Xy && group.kind == DegeneracyKind::SymmetryPair {
        let lo = group.members[0].m.min(group.members[0].n);
        let hi = group.members[0].m.max(group.members[0].n);
        if (hi - lo) % 2 == 1 {
            let j = (hi - lo - 1) / 2;
            let f = first_order_formula(lo, j) * coupling.abs();
            let got = r.corrections.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
            let rel = if f > 0.0 { (got - f).abs() / f } else { got };
            text.push_str(&format!(
                "formula +-256 m^2 (2j+m+1)^2 / (pi^4 (2j+1)^4 (2j+2m+1)^4) * a with m={lo} j={j}: +-{}i, relative difference {}\n",
                float(f),
                float(rel)
            ));
        } else {
            text.push_str("formula: n = m + 2j, first-order correction vanishes\n");
        }
    }
    let v = classify_phase_transition(&pot);
    text.push_str(&format!("phase {} ({})\n", v.prediction, v.note));
    emit(s.out(a.common.out), &text)?;
    Ok(EXIT_OK)
}

fn run_sweep(s: &Settings, a: SweepArgs) -> Result<i32> {
    let model = s.potential(a.common.potential);
    let spec = s.spec(a.common.max_index, 20)?;
    let (range, opts) = s.sweep_setup(model, &a.range)?;
    let sr = sweep(&model.at(0.0), &spec, range, &opts)?;
    let mut t = Table::new(&["a", "irrep", "label", "re_E", "im_E"]);
    for b in &sr.blocks {
        for (x, vals) in b.a.iter().zip(&b.values) {
            for (l, z) in vals.iter().enumerate().take(opts.track_levels) {
                t.push(&[float(*x), b.irrep.to_string(), l.to_string(), float(z.re), float(z.im)]);
            }
        }
    }
    emit(s.out(a.common.out), &t.render())?;
    Ok(EXIT_OK)
}

fn run_ep(s: &Settings, a: EpArgs) -> Result<i32> {
    let model = s.potential(a.common.potential);
    let spec = s.spec(a.common.max_index, 20)?;
    let (range, mut opts) = s.sweep_setup(model, &a.range)?;
    if opts.irreps.is_none() {
        let labels = model.group().labels();
        opts.irreps = Some(labels.into_iter().filter(|l| crate::sweep::has_real_structure(*l)).collect());
    }
    let pot = model.at(0.0);
    let sr = sweep(&pot, &spec, range, &opts)?;
    let eps = find_exceptional_points(&sr, opts.im_threshold)?;
    let mut t = Table::new(&["irrep", "label_pair", "a_c", "re_Ec", "im_Ec", "bracket_width"]);
    for ep in &eps {
        if let EpStatus::Unresolved(why) = &ep.status {
            eprintln!("unresolved candidate {} {}-{} near a = {}: {why}", ep.irrep, ep.pair.0, ep.pair.1, ep.a_c);
            continue;
        }
        t.push(&[
            ep.irrep.to_string(),
            format!("{}-{}", ep.pair.0, ep.pair.1),
            float(ep.a_c),
            float(ep.e_c.re),
            float(ep.e_c.im),
            float(ep.refinement_width),
        ]);
        if a.converge {
            let c = recheck_ep(ep, &pot, spec.max_index() + 4, opts.im_threshold)?;
            eprintln!(
                "{} {}-{}: a_c at M = {} shifts by {:.3e} ({})",
                ep.irrep,
                ep.pair.0,
                ep.pair.1,
                c.max_index,
                c.shift,
                if c.converged { "converged" } else { "unconverged" }
            );
        }
    }
    emit(s.out(a.common.out), &t.render())?;
    Ok(EXIT_OK)
}

fn figures(s: &Settings, a: FiguresArgs) -> Result<i32> {
    let dir = a
        .out_dir
        .or_else(|| s.cfg.output_path.clone())
        .unwrap_or_else(|| PathBuf::from("figures"));
    for p in write_figures(&dir)? {
        eprintln!("wrote {}", p.display());
    }
    Ok(EXIT_OK)
}

fn run_check(a: CheckArgs) -> Result<i32> {
    let outcomes = check::run(&a.only, |o| println!("{}", o.line()));
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{} of {} criteria passed", outcomes.len() - failed, outcomes.len());
    Ok(if failed == 0 { EXIT_OK } else { EXIT_CHECK_FAILED })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing() {
        let c = RunConfig::parse(
            "# comment\npotential = xyy\nM=12\na_min=0\na_max = 5\nstep=0.25\nirrep=A\ntolerances.im_threshold=1e-8\noutput_path=out.csv\ndeterministic=true\n",
        )
        .unwrap();
        assert_eq!(c.potential, Some(Model::Xyy));
        assert_eq!(c.max_index, Some(12));
        assert_eq!(c.a_max, Some(5.0));
        assert_eq!(c.irrep, Some(IrrepChoice::One(Irrep::A)));
        assert_eq!(c.tolerance("im_threshold", 1.0), 1e-8);
        assert_eq!(c.output_path, Some(PathBuf::from("out.csv")));
    }

    #[test]
    fn config_rejections() {
        for bad in [
            "potential=x2",
            "colour=red",
            "M=two",
            "tolerances.im_threshold=-1",
            "tolerances.speed=1",
            "deterministic=false",
            "a=nan",
            "justtext",
        ] {
            assert!(RunConfig::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn degenerate_group_lookup() {
        let g = full_group(Mode::new(5, 5).unwrap()).unwrap();
        assert_eq!(g.members.len(), 3);
        assert_eq!(g.kind, DegeneracyKind::Accidental);
        let g = full_group(Mode::new(2, 1).unwrap()).unwrap();
        assert_eq!(g.kind, DegeneracyKind::SymmetryPair);
    }

    #[test]
    fn parse_errors_exit_one() {
        assert_eq!(run_from(["ptbox", "spectrum", "--potential", "x3y"]), EXIT_INVALID);
        assert_eq!(run_from(["ptbox", "spectrum", "--irrep", "Q"]), EXIT_INVALID);
        assert_eq!(run_from(["ptbox", "bogus"]), EXIT_INVALID);
    }
}
