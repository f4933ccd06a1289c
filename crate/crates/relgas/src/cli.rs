//! Command-line front end. A single JSON document configures a run; every
//! parameter is validated before anything touches the output directory, so
//! an invalid config never leaves partial results. All emitted numbers use
//! 17 significant digits, which round-trips doubles exactly, and every
//! command is deterministic given its config, so reruns are byte-identical.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::eos::{EosParams, RADIATION_CONSTANT};
use crate::error::{Error, Result};
use crate::glimm::{self, GridConfig, InitialProfile, SamplingSequence, SmoothKind};
use crate::interactions::{self, entropy_excess, interaction_excess, topology};
use crate::riemann;
use crate::states::PrimitiveState;
use crate::wavecurves::{rarefaction_curve, shock_curve, sigma_jump, Family};

#[derive(Parser)]
#[command(
    name = "relgas",
    version,
    about = "Exact waves, random-choice evolution, and interaction audits for an ultra-relativistic gas"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Solve one Riemann problem: fan summary JSON plus a sampled profile CSV.
    Riemann(RunArgs),
    /// Run the random-choice scheme with functional monitors and emit
    /// per-level diagnostics and strided profiles.
    Glimm(RunArgs),
    /// Tabulate shock and rarefaction curves from a base state, both
    /// families, plus the entropy jump along the shock branch.
    Curves(RunArgs),
    /// Certify the wave-interaction estimates on a seeded random sweep.
    Interactions(RunArgs),
}

#[derive(Args)]
pub struct RunArgs {
    /// Path to the JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory; overrides output.directory from the config.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed override for glimm (pseudorandom sampling) and interactions.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub eos: EosBlock,
    #[serde(default)]
    pub problem: Option<ProblemBlock>,
    #[serde(default)]
    pub grid: Option<GridBlock>,
    #[serde(default)]
    pub sampling: Option<SamplingBlock>,
    #[serde(default)]
    pub output: Option<OutputBlock>,
    #[serde(default)]
    pub curves: Option<CurvesBlock>,
    #[serde(default)]
    pub sweep: Option<SweepBlock>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EosBlock {
    pub gamma: f64,
    pub family: String,
    #[serde(default)]
    pub r_gas: Option<f64>,
    #[serde(default)]
    pub a_rad: Option<f64>,
    #[serde(default)]
    pub points: Option<Vec<(f64, f64)>>,
}

impl EosBlock {
    fn build(&self) -> Result<EosParams> {
        let forbid = |name: &str, present: bool| {
            if present {
                Err(Error::Config(format!(
                    "eos.{name}: not a parameter of the {} family",
                    self.family
                )))
            } else {
                Ok(())
            }
        };
        match self.family.as_str() {
            "polytropic" => {
                forbid("a_rad", self.a_rad.is_some())?;
                forbid("points", self.points.is_some())?;
                EosParams::polytropic(self.gamma, self.r_gas.unwrap_or(1.0))
            }
            "radiation" => {
                forbid("r_gas", self.r_gas.is_some())?;
                forbid("points", self.points.is_some())?;
                EosParams::radiation(self.gamma, self.a_rad.unwrap_or(RADIATION_CONSTANT))
            }
            "tabulated" => {
                forbid("r_gas", self.r_gas.is_some())?;
                forbid("a_rad", self.a_rad.is_some())?;
                let points = self.points.as_ref().ok_or_else(|| {
                    Error::Config("eos.points: required for the tabulated family".into())
                })?;
                EosParams::tabulated(self.gamma, points)
            }
            other => Err(Error::Config(format!("eos.family: unknown family {other:?}"))),
        }
        .map_err(|e| Error::Config(format!("eos: {e}")))
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub rho: f64,
    pub v: f64,
    #[serde(rename = "S")]
    pub s: f64,
}

impl StateSpec {
    fn build(&self, key: &str) -> Result<PrimitiveState> {
        PrimitiveState::new(self.rho, self.v, self.s)
            .map_err(|e| Error::Config(format!("{key}: {e}")))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemBlock {
    pub kind: String,
    #[serde(default)]
    pub left: Option<StateSpec>,
    #[serde(default)]
    pub right: Option<StateSpec>,
    #[serde(default)]
    pub x_jump: Option<f64>,
    #[serde(default)]
    pub breakpoints: Option<Vec<f64>>,
    #[serde(default)]
    pub states: Option<Vec<StateSpec>>,
    #[serde(default)]
    pub name: Option<String>,
}

impl ProblemBlock {
    fn build(&self) -> Result<InitialProfile> {
        let forbid = |name: &str, present: bool| {
            if present {
                Err(Error::Config(format!(
                    "problem.{name}: not a parameter of kind {:?}",
                    self.kind
                )))
            } else {
                Ok(())
            }
        };
        match self.kind.as_str() {
            "riemann" => {
                forbid("breakpoints", self.breakpoints.is_some())?;
                forbid("states", self.states.is_some())?;
                forbid("name", self.name.is_some())?;
                let left = self
                    .left
                    .ok_or_else(|| Error::Config("problem.left: required".into()))?
                    .build("problem.left")?;
                let right = self
                    .right
                    .ok_or_else(|| Error::Config("problem.right: required".into()))?
                    .build("problem.right")?;
                InitialProfile::riemann(left, right, self.x_jump.unwrap_or(0.0))
            }
            "piecewise" => {
                forbid("left", self.left.is_some())?;
                forbid("right", self.right.is_some())?;
                forbid("x_jump", self.x_jump.is_some())?;
                forbid("name", self.name.is_some())?;
                let breakpoints = self
                    .breakpoints
                    .clone()
                    .ok_or_else(|| Error::Config("problem.breakpoints: required".into()))?;
                let specs = self
                    .states
                    .as_ref()
                    .ok_or_else(|| Error::Config("problem.states: required".into()))?;
                let mut states = Vec::with_capacity(specs.len());
                for (i, spec) in specs.iter().enumerate() {
                    states.push(spec.build(&format!("problem.states[{i}]"))?);
                }
                InitialProfile::piecewise(breakpoints, states)
            }
            "smooth" => {
                forbid("left", self.left.is_some())?;
                forbid("right", self.right.is_some())?;
                forbid("x_jump", self.x_jump.is_some())?;
                forbid("breakpoints", self.breakpoints.is_some())?;
                forbid("states", self.states.is_some())?;
                let kind = match self.name.as_deref() {
                    Some("density_pulse") => SmoothKind::DensityPulse,
                    Some("velocity_ramp") => SmoothKind::VelocityRamp,
                    Some(other) => {
                        return Err(Error::Config(format!(
                            "problem.name: unknown smooth profile {other:?}"
                        )))
                    }
                    None => return Err(Error::Config("problem.name: required".into())),
                };
                Ok(InitialProfile::Smooth { kind })
            }
            other => Err(Error::Config(format!("problem.kind: unknown kind {other:?}"))),
        }
    }
}

fn default_cfl_ratio() -> f64 {
    1.05
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBlock {
    pub dx: f64,
    /// dx / dt; must exceed 1 so the unit light cone fits in one cell.
    #[serde(default = "default_cfl_ratio")]
    pub cfl_ratio: f64,
    pub t_end: f64,
    pub domain: (f64, f64),
}

impl GridBlock {
    fn build(&self) -> Result<GridConfig> {
        if !(self.cfl_ratio > 1.0) || !self.cfl_ratio.is_finite() {
            return Err(Error::Config(format!(
                "grid.cfl_ratio: must be a finite ratio > 1, got {}",
                self.cfl_ratio
            )));
        }
        GridConfig::new(
            self.dx,
            self.dx / self.cfl_ratio,
            self.t_end,
            self.domain.0,
            self.domain.1,
        )
        .map_err(|e| Error::Config(format!("grid: {e}")))
    }

    fn cell_count(&self) -> Result<usize> {
        let n = ((self.domain.1 - self.domain.0) / self.dx).round();
        if !(n >= 1.0) || !n.is_finite() {
            return Err(Error::Config(format!(
                "grid: domain {:?} holds no cells of width {}",
                self.domain, self.dx
            )));
        }
        Ok(n as usize)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingBlock {
    pub kind: String,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub base: Option<u64>,
}

impl SamplingBlock {
    fn build(&self, seed_override: Option<u64>) -> Result<SamplingSequence> {
        match self.kind.as_str() {
            "pseudorandom" => {
                if self.base.is_some() {
                    return Err(Error::Config(
                        "sampling.base: not a pseudorandom parameter".into(),
                    ));
                }
                let seed = seed_override.or(self.seed).ok_or_else(|| {
                    Error::Config("sampling.seed: required for pseudorandom sampling".into())
                })?;
                Ok(SamplingSequence::pseudorandom(seed))
            }
            "van_der_corput" => {
                if self.seed.is_some() || seed_override.is_some() {
                    return Err(Error::Config(
                        "sampling.seed: van der Corput sampling takes a base, not a seed".into(),
                    ));
                }
                let base = self
                    .base
                    .ok_or_else(|| Error::Config("sampling.base: required".into()))?;
                SamplingSequence::van_der_corput(base)
                    .map_err(|e| Error::Config(format!("sampling: {e}")))
            }
            other => Err(Error::Config(format!(
                "sampling.kind: unknown kind {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    #[serde(default)]
    pub directory: Option<String>,
    /// Emit a profile CSV every this many levels (0 or absent: final only).
    #[serde(default)]
    pub stride: Option<usize>,
    #[serde(default)]
    pub formats: Option<Vec<String>>,
}

#[derive(Debug, Clone, Copy)]
struct Formats {
    csv: bool,
    json: bool,
}

fn formats_of(output: Option<&OutputBlock>) -> Result<Formats> {
    let Some(list) = output.and_then(|o| o.formats.as_ref()) else {
        return Ok(Formats { csv: true, json: true });
    };
    let mut f = Formats { csv: false, json: false };
    for item in list {
        match item.as_str() {
            "csv" => f.csv = true,
            "json" => f.json = true,
            other => {
                return Err(Error::Config(format!(
                    "output.formats: unknown format {other:?}"
                )))
            }
        }
    }
    Ok(f)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvesBlock {
    pub base: StateSpec,
    pub sigma_max: f64,
    pub samples: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub r_bounds: (f64, f64),
    pub s_bounds: (f64, f64),
    pub sigma_max: f64,
    pub count: usize,
    pub seed: u64,
    #[serde(default)]
    pub per_sample_csv: bool,
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn resolve_out_dir(args: &RunArgs, config: &RunConfig) -> Result<PathBuf> {
    if let Some(out) = &args.out {
        return Ok(out.clone());
    }
    if let Some(dir) = config.output.as_ref().and_then(|o| o.directory.as_ref()) {
        return Ok(PathBuf::from(dir));
    }
    Err(Error::Config(
        "no output directory: pass --out or set output.directory".into(),
    ))
}

/// 17 significant digits; round-trips any finite double.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// serde_json formatter that writes every float with 17 significant digits.
struct SeventeenDigits;

impl serde_json::ser::Formatter for SeventeenDigits {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SeventeenDigits);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Numerical { what: "json serialization", detail: e.to_string() })?;
    let mut text = String::from_utf8(out).expect("serde_json emits utf-8");
    text.push('\n');
    Ok(text)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents)?;
    Ok(())
}

pub const PROFILE_HEADER: &str = "x,rho,v,S,r,s,Sigma";
pub const DIAGNOSTICS_HEADER: &str = "level,t,F,L,var_rs,var_lnrho,var_rapidity,var_sigma";

fn profile_csv<I>(eos: &EosParams, rows: I) -> Result<String>
where
    I: Iterator<Item = (f64, PrimitiveState)>,
{
    let mut out = String::from(PROFILE_HEADER);
    out.push('\n');
    for (x, state) in rows {
        let inv = state.to_invariants(eos)?;
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            num(x),
            num(state.rho),
            num(state.v),
            num(state.entropy),
            num(inv.r),
            num(inv.s),
            num(inv.sigma)
        ));
    }
    Ok(out)
}

#[derive(Serialize)]
struct FanSummary {
    fan: riemann::WaveFan,
    strengths: riemann::WaveStrengths,
}

fn cmd_riemann(args: &RunArgs, config: &RunConfig, out_dir: &Path) -> Result<()> {
    if args.seed.is_some() {
        return Err(Error::Config(
            "--seed: only glimm and interactions take a seed".into(),
        ));
    }
    let eos = config.eos.build()?;
    let problem = config
        .problem
        .as_ref()
        .ok_or_else(|| Error::Config("problem: required for riemann".into()))?;
    if problem.kind != "riemann" {
        return Err(Error::Config(format!(
            "problem.kind: riemann command needs kind \"riemann\", got {:?}",
            problem.kind
        )));
    }
    let profile = problem.build()?;
    let grid_block = config
        .grid
        .as_ref()
        .ok_or_else(|| Error::Config("grid: required for riemann".into()))?;
    grid_block.build()?;
    let cells = grid_block.cell_count()?;
    let formats = formats_of(config.output.as_ref())?;

    let InitialProfile::Riemann { left, right, x_jump } = &profile else {
        unreachable!("kind checked above");
    };
    let fan = riemann::solve(&eos, left, right)?;

    fs::create_dir_all(out_dir)?;
    if formats.json {
        let summary = FanSummary { fan, strengths: fan.wave_strengths() };
        write_file(&out_dir.join("fan.json"), &to_json(&summary)?)?;
    }
    if formats.csv {
        let (x_min, dx, t) = (grid_block.domain.0, grid_block.dx, grid_block.t_end);
        let mut rows = Vec::with_capacity(cells);
        for i in 0..cells {
            let x = x_min + (i as f64 + 0.5) * dx;
            let state = if t > 0.0 {
                fan.sample(&eos, (x - x_jump) / t)?
            } else {
                profile.eval(x)?
            };
            rows.push((x, state));
        }
        write_file(&out_dir.join("profile.csv"), &profile_csv(&eos, rows.into_iter())?)?;
    }
    Ok(())
}

fn cmd_glimm(args: &RunArgs, config: &RunConfig, out_dir: &Path) -> Result<()> {
    let eos = config.eos.build()?;
    let profile = config
        .problem
        .as_ref()
        .ok_or_else(|| Error::Config("problem: required for glimm".into()))?
        .build()?;
    let grid = config
        .grid
        .as_ref()
        .ok_or_else(|| Error::Config("grid: required for glimm".into()))?
        .build()?;
    let mut seq = config
        .sampling
        .as_ref()
        .ok_or_else(|| Error::Config("sampling: required for glimm".into()))?
        .build(args.seed)?;
    let stride = config.output.as_ref().and_then(|o| o.stride).unwrap_or(0);
    let formats = formats_of(config.output.as_ref())?;

    fs::create_dir_all(out_dir)?;
    let mut diagnostics = String::from(DIAGNOSTICS_HEADER);
    diagnostics.push('\n');

    let run = glimm::run(&eos, &profile, &grid, &mut seq, |sol, diag| {
        diagnostics.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            diag.level,
            num(diag.time),
            num(diag.f_value),
            num(diag.l_value),
            num(diag.var_rs),
            num(diag.var_lnrho),
            num(diag.var_rapidity),
            num(diag.var_sigma)
        ));
        if formats.csv && stride > 0 && sol.level % stride == 0 {
            let rows = (0..sol.cells.len()).map(|j| (sol.x(j), sol.cells[j]));
            write_file(
                &out_dir.join(format!("profile_{:06}.csv", sol.level)),
                &profile_csv(&eos, rows)?,
            )?;
        }
        Ok(())
    });

    // Keep whatever diagnostics the run produced, then surface its error.
    if formats.csv {
        write_file(&out_dir.join("diagnostics.csv"), &diagnostics)?;
    }
    let (final_sol, diags) = run?;
    if formats.csv {
        let rows = (0..final_sol.cells.len()).map(|j| (final_sol.x(j), final_sol.cells[j]));
        write_file(
            &out_dir.join(format!("profile_{:06}.csv", final_sol.level)),
            &profile_csv(&eos, rows)?,
        )?;
    }
    if formats.json {
        write_file(&out_dir.join("constants.json"), &to_json(&diags.constants)?)?;
    }
    Ok(())
}

pub const CURVE_HEADER: &str = "sigma,r,s,Sigma,speed";
pub const JUMP_HEADER: &str = "sigma,delta";

fn cmd_curves(args: &RunArgs, config: &RunConfig, out_dir: &Path) -> Result<()> {
    if args.seed.is_some() {
        return Err(Error::Config(
            "--seed: only glimm and interactions take a seed".into(),
        ));
    }
    let eos = config.eos.build()?;
    let block = config
        .curves
        .as_ref()
        .ok_or_else(|| Error::Config("curves: required for the curves command".into()))?;
    let base = block.base.build("curves.base")?;
    if !(block.sigma_max > 0.0) || !block.sigma_max.is_finite() {
        return Err(Error::Config(format!(
            "curves.sigma_max: must be finite and positive, got {}",
            block.sigma_max
        )));
    }
    if block.samples == 0 {
        return Err(Error::Config("curves.samples: must be at least 1".into()));
    }
    let formats = formats_of(config.output.as_ref())?;
    if !formats.csv {
        return Err(Error::Config(
            "output.formats: the curves command emits only CSV".into(),
        ));
    }

    let grid: Vec<f64> = (0..=block.samples)
        .map(|i| block.sigma_max * i as f64 / block.samples as f64)
        .collect();

    fs::create_dir_all(out_dir)?;
    for family in [Family::One, Family::Three] {
        let tag = match family {
            Family::One => "1",
            _ => "3",
        };
        let mut shock = String::from(CURVE_HEADER);
        shock.push('\n');
        let mut fan = String::from(CURVE_HEADER);
        fan.push('\n');
        for &sigma in &grid {
            let pt = shock_curve(&eos, &base, sigma, family)?;
            let inv = pt.downstream.to_invariants(&eos)?;
            shock.push_str(&format!(
                "{},{},{},{},{}\n",
                num(sigma),
                num(inv.r),
                num(inv.s),
                num(inv.sigma),
                num(pt.speed)
            ));
            // Rarefaction branch: middle states reachable from the base
            // across one fan. The base is the fan's slow edge for family
            // One and its fast edge for family Three, so the walk flips.
            let (mid, edge) = match family {
                Family::One => {
                    let rp = rarefaction_curve(&eos, &base, sigma, family)?;
                    (rp.downstream, rp.speed_downstream)
                }
                _ => {
                    let mid = if sigma == 0.0 {
                        base
                    } else {
                        let b = eos.invariant_coefficient();
                        PrimitiveState::new(
                            base.rho * (-sigma / (2.0 * b)).exp(),
                            (base.v.atanh() - 0.5 * sigma).tanh(),
                            base.entropy,
                        )?
                    };
                    let (_, _, l3) = mid.char_speeds(&eos);
                    (mid, l3)
                }
            };
            let rinv = mid.to_invariants(&eos)?;
            fan.push_str(&format!(
                "{},{},{},{},{}\n",
                num(sigma),
                num(rinv.r),
                num(rinv.s),
                num(rinv.sigma),
                num(edge)
            ));
        }
        write_file(&out_dir.join(format!("shock_{tag}.csv")), &shock)?;
        write_file(&out_dir.join(format!("rarefaction_{tag}.csv")), &fan)?;
    }

    let mut jump = String::from(JUMP_HEADER);
    jump.push('\n');
    for &sigma in &grid {
        jump.push_str(&format!("{},{}\n", num(sigma), num(sigma_jump(&eos, sigma)?)));
    }
    write_file(&out_dir.join("sigma_jump.csv"), &jump)?;
    Ok(())
}

pub const SAMPLES_HEADER: &str = "index,topology,alpha1,mu1,beta1,eta1,delta1,alpha2,mu2,beta2,eta2,delta2,alpha_merged,mu_merged,beta_merged,eta_merged,delta_merged,a_gain,b_gain,entropy_combination,net_entropy_mismatch,interaction_excess,entropy_excess";

fn cmd_interactions(args: &RunArgs, config: &RunConfig, out_dir: &Path) -> Result<()> {
    let eos = config.eos.build()?;
    let block = config
        .sweep
        .as_ref()
        .ok_or_else(|| Error::Config("sweep: required for the interactions command".into()))?;
    let formats = formats_of(config.output.as_ref())?;
    let seed = args.seed.unwrap_or(block.seed);

    let (stats, reports) = interactions::random_sweep(
        &eos,
        block.r_bounds,
        block.s_bounds,
        block.sigma_max,
        block.count,
        seed,
    )?;

    fs::create_dir_all(out_dir)?;
    if formats.json {
        write_file(&out_dir.join("sweep.json"), &to_json(&stats)?)?;
    }
    if formats.csv && block.per_sample_csv {
        let mut csv = String::from(SAMPLES_HEADER);
        csv.push('\n');
        for (i, rep) in reports.iter().enumerate() {
            let f = |b: &interactions::FanBreakdown| {
                format!(
                    "{},{},{},{},{}",
                    num(b.alpha),
                    num(b.mu),
                    num(b.beta),
                    num(b.eta),
                    num(b.delta)
                )
            };
            csv.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                i,
                topology(rep),
                f(&rep.left),
                f(&rep.right),
                f(&rep.merged),
                num(rep.alpha_gain),
                num(rep.beta_gain),
                num(rep.entropy_combination),
                format!(
                    "{},{},{}",
                    num(rep.net_entropy_mismatch),
                    num(interaction_excess(rep, stats.constants.c0)),
                    num(entropy_excess(rep, stats.constants.m_const))
                )
            ));
        }
        write_file(&out_dir.join("samples.csv"), &csv)?;
    }

    if stats.interaction_violations > 0 || stats.entropy_violations > 0 {
        return Err(Error::Monitor {
            level: 0,
            quantity: "interaction sweep verdicts",
            value: (stats.interaction_violations + stats.entropy_violations) as f64,
            bound: 0.0,
        });
    }
    Ok(())
}

pub fn dispatch(cli: Cli) -> Result<()> {
    let (args, run): (&RunArgs, fn(&RunArgs, &RunConfig, &Path) -> Result<()>) =
        match &cli.command {
            Command::Riemann(a) => (a, cmd_riemann),
            Command::Glimm(a) => (a, cmd_glimm),
            Command::Curves(a) => (a, cmd_curves),
            Command::Interactions(a) => (a, cmd_interactions),
        };
    let config = load_config(&args.config)?;
    let out_dir = resolve_out_dir(args, &config)?;
    run(args, &config, &out_dir)
}

pub fn main_entry() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
