use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tunnelcheck::branches::{self, ActionBranch};
use tunnelcheck::coulomb::{self, CoulombChannel, FusionChannel};
use tunnelcheck::golden;
use tunnelcheck::gridfield::{Grid1D, RealField};
use tunnelcheck::ksmap::{self, InitialState, InterferenceSample, KsConfig, Quadrature};
use tunnelcheck::madelung::{self, MadelungField};
use tunnelcheck::oracle::{self, PiecewisePotential};
use tunnelcheck::phases::{self, Band, JunctionSpec, LoopPath};
use tunnelcheck::scattering1d::{
    evaluate_wavefunction, solve_barrier, solve_step, thick_barrier_transmission, transmission,
    ScatteringProblem,
};
use tunnelcheck::units::Units;
use tunnelcheck::validate;

use crate::output::{Cell, Report};
use crate::CliError;

/// `min:max:n` sampling of a closed interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    /// Samples on the latitude loop, excluding the closing one.
    pub n: usize,
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let p: Vec<&str> = s.split(':').collect();
        if p.len() != 3 {
            return Err(format!("expected min:max:n, got '{s}'"));
        }
        let f = |x: &str| x.parse::<f64>().map_err(|_| format!("bad number '{x}'"));
        let n = p[2].parse::<usize>().map_err(|_| format!("bad point count '{}'", p[2]))?;
        Ok(Self { min: f(p[0])?, max: f(p[1])?, n })
    }
}

impl GridSpec {
    fn grid(&self) -> Result<Grid1D, CliError> {
        Ok(Grid1D::new(self.min, self.max, self.n)?)
    }
}

/// `start:stop:step`, stop exclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let p: Vec<f64> = s
            .split(':')
            .map(|x| x.parse::<f64>().map_err(|_| format!("bad number '{x}'")))
            .collect::<Result<_, _>>()?;
        if p.len() != 3 || !(p[2] > 0.0) || !(p[1] >= p[0]) {
            return Err(format!("expected start:stop:step with step > 0 and stop >= start, got '{s}'"));
        }
        Ok(Self { start: p[0], stop: p[1], step: p[2] })
    }
}

impl Sweep {
    /// Points `start + i step` below `stop`, computed by index to avoid drift.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step - 1e-9).ceil().max(0.0) as usize;
        (0..n).map(|i| self.start + self.step * i as f64).collect()
    }
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("expected a positive number, got '{s}'")),
    }
}

pub struct Ctx {
    pub units: Units,
    pub units_name: String,
}

impl Ctx {
    fn report(&self, cmd: &str) -> Report {
        Report::new(cmd, &self.units_name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Shape {
    Step,
    Barrier,
}

#[derive(Args, Debug)]
pub struct StepArgs {
    /// Energy E.
    #[arg(long)]
    pub energy: f64,
    /// Barrier or step height V0 (> E).
    #[arg(long)]
    pub v0: f64,
    /// Particle mass; defaults to the electron mass of the unit system.
    #[arg(long)]
    pub mass: Option<f64>,
    /// Sample psi and its Madelung fields on min:max:n.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<GridSpec>,
}

#[derive(Args, Debug)]
pub struct BarrierArgs {
    /// Energy E.
    #[arg(long)]
    pub energy: f64,
    /// Barrier or step height V0 (> E).
    #[arg(long)]
    pub v0: f64,
    /// Barrier width a.
    #[arg(long)]
    pub width: f64,
    /// Particle mass; defaults to the electron mass of the unit system.
    #[arg(long)]
    pub mass: Option<f64>,
    /// Sample psi and its Madelung fields on min:max:n.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<GridSpec>,
}

#[derive(Args, Debug)]
pub struct FieldArgs {
    #[arg(long, value_enum)]
    pub potential: Shape,
    /// Energy E.
    #[arg(long)]
    pub energy: f64,
    /// Barrier or step height V0 (> E).
    #[arg(long)]
    pub v0: f64,
    /// Barrier width (ignored for the step).
    #[arg(long, default_value_t = 1.0)]
    pub width: f64,
    /// Particle mass; defaults to the electron mass of the unit system.
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long, default_value = "-4:4:801", allow_hyphen_values = true)]
    pub grid: GridSpec,
}

#[derive(Args, Debug)]
pub struct CoulombArgs {
    /// Energy E.
    #[arg(long)]
    pub energy: f64,
    /// Reduced mass; defaults to the electron mass of the unit system.
    #[arg(long)]
    pub mass: Option<f64>,
    /// Charge number of the emitted or incident particle.
    #[arg(long, default_value_t = 1.0)]
    pub z1: f64,
    /// Charge number of the residual or target nucleus.
    #[arg(long, default_value_t = 1.0)]
    pub z2: f64,
    /// Orbital angular momentum L.
    #[arg(long, default_value_t = 0)]
    pub l: u32,
    /// Radial grid min:max:n (min > 0).
    #[arg(long)]
    pub grid: GridSpec,
}

#[derive(Args, Debug)]
pub struct FusionArgs {
    #[command(flatten)]
    pub channel: CoulombArgs,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub s_re: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub s_im: f64,
    /// Absorption radius; the grid must start beyond it.
    #[arg(long, default_value_t = 0.0)]
    pub radius: f64,
}

#[derive(Args, Debug)]
pub struct KsHydrogenArgs {
    /// Coupling G = Z e^2 in units of e^2.
    #[arg(long, default_value_t = 1.0)]
    pub z: f64,
    /// Energy; defaults to the 1s level -m G^2 / (2 hbar^2).
    #[arg(long, allow_hyphen_values = true)]
    pub energy: Option<f64>,
    /// Particle mass; defaults to the electron mass of the unit system.
    #[arg(long)]
    pub mass: Option<f64>,
    /// Oscillator pseudo-time.
    #[arg(long, default_value_t = 1.0)]
    pub tprime: f64,
    /// Radii r = |q|^2 as min:max:n.
    #[arg(long, default_value = "0.1:10:60")]
    pub r_grid: GridSpec,
    /// `closed` or `trapezoid:POINTS:HALF_WIDTH`.
    #[arg(long, default_value = "closed")]
    pub quadrature: String,
}

#[derive(Args, Debug)]
pub struct KsInvertedArgs {
    /// Coupling G = Z1 Z2 e^2 in units of e^2.
    #[arg(long, default_value_t = 1.0)]
    pub z: f64,
    /// Energy E.
    #[arg(long, default_value_t = 0.5)]
    pub energy: f64,
    /// Particle mass; defaults to the electron mass of the unit system.
    #[arg(long)]
    pub mass: Option<f64>,
    /// Oscillator pseudo-time.
    #[arg(long, default_value_t = 0.6)]
    pub tprime: f64,
    /// Number of launch points.
    #[arg(long, default_value_t = 6)]
    pub branches: usize,
    /// Probe points for the residual.
    #[arg(long, default_value_t = 8)]
    pub probes: usize,
    /// Seed for launch points, weights and probes.
    #[arg(long, default_value_t = 12)]
    pub seed: u64,
    /// Width of each launched packet.
    #[arg(long, default_value_t = 1.0)]
    pub width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BandArg {
    Plus,
    Minus,
}

#[derive(Args, Debug)]
pub struct BerryArgs {
    /// Constant-latitude loop at this polar angle.
    #[arg(long, conflicts_with = "loop_file", required_unless_present = "loop_file")]
    pub theta: Option<f64>,
    /// JSON file holding [[theta, phi], ...] with the last pair equal to the first.
    #[arg(long)]
    pub loop_file: Option<PathBuf>,
    /// Samples on the latitude loop, excluding the closing one.
    #[arg(long, default_value_t = 2000)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = BandArg::Plus)]
    pub band: BandArg,
}

#[derive(Args, Debug)]
pub struct JosephsonArgs {
    /// Cooper-pair mass; defaults to twice the electron mass.
    #[arg(long)]
    pub mstar: Option<f64>,
    /// Gap potential U0 (> E).
    #[arg(long)]
    pub u0: f64,
    /// Energy E.
    #[arg(long)]
    pub energy: f64,
    /// Gap width.
    #[arg(long)]
    pub d: f64,
    /// Amplitude on the left electrode.
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    /// Amplitude on the right electrode.
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    /// Phase differences start:stop:step.
    #[arg(long, default_value = "-3.1:3.2:0.1", allow_hyphen_values = true)]
    pub delta_sweep: Sweep,
}

#[derive(Args, Debug)]
pub struct SquidArgs {
    /// Critical current of one junction.
    #[arg(long)]
    pub ic: f64,
    /// Flux in units of the flux quantum, start:stop:step.
    #[arg(long, default_value = "0:2:0.01", allow_hyphen_values = true)]
    pub flux_sweep: Sweep,
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    /// Golden corpus directory to verify as well.
    #[arg(long)]
    pub goldens: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GoldensArgs {
    #[arg(long, default_value = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/goldens"))]
    pub dir: PathBuf,
    /// Overwrite the corpus instead of checking it.
    #[arg(long)]
    pub write: bool,
    /// Replace the per-row tolerances when checking.
    #[arg(long, value_parser = positive)]
    pub tolerance: Option<f64>,
}

/// `name_re`, `name_im`, `name_abs` and `name_arg` scalars.
fn complex(r: &mut Report, name: &str, z: Complex64) {
    r.scalar(&format!("{name}_re"), z.re)
        .scalar(&format!("{name}_im"), z.im)
        .scalar(&format!("{name}_abs"), z.norm())
        .scalar(&format!("{name}_arg"), z.arg());
}

fn madelung_rows(r: &mut Report, f: &MadelungField, hj: &RealField) {
    r.columns(&["x", "rho", "s", "v", "q", "node", "hj_residual"]);
    for (i, (x, rho, s, v, q, node)) in f.rows().enumerate() {
        r.row(vec![x.into(), rho.into(), s.into(), v.into(), q.into(), node.into(), hj.values()[i].into()]);
    }
}

fn field_table(r: &mut Report, p: &ScatteringProblem, f: &MadelungField) -> Result<(), CliError> {
    let pot = p.sample_potential(*f.grid());
    let hj = madelung::quantum_hj_residual(f, &pot, p.energy)?;
    madelung_rows(r, f, &hj);
    Ok(())
}

pub fn step(ctx: &Ctx, a: &StepArgs) -> Result<Report, CliError> {
    let p = ScatteringProblem::step(a.mass.unwrap_or(ctx.units.electron_mass), ctx.units.hbar, a.energy, a.v0)?;
    let s = solve_step(&p)?;
    let mut r = ctx.report("step");
    r.scalar("k", s.k).scalar("kappa", s.kappa);
    complex(&mut r, "r", s.r);
    complex(&mut r, "A", s.a);
    r.scalar("R", s.r.norm_sqr()).scalar("T", 0.0).scalar("q_region2", -(p.v0 - p.energy));
    if let Some(g) = a.grid {
        let f = madelung::decompose(&evaluate_wavefunction(&s, g.grid()?), p.mass, p.hbar)?;
        field_table(&mut r, &p, &f)?;
    }
    Ok(r)
}

pub fn barrier(ctx: &Ctx, a: &BarrierArgs) -> Result<Report, CliError> {
    let m = a.mass.unwrap_or(ctx.units.electron_mass);
    let p = ScatteringProblem::barrier(m, ctx.units.hbar, a.energy, a.v0, a.width)?;
    let cf = transmission(&p)?;
    let tm = oracle::transfer_matrix_transmission(&PiecewisePotential::barrier(a.v0, a.width)?, a.energy, m, ctx.units.hbar)?;
    let thick = thick_barrier_transmission(&p)?;
    let mut r = ctx.report("barrier");
    r.scalar("k", p.k())
        .scalar("kappa", p.kappa())
        .scalar("kappa_a", p.kappa() * a.width)
        .scalar("T_closed_form", cf.value)
        .scalar("ln_T", cf.ln)
        .scalar("T_transfer_matrix", tm.transmission)
        .scalar("T_thick_limit", thick.value);
    match solve_barrier(&p) {
        Ok(s) => {
            for (name, z) in [("r", s.r), ("t", s.t), ("A", s.a), ("B", s.b)] {
                complex(&mut r, name, z);
            }
            r.scalar("T", s.transmission()).scalar("R", s.reflection());
            if let Some(g) = a.grid {
                let f = madelung::decompose(&evaluate_wavefunction(&s, g.grid()?), m, p.hbar)?;
                field_table(&mut r, &p, &f)?;
            }
        }
        Err(e) if a.grid.is_none() => {
            r.scalar("linear_solve", e.to_string());
        }
        Err(e) => return Err(e.into()),
    }
    Ok(r)
}

pub fn madelung_cmd(ctx: &Ctx, a: &FieldArgs) -> Result<Report, CliError> {
    let m = a.mass.unwrap_or(ctx.units.electron_mass);
    let g = a.grid.grid()?;
    let mut r = ctx.report("madelung");
    let (p, f) = match a.potential {
        Shape::Step => {
            let p = ScatteringProblem::step(m, ctx.units.hbar, a.energy, a.v0)?;
            let f = madelung::decompose(&evaluate_wavefunction(&solve_step(&p)?, g), m, p.hbar)?;
            (p, f)
        }
        Shape::Barrier => {
            let p = ScatteringProblem::barrier(m, ctx.units.hbar, a.energy, a.v0, a.width)?;
            let s = solve_barrier(&p)?;
            r.scalar("flux", p.hbar * p.k() / m * s.transmission());
            let f = madelung::decompose(&evaluate_wavefunction(&s, g), m, p.hbar)?;
            (p, f)
        }
    };
    let cont = madelung::continuity_residual(&f)?;
    r.scalar("max_continuity_residual", cont.max_abs());
    field_table(&mut r, &p, &f)?;
    Ok(r)
}

pub fn branches_cmd(ctx: &Ctx, a: &FieldArgs) -> Result<Report, CliError> {
    let m = a.mass.unwrap_or(ctx.units.electron_mass);
    let hbar = ctx.units.hbar;
    let n = a.grid.n.max(madelung::SECOND.min_points());
    let regions: Vec<(&str, Vec<ActionBranch>, Grid1D, f64)> = match a.potential {
        Shape::Step => {
            let p = ScatteringProblem::step(m, hbar, a.energy, a.v0)?;
            let (r1, r2) = branches::step_branches(&solve_step(&p)?);
            let span = 5.0 / p.kappa();
            vec![
                ("I", r1, Grid1D::new(-span, -1e-9 * span, n)?, 0.0),
                ("II", r2, Grid1D::new(0.0, span, n)?, a.v0),
            ]
        }
        Shape::Barrier => {
            let p = ScatteringProblem::barrier(m, hbar, a.energy, a.v0, a.width)?;
            let [r1, r2, r3] = branches::barrier_branches(&solve_barrier(&p)?);
            let w = a.width;
            vec![
                ("I", r1, Grid1D::new(-2.0 * w, -1e-9 * w, n)?, 0.0),
                ("II", r2, Grid1D::new(0.0, w, n)?, a.v0),
                ("III", r3, Grid1D::new(w * (1.0 + 1e-9), 3.0 * w, n)?, 0.0),
            ]
        }
    };
    let mut r = ctx.report("branches");
    r.columns(&["region", "label", "classical_real", "max_abs_q", "max_abs_hj"]);
    for (name, bs, g, v) in &regions {
        let pot = RealField::from_fn(*g, |_| *v);
        for b in bs {
            let rep = branches::report(b, &pot, m, hbar)?;
            r.row(vec![(*name).into(), rep.label.into(), rep.classical_real.into(), rep.max_abs_q.into(), rep.max_abs_hj.into()]);
        }
    }
    if let Some((_, _, g, _)) = regions.iter().find(|x| x.0 == "II") {
        let kappa = (2.0 * m * (a.v0 - a.energy)).sqrt() / hbar;
        let forced = branches::forced_real_branch(kappa, hbar, a.energy);
        let rep = branches::report(&forced, &RealField::from_fn(*g, |_| a.v0), m, hbar)?;
        r.row(vec!["II".into(), rep.label.into(), rep.classical_real.into(), rep.max_abs_q.into(), rep.max_abs_hj.into()]);
    }
    Ok(r)
}

fn channel(ctx: &Ctx, a: &CoulombArgs) -> CoulombChannel {
    CoulombChannel {
        mass: a.mass.unwrap_or(ctx.units.electron_mass),
        hbar: ctx.units.hbar,
        energy: a.energy,
        z1: a.z1,
        z2: a.z2,
        e2: ctx.units.e2,
        l: a.l,
    }
}

fn coulomb_scalars(r: &mut Report, ch: &CoulombChannel) {
    r.scalar("k", ch.k())
        .scalar("eta", ch.eta())
        .scalar("turning_radius", ch.turning_radius().unwrap_or(f64::NAN))
        .scalar("ln_gamow_factor", coulomb::ln_gamow_factor(ch.eta(), ch.l));
}

fn radial_rows(r: &mut Report, ch: &CoulombChannel, f: &MadelungField) {
    r.columns(&["r", "rho", "s", "v", "q", "allowed"]);
    for (x, rho, s, v, q, _) in f.rows() {
        r.row(vec![x.into(), rho.into(), s.into(), v.into(), q.into(), (ch.energy > ch.v_eff(x)).into()]);
    }
}

pub fn coulomb_decay(ctx: &Ctx, a: &CoulombArgs) -> Result<Report, CliError> {
    let ch = channel(ctx, a);
    let f = coulomb::decay_fields(&ch, a.grid.grid()?)?;
    let mut r = ctx.report("coulomb-decay");
    coulomb_scalars(&mut r, &ch);
    r.scalar("current", ch.hbar * ch.k() / ch.mass);
    radial_rows(&mut r, &ch, &f);
    Ok(r)
}

pub fn coulomb_fusion(ctx: &Ctx, a: &FusionArgs) -> Result<Report, CliError> {
    let ch = channel(ctx, &a.channel);
    let fc = FusionChannel { s_matrix: Complex64::new(a.s_re, a.s_im), radius: a.radius };
    let f = coulomb::fusion_fields(&ch, &fc, a.channel.grid.grid()?)?;
    let mut r = ctx.report("coulomb-fusion");
    coulomb_scalars(&mut r, &ch);
    r.scalar("transmission", f.transmission).scalar("current", f.current);
    radial_rows(&mut r, &ch, &f.field);
    Ok(r)
}

fn parse_quadrature(s: &str) -> Result<Quadrature, CliError> {
    if s == "closed" {
        return Ok(Quadrature::ClosedForm);
    }
    let p: Vec<&str> = s.split(':').collect();
    if p.len() == 3 && p[0] == "trapezoid" {
        if let (Ok(points), Ok(half_width)) = (p[1].parse(), p[2].parse()) {
            return Ok(Quadrature::Trapezoid { points, half_width });
        }
    }
    Err(CliError::Usage(format!("--quadrature expects 'closed' or 'trapezoid:POINTS:HALF_WIDTH', got '{s}'")))
}

pub fn ks_hydrogen(ctx: &Ctx, a: &KsHydrogenArgs) -> Result<Report, CliError> {
    let m = a.mass.unwrap_or(ctx.units.electron_mass);
    let g = a.z * ctx.units.e2;
    let hbar = ctx.units.hbar;
    let e = a.energy.unwrap_or(-m * g * g / (2.0 * hbar * hbar));
    let cfg = KsConfig::new(g, e, m, hbar)?;
    let psi0 = InitialState::Gaussian { width: cfg.ground_width(), center: [0.0; 4], amplitude: 1.0 };
    let radii: Vec<f64> = a.r_grid.grid()?.points().collect();
    let p = ksmap::reconstruct_ground_state(&cfg, &psi0, parse_quadrature(&a.quadrature)?, a.tprime, &radii)?;
    let mut r = ctx.report("ks-hydrogen");
    r.scalar("energy", e)
        .scalar("omega", cfg.frequency())
        .scalar("slope", p.slope)
        .scalar("predicted_slope", p.predicted_slope)
        .scalar("bohr_slope", -m * g / (hbar * hbar))
        .scalar("intercept", p.intercept)
        .scalar("fit_residual", p.fit_residual);
    r.columns(&["r", "log_abs_psi"]);
    for (x, y) in p.r.iter().zip(&p.log_psi) {
        r.row(vec![(*x).into(), (*y).into()]);
    }
    Ok(r)
}

pub fn ks_inverted(ctx: &Ctx, a: &KsInvertedArgs) -> Result<Report, CliError> {
    let m = a.mass.unwrap_or(ctx.units.electron_mass);
    let cfg = KsConfig::new(a.z * ctx.units.e2, a.energy, m, ctx.units.hbar)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let q4 = |r: &mut ChaCha8Rng, s: f64| [0; 4].map(|_| r.random_range(-s..s));
    let launch: Vec<[f64; 4]> = (0..a.branches).map(|_| q4(&mut rng, 1.0)).collect();
    let weights = (0..a.branches)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let probes = (0..a.probes).map(|_| q4(&mut rng, 0.8)).collect();
    let sample = InterferenceSample {
        launch: launch.clone(),
        weights,
        width: a.width,
        tprime: a.tprime,
        probes,
        step: 1e-2,
        q_threshold: 0.01,
    };
    let rep = ksmap::inverted_branch_interference_check(&cfg, &sample)?;
    let mut r = ctx.report("ks-inverted");
    r.scalar("omega", cfg.frequency())
        .scalar("hj_residual", rep.hj_residual)
        .scalar("min_branch_q", rep.branch_q_min.iter().copied().fold(f64::INFINITY, f64::min))
        .scalar("passed", rep.passed);
    r.columns(&["branch", "q0_1", "q0_2", "q0_3", "q0_4", "max_abs_q", "min_abs_q"]);
    for (j, q0) in launch.iter().enumerate() {
        let mut row: Vec<Cell> = vec![Cell::Int(j as i64)];
        row.extend(q0.iter().map(|&x| Cell::Num(x)));
        row.push(rep.branch_q_max[j].into());
        row.push(rep.branch_q_min[j].into());
        r.row(row);
    }
    Ok(r)
}

pub fn berry(ctx: &Ctx, a: &BerryArgs) -> Result<Report, CliError> {
    let path = match (&a.loop_file, a.theta) {
        (Some(file), _) => {
            let text = std::fs::read_to_string(file).map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))?;
            let pairs: Vec<(f64, f64)> =
                serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))?;
            LoopPath::new(pairs)?
        }
        (None, Some(theta)) => LoopPath::latitude(theta, a.n)?,
        (None, None) => return Err(CliError::Usage("give --theta or --loop-file".into())),
    };
    let band = match a.band {
        BandArg::Plus => Band::Plus,
        BandArg::Minus => Band::Minus,
    };
    let gamma = phases::berry_phase_discrete(&path, band)?;
    let mut r = ctx.report("berry");
    r.scalar("samples", Cell::Int(path.n_points() as i64)).scalar("gamma", gamma);
    match phases::solid_angle(&path) {
        Ok(omega) => {
            let sign = if band == Band::Plus { -1.0 } else { 1.0 };
            r.scalar("solid_angle", omega).scalar("gamma_from_solid_angle", sign * omega / 2.0);
        }
        Err(e) => {
            r.scalar("solid_angle", e.to_string());
        }
    }
    Ok(r)
}

pub fn josephson(ctx: &Ctx, a: &JosephsonArgs) -> Result<Report, CliError> {
    let base = JunctionSpec {
        mstar: a.mstar.unwrap_or(2.0 * ctx.units.electron_mass),
        hbar: ctx.units.hbar,
        u0: a.u0,
        energy: a.energy,
        d: a.d,
        a_amp: a.a,
        b_amp: a.b,
        delta: 0.0,
    };
    base.validate()?;
    let mut r = ctx.report("josephson");
    r.scalar("kappa", base.kappa()).scalar("critical_current", base.critical_current());
    r.columns(&["delta", "current_closed_form", "current_from_field"]);
    for delta in a.delta_sweep.points() {
        let c = phases::josephson_current(&JunctionSpec { delta, ..base })?;
        r.row(vec![delta.into(), c.closed_form.into(), c.from_field.into()]);
    }
    Ok(r)
}

pub fn squid(ctx: &Ctx, a: &SquidArgs) -> Result<Report, CliError> {
    if !(a.ic > 0.0) {
        return Err(CliError::Usage("--ic must be positive".into()));
    }
    let phi0 = ctx.units.flux_quantum();
    let mut r = ctx.report("squid");
    r.scalar("ic_single", a.ic).scalar("flux_quantum", phi0);
    r.columns(&["flux_over_phi0", "flux", "ic_squid", "ic_squid_bruteforce"]);
    for f in a.flux_sweep.points() {
        r.row(vec![
            f.into(),
            (f * phi0).into(),
            phases::squid_critical_current(a.ic, f, 1.0).into(),
            phases::squid_critical_current_brute(a.ic, f, 1.0, 2001).into(),
        ]);
    }
    Ok(r)
}

/// Runs every criterion; timings go to stderr so the payload stays
/// deterministic.
pub fn validate_cmd(ctx: &Ctx, a: &ValidateArgs) -> Result<(Report, bool), CliError> {
    let mut r = ctx.report("validate");
    r.columns(&["id", "title", "check", "value", "limit", "passed"]);
    let mut all = true;
    for c in validate::run_all() {
        eprintln!("{}", c.summary_line());
        all &= c.passed();
        if let Some(e) = &c.error {
            r.row(vec![Cell::Int(c.id as i64), c.title.into(), "error".into(), f64::NAN.into(), f64::NAN.into(), false.into()]);
            eprintln!("    {e}");
        }
        for k in &c.checks {
            r.row(vec![Cell::Int(c.id as i64), c.title.into(), k.name.clone().into(), k.value.into(), k.limit.into(), k.passed().into()]);
        }
    }
    if let Some(dir) = &a.goldens {
        let checks = golden::verify_corpus(dir)?;
        let failed = checks.iter().filter(|c| !c.passed).count();
        let stale = golden::corpus_diff(dir)?;
        let ok = failed == 0 && stale.is_empty();
        eprintln!(
            "[{}] golden corpus: {} rows checked, {failed} failing, {} stale files",
            if ok { "PASS" } else { "FAIL" },
            checks.len(),
            stale.len()
        );
        all &= ok;
        r.row(vec![Cell::Int(0), "golden corpus".into(), "failing rows".into(), (failed as f64).into(), 0.0.into(), (failed == 0).into()]);
        r.row(vec![Cell::Int(0), "golden corpus".into(), "stale files".into(), (stale.len() as f64).into(), 0.0.into(), stale.is_empty().into()]);
    }
    r.scalar("passed", all);
    Ok((r, all))
}

pub fn goldens_cmd(ctx: &Ctx, a: &GoldensArgs) -> Result<(Report, bool), CliError> {
    let mut r = ctx.report("goldens");
    if a.write {
        let names = golden::regenerate_goldens(&a.dir)?;
        r.columns(&["file"]);
        for n in names {
            r.row(vec![n.into()]);
        }
        return Ok((r, true));
    }
    let stale = golden::corpus_diff(&a.dir)?;
    let checks = golden::verify_corpus(&a.dir)?;
    let checks: Vec<_> = checks
        .into_iter()
        .map(|mut c| {
            if let Some(t) = a.tolerance {
                c.tolerance = t;
                c.passed = c.within(t);
            }
            c
        })
        .collect();
    let ok = stale.is_empty() && checks.iter().all(|c| c.passed);
    r.scalar("stale_files", stale.join(" ")).scalar("passed", ok);
    r.columns(&["file", "case_id", "column", "expected", "actual", "tolerance", "passed"]);
    for c in checks {
        r.row(vec![c.file.into(), c.case_id.into(), c.column.into(), c.expected.into(), c.actual.into(), c.tolerance.into(), c.passed.into()]);
    }
    Ok((r, ok))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_points_exclude_stop() {
        let s: Sweep = "0:2:0.01".parse().unwrap();
        let p = s.points();
        assert_eq!(p.len(), 200);
        assert_eq!(p[50], 0.5);
        assert_eq!(p[150], 1.5);
        assert!("0:1".parse::<Sweep>().is_err());
        assert!("0:1:0".parse::<Sweep>().is_err());
    }

    #[test]
    fn grid_spec_parses() {
        let g: GridSpec = "-1:2.5:11".parse().unwrap();
        assert_eq!(g, GridSpec { min: -1.0, max: 2.5, n: 11 });
        assert!("1:2".parse::<GridSpec>().is_err());
    }

    #[test]
    fn quadrature_parses() {
        assert_eq!(parse_quadrature("closed").unwrap(), Quadrature::ClosedForm);
        assert_eq!(
            parse_quadrature("trapezoid:101:6").unwrap(),
            Quadrature::Trapezoid { points: 101, half_width: 6.0 }
        );
        assert!(parse_quadrature("simpson").is_err());
    }
}
