//! Coulomb problem in Kustaanheimo–Stiefel coordinates: a 4D oscillator of
//! mass `M = 4m` (bound, `E < 0`) or an inverted one (`E > 0`), with
//! `r = |q|^2` and pseudo-time `t'`.
//!
//! Every formula takes a complex frequency `w`: real `omega` for the bound
//! case, `i Omega` for the inverted case, so the two share one code path.
//! The inverted closed form with `coth`/`sinh` is kept separately as a
//! cross-check of that continuation.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Q4 = [f64; 4];
const I: Complex64 = Complex64::new(0.0, 1.0);
const CAUSTIC_TOL: f64 = 1e-12;

pub fn ks_radius(q: &Q4) -> f64 {
    q.iter().map(|x| x * x).sum()
}

fn dot(a: &Q4, b: &Q4) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsConfig {
    /// `G = Z e^2` (bound) or `Z1 Z2 e^2` (repulsive).
    pub g_strength: f64,
    /// Negative for bound states, positive for the repulsive case.
    pub energy: f64,
    pub mass: f64,
    pub hbar: f64,
    /// KS dimension, 4.
    pub d: usize,
    /// Replaces `sqrt(|E|/(2m))` when set.
    pub omega_override: Option<f64>,
}

impl KsConfig {
    pub fn new(g_strength: f64, energy: f64, mass: f64, hbar: f64) -> Result<Self> {
        if !(mass > 0.0 && hbar > 0.0 && energy != 0.0 && energy.is_finite() && g_strength >= 0.0) {
            return Err(Error::Domain(
                "need m, hbar > 0, G >= 0 and finite nonzero E".into(),
            ));
        }
        Ok(Self {
            g_strength,
            energy,
            mass,
            hbar,
            d: 4,
            omega_override: None,
        })
    }

    pub fn is_bound(&self) -> bool {
        self.energy < 0.0
    }

    /// Oscillator mass `M = 4m`.
    pub fn osc_mass(&self) -> f64 {
        4.0 * self.mass
    }

    /// `omega` (bound) or `Omega` (inverted): `sqrt(|E|/(2m))`.
    pub fn frequency(&self) -> f64 {
        self.omega_override
            .unwrap_or_else(|| (self.energy.abs() / (2.0 * self.mass)).sqrt())
    }

    /// `omega` for bound states, `i Omega` for the inverted oscillator.
    pub fn complex_frequency(&self) -> Complex64 {
        if self.is_bound() {
            self.frequency().into()
        } else {
            I * self.frequency()
        }
    }

    /// Pseudo-energy `p^2/(8m) + |E| q^2` (bound) or `p^2/(8m) - E q^2`
    /// (inverted); equals `G` resp. `-G` on physical trajectories.
    pub fn ks_energy(&self, q: &Q4, p: &Q4) -> f64 {
        ks_radius(p) / (8.0 * self.mass) - self.energy * ks_radius(q)
    }

    /// Ground-state Gaussian width `M omega / (2 hbar)` of the bound oscillator.
    pub fn ground_width(&self) -> f64 {
        self.osc_mass() * self.frequency() / (2.0 * self.hbar)
    }
}

/// One classical branch: launch point, pseudo-time and winding number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorBranch {
    pub q0: Q4,
    pub tprime: f64,
    pub winding: i32,
}

fn sin_cot(w: Complex64, t: f64) -> (Complex64, Complex64) {
    let s = (w * t).sin();
    (s, (w * t).cos() / s)
}

fn check_caustic(cfg: &KsConfig, t: f64) -> Result<()> {
    if !(t > 0.0) && !cfg.is_bound() {
        return Err(Error::Domain(format!("inverted case needs t' > 0, got {t}")));
    }
    let (s, _) = sin_cot(cfg.complex_frequency(), t);
    if s.norm() < CAUSTIC_TOL {
        return Err(Error::Caustic(format!("sin(omega t') vanishes at t' = {t}")));
    }
    Ok(())
}

/// Two-point action `M w [(q^2 + q0^2) cot(w t')/2 - q.q0 / sin(w t')]`
/// plus `(M w / 2) t' + G t''` with `t'' = t' + 2 pi k / w`.
pub fn oscillator_action(cfg: &KsConfig, q: &Q4, b: &OscillatorBranch) -> Result<Complex64> {
    check_caustic(cfg, b.tprime)?;
    let w = cfg.complex_frequency();
    let m = cfg.osc_mass();
    let (s, c) = sin_cot(w, b.tprime);
    let quad = m * w * ((ks_radius(q) + ks_radius(&b.q0)) * c / 2.0 - dot(q, &b.q0) / s);
    let t2 = b.tprime + 2.0 * std::f64::consts::PI * b.winding as f64 / w;
    Ok(quad + m * w / 2.0 * b.tprime + cfg.g_strength * t2)
}

/// The inverted action written directly with hyperbolic functions:
/// `M Omega [(q^2 + q0^2) coth/2 - q.q0/sinh] + i (M Omega/2) t' + G (t' - 2 pi i k/Omega)`.
pub fn inverted_action_hyperbolic(cfg: &KsConfig, q: &Q4, b: &OscillatorBranch) -> Result<Complex64> {
    if cfg.is_bound() {
        return Err(Error::Domain("hyperbolic form needs E > 0".into()));
    }
    check_caustic(cfg, b.tprime)?;
    let om = cfg.frequency();
    let m = cfg.osc_mass();
    let x = om * b.tprime;
    let quad = m * om * ((ks_radius(q) + ks_radius(&b.q0)) / x.tanh() / 2.0 - dot(q, &b.q0) / x.sinh());
    let pi2k = 2.0 * std::f64::consts::PI * b.winding as f64;
    Ok(Complex64::new(quad + cfg.g_strength * b.tprime, m * om / 2.0 * b.tprime - cfg.g_strength * pi2k / om))
}

/// Classical trajectory `(q, p)` at pseudo-time `t` from `(q0, p0)`.
pub fn classical_trajectory(cfg: &KsConfig, q0: &Q4, p0: &Q4, t: f64) -> (Q4, Q4) {
    let m = cfg.osc_mass();
    let w = cfg.frequency();
    let (c, s, ds) = if cfg.is_bound() {
        ((w * t).cos(), (w * t).sin(), -(w * t).sin())
    } else {
        ((w * t).cosh(), (w * t).sinh(), (w * t).sinh())
    };
    let mut q = [0.0; 4];
    let mut p = [0.0; 4];
    for i in 0..4 {
        q[i] = q0[i] * c + p0[i] / (m * w) * s;
        p[i] = m * w * q0[i] * ds + p0[i] * c;
    }
    (q, p)
}

/// Initial momentum along `dir` that puts `q0` on the physical KS energy
/// shell (`G` bound, `-G` inverted).
pub fn shell_momentum(cfg: &KsConfig, q0: &Q4, dir: &Q4) -> Result<Q4> {
    let target = if cfg.is_bound() { cfg.g_strength } else { -cfg.g_strength };
    let p2 = 8.0 * cfg.mass * (target + cfg.energy * ks_radius(q0));
    let n = ks_radius(dir).sqrt();
    if p2 < 0.0 || n == 0.0 {
        return Err(Error::Domain(
            "launch point is outside the classically allowed shell".into(),
        ));
    }
    let scale = p2.sqrt() / n;
    Ok(dir.map(|x| x * scale))
}

/// `Q = -(hbar^2/2M) [ sum_i (-2 alpha q_i + beta_i)^2 - 2 alpha d ]` for the
/// amplitude `exp(-alpha q^2 + beta.q)`; complex coefficients allowed.
pub fn branch_quantum_potential_4d(alpha: Complex64, beta: &[Complex64; 4], q: &Q4, cfg: &KsConfig) -> Complex64 {
    let grad2: Complex64 = (0..4).map(|i| (-2.0 * alpha * q[i] + beta[i]).powi(2)).sum();
    -(cfg.hbar * cfg.hbar / (2.0 * cfg.osc_mass())) * (grad2 - 2.0 * alpha * cfg.d as f64)
}

/// One dimension of a Gaussian packet `exp(-alpha x^2 + beta x + c0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gaussian1D {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub c0: Complex64,
}

impl Gaussian1D {
    pub fn eval(&self, x: f64) -> Complex64 {
        (-self.alpha * x * x + self.beta * x + self.c0).exp()
    }

    pub fn ln_eval(&self, x: f64) -> Complex64 {
        -self.alpha * x * x + self.beta * x + self.c0
    }
}

/// Exact propagation of `exp(-a0 (x - x0)^2)` by the 1D kernel
/// `sqrt(M w/(2 pi i hbar s)) exp(i M w [(x^2+y^2) c - 2xy/s]/(2 hbar))`,
/// `s = sin(w t)`, `c = cot(w t)`: a Gaussian integral over `y`.
pub fn propagate_gaussian(cfg: &KsConfig, a0: f64, x0: f64, t: f64) -> Result<Gaussian1D> {
    check_caustic(cfg, t)?;
    let w = cfg.complex_frequency();
    let (m, hbar) = (cfg.osc_mass(), cfg.hbar);
    let (s, c) = sin_cot(w, t);
    let mw = m * w;
    let a = a0 - I * mw * c / (2.0 * hbar);
    let alpha = mw * mw / (4.0 * hbar * hbar * s * s * a) - I * mw * c / (2.0 * hbar);
    let beta = -I * a0 * x0 * mw / (hbar * s * a);
    let norm = mw / (2.0 * std::f64::consts::PI * I * hbar * s);
    let c0 = a0 * a0 * x0 * x0 / a - a0 * x0 * x0
        + 0.5 * norm.ln()
        + 0.5 * (std::f64::consts::PI / a).ln();
    Ok(Gaussian1D { alpha, beta, c0 })
}

/// 1D kernel value `K(x, t | y)`.
fn kernel(cfg: &KsConfig, x: f64, y: f64, t: f64) -> Complex64 {
    let w = cfg.complex_frequency();
    let (m, hbar) = (cfg.osc_mass(), cfg.hbar);
    let (s, c) = sin_cot(w, t);
    let norm = (m * w / (2.0 * std::f64::consts::PI * I * hbar * s)).sqrt();
    norm * (I * m * w * ((x * x + y * y) * c - 2.0 * x * y / s) / (2.0 * hbar)).exp()
}

/// Initial state of the branch integral.
#[derive(Clone)]
pub enum InitialState {
    /// `amplitude * exp(-width |q - center|^2)`.
    Gaussian { width: f64, center: Q4, amplitude: f64 },
    /// Any other state; the closed-form path cannot integrate it.
    Custom(Arc<dyn Fn(&Q4) -> Complex64 + Send + Sync>),
}

impl std::fmt::Debug for InitialState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Gaussian { width, center, amplitude } => f
                .debug_struct("Gaussian")
                .field("width", width)
                .field("center", center)
                .field("amplitude", amplitude)
                .finish(),
            Self::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// How the integral over launch points is evaluated. The integrand
/// factorises into four 1D integrals either way.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quadrature {
    ClosedForm,
    /// Trapezoid rule on `[center - half_width, center + half_width]`.
    Trapezoid { points: usize, half_width: f64 },
}

/// `ln psi(q, t')` of the branch integral `int K(q, t' | q0) psi0(q0) dq0`.
pub fn integrated_ln_psi(
    cfg: &KsConfig,
    psi0: &InitialState,
    quad: Quadrature,
    q: &Q4,
    t: f64,
) -> Result<Complex64> {
    let (width, center, amplitude) = match psi0 {
        InitialState::Gaussian { width, center, amplitude } => (*width, *center, *amplitude),
        InitialState::Custom(_) => {
            return Err(Error::UnsupportedInitialState(
                "only Gaussian initial states factorise into closed-form integrals".into(),
            ))
        }
    };
    if !(width > 0.0) {
        return Err(Error::UnsupportedInitialState(format!(
            "Gaussian width must be positive, got {width}"
        )));
    }
    check_caustic(cfg, t)?;
    let mut ln = Complex64::new(amplitude.ln(), 0.0);
    for i in 0..4 {
        ln += match quad {
            Quadrature::ClosedForm => propagate_gaussian(cfg, width, center[i], t)?.ln_eval(q[i]),
            Quadrature::Trapezoid { points, half_width } => {
                let n = points.max(3);
                let h = 2.0 * half_width / (n - 1) as f64;
                let mut sum = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    let y = center[i] - half_width + h * j as f64;
                    let wgt = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
                    sum += wgt * kernel(cfg, q[i], y, t) * (-width * (y - center[i]).powi(2)).exp();
                }
                (sum * h).ln()
            }
        };
    }
    Ok(ln)
}

/// `log|psi|` against `r = |q|^2`, with the least-squares line.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub r: Vec<f64>,
    pub log_psi: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    /// Max |log psi - (intercept + slope r)|.
    pub fit_residual: f64,
    /// `-M omega / (2 hbar)`.
    pub predicted_slope: f64,
}

/// Least-squares line through `(x, y)`; returns `(slope, intercept, max residual)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let res = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).abs())
        .fold(0.0, f64::max);
    (slope, intercept, res)
}

/// Evaluates the branch integral along the diagonal `q = sqrt(r/4) (1,1,1,1)`
/// at each `r` and fits `log|psi|` against `r`.
pub fn reconstruct_ground_state(
    cfg: &KsConfig,
    psi0: &InitialState,
    quad: Quadrature,
    tprime: f64,
    r: &[f64],
) -> Result<RadialProfile> {
    if !cfg.is_bound() {
        return Err(Error::OutOfRegime("ground-state reconstruction needs E < 0".into()));
    }
    if r.len() < 2 || r.iter().any(|&x| !(x >= 0.0)) {
        return Err(Error::Domain("need at least two radii r >= 0".into()));
    }
    let log_psi: Vec<f64> = r
        .iter()
        .map(|&ri| {
            let c = (ri / 4.0).sqrt();
            integrated_ln_psi(cfg, psi0, quad, &[c; 4], tprime).map(|z| z.re)
        })
        .collect::<Result<_>>()?;
    let (slope, intercept, fit_residual) = linear_fit(r, &log_psi);
    Ok(RadialProfile {
        r: r.to_vec(),
        log_psi,
        slope,
        intercept,
        fit_residual,
        predicted_slope: -cfg.ground_width(),
    })
}

/// A packet launched at `q0` and propagated to `t'`, one Gaussian factor per
/// dimension. Its amplitude is the Gaussian `exp(-alpha q^2 + beta.q)` of a
/// single classical branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketBranch {
    pub dims: [Gaussian1D; 4],
}

impl PacketBranch {
    pub fn launch(cfg: &KsConfig, q0: &Q4, width: f64, t: f64) -> Result<Self> {
        let mut dims = [Gaussian1D {
            alpha: 0.0.into(),
            beta: 0.0.into(),
            c0: 0.0.into(),
        }; 4];
        for i in 0..4 {
            dims[i] = propagate_gaussian(cfg, width, q0[i], t)?;
        }
        Ok(Self { dims })
    }

    pub fn psi(&self, q: &Q4) -> Complex64 {
        self.dims
            .iter()
            .zip(q)
            .map(|(g, &x)| g.ln_eval(x))
            .sum::<Complex64>()
            .exp()
    }

    pub fn alpha(&self) -> Complex64 {
        self.dims[0].alpha
    }

    pub fn beta(&self) -> [Complex64; 4] {
        [self.dims[0].beta, self.dims[1].beta, self.dims[2].beta, self.dims[3].beta]
    }

    pub fn quantum_potential(&self, q: &Q4, cfg: &KsConfig) -> Complex64 {
        branch_quantum_potential_4d(self.alpha(), &self.beta(), q, cfg)
    }
}

/// Launch points, weights and probes for the interference check.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceSample {
    pub launch: Vec<Q4>,
    pub weights: Vec<Complex64>,
    pub width: f64,
    pub tprime: f64,
    pub probes: Vec<Q4>,
    /// Finite-difference step in `q` and `t'`.
    pub step: f64,
    pub q_threshold: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceReport {
    /// Max over probes of `|Q_j|`, per branch.
    pub branch_q_max: Vec<f64>,
    /// Min over probes of `|Q_j|`, per branch.
    pub branch_q_min: Vec<f64>,
    /// Max over probes of the quantum HJ residual of the superposition.
    pub hj_residual: f64,
    pub passed: bool,
}

/// 6th-order central weights for first and second derivatives.
const D1: [f64; 7] = [-1.0 / 60.0, 3.0 / 20.0, -3.0 / 4.0, 0.0, 3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0];
const D2: [f64; 7] = [1.0 / 90.0, -3.0 / 20.0, 3.0 / 2.0, -49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0];

/// Checks that each packet branch carries a nonzero quantum potential while
/// their superposition obeys the time-dependent quantum HJ equation
/// `dS/dt' + |grad S|^2/2M + V + Q = 0`, `V = M w^2 q^2 / 2`, with every
/// derivative taken by finite differences of the field.
pub fn inverted_branch_interference_check(
    cfg: &KsConfig,
    sample: &InterferenceSample,
) -> Result<InterferenceReport> {
    if cfg.is_bound() {
        return Err(Error::OutOfRegime("interference check needs E > 0".into()));
    }
    if sample.launch.len() != sample.weights.len() || sample.launch.is_empty() {
        return Err(Error::Domain("need one weight per launch point".into()));
    }
    let h = sample.step;
    let build = |t: f64| -> Result<Vec<PacketBranch>> {
        sample
            .launch
            .iter()
            .map(|q0| PacketBranch::launch(cfg, q0, sample.width, t))
            .collect()
    };
    let at_t = build(sample.tprime)?;
    let by_time: Vec<Vec<PacketBranch>> = (-3..=3)
        .map(|k| build(sample.tprime + h * k as f64))
        .collect::<Result<_>>()?;
    let field = |bs: &[PacketBranch], q: &Q4| -> Complex64 {
        bs.iter().zip(&sample.weights).map(|(b, w)| w * b.psi(q)).sum()
    };

    let mut qmax = vec![0.0f64; at_t.len()];
    let mut qmin = vec![f64::INFINITY; at_t.len()];
    let m = cfg.osc_mass();
    let hbar = cfg.hbar;
    let w2 = cfg.complex_frequency().powi(2).re;
    let mut worst = 0.0f64;
    for q in &sample.probes {
        for (j, b) in at_t.iter().enumerate() {
            let v = b.quantum_potential(q, cfg).norm();
            qmax[j] = qmax[j].max(v);
            qmin[j] = qmin[j].min(v);
        }
        let psi = field(&at_t, q);
        let amp = psi.norm();
        let mut grad_s2 = 0.0;
        let mut lap_amp = 0.0;
        for i in 0..4 {
            let (mut d1, mut d2) = (Complex64::new(0.0, 0.0), 0.0);
            for (k, (&c1, &c2)) in D1.iter().zip(&D2).enumerate() {
                let mut qs = *q;
                qs[i] += h * (k as f64 - 3.0);
                let f = field(&at_t, &qs);
                d1 += c1 * f;
                d2 += c2 * f.norm();
            }
            let ds = hbar * (d1 / (h * psi)).im;
            grad_s2 += ds * ds;
            lap_amp += d2 / (h * h);
        }
        let dt: Complex64 = by_time
            .iter()
            .zip(&D1)
            .map(|(bs, c)| c * field(bs, q))
            .sum::<Complex64>()
            / h;
        let dsdt = hbar * (dt / psi).im;
        let pot = 0.5 * m * w2 * ks_radius(q);
        let qbohm = -(hbar * hbar / (2.0 * m)) * lap_amp / amp;
        let res = dsdt + grad_s2 / (2.0 * m) + pot + qbohm;
        worst = worst.max(res.abs());
    }
    let passed = qmin.iter().all(|&v| v > sample.q_threshold) && worst < 1e-6;
    Ok(InterferenceReport {
        branch_q_max: qmax,
        branch_q_min: qmin,
        hj_residual: worst,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hydrogen() -> KsConfig {
        KsConfig::new(1.0, -0.5, 1.0, 1.0).unwrap()
    }

    fn repulsive() -> KsConfig {
        KsConfig::new(1.0, 0.5, 1.0, 1.0).unwrap()
    }

    #[test]
    fn radius_examples() {
        assert_eq!(ks_radius(&[0.0; 4]), 0.0);
        assert_eq!(ks_radius(&[1.0, 0.0, 0.0, 0.0]), 1.0);
        assert_eq!(ks_radius(&[1.0; 4]), 4.0);
    }

    #[test]
    fn frequency_from_energy_shell() {
        let c = hydrogen();
        assert_eq!(c.osc_mass(), 4.0);
        assert!((c.frequency() - 0.5).abs() < 1e-15);
        // 1s of hydrogen in atomic units decays as e^{-r}
        assert!((c.ground_width() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ks_energy_conserved_on_trajectories() {
        for cfg in [hydrogen(), repulsive()] {
            let q0 = if cfg.is_bound() { [0.3, -0.2, 0.5, 0.1] } else { [1.2, -0.9, 0.8, 1.1] };
            let p0 = shell_momentum(&cfg, &q0, &[0.2, 1.0, -0.4, 0.3]).unwrap();
            let target = if cfg.is_bound() { 1.0 } else { -1.0 };
            for k in 0..50 {
                let (q, p) = classical_trajectory(&cfg, &q0, &p0, 0.1 * k as f64);
                assert!((cfg.ks_energy(&q, &p) - target).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn continuation_matches_hyperbolic_form() {
        let cfg = repulsive();
        for (q, q0, t, k) in [
            ([0.1, 0.2, -0.3, 0.4], [0.5, 0.0, 0.2, -0.1], 0.7, 0),
            ([1.0, -1.0, 0.5, 2.0], [-0.3, 0.4, 0.0, 0.9], 2.3, 3),
        ] {
            let b = OscillatorBranch { q0, tprime: t, winding: k };
            let a = oscillator_action(&cfg, &q, &b).unwrap();
            let h = inverted_action_hyperbolic(&cfg, &q, &b).unwrap();
            assert!((a - h).norm() < 1e-10 * h.norm(), "{a} {h}");
        }
    }

    #[test]
    fn action_is_quadratic_and_real_for_bound_case() {
        let cfg = hydrogen();
        let b = |q0| OscillatorBranch { q0, tprime: 1.1, winding: 0 };
        let q = [0.3, -0.1, 0.7, 0.2];
        let q0 = [-0.4, 0.5, 0.1, 0.3];
        let base = oscillator_action(&cfg, &[0.0; 4], &b([0.0; 4])).unwrap();
        let part = |l: f64| oscillator_action(&cfg, &q.map(|x| l * x), &b(q0.map(|x| l * x))).unwrap() - base;
        assert!((part(2.0) - 4.0 * part(1.0)).norm() < 1e-12);
        assert!(part(1.0).im.abs() < 1e-15);
        let caustic = OscillatorBranch { q0, tprime: std::f64::consts::PI / 0.5, winding: 0 };
        assert!(matches!(oscillator_action(&cfg, &q, &caustic), Err(Error::Caustic(_))));
    }

    #[test]
    fn branch_q_examples() {
        let cfg = hydrogen();
        let z = Complex64::new(0.0, 0.0);
        assert_eq!(branch_quantum_potential_4d(z, &[z; 4], &[0.3; 4], &cfg).norm(), 0.0);
        let alpha = 0.7;
        let q = branch_quantum_potential_4d(alpha.into(), &[z; 4], &[0.0; 4], &cfg);
        assert!((q.re - 1.0 / 8.0 * 2.0 * alpha * 4.0).abs() < 1e-15);
    }

    #[test]
    fn branch_q_against_finite_difference_laplacian() {
        let cfg = hydrogen();
        let alpha = 0.6;
        let beta = [0.2, -0.5, 0.1, 0.8];
        let amp = |q: &Q4| (-alpha * ks_radius(q) + dot(&beta, q)).exp();
        let q = [0.3, 0.1, -0.4, 0.25];
        let h = 1e-2;
        let mut lap = 0.0;
        for i in 0..4 {
            for (k, c) in D2.iter().enumerate() {
                let mut qs = q;
                qs[i] += h * (k as f64 - 3.0);
                lap += c * amp(&qs) / (h * h);
            }
        }
        let fd = -(1.0 / 8.0) * lap / amp(&q);
        let cb = beta.map(Complex64::from);
        let exact = branch_quantum_potential_4d(alpha.into(), &cb, &q, &cfg);
        assert!((fd - exact.re).abs() < 1e-8);
    }

    #[test]
    fn ground_state_is_stationary_and_decays_exponentially() {
        let cfg = hydrogen();
        let psi0 = InitialState::Gaussian { width: cfg.ground_width(), center: [0.0; 4], amplitude: 1.0 };
        let r: Vec<f64> = (0..100).map(|i| 0.1 + 9.9 * i as f64 / 99.0).collect();
        for t in [0.3, 1.7, 4.0] {
            let p = reconstruct_ground_state(&cfg, &psi0, Quadrature::ClosedForm, t, &r).unwrap();
            assert!(p.fit_residual < 1e-10);
            assert!((p.slope / p.predicted_slope - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn quadrature_refinement_agrees_with_closed_form() {
        let cfg = hydrogen();
        let psi0 = InitialState::Gaussian { width: 1.0, center: [0.0; 4], amplitude: 1.0 };
        let quad = Quadrature::Trapezoid { points: 801, half_width: 8.0 };
        for r in [0.1, 2.0, 10.0] {
            let q = [(r / 4.0f64).sqrt(); 4];
            let a = integrated_ln_psi(&cfg, &psi0, Quadrature::ClosedForm, &q, 1.3).unwrap();
            let b = integrated_ln_psi(&cfg, &psi0, quad, &q, 1.3).unwrap();
            assert!((a.exp() - b.exp()).norm() < 1e-10 * a.exp().norm());
        }
    }

    #[test]
    fn linear_in_initial_amplitude() {
        let cfg = hydrogen();
        let mk = |a| InitialState::Gaussian { width: 1.0, center: [0.0; 4], amplitude: a };
        let q = [0.4, 0.1, 0.2, 0.3];
        let one = integrated_ln_psi(&cfg, &mk(1.0), Quadrature::ClosedForm, &q, 0.8).unwrap().exp();
        let three = integrated_ln_psi(&cfg, &mk(3.0), Quadrature::ClosedForm, &q, 0.8).unwrap().exp();
        assert!((three - 3.0 * one).norm() < 1e-14);
    }

    #[test]
    fn custom_initial_state_is_unsupported() {
        let cfg = hydrogen();
        let psi0 = InitialState::Custom(Arc::new(|_q: &Q4| Complex64::new(1.0, 0.0)));
        assert!(matches!(
            integrated_ln_psi(&cfg, &psi0, Quadrature::ClosedForm, &[0.0; 4], 1.0),
            Err(Error::UnsupportedInitialState(_))
        ));
    }

    #[test]
    fn inverted_branches_interfere() {
        let cfg = repulsive();
        let launch = vec![
            [0.5, -0.3, 0.2, 0.1],
            [-0.4, 0.6, 0.0, 0.3],
            [0.1, 0.1, -0.7, 0.5],
        ];
        let sample = InterferenceSample {
            weights: vec![1.0.into(), Complex64::new(0.3, 0.5), (-0.7).into()],
            launch,
            width: 1.0,
            tprime: 0.6,
            probes: vec![[0.0; 4], [0.3, -0.2, 0.4, 0.1], [-0.5, 0.5, 0.2, -0.3]],
            step: 1e-2,
            q_threshold: 0.01,
        };
        let rep = inverted_branch_interference_check(&cfg, &sample).unwrap();
        assert!(rep.passed, "{rep:?}");
    }

    #[test]
    fn symmetric_pair_is_even() {
        let cfg = repulsive();
        let q0 = [0.4, -0.2, 0.3, 0.1];
        let b1 = PacketBranch::launch(&cfg, &q0, 1.0, 0.9).unwrap();
        let b2 = PacketBranch::launch(&cfg, &q0.map(|x| -x), 1.0, 0.9).unwrap();
        let f = |q: &Q4| b1.psi(q) + b2.psi(q);
        let q = [0.3, 0.5, -0.2, 0.7];
        assert!((f(&q) - f(&q.map(|x| -x))).norm() < 1e-14 * f(&q).norm());
        let h = 1e-4;
        for i in 0..4 {
            let mut a = [0.0; 4];
            let mut b = [0.0; 4];
            a[i] = h;
            b[i] = -h;
            let grad_phase = ((f(&a) / f(&b)).arg()) / (2.0 * h);
            assert!(grad_phase.abs() < 1e-10);
        }
    }
}
