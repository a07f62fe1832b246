//! Coulomb wave functions `F_L(eta, rho)`, `G_L(eta, rho)` and the radial
//! Madelung fields of decay (`H+`) and fusion (`H- - S_L H+`) waves.
//!
//! Beyond the turning point `rho_t = eta + sqrt(eta^2 + L(L+1))` the
//! functions come from Steed's continued fractions. Inside it, `F` is built
//! from its power series near the origin and integrated outward, `G` is
//! integrated inward from `rho_t`; both run in their stable directions. The
//! outward `F` is compared with Steed's value at `rho_t` as a precision gate.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gridfield::{Grid1D, RealField};
use crate::madelung::MadelungField;
use crate::ode::{self, Tolerance};

const I: Complex64 = Complex64::new(0.0, 1.0);
const CF_EPS: f64 = 4.0 * f64::EPSILON;
const CF_MAX_ITER: usize = 1_000_000;
/// Below this `rho` Steed's second fraction is not used.
const STEED_MIN_RHO: f64 = 1.0;
/// Significant digits required by the turning-point consistency gate.
pub const GATE_DIGITS: f64 = 10.0;

/// Values and `rho`-derivatives of the regular and irregular functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoulombSolution {
    pub f: f64,
    pub g: f64,
    pub fp: f64,
    pub gp: f64,
}

impl CoulombSolution {
    /// `H+ = G + iF`.
    pub fn h_plus(&self) -> Complex64 {
        Complex64::new(self.g, self.f)
    }

    /// `H- = G - iF`.
    pub fn h_minus(&self) -> Complex64 {
        Complex64::new(self.g, -self.f)
    }

    pub fn h_plus_prime(&self) -> Complex64 {
        Complex64::new(self.gp, self.fp)
    }

    pub fn h_minus_prime(&self) -> Complex64 {
        Complex64::new(self.gp, -self.fp)
    }

    /// `F' G - F G'`; equal to 1.
    pub fn wronskian(&self) -> f64 {
        self.fp * self.g - self.f * self.gp
    }
}

/// `rho_t = eta + sqrt(eta^2 + L(L+1))`, zero for the free s-wave.
pub fn turning_point(eta: f64, l: u32) -> f64 {
    let lam = (l as f64) * (l as f64 + 1.0);
    eta + (eta * eta + lam).sqrt()
}

fn check_args(eta: f64, rho: f64) -> Result<()> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::Domain(format!("rho must be positive and finite, got {rho}")));
    }
    if !(eta >= 0.0 && eta.is_finite()) {
        return Err(Error::Domain(format!("eta must be finite and >= 0, got {eta}")));
    }
    Ok(())
}

/// `F, G, F', G'` for `eta >= 0`, `rho > 0`.
pub fn coulomb_fg(eta: f64, rho: f64, l: u32) -> Result<CoulombSolution> {
    check_args(eta, rho)?;
    let switch = turning_point(eta, l).max(STEED_MIN_RHO);
    if rho >= switch {
        return steed(eta, rho, l);
    }
    let anchor = steed(eta, switch, l)?;
    let (f, fp) = regular_outward(eta, rho, l, switch, &anchor)?;
    let (g, gp) = integrate_linear(eta, l, switch, anchor.g, anchor.gp, rho)?;
    let sol = CoulombSolution { f, g, fp, gp };
    if ![f, g, fp, gp].iter().all(|v| v.is_finite()) || f == 0.0 {
        return Err(Error::Precision {
            what: format!("Coulomb functions out of range at eta = {eta}, rho = {rho}, L = {l}"),
            digits: 0.0,
        });
    }
    Ok(sol)
}

/// CF1 for `f = F'/F` with the sign of `F`, by modified Lentz.
fn cf1(eta: f64, rho: f64, l: u32) -> Result<(f64, f64)> {
    let s = |j: f64| j / rho + eta / j;
    let r2 = |j: f64| 1.0 + eta * eta / (j * j);
    let tiny = 1e-300;
    let l1 = l as f64 + 1.0;
    let mut f = s(l1);
    if f == 0.0 {
        f = tiny;
    }
    let (mut c, mut d) = (f, 0.0);
    let mut sign = 1.0;
    for n in 0..CF_MAX_ITER {
        let j = l1 + n as f64;
        let a = -r2(j);
        let b = s(j) + s(j + 1.0);
        d = b + a * d;
        if d == 0.0 {
            d = tiny;
        }
        c = b + a / c;
        if c == 0.0 {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if d < 0.0 {
            sign = -sign;
        }
        if (delta - 1.0).abs() < CF_EPS {
            return Ok((f, sign));
        }
    }
    Err(Error::Precision {
        what: "CF1 did not converge".into(),
        digits: 0.0,
    })
}

/// CF2 for `H+'/H+ = p + iq`.
fn cf2(eta: f64, rho: f64, l: u32) -> Result<Complex64> {
    let lf = l as f64;
    let a = Complex64::new(1.0 + lf, eta);
    let b = Complex64::new(-lf, eta);
    // complex division squares the divisor's modulus, so 1e-300 would underflow
    let tiny = Complex64::new(1e-150, 0.0);
    let mut f = tiny;
    let (mut c, mut d) = (f, Complex64::new(0.0, 0.0));
    for n in 1..CF_MAX_ITER {
        let nf = n as f64;
        let an = (a + nf - 1.0) * (b + nf - 1.0);
        let bn = 2.0 * Complex64::new(rho - eta, nf);
        d = bn + an * d;
        if d.norm() == 0.0 {
            d = tiny;
        }
        c = bn + an / c;
        if c.norm() == 0.0 {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < CF_EPS {
            return Ok(I * (1.0 - eta / rho) + I / rho * f);
        }
    }
    Err(Error::Precision {
        what: "CF2 did not converge".into(),
        digits: 0.0,
    })
}

fn steed(eta: f64, rho: f64, l: u32) -> Result<CoulombSolution> {
    let (f_ratio, sign) = cf1(eta, rho, l)?;
    let pq = cf2(eta, rho, l)?;
    let (p, q) = (pq.re, pq.im);
    let gamma = (f_ratio - p) / q;
    let f = sign / (q * (1.0 + gamma * gamma)).sqrt();
    Ok(CoulombSolution {
        f,
        g: gamma * f,
        fp: f_ratio * f,
        gp: (p * gamma - q) * f,
    })
}

/// `ln C_L(eta)` from `C_0 = sqrt(2 pi eta / (e^{2 pi eta} - 1))` and
/// `C_L = C_{L-1} sqrt(L^2 + eta^2) / (L (2L + 1))`.
pub fn ln_gamow_factor(eta: f64, l: u32) -> f64 {
    let x = 2.0 * std::f64::consts::PI * eta;
    let mut c = if x == 0.0 {
        0.0
    } else {
        0.5 * (x.ln() - x - (-(-x).exp()).ln_1p())
    };
    for j in 1..=l {
        let jf = j as f64;
        c += 0.5 * (jf * jf + eta * eta).ln() - (jf * (2.0 * jf + 1.0)).ln();
    }
    c
}

/// Power series `F = C_L rho^{L+1} sum A_k rho^k` with its derivative,
/// returned as `(ln prefactor, sum, d/drho sum-part)` so tiny values stay
/// representable.
fn regular_series(eta: f64, rho: f64, l: u32) -> Result<(f64, f64, f64)> {
    let lf = l as f64;
    let (mut am2, mut am1) = (0.0, 1.0);
    let (mut s, mut sp) = (1.0, (lf + 1.0) / rho);
    let mut prev = 1.0;
    for k in 1..400 {
        let kf = k as f64;
        let ak = if k == 1 {
            eta / (lf + 1.0)
        } else {
            (2.0 * eta * am1 - am2) / (kf * (kf + 2.0 * lf + 1.0))
        };
        let t = ak * rho.powi(k);
        s += t;
        sp += (kf + lf + 1.0) * t / rho;
        am2 = am1;
        am1 = ak;
        if t.abs().max(prev) < 1e-17 * s.abs() {
            return Ok((ln_gamow_factor(eta, l) + (lf + 1.0) * rho.ln(), s, sp));
        }
        prev = t.abs();
    }
    Err(Error::Precision {
        what: "power series for F did not converge".into(),
        digits: 0.0,
    })
}

/// Integrates the radial equation for `(u, rho u')` in `t = ln rho`.
fn integrate_linear(eta: f64, l: u32, from: f64, u: f64, up: f64, to: f64) -> Result<(f64, f64)> {
    let lam = (l as f64) * (l as f64 + 1.0);
    let y = ode::integrate(
        |t, y: &[f64; 2]| {
            let r = t.exp();
            [y[1], y[1] + (2.0 * eta * r + lam - r * r) * y[0]]
        },
        from.ln(),
        [u, from * up],
        to.ln(),
        Tolerance::default(),
    )?;
    Ok((y[0], y[1] / to))
}

/// Regular solution inside the switch point, normalised by the Gamow
/// factor, after checking the outward continuation against `anchor`.
fn regular_outward(
    eta: f64,
    rho: f64,
    l: u32,
    switch: f64,
    anchor: &CoulombSolution,
) -> Result<(f64, f64)> {
    let r0 = rho.min(0.25 * (l as f64 + 1.0) / (l as f64 + 1.0 + eta));
    let (ln_pref, s, sp) = regular_series(eta, r0, l)?;
    // unit-scaled integration, prefactor restored at the end
    let (u, up) = if r0 < rho {
        integrate_linear(eta, l, r0, s, sp, rho)?
    } else {
        (s, sp)
    };
    let (us, ups) = integrate_linear(eta, l, rho, u, up, switch)?;
    let scale = |v: f64| v.signum() * (v.abs().ln() + ln_pref).exp();
    let (fs, fps) = (scale(us), scale(ups));
    let err = ((fs - anchor.f).abs() + (fps - anchor.fp).abs())
        / (anchor.f.hypot(anchor.g) + anchor.fp.hypot(anchor.gp));
    let digits = -err.max(1e-17).log10();
    if !(digits >= GATE_DIGITS) {
        return Err(Error::Precision {
            what: format!("inner/outer consistency at eta = {eta}, rho = {rho}, L = {l}"),
            digits,
        });
    }
    Ok((scale(u), scale(up)))
}

/// A radial channel: two charges at energy `E` with angular momentum `L`.
/// The Coulomb potential is `z1 z2 e2 / r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoulombChannel {
    pub mass: f64,
    pub hbar: f64,
    pub energy: f64,
    pub z1: f64,
    pub z2: f64,
    pub e2: f64,
    pub l: u32,
}

impl CoulombChannel {
    pub fn validate(&self) -> Result<()> {
        if !(self.mass > 0.0 && self.hbar > 0.0 && self.energy > 0.0 && self.e2 >= 0.0) {
            return Err(Error::Domain(
                "need mass, hbar, energy > 0 and e2 >= 0".into(),
            ));
        }
        if self.z1 * self.z2 < 0.0 {
            return Err(Error::Domain("attractive channels are not supported".into()));
        }
        Ok(())
    }

    pub fn coupling(&self) -> f64 {
        self.z1 * self.z2 * self.e2
    }

    pub fn k(&self) -> f64 {
        (2.0 * self.mass * self.energy).sqrt() / self.hbar
    }

    /// Sommerfeld parameter `z1 z2 e2 m / (hbar^2 k)`.
    pub fn eta(&self) -> f64 {
        self.coupling() * self.mass / (self.hbar * self.hbar * self.k())
    }

    /// Coulomb plus centrifugal potential.
    pub fn v_eff(&self, r: f64) -> f64 {
        let lam = (self.l as f64) * (self.l as f64 + 1.0);
        self.coupling() / r + self.hbar * self.hbar * lam / (2.0 * self.mass * r * r)
    }

    /// Outer classical turning radius, `None` when there is no barrier.
    pub fn turning_radius(&self) -> Option<f64> {
        let rt = turning_point(self.eta(), self.l) / self.k();
        (rt > 0.0).then_some(rt)
    }

    fn solution(&self, r: f64) -> Result<CoulombSolution> {
        coulomb_fg(self.eta(), self.k() * r, self.l)
    }
}

fn check_radial_grid(grid: &Grid1D, inner: f64) -> Result<()> {
    if grid.x_min() <= inner {
        return Err(Error::Domain(format!(
            "radial grid must start beyond r = {inner}, starts at {}",
            grid.x_min()
        )));
    }
    Ok(())
}

/// Unwraps `atan2` phases (times hbar) so the outermost point keeps its
/// principal value.
fn unwrap_from_outside(phases: &[f64], hbar: f64) -> Vec<f64> {
    let n = phases.len();
    let mut out = vec![0.0; n];
    let two_pi = 2.0 * std::f64::consts::PI;
    out[n - 1] = phases[n - 1];
    for i in (0..n - 1).rev() {
        let mut d = phases[i] - phases[i + 1];
        d -= two_pi * (d / two_pi).round();
        out[i] = out[i + 1] + d;
    }
    out.iter().map(|p| p * hbar).collect()
}

/// Closed-form Madelung fields of the outgoing decay wave `H+ = G + iF`:
/// `rho = F^2 + G^2`, `S = hbar atan2(F, G)`, `v = hbar k / (m rho)`,
/// `Q = E - V_eff - hbar^2 k^2 / (2 m rho^2)`.
pub fn decay_fields(ch: &CoulombChannel, grid: Grid1D) -> Result<MadelungField> {
    ch.validate()?;
    check_radial_grid(&grid, 0.0)?;
    let sols: Vec<CoulombSolution> = grid.points().map(|r| ch.solution(r)).collect::<Result<_>>()?;
    let k = ch.k();
    let (m, hbar) = (ch.mass, ch.hbar);
    let rho: Vec<f64> = sols.iter().map(|s| s.f * s.f + s.g * s.g).collect();
    let phase: Vec<f64> = sols.iter().map(|s| s.f.atan2(s.g)).collect();
    let v: Vec<f64> = rho.iter().map(|r| hbar * k / (m * r)).collect();
    let q: Vec<f64> = grid
        .points()
        .zip(&rho)
        .map(|(r, d)| ch.energy - ch.v_eff(r) - (hbar * k).powi(2) / (2.0 * m * d * d))
        .collect();
    Ok(MadelungField {
        s: RealField::new(grid, unwrap_from_outside(&phase, hbar))?,
        rho: RealField::new(grid, rho)?,
        v: RealField::new(grid, v)?,
        q: RealField::new(grid, q)?,
        node_mask: vec![false; grid.len()],
        mass: m,
        hbar,
    })
}

/// `H+ = G + iF` sampled on a radial grid.
pub fn outgoing_wave(ch: &CoulombChannel, grid: Grid1D) -> Result<crate::gridfield::ComplexField> {
    ch.validate()?;
    check_radial_grid(&grid, 0.0)?;
    let vals: Vec<Complex64> = grid
        .points()
        .map(|r| ch.solution(r).map(|s| s.h_plus()))
        .collect::<Result<_>>()?;
    crate::gridfield::ComplexField::new(grid, vals)
}

/// Absorbing channel: S-matrix element and the radius inside which flux is
/// removed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FusionChannel {
    pub s_matrix: Complex64,
    pub radius: f64,
}

impl FusionChannel {
    /// `T_L = 1 - |S_L|^2`.
    pub fn transmission(&self) -> f64 {
        1.0 - self.s_matrix.norm_sqr()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FusionFields {
    pub field: MadelungField,
    pub transmission: f64,
    /// `rho v = -hbar k (1 - |S_L|^2) / mu`, negative for net inflow.
    pub current: f64,
}

/// Madelung fields of `u = H- - S_L H+` outside the absorption radius.
/// `v` comes from `Im(u* u')`, and `Q` uses `|u|^4` in the denominator.
pub fn fusion_fields(ch: &CoulombChannel, fc: &FusionChannel, grid: Grid1D) -> Result<FusionFields> {
    ch.validate()?;
    let sl = fc.s_matrix;
    if sl.norm() > 1.0 {
        return Err(Error::NonphysicalAbsorption(sl.norm()));
    }
    check_radial_grid(&grid, fc.radius.max(0.0))?;
    let k = ch.k();
    let (mu, hbar) = (ch.mass, ch.hbar);
    let mut rho = Vec::with_capacity(grid.len());
    let mut phase = Vec::with_capacity(grid.len());
    let mut v = Vec::with_capacity(grid.len());
    let mut q = Vec::with_capacity(grid.len());
    for r in grid.points() {
        let s = ch.solution(r)?;
        let u = s.h_minus() - sl * s.h_plus();
        let du = k * (s.h_minus_prime() - sl * s.h_plus_prime());
        let d = u.norm_sqr();
        let vel = hbar * (u.conj() * du).im / (mu * d);
        rho.push(d);
        phase.push(u.arg());
        v.push(vel);
        q.push(ch.energy - ch.v_eff(r) - 0.5 * mu * vel * vel);
    }
    let t = fc.transmission();
    Ok(FusionFields {
        field: MadelungField {
            s: RealField::new(grid, unwrap_from_outside(&phase, hbar))?,
            rho: RealField::new(grid, rho)?,
            v: RealField::new(grid, v)?,
            q: RealField::new(grid, q)?,
            node_mask: vec![false; grid.len()],
            mass: mu,
            hbar,
        },
        transmission: t,
        current: -hbar * k * t / mu,
    })
}

/// Classification of a radial grid into allowed and forbidden points.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionReport {
    /// `E > V_eff(r)` per grid point.
    pub allowed: Vec<bool>,
    /// Outer turning radius if one exists.
    pub turning_radius: Option<f64>,
    /// `2 m (E - V_eff)` per grid point.
    pub momentum_squared: Vec<f64>,
    /// Every forbidden point has `2 m (E - V_eff) < 0`.
    pub consistent: bool,
}

pub fn forbidden_region_check(ch: &CoulombChannel, grid: Grid1D) -> Result<RegionReport> {
    ch.validate()?;
    check_radial_grid(&grid, 0.0)?;
    let p2: Vec<f64> = grid
        .points()
        .map(|r| 2.0 * ch.mass * (ch.energy - ch.v_eff(r)))
        .collect();
    let allowed: Vec<bool> = grid.points().map(|r| ch.energy > ch.v_eff(r)).collect();
    let consistent = allowed.iter().zip(&p2).all(|(&a, &p)| a || p <= 0.0);
    Ok(RegionReport {
        allowed,
        turning_radius: ch.turning_radius(),
        momentum_squared: p2,
        consistent,
    })
}
