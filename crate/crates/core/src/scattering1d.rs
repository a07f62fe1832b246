//! Exact sub-barrier stationary states of the potential step and the
//! rectangular barrier, with unit incident amplitude from the left.

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gridfield::{ComplexField, Grid1D, RealField};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Above this `kappa*a` the direct transmission formula switches to logs.
pub const LOG_DOMAIN_THRESHOLD: f64 = 30.0;
/// Default limit for [`solve_barrier`]; beyond it `B` and `t` underflow.
pub const DEFAULT_OVERFLOW_LIMIT: f64 = 300.0;

/// Mass, energy and geometry of a 1D step or barrier, sub-barrier only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringProblem {
    pub mass: f64,
    pub hbar: f64,
    pub energy: f64,
    pub v0: f64,
    /// Barrier width; `None` for the semi-infinite step.
    pub width: Option<f64>,
}

impl ScatteringProblem {
    pub fn step(mass: f64, hbar: f64, energy: f64, v0: f64) -> Result<Self> {
        let p = Self {
            mass,
            hbar,
            energy,
            v0,
            width: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn barrier(mass: f64, hbar: f64, energy: f64, v0: f64, width: f64) -> Result<Self> {
        if !(width >= 0.0 && width.is_finite()) {
            return Err(Error::InvalidGeometry(format!(
                "barrier width must be finite and >= 0, got {width}"
            )));
        }
        let p = Self {
            mass,
            hbar,
            energy,
            v0,
            width: Some(width),
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if !(self.mass > 0.0 && self.hbar > 0.0) {
            return Err(Error::Domain(format!(
                "mass and hbar must be positive (m = {}, hbar = {})",
                self.mass, self.hbar
            )));
        }
        if !(self.energy > 0.0 && self.energy < self.v0) {
            return Err(Error::OutOfRegime(format!(
                "need 0 < E < V0, got E = {}, V0 = {}",
                self.energy, self.v0
            )));
        }
        Ok(())
    }

    /// Wavenumber outside the barrier.
    pub fn k(&self) -> f64 {
        (2.0 * self.mass * self.energy).sqrt() / self.hbar
    }

    /// Decay constant inside the barrier.
    pub fn kappa(&self) -> f64 {
        (2.0 * self.mass * (self.v0 - self.energy)).sqrt() / self.hbar
    }

    pub fn potential(&self, x: f64) -> f64 {
        match self.width {
            None if x >= 0.0 => self.v0,
            Some(a) if (0.0..=a).contains(&x) => self.v0,
            _ => 0.0,
        }
    }

    pub fn sample_potential(&self, grid: Grid1D) -> RealField {
        RealField::from_fn(grid, |x| self.potential(x))
    }

    /// Positions where the potential jumps.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self.width {
            None => vec![0.0],
            Some(a) => vec![0.0, a],
        }
    }
}

/// A stationary state that can be evaluated pointwise (t = 0).
pub trait Stationary {
    fn psi(&self, x: f64) -> Complex64;
    fn dpsi(&self, x: f64) -> Complex64;
    fn energy(&self) -> f64;
    fn hbar(&self) -> f64;
    fn mass(&self) -> f64;

    /// Probability current `(hbar/m) Im(psi* psi')`.
    fn current(&self, x: f64) -> f64 {
        self.hbar() / self.mass() * (self.psi(x).conj() * self.dpsi(x)).im
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSolution {
    pub problem: ScatteringProblem,
    pub k: f64,
    pub kappa: f64,
    /// Reflection amplitude.
    pub r: Complex64,
    /// Amplitude of the evanescent wave for x >= 0.
    pub a: Complex64,
}

impl StepSolution {
    /// Constant phase of the evanescent wave, `arg A`.
    pub fn theta(&self) -> f64 {
        self.a.arg()
    }

    /// `arctan(kappa/k)`, so that `r = exp(-2 i delta)`.
    pub fn delta(&self) -> f64 {
        (self.kappa / self.k).atan()
    }
}

impl Stationary for StepSolution {
    fn psi(&self, x: f64) -> Complex64 {
        if x < 0.0 {
            (I * self.k * x).exp() + self.r * (-I * self.k * x).exp()
        } else {
            self.a * (-self.kappa * x).exp()
        }
    }

    fn dpsi(&self, x: f64) -> Complex64 {
        if x < 0.0 {
            I * self.k * ((I * self.k * x).exp() - self.r * (-I * self.k * x).exp())
        } else {
            -self.kappa * self.a * (-self.kappa * x).exp()
        }
    }

    fn energy(&self) -> f64 {
        self.problem.energy
    }
    fn hbar(&self) -> f64 {
        self.problem.hbar
    }
    fn mass(&self) -> f64 {
        self.problem.mass
    }
}

pub fn solve_step(p: &ScatteringProblem) -> Result<StepSolution> {
    p.validate()?;
    if p.width.is_some() {
        return Err(Error::InvalidGeometry(
            "solve_step needs step geometry (no width)".into(),
        ));
    }
    let (k, kappa) = (p.k(), p.kappa());
    let den = Complex64::new(k, kappa);
    Ok(StepSolution {
        problem: *p,
        k,
        kappa,
        r: Complex64::new(k, -kappa) / den,
        a: Complex64::new(2.0 * k, 0.0) / den,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierSolution {
    pub problem: ScatteringProblem,
    pub k: f64,
    pub kappa: f64,
    pub width: f64,
    pub r: Complex64,
    pub t: Complex64,
    /// Coefficient of `exp(-kappa x)` inside the barrier.
    pub a: Complex64,
    /// Coefficient of `exp(+kappa x)` inside the barrier.
    pub b: Complex64,
    /// `B exp(2 kappa a)`, kept so the interior field never overflows.
    b_scaled: Complex64,
    ln_transmission: f64,
}

impl BarrierSolution {
    pub fn alpha(&self) -> f64 {
        self.a.arg()
    }

    pub fn beta(&self) -> f64 {
        self.b.arg()
    }

    pub fn transmission(&self) -> f64 {
        self.ln_transmission.exp()
    }

    pub fn ln_transmission(&self) -> f64 {
        self.ln_transmission
    }

    pub fn reflection(&self) -> f64 {
        self.r.norm_sqr()
    }

    /// `B/A`, evaluated without forming `B` directly.
    pub fn b_over_a(&self) -> Complex64 {
        self.b_scaled / self.a * (-2.0 * self.kappa * self.width).exp()
    }

    /// `|A|` and `|B|` from `|t|`, as an independent check on the solve.
    pub fn magnitudes_from_t(&self) -> (f64, f64) {
        let pref = 0.5 * self.t.norm() * (1.0 + (self.k / self.kappa).powi(2)).sqrt();
        let ka = self.kappa * self.width;
        (pref * ka.exp(), pref * (-ka).exp())
    }

    /// `A` and `B` reconstructed from `t` by matching at `x = a` only.
    pub fn interior_from_t(&self) -> (Complex64, Complex64) {
        let ratio = I * self.k / self.kappa;
        let phase = (I * self.k * self.width).exp();
        let ka = self.kappa * self.width;
        let a = 0.5 * (1.0 - ratio) * self.t * phase * ka.exp();
        let b = 0.5 * (1.0 + ratio) * self.t * phase * (-ka).exp();
        (a, b)
    }

    /// Interior field `A e^{-kappa x} + B e^{kappa x}` (valid on all of R as
    /// an analytic continuation).
    pub fn interior(&self, x: f64) -> Complex64 {
        self.a * (-self.kappa * x).exp()
            + self.b_scaled * (self.kappa * (x - 2.0 * self.width)).exp()
    }

    pub fn interior_derivative(&self, x: f64) -> Complex64 {
        self.kappa
            * (-self.a * (-self.kappa * x).exp()
                + self.b_scaled * (self.kappa * (x - 2.0 * self.width)).exp())
    }
}

impl Stationary for BarrierSolution {
    fn psi(&self, x: f64) -> Complex64 {
        if x < 0.0 {
            (I * self.k * x).exp() + self.r * (-I * self.k * x).exp()
        } else if x <= self.width {
            self.interior(x)
        } else {
            self.t * (I * self.k * x).exp()
        }
    }

    fn dpsi(&self, x: f64) -> Complex64 {
        if x < 0.0 {
            I * self.k * ((I * self.k * x).exp() - self.r * (-I * self.k * x).exp())
        } else if x <= self.width {
            self.interior_derivative(x)
        } else {
            I * self.k * self.t * (I * self.k * x).exp()
        }
    }

    fn energy(&self) -> f64 {
        self.problem.energy
    }
    fn hbar(&self) -> f64 {
        self.problem.hbar
    }
    fn mass(&self) -> f64 {
        self.problem.mass
    }
}

pub fn solve_barrier(p: &ScatteringProblem) -> Result<BarrierSolution> {
    solve_barrier_with_limit(p, DEFAULT_OVERFLOW_LIMIT)
}

/// Solves the four matching conditions at `x = 0` and `x = a`.
///
/// Unknowns are rescaled to `(A, B e^{2 kappa a}, r, t e^{i k a + kappa a})`,
/// all O(1) for any width, so the 4x4 system stays well conditioned.
pub fn solve_barrier_with_limit(p: &ScatteringProblem, limit: f64) -> Result<BarrierSolution> {
    p.validate()?;
    let a = match p.width {
        Some(a) if a > 0.0 => a,
        other => {
            return Err(Error::InvalidGeometry(format!(
                "solve_barrier needs 0 < a < inf, got {other:?}"
            )))
        }
    };
    let (k, kappa) = (p.k(), p.kappa());
    let ka = kappa * a;
    if ka > limit {
        return Err(Error::ThickBarrier { kappa_a: ka, limit });
    }
    let c = |x: f64| Complex64::new(x, 0.0);
    let e2 = c((-2.0 * ka).exp());
    let ik = I * k;
    let zero = c(0.0);
    #[rustfmt::skip]
    let m = Matrix4::new(
        c(1.0),    e2,             c(-1.0), zero,
        c(-kappa), c(kappa) * e2,  ik,      zero,
        c(1.0),    c(1.0),         zero,    c(-1.0),
        c(-kappa), c(kappa),       zero,    -ik,
    );
    let rhs = Vector4::new(c(1.0), ik, zero, zero);
    let sol = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::IllPosed("singular matching system".into()))?;
    let (a_coef, b_scaled, r, tau) = (sol[0], sol[1], sol[2], sol[3]);
    let t = tau * (-ka).exp() * (-I * k * a).exp();
    Ok(BarrierSolution {
        problem: *p,
        k,
        kappa,
        width: a,
        r,
        t,
        a: a_coef,
        b: b_scaled * (-2.0 * ka).exp(),
        b_scaled,
        ln_transmission: 2.0 * tau.norm().ln() - 2.0 * ka,
    })
}

/// Transmission probability and its natural log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transmission {
    pub value: f64,
    pub ln: f64,
}

/// `T = [1 + (k^2+kappa^2)^2/(4 k^2 kappa^2) sinh^2(kappa a)]^-1`, in log
/// form once `kappa a` exceeds [`LOG_DOMAIN_THRESHOLD`].
pub fn transmission(p: &ScatteringProblem) -> Result<Transmission> {
    p.validate()?;
    let a = p.width.ok_or_else(|| {
        Error::InvalidGeometry("transmission needs barrier geometry".into())
    })?;
    let (k, kappa) = (p.k(), p.kappa());
    let ka = kappa * a;
    let c = (k * k + kappa * kappa).powi(2) / (4.0 * k * k * kappa * kappa);
    if ka <= LOG_DOMAIN_THRESHOLD {
        let value = 1.0 / (1.0 + c * ka.sinh().powi(2));
        return Ok(Transmission {
            value,
            ln: value.ln(),
        });
    }
    let ln_sinh = ka - std::f64::consts::LN_2 + (-(-2.0 * ka).exp()).ln_1p();
    let x = c.ln() + 2.0 * ln_sinh;
    let ln = -(x + (-x).exp().ln_1p());
    Ok(Transmission {
        value: ln.exp(),
        ln,
    })
}

/// Thick-barrier asymptote `16 k^2 kappa^2/(k^2+kappa^2)^2 e^{-2 kappa a}`.
pub fn thick_barrier_transmission(p: &ScatteringProblem) -> Result<Transmission> {
    p.validate()?;
    let a = p.width.ok_or_else(|| {
        Error::InvalidGeometry("thick-barrier limit needs barrier geometry".into())
    })?;
    let (k, kappa) = (p.k(), p.kappa());
    let ln = (16.0 * k * k * kappa * kappa / (k * k + kappa * kappa).powi(2)).ln()
        - 2.0 * kappa * a;
    Ok(Transmission {
        value: ln.exp(),
        ln,
    })
}

/// Samples a stationary state on `grid` at t = 0.
pub fn evaluate_wavefunction(sol: &impl Stationary, grid: Grid1D) -> ComplexField {
    ComplexField::from_fn(grid, |x| sol.psi(x))
}

/// Samples the state at time `t`, including the `exp(-iEt/hbar)` factor.
pub fn evaluate_wavefunction_at(sol: &impl Stationary, grid: Grid1D, t: f64) -> ComplexField {
    let phase = (-I * sol.energy() * t / sol.hbar()).exp();
    ComplexField::from_fn(grid, |x| sol.psi(x) * phase)
}
