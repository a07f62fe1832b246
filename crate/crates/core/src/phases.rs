//! Global-phase effects: discrete Berry holonomy of a spin-1/2 on the Bloch
//! sphere, spherical solid angles, flux quantization, Josephson tunneling
//! and dc SQUID interference.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::oracle;

pub type Spinor = [Complex64; 2];
type V3 = [f64; 3];

/// Exact SI value of `h / 2e` in webers.
pub const FLUX_QUANTUM_SI: f64 = 6.626_070_15e-34 / (2.0 * 1.602_176_634e-19);

/// Closed loop of Bloch-sphere directions `(theta, phi)`; last sample
/// repeats the first.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopPath {
    samples: Vec<(f64, f64)>,
}

impl LoopPath {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 4 || samples.first() != samples.last() {
            return Err(Error::OpenLoop);
        }
        if samples.iter().any(|&(t, p)| !(0.0..=PI).contains(&t) || !p.is_finite()) {
            return Err(Error::Domain("need 0 <= theta <= pi and finite phi".into()));
        }
        Ok(Self { samples })
    }

    /// `n` equally spaced points at polar angle `theta`, `phi` increasing,
    /// plus the closing sample.
    pub fn latitude(theta: f64, n: usize) -> Result<Self> {
        let n = n.max(3);
        let mut s: Vec<(f64, f64)> = (0..n).map(|i| (theta, 2.0 * PI * i as f64 / n as f64)).collect();
        s.push(s[0]);
        Self::new(s)
    }

    /// Loop through the given unit vectors, closed automatically.
    pub fn from_directions(dirs: &[V3]) -> Result<Self> {
        let mut s: Vec<(f64, f64)> = dirs
            .iter()
            .map(|v| {
                let r = norm(v);
                ((v[2] / r).clamp(-1.0, 1.0).acos(), v[1].atan2(v[0]))
            })
            .collect();
        if let Some(&f) = s.first() {
            s.push(f);
        }
        Self::new(s)
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn n_points(&self) -> usize {
        self.samples.len()
    }

    fn directions(&self) -> Vec<V3> {
        self.samples[..self.samples.len() - 1]
            .iter()
            .map(|&(t, p)| [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()])
            .collect()
    }
}

/// Which eigenstate of `n.sigma` is transported.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    Plus,
    Minus,
}

/// `(cos theta/2, e^{i phi} sin theta/2)`, eigenvalue +1 of `n.sigma`.
pub fn spin_half_state(theta: f64, phi: f64) -> Spinor {
    let (s, c) = (theta / 2.0).sin_cos();
    [Complex64::new(c, 0.0), Complex64::from_polar(s, phi)]
}

/// `(sin theta/2, -e^{i phi} cos theta/2)`, eigenvalue -1 of `n.sigma`.
pub fn spin_half_state_minus(theta: f64, phi: f64) -> Spinor {
    let (s, c) = (theta / 2.0).sin_cos();
    [Complex64::new(s, 0.0), -Complex64::from_polar(c, phi)]
}

fn inner(a: &Spinor, b: &Spinor) -> Complex64 {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}

fn wrap(g: f64) -> f64 {
    let w = g - 2.0 * PI * (g / (2.0 * PI)).round();
    if w <= -PI {
        w + 2.0 * PI
    } else {
        w
    }
}

/// `-arg prod <n_i|n_{i+1}>` over a cyclic list of states (no repeated
/// closing sample), in `(-pi, pi]`. Invariant under per-sample phases.
pub fn berry_phase_states(states: &[Spinor]) -> Result<f64> {
    if states.len() < 3 {
        return Err(Error::OpenLoop);
    }
    let mut prod = Complex64::new(1.0, 0.0);
    for i in 0..states.len() {
        let z = inner(&states[i], &states[(i + 1) % states.len()]);
        prod *= z / z.norm().max(f64::MIN_POSITIVE);
    }
    Ok(wrap(-prod.arg()))
}

/// Discrete holonomy of the chosen band around the loop.
pub fn berry_phase_discrete(path: &LoopPath, band: Band) -> Result<f64> {
    let s = path.samples();
    let states: Vec<Spinor> = s[..s.len() - 1]
        .iter()
        .map(|&(t, p)| match band {
            Band::Plus => spin_half_state(t, p),
            Band::Minus => spin_half_state_minus(t, p),
        })
        .collect();
    berry_phase_states(&states)
}

fn dot(a: &V3, b: &V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &V3, b: &V3) -> V3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn norm(a: &V3) -> f64 {
    dot(a, a).sqrt()
}

/// Signed area of the geodesic polygon, as a fan of triangles from the
/// loop's mean direction (or its area vector when the mean vanishes).
/// Positive for counterclockwise circulation seen from outside along that
/// direction.
pub fn solid_angle(path: &LoopPath) -> Result<f64> {
    let v = path.directions();
    let n = v.len();
    for i in 0..n {
        let j = (i + 1) % n;
        if dot(&v[i], &v[j]) < -1.0 + 1e-12 {
            return Err(Error::AntipodalSamples(i, j));
        }
    }
    let mut c = [0.0; 3];
    for p in &v {
        for k in 0..3 {
            c[k] += p[k];
        }
    }
    if norm(&c) < 1e-9 * n as f64 {
        c = [0.0; 3];
        for i in 0..n {
            let x = cross(&v[i], &v[(i + 1) % n]);
            for k in 0..3 {
                c[k] += x[k];
            }
        }
    }
    let cn = norm(&c);
    if cn == 0.0 {
        return Ok(0.0);
    }
    let c = c.map(|x| x / cn);
    let mut omega = 0.0;
    for i in 0..n {
        let (a, b) = (&v[i], &v[(i + 1) % n]);
        let num = dot(&c, &cross(a, b));
        let den = 1.0 + dot(&c, a) + dot(a, b) + dot(b, &c);
        omega += 2.0 * num.atan2(den);
    }
    Ok(omega)
}

/// `Phi = n Phi0`.
pub fn winding_to_flux(n: i64, phi0: f64) -> f64 {
    n as f64 * phi0
}

/// `h / 2e = pi hbar / e` in the units of `hbar` and `e`.
pub fn flux_quantum(hbar: f64, e: f64) -> f64 {
    PI * hbar / e
}

/// Bulk superconducting ring with winding number `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RingState {
    pub n_winding: i64,
}

impl RingState {
    pub fn flux(&self, phi0: f64) -> f64 {
        winding_to_flux(self.n_winding, phi0)
    }
}

/// Constraint imposed on a phase that winds around a ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseConstraint {
    /// Real action `phi` single-valued.
    SingleValuedAction,
    /// Real action with no constraint on its winding.
    MultivaluedAction,
    /// Only the factor `e^{i phi/hbar}` single-valued.
    SingleValuedPhaseFactor,
}

/// Fluxes allowed by a [`PhaseConstraint`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FluxSpectrum {
    ZeroOnly,
    Continuum,
    Quantized { phi0: f64 },
}

impl FluxSpectrum {
    pub fn allows(&self, phi: f64, tol: f64) -> bool {
        match *self {
            Self::ZeroOnly => phi.abs() <= tol,
            Self::Continuum => phi.is_finite(),
            Self::Quantized { phi0 } => (phi / phi0 - (phi / phi0).round()).abs() * phi0.abs() <= tol,
        }
    }

    pub fn is_quantized(&self) -> bool {
        matches!(self, Self::Quantized { .. })
    }
}

/// Flux spectrum implied by each constraint on the circulation
/// `oint grad phi . dl = q Phi`.
pub fn classical_flux_obstruction(c: PhaseConstraint, phi0: f64) -> FluxSpectrum {
    match c {
        PhaseConstraint::SingleValuedAction => FluxSpectrum::ZeroOnly,
        PhaseConstraint::MultivaluedAction => FluxSpectrum::Continuum,
        PhaseConstraint::SingleValuedPhaseFactor => FluxSpectrum::Quantized { phi0 },
    }
}

/// Insulating barrier between two superconductors, interior field
/// `a e^{-kappa x} e^{i theta_L} + b e^{-kappa (d - x)} e^{i theta_R}` with
/// `delta = theta_R - theta_L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JunctionSpec {
    pub mstar: f64,
    pub hbar: f64,
    pub u0: f64,
    pub energy: f64,
    pub d: f64,
    pub a_amp: f64,
    pub b_amp: f64,
    pub delta: f64,
}

impl JunctionSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.mstar > 0.0 && self.hbar > 0.0 && self.d >= 0.0) {
            return Err(Error::Domain("need M* > 0, hbar > 0, d >= 0".into()));
        }
        if !(self.u0 > self.energy) {
            return Err(Error::OutOfRegime(format!(
                "junction needs U0 > E, got U0 = {}, E = {}",
                self.u0, self.energy
            )));
        }
        Ok(())
    }

    pub fn kappa(&self) -> f64 {
        (2.0 * self.mstar * (self.u0 - self.energy)).sqrt() / self.hbar
    }

    /// `j_c = (2 hbar kappa / M*) a b e^{-kappa d}`.
    pub fn critical_current(&self) -> f64 {
        2.0 * self.hbar * self.kappa() / self.mstar * self.a_amp * self.b_amp * (-self.kappa() * self.d).exp()
    }

    /// Interior field and its derivative at `x`, with `theta_L = 0`.
    pub fn field(&self, x: f64) -> (Complex64, Complex64) {
        let k = self.kappa();
        let l = self.a_amp * (-k * x).exp();
        let r = Complex64::from_polar(self.b_amp * (-k * (self.d - x)).exp(), self.delta);
        (l + r, -k * l + k * r)
    }
}

/// Josephson current by two routes: closed form `j_c sin delta` and
/// `(hbar/M*) Im(psi* psi')` of the interior field at `x = d/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JosephsonCurrent {
    pub closed_form: f64,
    pub from_field: f64,
    pub critical: f64,
}

pub fn josephson_current(j: &JunctionSpec) -> Result<JosephsonCurrent> {
    j.validate()?;
    let critical = j.critical_current();
    let (psi, dpsi) = j.field(0.5 * j.d);
    Ok(JosephsonCurrent {
        closed_form: critical * j.delta.sin(),
        from_field: j.hbar / j.mstar * (psi.conj() * dpsi).im,
        critical,
    })
}

/// `2 Ic |cos(pi Phi / Phi0)|` for two identical junctions and negligible
/// loop inductance.
pub fn squid_critical_current(ic: f64, phi: f64, phi0: f64) -> f64 {
    2.0 * ic * (PI * phi / phi0).cos().abs()
}

/// Max over `delta1` of `Ic sin delta1 + Ic sin(delta1 + 2 pi Phi / Phi0)`.
pub fn squid_critical_current_brute(ic: f64, phi: f64, phi0: f64, samples: usize) -> f64 {
    let shift = 2.0 * PI * phi / phi0;
    oracle::maximize(|d1| ic * (d1.sin() + (d1 + shift).sin()), 0.0, 2.0 * PI, samples).1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gridfield::{ComplexField, Grid1D};
    use crate::madelung;

    fn close_mod_2pi(a: f64, b: f64, tol: f64) -> bool {
        wrap(a - b).abs() < tol
    }

    #[test]
    fn state_examples() {
        let s = spin_half_state(0.0, 1.0);
        assert_eq!((s[0].re, s[1].norm()), (1.0, 0.0));
        let s = spin_half_state(PI, 0.0);
        assert!(s[0].norm() < 1e-16 && (s[1].re - 1.0).abs() < 1e-16);
        let s = spin_half_state(PI / 2.0, 0.0);
        assert!((s[0].re - 0.5f64.sqrt()).abs() < 1e-15 && (s[1].re - 0.5f64.sqrt()).abs() < 1e-15);
        for (t, p) in [(0.3, 1.2), (2.9, -0.7)] {
            for s in [spin_half_state(t, p), spin_half_state_minus(t, p)] {
                assert!((inner(&s, &s).re - 1.0).abs() < 1e-14);
            }
            assert!(inner(&spin_half_state(t, p), &spin_half_state_minus(t, p)).norm() < 1e-15);
        }
    }

    #[test]
    fn berry_latitude_loops() {
        let eq = LoopPath::latitude(PI / 2.0, 2000).unwrap();
        assert!(close_mod_2pi(berry_phase_discrete(&eq, Band::Plus).unwrap(), -PI, 1e-3));
        let l = LoopPath::latitude(PI / 3.0, 2000).unwrap();
        assert!(close_mod_2pi(berry_phase_discrete(&l, Band::Plus).unwrap(), -PI / 2.0, 1e-3));
        let g = berry_phase_discrete(&eq, Band::Plus).unwrap();
        assert!(g > -PI && g <= PI);
    }

    #[test]
    fn degenerate_loop_has_no_phase() {
        let p = LoopPath::new(vec![(0.7, 0.3); 6]).unwrap();
        assert_eq!(berry_phase_discrete(&p, Band::Plus).unwrap(), 0.0);
        assert_eq!(solid_angle(&p).unwrap(), 0.0);
    }

    #[test]
    fn open_loop_rejected() {
        assert!(matches!(
            LoopPath::new(vec![(0.1, 0.0), (0.2, 0.0), (0.3, 0.0), (0.4, 0.0)]),
            Err(Error::OpenLoop)
        ));
        assert!(matches!(LoopPath::new(vec![(0.1, 0.0); 3]), Err(Error::OpenLoop)));
    }

    #[test]
    fn second_order_convergence() {
        let theta: f64 = 1.1;
        let exact = -PI * (1.0 - theta.cos());
        let err = |n| wrap(berry_phase_discrete(&LoopPath::latitude(theta, n).unwrap(), Band::Plus).unwrap() - exact).abs();
        let ratio = err(200) / err(400);
        assert!((ratio - 4.0).abs() < 0.05, "{ratio}");
    }

    #[test]
    fn bands_are_opposite() {
        for theta in [0.4, 1.3, 2.6] {
            let p = LoopPath::latitude(theta, 77).unwrap();
            let s = berry_phase_discrete(&p, Band::Plus).unwrap() + berry_phase_discrete(&p, Band::Minus).unwrap();
            assert!(close_mod_2pi(s, 0.0, 1e-10));
        }
    }

    #[test]
    fn gauge_invariance() {
        let p = LoopPath::latitude(0.9, 50).unwrap();
        let s = p.samples();
        let states: Vec<Spinor> = s[..s.len() - 1].iter().map(|&(t, f)| spin_half_state(t, f)).collect();
        let regauged: Vec<Spinor> = states
            .iter()
            .enumerate()
            .map(|(i, st)| {
                let g = Complex64::from_polar(1.0, 0.37 * i as f64 * i as f64 - 1.1);
                [st[0] * g, st[1] * g]
            })
            .collect();
        let a = berry_phase_states(&states).unwrap();
        let b = berry_phase_states(&regauged).unwrap();
        assert!(close_mod_2pi(a, b, 1e-12));
    }

    #[test]
    fn solid_angle_examples() {
        let eq = LoopPath::latitude(PI / 2.0, 64).unwrap();
        assert!((solid_angle(&eq).unwrap() - 2.0 * PI).abs() < 1e-12);
        let oct = LoopPath::from_directions(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]).unwrap();
        assert!((solid_angle(&oct).unwrap() - PI / 2.0).abs() < 1e-12);
        let rev = LoopPath::from_directions(&[[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]]).unwrap();
        assert!((solid_angle(&rev).unwrap() + PI / 2.0).abs() < 1e-12);
        let tiny = LoopPath::latitude(1e-4, 16).unwrap();
        assert!(solid_angle(&tiny).unwrap().abs() < 1e-7);
        let anti = LoopPath::new(vec![(0.0, 0.0), (PI, 0.0), (PI / 2.0, 0.0), (0.0, 0.0)]).unwrap();
        assert!(matches!(solid_angle(&anti), Err(Error::AntipodalSamples(0, 1))));
    }

    #[test]
    fn berry_matches_half_solid_angle() {
        for theta in [0.5, 1.0, 2.0, 2.8] {
            let p = LoopPath::latitude(theta, 4000).unwrap();
            let g = berry_phase_discrete(&p, Band::Plus).unwrap();
            assert!(close_mod_2pi(g, -solid_angle(&p).unwrap() / 2.0, 1e-5));
        }
    }

    #[test]
    fn flux_examples() {
        assert_eq!(winding_to_flux(0, FLUX_QUANTUM_SI), 0.0);
        assert_eq!(winding_to_flux(1, FLUX_QUANTUM_SI), FLUX_QUANTUM_SI);
        assert_eq!(winding_to_flux(-3, 2.0), -6.0);
        assert!((FLUX_QUANTUM_SI - 2.067_833_848_461_929e-15).abs() < 1e-27);
        assert!((flux_quantum(1.0, 1.0) - PI).abs() < 1e-15);
        assert_eq!(RingState { n_winding: 4 }.flux(0.5), 2.0);
    }

    #[test]
    fn flux_trichotomy() {
        let z = classical_flux_obstruction(PhaseConstraint::SingleValuedAction, 1.0);
        assert!(z.allows(0.0, 0.0) && !z.allows(1.0, 1e-9));
        let c = classical_flux_obstruction(PhaseConstraint::MultivaluedAction, 1.0);
        assert!(c.allows(0.37, 0.0));
        let q = classical_flux_obstruction(PhaseConstraint::SingleValuedPhaseFactor, 1.0);
        assert!(q.is_quantized() && q.allows(3.0, 1e-12) && !q.allows(0.5, 1e-9));
    }

    fn junction(delta: f64, d: f64) -> JunctionSpec {
        JunctionSpec { mstar: 2.0, hbar: 1.0, u0: 1.0, energy: 0.6, d, a_amp: 0.8, b_amp: 1.3, delta }
    }

    #[test]
    fn josephson_examples() {
        assert_eq!(josephson_current(&junction(0.0, 1.0)).unwrap().closed_form, 0.0);
        let j = josephson_current(&junction(PI / 2.0, 1.0)).unwrap();
        assert!((j.closed_form - j.critical).abs() < 1e-15);
        for delta in [-2.0, 0.3, 1.0, 3.0] {
            let j = josephson_current(&junction(delta, 1.7)).unwrap();
            assert!((j.closed_form - j.from_field).abs() < 1e-10 * j.critical);
        }
        let (j1, j2) = (junction(1.0, 1.0), junction(1.0, 2.0));
        let ratio = j2.critical_current() / j1.critical_current();
        assert!((ratio - (-j1.kappa()).exp()).abs() < 1e-14);
        let mut bad = junction(1.0, 1.0);
        bad.energy = 1.0;
        assert!(matches!(josephson_current(&bad), Err(Error::OutOfRegime(_))));
    }

    #[test]
    fn current_is_position_independent() {
        let j = junction(0.8, 2.0);
        let c = |x: f64| {
            let (p, dp) = j.field(x);
            (p.conj() * dp).im
        };
        assert!((c(0.1) - c(1.9)).abs() < 1e-14);
    }

    #[test]
    fn squid_examples() {
        assert_eq!(squid_critical_current(1.5, 0.0, 1.0), 3.0);
        assert!(squid_critical_current(1.5, 0.5, 1.0) < 1e-15);
        assert!((squid_critical_current(1.0, 0.25, 1.0) - 2f64.sqrt()).abs() < 1e-15);
        for phi in [0.0, 0.1, 0.25, 0.5, 0.77, 1.3] {
            let a = squid_critical_current(1.0, phi, 1.0);
            let b = squid_critical_current_brute(1.0, phi, 1.0, 2001);
            assert!((a - b).abs() < 1e-12, "{phi} {a} {b}");
        }
    }

    #[test]
    fn squid_periodic_and_even() {
        for phi in [0.13, 0.4, 0.91] {
            let a = squid_critical_current(1.0, phi, 1.0);
            assert!((a - squid_critical_current(1.0, phi + 1.0, 1.0)).abs() < 1e-12);
            assert!((a - squid_critical_current(1.0, -phi, 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn bulk_quantum_potential_vanishes() {
        let g = Grid1D::new(0.0, 10.0, 401).unwrap();
        let psi = ComplexField::from_fn(g, |x| Complex64::from_polar(2.0, 1.3 * x));
        let f = madelung::decompose(&psi, 2.0, 1.0).unwrap();
        assert!(f.q.max_abs() < 1e-10);
    }
}
