//! Multi-branch classical-action representation `psi = sum_j sqrt(rho_j) e^{i phi_j/hbar}`
//! and diagnostics of where each branch stops being classical.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gridfield::{ComplexField, Grid1D, RealField};
use crate::scattering1d::{BarrierSolution, StepSolution};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative tolerance on imaginary parts for the classical-real flag.
pub const CLASSICAL_TOL: f64 = 1e-12;
/// Default tolerance of [`harmonicity_check`].
pub const HARMONIC_TOL: f64 = 1e-8;

/// Value and first two derivatives at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
}

/// A smooth complex function of `x` with exact derivatives.
#[derive(Clone)]
pub enum Profile {
    /// `c0 + c1 x`
    Linear { c0: Complex64, c1: Complex64 },
    /// `c exp(s x)`
    Exponential { c: Complex64, s: Complex64 },
    /// `c exp(-alpha x^2 + beta x)`
    Gaussian {
        c: Complex64,
        alpha: Complex64,
        beta: Complex64,
    },
    Custom(Arc<dyn Fn(f64) -> Jet + Send + Sync>),
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Linear { c0, c1 } => write!(f, "Linear({c0} + {c1} x)"),
            Self::Exponential { c, s } => write!(f, "Exponential({c} e^({s} x))"),
            Self::Gaussian { c, alpha, beta } => {
                write!(f, "Gaussian({c} e^(-{alpha} x^2 + {beta} x))")
            }
            Self::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl Profile {
    pub fn constant(c: Complex64) -> Self {
        Self::Linear {
            c0: c,
            c1: Complex64::new(0.0, 0.0),
        }
    }

    pub fn real_linear(c0: f64, c1: f64) -> Self {
        Self::Linear {
            c0: c0.into(),
            c1: c1.into(),
        }
    }

    pub fn jet(&self, x: f64) -> Jet {
        match self {
            Self::Linear { c0, c1 } => Jet {
                value: c0 + c1 * x,
                d1: *c1,
                d2: Complex64::new(0.0, 0.0),
            },
            Self::Exponential { c, s } => {
                let v = c * (s * x).exp();
                Jet {
                    value: v,
                    d1: s * v,
                    d2: s * s * v,
                }
            }
            Self::Gaussian { c, alpha, beta } => {
                let v = c * (-alpha * x * x + beta * x).exp();
                let g = -2.0 * alpha * x + beta;
                Jet {
                    value: v,
                    d1: g * v,
                    d2: (g * g - 2.0 * alpha) * v,
                }
            }
            Self::Custom(f) => f(x),
        }
    }

    pub fn value(&self, x: f64) -> Complex64 {
        self.jet(x).value
    }
}

/// One branch: spatial action `phi` and amplitude `sqrt(rho)`. The common
/// time dependence `-E t` is carried by `energy`.
#[derive(Debug, Clone)]
pub struct ActionBranch {
    pub label: String,
    pub phi: Profile,
    pub amplitude: Profile,
    pub energy: f64,
}

impl ActionBranch {
    pub fn new(label: impl Into<String>, phi: Profile, amplitude: Profile, energy: f64) -> Self {
        Self {
            label: label.into(),
            phi,
            amplitude,
            energy,
        }
    }

    /// `sqrt(rho) exp(i phi / hbar)` at `x`.
    pub fn psi(&self, x: f64, hbar: f64) -> Complex64 {
        self.amplitude.value(x) * (I * self.phi.value(x) / hbar).exp()
    }

    /// True iff `phi` and the amplitude are real and the amplitude is
    /// nonnegative on every grid point, to [`CLASSICAL_TOL`] relative.
    pub fn classical_real(&self, grid: Grid1D) -> bool {
        let phis: Vec<Complex64> = grid.points().map(|x| self.phi.value(x)).collect();
        let amps: Vec<Complex64> = grid.points().map(|x| self.amplitude.value(x)).collect();
        let scale = |v: &[Complex64]| v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let (sp, sa) = (scale(&phis), scale(&amps));
        phis.iter().all(|z| z.im.abs() <= CLASSICAL_TOL * sp)
            && amps
                .iter()
                .all(|z| z.im.abs() <= CLASSICAL_TOL * sa && z.re >= -CLASSICAL_TOL * sa)
    }
}

/// Pointwise `sum_j sqrt(rho_j) e^{i phi_j/hbar}`.
pub fn superpose(branches: &[ActionBranch], grid: Grid1D, hbar: f64) -> Result<ComplexField> {
    let first = branches
        .first()
        .ok_or_else(|| Error::InconsistentBranch("no branches given".into()))?;
    if let Some(b) = branches.iter().find(|b| b.energy != first.energy) {
        return Err(Error::InconsistentBranch(format!(
            "branch '{}' has E = {} but '{}' has E = {}",
            b.label, b.energy, first.label, first.energy
        )));
    }
    Ok(ComplexField::from_fn(grid, |x| {
        branches.iter().map(|b| b.psi(x, hbar)).sum()
    }))
}

/// Stationary classical HJ residual `(phi')^2/2m + V - E`.
pub fn hj_residual(b: &ActionBranch, potential: &RealField, mass: f64) -> ComplexField {
    let grid = *potential.grid();
    let vals = grid
        .points()
        .zip(potential.values())
        .map(|(x, &v)| {
            let d = b.phi.jet(x).d1;
            d * d / (2.0 * mass) + v - b.energy
        })
        .collect();
    ComplexField::new(grid, vals).expect("same grid")
}

/// `Q_j = -(hbar^2/2m) (sqrt rho_j)'' / sqrt rho_j`, complex for complex
/// amplitudes. Where both the amplitude and its curvature vanish the value
/// is 0; an isolated zero of the amplitude alone gives NaN.
pub fn branch_quantum_potential(
    b: &ActionBranch,
    grid: Grid1D,
    mass: f64,
    hbar: f64,
) -> Result<ComplexField> {
    let jets: Vec<Jet> = grid.points().map(|x| b.amplitude.jet(x)).collect();
    let zero = |j: &Jet| j.value.norm() == 0.0;
    if jets.windows(2).any(|w| zero(&w[0]) && zero(&w[1])) {
        return Err(Error::DegenerateBranch(format!(
            "amplitude of '{}' vanishes on a subinterval",
            b.label
        )));
    }
    let k = -hbar * hbar / (2.0 * mass);
    let vals = jets
        .iter()
        .map(|j| {
            if j.d2.norm() == 0.0 {
                Complex64::new(0.0, 0.0)
            } else if zero(j) {
                Complex64::new(f64::NAN, f64::NAN)
            } else {
                k * j.d2 / j.value
            }
        })
        .collect();
    ComplexField::new(grid, vals)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Harmonicity {
    pub harmonic: bool,
    /// `max |(sqrt rho)''|` over the grid.
    pub max_residual: f64,
}

/// Harmonic iff `max |(sqrt rho)''| <= tol * max |sqrt rho|`.
pub fn harmonicity_check(b: &ActionBranch, grid: Grid1D, tol: f64) -> Harmonicity {
    let (mut res, mut scale) = (0.0f64, 0.0f64);
    for x in grid.points() {
        let j = b.amplitude.jet(x);
        res = res.max(j.d2.norm());
        scale = scale.max(j.value.norm());
    }
    Harmonicity {
        harmonic: res <= tol * scale,
        max_residual: res,
    }
}

/// `phi_1' phi_2' / m`, a plain complex product: two imaginary actions
/// `i hbar kappa x` give `-hbar^2 kappa^2/m`.
pub fn nonlinearity_cross_term(
    b1: &ActionBranch,
    b2: &ActionBranch,
    grid: Grid1D,
    mass: f64,
) -> ComplexField {
    ComplexField::from_fn(grid, |x| b1.phi.jet(x).d1 * b2.phi.jet(x).d1 / mass)
}

/// Branch whose action is the sum of the two actions and whose amplitude is
/// the product, so `psi` is the product of the two branch fields.
pub fn combined_action(b1: &ActionBranch, b2: &ActionBranch) -> ActionBranch {
    let (p1, p2) = (b1.phi.clone(), b2.phi.clone());
    let (a1, a2) = (b1.amplitude.clone(), b2.amplitude.clone());
    ActionBranch {
        label: format!("{}+{}", b1.label, b2.label),
        phi: Profile::Custom(Arc::new(move |x| {
            let (j1, j2) = (p1.jet(x), p2.jet(x));
            Jet {
                value: j1.value + j2.value,
                d1: j1.d1 + j2.d1,
                d2: j1.d2 + j2.d2,
            }
        })),
        amplitude: Profile::Custom(Arc::new(move |x| {
            let (j1, j2) = (a1.jet(x), a2.jet(x));
            Jet {
                value: j1.value * j2.value,
                d1: j1.d1 * j2.value + j1.value * j2.d1,
                d2: j1.d2 * j2.value + 2.0 * j1.d1 * j2.d1 + j1.value * j2.d2,
            }
        })),
        energy: b1.energy,
    }
}

/// Per-branch summary row.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchReport {
    pub label: String,
    pub classical_real: bool,
    pub max_abs_q: f64,
    pub max_abs_hj: f64,
}

pub fn report(b: &ActionBranch, potential: &RealField, mass: f64, hbar: f64) -> Result<BranchReport> {
    let grid = *potential.grid();
    let q = branch_quantum_potential(b, grid, mass, hbar)?;
    let hj = hj_residual(b, potential, mass);
    let max = |f: &ComplexField| {
        f.values()
            .iter()
            .filter(|z| !z.re.is_nan())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    };
    Ok(BranchReport {
        label: b.label.clone(),
        classical_real: b.classical_real(grid),
        max_abs_q: max(&q),
        max_abs_hj: max(&hj),
    })
}

fn plane(label: &str, amp: Complex64, hbar_k: f64, phase: f64, energy: f64) -> ActionBranch {
    ActionBranch::new(
        label,
        Profile::real_linear(phase, hbar_k),
        Profile::constant(amp),
        energy,
    )
}

/// Branches of the step solution: region I (incident, reflected), region II
/// (decaying, with imaginary action `hbar theta + i hbar kappa x`).
pub fn step_branches(sol: &StepSolution) -> (Vec<ActionBranch>, Vec<ActionBranch>) {
    let hbar = sol.problem.hbar;
    let e = sol.problem.energy;
    let region1 = vec![
        plane("incident", 1.0.into(), hbar * sol.k, 0.0, e),
        plane("reflected", sol.r.norm().into(), -hbar * sol.k, hbar * sol.r.arg(), e),
    ];
    let region2 = vec![ActionBranch::new(
        "decaying",
        Profile::Linear {
            c0: (hbar * sol.theta()).into(),
            c1: I * hbar * sol.kappa,
        },
        Profile::constant(sol.a.norm().into()),
        e,
    )];
    (region1, region2)
}

/// Branches of the barrier solution by region: I (incident, reflected),
/// II (complex amplitudes `A`, `B` with actions `+-i hbar kappa x`),
/// III (transmitted).
pub fn barrier_branches(sol: &BarrierSolution) -> [Vec<ActionBranch>; 3] {
    let hbar = sol.problem.hbar;
    let e = sol.problem.energy;
    let b = sol.b_over_a() * sol.a;
    let imag = |label: &str, amp: Complex64, sign: f64| {
        ActionBranch::new(
            label,
            Profile::Linear {
                c0: 0.0.into(),
                c1: sign * I * hbar * sol.kappa,
            },
            Profile::constant(amp),
            e,
        )
    };
    [
        vec![
            plane("incident", 1.0.into(), hbar * sol.k, 0.0, e),
            plane("reflected", sol.r.norm().into(), -hbar * sol.k, hbar * sol.r.arg(), e),
        ],
        vec![imag("decaying", sol.a, 1.0), imag("growing", b, -1.0)],
        vec![plane("transmitted", sol.t.norm().into(), hbar * sol.k, hbar * sol.t.arg(), e)],
    ]
}

/// The real action `hbar kappa x` forced onto the forbidden region.
pub fn forced_real_branch(kappa: f64, hbar: f64, energy: f64) -> ActionBranch {
    plane("forced-real", 1.0.into(), hbar * kappa, 0.0, energy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scattering1d::{solve_barrier, solve_step, ScatteringProblem, Stationary};
    use proptest::prelude::*;

    fn grid(a: f64, b: f64) -> Grid1D {
        Grid1D::new(a, b, 201).unwrap()
    }

    fn max_diff(f: &ComplexField, g: impl Fn(f64) -> Complex64) -> f64 {
        f.iter().map(|(x, v)| (v - g(x)).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn step_reconstruction() {
        let s = solve_step(&ScatteringProblem::step(1.0, 1.0, 0.3, 1.0).unwrap()).unwrap();
        let (r1, r2) = step_branches(&s);
        let g1 = grid(-5.0, -1e-9);
        let g2 = grid(0.0, 5.0);
        assert!(max_diff(&superpose(&r1, g1, 1.0).unwrap(), |x| s.psi(x)) < 1e-12);
        assert!(max_diff(&superpose(&r2, g2, 1.0).unwrap(), |x| s.psi(x)) < 1e-12);
        assert!(r1.iter().all(|b| b.classical_real(g1)));
        assert!(r2.iter().all(|b| !b.classical_real(g2)));
    }

    #[test]
    fn barrier_reconstruction() {
        let p = ScatteringProblem::barrier(1.0, 1.0, 0.5, 1.0, 2.0).unwrap();
        let s = solve_barrier(&p).unwrap();
        let [r1, r2, r3] = barrier_branches(&s);
        let gs = [grid(-4.0, -1e-9), grid(0.0, 2.0), grid(2.0 + 1e-9, 6.0)];
        for (bs, g) in [&r1, &r2, &r3].into_iter().zip(gs) {
            let d = max_diff(&superpose(bs, g, 1.0).unwrap(), |x| s.psi(x));
            assert!(d < 1e-12, "{d}");
        }
        assert!(r2.iter().all(|b| !b.classical_real(gs[1])));
        assert!(r3[0].classical_real(gs[2]));
    }

    #[test]
    fn single_branch_is_identity() {
        let b = plane("p", 2.0.into(), 1.5, 0.0, 1.0);
        let g = grid(0.0, 1.0);
        let f = superpose(std::slice::from_ref(&b), g, 1.0).unwrap();
        assert!(max_diff(&f, |x| b.psi(x, 1.0)) == 0.0);
    }

    #[test]
    fn mismatched_energy() {
        let a = plane("a", 1.0.into(), 1.0, 0.0, 0.5);
        let b = plane("b", 1.0.into(), 1.0, 0.0, 0.6);
        assert!(matches!(
            superpose(&[a, b], grid(0.0, 1.0), 1.0),
            Err(Error::InconsistentBranch(_))
        ));
        assert!(superpose(&[], grid(0.0, 1.0), 1.0).is_err());
    }

    #[test]
    fn hj_residual_examples() {
        let g = grid(0.0, 2.0);
        let free = plane("free", 1.0.into(), 1.2, 0.0, 0.72);
        let v0 = RealField::from_fn(g, |_| 0.0);
        assert!(hj_residual(&free, &v0, 1.0).max_abs() < 1e-15);

        // E = 0.5, V0 = 1, m = 1: kappa = 1
        let vb = RealField::from_fn(g, |_| 1.0);
        let imag = ActionBranch::new(
            "imag",
            Profile::Linear { c0: 0.0.into(), c1: I },
            Profile::constant(1.0.into()),
            0.5,
        );
        assert!(hj_residual(&imag, &vb, 1.0).max_abs() < 1e-15);
        let forced = forced_real_branch(1.0, 1.0, 0.5);
        for z in hj_residual(&forced, &vb, 1.0).values() {
            assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn quantum_potential_examples() {
        let g = grid(-1.0, 1.0);
        let lin = ActionBranch::new("lin", Profile::real_linear(0.0, 0.0), Profile::real_linear(2.0, 3.0), 1.0);
        let q = branch_quantum_potential(&lin, g, 1.0, 1.0).unwrap();
        assert!(q.values().iter().all(|z| z.norm() == 0.0));

        let (alpha, beta) = (0.7, 0.3);
        let gauss = ActionBranch::new(
            "gauss",
            Profile::real_linear(0.0, 0.0),
            Profile::Gaussian { c: 1.0.into(), alpha: alpha.into(), beta: beta.into() },
            1.0,
        );
        let q = branch_quantum_potential(&gauss, g, 2.0, 1.0).unwrap();
        for (x, z) in q.iter() {
            let expect = -(1.0 / 4.0) * ((-2.0 * alpha * x + beta).powi(2) - 2.0 * alpha);
            assert!((z.re - expect).abs() < 1e-14 && z.im.abs() < 1e-14);
        }

        let dead = ActionBranch::new("dead", Profile::real_linear(0.0, 0.0), Profile::constant(0.0.into()), 1.0);
        assert!(matches!(
            branch_quantum_potential(&dead, g, 1.0, 1.0),
            Err(Error::DegenerateBranch(_))
        ));
    }

    #[test]
    fn harmonicity_examples() {
        let g = grid(0.0, 3.0);
        let mk = |amp| ActionBranch::new("b", Profile::real_linear(0.0, 0.0), amp, 1.0);
        assert!(harmonicity_check(&mk(Profile::real_linear(2.0, 3.0)), g, HARMONIC_TOL).harmonic);
        assert!(harmonicity_check(&mk(Profile::constant(1.0.into())), g, HARMONIC_TOL).harmonic);
        let kappa = 1.5;
        let h = harmonicity_check(
            &mk(Profile::Exponential { c: 1.0.into(), s: (-kappa).into() }),
            g,
            HARMONIC_TOL,
        );
        assert!(!h.harmonic);
        // max of kappa^2 e^{-kappa x} sits at x = 0
        assert!((h.max_residual - kappa * kappa).abs() < 1e-14);
    }

    #[test]
    fn cross_term_examples() {
        let g = grid(0.0, 1.0);
        let k = 1.3;
        let a = plane("a", 1.0.into(), k, 0.0, 1.0);
        let b = plane("b", 1.0.into(), -k, 0.0, 1.0);
        for z in nonlinearity_cross_term(&a, &b, g, 2.0).values() {
            assert!((z.re + k * k / 2.0).abs() < 1e-15);
        }
        let c = plane("c", 1.0.into(), 0.0, 0.4, 1.0);
        assert!(nonlinearity_cross_term(&a, &c, g, 2.0).max_abs() == 0.0);
        let kappa = 0.8;
        let im = ActionBranch::new(
            "im",
            Profile::Linear { c0: 0.0.into(), c1: I * kappa },
            Profile::constant(1.0.into()),
            1.0,
        );
        for z in nonlinearity_cross_term(&im, &im, g, 1.0).values() {
            assert!((z - Complex64::new(-kappa * kappa, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn report_row() {
        let g = grid(0.0, 2.0);
        let vb = RealField::from_fn(g, |_| 1.0);
        let r = report(&forced_real_branch(1.0, 1.0, 0.5), &vb, 1.0, 1.0).unwrap();
        assert!(r.classical_real);
        assert_eq!(r.max_abs_q, 0.0);
        assert!((r.max_abs_hj - 1.0).abs() < 1e-15);
    }

    fn arb_linear() -> impl Strategy<Value = Profile> {
        (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b, c, d)| {
            Profile::Linear {
                c0: Complex64::new(a, b),
                c1: Complex64::new(c, d),
            }
        })
    }

    proptest! {
        #[test]
        fn sum_of_actions_fails_by_cross_term(p1 in arb_linear(), p2 in arb_linear(), m in 0.3..3.0f64, e in 0.1..2.0f64) {
            let g = grid(-2.0, 2.0);
            let v = RealField::from_fn(g, |x| 0.3 * x * x);
            let b1 = ActionBranch::new("1", p1, Profile::constant(1.0.into()), e);
            let b2 = ActionBranch::new("2", p2, Profile::constant(1.0.into()), e);
            let sum = combined_action(&b1, &b2);
            let (h, h1, h2) = (hj_residual(&sum, &v, m), hj_residual(&b1, &v, m), hj_residual(&b2, &v, m));
            let cross = nonlinearity_cross_term(&b1, &b2, g, m);
            for i in 0..g.len() {
                let lhs = h.values()[i] - h1.values()[i] - h2.values()[i] + (v.values()[i] - e);
                prop_assert!((lhs - cross.values()[i]).norm() < 1e-10);
            }
        }

        #[test]
        fn harmonic_iff_zero_q(c0 in -3.0..3.0f64, c1 in -3.0..3.0f64, s in prop::sample::select(vec![0.0, 0.5, -1.0, 2.0])) {
            let g = grid(0.0, 1.0);
            let amp = if s == 0.0 { Profile::real_linear(c0 + 5.0, c1) } else { Profile::Exponential { c: (c0 + 5.0).into(), s: s.into() } };
            let b = ActionBranch::new("b", Profile::real_linear(0.0, 1.0), amp, 1.0);
            let h = harmonicity_check(&b, g, HARMONIC_TOL);
            let q = branch_quantum_potential(&b, g, 1.0, 1.0).unwrap();
            let qmax = q.values().iter().map(|z| z.norm()).fold(0.0, f64::max);
            prop_assert_eq!(h.harmonic, qmax < HARMONIC_TOL);
        }
    }
}
