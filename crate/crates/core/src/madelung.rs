//! Density/phase split `psi = sqrt(rho) exp(iS/hbar)` of sampled fields.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gridfield::{derivative, ComplexField, Grid1D, RealField, Stencil};
use crate::scattering1d::BarrierSolution;

/// Derivative stencils used for `v` and `Q`.
pub const FIRST: Stencil = Stencil::new(1, 6);
pub const SECOND: Stencil = Stencil::new(2, 6);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MadelungOptions {
    /// Points with `rho < node_threshold * max rho` are nodes.
    pub node_threshold: f64,
    /// Neighbouring phases differing by more than this mark a node between them.
    pub max_phase_step: f64,
}

impl Default for MadelungOptions {
    fn default() -> Self {
        Self {
            node_threshold: 1e-12,
            max_phase_step: std::f64::consts::FRAC_PI_2,
        }
    }
}

/// Bohmian fields on a grid. `v` and `q` are meaningless where
/// `node_mask` is set.
#[derive(Debug, Clone, PartialEq)]
pub struct MadelungField {
    pub rho: RealField,
    /// Unwrapped phase times hbar.
    pub s: RealField,
    pub v: RealField,
    pub q: RealField,
    pub node_mask: Vec<bool>,
    pub mass: f64,
    pub hbar: f64,
}

impl MadelungField {
    pub fn grid(&self) -> &Grid1D {
        self.rho.grid()
    }

    /// `sqrt(rho) exp(iS/hbar)`.
    pub fn recompose(&self) -> ComplexField {
        let vals = self
            .rho
            .values()
            .iter()
            .zip(self.s.values())
            .map(|(&r, &s)| Complex64::from_polar(r.sqrt(), s / self.hbar))
            .collect();
        ComplexField::new(*self.grid(), vals).expect("same grid")
    }

    /// Probability current `rho v`.
    pub fn current(&self) -> RealField {
        let vals = self
            .rho
            .values()
            .iter()
            .zip(self.v.values())
            .map(|(r, v)| r * v)
            .collect();
        RealField::new(*self.grid(), vals).expect("same grid")
    }

    /// Iterates `(x, rho, S, v, Q, is_node)`.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, f64, f64, f64, bool)> + '_ {
        self.grid().points().enumerate().map(move |(i, x)| {
            (
                x,
                self.rho.values()[i],
                self.s.values()[i],
                self.v.values()[i],
                self.q.values()[i],
                self.node_mask[i],
            )
        })
    }

    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        use crate::format::sig17;
        writeln!(out, "x,rho,S,v,Q,node")?;
        for (x, r, s, v, q, n) in self.rows() {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                sig17(x),
                sig17(r),
                sig17(s),
                sig17(v),
                sig17(q),
                n as u8
            )?;
        }
        Ok(())
    }
}

pub fn decompose(psi: &ComplexField, mass: f64, hbar: f64) -> Result<MadelungField> {
    decompose_with(psi, mass, hbar, MadelungOptions::default())
}

pub fn decompose_with(
    psi: &ComplexField,
    mass: f64,
    hbar: f64,
    opts: MadelungOptions,
) -> Result<MadelungField> {
    let grid = *psi.grid();
    let vals = psi.values();
    let n = vals.len();
    let rho: Vec<f64> = vals.iter().map(|z| z.norm_sqr()).collect();
    let rho_max = rho.iter().copied().fold(0.0, f64::max);
    if !(rho_max > 0.0) || !rho_max.is_finite() {
        return Err(Error::DegenerateInput(
            "field is identically zero or non-finite".into(),
        ));
    }
    let mut node: Vec<bool> = rho
        .iter()
        .map(|&r| r < opts.node_threshold * rho_max)
        .collect();

    // Unwrap via arg(psi_{i+1} conj(psi_i)); relative phase, so an exactly
    // real ratio contributes exactly zero.
    let mut rel = vec![0.0; n];
    for i in 1..n {
        let step = (vals[i] * vals[i - 1].conj()).arg();
        if step.abs() > opts.max_phase_step {
            node[i] = true;
            node[i - 1] = true;
        }
        rel[i] = rel[i - 1] + step;
    }
    let s0 = vals[0].arg();
    let s: Vec<f64> = rel.iter().map(|r| hbar * (s0 + r)).collect();

    let rel_field = RealField::new(grid, rel.iter().map(|r| hbar * r).collect())?;
    let ds = derivative(&rel_field, FIRST)?;
    let v: Vec<f64> = ds.values().iter().map(|d| d / mass).collect();

    let amp = RealField::new(grid, rho.iter().map(|r| r.sqrt()).collect())?;
    let d2amp = derivative(&amp, SECOND)?;
    let kin = hbar * hbar / (2.0 * mass);
    let q: Vec<f64> = d2amp
        .values()
        .iter()
        .zip(amp.values())
        .map(|(d2, a)| -kin * d2 / a)
        .collect();

    let reach = SECOND.min_points();
    let raw = node.clone();
    for (i, _) in raw.iter().enumerate().filter(|(_, &b)| b) {
        let lo = i.saturating_sub(reach);
        let hi = (i + reach).min(n - 1);
        node[lo..=hi].iter_mut().for_each(|b| *b = true);
    }

    Ok(MadelungField {
        rho: RealField::new(grid, rho)?,
        s: RealField::new(grid, s)?,
        v: RealField::new(grid, v)?,
        q: RealField::new(grid, q)?,
        node_mask: node,
        mass,
        hbar,
    })
}

/// `d(rho v)/dx`; zero for stationary states. NaN on node points.
pub fn continuity_residual(f: &MadelungField) -> Result<RealField> {
    let d = derivative(&f.current(), FIRST)?;
    let vals = d
        .values()
        .iter()
        .zip(&f.node_mask)
        .map(|(&x, &m)| if m { f64::NAN } else { x })
        .collect();
    RealField::new(*f.grid(), vals)
}

/// Stationary quantum Hamilton–Jacobi residual
/// `(S')^2/2m + V + Q - E`, using `S' = m v`. NaN on node points.
pub fn quantum_hj_residual(f: &MadelungField, potential: &RealField, energy: f64) -> Result<RealField> {
    if potential.grid() != f.grid() {
        return Err(Error::GridMismatch("potential and Madelung field".into()));
    }
    let vals = (0..f.node_mask.len())
        .map(|i| {
            if f.node_mask[i] {
                return f64::NAN;
            }
            let v = f.v.values()[i];
            0.5 * f.mass * v * v + potential.values()[i] + f.q.values()[i] - energy
        })
        .collect();
    RealField::new(*f.grid(), vals)
}

/// Closed-form quantum potential inside the barrier, `0 <= x <= a`:
/// `-(hbar^2/2m) [4 kappa^2 P rho - 2 kappa^2 D^2] / (2 rho^2)` with
/// `P = |A|^2 e^{-2 kappa x} + |B|^2 e^{2 kappa x}`, `D` the difference and
/// `rho = P + 2|A||B| cos(alpha - beta)`.
pub fn quantum_potential_closed_form(sol: &BarrierSolution, x: f64) -> Result<f64> {
    if !(0.0..=sol.width).contains(&x) {
        return Err(Error::Domain(format!(
            "x = {x} outside the barrier [0, {}]",
            sol.width
        )));
    }
    let kappa = sol.kappa;
    let ta = sol.a.norm_sqr() * (-2.0 * kappa * x).exp();
    // |B|^2 e^{2 kappa x} from the rescaled B, which never overflows
    let bs = sol.b_over_a() * sol.a;
    let tb = bs.norm_sqr() * (2.0 * kappa * x).exp();
    let cross = 2.0 * sol.a.norm() * bs.norm() * (sol.alpha() - sol.beta()).cos();
    let p = ta + tb;
    let d = ta - tb;
    let rho = p + cross;
    let m = sol.problem.mass;
    let hbar = sol.problem.hbar;
    Ok(-(hbar * hbar / (2.0 * m)) * (4.0 * kappa * kappa * p * rho - 2.0 * kappa * kappa * d * d)
        / (2.0 * rho * rho))
}

/// Exact interior fields of a barrier solution on `grid` (inside `[0, a]`).
///
/// `rho v = (2 hbar kappa / m) Im(A* B)` is constant; `Q` is the closed form
/// of [`quantum_potential_closed_form`]. No finite differences are taken.
pub fn barrier_interior_fields(sol: &BarrierSolution, grid: Grid1D) -> Result<MadelungField> {
    if grid.x_min() < 0.0 || grid.x_max() > sol.width {
        return Err(Error::Domain(format!(
            "grid [{}, {}] leaves the barrier [0, {}]",
            grid.x_min(),
            grid.x_max(),
            sol.width
        )));
    }
    let m = sol.problem.mass;
    let hbar = sol.problem.hbar;
    let b = sol.b_over_a() * sol.a;
    let flux = 2.0 * hbar * sol.kappa / m * (sol.a.conj() * b).im;
    let psi = ComplexField::from_fn(grid, |x| sol.interior(x));
    let mut f = decompose(&psi, m, hbar)?;
    let v: Vec<f64> = f.rho.values().iter().map(|r| flux / r).collect();
    let q: Result<Vec<f64>> = grid
        .points()
        .map(|x| quantum_potential_closed_form(sol, x))
        .collect();
    f.v = RealField::new(grid, v)?;
    f.q = RealField::new(grid, q?)?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scattering1d::{evaluate_wavefunction, solve_barrier, solve_step, ScatteringProblem, Stationary};
    use proptest::prelude::*;

    #[test]
    fn plane_wave() {
        let g = Grid1D::new(0.0, 5.0, 501).unwrap();
        let k = 1.3;
        let psi = ComplexField::from_fn(g, |x| Complex64::new(0.0, k * x).exp());
        let f = decompose(&psi, 2.0, 1.0).unwrap();
        for i in 0..g.len() {
            assert!((f.rho.values()[i] - 1.0).abs() < 1e-14);
            assert!((f.v.values()[i] - k / 2.0).abs() < 1e-10);
            assert!(f.q.values()[i].abs() < 1e-10);
            assert!(!f.node_mask[i]);
        }
        let c = continuity_residual(&f).unwrap();
        assert!(c.max_abs() < 1e-9);
    }

    #[test]
    fn zero_field_is_rejected() {
        let g = Grid1D::new(0.0, 1.0, 20).unwrap();
        let psi = ComplexField::from_fn(g, |_| Complex64::new(0.0, 0.0));
        assert!(matches!(decompose(&psi, 1.0, 1.0), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn step_region_two() {
        let p = ScatteringProblem::step(1.0, 1.0, 0.3, 1.0).unwrap();
        let s = solve_step(&p).unwrap();
        let g = Grid1D::new(0.0, 6.0, 601).unwrap();
        let f = decompose(&evaluate_wavefunction(&s, g), 1.0, 1.0).unwrap();
        for i in 0..g.len() {
            assert!(f.v.values()[i].abs() < 1e-12);
            assert!((f.q.values()[i] + 0.7).abs() < 1e-8, "{}", f.q.values()[i]);
        }
    }

    #[test]
    fn step_region_one_standing_wave() {
        let p = ScatteringProblem::step(1.0, 1.0, 0.5, 1.0).unwrap();
        let s = solve_step(&p).unwrap();
        let g = Grid1D::new(-10.0, 0.0, 2001).unwrap();
        let f = decompose(&evaluate_wavefunction(&s, g), 1.0, 1.0).unwrap();
        let delta = s.delta();
        assert!(f.node_mask.iter().any(|&b| b));
        for (i, x) in g.points().enumerate() {
            let amp = 2.0 * (s.k * x + delta).cos().abs();
            assert!((f.rho.values()[i].sqrt() - amp).abs() < 1e-12);
            if !f.node_mask[i] {
                // standing wave: velocity vanishes and Q = E between nodes
                assert!(f.v.values()[i].abs() < 1e-9);
                assert!((f.q.values()[i] - 0.5).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn recompose_round_trip() {
        let p = ScatteringProblem::barrier(1.0, 1.0, 0.4, 1.0, 1.2).unwrap();
        let s = solve_barrier(&p).unwrap();
        let g = Grid1D::new(-3.0, 4.0, 701).unwrap();
        let psi = evaluate_wavefunction(&s, g);
        let f = decompose(&psi, 1.0, 1.0).unwrap();
        let back = f.recompose();
        for i in 0..g.len() {
            assert!((back.values()[i] - psi.values()[i]).norm() < 1e-10);
        }
    }

    #[test]
    fn closed_form_q_matches_finite_differences() {
        let p = ScatteringProblem::barrier(1.0, 1.0, 0.5, 1.0, 2.0).unwrap();
        let s = solve_barrier(&p).unwrap();
        let g = Grid1D::new(0.0, 2.0, 401).unwrap();
        let psi = ComplexField::from_fn(g, |x| s.interior(x));
        let f = decompose(&psi, 1.0, 1.0).unwrap();
        let i = 200;
        let q = quantum_potential_closed_form(&s, 1.0).unwrap();
        assert!((f.q.values()[i] / q - 1.0).abs() < 1e-6);
        assert!(quantum_potential_closed_form(&s, 2.5).is_err());
    }

    #[test]
    fn thick_barrier_midpoint_approaches_step_value() {
        // kappa a = 25
        let p = ScatteringProblem::barrier(1.0, 1.0, 0.5, 1.0, 25.0).unwrap();
        let s = solve_barrier(&p).unwrap();
        let q = quantum_potential_closed_form(&s, 12.5).unwrap();
        assert!((q + 0.5).abs() < (-25.0f64).exp());
    }

    #[test]
    fn corrupted_density_breaks_continuity() {
        let g = Grid1D::new(0.0, 6.0, 601).unwrap();
        let psi = ComplexField::from_fn(g, |x| {
            Complex64::from_polar((1.0 + 0.1 * x.sin()).sqrt(), x)
        });
        let f = decompose(&psi, 1.0, 1.0).unwrap();
        let c = continuity_residual(&f).unwrap();
        assert!(c.max_abs() > 0.05 && c.max_abs() < 0.2);
    }

    proptest! {
        #[test]
        fn barrier_interior_kinematics(frac in 0.05..0.95f64, a in 0.2..4.0f64, m in 0.5..2.0f64) {
            let p = ScatteringProblem::barrier(m, 1.0, frac, 1.0, a).unwrap();
            let s = solve_barrier(&p).unwrap();
            let kappa_scale = 1.0 / s.kappa;
            let n = ((a / kappa_scale) * 200.0).ceil() as usize + 201;
            let g = Grid1D::new(0.0, a, n).unwrap();
            let psi = ComplexField::from_fn(g, |x| s.interior(x));
            let f = decompose(&psi, m, 1.0).unwrap();
            let j = s.k / m * s.transmission();
            let exact = barrier_interior_fields(&s, g).unwrap();
            let v0 = RealField::from_fn(g, |_| 1.0);
            let hj = quantum_hj_residual(&f, &v0, p.energy).unwrap();
            let hj_exact = quantum_hj_residual(&exact, &v0, p.energy).unwrap();
            for i in 0..g.len() {
                prop_assert!(exact.v.values()[i] > 0.0);
                prop_assert!((exact.rho.values()[i] * exact.v.values()[i] / j - 1.0).abs() < 1e-8);
                prop_assert!(hj_exact.values()[i].abs() < 1e-8);
                // finite-difference path: phase steps are tiny when T is, so
                // rounding sets a looser floor
                prop_assert!((f.rho.values()[i] * f.v.values()[i] / j - 1.0).abs() < 1e-5);
                prop_assert!(hj.values()[i].abs() < 1e-6);
                prop_assert!((f.q.values()[i] - exact.q.values()[i]).abs() < 1e-6);
            }
            prop_assert!((s.current(0.5 * a) - j).abs() < 1e-10 * j.max(1e-300));
        }
    }
}
