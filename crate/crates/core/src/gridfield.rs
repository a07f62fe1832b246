//! Uniform 1D grids, sampled fields and finite-difference operators.

use std::io::{self, Write};
use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::format::sig17;

/// Uniform grid `x_i = x_min + i*h`, `i = 0..n_points`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if n_points < 3 {
            return Err(Error::InvalidGrid(format!(
                "need at least 3 points, got {n_points}"
            )));
        }
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(Error::InvalidGrid(format!(
                "need finite x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            n_points,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    /// Position of sample `i`. The last sample is pinned to `x_max` exactly.
    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.x_max
        } else {
            self.x_min + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.x(i))
    }

    /// Same grid refined by 2x (every old point is kept).
    pub fn refined(&self) -> Self {
        Self {
            n_points: 2 * self.n_points - 1,
            ..*self
        }
    }
}

/// Value type that can be sampled on a grid and differentiated.
pub trait Sample: Copy + Default + Add<Output = Self> + Mul<f64, Output = Self> {}
impl Sample for f64 {}
impl Sample for Complex64 {}

/// Values sampled on a [`Grid1D`], one per grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct Field<T> {
    grid: Grid1D,
    values: Vec<T>,
}

pub type ComplexField = Field<Complex64>;
pub type RealField = Field<f64>;

impl<T: Sample> Field<T> {
    pub fn new(grid: Grid1D, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a {}-point grid",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> T) -> Self {
        let values = grid.points().map(f).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn map<U: Sample>(&self, f: impl Fn(T) -> U) -> Field<U> {
        Field {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, T)> + '_ {
        self.grid.points().zip(self.values.iter().copied())
    }

    fn check_same_grid<U>(&self, other: &Field<U>) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!(
                "{:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        Ok(())
    }

    /// `a*self + b*other` on a shared grid.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        self.check_same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&u, &v)| u * a + v * b)
            .collect();
        Ok(Self {
            grid: self.grid,
            values,
        })
    }
}

impl ComplexField {
    /// CSV with columns `x,re,im`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "x,re,im")?;
        for (x, v) in self.iter() {
            writeln!(out, "{},{},{}", sig17(x), sig17(v.re), sig17(v.im))?;
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

impl RealField {
    pub fn write_csv<W: Write>(&self, mut out: W, name: &str) -> io::Result<()> {
        writeln!(out, "x,{name}")?;
        for (x, v) in self.iter() {
            writeln!(out, "{},{}", sig17(x), sig17(v))?;
        }
        Ok(())
    }

    /// Largest |value|, skipping NaN entries (excluded points).
    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .filter(|v| !v.is_nan())
            .map(|v| v.abs())
            .fold(0.0, f64::max)
    }
}

/// Finite-difference weights for the `m`-th derivative at `x0` from values
/// at `nodes` (Fornberg 1988).
pub fn fornberg_weights(x0: f64, nodes: &[f64], m: usize) -> Vec<f64> {
    let n = nodes.len();
    assert!(n > m, "need more nodes than the derivative order");
    let mut c = vec![vec![0.0; m + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

/// Finite-difference stencil family: derivative order and formal accuracy.
///
/// Interior points use the centred window; the outermost points use
/// one-sided windows of `order + accuracy` nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stencil {
    pub order: usize,
    pub accuracy: usize,
}

impl Stencil {
    pub const fn new(order: usize, accuracy: usize) -> Self {
        Self { order, accuracy }
    }

    fn centred_len(&self) -> usize {
        2 * ((self.order + self.accuracy - 1) / 2) + 1
    }

    fn one_sided_len(&self) -> usize {
        self.order + self.accuracy
    }

    /// Minimum number of grid points the stencil needs.
    pub fn min_points(&self) -> usize {
        self.centred_len().max(self.one_sided_len())
    }
}

/// Applies `stencil` to `f`. Weights are generated in units of `h` and
/// rescaled once.
pub fn derivative<T: Sample>(f: &Field<T>, stencil: Stencil) -> Result<Field<T>> {
    let n = f.grid.len();
    if n < stencil.min_points() {
        return Err(Error::InvalidGrid(format!(
            "{n} points is too few for a {:?} stencil",
            stencil
        )));
    }
    let h = f.grid.spacing();
    let scale = h.powi(-(stencil.order as i32));
    let centred = stencil.centred_len();
    let half = centred / 2;
    let one_sided = stencil.one_sided_len();

    let centred_nodes: Vec<f64> = (0..centred).map(|j| j as f64 - half as f64).collect();
    let centred_w = fornberg_weights(0.0, &centred_nodes, stencil.order);
    let side_nodes: Vec<f64> = (0..one_sided).map(|j| j as f64).collect();

    let apply = |start: usize, w: &[f64]| -> T {
        w.iter()
            .enumerate()
            .fold(T::default(), |acc, (j, &wj)| acc + f.values[start + j] * wj)
            * scale
    };

    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let v = if i >= half && i + half < n {
            apply(i - half, &centred_w)
        } else if i < half {
            let w = fornberg_weights(i as f64, &side_nodes, stencil.order);
            apply(0, &w)
        } else {
            let start = n - one_sided;
            let w = fornberg_weights((i - start) as f64, &side_nodes, stencil.order);
            apply(start, &w)
        };
        out.push(v);
    }
    Ok(Field {
        grid: f.grid,
        values: out,
    })
}

/// Second-order central second difference, 4-point one-sided at the ends.
/// Exact for cubics up to rounding.
pub fn second_derivative<T: Sample>(f: &Field<T>) -> Result<Field<T>> {
    derivative(f, Stencil::new(2, 2))
}

/// Options for [`schrodinger_residual`].
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualOptions {
    /// Lower bound for the denominator `|psi|*|E|`.
    pub floor: f64,
    /// Positions where the potential jumps. Points whose 3-point stencil
    /// contains one are excluded.
    pub breakpoints: Vec<f64>,
}

impl Default for ResidualOptions {
    fn default() -> Self {
        Self {
            floor: 1e-12,
            breakpoints: Vec::new(),
        }
    }
}

/// Relative stationary Schrödinger residual
/// `|-(hbar^2/2m) psi'' + V psi - E psi| / max(|psi||E|, floor)`.
///
/// Endpoints and excluded points are NaN.
pub fn schrodinger_residual(
    psi: &ComplexField,
    potential: &RealField,
    energy: f64,
    mass: f64,
    hbar: f64,
    opts: &ResidualOptions,
) -> Result<RealField> {
    psi.check_same_grid(potential)?;
    let d2 = second_derivative(psi)?;
    let grid = psi.grid;
    let h = grid.spacing();
    let n = grid.len();
    let kinetic = hbar * hbar / (2.0 * mass);
    let values = (0..n)
        .map(|i| {
            if i == 0 || i + 1 == n {
                return f64::NAN;
            }
            let x = grid.x(i);
            // Stencil spans [x-h, x+h]; breakpoints strictly inside or on an
            // outer node both break the central difference.
            let straddles = opts
                .breakpoints
                .iter()
                .any(|&b| b > x - h * (1.0 + 1e-9) && b < x + h * (1.0 + 1e-9));
            if straddles {
                return f64::NAN;
            }
            let p = psi.values[i];
            let r = -d2.values[i] * kinetic + p * (potential.values[i] - energy);
            r.norm() / (p.norm() * energy.abs()).max(opts.floor)
        })
        .collect();
    Ok(Field { grid, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn rejects_small_grids() {
        assert!(matches!(Grid1D::new(0.0, 1.0, 2), Err(Error::InvalidGrid(_))));
        assert!(Grid1D::new(1.0, 0.0, 10).is_err());
    }

    #[test]
    fn uniform_samples() {
        let g = Grid1D::new(-1.0, 1.0, 5).unwrap();
        let xs: Vec<f64> = g.points().collect();
        assert_eq!(xs, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn second_derivative_exact_for_quadratics() {
        let g = Grid1D::new(0.0, 1.0, 101).unwrap();
        let f = RealField::from_fn(g, |x| x * x);
        let d2 = second_derivative(&f).unwrap();
        for v in d2.values() {
            assert!((v - 2.0).abs() < 1e-9, "{v}");
        }
    }

    #[test]
    fn second_derivative_of_constant_is_zero() {
        let g = Grid1D::new(-3.0, 2.0, 57).unwrap();
        let f = ComplexField::from_fn(g, |_| Complex64::new(1.5, -0.25));
        let d2 = second_derivative(&f).unwrap();
        assert!(d2.max_abs() < 1e-9);
    }

    #[test]
    fn second_derivative_of_sine() {
        let g = Grid1D::new(0.0, PI, 1001).unwrap();
        let f = RealField::from_fn(g, f64::sin);
        let d2 = second_derivative(&f).unwrap();
        let err = d2
            .iter()
            .map(|(x, v)| (v + x.sin()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-5, "max error {err}");
    }

    #[test]
    fn fornberg_reproduces_textbook_weights() {
        let w = fornberg_weights(0.0, &[-1.0, 0.0, 1.0], 2);
        assert_eq!(w, vec![1.0, -2.0, 1.0]);
        let w = fornberg_weights(0.0, &[0.0, 1.0, 2.0, 3.0], 2);
        for (a, b) in w.iter().zip([2.0, -5.0, 4.0, -1.0]) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn sixth_order_first_derivative() {
        let g = Grid1D::new(0.0, 2.0, 201).unwrap();
        let f = RealField::from_fn(g, |x| (1.3 * x).exp());
        let d = derivative(&f, Stencil::new(1, 6)).unwrap();
        let err = d
            .iter()
            .map(|(x, v)| (v / (1.3 * (1.3 * x).exp()) - 1.0).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
    }

    #[test]
    fn residual_of_plane_wave() {
        let g = Grid1D::new(-5.0, 5.0, 10001).unwrap();
        let k: f64 = 1.3;
        let psi = ComplexField::from_fn(g, |x| Complex64::new(0.0, k * x).exp());
        let v = RealField::from_fn(g, |_| 0.0);
        let opts = ResidualOptions::default();
        let good = schrodinger_residual(&psi, &v, k * k / 2.0, 1.0, 1.0, &opts).unwrap();
        assert!(good.max_abs() < 1e-6, "{}", good.max_abs());
        assert!(good.values()[0].is_nan());

        let bad = schrodinger_residual(&psi, &v, 0.0, 1.0, 1.0, &opts).unwrap();
        // Denominator hits the floor when E = 0, so the signal is huge.
        assert!(bad.max_abs() > 0.1);
        let wrong = schrodinger_residual(&psi, &v, 0.5 * k * k * 0.5, 1.0, 1.0, &opts).unwrap();
        assert!(wrong.max_abs() > 0.5);
    }

    #[test]
    fn residual_requires_matching_grids() {
        let g = Grid1D::new(0.0, 1.0, 11).unwrap();
        let g2 = Grid1D::new(0.0, 1.0, 12).unwrap();
        let psi = ComplexField::from_fn(g, |_| Complex64::new(1.0, 0.0));
        let v = RealField::from_fn(g2, |_| 0.0);
        let err = schrodinger_residual(&psi, &v, 1.0, 1.0, 1.0, &ResidualOptions::default());
        assert!(matches!(err, Err(Error::GridMismatch(_))));
    }

    #[test]
    fn second_order_convergence() {
        let g = Grid1D::new(0.0, 4.0, 201).unwrap();
        let k: f64 = 2.0;
        let max_res = |g: Grid1D| {
            let psi = ComplexField::from_fn(g, |x| Complex64::new(0.0, k * x).exp());
            let v = RealField::from_fn(g, |_| 0.0);
            schrodinger_residual(&psi, &v, k * k / 2.0, 1.0, 1.0, &ResidualOptions::default())
                .unwrap()
                .max_abs()
        };
        let ratio = max_res(g) / max_res(g.refined());
        assert!((ratio - 4.0).abs() < 0.1, "ratio {ratio}");
    }

    proptest! {
        #[test]
        fn second_derivative_is_linear(a in -3.0..3.0f64, b in -3.0..3.0f64, w in 0.1..4.0f64) {
            let g = Grid1D::new(-1.0, 2.0, 61).unwrap();
            let f = RealField::from_fn(g, |x| (w * x).sin());
            let h = RealField::from_fn(g, |x| x.powi(3) - w * x);
            let lhs = second_derivative(&f.combine(a, &h, b).unwrap()).unwrap();
            let rhs = second_derivative(&f).unwrap()
                .combine(a, &second_derivative(&h).unwrap(), b).unwrap();
            let scale = lhs.max_abs().max(1.0);
            for (l, r) in lhs.values().iter().zip(rhs.values()) {
                prop_assert!((l - r).abs() < 1e-9 * scale);
            }
        }
    }
}
