//! Brute-force validators. Nothing here calls into the closed-form modules;
//! every formula is re-derived so that agreement is evidence.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gridfield::{ComplexField, Grid1D, RealField};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Piecewise-constant potential: `levels[j]` holds on
/// `(breakpoints[j-1], breakpoints[j])`, the outer segments reach infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePotential {
    breakpoints: Vec<f64>,
    levels: Vec<f64>,
    /// Notes about segments dropped during construction.
    pub warnings: Vec<String>,
}

impl PiecewisePotential {
    pub fn new(breakpoints: Vec<f64>, levels: Vec<f64>) -> Result<Self> {
        if levels.len() != breakpoints.len() + 1 {
            return Err(Error::InvalidGeometry(format!(
                "{} breakpoints need {} levels, got {}",
                breakpoints.len(),
                breakpoints.len() + 1,
                levels.len()
            )));
        }
        if breakpoints.iter().chain(&levels).any(|v| !v.is_finite()) {
            return Err(Error::InvalidGeometry("non-finite breakpoint or level".into()));
        }
        let mut bp = vec![];
        let mut lv = vec![levels[0]];
        let mut warnings = vec![];
        for (j, &b) in breakpoints.iter().enumerate() {
            if let Some(&last) = bp.last() {
                if b < last {
                    return Err(Error::InvalidGeometry(
                        "breakpoints must be increasing".into(),
                    ));
                }
                if b == last {
                    // zero-width segment: the level between the twins never applies
                    warnings.push(format!("removed zero-width segment at x = {b}"));
                    lv.pop();
                    lv.push(levels[j + 1]);
                    continue;
                }
            }
            bp.push(b);
            lv.push(levels[j + 1]);
        }
        Ok(Self {
            breakpoints: bp,
            levels: lv,
            warnings,
        })
    }

    /// Rectangular barrier of height `v0` on `[0, width]`.
    pub fn barrier(v0: f64, width: f64) -> Result<Self> {
        Self::new(vec![0.0, width], vec![0.0, v0, 0.0])
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn at(&self, x: f64) -> f64 {
        let j = self.breakpoints.iter().take_while(|&&b| x >= b).count();
        self.levels[j]
    }

    /// Samples onto `grid`; nodes within `1e-9 h` of a breakpoint take the
    /// mean of the two adjacent levels, which keeps Numerov fourth order.
    pub fn sample(&self, grid: Grid1D) -> RealField {
        let h = grid.spacing();
        RealField::from_fn(grid, |x| {
            match self
                .breakpoints
                .iter()
                .position(|&b| (x - b).abs() <= 1e-9 * h)
            {
                Some(j) => 0.5 * (self.levels[j] + self.levels[j + 1]),
                None => self.at(x),
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferResult {
    /// Transmission probability including the flux ratio of the two leads.
    pub transmission: f64,
    pub ln_transmission: f64,
    pub r: Complex64,
    /// Amplitude of `e^{i k_out x}` on the right (can underflow to zero).
    pub t: Complex64,
    pub warnings: Vec<String>,
}

fn wavenumber(mass: f64, hbar: f64, e: f64, v: f64) -> Complex64 {
    // Im q >= 0 so that e^{-i q w} is the growing direction
    Complex64::new(2.0 * mass * (e - v), 0.0).sqrt() / hbar
}

/// Scattering of a unit wave incident from the left by a chain of 2x2
/// interface matchings, propagated right to left with a running log scale
/// so that opacities far below `e^{-300}` stay representable.
pub fn transfer_matrix_transmission(
    v: &PiecewisePotential,
    energy: f64,
    mass: f64,
    hbar: f64,
) -> Result<TransferResult> {
    let mut warnings = v.warnings.clone();
    let (lo, hi) = (v.levels[0], *v.levels.last().expect("nonempty"));
    if !(energy > lo && energy > hi) {
        return Err(Error::IllPosed(format!(
            "energy {energy} must exceed both lead levels ({lo}, {hi})"
        )));
    }
    let mut e = energy;
    if v.levels.contains(&e) {
        e += 1e-12 * e.abs().max(1.0);
        warnings.push(format!("energy equals a level; perturbed to {e}"));
    }
    let q: Vec<Complex64> = v.levels.iter().map(|&l| wavenumber(mass, hbar, e, l)).collect();
    let n = v.levels.len();
    // Segment j uses local coordinate x - origin[j]; the left lead uses x.
    let origin = |j: usize| if j == 0 { 0.0 } else { v.breakpoints[j - 1] };

    let (mut a, mut b) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    let mut ln_scale = 0.0;
    for j in (1..n).rev() {
        let x = v.breakpoints[j - 1];
        let psi = a + b;
        let dpsi = I * q[j] * (a - b);
        let ql = q[j - 1];
        let w = x - origin(j - 1);
        let grow = ql.im * w;
        let half = 0.5 * (psi + dpsi / (I * ql));
        let half_b = 0.5 * (psi - dpsi / (I * ql));
        // factor e^{grow} out of both exponentials
        a = half * (-I * ql.re * w).exp();
        b = half_b * (I * ql.re * w).exp() * (-2.0 * grow).exp();
        ln_scale += grow;
        let m = a.norm().max(b.norm());
        a /= m;
        b /= m;
        ln_scale += m.ln();
    }
    // actual left amplitudes are (a, b) e^{ln_scale} per unit right amplitude
    let r = b / a;
    let ln_t_local = -(a.norm().ln() + ln_scale);
    let t_local = Complex64::from_polar(1.0, -a.arg());
    let ln_abs_t = ln_t_local;
    let t = t_local * ln_abs_t.exp() * (-I * q[n - 1] * origin(n - 1)).exp();
    let flux = q[n - 1].re / q[0].re;
    let ln_transmission = 2.0 * ln_abs_t + flux.ln();
    Ok(TransferResult {
        transmission: ln_transmission.exp(),
        ln_transmission,
        r,
        t,
        warnings,
    })
}

/// Condition imposed at the right end of a Numerov integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// `psi ~ e^{ikx}` with `E` above the right level.
    OutgoingRight,
    /// `psi ~ e^{-kappa x}` with `E` below the right level.
    DecayingRight,
}

/// Integrates `psi'' = (2m/hbar^2)(V - E) psi` leftward with Numerov's
/// method from the exact asymptotic form on the last two nodes, which must
/// share the same potential level.
pub fn numerov_solve(
    potential: &RealField,
    energy: f64,
    mass: f64,
    hbar: f64,
    boundary: Boundary,
) -> Result<ComplexField> {
    let grid = *potential.grid();
    let v = potential.values();
    let n = v.len();
    let h = grid.spacing();
    let last = v[n - 1];
    if v[n - 2] != last || v[n - 3] != last {
        return Err(Error::IllPosed(
            "potential must be constant on the last three nodes".into(),
        ));
    }
    let diff = 2.0 * mass * (last - energy) / (hbar * hbar);
    let mut psi = vec![Complex64::new(0.0, 0.0); n];
    match boundary {
        Boundary::OutgoingRight => {
            if !(diff < 0.0) {
                return Err(Error::IllPosed(
                    "outgoing boundary needs E above the right level".into(),
                ));
            }
            let k = (-diff).sqrt();
            for i in [n - 1, n - 2] {
                psi[i] = (I * k * grid.x(i)).exp();
            }
        }
        Boundary::DecayingRight => {
            if !(diff > 0.0) {
                return Err(Error::IllPosed(
                    "decaying boundary needs E below the right level".into(),
                ));
            }
            let kappa = diff.sqrt();
            let x_end = grid.x(n - 1);
            for i in [n - 1, n - 2] {
                psi[i] = Complex64::new((-kappa * (grid.x(i) - x_end)).exp(), 0.0);
            }
        }
    }
    let c = h * h / 12.0;
    let g: Vec<f64> = v
        .iter()
        .map(|&vi| 2.0 * mass * (vi - energy) / (hbar * hbar))
        .collect();
    for i in (1..n - 1).rev() {
        psi[i - 1] = (psi[i] * (2.0 * (1.0 + 5.0 * c * g[i])) - psi[i + 1] * (1.0 - c * g[i + 1]))
            / (1.0 - c * g[i - 1]);
    }
    ComplexField::new(grid, psi)
}

/// Least-squares factor `c` with `a ~ c b`, and `max |a - c b| / max |a|`.
pub fn proportionality(a: &ComplexField, b: &ComplexField) -> (Complex64, f64) {
    let (mut num, mut den) = (Complex64::new(0.0, 0.0), 0.0);
    for (x, y) in a.values().iter().zip(b.values()) {
        num += y.conj() * x;
        den += y.norm_sqr();
    }
    let c = num / den;
    let amax = a.max_abs();
    let dev = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - c * y).norm())
        .fold(0.0, f64::max);
    (c, dev / amax)
}

/// Normalised overlap `|<a|b>|^2 / (<a|a><b|b>)`.
pub fn overlap(a: &ComplexField, b: &ComplexField) -> f64 {
    let (mut ab, mut aa, mut bb) = (Complex64::new(0.0, 0.0), 0.0, 0.0);
    for (x, y) in a.values().iter().zip(b.values()) {
        ab += x.conj() * y;
        aa += x.norm_sqr();
        bb += y.norm_sqr();
    }
    ab.norm_sqr() / (aa * bb)
}

/// One sample of the radial oracle. Derivatives are with respect to `rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialSample {
    pub rho: f64,
    pub f: f64,
    pub fp: f64,
    pub g: f64,
    pub gp: f64,
}

impl RadialSample {
    pub fn wronskian(&self) -> f64 {
        self.fp * self.g - self.f * self.gp
    }
}

/// `ln |Gamma(L + 1 + i eta)|` from the reflection product
/// `|Gamma(1 + L + i eta)|^2 = prod_{j=1..L} (j^2 + eta^2) * pi eta / sinh(pi eta)`.
fn ln_abs_gamma(l: u32, eta: f64) -> f64 {
    let mut s: f64 = (1..=l).map(|j| ((j * j) as f64 + eta * eta).ln()).sum();
    let x = std::f64::consts::PI * eta;
    s += if x == 0.0 {
        0.0
    } else {
        // ln(x / sinh x), stable for large x
        x.ln() - x - (-(-2.0 * x).exp()).ln_1p() + std::f64::consts::LN_2
    };
    0.5 * s
}

/// `ln C_L(eta) = L ln 2 - pi eta/2 + ln|Gamma(L+1+i eta)| - ln (2L+1)!`.
fn ln_gamow(l: u32, eta: f64) -> f64 {
    let ln_fact: f64 = (1..=2 * l + 1).map(|j| (j as f64).ln()).sum();
    l as f64 * std::f64::consts::LN_2 - std::f64::consts::FRAC_PI_2 * eta + ln_abs_gamma(l, eta)
        - ln_fact
}

/// One Taylor step of `rho^2 u'' = (2 eta rho + L(L+1) - rho^2) u` about
/// `x0` to `x0 + h`. Returns `(u, u')`.
fn taylor_step(eta: f64, lam: f64, x0: f64, u: f64, up: f64, h: f64) -> (f64, f64) {
    let (mut cn, mut cn1) = (u, up); // c_n, c_{n+1}
    let (mut cm1, mut cm2) = (0.0, 0.0); // c_{n-1}, c_{n-2}
    let mut val = u + up * h;
    let mut der = up;
    let mut hp = h; // h^{n+1}
    let mut small = 0;
    for n in 0..400usize {
        let nf = n as f64;
        let rhs = (2.0 * eta * x0 + lam - x0 * x0) * cn + (2.0 * eta - 2.0 * x0) * cm1 - cm2;
        let cn2 = (rhs - 2.0 * x0 * (nf + 1.0) * nf * cn1 - nf * (nf - 1.0) * cn)
            / (x0 * x0 * (nf + 2.0) * (nf + 1.0));
        // value term c_{n+2} h^{n+2}, derivative term (n+2) c_{n+2} h^{n+1}
        let tv = cn2 * hp * h;
        let td = (nf + 2.0) * cn2 * hp;
        val += tv;
        der += td;
        hp *= h;
        cm2 = cm1;
        cm1 = cn;
        cn = cn1;
        cn1 = cn2;
        let scale = val.abs().max(der.abs()).max(u.abs().max(up.abs()) * 1e-300);
        if tv.abs() <= 1e-18 * scale && td.abs() <= 1e-18 * scale {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
    }
    (val, der)
}

/// Integrates `(u, u')` from `a` to `b` with Taylor steps of at most
/// `min(x/2, 0.5)`.
fn taylor_integrate(eta: f64, lam: f64, a: f64, b: f64, u: f64, up: f64) -> (f64, f64) {
    let (mut x, mut u, mut up) = (a, u, up);
    let dir = (b - a).signum();
    while (b - x) * dir > 0.0 {
        let mut h = dir * (0.5 * x).min(0.5);
        if (x + h - b) * dir > 0.0 {
            h = b - x;
        }
        let (nu, nup) = taylor_step(eta, lam, x, u, up, h);
        x += h;
        u = nu;
        up = nup;
    }
    (u, up)
}

/// `H+'/H+ = i(1 - eta/rho) + w'/w` from the asymptotic series
/// `w = sum d_k rho^-k`, `d_{k+1} = (k + i eta - L)(k + i eta + L + 1) d_k / (2i(k+1))`.
fn asymptotic_log_derivative(eta: f64, l: u32, rho: f64) -> Result<Complex64> {
    let lf = l as f64;
    let mut d = Complex64::new(1.0, 0.0);
    let mut w = d;
    let mut wp = Complex64::new(0.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 0..500 {
        let kf = k as f64;
        d = d * (Complex64::new(kf - lf, eta) * Complex64::new(kf + lf + 1.0, eta))
            / (2.0 * I * (kf + 1.0));
        let term = d * rho.powi(-(k + 1));
        let mag = term.norm();
        if mag > last {
            return Err(Error::Precision {
                what: "asymptotic Coulomb series diverged before converging".into(),
                digits: -last.log10(),
            });
        }
        w += term;
        wp += -(kf + 1.0) * term / rho;
        last = mag;
        if mag < 1e-18 {
            return Ok(I * (1.0 - eta / rho) + wp / w);
        }
    }
    Err(Error::Precision {
        what: "asymptotic Coulomb series".into(),
        digits: -last.log10(),
    })
}

/// Regular and irregular Coulomb functions at `n` points evenly spaced on
/// `[rho_start, rho_end]`, by Taylor-series integration.
///
/// `F` starts from its power series near the origin and runs outward; `G`
/// starts at a far point, fixed there by `F` and the asymptotic outgoing
/// log-derivative, and runs inward. Each function is thus integrated only in
/// its stable direction through the classically forbidden zone.
pub fn radial_coulomb_integrate(
    eta: f64,
    l: u32,
    rho_start: f64,
    rho_end: f64,
    n: usize,
) -> Result<Vec<RadialSample>> {
    if !(rho_start > 0.0 && rho_end >= rho_start && n >= 1 && eta >= 0.0) {
        return Err(Error::Domain(
            "need 0 < rho_start <= rho_end, eta >= 0, n >= 1".into(),
        ));
    }
    let lf = l as f64;
    let lam = lf * (lf + 1.0);
    let pts: Vec<f64> = if n == 1 {
        vec![rho_start]
    } else {
        (0..n)
            .map(|i| rho_start + (rho_end - rho_start) * i as f64 / (n - 1) as f64)
            .collect()
    };

    // power series start
    let r0 = rho_start.min(0.05 * (lf + 1.0) / (1.0 + eta)).min(0.1);
    let (mut s, mut sp) = (0.0, 0.0);
    let (mut am2, mut am1) = (0.0, 1.0);
    s += 1.0;
    sp += (lf + 1.0) / r0;
    for k in 1..200 {
        let kf = k as f64;
        let ak = if k == 1 {
            eta / (lf + 1.0)
        } else {
            (2.0 * eta * am1 - am2) / (kf * (kf + 2.0 * lf + 1.0))
        };
        let t = ak * r0.powi(k);
        let prev = am1 * r0.powi(k - 1);
        s += t;
        sp += (kf + lf + 1.0) * t / r0;
        am2 = am1;
        am1 = ak;
        // odd coefficients vanish at eta = 0, so test two consecutive terms
        if t.abs().max(prev.abs()) < 1e-18 * s.abs() {
            break;
        }
    }
    let ln_pref = ln_gamow(l, eta) + (lf + 1.0) * r0.ln();
    // integrate a unit-scaled F and restore the prefactor at each sample
    let mut fvals = Vec::with_capacity(pts.len());
    let (mut x, mut u, mut up) = (r0, s, sp);
    let mut ln_acc = ln_pref;
    for &p in &pts {
        let (nu, nup) = taylor_integrate(eta, lam, x, p, u, up);
        x = p;
        let m = nu.abs().max(nup.abs());
        u = nu / m;
        up = nup / m;
        ln_acc += m.ln();
        fvals.push((u * ln_acc.exp(), up * ln_acc.exp()));
    }

    let far = 1000.0 + 2.0 * (eta * eta + (lf + 1.0) * (lf + 1.0)) + rho_end;
    let (mut ff, mut ffp) = (u, up);
    let (fu, fup) = taylor_integrate(eta, lam, x, far, ff, ffp);
    ff = fu * ln_acc.exp();
    ffp = fup * ln_acc.exp();
    let pq = asymptotic_log_derivative(eta, l, far)?;
    let (p, q) = (pq.re, pq.im);
    // F' = p F + q G and G' = p G - q F for H+ = G + iF
    let mut g = (ffp - p * ff) / q;
    let mut gp = p * g - q * ff;
    let mut xg = far;
    let mut out = vec![
        RadialSample {
            rho: 0.0,
            f: 0.0,
            fp: 0.0,
            g: 0.0,
            gp: 0.0
        };
        pts.len()
    ];
    for (i, &pt) in pts.iter().enumerate().rev() {
        let (ng, ngp) = taylor_integrate(eta, lam, xg, pt, g, gp);
        g = ng;
        gp = ngp;
        xg = pt;
        out[i] = RadialSample {
            rho: pt,
            f: fvals[i].0,
            fp: fvals[i].1,
            g,
            gp,
        };
    }
    if out.iter().any(|s| !(s.f.is_finite() && s.g.is_finite())) {
        return Err(Error::Precision {
            what: "radial oracle left the representable range".into(),
            digits: 0.0,
        });
    }
    Ok(out)
}

/// Dense grid search followed by golden-section refinement of the best
/// bracket. Returns `(argmax, max)`.
pub fn maximize(f: impl Fn(f64) -> f64, lo: f64, hi: f64, samples: usize) -> (f64, f64) {
    let n = samples.max(3);
    let h = (hi - lo) / (n - 1) as f64;
    let (mut best_i, mut best) = (0, f(lo));
    for i in 1..n {
        let v = f(lo + h * i as f64);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let (mut a, mut b) = (
        (lo + h * (best_i as f64 - 1.0)).max(lo),
        (lo + h * (best_i as f64 + 1.0)).min(hi),
    );
    let gr = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - gr * (b - a);
    let mut d = a + gr * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() < 1e-15 * (1.0 + a.abs()) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    if fx >= best {
        (x, fx)
    } else {
        (lo + h * best_i as f64, best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_lead_is_transparent() {
        let v = PiecewisePotential::new(vec![], vec![0.0]).unwrap();
        let t = transfer_matrix_transmission(&v, 0.7, 1.0, 1.0).unwrap();
        assert!((t.transmission - 1.0).abs() < 1e-15);
        assert!(t.r.norm() < 1e-15);
    }

    #[test]
    fn barrier_k_equals_kappa() {
        let v = PiecewisePotential::barrier(1.0, 2.0).unwrap();
        let t = transfer_matrix_transmission(&v, 0.5, 1.0, 1.0).unwrap();
        let exact = 1.0 / 2f64.cosh().powi(2);
        assert!((t.transmission / exact - 1.0).abs() < 1e-12);
        assert!((t.r.norm_sqr() + t.t.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn opaque_barrier() {
        let v = PiecewisePotential::barrier(1.0, 40.0).unwrap();
        let t = transfer_matrix_transmission(&v, 0.5, 1.0, 1.0).unwrap();
        assert!(t.transmission < 1e-30);
        assert!((t.r.norm_sqr() - 1.0).abs() < 1e-12);
        let v = PiecewisePotential::barrier(1.0, 200.0).unwrap();
        let t = transfer_matrix_transmission(&v, 0.5, 1.0, 1.0).unwrap();
        assert!((t.ln_transmission - (4f64.ln() - 400.0)).abs() < 1e-9);
    }

    #[test]
    fn zero_width_segment_removed() {
        let v = PiecewisePotential::new(vec![0.0, 1.0, 1.0], vec![0.0, 2.0, 5.0, 0.0]).unwrap();
        assert_eq!(v.breakpoints(), &[0.0, 1.0]);
        assert_eq!(v.levels(), &[0.0, 2.0, 0.0]);
        assert_eq!(v.warnings.len(), 1);
        assert!(PiecewisePotential::new(vec![1.0, 0.0], vec![0.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn level_degeneracy_is_perturbed() {
        let v = PiecewisePotential::new(vec![0.0, 1.0], vec![0.0, 0.5, 0.0]).unwrap();
        let t = transfer_matrix_transmission(&v, 0.5, 1.0, 1.0).unwrap();
        assert_eq!(t.warnings.len(), 1);
        // E = V0: T = 1/(1 + m V0 a^2 / (2 hbar^2)) = 1/(1 + 0.25)
        assert!((t.transmission - 0.8).abs() < 1e-6);
    }

    #[test]
    fn multi_segment_flux_conservation() {
        let v = PiecewisePotential::new(vec![-1.0, 0.0, 0.7, 2.0], vec![0.0, 0.9, 0.3, 1.4, 0.0]).unwrap();
        for e in [0.1, 0.5, 1.0, 2.0] {
            let t = transfer_matrix_transmission(&v, e, 1.3, 1.0).unwrap();
            assert!((t.r.norm_sqr() + t.transmission - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn numerov_plane_wave() {
        let k = 1.0;
        let g = Grid1D::new(0.0, 20.0 * std::f64::consts::PI, 6001).unwrap();
        let v = RealField::from_fn(g, |_| 0.0);
        let psi = numerov_solve(&v, 0.5, 1.0, 1.0, Boundary::OutgoingRight).unwrap();
        for (x, z) in psi.iter() {
            let dphase = (z * Complex64::new(0.0, -k * x).exp()).arg();
            assert!(dphase.abs() < 1e-8, "{dphase}");
        }
    }

    #[test]
    fn numerov_decaying_step() {
        let pot = PiecewisePotential::new(vec![0.0], vec![0.0, 1.0]).unwrap();
        let g = Grid1D::new(-3.0, 6.0, 9001).unwrap();
        let psi = numerov_solve(&pot.sample(g), 0.5, 1.0, 1.0, Boundary::DecayingRight).unwrap();
        // least-squares slope of ln|psi| on [1, 5]
        let pts: Vec<(f64, f64)> = psi
            .iter()
            .filter(|(x, _)| (1.0..=5.0).contains(x))
            .map(|(x, z)| (x, z.norm().ln()))
            .collect();
        let n = pts.len() as f64;
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
        let (mx, my) = (sx / n, sy / n);
        let (sxy, sxx) = pts
            .iter()
            .fold((0.0, 0.0), |a, p| (a.0 + (p.0 - mx) * (p.1 - my), a.1 + (p.0 - mx).powi(2)));
        assert!((-sxy / sxx - 1.0).abs() < 1e-8);
        assert!(matches!(
            numerov_solve(&pot.sample(g), 1.5, 1.0, 1.0, Boundary::DecayingRight),
            Err(Error::IllPosed(_))
        ));
    }

    #[test]
    fn radial_free_limit() {
        let s = radial_coulomb_integrate(0.0, 0, 0.5, 30.0, 60).unwrap();
        for p in &s {
            assert!((p.f - p.rho.sin()).abs() < 1e-10, "{} {}", p.rho, p.f - p.rho.sin());
            assert!((p.g - p.rho.cos()).abs() < 1e-10);
            assert!((p.fp - p.rho.cos()).abs() < 1e-10);
        }
        let s = radial_coulomb_integrate(0.0, 1, 0.5, 30.0, 30).unwrap();
        for p in &s {
            let (sn, cs, r) = (p.rho.sin(), p.rho.cos(), p.rho);
            assert!((p.f - (sn / r - cs)).abs() < 1e-10);
            assert!((p.g - (cs / r + sn)).abs() < 1e-10, "{} {} {}", r, p.g, cs / r + sn);
        }
    }

    #[test]
    fn radial_wronskian_along_trajectory() {
        for (eta, l) in [(2.0, 0), (10.0, 3), (0.3, 7)] {
            let s = radial_coulomb_integrate(eta, l, 0.2, 60.0, 80).unwrap();
            for p in &s {
                assert!((p.wronskian() - 1.0).abs() < 1e-9, "{eta} {l} {} {}", p.rho, p.wronskian());
            }
        }
    }

    #[test]
    fn gamow_factor_closed_forms() {
        // C_0(0) = 1, C_L(0) = 2^L L!/(2L+1)!
        assert!(ln_gamow(0, 0.0).abs() < 1e-15);
        let c2 = (4.0 * 2.0 / 120.0f64).ln();
        assert!((ln_gamow(2, 0.0) - c2).abs() < 1e-14);
        let eta: f64 = 1.5;
        let c0 = (2.0 * std::f64::consts::PI * eta / ((2.0 * std::f64::consts::PI * eta).exp() - 1.0)).sqrt();
        assert!((ln_gamow(0, eta) - c0.ln()).abs() < 1e-13);
    }

    #[test]
    fn maximizer_finds_interior_peak() {
        let (x, f) = maximize(|x| -(x - 0.3).powi(2) + 2.0, -1.0, 1.0, 101);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((f - 2.0).abs() < 1e-14);
        let (x, _) = maximize(|x| x, 0.0, 1.0, 11);
        assert!((x - 1.0).abs() < 1e-12);
    }
}
