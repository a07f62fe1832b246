//! Unit systems. Masses enter every formula through `hbar^2/(2m)`, so the
//! MeV·fm preset works with rest energies (MeV) and `hbar*c`.

use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnitSystem {
    /// hbar = m = e^2 = 1.
    #[default]
    Natural,
    /// Energies in MeV, lengths in fm, masses as rest energies in MeV.
    MevFm,
    /// SI, Gaussian-style Coulomb constant e^2/(4 pi eps0) in J·m.
    Si,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Units {
    pub system: UnitSystem,
    /// Reduced Planck constant (hbar*c in the MeV·fm preset).
    pub hbar: f64,
    /// Coulomb coupling so that V = Z1 Z2 e2 / r.
    pub e2: f64,
    /// Elementary charge used for flux quanta.
    pub charge: f64,
    /// Electron mass in this system.
    pub electron_mass: f64,
}

pub const HBAR_C_MEV_FM: f64 = 197.327;
pub const E2_MEV_FM: f64 = 1.44;

impl Units {
    pub fn new(system: UnitSystem) -> Self {
        match system {
            UnitSystem::Natural => Self {
                system,
                hbar: 1.0,
                e2: 1.0,
                charge: 1.0,
                electron_mass: 1.0,
            },
            UnitSystem::MevFm => Self {
                system,
                hbar: HBAR_C_MEV_FM,
                e2: E2_MEV_FM,
                charge: E2_MEV_FM.sqrt(),
                electron_mass: 0.51099895,
            },
            UnitSystem::Si => Self {
                system,
                hbar: 1.054_571_817e-34,
                e2: 2.307_077_552e-28,
                charge: 1.602_176_634e-19,
                electron_mass: 9.109_383_701_5e-31,
            },
        }
    }

    pub fn planck(&self) -> f64 {
        2.0 * PI * self.hbar
    }

    /// Superconducting flux quantum h/(2e).
    pub fn flux_quantum(&self) -> f64 {
        self.planck() / (2.0 * self.charge)
    }
}

impl Default for Units {
    fn default() -> Self {
        Self::new(UnitSystem::Natural)
    }
}
