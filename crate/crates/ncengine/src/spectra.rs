//! Two-mode energy spectra of the coupled oscillator in commutative,
//! non-commutative (NC), and generalized non-commutative (GNC) phase space.
//!
//! Natural units throughout: hbar = k_B = 1.

use serde::{Deserialize, Serialize};

use crate::error::{EngineError, Result};

/// Raw two-oscillator coupling: masses and the three spring constants of
/// H = p1²/2m1 + p2²/2m2 + (C1 x1² + C2 x2² + C3 x1 x2)/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawCoupling {
    pub m1: f64,
    pub m2: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

/// Normal-mode parameters after rescaling and rotating away the cross term.
///
/// `omega` is the base angular frequency supplied independently per cycle
/// stroke; the reduction itself fixes only `mass`, `stiffness`, and `zeta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedParams {
    /// Effective mass sqrt(m1*m2).
    pub mass: f64,
    /// Stiffness K = sqrt(c1*c2 - c3²/4).
    pub stiffness: f64,
    /// Coupling strength: the mode split is exp(±zeta).
    pub zeta: f64,
    /// Base angular frequency for the current stroke.
    pub omega: f64,
}

impl ReducedParams {
    pub fn with_omega(self, omega: f64) -> Self {
        ReducedParams { omega, ..self }
    }
}

/// Which phase-space structure the medium lives in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum SpaceConfig {
    Commutative,
    /// [x_i, x_j] = i·theta·eps_ij, theta >= 0.
    Nc { theta: f64 },
    /// [x_i, x_j] = i·gamma·eps_ij and [p_i, p_j] = i·xi·eps_ij.
    Gnc { gamma: f64, xi: f64 },
}

impl SpaceConfig {
    pub fn label(&self) -> &'static str {
        match self {
            SpaceConfig::Commutative => "comm",
            SpaceConfig::Nc { .. } => "nc",
            SpaceConfig::Gnc { .. } => "gnc",
        }
    }
}

/// Linear two-mode spectrum E(n1, n2) = f1·n1 + f2·n2 + e0, with f1 >= f2 > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeSpectrum {
    pub f1: f64,
    pub f2: f64,
    pub e0: f64,
}

impl ModeSpectrum {
    /// Normalizes the mode ordering to f1 >= f2 and rejects non-positive
    /// frequencies (no bounded thermal state).
    pub fn new(fa: f64, fb: f64, e0: f64) -> Result<Self> {
        let (f1, f2) = if fa >= fb { (fa, fb) } else { (fb, fa) };
        if !(f2 > 0.0) {
            return Err(EngineError::NegativeModeFrequency {
                frequency: f2,
                context: "mode spectrum construction",
            });
        }
        Ok(ModeSpectrum { f1, f2, e0 })
    }
}

/// Intermediate GNC deformation measures.
///
/// `delta2` has a removable 0/0 at zeta = 0; downstream code always uses the
/// product form `lambda2 = sqrt(K*m) * p2` instead, where
/// p2 = sqrt((e^z - e^-z)² + (K*m*gamma + xi)²/(K*m)) stays finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GncDerived {
    pub delta1: f64,
    pub delta2: f64,
    pub lambda1: f64,
    pub lambda2: f64,
}

impl GncDerived {
    pub fn new(stiffness: f64, mass: f64, zeta: f64, gamma: f64, xi: f64) -> Self {
        let km = stiffness * mass;
        let cosh2 = (zeta.exp() + (-zeta).exp()).powi(2);
        let sinh2 = (zeta.exp() - (-zeta).exp()).powi(2);
        let delta1 = (km * gamma - xi).powi(2) / (cosh2 * km);
        let delta2 = (km * gamma + xi).powi(2) / (sinh2 * km);
        let lambda1 = (zeta.exp() + (-zeta).exp()) * km.sqrt() * (1.0 + delta1).sqrt();
        let lambda2 = km.sqrt() * gnc_p2(stiffness, mass, zeta, gamma, xi);
        GncDerived {
            delta1,
            delta2,
            lambda1,
            lambda2,
        }
    }
}

/// Singularity-free product form of (e^z - e^-z)·sqrt(1 + delta2).
fn gnc_p2(stiffness: f64, mass: f64, zeta: f64, gamma: f64, xi: f64) -> f64 {
    let km = stiffness * mass;
    let sinh = zeta.exp() - (-zeta).exp();
    (sinh * sinh + (km * gamma + xi).powi(2) / km).sqrt()
}

/// Reduces the raw two-oscillator coupling to normal-mode parameters.
///
/// With c1 = C1·sqrt(m2/m1), c2 = C2·sqrt(m1/m2), c3 = C3:
/// m = sqrt(m1·m2), K = sqrt(c1·c2 - c3²/4),
/// e^zeta = (c1 + c2 + sqrt((c1-c2)² + c3²)) / (2K).
pub fn normal_mode_reduce(raw: &RawCoupling) -> Result<ReducedParams> {
    if !(raw.m1 > 0.0) || !(raw.m2 > 0.0) {
        return Err(EngineError::InvalidInput(format!(
            "masses must be positive, got m1 = {}, m2 = {}",
            raw.m1, raw.m2
        )));
    }
    let c1 = raw.c1 * (raw.m2 / raw.m1).sqrt();
    let c2 = raw.c2 * (raw.m1 / raw.m2).sqrt();
    let c3 = raw.c3;
    if 4.0 * c1 * c2 <= c3 * c3 {
        return Err(EngineError::DegenerateCoupling {
            lhs: 4.0 * c1 * c2,
            rhs: c3 * c3,
        });
    }
    let mass = (raw.m1 * raw.m2).sqrt();
    let stiffness = (c1 * c2 - c3 * c3 / 4.0).sqrt();
    let exp_zeta = (c1 + c2 + ((c1 - c2).powi(2) + c3 * c3).sqrt()) / (2.0 * stiffness);
    Ok(ReducedParams {
        mass,
        stiffness,
        zeta: exp_zeta.ln(),
        omega: 1.0,
    })
}

/// NC effective mass M = m / (1 + (m·omega·theta/2)²).
pub fn effective_mass(mass: f64, omega: f64, theta: f64) -> f64 {
    mass / (1.0 + (mass * omega * theta / 2.0).powi(2))
}

/// Builds the two-mode spectrum for the given phase-space structure.
pub fn mode_spectrum(space: &SpaceConfig, params: &ReducedParams) -> Result<ModeSpectrum> {
    let omega = params.omega;
    let zeta = params.zeta;
    match *space {
        SpaceConfig::Commutative => ModeSpectrum::new(
            omega * zeta.exp(),
            omega * (-zeta).exp(),
            omega * zeta.cosh(),
        ),
        SpaceConfig::Nc { theta } => {
            let shift = params.stiffness * theta / 2.0;
            let f2 = omega - shift;
            if !(f2 > 0.0) {
                return Err(EngineError::NegativeModeFrequency {
                    frequency: f2,
                    context: "NC spectrum: omega <= K*theta/2",
                });
            }
            ModeSpectrum::new(omega + shift, f2, omega)
        }
        SpaceConfig::Gnc { gamma, xi } => {
            let derived = GncDerived::new(params.stiffness, params.mass, zeta, gamma, xi);
            let cosh_part = (zeta.exp() + (-zeta).exp()) * (1.0 + derived.delta1).sqrt();
            let p2 = gnc_p2(params.stiffness, params.mass, zeta, gamma, xi);
            let f1 = omega / 2.0 * (cosh_part + p2);
            let f2 = omega / 2.0 * (cosh_part - p2);
            if !(f2 > 0.0) {
                return Err(EngineError::NegativeModeFrequency {
                    frequency: f2,
                    context: "GNC spectrum: deformation closes the soft mode",
                });
            }
            ModeSpectrum::new(f1, f2, omega / 2.0 * cosh_part)
        }
    }
}

/// E(n1, n2) = f1·n1 + f2·n2 + e0.
pub fn energy_level(spec: &ModeSpectrum, n1: u64, n2: u64) -> f64 {
    spec.f1 * n1 as f64 + spec.f2 * n2 as f64 + spec.e0
}
