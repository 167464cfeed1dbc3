//! Partition functions and thermal state functions.
//!
//! Two routes are kept side by side on purpose: the exact geometric-series
//! resummation of the linear two-mode spectrum, and the closed forms printed
//! for each phase-space structure. The closed forms are high-temperature
//! approximations; their deviation from the exact route is a first-class
//! output, not an error.

use serde::{Deserialize, Serialize};

use crate::error::{EngineError, Result};
use crate::spectra::{ModeSpectrum, SpaceConfig};

/// Hot/cold reservoir pair, natural units (k_B = 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathPair {
    pub t_hot: f64,
    pub t_cold: f64,
}

impl BathPair {
    pub fn new(t_hot: f64, t_cold: f64) -> Result<Self> {
        if !(t_cold > 0.0 && t_hot > t_cold) {
            return Err(EngineError::InvalidInput(format!(
                "need t_hot > t_cold > 0, got t_hot = {t_hot}, t_cold = {t_cold}"
            )));
        }
        Ok(BathPair { t_hot, t_cold })
    }

    pub fn beta_hot(&self) -> f64 {
        1.0 / self.t_hot
    }

    pub fn beta_cold(&self) -> f64 {
        1.0 / self.t_cold
    }
}

/// Thermal model of the working medium: either the exact spectral route over
/// a [`ModeSpectrum`], or the printed closed form for one phase-space
/// structure at raw parameters (omega, zeta, K).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PartitionModel {
    ExactSpectral(ModeSpectrum),
    PaperClosedForm {
        space: SpaceConfig,
        omega: f64,
        zeta: f64,
        stiffness: f64,
    },
}

impl PartitionModel {
    pub fn ln_partition(&self, beta: f64) -> Result<f64> {
        match self {
            PartitionModel::ExactSpectral(spec) => Ok(ln_partition_exact(spec, beta)),
            PartitionModel::PaperClosedForm {
                space,
                omega,
                zeta,
                stiffness,
            } => ln_partition_paper(space, *omega, *zeta, *stiffness, beta),
        }
    }

    /// U = -d ln Z / d beta, analytic per model.
    pub fn internal_energy(&self, beta: f64) -> Result<f64> {
        match self {
            PartitionModel::ExactSpectral(spec) => {
                Ok(spec.e0
                    + spec.f1 / ((beta * spec.f1).exp_m1())
                    + spec.f2 / ((beta * spec.f2).exp_m1()))
            }
            PartitionModel::PaperClosedForm {
                space,
                omega,
                zeta,
                stiffness,
            } => {
                // validity is the same as for ln Z itself
                self.ln_partition(beta)?;
                Ok(match *space {
                    SpaceConfig::Commutative => omega * zeta.cosh() + 2.0 / beta,
                    SpaceConfig::Nc { .. } => 2.0 / beta,
                    SpaceConfig::Gnc { gamma, xi } => {
                        // ln Z is affine in beta up to the -2 ln(beta) term;
                        // the exponent's beta-coefficient is
                        // -(omega cosh z / 2) * sqrt(4 + 2K(-K g + x)^2 sech z)
                        let root = gnc_exponent_root(*stiffness, *zeta, gamma, xi);
                        omega * zeta.cosh() / 2.0 * root + 2.0 / beta
                    }
                })
            }
        }
    }

    /// S = ln Z + beta·U.
    pub fn entropy(&self, beta: f64) -> Result<f64> {
        Ok(self.ln_partition(beta)? + beta * self.internal_energy(beta)?)
    }

    /// F = -(1/beta)·ln Z.
    pub fn free_energy(&self, beta: f64) -> Result<f64> {
        Ok(-self.ln_partition(beta)? / beta)
    }
}

/// Exact resummation: Z = e^{-beta e0} / ((1 - e^{-beta f1})(1 - e^{-beta f2})).
pub fn partition_exact(spec: &ModeSpectrum, beta: f64) -> f64 {
    ln_partition_exact(spec, beta).exp()
}

pub fn ln_partition_exact(spec: &ModeSpectrum, beta: f64) -> f64 {
    -beta * spec.e0
        - (-(-beta * spec.f1).exp_m1()).ln()
        - (-(-beta * spec.f2).exp_m1()).ln()
}

/// Truncated double Boltzmann sum with a rigorous geometric tail bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BruteForceSum {
    pub value: f64,
    /// Conservative union bound on the omitted tail:
    /// value · (t1 + t2 + t1·t2) with t_i = r_i^{n_max+1}/(1 - r_i).
    pub tail_bound: f64,
}

pub fn partition_bruteforce(spec: &ModeSpectrum, beta: f64, n_max: u64) -> BruteForceSum {
    // Kahan-compensated: the grid can run to hundreds of thousands of terms
    // and the naive accumulation error would swamp tight tail bounds.
    let mut sum = 0.0;
    let mut comp = 0.0;
    for n1 in 0..=n_max {
        for n2 in 0..=n_max {
            let term = (-beta * crate::spectra::energy_level(spec, n1, n2)).exp();
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
    }
    let r1 = (-beta * spec.f1).exp();
    let r2 = (-beta * spec.f2).exp();
    let t1 = r1.powi(n_max as i32 + 1) / (1.0 - r1);
    let t2 = r2.powi(n_max as i32 + 1) / (1.0 - r2);
    BruteForceSum {
        value: sum,
        tail_bound: sum * (t1 + t2 + t1 * t2),
    }
}

/// As [`partition_bruteforce`] but rejects cutoffs whose tail bound exceeds
/// the requested absolute tolerance.
pub fn partition_bruteforce_checked(
    spec: &ModeSpectrum,
    beta: f64,
    n_max: u64,
    tolerance: f64,
) -> Result<BruteForceSum> {
    let sum = partition_bruteforce(spec, beta, n_max);
    if sum.tail_bound > tolerance {
        return Err(EngineError::CutoffTooSmall {
            tail_bound: sum.tail_bound,
            tolerance,
        });
    }
    Ok(sum)
}

/// Printed closed-form partition function for the given space.
pub fn partition_paper(
    space: &SpaceConfig,
    omega: f64,
    zeta: f64,
    stiffness: f64,
    beta: f64,
) -> Result<f64> {
    Ok(ln_partition_paper(space, omega, zeta, stiffness, beta)?.exp())
}

fn ln_partition_paper(
    space: &SpaceConfig,
    omega: f64,
    zeta: f64,
    stiffness: f64,
    beta: f64,
) -> Result<f64> {
    match *space {
        SpaceConfig::Commutative => {
            // Z = e^{-beta omega cosh z} / (beta² omega²), valid for
            // e^z beta omega > 0
            if !(zeta.exp() * beta * omega > 0.0) {
                return Err(EngineError::DomainConditionViolated {
                    context: "commutative closed form",
                    detail: format!("e^zeta * beta * omega = {}", zeta.exp() * beta * omega),
                });
            }
            Ok(-beta * omega * zeta.cosh() - 2.0 * beta.ln() - 2.0 * omega.ln())
        }
        SpaceConfig::Nc { theta } => {
            // Z = -4 / (beta² theta² (K - 4 omega²)), valid for
            // K beta theta / 2 + beta sqrt(K theta² omega²) > 0
            let condition = stiffness * beta * theta / 2.0
                + beta * (stiffness * theta * theta * omega * omega).sqrt();
            if !(condition > 0.0) {
                return Err(EngineError::DomainConditionViolated {
                    context: "NC closed form",
                    detail: format!("K*beta*theta/2 + beta*sqrt(K theta^2 omega^2) = {condition}"),
                });
            }
            let z = -4.0 / (beta * beta * theta * theta * (stiffness - 4.0 * omega * omega));
            if !(z > 0.0) {
                return Err(EngineError::NonPositivePartition { value: z });
            }
            Ok(z.ln())
        }
        SpaceConfig::Gnc { gamma, xi } => {
            gnc_domain_condition(omega, zeta, stiffness, beta, gamma, xi)?;
            // Z = -2 e^{z - (beta/2) omega cosh z sqrt(4 + 2K(-Kg+x)^2 sech z)}
            //     / (omega² beta² [-2e^z + 2e^{2z} K² g x - K(K² g² + x²)])
            let root = gnc_exponent_root(stiffness, zeta, gamma, xi);
            let denom = -2.0 * zeta.exp()
                + 2.0 * (2.0 * zeta).exp() * stiffness * stiffness * gamma * xi
                - stiffness * (stiffness * stiffness * gamma * gamma + xi * xi);
            if !(denom < 0.0) {
                // sign of Z is the sign of -denom
                return Err(EngineError::NonPositivePartition {
                    value: -2.0 * denom.signum(),
                });
            }
            Ok(2.0_f64.ln() + zeta - beta / 2.0 * omega * zeta.cosh() * root
                - 2.0 * omega.ln()
                - 2.0 * beta.ln()
                - (-denom).ln())
        }
    }
}

/// sqrt(4 + 2K(-K gamma + xi)² sech(zeta)) from the GNC closed-form exponent.
fn gnc_exponent_root(stiffness: f64, zeta: f64, gamma: f64, xi: f64) -> f64 {
    (4.0 + 2.0 * stiffness * (-stiffness * gamma + xi).powi(2) / zeta.cosh()).sqrt()
}

/// Re[...] > 0 condition printed alongside the GNC closed form. The square
/// roots can go imaginary, in which case they contribute nothing to the real
/// part.
fn gnc_domain_condition(
    omega: f64,
    zeta: f64,
    stiffness: f64,
    beta: f64,
    gamma: f64,
    xi: f64,
) -> Result<()> {
    let q = zeta.exp() * stiffness * (-stiffness * gamma + xi).powi(2);
    let a_plus = 1.0 + q / (1.0 + (2.0 * zeta).exp());
    let a_minus = 1.0 + q / (-1.0 + (2.0 * zeta).exp());
    let re_sqrt = |x: f64| if x >= 0.0 { x.sqrt() } else { 0.0 };
    let bracket = re_sqrt(a_plus) * (1.0 + (2.0 * zeta).exp())
        + re_sqrt(a_minus) * ((2.0 * zeta).exp() - 1.0);
    let condition = zeta.exp() * beta * omega * bracket;
    if condition.is_finite() && condition > 0.0 {
        Ok(())
    } else {
        Err(EngineError::DomainConditionViolated {
            context: "GNC closed form",
            detail: format!("Re-condition value = {condition}"),
        })
    }
}

/// Single-mode thermal energy (f/2)·coth(beta·f/2) = f·(n̄ + 1/2).
pub fn mode_mean_energy(frequency: f64, beta: f64) -> f64 {
    let x = beta * frequency / 2.0;
    frequency / 2.0 / x.tanh()
}

/// Bose occupation n̄ = 1/(e^{beta f} - 1).
pub fn bose_occupation(frequency: f64, beta: f64) -> f64 {
    1.0 / (beta * frequency).exp_m1()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel_diff(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
    }

    fn spec(f1: f64, f2: f64, e0: f64) -> ModeSpectrum {
        ModeSpectrum::new(f1, f2, e0).unwrap()
    }

    #[test]
    fn exact_matches_closed_evaluation() {
        let s = spec(2.0, 0.5, 1.25);
        let z = partition_exact(&s, 1.0);
        let expected = (-1.25_f64).exp()
            / ((1.0 - (-2.0_f64).exp()) * (1.0 - (-0.5_f64).exp()));
        assert!(rel_diff(z, expected) < 1e-14);
        assert!((z - 0.8421).abs() < 5e-4);

        let s = spec(4.0, 4.0, 4.0);
        let z = partition_exact(&s, 0.5);
        let expected = (-2.0_f64).exp() / (1.0 - (-2.0_f64).exp()).powi(2);
        assert!(rel_diff(z, expected) < 1e-14);
        assert!((z - 0.18102).abs() < 5e-5);
    }

    #[test]
    fn exact_ground_state_dominates_at_low_temperature() {
        let s = spec(1.0, 1.0, 1.0);
        for beta in [20.0, 40.0] {
            assert!(rel_diff(partition_exact(&s, beta), (-beta).exp()) < 1e-8);
        }
    }

    #[test]
    fn bruteforce_matches_exact() {
        let s = spec(2.0, 0.5, 1.25);
        let bf = partition_bruteforce(&s, 1.0, 200);
        assert!(rel_diff(bf.value, partition_exact(&s, 1.0)) < 1e-12);

        let s = spec(1.0, 1.0, 0.0);
        let bf = partition_bruteforce(&s, 10.0, 5);
        let expected = 1.0 / (1.0 - (-10.0_f64).exp()).powi(2);
        assert!(rel_diff(bf.value, expected) < 1e-12);
        assert!((expected - 1.0000908).abs() < 1e-6);
    }

    #[test]
    fn bruteforce_doubling_stays_within_tail_bound() {
        let s = spec(2.0, 0.5, 1.25);
        for n_max in [5, 10, 20] {
            let a = partition_bruteforce(&s, 0.7, n_max);
            let b = partition_bruteforce(&s, 0.7, 2 * n_max);
            assert!((b.value - a.value).abs() < a.tail_bound);
        }
    }

    #[test]
    fn bruteforce_cutoff_too_small() {
        let s = spec(0.1, 0.1, 0.0);
        let r = partition_bruteforce_checked(&s, 0.01, 3, 1e-12);
        assert!(matches!(r, Err(EngineError::CutoffTooSmall { .. })));
    }

    #[test]
    fn paper_commutative_value() {
        let z = partition_paper(&SpaceConfig::Commutative, 4.0, 2.0, 0.25, 0.5).unwrap();
        let expected = (-0.5 * 4.0 * 2.0_f64.cosh()).exp() / (0.25 * 16.0);
        assert!(rel_diff(z, expected) < 1e-14);
        assert!((z - 1.349e-4).abs() < 1e-6);
    }

    #[test]
    fn paper_nc_value() {
        let z = partition_paper(&SpaceConfig::Nc { theta: 1.0 }, 4.0, 0.0, 0.25, 0.5).unwrap();
        let expected = -4.0 / (0.25 * 1.0 * (0.25 - 64.0));
        assert!(rel_diff(z, expected) < 1e-14);
        assert!((z - 0.25098).abs() < 5e-6);
    }

    #[test]
    fn paper_nc_rejects_theta_zero() {
        let r = partition_paper(&SpaceConfig::Nc { theta: 0.0 }, 4.0, 0.0, 0.25, 0.5);
        assert!(matches!(r, Err(EngineError::DomainConditionViolated { .. })));
    }

    #[test]
    fn paper_nc_nonpositive_when_stiffness_dominates() {
        let r = partition_paper(&SpaceConfig::Nc { theta: 1.0 }, 0.1, 0.0, 1.0, 0.5);
        assert!(matches!(r, Err(EngineError::NonPositivePartition { .. })));
    }

    #[test]
    fn paper_matches_exact_at_high_temperature() {
        // beta * omega * e^zeta = 0.01
        let omega = 1.0;
        let zeta = 0.0;
        let beta = 0.01;
        let z_paper = partition_paper(&SpaceConfig::Commutative, omega, zeta, 0.25, beta).unwrap();
        let s = spec(omega, omega, omega);
        let z_exact = partition_exact(&s, beta);
        assert!(rel_diff(z_paper, z_exact) < 1e-2);
    }

    #[test]
    fn gnc_paper_reduces_to_commutative() {
        let z_gnc = partition_paper(
            &SpaceConfig::Gnc { gamma: 0.0, xi: 0.0 },
            4.0,
            2.0,
            0.25,
            0.5,
        )
        .unwrap();
        let z_comm = partition_paper(&SpaceConfig::Commutative, 4.0, 2.0, 0.25, 0.5).unwrap();
        assert!(rel_diff(z_gnc, z_comm) < 1e-12);
    }

    #[test]
    fn internal_energy_exact_limits() {
        let m = PartitionModel::ExactSpectral(spec(1.0, 1.0, 1.0));
        assert!((m.internal_energy(50.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn internal_energy_paper_commutative() {
        let m = PartitionModel::PaperClosedForm {
            space: SpaceConfig::Commutative,
            omega: 4.0,
            zeta: 2.0,
            stiffness: 0.25,
        };
        let u = m.internal_energy(0.5).unwrap();
        assert!(rel_diff(u, 4.0 * 2.0_f64.cosh() + 4.0) < 1e-14);
        assert!((u - 19.0488).abs() < 1e-3);
    }

    #[test]
    fn mode_mean_energy_values() {
        assert!(rel_diff(mode_mean_energy(2.0, 1.0), 1.0 / 1.0_f64.tanh()) < 1e-14);
        assert!((mode_mean_energy(2.0, 1.0) - 1.313035).abs() < 1e-6);
        assert!((mode_mean_energy(4.0, 0.5) - 2.626071).abs() < 1e-6);
        // beta -> inf: zero-point energy f/2
        assert!((mode_mean_energy(3.0, 200.0) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn entropy_vanishes_at_zero_temperature() {
        let m = PartitionModel::ExactSpectral(spec(2.0, 0.5, 1.25));
        assert!(m.entropy(200.0).unwrap().abs() < 1e-12);
        assert!(m.entropy(0.5).unwrap() > m.entropy(1.0).unwrap());
    }

    #[test]
    fn entropy_composition() {
        let m = PartitionModel::ExactSpectral(spec(2.0, 0.5, 1.25));
        let z = partition_exact(&spec(2.0, 0.5, 1.25), 1.0);
        let u = m.internal_energy(1.0).unwrap();
        assert!(rel_diff(m.entropy(1.0).unwrap(), z.ln() + u) < 1e-12);
    }

    proptest! {
        // exact vs brute force within the reported tail bound
        #[test]
        fn oracle_agreement(
            f1 in 0.2_f64..6.0,
            ratio in 0.05_f64..1.0,
            e0 in 0.0_f64..5.0,
            beta in 0.2_f64..5.0,
        ) {
            let s = spec(f1, f1 * ratio, e0);
            let bf = partition_bruteforce(&s, beta, 300);
            let z = partition_exact(&s, beta);
            prop_assert!((z - bf.value).abs() <= bf.tail_bound.max(1e-13 * z));
        }

        // U = F + T·S, asserted tight since all three come from ln Z
        #[test]
        fn thermodynamic_identity(
            f1 in 0.2_f64..6.0,
            ratio in 0.05_f64..1.0,
            e0 in 0.0_f64..5.0,
            beta in 0.2_f64..5.0,
        ) {
            let m = PartitionModel::ExactSpectral(spec(f1, f1 * ratio, e0));
            let u = m.internal_energy(beta).unwrap();
            let f = m.free_energy(beta).unwrap();
            let s = m.entropy(beta).unwrap();
            prop_assert!((u - (f + s / beta)).abs() <= 1e-12 * u.abs().max(1.0));
        }

        // entropy strictly decreasing in beta for exact-spectral models
        #[test]
        fn entropy_monotone(
            f1 in 0.2_f64..6.0,
            ratio in 0.05_f64..1.0,
            beta in 0.2_f64..5.0,
            bump in 0.05_f64..2.0,
        ) {
            let m = PartitionModel::ExactSpectral(spec(f1, f1 * ratio, 0.0));
            prop_assert!(m.entropy(beta).unwrap() > m.entropy(beta + bump).unwrap());
        }
    }
}
