//! Dimensionless model parameters and the dimensional-to-dimensionless map.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dimensionless parameters of the plate/potential system.
///
/// `beta` is the bending rigidity, `tau` the stretching coefficient, `sigma`
/// the Poisson ratio, `eps` the device aspect ratio (0 selects the small gap
/// model), `lambda` the voltage parameter, and `kappa` the boundary curvature
/// of `∂D` (1 for the unit disc). `kappa` is a scalar; it is threaded through
/// every boundary-condition path so a non-constant curvature stays a local
/// extension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params<T> {
    pub beta: T,
    pub tau: T,
    pub sigma: T,
    pub eps: T,
    pub lambda: T,
    pub kappa: T,
}

impl<T: Scalar> Default for Params<T> {
    fn default() -> Self {
        Self {
            beta: T::one(),
            tau: T::zero(),
            sigma: T::zero(),
            eps: T::of(0.1),
            lambda: T::zero(),
            kappa: T::one(),
        }
    }
}

impl<T: Scalar> Params<T> {
    pub fn new(beta: T, tau: T, sigma: T, eps: T, lambda: T, kappa: T) -> Result<Self> {
        let p = Self {
            beta,
            tau,
            sigma,
            eps,
            lambda,
            kappa,
        };
        let violations = p.validate();
        if violations.is_empty() {
            Ok(p)
        } else {
            Err(Error::InvalidParameter(violations.join("; ")))
        }
    }

    /// Range report: one entry per violated constraint, empty iff valid.
    pub fn validate(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !(self.beta > T::zero()) {
            v.push("beta <= 0".to_string());
        }
        if !(self.tau >= T::zero()) {
            v.push("tau < 0".to_string());
        }
        // sigma = 1 is admitted: it switches the Steklov row off and gives
        // the Navier conditions used by the closed-form oracles.
        if !(self.sigma > -T::one() && self.sigma <= T::one()) {
            v.push("sigma not in (-1, 1]".to_string());
        }
        if !(self.eps >= T::zero()) {
            v.push("eps < 0".to_string());
        }
        if !(self.lambda >= T::zero()) {
            v.push("lambda < 0".to_string());
        }
        if !(self.kappa >= T::zero()) {
            v.push("kappa < 0".to_string());
        }
        v
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn with_lambda(mut self, lambda: T) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_eps(mut self, eps: T) -> Self {
        self.eps = eps;
        self
    }

    pub fn with_sigma(mut self, sigma: T) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn with_tau(mut self, tau: T) -> Self {
        self.tau = tau;
        self
    }
}

/// Physical device data feeding [`nondimensionalize`].
#[derive(Debug, Clone, Copy)]
pub struct DimensionalInputs<T> {
    /// Flexural rigidity `B > 0`.
    pub flexural_rigidity: T,
    /// Stress coefficient `T >= 0`.
    pub stress_coefficient: T,
    /// Applied voltage `V > 0`.
    pub voltage: T,
    /// Gap height `H > 0`.
    pub gap_height: T,
    /// Characteristic horizontal length `L > 0`.
    pub length: T,
    /// Vacuum permittivity `eps0 > 0`.
    pub permittivity: T,
}

/// Dimensional-to-dimensionless conversion:
/// `eps = H/L`, `lambda = eps0 V^2 L / (2 eps^3)`, `beta = B`,
/// `tau = T L^2`, `kappa = 1`.
///
/// This is a documented convenience; the solvers treat the dimensionless
/// parameters as primary inputs.
pub fn nondimensionalize<T: Scalar>(d: &DimensionalInputs<T>, sigma: T) -> Result<Params<T>> {
    let mut bad = Vec::new();
    if !(d.gap_height > T::zero()) {
        bad.push("gap height H <= 0");
    }
    if !(d.length > T::zero()) {
        bad.push("length L <= 0");
    }
    if !(d.voltage > T::zero()) {
        bad.push("voltage V <= 0");
    }
    if !(d.permittivity > T::zero()) {
        bad.push("permittivity eps0 <= 0");
    }
    if !(d.flexural_rigidity > T::zero()) {
        bad.push("flexural rigidity B <= 0");
    }
    if !(d.stress_coefficient >= T::zero()) {
        bad.push("stress coefficient T < 0");
    }
    if !(sigma > -T::one() && sigma < T::one()) {
        bad.push("sigma not in (-1, 1)");
    }
    if !bad.is_empty() {
        return Err(Error::InvalidParameter(bad.join("; ")));
    }
    let eps = d.gap_height / d.length;
    let lambda =
        d.permittivity * d.voltage * d.voltage * d.length / (T::of(2.0) * eps.powi(3));
    Params::new(
        d.flexural_rigidity,
        d.stress_coefficient * d.length * d.length,
        sigma,
        eps,
        lambda,
        T::one(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inputs(h: f64, l: f64, v: f64, eps0: f64) -> DimensionalInputs<f64> {
        DimensionalInputs {
            flexural_rigidity: 1.0,
            stress_coefficient: 0.0,
            voltage: v,
            gap_height: h,
            length: l,
            permittivity: eps0,
        }
    }

    #[test]
    fn unit_inputs() {
        let p = nondimensionalize(&inputs(1.0, 1.0, 1.0, 2.0), 0.0).unwrap();
        assert_eq!(p.eps, 1.0);
        assert_eq!(p.lambda, 1.0);
        assert_eq!(p.kappa, 1.0);
    }

    #[test]
    fn hand_computed_lambda() {
        // H = 0.1, L = 1, eps0 = 8.854e-12, V = 100:
        // eps = 0.1, lambda = 8.854e-12 * 1e4 * 1 / (2e-3) = 4.427e-5
        let p = nondimensionalize(&inputs(0.1, 1.0, 100.0, 8.854e-12), 0.0).unwrap();
        assert!((p.eps - 0.1).abs() < 1e-15);
        assert!((p.lambda - 4.427e-5).abs() < 1e-12 * 4.427e-5);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(nondimensionalize(&inputs(0.0, 1.0, 1.0, 1.0), 0.0).is_err());
        assert!(nondimensionalize(&inputs(1.0, 1.0, 1.0, 1.0), 1.5).is_err());
    }

    #[test]
    fn validate_reports_violations() {
        let ok = Params::<f64>::new(1.0, 0.0, 0.0, 0.1, 0.5, 1.0).unwrap();
        assert!(ok.validate().is_empty());

        let mut p = Params::<f64>::default();
        p.sigma = 1.5;
        assert_eq!(p.validate(), vec!["sigma not in (-1, 1]".to_string()]);

        p = Params::default();
        p.beta = 0.0;
        assert_eq!(p.validate(), vec!["beta <= 0".to_string()]);
    }
}
