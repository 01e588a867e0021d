//! Decoherence functions of the two environment models.
//!
//! Dephasing is expressed in reduced time `tau = (n_V - n_H) t`; the
//! refraction indices never appear as parameters.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{adaptive_simpson, SimpsonOptions};

/// Two-peak Gaussian frequency spectrum of the dephasing environment.
///
/// `theta` weights the peaks as `cos^2 theta` (at `omega1`) and
/// `sin^2 theta` (at `omega2`); both peaks share the width `sigma`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DephasingSpec {
    pub theta: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub sigma: f64,
}

impl DephasingSpec {
    pub fn new(theta: f64, omega1: f64, omega2: f64, sigma: f64) -> Result<Self> {
        let spec = Self { theta, omega1, omega2, sigma };
        spec.validate()?;
        Ok(spec)
    }

    /// Peaks at `0` and `delta_omega`.
    pub fn with_separation(theta: f64, delta_omega: f64, sigma: f64) -> Result<Self> {
        Self::new(theta, 0.0, delta_omega, sigma)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.theta, self.omega1, self.omega2, self.sigma].iter().all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParameter("dephasing parameters must be finite".into()));
        }
        if !(-1e-12..=FRAC_PI_2 + 1e-12).contains(&self.theta) {
            return Err(Error::InvalidParameter(format!("theta = {} outside [0, pi/2]", self.theta)));
        }
        if self.omega2 <= self.omega1 {
            return Err(Error::InvalidParameter(format!(
                "omega2 = {} must exceed omega1 = {}",
                self.omega2, self.omega1
            )));
        }
        if self.sigma <= 0.0 {
            return Err(Error::InvalidParameter(format!("sigma = {} must be positive", self.sigma)));
        }
        Ok(())
    }

    pub fn delta_omega(&self) -> f64 {
        self.omega2 - self.omega1
    }

    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        Self::new(theta, self.omega1, self.omega2, self.sigma)
    }

    /// Probability density `|f(omega)|^2`.
    pub fn spectral_density(&self, omega: f64) -> f64 {
        let norm = 1.0 / ((2.0 * PI).sqrt() * self.sigma);
        let (s, c) = self.theta.sin_cos();
        let peak = |center: f64| (-(omega - center).powi(2) / (2.0 * self.sigma * self.sigma)).exp();
        norm * (c * c * peak(self.omega1) + s * s * peak(self.omega2))
    }
}

/// Resonant Lorentzian reservoir with spectral width `gamma` and coupling
/// `gamma0` (inverse correlation time).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LorentzSpec {
    pub gamma0: f64,
    pub gamma: f64,
}

impl LorentzSpec {
    pub fn new(gamma0: f64, gamma: f64) -> Result<Self> {
        let spec = Self { gamma0, gamma };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma0 > 0.0 && self.gamma0.is_finite()) {
            return Err(Error::InvalidParameter(format!("gamma0 = {} must be positive", self.gamma0)));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!("gamma = {} must be positive", self.gamma)));
        }
        Ok(())
    }

    /// `Gamma / gamma0`.
    pub fn ratio(&self) -> f64 {
        self.gamma / self.gamma0
    }

    fn discriminant(&self) -> f64 {
        self.gamma * self.gamma - 2.0 * self.gamma0 * self.gamma
    }

    /// `sqrt(|Gamma^2 - 2 gamma0 Gamma|)`.
    pub fn epsilon(&self) -> f64 {
        self.discriminant().abs().sqrt()
    }

    fn is_critical(&self) -> bool {
        self.discriminant().abs() < 1e-12 * self.gamma0 * self.gamma0
    }

    /// `2 pi / epsilon`, the control time at which `chi` reaches its first
    /// revival extremum.
    pub fn control_time(&self) -> Result<f64> {
        if self.is_critical() || self.gamma >= 2.0 * self.gamma0 {
            return Err(Error::InvalidParameter(format!(
                "control time 2pi/epsilon needs Gamma/gamma0 < 2, got {}",
                self.ratio()
            )));
        }
        Ok(2.0 * PI / self.epsilon())
    }

    /// Closed-form backflow `exp(-pi Gamma / epsilon)` at `t_c = 2 pi / epsilon`.
    pub fn revival_amplitude(&self) -> Result<f64> {
        self.control_time()?;
        Ok((-PI * self.gamma / self.epsilon()).exp())
    }
}

/// `kappa(tau) = exp(-sigma^2 tau^2 / 2) (cos^2 theta e^{i omega1 tau} + sin^2 theta e^{i omega2 tau})`.
pub fn kappa_complex(spec: &DephasingSpec, tau: f64) -> Complex64 {
    let envelope = (-0.5 * spec.sigma * spec.sigma * tau * tau).exp();
    let (s, c) = spec.theta.sin_cos();
    let phase = |w: f64| Complex64::from_polar(1.0, w * tau);
    (phase(spec.omega1) * (c * c) + phase(spec.omega2) * (s * s)) * envelope
}

/// Closed-form modulus of [`kappa_complex`].
pub fn kappa_abs(spec: &DephasingSpec, tau: f64) -> f64 {
    let envelope = (-0.5 * spec.sigma * spec.sigma * tau * tau).exp();
    let s2 = (2.0 * spec.theta).sin();
    let h = (0.5 * spec.delta_omega() * tau).sin();
    envelope * (1.0 - s2 * s2 * h * h).max(0.0).sqrt()
}

/// `kappa` by direct quadrature of `int |f(omega)|^2 e^{i omega tau} d omega`
/// over `[omega1 - 10 sigma, omega2 + 10 sigma]`.
pub fn kappa_quadrature(spec: &DephasingSpec, tau: f64) -> Result<Complex64> {
    let lo = spec.omega1 - 10.0 * spec.sigma;
    let hi = spec.omega2 + 10.0 * spec.sigma;
    let integrand = |w: f64| Complex64::from_polar(spec.spectral_density(w), w * tau);
    Ok(adaptive_simpson(integrand, lo, hi, SimpsonOptions::default())?.value)
}

/// Lorentzian decoherence function.
///
/// Uses the trigonometric form for `Gamma < 2 gamma0`, its hyperbolic
/// continuation for `Gamma > 2 gamma0`, and the limit
/// `e^{-Gamma t/2} (1 + Gamma t / 2)` at the critical point.
pub fn chi(spec: &LorentzSpec, t: f64) -> f64 {
    let g = spec.gamma;
    let decay = (-0.5 * g * t).exp();
    if spec.is_critical() {
        return decay * (1.0 + 0.5 * g * t);
    }
    let eps = spec.epsilon();
    let x = 0.5 * eps * t;
    if spec.discriminant() < 0.0 {
        decay * (x.cos() + g / eps * x.sin())
    } else {
        decay * (x.cosh() + g / eps * x.sinh())
    }
}

/// `delta = |cos 2 theta| exp(-(pi sigma / delta_omega)^2 / 2)`, the value
/// of `|kappa|` at `tau = pi / delta_omega`.
pub fn backflow_offset(spec: &DephasingSpec) -> f64 {
    let r = PI * spec.sigma / spec.delta_omega();
    (2.0 * spec.theta).cos().abs() * (-0.5 * r * r).exp()
}

fn check_window(spec_dw: f64, tau_c: f64, open_lower: bool) -> Result<()> {
    let lower = PI / spec_dw;
    let upper = 2.0 * PI / spec_dw;
    // admits control times rounded to five significant digits
    let slack = 1e-5 * upper;
    let below = if open_lower { tau_c <= lower } else { tau_c < lower - slack };
    if !tau_c.is_finite() || below || tau_c > upper + slack {
        return Err(Error::OutsideValidityWindow { tau_c, lower, upper });
    }
    Ok(())
}

/// Closed-form non-Markovianity `max(0, |kappa(tau_c)| - delta)` for
/// `tau_c` in `[pi/delta_omega, 2 pi/delta_omega]`.
pub fn analytic_blp_dephasing(spec: &DephasingSpec, tau_c: f64) -> Result<f64> {
    check_window(spec.delta_omega(), tau_c, false)?;
    Ok((kappa_abs(spec, tau_c) - backflow_offset(spec)).max(0.0))
}

/// Angles `(theta1, theta2)` where the closed-form non-Markovianity at
/// `tau_c` switches between zero and positive.
///
/// They are the roots `tan^2 theta = p -/+ q` of
/// `(u - v) x^2 - 2 (u + v cos(dw tau_c)) x + (u - v) = 0` with
/// `u = e^{sigma^2 tau_c^2}` and `v = e^{(pi sigma / dw)^2}`.
pub fn transition_thetas(delta_omega: f64, sigma: f64, tau_c: f64) -> Result<(f64, f64)> {
    if !(delta_omega > 0.0 && sigma > 0.0) {
        return Err(Error::InvalidParameter("delta_omega and sigma must be positive".into()));
    }
    check_window(delta_omega, tau_c, true)?;
    let u = (sigma * sigma * tau_c * tau_c).exp();
    let r = PI * sigma / delta_omega;
    let v = (r * r).exp();
    if u <= v {
        return Err(Error::NoTransition(format!("u = {u} does not exceed v = {v}")));
    }
    let phase = delta_omega * tau_c;
    let (sin, cos) = phase.sin_cos();
    let disc = 2.0 * u * v * (1.0 + cos) - v * v * sin * sin;
    if disc < 0.0 {
        return Err(Error::NoTransition(format!("negative discriminant {disc:e}")));
    }
    let p = (u + v * cos) / (u - v);
    let q = disc.sqrt() / (u - v);
    if p - q < 0.0 {
        return Err(Error::NoTransition(format!("p - q = {} is negative", p - q)));
    }
    Ok(((p - q).sqrt().atan(), (p + q).sqrt().atan()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn fig2(theta: f64) -> DephasingSpec {
        DephasingSpec::with_separation(theta, 10.0, 1.0).unwrap()
    }

    #[test]
    fn kappa_normalization_and_single_peak() {
        let spec = DephasingSpec::new(0.0, 2.5, 7.0, 0.8).unwrap();
        assert_eq!(kappa_complex(&spec, 0.0), Complex64::new(1.0, 0.0));
        for &tau in &[0.1f64, 0.7, 2.3] {
            let expected = Complex64::from_polar((-0.5 * 0.64 * tau * tau).exp(), 2.5 * tau);
            assert!((kappa_complex(&spec, tau) - expected).norm() < 1e-15);
        }
    }

    #[test]
    fn phase_opposition_cancels() {
        let spec = fig2(FRAC_PI_4);
        assert!(kappa_complex(&spec, PI / 10.0).norm() < 1e-15);
        assert!(kappa_abs(&spec, PI / 10.0) < 1e-16);
        assert_eq!(kappa_abs(&spec, 0.0), 1.0);
    }

    #[test]
    fn kappa_abs_at_full_period() {
        let tau = 2.0 * PI / 10.0;
        let expected = (-0.5 * tau * tau).exp();
        assert!((kappa_abs(&fig2(FRAC_PI_4), tau) - expected).abs() < 1e-15);
        assert!((expected - 0.820_869).abs() < 5e-7);
    }

    #[test]
    fn quadrature_at_zero_is_normalized() {
        let k = kappa_quadrature(&fig2(0.3), 0.0).unwrap();
        assert!((k - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn spec_validation() {
        assert!(DephasingSpec::new(2.0, 0.0, 10.0, 1.0).is_err());
        assert!(DephasingSpec::new(0.5, 10.0, 0.0, 1.0).is_err());
        assert!(DephasingSpec::new(0.5, 0.0, 10.0, 0.0).is_err());
        assert!(LorentzSpec::new(0.0, 1.0).is_err());
        assert!(LorentzSpec::new(1.0, -1.0).is_err());
        assert!(LorentzSpec::new(1.0, 2.0).unwrap().control_time().is_err());
    }

    #[test]
    fn chi_at_zero_and_revival() {
        let spec = LorentzSpec::new(1.0, 0.1).unwrap();
        assert_eq!(chi(&spec, 0.0), 1.0);
        assert!((spec.epsilon() - 0.19f64.sqrt()).abs() < 1e-15);
        let tc = spec.control_time().unwrap();
        let expected = -(-PI * 0.1 / spec.epsilon()).exp();
        assert!((chi(&spec, tc) - expected).abs() < 1e-14);
        assert!((expected + 0.486_40).abs() < 5e-6);
    }

    #[test]
    fn chi_critical_limit_matches_nearby_branches() {
        let critical = LorentzSpec::new(1.0, 2.0).unwrap();
        // |Gamma^2 - 2 gamma0 Gamma| = 1e-10 on either side, epsilon = 1e-5
        let below = LorentzSpec::new(1.0, 2.0 - 5e-11).unwrap();
        let above = LorentzSpec::new(1.0, 2.0 + 5e-11).unwrap();
        assert!((below.epsilon() - 1e-5).abs() < 1e-9);
        for &t in &[0.0f64, 0.5, 3.0, 10.0] {
            let limit = (-t).exp() * (1.0 + t);
            assert!((chi(&critical, t) - limit).abs() < 1e-15);
            for spec in [below, above] {
                assert!((chi(&spec, t) - limit).abs() <= 1e-6 * limit);
            }
        }
    }

    #[test]
    fn chi_markovian_branch_is_monotone() {
        let spec = LorentzSpec::new(1.0, 5.0).unwrap();
        let mut prev = chi(&spec, 0.0);
        for k in 1..200 {
            let v = chi(&spec, k as f64 * 0.05);
            assert!(v < prev && v > 0.0);
            prev = v;
        }
    }

    #[test]
    fn analytic_blp_window_and_clamp() {
        let spec = fig2(FRAC_PI_4);
        let tc = 2.0 * PI / 10.0;
        assert!((analytic_blp_dephasing(&spec, tc).unwrap() - kappa_abs(&spec, tc)).abs() < 1e-15);
        assert!(matches!(
            analytic_blp_dephasing(&spec, 0.2),
            Err(Error::OutsideValidityWindow { .. })
        ));
        for &tc in &[PI / 10.0, 0.4, 0.5, 2.0 * PI / 10.0] {
            assert_eq!(analytic_blp_dephasing(&fig2(0.0), tc).unwrap(), 0.0);
        }
    }

    #[test]
    fn transition_at_full_period_is_symmetric() {
        let tc = 2.0 * PI / 10.0;
        let (t1, t2) = transition_thetas(10.0, 1.0, tc).unwrap();
        assert!((t1 + t2 - FRAC_PI_2).abs() < 1e-12);
        let u = (tc * tc).exp();
        let v = (PI / 10.0f64).powi(2).exp();
        let tan_sq = (u.sqrt() - v.sqrt()) / (u.sqrt() + v.sqrt());
        assert!((t1.tan().powi(2) - tan_sq).abs() < 1e-12);
        for theta in [t1, t2] {
            let spec = fig2(theta);
            assert!((kappa_abs(&spec, tc) - backflow_offset(&spec)).abs() < 1e-9);
        }
    }

    #[test]
    fn transition_rejects_first_minimum() {
        assert!(transition_thetas(10.0, 1.0, PI / 10.0).is_err());
        assert!(transition_thetas(10.0, 1.0, 0.1).is_err());
    }
}
