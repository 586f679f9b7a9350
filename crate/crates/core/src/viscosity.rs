//! Density-dependent viscosity pairs `(mu, lambda)` and the structural
//! assumptions they must satisfy for the energy machinery to close.
//!
//! The second coefficient is always derived from the first through
//! `lambda(rho) = 2 (rho mu'(rho) - mu(rho))`, so a law is described by
//! `mu` alone (plus its derivatives) together with the parameters `nu`
//! and `gamma`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson;

/// Relative step for finite-difference derivatives of `lambda` when no
/// second derivative of `mu` is available.
pub const LAMBDA_FD_RELATIVE_STEP: f64 = 1e-6;

/// Tolerance on the derivative-consistency audit of the algebraic relation
/// between `mu` and `lambda`.
pub const LM_CONSISTENCY_TOL: f64 = 1e-5;

/// Closed-form viscosity profiles selectable by name, plus an escape hatch
/// for tests.
#[derive(Clone)]
pub enum MuProfile {
    /// `mu(rho) = rho`
    Linear,
    /// `mu(rho) = rho^beta`
    Power { beta: f64 },
    /// `mu(rho) = a + b rho`
    Affine { a: f64, b: f64 },
    /// Arbitrary evaluation rules; `mu_second` may be absent.
    Custom {
        name: String,
        mu: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        mu_prime: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        mu_second: Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>>,
    },
}

impl fmt::Debug for MuProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MuProfile::Linear => write!(f, "linear"),
            MuProfile::Power { beta } => write!(f, "power:{beta}"),
            MuProfile::Affine { a, b } => write!(f, "affine:{a},{b}"),
            MuProfile::Custom { name, .. } => write!(f, "custom:{name}"),
        }
    }
}

impl FromStr for MuProfile {
    type Err = Error;

    /// Parses the registry names used in configuration files:
    /// `linear`, `power:<beta>`, `affine:<a>,<b>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "linear" {
            return Ok(MuProfile::Linear);
        }
        if let Some(rest) = s.strip_prefix("power:") {
            let beta: f64 = rest
                .trim()
                .parse()
                .map_err(|_| Error::Parameter(format!("bad power-law exponent in '{s}'")))?;
            return Ok(MuProfile::Power { beta });
        }
        if let Some(rest) = s.strip_prefix("affine:") {
            let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
            if parts.len() != 2 {
                return Err(Error::Parameter(format!(
                    "affine law needs two coefficients, got '{s}'"
                )));
            }
            let a: f64 = parts[0]
                .parse()
                .map_err(|_| Error::Parameter(format!("bad affine coefficient in '{s}'")))?;
            let b: f64 = parts[1]
                .parse()
                .map_err(|_| Error::Parameter(format!("bad affine coefficient in '{s}'")))?;
            return Ok(MuProfile::Affine { a, b });
        }
        Err(Error::Parameter(format!("unknown viscosity law '{s}'")))
    }
}

/// A density-dependent viscosity law together with the structural
/// parameters `nu` and `gamma` it is audited against.
#[derive(Debug, Clone)]
pub struct ViscosityLaw {
    pub profile: MuProfile,
    /// Structural parameter, admissible range `[1/(3 gamma - 2), 1)`.
    pub nu: f64,
    /// Adiabatic exponent shared with the gas law.
    pub gamma: f64,
}

impl ViscosityLaw {
    pub fn new(profile: MuProfile, nu: f64, gamma: f64) -> Result<Self> {
        if !(gamma > 1.0) {
            return Err(Error::Parameter(format!("gamma must exceed 1, got {gamma}")));
        }
        if !(nu > 0.0 && nu < 1.0) {
            return Err(Error::Parameter(format!("nu must lie in (0, 1), got {nu}")));
        }
        Ok(Self { profile, nu, gamma })
    }

    /// Builds a law from its registry name (`linear`, `power:b`, `affine:a,b`).
    pub fn from_name(name: &str, nu: f64, gamma: f64) -> Result<Self> {
        Self::new(name.parse()?, nu, gamma)
    }

    pub fn mu(&self, rho: f64) -> f64 {
        match &self.profile {
            MuProfile::Linear => rho,
            MuProfile::Power { beta } => rho.powf(*beta),
            MuProfile::Affine { a, b } => a + b * rho,
            MuProfile::Custom { mu, .. } => mu(rho),
        }
    }

    pub fn mu_prime(&self, rho: f64) -> f64 {
        match &self.profile {
            MuProfile::Linear => 1.0,
            MuProfile::Power { beta } => beta * rho.powf(beta - 1.0),
            MuProfile::Affine { b, .. } => *b,
            MuProfile::Custom { mu_prime, .. } => mu_prime(rho),
        }
    }

    pub fn mu_second(&self, rho: f64) -> Option<f64> {
        match &self.profile {
            MuProfile::Linear => Some(0.0),
            MuProfile::Power { beta } => Some(beta * (beta - 1.0) * rho.powf(beta - 2.0)),
            MuProfile::Affine { .. } => Some(0.0),
            MuProfile::Custom { mu_second, .. } => mu_second.as_ref().map(|f| f(rho)),
        }
    }

    pub fn lambda(&self, rho: f64) -> f64 {
        2.0 * (rho * self.mu_prime(rho) - self.mu(rho))
    }

    /// `lambda'(rho)`, analytically equal to `2 rho mu''(rho)`.
    ///
    /// Falls back to a centered difference of [`lambda_of`] with relative
    /// step `LAMBDA_FD_RELATIVE_STEP` when `mu''` is unavailable, so the
    /// derivative bound stays checkable for laws given only to first order.
    pub fn lambda_prime(&self, rho: f64) -> f64 {
        match self.mu_second(rho) {
            Some(mu2) => 2.0 * rho * mu2,
            None => self.lambda_prime_fd(rho),
        }
    }

    /// Centered finite difference of `lambda`; one-sided next to vacuum.
    pub fn lambda_prime_fd(&self, rho: f64) -> f64 {
        let h = LAMBDA_FD_RELATIVE_STEP * rho.abs().max(1.0);
        if rho >= h {
            (self.lambda(rho + h) - self.lambda(rho - h)) / (2.0 * h)
        } else {
            (self.lambda(rho + h) - self.lambda(rho)) / h
        }
    }

    /// Admissible range of `nu` for this `gamma`.
    pub fn nu_range(&self) -> (f64, f64) {
        (1.0 / (3.0 * self.gamma - 2.0), 1.0)
    }
}

/// Evaluates `lambda(rho) = 2 (rho mu'(rho) - mu(rho))`.
pub fn lambda_of(law: &ViscosityLaw, rho: f64) -> Result<f64> {
    if !(rho >= 0.0) {
        return Err(Error::Domain(format!("lambda_of needs rho >= 0, got {rho}")));
    }
    let mu = law.mu(rho);
    let mu_p = law.mu_prime(rho);
    if !mu.is_finite() || !mu_p.is_finite() {
        return Err(Error::Evaluation(format!(
            "mu or mu' non-finite at rho = {rho}: mu = {mu}, mu' = {mu_p}"
        )));
    }
    Ok(2.0 * (rho * mu_p - mu))
}

/// `s(rho) = int_{rho_ref}^{rho} mu'(sigma)/sigma d sigma`, with `s(rho_ref) = 0`.
///
/// The integrand is singular at vacuum for `mu'` bounded below, hence the
/// positivity requirement on both endpoints.
pub fn s_of(law: &ViscosityLaw, rho: f64, rho_ref: f64) -> Result<f64> {
    if !(rho > 0.0) || !(rho_ref > 0.0) {
        return Err(Error::Domain(format!(
            "s(rho) needs positive densities, got rho = {rho}, rho_ref = {rho_ref}"
        )));
    }
    if rho == rho_ref {
        return Ok(0.0);
    }
    let f = |sigma: f64| law.mu_prime(sigma) / sigma;
    Ok(adaptive_simpson(&f, rho_ref, rho, 1e-12))
}

/// Outcome of a single structural check.
#[derive(Debug, Clone, Copy)]
pub struct CheckOutcome {
    pub pass: bool,
    /// Signed distance to violation; negative exactly when the check fails.
    pub margin: f64,
    /// Density at which the worst margin was attained.
    pub location: f64,
}

impl CheckOutcome {
    fn from_margin(margin: f64, location: f64) -> Self {
        CheckOutcome {
            pass: margin >= 0.0,
            margin,
            location,
        }
    }
}

/// Structural audit of a viscosity law over a density sample set.
#[derive(Debug, Clone)]
pub struct AssumptionReport {
    /// Derivative-consistency audit of the mu/lambda relation: analytic
    /// `lambda' = 2 rho mu''` against a centered difference of `lambda`.
    pub lm: CheckOutcome,
    /// `mu'(rho) >= nu` and `mu(0) >= 0`.
    pub ass1: CheckOutcome,
    /// `|lambda'(rho)| <= mu'(rho) / nu`.
    pub ass2: CheckOutcome,
    /// `nu mu <= 2 mu + 3 lambda <= mu / nu`.
    pub ass3: CheckOutcome,
    /// Growth condition at large density; only applies for `gamma >= 3`.
    pub ass4: Option<CheckOutcome>,
    /// Fitted constant of the two-branch growth bound on `mu`.
    pub c1: f64,
    /// Fitted constant of `|lambda| <= c2 mu`.
    pub c2: f64,
    /// Threshold used by the growth proxy.
    pub theta: f64,
}

impl AssumptionReport {
    pub fn all_pass(&self) -> bool {
        self.lm.pass
            && self.ass1.pass
            && self.ass2.pass
            && self.ass3.pass
            && self.ass4.map_or(true, |c| c.pass)
    }
}

/// Default density sample set: logarithmically spaced on `[1e-6, rho_max]`
/// plus the exact branch point `rho = 1`.
pub fn default_rho_samples(rho_max: f64) -> Vec<f64> {
    let n = 400;
    let lo: f64 = 1e-6;
    let mut samples: Vec<f64> = (0..n)
        .map(|k| lo * (rho_max / lo).powf(k as f64 / (n - 1) as f64))
        .collect();
    samples.push(1.0);
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    samples.dedup();
    samples
}

/// Default proxy threshold for the large-density growth check.
pub const DEFAULT_THETA: f64 = 0.01;

/// Audits the structural assumptions at every sampled density and fits the
/// growth constants.
///
/// The large-density condition is a liminf statement, which is not finitely
/// checkable; it is replaced by the proxy `min of mu/rho^(gamma/3+theta)`
/// over the upper half of the sample range, and the report records the
/// threshold used.
pub fn check_assumptions(
    law: &ViscosityLaw,
    rho_samples: &[f64],
    theta: f64,
) -> Result<AssumptionReport> {
    if rho_samples.is_empty() {
        return Err(Error::Config("empty density sample set".into()));
    }
    let (nu_lo, nu_hi) = law.nu_range();
    if !(law.nu >= nu_lo && law.nu < nu_hi) {
        return Err(Error::Parameter(format!(
            "nu = {} outside [{nu_lo}, {nu_hi}) for gamma = {}",
            law.nu, law.gamma
        )));
    }
    if !(theta > 0.0) {
        return Err(Error::Parameter(format!("theta must be positive, got {theta}")));
    }
    let nu = law.nu;
    let gamma = law.gamma;
    let rho_max = rho_samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max);

    let mut lm_margin = LM_CONSISTENCY_TOL;
    let mut lm_loc = rho_samples[0];
    let mut ass1_margin = law.mu(0.0);
    let mut ass1_loc = 0.0;
    let mut ass2_margin = f64::INFINITY;
    let mut ass2_loc = rho_samples[0];
    let mut ass3_margin = f64::INFINITY;
    let mut ass3_loc = rho_samples[0];
    let mut ass4_margin = f64::INFINITY;
    let mut ass4_loc = rho_samples[0];
    let mut c1_sup = 0.0f64;
    let mut c2_sup = 0.0f64;

    for &rho in rho_samples {
        if !(rho >= 0.0) {
            return Err(Error::Domain(format!("negative density sample {rho}")));
        }
        if rho == 0.0 {
            continue;
        }
        let mu = law.mu(rho);
        let mu_p = law.mu_prime(rho);
        let lambda = lambda_of(law, rho)?;
        if !mu.is_finite() || !mu_p.is_finite() || !lambda.is_finite() {
            return Err(Error::Evaluation(format!("non-finite law values at rho = {rho}")));
        }

        // Derivative consistency of the algebraic relation, when mu'' exists.
        if law.mu_second(rho).is_some() {
            let analytic = law.lambda_prime(rho);
            let fd = law.lambda_prime_fd(rho);
            let mismatch = (analytic - fd).abs() / (1.0 + fd.abs());
            if LM_CONSISTENCY_TOL - mismatch < lm_margin {
                lm_margin = LM_CONSISTENCY_TOL - mismatch;
                lm_loc = rho;
            }
        }

        let m1 = mu_p - nu;
        if m1 < ass1_margin {
            ass1_margin = m1;
            ass1_loc = rho;
        }

        let m2 = mu_p / nu - law.lambda_prime(rho).abs();
        if m2 < ass2_margin {
            ass2_margin = m2;
            ass2_loc = rho;
        }

        let mid = 2.0 * mu + 3.0 * lambda;
        let m3 = (mid - nu * mu).min(mu / nu - mid);
        if m3 < ass3_margin {
            ass3_margin = m3;
            ass3_loc = rho;
        }

        if gamma >= 3.0 && rho >= 0.5 * rho_max {
            let proxy = mu / rho.powf(gamma / 3.0 + theta);
            if proxy < ass4_margin {
                ass4_margin = proxy;
                ass4_loc = rho;
            }
        }

        let exponent = if rho <= 1.0 {
            2.0 / 3.0 + nu / 3.0
        } else {
            2.0 / 3.0 + 1.0 / (3.0 * nu)
        };
        c1_sup = c1_sup.max(mu / rho.powf(exponent));
        if mu > 0.0 {
            c2_sup = c2_sup.max(lambda.abs() / mu);
        }
    }

    let ass4 = if gamma >= 3.0 {
        Some(CheckOutcome {
            pass: ass4_margin > 0.0,
            margin: ass4_margin,
            location: ass4_loc,
        })
    } else {
        None
    };

    Ok(AssumptionReport {
        lm: CheckOutcome::from_margin(lm_margin, lm_loc),
        ass1: CheckOutcome::from_margin(ass1_margin, ass1_loc),
        ass2: CheckOutcome::from_margin(ass2_margin, ass2_loc),
        ass3: CheckOutcome::from_margin(ass3_margin, ass3_loc),
        ass4,
        // Suprema inflated by 1% to stay robust to sampling gaps.
        c1: c1_sup * 1.01,
        c2: c2_sup * 1.01,
        theta,
    })
}
