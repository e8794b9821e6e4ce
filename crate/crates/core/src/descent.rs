//! The certified descent step.
//!
//! Given a point `a` with `p(a) != 0`, normalize to `q(z) = p(z + a) / p(a)`
//! so that `q(0) = 1`, and split
//!
//! ```text
//! q(z) = 1 + a_m z^m + r(z),    r(z) = z^(m+1) (a_(m+1) + ... + a_n z^(n-m-1))
//! ```
//!
//! where `m` is the first index with a nonzero coefficient. Inside the
//! punctured disc `0 < |z| <= rho < min(rho1, rho2, 1)` with
//! `rho1 = |a_m|^(-1/m)` and `rho2 = |a_m| / sum_(j>m) |a_j|` we have
//! `|r(z)| < |a_m z^m| < 1`. Stepping to `w = rho * zeta`, where `zeta` is an
//! `m`-th root of `-conj(a_m) / |a_m|`, makes `a_m w^m = -|a_m| rho^m` real and
//! negative, so `|q(w)| <= 1 - |a_m| rho^m + |r(w)| < 1`.

use std::f64::consts::PI;

use thiserror::Error;

use crate::poly::{ComplexNumber, PolyError, Polynomial};

/// Fraction of the certified radius used by default.
pub const DEFAULT_SHRINK: f64 = 0.9;

/// Allowed deviation of `|u|` from 1 in [`unimodular_mth_root`].
pub const UNIMODULAR_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum DescentError {
    #[error("polynomial vanishes at the step center")]
    ZeroAtCenter,
    #[error("normalized polynomial has no coefficient above the zero threshold")]
    EffectivelyConstant,
    #[error("expected a unimodular number, got modulus {modulus}")]
    NotUnimodular { modulus: f64 },
    #[error("root order must be at least 1")]
    ZeroOrder,
    #[error("shrink factor must lie in (0, 1), got {0}")]
    InvalidShrink(f64),
}

impl From<PolyError> for DescentError {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::ZeroAtCenter => DescentError::ZeroAtCenter,
        }
    }
}

/// How the descent direction is picked among the `m` admissible roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    /// The principal `m`-th root.
    #[default]
    Principal,
    /// Try every `m`-th root and keep the landing with the smallest `|p|`.
    BestOfM,
}

/// One application of the descent lemma at `center`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescentStep {
    pub center: ComplexNumber,
    /// Minor index: first non-constant index with a nonzero normalized coefficient.
    pub m: usize,
    pub a_m: ComplexNumber,
    pub rho1: f64,
    /// `+inf` when the tail past `m` is identically zero.
    pub rho2: f64,
    pub rho: f64,
    pub zeta: ComplexNumber,
    /// `center + rho * zeta`.
    pub landing: ComplexNumber,
    /// Upper bound on `|q(rho * zeta)|`: `1 - |a_m| rho^m + |r(rho * zeta)|`.
    pub predicted_bound: f64,
}

impl DescentStep {
    /// The guaranteed pull toward the origin, `|a_m| rho^m`.
    pub fn pull(&self) -> f64 {
        self.a_m.norm() * self.rho.powi(self.m as i32)
    }

    /// `x = 1 - |a_m| rho^m`. The normalized landing value lies in the open
    /// disc of radius `1 - x` around `x`.
    pub fn remark_center(&self) -> f64 {
        1.0 - self.pull()
    }

    /// `w = rho * zeta`, the step in normalized coordinates.
    pub fn offset(&self) -> ComplexNumber {
        self.zeta * self.rho
    }
}

/// Finds the smallest `m >= 1` with `|q_m|` above the zero threshold of `q`.
pub fn minor_index(q: &Polynomial) -> Result<(usize, ComplexNumber), DescentError> {
    let eps = q.zero_threshold();
    q.coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, c)| c.norm() > eps)
        .map(|(m, &c)| (m, c))
        .ok_or(DescentError::EffectivelyConstant)
}

/// Certified radii `(rho1, rho2)` for the split at minor index `m`.
pub fn step_radii(q: &Polynomial, m: usize, a_m: ComplexNumber) -> (f64, f64) {
    let modulus = a_m.norm();
    let rho1 = modulus.powf(-1.0 / m as f64);
    let tail: f64 = q.coeffs().iter().skip(m + 1).map(|c| c.norm()).sum();
    let rho2 = if tail == 0.0 {
        f64::INFINITY
    } else {
        modulus / tail
    };
    (rho1, rho2)
}

/// Evaluates the tail `r(z) = sum_(j>m) q_j z^j` directly, without the
/// cancellation of `q(z) - 1 - a_m z^m`.
pub fn residual_tail(q: &Polynomial, m: usize, z: ComplexNumber) -> ComplexNumber {
    let coeffs = q.coeffs();
    if coeffs.len() <= m + 1 {
        return ComplexNumber::new(0.0, 0.0);
    }
    let inner = coeffs[m + 1..]
        .iter()
        .rev()
        .fold(ComplexNumber::new(0.0, 0.0), |acc, &a| acc * z + a);
    inner * z.powu(m as u32 + 1)
}

/// Principal `m`-th root of a unimodular `u`: `(cos(phi/m), sin(phi/m))` with
/// `phi = arg(u)` in `(-pi, pi]`.
pub fn unimodular_mth_root(u: ComplexNumber, m: usize) -> Result<ComplexNumber, DescentError> {
    if m == 0 {
        return Err(DescentError::ZeroOrder);
    }
    let modulus = u.norm();
    if modulus.is_nan() || (modulus - 1.0).abs() > UNIMODULAR_TOL {
        return Err(DescentError::NotUnimodular { modulus });
    }
    // `+ 0.0` maps -0.0 to +0.0 so that -1 lands on arg = pi, not -pi.
    let phi = (u.im + 0.0).atan2(u.re);
    let theta = phi / m as f64;
    Ok(ComplexNumber::new(theta.cos(), theta.sin()))
}

/// `zeta` with `a_m zeta^m = -|a_m|`.
pub fn descent_direction(a_m: ComplexNumber, m: usize) -> ComplexNumber {
    let u = -a_m.conj() / a_m.norm();
    unimodular_mth_root(u, m).expect("-conj(a)/|a| is unimodular for a != 0 and m >= 1")
}

/// Builds a descent step from `a` with the principal direction.
pub fn build_step(
    p: &Polynomial,
    a: ComplexNumber,
    shrink: f64,
) -> Result<DescentStep, DescentError> {
    build_step_with(p, a, shrink, Direction::Principal)
}

pub fn build_step_with(
    p: &Polynomial,
    a: ComplexNumber,
    shrink: f64,
    direction: Direction,
) -> Result<DescentStep, DescentError> {
    if !(shrink > 0.0 && shrink < 1.0) {
        return Err(DescentError::InvalidShrink(shrink));
    }
    if p.is_constant() {
        return Err(DescentError::EffectivelyConstant);
    }
    let q = p.normalize_at(a)?;
    let (m, a_m) = minor_index(&q)?;
    let (rho1, rho2) = step_radii(&q, m, a_m);
    let rho = shrink * rho1.min(rho2).min(1.0);
    let principal = descent_direction(a_m, m);

    let zeta = match direction {
        Direction::Principal => principal,
        Direction::BestOfM => {
            let mut best = (principal, p.eval(a + principal * rho).norm());
            for k in 1..m {
                let unity = ComplexNumber::from_polar(1.0, 2.0 * PI * k as f64 / m as f64);
                let candidate = principal * unity;
                let value = p.eval(a + candidate * rho).norm();
                if value < best.1 {
                    best = (candidate, value);
                }
            }
            best.0
        }
    };

    let w = zeta * rho;
    // Coefficients below the zero threshold ahead of m are treated as zero
    // by the split; their contribution is folded into the bound.
    let dropped: f64 = q.coeffs()[1..m]
        .iter()
        .enumerate()
        .map(|(j, c)| c.norm() * rho.powi(j as i32 + 1))
        .sum();
    let pull = a_m.norm() * rho.powi(m as i32);
    let predicted_bound = 1.0 - pull + residual_tail(&q, m, w).norm() + dropped;

    Ok(DescentStep {
        center: a,
        m,
        a_m,
        rho1,
        rho2,
        rho,
        zeta,
        landing: a + w,
        predicted_bound,
    })
}
