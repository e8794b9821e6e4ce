//! Dense complex polynomials stored low-to-high: `coeffs[j]` is the
//! coefficient of `z^j`.
//!
//! Everything here is a pure function of its inputs. The descent, bounds and
//! solver modules are built on four primitives: Horner evaluation, the Taylor
//! shift `p(z) -> p(z + a)`, synthetic division by `(z - r)` and expansion
//! from roots.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

/// The ground field. A pair of `f64` (re, im).
pub type ComplexNumber = Complex64;

/// Relative factor for deciding that a coefficient is zero. A coefficient
/// `a_j` counts as zero when `|a_j| <= ZERO_REL * (1 + max_k |a_k|)`.
pub const ZERO_REL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum PolyError {
    /// The polynomial vanishes at the requested center, so the center is
    /// already a root.
    #[error("polynomial vanishes at the normalization center")]
    ZeroAtCenter,
}

/// A dense polynomial with complex coefficients.
///
/// Trailing (highest-index) exact zeros are trimmed on construction, so the
/// leading coefficient is nonzero unless the polynomial is the zero
/// polynomial, which is stored as `[0]`.
#[derive(Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<ComplexNumber>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<ComplexNumber>) -> Self {
        while coeffs.len() > 1
            && coeffs
                .last()
                .is_some_and(|c| *c == ComplexNumber::new(0.0, 0.0))
        {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(ComplexNumber::new(0.0, 0.0));
        }
        Polynomial { coeffs }
    }

    /// Builds a polynomial from real coefficients, low-to-high.
    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| ComplexNumber::new(c, 0.0)).collect())
    }

    /// Builds a polynomial from `[re, im]` pairs, low-to-high.
    pub fn from_pairs(pairs: &[[f64; 2]]) -> Self {
        Self::new(
            pairs
                .iter()
                .map(|&[re, im]| ComplexNumber::new(re, im))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[ComplexNumber] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> ComplexNumber {
        self.coeffs[self.degree()]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// `1 + max_j |a_j|`, the reference magnitude for relative tolerances.
    pub fn scale(&self) -> f64 {
        1.0 + self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Threshold below which a coefficient is treated as zero.
    pub fn zero_threshold(&self) -> f64 {
        ZERO_REL * self.scale()
    }

    /// Multiplies every coefficient by `c`.
    pub fn scaled(&self, c: ComplexNumber) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `[re, im]` pairs, low-to-high.
    pub fn to_pairs(&self) -> Vec<[f64; 2]> {
        self.coeffs.iter().map(|c| [c.re, c.im]).collect()
    }

    /// Evaluates by Horner's scheme, highest coefficient first.
    pub fn eval(&self, z: ComplexNumber) -> ComplexNumber {
        self.coeffs
            .iter()
            .rev()
            .fold(ComplexNumber::new(0.0, 0.0), |acc, &a| acc * z + a)
    }

    /// Returns `s` with `s(z) = p(z + a)`.
    ///
    /// Computed as `n` passes of synthetic division by `(z - a)`: pass `i`
    /// leaves the `i`-th Taylor coefficient at index `i`.
    pub fn taylor_shift(&self, a: ComplexNumber) -> Self {
        let mut c = self.coeffs.clone();
        let n = self.degree();
        for i in 0..n {
            for j in (i..n).rev() {
                let hi = c[j + 1];
                c[j] += a * hi;
            }
        }
        Polynomial { coeffs: c }
    }

    /// Returns `q(z) = p(z + a) / p(a)`, with `q(0) = 1` set exactly.
    pub fn normalize_at(&self, a: ComplexNumber) -> Result<Self, PolyError> {
        let shifted = self.taylor_shift(a);
        let value = shifted.coeffs[0];
        if value == ComplexNumber::new(0.0, 0.0) {
            return Err(PolyError::ZeroAtCenter);
        }
        let mut coeffs: Vec<_> = shifted.coeffs.iter().map(|c| c / value).collect();
        coeffs[0] = ComplexNumber::new(1.0, 0.0);
        Ok(Polynomial::new(coeffs))
    }

    /// Synthetic division by `(z - r)`: returns `(q, rem)` with
    /// `p(z) = (z - r) q(z) + rem`.
    ///
    /// A constant polynomial divides to the zero quotient with the constant
    /// as remainder.
    pub fn deflate(&self, r: ComplexNumber) -> (Self, ComplexNumber) {
        let n = self.degree();
        if n == 0 {
            return (Polynomial::new(vec![]), self.coeffs[0]);
        }
        let mut quotient = vec![ComplexNumber::new(0.0, 0.0); n];
        let mut carry = self.coeffs[n];
        for j in (0..n).rev() {
            quotient[j] = carry;
            carry = self.coeffs[j] + r * carry;
        }
        (Polynomial::new(quotient), carry)
    }

    pub fn derivative(&self) -> Self {
        if self.is_constant() {
            return Polynomial::new(vec![]);
        }
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, &a)| a * j as f64)
                .collect(),
        )
    }

    /// `leading * prod (z - r_i)`, expanded one linear factor at a time.
    pub fn from_roots(roots: &[ComplexNumber], leading: ComplexNumber) -> Self {
        let mut coeffs = Vec::with_capacity(roots.len() + 1);
        coeffs.push(leading);
        for &r in roots {
            // multiply by (z - r)
            coeffs.push(ComplexNumber::new(0.0, 0.0));
            for j in (0..coeffs.len()).rev() {
                let lower = if j > 0 {
                    coeffs[j - 1]
                } else {
                    ComplexNumber::new(0.0, 0.0)
                };
                coeffs[j] = lower - r * coeffs[j];
            }
        }
        Polynomial::new(coeffs)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_pairs()).finish()
    }
}
