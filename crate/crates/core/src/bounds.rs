//! A closed disc that provably contains a global minimizer of `|p|` in its
//! interior, plus a coarse grid search for starting points.

use thiserror::Error;

use crate::poly::{ComplexNumber, Polynomial};

/// Relative widening of the search radius so that its inequalities stay
/// strict under rounding.
pub const RADIUS_SLACK: f64 = 1e-6;

pub const DEFAULT_RESOLUTION: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("constant polynomial has no search region")]
    DegreeZero,
}

/// The disc `|z| <= radius` together with its interiority certificate:
/// `|p(z)| >= boundary_floor > center_value = |p(0)|` on the boundary circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchRegion {
    pub radius: f64,
    pub boundary_floor: f64,
    pub center_value: f64,
}

/// Radius from the growth estimate `|p(z)| >= |a_n| |z|^n / 2`.
///
/// With `sigma = |a_0| + ... + |a_(n-1)|`, for `|z| >= max(1, 2 sigma / |a_n|)`
/// we have `|z|^(n-1) sigma <= |a_n| |z|^n / 2`, which gives the estimate. The
/// third term forces `|a_n| R^n / 2 >= |a_0| + 1`.
pub fn search_radius(p: &Polynomial) -> Result<SearchRegion, BoundsError> {
    let n = p.degree();
    if n == 0 {
        return Err(BoundsError::DegreeZero);
    }
    let lead = p.leading().norm();
    let center_value = p.coeffs()[0].norm();
    let sigma: f64 = p.coeffs()[..n].iter().map(|c| c.norm()).sum();
    let growth = 2.0 * sigma / lead;
    let lift = (2.0 * (center_value + 1.0) / lead).powf(1.0 / n as f64);
    let radius = 1f64.max(growth).max(lift) * (1.0 + RADIUS_SLACK);
    Ok(SearchRegion {
        radius,
        boundary_floor: lead * radius.powi(n as i32) / 2.0,
        center_value,
    })
}

/// Grid point minimizing `|p|` over a `resolution x resolution` grid on
/// `[-R, R]^2`, restricted to the disc. Ties go to the lexicographically
/// smallest `(re, im)`.
///
/// Falls back to the origin when no grid point lies inside the disc, which
/// only happens at `resolution == 2`.
pub fn grid_min(p: &Polynomial, region: &SearchRegion, resolution: usize) -> ComplexNumber {
    assert!(resolution >= 2, "grid resolution must be at least 2");
    let r = region.radius;
    let step = 2.0 * r / (resolution - 1) as f64;
    let mut best: Option<(ComplexNumber, f64)> = None;
    for i in 0..resolution {
        let re = -r + step * i as f64;
        for j in 0..resolution {
            let im = -r + step * j as f64;
            let z = ComplexNumber::new(re, im);
            if z.norm() > r {
                continue;
            }
            let value = p.eval(z).norm();
            if best.is_none_or(|(_, v)| value < v) {
                best = Some((z, value));
            }
        }
    }
    best.map_or(ComplexNumber::new(0.0, 0.0), |(z, _)| z)
}
