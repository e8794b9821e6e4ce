//! Root finding by repeated certified descent, followed by deflation.
//!
//! Each accepted step strictly lowers `|p|`, so the recorded trace is strictly
//! decreasing. Convergence of the iterates to a root is observed behavior
//! rather than a guarantee: the descent lemma certifies decrease, not the rate.
//! Near a simple root the certified radius reduces to a damped Newton step, so
//! convergence is linear with ratio about `1 - shrink`.

use thiserror::Error;

use crate::bounds::{grid_min, search_radius, DEFAULT_RESOLUTION};
use crate::descent::{build_step_with, DescentError, Direction, DEFAULT_SHRINK};
use crate::poly::{ComplexNumber, Polynomial};

/// A step whose `|p(landing)| / |p(center)|` exceeds this counts as stagnant.
pub const STAGNATION_RATIO: f64 = 0.999;
pub const MAX_HALVINGS: usize = 40;
pub const MAX_POLISH_STEPS: usize = 50;
/// Residual slack allowed after polishing, relative to `tol_residual * scale`.
pub const POLISH_SLACK: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Stop when `|p(z)| <= tol_residual * (1 + max_j |a_j|)`.
    pub tol_residual: f64,
    /// Accepted descent steps allowed per root.
    pub max_iters: usize,
    pub shrink: f64,
    pub best_of_m: bool,
    /// Newton refinement of each root against the undeflated polynomial.
    pub polish: bool,
    pub record_trace: bool,
    /// Grid resolution for starting points.
    pub resolution: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol_residual: 1e-10,
            max_iters: 100_000,
            shrink: DEFAULT_SHRINK,
            best_of_m: false,
            polish: true,
            record_trace: false,
            resolution: DEFAULT_RESOLUTION,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        let reason = if !(self.tol_residual > 0.0 && self.tol_residual.is_finite()) {
            "tolerance must be positive and finite"
        } else if self.max_iters == 0 {
            "iteration budget must be positive"
        } else if !(self.shrink > 0.0 && self.shrink < 1.0) {
            "shrink must lie in (0, 1)"
        } else if self.resolution < 2 {
            "grid resolution must be at least 2"
        } else {
            return Ok(());
        };
        Err(SolverError::InvalidConfig(reason))
    }

    fn direction(&self) -> Direction {
        if self.best_of_m {
            Direction::BestOfM
        } else {
            Direction::Principal
        }
    }
}

/// Iterates `(z_k, |p(z_k)|)` of one root search, starting point included.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DescentTrace {
    pub iterates: Vec<(ComplexNumber, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootSearch {
    pub root: ComplexNumber,
    pub iterations: usize,
    pub trace: Option<DescentTrace>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootReport {
    pub roots: Vec<ComplexNumber>,
    /// `|p(r_i)|` on the input polynomial.
    pub residuals: Vec<f64>,
    /// `max_j |p_j - from_roots(roots, a_n)_j| / (1 + max_j |p_j|)`.
    pub reconstruction_error: f64,
    pub iterations_per_root: Vec<usize>,
    /// One trace per root search when tracing is on, in deflation order.
    pub traces: Vec<DescentTrace>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("polynomial has degree zero")]
    DegreeZero,
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("non-finite coefficient")]
    NonFinite,
    #[error("iteration budget of {iterations} exhausted; best |p| = {best_modulus:e} at {best}")]
    IterationBudgetExhausted {
        best: ComplexNumber,
        best_modulus: f64,
        iterations: usize,
    },
    #[error(
        "descent stalled at {center} (|p| = {modulus:e}, best ratio {ratio}, shrink {shrink:e})"
    )]
    StagnationFailure {
        center: ComplexNumber,
        modulus: f64,
        ratio: f64,
        shrink: f64,
    },
    #[error(transparent)]
    Descent(#[from] DescentError),
    #[error("at deflation depth {depth}: {source}")]
    AtDepth {
        depth: usize,
        #[source]
        source: Box<SolverError>,
    },
}

/// Descends from `start` until `|p(z)| <= tol_residual * scale`.
pub fn find_root(
    p: &Polynomial,
    start: ComplexNumber,
    cfg: &SolverConfig,
) -> Result<RootSearch, SolverError> {
    cfg.validate()?;
    if p.degree() == 0 {
        return Err(SolverError::DegreeZero);
    }
    if !p.is_finite() {
        return Err(SolverError::NonFinite);
    }
    let target = cfg.tol_residual * p.scale();
    let direction = cfg.direction();

    let mut z = start;
    let mut value = p.eval(z).norm();
    let mut trace = cfg.record_trace.then(|| DescentTrace {
        iterates: vec![(z, value)],
    });
    let mut iterations = 0;

    while value > target {
        if iterations == cfg.max_iters {
            return Err(SolverError::IterationBudgetExhausted {
                best: z,
                best_modulus: value,
                iterations,
            });
        }
        let mut shrink = cfg.shrink;
        let mut best: Option<(ComplexNumber, f64)> = None;
        for halvings in 0..=MAX_HALVINGS {
            let step = match build_step_with(p, z, shrink, direction) {
                Ok(step) => step,
                Err(DescentError::ZeroAtCenter) => {
                    value = 0.0;
                    break;
                }
                Err(e) => return Err(e.into()),
            };
            let landed = p.eval(step.landing).norm();
            let improved = best.is_none_or(|(_, v)| landed < v);
            if improved {
                best = Some((step.landing, landed));
            }
            if landed / value <= STAGNATION_RATIO {
                break;
            }
            // Smaller steps only help while they keep improving, unless no
            // decrease has been seen at all yet.
            let decreased = best.is_some_and(|(_, v)| v < value);
            if (decreased && !improved) || halvings == MAX_HALVINGS {
                break;
            }
            shrink /= 2.0;
        }
        if value == 0.0 {
            break;
        }
        match best {
            Some((next, next_value)) if next_value < value => {
                z = next;
                value = next_value;
                iterations += 1;
                if let Some(t) = trace.as_mut() {
                    t.iterates.push((z, value));
                }
            }
            _ => {
                return Err(SolverError::StagnationFailure {
                    center: z,
                    modulus: value,
                    ratio: best.map_or(f64::NAN, |(_, v)| v / value),
                    shrink,
                })
            }
        }
    }

    Ok(RootSearch {
        root: z,
        iterations,
        trace,
    })
}

/// Newton iterations `z <- z - p(z)/p'(z)`, keeping only steps that lower
/// `|p|`. Never returns a point worse than `z`.
pub fn newton_polish(p: &Polynomial, z: ComplexNumber) -> ComplexNumber {
    let dp = p.derivative();
    let mut best = z;
    let mut best_value = p.eval(z).norm();
    for _ in 0..MAX_POLISH_STEPS {
        if best_value == 0.0 {
            break;
        }
        let slope = dp.eval(best);
        if slope.norm() < 1e-300 {
            break;
        }
        let next = best - p.eval(best) / slope;
        let value = p.eval(next).norm();
        if value.is_nan() || value >= best_value {
            break;
        }
        best = next;
        best_value = value;
    }
    best
}

/// Finds all `n` roots by search, descent, optional polish and deflation.
pub fn find_all_roots(p: &Polynomial, cfg: &SolverConfig) -> Result<RootReport, SolverError> {
    cfg.validate()?;
    let n = p.degree();
    if n == 0 {
        return Err(SolverError::DegreeZero);
    }
    if !p.is_finite() {
        return Err(SolverError::NonFinite);
    }

    let mut current = p.clone();
    let mut roots = Vec::with_capacity(n);
    let mut iterations_per_root = Vec::with_capacity(n);
    let mut traces = Vec::new();

    for depth in 0..n {
        let at_depth = |e: SolverError| SolverError::AtDepth {
            depth,
            source: Box::new(e),
        };
        let region = search_radius(&current).map_err(|_| at_depth(SolverError::DegreeZero))?;
        let start = grid_min(&current, &region, cfg.resolution);
        let search = find_root(&current, start, cfg).map_err(at_depth)?;
        let root = if cfg.polish {
            newton_polish(p, search.root)
        } else {
            search.root
        };
        roots.push(root);
        iterations_per_root.push(search.iterations);
        traces.extend(search.trace);
        current = current.deflate(root).0;
    }

    let residuals = roots.iter().map(|&r| p.eval(r).norm()).collect();
    let reconstruction_error = reconstruction_error(p, &roots);
    Ok(RootReport {
        roots,
        residuals,
        reconstruction_error,
        iterations_per_root,
        traces,
    })
}

/// Coefficient-wise distance between `p` and `a_n * prod (z - r_i)`,
/// relative to `1 + max_j |p_j|`.
pub fn reconstruction_error(p: &Polynomial, roots: &[ComplexNumber]) -> f64 {
    let rebuilt = Polynomial::from_roots(roots, p.leading());
    let zero = ComplexNumber::new(0.0, 0.0);
    let len = p.coeffs().len().max(rebuilt.coeffs().len());
    let worst = (0..len)
        .map(|j| {
            let a = p.coeffs().get(j).copied().unwrap_or(zero);
            let b = rebuilt.coeffs().get(j).copied().unwrap_or(zero);
            (a - b).norm()
        })
        .fold(0.0, f64::max);
    worst / p.scale()
}
