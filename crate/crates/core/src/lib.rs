//! Complex polynomial root finding by certified minimum-modulus descent.
//!
//! From any point `a` where `p(a) != 0`, [`descent::build_step`] constructs a
//! nearby point `b` with `|p(b)| < |p(a)|`, together with the radii and bound
//! that certify the decrease. [`solver::find_all_roots`] iterates that step to
//! a root, deflates, and repeats until all `n` roots are found.
//!
//! ```
//! use descent_roots::{find_all_roots, Polynomial, SolverConfig};
//!
//! // z^3 - 1
//! let p = Polynomial::from_real(&[-1.0, 0.0, 0.0, 1.0]);
//! let report = find_all_roots(&p, &SolverConfig::default()).unwrap();
//! assert_eq!(report.roots.len(), 3);
//! assert!(report.residuals.iter().all(|&r| r <= 1e-10));
//! ```
//!
//! The guide in `book/` walks through each piece.

pub mod bounds;
pub mod cli;
pub mod descent;
pub mod poly;
pub mod solver;
pub mod verify;

pub use bounds::{grid_min, search_radius, SearchRegion};
pub use descent::{build_step, DescentStep};
pub use poly::{ComplexNumber, Polynomial};
pub use solver::{find_all_roots, find_root, newton_polish, RootReport, SolverConfig, SolverError};

// The guide's code blocks run as doctests, one module per chapter.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/descent.md")]
    mod descent {}
    #[doc = include_str!("../../../book/src/search-region.md")]
    mod search_region {}
    #[doc = include_str!("../../../book/src/solver.md")]
    mod solver {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
