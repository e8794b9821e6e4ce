//! Property checks that restate the descent and growth inequalities
//! numerically, plus corpus generators and suite drivers.
//!
//! The checks here only rely on polynomial evaluation, normalization,
//! expansion from roots and the public outputs of the descent and bounds
//! modules. They never look inside the solver loop.
//!
//! Corpora are drawn from a ChaCha8 stream seeded per suite, so every failure
//! is replayable from `(seed, trial index)`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::search_radius;
use crate::descent::{build_step, residual_tail, DEFAULT_SHRINK};
use crate::poly::{ComplexNumber, Polynomial};
use crate::solver::{find_all_roots, RootReport, SolverConfig, POLISH_SLACK};

/// Coefficients are drawn from the box `[-COEFF_BOX, COEFF_BOX]^2`.
pub const COEFF_BOX: f64 = 10.0;
pub const MAX_CORPUS_DEGREE: usize = 12;
/// Descent centers are drawn from `[-CENTER_BOX, CENTER_BOX]^2`.
pub const CENTER_BOX: f64 = 3.0;
/// Generating roots for recovery corpora live in `[-ROOT_BOX, ROOT_BOX]^2`.
pub const ROOT_BOX: f64 = 2.0;
pub const MIN_ROOT_SEPARATION: f64 = 0.2;

/// Allowed deviation of `a_m zeta^m` from `-|a_m|`, relative to `|a_m|`.
pub const NEGATIVITY_TOL: f64 = 1e-12;
/// Rounding allowance for the triangle-inequality bound `|q(w)| <= 1 - |a_m| rho^m + |r(w)|`,
/// which holds with equality when the tail vanishes.
pub const TRIANGLE_ROUNDING: f64 = 8.0 * f64::EPSILON;
/// Root recovery and reconstruction tolerance.
pub const RECOVERY_TOL: f64 = 1e-6;

/// Outcome of one property over many trials.
///
/// `worst_margin` is the smallest relative slack seen (negative or zero for a
/// failure) and `worst_case` is a JSON object describing the inputs that
/// produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyReport {
    pub property_name: String,
    pub trials: usize,
    pub failures: usize,
    pub worst_margin: f64,
    pub worst_case: String,
}

impl PropertyReport {
    pub fn new(property_name: impl Into<String>) -> Self {
        PropertyReport {
            property_name: property_name.into(),
            trials: 0,
            failures: 0,
            worst_margin: f64::INFINITY,
            worst_case: String::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn record(&mut self, ok: bool, margin: f64, case: impl FnOnce() -> String) {
        self.trials += 1;
        if !ok {
            self.failures += 1;
        }
        let margin = if margin.is_nan() {
            f64::NEG_INFINITY
        } else {
            margin
        };
        if margin <= self.worst_margin {
            let case = case();
            if margin < self.worst_margin || self.worst_case.is_empty() || case < self.worst_case {
                self.worst_margin = margin;
                self.worst_case = case;
            }
        }
    }

    /// Records `lhs < rhs`.
    pub fn check_less(&mut self, lhs: f64, rhs: f64, case: impl FnOnce() -> String) {
        self.record(lhs < rhs, relative_margin(lhs, rhs), case);
    }

    /// Records `lhs <= rhs`.
    pub fn check_at_most(&mut self, lhs: f64, rhs: f64, case: impl FnOnce() -> String) {
        self.record(lhs <= rhs, relative_margin(lhs, rhs), case);
    }

    /// Folds `other` into `self`, keeping the worse margin.
    pub fn merge(&mut self, other: &PropertyReport) {
        self.trials += other.trials;
        self.failures += other.failures;
        if other.worst_margin < self.worst_margin
            || (other.worst_margin == self.worst_margin
                && !other.worst_case.is_empty()
                && (self.worst_case.is_empty() || other.worst_case < self.worst_case))
        {
            self.worst_margin = other.worst_margin;
            self.worst_case = other.worst_case.clone();
        }
    }
}

fn relative_margin(lhs: f64, rhs: f64) -> f64 {
    (rhs - lhs) / rhs.abs().max(f64::MIN_POSITIVE)
}

fn json_complex(z: ComplexNumber) -> String {
    format!("[{:.16e},{:.16e}]", z.re, z.im)
}

fn json_poly(p: &Polynomial) -> String {
    let parts: Vec<_> = p.coeffs().iter().map(|&c| json_complex(c)).collect();
    format!("[{}]", parts.join(","))
}

/// The four per-point checks behind the descent lemma.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReports {
    /// `|r(z)| < |a_m z^m| < 1` on the certified punctured disc.
    pub split_inequalities: PropertyReport,
    /// `|a_m zeta^m + |a_m|| <= 1e-12 |a_m|`.
    pub negativity: PropertyReport,
    /// `|r(w)| < |a_m| rho^m`, `|q(w)| <= 1 - |a_m| rho^m + |r(w)|` and `|q(w)| < 1`.
    pub final_bound: PropertyReport,
    /// `|q(w) - x| < 1 - x` with `x = 1 - |a_m| rho^m`.
    pub remark_containment: PropertyReport,
}

impl LemmaReports {
    fn new() -> Self {
        LemmaReports {
            split_inequalities: PropertyReport::new("split_inequalities"),
            negativity: PropertyReport::new("negativity_identity"),
            final_bound: PropertyReport::new("final_bound"),
            remark_containment: PropertyReport::new("remark_containment"),
        }
    }

    pub fn merge(&mut self, other: &LemmaReports) {
        self.split_inequalities.merge(&other.split_inequalities);
        self.negativity.merge(&other.negativity);
        self.final_bound.merge(&other.final_bound);
        self.remark_containment.merge(&other.remark_containment);
    }

    pub fn into_vec(self) -> Vec<PropertyReport> {
        vec![
            self.split_inequalities,
            self.negativity,
            self.final_bound,
            self.remark_containment,
        ]
    }
}

/// Runs every lemma check for the step at `a`, drawing `samples` points in
/// the certified punctured disc from `rng`.
///
/// A failure to build the step at all (zero center, degenerate polynomial)
/// is recorded as a failure of every check.
pub fn lemma_checks(
    p: &Polynomial,
    a: ComplexNumber,
    samples: usize,
    rng: &mut impl Rng,
) -> LemmaReports {
    let mut out = LemmaReports::new();
    let case = |extra: &str| {
        format!(
            "{{\"coeffs\":{},\"center\":{}{}}}",
            json_poly(p),
            json_complex(a),
            extra
        )
    };
    let (step, q) = match (build_step(p, a, DEFAULT_SHRINK), p.normalize_at(a)) {
        (Ok(step), Ok(q)) => (step, q),
        _ => {
            for r in [
                &mut out.split_inequalities,
                &mut out.negativity,
                &mut out.final_bound,
                &mut out.remark_containment,
            ] {
                r.record(false, f64::NEG_INFINITY, || case(""));
            }
            return out;
        }
    };
    let (m, a_m, rho) = (step.m, step.a_m, step.rho);
    let lead = a_m.norm();

    for _ in 0..samples {
        // uniform by area on 0 < |z| <= rho
        let radius = rho * (1.0 - rng.gen::<f64>()).sqrt();
        let z = ComplexNumber::from_polar(radius, rng.gen_range(-PI..PI));
        let head = (a_m * z.powu(m as u32)).norm();
        let tail = residual_tail(&q, m, z).norm();
        let at = || case(&format!(",\"z\":{}", json_complex(z)));
        out.split_inequalities.check_less(tail, head, at);
        out.split_inequalities.check_less(head, 1.0, at);
    }

    let turned = a_m * step.zeta.powu(m as u32);
    out.negativity
        .check_at_most((turned + lead).norm(), NEGATIVITY_TOL * lead, || case(""));

    let w = step.offset();
    let pull = lead * rho.powi(m as i32);
    let value = q.eval(w).norm();
    let tail = residual_tail(&q, m, w).norm();
    out.final_bound.check_less(tail, pull, || case(""));
    out.final_bound
        .check_at_most(value, 1.0 - pull + tail + TRIANGLE_ROUNDING, || case(""));
    out.final_bound.check_less(value, 1.0, || case(""));

    let x = 1.0 - pull;
    out.remark_containment
        .check_less((q.eval(w) - x).norm(), 1.0 - x, || case(""));
    out
}

/// All lemma checks at `a`, folded into one report.
pub fn check_lemma_inequalities(
    p: &Polynomial,
    a: ComplexNumber,
    samples: usize,
) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut report = PropertyReport::new("lemma_inequalities");
    for part in lemma_checks(p, a, samples, &mut rng).into_vec() {
        report.merge(&part);
    }
    report
}

/// Samples `|p|` at `samples` equispaced angles on the boundary circle of the
/// search region and checks it against the floor `|a_n| R^n / 2`, plus the
/// interiority certificate `floor > |a_0|`.
pub fn check_boundary_floor(p: &Polynomial, samples: usize) -> PropertyReport {
    let mut report = PropertyReport::new("boundary_floor");
    let case = || format!("{{\"coeffs\":{}}}", json_poly(p));
    let Ok(region) = search_radius(p) else {
        report.record(false, f64::NEG_INFINITY, case);
        return report;
    };
    report.check_less(region.center_value, region.boundary_floor, case);
    for k in 0..samples {
        let z = ComplexNumber::from_polar(region.radius, 2.0 * PI * k as f64 / samples as f64);
        report.check_at_most(region.boundary_floor, p.eval(z).norm(), || {
            format!("{{\"coeffs\":{},\"z\":{}}}", json_poly(p), json_complex(z))
        });
    }
    report
}

/// Checks a root report against `p` with the default solver tolerance.
pub fn check_report(p: &Polynomial, report: &RootReport) -> PropertyReport {
    check_report_with(p, report, SolverConfig::default().tol_residual)
}

/// Recomputes residuals and reconstruction error from `p` and the reported
/// roots, then checks them against the report's own figures and against
/// `tol_residual * scale * 10` and [`RECOVERY_TOL`].
pub fn check_report_with(p: &Polynomial, report: &RootReport, tol_residual: f64) -> PropertyReport {
    let mut out = PropertyReport::new("root_report");
    let case = || {
        let roots: Vec<_> = report.roots.iter().map(|&r| json_complex(r)).collect();
        format!(
            "{{\"coeffs\":{},\"roots\":[{}]}}",
            json_poly(p),
            roots.join(",")
        )
    };
    let count_ok = report.roots.len() == p.degree() && report.residuals.len() == report.roots.len();
    out.record(
        count_ok,
        if count_ok { 1.0 } else { f64::NEG_INFINITY },
        case,
    );
    if !count_ok {
        return out;
    }

    let scale = p.scale();
    let residual_cap = tol_residual * scale * POLISH_SLACK;
    for (&root, &claimed) in report.roots.iter().zip(&report.residuals) {
        let actual = p.eval(root).norm();
        out.check_at_most((actual - claimed).abs(), 1e-12 * (1.0 + actual), case);
        out.check_at_most(actual, residual_cap, case);
    }

    let leading = p.leading();
    let rebuilt = Polynomial::from_roots(&report.roots, leading);
    let worst = p
        .coeffs()
        .iter()
        .zip(rebuilt.coeffs())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
        / scale;
    out.check_at_most(
        (worst - report.reconstruction_error).abs(),
        1e-12 * (1.0 + worst),
        case,
    );
    out.check_at_most(worst, RECOVERY_TOL, case);
    out
}

/// Minimum-total-distance matching of `found` onto `expected`; returns the
/// largest matched distance, or `None` when the lengths differ.
///
/// Exact assignment by dynamic programming over subsets, so only meant for
/// small root counts.
pub fn match_roots(found: &[ComplexNumber], expected: &[ComplexNumber]) -> Option<f64> {
    let n = found.len();
    if n != expected.len() {
        return None;
    }
    assert!(n <= 20, "subset matching is exponential in the root count");
    let full = 1usize << n;
    // best[mask] = (total, max) matching found[..popcount(mask)] onto mask
    let mut best = vec![(f64::INFINITY, f64::INFINITY); full];
    best[0] = (0.0, 0.0);
    for mask in 0..full {
        let (total, worst) = best[mask];
        if total.is_infinite() {
            continue;
        }
        let i = mask.count_ones() as usize;
        if i == n {
            continue;
        }
        for j in 0..n {
            if mask & (1 << j) != 0 {
                continue;
            }
            let d = (found[i] - expected[j]).norm();
            let next = (total + d, worst.max(d));
            let slot = &mut best[mask | (1 << j)];
            if next.0 < slot.0 {
                *slot = next;
            }
        }
    }
    Some(best[full - 1].1)
}

pub fn random_polynomial(rng: &mut impl Rng, max_degree: usize) -> Polynomial {
    let degree = rng.gen_range(1..=max_degree);
    loop {
        let coeffs: Vec<_> = (0..=degree)
            .map(|_| random_in_box(rng, COEFF_BOX))
            .collect();
        let p = Polynomial::new(coeffs);
        if p.degree() == degree {
            return p;
        }
    }
}

pub fn random_in_box(rng: &mut impl Rng, half_width: f64) -> ComplexNumber {
    ComplexNumber::new(
        rng.gen_range(-half_width..=half_width),
        rng.gen_range(-half_width..=half_width),
    )
}

/// `count` points in `[-ROOT_BOX, ROOT_BOX]^2` with pairwise distance at
/// least [`MIN_ROOT_SEPARATION`], by rejection.
pub fn separated_roots(rng: &mut impl Rng, count: usize) -> Vec<ComplexNumber> {
    let mut roots: Vec<ComplexNumber> = Vec::with_capacity(count);
    while roots.len() < count {
        let z = random_in_box(rng, ROOT_BOX);
        if roots.iter().all(|r| (r - z).norm() >= MIN_ROOT_SEPARATION) {
            roots.push(z);
        }
    }
    roots
}

/// Random `(p, a)` with `p(a) != 0`.
pub fn random_pair(rng: &mut impl Rng) -> (Polynomial, ComplexNumber) {
    let p = random_polynomial(rng, MAX_CORPUS_DEGREE);
    loop {
        let a = random_in_box(rng, CENTER_BOX);
        if p.eval(a).norm() > 0.0 {
            return (p, a);
        }
    }
}

/// Strict decrease `|p(landing)| < |p(a)|` of the default step over `pairs`
/// random pairs.
pub fn descent_suite(seed: u64, pairs: usize) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = PropertyReport::new("strict_descent");
    for _ in 0..pairs {
        let (p, a) = random_pair(&mut rng);
        let case = || {
            format!(
                "{{\"coeffs\":{},\"center\":{}}}",
                json_poly(&p),
                json_complex(a)
            )
        };
        match build_step(&p, a, DEFAULT_SHRINK) {
            Ok(step) => report.check_less(p.eval(step.landing).norm(), p.eval(a).norm(), case),
            Err(_) => report.record(false, f64::NEG_INFINITY, case),
        }
    }
    report
}

/// Lemma checks over `polys` random pairs with `samples` disc points each.
pub fn lemma_suite(seed: u64, polys: usize, samples: usize) -> LemmaReports {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all = LemmaReports::new();
    for _ in 0..polys {
        let (p, a) = random_pair(&mut rng);
        all.merge(&lemma_checks(&p, a, samples, &mut rng));
    }
    all
}

pub fn boundary_suite(seed: u64, polys: usize, samples: usize) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all = PropertyReport::new("boundary_floor");
    for _ in 0..polys {
        let p = random_polynomial(&mut rng, MAX_CORPUS_DEGREE);
        all.merge(&check_boundary_floor(&p, samples));
    }
    all
}

/// Reports from [`recovery_suite`].
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryReports {
    /// Optimal-matching distance to the generating roots within [`RECOVERY_TOL`].
    pub matching: PropertyReport,
    /// Reconstruction error within [`RECOVERY_TOL`].
    pub reconstruction: PropertyReport,
    /// [`check_report_with`] on every solve.
    pub report: PropertyReport,
}

impl RecoveryReports {
    pub fn into_vec(self) -> Vec<PropertyReport> {
        vec![self.matching, self.reconstruction, self.report]
    }
}

/// Solves `polys` monic polynomials built from well-separated random roots
/// (degree 1 to `max_degree`) and compares against the generating roots.
pub fn recovery_suite(
    seed: u64,
    polys: usize,
    max_degree: usize,
    cfg: &SolverConfig,
) -> RecoveryReports {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = RecoveryReports {
        matching: PropertyReport::new("root_recovery"),
        reconstruction: PropertyReport::new("reconstruction"),
        report: PropertyReport::new("root_report"),
    };
    for _ in 0..polys {
        let degree = rng.gen_range(1..=max_degree);
        let roots = separated_roots(&mut rng, degree);
        let p = Polynomial::from_roots(&roots, ComplexNumber::new(1.0, 0.0));
        let case = || {
            let parts: Vec<_> = roots.iter().map(|&r| json_complex(r)).collect();
            format!("{{\"roots\":[{}]}}", parts.join(","))
        };
        match find_all_roots(&p, cfg) {
            Ok(report) => {
                let distance = match_roots(&report.roots, &roots).unwrap_or(f64::INFINITY);
                out.matching.check_at_most(distance, RECOVERY_TOL, case);
                out.reconstruction
                    .check_at_most(report.reconstruction_error, RECOVERY_TOL, case);
                out.report
                    .merge(&check_report_with(&p, &report, cfg.tol_residual));
            }
            Err(_) => {
                out.matching.record(false, f64::NEG_INFINITY, case);
                out.reconstruction.record(false, f64::NEG_INFINITY, case);
                out.report.record(false, f64::NEG_INFINITY, case);
            }
        }
    }
    out
}

/// Every suite at a size that runs in a few seconds; used by `verify`.
pub fn standard_suites(seed: u64, cfg: &SolverConfig) -> Vec<PropertyReport> {
    let mut reports = vec![descent_suite(seed, 2_000)];
    reports.extend(lemma_suite(seed, 200, 200).into_vec());
    reports.push(boundary_suite(seed, 200, 1_024));
    reports.extend(recovery_suite(seed, 100, 10, cfg).into_vec());
    reports
}

/// Suites for one given polynomial: lemma checks at `centers` random centers,
/// the boundary floor, and a full solve checked by [`check_report_with`].
pub fn polynomial_suites(
    p: &Polynomial,
    seed: u64,
    centers: usize,
    cfg: &SolverConfig,
) -> Vec<PropertyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut descent = PropertyReport::new("strict_descent");
    let mut lemma = LemmaReports::new();
    for _ in 0..centers {
        let a = random_in_box(&mut rng, CENTER_BOX);
        if p.eval(a).norm() == 0.0 {
            continue;
        }
        let case = || {
            format!(
                "{{\"coeffs\":{},\"center\":{}}}",
                json_poly(p),
                json_complex(a)
            )
        };
        match build_step(p, a, DEFAULT_SHRINK) {
            Ok(step) => descent.check_less(p.eval(step.landing).norm(), p.eval(a).norm(), case),
            Err(_) => descent.record(false, f64::NEG_INFINITY, case),
        }
        lemma.merge(&lemma_checks(p, a, 200, &mut rng));
    }
    let mut reports = vec![descent];
    reports.extend(lemma.into_vec());
    reports.push(check_boundary_floor(p, 4_096));
    let mut solved = PropertyReport::new("root_report");
    match find_all_roots(p, cfg) {
        Ok(report) => solved.merge(&check_report_with(p, &report, cfg.tol_residual)),
        Err(_) => solved.record(false, f64::NEG_INFINITY, || {
            format!("{{\"coeffs\":{}}}", json_poly(p))
        }),
    }
    reports.push(solved);
    reports
}
