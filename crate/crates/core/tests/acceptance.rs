//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Every tolerance below is fixed here.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use descent_roots::verify::{
    boundary_suite, descent_suite, lemma_suite, match_roots, random_in_box, recovery_suite,
    PropertyReport, NEGATIVITY_TOL, ROOT_BOX,
};
use descent_roots::{find_all_roots, ComplexNumber, Polynomial, SolverConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;
const TIME_LIMIT_SECS: f64 = 60.0;
const BIN: &str = env!("CARGO_BIN_EXE_descent-roots");

struct Outcome {
    passed: bool,
    detail: String,
}

fn from_reports(reports: &[&PropertyReport]) -> Outcome {
    let passed = reports.iter().all(|r| r.passed() && r.trials > 0);
    let detail = reports
        .iter()
        .map(|r| {
            format!(
                "{}: {}/{} failures, worst margin {:.3e}",
                r.property_name, r.failures, r.trials, r.worst_margin
            )
        })
        .collect::<Vec<_>>()
        .join("; ");
    let worst = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| format!(" worst case {}", r.worst_case))
        .collect::<String>();
    Outcome {
        passed,
        detail: detail + &worst,
    }
}

fn c(re: f64, im: f64) -> ComplexNumber {
    ComplexNumber::new(re, im)
}

fn lemma_descent() -> Outcome {
    let r = descent_suite(SEED, 10_000);
    let mut out = from_reports(&[&r]);
    out.passed &= r.trials == 10_000;
    out
}

fn lemma_corpus() -> descent_roots::verify::LemmaReports {
    lemma_suite(SEED + 1, 1_000, 1_000)
}

fn closed_forms() -> Outcome {
    let cfg = SolverConfig::default();
    let cases: Vec<(&str, Polynomial, Vec<ComplexNumber>)> = vec![
        (
            "z^3-1",
            Polynomial::from_real(&[-1.0, 0.0, 0.0, 1.0]),
            (0..3)
                .map(|k| ComplexNumber::from_polar(1.0, 2.0 * PI * k as f64 / 3.0))
                .collect(),
        ),
        (
            "z^4+1",
            Polynomial::from_real(&[1.0, 0.0, 0.0, 0.0, 1.0]),
            [1, 3, 5, 7]
                .iter()
                .map(|&k| ComplexNumber::from_polar(1.0, PI * k as f64 / 4.0))
                .collect(),
        ),
        (
            "wilkinson-5",
            Polynomial::from_real(&[-120.0, 274.0, -225.0, 85.0, -15.0, 1.0]),
            (1..=5).map(|k| c(k as f64, 0.0)).collect(),
        ),
    ];
    let mut passed = true;
    let mut detail = Vec::new();
    for (name, p, known) in cases {
        match find_all_roots(&p, &cfg) {
            Ok(report) => {
                let residual = report.residuals.iter().copied().fold(0.0, f64::max);
                let distance = match_roots(&report.roots, &known).unwrap_or(f64::INFINITY);
                passed &= residual <= 1e-8 && distance <= 1e-6;
                detail.push(format!(
                    "{name}: residual {residual:.2e}, distance {distance:.2e}"
                ));
            }
            Err(e) => {
                passed = false;
                detail.push(format!("{name}: {e}"));
            }
        }
    }
    Outcome {
        passed,
        detail: detail.join("; "),
    }
}

fn double_roots() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let cfg = SolverConfig::default();
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for _ in 0..100 {
        let r = random_in_box(&mut rng, ROOT_BOX);
        let p = Polynomial::from_roots(&[r, r], c(1.0, 0.0));
        match find_all_roots(&p, &cfg) {
            Ok(report) => {
                let d = report
                    .roots
                    .iter()
                    .map(|z| (z - r).norm())
                    .fold(0.0, f64::max);
                worst = worst.max(d);
                if !(report.roots.len() == 2 && d <= 1e-4) {
                    failures += 1;
                }
            }
            Err(_) => failures += 1,
        }
    }
    Outcome {
        passed: failures == 0,
        detail: format!("{failures}/100 failures, worst distance {worst:.2e}"),
    }
}

fn run_cli(args: &[&str]) -> std::process::Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn strictly_decreasing_csv(path: &Path) -> Result<usize, String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let mut lines = text.lines();
    if lines.next() != Some("iter,re,im,modulus") {
        return Err("bad header".into());
    }
    let moduli: Vec<f64> = lines
        .map(|l| {
            l.split(',')
                .nth(3)
                .and_then(|m| m.parse().ok())
                .ok_or("bad row")
        })
        .collect::<Result<_, _>>()?;
    if moduli.is_empty() {
        return Err("empty trace".into());
    }
    if moduli.windows(2).any(|w| w[1].is_nan() || w[1] >= w[0]) {
        return Err("modulus column not strictly decreasing".into());
    }
    Ok(moduli.len())
}

fn trace_monotonicity(dir: &Path) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let mut inputs = vec!["[[-6,0],[11,0],[-6,0],[1,0]]".to_string()];
    for _ in 0..19 {
        let p = descent_roots::verify::random_polynomial(&mut rng, 8);
        inputs.push(descent_roots::cli::format_coeffs(&p));
    }
    let mut files = 0;
    let mut rows = 0;
    let mut errors = Vec::new();
    for (i, coeffs) in inputs.iter().enumerate() {
        for (kind, extra) in [("trace", vec![]), ("solve", vec!["--best-of-m"])] {
            let csv = dir.join(format!("{kind}-{i}.csv"));
            let out = dir.join(format!("{kind}-{i}.out"));
            let mut args = vec![kind, "--coeffs", coeffs, "--trace", csv.to_str().unwrap()];
            args.extend(["--out", out.to_str().unwrap()]);
            args.extend(extra);
            let status = run_cli(&args).status;
            if !status.success() {
                errors.push(format!("{kind} #{i} exited {status}"));
                continue;
            }
            files += 1;
            match strictly_decreasing_csv(&csv) {
                Ok(n) => rows += n,
                Err(e) => errors.push(format!("{kind} #{i}: {e}")),
            }
        }
    }
    Outcome {
        passed: errors.is_empty() && files == 2 * inputs.len(),
        detail: format!(
            "{files} trace files, {rows} rows checked; {}",
            errors.join("; ")
        ),
    }
}

fn cli_determinism(dir: &Path) -> Outcome {
    let wilkinson = "[[-120,0],[274,0],[-225,0],[85,0],[-15,0],[1,0]]";
    let invocations: Vec<(&str, Vec<&str>)> = vec![
        ("solve", vec!["solve", "--coeffs", wilkinson]),
        (
            "solve-trace",
            vec![
                "solve",
                "--coeffs",
                "[[1,2],[0,0],[-3,1],[0.5,0],[2,-1]]",
                "--best-of-m",
            ],
        ),
        (
            "trace",
            vec!["trace", "--coeffs", wilkinson, "--start", "[0.5,0.5]"],
        ),
        ("verify", vec!["verify", "--seed", "42"]),
    ];
    let mut passed = true;
    let mut detail = Vec::new();
    for (name, args) in invocations {
        let mut contents = Vec::new();
        for run in 0..2 {
            let path = dir.join(format!("det-{name}-{run}"));
            let mut full = args.clone();
            full.extend(["--out", path.to_str().unwrap()]);
            let status = run_cli(&full).status;
            passed &= status.success();
            contents.push(std::fs::read(&path).unwrap_or_default());
        }
        let same = !contents[0].is_empty() && contents[0] == contents[1];
        passed &= same;
        detail.push(format!(
            "{name}: {}",
            if same { "identical" } else { "DIFFERENT" }
        ));
    }
    Outcome {
        passed,
        detail: detail.join("; "),
    }
}

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    assert_eq!(NEGATIVITY_TOL, 1e-12);

    let mut results: Vec<(u32, &str, Outcome, f64)> = Vec::new();
    let mut timed = |id: u32, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let outcome = f();
        results.push((id, name, outcome, t.elapsed().as_secs_f64()));
    };

    timed(1, "lemma descent certainty", &mut lemma_descent);
    let t = Instant::now();
    let lemma = lemma_corpus();
    let lemma_secs = t.elapsed().as_secs_f64();
    timed(2, "split inequalities sampling", &mut || {
        let mut o = from_reports(&[&lemma.split_inequalities]);
        o.passed &= lemma.split_inequalities.trials == 2 * 1_000 * 1_000;
        o
    });
    timed(3, "negativity identity", &mut || {
        from_reports(&[&lemma.negativity])
    });
    timed(4, "remark containment", &mut || {
        from_reports(&[&lemma.remark_containment, &lemma.final_bound])
    });
    timed(5, "boundary floor", &mut || {
        from_reports(&[&boundary_suite(SEED + 2, 1_000, 4_096)])
    });
    timed(6, "root recovery", &mut || {
        let r = recovery_suite(SEED + 3, 500, 10, &SolverConfig::default());
        from_reports(&[&r.matching, &r.reconstruction])
    });
    timed(7, "closed-form fixtures", &mut closed_forms);
    timed(8, "double-root degradation bound", &mut double_roots);
    timed(9, "trace monotonicity", &mut || {
        trace_monotonicity(dir.path())
    });
    timed(10, "CLI determinism", &mut || cli_determinism(dir.path()));

    let mut all = true;
    for (id, name, outcome, secs) in &results {
        // criteria 2-4 share one corpus
        let secs = if (2..=4).contains(id) {
            secs + lemma_secs
        } else {
            *secs
        };
        let in_time = secs < TIME_LIMIT_SECS;
        let ok = outcome.passed && in_time;
        all &= ok;
        println!(
            "[{}] criterion {id:>2} {name} ({secs:.1}s{}): {}",
            if ok { "PASS" } else { "FAIL" },
            if in_time { "" } else { ", over time limit" },
            outcome.detail
        );
    }
    if !all {
        std::process::exit(1);
    }
}
