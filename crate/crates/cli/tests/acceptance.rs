//! Acceptance criteria. Runs as a plain binary so each criterion prints one
//! PASS/FAIL line under `cargo test`; exits nonzero if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::result::Result;
use std::time::{Duration, Instant};

use bandsinc::experiments::{
    exp_error_comparison, sinc2_experiment, BetaPolicy, ExpComparisonRow, ProbeInterval,
};
use bandsinc::geometry::{decode_linear, grid_indices};
use bandsinc::oracle::{dense_bandlimited_apply, dense_nfft_apply, direct_dft, shannon_direct};
use bandsinc::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Tolerances.
const TRANSFORM_TOL: f64 = 1e-12;
const FFT_TOL: f64 = 1e-13;
const IDENTITY_TOL: f64 = 1e-15;
const PROPERTY_TOL: f64 = 1e-12;
const OUT_OF_BAND_FLOOR: f64 = 0.01;
const FULL_INTERVAL_FLOOR: f64 = 0.01;
const FROZEN_SLACK: f64 = 2.0;
const SMALL_M_RATIO: f64 = 1.5;
/// Measured `err_bandlimited(200)/err_nfft(200)` is 0.172; the bound was
/// tightened from 0.5 after that run.
const LARGE_M_RATIO: f64 = 0.25;

// Shape parameter for the m = 2 grids, where both factor tables stay well
// away from zero even without oversampling.
const SMALL_GRID_BETA: f64 = 3.0;

/// Max bandlimited error over `|v| <= 9.875` on the truncated interval
/// (M=20, λ=1, m=5, sinh-type with calibrated β = 2.5π, S=32, P=1000),
/// measured by the dense sweep oracle.
const FROZEN_BANDLIMITED_MAX: f64 = 4.6466752765166486e-4;

/// NFFT error at integer v = 0, 1, ..., 10 on the full interval (same
/// parameters, S=1), measured by the dense sweep oracle; even in v.
const FROZEN_NFFT_FULL: [f64; 11] = [
    4.825054e-4,
    3.476435e-4,
    6.473944e-5,
    4.783034e-4,
    8.245773e-4,
    7.440075e-4,
    2.466229e-4,
    2.238204e-3,
    5.515680e-3,
    7.842344e-3,
    9.062203e-3,
];

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit_s: u64) -> bool {
    elapsed <= Duration::from_secs(limit_s)
}

fn relative_defect(a: &[Complex64], b: &[Complex64]) -> f64 {
    let diff = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    let scale = b.iter().map(|y| y.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

fn complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_nodes(g: &Geometry, mode: DomainMode, count: usize, rng: &mut ChaCha8Rng) -> NodeSet {
    let b = match mode {
        DomainMode::Restricted => g.restricted_bound(),
        DomainMode::Periodic => 0.5,
    };
    let coords = (0..count * g.dim())
        .map(|_| match mode {
            DomainMode::Restricted => rng.gen_range(-b..=b),
            DomainMode::Periodic => rng.gen_range(-b..b),
        })
        .collect();
    validate_flat(coords, g.dim(), g, mode).unwrap()
}

fn small_geometry(dim: usize, bandwidth: usize, lambda: i64) -> Geometry {
    Geometry::new(dim, bandwidth, Rational::from_integer(lambda), 2).unwrap()
}

const FAMILIES: [WindowFamily; 2] = [WindowFamily::SinhType, WindowFamily::ContinuousKaiserBessel];

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for family in FAMILIES {
        for dim in [1, 2] {
            for bandwidth in [4, 8] {
                for lambda in [0, 1] {
                    let g = small_geometry(dim, bandwidth, lambda);
                    let w = WindowSpec::for_geometry(family, SMALL_GRID_BETA, &g).unwrap();
                    let restricted = random_nodes(&g, DomainMode::Restricted, 7, &mut rng);
                    let periodic = random_nodes(&g, DomainMode::Periodic, 7, &mut rng);
                    let bl = plan_bandlimited(&g, &w, &restricted).unwrap();
                    let nf = plan_nfft(&g, &w, &periodic).unwrap();
                    for _ in 0..20 {
                        let s = Spectrum::from_fn(bandwidth, dim, |_| complex(&mut rng)).unwrap();
                        let fast = execute_bandlimited(&bl, &s).unwrap();
                        worst = worst.max(relative_defect(
                            &fast,
                            &dense_bandlimited_apply(&g, &w, &restricted, &s).unwrap(),
                        ));
                        let fast = execute_nfft(&nf, &s).unwrap();
                        worst = worst.max(relative_defect(
                            &fast,
                            &dense_nfft_apply(&g, &w, &periodic, &s).unwrap(),
                        ));
                    }
                }
            }
        }
    }
    let t = start.elapsed();
    outcome(
        worst <= TRANSFORM_TOL && within(t, 5),
        format!("max relative defect {worst:.2e} (<= {TRANSFORM_TOL:.0e}), {t:.2?} (<= 5 s)"),
    )
}

fn fft_correctness() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut worst, mut identity): (f64, f64) = (0.0, 0.0);
    for len in [4, 8, 12, 16, 20, 40] {
        for dim in [1, 2] {
            let n = len * if dim == 2 { len } else { 1 };
            for _ in 0..10 {
                let c =
                    GridCoefficients::new(len, dim, (0..n).map(|_| complex(&mut rng)).collect())
                        .unwrap();
                let fast = inverse_dft_grid(&c).unwrap();
                worst = worst.max(relative_defect(
                    fast.values(),
                    direct_dft(&c).unwrap().values(),
                ));
            }
            let origin = grid_indices(len, dim)
                .iter()
                .position(|k| k.0.iter().all(|&t| t == 0))
                .unwrap();
            let mut impulse = GridCoefficients::zeros(len, dim).unwrap();
            impulse.values_mut()[origin] = Complex64::new(1.0, 0.0);
            for v in inverse_dft_grid(&impulse).unwrap().values() {
                identity = identity.max((v - 1.0 / n as f64).norm());
            }
            let constant =
                GridCoefficients::new(len, dim, vec![Complex64::new(1.0, 0.0); n]).unwrap();
            for (q, v) in inverse_dft_grid(&constant)
                .unwrap()
                .values()
                .iter()
                .enumerate()
            {
                identity = identity.max((v - if q == origin { 1.0 } else { 0.0 }).norm());
            }
        }
    }
    let t = start.elapsed();
    outcome(
        worst <= FFT_TOL && identity <= IDENTITY_TOL && within(t, 5),
        format!("fft defect {worst:.2e} (<= {FFT_TOL:.0e}), identities {identity:.2e} (<= {IDENTITY_TOL:.0e}), {t:.2?} (<= 5 s)"),
    )
}

fn interpolation_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let len = 40;
    let mut misses = 0usize;
    let mut cases = 0usize;
    for family in FAMILIES {
        for m in [2, 5] {
            let w = WindowSpec::new(
                family,
                default_beta(family, 5, Rational::from_integer(1)).unwrap(),
                m,
                len,
            )
            .unwrap();
            let samples =
                GridSamples::new(len, 1, (0..len).map(|_| complex(&mut rng)).collect()).unwrap();
            for (p, stored) in samples.values().iter().enumerate() {
                let x = decode_linear(p, len, 1)[0] as f64 / len as f64;
                cases += 1;
                if shannon_direct(&samples, &w, &[x]).unwrap() != *stored {
                    misses += 1;
                }
            }
        }
    }
    outcome(
        misses == 0,
        format!("{misses} of {cases} grid points differ from the stored sample"),
    )
}

fn window_axioms() -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    for family in FAMILIES {
        for beta in [1.0, 5.0, 10.0, 20.0] {
            for m in [2, 5] {
                for len in [16, 40] {
                    count += 1;
                    let w = WindowSpec::new(family, beta, m, len).unwrap();
                    if !window_axioms_report(&w, 1001).unwrap().all_passed() {
                        failures.push(format!("{family} beta={beta} m={m} L={len}"));
                    }
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} of {count} windows pass all axioms {failures:?}",
            count - failures.len()
        ),
    )
}

struct Sweep {
    rows: Vec<ExpComparisonRow>,
    elapsed: Duration,
}

fn fig1_setup() -> (Geometry, WindowSpec) {
    let one = Rational::from_integer(1);
    let g = Geometry::new(1, 20, one, 5).unwrap();
    let beta = default_beta(WindowFamily::SinhType, 5, one).unwrap();
    let w = WindowSpec::for_geometry(WindowFamily::SinhType, beta, &g).unwrap();
    (g, w)
}

fn fig1(interval: ProbeInterval, subdivisions: usize) -> Sweep {
    let start = Instant::now();
    let (g, w) = fig1_setup();
    let rows =
        exp_error_comparison(&g, &w, subdivisions, 1000, interval, Execution::default()).unwrap();
    Sweep {
        rows,
        elapsed: start.elapsed(),
    }
}

const IN_BAND: f64 = 10.0 - 5.0 / 40.0;

fn fig1_dominance(sweep: &Sweep) -> Outcome {
    let band: Vec<_> = sweep.rows.iter().filter(|r| r.v.abs() <= IN_BAND).collect();
    let violations: Vec<f64> = band
        .iter()
        .filter(|r| r.err_bandlimited > r.err_nfft)
        .map(|r| r.v)
        .collect();
    outcome(
        violations.is_empty() && within(sweep.elapsed, 60),
        format!(
            "{} of {} in-band frequencies with err_bandlimited > err_nfft {:?}, sweep {:.2?} (<= 60 s)",
            violations.len(),
            band.len(),
            violations,
            sweep.elapsed
        ),
    )
}

fn fig1_frozen_max(sweep: &Sweep) -> Outcome {
    let worst = sweep
        .rows
        .iter()
        .filter(|r| r.v.abs() <= IN_BAND)
        .map(|r| r.err_bandlimited)
        .fold(0.0, f64::max);
    let limit = FROZEN_SLACK * FROZEN_BANDLIMITED_MAX;
    outcome(
        worst <= limit,
        format!("in-band max err_bandlimited {worst:.4e} (<= {limit:.4e})"),
    )
}

fn fig1_out_of_band(sweep: &Sweep) -> Outcome {
    let out: Vec<_> = sweep.rows.iter().filter(|r| r.v.abs() >= 11.0).collect();
    let min_nfft = out.iter().map(|r| r.err_nfft).fold(f64::INFINITY, f64::min);
    let (v_bl, min_bl) = out
        .iter()
        .map(|r| (r.v, r.err_bandlimited))
        .fold((0.0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
    outcome(
        min_nfft >= OUT_OF_BAND_FLOOR && min_bl >= OUT_OF_BAND_FLOOR,
        format!("for |v| >= 11: min err_nfft {min_nfft:.3e}, min err_bandlimited {min_bl:.3e} at v={v_bl} (both >= {OUT_OF_BAND_FLOOR})"),
    )
}

fn fig1_full_interval() -> Outcome {
    let coarse = fig1(ProbeInterval::Full, 1);
    let fine = fig1(ProbeInterval::Full, 32);
    let mut exceed = Vec::new();
    for r in coarse.rows.iter().filter(|r| r.v.abs() <= 10.0) {
        let frozen = FROZEN_NFFT_FULL[r.v.abs() as usize];
        if r.err_nfft > FROZEN_SLACK * frozen {
            exceed.push((r.v, r.err_nfft));
        }
    }
    let worst = fine
        .rows
        .iter()
        .filter(|r| r.v.abs() <= 10.0 && r.v.fract() != 0.0)
        .map(|r| r.err_bandlimited)
        .fold(0.0, f64::max);
    let t = coarse.elapsed + fine.elapsed;
    outcome(
        exceed.is_empty() && worst > FULL_INTERVAL_FLOOR && within(t, 60),
        format!(
            "integer-v err_nfft above 2x frozen {exceed:?}; max non-integer in-band err_bandlimited {worst:.3e} (> {FULL_INTERVAL_FLOOR}), {t:.2?} (<= 60 s)"
        ),
    )
}

fn fig2() -> Outcome {
    let start = Instant::now();
    let bandwidths: Vec<usize> = (20..=200).step_by(20).collect();
    let rows = sinc2_experiment(
        &bandwidths,
        Rational::from_integer(1),
        5,
        WindowFamily::SinhType,
        BetaPolicy::Auto,
    )
    .unwrap();
    let t = start.elapsed();
    let mut bad = Vec::new();
    for r in &rows {
        let bound = if r.bandwidth <= 80 {
            SMALL_M_RATIO
        } else {
            1.0
        };
        if r.err_bandlimited > bound * r.err_nfft {
            bad.push(r.bandwidth);
        }
    }
    let (first, last) = (rows[0], rows[rows.len() - 1]);
    let decays = last.err_bandlimited < first.err_bandlimited;
    let beats = last.err_bandlimited <= LARGE_M_RATIO * last.err_nfft;
    let ratios: Vec<String> = rows
        .iter()
        .map(|r| format!("{:.3}", r.err_bandlimited / r.err_nfft))
        .collect();
    outcome(
        bad.is_empty() && decays && beats && within(t, 120),
        format!(
            "ratios err_bandlimited/err_nfft [{}], bound violations at M={bad:?}, err_bandlimited {:.3e} -> {:.3e}, {t:.2?} (<= 120 s)",
            ratios.join(", "),
            first.err_bandlimited,
            last.err_bandlimited
        ),
    )
}

fn properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut linear, mut imag): (f64, f64) = (0.0, 0.0);
    let half = 4i64;
    for i in 0..50 {
        let family = FAMILIES[i % 2];
        let g = small_geometry(1 + i % 4 / 2, 8, 1);
        let w = WindowSpec::for_geometry(family, rng.gen_range(2.0..6.0), &g).unwrap();
        let restricted = random_nodes(&g, DomainMode::Restricted, 7, &mut rng);
        let periodic = random_nodes(&g, DomainMode::Periodic, 7, &mut rng);
        let bl = plan_bandlimited(&g, &w, &restricted).unwrap();
        let nf = plan_nfft(&g, &w, &periodic).unwrap();
        let run = |s: &Spectrum| [bl.execute(s).unwrap(), nf.execute(s).unwrap()];

        let a = Spectrum::from_fn(8, g.dim(), |_| complex(&mut rng)).unwrap();
        let b = Spectrum::from_fn(8, g.dim(), |_| complex(&mut rng)).unwrap();
        let (alpha, beta) = (complex(&mut rng), complex(&mut rng));
        let mix = Spectrum::new(
            8,
            g.dim(),
            a.values()
                .iter()
                .zip(b.values())
                .map(|(x, y)| alpha * x + beta * y)
                .collect(),
        )
        .unwrap();
        let (fa, fb, fm) = (run(&a), run(&b), run(&mix));
        for t in 0..2 {
            let rhs: Vec<Complex64> = fa[t]
                .iter()
                .zip(&fb[t])
                .map(|(x, y)| alpha * x + beta * y)
                .collect();
            linear = linear.max(relative_defect(&fm[t], &rhs));
        }

        let raw = Spectrum::from_fn(8, g.dim(), |_| complex(&mut rng)).unwrap();
        let sym = Spectrum::from_fn(8, g.dim(), |k| {
            if k.iter().any(|&t| t == -half) {
                return Complex64::new(0.0, 0.0);
            }
            let mirror: Vec<i64> = k.iter().map(|&t| -t).collect();
            (raw.get(k) + raw.get(&mirror).conj()) * 0.5
        })
        .unwrap();
        for out in run(&sym) {
            let scale = out.iter().map(|z| z.norm()).fold(0.0, f64::max);
            imag = imag.max(out.iter().map(|z| z.im.abs()).fold(0.0, f64::max) / scale);
        }
    }
    outcome(
        linear <= PROPERTY_TOL && imag <= PROPERTY_TOL,
        format!("linearity defect {linear:.2e}, relative imaginary part {imag:.2e} (both <= {PROPERTY_TOL:.0e})"),
    )
}

fn reserializes(path: &Path, header: &str, rows: usize) -> Result<(), String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let mut lines = text.lines();
    if lines.next() != Some(header) {
        return Err(format!("{}: bad header", path.display()));
    }
    let body: Vec<&str> = lines.collect();
    if body.len() != rows {
        return Err(format!(
            "{}: {} rows, expected {rows}",
            path.display(),
            body.len()
        ));
    }
    for line in body {
        let mut fields = line.split(',');
        let key = fields.next().unwrap_or_default();
        let rewritten: Vec<String> = fields
            .map(|f| {
                f.parse::<f64>()
                    .map(|x| format!("{x:.16e}"))
                    .map_err(|e| format!("{f}: {e}"))
            })
            .collect::<Result<_, _>>()?;
        let key_out = match key.parse::<usize>() {
            Ok(n) => n.to_string(),
            Err(_) => format!(
                "{:.16e}",
                key.parse::<f64>().map_err(|e| format!("{key}: {e}"))?
            ),
        };
        let again = format!("{key_out},{}", rewritten.join(","));
        if again != line {
            return Err(format!(
                "{}: {line:?} re-serializes as {again:?}",
                path.display()
            ));
        }
    }
    Ok(())
}

fn cli_round_trip() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_bandsinc");
    let dir = tempfile::tempdir().unwrap();
    let f1 = dir.path().join("fig1.csv");
    let f2 = dir.path().join("fig2.csv");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    let selftest = status(&["selftest"]);
    let fig1 = status(&["fig1", "--out", f1.to_str().unwrap()]);
    let fig2 = status(&["fig2", "--out", f2.to_str().unwrap()]);
    let mut problems = Vec::new();
    for (name, code) in [("selftest", selftest), ("fig1", fig1), ("fig2", fig2)] {
        if code != Some(0) {
            problems.push(format!("{name} exited with {code:?}"));
        }
    }
    if problems.is_empty() {
        for r in [
            reserializes(&f1, "v,err_nfft,err_bandlimited", 961),
            reserializes(&f2, "M,err_nfft,err_bandlimited", 10),
        ] {
            if let Err(e) = r {
                problems.push(e);
            }
        }
    }
    outcome(
        problems.is_empty(),
        if problems.is_empty() {
            "selftest, fig1 (961 rows), fig2 (10 rows) ok".into()
        } else {
            problems.join("; ")
        },
    )
}

type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn main() {
    let truncated = fig1(ProbeInterval::Truncated, 32);
    let criteria: Vec<(&str, Check<'_>)> = vec![
        ("1 oracle equivalence", Box::new(oracle_equivalence)),
        ("2 fft correctness", Box::new(fft_correctness)),
        (
            "3 interpolation exactness",
            Box::new(interpolation_exactness),
        ),
        ("4 window axioms", Box::new(window_axioms)),
        (
            "5a in-band dominance",
            Box::new(|| fig1_dominance(&truncated)),
        ),
        (
            "5b in-band error level",
            Box::new(|| fig1_frozen_max(&truncated)),
        ),
        (
            "5c out-of-band failure",
            Box::new(|| fig1_out_of_band(&truncated)),
        ),
        ("6 full interval", Box::new(fig1_full_interval)),
        ("7 sinc2 experiment", Box::new(fig2)),
        ("8 linearity and symmetry", Box::new(properties)),
        ("9 cli round trip", Box::new(cli_round_trip)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !result.passed {
            failed += 1;
        }
        println!(
            "criterion {name}: {} ({})",
            if result.passed { "PASS" } else { "FAIL" },
            result.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
