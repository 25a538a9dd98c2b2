//! Compactly supported window functions on `[-m/L, m/L]`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::experiments::{exp_error_sweep_with, ExpSweepConfig, ProbeInterval, SweepMethod};
use crate::geometry::{Geometry, Rational};
use crate::special::bessel_i0_minus_one;

pub use crate::special::bessel_i0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WindowFamily {
    /// `sinh(β√(1-(Lx/m)²)) / sinh β`
    SinhType,
    /// `(I0(β√(1-(Lx/m)²)) - 1) / (I0(β) - 1)`
    ContinuousKaiserBessel,
}

impl fmt::Display for WindowFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WindowFamily::SinhType => "sinh",
            WindowFamily::ContinuousKaiserBessel => "ckb",
        })
    }
}

impl FromStr for WindowFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sinh" | "sinh-type" => Ok(WindowFamily::SinhType),
            "ckb" | "kaiser-bessel" | "continuous-kaiser-bessel" => {
                Ok(WindowFamily::ContinuousKaiserBessel)
            }
            _ => Err(Error::InvalidArgument(format!(
                "unknown window family {s:?}"
            ))),
        }
    }
}

/// A window of the given family with shape `beta`, half-width `m` grid
/// cells and grid length `L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowSpec {
    family: WindowFamily,
    beta: f64,
    m: usize,
    grid_len: usize,
    /// `sinh β` or `I0(β) - 1`
    norm: f64,
}

impl WindowSpec {
    pub fn new(family: WindowFamily, beta: f64, m: usize, grid_len: usize) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::BadShapeParameter(beta));
        }
        if m == 0 || grid_len == 0 {
            return Err(Error::InvalidArgument(format!(
                "window needs m >= 1 and L >= 1 (m = {m}, L = {grid_len})"
            )));
        }
        let norm = match family {
            WindowFamily::SinhType => -(-2.0 * beta).exp_m1(),
            WindowFamily::ContinuousKaiserBessel => bessel_i0_minus_one(beta),
        };
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::BadShapeParameter(beta));
        }
        Ok(WindowSpec {
            family,
            beta,
            m,
            grid_len,
            norm,
        })
    }

    /// Window matching the truncation and grid length of `geometry`.
    pub fn for_geometry(family: WindowFamily, beta: f64, geometry: &Geometry) -> Result<Self> {
        Self::new(family, beta, geometry.truncation(), geometry.grid_len())
    }

    pub fn family(&self) -> WindowFamily {
        self.family
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn grid_len(&self) -> usize {
        self.grid_len
    }

    /// `m/L`.
    pub fn support_radius(&self) -> f64 {
        self.m as f64 / self.grid_len as f64
    }

    /// `φ(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        self.profile(self.grid_len as f64 * x)
    }

    /// Tensor-product window `∏_t φ(x_t)`.
    pub fn eval_multi(&self, x: &[f64]) -> f64 {
        x.iter().map(|&t| self.eval(t)).product()
    }

    /// Window as a function of the grid offset `u = L·x`; zero for `|u| >= m`.
    pub(crate) fn profile(&self, u: f64) -> f64 {
        let r = u / self.m as f64;
        if !(r.abs() < 1.0) {
            return 0.0;
        }
        self.profile_sqrt((1.0 - r * r).sqrt())
    }

    /// Window in terms of `s = √(1 - (Lx/m)²) ∈ [0, 1]`.
    pub(crate) fn profile_sqrt(&self, s: f64) -> f64 {
        match self.family {
            // sinh(βs)/sinh(β) = e^{β(s-1)} (1 - e^{-2βs}) / (1 - e^{-2β}), overflow free
            WindowFamily::SinhType => {
                (self.beta * (s - 1.0)).exp() * (-(-2.0 * self.beta * s).exp_m1()) / self.norm
            }
            WindowFamily::ContinuousKaiserBessel => bessel_i0_minus_one(self.beta * s) / self.norm,
        }
    }
}

/// `φ(x)` for the window described by `spec`.
pub fn window_eval(spec: &WindowSpec, x: f64) -> f64 {
    spec.eval(x)
}

/// Candidate grid of the shape calibration: `πm·2^(j/8)`, `j = -16..=8`.
pub fn beta_candidates(m: usize) -> Vec<f64> {
    (-16..=8)
        .map(|j| std::f64::consts::PI * m as f64 * 2f64.powf(j as f64 / 8.0))
        .collect()
}

/// Bandwidth, subdivision and probe count of the shape calibration run.
pub const CALIBRATION_BANDWIDTH: usize = 20;
pub const CALIBRATION_SUBDIVISIONS: usize = 4;
pub const CALIBRATION_PROBES: usize = 256;

/// Result of [`calibrate_beta`].
#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    pub beta: f64,
    pub error: f64,
    /// `(β, max in-band error)` for every candidate.
    pub candidates: Vec<(f64, f64)>,
}

/// Sweeps [`beta_candidates`] and measures the worst exponential
/// approximation error of the regularized-sinc method over in-band
/// frequencies `|v| <= M/2 - m/L` on the truncated node interval, at
/// `M = 20`, four frequency subdivisions and 256 probes.
pub fn calibrate_beta(family: WindowFamily, m: usize, lambda: Rational) -> Result<Calibration> {
    let geometry = Geometry::new(1, CALIBRATION_BANDWIDTH, lambda, m)?;
    let limit = CALIBRATION_BANDWIDTH as f64 / 2.0
        - geometry.truncation() as f64 / geometry.grid_len() as f64;
    let betas = beta_candidates(m);
    let candidates = exec::try_map_range(betas.len(), Execution::default(), |i| {
        let window = WindowSpec::for_geometry(family, betas[i], &geometry)?;
        let config = ExpSweepConfig {
            geometry: geometry.clone(),
            window,
            subdivisions: CALIBRATION_SUBDIVISIONS,
            probes: CALIBRATION_PROBES,
            interval: ProbeInterval::Truncated,
            method: SweepMethod::BandlimitedApprox,
        };
        let rows = exp_error_sweep_with(&config, Execution::Sequential)?;
        let worst = rows
            .iter()
            .filter(|row| row.v.abs() <= limit)
            .map(|row| row.error)
            .fold(0.0f64, f64::max);
        Ok((betas[i], worst))
    })?;
    let (beta, error) = candidates
        .iter()
        .copied()
        .fold((f64::NAN, f64::INFINITY), |best, c| {
            if c.1 < best.1 {
                c
            } else {
                best
            }
        });
    if !(error <= 0.5) {
        return Err(Error::CalibrationDegenerate { best_error: error });
    }
    Ok(Calibration {
        beta,
        error,
        candidates,
    })
}

/// Calibrated default shape parameter for `(family, m, λ)`, memoized per
/// process.
pub fn default_beta(family: WindowFamily, m: usize, lambda: Rational) -> Result<f64> {
    static CACHE: OnceLock<Mutex<HashMap<(WindowFamily, usize, Rational), f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (family, m, lambda);
    if let Some(&beta) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Ok(beta);
    }
    let beta = calibrate_beta(family, m, lambda)?.beta;
    cache
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .insert(key, beta);
    Ok(beta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    Evenness,
    Range,
    MonotoneNonIncreasing,
    UnitPeak,
    ZeroAtBoundary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub passed: bool,
    /// Probe point with the largest violation (or largest deviation when
    /// passing).
    pub worst_x: f64,
    pub worst_violation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomsReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomsReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, axiom: Axiom) -> &AxiomCheck {
        self.checks
            .iter()
            .find(|c| c.axiom == axiom)
            .expect("every axiom is checked")
    }
}

/// Probes the window class axioms on `samples` equispaced points over
/// `[-m/L, m/L]`.
pub fn window_axioms_report(spec: &WindowSpec, samples: usize) -> Result<AxiomsReport> {
    if samples < 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least 3 probe samples, got {samples}"
        )));
    }
    let radius = spec.support_radius();
    let step = 2.0 * radius / (samples - 1) as f64;
    let probes: Vec<f64> = (0..samples)
        .map(|i| {
            if i == samples - 1 {
                radius
            } else {
                -radius + i as f64 * step
            }
        })
        .collect();

    let worst = |axiom: Axiom, it: &mut dyn Iterator<Item = (f64, f64)>, tol: f64| {
        let (worst_x, worst_violation) =
            it.fold((0.0, 0.0f64), |acc, p| if p.1 > acc.1 { p } else { acc });
        AxiomCheck {
            axiom,
            passed: worst_violation <= tol,
            worst_x,
            worst_violation,
        }
    };

    let evenness = worst(
        Axiom::Evenness,
        &mut probes
            .iter()
            .map(|&x| (x, (spec.eval(x) - spec.eval(-x)).abs())),
        f64::EPSILON,
    );
    let range = worst(
        Axiom::Range,
        &mut probes.iter().map(|&x| {
            let v = spec.eval(x);
            let out = if v.is_nan() {
                f64::INFINITY
            } else {
                (-v).max(v - 1.0).max(0.0)
            };
            (x, out)
        }),
        0.0,
    );
    let mut right: Vec<f64> = probes.iter().map(|x| x.abs()).collect();
    right.sort_by(f64::total_cmp);
    let values: Vec<f64> = right.iter().map(|&x| spec.eval(x)).collect();
    let monotone = worst(
        Axiom::MonotoneNonIncreasing,
        &mut right
            .windows(2)
            .zip(values.windows(2))
            .map(|(x, v)| (x[1], (v[1] - v[0]).max(0.0))),
        0.0,
    );
    let peak = worst(
        Axiom::UnitPeak,
        &mut std::iter::once((0.0, (spec.eval(0.0) - 1.0).abs())),
        0.0,
    );
    let boundary = worst(
        Axiom::ZeroAtBoundary,
        &mut [radius, -radius]
            .into_iter()
            .map(|x| (x, spec.eval(x).abs())),
        0.0,
    );
    Ok(AxiomsReport {
        checks: vec![evenness, range, monotone, peak, boundary],
    })
}
