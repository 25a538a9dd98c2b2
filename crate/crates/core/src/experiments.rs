//! Error sweeps for the exponential approximation and the sinc² bandwidth
//! study, returned as in-memory tables.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::geometry::{
    nonperiodic_axis, periodic_axis, validate_flat, DomainMode, Geometry, NodeSet, Rational,
};
use crate::kernel::{phi_hat_1d, RegularizedSinc};
use crate::special::sinc;
use crate::transforms::{BandlimitedPlan, NfftPlan, Spectrum};
use crate::windows::{default_beta, WindowFamily, WindowSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeInterval {
    /// `[-1/2, 1/2)`
    Full,
    /// `[-1/2 + m/L, 1/2 - m/L)`
    Truncated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMethod {
    NfftApprox,
    BandlimitedApprox,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpSweepConfig {
    pub geometry: Geometry,
    pub window: WindowSpec,
    /// Frequency subdivisions per unit; 1 sweeps the integers.
    pub subdivisions: usize,
    /// Probe count `P`.
    pub probes: usize,
    pub interval: ProbeInterval,
    pub method: SweepMethod,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub v: f64,
    pub error: f64,
}

impl ExpSweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.geometry.dim() != 1 {
            return Err(Error::InvalidArgument("error sweeps are univariate".into()));
        }
        if self.subdivisions < 1 {
            return Err(Error::InvalidArgument(
                "subdivisions must be at least 1".into(),
            ));
        }
        if self.probes < 2 {
            return Err(Error::InvalidArgument(
                "at least 2 probes are required".into(),
            ));
        }
        if self.window.m() != self.geometry.truncation()
            || self.window.grid_len() != self.geometry.grid_len()
        {
            return Err(Error::WindowMismatch {
                window_m: self.window.m(),
                window_len: self.window.grid_len(),
                m: self.geometry.truncation(),
                grid_len: self.geometry.grid_len(),
            });
        }
        Ok(())
    }

    /// Number of rows, `S(M + 2m) + 1`.
    pub fn row_count(&self) -> usize {
        self.subdivisions * (self.geometry.bandwidth() + 2 * self.geometry.truncation()) + 1
    }

    /// Frequency of row `s`: `-M/2 - m + s/S`.
    pub fn frequency(&self, s: usize) -> f64 {
        let half = self.subdivisions * (self.geometry.bandwidth() / 2 + self.geometry.truncation());
        (s as f64 - half as f64) / self.subdivisions as f64
    }

    /// Left-closed, right-open equispaced probe grid.
    pub fn probe_points(&self) -> Vec<f64> {
        let a = match self.interval {
            ProbeInterval::Full => -0.5,
            ProbeInterval::Truncated => -self.geometry.restricted_bound(),
        };
        let width = -2.0 * a;
        (0..self.probes)
            .map(|p| a + p as f64 * width / self.probes as f64)
            .collect()
    }
}

/// `(ℓ, weight)` pairs of one probe.
type ProbeRow = Vec<(i64, f64)>;

fn probe_rows(config: &ExpSweepConfig, xs: &[f64]) -> Vec<ProbeRow> {
    let len = config.geometry.grid_len();
    let m = config.geometry.truncation();
    match config.method {
        SweepMethod::NfftApprox => xs
            .iter()
            .map(|&x| {
                periodic_axis(x, len, m)
                    .into_iter()
                    .map(|(l, u)| (l, config.window.profile(u)))
                    .collect()
            })
            .collect(),
        SweepMethod::BandlimitedApprox => {
            let kernel = RegularizedSinc::new(config.window);
            xs.iter()
                .map(|&x| {
                    nonperiodic_axis(x, len, m)
                        .into_iter()
                        .map(|(l, u)| (l, kernel.profile(u)))
                        .collect()
                })
                .collect()
        }
    }
}

/// `e(v_s) = max_p |e^{2πi v_s x_p} - h(x_p)|` for every `s = 0..=S(M+2m)`.
pub fn exp_error_sweep(config: &ExpSweepConfig) -> Result<Vec<SweepRow>> {
    exp_error_sweep_with(config, Execution::default())
}

pub fn exp_error_sweep_with(config: &ExpSweepConfig, exec: Execution) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let xs = config.probe_points();
    let rows = probe_rows(config, &xs);
    let len = config.geometry.grid_len() as f64;
    exec::try_map_range(config.row_count(), exec, |s| {
        let v = config.frequency(s);
        let scale = match config.method {
            SweepMethod::NfftApprox => {
                let phi_hat = phi_hat_1d(&config.window, v)?.value;
                1.0 / (len * phi_hat)
            }
            SweepMethod::BandlimitedApprox => 1.0,
        };
        let error = xs
            .iter()
            .zip(&rows)
            .map(|(&x, row)| {
                let h: Complex64 = row
                    .iter()
                    .map(|&(l, w)| Complex64::from_polar(w, 2.0 * PI * v * l as f64 / len))
                    .sum::<Complex64>()
                    * scale;
                (Complex64::from_polar(1.0, 2.0 * PI * v * x) - h).norm()
            })
            .fold(0.0, f64::max);
        Ok(SweepRow { v, error })
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpComparisonRow {
    pub v: f64,
    pub err_nfft: f64,
    pub err_bandlimited: f64,
}

/// Both methods on the same frequency and probe grids.
pub fn exp_error_comparison(
    geometry: &Geometry,
    window: &WindowSpec,
    subdivisions: usize,
    probes: usize,
    interval: ProbeInterval,
    exec: Execution,
) -> Result<Vec<ExpComparisonRow>> {
    let mut config = ExpSweepConfig {
        geometry: geometry.clone(),
        window: *window,
        subdivisions,
        probes,
        interval,
        method: SweepMethod::NfftApprox,
    };
    let nfft = exp_error_sweep_with(&config, exec)?;
    config.method = SweepMethod::BandlimitedApprox;
    let bandlimited = exp_error_sweep_with(&config, exec)?;
    Ok(nfft
        .iter()
        .zip(&bandlimited)
        .map(|(a, b)| ExpComparisonRow {
            v: a.v,
            err_nfft: a.error,
            err_bandlimited: b.error,
        })
        .collect())
}

/// `(2/M)(1 - |2k/M|)` for `|k| <= M/2`, else 0.
pub fn triangle_spectrum(bandwidth: usize, k: i64) -> f64 {
    let m = bandwidth as f64;
    let r = (2 * k).unsigned_abs() as f64 / m;
    if r >= 1.0 {
        0.0
    } else {
        2.0 / m * (1.0 - r)
    }
}

/// `sinc²(Mπx/2)`.
pub fn sinc2_exact(bandwidth: usize, x: f64) -> f64 {
    let s = sinc(bandwidth as f64 * PI * x / 2.0);
    s * s
}

/// `x_j = cos((j-1)π/N)·(1/2 - m/L)`, `j = 1..=N`, validated as restricted nodes.
pub fn chebyshev_nodes(count: usize, geometry: &Geometry) -> Result<NodeSet> {
    if count == 0 {
        return Err(Error::InvalidArgument(
            "at least one node is required".into(),
        ));
    }
    if geometry.dim() != 1 {
        return Err(Error::InvalidArgument(
            "Chebyshev nodes are univariate".into(),
        ));
    }
    let bound = geometry.restricted_bound();
    let coords = (0..count)
        .map(|j| (j as f64 * PI / count as f64).cos() * bound)
        .collect();
    validate_flat(coords, 1, geometry, DomainMode::Restricted)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaPolicy {
    /// Calibrated for `(family, m, λ)`.
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sinc2Row {
    pub bandwidth: usize,
    pub err_nfft: f64,
    pub err_bandlimited: f64,
}

/// Maximum error of both methods against `sinc²(Mπx/2)` at `N = M/2`
/// Chebyshev nodes, for each bandwidth.
pub fn sinc2_experiment(
    bandwidths: &[usize],
    lambda: Rational,
    m: usize,
    family: WindowFamily,
    beta: BetaPolicy,
) -> Result<Vec<Sinc2Row>> {
    sinc2_experiment_with(bandwidths, lambda, m, family, beta, Execution::default())
}

pub fn sinc2_experiment_with(
    bandwidths: &[usize],
    lambda: Rational,
    m: usize,
    family: WindowFamily,
    beta: BetaPolicy,
    exec: Execution,
) -> Result<Vec<Sinc2Row>> {
    let beta = match beta {
        BetaPolicy::Auto => default_beta(family, m, lambda)?,
        BetaPolicy::Fixed(b) => b,
    };
    bandwidths
        .iter()
        .map(|&bandwidth| {
            let geometry = Geometry::new(1, bandwidth, lambda, m)?;
            let window = WindowSpec::for_geometry(family, beta, &geometry)?;
            let nodes = chebyshev_nodes((bandwidth / 2).max(1), &geometry)?;
            let spectrum = Spectrum::from_fn(bandwidth, 1, |k| {
                Complex64::new(triangle_spectrum(bandwidth, k[0]), 0.0)
            })?;
            let exact: Vec<f64> = nodes.iter().map(|x| sinc2_exact(bandwidth, x[0])).collect();
            let max_error = |values: Vec<Complex64>| {
                values
                    .iter()
                    .zip(&exact)
                    .map(|(f, &e)| (f - e).norm())
                    .fold(0.0, f64::max)
            };
            let bandlimited = BandlimitedPlan::new_with(&geometry, &window, &nodes, exec)?
                .execute_with(&spectrum, exec)?;
            let periodic = nodes.with_mode(&geometry, DomainMode::Periodic)?;
            let nfft = NfftPlan::new_with(&geometry, &window, &periodic, exec)?
                .execute_with(&spectrum, exec)?;
            Ok(Sinc2Row {
                bandwidth,
                err_nfft: max_error(nfft),
                err_bandlimited: max_error(bandlimited),
            })
        })
        .collect()
}
