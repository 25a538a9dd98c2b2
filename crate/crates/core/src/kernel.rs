//! Regularized sinc kernel `ψ(x) = sinc(Lπx)·φ(x)` and the spectral
//! factors `ψ̂(k)` / `φ̂(k)` used to pre-compensate the kernel response.
//!
//! Fourier transforms are computed by Gauss–Legendre quadrature after the
//! substitution `t = (m/L)·sin θ`, which turns the square-root behaviour of
//! the windows at the support boundary into a smooth integrand.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::quadrature::{integrate_doubling, QuadratureResult};
use crate::special::sinc_pi;
use crate::windows::WindowSpec;

pub use crate::special::{sinc, sinc_multi};

/// `sinc` of each coordinate, multiplied.
pub fn sinc_eval(x: &[f64]) -> f64 {
    sinc_multi(x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularizedSinc {
    window: WindowSpec,
}

impl RegularizedSinc {
    pub fn new(window: WindowSpec) -> Self {
        RegularizedSinc { window }
    }

    pub fn window(&self) -> &WindowSpec {
        &self.window
    }

    /// One-dimensional `ψ(x)`.
    pub fn eval_1d(&self, x: f64) -> f64 {
        self.profile(self.window.grid_len() as f64 * x)
    }

    /// `∏_t sinc(Lπx_t)·φ(x_t)`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        x.iter().map(|&t| self.eval_1d(t)).product()
    }

    /// Kernel as a function of the grid offset `u = L·x`.
    pub(crate) fn profile(&self, u: f64) -> f64 {
        let w = self.window.profile(u);
        if w == 0.0 {
            0.0
        } else {
            sinc_pi(u) * w
        }
    }
}

/// `ψ(x)` for a d-variate point.
pub fn psi_eval(kernel: &RegularizedSinc, x: &[f64]) -> f64 {
    kernel.eval(x)
}

/// `∫ g(t) cos(2πvt) dt` over the window support, where `g` is the window
/// times `sinc(Lπt)` when `with_sinc` is set.
fn transform_1d(window: &WindowSpec, v: f64, with_sinc: bool) -> Result<QuadratureResult> {
    let m = window.m() as f64;
    let len = window.grid_len() as f64;
    let scale = m / len;
    let integrand = |theta: f64| {
        let (sn, cs) = theta.sin_cos();
        let cs = cs.max(0.0);
        let u = m * sn;
        let mut g = window.profile_sqrt(cs);
        if with_sinc {
            g *= sinc_pi(u);
        }
        scale * cs * g * (2.0 * PI * v * scale * sn).cos()
    };
    integrate_doubling(integrand, -FRAC_PI_2, FRAC_PI_2, v)
}

/// `ψ̂(v)` for real `v`.
pub fn psi_hat_1d(kernel: &RegularizedSinc, v: f64) -> Result<QuadratureResult> {
    transform_1d(kernel.window(), v, true)
}

/// `φ̂(v)` for real `v`.
pub fn phi_hat_1d(window: &WindowSpec, v: f64) -> Result<QuadratureResult> {
    transform_1d(window, v, false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorKind {
    /// Transform of the regularized sinc (bandlimited method).
    PsiHat,
    /// Transform of the window (NFFT).
    PhiHat,
}

/// Smallest admissible magnitude of a one-dimensional spectral factor.
pub const MIN_FACTOR: f64 = 1e-12;

/// One-dimensional table of `ψ̂(k)` or `φ̂(k)` for `k = -M/2, …, M/2 - 1`;
/// d-variate factors are products over the axes.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFactors {
    kind: FactorKind,
    bandwidth: usize,
    values: Vec<f64>,
    quadrature_error: f64,
}

impl SpectralFactors {
    pub fn new(window: &WindowSpec, bandwidth: usize, kind: FactorKind) -> Result<Self> {
        Self::new_with(window, bandwidth, kind, Execution::default())
    }

    pub fn new_with(
        window: &WindowSpec,
        bandwidth: usize,
        kind: FactorKind,
        exec: Execution,
    ) -> Result<Self> {
        if bandwidth < 2 || !bandwidth.is_multiple_of(2) || bandwidth > window.grid_len() {
            return Err(Error::ShapeMismatch(format!(
                "bandwidth {bandwidth} must be even, >= 2 and at most L = {}",
                window.grid_len()
            )));
        }
        let h = (bandwidth / 2) as i64;
        let results = exec::try_map_range(bandwidth, exec, |i| {
            let k = i as i64 - h;
            let r = transform_1d(window, k as f64, kind == FactorKind::PsiHat)?;
            if !(r.value.abs() >= MIN_FACTOR) {
                return Err(Error::SpectralFactorVanishes { k, value: r.value });
            }
            Ok(r)
        })?;
        Ok(SpectralFactors {
            kind,
            bandwidth,
            quadrature_error: results.iter().map(|r| r.error_estimate).fold(0.0, f64::max),
            values: results.into_iter().map(|r| r.value).collect(),
        })
    }

    pub fn kind(&self) -> FactorKind {
        self.kind
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    /// Table entries in ascending `k`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Largest quadrature increment over the table.
    pub fn quadrature_error(&self) -> f64 {
        self.quadrature_error
    }

    pub fn value_1d(&self, k: i64) -> f64 {
        self.values[(k + (self.bandwidth / 2) as i64) as usize]
    }

    /// Product of the one-dimensional factors over the coordinates of `k`.
    pub fn value(&self, k: &[i64]) -> f64 {
        k.iter().map(|&kt| self.value_1d(kt)).product()
    }

    /// `max_k |L·value(k) - 1|` over the one-dimensional table.
    pub fn flatness(&self, grid_len: usize) -> f64 {
        self.values
            .iter()
            .map(|&v| (grid_len as f64 * v - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Tabulates `ψ̂` (from the kernel's window) or `φ̂` over `I_M`.
pub fn spectral_factors(
    window: &WindowSpec,
    bandwidth: usize,
    kind: FactorKind,
) -> Result<SpectralFactors> {
    SpectralFactors::new(window, bandwidth, kind)
}
