//! Slow reference implementations: literal sums and explicitly assembled
//! dense factor matrices. They share no index-set or FFT code with the fast
//! paths.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::experiments::{ExpSweepConfig, SweepMethod, SweepRow};
use crate::geometry::{decode_linear, DomainMode, Geometry, NodeSet};
use crate::kernel::{phi_hat_1d, FactorKind, RegularizedSinc, SpectralFactors};
use crate::spectral::{GridCoefficients, GridSamples};
use crate::transforms::Spectrum;
use crate::windows::WindowSpec;

/// Largest `L^d` the dense paths will assemble.
pub const DENSE_GRID_LIMIT: usize = 4096;

/// `e^{2πi·r/len}` for the integer residue `r`, reduced exactly.
fn unit_root(r: i64, len: usize) -> Complex64 {
    let r = r.rem_euclid(len as i64);
    Complex64::from_polar(1.0, 2.0 * PI * r as f64 / len as f64)
}

/// `f(x_j) = Σ_{k∈I_M} f̂_k e^{2πi k·x_j}`, literally.
pub fn direct_trig_sum(coefficients: &Spectrum, nodes: &NodeSet) -> Result<Vec<Complex64>> {
    let dim = coefficients.dim();
    if nodes.dim() != dim {
        return Err(Error::ShapeMismatch(format!(
            "coefficients of dimension {dim}, nodes of dimension {}",
            nodes.dim()
        )));
    }
    let bandwidth = coefficients.bandwidth();
    Ok(nodes
        .iter()
        .map(|x| {
            coefficients
                .values()
                .iter()
                .enumerate()
                .map(|(q, &c)| {
                    let k = decode_linear(q, bandwidth, dim);
                    let phase: f64 = k.iter().zip(x).map(|(&kt, &xt)| kt as f64 * xt).sum();
                    c * Complex64::from_polar(1.0, 2.0 * PI * phase)
                })
                .sum()
        })
        .collect())
}

/// Explicit factorization `A ≈ S·F·D` with `D` diagonal (`M^d`), `F` the
/// truncated Fourier matrix (`L^d × M^d`) and `S` the dense real kernel
/// matrix (`N × L^d`), zeros stored.
#[derive(Debug, Clone)]
pub struct DenseOperator {
    pub nodes: usize,
    pub spectrum_size: usize,
    pub grid_size: usize,
    /// Diagonal of `D`, including the `1/L^d` normalization.
    pub diagonal: Vec<Complex64>,
    /// `F`, row-major.
    pub fourier: Vec<Complex64>,
    /// `Ψ` or `B`, row-major.
    pub kernel: Vec<f64>,
}

impl DenseOperator {
    fn assemble(
        geometry: &Geometry,
        nodes: &NodeSet,
        factors: &SpectralFactors,
        weight: impl Fn(&[f64]) -> f64,
    ) -> Result<Self> {
        let (dim, bandwidth, len) = (geometry.dim(), geometry.bandwidth(), geometry.grid_len());
        let grid_size = geometry.grid_size();
        if grid_size > DENSE_GRID_LIMIT {
            return Err(Error::SizeGuardExceeded {
                what: "L^d",
                size: grid_size,
                limit: DENSE_GRID_LIMIT,
            });
        }
        if nodes.dim() != dim {
            return Err(Error::ShapeMismatch(
                "node dimension differs from geometry".into(),
            ));
        }
        let spectrum_size = geometry.spectrum_size();
        let diagonal = (0..spectrum_size)
            .map(|q| {
                let k = decode_linear(q, bandwidth, dim);
                Complex64::new(1.0 / (grid_size as f64 * factors.value(&k)), 0.0)
            })
            .collect();
        let mut fourier = Vec::with_capacity(grid_size * spectrum_size);
        for p in 0..grid_size {
            let l = decode_linear(p, len, dim);
            for q in 0..spectrum_size {
                let k = decode_linear(q, bandwidth, dim);
                let r: i64 = k.iter().zip(&l).map(|(a, b)| a * b).sum();
                fourier.push(unit_root(r, len));
            }
        }
        let mut kernel = Vec::with_capacity(nodes.len() * grid_size);
        let mut offset = vec![0.0; dim];
        for x in nodes.iter() {
            for p in 0..grid_size {
                let l = decode_linear(p, len, dim);
                for t in 0..dim {
                    offset[t] = x[t] - l[t] as f64 / len as f64;
                }
                kernel.push(weight(&offset));
            }
        }
        Ok(DenseOperator {
            nodes: nodes.len(),
            spectrum_size,
            grid_size,
            diagonal,
            fourier,
            kernel,
        })
    }

    /// `D_ψ̂`, `F` and `Ψ` of the bandlimited method.
    pub fn bandlimited(geometry: &Geometry, window: &WindowSpec, nodes: &NodeSet) -> Result<Self> {
        nodes.with_mode(geometry, DomainMode::Restricted)?;
        let factors = SpectralFactors::new(window, geometry.bandwidth(), FactorKind::PsiHat)?;
        let kernel = RegularizedSinc::new(*window);
        Self::assemble(geometry, nodes, &factors, |y| kernel.eval(y))
    }

    /// `D`, `F` and `B` of the NFFT, with the periodization summed over
    /// shifts `r ∈ {-2, …, 2}^d`.
    pub fn nfft(geometry: &Geometry, window: &WindowSpec, nodes: &NodeSet) -> Result<Self> {
        let factors = SpectralFactors::new(window, geometry.bandwidth(), FactorKind::PhiHat)?;
        let dim = geometry.dim();
        // digits of a length-5 grid decode to r_t ∈ {-2, …, 2}
        let shifts: Vec<Vec<i64>> = (0..5usize.pow(dim as u32))
            .map(|p| decode_linear(p, 5, dim))
            .collect();
        Self::assemble(geometry, nodes, &factors, |y| {
            let mut shifted = vec![0.0; y.len()];
            shifts
                .iter()
                .map(|r| {
                    for t in 0..y.len() {
                        shifted[t] = y[t] + r[t] as f64;
                    }
                    window.eval_multi(&shifted)
                })
                .sum()
        })
    }

    /// Nonzero count of kernel row `j`.
    pub fn row_nonzeros(&self, j: usize) -> usize {
        self.kernel[j * self.grid_size..(j + 1) * self.grid_size]
            .iter()
            .filter(|&&w| w != 0.0)
            .count()
    }

    pub fn kernel_row(&self, j: usize) -> &[f64] {
        &self.kernel[j * self.grid_size..(j + 1) * self.grid_size]
    }

    /// `S·(F·(D·f̂))`, right to left.
    pub fn apply(&self, spectrum: &Spectrum) -> Result<Vec<Complex64>> {
        if spectrum.values().len() != self.spectrum_size {
            return Err(Error::ShapeMismatch(format!(
                "operator takes {} values, got {}",
                self.spectrum_size,
                spectrum.values().len()
            )));
        }
        let scaled: Vec<Complex64> = spectrum
            .values()
            .iter()
            .zip(&self.diagonal)
            .map(|(a, b)| a * b)
            .collect();
        let grid: Vec<Complex64> = self
            .fourier
            .chunks_exact(self.spectrum_size)
            .map(|row| row.iter().zip(&scaled).map(|(a, b)| a * b).sum())
            .collect();
        Ok(self
            .kernel
            .chunks_exact(self.grid_size)
            .map(|row| row.iter().zip(&grid).map(|(&w, g)| g * w).sum())
            .collect())
    }

    /// The assembled `N × M^d` product `S·F·D`.
    pub fn assembled(&self) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.nodes * self.spectrum_size];
        for j in 0..self.nodes {
            let row = self.kernel_row(j);
            for (p, &w) in row.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                let f = &self.fourier[p * self.spectrum_size..(p + 1) * self.spectrum_size];
                for q in 0..self.spectrum_size {
                    out[j * self.spectrum_size + q] += f[q] * self.diagonal[q] * w;
                }
            }
        }
        out
    }
}

/// Dense `Ψ·F·D_ψ̂·f̂`.
pub fn dense_bandlimited_apply(
    geometry: &Geometry,
    window: &WindowSpec,
    nodes: &NodeSet,
    spectrum: &Spectrum,
) -> Result<Vec<Complex64>> {
    DenseOperator::bandlimited(geometry, window, nodes)?.apply(spectrum)
}

/// Dense `B·F·D·f̂`.
pub fn dense_nfft_apply(
    geometry: &Geometry,
    window: &WindowSpec,
    nodes: &NodeSet,
    coefficients: &Spectrum,
) -> Result<Vec<Complex64>> {
    DenseOperator::nfft(geometry, window, nodes)?.apply(coefficients)
}

/// Literal `c_ℓ = L^{-d} Σ_{k∈I_L} ĉ(k) e^{2πi k·ℓ/L}`, `O(L^{2d})`.
pub fn direct_dft(coeffs: &GridCoefficients) -> Result<GridSamples> {
    let (len, dim) = (coeffs.len(), coeffs.dim());
    let total = len.pow(dim as u32);
    if total > DENSE_GRID_LIMIT {
        return Err(Error::SizeGuardExceeded {
            what: "L^d",
            size: total,
            limit: DENSE_GRID_LIMIT,
        });
    }
    let indices: Vec<Vec<i64>> = (0..total).map(|p| decode_linear(p, len, dim)).collect();
    let roots: Vec<Complex64> = (0..len as i64).map(|r| unit_root(r, len)).collect();
    let norm = 1.0 / total as f64;
    let values = indices
        .iter()
        .map(|l| {
            let s: Complex64 = indices
                .iter()
                .zip(coeffs.values())
                .map(|(k, &c)| {
                    let r: i64 = k.iter().zip(l).map(|(a, b)| a * b).sum();
                    c * roots[r.rem_euclid(len as i64) as usize]
                })
                .sum();
            s * norm
        })
        .collect();
    GridSamples::new(len, dim, values)
}

/// Regularized Shannon sum `Σ_{ℓ∈I_L} f(ℓ/L) sinc(Lπ(x - ℓ/L)) φ(x - ℓ/L)`
/// over every grid point.
pub fn shannon_direct(samples: &GridSamples, window: &WindowSpec, x: &[f64]) -> Result<Complex64> {
    let (len, dim) = (samples.len(), samples.dim());
    if x.len() != dim || len != window.grid_len() {
        return Err(Error::ShapeMismatch(format!(
            "samples on L = {len}, d = {dim}; window L = {}, point of dimension {}",
            window.grid_len(),
            x.len()
        )));
    }
    let kernel = RegularizedSinc::new(*window);
    let lf = len as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for (p, &value) in samples.values().iter().enumerate() {
        let l = decode_linear(p, len, dim);
        // kernel in grid units: sinc(π(Lx - ℓ))·φ((Lx - ℓ)/L)
        let w: f64 = l
            .iter()
            .zip(x)
            .map(|(&lt, &xt)| kernel.profile(lf * xt - lt as f64))
            .product();
        sum += value * w;
    }
    Ok(sum)
}

/// Exponential-approximation sweep by literal sums over every `ℓ ∈ I_L`,
/// with the periodization of the NFFT window summed over shifts
/// `r ∈ {-1, 0, 1}`. Sequential and slow.
pub fn dense_exp_error_sweep(config: &ExpSweepConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let len = config.geometry.grid_len();
    let lf = len as f64;
    let h = (len / 2) as i64;
    let kernel = RegularizedSinc::new(config.window);
    let xs = config.probe_points();
    (0..config.row_count())
        .map(|s| {
            let v = config.frequency(s);
            let scale = match config.method {
                SweepMethod::NfftApprox => 1.0 / (lf * phi_hat_1d(&config.window, v)?.value),
                SweepMethod::BandlimitedApprox => 1.0,
            };
            let error = xs
                .iter()
                .map(|&x| {
                    let mut sum = Complex64::new(0.0, 0.0);
                    for l in -h..h {
                        let y = x - l as f64 / lf;
                        let w = match config.method {
                            SweepMethod::NfftApprox => {
                                (-1..=1).map(|r| config.window.eval(y + r as f64)).sum()
                            }
                            SweepMethod::BandlimitedApprox => kernel.eval_1d(y),
                        };
                        sum += Complex64::from_polar(w, 2.0 * PI * v * l as f64 / lf);
                    }
                    (Complex64::from_polar(1.0, 2.0 * PI * v * x) - sum * scale).norm()
                })
                .fold(0.0, f64::max);
            Ok(SweepRow { v, error })
        })
        .collect()
}
