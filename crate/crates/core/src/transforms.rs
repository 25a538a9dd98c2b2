//! The two fast transforms as immutable plans.
//!
//! Both follow the same three steps after precomputation: divide the input
//! by the spectral factors and zero-pad to `I_L`, run the inverse DFT
//! (which carries the `1/L^d` normalization), then gather each node's
//! sparse row. They differ in the kernel: [`BandlimitedPlan`] uses the
//! regularized sinc on the nonperiodic support `J_{L,m}(x) ∩ I_L`,
//! [`NfftPlan`] the periodized window on `I_{L,m}(x)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::geometry::{
    decode_linear, linear_index, nonperiodic_axis, periodic_axis, DomainMode, Geometry, MultiIndex,
    NodeSet,
};
use crate::kernel::{FactorKind, RegularizedSinc, SpectralFactors};
use crate::spectral::{embed_position, GridFft};
use crate::windows::WindowSpec;

/// Values `f̂(k)` (or coefficients `f̂_k`) on `I_M`, lexicographic.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    bandwidth: usize,
    dim: usize,
    values: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(bandwidth: usize, dim: usize, values: Vec<Complex64>) -> Result<Self> {
        if bandwidth < 2 || !bandwidth.is_multiple_of(2) || dim == 0 {
            return Err(Error::ShapeMismatch(format!(
                "spectrum bandwidth {bandwidth} must be even and >= 2, dimension {dim} >= 1"
            )));
        }
        let expected = bandwidth.pow(dim as u32);
        if values.len() != expected {
            return Err(Error::ShapeMismatch(format!(
                "spectrum of bandwidth {bandwidth} in dimension {dim} needs {expected} values, got {}",
                values.len()
            )));
        }
        if values
            .iter()
            .any(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::InvalidArgument(
                "spectrum contains non-finite values".into(),
            ));
        }
        Ok(Spectrum {
            bandwidth,
            dim,
            values,
        })
    }

    pub fn zeros(bandwidth: usize, dim: usize) -> Result<Self> {
        Self::new(
            bandwidth,
            dim,
            vec![Complex64::new(0.0, 0.0); bandwidth.pow(dim as u32)],
        )
    }

    /// Spectrum with `f(k)` at every `k ∈ I_M`.
    pub fn from_fn(
        bandwidth: usize,
        dim: usize,
        mut f: impl FnMut(&[i64]) -> Complex64,
    ) -> Result<Self> {
        let total = bandwidth.pow(dim as u32);
        let values = (0..total)
            .map(|p| f(&decode_linear(p, bandwidth, dim)))
            .collect();
        Self::new(bandwidth, dim, values)
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, k: &[i64]) -> Complex64 {
        self.values[linear_index(k, self.bandwidth)]
    }
}

/// Row-compressed per-node kernel weights with grid positions in
/// lexicographic `I_L` storage order.
#[derive(Debug, Clone, PartialEq)]
struct SparseRows {
    offsets: Vec<usize>,
    positions: Vec<usize>,
    weights: Vec<f64>,
}

impl SparseRows {
    /// Builds the tensor-product row of every node from per-axis
    /// `(index, grid offset)` lists, weighting each axis by `profile`.
    fn build<A, P>(nodes: &NodeSet, len: usize, axis: A, profile: P, exec: Execution) -> SparseRows
    where
        A: Fn(f64) -> Vec<(i64, f64)> + Sync + Send,
        P: Fn(f64) -> f64 + Sync + Send,
    {
        let rows: Vec<(Vec<usize>, Vec<f64>)> = exec::map_range(nodes.len(), exec, |j| {
            let mut positions = vec![0usize];
            let mut weights = vec![1.0f64];
            for &xt in nodes.node(j) {
                let entries: Vec<(usize, f64)> = axis(xt)
                    .into_iter()
                    .map(|(l, u)| ((l + (len / 2) as i64) as usize, profile(u)))
                    .collect();
                let mut next_p = Vec::with_capacity(positions.len() * entries.len());
                let mut next_w = Vec::with_capacity(positions.len() * entries.len());
                for (&p, &w) in positions.iter().zip(&weights) {
                    for &(q, v) in &entries {
                        next_p.push(p * len + q);
                        next_w.push(w * v);
                    }
                }
                positions = next_p;
                weights = next_w;
            }
            (positions, weights)
        });
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        offsets.push(0);
        let mut positions = Vec::new();
        let mut weights = Vec::new();
        for (p, w) in rows {
            positions.extend(p);
            weights.extend(w);
            offsets.push(positions.len());
        }
        SparseRows {
            offsets,
            positions,
            weights,
        }
    }

    fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    fn row(&self, j: usize) -> (&[usize], &[f64]) {
        let r = self.offsets[j]..self.offsets[j + 1];
        (&self.positions[r.clone()], &self.weights[r])
    }

    fn gather(&self, grid: &[Complex64], exec: Execution) -> Vec<Complex64> {
        exec::map_range(self.len(), exec, |j| {
            let (positions, weights) = self.row(j);
            positions
                .iter()
                .zip(weights)
                .fold(Complex64::new(0.0, 0.0), |acc, (&p, &w)| acc + grid[p] * w)
        })
    }
}

/// Shared machinery of both plans.
#[derive(Debug, Clone)]
struct Pipeline {
    geometry: Geometry,
    factors: SpectralFactors,
    rows: SparseRows,
    fft: GridFft,
}

impl Pipeline {
    fn check(&self, spectrum: &Spectrum) -> Result<()> {
        if spectrum.bandwidth != self.geometry.bandwidth() || spectrum.dim != self.geometry.dim() {
            return Err(Error::ShapeMismatch(format!(
                "plan expects bandwidth {} in dimension {}, spectrum has bandwidth {} in dimension {}",
                self.geometry.bandwidth(),
                self.geometry.dim(),
                spectrum.bandwidth,
                spectrum.dim
            )));
        }
        Ok(())
    }

    /// Steps 1–2: deconvolve, zero-pad and inverse-transform.
    fn grid_samples(&self, spectrum: &Spectrum) -> Result<Vec<Complex64>> {
        self.check(spectrum)?;
        let g = &self.geometry;
        let (bandwidth, len, dim) = (g.bandwidth(), g.grid_len(), g.dim());
        let mut grid = vec![Complex64::new(0.0, 0.0); g.grid_size()];
        for (q, &value) in spectrum.values.iter().enumerate() {
            let k = decode_linear(q, bandwidth, dim);
            grid[embed_position(q, bandwidth, len, dim)] = value / self.factors.value(&k);
        }
        self.fft.inverse_in_place(&mut grid)?;
        Ok(grid)
    }

    fn apply(&self, spectrum: &Spectrum, exec: Execution) -> Result<Vec<Complex64>> {
        let grid = self.grid_samples(spectrum)?;
        Ok(self.rows.gather(&grid, exec))
    }

    fn row(&self, j: usize) -> (Vec<MultiIndex>, Vec<f64>) {
        let (positions, weights) = self.rows.row(j);
        let len = self.geometry.grid_len();
        let dim = self.geometry.dim();
        (
            positions
                .iter()
                .map(|&p| MultiIndex(decode_linear(p, len, dim)))
                .collect(),
            weights.to_vec(),
        )
    }
}

fn check_window(geometry: &Geometry, window: &WindowSpec) -> Result<()> {
    if window.m() != geometry.truncation() || window.grid_len() != geometry.grid_len() {
        return Err(Error::WindowMismatch {
            window_m: window.m(),
            window_len: window.grid_len(),
            m: geometry.truncation(),
            grid_len: geometry.grid_len(),
        });
    }
    Ok(())
}

fn check_nodes(geometry: &Geometry, nodes: &NodeSet, mode: DomainMode) -> Result<()> {
    if nodes.dim() != geometry.dim() {
        return Err(Error::ShapeMismatch(format!(
            "nodes have dimension {}, geometry {}",
            nodes.dim(),
            geometry.dim()
        )));
    }
    // restricted nodes already lie in [-1/2, 1/2); periodic ones may not fit
    // the restricted box, and re-validation names the offending node
    if mode == DomainMode::Restricted && nodes.mode() != mode {
        nodes.with_mode(geometry, mode)?;
    }
    Ok(())
}

/// Precomputed fast evaluation of a bandlimited function at restricted
/// nodes from samples of its Fourier transform on `I_M`.
#[derive(Debug, Clone)]
pub struct BandlimitedPlan {
    kernel: RegularizedSinc,
    inner: Pipeline,
}

impl BandlimitedPlan {
    pub fn new(geometry: &Geometry, window: &WindowSpec, nodes: &NodeSet) -> Result<Self> {
        Self::new_with(geometry, window, nodes, Execution::default())
    }

    pub fn new_with(
        geometry: &Geometry,
        window: &WindowSpec,
        nodes: &NodeSet,
        exec: Execution,
    ) -> Result<Self> {
        check_window(geometry, window)?;
        check_nodes(geometry, nodes, DomainMode::Restricted)?;
        let kernel = RegularizedSinc::new(*window);
        let factors =
            SpectralFactors::new_with(window, geometry.bandwidth(), FactorKind::PsiHat, exec)?;
        let (len, m) = (geometry.grid_len(), geometry.truncation());
        let rows = SparseRows::build(
            nodes,
            len,
            |x| nonperiodic_axis(x, len, m),
            |u| kernel.profile(u),
            exec,
        );
        Ok(BandlimitedPlan {
            kernel,
            inner: Pipeline {
                geometry: geometry.clone(),
                factors,
                rows,
                fft: GridFft::new(len, geometry.dim())?,
            },
        })
    }

    pub fn geometry(&self) -> &Geometry {
        &self.inner.geometry
    }

    pub fn kernel(&self) -> &RegularizedSinc {
        &self.kernel
    }

    pub fn factors(&self) -> &SpectralFactors {
        &self.inner.factors
    }

    pub fn node_count(&self) -> usize {
        self.inner.rows.len()
    }

    /// Support indices and kernel weights `ψ(x_j - ℓ/L)` of node `j`.
    pub fn row(&self, j: usize) -> (Vec<MultiIndex>, Vec<f64>) {
        self.inner.row(j)
    }

    /// Approximations `f_j ≈ f(x_j)`.
    pub fn execute(&self, spectrum: &Spectrum) -> Result<Vec<Complex64>> {
        self.inner.apply(spectrum, Execution::default())
    }

    pub fn execute_with(&self, spectrum: &Spectrum, exec: Execution) -> Result<Vec<Complex64>> {
        self.inner.apply(spectrum, exec)
    }

    /// Intermediate grid values `ϑ_ℓ ≈ f(ℓ/L)`, `ℓ ∈ I_L`.
    pub fn grid_samples(&self, spectrum: &Spectrum) -> Result<Vec<Complex64>> {
        self.inner.grid_samples(spectrum)
    }
}

/// Precomputed NFFT: evaluation of a trigonometric polynomial with
/// coefficients on `I_M` at nodes on the torus.
#[derive(Debug, Clone)]
pub struct NfftPlan {
    window: WindowSpec,
    inner: Pipeline,
}

impl NfftPlan {
    pub fn new(geometry: &Geometry, window: &WindowSpec, nodes: &NodeSet) -> Result<Self> {
        Self::new_with(geometry, window, nodes, Execution::default())
    }

    pub fn new_with(
        geometry: &Geometry,
        window: &WindowSpec,
        nodes: &NodeSet,
        exec: Execution,
    ) -> Result<Self> {
        check_window(geometry, window)?;
        check_nodes(geometry, nodes, DomainMode::Periodic)?;
        let factors =
            SpectralFactors::new_with(window, geometry.bandwidth(), FactorKind::PhiHat, exec)?;
        let (len, m) = (geometry.grid_len(), geometry.truncation());
        // With 2m <= L a single shift of the window reaches each wrapped index,
        // so the periodized weight is the window at the unwrapped offset.
        let w = *window;
        let rows = SparseRows::build(
            nodes,
            len,
            |x| periodic_axis(x, len, m),
            move |u| w.profile(u),
            exec,
        );
        Ok(NfftPlan {
            window: *window,
            inner: Pipeline {
                geometry: geometry.clone(),
                factors,
                rows,
                fft: GridFft::new(len, geometry.dim())?,
            },
        })
    }

    pub fn geometry(&self) -> &Geometry {
        &self.inner.geometry
    }

    pub fn window(&self) -> &WindowSpec {
        &self.window
    }

    pub fn factors(&self) -> &SpectralFactors {
        &self.inner.factors
    }

    pub fn node_count(&self) -> usize {
        self.inner.rows.len()
    }

    /// Wrapped support indices and periodized window weights of node `j`.
    pub fn row(&self, j: usize) -> (Vec<MultiIndex>, Vec<f64>) {
        self.inner.row(j)
    }

    /// Approximations `f̃_j ≈ Σ_k f̂_k e^{2πi k·x_j}`.
    pub fn execute(&self, coefficients: &Spectrum) -> Result<Vec<Complex64>> {
        self.inner.apply(coefficients, Execution::default())
    }

    pub fn execute_with(&self, coefficients: &Spectrum, exec: Execution) -> Result<Vec<Complex64>> {
        self.inner.apply(coefficients, exec)
    }
}

pub fn plan_bandlimited(
    geometry: &Geometry,
    window: &WindowSpec,
    nodes: &NodeSet,
) -> Result<BandlimitedPlan> {
    BandlimitedPlan::new(geometry, window, nodes)
}

pub fn execute_bandlimited(plan: &BandlimitedPlan, spectrum: &Spectrum) -> Result<Vec<Complex64>> {
    plan.execute(spectrum)
}

pub fn plan_nfft(geometry: &Geometry, window: &WindowSpec, nodes: &NodeSet) -> Result<NfftPlan> {
    NfftPlan::new(geometry, window, nodes)
}

pub fn execute_nfft(plan: &NfftPlan, coefficients: &Spectrum) -> Result<Vec<Complex64>> {
    plan.execute(coefficients)
}
