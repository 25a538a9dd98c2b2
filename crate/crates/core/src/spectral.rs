//! Equispaced d-variate inverse DFT on signed index grids and the
//! zero-padding embedding `I_M → I_L`.
//!
//! Grid data is indexed by signed `k ∈ I_L` in lexicographic order. The FFT
//! works on residues `k mod L`; since `L` is even, the bijection between the
//! two orderings along one axis is a rotation by `L/2`, applied before and
//! after every one-dimensional transform.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Complex coefficients `ĉ(k)`, `k ∈ I_L`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridCoefficients {
    len: usize,
    dim: usize,
    values: Vec<Complex64>,
}

/// Complex samples `c_ℓ`, `ℓ ∈ I_L`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSamples {
    len: usize,
    dim: usize,
    values: Vec<Complex64>,
}

macro_rules! grid_impl {
    ($t:ident) => {
        impl $t {
            pub fn new(len: usize, dim: usize, values: Vec<Complex64>) -> Result<Self> {
                if len < 2 || len % 2 != 0 || dim == 0 {
                    return Err(Error::ShapeMismatch(format!(
                        "grid length {len} must be even and >= 2, dimension {dim} >= 1"
                    )));
                }
                let expected = len.pow(dim as u32);
                if values.len() != expected {
                    return Err(Error::ShapeMismatch(format!(
                        "grid of length {len} in dimension {dim} needs {expected} values, got {}",
                        values.len()
                    )));
                }
                Ok($t { len, dim, values })
            }

            pub fn zeros(len: usize, dim: usize) -> Result<Self> {
                Self::new(
                    len,
                    dim,
                    vec![Complex64::new(0.0, 0.0); len.pow(dim as u32)],
                )
            }

            pub fn len(&self) -> usize {
                self.len
            }

            pub fn dim(&self) -> usize {
                self.dim
            }

            pub fn values(&self) -> &[Complex64] {
                &self.values
            }

            pub fn values_mut(&mut self) -> &mut [Complex64] {
                &mut self.values
            }

            pub fn into_values(self) -> Vec<Complex64> {
                self.values
            }

            /// Value at the signed multi-index `k`.
            pub fn get(&self, k: &[i64]) -> Complex64 {
                self.values[crate::geometry::linear_index(k, self.len)]
            }
        }
    };
}

grid_impl!(GridCoefficients);
grid_impl!(GridSamples);

/// Places `inner` (lexicographic over `I_M`) into `I_L`, zero elsewhere.
pub fn zero_pad_embed(
    inner: &[Complex64],
    bandwidth: usize,
    len: usize,
    dim: usize,
) -> Result<GridCoefficients> {
    if bandwidth < 2
        || !bandwidth.is_multiple_of(2)
        || bandwidth > len
        || inner.len() != bandwidth.pow(dim as u32)
    {
        return Err(Error::ShapeMismatch(format!(
            "cannot embed {} values of bandwidth {bandwidth} into grid length {len} (d = {dim})",
            inner.len()
        )));
    }
    let mut out = GridCoefficients::zeros(len, dim)?;
    for (q, &value) in inner.iter().enumerate() {
        out.values[embed_position(q, bandwidth, len, dim)] = value;
    }
    Ok(out)
}

/// Storage position in `I_L` of the `q`-th index of `I_M`.
pub(crate) fn embed_position(mut q: usize, bandwidth: usize, len: usize, dim: usize) -> usize {
    let offset = (len - bandwidth) / 2;
    let mut pos = 0;
    let mut stride = 1;
    for _ in 0..dim {
        pos += (q % bandwidth + offset) * stride;
        q /= bandwidth;
        stride *= len;
    }
    pos
}

/// Reusable inverse DFT `c_ℓ = L^{-d} Σ_{k∈I_L} ĉ(k) e^{2πi k·ℓ/L}`.
#[derive(Clone)]
pub struct GridFft {
    len: usize,
    dim: usize,
    fft: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for GridFft {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GridFft")
            .field("len", &self.len)
            .field("dim", &self.dim)
            .finish()
    }
}

impl GridFft {
    pub fn new(len: usize, dim: usize) -> Result<Self> {
        if len < 2 || !len.is_multiple_of(2) || dim == 0 {
            return Err(Error::ShapeMismatch(format!(
                "grid length {len} must be even and >= 2, dimension {dim} >= 1"
            )));
        }
        let fft = FftPlanner::new().plan_fft_inverse(len);
        Ok(GridFft { len, dim, fft })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Transforms `values` (length `L^d`, lexicographic over `I_L`) in place.
    pub fn inverse_in_place(&self, values: &mut [Complex64]) -> Result<()> {
        let len = self.len;
        let total = len.pow(self.dim as u32);
        if values.len() != total {
            return Err(Error::ShapeMismatch(format!(
                "expected {total} grid values, got {}",
                values.len()
            )));
        }
        let half = len / 2;
        let mut line = vec![Complex64::new(0.0, 0.0); len];
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.fft.get_inplace_scratch_len()];
        for axis in 0..self.dim {
            let stride = len.pow((self.dim - 1 - axis) as u32);
            let block = stride * len;
            for start in (0..total).step_by(block) {
                for inner in 0..stride {
                    let base = start + inner;
                    for (i, slot) in line.iter_mut().enumerate() {
                        *slot = values[base + ((i + half) % len) * stride];
                    }
                    self.fft.process_with_scratch(&mut line, &mut scratch);
                    for (i, &v) in line.iter().enumerate() {
                        values[base + ((i + half) % len) * stride] = v;
                    }
                }
            }
        }
        let norm = 1.0 / total as f64;
        for v in values.iter_mut() {
            *v *= norm;
        }
        Ok(())
    }

    pub fn inverse(&self, coeffs: &GridCoefficients) -> Result<GridSamples> {
        if coeffs.len != self.len || coeffs.dim != self.dim {
            return Err(Error::ShapeMismatch(format!(
                "plan is for L = {}, d = {}; got L = {}, d = {}",
                self.len, self.dim, coeffs.len, coeffs.dim
            )));
        }
        let mut values = coeffs.values.clone();
        self.inverse_in_place(&mut values)?;
        Ok(GridSamples {
            len: self.len,
            dim: self.dim,
            values,
        })
    }
}

/// One-shot inverse DFT of a coefficient grid.
pub fn inverse_dft_grid(coeffs: &GridCoefficients) -> Result<GridSamples> {
    GridFft::new(coeffs.len, coeffs.dim)?.inverse(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn embed_examples() {
        let a = c(1.0, 2.0);
        let b = c(-3.0, 0.5);
        let g = zero_pad_embed(&[a, b], 2, 4, 1).unwrap();
        assert_eq!(g.values(), &[c(0.0, 0.0), a, b, c(0.0, 0.0)]);

        let inner: Vec<Complex64> = (0..16).map(|i| c(i as f64, 0.0)).collect();
        let same = zero_pad_embed(&inner, 4, 4, 2).unwrap();
        assert_eq!(same.values(), &inner[..]);

        let zero = zero_pad_embed(&[c(0.0, 0.0); 4], 2, 6, 2).unwrap();
        assert!(zero.values().iter().all(|v| *v == c(0.0, 0.0)));

        assert!(zero_pad_embed(&[a, b, a], 2, 4, 1).is_err());
        assert!(zero_pad_embed(&[a; 36], 6, 4, 2).is_err());
    }

    #[test]
    fn embed_2d_places_by_index() {
        let inner: Vec<Complex64> = (0..4).map(|i| c(i as f64 + 1.0, 0.0)).collect();
        let g = zero_pad_embed(&inner, 2, 4, 2).unwrap();
        assert_eq!(g.get(&[-1, -1]), inner[0]);
        assert_eq!(g.get(&[-1, 0]), inner[1]);
        assert_eq!(g.get(&[0, -1]), inner[2]);
        assert_eq!(g.get(&[0, 0]), inner[3]);
        assert_eq!(g.get(&[-2, 0]), c(0.0, 0.0));
    }

    #[test]
    fn constant_coefficients_give_impulse() {
        for &(len, dim) in &[(4usize, 1usize), (12, 1), (8, 2), (6, 3)] {
            let n = len.pow(dim as u32);
            let g = GridCoefficients::new(len, dim, vec![c(1.0, 0.0); n]).unwrap();
            let s = inverse_dft_grid(&g).unwrap();
            for (p, v) in s.values().iter().enumerate() {
                let is_origin = crate::geometry::decode_linear(p, len, dim)
                    .iter()
                    .all(|&k| k == 0);
                let expected = if is_origin { 1.0 } else { 0.0 };
                assert!(
                    (v - c(expected, 0.0)).norm() <= 1e-15,
                    "L={len} d={dim} p={p} v={v}"
                );
            }
        }
    }

    #[test]
    fn scaled_constant_mode_gives_ones() {
        let len = 10;
        let mut g = GridCoefficients::zeros(len, 2).unwrap();
        let origin = crate::geometry::linear_index(&[0, 0], len);
        g.values_mut()[origin] = c(100.0, 0.0);
        let s = inverse_dft_grid(&g).unwrap();
        assert!(s.values().iter().all(|v| (v - c(1.0, 0.0)).norm() <= 1e-15));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(GridCoefficients::new(4, 1, vec![c(0.0, 0.0); 3]).is_err());
        assert!(GridCoefficients::new(5, 1, vec![c(0.0, 0.0); 5]).is_err());
        let plan = GridFft::new(8, 1).unwrap();
        assert!(plan
            .inverse(&GridCoefficients::zeros(4, 1).unwrap())
            .is_err());
    }
}
