//! Quick oracle checks: fast transforms against dense operators, FFT
//! against the literal sum, and exact interpolation at grid points.

use bandsinc::geometry::decode_linear;
use bandsinc::oracle::{dense_bandlimited_apply, dense_nfft_apply, direct_dft, shannon_direct};
use bandsinc::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TRANSFORM_TOL: f64 = 1e-12;
const FFT_TOL: f64 = 1e-13;
/// Shape parameter for the small grids; keeps both factor tables well away
/// from zero at `λ = 0`.
const BETA: f64 = 3.0;

pub struct Check {
    pub name: String,
    pub defect: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.defect <= self.tolerance
    }
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

fn transform_check(
    dim: usize,
    bandwidth: usize,
    lambda: i64,
    family: WindowFamily,
    rng: &mut ChaCha8Rng,
) -> Result<Check> {
    let geometry = Geometry::new(dim, bandwidth, Rational::from_integer(lambda), 2)?;
    let window = WindowSpec::for_geometry(family, BETA, &geometry)?;
    let b = geometry.restricted_bound();
    let restricted: Vec<f64> = (0..7 * dim).map(|_| rng.gen_range(-b..=b)).collect();
    let periodic: Vec<f64> = (0..7 * dim).map(|_| rng.gen_range(-0.5..0.5)).collect();
    let restricted = validate_flat(restricted, dim, &geometry, DomainMode::Restricted)?;
    let periodic = validate_flat(periodic, dim, &geometry, DomainMode::Periodic)?;
    let bl = plan_bandlimited(&geometry, &window, &restricted)?;
    let nf = plan_nfft(&geometry, &window, &periodic)?;
    let mut defect: f64 = 0.0;
    for _ in 0..5 {
        let spectrum = Spectrum::from_fn(bandwidth, dim, |_| complex(rng))?;
        let fast = execute_bandlimited(&bl, &spectrum)?;
        let dense = dense_bandlimited_apply(&geometry, &window, &restricted, &spectrum)?;
        defect = defect.max(relative_defect(&fast, &dense));
        let fast = execute_nfft(&nf, &spectrum)?;
        let dense = dense_nfft_apply(&geometry, &window, &periodic, &spectrum)?;
        defect = defect.max(relative_defect(&fast, &dense));
    }
    Ok(Check {
        name: format!("transforms vs dense d={dim} M={bandwidth} lambda={lambda} {family}"),
        defect,
        tolerance: TRANSFORM_TOL,
    })
}

fn fft_check(len: usize, dim: usize, rng: &mut ChaCha8Rng) -> Result<Check> {
    let values = (0..len.pow(dim as u32)).map(|_| complex(rng)).collect();
    let coeffs = GridCoefficients::new(len, dim, values)?;
    let fast = inverse_dft_grid(&coeffs)?;
    let slow = direct_dft(&coeffs)?;
    Ok(Check {
        name: format!("fft vs literal sum L={len} d={dim}"),
        defect: relative_defect(fast.values(), slow.values()),
        tolerance: FFT_TOL,
    })
}

fn interpolation_check(family: WindowFamily, m: usize, rng: &mut ChaCha8Rng) -> Result<Check> {
    let len = 40;
    let window = WindowSpec::new(family, BETA * m as f64, m, len)?;
    let samples = GridSamples::new(len, 1, (0..len).map(|_| complex(rng)).collect())?;
    let mut defect: f64 = 0.0;
    for (p, stored) in samples.values().iter().enumerate() {
        let x = decode_linear(p, len, 1)[0] as f64 / len as f64;
        defect = defect.max((shannon_direct(&samples, &window, &[x])? - stored).norm());
    }
    Ok(Check {
        name: format!("grid interpolation {family} m={m}"),
        defect,
        tolerance: 0.0,
    })
}

pub fn run() -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e1f);
    let mut checks = Vec::new();
    for family in [WindowFamily::SinhType, WindowFamily::ContinuousKaiserBessel] {
        for dim in [1, 2] {
            for bandwidth in [4, 8] {
                for lambda in [0, 1] {
                    checks.push(transform_check(dim, bandwidth, lambda, family, &mut rng)?);
                }
            }
        }
        for m in [2, 5] {
            checks.push(interpolation_check(family, m, &mut rng)?);
        }
    }
    for len in [4, 8, 12, 16, 20, 40] {
        for dim in [1, 2] {
            checks.push(fft_check(len, dim, &mut rng)?);
        }
    }
    Ok(checks)
}
