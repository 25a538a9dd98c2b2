#![allow(dead_code)]

use bandsinc::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `(d, M, λ numerator, λ denominator, m)` with `L = M(1+λ) <= 32`.
pub const SHAPES: &[(usize, usize, i64, i64, usize)] = &[
    (1, 4, 0, 1, 2),
    (1, 4, 1, 1, 2),
    (1, 8, 0, 1, 2),
    (1, 8, 1, 1, 2),
    (1, 8, 1, 2, 3),
    (1, 12, 1, 3, 4),
    (1, 16, 1, 1, 5),
    (1, 6, 1, 1, 1),
    (2, 4, 0, 1, 2),
    (2, 4, 1, 1, 2),
    (2, 8, 0, 1, 2),
    (2, 8, 1, 1, 2),
    (2, 8, 1, 2, 3),
    (2, 16, 1, 1, 4),
];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn shape(i: usize) -> Geometry {
    let (d, m_band, p, q, m) = SHAPES[i % SHAPES.len()];
    Geometry::new(d, m_band, Rational::new(p, q), m).unwrap()
}

pub fn random_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_spectrum(g: &Geometry, rng: &mut impl Rng) -> Spectrum {
    let n = g.spectrum_size();
    Spectrum::new(
        g.bandwidth(),
        g.dim(),
        (0..n).map(|_| random_complex(rng)).collect(),
    )
    .unwrap()
}

pub fn random_restricted(g: &Geometry, count: usize, rng: &mut impl Rng) -> NodeSet {
    let b = g.restricted_bound();
    let coords = (0..count * g.dim())
        .map(|_| rng.gen_range(-b..=b))
        .collect();
    validate_flat(coords, g.dim(), g, DomainMode::Restricted).unwrap()
}

pub fn random_periodic(g: &Geometry, count: usize, rng: &mut impl Rng) -> NodeSet {
    let coords = (0..count * g.dim())
        .map(|_| rng.gen_range(-0.5..0.5))
        .collect();
    validate_flat(coords, g.dim(), g, DomainMode::Periodic).unwrap()
}

/// Smallest admissible `min|v| / max|v|` over a factor table. Without
/// oversampling `φ̂(±L/2)` changes sign as `β` varies, and dividing by a
/// near-zero factor amplifies rounding beyond any fixed relative tolerance.
pub const CONDITIONING_FLOOR: f64 = 1e-2;

pub fn well_conditioned(w: &WindowSpec, bandwidth: usize) -> bool {
    [FactorKind::PsiHat, FactorKind::PhiHat]
        .into_iter()
        .all(|kind| {
            let Ok(t) = spectral_factors(w, bandwidth, kind) else {
                return false;
            };
            let abs = t.values().iter().map(|v| v.abs());
            abs.clone().fold(f64::INFINITY, f64::min)
                >= CONDITIONING_FLOOR * abs.fold(0.0, f64::max)
        })
}

pub fn random_window(g: &Geometry, rng: &mut impl Rng) -> WindowSpec {
    loop {
        let family = if rng.gen_bool(0.5) {
            WindowFamily::SinhType
        } else {
            WindowFamily::ContinuousKaiserBessel
        };
        let beta = rng.gen_range(1.0..3.0 * g.truncation() as f64);
        let w = WindowSpec::for_geometry(family, beta, g).unwrap();
        if well_conditioned(&w, g.bandwidth()) {
            return w;
        }
    }
}

pub fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `max |a - b| / max |b|`, or the absolute defect when `b` vanishes.
pub fn relative_defect(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let diff = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    let scale = max_norm(b);
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}
