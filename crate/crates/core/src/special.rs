//! Scalar special functions: sinc and the modified Bessel function I0.

use std::f64::consts::PI;

/// `sin(x)/x` with the removable singularity filled in.
///
/// Below `|x| < 1e-4` the Taylor polynomial `1 - x²/6 + x⁴/120` is used;
/// its truncation error there is below `1e-20`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// `sinc(πu)`, exactly zero at every nonzero integer `u`.
///
/// The sine is evaluated after reducing `u` to `[-1/2, 1/2]`, so grid
/// offsets that are integers in floating point produce exact zeros.
pub fn sinc_pi(u: f64) -> f64 {
    let x = PI * u;
    if x.abs() < 1e-4 {
        return sinc(x);
    }
    let n = u.round();
    let r = u - n;
    if r == 0.0 {
        return 0.0;
    }
    let s = (PI * r).sin();
    // (-1)^n
    let s = if (n as i64) & 1 == 0 { s } else { -s };
    s / x
}

/// Product of `sinc` over the coordinates of `x`.
pub fn sinc_multi(x: &[f64]) -> f64 {
    x.iter().map(|&t| sinc(t)).product()
}

/// Modified Bessel function of the first kind, order zero.
pub fn bessel_i0(z: f64) -> f64 {
    1.0 + bessel_i0_minus_one(z)
}

/// `I0(z) - 1`, summed without the leading unit term so small arguments keep
/// full relative accuracy.
///
/// Power series `Σ_{n≥1} (z²/4)^n / (n!)²` with the term recurrence and
/// Neumaier-compensated accumulation. All terms are positive.
pub fn bessel_i0_minus_one(z: f64) -> f64 {
    let q = 0.25 * z * z;
    if q == 0.0 {
        return 0.0;
    }
    let mut term = q;
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut n = 1.0f64;
    loop {
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        n += 1.0;
        term *= q / (n * n);
        if term < 1e-18 * sum {
            break;
        }
    }
    sum + comp
}
