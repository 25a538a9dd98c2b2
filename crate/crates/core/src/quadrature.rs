//! Gauss–Legendre quadrature with node doubling.

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const MIN_NODES: usize = 32;
pub const MAX_NODES: usize = 4096;
/// Successive results closer than this (relative) stop the doubling.
pub const CONVERGED_TOL: f64 = 1e-14;
/// Relative change still tolerated when `MAX_NODES` is reached.
pub const ACCEPT_TOL: f64 = 1e-10;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the `n`-point rule by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1e-3) {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            // i-th largest node and its mirror
            nodes[n - 1 - i] = x;
            nodes[i] = -x;
            weights[n - 1 - i] = w;
            weights[i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    /// Cached rule for `n = 32·2^j` up to [`MAX_NODES`]; other sizes are
    /// computed on the fly.
    pub fn cached(n: usize) -> std::borrow::Cow<'static, GaussLegendre> {
        static RULES: [OnceLock<GaussLegendre>; 8] = [const { OnceLock::new() }; 8];
        if (MIN_NODES..=MAX_NODES).contains(&n) && n.is_power_of_two() {
            let slot = (n / MIN_NODES).trailing_zeros() as usize;
            std::borrow::Cow::Borrowed(RULES[slot].get_or_init(|| GaussLegendre::new(n)))
        } else {
            std::borrow::Cow::Owned(GaussLegendre::new(n))
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `(∫ f, ∫ |f|)` over `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> (f64, f64) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        let mut abs = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            let v = w * f(mid + half * x);
            sum += v;
            abs += v.abs();
        }
        (half * sum, half.abs() * abs)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let (p, pm1) = if n == 1 { (x, 1.0) } else { (p1, p0) };
    let d = n as f64 * (x * p - pm1) / (x * x - 1.0);
    (p, d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    /// Magnitude of the last doubling increment.
    pub error_estimate: f64,
    /// Node count of the returned value.
    pub nodes: usize,
}

/// Integrates `f` over `[a, b]` with `n = 32, 64, …, 4096` nodes until two
/// successive results agree to [`CONVERGED_TOL`].
///
/// The relative change is measured against `max(|I|, ∫|f|)` so integrals
/// that cancel to (near) zero still terminate. `tag` is reported in the
/// non-convergence error.
pub fn integrate_doubling<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tag: f64,
) -> Result<QuadratureResult> {
    let mut n = MIN_NODES;
    let (mut prev, _) = GaussLegendre::cached(n).integrate(&f, a, b);
    loop {
        n *= 2;
        let (cur, abs) = GaussLegendre::cached(n).integrate(&f, a, b);
        let delta = (cur - prev).abs();
        let scale = cur.abs().max(abs);
        let rel = if scale == 0.0 { 0.0 } else { delta / scale };
        if rel <= CONVERGED_TOL || n >= MAX_NODES {
            if rel > ACCEPT_TOL {
                return Err(Error::QuadratureNotConverged {
                    frequency: tag,
                    relative_change: rel,
                });
            }
            return Ok(QuadratureResult {
                value: cur,
                error_estimate: delta,
                nodes: n,
            });
        }
        prev = cur;
    }
}
