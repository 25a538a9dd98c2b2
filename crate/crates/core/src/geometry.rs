//! Parameter validation and index-set arithmetic.
//!
//! All index sets are tensor products of the one-dimensional set
//! `{-n/2, ..., n/2 - 1}` and are enumerated lexicographically with the last
//! coordinate running fastest. Grid data is stored in that order.

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Exact oversampling parameter `λ`.
pub type Rational = Ratio<i64>;

/// Parses `p/q`, an integer, or a plain decimal such as `0.5` into an exact
/// rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::BadRational(text.to_string());
    let t = text.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (neg, digits) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.bytes().all(|b| b.is_ascii_digit())
        || !frac_part.bytes().all(|b| b.is_ascii_digit())
        || frac_part.len() > 15
    {
        return Err(bad());
    }
    let den = 10i64.pow(frac_part.len() as u32);
    let int_val: i64 = if int_part.is_empty() {
        0
    } else {
        int_part.parse().map_err(|_| bad())?
    };
    let frac_val: i64 = if frac_part.is_empty() {
        0
    } else {
        frac_part.parse().map_err(|_| bad())?
    };
    let num = int_val
        .checked_mul(den)
        .and_then(|v| v.checked_add(frac_val))
        .ok_or_else(bad)?;
    Ok(Rational::new(if neg { -num } else { num }, den))
}

/// Validated transform geometry: dimension `d`, bandwidth `M`, oversampling
/// `λ`, grid length `L = M(1+λ)` and truncation half-width `m`.
///
/// Both fast algorithms run on the same grid: the NFFT's oversampled length
/// `Mσ` is `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Geometry {
    dim: usize,
    bandwidth: usize,
    oversampling: Rational,
    grid_len: usize,
    truncation: usize,
}

impl Geometry {
    pub fn new(
        dim: usize,
        bandwidth: usize,
        oversampling: Rational,
        truncation: usize,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::BadDimension(dim));
        }
        if bandwidth < 2 || !bandwidth.is_multiple_of(2) {
            return Err(Error::BadBandwidth(bandwidth));
        }
        if oversampling < Rational::from_integer(0) {
            return Err(Error::NegativeOversampling(oversampling.to_string()));
        }
        let len =
            (Rational::from_integer(1) + oversampling) * Rational::from_integer(bandwidth as i64);
        if !len.is_integer() {
            return Err(Error::NonIntegerGridLength(len.to_string()));
        }
        let grid_len = len.to_integer() as usize;
        if !grid_len.is_multiple_of(2) {
            return Err(Error::OddGridLength(grid_len));
        }
        if truncation == 0 || 2 * truncation > grid_len {
            return Err(Error::TruncationTooLarge {
                m: truncation,
                grid_len,
            });
        }
        Ok(Geometry {
            dim,
            bandwidth,
            oversampling,
            grid_len,
            truncation,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Bandwidth `M`.
    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    /// Oversampling parameter `λ`.
    pub fn oversampling(&self) -> Rational {
        self.oversampling
    }

    /// Oversampling factor `σ = 1 + λ`.
    pub fn sigma(&self) -> f64 {
        1.0 + *self.oversampling.numer() as f64 / *self.oversampling.denom() as f64
    }

    /// Grid length `L = Mσ`.
    pub fn grid_len(&self) -> usize {
        self.grid_len
    }

    /// Truncation half-width `m`.
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// `M^d`.
    pub fn spectrum_size(&self) -> usize {
        self.bandwidth.pow(self.dim as u32)
    }

    /// `L^d`.
    pub fn grid_size(&self) -> usize {
        self.grid_len.pow(self.dim as u32)
    }

    /// Half-width of the admissible node box in restricted mode, `1/2 - m/L`.
    pub fn restricted_bound(&self) -> f64 {
        0.5 - self.truncation as f64 / self.grid_len as f64
    }
}

/// A point of `Z^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<i64>);

impl MultiIndex {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Whether every coordinate lies in `[-len/2, len/2)`.
    pub fn in_grid(&self, len: usize) -> bool {
        let h = (len / 2) as i64;
        self.0.iter().all(|&k| -h <= k && k < h)
    }
}

impl From<Vec<i64>> for MultiIndex {
    fn from(v: Vec<i64>) -> Self {
        MultiIndex(v)
    }
}

/// Lexicographic enumeration of `Z^d ∩ [-len/2, len/2)^d`.
pub fn grid_indices(len: usize, dim: usize) -> Vec<MultiIndex> {
    let total = len.pow(dim as u32);
    (0..total)
        .map(|p| MultiIndex(decode_linear(p, len, dim)))
        .collect()
}

/// Position of a signed grid index in lexicographic storage order.
pub fn linear_index(k: &[i64], len: usize) -> usize {
    let h = (len / 2) as i64;
    k.iter().fold(0usize, |acc, &kt| {
        debug_assert!(-h <= kt && kt < h);
        acc * len + (kt + h) as usize
    })
}

/// Inverse of [`linear_index`].
pub fn decode_linear(mut p: usize, len: usize, dim: usize) -> Vec<i64> {
    let h = (len / 2) as i64;
    let mut k = vec![0i64; dim];
    for t in (0..dim).rev() {
        k[t] = (p % len) as i64 - h;
        p /= len;
    }
    k
}

/// Wraps an integer into `[-len/2, len/2)`.
pub(crate) fn wrap_index(l: i64, len: usize) -> i64 {
    let n = len as i64;
    let h = n / 2;
    (l + h).rem_euclid(n) - h
}

/// One axis of the periodic support set: `(wrapped index, L·x - ℓ')` for the
/// unwrapped `ℓ'` in `[⌈Lx⌉ - m, ⌊Lx⌋ + m]`, in ascending `ℓ'` order.
///
/// With `2m <= L` the residues are distinct except when `2m = L` and `Lx` is
/// an integer; the duplicate endpoint is dropped (both ends sit on the
/// support boundary there).
pub(crate) fn periodic_axis(x: f64, len: usize, m: usize) -> Vec<(i64, f64)> {
    let lx = len as f64 * x;
    let lo = (lx - m as f64).ceil() as i64;
    let hi = (lx + m as f64).floor() as i64;
    let mut out: Vec<(i64, f64)> = Vec::with_capacity((hi - lo + 1).max(0) as usize);
    for l in lo..=hi {
        let w = wrap_index(l, len);
        if out.iter().any(|&(seen, _)| seen == w) {
            continue;
        }
        out.push((w, lx - l as f64));
    }
    out
}

/// One axis of the nonperiodic support set: `(ℓ, L·x - ℓ)` for
/// `ℓ ∈ [⌈Lx - m⌉, ⌊Lx + m⌋] ∩ [-L/2, L/2)`, ascending.
pub(crate) fn nonperiodic_axis(x: f64, len: usize, m: usize) -> Vec<(i64, f64)> {
    let lx = len as f64 * x;
    let h = (len / 2) as i64;
    let lo = ((lx - m as f64).ceil() as i64).max(-h);
    let hi = ((lx + m as f64).floor() as i64).min(h - 1);
    (lo..=hi).map(|l| (l, lx - l as f64)).collect()
}

fn tensor_indices(axes: &[Vec<(i64, f64)>]) -> Vec<MultiIndex> {
    let mut out = vec![Vec::with_capacity(axes.len())];
    for axis in axes {
        let mut next = Vec::with_capacity(out.len() * axis.len());
        for prefix in &out {
            for &(l, _) in axis {
                let mut k = prefix.clone();
                k.push(l);
                next.push(k);
            }
        }
        out = next;
    }
    out.into_iter().map(MultiIndex).collect()
}

/// Periodic window support `I_{L,m}(x)`: grid indices `ℓ ∈ I_L` with
/// `-m <= L(x_t + z_t) - ℓ_t <= m` for some integer shift `z`.
pub fn support_indices_periodic(x: &[f64], len: usize, m: usize) -> Vec<MultiIndex> {
    let axes: Vec<_> = x.iter().map(|&xt| periodic_axis(xt, len, m)).collect();
    tensor_indices(&axes)
}

/// Nonperiodic support `J_{L,m}(x) ∩ I_L`.
pub fn support_indices_nonperiodic(x: &[f64], len: usize, m: usize) -> Vec<MultiIndex> {
    let axes: Vec<_> = x.iter().map(|&xt| nonperiodic_axis(xt, len, m)).collect();
    tensor_indices(&axes)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainMode {
    /// Nodes on the torus, canonicalized to `[-1/2, 1/2)`.
    Periodic,
    /// Nodes confined to the closed box `[-1/2 + m/L, 1/2 - m/L]^d`.
    Restricted,
}

/// Validated evaluation nodes, stored row-major (`N × d`).
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    dim: usize,
    coords: Vec<f64>,
    mode: DomainMode,
}

impl NodeSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn mode(&self) -> DomainMode {
        self.mode
    }

    pub fn node(&self, j: usize) -> &[f64] {
        &self.coords[j * self.dim..(j + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Copy of these nodes re-validated in another mode.
    pub fn with_mode(&self, geometry: &Geometry, mode: DomainMode) -> Result<NodeSet> {
        validate_flat(self.coords.clone(), self.dim, geometry, mode)
    }
}

/// Validates raw nodes against `geometry` in the given mode.
pub fn validate_nodes(raw: &[Vec<f64>], geometry: &Geometry, mode: DomainMode) -> Result<NodeSet> {
    let dim = geometry.dim();
    let mut coords = Vec::with_capacity(raw.len() * dim);
    for (j, node) in raw.iter().enumerate() {
        if node.len() != dim {
            return Err(Error::ShapeMismatch(format!(
                "node {} has {} coordinates, expected {dim}",
                j + 1,
                node.len()
            )));
        }
        coords.extend_from_slice(node);
    }
    validate_flat(coords, dim, geometry, mode)
}

/// Like [`validate_nodes`] for row-major flat coordinates.
pub fn validate_flat(
    mut coords: Vec<f64>,
    dim: usize,
    geometry: &Geometry,
    mode: DomainMode,
) -> Result<NodeSet> {
    if dim != geometry.dim() || !coords.len().is_multiple_of(dim) {
        return Err(Error::ShapeMismatch(format!(
            "{} coordinates do not form nodes of dimension {}",
            coords.len(),
            geometry.dim()
        )));
    }
    let bound = geometry.restricted_bound();
    for (i, c) in coords.iter_mut().enumerate() {
        let (node, coordinate) = (i / dim, i % dim);
        if !c.is_finite() {
            return Err(Error::NonFiniteNode { node });
        }
        match mode {
            DomainMode::Restricted => {
                if *c < -bound || *c > bound {
                    return Err(Error::NodeOutOfDomain {
                        node,
                        coordinate,
                        value: *c,
                        lower: -bound,
                        upper: bound,
                    });
                }
            }
            DomainMode::Periodic => {
                *c -= (*c + 0.5).floor();
                // guards against x + 0.5 rounding up to the next integer
                if *c >= 0.5 {
                    *c -= 1.0;
                }
            }
        }
    }
    Ok(NodeSet { dim, coords, mode })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    fn ints(set: &[MultiIndex]) -> Vec<i64> {
        set.iter().map(|k| k.0[0]).collect()
    }

    #[test]
    fn make_geometry_examples() {
        let g = Geometry::new(1, 20, r(1, 1), 5).unwrap();
        assert_eq!(g.grid_len(), 40);
        assert_eq!(g.sigma(), 2.0);
        let g = Geometry::new(1, 8, r(0, 1), 3).unwrap();
        assert_eq!(g.grid_len(), 8);
        assert!(matches!(
            Geometry::new(1, 20, r(1, 3), 2),
            Err(Error::NonIntegerGridLength(_))
        ));
    }

    #[test]
    fn make_geometry_errors() {
        assert_eq!(Geometry::new(1, 7, r(1, 1), 2), Err(Error::BadBandwidth(7)));
        assert_eq!(Geometry::new(1, 0, r(1, 1), 2), Err(Error::BadBandwidth(0)));
        assert_eq!(Geometry::new(0, 8, r(1, 1), 2), Err(Error::BadDimension(0)));
        // 10 * 3/2 = 15
        assert_eq!(
            Geometry::new(1, 10, r(1, 2), 2),
            Err(Error::OddGridLength(15))
        );
        assert!(matches!(
            Geometry::new(1, 8, r(0, 1), 5),
            Err(Error::TruncationTooLarge { m: 5, grid_len: 8 })
        ));
        assert!(matches!(
            Geometry::new(1, 8, r(0, 1), 0),
            Err(Error::TruncationTooLarge { .. })
        ));
        assert!(matches!(
            Geometry::new(1, 8, r(-1, 2), 1),
            Err(Error::NegativeOversampling(_))
        ));
        // 2m = L is admitted
        assert!(Geometry::new(2, 4, r(0, 1), 2).is_ok());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("1/2").unwrap(), r(1, 2));
        assert_eq!(parse_rational("0.5").unwrap(), r(1, 2));
        assert_eq!(parse_rational("1").unwrap(), r(1, 1));
        assert_eq!(parse_rational(".25").unwrap(), r(1, 4));
        assert_eq!(parse_rational("-0.125").unwrap(), r(-1, 8));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn grid_index_examples() {
        assert_eq!(ints(&grid_indices(4, 1)), vec![-2, -1, 0, 1]);
        let two: Vec<Vec<i64>> = grid_indices(2, 2).into_iter().map(|k| k.0).collect();
        assert_eq!(
            two,
            vec![vec![-1, -1], vec![-1, 0], vec![0, -1], vec![0, 0]]
        );
        let forty = grid_indices(40, 1);
        assert_eq!(forty.len(), 40);
        assert_eq!(forty[0].0, vec![-20]);
        assert_eq!(forty[39].0, vec![19]);
    }

    #[test]
    fn linear_index_roundtrip() {
        for (p, k) in grid_indices(6, 3).iter().enumerate() {
            assert_eq!(linear_index(&k.0, 6), p);
            assert_eq!(decode_linear(p, 6, 3), k.0);
        }
    }

    /// Literal enumeration of the periodic support definition over shifts
    /// `z ∈ {-1, 0, 1}`.
    fn periodic_brute_force(x: f64, len: usize, m: usize) -> Vec<i64> {
        let h = (len / 2) as i64;
        (-h..h)
            .filter(|&l| {
                (-1..=1).any(|z: i64| {
                    let d = len as f64 * (x + z as f64) - l as f64;
                    -(m as f64) <= d && d <= m as f64
                })
            })
            .collect()
    }

    #[test]
    fn periodic_support_examples() {
        assert_eq!(
            ints(&support_indices_periodic(&[0.0], 40, 5)),
            (-5..=5).collect::<Vec<_>>()
        );
        assert_eq!(
            ints(&support_indices_periodic(&[0.3], 40, 1)),
            vec![11, 12, 13]
        );
        // L·x = 19.6: the definition admits ℓ' ∈ {18, ..., 21}
        let near_edge = ints(&support_indices_periodic(&[0.49], 40, 2));
        assert_eq!(near_edge, vec![18, 19, -20, -19]);
        let mut sorted = near_edge.clone();
        sorted.sort();
        assert_eq!(sorted, periodic_brute_force(0.49, 40, 2));
    }

    #[test]
    fn periodic_support_matches_brute_force() {
        for i in 0..400 {
            let x = -0.5 + i as f64 / 400.0 + 1.3e-4;
            for &(len, m) in &[(40usize, 5usize), (8, 2), (4, 2), (16, 1)] {
                let mut got = ints(&support_indices_periodic(&[x], len, m));
                got.sort();
                assert_eq!(got, periodic_brute_force(x, len, m), "x={x} L={len} m={m}");
            }
        }
    }

    #[test]
    fn nonperiodic_support_examples() {
        assert_eq!(
            ints(&support_indices_nonperiodic(&[0.0], 40, 5)),
            (-5..=5).collect::<Vec<_>>()
        );
        assert_eq!(
            ints(&support_indices_nonperiodic(&[0.3], 40, 2)),
            (10..=14).collect::<Vec<_>>()
        );
        let edge = 0.5 - 5.0 / 40.0;
        assert_eq!(
            ints(&support_indices_nonperiodic(&[edge], 40, 5)),
            (10..=19).collect::<Vec<_>>()
        );
    }

    #[test]
    fn validate_nodes_examples() {
        let g = Geometry::new(1, 20, r(1, 1), 5).unwrap();
        assert!(validate_nodes(&[vec![0.0]], &g, DomainMode::Restricted).is_ok());
        assert!(validate_nodes(&[vec![0.375]], &g, DomainMode::Restricted).is_ok());
        assert!(validate_nodes(&[vec![-0.375]], &g, DomainMode::Restricted).is_ok());
        let err = validate_nodes(&[vec![0.0], vec![0.5]], &g, DomainMode::Restricted).unwrap_err();
        match &err {
            Error::NodeOutOfDomain {
                node,
                coordinate,
                value,
                ..
            } => {
                assert_eq!((*node, *coordinate, *value), (1, 0, 0.5));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(err.to_string().contains("row 2"));
    }

    #[test]
    fn periodic_canonicalization() {
        let g = Geometry::new(1, 8, r(1, 1), 2).unwrap();
        let raw: Vec<Vec<f64>> = [0.5, -0.5, 0.75, 1.25, -0.75, 3.0, 0.49999]
            .iter()
            .map(|&x| vec![x])
            .collect();
        let set = validate_nodes(&raw, &g, DomainMode::Periodic).unwrap();
        let got: Vec<f64> = set.iter().map(|x| x[0]).collect();
        assert_eq!(got, vec![-0.5, -0.5, -0.25, 0.25, 0.25, 0.0, 0.49999]);
        assert!(got.iter().all(|&x| (-0.5..0.5).contains(&x)));
    }

    #[test]
    fn non_finite_rejected() {
        let g = Geometry::new(1, 8, r(1, 1), 2).unwrap();
        assert_eq!(
            validate_nodes(&[vec![f64::NAN]], &g, DomainMode::Periodic),
            Err(Error::NonFiniteNode { node: 0 })
        );
    }
}
