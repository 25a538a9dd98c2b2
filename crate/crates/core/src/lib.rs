//! Evaluation of bandlimited functions at nonequispaced points from
//! equispaced samples of their Fourier transform, via a regularized sinc
//! kernel, next to the classical NFFT and dense reference operators.
//!
//! ```
//! use bandsinc::{Geometry, Rational, WindowFamily, WindowSpec, Spectrum, DomainMode};
//! use bandsinc::{default_beta, validate_nodes, plan_bandlimited};
//! use num_complex::Complex64;
//!
//! let geometry = Geometry::new(1, 20, Rational::from_integer(1), 5).unwrap();
//! let beta = default_beta(WindowFamily::SinhType, 5, Rational::from_integer(1)).unwrap();
//! let window = WindowSpec::for_geometry(WindowFamily::SinhType, beta, &geometry).unwrap();
//! let nodes = validate_nodes(&[vec![0.0], vec![0.2]], &geometry, DomainMode::Restricted).unwrap();
//! let plan = plan_bandlimited(&geometry, &window, &nodes).unwrap();
//! let spectrum = Spectrum::from_fn(20, 1, |k| Complex64::new(if k[0] == 0 { 1.0 } else { 0.0 }, 0.0)).unwrap();
//! let f = plan.execute(&spectrum).unwrap();
//! assert!((f[0].re - 1.0).abs() < 1e-3);
//! ```

// `!(x >= t)` style comparisons are kept on purpose: they also reject NaN.
#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::len_without_is_empty,
    clippy::type_complexity
)]

pub mod error;
pub mod exec;
pub mod experiments;
pub mod geometry;
pub mod kernel;
pub mod oracle;
pub mod quadrature;
pub mod special;
pub mod spectral;
pub mod transforms;
pub mod windows;

pub use error::{Error, ErrorClass, Result};
pub use exec::Execution;
pub use geometry::{
    parse_rational, support_indices_nonperiodic, support_indices_periodic, validate_flat,
    validate_nodes, DomainMode, Geometry, MultiIndex, NodeSet, Rational,
};
pub use kernel::{
    psi_eval, sinc_eval, spectral_factors, FactorKind, RegularizedSinc, SpectralFactors,
};
pub use spectral::{inverse_dft_grid, zero_pad_embed, GridCoefficients, GridFft, GridSamples};
pub use transforms::{
    execute_bandlimited, execute_nfft, plan_bandlimited, plan_nfft, BandlimitedPlan, NfftPlan,
    Spectrum,
};
pub use windows::{default_beta, window_axioms_report, window_eval, WindowFamily, WindowSpec};
