//! Spherical functions of SL(3,R), the spherical transform and its inverse, kernels with
//! Paley–Wiener transforms, and oscillatory integrals over the flat.
//!
//! Every quadrature here runs twice, the second time on a doubled grid, and reports the
//! difference as its error estimate; under-resolved requests are refused with
//! [`Error::Resolution`](crate::Error::Resolution).

pub mod bump;
pub mod function;
pub mod kernel;
pub mod multiplier;
pub mod oscillatory;
pub mod quadrature;
pub mod table;

pub use bump::{BumpFunction, Bump1d};
pub use function::{envelope_sup, spherical_auto, spherical_fn, SphericalTable};
pub use kernel::{hc_transform, inverse_hc, phat, HcOptions, KernelFunction, SpectralGrid};
pub use multiplier::{jacobian, plancherel_density, PaleyWienerMultiplier};
pub use oscillatory::{fit_slope, oscillatory_aaint, oscillatory_aint1, oscillatory_i, stationary_phase_1d, OscillatoryReport, TestFunctionSpec};
pub use quadrature::So3Grid;
pub use table::ChamberTable;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A quadrature value with its grid-doubling error estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
}
