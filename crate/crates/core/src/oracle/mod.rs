//! Independent numerical references: spectral radius by power iteration and
//! full spectra for the few shapes where they can be enumerated.

pub mod poly;
pub mod power;
pub mod spectrum;

pub use power::{power_rho, CwInterval, EigenEstimate, PowerOptions};
pub use spectrum::{
    characteristic_polynomial, matrix_spectrum, small_tensor_charpoly, small_tensor_spectrum,
    SpectrumList,
};
