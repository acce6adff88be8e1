//! Based filtered chain complexes over exact rings: homology, spectral
//! invariants, and executable checks of their structural properties.

pub mod coeff;
pub mod complex;
pub mod format;
pub mod homology;
mod linalg;
pub mod models;
pub mod props;
pub mod runner;
pub mod spectral;

pub use coeff::{BaseRing, Coefficient, Extended, Rational, RingDescriptor, Scalar};
pub use complex::{ChainClass, ComplexError, FilteredComplex, FilteredMap, Generator, Window};
pub use spectral::{SpectralError, SpectralValue};
