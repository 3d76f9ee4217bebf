//! Numerical toolkit for translation-bounded measures on the real line:
//! Lebesgue-decomposed measure arithmetic, sliding-window norms and their
//! family/operator reformulations, epsilon-almost-period scanning and
//! classification, measure convolution with van Hove averaging, a gallery of
//! structured generators including cut-and-project Dirac combs, and a
//! desk-scale diffraction pipeline.

pub mod constructions;
pub mod convolution;
pub mod diffraction;
pub mod error;
pub mod json;
pub mod measure;
pub mod norms;
pub mod periods;
pub mod testfn;
pub mod window;

pub use error::{Error, Result};
pub use measure::{Atom, DensityPart, IfsMap, Measure, PairingView, Piece, PurePointPart, SingularPart};
pub use norms::{ComponentNorms, NormMethod, NormReport};
pub use testfn::TestFunction;
pub use window::Window;

pub use num_complex::Complex64;
