//! Bound states of the 2D time-independent Schrodinger equation by a
//! Fourier sine expansion inside a hard-walled box.
//!
//! The pipeline: pick a separable polynomial potential, assemble the dense
//! symmetric operator in the sine basis (all matrix elements analytic up to
//! quartic monomials), diagonalize once for the whole spectrum, and
//! optionally optimize the box size so the truncated basis is spent where
//! the wavefunctions live. Diagnostics compare against the exactly solvable
//! harmonic oscillator or, for unsolvable wells, against the same problem
//! at the next basis size.
//!
//! ```
//! use sinebox::{assemble, solve, BasisSpec, SeparablePotential};
//!
//! let l = 9.0;
//! let basis = BasisSpec::square(10, l)?;
//! let well = SeparablePotential::harmonic(l, l)?;
//! let states = solve(&assemble(&basis, &well)?)?;
//! // dimensionless oscillator levels are 2 (n_x + n_y + 1)
//! assert!((states.energy(0) - 2.0).abs() < 1e-3);
//! assert!((states.energy(1) - 4.0).abs() < 1e-2);
//! # Ok::<(), sinebox::Error>(())
//! ```

pub mod basis;
pub mod diagnostics;
pub mod eigen;
mod error;
pub mod interp;
pub mod optimize;
pub mod potential;

pub use basis::{assemble, flatten, unflatten, BasisSpec, SpectralOperator};
pub use eigen::{eigenvalues, solve, EigenSolution};
pub use error::Error;
pub use optimize::{build_curve, find_optimal_length, LhatCurve};
pub use potential::{coupling_1d, SeparablePotential};
