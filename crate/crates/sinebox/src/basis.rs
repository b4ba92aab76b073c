//! The 2D sine basis on a box and the dense operator it induces.
//!
//! Basis functions are `sin(m pi x / Lx) sin(n pi y / Ly)` for
//! `m, n = 1..=N`, which vanish on the walls of `[0, Lx] x [0, Ly]` by
//! construction. The pair `(m, n)` is flattened row-major to a single index
//! so the operator becomes an ordinary `(N^2) x (N^2)` symmetric matrix.

use faer::Mat;

use crate::error::Error;
use crate::potential::{combine_2d, coupling_1d, OneDimCoupling, SeparablePotential};

/// Basis truncation and box geometry. `n_basis` counts modes per axis, so
/// the flattened problem has dimension `n_basis^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisSpec {
    pub n_basis: usize,
    pub length_x: f64,
    pub length_y: f64,
}

impl BasisSpec {
    pub fn new(n_basis: usize, length_x: f64, length_y: f64) -> Result<Self, Error> {
        let spec = Self { n_basis, length_x, length_y };
        spec.validate()?;
        Ok(spec)
    }

    /// Square box of side `length`.
    pub fn square(n_basis: usize, length: f64) -> Result<Self, Error> {
        Self::new(n_basis, length, length)
    }

    /// Dimension of the flattened problem, `n_basis^2`.
    pub fn dim(&self) -> usize {
        self.n_basis * self.n_basis
    }

    pub(crate) fn validate(&self) -> Result<(), Error> {
        if self.n_basis == 0 {
            return Err(Error::InvalidBasis("basis size must be at least 1".into()));
        }
        if !(self.length_x.is_finite() && self.length_x > 0.0) {
            return Err(Error::InvalidBasis(format!(
                "length_x must be positive and finite, got {}",
                self.length_x
            )));
        }
        if !(self.length_y.is_finite() && self.length_y > 0.0) {
            return Err(Error::InvalidBasis(format!(
                "length_y must be positive and finite, got {}",
                self.length_y
            )));
        }
        Ok(())
    }
}

/// Row-major flattening of the mode pair `(m, n)`, both 1-based:
/// `(m - 1) * n_basis + (n - 1)`.
pub fn flatten(m: usize, n: usize, n_basis: usize) -> usize {
    assert!(
        (1..=n_basis).contains(&m) && (1..=n_basis).contains(&n),
        "mode pair ({m}, {n}) out of range 1..={n_basis}"
    );
    (m - 1) * n_basis + (n - 1)
}

/// Inverse of [`flatten`]; returns the 1-based `(m, n)`.
pub fn unflatten(index: usize, n_basis: usize) -> (usize, usize) {
    assert!(
        index < n_basis * n_basis,
        "flat index {index} out of range for basis size {n_basis}"
    );
    (index / n_basis + 1, index % n_basis + 1)
}

/// The Hamiltonian in the sine basis: kinetic diagonal
/// `(m pi/Lx)^2 + (n pi/Ly)^2` plus the potential coupling. Symmetric by
/// construction (mirrored assignment, so equality is bitwise).
#[derive(Debug, Clone)]
pub struct SpectralOperator {
    basis: BasisSpec,
    entries: Mat<f64>,
}

impl SpectralOperator {
    pub fn basis(&self) -> BasisSpec {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn entries(&self) -> faer::MatRef<'_, f64> {
        self.entries.as_ref()
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }
}

/// Assembles the dense operator for a basis and a potential living on the
/// same box. Each separable term contributes a product of two per-axis
/// matrices, so the work is `O(T N^2)` 1D elements plus an `O(T N^4)` fill;
/// no 2D quadrature is ever performed.
pub fn assemble(
    basis: &BasisSpec,
    potential: &SeparablePotential,
) -> Result<SpectralOperator, Error> {
    basis.validate()?;
    let (px, py) = potential.domain();
    if px != basis.length_x || py != basis.length_y {
        return Err(Error::DomainMismatch {
            expected: (basis.length_x, basis.length_y),
            found: (px, py),
        });
    }

    let n = basis.n_basis;
    let couplings: Vec<(f64, OneDimCoupling, OneDimCoupling)> = potential
        .terms()
        .iter()
        .map(|t| {
            let cx = coupling_1d(&t.poly_x, n, basis.length_x)?;
            let cy = coupling_1d(&t.poly_y, n, basis.length_y)?;
            Ok((t.coeff, cx, cy))
        })
        .collect::<Result<_, Error>>()?;
    let terms: Vec<_> = couplings
        .iter()
        .map(|(c, cx, cy)| combine_2d(cx, cy, *c))
        .collect::<Result<_, Error>>()?;

    let dim = basis.dim();
    let mut entries = Mat::zeros(dim, dim);
    let kx = std::f64::consts::PI / basis.length_x;
    let ky = std::f64::consts::PI / basis.length_y;
    for i in 0..dim {
        let (m, nn) = unflatten(i, n);
        for j in i..dim {
            let (mp, np) = unflatten(j, n);
            let mut v: f64 = terms.iter().map(|t| t.entry(m, mp, nn, np)).sum();
            if i == j {
                let fx = m as f64 * kx;
                let fy = nn as f64 * ky;
                v += fx * fx + fy * fy;
            }
            if !v.is_finite() {
                return Err(Error::InvalidPotential(format!(
                    "operator entry ({i}, {j}) is not finite"
                )));
            }
            entries[(i, j)] = v;
            entries[(j, i)] = v;
        }
    }
    Ok(SpectralOperator { basis: *basis, entries })
}
