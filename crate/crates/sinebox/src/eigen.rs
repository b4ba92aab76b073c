//! Dense symmetric diagonalization of the assembled operator, plus the
//! normalized eigenstates it produces.
//!
//! One decomposition yields the whole spectrum. [`solve`] additionally
//! verifies what the backend returned (residuals and mutual orthogonality)
//! before normalizing, so a silent backend failure surfaces as an error
//! instead of a wrong physics number. [`eigenvalues`] skips the vectors and
//! the verification; it exists for the inner loop of the length optimizer,
//! where only the ground energy matters and [`solve`] at the final geometry
//! re-checks everything.

use faer::{Mat, Side};

use crate::basis::{flatten, BasisSpec, SpectralOperator};
use crate::error::Error;

/// Residual and orthogonality tolerance for [`solve`]'s self-check,
/// relative to the Frobenius norm of the operator.
pub const VERIFY_TOL: f64 = 1e-10;

/// All bound-state candidates of one operator: energies ascending, and the
/// basis coefficients of each state normalized so that the wavefunction has
/// unit L2 norm over the box (`sum A^2 = 4 / (Lx Ly)`), with the largest
/// coefficient of every state made positive.
#[derive(Debug, Clone)]
pub struct EigenSolution {
    basis: BasisSpec,
    energies: Vec<f64>,
    coeffs: Mat<f64>,
}

impl EigenSolution {
    pub fn basis(&self) -> BasisSpec {
        self.basis
    }

    pub fn n_states(&self) -> usize {
        self.energies.len()
    }

    /// Eigenvalues in nondecreasing order, dimensionless.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn energy(&self, state: usize) -> f64 {
        self.energies[state]
    }

    /// Expansion coefficient `A_{m,n}` of one state; `m, n` are 1-based.
    pub fn coefficient(&self, state: usize, m: usize, n: usize) -> f64 {
        self.coeffs[(flatten(m, n, self.basis.n_basis), state)]
    }

    /// Wavefunction value at a point of the box. Points on the walls are
    /// exactly zero; points outside are an error rather than a silent
    /// extrapolation.
    pub fn evaluate_wavefunction(&self, state: usize, x: f64, y: f64) -> Result<f64, Error> {
        if state >= self.n_states() {
            return Err(Error::StateOutOfRange { state, count: self.n_states() });
        }
        let (lx, ly) = (self.basis.length_x, self.basis.length_y);
        if !(x.is_finite() && y.is_finite()) || x < 0.0 || x > lx || y < 0.0 || y > ly {
            return Err(Error::OutOfDomain { x, y });
        }
        if x == 0.0 || x == lx || y == 0.0 || y == ly {
            return Ok(0.0);
        }
        let n = self.basis.n_basis;
        let sx: Vec<f64> = (1..=n)
            .map(|m| (m as f64 * std::f64::consts::PI * x / lx).sin())
            .collect();
        let sy: Vec<f64> = (1..=n)
            .map(|k| (k as f64 * std::f64::consts::PI * y / ly).sin())
            .collect();
        let mut acc = 0.0;
        let mut idx = 0;
        for m in 0..n {
            for k in 0..n {
                acc += self.coeffs[(idx, state)] * sx[m] * sy[k];
                idx += 1;
            }
        }
        Ok(acc)
    }

    /// Samples one state on an `m_grid x m_grid` uniform grid including the
    /// walls: `x_i = Lx * i / (m_grid - 1)`, row-major with `x` outermost.
    /// Boundary samples are exactly zero.
    ///
    /// The evaluation is contracted one axis at a time, so the cost is
    /// `O(m_grid N^2 + m_grid^2 N)` rather than the naive
    /// `O(m_grid^2 N^2)`.
    pub fn wavefunction_grid(&self, state: usize, m_grid: usize) -> Result<Vec<f64>, Error> {
        if state >= self.n_states() {
            return Err(Error::StateOutOfRange { state, count: self.n_states() });
        }
        if m_grid < 2 {
            return Err(Error::InvalidInput(
                "grid needs at least 2 points per axis".into(),
            ));
        }
        let n = self.basis.n_basis;
        let (lx, ly) = (self.basis.length_x, self.basis.length_y);
        let sines = |l: f64| -> Vec<f64> {
            let mut t = vec![0.0; m_grid * n];
            for i in 1..m_grid - 1 {
                let coord = l * i as f64 / (m_grid - 1) as f64;
                for m in 1..=n {
                    t[i * n + m - 1] = (m as f64 * std::f64::consts::PI * coord / l).sin();
                }
            }
            t
        };
        let sx = sines(lx);
        let sy = sines(ly);

        // partial[i][k] = sum_m A[m][k] sin(m pi x_i / Lx)
        let mut partial = vec![0.0; m_grid * n];
        for i in 1..m_grid - 1 {
            for m in 0..n {
                let w = sx[i * n + m];
                if w == 0.0 {
                    continue;
                }
                let base = m * n;
                for k in 0..n {
                    partial[i * n + k] += self.coeffs[(base + k, state)] * w;
                }
            }
        }
        let mut grid = vec![0.0; m_grid * m_grid];
        for i in 1..m_grid - 1 {
            for j in 1..m_grid - 1 {
                let mut acc = 0.0;
                for k in 0..n {
                    acc += partial[i * n + k] * sy[j * n + k];
                }
                grid[i * m_grid + j] = acc;
            }
        }
        Ok(grid)
    }
}

/// Full decomposition with verification. Returns every eigenpair of the
/// operator; fails with [`Error::Verification`] if any reconstructed
/// residual exceeds `VERIFY_TOL * ||D||_F` or the eigenvectors are not
/// mutually orthonormal to `VERIFY_TOL`.
pub fn solve(op: &SpectralOperator) -> Result<EigenSolution, Error> {
    let dim = op.dim();
    let evd = op
        .entries()
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigen(format!("symmetric eigensolver failed: {e:?}")))?;
    let u = evd.U();
    let s = evd.S().column_vector();

    let energies: Vec<f64> = (0..dim).map(|k| s[k]).collect();
    for w in energies.windows(2) {
        if !(w[0].is_finite() && w[1].is_finite() && w[0] <= w[1]) {
            return Err(Error::Eigen(
                "eigenvalues are not finite and nondecreasing".into(),
            ));
        }
    }

    // residuals: one GEMM, then per-column norms
    let du = op.entries() * u;
    let scale = op.entries().norm_l2();
    let tol = VERIFY_TOL * scale;
    for k in 0..dim {
        let lam = energies[k];
        let mut acc = 0.0;
        for i in 0..dim {
            let r = du[(i, k)] - lam * u[(i, k)];
            acc += r * r;
        }
        let res = acc.sqrt();
        if !(res <= tol) {
            return Err(Error::Verification(format!(
                "eigenpair {k} residual {res:.3e} exceeds {tol:.3e}"
            )));
        }
    }

    // mutual orthonormality
    let gram = u.transpose() * u;
    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[(i, j)] - want).abs());
        }
    }
    if !(worst <= VERIFY_TOL) {
        return Err(Error::Verification(format!(
            "eigenvector orthonormality defect {worst:.3e} exceeds {VERIFY_TOL:.3e}"
        )));
    }

    // normalize to unit L2 norm over the box and fix the sign convention
    let basis = op.basis();
    let norm = 2.0 / (basis.length_x * basis.length_y).sqrt();
    let mut coeffs = u.to_owned();
    for k in 0..dim {
        let mut best = 0usize;
        let mut best_abs = 0.0f64;
        for i in 0..dim {
            let a = coeffs[(i, k)].abs();
            if a > best_abs {
                best_abs = a;
                best = i;
            }
        }
        let factor = if coeffs[(best, k)] < 0.0 { -norm } else { norm };
        for i in 0..dim {
            coeffs[(i, k)] *= factor;
        }
    }

    Ok(EigenSolution { basis, energies, coeffs })
}

/// Eigenvalues only, nondecreasing. No residual check is possible without
/// the vectors; callers that report physics from these values should
/// confirm the final geometry through [`solve`].
pub fn eigenvalues(op: &SpectralOperator) -> Result<Vec<f64>, Error> {
    let vals = op
        .entries()
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Eigen(format!("symmetric eigensolver failed: {e:?}")))?;
    for w in vals.windows(2) {
        if !(w[0].is_finite() && w[1].is_finite() && w[0] <= w[1]) {
            return Err(Error::Eigen(
                "eigenvalues are not finite and nondecreasing".into(),
            ));
        }
    }
    Ok(vals)
}
