//! Accuracy diagnostics: comparisons against exact references where they
//! exist, and self-referential estimates where they do not.
//!
//! The harmonic oscillator is the calibration problem because everything
//! about it is known in closed form. For potentials without exact
//! solutions, the only honest error estimate is internal consistency
//! between two basis sizes, which is what [`delta_hat_e`] provides.

use std::f64::consts::PI;
use std::ops::Range;

use crate::eigen::EigenSolution;
use crate::error::Error;
use crate::optimize::{ground_energy, LhatCurve};
use crate::potential::SeparablePotential;

/// Relative gap below which two adjacent eigenvalues are treated as one
/// degenerate cluster.
pub const DEGENERACY_TOL: f64 = 1e-6;

/// Grid used when estimating the overlap between states of two different
/// solutions in [`delta_hat_e`].
const OVERLAP_GRID: usize = 101;

/// Physicists' Hermite polynomial `H_n(x)` by the three-term recurrence
/// `H_{n+1} = 2x H_n - 2n H_{n-1}`.
pub fn hermite(n: u32, x: f64) -> f64 {
    let mut h0 = 1.0;
    if n == 0 {
        return h0;
    }
    let mut h1 = 2.0 * x;
    for k in 1..n {
        let h2 = 2.0 * x * h1 - 2.0 * k as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// Exact 2D harmonic-oscillator state in the dimensionless convention where
/// the energies are `2 (n_x + n_y + 1)` and the wavefunctions are products
/// of normalized 1D oscillator states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShoReference {
    pub n_x: u32,
    pub n_y: u32,
}

impl ShoReference {
    pub fn new(n_x: u32, n_y: u32) -> Self {
        Self { n_x, n_y }
    }

    /// Dimensionless eigenvalue `2 (n_x + n_y + 1)`.
    pub fn energy(&self) -> f64 {
        2.0 * (self.n_x + self.n_y + 1) as f64
    }

    /// Wavefunction in centered coordinates.
    pub fn eval_centered(&self, u: f64, v: f64) -> f64 {
        axis_state(self.n_x, u) * axis_state(self.n_y, v)
    }

    /// Wavefunction at box coordinates, with the well centered at
    /// `(lx/2, ly/2)`.
    pub fn eval_in_box(&self, x: f64, y: f64, length_x: f64, length_y: f64) -> f64 {
        self.eval_centered(x - 0.5 * length_x, y - 0.5 * length_y)
    }
}

fn axis_state(n: u32, u: f64) -> f64 {
    let norm = 1.0 / ((2.0f64.powi(n as i32) * factorial(n)).sqrt() * PI.powf(0.25));
    norm * hermite(n, u) * (-0.5 * u * u).exp()
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Relative energy error `|computed - exact| / |exact|` against a known
/// reference. A zero reference has no relative error; that is reported
/// rather than returning infinity.
pub fn delta_e(computed: f64, exact: f64) -> Result<f64, Error> {
    if exact == 0.0 {
        return Err(Error::ZeroReference);
    }
    Ok((computed - exact).abs() / exact.abs())
}

/// Result of [`delta_hat_e`]: the two-resolution energy drift, plus the
/// overlap between the two states so a crossing of levels between the two
/// solutions does not masquerade as convergence.
#[derive(Debug, Clone, Copy)]
pub struct DeltaHat {
    /// `|E_coarse - E_fine| / |E_fine|` for the sorted state index.
    pub value: f64,
    /// Cosine of the angle between the two sampled wavefunctions on the
    /// common part of the two boxes; near 1 means the sorted index refers
    /// to the same physical state in both solutions.
    pub overlap: f64,
}

/// Self-referential precision estimate: how much one sorted energy moves
/// between two basis sizes (each solved on its own, typically optimized,
/// box). States are paired by sorted position; the returned overlap tells
/// the caller how trustworthy that pairing was.
pub fn delta_hat_e(
    coarse: &EigenSolution,
    fine: &EigenSolution,
    state: usize,
) -> Result<DeltaHat, Error> {
    let count = coarse.n_states().min(fine.n_states());
    if state >= count {
        return Err(Error::StateOutOfRange { state, count });
    }
    let e_fine = fine.energy(state);
    if e_fine == 0.0 {
        return Err(Error::ZeroReference);
    }
    let value = (coarse.energy(state) - e_fine).abs() / e_fine.abs();

    // sample the centered common region of the two boxes: the wells sit at
    // the box centers, so aligning centers compares the same physical state
    let cb = coarse.basis();
    let fb = fine.basis();
    let sx = cb.length_x.min(fb.length_x);
    let sy = cb.length_y.min(fb.length_y);
    let m = OVERLAP_GRID;
    let mut dot = 0.0;
    let mut nc = 0.0;
    let mut nf = 0.0;
    for i in 0..m {
        let u = sx * i as f64 / (m - 1) as f64 - 0.5 * sx;
        for j in 0..m {
            let v = sy * j as f64 / (m - 1) as f64 - 0.5 * sy;
            let a =
                coarse.evaluate_wavefunction(state, u + 0.5 * cb.length_x, v + 0.5 * cb.length_y)?;
            let b =
                fine.evaluate_wavefunction(state, u + 0.5 * fb.length_x, v + 0.5 * fb.length_y)?;
            dot += a * b;
            nc += a * a;
            nf += b * b;
        }
    }
    let denom = (nc * nf).sqrt();
    let overlap = if denom > 0.0 { (dot / denom).abs() } else { 0.0 };
    Ok(DeltaHat { value, overlap })
}

/// Pointwise wavefunction error against an exact oscillator state, sampled
/// on an `m_grid x m_grid` uniform grid over the solution's box:
/// `sqrt( sum (psi_exact - s psi)^2 / sum psi_exact^2 )` with the sign `s`
/// chosen to align the two conventions.
///
/// Refuses states inside a degenerate cluster (at [`DEGENERACY_TOL`]): the
/// solver may return any rotation within the degenerate subspace, so a
/// comparison against one fixed reference state would measure the rotation
/// angle, not the accuracy.
pub fn delta_psi(
    sol: &EigenSolution,
    state: usize,
    reference: &ShoReference,
    m_grid: usize,
) -> Result<f64, Error> {
    if state >= sol.n_states() {
        return Err(Error::StateOutOfRange { state, count: sol.n_states() });
    }
    let clusters = cluster_degeneracies(sol.energies(), DEGENERACY_TOL);
    if let Some(c) = clusters.iter().find(|c| c.contains(&state)) {
        if c.len() > 1 {
            return Err(Error::DegenerateState { state, size: c.len() });
        }
    }
    let computed = sol.wavefunction_grid(state, m_grid)?;
    let basis = sol.basis();
    let mut exact = vec![0.0; m_grid * m_grid];
    for i in 0..m_grid {
        let x = basis.length_x * i as f64 / (m_grid - 1) as f64;
        for j in 0..m_grid {
            let y = basis.length_y * j as f64 / (m_grid - 1) as f64;
            exact[i * m_grid + j] = reference.eval_in_box(x, y, basis.length_x, basis.length_y);
        }
    }
    let dot: f64 = exact.iter().zip(&computed).map(|(e, c)| e * c).sum();
    let s = if dot < 0.0 { -1.0 } else { 1.0 };
    let num: f64 = exact
        .iter()
        .zip(&computed)
        .map(|(e, c)| (e - s * c) * (e - s * c))
        .sum();
    let den: f64 = exact.iter().map(|e| e * e).sum();
    if den == 0.0 {
        return Err(Error::ZeroReference);
    }
    Ok((num / den).sqrt())
}

/// Groups a nondecreasing energy list into clusters of near-degenerate
/// levels: adjacent values belong together when their gap is below `tol`
/// relative to their magnitude. Returns index ranges covering the whole
/// list in order.
pub fn cluster_degeneracies(energies: &[f64], tol: f64) -> Vec<Range<usize>> {
    let mut clusters = Vec::new();
    if energies.is_empty() {
        return clusters;
    }
    let mut start = 0;
    for i in 1..energies.len() {
        let gap = energies[i] - energies[i - 1];
        let scale = energies[i].abs().max(energies[i - 1].abs());
        if gap > tol * scale {
            clusters.push(start..i);
            start = i;
        }
    }
    clusters.push(start..energies.len());
    clusters
}

/// Ground-energy error as a function of basis size, each solved at the
/// curve's interpolated optimal length. Returns `(N, delta_E)` pairs in
/// the order requested.
pub fn convergence_study<F>(
    n_values: &[usize],
    curve: &LhatCurve,
    exact: f64,
    build: &F,
) -> Result<Vec<(usize, f64)>, Error>
where
    F: Fn(f64) -> Result<SeparablePotential, Error>,
{
    let mut out = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let l = curve.length_at(n as f64);
        let e0 = ground_energy(n, l, build)?;
        out.push((n, delta_e(e0, exact)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{assemble, BasisSpec};
    use crate::eigen::solve;
    use crate::optimize::{build_curve_in, CurveSample};

    #[test]
    fn hermite_matches_hand_values() {
        // arguments chosen exactly representable so the recurrence is exact
        assert_eq!(hermite(0, 1.75), 1.0);
        assert_eq!(hermite(1, 1.75), 3.5);
        assert_eq!(hermite(2, 1.5), 7.0); // 4 x^2 - 2
        assert_eq!(hermite(3, 0.5), -5.0); // 8 x^3 - 12 x
        assert_eq!(hermite(4, 1.0), -20.0); // 16 x^4 - 48 x^2 + 12
    }

    #[test]
    fn hermite_recurrence_equals_explicit_forms_on_integers() {
        // integer arguments keep every operation exact, so equality is exact
        for x in [-2.0f64, -1.0, 0.0, 1.0, 2.0] {
            let explicit = [
                1.0,
                2.0 * x,
                4.0 * x.powi(2) - 2.0,
                8.0 * x.powi(3) - 12.0 * x,
                16.0 * x.powi(4) - 48.0 * x.powi(2) + 12.0,
                32.0 * x.powi(5) - 160.0 * x.powi(3) + 120.0 * x,
            ];
            for (n, want) in explicit.iter().enumerate() {
                assert_eq!(hermite(n as u32, x), *want, "H_{n}({x})");
            }
        }
    }

    #[test]
    fn oscillator_reference_energy_and_center_value() {
        let ground = ShoReference::new(0, 0);
        assert_eq!(ground.energy(), 2.0);
        assert_eq!(ShoReference::new(1, 2).energy(), 8.0);
        // peak of the ground state is 1/sqrt(pi)
        let peak = ground.eval_centered(0.0, 0.0);
        assert!((peak - 1.0 / PI.sqrt()).abs() < 1e-15);
        // odd states have a node on their axis
        assert_eq!(ShoReference::new(1, 0).eval_centered(0.0, 0.3), 0.0);
    }

    #[test]
    fn oscillator_reference_is_normalized() {
        // Simpson rule on [-8, 8]^2 via separability: each axis integral of
        // the squared 1D state must be 1
        for n in 0..4 {
            let pts = 1601;
            let h = 16.0 / (pts - 1) as f64;
            let mut acc = 0.0;
            for i in 0..pts {
                let u = -8.0 + i as f64 * h;
                let w = if i == 0 || i == pts - 1 {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                acc += w * axis_state(n, u).powi(2);
            }
            let integral = acc * h / 3.0;
            assert!((integral - 1.0).abs() < 1e-10, "n = {n}: {integral}");
        }
    }

    #[test]
    fn relative_energy_error_basics() {
        assert_eq!(delta_e(2.0, 2.0).unwrap(), 0.0);
        assert!((delta_e(2.02, 2.0).unwrap() - 0.01).abs() < 1e-12);
        assert!(matches!(delta_e(1.0, 0.0), Err(Error::ZeroReference)));
    }

    #[test]
    fn clustering_splits_on_relative_gaps() {
        let e = [2.0, 4.0, 4.0 + 1e-9, 6.0, 6.0, 6.0 + 1e-8, 8.0];
        let c = cluster_degeneracies(&e, DEGENERACY_TOL);
        assert_eq!(c, vec![0..1, 1..3, 3..6, 6..7]);

        assert_eq!(cluster_degeneracies(&[], DEGENERACY_TOL), vec![]);
        assert_eq!(cluster_degeneracies(&[5.0], DEGENERACY_TOL), vec![0..1]);
        assert_eq!(
            cluster_degeneracies(&[3.0, 3.0, 3.0], DEGENERACY_TOL),
            vec![0..3]
        );
        assert_eq!(
            cluster_degeneracies(&[0.0, 0.0, 1.0], DEGENERACY_TOL),
            vec![0..2, 2..3]
        );
    }

    fn sho_solution(n: usize, l: f64) -> EigenSolution {
        let basis = BasisSpec::square(n, l).unwrap();
        let p = SeparablePotential::harmonic(l, l).unwrap();
        solve(&assemble(&basis, &p).unwrap()).unwrap()
    }

    #[test]
    fn ground_state_error_is_small_and_degenerate_states_refuse() {
        let sol = sho_solution(14, 9.5);
        let d = delta_psi(&sol, 0, &ShoReference::new(0, 0), 61).unwrap();
        assert!(d > 0.0 && d < 1e-4, "delta_psi = {d}");

        // the first excited level is a two-fold cluster
        match delta_psi(&sol, 1, &ShoReference::new(1, 0), 61) {
            Err(Error::DegenerateState { state: 1, size: 2 }) => {}
            other => panic!("expected DegenerateState, got {other:?}"),
        }
        assert!(matches!(
            delta_psi(&sol, 9999, &ShoReference::new(0, 0), 61),
            Err(Error::StateOutOfRange { .. })
        ));
    }

    #[test]
    fn two_resolution_drift_pairs_matching_states() {
        let a = sho_solution(12, 9.0);
        let b = sho_solution(13, 9.2);
        let d = delta_hat_e(&a, &b, 0).unwrap();
        assert!(d.value < 1e-5, "drift = {}", d.value);
        assert!(d.overlap > 0.999, "overlap = {}", d.overlap);
        assert!(matches!(
            delta_hat_e(&a, &b, 9999),
            Err(Error::StateOutOfRange { .. })
        ));
    }

    #[test]
    fn convergence_study_errors_shrink_with_n() {
        let build = |l: f64| SeparablePotential::harmonic(l, l);
        let curve = build_curve_in(&[6, 8, 10], &build, (3.0, 15.0)).unwrap();
        let study = convergence_study(&[6, 8, 10], &curve, 2.0, &build).unwrap();
        assert_eq!(study.len(), 3);
        assert!(study[0].1 > study[1].1 && study[1].1 > study[2].1, "{study:?}");
    }

    #[test]
    fn curve_lookup_feeds_the_study_between_samples() {
        let samples = vec![
            CurveSample { n_basis: 6, l_hat: 7.0, e0: 2.001 },
            CurveSample { n_basis: 10, l_hat: 8.4, e0: 2.0001 },
            CurveSample { n_basis: 14, l_hat: 9.6, e0: 2.00001 },
        ];
        let curve = LhatCurve::from_samples(samples).unwrap();
        let build = |l: f64| SeparablePotential::harmonic(l, l);
        let study = convergence_study(&[8], &curve, 2.0, &build).unwrap();
        assert!(study[0].1 < 1e-2);
    }
}
