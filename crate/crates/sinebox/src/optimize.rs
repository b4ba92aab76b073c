//! Box-length optimization.
//!
//! In a hard-walled box the sine expansion converges fastest at one
//! particular box size: too small and the walls squeeze the state, too
//! large and the truncated basis wastes resolution. The ground energy as a
//! function of box length is smooth with a single interior minimum for
//! confining wells, so a coarse scan plus golden-section refinement finds
//! the optimum reliably. Repeating this per basis size yields a curve
//! `L_hat(N)` that can be interpolated when solving at sizes that were
//! never optimized directly.

use crate::basis::{assemble, BasisSpec};
use crate::eigen;
use crate::error::Error;
use crate::interp::MonotoneCubic;
use crate::potential::SeparablePotential;

/// Bracket used by [`build_curve`] when the caller has no better prior.
/// Wide enough for every well this crate ships builtins for.
pub const DEFAULT_LENGTH_BRACKET: (f64, f64) = (2.0, 40.0);

/// Absolute length resolution the golden-section stage refines to.
pub const LENGTH_TOL: f64 = 1e-3;

/// Points in the coarse scan, endpoints included.
const SCAN_POINTS: usize = 17;

/// Lowest eigenvalue of the operator for one basis size and box length.
/// `build` maps a length to the potential on that box; the eigenvectors are
/// never formed, which keeps this cheap enough to sit in an optimizer loop.
pub fn ground_energy<F>(n_basis: usize, length: f64, build: &F) -> Result<f64, Error>
where
    F: Fn(f64) -> Result<SeparablePotential, Error>,
{
    nth_energy(n_basis, length, build, 0)
}

/// Like [`ground_energy`] but for an arbitrary sorted state index, for the
/// rare optimization that targets an excited level.
pub fn nth_energy<F>(n_basis: usize, length: f64, build: &F, state: usize) -> Result<f64, Error>
where
    F: Fn(f64) -> Result<SeparablePotential, Error>,
{
    if n_basis < 2 {
        return Err(Error::InvalidInput(
            "energy optimization needs at least 2 modes per axis".into(),
        ));
    }
    if state >= n_basis * n_basis {
        return Err(Error::StateOutOfRange { state, count: n_basis * n_basis });
    }
    let basis = BasisSpec::square(n_basis, length)?;
    let op = assemble(&basis, &build(length)?)?;
    Ok(eigen::eigenvalues(&op)?[state])
}

/// Golden-section minimization of a unimodal function on `[lo, hi]` down to
/// an interval of width `xtol`. Returns the best evaluated point and its
/// value, so the reported minimum was actually computed, not inferred.
pub fn minimize_scalar<G>(mut f: G, lo: f64, hi: f64, xtol: f64) -> Result<(f64, f64), Error>
where
    G: FnMut(f64) -> Result<f64, Error>,
{
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidInput(format!(
            "bad minimization interval [{lo}, {hi}]"
        )));
    }
    if !(xtol.is_finite() && xtol > 0.0) {
        return Err(Error::InvalidInput(format!("bad tolerance {xtol}")));
    }
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    if b - a <= xtol {
        let mid = 0.5 * (a + b);
        return Ok((mid, f(mid)?));
    }
    let mut x1 = b - INVPHI * (b - a);
    let mut x2 = a + INVPHI * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    let (mut best_x, mut best_f) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    while b - a > xtol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INVPHI * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INVPHI * (b - a);
            f2 = f(x2)?;
        }
        let (x, fx) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
        if fx < best_f {
            best_x = x;
            best_f = fx;
        }
    }
    Ok((best_x, best_f))
}

/// 17-point coarse scan of the ground energy over the bracket. Returns the
/// scan abscissas and values, or the first evaluation error.
fn coarse_scan<G>(f: &mut G, lo: f64, hi: f64) -> Result<(Vec<f64>, Vec<f64>), Error>
where
    G: FnMut(f64) -> Result<f64, Error>,
{
    let mut ls = Vec::with_capacity(SCAN_POINTS);
    let mut es = Vec::with_capacity(SCAN_POINTS);
    for i in 0..SCAN_POINTS {
        let l = lo + (hi - lo) * i as f64 / (SCAN_POINTS - 1) as f64;
        ls.push(l);
        es.push(f(l)?);
    }
    Ok((ls, es))
}

fn scan_then_golden<G>(mut f: G, lo: f64, hi: f64) -> Result<(f64, f64), Error>
where
    G: FnMut(f64) -> Result<f64, Error>,
{
    if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi) {
        return Err(Error::InvalidInput(format!(
            "length bracket must satisfy 0 < lo < hi, got [{lo}, {hi}]"
        )));
    }
    let (ls, es) = coarse_scan(&mut f, lo, hi)?;
    let mut imin = 0;
    for (i, &e) in es.iter().enumerate() {
        if e < es[imin] {
            imin = i;
        }
    }
    if imin == 0 || imin == SCAN_POINTS - 1 {
        return Err(Error::NoInteriorMinimum { lo, hi });
    }
    let (l_hat, e0) = minimize_scalar(&mut f, ls[imin - 1], ls[imin + 1], LENGTH_TOL)?;
    // the scan point is also an evaluated candidate; keep whichever won
    if es[imin] < e0 {
        Ok((ls[imin], es[imin]))
    } else {
        Ok((l_hat, e0))
    }
}

/// Finds the box length minimizing the ground energy for one basis size:
/// coarse scan over the bracket, then golden-section refinement around the
/// best scan point, to [`LENGTH_TOL`]. The minimum must be interior to the
/// bracket; a minimum at either end means the bracket was wrong and is
/// reported as [`Error::NoInteriorMinimum`].
pub fn find_optimal_length<F>(
    n_basis: usize,
    build: &F,
    bracket: (f64, f64),
) -> Result<(f64, f64), Error>
where
    F: Fn(f64) -> Result<SeparablePotential, Error>,
{
    find_optimal_length_target(n_basis, build, bracket, 0)
}

/// [`find_optimal_length`] with the minimized level chosen by sorted index.
pub fn find_optimal_length_target<F>(
    n_basis: usize,
    build: &F,
    bracket: (f64, f64),
    state: usize,
) -> Result<(f64, f64), Error>
where
    F: Fn(f64) -> Result<SeparablePotential, Error>,
{
    scan_then_golden(|l| nth_energy(n_basis, l, build, state), bracket.0, bracket.1)
}

/// Independent side lengths for potentials without the x/y symmetry:
/// coordinate descent, optimizing one axis at a time with the other held
/// fixed, until neither moves by more than [`LENGTH_TOL`]. `build` receives
/// `(length_x, length_y)`. Returns `((length_x, length_y), ground_energy)`.
pub fn find_optimal_lengths<F>(
    n_basis: usize,
    build: &F,
    bracket: (f64, f64),
) -> Result<((f64, f64), f64), Error>
where
    F: Fn(f64, f64) -> Result<SeparablePotential, Error>,
{
    if n_basis < 2 {
        return Err(Error::InvalidInput(
            "ground-state optimization needs at least 2 modes per axis".into(),
        ));
    }
    let ground = |lx: f64, ly: f64| -> Result<f64, Error> {
        let basis = BasisSpec::new(n_basis, lx, ly)?;
        let op = assemble(&basis, &build(lx, ly)?)?;
        Ok(eigen::eigenvalues(&op)?[0])
    };
    // symmetric start
    let (start, _) = scan_then_golden(|l| ground(l, l), bracket.0, bracket.1)?;
    let (mut lx, mut ly) = (start, start);
    for _ in 0..25 {
        let (nx, _) = scan_then_golden(|l| ground(l, ly), bracket.0, bracket.1)?;
        let (ny, ey) = scan_then_golden(|l| ground(nx, l), bracket.0, bracket.1)?;
        let moved = (nx - lx).abs().max((ny - ly).abs());
        lx = nx;
        ly = ny;
        if moved < LENGTH_TOL {
            // ey was evaluated at the final (lx, ly)
            return Ok(((lx, ly), ey));
        }
    }
    Err(Error::NoConvergence(
        "coordinate descent on the box lengths did not settle".into(),
    ))
}

/// One optimized point of the `L_hat(N)` curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub n_basis: usize,
    pub l_hat: f64,
    pub e0: f64,
}

/// Optimal box length as a function of basis size: a handful of optimized
/// samples plus a monotone cubic through them. Inside the sampled range the
/// interpolant reproduces the samples exactly; outside it extrapolates
/// linearly with the boundary slope, which is adequate for the one-step
/// lookups (`N + 1`) the precision estimate needs.
#[derive(Debug, Clone)]
pub struct LhatCurve {
    samples: Vec<CurveSample>,
    interp: MonotoneCubic,
}

impl LhatCurve {
    pub fn from_samples(mut samples: Vec<CurveSample>) -> Result<Self, Error> {
        if samples.len() < 2 {
            return Err(Error::InvalidCurve(
                "need at least 2 samples to interpolate".into(),
            ));
        }
        samples.sort_by_key(|s| s.n_basis);
        for w in samples.windows(2) {
            if w[0].n_basis == w[1].n_basis {
                return Err(Error::InvalidCurve(format!(
                    "duplicate sample at N={}",
                    w[0].n_basis
                )));
            }
        }
        for s in &samples {
            if s.n_basis == 0 {
                return Err(Error::InvalidCurve("sample with N=0".into()));
            }
            if !(s.l_hat.is_finite() && s.l_hat > 0.0) || !s.e0.is_finite() {
                return Err(Error::InvalidCurve(format!(
                    "non-finite or nonpositive sample at N={}",
                    s.n_basis
                )));
            }
        }
        let xs: Vec<f64> = samples.iter().map(|s| s.n_basis as f64).collect();
        let ys: Vec<f64> = samples.iter().map(|s| s.l_hat).collect();
        let interp = MonotoneCubic::new(xs, ys)?;
        Ok(Self { samples, interp })
    }

    pub fn samples(&self) -> &[CurveSample] {
        &self.samples
    }

    /// Interpolated optimal length at a (possibly fractional) basis size.
    pub fn length_at(&self, n_basis: f64) -> f64 {
        self.interp.eval(n_basis)
    }

    /// Renders the curve as the plain-text table format: a `N L_hat E0`
    /// header line, then one row per sample. Floats are written with enough
    /// digits to round-trip exactly.
    pub fn to_table(&self) -> String {
        let mut out = String::from("N L_hat E0\n");
        for s in &self.samples {
            out.push_str(&format!("{} {:.16e} {:.16e}\n", s.n_basis, s.l_hat, s.e0));
        }
        out
    }

    /// Parses the table format produced by [`LhatCurve::to_table`].
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        match lines.next() {
            Some(header) if header.split_whitespace().eq(["N", "L_hat", "E0"]) => {}
            _ => {
                return Err(Error::ParseCurve(
                    "first line must be the header `N L_hat E0`".into(),
                ))
            }
        }
        let mut samples = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::ParseCurve(format!(
                    "row {} has {} fields, expected 3",
                    lineno + 2,
                    fields.len()
                )));
            }
            let n_basis: usize = fields[0].parse().map_err(|_| {
                Error::ParseCurve(format!("bad N `{}` on row {}", fields[0], lineno + 2))
            })?;
            let l_hat: f64 = fields[1].parse().map_err(|_| {
                Error::ParseCurve(format!("bad L_hat `{}` on row {}", fields[1], lineno + 2))
            })?;
            let e0: f64 = fields[2].parse().map_err(|_| {
                Error::ParseCurve(format!("bad E0 `{}` on row {}", fields[2], lineno + 2))
            })?;
            if !l_hat.is_finite() || !e0.is_finite() {
                return Err(Error::ParseCurve(format!(
                    "non-finite value on row {}",
                    lineno + 2
                )));
            }
            samples.push(CurveSample { n_basis, l_hat, e0 });
        }
        Self::from_samples(samples)
    }
}

/// Optimizes the box length at each requested basis size (at least 3,
/// all distinct) and interpolates the results. Uses
/// [`DEFAULT_LENGTH_BRACKET`]; see [`build_curve_in`] to control it.
pub fn build_curve<F>(n_values: &[usize], build: &F) -> Result<LhatCurve, Error>
where
    F: Fn(f64) -> Result<SeparablePotential, Error>,
{
    build_curve_in(n_values, build, DEFAULT_LENGTH_BRACKET)
}

/// [`build_curve`] with an explicit starting bracket for every sample.
pub fn build_curve_in<F>(
    n_values: &[usize],
    build: &F,
    bracket: (f64, f64),
) -> Result<LhatCurve, Error>
where
    F: Fn(f64) -> Result<SeparablePotential, Error>,
{
    let mut ns: Vec<usize> = n_values.to_vec();
    ns.sort_unstable();
    ns.dedup();
    if ns.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "curve needs at least 3 distinct basis sizes, got {:?}",
            n_values
        )));
    }
    let mut samples = Vec::with_capacity(ns.len());
    for &n in &ns {
        let (l_hat, e0) = find_optimal_length(n, build, bracket).map_err(|e| {
            Error::CurvePoint { n_basis: n, source: Box::new(e) }
        })?;
        samples.push(CurveSample { n_basis: n, l_hat, e0 });
    }
    LhatCurve::from_samples(samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_finds_a_parabola_minimum() {
        let (x, fx) = minimize_scalar(|x| Ok((x - 2.3) * (x - 2.3) + 1.0), 0.0, 5.0, 1e-4)
            .unwrap();
        assert!((x - 2.3).abs() < 1e-4);
        assert!((fx - 1.0).abs() < 1e-8);
    }

    #[test]
    fn golden_section_propagates_evaluation_errors() {
        let r = minimize_scalar(|_| Err(Error::ZeroReference), 0.0, 1.0, 1e-3);
        assert!(matches!(r, Err(Error::ZeroReference)));
    }

    #[test]
    fn free_box_has_no_interior_optimum() {
        // the free-particle ground energy decreases monotonically with L
        let build = |l: f64| SeparablePotential::zero(l, l);
        match find_optimal_length(4, &build, (1.0, 10.0)) {
            Err(Error::NoInteriorMinimum { lo, hi }) => {
                assert_eq!((lo, hi), (1.0, 10.0));
            }
            other => panic!("expected NoInteriorMinimum, got {other:?}"),
        }
    }

    #[test]
    fn harmonic_optimum_is_interior_and_beats_the_endpoints() {
        let build = |l: f64| SeparablePotential::harmonic(l, l);
        let (l_hat, e0) = find_optimal_length(6, &build, (3.0, 15.0)).unwrap();
        assert!(l_hat > 3.5 && l_hat < 14.0, "l_hat = {l_hat}");
        assert!((e0 - 2.0).abs() < 0.05, "e0 = {e0}");
        let at_lo = ground_energy(6, 3.0, &build).unwrap();
        let at_hi = ground_energy(6, 15.0, &build).unwrap();
        assert!(e0 < at_lo && e0 < at_hi);
    }

    #[test]
    fn excited_level_can_be_the_optimization_target() {
        let build = |l: f64| SeparablePotential::harmonic(l, l);
        let (l_hat, e1) = find_optimal_length_target(6, &build, (3.0, 15.0), 1).unwrap();
        assert!(l_hat > 3.5 && l_hat < 14.0);
        assert!((e1 - 4.0).abs() < 0.1, "e1 = {e1}");
        assert!(matches!(
            nth_energy(4, 6.0, &build, 16),
            Err(Error::StateOutOfRange { .. })
        ));
    }

    #[test]
    fn coordinate_descent_recovers_the_symmetric_optimum() {
        let build = |lx: f64, ly: f64| SeparablePotential::harmonic(lx, ly);
        let ((lx, ly), e0) = find_optimal_lengths(6, &build, (3.0, 15.0)).unwrap();
        assert!((lx - ly).abs() < 0.05, "({lx}, {ly})");
        assert!((e0 - 2.0).abs() < 0.05);
    }

    #[test]
    fn curve_reproduces_samples_and_grows_with_n() {
        let build = |l: f64| SeparablePotential::harmonic(l, l);
        let curve = build_curve_in(&[8, 6, 4], &build, (2.0, 15.0)).unwrap();
        let s = curve.samples();
        assert_eq!(
            s.iter().map(|c| c.n_basis).collect::<Vec<_>>(),
            vec![4, 6, 8]
        );
        assert!(s[0].l_hat < s[1].l_hat && s[1].l_hat < s[2].l_hat);
        for c in s {
            assert_eq!(curve.length_at(c.n_basis as f64), c.l_hat);
        }
        // interpolation stays between neighbors
        let mid = curve.length_at(5.0);
        assert!(s[0].l_hat < mid && mid < s[1].l_hat);
    }

    #[test]
    fn curve_requires_three_distinct_sizes() {
        let build = |l: f64| SeparablePotential::harmonic(l, l);
        assert!(matches!(
            build_curve(&[6, 6, 6], &build),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            build_curve(&[6, 8], &build),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn curve_table_round_trips_bitwise() {
        let samples = vec![
            CurveSample { n_basis: 6, l_hat: 6.963_251_187_7, e0: 2.000_314_159 },
            CurveSample { n_basis: 10, l_hat: 8.412_345_678_9, e0: 2.000_000_271 },
            CurveSample { n_basis: 14, l_hat: 9.876_543_210_1, e0: 2.000_000_001 },
        ];
        let curve = LhatCurve::from_samples(samples.clone()).unwrap();
        let text = curve.to_table();
        let back = LhatCurve::parse(&text).unwrap();
        assert_eq!(back.samples().len(), samples.len());
        for (a, b) in back.samples().iter().zip(&samples) {
            assert_eq!(a.n_basis, b.n_basis);
            assert_eq!(a.l_hat.to_bits(), b.l_hat.to_bits());
            assert_eq!(a.e0.to_bits(), b.e0.to_bits());
        }
    }

    #[test]
    fn curve_parser_rejects_malformed_tables() {
        for bad in [
            "",
            "6 7.0 2.0\n",
            "N L_hat\n6 7.0 2.0\n",
            "N L_hat E0\n6 7.0\n",
            "N L_hat E0\n6 7.0 2.0 9\n",
            "N L_hat E0\nsix 7.0 2.0\n",
            "N L_hat E0\n6 nan 2.0\n",
            "N L_hat E0\n6 inf 2.0\n",
            "N L_hat E0\n6 7.0 2.0\n",          // only one row
            "N L_hat E0\n6 7.0 2.0\n6 8.0 2.0\n6 9.0 2.0\n", // duplicate N
            "N L_hat E0\n0 7.0 2.0\n4 8.0 2.0\n",
            "N L_hat E0\n6 -7.0 2.0\n8 8.0 2.0\n",
        ] {
            assert!(LhatCurve::parse(bad).is_err(), "should reject {bad:?}");
        }
    }

    #[test]
    fn curve_extrapolates_linearly_past_the_samples() {
        let samples = vec![
            CurveSample { n_basis: 4, l_hat: 4.0, e0: 2.1 },
            CurveSample { n_basis: 6, l_hat: 5.0, e0: 2.01 },
            CurveSample { n_basis: 8, l_hat: 6.0, e0: 2.001 },
        ];
        let curve = LhatCurve::from_samples(samples).unwrap();
        // data is linear, so extrapolation continues the line
        assert!((curve.length_at(9.0) - 6.5).abs() < 1e-12);
        assert!((curve.length_at(3.0) - 3.5).abs() < 1e-12);
    }
}
