//! Helpers shared by the integration suites. The quadrature here is an
//! independent oracle: plain adaptive Simpson, nothing in common with the
//! closed forms or the Gauss-Legendre fallback inside the library.

#![allow(dead_code)]

use std::f64::consts::PI;

/// Adaptive Simpson with Richardson correction. `tol` is absolute.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        // second condition: delta is pure roundoff, refining cannot help
        if depth == 0
            || delta.abs() <= 15.0 * tol
            || delta.abs() <= 1e-15 * (left.abs() + right.abs())
        {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    recurse(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 25)
}

/// `(2/L) * integral_0^L sin(m pi x / L) p(x - L/2) sin(m' pi x / L) dx`
/// by adaptive Simpson, pre-split into panels finer than the fastest
/// oscillation and summed with compensation.
pub fn sine_element_oracle(coeffs: &[f64], m: usize, mp: usize, l: f64) -> f64 {
    let poly = |u: f64| {
        coeffs
            .iter()
            .rev()
            .fold(0.0, |acc: f64, c| acc.mul_add(u, *c))
    };
    let f = move |x: f64| {
        (m as f64 * PI * x / l).sin() * poly(x - 0.5 * l) * (mp as f64 * PI * x / l).sin()
    };
    // Per-panel tolerance must stay above the roundoff floor of a panel
    // integral (~1e-16 times its magnitude), or the recursion can never
    // meet it and subdivides to the depth cap. Panel magnitudes here are
    // O(1), so 1e-15 terminates quickly; the Richardson-corrected panel
    // results are far more accurate than the tolerance, and compensated
    // summation keeps the 1e-12 target comfortable.
    let panels = 2 * (m + mp) + 8;
    let tol = 1e-15;
    let mut sum = 0.0;
    let mut carry = 0.0;
    for i in 0..panels {
        let a = l * i as f64 / panels as f64;
        let b = l * (i + 1) as f64 / panels as f64;
        let term = adaptive_simpson(&f, a, b, tol) - carry;
        let next = sum + term;
        carry = (next - sum) - term;
        sum = next;
    }
    2.0 / l * sum
}

/// Least-squares line through (xs, ys): returns (slope, intercept, r^2).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = sxy * sxy / (sxx * syy);
    (slope, my - slope * mx, r2)
}

/// Exact 2D oscillator energies in ascending order: level `s` holds
/// `s + 1` states at energy `2 (s + 1)`.
pub fn oscillator_exact_levels(count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    let mut s = 0usize;
    while out.len() < count {
        for _ in 0..=s {
            out.push(2.0 * (s + 1) as f64);
            if out.len() == count {
                break;
            }
        }
        s += 1;
    }
    out
}
