//! Separable polynomial potentials and their sine-basis matrix elements.
//!
//! A potential is stored in the shifted frame of the box: every factor is a
//! polynomial in `u = x - Lx/2` (or `v = y - Ly/2`), so the represented
//! function is `f(x,y) = sum_t c_t * p_t(x - Lx/2) * q_t(y - Ly/2)`. Keeping
//! the shift inside the representation means matrix elements can be written
//! down once, in the centered variable, and the checkerboard of exact zeros
//! forced by parity comes out for free.
//!
//! The 1D matrix elements
//!
//! ```text
//! I_k(m, m') = (2/L) * integral_0^L sin(m pi x / L) (x - L/2)^k sin(m' pi x / L) dx
//! ```
//!
//! are evaluated in closed form for monomial degrees k = 0..=4, which is what
//! makes 1e-11 end-to-end eigenvalue accuracy reachable in double precision.
//! Higher degrees fall back to Gauss-Legendre quadrature with node doubling.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

use crate::error::Error;

/// Maximum monomial degree the text parser accepts per axis. High powers are
/// numerically useless here (the quadrature fallback still handles them, but
/// the potential itself overflows the dynamic range of f64 long before that).
pub const MAX_PARSED_DEGREE: usize = 16;

/// Dense polynomial in one (already shifted) variable; `coeffs[k]`
/// multiplies `u^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Self { coeffs: vec![c] }
    }

    /// The monomial `u^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = 1.0;
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|&c| c != 0.0)
            .unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, u: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * u + c)
    }

    fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }
}

/// One separable term `coeff * poly_x(x - Lx/2) * poly_y(y - Ly/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub poly_x: Poly,
    pub poly_y: Poly,
}

/// A sum of separable polynomial terms tied to a concrete box `(Lx, Ly)`.
///
/// The domain is part of the value because the shift `u = x - Lx/2` is; a
/// potential built for one box must not be assembled against another.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparablePotential {
    terms: Vec<Term>,
    length_x: f64,
    length_y: f64,
}

impl SeparablePotential {
    pub fn new(terms: Vec<Term>, length_x: f64, length_y: f64) -> Result<Self, Error> {
        if !(length_x.is_finite() && length_x > 0.0 && length_y.is_finite() && length_y > 0.0) {
            return Err(Error::InvalidPotential(format!(
                "box lengths must be positive and finite, got ({length_x}, {length_y})"
            )));
        }
        for t in &terms {
            if !t.coeff.is_finite() || !t.poly_x.is_finite() || !t.poly_y.is_finite() {
                return Err(Error::InvalidPotential(
                    "non-finite coefficient in potential term".into(),
                ));
            }
        }
        Ok(Self { terms, length_x, length_y })
    }

    /// The free box: `f = 0`.
    pub fn zero(length_x: f64, length_y: f64) -> Result<Self, Error> {
        Self::new(Vec::new(), length_x, length_y)
    }

    /// Isotropic harmonic well `(x - Lx/2)^2 + (y - Ly/2)^2`.
    pub fn harmonic(length_x: f64, length_y: f64) -> Result<Self, Error> {
        Self::new(
            vec![
                Term { coeff: 1.0, poly_x: Poly::monomial(2), poly_y: Poly::monomial(0) },
                Term { coeff: 1.0, poly_x: Poly::monomial(0), poly_y: Poly::monomial(2) },
            ],
            length_x,
            length_y,
        )
    }

    /// The 2D-QCD well `alpha * (x - Lx/2)^2 * (y - Ly/2)^2`: confining, but
    /// flat along both axes, and not exactly solvable.
    pub fn quartic_cross(alpha: f64, length_x: f64, length_y: f64) -> Result<Self, Error> {
        Self::new(
            vec![Term { coeff: alpha, poly_x: Poly::monomial(2), poly_y: Poly::monomial(2) }],
            length_x,
            length_y,
        )
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.length_x, self.length_y)
    }

    /// Same terms, restamped onto another box. This is what a length
    /// optimizer wants: the centered polynomial form is length independent.
    pub fn with_domain(&self, length_x: f64, length_y: f64) -> Result<Self, Error> {
        Self::new(self.terms.clone(), length_x, length_y)
    }

    /// Value of the potential at a point, with the shift applied.
    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        let u = x - 0.5 * self.length_x;
        let v = y - 0.5 * self.length_y;
        self.terms
            .iter()
            .map(|t| t.coeff * t.poly_x.eval(u) * t.poly_y.eval(v))
            .sum()
    }

    /// Parses the text form of a potential: either a builtin name (`sho`,
    /// `qcd`, `none`) or a sum of terms like
    ///
    /// ```text
    /// 2.5 * (x)^2 * (y)^2 - 0.5 * (x)^4
    /// ```
    ///
    /// where `x` and `y` stand for the shifted coordinates. Exponents are
    /// nonnegative integers up to [`MAX_PARSED_DEGREE`].
    pub fn parse(text: &str, length_x: f64, length_y: f64) -> Result<Self, Error> {
        match text.trim() {
            "sho" => return Self::harmonic(length_x, length_y),
            "qcd" => return Self::quartic_cross(1.0, length_x, length_y),
            "none" => return Self::zero(length_x, length_y),
            _ => {}
        }
        let terms = parse_terms(text)?;
        Self::new(terms, length_x, length_y)
    }
}

/// Conversion of a physical problem into the dimensionless form the solver
/// works in. The energy scale is the factor that multiplies a dimensionless
/// eigenvalue to give back a physical energy.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalProblem {
    /// Reduced mass, in whatever unit system the potential uses.
    pub mass: f64,
    pub hbar: f64,
    pub form: PhysicalForm,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PhysicalForm {
    /// `U = (1/2) m omega^2 (x^2 + y^2)`. Converted with the natural length
    /// `sqrt(hbar / (m omega))`, which turns the well into `u^2 + v^2` and
    /// the eigenvalues into `2(n_x + n_y + 1)`.
    Harmonic { omega: f64 },
    /// An arbitrary separable polynomial `U` in energy units, centered
    /// coordinates, same length unit as the box it will be solved on.
    Polynomial { terms: Vec<Term> },
}

/// Reduces a physical problem to a dimensionless potential on the given box
/// plus the scale converting dimensionless eigenvalues back to energies
/// (`hbar omega / 2` for the harmonic form, `hbar^2 / (2 m)` otherwise).
pub fn to_dimensionless(
    problem: &PhysicalProblem,
    length_x: f64,
    length_y: f64,
) -> Result<(SeparablePotential, f64), Error> {
    if !(problem.mass > 0.0 && problem.mass.is_finite()) {
        return Err(Error::InvalidPotential("mass must be positive".into()));
    }
    if !(problem.hbar > 0.0 && problem.hbar.is_finite()) {
        return Err(Error::InvalidPotential("hbar must be positive".into()));
    }
    match &problem.form {
        PhysicalForm::Harmonic { omega } => {
            if !(*omega > 0.0 && omega.is_finite()) {
                return Err(Error::InvalidPotential("omega must be positive".into()));
            }
            let potential = SeparablePotential::harmonic(length_x, length_y)?;
            Ok((potential, 0.5 * problem.hbar * omega))
        }
        PhysicalForm::Polynomial { terms } => {
            let factor = 2.0 * problem.mass / (problem.hbar * problem.hbar);
            let scaled = terms
                .iter()
                .map(|t| Term {
                    coeff: factor * t.coeff,
                    poly_x: t.poly_x.clone(),
                    poly_y: t.poly_y.clone(),
                })
                .collect();
            let potential = SeparablePotential::new(scaled, length_x, length_y)?;
            Ok((potential, 1.0 / factor))
        }
    }
}

/// Matrix of a single 1D polynomial factor in the sine basis:
/// `matrix[m][m'] = (2/L) * integral sin(m pi x/L) p(x - L/2) sin(m' pi x/L) dx`.
#[derive(Debug, Clone)]
pub struct OneDimCoupling {
    n_basis: usize,
    axis_length: f64,
    values: Vec<f64>,
}

impl OneDimCoupling {
    pub fn n_basis(&self) -> usize {
        self.n_basis
    }

    pub fn axis_length(&self) -> f64 {
        self.axis_length
    }

    /// Entry for basis indices `m, m'` (1-based, as in the expansion).
    pub fn entry(&self, m: usize, mp: usize) -> f64 {
        assert!(
            (1..=self.n_basis).contains(&m) && (1..=self.n_basis).contains(&mp),
            "basis indices ({m}, {mp}) out of range 1..={}",
            self.n_basis
        );
        self.values[(m - 1) * self.n_basis + (mp - 1)]
    }
}

/// `(1/L) * integral_0^L cos(r pi x / L) (x - L/2)^k dx` for k = 0..=4.
///
/// Every matrix element is a difference of two of these. The parity
/// selection rule is visible directly: even k vanishes for odd r and
/// vice versa, so even polynomials produce exact zeros whenever m + m'
/// is odd.
fn cosine_moment(k: usize, r: usize, l: f64) -> f64 {
    let rf = r as f64;
    let pi2 = PI * PI;
    match k {
        0 => {
            if r == 0 {
                1.0
            } else {
                0.0
            }
        }
        1 => {
            if r % 2 == 1 {
                -2.0 * l / (pi2 * rf * rf)
            } else {
                0.0
            }
        }
        2 => {
            if r == 0 {
                l * l / 12.0
            } else if r % 2 == 0 {
                2.0 * l * l / (pi2 * rf * rf)
            } else {
                0.0
            }
        }
        3 => {
            if r % 2 == 1 {
                let l3 = l * l * l;
                -1.5 * l3 / (pi2 * rf * rf) + 12.0 * l3 / (pi2 * pi2 * rf.powi(4))
            } else {
                0.0
            }
        }
        4 => {
            let l4 = l.powi(4);
            if r == 0 {
                l4 / 80.0
            } else if r % 2 == 0 {
                l4 / (pi2 * rf * rf) - 24.0 * l4 / (pi2 * pi2 * rf.powi(4))
            } else {
                0.0
            }
        }
        _ => unreachable!("analytic moments only cover degrees 0..=4"),
    }
}

/// Closed-form `I_k(m, m')` for a single monomial of degree k <= 4.
fn monomial_element(k: usize, m: usize, mp: usize, l: f64) -> f64 {
    cosine_moment(k, m.abs_diff(mp), l) - cosine_moment(k, m + mp, l)
}

/// Builds the 1D coupling matrix for polynomial `p` on `n_basis` sine modes
/// of a box of length `length`. Degrees up to 4 use the closed forms above;
/// anything higher is integrated by Gauss-Legendre quadrature, doubling the
/// node count until two successive rules agree.
pub fn coupling_1d(p: &Poly, n_basis: usize, length: f64) -> Result<OneDimCoupling, Error> {
    if n_basis == 0 {
        return Err(Error::InvalidInput("basis size must be at least 1".into()));
    }
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::InvalidInput(format!(
            "axis length must be positive and finite, got {length}"
        )));
    }
    if !p.is_finite() {
        return Err(Error::InvalidPotential(
            "non-finite polynomial coefficient".into(),
        ));
    }

    let analytic = p.degree() <= 4;
    let mut values = vec![0.0; n_basis * n_basis];
    for m in 1..=n_basis {
        for mp in m..=n_basis {
            let v = if analytic {
                p.coeffs()
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0.0)
                    .map(|(k, &c)| c * monomial_element(k, m, mp, length))
                    .sum()
            } else {
                quadrature_element(p, m, mp, length)?
            };
            if !v.is_finite() {
                return Err(Error::InvalidPotential(format!(
                    "matrix element ({m}, {mp}) is not finite"
                )));
            }
            values[(m - 1) * n_basis + (mp - 1)] = v;
            values[(mp - 1) * n_basis + (m - 1)] = v;
        }
    }
    Ok(OneDimCoupling { n_basis, axis_length: length, values })
}

/// Gauss-Legendre fallback for one element. The integrand is a polynomial
/// times a product of sines, so the rule converges spectrally; doubling
/// until two answers agree makes the node choice self-validating. The
/// agreement threshold scales with the polynomial's magnitude on the box,
/// since elements near zero (parity cancellation) still carry the roundoff
/// of the large quantities that cancelled.
fn quadrature_element(p: &Poly, m: usize, mp: usize, l: f64) -> Result<f64, Error> {
    let integrand = |x: f64| {
        (m as f64 * PI * x / l).sin() * p.eval(x - 0.5 * l) * (mp as f64 * PI * x / l).sin()
    };
    let scale: f64 = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| c.abs() * (0.5 * l).powi(k as i32))
        .sum::<f64>()
        .max(1.0);
    let mut nodes = (m + mp + p.degree() + 10).next_power_of_two();
    let mut prev = (2.0 / l) * gl_rule(nodes).integrate(0.0, l, integrand);
    for _ in 0..12 {
        nodes *= 2;
        let cur = (2.0 / l) * gl_rule(nodes).integrate(0.0, l, integrand);
        if (cur - prev).abs() <= 1e-14 * scale {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::InvalidPotential(format!(
        "quadrature for element ({m}, {mp}) did not stabilize"
    )))
}

fn gl_rule(nodes: usize) -> GaussLegendre {
    GaussLegendre::new(NonZeroUsize::new(nodes).expect("node count is positive"))
}

/// One separable contribution to the 2D coupling tensor:
/// `coeff * cx[m][m'] * cy[n][n']`. Never materialized as an
/// `N^2 x N^2` object; the operator assembly streams over it.
#[derive(Debug, Clone, Copy)]
pub struct Coupling2d<'a> {
    coeff: f64,
    cx: &'a OneDimCoupling,
    cy: &'a OneDimCoupling,
}

/// Glues two per-axis matrices into a 2D contribution, checking that they
/// were built for the same basis size.
pub fn combine_2d<'a>(
    cx: &'a OneDimCoupling,
    cy: &'a OneDimCoupling,
    coeff: f64,
) -> Result<Coupling2d<'a>, Error> {
    if cx.n_basis != cy.n_basis {
        return Err(Error::InvalidInput(format!(
            "axis couplings have mismatched sizes {} and {}",
            cx.n_basis, cy.n_basis
        )));
    }
    Ok(Coupling2d { coeff, cx, cy })
}

impl Coupling2d<'_> {
    /// `C` contribution for basis pairs `(m, n) -> (m', n')`, 1-based.
    pub fn entry(&self, m: usize, mp: usize, n: usize, np: usize) -> f64 {
        self.coeff * self.cx.entry(m, mp) * self.cy.entry(n, np)
    }

    pub fn n_basis(&self) -> usize {
        self.cx.n_basis
    }
}

// ---- text format -----------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
enum Tok {
    Num(f64),
    VarX,
    VarY,
    Caret,
    Star,
    Plus,
    Minus,
}

fn lex(text: &str) -> Result<Vec<Tok>, Error> {
    let mut toks = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            'x' => {
                toks.push(Tok::VarX);
                i += 1;
            }
            'y' => {
                toks.push(Tok::VarY);
                i += 1;
            }
            '+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                toks.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                toks.push(Tok::Star);
                i += 1;
            }
            '^' => {
                toks.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                // only (x) and (y) are valid parenthesized atoms
                let rest = &text[i + 1..];
                let inner: String = rest.chars().take_while(|&ch| ch != ')').collect();
                if inner.len() >= rest.len() {
                    return Err(Error::ParsePotential(format!(
                        "unclosed parenthesis at byte {i}"
                    )));
                }
                match inner.trim() {
                    "x" => toks.push(Tok::VarX),
                    "y" => toks.push(Tok::VarY),
                    other => {
                        return Err(Error::ParsePotential(format!(
                            "expected (x) or (y), found ({other})"
                        )))
                    }
                }
                i += 1 + inner.len() + 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && matches!(bytes[i] as char, '0'..='9' | '.') {
                    i += 1;
                }
                if i < bytes.len() && matches!(bytes[i] as char, 'e' | 'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && matches!(bytes[j] as char, '+' | '-') {
                        j += 1;
                    }
                    if j < bytes.len() && (bytes[j] as char).is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let tok = &text[start..i];
                let v: f64 = tok.parse().map_err(|_| {
                    Error::ParsePotential(format!("bad number `{tok}` at byte {start}"))
                })?;
                if !v.is_finite() {
                    return Err(Error::ParsePotential(format!(
                        "number `{tok}` overflows f64"
                    )));
                }
                toks.push(Tok::Num(v));
            }
            other => {
                return Err(Error::ParsePotential(format!(
                    "unexpected character `{other}` at byte {i}"
                )))
            }
        }
    }
    Ok(toks)
}

fn parse_terms(text: &str) -> Result<Vec<Term>, Error> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(Error::ParsePotential("empty potential expression".into()));
    }
    let mut terms = Vec::new();
    let mut pos = 0;
    loop {
        let mut sign = 1.0;
        match toks.get(pos) {
            Some(Tok::Plus) => pos += 1,
            Some(Tok::Minus) => {
                sign = -1.0;
                pos += 1;
            }
            _ => {}
        }
        let (term, next) = parse_term(&toks, pos, sign)?;
        terms.push(term);
        pos = next;
        match toks.get(pos) {
            None => break,
            Some(Tok::Plus) | Some(Tok::Minus) => continue, // sign handled next round
            Some(t) => {
                return Err(Error::ParsePotential(format!(
                    "expected + or - between terms, found {t:?}"
                )))
            }
        }
    }
    Ok(terms)
}

fn parse_term(toks: &[Tok], mut pos: usize, sign: f64) -> Result<(Term, usize), Error> {
    let mut coeff = sign;
    let mut xpow = 0usize;
    let mut ypow = 0usize;
    let mut nfactors = 0usize;
    loop {
        match toks.get(pos) {
            Some(Tok::Num(v)) => {
                coeff *= v;
                pos += 1;
            }
            Some(Tok::VarX) | Some(Tok::VarY) => {
                let is_x = toks[pos] == Tok::VarX;
                pos += 1;
                let mut power = 1usize;
                if toks.get(pos) == Some(&Tok::Caret) {
                    pos += 1;
                    match toks.get(pos) {
                        Some(Tok::Num(v)) if v.fract() == 0.0 && *v >= 0.0 => {
                            power = *v as usize;
                            pos += 1;
                        }
                        _ => {
                            return Err(Error::ParsePotential(
                                "exponent must be a nonnegative integer".into(),
                            ))
                        }
                    }
                }
                if is_x {
                    xpow += power;
                } else {
                    ypow += power;
                }
                if xpow > MAX_PARSED_DEGREE || ypow > MAX_PARSED_DEGREE {
                    return Err(Error::ParsePotential(format!(
                        "exponent exceeds the supported maximum of {MAX_PARSED_DEGREE}"
                    )));
                }
            }
            other => {
                return Err(Error::ParsePotential(format!(
                    "expected a factor, found {other:?}"
                )))
            }
        }
        nfactors += 1;
        if toks.get(pos) == Some(&Tok::Star) {
            pos += 1;
            continue;
        }
        break;
    }
    if nfactors == 0 {
        return Err(Error::ParsePotential("empty term".into()));
    }
    if !coeff.is_finite() {
        return Err(Error::ParsePotential("term coefficient overflows f64".into()));
    }
    Ok((
        Term {
            coeff,
            poly_x: Poly::monomial(xpow),
            poly_y: Poly::monomial(ypow),
        },
        pos,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn degree_zero_is_orthonormality() {
        let c = coupling_1d(&Poly::constant(1.0), 6, 3.7).unwrap();
        for m in 1..=6 {
            for mp in 1..=6 {
                let want = if m == mp { 1.0 } else { 0.0 };
                assert_eq!(c.entry(m, mp), want, "entry ({m}, {mp})");
            }
        }
    }

    #[test]
    fn quadratic_diagonal_matches_closed_form() {
        // (2/L) int sin^2(pi x/L) (x - L/2)^2 dx = L^2/12 - L^2/(2 pi^2)
        let c = coupling_1d(&Poly::monomial(2), 4, 1.0).unwrap();
        let want = 1.0 / 12.0 - 1.0 / (2.0 * PI * PI);
        assert!((c.entry(1, 1) - want).abs() < 1e-16);

        // same element scales as L^2
        let c2 = coupling_1d(&Poly::monomial(2), 4, 2.0).unwrap();
        assert!((c2.entry(1, 1) - 4.0 * want).abs() < 1e-15);

        // off-diagonal even-even entry, L = 2: I_2(1,3) = g(2) - g(4) = 3/(2 pi^2)
        let want13 = 3.0 / (2.0 * PI * PI);
        assert!((c2.entry(1, 3) - want13).abs() < 1e-15);
    }

    #[test]
    fn parity_zeros_are_exact() {
        let even = coupling_1d(&Poly::new(vec![0.5, 0.0, 1.0, 0.0, 2.0]), 8, 5.0).unwrap();
        let odd = coupling_1d(&Poly::new(vec![0.0, 1.5, 0.0, -0.25]), 8, 5.0).unwrap();
        for m in 1..=8 {
            for mp in 1..=8 {
                if (m + mp) % 2 == 1 {
                    assert_eq!(even.entry(m, mp), 0.0);
                } else {
                    assert_eq!(odd.entry(m, mp), 0.0);
                }
            }
        }
    }

    #[test]
    fn coupling_matrix_is_symmetric_bitwise() {
        let p = Poly::new(vec![0.3, -1.0, 0.7, 0.2, 0.05]);
        let c = coupling_1d(&p, 10, 7.3).unwrap();
        for m in 1..=10 {
            for mp in 1..=10 {
                assert_eq!(c.entry(m, mp).to_bits(), c.entry(mp, m).to_bits());
            }
        }
    }

    #[test]
    fn quadrature_fallback_agrees_with_analytic_forms() {
        // force the quadrature path with a padded degree-5 representation
        // whose quintic coefficient is tiny but nonzero, then compare the
        // quartic content against the closed forms
        for &(k, l) in &[(1usize, 1.0f64), (2, 3.0), (3, 2.5), (4, 11.97)] {
            let mut coeffs = vec![0.0; 6];
            coeffs[k] = 1.0;
            coeffs[5] = 0.0; // keep degree 5 slot explicit but empty
            let p = Poly::new(coeffs);
            assert_eq!(p.degree(), k);
            for (m, mp) in [(1, 1), (1, 2), (2, 5), (4, 7), (7, 7)] {
                let direct = quadrature_element(&p, m, mp, l).unwrap();
                let exact = monomial_element(k, m, mp, l);
                let tol = 1e-12 * exact.abs().max((0.5 * l).powi(k as i32) * 1e-3).max(1.0);
                assert!(
                    (direct - exact).abs() < tol,
                    "degree {k}, element ({m}, {mp}), L = {l}: {direct} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn sixth_degree_uses_quadrature_and_stays_symmetric() {
        let c = coupling_1d(&Poly::monomial(6), 5, 2.0).unwrap();
        for m in 1..=5 {
            for mp in 1..=5 {
                assert_eq!(c.entry(m, mp), c.entry(mp, m));
                if (m + mp) % 2 == 1 {
                    assert!(c.entry(m, mp).abs() < 1e-15, "parity zero ({m}, {mp})");
                }
            }
        }
        // diagonal element against the sixth-moment closed form,
        // I_6(m, m) = G_6(0) - G_6(2m) with
        // G_6(0) = L^6/448 and, for even r > 0,
        // G_6(r) = L^6 (3/(8 pi^2 r^2) - 30/(pi^4 r^4) + 720/(pi^6 r^6))
        let l: f64 = 2.0;
        let r = 2.0f64;
        let pi2 = PI * PI;
        let g0 = l.powi(6) / 448.0;
        let g2m = l.powi(6)
            * (3.0 / (8.0 * pi2 * r * r) - 30.0 / (pi2 * pi2 * r.powi(4))
                + 720.0 / (pi2 * pi2 * pi2 * r.powi(6)));
        assert!((c.entry(1, 1) - (g0 - g2m)).abs() < 1e-14);
    }

    #[test]
    fn combine_2d_checks_dimensions() {
        let a = coupling_1d(&Poly::monomial(2), 4, 2.0).unwrap();
        let b = coupling_1d(&Poly::monomial(2), 5, 2.0).unwrap();
        assert!(combine_2d(&a, &b, 1.0).is_err());
        let ok = combine_2d(&a, &a, 2.0).unwrap();
        assert_eq!(ok.entry(1, 3, 1, 1), 2.0 * a.entry(1, 3) * a.entry(1, 1));
    }

    #[test]
    fn harmonic_well_evaluates_from_the_center() {
        let p = SeparablePotential::harmonic(10.0, 10.0).unwrap();
        assert_eq!(p.evaluate(5.0, 5.0), 0.0);
        assert!((p.evaluate(6.0, 5.0) - 1.0).abs() < 1e-15);
        assert!((p.evaluate(6.0, 7.0) - 5.0).abs() < 1e-15);
    }

    #[test]
    fn dimensionless_harmonic_scale_is_half_hbar_omega() {
        let problem = PhysicalProblem {
            mass: 1.0,
            hbar: 1.0,
            form: PhysicalForm::Harmonic { omega: 1.0 },
        };
        let (p, scale) = to_dimensionless(&problem, 8.0, 8.0).unwrap();
        assert_eq!(scale, 0.5);
        assert_eq!(p, SeparablePotential::harmonic(8.0, 8.0).unwrap());
    }

    #[test]
    fn dimensionless_polynomial_rescales_by_two_m_over_hbar_sq() {
        let problem = PhysicalProblem {
            mass: 0.5,
            hbar: 1.0,
            form: PhysicalForm::Polynomial {
                terms: vec![Term {
                    coeff: 1.0,
                    poly_x: Poly::monomial(2),
                    poly_y: Poly::monomial(2),
                }],
            },
        };
        let (p, scale) = to_dimensionless(&problem, 15.53, 15.53).unwrap();
        assert_eq!(scale, 1.0);
        assert_eq!(p, SeparablePotential::quartic_cross(1.0, 15.53, 15.53).unwrap());
    }

    #[test]
    fn parses_builtins_and_term_lists() {
        let sho = SeparablePotential::parse("sho", 4.0, 4.0).unwrap();
        assert_eq!(sho, SeparablePotential::harmonic(4.0, 4.0).unwrap());

        let qcd = SeparablePotential::parse(" qcd ", 4.0, 4.0).unwrap();
        assert_eq!(qcd, SeparablePotential::quartic_cross(1.0, 4.0, 4.0).unwrap());

        let none = SeparablePotential::parse("none", 4.0, 4.0).unwrap();
        assert!(none.terms().is_empty());

        let p = SeparablePotential::parse("(x)^2 + (y)^2", 4.0, 4.0).unwrap();
        assert_eq!(p, SeparablePotential::harmonic(4.0, 4.0).unwrap());

        let q = SeparablePotential::parse("2.5 * (x)^2 * (y)^2 - 0.5 * (x)", 4.0, 4.0).unwrap();
        assert_eq!(q.terms().len(), 2);
        assert_eq!(q.terms()[0].coeff, 2.5);
        assert_eq!(q.terms()[1].coeff, -0.5);
        assert_eq!(q.terms()[1].poly_x, Poly::monomial(1));
        assert_eq!(q.terms()[1].poly_y, Poly::monomial(0));

        // exponent notation and implicit power 1
        let r = SeparablePotential::parse("1e-3 * (x) * (y)^3", 4.0, 4.0).unwrap();
        assert_eq!(r.terms()[0].coeff, 1e-3);
        assert_eq!(r.terms()[0].poly_x, Poly::monomial(1));
        assert_eq!(r.terms()[0].poly_y, Poly::monomial(3));

        // repeated factors accumulate exponents
        let s = SeparablePotential::parse("(x)^2 * (x)", 4.0, 4.0).unwrap();
        assert_eq!(s.terms()[0].poly_x, Poly::monomial(3));

        // bare variables are synonyms for the parenthesized forms
        let t = SeparablePotential::parse("x^2 + y^2", 4.0, 4.0).unwrap();
        assert_eq!(t, SeparablePotential::harmonic(4.0, 4.0).unwrap());
    }

    #[test]
    fn rejects_malformed_potentials() {
        for bad in [
            "",
            "   ",
            "splat",
            "(z)^2",
            "(x",
            "(x)^",
            "(x)^-1",
            "(x)^1.5",
            "(x)^99",
            "1 + ",
            "2 ** (x)",
            "1e999",
            "(x)^2 (y)^2",
            "1 & 2",
        ] {
            assert!(
                SeparablePotential::parse(bad, 4.0, 4.0).is_err(),
                "should reject {bad:?}"
            );
        }
    }

    #[test]
    fn rejects_non_finite_input() {
        assert!(SeparablePotential::zero(f64::NAN, 1.0).is_err());
        assert!(SeparablePotential::zero(0.0, 1.0).is_err());
        assert!(SeparablePotential::new(
            vec![Term {
                coeff: f64::INFINITY,
                poly_x: Poly::monomial(0),
                poly_y: Poly::monomial(0),
            }],
            1.0,
            1.0
        )
        .is_err());
    }

    proptest! {
        #[test]
        fn parser_never_panics(text in ".{0,80}") {
            let _ = SeparablePotential::parse(&text, 1.0, 1.0);
        }

        #[test]
        fn parser_round_trips_rendered_terms(
            coeffs in proptest::collection::vec(-100.0f64..100.0, 1..5),
            xpows in proptest::collection::vec(0usize..6, 1..5),
            ypows in proptest::collection::vec(0usize..6, 1..5),
        ) {
            let n = coeffs.len().min(xpows.len()).min(ypows.len());
            let text = (0..n)
                .map(|i| format!("{:+e} * (x)^{} * (y)^{}", coeffs[i], xpows[i], ypows[i]))
                .collect::<Vec<_>>()
                .join(" ");
            let p = SeparablePotential::parse(&text, 2.0, 2.0).unwrap();
            prop_assert_eq!(p.terms().len(), n);
            for i in 0..n {
                prop_assert_eq!(p.terms()[i].coeff, coeffs[i]);
                prop_assert_eq!(p.terms()[i].poly_x.degree(), xpows[i]);
                prop_assert_eq!(p.terms()[i].poly_y.degree(), ypows[i]);
            }
        }

        // closed forms vs a second, dumber integration route
        #[test]
        fn analytic_elements_match_quadrature(
            k in 0usize..=4,
            m in 1usize..=12,
            mp in 1usize..=12,
            l in 1.0f64..20.0,
        ) {
            let mut coeffs = vec![0.0; 7];
            coeffs[k] = 1.0;
            let padded = Poly::new(coeffs); // degree <= 4 content, quadrature sees it raw
            let via_quad = quadrature_element(&padded, m, mp, l).unwrap();
            let exact = monomial_element(k, m, mp, l);
            let tol = 1e-12 * exact.abs().max((0.5 * l).powi(k as i32) * 1e-3).max(1.0);
            prop_assert!(
                (via_quad - exact).abs() < tol,
                "k={} m={} mp={} l={}: {} vs {}", k, m, mp, l, via_quad, exact
            );
        }
    }
}
