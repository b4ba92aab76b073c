//! The four subcommands. Each one maps CLI arguments onto library calls
//! and renders the result into the documented output format.

use std::path::Path;
use std::time::Instant;

use serde_json::{json, Value};

use sinebox::basis::{assemble, BasisSpec};
use sinebox::diagnostics::{self, cluster_degeneracies, ShoReference, DEGENERACY_TOL};
use sinebox::eigen::{self, EigenSolution};
use sinebox::optimize::{build_curve_in, LhatCurve, DEFAULT_LENGTH_BRACKET};
use sinebox::potential::SeparablePotential;

use crate::output;
use crate::{parse_bracket, parse_n_values, AppError};
use crate::{ConvergenceArgs, GridArgs, OptimizeArgs, SolveArgs};

/// Basis sizes sampled when a curve has to be built without the user
/// providing one.
const DEFAULT_CURVE_SIZES: [usize; 5] = [6, 10, 14, 18, 22];

/// A potential parsed once; restamped onto each box length the run needs.
struct PotentialSpec {
    text: String,
    template: SeparablePotential,
}

impl PotentialSpec {
    fn new(text: &str) -> Result<Self, AppError> {
        let template = SeparablePotential::parse(text, 1.0, 1.0)?;
        Ok(Self { text: text.to_string(), template })
    }

    fn on(&self, lx: f64, ly: f64) -> Result<SeparablePotential, sinebox::Error> {
        self.template.with_domain(lx, ly)
    }

    /// Only the builtin oscillator gets exact-reference diagnostics.
    fn is_sho(&self) -> bool {
        self.text.trim() == "sho"
    }
}

/// How the box length was chosen, echoed into the results document.
fn resolve_length(
    spec: &PotentialSpec,
    n_basis: usize,
    length: Option<f64>,
    auto: bool,
    curve_file: Option<&Path>,
    no_auto_curve: bool,
) -> Result<(f64, &'static str, Option<LhatCurve>), AppError> {
    if let Some(l) = length {
        if !(l.is_finite() && l > 0.0) {
            return Err(AppError::Usage(format!(
                "--length must be positive and finite, got {l}"
            )));
        }
        return Ok((l, "explicit", None));
    }
    if !auto {
        return Err(AppError::Usage("pass --length <L> or --auto".into()));
    }
    let (curve, source) = match curve_file {
        Some(path) if path.exists() => {
            let text = std::fs::read_to_string(path)?;
            (LhatCurve::parse(&text)?, "curve-file")
        }
        _ if no_auto_curve => {
            return Err(AppError::Usage(
                "--auto needs an existing --curve-file when --no-auto-curve is set".into(),
            ));
        }
        other => {
            let curve = build_curve_in(
                &DEFAULT_CURVE_SIZES,
                &|l| spec.on(l, l),
                DEFAULT_LENGTH_BRACKET,
            )?;
            if let Some(path) = other {
                std::fs::write(path, curve.to_table())?;
            }
            (curve, "auto-curve")
        }
    };
    let l = curve.length_at(n_basis as f64);
    Ok((l, source, Some(curve)))
}

fn full_solve(spec: &PotentialSpec, n_basis: usize, length: f64) -> Result<EigenSolution, AppError> {
    let basis = BasisSpec::square(n_basis, length)?;
    let op = assemble(&basis, &spec.on(length, length)?)?;
    Ok(eigen::solve(&op)?)
}

/// Exact oscillator energy for a sorted state index: level `s = n_x + n_y`
/// holds `s + 1` states at energy `2 (s + 1)`.
fn sho_exact_energy(state: usize) -> f64 {
    let mut s = 0usize;
    let mut upto = 1usize;
    while state >= upto {
        s += 1;
        upto += s + 1;
    }
    2.0 * (s + 1) as f64
}

pub fn solve(args: SolveArgs) -> Result<(), AppError> {
    let started = Instant::now();
    if args.n_basis < 2 {
        return Err(AppError::Usage("--n-basis must be at least 2".into()));
    }
    let n_states_total = args.n_basis * args.n_basis;
    if args.states == 0 || args.states > n_states_total {
        return Err(AppError::Usage(format!(
            "--states must be between 1 and N^2 = {n_states_total}"
        )));
    }
    if args.grid < 2 {
        return Err(AppError::Usage("--grid must be at least 2".into()));
    }
    let spec = PotentialSpec::new(&args.potential)?;
    let (length, source, curve) = resolve_length(
        &spec,
        args.n_basis,
        args.length,
        args.auto,
        args.curve_file.as_deref(),
        args.no_auto_curve,
    )?;

    let sol = full_solve(&spec, args.n_basis, length)?;
    let clusters = cluster_degeneracies(sol.energies(), DEGENERACY_TOL);

    // optional second solve for the self-estimated energy drift
    let finer = if args.precision_report {
        let next_length = match &curve {
            Some(c) => c.length_at((args.n_basis + 1) as f64),
            None => length,
        };
        Some(full_solve(&spec, args.n_basis + 1, next_length)?)
    } else {
        None
    };

    let mut states = Vec::with_capacity(args.states);
    for k in 0..args.states {
        let cluster = clusters
            .iter()
            .find(|c| c.contains(&k))
            .expect("clusters cover every state");
        let delta_e = if spec.is_sho() {
            Some(diagnostics::delta_e(sol.energy(k), sho_exact_energy(k))?)
        } else {
            None
        };
        let (delta_hat, overlap) = match &finer {
            Some(fine) => {
                let d = diagnostics::delta_hat_e(&sol, fine, k)?;
                if d.overlap < 0.5 {
                    eprintln!(
                        "warning: state {k} overlaps its N+1 partner by only {:.3}; \
                         the spectra may have reordered and the drift may pair \
                         different states",
                        d.overlap
                    );
                }
                (Some(d.value), Some(d.overlap))
            }
            None => (None, None),
        };
        let delta_psi = if spec.is_sho() && cluster.len() == 1 && k == 0 {
            Some(diagnostics::delta_psi(
                &sol,
                k,
                &ShoReference::new(0, 0),
                args.grid,
            )?)
        } else {
            None
        };
        states.push(json!({
            "state": k,
            "energy": sol.energy(k),
            "cluster_size": cluster.len(),
            "delta_e": delta_e,
            "delta_hat_e": delta_hat,
            "overlap": overlap,
            "delta_psi": delta_psi,
        }));
    }

    let doc = json!({
        "config": {
            "potential": spec.text,
            "n_basis": args.n_basis,
            "length": length,
            "length_source": source,
            "states": args.states,
            "grid": args.grid,
            "precision_report": args.precision_report,
            "curve_file": args.curve_file.as_ref().map(|p| p.display().to_string()),
        },
        "energies": Value::from(sol.energies()[..args.states].to_vec()),
        "states": Value::from(states),
        "timing_seconds": started.elapsed().as_secs_f64(),
    });
    output::write_text(args.out.as_deref(), &output::render_json(&doc))?;
    Ok(())
}

pub fn optimize(args: OptimizeArgs) -> Result<(), AppError> {
    let ns = parse_n_values(&args.n_values)?;
    let bracket = parse_bracket(args.bracket.as_deref())?;
    let spec = PotentialSpec::new(&args.potential)?;
    let curve = build_curve_in(&ns, &|l| spec.on(l, l), bracket)?;
    output::write_text(args.out.as_deref(), &curve.to_table())?;
    Ok(())
}

pub fn convergence(args: ConvergenceArgs) -> Result<(), AppError> {
    let ns = parse_n_values(&args.n_values)?;
    let bracket = parse_bracket(args.bracket.as_deref())?;
    let spec = PotentialSpec::new(&args.potential)?;
    let build = |l: f64| spec.on(l, l);

    let curve = match args.curve_file.as_deref() {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            LhatCurve::parse(&text)?
        }
        None => {
            let mut distinct = ns.clone();
            distinct.sort_unstable();
            distinct.dedup();
            if distinct.len() < 3 {
                return Err(AppError::Usage(
                    "need --curve-file or at least 3 distinct basis sizes to \
                     locate the optimal lengths"
                        .into(),
                ));
            }
            build_curve_in(&distinct, &build, bracket)?
        }
    };

    let mut out = String::new();
    if spec.is_sho() {
        out.push_str("N delta_E\n");
        let study = diagnostics::convergence_study(&ns, &curve, 2.0, &build)?;
        for (n, d) in study {
            out.push_str(&format!("{n} {d:.16e}\n"));
        }
    } else {
        // no exact reference: report the drift against the next basis size
        out.push_str("N delta_hat_E\n");
        for &n in &ns {
            let sol = full_solve(&spec, n, curve.length_at(n as f64))?;
            let fine = full_solve(&spec, n + 1, curve.length_at((n + 1) as f64))?;
            let d = diagnostics::delta_hat_e(&sol, &fine, 0)?;
            if d.overlap < 0.5 {
                eprintln!(
                    "warning: ground states of N={n} and N={} overlap by only {:.3}",
                    n + 1,
                    d.overlap
                );
            }
            out.push_str(&format!("{n} {:.16e}\n", d.value));
        }
    }
    output::write_text(args.out.as_deref(), &out)?;
    Ok(())
}

pub fn grid(args: GridArgs) -> Result<(), AppError> {
    if args.n_basis < 2 {
        return Err(AppError::Usage("--n-basis must be at least 2".into()));
    }
    if args.grid < 2 {
        return Err(AppError::Usage("--grid must be at least 2".into()));
    }
    let spec = PotentialSpec::new(&args.potential)?;
    let (length, _, _) = resolve_length(
        &spec,
        args.n_basis,
        args.length,
        args.auto,
        args.curve_file.as_deref(),
        args.no_auto_curve,
    )?;
    let sol = full_solve(&spec, args.n_basis, length)?;
    let values = sol.wavefunction_grid(args.state, args.grid)?;
    let text = output::render_grid(args.grid, length, length, &values);
    output::write_text(args.out.as_deref(), &text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oscillator_exact_energies_by_sorted_index() {
        let want = [2.0, 4.0, 4.0, 6.0, 6.0, 6.0, 8.0, 8.0, 8.0, 8.0, 10.0];
        for (k, w) in want.iter().enumerate() {
            assert_eq!(sho_exact_energy(k), *w, "state {k}");
        }
        // the 21st state closes the sixth level
        assert_eq!(sho_exact_energy(20), 12.0);
        assert_eq!(sho_exact_energy(21), 14.0);
    }
}
