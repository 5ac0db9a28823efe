//! One function per subcommand.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use quasifree::fock::agreement_suite;
use quasifree::halfplane::{
    fidelity_from_distance, geodesic_distance, pure_state_to_point, u_function,
};
use quasifree::linalg::max_abs_diff;
use quasifree::purification::{
    entanglement_measure, purify as purify_state, reduce_purification, Factor,
};
use quasifree::symplectic::{bdi_decompose, williamson};
use quasifree::transition::{
    gaussian_overlap, overlap_quadrature, purity_defect, transition_probability, PURITY_TOL,
};
use quasifree::{QuadratureSpec, QuasifreeState};
use serde_json::json;

use crate::document::{load_path, rows, LoadedState, StateDocument};
use crate::error::CliError;
use crate::scan::{ScanRange, Template};
use crate::{FactorArg, Outcome};

/// Rounds to 12 significant digits and prints the shortest form, switching
/// to exponent notation outside `[1e-4, 1e12)`.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    let mag = rounded.abs();
    if rounded != 0.0 && !(1e-4..1e12).contains(&mag) {
        format!("{rounded:e}")
    } else {
        rounded.to_string()
    }
}

fn list(values: &[f64]) -> String {
    let items: Vec<String> = values.iter().map(|&x| sig12(x)).collect();
    format!("[{}]", items.join(", "))
}

fn standard(path: &Path, tol: f64) -> Result<QuasifreeState, CliError> {
    load_path(path, tol)?.into_standard()
}

fn is_pure(state: &QuasifreeState) -> bool {
    purity_defect(state) <= PURITY_TOL
}

pub fn validate(path: &Path, tol: f64) -> Result<Outcome, CliError> {
    let doc = StateDocument::read(path)?;
    match doc.load(tol) {
        Ok(LoadedState::Standard(state)) => {
            let d = state.symplectic_eigenvalues();
            let verdict = if is_pure(&state) { "pure" } else { "mixed" };
            let mut text = format!("valid: {verdict}, d={}\n", list(&d));
            let _ = writeln!(text, "modes: {}", state.modes());
            let _ = writeln!(text, "purity_residual: {}", sig12(state.purity_residual()));
            Ok(Outcome::ok(text))
        }
        Ok(LoadedState::Doubled(state)) => {
            let text = format!(
                "valid: pure doubled state, modes={} (+{} fictitious)\npurity_residual: {}\n",
                state.modes(),
                state.modes(),
                sig12(state.purity_residual())
            );
            Ok(Outcome::ok(text))
        }
        Err(CliError::Domain(reason)) => Ok(Outcome {
            text: format!("invalid: {reason}\n"),
            failed: true,
        }),
        Err(e) => Err(e),
    }
}

pub fn fidelity(
    a: &Path,
    b: &Path,
    quadrature: bool,
    overlap: bool,
    tol: f64,
) -> Result<Outcome, CliError> {
    let s1 = standard(a, tol)?;
    let s2 = standard(b, tol)?;
    if s1.modes() != s2.modes() {
        return Err(CliError::Domain(format!(
            "states have {} and {} modes",
            s1.modes(),
            s2.modes()
        )));
    }
    let mut text = String::new();
    let closed = if is_pure(&s1) || is_pure(&s2) {
        let p = transition_probability(&s1, &s2, PURITY_TOL)?;
        let _ = writeln!(text, "transition_probability: {}", sig12(p));
        p
    } else if overlap {
        let p = gaussian_overlap(s1.covariance(), s1.mean(), s2.covariance(), s2.mean())?;
        let _ = writeln!(text, "overlap: {}", sig12(p));
        let _ = writeln!(text, "note: both states are mixed; this is the Gaussian overlap, not the transition probability");
        p
    } else {
        return Err(CliError::Domain(format!(
            "{}; pass --overlap for the Gaussian overlap integral",
            quasifree::Error::RequiresPureState
        )));
    };
    if quadrature {
        let spec = QuadratureSpec {
            tol,
            ..QuadratureSpec::default()
        };
        let q = overlap_quadrature(&s1, &s2, &spec)?;
        let _ = writeln!(text, "quadrature: {}", sig12(q.value));
        let _ = writeln!(
            text,
            "quadrature_error_estimate: {}",
            sig12(q.error_estimate)
        );
        let _ = writeln!(text, "discrepancy: {}", sig12((q.value - closed).abs()));
    }
    Ok(Outcome::ok(text))
}

pub fn purify(path: &Path, tol: f64) -> Result<Outcome, CliError> {
    let state = standard(path, tol)?;
    let doubled = purify_state(&state)?;
    Ok(Outcome::ok(StateDocument::from_doubled(&doubled).to_json()))
}

pub fn entanglement(path: &Path, tol: f64) -> Result<Outcome, CliError> {
    let state = standard(path, tol)?;
    Ok(Outcome::ok(format!(
        "entanglement: {}\n",
        sig12(entanglement_measure(&state)?)
    )))
}

pub fn reduce(
    path: &Path,
    keep: &[usize],
    factor: Option<FactorArg>,
    tol: f64,
) -> Result<Outcome, CliError> {
    let reduced = match load_path(path, tol)? {
        LoadedState::Doubled(d) => {
            if !keep.is_empty() {
                return Err(CliError::Parse(
                    "doubled documents take --factor, not --keep".into(),
                ));
            }
            let which = match factor.unwrap_or(FactorArg::First) {
                FactorArg::First => Factor::First,
                FactorArg::Second => Factor::Second,
            };
            reduce_purification(&d, which)?
        }
        LoadedState::Standard(s) => {
            if factor.is_some() {
                return Err(CliError::Parse(
                    "--factor applies to doubled documents only".into(),
                ));
            }
            if keep.is_empty() {
                return Err(CliError::Parse("--keep is required".into()));
            }
            s.reduce(keep)?
        }
    };
    Ok(Outcome::ok(StateDocument::from_state(&reduced).to_json()))
}

pub fn decompose(path: &Path, tol: f64) -> Result<Outcome, CliError> {
    let state = standard(path, tol)?;
    let a = state.covariance();
    let w = williamson(a, tol)?;
    let bdi = bdi_decompose(&w.s, tol)?;
    let doc = json!({
        "symplectic_eigenvalues": w.d,
        "williamson": {
            "s": rows(&w.s),
            "d": w.d,
            "residual": max_abs_diff(&w.recompose(), a),
        },
        "bdi": {
            "o": rows(&bdi.o),
            "m": bdi.m,
            "oprime": rows(&bdi.oprime),
            "residual": max_abs_diff(&bdi.recompose(), &w.s),
        },
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("json values serialize");
    text.push('\n');
    Ok(Outcome::ok(text))
}

pub fn halfplane(a: &Path, b: Option<&Path>, tol: f64) -> Result<Outcome, CliError> {
    let s1 = standard(a, tol)?;
    let z1 = pure_state_to_point(&s1)?;
    let mut text = format!("z: {} + {}i\n", sig12(z1.x), sig12(z1.y));
    if let Some(b) = b {
        let s2 = standard(b, tol)?;
        let z2 = pure_state_to_point(&s2)?;
        let s = geodesic_distance(z1, z2);
        let _ = writeln!(text, "z2: {} + {}i", sig12(z2.x), sig12(z2.y));
        let _ = writeln!(text, "u: {}", sig12(u_function(z1, z2)));
        let _ = writeln!(text, "geodesic_distance: {}", sig12(s));
        let _ = writeln!(
            text,
            "fidelity_from_distance: {}",
            sig12(fidelity_from_distance(s)?)
        );
        if s1.is_centered() && s2.is_centered() {
            let p = transition_probability(&s1, &s2, PURITY_TOL)?;
            let _ = writeln!(text, "transition_probability: {}", sig12(p));
        }
    }
    Ok(Outcome::ok(text))
}

fn csv_text(header: &[&str], records: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(fail)?;
    for r in records {
        w.write_record(r).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn cell(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn oracle_check() -> Result<Outcome, CliError> {
    let rows = agreement_suite();
    let records: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.check.clone(),
                r.cutoff.to_string(),
                cell(r.oracle),
                r.closed_form.to_string(),
                cell(r.deviation()),
                r.tol.to_string(),
                if r.passed() { "pass" } else { "fail" }.to_string(),
                r.note.clone(),
            ]
        })
        .collect();
    let text = csv_text(
        &[
            "check",
            "cutoff",
            "oracle",
            "closed_form",
            "deviation",
            "tol",
            "status",
            "note",
        ],
        &records,
    )?;
    Ok(Outcome {
        text,
        failed: rows.iter().any(|r| !r.passed()),
    })
}

pub fn scan(
    template: &Path,
    param: &str,
    range: &str,
    against: Option<&Path>,
    tol: f64,
) -> Result<Outcome, CliError> {
    let text = fs::read_to_string(template)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", template.display())))?;
    let template = Template::parse(&text)?;
    let range = ScanRange::parse(range)?;
    let reference = against.map(|p| standard(p, tol)).transpose()?;
    let mut records = Vec::new();
    for value in range.values() {
        let at = |e: CliError| match e {
            CliError::Domain(m) => CliError::Domain(format!("{param} = {value}: {m}")),
            other => other,
        };
        let state = template
            .instantiate(param, value)
            .and_then(|d| d.load(tol))
            .map_err(at)?;
        let state = state.into_standard().map_err(at)?;
        let reference = match &reference {
            Some(r) => r.clone(),
            None => QuasifreeState::vacuum(state.dim()),
        };
        if reference.modes() != state.modes() {
            return Err(CliError::Domain(format!(
                "reference has {} modes, template {}",
                reference.modes(),
                state.modes()
            )));
        }
        let fidelity = if is_pure(&state) || is_pure(&reference) {
            Some(transition_probability(&state, &reference, PURITY_TOL).map_err(|e| at(e.into()))?)
        } else {
            None
        };
        let entanglement = if state.is_centered() {
            Some(entanglement_measure(&state).map_err(|e| at(e.into()))?)
        } else {
            None
        };
        let distance = if state.modes() == 1 && is_pure(&state) && is_pure(&reference) {
            let z1 = pure_state_to_point(&state).map_err(|e| at(e.into()))?;
            let z2 = pure_state_to_point(&reference).map_err(|e| at(e.into()))?;
            Some(geodesic_distance(z1, z2))
        } else {
            None
        };
        records.push(vec![
            value.to_string(),
            cell(fidelity),
            cell(entanglement),
            cell(distance),
        ]);
    }
    let text = csv_text(
        &["param", "fidelity", "entanglement", "geodesic_distance"],
        &records,
    )?;
    Ok(Outcome::ok(text))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(sig12(1.0 / 7.0), "0.142857142857");
        assert_eq!(sig12(1.0), "1");
        assert_eq!(sig12(0.5), "0.5");
        assert_eq!(sig12(1.0 / 1.0_f64.cosh()), "0.648054273664");
        assert_eq!(sig12(f64::NAN), "NaN");
        assert_eq!(sig12(2.8398370521e-14), "2.8398370521e-14");
        assert_eq!(sig12(-3.0e15), "-3e15");
        assert_eq!(sig12(0.0), "0");
    }
}
