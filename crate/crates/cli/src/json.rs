//! File formats: operator and inverse-problem inputs, eigenvalue-family and
//! solution-set outputs. Complex numbers are always 2-element [re, im]
//! arrays.

use crate::CliError;
use pjacobi::cpoly::{CPoly, RootSet};
use pjacobi::operator::JacobiOperator;
use pjacobi::spectral::{EigenvalueFamily, FamilyKind};
use pjacobi::{c64, C64};
use serde::{Deserialize, Serialize};
use std::path::Path;

pub type CJson = [f64; 2];

pub fn to_c64(v: CJson) -> C64 {
    c64(v[0], v[1])
}

pub fn from_c64(z: C64) -> CJson {
    [z.re, if z.im == 0.0 { 0.0 } else { z.im }]
}

#[derive(Debug, Deserialize, Serialize)]
pub struct OperatorFile {
    #[serde(rename = "N")]
    pub n: usize,
    pub a: Vec<CJson>,
    pub b: Vec<CJson>,
}

pub fn load_operator(path: &Path) -> Result<JacobiOperator, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    let file: OperatorFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("bad operator file {}: {e}", path.display())))?;
    if file.a.len() != file.n || file.b.len() != file.n {
        return Err(CliError::Validation(format!(
            "operator file {}: N = {} but |a| = {}, |b| = {}",
            path.display(),
            file.n,
            file.a.len(),
            file.b.len()
        )));
    }
    JacobiOperator::new(
        file.a.into_iter().map(to_c64).collect(),
        file.b.into_iter().map(to_c64).collect(),
    )
    .map_err(|e| CliError::Validation(e.to_string()))
}

#[derive(Debug, Deserialize, Serialize)]
pub struct ProblemFile {
    #[serde(rename = "N")]
    pub n: usize,
    /// Target discriminant coefficients, ascending, length N+1.
    pub target: Vec<CJson>,
}

pub fn load_problem(path: &Path) -> Result<(usize, CPoly), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    let file: ProblemFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("bad problem file {}: {e}", path.display())))?;
    if file.target.len() != file.n + 1 {
        return Err(CliError::Validation(format!(
            "problem file {}: N = {} needs {} ascending coefficients, got {}",
            path.display(),
            file.n,
            file.n + 1,
            file.target.len()
        )));
    }
    Ok((
        file.n,
        CPoly::from_coeffs(file.target.into_iter().map(to_c64).collect()),
    ))
}

#[derive(Debug, Deserialize, Serialize)]
pub struct SpectraFile {
    /// Roots of the shorter Dirichlet polynomial (N-1 values, repeats for
    /// multiplicity).
    pub dirichlet_n: Vec<CJson>,
    /// Roots of the longer one (N values).
    pub dirichlet_n1: Vec<CJson>,
}

pub fn load_spectra(path: &Path) -> Result<(RootSet, RootSet), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    let file: SpectraFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("bad spectra file {}: {e}", path.display())))?;
    let to_set = |v: Vec<CJson>| RootSet {
        roots: v.into_iter().map(|z| (to_c64(z), 1)).collect(),
        residual: 0.0,
    };
    Ok((to_set(file.dirichlet_n), to_set(file.dirichlet_n1)))
}

#[derive(Debug, Serialize)]
pub struct EigenvalueJson {
    pub re: f64,
    pub im: f64,
    pub mult: usize,
}

#[derive(Debug, Serialize)]
pub struct FamilyJson {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    pub values: Vec<EigenvalueJson>,
}

pub fn family_json(fam: &EigenvalueFamily) -> FamilyJson {
    let (kind, kappa) = match fam.kind {
        FamilyKind::Periodic => ("periodic".to_string(), None),
        FamilyKind::Antiperiodic => ("antiperiodic".to_string(), None),
        FamilyKind::Dirichlet => ("dirichlet".to_string(), None),
        FamilyKind::Floquet(k) => ("floquet".to_string(), Some(k)),
    };
    FamilyJson {
        kind,
        kappa,
        values: fam
            .values
            .roots
            .iter()
            .map(|&(z, m)| EigenvalueJson {
                re: z.re,
                im: if z.im == 0.0 { 0.0 } else { z.im },
                mult: m,
            })
            .collect(),
    }
}

#[derive(Debug, Serialize)]
pub struct SolutionsJson {
    pub solutions: Vec<Vec<CJson>>,
    pub residuals: Vec<f64>,
    pub complete: bool,
}

pub fn write_output(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", p.display()))),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

pub fn to_pretty(value: &impl Serialize) -> String {
    serde_json::to_string_pretty(value).expect("serialization cannot fail")
}
