//! Oracles guarding the crossing convention of the diagram builder.

use std::fmt;

use thiserror::Error;

use crate::diagram::{build_diagram_with, involution_check, Convention, DiagramConfig};
use crate::generators::{canned, torus_divide, TorusParams, CANNED_NAMES};
use crate::invariants::{conway_skein, jones_kauffman, writhe_and_linking, LaurentPolynomial, Variable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.passed() { "ok  " } else { "FAIL" };
        write!(f, "{mark} {}: expected {}, got {}", self.name, self.expected, self.actual)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("calibration drift: {} of {} checks failed", .failed.len(), .total)]
pub struct CalibrationDrift {
    pub failed: Vec<Check>,
    pub total: usize,
}

/// `t + t^3 - t^4`, the right-handed trefoil.
pub fn right_trefoil_jones() -> LaurentPolynomial {
    LaurentPolynomial::from_terms(Variable::SqrtT, [(2, 1), (6, 1), (8, -1)])
}

fn check(name: &str, expected: impl ToString, actual: impl ToString) -> Check {
    Check { name: name.to_string(), expected: expected.to_string(), actual: actual.to_string() }
}

/// Hopf linking number, Hopf Conway polynomial and trefoil chirality under
/// `convention`.
pub fn calibration_checks(convention: Convention) -> Vec<Check> {
    let config = DiagramConfig { convention, ..DiagramConfig::default() };
    let mut out = Vec::new();
    let hopf = canned("cross").ok().and_then(|d| build_diagram_with(&d, &config).ok());
    match hopf {
        Some(d) => {
            let (_, link) = writhe_and_linking(&d);
            let lk = if link.size() == 2 { link.get(0, 1).to_string() } else { format!("{} components", link.size()) };
            out.push(check("hopf linking number", 1, lk));
            let nabla = conway_skein(&d).map(|p| p.to_string()).unwrap_or_else(|e| e.to_string());
            out.push(check("hopf conway", "z", nabla));
        }
        None => out.push(check("hopf diagram", "built", "failed")),
    }
    let trefoil = torus_divide(TorusParams::new(2, 3), 0).ok().and_then(|d| build_diagram_with(&d, &config).ok());
    let jones = match trefoil {
        Some(d) => jones_kauffman(&d, 20).map(|p| p.to_string()).unwrap_or_else(|e| e.to_string()),
        None => "no diagram".to_string(),
    };
    out.push(check("trefoil jones", right_trefoil_jones(), jones));
    out
}

/// Calibration under `convention` plus the reflection symmetry of every
/// canned divide.
pub fn selftest(convention: Convention) -> Vec<Check> {
    let mut out = calibration_checks(convention);
    let config = DiagramConfig { convention, ..DiagramConfig::default() };
    for name in CANNED_NAMES {
        let actual = match canned(name).map(|d| build_diagram_with(&d, &config)) {
            Ok(Ok(d)) => involution_check(&d).to_string(),
            Ok(Err(e)) => e.to_string(),
            Err(e) => e.to_string(),
        };
        out.push(check(&format!("involution {name}"), true, actual));
    }
    out
}

pub fn verify(checks: Vec<Check>) -> Result<Vec<Check>, CalibrationDrift> {
    let total = checks.len();
    let failed: Vec<Check> = checks.iter().filter(|c| !c.passed()).cloned().collect();
    if failed.is_empty() {
        Ok(checks)
    } else {
        Err(CalibrationDrift { failed, total })
    }
}
