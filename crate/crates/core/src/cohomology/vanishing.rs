use std::fmt;

use crate::divisor::{divisor_polytope, is_basepoint_free, TDivisor};
use crate::fan::Fan;
use crate::lattice_linalg::IntVector;

use super::{cohomology, CohomologyTable};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(String),
    NotApplicable(String),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail(_) => "fail",
            Verdict::NotApplicable(_) => "not-applicable",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::Fail(why) => write!(f, "fail: {why}"),
            Verdict::NotApplicable(why) => write!(f, "not-applicable: {why}"),
        }
    }
}

fn bpf_or_reason(fan: &Fan, d: &TDivisor) -> Option<String> {
    if !fan.is_complete() {
        return Some("fan is not complete".into());
    }
    match is_basepoint_free(fan, d) {
        Ok(true) => None,
        Ok(false) => Some(format!("{d} is not basepoint free")),
        Err(e) => Some(e.to_string()),
    }
}

/// For basepoint-free `D`: `H^i(X, O(D)) = 0` for all `i > 0`.
pub fn demazure_vanishing_check(fan: &Fan, d: &TDivisor) -> Verdict {
    if let Some(why) = bpf_or_reason(fan, d) {
        return Verdict::NotApplicable(why);
    }
    match cohomology(fan, d, false) {
        Err(e) => Verdict::NotApplicable(e.to_string()),
        Ok(t) => match t.dims.iter().find(|(&i, &dim)| i > 0 && dim > 0) {
            Some((i, dim)) => Verdict::Fail(format!("H^{i} has dimension {dim}")),
            None => Verdict::Pass,
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BbReport {
    pub verdict: Verdict,
    /// `dim P_D`, or `-1` when not computed.
    pub polytope_dim: isize,
    /// `Relint(P_D) ∩ M`.
    pub interior_points: Vec<IntVector>,
    /// Cohomology of `O(-D)`, graded.
    pub table: Option<CohomologyTable>,
    /// Predicted degrees `-m` of a basis of `H^{dim P_D}(X, O(-D))`.
    pub basis_degrees: Vec<IntVector>,
}

/// For basepoint-free `D`: `H^i(X, O(-D))` vanishes for `i != dim P_D` and
/// has basis `χ^{-m}`, `m ∈ Relint(P_D) ∩ M`, in degree `dim P_D`.
pub fn batyrev_borisov_check(fan: &Fan, d: &TDivisor) -> BbReport {
    let not_applicable = |why: String| BbReport {
        verdict: Verdict::NotApplicable(why),
        polytope_dim: -1,
        interior_points: Vec::new(),
        table: None,
        basis_degrees: Vec::new(),
    };
    if let Some(why) = bpf_or_reason(fan, d) {
        return not_applicable(why);
    }
    let polytope = match divisor_polytope(fan, d) {
        Ok(p) => p,
        Err(e) => return not_applicable(e.to_string()),
    };
    let table = match cohomology(fan, &d.neg(), true) {
        Ok(t) => t,
        Err(e) => return not_applicable(e.to_string()),
    };
    let top = polytope.dim();
    let interior = polytope.lattice_points(true);
    let basis_degrees: Vec<IntVector> = {
        let mut v: Vec<IntVector> = interior.iter().map(IntVector::neg).collect();
        v.sort();
        v
    };

    let mut problems = Vec::new();
    for (&i, &dim) in &table.dims {
        if i as isize == top {
            if dim != interior.len() as u64 {
                problems.push(format!("H^{i} has dimension {dim}, expected {}", interior.len()));
            }
        } else if dim != 0 {
            problems.push(format!("H^{i} has dimension {dim}, expected 0"));
        }
    }
    if top >= 0 && problems.is_empty() {
        let found: Vec<(IntVector, u64)> =
            table.graded.as_ref().and_then(|g| g.get(&(top as usize)).cloned()).unwrap_or_default();
        let expected: Vec<(IntVector, u64)> = basis_degrees.iter().map(|m| (m.clone(), 1)).collect();
        if found != expected {
            problems.push(format!("graded pieces of H^{top} do not match -Relint(P_D)"));
        }
    }
    BbReport {
        verdict: if problems.is_empty() { Verdict::Pass } else { Verdict::Fail(problems.join("; ")) },
        polytope_dim: top,
        interior_points: interior,
        table: Some(table),
        basis_degrees,
    }
}
