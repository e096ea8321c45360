//! Single-state analysis: parse, validate, run every criterion, report.

use std::fmt::Write as _;

use qsep_core::criteria::{self, CriterionReport, Tolerances};
use qsep_core::io::StateFile;

/// Exit code when no test certifies entanglement.
pub const EXIT_SEPARABLE_OR_INCONCLUSIVE: i32 = 0;
/// Exit code for unreadable or invalid input.
pub const EXIT_INPUT_ERROR: i32 = 1;
/// Exit code when at least one test certifies entanglement.
pub const EXIT_ENTANGLED: i32 = 2;

/// Parses and validates a state file, then runs every criterion at `tol`.
pub fn analyze_text(text: &str, tol: f64) -> qsep_core::Result<(StateFile, CriterionReport)> {
    let file = StateFile::parse(text)?;
    let rho = file.to_density(tol)?;
    let report = criteria::analyze(&rho, Tolerances::uniform(tol));
    Ok((file, report))
}

pub fn exit_code(report: &CriterionReport) -> i32 {
    if report.entanglement_detected() {
        EXIT_ENTANGLED
    } else {
        EXIT_SEPARABLE_OR_INCONCLUSIVE
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Human-readable report.
pub fn render(file: &StateFile, report: &CriterionReport) -> String {
    let mut out = String::new();
    let [d1, d2] = report.dims;
    let _ = writeln!(out, "dims            {d1} x {d2}");
    if let Some(family) = &file.family {
        let _ = writeln!(out, "family          {family}");
    }
    let _ = writeln!(out, "purity          {:.12}", report.purity);
    let _ = writeln!(out, "pure            {}", yes_no(report.pure));
    match report.pure_product {
        Some(p) => {
            let _ = writeln!(out, "pure product    {}", yes_no(p));
        }
        None => {
            let _ = writeln!(out, "pure product    n/a (mixed state)");
        }
    }
    let _ = writeln!(out, "ppt min eig 1   {:.12}", report.ppt_min_eig_1);
    let _ = writeln!(out, "ppt min eig 2   {:.12}", report.ppt_min_eig_2);
    let _ = writeln!(out, "npt             {}", yes_no(report.ppt_npt));
    match (report.cond_lhs, report.cond_rhs, report.cond_violated) {
        (Some(lhs), Some(rhs), Some(v)) => {
            let _ = writeln!(out, "inequality lhs  {lhs:.12}");
            let _ = writeln!(out, "inequality rhs  {rhs:.12}");
            let _ = writeln!(out, "violated        {}", yes_no(v));
        }
        _ => {
            let _ = writeln!(out, "inequality      n/a (needs d1 == d2)");
        }
    }
    let verdict = if report.entanglement_detected() {
        "entangled"
    } else {
        "separable or inconclusive"
    };
    let _ = writeln!(out, "verdict         {verdict}");
    out
}

/// The state-file container with the report attached.
pub fn render_json(file: &StateFile, report: &CriterionReport) -> String {
    file.clone().with_report(report.clone()).to_json()
}
