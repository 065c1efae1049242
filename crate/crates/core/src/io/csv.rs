use std::fmt::Write as _;

use crate::diagnostics::DiagnosticsRecord;
use crate::verification::ConvergenceReport;

pub const DIAGNOSTICS_HEADER: &str =
    "step,time,l2,h1,h2,linf,mass,l2_bound_rhs,l2_bound_ok,skew_residual,solver_iters";

pub const CONVERGENCE_HEADER: &str = "resolution,error,fitted_order";

fn real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn diagnostics_row(r: &DiagnosticsRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        r.step,
        real(r.time),
        real(r.norms.l2),
        real(r.norms.h1_semi),
        real(r.norms.h2_semi),
        real(r.norms.sup),
        real(r.mass),
        r.l2_bound_rhs.map(real).unwrap_or_default(),
        r.l2_bound_ok.map(|b| b.to_string()).unwrap_or_default(),
        real(r.skew_residual),
        r.solver_iterations,
    )
}

pub fn diagnostics_csv(records: &[DiagnosticsRecord]) -> String {
    let mut s = String::from(DIAGNOSTICS_HEADER);
    s.push('\n');
    for r in records {
        s.push_str(&diagnostics_row(r));
        s.push('\n');
    }
    s
}

pub fn convergence_csv(report: &ConvergenceReport) -> String {
    let mut s = String::from(CONVERGENCE_HEADER);
    s.push('\n');
    let order = report.fitted_order.map(real).unwrap_or_default();
    for l in &report.levels {
        let _ = writeln!(s, "{},{},{}", real(l.resolution), real(l.error), order);
    }
    s
}
