//! Acceptance criteria 1–11, one pass/fail line each.
//!
//! `cargo test -p adpt-core --test acceptance` runs all of them; numeric
//! arguments after `--` select a subset, e.g. `-- 6 7`.

use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::Instant;

use adpt_core::experiments::{
    adiabatic_sweep, bmt, bo_crosscheck, dirac_crosscheck, egorov_scaling, moyal_algebra, projector_defect,
    time_adiabatic, unitary_defect, BmtParams, BoParams, Check, DiracCheckParams, EgorovParams, ExpansionParams,
    Report, SweepParams, TimeAdiabaticParams,
};
use adpt_core::Result;

/// Leakage, effective-dynamics and operator-level criteria share one set of
/// quantized operators per ε.
fn sweep() -> &'static Result<Report> {
    static SWEEP: OnceLock<Result<Report>> = OnceLock::new();
    SWEEP.get_or_init(|| adiabatic_sweep(&SweepParams::default()))
}

fn pick(report: &Result<Report>, names: &[&str]) -> Result<Vec<Check>> {
    match report {
        Ok(r) => Ok(names
            .iter()
            .map(|n| r.check(n).cloned().unwrap_or_else(|| panic!("report has no check {n:?}")))
            .collect()),
        Err(e) => Err(adpt_core::AdptError::Invalid(e.to_string())),
    }
}

fn all(report: Result<Report>) -> Result<Vec<Check>> {
    report.map(|r| r.checks)
}

fn criterion(id: u32) -> (&'static str, Result<Vec<Check>>) {
    match id {
        1 => ("Moyal algebra", all(moyal_algebra(11, 50))),
        2 => ("projector construction", all(projector_defect(&ExpansionParams::default()))),
        3 => (
            "unitary construction",
            unitary_defect(&ExpansionParams::default()).map(|r| {
                let keep = ["u*u - 1", "uu* - 1", "u pi u* - pi_r", "u1 printed closed form"];
                r.checks.into_iter().filter(|c| keep.contains(&c.name.as_str())).collect()
            }),
        ),
        4 => ("Dirac cross-check", all(dirac_crosscheck(&DiracCheckParams::default()))),
        5 => ("Born-Oppenheimer cross-check", all(bo_crosscheck(&BoParams::default()))),
        6 => (
            "leakage scaling",
            pick(sweep(), &["leakage N=0 microscopic", "leakage N=1 microscopic", "leakage N=1 macroscopic"]),
        ),
        7 => ("effective dynamics", pick(sweep(), &["effective dynamics"])),
        8 => ("Egorov scaling", all(egorov_scaling(&EgorovParams::default()))),
        9 => ("BMT", all(bmt(&BmtParams::default()))),
        10 => ("time-adiabatic", all(time_adiabatic(&TimeAdiabaticParams::default()))),
        11 => (
            "operator level",
            pick(sweep(), &["Pi idempotency", "U Pi U* - Pi_r", "Pi - pi_hat", "U - u_hat", "U unitarity", "Pi rank - n"]),
        ),
        _ => unreachable!(),
    }
}

fn summary(c: &Check) -> String {
    match c.target {
        Some(t) => format!("{} slope {:.3} (target {t} ± {})", c.name, c.value, c.tol),
        None => format!("{} {:.2e} (tol {:.0e})", c.name, c.value, c.tol),
    }
}

fn main() -> ExitCode {
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let ids: Vec<u32> = (1..=11).filter(|i| selected.is_empty() || selected.contains(i)).collect();
    let mut failed = 0;
    for id in ids {
        let start = Instant::now();
        let (title, outcome) = criterion(id);
        let secs = start.elapsed().as_secs_f64();
        let line = match &outcome {
            Ok(checks) => {
                let ok = checks.iter().all(|c| c.pass);
                let tag = if ok { "PASS" } else { "FAIL" };
                let detail: Vec<String> =
                    checks.iter().map(|c| if c.pass { summary(c) } else { format!("[failed] {}", summary(c)) }).collect();
                if !ok {
                    failed += 1;
                }
                format!("criterion {id:>2} {tag} {title} ({secs:.1}s): {}", detail.join("; "))
            }
            Err(e) => {
                failed += 1;
                format!("criterion {id:>2} FAIL {title} ({secs:.1}s): error: {e}")
            }
        };
        println!("{line}");
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
