use std::time::Instant;

use fracfvt_core::acceptance::{run_suite, Group, SuiteOptions};
use fracfvt_core::report::Report;

use crate::config::VerifyConfig;
use crate::output::write_report;
use crate::{CliError, Verdict, VerifyArgs};

pub fn run(args: VerifyArgs, cfg: &VerifyConfig) -> Result<Verdict, CliError> {
    let only = args
        .only
        .or_else(|| cfg.only.clone())
        .unwrap_or_default()
        .iter()
        .map(|g| g.parse::<Group>().map_err(CliError::Usage))
        .collect::<Result<Vec<_>, _>>()?;
    let tol_scale = args.tol_scale.or(cfg.tol_scale).unwrap_or(1.0);
    if !(tol_scale > 0.0 && tol_scale.is_finite()) {
        return Err(CliError::Usage(format!("--tol-scale must be positive, got {tol_scale}")));
    }
    let started = Instant::now();
    let outcomes = run_suite(&SuiteOptions { tol_scale, only }, |o| println!("{}", o.line()));
    let passed = outcomes.iter().filter(|o| o.passed()).count();
    println!(
        "{passed}/{} criteria passed in {:.1}s (tol-scale {tol_scale})",
        outcomes.len(),
        started.elapsed().as_secs_f64()
    );
    if let Some(path) = args.out.as_deref().or(cfg.out.as_deref()) {
        let mut report = Report::new();
        for o in &outcomes {
            report.push(o.to_record());
        }
        write_report(&report, Some(path))?;
    }
    Ok(if passed == outcomes.len() { Verdict::Ok } else { Verdict::Failed })
}
