use std::collections::BTreeMap;

use fracfvt_core::acceptance::{candidates, ROTATION_HORIZON, ROTATION_STEP, ROTATION_WINDOW};
use fracfvt_core::fodesim::{self, FodeError, FodeProblem, RESIDUAL_FLOOR};
use fracfvt_core::report::{Report, ReportRecord, Status};

use crate::config::FodeConfig;
use crate::output::{write_csv, write_report};
use crate::{CliError, FodeArgs, Verdict};

const DEFAULT_SCAN: &str = "1:20:60";

fn parse_scan(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("--scan expects lo:hi:count with 0 < lo <= hi and count >= 1, got {spec:?}"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, n] = parts.as_slice() else {
        return Err(bad());
    };
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if !(lo > 0.0 && hi >= lo && n >= 1) {
        return Err(bad());
    }
    Ok(candidates(lo, hi, n))
}

fn parse_params(raw: &[String]) -> Result<BTreeMap<String, f64>, CliError> {
    raw.iter()
        .map(|p| {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--param expects name=value, got {p:?}")))?;
            let v: f64 = v.trim().parse().map_err(|_| CliError::Usage(format!("--param {k}: not a number")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

pub fn run(args: FodeArgs, cfg: &FodeConfig) -> Result<Verdict, CliError> {
    let usage = |e: FodeError| CliError::Usage(e.to_string());
    let name = args
        .rhs
        .or_else(|| cfg.rhs.clone())
        .ok_or_else(|| CliError::Usage("fode needs --rhs".into()))?;
    let mut params = cfg.params.clone().unwrap_or_default();
    params.extend(parse_params(&args.params)?);
    let rhs = fodesim::rhs_registry(&name, &params).map_err(usage)?;
    let alpha = args.alpha.or(cfg.alpha).ok_or_else(|| CliError::Usage("fode needs --alpha".into()))?;
    let x0 = args.x0.or_else(|| cfg.x0.clone()).unwrap_or_else(|| match rhs.dim {
        Some(2) => vec![1.0, 0.0],
        Some(d) => vec![1.0; d],
        None => vec![1.0],
    });
    let horizon = args.horizon.or(cfg.horizon).unwrap_or(ROTATION_HORIZON);
    let h = args.h.or(cfg.h).unwrap_or(ROTATION_STEP);
    let scan = parse_scan(args.scan.as_deref().or(cfg.scan.as_deref()).unwrap_or(DEFAULT_SCAN))?;
    let window = args.window.or(cfg.window).unwrap_or(ROTATION_WINDOW);
    let t_skip = args.t_skip.or(cfg.t_skip);
    let floor = args.floor.or(cfg.floor).unwrap_or(RESIDUAL_FLOOR);

    let problem = FodeProblem::new(alpha, rhs, x0, horizon, h).map_err(usage)?;
    let mut report = Report::new();
    let verdict = match fodesim::solve(&problem) {
        Ok(traj) => {
            let (rec, scan) =
                fodesim::periodicity_report(&problem, &traj, &scan, window, t_skip, floor).map_err(usage)?;
            eprintln!(
                "{}: min residual {:.4e} at T = {:.4}, nonconstancy {:.4e}, {:?}",
                rec.experiment_id, scan.min_residual, scan.best_period, scan.nonconstancy, rec.status
            );
            if let Some(path) = args.csv.as_deref().or(cfg.csv.as_deref()) {
                let rows: Vec<Vec<String>> =
                    scan.curve.iter().map(|(t, r)| vec![format!("{t:e}"), format!("{r:e}")]).collect();
                write_csv(path, &["T", "residual"], &rows)?;
            }
            let v = if rec.status == Status::Fail { Verdict::Failed } else { Verdict::Ok };
            report.push(rec);
            v
        }
        Err(e) => {
            let mut rec = ReportRecord::new(format!("fode/{name}/alpha={alpha}"));
            rec.output("error", e.to_string());
            rec.status = Status::Fail;
            eprintln!("{}: {e}", rec.experiment_id);
            report.push(rec);
            Verdict::Failed
        }
    };
    write_report(&report, args.out.as_deref().or(cfg.out.as_deref()))?;
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scan_parsing() {
        assert_eq!(parse_scan("1:3:3").unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(parse_scan("2:2:1").unwrap(), vec![2.0]);
        for bad in ["1:2", "0:1:3", "3:1:2", "1:2:0", "a:b:c"] {
            assert!(parse_scan(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn param_parsing() {
        let p = parse_params(&["omega=2".into(), " k = 3.5".into()]).unwrap();
        assert_eq!(p["omega"], 2.0);
        assert_eq!(p["k"], 3.5);
        assert!(parse_params(&["omega".into()]).is_err());
    }
}
