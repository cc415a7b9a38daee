use fracfvt_core::finval::{cross_validate, CrossValidateOptions, CROSS_S_SEQ};
use fracfvt_core::report::{Report, Status};
use fracfvt_core::xform::{catalog_tq_sin, Catalog, CatalogFunction};
use rayon::prelude::*;

use crate::config::FvtConfig;
use crate::output::{fmt_f64, write_csv, write_report};
use crate::{CliError, FvtArgs, Verdict};

fn resolve_function(name: &str, q: Option<f64>, omega: Option<f64>) -> Result<CatalogFunction, CliError> {
    let catalog = Catalog::standard().map_err(|e| CliError::Usage(e.to_string()))?;
    if name == "tq_sin" && (q.is_some() || omega.is_some()) {
        return catalog_tq_sin(q.unwrap_or(2.0), omega.unwrap_or(1.0)).map_err(|e| CliError::Usage(e.to_string()));
    }
    if q.is_some() || omega.is_some() {
        return Err(CliError::Usage(format!("--q and --omega apply to tq_sin only, not {name}")));
    }
    catalog.get(name).cloned().ok_or_else(|| {
        CliError::Usage(format!("unknown function {name:?}; valid names: {}", catalog.names().join(", ")))
    })
}

pub fn run(args: FvtArgs, cfg: &FvtConfig) -> Result<Verdict, CliError> {
    let name = args
        .function
        .or_else(|| cfg.function.clone())
        .ok_or_else(|| CliError::Usage("fvt needs --fn".into()))?;
    let f = resolve_function(&name, args.q.or(cfg.q), args.omega.or(cfg.omega))?;
    let alphas = args.alpha.or_else(|| cfg.alpha.clone()).unwrap_or_else(|| vec![0.0]);
    if let Some(a) = alphas.iter().find(|a| !(**a >= 0.0 && a.is_finite())) {
        return Err(CliError::Usage(format!("alpha must be finite and >= 0, got {a}")));
    }
    let defaults = CrossValidateOptions::default();
    let opts = CrossValidateOptions {
        tol: args.tol.or(cfg.tol).unwrap_or(defaults.tol),
        s_seq: args.s_seq.or_else(|| cfg.s_seq.clone()).unwrap_or_else(|| CROSS_S_SEQ.to_vec()),
        t_probes: args.t_probes.or_else(|| cfg.t_probes.clone()),
    };
    validate_schedules(&opts)?;

    let records: Vec<_> = alphas.par_iter().map(|&a| cross_validate(&f, a, &opts)).collect();
    let mut report = Report::new();
    for r in &records {
        eprintln!("{:<40} {:?}", r.experiment_id, r.status);
        report.push(r.clone());
    }
    write_report(&report, args.out.as_deref().or(cfg.out.as_deref()))?;
    if let Some(path) = args.csv.as_deref().or(cfg.csv.as_deref()) {
        let rows: Vec<Vec<String>> = records
            .iter()
            .map(|r| {
                let alpha = r.inputs.get("alpha").and_then(fracfvt_core::report::as_f64);
                vec![
                    f.name.clone(),
                    fmt_f64(alpha),
                    fmt_f64(r.get_f64("L")),
                    fmt_f64(r.get_f64("G")),
                    fmt_f64(r.get_f64("K")),
                    fmt_f64(r.get_f64("gap_G")),
                    fmt_f64(r.get_f64("gap_K")),
                    format!("{:?}", r.status).to_lowercase(),
                ]
            })
            .collect();
        write_csv(path, &["function", "alpha", "L", "G", "K", "gap_G", "gap_K", "status"], &rows)?;
    }
    Ok(if report.records().iter().any(|r| r.status == Status::Fail) { Verdict::Failed } else { Verdict::Ok })
}

fn validate_schedules(opts: &CrossValidateOptions) -> Result<(), CliError> {
    let s = &opts.s_seq;
    if s.len() < 2 || s.iter().any(|v| !(*v > 0.0)) || s.windows(2).any(|w| w[1] >= w[0]) {
        return Err(CliError::Usage("--s-seq needs at least two positive, strictly decreasing values".into()));
    }
    if let Some(t) = &opts.t_probes {
        if t.len() < 2 || t.iter().any(|v| !(*v > 0.0)) || t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Usage("--t-probes needs at least two positive, strictly increasing values".into()));
        }
    }
    if !(opts.tol > 0.0) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", opts.tol)));
    }
    Ok(())
}
