use std::io::Write;

use normbridge::hunt::{sweep_with, target_q_grid, HuntConfig, SweepSummary};
use serde_json::{json, Value};

use crate::args::{Format, SweepArgs};
use crate::output::{envelope, sink, CsvReports};
use crate::{CliError, Verdict};

pub fn config(args: &SweepArgs) -> HuntConfig {
    HuntConfig {
        dims: args.dims.0.clone(),
        field: args.field,
        q_grid: args.q.as_ref().map_or_else(|| target_q_grid(args.target), |q| q.0.clone()),
        k_policy: args.k,
        norms: args.norms.0.clone(),
        samples: args.samples,
        seed: args.seed,
        tol: args.tol,
        ..HuntConfig::new(args.target)
    }
}

fn pretty_summary(w: &mut dyn Write, s: &SweepSummary) -> std::io::Result<()> {
    writeln!(w, "{:>4} {:>6} {:>4} {:>14} {:>7} {:>12} {:>12} {:>8}", "dim", "q", "k", "phi", "count", "min", "median", "fail")?;
    for c in &s.cells {
        writeln!(
            w,
            "{:>4} {:>6} {:>4} {:>14} {:>7} {:>12.3e} {:>12.3e} {:>8}",
            c.dim,
            c.q.map_or("-".into(), |q| q.to_string()),
            c.k.map_or("-".into(), |k| k.to_string()),
            c.phi.as_deref().unwrap_or("-"),
            c.count,
            c.min_margin,
            c.median_margin,
            c.failures
        )?;
    }
    writeln!(w, "{} samples, {} reports, {} failures, min relative margin {:.3e}", s.samples, s.reports, s.failures, s.min_margin)
}

pub fn run(args: &SweepArgs) -> Result<Verdict, CliError> {
    let cfg = config(args);
    cfg.validate()?;
    let head = envelope("sweep", cfg.seed, &cfg);
    let mut w = sink(args.output.as_deref())?;
    let io = |e: std::io::Error| CliError::Op(e.to_string());

    let summary = match args.format {
        Format::Jsonl => {
            writeln!(w, "{}", json!({ "header": head })).map_err(io)?;
            let mut failed = None;
            let summary = sweep_with(&cfg, |s| {
                for r in &s.reports {
                    if failed.is_none() {
                        failed = writeln!(w, "{}", json!(r)).err();
                    }
                }
            })?;
            if let Some(e) = failed {
                return Err(io(e));
            }
            writeln!(w, "{}", json!({ "summary": summary })).map_err(io)?;
            summary
        }
        Format::Csv => {
            let mut csv = CsvReports::new(&mut w);
            let mut failed = None;
            let summary = sweep_with(&cfg, |s| {
                for r in &s.reports {
                    if failed.is_none() {
                        failed = csv.write(r).err();
                    }
                }
            })?;
            if let Some(e) = failed {
                return Err(e);
            }
            csv.finish()?;
            summary
        }
        Format::Json => {
            let summary = sweep_with(&cfg, |_| {})?;
            let mut v = head;
            v.insert("summary".into(), json!(summary));
            serde_json::to_writer_pretty(&mut w, &Value::Object(v)).map_err(|e| CliError::Op(e.to_string()))?;
            writeln!(w).map_err(io)?;
            summary
        }
        Format::Pretty => {
            let summary = sweep_with(&cfg, |_| {})?;
            writeln!(w, "normbridge {} sweep {}  seed {}", normbridge::VERSION, cfg.target, cfg.seed).map_err(io)?;
            pretty_summary(&mut w, &summary).map_err(io)?;
            summary
        }
    };
    w.flush().map_err(io)?;
    Ok(Verdict::of(summary.failures > 0))
}
