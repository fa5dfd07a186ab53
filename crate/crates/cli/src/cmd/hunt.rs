use std::io::Write;

use normbridge::hunt::{hunt_counterexample, HuntConfig, HuntOutcome};
use serde_json::{json, Value};

use crate::args::{Format, HuntArgs};
use crate::output::{envelope, sink, write_json_file};
use crate::{CliError, Verdict};

/// Defaults for the target, overlaid by `--config`, overlaid by flags.
pub fn config(args: &HuntArgs) -> Result<HuntConfig, CliError> {
    let mut cfg = HuntConfig::new(args.target);
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let file: Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Op(format!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column())))?;
        let Value::Object(overrides) = file else {
            return Err(CliError::Op(format!("{}: config must be a JSON object", path.display())));
        };
        let mut base = serde_json::to_value(&cfg).expect("configs serialize");
        let obj = base.as_object_mut().expect("configs are objects");
        for (key, v) in overrides {
            if !obj.contains_key(&key) && key != "tol" {
                return Err(CliError::Op(format!("{}: unknown config key {key:?}", path.display())));
            }
            obj.insert(key, v);
        }
        cfg = serde_json::from_value(base).map_err(|e| CliError::Op(format!("{}: {e}", path.display())))?;
        cfg.target = args.target;
    }
    if let Some(v) = &args.dims {
        cfg.dims = v.0.clone();
    }
    if let Some(v) = args.field {
        cfg.field = v;
    }
    if let Some(v) = &args.q {
        cfg.q_grid = v.0.clone();
    }
    if let Some(v) = args.k {
        cfg.k_policy = v;
    }
    if let Some(v) = &args.norms {
        cfg.norms = v.0.clone();
    }
    if let Some(v) = args.restarts {
        cfg.restarts = v;
    }
    if let Some(v) = args.steps {
        cfg.steps_per_restart = v;
    }
    if let Some(v) = args.step_scale {
        cfg.step_scale = v;
    }
    if let Some(v) = args.threshold {
        cfg.violation_threshold = v;
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(budget) = args.budget {
        cfg.restarts = 1;
        let per_restart = cfg.budget().max(1);
        cfg.restarts = (budget / per_restart).max(1) as usize;
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn run(args: &HuntArgs) -> Result<Verdict, CliError> {
    let cfg = config(args)?;
    let outcome = hunt_counterexample(&cfg)?;
    let head = envelope("hunt", cfg.seed, &cfg);

    if let Some(v) = outcome.violation() {
        let mut doc = v.to_json();
        doc.as_object_mut().expect("violations are objects").insert("run".into(), Value::Object(head.clone()));
        write_json_file(&args.output, &doc)?;
    }

    let mut out = sink(None)?;
    let io = |e: std::io::Error| CliError::Op(e.to_string());
    let stats = outcome.stats();
    match args.format {
        Format::Pretty => {
            match &outcome {
                HuntOutcome::Found { violation, .. } => writeln!(
                    out,
                    "violation of {} found: margin {:.6e} (n = {}, {}, q = {}, k = {}), restart {} step {}; written to {}",
                    cfg.target,
                    violation.margin(),
                    violation.pair.dim(),
                    violation.field(),
                    violation.q.map_or("-".into(), |q| q.to_string()),
                    violation.k.map_or("-".into(), |k| k.to_string()),
                    violation.path.restart,
                    violation.path.step,
                    args.output.display()
                ),
                HuntOutcome::NotFound(_) => writeln!(out, "no violation of {} found", cfg.target),
            }
            .map_err(io)?;
            writeln!(
                out,
                "{} evaluations over {} restarts; min relative margin {:.3e}",
                stats.evaluations, stats.restarts, stats.min_margin
            )
            .map_err(io)?;
        }
        _ => {
            let mut doc = head;
            doc.insert("budget".into(), cfg.budget().into());
            if let Value::Object(o) = outcome.to_json() {
                doc.extend(o);
            }
            if outcome.violation().is_some() {
                doc.insert("output".into(), json!(args.output));
            }
            if args.format == Format::Json {
                serde_json::to_writer_pretty(&mut out, &Value::Object(doc)).map_err(|e| CliError::Op(e.to_string()))?;
                writeln!(out).map_err(io)?;
            } else {
                writeln!(out, "{}", Value::Object(doc)).map_err(io)?;
            }
        }
    }
    out.flush().map_err(io)?;
    Ok(Verdict::of(outcome.violation().is_some()))
}
