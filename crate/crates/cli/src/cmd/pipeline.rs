use std::io::Write;

use normbridge::pipeline::{trace_pipeline, StepRecord};
use normbridge::Error;
use serde_json::{json, Value};

use crate::args::{Format, PipelineArgs};
use crate::output::{envelope, sink, write_json_file};
use crate::{source, CliError, Verdict};

/// Worst gated residual of a step as `(key, value, gate)`, by value/gate.
fn worst_gate(s: &StepRecord) -> Option<(&str, f64, f64)> {
    s.gates
        .iter()
        .map(|(key, &gate)| (key.as_str(), s.residuals[key], gate))
        .max_by(|a, b| (a.1 / a.2).total_cmp(&(b.1 / b.2)))
}

fn step_table(w: &mut dyn Write, steps: &[StepRecord]) -> std::io::Result<()> {
    writeln!(w, "{:<22} {:<30} {:>11} {:>9}  pass", "step", "worst residual", "value", "gate")?;
    for s in steps {
        let (key, value, gate) = worst_gate(s).unwrap_or(("-", 0.0, 0.0));
        writeln!(w, "{:<22} {:<30} {:>11.3e} {:>9.1e}  {}", s.name, key, value, gate, if s.pass { "yes" } else { "NO" })?;
    }
    Ok(())
}

pub fn run(args: &PipelineArgs) -> Result<Verdict, CliError> {
    let file = source::load(&args.instance, false)?;
    let q = args
        .q
        .or(file.q)
        .ok_or_else(|| CliError::Op("pipeline needs --q (or \"q\" in the instance file)".into()))?;
    let k = args.k.or(file.k).unwrap_or(1);
    let (a, b) = file.pair.psd_pair()?;
    let mut out = sink(None)?;
    let io = |e: std::io::Error| CliError::Op(e.to_string());

    let trace = match trace_pipeline(&a, &b, q, k) {
        Ok(t) => t,
        Err(Error::TriviallyTrue(why)) => {
            writeln!(out, "inequality holds trivially: {why}").map_err(io)?;
            return Ok(Verdict::Holds);
        }
        Err(e) => return Err(e.into()),
    };

    let mut doc = envelope("pipeline", args.instance.seed, args);
    doc.insert("effective".into(), json!({ "q": q, "k": k }));
    doc.insert("trace".into(), trace.to_json());
    let doc = Value::Object(doc);
    write_json_file(&args.output, &doc)?;

    match args.format {
        Format::Pretty => {
            step_table(&mut *out, &trace.steps).map_err(io)?;
            writeln!(
                out,
                "final bound {:.15}  (n = {}, q = {q}, k = {k}, cond(A11) = {:.3e}{})",
                trace.final_bound,
                trace.dim,
                trace.blocks.a11_condition,
                if trace.degenerate { ", degenerate: gates not enforced" } else { "" }
            )
            .map_err(io)?;
            writeln!(out, "trace written to {}", args.output.display()).map_err(io)?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &doc).map_err(|e| CliError::Op(e.to_string()))?;
            writeln!(out).map_err(io)?;
        }
        Format::Jsonl => {
            for s in &trace.steps {
                writeln!(out, "{}", json!(s)).map_err(io)?;
            }
        }
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(&mut out);
            csv.write_record(["step", "residual", "value", "gate", "pass"]).map_err(|e| CliError::Op(e.to_string()))?;
            for s in &trace.steps {
                for (key, value) in &s.residuals {
                    let gate = s.gates.get(key).map_or(String::new(), |g| g.to_string());
                    let pass = s.gates.get(key).map_or(String::new(), |g| (value <= g).to_string());
                    csv.write_record([s.name.as_str(), key, &value.to_string(), &gate, &pass])
                        .map_err(|e| CliError::Op(e.to_string()))?;
                }
            }
            csv.flush().map_err(io)?;
        }
    }
    out.flush().map_err(io)?;
    Ok(Verdict::of(!trace.passed() && !trace.degenerate))
}
