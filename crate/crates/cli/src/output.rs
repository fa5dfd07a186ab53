use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use normbridge::CheckReport;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::args::Format;
use crate::CliError;

/// Metadata every artifact carries: enough to reproduce it bit for bit.
pub fn envelope(command: &str, seed: u64, config: &impl Serialize) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("tool".into(), "normbridge".into());
    m.insert("version".into(), normbridge::VERSION.into());
    m.insert("command".into(), command.into());
    m.insert("seed".into(), seed.into());
    m.insert("config".into(), serde_json::to_value(config).expect("configs serialize"));
    m
}

/// Writer for `path`, or stdout.
pub fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| CliError::io(p, e))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_json_file(path: &Path, v: &Value) -> Result<(), CliError> {
    let mut w = sink(Some(path))?;
    serde_json::to_writer_pretty(&mut w, v).map_err(|e| CliError::Op(e.to_string()))?;
    writeln!(w).and_then(|_| w.flush()).map_err(|e| CliError::io(path, e))
}

#[derive(Serialize)]
struct CsvRow<'a> {
    name: &'a str,
    lhs: f64,
    rhs: f64,
    margin: f64,
    relative_margin: f64,
    tol: f64,
    holds: bool,
    index: Option<u64>,
    dim: Option<usize>,
    field: Option<String>,
    q: Option<f64>,
    k: Option<usize>,
    r: Option<f64>,
    p: Option<f64>,
    phi: Option<&'a str>,
}

pub struct CsvReports<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> CsvReports<W> {
    pub fn new(w: W) -> Self {
        Self { inner: csv::Writer::from_writer(w) }
    }

    pub fn write(&mut self, r: &CheckReport) -> Result<(), CliError> {
        let i = &r.instance;
        self.inner
            .serialize(CsvRow {
                name: &r.name,
                lhs: r.lhs,
                rhs: r.rhs,
                margin: r.margin,
                relative_margin: r.relative_margin(),
                tol: r.tol,
                holds: r.holds,
                index: i.index,
                dim: i.dim,
                field: i.field.map(|f| f.to_string()),
                q: i.q,
                k: i.k,
                r: i.r,
                p: i.p,
                phi: i.phi.as_deref(),
            })
            .map_err(|e| CliError::Op(e.to_string()))
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        self.inner.flush().map_err(|e| CliError::Op(e.to_string()))
    }
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "-".into(), |x| x.to_string())
}

pub fn pretty_reports(w: &mut dyn Write, reports: &[CheckReport]) -> io::Result<()> {
    writeln!(w, "{:<34} {:>6} {:>5} {:>14} {:>23} {:>23} {:>11}  holds", "check", "q", "k", "phi", "lhs", "rhs", "margin")?;
    for r in reports {
        let i = &r.instance;
        writeln!(
            w,
            "{:<34} {:>6} {:>5} {:>14} {:>23.15e} {:>23.15e} {:>11.3e}  {}",
            r.name,
            opt(i.q),
            opt(i.k),
            opt(i.phi.as_deref()),
            r.lhs,
            r.rhs,
            r.margin,
            if r.holds { "yes" } else { "NO" }
        )?;
    }
    Ok(())
}

/// Emits a report list in `format`, preceded by its envelope where the
/// format has room for one.
pub fn emit_reports(w: &mut dyn Write, format: Format, mut head: Map<String, Value>, reports: &[CheckReport]) -> Result<(), CliError> {
    let all_hold = reports.iter().all(|r| r.holds);
    let io = |e: io::Error| CliError::Op(e.to_string());
    match format {
        Format::Json => {
            head.insert("all_hold".into(), all_hold.into());
            head.insert("reports".into(), json!(reports));
            serde_json::to_writer_pretty(&mut *w, &Value::Object(head)).map_err(|e| CliError::Op(e.to_string()))?;
            writeln!(w).map_err(io)?;
        }
        Format::Jsonl => {
            writeln!(w, "{}", json!({ "header": head })).map_err(io)?;
            for r in reports {
                writeln!(w, "{}", json!(r)).map_err(io)?;
            }
        }
        Format::Csv => {
            let mut csv = CsvReports::new(&mut *w);
            for r in reports {
                csv.write(r)?;
            }
            csv.finish()?;
        }
        Format::Pretty => {
            writeln!(w, "normbridge {}  seed {}", normbridge::VERSION, head["seed"]).map_err(io)?;
            pretty_reports(w, reports).map_err(io)?;
            writeln!(w, "{}", if all_hold { "all hold" } else { "VIOLATED" }).map_err(io)?;
        }
    }
    w.flush().map_err(io)
}
