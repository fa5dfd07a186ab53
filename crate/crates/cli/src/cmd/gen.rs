use std::io::Write;

use normbridge::hunt::random_pair;
use normbridge::instance::InstanceFile;
use normbridge::linalg::random::substream;
use serde_json::Value;

use crate::args::{GenArgs, PairKind};
use crate::output::{envelope, sink};
use crate::CliError;

/// Writes a random instance drawn from stream `(seed, 0)`; the same
/// arguments always produce the same bytes.
pub fn run(args: &GenArgs) -> Result<(), CliError> {
    let ranks = (args.rank.unwrap_or(args.n), args.rank_b.unwrap_or(args.n));
    let pair = random_pair(&mut substream(args.seed, 0), args.pair == PairKind::Factors, args.n, ranks, args.field.into())?;
    let mut file = InstanceFile::new(pair);
    file.q = args.q;
    file.k = args.k;
    let mut doc = file.to_json();
    doc.as_object_mut()
        .expect("instance files are objects")
        .insert("run".into(), Value::Object(envelope("gen", args.seed, args)));
    let mut w = sink(args.output.as_deref())?;
    serde_json::to_writer_pretty(&mut w, &doc).map_err(|e| CliError::Op(e.to_string()))?;
    writeln!(w).and_then(|_| w.flush()).map_err(|e| CliError::Op(e.to_string()))
}
