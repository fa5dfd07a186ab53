use normbridge::hunt::random_pair;
use normbridge::instance::InstanceFile;
use normbridge::linalg::random::substream;

use crate::args::InstanceArgs;
use crate::CliError;

/// The instance named by `--instance`, or a random one drawn from stream
/// `(seed, 0)`.
pub fn load(args: &InstanceArgs, factors: bool) -> Result<InstanceFile, CliError> {
    if let Some(path) = &args.instance {
        return Ok(InstanceFile::read(path)?);
    }
    let n = args.n.ok_or_else(|| CliError::Op("--random needs -n".into()))?;
    let ranks = (args.rank_a.unwrap_or(n), args.rank_b.unwrap_or(n));
    let pair = random_pair(&mut substream(args.seed, 0), factors, n, ranks, args.field.into())?;
    Ok(InstanceFile::new(pair))
}
