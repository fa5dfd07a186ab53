use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use normbridge::gauge::GaugeSelector;
use normbridge::hunt::{FieldChoice, HuntTarget, KPolicy};
use normbridge::Field;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "normbridge", version, about = "Numerical checks of matrix inequalities between the AGM and Cauchy-Schwarz bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check one instance against an inequality.
    Check(CheckArgs),
    /// Check many random instances; JSON lines plus a summary record.
    Sweep(SweepArgs),
    /// Run the step-by-step proof reduction on one instance.
    Pipeline(PipelineArgs),
    /// Search for a counterexample by hill-climbing.
    Hunt(HuntArgs),
    /// Write a random instance file.
    Gen(GenArgs),
}

#[derive(ValueEnum, Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Jsonl,
    Csv,
    Pretty,
}

#[derive(ValueEnum, Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum FieldArg {
    Real,
    Complex,
}

impl From<FieldArg> for Field {
    fn from(f: FieldArg) -> Field {
        match f {
            FieldArg::Real => Field::Real,
            FieldArg::Complex => Field::Complex,
        }
    }
}

#[derive(ValueEnum, Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum CheckTarget {
    Theorem2,
    Theorem1,
    SingularForm,
    AgmSingular,
    CauchySchwarz,
    Agm,
    WeylMajorant,
    SvProductMajorization,
    EigProductMajorization,
    MajorizationChain,
    HolderNormForm,
    HermitianPartBound,
    FalseVariant,
}

impl CheckTarget {
    /// Whether random instances for this target are factor pairs `(X, Y)`.
    pub fn uses_factors(self) -> bool {
        use CheckTarget::*;
        matches!(
            self,
            Theorem1 | SingularForm | AgmSingular | CauchySchwarz | Agm | MajorizationChain | HolderNormForm | HermitianPartBound
        )
    }
}

#[derive(Args, Serialize, Debug, Clone)]
pub struct InstanceArgs {
    /// Instance file with matrices "A","B" or "X","Y".
    #[arg(long, conflicts_with = "random", required_unless_present = "random")]
    pub instance: Option<PathBuf>,
    /// Draw a random instance instead of reading one.
    #[arg(long, requires = "n")]
    pub random: bool,
    /// Dimension of the random instance.
    #[arg(short = 'n', long = "dim")]
    pub n: Option<usize>,
    /// Rank of A (or X) in random instances; defaults to n.
    #[arg(long)]
    pub rank_a: Option<usize>,
    /// Rank of B (or Y) in random instances; defaults to n.
    #[arg(long)]
    pub rank_b: Option<usize>,
    #[arg(long, value_enum, default_value = "real")]
    pub field: FieldArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Serialize, Debug, Clone, Copy, Default)]
pub struct Expect {
    /// Succeed only if a violation occurs.
    #[arg(long, conflicts_with = "expect_none")]
    pub expect_violation: bool,
    /// Succeed only if no violation occurs.
    #[arg(long)]
    pub expect_none: bool,
}

/// Comma-separated numbers, e.g. `0,0.5,1`.
#[derive(Serialize, Debug, Clone, PartialEq)]
#[serde(transparent)]
pub struct NumList(pub Vec<f64>);

/// Comma-separated integers and ranges, e.g. `1-8` or `2,3,5`.
#[derive(Serialize, Debug, Clone, PartialEq)]
#[serde(transparent)]
pub struct DimList(pub Vec<usize>);

/// Comma-separated gauges, e.g. `kyfan:*,schatten:inf`.
#[derive(Serialize, Debug, Clone, PartialEq)]
#[serde(transparent)]
pub struct NormList(pub Vec<GaugeSelector>);

pub fn parse_num_list(s: &str) -> Result<NumList, String> {
    let v = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("bad number {t:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    if v.iter().any(|x| !x.is_finite()) {
        return Err("numbers must be finite".into());
    }
    Ok(NumList(v))
}

pub fn parse_dim_list(s: &str) -> Result<DimList, String> {
    let mut dims = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        let bad = |e: std::num::ParseIntError| format!("bad dimension {part:?}: {e}");
        match part.split_once('-') {
            Some((lo, hi)) => {
                let (lo, hi) = (lo.trim().parse::<usize>().map_err(bad)?, hi.trim().parse::<usize>().map_err(bad)?);
                if lo > hi {
                    return Err(format!("empty range {part:?}"));
                }
                dims.extend(lo..=hi);
            }
            None => dims.push(part.parse().map_err(bad)?),
        }
    }
    if dims.contains(&0) {
        return Err("dimensions must be positive".into());
    }
    Ok(DimList(dims))
}

pub fn parse_norm_list(s: &str) -> Result<NormList, String> {
    s.split(',')
        .map(|t| t.trim().parse::<GaugeSelector>().map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()
        .map(NormList)
}

#[derive(Args, Serialize, Debug, Clone)]
pub struct CheckArgs {
    #[arg(value_enum)]
    pub target: CheckTarget,
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Interpolation parameter; defaults to the instance file's, else 0.5.
    #[arg(long)]
    pub q: Option<f64>,
    /// Index; all indices when omitted.
    #[arg(long)]
    pub k: Option<usize>,
    /// Single gauge, e.g. `schatten:inf` or `kyfan:2`.
    #[arg(long, conflicts_with = "norms")]
    pub phi: Option<String>,
    /// Gauge list; `kyfan:*` expands to every Ky Fan index, `grid` to the full test grid.
    #[arg(long, value_parser = parse_norm_list)]
    pub norms: Option<NormList>,
    /// Exponent of the majorization forms.
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    /// Hölder exponent.
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Override the comparison tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub expect: Expect,
}

#[derive(Args, Serialize, Debug, Clone)]
pub struct SweepArgs {
    #[arg(default_value = "theorem2")]
    pub target: HuntTarget,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, value_parser = parse_dim_list, default_value = "1-8")]
    pub dims: DimList,
    /// q grid; defaults to 0, 0.1, …, 1 (0.05, …, 0.5 for the false variant).
    #[arg(long, value_parser = parse_num_list)]
    pub q: Option<NumList>,
    #[arg(long, value_parser = parse_norm_list, default_value = "grid")]
    pub norms: NormList,
    #[arg(long, default_value = "all")]
    pub k: KPolicy,
    #[arg(long, default_value = "both")]
    pub field: FieldChoice,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value = "jsonl")]
    pub format: Format,
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub expect: Expect,
}

#[derive(Args, Serialize, Debug, Clone)]
pub struct PipelineArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Interpolation parameter in (0, 1); defaults to the instance file's.
    #[arg(long)]
    pub q: Option<f64>,
    /// Index; defaults to the instance file's.
    #[arg(long)]
    pub k: Option<usize>,
    /// Where to write the full JSON trace.
    #[arg(short = 'o', long, default_value = "pipeline-trace.json")]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value = "pretty")]
    pub format: Format,
}

#[derive(Args, Serialize, Debug, Clone)]
pub struct HuntArgs {
    pub target: HuntTarget,
    /// Base configuration (JSON); flags given on the command line override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Evaluation budget; sets the number of restarts.
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub step_scale: Option<f64>,
    #[arg(long, value_parser = parse_dim_list)]
    pub dims: Option<DimList>,
    #[arg(long)]
    pub field: Option<FieldChoice>,
    #[arg(long, value_parser = parse_num_list)]
    pub q: Option<NumList>,
    #[arg(long)]
    pub k: Option<KPolicy>,
    #[arg(long, value_parser = parse_norm_list)]
    pub norms: Option<NormList>,
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Where to write a found violation.
    #[arg(short = 'o', long, default_value = "violation.json")]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[command(flatten)]
    pub expect: Expect,
}

#[derive(ValueEnum, Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum PairKind {
    /// PSD pair "A", "B".
    Psd,
    /// Factor pair "X", "Y".
    Factors,
}

#[derive(Args, Serialize, Debug, Clone)]
pub struct GenArgs {
    #[arg(short = 'n', long = "dim")]
    pub n: usize,
    /// Rank of A (or X); defaults to n.
    #[arg(long)]
    pub rank: Option<usize>,
    /// Rank of B (or Y); defaults to n.
    #[arg(long)]
    pub rank_b: Option<usize>,
    #[arg(long, value_enum, default_value = "real")]
    pub field: FieldArg,
    #[arg(long, value_enum, default_value = "psd")]
    pub pair: PairKind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Output file; stdout when omitted.
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list_parsers() {
        assert_eq!(parse_num_list("0, 0.5,1").unwrap(), NumList(vec![0.0, 0.5, 1.0]));
        assert!(parse_num_list("0,,1").is_err());
        assert!(parse_num_list("0,nan").is_err());
        assert_eq!(parse_dim_list("1-3,7").unwrap(), DimList(vec![1, 2, 3, 7]));
        assert!(parse_dim_list("3-1").is_err());
        assert!(parse_dim_list("0").is_err());
        assert_eq!(parse_norm_list("kyfan:*,schatten:2").unwrap().0.len(), 2);
        assert!(parse_norm_list("kyfan:0").is_err());
    }

    #[test]
    fn cli_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
