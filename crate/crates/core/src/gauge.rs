//! Symmetric gauge functions, unitarily invariant norms, weak majorization
//! and Hölder's inequality for gauge functions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{singular_values, ComplexMatrix};
use crate::report::CheckReport;
use crate::scalar::{unit_floor, Real};

/// Selects a symmetric gauge function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum GaugeSpec {
    /// ℓ_p on the entries; `p = ∞` is the max norm.
    Schatten(f64),
    /// Sum of the `k` largest magnitudes.
    KyFan(usize),
}

impl GaugeSpec {
    pub fn schatten(p: f64) -> Result<Self> {
        let spec = GaugeSpec::Schatten(p);
        spec.validate()?;
        Ok(spec)
    }

    pub fn kyfan(k: usize) -> Result<Self> {
        let spec = GaugeSpec::KyFan(k);
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            GaugeSpec::Schatten(p) if p >= 1.0 => Ok(()),
            GaugeSpec::Schatten(p) => Err(Error::InvalidArgument(format!("Schatten exponent must be >= 1, got {p}"))),
            GaugeSpec::KyFan(0) => Err(Error::InvalidArgument("Ky Fan index must be >= 1".into())),
            GaugeSpec::KyFan(_) => Ok(()),
        }
    }

    /// Ky Fan `k = 1..=n` followed by Schatten `p ∈ {1, 1.5, 2, 3, ∞}`.
    pub fn test_grid(n: usize) -> Vec<GaugeSpec> {
        (1..=n)
            .map(GaugeSpec::KyFan)
            .chain([1.0, 1.5, 2.0, 3.0, f64::INFINITY].into_iter().map(GaugeSpec::Schatten))
            .collect()
    }
}

impl fmt::Display for GaugeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GaugeSpec::Schatten(p) if p.is_infinite() => write!(f, "schatten:inf"),
            GaugeSpec::Schatten(p) => write!(f, "schatten:{p}"),
            GaugeSpec::KyFan(k) => write!(f, "kyfan:{k}"),
        }
    }
}

impl FromStr for GaugeSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (family, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("gauge `{s}`: expected schatten:<p> or kyfan:<k>")))?;
        match family.trim() {
            "schatten" => {
                let arg = arg.trim();
                let p = if arg.eq_ignore_ascii_case("inf") {
                    f64::INFINITY
                } else {
                    arg.parse::<f64>().map_err(|e| Error::Parse(format!("gauge `{s}`: {e}")))?
                };
                GaugeSpec::schatten(p)
            }
            "kyfan" => {
                let k = arg.trim().parse::<usize>().map_err(|e| Error::Parse(format!("gauge `{s}`: {e}")))?;
                GaugeSpec::kyfan(k)
            }
            other => Err(Error::Parse(format!("gauge `{s}`: unknown family `{other}`"))),
        }
    }
}

impl TryFrom<String> for GaugeSpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<GaugeSpec> for String {
    fn from(g: GaugeSpec) -> String {
        g.to_string()
    }
}

/// Gauge list entry as written on the command line: a single gauge, or
/// `kyfan:*` for every Ky Fan index of the instance dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum GaugeSelector {
    One(GaugeSpec),
    AllKyFan,
    /// The full test grid for the instance dimension.
    Grid,
}

impl GaugeSelector {
    pub fn expand(&self, n: usize) -> Vec<GaugeSpec> {
        match self {
            GaugeSelector::One(g) => vec![*g],
            GaugeSelector::AllKyFan => (1..=n).map(GaugeSpec::KyFan).collect(),
            GaugeSelector::Grid => GaugeSpec::test_grid(n),
        }
    }
}

impl fmt::Display for GaugeSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaugeSelector::One(g) => g.fmt(f),
            GaugeSelector::AllKyFan => f.write_str("kyfan:*"),
            GaugeSelector::Grid => f.write_str("grid"),
        }
    }
}

impl TryFrom<String> for GaugeSelector {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<GaugeSelector> for String {
    fn from(g: GaugeSelector) -> String {
        g.to_string()
    }
}

impl FromStr for GaugeSelector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "kyfan:*" => Ok(GaugeSelector::AllKyFan),
            "grid" => Ok(GaugeSelector::Grid),
            other => other.parse().map(GaugeSelector::One),
        }
    }
}

/// `Φ(v)`. Ky Fan indices beyond `v.len()` see `v` zero-padded.
pub fn gauge_eval<T: Real>(phi: &GaugeSpec, v: &[T]) -> Result<T> {
    phi.validate()?;
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("gauge argument has non-finite entries".into()));
    }
    let mut mags: Vec<T> = v.iter().map(|x| x.abs()).collect();
    Ok(match *phi {
        GaugeSpec::Schatten(p) => {
            let m = mags.iter().fold(T::zero(), |a, &b| a.max(b));
            if p.is_infinite() || m == T::zero() {
                m
            } else {
                let p = T::lit(p);
                // Scaled by the max entry against overflow.
                let s = mags.iter().fold(T::zero(), |acc, &x| acc + (x / m).powf(p));
                m * s.powf(T::one() / p)
            }
        }
        GaugeSpec::KyFan(k) => {
            mags.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
            mags.iter().take(k).fold(T::zero(), |acc, &x| acc + x)
        }
    })
}

/// `|||X||| = Φ(σ(X))`.
pub fn ui_norm<T: Real>(phi: &GaugeSpec, x: &ComplexMatrix<T>) -> Result<T> {
    gauge_eval(phi, singular_values(x)?.values())
}

/// Result of a weak majorization test `x ≺_w y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MajorizationVerdict<T: Real> {
    pub holds: bool,
    /// `min_j (Σ_{i≤j} y↓_i − Σ_{i≤j} x↓_i)`.
    pub worst_partial_sum_gap: T,
    /// 1-based prefix length attaining the worst gap (0 for empty input).
    pub prefix_index: usize,
    pub lhs_prefix_sum: T,
    pub rhs_prefix_sum: T,
}

fn sorted_desc_padded<T: Real>(v: &[T], len: usize) -> Vec<T> {
    let mut out = v.to_vec();
    out.resize(len, T::zero());
    out.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    out
}

/// `x ≺_w y`: every prefix sum of `x↓` is at most that of `y↓`, up to
/// `tol · max(1, Σ|y_i|)`. Shorter vectors are zero-padded.
pub fn weak_majorize<T: Real>(x: &[T], y: &[T], tol: T) -> MajorizationVerdict<T> {
    let len = x.len().max(y.len());
    let xs = sorted_desc_padded(x, len);
    let ys = sorted_desc_padded(y, len);
    let scale = unit_floor(y.iter().fold(T::zero(), |acc, v| acc + v.abs()));

    let (mut sx, mut sy) = (T::zero(), T::zero());
    let mut worst = None::<(T, usize, T, T)>;
    for j in 0..len {
        sx += xs[j];
        sy += ys[j];
        let gap = sy - sx;
        if worst.is_none_or(|(w, ..)| gap < w) {
            worst = Some((gap, j + 1, sx, sy));
        }
    }
    let (gap, idx, lx, ly) = worst.unwrap_or((T::zero(), 0, T::zero(), T::zero()));
    MajorizationVerdict {
        holds: gap >= -tol * scale,
        worst_partial_sum_gap: gap,
        prefix_index: idx,
        lhs_prefix_sum: lx,
        rhs_prefix_sum: ly,
    }
}

/// `z_i = |x_i · y_i|`.
pub fn elementwise_product_abs<T: Real>(x: &[T], y: &[T]) -> Result<Vec<T>> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: format!("length {}", x.len()),
            actual: format!("length {}", y.len()),
        });
    }
    Ok(x.iter().zip(y).map(|(&a, &b)| (a * b).abs()).collect())
}

/// Hölder's inequality for gauge functions:
/// `Φ(|x·y|) ≤ Φ(|x|^p)^{1/p} · Φ(|y|^{p'})^{1/p'}`, `1/p + 1/p' = 1`.
pub fn holder_gauge_check<T: Real>(phi: &GaugeSpec, x: &[T], y: &[T], p: f64) -> Result<CheckReport> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::InvalidArgument(format!("Hölder exponent must be finite and > 1, got {p}")));
    }
    let pc = p / (p - 1.0);
    let lhs = gauge_eval(phi, &elementwise_product_abs(x, y)?)?;
    let pow = |v: &[T], e: f64| -> Vec<T> { v.iter().map(|a| a.abs().powf(T::lit(e))).collect() };
    let fx = gauge_eval(phi, &pow(x, p))?.powf(T::lit(1.0 / p));
    let fy = gauge_eval(phi, &pow(y, pc))?.powf(T::lit(1.0 / pc));
    let report = CheckReport::evaluate("holder-gauge", lhs.as_f64(), (fx * fy).as_f64(), T::tolerances().compare);
    Ok(report.with_instance(crate::report::InstanceDigest {
        dim: Some(x.len()),
        p: Some(p),
        phi: Some(phi.to_string()),
        ..Default::default()
    }))
}
