//! Randomized counterexample search and random stress sweeps.
//!
//! The hunt hill-climbs on the worst relative margin of a target inequality:
//! random restarts, small random perturbations re-projected onto the PSD
//! cone, strict-descent acceptance, and a periodic line search over the `q`
//! grid. Restart `i` draws from RNG stream `(seed, i)` and restarts run in
//! fixed-size chunks, so results do not depend on the number of workers.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::checks::{
    check_agm_singular, check_agm_singular_all, check_false_variant, check_false_variant_all, check_singular_form,
    check_singular_form_all, check_theorem1, check_theorem1_grid, check_theorem2, check_theorem2_all, AGM_SINGULAR, FALSE_VARIANT,
    SINGULAR_FORM, THEOREM1, THEOREM2,
};
use crate::error::{Error, Result};
use crate::gauge::{GaugeSelector, GaugeSpec};
use crate::instance::{InstanceFile, InstancePair};
use crate::linalg::random::{gaussian_matrix, random_hermitian_direction, random_psd_with, substream, InstanceRng};
use crate::linalg::Field;
use crate::report::{CheckReport, InstanceDigest};
use crate::{Matrix, Psd};

/// Restarts evaluated per parallel batch. Fixed, so that the evaluation count
/// reported with a violation does not depend on the thread pool.
pub const RESTART_CHUNK: usize = 16;
/// Hill-climbing steps between line searches over the `q` grid.
pub const LINE_SEARCH_EVERY: usize = 100;
/// Samples folded per parallel batch in [`sweep_with`].
pub const SWEEP_CHUNK: usize = 256;

/// Inequality a hunt or sweep is aimed at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum HuntTarget {
    /// `σ_k(AB) ≤ σ_k(C(q)C(1−q))`, which is false in general.
    FalseVariant,
    Theorem2,
    Theorem1,
    SingularForm,
    AgmSingular,
}

impl HuntTarget {
    pub const ALL: [HuntTarget; 5] = [
        HuntTarget::FalseVariant,
        HuntTarget::Theorem2,
        HuntTarget::Theorem1,
        HuntTarget::SingularForm,
        HuntTarget::AgmSingular,
    ];

    pub fn name(self) -> &'static str {
        match self {
            HuntTarget::FalseVariant => FALSE_VARIANT,
            HuntTarget::Theorem2 => THEOREM2,
            HuntTarget::Theorem1 => THEOREM1,
            HuntTarget::SingularForm => SINGULAR_FORM,
            HuntTarget::AgmSingular => AGM_SINGULAR,
        }
    }

    /// Whether instances are factor pairs `(X, Y)` rather than PSD pairs.
    pub fn uses_factors(self) -> bool {
        matches!(self, HuntTarget::Theorem1 | HuntTarget::SingularForm | HuntTarget::AgmSingular)
    }

    pub fn uses_q(self) -> bool {
        self != HuntTarget::AgmSingular
    }
}

impl fmt::Display for HuntTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HuntTarget {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        HuntTarget::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = HuntTarget::ALL.iter().map(|t| t.name()).collect();
                Error::Parse(format!("unknown target {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

impl TryFrom<String> for HuntTarget {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<HuntTarget> for String {
    fn from(t: HuntTarget) -> String {
        t.name().to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldChoice {
    Real,
    Complex,
    Both,
}

impl FieldChoice {
    pub fn fields(self) -> Vec<Field> {
        match self {
            FieldChoice::Real => vec![Field::Real],
            FieldChoice::Complex => vec![Field::Complex],
            FieldChoice::Both => vec![Field::Real, Field::Complex],
        }
    }
}

impl FromStr for FieldChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(FieldChoice::Real),
            "complex" => Ok(FieldChoice::Complex),
            "both" => Ok(FieldChoice::Both),
            _ => Err(Error::Parse(format!("field must be real, complex or both, got {s:?}"))),
        }
    }
}

/// Which `k` a hunt minimizes over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum KPolicy {
    All,
    Fixed(usize),
}

impl KPolicy {
    fn admits(self, k: usize) -> bool {
        match self {
            KPolicy::All => true,
            KPolicy::Fixed(j) => j == k,
        }
    }
}

impl fmt::Display for KPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KPolicy::All => f.write_str("all"),
            KPolicy::Fixed(k) => write!(f, "{k}"),
        }
    }
}

impl FromStr for KPolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "all" {
            return Ok(KPolicy::All);
        }
        match s.parse::<usize>() {
            Ok(k) if k >= 1 => Ok(KPolicy::Fixed(k)),
            _ => Err(Error::Parse(format!("k policy must be \"all\" or a positive integer, got {s:?}"))),
        }
    }
}

impl TryFrom<String> for KPolicy {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<KPolicy> for String {
    fn from(k: KPolicy) -> String {
        k.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HuntConfig {
    pub target: HuntTarget,
    pub dims: Vec<usize>,
    pub field: FieldChoice,
    /// Ignored by targets without `q`.
    pub q_grid: Vec<f64>,
    pub k_policy: KPolicy,
    /// Gauges for norm targets.
    pub norms: Vec<GaugeSelector>,
    pub restarts: usize,
    pub steps_per_restart: usize,
    /// Perturbation size relative to the Frobenius norm of each matrix.
    pub step_scale: f64,
    pub seed: u64,
    pub violation_threshold: f64,
    /// Instances drawn by [`stress_sweep`].
    pub samples: usize,
    /// Comparison tolerance override; the checkers' default when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

/// `0, 0.1, …, 1`.
pub fn default_q_grid() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}

/// Default `q` grid of a target. The false variant is an identity at
/// `q ∈ {0, 1}` (`σ(BA) = σ(AB)`) and symmetric under `q ↔ 1−q`, so its
/// grid is `0.05, 0.1, …, 0.5`; searching the endpoints would only chase
/// roundoff.
pub fn target_q_grid(target: HuntTarget) -> Vec<f64> {
    match target {
        HuntTarget::FalseVariant => (1..=10).map(|i| i as f64 / 20.0).collect(),
        _ => default_q_grid(),
    }
}

impl HuntConfig {
    /// Default budget: 80 restarts of 1000 steps on `n ∈ {2, …, 6}`, both
    /// fields, which is just under 10⁵ evaluations with the default grid.
    pub fn new(target: HuntTarget) -> Self {
        Self {
            target,
            dims: (2..=6).collect(),
            field: FieldChoice::Both,
            q_grid: target_q_grid(target),
            k_policy: KPolicy::All,
            norms: vec![GaugeSelector::Grid],
            restarts: 80,
            steps_per_restart: 1000,
            step_scale: 0.3,
            seed: 0,
            violation_threshold: 1e-6,
            samples: 10_000,
            tol: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if self.restarts < 1 {
            return bad("restarts must be at least 1".into());
        }
        if self.steps_per_restart < 1 {
            return bad("steps_per_restart must be at least 1".into());
        }
        if !(self.step_scale > 0.0 && self.step_scale.is_finite()) {
            return bad(format!("step_scale must be positive, got {}", self.step_scale));
        }
        if !(self.violation_threshold > 0.0) {
            return bad(format!("violation_threshold must be positive, got {}", self.violation_threshold));
        }
        if self.dims.is_empty() || self.dims.contains(&0) {
            return bad("dims must be a non-empty set of positive integers".into());
        }
        if self.q_grid.is_empty() {
            return bad("q_grid must not be empty".into());
        }
        if let Some(q) = self.q_grid.iter().find(|q| !(0.0..=1.0).contains(*q)) {
            return bad(format!("q values must lie in [0, 1], got {q}"));
        }
        if let Some(t) = self.tol.filter(|t| !(*t >= 0.0 && t.is_finite())) {
            return bad(format!("tol must be finite and non-negative, got {t}"));
        }
        if self.target == HuntTarget::Theorem1 && self.norms.is_empty() {
            return bad("norm targets need at least one gauge".into());
        }
        Ok(())
    }

    fn q_values(&self) -> Vec<Option<f64>> {
        if self.target.uses_q() {
            self.q_grid.iter().copied().map(Some).collect()
        } else {
            vec![None]
        }
    }

    fn slot(&self, index: usize) -> (usize, Field) {
        let fields = self.field.fields();
        let n = self.dims[index % self.dims.len()];
        let field = fields[(index / self.dims.len()) % fields.len()];
        (n, field)
    }

    /// [`evaluate_all`] under this config's gauges, `k` policy and tolerance.
    pub fn evaluate(&self, pair: &InstancePair, q: Option<f64>) -> Result<Vec<CheckReport>> {
        let reports = evaluate_all(self.target, pair, q, self.k_policy, &self.norms)?;
        Ok(match self.tol {
            Some(t) => reports.into_iter().map(|r| r.with_tol(t)).collect(),
            None => reports,
        })
    }

    /// Evaluations the hunt performs when nothing is found.
    pub fn budget(&self) -> u64 {
        let qn = self.q_values().len() as u64;
        let per_restart = qn * (1 + (self.steps_per_restart / LINE_SEARCH_EVERY) as u64) + self.steps_per_restart as u64;
        per_restart * self.restarts as u64
    }
}

/// Every report of `target` on `pair` at `q`, restricted by `k_policy`.
pub fn evaluate_all(target: HuntTarget, pair: &InstancePair, q: Option<f64>, k_policy: KPolicy, norms: &[GaugeSelector]) -> Result<Vec<CheckReport>> {
    let q_val = || q.ok_or_else(|| Error::InvalidArgument(format!("{target} needs q")));
    let reports = match target {
        HuntTarget::FalseVariant | HuntTarget::Theorem2 => {
            let (a, b) = pair.psd_pair()?;
            if target == HuntTarget::FalseVariant {
                check_false_variant_all(&a, &b, q_val()?)?
            } else {
                check_theorem2_all(&a, &b, q_val()?)?
            }
        }
        HuntTarget::SingularForm => {
            let (x, y) = pair.factor_pair()?;
            check_singular_form_all(&x, &y, q_val()?)?
        }
        HuntTarget::AgmSingular => {
            let (x, y) = pair.factor_pair()?;
            check_agm_singular_all(&x, &y)?
        }
        HuntTarget::Theorem1 => {
            let (x, y) = pair.factor_pair()?;
            let n = x.cols();
            let mut phis: Vec<GaugeSpec> = norms.iter().flat_map(|s| s.expand(n)).collect();
            phis.dedup();
            return check_theorem1_grid(&x, &y, q_val()?, &phis);
        }
    };
    Ok(reports.into_iter().filter(|r| r.instance.k.is_none_or(|k| k_policy.admits(k))).collect())
}

/// The single report of `target` selected by `(q, k, phi)`.
pub fn evaluate_one(target: HuntTarget, pair: &InstancePair, q: Option<f64>, k: Option<usize>, phi: Option<&GaugeSpec>) -> Result<CheckReport> {
    let need_q = || q.ok_or_else(|| Error::InvalidArgument(format!("{target} needs q")));
    let need_k = || k.ok_or_else(|| Error::InvalidArgument(format!("{target} needs k")));
    match target {
        HuntTarget::FalseVariant => {
            let (a, b) = pair.psd_pair()?;
            check_false_variant(&a, &b, need_q()?, need_k()?)
        }
        HuntTarget::Theorem2 => {
            let (a, b) = pair.psd_pair()?;
            check_theorem2(&a, &b, need_q()?, need_k()?)
        }
        HuntTarget::SingularForm => {
            let (x, y) = pair.factor_pair()?;
            check_singular_form(&x, &y, need_q()?, need_k()?)
        }
        HuntTarget::AgmSingular => {
            let (x, y) = pair.factor_pair()?;
            check_agm_singular(&x, &y, need_k()?)
        }
        HuntTarget::Theorem1 => {
            let (x, y) = pair.factor_pair()?;
            let phi = phi.ok_or_else(|| Error::InvalidArgument("theorem1 needs a gauge".into()))?;
            check_theorem1(&x, &y, need_q()?, phi)
        }
    }
}

/// Worst report by relative margin; ties keep the first.
fn worst(reports: Vec<CheckReport>) -> Option<CheckReport> {
    reports.into_iter().reduce(|best, r| if r.relative_margin() < best.relative_margin() { r } else { best })
}

fn frob_rescale(pair: InstancePair) -> Option<InstancePair> {
    let scale = match &pair {
        InstancePair::Psd { a, b } => a.as_matrix().frobenius_norm().max(b.as_matrix().frobenius_norm()),
        InstancePair::Factors { x, y } => x.frobenius_norm().max(y.frobenius_norm()),
    };
    if !(scale > 0.0) || !scale.is_finite() {
        return None;
    }
    let s = 1.0 / scale;
    Some(match pair {
        InstancePair::Psd { a, b } => InstancePair::Psd {
            a: a.scale(s).ok()?,
            b: b.scale(s).ok()?,
        },
        InstancePair::Factors { x, y } => InstancePair::Factors { x: x.scale(s), y: y.scale(s) },
    })
}

/// Random instance of dimension `n` with the given ranks: Wishart PSD pairs,
/// or Gaussian factors whose last `n − rank` rows vanish.
pub fn random_pair(rng: &mut InstanceRng, factors: bool, n: usize, ranks: (usize, usize), field: Field) -> Result<InstancePair> {
    if ranks.0 == 0 || ranks.1 == 0 || ranks.0 > n || ranks.1 > n {
        return Err(Error::InvalidArgument(format!("need 1 <= rank <= n, got n = {n}, ranks = {ranks:?}")));
    }
    if factors {
        let mut factor = |r: usize| -> Matrix {
            let g = gaussian_matrix::<f64, _>(rng, r, n, field);
            let mut m = Matrix::zeros(n, n);
            for i in 0..r {
                for j in 0..n {
                    m[(i, j)] = g[(i, j)];
                }
            }
            m
        };
        let x = factor(ranks.0);
        let y = factor(ranks.1);
        Ok(InstancePair::Factors { x, y })
    } else {
        let a = random_psd_with(rng, n, ranks.0, field)?;
        let b = random_psd_with(rng, n, ranks.1, field)?;
        Ok(InstancePair::Psd { a, b })
    }
}

fn perturb(rng: &mut InstanceRng, pair: &InstancePair, field: Field, step: f64) -> Option<InstancePair> {
    let n = pair.dim();
    let next = match pair {
        InstancePair::Psd { a, b } => {
            let mut move_psd = |m: &Psd| -> Option<Psd> {
                let d = random_hermitian_direction::<f64, _>(rng, n, field);
                let h = m.as_matrix().add(&d.as_matrix().scale(step * m.as_matrix().frobenius_norm().max(f64::MIN_POSITIVE))).ok()?;
                Psd::clamp_from(&crate::Hermitian::symmetrize(h)).ok()
            };
            let a = move_psd(a)?;
            let b = move_psd(b)?;
            InstancePair::Psd { a, b }
        }
        InstancePair::Factors { x, y } => {
            let mut move_factor = |m: &Matrix| -> Option<Matrix> {
                let g = gaussian_matrix::<f64, _>(rng, n, n, field);
                let gn = g.frobenius_norm();
                (gn > 0.0).then(|| m.add(&g.scale(step * m.frobenius_norm().max(f64::MIN_POSITIVE) / gn)).ok())?
            };
            let x = move_factor(x)?;
            let y = move_factor(y)?;
            InstancePair::Factors { x, y }
        }
    };
    frob_rescale(next)
}

/// Where a violation came from: restart `restart` of the hunt seeded with
/// `seed`, after `step` accepted-or-rejected moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReproductionPath {
    pub seed: u64,
    pub restart: u64,
    pub step: u64,
}

#[derive(Debug, Clone)]
pub struct Violation {
    pub target: HuntTarget,
    pub pair: InstancePair,
    pub q: Option<f64>,
    pub k: Option<usize>,
    pub phi: Option<GaugeSpec>,
    pub report: CheckReport,
    pub path: ReproductionPath,
}

impl Violation {
    pub fn margin(&self) -> f64 {
        self.report.margin
    }

    pub fn field(&self) -> Field {
        self.pair.field()
    }

    pub fn instance_file(&self) -> InstanceFile {
        InstanceFile {
            pair: self.pair.clone(),
            q: self.q,
            k: self.k,
            phi: self.phi,
        }
    }

    /// Re-evaluates the target on the stored instance.
    pub fn recheck(&self) -> Result<CheckReport> {
        evaluate_one(self.target, &self.pair, self.q, self.k, self.phi.as_ref())
    }

    /// The instance file plus metadata; readable by [`Violation::from_json`]
    /// and as a plain [`InstanceFile`].
    pub fn to_json(&self) -> Value {
        let mut v = self.instance_file().to_json();
        let obj = v.as_object_mut().expect("instance files are objects");
        obj.insert("target".into(), self.target.name().into());
        obj.insert("field".into(), json!(self.field()));
        obj.insert("dim".into(), self.pair.dim().into());
        obj.insert("margin".into(), self.report.margin.into());
        obj.insert("lhs".into(), self.report.lhs.into());
        obj.insert("rhs".into(), self.report.rhs.into());
        obj.insert("reproduction".into(), json!(self.path));
        v
    }

    /// Parses a stored violation and re-evaluates it; the stored margin is
    /// not trusted.
    pub fn from_json(v: &Value) -> Result<Self> {
        let file = InstanceFile::from_json(v)?;
        let target: HuntTarget = v
            .get("target")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("violation needs a \"target\"".into()))?
            .parse()?;
        let path = match v.get("reproduction") {
            Some(p) => serde_json::from_value(p.clone())?,
            None => return Err(Error::Parse("violation needs a \"reproduction\" path".into())),
        };
        let report = evaluate_one(target, &file.pair, file.q, file.k, file.phi.as_ref())?;
        Ok(Self {
            target,
            pair: file.pair,
            q: file.q,
            k: file.k,
            phi: file.phi,
            report,
            path,
        })
    }
}

/// Search statistics, reported whether or not a violation was found.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HuntStats {
    pub evaluations: u64,
    pub restarts: u64,
    /// Smallest relative margin seen (`margin / max(1, |rhs|)`).
    pub min_margin: f64,
    pub argmin: InstanceDigest,
}

#[derive(Debug, Clone)]
pub enum HuntOutcome {
    Found { violation: Box<Violation>, stats: HuntStats },
    NotFound(HuntStats),
}

impl HuntOutcome {
    pub fn stats(&self) -> &HuntStats {
        match self {
            HuntOutcome::Found { stats, .. } | HuntOutcome::NotFound(stats) => stats,
        }
    }

    pub fn violation(&self) -> Option<&Violation> {
        match self {
            HuntOutcome::Found { violation, .. } => Some(violation),
            HuntOutcome::NotFound(_) => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            HuntOutcome::Found { violation, stats } => json!({
                "outcome": "violation",
                "violation": violation.to_json(),
                "stats": stats,
            }),
            HuntOutcome::NotFound(stats) => json!({"outcome": "not-found", "stats": stats}),
        }
    }
}

struct Scored {
    q: Option<f64>,
    report: CheckReport,
}

impl Scored {
    fn rel(&self) -> f64 {
        self.report.relative_margin()
    }
}

struct RestartResult {
    evaluations: u64,
    best: Option<(Scored, InstancePair)>,
    found: Option<Violation>,
}

fn is_violation(report: &CheckReport, threshold: f64) -> bool {
    !report.holds && report.margin < -threshold
}

fn run_restart(cfg: &HuntConfig, restart: usize) -> RestartResult {
    let mut rng = substream(cfg.seed, restart as u64);
    let (n, field) = cfg.slot(restart);
    let qs = cfg.q_values();
    let mut evaluations = 0u64;

    let score = |pair: &InstancePair, q: Option<f64>, evaluations: &mut u64| -> Option<Scored> {
        *evaluations += 1;
        let reports = cfg.evaluate(pair, q).ok()?;
        worst(reports).map(|report| Scored { q, report })
    };
    let line_search = |pair: &InstancePair, evaluations: &mut u64| -> Option<Scored> {
        qs.iter()
            .filter_map(|&q| score(pair, q, evaluations))
            .reduce(|best, s| if s.rel() < best.rel() { s } else { best })
    };

    let start = random_pair(&mut rng, cfg.target.uses_factors(), n, (n, n), field).ok().and_then(frob_rescale);
    let Some(mut current) = start else {
        return RestartResult { evaluations, best: None, found: None };
    };
    let Some(mut best) = line_search(&current, &mut evaluations) else {
        return RestartResult { evaluations, best: None, found: None };
    };

    let found = |best: &Scored, pair: &InstancePair, step: usize| -> Option<Violation> {
        is_violation(&best.report, cfg.violation_threshold).then(|| Violation {
            target: cfg.target,
            pair: pair.clone(),
            q: best.q,
            k: best.report.instance.k,
            phi: best.report.instance.phi.as_deref().and_then(|p| p.parse().ok()),
            report: best.report.clone(),
            path: ReproductionPath {
                seed: cfg.seed,
                restart: restart as u64,
                step: step as u64,
            },
        })
    };

    if let Some(v) = found(&best, &current, 0) {
        return RestartResult { evaluations, best: Some((best, current)), found: Some(v) };
    }
    for step in 1..=cfg.steps_per_restart {
        if let Some(candidate) = perturb(&mut rng, &current, field, cfg.step_scale) {
            if let Some(s) = score(&candidate, best.q, &mut evaluations) {
                if s.rel() < best.rel() {
                    current = candidate;
                    best = s;
                }
            }
        }
        if step % LINE_SEARCH_EVERY == 0 {
            if let Some(s) = line_search(&current, &mut evaluations) {
                if s.rel() < best.rel() {
                    best = s;
                }
            }
        }
        if let Some(v) = found(&best, &current, step) {
            return RestartResult { evaluations, best: Some((best, current)), found: Some(v) };
        }
    }
    RestartResult { evaluations, best: Some((best, current)), found: None }
}

/// Hill-climbing search for a violation of `cfg.target`. Returns the
/// violation of the lowest-index restart that found one.
pub fn hunt_counterexample(cfg: &HuntConfig) -> Result<HuntOutcome> {
    cfg.validate()?;
    let mut stats = HuntStats {
        evaluations: 0,
        restarts: 0,
        min_margin: f64::INFINITY,
        argmin: InstanceDigest::default(),
    };
    for chunk_start in (0..cfg.restarts).step_by(RESTART_CHUNK) {
        let chunk_end = (chunk_start + RESTART_CHUNK).min(cfg.restarts);
        let results: Vec<RestartResult> = (chunk_start..chunk_end).into_par_iter().map(|i| run_restart(cfg, i)).collect();
        let mut first_found = None;
        for (offset, r) in results.into_iter().enumerate() {
            let restart = chunk_start + offset;
            stats.evaluations += r.evaluations;
            stats.restarts += 1;
            if let Some((best, pair)) = &r.best {
                if best.rel() < stats.min_margin {
                    stats.min_margin = best.rel();
                    stats.argmin = InstanceDigest {
                        seed: Some(cfg.seed),
                        index: Some(restart as u64),
                        dim: Some(pair.dim()),
                        field: Some(pair.field()),
                        ..best.report.instance.clone()
                    };
                }
            }
            if first_found.is_none() {
                first_found = r.found;
            }
        }
        if let Some(v) = first_found {
            return Ok(HuntOutcome::Found { violation: Box::new(v), stats });
        }
    }
    Ok(HuntOutcome::NotFound(stats))
}

/// One randomly drawn instance of a sweep and its reports.
#[derive(Debug, Clone)]
pub struct SweepSample {
    pub index: u64,
    pub dim: usize,
    pub field: Field,
    pub rank_a: usize,
    pub rank_b: usize,
    pub pair: InstancePair,
    pub reports: Vec<CheckReport>,
}

/// Instance `index` of a sweep: dimension and field cycle through the
/// config, each rank is full with probability 1/2 and uniform otherwise.
pub fn sweep_sample(cfg: &HuntConfig, index: u64) -> Result<SweepSample> {
    let mut rng = substream(cfg.seed, index);
    let (n, field) = cfg.slot(index as usize);
    let rank = |rng: &mut InstanceRng| if rng.random_bool(0.5) { n } else { rng.random_range(1..=n) };
    let rank_a = rank(&mut rng);
    let rank_b = rank(&mut rng);
    let pair = random_pair(&mut rng, cfg.target.uses_factors(), n, (rank_a, rank_b), field)?;
    let mut reports = Vec::new();
    for q in cfg.q_values() {
        for mut r in cfg.evaluate(&pair, q)? {
            r.instance = InstanceDigest {
                seed: Some(cfg.seed),
                index: Some(index),
                field: Some(field),
                rank_a: Some(rank_a),
                rank_b: Some(rank_b),
                ..r.instance
            };
            reports.push(r);
        }
    }
    Ok(SweepSample {
        index,
        dim: n,
        field,
        rank_a,
        rank_b,
        pair,
        reports,
    })
}

/// Margin statistics of one `(dim, q, k | phi)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<String>,
    pub count: usize,
    /// Relative margins, as in [`CheckReport::relative_margin`].
    pub min_margin: f64,
    pub median_margin: f64,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub target: HuntTarget,
    pub samples: usize,
    pub reports: usize,
    pub failures: usize,
    pub min_margin: f64,
    pub argmin: InstanceDigest,
    pub cells: Vec<SweepCell>,
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct CellKey {
    dim: usize,
    q_bits: Option<u64>,
    k: Option<usize>,
    phi: Option<String>,
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Random sampling over the config (no hill-climbing). `sink` sees every
/// sample in index order.
pub fn sweep_with(cfg: &HuntConfig, mut sink: impl FnMut(&SweepSample)) -> Result<SweepSummary> {
    cfg.validate()?;
    let mut cells: BTreeMap<CellKey, (Option<f64>, Vec<f64>, usize)> = BTreeMap::new();
    let mut summary = SweepSummary {
        target: cfg.target,
        samples: cfg.samples,
        reports: 0,
        failures: 0,
        min_margin: f64::INFINITY,
        argmin: InstanceDigest::default(),
        cells: Vec::new(),
    };
    for chunk_start in (0..cfg.samples).step_by(SWEEP_CHUNK) {
        let chunk_end = (chunk_start + SWEEP_CHUNK).min(cfg.samples);
        let samples: Vec<SweepSample> = (chunk_start..chunk_end)
            .into_par_iter()
            .map(|i| sweep_sample(cfg, i as u64))
            .collect::<Result<_>>()?;
        for s in &samples {
            sink(s);
            for r in &s.reports {
                let rel = r.relative_margin();
                summary.reports += 1;
                if !r.holds {
                    summary.failures += 1;
                }
                if rel < summary.min_margin {
                    summary.min_margin = rel;
                    summary.argmin = InstanceDigest { dim: Some(s.dim), ..r.instance.clone() };
                }
                let key = CellKey {
                    dim: s.dim,
                    q_bits: r.instance.q.map(f64::to_bits),
                    k: r.instance.k,
                    phi: r.instance.phi.clone(),
                };
                let cell = cells.entry(key).or_insert_with(|| (r.instance.q, Vec::new(), 0));
                cell.1.push(rel);
                cell.2 += usize::from(!r.holds);
            }
        }
    }
    summary.cells = cells
        .into_iter()
        .map(|(key, (q, mut margins, failures))| SweepCell {
            dim: key.dim,
            q,
            k: key.k,
            phi: key.phi,
            count: margins.len(),
            min_margin: margins.iter().copied().fold(f64::INFINITY, f64::min),
            median_margin: median(&mut margins),
            failures,
        })
        .collect();
    // Order cells by q numerically rather than by bit pattern.
    summary
        .cells
        .sort_by(|a, b| (a.dim, a.q.unwrap_or(-1.0), a.k, &a.phi).partial_cmp(&(b.dim, b.q.unwrap_or(-1.0), b.k, &b.phi)).expect("finite q"));
    Ok(summary)
}

/// [`sweep_with`] without a per-sample sink.
pub fn stress_sweep(cfg: &HuntConfig) -> Result<SweepSummary> {
    sweep_with(cfg, |_| {})
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(target: HuntTarget) -> HuntConfig {
        HuntConfig {
            restarts: 4,
            steps_per_restart: 30,
            samples: 40,
            ..HuntConfig::new(target)
        }
    }

    #[test]
    fn config_validation() {
        let ok = HuntConfig::new(HuntTarget::Theorem2);
        assert!(ok.validate().is_ok());
        for bad in [
            HuntConfig { restarts: 0, ..ok.clone() },
            HuntConfig { steps_per_restart: 0, ..ok.clone() },
            HuntConfig { step_scale: 0.0, ..ok.clone() },
            HuntConfig { violation_threshold: 0.0, ..ok.clone() },
            HuntConfig { q_grid: vec![], ..ok.clone() },
            HuntConfig { q_grid: vec![1.5], ..ok.clone() },
            HuntConfig { dims: vec![], ..ok.clone() },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
        assert!(stress_sweep(&HuntConfig { q_grid: vec![], ..ok }).is_err());
    }

    #[test]
    fn default_budget_is_below_1e5() {
        let cfg = HuntConfig::new(HuntTarget::FalseVariant);
        assert!(cfg.budget() <= 100_000, "{}", cfg.budget());
        assert!(cfg.budget() >= 50_000);
    }

    #[test]
    fn names_round_trip() {
        for t in HuntTarget::ALL {
            assert_eq!(t.name().parse::<HuntTarget>().unwrap(), t);
        }
        assert!("nope".parse::<HuntTarget>().is_err());
        assert_eq!("3".parse::<KPolicy>().unwrap(), KPolicy::Fixed(3));
        assert!("0".parse::<KPolicy>().is_err());
        let cfg = HuntConfig::new(HuntTarget::Theorem1);
        let back: HuntConfig = serde_json::from_value(serde_json::to_value(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn scalars_never_violate() {
        for t in HuntTarget::ALL {
            let cfg = HuntConfig { dims: vec![1], ..small(t) };
            let out = hunt_counterexample(&cfg).unwrap();
            assert!(out.violation().is_none(), "{t}");
            assert!(out.stats().min_margin >= -1e-12, "{t}: {}", out.stats().min_margin);
        }
    }

    #[test]
    fn hunt_is_deterministic() {
        let cfg = small(HuntTarget::Theorem2);
        let a = hunt_counterexample(&cfg).unwrap().to_json();
        let b = hunt_counterexample(&cfg).unwrap().to_json();
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = pool.install(|| hunt_counterexample(&cfg)).unwrap().to_json();
        assert_eq!(a, c);
    }

    #[test]
    fn sweep_cells_and_determinism() {
        let cfg = HuntConfig {
            dims: vec![2, 3],
            q_grid: vec![0.0, 0.5],
            ..small(HuntTarget::Theorem2)
        };
        let s = stress_sweep(&cfg).unwrap();
        // (2 + 3 values of k) × 2 q values
        assert_eq!(s.cells.len(), 10);
        assert_eq!(s.reports, 20 * 2 * 2 + 20 * 3 * 2);
        assert!(s.min_margin >= -1e-9);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        assert_eq!(pool.install(|| stress_sweep(&cfg)).unwrap(), s);
    }

    #[test]
    fn violation_json_round_trip() {
        let a = Psd::from_diag(&[1.0, 0.0]).unwrap();
        let b = Psd::from_diag(&[0.0, 1.0]).unwrap();
        let pair = InstancePair::Psd { a, b };
        let report = evaluate_one(HuntTarget::Theorem2, &pair, Some(0.3), Some(1), None).unwrap();
        let v = Violation {
            target: HuntTarget::Theorem2,
            pair,
            q: Some(0.3),
            k: Some(1),
            phi: None,
            report,
            path: ReproductionPath { seed: 1, restart: 2, step: 3 },
        };
        let back = Violation::from_json(&v.to_json()).unwrap();
        assert_eq!(back.report, v.report);
        assert_eq!(back.path, v.path);
        assert_eq!(back.to_json(), v.to_json());
    }

    #[test]
    fn perturbation_stays_psd_and_normalized() {
        let mut rng = substream(3, 0);
        let pair = random_pair(&mut rng, false, 4, (4, 2), Field::Complex).unwrap();
        let mut cur = frob_rescale(pair).unwrap();
        for _ in 0..20 {
            cur = perturb(&mut rng, &cur, Field::Complex, 0.3).unwrap();
            let (a, b) = cur.psd_pair().unwrap();
            assert!(a.spectrum().min() >= -1e-12);
            let top = a.as_matrix().frobenius_norm().max(b.as_matrix().frobenius_norm());
            assert!((top - 1.0).abs() < 1e-12);
        }
    }
}
