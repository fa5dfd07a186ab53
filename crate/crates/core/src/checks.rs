//! One checker per inequality, each returning an auditable [`CheckReport`].
//!
//! Eigenvalue-form checks take PSD pairs `(A, B)`; norm and singular-value
//! forms take matrix pairs `(X, Y)` of equal shape and work with
//! `A = X*X`, `B = Y*Y`.

use crate::error::{Error, Result};
use crate::gauge::{gauge_eval, ui_norm, weak_majorize, GaugeSpec};
use crate::linalg::{eigvals_of_product, singular_values, ComplexMatrix, PsdMatrix, Spectrum};
use crate::report::{CheckReport, InstanceDigest};
use crate::scalar::Real;

pub const THEOREM2: &str = "theorem2";
pub const SINGULAR_FORM: &str = "singular-form";
pub const AGM_SINGULAR: &str = "agm-singular";
pub const THEOREM1: &str = "theorem1";
pub const CAUCHY_SCHWARZ: &str = "cauchy-schwarz";
pub const AGM: &str = "agm";
pub const WEYL_MAJORANT: &str = "weyl-majorant";
pub const SV_PRODUCT: &str = "sv-product-majorization";
pub const EIG_PRODUCT: &str = "eig-product-majorization";
pub const HOLDER_NORM: &str = "holder-norm-form";
pub const FALSE_VARIANT: &str = "false-variant";

fn default_tol<T: Real>() -> f64 {
    T::tolerances().compare
}

fn check_q(q: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidArgument(format!("q must lie in [0, 1], got {q}")));
    }
    Ok(())
}

fn check_k(k: usize, len: usize) -> Result<()> {
    if k == 0 || k > len {
        return Err(Error::IndexOutOfRange { index: k, len });
    }
    Ok(())
}

fn check_r(r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("r must be positive, got {r}")));
    }
    Ok(())
}

fn digest(dim: usize, q: Option<f64>, k: Option<usize>) -> InstanceDigest {
    InstanceDigest {
        dim: Some(dim),
        q,
        k,
        ..Default::default()
    }
}

/// `C(q) = qA + (1−q)B`.
pub fn cq_mix<T: Real>(a: &PsdMatrix<T>, b: &PsdMatrix<T>, q: f64) -> Result<PsdMatrix<T>> {
    a.ensure_same_dim(b)?;
    check_q(q)?;
    let q = T::lit(q);
    PsdMatrix::from_product(a.as_matrix().lincomb(q, b.as_matrix(), T::one() - q)?)
}

/// `X*X`.
pub fn gram<T: Real>(x: &ComplexMatrix<T>) -> Result<PsdMatrix<T>> {
    PsdMatrix::from_product(x.adjoint().mul(x))
}

fn gram_pair<T: Real>(x: &ComplexMatrix<T>, y: &ComplexMatrix<T>) -> Result<(PsdMatrix<T>, PsdMatrix<T>)> {
    x.ensure_same_shape(y)?;
    Ok((gram(x)?, gram(y)?))
}

/// `λ(C(q) C(1−q))` through the Hermitian-safe route.
fn mixed_product_spectrum<T: Real>(a: &PsdMatrix<T>, b: &PsdMatrix<T>, q: f64) -> Result<Spectrum<T>> {
    let c = cq_mix(a, b, q)?;
    let c_bar = cq_mix(a, b, 1.0 - q)?;
    eigvals_of_product(&c, &c_bar)
}

/// `λ_k(AB) ≤ λ_k(C(q)C(1−q))` for every `k`, one report per `k`.
pub fn check_theorem2_all<T: Real>(a: &PsdMatrix<T>, b: &PsdMatrix<T>, q: f64) -> Result<Vec<CheckReport>> {
    check_q(q)?;
    let lhs = eigvals_of_product(a, b)?;
    let rhs = mixed_product_spectrum(a, b, q)?;
    Ok((1..=a.dim())
        .map(|k| {
            CheckReport::evaluate(THEOREM2, lhs.values()[k - 1].as_f64(), rhs.values()[k - 1].as_f64(), default_tol::<T>())
                .with_instance(digest(a.dim(), Some(q), Some(k)))
        })
        .collect())
}

/// `λ_k(AB) ≤ λ_k(C(q)C(1−q))`.
pub fn check_theorem2<T: Real>(a: &PsdMatrix<T>, b: &PsdMatrix<T>, q: f64, k: usize) -> Result<CheckReport> {
    a.ensure_same_dim(b)?;
    check_k(k, a.dim())?;
    Ok(check_theorem2_all(a, b, q)?.swap_remove(k - 1))
}

/// `σ_k²(XY*) ≤ λ_k((qX*X + (1−q)Y*Y)((1−q)X*X + qY*Y))` for every `k`.
pub fn check_singular_form_all<T: Real>(x: &ComplexMatrix<T>, y: &ComplexMatrix<T>, q: f64) -> Result<Vec<CheckReport>> {
    check_q(q)?;
    let (a, b) = gram_pair(x, y)?;
    let sv = singular_values(&x.matmul(&y.adjoint())?)?;
    let rhs = mixed_product_spectrum(&a, &b, q)?;
    let n = sv.len().min(rhs.len());
    Ok((1..=n)
        .map(|k| {
            let s = sv.values()[k - 1];
            CheckReport::evaluate(SINGULAR_FORM, (s * s).as_f64(), rhs.values()[k - 1].as_f64(), default_tol::<T>())
                .with_instance(digest(x.rows(), Some(q), Some(k)))
        })
        .collect())
}

pub fn check_singular_form<T: Real>(x: &ComplexMatrix<T>, y: &ComplexMatrix<T>, q: f64, k: usize) -> Result<CheckReport> {
    x.ensure_same_shape(y)?;
    check_k(k, x.rows().min(x.cols()))?;
    Ok(check_singular_form_all(x, y, q)?.swap_remove(k - 1))
}

/// `σ_k(XY*) ≤ ½ σ_k(X*X + Y*Y)` for every `k`.
pub fn check_agm_singular_all<T: Real>(x: &ComplexMatrix<T>, y: &ComplexMatrix<T>) -> Result<Vec<CheckReport>> {
    let (a, b) = gram_pair(x, y)?;
    let sv = singular_values(&x.matmul(&y.adjoint())?)?;
    let sum = PsdMatrix::from_product(a.as_matrix().add(b.as_matrix())?)?;
    let half = T::lit(0.5);
    let rhs: Vec<T> = sum.spectrum().values().iter().map(|&l| half * l.max(T::zero())).collect();
    let n = sv.len().min(rhs.len());
    Ok((1..=n)
        .map(|k| {
            CheckReport::evaluate(AGM_SINGULAR, sv.values()[k - 1].as_f64(), rhs[k - 1].as_f64(), default_tol::<T>())
                .with_instance(digest(x.rows(), None, Some(k)))
        })
        .collect())
}

pub fn check_agm_singular<T: Real>(x: &ComplexMatrix<T>, y: &ComplexMatrix<T>, k: usize) -> Result<CheckReport> {
    x.ensure_same_shape(y)?;
    check_k(k, x.rows().min(x.cols()))?;
    Ok(check_agm_singular_all(x, y)?.swap_remove(k - 1))
}

/// Report name for the interpolating norm inequality, annotated at the
/// classical endpoints.
pub fn theorem1_name(q: f64) -> String {
    if q == 0.0 || q == 1.0 {
        format!("{THEOREM1} (cauchy-schwarz endpoint)")
    } else if q == 0.5 {
        format!("{THEOREM1} (agm endpoint)")
    } else {
        THEOREM1.to_string()
    }
}

/// `|||XY*|||² ≤ |||qX*X + (1−q)Y*Y||| · |||(1−q)X*X + qY*Y|||`.
pub fn check_theorem1<T: Real>(x: &ComplexMatrix<T>, y: &ComplexMatrix<T>, q: f64, phi: &GaugeSpec) -> Result<CheckReport> {
    Ok(check_theorem1_grid(x, y, q, std::slice::from_ref(phi))?.swap_remove(0))
}

/// [`check_theorem1`] for several gauges, sharing the spectra.
pub fn check_theorem1_grid<T: Real>(x: &ComplexMatrix<T>, y: &ComplexMatrix<T>, q: f64, phis: &[GaugeSpec]) -> Result<Vec<CheckReport>> {
    check_q(q)?;
    let (a, b) = gram_pair(x, y)?;
    let sv = singular_values(&x.matmul(&y.adjoint())?)?;
    let c = cq_mix(&a, &b, q)?;
    let c_bar = cq_mix(&a, &b, 1.0 - q)?;
    let name = theorem1_name(q);
    phis.iter()
        .map(|phi| {
            let n = gauge_eval(phi, sv.values())?;
            let rhs = gauge_eval(phi, c.spectrum().values())? * gauge_eval(phi, c_bar.spectrum().values())?;
            Ok(CheckReport::evaluate(name.clone(), (n * n).as_f64(), rhs.as_f64(), default_tol::<T>()).with_instance(InstanceDigest {
                phi: Some(phi.to_string()),
                ..digest(x.rows(), Some(q), None)
            }))
        })
        .collect()
}

/// Classical Cauchy-Schwarz form `|||XY*|||² ≤ |||X*X||| · |||Y*Y|||`.
pub fn cauchy_schwarz_classical<T: Real>(x: &ComplexMatrix<T>, y: &ComplexMatrix<T>, phi: &GaugeSpec) -> Result<CheckReport> {
    let (a, b) = gram_pair(x, y)?;
    let lhs = ui_norm(phi, &x.matmul(&y.adjoint())?)?;
    let rhs = ui_norm(phi, a.as_matrix())? * ui_norm(phi, b.as_matrix())?;
    Ok(CheckReport::evaluate(CAUCHY_SCHWARZ, (lhs * lhs).as_f64(), rhs.as_f64(), default_tol::<T>()).with_instance(InstanceDigest {
        phi: Some(phi.to_string()),
        ..digest(x.rows(), None, None)
    }))
}

/// Classical arithmetic-geometric mean form `|||XY*||| ≤ ½|||X*X + Y*Y|||`.
pub fn agm_classical<T: Real>(x: &ComplexMatrix<T>, y: &ComplexMatrix<T>, phi: &GaugeSpec) -> Result<CheckReport> {
    let (a, b) = gram_pair(x, y)?;
    let lhs = ui_norm(phi, &x.matmul(&y.adjoint())?)?;
    let rhs = T::lit(0.5) * ui_norm(phi, &a.as_matrix().add(b.as_matrix())?)?;
    Ok(CheckReport::evaluate(AGM, lhs.as_f64(), rhs.as_f64(), default_tol::<T>()).with_instance(InstanceDigest {
        phi: Some(phi.to_string()),
        ..digest(x.rows(), None, None)
    }))
}

fn pow_vec<T: Real>(v: &[T], r: f64) -> Vec<T> {
    let r = T::lit(r);
    v.iter().map(|&x| x.abs().powf(r)).collect()
}

/// `x ≺_w y` as a report: lhs/rhs are the prefix sums at the worst prefix,
/// margin is the worst gap.
pub fn majorization_report<T: Real>(name: &str, x: &[T], y: &[T]) -> CheckReport {
    let tol = default_tol::<T>();
    let v = weak_majorize(x, y, T::lit(tol));
    let mut report = CheckReport::evaluate(name, v.lhs_prefix_sum.as_f64(), v.rhs_prefix_sum.as_f64(), tol);
    report.instance.k = Some(v.prefix_index);
    report
}

/// Weyl's majorant `|λ(AB)|^r ≺_w σ^r(AB)`, `σ(AB)` from the literal product.
pub fn check_weyl_majorant<T: Real>(a: &PsdMatrix<T>, b: &PsdMatrix<T>, r: f64) -> Result<CheckReport> {
    check_r(r)?;
    let lam = eigvals_of_product(a, b)?;
    let sv = singular_values(&a.as_matrix().matmul(b.as_matrix())?)?;
    let mut report = majorization_report(WEYL_MAJORANT, &pow_vec(lam.values(), r), &pow_vec(sv.values(), r));
    report.instance.dim = Some(a.dim());
    report.instance.r = Some(r);
    Ok(report)
}

/// `σ^r(AB) ≺_w σ^r(A)·σ^r(B)`.
pub fn check_sv_product_majorization<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>, r: f64) -> Result<CheckReport> {
    check_r(r)?;
    let ab = a.matmul(b)?;
    let sa = singular_values(a)?;
    let sb = singular_values(b)?;
    let n = sa.len().min(sb.len());
    let y: Vec<T> = (0..n).map(|i| (sa.values()[i] * sb.values()[i]).powf(T::lit(r))).collect();
    let mut report = majorization_report(SV_PRODUCT, &pow_vec(singular_values(&ab)?.values(), r), &y);
    report.instance.dim = Some(a.rows());
    report.instance.r = Some(r);
    Ok(report)
}

/// `λ^r(AB) ≺_w λ^r(A)·λ^r(B)` for PSD `A`, `B`.
pub fn check_eig_product_majorization<T: Real>(a: &PsdMatrix<T>, b: &PsdMatrix<T>, r: f64) -> Result<CheckReport> {
    check_r(r)?;
    let lam = eigvals_of_product(a, b)?;
    let y: Vec<T> = a
        .spectrum()
        .powf(T::lit(r))
        .into_iter()
        .zip(b.spectrum().powf(T::lit(r)))
        .map(|(u, v)| u * v)
        .collect();
    let mut report = majorization_report(EIG_PRODUCT, &pow_vec(lam.values(), r), &y);
    report.instance.dim = Some(a.dim());
    report.instance.r = Some(r);
    Ok(report)
}

/// The weak-majorization chain leading from the eigenvalue inequality to
/// the norm inequality:
///
/// * (a) `σ^{2r}(XY*) ≺_w λ^r(C(q)C(1−q))`
/// * (b) `λ^r(C(q)C(1−q)) ≺_w λ^r(C(q))·λ^r(C(1−q))`
/// * (c) `σ^{2r}(XY*) ≺_w λ^r(C(q))·λ^r(C(1−q))`
///
/// with `C(q) = qX*X + (1−q)Y*Y`.
pub fn check_majorization_chain<T: Real>(x: &ComplexMatrix<T>, y: &ComplexMatrix<T>, q: f64, r: f64) -> Result<Vec<CheckReport>> {
    check_q(q)?;
    check_r(r)?;
    let (a, b) = gram_pair(x, y)?;
    let c = cq_mix(&a, &b, q)?;
    let c_bar = cq_mix(&a, &b, 1.0 - q)?;
    let sv2r = pow_vec(singular_values(&x.matmul(&y.adjoint())?)?.values(), 2.0 * r);
    let mixed = pow_vec(eigvals_of_product(&c, &c_bar)?.values(), r);
    let product: Vec<T> = c
        .spectrum()
        .powf(T::lit(r))
        .into_iter()
        .zip(c_bar.spectrum().powf(T::lit(r)))
        .map(|(u, v)| u * v)
        .collect();
    let links = [
        ("chain (a) singular form lifted", &sv2r, &mixed),
        ("chain (b) product of spectra", &mixed, &product),
        ("chain (c) combined", &sv2r, &product),
    ];
    Ok(links
        .into_iter()
        .map(|(name, lhs, rhs)| {
            let mut report = majorization_report(name, lhs, rhs);
            report.instance.dim = Some(x.rows());
            report.instance.q = Some(q);
            report.instance.r = Some(r);
            report
        })
        .collect())
}

/// `Φ(σ^{2r}(XY*)) ≤ Φ(λ^{rp}(C(q)))^{1/p} · Φ(λ^{rp'}(C(1−q)))^{1/p'}`.
/// At `r = 1/2`, `p = 2` this is the interpolating norm inequality.
pub fn check_holder_norm_form<T: Real>(
    x: &ComplexMatrix<T>,
    y: &ComplexMatrix<T>,
    q: f64,
    r: f64,
    p: f64,
    phi: &GaugeSpec,
) -> Result<CheckReport> {
    check_q(q)?;
    check_r(r)?;
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::InvalidArgument(format!("Hölder exponent must be finite and > 1, got {p}")));
    }
    let pc = p / (p - 1.0);
    let (a, b) = gram_pair(x, y)?;
    let c = cq_mix(&a, &b, q)?;
    let c_bar = cq_mix(&a, &b, 1.0 - q)?;
    let lhs = gauge_eval(phi, &pow_vec(singular_values(&x.matmul(&y.adjoint())?)?.values(), 2.0 * r))?;
    let f1 = gauge_eval(phi, &c.spectrum().powf(T::lit(r * p)))?.powf(T::lit(1.0 / p));
    let f2 = gauge_eval(phi, &c_bar.spectrum().powf(T::lit(r * pc)))?.powf(T::lit(1.0 / pc));
    Ok(CheckReport::evaluate(HOLDER_NORM, lhs.as_f64(), (f1 * f2).as_f64(), default_tol::<T>()).with_instance(InstanceDigest {
        r: Some(r),
        p: Some(p),
        phi: Some(phi.to_string()),
        ..digest(x.rows(), Some(q), None)
    }))
}

/// `σ_k(AB) ≤ σ_k(C(q)C(1−q))` for every `k`. This variant is false in
/// general; reports with `holds = false` are measurements, not errors.
pub fn check_false_variant_all<T: Real>(a: &PsdMatrix<T>, b: &PsdMatrix<T>, q: f64) -> Result<Vec<CheckReport>> {
    check_q(q)?;
    a.ensure_same_dim(b)?;
    let lhs = singular_values(&a.as_matrix().mul(b.as_matrix()))?;
    let c = cq_mix(a, b, q)?;
    let c_bar = cq_mix(a, b, 1.0 - q)?;
    let rhs = singular_values(&c.as_matrix().mul(c_bar.as_matrix()))?;
    Ok((1..=a.dim())
        .map(|k| {
            CheckReport::evaluate(FALSE_VARIANT, lhs.values()[k - 1].as_f64(), rhs.values()[k - 1].as_f64(), default_tol::<T>())
                .with_instance(digest(a.dim(), Some(q), Some(k)))
        })
        .collect())
}

pub fn check_false_variant<T: Real>(a: &PsdMatrix<T>, b: &PsdMatrix<T>, q: f64, k: usize) -> Result<CheckReport> {
    a.ensure_same_dim(b)?;
    check_k(k, a.dim())?;
    Ok(check_false_variant_all(a, b, q)?.swap_remove(k - 1))
}
