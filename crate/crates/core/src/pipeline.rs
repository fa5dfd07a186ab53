//! Step-by-step numerical execution of the reduction proving
//! `λ_k(AB) ≤ λ_k(C(q)C(1−q))`.
//!
//! The chain, for fixed `k`:
//!
//! 1. scale `(A, B)` so that `λ_k(AB) = 1`;
//! 2. take the spectral projector `P` onto the top-`k` eigenvectors of
//!    `M = A^{1/2} B A^{1/2}`, so `P ≤ M`;
//! 3. build `B′ ≤ B` of rank `k` with `A^{1/2} B′ A^{1/2} = P`;
//! 4. in an eigenbasis of `B′`, `B′ = B₁₁ ⊕ 0` and `B₁₁ = A₁₁⁻¹`;
//! 5. replace `A` by `A′ ≤ A`, whose Schur complement vanishes;
//! 6. with `F = A₁₁`, `G = A₁₂A₁₂*`, `s = (1−q)/q`, factor
//!    `C″(q)C″(1−q)` through the `2k × 2k` matrices `Z`, `X`, `Y`, `K`;
//! 7. bound `λ_k(Y)` from below by `s^{1/2} + s^{−1/2}`, which gives
//!    `λ_k(C″(q)C″(1−q)) ≥ q(1−q)(s^{1/2} + s^{−1/2})² = 1`.
//!
//! Every step records named residuals against fixed gates.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::checks::cq_mix;
use crate::error::{Error, Result};
use crate::linalg::{
    eigvals_of_product, loewner_leq, Eigen, psd_inv_sqrt, psd_sqrt, pseudo_inverse, singular_values, ComplexMatrix, HermitianMatrix, PsdMatrix,
    Spectrum, SpectrumKind,
};
use crate::report::{CheckReport, InstanceDigest};
use crate::scalar::{unit_floor, Real};
use crate::tol::Tolerances;

/// Gate for `|λ_k(scaled AB) − 1|`.
pub const NORMALIZE_GATE: f64 = 1e-10;
/// Projector idempotency, self-adjointness and `P ≤ M`.
pub const PROJECTOR_GATE: f64 = 1e-9;
/// `A^{1/2}B′A^{1/2} = P`, spectrum of `AB′`, `B′ ≤ B`.
pub const BPRIME_GATE: f64 = 1e-8;
/// Relative gate for `B₁₁ = A₁₁⁻¹`.
pub const BLOCK_INVERSE_GATE: f64 = 1e-7;
/// Block structure of `B′` and the identity block of `R`.
pub const BLOCK_GATE: f64 = 1e-8;
/// `0 ≤ A′ ≤ A`.
pub const APRIME_GATE: f64 = 1e-9;
/// `σ(Z) = σ(X)`, `K ≥ I`, closed-form `λ(Y)`.
pub const ZXY_GATE: f64 = 1e-9;
/// `λ_k(C″(q)C″(1−q)) = q(1−q)σ_k(Z)²` and the chain inequalities.
pub const CHAIN_GATE: f64 = 1e-8;
/// `q(1−q)(s^{1/2} + s^{−1/2})² = 1`.
pub const IDENTITY_GATE: f64 = 1e-12;
/// Unscaled `λ_k(C(q)C(1−q)) ≥ t · final_bound`, relative.
pub const END_TO_END_GATE: f64 = 1e-7;
/// Traces with `cond(A₁₁)` above this are degenerate: logged, not asserted.
pub const DEGENERATE_CONDITION: f64 = 1e10;
/// Relative eigenvalue cut for numerical rank.
pub const RANK_TOL: f64 = 1e-10;

/// Gates and cuts above are stated for `f64`; they widen with the scalar's
/// comparison tolerance (1 for `f64`, 1e5 for `f32`).
pub fn precision<T: Real>() -> f64 {
    T::tolerances().compare / Tolerances::default().compare
}

/// `g` scaled to the precision of `T`.
pub fn gate<T: Real>(g: f64) -> f64 {
    g * precision::<T>()
}

/// Residuals of one proof step. Every gated residual must satisfy
/// `value ≤ gate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub name: String,
    pub residuals: BTreeMap<String, f64>,
    pub gates: BTreeMap<String, f64>,
    pub pass: bool,
}

impl StepRecord {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            residuals: BTreeMap::new(),
            gates: BTreeMap::new(),
            pass: true,
        }
    }

    fn gate(&mut self, key: &str, value: f64, gate: f64) {
        self.residuals.insert(key.to_string(), value);
        self.gates.insert(key.to_string(), gate);
        if !(value <= gate) {
            self.pass = false;
        }
    }

    /// Informational value without a gate.
    fn note(&mut self, key: &str, value: f64) {
        self.residuals.insert(key.to_string(), value);
    }

    /// First gated residual above its gate.
    pub fn first_failure(&self) -> Option<(&str, f64, f64)> {
        self.gates.iter().find_map(|(key, &gate)| {
            let value = self.residuals[key];
            (!(value <= gate)).then_some((key.as_str(), value, gate))
        })
    }

    fn into_error(self) -> Result<Self> {
        match self.first_failure() {
            None => Ok(self),
            Some((key, value, gate)) => Err(Error::StepFailed {
                step: self.name.clone(),
                residual: key.to_string(),
                value,
                gate,
            }),
        }
    }
}

fn violation<T: Real>(margin: T, scale: T) -> f64 {
    (-margin / unit_floor(scale)).max(T::zero()).as_f64()
}

fn frob_diff<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> T {
    a.sub(b).map(|d| d.frobenius_norm()).unwrap_or_else(|_| T::infinity())
}

/// Output of [`normalize_instance`].
#[derive(Debug, Clone)]
pub struct Normalized<T: Real> {
    pub a: PsdMatrix<T>,
    pub b: PsdMatrix<T>,
    /// `t = λ_k(AB)` of the input; the pair was divided by `√t`.
    pub scale: T,
}

/// Scales `(A, B) → (A/√t, B/√t)` with `t = λ_k(AB)`, so that the scaled
/// product has `λ_k = 1`. Rank-deficient instances (rank `< k`, or
/// `λ_k(AB)` at the rank tolerance) return [`Error::TriviallyTrue`].
pub fn normalize_instance<T: Real>(a: &PsdMatrix<T>, b: &PsdMatrix<T>, k: usize) -> Result<(Normalized<T>, StepRecord)> {
    a.ensure_same_dim(b)?;
    let n = a.dim();
    if k == 0 || k > n {
        return Err(Error::IndexOutOfRange { index: k, len: n });
    }
    let tol = T::lit(gate::<T>(RANK_TOL));
    let (ra, rb) = (a.rank(tol), b.rank(tol));
    if ra < k || rb < k {
        return Err(Error::TriviallyTrue(format!("rank(A) = {ra}, rank(B) = {rb} < k = {k}, so λ_k(AB) = 0")));
    }
    let lam = eigvals_of_product(a, b)?;
    let t = lam.kth(k)?;
    if !(t > tol * lam.max()) || t <= T::zero() {
        return Err(Error::TriviallyTrue(format!("λ_k(AB) = {:e} is numerically zero", t.as_f64())));
    }
    let f = T::one() / t.sqrt();
    let a = a.scale(f)?;
    let b = b.scale(f)?;
    let mut rec = StepRecord::new("normalize");
    rec.note("scale", t.as_f64());
    // λ_k is determined only to ε·λ_1, so the residual is relative to λ_1.
    let check = eigvals_of_product(&a, &b)?;
    rec.gate(
        "lambda_k_minus_one",
        ((check.kth(k)? - T::one()).abs() / unit_floor(check.max())).as_f64(),
        gate::<T>(NORMALIZE_GATE),
    );
    Ok((Normalized { a, b, scale: t }, rec))
}

/// Rank-`k` projector `P ≤ M = A^{1/2} B A^{1/2}` with its witnesses.
#[derive(Debug, Clone)]
pub struct Projector<T: Real> {
    pub p: HermitianMatrix<T>,
    pub m: HermitianMatrix<T>,
    pub sqrt_a: PsdMatrix<T>,
    /// Top-`k` eigenvectors of `M`, as columns.
    pub top_vectors: ComplexMatrix<T>,
    /// Top-`k` eigenvalues of `M` (all `≥ 1` after normalization).
    pub top_values: Vec<T>,
}

/// Spectral projector onto the top-`k` eigenvectors of
/// `M = A^{1/2} B A^{1/2}`. Ties at position `k` keep the eigensolver's
/// deterministic column order.
pub fn construct_projector<T: Real>(a: &PsdMatrix<T>, b: &PsdMatrix<T>, k: usize) -> Result<(Projector<T>, StepRecord)> {
    a.ensure_same_dim(b)?;
    let n = a.dim();
    if k == 0 || k > n {
        return Err(Error::IndexOutOfRange { index: k, len: n });
    }
    let sqrt_a = psd_sqrt(a)?;
    let m = b.as_hermitian().congruence(sqrt_a.as_matrix())?;
    let r = a.rank(T::lit(gate::<T>(RANK_TOL)));
    let eig = if r < n {
        // M vanishes on null(A); solving on an orthonormal basis Q of
        // range(A), where S Q = Q D^{1/2}, keeps the eigenvectors exactly
        // inside that range instead of leaking ε‖M‖/gap into the kernel.
        let cols: Vec<usize> = (0..r).collect();
        let q = a.eig().vectors.select_columns(&cols);
        let d_half: Vec<T> = a.spectrum().values()[..r].iter().map(|l| l.sqrt()).collect();
        let qd = q.scale_columns(&d_half);
        let reduced = b.as_hermitian().congruence(&qd)?.eig()?;
        Eigen {
            values: reduced.values,
            vectors: q.mul(&reduced.vectors),
        }
    } else {
        m.eig()?
    };
    let lam_k = eig.values.kth(k)?;
    if lam_k < T::one() - T::lit(gate::<T>(PROJECTOR_GATE)) * unit_floor(eig.values.max()) {
        return Err(Error::InvalidArgument(format!(
            "instance is not normalized: λ_k(A^(1/2) B A^(1/2)) = {lam_k} < 1"
        )));
    }
    let idx: Vec<usize> = (0..k).collect();
    let top_vectors = eig.vectors.select_columns(&idx);
    let top_values = eig.values.values()[..k].to_vec();
    let raw = top_vectors.mul(&top_vectors.adjoint());

    let mut rec = StepRecord::new("projector");
    rec.gate("self_adjoint", raw.hermitian_defect().as_f64(), gate::<T>(PROJECTOR_GATE));
    let p = HermitianMatrix::symmetrize(raw);
    let pm = p.as_matrix();
    rec.gate("idempotent", frob_diff(&pm.mul(pm), pm).as_f64(), gate::<T>(PROJECTOR_GATE));
    rec.gate("trace_minus_k", (pm.trace().re - T::lit(k as f64)).abs().as_f64(), gate::<T>(PROJECTOR_GATE));
    let order = loewner_leq(&p, &m, T::lit(gate::<T>(PROJECTOR_GATE)))?;
    rec.gate("p_leq_m", violation(order.margin, eig.values.max()), gate::<T>(PROJECTOR_GATE));
    rec.note("lambda_k_of_m", lam_k.as_f64());
    Ok((
        Projector {
            p,
            m,
            sqrt_a,
            top_vectors,
            top_values,
        },
        rec,
    ))
}

/// How `B′` was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BPrimeRoute {
    /// `B′ = A^{−1/2} P A^{−1/2}` through the generalized inverse of `A^{1/2}`.
    GeneralizedInverse,
    /// `B′ = B A^{1/2} U_k Λ_k^{−2} U_k* A^{1/2} B`, used when `A` is singular.
    RangeOfB,
}

/// Rank-`k` matrix `B′ ≤ B` with `A^{1/2} B′ A^{1/2} = P`.
///
/// For invertible `A` this is `A^{−1/2} P A^{−1/2}`. For singular `A` that
/// formula need not satisfy `B′ ≤ B`, so the same matrix is built from the
/// `B` side instead: with `M U_k = U_k Λ_k`,
/// `B′ = B A^{1/2} U_k Λ_k^{−2} U_k* A^{1/2} B = B^{1/2} W B^{1/2}` where
/// `W ≤ I` because `Λ_k ≥ I`. Both expressions agree when `A` is invertible.
pub fn construct_bprime<T: Real>(
    a: &PsdMatrix<T>,
    b: &PsdMatrix<T>,
    proj: &Projector<T>,
    k: usize,
) -> Result<(PsdMatrix<T>, BPrimeRoute, StepRecord)> {
    a.ensure_same_dim(b)?;
    let n = a.dim();
    let rank_tol = T::lit(gate::<T>(RANK_TOL));
    let s = proj.sqrt_a.as_matrix();
    let s_pinv = pseudo_inverse(&proj.sqrt_a, rank_tol)?;

    // range(P) ⊆ range(A): (I − S S⁺) P = 0.
    let range_proj = s.mul(s_pinv.as_matrix());
    let leak = ComplexMatrix::identity(n).sub(&range_proj)?.mul(proj.p.as_matrix());
    let range_defect = leak.frobenius_norm();
    if range_defect.as_f64() > gate::<T>(BPRIME_GATE) {
        return Err(Error::RangeViolation {
            defect: range_defect.as_f64(),
        });
    }

    let (b_prime, route) = if a.rank(rank_tol) == n {
        // S⁺PS⁺ with P = U_k U_k*, kept in factored form.
        let w = s_pinv.as_matrix().mul(&proj.top_vectors);
        (PsdMatrix::from_product(w.mul(&w.adjoint()))?, BPrimeRoute::GeneralizedInverse)
    } else {
        let inv_sq: Vec<T> = proj.top_values.iter().map(|&l| T::one() / (l * l)).collect();
        let w = b.as_matrix().mul(s).mul(&proj.top_vectors);
        (PsdMatrix::from_product(w.scale_columns(&inv_sq).mul(&w.adjoint()))?, BPrimeRoute::RangeOfB)
    };

    let mut rec = StepRecord::new("bprime");
    rec.gate("range_defect", range_defect.as_f64(), gate::<T>(BPRIME_GATE));
    let back = b_prime.as_hermitian().congruence(s)?;
    rec.gate("sqrt_a_bprime_sqrt_a_minus_p", frob_diff(back.as_matrix(), proj.p.as_matrix()).as_f64(), gate::<T>(BPRIME_GATE));
    rec.gate("rank_minus_k", (b_prime.rank(rank_tol) as f64 - k as f64).abs(), 0.0);
    let order = loewner_leq(b_prime.as_hermitian(), b.as_hermitian(), T::lit(gate::<T>(BPRIME_GATE)))?;
    rec.gate("bprime_leq_b", violation(order.margin, b.spectrum().max()), gate::<T>(BPRIME_GATE));
    let spec = eigvals_of_product(a, &b_prime)?;
    let expected = (0..n).map(|i| if i < k { T::one() } else { T::zero() });
    let dev = spec.values().iter().zip(expected).fold(T::zero(), |acc, (&x, e)| acc.max((x - e).abs()));
    rec.gate("spectrum_of_a_bprime", dev.as_f64(), gate::<T>(BPRIME_GATE));
    Ok((b_prime, route, rec))
}

/// `A` and `B′` expressed in an eigenbasis of `B′` and split `k | n−k`.
#[derive(Debug, Clone)]
pub struct Blocks<T: Real> {
    /// Unitary whose first `k` columns span the range of `B′`.
    pub basis: ComplexMatrix<T>,
    /// `basis* · A · basis`.
    pub a_rotated: PsdMatrix<T>,
    pub a11: PsdMatrix<T>,
    pub a12: ComplexMatrix<T>,
    pub a22: ComplexMatrix<T>,
    pub b11: PsdMatrix<T>,
    pub a11_inverse: PsdMatrix<T>,
    pub a11_condition: T,
}

/// Conformal block decomposition in an eigenbasis of `B′`.
pub fn block_decompose<T: Real>(a: &PsdMatrix<T>, b_prime: &PsdMatrix<T>, k: usize) -> Result<(Blocks<T>, StepRecord)> {
    a.ensure_same_dim(b_prime)?;
    let n = a.dim();
    let basis = b_prime.eig().vectors.clone();
    let a_rotated = a.congruence(&basis)?;
    let b_rotated = b_prime.congruence(&basis)?;
    let ar = a_rotated.as_matrix();
    let br = b_rotated.as_matrix();
    let a11 = PsdMatrix::from_product(ar.block(0, k, 0, k))?;
    let a12 = ar.block(0, k, k, n);
    let a22 = ar.block(k, n, k, n);
    let b11 = PsdMatrix::from_product(br.block(0, k, 0, k))?;

    let eps = T::epsilon();
    if a11.rank(T::lit(gate::<T>(RANK_TOL))) < k {
        return Err(Error::InvalidArgument("A₁₁ is singular in the eigenbasis of B′".into()));
    }
    if b11.rank(T::lit(gate::<T>(RANK_TOL))) < k {
        return Err(Error::InvalidArgument("B₁₁ is singular: rank(B′) < k".into()));
    }
    let a11_inverse = pseudo_inverse(&a11, eps)?;
    let a11_condition = a11.spectrum().max() / a11.spectrum().min();

    let mut rec = StepRecord::new("block_decompose");
    let mut direct_sum = ComplexMatrix::zeros(n, n);
    for i in 0..k {
        for j in 0..k {
            direct_sum[(i, j)] = br[(i, j)];
        }
    }
    let b_scale = unit_floor(br.frobenius_norm());
    rec.gate("bprime_direct_sum", (frob_diff(br, &direct_sum) / b_scale).as_f64(), gate::<T>(BLOCK_GATE));
    let b11_norm = unit_floor(b11.as_matrix().frobenius_norm());
    rec.gate(
        "b11_minus_a11_inverse",
        (frob_diff(b11.as_matrix(), a11_inverse.as_matrix()) / b11_norm).as_f64(),
        gate::<T>(BLOCK_INVERSE_GATE),
    );
    let b11_sqrt = psd_sqrt(&b11)?;
    let r11 = a11.congruence(b11_sqrt.as_matrix())?;
    rec.gate("r11_minus_identity", frob_diff(r11.as_matrix(), &ComplexMatrix::identity(k)).as_f64(), gate::<T>(BLOCK_GATE));
    rec.note("a11_condition", a11_condition.as_f64());
    Ok((
        Blocks {
            basis,
            a_rotated,
            a11,
            a12,
            a22,
            b11,
            a11_inverse,
            a11_condition,
        },
        rec,
    ))
}

/// `L L*` with `L = [F^{1/2}; A₁₂* F^{−1/2}]`, i.e.
/// `[[F, A₁₂], [A₁₂*, A₁₂* F⁻¹ A₁₂]]`, PSD of rank `k` by construction.
fn rank_k_completion<T: Real>(f: &PsdMatrix<T>, a12: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let top = psd_sqrt(f)?;
    let bottom = a12.adjoint().mul(psd_inv_sqrt(f, T::epsilon())?.as_matrix());
    let k = f.dim();
    let n = k + a12.cols();
    let mut l = ComplexMatrix::zeros(n, k);
    for j in 0..k {
        for i in 0..k {
            l[(i, j)] = top.as_matrix()[(i, j)];
        }
        for i in k..n {
            l[(i, j)] = bottom[(i - k, j)];
        }
    }
    Ok(l.mul(&l.adjoint()))
}

/// `A′ = [[A₁₁, A₁₂], [A₁₂*, A₁₂* A₁₁⁻¹ A₁₂]]` in the block basis, with
/// `0 ≤ A′ ≤ A` and rank `k`.
pub fn construct_aprime<T: Real>(blocks: &Blocks<T>) -> Result<(PsdMatrix<T>, StepRecord)> {
    let k = blocks.a11.dim();
    let schur_part = blocks.a12.adjoint().mul(blocks.a11_inverse.as_matrix()).mul(&blocks.a12);
    let a_prime = PsdMatrix::from_product(rank_k_completion(&blocks.a11, &blocks.a12)?)?;

    let mut rec = StepRecord::new("aprime");
    let scale = blocks.a_rotated.spectrum().max();
    rec.gate("rank_minus_k", (a_prime.rank(T::lit(gate::<T>(RANK_TOL))) as f64 - k as f64).abs(), 0.0);
    rec.gate("nonnegative", violation(a_prime.spectrum().min(), scale), gate::<T>(APRIME_GATE));
    let order = loewner_leq(a_prime.as_hermitian(), blocks.a_rotated.as_hermitian(), T::lit(gate::<T>(APRIME_GATE)))?;
    rec.gate("aprime_leq_a", violation(order.margin, scale), gate::<T>(APRIME_GATE));
    let schur = HermitianMatrix::symmetrize(blocks.a22.sub(&schur_part)?);
    if schur.dim() > 0 {
        rec.note("schur_complement_min_eig", schur.eigenvalues()?.min().as_f64());
    }
    Ok((a_prime, rec))
}

/// The `2k × 2k` matrices of the factorization step.
#[derive(Debug, Clone)]
pub struct Zxy<T: Real> {
    pub s: T,
    pub f: PsdMatrix<T>,
    pub g: PsdMatrix<T>,
    pub h: PsdMatrix<T>,
    pub k_mat: PsdMatrix<T>,
    pub z: ComplexMatrix<T>,
    pub x: ComplexMatrix<T>,
    pub y: HermitianMatrix<T>,
    /// `λ_k(C″(q)C″(1−q))` from the blocks.
    pub c2_lambda_k: T,
    /// `σ_k(Z)`.
    pub z_sigma_k: T,
}

fn scalar_identity<T: Real>(k: usize, c: T) -> ComplexMatrix<T> {
    ComplexMatrix::identity(k).scale(c)
}

/// Builds `H = F^{−1/2} G F^{−1/2}`, `K = (F + H + F^{−1})/2`, `s = (1−q)/q`,
///
/// ```text
/// Z = [[F⁻¹, s^{1/2}], [s^{−1/2}, F + H]]
/// X = [[s^{1/2}, F⁻¹], [F + H, s^{−1/2}]]
/// Y = (X + X*)/2 = [[s^{1/2}, K], [K, s^{−1/2}]]
/// ```
///
/// and checks `σ(Z) = σ(X)`, `λ_k(C″(q)C″(1−q)) = q(1−q)σ_k(Z)²` against an
/// independent reassembly of `C″` from `F` and `A₁₂`, and `K ≥ I`.
pub fn assemble_zxy<T: Real>(f: &PsdMatrix<T>, a12: &ComplexMatrix<T>, q: f64) -> Result<(Zxy<T>, StepRecord)> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::PipelineDomain { q });
    }
    let k = f.dim();
    if f.rank(T::lit(gate::<T>(RANK_TOL))) < k {
        return Err(Error::InvalidArgument("F must be positive definite".into()));
    }
    let qt = T::lit(q);
    let s = (T::one() - qt) / qt;
    let (rs, irs) = (s.sqrt(), T::one() / s.sqrt());
    let f_inv = pseudo_inverse(f, T::epsilon())?;
    let f_half = psd_sqrt(f)?;
    let f_ihalf = psd_inv_sqrt(f, T::epsilon())?;
    let g = PsdMatrix::from_product(a12.mul(&a12.adjoint()))?;
    let h = g.congruence(f_ihalf.as_matrix())?;
    let fm = f.as_matrix();
    let fi = f_inv.as_matrix();
    let f_plus_h = fm.add(h.as_matrix())?;
    let k_mat = PsdMatrix::from_product(f_plus_h.add(fi)?.scale(T::lit(0.5)))?;

    let z = ComplexMatrix::from_blocks(fi, &scalar_identity(k, rs), &scalar_identity(k, irs), &f_plus_h)?;
    let x = ComplexMatrix::from_blocks(&scalar_identity(k, rs), fi, &f_plus_h, &scalar_identity(k, irs))?;
    let y = HermitianMatrix::hermitian_part(&x)?;
    let zero = ComplexMatrix::zeros(k, k);

    let mut rec = StepRecord::new("zxy");
    // Z as the product of the three factors.
    let w_left = ComplexMatrix::from_blocks(&f_ihalf.as_matrix().scale(rs), &zero, f_half.as_matrix(), f_ihalf.as_matrix())?;
    let w_right = ComplexMatrix::from_blocks(&f_ihalf.as_matrix().scale(irs), f_half.as_matrix(), &zero, f_ihalf.as_matrix())?;
    let d = ComplexMatrix::from_blocks(&ComplexMatrix::identity(k), &zero, &zero, g.as_matrix())?;
    let z_factored = w_left.mul(&d).mul(&w_right);
    let z_scale = unit_floor(z.frobenius_norm());
    rec.gate("z_factorization", (frob_diff(&z_factored, &z) / z_scale).as_f64(), gate::<T>(ZXY_GATE));
    // [[F + sF⁻¹, I], [I, F⁻¹]] = W W*.
    let middle = ComplexMatrix::from_blocks(&fm.add(&fi.scale(s))?, &ComplexMatrix::identity(k), &ComplexMatrix::identity(k), fi)?;
    let w = ComplexMatrix::from_blocks(&f_ihalf.as_matrix().scale(rs), f_half.as_matrix(), &zero, f_ihalf.as_matrix())?;
    rec.gate(
        "middle_factorization",
        (frob_diff(&w.mul(&w.adjoint()), &middle) / unit_floor(middle.frobenius_norm())).as_f64(),
        gate::<T>(ZXY_GATE),
    );

    let sz = singular_values(&z)?;
    let sx = singular_values(&x)?;
    let sv_dev = sz.values().iter().zip(sx.values()).fold(T::zero(), |acc, (&u, &v)| acc.max((u - v).abs()));
    rec.gate("sigma_z_minus_sigma_x", (sv_dev / unit_floor(sz.max())).as_f64(), gate::<T>(ZXY_GATE));

    let expected_y = ComplexMatrix::from_blocks(&scalar_identity(k, rs), k_mat.as_matrix(), k_mat.as_matrix(), &scalar_identity(k, irs))?;
    rec.gate(
        "hermitian_part_is_y",
        (frob_diff(y.as_matrix(), &expected_y) / unit_floor(expected_y.frobenius_norm())).as_f64(),
        gate::<T>(ZXY_GATE),
    );

    // Independent reassembly of C″(q) = qA′ + (1−q)(F⁻¹ ⊕ 0) in the block basis.
    let lower = rank_k_completion(f, a12)?;
    let n = k + a12.cols();
    let mut f_inv_padded = ComplexMatrix::zeros(n, n);
    for i in 0..k {
        for j in 0..k {
            f_inv_padded[(i, j)] = fi[(i, j)];
        }
    }
    let c2 = |w: T| -> Result<PsdMatrix<T>> { PsdMatrix::from_product(lower.scale(w).add(&f_inv_padded.scale(T::one() - w))?) };
    let c2q = c2(qt)?;
    let c2qb = c2(T::one() - qt)?;
    let c2_lambda_k = eigvals_of_product(&c2q, &c2qb)?.kth(k)?;
    let z_sigma_k = sz.kth(k)?;
    let predicted = qt * (T::one() - qt) * z_sigma_k * z_sigma_k;
    rec.gate(
        "c2_lambda_k_vs_z",
        ((c2_lambda_k - predicted).abs() / unit_floor(c2_lambda_k)).as_f64(),
        gate::<T>(CHAIN_GATE),
    );

    let order = loewner_leq(&HermitianMatrix::identity(k), k_mat.as_hermitian(), T::lit(gate::<T>(ZXY_GATE)))?;
    rec.gate("k_geq_identity", violation(order.margin, T::one()), gate::<T>(ZXY_GATE));
    rec.note("s", s.as_f64());

    Ok((
        Zxy {
            s,
            f: f.clone(),
            g,
            h,
            k_mat,
            z,
            x,
            y,
            c2_lambda_k,
            z_sigma_k,
        },
        rec,
    ))
}

/// Closed form of the top eigenvalue of `[[a, κ], [κ, b]]` with `ab = 1`:
/// `(a + b + √((a + b)² − 4 + 4κ²))/2`.
pub fn y_eigenvalue_closed_form<T: Real>(s: T, kappa: T) -> T {
    let sum = s.sqrt() + T::one() / s.sqrt();
    let four = T::lit(4.0);
    T::lit(0.5) * (sum + (sum * sum - four + four * kappa * kappa).sqrt())
}

/// Top `k` eigenvalues of `Y = [[s^{1/2}, K], [K, s^{−1/2}]]` from the
/// eigenvalues of `K`, checked against a direct eigensolve of `Y` and
/// against the lower bound `λ_k(Y) ≥ s^{1/2} + s^{−1/2}`.
pub fn y_eigenvalues<T: Real>(s: T, k_mat: &PsdMatrix<T>) -> Result<(Spectrum<T>, StepRecord)> {
    if !(s > T::zero()) {
        return Err(Error::InvalidArgument(format!("s must be positive, got {s}")));
    }
    let k = k_mat.dim();
    let lam_k = k_mat.spectrum();
    if lam_k.min() < T::one() - T::lit(gate::<T>(ZXY_GATE)) {
        return Err(Error::InvalidArgument(format!("K ≥ I violated: λ_min(K) = {}", lam_k.min())));
    }
    let closed = Spectrum::new(
        lam_k.values().iter().map(|&kappa| y_eigenvalue_closed_form(s, kappa)).collect(),
        SpectrumKind::Eigenvalues,
    );
    let (rs, irs) = (s.sqrt(), T::one() / s.sqrt());
    let y = ComplexMatrix::from_blocks(
        &scalar_identity(k, rs),
        k_mat.as_matrix(),
        k_mat.as_matrix(),
        &scalar_identity(k, irs),
    )?;
    let direct = HermitianMatrix::symmetrize(y).eigenvalues()?;
    let dev = closed.values().iter().zip(direct.values()).fold(T::zero(), |acc, (&u, &v)| acc.max((u - v).abs()));

    let mut rec = StepRecord::new("y_eigenvalues");
    rec.gate("closed_form_vs_direct", (dev / unit_floor(direct.max())).as_f64(), gate::<T>(ZXY_GATE));
    let bound = rs + irs;
    rec.gate("lambda_k_lower_bound", (bound - closed.kth(k)?).max(T::zero()).as_f64(), gate::<T>(ZXY_GATE));
    Ok((closed, rec))
}

/// `σ_j(X) ≥ λ_j((X + X*)/2)` for every `j`; `lhs` is the eigenvalue of the
/// Hermitian part and `rhs` the singular value.
pub fn hermitian_part_bound_check<T: Real>(x: &ComplexMatrix<T>) -> Result<Vec<CheckReport>> {
    x.ensure_square()?;
    let sv = singular_values(x)?;
    let herm = HermitianMatrix::hermitian_part(x)?.eigenvalues()?;
    Ok(herm
        .values()
        .iter()
        .zip(sv.values())
        .enumerate()
        .map(|(j, (&l, &s))| {
            CheckReport::evaluate("hermitian-part-bound", l.as_f64(), s.as_f64(), T::tolerances().compare).with_instance(InstanceDigest {
                dim: Some(x.rows()),
                k: Some(j + 1),
                ..Default::default()
            })
        })
        .collect())
}

/// All intermediates and residuals of one run.
#[derive(Debug, Clone)]
pub struct PipelineTrace<T: Real> {
    pub dim: usize,
    pub q: f64,
    pub k: usize,
    /// `λ_k(AB)` of the unscaled input.
    pub scale: T,
    pub projector: HermitianMatrix<T>,
    pub b_prime: PsdMatrix<T>,
    pub b_prime_route: BPrimeRoute,
    pub blocks: Blocks<T>,
    pub a_prime: PsdMatrix<T>,
    pub zxy: Zxy<T>,
    pub y_spectrum: Spectrum<T>,
    pub steps: Vec<StepRecord>,
    /// `λ_k(C″(q)C″(1−q))` of the normalized instance.
    pub final_bound: T,
    /// `λ_k(C′(q)C′(1−q))`, `C′(q) = qA + (1−q)B′`.
    pub c1_lambda_k: T,
    /// `λ_k(C(q)C(1−q))` of the normalized instance.
    pub c_lambda_k: T,
    /// `cond(A₁₁) > DEGENERATE_CONDITION / precision`; gates are reported, not enforced.
    pub degenerate: bool,
}

impl<T: Real> PipelineTrace<T> {
    pub fn passed(&self) -> bool {
        self.steps.iter().all(|s| s.pass)
    }

    /// Flattened `"step.residual" → value`.
    pub fn step_residuals(&self) -> BTreeMap<String, f64> {
        self.steps
            .iter()
            .flat_map(|s| s.residuals.iter().map(move |(k, v)| (format!("{}.{}", s.name, k), *v)))
            .collect()
    }

    /// First failing gate as an error.
    pub fn ensure_passed(&self) -> Result<()> {
        for step in &self.steps {
            step.clone().into_error()?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "input": {
                "dim": self.dim,
                "q": self.q,
                "k": self.k,
                "scale": self.scale.as_f64(),
            },
            "steps": self.steps,
            "final_bound": self.final_bound.as_f64(),
            "chain": {
                "c2_lambda_k": self.final_bound.as_f64(),
                "c1_lambda_k": self.c1_lambda_k.as_f64(),
                "c_lambda_k": self.c_lambda_k.as_f64(),
            },
            "s": self.zxy.s.as_f64(),
            "degenerate": self.degenerate,
            "passed": self.passed(),
            "bprime_route": self.b_prime_route,
            "a11_condition": self.blocks.a11_condition.as_f64(),
            "y_top_eigenvalues": self.y_spectrum.to_f64(),
            "matrices": {
                "P": self.projector.as_matrix().to_json(),
                "B_prime": self.b_prime.as_matrix().to_json(),
                "basis": self.blocks.basis.to_json(),
                "A11": self.blocks.a11.as_matrix().to_json(),
                "A12": if self.blocks.a12.cols() > 0 { self.blocks.a12.to_json() } else { Value::Null },
                "A22": if self.blocks.a22.cols() > 0 { self.blocks.a22.to_json() } else { Value::Null },
                "B11": self.blocks.b11.as_matrix().to_json(),
                "A_prime": self.a_prime.as_matrix().to_json(),
                "F": self.zxy.f.as_matrix().to_json(),
                "G": self.zxy.g.as_matrix().to_json(),
                "H": self.zxy.h.as_matrix().to_json(),
                "K": self.zxy.k_mat.as_matrix().to_json(),
                "Z": self.zxy.z.to_json(),
                "X": self.zxy.x.to_json(),
                "Y": self.zxy.y.as_matrix().to_json(),
            },
        })
    }
}

/// `q(1−q)(s^{1/2} + s^{−1/2})²` with `s = (1−q)/q`; equals 1 on `(0, 1)`.
pub fn final_identity(q: f64) -> f64 {
    let s = (1.0 - q) / q;
    let t = s.sqrt() + 1.0 / s.sqrt();
    q * (1.0 - q) * t * t
}

/// Runs every step and returns the trace even when gates fail. Errors are
/// reserved for [`Error::TriviallyTrue`], [`Error::PipelineDomain`] and
/// numerical breakdowns that stop the chain.
pub fn trace_pipeline<T: Real>(a: &PsdMatrix<T>, b: &PsdMatrix<T>, q: f64, k: usize) -> Result<PipelineTrace<T>> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::PipelineDomain { q });
    }
    let (norm, rec_norm) = normalize_instance(a, b, k)?;
    let (proj, rec_proj) = construct_projector(&norm.a, &norm.b, k)?;
    let (b_prime, route, rec_bp) = construct_bprime(&norm.a, &norm.b, &proj, k)?;
    let (blocks, rec_blocks) = block_decompose(&norm.a, &b_prime, k)?;
    let (a_prime, rec_ap) = construct_aprime(&blocks)?;
    let (zxy, rec_zxy) = assemble_zxy(&blocks.a11, &blocks.a12, q)?;
    let (y_spectrum, rec_y) = y_eigenvalues(zxy.s, &zxy.k_mat)?;

    let mut rec_herm = StepRecord::new("hermitian_part_bound");
    let worst = hermitian_part_bound_check(&zxy.x)?
        .iter()
        .fold(0.0f64, |acc, r| acc.max(-r.relative_margin()));
    rec_herm.gate("sigma_minus_hermitian_part", worst.max(0.0), gate::<T>(ZXY_GATE));

    // The reductions C″ ≤ C′ ≤ C and the final bound.
    let mut rec_chain = StepRecord::new("chain");
    let qt = T::lit(q);
    let c_lambda_k = eigvals_of_product(&cq_mix(&norm.a, &norm.b, q)?, &cq_mix(&norm.a, &norm.b, 1.0 - q)?)?.kth(k)?;
    let c1_lambda_k = eigvals_of_product(&cq_mix(&norm.a, &b_prime, q)?, &cq_mix(&norm.a, &b_prime, 1.0 - q)?)?.kth(k)?;
    // C″ in the block basis: spectra are basis independent.
    let b_prime_block = {
        let n = a.dim();
        let mut m = ComplexMatrix::zeros(n, n);
        let b11 = blocks.a11_inverse.as_matrix();
        for i in 0..k {
            for j in 0..k {
                m[(i, j)] = b11[(i, j)];
            }
        }
        PsdMatrix::from_product(m)?
    };
    let final_bound = eigvals_of_product(&cq_mix(&a_prime, &b_prime_block, q)?, &cq_mix(&a_prime, &b_prime_block, 1.0 - q)?)?.kth(k)?;
    // Excess of `lo` over `hi`, relative to max(1, hi).
    let excess = |lo: T, hi: T| ((lo - hi) / unit_floor(hi.abs())).max(T::zero()).as_f64();
    rec_chain.gate("c2_leq_c1", excess(final_bound, c1_lambda_k), gate::<T>(CHAIN_GATE));
    rec_chain.gate("c1_leq_c", excess(c1_lambda_k, c_lambda_k), gate::<T>(CHAIN_GATE));
    rec_chain.gate(
        "c2_matches_factorization",
        ((final_bound - zxy.c2_lambda_k).abs() / unit_floor(final_bound)).as_f64(),
        gate::<T>(CHAIN_GATE),
    );
    let y_k = y_spectrum.kth(k)?;
    let hermitian_bound = qt * (T::one() - qt) * y_k * y_k;
    rec_chain.gate("c2_geq_hermitian_part_bound", excess(hermitian_bound, final_bound), gate::<T>(CHAIN_GATE));
    rec_chain.gate("final_identity", (final_identity(q) - 1.0).abs(), IDENTITY_GATE);
    rec_chain.gate("final_bound_geq_one", (T::one() - final_bound).max(T::zero()).as_f64(), gate::<T>(CHAIN_GATE));
    let unscaled = eigvals_of_product(&cq_mix(a, b, q)?, &cq_mix(a, b, 1.0 - q)?)?.kth(k)?;
    let implied = final_bound * norm.scale;
    rec_chain.gate("end_to_end", ((implied - unscaled) / unit_floor(unscaled)).max(T::zero()).as_f64(), gate::<T>(END_TO_END_GATE));
    rec_chain.note("final_bound", final_bound.as_f64());

    let degenerate = !(blocks.a11_condition.as_f64() <= DEGENERATE_CONDITION / precision::<T>());
    Ok(PipelineTrace {
        dim: a.dim(),
        q,
        k,
        scale: norm.scale,
        projector: proj.p,
        b_prime,
        b_prime_route: route,
        blocks,
        a_prime,
        zxy,
        y_spectrum,
        steps: vec![rec_norm, rec_proj, rec_bp, rec_blocks, rec_ap, rec_zxy, rec_y, rec_herm, rec_chain],
        final_bound,
        c1_lambda_k,
        c_lambda_k,
        degenerate,
    })
}

/// [`trace_pipeline`] that additionally fails on the first residual above
/// its gate, unless the trace is degenerate.
pub fn run_pipeline<T: Real>(a: &PsdMatrix<T>, b: &PsdMatrix<T>, q: f64, k: usize) -> Result<PipelineTrace<T>> {
    let trace = trace_pipeline(a, b, q, k)?;
    if !trace.degenerate {
        trace.ensure_passed()?;
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_psd, Field};

    type M = ComplexMatrix<f64>;

    fn psd(d: &[f64]) -> PsdMatrix<f64> {
        PsdMatrix::from_diag(d).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let i = PsdMatrix::<f64>::identity(3);
        let (n, rec) = normalize_instance(&i, &i, 2).unwrap();
        assert!((n.scale - 1.0).abs() < 1e-15);
        assert!(rec.pass);

        let a0 = psd(&[1.0, 2.0]);
        let b0 = psd(&[1.0, 0.5]);
        // λ(A₀B₀) = (1, 1)
        let (n0, _) = normalize_instance(&a0, &b0, 1).unwrap();
        let (n2, _) = normalize_instance(&a0.scale(2.0).unwrap(), &b0.scale(2.0).unwrap(), 1).unwrap();
        assert!((n0.scale - 1.0).abs() < 1e-14);
        assert!((n2.scale - 4.0).abs() < 1e-13);
        assert!(n2.a.as_matrix().sub(n0.a.as_matrix()).unwrap().max_abs() < 1e-14);

        let r = normalize_instance(&psd(&[1.0, 0.0]), &psd(&[1.0, 1.0]), 2);
        assert!(matches!(r, Err(Error::TriviallyTrue(_))));
        let r = normalize_instance(&psd(&[1.0, 0.0]), &psd(&[0.0, 1.0]), 1);
        assert!(matches!(r, Err(Error::TriviallyTrue(_))));
    }

    #[test]
    fn projector_examples() {
        let i = PsdMatrix::<f64>::identity(3);
        let (p, rec) = construct_projector(&i, &i, 2).unwrap();
        assert!(rec.pass, "{rec:?}");
        assert!((p.p.as_matrix().trace().re - 2.0).abs() < 1e-14);

        // M = diag(3, 2, 0.5) with A = I.
        let b = psd(&[3.0, 2.0, 0.5]);
        let (p, rec) = construct_projector(&i, &b, 2).unwrap();
        assert!(rec.pass);
        assert!(p.p.as_matrix().sub(&M::from_diag(&[1.0, 1.0, 0.0])).unwrap().max_abs() < 1e-15);

        // not normalized
        assert!(construct_projector(&i, &psd(&[3.0, 0.5, 0.2]), 2).is_err());
    }

    #[test]
    fn bprime_examples() {
        let i = PsdMatrix::<f64>::identity(3);
        let b = psd(&[3.0, 2.0, 0.5]);
        let (p, _) = construct_projector(&i, &b, 2).unwrap();
        let (bp, route, rec) = construct_bprime(&i, &b, &p, 2).unwrap();
        assert!(rec.pass, "{rec:?}");
        assert_eq!(route, BPrimeRoute::GeneralizedInverse);
        assert!(bp.as_matrix().sub(p.p.as_matrix()).unwrap().max_abs() < 1e-14);

        // A = diag(a1, a2), P = diag(1, 0): B′ = diag(1/a1, 0).
        let a = psd(&[4.0, 0.25]);
        let b = psd(&[0.25, 1.0]);
        let (p, _) = construct_projector(&a, &b, 1).unwrap();
        assert!(p.p.as_matrix().sub(&M::from_diag(&[1.0, 0.0])).unwrap().max_abs() < 1e-14);
        let (bp, _, rec) = construct_bprime(&a, &b, &p, 1).unwrap();
        assert!(rec.pass);
        assert!(bp.as_matrix().sub(&M::from_diag(&[0.25, 0.0])).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn bprime_for_singular_a_stays_below_b() {
        // A^{-1/2} P A^{-1/2} through the generalized inverse would give
        // diag(1, 0), which is not below B.
        let a = psd(&[1.0, 0.0]);
        let b = PsdMatrix::<f64>::from_matrix(M::from_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap()).unwrap();
        let (p, _) = construct_projector(&a, &b, 1).unwrap();
        let (bp, route, rec) = construct_bprime(&a, &b, &p, 1).unwrap();
        assert_eq!(route, BPrimeRoute::RangeOfB);
        assert!(rec.pass, "{rec:?}");
        assert!(bp.as_matrix().sub(b.as_matrix()).unwrap().max_abs() < 1e-14);

        let naive = HermitianMatrix::new(M::from_diag(&[1.0, 0.0])).unwrap();
        assert!(!loewner_leq(&naive, b.as_hermitian(), 1e-9).unwrap().holds);
    }

    #[test]
    fn block_examples() {
        let i = PsdMatrix::<f64>::identity(3);
        let bp = psd(&[1.0, 1.0, 0.0]);
        let (bl, rec) = block_decompose(&i, &bp, 2).unwrap();
        assert!(rec.pass, "{rec:?}");
        assert!(bl.a11.as_matrix().sub(&M::identity(2)).unwrap().max_abs() < 1e-15);

        let a = psd(&[2.0, 1.0]);
        let bp = psd(&[0.5, 0.0]);
        let (bl, rec) = block_decompose(&a, &bp, 1).unwrap();
        assert!(rec.pass);
        assert!((bl.b11.as_matrix()[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((bl.a11_inverse.as_matrix()[(0, 0)].re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn aprime_examples() {
        // A₁₂ = 0 → A′ = A₁₁ ⊕ 0.
        let a = psd(&[2.0, 3.0]);
        let bp = psd(&[0.5, 0.0]);
        let (bl, _) = block_decompose(&a, &bp, 1).unwrap();
        let (ap, rec) = construct_aprime(&bl).unwrap();
        assert!(rec.pass);
        assert!(ap.as_matrix().sub(&M::from_diag(&[2.0, 0.0])).unwrap().max_abs() < 1e-15);

        // A of rank k: A′ = A.
        let a = PsdMatrix::<f64>::from_matrix(M::from_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap()).unwrap();
        let bl = Blocks {
            basis: M::identity(2),
            a_rotated: a.clone(),
            a11: psd(&[1.0]),
            a12: M::from_rows(&[&[2.0]]).unwrap(),
            a22: M::from_rows(&[&[4.0]]).unwrap(),
            b11: psd(&[1.0]),
            a11_inverse: psd(&[1.0]),
            a11_condition: 1.0,
        };
        let (ap, rec) = construct_aprime(&bl).unwrap();
        assert!(rec.pass, "{rec:?}");
        assert!(ap.as_matrix().sub(a.as_matrix()).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn zxy_examples() {
        let f = PsdMatrix::<f64>::identity(2);
        let (z, rec) = assemble_zxy(&f, &M::zeros(2, 1), 0.5).unwrap();
        assert!(rec.pass, "{rec:?}");
        assert!((z.s - 1.0).abs() < 1e-15);
        assert!(z.k_mat.as_matrix().sub(&M::identity(2)).unwrap().max_abs() < 1e-15);
        let ones = M::from_blocks(&M::identity(2), &M::identity(2), &M::identity(2), &M::identity(2)).unwrap();
        assert!(z.z.sub(&ones).unwrap().max_abs() < 1e-15);

        let (z, _) = assemble_zxy(&psd(&[2.0]), &M::zeros(1, 1), 0.5).unwrap();
        assert!((z.k_mat.as_matrix()[(0, 0)].re - 1.25).abs() < 1e-15);

        assert!(matches!(assemble_zxy(&f, &M::zeros(2, 1), 0.0), Err(Error::PipelineDomain { .. })));
        assert!(matches!(assemble_zxy(&f, &M::zeros(2, 1), 1.0), Err(Error::PipelineDomain { .. })));
    }

    #[test]
    fn y_eigenvalue_examples() {
        for s in [1.0f64 / 3.0, 1.0, 3.0] {
            let lam = y_eigenvalue_closed_form(s, 1.0);
            assert!((lam - (s.sqrt() + 1.0 / s.sqrt())).abs() < 1e-14);
        }
        assert!((y_eigenvalue_closed_form(1.0f64, 1.0) - 2.0).abs() < 1e-15);
        let (spec, rec) = y_eigenvalues(3.0, &psd(&[1.0, 2.0, 5.0])).unwrap();
        assert!(rec.pass, "{rec:?}");
        assert_eq!(spec.len(), 3);
        assert!(y_eigenvalues(1.0, &psd(&[0.5])).is_err());
        assert!(y_eigenvalues(0.0, &psd(&[1.0])).is_err());
    }

    #[test]
    fn hermitian_part_examples() {
        let x = M::from_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let r = hermitian_part_bound_check(&x).unwrap();
        assert!((r[0].lhs - 0.5).abs() < 1e-15 && (r[0].rhs - 1.0).abs() < 1e-15);
        assert!((r[1].lhs + 0.5).abs() < 1e-15 && r[1].rhs.abs() < 1e-15);
        assert!(r.iter().all(|r| r.holds));

        let a = random_psd::<f64>(4, 4, 3, Field::Complex).unwrap();
        for r in hermitian_part_bound_check(a.as_matrix()).unwrap() {
            assert!((r.lhs - r.rhs).abs() < 1e-12 * r.rhs.max(1.0));
        }
    }

    #[test]
    fn identity_instance_is_tight() {
        let i = PsdMatrix::<f64>::identity(3);
        let t = run_pipeline(&i, &i, 0.3, 1).unwrap();
        assert!((t.final_bound - 1.0).abs() < 1e-10);
        assert!(t.passed());
    }

    #[test]
    fn final_identity_values() {
        assert!((final_identity(0.2) - 1.0).abs() < 1e-15);
        assert!((final_identity(0.5) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn random_runs_pass() {
        for seed in 0..30u64 {
            let n = 2 + (seed as usize % 5);
            let field = if seed % 2 == 0 { Field::Real } else { Field::Complex };
            let a = random_psd::<f64>(n, n, seed, field).unwrap();
            let b = random_psd::<f64>(n, n, seed + 1000, field).unwrap();
            for k in 1..=n {
                let t = trace_pipeline(&a, &b, 0.35, k).unwrap();
                if !t.degenerate {
                    t.ensure_passed().unwrap_or_else(|e| panic!("seed {seed} n {n} k {k}: {e}"));
                }
            }
        }
    }

    #[test]
    fn singular_a_runs_pass() {
        for seed in 0..20u64 {
            let n = 3 + (seed as usize % 3);
            let a = random_psd::<f64>(n, n - 1, seed, Field::Complex).unwrap();
            let b = random_psd::<f64>(n, n, seed + 77, Field::Complex).unwrap();
            for k in 1..n {
                let t = trace_pipeline(&a, &b, 0.6, k).unwrap();
                assert_eq!(t.b_prime_route, BPrimeRoute::RangeOfB);
                if !t.degenerate {
                    t.ensure_passed().unwrap_or_else(|e| panic!("seed {seed} n {n} k {k}: {e}"));
                }
            }
        }
    }

    #[test]
    fn endpoints_are_refused() {
        let i = PsdMatrix::<f64>::identity(2);
        assert!(matches!(run_pipeline(&i, &i, 0.0, 1), Err(Error::PipelineDomain { .. })));
        assert!(matches!(run_pipeline(&i, &i, 1.0, 1), Err(Error::PipelineDomain { .. })));
    }
}
