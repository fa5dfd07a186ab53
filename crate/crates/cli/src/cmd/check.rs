use normbridge::checks::{
    agm_classical, cauchy_schwarz_classical, check_agm_singular, check_agm_singular_all, check_eig_product_majorization,
    check_false_variant, check_false_variant_all, check_holder_norm_form, check_majorization_chain, check_singular_form,
    check_singular_form_all, check_sv_product_majorization, check_theorem1_grid, check_theorem2, check_theorem2_all,
    check_weyl_majorant,
};
use normbridge::gauge::{GaugeSelector, GaugeSpec};
use normbridge::instance::InstancePair;
use normbridge::pipeline::hermitian_part_bound_check;
use normbridge::CheckReport;
use serde_json::json;

use crate::args::{CheckArgs, CheckTarget};
use crate::output::{emit_reports, envelope, sink};
use crate::{source, CliError, Verdict};

fn gauges(args: &CheckArgs, file_phi: Option<GaugeSpec>, n: usize) -> Result<Vec<GaugeSpec>, CliError> {
    if let Some(s) = &args.phi {
        return Ok(vec![s.parse()?]);
    }
    if let Some(list) = &args.norms {
        let mut phis: Vec<GaugeSpec> = list.0.iter().flat_map(|s| s.expand(n)).collect();
        phis.dedup();
        return Ok(phis);
    }
    Ok(match file_phi {
        Some(phi) => vec![phi],
        None => GaugeSelector::Grid.expand(n),
    })
}

pub fn reports(args: &CheckArgs) -> Result<Vec<CheckReport>, CliError> {
    use CheckTarget::*;
    let file = source::load(&args.instance, args.target.uses_factors())?;
    let q = args.q.or(file.q).unwrap_or(0.5);
    let k = args.k.or(file.k);
    let n = file.pair.dim();
    let (r, p) = (args.r, args.p);
    let psd = || file.pair.psd_pair();
    let factors = || file.pair.factor_pair();

    let out = match args.target {
        Theorem2 => {
            let (a, b) = psd()?;
            match k {
                Some(k) => vec![check_theorem2(&a, &b, q, k)?],
                None => check_theorem2_all(&a, &b, q)?,
            }
        }
        FalseVariant => {
            let (a, b) = psd()?;
            match k {
                Some(k) => vec![check_false_variant(&a, &b, q, k)?],
                None => check_false_variant_all(&a, &b, q)?,
            }
        }
        SingularForm => {
            let (x, y) = factors()?;
            match k {
                Some(k) => vec![check_singular_form(&x, &y, q, k)?],
                None => check_singular_form_all(&x, &y, q)?,
            }
        }
        AgmSingular => {
            let (x, y) = factors()?;
            match k {
                Some(k) => vec![check_agm_singular(&x, &y, k)?],
                None => check_agm_singular_all(&x, &y)?,
            }
        }
        Theorem1 => {
            let (x, y) = factors()?;
            check_theorem1_grid(&x, &y, q, &gauges(args, file.phi, n)?)?
        }
        CauchySchwarz | Agm | HolderNormForm => {
            let (x, y) = factors()?;
            gauges(args, file.phi, n)?
                .iter()
                .map(|phi| match args.target {
                    CauchySchwarz => cauchy_schwarz_classical(&x, &y, phi),
                    Agm => agm_classical(&x, &y, phi),
                    _ => check_holder_norm_form(&x, &y, q, r, p, phi),
                })
                .collect::<Result<_, _>>()?
        }
        WeylMajorant => {
            let (a, b) = psd()?;
            vec![check_weyl_majorant(&a, &b, r)?]
        }
        EigProductMajorization => {
            let (a, b) = psd()?;
            vec![check_eig_product_majorization(&a, &b, r)?]
        }
        SvProductMajorization => match &file.pair {
            InstancePair::Psd { a, b } => vec![check_sv_product_majorization(a.as_matrix(), b.as_matrix(), r)?],
            InstancePair::Factors { x, y } => vec![check_sv_product_majorization(x, y, r)?],
        },
        MajorizationChain => {
            let (x, y) = factors()?;
            check_majorization_chain(&x, &y, q, r)?
        }
        HermitianPartBound => {
            let (x, y) = factors()?;
            hermitian_part_bound_check(&x.matmul(&y.adjoint())?)?
        }
    };
    Ok(match args.tol {
        Some(t) => out.into_iter().map(|r| r.with_tol(t)).collect(),
        None => out,
    })
}

pub fn run(args: &CheckArgs) -> Result<Verdict, CliError> {
    if let Some(t) = args.tol.filter(|t| !(*t >= 0.0 && t.is_finite())) {
        return Err(CliError::Op(format!("--tol must be finite and non-negative, got {t}")));
    }
    let reports = reports(args)?;
    let mut head = envelope("check", args.instance.seed, args);
    head.insert("target".into(), json!(args.target));
    let mut w = sink(args.output.as_deref())?;
    emit_reports(&mut *w, args.format, head, &reports)?;
    Ok(Verdict::of(reports.iter().any(|r| !r.holds)))
}
