use clap::ValueEnum;
use rayon::prelude::*;

use fqmoments::moments::{
    moment_decomposition, one_twist_cells, scan_moments, select_moduli, summarize, two_twist_cells, Family,
    MomentReport, MomentSpec, Normalization, ScanOptions, Weight,
};

use crate::args::{Common, RouteArg, ScanArgs};
use crate::output::{emit, Header, Verdict};
use crate::Failure;

/// Relative tolerance between the AFE direct moment and the decomposition.
const DUAL_ROUTE_TOLERANCE: f64 = 1e-9;

fn degree(r: &MomentReport) -> usize {
    r.r.len() - 1
}

fn cells(common: &Common, args: &ScanArgs, two: bool) -> Result<(Vec<MomentSpec>, bool), Failure> {
    if let Some(m) = &args.modulus {
        let r = common.parse_poly(m)?;
        let h = common.parse_poly(args.twist.as_deref().unwrap_or("1"))?;
        let spec = match &args.twist_k {
            Some(k) => MomentSpec::two_twist(r, h, common.parse_poly(k)?),
            None => MomentSpec::new(r, h),
        };
        spec.validate()?;
        return Ok((vec![spec], true));
    }
    if args.deg_r.lo == 0 {
        return Err(Failure::Usage("moduli need deg R ≥ 1".into()));
    }
    let field = common.field()?;
    let mut out = Vec::new();
    for d in args.deg_r.iter() {
        let moduli = select_moduli(field, d, args.sample, common.seed);
        out.extend(if two {
            two_twist_cells(&moduli, args.deg_h, args.deg_k)?
        } else {
            one_twist_cells(&moduli, args.deg_h)?
        });
    }
    Ok((out, false))
}

fn decomposition_rows(cells: &[MomentSpec], timing: bool) -> Result<Vec<MomentReport>, Failure> {
    let rows: Vec<MomentReport> = cells
        .par_iter()
        .map(|c| {
            moment_decomposition(c).map(|d| {
                let mut rep = d.report;
                if !timing {
                    rep.seconds = 0.0;
                }
                rep
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(rows)
}

pub fn run(common: &Common, args: &ScanArgs, two: bool) -> Result<(), Failure> {
    let command = if two { "scan-two-twist" } else { "scan-one-twist" };
    let (cells, single) = cells(common, args, two)?;
    let standard = args.family == Family::Primitive && args.normalization == Normalization::Mean;
    if args.routes.contains(&RouteArg::Decomposition) && !standard {
        return Err(Failure::Usage(
            "the decomposition route needs --family primitive --normalization mean".into(),
        ));
    }
    let engine = common.engine();
    let opts = |weight| ScanOptions {
        family: args.family,
        normalization: args.normalization,
        weight,
        timing: common.timing,
    };

    let mut per_route: Vec<Vec<MomentReport>> = Vec::new();
    for route in &args.routes {
        per_route.push(match route {
            RouteArg::Direct => scan_moments(&engine, &cells, opts(Weight::Exact))?,
            RouteArg::DirectAfe => scan_moments(&engine, &cells, opts(Weight::Afe))?,
            RouteArg::Decomposition => decomposition_rows(&cells, common.timing)?,
        });
    }
    let rows: Vec<MomentReport> = (0..cells.len())
        .flat_map(|i| per_route.iter().map(move |rs| rs[i].clone()))
        .collect();

    let mut verdicts = Vec::new();
    let tol = common.tolerance_or(DUAL_ROUTE_TOLERANCE);
    if standard {
        let checked: Vec<MomentSpec> = cells
            .iter()
            .filter(|c| c.r.deg() <= args.dual_route_max_deg)
            .cloned()
            .collect();
        let afe = scan_moments(&engine, &checked, opts(Weight::Afe))?;
        let dec = decomposition_rows(&checked, false)?;
        let mut v = Verdict::new("dual route (AFE direct vs decomposition)");
        for (a, d) in afe.iter().zip(&dec) {
            let rel = (a.observed - d.observed).abs() / a.observed.abs().max(1.0);
            v.record(rel < tol, rel);
        }
        verdicts.push(v);
    }

    let primary = per_route.first().cloned().unwrap_or_default();
    if single {
        for r in &rows {
            eprintln!(
                "R={} H={} K={} {} ({}): observed {:.12} predicted {:.12} residual_scaled {:.6}",
                r.r, r.h, r.k, r.family, r.route, r.observed, r.predicted, r.residual_scaled
            );
        }
    } else {
        let s = summarize(&primary, degree);
        let mut v = Verdict::new("main-term residual trend");
        v.record(s.trend.flat, s.fitted_constant);
        v.constants
            .push(("fitted C (max residual_scaled)".into(), s.fitted_constant));
        v.constants.push(("trend slope".into(), s.trend.slope));
        v.constants.push(("trend slope SE".into(), s.trend.slope_se));
        for d in &s.per_degree {
            v.constants.push((
                format!("max residual_scaled, deg R = {} ({} cells)", d.deg, d.cells),
                d.max_residual_scaled,
            ));
        }
        let untwisted: Vec<MomentReport> = primary.iter().filter(|r| r.h == "1" && r.k == "1").cloned().collect();
        if !untwisted.is_empty() {
            let u = summarize(&untwisted, degree);
            v.notes.push(format!(
                "untwisted cells only: C = {:.6}, slope {:.6} ± {:.6}",
                u.fitted_constant, u.trend.slope, u.trend.slope_se
            ));
        }
        verdicts.push(v);
    }

    let mut header = Header::new(command, common);
    match &args.modulus {
        Some(m) => {
            header
                .add("modulus", m)
                .add("twist", args.twist.as_deref().unwrap_or("1"));
            if let Some(k) = &args.twist_k {
                header.add("twist-k", k);
            }
        }
        None => {
            header.add("deg-r", args.deg_r).add("deg-h", args.deg_h);
            if two {
                header.add("deg-k", args.deg_k);
            }
            header.add("sample", args.sample.map_or("all".to_string(), |s| s.to_string()));
        }
    }
    let routes: Vec<String> = args
        .routes
        .iter()
        .filter_map(|r| r.to_possible_value().map(|v| v.get_name().to_string()))
        .collect();
    header
        .add("family", args.family)
        .add("normalization", args.normalization)
        .add("routes", routes.join(","))
        .add("dual-route-max-deg", args.dual_route_max_deg)
        .add("residual_scaled", "|observed − predicted| / (|HK|^{1/2}·log(ω(R)+2))")
        .tolerance("dual-route (relative)", tol, common.tolerance.is_some());
    let result = emit(common, &header, &rows, &verdicts);
    let st = engine.stats();
    eprintln!(
        "unit-group tables: {} built, {} cache hits, {} rebuilt, {:.3}s constructing",
        st.built, st.cache_hits, st.rebuilt, st.table_seconds
    );
    result
}
