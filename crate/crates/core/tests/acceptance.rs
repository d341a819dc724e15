//! Acceptance suite: one line per criterion, nonzero exit if any criterion fails.
//!
//! Run alone with `cargo test -p fqmoments --test acceptance`.

use std::process::ExitCode;
use std::time::Instant;

use fqmoments::arithfns::{arith_profile, log_omega_shift};
use fqmoments::charmod::Parity;
use fqmoments::charmod::{CharFilter, CharacterGroup, OrthogonalityContext};
use fqmoments::fieldpoly::{
    divisors, enumerate_monic, enumerate_monic_up_to, enumerate_residues, irreducibles, Poly, PrimeField,
};
use fqmoments::lfunc::{afe_discrepancy, l_polynomial};
use fqmoments::moments::{
    main_term_lemma_check, moment_decomposition, moment_orthogonality, offdiag_bound_check, one_twist_cells,
    reciprocity_one_twist, reciprocity_triple, scan_moments, select_moduli, summarize, trend_fit, two_twist_cells,
    Family, MomentEngine, MomentReport, ScanOptions, Weight, XBranch, RECIPROCITY_TOLERANCE,
};
use fqmoments::Result;

const SEED: u64 = 0x5eed;
/// moduli sampled per degree where a degree has more than this many
const SAMPLE_PER_DEGREE: usize = 60;
/// fitted constant allowed for the off-diagonal bound ratio
const OFFDIAG_CONSTANT: f64 = 3.0;
/// ε in the |R|^{−ε} normalisation of the AFE discrepancy trend
const AFE_EPSILON: f64 = 0.25;

struct Outcome {
    passed: bool,
    detail: String,
}

fn f3() -> PrimeField {
    PrimeField::new(3).expect("3 is prime")
}

fn all_moduli(field: PrimeField, degrees: std::ops::RangeInclusive<usize>) -> Vec<Poly> {
    degrees.flat_map(|d| enumerate_monic(field, d)).collect()
}

fn criterion_1() -> Result<Outcome> {
    let mut bad = Vec::new();
    let moduli = all_moduli(f3(), 1..=5);
    for r in &moduli {
        let g = CharacterGroup::new(r)?;
        let counted = g.filtered(CharFilter::primitive())?.len() as u64;
        let formula = arith_profile(r)?.phi_star;
        if counted != formula {
            bad.push(format!("{r}: {counted} vs {formula}"));
        }
    }
    Ok(Outcome {
        passed: bad.is_empty() && moduli.len() == 363,
        detail: format!(
            "{} moduli, {} mismatches {:?}",
            moduli.len(),
            bad.len(),
            bad.iter().take(3).collect::<Vec<_>>()
        ),
    })
}

fn criterion_2() -> Result<Outcome> {
    let field = f3();
    let mut worst = 0.0f64;
    let mut pairs = 0usize;
    for r in all_moduli(field, 0..=3) {
        let ctx = OrthogonalityContext::new(CharacterGroup::new(&r)?)?;
        let residues: Vec<Poly> = enumerate_residues(field, r.deg()).collect();
        for a in &residues {
            for b in &residues {
                worst = worst.max(ctx.check(a, b)?.residual);
                pairs += 1;
            }
        }
    }
    Ok(Outcome {
        passed: worst < 1e-8,
        detail: format!("{pairs} residue pairs, max residual {worst:.2e}"),
    })
}

fn criterion_3() -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut chars = 0usize;
    let mut failures = 0usize;
    for q in [3, 5] {
        for r in all_moduli(PrimeField::new(q)?, 1..=4) {
            let g = CharacterGroup::new(&r)?;
            for chi in g.filtered(CharFilter::nonprincipal())? {
                let l = l_polynomial(&chi)?;
                worst = worst.max(l.top.norm() / r.norm_f64());
                chars += 1;
                failures += usize::from(!l.truncation_ok());
            }
        }
    }
    Ok(Outcome {
        passed: failures == 0,
        detail: format!("{chars} characters, max |c_degR|/|R| = {worst:.2e}, {failures} failures"),
    })
}

fn criterion_4(engine: &MomentEngine) -> Result<Outcome> {
    let irr = irreducibles(f3(), 4);
    let (mut cells, mut failed, mut worst) = (0, 0, 0.0f64);
    let mut anchor = false;
    for p in &irr {
        for h in irr.iter().filter(|h| *h != p && h.deg() <= p.deg()) {
            let c = reciprocity_one_twist(engine, p, h, false, RECIPROCITY_TOLERANCE)?;
            cells += 1;
            failed += usize::from(!c.passed);
            worst = worst.max(c.residual / c.scale);
            if p.to_digits() == "10" && h.to_digits() == "11" {
                anchor = c.passed && c.lhs.abs() < 1e-12 && c.rhs.abs() < 1e-12;
            }
        }
    }
    Ok(Outcome {
        passed: failed == 0 && anchor,
        detail: format!(
            "{cells} (P,H) cells, {failed} failed, max residual/scale {worst:.2e}, anchor P=T H=T+1 ok: {anchor}"
        ),
    })
}

fn criterion_5(engine: &MomentEngine) -> Result<Outcome> {
    let irr = irreducibles(f3(), 3);
    let (mut cells, mut failed, mut worst) = (0, 0, 0.0f64);
    for dq in 3..=4 {
        for qm in irreducibles(f3(), dq).iter().filter(|p| p.deg() == dq) {
            for h in &irr {
                for k in &irr {
                    if h == k || h == qm || k == qm || h.deg() + k.deg() > dq {
                        continue;
                    }
                    for parity in [Parity::Odd, Parity::Even] {
                        let c = reciprocity_triple(engine, qm, h, k, parity, RECIPROCITY_TOLERANCE)?;
                        cells += 1;
                        failed += usize::from(!c.passed);
                        worst = worst.max(c.residual / c.scale);
                    }
                }
            }
        }
    }
    Ok(Outcome {
        passed: failed == 0 && cells > 0,
        detail: format!("{cells} (Q,H,K,±) cells, {failed} failed, max residual/scale {worst:.2e}"),
    })
}

fn criterion_6(engine: &MomentEngine) -> Result<Outcome> {
    let field = f3();
    let mut cells = Vec::new();
    for d in 2..=5 {
        let moduli = select_moduli(field, d, Some(8), SEED);
        cells.extend(one_twist_cells(&moduli, 2)?);
        cells.extend(two_twist_cells(&moduli, 1, 2)?);
    }
    let (mut worst, mut worst_orth) = (0.0f64, 0.0f64);
    let mut failed = 0;
    for spec in &cells {
        let data = engine.family(&spec.r, Family::Primitive)?;
        let afe = data.report(spec, Weight::Afe)?.observed;
        let dec = moment_decomposition(spec)?.total;
        let rel = (dec - afe).abs() / afe.abs().max(1.0);
        worst = worst.max(rel);
        failed += usize::from(rel >= 1e-9);
        let exact = data.report(spec, Weight::Exact)?.observed;
        worst_orth = worst_orth.max((moment_orthogonality(spec)?.observed - exact).abs() / exact.abs().max(1.0));
    }
    engine.forget_families();
    Ok(Outcome {
        passed: failed == 0 && cells.len() >= 30,
        detail: format!(
            "{} cells, max relative gap {worst:.2e}, {failed} failed (exact vs orthogonality route {worst_orth:.2e})",
            cells.len()
        ),
    })
}

fn criterion_7() -> Result<Outcome> {
    let field = f3();
    let (mut cells, mut exact, mut sieve, mut h1_cells, mut h1_exact) = (0, 0, 0, 0, 0);
    let (mut coprime_cells, mut coprime_exact) = (0, 0);
    let mut first_miss = None;
    // (deg R, max over cells of residual/(|H|·log(ω+2) + tail))
    let mut per_deg = [0.0f64; 5];
    let mut long_c = 0.0f64;
    let mut short_c = 0.0f64;
    for r in all_moduli(field, 1..=4) {
        for h in enumerate_monic_up_to(field, 2.min(r.deg() - 1)) {
            for x in 1..=6 {
                let c = main_term_lemma_check(&r, &h, x)?;
                cells += 1;
                exact += usize::from(c.exact);
                sieve += usize::from(c.sieve_exact);
                if h.gcd(&r)?.is_one() {
                    coprime_cells += 1;
                    coprime_exact += usize::from(c.exact);
                }
                if h.is_one() {
                    h1_cells += 1;
                    h1_exact += usize::from(c.exact);
                }
                if !c.exact && first_miss.is_none() {
                    first_miss = Some(format!("R={r} H={h} x={x}: {} vs {}", c.lhs, c.decomposition));
                }
                let omega = arith_profile(&r)?.omega;
                let base = h.norm_f64() * log_omega_shift(omega);
                let scaled = match c.branch {
                    XBranch::Long => {
                        long_c = long_c.max(c.residual / base);
                        c.residual / base
                    }
                    XBranch::Short => {
                        let s = c.residual / (base + c.tail_bound.unwrap_or(0.0));
                        short_c = short_c.max(s);
                        s
                    }
                };
                per_deg[r.deg()] = per_deg[r.deg()].max(scaled);
            }
        }
    }
    let points: Vec<(f64, f64)> = (1..=4).map(|d| (d as f64, per_deg[d])).collect();
    let trend = trend_fit(&points);
    Ok(Outcome {
        passed: exact == cells && trend.flat,
        detail: format!(
            "decomposition exact on {exact}/{cells} cells (coprime H: {coprime_exact}/{coprime_cells}, H=1: {h1_exact}/{h1_cells}); \
             first miss {}; \
             corrected sieve exact on {sieve}/{cells}; fitted C long {long_c:.3} short {short_c:.3}, \
             trend slope {:.3} ± {:.3}",
            first_miss.unwrap_or_else(|| "none".into()),
            trend.slope,
            trend.slope_se
        ),
    })
}

type Criterion<'a> = Box<dyn Fn() -> Result<Outcome> + 'a>;

fn describe(label: &str, reps: &[MomentReport]) -> (bool, String) {
    let s = summarize(reps, |r| r.r.len() - 1);
    let maxima: Vec<String> = s
        .per_degree
        .iter()
        .map(|d| format!("{}:{:.3}", d.deg, d.max_residual_scaled))
        .collect();
    (
        s.trend.flat,
        format!(
            "{label}: {} cells, C = {:.3}, per-degree max [{}], slope {:.3} ± {:.3}",
            reps.len(),
            s.fitted_constant,
            maxima.join(" "),
            s.trend.slope,
            s.trend.slope_se
        ),
    )
}

fn criterion_8(engine: &MomentEngine) -> Result<Outcome> {
    let field = f3();
    let mut one = Vec::new();
    let mut two = Vec::new();
    for d in 3..=8 {
        let moduli = select_moduli(field, d, Some(SAMPLE_PER_DEGREE), SEED);
        one.extend(scan_moments(
            engine,
            &one_twist_cells(&moduli, 2)?,
            ScanOptions::default(),
        )?);
        two.extend(scan_moments(
            engine,
            &two_twist_cells(&moduli, 2, 2)?,
            ScanOptions::default(),
        )?);
    }
    let untwisted: Vec<MomentReport> = one.iter().filter(|r| r.h == "1").cloned().collect();
    let (ok1, d1) = describe("one twist", &one);
    let (ok2, d2) = describe("two twists", &two);
    let (_, d0) = describe("H=1 only (diagnostic)", &untwisted);
    Ok(Outcome {
        passed: ok1 && ok2,
        detail: format!("{d1}; {d2}; {d0}"),
    })
}

fn criterion_9() -> Result<Outcome> {
    let field = f3();
    let twists: Vec<Poly> = enumerate_monic_up_to(field, 1).collect();
    let mut worst = 0.0f64;
    let mut cells = 0;
    let mut per_deg = [0.0f64; 6];
    for r in all_moduli(field, 1..=5) {
        for f in divisors(&r)? {
            for h in &twists {
                for k in &twists {
                    for z in 0..r.deg() {
                        let c = offdiag_bound_check(&r, &f, h, k, z)?;
                        cells += 1;
                        worst = worst.max(c.ratio);
                        per_deg[r.deg()] = per_deg[r.deg()].max(c.ratio);
                    }
                }
            }
        }
    }
    let points: Vec<(f64, f64)> = (1..=5).map(|d| (d as f64, per_deg[d])).collect();
    let trend = trend_fit(&points);
    Ok(Outcome {
        passed: worst <= OFFDIAG_CONSTANT,
        detail: format!(
            "{cells} (R,F,H,K,z) cells, fitted C = {worst:.4} (limit {OFFDIAG_CONSTANT}), per-degree trend slope {:.3} ± {:.3}",
            trend.slope, trend.slope_se
        ),
    })
}

fn criterion_10() -> Result<Outcome> {
    let field = f3();
    let mut anchor = f64::NAN;
    let mut points = Vec::new();
    let mut maxima = Vec::new();
    for d in 1..=6 {
        let mut worst = 0.0f64;
        for r in enumerate_monic(field, d) {
            let g = CharacterGroup::new(&r)?;
            for chi in g.filtered(CharFilter::primitive())? {
                let a = afe_discrepancy(&chi)?;
                worst = worst.max(a.scaled_residual);
                if r.to_digits() == "10" {
                    anchor = a.scaled_residual;
                }
            }
        }
        maxima.push(format!("{d}:{worst:.3}"));
        points.push((d as f64, worst * 3f64.powi(d as i32).powf(-AFE_EPSILON)));
    }
    let anchor_ok = (anchor - 3f64.sqrt()).abs() < 1e-12;
    let trend = trend_fit(&points);
    Ok(Outcome {
        passed: anchor_ok && trend.flat,
        detail: format!(
            "anchor R=T scaled residual {anchor:.12} (√3: {anchor_ok}); per-degree max [{}]; \
             trend of max·|R|^-{AFE_EPSILON}: slope {:.3} ± {:.3}",
            maxima.join(" "),
            trend.slope,
            trend.slope_se
        ),
    })
}

fn main() -> ExitCode {
    let engine = MomentEngine::new();
    let criteria: Vec<(&str, Criterion)> = vec![
        ("phi-star equals the primitive-character count", Box::new(criterion_1)),
        ("orthogonality over all residue pairs", Box::new(criterion_2)),
        ("L-polynomial truncation", Box::new(criterion_3)),
        (
            "one-twist reciprocity (prime moduli)",
            Box::new(|| criterion_4(&engine)),
        ),
        ("triple reciprocity, both parities", Box::new(|| criterion_5(&engine))),
        (
            "dual-route oracle: AFE direct vs decomposition",
            Box::new(|| criterion_6(&engine)),
        ),
        ("main-term lemma: exact divisor decomposition", Box::new(criterion_7)),
        (
            "twisted second moment main-term scan",
            Box::new(|| criterion_8(&engine)),
        ),
        ("off-diagonal bound ratios", Box::new(criterion_9)),
        ("AFE discrepancy boundedness", Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (passed, detail) = match run() {
            Ok(o) => (o.passed, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!passed);
        println!(
            "criterion {:>2} [{}] {name} ({:.1}s): {detail}",
            i + 1,
            if passed { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
