use rayon::prelude::*;
use serde::Serialize;

use fqmoments::charmod::Parity;
use fqmoments::fieldpoly::{irreducibles, Poly};
use fqmoments::moments::{
    reciprocity_one_twist, reciprocity_triple, MomentEngine, ReciprocityCheck, RECIPROCITY_TOLERANCE,
};
use fqmoments::Error;

use crate::args::{Common, ReciprocityArgs};
use crate::output::{emit, Header, Verdict};
use crate::Failure;

#[derive(Serialize)]
struct Row {
    identity: &'static str,
    q: u32,
    modulus: String,
    #[serde(rename = "H")]
    h: String,
    #[serde(rename = "K")]
    k: String,
    lhs: f64,
    rhs: f64,
    residual: f64,
    scale: f64,
    passed: bool,
}

enum Job {
    One(Poly, Poly),
    Triple(Poly, Poly, Poly, Parity),
}

fn run_job(engine: &MomentEngine, job: &Job, args: &ReciprocityArgs, tol: f64) -> Result<Row, Error> {
    let (identity, m, h, k, c): (_, _, _, Option<&Poly>, ReciprocityCheck) = match job {
        Job::One(p, h) => (
            if args.negative_control {
                "one-twist (+P control)"
            } else {
                "one-twist"
            },
            p,
            h,
            None,
            reciprocity_one_twist(engine, p, h, args.negative_control, tol)?,
        ),
        Job::Triple(qm, h, k, parity) => (
            match parity {
                Parity::Odd => "triple-odd",
                Parity::Even => "triple-even",
            },
            qm,
            h,
            Some(k),
            reciprocity_triple(engine, qm, h, k, *parity, tol)?,
        ),
    };
    Ok(Row {
        identity,
        q: m.field().q(),
        modulus: m.to_digits(),
        h: h.to_digits(),
        k: k.map_or_else(String::new, Poly::to_digits),
        lhs: c.lhs,
        rhs: c.rhs,
        residual: c.residual,
        scale: c.scale,
        passed: c.passed,
    })
}

pub fn run(common: &Common, args: &ReciprocityArgs) -> Result<(), Failure> {
    let field = common.field()?;
    if args.deg_r.lo == 0 {
        return Err(Failure::Usage("prime moduli have degree ≥ 1".into()));
    }
    let tol = common.tolerance_or(RECIPROCITY_TOLERANCE);
    let irr = irreducibles(field, args.deg_r.hi);
    let in_range = |p: &&Poly| p.deg() >= args.deg_r.lo;
    let mut jobs = Vec::new();
    for p in irr.iter().filter(in_range) {
        for h in irr.iter().filter(|h| *h != p && h.deg() <= p.deg()) {
            jobs.push(Job::One(p.clone(), h.clone()));
        }
    }
    if !args.negative_control {
        for qm in irr.iter().filter(in_range) {
            for (i, h) in irr.iter().enumerate() {
                for k in &irr[i + 1..] {
                    if h == qm || k == qm || h.deg() + k.deg() > qm.deg() {
                        continue;
                    }
                    for parity in [Parity::Odd, Parity::Even] {
                        jobs.push(Job::Triple(qm.clone(), h.clone(), k.clone(), parity));
                    }
                }
            }
        }
    }
    let engine = common.engine();
    let rows: Vec<Row> = jobs
        .par_iter()
        .map(|j| run_job(&engine, j, args, tol))
        .collect::<Result<_, _>>()?;

    let mut one = Verdict::new("reciprocity one-twist");
    let mut triple = Verdict::new("reciprocity triple");
    for r in &rows {
        let v = if r.identity.starts_with("triple") {
            &mut triple
        } else {
            &mut one
        };
        v.record(r.passed, r.residual / r.scale);
    }
    if args.negative_control {
        one.notes
            .push("twist +P in place of −P: failures are the expected outcome".into());
    }
    let mut header = Header::new("reciprocity", common);
    header
        .add("deg-r", args.deg_r)
        .add("negative-control", args.negative_control)
        .tolerance("reciprocity (times scale)", tol, common.tolerance.is_some());
    let verdicts = if args.negative_control {
        vec![one]
    } else {
        vec![one, triple]
    };
    emit(common, &header, &rows, &verdicts)
}
