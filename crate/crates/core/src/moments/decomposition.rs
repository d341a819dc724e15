//! Character-free routes to the primitive moment.
//!
//! After orthogonality, a primitive-family sum of χ(A)χ̄(B) becomes
//! Σ_{EF=R} μ(E)φ(F)·[AH ≡ BK mod F]. Both routes below count congruent
//! pairs through residue histograms, one degree at a time.

use super::stopwatch::Stopwatch;

use serde::Serialize;

use super::family::build_report;
use super::spec::{Family, MomentReport, MomentSpec, Normalization, Route};
use crate::arithfns::{arith_profile, mu, phi};
use crate::charmod::ResidueRing;
use crate::error::{Error, Result};
use crate::fieldpoly::{divisor_pairs, enumerate_monic, factor, Poly};

/// Monic polynomials of degree < n with a coprimality flag against R.
pub(crate) struct MonicPool {
    /// (degree, polynomial, gcd(A, R) = 1)
    pub items: Vec<(usize, Poly, bool)>,
}

impl MonicPool {
    pub fn new(r: &Poly, n: usize) -> Result<Self> {
        let field = r.field();
        let ring = ResidueRing::new(r);
        let primes: Vec<Poly> = factor(r)?.factors.into_iter().map(|(p, _)| p).collect();
        let bad = ring.non_units(&primes);
        let items = (0..n)
            .flat_map(|d| enumerate_monic(field, d).map(move |a| (d, a)))
            .map(|(d, a)| {
                let unit = !bad[ring.reduce(&a) as usize];
                (d, a, unit)
            })
            .collect();
        Ok(Self { items })
    }
}

/// Per-degree histograms of X·A mod F over the coprime monic A in the pool.
fn histograms(pool: &MonicPool, x: &Poly, f: &Poly, degrees: usize) -> Vec<Vec<u32>> {
    let ring = ResidueRing::new(f);
    let mut h = vec![vec![0u32; ring.size() as usize]; degrees];
    for (d, a, unit) in &pool.items {
        if *unit && *d < degrees {
            h[*d][ring.reduce(&(a * x)) as usize] += 1;
        }
    }
    h
}

fn dot(a: &[u32], b: &[u32]) -> u64 {
    a.iter().zip(b).map(|(&x, &y)| u64::from(x) * u64::from(y)).sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    /// (2/φ*(R))·Σ_{EF=R} μ(E)φ(F)·Σ_{deg AB < deg R, AH ≡ BK (F)} |AB|^{-1/2}
    pub total: f64,
    /// the AH = BK part
    pub diagonal: f64,
    pub off_diagonal: f64,
    pub report: MomentReport,
}

fn check_primitive_mean(spec: &MomentSpec) -> Result<()> {
    spec.validate()?;
    if spec.family != Family::Primitive || spec.normalization != Normalization::Mean {
        return Err(Error::InvalidSpec(
            "this route needs the primitive family with mean normalization".into(),
        ));
    }
    Ok(())
}

/// Σ_{A,B monic, deg AB < deg R, AH = BK, (AB,R) = 1} |AB|^{-1/2}, by enumeration.
pub fn diagonal_sum(r: &Poly, h: &Poly, k: &Poly) -> Result<f64> {
    let d = r.deg();
    let q = f64::from(r.field().q());
    let pool = MonicPool::new(r, d)?;
    let mut total = 0.0;
    for (da, a, unit) in &pool.items {
        if !unit {
            continue;
        }
        let ah = a * h;
        let (b, rem) = ah.divrem(k)?;
        if !rem.is_zero() || da + b.deg() >= d || !b.is_coprime(r)? {
            continue;
        }
        total += q.powf(-((da + b.deg()) as f64) / 2.0);
    }
    Ok(total)
}

/// (2/|H|^{1/2})·Σ_{deg A < (deg R − deg H)/2, (AH,R)=1} 1/|A|, the K = 1 diagonal in closed form.
pub fn diagonal_closed_form(r: &Poly, h: &Poly) -> Result<f64> {
    if !h.is_coprime(r)? {
        return Ok(0.0);
    }
    let (dr, dh) = (r.deg(), h.deg());
    let q = f64::from(r.field().q());
    let mut sum = 0.0;
    // deg A < (dr − dh)/2  ⇔  2·deg A + dh < dr
    let mut n = 0;
    while 2 * n + dh < dr {
        for a in enumerate_monic(r.field(), n) {
            if a.is_coprime(r)? {
                sum += q.powi(-(n as i32));
            }
        }
        n += 1;
    }
    Ok(2.0 / h.norm_f64().sqrt() * sum)
}

pub fn moment_decomposition(spec: &MomentSpec) -> Result<Decomposition> {
    check_primitive_mean(spec)?;
    let start = Stopwatch::start();
    let (r, h, k) = (&spec.r, &spec.h, &spec.k);
    let d = r.deg();
    let q = f64::from(r.field().q());
    let profile = arith_profile(r)?;
    let pool = MonicPool::new(r, d)?;
    let diag = diagonal_sum(r, h, k)?;
    let mut weighted = 0.0;
    let mut weighted_off = 0.0;
    for (e, f) in divisor_pairs(r)? {
        let m = mu(&e)?;
        if m == 0 {
            continue;
        }
        let w = f64::from(m) * phi(&f)? as f64;
        let ha = histograms(&pool, h, &f, d);
        let kb = histograms(&pool, k, &f, d);
        let mut s_f = 0.0;
        for (a, ha_a) in ha.iter().enumerate().take(d) {
            for (b, kb_b) in kb.iter().enumerate().take(d - a) {
                s_f += dot(ha_a, kb_b) as f64 * q.powf(-((a + b) as f64) / 2.0);
            }
        }
        weighted += w * s_f;
        weighted_off += w * (s_f - diag);
    }
    let scale = 2.0 / profile.phi_star as f64;
    let total = scale * weighted;
    let report = build_report(spec, total, 0.0, Route::Decomposition, &profile, start.seconds())?;
    Ok(Decomposition {
        total,
        diagonal: 2.0 * diag,
        off_diagonal: scale * weighted_off,
        report,
    })
}

/// The exact primitive moment (1/φ*)Σ*|L(1/2,χ)|²χ(H)χ̄(K) without characters:
/// expand |L|² over coefficient pairs (f, g) of degree < deg R and apply orthogonality.
pub fn moment_orthogonality(spec: &MomentSpec) -> Result<MomentReport> {
    check_primitive_mean(spec)?;
    let start = Stopwatch::start();
    let (r, h, k) = (&spec.r, &spec.h, &spec.k);
    let d = r.deg();
    let q = f64::from(r.field().q());
    let profile = arith_profile(r)?;
    let pool = MonicPool::new(r, d)?;
    let weights: Vec<f64> = (0..d).map(|n| q.powf(-(n as f64) / 2.0)).collect();
    let mut raw = 0.0;
    for (e, f) in divisor_pairs(r)? {
        let m = mu(&e)?;
        if m == 0 {
            continue;
        }
        let ha = histograms(&pool, h, &f, d);
        let kb = histograms(&pool, k, &f, d);
        let fold = |hist: &[Vec<u32>]| -> Vec<f64> {
            let mut out = vec![0.0; hist[0].len()];
            for (n, row) in hist.iter().enumerate() {
                for (o, &c) in out.iter_mut().zip(row) {
                    *o += f64::from(c) * weights[n];
                }
            }
            out
        };
        let (wa, wb) = (fold(&ha), fold(&kb));
        let s: f64 = wa.iter().zip(&wb).map(|(x, y)| x * y).sum();
        raw += f64::from(m) * phi(&f)? as f64 * s;
    }
    let observed = raw / profile.phi_star as f64;
    build_report(spec, observed, 0.0, Route::Orthogonality, &profile, start.seconds())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldpoly::PrimeField;
    use crate::moments::{moment_direct, moment_direct_afe};

    fn f3() -> PrimeField {
        PrimeField::new(3).unwrap()
    }

    #[test]
    fn modulus_t() {
        let spec = MomentSpec::new(Poly::t(f3()), Poly::one(f3()));
        let dec = moment_decomposition(&spec).unwrap();
        assert!((dec.total - 2.0).abs() < 1e-12);
        assert!((dec.diagonal - 2.0).abs() < 1e-12);
        assert!(dec.off_diagonal.abs() < 1e-12);
    }

    #[test]
    fn routes_agree() {
        let r = Poly::new(f3(), [0, 0, 1]);
        let spec = MomentSpec::new(r, Poly::new(f3(), [1, 1]));
        let dec = moment_decomposition(&spec).unwrap();
        let afe = moment_direct_afe(&spec).unwrap();
        assert!((dec.total - afe.observed).abs() < 1e-9 * afe.observed.abs().max(1.0));
        let exact = moment_direct(&spec).unwrap();
        let orth = moment_orthogonality(&spec).unwrap();
        assert!((exact.observed - orth.observed).abs() < 1e-9);

        let r = Poly::new(f3(), [2, 1, 0, 1, 1]);
        let spec = MomentSpec::two_twist(r, Poly::new(f3(), [1, 1]), Poly::new(f3(), [2, 1]));
        let dec = moment_decomposition(&spec).unwrap();
        let afe = moment_direct_afe(&spec).unwrap();
        assert!((dec.total - afe.observed).abs() < 1e-9 * afe.observed.abs().max(1.0));
        assert!((dec.diagonal + dec.off_diagonal - dec.total).abs() < 1e-9);
    }

    #[test]
    fn diagonal_matches_closed_form() {
        for r in enumerate_monic(f3(), 4) {
            for h in [Poly::one(f3()), Poly::new(f3(), [1, 1]), Poly::new(f3(), [1, 0, 1])] {
                if !h.is_coprime(&r).unwrap() {
                    continue;
                }
                let lit = 2.0 * diagonal_sum(&r, &h, &Poly::one(f3())).unwrap();
                let closed = diagonal_closed_form(&r, &h).unwrap();
                assert!((lit - closed).abs() < 1e-12, "{r} {h}");
            }
        }
    }
}
