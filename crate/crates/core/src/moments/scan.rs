//! Grids of moment cells, scan execution and the trend fit used to judge
//! whether a fitted constant is stable across degrees.

use super::stopwatch::Stopwatch;
use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::family::{FamilyData, MomentEngine, Weight};
use super::spec::{Family, MomentReport, MomentSpec, Normalization};
use crate::error::Result;
use crate::fieldpoly::{enumerate_monic, enumerate_monic_up_to, Poly, PrimeField};

/// Least-squares line through (x, y) points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrendFit {
    pub points: usize,
    pub slope: f64,
    pub intercept: f64,
    /// standard error of the slope (0 with fewer than three points)
    pub slope_se: f64,
    /// slope ≤ 2·SE: no upward trend beyond the noise band
    pub flat: bool,
}

pub fn trend_fit(points: &[(f64, f64)]) -> TrendFit {
    let n = points.len();
    if n < 2 {
        return TrendFit {
            points: n,
            slope: 0.0,
            intercept: points.first().map_or(0.0, |p| p.1),
            slope_se: 0.0,
            flat: true,
        };
    }
    let nf = n as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let slope_se = if n > 2 && sxx > 0.0 {
        let sse: f64 = points.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
        (sse / (nf - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    TrendFit {
        points: n,
        slope,
        intercept,
        slope_se,
        flat: slope <= 2.0 * slope_se,
    }
}

/// Monic moduli of degree `deg`: all of them when there are at most `limit`,
/// otherwise a seeded uniform sample of `limit`, in rank order.
pub fn select_moduli(field: PrimeField, deg: usize, limit: Option<usize>, seed: u64) -> Vec<Poly> {
    let total = u64::from(field.q()).pow(deg as u32);
    match limit {
        Some(l) if (l as u64) < total => {
            // one stream per degree so adding degrees does not reshuffle others
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((deg as u64) << 32) ^ u64::from(field.q()));
            let mut picks: Vec<u64> = sample(&mut rng, total as usize, l)
                .into_iter()
                .map(|i| i as u64)
                .collect();
            picks.sort_unstable();
            picks
                .into_iter()
                .map(|low| Poly::monic_from_rank(field, deg, low))
                .collect()
        }
        _ => enumerate_monic(field, deg).collect(),
    }
}

/// One-twist cells (R, H) with deg H ≤ min(max_deg_h, deg R − 1) and gcd(H, R) = 1.
pub fn one_twist_cells(moduli: &[Poly], max_deg_h: usize) -> Result<Vec<MomentSpec>> {
    let mut out = Vec::new();
    for r in moduli {
        let cap = max_deg_h.min(r.deg().saturating_sub(1));
        for h in enumerate_monic_up_to(r.field(), cap) {
            if h.is_coprime(r)? {
                out.push(MomentSpec::new(r.clone(), h));
            }
        }
    }
    Ok(out)
}

/// Two-twist cells (R, H, K) with deg H ≤ max_deg_h, deg K ≤ max_deg_k,
/// deg H + deg K < deg R, K ≠ 1 and gcd(HK, R) = 1.
pub fn two_twist_cells(moduli: &[Poly], max_deg_h: usize, max_deg_k: usize) -> Result<Vec<MomentSpec>> {
    let mut out = Vec::new();
    for r in moduli {
        let field = r.field();
        let twists: Vec<Poly> = enumerate_monic_up_to(field, max_deg_h.max(max_deg_k))
            .filter(|p| p.is_coprime(r).unwrap_or(false))
            .collect();
        for h in twists.iter().filter(|h| h.deg() <= max_deg_h) {
            for k in twists.iter().filter(|k| k.deg() <= max_deg_k && !k.is_one()) {
                if h.deg() + k.deg() < r.deg() {
                    out.push(MomentSpec::two_twist(r.clone(), h.clone(), k.clone()));
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanOptions {
    pub family: Family,
    pub normalization: Normalization,
    pub weight: Weight,
    /// record per-cell wall time; off keeps output byte-stable
    pub timing: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            family: Family::Primitive,
            normalization: Normalization::Mean,
            weight: Weight::Exact,
            timing: false,
        }
    }
}

fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Runs every cell; family and normalization of each spec are overridden by `opts`.
/// Cells sharing a modulus share one family computation; output keeps input order.
pub fn scan_moments(engine: &MomentEngine, cells: &[MomentSpec], opts: ScanOptions) -> Result<Vec<MomentReport>> {
    let mut groups: Vec<(Poly, Vec<usize>)> = Vec::new();
    for (i, c) in cells.iter().enumerate() {
        match groups.last_mut() {
            Some((r, idx)) if *r == c.r => idx.push(i),
            _ => groups.push((c.r.clone(), vec![i])),
        }
    }
    let results = par_map(&groups, |(r, idx)| -> Result<Vec<(usize, MomentReport)>> {
        let start = Stopwatch::start();
        let data = FamilyData::new(engine.group(r)?, opts.family)?;
        let setup = start.seconds() / idx.len() as f64;
        idx.iter()
            .map(|&i| {
                let spec = cells[i]
                    .clone()
                    .with_family(opts.family)
                    .with_normalization(opts.normalization);
                let mut rep = data.report(&spec, opts.weight)?;
                rep.seconds = if opts.timing { rep.seconds + setup } else { 0.0 };
                Ok((i, rep))
            })
            .collect()
    });
    let mut out: Vec<Option<MomentReport>> = vec![None; cells.len()];
    for group in results {
        for (i, rep) in group? {
            out[i] = Some(rep);
        }
    }
    Ok(out.into_iter().map(|r| r.expect("every cell reported")).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeSummary {
    pub deg: usize,
    pub cells: usize,
    pub max_residual_scaled: f64,
}

/// Per-degree maxima of residual_scaled, the fitted constant and its trend.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanSummary {
    pub per_degree: Vec<DegreeSummary>,
    /// smallest C with residual_scaled ≤ C on every cell
    pub fitted_constant: f64,
    pub trend: TrendFit,
}

pub fn summarize(reports: &[MomentReport], degree_of: impl Fn(&MomentReport) -> usize) -> ScanSummary {
    let mut by_deg: BTreeMap<usize, (usize, f64)> = BTreeMap::new();
    for r in reports {
        let e = by_deg.entry(degree_of(r)).or_insert((0, 0.0));
        e.0 += 1;
        e.1 = e.1.max(r.residual_scaled);
    }
    let per_degree: Vec<DegreeSummary> = by_deg
        .into_iter()
        .map(|(deg, (cells, max))| DegreeSummary {
            deg,
            cells,
            max_residual_scaled: max,
        })
        .collect();
    let points: Vec<(f64, f64)> = per_degree
        .iter()
        .map(|d| (d.deg as f64, d.max_residual_scaled))
        .collect();
    ScanSummary {
        fitted_constant: per_degree.iter().map(|d| d.max_residual_scaled).fold(0.0, f64::max),
        trend: trend_fit(&points),
        per_degree,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trend_of_a_line() {
        let up = trend_fit(&[(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]);
        assert!((up.slope - 1.0).abs() < 1e-12 && up.slope_se < 1e-12 && !up.flat);
        let down = trend_fit(&[(1.0, 3.0), (2.0, 2.5), (3.0, 2.4), (4.0, 2.0)]);
        assert!(down.slope < 0.0 && down.flat);
        let noisy = trend_fit(&[(1.0, 1.0), (2.0, 3.0), (3.0, 0.5), (4.0, 2.0)]);
        assert!(noisy.flat);
    }

    #[test]
    fn sampling_is_seeded_and_sorted() {
        let f = PrimeField::new(3).unwrap();
        let a = select_moduli(f, 6, Some(20), 7);
        assert_eq!(a, select_moduli(f, 6, Some(20), 7));
        assert_eq!(a.len(), 20);
        assert!(a.windows(2).all(|w| w[0].rank() < w[1].rank()));
        assert_ne!(a, select_moduli(f, 6, Some(20), 8));
        assert_eq!(select_moduli(f, 3, Some(100), 7).len(), 27);
    }

    #[test]
    fn cells_and_scan_order() {
        let f = PrimeField::new(3).unwrap();
        let moduli = select_moduli(f, 3, None, 0);
        let one = one_twist_cells(&moduli, 2).unwrap();
        assert!(one.iter().all(|c| c.h.deg() < 3 && c.h.is_coprime(&c.r).unwrap()));
        let two = two_twist_cells(&moduli[..4], 1, 1).unwrap();
        assert!(two.iter().all(|c| c.h.deg() + c.k.deg() < 3 && !c.k.is_one()));
        let engine = MomentEngine::new();
        let reps = scan_moments(&engine, &one[..30], ScanOptions::default()).unwrap();
        for (c, r) in one.iter().zip(&reps) {
            assert_eq!((c.r.to_digits(), c.h.to_digits()), (r.r.clone(), r.h.clone()));
            assert_eq!(r.seconds, 0.0);
        }
        let s = summarize(&reps, |r| r.r.len());
        assert_eq!(s.per_degree.len(), 1);
    }
}
