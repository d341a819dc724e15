use super::stopwatch::Stopwatch;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;

use super::spec::{predicted_main_term, Family, MomentReport, MomentSpec, Normalization, Route};
use crate::arithfns::{arith_profile, log_omega_shift, ArithProfile};
use crate::charmod::{CacheOutcome, CharacterGroup, DirichletCharacter, UnitGroupCache};
use crate::error::{Error, Result};
use crate::fieldpoly::Poly;
use crate::lfunc::{afe_sum, coefficients, TRUNCATION_TOLERANCE};

/// Tolerance on the imaginary part of a family sum, per character.
pub const REALNESS_TOLERANCE: f64 = 1e-8;

/// Which per-character weight multiplies χ(H)χ̄(K).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weight {
    /// |L(1/2,χ)|²
    Exact,
    /// the AFE main sum
    Afe,
}

/// L-data for every character of one family mod R.
pub struct FamilyData {
    pub group: Arc<CharacterGroup>,
    pub family: Family,
    pub chars: Vec<DirichletCharacter>,
    /// L-coefficients c_0..c_{deg R − 1} per character
    pub coeffs: Vec<Vec<Complex64>>,
    pub central_sq: Vec<f64>,
    pub afe: Vec<f64>,
    /// largest |c_{deg R}|/|R| seen (must be below the truncation tolerance)
    pub max_top_ratio: f64,
    pub profile: ArithProfile,
}

fn map_chars<T: Send>(chars: &[DirichletCharacter], f: impl Fn(&DirichletCharacter) -> T + Sync + Send) -> Vec<T> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        chars.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        chars.iter().map(f).collect()
    }
}

impl FamilyData {
    pub fn new(group: Arc<CharacterGroup>, family: Family) -> Result<Self> {
        let r = group.modulus().clone();
        if r.deg() == 0 {
            return Err(Error::InvalidSpec("modulus must have degree ≥ 1".into()));
        }
        let profile = arith_profile(&r)?;
        let chars = group.filtered(family.filter())?;
        let q = r.field().q();
        let norm = r.norm_f64();
        let rows = map_chars(&chars, |chi| {
            let mut c = coefficients(&group, &chi.angle_table());
            let top = c.pop().expect("deg R + 1 coefficients");
            let u = f64::from(q).sqrt().recip();
            let l = c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &x| acc * u + x);
            let afe = afe_sum(&c, q).re;
            (c, l.norm_sqr(), afe, top.norm() / norm)
        });
        let mut coeffs = Vec::with_capacity(rows.len());
        let mut central_sq = Vec::with_capacity(rows.len());
        let mut afe = Vec::with_capacity(rows.len());
        let mut max_top_ratio = 0.0f64;
        for (c, l2, a, top) in rows {
            coeffs.push(c);
            central_sq.push(l2);
            afe.push(a);
            max_top_ratio = max_top_ratio.max(top);
        }
        if max_top_ratio >= TRUNCATION_TOLERANCE {
            return Err(Error::Precondition(format!(
                "complete character sum mod {r} does not vanish (ratio {max_top_ratio:e})"
            )));
        }
        Ok(Self {
            group,
            family,
            chars,
            coeffs,
            central_sq,
            afe,
            max_top_ratio,
            profile,
        })
    }

    pub fn modulus(&self) -> &Poly {
        self.group.modulus()
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    /// Σ_χ w(χ)·χ(H)·χ̄(K) over the family; H, K arbitrary (not necessarily monic).
    pub fn raw_sum(&self, h: &Poly, k: &Poly, weight: Weight) -> Complex64 {
        let t = self.group.table();
        let (Some(ih), Some(ik)) = (t.unit_index(h), t.unit_index(k)) else {
            return Complex64::new(0.0, 0.0);
        };
        let n = self.group.exponent();
        let w = match weight {
            Weight::Exact => &self.central_sq,
            Weight::Afe => &self.afe,
        };
        self.chars
            .iter()
            .zip(w)
            .map(|(chi, &w)| {
                let a = (chi.angle_at(ih) + n - chi.angle_at(ik)) % n;
                self.group.root(a) * w
            })
            .sum()
    }

    /// Multiplier turning a raw family sum into the requested normalization.
    pub fn normalizer(&self, n: Normalization) -> Result<f64> {
        match n {
            Normalization::Raw => Ok(1.0),
            Normalization::Mean => {
                if self.chars.is_empty() {
                    return Err(Error::EmptyFamily);
                }
                Ok(1.0 / self.chars.len() as f64)
            }
            Normalization::ParityScaled => {
                let count = match self.family {
                    Family::NonprincipalEven => self.profile.phi_plus,
                    Family::NonprincipalOdd => self.profile.phi_minus,
                    Family::Primitive => {
                        return Err(Error::InvalidSpec(
                            "parity-scaled normalization needs a parity family".into(),
                        ))
                    }
                };
                Ok(self.modulus().norm_f64().sqrt() / count as f64)
            }
        }
    }

    /// Normalized moment with its realness check; returns (real, imaginary).
    pub fn moment(&self, h: &Poly, k: &Poly, weight: Weight, n: Normalization) -> Result<(f64, f64)> {
        let raw = self.raw_sum(h, k, weight);
        let size = self.chars.len();
        if raw.im.abs() >= REALNESS_TOLERANCE * size.max(1) as f64 {
            return Err(Error::NonReal { imag: raw.im, size });
        }
        let scale = self.normalizer(n)?;
        Ok((raw.re * scale, raw.im * scale))
    }

    pub fn report(&self, spec: &MomentSpec, weight: Weight) -> Result<MomentReport> {
        let start = Stopwatch::start();
        spec.validate()?;
        if spec.r != *self.modulus() || spec.family != self.family {
            return Err(Error::InvalidSpec("spec does not match the family data".into()));
        }
        let (observed, imag) = self.moment(&spec.h, &spec.k, weight, spec.normalization)?;
        let route = match weight {
            Weight::Exact => Route::Direct,
            Weight::Afe => Route::DirectAfe,
        };
        build_report(spec, observed, imag, route, &self.profile, start.seconds())
    }
}

pub(crate) fn build_report(
    spec: &MomentSpec,
    observed: f64,
    imag: f64,
    route: Route,
    profile: &ArithProfile,
    seconds: f64,
) -> Result<MomentReport> {
    let predicted = predicted_main_term(spec)?;
    let residual = (observed - predicted).abs();
    let hk = (spec.h.norm_f64() * spec.k.norm_f64()).sqrt();
    Ok(MomentReport {
        q: spec.r.field().q(),
        r: spec.r.to_digits(),
        h: spec.h.to_digits(),
        k: spec.k.to_digits(),
        family: spec.family,
        normalization: spec.normalization,
        observed,
        imag_part: imag,
        predicted,
        residual,
        residual_scaled: residual / (hk * log_omega_shift(profile.omega)),
        route,
        phi_star: profile.phi_star,
        omega: profile.omega,
        seconds,
    })
}

/// Counters for unit-group construction, for cold/warm comparisons.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EngineStats {
    pub built: usize,
    pub cache_hits: usize,
    pub rebuilt: usize,
    /// wall time spent obtaining unit-group tables
    pub table_seconds: f64,
}

/// Memoizes character groups and family data; optionally backed by the
/// on-disk unit-group cache. Safe to share across threads.
#[derive(Default)]
pub struct MomentEngine {
    disk: Option<UnitGroupCache>,
    groups: Mutex<HashMap<(u32, u64), Arc<CharacterGroup>>>,
    families: Mutex<HashMap<(u32, u64, Family), Arc<FamilyData>>>,
    stats: Mutex<EngineStats>,
}

impl MomentEngine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_cache(cache: UnitGroupCache) -> Self {
        Self {
            disk: Some(cache),
            ..Self::default()
        }
    }

    pub fn stats(&self) -> EngineStats {
        *self.stats.lock().expect("stats lock")
    }

    pub fn group(&self, r: &Poly) -> Result<Arc<CharacterGroup>> {
        let key = (r.field().q(), r.rank());
        if let Some(g) = self.groups.lock().expect("group lock").get(&key) {
            return Ok(Arc::clone(g));
        }
        let start = Stopwatch::start();
        let (table, outcome) = match &self.disk {
            Some(c) => c.get(r)?,
            None => (crate::charmod::unit_group(r)?, CacheOutcome::Built),
        };
        let elapsed = start.seconds();
        {
            let mut s = self.stats.lock().expect("stats lock");
            s.table_seconds += elapsed;
            match outcome {
                CacheOutcome::Hit => s.cache_hits += 1,
                CacheOutcome::Built => s.built += 1,
                CacheOutcome::Rebuilt => s.rebuilt += 1,
            }
        }
        let g = CharacterGroup::from_table(Arc::new(table))?;
        self.groups
            .lock()
            .expect("group lock")
            .entry(key)
            .or_insert_with(|| Arc::clone(&g));
        Ok(g)
    }

    pub fn family(&self, r: &Poly, family: Family) -> Result<Arc<FamilyData>> {
        let key = (r.field().q(), r.rank(), family);
        if let Some(f) = self.families.lock().expect("family lock").get(&key) {
            return Ok(Arc::clone(f));
        }
        let data = Arc::new(FamilyData::new(self.group(r)?, family)?);
        self.families
            .lock()
            .expect("family lock")
            .entry(key)
            .or_insert_with(|| Arc::clone(&data));
        Ok(data)
    }

    /// Drops memoized family data (groups are kept).
    pub fn forget_families(&self) {
        self.families.lock().expect("family lock").clear();
    }

    pub fn forget_all(&self) {
        self.forget_families();
        self.groups.lock().expect("group lock").clear();
    }
}

/// Σ over the family of |L(1/2,χ)|²χ(H)χ̄(K), normalized, with the main-term prediction.
pub fn moment_direct(spec: &MomentSpec) -> Result<MomentReport> {
    spec.validate()?;
    let data = FamilyData::new(CharacterGroup::new(&spec.r)?, spec.family)?;
    data.report(spec, Weight::Exact)
}

/// As [`moment_direct`] with |L(1/2,χ)|² replaced by the AFE main sum.
pub fn moment_direct_afe(spec: &MomentSpec) -> Result<MomentReport> {
    spec.validate()?;
    let data = FamilyData::new(CharacterGroup::new(&spec.r)?, spec.family)?;
    data.report(spec, Weight::Afe)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldpoly::PrimeField;

    #[test]
    fn modulus_t() {
        let f = PrimeField::new(3).unwrap();
        let spec = MomentSpec::new(Poly::t(f), Poly::one(f));
        let rep = moment_direct(&spec).unwrap();
        assert!((rep.observed - 1.0).abs() < 1e-12);
        assert!((rep.predicted - 2.0 / 3.0).abs() < 1e-12);
        assert!((rep.residual - 1.0 / 3.0).abs() < 1e-12);
        let afe = moment_direct_afe(&spec).unwrap();
        assert!((afe.observed - 2.0).abs() < 1e-12);
    }

    #[test]
    fn twist_cancels_when_h_equals_k() {
        let f = PrimeField::new(3).unwrap();
        let r = Poly::new(f, [1, 0, 2, 1]);
        let h = Poly::new(f, [2, 1]);
        let plain = moment_direct(&MomentSpec::new(r.clone(), Poly::one(f))).unwrap();
        let twisted = moment_direct(&MomentSpec::two_twist(r, h.clone(), h)).unwrap();
        assert!((plain.observed - twisted.observed).abs() < 1e-12);
    }

    #[test]
    fn engine_memoizes() {
        let f = PrimeField::new(3).unwrap();
        let e = MomentEngine::new();
        let r = Poly::new(f, [1, 1, 1]);
        let a = e.family(&r, Family::Primitive).unwrap();
        let b = e.family(&r, Family::Primitive).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(e.stats().built, 1);
    }
}
