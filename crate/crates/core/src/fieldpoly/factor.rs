use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::enumerate::enumerate_monic;
use super::field::PrimeField;
use super::poly::Poly;
use crate::error::{Error, Result};

/// Monic irreducibles of degree <= `max_deg`, by degree then digit-string order.
///
/// A monic polynomial of degree n is kept iff no already-listed irreducible of
/// degree <= n/2 divides it.
pub fn irreducibles(field: PrimeField, max_deg: usize) -> Vec<Poly> {
    let table = sieve(field, max_deg);
    table[1..=max_deg].iter().flatten().cloned().collect()
}

fn sieve_extend(field: PrimeField, by_degree: &mut Vec<Vec<Poly>>, max_deg: usize) {
    if by_degree.is_empty() {
        by_degree.push(Vec::new());
    }
    for n in by_degree.len()..=max_deg {
        let found: Vec<Poly> = enumerate_monic(field, n)
            .filter(|f| {
                by_degree[1..=n / 2]
                    .iter()
                    .flatten()
                    .all(|p| !f.rem(p).expect("nonzero divisor").is_zero())
            })
            .collect();
        by_degree.push(found);
    }
}

type SieveCache = Mutex<HashMap<u32, Arc<Vec<Vec<Poly>>>>>;

/// Per-q sieve table, index = degree; extended on demand.
fn sieve(field: PrimeField, max_deg: usize) -> Arc<Vec<Vec<Poly>>> {
    static CACHE: OnceLock<SieveCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().expect("sieve cache poisoned");
    let entry = guard.entry(field.q()).or_default();
    if entry.len() <= max_deg {
        let mut table = entry.as_ref().clone();
        sieve_extend(field, &mut table, max_deg);
        *entry = Arc::new(table);
    }
    entry.clone()
}

/// `unit · Π P_i^{e_i}` with monic, distinct irreducible `P_i` in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: u32,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn expand(&self, field: PrimeField) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(field, self.unit), |acc, (p, e)| {
                &acc * &p.pow(u64::from(*e))
            })
    }

    /// ω: number of distinct irreducible factors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }
}

/// Factors a nonzero polynomial by trial division against the sieve.
pub fn factor(f: &Poly) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let field = f.field();
    let unit = f.leading();
    let mut rest = f.to_monic();
    let mut factors = Vec::new();
    let deg = rest.deg();
    if deg >= 2 {
        let table = sieve(field, deg / 2);
        'outer: for d in 1..=deg / 2 {
            for p in &table[d] {
                if 2 * d > rest.deg() {
                    break 'outer;
                }
                let mut e = 0;
                loop {
                    let (s, r) = rest.divrem(p)?;
                    if !r.is_zero() {
                        break;
                    }
                    rest = s;
                    e += 1;
                }
                if e > 0 {
                    factors.push((p.clone(), e));
                }
            }
        }
    }
    if rest.deg() >= 1 {
        factors.push((rest, 1));
    }
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(Factorization { unit, factors })
}

pub fn is_irreducible(f: &Poly) -> Result<bool> {
    let fact = factor(f)?;
    Ok(fact.factors.len() == 1 && fact.factors[0].1 == 1)
}

fn require_monic(f: &Poly) -> Result<()> {
    if f.is_zero() || !f.is_monic() {
        Err(Error::NotMonic(f.to_string()))
    } else {
        Ok(())
    }
}

/// All monic divisors of a monic polynomial, in ascending order.
pub fn divisors(f: &Poly) -> Result<Vec<Poly>> {
    require_monic(f)?;
    Ok(divisors_of(f.field(), &factor(f)?))
}

pub(crate) fn divisors_of(field: PrimeField, fact: &Factorization) -> Vec<Poly> {
    let mut out = vec![Poly::one(field)];
    for (p, e) in &fact.factors {
        let mut next = Vec::with_capacity(out.len() * (*e as usize + 1));
        for d in &out {
            let mut cur = d.clone();
            next.push(cur.clone());
            for _ in 0..*e {
                cur = &cur * p;
                next.push(cur.clone());
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// Complementary pairs `(E, F)` with `E·F = f`, ordered by `E`.
pub fn divisor_pairs(f: &Poly) -> Result<Vec<(Poly, Poly)>> {
    divisors(f)?
        .into_iter()
        .map(|e| {
            let cof = f.exact_div(&e)?;
            Ok((e, cof))
        })
        .collect()
}
