//! Exact and empirical checks of the auxiliary estimates behind the moment asymptotics.

use num_rational::Ratio;
use serde::Serialize;

use crate::arithfns::{arith_profile, log_omega_shift, mu};
use crate::charmod::ResidueRing;
use crate::error::{Error, Result};
use crate::fieldpoly::{divisors, enumerate_monic, factor, Poly};

pub type Rational = Ratio<i128>;

/// Which of the two cases of the main-term lemma a cell falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum XBranch {
    /// x ≥ deg R − deg H: error O(|H| log ω(R))
    Long,
    /// x < deg R − deg H: extra tail O(2^ω q^{−x}(x + deg H))
    Short,
}

#[derive(Clone, Debug, Serialize)]
pub struct MainTermCheck {
    pub lhs: Rational,
    /// |H|·Σ_{E|R, deg E ≤ x+deg H} μ(E)/|E|·(x + deg H − deg E + 1)
    pub decomposition: Rational,
    /// Σ_{E|R} μ(E)·(x − deg E' + 1)/|E'| with E' = E/gcd(E, H), deg E' ≤ x
    pub sieve: Rational,
    pub exact: bool,
    pub sieve_exact: bool,
    pub main_term: f64,
    pub residual: f64,
    /// residual/(|H|·log(ω(R)+2))
    pub residual_scaled: f64,
    pub branch: XBranch,
    /// 2^ω(R)·q^{−x}·(x + deg H), short branch only
    pub tail_bound: Option<f64>,
}

fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn pow_i128(q: u32, e: usize) -> Result<i128> {
    i128::from(q)
        .checked_pow(e as u32)
        .ok_or_else(|| Error::Precondition(format!("q^{e} overflows exact arithmetic")))
}

/// Σ_{A monic, deg A ≤ x, (AH,R)=1} 1/|A| and its divisor expansions, exactly.
pub fn main_term_lemma_check(r: &Poly, h: &Poly, x: i64) -> Result<MainTermCheck> {
    if x <= 0 {
        return Err(Error::Precondition(format!("x must be positive (got {x})")));
    }
    let x = x as usize;
    crate::arithfns::require_monic(r)?;
    crate::arithfns::require_monic(h)?;
    if h.deg() >= r.deg() {
        return Err(Error::Precondition("need deg H < deg R".into()));
    }
    let field = r.field();
    let q = field.q();
    // keep every denominator well inside i128
    if (x + h.deg() + r.deg()) as f64 * f64::from(q).log2() > 100.0 {
        return Err(Error::Precondition("x too large for exact arithmetic".into()));
    }
    let dh = h.deg();

    let ring = ResidueRing::new(r);
    let primes: Vec<Poly> = factor(r)?.factors.into_iter().map(|(p, _)| p).collect();
    let bad = ring.non_units(&primes);
    let h_unit = h.is_coprime(r)?;
    let mut lhs = Rational::from_integer(0);
    if h_unit {
        for n in 0..=x {
            let count = enumerate_monic(field, n)
                .filter(|a| !bad[ring.reduce(a) as usize])
                .count();
            lhs += Rational::new(count as i128, pow_i128(q, n)?);
        }
    }

    let norm_h = pow_i128(q, dh)?;
    let mut decomposition = Rational::from_integer(0);
    let mut sieve = Rational::from_integer(0);
    for e in divisors(r)? {
        let m = i128::from(mu(&e)?);
        if m == 0 {
            continue;
        }
        let de = e.deg();
        if de <= x + dh {
            let weight = (x + dh - de + 1) as i128;
            decomposition += Rational::new(m * weight, pow_i128(q, de)?);
        }
        let g = e.gcd(h)?;
        let de_red = de - g.deg();
        if de_red <= x {
            sieve += Rational::new(m * (x - de_red + 1) as i128, pow_i128(q, de_red)?);
        }
    }
    decomposition *= Rational::from_integer(norm_h);

    let prof = arith_profile(r)?;
    let nh = h.norm_f64();
    let main_term = nh * prof.phi as f64 / r.norm_f64() * (x + dh) as f64;
    let residual = (to_f64(&lhs) - main_term).abs();
    let short = x + dh < r.deg();
    Ok(MainTermCheck {
        exact: lhs == decomposition,
        sieve_exact: lhs == sieve,
        lhs,
        decomposition,
        sieve,
        main_term,
        residual,
        residual_scaled: residual / (nh * log_omega_shift(prof.omega)),
        branch: if short { XBranch::Short } else { XBranch::Long },
        tail_bound: short.then(|| 2f64.powi(prof.omega as i32) * f64::from(q).powi(-(x as i32)) * (x + dh) as f64),
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct OffDiagonalCheck {
    pub lhs: f64,
    /// q^{z/2}(z+1)|HK|/|F|
    pub bound: f64,
    pub ratio: f64,
    /// number of (A, B) pairs contributing to lhs
    pub pairs: usize,
}

/// Σ_{A,B monic, deg AB = z, AH ≡ BK (F), AH ≠ BK, (ABHK,R)=1} |AB|^{−1/2}, by enumeration.
pub fn offdiag_bound_check(r: &Poly, f: &Poly, h: &Poly, k: &Poly, z: usize) -> Result<OffDiagonalCheck> {
    for p in [r, f, h, k] {
        crate::arithfns::require_monic(p)?;
    }
    if !f.divides(r)? {
        return Err(Error::Precondition(format!("{f} does not divide {r}")));
    }
    if z >= r.deg() {
        return Err(Error::Precondition(format!("need z < deg R (got z = {z})")));
    }
    let field = r.field();
    let q = f64::from(field.q());
    let ring_f = ResidueRing::new(f);
    let coprime_hk = (h * k).is_coprime(r)?;
    let mut lhs = 0.0;
    let mut pairs = 0;
    if coprime_hk {
        // per degree: (residue of X·Y mod F, X·Y) for coprime monic X
        let side = |twist: &Poly, n: usize| -> Result<Vec<(u32, Poly)>> {
            let mut out = Vec::new();
            for a in enumerate_monic(field, n) {
                if a.is_coprime(r)? {
                    let p = &a * twist;
                    out.push((ring_f.reduce(&p), p));
                }
            }
            Ok(out)
        };
        for da in 0..=z {
            let left = side(h, da)?;
            let right = side(k, z - da)?;
            for (ra, pa) in &left {
                for (rb, pb) in &right {
                    if ra == rb && pa != pb {
                        pairs += 1;
                    }
                }
            }
        }
        lhs = pairs as f64 * q.powf(-(z as f64) / 2.0);
    }
    let bound = q.powf(z as f64 / 2.0) * (z + 1) as f64 * h.norm_f64() * k.norm_f64() / f.norm_f64();
    Ok(OffDiagonalCheck {
        lhs,
        bound,
        ratio: lhs / bound,
        pairs,
    })
}

/// (2^{ω(R)}|R|^{1/2} deg R/φ*(R))·|R|^{1/2−ε}.
pub fn arithmetic_bound_check(r: &Poly, epsilon: f64) -> Result<f64> {
    crate::arithfns::require_monic(r)?;
    if r.deg() == 0 {
        return Err(Error::Precondition("need deg R ≥ 1".into()));
    }
    let prof = arith_profile(r)?;
    let n = r.norm_f64();
    Ok(2f64.powi(prof.omega as i32) * n.sqrt() * r.deg() as f64 / prof.phi_star as f64 * n.powf(0.5 - epsilon))
}

/// Closed form of the arithmetic ratio along R = P^n for irreducible P.
pub fn arithmetic_ratio_prime_power(p: &Poly, n: u32, epsilon: f64) -> f64 {
    let np = p.norm_f64();
    let phi_star = if n == 1 {
        np - 2.0
    } else {
        // φ(P^n) − φ(P^{n−1})
        (np.powi(n as i32 - 1) - np.powi(n as i32 - 2)) * (np - 1.0)
    };
    let rn = np.powi(n as i32);
    2.0 * rn.sqrt() * (p.deg() * n as usize) as f64 / phi_star * rn.powf(0.5 - epsilon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldpoly::PrimeField;

    fn f3() -> PrimeField {
        PrimeField::new(3).unwrap()
    }

    #[test]
    fn main_term_examples() {
        let t = Poly::t(f3());
        let one = Poly::one(f3());
        let c = main_term_lemma_check(&t, &one, 1).unwrap();
        assert_eq!(c.lhs, Rational::new(5, 3));
        assert_eq!(c.decomposition, Rational::new(5, 3));
        assert!(c.exact && c.sieve_exact);
        assert!((c.main_term - 2.0 / 3.0).abs() < 1e-15);
        assert!(main_term_lemma_check(&t, &one, 0).is_err());
    }

    #[test]
    fn sieve_is_exact_with_twists() {
        for r in enumerate_monic(f3(), 3) {
            for h in [Poly::new(f3(), [1, 1]), Poly::new(f3(), [2, 0, 1])] {
                for x in 1..=4 {
                    let c = main_term_lemma_check(&r, &h, x).unwrap();
                    assert!(c.sieve_exact, "{r} {h} {x}");
                }
            }
        }
    }

    #[test]
    fn offdiag_examples() {
        let f = f3();
        let r = Poly::monomial(f, 1, 2);
        let one = Poly::one(f);
        let c = offdiag_bound_check(&r, &Poly::t(f), &one, &one, 0).unwrap();
        assert_eq!(c.lhs, 0.0);
        let c = offdiag_bound_check(&r, &Poly::t(f), &Poly::new(f, [1, 1]), &one, 1).unwrap();
        assert!(c.ratio <= 3.0);
        assert!(offdiag_bound_check(&r, &Poly::new(f, [1, 1]), &one, &one, 0).is_err());
    }

    #[test]
    fn arithmetic_closed_form() {
        let t = Poly::t(f3());
        let a = arithmetic_bound_check(&t, 0.25).unwrap();
        assert!((a - 2.0 * 3f64.sqrt() * 3f64.powf(0.25)).abs() < 1e-12);
        for n in 1..=6 {
            let r = t.pow(u64::from(n));
            let direct = arithmetic_bound_check(&r, 0.1).unwrap();
            let closed = arithmetic_ratio_prime_power(&t, n, 0.1);
            assert!((direct - closed).abs() < 1e-9 * closed);
        }
        let b = arithmetic_bound_check(&t, 0.5).unwrap();
        assert!((b - 2.0 * 3f64.sqrt()).abs() < 1e-12);
    }
}
