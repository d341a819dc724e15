//! Multiplicative functions on F_q[T], the zeta function of the ring, and the
//! Möbius divisor-sum identities.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fieldpoly::{divisors_of, factor, Factorization, Poly, PrimeField};

/// Arithmetic invariants of a monic modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArithProfile {
    pub modulus: Poly,
    pub mu: i32,
    pub phi: u64,
    pub omega: usize,
    pub phi_star: u64,
    pub phi_plus: u64,
    pub phi_minus: u64,
}

pub(crate) fn require_monic(r: &Poly) -> Result<()> {
    if r.is_zero() || !r.is_monic() {
        Err(Error::NotMonic(r.to_string()))
    } else {
        Ok(())
    }
}

fn mu_of(fact: &Factorization) -> i32 {
    if fact.is_squarefree() {
        if fact.omega().is_multiple_of(2) {
            1
        } else {
            -1
        }
    } else {
        0
    }
}

fn phi_of(fact: &Factorization) -> u64 {
    fact.factors
        .iter()
        .map(|(p, e)| {
            let n = p.norm();
            n.pow(e - 1) * (n - 1)
        })
        .product()
}

pub fn mu(r: &Poly) -> Result<i32> {
    Ok(mu_of(&factor(r)?))
}

pub fn phi(r: &Poly) -> Result<u64> {
    Ok(phi_of(&factor(r)?))
}

pub fn omega(r: &Poly) -> Result<usize> {
    Ok(factor(r)?.omega())
}

/// Σ_{EF=R} μ(E)φ(F), evaluated over the divisor lattice of `fact`.
fn phi_star_of(field: PrimeField, r: &Poly, fact: &Factorization) -> Result<i64> {
    let mut total = 0i64;
    for e in divisors_of(field, fact) {
        let ef = factor(&e)?;
        let m = mu_of(&ef);
        if m == 0 {
            continue;
        }
        let cof = r.exact_div(&e)?;
        total += i64::from(m) * phi(&cof)? as i64;
    }
    Ok(total)
}

pub fn phi_star(r: &Poly) -> Result<u64> {
    Ok(arith_profile(r)?.phi_star)
}

pub fn arith_profile(r: &Poly) -> Result<ArithProfile> {
    require_monic(r)?;
    let field = r.field();
    let fact = factor(r)?;
    let phi = phi_of(&fact);
    let phi_star = phi_star_of(field, r, &fact)?;
    debug_assert!(phi_star >= 0);
    // F_q^* embeds in the units once deg R >= 1; mod 1 the only character is even.
    let phi_plus = if r.deg() == 0 {
        1
    } else {
        phi / u64::from(field.q() - 1)
    };
    Ok(ArithProfile {
        modulus: r.clone(),
        mu: mu_of(&fact),
        phi,
        omega: fact.omega(),
        phi_star: phi_star as u64,
        phi_plus,
        phi_minus: phi - phi_plus,
    })
}

/// ζ_A(s) = 1/(1 − q^{1−s}).
pub fn zeta_a(field: PrimeField, s: Complex64) -> Result<Complex64> {
    let ln_q = f64::from(field.q()).ln();
    let w = ((Complex64::new(1.0, 0.0) - s) * ln_q).exp();
    let denom = Complex64::new(1.0, 0.0) - w;
    if denom.norm() < 1e-12 {
        return Err(Error::ZetaPole(format!("{s}")));
    }
    Ok(denom.inv())
}

pub fn zeta_a_real(field: PrimeField, s: f64) -> Result<f64> {
    let w = f64::from(field.q()).powf(1.0 - s);
    if (1.0 - w).abs() < 1e-12 {
        return Err(Error::ZetaPole(format!("{s}")));
    }
    Ok(1.0 / (1.0 - w))
}

/// ζ_A(1/2) = 1/(1 − √q).
pub fn zeta_a_half(field: PrimeField) -> f64 {
    1.0 / (1.0 - f64::from(field.q()).sqrt())
}

/// |P|^{-s} for a polynomial of degree `deg`.
fn norm_pow_neg(field: PrimeField, deg: usize, s: Complex64) -> Complex64 {
    (-s * (deg as f64 * f64::from(field.q()).ln())).exp()
}

/// Residuals of the two Möbius divisor-sum identities at `s`:
/// Σ_{E|R} μ(E)|E|^{-s} = Π_{P|R}(1 − |P|^{-s}) and its derivative form
/// Σ_{E|R} μ(E)deg(E)|E|^{-s} = −Π(1 − |P|^{-s})·Σ_{P|R} deg(P)/(|P|^s − 1).
pub fn mobius_identity_check(r: &Poly, s: Complex64) -> Result<(f64, f64)> {
    require_monic(r)?;
    if s.norm() == 0.0 {
        return Err(Error::ZeroExponent);
    }
    let field = r.field();
    let fact = factor(r)?;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut dsum = Complex64::new(0.0, 0.0);
    for e in divisors_of(field, &fact) {
        let m = mu_of(&factor(&e)?);
        if m == 0 {
            continue;
        }
        let w = norm_pow_neg(field, e.deg(), s) * f64::from(m);
        sum += w;
        dsum += w * e.deg() as f64;
    }
    let one = Complex64::new(1.0, 0.0);
    let mut product = one;
    let mut prime_sum = Complex64::new(0.0, 0.0);
    for (p, _) in &fact.factors {
        let inv = norm_pow_neg(field, p.deg(), s);
        product *= one - inv;
        // |P|^s − 1 = (1 − |P|^{-s}) / |P|^{-s}
        prime_sum += p.deg() as f64 * inv / (one - inv);
    }
    Ok(((sum - product).norm(), (dsum + product * prime_sum).norm()))
}

/// Error-term shift used throughout: log(ω + 2) in place of log ω.
pub fn log_omega_shift(omega: usize) -> f64 {
    (omega as f64 + 2.0).ln()
}

/// Diagnostic quantities attached to the bounds on ω, φ, φ* and 2^ω.
#[derive(Clone, Debug, Serialize)]
pub struct BoundDiagnostics {
    pub q: u32,
    #[serde(rename = "R")]
    pub modulus: String,
    pub deg: usize,
    pub omega: usize,
    pub mu: i32,
    pub phi: u64,
    pub phi_star: u64,
    pub phi_plus: u64,
    pub phi_minus: u64,
    /// Σ_{P|R} deg(P)/(|P|−1)
    pub prime_sum: f64,
    /// prime_sum / log(ω+2)
    pub prime_sum_ratio: f64,
    pub two_pow_omega: u64,
    /// Σ_{E|R} |μ(E)|
    pub squarefree_divisors: u64,
    pub two_omega_identity: bool,
    /// 2^ω / |R|^ε at ε = 1/4 and ε = 1/2
    pub two_omega_eps_quarter: f64,
    pub two_omega_eps_half: f64,
    /// ω·log_q log_q|R| / log_q|R|, for deg R > 1
    pub omega_ratio: Option<f64>,
    /// φ·log_q log_q|R| / |R|, for deg R > q
    pub phi_ratio: Option<f64>,
    /// φ*·log_q log_q|R| / φ, for deg R > q
    pub phi_star_ratio: Option<f64>,
}

pub fn bound_diagnostics(r: &Poly) -> Result<BoundDiagnostics> {
    let prof = arith_profile(r)?;
    let deg = r.deg();
    if deg == 0 {
        return Err(Error::Precondition("bound diagnostics need deg R >= 1".into()));
    }
    let field = r.field();
    let q = f64::from(field.q());
    let fact = factor(r)?;
    let prime_sum: f64 = fact
        .factors
        .iter()
        .map(|(p, _)| p.deg() as f64 / (p.norm_f64() - 1.0))
        .sum();
    let mut squarefree_divisors = 0u64;
    for e in divisors_of(field, &fact) {
        squarefree_divisors += u64::from(mu_of(&factor(&e)?) != 0);
    }
    let two_pow_omega = 1u64 << prof.omega;
    let norm = r.norm_f64();
    // log_q log_q |R| = log_q deg R
    let loglog = (deg as f64).ln() / q.ln();
    let big = deg as u32 > field.q();
    Ok(BoundDiagnostics {
        q: field.q(),
        modulus: r.to_digits(),
        deg,
        omega: prof.omega,
        mu: prof.mu,
        phi: prof.phi,
        phi_star: prof.phi_star,
        phi_plus: prof.phi_plus,
        phi_minus: prof.phi_minus,
        prime_sum,
        prime_sum_ratio: prime_sum / log_omega_shift(prof.omega),
        two_pow_omega,
        squarefree_divisors,
        two_omega_identity: two_pow_omega == squarefree_divisors,
        two_omega_eps_quarter: two_pow_omega as f64 / norm.powf(0.25),
        two_omega_eps_half: two_pow_omega as f64 / norm.powf(0.5),
        omega_ratio: (deg > 1).then(|| prof.omega as f64 * loglog / deg as f64),
        phi_ratio: big.then(|| prof.phi as f64 * loglog / norm),
        phi_star_ratio: big.then(|| prof.phi_star as f64 * loglog / prof.phi as f64),
    })
}
