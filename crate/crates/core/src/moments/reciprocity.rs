//! Exact reciprocity formulas for prime moduli.

use serde::Serialize;

use super::family::{MomentEngine, Weight};
use super::spec::Family;
use crate::arithfns::{arith_profile, zeta_a_half};
use crate::charmod::Parity;
use crate::error::{Error, Result};
use crate::fieldpoly::{is_irreducible, Poly};

/// Absolute tolerance factor; multiplied by each identity's scale.
pub const RECIPROCITY_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReciprocityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    /// residual must stay below `RECIPROCITY_TOLERANCE · scale`
    pub scale: f64,
    pub passed: bool,
}

impl ReciprocityCheck {
    fn new(lhs: f64, rhs: f64, scale: f64, tolerance: f64) -> Self {
        let residual = (lhs - rhs).abs();
        Self {
            lhs,
            rhs,
            residual,
            scale,
            passed: residual < tolerance * scale,
        }
    }
}

fn require_irreducible(p: &Poly, name: &str) -> Result<()> {
    if !p.is_monic() || !is_irreducible(p)? {
        return Err(Error::Precondition(format!("{name} = {p} must be monic irreducible")));
    }
    Ok(())
}

/// Σ*_{χ mod P}|L(1/2,χ)|²χ(A) (all non-principal χ are primitive for prime P).
fn s_prime(engine: &MomentEngine, p: &Poly, a: &Poly) -> Result<f64> {
    let data = engine.family(p, Family::Primitive)?;
    let one = Poly::one(p.field());
    let (re, _) = data.moment(a, &one, Weight::Exact, super::Normalization::Raw)?;
    Ok(re)
}

/// Checks the one-twist reciprocity for prime moduli P and H with deg H ≤ deg P.
/// With `negative_control`, the second moment is twisted by +P instead of −P,
/// which is expected to break the identity.
pub fn reciprocity_one_twist(
    engine: &MomentEngine,
    p: &Poly,
    h: &Poly,
    negative_control: bool,
    tolerance: f64,
) -> Result<ReciprocityCheck> {
    require_irreducible(p, "P")?;
    require_irreducible(h, "H")?;
    if p == h || h.deg() > p.deg() {
        return Err(Error::Precondition("need H ≠ P and deg H ≤ deg P".into()));
    }
    let field = p.field();
    let (np, nh) = (p.norm_f64(), h.norm_f64());
    let (phi_p, phi_h) = (np - 1.0, nh - 1.0);
    let twist = if negative_control { p.clone() } else { -p };
    let lhs = np.sqrt() / phi_p * s_prime(engine, p, h)? - nh.sqrt() / phi_h * s_prime(engine, h, &twist)?;
    let z2 = zeta_a_half(field).powi(2);
    let rhs = (np / nh).sqrt() * ((p.deg() as f64) - (h.deg() as f64) - z2)
        + z2 * (1.0 - 2.0 * np.sqrt() / phi_p * (1.0 - np.powf(-0.5))
            + 2.0 * nh.sqrt() / phi_h * (1.0 - nh.powf(-0.5)));
    let scale = 1f64.max((np / nh).sqrt() * p.deg() as f64);
    Ok(ReciprocityCheck::new(lhs, rhs, scale, tolerance))
}

/// S^±(X; A, B) = |X|^{1/2}/φ^±(X)·Σ over non-principal χ mod X of the given
/// parity of |L(1/2,χ)|²χ(A)χ̄(B).
pub fn s_parity(engine: &MomentEngine, x: &Poly, a: &Poly, b: &Poly, parity: Parity) -> Result<f64> {
    let family = match parity {
        Parity::Even => Family::NonprincipalEven,
        Parity::Odd => Family::NonprincipalOdd,
    };
    let data = engine.family(x, family)?;
    let (re, _) = data.moment(a, b, Weight::Exact, super::Normalization::Raw)?;
    let prof = arith_profile(x)?;
    let count = match parity {
        Parity::Even => prof.phi_plus,
        Parity::Odd => prof.phi_minus,
    };
    Ok(x.norm_f64().sqrt() / count as f64 * re)
}

/// Checks the triple reciprocity for distinct primes Q, H, K with deg H + deg K ≤ deg Q.
pub fn reciprocity_triple(
    engine: &MomentEngine,
    q_mod: &Poly,
    h: &Poly,
    k: &Poly,
    parity: Parity,
    tolerance: f64,
) -> Result<ReciprocityCheck> {
    require_irreducible(q_mod, "Q")?;
    require_irreducible(h, "H")?;
    require_irreducible(k, "K")?;
    if h == k || h == q_mod || k == q_mod {
        return Err(Error::Precondition("Q, H, K must be distinct".into()));
    }
    if h.deg() + k.deg() > q_mod.deg() {
        return Err(Error::Precondition("need deg H + deg K ≤ deg Q".into()));
    }
    let field = q_mod.field();
    let (nq, nh, nk) = (q_mod.norm_f64(), h.norm_f64(), k.norm_f64());
    let ratio = (nq / (nh * nk)).sqrt();
    let degs = q_mod.deg() as f64 - h.deg() as f64 - k.deg() as f64;
    let lhs = s_parity(engine, q_mod, h, k, parity)?;
    let rhs = match parity {
        Parity::Odd => {
            let mq = -q_mod;
            s_parity(engine, h, k, &mq, parity)? + s_parity(engine, k, h, &mq, parity)? + ratio * degs
        }
        Parity::Even => {
            let z2 = zeta_a_half(field).powi(2);
            let qm1 = f64::from(field.q() - 1);
            let plus = |x: &Poly| -> Result<f64> { Ok(arith_profile(x)?.phi_plus as f64) };
            s_parity(engine, h, k, q_mod, parity)? + s_parity(engine, k, h, q_mod, parity)? + ratio * (degs - z2 * qm1)
                - 2.0
                    * z2
                    * ((nq.sqrt() - 1.0) / plus(q_mod)? - (nh.sqrt() - 1.0) / plus(h)? - (nk.sqrt() - 1.0) / plus(k)?)
        }
    };
    let scale = 1f64.max(ratio * q_mod.deg() as f64);
    Ok(ReciprocityCheck::new(lhs, rhs, scale, tolerance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldpoly::PrimeField;

    #[test]
    fn anchor_cell() {
        let f = PrimeField::new(3).unwrap();
        let e = MomentEngine::new();
        let c = reciprocity_one_twist(&e, &Poly::t(f), &Poly::new(f, [1, 1]), false, RECIPROCITY_TOLERANCE).unwrap();
        assert!(c.lhs.abs() < 1e-12 && c.rhs.abs() < 1e-12, "{c:?}");
        assert!(c.passed);
    }

    #[test]
    fn triple_cell_both_parities() {
        let f = PrimeField::new(3).unwrap();
        let e = MomentEngine::new();
        let q = Poly::new(f, [1, 2, 0, 1]);
        let (h, k) = (Poly::t(f), Poly::new(f, [1, 1]));
        for parity in [Parity::Odd, Parity::Even] {
            let c = reciprocity_triple(&e, &q, &h, &k, parity, RECIPROCITY_TOLERANCE).unwrap();
            assert!(c.passed, "{parity}: {c:?}");
        }
        assert!(reciprocity_triple(&e, &q, &h, &h, Parity::Odd, RECIPROCITY_TOLERANCE).is_err());
    }
}
