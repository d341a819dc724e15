//! L-functions of non-principal characters as finite polynomials in u = q^{-s}.
//!
//! L(s, χ) = Σ_n c_n u^n with c_n = Σ_{f monic, deg f = n} χ(f); the sum stops
//! below deg R because complete character sums vanish. Only the central point
//! s = 1/2 is evaluated.

use num_complex::Complex64;
use serde::Serialize;

use crate::charmod::{CharacterGroup, DirichletCharacter};
use crate::error::{Error, Result};
use crate::fieldpoly::{enumerate_monic, Poly};

/// Relative tolerance for the vanishing of c_{deg R}.
pub const TRUNCATION_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct LPolynomial {
    pub chi: DirichletCharacter,
    /// c_0..c_{deg R − 1}
    pub coeffs: Vec<Complex64>,
    /// c_{deg R}, which must vanish
    pub top: Complex64,
}

impl LPolynomial {
    pub fn truncation_ok(&self) -> bool {
        let bound = TRUNCATION_TOLERANCE * self.chi.modulus().norm_f64();
        self.top.norm() < bound
    }

    pub fn evaluate(&self, u: f64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * u + c)
    }

    pub fn central_value(&self) -> CentralValue {
        let q = f64::from(self.chi.modulus().field().q());
        let l_half = self.evaluate(q.sqrt().recip());
        CentralValue {
            l_half,
            l_half_sq: l_half.norm_sqr(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CentralValue {
    pub l_half: Complex64,
    pub l_half_sq: f64,
}

/// Coefficients c_0..=c_{deg R} from an angle table, tallying angles per degree.
pub(crate) fn coefficients(group: &CharacterGroup, angles: &[u32]) -> Vec<Complex64> {
    let n = group.exponent() as usize;
    let mut counts = vec![0u32; n];
    let mut touched: Vec<u32> = Vec::new();
    group
        .monic_units()
        .iter()
        .map(|units| {
            for &u in units {
                let a = angles[u as usize];
                if counts[a as usize] == 0 {
                    touched.push(a);
                }
                counts[a as usize] += 1;
            }
            touched.sort_unstable();
            let mut c = Complex64::new(0.0, 0.0);
            for &a in &touched {
                c += group.root(a) * f64::from(counts[a as usize]);
                counts[a as usize] = 0;
            }
            touched.clear();
            c
        })
        .collect()
}

pub fn l_polynomial(chi: &DirichletCharacter) -> Result<LPolynomial> {
    if chi.is_principal() {
        return Err(Error::PrincipalCharacter);
    }
    let mut coeffs = coefficients(chi.group(), &chi.angle_table());
    let top = coeffs.pop().expect("deg R + 1 coefficients");
    Ok(LPolynomial {
        chi: chi.clone(),
        coeffs,
        top,
    })
}

pub fn central_value(chi: &DirichletCharacter) -> Result<CentralValue> {
    Ok(l_polynomial(chi)?.central_value())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AfeDiscrepancy {
    pub afe_value: f64,
    pub afe_imag: f64,
    pub exact_value: f64,
    /// |afe − exact|·|R|^{1/2}
    pub scaled_residual: f64,
}

/// 2·Σ_{z<deg R} q^{−z/2} Σ_{a+b=z} c_a c̄_b.
pub fn afe_sum(coeffs: &[Complex64], q: u32) -> Complex64 {
    let d = coeffs.len();
    let qs = f64::from(q).sqrt();
    let mut total = Complex64::new(0.0, 0.0);
    for z in 0..d {
        let inner: Complex64 = (0..=z).map(|a| coeffs[a] * coeffs[z - a].conj()).sum();
        total += inner / qs.powi(z as i32);
    }
    total * 2.0
}

pub fn afe_discrepancy(chi: &DirichletCharacter) -> Result<AfeDiscrepancy> {
    if chi.is_principal() {
        return Err(Error::PrincipalCharacter);
    }
    if !chi.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    let l = l_polynomial(chi)?;
    let exact = l.central_value().l_half_sq;
    let afe = afe_sum(&l.coeffs, chi.modulus().field().q());
    Ok(AfeDiscrepancy {
        afe_value: afe.re,
        afe_imag: afe.im,
        exact_value: exact,
        scaled_residual: (afe.re - exact).abs() * chi.modulus().norm_f64().sqrt(),
    })
}

/// The AFE main sum as the literal double sum over monic (A, B) with
/// deg AB < deg R. Quadratic in the number of monic polynomials.
pub fn afe_literal(chi: &DirichletCharacter) -> Result<Complex64> {
    if chi.is_principal() {
        return Err(Error::PrincipalCharacter);
    }
    let r = chi.modulus();
    let field = r.field();
    let d = r.deg();
    let q = f64::from(field.q());
    let monics: Vec<(usize, Complex64)> = (0..d)
        .flat_map(|n| enumerate_monic(field, n).map(move |a: Poly| (n, a)))
        .map(|(n, a)| (n, chi.value(&a)))
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    for &(da, xa) in &monics {
        for &(db, xb) in &monics {
            if da + db < d {
                total += xa * xb.conj() / q.powf((da + db) as f64 / 2.0);
            }
        }
    }
    Ok(total * 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charmod::CharFilter;
    use crate::fieldpoly::PrimeField;

    fn f3() -> PrimeField {
        PrimeField::new(3).unwrap()
    }

    #[test]
    fn modulus_t() {
        let g = CharacterGroup::new(&Poly::t(f3())).unwrap();
        let chi = g.character_at(1).unwrap();
        let l = l_polynomial(&chi).unwrap();
        assert_eq!(l.coeffs.len(), 1);
        assert!((l.coeffs[0] - 1.0).norm() < 1e-15);
        assert!(l.truncation_ok());
        let cv = l.central_value();
        assert!((cv.l_half_sq - 1.0).abs() < 1e-15);
        let afe = afe_discrepancy(&chi).unwrap();
        assert!((afe.afe_value - 2.0).abs() < 1e-15);
        assert!((afe.scaled_residual - 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(
            l_polynomial(&g.character_at(0).unwrap()).unwrap_err(),
            Error::PrincipalCharacter
        );
    }

    #[test]
    fn modulus_t_squared() {
        let g = CharacterGroup::new(&Poly::monomial(f3(), 1, 2)).unwrap();
        for chi in g.filtered(CharFilter::primitive()).unwrap() {
            let l = l_polynomial(&chi).unwrap();
            assert_eq!(l.coeffs.len(), 2);
            let c1 = chi.value(&Poly::new(f3(), [1, 1])) + chi.value(&Poly::new(f3(), [2, 1]));
            assert!((l.coeffs[1] - c1).norm() < 1e-12);
            assert!(l.top.norm() < 1e-9 * 9.0);
            let conv = afe_sum(&l.coeffs, 3);
            assert!((conv - afe_literal(&chi).unwrap()).norm() < 1e-10);
        }
    }
}
