use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::PrimeField;
use crate::error::{Error, Result};

/// A polynomial over a prime field, lowest-degree coefficient first.
///
/// The coefficient vector never carries trailing zeros, so the zero polynomial
/// is the empty vector and `degree()` returns `None` for it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: PrimeField,
    coeffs: Vec<u32>,
}

impl Poly {
    /// Builds a polynomial from coefficients (reduced mod q, trailing zeros dropped).
    pub fn new(field: PrimeField, coeffs: impl IntoIterator<Item = u32>) -> Self {
        let q = field.q();
        let mut p = Self {
            field,
            coeffs: coeffs.into_iter().map(|c| c % q).collect(),
        };
        p.normalize();
        p
    }

    pub(crate) fn from_raw(field: PrimeField, coeffs: Vec<u32>) -> Self {
        let mut p = Self { field, coeffs };
        p.normalize();
        p
    }

    /// Builds a polynomial from signed coefficients, reducing each into [0, q).
    pub fn from_signed(field: PrimeField, coeffs: &[i64]) -> Self {
        let q = i64::from(field.q());
        Self::new(field, coeffs.iter().map(|c| c.rem_euclid(q) as u32))
    }

    pub fn zero(field: PrimeField) -> Self {
        Self {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: PrimeField) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: PrimeField, c: u32) -> Self {
        Self::new(field, [c])
    }

    /// The indeterminate `T`.
    pub fn t(field: PrimeField) -> Self {
        Self::new(field, [0, 1])
    }

    pub fn monomial(field: PrimeField, c: u32, n: usize) -> Self {
        let mut coeffs = vec![0; n + 1];
        coeffs[n] = c;
        Self::new(field, coeffs)
    }

    /// Inverse of [`Poly::rank`]: base-q digits of `rank` become the coefficients.
    pub fn from_rank(field: PrimeField, mut rank: u64) -> Self {
        let q = u64::from(field.q());
        let mut coeffs = Vec::new();
        while rank > 0 {
            coeffs.push((rank % q) as u32);
            rank /= q;
        }
        Self { field, coeffs }
    }

    /// The monic polynomial `T^n + r(T)` where `r` has rank `low_rank < q^n`.
    pub fn monic_from_rank(field: PrimeField, n: usize, low_rank: u64) -> Self {
        let q = u64::from(field.q());
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut r = low_rank;
        for _ in 0..n {
            coeffs.push((r % q) as u32);
            r /= q;
        }
        debug_assert_eq!(r, 0, "low rank out of range");
        coeffs.push(1);
        Self { field, coeffs }
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` stands for the degree of the zero polynomial (minus infinity).
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree of a polynomial known to be nonzero.
    ///
    /// Panics on the zero polynomial.
    #[inline]
    pub fn deg(&self) -> usize {
        self.degree().expect("degree of the zero polynomial")
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// |f| = q^deg f, with |0| = 0.
    pub fn norm(&self) -> u64 {
        match self.degree() {
            None => 0,
            Some(d) => u64::from(self.field.q()).pow(d as u32),
        }
    }

    /// |f| as a float; usable past the u64 range.
    pub fn norm_f64(&self) -> f64 {
        match self.degree() {
            None => 0.0,
            Some(d) => f64::from(self.field.q()).powi(d as i32),
        }
    }

    /// Value of the base-q digit string (most significant digit = leading coefficient).
    ///
    /// Panics when the value does not fit in a u64.
    pub fn rank(&self) -> u64 {
        let q = u64::from(self.field.q());
        self.coeffs.iter().rev().fold(0u64, |acc, &c| {
            acc.checked_mul(q)
                .and_then(|v| v.checked_add(u64::from(c)))
                .expect("rank overflow")
        })
    }

    fn check_field(&self, other: &Poly) -> Result<()> {
        if self.field != other.field {
            Err(Error::FieldMismatch(self.field.q(), other.field.q()))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                f.add(
                    self.coeffs.get(i).copied().unwrap_or(0),
                    other.coeffs.get(i).copied().unwrap_or(0),
                )
            })
            .collect();
        Ok(Self::from_raw(f, coeffs))
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                f.sub(
                    self.coeffs.get(i).copied().unwrap_or(0),
                    other.coeffs.get(i).copied().unwrap_or(0),
                )
            })
            .collect();
        Ok(Self::from_raw(f, coeffs))
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.field));
        }
        let q = u64::from(self.field.q());
        let mut acc = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] += u64::from(a) * u64::from(b);
            }
        }
        Ok(Self::from_raw(
            self.field,
            acc.into_iter().map(|c| (c % q) as u32).collect(),
        ))
    }

    /// Euclidean division: returns `(s, r)` with `self = s * divisor + r`, `deg r < deg divisor`.
    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.check_field(divisor)?;
        let db = divisor.degree().ok_or(Error::DivisionByZero)?;
        let f = self.field;
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((Self::zero(f), self.clone()));
        }
        let inv_lead = f.inv(divisor.leading());
        let mut quot = vec![0u32; rem.len() - db];
        for shift in (0..rem.len() - db).rev() {
            let c = f.mul(rem[shift + db], inv_lead);
            quot[shift] = c;
            if c == 0 {
                continue;
            }
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                rem[shift + j] = f.sub(rem[shift + j], f.mul(c, b));
            }
        }
        rem.truncate(db);
        Ok((Self::from_raw(f, quot), Self::from_raw(f, rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.divrem(divisor)?.1)
    }

    pub fn divides(&self, other: &Poly) -> Result<bool> {
        Ok(other.rem(self)?.is_zero())
    }

    /// Exact quotient, erroring if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Poly> {
        let (s, r) = self.divrem(divisor)?;
        if r.is_zero() {
            Ok(s)
        } else {
            Err(Error::Precondition(format!("{divisor} does not divide {self}")))
        }
    }

    /// Monic generator of the ideal (self, other); gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.to_monic())
    }

    pub fn is_coprime(&self, other: &Poly) -> Result<bool> {
        Ok(self.gcd(other)?.is_one())
    }

    /// Inverse of `self` modulo `m`, reduced below deg m.
    pub fn inv_mod(&self, m: &Poly) -> Result<Poly> {
        self.check_field(m)?;
        if m.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = self.field;
        // invariant: s_i·self ≡ r_i (mod m)
        let (mut r0, mut r1) = (m.clone(), self.rem(m)?);
        let (mut s0, mut s1) = (Self::zero(f), Self::one(f));
        while !r1.is_zero() {
            let (quot, rem) = r0.divrem(&r1)?;
            let s2 = &s0 - &(&quot * &s1);
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        if r0.degree() != Some(0) {
            return Err(Error::Precondition(format!("{self} is not invertible modulo {m}")));
        }
        s0.scale(f.inv(r0.leading())).rem(m)
    }

    /// Scales by the inverse leading coefficient; zero stays zero.
    pub fn to_monic(&self) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scale(self.field.inv(self.leading()))
    }

    pub fn scale(&self, c: u32) -> Poly {
        let f = self.field;
        let c = c % f.q();
        Self::from_raw(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn evaluate(&self, x: u32) -> u32 {
        let f = self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, x % f.q()), c))
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut acc = Self::one(self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }
}

impl Ord for Poly {
    /// Degree first, then coefficients from the top down (the digit-string order).
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
            .then_with(|| self.field.cmp(&other.field))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[q={}]({})", self.field.q(), self)
    }
}

// Operator forms panic on field mismatch; the `try_*` methods report it instead.
macro_rules! binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&Poly> for &Poly {
            type Output = Poly;

            fn $method(self, rhs: &Poly) -> Poly {
                self.$inner(rhs).expect("polynomial field mismatch")
            }
        }

        impl $tr<Poly> for Poly {
            type Output = Poly;

            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        let f = self.field;
        Poly::from_raw(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl Neg for Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> PrimeField {
        PrimeField::new(3).unwrap()
    }

    fn p(c: &[u32]) -> Poly {
        Poly::new(f3(), c.iter().copied())
    }

    #[test]
    fn product_of_linear_factors_over_f3() {
        // (T+1)(T+2) = T^2 + 3T + 2 = T^2 + 2
        assert_eq!(&p(&[1, 1]) * &p(&[2, 1]), p(&[2, 0, 1]));
    }

    #[test]
    fn divrem_by_t() {
        let (s, r) = p(&[1, 0, 1]).divrem(&p(&[0, 1])).unwrap();
        assert_eq!(s, p(&[0, 1]));
        assert_eq!(r, p(&[1]));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(p(&[1, 1]).divrem(&Poly::zero(f3())), Err(Error::DivisionByZero));
        assert_eq!(p(&[1, 1]).rem(&Poly::zero(f3())), Err(Error::DivisionByZero));
    }

    #[test]
    fn field_mismatch_is_an_error() {
        let g = Poly::one(PrimeField::new(5).unwrap());
        assert_eq!(p(&[1]).try_add(&g), Err(Error::FieldMismatch(3, 5)));
        assert_eq!(p(&[1]).try_mul(&g), Err(Error::FieldMismatch(3, 5)));
        assert!(p(&[1]).gcd(&g).is_err());
    }

    #[test]
    fn gcd_with_zero_is_monic_input() {
        let f = p(&[2, 0, 2]);
        assert_eq!(f.gcd(&Poly::zero(f3())).unwrap(), p(&[1, 0, 1]));
        assert_eq!(Poly::zero(f3()).gcd(&f).unwrap(), p(&[1, 0, 1]));
    }

    #[test]
    fn degree_and_norm_conventions() {
        assert_eq!(Poly::zero(f3()).degree(), None);
        assert_eq!(Poly::zero(f3()).norm(), 0);
        assert_eq!(p(&[2]).degree(), Some(0));
        assert_eq!(p(&[2]).norm(), 1);
        assert_eq!(p(&[0, 0, 1]).norm(), 9);
        assert_eq!(p(&[1, 2, 0, 0]).coeffs(), &[1, 2]);
    }

    #[test]
    fn rank_round_trip_and_order() {
        let f = p(&[1, 2, 1]);
        assert_eq!(f.rank(), 1 + 2 * 3 + 9);
        assert_eq!(Poly::from_rank(f3(), f.rank()), f);
        assert!(p(&[2, 2]) < p(&[0, 0, 1]));
        assert!(p(&[1, 0, 1]) < p(&[0, 1, 1]));
        assert_eq!(Poly::monic_from_rank(f3(), 2, 5), p(&[2, 1, 1]));
    }

    #[test]
    fn evaluate_and_negate() {
        let f = p(&[1, 0, 1]);
        assert_eq!(f.evaluate(0), 1);
        assert_eq!(f.evaluate(1), 2);
        assert_eq!(f.evaluate(2), 2);
        assert_eq!(-&p(&[0, 1]), p(&[0, 2]));
        assert_eq!(Poly::from_signed(f3(), &[0, -1]), p(&[0, 2]));
    }
}
