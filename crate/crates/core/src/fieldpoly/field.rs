use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The prime field F_q for an odd prime 3 <= q <= 61.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PrimeField {
    q: u32,
}

pub const MAX_Q: u32 = 61;

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(q: u32) -> Result<Self> {
        if !(3..=MAX_Q).contains(&q) || q.is_multiple_of(2) || !is_prime(q) {
            return Err(Error::InvalidField(q));
        }
        Ok(Self { q })
    }

    #[inline]
    pub fn q(self) -> u32 {
        self.q
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        a * b % self.q
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1;
        base %= self.q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(self, a: u32) -> u32 {
        debug_assert!(!a.is_multiple_of(self.q), "inverse of zero");
        self.pow(a, u64::from(self.q - 2))
    }

    /// Smallest generator of the cyclic group F_q^*.
    pub fn primitive_root(self) -> u32 {
        let n = self.q - 1;
        let mut primes = Vec::new();
        let mut m = n;
        let mut p = 2;
        while p * p <= m {
            if m.is_multiple_of(p) {
                primes.push(p);
                while m.is_multiple_of(p) {
                    m /= p;
                }
            }
            p += 1;
        }
        if m > 1 {
            primes.push(m);
        }
        (2..self.q)
            .find(|&g| primes.iter().all(|&p| self.pow(g, u64::from(n / p)) != 1))
            .unwrap_or(1)
    }
}

impl TryFrom<u32> for PrimeField {
    type Error = Error;

    fn try_from(q: u32) -> Result<Self> {
        Self::new(q)
    }
}

impl From<PrimeField> for u32 {
    fn from(f: PrimeField) -> u32 {
        f.q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_odd_primes_only() {
        for q in [3, 5, 7, 11, 13, 59, 61] {
            assert!(PrimeField::new(q).is_ok(), "q={q}");
        }
        for q in [0, 1, 2, 4, 9, 15, 25, 49, 67, 1 << 20] {
            assert_eq!(PrimeField::new(q), Err(Error::InvalidField(q)));
        }
    }

    #[test]
    fn inverses_and_roots() {
        let f = PrimeField::new(7).unwrap();
        for a in 1..7 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        assert_eq!(f.primitive_root(), 3);
        assert_eq!(PrimeField::new(3).unwrap().primitive_root(), 2);
        assert_eq!(PrimeField::new(5).unwrap().primitive_root(), 2);
    }
}
