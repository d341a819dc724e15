use crate::fieldpoly::{Poly, PrimeField};

/// Largest modulus degree the rank-encoded residue ring supports.
pub const MAX_RING_DEGREE: usize = 31;

/// F_q[T]/(M) for monic M, with residues encoded by their digit-string rank.
#[derive(Clone, Debug)]
pub(crate) struct ResidueRing {
    field: PrimeField,
    q: u32,
    d: usize,
    /// coefficients of M below the leading term
    low: Vec<u32>,
    size: u32,
}

impl ResidueRing {
    /// Caller guarantees `m` monic with deg m <= MAX_RING_DEGREE and q^deg m < 2^32.
    pub fn new(m: &Poly) -> Self {
        let d = m.deg();
        assert!(d <= MAX_RING_DEGREE);
        let q = m.field().q();
        let size = u32::try_from(u64::from(q).pow(d as u32)).expect("residue ring too large");
        Self {
            field: m.field(),
            q,
            d,
            low: m.coeffs()[..d].to_vec(),
            size,
        }
    }

    /// Number of residues, q^deg M.
    #[inline]
    pub fn size(&self) -> u32 {
        self.size
    }

    #[inline]
    pub fn one(&self) -> u32 {
        u32::from(self.d > 0)
    }

    #[inline]
    pub fn decode(&self, mut rank: u32, out: &mut [u32]) {
        for c in out.iter_mut().take(self.d) {
            *c = rank % self.q;
            rank /= self.q;
        }
    }

    #[inline]
    pub fn encode(&self, coeffs: &[u32]) -> u32 {
        coeffs[..self.d].iter().rev().fold(0, |acc, &c| acc * self.q + c)
    }

    pub fn to_poly(&self, rank: u32) -> Poly {
        Poly::from_rank(self.field, u64::from(rank))
    }

    /// Rank of the residue of an arbitrary polynomial over the same field.
    pub fn reduce(&self, p: &Poly) -> u32 {
        if self.d == 0 {
            return 0;
        }
        let mut buf = [0u32; 2 * MAX_RING_DEGREE + 2];
        if p.coeffs().len() <= self.d {
            buf[..p.coeffs().len()].copy_from_slice(p.coeffs());
            return self.encode(&buf);
        }
        let mut work = p.coeffs().to_vec();
        self.reduce_in_place(&mut work);
        self.encode(&work)
    }

    /// Reduces coefficients (each < q) so that only the first `d` matter.
    fn reduce_in_place(&self, c: &mut [u32]) {
        let q = self.q;
        for k in (self.d..c.len()).rev() {
            let top = c[k] % q;
            c[k] = 0;
            if top == 0 {
                continue;
            }
            // T^d ≡ −low(T)
            let base = k - self.d;
            for (i, &l) in self.low.iter().enumerate() {
                c[base + i] = (c[base + i] + top * (q - l)) % q;
            }
        }
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if self.d == 0 {
            return 0;
        }
        let q = self.q;
        let mut x = [0u32; MAX_RING_DEGREE + 1];
        let mut y = [0u32; MAX_RING_DEGREE + 1];
        self.decode(a, &mut x);
        self.decode(b, &mut y);
        let mut prod = [0u32; 2 * MAX_RING_DEGREE + 2];
        for i in 0..self.d {
            if x[i] == 0 {
                continue;
            }
            for j in 0..self.d {
                prod[i + j] = (prod[i + j] + x[i] * y[j]) % q;
            }
        }
        self.reduce_in_place(&mut prod[..2 * self.d - 1]);
        self.encode(&prod)
    }

    pub fn pow(&self, base: u32, mut e: u64) -> u32 {
        let mut acc = self.one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(b, b);
            }
        }
        acc
    }

    /// Marks residues sharing a factor with M, given the distinct irreducible factors of M.
    pub fn non_units(&self, primes: &[Poly]) -> Vec<bool> {
        let mut bad = vec![false; self.size as usize];
        if self.d == 0 {
            return bad;
        }
        for p in primes {
            let dp = p.deg();
            let count = u64::from(self.q).pow((self.d - dp) as u32);
            for m in 0..count {
                let multiple = p * &Poly::from_rank(self.field, m);
                bad[self.reduce(&multiple) as usize] = true;
            }
        }
        bad
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_matches_poly_arithmetic() {
        let f = PrimeField::new(5).unwrap();
        let m = Poly::new(f, [2, 0, 1, 3, 1]);
        let ring = ResidueRing::new(&m);
        for a in (0..ring.size()).step_by(37) {
            for b in (0..ring.size()).step_by(53) {
                let expect = (&ring.to_poly(a) * &ring.to_poly(b)).rem(&m).unwrap();
                assert_eq!(ring.to_poly(ring.mul(a, b)), expect);
            }
        }
        let big = Poly::new(f, [1, 2, 3, 4, 0, 1, 2, 3, 4, 1]);
        assert_eq!(ring.to_poly(ring.reduce(&big)), big.rem(&m).unwrap());
        let x = ring.reduce(&Poly::new(f, [1, 1]));
        assert_eq!(
            ring.to_poly(ring.pow(x, 7)),
            Poly::new(f, [1, 1]).pow(7).rem(&m).unwrap()
        );
    }

    #[test]
    fn trivial_ring() {
        let f = PrimeField::new(3).unwrap();
        let ring = ResidueRing::new(&Poly::one(f));
        assert_eq!((ring.size(), ring.one(), ring.mul(0, 0)), (1, 0, 0));
        assert_eq!(ring.reduce(&Poly::new(f, [1, 2, 1])), 0);
    }
}
