use super::field::PrimeField;
use super::poly::Poly;

/// Monic polynomials of degree exactly `n`, in digit-string order.
///
/// There are exactly q^n of them.
pub fn enumerate_monic(field: PrimeField, n: usize) -> impl Iterator<Item = Poly> + Clone {
    let count = u64::from(field.q()).pow(n as u32);
    (0..count).map(move |r| Poly::monic_from_rank(field, n, r))
}

/// Monic polynomials of degree at most `n`, by degree and then digit-string order.
pub fn enumerate_monic_up_to(field: PrimeField, n: usize) -> impl Iterator<Item = Poly> + Clone {
    (0..=n).flat_map(move |d| enumerate_monic(field, d))
}

/// All polynomials of degree < n (the canonical residues modulo a degree-n modulus), by rank.
pub fn enumerate_residues(field: PrimeField, n: usize) -> impl Iterator<Item = Poly> + Clone {
    let count = u64::from(field.q()).pow(n as u32);
    (0..count).map(move |r| Poly::from_rank(field, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn small_enumerations() {
        let f3 = PrimeField::new(3).unwrap();
        let deg0: Vec<_> = enumerate_monic(f3, 0).collect();
        assert_eq!(deg0, vec![Poly::one(f3)]);
        let deg1: Vec<String> = enumerate_monic(f3, 1).map(|p| p.to_string()).collect();
        assert_eq!(deg1, ["T", "T + 1", "T + 2"]);
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(enumerate_monic(f5, 3).count(), 125);
    }

    #[test]
    fn counts_are_exact_and_distinct() {
        for q in [3u32, 5, 7] {
            let f = PrimeField::new(q).unwrap();
            let max_n = if q == 3 {
                8
            } else if q == 5 {
                6
            } else {
                5
            };
            for n in 0..=max_n {
                let all: Vec<Poly> = enumerate_monic(f, n).collect();
                assert_eq!(all.len() as u64, u64::from(q).pow(n as u32));
                assert!(all.iter().all(|p| p.is_monic() && p.deg() == n));
                assert!(all.windows(2).all(|w| w[0] < w[1]));
                let distinct: HashSet<_> = all.iter().collect();
                assert_eq!(distinct.len(), all.len());
            }
        }
    }

    #[test]
    fn up_to_mode_concatenates_degrees() {
        let f = PrimeField::new(3).unwrap();
        assert_eq!(enumerate_monic_up_to(f, 3).count(), 1 + 3 + 9 + 27);
        assert_eq!(enumerate_residues(f, 2).count(), 9);
    }
}
