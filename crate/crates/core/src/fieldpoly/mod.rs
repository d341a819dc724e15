//! Arithmetic in F_q[T] for an odd prime q.

mod enumerate;
mod factor;
mod field;
mod poly;
mod text;

pub use enumerate::{enumerate_monic, enumerate_monic_up_to, enumerate_residues};
pub(crate) use factor::divisors_of;
pub use factor::{divisor_pairs, divisors, factor, irreducibles, is_irreducible, Factorization};
pub use field::{PrimeField, MAX_Q};
pub use poly::Poly;

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn poly_strategy() -> impl Strategy<Value = Poly> {
        (
            prop::sample::select(vec![3u32, 5, 7]),
            prop::collection::vec(0u32..7, 0..7),
        )
            .prop_map(|(q, c)| Poly::new(PrimeField::new(q).unwrap(), c))
    }

    fn pair() -> impl Strategy<Value = (Poly, Poly)> {
        (
            prop::sample::select(vec![3u32, 5, 7]),
            prop::collection::vec(0u32..7, 0..7),
            prop::collection::vec(0u32..7, 0..7),
        )
            .prop_map(|(q, a, b)| {
                let f = PrimeField::new(q).unwrap();
                (Poly::new(f, a), Poly::new(f, b))
            })
    }

    proptest! {
        #[test]
        fn gcd_is_monic_symmetric_and_divides((a, b) in pair()) {
            let g = a.gcd(&b).unwrap();
            prop_assert_eq!(&g, &b.gcd(&a).unwrap());
            if !g.is_zero() {
                prop_assert!(g.is_monic());
                prop_assert!(g.divides(&a).unwrap());
                prop_assert!(g.divides(&b).unwrap());
            } else {
                prop_assert!(a.is_zero() && b.is_zero());
            }
        }

        #[test]
        fn divrem_reconstructs((a, b) in pair()) {
            prop_assume!(!b.is_zero());
            let (s, r) = a.divrem(&b).unwrap();
            prop_assert_eq!(&(&s * &b) + &r, a);
            prop_assert!(r.degree().is_none_or(|d| d < b.deg()));
        }

        #[test]
        fn ring_axioms((a, b) in pair(), c in poly_strategy()) {
            prop_assume!(c.field() == a.field());
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            prop_assert_eq!(&a + &(-&a), Poly::zero(a.field()));
        }
    }
}
