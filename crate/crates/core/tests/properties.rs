//! Property tests for the structural invariants of unit groups, characters,
//! arithmetic functions and moments.

use num_complex::Complex64;
use proptest::prelude::*;

use fqmoments::arithfns::{arith_profile, mu, omega, phi, phi_star};
use fqmoments::charmod::{unit_group, CharFilter, CharacterGroup, Parity};
use fqmoments::fieldpoly::{divisors, enumerate_monic, Poly, PrimeField};
use fqmoments::moments::{offdiag_bound_check, Family, FamilyData, MomentSpec, Normalization, Weight};

fn field(q: u32) -> PrimeField {
    PrimeField::new(q).unwrap()
}

/// Monic polynomial of degree 1..=max_deg over F_3 or F_5.
fn modulus(max_deg: usize) -> impl Strategy<Value = Poly> {
    (prop::sample::select(vec![3u32, 5]), 1..=max_deg, any::<u64>()).prop_map(|(q, d, seed)| {
        let f = field(q);
        Poly::monic_from_rank(f, d, seed % u64::from(q).pow(d as u32))
    })
}

fn residue(r: &Poly, seed: u64) -> Poly {
    Poly::from_rank(r.field(), seed % r.norm())
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() < 1e-9
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dlog_is_a_homomorphism(r in modulus(4), s in any::<u64>(), t in any::<u64>()) {
        let table = unit_group(&r).unwrap();
        let (u, v) = (residue(&r, s), residue(&r, t));
        let uv = (&u * &v).rem(&r).unwrap();
        match (table.dlog(&u), table.dlog(&v)) {
            (Some(a), Some(b)) => {
                let sum: Vec<u32> = a.iter().zip(&b).zip(table.orders()).map(|((x, y), d)| (x + y) % d).collect();
                prop_assert_eq!(table.dlog(&uv), Some(sum));
            }
            _ => prop_assert!(table.dlog(&uv).is_none()),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn counts_match_arithmetic(r in modulus(4)) {
        let prof = arith_profile(&r).unwrap();
        let table = unit_group(&r).unwrap();
        let order: u64 = table.orders().iter().map(|&d| u64::from(d)).product();
        prop_assert_eq!(order, prof.phi);
        for g in table.generators().iter().zip(table.orders()) {
            prop_assert!(g.0.pow(u64::from(*g.1)).rem(&r).unwrap().is_one());
        }
        let group = CharacterGroup::new(&r).unwrap();
        let even = group.filtered(CharFilter::parity(Parity::Even)).unwrap().len() as u64;
        let odd = group.filtered(CharFilter::parity(Parity::Odd)).unwrap().len() as u64;
        prop_assert_eq!((even, odd), (prof.phi_plus, prof.phi_minus));
        prop_assert_eq!(group.filtered(CharFilter::primitive()).unwrap().len() as u64, prof.phi_star);
    }

    #[test]
    fn conjugation_and_induced_moduli(r in modulus(3), pick in any::<u32>(), s in any::<u64>(), t in any::<u64>()) {
        let group = CharacterGroup::new(&r).unwrap();
        let chi = group.character_at(pick % group.len() as u32).unwrap();
        let bar = chi.conjugate();
        let a = residue(&r, s);
        prop_assert!(close(bar.value(&a), chi.value(&a).conj()));
        prop_assert_eq!(bar.conductor(), chi.conductor());
        prop_assert_eq!(bar.parity(), chi.parity());
        prop_assert_eq!(chi.is_principal(), chi.conductor().is_one());
        prop_assert!(chi.conductor().divides(&r).unwrap());
        // χ factors through its conductor: units congruent mod the conductor agree
        let b = residue(&r, t);
        let c = chi.conductor();
        let shifted = (&a + &(&b * c)).rem(&r).unwrap();
        if a.is_coprime(&r).unwrap() && shifted.is_coprime(&r).unwrap() {
            prop_assert!(close(chi.value(&a), chi.value(&shifted)));
        }
        // complete multiplicativity
        let ab = (&a * &b).rem(&r).unwrap();
        prop_assert!(close(chi.value(&ab), chi.value(&a) * chi.value(&b)));
    }

    #[test]
    fn multiplicative_functions(a in modulus(3), b in modulus(3)) {
        prop_assume!(a.field() == b.field() && a.is_coprime(&b).unwrap());
        let ab = &a * &b;
        prop_assert_eq!(phi(&ab).unwrap(), phi(&a).unwrap() * phi(&b).unwrap());
        prop_assert_eq!(mu(&ab).unwrap(), mu(&a).unwrap() * mu(&b).unwrap());
        prop_assert_eq!(phi_star(&ab).unwrap(), phi_star(&a).unwrap() * phi_star(&b).unwrap());
        prop_assert_eq!(omega(&ab).unwrap(), omega(&a).unwrap() + omega(&b).unwrap());
    }

    #[test]
    fn moments_are_real_and_twist_symmetric(r in modulus(4), s in any::<u64>(), t in any::<u64>(), fam in 0usize..3) {
        let family = [Family::Primitive, Family::NonprincipalEven, Family::NonprincipalOdd][fam];
        let group = CharacterGroup::new(&r).unwrap();
        let data = FamilyData::new(group, family).unwrap();
        let f = r.field();
        let h = Poly::monic_from_rank(f, 1, s % u64::from(f.q()));
        let k = Poly::monic_from_rank(f, 1, t % u64::from(f.q()));
        let hk = data.raw_sum(&h, &k, Weight::Exact);
        let kh = data.raw_sum(&k, &h, Weight::Exact);
        prop_assert!(close(hk, kh.conj()));
        prop_assert!(hk.im.abs() < 1e-8 * data.len().max(1) as f64);
        if (&h * &k).is_coprime(&r).unwrap() && family == Family::Primitive && !data.is_empty() {
            let a = data.report(&MomentSpec::two_twist(r.clone(), h.clone(), k.clone()), Weight::Exact).unwrap();
            let b = data.report(&MomentSpec::two_twist(r.clone(), k, h), Weight::Exact).unwrap();
            prop_assert!((a.observed - b.observed).abs() < 1e-9);
            prop_assert_eq!(a.normalization, Normalization::Mean);
        }
    }
}

#[test]
fn phi_star_matches_conductor_counts_for_q3() {
    for d in 1..=4 {
        for r in enumerate_monic(field(3), d) {
            let group = CharacterGroup::new(&r).unwrap();
            let exact = group
                .characters()
                .map(|c| c.unwrap())
                .filter(|c| c.conductor() == &r)
                .count() as u64;
            assert_eq!(exact, phi_star(&r).unwrap(), "{r}");
        }
    }
}

/// Refining the congruence (F | F') can only remove pairs from the off-diagonal sum.
#[test]
fn offdiagonal_sum_shrinks_as_the_modulus_grows() {
    let f = field(3);
    let twists: Vec<Poly> = [vec![1], vec![1, 1], vec![2, 1]]
        .into_iter()
        .map(|c| Poly::new(f, c))
        .collect();
    for r in (2..=4).flat_map(|d| enumerate_monic(f, d)) {
        let divs = divisors(&r).unwrap();
        for h in &twists {
            for z in 0..r.deg() {
                for small in &divs {
                    for big in divs.iter().filter(|b| small.divides(b).unwrap()) {
                        let lo = offdiag_bound_check(&r, small, h, &twists[0], z).unwrap();
                        let hi = offdiag_bound_check(&r, big, h, &twists[0], z).unwrap();
                        assert!(hi.pairs <= lo.pairs, "R={r} F={small}→{big} H={h} z={z}");
                    }
                }
            }
        }
    }
}
