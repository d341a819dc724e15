use num_integer::Integer;

use super::ring::{ResidueRing, MAX_RING_DEGREE};
use crate::arithfns::require_monic;
use crate::error::{Error, Result};
use crate::fieldpoly::{factor, Poly, PrimeField};

/// Default cap on φ(R) for unit-group construction.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Sentinel in the dlog table for residues that are not units.
pub const NOT_A_UNIT: u32 = u32::MAX;

/// (F_q[T]/R)^* as Π Z/d_i with an exhaustive discrete-log table.
///
/// Unit indices are mixed-radix: index = Σ e_i·stride_i with e_0 varying fastest.
#[derive(Clone, Debug)]
pub struct UnitGroupTable {
    pub(crate) modulus: Poly,
    pub(crate) ring: ResidueRing,
    pub(crate) generators: Vec<u32>,
    pub(crate) orders: Vec<u32>,
    pub(crate) strides: Vec<u32>,
    /// residue rank → unit index, or NOT_A_UNIT
    pub(crate) dlog: Vec<u32>,
    /// unit index → residue rank
    pub(crate) elements: Vec<u32>,
}

impl UnitGroupTable {
    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn field(&self) -> PrimeField {
        self.modulus.field()
    }

    pub fn generators(&self) -> Vec<Poly> {
        self.generators.iter().map(|&g| self.ring.to_poly(g)).collect()
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    /// φ(R).
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// lcm of the generator orders.
    pub fn exponent(&self) -> u32 {
        self.orders.iter().fold(1, |acc, &d| acc.lcm(&d))
    }

    pub fn residue_count(&self) -> usize {
        self.dlog.len()
    }

    /// Residue rank of an arbitrary polynomial.
    pub fn residue_rank(&self, a: &Poly) -> u32 {
        self.ring.reduce(a)
    }

    pub fn unit_index_of_rank(&self, rank: u32) -> Option<u32> {
        match self.dlog[rank as usize] {
            NOT_A_UNIT => None,
            i => Some(i),
        }
    }

    pub fn unit_index(&self, a: &Poly) -> Option<u32> {
        self.unit_index_of_rank(self.ring.reduce(a))
    }

    pub fn element(&self, index: u32) -> Poly {
        self.ring.to_poly(self.elements[index as usize])
    }

    pub fn exponents(&self, index: u32) -> Vec<u32> {
        let mut rest = index;
        self.orders
            .iter()
            .map(|&d| {
                let e = rest % d;
                rest /= d;
                e
            })
            .collect()
    }

    pub fn index_of(&self, exps: &[u32]) -> u32 {
        exps.iter()
            .zip(&self.orders)
            .zip(&self.strides)
            .map(|((&e, &d), &s)| (e % d) * s)
            .sum()
    }

    /// Exponent vector of `a`, or None if gcd(a, R) ≠ 1.
    pub fn dlog(&self, a: &Poly) -> Option<Vec<u32>> {
        self.unit_index(a).map(|i| self.exponents(i))
    }

    /// Product of two units, by index.
    pub fn mul_index(&self, a: u32, b: u32) -> u32 {
        let r = self.ring.mul(self.elements[a as usize], self.elements[b as usize]);
        self.dlog[r as usize]
    }

    /// Index arithmetic in Π Z/d_i (must agree with `mul_index`).
    pub fn add_index(&self, a: u32, b: u32) -> u32 {
        let (mut x, mut y) = (a, b);
        let mut out = 0;
        for (&d, &s) in self.orders.iter().zip(&self.strides) {
            out += ((x % d + y % d) % d) * s;
            x /= d;
            y /= d;
        }
        out
    }
}

pub fn unit_group(r: &Poly) -> Result<UnitGroupTable> {
    unit_group_with_budget(r, DEFAULT_BUDGET)
}

pub(crate) fn check_modulus(r: &Poly, budget: u64) -> Result<u64> {
    if r.is_zero() {
        return Err(Error::ZeroModulus);
    }
    require_monic(r)?;
    let phi = crate::arithfns::phi(r)?;
    if phi > budget {
        return Err(Error::BudgetExceeded { order: phi, budget });
    }
    let size = u64::from(r.field().q()).checked_pow(r.deg() as u32);
    if r.deg() > MAX_RING_DEGREE || size.is_none_or(|s| s > u64::from(u32::MAX / 2)) {
        return Err(Error::BudgetExceeded { order: phi, budget });
    }
    Ok(phi)
}

pub fn unit_group_with_budget(r: &Poly, budget: u64) -> Result<UnitGroupTable> {
    let phi = check_modulus(r, budget)?;
    let field = r.field();
    let ring = ResidueRing::new(r);
    let fact = factor(r)?;

    let mut generators = Vec::new();
    let mut orders = Vec::new();
    for (p, e) in &fact.factors {
        let m = p.pow(u64::from(*e));
        let comp_ring = ResidueRing::new(&m);
        let comp_order = p.norm().pow(e - 1) * (p.norm() - 1);
        let basis = component_basis(&comp_ring, p, comp_order)?;
        // CRT idempotent for this component: ε ≡ 1 mod m, ε ≡ 0 mod R/m
        let cofactor = r.exact_div(&m)?;
        let eps = (&cofactor * &cofactor.inv_mod(&m)?).rem(r)?;
        let one = Poly::one(field);
        for (g, d) in basis {
            let g = comp_ring.to_poly(g);
            let lifted = (&one + &(&eps * &(&g - &one))).rem(r)?;
            generators.push(ring.reduce(&lifted));
            orders.push(d);
        }
    }
    let table = close(r.clone(), ring, generators, orders)?;
    if table.order() as u64 != phi {
        return Err(Error::UnitGroup(format!(
            "closure has {} elements, expected φ = {phi}",
            table.order()
        )));
    }
    Ok(table)
}

/// Builds the dlog table by closure over generator multiplication and
/// checks that it is a bijection.
pub(crate) fn close(
    modulus: Poly,
    ring: ResidueRing,
    generators: Vec<u32>,
    orders: Vec<u32>,
) -> Result<UnitGroupTable> {
    let total: u64 = orders.iter().map(|&d| u64::from(d)).product();
    if total > u64::from(u32::MAX / 2) {
        return Err(Error::UnitGroup("group order overflows the index type".into()));
    }
    let mut elements = Vec::with_capacity(total as usize);
    elements.push(ring.one());
    let mut strides = Vec::with_capacity(orders.len());
    for (&g, &d) in generators.iter().zip(&orders) {
        let block = elements.len();
        strides.push(block as u32);
        for k in 1..d as usize {
            for t in 0..block {
                let prev = elements[(k - 1) * block + t];
                elements.push(ring.mul(prev, g));
            }
        }
        // g^d must close the cycle
        let wrap = ring.mul(elements[(d as usize - 1) * block], g);
        if wrap != ring.one() {
            return Err(Error::UnitGroup(format!(
                "generator {} does not have order {d}",
                ring.to_poly(g)
            )));
        }
    }
    let mut dlog = vec![NOT_A_UNIT; ring.size() as usize];
    for (i, &x) in elements.iter().enumerate() {
        if dlog[x as usize] != NOT_A_UNIT {
            return Err(Error::UnitGroup(format!(
                "generators are dependent: {} reached twice",
                ring.to_poly(x)
            )));
        }
        dlog[x as usize] = i as u32;
    }
    Ok(UnitGroupTable {
        modulus,
        ring,
        generators,
        orders,
        strides,
        dlog,
        elements,
    })
}

fn prime_powers(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut v = 0;
            while n.is_multiple_of(p) {
                n /= p;
                v += 1;
            }
            out.push((p, v));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Independent generators of (F_q[T]/P^e)^*, Sylow subgroup by Sylow subgroup.
///
/// Within a Sylow ℓ-subgroup S, repeatedly pick the element whose image in
/// S/H has maximal order ℓ^k, then correct it by an element of H so that its
/// order in S is exactly ℓ^k. Such a correction exists because ℓ^k is the
/// exponent of S/H, and it makes the new element independent of H.
fn component_basis(ring: &ResidueRing, p: &Poly, order: u64) -> Result<Vec<(u32, u32)>> {
    let bad = ring.non_units(std::slice::from_ref(p));
    let units: Vec<u32> = (0..ring.size()).filter(|&x| !bad[x as usize]).collect();
    if units.len() as u64 != order {
        return Err(Error::UnitGroup(format!(
            "{} units mod {}, expected {order}",
            units.len(),
            p
        )));
    }
    let mut basis = Vec::new();
    for (ell, v) in prime_powers(order) {
        let sylow_order = ell.pow(v);
        let cofactor = order / sylow_order;
        // the Sylow subgroup, as the image of x ↦ x^cofactor
        let mut in_sylow = vec![false; ring.size() as usize];
        let mut sylow = Vec::with_capacity(sylow_order as usize);
        for &x in &units {
            let y = ring.pow(x, cofactor);
            if !in_sylow[y as usize] {
                in_sylow[y as usize] = true;
                sylow.push(y);
            }
        }
        if sylow.len() as u64 != sylow_order {
            return Err(Error::UnitGroup(format!(
                "Sylow {ell}-subgroup has {} elements, expected {sylow_order}",
                sylow.len()
            )));
        }
        // current subgroup H: member[rank] = index in H's mixed-radix basis
        let mut member = vec![NOT_A_UNIT; ring.size() as usize];
        member[ring.one() as usize] = 0;
        let mut members = vec![ring.one()];
        let mut local: Vec<(u32, u32)> = Vec::new();
        while (members.len() as u64) < sylow_order {
            let mut best: Option<(u32, u32)> = None;
            for &y in &sylow {
                let mut z = y;
                let mut k = 0;
                while member[z as usize] == NOT_A_UNIT {
                    z = ring.pow(z, ell);
                    k += 1;
                }
                if best.is_none_or(|(_, bk)| k > bk) {
                    best = Some((y, k));
                }
            }
            let (y, k) = best.expect("nontrivial quotient");
            let qorder = ell.pow(k);
            // y^{ℓ^k} = Π h_i^{a_i}; replace y by y·Π h_i^{−a_i/ℓ^k}
            let target = member[ring.pow(y, qorder) as usize];
            let mut rest = target;
            let mut g = y;
            for &(h, d) in &local {
                let a = rest % d;
                rest /= d;
                if u64::from(a) % qorder != 0 {
                    return Err(Error::UnitGroup(format!("quotient lift failed for ℓ = {ell}")));
                }
                let c = u64::from(a) / qorder;
                g = ring.mul(g, ring.pow(h, (u64::from(d) - c) % u64::from(d)));
            }
            if ring.pow(g, qorder) != ring.one() {
                return Err(Error::UnitGroup(format!(
                    "corrected generator has wrong order for ℓ = {ell}"
                )));
            }
            let block = members.len();
            let qorder = qorder as u32;
            let mut power = g;
            for j in 1..qorder as usize {
                for t in 0..block {
                    let x = ring.mul(members[t], power);
                    if member[x as usize] != NOT_A_UNIT {
                        return Err(Error::UnitGroup("dependent generator".into()));
                    }
                    member[x as usize] = (j * block + t) as u32;
                    members.push(x);
                }
                power = ring.mul(power, g);
            }
            local.push((g, qorder));
        }
        basis.extend(local);
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u32) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    fn check_invariants(t: &UnitGroupTable) {
        let phi = crate::arithfns::phi(t.modulus()).unwrap() as usize;
        assert_eq!(t.orders().iter().map(|&d| d as usize).product::<usize>(), phi);
        let r = t.modulus();
        for (g, &d) in t.generators().iter().zip(t.orders()) {
            assert!(g.pow(u64::from(d)).rem(r).unwrap().is_one() || r.deg() == 0);
        }
        let units = t.dlog.iter().filter(|&&x| x != NOT_A_UNIT).count();
        assert_eq!(units, phi);
        for i in (0..phi as u32).step_by(7) {
            for j in (0..phi as u32).step_by(11) {
                assert_eq!(t.mul_index(i, j), t.add_index(i, j));
            }
        }
    }

    #[test]
    fn small_examples() {
        let t = unit_group(&Poly::t(f(3))).unwrap();
        assert_eq!(t.orders(), &[2]);
        assert_eq!(t.generators(), vec![Poly::constant(f(3), 2)]);
        assert_eq!(t.dlog(&Poly::one(f(3))), Some(vec![0]));
        assert_eq!(t.dlog(&Poly::constant(f(3), 2)), Some(vec![1]));
        assert_eq!(t.dlog(&Poly::t(f(3))), None);

        let t2 = unit_group(&Poly::new(f(3), [0, 0, 1])).unwrap();
        assert_eq!(t2.order(), 6);
        check_invariants(&t2);

        let t3 = unit_group(&Poly::new(f(3), [0, 1, 1])).unwrap();
        assert_eq!(t3.orders(), &[2, 2]);
        check_invariants(&t3);

        let one = unit_group(&Poly::one(f(3))).unwrap();
        assert_eq!((one.order(), one.orders().len()), (1, 0));
        assert_eq!(one.dlog(&Poly::new(f(3), [2, 1])), Some(vec![]));
    }

    #[test]
    fn invariants_over_small_moduli() {
        for q in [3, 5] {
            for n in 1..=4 {
                for r in crate::fieldpoly::enumerate_monic(f(q), n) {
                    check_invariants(&unit_group(&r).unwrap());
                }
            }
        }
        // a wild 3-group: (F_3[T]/T^6)^* ≅ Z/2 × (1 + T·A)
        check_invariants(&unit_group(&Poly::monomial(f(3), 1, 6)).unwrap());
        check_invariants(&unit_group(&Poly::monomial(f(5), 1, 5)).unwrap());
    }

    #[test]
    fn rejects_bad_moduli() {
        assert_eq!(unit_group(&Poly::zero(f(3))).unwrap_err(), Error::ZeroModulus);
        assert!(matches!(unit_group(&Poly::new(f(3), [1, 2])), Err(Error::NotMonic(_))));
        let big = Poly::monomial(f(3), 1, 14);
        assert!(matches!(unit_group(&big), Err(Error::BudgetExceeded { .. })));
        assert!(unit_group_with_budget(&Poly::monomial(f(3), 1, 4), 10).is_err());
    }
}
