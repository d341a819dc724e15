use std::f64::consts::TAU;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use num_integer::Integer;
use serde::Serialize;

use super::unitgroup::{unit_group, UnitGroupTable};
use crate::error::{Error, Result};
use crate::fieldpoly::{divisors_of, factor, Poly};

/// An exact root of unity e^{2πi·num/den}, stored reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RationalAngle {
    num: u32,
    den: u32,
}

impl RationalAngle {
    pub const ZERO: RationalAngle = RationalAngle { num: 0, den: 1 };

    pub fn new(num: i64, den: u32) -> Self {
        assert!(den > 0, "angle denominator must be positive");
        let n = num.rem_euclid(i64::from(den)) as u32;
        let g = n.gcd(&den);
        Self {
            num: n / g,
            den: den / g,
        }
    }

    pub fn num(self) -> u32 {
        self.num
    }

    pub fn den(self) -> u32 {
        self.den
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(1.0, TAU * f64::from(self.num) / f64::from(self.den))
    }
}

impl std::ops::Add for RationalAngle {
    type Output = Self;

    fn add(self, other: Self) -> Self {
        let den = self.den.lcm(&other.den);
        let a = i64::from(self.num) * i64::from(den / self.den);
        let b = i64::from(other.num) * i64::from(den / other.den);
        Self::new(a + b, den)
    }
}

impl std::ops::Neg for RationalAngle {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-i64::from(self.num), self.den)
    }
}

impl fmt::Display for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// χ(A): zero off the units, an exact root of unity on them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharValue {
    Zero,
    Root(RationalAngle),
}

impl CharValue {
    pub fn to_complex(self) -> Complex64 {
        match self {
            CharValue::Zero => Complex64::new(0.0, 0.0),
            CharValue::Root(a) => a.to_complex(),
        }
    }

    pub fn conj(self) -> Self {
        match self {
            CharValue::Zero => CharValue::Zero,
            CharValue::Root(a) => CharValue::Root(-a),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Which characters a stream keeps.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CharFilter {
    pub primitive_only: bool,
    pub nonprincipal_only: bool,
    pub parity: Option<Parity>,
}

impl CharFilter {
    pub const ALL: CharFilter = CharFilter {
        primitive_only: false,
        nonprincipal_only: false,
        parity: None,
    };

    pub fn primitive() -> Self {
        Self {
            primitive_only: true,
            ..Self::ALL
        }
    }

    pub fn nonprincipal() -> Self {
        Self {
            nonprincipal_only: true,
            ..Self::ALL
        }
    }

    pub fn parity(p: Parity) -> Self {
        Self {
            parity: Some(p),
            ..Self::ALL
        }
    }

    pub fn and_parity(mut self, p: Parity) -> Self {
        self.parity = Some(p);
        self
    }

    pub fn accepts(&self, chi: &DirichletCharacter) -> bool {
        (!self.primitive_only || chi.is_primitive())
            && (!self.nonprincipal_only || !chi.is_principal())
            && self.parity.is_none_or(|p| chi.parity() == p)
    }
}

/// Everything shared by the characters of one modulus.
#[derive(Debug)]
pub struct CharacterGroup {
    table: Arc<UnitGroupTable>,
    /// N = lcm of the generator orders; all angles live in Z/N
    exponent: u32,
    /// N / d_i
    scale: Vec<u32>,
    /// unit index of a generator of F_q^*
    const_root: u32,
    /// divisors S of R in ascending order with generators of {u ≡ 1 mod S}
    kernels: Vec<(Poly, Vec<u32>)>,
    roots: OnceLock<Vec<Complex64>>,
    monic_units: OnceLock<Vec<Vec<u32>>>,
}

impl CharacterGroup {
    pub fn new(r: &Poly) -> Result<Arc<Self>> {
        Self::from_table(Arc::new(unit_group(r)?))
    }

    pub fn from_table(table: Arc<UnitGroupTable>) -> Result<Arc<Self>> {
        let r = table.modulus().clone();
        let field = r.field();
        let exponent = table.exponent();
        let scale = table.orders().iter().map(|&d| exponent / d).collect();
        let g0 = Poly::constant(field, field.primitive_root());
        let const_root = table
            .unit_index(&g0)
            .ok_or_else(|| Error::UnitGroup("constant is not a unit".into()))?;
        let divs = divisors_of(field, &factor(&r)?);
        let kernels = divs
            .into_iter()
            .map(|s| {
                let gens = kernel_generators(&table, &s);
                (s, gens)
            })
            .collect();
        Ok(Arc::new(Self {
            table,
            exponent,
            scale,
            const_root,
            kernels,
            roots: OnceLock::new(),
            monic_units: OnceLock::new(),
        }))
    }

    pub fn table(&self) -> &Arc<UnitGroupTable> {
        &self.table
    }

    pub fn modulus(&self) -> &Poly {
        self.table.modulus()
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn len(&self) -> usize {
        self.table.order()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn divisors(&self) -> impl Iterator<Item = &Poly> {
        self.kernels.iter().map(|(s, _)| s)
    }

    /// e^{2πi a/N} for a in 0..N.
    pub fn roots(&self) -> &[Complex64] {
        self.roots.get_or_init(|| {
            let n = f64::from(self.exponent);
            (0..self.exponent)
                .map(|a| Complex64::from_polar(1.0, TAU * f64::from(a) / n))
                .collect()
        })
    }

    #[inline]
    pub fn root(&self, angle: u32) -> Complex64 {
        self.roots()[angle as usize]
    }

    /// Unit indices of the monic polynomials of each degree 0..=deg R
    /// (non-units skipped), in rank order.
    pub fn monic_units(&self) -> &[Vec<u32>] {
        self.monic_units.get_or_init(|| {
            let t = &self.table;
            let r = t.modulus();
            let d = r.deg();
            let q = r.field().q();
            let mut out = Vec::with_capacity(d + 1);
            for n in 0..d {
                let base = q.pow(n as u32);
                out.push((base..2 * base).filter_map(|rank| t.unit_index_of_rank(rank)).collect());
            }
            // T^d + low ≡ low − (R − T^d)
            let field = r.field();
            let tail = r - &Poly::monomial(field, 1, d);
            let size = t.residue_count() as u64;
            out.push(
                (0..size)
                    .filter_map(|low| {
                        let res = &Poly::from_rank(field, low) - &tail;
                        t.unit_index(&res)
                    })
                    .collect(),
            );
            out
        })
    }

    /// Angle numerator (mod N) of χ_κ at the unit with the given index.
    #[inline]
    pub fn angle_at(&self, kappa: &[u32], mut index: u32) -> u32 {
        let n = u64::from(self.exponent);
        let mut acc = 0u64;
        for ((&k, &d), &s) in kappa.iter().zip(self.table.orders()).zip(&self.scale) {
            let e = index % d;
            index /= d;
            acc += u64::from(k) * u64::from(e) % u64::from(d) * u64::from(s);
        }
        (acc % n) as u32
    }

    pub fn character(self: &Arc<Self>, kappa: Vec<u32>) -> Result<DirichletCharacter> {
        if kappa.len() != self.table.orders().len() || kappa.iter().zip(self.table.orders()).any(|(&k, &d)| k >= d) {
            return Err(Error::Precondition(format!("bad exponent vector {kappa:?}")));
        }
        let parity = if self.angle_at(&kappa, self.const_root) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        };
        let conductor = self.conductor_of(&kappa)?;
        Ok(DirichletCharacter {
            group: Arc::clone(self),
            kappa,
            parity,
            conductor,
        })
    }

    /// The character with mixed-radix counter value `index`.
    pub fn character_at(self: &Arc<Self>, index: u32) -> Result<DirichletCharacter> {
        self.character(self.table.exponents(index))
    }

    /// All φ(R) characters in counter order; κ = 0 (principal) comes first.
    pub fn characters(self: &Arc<Self>) -> impl Iterator<Item = Result<DirichletCharacter>> + '_ {
        (0..self.len() as u32).map(move |i| self.character_at(i))
    }

    pub fn filtered(self: &Arc<Self>, filter: CharFilter) -> Result<Vec<DirichletCharacter>> {
        let mut out = Vec::new();
        for chi in self.characters() {
            let chi = chi?;
            if filter.accepts(&chi) {
                out.push(chi);
            }
        }
        Ok(out)
    }

    fn is_induced(&self, kappa: &[u32], gens: &[u32]) -> bool {
        gens.iter().all(|&g| self.angle_at(kappa, g) == 0)
    }

    fn conductor_of(&self, kappa: &[u32]) -> Result<Poly> {
        let first = self
            .kernels
            .iter()
            .position(|(_, gens)| self.is_induced(kappa, gens))
            .expect("R itself is always an induced modulus");
        let (s, _) = &self.kernels[first];
        let rivals: Vec<&Poly> = self.kernels[first + 1..]
            .iter()
            .take_while(|(t, _)| t.deg() == s.deg())
            .filter(|(_, gens)| self.is_induced(kappa, gens))
            .map(|(t, _)| t)
            .collect();
        if !rivals.is_empty() {
            return Err(Error::AmbiguousConductor(format!(
                "κ = {kappa:?} mod {}: {s} and {}",
                self.modulus(),
                rivals[0]
            )));
        }
        Ok(s.clone())
    }
}

/// Generators of the subgroup {u unit : u ≡ 1 mod S}, as unit indices.
fn kernel_generators(table: &UnitGroupTable, s: &Poly) -> Vec<u32> {
    let r = table.modulus();
    let field = r.field();
    let free = r.deg() - s.deg();
    let count = u64::from(field.q()).pow(free as u32);
    let one = Poly::one(field);
    let mut member = vec![false; table.order()];
    member[0] = true;
    let mut sub = vec![0u32];
    let mut gens = Vec::new();
    for m in 0..count {
        let x = &one + &(s * &Poly::from_rank(field, m));
        let Some(x) = table.unit_index(&x) else { continue };
        if member[x as usize] {
            continue;
        }
        gens.push(x);
        let base = sub.clone();
        let mut p = x;
        while !member[p as usize] {
            for &h in &base {
                let y = table.add_index(h, p);
                member[y as usize] = true;
                sub.push(y);
            }
            p = table.add_index(p, x);
        }
    }
    gens
}

/// A Dirichlet character mod R, identified by its exponent vector κ.
#[derive(Clone)]
pub struct DirichletCharacter {
    group: Arc<CharacterGroup>,
    kappa: Vec<u32>,
    parity: Parity,
    conductor: Poly,
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirichletCharacter")
            .field("modulus", &self.modulus().to_string())
            .field("kappa", &self.kappa)
            .field("parity", &self.parity)
            .field("conductor", &self.conductor.to_string())
            .finish()
    }
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.group, &other.group) && self.kappa == other.kappa
    }
}

impl DirichletCharacter {
    pub fn group(&self) -> &Arc<CharacterGroup> {
        &self.group
    }

    pub fn modulus(&self) -> &Poly {
        self.group.modulus()
    }

    pub fn kappa(&self) -> &[u32] {
        &self.kappa
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn conductor(&self) -> &Poly {
        &self.conductor
    }

    pub fn is_principal(&self) -> bool {
        self.kappa.iter().all(|&k| k == 0)
    }

    pub fn is_primitive(&self) -> bool {
        &self.conductor == self.modulus()
    }

    /// Angle numerator over N = `group().exponent()` at a unit index.
    #[inline]
    pub fn angle_at(&self, index: u32) -> u32 {
        self.group.angle_at(&self.kappa, index)
    }

    /// Angles at every unit index, built blockwise along the mixed radix.
    pub fn angle_table(&self) -> Vec<u32> {
        let t = self.group.table();
        let n = self.group.exponent;
        let mut out = Vec::with_capacity(t.order());
        out.push(0u32);
        for ((&k, &d), &s) in self.kappa.iter().zip(t.orders()).zip(&self.group.scale) {
            let step = ((u64::from(k) * u64::from(s)) % u64::from(n)) as u32;
            let block = out.len();
            for j in 1..d {
                let shift = ((u64::from(step) * u64::from(j)) % u64::from(n)) as u32;
                for i in 0..block {
                    let a = out[i] + shift;
                    out.push(if a >= n { a - n } else { a });
                }
            }
        }
        out
    }

    pub fn evaluate(&self, a: &Poly) -> CharValue {
        match self.group.table.unit_index(a) {
            None => CharValue::Zero,
            Some(i) => CharValue::Root(RationalAngle::new(i64::from(self.angle_at(i)), self.group.exponent)),
        }
    }

    pub fn value(&self, a: &Poly) -> Complex64 {
        match self.group.table.unit_index(a) {
            None => Complex64::new(0.0, 0.0),
            Some(i) => self.group.root(self.angle_at(i)),
        }
    }

    pub fn conjugate(&self) -> DirichletCharacter {
        let kappa = self
            .kappa
            .iter()
            .zip(self.group.table.orders())
            .map(|(&k, &d)| (d - k) % d)
            .collect();
        DirichletCharacter {
            group: Arc::clone(&self.group),
            kappa,
            parity: self.parity,
            conductor: self.conductor.clone(),
        }
    }
}
