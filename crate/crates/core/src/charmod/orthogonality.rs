use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::characters::{CharFilter, CharacterGroup};
use crate::arithfns::{mu, phi};
use crate::error::Result;
use crate::fieldpoly::{divisor_pairs, Poly};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct OrthogonalityCheck {
    pub lhs: Complex64,
    pub rhs: i64,
    pub residual: f64,
}

/// Σ over primitive χ mod R of χ(A)χ̄(B), set up once per modulus.
pub struct OrthogonalityContext {
    group: Arc<CharacterGroup>,
    /// angle tables of the primitive characters
    primitive: Vec<Vec<u32>>,
    /// (F, μ(E)φ(F)) over EF = R with μ(E) ≠ 0
    weights: Vec<(Poly, i64)>,
}

impl OrthogonalityContext {
    pub fn new(group: Arc<CharacterGroup>) -> Result<Self> {
        let primitive = group
            .filtered(CharFilter::primitive())?
            .iter()
            .map(|c| c.angle_table())
            .collect();
        let mut weights = Vec::new();
        for (e, f) in divisor_pairs(group.modulus())? {
            let m = mu(&e)?;
            if m != 0 {
                weights.push((f.clone(), i64::from(m) * phi(&f)? as i64));
            }
        }
        Ok(Self {
            group,
            primitive,
            weights,
        })
    }

    pub fn primitive_count(&self) -> usize {
        self.primitive.len()
    }

    pub fn lhs(&self, a: &Poly, b: &Poly) -> Complex64 {
        let t = self.group.table();
        match (t.unit_index(a), t.unit_index(b)) {
            (Some(i), Some(j)) => {
                let n = self.group.exponent();
                self.primitive
                    .iter()
                    .map(|ang| self.group.root((ang[i as usize] + n - ang[j as usize]) % n))
                    .sum()
            }
            _ => Complex64::new(0.0, 0.0),
        }
    }

    pub fn rhs(&self, a: &Poly, b: &Poly) -> Result<i64> {
        let t = self.group.table();
        if t.unit_index(a).is_none() || t.unit_index(b).is_none() {
            return Ok(0);
        }
        let diff = a.try_sub(b)?;
        let mut total = 0;
        for (f, w) in &self.weights {
            if f.divides(&diff)? {
                total += w;
            }
        }
        Ok(total)
    }

    pub fn check(&self, a: &Poly, b: &Poly) -> Result<OrthogonalityCheck> {
        let lhs = self.lhs(a, b);
        let rhs = self.rhs(a, b)?;
        Ok(OrthogonalityCheck {
            lhs,
            rhs,
            residual: (lhs - Complex64::new(rhs as f64, 0.0)).norm(),
        })
    }
}

pub fn orthogonality_check(r: &Poly, a: &Poly, b: &Poly) -> Result<OrthogonalityCheck> {
    OrthogonalityContext::new(CharacterGroup::new(r)?)?.check(a, b)
}
