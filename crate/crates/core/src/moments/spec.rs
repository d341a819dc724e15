use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::charmod::{CharFilter, Parity};
use crate::error::{Error, Result};
use crate::fieldpoly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Primitive,
    NonprincipalEven,
    NonprincipalOdd,
}

impl Family {
    pub fn filter(self) -> CharFilter {
        match self {
            Family::Primitive => CharFilter::primitive(),
            Family::NonprincipalEven => CharFilter::nonprincipal().and_parity(Parity::Even),
            Family::NonprincipalOdd => CharFilter::nonprincipal().and_parity(Parity::Odd),
        }
    }

    pub fn parity(self) -> Option<Parity> {
        match self {
            Family::Primitive => None,
            Family::NonprincipalEven => Some(Parity::Even),
            Family::NonprincipalOdd => Some(Parity::Odd),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Primitive => "primitive",
            Family::NonprincipalEven => "nonprincipal-even",
            Family::NonprincipalOdd => "nonprincipal-odd",
        })
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "primitive" => Ok(Family::Primitive),
            "nonprincipal-even" | "even" => Ok(Family::NonprincipalEven),
            "nonprincipal-odd" | "odd" => Ok(Family::NonprincipalOdd),
            _ => Err(Error::InvalidSpec(format!("unknown family {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// divide by the family size (φ*(R) for the primitive family)
    Mean,
    /// multiply by |R|^{1/2}/φ^±(R); parity families only
    ParityScaled,
    Raw,
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::Mean => "mean",
            Normalization::ParityScaled => "parity-scaled",
            Normalization::Raw => "raw",
        })
    }
}

impl FromStr for Normalization {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean" => Ok(Normalization::Mean),
            "parity-scaled" => Ok(Normalization::ParityScaled),
            "raw" => Ok(Normalization::Raw),
            _ => Err(Error::InvalidSpec(format!("unknown normalization {s:?}"))),
        }
    }
}

/// How the observed value of a moment was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// exact |L(1/2,χ)|² summed over the family
    Direct,
    /// the AFE main sum in place of |L(1/2,χ)|²
    DirectAfe,
    /// Möbius/divisor decomposition after orthogonality
    Decomposition,
    /// exact moment by orthogonality of the L-coefficients
    Orthogonality,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Direct => "direct",
            Route::DirectAfe => "direct-afe",
            Route::Decomposition => "decomposition",
            Route::Orthogonality => "orthogonality",
        })
    }
}

/// One twisted-moment cell: modulus R, twists H and K, a family and a normalization.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSpec {
    pub r: Poly,
    pub h: Poly,
    pub k: Poly,
    pub family: Family,
    pub normalization: Normalization,
}

impl MomentSpec {
    pub fn new(r: Poly, h: Poly) -> Self {
        let k = Poly::one(r.field());
        Self {
            r,
            h,
            k,
            family: Family::Primitive,
            normalization: Normalization::Mean,
        }
    }

    pub fn two_twist(r: Poly, h: Poly, k: Poly) -> Self {
        Self { k, ..Self::new(r, h) }
    }

    pub fn with_family(mut self, family: Family) -> Self {
        self.family = family;
        self
    }

    pub fn with_normalization(mut self, n: Normalization) -> Self {
        self.normalization = n;
        self
    }

    /// Hard preconditions: monic inputs over one field, deg R ≥ 1, gcd(HK, R) = 1.
    pub fn validate(&self) -> Result<()> {
        let q = self.r.field().q();
        for p in [&self.h, &self.k] {
            if p.field().q() != q {
                return Err(Error::FieldMismatch(q, p.field().q()));
            }
        }
        for p in [&self.r, &self.h, &self.k] {
            if !p.is_monic() {
                return Err(Error::NotMonic(p.to_string()));
            }
        }
        if self.r.deg() == 0 {
            return Err(Error::InvalidSpec("modulus must have degree ≥ 1".into()));
        }
        if !(&self.h * &self.k).is_coprime(&self.r)? {
            return Err(Error::NotCoprime);
        }
        if self.normalization == Normalization::ParityScaled && self.family == Family::Primitive {
            return Err(Error::InvalidSpec(
                "parity-scaled normalization needs a parity family".into(),
            ));
        }
        Ok(())
    }

    /// Soft checks: degree windows outside which the main-term prediction
    /// is not claimed. Reported, never enforced.
    pub fn warnings(&self) -> Vec<String> {
        let (dr, dh, dk) = (self.r.deg(), self.h.deg(), self.k.deg());
        let mut out = Vec::new();
        if self.k.is_one() && dh >= dr {
            out.push(format!("one-twist window needs deg H < deg R (got {dh} ≥ {dr})"));
        }
        if !self.k.is_one() && dh + dk >= dr {
            out.push(format!(
                "two-twist window needs deg H + deg K < deg R (got {} ≥ {dr})",
                dh + dk
            ));
        }
        out
    }
}

/// One row of a moment table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentReport {
    pub q: u32,
    #[serde(rename = "R")]
    pub r: String,
    #[serde(rename = "H")]
    pub h: String,
    #[serde(rename = "K")]
    pub k: String,
    pub family: Family,
    pub normalization: Normalization,
    pub observed: f64,
    pub imag_part: f64,
    pub predicted: f64,
    pub residual: f64,
    pub residual_scaled: f64,
    pub route: Route,
    pub phi_star: u64,
    pub omega: usize,
    pub seconds: f64,
}

impl MomentReport {
    pub const CSV_HEADER: &'static str = "q,R,H,K,family,normalization,observed,imag_part,predicted,residual,residual_scaled,route,phi_star,omega,seconds";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:.12e},{:.3e},{:.12e},{:.12e},{:.12e},{},{},{},{:.6}",
            self.q,
            self.r,
            self.h,
            self.k,
            self.family,
            self.normalization,
            self.observed,
            self.imag_part,
            self.predicted,
            self.residual,
            self.residual_scaled,
            self.route,
            self.phi_star,
            self.omega,
            self.seconds
        )
    }
}

/// |HK|^{1/2}·(φ(R)/|R|)·(deg H + deg K + deg R); K = 1 gives the one-twist form.
pub fn predicted_main_term(spec: &MomentSpec) -> Result<f64> {
    let phi = crate::arithfns::phi(&spec.r)? as f64;
    let hk = spec.h.norm_f64() * spec.k.norm_f64();
    let degs = (spec.h.deg() + spec.k.deg() + spec.r.deg()) as f64;
    Ok(hk.sqrt() * phi / spec.r.norm_f64() * degs)
}
