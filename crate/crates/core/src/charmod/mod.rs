//! Unit groups of F_q[T]/R, Dirichlet characters, conductors and orthogonality.

mod cache;
mod characters;
mod orthogonality;
mod ring;
mod unitgroup;

pub use cache::{CacheOutcome, UnitGroupCache, CACHE_VERSION};
pub use characters::{CharFilter, CharValue, CharacterGroup, DirichletCharacter, Parity, RationalAngle};
pub use orthogonality::{orthogonality_check, OrthogonalityCheck, OrthogonalityContext};
pub(crate) use ring::ResidueRing;
pub use ring::MAX_RING_DEGREE;
pub use unitgroup::{unit_group, unit_group_with_budget, UnitGroupTable, DEFAULT_BUDGET, NOT_A_UNIT};
