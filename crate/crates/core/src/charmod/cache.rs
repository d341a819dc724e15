//! On-disk cache of unit-group tables.
//!
//! One JSON file per (q, R). A loaded record is only accepted after the
//! discrete-log table has been recomputed from its generators and found
//! identical, so a damaged or stale file costs a rebuild, never a wrong answer.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::ring::ResidueRing;
use super::unitgroup::{check_modulus, close, unit_group_with_budget, UnitGroupTable, NOT_A_UNIT};
use crate::error::{Error, Result};
use crate::fieldpoly::Poly;

pub const CACHE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Record {
    version: u32,
    q: u32,
    modulus: String,
    generators: Vec<String>,
    orders: Vec<u32>,
    /// unit index per residue rank, −1 for non-units
    dlog: Vec<i64>,
}

/// Where a table came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheOutcome {
    Hit,
    Built,
    /// a file existed but failed validation
    Rebuilt,
}

#[derive(Clone, Debug)]
pub struct UnitGroupCache {
    dir: PathBuf,
    budget: u64,
}

impl UnitGroupCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self {
            dir: dir.into(),
            budget: super::unitgroup::DEFAULT_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, r: &Poly) -> PathBuf {
        self.dir
            .join(format!("unitgroup-q{}-{}.json", r.field().q(), r.to_digits()))
    }

    /// Loads a validated table or builds (and stores) a fresh one.
    pub fn get(&self, r: &Poly) -> Result<(UnitGroupTable, CacheOutcome)> {
        check_modulus(r, self.budget)?;
        let path = self.path_for(r);
        let existed = path.exists();
        if existed {
            if let Some(t) = load(&path, r) {
                return Ok((t, CacheOutcome::Hit));
            }
        }
        let table = unit_group_with_budget(r, self.budget)?;
        self.store(&table)?;
        let outcome = if existed {
            CacheOutcome::Rebuilt
        } else {
            CacheOutcome::Built
        };
        Ok((table, outcome))
    }

    pub fn store(&self, table: &UnitGroupTable) -> Result<()> {
        fs::create_dir_all(&self.dir).map_err(|e| Error::Cache(format!("{}: {e}", self.dir.display())))?;
        let record = Record {
            version: CACHE_VERSION,
            q: table.field().q(),
            modulus: table.modulus().to_digits(),
            generators: table.generators().iter().map(Poly::to_digits).collect(),
            orders: table.orders.clone(),
            dlog: table
                .dlog
                .iter()
                .map(|&x| if x == NOT_A_UNIT { -1 } else { i64::from(x) })
                .collect(),
        };
        let io = |e: std::io::Error| Error::Cache(e.to_string());
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(io)?;
        serde_json::to_writer(&mut tmp, &record).map_err(|e| Error::Cache(e.to_string()))?;
        tmp.flush().map_err(io)?;
        tmp.persist(self.path_for(table.modulus()))
            .map_err(|e| Error::Cache(e.to_string()))?;
        Ok(())
    }

    /// Cache files currently present, sorted by name.
    pub fn entries(&self) -> Result<Vec<PathBuf>> {
        let read = match fs::read_dir(&self.dir) {
            Ok(r) => r,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(Error::Cache(e.to_string())),
        };
        let mut out: Vec<PathBuf> = read
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| {
                p.file_name()
                    .and_then(|n| n.to_str())
                    .is_some_and(|n| n.starts_with("unitgroup-") && n.ends_with(".json"))
            })
            .collect();
        out.sort();
        Ok(out)
    }

    /// Removes every cache file; returns how many were deleted.
    pub fn clear(&self) -> Result<usize> {
        let entries = self.entries()?;
        for p in &entries {
            fs::remove_file(p).map_err(|e| Error::Cache(format!("{}: {e}", p.display())))?;
        }
        Ok(entries.len())
    }
}

fn load(path: &Path, r: &Poly) -> Option<UnitGroupTable> {
    let bytes = fs::read(path).ok()?;
    let rec: Record = serde_json::from_slice(&bytes).ok()?;
    let field = r.field();
    if rec.version != CACHE_VERSION || rec.q != field.q() || rec.modulus != r.to_digits() {
        return None;
    }
    if rec.generators.len() != rec.orders.len() || rec.orders.contains(&0) {
        return None;
    }
    let ring = ResidueRing::new(r);
    if rec.dlog.len() != ring.size() as usize {
        return None;
    }
    let mut gens = Vec::with_capacity(rec.generators.len());
    for g in &rec.generators {
        let p = Poly::from_digits(field, g).ok()?;
        if p.degree().is_some_and(|d| d >= r.deg()) {
            return None;
        }
        gens.push(ring.reduce(&p));
    }
    // recomputing the closure is the full check: it proves the generators
    // are independent of the stated orders and reproduces every dlog entry
    let rebuilt = close(r.clone(), ring, gens, rec.orders).ok()?;
    if rebuilt.order() as u64 != crate::arithfns::phi(r).ok()? {
        return None;
    }
    let same =
        rec.dlog
            .iter()
            .zip(&rebuilt.dlog)
            .all(|(&a, &b)| if b == NOT_A_UNIT { a == -1 } else { a == i64::from(b) });
    same.then_some(rebuilt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldpoly::PrimeField;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = UnitGroupCache::new(dir.path());
        let f = PrimeField::new(3).unwrap();
        let r = Poly::new(f, [1, 0, 2, 1]);
        let (t, o) = cache.get(&r).unwrap();
        assert_eq!(o, CacheOutcome::Built);
        let (t2, o2) = cache.get(&r).unwrap();
        assert_eq!(o2, CacheOutcome::Hit);
        assert_eq!(t.dlog, t2.dlog);

        // swap two dlog entries: must be detected
        let path = cache.path_for(&r);
        let mut rec: Record = serde_json::from_slice(&fs::read(&path).unwrap()).unwrap();
        let units: Vec<usize> = (0..rec.dlog.len()).filter(|&i| rec.dlog[i] >= 0).collect();
        rec.dlog.swap(units[3], units[4]);
        fs::write(&path, serde_json::to_vec(&rec).unwrap()).unwrap();
        assert_eq!(cache.get(&r).unwrap().1, CacheOutcome::Rebuilt);

        fs::write(&path, b"{ not json").unwrap();
        assert_eq!(cache.get(&r).unwrap().1, CacheOutcome::Rebuilt);

        rec.version = 99;
        fs::write(&path, serde_json::to_vec(&rec).unwrap()).unwrap();
        assert_eq!(cache.get(&r).unwrap().1, CacheOutcome::Rebuilt);
        assert_eq!(cache.get(&r).unwrap().1, CacheOutcome::Hit);

        assert_eq!(cache.entries().unwrap().len(), 1);
        assert_eq!(cache.clear().unwrap(), 1);
        assert!(cache.entries().unwrap().is_empty());
    }
}
