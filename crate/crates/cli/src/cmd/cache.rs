use fqmoments::charmod::UnitGroupCache;

use crate::args::{CacheAction, Common};
use crate::Failure;

pub fn run(common: &Common, action: &CacheAction) -> Result<(), Failure> {
    let dir = common
        .cache_dir
        .as_ref()
        .ok_or_else(|| Failure::Usage("--cache-dir (or FQMOMENTS_CACHE_DIR) is required".into()))?;
    let cache = UnitGroupCache::new(dir);
    match action {
        CacheAction::Inspect => {
            let entries = cache.entries()?;
            let mut bytes = 0;
            for p in &entries {
                let len = std::fs::metadata(p).map(|m| m.len()).unwrap_or(0);
                bytes += len;
                println!("{len:>10}  {}", p.file_name().and_then(|n| n.to_str()).unwrap_or("?"));
            }
            println!("{} tables, {bytes} bytes in {}", entries.len(), dir.display());
        }
        CacheAction::Clear => {
            let n = cache.clear()?;
            println!("removed {n} tables from {}", dir.display());
        }
    }
    Ok(())
}
