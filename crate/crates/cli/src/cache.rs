//! Kazhdan–Lusztig tables persisted between runs, one file per system,
//! weights and horizon.

use std::path::{Path, PathBuf};

use hecke_cells::{Error, KLTable};
use serde::Serialize;

#[derive(Debug, Default, Serialize)]
pub struct CacheStats {
    pub file: Option<PathBuf>,
    pub columns_loaded: usize,
    pub kl_solves: usize,
    /// Why an existing file was discarded.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rebuilt: Option<String>,
}

pub fn cache_file(dir: &Path, table: &KLTable) -> PathBuf {
    let key: String = table
        .fingerprint()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    dir.join(format!("kl_{key}_h{}.jsonl", table.system().radius()))
}

/// Installs cached columns. A file that does not match the table or fails
/// to parse is ignored and rewritten by [`store`].
pub fn load(table: &KLTable, dir: Option<&Path>) -> CacheStats {
    let Some(dir) = dir else { return CacheStats::default() };
    let file = cache_file(dir, table);
    let mut stats = CacheStats { file: Some(file.clone()), ..CacheStats::default() };
    if file.exists() {
        match table.load(&file) {
            Ok(n) => stats.columns_loaded = n,
            Err(e @ (Error::FingerprintMismatch { .. } | Error::Parse(_))) => {
                eprintln!("warning: discarding cache {}: {e}", file.display());
                stats.rebuilt = Some(e.to_string());
            }
            Err(e) => eprintln!("warning: cannot read cache {}: {e}", file.display()),
        }
    }
    stats
}

pub fn store(table: &KLTable, stats: &mut CacheStats) -> Result<(), Error> {
    stats.kl_solves = table.solve_count();
    let Some(file) = &stats.file else { return Ok(()) };
    if stats.kl_solves > 0 || stats.rebuilt.is_some() || !file.exists() {
        std::fs::create_dir_all(file.parent().expect("cache file has a directory"))?;
        table.save(file)?;
    }
    Ok(())
}
