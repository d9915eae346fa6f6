use super::table::{CoefficientTable, TableKind};
use crate::error::{Error, Result};
use std::fs;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

/// On-disk store of immutable tables, one file `<kind>-<N>.tsv` per table.
#[derive(Clone, Debug)]
pub struct TableCache {
    dir: PathBuf,
}

impl TableCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        TableCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path_for(&self, kind: TableKind, n: usize) -> PathBuf {
        self.dir.join(format!("{}-{n}.tsv", kind.name()))
    }

    /// Writes the table; an existing file for the same (kind, N) is replaced
    /// atomically.
    pub fn store(&self, table: &CoefficientTable) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(table.kind(), table.max_index());
        let tmp = path.with_extension("tsv.tmp");
        {
            let mut w = BufWriter::new(fs::File::create(&tmp)?);
            table.write_to(&mut w)?;
            w.flush()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    /// Largest cached N for the kind, if any.
    pub fn available(&self, kind: TableKind) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        let Ok(entries) = fs::read_dir(&self.dir) else {
            return Ok(out);
        };
        let prefix = format!("{}-", kind.name());
        for entry in entries {
            let name = entry?.file_name();
            let name = name.to_string_lossy();
            if let Some(rest) = name.strip_prefix(&prefix).and_then(|r| r.strip_suffix(".tsv")) {
                if let Ok(n) = rest.parse::<usize>() {
                    out.push(n);
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Loads the smallest cached table of this kind with N ≥ `min_n`,
    /// truncated to exactly `min_n` entries.
    pub fn load(&self, kind: TableKind, min_n: usize) -> Result<Option<CoefficientTable>> {
        let Some(&n) = self.available(kind)?.iter().find(|&&n| n >= min_n) else {
            return Ok(None);
        };
        let table = self.read_file(&self.path_for(kind, n))?;
        table.require_kind(kind)?;
        Ok(Some(if n == min_n { table } else { table.truncated(min_n)? }))
    }

    /// Loads a table or fails with a message naming the build command.
    pub fn require(&self, kind: TableKind, min_n: usize) -> Result<CoefficientTable> {
        self.load(kind, min_n)?.ok_or_else(|| {
            Error::Table(format!(
                "no cached {} table with N >= {min_n} in {}; run `vlab coeffs build --kind {} --n {min_n}` first",
                kind.name(),
                self.dir.display(),
                kind.name()
            ))
        })
    }

    pub fn read_file(&self, path: &Path) -> Result<CoefficientTable> {
        let f = fs::File::open(path)?;
        CoefficientTable::read_from(BufReader::new(f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn store_and_load() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TableCache::new(dir.path());
        assert!(cache.load(TableKind::DivisorD, 3).unwrap().is_none());
        let t = CoefficientTable::from_integers(TableKind::DivisorD, vec![1, 2, 2, 3]).unwrap();
        cache.store(&t).unwrap();
        let back = cache.load(TableKind::DivisorD, 3).unwrap().unwrap();
        assert_eq!(back.max_index(), 3);
        assert_eq!(back.int(3), Some(2));
        assert!(cache.require(TableKind::DivisorD, 10).is_err());
    }
}
