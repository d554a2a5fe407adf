//! On-disk cache of computed values in their canonical text form.
//!
//! One file per value, named by the SHA-256 of `(p, e, modulus, kind, params)`. A hit is
//! accepted only if the stored text parses back and prints to the same text.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::fq::FqField;

const MAGIC: &str = "carlitz-cache 1";

pub struct DiskCache {
    dir: PathBuf,
    field_key: String,
}

/// A stored entry as listed by `cache inspect`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub file: String,
    pub key: String,
    pub value: String,
}

impl DiskCache {
    pub fn open(dir: &Path, field: &FqField) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        let modulus: Vec<String> = field.modulus().iter().map(u32::to_string).collect();
        let field_key = format!("p={} e={} modulus={}", field.p(), field.e(), modulus.join(","));
        Ok(DiskCache { dir: dir.to_path_buf(), field_key })
    }

    fn locate(&self, kind: &str, params: &str) -> (PathBuf, String) {
        let key = format!("{} kind={kind} {params}", self.field_key);
        let digest = hex::encode(Sha256::digest(key.as_bytes()));
        (self.dir.join(format!("{digest}.txt")), key)
    }

    fn read(&self, path: &Path, key: &str) -> Option<String> {
        let text = fs::read_to_string(path).ok()?;
        let mut lines = text.lines();
        if lines.next()? != MAGIC || lines.next()?.strip_prefix("key: ")? != key {
            return None;
        }
        lines.next()?.strip_prefix("value: ").map(str::to_string)
    }

    /// Returns the cached value if it survives re-parsing, otherwise computes and stores it.
    pub fn get_or_compute<T>(
        &self,
        kind: &str,
        params: &str,
        parse: impl Fn(&str) -> Result<T>,
        render: impl Fn(&T) -> String,
        compute: impl FnOnce() -> Result<T>,
    ) -> Result<T> {
        let (path, key) = self.locate(kind, params);
        if let Some(text) = self.read(&path, &key) {
            if let Ok(v) = parse(&text) {
                if render(&v) == text {
                    return Ok(v);
                }
            }
        }
        let v = compute()?;
        // a failed write only costs a recomputation next time
        let _ = fs::write(&path, format!("{MAGIC}\nkey: {key}\nvalue: {}\n", render(&v)));
        Ok(v)
    }
}

/// Entries under `dir`, sorted by file name.
pub fn entries(dir: &Path) -> io::Result<Vec<Entry>> {
    let mut out = Vec::new();
    if !dir.exists() {
        return Ok(out);
    }
    for item in fs::read_dir(dir)? {
        let path = item?.path();
        if path.extension().and_then(|e| e.to_str()) != Some("txt") {
            continue;
        }
        let text = fs::read_to_string(&path)?;
        let mut lines = text.lines();
        if lines.next() != Some(MAGIC) {
            continue;
        }
        let key = lines.next().and_then(|l| l.strip_prefix("key: ")).unwrap_or_default().to_string();
        let value = lines.next().and_then(|l| l.strip_prefix("value: ")).unwrap_or_default().to_string();
        let file = path.file_name().unwrap_or_default().to_string_lossy().into_owned();
        out.push(Entry { file, key, value });
    }
    out.sort_by(|a, b| a.file.cmp(&b.file));
    Ok(out)
}

/// Removes every cache entry under `dir`; returns how many were removed.
pub fn clear(dir: &Path) -> io::Result<usize> {
    let list = entries(dir)?;
    for e in &list {
        fs::remove_file(dir.join(&e.file))?;
    }
    Ok(list.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::RatFunc;
    use crate::text::parse_ratfunc;

    #[test]
    fn hit_miss_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let f = FqField::prime(3).unwrap();
        let cache = DiskCache::open(dir.path(), &f).unwrap();
        let parse = |s: &str| parse_ratfunc(&f, s);
        let render = |r: &RatFunc| r.to_string();
        let value = parse_ratfunc(&f, "(T+1)/(T^2)").unwrap();

        let got = cache.get_or_compute("bc", "n=2", parse, render, || Ok(value.clone())).unwrap();
        assert_eq!(got, value);
        // a hit never calls compute
        let got = cache.get_or_compute("bc", "n=2", parse, render, || panic!("recomputed")).unwrap();
        assert_eq!(got, value);

        let list = entries(dir.path()).unwrap();
        assert_eq!(list.len(), 1);
        assert!(list[0].key.ends_with("kind=bc n=2"));

        // a non-canonical stored value is rejected and replaced
        let path = dir.path().join(&list[0].file);
        let text = fs::read_to_string(&path).unwrap().replace("(T+1)/(T^2)", "(2*T+2)/(2*T^2)");
        fs::write(&path, text).unwrap();
        let mut calls = 0;
        cache
            .get_or_compute("bc", "n=2", parse, render, || {
                calls += 1;
                Ok(value.clone())
            })
            .unwrap();
        assert_eq!(calls, 1);

        assert_eq!(clear(dir.path()).unwrap(), 1);
        assert!(entries(dir.path()).unwrap().is_empty());
    }
}
