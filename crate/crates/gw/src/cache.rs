//! Line-based text format for [`MemoStore`] contents.
//!
//! ```text
//! # gwcache v1
//! C n=3 d=1 A=2,2,2,2 v=2/1
//! O n=3 b=1 k=2 J= v=2/1
//! ```
//!
//! Records are written in byte order so that saving is canonical; lines
//! starting with `#` after the header are comments.

use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use gw_core::memo::VERSION_TAG;
use gw_core::{ClosedKey, ExactRational, GwError, MemoStore, OpenKey};
use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("line 1: missing `# {VERSION_TAG}` header")]
    MissingHeader,
    #[error("line 1: unsupported cache version `{0}` (expected `{VERSION_TAG}`)")]
    UnknownVersion(String),
    #[error("line {line}: {reason}: `{text}`")]
    Malformed {
        line: usize,
        text: String,
        reason: String,
    },
    #[error("line {line}: conflicting value for {key}: already {stored}, now {new}")]
    Conflict {
        line: usize,
        key: String,
        stored: String,
        new: String,
    },
}

/// The canonical document for `store`.
pub fn to_document(store: &MemoStore) -> String {
    let mut records: Vec<String> = store
        .closed_entries()
        .map(|(key, v)| {
            format!(
                "C n={} d={} A={} v={}",
                key.n,
                key.d,
                join(&key.insertions),
                fraction(v)
            )
        })
        .chain(store.open_entries().map(|(key, v)| {
            format!(
                "O n={} b={} k={} J={} v={}",
                key.n,
                key.beta,
                key.k,
                join(&key.interior),
                fraction(v)
            )
        }))
        .collect();
    records.sort_unstable();
    let mut doc = format!("# {VERSION_TAG}\n");
    for r in records {
        doc.push_str(&r);
        doc.push('\n');
    }
    doc
}

pub fn save(store: &MemoStore, mut sink: impl Write) -> io::Result<()> {
    sink.write_all(to_document(store).as_bytes())?;
    sink.flush()
}

/// Writes through a sibling temporary file so a crash never leaves a
/// truncated cache behind.
pub fn save_file(store: &MemoStore, path: &Path) -> io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    fs::write(&tmp, to_document(store))?;
    fs::rename(&tmp, path)
}

pub fn load(mut source: impl Read) -> Result<MemoStore, CacheError> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    parse(&text)
}

pub fn load_file(path: &Path) -> Result<MemoStore, CacheError> {
    load(fs::File::open(path)?)
}

pub fn parse(text: &str) -> Result<MemoStore, CacheError> {
    let mut lines = text.lines();
    let header = lines.next().ok_or(CacheError::MissingHeader)?;
    let version = header
        .strip_prefix("# gwcache ")
        .ok_or(CacheError::MissingHeader)?;
    if format!("gwcache {version}") != VERSION_TAG {
        return Err(CacheError::UnknownVersion(format!("gwcache {version}")));
    }
    let mut store = MemoStore::new();
    for (idx, text) in lines.enumerate() {
        let line = idx + 2;
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let malformed = |reason: &str| CacheError::Malformed {
            line,
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let fields: Vec<&str> = text.split(' ').collect();
        let result = match fields.as_slice() {
            ["C", n, d, a, v] => {
                let key = ClosedKey {
                    n: field(n, "n").ok_or_else(|| malformed("bad n"))?,
                    d: field(d, "d").ok_or_else(|| malformed("bad d"))?,
                    insertions: list(a, "A").ok_or_else(|| malformed("bad A list"))?,
                };
                if !key.is_canonical() {
                    return Err(malformed("key is not canonical"));
                }
                store.insert(key, value(v).ok_or_else(|| malformed("bad value"))?)
            }
            ["O", n, b, k, j, v] => {
                let key = OpenKey {
                    n: field(n, "n").ok_or_else(|| malformed("bad n"))?,
                    beta: field(b, "b").ok_or_else(|| malformed("bad b"))?,
                    k: field(k, "k").ok_or_else(|| malformed("bad k"))?,
                    interior: list(j, "J").ok_or_else(|| malformed("bad J list"))?,
                };
                if !key.is_canonical() {
                    return Err(malformed("key is not canonical"));
                }
                store.insert(key, value(v).ok_or_else(|| malformed("bad value"))?)
            }
            _ => return Err(malformed("unrecognized record")),
        };
        match result {
            Ok(()) => {}
            Err(GwError::Conflict { key, stored, new }) => {
                return Err(CacheError::Conflict {
                    line,
                    key,
                    stored,
                    new,
                })
            }
            Err(e) => return Err(malformed(&e.to_string())),
        }
    }
    Ok(store)
}

fn join(values: &[u32]) -> String {
    values
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn fraction(v: &ExactRational) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

fn field(token: &str, name: &str) -> Option<u32> {
    let digits = token.strip_prefix(name)?.strip_prefix('=')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

fn list(token: &str, name: &str) -> Option<Vec<u32>> {
    let body = token.strip_prefix(name)?.strip_prefix('=')?;
    if body.is_empty() {
        return Some(Vec::new());
    }
    body.split(',')
        .map(|s| {
            if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                None
            } else {
                s.parse().ok()
            }
        })
        .collect()
}

/// `num/den` in lowest terms with positive denominator.
fn value(token: &str) -> Option<ExactRational> {
    let (num, den) = token.strip_prefix("v=")?.split_once('/')?;
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den <= BigInt::zero() {
        return None;
    }
    let v = ExactRational::new(num.clone(), den.clone());
    (v.numer() == &num && v.denom() == &den).then_some(v)
}
