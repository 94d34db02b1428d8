//! Loaders for the appendix fixture files under `fixtures/appendix{A,B,C,D}/`.
//!
//! File names are `N<level>_m<m>.txt` (A-C) and `N<level>_dK<dk>.txt` (D). Each line is
//! `<TAG> <payload>` with the payload transcribed verbatim.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::exactalg::IntPoly;

/// `$SI_FIXTURE_DIR`, else the `fixtures/` directory of the source tree.
pub fn fixture_dir() -> PathBuf {
    std::env::var_os("SI_FIXTURE_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures"))
}

#[derive(Clone, Debug)]
pub struct PqEntry {
    pub level: u32,
    pub m: u32,
    pub p: IntPoly,
    pub q: IntPoly,
}

#[derive(Clone, Debug)]
pub struct GenPolyEntry {
    pub level: u32,
    pub m: u32,
    pub r: IntPoly,
}

#[derive(Clone, Debug)]
pub struct ValueEntry {
    pub level: u32,
    pub m: u32,
    /// Decimal strings exactly as printed.
    pub x: String,
    pub y: String,
}

#[derive(Clone, Debug)]
pub struct MinPolyEntry {
    pub level: u32,
    pub dk: i64,
    pub tau0: String,
    pub poly: IntPoly,
}

fn tagged(text: &str, tag: &str, path: &Path) -> Result<String> {
    text.lines()
        .find_map(|l| l.strip_prefix(tag).and_then(|r| r.strip_prefix(' ')))
        .map(|s| s.trim().to_string())
        .ok_or_else(|| Error::Parse(format!("{}: missing {tag} line", path.display())))
}

fn entries(sub: &str) -> Result<Vec<(PathBuf, u32, String)>> {
    let dir = fixture_dir().join(sub);
    let mut out = Vec::new();
    for ent in std::fs::read_dir(&dir)? {
        let path = ent?.path();
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_string();
        let Some((lv, rest)) = name.strip_prefix('N').and_then(|r| r.split_once('_')) else {
            continue;
        };
        let level: u32 = lv
            .parse()
            .map_err(|_| Error::Parse(format!("bad fixture name {name}")))?;
        out.push((path, level, rest.to_string()));
    }
    Ok(out)
}

fn m_of(rest: &str) -> Result<u32> {
    rest.strip_prefix('m')
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad fixture suffix {rest}")))
}

fn sorted<T>(mut v: Vec<(u32, i64, T)>) -> Vec<T> {
    v.sort_by_key(|(a, b, _)| (*a, *b));
    v.into_iter().map(|(_, _, t)| t).collect()
}

pub fn appendix_a() -> Result<Vec<PqEntry>> {
    let mut v = Vec::new();
    for (path, level, rest) in entries("appendixA")? {
        let m = m_of(&rest)?;
        let text = std::fs::read_to_string(&path)?;
        let p = IntPoly::parse(&tagged(&text, "P", &path)?)?;
        let q = IntPoly::parse(&tagged(&text, "Q", &path)?)?;
        v.push((level, m as i64, PqEntry { level, m, p, q }));
    }
    Ok(sorted(v))
}

pub fn appendix_b() -> Result<Vec<GenPolyEntry>> {
    let mut v = Vec::new();
    for (path, level, rest) in entries("appendixB")? {
        let m = m_of(&rest)?;
        let text = std::fs::read_to_string(&path)?;
        let r = IntPoly::parse(&tagged(&text, "R", &path)?)?;
        v.push((level, m as i64, GenPolyEntry { level, m, r }));
    }
    Ok(sorted(v))
}

pub fn appendix_c() -> Result<Vec<ValueEntry>> {
    let mut v = Vec::new();
    for (path, level, rest) in entries("appendixC")? {
        let m = m_of(&rest)?;
        let text = std::fs::read_to_string(&path)?;
        let x = tagged(&text, "X", &path)?;
        let y = tagged(&text, "Y", &path)?;
        v.push((level, m as i64, ValueEntry { level, m, x, y }));
    }
    Ok(sorted(v))
}

pub fn appendix_d() -> Result<Vec<MinPolyEntry>> {
    let mut v = Vec::new();
    for (path, level, rest) in entries("appendixD")? {
        let dk: i64 = rest
            .strip_prefix("dK")
            .and_then(|r| r.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad fixture suffix {rest}")))?;
        let text = std::fs::read_to_string(&path)?;
        let tau0 = tagged(&text, "TAU0", &path)?;
        let poly = IntPoly::parse(&tagged(&text, "M", &path)?)?;
        v.push((level, -dk, MinPolyEntry { level, dk, tau0, poly }));
    }
    Ok(sorted(v))
}

/// Number of digits after the decimal point in a printed value.
pub fn printed_decimals(s: &str) -> usize {
    s.split_once('.').map_or(0, |(_, f)| f.trim().len())
}
