//! Line-oriented text format for curve records, sealed with a SHA-256 line.

use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use sha2::{Digest, Sha256};

use super::CurveRecord;
use crate::error::{Error, Result};
use crate::exactalg::Cubic;

pub fn render_record(rec: &CurveRecord) -> String {
    let c = rec.cubic;
    let mut s = format!(
        "GAMMA0PLUS v1 N={} A={} B={} C={} D={} E={} ORDER={}\n",
        rec.level, c.a, c.b, c.c, c.d, c.e, rec.order
    );
    s.push_str("X\n");
    for v in &rec.x {
        writeln!(s, "{v}").unwrap();
    }
    s.push_str("Y\n");
    for v in &rec.y {
        writeln!(s, "{v}").unwrap();
    }
    let digest = hex::encode(Sha256::digest(s.as_bytes()));
    writeln!(s, "SHA256={digest}").unwrap();
    s
}

pub fn parse_record(text: &str) -> Result<CurveRecord> {
    let bad = |m: &str| Error::Malformed(m.to_string());
    let cut = text.rfind("SHA256=").ok_or_else(|| bad("missing checksum line"))?;
    let (body, tail) = text.split_at(cut);
    let want = tail["SHA256=".len()..].trim();
    if hex::encode(Sha256::digest(body.as_bytes())) != want {
        return Err(Error::Checksum);
    }
    let mut lines = body.lines();
    let header = lines.next().ok_or_else(|| bad("empty file"))?;
    let mut fields = header.split_whitespace();
    if fields.next() != Some("GAMMA0PLUS") || fields.next() != Some("v1") {
        return Err(bad("bad header"));
    }
    let mut vals = [0i64; 7];
    for (i, key) in ["N", "A", "B", "C", "D", "E", "ORDER"].iter().enumerate() {
        let f = fields.next().ok_or_else(|| bad("short header"))?;
        let v = f
            .strip_prefix(key)
            .and_then(|r| r.strip_prefix('='))
            .ok_or_else(|| bad(&format!("expected {key}= in header")))?;
        vals[i] = v.parse().map_err(|_| bad(&format!("bad value for {key}")))?;
    }
    let [n, a, b, c, d, e, order] = vals;
    if n <= 0 || order < 0 {
        return Err(bad("bad level or order"));
    }
    let order = order as usize;
    if lines.next() != Some("X") {
        return Err(bad("missing X section"));
    }
    let mut x = Vec::with_capacity(order + 3);
    let mut y = Vec::with_capacity(order + 4);
    let mut in_y = false;
    for line in lines {
        if line == "Y" {
            if in_y {
                return Err(bad("duplicate Y section"));
            }
            in_y = true;
            continue;
        }
        let v: BigInt = line.parse().map_err(|_| bad(&format!("bad integer {line:?}")))?;
        if in_y {
            y.push(v);
        } else {
            x.push(v);
        }
    }
    if x.len() != order + 3 || y.len() != order + 4 {
        return Err(bad("coefficient count does not match ORDER"));
    }
    CurveRecord::new(n as u32, Cubic::new(a, b, c, d, e), x, y)
}

pub fn save_record(path: &Path, rec: &CurveRecord) -> Result<()> {
    std::fs::write(path, render_record(rec))?;
    Ok(())
}

pub fn load_record(path: &Path) -> Result<CurveRecord> {
    parse_record(&std::fs::read_to_string(path)?)
}
