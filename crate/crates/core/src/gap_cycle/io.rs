//! Cycle files: a text header `GAPCYCLE v1 p=<prime> len=<n>` followed by a
//! newline and `n` little-endian 16-bit gaps. Small cycles can also be written
//! as comma-separated text.

use super::GapCycle;
use crate::{Error, Result};
use std::io::{BufRead, Write};

pub fn write_cycle<W: Write>(cycle: &GapCycle, mut w: W) -> Result<()> {
    writeln!(
        w,
        "GAPCYCLE v1 p={} len={}",
        cycle.stage_prime(),
        cycle.len()
    )?;
    let mut buf = Vec::with_capacity(cycle.len() * 2);
    for g in cycle.gaps() {
        buf.extend_from_slice(&g.to_le_bytes());
    }
    w.write_all(&buf)?;
    w.flush()?;
    Ok(())
}

fn header_field<'a>(tok: Option<&'a str>, key: &str) -> Result<&'a str> {
    tok.and_then(|t| t.strip_prefix(key))
        .ok_or_else(|| Error::Format(format!("cycle header: missing `{key}`")))
}

pub fn read_cycle<R: BufRead>(mut r: R) -> Result<GapCycle> {
    let mut header = String::new();
    r.read_line(&mut header)?;
    let mut toks = header.trim_end().split(' ');
    if toks.next() != Some("GAPCYCLE") || toks.next() != Some("v1") {
        return Err(Error::Format("not a GAPCYCLE v1 file".into()));
    }
    let p: u64 = header_field(toks.next(), "p=")?
        .parse()
        .map_err(|e| Error::Format(format!("cycle header p: {e}")))?;
    let len: usize = header_field(toks.next(), "len=")?
        .parse()
        .map_err(|e| Error::Format(format!("cycle header len: {e}")))?;
    let mut bytes = Vec::with_capacity(len * 2);
    r.read_to_end(&mut bytes)?;
    if bytes.len() != len * 2 {
        return Err(Error::Format(format!(
            "cycle body holds {} bytes, header promises {}",
            bytes.len(),
            len * 2
        )));
    }
    let gaps = bytes
        .chunks_exact(2)
        .map(|b| u16::from_le_bytes([b[0], b[1]]))
        .collect();
    GapCycle::from_gaps(p, gaps)
}

pub fn write_cycle_text<W: Write>(cycle: &GapCycle, mut w: W) -> Result<()> {
    writeln!(w, "{}", cycle.to_text())?;
    Ok(())
}

/// Parses comma-separated gaps for the stage `p`.
pub fn read_cycle_text(p: u64, text: &str) -> Result<GapCycle> {
    let gaps = text
        .trim()
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u16>()
                .map_err(|e| Error::Format(format!("gap `{t}`: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    GapCycle::from_gaps(p, gaps)
}
