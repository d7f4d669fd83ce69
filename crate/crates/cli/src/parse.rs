//! Flag value parsers shared by the subcommands.

use std::str::FromStr;

/// Integers written plainly, with `_` separators, or as `<m>e<k>` (`1e9`).
pub fn int(s: &str) -> Result<u64, String> {
    let s = s.replace('_', "");
    if let Some((m, e)) = s.split_once(['e', 'E']) {
        let m: u64 = m.parse().map_err(|e| format!("`{s}`: {e}"))?;
        let e: u32 = e.parse().map_err(|e| format!("`{s}`: {e}"))?;
        return 10u64
            .checked_pow(e)
            .and_then(|p| p.checked_mul(m))
            .ok_or_else(|| format!("`{s}` overflows 64 bits"));
    }
    u64::from_str(&s).map_err(|e| format!("`{s}`: {e}"))
}

/// A comma-separated list whose items are integers or `a..b` ranges of even
/// gaps inclusive.
pub fn gap_list(s: &str) -> Result<Vec<u32>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let a = int(a)? as u32;
            let b = int(b.trim_start_matches('='))? as u32;
            if a > b {
                return Err(format!("empty gap range `{part}`"));
            }
            out.extend((a..=b).filter(|g| g % 2 == 0));
        } else {
            out.push(int(part)? as u32);
        }
    }
    if out.is_empty() {
        return Err("no gaps given".into());
    }
    if let Some(bad) = out.iter().find(|&&g| g < 2 || g % 2 != 0) {
        return Err(format!("gap {bad} is not an even number >= 2"));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

pub fn int_list(s: &str) -> Result<Vec<u64>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(int)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ints() {
        assert_eq!(int("1e9"), Ok(1_000_000_000));
        assert_eq!(int("45053"), Ok(45053));
        assert_eq!(int("999_999_999_989"), Ok(999_999_999_989));
        assert!(int("1e30").is_err());
        assert!(int("x").is_err());
    }

    #[test]
    fn gaps() {
        assert_eq!(gap_list("2..8"), Ok(vec![2, 4, 6, 8]));
        assert_eq!(gap_list("30"), Ok(vec![30]));
        assert_eq!(gap_list("6,2,6"), Ok(vec![2, 6]));
        assert!(gap_list("3").is_err());
        assert!(gap_list("").is_err());
    }
}
