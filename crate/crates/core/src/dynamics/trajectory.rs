use super::matrix::TransferMatrix;
use super::scalar::Scalar;
use std::fmt::Write as _;

/// `p,a_2,…,a_J,beta_12,…,beta_1J`, one line per snapshot.
pub fn trajectory_csv<T: Scalar>(snapshots: &[TransferMatrix<T>]) -> String {
    let dim = snapshots.first().map(|t| t.dim()).unwrap_or(1);
    let mut s = String::from("p");
    for j in 2..=dim {
        let _ = write!(s, ",a_{j}");
    }
    for j in 2..=dim {
        let _ = write!(s, ",beta_1{j}");
    }
    s.push('\n');
    for t in snapshots {
        let _ = write!(s, "{}", t.to);
        for j in 2..=dim {
            let _ = write!(s, ",{:.17e}", t.a(j).to_f64());
        }
        for j in 2..=dim {
            let _ = write!(s, ",{:.17e}", t.beta(1, j).to_f64());
        }
        s.push('\n');
    }
    s
}

/// Powers of ten strictly above `p0`, up to and including `p_end`, plus
/// `p_end` itself.
pub fn decade_checkpoints(p0: u64, p_end: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut c = 10u64;
    loop {
        if c > p0 && c <= p_end {
            out.push(c);
        }
        match c.checked_mul(10) {
            Some(n) if n <= p_end => c = n,
            _ => break,
        }
    }
    if out.last() != Some(&p_end) && p_end > p0 {
        out.push(p_end);
    }
    out
}
