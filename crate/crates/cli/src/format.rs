//! Fixed, byte-deterministic text output.

use serde::Serialize;

/// 17 significant digits in scientific notation.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV with a single header row and `\n` line endings.
pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn json<T: Serialize + ?Sized>(value: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_carry_seventeen_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(1.0), "1.0000000000000000e0");
        assert_eq!(num(-2.5e-300), "-2.5000000000000000e-300");
    }

    #[test]
    fn csv_layout() {
        let s = csv(&["k", "mu_k"], vec![vec!["0".into(), num(1.0)]]);
        assert_eq!(s, "k,mu_k\n0,1.0000000000000000e0\n");
    }
}
