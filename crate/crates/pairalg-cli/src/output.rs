//! Deterministic CSV/JSON emission.

use std::fs;
use std::io::Write;

use pairalg::spectra::SpectrumRecord;

/// 12 significant digits: below solver tolerance, above plotting needs.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        // Avoid "-0" wobble in output.
        return "0.00000000000e0".to_string();
    }
    format!("{x:.11e}")
}

pub fn write_out(path: Option<&str>, content: &str) -> std::io::Result<()> {
    match path {
        Some(p) => fs::write(p, content),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())
        }
    }
}

/// CSV for spectrum records: a `# pairalg v1 <config echo>` comment line,
/// the column header, then one row per record. The order parameter column is
/// blank except where computed.
pub fn spectrum_csv(config_echo: &serde_json::Value, records: &[SpectrumRecord]) -> String {
    let mut out = String::new();
    out.push_str(&format!("# pairalg v1 {config_echo}\n"));
    out.push_str("xi,v1,v2,idx,energy,order_param\n");
    for r in records {
        let op = r.order_param.map(sig12).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            sig12(r.xi),
            r.v1,
            r.v2,
            r.idx,
            sig12(r.energy),
            op
        ));
    }
    out
}

pub fn spectrum_json(records: &[SpectrumRecord]) -> String {
    let mut s = serde_json::to_string_pretty(records).expect("records serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig12(-1.16), "-1.16000000000e0");
        assert_eq!(sig12(0.0), "0.00000000000e0");
        assert_eq!(sig12(2600.0), "2.60000000000e3");
    }
}
