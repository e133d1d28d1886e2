//! Branching-table rendering: aligned text matching the published row
//! layouts, plus CSV/JSON forms.

use pairalg::error::Result;
use pairalg::irreps::{branch_pair_to_levels, branch_u_to_pair, SeniorityLabels, Statistics, SystemSpec};

/// `(v1,v2)` list for one `(v, n_v)` partition row, e.g. `"(2,0), (1,1), (0,2)"`.
pub fn partition_list(rows: &[SeniorityLabels]) -> String {
    rows.iter()
        .map(|l| format!("({},{})", l.v1, l.v2))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Rows of the generic partition table: `(v, n_v, list)` for `v <= vmax`,
/// unconstrained bosonic branching.
pub fn partition_table_rows(vmax: u32) -> Result<Vec<(u32, u32, String)>> {
    // Large generic levels so no per-level caps bite.
    let sys = SystemSpec::two_level(Statistics::Boson, 2 * vmax + 1, 2 * vmax + 1, vmax)?;
    let mut out = Vec::new();
    for v in 0..=vmax {
        let rows = branch_pair_to_levels(v, &sys)?;
        for nv in 0..=(v / 2) {
            let group: Vec<SeniorityLabels> =
                rows.iter().copied().filter(|l| l.nv == nv).collect();
            out.push((v, nv, partition_list(&group)));
        }
    }
    Ok(out)
}

/// Rows of the fixed-N seniority table: `(v, constraint slack, flattened
/// list)`; the slack column is shown only where the fermionic constraint
/// actually excludes partitions (equal degeneracies, `v > n12/2`).
pub fn seniority_table_rows(sys: &SystemSpec) -> Result<Vec<(u32, Option<u32>, String)>> {
    let mut out = Vec::new();
    let (n1, n2) = (sys.levels[0].n(), sys.levels[1].n());
    for v in branch_u_to_pair(sys.n_particles, sys.stat, sys.n_total())? {
        let rows = branch_pair_to_levels(v, sys)?;
        let slack = (sys.stat == Statistics::Fermion && n1 == n2 && 2 * v > n1)
            .then(|| n1 - v);
        out.push((v, slack, partition_list(&rows)));
    }
    Ok(out)
}

/// Rows of the all-N table for small systems: `(N, v, flattened list)`.
pub fn per_n_table_rows(sys: &SystemSpec) -> Result<Vec<(u32, u32, String)>> {
    let mut out = Vec::new();
    for n in 0..=sys.n_total() {
        let sys_n = SystemSpec { n_particles: n, ..sys.clone() };
        for v in branch_u_to_pair(n, sys.stat, sys.n_total())? {
            let rows = branch_pair_to_levels(v, &sys_n)?;
            out.push((n, v, partition_list(&rows)));
        }
    }
    Ok(out)
}

fn render_three_column(
    header: (&str, &str, &str),
    rows: &[(String, String, String)],
) -> String {
    let w0 = rows.iter().map(|r| r.0.len()).chain([header.0.len()]).max().unwrap_or(1);
    let w1 = rows.iter().map(|r| r.1.len()).chain([header.1.len()]).max().unwrap_or(1);
    let mut out = String::new();
    out.push_str(&format!("{:>w0$}  {:>w1$}  {}\n", header.0, header.1, header.2));
    for (c0, c1, c2) in rows {
        out.push_str(&format!("{c0:>w0$}  {c1:>w1$}  {c2}\n"));
    }
    out
}

/// Aligned-text partition table (repeated `v` suppressed on continuation
/// rows, as in the published layout).
pub fn render_partition_table(vmax: u32) -> Result<String> {
    let rows = partition_table_rows(vmax)?;
    let mut text_rows = Vec::new();
    let mut last_v = None;
    for (v, nv, list) in rows {
        let v_cell = if last_v == Some(v) { String::new() } else { v.to_string() };
        last_v = Some(v);
        text_rows.push((v_cell, nv.to_string(), list));
    }
    Ok(render_three_column(("v", "n_v", "(v1,v2)"), &text_rows))
}

pub fn render_seniority_table(sys: &SystemSpec) -> Result<String> {
    let rows = seniority_table_rows(sys)?;
    let text_rows: Vec<(String, String, String)> = rows
        .into_iter()
        .map(|(v, slack, list)| {
            (v.to_string(), slack.map(|s| s.to_string()).unwrap_or_default(), list)
        })
        .collect();
    let n12 = sys.levels[0].n();
    let slack_header = format!("{n12}-v");
    Ok(render_three_column(("v", &slack_header, "(v1,v2)"), &text_rows))
}

pub fn render_per_n_table(sys: &SystemSpec) -> Result<String> {
    let rows = per_n_table_rows(sys)?;
    let mut text_rows = Vec::new();
    let mut last_n = None;
    for (n, v, list) in rows {
        let n_cell = if last_n == Some(n) { String::new() } else { n.to_string() };
        last_n = Some(n);
        text_rows.push((n_cell, v.to_string(), list));
    }
    Ok(render_three_column(("N", "v", "(v1,v2)"), &text_rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_rows_match_low_seniorities() {
        let rows = partition_table_rows(2).unwrap();
        assert_eq!(
            rows,
            vec![
                (0, 0, "(0,0)".to_string()),
                (1, 0, "(1,0), (0,1)".to_string()),
                (2, 0, "(2,0), (1,1), (0,2)".to_string()),
                (2, 1, "(0,0)".to_string()),
            ]
        );
    }

    #[test]
    fn continuation_rows_blank_the_v_column() {
        let table = render_partition_table(2).unwrap();
        let lines: Vec<&str> = table.lines().collect();
        assert!(lines[3].starts_with("2"));
        assert!(lines[4].trim_start().starts_with("1  (0,0)"));
    }
}
