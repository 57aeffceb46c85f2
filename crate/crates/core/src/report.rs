//! Size sweeps: constructs the flow-based extensions over a range of
//! instances and tabulates their inequality-row counts next to the exact
//! piece/union/dual row arithmetic.
//!
//! All counts are inequality-row counts of the constructed lifted systems
//! and therefore upper bounds on facet counts of minimal extensions; the
//! table never states a lower bound.

use crate::error::Result;
use crate::ext::{tcut_dominant_extension, tjoin_dominant_extension};
use crate::graph::EdgeSpace;

pub const COUNT_LABEL: &str = "inequality rows (upper bound on facet count)";

#[derive(Debug, Clone)]
pub struct SizeRow {
    pub n: usize,
    pub t_size: usize,
    pub num_edges: usize,
    pub pieces: usize,
    pub piece_rows: usize,
    /// Measured row count of the constructed T-join dominant extension.
    pub join_rows: usize,
    /// `C(|T|, |T|/2) * (3 |E| + 1)`, the union arithmetic.
    pub join_formula: usize,
    /// Measured row count of the constructed T-cut dominant extension, when
    /// the construction was run.
    pub cut_rows: Option<usize>,
    /// `join + 1 + |E|`, the dual-step arithmetic.
    pub cut_formula: usize,
}

fn binomial(n: usize, k: usize) -> usize {
    let mut r = 1usize;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Builds one sweep row. The join extension is always constructed; the cut
/// extension is constructed only when `build_cut` is set (the dual step's
/// feasibility solve over very large unions is beyond desk scale).
pub fn size_row(space: &EdgeSpace, build_cut: bool) -> Result<SizeRow> {
    let ne = space.num_edges();
    let t = space.terminals().len();
    let pieces = binomial(t, t / 2);
    let join = tjoin_dominant_extension(space)?;
    let join_formula = pieces * (3 * ne + 1);
    let cut_formula = join.size() + 1 + ne;
    let cut_rows = if build_cut {
        Some(tcut_dominant_extension(space)?.size())
    } else {
        None
    };
    Ok(SizeRow {
        n: space.n(),
        t_size: t,
        num_edges: ne,
        pieces,
        piece_rows: 3 * ne,
        join_rows: join.size(),
        join_formula,
        cut_rows,
        cut_formula,
    })
}

/// Sweep over `n_min..=n_max`: one row per even `n` with `T = V_n`, plus
/// one row per `n` with `T = {1, 2}`. Cut extensions are constructed for
/// the 2-terminal rows and for full-terminal rows with `n <= 6`.
pub fn size_sweep(n_min: usize, n_max: usize) -> Result<Vec<SizeRow>> {
    let mut rows = Vec::new();
    for n in n_min.max(2)..=n_max {
        if n % 2 == 0 {
            let space = EdgeSpace::odd_everything(n)?;
            rows.push(size_row(&space, n <= 6)?);
        }
        if n > 2 {
            let pair = EdgeSpace::new(n, [1, 2])?;
            rows.push(size_row(&pair, true)?);
        }
    }
    Ok(rows)
}

pub fn sweep_to_csv(rows: &[SizeRow]) -> String {
    let mut out = String::from(
        "n,t_size,num_edges,pieces,piece_rows,join_rows,join_formula,cut_rows,cut_formula,count_semantics\n",
    );
    for r in rows {
        let cut = r.cut_rows.map(|c| c.to_string()).unwrap_or_else(|| "-".to_string());
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.n,
            r.t_size,
            r.num_edges,
            r.pieces,
            r.piece_rows,
            r.join_rows,
            r.join_formula,
            cut,
            r.cut_formula,
            COUNT_LABEL
        ));
    }
    out
}

pub fn sweep_to_text(rows: &[SizeRow]) -> String {
    let mut out = format!("all counts are {COUNT_LABEL}\n");
    out.push_str(&format!(
        "{:>3} {:>4} {:>4} {:>7} {:>10} {:>10} {:>12} {:>9} {:>11}\n",
        "n", "|T|", "|E|", "pieces", "piece_rows", "join_rows", "join_formula", "cut_rows", "cut_formula"
    ));
    for r in rows {
        let cut = r.cut_rows.map(|c| c.to_string()).unwrap_or_else(|| "-".to_string());
        out.push_str(&format!(
            "{:>3} {:>4} {:>4} {:>7} {:>10} {:>10} {:>12} {:>9} {:>11}\n",
            r.n, r.t_size, r.num_edges, r.pieces, r.piece_rows, r.join_rows, r.join_formula, cut, r.cut_formula
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_row_matches_the_union_arithmetic() {
        let space = EdgeSpace::odd_everything(4).unwrap();
        let row = size_row(&space, true).unwrap();
        assert_eq!(row.pieces, 6);
        assert_eq!(row.piece_rows, 18);
        assert_eq!(row.join_rows, 114);
        assert_eq!(row.join_formula, 114);
        assert_eq!(row.cut_rows, Some(114 + 1 + 6));
        assert_eq!(row.cut_formula, 114 + 1 + 6);
    }

    #[test]
    fn sweep_labels_counts_as_upper_bounds() {
        let rows = size_sweep(2, 4).unwrap();
        assert!(!rows.is_empty());
        let csv = sweep_to_csv(&rows);
        let txt = sweep_to_text(&rows);
        for line in csv.lines().skip(1) {
            assert!(line.contains("upper bound on facet count"), "{line}");
        }
        assert!(txt.contains("upper bound on facet count"));
        assert!(!csv.to_lowercase().contains("lower bound"));
        // Empty sweep: empty table.
        assert!(size_sweep(3, 2).unwrap().is_empty());
    }

    #[test]
    fn pair_terminal_rows_track_the_dual_pipeline() {
        let rows = size_sweep(4, 5).unwrap();
        let pair_row = rows.iter().find(|r| r.n == 5 && r.t_size == 2).unwrap();
        // 2 pieces of 3|E| rows each, plus 2 multiplier bounds, dual +1,
        // nonnegativity +|E|.
        assert_eq!(pair_row.join_rows, 2 * (3 * 10 + 1));
        assert_eq!(pair_row.cut_rows, Some(2 * (3 * 10 + 1) + 1 + 10));
    }
}
