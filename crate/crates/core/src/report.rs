//! Text rendering of Betti tables.
//!
//! Layout: a header of homological degrees, a `total:` row, then one row per strand
//! d = j - i from 0 to the last nonzero strand. Labels are right-aligned in a column of
//! width 11; each entry column is right-aligned to its widest entry and separated by a
//! single space; zero entries print as `.`.

use std::collections::BTreeMap;

use crate::koszul::Bidegree;
use crate::resolution::GradedBetti;

const LABEL_WIDTH: usize = 11;

/// Table indexed by homological degree, from bigraded dimensions.
pub fn table_from_dims(dims: &BTreeMap<Bidegree, usize>) -> GradedBetti {
    let top = dims.keys().map(|b| b.0).max().unwrap_or(0);
    let mut t: GradedBetti = vec![BTreeMap::new(); top + 1];
    for (&(i, j), &c) in dims {
        if c > 0 {
            t[i].insert(j, c);
        }
    }
    t
}

pub fn render_betti_table(table: &GradedBetti) -> String {
    let ncols = table.len().max(1);
    let entry = |i: usize, d: usize| table.get(i).and_then(|row| row.get(&(i + d))).copied().unwrap_or(0);
    let max_strand = table
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().filter(|(_, c)| **c > 0).map(move |(j, _)| j - i))
        .max()
        .unwrap_or(0);
    let mut rows: Vec<(String, Vec<String>)> = Vec::new();
    rows.push((String::new(), (0..ncols).map(|i| i.to_string()).collect()));
    let totals: Vec<usize> = (0..ncols).map(|i| table.get(i).map_or(0, |r| r.values().sum())).collect();
    rows.push(("total:".into(), totals.iter().map(|t| t.to_string()).collect()));
    for d in 0..=max_strand {
        let cells = (0..ncols)
            .map(|i| match entry(i, d) {
                0 => ".".to_string(),
                c => c.to_string(),
            })
            .collect();
        rows.push((format!("{d}:"), cells));
    }
    let widths: Vec<usize> = (0..ncols).map(|c| rows.iter().map(|r| r.1[c].len()).max().unwrap()).collect();
    let mut out = String::new();
    for (label, cells) in rows {
        out.push_str(&format!("{label:>LABEL_WIDTH$}"));
        for (c, cell) in cells.iter().enumerate() {
            out.push_str(&format!(" {cell:>w$}", w = widths[c]));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_column_pair() {
        let t: GradedBetti = vec![BTreeMap::from([(0, 1)]), BTreeMap::from([(2, 1)])];
        assert_eq!(render_betti_table(&t), "            0 1\n     total: 1 1\n         0: 1 .\n         1: . 1\n");
    }
}
