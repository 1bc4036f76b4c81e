use std::fmt::Write;

use anyhow::{anyhow, bail, Result};
use sl2orbit::orbit::{census, CensusRow};

pub const HEADER: &str = "n\tcircles\tmoebius\tcylinders\tdisks\tfixed";

/// Golden table shipped with the binary.
pub const SHIPPED_GOLDEN: &str = include_str!("../golden/census.tsv");

pub fn render(rows: &[CensusRow]) -> String {
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    for r in rows {
        writeln!(out, "{}\t{}\t{}\t{}\t{}\t{}", r.n, r.circles, r.moebius, r.cylinders, r.disks, r.fixed).unwrap();
    }
    out
}

pub fn parse(tsv: &str) -> Result<Vec<CensusRow>> {
    let mut lines = tsv.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some((_, h)) if h.trim() == HEADER => {}
        Some((i, h)) => bail!("line {}: unexpected header {h:?}", i + 1),
        None => bail!("empty golden file"),
    }
    lines
        .map(|(i, l)| {
            let v: Vec<usize> = l
                .split('\t')
                .map(|c| c.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|e| anyhow!("line {}: {e}", i + 1))?;
            let [n, circles, moebius, cylinders, disks, fixed] = v[..] else {
                bail!("line {}: expected 6 columns, found {}", i + 1, v.len());
            };
            Ok(CensusRow { n, circles, moebius, cylinders, disks, fixed })
        })
        .collect()
}

pub fn compute(n_max: usize) -> Vec<CensusRow> {
    census(n_max)
}

/// Rows that differ from the golden table, as readable lines.
pub fn drift(rows: &[CensusRow], golden: &[CensusRow]) -> Vec<String> {
    rows.iter()
        .filter_map(|r| match golden.iter().find(|g| g.n == r.n) {
            Some(g) if g == r => None,
            Some(g) => Some(format!("n={}: computed {r:?}, golden {g:?}", r.n)),
            None => Some(format!("n={}: not in golden file", r.n)),
        })
        .collect()
}
