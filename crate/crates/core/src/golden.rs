//! Reference block tables and a cell-level diff against generated plans.
//!
//! A table lists one line per factor: the factor name, then one cell per
//! block separated by `|`. A cell holds the factor's level in each run of
//! the block as single digits; whitespace inside a cell is layout only.
//!
//! ```text
//! A1 | 00 11 | 00 11
//! B1 | 01 01 | 01 01
//! ```

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::constructions::{canonicalize, RecipeId};
use crate::error::{Error, Result};
use crate::plan::{Block, Factor, Level, Plan};

/// Block table for thm5.1 at h = 2.
pub const THM51_H2: &str = "\
A1 | 00  11 | 00  11 | 00  22 | 00  22
B1 | 01  01 | 01  01 | 02  02 | 02  02
C1 | 01  10 | 01  10 | 02 20  | 02  20
A2 | 00  11 | 11  00 | 00 22 | 22  00
B2 | 01  01 | 10  10 | 02  02 | 20 20
C2 | 01  10 | 10  01 | 02  20 | 20  02
";

/// Block table for thm5.3b.
pub const THM53B: &str = "\
A0 | 00  11 | 00  22 |  00  11 | 00  22 | 00  11 | 00  22
B0 | 01  01 | 02  02 | 01  01 | 02  02 | 01  01 | 02  02
C0 | 01  10 | 02  20 | 01  10 | 02  20 | 01  10 | 02  20
A1 | 00  11 | 00 22 | 11  22 | 11  00 | 22  00 | 22  11
B1 | 01  01 | 02 02 | 12 12  | 10  10 | 20  20 | 21 21
C1 | 01  10 | 02 20 | 12 21 | 10 01 | 20  02 | 21  12
~A1 | 00  11 | 22 00 | 11 22 | 00  11 | 22 00 | 11 22
~B1 | 01  01 | 20 20 | 12 12 | 01 01 | 20  20 | 12 12
~C1 | 01  10 | 20 02 | 12 21 | 01 10 | 20  02 | 12 21
";

/// Block table for thm6.1 at m = n = 4, transcribed verbatim, errata included.
pub const THM61_M4_N4: &str = "\
A1 | 00 00 1 | 00 00 1 |00 00 1 |00 00 1
B1 | 00 11 1 | 00 11 1 |00 11 1 |00 11 1
C1 | 01 01 1 | 01 01 1 |01 01 1 | 01 01 1
D1 | 01 10 1 | 01 10 1 |01 10 1 |01 10  1
A2 | 00 00 1 | 00 00 1 | 11 11 0 | 11 11 0
B2 | 00 11 1 | 00 11 1 | 11 00 0 | 11 00 0
C2 | 01 01 1 | 01 01 1 | 10 10 0 | 10 10 0
D2 | 01 10 1 | 01 10 1 | 10 01 0 |10 01 0
A3 | 00 00 1 | 11 11 0 |00 00 1 |11 11 0
B3 | 00 11 1 | 11 00 0 |00 11 1 |11 11 0
C3 | 01 01 1 | 10 10 0 |01 01 1 |10 10 0
D3 | 01 10 1 | 10 01 0 |01 10 1 |10  010
A4 | 00 00 1 | 11 11 0 |11 11 0 | 00 00 1
B4 | 00 11 1 | 11 00 0 |11 00 0 |  00 11 1
C4 | 01 01 1 | 10 10 0 |10 10 0| 01 01 1
D4 | 01 10 1 | 10 01 0|10  01 0|01  10 1
";

/// Block table for thm6.2.
pub const THM62: &str = "\
A1 | 00 12 | 00 21 | 00 12 | 00 21
B1 | 01 02 | 02 01 | 10 20 | 20 10
C1 | 01 20 | 02 10 | 02 10 |  01 20
A2 | 01 01| 02 02| 01 01 | 02 02
B2 | 01  10 | 02 20 |10  01| 20 02
C2 | 00 11 | 00 22 | 11 00 | 22 00
";

/// A parsed block table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub factors: Vec<String>,
    /// `cells[f][b]`: the digits of factor `f` in block `b`, one per run.
    pub cells: Vec<Vec<Vec<u32>>>,
    /// Symbol count: one more than the largest digit, at least 2.
    pub symbols: u32,
    /// Cells whose whitespace grouping departs from the table's usual one.
    pub layout_anomalies: Vec<LayoutAnomaly>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayoutAnomaly {
    pub factor: String,
    pub block: usize,
    pub text: String,
}

impl fmt::Display for LayoutAnomaly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "factor {}, block {}: malformed cell {:?}", self.factor, self.block + 1, self.text)
    }
}

fn grouping(cell: &str) -> Vec<usize> {
    cell.split_whitespace().map(str::len).collect()
}

/// Parses the `name | cell | ...` format; `#` starts a comment line.
pub fn parse_table(text: &str) -> Result<Table> {
    let mut factors = Vec::new();
    let mut cells = Vec::new();
    let mut raw: Vec<Vec<String>> = Vec::new();
    let mut max_digit = 1;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split('|');
        let name = parts.next().unwrap_or_default().trim();
        if name.is_empty() {
            return Err(Error::Parse(format!("line {}: missing factor name", lineno + 1)));
        }
        let mut row = Vec::new();
        let mut raw_row = Vec::new();
        for cell in parts {
            let mut digits = Vec::new();
            for ch in cell.chars().filter(|c| !c.is_whitespace()) {
                let d = ch
                    .to_digit(10)
                    .ok_or_else(|| Error::Parse(format!("line {}: unexpected {ch:?} in cell {cell:?}", lineno + 1)))?;
                max_digit = max_digit.max(d);
                digits.push(d);
            }
            row.push(digits);
            raw_row.push(String::from(cell.trim()));
        }
        factors.push(String::from(name));
        cells.push(row);
        raw.push(raw_row);
    }
    let Some(first) = cells.first() else {
        return Err(Error::Parse("table has no factor lines".into()));
    };
    let b = first.len();
    let k = first.first().map_or(0, Vec::len);
    if b == 0 || k == 0 {
        return Err(Error::Parse("table has no cells".into()));
    }
    for (f, row) in cells.iter().enumerate() {
        if row.len() != b {
            return Err(Error::Parse(format!("factor {} has {} cells, expected {b}", factors[f], row.len())));
        }
        if let Some(bad) = row.iter().position(|c| c.len() != k) {
            return Err(Error::Parse(format!(
                "factor {}, block {}: {} runs, expected {k}",
                factors[f],
                bad + 1,
                row[bad].len()
            )));
        }
    }
    let mut counts: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for cell in raw.iter().flatten() {
        *counts.entry(grouping(cell)).or_default() += 1;
    }
    let usual = counts.iter().max_by_key(|(_, &n)| n).map(|(g, _)| g.clone()).unwrap_or_default();
    let mut layout_anomalies = Vec::new();
    for (f, row) in raw.iter().enumerate() {
        for (block, cell) in row.iter().enumerate() {
            if grouping(cell) != usual {
                layout_anomalies.push(LayoutAnomaly { factor: factors[f].clone(), block, text: cell.clone() });
            }
        }
    }
    Ok(Table { factors, cells, symbols: max_digit + 1, layout_anomalies })
}

impl Table {
    pub fn num_blocks(&self) -> usize {
        self.cells[0].len()
    }

    pub fn block_size(&self) -> usize {
        self.cells[0][0].len()
    }

    /// The plan the table describes, every factor cyclic over the table's
    /// symbols.
    pub fn to_plan(&self) -> Result<Plan> {
        let factors = self.factors.iter().map(|n| Factor::cyclic(n.clone(), self.symbols, false)).collect();
        let blocks: Vec<Block> = (0..self.num_blocks())
            .map(|b| {
                (0..self.block_size())
                    .map(|r| self.cells.iter().map(|row| Level::Finite(row[b][r])).collect())
                    .collect()
            })
            .collect();
        Plan::new(factors, blocks)
    }
}

/// The transcribed table for a recipe's default parameters, if one exists.
pub fn table(id: RecipeId) -> Option<Table> {
    let text = match id {
        RecipeId::Thm51 => THM51_H2,
        RecipeId::Thm53b => THM53B,
        RecipeId::Thm61 => THM61_M4_N4,
        RecipeId::Thm62 => THM62,
        _ => return None,
    };
    Some(parse_table(text).expect("transcribed tables parse"))
}

/// One cell where the table and the generated plan disagree. Positions are
/// the table's (1-based in the display).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellDiff {
    pub block: usize,
    pub run: usize,
    pub factor: String,
    pub table: Level,
    pub generated: Level,
}

impl fmt::Display for CellDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "block {}, run {}, factor {}: table has {}, generated has {}",
            self.block + 1,
            self.run + 1,
            self.factor,
            self.table,
            self.generated
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ErrataReport {
    /// Shape disagreements that prevent a cell comparison.
    pub shape: Vec<String>,
    pub cells: Vec<CellDiff>,
    pub layout: Vec<LayoutAnomaly>,
    /// Canonical forms are identical.
    pub canonical_match: bool,
}

impl ErrataReport {
    /// No content differences (layout anomalies aside).
    pub fn is_clean(&self) -> bool {
        self.shape.is_empty() && self.cells.is_empty()
    }
}

impl fmt::Display for ErrataReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_clean() && self.layout.is_empty() {
            return f.write_str("table matches the generated plan");
        }
        for s in &self.shape {
            writeln!(f, "shape: {s}")?;
        }
        for c in &self.cells {
            writeln!(f, "cell: {c}")?;
        }
        for l in &self.layout {
            writeln!(f, "layout: {l}")?;
        }
        Ok(())
    }
}

fn run_distance(a: &[Level], b: &[Level]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Greedy run pairing: each table run takes the closest unused generated
/// run. Returns the pairing and its total distance.
fn match_runs(table: &Block, generated: &Block) -> (Vec<usize>, usize) {
    let mut used = alloc::vec![false; generated.len()];
    let mut pairing = Vec::with_capacity(table.len());
    let mut total = 0;
    for run in table {
        let (best, dist) = (0..generated.len())
            .filter(|&g| !used[g])
            .map(|g| (g, run_distance(run, &generated[g])))
            .min_by_key(|&(g, d)| (d, g))
            .expect("equal block sizes");
        used[best] = true;
        pairing.push(best);
        total += dist;
    }
    (pairing, total)
}

/// Cell-by-cell comparison of a parsed table against a generated plan, up
/// to the order of blocks and of runs within blocks. Factors are compared
/// by position.
pub fn errata_diff(table: &Table, generated: &Plan) -> Result<ErrataReport> {
    let parsed = table.to_plan()?;
    let mut report = ErrataReport { layout: table.layout_anomalies.clone(), ..ErrataReport::default() };
    let shape = [
        ("factors", parsed.num_factors(), generated.num_factors()),
        ("blocks", parsed.num_blocks(), generated.num_blocks()),
        ("block size", parsed.block_size(), generated.block_size()),
    ];
    for (what, t, g) in shape {
        if t != g {
            report.shape.push(format!("table has {t} {what}, generated plan has {g}"));
        }
    }
    if !report.shape.is_empty() {
        return Ok(report);
    }
    report.canonical_match = canonicalize(&parsed).blocks() == canonicalize(generated).blocks();
    let mut used = alloc::vec![false; generated.num_blocks()];
    for (b, tblock) in parsed.blocks().iter().enumerate() {
        let (g, pairing, _) = (0..generated.num_blocks())
            .filter(|&g| !used[g])
            .map(|g| {
                let (pairing, d) = match_runs(tblock, &generated.blocks()[g]);
                (g, pairing, d)
            })
            .min_by_key(|(g, _, d)| (*d, *g))
            .expect("equal block counts");
        used[g] = true;
        let gblock = &generated.blocks()[g];
        for (r, (trun, &gr)) in tblock.iter().zip(&pairing).enumerate() {
            for (f, (&t, &x)) in trun.iter().zip(&gblock[gr]).enumerate() {
                if t != x {
                    report.cells.push(CellDiff { block: b, run: r, factor: table.factors[f].clone(), table: t, generated: x });
                }
            }
        }
    }
    Ok(report)
}
