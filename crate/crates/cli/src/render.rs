//! Human table and flat CSV renderings, and the incidence recount.

use std::collections::HashMap;
use std::fmt::Write as _;

use potb_core::matrix::IntMatrix;
use potb_core::plan::Plan;

/// Factors as rows, blocks as column groups.
pub fn table(plan: &Plan) -> String {
    let mut out = String::new();
    if !plan.provenance().is_empty() {
        writeln!(out, "# {}", plan.provenance()).unwrap();
    }
    writeln!(
        out,
        "# {} blocks of size {}, {} factors",
        plan.num_blocks(),
        plan.block_size(),
        plan.num_factors()
    )
    .unwrap();
    writeln!(out, "{plan}").unwrap();
    out
}

/// One record per cell: `block,run,factor,level`, 0-based positions.
pub fn csv(plan: &Plan) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["block", "run", "factor", "level"])?;
    for (b, block) in plan.blocks().iter().enumerate() {
        for (r, run) in block.iter().enumerate() {
            for (level, factor) in run.iter().zip(plan.factors()) {
                w.write_record([b.to_string(), r.to_string(), factor.name.clone(), level.to_string()])?;
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Incidence re-derived by counting runs, without the library's
/// incidence routine.
pub struct Recount {
    pub n: HashMap<(usize, usize), IntMatrix>,
    pub l: Vec<IntMatrix>,
}

pub fn recount(plan: &Plan) -> Recount {
    let m = plan.num_factors();
    let sizes: Vec<usize> = plan.factors().iter().map(|f| f.num_levels()).collect();
    let index: Vec<HashMap<String, usize>> = plan
        .factors()
        .iter()
        .map(|f| f.levels().iter().enumerate().map(|(x, l)| (l.to_string(), x)).collect())
        .collect();
    let mut n: HashMap<(usize, usize), IntMatrix> = HashMap::new();
    let mut l: Vec<IntMatrix> = sizes.iter().map(|&s| IntMatrix::zeros(s, plan.num_blocks())).collect();
    for (b, block) in plan.blocks().iter().enumerate() {
        for run in block {
            let pos: Vec<usize> = run.iter().enumerate().map(|(i, x)| index[i][&x.to_string()]).collect();
            for i in 0..m {
                l[i][(pos[i], b)] += 1;
                for j in 0..m {
                    n.entry((i, j)).or_insert_with(|| IntMatrix::zeros(sizes[i], sizes[j]))[(pos[i], pos[j])] += 1;
                }
            }
        }
    }
    Recount { n, l }
}

/// A matrix with its rows and columns labelled by levels.
pub fn labelled(m: &IntMatrix, rows: &[String], cols: &[String]) -> String {
    let width = m
        .to_rows()
        .iter()
        .flatten()
        .map(|x| x.to_string().len())
        .chain(rows.iter().chain(cols).map(String::len))
        .max()
        .unwrap_or(1);
    let mut out = format!("{:>width$} |", "");
    for c in cols {
        write!(out, " {c:>width$}").unwrap();
    }
    out.push('\n');
    for (r, label) in rows.iter().enumerate() {
        write!(out, "{label:>width$} |").unwrap();
        for x in m.row(r) {
            write!(out, " {x:>width$}").unwrap();
        }
        out.push('\n');
    }
    out
}
