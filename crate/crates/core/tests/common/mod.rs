//! Independent oracles shared by the integration tests: a naive incidence
//! recount, plain-vector models of the combinators, and a floating-point
//! rank of the fully adjusted information matrix.

#![allow(dead_code)]

use std::collections::HashMap;

use nalgebra::DMatrix;
use potb_core::matrix::IntMatrix;
use potb_core::plan::{Level, Plan};
use proptest::prelude::*;

pub type RawBlocks = Vec<Vec<Vec<Level>>>;

/// Incidence counted straight from the runs with hash maps.
pub struct Recount {
    pub n: Vec<Vec<IntMatrix>>,
    pub l: Vec<IntMatrix>,
}

pub fn recount(p: &Plan) -> Recount {
    let m = p.num_factors();
    let pos = |i: usize, l: Level| p.factors()[i].levels().iter().position(|&x| x == l).unwrap();
    let mut pairs: HashMap<(usize, usize, usize, usize), i64> = HashMap::new();
    let mut blocks: HashMap<(usize, usize, usize), i64> = HashMap::new();
    for (b, block) in p.blocks().iter().enumerate() {
        for run in block {
            for i in 0..m {
                *blocks.entry((i, pos(i, run[i]), b)).or_default() += 1;
                for j in 0..m {
                    *pairs.entry((i, j, pos(i, run[i]), pos(j, run[j]))).or_default() += 1;
                }
            }
        }
    }
    let s: Vec<usize> = p.factors().iter().map(|f| f.num_levels()).collect();
    let n = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut x = IntMatrix::zeros(s[i], s[j]);
                    for a in 0..s[i] {
                        for c in 0..s[j] {
                            x[(a, c)] = pairs.get(&(i, j, a, c)).copied().unwrap_or(0);
                        }
                    }
                    x
                })
                .collect()
        })
        .collect();
    let l = (0..m)
        .map(|i| {
            let mut x = IntMatrix::zeros(s[i], p.num_blocks());
            for a in 0..s[i] {
                for b in 0..p.num_blocks() {
                    x[(a, b)] = blocks.get(&(i, a, b)).copied().unwrap_or(0);
                }
            }
            x
        })
        .collect();
    Recount { n, l }
}

/// The library's incidence agrees with the recount.
pub fn incidence_matches(p: &Plan) -> Result<(), String> {
    let inc = p.incidence();
    let rc = recount(p);
    for i in 0..p.num_factors() {
        if inc.l(i) != &rc.l[i] {
            return Err(format!("L_{i} differs"));
        }
        for j in 0..p.num_factors() {
            if inc.n(i, j) != &rc.n[i][j] {
                return Err(format!("N_{i}{j} differs"));
            }
        }
    }
    Ok(())
}

/// OTB for a pair decided from the recount alone.
pub fn otb_by_recount(p: &Plan, i: usize, j: usize) -> bool {
    let rc = recount(p);
    let k = p.block_size() as i64;
    rc.n[i][j].scale(k) == rc.l[i].mul(&rc.l[j].transpose())
}

fn shift(l: Level, u: u32, s: u32) -> Level {
    match l {
        Level::Inf => Level::Inf,
        Level::Finite(x) => Level::Finite((x + u) % s),
    }
}

pub fn model_add_along(raw: &RawBlocks, shifts: &[Vec<u32>], s: u32) -> RawBlocks {
    let mut out = Vec::new();
    for v in shifts {
        for block in raw {
            out.push(block.iter().map(|run| run.iter().zip(v).map(|(&l, &u)| shift(l, u, s)).collect()).collect());
        }
    }
    out
}

pub fn model_oplus(raw: &RawBlocks, s: u32) -> RawBlocks {
    let m = raw[0][0].len();
    let shifts: Vec<Vec<u32>> = (0..s).map(|u| vec![u; m]).collect();
    model_add_along(raw, &shifts, s)
}

pub fn model_join(a: &RawBlocks, b: &RawBlocks) -> RawBlocks {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(r1, r2)| r1.iter().chain(r2).copied().collect()).collect())
        .collect()
}

pub fn model_diamond(h: &[Vec<u32>], raw: &RawBlocks, s: u32) -> RawBlocks {
    let mut out = Vec::new();
    for row in h {
        for block in raw {
            out.push(
                block
                    .iter()
                    .map(|run| row.iter().flat_map(|&u| run.iter().map(move |&l| shift(l, u, s))).collect())
                    .collect(),
            );
        }
    }
    out
}

/// Small random plans over Z_s (optionally with ∞).
#[derive(Debug, Clone)]
pub struct RandomPlan {
    pub s: u32,
    pub with_inf: bool,
    pub blocks: RawBlocks,
}

impl RandomPlan {
    pub fn plan(&self) -> Plan {
        let m = self.blocks[0][0].len();
        let names: Vec<String> = (0..m).map(|i| format!("F{i}")).collect();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        Plan::cyclic(self.s, self.with_inf, &names, self.blocks.clone()).unwrap()
    }
}

fn level(s: u32, with_inf: bool) -> BoxedStrategy<Level> {
    if with_inf {
        prop_oneof![4 => (0..s).prop_map(Level::Finite), 1 => Just(Level::Inf)].boxed()
    } else {
        (0..s).prop_map(Level::Finite).boxed()
    }
}

pub fn blocks_strategy(s: u32, with_inf: bool, b: usize, k: usize, m: usize) -> BoxedStrategy<RawBlocks> {
    proptest::collection::vec(
        proptest::collection::vec(proptest::collection::vec(level(s, with_inf), m), k),
        b,
    )
    .boxed()
}

pub fn random_plan(s_max: u32) -> impl Strategy<Value = RandomPlan> {
    (2..=s_max, any::<bool>(), 1usize..=3, 1usize..=3, 1usize..=3).prop_flat_map(|(s, with_inf, b, k, m)| {
        blocks_strategy(s, with_inf, b, k, m).prop_map(move |blocks| RandomPlan { s, with_inf, blocks })
    })
}

/// Rank of the information matrix of factor `i` adjusted for blocks and
/// all other factors, from the model matrix with an SVD pseudo-inverse.
pub fn float_adjusted_rank(p: &Plan, i: usize) -> usize {
    let n = p.num_runs();
    let b = p.num_blocks();
    let s: Vec<usize> = p.factors().iter().map(|f| f.num_levels()).collect();
    let mut xi = DMatrix::<f64>::zeros(n, s[i]);
    let others: usize = s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).sum();
    let mut z = DMatrix::<f64>::zeros(n, b + others);
    for (row, (blk, run)) in p.runs().enumerate() {
        z[(row, blk)] = 1.0;
        let mut col = b;
        for (j, (&l, f)) in run.iter().zip(p.factors()).enumerate() {
            let idx = f.levels().iter().position(|&x| x == l).unwrap();
            if j == i {
                xi[(row, idx)] = 1.0;
            } else {
                z[(row, col + idx)] = 1.0;
                col += s[j];
            }
        }
    }
    let ztz = z.transpose() * &z;
    let pinv = ztz.pseudo_inverse(1e-9).unwrap();
    let proj = &z * pinv * z.transpose();
    let resid = DMatrix::<f64>::identity(n, n) - proj;
    let c = xi.transpose() * resid * &xi;
    let sv = c.singular_values();
    let tol = 1e-7 * sv.max().max(1.0);
    sv.iter().filter(|&&x| x > tol).count()
}
