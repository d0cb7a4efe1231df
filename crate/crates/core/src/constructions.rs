//! Catalog of parameterized recipes producing POTBs and PIOTBs.
//!
//! Every recipe validates its parameters, builds one or more plans and
//! attaches the claims each plan must satisfy. Claims are checked by
//! [`crate::verify::full_report`], never assumed.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::arrays::{hadamard, hadamard_reachable, oa_from_hadamard, oa_rao, q_augment, OrthArray};
use crate::error::{Error, Result};
use crate::gf::{cosets, is_prime_power, Field};
use crate::golden;
use crate::plan::{diamond, Block, Factor, Level, LevelMap, Plan, Run};
use crate::verify::Claim;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RecipeId {
    Ex21,
    Thm31a,
    Thm31b1,
    Thm31b2,
    Thm31c,
    Thm32,
    Thm33,
    Thm51,
    Thm52,
    Thm53a,
    Thm53b,
    Thm61,
    Thm62,
}

impl RecipeId {
    pub const ALL: [RecipeId; 13] = [
        RecipeId::Ex21,
        RecipeId::Thm31a,
        RecipeId::Thm31b1,
        RecipeId::Thm31b2,
        RecipeId::Thm31c,
        RecipeId::Thm32,
        RecipeId::Thm33,
        RecipeId::Thm51,
        RecipeId::Thm52,
        RecipeId::Thm53a,
        RecipeId::Thm53b,
        RecipeId::Thm61,
        RecipeId::Thm62,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RecipeId::Ex21 => "ex2.1",
            RecipeId::Thm31a => "thm3.1a",
            RecipeId::Thm31b1 => "thm3.1b1",
            RecipeId::Thm31b2 => "thm3.1b2",
            RecipeId::Thm31c => "thm3.1c",
            RecipeId::Thm32 => "thm3.2",
            RecipeId::Thm33 => "thm3.3",
            RecipeId::Thm51 => "thm5.1",
            RecipeId::Thm52 => "thm5.2",
            RecipeId::Thm53a => "thm5.3a",
            RecipeId::Thm53b => "thm5.3b",
            RecipeId::Thm61 => "thm6.1",
            RecipeId::Thm62 => "thm6.2",
        }
    }
}

impl fmt::Display for RecipeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RecipeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RecipeId::ALL.into_iter().find(|r| r.as_str() == s).ok_or_else(|| Error::UnknownRecipe(s.into()))
    }
}

/// Named integer parameters of a recipe.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Params(BTreeMap<String, i64>);

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: i64) -> Self {
        self.0.insert(name.into(), value);
        self
    }

    pub fn set(&mut self, name: &str, value: i64) {
        self.0.insert(name.into(), value);
    }

    pub fn get(&self, name: &str) -> Option<i64> {
        self.0.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, i64)> + '_ {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn contains(&self, other: &Params) -> bool {
        other.iter().all(|(k, v)| self.get(k) == Some(v))
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&parts.join(","))
    }
}

/// A named parameter choice singled out with extra claims.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preset {
    pub params: Params,
    pub claims: Vec<Claim>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub id: RecipeId,
    pub params: &'static [&'static str],
    pub constraints: &'static str,
    pub claims: &'static str,
    pub summary: &'static str,
    pub presets: Vec<Preset>,
}

/// Every recipe with its parameters, constraints and presets.
pub fn catalog() -> Vec<CatalogEntry> {
    RecipeId::ALL.into_iter().map(entry).collect()
}

pub fn entry(id: RecipeId) -> CatalogEntry {
    let preset = |params: Params, claims: Vec<Claim>| Preset { params, claims };
    let p = Params::new;
    let (params, constraints, claims, summary, presets): (&'static [&'static str], _, _, _, _) = match id {
        RecipeId::Ex21 => (
            &[],
            "none",
            "potb, balanced, block_shape(6,2)",
            "balanced two-factor plan for four-level factors on six blocks of two",
            vec![preset(p(), vec![])],
        ),
        RecipeId::Thm31a => (
            &["s", "a", "b"],
            "s >= 5; a, b, -a, -b distinct and nonzero mod s",
            "potb, block_shape(2s,2)",
            "two factors on 2s blocks of size two",
            vec![preset(p().with("s", 5).with("a", 1).with("b", 2), vec![Claim::Balanced])],
        ),
        RecipeId::Thm31b1 => (
            &["s", "a", "b"],
            "s >= 5; a, b, -a, -b distinct and nonzero mod s",
            "potb, block_shape(4s,2)",
            "four factors on 4s blocks of size two",
            vec![preset(p().with("s", 10).with("a", 1).with("b", 3), vec![Claim::Gdd { lambda1: 0, lambda2: 1 }])],
        ),
        RecipeId::Thm31b2 => (
            &["s", "a", "b", "c", "d"],
            "s >= 9; ±a, ±b, ±c, ±d distinct and nonzero mod s",
            "potb, block_shape(4s,2)",
            "four factors on 4s blocks of size two",
            vec![preset(
                p().with("s", 9).with("a", 1).with("b", 2).with("c", 3).with("d", 4),
                vec![Claim::Balanced],
            )],
        ),
        RecipeId::Thm31c => (
            &["s", "a", "b", "c"],
            "s >= 7; ±a, ±b, ±c distinct and nonzero mod s",
            "potb, block_shape(6s,2), levels(s+1)",
            "four factors with s+1 levels on 6s blocks of size two",
            vec![preset(p().with("s", 7), vec![])],
        ),
        RecipeId::Thm32 => (
            &["s"],
            "s >= 5",
            "potb, factors(3), levels(s+1)",
            "three factors with s+1 levels on 6s blocks of size two",
            vec![preset(p().with("s", 5), vec![Claim::Balanced])],
        ),
        RecipeId::Thm33 => (
            &["s", "delta"],
            "s odd prime power >= 5; delta a non-square of GF(s)",
            "potb, balanced, block_shape(2s,(s+1)/2)",
            "balanced two-factor plan with s+1 levels over GF(s)",
            vec![preset(p().with("s", 5), vec![]), preset(p().with("s", 9), vec![])],
        ),
        RecipeId::Thm51 => (
            &["h"],
            "h >= 2 a Hadamard order",
            "potb, connected, saturated, block_shape(2h,4), factors(3h)",
            "three-level factors on 2h blocks of size four",
            vec![preset(p().with("h", 2), vec![])],
        ),
        RecipeId::Thm52 => (
            &[],
            "none",
            "potb, block_shape(2,4), factors(3) for each of the two plans",
            "two three-factor plans on two blocks of size four",
            vec![preset(p(), vec![])],
        ),
        RecipeId::Thm53a => (
            &["n"],
            "2 <= n <= 5 (N = 3^n runs, m = (3^n - 1)/2 columns)",
            "potb, connected, saturated, block_shape(2N,4), factors(3(2m+1))",
            "three-level factors on 2N blocks of size four from OA(N,m,3,2)",
            vec![preset(p().with("n", 2), vec![])],
        ),
        RecipeId::Thm53b => (
            &[],
            "none",
            "potb, connected, block_shape(6,4), factors(9)",
            "nine three-level factors on six blocks of size four",
            vec![preset(p(), vec![])],
        ),
        RecipeId::Thm61 => (
            &["m", "n"],
            "m, n >= 2 Hadamard orders",
            "piotb(n classes of m), saturated, block_shape(n,m+1), factors(mn)",
            "two-level factors on n blocks of size m+1",
            vec![preset(p().with("m", 4).with("n", 4), vec![])],
        ),
        RecipeId::Thm62 => (
            &[],
            "none",
            "piotb(0,3|1,4|2,5), saturated, block_shape(4,4)",
            "six three-level factors on four blocks of size four",
            vec![preset(p(), vec![])],
        ),
    };
    CatalogEntry { id, params, constraints, claims, summary, presets }
}

/// One constructed plan and the claims it must satisfy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Part {
    pub plan: Plan,
    pub claims: Vec<Claim>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecipeResult {
    pub id: RecipeId,
    /// Parameters after defaults are filled in.
    pub params: Params,
    pub parts: Vec<Part>,
}

impl RecipeResult {
    pub fn plan(&self) -> &Plan {
        &self.parts[0].plan
    }

    pub fn claims(&self) -> &[Claim] {
        &self.parts[0].claims
    }
}

fn violation(id: RecipeId, constraint: impl Into<String>) -> Error {
    Error::ConstraintViolation { recipe: id.to_string(), constraint: constraint.into() }
}

/// Builds recipe `id`. Missing parameters take their defaults
/// (`a=1, b=2, c=3, d=4`, `delta` the smallest non-square).
pub fn construct(id: RecipeId, params: &Params) -> Result<RecipeResult> {
    let allowed = entry(id).params;
    if let Some((name, _)) = params.iter().find(|(k, _)| !allowed.contains(k)) {
        return Err(violation(id, format!("unknown parameter {name}")));
    }
    let mut resolved = params.clone();
    for (name, default) in [("a", 1), ("b", 2), ("c", 3), ("d", 4)] {
        if allowed.contains(&name) && resolved.get(name).is_none() {
            resolved.set(name, default);
        }
    }
    let need = |name: &str| resolved.get(name).ok_or_else(|| violation(id, format!("parameter {name} is required")));
    let parts = match id {
        RecipeId::Ex21 => vec![ex21()?],
        RecipeId::Thm31a => vec![thm31a(need("s")?, need("a")?, need("b")?)?],
        RecipeId::Thm31b1 => vec![thm31b1(need("s")?, need("a")?, need("b")?)?],
        RecipeId::Thm31b2 => vec![thm31b2(need("s")?, [need("a")?, need("b")?, need("c")?, need("d")?])?],
        RecipeId::Thm31c => vec![thm31c(need("s")?, need("a")?, need("b")?, need("c")?)?],
        RecipeId::Thm32 => vec![thm32(need("s")?)?],
        RecipeId::Thm33 => {
            let s = need("s")?;
            let (part, delta) = thm33(s, resolved.get("delta"))?;
            resolved.set("delta", i64::from(delta));
            vec![part]
        }
        RecipeId::Thm51 => vec![thm51(need("h")?)?],
        RecipeId::Thm52 => thm52()?,
        RecipeId::Thm53a => vec![thm53a(need("n")?)?],
        RecipeId::Thm53b => vec![thm53b()?],
        RecipeId::Thm61 => vec![thm61(need("m")?, need("n")?)?],
        RecipeId::Thm62 => vec![thm62()?],
    };
    let mut parts = parts;
    for preset in entry(id).presets {
        if resolved.contains(&preset.params) {
            for part in &mut parts {
                for c in &preset.claims {
                    if !part.claims.contains(c) {
                        part.claims.push(c.clone());
                    }
                }
            }
        }
    }
    for part in &mut parts {
        let provenance = if resolved.is_empty() { id.to_string() } else { format!("{id}({resolved})") };
        part.plan = part.plan.clone().with_provenance(provenance);
    }
    Ok(RecipeResult { id, params: resolved, parts })
}

/// Sorts the runs within each block, then the blocks.
pub fn canonicalize(p: &Plan) -> Plan {
    let mut blocks: Vec<Block> = p
        .blocks()
        .iter()
        .map(|b| {
            let mut b = b.clone();
            b.sort();
            b
        })
        .collect();
    blocks.sort();
    Plan::new(p.factors().to_vec(), blocks)
        .expect("reordering preserves validity")
        .with_provenance(p.provenance())
}

/// `prefix1, prefix2, ...` style names: `letters[f]` followed by the copy
/// index, copies numbered from `first`.
fn indexed_names(letters: &[String], copies: usize, first: usize) -> Vec<String> {
    (first..first + copies).flat_map(|c| letters.iter().map(move |l| format!("{l}{c}"))).collect()
}

fn letters(m: usize) -> Vec<String> {
    (0..m)
        .map(|i| if i < 26 { char::from(b'A' + i as u8).to_string() } else { format!("F{i}_") })
        .collect()
}

fn fin(xs: &[u32]) -> Run {
    xs.iter().map(|&x| Level::Finite(x)).collect()
}

fn ex21() -> Result<Part> {
    let blocks = [
        [[0, 1], [2, 3]],
        [[1, 0], [3, 2]],
        [[0, 2], [3, 1]],
        [[1, 3], [2, 0]],
        [[0, 3], [1, 2]],
        [[3, 0], [2, 1]],
    ]
    .iter()
    .map(|b| b.iter().map(|r| fin(r)).collect())
    .collect();
    let plan = Plan::cyclic(4, false, &["A1", "A2"], blocks)?;
    Ok(Part {
        plan,
        claims: vec![Claim::Potb, Claim::Balanced, Claim::BlockShape { b: 6, k: 2 }, Claim::Factors(2)],
    })
}

/// Symbolic entry of an initial block: `±x` for a parameter, 0 or ∞.
#[derive(Clone, Copy)]
enum Sym {
    Zero,
    Inf,
    Pos(usize),
    Neg(usize),
}

fn residue(x: i64, s: i64) -> u32 {
    x.rem_euclid(s) as u32
}

/// Checks that `±values` are `2·len` distinct nonzero residues mod `s`.
fn distinct_signed(id: RecipeId, s: i64, names: &str, values: &[i64]) -> Result<()> {
    let mut seen = Vec::new();
    for &v in values {
        for r in [residue(v, s), residue(-v, s)] {
            if r == 0 || seen.contains(&r) {
                return Err(violation(id, format!("{names} must be distinct and nonzero mod {s}")));
            }
            seen.push(r);
        }
    }
    Ok(())
}

fn develop(
    id: RecipeId,
    s: i64,
    with_inf: bool,
    values: &[i64],
    initial: &[[&[Sym]; 2]],
) -> Result<Plan> {
    let m = initial[0][0].len();
    let level = |x: Sym| match x {
        Sym::Zero => Level::Finite(0),
        Sym::Inf => Level::Inf,
        Sym::Pos(i) => Level::Finite(residue(values[i], s)),
        Sym::Neg(i) => Level::Finite(residue(-values[i], s)),
    };
    let blocks = initial.iter().map(|b| b.iter().map(|r| r.iter().map(|&x| level(x)).collect()).collect()).collect();
    let names: Vec<String> = (1..=m).map(|i| format!("A{i}")).collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let s = u32::try_from(s).map_err(|_| violation(id, "s out of range"))?;
    Plan::cyclic(s, with_inf, &names, blocks)?.oplus(s)
}

fn min_s(id: RecipeId, s: i64, min: i64) -> Result<()> {
    if s < min {
        return Err(violation(id, format!("s >= {min} (got {s})")));
    }
    if s > 1 << 16 {
        return Err(violation(id, format!("s <= {} (got {s})", 1 << 16)));
    }
    Ok(())
}


const A: Sym = Sym::Pos(0);
const NA: Sym = Sym::Neg(0);
const B: Sym = Sym::Pos(1);
const NB: Sym = Sym::Neg(1);
const C: Sym = Sym::Pos(2);
const NC: Sym = Sym::Neg(2);
const D: Sym = Sym::Pos(3);
const ND: Sym = Sym::Neg(3);
const Z: Sym = Sym::Zero;
const I: Sym = Sym::Inf;

fn thm31a(s: i64, a: i64, b: i64) -> Result<Part> {
    let id = RecipeId::Thm31a;
    min_s(id, s, 5)?;
    distinct_signed(id, s, "a, b, -a, -b", &[a, b])?;
    let initial: [[&[Sym]; 2]; 2] = [[&[A, B], &[NA, NB]], [&[B, NA], &[NB, A]]];
    let plan = develop(id, s, false, &[a, b], &initial)?;
    let b = 2 * s as usize;
    Ok(Part { plan, claims: vec![Claim::Potb, Claim::BlockShape { b, k: 2 }] })
}

fn thm31b1(s: i64, a: i64, b: i64) -> Result<Part> {
    let id = RecipeId::Thm31b1;
    min_s(id, s, 5)?;
    distinct_signed(id, s, "a, b, -a, -b", &[a, b])?;
    // the third block's second run starts with -b; with +b no s except 6
    // yields a POTB
    let initial: [[&[Sym]; 2]; 4] = [
        [&[Z, A, Z, B], &[A, NA, B, NB]],
        [&[A, Z, B, Z], &[NA, NA, NB, NB]],
        [&[Z, NB, NA, A], &[NB, B, Z, NA]],
        [&[NB, Z, A, A], &[B, B, NA, Z]],
    ];
    let plan = develop(id, s, false, &[a, b], &initial)?;
    let b = 4 * s as usize;
    Ok(Part { plan, claims: vec![Claim::Potb, Claim::BlockShape { b, k: 2 }] })
}

fn thm31b2(s: i64, v: [i64; 4]) -> Result<Part> {
    let id = RecipeId::Thm31b2;
    min_s(id, s, 9)?;
    distinct_signed(id, s, "±a, ±b, ±c, ±d", &v)?;
    let initial: [[&[Sym]; 2]; 4] = [
        [&[A, B, C, D], &[NA, NB, NC, ND]],
        [&[B, NA, D, NC], &[NB, A, ND, C]],
        [&[C, ND, NA, B], &[NC, D, A, NB]],
        [&[ND, NC, B, A], &[D, C, NB, NA]],
    ];
    let plan = develop(id, s, false, &v, &initial)?;
    let b = 4 * s as usize;
    Ok(Part { plan, claims: vec![Claim::Potb, Claim::BlockShape { b, k: 2 }] })
}

fn thm31c(s: i64, a: i64, b: i64, c: i64) -> Result<Part> {
    let id = RecipeId::Thm31c;
    min_s(id, s, 7)?;
    distinct_signed(id, s, "±a, ±b, ±c", &[a, b, c])?;
    // fourth factor of the second block reads (-b, b); the sign-swapped
    // version fails orthogonality for every s
    let initial: [[&[Sym]; 2]; 6] = [
        [&[Z, A, B, C], &[I, NA, NB, NC]],
        [&[A, Z, C, NB], &[NA, I, NC, B]],
        [&[B, C, Z, A], &[NB, NC, I, NA]],
        [&[C, NB, A, Z], &[NC, B, NA, I]],
        [&[A, A, NC, NC], &[NA, NA, C, C]],
        [&[A, NA, NC, C], &[NA, A, C, NC]],
    ];
    let plan = develop(id, s, true, &[a, b, c], &initial)?;
    let b = 6 * s as usize;
    Ok(Part {
        plan,
        claims: vec![Claim::Potb, Claim::BlockShape { b, k: 2 }, Claim::Levels(s as usize + 1)],
    })
}

fn thm32(s: i64) -> Result<Part> {
    let id = RecipeId::Thm32;
    min_s(id, s, 5)?;
    let (one, minus_one, two) = (A, NA, B);
    let initial: [[&[Sym]; 2]; 6] = [
        [&[I, Z, minus_one], &[Z, one, one]],
        [&[minus_one, I, Z], &[one, Z, one]],
        [&[Z, minus_one, I], &[one, one, Z]],
        [&[I, Z, one], &[Z, two, two]],
        [&[one, I, Z], &[two, Z, two]],
        [&[Z, one, I], &[two, two, Z]],
    ];
    let plan = develop(id, s, true, &[1, 2], &initial)?;
    Ok(Part { plan, claims: vec![Claim::Potb, Claim::Factors(3), Claim::Levels(s as usize + 1)] })
}

/// Returns the part and the non-square actually used.
fn thm33(s: i64, delta: Option<i64>) -> Result<(Part, u32)> {
    let id = RecipeId::Thm33;
    if s < 5 || s > 1 << 16 || s % 2 == 0 || !is_prime_power(s as u64) {
        return Err(violation(id, format!("s odd prime power >= 5 (got {s})")));
    }
    let field = Field::new(s as u64)?;
    let cos = cosets(&field)?;
    let delta = match delta {
        None => cos.c1[0],
        Some(d) => match u32::try_from(d) {
            Ok(d) if cos.c1.contains(&d) => d,
            _ => return Err(violation(id, format!("delta must be a non-square of GF({s}) (got {d})"))),
        },
    };
    let inv = field.inv(delta).expect("non-squares are nonzero");
    let fin = Level::Finite;
    let block = |head: [Level; 2], x: u32, y: u32| -> Block {
        core::iter::once(head.to_vec())
            .chain(cos.c0.iter().map(|&c| vec![fin(field.mul(x, c)), fin(field.mul(y, c))]))
            .collect()
    };
    let b0 = block([Level::Inf, fin(0)], 1, delta);
    let second = if cos.t % 2 == 0 { block([fin(0), Level::Inf], 1, inv) } else { block([fin(0), Level::Inf], inv, 1) };
    let q = s as u32;
    let factors = vec![Factor::field("A1", q, true), Factor::field("A2", q, true)];
    let plan = Plan::new(factors, vec![b0, second])?.oplus(q)?;
    let claims = vec![
        Claim::Potb,
        Claim::Balanced,
        Claim::BlockShape { b: 2 * s as usize, k: (s as usize + 1) / 2 },
        Claim::Factors(2),
    ];
    Ok((Part { plan, claims }, delta))
}

/// `Q(h, h, 2)` from a Hadamard matrix of order `h`. A one-column array has
/// no pairs to check, so it is augmented without the strength test.
fn hadamard_q(id: RecipeId, name: &str, h: i64) -> Result<OrthArray> {
    if !(2..=1 << 12).contains(&h) || !hadamard_reachable(h as usize) {
        return Err(violation(id, format!("{name} >= 2 a Hadamard order (got {h})")));
    }
    augment(&oa_from_hadamard(&hadamard(h as usize)?)?)
}

fn augment(oa: &OrthArray) -> Result<OrthArray> {
    if oa.n_factors() < 2 && !oa.is_augmented() {
        Ok(oa.with_zero_column())
    } else {
        q_augment(oa)
    }
}

/// The four runs of `OA(4, 3, 2, 2)`.
const O4: [[u32; 3]; 4] = [[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]];

fn abc() -> Vec<String> {
    letters(3)
}

fn thm51(h: i64) -> Result<Part> {
    let id = RecipeId::Thm51;
    let q = hadamard_q(id, "h", h)?;
    let p0 = Plan::cyclic(2, false, &["A", "B", "C"], vec![O4.iter().map(|r| fin(r)).collect()])?;
    let p1 = diamond(q.rows(), &p0)?;
    let p2 = p1.relabel_all(&LevelMap::new().with(1, 2))?;
    let h = h as usize;
    let plan = p1.union_merge(&p2)?.rename_factors(indexed_names(&abc(), h, 1))?;
    Ok(Part {
        plan,
        claims: vec![
            Claim::Potb,
            Claim::Connected,
            Claim::Saturated,
            Claim::BlockShape { b: 2 * h, k: 4 },
            Claim::Factors(3 * h),
        ],
    })
}

/// The two three-factor plans: `O₄` paired with `O₄` under `1 ↦ 2`, and
/// with that image under `0 ↔ 2`.
pub fn rho_pair() -> Result<(Plan, Plan)> {
    let o4: Block = O4.iter().map(|r| fin(r)).collect();
    let t4: Block = o4.iter().map(|r| r.iter().map(|&l| if l == Level::Finite(1) { Level::Finite(2) } else { l }).collect()).collect();
    let swap = |l: Level| match l {
        Level::Finite(0) => Level::Finite(2),
        Level::Finite(2) => Level::Finite(0),
        l => l,
    };
    let t4_tilde: Block = t4.iter().map(|r| r.iter().map(|&l| swap(l)).collect()).collect();
    let rho1 = Plan::cyclic(3, false, &["A", "B", "C"], vec![o4.clone(), t4])?;
    let rho2 = Plan::cyclic(3, false, &["~A", "~B", "~C"], vec![o4, t4_tilde])?;
    Ok((rho1, rho2))
}

fn thm52() -> Result<Vec<Part>> {
    let (rho1, rho2) = rho_pair()?;
    let claims = vec![Claim::Potb, Claim::BlockShape { b: 2, k: 4 }, Claim::Factors(3)];
    Ok(vec![Part { plan: rho1, claims: claims.clone() }, Part { plan: rho2, claims }])
}

/// Three-level POTB on `2N` blocks of four from any `OA(N, m, 3, 2)`:
/// `Q ◇ ρ₁` (copies `0..=m`) joined with `O ◇ ρ₂` (copies `1..=m`).
pub fn three_level_from_oa(oa: &OrthArray) -> Result<Plan> {
    if oa.symbols() != 3 || oa.is_augmented() {
        return Err(Error::InvalidArray("expected an unaugmented array over three symbols".into()));
    }
    let m = oa.n_factors();
    let (rho1, rho2) = rho_pair()?;
    let q = augment(oa)?;
    let p1 = diamond(q.rows(), &rho1)?.rename_factors(indexed_names(&abc(), m + 1, 0))?;
    let tilde: Vec<String> = abc().iter().map(|l| format!("~{l}")).collect();
    let p2 = diamond(oa.rows(), &rho2)?.rename_factors(indexed_names(&tilde, m, 1))?;
    p1.join(&p2)
}

fn thm53a(n: i64) -> Result<Part> {
    let id = RecipeId::Thm53a;
    if !(2..=5).contains(&n) {
        return Err(violation(id, format!("2 <= n <= 5 (got {n})")));
    }
    let oa = oa_rao(3, n as u32)?;
    let (runs, m) = (oa.n_runs(), oa.n_factors());
    let plan = three_level_from_oa(&oa)?;
    Ok(Part {
        plan,
        claims: vec![
            Claim::Potb,
            Claim::Connected,
            Claim::Saturated,
            Claim::BlockShape { b: 2 * runs, k: 4 },
            Claim::Factors(3 * (2 * m + 1)),
        ],
    })
}

fn thm53b() -> Result<Part> {
    let oa = OrthArray::new(vec![vec![0], vec![1], vec![2]], 3, false)?;
    let plan = three_level_from_oa(&oa)?;
    Ok(Part {
        plan,
        claims: vec![Claim::Potb, Claim::Connected, Claim::BlockShape { b: 6, k: 4 }, Claim::Factors(9)],
    })
}

fn thm61(m: i64, n: i64) -> Result<Part> {
    let id = RecipeId::Thm61;
    let qm = hadamard_q(id, "m", m)?;
    let qn = hadamard_q(id, "n", n)?;
    let (m, n) = (m as usize, n as usize);
    let mut runs: Block = qm.rows().iter().map(|r| fin(r)).collect();
    runs.push(vec![Level::Finite(1); m]);
    let names = letters(m);
    let names_ref: Vec<&str> = names.iter().map(String::as_str).collect();
    let p0 = Plan::cyclic(2, false, &names_ref, vec![runs])?;
    let plan = diamond(qn.rows(), &p0)?.rename_factors(indexed_names(&names, n, 1))?;
    let classes = (0..n).map(|i| (i * m..(i + 1) * m).collect()).collect();
    Ok(Part {
        plan,
        claims: vec![
            Claim::Piotb(classes),
            Claim::Saturated,
            Claim::BlockShape { b: n, k: m + 1 },
            Claim::Factors(m * n),
        ],
    })
}

fn thm62() -> Result<Part> {
    let plan = golden::table(RecipeId::Thm62).expect("transcribed").to_plan()?;
    Ok(Part {
        plan,
        claims: vec![
            Claim::Piotb(vec![vec![0, 3], vec![1, 4], vec![2, 5]]),
            Claim::Saturated,
            Claim::BlockShape { b: 4, k: 4 },
            Claim::Factors(6),
        ],
    })
}
