//! Blocked main-effect plans: factors with explicit level sets, ordered
//! blocks of ordered runs, integer incidence matrices and the recursive
//! combinators that grow plans by adding blocks, factors or levels.
//!
//! Runs and blocks are ordered. Joining factors pairs runs by position, so
//! every combinator documents the order of its output.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::matrix::IntMatrix;

/// A level of a factor. Finite labels sort before ∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Finite(u32),
    Inf,
}

impl Level {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "inf" {
            return Ok(Level::Inf);
        }
        s.parse::<u32>()
            .map(Level::Finite)
            .map_err(|_| Error::Parse(format!("invalid level {s:?}")))
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Level::Finite(u) => Some(u),
            Level::Inf => None,
        }
    }
}

impl From<u32> for Level {
    fn from(u: u32) -> Self {
        Level::Finite(u)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Finite(u) => write!(f, "{u}"),
            Level::Inf => f.write_str("inf"),
        }
    }
}

/// How shifts act on a factor's levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LevelKind {
    /// Integers modulo `s`; the finite levels are exactly `0..s`.
    Cyclic(u32),
    /// Elements of GF(q) by canonical index; the finite levels are exactly `0..q`.
    Field(u32),
    /// Arbitrary labels; only the zero shift applies.
    Labels,
}

impl LevelKind {
    pub fn name(&self) -> &'static str {
        match self {
            LevelKind::Cyclic(_) => "cyclic",
            LevelKind::Field(_) => "field",
            LevelKind::Labels => "labels",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factor {
    pub name: String,
    kind: LevelKind,
    levels: Vec<Level>,
}

impl Factor {
    /// Factor over Z_s, optionally with ∞ adjoined.
    pub fn cyclic(name: impl Into<String>, s: u32, with_inf: bool) -> Self {
        Self { name: name.into(), kind: LevelKind::Cyclic(s), levels: group_levels(s, with_inf) }
    }

    /// Factor over GF(q) element indices, optionally with ∞ adjoined.
    pub fn field(name: impl Into<String>, q: u32, with_inf: bool) -> Self {
        Self { name: name.into(), kind: LevelKind::Field(q), levels: group_levels(q, with_inf) }
    }

    pub fn labels(name: impl Into<String>, levels: impl IntoIterator<Item = Level>) -> Self {
        let levels: BTreeSet<Level> = levels.into_iter().collect();
        Self { name: name.into(), kind: LevelKind::Labels, levels: levels.into_iter().collect() }
    }

    /// Builds a factor of the given kind from a declared level list,
    /// checking that cyclic and field kinds declare the whole group.
    pub fn with_kind(name: impl Into<String>, kind: LevelKind, levels: Vec<Level>) -> Result<Self> {
        let name = name.into();
        let mut sorted = levels.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != levels.len() {
            return Err(Error::InvalidPlan(format!("factor {name} declares a level twice")));
        }
        match kind {
            LevelKind::Cyclic(s) | LevelKind::Field(s) => {
                let with_inf = sorted.last() == Some(&Level::Inf);
                if sorted != group_levels(s, with_inf) {
                    return Err(Error::InvalidPlan(format!(
                        "factor {name} of kind {} must declare levels 0..{s}",
                        kind.name()
                    )));
                }
                if let LevelKind::Field(q) = kind {
                    Field::new(u64::from(q))?;
                }
            }
            LevelKind::Labels => {}
        }
        Ok(Self { name, kind, levels: sorted })
    }

    pub fn kind(&self) -> LevelKind {
        self.kind
    }

    /// Declared levels: finite ascending, then ∞.
    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn level_index(&self, level: Level) -> Option<usize> {
        self.levels.binary_search(&level).ok()
    }

    fn renamed(&self, name: String) -> Self {
        Self { name, ..self.clone() }
    }
}

fn group_levels(s: u32, with_inf: bool) -> Vec<Level> {
    let mut v: Vec<Level> = (0..s).map(Level::Finite).collect();
    if with_inf {
        v.push(Level::Inf);
    }
    v
}

pub type Run = Vec<Level>;
pub type Block = Vec<Run>;

/// A main-effect plan on `b` blocks of `k` runs for `m` factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Plan {
    factors: Vec<Factor>,
    blocks: Vec<Block>,
    provenance: String,
}

impl Plan {
    /// Validates shape (constant block size, `m` coordinates per run) and
    /// that every level used is declared. Declared levels may be absent.
    pub fn new(factors: Vec<Factor>, blocks: Vec<Block>) -> Result<Self> {
        let m = factors.len();
        if m == 0 {
            return Err(Error::InvalidPlan("a plan needs at least one factor".into()));
        }
        let k = blocks.first().map(Vec::len).ok_or_else(|| Error::InvalidPlan("a plan needs at least one block".into()))?;
        if k == 0 {
            return Err(Error::InvalidPlan("blocks must be nonempty".into()));
        }
        for (bi, block) in blocks.iter().enumerate() {
            if block.len() != k {
                return Err(Error::InvalidPlan(format!(
                    "block {bi} has {} runs, expected {k}",
                    block.len()
                )));
            }
            for run in block {
                if run.len() != m {
                    return Err(Error::InvalidPlan(format!(
                        "run in block {bi} has {} coordinates, expected {m}",
                        run.len()
                    )));
                }
                for (fi, (&level, factor)) in run.iter().zip(&factors).enumerate() {
                    if factor.level_index(level).is_none() {
                        return Err(Error::InvalidPlan(format!(
                            "level {level} of factor {fi} ({}) is not declared",
                            factor.name
                        )));
                    }
                }
            }
        }
        Ok(Self { factors, blocks, provenance: String::new() })
    }

    /// Plan whose factors all range over Z_s (with ∞ when `with_inf`),
    /// named `names`, from blocks of integer-or-∞ runs.
    pub fn cyclic(s: u32, with_inf: bool, names: &[&str], blocks: Vec<Block>) -> Result<Self> {
        let factors = names.iter().map(|n| Factor::cyclic(*n, s, with_inf)).collect();
        Self::new(factors, blocks)
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn factor(&self, i: usize) -> Result<&Factor> {
        self.factors.get(i).ok_or(Error::IndexOutOfRange { index: i, len: self.factors.len() })
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_size(&self) -> usize {
        self.blocks[0].len()
    }

    pub fn num_runs(&self) -> usize {
        self.num_blocks() * self.block_size()
    }

    pub fn runs(&self) -> impl Iterator<Item = (usize, &Run)> + '_ {
        self.blocks.iter().enumerate().flat_map(|(b, block)| block.iter().map(move |r| (b, r)))
    }

    /// Levels of factor `i` that occur in some run.
    pub fn levels_present(&self, i: usize) -> BTreeSet<Level> {
        self.runs().map(|(_, r)| r[i]).collect()
    }

    pub fn rename_factors<S: Into<String>>(&self, names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() != self.num_factors() {
            return Err(Error::DimensionMismatch { expected: self.num_factors(), found: names.len() });
        }
        let factors = self.factors.iter().zip(names).map(|(f, n)| f.renamed(n)).collect();
        Ok(Self { factors, ..self.clone() })
    }

    /// Exact incidence counts. Matrix rows and columns follow each factor's
    /// declared level order.
    pub fn incidence(&self) -> IncidenceSet {
        let m = self.num_factors();
        let sizes: Vec<usize> = self.factors.iter().map(Factor::num_levels).collect();
        let mut n: Vec<Vec<IntMatrix>> =
            (0..m).map(|i| (0..m).map(|j| IntMatrix::zeros(sizes[i], sizes[j])).collect()).collect();
        let mut l: Vec<IntMatrix> = sizes.iter().map(|&s| IntMatrix::zeros(s, self.num_blocks())).collect();
        let mut idx = vec![0usize; m];
        for (b, run) in self.runs() {
            for (i, (&level, factor)) in run.iter().zip(&self.factors).enumerate() {
                idx[i] = factor.level_index(level).expect("validated on construction");
                l[i][(idx[i], b)] += 1;
            }
            for i in 0..m {
                for j in 0..m {
                    n[i][j][(idx[i], idx[j])] += 1;
                }
            }
        }
        let r = (0..m).map(|i| n[i][i].diagonal()).collect();
        IncidenceSet { n, l, r }
    }

    /// Develops every block over the shift group: blocks
    /// `B + u·1` for `u` in Z_s (or GF(s) for field factors), outer loop over
    /// `u` ascending, inner over the original block order. ∞ is fixed.
    ///
    /// Factors that are labels or a smaller cyclic group with all finite
    /// levels below `s` are read as Z_s.
    pub fn oplus(&self, s: u32) -> Result<Self> {
        let mut factors = self.factors.clone();
        for (i, f) in factors.iter_mut().enumerate() {
            match f.kind {
                LevelKind::Cyclic(t) if t == s => {}
                LevelKind::Field(q) if q == s => {}
                LevelKind::Field(_) => {
                    return Err(Error::ShapeMismatch(format!(
                        "factor {i} ranges over GF({}) and cannot be developed over {s} shifts",
                        f.levels.iter().filter(|l| **l != Level::Inf).count()
                    )))
                }
                LevelKind::Cyclic(_) | LevelKind::Labels => {
                    if let Some(&level) = f.levels.iter().find(|l| matches!(l, Level::Finite(u) if *u >= s)) {
                        return Err(Error::LevelOutOfRange { factor: i, level });
                    }
                    let with_inf = f.levels.contains(&Level::Inf);
                    *f = Factor::cyclic(f.name.clone(), s, with_inf);
                }
            }
        }
        let rules = shift_rules(&factors)?;
        let mut blocks = Vec::with_capacity(self.num_blocks() * s as usize);
        for u in 0..s {
            for block in &self.blocks {
                blocks.push(shift_block(block, &rules, |_| u));
            }
        }
        Ok(Self { factors, blocks, provenance: format!("{} (+) Z_{s}", self.provenance) })
    }

    /// Blocks `B + v` for `v` in `shifts`, outer loop over `shifts`, inner over
    /// blocks. Duplicate shift vectors produce duplicate blocks.
    pub fn add_along(&self, shifts: &[ShiftVector]) -> Result<Self> {
        let rules = shift_rules(&self.factors)?;
        for v in shifts {
            if v.0.len() != self.num_factors() {
                return Err(Error::DimensionMismatch { expected: self.num_factors(), found: v.0.len() });
            }
            for (i, (&u, rule)) in v.0.iter().zip(&rules).enumerate() {
                if !rule.accepts(u) {
                    return Err(Error::ShiftOutOfRange { factor: i, shift: u });
                }
            }
        }
        let mut blocks = Vec::with_capacity(self.num_blocks() * shifts.len());
        for v in shifts {
            for block in &self.blocks {
                blocks.push(shift_block(block, &rules, |i| v.0[i]));
            }
        }
        Ok(Self {
            factors: self.factors.clone(),
            blocks,
            provenance: format!("{} + V[{}]", self.provenance, shifts.len()),
        })
    }

    /// Juxtaposes the factors of `self` and `other`: the `j`th run of block
    /// `i` is the concatenation of the two plans' `j`th runs of block `i`.
    pub fn join(&self, other: &Self) -> Result<Self> {
        if self.num_blocks() != other.num_blocks() || self.block_size() != other.block_size() {
            return Err(Error::ShapeMismatch(format!(
                "cannot join {}x{} blocks with {}x{}",
                self.num_blocks(),
                self.block_size(),
                other.num_blocks(),
                other.block_size()
            )));
        }
        let factors = self.factors.iter().chain(&other.factors).cloned().collect();
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(b1, b2)| b1.iter().zip(b2).map(|(x, y)| x.iter().chain(y).copied().collect()).collect())
            .collect();
        Ok(Self { factors, blocks, provenance: format!("[{} | {}]", self.provenance, other.provenance) })
    }

    /// `t`-fold join with itself. Factor `F` of copy `c` is named `F#c`,
    /// copies numbered from 1; `power(1)` is the plan itself.
    pub fn power(&self, t: usize) -> Result<Self> {
        self.power_from(t, 1)
    }

    /// As [`Plan::power`] with copies numbered from `first`.
    pub fn power_from(&self, t: usize, first: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidPlan("power needs t >= 1".into()));
        }
        if t == 1 {
            return Ok(self.clone());
        }
        let mut factors = Vec::with_capacity(self.num_factors() * t);
        for c in 0..t {
            for f in &self.factors {
                factors.push(f.renamed(format!("{}#{}", f.name, first + c)));
            }
        }
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|r| r.iter().copied().cycle().take(r.len() * t).collect()).collect())
            .collect();
        Ok(Self { factors, blocks, provenance: format!("({})^{t}", self.provenance) })
    }

    /// Pools the blocks of two plans with the same factor count and block
    /// size: blocks of `self` first, then `other`; each factor's level set
    /// becomes the union of the two.
    pub fn union_merge(&self, other: &Self) -> Result<Self> {
        if self.num_factors() != other.num_factors() || self.block_size() != other.block_size() {
            return Err(Error::ShapeMismatch(format!(
                "cannot merge {} factors on blocks of {} with {} factors on blocks of {}",
                self.num_factors(),
                self.block_size(),
                other.num_factors(),
                other.block_size()
            )));
        }
        let factors = self
            .factors
            .iter()
            .zip(&other.factors)
            .map(|(f1, f2)| {
                if f1.kind == f2.kind && f1.levels == f2.levels {
                    f1.clone()
                } else {
                    Factor::labels(f1.name.clone(), f1.levels.iter().chain(&f2.levels).copied())
                }
            })
            .collect();
        let blocks = self.blocks.iter().chain(&other.blocks).cloned().collect();
        Ok(Self { factors, blocks, provenance: format!("{} U {}", self.provenance, other.provenance) })
    }

    /// Rewrites every run pointwise. Each map must be total on its factor's
    /// declared levels; the new level set is the image. Cyclic and field
    /// factors keep their kind only when the image is the whole group.
    pub fn map_levels(&self, maps: &[LevelMap]) -> Result<Self> {
        if maps.len() != self.num_factors() {
            return Err(Error::DimensionMismatch { expected: self.num_factors(), found: maps.len() });
        }
        let mut factors = Vec::with_capacity(self.num_factors());
        for (i, (f, map)) in self.factors.iter().zip(maps).enumerate() {
            let mut image = BTreeSet::new();
            for &level in &f.levels {
                image.insert(map.get(level).ok_or(Error::UnmappedLevel { factor: i, level })?);
            }
            let image: Vec<Level> = image.into_iter().collect();
            factors.push(if image == f.levels {
                f.clone()
            } else {
                Factor::labels(f.name.clone(), image)
            });
        }
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|r| r.iter().zip(maps).map(|(&l, m)| m.get(l).expect("checked above")).collect())
                    .collect()
            })
            .collect();
        Ok(Self { factors, blocks, provenance: format!("map({})", self.provenance) })
    }

    /// Applies `map` to every factor (identity where it is silent).
    pub fn relabel_all(&self, map: &LevelMap) -> Result<Self> {
        let maps: Vec<LevelMap> = self.factors.iter().map(|f| map.extended_by_identity(f.levels())).collect();
        self.map_levels(&maps)
    }
}

/// `H ◇ P₀`: the `q`-fold power of `p0` developed along the rows of the
/// `p × q` array `h`; row `i` shifts every factor of copy `j` by `h[i][j]`.
/// The result has `b·p` blocks (outer loop over rows of `h`) and `m·q`
/// factors.
pub fn diamond<R: AsRef<[u32]>>(h: &[R], p0: &Plan) -> Result<Plan> {
    let q = h.first().map(|r| r.as_ref().len()).ok_or_else(|| Error::InvalidArray("empty shift array".into()))?;
    if q == 0 {
        return Err(Error::InvalidArray("shift array has no columns".into()));
    }
    let m = p0.num_factors();
    let mut shifts = Vec::with_capacity(h.len());
    for row in h {
        let row = row.as_ref();
        if row.len() != q {
            return Err(Error::DimensionMismatch { expected: q, found: row.len() });
        }
        shifts.push(ShiftVector(row.iter().flat_map(|&x| core::iter::repeat(x).take(m)).collect()));
    }
    let powered = p0.power(q)?;
    let plan = powered.add_along(&shifts)?;
    Ok(plan.with_provenance(format!("H[{}x{q}] <> {}", h.len(), p0.provenance)))
}

/// Per-factor shift amounts. ∞ absorbs every shift.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ShiftVector(pub Vec<u32>);

impl ShiftVector {
    pub fn zero(m: usize) -> Self {
        Self(vec![0; m])
    }

    /// `u·1_m`.
    pub fn constant(m: usize, u: u32) -> Self {
        Self(vec![u; m])
    }
}

/// A level relabelling for one factor.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LevelMap(BTreeMap<Level, Level>);

impl LevelMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn identity(levels: &[Level]) -> Self {
        Self(levels.iter().map(|&l| (l, l)).collect())
    }

    pub fn with(mut self, from: impl Into<Level>, to: impl Into<Level>) -> Self {
        self.0.insert(from.into(), to.into());
        self
    }

    /// Exchanges two levels.
    pub fn swap(a: u32, b: u32) -> Self {
        Self::new().with(a, b).with(b, a)
    }

    pub fn get(&self, level: Level) -> Option<Level> {
        self.0.get(&level).copied()
    }

    pub fn extended_by_identity(&self, levels: &[Level]) -> Self {
        let mut out = Self::identity(levels);
        out.0.extend(self.0.iter().map(|(&a, &b)| (a, b)));
        out
    }
}

impl FromIterator<(Level, Level)> for LevelMap {
    fn from_iter<I: IntoIterator<Item = (Level, Level)>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

enum ShiftRule {
    Cyclic(u32),
    Field(Field),
    Fixed,
}

impl ShiftRule {
    fn accepts(&self, u: u32) -> bool {
        match self {
            ShiftRule::Cyclic(s) => u < *s,
            ShiftRule::Field(f) => f.contains(u),
            ShiftRule::Fixed => u == 0,
        }
    }

    fn apply(&self, level: Level, u: u32) -> Level {
        match (level, self) {
            (Level::Inf, _) => Level::Inf,
            (Level::Finite(x), ShiftRule::Cyclic(s)) => Level::Finite((x + u) % s),
            (Level::Finite(x), ShiftRule::Field(f)) => Level::Finite(f.add(x, u)),
            (l, ShiftRule::Fixed) => l,
        }
    }
}

fn shift_rules(factors: &[Factor]) -> Result<Vec<ShiftRule>> {
    let mut fields: BTreeMap<u32, Field> = BTreeMap::new();
    factors
        .iter()
        .map(|f| {
            Ok(match f.kind {
                LevelKind::Cyclic(s) => ShiftRule::Cyclic(s),
                LevelKind::Field(q) => {
                    if !fields.contains_key(&q) {
                        fields.insert(q, Field::new(u64::from(q))?);
                    }
                    ShiftRule::Field(fields[&q].clone())
                }
                LevelKind::Labels => ShiftRule::Fixed,
            })
        })
        .collect()
}

fn shift_block(block: &Block, rules: &[ShiftRule], shift: impl Fn(usize) -> u32) -> Block {
    block
        .iter()
        .map(|run| run.iter().enumerate().map(|(i, &l)| rules[i].apply(l, shift(i))).collect())
        .collect()
}

/// Factor-versus-factor and factor-versus-block incidence of a plan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceSet {
    n: Vec<Vec<IntMatrix>>,
    l: Vec<IntMatrix>,
    r: Vec<Vec<i64>>,
}

impl IncidenceSet {
    /// `N_ij`: runs with level `p` on factor `i` and `q` on factor `j`.
    pub fn n(&self, i: usize, j: usize) -> &IntMatrix {
        &self.n[i][j]
    }

    /// `L_i`: runs in block `j` with level `p` on factor `i`.
    pub fn l(&self, i: usize) -> &IntMatrix {
        &self.l[i]
    }

    /// Replication vector of factor `i`.
    pub fn r(&self, i: usize) -> &[i64] {
        &self.r[i]
    }

    pub fn num_factors(&self) -> usize {
        self.l.len()
    }
}

impl fmt::Display for Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.factors.iter().map(|x| x.name.len()).max().unwrap_or(0);
        for (i, factor) in self.factors.iter().enumerate() {
            write!(f, "{:width$} |", factor.name)?;
            for block in &self.blocks {
                f.write_str(" ")?;
                let cell: Vec<String> = block.iter().map(|r| r[i].to_string()).collect();
                f.write_str(&cell.join(" "))?;
                f.write_str(" |")?;
            }
            if i + 1 < self.factors.len() {
                f.write_str("\n")?;
            }
        }
        Ok(())
    }
}
