//! Exact verification of plan properties.
//!
//! Factors `i` and `j` are orthogonal through the block factor (OTB) when
//! `k·N_ij = L_i·L_jᵀ`. A plan is a POTB when every pair is OTB, and a PIOTB
//! with respect to a partition of its factors when every pair from distinct
//! classes is OTB. Connectedness is decided by the rank of each factor's
//! information matrix adjusted for blocks and all other factors, computed in
//! exact rational arithmetic.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::{int_rank, rational, RatMatrix};
use crate::matrix::IntMatrix;
use crate::plan::{IncidenceSet, Plan};

/// Outcome of the OTB test for one factor pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OtbStatus {
    pub i: usize,
    pub j: usize,
    pub holds: bool,
    /// `k·N_ij − L_i·L_jᵀ`.
    pub residual: IntMatrix,
}

fn otb_from_incidence(inc: &IncidenceSet, k: usize, i: usize, j: usize) -> OtbStatus {
    let lhs = inc.n(i, j).scale(k as i64);
    let rhs = inc.l(i).mul(&inc.l(j).transpose());
    let residual = lhs.sub(&rhs);
    OtbStatus { i, j, holds: residual.is_zero(), residual }
}

pub fn check_otb(p: &Plan, i: usize, j: usize) -> Result<OtbStatus> {
    let m = p.num_factors();
    for idx in [i, j] {
        if idx >= m {
            return Err(Error::IndexOutOfRange { index: idx, len: m });
        }
    }
    if i == j {
        return Err(Error::ShapeMismatch(format!("OTB needs two distinct factors, got ({i}, {i})")));
    }
    Ok(otb_from_incidence(&p.incidence(), p.block_size(), i, j))
}

fn all_pairs(p: &Plan, inc: &IncidenceSet) -> Vec<OtbStatus> {
    let m = p.num_factors();
    let k = p.block_size();
    (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).map(|(i, j)| otb_from_incidence(inc, k, i, j)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PotbCheck {
    pub holds: bool,
    pub failing: Vec<(usize, usize)>,
}

/// True iff every unordered factor pair is OTB.
pub fn check_potb(p: &Plan) -> PotbCheck {
    let failing: Vec<_> = all_pairs(p, &p.incidence()).into_iter().filter(|s| !s.holds).map(|s| (s.i, s.j)).collect();
    PotbCheck { holds: failing.is_empty(), failing }
}

fn classes_from_pairs(m: usize, pairs: &[OtbStatus]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut root = x;
        while parent[root] != root {
            root = parent[root];
        }
        let mut x = x;
        while parent[x] != root {
            let next = parent[x];
            parent[x] = root;
            x = next;
        }
        root
    }
    for s in pairs.iter().filter(|s| !s.holds) {
        let (a, b) = (find(&mut parent, s.i), find(&mut parent, s.j));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; m];
    for x in 0..m {
        let r = find(&mut parent, x);
        if slot[r] == usize::MAX {
            slot[r] = classes.len();
            classes.push(Vec::new());
        }
        classes[slot[r]].push(x);
    }
    classes
}

/// The finest partition of the factors witnessing inter-class orthogonality:
/// connected components of the graph of non-OTB pairs, ordered by their
/// smallest member.
pub fn derive_classes(p: &Plan) -> Vec<Vec<usize>> {
    classes_from_pairs(p.num_factors(), &all_pairs(p, &p.incidence()))
}

/// Block-design type of a factor-versus-block incidence matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockDesignClass {
    Bibd { v: usize, b: usize, r: i64, k: i64, lambda: i64 },
    /// Levels split into `groups` (level indices); pairs within a group
    /// concur `lambda1` times, pairs across groups `lambda2` times.
    Gdd { groups: Vec<Vec<usize>>, r: i64, k: i64, lambda1: i64, lambda2: i64 },
    EquireplicateOther { r: i64 },
    Other,
}

impl BlockDesignClass {
    pub fn is_bibd(&self) -> bool {
        matches!(self, BlockDesignClass::Bibd { .. })
    }
}

impl fmt::Display for BlockDesignClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockDesignClass::Bibd { v, b, r, k, lambda } => write!(f, "BIBD(v={v},b={b},r={r},k={k},lambda={lambda})"),
            BlockDesignClass::Gdd { groups, lambda1, lambda2, .. } => {
                write!(f, "GDD({} groups of {}, lambda1={lambda1}, lambda2={lambda2})", groups.len(), groups[0].len())
            }
            BlockDesignClass::EquireplicateOther { r } => write!(f, "equireplicate(r={r})"),
            BlockDesignClass::Other => f.write_str("other"),
        }
    }
}

/// Classifies the design whose incidence is `l` (levels × blocks) with
/// constant block size `k`.
pub fn classify_block_design(l: &IntMatrix, k: i64) -> Result<BlockDesignClass> {
    for (column, sum) in l.col_sums().into_iter().enumerate() {
        if sum != k {
            return Err(Error::ColumnSumMismatch { column, sum, expected: k });
        }
    }
    let v = l.rows();
    let conc = l.gram();
    let r = conc[(0, 0)];
    if v == 0 || conc.diagonal().iter().any(|&x| x != r) || r == 0 {
        return Ok(BlockDesignClass::Other);
    }
    if v < 2 {
        return Ok(BlockDesignClass::EquireplicateOther { r });
    }
    let off: BTreeSet<i64> = (0..v).flat_map(|a| (0..v).filter(move |&b| b != a).map(move |b| (a, b))).map(|(a, b)| conc[(a, b)]).collect();
    let values: Vec<i64> = off.into_iter().collect();
    match values.as_slice() {
        [lambda] => Ok(BlockDesignClass::Bibd { v, b: l.cols(), r, k, lambda: *lambda }),
        [lo, hi] => {
            for (within, across) in [(*lo, *hi), (*hi, *lo)] {
                if let Some(groups) = group_partition(&conc, within) {
                    return Ok(BlockDesignClass::Gdd { groups, r, k, lambda1: within, lambda2: across });
                }
            }
            Ok(BlockDesignClass::EquireplicateOther { r })
        }
        _ => Ok(BlockDesignClass::EquireplicateOther { r }),
    }
}

/// Partition of levels into at least two equal groups of size at least two
/// in which the concurrence is `within` exactly for same-group pairs.
fn group_partition(conc: &IntMatrix, within: i64) -> Option<Vec<Vec<usize>>> {
    let v = conc.rows();
    let mut assigned = vec![false; v];
    let mut groups = Vec::new();
    for a in 0..v {
        if assigned[a] {
            continue;
        }
        let group: Vec<usize> = (0..v).filter(|&b| b == a || conc[(a, b)] == within).collect();
        for &x in &group {
            if assigned[x] {
                return None;
            }
            for &y in &group {
                if x != y && conc[(x, y)] != within {
                    return None;
                }
            }
            assigned[x] = true;
        }
        groups.push(group);
    }
    let size = groups[0].len();
    (groups.len() >= 2 && size >= 2 && groups.iter().all(|g| g.len() == size)).then_some(groups)
}

/// `(f, g)` with `N·Nᵀ = Nᵀ·N = f·I + g·J`, if such integers exist.
/// For a 1×1 matrix the split is taken with `g = 0`.
pub fn check_pergola(n: &IntMatrix) -> Option<(i64, i64)> {
    if !n.is_square() || n.rows() == 0 {
        return None;
    }
    let nnt = n.gram();
    let ntn = n.transpose().gram();
    if nnt != ntn {
        return None;
    }
    let s = n.rows();
    if s == 1 {
        return Some((nnt[(0, 0)], 0));
    }
    let g = nnt[(0, 1)];
    let d = nnt[(0, 0)];
    for a in 0..s {
        for b in 0..s {
            if nnt[(a, b)] != if a == b { d } else { g } {
                return None;
            }
        }
    }
    Some((d - g, g))
}

/// Offsets of each factor's coordinates in the stacked level indicators.
fn offsets(p: &Plan) -> Vec<usize> {
    let mut acc = 0;
    let mut out = Vec::with_capacity(p.num_factors() + 1);
    for f in p.factors() {
        out.push(acc);
        acc += f.num_levels();
    }
    out.push(acc);
    out
}

/// Information matrix of all factors adjusted for blocks (and the mean),
/// `Xᵀ(I − P_D)X` for the stacked level indicators `X` and block
/// indicators `D`, accumulated from the runs.
pub fn block_adjusted_information(p: &Plan) -> RatMatrix {
    let off = offsets(p);
    let dim = off[p.num_factors()];
    let k = p.block_size() as i64;
    // k·XᵀX − Σ_b t_b t_bᵀ, where t_b = Xᵀ(indicator of block b)
    let mut scaled = IntMatrix::zeros(dim, dim);
    let coords = |run: &[crate::plan::Level]| -> Vec<usize> {
        run.iter()
            .zip(p.factors())
            .enumerate()
            .map(|(i, (&l, f))| off[i] + f.level_index(l).expect("validated plan"))
            .collect()
    };
    for block in p.blocks() {
        let mut totals = vec![0i64; dim];
        for run in block {
            let c = coords(run);
            for &a in &c {
                totals[a] += 1;
                for &b in &c {
                    scaled[(a, b)] += k;
                }
            }
        }
        let support: Vec<usize> = (0..dim).filter(|&a| totals[a] != 0).collect();
        for &a in &support {
            for &b in &support {
                scaled[(a, b)] -= totals[a] * totals[b];
            }
        }
    }
    RatMatrix::from(&scaled).scale(&(rational(1) / rational(k)))
}

/// `C_{ij;B}`: the `(i, j)` block of [`block_adjusted_information`].
pub fn cross_information(p: &Plan, i: usize, j: usize) -> Result<RatMatrix> {
    let m = p.num_factors();
    for idx in [i, j] {
        if idx >= m {
            return Err(Error::IndexOutOfRange { index: idx, len: m });
        }
    }
    let off = offsets(p);
    let rows: Vec<usize> = (off[i]..off[i + 1]).collect();
    let cols: Vec<usize> = (off[j]..off[j + 1]).collect();
    Ok(block_adjusted_information(p).select(&rows, &cols))
}

fn check_replication(p: &Plan, inc: &IncidenceSet) -> Result<()> {
    for (i, f) in p.factors().iter().enumerate() {
        if let Some(pos) = inc.r(i).iter().position(|&x| x == 0) {
            return Err(Error::DegenerateModel { factor: i, level: f.levels()[pos] });
        }
    }
    Ok(())
}

/// `C_{i;ī}`: information on factor `i` adjusted for blocks and every
/// other factor.
pub fn adjusted_information(p: &Plan, i: usize) -> Result<RatMatrix> {
    if i >= p.num_factors() {
        return Err(Error::IndexOutOfRange { index: i, len: p.num_factors() });
    }
    check_replication(p, &p.incidence())?;
    let off = offsets(p);
    let keep: Vec<usize> = (off[i]..off[i + 1]).collect();
    Ok(block_adjusted_information(p).psd_schur_complement(&keep))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connectivity {
    /// Rank of `C_{i;ī}` for each factor.
    pub ranks: Vec<usize>,
    /// `s_i − 1` for each factor.
    pub required: Vec<usize>,
    pub connected: bool,
}

/// Ranks of every factor's fully adjusted information matrix. The plan is
/// connected iff each rank is `s_i − 1`.
pub fn check_connected(p: &Plan) -> Result<Connectivity> {
    check_replication(p, &p.incidence())?;
    let info = block_adjusted_information(p);
    let off = offsets(p);
    let ranks: Vec<usize> = (0..p.num_factors())
        .map(|i| {
            let keep: Vec<usize> = (off[i]..off[i + 1]).collect();
            info.psd_schur_complement(&keep).rank()
        })
        .collect();
    let required: Vec<usize> = p.factors().iter().map(|f| f.num_levels() - 1).collect();
    let connected = ranks == required;
    Ok(Connectivity { ranks, required, connected })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Saturation {
    /// `n − b`.
    pub within_block_df: usize,
    /// `Σ (s_i − 1)` over levels actually present.
    pub treatment_df: usize,
    pub saturated: bool,
}

pub fn check_saturated(p: &Plan) -> Saturation {
    let within_block_df = p.num_runs() - p.num_blocks();
    let treatment_df = (0..p.num_factors()).map(|i| p.levels_present(i).len() - 1).sum();
    Saturation { within_block_df, treatment_df, saturated: within_block_df == treatment_df }
}

/// A machine-checkable property declared for a plan.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Claim {
    Potb,
    /// Inter-class orthogonality for the given partition of factor indices.
    Piotb(Vec<Vec<usize>>),
    Connected,
    Saturated,
    /// Connected POTB in which every factor forms a BIBD with the blocks.
    Balanced,
    /// Every factor forms a GDD with these concurrences.
    Gdd { lambda1: i64, lambda2: i64 },
    BlockShape { b: usize, k: usize },
    Factors(usize),
    /// Every factor declares this many levels.
    Levels(usize),
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::Potb => f.write_str("potb"),
            Claim::Piotb(classes) => {
                let parts: Vec<String> = classes
                    .iter()
                    .map(|c| c.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
                    .collect();
                write!(f, "piotb({})", parts.join("|"))
            }
            Claim::Connected => f.write_str("connected"),
            Claim::Saturated => f.write_str("saturated"),
            Claim::Balanced => f.write_str("balanced"),
            Claim::Gdd { lambda1, lambda2 } => write!(f, "gdd({lambda1},{lambda2})"),
            Claim::BlockShape { b, k } => write!(f, "block_shape({b},{k})"),
            Claim::Factors(m) => write!(f, "factors({m})"),
            Claim::Levels(s) => write!(f, "levels({s})"),
        }
    }
}

impl core::str::FromStr for Claim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid claim {s:?}"));
        let (head, args) = match s.find('(') {
            Some(pos) if s.ends_with(')') => (&s[..pos], Some(&s[pos + 1..s.len() - 1])),
            Some(_) => return Err(bad()),
            None => (s, None),
        };
        let ints = |a: &str| -> Result<Vec<i64>> {
            a.split(',').map(|x| x.trim().parse::<i64>().map_err(|_| bad())).collect()
        };
        let usize_of = |x: i64| usize::try_from(x).map_err(|_| bad());
        match (head, args) {
            ("potb", None) => Ok(Claim::Potb),
            ("connected", None) => Ok(Claim::Connected),
            ("saturated", None) => Ok(Claim::Saturated),
            ("balanced", None) => Ok(Claim::Balanced),
            ("piotb", Some(a)) => {
                let classes = a
                    .split('|')
                    .map(|c| ints(c)?.into_iter().map(usize_of).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                Ok(Claim::Piotb(classes))
            }
            ("gdd", Some(a)) => match ints(a)?.as_slice() {
                [l1, l2] => Ok(Claim::Gdd { lambda1: *l1, lambda2: *l2 }),
                _ => Err(bad()),
            },
            ("block_shape", Some(a)) => match ints(a)?.as_slice() {
                [b, k] => Ok(Claim::BlockShape { b: usize_of(*b)?, k: usize_of(*k)? }),
                _ => Err(bad()),
            },
            ("factors", Some(a)) => match ints(a)?.as_slice() {
                [m] => Ok(Claim::Factors(usize_of(*m)?)),
                _ => Err(bad()),
            },
            ("levels", Some(a)) => match ints(a)?.as_slice() {
                [s] => Ok(Claim::Levels(usize_of(*s)?)),
                _ => Err(bad()),
            },
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorReport {
    pub name: String,
    pub declared_levels: usize,
    pub present_levels: usize,
    pub design: core::result::Result<BlockDesignClass, Error>,
    /// Rank of `L_i`.
    pub incidence_rank: usize,
    /// The factor carries no information once blocks are removed.
    pub confounded_with_blocks: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PergolaEntry {
    pub i: usize,
    pub j: usize,
    pub fg: Option<(i64, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimOutcome {
    pub claim: Claim,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub blocks: usize,
    pub block_size: usize,
    pub runs: usize,
    pub otb: Vec<OtbStatus>,
    pub classes: Vec<Vec<usize>>,
    pub factors: Vec<FactorReport>,
    pub connectivity: core::result::Result<Connectivity, Error>,
    pub saturation: Saturation,
    pub pergola: Vec<PergolaEntry>,
    pub claims: Vec<ClaimOutcome>,
}

impl VerificationReport {
    pub fn all_claims_pass(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }

    pub fn is_potb(&self) -> bool {
        self.otb.iter().all(|s| s.holds)
    }

    pub fn failing_pairs(&self) -> Vec<(usize, usize)> {
        self.otb.iter().filter(|s| !s.holds).map(|s| (s.i, s.j)).collect()
    }

    fn otb(&self, i: usize, j: usize) -> bool {
        let (a, b) = (i.min(j), i.max(j));
        self.otb.iter().find(|s| s.i == a && s.j == b).map_or(true, |s| s.holds)
    }
}

/// Runs every check on `p` and evaluates `claims` against the results.
pub fn full_report(p: &Plan, claims: &[Claim]) -> VerificationReport {
    let inc = p.incidence();
    let k = p.block_size();
    let otb = all_pairs(p, &inc);
    let classes = classes_from_pairs(p.num_factors(), &otb);
    let info = block_adjusted_information(p);
    let off = offsets(p);
    let factors = p
        .factors()
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let idx: Vec<usize> = (off[i]..off[i + 1]).collect();
            FactorReport {
                name: f.name.clone(),
                declared_levels: f.num_levels(),
                present_levels: p.levels_present(i).len(),
                design: classify_block_design(inc.l(i), k as i64),
                incidence_rank: int_rank(inc.l(i)),
                confounded_with_blocks: info.select(&idx, &idx).is_zero(),
            }
        })
        .collect::<Vec<_>>();
    let connectivity = check_connected(p);
    let saturation = check_saturated(p);
    let m = p.num_factors();
    let pergola = (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .filter(|&(i, j)| p.factors()[i].num_levels() == p.factors()[j].num_levels())
        .map(|(i, j)| PergolaEntry { i, j, fg: check_pergola(inc.n(i, j)) })
        .collect();
    let mut report = VerificationReport {
        blocks: p.num_blocks(),
        block_size: k,
        runs: p.num_runs(),
        otb,
        classes,
        factors,
        connectivity,
        saturation,
        pergola,
        claims: Vec::new(),
    };
    report.claims = claims.iter().map(|c| evaluate(p, &report, c)).collect();
    report
}

fn evaluate(p: &Plan, r: &VerificationReport, claim: &Claim) -> ClaimOutcome {
    let (passed, detail) = match claim {
        Claim::Potb => {
            let failing = r.failing_pairs();
            (failing.is_empty(), format!("{} non-OTB pairs {:?}", failing.len(), failing))
        }
        Claim::Piotb(classes) => piotb_outcome(p, r, classes),
        Claim::Connected => match &r.connectivity {
            Ok(c) => (c.connected, format!("ranks {:?}, required {:?}", c.ranks, c.required)),
            Err(e) => (false, e.to_string()),
        },
        Claim::Saturated => {
            let s = r.saturation;
            (s.saturated, format!("n-b = {}, sum(s_i-1) = {}", s.within_block_df, s.treatment_df))
        }
        Claim::Balanced => {
            let potb = r.is_potb();
            let connected = matches!(&r.connectivity, Ok(c) if c.connected);
            let non_bibd: Vec<usize> = r
                .factors
                .iter()
                .enumerate()
                .filter(|(_, f)| !matches!(&f.design, Ok(d) if d.is_bibd()))
                .map(|(i, _)| i)
                .collect();
            (
                potb && connected && non_bibd.is_empty(),
                format!("potb {potb}, connected {connected}, non-BIBD factors {non_bibd:?}"),
            )
        }
        Claim::Gdd { lambda1, lambda2 } => {
            let bad: Vec<usize> = r
                .factors
                .iter()
                .enumerate()
                .filter(|(_, f)| {
                    !matches!(&f.design, Ok(BlockDesignClass::Gdd { lambda1: a, lambda2: b, .. }) if a == lambda1 && b == lambda2)
                })
                .map(|(i, _)| i)
                .collect();
            (bad.is_empty(), format!("factors not GDD({lambda1},{lambda2}): {bad:?}"))
        }
        Claim::BlockShape { b, k } => (
            r.blocks == *b && r.block_size == *k,
            format!("{} blocks of size {}", r.blocks, r.block_size),
        ),
        Claim::Factors(m) => (p.num_factors() == *m, format!("{} factors", p.num_factors())),
        Claim::Levels(s) => {
            let counts: BTreeSet<usize> = p.factors().iter().map(|f| f.num_levels()).collect();
            (counts.len() == 1 && counts.contains(s), format!("level counts {counts:?}"))
        }
    };
    ClaimOutcome { claim: claim.clone(), passed, detail }
}

fn piotb_outcome(p: &Plan, r: &VerificationReport, classes: &[Vec<usize>]) -> (bool, String) {
    let m = p.num_factors();
    let mut owner = vec![usize::MAX; m];
    for (c, class) in classes.iter().enumerate() {
        for &x in class {
            if x >= m || owner[x] != usize::MAX {
                return (false, format!("classes do not partition the {m} factors"));
            }
            owner[x] = c;
        }
    }
    if owner.contains(&usize::MAX) {
        return (false, format!("classes do not partition the {m} factors"));
    }
    let mut cross_fail = Vec::new();
    let mut within_non_otb = 0;
    for i in 0..m {
        for j in i + 1..m {
            let holds = r.otb(i, j);
            if owner[i] != owner[j] && !holds {
                cross_fail.push((i, j));
            }
            if owner[i] == owner[j] && !holds {
                within_non_otb += 1;
            }
        }
    }
    (
        cross_fail.is_empty(),
        format!("{} cross-class non-OTB pairs {cross_fail:?}; {within_non_otb} within-class non-OTB pairs", cross_fail.len()),
    )
}
