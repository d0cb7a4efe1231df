//! Hadamard matrices and strength-2 orthogonal arrays.
//!
//! Arrays are stored runs-as-rows: an `OA(N, m, s, 2)` is `N` rows of `m`
//! symbols from `0..s`. The rows of an array are the shift vectors consumed
//! by [`crate::plan::diamond`].

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gf::{prime_power, Field};

/// Largest array (runs × factors) that the generators will build.
pub const MAX_CELLS: u64 = 1 << 24;

/// A normalized Hadamard matrix: ±1 entries, `H·Hᵀ = n·I`, first row and
/// first column all `+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HadamardMatrix {
    n: usize,
    entries: Vec<i8>,
}

impl HadamardMatrix {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> i8 {
        self.entries[r * self.n + c]
    }

    pub fn row(&self, r: usize) -> &[i8] {
        &self.entries[r * self.n..(r + 1) * self.n]
    }

    /// Checks `H·Hᵀ = n·I` in integer arithmetic.
    pub fn is_hadamard(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let dot: i64 = self.row(i).iter().zip(self.row(j)).map(|(&a, &b)| i64::from(a * b)).sum();
                dot == if i == j { self.n as i64 } else { 0 }
            })
        })
    }

    pub fn is_normalized(&self) -> bool {
        (0..self.n).all(|i| self.get(0, i) == 1 && self.get(i, 0) == 1)
    }

    fn from_rows(rows: Vec<Vec<i8>>) -> Self {
        let n = rows.len();
        Self { n, entries: rows.into_iter().flatten().collect() }
    }

    fn normalize(mut self) -> Self {
        let n = self.n;
        for c in 0..n {
            if self.get(0, c) < 0 {
                for r in 0..n {
                    self.entries[r * n + c] = -self.entries[r * n + c];
                }
            }
        }
        for r in 0..n {
            if self.get(r, 0) < 0 {
                for c in 0..n {
                    self.entries[r * n + c] = -self.entries[r * n + c];
                }
            }
        }
        self
    }
}

/// Hadamard matrix of order `n` from Sylvester doubling, Paley's first
/// construction (`n = q + 1`, `q ≡ 3 mod 4` a prime power) or Kronecker
/// products of reachable orders. Powers of two use Sylvester; otherwise
/// Paley is preferred, then doubling, then the smallest Kronecker split.
pub fn hadamard(n: usize) -> Result<HadamardMatrix> {
    build_hadamard(n).map(|rows| HadamardMatrix::from_rows(rows).normalize()).ok_or(Error::UnsupportedOrder(n))
}

/// True when [`hadamard`] succeeds for `n`.
pub fn hadamard_reachable(n: usize) -> bool {
    build_hadamard(n).is_some()
}

fn build_hadamard(n: usize) -> Option<Vec<Vec<i8>>> {
    match n {
        0 => None,
        1 => Some(vec![vec![1]]),
        2 => Some(vec![vec![1, 1], vec![1, -1]]),
        _ if n % 4 != 0 => None,
        _ if n.is_power_of_two() => build_hadamard(n / 2).map(|h| kronecker(&[vec![1, 1], vec![1, -1]], &h)),
        _ => paley_one(n)
            .or_else(|| build_hadamard(n / 2).map(|h| kronecker(&[vec![1, 1], vec![1, -1]], &h)))
            .or_else(|| {
                (3..)
                    .take_while(|a| a * a <= n)
                    .filter(|a| n % a == 0)
                    .find_map(|a| Some(kronecker(&build_hadamard(a)?, &build_hadamard(n / a)?)))
            }),
    }
}

fn kronecker(a: &[Vec<i8>], b: &[Vec<i8>]) -> Vec<Vec<i8>> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for ra in a {
        for rb in b {
            out.push(ra.iter().flat_map(|&x| rb.iter().map(move |&y| x * y)).collect());
        }
    }
    out
}

fn paley_one(n: usize) -> Option<Vec<Vec<i8>>> {
    let q = n as u64 - 1;
    prime_power(q)?;
    if q % 4 != 3 {
        return None;
    }
    let f = Field::new(q).ok()?;
    let chi = |x: u32| -> i8 {
        if x == 0 {
            0
        } else if f.is_square(x) {
            1
        } else {
            -1
        }
    };
    // H = I + S with S = [[0, 1ᵀ], [-1, Q]], Q the Jacobsthal matrix
    let mut h = vec![vec![0i8; n]; n];
    h[0].fill(1);
    for a in 0..q as u32 {
        let r = a as usize + 1;
        h[r][0] = -1;
        for b in 0..q as u32 {
            h[r][b as usize + 1] = chi(f.sub(a, b));
        }
        h[r][r] += 1;
    }
    Some(h)
}

/// An orthogonal array of strength 2, runs as rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthArray {
    rows: Vec<Vec<u32>>,
    factors: usize,
    s: u32,
    augmented: bool,
}

impl OrthArray {
    /// Wraps rows over `0..s`. Strength is not checked here; see
    /// [`verify_strength2`]. An augmented array must have column 0 zero.
    pub fn new(rows: Vec<Vec<u32>>, s: u32, augmented: bool) -> Result<Self> {
        if s < 2 {
            return Err(Error::InvalidArray(format!("need at least two symbols, got {s}")));
        }
        let factors = rows.first().map(Vec::len).ok_or_else(|| Error::InvalidArray("array has no runs".into()))?;
        if factors == 0 {
            return Err(Error::InvalidArray("array has no columns".into()));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != factors {
                return Err(Error::InvalidArray(format!("run {i} has {} entries, expected {factors}", r.len())));
            }
            if let Some(&x) = r.iter().find(|&&x| x >= s) {
                return Err(Error::InvalidArray(format!("symbol {x} in run {i} is not below {s}")));
            }
            if augmented && r[0] != 0 {
                return Err(Error::InvalidArray(format!("run {i} has nonzero entry in the zero column")));
            }
        }
        Ok(Self { rows, factors, s, augmented })
    }

    pub fn n_runs(&self) -> usize {
        self.rows.len()
    }

    pub fn n_factors(&self) -> usize {
        self.factors
    }

    pub fn symbols(&self) -> u32 {
        self.s
    }

    pub fn strength(&self) -> u32 {
        2
    }

    pub fn is_augmented(&self) -> bool {
        self.augmented
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn get(&self, run: usize, factor: usize) -> u32 {
        self.rows[run][factor]
    }

    /// Prepends a zero column without any strength precondition.
    pub fn with_zero_column(&self) -> Self {
        let rows = self.rows.iter().map(|r| core::iter::once(0).chain(r.iter().copied()).collect()).collect();
        Self { rows, factors: self.factors + 1, s: self.s, augmented: true }
    }

    /// Rows in lexicographic order.
    pub fn sorted(&self) -> Self {
        let mut rows = self.rows.clone();
        rows.sort();
        Self { rows, ..self.clone() }
    }
}

/// Rao's points-versus-hyperplanes array `OA(s^n, (s^n-1)/(s-1), s, 2)`.
///
/// Runs are the vectors `x ∈ GF(s)^n` in index order (coordinate 0 least
/// significant); columns are the projective points `c` whose first nonzero
/// coordinate is 1, in the same order; the entry is `c·x`.
pub fn oa_rao(s: u32, n: u32) -> Result<OrthArray> {
    let field = Field::new(u64::from(s))?;
    if n < 2 {
        return Err(Error::InvalidArray(format!("Rao's construction needs n >= 2, got {n}")));
    }
    let runs = u64::from(s).checked_pow(n).unwrap_or(u64::MAX);
    let cols = (runs - 1) / u64::from(s - 1);
    let cells = runs.saturating_mul(cols);
    if cells > MAX_CELLS {
        return Err(Error::SizeCapExceeded { cells, cap: MAX_CELLS });
    }
    let vector = |mut idx: u64| -> Vec<u32> {
        (0..n)
            .map(|_| {
                let d = (idx % u64::from(s)) as u32;
                idx /= u64::from(s);
                d
            })
            .collect()
    };
    let points: Vec<Vec<u32>> =
        (1..runs).map(vector).filter(|c| c.iter().find(|&&x| x != 0) == Some(&1)).collect();
    debug_assert_eq!(points.len() as u64, cols);
    let rows = (0..runs)
        .map(|i| {
            let x = vector(i);
            points
                .iter()
                .map(|c| c.iter().zip(&x).fold(0, |acc, (&a, &b)| field.add(acc, field.mul(a, b))))
                .collect()
        })
        .collect();
    let oa = OrthArray::new(rows, s, false)?;
    debug_assert!(verify_strength2(&oa).holds);
    Ok(oa)
}

/// `OA(n, n-1, 2, 2)` from a normalized Hadamard matrix: drop the all-ones
/// column, map `+1 → 0` and `-1 → 1`. Rows are returned sorted.
pub fn oa_from_hadamard(h: &HadamardMatrix) -> Result<OrthArray> {
    if !h.is_normalized() {
        return Err(Error::InvalidArray("Hadamard matrix is not normalized".into()));
    }
    if h.order() < 2 {
        return Err(Error::InvalidArray("Hadamard order must be at least 2".into()));
    }
    let rows = (0..h.order())
        .map(|r| h.row(r)[1..].iter().map(|&x| u32::from(x < 0)).collect())
        .collect();
    Ok(OrthArray::new(rows, 2, false)?.sorted())
}

/// `Q(N, m, s)`: the array with a zero column prepended at index 0.
pub fn q_augment(oa: &OrthArray) -> Result<OrthArray> {
    if oa.is_augmented() {
        return Err(Error::AlreadyAugmented);
    }
    let s2 = (oa.symbols() as usize).pow(2);
    if oa.n_factors() < 2 && oa.n_runs() % s2 != 0 {
        return Err(Error::InvalidArray(format!(
            "a single column over {} runs cannot carry strength 2",
            oa.n_runs()
        )));
    }
    let check = verify_strength2(oa);
    if !check.holds {
        return Err(Error::InvalidArray(format!("input is not strength 2: {:?}", check.violation)));
    }
    Ok(oa.with_zero_column())
}

/// Why an array failed [`verify_strength2`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrengthViolation {
    /// The zero column of an augmented array has a nonzero entry.
    ZeroColumn { run: usize },
    /// Columns `cols` do not carry each symbol pair `expected` times.
    /// `expected` is `None` when `N` is not divisible by `s²`.
    PairCounts { cols: (usize, usize), counts: Vec<Vec<u64>>, expected: Option<u64> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrengthCheck {
    pub holds: bool,
    pub violation: Option<StrengthViolation>,
}

/// Checks that every pair of applicable columns carries each of the `s²`
/// symbol pairs exactly `N/s²` times. For an augmented array column 0 is
/// exempt from the pair counts but must be identically zero.
pub fn verify_strength2(a: &OrthArray) -> StrengthCheck {
    let fail = |v| StrengthCheck { holds: false, violation: Some(v) };
    let first = if a.is_augmented() {
        if let Some(run) = a.rows().iter().position(|r| r[0] != 0) {
            return fail(StrengthViolation::ZeroColumn { run });
        }
        1
    } else {
        0
    };
    let s = a.symbols() as usize;
    let n = a.n_runs() as u64;
    let expected = (n % (s * s) as u64 == 0).then_some(n / (s * s) as u64);
    for c1 in first..a.n_factors() {
        for c2 in c1 + 1..a.n_factors() {
            let mut counts = vec![vec![0u64; s]; s];
            for r in a.rows() {
                counts[r[c1] as usize][r[c2] as usize] += 1;
            }
            if expected.is_none() || counts.iter().flatten().any(|&c| Some(c) != expected) {
                return fail(StrengthViolation::PairCounts { cols: (c1, c2), counts, expected });
            }
        }
    }
    StrengthCheck { holds: true, violation: None }
}
