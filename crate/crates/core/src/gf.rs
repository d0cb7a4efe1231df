//! Prime-power Galois fields, quadratic-residue cosets and order-2
//! cyclotomy numbers.
//!
//! Elements are addressed by a canonical index `0..q`: the element
//! `c_0 + c_1 x + … + c_{e-1} x^{e-1}` (coefficients mod `p`) has index
//! `c_0 + c_1 p + … + c_{e-1} p^{e-1}`. Index 0 is the additive zero and
//! index 1 the multiplicative identity. For prime `q` the index is the
//! residue itself.
//!
//! The modulus is the monic irreducible polynomial of degree `e` whose
//! lower coefficients have the smallest index, and the primitive element
//! is the smallest index generating the multiplicative group. Both choices
//! are fixed so that everything built on a field is reproducible.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;
/// Fields below this order carry log/antilog tables.
const TABLE_LIMIT: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
struct LogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// The Galois field GF(p^e).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    p: u32,
    e: u32,
    q: u32,
    /// Coefficients `c_0..=c_e` of the modulus, `c_e = 1`.
    modulus: Vec<u32>,
    primitive: u32,
    tables: Option<LogTables>,
}

/// Splits `q` as `p^e`, or `None` when `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = smallest_prime_factor(q);
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

fn smallest_prime_factor(n: u64) -> u64 {
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 1;
    }
    n
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while n > 1 {
        let p = smallest_prime_factor(n);
        out.push(p);
        while n % p == 0 {
            n /= p;
        }
    }
    out
}

pub fn is_prime_power(q: u64) -> bool {
    prime_power(q).is_some()
}

impl Field {
    pub fn new(q: u64) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > MAX_ORDER {
            return Err(Error::FieldTooLarge(q));
        }
        let (p, q) = (p as u32, q as u32);
        let modulus = if e == 1 { vec![0, 1] } else { lowest_irreducible(p, e) };
        let mut field = Self { p, e, q, modulus, primitive: 1, tables: None };
        field.primitive = field.find_primitive();
        if q < TABLE_LIMIT {
            let mut exp = Vec::with_capacity(q as usize - 1);
            let mut log = vec![0; q as usize];
            let mut x = 1;
            for k in 0..q - 1 {
                exp.push(x);
                log[x as usize] = k;
                x = field.poly_mul(x, field.primitive);
            }
            field.tables = Some(LogTables { exp, log });
        }
        Ok(field)
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    /// Coefficients of the defining polynomial, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The designated primitive element α.
    pub fn primitive(&self) -> u32 {
        self.primitive
    }

    pub fn elements(&self) -> core::ops::Range<u32> {
        0..self.q
    }

    pub fn nonzero(&self) -> core::ops::Range<u32> {
        1..self.q
    }

    pub fn contains(&self, x: u32) -> bool {
        x < self.q
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            return (a + b) % self.p;
        }
        self.digitwise(a, b, |x, y| (x + y) % self.p)
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.e == 1 {
            return (self.p - a) % self.p;
        }
        self.digitwise(a, 0, |x, _| (self.p - x) % self.p)
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => {
                let k = (t.log[a as usize] + t.log[b as usize]) % (self.q - 1);
                t.exp[k as usize]
            }
            None => self.poly_mul(a, b),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        Some(match &self.tables {
            Some(t) => t.exp[((self.q - 1 - t.log[a as usize]) % (self.q - 1)) as usize],
            None => self.pow(a, u64::from(self.q) - 2),
        })
    }

    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: u32, mut n: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// α^k for any integer `k`, negative exponents included.
    pub fn alpha_pow(&self, k: i64) -> u32 {
        let order = i64::from(self.q - 1);
        let k = k.rem_euclid(order) as u64;
        match &self.tables {
            Some(t) => t.exp[k as usize],
            None => self.pow(self.primitive, k),
        }
    }

    /// Discrete logarithm to base α; `None` for zero.
    pub fn log(&self, a: u32) -> Option<u32> {
        if a == 0 || a >= self.q {
            return None;
        }
        match &self.tables {
            Some(t) => Some(t.log[a as usize]),
            None => {
                let mut x = 1;
                for k in 0..self.q - 1 {
                    if x == a {
                        return Some(k);
                    }
                    x = self.poly_mul(x, self.primitive);
                }
                None
            }
        }
    }

    /// True for nonzero squares.
    pub fn is_square(&self, a: u32) -> bool {
        if a == 0 {
            return false;
        }
        if self.p == 2 {
            return true;
        }
        self.pow(a, u64::from((self.q - 1) / 2)) == 1
    }

    fn digitwise(&self, a: u32, b: u32, op: impl Fn(u32, u32) -> u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.e {
            out += op(a % self.p, b % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut d = Vec::with_capacity(self.e as usize);
        for _ in 0..self.e {
            d.push(a % self.p);
            a /= self.p;
        }
        d
    }

    fn from_digits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn poly_mul(&self, a: u32, b: u32) -> u32 {
        let p = u64::from(self.p);
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; da.len() + db.len()];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u64::from(x) * u64::from(y)) % p;
            }
        }
        let e = self.e as usize;
        for deg in (e..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            for (i, &m) in self.modulus.iter().enumerate() {
                let idx = deg - e + i;
                prod[idx] = (prod[idx] + (p - c) * u64::from(m)) % p;
            }
        }
        let low: Vec<u32> = prod[..e].iter().map(|&c| c as u32).collect();
        self.from_digits(&low)
    }

    fn find_primitive(&self) -> u32 {
        let order = u64::from(self.q - 1);
        let primes = distinct_prime_factors(order);
        (1..self.q)
            .find(|&a| primes.iter().all(|&r| self.pow_slow(a, order / r) != 1))
            .expect("multiplicative group of a finite field is cyclic")
    }

    fn pow_slow(&self, a: u32, mut n: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.poly_mul(acc, base);
            }
            base = self.poly_mul(base, base);
            n >>= 1;
        }
        acc
    }
}

/// Polynomials over Z_p as coefficient vectors, constant term first.
fn poly_rem(mut num: Vec<u32>, den: &[u32], p: u32) -> Vec<u32> {
    let dd = den.len() - 1;
    let lead_inv = mod_inv(den[dd], p);
    while num.len() > dd {
        let top = *num.last().unwrap();
        if top != 0 {
            let f = u64::from(top) * u64::from(lead_inv) % u64::from(p);
            let shift = num.len() - 1 - dd;
            for (i, &c) in den.iter().enumerate() {
                let sub = (f * u64::from(c) % u64::from(p)) as u32;
                num[shift + i] = (num[shift + i] + p - sub) % p;
            }
        }
        num.pop();
    }
    num
}

fn mod_inv(a: u32, p: u32) -> u32 {
    (1..p).find(|&x| u64::from(a) * u64::from(x) % u64::from(p) == 1).unwrap()
}

fn monic(p: u32, degree: u32, lower: u32) -> Vec<u32> {
    let mut c = Vec::with_capacity(degree as usize + 1);
    let mut rest = lower;
    for _ in 0..degree {
        c.push(rest % p);
        rest /= p;
    }
    c.push(1);
    c
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let degree = (f.len() - 1) as u32;
    for d in 1..=degree / 2 {
        for lower in 0..p.pow(d) {
            let g = monic(p, d, lower);
            if poly_rem(f.to_vec(), &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn lowest_irreducible(p: u32, e: u32) -> Vec<u32> {
    (0..p.pow(e))
        .map(|lower| monic(p, e, lower))
        .find(|f| f[0] != 0 && is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

/// Nonzero squares and non-squares of an odd-order field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetPair {
    /// Nonzero squares, ascending.
    pub c0: Vec<u32>,
    /// Nonzero non-squares, ascending.
    pub c1: Vec<u32>,
    /// `(q - 1) / 2`.
    pub t: u32,
}

pub fn cosets(f: &Field) -> Result<CosetPair> {
    if f.characteristic() == 2 {
        return Err(Error::EvenCharacteristic(2));
    }
    let mut is_sq = vec![false; f.order() as usize];
    for x in f.nonzero() {
        is_sq[f.mul(x, x) as usize] = true;
    }
    let (c0, c1) = f.nonzero().partition(|&x| is_sq[x as usize]);
    Ok(CosetPair { c0, c1, t: (f.order() - 1) / 2 })
}

/// Order-2 cyclotomy numbers `(i, j)`, indexed `[i][j]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CyclotomyTable(pub [[u64; 2]; 2]);

impl CyclotomyTable {
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.0[i][j]
    }

    pub fn total(&self) -> u64 {
        self.0.iter().flatten().sum()
    }
}

/// Counts pairs `(k, l)`, `0 <= k, l < q-1`, with `1 + α^k = α^l`,
/// `k ≡ i` and `l ≡ j (mod 2)`, by exhaustive enumeration.
pub fn cyclotomy_number(f: &Field, i: u8, j: u8) -> Result<u64> {
    if f.characteristic() == 2 {
        return Err(Error::EvenCharacteristic(2));
    }
    let n = f.order() - 1;
    let powers: Vec<u32> = (0..n).map(|k| f.alpha_pow(i64::from(k))).collect();
    let mut count = 0;
    for k in 0..n {
        let lhs = f.add(1, powers[k as usize]);
        for l in 0..n {
            if k % 2 == u32::from(i) && l % 2 == u32::from(j) && powers[l as usize] == lhs {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// All four brute-force cyclotomy numbers.
pub fn cyclotomy_numbers(f: &Field) -> Result<CyclotomyTable> {
    let mut table = [[0; 2]; 2];
    for i in 0..2u8 {
        for j in 0..2u8 {
            table[i as usize][j as usize] = cyclotomy_number(f, i, j)?;
        }
    }
    Ok(CyclotomyTable(table))
}

/// Closed form for the order-2 cyclotomy numbers in terms of `t = (q-1)/2`.
pub fn cyclotomy_formula(t: u64) -> CyclotomyTable {
    assert!(t >= 1, "t must be positive");
    if t % 2 == 1 {
        let a = (t - 1) / 2;
        CyclotomyTable([[a, (t + 1) / 2], [a, a]])
    } else {
        let h = t / 2;
        CyclotomyTable([[h - 1, h], [h, h]])
    }
}

/// Multiset of field elements.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Multiset {
    counts: BTreeMap<u32, usize>,
}

impl Multiset {
    pub fn insert(&mut self, x: u32) {
        *self.counts.entry(x).or_default() += 1;
    }

    pub fn count(&self, x: u32) -> usize {
        self.counts.get(&x).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, usize)> + '_ {
        self.counts.iter().map(|(&x, &c)| (x, c))
    }
}

impl FromIterator<u32> for Multiset {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        let mut m = Self::default();
        for x in iter {
            m.insert(x);
        }
        m
    }
}

/// All `|a|·|b|` ordered differences `x - y`.
pub fn difference_multiset(f: &Field, a: &[u32], b: &[u32]) -> Multiset {
    a.iter().flat_map(|&x| b.iter().map(move |&y| f.sub(x, y))).collect()
}
