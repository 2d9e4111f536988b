//! Finite fields of prime-power order, the discrete-logarithm matrix, and the
//! optimal offset family built from it.
//!
//! Field elements are encoded as integers `0..q`: the element
//! `c_0 + c_1 x + … + c_{k-1} x^{k-1}` is `Σ c_i p^i`. The canonical
//! ordering `a_1, …, a_q` is this encoding in increasing order, so `a_1 = 0`
//! and `a_2 = 1`.

use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::shortest_vectors;
use crate::rational::{int, rat, Rat, RatVec};

/// Returns `(p, k)` with `q = p^k`, or `None` when `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

/// Polynomial over GF(p), coefficients low degree first.
type Poly = Vec<u64>;

fn poly_trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Poly {
    let mut r = poly_trim(a.to_vec());
    let m = poly_trim(m.to_vec());
    let lead_inv = mod_inv(*m.last().expect("nonzero modulus"), p);
    while r.len() >= m.len() {
        let shift = r.len() - m.len();
        let f = r.last().unwrap() * lead_inv % p;
        for (i, c) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - f * c % p) % p;
        }
        r = poly_trim(r);
    }
    r
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // p is prime: a^(p-2)
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Monic polynomial of degree `deg` whose lower coefficients encode `index`.
fn monic_from_index(index: u64, deg: u32, p: u64) -> Poly {
    let mut coeffs = Vec::with_capacity(deg as usize + 1);
    let mut rest = index;
    for _ in 0..deg {
        coeffs.push(rest % p);
        rest /= p;
    }
    coeffs.push(1);
    coeffs
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = (f.len() - 1) as u32;
    (1..=deg / 2).all(|d| {
        (0..p.pow(d)).all(|idx| !poly_rem(f, &monic_from_index(idx, d, p), p).is_empty())
    })
}

/// GF(p^k) with exponent and logarithm tables for a fixed primitive element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldTable {
    pub p: u64,
    pub k: u32,
    pub q: u64,
    /// Monic irreducible modulus, low degree first (length `k + 1`).
    pub modulus: Vec<u64>,
    /// `a_1, …, a_q` as element encodings; `a_1 = 0`.
    pub elems: Vec<u64>,
    pub alpha: u64,
    log: Vec<Option<u64>>,
    exp: Vec<u64>,
}

impl FieldTable {
    /// The field of order `q` with the lexicographically smallest monic
    /// irreducible modulus, the smallest primitive element, and the
    /// canonical element ordering.
    pub fn new(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        let modulus = (0..p.pow(k))
            .map(|idx| monic_from_index(idx, k, p))
            .find(|f| k == 1 || is_irreducible(f, p))
            .expect("an irreducible polynomial of every degree exists");
        let mut table = FieldTable {
            p,
            k,
            q,
            modulus,
            elems: (0..q).collect(),
            alpha: 0,
            log: Vec::new(),
            exp: Vec::new(),
        };
        let alpha = (1..q)
            .find(|&a| table.order_of(a) == q - 1)
            .expect("the multiplicative group is cyclic");
        table.set_alpha(alpha)?;
        Ok(table)
    }

    /// Same field with a different primitive element.
    pub fn with_alpha(mut self, alpha: u64) -> Result<Self> {
        self.set_alpha(alpha)?;
        Ok(self)
    }

    /// Same field with a different ordering `a_1, …, a_q`; `a_1` must be 0.
    pub fn with_ordering(mut self, elems: Vec<u64>) -> Result<Self> {
        let mut sorted = elems.clone();
        sorted.sort_unstable();
        if sorted != (0..self.q).collect::<Vec<_>>() || elems.first() != Some(&0) {
            return Err(Error::Precondition(
                "ordering must be a permutation of the field starting with 0".into(),
            ));
        }
        self.elems = elems;
        Ok(self)
    }

    fn set_alpha(&mut self, alpha: u64) -> Result<()> {
        if alpha == 0 || alpha >= self.q || self.order_of(alpha) != self.q - 1 {
            return Err(Error::Precondition(format!("{alpha} is not a primitive element")));
        }
        let n = (self.q - 1) as usize;
        let mut exp = Vec::with_capacity(n);
        let mut log = vec![None; self.q as usize];
        let mut x = 1;
        for m in 0..n {
            exp.push(x);
            log[x as usize] = Some(m as u64);
            x = self.mul_slow(x, alpha);
        }
        self.alpha = alpha;
        self.exp = exp;
        self.log = log;
        Ok(())
    }

    fn digits(&self, a: u64) -> Poly {
        let mut v = Vec::with_capacity(self.k as usize);
        let mut rest = a;
        for _ in 0..self.k {
            v.push(rest % self.p);
            rest /= self.p;
        }
        v
    }

    fn encode(&self, digits: &[u64]) -> u64 {
        digits.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Poly = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.encode(&sum)
    }

    pub fn neg(&self, a: u64) -> u64 {
        let d: Poly = self.digits(a).iter().map(|x| (self.p - x) % self.p).collect();
        self.encode(&d)
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    fn mul_slow(&self, a: u64, b: u64) -> u64 {
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; da.len() + db.len()];
        for (i, x) in da.iter().enumerate() {
            for (j, y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        let mut r = poly_rem(&prod, &self.modulus, self.p);
        r.resize(self.k as usize, 0);
        self.encode(&r)
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match (self.log(a), self.log(b)) {
            (Some(x), Some(y)) => self.exp[((x + y) % (self.q - 1)) as usize],
            _ => 0,
        }
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        if e == 0 {
            return 1;
        }
        match self.log(a) {
            Some(x) => self.exp[((x as u128 * e as u128) % (self.q as u128 - 1)) as usize],
            None => 0,
        }
    }

    fn order_of(&self, a: u64) -> u64 {
        let mut x = a;
        let mut m = 1;
        while x != 1 {
            x = self.mul_slow(x, a);
            m += 1;
            if m > self.q {
                return 0;
            }
        }
        m
    }

    /// Discrete logarithm to base `alpha`, in `[0, q - 2]`; `None` for zero.
    pub fn log(&self, a: u64) -> Option<u64> {
        self.log.get(a as usize).copied().flatten()
    }

    /// `alpha^m` for `m` in `[0, q - 2]`.
    pub fn exp(&self, m: u64) -> u64 {
        self.exp[(m % (self.q - 1)) as usize]
    }

    /// Human-readable form of an element, e.g. `x+1`.
    pub fn element_name(&self, a: u64) -> String {
        if self.k == 1 {
            return a.to_string();
        }
        let terms: Vec<String> = self
            .digits(a)
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

/// The `(n+1) × (n+1)` matrix of discrete logarithms `M[i][j] = log(a_i - a_j)`,
/// zero on the diagonal and in the last row and column. Indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogMatrix {
    pub n: usize,
    pub entries: Vec<Vec<u64>>,
}

impl LogMatrix {
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i][j]
    }

    /// Whether `(i, j)` is forced to zero (diagonal or last row/column).
    pub fn is_fixed_zero(&self, i: usize, j: usize) -> bool {
        i == j || i == self.n || j == self.n
    }
}

pub fn log_matrix(field: &FieldTable) -> LogMatrix {
    let n = field.q as usize;
    let mut entries = vec![vec![0u64; n + 1]; n + 1];
    for (i, row) in entries.iter_mut().take(n).enumerate() {
        for (j, entry) in row.iter_mut().take(n).enumerate() {
            if i != j {
                let diff = field.sub(field.elems[i], field.elems[j]);
                *entry = field.log(diff).expect("distinct elements differ by a unit");
            }
        }
    }
    LogMatrix { n, entries }
}

/// Whether row `i` minus row `j`, outside columns `i` and `j`, hits every
/// residue modulo `n - 1` exactly once.
pub fn verify_row_difference(m: &LogMatrix, i: usize, j: usize) -> bool {
    if i == j || i > m.n || j > m.n || m.n < 2 {
        return false;
    }
    let modulus = (m.n - 1) as i64;
    let mut seen = vec![false; m.n - 1];
    for r in (0..=m.n).filter(|&r| r != i && r != j) {
        let d = (m.get(i, r) as i64 - m.get(j, r) as i64).rem_euclid(modulus) as usize;
        if seen[d] {
            return false;
        }
        seen[d] = true;
    }
    seen.iter().all(|&s| s)
}

/// The `n + 1` offsets `u^(i)` and directions `v^(i)` defining the line
/// families `L_i = u^(i) + A_n + R v^(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OffsetFamily {
    pub n: usize,
    pub u: Vec<RatVec>,
    pub v: Vec<RatVec>,
}

impl OffsetFamily {
    /// Validates `u^(i)_i = 0`, `u^(i)_n = 0` and `Σ u^(i) = 0` for each `i`.
    pub fn new(n: usize, u: Vec<RatVec>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Dimension { got: n, what: "offset family needs n >= 2" });
        }
        if u.len() != n + 1 {
            return Err(Error::Precondition(format!("expected {} offsets, got {}", n + 1, u.len())));
        }
        for (i, ui) in u.iter().enumerate() {
            if ui.dim() != n + 1 {
                return Err(Error::Dimension { got: ui.dim(), what: "offset must have dimension n + 1" });
            }
            if !ui.is_sum_zero() {
                return Err(Error::NotSumZero(ui.to_string()));
            }
            if ui[i] != int(0) || ui[n] != int(0) {
                return Err(Error::Precondition(format!(
                    "offset {i} must vanish at its own index and at the last index"
                )));
            }
        }
        Ok(OffsetFamily { n, u, v: shortest_vectors(n)? })
    }

    /// The classical hexastix offsets in 3-space.
    pub fn hexastix() -> Self {
        let u = vec![
            RatVec::from_fracs(&[(0, 1), (1, 4), (-1, 4), (0, 1)]),
            RatVec::from_fracs(&[(-1, 4), (0, 1), (1, 4), (0, 1)]),
            RatVec::from_fracs(&[(1, 4), (-1, 4), (0, 1), (0, 1)]),
            RatVec::zeros(4),
        ];
        OffsetFamily::new(3, u).expect("hexastix offsets are valid")
    }

    /// All-zero offsets; every pair of families meets.
    pub fn zero(n: usize) -> Result<Self> {
        OffsetFamily::new(n, vec![RatVec::zeros(n + 1); n + 1])
    }

    /// The finite-field construction for prime-power `n`.
    pub fn construct(n: usize) -> Result<Self> {
        let field = FieldTable::new(n as u64)?;
        offsets_from_matrix(&log_matrix(&field))
    }
}

/// `u^(i)_j = (M_ij + 1/2)/(n-1) - 1/2` off the fixed-zero pattern, else 0.
///
/// Requires every row pair to pass [`verify_row_difference`]. The rows are
/// not re-centred: each must already sum to zero.
pub fn offsets_from_matrix(m: &LogMatrix) -> Result<OffsetFamily> {
    let n = m.n;
    if n < 2 {
        return Err(Error::Dimension { got: n, what: "log matrix needs n >= 2" });
    }
    for i in 0..=n {
        for j in i + 1..=n {
            if !verify_row_difference(m, i, j) {
                return Err(Error::Precondition(format!(
                    "rows {i} and {j} do not cover every residue mod {}",
                    n - 1
                )));
            }
        }
    }
    let denom = (n - 1) as i64;
    let u: Vec<RatVec> = (0..=n)
        .map(|i| {
            (0..=n)
                .map(|j| {
                    if m.is_fixed_zero(i, j) {
                        Rat::from_integer(0.into())
                    } else {
                        rat(2 * m.get(i, j) as i64 + 1, 2 * denom) - rat(1, 2)
                    }
                })
                .collect()
        })
        .collect();
    if let Some((i, ui)) = u.iter().enumerate().find(|(_, ui)| !ui.is_sum_zero()) {
        return Err(Error::Invariant(format!("offset {i} = {ui} does not sum to zero")));
    }
    OffsetFamily::new(n, u)
}

impl fmt::Display for LogMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}
