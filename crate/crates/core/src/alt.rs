//! Lines along the `2^(n-1)` body diagonals `(±1, …, ±1, 1)` of the integer
//! lattice, offset per direction, and a search for offsets in `{0, 1/2}^n`
//! that keep lines of different directions far apart.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{nearest_sq_dist, proj_t, LatticeRef};
use crate::par;
use crate::rational::{common_denominator, int, rat, Rat, RatVec};

pub const MIN_N: usize = 4;
pub const MAX_N: usize = 8;

fn check_n(n: usize) -> Result<()> {
    if !(MIN_N..=MAX_N).contains(&n) {
        return Err(Error::OutOfRange(format!("n must be in {MIN_N}..={MAX_N}, got {n}")));
    }
    Ok(())
}

/// Sign bit pattern of direction `m`: bit `k` set means coordinate `k` is -1.
fn direction_from_mask(n: usize, mask: u32) -> Vec<i64> {
    (0..n).map(|k| if mask >> k & 1 == 1 { -1 } else { 1 }).collect()
}

/// All `2^(n-1)` directions with last coordinate `+1`, starting with `(1, …, 1)`.
pub fn alt_directions(n: usize) -> Result<Vec<Vec<i64>>> {
    check_n(n)?;
    Ok((0..1u32 << (n - 1)).map(|m| direction_from_mask(n, m)).collect())
}

/// A full direction set with one offset per direction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AltConfig {
    pub n: usize,
    pub directions: Vec<Vec<i64>>,
    pub offsets: Vec<RatVec>,
}

impl AltConfig {
    pub fn new(n: usize, directions: Vec<Vec<i64>>, offsets: Vec<RatVec>) -> Result<Self> {
        let cfg = AltConfig { n, directions, offsets };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        check_n(self.n)?;
        let n = self.n;
        if self.directions.len() != 1 << (n - 1) || self.offsets.len() != self.directions.len() {
            return Err(Error::Precondition(format!(
                "expected {} directions and offsets, got {} and {}",
                1 << (n - 1),
                self.directions.len(),
                self.offsets.len()
            )));
        }
        for (d, u) in self.directions.iter().zip(&self.offsets) {
            if d.len() != n || u.dim() != n {
                return Err(Error::Dimension { got: d.len().min(u.dim()), what: "direction/offset length must be n" });
            }
            if d.iter().any(|&s| s != 1 && s != -1) || d[n - 1] != 1 {
                return Err(Error::Precondition(format!("bad direction {d:?}")));
            }
        }
        let mut sorted = self.directions.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != self.directions.len() {
            return Err(Error::Precondition("directions must be distinct".into()));
        }
        Ok(())
    }

    /// Zero offsets for every direction.
    pub fn zero(n: usize) -> Result<Self> {
        let directions = alt_directions(n)?;
        let offsets = vec![RatVec::zeros(n); directions.len()];
        AltConfig::new(n, directions, offsets)
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }
}

/// The two components of a pair's offset difference and their combined
/// squared distance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitWitness {
    pub i: usize,
    pub j: usize,
    /// Coordinates where the directions agree.
    pub w_prime: RatVec,
    /// Coordinates where they differ.
    pub w_double_prime: RatVec,
    pub sq_dist: Rat,
}

/// Squared distance to `A*_{m-1}` after projecting a length-`m` vector onto
/// `H_{m-1}`; an empty component contributes nothing.
fn split_component(w: &RatVec) -> Result<Rat> {
    if w.dim() == 0 {
        return Ok(Rat::zero());
    }
    let t = proj_t(w)?;
    Ok(nearest_sq_dist(&t, LatticeRef::a_star(w.dim() - 1))?.0.into_inner())
}

/// Minimum squared distance between lines of directions `i` and `j`.
pub fn alt_pair_sq_dist(cfg: &AltConfig, i: usize, j: usize) -> Result<SplitWitness> {
    for k in [i, j] {
        if k >= cfg.len() {
            return Err(Error::IndexOutOfRange { index: k, len: cfg.len() });
        }
    }
    if i == j {
        return Err(Error::SameIndex(i));
    }
    let (vi, vj) = (&cfg.directions[i], &cfg.directions[j]);
    let mut agree = Vec::new();
    let mut differ = Vec::new();
    for k in 0..cfg.n {
        let w = int(vi[k]) * (&cfg.offsets[i][k] - &cfg.offsets[j][k]);
        if vi[k] == vj[k] {
            agree.push(w);
        } else {
            differ.push(w);
        }
    }
    let (w_prime, w_double_prime) = (RatVec::new(agree), RatVec::new(differ));
    let sq_dist = split_component(&w_prime)? + split_component(&w_double_prime)?;
    Ok(SplitWitness { i, j, w_prime, w_double_prime, sq_dist })
}

/// Minimum of [`alt_pair_sq_dist`] over all unordered pairs.
pub fn alt_min_sq_dist(cfg: &AltConfig) -> Result<Rat> {
    cfg.validate()?;
    let pairs: Vec<(usize, usize)> = (0..cfg.len())
        .flat_map(|i| (i + 1..cfg.len()).map(move |j| (i, j)))
        .collect();
    let dists: Result<Vec<Rat>> = par::map(&pairs, |&(i, j)| alt_pair_sq_dist(cfg, i, j).map(|w| w.sq_dist))
        .into_iter()
        .collect();
    dists?
        .into_iter()
        .min()
        .ok_or_else(|| Error::Precondition("need at least two directions".into()))
}

/// Closed-form offsets for `n = 4`:
/// `(v2/4 - v1/6, -v2(3 v3 + 1)/12, v1/4, 0)`.
pub fn alt_u_n4(v: &[i64]) -> Result<RatVec> {
    if v.len() != 4 {
        return Err(Error::Dimension { got: v.len(), what: "n = 4 formula needs a 4-vector" });
    }
    let (v1, v2, v3) = (v[0], v[1], v[2]);
    Ok(RatVec::new(vec![
        rat(v2, 4) - rat(v1, 6),
        rat(-v2 * (3 * v3 + 1), 12),
        rat(v1, 4),
        Rat::zero(),
    ]))
}

/// The `n = 4` configuration with [`alt_u_n4`] offsets.
pub fn alt_formula_config() -> AltConfig {
    let directions = alt_directions(4).expect("n = 4 in range");
    let offsets = directions.iter().map(|v| alt_u_n4(v).expect("length 4")).collect();
    AltConfig::new(4, directions, offsets).expect("formula configuration is valid")
}

/// Best known squared minimum distance for each supported `n`.
pub fn reference_sq_dist(n: usize) -> Option<Rat> {
    match n {
        4 => Some(rat(5, 36)),
        5 | 6 => Some(rat(1, 6)),
        7 | 8 => Some(rat(3, 16)),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchParams {
    /// Independent climbs; the budget is split evenly between them.
    pub restarts: usize,
    /// Moves without improvement before a climb re-randomizes.
    pub patience: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams { restarts: 8, patience: 20_000 }
    }
}

/// Pair scores for offsets in `{0, 1/2}^n`, scaled to integers.
///
/// A component of length `m` with `c` halves has a squared distance that
/// depends only on `(m, c)`, so every pair score is a table lookup.
struct BinaryScorer {
    n: usize,
    dir_masks: Vec<u32>,
    /// `value_index[a][x][y]`: index into `values` for `a` agreeing
    /// coordinates, `x` halves among them and `y` halves among the rest.
    value_index: Vec<Vec<Vec<usize>>>,
    values: Vec<Rat>,
}

impl BinaryScorer {
    fn new(n: usize) -> Result<Self> {
        let mut table: Vec<Vec<Rat>> = vec![vec![Rat::zero()]];
        for m in 1..=n {
            let row = (0..=m)
                .map(|c| {
                    let w: RatVec = (0..m).map(|k| if k < c { rat(1, 2) } else { Rat::zero() }).collect();
                    split_component(&w)
                })
                .collect::<Result<Vec<_>>>()?;
            table.push(row);
        }
        let denom: BigInt = common_denominator(table.iter().flatten());
        let scaled = |r: &Rat| (r * Rat::from_integer(denom.clone())).to_integer().to_u64().expect("small");
        let mut keys: Vec<u64> = Vec::new();
        let mut raw = vec![vec![vec![0u64; n + 1]; n + 1]; n + 1];
        for a in 1..n {
            for x in 0..=a {
                for y in 0..=n - a {
                    let v = scaled(&table[a][x]) + scaled(&table[n - a][y]);
                    raw[a][x][y] = v;
                    keys.push(v);
                }
            }
        }
        keys.sort_unstable();
        keys.dedup();
        let lookup: HashMap<u64, usize> = keys.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let value_index = raw
            .iter()
            .map(|xs| xs.iter().map(|ys| ys.iter().map(|v| lookup.get(v).copied().unwrap_or(0)).collect()).collect())
            .collect();
        let values = keys.iter().map(|&k| Rat::new(BigInt::from(k), denom.clone())).collect();
        Ok(BinaryScorer { n, dir_masks: (0..1u32 << (n - 1)).collect(), value_index, values })
    }

    fn pair(&self, i: usize, j: usize, u: &[u32]) -> usize {
        let full = (1u32 << self.n) - 1;
        let agree = !(self.dir_masks[i] ^ self.dir_masks[j]) & full;
        let diff = u[i] ^ u[j];
        let a = agree.count_ones() as usize;
        self.value_index[a][(diff & agree).count_ones() as usize][(diff & !agree & full).count_ones() as usize]
    }

    fn histogram(&self, u: &[u32]) -> Vec<usize> {
        let mut hist = vec![0; self.values.len()];
        for i in 0..u.len() {
            for j in i + 1..u.len() {
                hist[self.pair(i, j, u)] += 1;
            }
        }
        hist
    }

    fn adjust(&self, hist: &mut [usize], u: &[u32], i: usize, add: bool) {
        for j in (0..u.len()).filter(|&j| j != i) {
            let v = self.pair(i, j, u);
            if add {
                hist[v] += 1;
            } else {
                hist[v] -= 1;
            }
        }
    }
}

/// `(minimum value index, number of pairs at the minimum)`; larger minimum,
/// then fewer pairs at it, is better.
fn score(hist: &[usize]) -> (usize, usize) {
    let m = hist.iter().position(|&c| c > 0).unwrap_or(hist.len());
    (m, hist.get(m).copied().unwrap_or(0))
}

fn better(a: (usize, usize), b: (usize, usize)) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.1 < b.1)
}

/// Offsets `u_m = L(m)` for the GF(2)-linear map with columns `cols`. Pair
/// differences are then `L(d_i ^ d_j)`, so only `2^(n-1) - 1` distinct
/// pair scores exist.
fn linear_offsets(cols: &[u32], dirs: usize) -> Vec<u32> {
    let mut u = vec![0u32; dirs];
    for m in 1..dirs {
        u[m] = u[m & (m - 1)] ^ cols[m.trailing_zeros() as usize];
    }
    u
}

impl BinaryScorer {
    fn linear_histogram(&self, cols: &[u32]) -> Vec<usize> {
        let u = linear_offsets(cols, self.dir_masks.len());
        let mut hist = vec![0; self.values.len()];
        for m in 1..u.len() {
            hist[self.pair(0, m, &u)] += 1;
        }
        hist
    }
}

/// Hill climbing on the columns of a linear offset map.
fn climb_linear(scorer: &BinaryScorer, rng: &mut ChaCha8Rng, moves: usize, patience: usize) -> Vec<u32> {
    let full = (1u32 << scorer.n) - 1;
    let randomize = |rng: &mut ChaCha8Rng| -> Vec<u32> { (0..scorer.n - 1).map(|_| rng.random::<u32>() & full).collect() };
    let mut cols = randomize(rng);
    let mut current = score(&scorer.linear_histogram(&cols));
    let mut best = (cols.clone(), current);
    let mut stale = 0;
    for _ in 0..moves {
        let k = rng.random_range(0..cols.len());
        let bit = 1u32 << rng.random_range(0..scorer.n);
        cols[k] ^= bit;
        let next = score(&scorer.linear_histogram(&cols));
        if better(current, next) {
            cols[k] ^= bit;
        } else {
            current = next;
        }
        if better(current, best.1) {
            best = (cols.clone(), current);
            stale = 0;
        } else {
            stale += 1;
            if stale >= patience {
                cols = randomize(rng);
                current = score(&scorer.linear_histogram(&cols));
                stale = 0;
            }
        }
    }
    best.0
}

/// One restart: half the moves on linear maps, the rest as single-entry flips
/// starting from the best linear configuration.
fn climb(scorer: &BinaryScorer, seed: u64, moves: usize, patience: usize) -> (Vec<u32>, (usize, usize)) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dirs = scorer.dir_masks.len();
        let linear_moves = moves / 2;
    let mut u = linear_offsets(&climb_linear(scorer, &mut rng, linear_moves, patience), dirs);
    let mut hist = scorer.histogram(&u);
    let mut current = score(&hist);
    let mut best = (u.clone(), current);
    let mut stale = 0;
    for _ in linear_moves..moves {
        let i = rng.random_range(1..dirs);
        let bit = 1u32 << rng.random_range(0..scorer.n);
        scorer.adjust(&mut hist, &u, i, false);
        u[i] ^= bit;
        scorer.adjust(&mut hist, &u, i, true);
        let next = score(&hist);
        if better(current, next) {
            scorer.adjust(&mut hist, &u, i, false);
            u[i] ^= bit;
            scorer.adjust(&mut hist, &u, i, true);
        } else {
            current = next;
        }
        if better(current, best.1) {
            best = (u.clone(), current);
            stale = 0;
        } else {
            stale += 1;
            if stale >= patience {
                u = best.0.clone();
                hist = scorer.histogram(&u);
                current = best.1;
                stale = 0;
            }
        }
    }
    best
}

/// Seeded hill climbing over offsets in `{0, 1/2}^n` (first direction fixed
/// at zero). `budget` is the total number of single-bit moves across all
/// restarts. The returned score is recomputed exactly from the configuration.
pub fn alt_search(n: usize, seed: u64, budget: usize) -> Result<(AltConfig, Rat)> {
    alt_search_with(n, seed, budget, &SearchParams::default())
}

pub fn alt_search_with(n: usize, seed: u64, budget: usize, params: &SearchParams) -> Result<(AltConfig, Rat)> {
    check_n(n)?;
    let scorer = BinaryScorer::new(n)?;
    let restarts = if budget == 0 { 1 } else { params.restarts.clamp(1, budget) };
    let patience = params.patience.max(1);
    let runs = par::map_range(restarts, |r| {
        let moves = budget / restarts + usize::from(r < budget % restarts);
        let run_seed = seed.wrapping_add((r as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        climb(&scorer, run_seed, moves, patience)
    });
    let (u, best) = runs
        .into_iter()
        .reduce(|a, b| if better(b.1, a.1) { b } else { a })
        .expect("at least one restart");
    let directions = alt_directions(n)?;
    let offsets = u
        .iter()
        .map(|&mask| (0..n).map(|k| if mask >> k & 1 == 1 { rat(1, 2) } else { Rat::zero() }).collect())
        .collect();
    let cfg = AltConfig::new(n, directions, offsets)?;
    let exact = alt_min_sq_dist(&cfg)?;
    if exact != scorer.values[best.0] {
        return Err(Error::Invariant(format!(
            "search score {} disagrees with exact recomputation {exact}",
            scorer.values[best.0]
        )));
    }
    Ok((cfg, exact))
}
