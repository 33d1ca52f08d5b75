//! Ground truth by brute force: enumerate tuples
//! `(σ₀, τ₁, …, τ_b, σ_∞)` in `S(d)` with `σ₀ τ₁ ⋯ τ_b σ_∞ = id`, where
//! `σ₀ ∈ C_μ`, `σ_∞ ∈ C_ν` and the `τ_i` are transpositions.
//!
//! Permutations compose left to right: `(στ)(x) = τ(σ(x))`. Since `σ_∞` is
//! determined by the rest, only `σ₀` and the transpositions are enumerated;
//! `σ_∞ = (σ₀ τ₁ ⋯ τ_b)^{-1}` has the same cycle type as the product.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::characters::CharacterCache;
use crate::error::{HurwitzError, Result};
use crate::hurwitz::{cov_with_transpositions, HurwitzTables};
use crate::partitions::{class_size, partitions_of, Partition};
use crate::rational::{factorial, from_biguint, serialize_exact, Rational};

/// Largest degree the permutation representation supports.
pub const HARD_MAX_D: u32 = 8;

pub const ENV_MAX_D: &str = "HURWITZ_ORACLE_MAX_D";
pub const ENV_MAX_B: &str = "HURWITZ_ORACLE_MAX_B";

/// Scale limits for enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleCaps {
    pub max_d: u32,
    pub max_b: u32,
}

impl Default for OracleCaps {
    fn default() -> Self {
        Self { max_d: 6, max_b: 5 }
    }
}

impl OracleCaps {
    /// Defaults, overridden by `HURWITZ_ORACLE_MAX_D` / `HURWITZ_ORACLE_MAX_B`
    /// when set.
    pub fn from_env() -> Result<Self> {
        let mut caps = Self::default();
        for (name, slot) in [(ENV_MAX_D, &mut caps.max_d), (ENV_MAX_B, &mut caps.max_b)] {
            if let Ok(raw) = std::env::var(name) {
                *slot = raw.trim().parse().map_err(|_| {
                    HurwitzError::InvalidArgument(format!("{name}={raw:?} is not a nonnegative integer"))
                })?;
            }
        }
        Ok(caps)
    }

    pub fn check(&self, d: u32, b: u32) -> Result<()> {
        if d > self.max_d.min(HARD_MAX_D) {
            return Err(HurwitzError::OracleScaleLimit(format!(
                "degree {d} exceeds cap {}",
                self.max_d.min(HARD_MAX_D)
            )));
        }
        if b > self.max_b {
            return Err(HurwitzError::OracleScaleLimit(format!("b = {b} exceeds cap {}", self.max_b)));
        }
        Ok(())
    }
}

/// How `σ₀` ranges over `C_μ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum EnumerationMode {
    /// One fixed representative, weighted by `|C_μ|`.
    #[default]
    Representative,
    /// Every element of `C_μ`. Only allowed for `d ≤ 4`.
    Naive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Perm {
    img: [u8; HARD_MAX_D as usize],
    d: u8,
}

impl Perm {
    fn identity(d: u32) -> Self {
        let mut img = [0u8; HARD_MAX_D as usize];
        for (i, slot) in img.iter_mut().enumerate() {
            *slot = i as u8;
        }
        Self { img, d: d as u8 }
    }

    /// The standard representative `(1 2 … μ₁)(μ₁+1 …)⋯` of `C_μ`.
    fn of_cycle_type(mu: &Partition) -> Self {
        let mut p = Self::identity(mu.size());
        let mut start = 0u8;
        for &len in mu.parts() {
            let len = len as u8;
            for i in 0..len {
                p.img[(start + i) as usize] = start + (i + 1) % len;
            }
            start += len;
        }
        p
    }

    /// `self` followed by the transposition `(i j)`.
    fn then_swap(mut self, i: u8, j: u8) -> Self {
        for x in &mut self.img[..self.d as usize] {
            if *x == i {
                *x = j;
            } else if *x == j {
                *x = i;
            }
        }
        self
    }

    fn cycle_type(&self) -> Partition {
        let d = self.d as usize;
        let mut seen = [false; HARD_MAX_D as usize];
        let mut lens = Vec::new();
        for s in 0..d {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.img[x] as usize;
                len += 1;
            }
            lens.push(len);
        }
        Partition::from_unsorted(&lens)
    }

    /// All permutations of `{0..d}`.
    fn all(d: u32) -> Vec<Self> {
        let mut out = Vec::new();
        let mut cur: Vec<u8> = (0..d as u8).collect();
        permute(&mut cur, 0, &mut |p| {
            let mut perm = Self::identity(d);
            perm.img[..d as usize].copy_from_slice(p);
            out.push(perm);
        });
        out
    }
}

fn permute(v: &mut [u8], k: usize, f: &mut impl FnMut(&[u8])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}

struct UnionFind {
    parent: [u8; HARD_MAX_D as usize],
    components: u32,
}

impl UnionFind {
    fn new(d: u32) -> Self {
        let mut parent = [0u8; HARD_MAX_D as usize];
        for (i, slot) in parent.iter_mut().enumerate() {
            *slot = i as u8;
        }
        Self { parent, components: d }
    }

    fn find(&mut self, mut x: u8) -> u8 {
        while self.parent[x as usize] != x {
            let up = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = up;
            x = up;
        }
        x
    }

    fn union(&mut self, a: u8, b: u8) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra as usize] = rb;
            self.components -= 1;
        }
    }
}

fn transitive(sigma0: &Perm, transpositions: &[(u8, u8)]) -> bool {
    let d = sigma0.d as u32;
    let mut uf = UnionFind::new(d);
    for x in 0..d as u8 {
        uf.union(x, sigma0.img[x as usize]);
    }
    for &(i, j) in transpositions {
        uf.union(i, j);
    }
    uf.components <= 1
}

/// Tuple counts for a fixed `σ₀` class and `b`, split by the cycle type of
/// `σ₀ τ₁ ⋯ τ_b` (which is the type of `σ_∞`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleCensus {
    pub d: u32,
    pub b: u32,
    pub mu: Partition,
    /// Factor converting raw counts to counts over all of `C_μ`.
    pub multiplier: BigUint,
    /// `ν ↦ (all tuples, transitive tuples)`.
    pub counts: BTreeMap<Partition, (u64, u64)>,
}

impl TupleCensus {
    fn weighted(&self, raw: u64) -> Rational {
        from_biguint(&(&self.multiplier * BigUint::from(raw))) / from_biguint(&factorial(self.d))
    }

    /// Tuple count divided by `d!`.
    pub fn disconnected(&self, nu: &Partition) -> Rational {
        self.weighted(self.counts.get(nu).map_or(0, |c| c.0))
    }

    pub fn connected(&self, nu: &Partition) -> Rational {
        self.weighted(self.counts.get(nu).map_or(0, |c| c.1))
    }
}

fn transpositions(d: u32) -> Vec<(u8, u8)> {
    let mut out = Vec::new();
    for i in 0..d as u8 {
        for j in i + 1..d as u8 {
            out.push((i, j));
        }
    }
    out
}

fn walk(
    cur: Perm,
    sigma0: &Perm,
    remaining: u32,
    chosen: &mut Vec<(u8, u8)>,
    ts: &[(u8, u8)],
    acc: &mut BTreeMap<Partition, (u64, u64)>,
) {
    if remaining == 0 {
        let entry = acc.entry(cur.cycle_type()).or_insert((0, 0));
        entry.0 += 1;
        if transitive(sigma0, chosen) {
            entry.1 += 1;
        }
        return;
    }
    for &(i, j) in ts {
        chosen.push((i, j));
        walk(cur.then_swap(i, j), sigma0, remaining - 1, chosen, ts, acc);
        chosen.pop();
    }
}

fn merge(
    mut a: BTreeMap<Partition, (u64, u64)>,
    b: BTreeMap<Partition, (u64, u64)>,
) -> BTreeMap<Partition, (u64, u64)> {
    for (k, (x, y)) in b {
        let e = a.entry(k).or_insert((0, 0));
        e.0 += x;
        e.1 += y;
    }
    a
}

fn census_from(sigma0: &Perm, b: u32, ts: &[(u8, u8)]) -> BTreeMap<Partition, (u64, u64)> {
    if b == 0 {
        let mut acc = BTreeMap::new();
        walk(*sigma0, sigma0, 0, &mut Vec::new(), ts, &mut acc);
        return acc;
    }
    // one shard per first transposition
    ts.par_iter()
        .map(|&(i, j)| {
            let mut acc = BTreeMap::new();
            let mut chosen = vec![(i, j)];
            walk(sigma0.then_swap(i, j), sigma0, b - 1, &mut chosen, ts, &mut acc);
            acc
        })
        .reduce(BTreeMap::new, merge)
}

/// Enumerates every tuple with `σ₀ ∈ C_μ` and `b` transpositions.
pub fn tuple_census(mu: &Partition, b: u32, mode: EnumerationMode, caps: OracleCaps) -> Result<TupleCensus> {
    let d = mu.size();
    caps.check(d, b)?;
    let ts = transpositions(d);
    let (counts, multiplier) = match mode {
        EnumerationMode::Representative => (census_from(&Perm::of_cycle_type(mu), b, &ts), class_size(mu)),
        EnumerationMode::Naive => {
            if d > 4 {
                return Err(HurwitzError::OracleScaleLimit(format!("naive enumeration needs d ≤ 4, got {d}")));
            }
            let counts = Perm::all(d)
                .into_iter()
                .filter(|p| p.cycle_type() == *mu)
                .map(|p| census_from(&p, b, &ts))
                .fold(BTreeMap::new(), merge);
            (counts, BigUint::from(1u32))
        }
    };
    Ok(TupleCensus { d, b, mu: mu.clone(), multiplier, counts })
}

/// Weighted count of tuples `(σ₀ ∈ C_μ, τ₁, …, τ_b, σ_∞ ∈ C_ν)` with
/// trivial product, divided by `d!`; with `connected_only`, only tuples
/// generating a transitive subgroup.
pub fn count_tuples(
    mu: &Partition,
    nu: &Partition,
    b: u32,
    connected_only: bool,
    caps: OracleCaps,
) -> Result<Rational> {
    count_tuples_with(mu, nu, b, connected_only, caps, EnumerationMode::Representative)
}

pub fn count_tuples_with(
    mu: &Partition,
    nu: &Partition,
    b: u32,
    connected_only: bool,
    caps: OracleCaps,
    mode: EnumerationMode,
) -> Result<Rational> {
    if mu.size() != nu.size() {
        return Err(HurwitzError::IncompatibleSizes {
            left: mu.clone(),
            left_size: mu.size(),
            right: nu.clone(),
            right_size: nu.size(),
        });
    }
    let census = tuple_census(mu, b, mode, caps)?;
    Ok(if connected_only { census.connected(nu) } else { census.disconnected(nu) })
}

/// One oracle row: both counts for `(d, b, μ, ν)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleRow {
    pub d: u32,
    pub b: u32,
    pub mu: Partition,
    pub nu: Partition,
    #[serde(serialize_with = "serialize_exact")]
    pub disconnected: Rational,
    #[serde(serialize_with = "serialize_exact")]
    pub connected: Rational,
}

/// Rows for every `1 ≤ d ≤ d_max`, `b ≤ b_max`, `μ, ν ⊢ d`, ordered by
/// `d`, `b`, `μ`, `ν`.
pub fn oracle_rows(d_max: u32, b_max: u32, caps: OracleCaps) -> Result<Vec<OracleRow>> {
    caps.check(d_max, b_max)?;
    let mut rows = Vec::new();
    for d in 1..=d_max {
        let parts = partitions_of(d);
        for b in 0..=b_max {
            for mu in &parts {
                let census = tuple_census(mu, b, EnumerationMode::Representative, caps)?;
                for nu in &parts {
                    rows.push(OracleRow {
                        d,
                        b,
                        mu: mu.clone(),
                        nu: nu.clone(),
                        disconnected: census.disconnected(nu),
                        connected: census.connected(nu),
                    });
                }
            }
        }
    }
    Ok(rows)
}

/// Which formula disagreed with the oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    /// Burnside's character sum.
    CovBurnside,
    /// `b!` times a coefficient of τ.
    CovTau,
    /// `b!` times a coefficient of `log τ`.
    Connected,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantity::CovBurnside => "cov-burnside",
            Quantity::CovTau => "cov-tau",
            Quantity::Connected => "connected",
        })
    }
}

/// A formula value that differs from the oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub d: u32,
    pub b: u32,
    pub mu: Partition,
    pub nu: Partition,
    pub quantity: Quantity,
    #[serde(serialize_with = "serialize_exact")]
    pub oracle: Rational,
    #[serde(serialize_with = "serialize_exact")]
    pub formula: Rational,
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "d={} b={} mu=({}) nu=({}) {}: oracle {} formula {}",
            self.d, self.b, self.mu, self.nu, self.quantity, self.oracle, self.formula
        )
    }
}

/// Compares the oracle with Burnside's sum, τ and `log τ` for every
/// `1 ≤ d ≤ d_max`, `b ≤ b_max`.
pub fn compare_all(chars: &CharacterCache, d_max: u32, b_max: u32, caps: OracleCaps) -> Result<Vec<Discrepancy>> {
    caps.check(d_max, b_max)?;
    let tables = HurwitzTables::build(chars, d_max, b_max)?;
    compare_with_tables(chars, &tables, d_max, b_max, caps)
}

/// As [`compare_all`], against the given tables.
pub fn compare_with_tables(
    chars: &CharacterCache,
    tables: &HurwitzTables,
    d_max: u32,
    b_max: u32,
    caps: OracleCaps,
) -> Result<Vec<Discrepancy>> {
    let mut out = Vec::new();
    for row in oracle_rows(d_max, b_max, caps)? {
        let burnside = cov_with_transpositions(chars, row.b, &row.mu, &row.nu)?;
        let tau = tables.cov(row.b, &row.mu, &row.nu)?;
        let hur = tables.double_hurwitz(row.b, &row.mu, &row.nu)?.value;
        for (quantity, oracle, formula) in [
            (Quantity::CovBurnside, &row.disconnected, burnside),
            (Quantity::CovTau, &row.disconnected, tau),
            (Quantity::Connected, &row.connected, hur),
        ] {
            if *oracle != formula {
                out.push(Discrepancy {
                    d: row.d,
                    b: row.b,
                    mu: row.mu.clone(),
                    nu: row.nu.clone(),
                    quantity,
                    oracle: oracle.clone(),
                    formula,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts).unwrap()
    }

    #[test]
    fn perm_basics() {
        let r = Perm::of_cycle_type(&p(&[3, 2, 1]));
        assert_eq!(r.cycle_type(), p(&[3, 2, 1]));
        assert_eq!(Perm::identity(4).then_swap(0, 1).cycle_type(), p(&[2, 1, 1]));
        assert_eq!(Perm::all(4).len(), 24);
        // (0 1) then (1 2): 0 → 1 → 2, 1 → 0, 2 → 1, a 3-cycle
        let prod = Perm::identity(3).then_swap(0, 1).then_swap(1, 2);
        assert_eq!(prod.img[..3], [2, 0, 1]);
    }

    #[test]
    fn examples() {
        let caps = OracleCaps::default();
        assert_eq!(count_tuples(&p(&[1]), &p(&[1]), 0, true, caps).unwrap(), int(1));
        assert_eq!(count_tuples(&p(&[1, 1]), &p(&[1, 1]), 2, true, caps).unwrap(), ratio(1, 2));
        assert_eq!(count_tuples(&p(&[1, 1, 1]), &p(&[1, 1, 1]), 4, true, caps).unwrap(), int(4));
        assert_eq!(count_tuples(&p(&[2]), &p(&[2]), 0, false, caps).unwrap(), ratio(1, 2));
        assert_eq!(count_tuples(&p(&[1, 1, 1]), &p(&[1, 1, 1]), 0, false, caps).unwrap(), ratio(1, 6));
        assert_eq!(count_tuples(&p(&[1, 1, 1]), &p(&[1, 1, 1]), 0, true, caps).unwrap(), int(0));
    }

    #[test]
    fn caps_enforced() {
        let caps = OracleCaps::default();
        let err = count_tuples(&Partition::ones(7), &Partition::ones(7), 0, false, caps).unwrap_err();
        assert!(err.to_string().starts_with("oracle scale limit"));
        assert!(count_tuples(&p(&[1]), &p(&[1]), 6, false, caps).is_err());
        assert!(compare_all(&CharacterCache::new(), 7, 0, caps).is_err());
        let wide = OracleCaps { max_d: 20, max_b: 5 };
        assert!(wide.check(9, 0).is_err());
        assert!(count_tuples(&p(&[2]), &p(&[1, 1, 1]), 0, false, caps).is_err());
    }

    #[test]
    fn naive_matches_representative() {
        let caps = OracleCaps::default();
        for d in 1..=4 {
            for mu in partitions_of(d) {
                for b in 0..=3 {
                    let fast = tuple_census(&mu, b, EnumerationMode::Representative, caps).unwrap();
                    let slow = tuple_census(&mu, b, EnumerationMode::Naive, caps).unwrap();
                    for nu in partitions_of(d) {
                        assert_eq!(fast.disconnected(&nu), slow.disconnected(&nu));
                        assert_eq!(fast.connected(&nu), slow.connected(&nu));
                    }
                }
            }
        }
        assert!(tuple_census(&p(&[5]), 0, EnumerationMode::Naive, caps).is_err());
    }

    #[test]
    fn small_comparison() {
        let chars = CharacterCache::new();
        assert!(compare_all(&chars, 1, 0, OracleCaps::default()).unwrap().is_empty());
        assert!(compare_all(&chars, 3, 3, OracleCaps::default()).unwrap().is_empty());
    }

    #[test]
    fn poisoned_characters_are_caught() {
        let chars = CharacterCache::new();
        chars.poison(&p(&[2, 1]), &p(&[3]), 5);
        let found = compare_all(&chars, 3, 1, OracleCaps::default()).unwrap();
        assert!(!found.is_empty());
        assert_eq!(found[0].d, 3);
    }
}
