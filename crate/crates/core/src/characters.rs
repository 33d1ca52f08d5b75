//! Irreducible characters of the symmetric group.
//!
//! Values are computed by the Murnaghan–Nakayama rule on beta-sets (abacus
//! positions `λ_i + ℓ - i`): removing a rim hook of length `k` is moving a bead
//! from `b` to a free position `b - k`, and the hook height is the number of
//! beads jumped over.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::RwLock;

use num_bigint::BigInt;

use crate::error::{HurwitzError, Result};
use crate::partitions::{class_size, partitions_of, Partition};
use crate::rational::Rational;

/// Hit/miss counters of a [`CharacterCache`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
    pub entries: usize,
}

/// Memoized `χ^λ(C_μ)`.
///
/// Safe to share between threads. Concurrent misses on the same key may
/// compute the value twice; inserts are idempotent.
#[derive(Debug, Default)]
pub struct CharacterCache {
    table: RwLock<HashMap<(Partition, Partition), i64>>,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl CharacterCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// `χ^λ(C_μ)`.
    pub fn character(&self, lambda: &Partition, mu: &Partition) -> Result<i64> {
        if lambda.size() != mu.size() {
            return Err(HurwitzError::IncompatibleSizes {
                left: lambda.clone(),
                left_size: lambda.size(),
                right: mu.clone(),
                right_size: mu.size(),
            });
        }
        Ok(self.eval(lambda, mu))
    }

    /// `dim λ = χ^λ(1^{|λ|})`.
    pub fn dimension(&self, lambda: &Partition) -> u64 {
        let value = self.eval(lambda, &Partition::ones(lambda.size()));
        debug_assert!(value > 0);
        value as u64
    }

    /// `f_C(λ) = |C| χ^λ(C) / dim λ`, the eigenvalue of the class sum of `C`
    /// on the irreducible representation `λ`.
    pub fn central_character(&self, class: &Partition, lambda: &Partition) -> Result<Rational> {
        let chi = self.character(lambda, class)?;
        let size = BigInt::from(class_size(class));
        Ok(Rational::new(size * BigInt::from(chi), BigInt::from(self.dimension(lambda))))
    }

    /// The rows `χ^λ(·)` for all `λ ⊢ d`, columns in the order of
    /// [`partitions_of`].
    pub fn table(&self, d: u32) -> (Vec<Partition>, Vec<Vec<i64>>) {
        let classes = partitions_of(d);
        let rows = classes.iter().map(|lambda| classes.iter().map(|mu| self.eval(lambda, mu)).collect()).collect();
        (classes, rows)
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
            entries: self.table.read().expect("character cache poisoned").len(),
        }
    }

    /// Overwrites a cached value. Used only to stage negative controls: every
    /// later result that depends on `χ^λ(C_μ)` becomes wrong.
    pub fn poison(&self, lambda: &Partition, mu: &Partition, value: i64) {
        self.table.write().expect("character cache poisoned").insert((lambda.clone(), mu.clone()), value);
    }

    fn eval(&self, lambda: &Partition, mu: &Partition) -> i64 {
        if lambda.is_empty() {
            return 1;
        }
        let key = (lambda.clone(), mu.clone());
        if let Some(&v) = self.table.read().expect("character cache poisoned").get(&key) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return v;
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        let value = self.murnaghan_nakayama(lambda, mu);
        self.table.write().expect("character cache poisoned").entry(key).or_insert(value);
        value
    }

    fn murnaghan_nakayama(&self, lambda: &Partition, mu: &Partition) -> i64 {
        let (k, rest) = mu.split_first().expect("nonempty class for nonempty λ");
        let len = lambda.len();
        let beads: Vec<u32> = lambda.parts().iter().enumerate().map(|(i, &p)| p + (len - 1 - i) as u32).collect();
        let mut total = 0;
        for (idx, &b) in beads.iter().enumerate() {
            if b < k || beads.contains(&(b - k)) {
                continue;
            }
            let target = b - k;
            let jumped = beads.iter().filter(|&&c| c > target && c < b).count();
            let sign = if jumped % 2 == 0 { 1 } else { -1 };
            let mut moved = beads.clone();
            moved[idx] = target;
            moved.sort_unstable_by(|a, b| b.cmp(a));
            let n = moved.len();
            let parts: Vec<u32> =
                moved.iter().enumerate().map(|(i, &c)| c - (n - 1 - i) as u32).filter(|&p| p > 0).collect();
            let smaller = Partition::new(&parts).expect("bead removal yields a partition");
            total += sign * self.eval(&smaller, &rest);
        }
        total
    }
}
