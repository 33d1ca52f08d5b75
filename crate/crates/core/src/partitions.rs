//! Integer partitions and the combinatorics the τ-function needs: centralizer
//! orders, Maya sets, and the content polynomial `f2` in two forms.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::{HurwitzError, Result};
use crate::rational::{factorial, ratio, Rational};

type Parts = SmallVec<[u32; 8]>;

/// An integer partition stored as a weakly decreasing list of positive parts.
///
/// Ordering is by size first and then reverse-lexicographic on the parts, so
/// `(4) < (3,1) < (2,2) < (2,1,1) < (1,1,1,1)`. This matches the order of
/// [`partitions_of`].
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition {
    parts: Parts,
    size: u32,
}

impl Partition {
    /// The empty partition of 0.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a partition from parts that must already be positive and
    /// weakly decreasing.
    pub fn new(parts: &[u32]) -> Result<Self> {
        if parts.contains(&0) {
            return Err(HurwitzError::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(HurwitzError::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Self::from_sorted(parts.iter().copied().collect()))
    }

    /// Builds a partition from positive parts in any order; zeros are dropped.
    pub fn from_unsorted(parts: &[u32]) -> Self {
        let mut v: Parts = parts.iter().copied().filter(|&p| p > 0).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Self::from_sorted(v)
    }

    /// The partition `(1^n)`.
    pub fn ones(n: u32) -> Self {
        Self::from_sorted(std::iter::repeat_n(1, n as usize).collect())
    }

    /// The one-row partition `(n)`, empty for `n = 0`.
    pub fn row(n: u32) -> Self {
        if n == 0 {
            Self::empty()
        } else {
            Self::from_sorted(smallvec::smallvec![n])
        }
    }

    fn from_sorted(parts: Parts) -> Self {
        let size = parts.iter().sum();
        Self { parts, size }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// `|λ|`, the sum of the parts.
    pub fn size(&self) -> u32 {
        self.size
    }

    /// `ℓ(λ)`, the number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Part `i` (0-based), or 0 past the end.
    pub fn part(&self, i: usize) -> u32 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// `(k, m_k)` pairs for each distinct part, largest part first.
    pub fn multiplicities(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let mut i = 0;
        std::iter::from_fn(move || {
            let k = *self.parts.get(i)?;
            let start = i;
            while i < self.parts.len() && self.parts[i] == k {
                i += 1;
            }
            Some((k, (i - start) as u32))
        })
    }

    /// Number of parts equal to `k`.
    pub fn multiplicity(&self, k: u32) -> u32 {
        self.parts.iter().filter(|&&p| p == k).count() as u32
    }

    pub fn conjugate(&self) -> Self {
        let width = self.part(0);
        let parts = (1..=width).map(|j| self.parts.iter().take_while(|&&p| p >= j).count() as u32).collect();
        Self::from_sorted(parts)
    }

    /// Multiset union of parts, i.e. the partition of `p_λ · p_μ`.
    pub fn union(&self, other: &Self) -> Self {
        if other.is_empty() {
            return self.clone();
        }
        if self.is_empty() {
            return other.clone();
        }
        let mut merged = Parts::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.len() && j < other.len() {
            if self.parts[i] >= other.parts[j] {
                merged.push(self.parts[i]);
                i += 1;
            } else {
                merged.push(other.parts[j]);
                j += 1;
            }
        }
        merged.extend_from_slice(&self.parts[i..]);
        merged.extend_from_slice(&other.parts[j..]);
        Self { parts: merged, size: self.size + other.size }
    }

    /// Removes one part equal to `k`, if present.
    pub fn remove_part(&self, k: u32) -> Option<Self> {
        let pos = self.parts.iter().position(|&p| p == k)?;
        let mut parts = self.parts.clone();
        parts.remove(pos);
        Some(Self { parts, size: self.size - k })
    }

    /// Removes `count` parts equal to `k`; `None` if there are fewer.
    pub fn remove_parts(&self, k: u32, count: u32) -> Option<Self> {
        if count == 0 {
            return Some(self.clone());
        }
        if self.multiplicity(k) < count {
            return None;
        }
        let mut left = count;
        let parts: Parts = self
            .parts
            .iter()
            .copied()
            .filter(|&p| {
                if p == k && left > 0 {
                    left -= 1;
                    false
                } else {
                    true
                }
            })
            .collect();
        Some(Self { parts, size: self.size - k * count })
    }

    /// Drops the largest part, returning it with the remainder.
    pub fn split_first(&self) -> Option<(u32, Self)> {
        let (&first, rest) = self.parts.split_first()?;
        Some((first, Self { parts: rest.iter().copied().collect(), size: self.size - first }))
    }

    /// True when every part equals 1.
    pub fn is_all_ones(&self) -> bool {
        self.parts.iter().all(|&p| p == 1)
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size.cmp(&other.size).then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

/// Parses `"3,1,1"`. Parts may come in any order; the empty string (or `-`)
/// is the empty partition.
impl FromStr for Partition {
    type Err = HurwitzError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "-" {
            return Ok(Self::empty());
        }
        let mut parts = Vec::new();
        for tok in s.split(',') {
            let p: u32 =
                tok.trim().parse().map_err(|_| HurwitzError::InvalidPartition(format!("bad part {tok:?} in {s:?}")))?;
            if p == 0 {
                return Err(HurwitzError::InvalidPartition(format!("zero part in {s:?}")));
            }
            parts.push(p);
        }
        Ok(Self::from_unsorted(&parts))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(self.len()))?;
        for p in &self.parts {
            seq.serialize_element(p)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<u32>::deserialize(de)?;
        Partition::new(&parts).map_err(serde::de::Error::custom)
    }
}

/// All partitions of `d` in reverse-lexicographic order, starting at `(d)`.
pub fn partitions_of(d: u32) -> Vec<Partition> {
    if d == 0 {
        return vec![Partition::empty()];
    }
    let mut out = Vec::new();
    let mut cur: Vec<u32> = vec![d];
    loop {
        out.push(Partition::from_sorted(cur.iter().copied().collect()));
        // rightmost part larger than 1
        let Some(idx) = cur.iter().rposition(|&p| p > 1) else {
            break;
        };
        let ones = (cur.len() - idx - 1) as u32;
        let v = cur[idx] - 1;
        cur.truncate(idx);
        cur.push(v);
        let mut rem = ones + 1;
        while rem > 0 {
            let take = rem.min(v);
            cur.push(take);
            rem -= take;
        }
    }
    out
}

/// Every partition of size `0..=d_max`, grouped by size, each group in
/// reverse-lexicographic order.
pub fn enumerate_partitions(d_max: u32) -> Vec<Partition> {
    (0..=d_max).flat_map(partitions_of).collect()
}

/// `z_μ = ∏ k^{m_k} m_k!`, the order of the centralizer of a permutation of
/// cycle type μ.
pub fn z_mu(mu: &Partition) -> BigUint {
    mu.multiplicities().map(|(k, m)| BigUint::from(k).pow(m) * factorial(m)).product()
}

/// `|C_μ| = d!/z_μ`.
pub fn class_size(mu: &Partition) -> BigUint {
    factorial(mu.size()) / z_mu(mu)
}

/// The class of a transposition in `S(d)`, cycle type `(2,1^{d-2})`.
pub fn transposition_class(d: u32) -> Option<Partition> {
    if d < 2 {
        return None;
    }
    let mut parts: Parts = smallvec::smallvec![2];
    parts.extend(std::iter::repeat_n(1, d as usize - 2));
    Some(Partition::from_sorted(parts))
}

/// A half-integer `k + 1/2`, stored as the odd integer `2k + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInteger(i64);

impl HalfInteger {
    /// From the odd numerator `n` of `n/2`.
    pub fn from_doubled(n: i64) -> Self {
        debug_assert!(n % 2 != 0, "half-integers have odd numerators");
        Self(n)
    }

    pub fn doubled(self) -> i64 {
        self.0
    }

    pub fn to_rational(self) -> Rational {
        ratio(self.0, 2)
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2", self.0)
    }
}

/// The finite description of `𝔖(λ) = {λ_i - i + 1/2}`: the positive elements
/// it contains and the negative half-integers it misses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MayaSet {
    /// `S₊`, in decreasing order.
    pub plus: Vec<HalfInteger>,
    /// `S₋`, in decreasing order.
    pub minus: Vec<HalfInteger>,
}

impl MayaSet {
    /// `|S₊| - |S₋|`; zero for every partition.
    pub fn charge(&self) -> i64 {
        self.plus.len() as i64 - self.minus.len() as i64
    }
}

/// Only indices `i ≤ ℓ(λ)` can produce positive elements or holes; from
/// `i = ℓ+1` on, `𝔖(λ)` is the full tail `{-ℓ-1/2, -ℓ-3/2, …}`.
pub fn maya_set(lambda: &Partition) -> MayaSet {
    let len = lambda.len() as i64;
    let doubled: Vec<i64> =
        lambda.parts().iter().enumerate().map(|(i, &p)| 2 * (p as i64) - 2 * (i as i64 + 1) + 1).collect();
    let plus = doubled.iter().filter(|&&x| x > 0).map(|&x| HalfInteger::from_doubled(x)).collect();
    let minus =
        (1..=len).map(|i| -(2 * i - 1)).filter(|x| !doubled.contains(x)).map(HalfInteger::from_doubled).collect();
    MayaSet { plus, minus }
}

/// `½ Σ_i [(λ_i - i + ½)² - (-i + ½)²]`, summed over the nonzero parts.
pub fn f2_contents(lambda: &Partition) -> Rational {
    let eighths: i64 = lambda
        .parts()
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let i = i as i64 + 1;
            let a = 2 * p as i64 - 2 * i + 1;
            let b = -2 * i + 1;
            a * a - b * b
        })
        .sum();
    ratio(eighths, 8)
}

/// `Σ_{k∈S₊} k²/2 - Σ_{k∈S₋} k²/2`.
pub fn f2_maya(lambda: &Partition) -> Rational {
    let maya = maya_set(lambda);
    let sq = |h: &HalfInteger| h.doubled() * h.doubled();
    let eighths: i64 = maya.plus.iter().map(sq).sum::<i64>() - maya.minus.iter().map(sq).sum::<i64>();
    ratio(eighths, 8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts).unwrap()
    }

    /// p(n) by Euler's pentagonal recurrence.
    fn partition_numbers(n: usize) -> Vec<u64> {
        let mut table = vec![0i64; n + 1];
        table[0] = 1;
        for i in 1..=n {
            let mut k = 1i64;
            let mut sum = 0i64;
            loop {
                let g1 = (k * (3 * k - 1) / 2) as usize;
                if g1 > i {
                    break;
                }
                let sign = if k % 2 == 1 { 1 } else { -1 };
                sum += sign * table[i - g1];
                let g2 = (k * (3 * k + 1) / 2) as usize;
                if g2 <= i {
                    sum += sign * table[i - g2];
                }
                k += 1;
            }
            table[i] = sum;
        }
        table.into_iter().map(|x| x as u64).collect()
    }

    fn content_sum(lambda: &Partition) -> i64 {
        lambda.parts().iter().enumerate().flat_map(|(i, &row)| (0..row as i64).map(move |j| j - i as i64)).sum()
    }

    #[test]
    fn rejects_bad_parts() {
        assert!(Partition::new(&[1, 2]).is_err());
        assert!(Partition::new(&[2, 0]).is_err());
        assert!("2,x".parse::<Partition>().is_err());
        assert!("0".parse::<Partition>().is_err());
        assert_eq!("1,3,1".parse::<Partition>().unwrap(), p(&[3, 1, 1]));
        assert_eq!("".parse::<Partition>().unwrap(), Partition::empty());
    }

    #[test]
    fn cached_size_and_length() {
        let l = p(&[3, 1, 1]);
        assert_eq!(l.size(), 5);
        assert_eq!(l.len(), 3);
        assert_eq!(l.multiplicities().collect::<Vec<_>>(), vec![(3, 1), (1, 2)]);
        assert_eq!(Partition::empty().size(), 0);
        assert_eq!(l.to_string(), "3,1,1");
    }

    #[test]
    fn enumeration_small_cases() {
        assert_eq!(enumerate_partitions(0), vec![Partition::empty()]);
        let all = enumerate_partitions(4);
        let counts: Vec<usize> = (0..=4).map(|d| all.iter().filter(|l| l.size() == d).count()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5]);
        assert_eq!(partitions_of(4), vec![p(&[4]), p(&[3, 1]), p(&[2, 2]), p(&[2, 1, 1]), p(&[1, 1, 1, 1])]);
        assert_eq!(partitions_of(10).len(), 42);
    }

    #[test]
    fn enumeration_matches_pentagonal_recurrence() {
        let expected = partition_numbers(30);
        for d in 0..=30u32 {
            let parts = partitions_of(d);
            assert_eq!(parts.len() as u64, expected[d as usize], "d = {d}");
            let mut sorted = parts.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted, parts, "order must be strictly increasing for d = {d}");
        }
    }

    #[test]
    fn centralizer_orders() {
        assert_eq!(z_mu(&p(&[1])), BigUint::from(1u32));
        assert_eq!(z_mu(&p(&[2, 1])), BigUint::from(2u32));
        assert_eq!(class_size(&p(&[2, 1])), BigUint::from(3u32));
        assert_eq!(z_mu(&p(&[2, 2])), BigUint::from(8u32));
        assert_eq!(class_size(&p(&[2, 2])), BigUint::from(3u32));
        for d in 0..=10 {
            let total: BigUint = partitions_of(d).iter().map(class_size).sum();
            assert_eq!(total, factorial(d));
        }
    }

    #[test]
    fn maya_sets() {
        let empty = maya_set(&Partition::empty());
        assert!(empty.plus.is_empty() && empty.minus.is_empty());
        let one = maya_set(&p(&[1]));
        assert_eq!(one.plus, vec![HalfInteger::from_doubled(1)]);
        assert_eq!(one.minus, vec![HalfInteger::from_doubled(-1)]);
        // 𝔖((2,1)) = {3/2, -1/2, -5/2, -7/2, ...}
        let hook = maya_set(&p(&[2, 1]));
        assert_eq!(hook.plus, vec![HalfInteger::from_doubled(3)]);
        assert_eq!(hook.minus, vec![HalfInteger::from_doubled(-3)]);
        for l in enumerate_partitions(12) {
            assert_eq!(maya_set(&l).charge(), 0, "{l:?}");
        }
    }

    #[test]
    fn f2_examples() {
        assert_eq!(f2_contents(&Partition::empty()), int(0));
        assert_eq!(f2_contents(&p(&[2])), int(1));
        assert_eq!(f2_contents(&p(&[1, 1])), int(-1));
        assert_eq!(f2_maya(&Partition::empty()), int(0));
        assert_eq!(f2_maya(&p(&[1])), int(0));
        assert_eq!(f2_maya(&p(&[3, 1])), int(2));
        assert_eq!(f2_contents(&p(&[3, 1])), int(2));
    }

    #[test]
    fn f2_forms_agree_with_content_sum() {
        for l in enumerate_partitions(14) {
            let c = int(content_sum(&l));
            assert_eq!(f2_contents(&l), c, "{l:?}");
            assert_eq!(f2_maya(&l), c, "{l:?}");
            assert_eq!(f2_contents(&l.conjugate()), -c, "{l:?}");
        }
    }

    #[test]
    fn union_and_removal() {
        let a = p(&[3, 1]);
        let b = p(&[2, 1]);
        assert_eq!(a.union(&b), p(&[3, 2, 1, 1]));
        assert_eq!(a.union(&Partition::empty()), a);
        assert_eq!(p(&[3, 2, 1, 1]).remove_part(1), Some(p(&[3, 2, 1])));
        assert_eq!(p(&[3, 2]).remove_part(1), None);
        assert_eq!(p(&[2, 1, 1, 1]).remove_parts(1, 2), Some(p(&[2, 1])));
        assert_eq!(p(&[4, 2, 1]).conjugate(), p(&[3, 2, 1, 1]));
        assert_eq!(transposition_class(4), Some(p(&[2, 1, 1])));
        assert_eq!(transposition_class(1), None);
    }
}
