//! Fixed workloads shared by the criterion benches.

use hurwitz_core::{CharacterCache, Partition};

/// Orders used for the τ / log τ benches.
pub const TAU_ORDERS: &[(u32, u32)] = &[(4, 4), (6, 6), (8, 6)];

/// A cache with every character of degree at most `d` already computed.
pub fn warm_cache(d: u32) -> CharacterCache {
    let chars = CharacterCache::new();
    for k in 0..=d {
        chars.table(k);
    }
    chars
}

/// `(μ, ν, b)` queries for the oracle benches.
pub fn oracle_cases() -> Vec<(Partition, Partition, u32)> {
    let p = |s: &str| s.parse::<Partition>().expect("valid partition");
    vec![(p("1,1,1"), p("1,1,1"), 4), (p("2,1,1"), p("3,1"), 3), (p("2,2,1"), p("3,2"), 3)]
}
