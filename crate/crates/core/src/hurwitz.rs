//! Covering counts: Burnside's character sum, the Schur-function expansion of
//! the generating function τ, and connected double Hurwitz numbers from
//! `H = log τ`.
//!
//! Conventions: the coefficient of `q^d β^b p_μ p'_ν` in τ is
//! `Cov_d(C_μ, C_ν, C_(2) × b) / b!`, and in `H` it is `Hur_{d,b}(μ,ν) / b!`.
//! Extraction multiplies the `b!` back.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::characters::CharacterCache;
use crate::error::{HurwitzError, Result};
use crate::formal_series::{MonomialKey, Side, TruncatedSeries, Truncation};
use crate::partitions::{f2_contents, partitions_of, transposition_class, z_mu, Partition};
use crate::rational::{factorial, from_biguint, int, serialize_exact, Rational};

/// Genus from Riemann–Hurwitz, `g = (b + 2 - ℓ(μ) - ℓ(ν)) / 2`, when that is
/// a nonnegative integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Genus {
    Integral(u32),
    NonIntegral,
}

impl Genus {
    pub fn from_data(b: u32, len_mu: usize, len_nu: usize) -> Self {
        let twice = b as i64 + 2 - len_mu as i64 - len_nu as i64;
        if twice >= 0 && twice % 2 == 0 {
            Genus::Integral((twice / 2) as u32)
        } else {
            Genus::NonIntegral
        }
    }
}

impl fmt::Display for Genus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Genus::Integral(g) => write!(f, "{g}"),
            Genus::NonIntegral => f.write_str("non-integral"),
        }
    }
}

impl Serialize for Genus {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Genus::Integral(g) => ser.serialize_u32(*g),
            Genus::NonIntegral => ser.serialize_str("non-integral"),
        }
    }
}

/// One covering count with its data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HurwitzRecord {
    pub d: u32,
    pub b: u32,
    pub mu: Partition,
    pub nu: Partition,
    #[serde(serialize_with = "serialize_exact")]
    pub value: Rational,
    pub genus: Genus,
    pub connected: bool,
}

fn check_pair(mu: &Partition, nu: &Partition) -> Result<()> {
    if mu.size() != nu.size() {
        return Err(HurwitzError::IncompatibleSizes {
            left: mu.clone(),
            left_size: mu.size(),
            right: nu.clone(),
            right_size: nu.size(),
        });
    }
    Ok(())
}

/// `Cov_d(C_1, …, C_s) = Σ_{λ⊢d} (dim λ / d!)² ∏_i f_{C_i}(λ)`: the number of
/// possibly disconnected degree-`d` coverings with the given monodromy
/// classes, each weighted by `1/|Aut|`.
pub fn cov_burnside(chars: &CharacterCache, d: u32, classes: &[Partition]) -> Result<Rational> {
    if let Some(bad) = classes.iter().find(|c| c.size() != d) {
        return Err(HurwitzError::ClassSizeMismatch { class: bad.clone(), degree: d });
    }
    let d_fact = from_biguint(&factorial(d));
    let mut total = Rational::zero();
    for lambda in partitions_of(d) {
        let dim = int(chars.dimension(&lambda) as i64);
        let mut term = (&dim / &d_fact) * (&dim / &d_fact);
        for class in classes {
            term *= chars.central_character(class, &lambda)?;
            if term.is_zero() {
                break;
            }
        }
        total += term;
    }
    Ok(total)
}

/// `Cov_d(C_μ, C_ν, C_(2) × b)` by Burnside's formula. Zero when `b > 0`
/// and `d < 2`, since there are no transpositions.
pub fn cov_with_transpositions(chars: &CharacterCache, b: u32, mu: &Partition, nu: &Partition) -> Result<Rational> {
    check_pair(mu, nu)?;
    let d = mu.size();
    let mut classes = vec![mu.clone(), nu.clone()];
    match transposition_class(d) {
        Some(t) => classes.extend(std::iter::repeat_n(t, b as usize)),
        None if b > 0 => return Ok(Rational::zero()),
        None => {}
    }
    cov_burnside(chars, d, &classes)
}

/// `s_λ = Σ_{μ⊢|λ|} χ^λ(μ) p_μ / z_μ` in the variables of `side`.
pub fn schur_in_power_sums(
    chars: &CharacterCache,
    lambda: &Partition,
    side: Side,
    trunc: Truncation,
) -> TruncatedSeries {
    let terms = partitions_of(lambda.size()).into_iter().filter_map(|mu| {
        let chi = chars.eval_unchecked(lambda, &mu);
        if chi == 0 {
            return None;
        }
        let coeff = Rational::new(BigInt::from(chi), BigInt::from(z_mu(&mu)));
        let key = match side {
            Side::P => MonomialKey::new(0, 0, mu, Partition::empty()),
            Side::PPrime => MonomialKey::new(0, 0, Partition::empty(), mu),
        };
        Some((key, coeff))
    });
    TruncatedSeries::from_terms(trunc, terms)
}

/// `τ = Σ_λ q^{|λ|} e^{β f2(λ)} s_λ(P) s_λ(P')` up to `q^{d_max}`, `β^{b_max}`.
pub fn build_tau(chars: &CharacterCache, d_max: u32, b_max: u32) -> TruncatedSeries {
    build_tau_shifted(chars, d_max, b_max, 0)
}

/// `τ(P, P', β, e^{nβ} q)` built directly from the shifted weights
/// `e^{β (f2(λ) + n|λ|)}`, independently of [`TruncatedSeries::scale_q_exp`].
pub fn build_tau_shifted(chars: &CharacterCache, d_max: u32, b_max: u32, n: i64) -> TruncatedSeries {
    let trunc = Truncation::new(d_max, b_max);
    let mut terms: Vec<(MonomialKey, Rational)> = Vec::new();
    for d in 0..=d_max {
        let classes = partitions_of(d);
        let lambdas = partitions_of(d);
        // per λ: weight f2(λ) + n d and the character row
        let rows: Vec<(BigInt, Vec<BigInt>)> = lambdas
            .iter()
            .map(|l| {
                let w = f2_contents(l).to_integer() + BigInt::from(n * d as i64);
                let row = classes.iter().map(|mu| BigInt::from(chars.eval_unchecked(l, mu))).collect();
                (w, row)
            })
            .collect();
        let zs: Vec<BigInt> = classes.iter().map(|mu| BigInt::from(z_mu(mu))).collect();
        let b_facts: Vec<BigInt> = (0..=b_max).map(|b| BigInt::from(factorial(b))).collect();
        let block: Vec<Vec<(MonomialKey, Rational)>> = (0..classes.len())
            .into_par_iter()
            .map(|i| {
                let mut out = Vec::new();
                for j in 0..classes.len() {
                    let mut power_sums = vec![BigInt::zero(); b_max as usize + 1];
                    for (w, row) in &rows {
                        let prod = &row[i] * &row[j];
                        if prod.is_zero() {
                            continue;
                        }
                        let mut wp = BigInt::one();
                        for slot in power_sums.iter_mut() {
                            *slot += &prod * &wp;
                            wp *= w;
                        }
                    }
                    for (b, sum) in power_sums.into_iter().enumerate() {
                        if sum.is_zero() {
                            continue;
                        }
                        let den = &zs[i] * &zs[j] * &b_facts[b];
                        let key = MonomialKey::new(d, b as u32, classes[i].clone(), classes[j].clone());
                        out.push((key, Rational::new(sum, den)));
                    }
                }
                out
            })
            .collect();
        terms.extend(block.into_iter().flatten());
    }
    TruncatedSeries::from_terms(trunc, terms)
}

/// τ assembled literally as a sum of products of Schur series; slower than
/// [`build_tau`] and used to cross-check it.
pub fn tau_from_schur_products(chars: &CharacterCache, d_max: u32, b_max: u32) -> Result<TruncatedSeries> {
    let trunc = Truncation::new(d_max, b_max);
    let mut tau = TruncatedSeries::zero(trunc);
    for d in 0..=d_max {
        for lambda in partitions_of(d) {
            let f2 = f2_contents(&lambda);
            let weight = TruncatedSeries::from_terms(
                trunc,
                crate::rational::exp_coefficients(&f2, b_max)
                    .into_iter()
                    .enumerate()
                    .map(|(b, c)| (MonomialKey::new(0, b as u32, Partition::empty(), Partition::empty()), c)),
            );
            let s = schur_in_power_sums(chars, &lambda, Side::P, trunc);
            let s_prime = schur_in_power_sums(chars, &lambda, Side::PPrime, trunc);
            let term = s.mul(&s_prime)?.mul(&weight)?.mul_q_power(d);
            tau = tau.add(&term)?;
        }
    }
    Ok(tau)
}

/// `H = log τ`, the generating function of connected coverings.
pub fn connected_series(tau: &TruncatedSeries) -> Result<TruncatedSeries> {
    tau.log()
}

/// τ and `H = log τ` at fixed orders, with extraction of individual numbers.
#[derive(Clone, Debug)]
pub struct HurwitzTables {
    tau: TruncatedSeries,
    connected: TruncatedSeries,
}

impl HurwitzTables {
    pub fn build(chars: &CharacterCache, d_max: u32, b_max: u32) -> Result<Self> {
        Self::from_tau(build_tau(chars, d_max, b_max))
    }

    /// Tables from a given τ (which may be deliberately corrupted).
    pub fn from_tau(tau: TruncatedSeries) -> Result<Self> {
        let connected = connected_series(&tau)?;
        Ok(Self { tau, connected })
    }

    pub fn tau(&self) -> &TruncatedSeries {
        &self.tau
    }

    pub fn connected(&self) -> &TruncatedSeries {
        &self.connected
    }

    pub fn d_max(&self) -> u32 {
        self.tau.truncation().d_max
    }

    pub fn b_max(&self) -> u32 {
        self.tau.truncation().b_max
    }

    fn key(&self, b: u32, mu: &Partition, nu: &Partition) -> Result<MonomialKey> {
        check_pair(mu, nu)?;
        let d = mu.size();
        if d > self.d_max() || b > self.b_max() {
            return Err(HurwitzError::InvalidArgument(format!(
                "(d, b) = ({d}, {b}) outside table orders ({}, {})",
                self.d_max(),
                self.b_max()
            )));
        }
        Ok(MonomialKey::new(d, b, mu.clone(), nu.clone()))
    }

    /// `Cov_d(C_μ, C_ν, C_(2) × b) = b! [q^d β^b p_μ p'_ν] τ`.
    pub fn cov(&self, b: u32, mu: &Partition, nu: &Partition) -> Result<Rational> {
        let key = self.key(b, mu, nu)?;
        Ok(self.tau.coefficient(&key) * from_biguint(&factorial(b)))
    }

    /// `Hur_{d,b}(μ,ν) = b! [q^d β^b p_μ p'_ν] log τ`.
    pub fn double_hurwitz(&self, b: u32, mu: &Partition, nu: &Partition) -> Result<HurwitzRecord> {
        let key = self.key(b, mu, nu)?;
        let value = self.connected.coefficient(&key) * from_biguint(&factorial(b));
        Ok(HurwitzRecord {
            d: mu.size(),
            b,
            mu: mu.clone(),
            nu: nu.clone(),
            value,
            genus: Genus::from_data(b, mu.len(), nu.len()),
            connected: true,
        })
    }

    pub fn disconnected_record(&self, b: u32, mu: &Partition, nu: &Partition) -> Result<HurwitzRecord> {
        Ok(HurwitzRecord {
            d: mu.size(),
            b,
            mu: mu.clone(),
            nu: nu.clone(),
            value: self.cov(b, mu, nu)?,
            genus: Genus::from_data(b, mu.len(), nu.len()),
            connected: false,
        })
    }

    /// Every connected number with `1 ≤ d ≤ d_max`, `b ≤ b_max`, ordered by
    /// `d`, then `b`, then `μ`, then `ν`.
    pub fn all_connected(&self) -> Vec<HurwitzRecord> {
        let mut out = Vec::new();
        for d in 1..=self.d_max() {
            let parts = partitions_of(d);
            for b in 0..=self.b_max() {
                for mu in &parts {
                    for nu in &parts {
                        out.push(self.double_hurwitz(b, mu, nu).expect("in range"));
                    }
                }
            }
        }
        out
    }
}

/// `Hur_{d,b}(μ,ν)` from a freshly built table at orders `(|μ|, b)`.
pub fn double_hurwitz(chars: &CharacterCache, b: u32, mu: &Partition, nu: &Partition) -> Result<HurwitzRecord> {
    check_pair(mu, nu)?;
    HurwitzTables::build(chars, mu.size(), b)?.double_hurwitz(b, mu, nu)
}

/// `H_{g,d}`: connected degree-`d` coverings with `2g + 2d - 2` simple branch
/// points and no other ramification.
///
/// Computed from `log τ` after setting `p_k = p'_k = 0` for `k ≥ 2`; that
/// restriction is a ring map, so it commutes with `log`.
pub fn simple_hurwitz(chars: &CharacterCache, g: u32, d: u32) -> Result<Rational> {
    if d == 0 {
        return Err(HurwitzError::InvalidArgument("simple Hurwitz numbers need d ≥ 1".into()));
    }
    let b = 2 * g + 2 * d - 2;
    let restricted = build_tau(chars, d, b).restrict_to_p1();
    let h = restricted.log()?;
    let key = MonomialKey::new(d, b, Partition::ones(d), Partition::ones(d));
    Ok(h.coefficient(&key) * from_biguint(&factorial(b)))
}

/// Shared character cache plus τ/H tables memoized per `(d_max, b_max)`.
#[derive(Debug, Default)]
pub struct HurwitzEngine {
    chars: CharacterCache,
    tables: Mutex<HashMap<(u32, u32), Arc<HurwitzTables>>>,
}

impl HurwitzEngine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn characters(&self) -> &CharacterCache {
        &self.chars
    }

    pub fn tables(&self, d_max: u32, b_max: u32) -> Result<Arc<HurwitzTables>> {
        if let Some(t) = self.tables.lock().expect("table cache poisoned").get(&(d_max, b_max)) {
            return Ok(Arc::clone(t));
        }
        let built = Arc::new(HurwitzTables::build(&self.chars, d_max, b_max)?);
        self.tables.lock().expect("table cache poisoned").entry((d_max, b_max)).or_insert_with(|| Arc::clone(&built));
        Ok(built)
    }

    pub fn cov(&self, b: u32, mu: &Partition, nu: &Partition) -> Result<Rational> {
        check_pair(mu, nu)?;
        self.tables(mu.size(), b)?.cov(b, mu, nu)
    }

    pub fn double_hurwitz(&self, b: u32, mu: &Partition, nu: &Partition) -> Result<HurwitzRecord> {
        check_pair(mu, nu)?;
        self.tables(mu.size(), b)?.double_hurwitz(b, mu, nu)
    }

    pub fn cov_burnside(&self, d: u32, classes: &[Partition]) -> Result<Rational> {
        cov_burnside(&self.chars, d, classes)
    }

    pub fn simple_hurwitz(&self, g: u32, d: u32) -> Result<Rational> {
        simple_hurwitz(&self.chars, g, d)
    }
}

impl CharacterCache {
    /// Character value for partitions already known to have equal size.
    pub(crate) fn eval_unchecked(&self, lambda: &Partition, mu: &Partition) -> i64 {
        self.character(lambda, mu).expect("sizes checked by caller")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts).unwrap()
    }

    #[test]
    fn burnside_examples() {
        let chars = CharacterCache::new();
        assert_eq!(cov_burnside(&chars, 3, &[]).unwrap(), ratio(1, 6));
        assert_eq!(cov_burnside(&chars, 2, &[p(&[2]), p(&[2])]).unwrap(), ratio(1, 2));
        let t = p(&[2, 1]);
        // (1/6)² 3⁴ from each of the two one-dimensional representations
        let v = cov_burnside(&chars, 3, &[t.clone(), t.clone(), t.clone(), t]).unwrap();
        assert_eq!(v, ratio(9, 2));
        assert!(matches!(cov_burnside(&chars, 3, &[p(&[2])]), Err(HurwitzError::ClassSizeMismatch { .. })));
    }

    #[test]
    fn schur_examples() {
        let chars = CharacterCache::new();
        let t = Truncation::new(2, 0);
        let key = |mu: &[u32]| MonomialKey::new(0, 0, p(mu), Partition::empty());
        let s1 = schur_in_power_sums(&chars, &p(&[1]), Side::P, t);
        assert_eq!(s1.len(), 1);
        assert_eq!(s1.coefficient(&key(&[1])), int(1));
        let s2 = schur_in_power_sums(&chars, &p(&[2]), Side::P, t);
        assert_eq!(s2.coefficient(&key(&[1, 1])), ratio(1, 2));
        assert_eq!(s2.coefficient(&key(&[2])), ratio(1, 2));
        let s11 = schur_in_power_sums(&chars, &p(&[1, 1]), Side::P, t);
        assert_eq!(s11.coefficient(&key(&[1, 1])), ratio(1, 2));
        assert_eq!(s11.coefficient(&key(&[2])), ratio(-1, 2));
    }

    #[test]
    fn tau_low_coefficients() {
        let chars = CharacterCache::new();
        let tau = build_tau(&chars, 3, 2);
        assert_eq!(tau.constant_term(), int(1));
        assert_eq!(tau.coefficient(&MonomialKey::new(1, 0, p(&[1]), p(&[1]))), int(1));
        assert_eq!(tau.coefficient(&MonomialKey::new(2, 0, p(&[2]), p(&[2]))), ratio(1, 2));
        for (k, _) in tau.terms() {
            assert_eq!(k.dq, k.mu.size());
            assert_eq!(k.dq, k.nu.size());
        }
    }

    #[test]
    fn direct_tau_matches_schur_products() {
        let chars = CharacterCache::new();
        for (d, b) in [(0, 0), (2, 3), (4, 4), (5, 2)] {
            assert_eq!(build_tau(&chars, d, b), tau_from_schur_products(&chars, d, b).unwrap(), "({d},{b})");
        }
    }

    #[test]
    fn connected_examples() {
        let chars = CharacterCache::new();
        let tables = HurwitzTables::build(&chars, 3, 4).unwrap();
        assert!(tables.connected().constant_term().is_zero());
        let one = p(&[1]);
        let r = tables.double_hurwitz(0, &one, &one).unwrap();
        assert_eq!(r.value, int(1));
        assert_eq!(r.genus, Genus::Integral(0));
        let r = tables.double_hurwitz(2, &p(&[1, 1]), &p(&[1, 1])).unwrap();
        assert_eq!(r.value, ratio(1, 2));
        let r = tables.double_hurwitz(4, &p(&[1, 1, 1]), &p(&[1, 1, 1])).unwrap();
        assert_eq!(r.value, int(4));
        assert_eq!(r.genus, Genus::Integral(0));
        let r = tables.double_hurwitz(4, &p(&[1, 1]), &p(&[1, 1])).unwrap();
        assert_eq!(r.value, ratio(1, 2));
        assert_eq!(r.genus, Genus::Integral(1));
        assert!(tables.double_hurwitz(0, &p(&[2]), &p(&[1])).is_err());
        assert!(tables.double_hurwitz(5, &one, &one).is_err());
    }

    #[test]
    fn exp_log_round_trip_on_tau() {
        let chars = CharacterCache::new();
        let tau = build_tau(&chars, 4, 3);
        assert_eq!(tau.log().unwrap().exp().unwrap(), tau);
    }

    #[test]
    fn simple_hurwitz_examples() {
        let chars = CharacterCache::new();
        assert_eq!(simple_hurwitz(&chars, 0, 1).unwrap(), int(1));
        assert_eq!(simple_hurwitz(&chars, 0, 2).unwrap(), ratio(1, 2));
        assert_eq!(simple_hurwitz(&chars, 0, 3).unwrap(), int(4));
        assert_eq!(simple_hurwitz(&chars, 1, 1).unwrap(), int(0));
        // d^{d-3} (2d-2)! / d! in genus 0
        assert_eq!(simple_hurwitz(&chars, 0, 4).unwrap(), int(4 * 720 / 24));
    }

    #[test]
    fn genus_and_parity() {
        let chars = CharacterCache::new();
        let tables = HurwitzTables::build(&chars, 4, 4).unwrap();
        for r in tables.all_connected() {
            if (r.b as usize + r.mu.len() + r.nu.len()) % 2 == 1 {
                assert!(r.value.is_zero(), "{r:?}");
                assert_eq!(r.genus, Genus::NonIntegral);
            }
            if r.genus == Genus::NonIntegral {
                assert!(r.value.is_zero(), "{r:?}");
            }
            assert!(r.value >= Rational::zero());
            let swapped = tables.double_hurwitz(r.b, &r.nu, &r.mu).unwrap();
            assert_eq!(swapped.value, r.value);
        }
    }

    #[test]
    fn trivial_monodromy_counts_are_integers() {
        let chars = CharacterCache::new();
        let tables = HurwitzTables::build(&chars, 4, 4).unwrap();
        for d in 3..=4 {
            for mu in partitions_of(d) {
                for b in 0..=4 {
                    let v = tables.double_hurwitz(b, &mu, &Partition::ones(d)).unwrap().value;
                    assert!(v.is_integer(), "Hur_{{{d},{b}}}({mu:?}, 1^{d}) = {v}");
                }
            }
        }
    }

    #[test]
    fn engine_caches_tables() {
        let engine = HurwitzEngine::new();
        let a = engine.tables(3, 2).unwrap();
        let b = engine.tables(3, 2).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(engine.cov(0, &p(&[2]), &p(&[2])).unwrap(), ratio(1, 2));
        assert_eq!(engine.cov_burnside(2, &[p(&[2]), p(&[2])]).unwrap(), engine.cov(0, &p(&[2]), &p(&[2])).unwrap());
    }

    #[test]
    fn record_json_shape() {
        let chars = CharacterCache::new();
        let r = double_hurwitz(&chars, 2, &p(&[1, 1]), &p(&[1, 1])).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["value"], "1/2");
        assert_eq!(json["mu"], serde_json::json!([1, 1]));
        assert_eq!(json["genus"], 0);
        assert_eq!(json["connected"], true);
        let r = double_hurwitz(&chars, 1, &p(&[1, 1]), &p(&[1, 1])).unwrap();
        assert_eq!(serde_json::to_value(&r).unwrap()["genus"], "non-integral");
    }
}
