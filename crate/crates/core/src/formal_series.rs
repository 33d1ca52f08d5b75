//! Sparse truncated power series over exact rationals.
//!
//! A monomial is `q^dq β^b p_μ p'_ν` times an optional auxiliary monomial
//! `z^e ∏ s_n ∏ s'_n` in which each `s_n`, `s'_n` appears at most once: the
//! auxiliary symbols are first-order perturbation parameters, so their
//! squares are truncated away.
//!
//! Truncation drops every monomial with `dq > d_max`, `b > b_max`,
//! `|μ| > p_weight_max`, `|ν| > p_weight_max` or a `z` exponent outside
//! `[z_min, z_max]`. Since `dq`, `b` and the weights only grow under
//! multiplication, coefficients inside the window are exact. The `z` window
//! is exact as long as no factor carries negative `z` powers that could pull
//! a dropped term back inside; callers that mix signs must size the window
//! accordingly.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{HurwitzError, Result};
use crate::partitions::Partition;
use crate::rational::{exp_coefficients, int, Rational};

/// Largest `n` for which `s_n` / `s'_n` can be represented.
pub const MAX_SYMBOL_INDEX: u32 = 16;

/// Which set of power sums a variable belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    /// `P = (p_1, p_2, …)`
    #[serde(rename = "P")]
    P,
    /// `P' = (p'_1, p'_2, …)`
    #[serde(rename = "P'")]
    PPrime,
}

/// `z^z · ∏_{bits of s} s_n · ∏_{bits of s_prime} s'_n`; bit `n-1` stands for
/// index `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AuxMonomial {
    pub z: i32,
    pub s: u16,
    pub s_prime: u16,
}

impl AuxMonomial {
    pub const ONE: Self = Self { z: 0, s: 0, s_prime: 0 };

    pub fn z_power(e: i32) -> Self {
        Self { z: e, ..Self::ONE }
    }

    /// The symbol `s_n` (side `P`) or `s'_n` (side `P'`).
    pub fn symbol(side: Side, n: u32) -> Result<Self> {
        if n == 0 || n > MAX_SYMBOL_INDEX {
            return Err(HurwitzError::InvalidArgument(format!(
                "auxiliary symbol index {n} outside 1..={MAX_SYMBOL_INDEX}"
            )));
        }
        let bit = 1u16 << (n - 1);
        Ok(match side {
            Side::P => Self { s: bit, ..Self::ONE },
            Side::PPrime => Self { s_prime: bit, ..Self::ONE },
        })
    }

    /// Product, or `None` when a symbol would appear squared.
    pub fn checked_mul(self, other: Self) -> Option<Self> {
        if self.s & other.s != 0 || self.s_prime & other.s_prime != 0 {
            return None;
        }
        Some(Self { z: self.z + other.z, s: self.s | other.s, s_prime: self.s_prime | other.s_prime })
    }

    /// Total degree in the `s_n`, `s'_n`.
    pub fn symbol_degree(self) -> u32 {
        self.s.count_ones() + self.s_prime.count_ones()
    }

    pub fn is_one(self) -> bool {
        self == Self::ONE
    }

    fn indices(mask: u16) -> Vec<u32> {
        (0..16).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect()
    }
}

impl fmt::Display for AuxMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            Ok(())
        };
        if self.z != 0 {
            sep(f)?;
            write!(f, "z^{}", self.z)?;
        }
        for n in Self::indices(self.s) {
            sep(f)?;
            write!(f, "s{n}")?;
        }
        for n in Self::indices(self.s_prime) {
            sep(f)?;
            write!(f, "s'{n}")?;
        }
        Ok(())
    }
}

/// Exponent pattern of one monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MonomialKey {
    pub dq: u32,
    pub b: u32,
    pub mu: Partition,
    pub nu: Partition,
    pub aux: AuxMonomial,
}

impl MonomialKey {
    pub fn new(dq: u32, b: u32, mu: Partition, nu: Partition) -> Self {
        Self { dq, b, mu, nu, aux: AuxMonomial::ONE }
    }

    pub fn constant() -> Self {
        Self::default()
    }

    pub fn with_aux(mut self, aux: AuxMonomial) -> Self {
        self.aux = aux;
        self
    }

    pub fn is_constant(&self) -> bool {
        *self == Self::constant()
    }

    pub fn mul(&self, other: &Self) -> Option<Self> {
        Some(Self {
            dq: self.dq + other.dq,
            b: self.b + other.b,
            mu: self.mu.union(&other.mu),
            nu: self.nu.union(&other.nu),
            aux: self.aux.checked_mul(other.aux)?,
        })
    }

    /// Additive grading used by the exp/log recursions; positive on every
    /// non-constant monomial except pure `z` powers.
    pub fn grade(&self) -> u32 {
        self.dq + self.b + self.mu.size() + self.nu.size() + self.aux.symbol_degree()
    }
}

impl fmt::Display for MonomialKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut factors = Vec::new();
        if self.dq > 0 {
            factors.push(format!("q^{}", self.dq));
        }
        if self.b > 0 {
            factors.push(format!("beta^{}", self.b));
        }
        if !self.mu.is_empty() {
            factors.push(format!("p[{}]", self.mu));
        }
        if !self.nu.is_empty() {
            factors.push(format!("p'[{}]", self.nu));
        }
        if !self.aux.is_one() {
            factors.push(self.aux.to_string());
        }
        if factors.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&factors.join(" "))
        }
    }
}

/// Truncation orders of a series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Truncation {
    pub d_max: u32,
    pub b_max: u32,
    pub p_weight_max: u32,
    pub z_min: i32,
    pub z_max: i32,
}

impl Truncation {
    /// Orders `(d_max, b_max)` with `p_weight_max = d_max` and no `z` powers.
    pub fn new(d_max: u32, b_max: u32) -> Self {
        Self { d_max, b_max, p_weight_max: d_max, z_min: 0, z_max: 0 }
    }

    pub fn with_p_weight(mut self, p_weight_max: u32) -> Self {
        self.p_weight_max = p_weight_max;
        self
    }

    pub fn with_z_range(mut self, z_min: i32, z_max: i32) -> Self {
        self.z_min = z_min;
        self.z_max = z_max;
        self
    }

    pub fn admits(&self, key: &MonomialKey) -> bool {
        key.dq <= self.d_max
            && key.b <= self.b_max
            && key.mu.size() <= self.p_weight_max
            && key.nu.size() <= self.p_weight_max
            && key.aux.z >= self.z_min
            && key.aux.z <= self.z_max
    }

    fn max_grade(&self) -> u32 {
        self.d_max + self.b_max + 2 * self.p_weight_max + 2 * MAX_SYMBOL_INDEX
    }
}

/// Substitution `p_k → p_k + amount` for one variable, where `amount` is a
/// polynomial in the auxiliary symbols only.
#[derive(Clone, Debug, PartialEq)]
pub struct PShift {
    pub side: Side,
    pub part: u32,
    pub amount: Vec<(AuxMonomial, Rational)>,
}

impl PShift {
    pub fn new(side: Side, part: u32, amount: Vec<(AuxMonomial, Rational)>) -> Self {
        Self { side, part, amount }
    }

    /// `p_k → p_k + coeff · z^k`, one component of `± z⃗`.
    pub fn z_power(side: Side, part: u32, coeff: Rational) -> Self {
        Self::new(side, part, vec![(AuxMonomial::z_power(part as i32), coeff)])
    }
}

type AuxPoly = BTreeMap<AuxMonomial, Rational>;

fn aux_poly_mul(a: &AuxPoly, b: &AuxPoly) -> AuxPoly {
    let mut out = AuxPoly::new();
    for (ka, va) in a {
        for (kb, vb) in b {
            if let Some(k) = ka.checked_mul(*kb) {
                *out.entry(k).or_insert_with(Rational::zero) += va * vb;
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn binomial(n: u32, k: u32) -> Rational {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(acc)
}

/// A sparse exact series with fixed truncation orders.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    trunc: Truncation,
    terms: BTreeMap<MonomialKey, Rational>,
}

impl TruncatedSeries {
    pub fn zero(trunc: Truncation) -> Self {
        Self { trunc, terms: BTreeMap::new() }
    }

    pub fn one(trunc: Truncation) -> Self {
        Self::monomial(trunc, MonomialKey::constant(), Rational::one())
    }

    /// A single term; empty if `key` lies outside the truncation window.
    pub fn monomial(trunc: Truncation, key: MonomialKey, coeff: Rational) -> Self {
        Self::from_terms(trunc, std::iter::once((key, coeff)))
    }

    /// Sums duplicate keys and discards zero and out-of-window terms.
    pub fn from_terms(trunc: Truncation, terms: impl IntoIterator<Item = (MonomialKey, Rational)>) -> Self {
        let mut map = BTreeMap::new();
        for (k, v) in terms {
            if trunc.admits(&k) {
                *map.entry(k).or_insert_with(Rational::zero) += v;
            }
        }
        map.retain(|_, v: &mut Rational| !v.is_zero());
        Self { trunc, terms: map }
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MonomialKey, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, key: &MonomialKey) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&MonomialKey::constant())
    }

    /// The smallest monomial with a nonzero coefficient.
    pub fn first_term(&self) -> Option<(&MonomialKey, &Rational)> {
        self.terms.iter().next()
    }

    /// Same terms under new orders; anything outside the new window is
    /// dropped.
    pub fn retruncate(&self, trunc: Truncation) -> Self {
        Self::from_terms(trunc, self.terms.iter().map(|(k, v)| (k.clone(), v.clone())))
    }

    /// Copy with `delta` added to one coefficient.
    pub fn perturbed(&self, key: &MonomialKey, delta: &Rational) -> Self {
        let mut out = self.clone();
        let entry = out.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *entry += delta;
        if entry.is_zero() {
            out.terms.remove(key);
        }
        out
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.trunc == other.trunc {
            Ok(())
        } else {
            Err(HurwitzError::IncompatibleTruncation)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other, &Rational::one());
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other, &-Rational::one());
        Ok(out)
    }

    fn add_assign_unchecked(&mut self, other: &Self, factor: &Rational) {
        for (k, v) in &other.terms {
            let entry = self.terms.entry(k.clone()).or_insert_with(Rational::zero);
            *entry += v * factor;
            if entry.is_zero() {
                self.terms.remove(k);
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.trunc);
        }
        Self { trunc: self.trunc, terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    /// Truncated product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let t = self.trunc;
        // keys are sorted by dq first, so the inner loop can stop early
        let right: Vec<(&MonomialKey, &Rational)> = other.terms.iter().collect();
        let mut acc: HashMap<MonomialKey, Rational> = HashMap::new();
        for (ka, va) in &self.terms {
            let dq_room = t.d_max - ka.dq;
            let b_room = t.b_max - ka.b;
            let mu_room = t.p_weight_max - ka.mu.size();
            let nu_room = t.p_weight_max - ka.nu.size();
            for &(kb, vb) in &right {
                if kb.dq > dq_room {
                    break;
                }
                if kb.b > b_room || kb.mu.size() > mu_room || kb.nu.size() > nu_room {
                    continue;
                }
                let Some(aux) = ka.aux.checked_mul(kb.aux) else { continue };
                if aux.z < t.z_min || aux.z > t.z_max {
                    continue;
                }
                let key = MonomialKey {
                    dq: ka.dq + kb.dq,
                    b: ka.b + kb.b,
                    mu: ka.mu.union(&kb.mu),
                    nu: ka.nu.union(&kb.nu),
                    aux,
                };
                let prod = va * vb;
                match acc.get_mut(&key) {
                    Some(v) => *v += prod,
                    None => {
                        acc.insert(key, prod);
                    }
                }
            }
        }
        Ok(Self { trunc: t, terms: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect() })
    }

    fn grade_pieces(&self) -> Result<Vec<Self>> {
        let mut pieces: Vec<Self> = Vec::new();
        for (k, v) in &self.terms {
            let g = k.grade() as usize;
            if g == 0 && !k.is_constant() {
                return Err(HurwitzError::ZeroGradeTerm(k.to_string()));
            }
            if pieces.len() <= g {
                pieces.resize_with(g + 1, || Self::zero(self.trunc));
            }
            pieces[g].terms.insert(k.clone(), v.clone());
        }
        if pieces.is_empty() {
            pieces.push(Self::zero(self.trunc));
        }
        Ok(pieces)
    }

    /// `Σ_k s^k/k!`, computed grade by grade from `g E_g = Σ_k k S_k E_{g-k}`.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(HurwitzError::ExpConstantTerm);
        }
        let s = self.grade_pieces()?;
        let top = s.len() - 1;
        let mut e: Vec<Self> = vec![Self::one(self.trunc)];
        let mut empty_run = 0;
        for g in 1..=self.trunc.max_grade() as usize {
            let mut acc = Self::zero(self.trunc);
            for k in 1..=g.min(top) {
                if s[k].is_zero() || e[g - k].is_zero() {
                    continue;
                }
                let prod = s[k].mul(&e[g - k])?;
                acc.add_assign_unchecked(&prod, &int(k as i64));
            }
            let piece = acc.scale(&Rational::new(BigInt::one(), BigInt::from(g)));
            empty_run = if piece.is_zero() { empty_run + 1 } else { 0 };
            e.push(piece);
            if top == 0 || empty_run >= top {
                break;
            }
        }
        let mut out = Self::zero(self.trunc);
        for piece in &e {
            out.add_assign_unchecked(piece, &Rational::one());
        }
        Ok(out)
    }

    /// `log s`, from `g L_g = g A_g - Σ_{k<g} k L_k A_{g-k}`; requires
    /// constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.constant_term().is_one() {
            return Err(HurwitzError::LogConstantTerm);
        }
        let a = self.grade_pieces()?;
        let top = a.len() - 1;
        let mut l: Vec<Self> = vec![Self::zero(self.trunc)];
        let mut empty_run = 0;
        for g in 1..=self.trunc.max_grade() as usize {
            let mut acc = if g <= top { a[g].scale(&int(g as i64)) } else { Self::zero(self.trunc) };
            for k in 1..g {
                if g - k > top || l[k].is_zero() || a[g - k].is_zero() {
                    continue;
                }
                let prod = l[k].mul(&a[g - k])?;
                acc.add_assign_unchecked(&prod, &int(-(k as i64)));
            }
            let piece = acc.scale(&Rational::new(BigInt::one(), BigInt::from(g)));
            empty_run = if piece.is_zero() { empty_run + 1 } else { 0 };
            l.push(piece);
            if top == 0 || (g >= top && empty_run >= top) {
                break;
            }
        }
        let mut out = Self::zero(self.trunc);
        for piece in &l {
            out.add_assign_unchecked(piece, &Rational::one());
        }
        Ok(out)
    }

    /// `∂/∂p_k` (side `P`) or `∂/∂p'_k` (side `P'`).
    pub fn d_dp(&self, k: u32, side: Side) -> Self {
        let terms = self.terms.iter().filter_map(|(key, v)| {
            let parts = match side {
                Side::P => &key.mu,
                Side::PPrime => &key.nu,
            };
            let m = parts.multiplicity(k);
            if m == 0 {
                return None;
            }
            let reduced = parts.remove_part(k)?;
            let mut nk = key.clone();
            match side {
                Side::P => nk.mu = reduced,
                Side::PPrime => nk.nu = reduced,
            }
            Some((nk, v * int(m as i64)))
        });
        Self::from_terms(self.trunc, terms)
    }

    /// The substitution `q → e^{nβ} q`: `q^dq β^b` becomes
    /// `Σ_j (n·dq)^j/j! q^dq β^{b+j}`.
    pub fn scale_q_exp(&self, n: i64) -> Self {
        if n == 0 {
            return self.clone();
        }
        let mut out: BTreeMap<MonomialKey, Rational> = BTreeMap::new();
        for (key, v) in &self.terms {
            let rate = int(n * key.dq as i64);
            let coeffs = exp_coefficients(&rate, self.trunc.b_max - key.b);
            for (j, c) in coeffs.iter().enumerate() {
                if c.is_zero() {
                    break;
                }
                let mut nk = key.clone();
                nk.b += j as u32;
                *out.entry(nk).or_insert_with(Rational::zero) += v * c;
            }
        }
        out.retain(|_, v| !v.is_zero());
        Self { trunc: self.trunc, terms: out }
    }

    /// Multiplies every coefficient by its `q`-degree (the operator `q ∂/∂q`).
    pub fn euler_q(&self) -> Self {
        Self::from_terms(self.trunc, self.terms.iter().map(|(k, v)| (k.clone(), v * int(k.dq as i64))))
    }

    /// Multiplies by `q^k`.
    pub fn mul_q_power(&self, k: u32) -> Self {
        let terms = self.terms.iter().map(|(key, v)| {
            let mut nk = key.clone();
            nk.dq += k;
            (nk, v.clone())
        });
        Self::from_terms(self.trunc, terms)
    }

    /// Sets `p_k = p'_k = 0` for every `k ≥ 2`.
    pub fn restrict_to_p1(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(k, _)| k.mu.is_all_ones() && k.nu.is_all_ones())
            .map(|(k, v)| (k.clone(), v.clone()));
        Self::from_terms(self.trunc, terms)
    }

    /// Coefficient of `z^e`, as a series with no `z` powers.
    pub fn z_coefficient(&self, e: i32) -> Self {
        let trunc = self.trunc.with_z_range(0, 0);
        let terms = self.terms.iter().filter(|(k, _)| k.aux.z == e).map(|(k, v)| {
            let mut nk = k.clone();
            nk.aux.z = 0;
            (nk, v.clone())
        });
        Self::from_terms(trunc, terms)
    }

    /// Coefficient of the symbol monomial `∏ s_n ∏ s'_n` given by the two
    /// masks, with those symbols removed.
    pub fn symbol_coefficient(&self, s: u16, s_prime: u16) -> Self {
        let terms = self.terms.iter().filter(|(k, _)| k.aux.s == s && k.aux.s_prime == s_prime).map(|(k, v)| {
            let mut nk = k.clone();
            nk.aux.s = 0;
            nk.aux.s_prime = 0;
            (nk, v.clone())
        });
        Self::from_terms(self.trunc, terms)
    }

    /// Substitutes `p_k → p_k + δ_k` for the given shifts and expands.
    ///
    /// Each term of each `δ_k` must be a scalar times a `z` power times at
    /// most one auxiliary symbol.
    pub fn shift_p(&self, shifts: &[PShift]) -> Result<Self> {
        let mut merged: BTreeMap<(Side, u32), AuxPoly> = BTreeMap::new();
        for shift in shifts {
            if shift.part == 0 {
                return Err(HurwitzError::UnsupportedShiftOrder("shift of p_0".into()));
            }
            for (aux, c) in &shift.amount {
                if aux.symbol_degree() > 1 {
                    return Err(HurwitzError::UnsupportedShiftOrder(format!(
                        "term {aux} is not first order in a single symbol"
                    )));
                }
                *merged.entry((shift.side, shift.part)).or_default().entry(*aux).or_insert_with(Rational::zero) += c;
            }
        }
        for poly in merged.values_mut() {
            poly.retain(|_, v| !v.is_zero());
        }
        merged.retain(|_, poly| !poly.is_empty());
        if merged.is_empty() {
            return Ok(self.clone());
        }

        // δ^j for j up to the largest multiplicity that can occur
        let max_mult = self.trunc.p_weight_max as usize;
        let powers: BTreeMap<(Side, u32), Vec<AuxPoly>> = merged
            .iter()
            .map(|(var, delta)| {
                let mut pows = vec![AuxPoly::from([(AuxMonomial::ONE, Rational::one())])];
                for j in 1..=max_mult / var.1 as usize {
                    let next = aux_poly_mul(&pows[j - 1], delta);
                    pows.push(next);
                }
                (*var, pows)
            })
            .collect();

        struct State {
            mu: Vec<u32>,
            nu: Vec<u32>,
            aux: AuxMonomial,
            coeff: Rational,
        }

        let mut acc: HashMap<MonomialKey, Rational> = HashMap::new();
        for (key, v) in &self.terms {
            let mut states = vec![State { mu: Vec::new(), nu: Vec::new(), aux: key.aux, coeff: v.clone() }];
            for side in [Side::P, Side::PPrime] {
                let parts = match side {
                    Side::P => &key.mu,
                    Side::PPrime => &key.nu,
                };
                for (k, m) in parts.multiplicities() {
                    let Some(pows) = powers.get(&(side, k)) else {
                        for st in &mut states {
                            let target = if side == Side::P { &mut st.mu } else { &mut st.nu };
                            target.extend(std::iter::repeat_n(k, m as usize));
                        }
                        continue;
                    };
                    let mut next = Vec::new();
                    for st in &states {
                        for j in 0..=m {
                            let Some(pow) = pows.get(j as usize) else { break };
                            let binom = binomial(m, j);
                            for (a, c) in pow {
                                let Some(aux) = st.aux.checked_mul(*a) else { continue };
                                let mut mu = st.mu.clone();
                                let mut nu = st.nu.clone();
                                let target = if side == Side::P { &mut mu } else { &mut nu };
                                target.extend(std::iter::repeat_n(k, (m - j) as usize));
                                next.push(State { mu, nu, aux, coeff: &st.coeff * &binom * c });
                            }
                        }
                    }
                    states = next;
                }
            }
            for st in states {
                let nk = MonomialKey {
                    dq: key.dq,
                    b: key.b,
                    mu: Partition::from_unsorted(&st.mu),
                    nu: Partition::from_unsorted(&st.nu),
                    aux: st.aux,
                };
                if self.trunc.admits(&nk) {
                    *acc.entry(nk).or_insert_with(Rational::zero) += st.coeff;
                }
            }
        }
        Ok(Self { trunc: self.trunc, terms: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect() })
    }

    /// JSON-ready records in key order.
    pub fn records(&self) -> Vec<SeriesRecord> {
        self.terms
            .iter()
            .map(|(k, v)| SeriesRecord {
                dq: k.dq,
                b: k.b,
                mu: k.mu.clone(),
                nu: k.nu.clone(),
                aux: AuxRecord {
                    z: k.aux.z,
                    s: AuxMonomial::indices(k.aux.s),
                    s_prime: AuxMonomial::indices(k.aux.s_prime),
                },
                numerator: v.numer().to_string(),
                denominator: v.denom().to_string(),
            })
            .collect()
    }

    pub fn from_records(trunc: Truncation, records: &[SeriesRecord]) -> Result<Self> {
        let mut terms = Vec::with_capacity(records.len());
        for r in records {
            let mut aux = AuxMonomial::z_power(r.aux.z);
            for &n in &r.aux.s {
                aux = aux
                    .checked_mul(AuxMonomial::symbol(Side::P, n)?)
                    .ok_or_else(|| HurwitzError::InvalidArgument(format!("repeated s{n}")))?;
            }
            for &n in &r.aux.s_prime {
                aux = aux
                    .checked_mul(AuxMonomial::symbol(Side::PPrime, n)?)
                    .ok_or_else(|| HurwitzError::InvalidArgument(format!("repeated s'{n}")))?;
            }
            let parse =
                |s: &str| s.parse::<BigInt>().map_err(|_| HurwitzError::InvalidArgument(format!("bad integer {s:?}")));
            let den = parse(&r.denominator)?;
            if den.is_zero() {
                return Err(HurwitzError::InvalidArgument("zero denominator".into()));
            }
            let key = MonomialKey { dq: r.dq, b: r.b, mu: r.mu.clone(), nu: r.nu.clone(), aux };
            terms.push((key, Rational::new(parse(&r.numerator)?, den)));
        }
        Ok(Self::from_terms(trunc, terms))
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, v)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if k.is_constant() {
                write!(f, "{v}")?;
            } else if v.is_one() {
                write!(f, "{k}")?;
            } else {
                write!(f, "({v}) {k}")?;
            }
        }
        Ok(())
    }
}

/// One serialized term: `{dq, b, mu, nu, aux, numerator, denominator}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub dq: u32,
    pub b: u32,
    pub mu: Partition,
    pub nu: Partition,
    pub aux: AuxRecord,
    pub numerator: String,
    pub denominator: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxRecord {
    pub z: i32,
    pub s: Vec<u32>,
    pub s_prime: Vec<u32>,
}

impl Serialize for MonomialKey {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = ser.serialize_struct("MonomialKey", 5)?;
        st.serialize_field("dq", &self.dq)?;
        st.serialize_field("b", &self.b)?;
        st.serialize_field("mu", &self.mu)?;
        st.serialize_field("nu", &self.nu)?;
        st.serialize_field(
            "aux",
            &AuxRecord {
                z: self.aux.z,
                s: AuxMonomial::indices(self.aux.s),
                s_prime: AuxMonomial::indices(self.aux.s_prime),
            },
        )?;
        st.end()
    }
}
