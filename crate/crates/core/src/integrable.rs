//! Residual checks for the bilinear identities satisfied by τ.
//!
//! Every check is done in polynomial form; nothing is ever divided by τ.
//! A report passes exactly when its residual series is empty.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::characters::CharacterCache;
use crate::error::{HurwitzError, Result};
use crate::formal_series::{AuxMonomial, MonomialKey, PShift, Side, TruncatedSeries, Truncation};
use crate::hurwitz::{build_tau, build_tau_shifted, simple_hurwitz};
use crate::partitions::Partition;
use crate::rational::{exp_coefficients, factorial, from_biguint, int, ratio, Rational};

/// Orders a residual was computed and checked at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReportOrders {
    pub d_max: u32,
    pub b_max: u32,
    /// Sub-window in which the residual is guaranteed free of truncation
    /// artifacts. Equal to the full orders for every identity here, since
    /// all operations only raise `q`- and `β`-degrees.
    pub d_max_eff: u32,
    pub b_max_eff: u32,
}

impl ReportOrders {
    fn full(t: Truncation) -> Self {
        Self { d_max: t.d_max, b_max: t.b_max, d_max_eff: t.d_max, b_max_eff: t.b_max }
    }
}

/// Outcome of one identity check.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub identity: String,
    pub orders: ReportOrders,
    pub residual: TruncatedSeries,
    pub notes: Vec<String>,
}

impl VerificationReport {
    fn new(identity: impl Into<String>, orders: ReportOrders, residual: TruncatedSeries) -> Self {
        Self { identity: identity.into(), orders, residual, notes: Vec::new() }
    }

    pub fn pass(&self) -> bool {
        self.residual.is_zero()
    }

    pub fn first_failure(&self) -> Option<&MonomialKey> {
        self.residual.first_term().map(|(k, _)| k)
    }

    fn note(mut self, text: impl Into<String>) -> Self {
        self.notes.push(text.into());
        self
    }
}

impl Serialize for VerificationReport {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = ser.serialize_struct("VerificationReport", 6)?;
        st.serialize_field("identity", &self.identity)?;
        st.serialize_field("orders", &self.orders)?;
        st.serialize_field("pass", &self.pass())?;
        st.serialize_field("first_failure", &self.first_failure())?;
        st.serialize_field("residual_terms", &self.residual.len())?;
        st.serialize_field("notes", &self.notes)?;
        st.end()
    }
}

/// `Σ_b c^b/b! β^b` at the given orders.
fn exp_beta(trunc: Truncation, c: &Rational) -> TruncatedSeries {
    let terms = exp_coefficients(c, trunc.b_max)
        .into_iter()
        .enumerate()
        .map(|(b, v)| (MonomialKey::new(0, b as u32, Partition::empty(), Partition::empty()), v));
    TruncatedSeries::from_terms(trunc, terms)
}

/// `τ ∂²τ/∂p₁∂p'₁ − ∂τ/∂p₁ · ∂τ/∂p'₁ − q τ(e^β q) τ(e^{−β} q)`.
pub fn toda_residual(tau: &TruncatedSeries) -> Result<TruncatedSeries> {
    let d1 = tau.d_dp(1, Side::P);
    let d1p = tau.d_dp(1, Side::PPrime);
    let d11 = d1.d_dp(1, Side::PPrime);
    let lhs = tau.mul(&d11)?.sub(&d1.mul(&d1p)?)?;
    let rhs = tau.scale_q_exp(1).mul(&tau.scale_q_exp(-1))?.mul_q_power(1);
    lhs.sub(&rhs)
}

pub fn verify_toda_for(tau: &TruncatedSeries) -> Result<VerificationReport> {
    let residual = toda_residual(tau)?;
    Ok(VerificationReport::new("toda", ReportOrders::full(tau.truncation()), residual))
}

pub fn verify_toda(chars: &CharacterCache, d_max: u32, b_max: u32) -> Result<VerificationReport> {
    if d_max == 0 {
        return Err(HurwitzError::InvalidArgument("toda check needs d_max ≥ 1".into()));
    }
    verify_toda_for(&build_tau(chars, d_max, b_max))
}

/// Exponent `n(4n² − 1)/24` of `e^β` in `τₙ = q^{n²/2} e^{n(4n²−1)β/24} τ(e^{nβ} q)`.
pub fn tau_n_beta_exponent(n: i64) -> Rational {
    ratio(n * (4 * n * n - 1), 24)
}

/// `τ ↦ e^{n(4n²−1)β/24} τ(…, e^{nβ} q)`; the formal `q^{n²/2}` is left out.
pub fn tau_n_map(tau: &TruncatedSeries, n: i64) -> Result<TruncatedSeries> {
    exp_beta(tau.truncation(), &tau_n_beta_exponent(n)).mul(&tau.scale_q_exp(n))
}

/// The shift map applied with `n` and then `−n` must give back τ, and the
/// `q`-rescaling must agree with τ rebuilt from the weights `f2(λ) + n|λ|`.
pub fn verify_tau_n_for(chars: &CharacterCache, tau: &TruncatedSeries, n: i64) -> Result<VerificationReport> {
    if n.abs() > 3 {
        return Err(HurwitzError::InvalidArgument(format!("|n| = {} exceeds 3", n.abs())));
    }
    let t = tau.truncation();
    let round_trip = tau_n_map(&tau_n_map(tau, n)?, -n)?.sub(tau)?;
    let direct = tau.scale_q_exp(n).sub(&build_tau_shifted(chars, t.d_max, t.b_max, n))?;
    let (residual, which) = if !round_trip.is_zero() {
        (round_trip, "round trip n, -n fails")
    } else if !direct.is_zero() {
        (direct, "rescaled q disagrees with shifted content weights")
    } else {
        (round_trip, "round trip n, -n and shifted content weights agree")
    };
    let mut report = VerificationReport::new("tau-n", ReportOrders::full(t), residual)
        .note(which)
        .note(format!("beta exponent n(4n^2-1)/24 at n={n}: {}", tau_n_beta_exponent(n)));
    if n == 0 {
        let identity = tau_n_map(tau, 0)?.sub(tau)?;
        if !identity.is_zero() {
            report.residual = identity;
            report.notes.push("n=0 is not the identity".into());
        }
    }
    Ok(report)
}

pub fn verify_tau_n(chars: &CharacterCache, n: i64, d_max: u32, b_max: u32) -> Result<VerificationReport> {
    verify_tau_n_for(chars, &build_tau(chars, d_max, b_max), n)
}

/// A single first-order symbol `s_n` (side `P`) or `s'_n` (side `P'`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HirotaPerturbation {
    pub side: Side,
    pub index: u32,
}

impl HirotaPerturbation {
    pub fn new(side: Side, index: u32) -> Self {
        Self { side, index }
    }
}

const MAX_HIROTA_INDEX: u32 = 3;

fn check_hirota_scope(m: i32, pert: Option<HirotaPerturbation>) -> Result<()> {
    if !(-1..=1).contains(&m) {
        return Err(HurwitzError::RestrictedHirotaScope(format!("m = {m} outside {{-1, 0, 1}}")));
    }
    if let Some(p) = pert {
        if p.index == 0 || p.index > MAX_HIROTA_INDEX {
            return Err(HurwitzError::RestrictedHirotaScope(format!(
                "symbol index {} outside 1..={MAX_HIROTA_INDEX}",
                p.index
            )));
        }
    }
    Ok(())
}

/// `p_k → p_k ± (symbol) ± z^k` shifts for one side.
fn shifts(side: Side, pw: u32, pert: Option<HirotaPerturbation>, symbol_sign: i64, z_sign: i64) -> Result<Vec<PShift>> {
    let mut out = Vec::new();
    if z_sign != 0 {
        for k in 1..=pw {
            out.push(PShift::z_power(side, k, int(z_sign)));
        }
    }
    if let Some(p) = pert.filter(|p| p.side == side) {
        out.push(PShift::new(side, p.index, vec![(AuxMonomial::symbol(side, p.index)?, int(symbol_sign))]));
    }
    Ok(out)
}

/// `1 + c s_n z^{−n}` for the perturbing symbol when it lies on `side`.
fn prefactor(trunc: Truncation, pert: Option<HirotaPerturbation>, side: Side, c: Rational) -> Result<TruncatedSeries> {
    let mut out = TruncatedSeries::one(trunc);
    if let Some(p) = pert.filter(|p| p.side == side) {
        let mut aux = AuxMonomial::symbol(side, p.index)?;
        aux.z = -(p.index as i32);
        let key = MonomialKey::constant().with_aux(aux);
        out = out.add(&TruncatedSeries::monomial(trunc, key, c / int(p.index as i64)))?;
    }
    Ok(out)
}

/// Left minus right side of the bilinear equation of index `m`, to first
/// order in one symbol:
///
/// `q^{m+1} e^{m(m+1)β/2} [z^{−1−m}] (1 − 2 s_n z^{−n}/n) τ_{m+1}(P+S+z⃗, P'+S') τ_{−1}(P−S−z⃗, P'−S')`
/// `− [z^{m+1}] (1 + 2 s'_n z^{−n}/n) τ_m(P+S, P'+S'−z⃗) τ_0(P−S, P'−S'+z⃗)`,
///
/// where `τ_k` is τ with `q → e^{kβ} q` and `z⃗ = (z, z², z³, …)`.
pub fn hirota_residual(tau: &TruncatedSeries, m: i32, pert: Option<HirotaPerturbation>) -> Result<TruncatedSeries> {
    check_hirota_scope(m, pert)?;
    let base = tau.truncation();
    let n_s = pert.map_or(0, |p| p.index as i32);
    let window = base.with_z_range(-n_s, m + 1 + n_s);
    let t = tau.retruncate(window);
    let pw = window.p_weight_max;
    let (p, pp) = (Side::P, Side::PPrime);

    let diamond =
        t.scale_q_exp(m as i64 + 1).shift_p(&[shifts(p, pw, pert, 1, 1)?, shifts(pp, pw, pert, 1, 0)?].concat())?;
    let heart = t.scale_q_exp(-1).shift_p(&[shifts(p, pw, pert, -1, -1)?, shifts(pp, pw, pert, -1, 0)?].concat())?;
    let club = t.scale_q_exp(m as i64).shift_p(&[shifts(p, pw, pert, 1, 0)?, shifts(pp, pw, pert, 1, -1)?].concat())?;
    let spade = t.shift_p(&[shifts(p, pw, pert, -1, 0)?, shifts(pp, pw, pert, -1, 1)?].concat())?;

    let left_pre = prefactor(window, pert, p, int(-2))?;
    let right_pre = prefactor(window, pert, pp, int(2))?;
    let lhs = left_pre.mul(&diamond.mul(&heart)?)?.z_coefficient(-1 - m);
    let rhs = right_pre.mul(&club.mul(&spade)?)?.z_coefficient(m + 1);

    let flat = lhs.truncation();
    let lhs = if m + 1 >= 0 { lhs.mul_q_power((m + 1) as u32) } else { lhs };
    let lhs = exp_beta(flat, &ratio((m * (m + 1)) as i64, 2)).mul(&lhs)?;
    lhs.sub(&rhs)
}

/// The `s₁` coefficient of the `m = 0` Hirota residual minus twice the Toda
/// residual; empty for every τ.
pub fn hirota_toda_link(tau: &TruncatedSeries) -> Result<TruncatedSeries> {
    let hirota = hirota_residual(tau, 0, Some(HirotaPerturbation::new(Side::P, 1)))?;
    let s1 = hirota.symbol_coefficient(1, 0);
    s1.sub(&toda_residual(tau)?.scale(&int(2)))
}

pub fn verify_hirota_for(
    tau: &TruncatedSeries,
    m: i32,
    pert: Option<HirotaPerturbation>,
) -> Result<VerificationReport> {
    let residual = hirota_residual(tau, m, pert)?;
    let mut report = VerificationReport::new("hirota", ReportOrders::full(tau.truncation()), residual);
    report.notes.push(match pert {
        Some(HirotaPerturbation { side: Side::P, index }) => format!("m={m}, first order in s{index}"),
        Some(HirotaPerturbation { side: Side::PPrime, index }) => format!("m={m}, first order in s'{index}"),
        None => format!("m={m}, S = S' = 0"),
    });
    if m == 0 && pert == Some(HirotaPerturbation::new(Side::P, 1)) {
        let link = hirota_toda_link(tau)?;
        report
            .notes
            .push(format!("s1 coefficient equals 2 x toda residual: {}", if link.is_zero() { "yes" } else { "no" }));
        if report.residual.is_zero() && !link.is_zero() {
            report.residual = link;
        }
    }
    Ok(report)
}

pub fn verify_hirota(
    chars: &CharacterCache,
    m: i32,
    pert: Option<HirotaPerturbation>,
    d_max: u32,
    b_max: u32,
) -> Result<VerificationReport> {
    check_hirota_scope(m, pert)?;
    verify_hirota_for(&build_tau(chars, d_max, b_max), m, pert)
}

fn x_key(d: u32, b: u32) -> MonomialKey {
    MonomialKey::new(d, b, Partition::ones(d), Partition::ones(d))
}

/// After `p_k = p'_k = 0` for `k ≥ 2`: every monomial must be a power of
/// `x = q p₁ p'₁`, and `τ D²τ − (Dτ)² = x τ(e^β q) τ(e^{−β} q)` with
/// `D = q ∂/∂q`.
pub fn verify_toda_specialized_for(tau: &TruncatedSeries) -> Result<VerificationReport> {
    let t = tau.truncation();
    let r = tau.restrict_to_p1();
    let stray = TruncatedSeries::from_terms(
        t,
        r.terms().filter(|(k, _)| k.mu.size() != k.dq || k.nu.size() != k.dq).map(|(k, v)| (k.clone(), v.clone())),
    );
    if !stray.is_zero() {
        return Ok(VerificationReport::new("toda-specialized", ReportOrders::full(t), stray)
            .note("restricted series is not a function of q p1 p'1"));
    }
    let d = r.euler_q();
    let d2 = d.euler_q();
    let lhs = r.mul(&d2)?.sub(&d.mul(&d)?)?;
    let x = TruncatedSeries::monomial(t, x_key(1, 0), Rational::one());
    let rhs = x.mul(&r.scale_q_exp(1).mul(&r.scale_q_exp(-1))?)?;
    Ok(VerificationReport::new("toda-specialized", ReportOrders::full(t), lhs.sub(&rhs)?)
        .note("restricted series depends only on x = q p1 p'1"))
}

pub fn verify_toda_specialized(chars: &CharacterCache, d_max: u32, b_max: u32) -> Result<VerificationReport> {
    verify_toda_specialized_for(&build_tau(chars, d_max, b_max))
}

/// Coefficients `[x^d β^b] H` for `1 ≤ d ≤ d_max`, `b ≤ b_max`, from the
/// one-variable Toda equation alone:
/// `H₁ = x`, `d² H_d = [x^d] x exp(H(e^β x) + H(e^{−β} x) − 2H)`.
///
/// `table[d][b]` holds `[x^d β^b] H`; row 0 is zero.
pub fn toda_recursion(d_max: u32, b_max: u32) -> Result<Vec<Vec<Rational>>> {
    let t = Truncation::new(d_max, b_max);
    let mut h = TruncatedSeries::monomial(t, x_key(1, 0), Rational::one());
    let x = h.clone();
    for d in 2..=d_max {
        let f = h.scale_q_exp(1).add(&h.scale_q_exp(-1))?.sub(&h.scale(&int(2)))?;
        let r = x.mul(&f.exp()?)?;
        let dd = int((d * d) as i64);
        let layer: Vec<_> = (0..=b_max).map(|b| (x_key(d, b), r.coefficient(&x_key(d, b)) / &dd)).collect();
        h = h.add(&TruncatedSeries::from_terms(t, layer))?;
    }
    Ok((0..=d_max)
        .map(|d| (0..=b_max).map(|b| if d == 0 { Rational::zero() } else { h.coefficient(&x_key(d, b)) }).collect())
        .collect())
}

/// `(g, d, recursion value, direct value)` for every `2g + 2d − 2 ≤ b_total`
/// with `d ≥ 1` where the Toda recursion and [`simple_hurwitz`] disagree.
pub fn simple_hurwitz_mismatches(chars: &CharacterCache, b_total: u32) -> Result<Vec<(u32, u32, Rational, Rational)>> {
    let d_max = b_total / 2 + 1;
    let table = toda_recursion(d_max, b_total)?;
    let mut out = Vec::new();
    for d in 1..=d_max {
        for g in 0.. {
            let b = 2 * g + 2 * d - 2;
            if b > b_total {
                break;
            }
            let via_toda = &table[d as usize][b as usize] * from_biguint(&factorial(b));
            let direct = simple_hurwitz(chars, g, d)?;
            if via_toda != direct {
                out.push((g, d, via_toda, direct));
            }
        }
    }
    Ok(out)
}
