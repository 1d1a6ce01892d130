//! Parameter derivations for the piecing argument and the four-condition
//! feasibility check.
//!
//! All inequalities are decided with exact big-rational arithmetic when the
//! exponents are small (`t − 1 ≤ 64`). Larger instances fall back to a
//! log-space comparison with an explicit error envelope; a comparison inside
//! the envelope is reported as [`Truth::Indeterminate`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{input, Result};
use crate::rational::{self, Ratio};
use crate::subsets::binomial_big;

/// Largest `t − 1` for which condition 4 is evaluated exactly.
pub const EXACT_CONDITION4_MAX_EXPONENT: u64 = 64;

/// Relative width of the log-space comparison envelope.
const LOG_ENVELOPE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParamOrigin {
    Polylog,
    Bounded,
    Grid,
}

/// The tuple driving one run of the piecing mechanism.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParameterSet {
    #[serde(serialize_with = "rational::serialize_ratio")]
    pub rho: Ratio,
    /// Target average degree `2ρ`.
    #[serde(serialize_with = "rational::serialize_ratio")]
    pub s: Ratio,
    pub epsilon: f64,
    pub t: u64,
    pub a: u64,
    pub r: u64,
    pub k: u64,
    #[serde(serialize_with = "rational::serialize_ratio")]
    pub c0: Ratio,
    /// Exponent `C` of the polylog factor, when the derivation used one.
    pub log_exponent: Option<u32>,
    /// `f = (ln d)^C`, when the derivation used one.
    pub f: Option<f64>,
    pub origin: ParamOrigin,
}

impl ParameterSet {
    /// A parameter point for an explicit `(t, a, r)`; `k` and `c₀` follow the
    /// usual rules.
    pub fn explicit(rho: Ratio, t: u64, a: u64, r: u64, origin: ParamOrigin) -> Self {
        let k = default_k(&rho, t, a);
        Self {
            rho,
            s: rho * 2,
            epsilon: f64::NAN,
            t,
            a,
            r,
            k,
            c0: c0_for(&rho, k),
            log_exponent: None,
            f: None,
            origin,
        }
    }
}

/// `k = max(⌈2ρ⌉ + 1, ⌈t/a⌉ + 1)`, so the caterpillar `T_{a,t−1}` always has
/// maximum degree at most `k`.
pub fn default_k(rho: &Ratio, t: u64, a: u64) -> u64 {
    let base = (rational::ceil(&(*rho * 2)) + 1) as u64;
    if a == 0 {
        base
    } else {
        base.max(t.div_ceil(a) + 1)
    }
}

/// `c₀ = 1/(16ρ(k+2))`.
pub fn c0_for(rho: &Ratio, k: u64) -> Ratio {
    Ratio::from_integer(1) / (*rho * Ratio::from_integer(16 * (k as i64 + 2)))
}

/// Result of a derivation: the values are always attached.
#[derive(Clone, Debug, PartialEq)]
pub enum Derivation {
    Feasible(ParameterSet),
    Infeasible { params: ParameterSet, reason: String },
}

impl Derivation {
    pub fn params(&self) -> &ParameterSet {
        match self {
            Derivation::Feasible(p) | Derivation::Infeasible { params: p, .. } => p,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, Derivation::Feasible(_))
    }
}

/// Rounds away floating noise before an integer floor/ceil of a real-valued
/// formula.
fn snap(x: f64) -> f64 {
    let nearest = x.round();
    if (x - nearest).abs() <= 1e-9 * nearest.abs().max(1.0) {
        nearest
    } else {
        x
    }
}

/// Parameters from the polylog regime: `ε = 1/ln d`, `f = (ln d)^C`,
/// `r = ⌊n·d^{−ρ/(ρ−1)}·f⌋`, `t = ⌈rε/8⌉`, `a = ⌈(t/ρ)(1 − ε)⌉`,
/// `k = ⌈2ρ⌉ + 1`. Logarithms are natural.
pub fn derive_params_polylog(n: u64, d: f64, rho: Ratio, log_exponent: u32) -> Result<Derivation> {
    if d.is_nan() || d <= 1.0 || !d.is_finite() {
        return input(format!("polylog derivation needs d > 1, got {d}"));
    }
    if rho <= Ratio::from_integer(1) {
        return input(format!("polylog derivation needs ρ > 1, got {}", rational::format_ratio(&rho)));
    }
    let rho_f = rational::to_f64(&rho);
    let ln_d = d.ln();
    let epsilon = 1.0 / ln_d;
    let f = ln_d.powi(log_exponent as i32);
    let exponent = rho_f / (rho_f - 1.0);
    // n·d^{−ρ/(ρ−1)}·f in log space to avoid underflow
    let ln_r = (n as f64).ln() - exponent * ln_d + f.ln();
    let r_real = ln_r.exp();
    let r = if r_real.is_finite() { snap(r_real).floor().max(0.0) as u64 } else { 0 };
    let t = snap(r as f64 * epsilon / 8.0).ceil().max(0.0) as u64;
    let a = snap((t as f64 / rho_f) * (1.0 - epsilon)).ceil().max(0.0) as u64;
    let k = (rational::ceil(&(rho * 2)) + 1) as u64;
    let params = ParameterSet {
        rho,
        s: rho * 2,
        epsilon,
        t,
        a,
        r,
        k,
        c0: c0_for(&rho, k),
        log_exponent: Some(log_exponent),
        f: Some(f),
        origin: ParamOrigin::Polylog,
    };
    Ok(if r < 1 {
        Derivation::Infeasible { params, reason: format!("r = ⌊{r_real:.4e}⌋ < 1") }
    } else if a < 1 {
        Derivation::Infeasible { params, reason: "a < 1 (ε too close to 1)".into() }
    } else {
        Derivation::Feasible(params)
    })
}

/// Parameters from the bounded-size regime: `t = ⌈4ρ/ε⌉`, `a = ⌊t/ρ⌋ − 1`,
/// and `r` the smallest integer satisfying all four conditions for `(n, d)`.
pub fn derive_params_bounded(n: u64, d: &BigRational, rho: Ratio, epsilon: Ratio) -> Result<Derivation> {
    if rho <= Ratio::from_integer(1) {
        return input(format!("bounded derivation needs ρ > 1, got {}", rational::format_ratio(&rho)));
    }
    if epsilon <= Ratio::from_integer(0) || epsilon >= Ratio::from_integer(1) {
        return input(format!("bounded derivation needs 0 < ε < 1, got {}", rational::format_ratio(&epsilon)));
    }
    let t = rational::ceil(&(rho * 4 / epsilon)) as u64;
    let a = (rational::floor(&(Ratio::from_integer(t as i64) / rho)) - 1).max(0) as u64;
    let k = (rational::ceil(&(rho * 2)) + 1) as u64;
    let mut params = ParameterSet {
        rho,
        s: rho * 2,
        epsilon: rational::to_f64(&epsilon),
        t,
        a,
        r: 0,
        k,
        c0: c0_for(&rho, k),
        log_exponent: None,
        f: None,
        origin: ParamOrigin::Bounded,
    };
    let lower = 2 * (k + 2) * t;
    let Some(r1) = smallest_r_for_condition1(&rho, t, a) else {
        return Ok(Derivation::Infeasible { params, reason: "condition 1 cannot hold for any r".into() });
    };
    params.r = lower.max(r1);
    if params.r > n {
        let reason = format!("condition 3 needs r ≥ {} but n = {n}", params.r);
        return Ok(Derivation::Infeasible { params, reason });
    }
    let report = check_four_conditions(&params, n, d);
    Ok(match report.first_failure() {
        None => Derivation::Feasible(params),
        Some(c) => {
            let reason = format!("condition {} is {:?} at the smallest admissible r", c.index, c.holds);
            Derivation::Infeasible { params, reason }
        }
    })
}

/// Smallest `r > t` with `ρ ≤ (1 − t/(r−t))·(t−1)/a`, if any.
fn smallest_r_for_condition1(rho: &Ratio, t: u64, a: u64) -> Option<u64> {
    if a == 0 || t < 2 {
        return None;
    }
    let x = rational::to_big(rho) * BigRational::new(BigInt::from(a), BigInt::from(t - 1));
    if x >= BigRational::one() {
        return None;
    }
    // (r − 2t)/(r − t) ≥ x  ⇔  r ≥ t(2 − x)/(1 − x)
    let two = BigRational::from_integer(BigInt::from(2));
    let bound = BigRational::from_integer(BigInt::from(t)) * (&two - &x) / (BigRational::one() - &x);
    let mut r = bound.ceil().to_integer().to_u64()?.max(t + 1);
    while !condition1_holds(rho, t, a, r) {
        r += 1;
    }
    Some(r)
}

fn condition1_holds(rho: &Ratio, t: u64, a: u64, r: u64) -> bool {
    matches!(condition1(rho, t, a, r).holds, Truth::Holds)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Truth {
    Holds,
    Fails,
    Indeterminate,
}

/// One evaluated inequality with both sides rendered for reporting.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionCheck {
    pub index: u8,
    pub holds: Truth,
    pub lhs: String,
    pub rhs: String,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FourConditions {
    pub conditions: [ConditionCheck; 4],
}

impl FourConditions {
    pub fn all_hold(&self) -> bool {
        self.conditions.iter().all(|c| c.holds == Truth::Holds)
    }

    pub fn first_failure(&self) -> Option<&ConditionCheck> {
        self.conditions.iter().find(|c| c.holds != Truth::Holds)
    }

    pub fn get(&self, index: u8) -> &ConditionCheck {
        &self.conditions[index as usize - 1]
    }
}

fn big(x: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn show(x: &BigRational) -> String {
    let v = rational::big_to_f64(x);
    if x.is_integer() && x.abs() < big(1u64 << 53) {
        x.to_integer().to_string()
    } else {
        format!("{v:.6}")
    }
}

fn truth(b: bool) -> Truth {
    if b {
        Truth::Holds
    } else {
        Truth::Fails
    }
}

fn condition1(rho: &Ratio, t: u64, a: u64, r: u64) -> ConditionCheck {
    let lhs = rational::format_ratio(rho);
    if r <= t {
        return ConditionCheck {
            index: 1,
            holds: Truth::Fails,
            lhs,
            rhs: "undefined".into(),
            note: Some(format!("r = {r} ≤ t = {t} makes r − t non-positive")),
        };
    }
    if a == 0 {
        return ConditionCheck { index: 1, holds: Truth::Fails, lhs, rhs: "undefined".into(), note: Some("a = 0".into()) };
    }
    let slack = BigRational::one() - big(t) / big(r - t);
    let rhs = slack * BigRational::new(BigInt::from(t as i64 - 1), BigInt::from(a));
    ConditionCheck { index: 1, holds: truth(rational::to_big(rho) <= rhs), lhs, rhs: show(&rhs), note: None }
}

/// Evaluates the four conditions for `p` on an `n`-vertex graph of average
/// degree `d`:
///
/// 1. `ρ ≤ (1 − t/(r−t))·(t−1)/a`
/// 2. `t/a ≤ 2ρ`
/// 3. `2(⌈2ρ⌉+3)t ≤ r ≤ n`
/// 4. `(c₀d)^{t−1} ≥ C(n, t−a)·r·(2ρr/a)^{3t}`
pub fn check_four_conditions(p: &ParameterSet, n: u64, d: &BigRational) -> FourConditions {
    let rho = rational::to_big(&p.rho);
    let c1 = condition1(&p.rho, p.t, p.a, p.r);

    let c2 = if p.a == 0 {
        ConditionCheck { index: 2, holds: Truth::Fails, lhs: "t/0".into(), rhs: show(&(&rho * big(2))), note: Some("a = 0".into()) }
    } else {
        let lhs = big(p.t) / big(p.a);
        let rhs = &rho * big(2);
        ConditionCheck { index: 2, holds: truth(lhs <= rhs), lhs: show(&lhs), rhs: show(&rhs), note: None }
    };

    let ceil_two_rho = rational::ceil(&(p.rho * 2)) as u64;
    let lower = 2 * (ceil_two_rho + 3) * p.t;
    let c3 = ConditionCheck {
        index: 3,
        holds: truth(lower <= p.r && p.r <= n),
        lhs: format!("{lower} ≤ {}", p.r),
        rhs: format!("{} ≤ {n}", p.r),
        note: None,
    };

    let c4 = condition4(p, n, d);
    FourConditions { conditions: [c1, c2, c3, c4] }
}

fn condition4(p: &ParameterSet, n: u64, d: &BigRational) -> ConditionCheck {
    let fail = |note: &str| ConditionCheck {
        index: 4,
        holds: Truth::Fails,
        lhs: "-".into(),
        rhs: "-".into(),
        note: Some(note.to_string()),
    };
    if p.a == 0 {
        return fail("a = 0");
    }
    if p.t == 0 || p.a > p.t {
        return fail("needs t ≥ a ≥ 1");
    }
    let rho = rational::to_big(&p.rho);
    let c0d = rational::to_big(&p.c0) * d;
    let base = &rho * big(2 * p.r) / big(p.a);
    if p.t - 1 <= EXACT_CONDITION4_MAX_EXPONENT {
        let lhs = rational::big_pow(&c0d, p.t - 1);
        let binom = BigRational::from_integer(BigInt::from(binomial_big(n, p.t - p.a)));
        let rhs = binom * big(p.r) * rational::big_pow(&base, 3 * p.t);
        return ConditionCheck { index: 4, holds: truth(lhs >= rhs), lhs: show(&lhs), rhs: show(&rhs), note: Some("exact".into()) };
    }
    // log space
    let c0d_f = rational::big_to_f64(&c0d);
    let base_f = rational::big_to_f64(&base);
    if c0d_f.is_nan() || c0d_f <= 0.0 || base_f.is_nan() || base_f <= 0.0 || p.r == 0 {
        return fail("non-positive quantity in log-space evaluation");
    }
    let ln_lhs = (p.t - 1) as f64 * c0d_f.ln();
    let Some(ln_binom) = ln_binomial(n, p.t - p.a) else {
        return ConditionCheck {
            index: 4,
            holds: Truth::Indeterminate,
            lhs: format!("exp({ln_lhs:.6})"),
            rhs: "-".into(),
            note: Some("binomial too large to evaluate".into()),
        };
    };
    let ln_rhs = ln_binom + (p.r as f64).ln() + 3.0 * p.t as f64 * base_f.ln();
    let envelope = LOG_ENVELOPE * (1.0 + ln_lhs.abs() + ln_rhs.abs());
    let holds = if ln_lhs - ln_rhs > envelope {
        Truth::Holds
    } else if ln_rhs - ln_lhs > envelope {
        Truth::Fails
    } else {
        Truth::Indeterminate
    };
    ConditionCheck {
        index: 4,
        holds,
        lhs: format!("exp({ln_lhs:.6})"),
        rhs: format!("exp({ln_rhs:.6})"),
        note: Some(format!("log-space, envelope {envelope:.3e}")),
    }
}

/// `ln C(n, k)` by direct summation; `None` when `k` is impractically large.
fn ln_binomial(n: u64, k: u64) -> Option<f64> {
    if k > n {
        return Some(f64::NEG_INFINITY);
    }
    let k = k.min(n - k);
    if k > 100_000_000 {
        return None;
    }
    Some((0..k).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum())
}

/// `d` as an exact big rational.
pub fn degree_to_big(d: &Ratio) -> BigRational {
    rational::to_big(d)
}

/// Exact big-rational image of a finite float.
pub fn f64_to_big(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}
