//! Closed-form analysis of the trail generating function.
//!
//! For model parameters `(λ, δ)` the expected number of `(a, b)`-trails
//! between two planted vertices is governed by
//!
//! ```text
//! c_{a,b} = Σ_{k=1}^{min(a,b)} λ^b (1-δ)^(b-k) (2δ)^k C(a-1, k-1) C(b-1, k-1)
//! ```
//!
//! whose bivariate generating function is `g = r / (1 - r)` with
//! `r(x, y) = 2x/(1-x) · δλy / (1 - (1-δ)λy)`. Recovery is possible below
//! `λ*(δ) = 1 / (√(2δ) + √(1-δ))²`.

use statrs::function::factorial::{binomial, ln_binomial};

use crate::error::{precondition, Error, Result};

/// Binomials up to this size are evaluated directly; above it in log space.
const DIRECT_BINOMIAL_LIMIT: u64 = 60;
/// Relative distance to the threshold treated as the critical point.
const CRITICAL_TOL: f64 = 1e-12;

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta <= 1.0 {
        Ok(())
    } else {
        Err(precondition(format!("delta must lie in (0, 1], got {delta}")))
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda >= 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(precondition(format!("lambda must be a non-negative real, got {lambda}")))
    }
}

/// `λ*(δ) = 1 / (√(2δ) + √(1-δ))²`.
pub fn threshold(delta: f64) -> Result<f64> {
    check_delta(delta)?;
    if delta == 1.0 {
        return Ok(0.5);
    }
    let s = (2.0 * delta).sqrt() + (1.0 - delta).sqrt();
    Ok(1.0 / (s * s))
}

/// `c_{a,b}(λ, δ)`; both orders must be at least one.
pub fn coefficient(lambda: f64, delta: f64, a: u64, b: u64) -> Result<f64> {
    check_lambda(lambda)?;
    check_delta(delta)?;
    if a == 0 || b == 0 {
        return Err(precondition("coefficient needs a >= 1 and b >= 1; use zero_red_trail_mean for a = 0"));
    }
    if lambda == 0.0 {
        return Ok(0.0);
    }
    let kmax = a.min(b);
    if delta == 1.0 {
        // Only k = b survives (the (1-δ)^(b-k) factor is 0^0 = 1 there).
        if b > a {
            return Ok(0.0);
        }
        return Ok(term(lambda, 0.0, 2.0, a, b, b));
    }
    let one_minus = 1.0 - delta;
    let two_delta = 2.0 * delta;
    Ok((1..=kmax).map(|k| term(lambda, one_minus, two_delta, a, b, k)).sum())
}

fn term(lambda: f64, one_minus: f64, two_delta: f64, a: u64, b: u64, k: u64) -> f64 {
    if one_minus == 0.0 && b > k {
        return 0.0;
    }
    if a - 1 <= DIRECT_BINOMIAL_LIMIT && b - 1 <= DIRECT_BINOMIAL_LIMIT {
        lambda.powi(b as i32)
            * one_minus.powi((b - k) as i32)
            * two_delta.powi(k as i32)
            * binomial(a - 1, k - 1)
            * binomial(b - 1, k - 1)
    } else {
        let ln_one_minus = if b == k { 0.0 } else { (b - k) as f64 * one_minus.ln() };
        (b as f64 * lambda.ln()
            + ln_one_minus
            + k as f64 * two_delta.ln()
            + ln_binomial(a - 1, k - 1)
            + ln_binomial(b - 1, k - 1))
        .exp()
    }
}

/// The `n`-free factor `(1-δ)^(b-1) λ^b` of the mean number of `(0, b)`-trails
/// between two fixed vertices.
pub fn zero_red_trail_mean(lambda: f64, delta: f64, b: u64) -> Result<f64> {
    check_lambda(lambda)?;
    check_delta(delta)?;
    if b == 0 {
        return Err(precondition("zero_red_trail_mean needs b >= 1"));
    }
    Ok((1.0 - delta).powi(b as i32 - 1) * lambda.powi(b as i32))
}

/// `r(x, y)`, the ratio of the geometric series behind `g`.
pub fn ratio(lambda: f64, delta: f64, x: f64, y: f64) -> f64 {
    2.0 * x / (1.0 - x) * (delta * lambda * y / (1.0 - (1.0 - delta) * lambda * y))
}

/// Supremum of admissible `y`, `1 / (λ(1-δ))` (infinite when that product is 0).
pub fn y_limit(lambda: f64, delta: f64) -> f64 {
    let p = lambda * (1.0 - delta);
    if p <= 0.0 {
        f64::INFINITY
    } else {
        1.0 / p
    }
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub enum GValue {
    Finite(f64),
    Diverges,
}

/// `g(x, y) = Σ_{a,b≥1} c_{a,b} x^a y^b`.
pub fn g_value(lambda: f64, delta: f64, x: f64, y: f64) -> Result<GValue> {
    check_lambda(lambda)?;
    check_delta(delta)?;
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Domain(format!("x = {x} outside [0, 1)")));
    }
    if !(y >= 0.0 && y < y_limit(lambda, delta)) {
        return Err(Error::Domain(format!("y = {y} outside [0, 1/(λ(1-δ)))")));
    }
    let r = ratio(lambda, delta, x, y);
    Ok(if r < 1.0 { GValue::Finite(r / (1.0 - r)) } else { GValue::Diverges })
}

/// A point certifying the sub-threshold regime, with `x^(1+2ε) y^(1-2ε) = 1`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Witness {
    pub x: f64,
    pub y: f64,
    pub epsilon: f64,
}

impl Witness {
    pub fn ratio(&self, lambda: f64, delta: f64) -> f64 {
        ratio(lambda, delta, self.x, self.y)
    }
}

/// Finds `(x, y, ε)` with `0 < x < 1 < y < 1/(λ(1-δ))`, `r(x, y) < 1` and
/// `x^(1+2ε) y^(1-2ε) = 1`, or `None` when no such point exists.
///
/// Starts from `x = (1-(3δ-1)λ)/2`, `y = 1/x` and bisects `y` upwards to the
/// largest value whose ratio stays below `1 - min(1e-6, (1 - r₀)/2)`.
pub fn find_witness(lambda: f64, delta: f64) -> Option<Witness> {
    if check_lambda(lambda).is_err() || check_delta(delta).is_err() {
        return None;
    }
    if lambda == 0.0 {
        return Some(zero_lambda_witness());
    }
    let x = (1.0 - (3.0 * delta - 1.0) * lambda) / 2.0;
    if !(x > 0.0 && x < 1.0) {
        return None;
    }
    let y0 = 1.0 / x;
    let ymax = y_limit(lambda, delta);
    if y0 >= ymax {
        return None;
    }
    let r0 = ratio(lambda, delta, x, y0);
    if !(r0 < 1.0) || lambda >= threshold(delta).ok()? {
        return None;
    }
    let target = 1.0 - (1e-6f64).min((1.0 - r0) / 2.0);
    let mut lo = y0;
    let mut hi = if ymax.is_finite() {
        ymax
    } else {
        let mut h = 2.0 * y0;
        while ratio(lambda, delta, x, h) < target {
            h *= 2.0;
        }
        h
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let r = ratio(lambda, delta, x, mid);
        if r.is_finite() && r > 0.0 && r < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let y = lo;
    if y <= y0 {
        return None;
    }
    let epsilon = (x * y).ln() / (2.0 * (y / x).ln());
    Some(Witness { x, y, epsilon })
}

/// With no background graph every ratio is zero; any `x < 1 < y` works.
fn zero_lambda_witness() -> Witness {
    let (x, y) = (0.5f64, 4.0f64);
    Witness { x, y, epsilon: (x * y).ln() / (2.0 * (y / x).ln()) }
}

/// Smallest `m ≤ m_cap` with `c_{m,m} > 1`.
pub fn find_m_star(lambda: f64, delta: f64, m_cap: u64) -> Result<Option<u64>> {
    if m_cap == 0 {
        return Err(precondition("m_cap must be at least 1"));
    }
    for m in 1..=m_cap {
        if coefficient(lambda, delta, m, m)? > 1.0 {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// Constant `C` with `E|H* Δ H| ≤ C` for the greedy estimator, from the
/// witness triple; `None` at or above the threshold.
pub fn expected_diff_bound(lambda: f64, delta: f64) -> Option<f64> {
    let w = find_witness(lambda, delta)?;
    Some(diff_bound_from_witness(lambda, delta, &w))
}

pub fn diff_bound_from_witness(lambda: f64, delta: f64, w: &Witness) -> f64 {
    let p = lambda * (1.0 - delta);
    let gamma0 = (0.5 + w.epsilon) * p / ((1.0 - p) * (1.0 - p));
    let t = w.y / w.x;
    let gamma1 = t / (t - 1.0) / (1.0 - w.ratio(lambda, delta));
    (gamma0 + gamma1) / w.epsilon
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Regime {
    Below,
    Critical,
    Above,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Below => "below",
            Regime::Critical => "critical",
            Regime::Above => "above",
        })
    }
}

pub fn regime(lambda: f64, delta: f64) -> Result<Regime> {
    let t = threshold(delta)?;
    Ok(if (lambda - t).abs() <= CRITICAL_TOL * t {
        Regime::Critical
    } else if lambda < t {
        Regime::Below
    } else {
        Regime::Above
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenFunReport {
    pub lambda: f64,
    pub delta: f64,
    pub threshold: f64,
    pub regime: Regime,
    pub witness: Option<Witness>,
    pub m_star: Option<u64>,
    pub expected_diff_bound: Option<f64>,
    pub m_cap: u64,
}

pub fn report(lambda: f64, delta: f64, m_cap: u64) -> Result<GenFunReport> {
    check_lambda(lambda)?;
    let threshold = threshold(delta)?;
    let witness = find_witness(lambda, delta);
    Ok(GenFunReport {
        lambda,
        delta,
        threshold,
        regime: regime(lambda, delta)?,
        witness,
        m_star: find_m_star(lambda, delta, m_cap)?,
        expected_diff_bound: witness.map(|w| diff_bound_from_witness(lambda, delta, &w)),
        m_cap,
    })
}

impl std::fmt::Display for GenFunReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "lambda = {}", self.lambda)?;
        writeln!(f, "delta = {}", self.delta)?;
        writeln!(f, "threshold = {}", self.threshold)?;
        writeln!(f, "regime = {}", self.regime)?;
        match &self.witness {
            Some(w) => writeln!(f, "witness = x {} y {} epsilon {}", w.x, w.y, w.epsilon)?,
            None => writeln!(f, "witness = none")?,
        }
        match self.m_star {
            Some(m) => writeln!(f, "m_star = {m}")?,
            None => writeln!(f, "m_star = none (searched up to {})", self.m_cap)?,
        }
        match self.expected_diff_bound {
            Some(c) => writeln!(f, "expected_diff_bound = {c}"),
            None => writeln!(f, "expected_diff_bound = none"),
        }
    }
}

/// Rows `(a, b, c_{a,b})` for `1 ≤ a, b ≤ a_max`, row-major.
pub fn coefficient_table(lambda: f64, delta: f64, a_max: u64) -> Result<Vec<(u64, u64, f64)>> {
    let mut rows = Vec::with_capacity((a_max * a_max) as usize);
    for a in 1..=a_max {
        for b in 1..=a_max {
            rows.push((a, b, coefficient(lambda, delta, a, b)?));
        }
    }
    Ok(rows)
}
