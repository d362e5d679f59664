//! Exact binomial tails, certification plans and interval verdicts.
//!
//! Everything that decides a certification is done in exact rational
//! arithmetic. Floating point only appears in rendered output.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Parses `0.8639`, `3/100`, `1`, or `1e-6` style probabilities into an
/// exact rational in `[0, 1]`.
pub fn parse_probability(text: &str) -> Result<BigRational> {
    let q = parse_rational(text)?;
    if q.is_negative() || q > BigRational::one() {
        return Err(Error::Domain(format!("probability {text} outside [0, 1]")));
    }
    Ok(q)
}

/// Exact value of a decimal (optionally with exponent) or `a/b` literal.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::Config(format!("not a number: {text:?}"));
    if let Some((a, b)) = t.split_once('/') {
        let a = BigInt::from_str(a.trim()).map_err(|_| bad())?;
        let b = BigInt::from_str(b.trim()).map_err(|_| bad())?;
        if b.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(a, b));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part
            .chars()
            .chain(frac_part.chars())
            .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: String = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(if all.is_empty() { "0" } else { &all }).map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let q = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(if sign < 0 { -q } else { q })
}

fn binomial_terms(n: u64, p: &BigRational) -> Result<(Vec<BigInt>, BigInt)> {
    if p.is_negative() || p > &BigRational::one() {
        return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
    }
    // p = a/b: term i is C(n,i) a^i (b-a)^(n-i) over the common b^n.
    let a = p.numer().clone();
    let b = p.denom().clone();
    let c = &b - &a;
    let n_us = n as usize;
    let mut a_pow = Vec::with_capacity(n_us + 1);
    let mut acc = BigInt::one();
    for _ in 0..=n_us {
        a_pow.push(acc.clone());
        acc *= &a;
    }
    let mut terms = vec![BigInt::zero(); n_us + 1];
    let mut c_pow = BigInt::one();
    let mut choose = BigInt::one();
    // Walk i downward so (b-a)^(n-i) builds up incrementally.
    let mut chooses = Vec::with_capacity(n_us + 1);
    for i in 0..=n {
        chooses.push(choose.clone());
        choose = choose * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    for i in (0..=n_us).rev() {
        terms[i] = &chooses[i] * &a_pow[i] * &c_pow;
        c_pow *= &c;
    }
    Ok((terms, num_traits::pow(b, n_us)))
}

/// `P(X <= m)` for `X ~ Bin(n, p)`, exactly.
pub fn binom_tail_leq(n: u64, m: u64, p: &BigRational) -> Result<BigRational> {
    if m > n {
        return Err(Error::Domain(format!("m = {m} exceeds n = {n}")));
    }
    let (terms, denom) = binomial_terms(n, p)?;
    let sum: BigInt = terms[..=m as usize].iter().sum();
    Ok(BigRational::new(sum, denom))
}

/// `P(X >= m)` for `X ~ Bin(n, p)`, exactly.
pub fn binom_tail_geq(n: u64, m: u64, p: &BigRational) -> Result<BigRational> {
    if m > n {
        return Err(Error::Domain(format!("m = {m} exceeds n = {n}")));
    }
    let (terms, denom) = binomial_terms(n, p)?;
    let sum: BigInt = terms[m as usize..].iter().sum();
    Ok(BigRational::new(sum, denom))
}

/// Scientific notation with `digits` significant digits, truncated rather
/// than rounded so every printed digit is exact: `4.796226e-7`.
pub fn render_scientific(q: &BigRational, digits: usize) -> String {
    assert!(digits >= 1);
    if q.is_zero() {
        return "0".into();
    }
    let sign = if q.is_negative() { "-" } else { "" };
    let q = q.abs();
    let ten = BigRational::from_integer(10.into());
    // Find e with 10^e <= q < 10^(e+1).
    let mut e: i64 = (q.numer().bits() as i64 - q.denom().bits() as i64) * 30103 / 100000;
    let pow10 = |k: i64| -> BigRational {
        if k >= 0 {
            num_traits::pow(ten.clone(), k as usize)
        } else {
            num_traits::pow(ten.clone(), (-k) as usize).recip()
        }
    };
    while pow10(e) > q {
        e -= 1;
    }
    while pow10(e + 1) <= q {
        e += 1;
    }
    let scaled = &q * pow10(digits as i64 - 1 - e);
    let mantissa = scaled.to_integer().to_string();
    let (head, tail) = mantissa.split_at(1);
    if tail.is_empty() {
        format!("{sign}{head}e{e}")
    } else {
        format!("{sign}{head}.{tail}e{e}")
    }
}

/// Plain `a/b` (or `a`) form.
pub fn render_fraction(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Shortest exact decimal if the denominator is of the form 2^a 5^b, else a
/// fraction.
pub fn render_decimal(q: &BigRational) -> String {
    let mut d = q.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let (mut twos, mut fives) = (0usize, 0usize);
    while d.is_multiple_of(&two) {
        d /= &two;
        twos += 1;
    }
    while d.is_multiple_of(&five) {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return render_fraction(q);
    }
    let places = twos.max(fives);
    let scale = num_traits::pow(BigInt::from(10), places) / q.denom();
    let n = q.numer() * scale;
    if places == 0 {
        return n.to_string();
    }
    let neg = n.is_negative();
    let s = n.abs().to_string();
    let s = format!("{s:0>width$}", width = places + 1);
    let (i, f) = s.split_at(s.len() - places);
    format!("{}{i}.{f}", if neg { "-" } else { "" })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Few block events certify `p < p_c`.
    Lower,
    /// Many rectangle events certify `p > p_c`.
    Upper,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Lower => "lower",
            Direction::Upper => "upper",
        }
    }

    /// The certification probability for this side.
    pub fn reference_constant(self) -> &'static Constant {
        match self {
            Direction::Lower => &LOWER_BLOCK_PROBABILITY,
            Direction::Upper => &UPPER_BLOCK_PROBABILITY,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lower" => Ok(Direction::Lower),
            "upper" => Ok(Direction::Upper),
            _ => Err(Error::Config(format!(
                "unknown direction {s:?} (expected lower or upper)"
            ))),
        }
    }
}

/// A named probability with where it comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Constant {
    pub name: &'static str,
    pub value: &'static str,
    pub source: &'static str,
}

impl Constant {
    pub fn rational(&self) -> BigRational {
        parse_rational(self.value).expect("registry constants parse")
    }
}

pub const LOWER_BLOCK_PROBABILITY: Constant = Constant {
    name: "lower p0",
    value: "3/100",
    source: "1-independent site models on the block lattice with open probability below 3/100 \
             do not percolate (exact sign check on the six-step minimal-path count matrix)",
};

pub const UPPER_BLOCK_PROBABILITY: Constant = Constant {
    name: "upper p0",
    value: "8639/10000",
    source: "Balister, Bollobás and Walters: a 1-independent bond model on Z^2 whose bonds are \
             open with probability at least 0.8639 percolates",
};

pub fn constants() -> [&'static Constant; 2] {
    [&LOWER_BLOCK_PROBABILITY, &UPPER_BLOCK_PROBABILITY]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfidencePlan {
    pub direction: Direction,
    pub trials: u64,
    /// Lower: pass iff successes <= threshold. Upper: pass iff >= threshold.
    pub threshold: u64,
    pub p0: BigRational,
    pub tail: BigRational,
    pub alpha: BigRational,
}

impl ConfidencePlan {
    /// The per-side error budget `(1 - alpha) / 2`.
    pub fn budget(&self) -> BigRational {
        side_budget(&self.alpha)
    }

    pub fn passes(&self, successes: u64) -> bool {
        match self.direction {
            Direction::Lower => successes <= self.threshold,
            Direction::Upper => successes >= self.threshold,
        }
    }

    pub fn render(&self) -> String {
        let relation = match self.direction {
            Direction::Lower => "at most",
            Direction::Upper => "at least",
        };
        let tail_name = match self.direction {
            Direction::Lower => "P(X <= m)",
            Direction::Upper => "P(X >= m)",
        };
        format!(
            "direction: {}\ntrials: {}\nthreshold: {relation} {} successes\np0: {}\nalpha: {}\n\
             budget: {}\ntail {tail_name}: {}\ntail decimal: {}\n",
            self.direction,
            self.trials,
            self.threshold,
            render_decimal(&self.p0),
            render_decimal(&self.alpha),
            render_decimal(&self.budget()),
            render_fraction(&self.tail),
            render_scientific(&self.tail, 8),
        )
    }
}

fn side_budget(alpha: &BigRational) -> BigRational {
    (BigRational::one() - alpha) / BigRational::from_integer(2.into())
}

/// Chooses the success threshold for `trials` runs at confidence `alpha`.
///
/// Lower: the largest `m` with `P(X <= m) < (1 - alpha)/2` under `p0`.
/// Upper: the smallest `m` with `P(X >= m) < (1 - alpha)/2` under `p0`.
pub fn plan(
    direction: Direction,
    trials: u64,
    alpha: &BigRational,
    p0: &BigRational,
) -> Result<ConfidencePlan> {
    if !alpha.is_positive() || alpha >= &BigRational::one() {
        return Err(Error::Domain(format!("alpha {alpha} outside (0, 1)")));
    }
    let budget = side_budget(alpha);
    let (terms, denom) = binomial_terms(trials, p0)?;
    let denom = BigRational::from_integer(denom);
    let infeasible = || {
        Error::InfeasiblePlan(format!(
            "{trials} {direction} trials cannot reach confidence {}",
            render_decimal(alpha)
        ))
    };
    let found = match direction {
        Direction::Lower => {
            let mut best = None;
            let mut acc = BigInt::zero();
            for (m, t) in terms.iter().enumerate() {
                acc += t;
                let tail = BigRational::from_integer(acc.clone()) / &denom;
                if tail >= budget {
                    break;
                }
                best = Some((m as u64, tail));
            }
            best
        }
        Direction::Upper => {
            let mut best = None;
            let mut acc = BigInt::zero();
            for (m, t) in terms.iter().enumerate().rev() {
                acc += t;
                let tail = BigRational::from_integer(acc.clone()) / &denom;
                if tail >= budget {
                    break;
                }
                best = Some((m as u64, tail));
            }
            best
        }
    };
    let (threshold, tail) = found.ok_or_else(infeasible)?;
    Ok(ConfidencePlan {
        direction,
        trials,
        threshold,
        p0: p0.clone(),
        tail,
        alpha: alpha.clone(),
    })
}

/// Outcome counts of one finished run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunSummary {
    pub p: BigRational,
    pub trials: u64,
    pub successes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub lower_bound: BigRational,
    pub upper_bound: BigRational,
    pub lower_certified: bool,
    pub upper_certified: bool,
    pub alpha: BigRational,
    pub lower_plan: ConfidencePlan,
    pub upper_plan: ConfidencePlan,
    pub lower_run: RunSummary,
    pub upper_run: RunSummary,
    pub warnings: Vec<String>,
}

impl Verdict {
    pub fn fully_certified(&self) -> bool {
        self.lower_certified && self.upper_certified
    }

    /// Two-sided confidence, `1 - 2 * budget`.
    pub fn confidence(&self) -> &BigRational {
        &self.alpha
    }

    pub fn render(&self) -> String {
        let pct = &self.alpha * BigRational::from_integer(100.into());
        let mut out = format!(
            "interval: [{}, {}]\nconfidence: {}%\n",
            render_decimal(&self.lower_bound),
            render_decimal(&self.upper_bound),
            render_decimal(&pct)
        );
        for (name, plan, run, ok) in [
            (
                "lower",
                &self.lower_plan,
                &self.lower_run,
                self.lower_certified,
            ),
            (
                "upper",
                &self.upper_plan,
                &self.upper_run,
                self.upper_certified,
            ),
        ] {
            let rel = match plan.direction {
                Direction::Lower => "<=",
                Direction::Upper => ">=",
            };
            out.push_str(&format!(
                "{name}: p={} successes={}/{} need {rel} {} tail={} {}\n",
                render_decimal(&run.p),
                run.successes,
                run.trials,
                plan.threshold,
                render_scientific(&plan.tail, 8),
                if ok { "certified" } else { "not certified" }
            ));
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    }
}

/// Combines a lower run and an upper run into an interval for `p_c`, using
/// the registry constants for `p0`.
pub fn verdict(lower: &RunSummary, upper: &RunSummary, alpha: &BigRational) -> Result<Verdict> {
    verdict_with(
        lower,
        upper,
        alpha,
        &LOWER_BLOCK_PROBABILITY.rational(),
        &UPPER_BLOCK_PROBABILITY.rational(),
    )
}

pub fn verdict_with(
    lower: &RunSummary,
    upper: &RunSummary,
    alpha: &BigRational,
    lower_p0: &BigRational,
    upper_p0: &BigRational,
) -> Result<Verdict> {
    for (name, run) in [("lower", lower), ("upper", upper)] {
        if run.successes > run.trials {
            return Err(Error::Contract(format!(
                "{name} run reports {} successes in {} trials",
                run.successes, run.trials
            )));
        }
        if run.p.is_negative() || run.p > BigRational::one() {
            return Err(Error::Contract(format!(
                "{name} run has probability {}",
                run.p
            )));
        }
    }
    if lower.p > upper.p {
        return Err(Error::Contract(format!(
            "lower run p = {} exceeds upper run p = {}",
            render_decimal(&lower.p),
            render_decimal(&upper.p)
        )));
    }
    let lower_plan = plan(Direction::Lower, lower.trials, alpha, lower_p0)?;
    let upper_plan = plan(Direction::Upper, upper.trials, alpha, upper_p0)?;
    let lower_certified = lower_plan.passes(lower.successes);
    let upper_certified = upper_plan.passes(upper.successes);
    let mut warnings = Vec::new();
    if !lower_certified {
        warnings.push(format!(
            "lower side failed: {} successes exceed {}; reporting trivial bound 0",
            lower.successes, lower_plan.threshold
        ));
    }
    if !upper_certified {
        warnings.push(format!(
            "upper side failed: {} successes below {}; reporting trivial bound 1",
            upper.successes, upper_plan.threshold
        ));
    }
    Ok(Verdict {
        lower_bound: if lower_certified {
            lower.p.clone()
        } else {
            BigRational::zero()
        },
        upper_bound: if upper_certified {
            upper.p.clone()
        } else {
            BigRational::one()
        },
        lower_certified,
        upper_certified,
        alpha: alpha.clone(),
        lower_plan,
        upper_plan,
        lower_run: lower.clone(),
        upper_run: upper.clone(),
        warnings,
    })
}

/// Lossy conversion for display and diagnostics.
pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}
