//! Continued fractions with exact convergents, irrationality-exponent
//! estimates along convergent denominators, and construction of numbers with
//! a prescribed exponent.
//!
//! The exponent here is `gamma(a) = inf{b : liminf q^b ||q a|| > 0}`, so
//! `gamma = 1` for badly approximable numbers (the classical irrationality
//! measure is `gamma + 1`). Since `1/(q_{k+1} + q_k) < ||q_k a|| < 1/q_{k+1}`,
//! `gamma` is the limsup of `log q_{k+1} / log q_k`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default cap on the size of convergent denominators, in bits.
pub const DEFAULT_BIT_BUDGET: u64 = 1 << 23;

/// Maximum number of partial quotients accepted by the constructor.
pub const MAX_CONSTRUCT_TERMS: usize = 30;

/// `[0; a_1, ..., a_K]` with its convergents `p_k / q_k`, `k = 1..=K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    quotients: Vec<BigUint>,
    p: Vec<BigUint>,
    q: Vec<BigUint>,
    /// The expansion is the complete expansion of a rational number.
    terminates: bool,
}

impl ContinuedFraction {
    /// A prefix of the expansion of an irrational number in `(0, 1)`.
    pub fn new(quotients: Vec<BigUint>) -> Result<Self> {
        if quotients.is_empty() {
            return Err(Error::input("a continued fraction needs at least one partial quotient"));
        }
        if let Some(k) = quotients.iter().position(Zero::is_zero) {
            return Err(Error::input(format!("partial quotient a_{} is not positive", k + 1)));
        }
        let (p, q) = recurrence(&quotients);
        Ok(ContinuedFraction { quotients, p, q, terminates: false })
    }

    pub fn from_u64(quotients: &[u64]) -> Result<Self> {
        Self::new(quotients.iter().map(|&a| BigUint::from(a)).collect())
    }

    /// The golden-ratio conjugate truncated after `k` quotients (all 1).
    pub fn golden(k: usize) -> Result<Self> {
        Self::from_u64(&vec![1; k])
    }

    /// The complete (terminating) expansion of `num / den` in `(0, 1)`.
    pub fn from_ratio(num: &BigUint, den: &BigUint) -> Result<Self> {
        if den.is_zero() || num.is_zero() || num >= den {
            return Err(Error::input("rational must lie strictly between 0 and 1"));
        }
        let (mut a, mut b) = (den.clone(), num.clone());
        let mut quotients = Vec::new();
        while !b.is_zero() {
            let (d, r) = a.div_rem(&b);
            quotients.push(d);
            a = b;
            b = r;
        }
        let mut cf = Self::new(quotients)?;
        cf.terminates = true;
        Ok(cf)
    }

    /// The exact binary value of a float, as a terminating expansion.
    pub fn from_f64(x: f64) -> Result<Self> {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::input(format!("{x} not in (0,1)")));
        }
        let scale = 1u64 << 62;
        let num = BigUint::from((x * scale as f64) as u64);
        let mut den = BigUint::from(scale);
        // x * 2^62 is an integer unless x < 2^-10; rescale for tiny values
        let mut num = num;
        let mut y = x * scale as f64;
        while y.fract() != 0.0 {
            y *= 2.0;
            den <<= 1u32;
            num = BigUint::from(y as u128);
        }
        let g = num.gcd(&den);
        Self::from_ratio(&(num / &g), &(den / g))
    }

    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    pub fn terminates(&self) -> bool {
        self.terminates
    }

    pub fn quotients(&self) -> &[BigUint] {
        &self.quotients
    }

    /// `a_k` for `k = 1..=K`.
    pub fn quotient(&self, k: usize) -> &BigUint {
        &self.quotients[k - 1]
    }

    /// `(p_k, q_k)` for `k = 1..=K`.
    pub fn convergent(&self, k: usize) -> (&BigUint, &BigUint) {
        (&self.p[k - 1], &self.q[k - 1])
    }

    pub fn convergents(&self) -> impl Iterator<Item = (&BigUint, &BigUint)> {
        self.p.iter().zip(self.q.iter())
    }

    pub fn denominators(&self) -> &[BigUint] {
        &self.q
    }

    /// Nearest-float value of the last convergent `p_K / q_K`.
    pub fn value_f64(&self) -> f64 {
        let k = self.len();
        ratio_to_f64(&self.p[k - 1], &self.q[k - 1])
    }
}

fn recurrence(a: &[BigUint]) -> (Vec<BigUint>, Vec<BigUint>) {
    let (mut p_prev, mut p_cur) = (BigUint::one(), BigUint::zero());
    let (mut q_prev, mut q_cur) = (BigUint::zero(), BigUint::one());
    let mut p = Vec::with_capacity(a.len());
    let mut q = Vec::with_capacity(a.len());
    for ak in a {
        let p_next = ak * &p_cur + &p_prev;
        let q_next = ak * &q_cur + &q_prev;
        p_prev = std::mem::replace(&mut p_cur, p_next);
        q_prev = std::mem::replace(&mut q_cur, q_next);
        p.push(p_cur.clone());
        q.push(q_cur.clone());
    }
    (p, q)
}

/// Exact integer convergents of a continued fraction.
pub fn convergents(cf: &ContinuedFraction) -> Vec<(BigUint, BigUint)> {
    cf.convergents().map(|(p, q)| (p.clone(), q.clone())).collect()
}

/// Natural logarithm of a big integer, accurate to double precision.
pub fn ln_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return n.to_u64().expect("fits").to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_u64().expect("64 bits");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Number of decimal digits of a positive integer.
pub fn decimal_digits(n: &BigUint) -> u64 {
    if n.is_zero() {
        return 1;
    }
    let est = ln_big(n) / std::f64::consts::LN_10;
    let guess = est.floor() as u64 + 1;
    if (est - est.round()).abs() > 1e-6 {
        return guess;
    }
    // near a power of ten: settle it exactly
    let p = BigUint::from(10u32).pow(est.round() as u32);
    if n >= &p {
        est.round() as u64 + 1
    } else {
        est.round() as u64
    }
}

/// Nearest float to `num / den` (up to one unit of truncation).
pub fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.bits() <= 53 && den.bits() <= 53 {
        return num.to_f64().expect("exact") / den.to_f64().expect("exact");
    }
    let shift = (den.bits() + 66).saturating_sub(num.bits());
    let scaled = (num << shift) / den;
    let lead = scaled.bits().saturating_sub(64);
    let top = (&scaled >> lead).to_u64().expect("64 bits") as f64;
    top * 2f64.powi(lead as i32 - shift as i32)
}

/// Per-convergent exponent estimates and their tail summary.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaEstimate {
    /// `(k, log q_{k+1} / log q_k)` for every `k < K` with `q_k >= 2`.
    pub per_k: Vec<(usize, f64)>,
    /// Maximum over the last `ceil(K/2)` estimates: a finite proxy for the
    /// limsup. For Liouville-like inputs it is only a lower bound.
    pub summary: f64,
}

/// Estimate the irrationality exponent from convergent denominators.
pub fn estimate_gamma(cf: &ContinuedFraction) -> Result<GammaEstimate> {
    if cf.terminates() {
        return Err(Error::input("the exponent is defined for irrational numbers only; expansion terminates"));
    }
    let k_max = cf.len();
    if k_max < 3 {
        return Err(Error::input(format!("need at least 3 partial quotients, got {k_max}")));
    }
    let logs: Vec<f64> = cf.denominators().iter().map(ln_big).collect();
    let per_k: Vec<(usize, f64)> = (0..k_max - 1)
        .filter(|&i| logs[i] > 0.0)
        .map(|i| (i + 1, logs[i + 1] / logs[i]))
        .collect();
    if per_k.is_empty() {
        return Err(Error::input("no denominators above 1"));
    }
    let tail = k_max.div_ceil(2).min(per_k.len());
    let summary = per_k[per_k.len() - tail..].iter().map(|&(_, g)| g).fold(f64::NEG_INFINITY, f64::max);
    Ok(GammaEstimate { per_k, summary })
}

/// A continued fraction built to have a prescribed exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstructedAlpha {
    pub cf: ContinuedFraction,
    /// Nearest float to the last convergent.
    pub alpha: f64,
    /// Set when the bit budget stopped the construction early.
    pub warning: Option<String>,
}

/// `ceil(q^e)` for a real exponent `e >= 0`; exact for integer exponents.
fn ceil_pow(q: &BigUint, e: f64) -> BigUint {
    if e.fract() == 0.0 {
        return q.pow(e as u32);
    }
    let log2 = ln_big(q) / std::f64::consts::LN_2 * e;
    if log2 < 52.0 {
        return BigUint::from(2f64.powf(log2).ceil() as u64);
    }
    let whole = log2.floor();
    let mantissa = 2f64.powf(log2 - whole) * 2f64.powi(52);
    (BigUint::from(mantissa.ceil() as u64) << (whole as u64 - 52)) + 1u32
}

/// Partial quotients `a_{k+1} = max(1, ceil(q_k^{gamma-1}))`, so that
/// `q_{k+1} ~ q_k^gamma`.
pub fn construct_alpha_with_gamma(gamma_target: f64, k: usize) -> Result<ConstructedAlpha> {
    construct_alpha_with_budget(gamma_target, k, DEFAULT_BIT_BUDGET)
}

pub fn construct_alpha_with_budget(gamma_target: f64, k: usize, bit_budget: u64) -> Result<ConstructedAlpha> {
    if !(gamma_target >= 1.0) || !gamma_target.is_finite() {
        return Err(Error::input(format!("target exponent must be finite and >= 1, got {gamma_target}")));
    }
    if k == 0 || k > MAX_CONSTRUCT_TERMS {
        return Err(Error::input(format!("K must be in 1..={MAX_CONSTRUCT_TERMS}, got {k}")));
    }
    let e = gamma_target - 1.0;
    let e = if (e - e.round()).abs() < 1e-12 { e.round() } else { e };
    let mut quotients = Vec::with_capacity(k);
    let (mut q_prev, mut q_cur) = (BigUint::zero(), BigUint::one());
    let mut warning = None;
    for i in 0..k {
        let estimate = (ln_big(&q_cur) / std::f64::consts::LN_2 * (e + 1.0)).floor();
        let step = if estimate > bit_budget as f64 {
            None
        } else {
            let a = ceil_pow(&q_cur, e).max(BigUint::one());
            let q_next = &a * &q_cur + &q_prev;
            (q_next.bits() <= bit_budget).then_some((a, q_next))
        };
        let Some((a, q_next)) = step else {
            warning = Some(format!(
                "q_{} would exceed {bit_budget} bits; truncated to K = {i}",
                i + 1
            ));
            break;
        };
        quotients.push(a);
        q_prev = std::mem::replace(&mut q_cur, q_next);
    }
    if quotients.is_empty() {
        return Err(Error::Overflow("bit budget too small for a single quotient".into()));
    }
    let cf = ContinuedFraction::new(quotients)?;
    let alpha = cf.value_f64();
    Ok(ConstructedAlpha { cf, alpha, warning })
}

/// Check `|a - p_k/q_k| < 1/(q_k q_{k+1})` exactly, taking `a = p_K / q_K`,
/// for every `k <= K - 2` (at `k = K - 1` the bound is an equality).
pub fn convergent_bounds_hold(cf: &ContinuedFraction) -> bool {
    let kk = cf.len();
    if kk < 3 {
        return true;
    }
    let (pk_last, qk_last) = cf.convergent(kk);
    (1..kk - 1).all(|k| {
        let (p, q) = cf.convergent(k);
        let q_next = &cf.denominators()[k];
        let lhs = pk_last * q;
        let rhs = p * qk_last;
        let diff = if lhs >= rhs { lhs - rhs } else { rhs - lhs };
        diff * q_next < *qk_last
    })
}
