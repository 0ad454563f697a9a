//! Asymptotic laws for the occurrence tables and the Poisson(1/2) limit.
//!
//! The estimates are plain leading terms with no error bounds, so every
//! comparison against exact values needs a tolerance picked by the caller.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::enumeration::binomial;

fn ln_factorial(k: usize) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

/// Natural log of `1/(2^k k!) (2/e)^{n+1/2} n^n`, the leading term of
/// `a[n][k]` for pattern 21.
pub fn log_asym_a21(n: usize, k: usize) -> f64 {
    let nf = n as f64;
    let ln2 = std::f64::consts::LN_2;
    -(k as f64) * ln2 - ln_factorial(k) + (nf + 0.5) * (ln2 - 1.0) + nf * nf.ln()
}

/// `e^{-1/2} / (2^k k!)`.
pub fn poisson_half_pmf(k: usize) -> f64 {
    (-0.5 - (k as f64) * std::f64::consts::LN_2 - ln_factorial(k)).exp()
}

/// `C_0 = 1`, `C_k = Σ_{s=1}^{k} C(k-1, s-1) / (2^s s!)`.
pub fn constant_ck(k: usize) -> BigRational {
    if k == 0 {
        return BigRational::one();
    }
    let mut acc = BigRational::zero();
    let mut denom = BigInt::one();
    for s in 1..=k {
        denom *= 2 * s as u64;
        acc += BigRational::new(binomial(k as u64 - 1, s as u64 - 1), denom.clone());
    }
    acc
}

/// Leading term of `c[n][k] / (2n-1)!!`, namely `C_k / 2^k * n^{-k}`.
pub fn asym_ratio_c(n: usize, k: usize) -> f64 {
    rational_to_f64(&constant_ck(k))
        * (-(k as f64) * (std::f64::consts::LN_2 + (n as f64).ln())).exp()
}

/// Leading term of `d[n][k] / (2n-1)!!`, namely `1/(2^{2k} k!) * n^{-k}`.
pub fn asym_ratio_d(n: usize, k: usize) -> f64 {
    let kf = k as f64;
    (-2.0 * kf * std::f64::consts::LN_2 - ln_factorial(k) - kf * (n as f64).ln()).exp()
}

/// `num / den` as a float without converting either (possibly huge)
/// integer to `f64` on its own.
pub fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    assert!(!den.is_zero(), "division by zero");
    if num.is_zero() {
        return 0.0;
    }
    let negative = num.is_negative() != den.is_negative();
    let (num, den) = (num.abs(), den.abs());
    // keep about 64 significant bits of each before converting
    let shift_n = num.bits().saturating_sub(64);
    let shift_d = den.bits().saturating_sub(64);
    let top = u64::try_from(&(num >> shift_n)).expect("fits after shift") as f64;
    let bottom = u64::try_from(&(den >> shift_d)).expect("fits after shift") as f64;
    let exp = shift_n as i64 - shift_d as i64;
    let value = top / bottom * 2f64.powi(exp.clamp(i32::MIN as i64, i32::MAX as i64) as i32);
    if negative {
        -value
    } else {
        value
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    ratio_to_f64(r.numer(), r.denom())
}

/// `exact / exp(log_estimate)` computed in log space.
pub fn ratio_to_estimate(exact: &BigInt, log_estimate: f64) -> f64 {
    assert!(exact.is_positive(), "exact value must be positive");
    let bits = exact.bits();
    let shift = bits.saturating_sub(64);
    let mantissa = u64::try_from(&(exact >> shift)).expect("fits after shift") as f64;
    (mantissa.ln() + shift as f64 * std::f64::consts::LN_2 - log_estimate).exp()
}
