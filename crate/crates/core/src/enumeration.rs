//! Exact distribution tables for the endhered patterns of size 2 and 3.
//!
//! Everything here is exact big-integer or rational arithmetic. The tables
//! are
//!
//! * `a[n][k]`, matchings of size `n` with `k` occurrences of 21 (equally 12),
//! * `c[n][k]`, the same for 321 (equally 123),
//! * `d[n][k]`, the same for 132 (equally 213, 231, 312).
//!
//! The 21 row family can be reached by several independent routes: the
//! three-term recurrence in `n`, the binomial closed form over the avoiders,
//! the avoider recurrence, an alternating sum over double factorials, and
//! the coefficients of the exponential generating function
//! `e^{z(u-1)} (1-2z)^{-3/2}`. They are all exposed so they can be checked
//! against each other.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::error::EnumerationError;
use crate::pattern::EndheredPattern;
use crate::series::TruncatedBivariateSeries;

/// `m!!`, with `0!! = (-1)!! = 1`.
///
/// # Panics
///
/// If `m < -1`.
pub fn double_factorial(m: i64) -> BigInt {
    assert!(
        m >= -1,
        "double factorial is defined from -1 upwards, got {m}"
    );
    let mut acc = BigInt::one();
    let mut i = m;
    while i > 1 {
        acc *= i;
        i -= 2;
    }
    acc
}

/// `C(n, k)` by the multiplicative formula; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Exact occurrence counts `entries(n, k)` for `1 <= n <= max_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistributionTable {
    pattern: String,
    // rows[n - 1][k] for k in 0..n
    rows: Vec<Vec<BigInt>>,
}

impl DistributionTable {
    fn from_rows(pattern: &str, rows: Vec<Vec<BigInt>>) -> DistributionTable {
        DistributionTable {
            pattern: pattern.to_string(),
            rows,
        }
    }

    /// Label of the pattern class the table counts, e.g. `"21"`.
    pub fn pattern(&self) -> &str {
        &self.pattern
    }

    pub fn max_n(&self) -> usize {
        self.rows.len()
    }

    /// Entry for size `n` and `k` occurrences; zero outside the stored range.
    pub fn get(&self, n: usize, k: usize) -> BigInt {
        if n == 0 {
            return if k == 0 {
                BigInt::one()
            } else {
                BigInt::zero()
            };
        }
        self.rows
            .get(n - 1)
            .and_then(|row| row.get(k))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    /// The row for size `n`, indexed by `k` in `0..n`.
    pub fn row(&self, n: usize) -> &[BigInt] {
        &self.rows[n - 1]
    }

    pub fn row_sum(&self, n: usize) -> BigInt {
        self.row(n).iter().sum()
    }

    /// Largest `k` with a non-zero entry anywhere in the table.
    pub fn max_k(&self) -> usize {
        self.rows
            .iter()
            .filter_map(|row| row.iter().rposition(|v| !v.is_zero()))
            .max()
            .unwrap_or(0)
    }

    /// Rows indexed by `k`, columns by `n`, right-aligned.
    pub fn to_text(&self) -> String {
        let width = self
            .rows
            .iter()
            .flatten()
            .map(|v| v.to_string().len())
            .max()
            .unwrap_or(1)
            .max(3);
        let mut out = String::new();
        let _ = write!(out, "{:>4}", "k\\n");
        for n in 1..=self.max_n() {
            let _ = write!(out, " {n:>width$}");
        }
        out.push('\n');
        for k in 0..=self.max_k() {
            let _ = write!(out, "{k:>4}");
            for n in 1..=self.max_n() {
                let _ = write!(out, " {:>width$}", self.get(n, k).to_string());
            }
            out.push('\n');
        }
        out
    }

    /// `n,k,count` with one line per stored cell.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,k,count\n");
        for (n, k, v) in self.cells() {
            let _ = writeln!(out, "{n},{k},{v}");
        }
        out
    }

    /// `{"pattern": ..., "entries": [[n, k, "count"], ...]}` with counts as
    /// decimal strings.
    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .cells()
            .map(|(n, k, v)| json!([n, k, v.to_string()]))
            .collect();
        json!({ "pattern": self.pattern, "entries": entries })
    }

    fn cells(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(k, v)| (i + 1, k, v)))
    }
}

/// The exact table for `pat`'s distribution class, if one is known.
pub fn table_for_pattern(
    pat: &EndheredPattern,
    max_n: usize,
) -> Result<DistributionTable, EnumerationError> {
    match pat.to_string().as_str() {
        "12" | "21" => Ok(table_a21(max_n)),
        "123" | "321" => Ok(table_c321(max_n)),
        "132" | "213" | "231" | "312" => Ok(table_d132(max_n)),
        other => Err(EnumerationError::NoTable(other.to_string())),
    }
}

/// `a[n][k]` for pattern 21 from
/// `a[n+1][k] = a[n][k-1] + 2(n-k) a[n][k] + 2(k+1) a[n][k+1]`, `a[1][0] = 1`.
pub fn table_a21(max_n: usize) -> DistributionTable {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(max_n);
    if max_n >= 1 {
        rows.push(vec![BigInt::one()]);
    }
    for n in 1..max_n {
        let prev = &rows[n - 1];
        let at = |k: usize| prev.get(k).cloned().unwrap_or_else(BigInt::zero);
        let next: Vec<BigInt> = (0..=n)
            .map(|k| {
                let mut v = BigInt::from(2 * (k as u64 + 1)) * at(k + 1);
                if k > 0 {
                    v += at(k - 1);
                }
                if n > k {
                    v += BigInt::from(2 * (n - k) as u64) * at(k);
                }
                v
            })
            .collect();
        rows.push(next);
    }
    DistributionTable::from_rows("21", rows)
}

/// `a[n][k] = C(n-1, k) a[n-k][0]` for `n > k >= 0`.
pub fn a21_closed_form(n: usize, k: usize) -> Result<BigInt, EnumerationError> {
    if n <= k {
        return Err(EnumerationError::Domain { n, k });
    }
    Ok(binomial((n - 1) as u64, k as u64) * avoid21(n - k))
}

/// Matchings of size `n` avoiding 21, by
/// `a[n+1] = 2n a[n] + 2(n-1) a[n-1]` with `a[1] = 1`, `a[2] = 2`.
/// The empty matching gives `avoid21(0) = 1`.
pub fn avoid21(n: usize) -> BigInt {
    if n <= 1 {
        return BigInt::one();
    }
    let (mut prev, mut cur) = (BigInt::one(), BigInt::from(2));
    for m in 2..n {
        let next = BigInt::from(2 * m as u64) * &cur + BigInt::from(2 * (m as u64 - 1)) * &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// Matchings of size `n` avoiding 21, by inclusion-exclusion:
/// `Σ_{k=0}^{n-1} (-1)^{n-1-k} C(n-1, k) (2k+1)!!`.
pub fn avoid21_incl_excl(n: usize) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let m = n - 1;
    (0..=m)
        .map(|k| {
            let term = binomial(m as u64, k as u64) * double_factorial(2 * k as i64 + 1);
            if (m - k).is_multiple_of(2) {
                term
            } else {
                -term
            }
        })
        .sum()
}

/// Matchings of size `n` with exactly one 21, by
/// `a[n+1] = 2n (a[n] + a[n-1])` with `a[1] = 0`, `a[2] = 1`.
pub fn row1_21(n: usize) -> BigInt {
    if n <= 1 {
        return BigInt::zero();
    }
    let (mut prev, mut cur) = (BigInt::zero(), BigInt::one());
    for m in 2..n {
        let next = BigInt::from(2 * m as u64) * (&cur + &prev);
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// Coefficients of `z^0 .. z^max_n` in `[u^k] B(z,u) = z^k/k! e^{-z} (1-2z)^{-3/2}`.
///
/// `n!` times the coefficient of `z^n` is `a[n+1][k]`.
pub fn egf_row_b(k: usize, max_n: usize) -> Vec<BigRational> {
    // e^{-z} (1-2z)^{-3/2}, the second factor being Σ (2i+1)!! z^i / i!
    let base: Vec<BigRational> = (0..=max_n)
        .map(|n| {
            (0..=n)
                .map(|i| {
                    let sign = if (n - i) % 2 == 0 {
                        BigInt::one()
                    } else {
                        -BigInt::one()
                    };
                    BigRational::new(
                        sign * double_factorial(2 * i as i64 + 1),
                        factorial(i as u64) * factorial((n - i) as u64),
                    )
                })
                .sum()
        })
        .collect();
    let kf = BigRational::from_integer(factorial(k as u64));
    (0..=max_n)
        .map(|n| {
            if n < k {
                BigRational::zero()
            } else {
                &base[n - k] / &kf
            }
        })
        .collect()
}

/// `b[n][k] = n! [z^n u^k] B(z,u)`, i.e. `a[n+1][k]`, as an integer.
pub fn egf_b_integer(k: usize, n: usize) -> BigInt {
    let coeff = &egf_row_b(k, n)[n];
    let value = coeff * BigRational::from_integer(factorial(n as u64));
    debug_assert!(value.is_integer());
    value.to_integer()
}

/// `c[n][k]` for pattern 321:
/// `c[n][0] = Σ_{s=0}^{n/2} C(n-s, s) a[n-s][0]` and, for `k > 0`,
/// `c[n][k] = Σ_{s=1}^{(n-k)/2} C(k+s-1, k) C(n-k-s, s) a[n-k-s][0]`.
pub fn table_c321(max_n: usize) -> DistributionTable {
    let avoiders: Vec<BigInt> = (0..=max_n).map(avoid21).collect();
    let rows = (1..=max_n)
        .map(|n| {
            (0..n)
                .map(|k| {
                    if k == 0 {
                        (0..=n / 2)
                            .map(|s| binomial((n - s) as u64, s as u64) * &avoiders[n - s])
                            .sum()
                    } else {
                        (1..=(n - k) / 2)
                            .map(|s| {
                                binomial((k + s - 1) as u64, k as u64)
                                    * binomial((n - k - s) as u64, s as u64)
                                    * &avoiders[n - k - s]
                            })
                            .sum()
                    }
                })
                .collect()
        })
        .collect();
    DistributionTable::from_rows("321", rows)
}

/// `d[n][k]` for pattern 132 as the coefficients of
/// `Σ_n (2n-1)!! (z + (u-1) z^3)^n`.
pub fn table_d132(max_n: usize) -> DistributionTable {
    let series = d132_series(max_n);
    let rows = (1..=max_n)
        .map(|n| {
            let row = series.row(n);
            (0..n)
                .map(|k| row.get(k).cloned().unwrap_or_else(BigInt::zero))
                .collect()
        })
        .collect();
    DistributionTable::from_rows("132", rows)
}

/// The bivariate series `D(z,u)` truncated at `z^max_n`.
pub fn d132_series(max_n: usize) -> TruncatedBivariateSeries<BigInt> {
    type S = TruncatedBivariateSeries<BigInt>;
    let one = BigInt::one();
    // z - z^3 + u z^3
    let w = &(&S::monomial(max_n, 1, 0, one.clone()) - &S::monomial(max_n, 3, 0, one.clone()))
        + &S::monomial(max_n, 3, 1, one);
    let weights: Vec<BigInt> = (0..=max_n as i64)
        .map(|n| double_factorial(2 * n - 1))
        .collect();
    let d = w.compose_into(&weights);
    debug_assert!((0..=max_n).all(|n| d.row(n).iter().all(|c| !c.is_negative())));
    d
}
