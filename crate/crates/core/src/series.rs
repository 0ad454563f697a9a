//! Bivariate power series in `z` and `u`, truncated at a fixed `z` degree.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

/// Coefficients of `z^i u^j` for `i <= max_degree`. The `u` degree is not
/// bounded; rows grow as needed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedBivariateSeries<T> {
    max_degree: usize,
    // rows[i][j] is the coefficient of z^i u^j
    rows: Vec<Vec<T>>,
}

impl<T> TruncatedBivariateSeries<T>
where
    T: Clone + Zero + One,
{
    pub fn zero(max_degree: usize) -> Self {
        TruncatedBivariateSeries {
            max_degree,
            rows: vec![Vec::new(); max_degree + 1],
        }
    }

    pub fn one(max_degree: usize) -> Self {
        Self::monomial(max_degree, 0, 0, T::one())
    }

    /// `coeff * z^z_pow * u^u_pow`, or zero if `z_pow` exceeds the truncation.
    pub fn monomial(max_degree: usize, z_pow: usize, u_pow: usize, coeff: T) -> Self {
        let mut s = Self::zero(max_degree);
        s.add_at(z_pow, u_pow, coeff);
        s
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Coefficient of `z^z_pow u^u_pow`.
    pub fn coeff(&self, z_pow: usize, u_pow: usize) -> T {
        self.rows
            .get(z_pow)
            .and_then(|row| row.get(u_pow))
            .cloned()
            .unwrap_or_else(T::zero)
    }

    /// Coefficients of `z^z_pow` as a polynomial in `u`, lowest degree first.
    pub fn row(&self, z_pow: usize) -> &[T] {
        self.rows.get(z_pow).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn add_at(&mut self, z_pow: usize, u_pow: usize, value: T) {
        if z_pow > self.max_degree {
            return;
        }
        let row = &mut self.rows[z_pow];
        if row.len() <= u_pow {
            row.resize(u_pow + 1, T::zero());
        }
        let cell = std::mem::replace(&mut row[u_pow], T::zero());
        row[u_pow] = cell + value;
    }

    pub fn scale(&self, factor: &T) -> Self {
        TruncatedBivariateSeries {
            max_degree: self.max_degree,
            rows: self
                .rows
                .iter()
                .map(|row| row.iter().map(|c| c.clone() * factor.clone()).collect())
                .collect(),
        }
    }

    fn terms(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.rows.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(j, c)| (i, j, c))
        })
    }

    /// `self^exp`, truncated.
    pub fn pow(&self, exp: usize) -> Self {
        let mut acc = Self::one(self.max_degree);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// `Σ_n weights[n] * self^n`, truncated. Powers beyond the truncation
    /// degree only contribute when `self` has a constant term.
    pub fn compose_into(&self, weights: &[T]) -> Self {
        let mut acc = Self::zero(self.max_degree);
        let mut power = Self::one(self.max_degree);
        for (n, w) in weights.iter().enumerate() {
            if n > 0 {
                power = &power * self;
            }
            if !w.is_zero() {
                acc = &acc + &power.scale(w);
            }
        }
        acc
    }

    fn trimmed(mut self) -> Self {
        for row in &mut self.rows {
            while row.last().is_some_and(|c| c.is_zero()) {
                row.pop();
            }
        }
        self
    }
}

impl<T> Add for &TruncatedBivariateSeries<T>
where
    T: Clone + Zero + One,
{
    type Output = TruncatedBivariateSeries<T>;

    fn add(self, rhs: Self) -> Self::Output {
        let max_degree = self.max_degree.min(rhs.max_degree);
        let mut out = TruncatedBivariateSeries::zero(max_degree);
        for (i, j, c) in self.terms().chain(rhs.terms()) {
            out.add_at(i, j, c.clone());
        }
        out.trimmed()
    }
}

impl<T> Neg for &TruncatedBivariateSeries<T>
where
    T: Clone + Zero + One + Neg<Output = T>,
{
    type Output = TruncatedBivariateSeries<T>;

    fn neg(self) -> Self::Output {
        self.scale(&-T::one())
    }
}

impl<T> Sub for &TruncatedBivariateSeries<T>
where
    T: Clone + Zero + One + Neg<Output = T>,
{
    type Output = TruncatedBivariateSeries<T>;

    fn sub(self, rhs: Self) -> Self::Output {
        self + &(-rhs)
    }
}

impl<T> Mul for &TruncatedBivariateSeries<T>
where
    T: Clone + Zero + One,
{
    type Output = TruncatedBivariateSeries<T>;

    fn mul(self, rhs: Self) -> Self::Output {
        let max_degree = self.max_degree.min(rhs.max_degree);
        let mut out = TruncatedBivariateSeries::zero(max_degree);
        let right: Vec<_> = rhs.terms().collect();
        for (i, j, a) in self.terms() {
            for &(k, l, b) in &right {
                if i + k > max_degree {
                    continue;
                }
                out.add_at(i + k, j + l, a.clone() * b.clone());
            }
        }
        out.trimmed()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type S = TruncatedBivariateSeries<BigInt>;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn truncation_drops_high_degrees() {
        let z = S::monomial(3, 1, 0, b(1));
        let z4 = z.pow(4);
        assert_eq!(z4, S::zero(3));
        assert_eq!(z.pow(3).coeff(3, 0), b(1));
        assert_eq!(S::monomial(2, 5, 0, b(7)), S::zero(2));
    }

    #[test]
    fn binomial_expansion() {
        // (1 + z + u z)^4, coefficient of z^4 u^2 is C(4,2) = 6
        let s = &(&S::one(6) + &S::monomial(6, 1, 0, b(1))) + &S::monomial(6, 1, 1, b(1));
        let p = s.pow(4);
        assert_eq!(p.coeff(4, 2), b(6));
        assert_eq!(p.coeff(2, 1), b(12));
        assert_eq!(p.coeff(5, 0), b(0));
    }

    #[test]
    fn subtraction_cancels() {
        let s = S::monomial(4, 2, 3, b(5));
        let zero = &s - &s;
        assert_eq!(zero, S::zero(4));
        assert!(zero.row(2).is_empty());
    }

    #[test]
    fn compose_geometric() {
        // Σ z^n composed with z gives the geometric series
        let z = S::monomial(5, 1, 0, b(1));
        let g = z.compose_into(&vec![b(1); 10]);
        for n in 0..=5 {
            assert_eq!(g.coeff(n, 0), b(1));
        }
    }
}
