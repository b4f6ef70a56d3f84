//! Truncated power series at the origin.
//!
//! A [`TruncatedSeries`] of order `N` holds the Taylor coefficients
//! `c_0, ..., c_N` of an analytic function at 0. Every operation takes the
//! output truncation order explicitly; coefficients past an operand's own
//! order are read as zero, so a short series behaves like the polynomial it
//! spells out.
//!
//! `exp` and `log` use the first-order ODE recurrences (`f' = a' f` and
//! `a' = b' a`), which cost O(N²) and need no composition machinery.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<f64>,
}

impl TruncatedSeries {
    /// Builds a series from its coefficients; the order is `coeffs.len() - 1`.
    ///
    /// Panics if `coeffs` is empty.
    pub fn new(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least c_0");
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![0.0; order + 1],
        }
    }

    pub fn constant(value: f64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = value;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(1.0, order)
    }

    /// The series of the variable itself, `m`.
    pub fn variable(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = 1.0;
        }
        s
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> f64) -> Self {
        Self {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// Coefficient of `m^k`.
    pub fn coeff(&self, k: usize) -> Result<f64> {
        self.coeffs.get(k).copied().ok_or(Error::IndexBeyondOrder {
            index: k,
            order: self.order(),
        })
    }

    /// `c_k` for `k <= order`, zero past it.
    #[inline]
    fn at(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Re-truncates (or zero-extends) to order `n`.
    pub fn truncate(&self, n: usize) -> Self {
        Self::from_fn(n, |k| self.at(k))
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Cauchy product truncated at order `n`.
    pub fn mul(&self, other: &Self, n: usize) -> Self {
        let mut out = vec![0.0; n + 1];
        let la = self.order().min(n);
        for (i, &a) in self.coeffs[..=la].iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            let lb = other.order().min(n - i);
            for (j, &b) in other.coeffs[..=lb].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    /// Only the coefficient of `m^k` in `self * other`, in O(k).
    pub fn product_coeff(&self, other: &Self, k: usize) -> f64 {
        (0..=k).map(|j| self.at(j) * other.at(k - j)).sum()
    }

    /// `exp(self)` truncated at order `n`.
    pub fn exp(&self, n: usize) -> Self {
        let mut c = vec![0.0; n + 1];
        c[0] = self.at(0).exp();
        for k in 1..=n {
            let mut acc = 0.0;
            for j in 1..=k.min(self.order()) {
                acc += j as f64 * self.coeffs[j] * c[k - j];
            }
            c[k] = acc / k as f64;
        }
        Self { coeffs: c }
    }

    /// `log(self)` truncated at order `n`; needs `c_0 > 0`.
    pub fn log(&self, n: usize) -> Result<Self> {
        let a0 = self.at(0);
        if a0.is_nan() || a0 <= 0.0 {
            return Err(Error::NonPositiveConstantTerm(a0));
        }
        let mut b = vec![0.0; n + 1];
        b[0] = a0.ln();
        for k in 1..=n {
            let mut acc = 0.0;
            for j in 1..k {
                acc += j as f64 * b[j] * self.at(k - j);
            }
            b[k] = (self.at(k) - acc / k as f64) / a0;
        }
        Ok(Self { coeffs: b })
    }

    /// `self^k` truncated at order `n`, by repeated squaring.
    pub fn pow(&self, k: u32, n: usize) -> Self {
        let mut result = Self::one(n);
        let mut base = self.truncate(n);
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base, n);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, n);
            }
        }
        result
    }

    /// Iterator over `self^0, self^1, ...`, each truncated at order `n` and
    /// obtained from the previous power by one multiplication.
    pub fn powers(&self, n: usize) -> Powers {
        Powers {
            base: self.truncate(n),
            next: Some(Self::one(n)),
            order: n,
        }
    }

    /// Coefficients of `(1 + m)^alpha`: the generalized binomial `C(alpha, k)`.
    pub fn binomial(alpha: f64, n: usize) -> Self {
        let mut c = vec![0.0; n + 1];
        c[0] = 1.0;
        for k in 1..=n {
            c[k] = c[k - 1] * (alpha - (k - 1) as f64) / k as f64;
        }
        Self { coeffs: c }
    }

    /// `d/dm`, one order lower (an order-0 series differentiates to zero).
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self::from_fn(self.order() - 1, |k| (k + 1) as f64 * self.coeffs[k + 1])
    }

    /// Substitutes `m -> factor * m`.
    pub fn dilate(&self, factor: f64) -> Self {
        let mut f = 1.0;
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| {
                    let v = c * f;
                    f *= factor;
                    v
                })
                .collect(),
        }
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

fn zip_with(a: &TruncatedSeries, b: &TruncatedSeries, f: impl Fn(f64, f64) -> f64) -> TruncatedSeries {
    let n = a.order().min(b.order());
    TruncatedSeries::from_fn(n, |k| f(a.coeffs[k], b.coeffs[k]))
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: Self) -> TruncatedSeries {
        zip_with(self, rhs, |x, y| x - y)
    }
}

/// Product truncated at the smaller of the two orders.
impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::mul(self, rhs, self.order().min(rhs.order()))
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.scale(-1.0)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}·m")?,
                _ => write!(f, "{c}·m^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(m^{})", self.order() + 1)
    }
}

/// See [`TruncatedSeries::powers`].
#[derive(Debug, Clone)]
pub struct Powers {
    base: TruncatedSeries,
    next: Option<TruncatedSeries>,
    order: usize,
}

impl Iterator for Powers {
    type Item = TruncatedSeries;

    fn next(&mut self) -> Option<TruncatedSeries> {
        let current = self.next.take()?;
        self.next = Some(current.mul(&self.base, self.order));
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn assert_coeffs(s: &TruncatedSeries, expected: &[f64], tol: f64) {
        assert_eq!(s.order() + 1, expected.len(), "order mismatch for {s}");
        for (k, (a, b)) in s.coeffs().iter().zip(expected).enumerate() {
            assert!((a - b).abs() <= tol, "c_{k}: {a} vs {b}");
        }
    }

    fn exp_series(n: usize) -> TruncatedSeries {
        TruncatedSeries::variable(n).exp(n)
    }

    #[test]
    fn mul_difference_of_squares() {
        let a = TruncatedSeries::new(vec![1.0, 1.0]);
        let b = TruncatedSeries::new(vec![1.0, -1.0]);
        assert_coeffs(&a.mul(&b, 2), &[1.0, 0.0, -1.0], 0.0);
    }

    #[test]
    fn mul_by_one_is_identity() {
        let b = TruncatedSeries::new(vec![0.3, -2.0, 5.5, 1e-3]);
        assert_eq!(TruncatedSeries::one(3).mul(&b, 3), b);
    }

    #[test]
    fn exp_times_exp_is_exp_2m() {
        let e = exp_series(4);
        // 2^k / k!
        assert_coeffs(&e.mul(&e, 4), &[1.0, 2.0, 2.0, 4.0 / 3.0, 2.0 / 3.0], 1e-15);
    }

    #[test]
    fn exp_examples() {
        assert_coeffs(&exp_series(3), &[1.0, 1.0, 0.5, 1.0 / 6.0], 1e-16);
        assert_coeffs(&TruncatedSeries::zero(4).exp(4), &[1.0, 0.0, 0.0, 0.0, 0.0], 0.0);
        // e^{2m - m²/2} = 1 + 2m + 3/2 m² + 1/3 m³ + ...
        let a = TruncatedSeries::new(vec![0.0, 2.0, -0.5]);
        assert_coeffs(&a.exp(3), &[1.0, 2.0, 1.5, 1.0 / 3.0], 1e-15);
    }

    #[test]
    fn log_examples() {
        let a = TruncatedSeries::new(vec![1.0, 1.0]);
        assert_coeffs(&a.log(3).unwrap(), &[0.0, 1.0, -0.5, 1.0 / 3.0], 1e-16);
        let c = TruncatedSeries::constant(2.5, 3);
        assert_coeffs(&c.log(3).unwrap(), &[2.5f64.ln(), 0.0, 0.0, 0.0], 0.0);
    }

    #[test]
    fn log_rejects_non_positive_constant() {
        for a0 in [0.0, -1.0, f64::NAN] {
            let a = TruncatedSeries::new(vec![a0, 1.0]);
            assert!(matches!(a.log(2), Err(Error::NonPositiveConstantTerm(_))));
        }
    }

    #[test]
    fn pow_examples() {
        let a = TruncatedSeries::new(vec![1.0, 1.0]);
        assert_coeffs(&a.pow(2, 2), &[1.0, 2.0, 1.0], 0.0);
        assert_coeffs(&a.pow(0, 3), &[1.0, 0.0, 0.0, 0.0], 0.0);
        assert_eq!(a.pow(10, 5).coeff(3).unwrap(), 120.0);
    }

    #[test]
    fn powers_iterator_matches_pow() {
        let a = TruncatedSeries::new(vec![1.0, -0.5, 0.25, 2.0]);
        for (k, p) in a.powers(6).take(8).enumerate() {
            let direct = a.pow(k as u32, 6);
            for (x, y) in p.coeffs().iter().zip(direct.coeffs()) {
                assert_relative_eq!(*x, *y, max_relative = 1e-12, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn binomial_examples() {
        assert_coeffs(&TruncatedSeries::binomial(-2.0, 3), &[1.0, -2.0, 3.0, -4.0], 0.0);
        assert_coeffs(&TruncatedSeries::binomial(1.0, 3), &[1.0, 1.0, 0.0, 0.0], 0.0);
        assert_coeffs(&TruncatedSeries::binomial(0.5, 2), &[1.0, 0.5, -0.125], 0.0);
    }

    #[test]
    fn coeff_extraction() {
        let e = exp_series(5);
        assert_relative_eq!(e.coeff(3).unwrap(), 1.0 / 6.0, max_relative = 1e-15);
        assert_eq!(e.coeff(0).unwrap(), 1.0);
        assert_eq!(
            e.coeff(6),
            Err(Error::IndexBeyondOrder { index: 6, order: 5 })
        );
    }

    #[test]
    fn derivative_of_exp_nm_at_zero() {
        // (n-1)! [m^{n-1}] e^{nm} = n^{n-1}; for n = 5 that is 625.
        let n = 5;
        let s = TruncatedSeries::variable(n - 1).scale(n as f64).exp(n - 1);
        let fact: f64 = (1..n).map(|k| k as f64).product();
        assert_relative_eq!(fact * s.coeff(n - 1).unwrap(), 625.0, max_relative = 1e-14);
    }

    #[test]
    fn derivative_and_eval() {
        let s = TruncatedSeries::new(vec![1.0, 2.0, 3.0]);
        assert_eq!(s.derivative().coeffs(), &[2.0, 6.0]);
        assert_eq!(s.eval(2.0), 1.0 + 4.0 + 12.0);
        assert_eq!(TruncatedSeries::constant(4.0, 0).derivative().coeffs(), &[0.0]);
    }

    fn series_strategy(order: usize) -> impl Strategy<Value = TruncatedSeries> {
        prop::collection::vec(-1.0f64..1.0, order + 1).prop_map(TruncatedSeries::new)
    }

    proptest! {
        #[test]
        fn exp_log_round_trip(a in series_strategy(12)) {
            let back = a.exp(12).log(12).unwrap();
            for (x, y) in back.coeffs().iter().zip(a.coeffs()) {
                prop_assert!((x - y).abs() < 1e-12, "{x} vs {y}");
            }
        }

        #[test]
        fn mul_commutes_and_associates(
            a in series_strategy(8), b in series_strategy(8), c in series_strategy(8)
        ) {
            let ab = a.mul(&b, 8);
            let ba = b.mul(&a, 8);
            let left = ab.mul(&c, 8);
            let right = a.mul(&b.mul(&c, 8), 8);
            for k in 0..=8 {
                prop_assert!((ab.coeffs()[k] - ba.coeffs()[k]).abs() < 1e-15);
                prop_assert!((left.coeffs()[k] - right.coeffs()[k]).abs() < 1e-13);
            }
        }

        #[test]
        fn pow_is_additive(
            coeffs in prop::collection::vec(-1.0f64..1.0, 8),
            j in 0u32..6,
            k in 0u32..6,
        ) {
            let mut coeffs = coeffs;
            coeffs[0] = 1.0 + coeffs[0].abs();
            let a = TruncatedSeries::new(coeffs);
            let lhs = a.pow(j + k, 7);
            let rhs = a.pow(j, 7).mul(&a.pow(k, 7), 7);
            for (x, y) in lhs.coeffs().iter().zip(rhs.coeffs()) {
                let scale = x.abs().max(y.abs()).max(1.0);
                prop_assert!((x - y).abs() <= 1e-10 * scale, "{x} vs {y}");
            }
        }

        #[test]
        fn binomial_integer_power_terminates(r in 0u32..12) {
            let s = TruncatedSeries::binomial(r as f64, 15);
            let mut c = 1.0;
            for k in 0..=15usize {
                let expected = if k as u32 <= r { c } else { 0.0 };
                prop_assert_eq!(s.coeffs()[k], expected);
                c = c * (r as f64 - k as f64) / (k + 1) as f64;
            }
        }
    }
}
