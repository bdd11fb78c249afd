//! Exact arithmetic in the field extension `Q(sqrt 5)`, used for the
//! golden-ratio renewal constants.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// `a + b*sqrt(5)` with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q5 {
    pub a: BigRational,
    pub b: BigRational,
}

impl Q5 {
    pub fn from_rational(a: BigRational) -> Self {
        Q5 {
            a,
            b: BigRational::zero(),
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Q5::from_rational(BigRational::from_integer(n.into()))
    }

    /// `(sqrt 5 - 1) / 2`, the golden ratio conjugate.
    pub fn golden_p() -> Self {
        let half = BigRational::new(1.into(), 2.into());
        Q5 {
            a: -half.clone(),
            b: half,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn inv(&self) -> Q5 {
        let five = BigRational::from_integer(5.into());
        let norm = &self.a * &self.a - five * &self.b * &self.b;
        assert!(!norm.is_zero(), "inverse of zero in Q(sqrt 5)");
        Q5 {
            a: &self.a / &norm,
            b: -&self.b / &norm,
        }
    }

    pub fn pow(&self, e: i32) -> Q5 {
        if e < 0 {
            return self.inv().pow(-e);
        }
        let mut acc = Q5::from_integer(1);
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap() + self.b.to_f64().unwrap() * 5f64.sqrt()
    }
}

impl Add for Q5 {
    type Output = Q5;
    fn add(self, rhs: Q5) -> Q5 {
        Q5 {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
        }
    }
}

impl Sub for Q5 {
    type Output = Q5;
    fn sub(self, rhs: Q5) -> Q5 {
        Q5 {
            a: self.a - rhs.a,
            b: self.b - rhs.b,
        }
    }
}

impl Mul for Q5 {
    type Output = Q5;
    fn mul(self, rhs: Q5) -> Q5 {
        let five = BigRational::from_integer(5.into());
        Q5 {
            a: &self.a * &rhs.a + five * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl Div for Q5 {
    type Output = Q5;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Q5) -> Q5 {
        self * rhs.inv()
    }
}

impl Neg for Q5 {
    type Output = Q5;
    fn neg(self) -> Q5 {
        Q5 {
            a: -self.a,
            b: -self.b,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn golden_ratio_identities() {
        let p = Q5::golden_p();
        let one = Q5::from_integer(1);
        assert_eq!(p.pow(2), one.clone() - p.clone());
        assert_eq!(p.pow(3), Q5::from_integer(2) * p.clone() - one);
        assert!((p.to_f64() - 0.618_033_988_749_894_8).abs() < 1e-15);
    }

    #[test]
    fn sqrt_five_squares_to_five() {
        let root = Q5 { a: rat(0, 1), b: rat(1, 1) };
        assert_eq!(root.pow(2), Q5::from_integer(5));
    }

    #[test]
    fn division_round_trips() {
        let x = Q5 { a: rat(3, 7), b: rat(-2, 5) };
        let y = Q5 { a: rat(1, 2), b: rat(4, 3) };
        let q = x.clone() / y.clone();
        assert_eq!(q * y, x);
    }

    #[test]
    fn negative_powers_invert() {
        let p = Q5::golden_p();
        assert_eq!(p.pow(-2) * p.pow(2), Q5::from_integer(1));
    }
}
