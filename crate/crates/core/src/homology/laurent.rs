//! Laurent polynomials in q with integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Laurent {
    coeffs: BTreeMap<i32, i64>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn monomial(c: i64, exp: i32) -> Self {
        let mut l = Laurent::zero();
        l.add_term(exp, c);
        l
    }

    pub fn one() -> Self {
        Laurent::monomial(1, 0)
    }

    /// q + q⁻¹
    pub fn circle() -> Self {
        Laurent::monomial(1, 1) + Laurent::monomial(1, -1)
    }

    pub fn add_term(&mut self, exp: i32, c: i64) {
        let e = self.coeffs.entry(exp).or_insert(0);
        *e += c;
        if *e == 0 {
            self.coeffs.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        self.coeffs.get(&exp).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn pow(&self, n: usize) -> Self {
        (0..n).fold(Laurent::one(), |acc, _| &acc * self)
    }

    /// Multiplication by q^k.
    pub fn shift(&self, k: i32) -> Self {
        Laurent { coeffs: self.coeffs.iter().map(|(&e, &c)| (e + k, c)).collect() }
    }
}

impl Add for Laurent {
    type Output = Laurent;
    fn add(mut self, rhs: Laurent) -> Laurent {
        for (e, c) in rhs.coeffs {
            self.add_term(e, c);
        }
        self
    }
}

impl Neg for Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        Laurent { coeffs: self.coeffs.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

impl Sub for Laurent {
    type Output = Laurent;
    fn sub(self, rhs: Laurent) -> Laurent {
        self + (-rhs)
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (&a, &x) in &self.coeffs {
            for (&b, &y) in &rhs.coeffs {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (&e, &c)) in self.coeffs.iter().enumerate() {
            let sign = if c < 0 { "-" } else if i > 0 { "+" } else { "" };
            let abs = c.unsigned_abs();
            write!(f, "{sign}")?;
            match (abs, e) {
                (_, 0) => write!(f, "{abs}")?,
                (1, _) => write!(f, "q^{e}")?,
                _ => write!(f, "{abs}*q^{e}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_powers() {
        let c2 = Laurent::circle().pow(2);
        assert_eq!(c2.coeff(2), 1);
        assert_eq!(c2.coeff(0), 2);
        assert_eq!(c2.coeff(-2), 1);
        assert_eq!(c2.to_string(), "q^-2+2+q^2");
    }

    #[test]
    fn cancellation() {
        let a = Laurent::monomial(3, 1);
        assert!((a.clone() - a).is_zero());
        assert_eq!(Laurent::monomial(-1, 2).shift(-2), Laurent::monomial(-1, 0));
    }
}
