//! Coefficient rings: ℤ, ℚ and 𝔽_p.
//!
//! Rings are runtime values (𝔽_p carries its modulus), so every arithmetic
//! operation goes through the ring: `ring.add(&a, &b)`.

use std::fmt::{Debug, Display};

use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;

use crate::homology::matrix::{self, MatrixInvariants, SparseMatrix};
use crate::homology::snf;

pub trait Ring: Clone + Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Debug + Display + Send + Sync + 'static;

    fn zero(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn from_integer(&self, n: &IBig) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, if `a` is a unit.
    fn inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// Rank and torsion of a matrix over this ring.
    fn matrix_invariants(&self, m: &SparseMatrix<Self::Elem>) -> MatrixInvariants;

    fn name(&self) -> String;

    fn one(&self) -> Self::Elem {
        self.from_i64(1)
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_unit(&self, a: &Self::Elem) -> bool {
        self.inverse(a).is_some()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Integers;

impl Ring for Integers {
    type Elem = IBig;

    fn zero(&self) -> IBig {
        IBig::ZERO
    }

    fn from_i64(&self, n: i64) -> IBig {
        IBig::from(n)
    }

    fn from_integer(&self, n: &IBig) -> IBig {
        n.clone()
    }

    fn is_zero(&self, a: &IBig) -> bool {
        *a == IBig::ZERO
    }

    fn add(&self, a: &IBig, b: &IBig) -> IBig {
        a + b
    }

    fn neg(&self, a: &IBig) -> IBig {
        -a
    }

    fn mul(&self, a: &IBig, b: &IBig) -> IBig {
        a * b
    }

    fn inverse(&self, a: &IBig) -> Option<IBig> {
        if *a == IBig::ONE || *a == IBig::NEG_ONE {
            Some(a.clone())
        } else {
            None
        }
    }

    fn matrix_invariants(&self, m: &SparseMatrix<IBig>) -> MatrixInvariants {
        snf::integer_invariants(m)
    }

    fn name(&self) -> String {
        "Z".to_string()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = RBig;

    fn zero(&self) -> RBig {
        RBig::ZERO
    }

    fn from_i64(&self, n: i64) -> RBig {
        RBig::from(n)
    }

    fn from_integer(&self, n: &IBig) -> RBig {
        RBig::from(n.clone())
    }

    fn is_zero(&self, a: &RBig) -> bool {
        *a == RBig::ZERO
    }

    fn add(&self, a: &RBig, b: &RBig) -> RBig {
        a + b
    }

    fn neg(&self, a: &RBig) -> RBig {
        -a
    }

    fn mul(&self, a: &RBig, b: &RBig) -> RBig {
        a * b
    }

    fn inverse(&self, a: &RBig) -> Option<RBig> {
        if self.is_zero(a) {
            None
        } else {
            Some(RBig::ONE / a)
        }
    }

    fn matrix_invariants(&self, m: &SparseMatrix<RBig>) -> MatrixInvariants {
        MatrixInvariants::free(matrix::field_rank(self, m))
    }

    fn name(&self) -> String {
        "Q".to_string()
    }
}

/// The prime field 𝔽_p. Elements are canonical residues in `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

/// Element of a prime field (the modulus lives in the ring value).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue(pub u64);

impl Display for Residue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl PrimeField {
    /// Returns `None` unless `p` is a prime below 2³¹.
    pub fn new(p: u64) -> Option<Self> {
        if p < 2 || p >= 1 << 31 {
            return None;
        }
        let mut d = 2;
        while d * d <= p {
            if p % d == 0 {
                return None;
            }
            d += 1;
        }
        Some(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

impl Ring for PrimeField {
    type Elem = Residue;

    fn zero(&self) -> Residue {
        Residue(0)
    }

    fn from_i64(&self, n: i64) -> Residue {
        Residue(n.rem_euclid(self.p as i64) as u64)
    }

    fn from_integer(&self, n: &IBig) -> Residue {
        let p = IBig::from(self.p);
        let r = ((n % &p) + &p) % &p;
        let r: UBig = r.try_into().expect("residue is non-negative");
        Residue(r.try_into().expect("residue fits in u64"))
    }

    fn is_zero(&self, a: &Residue) -> bool {
        a.0 == 0
    }

    fn add(&self, a: &Residue, b: &Residue) -> Residue {
        Residue((a.0 + b.0) % self.p)
    }

    fn neg(&self, a: &Residue) -> Residue {
        Residue((self.p - a.0) % self.p)
    }

    fn mul(&self, a: &Residue, b: &Residue) -> Residue {
        Residue(a.0 * b.0 % self.p)
    }

    fn inverse(&self, a: &Residue) -> Option<Residue> {
        if a.0 == 0 {
            None
        } else {
            Some(Residue(self.pow(a.0, self.p - 2)))
        }
    }

    fn matrix_invariants(&self, m: &SparseMatrix<Residue>) -> MatrixInvariants {
        MatrixInvariants::free(matrix::field_rank(self, m))
    }

    fn name(&self) -> String {
        format!("F{}", self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_units() {
        let z = Integers;
        assert_eq!(z.inverse(&z.from_i64(1)), Some(z.from_i64(1)));
        assert_eq!(z.inverse(&z.from_i64(-1)), Some(z.from_i64(-1)));
        assert_eq!(z.inverse(&z.from_i64(2)), None);
        assert_eq!(z.inverse(&z.zero()), None);
    }

    #[test]
    fn rational_inverse() {
        let q = Rationals;
        let a = q.from_i64(-3);
        let inv = q.inverse(&a).unwrap();
        assert_eq!(q.mul(&a, &inv), q.one());
        assert!(q.inverse(&q.zero()).is_none());
    }

    #[test]
    fn prime_field() {
        assert!(PrimeField::new(4).is_none());
        assert!(PrimeField::new(1).is_none());
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.from_i64(-1), Residue(6));
        assert_eq!(f.from_integer(&IBig::from(-15)), Residue(6));
        for a in 1..7 {
            let x = f.from_i64(a);
            assert_eq!(f.mul(&x, &f.inverse(&x).unwrap()), f.one());
        }
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(f2.from_i64(2), f2.zero());
    }
}
