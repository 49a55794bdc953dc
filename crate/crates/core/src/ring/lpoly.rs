//! Integer polynomials in the formal variable `L` (the class of the affine line).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// A polynomial `Σ c_k L^k` with arbitrary-precision integer coefficients.
///
/// Canonical form: no zero coefficient is ever stored, so structural equality
/// is polynomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LPoly {
    coeffs: BTreeMap<u32, BigInt>,
}

impl LPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(0, c)
    }

    /// `c · L^k`.
    pub fn monomial(k: u32, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(k, c);
        }
        Self { coeffs }
    }

    /// `L`.
    pub fn l() -> Self {
        Self::monomial(1, 1)
    }

    /// `(1 - L)^k`.
    pub fn one_minus_l_pow(k: u32) -> Self {
        (Self::one() - Self::l()).pow(k)
    }

    /// `(L - 1)^k`.
    pub fn l_minus_one_pow(k: u32) -> Self {
        (Self::l() - Self::one()).pow(k)
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs. Repeated
    /// exponents are summed.
    pub fn from_pairs<I, C>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (u32, C)>,
        C: Into<BigInt>,
    {
        let mut out = Self::zero();
        for (k, c) in pairs {
            out.add_term(k, c.into());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: u32) -> BigInt {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    /// Value at `L = 0`.
    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &BigInt)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn add_term(&mut self, k: u32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(k).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl Add for &LPoly {
    type Output = LPoly;
    fn add(self, rhs: &LPoly) -> LPoly {
        let mut out = self.clone();
        for (k, c) in rhs.terms() {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl Add for LPoly {
    type Output = LPoly;
    fn add(self, rhs: LPoly) -> LPoly {
        &self + &rhs
    }
}

impl Sub for &LPoly {
    type Output = LPoly;
    fn sub(self, rhs: &LPoly) -> LPoly {
        let mut out = self.clone();
        for (k, c) in rhs.terms() {
            out.add_term(k, -c.clone());
        }
        out
    }
}

impl Sub for LPoly {
    type Output = LPoly;
    fn sub(self, rhs: LPoly) -> LPoly {
        &self - &rhs
    }
}

impl Neg for &LPoly {
    type Output = LPoly;
    fn neg(self) -> LPoly {
        LPoly {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }
}

impl Neg for LPoly {
    type Output = LPoly;
    fn neg(self) -> LPoly {
        -&self
    }
}

impl Mul for &LPoly {
    type Output = LPoly;
    fn mul(self, rhs: &LPoly) -> LPoly {
        let mut out = LPoly::zero();
        for (a, ca) in self.terms() {
            for (b, cb) in rhs.terms() {
                out.add_term(a + b, ca * cb);
            }
        }
        out
    }
}

impl Mul for LPoly {
    type Output = LPoly;
    fn mul(self, rhs: LPoly) -> LPoly {
        &self * &rhs
    }
}

impl fmt::Display for LPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}")?;
                    }
                    if k == 1 {
                        write!(f, "L")?;
                    } else {
                        write!(f, "L^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_minus_l_squared() {
        let p = LPoly::one_minus_l_pow(2);
        assert_eq!(p, LPoly::from_pairs([(0, 1), (1, -2), (2, 1)]));
        assert_eq!(p.to_string(), "1 - 2L + L^2");
    }

    #[test]
    fn cancellation_leaves_no_zero_entries() {
        let p = LPoly::from_pairs([(3, 4), (3, -4)]);
        assert!(p.is_zero());
        assert_eq!(p.degree(), None);
    }

    #[test]
    fn torsor_factor_times_volume_factor() {
        // (L-1)(1-L)^0 + 2(1-L) = 1 - L
        let lhs = LPoly::l_minus_one_pow(1) + LPoly::one_minus_l_pow(1).scale(&BigInt::from(2));
        assert_eq!(lhs, LPoly::one_minus_l_pow(1));
    }
}
