//! The free abelian group on stable-birational classes, with the product
//! induced by products of varieties.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Label of the class of the point. Reserved.
pub const POINT: &str = "POINT";

/// A product of stable-birational labels. The empty product is the point.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SbMonomial(Vec<String>);

impl SbMonomial {
    pub fn point() -> Self {
        Self(Vec::new())
    }

    pub fn label(l: &str) -> Self {
        if l == POINT {
            Self::point()
        } else {
            Self(vec![l.to_string()])
        }
    }

    pub fn from_factors<I: IntoIterator<Item = String>>(it: I) -> Self {
        let mut v: Vec<String> = it.into_iter().filter(|s| s != POINT).collect();
        v.sort();
        Self(v)
    }

    /// Parses `"POINT"` or `"A*B*..."`.
    pub fn parse(s: &str) -> Self {
        Self::from_factors(s.split('*').map(|p| p.trim().to_string()).filter(|p| !p.is_empty()))
    }

    pub fn is_point(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[String] {
        &self.0
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        v.sort();
        Self(v)
    }
}

impl fmt::Display for SbMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "{POINT}")
        } else {
            write!(f, "{}", self.0.join("*"))
        }
    }
}

/// Element of `Z[SB]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SbElement {
    terms: BTreeMap<SbMonomial, BigInt>,
}

impl SbElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn point() -> Self {
        Self::term(SbMonomial::point(), 1)
    }

    pub fn term(m: SbMonomial, c: impl Into<BigInt>) -> Self {
        let mut out = Self::zero();
        out.add_term(m, c.into());
        out
    }

    pub fn label(l: &str) -> Self {
        Self::term(SbMonomial::label(l), 1)
    }

    pub fn integer(c: impl Into<BigInt>) -> Self {
        Self::term(SbMonomial::point(), c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: SbMonomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SbMonomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &SbMonomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn point_coeff(&self) -> BigInt {
        self.coeff(&SbMonomial::point())
    }

    /// `Some(c)` when the element is `c · POINT` (including `c = 0`).
    pub fn as_integer(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => self.terms.get(&SbMonomial::point()).cloned(),
            _ => None,
        }
    }

    /// Everything except the point term.
    pub fn non_point_part(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| !m.is_point())
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }
}

impl Add for &SbElement {
    type Output = SbElement;
    fn add(self, rhs: &SbElement) -> SbElement {
        let mut out = self.clone();
        for (m, c) in rhs.terms() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SbElement {
    type Output = SbElement;
    fn sub(self, rhs: &SbElement) -> SbElement {
        let mut out = self.clone();
        for (m, c) in rhs.terms() {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &SbElement {
    type Output = SbElement;
    fn neg(self) -> SbElement {
        self.scale(&BigInt::from(-1))
    }
}

impl Mul for &SbElement {
    type Output = SbElement;
    fn mul(self, rhs: &SbElement) -> SbElement {
        let mut out = SbElement::zero();
        for (a, ca) in self.terms() {
            for (b, cb) in rhs.terms() {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for SbElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            write!(f, "{}[{m}]", c.abs())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_is_unit() {
        let a = SbElement::label("A");
        assert_eq!(&a * &SbElement::point(), a);
        assert_eq!(SbMonomial::parse("POINT"), SbMonomial::point());
        assert_eq!(SbMonomial::parse("B*A").to_string(), "A*B");
    }

    #[test]
    fn integer_detection() {
        let e = &SbElement::integer(3) + &SbElement::label("S");
        assert_eq!(e.as_integer(), None);
        assert_eq!(e.non_point_part(), SbElement::label("S"));
        assert_eq!(SbElement::integer(-2).as_integer(), Some(BigInt::from(-2)));
    }
}
