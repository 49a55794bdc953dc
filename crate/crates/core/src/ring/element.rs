use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::One;

use super::lpoly::LPoly;
use super::sb::POINT;

/// A product of declared class labels, sorted. The empty product is the point.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassMonomial(Vec<String>);

impl ClassMonomial {
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
        Self::from_factors(
            s.split('*')
                .map(|p| p.trim().to_string())
                .filter(|p| !p.is_empty()),
        )
    }

    pub fn is_point(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[String] {
        &self.0
    }

    /// Concatenation of factors.
    pub fn concat(&self, other: &Self) -> Self {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        v.sort();
        Self(v)
    }
}

impl fmt::Display for ClassMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "{POINT}")
        } else {
            write!(f, "{}", self.0.join("*"))
        }
    }
}

/// `Σ p_m(L) · [m]` over class monomials `m`, always in canonical form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElement {
    terms: BTreeMap<ClassMonomial, LPoly>,
}

impl RingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    pub fn integer(c: impl Into<BigInt>) -> Self {
        Self::from_poly(LPoly::constant(c))
    }

    /// `p(L) · [POINT]`.
    pub fn from_poly(p: LPoly) -> Self {
        Self::term(ClassMonomial::point(), p)
    }

    pub fn l_power(k: u32) -> Self {
        Self::from_poly(LPoly::monomial(k, 1))
    }

    pub fn symbol(label: &str) -> Self {
        Self::term(ClassMonomial::label(label), LPoly::one())
    }

    pub fn term(m: ClassMonomial, p: LPoly) -> Self {
        let mut out = Self::zero();
        out.add_poly(m, &p);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ClassMonomial, &LPoly)> {
        self.terms.iter()
    }

    pub fn poly(&self, m: &ClassMonomial) -> LPoly {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Labels of every factor appearing in the element.
    pub fn labels(&self) -> impl Iterator<Item = &String> {
        self.terms.keys().flat_map(|m| m.factors().iter())
    }

    pub fn add_poly(&mut self, m: ClassMonomial, p: &LPoly) {
        if p.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                *slot = &*slot + p;
                if slot.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, p.clone());
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (m, p) in other.terms() {
            self.add_poly(m.clone(), p);
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        self.mul_poly(&LPoly::constant(c.clone()))
    }

    pub fn mul_poly(&self, q: &LPoly) -> Self {
        let mut out = Self::zero();
        for (m, p) in self.terms() {
            out.add_poly(m.clone(), &(p * q));
        }
        out
    }

    /// Multiplies every monomial by a trivial-action monomial by concatenation.
    pub fn mul_monomial(&self, t: &ClassMonomial) -> Self {
        let mut out = Self::zero();
        for (m, p) in self.terms() {
            out.add_poly(m.concat(t), p);
        }
        out
    }

    /// Rebuilds the element from its raw term list. Kept so callers can check
    /// that normalization is idempotent.
    pub fn normalize(&self) -> Self {
        Self::from_raw_terms(
            self.terms
                .iter()
                .map(|(m, p)| (m.clone(), p.terms().map(|(k, c)| (k, c.clone())).collect())),
        )
    }

    pub fn from_raw_terms<I>(it: I) -> Self
    where
        I: IntoIterator<Item = (ClassMonomial, Vec<(u32, BigInt)>)>,
    {
        let mut out = Self::zero();
        for (m, pairs) in it {
            out.add_poly(m, &LPoly::from_pairs(pairs));
        }
        out
    }

    /// The polynomial attached to the point monomial, provided nothing else
    /// is present.
    pub fn as_lpoly(&self) -> Option<LPoly> {
        match self.terms.len() {
            0 => Some(LPoly::zero()),
            1 => self.terms.get(&ClassMonomial::point()).cloned(),
            _ => None,
        }
    }
}

impl Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl Add for RingElement {
    type Output = RingElement;
    fn add(mut self, rhs: RingElement) -> RingElement {
        self.add_assign(&rhs);
        self
    }
}

impl Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        self + &(-rhs)
    }
}

impl Sub for RingElement {
    type Output = RingElement;
    fn sub(self, rhs: RingElement) -> RingElement {
        &self - &rhs
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.scale(&-BigInt::one())
    }
}

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        -&self
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, p)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if m.is_point() {
                write!(f, "({p})")?;
            } else {
                write!(f, "({p})[{m}]")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_l_multiples() {
        let a = RingElement::symbol("A");
        assert!((&a + &(-&a)).is_zero());
        let one_plus_l = &a + &a.mul_poly(&LPoly::l());
        assert_eq!(one_plus_l.poly(&ClassMonomial::label("A")), LPoly::from_pairs([(0, 1), (1, 1)]));
        let back = &a.mul_poly(&LPoly::one_minus_l_pow(1)) + &a.mul_poly(&LPoly::l());
        assert_eq!(back, a);
    }

    #[test]
    fn monomial_parsing_is_order_free() {
        assert_eq!(ClassMonomial::parse("B*A"), ClassMonomial::parse("A*B"));
        assert_eq!(ClassMonomial::parse("POINT"), ClassMonomial::point());
        assert_eq!(ClassMonomial::parse("A*POINT"), ClassMonomial::label("A"));
    }
}
