use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::element::{ClassMonomial, RingElement};
use super::lpoly::LPoly;
use super::sb::{SbElement, POINT};
use super::RingError;

/// A declared generator of the symbolic Grothendieck ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassSymbol {
    pub label: String,
    pub action_order: u64,
    pub sb_reduction: Option<SbElement>,
    pub underlying_plain: Option<RingElement>,
    pub quotient_class: Option<RingElement>,
}

impl ClassSymbol {
    pub fn plain(label: &str) -> Self {
        Self {
            label: label.to_string(),
            action_order: 1,
            sb_reduction: None,
            underlying_plain: None,
            quotient_class: None,
        }
    }

    pub fn with_sb(mut self, sb: SbElement) -> Self {
        self.sb_reduction = Some(sb);
        self
    }

    pub fn with_action(mut self, n: u64, underlying: RingElement, quotient: RingElement) -> Self {
        self.action_order = n;
        self.underlying_plain = Some(underlying);
        self.quotient_class = Some(quotient);
        self
    }

    pub fn is_trivial(&self) -> bool {
        self.action_order == 1
    }
}

/// Class of the product of two nontrivial-action symbols with diagonal action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductRule {
    pub left: String,
    pub right: String,
    pub product: RingElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    StablyRational { components: BigInt },
    Obstructed { witness: SbElement },
}

impl Verdict {
    pub fn is_obstructed(&self) -> bool {
        matches!(self, Verdict::Obstructed { .. })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolTable {
    sb_symbols: BTreeSet<String>,
    classes: BTreeMap<String, ClassSymbol>,
    rules: BTreeMap<(String, String), RingElement>,
}

fn pair_key(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

fn valid_label(l: &str) -> bool {
    !l.is_empty() && l != POINT && l != "L" && !l.contains('*') && l.trim() == l
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds and validates a table.
    pub fn build(
        sb_symbols: Vec<String>,
        classes: Vec<ClassSymbol>,
        rules: Vec<ProductRule>,
    ) -> Result<Self, RingError> {
        let mut t = Self::new();
        for s in sb_symbols {
            if s == POINT {
                continue;
            }
            if !valid_label(&s) {
                return Err(RingError::InvalidTable(format!("bad sb label {s:?}")));
            }
            if !t.sb_symbols.insert(s.clone()) {
                return Err(RingError::InvalidTable(format!("duplicate sb label {s}")));
            }
        }
        for c in classes {
            if !valid_label(&c.label) {
                return Err(RingError::InvalidTable(format!("bad class label {:?}", c.label)));
            }
            if t.classes.contains_key(&c.label) {
                return Err(RingError::InvalidTable(format!("duplicate class label {}", c.label)));
            }
            if c.action_order == 0 {
                return Err(RingError::InvalidTable(format!("{}: action order 0", c.label)));
            }
            t.classes.insert(c.label.clone(), c);
        }
        // trivial symbols without an explicit reduction are their own sb class
        let implicit: Vec<String> = t
            .classes
            .values()
            .filter(|c| c.is_trivial() && c.sb_reduction.is_none())
            .map(|c| c.label.clone())
            .collect();
        t.sb_symbols.extend(implicit);
        for r in rules {
            let key = pair_key(&r.left, &r.right);
            if t.rules.insert(key, r.product).is_some() {
                return Err(RingError::InvalidTable(format!(
                    "duplicate product rule {}*{}",
                    r.left, r.right
                )));
            }
        }
        t.validate()?;
        Ok(t)
    }

    /// Table with trivial-action symbols only, each its own sb class.
    pub fn plain(labels: &[&str]) -> Self {
        Self::build(
            vec![],
            labels.iter().map(|l| ClassSymbol::plain(l)).collect(),
            vec![],
        )
        .expect("plain labels")
    }

    fn validate(&self) -> Result<(), RingError> {
        let bad = |m: String| Err(RingError::InvalidTable(m));
        for c in self.classes.values() {
            if let Some(sb) = &c.sb_reduction {
                for (m, _) in sb.terms() {
                    for f in m.factors() {
                        if !self.sb_symbols.contains(f) {
                            return bad(format!("{}: undeclared sb label {f}", c.label));
                        }
                    }
                }
            }
            let me = RingElement::symbol(&c.label);
            for (what, e) in [("underlying_plain", &c.underlying_plain), ("quotient_class", &c.quotient_class)] {
                let Some(e) = e else { continue };
                self.check_declared(e)?;
                if c.is_trivial() {
                    if *e != me {
                        return bad(format!("{}: trivial action but {what} differs", c.label));
                    }
                } else if self.action_order_of(e)? != 1 {
                    return bad(format!("{}: {what} must have trivial action", c.label));
                }
            }
        }
        for ((a, b), prod) in &self.rules {
            for l in [a, b] {
                match self.classes.get(l) {
                    None => return Err(RingError::UndeclaredSymbol(l.clone())),
                    Some(c) if c.is_trivial() => {
                        return bad(format!("product rule on trivial-action symbol {l}"))
                    }
                    _ => {}
                }
            }
            self.check_declared(prod)?;
            // the declared class must forget to the product of the underlying classes
            let (ua, ub) = (self.underlying(a), self.underlying(b));
            if let (Some(ua), Some(ub)) = (ua, ub) {
                if let Ok(rp) = self.res_full(prod) {
                    if rp != self.mul(&ua, &ub)? {
                        return bad(format!("product rule {a}*{b} inconsistent with forgetting the action"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty() && self.sb_symbols.is_empty()
    }

    pub fn class(&self, label: &str) -> Option<&ClassSymbol> {
        self.classes.get(label)
    }

    pub fn classes(&self) -> impl Iterator<Item = &ClassSymbol> {
        self.classes.values()
    }

    /// Explicitly declared sb labels plus implicit ones.
    pub fn sb_symbols(&self) -> impl Iterator<Item = &String> {
        self.sb_symbols.iter()
    }

    pub fn rules(&self) -> impl Iterator<Item = ProductRule> + '_ {
        self.rules.iter().map(|((a, b), p)| ProductRule {
            left: a.clone(),
            right: b.clone(),
            product: p.clone(),
        })
    }

    /// Labels that serialization must list under `sb_symbols`.
    pub fn explicit_sb_symbols(&self) -> Vec<String> {
        self.sb_symbols
            .iter()
            .filter(|s| {
                !self
                    .classes
                    .get(*s)
                    .is_some_and(|c| c.is_trivial() && c.sb_reduction.is_none())
            })
            .cloned()
            .collect()
    }

    /// Merges two tables; identical redeclarations are allowed.
    pub fn merge(&self, other: &SymbolTable) -> Result<Self, RingError> {
        let mut classes = self.classes.clone();
        for (l, c) in &other.classes {
            match classes.get(l) {
                Some(prev) if prev != c => {
                    return Err(RingError::InvalidTable(format!("conflicting declarations of {l}")))
                }
                _ => {
                    classes.insert(l.clone(), c.clone());
                }
            }
        }
        let mut rules = self.rules.clone();
        for (k, p) in &other.rules {
            match rules.get(k) {
                Some(prev) if prev != p => {
                    return Err(RingError::InvalidTable(format!(
                        "conflicting product rules for {}*{}",
                        k.0, k.1
                    )))
                }
                _ => {
                    rules.insert(k.clone(), p.clone());
                }
            }
        }
        let mut sb: BTreeSet<String> = self.explicit_sb_symbols().into_iter().collect();
        sb.extend(other.explicit_sb_symbols());
        Self::build(
            sb.into_iter().collect(),
            classes.into_values().collect(),
            rules
                .into_iter()
                .map(|((left, right), product)| ProductRule { left, right, product })
                .collect(),
        )
    }

    fn underlying(&self, label: &str) -> Option<RingElement> {
        let c = self.classes.get(label)?;
        if c.is_trivial() {
            Some(RingElement::symbol(label))
        } else {
            c.underlying_plain.clone()
        }
    }

    fn order(&self, label: &str) -> Result<u64, RingError> {
        self.classes
            .get(label)
            .map(|c| c.action_order)
            .ok_or_else(|| RingError::UndeclaredSymbol(label.to_string()))
    }

    /// Splits a monomial into its nontrivial-action factor (if any) and the
    /// trivial remainder.
    fn split(&self, m: &ClassMonomial) -> Result<(Option<String>, ClassMonomial), RingError> {
        let mut nontrivial = None;
        let mut rest = Vec::new();
        for f in m.factors() {
            if self.order(f)? > 1 {
                if nontrivial.is_some() {
                    return Err(RingError::InvalidTable(format!(
                        "monomial {m} has two nontrivial-action factors"
                    )));
                }
                nontrivial = Some(f.clone());
            } else {
                rest.push(f.clone());
            }
        }
        Ok((nontrivial, ClassMonomial::from_factors(rest)))
    }

    /// Errors on undeclared labels or monomials with two nontrivial factors.
    pub fn check_declared(&self, a: &RingElement) -> Result<(), RingError> {
        for (m, _) in a.terms() {
            self.split(m)?;
        }
        Ok(())
    }

    pub fn monomial_order(&self, m: &ClassMonomial) -> Result<u64, RingError> {
        match self.split(m)?.0 {
            Some(l) => self.order(&l),
            None => Ok(1),
        }
    }

    /// Least common multiple of the action orders present (1 for trivial).
    pub fn action_order_of(&self, a: &RingElement) -> Result<u64, RingError> {
        let mut n = 1u64;
        for (m, _) in a.terms() {
            n = num_integer::lcm(n, self.monomial_order(m)?);
        }
        Ok(n)
    }

    pub fn has_nontrivial_action(&self, a: &RingElement) -> Result<bool, RingError> {
        Ok(self.action_order_of(a)? > 1)
    }

    fn mul_monomials(&self, a: &ClassMonomial, b: &ClassMonomial) -> Result<RingElement, RingError> {
        let (na, ta) = self.split(a)?;
        let (nb, tb) = self.split(b)?;
        match (na, nb) {
            (Some(x), Some(y)) => {
                let rule = self
                    .rules
                    .get(&pair_key(&x, &y))
                    .ok_or(RingError::MissingProductRule(x, y))?;
                Ok(rule.mul_monomial(&ta.concat(&tb)))
            }
            _ => Ok(RingElement::term(a.concat(b), LPoly::one())),
        }
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> Result<RingElement, RingError> {
        let mut out = RingElement::zero();
        for (ma, pa) in a.terms() {
            for (mb, pb) in b.terms() {
                let prod = self.mul_monomials(ma, mb)?;
                out.add_assign(&prod.mul_poly(&(pa * pb)));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, a: &RingElement, k: u32) -> Result<RingElement, RingError> {
        let mut acc = RingElement::one();
        for _ in 0..k {
            acc = self.mul(&acc, a)?;
        }
        Ok(acc)
    }

    /// Stable-birational class of a trivial-action label.
    pub fn sb_of_label(&self, label: &str) -> Result<SbElement, RingError> {
        let c = self
            .classes
            .get(label)
            .ok_or_else(|| RingError::UndeclaredSymbol(label.to_string()))?;
        if !c.is_trivial() {
            return Err(RingError::NontrivialAction(label.to_string()));
        }
        Ok(c.sb_reduction.clone().unwrap_or_else(|| SbElement::label(label)))
    }

    pub fn sb_of_monomial(&self, m: &ClassMonomial) -> Result<SbElement, RingError> {
        let mut acc = SbElement::point();
        for f in m.factors() {
            acc = &acc * &self.sb_of_label(f)?;
        }
        Ok(acc)
    }

    /// Larsen–Lunts reduction: set `L = 0` and pass to stable-birational classes.
    pub fn reduce_mod_l(&self, a: &RingElement) -> Result<SbElement, RingError> {
        let mut out = SbElement::zero();
        for (m, p) in a.terms() {
            let sb = self.sb_of_monomial(m)?;
            let c = p.constant_term();
            if !c.is_zero() {
                out = &out + &sb.scale(&c);
            }
        }
        Ok(out)
    }

    pub fn congruent_mod_l(&self, a: &RingElement, b: &RingElement) -> Result<bool, RingError> {
        Ok(self.reduce_mod_l(&(a - b))?.is_zero())
    }

    pub fn verdict(&self, a: &RingElement) -> Result<Verdict, RingError> {
        let r = self.reduce_mod_l(a)?;
        Ok(verdict_of(&r))
    }

    pub fn res_full(&self, a: &RingElement) -> Result<RingElement, RingError> {
        let mut out = RingElement::zero();
        for (m, p) in a.terms() {
            let (n, rest) = self.split(m)?;
            let img = match n {
                None => RingElement::term(m.clone(), LPoly::one()),
                Some(l) => self
                    .classes
                    .get(&l)
                    .and_then(|c| c.underlying_plain.clone())
                    .ok_or(RingError::MissingUnderlying(l))?
                    .mul_monomial(&rest),
            };
            out.add_assign(&img.mul_poly(p));
        }
        Ok(out)
    }

    pub fn res_to_level(&self, a: &RingElement, n: u64) -> Result<RingElement, RingError> {
        if n == 0 {
            return Err(RingError::InvalidArgument("level must be positive".into()));
        }
        for (m, _) in a.terms() {
            let k = self.monomial_order(m)?;
            if !n.is_multiple_of(k) {
                return Err(RingError::LevelNotDivisible {
                    monomial: m.to_string(),
                    order: k,
                    level: n,
                });
            }
        }
        self.res_full(a)
    }

    /// Quotient by the action. Linear over `Z[L]`, not multiplicative.
    pub fn quotient_mu(&self, a: &RingElement) -> Result<RingElement, RingError> {
        let mut out = RingElement::zero();
        for (m, p) in a.terms() {
            let (n, rest) = self.split(m)?;
            let img = match n {
                None => RingElement::term(m.clone(), LPoly::one()),
                Some(l) => self
                    .classes
                    .get(&l)
                    .and_then(|c| c.quotient_class.clone())
                    .ok_or(RingError::MissingQuotient(l))?
                    .mul_monomial(&rest),
            };
            out.add_assign(&img.mul_poly(p));
        }
        Ok(out)
    }
}

/// `StablyRational(c)` for `c · POINT` with `c ≥ 0`, otherwise an obstruction
/// carrying the non-point part (or the whole element when that part vanishes).
pub fn verdict_of(r: &SbElement) -> Verdict {
    match r.as_integer() {
        Some(c) if !c.is_negative() => Verdict::StablyRational { components: c },
        _ => {
            let w = r.non_point_part();
            Verdict::Obstructed {
                witness: if w.is_zero() { r.clone() } else { w },
            }
        }
    }
}

/// Class of the blow-up of `x` along `y` with exceptional divisor `e`.
pub fn bittner_blowup_class(x: &RingElement, y: &RingElement, e: &RingElement) -> RingElement {
    &(x - y) + e
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torsor_table() -> SymbolTable {
        let t = ClassSymbol::plain("T").with_action(2, RingElement::integer(2), RingElement::one());
        SymbolTable::build(
            vec![],
            vec![t, ClassSymbol::plain("A")],
            vec![ProductRule {
                left: "T".into(),
                right: "T".into(),
                product: RingElement::symbol("T").scale(&BigInt::from(2)),
            }],
        )
        .unwrap()
    }

    #[test]
    fn torsor_square_and_quotient() {
        let t = torsor_table();
        let tt = RingElement::symbol("T");
        let sq = t.mul(&tt, &tt).unwrap();
        assert_eq!(sq, tt.scale(&BigInt::from(2)));
        assert_eq!(t.quotient_mu(&tt).unwrap(), RingElement::one());
        assert_eq!(t.quotient_mu(&sq).unwrap(), RingElement::integer(2));
        let q = t.quotient_mu(&tt).unwrap();
        assert_ne!(t.mul(&q, &q).unwrap(), t.quotient_mu(&sq).unwrap());
    }

    #[test]
    fn mixed_monomials() {
        let t = torsor_table();
        let ta = t.mul(&RingElement::symbol("T"), &RingElement::symbol("A")).unwrap();
        assert_eq!(t.monomial_order(&ClassMonomial::parse("A*T")).unwrap(), 2);
        assert_eq!(t.res_full(&ta).unwrap(), RingElement::symbol("A").scale(&BigInt::from(2)));
        assert_eq!(t.quotient_mu(&ta).unwrap(), RingElement::symbol("A"));
        assert!(matches!(t.reduce_mod_l(&ta), Err(RingError::NontrivialAction(_))));
    }

    #[test]
    fn missing_rule_is_an_error() {
        let u = ClassSymbol::plain("U").with_action(3, RingElement::integer(3), RingElement::one());
        let t = SymbolTable::build(vec![], vec![u], vec![]).unwrap();
        let e = RingElement::symbol("U");
        assert!(matches!(t.mul(&e, &e), Err(RingError::MissingProductRule(..))));
        assert!(matches!(t.res_to_level(&e, 2), Err(RingError::LevelNotDivisible { .. })));
        assert_eq!(t.res_to_level(&e, 6).unwrap(), RingElement::integer(3));
    }

    #[test]
    fn inconsistent_rule_is_rejected() {
        let t = ClassSymbol::plain("T").with_action(2, RingElement::integer(2), RingElement::one());
        let r = SymbolTable::build(
            vec![],
            vec![t],
            vec![ProductRule {
                left: "T".into(),
                right: "T".into(),
                product: RingElement::symbol("T"),
            }],
        );
        assert!(matches!(r, Err(RingError::InvalidTable(_))));
    }

    #[test]
    fn verdicts() {
        let t = SymbolTable::plain(&["AM"]);
        let p = RingElement::from_poly(LPoly::from_pairs([(0, 2), (1, 5)]));
        assert_eq!(
            t.verdict(&p).unwrap(),
            Verdict::StablyRational { components: BigInt::from(2) }
        );
        assert_eq!(
            t.verdict(&RingElement::symbol("AM")).unwrap(),
            Verdict::Obstructed { witness: SbElement::label("AM") }
        );
        assert!(t.verdict(&RingElement::integer(-1)).unwrap().is_obstructed());
    }
}
