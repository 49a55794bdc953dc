use crate::ring::{bittner_blowup_class, RingElement, SymbolTable};

use super::model::{Component, Piece, SncModel};
use super::SncError;

/// Id of the strict-transform component in the model built by
/// [`odp_semistable`].
pub const STRICT: &str = "strict";

/// One connected component of the singular locus of the fiber.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeRecord {
    pub label: String,
    /// class of the singular locus component (1 for an isolated node)
    pub locus: RingElement,
    /// exceptional quadric (bundle) of the blow-up of the fiber
    pub fiber_quadric: RingElement,
    /// exceptional quadric (bundle) component of the semistable model
    pub model_quadric: RingElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OdpInput {
    pub symbols: SymbolTable,
    pub fiber_class: RingElement,
    pub nodes: Vec<NodeRecord>,
}

/// Reduced snc model obtained after a degree two base change and the blow-up
/// of the nodes: the strict transform of the fiber plus one exceptional
/// component per node, glued along the fiber quadrics.
pub fn odp_semistable(inp: &OdpInput) -> Result<SncModel, SncError> {
    let t = &inp.symbols;
    t.check_declared(&inp.fiber_class)?;
    let mut strict_closed = inp.fiber_class.clone();
    let mut components = vec![Component { id: STRICT.into(), multiplicity: 1 }];
    let mut pieces = Vec::new();
    for n in &inp.nodes {
        if n.label == STRICT || components.iter().any(|c| c.id == n.label) {
            return Err(SncError::Odp(format!("duplicate or reserved node label {}", n.label)));
        }
        let locus = t.reduce_mod_l(&n.locus)?;
        for (what, q) in [("fiber_quadric", &n.fiber_quadric), ("model_quadric", &n.model_quadric)] {
            if t.reduce_mod_l(q)? != locus {
                return Err(SncError::Odp(format!(
                    "node {}: {what} is not congruent to its locus mod L; the quadric bundle needs a section",
                    n.label
                )));
            }
        }
        strict_closed = bittner_blowup_class(&strict_closed, &n.locus, &n.fiber_quadric);
        components.push(Component { id: n.label.clone(), multiplicity: 1 });
        pieces.push(Piece::plain([n.label.clone()], "0", &n.model_quadric - &n.fiber_quadric));
        pieces.push(Piece::plain([STRICT.to_string(), n.label.clone()], "0", n.fiber_quadric.clone()));
    }
    let mut strict_open = strict_closed;
    for n in &inp.nodes {
        strict_open = &strict_open - &n.fiber_quadric;
    }
    pieces.insert(0, Piece::plain([STRICT], "0", strict_open));
    let m = SncModel::new(t.clone(), components, pieces)?;
    debug_assert!(t.congruent_mod_l(&m.open_sum(), &inp.fiber_class).unwrap_or(false));
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{LPoly, SbElement, Verdict};

    fn quadric_node(label: &str) -> NodeRecord {
        NodeRecord {
            label: label.into(),
            locus: RingElement::one(),
            fiber_quadric: RingElement::from_poly(LPoly::from_pairs([(0, 1), (1, 2), (2, 1)])),
            model_quadric: RingElement::from_poly(LPoly::from_pairs([(0, 1), (1, 1), (2, 1), (3, 1)])),
        }
    }

    #[test]
    fn no_nodes() {
        let t = SymbolTable::plain(&["X"]);
        let m = odp_semistable(&OdpInput { symbols: t, fiber_class: RingElement::symbol("X"), nodes: vec![] }).unwrap();
        assert_eq!(m.components.len(), 1);
        assert_eq!(m.vol().unwrap(), RingElement::symbol("X"));
    }

    #[test]
    fn ten_nodes_on_a_double_solid() {
        let t = SymbolTable::plain(&["AM"]);
        let inp = OdpInput {
            symbols: t.clone(),
            fiber_class: RingElement::symbol("AM"),
            nodes: (1..=10).map(|i| quadric_node(&format!("Q{i}"))).collect(),
        };
        let m = odp_semistable(&inp).unwrap();
        let v = m.vol().unwrap();
        assert!(t.congruent_mod_l(&v, &RingElement::symbol("AM")).unwrap());
        assert_eq!(t.verdict(&v).unwrap(), Verdict::Obstructed { witness: SbElement::label("AM") });
    }

    #[test]
    fn quadric_without_section_rejected() {
        let t = SymbolTable::plain(&["X", "C"]);
        let mut n = quadric_node("Q");
        n.fiber_quadric = RingElement::symbol("C");
        let r = odp_semistable(&OdpInput { symbols: t, fiber_class: RingElement::symbol("X"), nodes: vec![n] });
        assert!(matches!(r, Err(SncError::Odp(_))));
    }
}
