use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::ring::{RingElement, SbElement, SymbolTable};

use super::SncError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberComponent {
    pub id: String,
    /// `[Y_i]`
    pub class_y: RingElement,
    /// `[Y''_i]`, the component after resolving its singular locus
    pub class_ypp: RingElement,
    /// `[Z_i]`, zero when the codimension one singular locus is empty
    pub class_z: RingElement,
}

/// One connected component `C` of `Y_i ∩ Y_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionPiece {
    pub i: String,
    pub j: String,
    pub piece_id: String,
    pub class_c: RingElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducibleFiberInput {
    pub symbols: SymbolTable,
    pub components: Vec<FiberComponent>,
    pub edges: Vec<IntersectionPiece>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducibleReport {
    /// `Σ [Y''_i] - Σ [Z_i] - Σ [C]` in `Z[SB]`
    pub s: SbElement,
    /// `[X_k] = Σ [Y_i] - Σ [C]` mod L
    pub fiber_reduction: SbElement,
    pub hypothesis: bool,
    pub vertices: usize,
    pub edges: usize,
    pub euler: i64,
    pub singular_count: usize,
    pub connected: bool,
    pub tree: bool,
    pub rational_components: Vec<String>,
    /// components with `[Y''_i] ≢ [Y_i] + [Z_i]` mod L
    pub blowup_mismatches: Vec<String>,
    pub failures: Vec<String>,
    pub consistent: bool,
    pub message: String,
}

pub const INCOMPATIBLE: &str = "fiber incompatible with stably rational generic fiber";

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

pub fn reducible_odp_report(inp: &ReducibleFiberInput) -> Result<ReducibleReport, SncError> {
    let t = &inp.symbols;
    let mut index = BTreeMap::new();
    for (k, c) in inp.components.iter().enumerate() {
        if index.insert(c.id.as_str(), k).is_some() {
            return Err(SncError::InvalidArgument(format!("duplicate component {}", c.id)));
        }
    }
    let mut parent: Vec<usize> = (0..inp.components.len()).collect();
    let mut s = SbElement::zero();
    let mut fiber = SbElement::zero();
    let mut singular_count = 0;
    let mut rational_components = Vec::new();
    let mut blowup_mismatches = Vec::new();
    for c in &inp.components {
        let ypp = t.reduce_mod_l(&c.class_ypp)?;
        let z = t.reduce_mod_l(&c.class_z)?;
        let y = t.reduce_mod_l(&c.class_y)?;
        t.check_declared(&c.class_z)?;
        if !c.class_z.is_zero() {
            singular_count += 1;
        }
        if ypp == SbElement::point() {
            rational_components.push(c.id.clone());
        }
        if ypp != &y + &z {
            blowup_mismatches.push(c.id.clone());
        }
        s = &(&s + &ypp) - &z;
        fiber = &fiber + &y;
    }
    let mut seen = BTreeMap::new();
    for e in &inp.edges {
        if e.i == e.j {
            return Err(SncError::InvalidArgument(format!("self-intersection edge at {}", e.i)));
        }
        let (a, b) = match (index.get(e.i.as_str()), index.get(e.j.as_str())) {
            (Some(a), Some(b)) => (*a, *b),
            _ => return Err(SncError::UnknownComponent(format!("{}-{}", e.i, e.j))),
        };
        let key = if e.i < e.j { (&e.i, &e.j, &e.piece_id) } else { (&e.j, &e.i, &e.piece_id) };
        if seen.insert(key, ()).is_some() {
            return Err(SncError::InvalidArgument(format!("duplicate intersection piece {}", e.piece_id)));
        }
        let c = t.reduce_mod_l(&e.class_c)?;
        s = &s - &c;
        fiber = &fiber - &c;
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let vertices = inp.components.len();
    let edges = inp.edges.len();
    let euler = vertices as i64 - edges as i64;
    let roots = (0..vertices).filter(|&k| find(&mut parent, k) == k).count();
    let connected = roots == 1;
    let tree = connected && euler == 1;
    let hypothesis = s.as_integer() == Some(BigInt::one());

    let mut failures = Vec::new();
    if hypothesis {
        if euler - singular_count as i64 != 1 {
            failures.push(format!("chi(Gamma) - N = {} != 1", euler - singular_count as i64));
        }
        if singular_count != 0 {
            failures.push(format!("N = {singular_count} != 0"));
        }
        if !connected {
            failures.push("Gamma is not connected".into());
        }
        if !tree {
            failures.push("Gamma is not a tree".into());
        }
        if rational_components.is_empty() {
            failures.push("no component with sb(Y'') = POINT".into());
        }
    } else {
        failures.push(format!("s = {s} is not POINT"));
    }
    let consistent = failures.is_empty();
    Ok(ReducibleReport {
        s,
        fiber_reduction: fiber,
        hypothesis,
        vertices,
        edges,
        euler,
        singular_count,
        connected,
        tree,
        rational_components,
        blowup_mismatches,
        failures,
        consistent,
        message: if consistent {
            "consistent with stably rational generic fiber".into()
        } else {
            INCOMPATIBLE.into()
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(id: &str, y: RingElement) -> FiberComponent {
        FiberComponent { id: id.into(), class_y: y.clone(), class_ypp: y, class_z: RingElement::zero() }
    }

    fn edge(i: &str, j: &str) -> IntersectionPiece {
        IntersectionPiece { i: i.into(), j: j.into(), piece_id: format!("{i}{j}"), class_c: RingElement::one() }
    }

    #[test]
    fn two_rational_components() {
        let inp = ReducibleFiberInput {
            symbols: SymbolTable::new(),
            components: vec![comp("1", RingElement::one()), comp("2", RingElement::one())],
            edges: vec![edge("1", "2")],
        };
        let r = reducible_odp_report(&inp).unwrap();
        assert!(r.hypothesis && r.consistent && r.tree);
        assert_eq!(r.euler, 1);
        assert_eq!(r.singular_count, 0);
    }

    #[test]
    fn single_vertex() {
        let inp = ReducibleFiberInput {
            symbols: SymbolTable::new(),
            components: vec![comp("1", RingElement::one())],
            edges: vec![],
        };
        let r = reducible_odp_report(&inp).unwrap();
        assert!(r.consistent && r.tree);
    }

    #[test]
    fn triangle_rejected() {
        let inp = ReducibleFiberInput {
            symbols: SymbolTable::new(),
            components: ["1", "2", "3"].iter().map(|i| comp(i, RingElement::one())).collect(),
            edges: vec![edge("1", "2"), edge("2", "3"), edge("1", "3")],
        };
        let r = reducible_odp_report(&inp).unwrap();
        assert!(r.s.is_zero());
        assert!(!r.hypothesis && !r.consistent);
        assert_eq!(r.euler, 0);
        assert_eq!(r.message, INCOMPATIBLE);
    }
}
