use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use crate::ring::{RingElement, SbElement};

use super::model::SncModel;
use super::SncError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub subset: BTreeSet<String>,
    pub piece_id: String,
    pub dim: usize,
}

/// One cell per stratum piece; `faces[k]` lists the cells of dimension one
/// less whose subset is contained in that of cell `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualComplex {
    pub cells: Vec<Cell>,
    pub faces: Vec<Vec<usize>>,
}

impl DualComplex {
    pub fn euler(&self) -> i64 {
        self.cells.iter().map(|c| if c.dim % 2 == 0 { 1 } else { -1 }).sum()
    }

    /// Number of cells with exactly this subset.
    pub fn count(&self, subset: &BTreeSet<String>) -> usize {
        self.cells.iter().filter(|c| &c.subset == subset).count()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let top = self.cells.iter().map(|c| c.dim).max().map_or(0, |d| d + 1);
        let mut f = vec![0; top];
        for c in &self.cells {
            f[c.dim] += 1;
        }
        f
    }
}

pub fn dual_complex(m: &SncModel) -> DualComplex {
    let cells: Vec<Cell> = m
        .pieces
        .iter()
        .map(|p| Cell {
            subset: p.subset.clone(),
            piece_id: p.piece_id.clone(),
            dim: p.subset.len() - 1,
        })
        .collect();
    let faces = cells
        .iter()
        .map(|c| {
            cells
                .iter()
                .enumerate()
                .filter(|(_, f)| f.dim + 1 == c.dim && f.subset.is_subset(&c.subset))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    DualComplex { cells, faces }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentCheck {
    pub id: String,
    pub closed_reduction: SbElement,
    pub stably_rational: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisViolation {
    pub subset: BTreeSet<String>,
    pub reduction: SbElement,
    pub expected_points: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualReport {
    pub euler: i64,
    pub num_components: usize,
    pub lhs: SbElement,
    pub rhs: SbElement,
    pub identity_holds: bool,
    pub hypothesis_violations: Vec<HypothesisViolation>,
    pub components: Vec<ComponentCheck>,
    pub generic_fiber_obstructed: bool,
    pub verdict: String,
}

impl DualReport {
    pub fn hypothesis_holds(&self) -> bool {
        self.hypothesis_violations.is_empty()
    }
}

/// Compares `Vol mod L` with `χ(Δ) - |I| + Σ [E_i] mod L` on a reduced model.
///
/// The hypothesis checked is that for every `J` with `|J| ≥ 2` the closed
/// stratum `E_J` reduces to `c_J · POINT`, `c_J` being its number of
/// connected pieces, i.e. every connected component of `E_J` is stably
/// rational.
pub fn check_dual_theorem(m: &SncModel) -> Result<DualReport, SncError> {
    m.ensure_valid()?;
    if !m.is_reduced() {
        return Err(SncError::NotReduced);
    }
    let t = &m.symbols;
    let cx = dual_complex(m);
    let euler = cx.euler();

    let mut higher: BTreeMap<&BTreeSet<String>, usize> = BTreeMap::new();
    for p in m.pieces.iter().filter(|p| p.subset.len() >= 2) {
        *higher.entry(&p.subset).or_default() += 1;
    }
    let mut hypothesis_violations = Vec::new();
    for (j, c) in &higher {
        let red = t.reduce_mod_l(&m.closed_stratum_class(j)?)?;
        if red != SbElement::integer(*c) {
            hypothesis_violations.push(HypothesisViolation {
                subset: (*j).clone(),
                reduction: red,
                expected_points: *c,
            });
        }
    }

    let lhs = t.reduce_mod_l(&m.vol()?)?;
    let mut rhs_elem = RingElement::integer(euler - m.components.len() as i64);
    let mut components = Vec::new();
    for c in &m.components {
        let e = m.closed_stratum_class(&[c.id.clone()].into())?;
        let red = t.reduce_mod_l(&e)?;
        components.push(ComponentCheck {
            id: c.id.clone(),
            stably_rational: red == SbElement::point(),
            closed_reduction: red,
        });
        rhs_elem.add_assign(&e);
    }
    let rhs = t.reduce_mod_l(&rhs_elem)?;
    let identity_holds = lhs == rhs;
    let generic_fiber_obstructed = lhs != SbElement::integer(BigInt::from(1));
    let all_rational = components.iter().all(|c| c.stably_rational);
    let verdict = if !hypothesis_violations.is_empty() {
        "hypothesis violated: some higher stratum is not stably rational mod L"
    } else if generic_fiber_obstructed {
        "generic fiber not stably rational"
    } else if all_rational {
        "generic fiber stably rational forces all E_i stably rational: satisfied"
    } else {
        "inconsistent: volume is 1 mod L but some E_i is not stably rational"
    };
    Ok(DualReport {
        euler,
        num_components: m.components.len(),
        lhs,
        rhs,
        identity_holds,
        hypothesis_violations,
        components,
        generic_fiber_obstructed,
        verdict: verdict.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{LPoly, SymbolTable};
    use crate::snc::{Component, Piece};

    fn comps(n: usize) -> Vec<Component> {
        (1..=n).map(|i| Component { id: i.to_string(), multiplicity: 1 }).collect()
    }

    fn l() -> RingElement {
        RingElement::l_power(1)
    }

    #[test]
    fn euler_characteristics() {
        let t = SymbolTable::new();
        let seg = SncModel::new(
            t.clone(),
            comps(2),
            vec![
                Piece::plain(["1"], "0", l()),
                Piece::plain(["2"], "0", l()),
                Piece::plain(["1", "2"], "0", RingElement::one()),
            ],
        )
        .unwrap();
        assert_eq!(dual_complex(&seg).euler(), 1);
        let mut pieces: Vec<Piece> = (1..=3).map(|i| Piece::plain([i.to_string()], "0", l())).collect();
        for (a, b) in [("1", "2"), ("1", "3"), ("2", "3")] {
            pieces.push(Piece::plain([a, b], "0", RingElement::one()));
        }
        let cyc = SncModel::new(t.clone(), comps(3), pieces).unwrap();
        assert_eq!(dual_complex(&cyc).euler(), 0);
        assert_eq!(dual_complex(&cyc).f_vector(), vec![3, 3]);
        let one = SncModel::new(t, comps(1), vec![Piece::plain(["1"], "0", l())]).unwrap();
        assert_eq!(dual_complex(&one).euler(), 1);
    }

    #[test]
    fn rational_components() {
        // two projective lines meeting in a point
        let m = SncModel::new(
            SymbolTable::new(),
            comps(2),
            vec![
                Piece::plain(["1"], "0", l()),
                Piece::plain(["2"], "0", l()),
                Piece::plain(["1", "2"], "0", RingElement::one()),
            ],
        )
        .unwrap();
        let r = check_dual_theorem(&m).unwrap();
        assert!(r.identity_holds && r.hypothesis_holds());
        assert_eq!(r.lhs, SbElement::point());
        assert!(!r.generic_fiber_obstructed);
    }

    #[test]
    fn irrational_component() {
        // E2 closed has sb class S
        let t = SymbolTable::plain(&["S"]);
        let e2o = &RingElement::symbol("S") - &RingElement::one();
        let m = SncModel::new(
            t,
            comps(2),
            vec![
                Piece::plain(["1"], "0", l()),
                Piece::plain(["2"], "0", e2o),
                Piece::plain(["1", "2"], "0", RingElement::one()),
            ],
        )
        .unwrap();
        let r = check_dual_theorem(&m).unwrap();
        assert!(r.identity_holds);
        assert_eq!(r.lhs, SbElement::label("S"));
        assert!(r.generic_fiber_obstructed);
        assert!(!r.components[1].stably_rational);
    }

    #[test]
    fn hypothesis_failure_is_reported() {
        let t = SymbolTable::plain(&["C"]);
        let m = SncModel::new(
            t,
            comps(2),
            vec![
                Piece::plain(["1"], "0", l()),
                Piece::plain(["2"], "0", l()),
                Piece::plain(["1", "2"], "0", RingElement::symbol("C").mul_poly(&LPoly::one())),
            ],
        )
        .unwrap();
        let r = check_dual_theorem(&m).unwrap();
        assert!(!r.hypothesis_holds());
    }
}
