use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;

use crate::ring::{LPoly, RingElement, SymbolTable};

use super::SncError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub id: String,
    pub multiplicity: u64,
}

/// One connected piece of an open stratum `E_J^o`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub subset: BTreeSet<String>,
    pub piece_id: String,
    pub class_open: RingElement,
    pub cover_class: RingElement,
}

impl Piece {
    /// A piece whose cover equals its open stratum.
    pub fn plain<I, S>(subset: I, piece_id: &str, class_open: RingElement) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            subset: subset.into_iter().map(Into::into).collect(),
            piece_id: piece_id.to_string(),
            cover_class: class_open.clone(),
            class_open,
        }
    }

    pub fn with_cover(mut self, cover: RingElement) -> Self {
        self.cover_class = cover;
        self
    }

    pub fn codim(&self) -> u32 {
        self.subset.len() as u32
    }

    /// `(1 - L)^{|J|-1}`.
    pub fn weight(&self) -> LPoly {
        LPoly::one_minus_l_pow(self.codim().saturating_sub(1))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub piece: Option<usize>,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, piece: Option<usize>, message: String) {
        self.violations.push(Violation { piece, message });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| match v.piece {
                Some(i) => format!("piece {i}: {}", v.message),
                None => v.message.clone(),
            })
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SncModel {
    pub symbols: SymbolTable,
    pub components: Vec<Component>,
    pub pieces: Vec<Piece>,
}

fn fmt_subset(s: &BTreeSet<String>) -> String {
    format!("{{{}}}", s.iter().cloned().collect::<Vec<_>>().join(","))
}

impl SncModel {
    /// Builds a model and rejects it unless it validates.
    pub fn new(symbols: SymbolTable, components: Vec<Component>, pieces: Vec<Piece>) -> Result<Self, SncError> {
        let m = Self { symbols, components, pieces };
        m.ensure_valid()?;
        Ok(m)
    }

    pub fn multiplicities(&self) -> BTreeMap<&str, u64> {
        self.components.iter().map(|c| (c.id.as_str(), c.multiplicity)).collect()
    }

    /// `N_J`; `None` if `J` mentions an unknown component.
    pub fn gcd_multiplicity(&self, subset: &BTreeSet<String>) -> Option<u64> {
        let mult = self.multiplicities();
        let mut g = 0u64;
        for j in subset {
            g = g.gcd(mult.get(j.as_str())?);
        }
        Some(g)
    }

    pub fn is_reduced(&self) -> bool {
        self.components.iter().all(|c| c.multiplicity == 1)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        let mut ids = BTreeSet::new();
        for c in &self.components {
            if !ids.insert(c.id.as_str()) {
                r.push(None, format!("duplicate component id {}", c.id));
            }
            if c.multiplicity == 0 {
                r.push(None, format!("component {} has multiplicity 0", c.id));
            }
        }
        let mut keys = BTreeSet::new();
        let subsets: BTreeSet<&BTreeSet<String>> = self.pieces.iter().map(|p| &p.subset).collect();
        let mut singletons: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, p) in self.pieces.iter().enumerate() {
            if p.subset.is_empty() {
                r.push(Some(i), "empty subset".into());
                continue;
            }
            let unknown: Vec<&String> = p.subset.iter().filter(|j| !ids.contains(j.as_str())).collect();
            if !unknown.is_empty() {
                r.push(Some(i), format!("subset references undeclared component(s) {unknown:?}"));
                continue;
            }
            if !keys.insert((&p.subset, p.piece_id.as_str())) {
                r.push(Some(i), format!("duplicate piece {} of {}", p.piece_id, fmt_subset(&p.subset)));
            }
            if p.subset.len() == 1 {
                *singletons.entry(p.subset.iter().next().unwrap()).or_default() += 1;
            }
            // every nonempty proper subset must be a stratum too
            if p.subset.len() > 1 && p.subset.len() <= 20 {
                let v: Vec<&String> = p.subset.iter().collect();
                for mask in 1..(1u32 << v.len()) - 1 {
                    let sub: BTreeSet<String> = (0..v.len())
                        .filter(|b| mask >> b & 1 == 1)
                        .map(|b| v[b].clone())
                        .collect();
                    if !subsets.contains(&sub) {
                        r.push(Some(i), format!("face {} of {} has no piece", fmt_subset(&sub), fmt_subset(&p.subset)));
                        break;
                    }
                }
            }
            if p.class_open.is_zero() {
                r.push(Some(i), "class_open is zero; empty strata are encoded by absence".into());
            }
            match self.symbols.check_declared(&p.class_open) {
                Err(e) => r.push(Some(i), format!("class_open: {e}")),
                Ok(()) => {
                    if !matches!(self.symbols.action_order_of(&p.class_open), Ok(1)) {
                        r.push(Some(i), "class_open must have trivial action".into());
                    }
                }
            }
            let n_j = self.gcd_multiplicity(&p.subset).unwrap_or(1);
            match self.symbols.action_order_of(&p.cover_class) {
                Err(e) => r.push(Some(i), format!("cover_class: {e}")),
                Ok(k) => {
                    if !n_j.is_multiple_of(k) {
                        r.push(Some(i), format!("cover action order {k} does not divide N_J = {n_j}"));
                    }
                }
            }
            if n_j == 1 && p.cover_class != p.class_open {
                r.push(Some(i), "N_J = 1 but cover_class differs from class_open".into());
            }
        }
        for c in &self.components {
            match singletons.get(c.id.as_str()) {
                None => r.push(None, format!("component {} has no open piece", c.id)),
                Some(1) => {}
                Some(k) => r.push(None, format!("component {} has {k} open pieces; E_i^o is connected", c.id)),
            }
        }
        r
    }

    pub fn ensure_valid(&self) -> Result<(), SncError> {
        let r = self.validate();
        if r.is_valid() {
            Ok(())
        } else {
            Err(SncError::Invalid(r))
        }
    }

    /// Motivic volume `Σ (1-L)^{|J|-1} [Ẽ_J^o]`.
    pub fn vol(&self) -> Result<RingElement, SncError> {
        self.ensure_valid()?;
        Ok(self.weighted_sum(|p| &p.cover_class))
    }

    /// Motivic reduction `Σ (1-L)^{|J|-1} [E_J^o]`.
    pub fn mr(&self) -> Result<RingElement, SncError> {
        self.ensure_valid()?;
        Ok(self.weighted_sum(|p| &p.class_open))
    }

    fn weighted_sum<'a>(&'a self, f: impl Fn(&'a Piece) -> &'a RingElement) -> RingElement {
        let mut out = RingElement::zero();
        for p in &self.pieces {
            out.add_assign(&f(p).mul_poly(&p.weight()));
        }
        out
    }

    /// Class of the special fiber `Σ [E_J^o]`.
    pub fn open_sum(&self) -> RingElement {
        let mut out = RingElement::zero();
        for p in &self.pieces {
            out.add_assign(&p.class_open);
        }
        out
    }

    /// Class of the closed stratum `E_J`.
    pub fn closed_stratum_class(&self, subset: &BTreeSet<String>) -> Result<RingElement, SncError> {
        if subset.is_empty() {
            return Err(SncError::InvalidArgument("empty subset".into()));
        }
        let ids: BTreeSet<&str> = self.components.iter().map(|c| c.id.as_str()).collect();
        if let Some(j) = subset.iter().find(|j| !ids.contains(j.as_str())) {
            return Err(SncError::UnknownComponent(j.clone()));
        }
        let mut out = RingElement::zero();
        for p in self.pieces.iter().filter(|p| p.subset.is_superset(subset)) {
            out.add_assign(&p.class_open);
        }
        Ok(out)
    }

    /// `Σ_{∅≠J⊆I} (-1)^{|J|-1} [E_J]`, summed over every `J` contained in
    /// some stratum (all other `E_J` are empty).
    pub fn inclusion_exclusion(&self) -> Result<RingElement, SncError> {
        let mut js: BTreeSet<BTreeSet<String>> = BTreeSet::new();
        for p in &self.pieces {
            let v: Vec<&String> = p.subset.iter().collect();
            if v.len() > 20 {
                return Err(SncError::InvalidArgument("stratum of codimension > 20".into()));
            }
            for mask in 1..1u32 << v.len() {
                js.insert((0..v.len()).filter(|b| mask >> b & 1 == 1).map(|b| v[b].clone()).collect());
            }
        }
        let mut out = RingElement::zero();
        for j in &js {
            let c = self.closed_stratum_class(j)?;
            if j.len() % 2 == 1 {
                out.add_assign(&c);
            } else {
                out.add_assign(&-c);
            }
        }
        Ok(out)
    }

    /// The reduced model with covers replaced by open strata.
    pub fn with_semistable_covers(&self) -> Self {
        Self {
            symbols: self.symbols.clone(),
            components: self
                .components
                .iter()
                .map(|c| Component { id: c.id.clone(), multiplicity: 1 })
                .collect(),
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece { cover_class: p.class_open.clone(), ..p.clone() })
                .collect(),
        }
    }

    /// Same model with component and piece ids renamed.
    pub fn relabel(&self, comp: &dyn Fn(&str) -> String, piece: &dyn Fn(&str) -> String) -> Self {
        Self {
            symbols: self.symbols.clone(),
            components: self
                .components
                .iter()
                .map(|c| Component { id: comp(&c.id), multiplicity: c.multiplicity })
                .collect(),
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece {
                    subset: p.subset.iter().map(|j| comp(j)).collect(),
                    piece_id: piece(&p.piece_id),
                    ..p.clone()
                })
                .collect(),
        }
    }
}

pub fn subset<I, S>(it: I) -> BTreeSet<String>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    it.into_iter().map(Into::into).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::ClassSymbol;

    fn two_components() -> SncModel {
        let t = SymbolTable::plain(&["E1o", "E2o", "D"]);
        SncModel::new(
            t,
            vec![
                Component { id: "1".into(), multiplicity: 1 },
                Component { id: "2".into(), multiplicity: 1 },
            ],
            vec![
                Piece::plain(["1"], "0", RingElement::symbol("E1o")),
                Piece::plain(["2"], "0", RingElement::symbol("E2o")),
                Piece::plain(["1", "2"], "0", RingElement::symbol("D")),
            ],
        )
        .unwrap()
    }

    #[test]
    fn volume_of_two_components() {
        let m = two_components();
        let expect = &(&RingElement::symbol("E1o") + &RingElement::symbol("E2o"))
            + &RingElement::symbol("D").mul_poly(&LPoly::one_minus_l_pow(1));
        assert_eq!(m.vol().unwrap(), expect);
        assert_eq!(m.mr().unwrap(), expect);
    }

    #[test]
    fn closed_strata() {
        let m = two_components();
        assert_eq!(
            m.closed_stratum_class(&subset(["1"])).unwrap(),
            &RingElement::symbol("E1o") + &RingElement::symbol("D")
        );
        assert!(matches!(
            m.closed_stratum_class(&subset(["3"])),
            Err(SncError::UnknownComponent(_))
        ));
        assert_eq!(m.inclusion_exclusion().unwrap(), m.open_sum());
    }

    #[test]
    fn multiplicity_two_cover() {
        let t = SymbolTable::build(
            vec![],
            vec![
                ClassSymbol::plain("A"),
                ClassSymbol::plain("B"),
                ClassSymbol::plain("D"),
                ClassSymbol::plain("Bt").with_action(2, RingElement::symbol("B").scale(&2.into()), RingElement::symbol("B")),
            ],
            vec![],
        )
        .unwrap();
        let m = SncModel::new(
            t,
            vec![
                Component { id: "1".into(), multiplicity: 1 },
                Component { id: "2".into(), multiplicity: 2 },
            ],
            vec![
                Piece::plain(["1"], "0", RingElement::symbol("A")),
                Piece::plain(["2"], "0", RingElement::symbol("B")).with_cover(RingElement::symbol("Bt")),
                Piece::plain(["1", "2"], "0", RingElement::symbol("D")),
            ],
        )
        .unwrap();
        let expect = &(&RingElement::symbol("A") + &RingElement::symbol("Bt"))
            + &RingElement::symbol("D").mul_poly(&LPoly::one_minus_l_pow(1));
        assert_eq!(m.vol().unwrap(), expect);
    }

    #[test]
    fn violations_are_reported() {
        let mut m = two_components();
        m.pieces[2].cover_class = RingElement::symbol("E1o");
        let r = m.validate();
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].piece, Some(2));

        let mut m = two_components();
        m.pieces.push(Piece::plain(["1", "9"], "0", RingElement::one()));
        assert!(!m.validate().is_valid());

        let mut m = two_components();
        m.pieces.remove(1);
        assert!(!m.validate().is_valid());
    }
}
