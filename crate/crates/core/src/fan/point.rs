use num_integer::Integer;

use crate::ring::{LPoly, RingElement, SymbolTable};
use crate::snc::SncModel;

use super::lattice::{dot, in_cone, is_primitive, rank, saturated_basis};
use super::FanError;

/// A point of the fan: the cone generated by `rays` (the dual of its
/// characteristic monoid), the covector `t̄` and the class of the stratum cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanPoint {
    pub rays: Vec<Vec<i64>>,
    pub t_bar: Vec<i64>,
    pub class: RingElement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ranks {
    pub r: usize,
    pub r_h: usize,
    pub r_v: usize,
}

impl FanPoint {
    pub fn new(rays: Vec<Vec<i64>>, t_bar: Vec<i64>, class: RingElement) -> Self {
        Self { rays, t_bar, class }
    }

    pub fn values(&self) -> Vec<i64> {
        self.rays.iter().map(|v| dot(&self.t_bar, v)).collect()
    }

    pub fn horizontal_rays(&self) -> Vec<Vec<i64>> {
        self.rays.iter().filter(|v| dot(&self.t_bar, v) == 0).cloned().collect()
    }

    pub fn rank(&self) -> usize {
        rank(&self.rays)
    }

    pub fn is_simplicial(&self) -> bool {
        self.rank() == self.rays.len()
    }

    /// `(r, r_h, r_v)`; `r_h` is the dimension of the face cut out by `t̄ = 0`.
    pub fn ranks(&self) -> Result<Ranks, FanError> {
        if let Some(v) = self.rays.iter().find(|v| dot(&self.t_bar, v) < 0) {
            return Err(FanError::NegativeOnRay(v.clone()));
        }
        let r = self.rank();
        let r_h = rank(&self.horizontal_rays());
        Ok(Ranks { r, r_h, r_v: r - r_h })
    }

    pub fn is_vertical(&self) -> bool {
        self.values().iter().any(|&x| x > 0)
    }

    /// Largest `ρ` such that `t̄/ρ` is still integral on the lattice points
    /// of the cone.
    pub fn root_index(&self) -> Result<u64, FanError> {
        self.ranks()?;
        let d = self.t_bar.len();
        let basis = saturated_basis(&self.rays, d);
        let g = basis.iter().fold(0i64, |g, b| g.gcd(&dot(&self.t_bar, b)));
        if g == 0 {
            return Err(FanError::ZeroCovector);
        }
        Ok(g as u64)
    }

    /// Whether every ray in `face_rays` is a ray of this point.
    pub fn has_face(&self, face_rays: &[Vec<i64>]) -> bool {
        face_rays.iter().all(|v| self.rays.contains(v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogFan {
    pub ambient_rank: usize,
    pub points: Vec<FanPoint>,
    pub symbols: SymbolTable,
}

impl LogFan {
    pub fn new(ambient_rank: usize, points: Vec<FanPoint>, symbols: SymbolTable) -> Result<Self, FanError> {
        let f = Self { ambient_rank, points, symbols };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<(), FanError> {
        let d = self.ambient_rank;
        for (i, p) in self.points.iter().enumerate() {
            let bad = |m: String| Err(FanError::InvalidPoint { index: i, message: m });
            if p.rays.is_empty() {
                return bad("point without rays".into());
            }
            if p.t_bar.len() != d {
                return bad(format!("t_bar has length {}, ambient rank is {d}", p.t_bar.len()));
            }
            for v in &p.rays {
                if v.len() != d {
                    return bad(format!("ray {v:?} has wrong length"));
                }
                if !is_primitive(v) {
                    return bad(format!("ray {v:?} is not primitive"));
                }
            }
            if let Some((a, v)) = p.rays.iter().enumerate().find(|(a, v)| p.rays[..*a].contains(v)) {
                return bad(format!("ray {v:?} repeated at position {a}"));
            }
            if let Some(v) = p.rays.iter().find(|v| dot(&p.t_bar, v) < 0) {
                return bad(format!("t_bar negative on ray {v:?}"));
            }
            self.symbols.check_declared(&p.class)?;
            if p.class.is_zero() {
                return bad("zero class".into());
            }
            if p.is_vertical() {
                let rho = p.root_index()?;
                let n = self.symbols.action_order_of(&p.class)?;
                if rho % n != 0 {
                    return bad(format!("action order {n} does not divide root index {rho}"));
                }
            } else if self.symbols.has_nontrivial_action(&p.class)? {
                return bad("horizontal point with nontrivial action".into());
            }
        }
        if self.points.len() <= 200 {
            self.check_faces()?;
        }
        Ok(())
    }

    /// A ray of one cone lying in a simplicial cone must be a ray of it.
    fn check_faces(&self) -> Result<(), FanError> {
        for (i, p) in self.points.iter().enumerate() {
            if !p.is_simplicial() {
                continue;
            }
            for (j, q) in self.points.iter().enumerate() {
                if i == j {
                    continue;
                }
                for v in &q.rays {
                    if !p.rays.contains(v) && in_cone(&p.rays, v) {
                        return Err(FanError::InvalidPoint {
                            index: i,
                            message: format!("ray {v:?} of point {j} lies inside the cone without being a ray"),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// `Σ_{t̄ ≠ 0 on σ} (1 - L)^{r_v(σ) - 1} [Ẽ(σ)^o]`.
    pub fn vol(&self) -> Result<RingElement, FanError> {
        let mut out = RingElement::zero();
        for p in &self.points {
            let rk = p.ranks()?;
            if rk.r_v == 0 {
                continue;
            }
            out.add_assign(&p.class.mul_poly(&LPoly::one_minus_l_pow(rk.r_v as u32 - 1)));
        }
        Ok(out)
    }

    /// One point per stratum piece, in the lattice `Z^I` with the standard
    /// rays of its components and `t̄` the multiplicity vector.
    pub fn from_snc(m: &SncModel) -> Result<Self, FanError> {
        m.ensure_valid()?;
        let d = m.components.len();
        let t_bar: Vec<i64> = m.components.iter().map(|c| c.multiplicity as i64).collect();
        let pos = |id: &str| m.components.iter().position(|c| c.id == id).expect("validated");
        let points = m
            .pieces
            .iter()
            .map(|p| {
                let rays = p
                    .subset
                    .iter()
                    .map(|j| {
                        let mut e = vec![0; d];
                        e[pos(j)] = 1;
                        e
                    })
                    .collect();
                FanPoint::new(rays, t_bar.clone(), p.cover_class.clone())
            })
            .collect();
        Self::new(d, points, m.symbols.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(rays: Vec<Vec<i64>>, t: Vec<i64>) -> FanPoint {
        FanPoint::new(rays, t, RingElement::one())
    }

    fn std2() -> Vec<Vec<i64>> {
        vec![vec![1, 0], vec![0, 1]]
    }

    #[test]
    fn ranks_of_standard_points() {
        assert_eq!(pt(std2(), vec![1, 1]).ranks().unwrap(), Ranks { r: 2, r_h: 0, r_v: 2 });
        assert_eq!(pt(std2(), vec![1, 0]).ranks().unwrap(), Ranks { r: 2, r_h: 1, r_v: 1 });
        let e3 = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(pt(e3, vec![2, 3, 0]).ranks().unwrap(), Ranks { r: 3, r_h: 1, r_v: 2 });
        assert!(matches!(pt(std2(), vec![1, -1]).ranks(), Err(FanError::NegativeOnRay(_))));
    }

    #[test]
    fn root_indices() {
        assert_eq!(pt(std2(), vec![2, 4]).root_index().unwrap(), 2);
        assert_eq!(pt(std2(), vec![1, 2]).root_index().unwrap(), 1);
        assert_eq!(pt(std2(), vec![6, 0]).root_index().unwrap(), 6);
        assert!(matches!(pt(std2(), vec![0, 0]).root_index(), Err(FanError::ZeroCovector)));
        // non-unimodular cone: (1,0),(1,2) contains (1,1) but t̄ = (0,2) is
        // 2 on both rays and only 1 on (1,1)
        assert_eq!(pt(vec![vec![1, 0], vec![1, 2]], vec![2, 0]).root_index().unwrap(), 2);
        assert_eq!(pt(vec![vec![1, 0], vec![1, 2]], vec![0, 1]).ranks().unwrap().r_h, 1);
        assert_eq!(pt(vec![vec![1, 1], vec![1, -1]], vec![1, 1]).root_index().unwrap(), 1);
    }
}
