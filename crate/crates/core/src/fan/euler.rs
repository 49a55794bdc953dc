use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::lattice::{in_cone, is_primitive, primitive, rank, solve};
use super::FanError;

type Cone = Vec<Vec<i64>>;

/// A simplicial cone `γ`, a face `δ` given by indices into `γ`'s rays, and a
/// simplicial subdivision of `γ` given by its cones (closed under faces on
/// construction).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdivisionProblem {
    pub gamma: Cone,
    pub delta: Vec<usize>,
    pub cones: Vec<Cone>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerCheck {
    /// `A_{δ,δ'}` keyed by the indices of `δ'` into `γ`'s rays
    pub counts: BTreeMap<Vec<usize>, i64>,
    pub expected: BTreeMap<Vec<usize>, i64>,
    pub holds: bool,
    pub covers: bool,
}

fn sorted(c: &[Vec<i64>]) -> Cone {
    let mut c = c.to_vec();
    c.sort();
    c
}

/// Every nonempty face of every listed cone, deduplicated.
pub fn all_faces(cones: &[Cone]) -> Vec<Cone> {
    let mut out = BTreeSet::new();
    for c in cones {
        let n = c.len();
        for mask in 1u32..1 << n {
            let f: Cone = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| c[b].clone()).collect();
            out.insert(sorted(&f));
        }
    }
    out.into_iter().collect()
}

/// Cones of the list that are maximal under inclusion.
pub fn maximal_cones(cones: &[Cone]) -> Vec<Cone> {
    let sets: Vec<BTreeSet<&Vec<i64>>> = cones.iter().map(|c| c.iter().collect()).collect();
    let mut out: Vec<Cone> = Vec::new();
    for (i, s) in sets.iter().enumerate() {
        let dominated = sets.iter().enumerate().any(|(j, t)| j != i && s.is_subset(t) && (s.len() < t.len() || j < i));
        if !dominated {
            out.push(sorted(&cones[i]));
        }
    }
    out.sort();
    out
}

/// Stellar subdivision of a simplicial fan, given by maximal cones, at `w` in
/// the relative interior of the cone `s`.
pub fn stellar(max_cones: &[Cone], s: &[Vec<i64>], w: &[i64]) -> Vec<Cone> {
    let mut out = Vec::new();
    for t in max_cones {
        if !s.iter().all(|v| t.contains(v)) {
            out.push(t.clone());
            continue;
        }
        let rest: Cone = t.iter().filter(|v| !s.contains(v)).cloned().collect();
        for drop in s {
            let mut c = rest.clone();
            c.extend(s.iter().filter(|v| *v != drop).cloned());
            c.push(w.to_vec());
            out.push(sorted(&c));
        }
    }
    out
}

impl SubdivisionProblem {
    pub fn new(gamma: Cone, delta: Vec<usize>, cones: Vec<Cone>) -> Result<Self, FanError> {
        let p = Self { gamma, delta, cones: all_faces(&cones) };
        p.validate()?;
        Ok(p)
    }

    /// The trivial subdivision.
    pub fn trivial(gamma: Cone, delta: Vec<usize>) -> Result<Self, FanError> {
        let cones = vec![gamma.clone()];
        Self::new(gamma, delta, cones)
    }

    pub fn dim(&self) -> usize {
        self.gamma.len()
    }

    fn delta_rays(&self) -> Cone {
        self.delta.iter().map(|&i| self.gamma[i].clone()).collect()
    }

    pub fn validate(&self) -> Result<(), FanError> {
        let bad = |m: String| Err(FanError::InvalidProblem(m));
        if self.gamma.is_empty() || rank(&self.gamma) != self.gamma.len() {
            return bad("gamma must be a nonempty simplicial cone".into());
        }
        let d = self.gamma[0].len();
        if self.gamma.iter().any(|v| v.len() != d || !is_primitive(v)) {
            return bad("gamma rays must be primitive of equal length".into());
        }
        let idx: BTreeSet<usize> = self.delta.iter().copied().collect();
        if idx.len() != self.delta.len() || idx.iter().any(|&i| i >= self.gamma.len()) {
            return Err(FanError::NotAFace(format!("{:?}", self.delta)));
        }
        for c in &self.cones {
            if c.iter().any(|v| v.len() != d || !is_primitive(v)) {
                return bad(format!("cone {c:?} has a bad ray"));
            }
            if rank(c) != c.len() {
                return bad(format!("cone {c:?} is not simplicial"));
            }
            for v in c {
                match solve(&self.gamma, v) {
                    Some(l) if l.iter().all(|x| !x.is_negative()) => {}
                    _ => return bad(format!("ray {v:?} is outside gamma")),
                }
            }
        }
        let rays: BTreeSet<&Vec<i64>> = self.cones.iter().flatten().collect();
        for c in maximal_cones(&self.cones) {
            for v in &rays {
                if !c.contains(v) && in_cone(&c, v) {
                    return bad(format!("ray {v:?} lies inside cone {c:?} without being one of its rays"));
                }
            }
        }
        if !self.delta.is_empty() && !self.cones.contains(&sorted(&self.delta_rays())) {
            return bad("the subdivision does not contain delta".into());
        }
        Ok(())
    }

    /// Cones of the subdivision meeting the relative interior of `γ`.
    pub fn interior_cones(&self) -> Vec<&Cone> {
        self.cones
            .iter()
            .filter(|c| {
                let sum: Vec<i64> = (0..self.gamma[0].len()).map(|k| c.iter().map(|v| v[k]).sum()).collect();
                solve(&self.gamma, &sum).is_some_and(|l| l.iter().all(|x| x.is_positive()))
            })
            .collect()
    }

    /// `γ_i ∩ δ` as indices into `γ`'s rays.
    fn meet_delta(&self, c: &Cone) -> Result<Vec<usize>, FanError> {
        let mut out = Vec::new();
        for v in c {
            let l = solve(&self.gamma, v).expect("validated");
            let support: Vec<usize> = (0..l.len()).filter(|&i| !l[i].is_zero()).collect();
            if support.iter().all(|i| self.delta.contains(i)) {
                if support.len() != 1 {
                    return Err(FanError::InvalidProblem(format!("ray {v:?} subdivides delta")));
                }
                out.push(support[0]);
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn delta_faces(&self) -> Vec<Vec<usize>> {
        let mut d = self.delta.clone();
        d.sort();
        let n = d.len();
        (0u32..1 << n).map(|m| (0..n).filter(|b| m >> b & 1 == 1).map(|b| d[b]).collect()).collect()
    }

    /// Whether the maximal cones cover `γ`. In coordinates along `γ`'s rays,
    /// with `h` the sum of coordinates, the simplices `{x ∈ γ_i : h(x) ≤ 1}`
    /// must fill the standard simplex, so `Σ |det γ_i| / Π h(v) = 1`.
    pub fn covers(&self) -> bool {
        let n = self.gamma.len();
        let mut total = BigRational::zero();
        for c in maximal_cones(&self.cones).iter().filter(|c| c.len() == n) {
            let coords: Vec<Vec<BigRational>> = c.iter().map(|v| solve(&self.gamma, v).expect("validated")).collect();
            let den = coords.iter().fold(BigRational::one(), |acc, l| acc * l.iter().sum::<BigRational>());
            total += rational_det(coords).abs() / den;
        }
        total.is_one()
    }
}

fn rational_det(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else { return BigRational::zero() };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det = &det * &m[c][c];
        for i in c + 1..n {
            let f = &m[i][c] / &m[c][c];
            for k in c..n {
                let sub = &f * &m[c][k];
                m[i][k] = &m[i][k] - sub;
            }
        }
    }
    det
}

pub fn euler_counts(p: &SubdivisionProblem) -> Result<BTreeMap<Vec<usize>, i64>, FanError> {
    let mut counts: BTreeMap<Vec<usize>, i64> = p.delta_faces().into_iter().map(|f| (f, 0)).collect();
    for c in p.interior_cones() {
        let m = p.meet_delta(c)?;
        let sign = if c.len() % 2 == 0 { 1 } else { -1 };
        *counts.get_mut(&m).expect("subset of delta") += sign;
    }
    Ok(counts)
}

pub fn check_euler(p: &SubdivisionProblem) -> Result<EulerCheck, FanError> {
    let counts = euler_counts(p)?;
    let mut full = p.delta.clone();
    full.sort();
    let top = if p.dim().is_multiple_of(2) { 1 } else { -1 };
    let expected: BTreeMap<Vec<usize>, i64> =
        counts.keys().map(|k| (k.clone(), if *k == full { top } else { 0 })).collect();
    Ok(EulerCheck { holds: counts == expected, covers: p.covers(), counts, expected })
}

/// Iterated stellar refinement of `γ`: each step picks a cone `S` of the
/// current subdivision of dimension at least two, by index into the sorted
/// face list, and weights for a positive combination of its rays.
pub fn iterated_refinement(gamma: &Cone, steps: &[(usize, Vec<i64>)]) -> Vec<Cone> {
    let mut max = vec![sorted(gamma)];
    for (pick, weights) in steps {
        let faces: Vec<Cone> = all_faces(&max).into_iter().filter(|f| f.len() >= 2).collect();
        let s = &faces[pick % faces.len()];
        let w: Vec<i64> = (0..s[0].len())
            .map(|k| s.iter().zip(weights.iter().cycle()).map(|(v, c)| v[k] * (*c).max(1)).sum())
            .collect();
        max = stellar(&max, s, &primitive(&w));
    }
    max
}

#[cfg(test)]
mod tests {
    use super::*;

    fn std(d: usize) -> Cone {
        (0..d).map(|i| (0..d).map(|j| (i == j) as i64).collect()).collect()
    }

    #[test]
    fn worked_plane_case() {
        let cones = iterated_refinement(&std(2), &[(0, vec![1, 1])]);
        assert_eq!(cones.len(), 2);
        let p = SubdivisionProblem::new(std(2), vec![0], cones).unwrap();
        let c = check_euler(&p).unwrap();
        assert_eq!(c.counts[&vec![0]], 1);
        assert_eq!(c.counts[&vec![]], 0);
        assert!(c.holds && c.covers);
    }

    #[test]
    fn trivial_subdivision() {
        for d in 1..=3 {
            let all: Vec<usize> = (0..d).collect();
            let p = SubdivisionProblem::trivial(std(d), all.clone()).unwrap();
            let c = check_euler(&p).unwrap();
            assert_eq!(c.counts[&all], if d % 2 == 0 { 1 } else { -1 });
            assert!(c.holds);
        }
    }

    #[test]
    fn three_dimensional_chain() {
        let cones = iterated_refinement(&std(3), &[(3, vec![1, 2, 1]), (0, vec![1, 1]), (5, vec![2, 1, 1])]);
        let probe = SubdivisionProblem::new(std(3), vec![], cones.clone()).unwrap();
        assert!(probe.covers());
        let present: Vec<Vec<usize>> = probe
            .delta_faces()
            .into_iter()
            .chain([vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 1, 2]])
            .collect();
        for delta in present {
            if let Ok(p) = SubdivisionProblem::new(std(3), delta, cones.clone()) {
                assert!(check_euler(&p).unwrap().holds);
            }
        }
    }

    #[test]
    fn missing_cover_detected() {
        let mut cones = iterated_refinement(&std(2), &[(0, vec![1, 1])]);
        cones.pop();
        let p = SubdivisionProblem::new(std(2), vec![], cones).unwrap();
        assert!(!p.covers());
    }
}
