use crate::ring::{LPoly, RingElement};

use super::lattice::{dot, is_primitive, relint_coordinates};
use super::point::{FanPoint, LogFan};
use super::FanError;

/// A subdivision step: the index of the point whose cone receives the new ray.
pub type PlanStep = (usize, Vec<i64>);

/// Star subdivision at `w`, which must lie in the relative interior of the
/// cone of point `index`. Every point whose cone has that cone as a face is
/// replaced in place by the cones of the refinement meeting its relative
/// interior; a new point `τ` over `q` gets class `(L - 1)^{r(q) - r(τ)} [q]`.
pub fn star_subdivide(f: &LogFan, index: usize, w: &[i64]) -> Result<LogFan, FanError> {
    let target = f.points.get(index).ok_or(FanError::NoSuchPoint(index))?;
    if target.rays.len() < 2 {
        return Err(FanError::Inapplicable("a one-dimensional cone has no interior ray to add".into()));
    }
    if !target.is_simplicial() {
        return Err(FanError::Inapplicable("star subdivision needs a simplicial cone".into()));
    }
    if w.len() != f.ambient_rank {
        return Err(FanError::Inapplicable(format!("ray {w:?} has wrong length")));
    }
    if !is_primitive(w) {
        return Err(FanError::Inapplicable(format!("ray {w:?} is not primitive")));
    }
    if relint_coordinates(&target.rays, w).is_none() {
        return Err(FanError::Inapplicable(format!("ray {w:?} is not in the relative interior")));
    }
    if dot(&target.t_bar, w) == 0 {
        return Err(FanError::Inapplicable(format!("ray {w:?} is horizontal")));
    }
    let face = target.rays.clone();
    let k = face.len();
    let mut points = Vec::with_capacity(f.points.len() + (1 << k));
    for q in &f.points {
        if !q.has_face(&face) {
            points.push(q.clone());
            continue;
        }
        if !q.is_simplicial() {
            return Err(FanError::Inapplicable("star subdivision through a non-simplicial cone".into()));
        }
        let rest: Vec<Vec<i64>> = q.rays.iter().filter(|v| !face.contains(v)).cloned().collect();
        for mask in 0u32..(1 << k) - 1 {
            let mut rays = rest.clone();
            rays.extend((0..k).filter(|b| mask >> b & 1 == 1).map(|b| face[b].clone()));
            rays.push(w.to_vec());
            let drop = q.rays.len() - rays.len();
            let class = q.class.mul_poly(&LPoly::l_minus_one_pow(drop as u32));
            points.push(FanPoint::new(rays, q.t_bar.clone(), class));
        }
    }
    LogFan::new(f.ambient_rank, points, f.symbols.clone())
}

pub fn apply_plan(f: &LogFan, plan: &[PlanStep]) -> Result<LogFan, FanError> {
    let mut cur = f.clone();
    for (i, w) in plan {
        cur = star_subdivide(&cur, *i, w)?;
    }
    Ok(cur)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceReport {
    pub before: RingElement,
    pub after: RingElement,
    pub points_after: usize,
    pub invariant: bool,
}

pub fn check_subdivision_invariance(f: &LogFan, plan: &[PlanStep]) -> Result<InvarianceReport, FanError> {
    let before = f.vol()?;
    let g = apply_plan(f, plan)?;
    let after = g.vol()?;
    Ok(InvarianceReport { invariant: before == after, before, after, points_after: g.points.len() })
}

/// Adds a horizontal boundary divisor meeting the stratum of point `index`
/// in a locus of class `meet`. The lattice grows by one coordinate, on which
/// `t̄` vanishes; the point keeps class `[σ] - meet` and the new cone
/// `σ + e_new` gets `meet`. A purely horizontal point for the divisor itself
/// is added with class `divisor_class`.
pub fn add_horizontal_divisor(
    f: &LogFan,
    index: usize,
    meet: &RingElement,
    divisor_class: &RingElement,
) -> Result<LogFan, FanError> {
    let p = f.points.get(index).ok_or(FanError::NoSuchPoint(index))?;
    if !p.is_vertical() {
        return Err(FanError::Inapplicable("point is horizontal".into()));
    }
    let d = f.ambient_rank + 1;
    let lift = |v: &Vec<i64>| {
        let mut u = v.clone();
        u.push(0);
        u
    };
    let mut e = vec![0; d];
    e[d - 1] = 1;
    let mut points: Vec<FanPoint> = f
        .points
        .iter()
        .map(|q| FanPoint::new(q.rays.iter().map(lift).collect(), lift(&q.t_bar), q.class.clone()))
        .collect();
    let rest = &p.class - meet;
    if rest.is_zero() || meet.is_zero() {
        return Err(FanError::Inapplicable("both parts of the split class must be nonzero".into()));
    }
    points[index].class = rest;
    let mut rays: Vec<Vec<i64>> = p.rays.iter().map(lift).collect();
    rays.push(e.clone());
    points.push(FanPoint::new(rays, lift(&p.t_bar), meet.clone()));
    points.push(FanPoint::new(vec![e], lift(&p.t_bar), divisor_class.clone()));
    LogFan::new(d, points, f.symbols.clone())
}
