use super::lattice::{dot, primitive};
use super::point::{FanPoint, LogFan};
use super::FanError;

/// Fan of the fiber product over the base, restricted to points over two
/// vertical points. The cone over `(σ, σ')` is
/// `{(x, y) ∈ σ × σ' : ⟨t̄, x⟩ = ⟨t̄', y⟩}`; its rays are the horizontal rays
/// of either factor and one ray `(b v, a w)` per pair of vertical rays with
/// values `a = ⟨t̄, v⟩`, `b = ⟨t̄', w⟩`. Such cones need not be simplicial.
pub fn product_fan(a: &LogFan, b: &LogFan) -> Result<LogFan, FanError> {
    for (f, side) in [(a, "left"), (b, "right")] {
        for p in &f.points {
            if f.symbols.has_nontrivial_action(&p.class)? {
                return Err(FanError::NontrivialAction(side.into()));
            }
        }
    }
    let symbols = a.symbols.merge(&b.symbols)?;
    let (da, db) = (a.ambient_rank, b.ambient_rank);
    let left = |v: &[i64]| v.iter().copied().chain(std::iter::repeat_n(0, db)).collect::<Vec<i64>>();
    let right = |w: &[i64]| std::iter::repeat_n(0, da).chain(w.iter().copied()).collect::<Vec<i64>>();
    let mut points = Vec::new();
    for p in a.points.iter().filter(|p| p.is_vertical()) {
        for q in b.points.iter().filter(|q| q.is_vertical()) {
            let mut rays = Vec::new();
            for v in &p.rays {
                if dot(&p.t_bar, v) == 0 {
                    rays.push(left(v));
                }
            }
            for w in &q.rays {
                if dot(&q.t_bar, w) == 0 {
                    rays.push(right(w));
                }
            }
            for v in &p.rays {
                let x = dot(&p.t_bar, v);
                if x == 0 {
                    continue;
                }
                for w in &q.rays {
                    let y = dot(&q.t_bar, w);
                    if y == 0 {
                        continue;
                    }
                    let joined: Vec<i64> = v.iter().map(|c| c * y).chain(w.iter().map(|c| c * x)).collect();
                    rays.push(primitive(&joined));
                }
            }
            let class = symbols.mul(&p.class, &q.class)?;
            points.push(FanPoint::new(rays, left(&p.t_bar), class));
        }
    }
    LogFan::new(da + db, points, symbols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{RingElement, SymbolTable};

    #[test]
    fn smooth_times_smooth() {
        let a = LogFan::new(1, vec![FanPoint::new(vec![vec![1]], vec![1], RingElement::symbol("A"))], SymbolTable::plain(&["A"])).unwrap();
        let b = LogFan::new(1, vec![FanPoint::new(vec![vec![1]], vec![1], RingElement::symbol("B"))], SymbolTable::plain(&["B"])).unwrap();
        let p = product_fan(&a, &b).unwrap();
        assert_eq!(p.points.len(), 1);
        assert_eq!(p.points[0].rays, vec![vec![1, 1]]);
        assert_eq!(p.points[0].class, RingElement::term(crate::ring::ClassMonomial::from_factors(["A".to_string(), "B".to_string()]), crate::ring::LPoly::one()));
        assert_eq!(p.vol().unwrap(), p.symbols.mul(&a.vol().unwrap(), &b.vol().unwrap()).unwrap());
    }

    #[test]
    fn two_vertical_rays_each() {
        let one = || RingElement::one();
        let sq = vec![vec![1, 0], vec![0, 1]];
        let a = LogFan::new(2, vec![FanPoint::new(sq.clone(), vec![1, 2], one())], SymbolTable::new()).unwrap();
        let p = product_fan(&a, &a).unwrap();
        let pt = &p.points[0];
        assert_eq!(pt.rays.len(), 4);
        assert_eq!(pt.rank(), 3);
        assert_eq!(pt.ranks().unwrap().r_v, 3);
        assert_eq!(p.vol().unwrap(), RingElement::from_poly(crate::ring::LPoly::one_minus_l_pow(2)));
    }
}
