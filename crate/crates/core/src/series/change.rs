use num_rational::BigRational;
use num_traits::{One, Zero};

use super::truncated::TruncatedSeries;
use super::SeriesError;

/// `z ↦ θ(z)`, given by the images of the variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateChange {
    images: Vec<TruncatedSeries>,
}

/// Inverse of a square rational matrix, or `None` when singular.
pub(crate) fn invert(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in 0..2 * n {
                    let s = &f * &a[c][k];
                    a[i][k] = &a[i][k] - s;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

impl CoordinateChange {
    pub fn new(images: Vec<TruncatedSeries>) -> Result<Self, SeriesError> {
        let n = images.len();
        let Some(first) = images.first() else {
            return Err(SeriesError::NotInvertible("no variables".into()));
        };
        let d = first.trunc();
        for g in &images {
            if g.nvars() != n || g.trunc() != d {
                return Err(SeriesError::Mismatch);
            }
            if !g.constant_term().is_zero() {
                return Err(SeriesError::NotInvertible("image with nonzero constant term".into()));
            }
        }
        let c = Self { images };
        if invert(&c.linear_part()).is_none() {
            return Err(SeriesError::NotInvertible("singular linear part".into()));
        }
        Ok(c)
    }

    pub fn identity(n: usize, trunc: u32) -> Self {
        Self { images: (0..n).map(|i| TruncatedSeries::var(n, trunc, i)).collect() }
    }

    /// `z_i ↦ Σ_j m[i][j] z_j`.
    pub fn linear(m: &[Vec<BigRational>], trunc: u32) -> Result<Self, SeriesError> {
        let n = m.len();
        let images = m
            .iter()
            .map(|row| {
                let mut s = TruncatedSeries::zero(n, trunc);
                for (j, c) in row.iter().enumerate() {
                    let mut e = vec![0; n];
                    e[j] = 1;
                    s.add_term(e, c.clone());
                }
                s
            })
            .collect();
        Self::new(images)
    }

    pub fn images(&self) -> &[TruncatedSeries] {
        &self.images
    }

    pub fn nvars(&self) -> usize {
        self.images.len()
    }

    pub fn trunc(&self) -> u32 {
        self.images[0].trunc()
    }

    /// Row `i` holds the linear coefficients of the image of `z_i`.
    pub fn linear_part(&self) -> Vec<Vec<BigRational>> {
        let n = self.images.len();
        self.images
            .iter()
            .map(|g| {
                (0..n)
                    .map(|j| {
                        let mut e = vec![0; n];
                        e[j] = 1;
                        g.coeff(&e)
                    })
                    .collect()
            })
            .collect()
    }

    /// `f ∘ θ`.
    pub fn apply(&self, f: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
        f.substitute(&self.images)
    }

    /// `θ ∘ φ`, so that applying it equals applying `θ` and then `φ`.
    pub fn then(&self, phi: &CoordinateChange) -> Result<Self, SeriesError> {
        let images = TruncatedSeries::substitute_all(&self.images.iter().collect::<Vec<_>>(), &phi.images)?;
        Ok(Self { images })
    }

    /// Truncated inverse `ψ` with `θ ∘ ψ = id`, by the fixed point
    /// `ψ = A^{-1}(z - N(ψ))` where `θ = A z + N(z)`.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let n = self.nvars();
        let d = self.trunc();
        let a = self.linear_part();
        let ai = invert(&a).ok_or_else(|| SeriesError::NotInvertible("singular linear part".into()))?;
        let lin = Self::linear(&a, d)?;
        let nonlinear: Vec<TruncatedSeries> =
            self.images.iter().zip(&lin.images).map(|(g, l)| g.sub(l)).collect::<Result<_, _>>()?;
        let apply_ai = |v: &[TruncatedSeries]| -> Result<Vec<TruncatedSeries>, SeriesError> {
            (0..n)
                .map(|i| {
                    let mut s = TruncatedSeries::zero(n, d);
                    for j in 0..n {
                        if !ai[i][j].is_zero() {
                            s = s.add(&v[j].scale(&ai[i][j]))?;
                        }
                    }
                    Ok(s)
                })
                .collect()
        };
        let z: Vec<TruncatedSeries> = (0..n).map(|i| TruncatedSeries::var(n, d, i)).collect();
        let mut psi = apply_ai(&z)?;
        for _ in 1..d {
            let np = TruncatedSeries::substitute_all(&nonlinear.iter().collect::<Vec<_>>(), &psi)?;
            let rhs: Vec<TruncatedSeries> = z.iter().zip(&np).map(|(a, b)| a.sub(b)).collect::<Result<_, _>>()?;
            let next = apply_ai(&rhs)?;
            if next == psi {
                break;
            }
            psi = next;
        }
        Self::new(psi)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.nvars(), self.trunc())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::truncated::q;

    #[test]
    fn inverse_round_trip() {
        let z = |i| TruncatedSeries::var(2, 5, i);
        let im0 = z(0).add(&z(1).pow(2)).unwrap().add(&z(0).mul(&z(1)).unwrap().scale(&q(3))).unwrap();
        let im1 = z(1).scale(&q(2)).add(&z(0).pow(3)).unwrap();
        let t = CoordinateChange::new(vec![im0, im1]).unwrap();
        let inv = t.inverse().unwrap();
        assert!(t.then(&inv).unwrap().is_identity());
        assert!(inv.then(&t).unwrap().is_identity());
    }

    #[test]
    fn singular_linear_part_rejected() {
        let z = |i| TruncatedSeries::var(2, 3, i);
        assert!(CoordinateChange::new(vec![z(0), z(0).pow(2)]).is_err());
        assert!(CoordinateChange::new(vec![z(0).add(&TruncatedSeries::one(2, 3)).unwrap(), z(1)]).is_err());
    }
}
