//! Exact linear algebra over `Z` and `Q` for small integer matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, x| g.gcd(x))
}

pub fn is_primitive(v: &[i64]) -> bool {
    gcd_all(v) == 1
}

/// `v / gcd(v)`; the zero vector is returned unchanged.
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = gcd_all(v);
    if g == 0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn to_q(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(BigInt::from(*x))).collect()
}

/// Reduced row echelon form; returns pivot columns.
fn rref(m: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..cols {
                    let sub = &f * &m[r][k];
                    m[i][k] = &m[i][k] - sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(vectors: &[Vec<i64>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<BigRational>> = vectors.iter().map(|v| to_q(v)).collect();
    rref(&mut m).len()
}

/// Coefficients `λ` with `Σ λ_i basis_i = x`, if `x` lies in the span.
/// The basis vectors must be linearly independent.
pub fn solve(basis: &[Vec<i64>], x: &[i64]) -> Option<Vec<BigRational>> {
    let n = basis.len();
    let d = x.len();
    // columns are basis vectors, augmented with x
    let mut m: Vec<Vec<BigRational>> = (0..d)
        .map(|i| {
            let mut row: Vec<BigRational> = basis.iter().map(|b| BigRational::from_integer(b[i].into())).collect();
            row.push(BigRational::from_integer(x[i].into()));
            row
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.contains(&n) || pivots.len() < n {
        return None;
    }
    Some((0..n).map(|k| m[k][n].clone()).collect())
}

/// `Some(λ)` with all `λ_i > 0` when `x` lies in the relative interior of the
/// simplicial cone on `rays`.
pub fn relint_coordinates(rays: &[Vec<i64>], x: &[i64]) -> Option<Vec<BigRational>> {
    solve(rays, x).filter(|l| l.iter().all(|c| c.is_positive()))
}

pub fn in_cone(rays: &[Vec<i64>], x: &[i64]) -> bool {
    solve(rays, x).is_some_and(|l| l.iter().all(|c| !c.is_negative()))
}

/// A `Z`-basis of the kernel `{x ∈ Z^n : M x = 0}`, via column reduction
/// with a unimodular transform.
pub fn integer_kernel(m: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    // column operations on a mirrored into u (u stored as rows = columns of U)
    let col_op = |a: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, i: usize, j: usize, p: &BigInt, q: &BigInt, r: &BigInt, s: &BigInt| {
        // (col_i, col_j) <- (p col_i + q col_j, r col_i + s col_j)
        for row in a.iter_mut() {
            let (x, y) = (row[i].clone(), row[j].clone());
            row[i] = p * &x + q * &y;
            row[j] = r * &x + s * &y;
        }
        let (x, y) = (u[i].clone(), u[j].clone());
        u[i] = x.iter().zip(&y).map(|(a, b)| p * a + q * b).collect();
        u[j] = x.iter().zip(&y).map(|(a, b)| r * a + s * b).collect();
    };
    let mut piv = 0;
    for row in 0..a.len() {
        if piv == n {
            break;
        }
        for j in piv + 1..n {
            if a[row][j].is_zero() {
                continue;
            }
            let (x, y) = (a[row][piv].clone(), a[row][j].clone());
            let e = x.extended_gcd(&y);
            let (g, s, t) = (e.gcd, e.x, e.y);
            // [s, -y/g; t, x/g] is unimodular and sends (x, y) to (g, 0)
            let (yg, xg) = (&y / &g, &x / &g);
            col_op(&mut a, &mut u, piv, j, &s, &t, &-yg, &xg);
        }
        if !a[row][piv].is_zero() {
            piv += 1;
        }
    }
    u[piv..].to_vec()
}

/// A `Z`-basis of `span(vectors) ∩ Z^d`.
pub fn saturated_basis(vectors: &[Vec<i64>], d: usize) -> Vec<Vec<i64>> {
    if vectors.is_empty() {
        return vec![];
    }
    // orthogonal complement of the span, scaled to integers
    let mut m: Vec<Vec<BigRational>> = vectors.iter().map(|v| to_q(v)).collect();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..d).filter(|c| !pivots.contains(c)).collect();
    let mut complement: Vec<Vec<BigInt>> = Vec::new();
    for &f in &free {
        let mut y = vec![BigRational::zero(); d];
        y[f] = BigRational::one();
        for (k, &p) in pivots.iter().enumerate() {
            y[p] = -m[k][f].clone();
        }
        let den = y.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        complement.push(y.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect());
    }
    integer_kernel(&complement, d)
        .into_iter()
        .map(|v| v.iter().map(|x| x.to_i64().expect("lattice basis entry fits i64")).collect())
        .collect()
}

/// `|det|` of a square integer matrix given by rows.
pub fn abs_det(rows: &[Vec<i64>]) -> BigInt {
    let n = rows.len();
    let mut m: Vec<Vec<BigRational>> = rows.iter().map(|v| to_q(v)).collect();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else { return BigInt::zero() };
        if p != c {
            m.swap(p, c);
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
    det.to_integer().abs()
}
