use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::truncated::{q, TruncatedSeries};
use super::SeriesError;

/// `q(x) = xᵀ M x` with `M` symmetric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticForm {
    matrix: Vec<Vec<BigRational>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Isotropy {
    Witness(Vec<i64>),
    NoneFound { height_bound: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadInvariants {
    pub rank: usize,
    /// squarefree integer representing the discriminant of the
    /// nondegenerate part modulo squares
    pub discriminant_class: BigInt,
    pub isotropy: Isotropy,
}

/// Odometer step with the last coordinate running fastest.
fn advance(idx: &mut [usize], base: usize) -> bool {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < base {
            return true;
        }
        idx[k] = 0;
    }
    false
}

/// Squarefree part of a nonzero integer, sign included.
pub fn squarefree_kernel(n: &BigInt) -> BigInt {
    assert!(!n.is_zero(), "squarefree kernel of zero");
    let mut m = n.abs();
    let mut out = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        let mut e = 0u32;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= &p;
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    out *= m;
    if n.is_negative() {
        -out
    } else {
        out
    }
}

/// Square class of a nonzero rational: `p/q ≡ p q`.
pub fn rational_square_class(x: &BigRational) -> BigInt {
    squarefree_kernel(&(x.numer() * x.denom()))
}

impl QuadraticForm {
    pub fn new(matrix: Vec<Vec<BigRational>>) -> Result<Self, SeriesError> {
        let n = matrix.len();
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(SeriesError::InvalidArgument("matrix is not square".into()));
            }
            for j in 0..i {
                if matrix[i][j] != matrix[j][i] {
                    return Err(SeriesError::InvalidArgument("matrix is not symmetric".into()));
                }
            }
        }
        Ok(Self { matrix })
    }

    pub fn diagonal(a: &[BigRational]) -> Self {
        let n = a.len();
        Self {
            matrix: (0..n).map(|i| (0..n).map(|j| if i == j { a[i].clone() } else { BigRational::zero() }).collect()).collect(),
        }
    }

    /// Quadratic part of `f` in its first `k` variables, the others set to 0.
    pub fn from_series(f: &TruncatedSeries, k: usize) -> Self {
        let mut m = vec![vec![BigRational::zero(); k]; k];
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        for (e, c) in f.terms() {
            if e.iter().sum::<u32>() != 2 || e[k..].iter().any(|&x| x > 0) {
                continue;
            }
            let idx: Vec<usize> = (0..k).flat_map(|i| std::iter::repeat_n(i, e[i] as usize)).collect();
            let (i, j) = (idx[0], idx[1]);
            if i == j {
                m[i][i] = c.clone();
            } else {
                m[i][j] = c * &half;
                m[j][i] = c * &half;
            }
        }
        Self { matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<BigRational>] {
        &self.matrix
    }

    pub fn eval(&self, x: &[i64]) -> BigRational {
        let n = self.dim();
        let mut s = BigRational::zero();
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                if x[j] != 0 && !self.matrix[i][j].is_zero() {
                    s += &self.matrix[i][j] * q(x[i] * x[j]);
                }
            }
        }
        s
    }

    /// `(P, a)` with `Pᵀ M P = diag(a)`, by symmetric elimination. Column `j`
    /// of `P` is the image of the new `j`-th basis vector.
    pub fn diagonalize(&self) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
        let n = self.dim();
        let mut m = self.matrix.clone();
        let mut p: Vec<Vec<BigRational>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect()).collect();
        // x_k ↦ x_k + c x_l on both sides: column and row ops
        let add = |m: &mut Vec<Vec<BigRational>>, p: &mut Vec<Vec<BigRational>>, k: usize, l: usize, c: &BigRational| {
            for row in m.iter_mut() {
                let s = c * &row[l];
                row[k] = &row[k] + s;
            }
            let rl = m[l].clone();
            for (x, y) in m[k].iter_mut().zip(&rl) {
                *x = &*x + c * y;
            }
            for row in p.iter_mut() {
                let s = c * &row[l];
                row[k] = &row[k] + s;
            }
        };
        let swap = |m: &mut Vec<Vec<BigRational>>, p: &mut Vec<Vec<BigRational>>, k: usize, l: usize| {
            m.swap(k, l);
            for row in m.iter_mut() {
                row.swap(k, l);
            }
            for row in p.iter_mut() {
                row.swap(k, l);
            }
        };
        for k in 0..n {
            if m[k][k].is_zero() {
                if let Some(l) = (k + 1..n).find(|&l| !m[l][l].is_zero()) {
                    swap(&mut m, &mut p, k, l);
                } else if let Some(l) = (k + 1..n).find(|&l| !m[k][l].is_zero()) {
                    add(&mut m, &mut p, k, l, &BigRational::one());
                }
            }
            if m[k][k].is_zero() {
                continue;
            }
            for l in k + 1..n {
                if !m[k][l].is_zero() {
                    let c = -(&m[k][l] / &m[k][k]);
                    add(&mut m, &mut p, l, k, &c);
                }
            }
        }
        let a = (0..n).map(|i| m[i][i].clone()).collect();
        (p, a)
    }

    pub fn rank(&self) -> usize {
        self.diagonalize().1.iter().filter(|x| !x.is_zero()).count()
    }

    pub fn discriminant_class(&self) -> BigInt {
        let d = self.diagonalize().1.into_iter().filter(|x| !x.is_zero()).fold(BigRational::one(), |a, b| a * b);
        rational_square_class(&d)
    }

    /// Exhaustive search over nonzero integer vectors by increasing height;
    /// within a height, coordinates run through `1, -1, 2, -2, ..., 0`.
    pub fn find_isotropic(&self, height_bound: u32) -> Isotropy {
        let n = self.dim();
        if n == 0 {
            return Isotropy::NoneFound { height_bound };
        }
        for h in 1..=height_bound as i64 {
            let mut values: Vec<i64> = (1..=h).flat_map(|v| [v, -v]).collect();
            values.push(0);
            let mut idx = vec![0usize; n];
            loop {
                let x: Vec<i64> = idx.iter().map(|&i| values[i]).collect();
                if x.iter().any(|v| v.abs() == h) && self.eval(&x).is_zero() {
                    return Isotropy::Witness(x);
                }
                if !advance(&mut idx, values.len()) {
                    break;
                }
            }
        }
        Isotropy::NoneFound { height_bound }
    }

    pub fn invariants(&self, height_bound: u32) -> QuadInvariants {
        let rank = self.rank();
        QuadInvariants {
            rank,
            discriminant_class: if rank == 0 { BigInt::one() } else { self.discriminant_class() },
            isotropy: self.find_isotropic(height_bound),
        }
    }
}
