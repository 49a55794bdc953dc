use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::change::CoordinateChange;
use super::quadratic::{Isotropy, QuadraticForm};
use super::truncated::{q, TruncatedSeries};
use super::SeriesError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseResult {
    pub change: CoordinateChange,
    /// `a_0, ..., a_d` with `f ∘ θ = Σ a_i z_i²` up to the truncation degree
    pub diagonal: Vec<BigRational>,
}

impl MorseResult {
    pub fn normal_form(&self, nvars: usize, trunc: u32) -> TruncatedSeries {
        let mut s = TruncatedSeries::zero(nvars, trunc);
        for (i, a) in self.diagonal.iter().enumerate() {
            let mut e = vec![0; nvars];
            e[i] = 2;
            s.add_term(e, a.clone());
        }
        s
    }
}

pub const CERTIFIED: &str = "ordinary double point (hypersurface case)";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub rank: usize,
    pub expected_rank: usize,
    pub diagonal: Vec<BigRational>,
    pub discriminant_class: BigInt,
    pub isotropy: Isotropy,
    pub certified: bool,
    pub status: String,
}

fn z_degree(e: &[u32], k: usize) -> u32 {
    e[..k].iter().sum()
}

/// The index `i` when the `z`-part of `e` is exactly `z_i²`.
fn pure_square(e: &[u32], k: usize) -> Option<usize> {
    let nz: Vec<usize> = (0..k).filter(|&i| e[i] > 0).collect();
    match nz[..] {
        [i] if e[i] == 2 => Some(i),
        _ => None,
    }
}

fn change_from(images: Vec<TruncatedSeries>) -> Result<CoordinateChange, SeriesError> {
    CoordinateChange::new(images)
}

/// `θ ∘ (z ↦ z + h)`.
fn shift_change(theta: &CoordinateChange, h: &[TruncatedSeries]) -> Result<CoordinateChange, SeriesError> {
    change_from(theta.images().iter().map(|g| g.shift(h)).collect::<Result<_, _>>()?)
}

/// Morse normal form of `f` in the variables `z_0..z_d`, the remaining
/// variables being parameters along the singular locus. `f` must lie in the
/// square of the ideal `(z_0, ..., z_d)` with nondegenerate quadratic part.
pub fn morse_reduce(f: &TruncatedSeries, d: usize, trunc: u32) -> Result<MorseResult, SeriesError> {
    let n = f.nvars();
    let k = d + 1;
    if k > n {
        return Err(SeriesError::InvalidArgument(format!("d = {d} but only {n} variables")));
    }
    if trunc > f.trunc() {
        return Err(SeriesError::InvalidArgument(format!("truncation {trunc} exceeds the input's {}", f.trunc())));
    }
    if trunc < 2 {
        return Err(SeriesError::InvalidArgument("truncation degree must be at least 2".into()));
    }
    let f = f.with_trunc(trunc);
    if let Some((e, _)) = f.terms().find(|(e, _)| z_degree(e, k) < 2) {
        return Err(SeriesError::NotPrepared(format!("term with exponent {e:?} is not in the square of (z_0..z_{d})")));
    }
    let qf = QuadraticForm::from_series(&f, k);
    let (mut p, mut a) = qf.diagonalize();
    // primitive integer columns keep the coefficients of later steps small
    for j in 0..k {
        let den = p.iter().fold(BigInt::one(), |l, row| l.lcm(row[j].denom()));
        let num = p.iter().fold(BigInt::zero(), |g, row| g.gcd(&(row[j].numer() * &den / row[j].denom())));
        if num.is_zero() {
            continue;
        }
        let c = BigRational::new(den, num);
        for row in p.iter_mut() {
            row[j] = &row[j] * &c;
        }
        a[j] = &a[j] * &c * &c;
    }
    let rank = a.iter().filter(|x| !x.is_zero()).count();
    if rank < k {
        return Err(SeriesError::Degenerate { rank, expected: k });
    }

    // linear diagonalization
    let var = |i| TruncatedSeries::var(n, trunc, i);
    let images: Vec<TruncatedSeries> = (0..n)
        .map(|i| {
            if i >= k {
                return var(i);
            }
            let mut s = TruncatedSeries::zero(n, trunc);
            for (j, c) in p[i].iter().enumerate() {
                let mut e = vec![0; n];
                e[j] = 1;
                s.add_term(e, c.clone());
            }
            s
        })
        .collect();
    let mut theta = change_from(images)?;
    let mut g = theta.apply(&f)?;

    // degree by degree, remove every term whose z-part is not a pure square
    for deg in 3..=trunc {
        let mut corr: Vec<TruncatedSeries> = (0..k).map(|_| TruncatedSeries::zero(n, trunc)).collect();
        let mut any = false;
        for (e, c) in g.terms().filter(|(e, _)| e.iter().sum::<u32>() == deg) {
            if pure_square(e, k).is_some() {
                continue;
            }
            let i = (0..k).find(|&i| e[i] > 0).expect("z-degree at least two");
            let mut rest = e.clone();
            rest[i] -= 1;
            // z_i ↦ z_i - c m / (2 a_i z_i) cancels c m
            corr[i].add_term(rest, c / (q(2) * &a[i]));
            any = true;
        }
        if !any {
            continue;
        }
        // z_i ↦ z_i - corr_i
        let h: Vec<TruncatedSeries> = (0..n).map(|i| if i < k { corr[i].neg() } else { TruncatedSeries::zero(n, trunc) }).collect();
        g = g.shift(&h)?;
        theta = shift_change(&theta, &h)?;
    }
    if g.terms().any(|(e, _)| pure_square(e, k).is_none()) {
        return Err(SeriesError::NoTermination);
    }

    // g = Σ z_i² u_i(y); rescale z_i ↦ z_i (u_i / a_i)^{-1/2}
    let mut scale: Vec<TruncatedSeries> = (0..k).map(|_| TruncatedSeries::zero(n, trunc)).collect();
    for (e, c) in g.terms() {
        let i = pure_square(e, k).expect("checked");
        let mut y = e.clone();
        y[i] = 0;
        scale[i].add_term(y, c / &a[i]);
    }
    if scale.iter().any(|s| *s != TruncatedSeries::one(n, trunc)) {
        let one = TruncatedSeries::one(n, trunc);
        let h = (0..n)
            .map(|i| if i < k { var(i).mul(&scale[i].sqrt_unit()?.inverse_unit()?.sub(&one)?) } else { Ok(TruncatedSeries::zero(n, trunc)) })
            .collect::<Result<Vec<_>, _>>()?;
        g = g.shift(&h)?;
        theta = shift_change(&theta, &h)?;
    }
    let out = MorseResult { change: theta, diagonal: a };
    // g tracks f ∘ θ through every step
    if g != out.normal_form(n, trunc) {
        return Err(SeriesError::NoTermination);
    }
    Ok(out)
}

pub fn odp_certificate(f: &TruncatedSeries, d: usize, trunc: u32, height_bound: u32) -> Result<Certificate, SeriesError> {
    let m = morse_reduce(f, d, trunc)?;
    let inv = QuadraticForm::diagonal(&m.diagonal).invariants(height_bound);
    let expected_rank = d + 1;
    let (certified, status) = match (&inv.isotropy, inv.rank == expected_rank) {
        (_, false) => (false, format!("not certified: rank {} differs from {expected_rank}", inv.rank)),
        (Isotropy::Witness(_), true) => (true, CERTIFIED.to_string()),
        (Isotropy::NoneFound { height_bound }, true) => {
            (false, format!("not certified: no isotropic vector of height at most {height_bound}"))
        }
    };
    Ok(Certificate {
        rank: inv.rank,
        expected_rank,
        diagonal: m.diagonal,
        discriminant_class: inv.discriminant_class,
        isotropy: inv.isotropy,
        certified,
        status,
    })
}
