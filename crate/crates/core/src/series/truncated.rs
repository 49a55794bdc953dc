use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::SeriesError;

/// Power series in `nvars` variables modulo all monomials of total degree
/// above `trunc`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    nvars: usize,
    trunc: u32,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

/// Memoized images of monomials, each obtained from a smaller one by one
/// more factor.
struct MonomialImages<'a> {
    images: &'a [TruncatedSeries],
    m: usize,
    d: u32,
    cache: HashMap<Vec<u32>, TruncatedSeries>,
}

impl MonomialImages<'_> {
    fn get(&mut self, e: &[u32]) -> Result<&TruncatedSeries, SeriesError> {
        if !self.cache.contains_key(e) {
            let img = match e.iter().rposition(|&k| k > 0) {
                None => TruncatedSeries::one(self.m, self.d),
                Some(i) => {
                    let mut prev = e.to_vec();
                    prev[i] -= 1;
                    let images = self.images;
                    let p = self.get(&prev)?;
                    if p.is_zero() {
                        TruncatedSeries::zero(self.m, self.d)
                    } else {
                        p.mul(&images[i])?
                    }
                }
            };
            self.cache.insert(e.to_vec(), img);
        }
        Ok(&self.cache[e])
    }
}

pub(crate) fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

fn degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

impl TruncatedSeries {
    pub fn zero(nvars: usize, trunc: u32) -> Self {
        Self { nvars, trunc, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, trunc: u32, c: BigRational) -> Self {
        let mut s = Self::zero(nvars, trunc);
        s.add_term(vec![0; nvars], c);
        s
    }

    pub fn one(nvars: usize, trunc: u32) -> Self {
        Self::constant(nvars, trunc, BigRational::one())
    }

    pub fn var(nvars: usize, trunc: u32, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, trunc, e, BigRational::one())
    }

    pub fn monomial(nvars: usize, trunc: u32, exp: Vec<u32>, c: BigRational) -> Self {
        let mut s = Self::zero(nvars, trunc);
        s.add_term(exp, c);
        s
    }

    /// Builds from `(exponent, coefficient)` pairs, dropping terms above the
    /// truncation degree.
    pub fn from_terms(nvars: usize, trunc: u32, terms: impl IntoIterator<Item = (Vec<u32>, BigRational)>) -> Result<Self, SeriesError> {
        let mut s = Self::zero(nvars, trunc);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(SeriesError::InvalidArgument(format!("exponent {e:?} has wrong length")));
            }
            s.add_term(e, c);
        }
        Ok(s)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() || degree(&e) > self.trunc {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Lowest total degree of a nonzero term.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|e| degree(e)).min()
    }

    /// Degree `k` homogeneous part.
    pub fn homogeneous(&self, k: u32) -> Self {
        Self {
            nvars: self.nvars,
            trunc: self.trunc,
            terms: self.terms.iter().filter(|(e, _)| degree(e) == k).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    pub fn with_trunc(&self, trunc: u32) -> Self {
        Self {
            nvars: self.nvars,
            trunc,
            terms: self.terms.iter().filter(|(e, _)| degree(e) <= trunc).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    fn check(&self, other: &Self) -> Result<(), SeriesError> {
        if self.nvars != other.nvars || self.trunc != other.trunc {
            return Err(SeriesError::Mismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(self.nvars, self.trunc);
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect();
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        // clear denominators so the inner loop is integer arithmetic
        let (da, a) = self.integral();
        let (db, mut b) = other.integral();
        b.sort_by_key(|t| t.0);
        let mut acc: HashMap<Vec<u32>, BigInt> = HashMap::new();
        for (ga, ea, ca) in &a {
            for (gb, eb, cb) in &b {
                if ga + gb > self.trunc {
                    break;
                }
                let e: Vec<u32> = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                let p = ca * cb;
                match acc.get_mut(&e) {
                    Some(x) => *x += p,
                    None => {
                        acc.insert(e, p);
                    }
                }
            }
        }
        let den = da * db;
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e, BigRational::new(c, den.clone())))
            .collect();
        Ok(Self { nvars: self.nvars, trunc: self.trunc, terms })
    }

    /// Common denominator and the integer numerators with their degrees.
    fn integral(&self) -> (BigInt, Vec<(u32, &Vec<u32>, BigInt)>) {
        let den = self.terms.values().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let terms = self.terms.iter().map(|(e, c)| (degree(e), e, c.numer() * (&den / c.denom()))).collect();
        (den, terms)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars, self.trunc);
        for _ in 0..k {
            out = out.mul(self).expect("same shape");
        }
        out
    }

    /// `f(images_0, ..., images_{n-1})`; the images must have zero constant
    /// term so the truncation is respected.
    pub fn substitute(&self, images: &[TruncatedSeries]) -> Result<Self, SeriesError> {
        Ok(Self::substitute_all(&[self], images)?.pop().expect("one input"))
    }

    /// [`Self::substitute`] for several series at once, sharing the images of
    /// common monomials.
    pub fn substitute_all(fs: &[&TruncatedSeries], images: &[TruncatedSeries]) -> Result<Vec<Self>, SeriesError> {
        let (m, d) = match images.first() {
            Some(g) => (g.nvars, g.trunc),
            None => (0, fs.first().map_or(0, |f| f.trunc)),
        };
        for g in images {
            if g.nvars != m || g.trunc != d {
                return Err(SeriesError::Mismatch);
            }
            if !g.constant_term().is_zero() {
                return Err(SeriesError::InvalidArgument("image with nonzero constant term".into()));
            }
        }
        let mut cache = MonomialImages { images, m, d, cache: HashMap::new() };
        let mut out = Vec::with_capacity(fs.len());
        for f in fs {
            if f.nvars != images.len() {
                return Err(SeriesError::InvalidArgument(format!("{} images for {} variables", images.len(), f.nvars)));
            }
            let mut acc: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
            for (e, c) in &f.terms {
                if degree(e) > d {
                    continue;
                }
                for (e2, c2) in &cache.get(e)?.terms {
                    let p = c * c2;
                    match acc.get_mut(e2) {
                        Some(x) => *x += p,
                        None => {
                            acc.insert(e2.clone(), p);
                        }
                    }
                }
            }
            acc.retain(|_, c| !c.is_zero());
            out.push(Self { nvars: m, trunc: d, terms: acc });
        }
        Ok(out)
    }

    /// `f(z + h)` by Taylor expansion, cheap when the `h_i` have high order.
    pub fn shift(&self, h: &[TruncatedSeries]) -> Result<Self, SeriesError> {
        if h.len() != self.nvars {
            return Err(SeriesError::InvalidArgument(format!("{} shifts for {} variables", h.len(), self.nvars)));
        }
        for g in h {
            self.check(g)?;
        }
        let d = self.trunc;
        let Some(s) = h.iter().filter_map(|g| g.order()).min() else {
            return Ok(self.clone());
        };
        if s == 0 {
            return Err(SeriesError::InvalidArgument("shift with nonzero constant term".into()));
        }
        let mut cache = MonomialImages { images: h, m: self.nvars, d, cache: HashMap::new() };
        let mut acc: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        let mut alpha = vec![0u32; self.nvars];
        loop {
            let a = degree(&alpha);
            if a * s <= d && alpha.iter().zip(h).all(|(&k, g)| k == 0 || !g.is_zero()) {
                // ∂^α f / α!, keeping only degrees that survive multiplication by h^α
                let mut taylor = Self::zero(self.nvars, d);
                for (e, c) in &self.terms {
                    if e.iter().zip(&alpha).any(|(x, y)| x < y) || degree(e) - a + a * s > d {
                        continue;
                    }
                    let mut coef = c.clone();
                    for (&x, &y) in e.iter().zip(&alpha) {
                        if y > 0 {
                            coef *= BigRational::from_integer(binomial(x, y));
                        }
                    }
                    taylor.terms.insert(e.iter().zip(&alpha).map(|(x, y)| x - y).collect(), coef);
                }
                if !taylor.is_zero() {
                    for (e, c) in taylor.mul(cache.get(&alpha)?)?.terms {
                        match acc.get_mut(&e) {
                            Some(x) => *x += c,
                            None => {
                                acc.insert(e, c);
                            }
                        }
                    }
                }
            }
            // next multi-index of total degree at most d / s
            let mut k = self.nvars;
            loop {
                if k == 0 {
                    acc.retain(|_, c| !c.is_zero());
                    return Ok(Self { nvars: self.nvars, trunc: d, terms: acc });
                }
                k -= 1;
                alpha[k] += 1;
                if degree(&alpha) * s <= d {
                    break;
                }
                alpha[k] = 0;
            }
        }
    }

    /// Square root of a series with constant term 1, via the binomial series.
    pub fn sqrt_unit(&self) -> Result<Self, SeriesError> {
        if !self.constant_term().is_one() {
            return Err(SeriesError::NotUnit);
        }
        let h = self.sub(&Self::one(self.nvars, self.trunc))?;
        let mut out = Self::zero(self.nvars, self.trunc);
        let mut hk = Self::one(self.nvars, self.trunc);
        let mut binom = BigRational::one();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        for k in 0..=self.trunc {
            out = out.add(&hk.scale(&binom))?;
            // binom(1/2, k+1) = binom(1/2, k) (1/2 - k) / (k + 1)
            binom = binom * (&half - q(k as i64)) / q(k as i64 + 1);
            hk = hk.mul(&h)?;
            if hk.is_zero() {
                break;
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse of a series with nonzero constant term.
    pub fn inverse_unit(&self) -> Result<Self, SeriesError> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(SeriesError::NotUnit);
        }
        let ci = c.recip();
        // 1/u = c^{-1} Σ (-h)^k with h = u/c - 1
        let h = self.scale(&ci).sub(&Self::one(self.nvars, self.trunc))?.neg();
        let mut out = Self::zero(self.nvars, self.trunc);
        let mut hk = Self::one(self.nvars, self.trunc);
        for _ in 0..=self.trunc {
            out = out.add(&hk)?;
            hk = hk.mul(&h)?;
            if hk.is_zero() {
                break;
            }
        }
        Ok(out.scale(&ci))
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut sorted: Vec<(&Vec<u32>, &BigRational)> = self.terms.iter().collect();
        sorted.sort_by(|a, b| degree(a.0).cmp(&degree(b.0)).then(b.0.cmp(a.0)));
        for (k, (e, c)) in sorted.into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| if x == 1 { format!("z{i}") } else { format!("z{i}^{x}") })
                .collect();
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            match (mono.is_empty(), a.is_one()) {
                (true, _) => write!(f, "{a}")?,
                (false, true) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "{a}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}
