//! Exact rational points, denominators and homogeneous correspondents.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::parse(s.to_string(), "expected a rational of the form p/q");
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::parse(s.to_string(), "zero denominator"));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
    }
}

/// A point of `Q^n` with exact coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Point(pub Vec<Rational>);

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point(coords)
    }

    pub fn origin(dim: usize) -> Self {
        Point(vec![Rational::zero(); dim])
    }

    /// The standard basis vector `e_i` scaled by `1/den`.
    pub fn scaled_unit(dim: usize, i: usize, den: &BigInt) -> Self {
        let mut p = Self::origin(dim);
        p.0[i] = Rational::new(BigInt::one(), den.clone());
        p
    }

    pub fn from_fracs(coords: &[(i64, i64)]) -> Self {
        Point(coords.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point(coords.iter().map(|&n| int(n)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// `den(v) * (v, 1)`.
    pub fn homogeneous(&self) -> HomogeneousVector {
        let d = self.denominator();
        let mut entries: Vec<BigInt> = self
            .0
            .iter()
            .map(|c| (c * Rational::from_integer(d.clone())).to_integer())
            .collect();
        entries.push(d);
        HomogeneousVector(entries)
    }

    /// True when every coordinate lies in `[0, 1]`.
    pub fn in_unit_cube(&self) -> bool {
        self.0
            .iter()
            .all(|c| !c.is_negative() && *c <= Rational::one())
    }

    /// True when every coordinate is 0 or 1.
    pub fn is_cube_vertex(&self) -> bool {
        self.0.iter().all(|c| c.is_zero() || c.is_one())
    }

    pub fn add(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Rational) -> Point {
        Point(self.0.iter().map(|a| a * s).collect())
    }

    /// Embeds into `R^dim`, sending coordinate `l` to `slots[l]`.
    pub fn embed(&self, dim: usize, slots: &[usize]) -> Point {
        let mut p = Point::origin(dim);
        for (l, &s) in slots.iter().enumerate() {
            p.0[s] = self.0[l].clone();
        }
        p
    }

    /// Inverse of [`Point::embed`]; coordinates outside `slots` are dropped.
    pub fn restrict(&self, slots: &[usize]) -> Point {
        Point(slots.iter().map(|&s| self.0[s].clone()).collect())
    }

    /// Parses a comma separated list of rationals, e.g. `"1/2,1/3"`.
    pub fn parse(s: &str) -> Result<Point> {
        if s.trim().is_empty() {
            return Ok(Point(Vec::new()));
        }
        s.split(',')
            .map(parse_rational)
            .collect::<Result<_>>()
            .map(Point)
    }

    /// Affine combination `sum w_i p_i` of the given points.
    pub fn combination(points: &[&Point], weights: &[Rational]) -> Point {
        let dim = points[0].dim();
        let mut out = vec![Rational::zero(); dim];
        for (p, w) in points.iter().zip(weights) {
            for (o, c) in out.iter_mut().zip(&p.0) {
                *o += c * w;
            }
        }
        Point(out)
    }

    pub fn barycenter(points: &[&Point]) -> Point {
        let w = Rational::new(BigInt::one(), BigInt::from(points.len()));
        Point::combination(points, &vec![w; points.len()])
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(|c| c.to_string()).collect()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

/// The integer vector `den(v)(v, 1)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct HomogeneousVector(pub Vec<BigInt>);

impl HomogeneousVector {
    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn last(&self) -> &BigInt {
        self.0.last().expect("homogeneous vector is never empty")
    }

    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |acc, e| acc.gcd(e))
    }

    pub fn sum<'a>(vectors: impl IntoIterator<Item = &'a HomogeneousVector>) -> HomogeneousVector {
        let mut it = vectors.into_iter();
        let first = it.next().expect("sum of no vectors").clone();
        it.fold(first, |mut acc, v| {
            for (a, b) in acc.0.iter_mut().zip(&v.0) {
                *a += b;
            }
            acc
        })
    }

    /// Divides out the content, leaving a primitive vector.
    pub fn primitive(&self) -> HomogeneousVector {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        HomogeneousVector(self.0.iter().map(|e| e / &g).collect())
    }

    /// The rational point whose homogeneous correspondent lies on this ray.
    pub fn to_point(&self) -> Point {
        let (last, head) = self.0.split_last().expect("nonempty");
        assert!(
            last.is_positive(),
            "homogeneous vector needs a positive last entry"
        );
        Point(
            head.iter()
                .map(|e| Rational::new(e.clone(), last.clone()))
                .collect(),
        )
    }
}

/// Denominator of a point: lcm of the coordinate denominators.
pub fn denominator(v: &Point) -> BigInt {
    v.denominator()
}

pub fn homogeneous_correspondent(v: &Point) -> HomogeneousVector {
    v.homogeneous()
}

/// `a divides b` for nonnegative integers, with `0 | 0`.
pub fn divides(a: &BigInt, b: &BigInt) -> bool {
    if a.is_zero() {
        return b.is_zero();
    }
    (b % a).is_zero()
}
