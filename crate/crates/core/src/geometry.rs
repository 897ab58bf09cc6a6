//! Affine functions and barycentric coordinates over exact rationals.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{Point, Rational};
use crate::linalg::{nullspace, solve, RatMatrix};

/// `x -> linear . x + constant`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineFn {
    pub linear: Vec<Rational>,
    pub constant: Rational,
}

impl AffineFn {
    pub fn eval(&self, x: &Point) -> Rational {
        self.linear
            .iter()
            .zip(&x.0)
            .fold(self.constant.clone(), |acc, (a, c)| acc + a * c)
    }

    /// `x -> self(m x + b)`.
    pub fn pullback(&self, m: &[Vec<BigInt>], b: &[BigInt]) -> AffineFn {
        let n = m.first().map_or(0, |r| r.len());
        let linear = (0..n)
            .map(|j| {
                self.linear
                    .iter()
                    .zip(m)
                    .fold(Rational::zero(), |acc, (a, row)| {
                        acc + a * Rational::from_integer(row[j].clone())
                    })
            })
            .collect();
        let constant = self
            .linear
            .iter()
            .zip(b)
            .fold(self.constant.clone(), |acc, (a, bi)| {
                acc + a * Rational::from_integer(bi.clone())
            });
        AffineFn { linear, constant }
    }

    /// Positive multiple with first nonzero linear coefficient 1, so that
    /// functions with the same zero set coincide up to sign.
    pub fn normalized(&self) -> AffineFn {
        match self.linear.iter().find(|a| !a.is_zero()) {
            Some(lead) => {
                let lead = lead.clone();
                AffineFn {
                    linear: self.linear.iter().map(|a| a / &lead).collect(),
                    constant: &self.constant / &lead,
                }
            }
            None => self.clone(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.linear.iter().all(Zero::is_zero)
    }
}

fn lifted_rows(vertices: &[&Point]) -> RatMatrix {
    vertices
        .iter()
        .map(|v| {
            let mut r = v.0.clone();
            r.push(Rational::one());
            r
        })
        .collect()
}

/// Barycentric coordinates of `x` with respect to affinely independent
/// `vertices`, or `None` when `x` is off their affine hull.
pub fn barycentric(vertices: &[&Point], x: &Point) -> Option<Vec<Rational>> {
    let dim = x.dim();
    // (dim+1) x k system: sum l_i (v_i, 1) = (x, 1)
    let a: RatMatrix = (0..=dim)
        .map(|r| {
            vertices
                .iter()
                .map(|v| {
                    if r < dim {
                        v.0[r].clone()
                    } else {
                        Rational::one()
                    }
                })
                .collect()
        })
        .collect();
    let mut b = x.0.clone();
    b.push(Rational::one());
    solve(&a, &b)
}

/// Barycentric coordinates when `x` lies in the closed simplex.
pub fn locate(vertices: &[&Point], x: &Point) -> Option<Vec<Rational>> {
    barycentric(vertices, x).filter(|l| l.iter().all(|c| !c.is_negative()))
}

pub fn affinely_independent(vertices: &[&Point]) -> bool {
    let rows = lifted_rows(vertices);
    crate::linalg::rank(&rows) == vertices.len()
}

/// Affine functions whose sign pattern cuts out the simplex: one extension
/// of each barycentric coordinate, plus equations of the affine hull.
pub fn cut_functions(vertices: &[&Point]) -> Vec<AffineFn> {
    let dim = vertices[0].dim();
    let rows = lifted_rows(vertices);
    let split = |v: Vec<Rational>| {
        let mut linear = v;
        let constant = linear.pop().expect("nonempty");
        AffineFn { linear, constant }
    };
    let mut out = Vec::with_capacity(vertices.len() + dim);
    for i in 0..vertices.len() {
        let target: Vec<Rational> = (0..vertices.len())
            .map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        let sol = solve(&rows, &target).expect("vertices are affinely independent");
        out.push(split(sol));
    }
    out.extend(nullspace(&rows, dim + 1).into_iter().map(split));
    out
}

/// Axis-aligned bounding box.
#[derive(Clone, Debug)]
pub struct BBox {
    pub lo: Vec<Rational>,
    pub hi: Vec<Rational>,
}

impl BBox {
    pub fn of(points: &[&Point]) -> BBox {
        let mut lo = points[0].0.clone();
        let mut hi = points[0].0.clone();
        for p in &points[1..] {
            for (i, c) in p.0.iter().enumerate() {
                if *c < lo[i] {
                    lo[i] = c.clone();
                }
                if *c > hi[i] {
                    hi[i] = c.clone();
                }
            }
        }
        BBox { lo, hi }
    }

    pub fn overlaps(&self, other: &BBox) -> bool {
        self.lo
            .iter()
            .zip(&self.hi)
            .zip(other.lo.iter().zip(&other.hi))
            .all(|((l1, h1), (l2, h2))| l1 <= h2 && l2 <= h1)
    }
}

/// True when `f` is strictly of one sign on all points, so it separates
/// them from its zero set.
pub fn strictly_one_sided(f: &AffineFn, points: &[&Point]) -> Option<Ordering> {
    let mut sign = None;
    for p in points {
        let s = f.eval(p).cmp(&Rational::zero());
        if s == Ordering::Equal {
            return None;
        }
        match sign {
            None => sign = Some(s),
            Some(prev) if prev != s => return None,
            _ => {}
        }
    }
    sign
}
