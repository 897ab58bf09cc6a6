#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::Rng;

use zretract::arith::rat;
use zretract::desingularize::desingularize_with_budget;
use zretract::zmap::ZMap;
use zretract::{Point, RationalComplex};

pub fn random_point(rng: &mut StdRng, n: usize, max_den: i64) -> Point {
    let d = rng.gen_range(1..=max_den);
    Point::new((0..n).map(|_| rat(rng.gen_range(0..=d), d)).collect())
}

fn independent(points: &[Point]) -> bool {
    RationalComplex::simplex(points).is_ok()
}

/// A random simplex, or two simplexes glued along a common facet, inside
/// `[0,1]^n` with vertex denominators at most `max_den`.
pub fn random_complex(rng: &mut StdRng, n: usize, max_den: i64) -> RationalComplex {
    loop {
        let k = rng.gen_range(0..=n);
        let pts: Vec<Point> = (0..=k).map(|_| random_point(rng, n, max_den)).collect();
        if !independent(&pts) {
            continue;
        }
        if k == n && n > 0 && rng.gen_bool(0.4) {
            let mut other = pts.clone();
            other[0] = random_point(rng, n, max_den);
            if let Ok(c) = RationalComplex::from_simplices(n, &[pts.clone(), other]) {
                if c.validate().is_ok() && c.simplexes().len() == 2 {
                    return c;
                }
            }
            continue;
        }
        return RationalComplex::simplex(&pts).unwrap();
    }
}

/// Random complexes, desingularized; those the budget cannot handle are skipped.
pub fn regular_corpus(
    rng: &mut StdRng,
    count: usize,
    max_dim: usize,
    max_den: i64,
) -> Vec<RationalComplex> {
    let mut out = Vec::new();
    while out.len() < count {
        let n = rng.gen_range(1..=max_dim);
        let den = if n == 3 { max_den.min(4) } else { max_den };
        let k = random_complex(rng, n, den);
        if let Ok(d) = desingularize_with_budget(&k, 2_000) {
            out.push(d);
        }
    }
    out
}

/// Every point of `[0,1]^n` with denominator at most `max_den`.
pub fn rationals_in_cube(n: usize, max_den: i64) -> Vec<Point> {
    let mut set = BTreeSet::new();
    for d in 1..=max_den {
        let mut idx = vec![0i64; n];
        loop {
            set.insert(Point::new(idx.iter().map(|&a| rat(a, d)).collect()));
            let mut i = 0;
            while i < n && idx[i] == d {
                idx[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
            idx[i] += 1;
        }
    }
    set.into_iter().collect()
}

/// Membership in one simplex by integer barycentric coordinates of
/// homogeneous correspondents: `x` lies in the simplex iff the solution
/// `lambda` of `V lambda = den(x) (x, 1)` is nonnegative.
struct CellTest {
    /// Homogeneous vertex columns, row-major `(n + 1) x (k + 1)`.
    v: Vec<Vec<i128>>,
    rows: Vec<usize>,
    /// `scale * inverse` of the rows of `v` indexed by `rows`.
    adj: Vec<Vec<i128>>,
    scale: i128,
}

fn to_i128(x: &BigInt) -> i128 {
    i128::try_from(x).expect("small test coordinates")
}

impl CellTest {
    fn new(pts: &[Point]) -> CellTest {
        let n = pts[0].dim();
        let cols: Vec<Vec<BigInt>> = pts.iter().map(|p| p.homogeneous().0).collect();
        let k = cols.len();
        let v: Vec<Vec<i128>> = (0..=n)
            .map(|r| cols.iter().map(|c| to_i128(&c[r])).collect())
            .collect();
        let mut rows = Vec::new();
        choose_rows(&cols, n + 1, k, 0, &mut rows);
        let sub: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|&r| cols.iter().map(|c| c[r].clone()).collect())
            .collect();
        let inv =
            zretract::linalg::inverse(&zretract::linalg::to_rat(&sub)).expect("independent rows");
        let scale = inv.iter().flatten().fold(BigInt::one(), |l, q| {
            num_integer::Integer::lcm(&l, q.denom())
        });
        let adj = inv
            .iter()
            .map(|r| {
                r.iter()
                    .map(|q| {
                        to_i128(&(q * zretract::Rational::from_integer(scale.clone())).to_integer())
                    })
                    .collect()
            })
            .collect();
        CellTest {
            v,
            rows,
            adj,
            scale: to_i128(&scale),
        }
    }

    fn contains(&self, hom: &[i128]) -> bool {
        let lambda: Vec<i128> = self
            .adj
            .iter()
            .map(|r| r.iter().zip(&self.rows).map(|(a, &i)| a * hom[i]).sum())
            .collect();
        if lambda.iter().any(|&l| l < 0) {
            return false;
        }
        self.v.iter().zip(hom).all(|(row, &h)| {
            row.iter().zip(&lambda).map(|(a, l)| a * l).sum::<i128>() == self.scale * h
        })
    }
}

fn choose_rows(
    cols: &[Vec<BigInt>],
    n: usize,
    k: usize,
    from: usize,
    rows: &mut Vec<usize>,
) -> bool {
    if rows.len() == k {
        let sub: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|&r| cols.iter().map(|c| c[r].clone()).collect())
            .collect();
        return !zretract::linalg::det_int(&sub).is_zero();
    }
    for r in from..n {
        rows.push(r);
        if choose_rows(cols, n, k, r + 1, rows) {
            return true;
        }
        rows.pop();
    }
    false
}

/// Points of `|domain|` with denominator at most `max_den`, each with the
/// index of a maximal simplex containing it.
pub fn rationals_in_complex_with_cells(k: &RationalComplex, max_den: i64) -> Vec<(Point, usize)> {
    let n = k.ambient_dim();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (ci, s) in k.simplexes().iter().enumerate() {
        let pts = k.owned_points(s);
        let test = CellTest::new(&pts);
        let lo: Vec<_> = (0..n)
            .map(|i| pts.iter().map(|p| p.0[i].clone()).min().unwrap())
            .collect();
        let hi: Vec<_> = (0..n)
            .map(|i| pts.iter().map(|p| p.0[i].clone()).max().unwrap())
            .collect();
        for d in 1..=max_den {
            let dq = zretract::Rational::from_integer(BigInt::from(d));
            let ranges: Vec<(i128, i128)> = (0..n)
                .map(|i| {
                    (
                        to_i128(&(&lo[i] * &dq).ceil().to_integer()),
                        to_i128(&(&hi[i] * &dq).floor().to_integer()),
                    )
                })
                .collect();
            if ranges.iter().any(|(a, b)| a > b) {
                continue;
            }
            let mut idx: Vec<i128> = ranges.iter().map(|r| r.0).collect();
            loop {
                let mut hom = idx.clone();
                hom.push(d as i128);
                if test.contains(&hom) {
                    let p = Point::new(idx.iter().map(|&a| rat(a as i64, d)).collect());
                    if seen.insert(p.clone()) {
                        out.push((p, ci));
                    }
                }
                let mut i = 0;
                while i < n && idx[i] == ranges[i].1 {
                    idx[i] = ranges[i].0;
                    i += 1;
                }
                if i == n {
                    break;
                }
                idx[i] += 1;
            }
        }
    }
    out
}

pub fn rationals_in_complex(k: &RationalComplex, max_den: i64) -> Vec<Point> {
    rationals_in_complex_with_cells(k, max_den)
        .into_iter()
        .map(|(p, _)| p)
        .collect()
}

/// Number of points where `den(f(x))` does not divide `den(x)`.
pub fn denominator_violations(f: &ZMap, max_den: i64) -> usize {
    rationals_in_complex_with_cells(f.domain(), max_den)
        .iter()
        .filter(|(x, cell)| {
            let y = f.pieces()[*cell].apply(x);
            !(x.denominator() % y.denominator()).is_zero()
        })
        .count()
}

/// Independent retraction check on the grid points of the domain:
/// `r(r(x)) = r(x)`, `r(x)` lies in `p`, and `r` fixes every grid point of `p`.
pub fn pointwise_retraction_onto(
    r: &ZMap,
    p: &RationalComplex,
    max_den: i64,
) -> Result<(), String> {
    let target = Membership::new(p);
    let domain = Membership::new(r.domain());
    for (x, cell) in rationals_in_complex_with_cells(r.domain(), max_den) {
        let y = r.pieces()[cell].apply(&x);
        if !target.contains(&y) {
            return Err(format!("r({x}) = {y} lies outside the target"));
        }
        let c = domain
            .cell_of(&y)
            .ok_or_else(|| format!("r({x}) = {y} leaves the domain"))?;
        let z = r.pieces()[c].apply(&y);
        if z != y {
            return Err(format!("r(r({x})) = {z} differs from r({x}) = {y}"));
        }
        if target.contains(&x) && y != x {
            return Err(format!("{x} lies in the target but r moves it to {y}"));
        }
    }
    Ok(())
}

/// Point location in a complex by integer barycentric tests.
pub struct Membership {
    cells: Vec<CellTest>,
}

impl Membership {
    pub fn new(k: &RationalComplex) -> Membership {
        Membership {
            cells: k
                .simplexes()
                .iter()
                .map(|s| CellTest::new(&k.owned_points(s)))
                .collect(),
        }
    }

    pub fn cell_of(&self, x: &Point) -> Option<usize> {
        let hom: Vec<i128> = x.homogeneous().0.iter().map(to_i128).collect();
        self.cells.iter().position(|c| c.contains(&hom))
    }

    pub fn contains(&self, x: &Point) -> bool {
        self.cell_of(x).is_some()
    }
}

/// `|k| = [0,1]^n`: a valid complex with vertices in the cube whose
/// top-dimensional simplexes have total volume one.
pub fn fills_cube(k: &RationalComplex) -> bool {
    let n = k.ambient_dim();
    if k.validate().is_err() {
        return false;
    }
    let unit = zretract::Rational::one();
    let mut volume = zretract::Rational::zero();
    for s in k.simplexes() {
        let pts = k.owned_points(s);
        if pts
            .iter()
            .any(|p| p.0.iter().any(|c| c.is_negative() || *c > unit))
        {
            return false;
        }
        if pts.len() == n + 1 {
            let m: Vec<Vec<zretract::Rational>> = (0..n)
                .map(|i| (1..=n).map(|j| &pts[j].0[i] - &pts[0].0[i]).collect())
                .collect();
            volume += zretract::linalg::det_rat(&m).abs();
        }
    }
    let factorial: BigInt = (1..=n).map(BigInt::from).product();
    volume == zretract::Rational::from_integer(factorial)
}
