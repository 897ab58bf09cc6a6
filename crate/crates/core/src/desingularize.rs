//! Regular subdivisions, the vertex-reaching blow-up sequence and
//! divisible-point searches.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{HomogeneousVector, Point, Rational};
use crate::complex::RationalComplex;
use crate::error::{Error, Result};
use crate::geometry::locate;
use crate::linalg::{hermite_reduce, inverse, to_rat};
use crate::regularity::{
    denominator_gcd, farey_mediant, homogeneous_columns, is_regular_simplex, multiplicity,
};

pub const DEFAULT_BLOW_UP_BUDGET: u64 = 100_000;

/// Sort key of an edge: denominator sum, then the coordinates of the
/// smaller endpoint, then of the larger one.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct EdgeKey {
    den_sum: BigInt,
    first: Point,
    second: Point,
}

impl EdgeKey {
    pub fn new(a: &Point, b: &Point) -> Self {
        let (first, second) = if a <= b {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        };
        EdgeKey {
            den_sum: a.denominator() + b.denominator(),
            first,
            second,
        }
    }
}

pub struct EdgeOrdering;

impl EdgeOrdering {
    pub fn compare(a: (&Point, &Point), b: (&Point, &Point)) -> Ordering {
        EdgeKey::new(a.0, a.1).cmp(&EdgeKey::new(b.0, b.1))
    }
}

/// Centers of successive blow-ups with the complexes they produce;
/// `complexes[0]` is the starting complex.
#[derive(Clone, Debug)]
pub struct BlowUpTrace {
    pub centers: Vec<Point>,
    pub complexes: Vec<RationalComplex>,
}

impl BlowUpTrace {
    pub fn final_complex(&self) -> &RationalComplex {
        self.complexes.last().expect("trace starts with a complex")
    }
}

fn complexity(k: &RationalComplex) -> Result<(BigInt, usize)> {
    let mut max = BigInt::one();
    let mut count = 0;
    for s in k.simplexes() {
        let m = multiplicity(&k.points(s));
        if m.is_zero() {
            return Err(Error::InvalidComplex(format!("simplex {s} is degenerate")));
        }
        match m.cmp(&max) {
            Ordering::Greater => {
                max = m;
                count = 1;
            }
            Ordering::Equal => count += 1,
            Ordering::Less => {}
        }
    }
    if max.is_one() {
        count = 0;
    }
    Ok((max, count))
}

/// Primitive lattice point of the half-open fundamental parallelepiped of
/// a non-regular simplex, as a rational point in its relative interior of
/// some face. Replacing any vertex by it lowers the multiplicity.
fn parallelepiped_point(points: &[&Point]) -> Result<Point> {
    let cols = homogeneous_columns(points);
    let red = hermite_reduce(&cols)?;
    let hinv = inverse(&to_rat(&red.upper)).ok_or(Error::DependentVectors)?;
    let k = cols.len();
    for j in 0..k {
        let lambda: Vec<Rational> = (0..k).map(|i| hinv[i][j].clone()).collect();
        if lambda.iter().all(|l| l.is_integer()) {
            continue;
        }
        let frac: Vec<Rational> = lambda.iter().map(|l| l - l.floor()).collect();
        let n = cols[0].len();
        let mut u = vec![Rational::zero(); n];
        for (c, f) in cols.iter().zip(&frac) {
            for (ui, ci) in u.iter_mut().zip(c) {
                *ui += f * Rational::from_integer(ci.clone());
            }
        }
        let u: Vec<BigInt> = u.iter().map(|x| x.to_integer()).collect();
        return Ok(HomogeneousVector(u).primitive().to_point());
    }
    Err(Error::Hypothesis("simplex is already regular".into()))
}

pub fn desingularize(k: &RationalComplex) -> Result<RationalComplex> {
    desingularize_with_budget(k, DEFAULT_BLOW_UP_BUDGET)
}

/// Regular subdivision of `k` by stellar subdivisions only, so every
/// simplex of `k` stays a union of output simplexes.
pub fn desingularize_with_budget(k: &RationalComplex, budget: u64) -> Result<RationalComplex> {
    Ok(desingularize_traced(k, budget)?.0)
}

pub fn desingularize_traced(
    k: &RationalComplex,
    budget: u64,
) -> Result<(RationalComplex, Vec<Point>)> {
    let mut cur = k.compact();
    let mut centers = Vec::new();
    let mut score = complexity(&cur)?;
    for _ in 0..budget {
        if score.0.is_one() {
            return Ok((cur, centers));
        }
        let worst = cur
            .simplexes()
            .iter()
            .filter(|s| multiplicity(&cur.points(s)) == score.0)
            .min_by_key(|s| {
                let mut pts = cur.owned_points(s);
                pts.sort();
                pts
            })
            .expect("some simplex attains the maximum")
            .clone();
        let pts = cur.owned_points(&worst);
        let mut edges: Vec<(Point, Point)> = Vec::new();
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                edges.push((a.clone(), b.clone()));
            }
        }
        edges.sort_by(|x, y| EdgeOrdering::compare((&x.0, &x.1), (&y.0, &y.1)));
        let mut step = None;
        for (a, b) in &edges {
            let c = HomogeneousVector::sum([&a.homogeneous(), &b.homogeneous()])
                .primitive()
                .to_point();
            let trial = cur.blow_up(&c)?;
            let s = complexity(&trial)?;
            if s < score {
                step = Some((trial, c, s));
                break;
            }
        }
        let (next, c, s) = match step {
            Some(x) => x,
            None => {
                let refs: Vec<&Point> = pts.iter().collect();
                let c = parallelepiped_point(&refs)?;
                let trial = cur.blow_up(&c)?;
                let s = complexity(&trial)?;
                if s >= score {
                    return Err(Error::StrategyGap(centers.len() as u64));
                }
                (trial, c, s)
            }
        };
        cur = next;
        centers.push(c);
        score = s;
    }
    if score.0.is_one() {
        return Ok((cur, centers));
    }
    Err(Error::StrategyGap(budget))
}

/// Farey blow-ups inside the regular simplex `t` until `v` is a vertex.
/// Each step uses the first edge, in [`EdgeOrdering`], of the current
/// carrier of `v` whose denominator sum is at most `den(v)`.
pub fn reach_vertex(t: &[Point], v: &Point) -> Result<BlowUpTrace> {
    let refs: Vec<&Point> = t.iter().collect();
    if !is_regular_simplex(&refs) {
        return Err(Error::NotRegular);
    }
    let start = RationalComplex::simplex(t)?;
    reach_vertex_in(&start, v)
}

/// As [`reach_vertex`], starting from any regular complex containing `v`.
pub fn reach_vertex_in(k: &RationalComplex, v: &Point) -> Result<BlowUpTrace> {
    let den = v.denominator();
    let mut cur = k.clone();
    let mut trace = BlowUpTrace {
        centers: Vec::new(),
        complexes: vec![cur.clone()],
    };
    loop {
        let carrier = cur.carrier(v)?;
        if carrier.len() == 1 {
            return Ok(trace);
        }
        let pts = cur.owned_points(&carrier);
        let mut best: Option<(EdgeKey, Point, Point)> = None;
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                let key = EdgeKey::new(a, b);
                if key.den_sum > den {
                    continue;
                }
                if best.as_ref().is_none_or(|(k, _, _)| key < *k) {
                    best = Some((key, a.clone(), b.clone()));
                }
            }
        }
        let (_, a, b) = best.ok_or(Error::NotRegular)?;
        let c = farey_mediant(&[&a, &b])?;
        cur = cur.blow_up(&c)?;
        trace.centers.push(c);
        trace.complexes.push(cur.clone());
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisiblePoint {
    /// A point of the simplex whose denominator divides `l`, if any.
    pub point: Option<Point>,
    /// Every `l >= threshold` admits such a point.
    pub threshold: BigInt,
}

/// Smallest `k` such that every integer `>= k` is a nonnegative integer
/// combination of `dens` (which must have gcd 1).
pub fn representability_threshold(dens: &[BigInt]) -> Result<BigInt> {
    let small: Option<Vec<u64>> = dens.iter().map(|d| d.to_u64()).collect();
    let small = small.filter(|v| v.iter().all(|&d| (1..=1_000_000).contains(&d)));
    let Some(ds) = small else {
        return Err(Error::Hypothesis(
            "denominators too large for the threshold search".into(),
        ));
    };
    let g = ds.iter().fold(0u64, |acc, &d| acc.gcd(&d));
    if g != 1 {
        return Err(Error::Hypothesis(
            "vertex denominators are not coprime".into(),
        ));
    }
    let a = *ds.iter().min().expect("nonempty") as usize;
    // Shortest representable value in each residue class mod a.
    let mut best = vec![u64::MAX; a];
    best[0] = 0;
    let mut done = vec![false; a];
    for _ in 0..a {
        let Some(r) = (0..a)
            .filter(|&r| !done[r] && best[r] != u64::MAX)
            .min_by_key(|&r| best[r])
        else {
            break;
        };
        done[r] = true;
        for &d in &ds {
            let nr = (r + d as usize) % a;
            let nv = best[r] + d;
            if nv < best[nr] {
                best[nr] = nv;
            }
        }
    }
    let largest_gap = best.iter().max().copied().unwrap_or(0) as i128 - a as i128;
    Ok(BigInt::from((largest_gap + 1).max(1)))
}

/// A point `v` of the regular simplex `t` with `den(v) | l`, taken on the
/// ray of `sum m_i ṽ_i` for nonnegative integers with `sum m_i den(v_i) = l`.
/// Points with denominator exactly `l` are preferred.
pub fn find_divisible_point(t: &[Point], l: &BigInt) -> Result<DivisiblePoint> {
    let refs: Vec<&Point> = t.iter().collect();
    if !is_regular_simplex(&refs) {
        return Err(Error::NotRegular);
    }
    if !denominator_gcd(&refs).is_one() {
        return Err(Error::Hypothesis(
            "vertex denominators are not coprime".into(),
        ));
    }
    if !l.is_positive() {
        return Err(Error::Hypothesis("l must be positive".into()));
    }
    let dens: Vec<BigInt> = t.iter().map(Point::denominator).collect();
    let threshold = representability_threshold(&dens)?;
    let hs: Vec<HomogeneousVector> = t.iter().map(Point::homogeneous).collect();
    let mut fallback = None;
    let mut found = None;
    let mut coeffs = Vec::new();
    search_representation(&dens, l, &mut coeffs, &mut |m| {
        let g = m.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let q = combine(&hs, m);
        if g.is_one() {
            found = Some(q.to_point());
            true
        } else {
            if fallback.is_none() {
                fallback = Some(q.primitive().to_point());
            }
            false
        }
    });
    Ok(DivisiblePoint {
        point: found.or(fallback),
        threshold,
    })
}

fn combine(hs: &[HomogeneousVector], m: &[BigInt]) -> HomogeneousVector {
    let n = hs[0].0.len();
    let mut out = vec![BigInt::zero(); n];
    for (h, c) in hs.iter().zip(m) {
        for (o, e) in out.iter_mut().zip(&h.0) {
            *o += c * e;
        }
    }
    HomogeneousVector(out)
}

/// Enumerates nonnegative solutions of `sum m_i d_i = rest`, leading
/// coefficients largest first; stops when `visit` returns true.
fn search_representation(
    dens: &[BigInt],
    rest: &BigInt,
    prefix: &mut Vec<BigInt>,
    visit: &mut dyn FnMut(&[BigInt]) -> bool,
) -> bool {
    let i = prefix.len();
    if i + 1 == dens.len() {
        if (rest % &dens[i]).is_zero() {
            prefix.push(rest / &dens[i]);
            let stop = visit(prefix);
            prefix.pop();
            return stop;
        }
        return false;
    }
    let mut c = rest / &dens[i];
    loop {
        prefix.push(c.clone());
        let stop = search_representation(dens, &(rest - &c * &dens[i]), prefix, visit);
        prefix.pop();
        if stop {
            return true;
        }
        if c.is_zero() {
            return false;
        }
        c -= 1;
    }
}

/// A point `z` of the regular edge `conv(v, w)` with `m | den(z)`, for
/// coprime `den(v) = a`, `den(w) = b`.
pub fn find_multiple_on_edge(v: &Point, w: &Point, m: &BigInt) -> Result<Point> {
    let a = v.denominator();
    let b = w.denominator();
    if !a.gcd(&b).is_one() {
        return Err(Error::Hypothesis(
            "endpoint denominators are not coprime".into(),
        ));
    }
    if !is_regular_simplex(&[v, w]) {
        return Err(Error::NotRegular);
    }
    if !m.is_positive() {
        return Err(Error::Hypothesis("m must be positive".into()));
    }
    if (&a % m).is_zero() {
        return Ok(v.clone());
    }
    if (&b % m).is_zero() {
        return Ok(w.clone());
    }
    // q a - p b = 1 with 0 <= p < a, 0 < q <= b.
    let mut q = a.extended_gcd(&b).x.mod_floor(&b);
    if q.is_zero() {
        q = b.clone();
    }
    let p = (&q * &a - BigInt::one()) / &b;
    let (vt, wt) = (v.homogeneous(), w.homogeneous());
    let mut d = m.clone();
    loop {
        let mut alpha = &d / &a;
        loop {
            let rest = &d - &alpha * &a;
            if (&rest % &b).is_zero() {
                let beta = &rest / &b;
                if alpha.gcd(&beta).is_one() {
                    // s = alpha (p, a) + beta (q, b) in [p/a, q/b]; the
                    // Z-homeomorphism onto conv(v, w) is linear on
                    // homogeneous coordinates.
                    let s = HomogeneousVector(vec![&alpha * &p + &beta * &q, d.clone()]);
                    debug_assert_eq!(s.content(), BigInt::one());
                    let z = combine(&[vt.clone(), wt.clone()], &[alpha.clone(), beta.clone()]);
                    return Ok(z.to_point());
                }
            }
            if alpha.is_zero() {
                break;
            }
            alpha -= 1;
        }
        d += m;
    }
}

pub fn in_simplex(t: &[Point], x: &Point) -> bool {
    let refs: Vec<&Point> = t.iter().collect();
    locate(&refs, x).is_some()
}
