//! Retractions of `[0,1]^u` onto a cone `oQ`, for `Q` with vertices
//! `e_j / d_j`.
//!
//! The cube is first folded onto the simplex `{x >= 0, sum x_j <= 1}` by
//! `y_k = min(S_k, 1) - min(S_{k-1}, 1)` with `S_k = x_1 + ... + x_k`, then
//! onto `{x >= 0, sum d_j x_j <= 1}` by maps `x_j -> min(x_j, 1 - R - c x_j)`
//! raising one coefficient at a time. When `Q` is a proper subcomplex of
//! the simplex on all its vertices, cone collapses `x_F -= min_F x` along a
//! collapse of that simplex onto `Q` finish the job; otherwise a bounded
//! search over vertex assignments on a triangulation through `oQ` is used.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{Point, Rational};
use crate::collapse::{elementary_collapse, find_collapse_to, CollapseOutcome};
use crate::complex::{RationalComplex, Simplex};
use crate::desingularize::{desingularize, in_simplex};
use crate::error::{Error, Result};
use crate::geometry::{cut_functions, locate, AffineFn};
use crate::regularity::farey_blow_up;
use crate::zmap::{
    cellwise, compose, extend_vertex_map, verify_retraction, IntegerAffinePiece,
    RetractionCertificate, ZMap,
};

use super::chain::cone_stage;

#[derive(Clone, Debug)]
pub enum StarRetraction {
    /// `map` is the composite of `factors`, applied first to last.
    Found {
        map: ZMap,
        factors: Vec<ZMap>,
        method: String,
        certificate: Option<Box<RetractionCertificate>>,
    },
    NotFound {
        budget: u64,
        reason: String,
    },
}

impl StarRetraction {
    pub fn map(&self) -> Option<&ZMap> {
        match self {
            StarRetraction::Found { map, .. } => Some(map),
            StarRetraction::NotFound { .. } => None,
        }
    }
}

fn sum_fn(u: usize, coeffs: impl Fn(usize) -> Rational, constant: Rational) -> AffineFn {
    AffineFn {
        linear: (0..u).map(coeffs).collect(),
        constant,
    }
}

fn cut_all(mut k: RationalComplex, cuts: &[AffineFn]) -> RationalComplex {
    for f in cuts {
        if !f.is_constant() {
            k.cut(f);
        }
    }
    k
}

/// `[0,1]^u` onto the standard simplex.
pub fn truncation(u: usize) -> Result<ZMap> {
    let partial = |k: usize| {
        sum_fn(
            u,
            move |i| {
                if i < k {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            },
            -Rational::one(),
        )
    };
    let cuts: Vec<AffineFn> = (2..=u).map(partial).collect();
    let domain = cut_all(RationalComplex::kuhn_cube(u), &cuts);
    cellwise(&domain, u, |pts| {
        let b = Point::barycenter(pts);
        // a_k = min(S_k, 1) as (row, constant).
        let a = |k: usize| -> (Vec<BigInt>, BigInt) {
            if k == 0 {
                (vec![BigInt::zero(); u], BigInt::zero())
            } else if partial(k).eval(&b) < Rational::zero() {
                (
                    (0..u).map(|i| BigInt::from((i < k) as i64)).collect(),
                    BigInt::zero(),
                )
            } else {
                (vec![BigInt::zero(); u], BigInt::one())
            }
        };
        let mut m = Vec::with_capacity(u);
        let mut c = Vec::with_capacity(u);
        for k in 1..=u {
            let (hi, hc) = a(k);
            let (lo, lc) = a(k - 1);
            m.push(hi.iter().zip(&lo).map(|(x, y)| x - y).collect());
            c.push(hc - lc);
        }
        IntegerAffinePiece { m, b: c }
    })
}

fn weighted_simplex(c: &[BigInt]) -> Result<RationalComplex> {
    let u = c.len();
    let mut pts = vec![Point::origin(u)];
    pts.extend((0..u).map(|i| Point::scaled_unit(u, i, &c[i])));
    RationalComplex::simplex(&pts)
}

/// `{x >= 0, c.x <= 1}` onto the same set with `c_j` raised by one.
pub fn fold(c: &[BigInt], j: usize) -> Result<ZMap> {
    let u = c.len();
    let f = sum_fn(
        u,
        |i| Rational::from_integer(if i == j { &c[i] + 1 } else { c[i].clone() }),
        -Rational::one(),
    );
    let domain = cut_all(weighted_simplex(c)?, std::slice::from_ref(&f));
    cellwise(&domain, u, |pts| {
        let mut piece = IntegerAffinePiece::identity(u);
        if f.eval(&Point::barycenter(pts)) > Rational::zero() {
            piece.m[j] = c.iter().map(|x| -x).collect();
            piece.b[j] = BigInt::one();
        }
        piece
    })
}

/// Retraction of `o·K` onto `o·(K minus the free pair)` for `K` with
/// vertices on the coordinate axes.
pub fn cone_collapse(k: &RationalComplex, coface: &Simplex, face: &Simplex) -> Result<ZMap> {
    let u = k.ambient_dim();
    let o = Point::origin(u);
    let axis = |v: usize| {
        (0..u)
            .find(|&i| !k.vertex(v).0[i].is_zero())
            .expect("nonzero vertex")
    };
    let fs: Vec<usize> = face.vertices().iter().map(|&v| axis(v)).collect();
    let mut cuts = Vec::new();
    for (x, &a) in fs.iter().enumerate() {
        for &b in &fs[x + 1..] {
            cuts.push(sum_fn(
                u,
                |i| {
                    if i == a {
                        Rational::one()
                    } else if i == b {
                        -Rational::one()
                    } else {
                        Rational::zero()
                    }
                },
                Rational::zero(),
            ));
        }
    }
    let domain = cut_all(cone_stage(&RationalComplex::empty(u), k)?, &cuts);
    let mut cone = vec![o];
    cone.extend(k.owned_points(coface));
    cellwise(&domain, u, |pts| {
        let mut piece = IntegerAffinePiece::identity(u);
        if pts.iter().all(|x| in_simplex(&cone, x)) {
            let b = Point::barycenter(pts);
            let jstar = *fs
                .iter()
                .min_by(|&&x, &&y| b.0[x].cmp(&b.0[y]))
                .expect("nonempty face");
            for &a in &fs {
                piece.m[a][jstar] -= 1;
            }
        }
        piece
    })
}

#[derive(Clone, Debug)]
pub struct StarOptions {
    pub budget: u64,
    pub candidate: Option<ZMap>,
}

impl Default for StarOptions {
    fn default() -> Self {
        StarOptions {
            budget: 1_000_000,
            candidate: None,
        }
    }
}

/// A verified retraction of `[0,1]^u` onto `oQ`.
pub fn star_retraction(q: &RationalComplex, options: &StarOptions) -> Result<StarRetraction> {
    let u = q.ambient_dim();
    let target = cone_stage(&RationalComplex::empty(u), q)?;
    let cube = RationalComplex::kuhn_cube(u);
    let accept = |factors: Vec<ZMap>, method: &str| -> Result<Option<StarRetraction>> {
        let mut map = factors[0].clone();
        for f in &factors[1..] {
            map = compose(f, &map)?;
        }
        let Some(cert) = verify_retraction(&map).certificate() else {
            return Ok(None);
        };
        Ok(
            (cert.image.same_support(&target) && map.domain().is_subdivision_of(&cube)).then(
                || StarRetraction::Found {
                    map,
                    factors,
                    method: method.into(),
                    certificate: Some(Box::new(cert)),
                },
            ),
        )
    };
    let not_found = |reason: &str| StarRetraction::NotFound {
        budget: options.budget,
        reason: reason.into(),
    };
    if let Some(c) = &options.candidate {
        if let Some(found) = accept(vec![c.clone()], "candidate")? {
            return Ok(found);
        }
    }
    if target.same_support(&cube) {
        return Ok(StarRetraction::Found {
            map: ZMap::identity(cube.clone()),
            factors: vec![ZMap::identity(cube)],
            method: "identity".into(),
            certificate: None,
        });
    }
    let used: Vec<usize> = q.used_vertices().into_iter().collect();
    if used.len() != u {
        return Err(Error::Hypothesis(
            "Q must have one vertex per coordinate".into(),
        ));
    }
    let mut dens = vec![BigInt::zero(); u];
    for &v in &used {
        let p = q.vertex(v);
        let nz: Vec<usize> = (0..u).filter(|&i| !p.0[i].is_zero()).collect();
        if nz.len() != 1 || !p.0[nz[0]].numer().is_one() || !dens[nz[0]].is_zero() {
            return Err(Error::Hypothesis(format!(
                "vertex {p} is not of the form e_j/d"
            )));
        }
        dens[nz[0]] = p.denominator();
    }

    let mut factors = vec![truncation(u)?];
    let mut c = vec![BigInt::one(); u];
    let mut method = String::from("truncation");
    for j in 0..u {
        while c[j] < dens[j] {
            factors.push(fold(&c, j)?);
            c[j] += 1;
            method = "truncation+folds".into();
        }
    }
    let full = weighted_simplex(&dens)?;
    if target.same_support(&full) {
        return Ok(accept(factors, &method)?
            .unwrap_or_else(|| not_found("folded map failed verification")));
    }

    let top = RationalComplex::simplex(
        &(0..u)
            .map(|i| Point::scaled_unit(u, i, &dens[i]))
            .collect::<Vec<_>>(),
    )?;
    let keep: Vec<Simplex> = q
        .simplexes()
        .iter()
        .map(|s| {
            Simplex::new(
                q.points(s)
                    .iter()
                    .map(|p| top.vertex_id(p).expect("same vertices"))
                    .collect(),
            )
        })
        .collect();
    if let CollapseOutcome::Found(seq) = find_collapse_to(&top, &keep, options.budget) {
        let mut collapsed = factors.clone();
        let mut cur = top.clone();
        for step in &seq.steps {
            collapsed.push(cone_collapse(&cur, &step.coface, &step.face)?);
            cur = elementary_collapse(&cur, &step.coface, &step.face)?;
        }
        if let Some(found) = accept(collapsed, &format!("{method}+cone-collapses"))? {
            return Ok(found);
        }
    }

    match assignment_search(&full, &target, options.budget)? {
        Some(sigma) => {
            factors.push(sigma);
            Ok(accept(factors, "assignment-search")?
                .unwrap_or_else(|| not_found("searched map failed verification")))
        }
        None => Ok(not_found("no vertex assignment found within budget")),
    }
}

/// Retraction of `|outer|` onto `|target|` that is linear on a regular
/// triangulation through `target`, found by backtracking over vertex
/// images with dividing denominators.
pub fn assignment_search(
    outer: &RationalComplex,
    target: &RationalComplex,
    budget: u64,
) -> Result<Option<ZMap>> {
    let u = outer.ambient_dim();
    let mut k = outer.clone();
    for t in target.simplexes() {
        for f in cut_functions(&target.points(t)) {
            k.cut(&f);
        }
    }
    let mut k = desingularize(&k)?;
    let within = |pts: &[&Point]| {
        target.simplexes().iter().any(|t| {
            let tp = target.points(t);
            pts.iter().all(|y| locate(&tp, y).is_some())
        })
    };
    // Cells outside `target` with all vertices on it get an interior vertex.
    loop {
        let notch = k.simplexes().iter().find(|s| {
            let pts = k.points(s);
            pts.iter().all(|x| target.contains_point(x)) && !within(&pts)
        });
        let Some(s) = notch.cloned() else { break };
        k = farey_blow_up(&k, &s)?;
    }
    let nv = k.vertices().len();
    let inside: Vec<bool> = (0..nv)
        .map(|v| target.contains_point(k.vertex(v)))
        .collect();
    let pool: Vec<usize> = (0..nv).filter(|&v| inside[v]).collect();

    let mut order: Vec<usize> = Vec::new();
    let mut placed = vec![false; nv];
    for s in k.simplexes() {
        for &v in s.vertices() {
            if !placed[v] && !inside[v] {
                placed[v] = true;
                order.push(v);
            }
        }
    }
    let candidates: Vec<Vec<usize>> = order
        .iter()
        .map(|&v| {
            let d = k.vertex(v).denominator();
            let x = k.vertex(v);
            let mut c: Vec<usize> = pool
                .iter()
                .copied()
                .filter(|&w| d.is_multiple_of(&k.vertex(w).denominator()))
                .collect();
            c.sort_by_key(|&w| {
                x.0.iter()
                    .zip(&k.vertex(w).0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(Rational::zero(), |s, t| s + t)
            });
            c
        })
        .collect();
    // Simplexes checked once their last vertex in `order` is assigned.
    let position: Vec<Option<usize>> = {
        let mut p = vec![None; nv];
        for (i, &v) in order.iter().enumerate() {
            p[v] = Some(i);
        }
        p
    };
    let mut due: Vec<Vec<usize>> = vec![Vec::new(); order.len()];
    for (si, s) in k.simplexes().iter().enumerate() {
        if let Some(last) = s.vertices().iter().filter_map(|&v| position[v]).max() {
            due[last].push(si);
        }
    }
    let mut image: Vec<usize> = (0..nv).collect();
    let mut nodes = 0u64;
    let ok = backtrack(
        &k,
        target,
        &order,
        &candidates,
        &due,
        &mut image,
        0,
        &mut nodes,
        budget,
    );
    if !ok {
        return Ok(None);
    }
    let table: std::collections::HashMap<&Point, &Point> =
        (0..nv).map(|v| (k.vertex(v), k.vertex(image[v]))).collect();
    extend_vertex_map(&k, u, |p| table[p].clone()).map(Some)
}

#[allow(clippy::too_many_arguments)]
fn backtrack(
    k: &RationalComplex,
    target: &RationalComplex,
    order: &[usize],
    candidates: &[Vec<usize>],
    due: &[Vec<usize>],
    image: &mut Vec<usize>,
    i: usize,
    nodes: &mut u64,
    budget: u64,
) -> bool {
    if i == order.len() {
        return true;
    }
    for &w in &candidates[i] {
        *nodes += 1;
        if *nodes > budget {
            return false;
        }
        image[order[i]] = w;
        let fits = due[i].iter().all(|&si| {
            let imgs: Vec<&Point> = k.simplexes()[si]
                .vertices()
                .iter()
                .map(|&v| k.vertex(image[v]))
                .collect();
            target.simplexes().iter().any(|t| {
                let tp = target.points(t);
                imgs.iter().all(|y| locate(&tp, y).is_some())
            })
        });
        if fits
            && backtrack(
                k,
                target,
                order,
                candidates,
                due,
                image,
                i + 1,
                nodes,
                budget,
            )
        {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(u: usize, i: usize, d: i64) -> Point {
        Point::scaled_unit(u, i, &BigInt::from(d))
    }

    #[test]
    fn truncation_is_the_min_formula() {
        let t = truncation(2).unwrap();
        for (x, y) in [
            ((1, 2), (1, 3)),
            ((3, 4), (1, 2)),
            ((1, 1), (1, 1)),
            ((0, 1), (1, 1)),
        ] {
            let p = Point::from_fracs(&[x, y]);
            let a = Rational::new(x.0.into(), x.1.into());
            let b = Rational::new(y.0.into(), y.1.into());
            let second = std::cmp::min(b, Rational::one() - &a);
            assert_eq!(t.eval(&p).unwrap(), Point(vec![a, second]));
        }
        assert!(verify_retraction(&t).is_retraction());
    }

    #[test]
    fn unit_interval_is_identity() {
        let q = RationalComplex::simplex(&[e(1, 0, 1)]).unwrap();
        match star_retraction(&q, &StarOptions::default()).unwrap() {
            StarRetraction::Found { method, .. } => assert_eq!(method, "identity"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn weighted_simplex_by_folds() {
        let q = RationalComplex::simplex(&[e(2, 0, 1), e(2, 1, 3)]).unwrap();
        let r = star_retraction(&q, &StarOptions::default()).unwrap();
        assert!(r.map().is_some());
    }

    #[test]
    fn path_by_cone_collapses() {
        let q = RationalComplex::from_simplices(
            3,
            &[vec![e(3, 0, 1), e(3, 1, 1)], vec![e(3, 1, 1), e(3, 2, 1)]],
        )
        .unwrap();
        match star_retraction(&q, &StarOptions::default()).unwrap() {
            StarRetraction::Found { method, .. } => assert_eq!(method, "truncation+cone-collapses"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn path_with_denominators() {
        let q = RationalComplex::from_simplices(
            3,
            &[vec![e(3, 0, 1), e(3, 1, 2)], vec![e(3, 1, 2), e(3, 2, 3)]],
        )
        .unwrap();
        match star_retraction(&q, &StarOptions::default()).unwrap() {
            StarRetraction::Found { method, .. } => {
                assert_eq!(method, "truncation+folds+cone-collapses")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn assignment_search_on_a_leg() {
        let tri = RationalComplex::standard_simplex(2);
        let leg = RationalComplex::simplex(&[e(2, 0, 1), Point::origin(2)]).unwrap();
        let sigma = assignment_search(&tri, &leg, 100).unwrap().unwrap();
        let cert = verify_retraction(&sigma).certificate().unwrap();
        assert!(cert.image.same_support(&leg));
        let both = RationalComplex::from_simplices(
            2,
            &[
                vec![e(2, 0, 1), Point::origin(2)],
                vec![e(2, 1, 1), Point::origin(2)],
            ],
        )
        .unwrap();
        assert!(assignment_search(&tri, &both, 1000).unwrap().is_none());
    }

    #[test]
    fn candidate_is_verified() {
        let q = RationalComplex::simplex(&[e(2, 0, 1), e(2, 1, 1)]).unwrap();
        let bad = ZMap::identity(RationalComplex::kuhn_cube(2));
        let r = star_retraction(
            &q,
            &StarOptions {
                budget: 10,
                candidate: Some(bad),
            },
        )
        .unwrap();
        match r {
            StarRetraction::Found { method, .. } => assert_eq!(method, "truncation"),
            other => panic!("{other:?}"),
        }
    }
}
