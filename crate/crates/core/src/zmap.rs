//! Integer piecewise affine maps over rational triangulations.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{Point, Rational};
use crate::complex::{RationalComplex, Simplex};
use crate::desingularize::desingularize;
use crate::error::{Error, Result};
use crate::geometry::{cut_functions, locate, strictly_one_sided, AffineFn, BBox};
use crate::linalg::{extend_columns, inverse, to_int, to_rat, BasisExtension, IntMatrix};
use crate::regularity::homogeneous_columns;

/// `x -> m x + b` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerAffinePiece {
    pub m: IntMatrix,
    pub b: Vec<BigInt>,
}

impl IntegerAffinePiece {
    pub fn identity(n: usize) -> Self {
        IntegerAffinePiece {
            m: crate::linalg::identity_int(n),
            b: vec![BigInt::zero(); n],
        }
    }

    pub fn constant(domain_dim: usize, value: Vec<BigInt>) -> Self {
        IntegerAffinePiece {
            m: vec![vec![BigInt::zero(); domain_dim]; value.len()],
            b: value,
        }
    }

    pub fn apply(&self, x: &Point) -> Point {
        Point(
            self.m
                .iter()
                .zip(&self.b)
                .map(|(row, bi)| {
                    row.iter()
                        .zip(&x.0)
                        .fold(Rational::from_integer(bi.clone()), |acc, (a, c)| {
                            acc + c * Rational::from_integer(a.clone())
                        })
                })
                .collect(),
        )
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &IntegerAffinePiece) -> IntegerAffinePiece {
        let m = crate::linalg::int_mul(&self.m, &inner.m);
        let b = self
            .m
            .iter()
            .zip(&self.b)
            .map(|(row, bi)| {
                row.iter()
                    .zip(&inner.b)
                    .fold(bi.clone(), |acc, (a, c)| acc + a * c)
            })
            .collect();
        IntegerAffinePiece { m, b }
    }

    pub fn codomain_dim(&self) -> usize {
        self.b.len()
    }
}

/// Integer affine map with `m v_i + b = w_i`, for a regular simplex and
/// targets with `den(w_i) | den(v_i)`.
pub fn integer_affine_from_vertices(
    vertices: &[Point],
    targets: &[Point],
) -> Result<IntegerAffinePiece> {
    if vertices.len() != targets.len() || vertices.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: vertices.len(),
            found: targets.len(),
        });
    }
    for (v, w) in vertices.iter().zip(targets) {
        if !crate::arith::divides(&w.denominator(), &v.denominator()) {
            return Err(Error::DivisibilityViolation {
                vertex: v.clone(),
                target: w.clone(),
            });
        }
    }
    let n = vertices[0].dim();
    let m = targets[0].dim();
    let refs: Vec<&Point> = vertices.iter().collect();
    let d = match extend_columns(&homogeneous_columns(&refs)) {
        Ok(BasisExtension::Unimodular(d)) => d,
        _ => return Err(Error::NotRegular),
    };
    // C has columns den(v_i)(w_i, 1), then (0, .., 0, last entry of d_j).
    let k = vertices.len();
    let mut c = vec![vec![BigInt::zero(); n + 1]; m + 1];
    for (i, (v, w)) in vertices.iter().zip(targets).enumerate() {
        let dv = Rational::from_integer(v.denominator());
        for r in 0..m {
            c[r][i] = (&w.0[r] * &dv).to_integer();
        }
        c[m][i] = dv.to_integer();
    }
    for j in k..=n {
        c[m][j] = d[n][j].clone();
    }
    let dinv =
        to_int(&inverse(&to_rat(&d)).expect("unimodular")).expect("unimodular inverse is integral");
    let a = crate::linalg::int_mul(&c, &dinv);
    debug_assert!(a[m][..n].iter().all(Zero::is_zero) && a[m][n].is_one());
    Ok(IntegerAffinePiece {
        m: a[..m].iter().map(|r| r[..n].to_vec()).collect(),
        b: a[..m].iter().map(|r| r[n].clone()).collect(),
    })
}

/// Piecewise map with one integer affine piece per maximal simplex of the
/// domain; `pieces[i]` belongs to `domain.simplexes()[i]`.
#[derive(Clone, Debug)]
pub struct ZMap {
    domain: RationalComplex,
    codomain_dim: usize,
    pieces: Vec<IntegerAffinePiece>,
}

impl ZMap {
    pub fn new(
        domain: RationalComplex,
        codomain_dim: usize,
        pieces: Vec<IntegerAffinePiece>,
    ) -> Result<ZMap> {
        if pieces.len() != domain.simplexes().len() {
            return Err(Error::InvalidComplex(format!(
                "{} pieces for {} simplexes",
                pieces.len(),
                domain.simplexes().len()
            )));
        }
        for p in &pieces {
            if p.codomain_dim() != codomain_dim
                || p.m.iter().any(|r| r.len() != domain.ambient_dim())
            {
                return Err(Error::DimensionMismatch {
                    expected: codomain_dim,
                    found: p.codomain_dim(),
                });
            }
        }
        let map = ZMap {
            domain,
            codomain_dim,
            pieces,
        };
        map.check_continuity()?;
        Ok(map)
    }

    fn check_continuity(&self) -> Result<()> {
        let mut seen: HashMap<usize, Point> = HashMap::new();
        for (s, p) in self.domain.simplexes().iter().zip(&self.pieces) {
            for &v in s.vertices() {
                let y = p.apply(self.domain.vertex(v));
                match seen.get(&v) {
                    Some(prev) if *prev != y => {
                        return Err(Error::Discontinuous(self.domain.vertex(v).clone()))
                    }
                    Some(_) => {}
                    None => {
                        seen.insert(v, y);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn identity(domain: RationalComplex) -> ZMap {
        let n = domain.ambient_dim();
        let pieces = vec![IntegerAffinePiece::identity(n); domain.simplexes().len()];
        ZMap {
            domain,
            codomain_dim: n,
            pieces,
        }
    }

    /// Constant map to an integer point.
    pub fn constant(domain: RationalComplex, value: &Point) -> Result<ZMap> {
        if !value.denominator().is_one() {
            return Err(Error::Hypothesis(
                "constant Z-maps take integer values".into(),
            ));
        }
        let v: Vec<BigInt> = value.0.iter().map(|c| c.to_integer()).collect();
        let pieces =
            vec![IntegerAffinePiece::constant(domain.ambient_dim(), v); domain.simplexes().len()];
        Ok(ZMap {
            codomain_dim: value.dim(),
            domain,
            pieces,
        })
    }

    pub fn domain(&self) -> &RationalComplex {
        &self.domain
    }

    pub fn codomain_dim(&self) -> usize {
        self.codomain_dim
    }

    pub fn pieces(&self) -> &[IntegerAffinePiece] {
        &self.pieces
    }

    pub fn eval(&self, x: &Point) -> Result<Point> {
        if x.dim() != self.domain.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.domain.ambient_dim(),
                found: x.dim(),
            });
        }
        let i = self
            .domain
            .containing_simplex(x)
            .ok_or_else(|| Error::NotInComplex(x.clone()))?;
        Ok(self.pieces[i].apply(x))
    }

    /// Value at a vertex of the domain.
    pub fn vertex_value(&self, id: usize) -> Point {
        let i = self
            .domain
            .simplexes()
            .iter()
            .position(|s| s.contains(id))
            .expect("vertex is used by some simplex");
        self.pieces[i].apply(self.domain.vertex(id))
    }

    /// Same map over a subdivision of the domain; `parents[i]` is the
    /// original simplex containing `k.simplexes()[i]`.
    fn over(&self, k: RationalComplex, parents: &[usize]) -> ZMap {
        let pieces = parents.iter().map(|&p| self.pieces[p].clone()).collect();
        ZMap {
            domain: k,
            codomain_dim: self.codomain_dim,
            pieces,
        }
    }

    /// Subdivides the domain so that the image of every simplex lies in a
    /// single simplex of `target` or meets none of them in its relative
    /// interior.
    fn refine_through(&self, target: &RationalComplex) -> (RationalComplex, Vec<usize>) {
        let mut k = self.domain.clone();
        let mut tags: Vec<usize> = (0..k.simplexes().len()).collect();
        let tboxes: Vec<BBox> = target
            .simplexes()
            .iter()
            .map(|t| BBox::of(&target.points(t)))
            .collect();
        let mut cache: Vec<Option<Vec<AffineFn>>> = vec![None; target.simplexes().len()];
        for (s, simplex) in self.domain.simplexes().iter().enumerate() {
            let piece = &self.pieces[s];
            let mut pulled: Vec<AffineFn> = Vec::new();
            let imgs: Vec<Point> = self
                .domain
                .points(simplex)
                .iter()
                .map(|x| piece.apply(x))
                .collect();
            let irefs: Vec<&Point> = imgs.iter().collect();
            let ibox = BBox::of(&irefs);
            for (ti, (t, tb)) in target.simplexes().iter().zip(&tboxes).enumerate() {
                if !tb.overlaps(&ibox) {
                    continue;
                }
                let fs = cache[ti].get_or_insert_with(|| cut_functions(&target.points(t)));
                let separated = fs.iter().enumerate().any(|(j, f)| {
                    strictly_one_sided(f, &irefs).is_some_and(|o| o.is_lt() || j >= t.len())
                });
                if separated {
                    continue;
                }
                for f in fs.iter() {
                    let g = f.pullback(&piece.m, &piece.b);
                    if !g.is_constant() {
                        let g = g.normalized();
                        if !pulled.contains(&g) {
                            pulled.push(g);
                        }
                    }
                }
            }
            for g in &pulled {
                k.cut_tagged(g, &mut tags, |x| x == s);
            }
        }
        (k, tags)
    }

    /// `outer ∘ self`, defined on a subdivision of the domain of `self`.
    pub fn then(&self, outer: &ZMap) -> Result<ZMap> {
        compose(outer, self)
    }

    /// Ids of domain vertices and their images.
    pub fn vertex_images(&self) -> Vec<(Point, Point)> {
        self.domain
            .used_vertices()
            .into_iter()
            .map(|v| (self.domain.vertex(v).clone(), self.vertex_value(v)))
            .collect()
    }
}

/// Extends a vertex assignment linearly over every simplex of a regular
/// complex.
pub fn extend_vertex_map(
    domain: &RationalComplex,
    codomain_dim: usize,
    f: impl Fn(&Point) -> Point,
) -> Result<ZMap> {
    let mut values: HashMap<usize, Point> = HashMap::new();
    for v in domain.used_vertices() {
        let p = domain.vertex(v);
        let w = f(p);
        if w.dim() != codomain_dim {
            return Err(Error::DimensionMismatch {
                expected: codomain_dim,
                found: w.dim(),
            });
        }
        if !crate::arith::divides(&w.denominator(), &p.denominator()) {
            return Err(Error::DivisibilityViolation {
                vertex: p.clone(),
                target: w,
            });
        }
        values.insert(v, w);
    }
    let mut pieces = Vec::with_capacity(domain.simplexes().len());
    for s in domain.simplexes() {
        let vs = domain.owned_points(s);
        let ws: Vec<Point> = s.vertices().iter().map(|v| values[v].clone()).collect();
        pieces.push(integer_affine_from_vertices(&vs, &ws)?);
    }
    ZMap::new(domain.clone(), codomain_dim, pieces)
}

/// `theta ∘ eta` over a subdivision of the domain of `eta`.
pub fn compose(theta: &ZMap, eta: &ZMap) -> Result<ZMap> {
    if theta.domain.ambient_dim() != eta.codomain_dim {
        return Err(Error::DimensionMismatch {
            expected: theta.domain.ambient_dim(),
            found: eta.codomain_dim,
        });
    }
    let (k, tags) = eta.refine_through(&theta.domain);
    let mut pieces = Vec::with_capacity(k.simplexes().len());
    for (cell, &s) in k.simplexes().iter().zip(&tags) {
        let inner = &eta.pieces[s];
        let imgs: Vec<Point> = k.points(cell).iter().map(|x| inner.apply(x)).collect();
        let host = theta.domain.simplexes().iter().position(|t| {
            let tp = theta.domain.points(t);
            imgs.iter().all(|y| locate(&tp, y).is_some())
        });
        match host {
            Some(t) => pieces.push(theta.pieces[t].after(inner)),
            None => {
                let refs: Vec<&Point> = imgs.iter().collect();
                return Err(Error::ImageNotContained(Point::barycenter(&refs)));
            }
        }
    }
    Ok(ZMap {
        domain: k,
        codomain_dim: theta.codomain_dim,
        pieces,
    })
}

/// Complex whose support is the image of the map.
pub fn image_complex(eta: &ZMap) -> Result<RationalComplex> {
    let mut simplices = Vec::new();
    for (s, piece) in eta.domain.simplexes().iter().zip(&eta.pieces) {
        let imgs: Vec<Point> = eta
            .domain
            .points(s)
            .iter()
            .map(|x| piece.apply(x))
            .collect();
        let hull = RationalComplex::convex_hull(&imgs)?;
        for t in hull.simplexes() {
            simplices.push(hull.owned_points(t));
        }
    }
    RationalComplex::overlay(eta.codomain_dim, &simplices)
}

#[derive(Clone, Debug)]
pub struct RetractionCertificate {
    pub map: ZMap,
    /// The fixed point set, which is also the image.
    pub image: RationalComplex,
    /// The map over a subdivision on which every simplex is sent into a
    /// single simplex of `image`.
    pub refinement: ZMap,
}

#[derive(Clone, Debug)]
pub enum RetractionCheck {
    Retraction(Box<RetractionCertificate>),
    /// `witness` is a point `x` with `σ(σ(x)) != σ(x)`.
    Failure {
        witness: Option<Point>,
        reason: String,
    },
}

impl RetractionCheck {
    pub fn is_retraction(&self) -> bool {
        matches!(self, RetractionCheck::Retraction(_))
    }

    pub fn certificate(self) -> Option<RetractionCertificate> {
        match self {
            RetractionCheck::Retraction(c) => Some(*c),
            RetractionCheck::Failure { .. } => None,
        }
    }
}

/// Fixed point set of a self-map, as a subcomplex of a subdivision of the
/// domain, together with that subdivision.
pub fn fixed_point_complex(sigma: &ZMap) -> Result<(RationalComplex, ZMap)> {
    let n = sigma.domain.ambient_dim();
    if sigma.codomain_dim != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: sigma.codomain_dim,
        });
    }
    let mut k = sigma.domain.clone();
    let mut tags: Vec<usize> = (0..k.simplexes().len()).collect();
    for (s, piece) in sigma.pieces.iter().enumerate() {
        for i in 0..n {
            let linear: Vec<Rational> = (0..n)
                .map(|j| {
                    let mut a = Rational::from_integer(piece.m[i][j].clone());
                    if i == j {
                        a -= Rational::one();
                    }
                    a
                })
                .collect();
            let f = AffineFn {
                linear,
                constant: Rational::from_integer(piece.b[i].clone()),
            };
            if f.is_constant() {
                continue;
            }
            k.cut_tagged(&f, &mut tags, |x| x == s);
        }
    }
    let refined = sigma.over(k, &tags);
    let fixed: Vec<bool> = (0..refined.domain.vertices().len())
        .map(|v| {
            refined
                .domain
                .simplexes()
                .iter()
                .position(|s| s.contains(v))
                .is_some_and(|i| {
                    refined.pieces[i].apply(refined.domain.vertex(v)) == *refined.domain.vertex(v)
                })
        })
        .collect();
    let faces = refined.domain.simplexes().iter().filter_map(|s| {
        let f: Vec<usize> = s.vertices().iter().copied().filter(|&v| fixed[v]).collect();
        (!f.is_empty()).then(|| Simplex::new(f))
    });
    let fix = refined.domain.sub(faces.collect::<Vec<_>>());
    Ok((fix, refined))
}

/// Decides `σ ∘ σ = σ` exactly: the image must lie in the fixed point set.
pub fn verify_retraction(sigma: &ZMap) -> RetractionCheck {
    let (fix, refined) = match fixed_point_complex(sigma) {
        Ok(x) => x,
        Err(e) => {
            return RetractionCheck::Failure {
                witness: None,
                reason: e.to_string(),
            }
        }
    };
    let (k, tags) = refined.refine_through(&fix);
    for (cell, &s) in k.simplexes().iter().zip(&tags) {
        let piece = &refined.pieces[s];
        let pts = k.points(cell);
        let imgs: Vec<Point> = pts.iter().map(|x| piece.apply(x)).collect();
        let inside = fix.simplexes().iter().any(|t| {
            let tp = fix.points(t);
            imgs.iter().all(|y| locate(&tp, y).is_some())
        });
        if !inside {
            return RetractionCheck::Failure {
                witness: Some(Point::barycenter(&pts)),
                reason: "image is not fixed pointwise".into(),
            };
        }
    }
    let refinement = refined.over(k, &tags);
    RetractionCheck::Retraction(Box::new(RetractionCertificate {
        map: sigma.clone(),
        image: fix.compact(),
        refinement,
    }))
}

/// Both composites are the identity on their domains.
pub fn verify_zhomeomorphism(theta: &ZMap, theta_inv: &ZMap) -> bool {
    let is_identity = |m: &ZMap| {
        m.domain
            .simplexes()
            .iter()
            .zip(&m.pieces)
            .all(|(s, p)| m.domain.points(s).iter().all(|x| p.apply(x) == **x))
    };
    match (compose(theta_inv, theta), compose(theta, theta_inv)) {
        (Ok(a), Ok(b)) => is_identity(&a) && is_identity(&b),
        _ => false,
    }
}

/// Regular triangulation of `[0,1]^m` in which the simplexes contained in
/// the support of `q` triangulate it and refine the simplexes of `q`.
pub fn cube_triangulation_through(q: &RationalComplex) -> Result<RationalComplex> {
    let m = q.ambient_dim();
    let mut k = RationalComplex::kuhn_cube(m);
    for t in q.simplexes() {
        for f in cut_functions(&q.points(t)) {
            k.cut(&f);
        }
    }
    desingularize(&k)
}

/// Given a Z-retraction `eta` of `[0,1]^n` onto `P` and a Z-homeomorphism
/// `theta: P -> Q ⊆ [0,1]^m` with inverse `theta_inv`, a Z-retraction of
/// `[0,1]^m` onto `Q`.
pub fn transfer_retraction(eta: &ZMap, theta: &ZMap, theta_inv: &ZMap) -> Result<ZMap> {
    let n = eta.codomain_dim;
    let delta = cube_triangulation_through(&theta_inv.domain)?;
    let origin = Point::origin(n);
    let mu = extend_vertex_map(&delta, n, |v| {
        match theta_inv.domain.containing_simplex(v) {
            Some(_) => theta_inv.eval(v).expect("vertex lies in the domain"),
            None => origin.clone(),
        }
    })?;
    compose(theta, &compose(eta, &mu)?)
}

/// Piecewise description of a map, collected on demand from a cellwise
/// rule on a regular complex.
pub fn cellwise(
    domain: &RationalComplex,
    codomain_dim: usize,
    piece_of: impl Fn(&[&Point]) -> IntegerAffinePiece,
) -> Result<ZMap> {
    let pieces = domain
        .simplexes()
        .iter()
        .map(|s| piece_of(&domain.points(s)))
        .collect();
    ZMap::new(domain.clone(), codomain_dim, pieces)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1(n: i64, d: i64) -> Point {
        Point::from_fracs(&[(n, d)])
    }

    fn unit() -> RationalComplex {
        RationalComplex::simplex(&[p1(0, 1), p1(1, 1)]).unwrap()
    }

    fn tent() -> ZMap {
        let d = unit().blow_up(&p1(1, 2)).unwrap();
        extend_vertex_map(&d, 1, |v| if *v == p1(1, 2) { p1(1, 1) } else { p1(0, 1) }).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn interpolation_examples() {
        let tri = [
            Point::from_ints(&[0, 0]),
            Point::from_ints(&[1, 0]),
            Point::from_ints(&[0, 1]),
        ];
        let id = integer_affine_from_vertices(&tri, &tri).unwrap();
        assert_eq!(id, IntegerAffinePiece::identity(2));
        let p = integer_affine_from_vertices(&[p1(0, 1), p1(1, 2)], &[p1(1, 1), p1(1, 2)]).unwrap();
        assert_eq!(p.m, vec![big(&[-1])]);
        assert_eq!(p.b, big(&[1]));
        let c = integer_affine_from_vertices(&tri, &[p1(1, 1), p1(1, 1), p1(1, 1)]).unwrap();
        assert_eq!(c, IntegerAffinePiece::constant(2, big(&[1])));
        assert!(matches!(
            integer_affine_from_vertices(&[p1(0, 1), p1(1, 1)], &[p1(1, 2), p1(1, 1)]),
            Err(Error::DivisibilityViolation { .. })
        ));
        assert_eq!(
            integer_affine_from_vertices(&[p1(1, 3), p1(2, 3)], &[p1(1, 3), p1(2, 3)]),
            Err(Error::NotRegular)
        );
    }

    #[test]
    fn tent_map() {
        let t = tent();
        let pieces: Vec<(Vec<BigInt>, BigInt)> = t
            .pieces()
            .iter()
            .map(|p| (p.m[0].clone(), p.b[0].clone()))
            .collect();
        assert!(pieces.contains(&(big(&[2]), BigInt::from(0))));
        assert!(pieces.contains(&(big(&[-2]), BigInt::from(2))));
        assert_eq!(t.eval(&p1(1, 4)).unwrap(), p1(1, 2));
        assert_eq!(t.eval(&p1(1, 3)).unwrap(), p1(2, 3));
        assert!(t.eval(&p1(2, 1)).is_err());
        let img = image_complex(&t).unwrap();
        assert!(img.same_as(&unit()));
    }

    #[test]
    fn constant_and_identity() {
        let id = ZMap::identity(unit());
        assert_eq!(id.eval(&p1(3, 7)).unwrap(), p1(3, 7));
        assert!(image_complex(&id).unwrap().same_as(&unit()));
        let c = ZMap::constant(unit(), &p1(1, 1)).unwrap();
        let img = image_complex(&c).unwrap();
        assert_eq!(img.simplexes().len(), 1);
        assert_eq!(img.dim(), Some(0));
        assert!(verify_retraction(&id).is_retraction());
        assert!(verify_retraction(&c).is_retraction());
    }

    #[test]
    fn compositions() {
        let t = tent();
        let id = ZMap::identity(unit());
        let a = compose(&id, &t).unwrap();
        let b = compose(&t, &t).unwrap();
        for d in 1..=12 {
            for n in 0..=d {
                let x = p1(n, d);
                assert_eq!(a.eval(&x).unwrap(), t.eval(&x).unwrap());
                assert_eq!(b.eval(&x).unwrap(), t.eval(&t.eval(&x).unwrap()).unwrap());
            }
        }
        let c0 = ZMap::constant(unit(), &p1(0, 1)).unwrap();
        let c1 = ZMap::constant(unit(), &p1(1, 1)).unwrap();
        assert_eq!(
            compose(&c1, &c0).unwrap().eval(&p1(1, 3)).unwrap(),
            p1(1, 1)
        );
        let half = RationalComplex::simplex(&[p1(0, 1), p1(1, 2)]).unwrap();
        assert!(matches!(
            compose(&ZMap::identity(half), &t),
            Err(Error::ImageNotContained(_))
        ));
    }

    #[test]
    fn tent_is_not_a_retraction() {
        match verify_retraction(&tent()) {
            RetractionCheck::Failure {
                witness: Some(x), ..
            } => {
                let t = tent();
                let y = t.eval(&x).unwrap();
                assert_ne!(t.eval(&y).unwrap(), y);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn projection_onto_an_axis() {
        let sq = RationalComplex::kuhn_cube(2);
        let proj = cellwise(&sq, 2, |_| IntegerAffinePiece {
            m: vec![big(&[1, 0]), big(&[0, 0])],
            b: big(&[0, 0]),
        })
        .unwrap();
        let cert = verify_retraction(&proj).certificate().unwrap();
        let axis =
            RationalComplex::simplex(&[Point::from_ints(&[0, 0]), Point::from_ints(&[1, 0])])
                .unwrap();
        assert!(cert.image.same_support(&axis));
    }

    #[test]
    fn swap_is_a_homeomorphism_but_not_a_retraction() {
        let sq = RationalComplex::kuhn_cube(2);
        let swap = cellwise(&sq, 2, |_| IntegerAffinePiece {
            m: vec![big(&[0, 1]), big(&[1, 0])],
            b: big(&[0, 0]),
        })
        .unwrap();
        assert!(verify_zhomeomorphism(&swap, &swap));
        assert!(!verify_retraction(&swap).is_retraction());
        assert!(!verify_zhomeomorphism(&tent(), &tent()));
        let id = ZMap::identity(unit());
        assert!(verify_zhomeomorphism(&id, &id));
    }

    #[test]
    fn transfer_through_identity() {
        let sq = RationalComplex::kuhn_cube(2);
        let proj = cellwise(&sq, 2, |_| IntegerAffinePiece {
            m: vec![big(&[1, 0]), big(&[0, 0])],
            b: big(&[0, 0]),
        })
        .unwrap();
        let axis =
            RationalComplex::simplex(&[Point::from_ints(&[0, 0]), Point::from_ints(&[1, 0])])
                .unwrap();
        let id = ZMap::identity(axis);
        let r = transfer_retraction(&proj, &id, &id).unwrap();
        let cert = verify_retraction(&r).certificate().unwrap();
        assert!(cert.image.same_support(&id.domain));
        for d in 1..=4 {
            for a in 0..=d {
                let x = Point::from_fracs(&[(a, d), (0, 1)]);
                assert_eq!(r.eval(&x).unwrap(), x);
            }
        }
    }
}
