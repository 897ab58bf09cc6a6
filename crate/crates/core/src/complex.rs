//! Rational simplicial complexes stored by their maximal simplexes.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::arith::{Point, Rational};
use crate::error::{Error, Result};
use crate::geometry::{
    affinely_independent, barycentric, cut_functions, locate, strictly_one_sided, AffineFn, BBox,
};
use crate::linalg::det_rat;

/// Sorted list of vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    pub fn new(mut ids: Vec<usize>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        Simplex(ids)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }

    pub fn without(&self, v: usize) -> Simplex {
        Simplex(self.0.iter().copied().filter(|&w| w != v).collect())
    }

    pub fn with(&self, v: usize) -> Simplex {
        let mut ids = self.0.clone();
        ids.push(v);
        Simplex::new(ids)
    }

    pub fn facets(&self) -> Vec<Simplex> {
        if self.0.len() <= 1 {
            return Vec::new();
        }
        self.0.iter().map(|&v| self.without(v)).collect()
    }

    /// All nonempty faces, including the simplex itself.
    pub fn faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        (1u64..(1 << n))
            .map(|mask| {
                Simplex(
                    (0..n)
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| self.0[i])
                        .collect(),
                )
            })
            .collect()
    }

    pub fn intersection(&self, other: &Simplex) -> Simplex {
        Simplex(
            self.0
                .iter()
                .copied()
                .filter(|v| other.contains(*v))
                .collect(),
        )
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Two maximal simplexes whose intersection is not a common face, or a
/// simplex that is not a simplex at all.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexViolation {
    pub first: Simplex,
    pub second: Option<Simplex>,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct RationalComplex {
    ambient_dim: usize,
    vertices: Vec<Point>,
    index: HashMap<Point, usize>,
    simplexes: Vec<Simplex>,
}

impl RationalComplex {
    pub fn empty(ambient_dim: usize) -> Self {
        RationalComplex {
            ambient_dim,
            vertices: Vec::new(),
            index: HashMap::new(),
            simplexes: Vec::new(),
        }
    }

    /// Builds a complex from a vertex table and a list of simplexes given
    /// by vertex ids; duplicate points are merged and non-maximal simplexes
    /// dropped. Geometry is not validated here, see [`RationalComplex::validate`].
    pub fn from_parts(
        ambient_dim: usize,
        vertices: Vec<Point>,
        simplexes: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let mut k = Self::empty(ambient_dim);
        let mut remap = Vec::with_capacity(vertices.len());
        for v in vertices {
            if v.dim() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: v.dim(),
                });
            }
            remap.push(k.add_vertex(v));
        }
        for s in simplexes {
            if s.is_empty() {
                return Err(Error::InvalidComplex("empty simplex".into()));
            }
            let mut ids = Vec::with_capacity(s.len());
            for i in s {
                let id = *remap
                    .get(i)
                    .ok_or_else(|| Error::InvalidComplex(format!("vertex id {i} out of range")))?;
                ids.push(id);
            }
            k.add_simplex(Simplex::new(ids));
        }
        Ok(k)
    }

    /// Complex generated by simplexes given as point lists.
    pub fn from_simplices(ambient_dim: usize, simplices: &[Vec<Point>]) -> Result<Self> {
        let mut k = Self::empty(ambient_dim);
        for s in simplices {
            let mut ids = Vec::with_capacity(s.len());
            for p in s {
                if p.dim() != ambient_dim {
                    return Err(Error::DimensionMismatch {
                        expected: ambient_dim,
                        found: p.dim(),
                    });
                }
                ids.push(k.add_vertex(p.clone()));
            }
            k.add_simplex(Simplex::new(ids));
        }
        Ok(k)
    }

    /// A single simplex together with its faces.
    pub fn simplex(points: &[Point]) -> Result<Self> {
        let dim = points.first().map_or(0, |p| p.dim());
        let k = Self::from_simplices(dim, &[points.to_vec()])?;
        let refs: Vec<&Point> = points.iter().collect();
        if !affinely_independent(&refs) {
            return Err(Error::InvalidComplex(
                "vertices are affinely dependent".into(),
            ));
        }
        Ok(k)
    }

    /// `conv(o, e_1, ..., e_n)`.
    pub fn standard_simplex(n: usize) -> Self {
        let mut pts = vec![Point::origin(n)];
        pts.extend((0..n).map(|i| Point::scaled_unit(n, i, &One::one())));
        Self::simplex(&pts).expect("standard simplex is a simplex")
    }

    /// Kuhn (Freudenthal) triangulation of `[0,1]^n`.
    pub fn kuhn_cube(n: usize) -> Self {
        let mut perms: Vec<Vec<usize>> = vec![vec![]];
        for k in 0..n {
            let mut next = Vec::new();
            for p in &perms {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, k);
                    next.push(q);
                }
            }
            perms = next;
        }
        let simplices: Vec<Vec<Point>> = perms
            .iter()
            .map(|perm| {
                let mut cur = vec![0i64; n];
                let mut pts = vec![Point::from_ints(&cur)];
                for &i in perm {
                    cur[i] = 1;
                    pts.push(Point::from_ints(&cur));
                }
                pts
            })
            .collect();
        Self::from_simplices(n, &simplices).expect("Kuhn simplexes are well formed")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, id: usize) -> &Point {
        &self.vertices[id]
    }

    pub fn vertex_id(&self, p: &Point) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Maximal simplexes.
    pub fn simplexes(&self) -> &[Simplex] {
        &self.simplexes
    }

    pub fn is_empty(&self) -> bool {
        self.simplexes.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.simplexes.iter().map(Simplex::dim).max()
    }

    pub fn points(&self, s: &Simplex) -> Vec<&Point> {
        s.0.iter().map(|&i| &self.vertices[i]).collect()
    }

    pub fn owned_points(&self, s: &Simplex) -> Vec<Point> {
        s.0.iter().map(|&i| self.vertices[i].clone()).collect()
    }

    pub fn add_vertex(&mut self, p: Point) -> usize {
        if let Some(&i) = self.index.get(&p) {
            return i;
        }
        let i = self.vertices.len();
        self.index.insert(p.clone(), i);
        self.vertices.push(p);
        i
    }

    /// Inserts a simplex, keeping only maximal ones.
    pub fn add_simplex(&mut self, s: Simplex) {
        if self.simplexes.iter().any(|t| s.is_face_of(t)) {
            return;
        }
        self.simplexes.retain(|t| !t.is_face_of(&s));
        self.simplexes.push(s);
    }

    /// Every simplex of the complex (faces included).
    pub fn all_faces(&self) -> BTreeSet<Simplex> {
        self.simplexes.iter().flat_map(|s| s.faces()).collect()
    }

    pub fn faces_of_dim(&self, d: usize) -> BTreeSet<Simplex> {
        self.all_faces()
            .into_iter()
            .filter(|s| s.dim() == d && !s.is_empty())
            .collect()
    }

    pub fn edges(&self) -> BTreeSet<Simplex> {
        let mut out = BTreeSet::new();
        for s in &self.simplexes {
            for (i, &a) in s.0.iter().enumerate() {
                for &b in &s.0[i + 1..] {
                    out.insert(Simplex(vec![a, b]));
                }
            }
        }
        out
    }

    /// Ids of vertices appearing in some simplex.
    pub fn used_vertices(&self) -> BTreeSet<usize> {
        self.simplexes
            .iter()
            .flat_map(|s| s.0.iter().copied())
            .collect()
    }

    /// Drops unused vertices from the table.
    pub fn compact(&self) -> RationalComplex {
        let simplices: Vec<Vec<Point>> = self
            .simplexes
            .iter()
            .map(|s| self.owned_points(s))
            .collect();
        Self::from_simplices(self.ambient_dim, &simplices).expect("compaction preserves dimensions")
    }

    /// Order-independent description: sorted lists of sorted vertex points.
    pub fn canonical(&self) -> Vec<Vec<Point>> {
        let mut out: Vec<Vec<Point>> = self
            .simplexes
            .iter()
            .map(|s| {
                let mut pts = self.owned_points(s);
                pts.sort();
                pts
            })
            .collect();
        out.sort();
        out
    }

    /// Same simplexes with the same vertices, regardless of labelling.
    pub fn same_as(&self, other: &RationalComplex) -> bool {
        self.ambient_dim == other.ambient_dim && self.canonical() == other.canonical()
    }

    /// Smallest simplex of the complex containing `x`.
    pub fn carrier(&self, x: &Point) -> Result<Simplex> {
        if x.dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: x.dim(),
            });
        }
        for s in &self.simplexes {
            if let Some(l) = locate(&self.points(s), x) {
                return Ok(Simplex(
                    s.0.iter()
                        .zip(&l)
                        .filter(|(_, c)| c.is_positive())
                        .map(|(&v, _)| v)
                        .collect(),
                ));
            }
        }
        Err(Error::NotInComplex(x.clone()))
    }

    /// Index of some maximal simplex containing `x`.
    pub fn containing_simplex(&self, x: &Point) -> Option<usize> {
        self.simplexes
            .iter()
            .position(|s| locate(&self.points(s), x).is_some())
    }

    pub fn contains_point(&self, x: &Point) -> bool {
        x.dim() == self.ambient_dim && self.containing_simplex(x).is_some()
    }

    /// Stellar subdivision at `p`, which must lie in the relative interior
    /// of `face`. Returns, for each new maximal simplex, the index of the
    /// old maximal simplex it came from.
    pub(crate) fn stellar(&mut self, face: &Simplex, p: Point) -> Vec<usize> {
        let pid = self.add_vertex(p);
        let mut next = Vec::with_capacity(self.simplexes.len() + face.len());
        let mut parents = Vec::with_capacity(next.capacity());
        for (idx, t) in self.simplexes.iter().enumerate() {
            if face.is_face_of(t) {
                for &w in &face.0 {
                    next.push(t.without(w).with(pid));
                    parents.push(idx);
                }
            } else {
                next.push(t.clone());
                parents.push(idx);
            }
        }
        self.simplexes = next;
        parents
    }

    /// Alexander blow-up at `p`.
    pub fn blow_up(&self, p: &Point) -> Result<RationalComplex> {
        let mut k = self.clone();
        k.blow_up_in_place(p)?;
        Ok(k)
    }

    pub fn blow_up_in_place(&mut self, p: &Point) -> Result<Vec<usize>> {
        let face = self.carrier(p)?;
        Ok(self.stellar(&face, p.clone()))
    }

    pub fn blow_up_recorded(&self, p: &Point) -> Result<(RationalComplex, BlowUpRecord)> {
        let face = self.carrier(p)?;
        let mut k = self.clone();
        let parents = k.stellar(&face, p.clone());
        let mut replaced = BTreeSet::new();
        let mut created = BTreeSet::new();
        for (new, &old) in parents.iter().enumerate() {
            let (t, s) = (&self.simplexes[old], &k.simplexes[new]);
            if face.is_face_of(t) {
                replaced.insert(self.owned_points(t));
                created.insert(k.owned_points(s));
            }
        }
        let record = BlowUpRecord {
            center: p.clone(),
            replaced: replaced.into_iter().collect(),
            created: created.into_iter().collect(),
        };
        Ok((k, record))
    }

    /// Blow-ups at the points in order.
    pub fn iterated_blow_up(&self, points: &[Point]) -> Result<RationalComplex> {
        let mut k = self.clone();
        for p in points {
            k.blow_up_in_place(p)?;
        }
        Ok(k)
    }

    /// The join `aK`: the apex, `K`, and every `conv(a, S)`.
    pub fn join(&self, apex: &Point) -> Result<RationalComplex> {
        if apex.dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: apex.dim(),
            });
        }
        let mut out = self.clone();
        let a = out.add_vertex(apex.clone());
        if self.simplexes.is_empty() {
            out.simplexes = vec![Simplex(vec![a])];
            return Ok(out);
        }
        let mut next = Vec::new();
        for s in &self.simplexes {
            if s.contains(a) {
                next.push(s.clone());
                continue;
            }
            let t = s.with(a);
            if !affinely_independent(&out.points(&t)) {
                return Err(Error::DegenerateJoin { apex: apex.clone() });
            }
            next.push(t);
        }
        out.simplexes.clear();
        for s in next {
            out.add_simplex(s);
        }
        Ok(out)
    }

    /// Checks that simplexes are affinely independent and meet in common faces.
    pub fn validate(&self) -> std::result::Result<(), ComplexViolation> {
        for s in &self.simplexes {
            if s.0.iter().any(|&i| i >= self.vertices.len())
                || !affinely_independent(&self.points(s))
            {
                return Err(ComplexViolation {
                    first: s.clone(),
                    second: None,
                    reason: "vertices are affinely dependent".into(),
                });
            }
        }
        let boxes: Vec<BBox> = self
            .simplexes
            .iter()
            .map(|s| BBox::of(&self.points(s)))
            .collect();
        for i in 0..self.simplexes.len() {
            for j in i + 1..self.simplexes.len() {
                if !boxes[i].overlaps(&boxes[j]) {
                    continue;
                }
                let (s, t) = (&self.simplexes[i], &self.simplexes[j]);
                if !self.meet_properly(s, t) {
                    return Err(ComplexViolation {
                        first: s.clone(),
                        second: Some(t.clone()),
                        reason: "intersection is not a common face".into(),
                    });
                }
            }
        }
        Ok(())
    }

    fn meet_properly(&self, s: &Simplex, t: &Simplex) -> bool {
        let sp = self.points(s);
        let tp = self.points(t);
        let tf = cut_functions(&tp);
        if tf.iter().any(|f| {
            strictly_one_sided(f, &sp).is_some_and(|o| o.is_lt() || !is_barycentric_fn(f, &tp))
        }) {
            return true;
        }
        let common = s.intersection(t);
        let cp = self.points(&common);
        // Cut S by the hyperplanes of T: S meets T exactly in the refined
        // faces whose vertices lie in T.
        let mut piece =
            RationalComplex::simplex(&self.owned_points(s)).expect("checked independent");
        for f in &tf {
            piece.cut(f);
        }
        piece.vertices.iter().all(|x| {
            if locate(&tp, x).is_none() {
                return true;
            }
            !cp.is_empty() && locate(&cp, x).is_some()
        })
    }

    /// Refines so that no edge crosses the zero set of `f` strictly.
    pub(crate) fn cut(&mut self, f: &AffineFn) {
        let mut tags = vec![0; self.simplexes.len()];
        self.cut_tagged(f, &mut tags, |_| true);
    }

    /// Like [`RationalComplex::cut`] but only for simplexes whose tag is
    /// selected; `tags` is kept aligned with the simplex list.
    pub(crate) fn cut_tagged(
        &mut self,
        f: &AffineFn,
        tags: &mut Vec<usize>,
        select: impl Fn(usize) -> bool,
    ) {
        let mut values: HashMap<usize, Rational> = HashMap::new();
        let mut crossing = BTreeSet::new();
        for (s, &tag) in self.simplexes.iter().zip(tags.iter()) {
            if !select(tag) {
                continue;
            }
            for &v in &s.0 {
                values.entry(v).or_insert_with(|| f.eval(&self.vertices[v]));
            }
            for (i, &a) in s.0.iter().enumerate() {
                for &b in &s.0[i + 1..] {
                    let (fa, fb) = (&values[&a], &values[&b]);
                    if (fa.is_positive() && fb.is_negative())
                        || (fa.is_negative() && fb.is_positive())
                    {
                        crossing.insert((a, b));
                    }
                }
            }
        }
        for (a, b) in crossing {
            let (fa, fb) = (&values[&a], &values[&b]);
            let t = fa / (fa - fb);
            let pa = &self.vertices[a];
            let pb = &self.vertices[b];
            let c = pa.add(&pb.sub(pa).scale(&t));
            let parents = self.stellar(&Simplex(vec![a, b]), c);
            *tags = parents.iter().map(|&p| tags[p]).collect();
        }
    }

    /// `None` when the simplex with the given vertices lies in `|self|`,
    /// otherwise a point of it outside `|self|`.
    pub fn uncovered_point(&self, simplex: &[Point]) -> Option<Point> {
        let sp: Vec<&Point> = simplex.iter().collect();
        let sbox = BBox::of(&sp);
        let mut piece = RationalComplex::simplex(simplex).ok()?;
        let mut relevant = Vec::new();
        for t in &self.simplexes {
            let tp = self.points(t);
            if !BBox::of(&tp).overlaps(&sbox) {
                continue;
            }
            let fs = cut_functions(&tp);
            if fs.iter().any(|f| {
                strictly_one_sided(f, &sp).is_some_and(|o| o.is_lt() || !is_barycentric_fn(f, &tp))
            }) {
                continue;
            }
            relevant.push((t.clone(), fs));
        }
        for (_, fs) in &relevant {
            for f in fs {
                piece.cut(f);
            }
        }
        for r in &piece.simplexes {
            let rp = piece.points(r);
            let inside = relevant
                .iter()
                .any(|(t, _)| rp.iter().all(|x| locate(&self.points(t), x).is_some()));
            if !inside {
                return Some(Point::barycenter(&rp));
            }
        }
        None
    }

    /// `|other| ⊆ |self|`.
    pub fn covers(&self, other: &RationalComplex) -> bool {
        other
            .simplexes
            .iter()
            .all(|s| self.uncovered_point(&other.owned_points(s)).is_none())
    }

    pub fn same_support(&self, other: &RationalComplex) -> bool {
        self.covers(other) && other.covers(self)
    }

    /// `self` (as H) subdivides `k`: each simplex of H lies in a simplex of
    /// K and the two supports agree, the latter checked by exact relative
    /// volume sums inside every maximal simplex of K.
    pub fn is_subdivision_of(&self, k: &RationalComplex) -> bool {
        if self.ambient_dim != k.ambient_dim {
            return false;
        }
        let mut hosts = Vec::with_capacity(self.simplexes.len());
        for s in &self.simplexes {
            let sp = self.points(s);
            let Some(host) = k
                .simplexes
                .iter()
                .position(|t| sp.iter().all(|x| locate(&k.points(t), x).is_some()))
            else {
                return false;
            };
            hosts.push(host);
        }
        k.simplexes.iter().all(|t| {
            let tp = k.points(t);
            let total = self
                .simplexes
                .iter()
                .filter(|s| s.dim() == t.dim())
                .filter_map(|s| relative_volume(&self.points(s), &tp))
                .fold(Rational::zero(), |acc, v| acc + v);
            total.is_one()
        })
    }

    /// Every simplex of `k` (faces included) is a union of simplexes of `self`.
    pub fn refines_every_face_of(&self, k: &RationalComplex) -> bool {
        let mine = self.all_faces();
        k.all_faces().iter().all(|t| {
            let tp = k.points(t);
            let total = mine
                .iter()
                .filter(|s| s.dim() == t.dim())
                .filter_map(|s| relative_volume(&self.points(s), &tp))
                .fold(Rational::zero(), |acc, v| acc + v);
            total.is_one()
        })
    }

    /// Subcomplex consisting of the given maximal simplexes of `self`.
    pub fn sub(&self, simplexes: impl IntoIterator<Item = Simplex>) -> RationalComplex {
        let mut out = RationalComplex {
            ambient_dim: self.ambient_dim,
            vertices: self.vertices.clone(),
            index: self.index.clone(),
            simplexes: Vec::new(),
        };
        for s in simplexes {
            out.add_simplex(s);
        }
        out
    }

    /// Placing triangulation of the convex hull of the points, in
    /// lexicographic order.
    pub fn convex_hull(points: &[Point]) -> Result<RationalComplex> {
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();
        let Some(first) = pts.first() else {
            return Err(Error::InvalidComplex("no points".into()));
        };
        let dim = first.dim();
        let mut basis: Vec<Point> = vec![first.clone()];
        let mut rest = Vec::new();
        for p in &pts[1..] {
            let mut trial: Vec<&Point> = basis.iter().collect();
            trial.push(p);
            if affinely_independent(&trial) {
                basis.push(p.clone());
            } else {
                rest.push(p.clone());
            }
        }
        let mut k = RationalComplex::simplex(&basis)?;
        let top = basis.len();
        for p in rest {
            if k.contains_point(&p) {
                continue;
            }
            let mut count: HashMap<Simplex, (usize, usize)> = HashMap::new();
            for (i, s) in k.simplexes.iter().enumerate() {
                for &w in &s.0 {
                    count.entry(s.without(w)).or_insert((0, i)).0 += 1;
                    count.get_mut(&s.without(w)).expect("inserted").1 = i;
                }
            }
            let mut added = Vec::new();
            for (facet, (c, owner)) in count {
                if c != 1 {
                    continue;
                }
                let s = &k.simplexes[owner];
                let opposite =
                    s.0.iter()
                        .position(|v| !facet.contains(*v))
                        .expect("facet misses one vertex");
                let l = barycentric(&k.points(s), &p).expect("point lies in the affine hull");
                if l[opposite].is_negative() {
                    added.push(facet);
                }
            }
            let pid = k.add_vertex(p);
            for f in added {
                k.simplexes.push(f.with(pid));
            }
            debug_assert!(k.simplexes.iter().all(|s| s.len() == top));
        }
        debug_assert_eq!(k.ambient_dim, dim);
        Ok(k)
    }

    /// A complex whose support is the union of the given simplexes, which
    /// may overlap arbitrarily.
    pub fn overlay(ambient_dim: usize, simplices: &[Vec<Point>]) -> Result<RationalComplex> {
        if let Ok(k) = Self::from_simplices(ambient_dim, simplices) {
            if k.validate().is_ok() {
                return Ok(k);
            }
        }
        let all: Vec<&Point> = simplices.iter().flatten().collect();
        if all.is_empty() {
            return Ok(Self::empty(ambient_dim));
        }
        let bbox = BBox::of(&all);
        let one = Rational::one();
        let lo: Vec<Rational> = bbox.lo.iter().map(|c| c - &one).collect();
        let span: Vec<Rational> = bbox.hi.iter().zip(&lo).map(|(h, l)| h - l + &one).collect();
        let cube = Self::kuhn_cube(ambient_dim);
        let boxed: Vec<Vec<Point>> = cube
            .simplexes
            .iter()
            .map(|s| {
                cube.points(s)
                    .iter()
                    .map(|p| {
                        Point(
                            p.0.iter()
                                .zip(&lo)
                                .zip(&span)
                                .map(|((c, l), w)| l + c * w)
                                .collect(),
                        )
                    })
                    .collect()
            })
            .collect();
        let mut b = Self::from_simplices(ambient_dim, &boxed)?;
        for s in simplices {
            let refs: Vec<&Point> = s.iter().collect();
            if !affinely_independent(&refs) {
                return Err(Error::InvalidComplex(
                    "overlay needs nondegenerate simplexes".into(),
                ));
            }
            for f in cut_functions(&refs) {
                b.cut(&f);
            }
        }
        let mut out = b.sub(std::iter::empty());
        for face in b.all_faces() {
            let fp = b.points(&face);
            if simplices.iter().any(|s| {
                let refs: Vec<&Point> = s.iter().collect();
                fp.iter().all(|x| locate(&refs, x).is_some())
            }) {
                out.add_simplex(face);
            }
        }
        Ok(out.compact())
    }
}

fn is_barycentric_fn(f: &AffineFn, vertices: &[&Point]) -> bool {
    // Barycentric extensions take value 1 at one vertex; affine hull
    // equations vanish at all of them.
    vertices.iter().any(|v| !f.eval(v).is_zero())
}

/// Volume of `inner` relative to `outer` when `inner` lies in `outer` and has
/// the same dimension.
pub fn relative_volume(inner: &[&Point], outer: &[&Point]) -> Option<Rational> {
    if inner.len() != outer.len() {
        return None;
    }
    let rows: Option<Vec<Vec<Rational>>> = inner.iter().map(|x| locate(outer, x)).collect();
    Some(det_rat(&rows?).abs())
}

/// Barycentric coordinates of `x` in the given simplex of `k`.
pub fn coordinates_in(k: &RationalComplex, s: &Simplex, x: &Point) -> Option<Vec<Rational>> {
    barycentric(&k.points(s), x)
}

/// Outcome of a single recorded blow-up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowUpRecord {
    pub center: Point,
    pub replaced: Vec<Vec<Point>>,
    pub created: Vec<Vec<Point>>,
}
