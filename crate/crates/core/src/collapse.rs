//! Elementary collapses and collapse-sequence search.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::complex::{RationalComplex, Simplex};
use crate::error::{Error, Result};

pub const DEFAULT_COLLAPSE_BUDGET: u64 = 1_000_000;

/// Removal of a free face `face` together with its unique coface, which is
/// `face` joined with the single vertex `apex`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapseStep {
    pub coface: Simplex,
    pub face: Simplex,
    pub apex: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapseSequence {
    pub steps: Vec<CollapseStep>,
    /// The vertex left at the end, when collapsing to a point.
    pub terminal_vertex: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NotFound {
    Budget(u64),
    /// The search space was exhausted.
    ProvablyNone,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CollapseOutcome {
    Found(CollapseSequence),
    NotFound(NotFound),
}

impl CollapseOutcome {
    pub fn sequence(&self) -> Option<&CollapseSequence> {
        match self {
            CollapseOutcome::Found(s) => Some(s),
            CollapseOutcome::NotFound(_) => None,
        }
    }
}

/// Face poset of a complex with a present/absent flag per face.
struct Poset {
    faces: Vec<Simplex>,
    /// Faces having the given face as a facet.
    up: Vec<Vec<usize>>,
    /// Facets of the given face.
    down: Vec<Vec<usize>>,
    /// Face ids in search order: dimension descending, then ids.
    order: Vec<usize>,
}

type State = Vec<u64>;

impl Poset {
    fn new(faces: &BTreeSet<Simplex>) -> Poset {
        let faces: Vec<Simplex> = faces.iter().cloned().collect();
        let index: HashMap<&Simplex, usize> =
            faces.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut up = vec![Vec::new(); faces.len()];
        let mut down = vec![Vec::new(); faces.len()];
        for (i, s) in faces.iter().enumerate() {
            for f in s.facets() {
                let j = index[&f];
                up[j].push(i);
                down[i].push(j);
            }
        }
        let mut order: Vec<usize> = (0..faces.len()).collect();
        order.sort_by(|&a, &b| {
            faces[b]
                .len()
                .cmp(&faces[a].len())
                .then_with(|| faces[a].cmp(&faces[b]))
        });
        Poset {
            faces,
            up,
            down,
            order,
        }
    }

    fn full(&self) -> State {
        let mut s = vec![0u64; self.faces.len().div_ceil(64)];
        for i in 0..self.faces.len() {
            set(&mut s, i, true);
        }
        s
    }

    fn free_pairs(&self, state: &State, frozen: &dyn Fn(usize) -> bool) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for &e in &self.order {
            if !get(state, e) || frozen(e) || self.up[e].iter().any(|&c| get(state, c)) {
                continue;
            }
            for &f in &self.down[e] {
                if get(state, f)
                    && !frozen(f)
                    && self.up[f].iter().filter(|&&c| get(state, c)).count() == 1
                {
                    out.push((e, f));
                }
            }
        }
        out
    }

    fn step(&self, e: usize, f: usize) -> CollapseStep {
        let coface = self.faces[e].clone();
        let face = self.faces[f].clone();
        let apex = *coface
            .vertices()
            .iter()
            .find(|v| !face.contains(**v))
            .expect("facet misses one vertex");
        CollapseStep { coface, face, apex }
    }
}

fn get(s: &State, i: usize) -> bool {
    s[i / 64] >> (i % 64) & 1 == 1
}

fn set(s: &mut State, i: usize, on: bool) {
    if on {
        s[i / 64] |= 1 << (i % 64);
    } else {
        s[i / 64] &= !(1 << (i % 64));
    }
}

fn count(s: &State) -> u32 {
    s.iter().map(|w| w.count_ones()).sum()
}

/// All pairs `(E, F)` with `F` a facet of exactly one simplex `E`.
pub fn free_faces(k: &RationalComplex) -> Vec<(Simplex, Simplex)> {
    let poset = Poset::new(&k.all_faces());
    poset
        .free_pairs(&poset.full(), &|_| false)
        .into_iter()
        .map(|(e, f)| (poset.faces[e].clone(), poset.faces[f].clone()))
        .collect()
}

/// Removes the free pair from the face set of `k`.
pub fn elementary_collapse(
    k: &RationalComplex,
    coface: &Simplex,
    face: &Simplex,
) -> Result<RationalComplex> {
    let faces = k.all_faces();
    let cofaces: Vec<&Simplex> = faces
        .iter()
        .filter(|s| s.len() > face.len() && face.is_face_of(s))
        .collect();
    if cofaces.len() != 1 || cofaces[0] != coface || coface.len() != face.len() + 1 {
        return Err(Error::NotFreePair);
    }
    let rest: BTreeSet<Simplex> = faces
        .into_iter()
        .filter(|s| s != coface && s != face)
        .collect();
    Ok(from_faces(k, &rest))
}

fn from_faces(k: &RationalComplex, faces: &BTreeSet<Simplex>) -> RationalComplex {
    k.sub(faces.iter().cloned().collect::<Vec<_>>())
}

/// Applies the steps in order, checking freeness at each one.
pub fn replay(k: &RationalComplex, steps: &[CollapseStep]) -> Result<RationalComplex> {
    let mut cur = k.clone();
    for s in steps {
        cur = elementary_collapse(&cur, &s.coface, &s.face)?;
    }
    Ok(cur)
}

pub fn find_collapse_sequence(k: &RationalComplex, budget: u64) -> CollapseOutcome {
    let faces = k.all_faces();
    let poset = Poset::new(&faces);
    let goal = |s: &State| count(s) == 1;
    match search(&poset, &goal, &|_| false, budget) {
        Ok(Some(steps)) => {
            let mut state = poset.full();
            for &(e, f) in &steps {
                set(&mut state, e, false);
                set(&mut state, f, false);
            }
            let terminal = (0..poset.faces.len())
                .find(|&i| get(&state, i))
                .map(|i| poset.faces[i].vertices()[0]);
            CollapseOutcome::Found(CollapseSequence {
                steps: steps.iter().map(|&(e, f)| poset.step(e, f)).collect(),
                terminal_vertex: terminal,
            })
        }
        Ok(None) => CollapseOutcome::NotFound(NotFound::ProvablyNone),
        Err(b) => CollapseOutcome::NotFound(NotFound::Budget(b)),
    }
}

/// Collapse of `k` onto the subcomplex generated by `target`, whose
/// simplexes use the vertex ids of `k`.
pub fn find_collapse_to(k: &RationalComplex, target: &[Simplex], budget: u64) -> CollapseOutcome {
    let faces = k.all_faces();
    let poset = Poset::new(&faces);
    let keep: HashSet<usize> = poset
        .faces
        .iter()
        .enumerate()
        .filter(|(_, s)| target.iter().any(|t| s.is_face_of(t)))
        .map(|(i, _)| i)
        .collect();
    let want = keep.len() as u32;
    let goal = move |s: &State| count(s) == want;
    match search(&poset, &goal, &|i| keep.contains(&i), budget) {
        Ok(Some(steps)) => CollapseOutcome::Found(CollapseSequence {
            steps: steps.iter().map(|&(e, f)| poset.step(e, f)).collect(),
            terminal_vertex: None,
        }),
        Ok(None) => CollapseOutcome::NotFound(NotFound::ProvablyNone),
        Err(b) => CollapseOutcome::NotFound(NotFound::Budget(b)),
    }
}

fn search(
    poset: &Poset,
    goal: &dyn Fn(&State) -> bool,
    frozen: &dyn Fn(usize) -> bool,
    budget: u64,
) -> std::result::Result<Option<Vec<(usize, usize)>>, u64> {
    if poset.faces.is_empty() {
        return Ok(None);
    }
    let mut visited: HashSet<State> = HashSet::new();
    let mut path = Vec::new();
    let found = dfs(
        poset,
        poset.full(),
        goal,
        frozen,
        budget,
        &mut visited,
        &mut path,
    )?;
    Ok(found.then_some(path))
}

fn dfs(
    poset: &Poset,
    state: State,
    goal: &dyn Fn(&State) -> bool,
    frozen: &dyn Fn(usize) -> bool,
    budget: u64,
    visited: &mut HashSet<State>,
    path: &mut Vec<(usize, usize)>,
) -> std::result::Result<bool, u64> {
    if goal(&state) {
        return Ok(true);
    }
    if visited.len() as u64 >= budget {
        return Err(budget);
    }
    if !visited.insert(state.clone()) {
        return Ok(false);
    }
    for (e, f) in poset.free_pairs(&state, frozen) {
        let mut next = state.clone();
        set(&mut next, e, false);
        set(&mut next, f, false);
        if visited.contains(&next) {
            continue;
        }
        path.push((e, f));
        if dfs(poset, next, goal, frozen, budget, visited, path)? {
            return Ok(true);
        }
        path.pop();
    }
    Ok(false)
}

/// Connected and acyclic, for complexes of dimension at most 1.
pub fn is_tree(k: &RationalComplex) -> Result<bool> {
    match k.dim() {
        None => return Ok(false),
        Some(d) if d > 1 => return Err(Error::DimensionTooHigh(d)),
        _ => {}
    }
    let verts: Vec<usize> = k.used_vertices().into_iter().collect();
    let edges = k.edges();
    if edges.len() + 1 != verts.len() {
        return Ok(false);
    }
    let index: HashMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..verts.len()).collect();
    fn root(p: &mut Vec<usize>, mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for e in &edges {
        let (a, b) = (index[&e.vertices()[0]], index[&e.vertices()[1]]);
        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
        if ra == rb {
            return Ok(false);
        }
        parent[ra] = rb;
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Point;

    fn triangle_boundary() -> RationalComplex {
        let o = Point::from_ints(&[0, 0]);
        let a = Point::from_ints(&[1, 0]);
        let b = Point::from_ints(&[0, 1]);
        RationalComplex::from_simplices(
            2,
            &[vec![o.clone(), a.clone()], vec![a, b.clone()], vec![b, o]],
        )
        .unwrap()
    }

    fn edge() -> RationalComplex {
        RationalComplex::simplex(&[Point::from_ints(&[0]), Point::from_ints(&[1])]).unwrap()
    }

    #[test]
    fn free_face_examples() {
        assert_eq!(free_faces(&edge()).len(), 2);
        assert!(free_faces(&triangle_boundary()).is_empty());
        let tri = RationalComplex::standard_simplex(2);
        let ff = free_faces(&tri);
        assert_eq!(ff.len(), 3);
        assert!(ff.iter().all(|(e, f)| e.len() == 3 && f.len() == 2));
    }

    #[test]
    fn elementary_collapses() {
        let tri = RationalComplex::standard_simplex(2);
        let before = tri.all_faces().len();
        for (e, f) in free_faces(&tri) {
            let c = elementary_collapse(&tri, &e, &f).unwrap();
            assert_eq!(c.all_faces().len(), before - 2);
            assert!(c.validate().is_ok());
        }
        let e = edge();
        let s = e.simplexes()[0].clone();
        assert!(matches!(
            elementary_collapse(&e, &s, &s),
            Err(Error::NotFreePair)
        ));
        let bd = triangle_boundary();
        let any = bd.simplexes()[0].clone();
        let v = Simplex::new(vec![any.vertices()[0]]);
        assert!(matches!(
            elementary_collapse(&bd, &any, &v),
            Err(Error::NotFreePair)
        ));
    }

    #[test]
    fn sequences() {
        let v = RationalComplex::simplex(&[Point::from_ints(&[1])]).unwrap();
        let s = find_collapse_sequence(&v, 10);
        assert_eq!(s.sequence().unwrap().steps.len(), 0);
        for k in 1..=4 {
            let full = RationalComplex::standard_simplex(k);
            let seq = find_collapse_sequence(&full, DEFAULT_COLLAPSE_BUDGET);
            let seq = seq.sequence().expect("simplexes collapse");
            let end = replay(&full, &seq.steps).unwrap();
            assert_eq!(end.all_faces().len(), 1);
        }
        assert_eq!(
            find_collapse_sequence(&triangle_boundary(), DEFAULT_COLLAPSE_BUDGET),
            CollapseOutcome::NotFound(NotFound::ProvablyNone)
        );
    }

    #[test]
    fn collapse_onto_a_subcomplex() {
        let tri = RationalComplex::standard_simplex(2);
        let o = tri.vertex_id(&Point::origin(2)).unwrap();
        let e1 = tri.vertex_id(&Point::from_ints(&[1, 0])).unwrap();
        let target = [Simplex::new(vec![o, e1])];
        let seq = find_collapse_to(&tri, &target, 1000);
        let end = replay(&tri, &seq.sequence().unwrap().steps).unwrap();
        assert_eq!(end.simplexes(), &target);
    }

    #[test]
    fn trees() {
        assert!(is_tree(&edge()).unwrap());
        assert!(!is_tree(&triangle_boundary()).unwrap());
        let two = RationalComplex::from_simplices(
            1,
            &[
                vec![Point::from_fracs(&[(0, 1)]), Point::from_fracs(&[(1, 3)])],
                vec![Point::from_fracs(&[(2, 3)]), Point::from_fracs(&[(1, 1)])],
            ],
        )
        .unwrap();
        assert!(!is_tree(&two).unwrap());
        assert!(matches!(
            is_tree(&RationalComplex::standard_simplex(2)),
            Err(Error::DimensionTooHigh(2))
        ));
    }
}
