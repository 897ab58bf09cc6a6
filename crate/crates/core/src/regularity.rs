//! Regular and strongly regular simplexes, Farey mediants, blow-ups and blow-downs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{HomogeneousVector, Point};
use crate::complex::{RationalComplex, Simplex};
use crate::error::{Error, Result};
use crate::linalg::{extend_columns, maximal_minor_gcd, BasisExtension, IntMatrix};

pub fn homogeneous_columns(points: &[&Point]) -> Vec<Vec<BigInt>> {
    points.iter().map(|p| p.homogeneous().0).collect()
}

/// Index of the lattice spanned by the homogeneous correspondents in its
/// saturation; 1 exactly for regular simplexes, 0 for degenerate ones.
pub fn multiplicity(points: &[&Point]) -> BigInt {
    maximal_minor_gcd(&homogeneous_columns(points))
}

pub fn is_regular_simplex(points: &[&Point]) -> bool {
    multiplicity(points).is_one()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityReport {
    pub regular: bool,
    /// First maximal simplex that is not regular, with its minor gcd.
    pub offending: Option<(Vec<Point>, BigInt)>,
    /// Unimodular completions, one per maximal simplex, when regular.
    pub bases: Vec<IntMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongRegularityReport {
    pub strongly_regular: bool,
    pub regular: bool,
    /// gcd of vertex denominators for each maximal simplex.
    pub gcds: Vec<(Vec<Point>, BigInt)>,
    pub offending: Option<Vec<Point>>,
}

pub fn is_regular_complex(k: &RationalComplex) -> RegularityReport {
    let mut bases = Vec::with_capacity(k.simplexes().len());
    for s in k.simplexes() {
        let pts = k.points(s);
        match extend_columns(&homogeneous_columns(&pts)) {
            Ok(BasisExtension::Unimodular(m)) => bases.push(m),
            Ok(BasisExtension::NotExtendable { minor_gcd }) => {
                return RegularityReport {
                    regular: false,
                    offending: Some((k.owned_points(s), minor_gcd)),
                    bases: Vec::new(),
                }
            }
            Err(_) => {
                return RegularityReport {
                    regular: false,
                    offending: Some((k.owned_points(s), BigInt::zero())),
                    bases: Vec::new(),
                }
            }
        }
    }
    RegularityReport {
        regular: true,
        offending: None,
        bases,
    }
}

pub fn denominator_gcd(points: &[&Point]) -> BigInt {
    points
        .iter()
        .fold(BigInt::zero(), |acc, p| acc.gcd(&p.denominator()))
}

pub fn is_strongly_regular(k: &RationalComplex) -> StrongRegularityReport {
    let regular = is_regular_complex(k).regular;
    let gcds: Vec<(Vec<Point>, BigInt)> = k
        .simplexes()
        .iter()
        .map(|s| (k.owned_points(s), denominator_gcd(&k.points(s))))
        .collect();
    let offending = gcds
        .iter()
        .find(|(_, g)| !g.is_one())
        .map(|(s, _)| s.clone());
    StrongRegularityReport {
        strongly_regular: regular && offending.is_none(),
        regular,
        gcds,
        offending,
    }
}

/// Point whose homogeneous correspondent is the sum of those of the vertices.
pub fn farey_mediant(points: &[&Point]) -> Result<Point> {
    if points.is_empty() {
        return Err(Error::InvalidComplex("empty simplex".into()));
    }
    if !is_regular_simplex(points) {
        return Err(Error::NotRegular);
    }
    let hs: Vec<HomogeneousVector> = points.iter().map(|p| p.homogeneous()).collect();
    Ok(HomogeneousVector::sum(&hs).to_point())
}

/// Blow-up of a regular complex at the Farey mediant of one of its simplexes.
pub fn farey_blow_up(k: &RationalComplex, face: &Simplex) -> Result<RationalComplex> {
    if !k.simplexes().iter().any(|s| face.is_face_of(s)) {
        return Err(Error::InvalidComplex(format!(
            "{face} is not a simplex of the complex"
        )));
    }
    if !is_regular_complex(k).regular {
        return Err(Error::NotRegular);
    }
    let m = farey_mediant(&k.points(face))?;
    k.blow_up(&m)
}

#[derive(Clone, Debug)]
pub struct BlowDown {
    pub complex: RationalComplex,
    /// The simplex of `complex` whose Farey mediant is the removed vertex.
    pub face: Vec<Point>,
}

/// Undoes a Farey blow-up at the vertex `v`, if `v` is the mediant of a
/// simplex whose blow-up reproduces the star of `v`.
pub fn farey_blow_down(k: &RationalComplex, v: &Point) -> Option<BlowDown> {
    let vid = k.vertex_id(v)?;
    let star: Vec<&Simplex> = k.simplexes().iter().filter(|s| s.contains(vid)).collect();
    if star.is_empty() {
        return None;
    }
    let mut link: Vec<usize> = star
        .iter()
        .flat_map(|s| s.vertices().iter().copied())
        .filter(|&w| w != vid)
        .collect();
    link.sort_unstable();
    link.dedup();
    let target = v.homogeneous();
    let cap = k.ambient_dim() + 1;
    let mut found = None;
    let mut chosen = Vec::new();
    search_faces(k, &link, 0, &target, &mut chosen, cap, &mut |face| {
        let c = try_collapse(k, vid, face)?;
        found = Some(c);
        Some(())
    });
    found
}

fn search_faces(
    k: &RationalComplex,
    link: &[usize],
    from: usize,
    target: &HomogeneousVector,
    chosen: &mut Vec<usize>,
    cap: usize,
    accept: &mut dyn FnMut(&[usize]) -> Option<()>,
) -> bool {
    if chosen.len() >= 2 {
        let sum = HomogeneousVector::sum(
            chosen
                .iter()
                .map(|&i| k.vertex(i).homogeneous())
                .collect::<Vec<_>>()
                .iter(),
        );
        if &sum == target && accept(chosen).is_some() {
            return true;
        }
    }
    if chosen.len() == cap {
        return false;
    }
    let used: BigInt = chosen.iter().map(|&i| k.vertex(i).denominator()).sum();
    for i in from..link.len() {
        if used.clone() + k.vertex(link[i]).denominator() > *target.last() {
            continue;
        }
        chosen.push(link[i]);
        if search_faces(k, link, i + 1, target, chosen, cap, accept) {
            return true;
        }
        chosen.pop();
    }
    false
}

fn try_collapse(k: &RationalComplex, vid: usize, face: &[usize]) -> Option<BlowDown> {
    let face = Simplex::new(face.to_vec());
    let mut simplices: Vec<Vec<Point>> = Vec::new();
    for s in k.simplexes() {
        if s.contains(vid) {
            let merged = Simplex::new(
                s.without(vid)
                    .vertices()
                    .iter()
                    .copied()
                    .chain(face.vertices().iter().copied())
                    .collect(),
            );
            simplices.push(k.owned_points(&merged));
        } else {
            simplices.push(k.owned_points(s));
        }
    }
    let coarse = RationalComplex::from_simplices(k.ambient_dim(), &simplices).ok()?;
    if coarse.validate().is_err() || !is_regular_complex(&coarse).regular {
        return None;
    }
    let face_pts = k.owned_points(&face);
    let fid = Simplex::new(
        face_pts
            .iter()
            .map(|p| coarse.vertex_id(p).expect("face vertices survive"))
            .collect(),
    );
    let again = farey_blow_up(&coarse, &fid).ok()?;
    if !again.same_as(k) {
        return None;
    }
    Some(BlowDown {
        complex: coarse,
        face: face_pts,
    })
}
