//! Canonical re-embedding of a regular complex with vertex `v_j` sent to
//! `e_j / den(v_j)`.

use num_bigint::BigInt;
use num_traits::One;

use crate::arith::Point;
use crate::complex::RationalComplex;
use crate::error::{Error, Result};
use crate::regularity::is_regular_complex;
use crate::zmap::{extend_vertex_map, ZMap};

#[derive(Clone, Debug)]
pub struct PerpEmbedding {
    pub source: RationalComplex,
    pub target: RationalComplex,
    /// Source vertices in coordinate order: `order[j]` goes to `e_j / den`.
    pub order: Vec<Point>,
    pub forward: ZMap,
    pub backward: ZMap,
}

impl PerpEmbedding {
    pub fn image_of_vertex(&self, j: usize) -> Point {
        perp_vertex(self.order.len(), j, &self.order[j].denominator())
    }
}

fn perp_vertex(u: usize, j: usize, den: &BigInt) -> Point {
    Point::scaled_unit(u, j, den)
}

pub fn perp_embed(lambda: &RationalComplex) -> Result<PerpEmbedding> {
    perp_embed_with_first(lambda, None)
}

/// As [`perp_embed`], with `first` (a vertex of `lambda`) sent to `e_1`
/// scaled by its denominator.
pub fn perp_embed_with_first(
    lambda: &RationalComplex,
    first: Option<&Point>,
) -> Result<PerpEmbedding> {
    if !is_regular_complex(lambda).regular {
        return Err(Error::NotRegular);
    }
    let mut order: Vec<Point> = lambda
        .used_vertices()
        .into_iter()
        .map(|v| lambda.vertex(v).clone())
        .collect();
    if let Some(f) = first {
        let i = order
            .iter()
            .position(|p| p == f)
            .ok_or_else(|| Error::NotInComplex(f.clone()))?;
        let v = order.remove(i);
        order.insert(0, v);
    }
    let u = order.len();
    let index: std::collections::HashMap<&Point, usize> =
        order.iter().enumerate().map(|(j, p)| (p, j)).collect();
    let images: Vec<Point> = order
        .iter()
        .enumerate()
        .map(|(j, p)| perp_vertex(u, j, &p.denominator()))
        .collect();
    let simplices: Vec<Vec<Point>> = lambda
        .simplexes()
        .iter()
        .map(|s| {
            lambda
                .points(s)
                .iter()
                .map(|p| images[index[*p]].clone())
                .collect()
        })
        .collect();
    let target = RationalComplex::from_simplices(u, &simplices)?;
    let forward = extend_vertex_map(lambda, u, |p| images[index[p]].clone())?;
    let back: std::collections::HashMap<&Point, &Point> = images.iter().zip(&order).collect();
    let backward = extend_vertex_map(&target, lambda.ambient_dim(), |q| (*back[q]).clone())?;
    Ok(PerpEmbedding {
        source: lambda.clone(),
        target,
        order,
        forward,
        backward,
    })
}

/// True when every vertex of the image is `e_j / d` for a distinct `j`.
pub fn is_perp_shaped(k: &RationalComplex) -> bool {
    let mut used = vec![false; k.ambient_dim()];
    for v in k.used_vertices() {
        let p = k.vertex(v);
        let nz: Vec<usize> = (0..p.dim())
            .filter(|&i| !num_traits::Zero::is_zero(&p.0[i]))
            .collect();
        if nz.len() != 1 || used[nz[0]] || !p.0[nz[0]].numer().is_one() {
            return false;
        }
        used[nz[0]] = true;
    }
    true
}
