//! Retraction of `M ∪ o(pF)` onto `M ∪ o(p∂F)` for a simplex `M` spanned by
//! the points `e_i / m_i`, with `F` its first `s - 1` vertices and
//! `p = e_s / m_s`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::Point;
use crate::complex::RationalComplex;
use crate::desingularize::{
    find_divisible_point, find_multiple_on_edge, in_simplex, reach_vertex,
    representability_threshold,
};
use crate::error::{Error, Result};
use crate::regularity::farey_mediant;
use crate::zmap::{extend_vertex_map, verify_retraction, ZMap};

#[derive(Clone, Debug)]
pub struct XiConstructionTrace {
    pub m: Vec<BigInt>,
    pub s: usize,
    pub k: usize,
    /// `t_1, ..., t_{k+1}`.
    pub mediants: Vec<Point>,
    pub p_star: Point,
    /// Farey blow-ups on `conv(t_k, t_{k+1})` producing `p_star`.
    pub reach_centers: Vec<Point>,
    /// The triangulation on which the retraction is linear.
    pub triangulation: RationalComplex,
    pub vertex_values: Vec<(Point, Point)>,
}

/// Vertices of `M`, of `F` and the apex `p`, in `R^n` with `n = m.len()`.
pub fn normal_form(m: &[BigInt], s: usize) -> (Vec<Point>, Vec<Point>, Point) {
    let n = m.len();
    let big_m: Vec<Point> = (0..n).map(|i| Point::scaled_unit(n, i, &m[i])).collect();
    let f = big_m[..s - 1].to_vec();
    let p = big_m[s - 1].clone();
    (big_m, f, p)
}

/// The target `M ∪ o(p∂F)` as a complex.
pub fn xi_image(m: &[BigInt], s: usize) -> Result<RationalComplex> {
    let n = m.len();
    let (big_m, f, p) = normal_form(m, s);
    let o = Point::origin(n);
    let mut simplices = vec![big_m];
    for j in 0..f.len() {
        let mut t = vec![o.clone(), p.clone()];
        t.extend(
            f.iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, q)| q.clone()),
        );
        simplices.push(t);
    }
    RationalComplex::from_simplices(n, &simplices)
}

pub fn xi_retraction(m: &[BigInt], s: usize) -> Result<(ZMap, XiConstructionTrace)> {
    let n = m.len();
    if s < 2 || s > n {
        return Err(Error::Hypothesis(format!(
            "need 2 <= s <= n, got s = {s}, n = {n}"
        )));
    }
    if m.iter().any(|d| !d.is_positive()) {
        return Err(Error::Hypothesis("multiplicities must be positive".into()));
    }
    if !m.iter().fold(BigInt::zero(), |g, d| g.gcd(d)).is_one() {
        return Err(Error::Hypothesis("multiplicities are not coprime".into()));
    }
    let (big_m, f, p) = normal_form(m, s);
    let o = Point::origin(n);
    let threshold = representability_threshold(m)?;
    let k = threshold.to_usize().unwrap_or(usize::MAX).max(1);
    if k > 10_000 {
        return Err(Error::BudgetExhausted(k as u64));
    }

    let mut of = vec![o.clone()];
    of.extend(f.iter().cloned());
    let phi = RationalComplex::simplex(&of)?;
    let mut mediants = Vec::with_capacity(k + 1);
    let mut prev = o.clone();
    for _ in 0..=k {
        let mut face: Vec<&Point> = vec![&prev];
        face.extend(f.iter());
        let t = farey_mediant(&face)?;
        mediants.push(t.clone());
        prev = t;
    }
    let psi = phi.iterated_blow_up(&mediants)?;
    let (tk, tk1) = (&mediants[k - 1], &mediants[k]);
    let p_star = find_multiple_on_edge(tk, tk1, &m[s - 1])?;
    let reach = reach_vertex(&[tk.clone(), tk1.clone()], &p_star)?;
    let delta = psi.iterated_blow_up(&reach.centers)?;

    let mut simplices = vec![big_m.clone()];
    for t in delta.simplexes() {
        let mut pts = delta.owned_points(t);
        pts.push(p.clone());
        simplices.push(pts);
    }
    let nabla = RationalComplex::from_simplices(n, &simplices)?;

    let head = &mediants[..k];
    let value = |v: &Point| -> Result<Point> {
        if *v == p_star {
            return Ok(p.clone());
        }
        if head.contains(v) || in_simplex(&[tk.clone(), p_star.clone()], v) {
            return Ok(o.clone());
        }
        if in_simplex(&[p_star.clone(), tk1.clone()], v) {
            return find_divisible_point(&big_m, &v.denominator())?
                .point
                .ok_or_else(|| Error::DivisibilityViolation {
                    vertex: v.clone(),
                    target: o.clone(),
                });
        }
        Ok(v.clone())
    };
    let mut vertex_values = Vec::new();
    for v in nabla.used_vertices() {
        let x = nabla.vertex(v);
        vertex_values.push((x.clone(), value(x)?));
    }
    let table: std::collections::HashMap<&Point, &Point> =
        vertex_values.iter().map(|(a, b)| (a, b)).collect();
    let xi = extend_vertex_map(&nabla, n, |v| table[v].clone())?;
    let trace = XiConstructionTrace {
        m: m.to_vec(),
        s,
        k,
        mediants,
        p_star,
        reach_centers: reach.centers,
        triangulation: nabla,
        vertex_values,
    };
    Ok((xi, trace))
}

/// Builds the retraction and checks that it is one, with image `M ∪ o(p∂F)`.
pub fn verified_xi_retraction(m: &[BigInt], s: usize) -> Result<(ZMap, XiConstructionTrace)> {
    let (xi, trace) = xi_retraction(m, s)?;
    let cert = verify_retraction(&xi)
        .certificate()
        .ok_or_else(|| Error::Hypothesis("constructed map is not a retraction".into()))?;
    if !cert.image.same_support(&xi_image(m, s)?) {
        return Err(Error::Hypothesis(
            "constructed retraction has the wrong image".into(),
        ));
    }
    Ok((xi, trace))
}
