//! Retraction of `oQ` onto `Q ∪ conv(o, e_1)` following a collapse of `Q`,
//! one elementary-collapse retraction per collapse step, and the final fold of
//! the segment `conv(o, e_1)` onto `e_1`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::Point;
use crate::collapse::{elementary_collapse, CollapseStep};
use crate::complex::{RationalComplex, Simplex};
use crate::desingularize::in_simplex;
use crate::error::{Error, Result};
use crate::regularity::is_strongly_regular;
use crate::zmap::{extend_vertex_map, verify_retraction, RetractionCertificate, ZMap};

use super::xi::xi_retraction;

#[derive(Clone, Debug)]
pub struct Stage {
    pub label: String,
    pub map: ZMap,
    /// Present for stages that are retractions.
    pub certificate: Option<RetractionCertificate>,
}

/// Stages in order of application.
#[derive(Clone, Debug, Default)]
pub struct RetractionChain {
    pub stages: Vec<Stage>,
}

impl RetractionChain {
    pub fn labels(&self) -> Vec<&str> {
        self.stages.iter().map(|s| s.label.as_str()).collect()
    }
}

/// `{o} ∪ Δ₀ ∪ {oT : T ∈ Δ_j}`.
pub fn cone_stage(delta0: &RationalComplex, delta_j: &RationalComplex) -> Result<RationalComplex> {
    let u = delta0.ambient_dim();
    let o = Point::origin(u);
    let mut simplices: Vec<Vec<Point>> = delta0
        .simplexes()
        .iter()
        .map(|s| delta0.owned_points(s))
        .collect();
    for t in delta_j.simplexes() {
        let mut pts = vec![o.clone()];
        pts.extend(delta_j.owned_points(t));
        simplices.push(pts);
    }
    if simplices.is_empty() {
        simplices.push(vec![o]);
    }
    RationalComplex::from_simplices(u, &simplices)
}

/// The coordinate carrying the vertex `e_j / d`.
fn axis(p: &Point) -> Result<usize> {
    let nz: Vec<usize> = (0..p.dim()).filter(|&i| !p.0[i].is_zero()).collect();
    match nz.as_slice() {
        [j] if p.0[*j].numer().is_one() => Ok(*j),
        _ => Err(Error::Hypothesis(format!(
            "vertex {p} is not of the form e_j/d"
        ))),
    }
}

pub(crate) fn certified(label: String, map: ZMap, image: &RationalComplex) -> Result<Stage> {
    let cert = verify_retraction(&map)
        .certificate()
        .ok_or_else(|| Error::Hypothesis(format!("stage {label} is not a retraction")))?;
    if !cert.image.same_support(image) {
        return Err(Error::Hypothesis(format!(
            "stage {label} has the wrong image"
        )));
    }
    Ok(Stage {
        label,
        map,
        certificate: Some(cert),
    })
}

/// One retraction `|Λ_{i-1}| -> |Λ_i|` per collapse step, each verified.
pub fn collapse_chain_retraction(
    delta0: &RationalComplex,
    steps: &[CollapseStep],
) -> Result<RetractionChain> {
    let u = delta0.ambient_dim();
    if !is_strongly_regular(delta0).strongly_regular {
        return Err(Error::Hypothesis("complex is not strongly regular".into()));
    }
    for v in delta0.used_vertices() {
        axis(delta0.vertex(v))?;
    }
    let o = Point::origin(u);
    let mut current = delta0.clone();
    let mut lambda = cone_stage(delta0, &current)?;
    let mut chain = RetractionChain::default();
    for (i, step) in steps.iter().enumerate() {
        let host = delta0
            .simplexes()
            .iter()
            .find(|s| step.coface.is_face_of(s))
            .ok_or(Error::NotFreePair)?;
        let mut order: Vec<usize> = step.face.vertices().to_vec();
        order.push(step.apex);
        order.extend(
            host.vertices()
                .iter()
                .copied()
                .filter(|v| !step.coface.contains(*v)),
        );
        let slots: Vec<usize> = order
            .iter()
            .map(|&v| axis(delta0.vertex(v)))
            .collect::<Result<_>>()?;
        let dens: Vec<BigInt> = order
            .iter()
            .map(|&v| delta0.vertex(v).denominator())
            .collect();
        let (xi, trace) = xi_retraction(&dens, step.face.len() + 1)?;

        let centers: Vec<Point> = trace
            .mediants
            .iter()
            .chain(&trace.reach_centers)
            .map(|t| t.embed(u, &slots))
            .collect();
        let domain = lambda.iterated_blow_up(&centers)?;
        let mut cone = vec![o.clone()];
        cone.extend(delta0.owned_points(&step.coface));
        let eta = extend_vertex_map(&domain, u, |v| {
            if in_simplex(&cone, v) {
                xi.eval(&v.restrict(&slots))
                    .expect("cone lies in the domain of ξ")
                    .embed(u, &slots)
            } else {
                v.clone()
            }
        })?;

        current = elementary_collapse(&current, &step.coface, &step.face)?;
        lambda = cone_stage(delta0, &current)?;
        chain
            .stages
            .push(certified(format!("eta_{}", i + 1), eta, &lambda)?);
    }
    Ok(chain)
}

/// `Q ∪ conv(o, e_1) -> Q`, sending the segment to `e_1`.
pub fn phi_retraction(q: &RationalComplex, e1: &Point) -> Result<ZMap> {
    if q.vertex_id(e1).is_none() || !e1.denominator().is_one() {
        return Err(Error::NotInComplex(e1.clone()));
    }
    let o = Point::origin(q.ambient_dim());
    let segment = RationalComplex::simplex(&[o.clone(), e1.clone()])?;
    let mut simplices: Vec<Vec<Point>> = q.simplexes().iter().map(|s| q.owned_points(s)).collect();
    simplices.push(segment.vertices().to_vec());
    let domain = RationalComplex::from_simplices(q.ambient_dim(), &simplices)?;
    extend_vertex_map(&domain, q.ambient_dim(), |v| {
        if *v == o {
            e1.clone()
        } else {
            v.clone()
        }
    })
}

/// The collapse target of `find_collapse_to`, as a single vertex.
pub fn vertex_target(k: &RationalComplex, v: &Point) -> Result<Vec<Simplex>> {
    let id = k
        .vertex_id(v)
        .ok_or_else(|| Error::NotInComplex(v.clone()))?;
    Ok(vec![Simplex::new(vec![id])])
}
