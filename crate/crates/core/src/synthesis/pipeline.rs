//! End-to-end retraction of `[0,1]^n` onto a polyhedron: desingularize,
//! move to the perp embedding, retract the cube onto the cone `oQ`, undo the
//! cone along a collapse, fold the remaining segment and pull back.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::{Point, Rational};
use crate::collapse::{
    find_collapse_to, CollapseOutcome, CollapseSequence, DEFAULT_COLLAPSE_BUDGET,
};
use crate::complex::RationalComplex;
use crate::desingularize::{desingularize_with_budget, DEFAULT_BLOW_UP_BUDGET};
use crate::error::{Error, Result};
use crate::linalg::det_rat;
use crate::regularity::is_strongly_regular;
use crate::zmap::{
    compose, cube_triangulation_through, extend_vertex_map, verify_retraction,
    RetractionCertificate, ZMap,
};

use super::chain::{
    certified, collapse_chain_retraction, cone_stage, phi_retraction, vertex_target,
    RetractionChain, Stage,
};
use super::perp::{perp_embed_with_first, PerpEmbedding};
use super::star::{star_retraction, StarOptions, StarRetraction};

#[derive(Clone, Debug)]
pub struct BuildOptions {
    pub star: StarOptions,
    pub collapse_budget: u64,
    pub blow_up_budget: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            star: StarOptions::default(),
            collapse_budget: DEFAULT_COLLAPSE_BUDGET,
            blow_up_budget: DEFAULT_BLOW_UP_BUDGET,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CubeCertificate {
    pub retraction: ZMap,
    pub certificate: RetractionCertificate,
    pub chain: RetractionChain,
    /// The strongly regular triangulation the construction ran on.
    pub triangulation: Option<RationalComplex>,
    pub perp: Option<PerpEmbedding>,
    pub collapse: Option<CollapseSequence>,
    pub star_method: Option<String>,
}

#[derive(Clone, Debug)]
pub enum CubeRetraction {
    Certificate(Box<CubeCertificate>),
    /// Completed stages are verified; `missing` names the first stage that
    /// could not be produced within budget.
    Partial {
        chain: RetractionChain,
        missing: String,
    },
}

impl CubeRetraction {
    pub fn certificate(&self) -> Option<&CubeCertificate> {
        match self {
            CubeRetraction::Certificate(c) => Some(c),
            CubeRetraction::Partial { .. } => None,
        }
    }
}

/// Total volume of the full-dimensional simplexes equals that of the cube.
fn fills_cube(p: &RationalComplex) -> bool {
    let n = p.ambient_dim();
    let total = p
        .simplexes()
        .iter()
        .filter(|s| s.len() == n + 1)
        .map(|s| {
            let pts = p.points(s);
            let rows: Vec<Vec<Rational>> = pts[1..].iter().map(|x| x.sub(pts[0]).0).collect();
            det_rat(&rows).abs()
        })
        .fold(Rational::zero(), |a, b| a + b);
    let factorial: BigInt = (1..=n).map(BigInt::from).product();
    total == Rational::from_integer(factorial)
}

fn finish(
    retraction: ZMap,
    p: &RationalComplex,
    chain: RetractionChain,
) -> Result<CubeCertificate> {
    let certificate = verify_retraction(&retraction)
        .certificate()
        .ok_or_else(|| Error::Hypothesis("assembled map is not a retraction".into()))?;
    if !certificate.image.same_support(p) {
        return Err(Error::Hypothesis(
            "assembled retraction has the wrong image".into(),
        ));
    }
    Ok(CubeCertificate {
        retraction,
        certificate,
        chain,
        triangulation: None,
        perp: None,
        collapse: None,
        star_method: None,
    })
}

pub fn build_cube_retraction(
    p: &RationalComplex,
    options: &BuildOptions,
) -> Result<CubeRetraction> {
    let n = p.ambient_dim();
    if p.is_empty() {
        return Err(Error::InvalidComplex("empty polyhedron".into()));
    }
    if let Some(v) = p
        .used_vertices()
        .into_iter()
        .map(|v| p.vertex(v))
        .find(|x| !x.in_unit_cube())
    {
        return Err(Error::Hypothesis(format!(
            "vertex {v} lies outside the unit cube"
        )));
    }
    p.validate().map_err(|e| Error::InvalidComplex(e.reason))?;
    let cube = RationalComplex::kuhn_cube(n);
    if fills_cube(p) {
        return Ok(CubeRetraction::Certificate(Box::new(finish(
            ZMap::identity(cube),
            p,
            RetractionChain::default(),
        )?)));
    }
    let corners: Vec<Point> = p
        .used_vertices()
        .into_iter()
        .map(|v| p.vertex(v).clone())
        .filter(Point::is_cube_vertex)
        .collect();
    if corners.is_empty() {
        return Err(Error::Hypothesis(
            "the polyhedron contains no vertex of the cube".into(),
        ));
    }
    if p.used_vertices().len() == 1 {
        return Ok(CubeRetraction::Certificate(Box::new(finish(
            ZMap::constant(cube, &corners[0])?,
            p,
            RetractionChain::default(),
        )?)));
    }

    let nabla = desingularize_with_budget(p, options.blow_up_budget)?;
    let strong = is_strongly_regular(&nabla);
    if !strong.strongly_regular {
        return Err(Error::Hypothesis(format!(
            "not strongly regular at {:?}",
            strong
                .offending
                .unwrap_or_default()
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
        )));
    }

    let mut found = None;
    let mut last = String::from("collapse");
    for c in &corners {
        let perp = perp_embed_with_first(&nabla, Some(c))?;
        let q = perp.target.clone();
        let e1 = perp.image_of_vertex(0);
        match find_collapse_to(&q, &vertex_target(&q, &e1)?, options.collapse_budget) {
            CollapseOutcome::Found(seq) => {
                found = Some((perp, seq, e1));
                break;
            }
            CollapseOutcome::NotFound(reason) => last = format!("collapse ({reason:?})"),
        }
    }
    let Some((perp, seq, e1)) = found else {
        return Ok(CubeRetraction::Partial {
            chain: RetractionChain::default(),
            missing: last,
        });
    };
    let q = &perp.target;
    let u = q.ambient_dim();

    let mut chain = collapse_chain_retraction(q, &seq.steps)?;
    let segment_target = RationalComplex::from_simplices(
        u,
        &q.simplexes()
            .iter()
            .map(|s| q.owned_points(s))
            .collect::<Vec<_>>(),
    )?;
    chain.stages.push(certified(
        "phi".into(),
        phi_retraction(q, &e1)?,
        &segment_target,
    )?);

    let (mu, factors, star_method, mu_cert) = match star_retraction(q, &options.star)? {
        StarRetraction::Found {
            map,
            factors,
            method,
            certificate,
        } => (map, factors, method, certificate),
        StarRetraction::NotFound { reason, .. } => {
            return Ok(CubeRetraction::Partial {
                chain,
                missing: format!("mu: {reason}"),
            })
        }
    };
    let mu_stage = match mu_cert {
        Some(c) => Stage {
            label: "mu".into(),
            map: mu,
            certificate: Some(*c),
        },
        None => certified("mu".into(), mu, &cone_stage(&RationalComplex::empty(u), q)?)?,
    };
    chain.stages.insert(0, mu_stage);

    // The cube in the original coordinates, with P sent to Q and every
    // other vertex to the origin.
    let delta = cube_triangulation_through(&nabla)?;
    let origin = Point::origin(u);
    let mut x = extend_vertex_map(&delta, u, |v| {
        if nabla.contains_point(v) {
            perp.forward.eval(v).expect("vertex lies in the polyhedron")
        } else {
            origin.clone()
        }
    })?;
    // μ is applied factor by factor: its composite has far more cells.
    for f in &factors {
        x = compose(f, &x)?;
    }
    for stage in &chain.stages[1..] {
        x = compose(&stage.map, &x)?;
    }
    x = compose(&perp.backward, &x)?;
    let mut cert = finish(x, p, RetractionChain::default())?;
    chain.stages.push(Stage {
        label: "transfer".into(),
        map: cert.retraction.clone(),
        certificate: Some(cert.certificate.clone()),
    });
    cert.chain = chain;
    cert.triangulation = Some(nabla);
    cert.perp = Some(perp);
    cert.collapse = Some(seq);
    cert.star_method = Some(star_method);
    Ok(CubeRetraction::Certificate(Box::new(cert)))
}
