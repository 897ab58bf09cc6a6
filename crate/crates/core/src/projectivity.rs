//! Necessary conditions for being a Z-retract of the cube, the exact
//! decision in dimension at most one, and certification in general.

use num_bigint::BigInt;
use num_integer::Integer;

use crate::arith::Point;
use crate::collapse::{find_collapse_sequence, is_tree, CollapseOutcome};
use crate::complex::RationalComplex;
use crate::desingularize::desingularize_with_budget;
use crate::error::{Error, Result};
use crate::regularity::{
    denominator_gcd, farey_mediant, is_strongly_regular, StrongRegularityReport,
};
use crate::synthesis::{
    build_cube_retraction, BuildOptions, CubeCertificate, CubeRetraction, RetractionChain,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContractibilityStatus {
    TreeYes,
    TreeNo,
    CollapsibleYes,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct ConditionReport {
    pub dim: Option<usize>,
    pub cond_i: ContractibilityStatus,
    pub cond_ii: bool,
    /// A vertex of the cube lying in the polyhedron.
    pub cube_vertex: Option<Point>,
    pub cond_iii: bool,
    pub strong: StrongRegularityReport,
    /// The regular triangulation on which strong regularity was decided.
    pub triangulation: RationalComplex,
}

/// Point of an offending simplex all of whose nearby rational points have
/// denominators divisible by `gcd`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenominatorWitness {
    pub simplex: Vec<Point>,
    pub point: Point,
    pub gcd: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotATree,
    NoCubeVertex,
    NotStronglyRegular(DenominatorWitness),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Projective,
    NotProjective,
    Unknown,
}

#[derive(Clone, Debug)]
pub enum Evidence {
    Retraction(Box<CubeCertificate>),
    PartialRetraction {
        chain: RetractionChain,
        missing: String,
    },
    Violated(Violation),
    Undecided(String),
}

#[derive(Clone, Debug)]
pub struct ProjectivityCertificate {
    pub verdict: Verdict,
    pub report: ConditionReport,
    pub evidence: Evidence,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rank {
    Finite(BigInt),
    Infinite,
}

impl Rank {
    pub fn gcd(&self, other: &Rank) -> Rank {
        match (self, other) {
            (Rank::Finite(a), Rank::Finite(b)) => Rank::Finite(a.gcd(b)),
            (Rank::Finite(a), Rank::Infinite) | (Rank::Infinite, Rank::Finite(a)) => {
                Rank::Finite(a.clone())
            }
            (Rank::Infinite, Rank::Infinite) => Rank::Infinite,
        }
    }
}

pub fn rank_of_point(x: &Point) -> Rank {
    Rank::Finite(x.denominator())
}

/// The rank attached to a point with an irrational coordinate.
pub fn rank_of_irrational() -> Rank {
    Rank::Infinite
}

fn witness(k: &RationalComplex, strong: &StrongRegularityReport) -> Option<DenominatorWitness> {
    let simplex = strong.offending.clone()?;
    let refs: Vec<&Point> = simplex.iter().collect();
    let point = farey_mediant(&refs).ok()?;
    let gcd = denominator_gcd(&refs);
    debug_assert!(k.contains_point(&point));
    Some(DenominatorWitness {
        simplex,
        point,
        gcd,
    })
}

pub fn check_necessary_conditions(p: &RationalComplex, budget: u64) -> Result<ConditionReport> {
    p.validate().map_err(|e| Error::InvalidComplex(e.reason))?;
    let dim = p.dim();
    let cube_vertex = p
        .used_vertices()
        .into_iter()
        .map(|v| p.vertex(v))
        .find(|x| x.is_cube_vertex())
        .cloned();
    let triangulation = desingularize_with_budget(p, budget)?;
    let strong = is_strongly_regular(&triangulation);
    let cond_i = match dim {
        None => ContractibilityStatus::TreeNo,
        Some(d) if d <= 1 => {
            if is_tree(p)? {
                ContractibilityStatus::TreeYes
            } else {
                ContractibilityStatus::TreeNo
            }
        }
        Some(_) => match find_collapse_sequence(p, budget) {
            CollapseOutcome::Found(_) => ContractibilityStatus::CollapsibleYes,
            CollapseOutcome::NotFound(_) => ContractibilityStatus::Unknown,
        },
    };
    Ok(ConditionReport {
        dim,
        cond_i,
        cond_ii: cube_vertex.is_some(),
        cube_vertex,
        cond_iii: strong.strongly_regular,
        strong,
        triangulation,
    })
}

fn violation(report: &ConditionReport) -> Option<Violation> {
    if report.cond_i == ContractibilityStatus::TreeNo {
        return Some(Violation::NotATree);
    }
    if !report.cond_iii {
        let w = witness(&report.triangulation, &report.strong)
            .expect("offending simplex of a regular complex");
        return Some(Violation::NotStronglyRegular(w));
    }
    if !report.cond_ii {
        return Some(Violation::NoCubeVertex);
    }
    None
}

/// Exact answer for polyhedra of dimension at most one: a tree containing
/// a cube vertex with a strongly regular triangulation.
pub fn decide_projective_dim1(
    p: &RationalComplex,
    options: &BuildOptions,
) -> Result<ProjectivityCertificate> {
    match p.dim() {
        None => return Err(Error::InvalidComplex("empty polyhedron".into())),
        Some(d) if d > 1 => return Err(Error::DimensionTooHigh(d)),
        _ => {}
    }
    let report = check_necessary_conditions(p, options.blow_up_budget)?;
    if let Some(v) = violation(&report) {
        return Ok(ProjectivityCertificate {
            verdict: Verdict::NotProjective,
            report,
            evidence: Evidence::Violated(v),
        });
    }
    let evidence = match build_cube_retraction(p, options)? {
        CubeRetraction::Certificate(c) => Evidence::Retraction(c),
        CubeRetraction::Partial { chain, missing } => {
            Evidence::PartialRetraction { chain, missing }
        }
    };
    Ok(ProjectivityCertificate {
        verdict: Verdict::Projective,
        report,
        evidence,
    })
}

pub fn certify_projective(
    p: &RationalComplex,
    options: &BuildOptions,
) -> Result<ProjectivityCertificate> {
    let report = check_necessary_conditions(p, options.blow_up_budget)?;
    if let Some(v) = violation(&report) {
        return Ok(ProjectivityCertificate {
            verdict: Verdict::NotProjective,
            report,
            evidence: Evidence::Violated(v),
        });
    }
    if report.cond_i == ContractibilityStatus::Unknown {
        return Ok(ProjectivityCertificate {
            verdict: Verdict::Unknown,
            report,
            evidence: Evidence::Undecided(
                "no collapse of the triangulation found within budget".into(),
            ),
        });
    }
    let (verdict, evidence) = match build_cube_retraction(p, options)? {
        CubeRetraction::Certificate(c) => (Verdict::Projective, Evidence::Retraction(c)),
        CubeRetraction::Partial { chain, missing } => (
            Verdict::Unknown,
            Evidence::PartialRetraction { chain, missing },
        ),
    };
    Ok(ProjectivityCertificate {
        verdict,
        report,
        evidence,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionB {
    pub holds: bool,
    pub witness: Option<DenominatorWitness>,
}

/// Every pair of nearby points has coprime ranks somewhere: equivalently,
/// a regular triangulation is strongly regular.
pub fn check_condition_b(p: &RationalComplex) -> Result<ConditionB> {
    let k = desingularize_with_budget(p, crate::desingularize::DEFAULT_BLOW_UP_BUDGET)?;
    let strong = is_strongly_regular(&k);
    Ok(ConditionB {
        holds: strong.strongly_regular,
        witness: witness(&k, &strong),
    })
}

/// A point of rank one, which must be a vertex of the cube.
pub fn check_condition_c(p: &RationalComplex) -> Option<Point> {
    p.used_vertices()
        .into_iter()
        .map(|v| p.vertex(v))
        .find(|x| x.is_cube_vertex())
        .cloned()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(a: &[(i64, i64)], b: &[(i64, i64)]) -> RationalComplex {
        RationalComplex::simplex(&[Point::from_fracs(a), Point::from_fracs(b)]).unwrap()
    }

    #[test]
    fn necessary_conditions() {
        let r = check_necessary_conditions(&seg(&[(1, 3)], &[(2, 3)]), 1000).unwrap();
        assert!(!r.cond_ii);
        let r =
            check_necessary_conditions(&seg(&[(0, 1), (1, 2)], &[(1, 2), (0, 1)]), 1000).unwrap();
        assert!(!r.cond_ii && !r.cond_iii);
        let r = check_necessary_conditions(&RationalComplex::kuhn_cube(2), 1000).unwrap();
        assert!(r.cond_ii && r.cond_iii);
        assert_eq!(r.cond_i, ContractibilityStatus::CollapsibleYes);
    }

    #[test]
    fn dimension_one_decisions() {
        let o = BuildOptions::default();
        let c = decide_projective_dim1(&seg(&[(0, 1), (0, 1)], &[(1, 1), (0, 1)]), &o).unwrap();
        assert_eq!(c.verdict, Verdict::Projective);
        assert!(matches!(c.evidence, Evidence::Retraction(_)));
        let tri = RationalComplex::standard_simplex(2);
        let boundary = tri.sub(tri.edges());
        let c = decide_projective_dim1(&boundary, &o).unwrap();
        assert_eq!(c.verdict, Verdict::NotProjective);
        assert!(matches!(
            c.evidence,
            Evidence::Violated(Violation::NotATree)
        ));
        let c = decide_projective_dim1(&seg(&[(1, 3)], &[(2, 3)]), &o).unwrap();
        assert_eq!(c.verdict, Verdict::NotProjective);
        assert!(matches!(
            decide_projective_dim1(&tri, &o),
            Err(Error::DimensionTooHigh(2))
        ));
    }

    #[test]
    fn certify_examples() {
        let o = BuildOptions::default();
        assert_eq!(
            certify_projective(&RationalComplex::kuhn_cube(2), &o)
                .unwrap()
                .verdict,
            Verdict::Projective
        );
        let c = certify_projective(&seg(&[(0, 1), (1, 2)], &[(1, 2), (0, 1)]), &o).unwrap();
        assert_eq!(c.verdict, Verdict::NotProjective);
        assert_eq!(
            certify_projective(&RationalComplex::standard_simplex(2), &o)
                .unwrap()
                .verdict,
            Verdict::Projective
        );
    }

    #[test]
    fn ranks() {
        assert_eq!(
            rank_of_point(&Point::from_ints(&[1, 0])),
            Rank::Finite(BigInt::from(1))
        );
        assert_eq!(
            rank_of_point(&Point::from_fracs(&[(1, 2), (1, 3)])),
            Rank::Finite(BigInt::from(6))
        );
        assert_eq!(rank_of_irrational(), Rank::Infinite);
        assert_eq!(Rank::Infinite.gcd(&Rank::Infinite), Rank::Infinite);
        assert_eq!(
            Rank::Finite(BigInt::from(4)).gcd(&Rank::Infinite),
            Rank::Finite(BigInt::from(4))
        );
    }

    #[test]
    fn conditions_b_and_c() {
        assert!(check_condition_b(&seg(&[(0, 1)], &[(1, 1)])).unwrap().holds);
        let b = check_condition_b(&seg(&[(0, 1), (1, 2)], &[(1, 2), (0, 1)])).unwrap();
        assert!(!b.holds);
        let w = b.witness.unwrap();
        assert_eq!(w.gcd, BigInt::from(2));
        assert_eq!(w.point.denominator() % 2, BigInt::from(0));
        assert!(check_condition_c(&seg(&[(1, 3)], &[(2, 3)])).is_none());
        assert!(check_condition_c(&RationalComplex::kuhn_cube(2)).is_some());
    }
}
