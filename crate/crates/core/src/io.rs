//! JSON files for complexes, Z-maps, reports and certificates.
//!
//! Rationals are strings `"p/q"`; integer matrix entries are numbers when
//! they fit in an `i64` and strings otherwise. Serialization is canonical:
//! unused vertices are dropped, vertices sorted, simplexes sorted.

use std::collections::HashMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::arith::Point;
use crate::collapse::CollapseSequence;
use crate::complex::{RationalComplex, Simplex};
use crate::error::{Error, Result};
use crate::projectivity::{
    ConditionReport, ContractibilityStatus, DenominatorWitness, Evidence, ProjectivityCertificate,
    Verdict, Violation,
};
use crate::regularity::{RegularityReport, StrongRegularityReport};
use crate::synthesis::{CubeCertificate, PerpEmbedding, RetractionChain, XiConstructionTrace};
use crate::zmap::{IntegerAffinePiece, ZMap};

pub fn point_to_json(p: &Point) -> Value {
    Value::from(p.to_strings())
}

pub fn points_to_json(ps: &[Point]) -> Value {
    Value::Array(ps.iter().map(point_to_json).collect())
}

fn int_to_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(x.to_string()),
    }
}

/// Canonical vertex order and the simplexes renumbered accordingly.
fn canonical_parts(k: &RationalComplex) -> (Vec<Point>, HashMap<usize, usize>, Vec<Vec<usize>>) {
    let mut used: Vec<usize> = k.used_vertices().into_iter().collect();
    used.sort_by(|a, b| k.vertex(*a).cmp(k.vertex(*b)));
    let remap: HashMap<usize, usize> = used.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let vertices = used.iter().map(|&v| k.vertex(v).clone()).collect();
    let mut simplexes: Vec<Vec<usize>> = k
        .simplexes()
        .iter()
        .map(|s| {
            let mut ids: Vec<usize> = s.vertices().iter().map(|v| remap[v]).collect();
            ids.sort_unstable();
            ids
        })
        .collect();
    simplexes.sort();
    (vertices, remap, simplexes)
}

pub fn complex_to_json(k: &RationalComplex) -> Value {
    let (vertices, _, simplexes) = canonical_parts(k);
    json!({
        "ambient_dim": k.ambient_dim(),
        "vertices": points_to_json(&vertices),
        "simplexes": simplexes,
    })
}

fn at(path: &str, key: impl std::fmt::Display) -> String {
    format!("{path}.{key}")
}

fn field<'a>(v: &'a Value, path: &str, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::parse(at(path, key), "missing field"))
}

fn as_usize(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::parse(path, "expected a nonnegative integer"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::parse(path, "expected an array"))
}

fn parse_int(v: &Value, path: &str) -> Result<BigInt> {
    if let Some(i) = v.as_i64() {
        return Ok(BigInt::from(i));
    }
    v.as_str()
        .and_then(|s| BigInt::from_str(s.trim()).ok())
        .ok_or_else(|| Error::parse(path, "expected an integer or an integer string"))
}

pub fn point_from_json(v: &Value, path: &str) -> Result<Point> {
    let coords = as_array(v, path)?;
    coords
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let p = at(path, i);
            let s = c
                .as_str()
                .ok_or_else(|| Error::parse(p.clone(), "rationals must be strings"))?;
            crate::arith::parse_rational(s).map_err(|e| match e {
                Error::Parse { message, .. } => Error::parse(p.clone(), message),
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()
        .map(Point)
}

pub fn complex_from_json(v: &Value) -> Result<RationalComplex> {
    complex_from_json_at(v, "$")
}

fn complex_from_json_at(v: &Value, path: &str) -> Result<RationalComplex> {
    let n = as_usize(field(v, path, "ambient_dim")?, &at(path, "ambient_dim"))?;
    let vpath = at(path, "vertices");
    let vertices: Vec<Point> = as_array(field(v, path, "vertices")?, &vpath)?
        .iter()
        .enumerate()
        .map(|(i, p)| point_from_json(p, &at(&vpath, i)))
        .collect::<Result<_>>()?;
    for (i, p) in vertices.iter().enumerate() {
        if p.dim() != n {
            return Err(Error::parse(
                at(&vpath, i),
                format!("expected {n} coordinates, found {}", p.dim()),
            ));
        }
    }
    let spath = at(path, "simplexes");
    let mut simplexes = Vec::new();
    for (i, s) in as_array(field(v, path, "simplexes")?, &spath)?
        .iter()
        .enumerate()
    {
        let sp = at(&spath, i);
        let ids: Vec<usize> = as_array(s, &sp)?
            .iter()
            .enumerate()
            .map(|(j, x)| as_usize(x, &at(&sp, j)))
            .collect::<Result<_>>()?;
        if let Some(bad) = ids.iter().find(|&&x| x >= vertices.len()) {
            return Err(Error::parse(sp, format!("vertex id {bad} out of range")));
        }
        if ids.is_empty() {
            return Err(Error::parse(sp, "empty simplex"));
        }
        simplexes.push(ids);
    }
    RationalComplex::from_parts(n, vertices, simplexes)
        .map_err(|e| Error::parse(path, e.to_string()))
}

pub fn zmap_to_json(f: &ZMap) -> Value {
    let domain = f.domain();
    let (_, remap, _) = canonical_parts(domain);
    let mut pieces: Vec<(Vec<usize>, &IntegerAffinePiece)> = domain
        .simplexes()
        .iter()
        .zip(f.pieces())
        .map(|(s, p)| {
            let mut ids: Vec<usize> = s.vertices().iter().map(|v| remap[v]).collect();
            ids.sort_unstable();
            (ids, p)
        })
        .collect();
    pieces.sort_by(|a, b| a.0.cmp(&b.0));
    let pieces: Vec<Value> = pieces
        .into_iter()
        .map(|(ids, p)| {
            json!({
                "simplex": ids,
                "M": p.m.iter().map(|r| r.iter().map(int_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "b": p.b.iter().map(int_to_json).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "domain": complex_to_json(domain),
        "codomain_dim": f.codomain_dim(),
        "pieces": pieces,
    })
}

pub fn zmap_from_json(v: &Value) -> Result<ZMap> {
    let domain = complex_from_json_at(field(v, "$", "domain")?, "$.domain")?;
    let m = as_usize(field(v, "$", "codomain_dim")?, "$.codomain_dim")?;
    // Vertex ids in the file refer to the file's vertex table.
    let file_vertices: Vec<Point> = as_array(
        field(field(v, "$", "domain")?, "$.domain", "vertices")?,
        "$.domain.vertices",
    )?
    .iter()
    .enumerate()
    .map(|(i, p)| point_from_json(p, &at("$.domain.vertices", i)))
    .collect::<Result<_>>()?;
    let mut by_simplex: HashMap<Simplex, IntegerAffinePiece> = HashMap::new();
    for (i, piece) in as_array(field(v, "$", "pieces")?, "$.pieces")?
        .iter()
        .enumerate()
    {
        let pp = at("$.pieces", i);
        let ids: Vec<usize> = as_array(field(piece, &pp, "simplex")?, &at(&pp, "simplex"))?
            .iter()
            .map(|x| as_usize(x, &at(&pp, "simplex")))
            .collect::<Result<_>>()?;
        let mut sid = Vec::with_capacity(ids.len());
        for x in ids {
            let p = file_vertices.get(x).ok_or_else(|| {
                Error::parse(at(&pp, "simplex"), format!("vertex id {x} out of range"))
            })?;
            sid.push(domain.vertex_id(p).expect("vertex was loaded"));
        }
        let mrows = as_array(field(piece, &pp, "M")?, &at(&pp, "M"))?;
        let mat: Vec<Vec<BigInt>> = mrows
            .iter()
            .enumerate()
            .map(|(r, row)| {
                let rp = at(&at(&pp, "M"), r);
                as_array(row, &rp)?
                    .iter()
                    .map(|x| parse_int(x, &rp))
                    .collect()
            })
            .collect::<Result<_>>()?;
        let b: Vec<BigInt> = as_array(field(piece, &pp, "b")?, &at(&pp, "b"))?
            .iter()
            .map(|x| parse_int(x, &at(&pp, "b")))
            .collect::<Result<_>>()?;
        if mat.len() != m || b.len() != m || mat.iter().any(|r| r.len() != domain.ambient_dim()) {
            return Err(Error::parse(pp, "matrix or offset has the wrong shape"));
        }
        by_simplex.insert(Simplex::new(sid), IntegerAffinePiece { m: mat, b });
    }
    let pieces = domain
        .simplexes()
        .iter()
        .map(|s| {
            by_simplex
                .remove(s)
                .ok_or_else(|| Error::parse("$.pieces", format!("no piece for simplex {s}")))
        })
        .collect::<Result<Vec<_>>>()?;
    ZMap::new(domain, m, pieces).map_err(|e| Error::parse("$.pieces", e.to_string()))
}

pub fn digest(v: &Value) -> String {
    hex::encode(Sha256::digest(v.to_string().as_bytes()))
}

pub fn regularity_report_to_json(r: &RegularityReport) -> Value {
    json!({
        "regular": r.regular,
        "offending": r.offending.as_ref().map(|(s, g)| json!({"simplex": points_to_json(s), "minor_gcd": int_to_json(g)})),
    })
}

pub fn strong_report_to_json(r: &StrongRegularityReport) -> Value {
    json!({
        "strongly_regular": r.strongly_regular,
        "regular": r.regular,
        "gcds": r.gcds.iter().map(|(s, g)| json!({"simplex": points_to_json(s), "gcd": int_to_json(g)})).collect::<Vec<_>>(),
        "offending": r.offending.as_ref().map(|s| points_to_json(s)),
    })
}

pub fn collapse_to_json(k: &RationalComplex, seq: &CollapseSequence) -> Value {
    let pts = |s: &Simplex| points_to_json(&k.owned_points(s));
    json!({
        "steps": seq.steps.iter().map(|s| json!({
            "coface": pts(&s.coface),
            "face": pts(&s.face),
            "apex": point_to_json(k.vertex(s.apex)),
        })).collect::<Vec<_>>(),
        "terminal_vertex": seq.terminal_vertex.map(|v| point_to_json(k.vertex(v))),
    })
}

pub fn perp_to_json(p: &PerpEmbedding) -> Value {
    json!({
        "order": points_to_json(&p.order),
        "target": complex_to_json(&p.target),
        "forward": zmap_to_json(&p.forward),
        "backward": zmap_to_json(&p.backward),
    })
}

pub fn xi_trace_to_json(t: &XiConstructionTrace) -> Value {
    json!({
        "m": t.m.iter().map(int_to_json).collect::<Vec<_>>(),
        "s": t.s,
        "k": t.k,
        "mediants": points_to_json(&t.mediants),
        "p_star": point_to_json(&t.p_star),
        "reach_centers": points_to_json(&t.reach_centers),
        "vertex_values": t.vertex_values.iter().map(|(a, b)| json!([point_to_json(a), point_to_json(b)])).collect::<Vec<_>>(),
    })
}

fn stage_to_json(label: &str, map: &ZMap) -> Value {
    let m = zmap_to_json(map);
    json!({ "label": label, "digest": digest(&m), "map": m })
}

pub fn chain_to_json(chain: &RetractionChain) -> Value {
    Value::Array(
        chain
            .stages
            .iter()
            .map(|s| {
                let mut v = stage_to_json(&s.label, &s.map);
                v["verified"] = Value::Bool(s.certificate.is_some());
                v
            })
            .collect(),
    )
}

pub fn cube_certificate_to_json(c: &CubeCertificate) -> Value {
    let mut out = Map::new();
    out.insert("kind".into(), "retraction-certificate".into());
    out.insert("retraction".into(), stage_to_json("final", &c.retraction));
    out.insert("image".into(), complex_to_json(&c.certificate.image));
    out.insert("stages".into(), chain_to_json(&c.chain));
    if let Some(m) = &c.star_method {
        out.insert("mu_method".into(), m.clone().into());
    }
    Value::Object(out)
}

fn witness_to_json(w: &DenominatorWitness) -> Value {
    json!({
        "simplex": points_to_json(&w.simplex),
        "point": point_to_json(&w.point),
        "gcd": int_to_json(&w.gcd),
    })
}

pub fn condition_report_to_json(r: &ConditionReport) -> Value {
    let status = match r.cond_i {
        ContractibilityStatus::TreeYes => "tree-yes",
        ContractibilityStatus::TreeNo => "tree-no",
        ContractibilityStatus::CollapsibleYes => "collapsible-yes",
        ContractibilityStatus::Unknown => "unknown",
    };
    json!({
        "dim": r.dim,
        "cond_i": status,
        "cond_ii": r.cond_ii,
        "cube_vertex": r.cube_vertex.as_ref().map(point_to_json),
        "cond_iii": r.cond_iii,
        "strong_regularity": strong_report_to_json(&r.strong),
    })
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Projective => "projective",
        Verdict::NotProjective => "not_projective",
        Verdict::Unknown => "unknown",
    }
}

pub fn projectivity_to_json(c: &ProjectivityCertificate) -> Value {
    let evidence = match &c.evidence {
        Evidence::Retraction(r) => json!({ "retraction": cube_certificate_to_json(r) }),
        Evidence::PartialRetraction { chain, missing } => {
            json!({ "partial": { "stages": chain_to_json(chain), "missing": missing } })
        }
        Evidence::Violated(Violation::NotATree) => json!({ "violated": "not a tree" }),
        Evidence::Violated(Violation::NoCubeVertex) => {
            json!({ "violated": "no vertex of the cube" })
        }
        Evidence::Violated(Violation::NotStronglyRegular(w)) => {
            json!({ "violated": "not strongly regular", "witness": witness_to_json(w) })
        }
        Evidence::Undecided(why) => json!({ "undecided": why }),
    };
    json!({
        "verdict": verdict_name(c.verdict),
        "conditions": condition_report_to_json(&c.report),
        "evidence": evidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zmap::extend_vertex_map;

    #[test]
    fn complex_round_trip() {
        let k = RationalComplex::from_simplices(
            2,
            &[
                vec![
                    Point::from_fracs(&[(1, 2), (0, 1)]),
                    Point::from_ints(&[1, 1]),
                ],
                vec![Point::from_ints(&[1, 1]), Point::from_ints(&[0, 1])],
            ],
        )
        .unwrap();
        let j = complex_to_json(&k);
        let back = complex_from_json(&j).unwrap();
        assert!(back.same_as(&k));
        assert_eq!(complex_to_json(&back).to_string(), j.to_string());
    }

    #[test]
    fn zmap_round_trip_with_big_entries() {
        let k = RationalComplex::kuhn_cube(2);
        let f = extend_vertex_map(&k, 1, |p| {
            Point(vec![
                &p.0[0] * BigInt::from(1u64 << 40) * BigInt::from(1u64 << 40),
            ])
        })
        .unwrap();
        let j = zmap_to_json(&f);
        assert!(j.to_string().contains('"'));
        let g = zmap_from_json(&j).unwrap();
        assert_eq!(zmap_to_json(&g).to_string(), j.to_string());
        let x = Point::from_fracs(&[(1, 3), (2, 5)]);
        assert_eq!(f.eval(&x).unwrap(), g.eval(&x).unwrap());
    }

    #[test]
    fn parse_errors_carry_locations() {
        let bad = json!({"ambient_dim": 1, "vertices": [["1/0"]], "simplexes": [[0]]});
        match complex_from_json(&bad) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "$.vertices.0.0"),
            other => panic!("{other:?}"),
        }
        let bad = json!({"ambient_dim": 1, "vertices": [[0.5]], "simplexes": [[0]]});
        assert!(matches!(complex_from_json(&bad), Err(Error::Parse { .. })));
        let bad = json!({"ambient_dim": 1, "vertices": [["0"]], "simplexes": [[3]]});
        assert!(matches!(complex_from_json(&bad), Err(Error::Parse { .. })));
        assert!(matches!(
            complex_from_json(&json!({})),
            Err(Error::Parse { .. })
        ));
    }
}
