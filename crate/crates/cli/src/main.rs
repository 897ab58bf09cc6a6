use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use zretract::collapse::{find_collapse_sequence, CollapseOutcome, NotFound};
use zretract::desingularize::{desingularize_with_budget, reach_vertex_in};
use zretract::io;
use zretract::projectivity::{certify_projective, Verdict};
use zretract::regularity::{farey_mediant, is_regular_complex, is_strongly_regular};
use zretract::synthesis::{
    build_cube_retraction, perp_embed, verified_xi_retraction, BuildOptions, CubeRetraction,
    StarOptions,
};
use zretract::zmap::{verify_retraction, RetractionCheck};
use zretract::{Error, Point, RationalComplex};

const SUCCESS: u8 = 0;
const NEGATIVE: u8 = 1;
const UNKNOWN: u8 = 2;
const INPUT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(
    name = "zretract",
    version,
    about = "Exact Z-retractions of rational polyhedra in the unit cube"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Input file (complex or Z-map JSON).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Write the JSON result here.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Print JSON instead of a summary.
    #[arg(long)]
    json: bool,
    /// Cap on search steps.
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Check that every maximal simplex is regular.
    CheckRegular(Common),
    /// Check strong regularity (gcd of denominators is 1 on every maximal simplex).
    CheckStrong(Common),
    /// Blow up at the given points, in order.
    Blowup {
        #[command(flatten)]
        common: Common,
        #[arg(long = "point", required = true)]
        points: Vec<String>,
    },
    /// Farey mediant of the given points.
    Mediant {
        #[command(flatten)]
        common: Common,
        #[arg(long = "point", required = true)]
        points: Vec<String>,
    },
    /// Regular subdivision with strongly regular refinement where possible.
    Desingularize(Common),
    /// Blow up until the point becomes a vertex.
    ReachVertex {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        point: String,
    },
    /// Search for a collapse to a vertex.
    Collapse(Common),
    /// Embed a complex onto coordinate axes.
    Perp(Common),
    /// Build the retraction onto M together with the cone over a facet.
    Xi {
        #[command(flatten)]
        common: Common,
        /// Vertex denominators, comma separated.
        #[arg(long)]
        m: String,
        /// Number of vertices spanning the facet.
        #[arg(long)]
        s: usize,
    },
    /// Build a retraction of the cube onto the polyhedron.
    Retract(Common),
    /// Decide projectivity and emit a certificate.
    Certify(Common),
    /// Evaluate a Z-map at a point.
    Eval {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        point: String,
    },
    /// Validate a Z-map file.
    VerifyMap {
        #[command(flatten)]
        common: Common,
        /// Also check that the map is a retraction.
        #[arg(long)]
        as_retraction: bool,
    },
}

struct Outcome {
    code: u8,
    summary: String,
    json: Value,
}

fn outcome(code: u8, summary: impl Into<String>, json: Value) -> Outcome {
    Outcome {
        code,
        summary: summary.into(),
        json,
    }
}

fn read_json(common: &Common) -> Result<Value, Error> {
    let path = common
        .input
        .as_ref()
        .ok_or_else(|| Error::parse("--input", "missing input file"))?;
    let text = fs::read_to_string(path)
        .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
    serde_json::from_str(&text).map_err(|e| {
        Error::parse(
            format!("{}:{}:{}", path.display(), e.line(), e.column()),
            e.to_string(),
        )
    })
}

/// A Z-map file, or the final map of a retraction certificate.
fn read_zmap(common: &Common) -> Result<zretract::zmap::ZMap, Error> {
    let v = read_json(common)?;
    match v.get("retraction").and_then(|r| r.get("map")) {
        Some(m) => io::zmap_from_json(m),
        None => io::zmap_from_json(&v),
    }
}

fn read_complex(common: &Common) -> Result<RationalComplex, Error> {
    io::complex_from_json(&read_json(common)?)
}

fn parse_point(s: &str) -> Result<Point, Error> {
    Point::parse(s).map_err(|e| match e {
        Error::Parse { message, .. } => Error::parse("--point", message),
        other => other,
    })
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::InvalidComplex(_) | Error::DimensionMismatch { .. } => {
            INPUT_ERROR
        }
        Error::BudgetExhausted(_) | Error::StrategyGap(_) => UNKNOWN,
        _ => NEGATIVE,
    }
}

fn build_options(common: &Common) -> BuildOptions {
    let mut options = BuildOptions::default();
    if let Some(b) = common.budget {
        options.star = StarOptions {
            budget: b,
            ..options.star
        };
        options.collapse_budget = b;
        options.blow_up_budget = b;
    }
    options
}

fn run(cmd: &Command) -> Result<Outcome, Error> {
    Ok(match cmd {
        Command::CheckRegular(c) => {
            let r = is_regular_complex(&read_complex(c)?);
            let code = if r.regular { SUCCESS } else { NEGATIVE };
            let summary = match &r.offending {
                None => "regular".to_string(),
                Some((_, g)) => format!("not regular: a maximal simplex has multiplicity {g}"),
            };
            outcome(code, summary, io::regularity_report_to_json(&r))
        }
        Command::CheckStrong(c) => {
            let r = is_strongly_regular(&read_complex(c)?);
            let code = if r.strongly_regular {
                SUCCESS
            } else {
                NEGATIVE
            };
            let summary = if r.strongly_regular {
                "strongly regular".to_string()
            } else if !r.regular {
                "not regular".to_string()
            } else {
                let g = r
                    .gcds
                    .iter()
                    .map(|(_, g)| g)
                    .max()
                    .cloned()
                    .unwrap_or_default();
                format!("not strongly regular: denominator gcd {g}")
            };
            outcome(code, summary, io::strong_report_to_json(&r))
        }
        Command::Blowup { common, points } => {
            let k = read_complex(common)?;
            let pts = points
                .iter()
                .map(|s| parse_point(s))
                .collect::<Result<Vec<_>, _>>()?;
            let out = k.iterated_blow_up(&pts)?;
            outcome(
                SUCCESS,
                format!("{} maximal simplexes", out.simplexes().len()),
                io::complex_to_json(&out),
            )
        }
        Command::Mediant { points, .. } => {
            let pts = points
                .iter()
                .map(|s| parse_point(s))
                .collect::<Result<Vec<_>, _>>()?;
            let refs: Vec<&Point> = pts.iter().collect();
            let m = farey_mediant(&refs)?;
            outcome(SUCCESS, m.to_string(), io::point_to_json(&m))
        }
        Command::Desingularize(c) => {
            let k = read_complex(c)?;
            let out = desingularize_with_budget(&k, c.budget.unwrap_or(100_000))?;
            outcome(
                SUCCESS,
                format!("{} maximal simplexes", out.simplexes().len()),
                io::complex_to_json(&out),
            )
        }
        Command::ReachVertex { common, point } => {
            let k = read_complex(common)?;
            let v = parse_point(point)?;
            let t = reach_vertex_in(&k, &v)?;
            let j = json!({
                "centers": io::points_to_json(&t.centers),
                "complex": io::complex_to_json(t.final_complex()),
            });
            outcome(SUCCESS, format!("{} blow-ups", t.centers.len()), j)
        }
        Command::Collapse(c) => {
            let k = read_complex(c)?;
            match find_collapse_sequence(&k, c.budget.unwrap_or(1_000_000)) {
                CollapseOutcome::Found(seq) => outcome(
                    SUCCESS,
                    format!("collapsible in {} steps", seq.steps.len()),
                    io::collapse_to_json(&k, &seq),
                ),
                CollapseOutcome::NotFound(NotFound::ProvablyNone) => {
                    outcome(NEGATIVE, "not collapsible", json!({"collapsible": false}))
                }
                CollapseOutcome::NotFound(NotFound::Budget(b)) => outcome(
                    UNKNOWN,
                    format!("budget of {b} exhausted"),
                    json!({"collapsible": null, "budget": b}),
                ),
            }
        }
        Command::Perp(c) => {
            let p = perp_embed(&read_complex(c)?)?;
            outcome(
                SUCCESS,
                format!("embedded into dimension {}", p.target.ambient_dim()),
                io::perp_to_json(&p),
            )
        }
        Command::Xi { m, s, .. } => {
            let dens = m
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<BigInt>()
                        .map_err(|e| Error::parse("--m", e.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let (map, trace) = verified_xi_retraction(&dens, *s)?;
            let j = json!({ "retraction": io::zmap_to_json(&map), "trace": io::xi_trace_to_json(&trace) });
            outcome(
                SUCCESS,
                format!("verified retraction with {} pieces", map.pieces().len()),
                j,
            )
        }
        Command::Retract(c) => {
            let p = read_complex(c)?;
            match build_cube_retraction(&p, &build_options(c))? {
                CubeRetraction::Certificate(cert) => outcome(
                    SUCCESS,
                    format!(
                        "verified retraction with {} pieces",
                        cert.retraction.pieces().len()
                    ),
                    io::cube_certificate_to_json(&cert),
                ),
                CubeRetraction::Partial { chain, missing } => outcome(
                    UNKNOWN,
                    format!("partial: {missing}"),
                    json!({ "partial": { "stages": io::chain_to_json(&chain), "missing": missing } }),
                ),
            }
        }
        Command::Certify(c) => {
            let p = read_complex(c)?;
            let cert = certify_projective(&p, &build_options(c))?;
            let code = match cert.verdict {
                Verdict::Projective => SUCCESS,
                Verdict::NotProjective => NEGATIVE,
                Verdict::Unknown => UNKNOWN,
            };
            let j = io::projectivity_to_json(&cert);
            let mut summary = io::verdict_name(cert.verdict).to_string();
            if let Some(w) = j["evidence"].get("witness") {
                summary.push_str(&format!(": witness {} with gcd {}", w["point"], w["gcd"]));
            } else if let Some(v) = j["evidence"].get("violated") {
                summary.push_str(&format!(": {}", v.as_str().unwrap_or_default()));
            }
            outcome(code, summary, j)
        }
        Command::Eval { common, point } => {
            let f = read_zmap(common)?;
            let x = parse_point(point)?;
            let y = f.eval(&x)?;
            outcome(SUCCESS, y.to_string(), io::point_to_json(&y))
        }
        Command::VerifyMap {
            common,
            as_retraction,
        } => {
            let f = read_zmap(common)?;
            if !as_retraction {
                return Ok(outcome(SUCCESS, "valid Z-map", json!({"valid": true})));
            }
            match verify_retraction(&f) {
                RetractionCheck::Retraction(cert) => outcome(
                    SUCCESS,
                    "retraction",
                    json!({"retraction": true, "image": io::complex_to_json(&cert.image)}),
                ),
                RetractionCheck::Failure { witness, reason } => outcome(
                    NEGATIVE,
                    format!("not a retraction: {reason}"),
                    json!({"retraction": false, "reason": reason, "witness": witness.as_ref().map(io::point_to_json)}),
                ),
            }
        }
    })
}

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::CheckRegular(c)
        | Command::CheckStrong(c)
        | Command::Desingularize(c)
        | Command::Collapse(c)
        | Command::Perp(c)
        | Command::Retract(c)
        | Command::Certify(c) => c,
        Command::Blowup { common, .. }
        | Command::Mediant { common, .. }
        | Command::ReachVertex { common, .. }
        | Command::Xi { common, .. }
        | Command::Eval { common, .. }
        | Command::VerifyMap { common, .. } => common,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = common(&cli.command);
    let result = run(&cli.command).unwrap_or_else(|e| {
        let code = error_code(&e);
        let mut j = json!({ "error": e.to_string() });
        if let Error::Parse { location, .. } = &e {
            j["location"] = Value::from(location.clone());
        }
        outcome(code, format!("error: {e}"), j)
    });
    if let Some(path) = &c.output {
        if let Err(e) = fs::write(path, format!("{}\n", result.json)) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(INPUT_ERROR);
        }
    }
    if c.json {
        println!("{}", result.json);
    } else if result.code == INPUT_ERROR
        || (result.code != SUCCESS && result.summary.starts_with("error"))
    {
        eprintln!("{}", result.summary);
    } else {
        println!("{}", result.summary);
    }
    ExitCode::from(result.code)
}
