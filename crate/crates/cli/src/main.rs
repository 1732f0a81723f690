//! Command-line front end: parse divisor/family inputs, dispatch to the
//! library, emit JSON (and DOT for trees) with a stable schema.
//!
//! Inputs are either a JSON file `{"roots": ["0", "0", "inf"], ...}` or an
//! inline list `--roots "0,1,t^(-1),2*t^(-1)"`. Roots written as exact
//! constants (with `inf` allowed) describe a divisor; roots mentioning `t`
//! describe a Puiseux family. Multiplicities are by repetition.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use newton_moduli::berkovich::{
    kappa, marked_tree, semistable_locus, stable_curve, SemistableLocus,
};
use newton_moduli::error::Error;
use newton_moduli::iterate::iterate_report;
use newton_moduli::measure::{
    conformal_barycenter, levels_for_tail, measure_of_newton, theta_bar, MeasureClass, SpherePoint,
};
use newton_moduli::moduli::{conjugacy_test, git_class, GitClassDescriptor};
use newton_moduli::newton::{NewtonMap, RootDivisor};
use newton_moduli::parse::{parse_scalar, parse_series};
use newton_moduli::projective::P1Point;
use newton_moduli::puiseux::PuiseuxSeries;
use newton_moduli::stability::{classify_newton, StabilityVerdict};

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "newton-moduli")]
#[command(
    about = "Exact computation with degenerate Newton maps: stability, GIT classes, measures, Berkovich trees"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Stability verdict of a divisor, or a per-vertex table for a family.
    Classify {
        /// JSON input file (alternative to --roots)
        input: Option<String>,
        /// Inline roots, e.g. "0,0,inf" or "0,1,t"
        #[arg(long)]
        roots: Option<String>,
    },
    /// GIT class descriptor of a semistable divisor (or of a family via
    /// its semistable reduction).
    GitClass {
        input: Option<String>,
        #[arg(long)]
        roots: Option<String>,
    },
    /// Symbolic iterates with verdicts, budget-guarded.
    Iterate {
        input: Option<String>,
        #[arg(long)]
        roots: Option<String>,
        /// Number of iterates.
        #[arg(short = 'n', long, default_value_t = 2)]
        n: u32,
        /// Coefficient budget for d^n.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Truncated maximal measure with its exact tail bound.
    Measure {
        input: Option<String>,
        #[arg(long)]
        roots: Option<String>,
        /// Truncation level (default: tail below 1e-6, capped at 12).
        #[arg(long)]
        levels: Option<u32>,
    },
    /// Conformal barycenter and barycentered atoms, or the boundary
    /// half-atom descriptor.
    Barycenter {
        input: Option<String>,
        #[arg(long)]
        roots: Option<String>,
        #[arg(long)]
        levels: Option<u32>,
    },
    /// Marked tree of spheres of a family (JSON; optionally DOT).
    Tree {
        input: Option<String>,
        #[arg(long)]
        roots: Option<String>,
        /// Also write a DOT rendering here.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Semistable-reduction locus of a family.
    Hss {
        input: Option<String>,
        #[arg(long)]
        roots: Option<String>,
    },
    /// GIT class of a family through its semistable reduction.
    Kappa {
        input: Option<String>,
        #[arg(long)]
        roots: Option<String>,
    },
    /// Exact affine conjugacy between two divisors, or "none".
    Conjugate {
        /// First divisor: JSON file or inline list.
        a: String,
        /// Second divisor: JSON file or inline list.
        b: String,
    },
}

enum Input {
    Divisor(RootDivisor),
    Family(Vec<PuiseuxSeries>, Vec<String>),
}

fn load_raw(input: Option<&str>, roots: Option<&str>) -> Result<Vec<String>, Error> {
    match (input, roots) {
        (Some(_), Some(_)) => Err(Error::Parse {
            pos: 0,
            msg: "give either an input file or --roots, not both".into(),
        }),
        (None, None) => Err(Error::Parse {
            pos: 0,
            msg: "an input file or --roots is required".into(),
        }),
        (None, Some(list)) => Ok(list.split(',').map(|s| s.trim().to_string()).collect()),
        (Some(path), None) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Parse {
                pos: 0,
                msg: format!("cannot read {path}: {e}"),
            })?;
            let value: Value = serde_json::from_str(&text).map_err(|e| Error::Parse {
                pos: 0,
                msg: format!("invalid JSON in {path}: {e}"),
            })?;
            let roots = value
                .get("roots")
                .and_then(|r| r.as_array())
                .ok_or_else(|| Error::Parse {
                    pos: 0,
                    msg: format!("{path}: expected a \"roots\" array"),
                })?;
            let mut raw: Vec<String> = Vec::with_capacity(roots.len());
            for r in roots {
                match r.as_str() {
                    Some(s) => raw.push(s.to_string()),
                    None => raw.push(r.to_string()),
                }
            }
            if let Some(d) = value.get("degree").and_then(|d| d.as_u64()) {
                if d as usize != raw.len() {
                    return Err(Error::Parse {
                        pos: 0,
                        msg: format!("declared degree {d} does not match {} roots", raw.len()),
                    });
                }
            }
            if let Some(marks) = value.get("marks").and_then(|m| m.as_array()) {
                let idx: Option<Vec<usize>> = marks
                    .iter()
                    .map(|v| v.as_u64().map(|u| u as usize))
                    .collect();
                let idx = idx.ok_or_else(|| Error::Parse {
                    pos: 0,
                    msg: "marks must be integer indices".into(),
                })?;
                let mut sorted = idx.clone();
                sorted.sort_unstable();
                if sorted != (0..raw.len()).collect::<Vec<_>>() {
                    return Err(Error::Parse {
                        pos: 0,
                        msg: "marks must be a permutation of the root indices".into(),
                    });
                }
                raw = idx.into_iter().map(|i| raw[i].clone()).collect();
            }
            Ok(raw)
        }
    }
}

fn parse_input(raw: &[String]) -> Result<Input, Error> {
    let is_family = raw.iter().any(|r| r.contains('t'));
    let has_inf = raw.iter().any(|r| r == "inf");
    if is_family && has_inf {
        return Err(Error::Parse {
            pos: 0,
            msg: "families express escape to infinity with negative exponents, not \"inf\"".into(),
        });
    }
    if is_family {
        let mut roots = Vec::with_capacity(raw.len());
        for r in raw {
            roots.push(parse_series(r, None)?);
        }
        Ok(Input::Family(roots, raw.to_vec()))
    } else {
        let mut points = Vec::with_capacity(raw.len());
        for r in raw {
            if r == "inf" {
                points.push(P1Point::Infinity);
            } else {
                points.push(P1Point::Finite(parse_scalar(r)?));
            }
        }
        Ok(Input::Divisor(RootDivisor::from_points(points)?))
    }
}

fn divisor_json(d: &RootDivisor) -> Value {
    Value::Array(
        d.entries()
            .iter()
            .map(|(p, m)| json!([p.to_string(), m]))
            .collect(),
    )
}

fn verdict_json(v: &StabilityVerdict) -> Value {
    let witness = match &v.witness {
        None => Value::Null,
        Some(w) => json!({
            "depth": w.depth,
            "hole": w.hole.as_ref().map(|h| h.to_string()),
        }),
    };
    json!({ "verdict": v.kind.as_str(), "witness": witness })
}

fn class_json(c: &GitClassDescriptor) -> Value {
    match c {
        GitClassDescriptor::StrictlySemistable { degree } => json!({
            "kind": "strictly_semistable",
            "degree": degree,
        }),
        GitClassDescriptor::Stable {
            degree,
            configuration,
            infinity_multiplicity,
        } => json!({
            "kind": "stable",
            "degree": degree,
            "configuration": configuration
                .entries()
                .iter()
                .map(|(p, w)| json!([p.to_string(), w]))
                .collect::<Vec<_>>(),
            "infinity_multiplicity": infinity_multiplicity,
        }),
    }
}

fn sphere_point_json(p: &SpherePoint) -> Value {
    match p {
        SpherePoint::Infinity => json!("inf"),
        SpherePoint::Finite(z) => json!({ "re": z.re, "im": z.im }),
    }
}

fn newton_of(divisor: RootDivisor) -> Result<NewtonMap, Error> {
    NewtonMap::from_divisor(divisor)
}

fn run(cmd: &Cmd) -> Result<Value, Error> {
    match cmd {
        Cmd::Classify { input, roots } => {
            let raw = load_raw(input.as_deref(), roots.as_deref())?;
            match parse_input(&raw)? {
                Input::Divisor(d) => {
                    let n = newton_of(d.clone())?;
                    Ok(json!({
                        "schema": SCHEMA,
                        "command": "classify",
                        "degree": d.degree(),
                        "divisor": divisor_json(&d),
                        "classification": verdict_json(&classify_newton(&n)),
                    }))
                }
                Input::Family(f, raw) => {
                    let report = semistable_locus(&f)?;
                    let vertices: Vec<Value> = report
                        .tree
                        .vertices()
                        .iter()
                        .enumerate()
                        .map(|(i, v)| {
                            json!({
                                "vertex": v.label(),
                                "reduction": divisor_json(&report.vertex_divisors[i]),
                                "classification": verdict_json(&report.vertex_verdicts[i]),
                            })
                        })
                        .collect();
                    Ok(json!({
                        "schema": SCHEMA,
                        "command": "classify",
                        "family": raw,
                        "vertices": vertices,
                    }))
                }
            }
        }
        Cmd::GitClass { input, roots } => {
            let raw = load_raw(input.as_deref(), roots.as_deref())?;
            let class = match parse_input(&raw)? {
                Input::Divisor(d) => git_class(&newton_of(d)?)?,
                Input::Family(f, _) => kappa(&f)?,
            };
            Ok(json!({
                "schema": SCHEMA,
                "command": "git-class",
                "class": class_json(&class),
            }))
        }
        Cmd::Iterate {
            input,
            roots,
            n,
            budget,
        } => {
            let raw = load_raw(input.as_deref(), roots.as_deref())?;
            let divisor = match parse_input(&raw)? {
                Input::Divisor(d) => d,
                Input::Family(..) => {
                    return Err(Error::Parse {
                        pos: 0,
                        msg: "iterate expects a divisor input".into(),
                    })
                }
            };
            let map = newton_of(divisor)?;
            let report = iterate_report(&map, *n, *budget)?;
            let steps: Vec<Value> = report
                .steps
                .iter()
                .map(|s| {
                    json!({
                        "n": s.n,
                        "degree": s.degree,
                        "classification": verdict_json(&s.verdict),
                        "depth_profile": s.depth_profile
                            .iter()
                            .map(|(depth, count)| json!([depth, count]))
                            .collect::<Vec<_>>(),
                        "holes": s.holes.as_ref().map(|hs| {
                            hs.iter().map(|(p, m)| json!([p.to_string(), m])).collect::<Vec<_>>()
                        }),
                    })
                })
                .collect();
            Ok(json!({
                "schema": SCHEMA,
                "command": "iterate",
                "steps": steps,
                "final_pair": {
                    "numerator": report.pair.numerator().to_string(),
                    "denominator": report.pair.denominator().to_string(),
                },
            }))
        }
        Cmd::Measure {
            input,
            roots,
            levels,
        } => {
            let raw = load_raw(input.as_deref(), roots.as_deref())?;
            let divisor = match parse_input(&raw)? {
                Input::Divisor(d) => d,
                Input::Family(..) => {
                    return Err(Error::Parse {
                        pos: 0,
                        msg: "measure expects a divisor input".into(),
                    })
                }
            };
            let map = newton_of(divisor)?;
            let k = levels.unwrap_or_else(|| default_levels(&map));
            let measure = measure_of_newton(&map, k)?;
            let atoms: Vec<Value> = measure
                .atoms()
                .iter()
                .map(|(p, m)| {
                    json!({
                        "point": sphere_point_json(p),
                        "mass": m.to_string(),
                    })
                })
                .collect();
            Ok(json!({
                "schema": SCHEMA,
                "command": "measure",
                "levels": measure.levels(),
                "tail_bound": measure.tail_bound().to_string(),
                "total_mass": measure.total_mass().to_string(),
                "atoms": atoms,
            }))
        }
        Cmd::Barycenter {
            input,
            roots,
            levels,
        } => {
            let raw = load_raw(input.as_deref(), roots.as_deref())?;
            let divisor = match parse_input(&raw)? {
                Input::Divisor(d) => d,
                Input::Family(..) => {
                    return Err(Error::Parse {
                        pos: 0,
                        msg: "barycenter expects a divisor input".into(),
                    })
                }
            };
            let map = newton_of(divisor)?;
            let class = git_class(&map)?;
            let k = levels.unwrap_or_else(|| default_levels(&map));
            match theta_bar(&class, &map, k)? {
                MeasureClass::BoundaryHalfAtoms => Ok(json!({
                    "schema": SCHEMA,
                    "command": "barycenter",
                    "class": "half_atoms",
                    "description": "delta_0/2 + delta_inf/2",
                })),
                MeasureClass::Barycentered {
                    atoms,
                    tail_bound,
                    residual,
                } => {
                    let measure = measure_of_newton(&map, k)?;
                    let bc = conformal_barycenter(&measure)?;
                    Ok(json!({
                        "schema": SCHEMA,
                        "command": "barycenter",
                        "class": "barycentered",
                        "barycenter": bc.0,
                        "residual": residual,
                        "levels": k,
                        "tail_bound": tail_bound.to_string(),
                        "atoms": atoms
                            .iter()
                            .map(|(p, m)| json!({ "position": p, "mass": m.to_string() }))
                            .collect::<Vec<_>>(),
                    }))
                }
            }
        }
        Cmd::Tree { input, roots, dot } => {
            let raw = load_raw(input.as_deref(), roots.as_deref())?;
            let f = match parse_input(&raw)? {
                Input::Family(f, _) => f,
                Input::Divisor(_) => {
                    // constant roots are a legitimate (trivial) family
                    let mut series = Vec::with_capacity(raw.len());
                    for r in &raw {
                        series.push(parse_series(r, None)?);
                    }
                    series
                }
            };
            let t = marked_tree(&f)?;
            if let Some(path) = dot {
                fs::write(path, t.to_dot()).map_err(|e| Error::Parse {
                    pos: 0,
                    msg: format!("cannot write DOT file: {e}"),
                })?;
            }
            let curve = stable_curve(&t)?;
            let spheres: Vec<Value> = t
                .spheres
                .iter()
                .map(|s| {
                    json!({
                        "vertex": t.tree.vertex(s.vertex).label(),
                        "marks": s.marks
                            .iter()
                            .map(|(l, p)| json!([l.to_string(), p.to_string()]))
                            .collect::<Vec<_>>(),
                        "nodes": s.nodes
                            .iter()
                            .map(|(nb, p)| json!([t.tree.vertex(*nb).label(), p.to_string()]))
                            .collect::<Vec<_>>(),
                    })
                })
                .collect();
            Ok(json!({
                "schema": SCHEMA,
                "command": "tree",
                "vertices": t.tree.vertices().iter().map(|v| v.label()).collect::<Vec<_>>(),
                "edges": t.tree.edges()
                    .iter()
                    .map(|(c, p, len)| json!([
                        t.tree.vertex(*c).label(),
                        t.tree.vertex(*p).label(),
                        len.to_string()
                    ]))
                    .collect::<Vec<_>>(),
                "spheres": spheres,
                "stable_curve": {
                    "components": curve.components.len(),
                    "marks": curve.mark_count,
                    "nodes": curve.node_count,
                },
            }))
        }
        Cmd::Hss { input, roots } => {
            let raw = load_raw(input.as_deref(), roots.as_deref())?;
            let f = match parse_input(&raw)? {
                Input::Family(f, _) => f,
                Input::Divisor(_) => {
                    let mut series = Vec::with_capacity(raw.len());
                    for r in &raw {
                        series.push(parse_series(r, None)?);
                    }
                    series
                }
            };
            let report = semistable_locus(&f)?;
            let locus = match &report.locus {
                SemistableLocus::UniqueStableVertex(v) => json!({
                    "kind": "unique_stable_vertex",
                    "vertex": report.tree.vertex(*v).label(),
                }),
                SemistableLocus::SemistableRegion { vertices, edges } => json!({
                    "kind": "semistable_region",
                    "vertices": vertices
                        .iter()
                        .map(|v| report.tree.vertex(*v).label())
                        .collect::<Vec<_>>(),
                    "segments": edges
                        .iter()
                        .map(|(c, p)| json!([
                            report.tree.vertex(*c).label(),
                            report.tree.vertex(*p).label()
                        ]))
                        .collect::<Vec<_>>(),
                }),
            };
            let vertices: Vec<Value> = report
                .tree
                .vertices()
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    json!({
                        "vertex": v.label(),
                        "reduction": divisor_json(&report.vertex_divisors[i]),
                        "classification": verdict_json(&report.vertex_verdicts[i]),
                    })
                })
                .collect();
            Ok(json!({
                "schema": SCHEMA,
                "command": "hss",
                "locus": locus,
                "vertices": vertices,
            }))
        }
        Cmd::Kappa { input, roots } => {
            let raw = load_raw(input.as_deref(), roots.as_deref())?;
            let f = match parse_input(&raw)? {
                Input::Family(f, _) => f,
                Input::Divisor(_) => {
                    let mut series = Vec::with_capacity(raw.len());
                    for r in &raw {
                        series.push(parse_series(r, None)?);
                    }
                    series
                }
            };
            let class = kappa(&f)?;
            Ok(json!({
                "schema": SCHEMA,
                "command": "kappa",
                "class": class_json(&class),
            }))
        }
        Cmd::Conjugate { a, b } => {
            let parse_one = |spec: &str| -> Result<RootDivisor, Error> {
                let raw = if std::path::Path::new(spec).exists() {
                    load_raw(Some(spec), None)?
                } else {
                    spec.split(',').map(|s| s.trim().to_string()).collect()
                };
                match parse_input(&raw)? {
                    Input::Divisor(d) => Ok(d),
                    Input::Family(..) => Err(Error::Parse {
                        pos: 0,
                        msg: "conjugate expects divisor inputs".into(),
                    }),
                }
            };
            let na = newton_of(parse_one(a)?)?;
            let nb = newton_of(parse_one(b)?)?;
            let conj = conjugacy_test(&na, &nb).map(|(scale, offset)| {
                json!({ "scale": scale.to_string(), "offset": offset.to_string() })
            });
            Ok(json!({
                "schema": SCHEMA,
                "command": "conjugate",
                "conjugacy": conj,
            }))
        }
    }
}

/// Default levels: tail below 1e-6, hard cap 12.
fn default_levels(map: &NewtonMap) -> u32 {
    let bound = num_rational::BigRational::new(1.into(), 1_000_000.into());
    levels_for_tail(map.pair(), &bound, 12)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (payload, code) = match run(&cli.cmd) {
        Ok(v) => (v, ExitCode::SUCCESS),
        Err(e) => (
            json!({
                "schema": SCHEMA,
                "error": { "code": e.code(), "message": e.to_string() },
            }),
            ExitCode::FAILURE,
        ),
    };
    let rendered = serde_json::to_string_pretty(&payload).expect("serializable report");
    match &cli.out {
        None => println!("{rendered}"),
        Some(path) => {
            if let Err(e) = fs::write(path, rendered + "\n") {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::FAILURE;
            }
        }
    }
    code
}
