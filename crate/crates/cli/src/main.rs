//! cechdr — run the library's constructions from JSON description files.
//!
//! Every command loads a workspace (defaulting to `corpus/*.json`), runs
//! one computation, prints a single JSON report line to stdout and a short
//! human summary to stderr. Exit codes: 0 success, 1 mathematical failure,
//! 2 parse error, 3 validation failure or unresolved reference.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use cechdr::cochain::{cup, Cochain, TotalCochain};
use cechdr::cohomology::cohomology;
use cechdr::cohomology::{CohomologyClass, CohomologyGroup};
use cechdr::extension::{associator, build_extension, ExtensionOutcome};
use cechdr::gerbe::{chern_class, dd_class, holonomy, is_flat, ClassReport};
use cechdr::io::{self, Workspace};
use cechdr::morita::compare_cohomology;
use cechdr::prequant::{prequantize_bundle, prequantize_gerbe, Prequantization};
use cechdr::space::stack_dimension;
use cechdr::tau::tau_maps;
use cechdr::{Error, MorphismKind, Result, Ring};

#[derive(Parser)]
#[command(
    name = "cechdr",
    version,
    about = "Čech-de Rham computations on truncated semi-simplicial spaces"
)]
struct Cli {
    /// Description file; repeat for several. Defaults to corpus/*.json.
    #[arg(long = "file", value_name = "PATH", global = true)]
    files: Vec<PathBuf>,
    /// Also write the JSON report to this path.
    #[arg(long, value_name = "PATH", global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the workspace, or describe one named entity.
    Validate {
        #[arg(long)]
        space: Option<String>,
        #[arg(long)]
        bundle: Option<String>,
        #[arg(long)]
        gerbe: Option<String>,
        #[arg(long)]
        morphism: Option<String>,
    },
    /// List a space level by level, with vertex labels where present.
    Nerve {
        #[arg(long)]
        space: String,
    },
    /// Cohomology of a space in one degree or through degrees 0..=max.
    Cohomology {
        #[arg(long)]
        space: String,
        /// Z, Q, Zmod:n or QmodZ.
        #[arg(long)]
        ring: String,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Cup product of two single-level cochains.
    Cup {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
    /// First Chern class of a bundle cocycle.
    Chern {
        #[arg(long)]
        bundle: String,
    },
    /// Dixmier-Douady class of a gerbe cocycle.
    Dd {
        #[arg(long)]
        gerbe: String,
    },
    /// Build the central extension presented by a gerbe on a nerve.
    Extension {
        #[arg(long)]
        gerbe: String,
        /// Order of the central kernel; must clear every denominator.
        #[arg(long)]
        n: u32,
    },
    /// Associator of a gerbe's groupoid-level component.
    Associator {
        #[arg(long)]
        gerbe: String,
    },
    /// Decide flatness and produce a flat connection when one exists.
    Flat {
        #[arg(long)]
        bundle: Option<String>,
        #[arg(long)]
        gerbe: Option<String>,
    },
    /// Holonomy class of a flat bundle or gerbe.
    Holonomy {
        #[arg(long)]
        bundle: Option<String>,
        #[arg(long)]
        gerbe: Option<String>,
    },
    /// Quantize an integral degree-2 cochain into a bundle with connection.
    PrequantizeBundle {
        #[arg(long)]
        cochain: String,
    },
    /// Quantize an integral degree-3 cochain into a gerbe with connection.
    PrequantizeGerbe {
        #[arg(long)]
        cochain: String,
    },
    /// Exactness of the low-degree comparison sequence mod n.
    TauExactness {
        #[arg(long)]
        space: String,
        #[arg(long)]
        n: u32,
    },
    /// Compare cohomology across a morphism, degree by degree.
    MoritaCompare {
        #[arg(long)]
        morphism: String,
        /// Z, Q, Zmod:n or QmodZ.
        #[arg(long)]
        ring: String,
        #[arg(long)]
        max_degree: usize,
    },
    /// Dimension of the stack presented by a space.
    Dimension {
        #[arg(long)]
        space: String,
    },
}

struct Outcome {
    report: Value,
    summary: String,
    exit: u8,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    match run(cli) {
        Ok(o) => {
            let text = format!("{}\n", serde_json::to_string(&o.report).unwrap());
            print!("{text}");
            if let Some(path) = out {
                if let Err(e) = std::fs::write(&path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            eprintln!("{}", o.summary);
            ExitCode::from(o.exit)
        }
        Err(e) => {
            let report = json!({"schema": io::SCHEMA, "error": e.to_string()});
            println!("{}", serde_json::to_string(&report).unwrap());
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Math(_) => 1,
                Error::Parse(_) => 2,
                Error::Validation(_) | Error::Unresolved(_) => 3,
            })
        }
    }
}

fn default_files() -> Vec<PathBuf> {
    let Ok(dir) = std::fs::read_dir("corpus") else {
        return Vec::new();
    };
    let mut files: Vec<PathBuf> = dir
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
}

fn run(cli: Cli) -> Result<Outcome> {
    let files = if cli.files.is_empty() {
        default_files()
    } else {
        cli.files
    };
    let ws = io::load(&files)?;
    match cli.command {
        Cmd::Validate {
            space,
            bundle,
            gerbe,
            morphism,
        } => validate(&ws, space, bundle, gerbe, morphism),
        Cmd::Nerve { space } => levels(&ws, &space),
        Cmd::Cohomology {
            space,
            ring,
            degree,
            max_degree,
        } => groups(&ws, &space, &ring, degree, max_degree),
        Cmd::Cup { lhs, rhs } => cup_cmd(&ws, &lhs, &rhs),
        Cmd::Chern { bundle } => {
            let b = ws.bundle(&bundle)?;
            class_cmd("chern", "bundle", &bundle, chern_class(b)?)
        }
        Cmd::Dd { gerbe } => {
            let g = ws.gerbe(&gerbe)?;
            class_cmd("dd", "gerbe", &gerbe, dd_class(g)?)
        }
        Cmd::Extension { gerbe, n } => extension_cmd(&ws, &gerbe, n),
        Cmd::Associator { gerbe } => associator_cmd(&ws, &gerbe),
        Cmd::Flat { bundle, gerbe } => flat_cmd(&ws, bundle, gerbe),
        Cmd::Holonomy { bundle, gerbe } => holonomy_cmd(&ws, bundle, gerbe),
        Cmd::PrequantizeBundle { cochain } => prequantize(&ws, &cochain, false),
        Cmd::PrequantizeGerbe { cochain } => prequantize(&ws, &cochain, true),
        Cmd::TauExactness { space, n } => tau_cmd(&ws, &space, n),
        Cmd::MoritaCompare {
            morphism,
            ring,
            max_degree,
        } => compare_cmd(&ws, &morphism, &ring, max_degree),
        Cmd::Dimension { space } => {
            let s = ws.space(&space)?;
            let d = stack_dimension(s)?;
            Ok(Outcome {
                report: envelope("dimension", json!({"space": space, "dimension": d})),
                summary: format!("{space}: dimension {d}"),
                exit: 0,
            })
        }
    }
}

fn envelope(command: &str, body: Value) -> Value {
    let mut map = match body {
        Value::Object(m) => m,
        _ => unreachable!("report bodies are objects"),
    };
    map.insert("schema".into(), json!(io::SCHEMA));
    map.insert("command".into(), json!(command));
    Value::Object(map)
}

fn triples_value(c: &TotalCochain) -> Value {
    Value::Array(
        io::cochain_triples(c)
            .into_iter()
            .map(|(s, p, v)| json!([s, p, v]))
            .collect(),
    )
}

fn part_triples_value(c: &Cochain) -> Value {
    Value::Array(
        c.support()
            .map(|(s, v)| json!([s.vertices(), c.p(), io::rational_string(v)]))
            .collect(),
    )
}

fn group_value(g: &CohomologyGroup) -> Value {
    json!({
        "degree": g.degree,
        "free_rank": g.free_rank,
        "torsion": g.torsion.iter().map(io::int_value).collect::<Vec<_>>(),
    })
}

fn class_value(c: &CohomologyClass) -> Value {
    json!({
        "torsion": c.torsion.iter().map(io::int_value).collect::<Vec<_>>(),
        "free": c.free.iter().map(io::rational_string).collect::<Vec<_>>(),
        "zero": c.is_zero(),
    })
}

fn shape_value(free_rank: usize, torsion: &[num::BigInt]) -> Value {
    json!({
        "free_rank": free_rank,
        "torsion": torsion.iter().map(io::int_value).collect::<Vec<_>>(),
    })
}

fn validate(
    ws: &Workspace,
    space: Option<String>,
    bundle: Option<String>,
    gerbe: Option<String>,
    morphism: Option<String>,
) -> Result<Outcome> {
    let picks = [&space, &bundle, &gerbe, &morphism]
        .iter()
        .filter(|o| o.is_some())
        .count();
    if picks > 1 {
        return Err(Error::validation(
            "validate takes at most one of --space, --bundle, --gerbe, --morphism",
        ));
    }
    if let Some(name) = space {
        let s = ws.space(&name)?;
        let report = s.validate();
        let ok = report.violations.is_empty();
        let sizes: Vec<usize> = s.levels().iter().map(|l| l.vertices().count()).collect();
        return Ok(Outcome {
            report: envelope(
                "validate",
                json!({
                    "entity": name, "kind": "space", "ok": ok,
                    "level_sizes": sizes, "violations": report.violations,
                }),
            ),
            summary: if ok {
                format!("space {name}: ok, level sizes {sizes:?}")
            } else {
                format!("space {name}: {} violations", report.violations.len())
            },
            exit: if ok { 0 } else { 3 },
        });
    }
    if let Some(name) = bundle {
        let b = ws.bundle(&name)?;
        return Ok(Outcome {
            report: envelope(
                "validate",
                json!({
                    "entity": name, "kind": "bundle", "ok": true,
                    "degree": b.cocycle().degree(),
                    "support": io::cochain_triples(b.cocycle()).len(),
                }),
            ),
            summary: format!("bundle {name}: ok"),
            exit: 0,
        });
    }
    if let Some(name) = gerbe {
        let g = ws.gerbe(&name)?;
        return Ok(Outcome {
            report: envelope(
                "validate",
                json!({
                    "entity": name, "kind": "gerbe", "ok": true,
                    "degree": g.cocycle().degree(),
                    "support": io::cochain_triples(g.cocycle()).len(),
                }),
            ),
            summary: format!("gerbe {name}: ok"),
            exit: 0,
        });
    }
    if let Some(name) = morphism {
        let m = ws.morphism(&name)?;
        let kind = match m.kind() {
            MorphismKind::Refinement => "refinement",
            MorphismKind::Pullback => "pullback",
            MorphismKind::Explicit => "explicit",
        };
        return Ok(Outcome {
            report: envelope(
                "validate",
                json!({
                    "entity": name, "kind": "morphism", "ok": true,
                    "morphism_kind": kind,
                    "truncation": m.source().truncation(),
                }),
            ),
            summary: format!("morphism {name}: ok ({kind})"),
            exit: 0,
        });
    }
    let counts = json!({
        "complexes": ws.complexes.len(),
        "covers": ws.covers.len(),
        "groupoids": ws.groupoids.len(),
        "spaces": ws.spaces.len(),
        "cochains": ws.cochains.len(),
        "bundles": ws.bundles.len(),
        "gerbes": ws.gerbes.len(),
        "morphisms": ws.morphisms.len(),
    });
    let total = ws.complexes.len()
        + ws.covers.len()
        + ws.groupoids.len()
        + ws.spaces.len()
        + ws.cochains.len()
        + ws.bundles.len()
        + ws.gerbes.len()
        + ws.morphisms.len();
    Ok(Outcome {
        report: envelope("validate", json!({"ok": true, "counts": counts})),
        summary: format!("workspace ok: {total} entities"),
        exit: 0,
    })
}

fn levels(ws: &Workspace, name: &str) -> Result<Outcome> {
    let s = ws.space(name)?;
    let mut levels = Vec::new();
    for (p, level) in s.levels().iter().enumerate() {
        let vertices: Vec<Value> = level
            .vertices()
            .map(|v| match s.label(p, v) {
                Some(l) => json!([v, l]),
                None => json!([v, Value::Null]),
            })
            .collect();
        levels.push(json!({"level": p, "size": vertices.len(), "vertices": vertices}));
    }
    let sizes: Vec<usize> = s.levels().iter().map(|l| l.vertices().count()).collect();
    Ok(Outcome {
        report: envelope("nerve", json!({"space": name, "levels": levels})),
        summary: format!("{name}: level sizes {sizes:?}"),
        exit: 0,
    })
}

fn groups(
    ws: &Workspace,
    space: &str,
    ring: &str,
    degree: Option<usize>,
    max_degree: Option<usize>,
) -> Result<Outcome> {
    let s = ws.space(space)?;
    let r = io::parse_ring(ring)?;
    let degrees: Vec<usize> = match (degree, max_degree) {
        (Some(n), None) => vec![n],
        (None, Some(m)) => (0..=m).collect(),
        _ => {
            return Err(Error::validation(
                "pick exactly one of --degree and --max-degree",
            ))
        }
    };
    let mut groups = Vec::new();
    let mut lines = Vec::new();
    for n in degrees {
        let g = cohomology(s, r, n)?;
        lines.push(format!(
            "H^{n}({space}; {ring}) = free rank {}, torsion {:?}",
            g.free_rank, g.torsion
        ));
        groups.push(group_value(&g));
    }
    Ok(Outcome {
        report: envelope(
            "cohomology",
            json!({"space": space, "ring": ring, "groups": groups}),
        ),
        summary: lines.join("; "),
        exit: 0,
    })
}

fn single_part<'a>(c: &'a TotalCochain, name: &str) -> Result<&'a Cochain> {
    let mut parts = c.parts();
    match (parts.next(), parts.next()) {
        (Some((_, part)), None) => Ok(part),
        _ => Err(Error::validation(format!(
            "cochain {name} must be concentrated in a single level"
        ))),
    }
}

fn cup_cmd(ws: &Workspace, lhs: &str, rhs: &str) -> Result<Outcome> {
    let a = single_part(ws.cochain(lhs)?, lhs)?;
    let b = single_part(ws.cochain(rhs)?, rhs)?;
    let c = cup(a, b)?;
    let support = c.support().count();
    Ok(Outcome {
        report: envelope(
            "cup",
            json!({
                "lhs": lhs, "rhs": rhs,
                "degree": c.k() + c.p(),
                "ring": io::ring_name(c.ring()),
                "values": part_triples_value(&c),
            }),
        ),
        summary: format!(
            "{lhs} ∪ {rhs}: bidegree ({}, {}), {support} nonzero values",
            c.k(),
            c.p()
        ),
        exit: 0,
    })
}

fn class_cmd(command: &str, kind: &str, name: &str, r: ClassReport) -> Result<Outcome> {
    let zero = r.class.is_zero();
    let what = if command == "chern" {
        "chern class"
    } else {
        "Dixmier-Douady class"
    };
    Ok(Outcome {
        report: envelope(
            command,
            json!({
                kind: name,
                "degree": r.group.degree,
                "group": group_value(&r.group),
                "class": class_value(&r.class),
                "curvature": triples_value(&r.curvature.cocycle),
                "zero": zero,
            }),
        ),
        summary: format!(
            "{what} of {name}: {} in H^{} (free rank {}, torsion {:?})",
            if zero { "zero" } else { "nonzero" },
            r.group.degree,
            r.group.free_rank,
            r.group.torsion
        ),
        exit: 0,
    })
}

fn extension_cmd(ws: &Workspace, gerbe: &str, n: u32) -> Result<Outcome> {
    let g = ws.gerbe(gerbe)?;
    let nerve = ws.nerve_for_space(g.cocycle().space())?;
    match build_extension(nerve, g, n)? {
        ExtensionOutcome::Built(e) => Ok(Outcome {
            report: envelope(
                "extension",
                json!({
                    "gerbe": gerbe, "built": true, "modulus": e.modulus,
                    "objects": e.groupoid.objects().len(),
                    "arrows": e.groupoid.arrows().len(),
                }),
            ),
            summary: format!(
                "extension of {gerbe} by Z/{n}: {} arrows over {} objects",
                e.groupoid.arrows().len(),
                e.groupoid.objects().len()
            ),
            exit: 0,
        }),
        ExtensionOutcome::Obstructed(a) => {
            let support = a.support().count();
            Ok(Outcome {
                report: envelope(
                    "extension",
                    json!({
                        "gerbe": gerbe, "built": false, "modulus": n,
                        "associator": part_triples_value(&a),
                    }),
                ),
                summary: format!(
                    "extension of {gerbe} by Z/{n} is obstructed: associator has {support} nonzero values"
                ),
                exit: 1,
            })
        }
    }
}

fn level_two_part(g: &cechdr::GerbeCocycle) -> Result<Cochain> {
    for (p, part) in g.cocycle().parts() {
        if p == 2 {
            return Ok(part.clone());
        }
    }
    let none: Vec<(cechdr::Simplex, num::BigRational)> = Vec::new();
    Cochain::from_values(g.cocycle().space().clone(), 0, 2, Ring::QModZ, none)
}

fn associator_cmd(ws: &Workspace, gerbe: &str) -> Result<Outcome> {
    let g = ws.gerbe(gerbe)?;
    let a = associator(&level_two_part(g)?)?;
    let support = a.support().count();
    Ok(Outcome {
        report: envelope(
            "associator",
            json!({
                "gerbe": gerbe,
                "values": part_triples_value(&a),
                "zero": support == 0,
            }),
        ),
        summary: format!(
            "associator of {gerbe}: {}",
            if support == 0 {
                "zero".to_string()
            } else {
                format!("{support} nonzero values")
            }
        ),
        exit: 0,
    })
}

fn pick_cocycle<'a>(
    ws: &'a Workspace,
    bundle: Option<String>,
    gerbe: Option<String>,
) -> Result<(&'a TotalCochain, &'static str, String)> {
    match (bundle, gerbe) {
        (Some(b), None) => Ok((ws.bundle(&b)?.cocycle(), "bundle", b)),
        (None, Some(g)) => Ok((ws.gerbe(&g)?.cocycle(), "gerbe", g)),
        _ => Err(Error::validation(
            "pick exactly one of --bundle and --gerbe",
        )),
    }
}

fn flat_cmd(ws: &Workspace, bundle: Option<String>, gerbe: Option<String>) -> Result<Outcome> {
    let (c, kind, name) = pick_cocycle(ws, bundle, gerbe)?;
    match is_flat(c)? {
        Some(conn) => Ok(Outcome {
            report: envelope(
                "flat",
                json!({
                    kind: name, "flat": true,
                    "connection": triples_value(conn.lift()),
                }),
            ),
            summary: format!("{kind} {name} is flat"),
            exit: 0,
        }),
        None => Ok(Outcome {
            report: envelope(
                "flat",
                json!({kind: name, "flat": false, "connection": Value::Null}),
            ),
            summary: format!("{kind} {name} is not flat"),
            exit: 0,
        }),
    }
}

fn holonomy_cmd(ws: &Workspace, bundle: Option<String>, gerbe: Option<String>) -> Result<Outcome> {
    let (c, kind, name) = pick_cocycle(ws, bundle, gerbe)?;
    let class = holonomy(c)?;
    Ok(Outcome {
        report: envelope(
            "holonomy",
            json!({
                kind: name,
                "degree": class.degree,
                "class": class_value(&class),
            }),
        ),
        summary: format!(
            "holonomy of {kind} {name}: {} in degree {}",
            if class.is_zero() { "zero" } else { "nonzero" },
            class.degree
        ),
        exit: 0,
    })
}

fn prequant_body(name: &str, cocycle: &TotalCochain, p: &Prequantization) -> Value {
    json!({
        "input": name,
        "cocycle": triples_value(cocycle),
        "connection": triples_value(p.connection.lift()),
        "curvature": triples_value(&p.curvature.cocycle),
        "gauge": triples_value(&p.gauge),
        "base_component_exact": p.base_component_exact,
    })
}

fn prequantize(ws: &Workspace, name: &str, gerbe: bool) -> Result<Outcome> {
    let input = ws.cochain(name)?;
    if gerbe {
        let (g, p) = prequantize_gerbe(input)?;
        Ok(Outcome {
            report: envelope("prequantize-gerbe", prequant_body(name, g.cocycle(), &p)),
            summary: format!(
                "{name} prequantizes to a gerbe with {} cocycle values",
                io::cochain_triples(g.cocycle()).len()
            ),
            exit: 0,
        })
    } else {
        let (b, p) = prequantize_bundle(input)?;
        Ok(Outcome {
            report: envelope("prequantize-bundle", prequant_body(name, b.cocycle(), &p)),
            summary: format!(
                "{name} prequantizes to a bundle with {} cocycle values",
                io::cochain_triples(b.cocycle()).len()
            ),
            exit: 0,
        })
    }
}

fn tau_cmd(ws: &Workspace, space: &str, n: u32) -> Result<Outcome> {
    let s = ws.space(space)?;
    let r = tau_maps(s, n)?;
    let exact = r.exact();
    Ok(Outcome {
        report: envelope(
            "tau-exactness",
            json!({
                "space": space,
                "modulus": r.modulus,
                "sizes": {
                    "h1_total": r.sizes[0],
                    "h1_base": r.sizes[1],
                    "middle": r.sizes[2],
                    "h2_total": r.sizes[3],
                    "h2_base": r.sizes[4],
                },
                "exact_at": {
                    "h1_base": r.exact_at[0],
                    "middle": r.exact_at[1],
                    "h2_total": r.exact_at[2],
                },
                "exact": exact,
            }),
        ),
        summary: format!(
            "comparison sequence mod {n} on {space}: sizes {:?}, {}",
            r.sizes,
            if exact { "exact" } else { "not exact" }
        ),
        exit: 0,
    })
}

fn compare_cmd(ws: &Workspace, morphism: &str, ring: &str, max_degree: usize) -> Result<Outcome> {
    let m = ws.morphism(morphism)?;
    let r = io::parse_ring(ring)?;
    let comparisons = compare_cohomology(m, r, max_degree)?;
    let all_iso = comparisons.iter().all(|c| c.iso);
    let mut rows = Vec::new();
    for c in &comparisons {
        let matrix: Vec<Vec<String>> = c
            .matrix
            .iter()
            .map(|row| row.iter().map(io::rational_string).collect())
            .collect();
        rows.push(json!({
            "degree": c.degree,
            "source": shape_value(c.source_shape.0, &c.source_shape.1),
            "target": shape_value(c.target_shape.0, &c.target_shape.1),
            "matrix": matrix,
            "iso": c.iso,
            "note": c.note.clone(),
        }));
    }
    let failing: Vec<usize> = comparisons
        .iter()
        .filter(|c| !c.iso)
        .map(|c| c.degree)
        .collect();
    Ok(Outcome {
        report: envelope(
            "morita-compare",
            json!({
                "morphism": morphism, "ring": ring,
                "degrees": rows, "all_iso": all_iso,
            }),
        ),
        summary: if all_iso {
            format!("{morphism}: isomorphism on cohomology through degree {max_degree} over {ring}")
        } else {
            format!("{morphism}: comparison fails in degrees {failing:?} over {ring}")
        },
        exit: 0,
    })
}
