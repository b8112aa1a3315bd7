//! Description files and the workspace they load into.
//!
//! A description file is JSON with a `"schema": 1` marker and up to eight
//! maps of named entities: complexes, covers, groupoids, spaces, cochains,
//! bundles, gerbes, morphisms. Everything is resolved and validated
//! eagerly at load time, so a dangling reference or an invalid cocycle
//! fails the load with the offending name. Rationals travel as "p/q"
//! strings, simplices as sorted vertex arrays, and (total) cochains as
//! [simplex, level, value] triples.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::ToPrimitive;
use serde::Deserialize;

use crate::cochain::{Cochain, TotalCochain};
use crate::complex::{Simplex, SimplicialComplex, SimplicialMap, Vertex};
use crate::gerbe::{BundleCocycle, GerbeCocycle};
use crate::groupoid::{Arrow, FiniteGroupoid};
use crate::morita::{pullback_groupoid, refinement_morphism, MoritaMorphism, MorphismKind};
use crate::ring::Ring;
use crate::space::{
    cech_space, manifold_space, nerve, CoveredComplex, NerveSpace, SemiSimplicialSpace, SpaceMap,
};
use crate::{Error, Result};

pub const SCHEMA: u32 = 1;

pub fn parse_ring(s: &str) -> Result<Ring> {
    match s {
        "Z" => Ok(Ring::Int),
        "Q" => Ok(Ring::Rat),
        "QmodZ" => Ok(Ring::QModZ),
        _ => {
            if let Some(n) = s.strip_prefix("Zmod:") {
                let n: u32 = n
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad modulus in ring {s}")))?;
                if n < 2 {
                    return Err(Error::Parse(format!("ring {s} needs a modulus of at least 2")));
                }
                Ok(Ring::ModN(n))
            } else {
                Err(Error::Parse(format!(
                    "unknown ring {s}; expected Z, Q, Zmod:n or QmodZ"
                )))
            }
        }
    }
}

pub fn ring_name(r: Ring) -> String {
    match r {
        Ring::Int => "Z".into(),
        Ring::Rat => "Q".into(),
        Ring::ModN(n) => format!("Zmod:{n}"),
        Ring::QModZ => "QmodZ".into(),
    }
}

pub fn parse_rational(v: &serde_json::Value) -> Result<BigRational> {
    match v {
        serde_json::Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| Error::Parse(format!("non-integer number {n}")))?;
            Ok(BigRational::from_integer(BigInt::from(i)))
        }
        serde_json::Value::String(s) => s
            .parse::<BigRational>()
            .map_err(|_| Error::Parse(format!("bad rational {s:?}; expected \"p/q\""))),
        other => Err(Error::Parse(format!(
            "bad rational {other}; expected an integer or \"p/q\""
        ))),
    }
}

pub fn rational_string(x: &BigRational) -> String {
    x.to_string()
}

/// The [simplex, level, value] triples of a total cochain, ordered by
/// level and then simplex. Values re-parse with `parse_rational`.
pub fn cochain_triples(c: &TotalCochain) -> Vec<(Vec<Vertex>, usize, String)> {
    let mut out = Vec::new();
    for (p, part) in c.parts() {
        for (s, v) in part.support() {
            out.push((s.vertices().to_vec(), p, rational_string(v)));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// File format.

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FileDesc {
    schema: u32,
    #[serde(default)]
    complexes: BTreeMap<String, ComplexDesc>,
    #[serde(default)]
    covers: BTreeMap<String, CoverDesc>,
    #[serde(default)]
    groupoids: BTreeMap<String, GroupoidDesc>,
    #[serde(default)]
    spaces: BTreeMap<String, SpaceDesc>,
    #[serde(default)]
    cochains: BTreeMap<String, CochainDesc>,
    #[serde(default)]
    bundles: BTreeMap<String, CocycleDesc>,
    #[serde(default)]
    gerbes: BTreeMap<String, CocycleDesc>,
    #[serde(default)]
    morphisms: BTreeMap<String, MorphismDesc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexDesc {
    simplices: Vec<Vec<Vertex>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CoverDesc {
    complex: String,
    /// Set name → maximal simplices; names are used in sorted order.
    sets: BTreeMap<String, Vec<Vec<Vertex>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupoidDesc {
    #[serde(default)]
    cyclic: Option<usize>,
    #[serde(default)]
    pair: Option<usize>,
    /// Product of previously defined one-object groupoids.
    #[serde(default)]
    product: Option<Vec<String>>,
    #[serde(default)]
    objects: Option<Vec<String>>,
    #[serde(default)]
    arrows: Option<Vec<ArrowDesc>>,
    /// Composition by arrow name: [x, y, x·y].
    #[serde(default)]
    compose: Option<Vec<(String, String, String)>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrowDesc {
    name: String,
    src: String,
    dst: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceDesc {
    #[serde(default)]
    nerve: Option<String>,
    #[serde(default)]
    cech: Option<String>,
    #[serde(default)]
    constant: Option<String>,
    truncation: usize,
}

type Triple = (Vec<Vertex>, usize, serde_json::Value);

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CochainDesc {
    space: String,
    ring: String,
    degree: usize,
    values: Vec<Triple>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CocycleDesc {
    space: String,
    values: Vec<Triple>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MorphismDesc {
    #[serde(default)]
    refinement: Option<RefinementDesc>,
    #[serde(default)]
    pullback: Option<PullbackDesc>,
    #[serde(default)]
    explicit: Option<ExplicitDesc>,
    #[serde(default)]
    truncation: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RefinementDesc {
    coarse: String,
    fine: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PullbackDesc {
    groupoid: String,
    objects: Vec<(String, String)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExplicitDesc {
    source: String,
    target: String,
    /// Per level, vertex → vertex pairs.
    levels: Vec<Vec<(Vertex, Vertex)>>,
}

// ---------------------------------------------------------------------------
// Workspace.

#[derive(Debug, Default)]
pub struct Workspace {
    pub complexes: BTreeMap<String, SimplicialComplex>,
    pub covers: BTreeMap<String, CoveredComplex>,
    pub groupoids: BTreeMap<String, FiniteGroupoid>,
    pub spaces: BTreeMap<String, Arc<SemiSimplicialSpace>>,
    /// Nerve bookkeeping for the spaces built from groupoids, same keys.
    pub nerves: BTreeMap<String, NerveSpace>,
    pub cochains: BTreeMap<String, TotalCochain>,
    pub bundles: BTreeMap<String, BundleCocycle>,
    pub gerbes: BTreeMap<String, GerbeCocycle>,
    pub morphisms: BTreeMap<String, MoritaMorphism>,
}

impl Workspace {
    pub fn space(&self, name: &str) -> Result<&Arc<SemiSimplicialSpace>> {
        self.spaces
            .get(name)
            .ok_or_else(|| Error::Unresolved(format!("space {name}")))
    }

    pub fn nerve_of(&self, name: &str) -> Result<&NerveSpace> {
        self.nerves
            .get(name)
            .ok_or_else(|| Error::Unresolved(format!("nerve space {name}")))
    }

    /// Nerve bookkeeping for the space a cocycle lives on.
    pub fn nerve_for_space(&self, space: &Arc<SemiSimplicialSpace>) -> Result<&NerveSpace> {
        self.nerves
            .values()
            .find(|n| Arc::ptr_eq(&n.space, space) || n.space == *space)
            .ok_or_else(|| Error::Unresolved("no nerve presentation for this space".into()))
    }

    pub fn cochain(&self, name: &str) -> Result<&TotalCochain> {
        self.cochains
            .get(name)
            .ok_or_else(|| Error::Unresolved(format!("cochain {name}")))
    }

    pub fn bundle(&self, name: &str) -> Result<&BundleCocycle> {
        self.bundles
            .get(name)
            .ok_or_else(|| Error::Unresolved(format!("bundle {name}")))
    }

    pub fn gerbe(&self, name: &str) -> Result<&GerbeCocycle> {
        self.gerbes
            .get(name)
            .ok_or_else(|| Error::Unresolved(format!("gerbe {name}")))
    }

    pub fn morphism(&self, name: &str) -> Result<&MoritaMorphism> {
        self.morphisms
            .get(name)
            .ok_or_else(|| Error::Unresolved(format!("morphism {name}")))
    }
}

pub fn load(paths: &[PathBuf]) -> Result<Workspace> {
    let mut texts = Vec::with_capacity(paths.len());
    for path in paths {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        texts.push((path.display().to_string(), text));
    }
    let refs: Vec<(&str, &str)> = texts
        .iter()
        .map(|(n, t)| (n.as_str(), t.as_str()))
        .collect();
    load_sources(&refs)
}

/// Load from in-memory (origin, text) pairs; `load` is a thin wrapper.
pub fn load_sources(sources: &[(&str, &str)]) -> Result<Workspace> {
    let mut files = Vec::with_capacity(sources.len());
    for (origin, text) in sources {
        let desc: FileDesc = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("{origin}: {e}")))?;
        if desc.schema != SCHEMA {
            return Err(Error::Parse(format!(
                "{origin}: unsupported schema {}, expected {SCHEMA}",
                desc.schema
            )));
        }
        files.push(desc);
    }

    fn merge<T>(
        into: &mut BTreeMap<String, T>,
        from: BTreeMap<String, T>,
        what: &str,
    ) -> Result<()> {
        for (name, v) in from {
            if into.insert(name.clone(), v).is_some() {
                return Err(Error::validation(format!("duplicate {what} {name}")));
            }
        }
        Ok(())
    }

    let mut complexes = BTreeMap::new();
    let mut covers = BTreeMap::new();
    let mut groupoid_descs = BTreeMap::new();
    let mut space_descs = BTreeMap::new();
    let mut cochain_descs = BTreeMap::new();
    let mut bundle_descs = BTreeMap::new();
    let mut gerbe_descs = BTreeMap::new();
    let mut morphism_descs = BTreeMap::new();
    for f in files {
        merge(&mut complexes, f.complexes, "complex")?;
        merge(&mut covers, f.covers, "cover")?;
        merge(&mut groupoid_descs, f.groupoids, "groupoid")?;
        merge(&mut space_descs, f.spaces, "space")?;
        merge(&mut cochain_descs, f.cochains, "cochain")?;
        merge(&mut bundle_descs, f.bundles, "bundle")?;
        merge(&mut gerbe_descs, f.gerbes, "gerbe")?;
        merge(&mut morphism_descs, f.morphisms, "morphism")?;
    }

    let mut ws = Workspace::default();

    for (name, d) in complexes {
        let simplices = d
            .simplices
            .into_iter()
            .map(Simplex::new)
            .collect::<Result<Vec<_>>>()
            .map_err(|e| prefixed(e, &format!("complex {name}")))?;
        ws.complexes
            .insert(name, SimplicialComplex::from_simplices(simplices));
    }

    for (name, d) in covers {
        let total = ws
            .complexes
            .get(&d.complex)
            .ok_or_else(|| Error::Unresolved(format!("complex {} (in cover {name})", d.complex)))?
            .clone();
        let mut names = Vec::new();
        let mut sets = Vec::new();
        for (set_name, simplices) in d.sets {
            let simplices = simplices
                .into_iter()
                .map(Simplex::new)
                .collect::<Result<Vec<_>>>()
                .map_err(|e| prefixed(e, &format!("cover {name}, set {set_name}")))?;
            names.push(set_name);
            sets.push(SimplicialComplex::from_simplices(simplices));
        }
        let cover = CoveredComplex::new(total, names, sets)
            .map_err(|e| prefixed(e, &format!("cover {name}")))?;
        ws.covers.insert(name, cover);
    }

    // Products may reference the other groupoids, so build them last.
    let (products, plain): (Vec<_>, Vec<_>) = groupoid_descs
        .into_iter()
        .partition(|(_, d)| d.product.is_some());
    for (name, d) in plain {
        let g = build_groupoid(&name, d)?;
        ws.groupoids.insert(name, g);
    }
    for (name, d) in products {
        let factors = d.product.unwrap();
        if factors.len() != 2 {
            return Err(Error::validation(format!(
                "groupoid {name}: a product takes exactly two factors"
            )));
        }
        let a = ws.groupoids.get(&factors[0]).ok_or_else(|| {
            Error::Unresolved(format!("groupoid {} (in product {name})", factors[0]))
        })?;
        let b = ws.groupoids.get(&factors[1]).ok_or_else(|| {
            Error::Unresolved(format!("groupoid {} (in product {name})", factors[1]))
        })?;
        let g = FiniteGroupoid::product_group(a, b)
            .map_err(|e| prefixed(e, &format!("groupoid {name}")))?;
        ws.groupoids.insert(name, g);
    }

    for (name, d) in space_descs {
        let picks =
            usize::from(d.nerve.is_some()) + usize::from(d.cech.is_some()) + usize::from(d.constant.is_some());
        if picks != 1 {
            return Err(Error::validation(format!(
                "space {name}: pick exactly one of nerve, cech, constant"
            )));
        }
        if let Some(g) = d.nerve {
            let g = ws
                .groupoids
                .get(&g)
                .ok_or_else(|| Error::Unresolved(format!("groupoid {g} (in space {name})")))?;
            let n = nerve(g, d.truncation).map_err(|e| prefixed(e, &format!("space {name}")))?;
            ws.spaces.insert(name.clone(), n.space.clone());
            ws.nerves.insert(name, n);
        } else if let Some(c) = d.cech {
            let c = ws
                .covers
                .get(&c)
                .ok_or_else(|| Error::Unresolved(format!("cover {c} (in space {name})")))?;
            let cs =
                cech_space(c, d.truncation).map_err(|e| prefixed(e, &format!("space {name}")))?;
            ws.spaces.insert(name, cs.space.clone());
        } else {
            let k = d.constant.unwrap();
            let k = ws
                .complexes
                .get(&k)
                .ok_or_else(|| Error::Unresolved(format!("complex {k} (in space {name})")))?;
            let s = manifold_space(k, d.truncation)
                .map_err(|e| prefixed(e, &format!("space {name}")))?;
            ws.spaces.insert(name, Arc::new(s));
        }
    }

    for (name, d) in cochain_descs {
        let space = ws
            .spaces
            .get(&d.space)
            .ok_or_else(|| Error::Unresolved(format!("space {} (in cochain {name})", d.space)))?;
        let ring = parse_ring(&d.ring).map_err(|e| prefixed(e, &format!("cochain {name}")))?;
        let c = build_cochain(space, ring, d.degree, &d.values)
            .map_err(|e| prefixed(e, &format!("cochain {name}")))?;
        ws.cochains.insert(name, c);
    }

    for (name, d) in bundle_descs {
        let space = ws
            .spaces
            .get(&d.space)
            .ok_or_else(|| Error::Unresolved(format!("space {} (in bundle {name})", d.space)))?;
        let c = build_cochain(space, Ring::QModZ, 1, &d.values)
            .and_then(BundleCocycle::new)
            .map_err(|e| prefixed(e, &format!("bundle {name}")))?;
        ws.bundles.insert(name, c);
    }

    for (name, d) in gerbe_descs {
        let space = ws
            .spaces
            .get(&d.space)
            .ok_or_else(|| Error::Unresolved(format!("space {} (in gerbe {name})", d.space)))?;
        let c = build_cochain(space, Ring::QModZ, 2, &d.values)
            .and_then(GerbeCocycle::new)
            .map_err(|e| prefixed(e, &format!("gerbe {name}")))?;
        ws.gerbes.insert(name, c);
    }

    for (name, d) in morphism_descs {
        let picks = usize::from(d.refinement.is_some())
            + usize::from(d.pullback.is_some())
            + usize::from(d.explicit.is_some());
        if picks != 1 {
            return Err(Error::validation(format!(
                "morphism {name}: pick exactly one of refinement, pullback, explicit"
            )));
        }
        let m = if let Some(r) = d.refinement {
            let t = d.truncation.ok_or_else(|| {
                Error::validation(format!("morphism {name}: refinement needs a truncation"))
            })?;
            let coarse = ws.covers.get(&r.coarse).ok_or_else(|| {
                Error::Unresolved(format!("cover {} (in morphism {name})", r.coarse))
            })?;
            let fine = ws.covers.get(&r.fine).ok_or_else(|| {
                Error::Unresolved(format!("cover {} (in morphism {name})", r.fine))
            })?;
            refinement_morphism(coarse, fine, t)
                .map_err(|e| prefixed(e, &format!("morphism {name}")))?
        } else if let Some(p) = d.pullback {
            let t = d.truncation.ok_or_else(|| {
                Error::validation(format!("morphism {name}: pullback needs a truncation"))
            })?;
            let g = ws.groupoids.get(&p.groupoid).ok_or_else(|| {
                Error::Unresolved(format!("groupoid {} (in morphism {name})", p.groupoid))
            })?;
            let (_, m) = pullback_groupoid(g, &p.objects, t)
                .map_err(|e| prefixed(e, &format!("morphism {name}")))?;
            m
        } else {
            let e = d.explicit.unwrap();
            let source = ws.spaces.get(&e.source).ok_or_else(|| {
                Error::Unresolved(format!("space {} (in morphism {name})", e.source))
            })?;
            let target = ws.spaces.get(&e.target).ok_or_else(|| {
                Error::Unresolved(format!("space {} (in morphism {name})", e.target))
            })?;
            let levels = e
                .levels
                .into_iter()
                .map(|pairs| SimplicialMap::new(pairs.into_iter().collect()))
                .collect();
            let map = SpaceMap::new(source.clone(), target.clone(), levels)
                .map_err(|er| prefixed(er, &format!("morphism {name}")))?;
            MoritaMorphism::new(map, MorphismKind::Explicit)
                .map_err(|er| prefixed(er, &format!("morphism {name}")))?
        };
        ws.morphisms.insert(name, m);
    }

    Ok(ws)
}

fn prefixed(e: Error, what: &str) -> Error {
    match e {
        Error::Parse(m) => Error::Parse(format!("{what}: {m}")),
        Error::Validation(m) => Error::Validation(format!("{what}: {m}")),
        Error::Unresolved(m) => Error::Unresolved(format!("{what}: {m}")),
        Error::Math(m) => Error::Math(format!("{what}: {m}")),
    }
}

fn build_groupoid(name: &str, d: GroupoidDesc) -> Result<FiniteGroupoid> {
    let picks = usize::from(d.cyclic.is_some())
        + usize::from(d.pair.is_some())
        + usize::from(d.objects.is_some());
    if picks != 1 {
        return Err(Error::validation(format!(
            "groupoid {name}: pick exactly one of cyclic, pair, product, or objects/arrows/compose"
        )));
    }
    if let Some(n) = d.cyclic {
        if n == 0 {
            return Err(Error::validation(format!(
                "groupoid {name}: cyclic order must be positive"
            )));
        }
        return Ok(FiniteGroupoid::cyclic_group(n));
    }
    if let Some(n) = d.pair {
        if n == 0 {
            return Err(Error::validation(format!(
                "groupoid {name}: pair groupoid needs at least one object"
            )));
        }
        return Ok(FiniteGroupoid::pair_groupoid(n));
    }
    let objects = d.objects.unwrap();
    let (Some(arrow_descs), Some(compose_descs)) = (d.arrows, d.compose) else {
        return Err(Error::validation(format!(
            "groupoid {name}: explicit form needs arrows and compose"
        )));
    };
    let object_index: BTreeMap<&str, usize> = objects
        .iter()
        .map(|o| o.as_str())
        .enumerate()
        .map(|(i, o)| (o, i))
        .collect();
    let mut arrows = Vec::with_capacity(arrow_descs.len());
    let mut arrow_index = BTreeMap::new();
    for a in &arrow_descs {
        let src = *object_index
            .get(a.src.as_str())
            .ok_or_else(|| Error::Unresolved(format!("object {} (in groupoid {name})", a.src)))?;
        let dst = *object_index
            .get(a.dst.as_str())
            .ok_or_else(|| Error::Unresolved(format!("object {} (in groupoid {name})", a.dst)))?;
        arrow_index.insert(a.name.as_str(), arrows.len());
        arrows.push(Arrow {
            name: a.name.clone(),
            src,
            dst,
        });
    }
    let mut compose = BTreeMap::new();
    for (x, y, z) in &compose_descs {
        let lookup = |n: &str| {
            arrow_index
                .get(n)
                .copied()
                .ok_or_else(|| Error::Unresolved(format!("arrow {n} (in groupoid {name})")))
        };
        compose.insert((lookup(x)?, lookup(y)?), lookup(z)?);
    }
    FiniteGroupoid::new(objects, arrows, compose).map_err(|e| prefixed(e, &format!("groupoid {name}")))
}

fn build_cochain(
    space: &Arc<SemiSimplicialSpace>,
    ring: Ring,
    degree: usize,
    values: &[Triple],
) -> Result<TotalCochain> {
    let mut by_level: BTreeMap<usize, Vec<(Simplex, BigRational)>> = BTreeMap::new();
    for (vertices, p, value) in values {
        let s = Simplex::new(vertices.clone())?;
        if *p > degree {
            return Err(Error::validation(format!(
                "level {p} exceeds the degree {degree}"
            )));
        }
        if s.dim() != degree - p {
            return Err(Error::validation(format!(
                "simplex {vertices:?} at level {p} must have dimension {}",
                degree - p
            )));
        }
        by_level.entry(*p).or_default().push((s, parse_rational(value)?));
    }
    let mut total = TotalCochain::zero(space.clone(), degree, ring);
    for (p, pairs) in by_level {
        let part = Cochain::from_values(space.clone(), degree - p, p, ring, pairs)?;
        total = total.with_part(part)?;
    }
    Ok(total)
}

/// Integers that fit in a JSON number stay numbers; anything larger
/// degrades to a decimal string.
pub fn int_value(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(i) => serde_json::Value::from(i),
        None => serde_json::Value::from(x.to_string()),
    }
}
