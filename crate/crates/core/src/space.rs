//! Semi-simplicial spaces: towers X₀…X_P of simplicial complexes with
//! face maps d₀…d_p : X_p → X_{p−1}, together with the constructors that
//! produce them from groupoid presentations — nerves of finite groupoids,
//! Čech spaces of covers, transformation spaces of group actions, and the
//! constant tower of a single complex.
//!
//! Constructions that assemble levels out of indexed components (Čech,
//! transformation) keep the component bookkeeping around, since morphisms
//! and labeled reports need to translate between global vertex ids and
//! (component, original vertex) pairs.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::complex::{SimplicialComplex, SimplicialMap, Vertex};
use crate::groupoid::{Arrow, FiniteGroupoid};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiSimplicialSpace {
    levels: Vec<SimplicialComplex>,
    /// `faces[p]` holds d₀…d_p from level p; `faces[0]` is empty.
    faces: Vec<Vec<SimplicialMap>>,
    /// Cosmetic vertex labels per level, used in reports. May be empty.
    labels: Vec<BTreeMap<Vertex, String>>,
}

impl SemiSimplicialSpace {
    pub fn new(levels: Vec<SimplicialComplex>, faces: Vec<Vec<SimplicialMap>>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::validation("a space needs at least level 0"));
        }
        if faces.len() != levels.len() {
            return Err(Error::validation("face list length must match level count"));
        }
        if !faces[0].is_empty() {
            return Err(Error::validation("level 0 has no face maps"));
        }
        for (p, fs) in faces.iter().enumerate().skip(1) {
            if fs.len() != p + 1 {
                return Err(Error::validation(format!(
                    "level {p} needs {} face maps, got {}",
                    p + 1,
                    fs.len()
                )));
            }
        }
        let labels = vec![BTreeMap::new(); levels.len()];
        Ok(SemiSimplicialSpace {
            levels,
            faces,
            labels,
        })
    }

    pub fn with_labels(mut self, labels: Vec<BTreeMap<Vertex, String>>) -> Self {
        assert_eq!(labels.len(), self.levels.len());
        self.labels = labels;
        self
    }

    pub fn truncation(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, p: usize) -> &SimplicialComplex {
        &self.levels[p]
    }

    pub fn levels(&self) -> &[SimplicialComplex] {
        &self.levels
    }

    /// Face map dᵢ : X_p → X_{p−1}.
    pub fn face(&self, p: usize, i: usize) -> &SimplicialMap {
        &self.faces[p][i]
    }

    pub fn label(&self, p: usize, v: Vertex) -> Option<&str> {
        self.labels.get(p)?.get(&v).map(|s| s.as_str())
    }

    pub fn validate(&self) -> SpaceReport {
        let mut violations = Vec::new();
        for (p, c) in self.levels.iter().enumerate() {
            if let Err(e) = c.check_closed() {
                violations.push(format!("level {p}: {e}"));
            }
        }
        for p in 1..self.levels.len() {
            for (i, f) in self.faces[p].iter().enumerate() {
                if let Err(e) = f.validate(&self.levels[p], &self.levels[p - 1]) {
                    violations.push(format!("d{i} on level {p}: {e}"));
                }
            }
        }
        // dᵢ ∘ d_j = d_{j−1} ∘ dᵢ for i < j, vertexwise.
        for p in 2..self.levels.len() {
            for j in 1..=p {
                for i in 0..j {
                    let lhs = self.faces[p][j].and_then(&self.faces[p - 1][i]);
                    let rhs = self.faces[p][i].and_then(&self.faces[p - 1][j - 1]);
                    match (lhs, rhs) {
                        (Ok(l), Ok(r)) => {
                            for v in self.levels[p].vertices() {
                                if l.apply(v) != r.apply(v) {
                                    violations.push(format!(
                                        "d{i}∘d{j} ≠ d{}∘d{i} on level {p} at vertex {v}",
                                        j - 1
                                    ));
                                }
                            }
                        }
                        _ => violations.push(format!(
                            "face maps on level {p} do not compose (d{i}, d{j})"
                        )),
                    }
                }
            }
        }
        SpaceReport {
            level_sizes: self
                .levels
                .iter()
                .map(|c| {
                    (0..=c.dim().map_or(0, |d| d))
                        .map(|k| c.count_of_dim(k))
                        .collect()
                })
                .collect(),
            violations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceReport {
    /// Per level, simplex counts by dimension.
    pub level_sizes: Vec<Vec<usize>>,
    pub violations: Vec<String>,
}

impl SpaceReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `2·dim X₀ − dim X₁`. Levels 0 and 1 must be pure-dimensional and
/// nonempty for the formula to be meaningful.
pub fn stack_dimension(space: &SemiSimplicialSpace) -> Result<i64> {
    if space.truncation() < 1 {
        return Err(Error::validation("need levels 0 and 1"));
    }
    let mut dims = [0i64; 2];
    for p in 0..2 {
        let c = space.level(p);
        let Some(d) = c.dim() else {
            return Err(Error::math(format!("level {p} is empty")));
        };
        if !c.is_pure() {
            return Err(Error::math(format!(
                "level {p} has maximal simplices of mixed dimension"
            )));
        }
        dims[p] = d as i64;
    }
    Ok(2 * dims[0] - dims[1])
}

/// Relabel the given complexes into one disjoint union, assigning global
/// vertex ids in the order the components are listed. Returns the union
/// and each component's original-to-global vertex map.
fn assemble_disjoint(
    components: &[&SimplicialComplex],
) -> (SimplicialComplex, Vec<BTreeMap<Vertex, Vertex>>) {
    let mut next: Vertex = 0;
    let mut maps = Vec::with_capacity(components.len());
    let mut simplices = Vec::new();
    for c in components {
        let mut map = BTreeMap::new();
        for v in c.vertices() {
            map.insert(v, next);
            next += 1;
        }
        for s in c.simplices() {
            let vs: Vec<Vertex> = s.vertices().iter().map(|v| map[v]).collect();
            simplices.push(crate::complex::Simplex::new(vs).unwrap());
        }
        maps.push(map);
    }
    (SimplicialComplex::from_simplices(simplices), maps)
}

// ---------------------------------------------------------------------------
// Nerve of a finite groupoid.

#[derive(Debug, Clone)]
pub struct NerveSpace {
    pub space: Arc<SemiSimplicialSpace>,
    pub groupoid: FiniteGroupoid,
    /// Per level p ≥ 1, vertex id of each composable tuple; level 0 maps
    /// single-object tuples.
    vertex_of_tuple: Vec<BTreeMap<Vec<usize>, Vertex>>,
    tuple_of_vertex: Vec<Vec<Vec<usize>>>,
}

impl NerveSpace {
    /// Vertex of level p presenting the composable arrow tuple
    /// (object index for p = 0).
    pub fn vertex(&self, p: usize, tuple: &[usize]) -> Option<Vertex> {
        self.vertex_of_tuple[p].get(tuple).copied()
    }

    pub fn tuple(&self, p: usize, v: Vertex) -> &[usize] {
        &self.tuple_of_vertex[p][v as usize]
    }
}

/// Levels are discrete complexes of composable arrow tuples; d₀ drops the
/// first arrow, interior faces compose neighbours, d_p drops the last; on
/// X₁, d₀ = target and d₁ = source.
pub fn nerve(g: &FiniteGroupoid, truncation: usize) -> Result<NerveSpace> {
    if truncation < 1 {
        return Err(Error::validation("truncation must be at least 1"));
    }
    let mut levels = vec![SimplicialComplex::discrete(g.objects().len())];
    let mut labels = vec![g
        .objects()
        .iter()
        .enumerate()
        .map(|(i, n)| (i as Vertex, n.clone()))
        .collect::<BTreeMap<_, _>>()];
    let mut vertex_of_tuple = vec![(0..g.objects().len())
        .map(|u| (vec![u], u as Vertex))
        .collect::<BTreeMap<_, _>>()];
    let mut tuple_of_vertex = vec![(0..g.objects().len()).map(|u| vec![u]).collect::<Vec<_>>()];

    for p in 1..=truncation {
        let tuples = g.composable_tuples(p);
        levels.push(SimplicialComplex::discrete(tuples.len()));
        labels.push(
            tuples
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    let name = t
                        .iter()
                        .map(|&x| g.arrows()[x].name.clone())
                        .collect::<Vec<_>>()
                        .join("|");
                    (i as Vertex, name)
                })
                .collect(),
        );
        vertex_of_tuple.push(
            tuples
                .iter()
                .enumerate()
                .map(|(i, t)| (t.clone(), i as Vertex))
                .collect(),
        );
        tuple_of_vertex.push(tuples);
    }

    let mut faces = vec![Vec::new()];
    for p in 1..=truncation {
        let mut fs = Vec::with_capacity(p + 1);
        for i in 0..=p {
            let mut map = BTreeMap::new();
            for (v, tuple) in tuple_of_vertex[p].iter().enumerate() {
                let image: Vec<usize> = if p == 1 {
                    if i == 0 {
                        vec![g.target(tuple[0])]
                    } else {
                        vec![g.source(tuple[0])]
                    }
                } else if i == 0 {
                    tuple[1..].to_vec()
                } else if i == p {
                    tuple[..p - 1].to_vec()
                } else {
                    let mut t = Vec::with_capacity(p - 1);
                    t.extend_from_slice(&tuple[..i - 1]);
                    t.push(g.compose(tuple[i - 1], tuple[i]).unwrap());
                    t.extend_from_slice(&tuple[i + 1..]);
                    t
                };
                map.insert(v as Vertex, vertex_of_tuple[p - 1][&image]);
            }
            fs.push(SimplicialMap::new(map));
        }
        faces.push(fs);
    }

    let space = SemiSimplicialSpace::new(levels, faces)?.with_labels(labels);
    Ok(NerveSpace {
        space: Arc::new(space),
        groupoid: g.clone(),
        vertex_of_tuple,
        tuple_of_vertex,
    })
}

// ---------------------------------------------------------------------------
// Čech space of a covered complex.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveredComplex {
    pub total: SimplicialComplex,
    pub names: Vec<String>,
    pub sets: Vec<SimplicialComplex>,
}

impl CoveredComplex {
    pub fn new(
        total: SimplicialComplex,
        names: Vec<String>,
        sets: Vec<SimplicialComplex>,
    ) -> Result<Self> {
        if names.len() != sets.len() {
            return Err(Error::validation("cover needs one name per set"));
        }
        if sets.is_empty() {
            return Err(Error::validation("cover has no sets"));
        }
        for (name, set) in names.iter().zip(&sets) {
            if set.is_empty() {
                return Err(Error::validation(format!("cover set {name} is empty")));
            }
            if !set.is_subcomplex_of(&total) {
                return Err(Error::validation(format!(
                    "cover set {name} is not a subcomplex of the total complex"
                )));
            }
        }
        for s in total.maximal_simplices() {
            if !sets.iter().any(|u| u.has_simplex(s)) {
                return Err(Error::validation(format!(
                    "cover does not span: simplex {:?} lies in no set",
                    s.vertices()
                )));
            }
        }
        Ok(CoveredComplex { total, names, sets })
    }

    /// Intersection of the sets named by an index tuple.
    pub fn intersection(&self, tuple: &[usize]) -> SimplicialComplex {
        let mut acc = self.sets[tuple[0]].clone();
        for &i in &tuple[1..] {
            acc = acc.intersection(&self.sets[i]);
        }
        acc
    }
}

#[derive(Debug, Clone)]
pub struct CechComponent {
    pub tuple: Vec<usize>,
    pub complex: SimplicialComplex,
    /// Original vertex → global vertex of the assembled level.
    pub vertex_map: BTreeMap<Vertex, Vertex>,
}

#[derive(Debug, Clone)]
pub struct CechSpace {
    pub space: Arc<SemiSimplicialSpace>,
    pub cover: CoveredComplex,
    pub components: Vec<Vec<CechComponent>>,
    /// Per level: global vertex → (component index, original vertex).
    origin: Vec<Vec<(usize, Vertex)>>,
}

impl CechSpace {
    pub fn component_index(&self, p: usize, tuple: &[usize]) -> Option<usize> {
        self.components[p].iter().position(|c| c.tuple == tuple)
    }

    pub fn origin(&self, p: usize, v: Vertex) -> (usize, Vertex) {
        self.origin[p][v as usize]
    }

    pub fn global_vertex(&self, p: usize, tuple: &[usize], original: Vertex) -> Option<Vertex> {
        let idx = self.component_index(p, tuple)?;
        self.components[p][idx].vertex_map.get(&original).copied()
    }
}

/// Level p is the disjoint union, over all index tuples (i₀,…,i_p), of the
/// intersections U_{i₀} ∩ … ∩ U_{i_p}; empty intersections are omitted and
/// face maps forget one index.
pub fn cech_space(cover: &CoveredComplex, truncation: usize) -> Result<CechSpace> {
    if truncation < 1 {
        return Err(Error::validation("truncation must be at least 1"));
    }
    let m = cover.sets.len();
    let mut components: Vec<Vec<CechComponent>> = Vec::with_capacity(truncation + 1);
    let mut tuples: Vec<Vec<usize>> = (0..m).map(|i| vec![i]).collect();
    for p in 0..=truncation {
        if p > 0 {
            let mut next = Vec::new();
            for t in &tuples {
                for i in 0..m {
                    let mut t2 = t.clone();
                    t2.push(i);
                    next.push(t2);
                }
            }
            tuples = next;
        }
        let mut level = Vec::new();
        for t in &tuples {
            let c = cover.intersection(t);
            if !c.is_empty() {
                level.push(CechComponent {
                    tuple: t.clone(),
                    complex: c,
                    vertex_map: BTreeMap::new(),
                });
            }
        }
        // Drop tuples with empty intersections from further extension:
        // any extension of an empty intersection stays empty.
        tuples = level.iter().map(|c| c.tuple.clone()).collect();
        components.push(level);
    }

    let mut levels = Vec::with_capacity(truncation + 1);
    let mut labels = Vec::with_capacity(truncation + 1);
    let mut origin = Vec::with_capacity(truncation + 1);
    for level in components.iter_mut() {
        let refs: Vec<&SimplicialComplex> = level.iter().map(|c| &c.complex).collect();
        let (union, maps) = assemble_disjoint(&refs);
        let mut level_labels = BTreeMap::new();
        let mut level_origin = vec![(0usize, 0 as Vertex); union.count_of_dim(0)];
        for ((comp, map), idx) in level.iter_mut().zip(maps).zip(0usize..) {
            for (&orig, &global) in &map {
                let name = comp
                    .tuple
                    .iter()
                    .map(|&i| cover.names[i].clone())
                    .collect::<Vec<_>>()
                    .join("&");
                level_labels.insert(global, format!("{name}:{orig}"));
                level_origin[global as usize] = (idx, orig);
            }
            comp.vertex_map = map;
        }
        levels.push(union);
        labels.push(level_labels);
        origin.push(level_origin);
    }

    let mut faces = vec![Vec::new()];
    for p in 1..=truncation {
        let target_index: BTreeMap<&[usize], usize> = components[p - 1]
            .iter()
            .enumerate()
            .map(|(i, c)| (c.tuple.as_slice(), i))
            .collect();
        let mut fs = Vec::with_capacity(p + 1);
        for i in 0..=p {
            let mut map = BTreeMap::new();
            for comp in &components[p] {
                let mut t = comp.tuple.clone();
                t.remove(i);
                let target = &components[p - 1][target_index[t.as_slice()]];
                for (&orig, &global) in &comp.vertex_map {
                    map.insert(global, target.vertex_map[&orig]);
                }
            }
            fs.push(SimplicialMap::new(map));
        }
        faces.push(fs);
    }

    let space = SemiSimplicialSpace::new(levels, faces)?.with_labels(labels);
    Ok(CechSpace {
        space: Arc::new(space),
        cover: cover.clone(),
        components,
        origin,
    })
}

/// The groupoid of a cover: objects are pairs (set, vertex), one arrow
/// (i, j, v) for every vertex v of U_i ∩ U_j, composing along the shared
/// vertex. Its nerve agrees with `cech_space` on vertex sets.
pub fn cech_groupoid(cover: &CoveredComplex) -> Result<FiniteGroupoid> {
    let mut objects = Vec::new();
    let mut object_index = BTreeMap::new();
    for (i, set) in cover.sets.iter().enumerate() {
        for v in set.vertices() {
            object_index.insert((i, v), objects.len());
            objects.push(format!("{}:{v}", cover.names[i]));
        }
    }
    let mut arrows = Vec::new();
    let mut arrow_index = BTreeMap::new();
    for i in 0..cover.sets.len() {
        for j in 0..cover.sets.len() {
            for v in cover.sets[i].vertices() {
                if cover.sets[j].has_vertex(v) {
                    arrow_index.insert((i, j, v), arrows.len());
                    arrows.push(Arrow {
                        name: format!("{}>{}:{v}", cover.names[i], cover.names[j]),
                        src: object_index[&(i, v)],
                        dst: object_index[&(j, v)],
                    });
                }
            }
        }
    }
    let mut compose = BTreeMap::new();
    for (&(i, j, v), &x) in &arrow_index {
        for k in 0..cover.sets.len() {
            if let Some(&y) = arrow_index.get(&(j, k, v)) {
                compose.insert((x, y), arrow_index[&(i, k, v)]);
            }
        }
    }
    FiniteGroupoid::new(objects, arrows, compose)
}

// ---------------------------------------------------------------------------
// Transformation space of a finite group action.

#[derive(Debug, Clone)]
pub struct GroupAction {
    pub group: FiniteGroupoid,
    pub complex: SimplicialComplex,
    /// Automorphism per group element (arrow index of the one-object groupoid).
    pub perms: Vec<SimplicialMap>,
}

impl GroupAction {
    pub fn new(
        group: FiniteGroupoid,
        complex: SimplicialComplex,
        perms: Vec<SimplicialMap>,
    ) -> Result<Self> {
        if group.objects().len() != 1 {
            return Err(Error::validation("acting group must have one object"));
        }
        if perms.len() != group.arrows().len() {
            return Err(Error::validation("need one automorphism per group element"));
        }
        for (g, perm) in perms.iter().enumerate() {
            perm.validate(&complex, &complex).map_err(|e| {
                Error::validation(format!(
                    "element {} does not act simplicially: {e}",
                    group.arrows()[g].name
                ))
            })?;
            if !perm.is_surjective_onto(&complex) {
                return Err(Error::validation(format!(
                    "element {} does not act by an automorphism",
                    group.arrows()[g].name
                )));
            }
        }
        let e = group.identity_of(0);
        for v in complex.vertices() {
            if perms[e].apply(v) != Some(v) {
                return Err(Error::validation("identity element must act trivially"));
            }
        }
        // v·(gh) = (v·g)·h with the diagrammatic product gh.
        for g in 0..perms.len() {
            for h in 0..perms.len() {
                let gh = group.compose(g, h).unwrap();
                let lhs = &perms[gh];
                let rhs = perms[g].and_then(&perms[h])?;
                for v in complex.vertices() {
                    if lhs.apply(v) != rhs.apply(v) {
                        return Err(Error::validation(format!(
                            "action law fails at ({}, {})",
                            group.arrows()[g].name, group.arrows()[h].name
                        )));
                    }
                }
            }
        }
        Ok(GroupAction {
            group,
            complex,
            perms,
        })
    }
}

#[derive(Debug, Clone)]
pub struct TransComponent {
    pub tuple: Vec<usize>,
    pub vertex_map: BTreeMap<Vertex, Vertex>,
}

#[derive(Debug, Clone)]
pub struct TransformationSpace {
    pub space: Arc<SemiSimplicialSpace>,
    pub action: GroupAction,
    pub components: Vec<Vec<TransComponent>>,
}

impl TransformationSpace {
    pub fn global_vertex(&self, p: usize, tuple: &[usize], original: Vertex) -> Option<Vertex> {
        let idx = self.components[p].iter().position(|c| c.tuple == tuple)?;
        self.components[p][idx].vertex_map.get(&original).copied()
    }
}

/// Level p is |G|^p disjoint copies of the complex, indexed by g-tuples;
/// d₀ applies the first element's automorphism and drops it, interior
/// faces multiply neighbours, d_p drops the last element.
pub fn transformation_space(action: &GroupAction, truncation: usize) -> Result<TransformationSpace> {
    if truncation < 1 {
        return Err(Error::validation("truncation must be at least 1"));
    }
    let n = action.perms.len();
    let mut components: Vec<Vec<TransComponent>> = Vec::with_capacity(truncation + 1);
    let mut tuples: Vec<Vec<usize>> = vec![vec![]];
    for p in 0..=truncation {
        if p > 0 {
            let mut next = Vec::new();
            for t in &tuples {
                for g in 0..n {
                    let mut t2 = t.clone();
                    t2.push(g);
                    next.push(t2);
                }
            }
            tuples = next;
        }
        components.push(
            tuples
                .iter()
                .map(|t| TransComponent {
                    tuple: t.clone(),
                    vertex_map: BTreeMap::new(),
                })
                .collect(),
        );
    }

    let mut levels = Vec::with_capacity(truncation + 1);
    let mut labels = Vec::with_capacity(truncation + 1);
    for level in components.iter_mut() {
        let refs: Vec<&SimplicialComplex> = level.iter().map(|_| &action.complex).collect();
        let (union, maps) = assemble_disjoint(&refs);
        let mut level_labels = BTreeMap::new();
        for (comp, map) in level.iter_mut().zip(maps) {
            if !comp.tuple.is_empty() {
                let name = comp
                    .tuple
                    .iter()
                    .map(|&g| action.group.arrows()[g].name.clone())
                    .collect::<Vec<_>>()
                    .join("|");
                for (&orig, &global) in &map {
                    level_labels.insert(global, format!("{name}:{orig}"));
                }
            }
            comp.vertex_map = map;
        }
        levels.push(union);
        labels.push(level_labels);
    }

    let mut faces = vec![Vec::new()];
    for p in 1..=truncation {
        let target_index: BTreeMap<&[usize], usize> = components[p - 1]
            .iter()
            .enumerate()
            .map(|(i, c)| (c.tuple.as_slice(), i))
            .collect();
        let mut fs = Vec::with_capacity(p + 1);
        for i in 0..=p {
            let mut map = BTreeMap::new();
            for comp in &components[p] {
                let (target_tuple, vertex_action): (Vec<usize>, Option<&SimplicialMap>) = if i == 0
                {
                    (comp.tuple[1..].to_vec(), Some(&action.perms[comp.tuple[0]]))
                } else if i == p {
                    (comp.tuple[..p - 1].to_vec(), None)
                } else {
                    let mut t = Vec::with_capacity(p - 1);
                    t.extend_from_slice(&comp.tuple[..i - 1]);
                    t.push(
                        action
                            .group
                            .compose(comp.tuple[i - 1], comp.tuple[i])
                            .unwrap(),
                    );
                    t.extend_from_slice(&comp.tuple[i + 1..]);
                    (t, None)
                };
                let target = &components[p - 1][target_index[target_tuple.as_slice()]];
                for (&orig, &global) in &comp.vertex_map {
                    let image_orig = match vertex_action {
                        Some(perm) => perm.apply(orig).unwrap(),
                        None => orig,
                    };
                    map.insert(global, target.vertex_map[&image_orig]);
                }
            }
            fs.push(SimplicialMap::new(map));
        }
        faces.push(fs);
    }

    let space = SemiSimplicialSpace::new(levels, faces)?.with_labels(labels);
    Ok(TransformationSpace {
        space: Arc::new(space),
        action: action.clone(),
        components,
    })
}

/// Constant tower: every level is K, every face map the identity.
pub fn manifold_space(k: &SimplicialComplex, truncation: usize) -> Result<SemiSimplicialSpace> {
    if truncation < 1 {
        return Err(Error::validation("truncation must be at least 1"));
    }
    let levels = vec![k.clone(); truncation + 1];
    let mut faces = vec![Vec::new()];
    for p in 1..=truncation {
        faces.push(vec![SimplicialMap::identity(k); p + 1]);
    }
    SemiSimplicialSpace::new(levels, faces)
}

/// A strict morphism of towers: one simplicial map per level, commuting
/// with every face map. Source and target truncations must agree far
/// enough that all source levels have somewhere to go.
#[derive(Debug, Clone)]
pub struct SpaceMap {
    source: Arc<SemiSimplicialSpace>,
    target: Arc<SemiSimplicialSpace>,
    levels: Vec<SimplicialMap>,
}

impl SpaceMap {
    pub fn new(
        source: Arc<SemiSimplicialSpace>,
        target: Arc<SemiSimplicialSpace>,
        levels: Vec<SimplicialMap>,
    ) -> Result<Self> {
        if levels.len() != source.truncation() + 1 {
            return Err(Error::validation(format!(
                "expected {} level maps, got {}",
                source.truncation() + 1,
                levels.len()
            )));
        }
        if target.truncation() < source.truncation() {
            return Err(Error::validation(
                "target tower is shorter than the source tower",
            ));
        }
        for (p, f) in levels.iter().enumerate() {
            f.validate(source.level(p), target.level(p))
                .map_err(|e| Error::validation(format!("level {p}: {e}")))?;
        }
        for p in 1..levels.len() {
            for i in 0..=p {
                for v in source.level(p).vertices() {
                    let down_then_map = source
                        .face(p, i)
                        .apply(v)
                        .and_then(|w| levels[p - 1].apply(w));
                    let map_then_down = levels[p]
                        .apply(v)
                        .and_then(|w| target.face(p, i).apply(w));
                    if down_then_map != map_then_down {
                        return Err(Error::validation(format!(
                            "level map does not commute with face {i} at level {p}, vertex {v}"
                        )));
                    }
                }
            }
        }
        Ok(SpaceMap {
            source,
            target,
            levels,
        })
    }

    pub fn identity(space: &Arc<SemiSimplicialSpace>) -> Self {
        let levels = (0..=space.truncation())
            .map(|p| SimplicialMap::identity(space.level(p)))
            .collect();
        SpaceMap {
            source: space.clone(),
            target: space.clone(),
            levels,
        }
    }

    pub fn source(&self) -> &Arc<SemiSimplicialSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SemiSimplicialSpace> {
        &self.target
    }

    pub fn level_map(&self, p: usize) -> &SimplicialMap {
        &self.levels[p]
    }
}
