//! Finite abstract simplicial complexes and vertex maps.
//!
//! A simplex is stored as its strictly increasing vertex list, so the
//! numeric order of vertex ids doubles as the orientation convention for
//! every complex in the crate. Complexes are closed under faces by
//! construction and keep their simplices in ordered sets, which makes
//! iteration order (and hence every basis built from it) deterministic.

use std::collections::{BTreeMap, BTreeSet};

use crate::{Error, Result};

pub type Vertex = u32;

/// Strictly increasing vertex list; `dim = len − 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex(Vec<Vertex>);

impl Simplex {
    pub fn new(mut vertices: Vec<Vertex>) -> Result<Self> {
        vertices.sort_unstable();
        if vertices.is_empty() {
            return Err(Error::validation("empty simplex"));
        }
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::validation(format!(
                "repeated vertex in simplex {vertices:?}"
            )));
        }
        Ok(Simplex(vertices))
    }

    pub fn vertex(v: Vertex) -> Self {
        Simplex(vec![v])
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Face obtained by deleting the i-th vertex. Only valid on `dim > 0`.
    pub fn face(&self, i: usize) -> Simplex {
        let mut v = self.0.clone();
        v.remove(i);
        Simplex(v)
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        let mut it = other.0.iter();
        self.0.iter().all(|v| it.any(|w| w == v))
    }
}

/// Sort a vertex tuple, returning the canonical simplex and the sign of
/// the sorting permutation, or `None` if a vertex repeats. This is how a
/// cochain (an alternating function of vertex tuples) is evaluated on
/// arbitrary, possibly unordered input.
pub fn sort_with_sign(tuple: &[Vertex]) -> Option<(Simplex, i8)> {
    let mut v: Vec<Vertex> = tuple.to_vec();
    // Count inversions; the tuples here are tiny.
    let mut sign = 1i8;
    for i in 0..v.len() {
        for j in (i + 1)..v.len() {
            match v[i].cmp(&v[j]) {
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Greater => sign = -sign,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    v.sort_unstable();
    Some((Simplex(v), sign))
}

/// Finite simplicial complex, graded by dimension and closed under faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    by_dim: Vec<BTreeSet<Simplex>>,
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        SimplicialComplex { by_dim: Vec::new() }
    }

    /// Build the closure of the given simplices.
    pub fn from_simplices<I>(simplices: I) -> Self
    where
        I: IntoIterator<Item = Simplex>,
    {
        let mut c = SimplicialComplex::empty();
        for s in simplices {
            c.insert_with_faces(s);
        }
        c
    }

    /// Discrete complex on vertices `0..n`.
    pub fn discrete(n: usize) -> Self {
        SimplicialComplex::from_simplices((0..n as Vertex).map(Simplex::vertex))
    }

    fn insert_with_faces(&mut self, s: Simplex) {
        let d = s.dim();
        while self.by_dim.len() <= d {
            self.by_dim.push(BTreeSet::new());
        }
        if !self.by_dim[d].insert(s.clone()) {
            return;
        }
        if d > 0 {
            for i in 0..=d {
                self.insert_with_faces(s.face(i));
            }
        }
    }

    /// Dimension of the complex, or `None` when it has no simplices.
    pub fn dim(&self) -> Option<usize> {
        self.by_dim.len().checked_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.by_dim.is_empty()
    }

    pub fn simplices_of_dim(&self, d: usize) -> impl Iterator<Item = &Simplex> {
        self.by_dim.get(d).into_iter().flatten()
    }

    pub fn count_of_dim(&self, d: usize) -> usize {
        self.by_dim.get(d).map_or(0, |s| s.len())
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.by_dim.iter().flatten()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.simplices_of_dim(0).map(|s| s.0[0])
    }

    pub fn has_simplex(&self, s: &Simplex) -> bool {
        self.by_dim.get(s.dim()).is_some_and(|set| set.contains(s))
    }

    pub fn has_vertex(&self, v: Vertex) -> bool {
        self.has_simplex(&Simplex::vertex(v))
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.simplices().all(|s| other.has_simplex(s))
    }

    pub fn intersection(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let common = self.simplices().filter(|s| other.has_simplex(s)).cloned();
        // Both inputs are closed, so the intersection already is.
        SimplicialComplex::from_simplices(common)
    }

    pub fn maximal_simplices(&self) -> Vec<&Simplex> {
        self.simplices()
            .filter(|s| {
                self.simplices_of_dim(s.dim() + 1)
                    .all(|t| !s.is_face_of(t))
            })
            .collect()
    }

    /// All maximal simplices share one dimension. Degenerate cases
    /// (empty complex) count as pure.
    pub fn is_pure(&self) -> bool {
        let maximal = self.maximal_simplices();
        maximal
            .windows(2)
            .all(|w| w[0].dim() == w[1].dim())
    }

    /// Apply an injective vertex relabeling.
    pub fn relabel(&self, map: &BTreeMap<Vertex, Vertex>) -> Result<SimplicialComplex> {
        let mut out = SimplicialComplex::empty();
        for s in self.simplices() {
            let vs: Option<Vec<Vertex>> = s.0.iter().map(|v| map.get(v).copied()).collect();
            let vs = vs.ok_or_else(|| Error::validation("relabeling misses a vertex"))?;
            out.insert_with_faces(Simplex::new(vs)?);
        }
        Ok(out)
    }

    /// Closure check: redundant for complexes built here, but deserialized
    /// or hand-assembled data goes through it.
    pub fn check_closed(&self) -> Result<()> {
        for s in self.simplices() {
            if s.dim() == 0 {
                continue;
            }
            for i in 0..=s.dim() {
                if !self.has_simplex(&s.face(i)) {
                    return Err(Error::validation(format!(
                        "missing face {:?} of {:?}",
                        s.face(i).vertices(),
                        s.vertices()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Vertex map between complexes. Simplices may map to lower-dimensional
/// images (vertex collapses are allowed); validation only demands that the
/// image of every simplex is again a simplex of the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialMap {
    map: BTreeMap<Vertex, Vertex>,
}

impl SimplicialMap {
    pub fn new(map: BTreeMap<Vertex, Vertex>) -> Self {
        SimplicialMap { map }
    }

    pub fn identity(c: &SimplicialComplex) -> Self {
        SimplicialMap {
            map: c.vertices().map(|v| (v, v)).collect(),
        }
    }

    pub fn apply(&self, v: Vertex) -> Option<Vertex> {
        self.map.get(&v).copied()
    }

    /// Image as a canonical simplex; collapses repeated images.
    pub fn image_simplex(&self, s: &Simplex) -> Result<Simplex> {
        let mut vs = Vec::with_capacity(s.0.len());
        for v in &s.0 {
            vs.push(
                self.apply(*v)
                    .ok_or_else(|| Error::validation(format!("vertex {v} not in map domain")))?,
            );
        }
        vs.sort_unstable();
        vs.dedup();
        Simplex::new(vs)
    }

    /// `then ∘ self`.
    pub fn and_then(&self, then: &SimplicialMap) -> Result<SimplicialMap> {
        let mut map = BTreeMap::new();
        for (v, w) in &self.map {
            let u = then
                .apply(*w)
                .ok_or_else(|| Error::validation(format!("vertex {w} not in map domain")))?;
            map.insert(*v, u);
        }
        Ok(SimplicialMap { map })
    }

    pub fn validate(&self, src: &SimplicialComplex, dst: &SimplicialComplex) -> Result<()> {
        for v in src.vertices() {
            match self.apply(v) {
                None => {
                    return Err(Error::validation(format!("vertex {v} has no image")));
                }
                Some(w) if !dst.has_vertex(w) => {
                    return Err(Error::validation(format!(
                        "vertex {v} maps to {w}, not a vertex of the target"
                    )));
                }
                _ => {}
            }
        }
        for s in src.simplices() {
            let img = self.image_simplex(s)?;
            if !dst.has_simplex(&img) {
                return Err(Error::validation(format!(
                    "image {:?} of simplex {:?} is not in the target",
                    img.vertices(),
                    s.vertices()
                )));
            }
        }
        Ok(())
    }

    pub fn entries(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.map.iter().map(|(a, b)| (*a, *b))
    }

    pub fn is_surjective_onto(&self, dst: &SimplicialComplex) -> bool {
        let image: BTreeSet<Vertex> = self.map.values().copied().collect();
        dst.vertices().all(|v| image.contains(&v))
    }
}
