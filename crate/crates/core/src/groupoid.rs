//! Finite groupoids with explicit composition tables.
//!
//! Arrows compose diagrammatically: `compose(x, y)` is "x then y" and is
//! defined exactly when `target(x) == source(y)`. Identities and inverses
//! are not part of the input; the constructor derives them and fails if
//! they do not exist or are not unique.

use std::collections::BTreeMap;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub src: usize,
    pub dst: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    compose: BTreeMap<(usize, usize), usize>,
    identities: Vec<usize>,
    inverses: Vec<usize>,
}

impl FiniteGroupoid {
    pub fn new(
        objects: Vec<String>,
        arrows: Vec<Arrow>,
        compose: BTreeMap<(usize, usize), usize>,
    ) -> Result<Self> {
        for (i, a) in arrows.iter().enumerate() {
            if a.src >= objects.len() || a.dst >= objects.len() {
                return Err(Error::validation(format!(
                    "arrow {i} ({}) has endpoint out of range",
                    a.name
                )));
            }
        }
        for (&(x, y), &z) in &compose {
            let (Some(ax), Some(ay), Some(az)) = (arrows.get(x), arrows.get(y), arrows.get(z))
            else {
                return Err(Error::validation("composition table index out of range"));
            };
            if ax.dst != ay.src {
                return Err(Error::validation(format!(
                    "table entry ({}, {}) composes non-composable arrows",
                    ax.name, ay.name
                )));
            }
            if az.src != ax.src || az.dst != ay.dst {
                return Err(Error::validation(format!(
                    "composite of {} and {} has wrong endpoints",
                    ax.name, ay.name
                )));
            }
        }
        // The table must cover every composable pair.
        for x in 0..arrows.len() {
            for y in 0..arrows.len() {
                if arrows[x].dst == arrows[y].src && !compose.contains_key(&(x, y)) {
                    return Err(Error::validation(format!(
                        "missing composite of {} and {}",
                        arrows[x].name, arrows[y].name
                    )));
                }
            }
        }
        // Associativity over all composable triples.
        for x in 0..arrows.len() {
            for y in 0..arrows.len() {
                if arrows[x].dst != arrows[y].src {
                    continue;
                }
                let xy = compose[&(x, y)];
                for z in 0..arrows.len() {
                    if arrows[y].dst != arrows[z].src {
                        continue;
                    }
                    let yz = compose[&(y, z)];
                    if compose[&(xy, z)] != compose[&(x, yz)] {
                        return Err(Error::validation(format!(
                            "associativity fails at ({}, {}, {})",
                            arrows[x].name, arrows[y].name, arrows[z].name
                        )));
                    }
                }
            }
        }
        // Identities: for each object the unique endo-arrow acting
        // neutrally on both sides.
        let mut identities = Vec::with_capacity(objects.len());
        for u in 0..objects.len() {
            let mut found = None;
            'cand: for e in 0..arrows.len() {
                if arrows[e].src != u || arrows[e].dst != u {
                    continue;
                }
                for x in 0..arrows.len() {
                    if arrows[x].src == u && compose[&(e, x)] != x {
                        continue 'cand;
                    }
                    if arrows[x].dst == u && compose[&(x, e)] != x {
                        continue 'cand;
                    }
                }
                if found.replace(e).is_some() {
                    return Err(Error::validation(format!(
                        "object {} has two identities",
                        objects[u]
                    )));
                }
            }
            match found {
                Some(e) => identities.push(e),
                None => {
                    return Err(Error::validation(format!(
                        "object {} has no identity arrow",
                        objects[u]
                    )));
                }
            }
        }
        // Inverses.
        let mut inverses = Vec::with_capacity(arrows.len());
        for x in 0..arrows.len() {
            let mut found = None;
            for y in 0..arrows.len() {
                if arrows[y].src == arrows[x].dst
                    && arrows[y].dst == arrows[x].src
                    && compose[&(x, y)] == identities[arrows[x].src]
                    && compose[&(y, x)] == identities[arrows[x].dst]
                {
                    if found.replace(y).is_some() {
                        return Err(Error::validation(format!(
                            "arrow {} has two inverses",
                            arrows[x].name
                        )));
                    }
                }
            }
            match found {
                Some(y) => inverses.push(y),
                None => {
                    return Err(Error::validation(format!(
                        "arrow {} has no inverse",
                        arrows[x].name
                    )));
                }
            }
        }
        Ok(FiniteGroupoid {
            objects,
            arrows,
            compose,
            identities,
            inverses,
        })
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn source(&self, x: usize) -> usize {
        self.arrows[x].src
    }

    pub fn target(&self, x: usize) -> usize {
        self.arrows[x].dst
    }

    pub fn compose(&self, x: usize, y: usize) -> Option<usize> {
        self.compose.get(&(x, y)).copied()
    }

    pub fn identity_of(&self, object: usize) -> usize {
        self.identities[object]
    }

    pub fn is_identity(&self, x: usize) -> bool {
        self.identities[self.arrows[x].src] == x
    }

    pub fn inverse_of(&self, x: usize) -> usize {
        self.inverses[x]
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    /// Composable p-tuples (x₁,…,x_p) with `target(xᵢ) == source(xᵢ₊₁)`,
    /// in lexicographic order of arrow indices. `p ≥ 1`.
    pub fn composable_tuples(&self, p: usize) -> Vec<Vec<usize>> {
        assert!(p >= 1);
        let mut tuples: Vec<Vec<usize>> = (0..self.arrows.len()).map(|x| vec![x]).collect();
        for _ in 1..p {
            let mut next = Vec::new();
            for t in &tuples {
                let end = self.arrows[*t.last().unwrap()].dst;
                for (y, a) in self.arrows.iter().enumerate() {
                    if a.src == end {
                        let mut t2 = t.clone();
                        t2.push(y);
                        next.push(t2);
                    }
                }
            }
            tuples = next;
        }
        tuples
    }

    /// One-object groupoid from a group multiplication table.
    /// `table[i][j]` is the index of the product "element i then element j".
    pub fn from_group_table(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::validation("group table is not square"));
        }
        let arrows = names
            .iter()
            .map(|name| Arrow {
                name: name.clone(),
                src: 0,
                dst: 0,
            })
            .collect();
        let mut compose = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                if table[i][j] >= n {
                    return Err(Error::validation("group table entry out of range"));
                }
                compose.insert((i, j), table[i][j]);
            }
        }
        FiniteGroupoid::new(vec!["*".to_string()], arrows, compose)
    }

    /// Cyclic group of order n, elements named "0", …, "n−1".
    pub fn cyclic_group(n: usize) -> Self {
        let names = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n)
            .map(|i| (0..n).map(|j| (i + j) % n).collect())
            .collect();
        FiniteGroupoid::from_group_table(names, table).unwrap()
    }

    /// Direct product of two groups given as one-object groupoids.
    pub fn product_group(a: &FiniteGroupoid, b: &FiniteGroupoid) -> Result<Self> {
        if a.objects.len() != 1 || b.objects.len() != 1 {
            return Err(Error::validation("product_group expects one-object groupoids"));
        }
        let na = a.arrows.len();
        let nb = b.arrows.len();
        let idx = |i: usize, j: usize| i * nb + j;
        let names = (0..na)
            .flat_map(|i| {
                (0..nb).map(move |j| format!("({},{})", a.arrows[i].name, b.arrows[j].name))
            })
            .collect();
        let mut table = vec![vec![0; na * nb]; na * nb];
        for i1 in 0..na {
            for j1 in 0..nb {
                for i2 in 0..na {
                    for j2 in 0..nb {
                        let p = a.compose(i1, i2).unwrap();
                        let q = b.compose(j1, j2).unwrap();
                        table[idx(i1, j1)][idx(i2, j2)] = idx(p, q);
                    }
                }
            }
        }
        FiniteGroupoid::from_group_table(names, table)
    }

    /// Pair groupoid on n objects: one arrow u→v for every ordered pair.
    pub fn pair_groupoid(n: usize) -> Self {
        let objects = (0..n).map(|i| i.to_string()).collect();
        let mut arrows = Vec::new();
        for u in 0..n {
            for v in 0..n {
                arrows.push(Arrow {
                    name: format!("{u}>{v}"),
                    src: u,
                    dst: v,
                });
            }
        }
        let idx = |u: usize, v: usize| u * n + v;
        let mut compose = BTreeMap::new();
        for u in 0..n {
            for v in 0..n {
                for w in 0..n {
                    compose.insert((idx(u, v), idx(v, w)), idx(u, w));
                }
            }
        }
        FiniteGroupoid::new(objects, arrows, compose).unwrap()
    }
}
