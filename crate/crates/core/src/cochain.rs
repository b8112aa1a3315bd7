//! The double complex in discrete form: a `Cochain` of bidegree (k, p) is
//! a sparse, ring-valued, alternating function on the k-simplices of level
//! X_p. `d` is the simplicial coboundary within a level, `∂` the
//! alternating sum of face-map pullbacks across levels, and the total
//! differential on degree-n cochains is δ = (−1)^p d + ∂.
//!
//! Cochains are evaluated on arbitrary vertex tuples through the sorting
//! permutation's sign (zero on repeats), which is what makes pullbacks
//! along arbitrary — even collapsing — vertex maps commute with d.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::Zero;

use crate::complex::{sort_with_sign, Simplex, SimplicialMap, Vertex};
use crate::matrix::IntMatrix;
use crate::ring::Ring;
use crate::space::{SemiSimplicialSpace, SpaceMap};
use crate::{Error, Result};

pub(crate) fn same_space(a: &Arc<SemiSimplicialSpace>, b: &Arc<SemiSimplicialSpace>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cochain {
    space: Arc<SemiSimplicialSpace>,
    k: usize,
    p: usize,
    ring: Ring,
    /// Canonical simplices with nonzero normalized values.
    values: BTreeMap<Simplex, BigRational>,
}

impl Cochain {
    pub fn zero(space: Arc<SemiSimplicialSpace>, k: usize, p: usize, ring: Ring) -> Self {
        assert!(p <= space.truncation(), "level beyond truncation");
        Cochain {
            space,
            k,
            p,
            ring,
            values: BTreeMap::new(),
        }
    }

    pub fn from_values<I>(
        space: Arc<SemiSimplicialSpace>,
        k: usize,
        p: usize,
        ring: Ring,
        values: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (Simplex, BigRational)>,
    {
        if p > space.truncation() {
            return Err(Error::validation(format!(
                "level {p} exceeds truncation {}",
                space.truncation()
            )));
        }
        let mut c = Cochain::zero(space, k, p, ring);
        for (s, x) in values {
            if s.dim() != k {
                return Err(Error::validation(format!(
                    "simplex {:?} has dimension {}, cochain expects {k}",
                    s.vertices(),
                    s.dim()
                )));
            }
            if !c.space.level(p).has_simplex(&s) {
                return Err(Error::validation(format!(
                    "simplex {:?} is not in level {p}",
                    s.vertices()
                )));
            }
            if !ring.admits(&x) {
                return Err(Error::validation(format!(
                    "value {x} does not lie in {ring}"
                )));
            }
            let cur = c.values.remove(&s).unwrap_or_else(BigRational::zero);
            let next = ring.add(&cur, &x);
            if !next.is_zero() {
                c.values.insert(s, next);
            }
        }
        Ok(c)
    }

    pub fn space(&self) -> &Arc<SemiSimplicialSpace> {
        &self.space
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k + self.p
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = (&Simplex, &BigRational)> {
        self.values.iter()
    }

    /// Value on a canonical simplex.
    pub fn value(&self, s: &Simplex) -> BigRational {
        self.values.get(s).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Alternating evaluation on an arbitrary vertex tuple: zero on
    /// repeats, otherwise the canonical value times the sorting sign.
    pub fn eval_tuple(&self, tuple: &[Vertex]) -> BigRational {
        match sort_with_sign(tuple) {
            None => BigRational::zero(),
            Some((s, sign)) => {
                let v = self.value(&s);
                if sign < 0 {
                    self.ring.neg(&v)
                } else {
                    v
                }
            }
        }
    }

    fn assert_same_shape(&self, other: &Cochain) {
        assert!(same_space(&self.space, &other.space), "different spaces");
        assert_eq!((self.k, self.p, self.ring), (other.k, other.p, other.ring));
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        self.assert_same_shape(other);
        let mut out = self.clone();
        for (s, x) in &other.values {
            let cur = out.values.remove(s).unwrap_or_else(BigRational::zero);
            let next = self.ring.add(&cur, x);
            if !next.is_zero() {
                out.values.insert(s.clone(), next);
            }
        }
        out
    }

    pub fn neg(&self) -> Cochain {
        let mut out = self.clone();
        for x in out.values.values_mut() {
            *x = self.ring.neg(x);
        }
        out.values.retain(|_, x| !x.is_zero());
        out
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        self.add(&other.neg())
    }

    pub fn scale_by_int(&self, c: &BigInt) -> Cochain {
        let mut out = self.clone();
        let c = BigRational::from_integer(c.clone());
        for x in out.values.values_mut() {
            *x = self.ring.normalize(&*x * &c);
        }
        out.values.retain(|_, x| !x.is_zero());
        out
    }

    pub fn scale(&self, c: &BigRational) -> Result<Cochain> {
        let mut out = self.clone();
        for x in out.values.values_mut() {
            *x = self.ring.mul(x, c)?;
        }
        out.values.retain(|_, x| !x.is_zero());
        Ok(out)
    }

    /// Reinterpret the stored representatives in another ring. The values
    /// must already be members (an integer cochain viewed mod n, a mod-1
    /// representative viewed rationally, …).
    pub fn cast(&self, ring: Ring) -> Result<Cochain> {
        Cochain::from_values(
            self.space.clone(),
            self.k,
            self.p,
            ring,
            self.values.iter().map(|(s, x)| (s.clone(), x.clone())),
        )
    }

    /// Simplicial coboundary within the level:
    /// (dc)(σ) = Σᵢ (−1)ⁱ c(σ without vertex i).
    pub fn d(&self) -> Cochain {
        let mut out = Cochain::zero(self.space.clone(), self.k + 1, self.p, self.ring);
        if self.is_zero() {
            return out;
        }
        for s in self.space.level(self.p).simplices_of_dim(self.k + 1) {
            let mut acc = BigRational::zero();
            for i in 0..=self.k + 1 {
                let v = self.value(&s.face(i));
                if v.is_zero() {
                    continue;
                }
                acc = if i % 2 == 0 {
                    self.ring.add(&acc, &v)
                } else {
                    self.ring.sub(&acc, &v)
                };
            }
            if !acc.is_zero() {
                out.values.insert(s.clone(), acc);
            }
        }
        out
    }

    /// Pull back along a vertex map into level `p` of `space`
    /// (degenerate images evaluate to zero via `eval_tuple`).
    pub fn pullback_along(
        &self,
        f: &SimplicialMap,
        space: &Arc<SemiSimplicialSpace>,
        p: usize,
    ) -> Result<Cochain> {
        let mut out = Cochain::zero(space.clone(), self.k, p, self.ring);
        for s in space.level(p).simplices_of_dim(self.k) {
            let tuple: Option<Vec<Vertex>> =
                s.vertices().iter().map(|v| f.apply(*v)).collect();
            let tuple = tuple.ok_or_else(|| {
                Error::validation("pullback map does not cover the source level")
            })?;
            let v = self.eval_tuple(&tuple);
            if !v.is_zero() {
                out.values.insert(s.clone(), v);
            }
        }
        Ok(out)
    }

    /// ∂c = Σᵢ (−1)ⁱ dᵢ* c, one level up.
    pub fn partial(&self) -> Result<Cochain> {
        if self.p + 1 > self.space.truncation() {
            return Err(Error::math(format!(
                "∂ would land on level {} beyond truncation {}",
                self.p + 1,
                self.space.truncation()
            )));
        }
        let space = self.space.clone();
        let mut out = Cochain::zero(space.clone(), self.k, self.p + 1, self.ring);
        for i in 0..=self.p + 1 {
            let pulled = self.pullback_along(space.face(self.p + 1, i), &space, self.p + 1)?;
            out = if i % 2 == 0 {
                out.add(&pulled)
            } else {
                out.sub(&pulled)
            };
        }
        Ok(out)
    }
}

/// Constant-one (0,0)-cochain, the cup-product unit.
pub fn unit_cochain(space: &Arc<SemiSimplicialSpace>, ring: Ring) -> Result<Cochain> {
    let one = ring.one()?;
    Cochain::from_values(
        space.clone(),
        0,
        0,
        ring,
        space
            .level(0)
            .simplices_of_dim(0)
            .map(|s| (s.clone(), one.clone())),
    )
}

/// a∪b = (−1)^{kq} π₁*a ⌣ π₂*b, where π₁ : X_{p+q} → X_p composes the top
/// face maps, π₂ : X_{p+q} → X_q composes d₀, and ⌣ is the front-face/
/// back-face Alexander–Whitney product on simplices.
pub fn cup(a: &Cochain, b: &Cochain) -> Result<Cochain> {
    if !same_space(&a.space, &b.space) {
        return Err(Error::validation("cup factors live on different spaces"));
    }
    if a.ring != b.ring {
        return Err(Error::validation("cup factors have different rings"));
    }
    let ring = a.ring;
    if ring == Ring::QModZ {
        return Err(Error::math(
            "cup product needs ring multiplication; Q/Z has none",
        ));
    }
    let (k, p) = (a.k, a.p);
    let (l, q) = (b.k, b.p);
    let space = a.space.clone();
    if p + q > space.truncation() {
        return Err(Error::math(format!(
            "cup lands on level {} beyond truncation {}",
            p + q,
            space.truncation()
        )));
    }
    let mut pi1 = SimplicialMap::identity(space.level(p + q));
    for r in ((p + 1)..=(p + q)).rev() {
        pi1 = pi1.and_then(space.face(r, r))?;
    }
    let mut pi2 = SimplicialMap::identity(space.level(p + q));
    for r in ((q + 1)..=(p + q)).rev() {
        pi2 = pi2.and_then(space.face(r, 0))?;
    }
    let negate = (k * q) % 2 == 1;
    let mut out = Cochain::zero(space.clone(), k + l, p + q, ring);
    for s in space.level(p + q).simplices_of_dim(k + l) {
        let vs = s.vertices();
        let front: Vec<Vertex> = vs[..=k].iter().map(|v| pi1.apply(*v).unwrap()).collect();
        let back: Vec<Vertex> = vs[k..].iter().map(|v| pi2.apply(*v).unwrap()).collect();
        let av = a.eval_tuple(&front);
        if av.is_zero() {
            continue;
        }
        let bv = b.eval_tuple(&back);
        if bv.is_zero() {
            continue;
        }
        let mut prod = ring.mul(&av, &bv)?;
        if negate {
            prod = ring.neg(&prod);
        }
        if !prod.is_zero() {
            out.values.insert(s.clone(), prod);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TotalCochain {
    space: Arc<SemiSimplicialSpace>,
    n: usize,
    ring: Ring,
    /// Nonzero components only, keyed by level p; bidegree (n−p, p).
    parts: BTreeMap<usize, Cochain>,
}

impl TotalCochain {
    pub fn zero(space: Arc<SemiSimplicialSpace>, n: usize, ring: Ring) -> Self {
        TotalCochain {
            space,
            n,
            ring,
            parts: BTreeMap::new(),
        }
    }

    pub fn from_single(c: Cochain) -> Self {
        let mut t = TotalCochain::zero(c.space.clone(), c.degree(), c.ring);
        if !c.is_zero() {
            t.parts.insert(c.p, c);
        }
        t
    }

    pub fn with_part(mut self, c: Cochain) -> Result<Self> {
        if !same_space(&self.space, &c.space) {
            return Err(Error::validation("component lives on a different space"));
        }
        if c.ring != self.ring {
            return Err(Error::validation("component has a different ring"));
        }
        if c.degree() != self.n {
            return Err(Error::validation(format!(
                "component bidegree ({}, {}) does not sum to degree {}",
                c.k, c.p, self.n
            )));
        }
        match self.parts.remove(&c.p) {
            None => {
                if !c.is_zero() {
                    self.parts.insert(c.p, c);
                }
            }
            Some(existing) => {
                let sum = existing.add(&c);
                if !sum.is_zero() {
                    self.parts.insert(c.p, sum);
                }
            }
        }
        Ok(self)
    }

    pub fn space(&self) -> &Arc<SemiSimplicialSpace> {
        &self.space
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn part(&self, p: usize) -> Option<&Cochain> {
        self.parts.get(&p)
    }

    pub fn parts(&self) -> impl Iterator<Item = (usize, &Cochain)> {
        self.parts.iter().map(|(p, c)| (*p, c))
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn add(&self, other: &TotalCochain) -> TotalCochain {
        assert!(same_space(&self.space, &other.space));
        assert_eq!((self.n, self.ring), (other.n, other.ring));
        let mut out = self.clone();
        for c in other.parts.values() {
            out = out.with_part(c.clone()).unwrap();
        }
        out
    }

    pub fn neg(&self) -> TotalCochain {
        let mut out = TotalCochain::zero(self.space.clone(), self.n, self.ring);
        for c in self.parts.values() {
            out.parts.insert(c.p, c.neg());
        }
        out
    }

    pub fn sub(&self, other: &TotalCochain) -> TotalCochain {
        self.add(&other.neg())
    }

    pub fn scale_by_int(&self, c: &BigInt) -> TotalCochain {
        let mut out = TotalCochain::zero(self.space.clone(), self.n, self.ring);
        for part in self.parts.values() {
            let scaled = part.scale_by_int(c);
            if !scaled.is_zero() {
                out.parts.insert(scaled.p, scaled);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Result<TotalCochain> {
        let mut out = TotalCochain::zero(self.space.clone(), self.n, self.ring);
        for part in self.parts.values() {
            let scaled = part.scale(c)?;
            if !scaled.is_zero() {
                out.parts.insert(scaled.p, scaled);
            }
        }
        Ok(out)
    }

    pub fn cast(&self, ring: Ring) -> Result<TotalCochain> {
        let mut out = TotalCochain::zero(self.space.clone(), self.n, ring);
        for part in self.parts.values() {
            out = out.with_part(part.cast(ring)?)?;
        }
        Ok(out)
    }

    /// δc: componentwise (−1)^p d plus ∂ from one level down. A nonzero
    /// component at the truncation level cannot push its ∂ anywhere and is
    /// rejected.
    pub fn delta(&self) -> Result<TotalCochain> {
        let top = self.space.truncation();
        let mut out = TotalCochain::zero(self.space.clone(), self.n + 1, self.ring);
        for (p, c) in &self.parts {
            let dc = c.d();
            if !dc.is_zero() {
                out = out.with_part(if p % 2 == 0 { dc } else { dc.neg() })?;
            }
            if *p == top {
                return Err(Error::math(format!(
                    "δ overflows the truncation: nonzero component at top level {top}"
                )));
            }
            let pc = c.partial()?;
            if !pc.is_zero() {
                out = out.with_part(pc)?;
            }
        }
        Ok(out)
    }

    /// Pullback along a tower morphism; `self` must live on `f.target()`.
    pub fn pullback(&self, f: &SpaceMap) -> Result<TotalCochain> {
        if !same_space(&self.space, f.target()) {
            return Err(Error::validation(
                "cochain does not live on the morphism's target",
            ));
        }
        let mut out = TotalCochain::zero(f.source().clone(), self.n, self.ring);
        for (p, c) in &self.parts {
            if *p > f.source().truncation() {
                return Err(Error::math(format!(
                    "component at level {p} has no preimage level in the source tower"
                )));
            }
            out = out.with_part(c.pullback_along(f.level_map(*p), f.source(), *p)?)?;
        }
        Ok(out)
    }
}

/// Basis of total degree n: all (level p, k-simplex) pairs with k + p = n,
/// ordered lexicographically by (p, simplex).
pub fn total_basis(space: &SemiSimplicialSpace, n: usize) -> Vec<(usize, Simplex)> {
    let mut basis = Vec::new();
    for p in 0..=n.min(space.truncation()) {
        let k = n - p;
        for s in space.level(p).simplices_of_dim(k) {
            basis.push((p, s.clone()));
        }
    }
    basis
}

/// Integer matrices of δ: degree n → n+1 for n = 0…n_max, in the canonical
/// basis. The entries are ±1 sums valid over every coefficient ring.
pub fn assemble_matrices(
    space: &Arc<SemiSimplicialSpace>,
    n_max: usize,
) -> Result<Vec<IntMatrix>> {
    if n_max + 1 > space.truncation() {
        return Err(Error::math(format!(
            "matrices up to degree {n_max} need truncation ≥ {}, have {}",
            n_max + 1,
            space.truncation()
        )));
    }
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let source = total_basis(space, n);
        let target = total_basis(space, n + 1);
        let target_index: BTreeMap<(usize, &Simplex), usize> = target
            .iter()
            .enumerate()
            .map(|(i, (p, s))| ((*p, s), i))
            .collect();
        let mut m = IntMatrix::zeros(target.len(), source.len());
        for (j, (p, s)) in source.iter().enumerate() {
            let e = Cochain::from_values(
                space.clone(),
                n - p,
                *p,
                Ring::Int,
                [(s.clone(), BigRational::from_integer(BigInt::from(1)))],
            )?;
            let image = TotalCochain::from_single(e).delta()?;
            for (q, c) in image.parts() {
                for (t, v) in c.support() {
                    let i = target_index[&(q, t)];
                    m.set(i, j, v.to_integer());
                }
            }
        }
        out.push(m);
    }
    Ok(out)
}
