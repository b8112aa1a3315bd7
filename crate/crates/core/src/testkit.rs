//! Shared fixtures for unit tests: small corpus spaces and seeded random
//! cochain generators.

use std::sync::Arc;

use num::bigint::BigInt;
use num::rational::BigRational;
use rand::Rng;

use crate::cochain::{Cochain, TotalCochain};
use crate::complex::{Simplex, SimplicialComplex, Vertex};
use crate::groupoid::FiniteGroupoid;
use crate::ring::Ring;
use crate::space::{
    cech_space, manifold_space, nerve, transformation_space, CechSpace, CoveredComplex,
    GroupAction, NerveSpace, SemiSimplicialSpace,
};

pub fn sx(vs: &[Vertex]) -> Simplex {
    Simplex::new(vs.to_vec()).unwrap()
}

/// 3-vertex circle on vertices 1, 2, 3.
pub fn circle() -> SimplicialComplex {
    SimplicialComplex::from_simplices([sx(&[1, 2]), sx(&[2, 3]), sx(&[1, 3])])
}

/// Boundary of the tetrahedron: a 2-sphere.
pub fn sphere2() -> SimplicialComplex {
    SimplicialComplex::from_simplices([
        sx(&[0, 1, 2]),
        sx(&[0, 1, 3]),
        sx(&[0, 2, 3]),
        sx(&[1, 2, 3]),
    ])
}

/// Interval: 0—1—2.
pub fn interval() -> SimplicialComplex {
    SimplicialComplex::from_simplices([sx(&[0, 1]), sx(&[1, 2])])
}

pub fn point_space(truncation: usize) -> SemiSimplicialSpace {
    manifold_space(&SimplicialComplex::discrete(1), truncation).unwrap()
}

/// Three-arc cover of the circle.
pub fn circle_cover() -> CoveredComplex {
    let c = circle();
    let u1 = SimplicialComplex::from_simplices([sx(&[1, 2])]);
    let u2 = SimplicialComplex::from_simplices([sx(&[2, 3])]);
    let u3 = SimplicialComplex::from_simplices([sx(&[1, 3])]);
    CoveredComplex::new(
        c,
        vec!["U1".into(), "U2".into(), "U3".into()],
        vec![u1, u2, u3],
    )
    .unwrap()
}

pub fn circle_cech(truncation: usize) -> CechSpace {
    cech_space(&circle_cover(), truncation).unwrap()
}

/// Facet cover of the sphere: four triangles, pairwise overlapping in
/// single edges — a good cover.
pub fn sphere_cover() -> CoveredComplex {
    let total = sphere2();
    let sets: Vec<SimplicialComplex> = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]
        .iter()
        .map(|f| SimplicialComplex::from_simplices([sx(f)]))
        .collect();
    let names = (0..4).map(|i| format!("F{i}")).collect();
    CoveredComplex::new(total, names, sets).unwrap()
}

pub fn bz_n(n: usize, truncation: usize) -> NerveSpace {
    nerve(&FiniteGroupoid::cyclic_group(n), truncation).unwrap()
}

/// Nerve of (ℤ/2)² over a point.
pub fn bklein(truncation: usize) -> NerveSpace {
    let z2 = FiniteGroupoid::cyclic_group(2);
    let v = FiniteGroupoid::product_group(&z2, &z2).unwrap();
    nerve(&v, truncation).unwrap()
}

/// Transformation space of the free ℤ/2 swap on two points.
pub fn swap_space(truncation: usize) -> crate::space::TransformationSpace {
    let g = FiniteGroupoid::cyclic_group(2);
    let k = SimplicialComplex::discrete(2);
    let id = crate::complex::SimplicialMap::identity(&k);
    let swap = crate::complex::SimplicialMap::new([(0, 1), (1, 0)].into());
    let action = GroupAction::new(g, k, vec![id, swap]).unwrap();
    transformation_space(&action, truncation).unwrap()
}

/// Transition bundle σ(k) = k/n on the nerve of ℤ/n.
pub fn bz_bundle(n: usize, truncation: usize) -> (NerveSpace, TotalCochain) {
    let nv = bz_n(n, truncation);
    let values = (0..n).map(|k| {
        let v = nv.vertex(1, &[k]).unwrap();
        (sx(&[v]), BigRational::new(BigInt::from(k), BigInt::from(n)))
    });
    let sigma =
        Cochain::from_values(nv.space.clone(), 0, 1, Ring::QModZ, values).unwrap();
    let t = TotalCochain::from_single(sigma);
    (nv, t)
}

/// Gerbe on Bℤ/2 with the single value c(1,1) = 1/2.
pub fn half_gerbe(truncation: usize) -> (NerveSpace, TotalCochain) {
    let nv = bz_n(2, truncation);
    let v = nv.vertex(2, &[1, 1]).unwrap();
    let c = Cochain::from_values(
        nv.space.clone(),
        0,
        2,
        Ring::QModZ,
        [(sx(&[v]), BigRational::new(BigInt::from(1), BigInt::from(2)))],
    )
    .unwrap();
    (nv, TotalCochain::from_single(c))
}

/// Gerbe on B(ℤ/2)² with c((a,b),(a′,b′)) = a′b/2. Arrow (a,b) of the
/// product group has index 2a + b.
pub fn heisenberg_gerbe(truncation: usize) -> (NerveSpace, TotalCochain) {
    let nv = bklein(truncation);
    let mut values = Vec::new();
    for (a, b, a2, b2) in
        itertools::iproduct!(0usize..2, 0usize..2, 0usize..2, 0usize..2)
    {
        if a2 * b == 1 {
            let v = nv.vertex(2, &[2 * a + b, 2 * a2 + b2]).unwrap();
            values.push((
                sx(&[v]),
                BigRational::new(BigInt::from(1), BigInt::from(2)),
            ));
        }
    }
    let c = Cochain::from_values(nv.space.clone(), 0, 2, Ring::QModZ, values).unwrap();
    (nv, TotalCochain::from_single(c))
}

pub fn random_value(ring: Ring, rng: &mut impl Rng) -> BigRational {
    match ring {
        Ring::Int => BigRational::from_integer(BigInt::from(rng.gen_range(-3i64..=3))),
        Ring::Rat => BigRational::new(
            BigInt::from(rng.gen_range(-4i64..=4)),
            BigInt::from(rng.gen_range(1i64..=3)),
        ),
        Ring::ModN(n) => BigRational::from_integer(BigInt::from(rng.gen_range(0..n as i64))),
        Ring::QModZ => {
            let den = rng.gen_range(1i64..=4);
            BigRational::new(BigInt::from(rng.gen_range(0..den)), BigInt::from(den))
        }
    }
}

pub fn random_cochain(
    space: &Arc<SemiSimplicialSpace>,
    k: usize,
    p: usize,
    ring: Ring,
    rng: &mut impl Rng,
) -> Cochain {
    let mut pairs = Vec::new();
    for s in space.level(p).simplices_of_dim(k) {
        if rng.gen_bool(0.6) {
            pairs.push((s.clone(), random_value(ring, rng)));
        }
    }
    Cochain::from_values(space.clone(), k, p, ring, pairs).unwrap()
}

pub fn random_total(
    space: &Arc<SemiSimplicialSpace>,
    n: usize,
    ring: Ring,
    rng: &mut impl Rng,
) -> TotalCochain {
    let mut t = TotalCochain::zero(space.clone(), n, ring);
    let top = n.min(space.truncation());
    for p in 0..=top {
        let c = random_cochain(space, n - p, p, ring, rng);
        t = t.with_part(c).unwrap();
    }
    t
}
