//! Circle bundles and gerbes as ℚ/ℤ-valued total cocycles.
//!
//! A bundle is a degree-1 cocycle (transition data σ on X₁ plus an
//! optional C¹(X₀) part), a gerbe a degree-2 cocycle. Lifting the values
//! to ℚ gives a pseudo-connection; its total coboundary is integer-valued
//! (that is exactly the cocycle condition mod 1) and is the
//! pseudo-curvature. The class of that integral cocycle — Chern in degree
//! 2, Dixmier–Douady in degree 3 — does not depend on the lift, since two
//! lifts differ by an integral cochain.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::Zero;

use crate::cochain::TotalCochain;
use crate::cohomology::{cohomology, CohomologyClass, CohomologyGroup};
use crate::ring::Ring;
use crate::snf::LinearSystem;
use crate::space::SpaceMap;
use crate::{Error, Result};

fn cocycle_violations(c: &TotalCochain, degree: usize, what: &str) -> Vec<String> {
    let mut out = Vec::new();
    if c.ring() != Ring::QModZ {
        out.push(format!("{what} values must lie in Q/Z, found {}", c.ring()));
    }
    if c.degree() != degree {
        out.push(format!(
            "{what} must have total degree {degree}, found {}",
            c.degree()
        ));
    }
    if !out.is_empty() {
        return out;
    }
    if c.space().truncation() < degree + 1 {
        out.push(format!(
            "truncation {} cannot express the degree-{degree} cocycle condition",
            c.space().truncation()
        ));
        return out;
    }
    match c.delta() {
        Ok(d) => {
            for (p, part) in d.parts() {
                out.push(format!(
                    "coboundary has a nonzero component of bidegree ({}, {p})",
                    part.k()
                ));
            }
        }
        Err(e) => out.push(e.to_string()),
    }
    out
}

/// Empty report means the cochain is a valid bundle cocycle.
pub fn validate_bundle(c: &TotalCochain) -> Vec<String> {
    cocycle_violations(c, 1, "a bundle cocycle")
}

pub fn validate_gerbe(c: &TotalCochain) -> Vec<String> {
    cocycle_violations(c, 2, "a gerbe cocycle")
}

#[derive(Debug, Clone, PartialEq)]
pub struct BundleCocycle {
    cocycle: TotalCochain,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GerbeCocycle {
    cocycle: TotalCochain,
}

macro_rules! cocycle_wrapper {
    ($ty:ident, $validate:ident) => {
        impl $ty {
            pub fn new(cocycle: TotalCochain) -> Result<Self> {
                let violations = $validate(&cocycle);
                if violations.is_empty() {
                    Ok($ty { cocycle })
                } else {
                    Err(Error::validation(violations.join("; ")))
                }
            }

            pub fn cocycle(&self) -> &TotalCochain {
                &self.cocycle
            }

            /// Tensor product: addition of the underlying cocycles.
            pub fn tensor(&self, other: &$ty) -> Result<$ty> {
                if self.cocycle.space() != other.cocycle.space() {
                    return Err(Error::validation(
                        "tensor factors live on different spaces",
                    ));
                }
                Ok($ty {
                    cocycle: self.cocycle.add(&other.cocycle),
                })
            }

            pub fn inverse(&self) -> $ty {
                $ty {
                    cocycle: self.cocycle.neg(),
                }
            }

            pub fn pullback(&self, f: &SpaceMap) -> Result<$ty> {
                $ty::new(self.cocycle.pullback(f)?)
            }

            pub fn is_flat(&self) -> Result<Option<PseudoConnection>> {
                is_flat(&self.cocycle)
            }

            pub fn holonomy(&self) -> Result<CohomologyClass> {
                holonomy(&self.cocycle)
            }
        }
    };
}

cocycle_wrapper!(BundleCocycle, validate_bundle);
cocycle_wrapper!(GerbeCocycle, validate_gerbe);

/// A rational lift of a bundle or gerbe cocycle.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoConnection {
    lift: TotalCochain,
}

impl PseudoConnection {
    /// The representative lift with all values in [0, 1).
    pub fn canonical(c: &TotalCochain) -> Result<Self> {
        if c.ring() != Ring::QModZ {
            return Err(Error::validation("only Q/Z cocycles have lifts"));
        }
        Ok(PseudoConnection {
            lift: c.cast(Ring::Rat)?,
        })
    }

    /// Any rational cochain reducing to `of` mod 1.
    pub fn new(lift: TotalCochain, of: &TotalCochain) -> Result<Self> {
        if lift.ring() != Ring::Rat {
            return Err(Error::validation("a lift must have rational values"));
        }
        if lift.cast(Ring::QModZ)? != *of {
            return Err(Error::validation(
                "lift does not reduce to the given cocycle mod 1",
            ));
        }
        Ok(PseudoConnection { lift })
    }

    pub fn lift(&self) -> &TotalCochain {
        &self.lift
    }

    /// δ(lift), integer-valued exactly when the reduction is a cocycle.
    pub fn curvature(&self) -> Result<PseudoCurvature> {
        let d = self.lift.delta()?;
        let cocycle = d.cast(Ring::Int).map_err(|_| {
            Error::math("lift coboundary is not integer-valued: the reduction is not a cocycle")
        })?;
        Ok(PseudoCurvature { cocycle })
    }
}

/// Integer-valued total cocycle δ(lift), one degree above the bundle or
/// gerbe it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoCurvature {
    pub cocycle: TotalCochain,
}

/// A characteristic class together with the curvature representative that
/// produced it and the group it lives in.
#[derive(Debug)]
pub struct ClassReport {
    pub group: CohomologyGroup,
    pub class: CohomologyClass,
    pub curvature: PseudoCurvature,
}

fn class_via(c: &TotalCochain, conn: &PseudoConnection) -> Result<ClassReport> {
    let curvature = conn.curvature()?;
    let group = cohomology(c.space(), Ring::Int, c.degree() + 1)?;
    let class = group.class_coordinates(&curvature.cocycle)?;
    Ok(ClassReport {
        group,
        class,
        curvature,
    })
}

/// Chern class of a bundle: the integral class of δ(lift) in H².
pub fn chern_class(b: &BundleCocycle) -> Result<ClassReport> {
    class_via(b.cocycle(), &PseudoConnection::canonical(b.cocycle())?)
}

/// Same class computed through a caller-chosen connection.
pub fn chern_class_with(b: &BundleCocycle, conn: &PseudoConnection) -> Result<ClassReport> {
    check_lifts(conn, b.cocycle())?;
    class_via(b.cocycle(), conn)
}

/// Dixmier–Douady class of a gerbe: the integral class of δ(lift) in H³.
pub fn dd_class(g: &GerbeCocycle) -> Result<ClassReport> {
    class_via(g.cocycle(), &PseudoConnection::canonical(g.cocycle())?)
}

pub fn dd_class_with(g: &GerbeCocycle, conn: &PseudoConnection) -> Result<ClassReport> {
    check_lifts(conn, g.cocycle())?;
    class_via(g.cocycle(), conn)
}

fn check_lifts(conn: &PseudoConnection, of: &TotalCochain) -> Result<()> {
    if conn.lift.cast(Ring::QModZ)? != *of {
        return Err(Error::validation("connection does not lift this cocycle"));
    }
    Ok(())
}

/// A ℚ/ℤ cocycle is flat when some rational lift is a δ-cocycle on the
/// nose. Lifts differ from the canonical one by integer cochains, so this
/// is the integral solvability of δu = −δ(canonical lift).
pub fn is_flat(c: &TotalCochain) -> Result<Option<PseudoConnection>> {
    let conn = PseudoConnection::canonical(c)?;
    let curv = conn.curvature()?.cocycle;
    let n = c.degree();
    let matrices = crate::cochain::assemble_matrices(c.space(), n)?;
    let hi = crate::cochain::total_basis(c.space(), n + 1);
    let target = crate::cohomology::cochain_vector_int(&curv, &hi);
    let neg: Vec<BigInt> = target.iter().map(|x| -x).collect();
    match LinearSystem::new(&matrices[n]).solve_int(&neg) {
        None => Ok(None),
        Some(u) => {
            let lo = crate::cochain::total_basis(c.space(), n);
            let u = crate::cohomology::cochain_from_int(c.space(), n, Ring::Rat, &lo, &u)?;
            let lift = conn.lift.add(&u);
            debug_assert!(lift.delta().map(|d| d.is_zero()).unwrap_or(false));
            Ok(Some(PseudoConnection { lift }))
        }
    }
}

/// Holonomy of a flat cocycle: its ℚ/ℤ class, reported in the structural
/// shape of Hⁿ(ℚ/ℤ) — torsion coordinates (all zero for flat input, since
/// the Bockstein vanishes) followed by the divisible coordinates, which
/// are the rational coordinates of any flat lift taken mod 1.
pub fn holonomy(c: &TotalCochain) -> Result<CohomologyClass> {
    let flat = is_flat(c)?
        .ok_or_else(|| Error::math("holonomy requested for a non-flat cocycle"))?;
    let n = c.degree();
    let shape = cohomology(c.space(), Ring::QModZ, n)?;
    let rat = cohomology(c.space(), Ring::Rat, n)?;
    let coords = rat.class_coordinates(flat.lift())?;
    let free: Vec<BigRational> = coords.free.iter().map(|x| x - x.floor()).collect();
    Ok(CohomologyClass {
        degree: n,
        ring: Ring::QModZ,
        torsion: vec![BigInt::zero(); shape.torsion.len()],
        free,
    })
}
