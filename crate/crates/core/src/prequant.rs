//! Prequantization: from an integral rational cocycle to circle data
//! whose pseudo-curvature represents it.
//!
//! Constant ℚ/ℤ coefficients can only source rationally trivial integral
//! classes — the Bockstein image is exactly the torsion — so the solve
//! runs in two stages: first strip a rational coboundary to reach an
//! integral representative z₀ (the canonical integralization; for
//! integer-valued input z₀ is the input itself), then solve δY = z₀ over
//! ℚ. The bundle or gerbe is Y mod 1, Y is the connection, z₀ the
//! curvature, and class(output) = [z₀] on the nose. Inputs whose class is
//! not integral, or survives rationally, are rejected with the reason.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::Zero;

use crate::cochain::{assemble_matrices, total_basis, Cochain, TotalCochain};
use crate::cohomology::{cochain_from_rat, cochain_vector_rat, cohomology};
use crate::complex::Simplex;
use crate::gerbe::{BundleCocycle, GerbeCocycle, PseudoConnection, PseudoCurvature};
use crate::matrix::IntMatrix;
use crate::ring::Ring;
use crate::snf::LinearSystem;
use crate::{Error, Result};

/// Everything the solve produces besides the cocycle itself: the exact
/// connection (δ(lift) = curvature, no mod-1 slack), the canonical
/// integral curvature, and the rational gauge with
/// input = curvature + δ(gauge).
#[derive(Debug)]
pub struct Prequantization {
    pub connection: PseudoConnection,
    pub curvature: PseudoCurvature,
    pub gauge: TotalCochain,
    /// Degree-3 solves also report whether the (3, 0)-component of the
    /// curvature is a coboundary within X₀ alone.
    pub base_component_exact: Option<bool>,
}

pub fn prequantize_bundle(input: &TotalCochain) -> Result<(BundleCocycle, Prequantization)> {
    let (cocycle, report) = prequantize(input, 2)?;
    Ok((BundleCocycle::new(cocycle)?, report))
}

pub fn prequantize_gerbe(input: &TotalCochain) -> Result<(GerbeCocycle, Prequantization)> {
    let (cocycle, mut report) = prequantize(input, 3)?;
    let base = match report.curvature.cocycle.part(0) {
        None => true,
        Some(omega) => level0_exact(omega)?,
    };
    report.base_component_exact = Some(base);
    Ok((GerbeCocycle::new(cocycle)?, report))
}

fn prequantize(input: &TotalCochain, degree: usize) -> Result<(TotalCochain, Prequantization)> {
    if input.ring() != Ring::Rat {
        return Err(Error::validation("prequantization input must be rational"));
    }
    if input.degree() != degree {
        return Err(Error::validation(format!(
            "expected a total cocycle of degree {degree}, found degree {}",
            input.degree()
        )));
    }
    if !input.delta()?.is_zero() {
        return Err(Error::math("input is not a cocycle"));
    }
    let space = input.space();
    let n = degree - 1;
    let matrices = assemble_matrices(space, n)?;
    let system = LinearSystem::new(&matrices[n]);
    let hi = total_basis(space, degree);
    let lo = total_basis(space, n);
    let b = cochain_vector_rat(input, &hi);

    let integer_valued = b.iter().all(|x| x.is_integer());
    let (gauge, z0) = if integer_valued {
        (vec![BigRational::zero(); lo.len()], b.clone())
    } else {
        let w = system.solve_mod1(&b).ok_or_else(|| {
            Error::math(
                "the class is not integral: no rational gauge makes the cocycle integer-valued",
            )
        })?;
        let mw = matrices[n].mul_vec_rat(&w);
        let z0: Vec<BigRational> = b.iter().zip(&mw).map(|(x, y)| x - y).collect();
        assert!(z0.iter().all(|x| x.is_integer()));
        (w, z0)
    };

    let lift = system.solve_rat(&z0).ok_or_else(|| {
        let detail = rational_obstruction(space, degree, &hi, &z0);
        Error::math(format!(
            "the class survives rationally{detail}; constant circle coefficients only source rationally trivial curvature",
        ))
    })?;

    let lift = cochain_from_rat(space, n, Ring::Rat, &lo, &lift)?;
    let cocycle = lift.cast(Ring::QModZ)?;
    let curvature = PseudoCurvature {
        cocycle: cochain_from_rat(space, degree, Ring::Int, &hi, &z0)?,
    };
    let connection = PseudoConnection::new(lift, &cocycle)?;
    let gauge = cochain_from_rat(space, n, Ring::Rat, &lo, &gauge)?;
    Ok((
        cocycle,
        Prequantization {
            connection,
            curvature,
            gauge,
            base_component_exact: None,
        },
    ))
}

fn rational_obstruction(
    space: &std::sync::Arc<crate::space::SemiSimplicialSpace>,
    degree: usize,
    basis: &[(usize, Simplex)],
    z0: &[BigRational],
) -> String {
    let class = cochain_from_rat(space, degree, Ring::Rat, basis, z0)
        .ok()
        .and_then(|z| {
            let g = cohomology(space, Ring::Rat, degree).ok()?;
            g.class_coordinates(&z).ok()
        });
    match class {
        Some(c) => {
            let coords: Vec<String> = c.free.iter().map(|x| x.to_string()).collect();
            format!(" (class coordinates [{}])", coords.join(", "))
        }
        None => String::new(),
    }
}

/// Is the (k, 0)-component a simplicial coboundary within level 0?
fn level0_exact(c: &Cochain) -> Result<bool> {
    if c.p() != 0 {
        return Err(Error::validation("component does not live on level 0"));
    }
    let k = c.k();
    if k == 0 {
        return Ok(c.is_zero());
    }
    let level = c.space().level(0);
    let rows: Vec<&Simplex> = level.simplices_of_dim(k).collect();
    let cols: Vec<&Simplex> = level.simplices_of_dim(k - 1).collect();
    let mut m = IntMatrix::zeros(rows.len(), cols.len());
    for (j, t) in cols.iter().enumerate() {
        for (i, s) in rows.iter().enumerate() {
            let mut entry = BigInt::zero();
            for f in 0..=k {
                if &&s.face(f) == t {
                    entry += if f % 2 == 0 { 1 } else { -1 };
                }
            }
            m.set(i, j, entry);
        }
    }
    let b: Vec<BigRational> = rows.iter().map(|s| c.value(s)).collect();
    Ok(LinearSystem::new(&m).solve_rat(&b).is_some())
}
