//! Cohomology of the total complex, computed exactly.
//!
//! Over ℤ the group H^n = ker δ_n / im δ_{n−1} is presented by two Smith
//! reductions: one to get a saturated basis K of the cocycle lattice, one
//! on the matrix W of coboundary coordinates relative to K. The diagonal
//! of W lists the invariant factors, the columns of U_W⁻¹ (pushed through
//! K) are the generators, and U_W turns any cocycle into coordinates.
//!
//! ℤ/n works the same way after enlarging both the cocycle lattice (mod-n
//! kernels via [δ | n·I]) and the relations (by n·ℤ on every basis
//! element). ℚ keeps only the free part of the ℤ answer. ℚ/ℤ is not
//! finitely generated, so it is reported structurally through the
//! coefficient sequence ℤ → ℚ → ℚ/ℤ: one divisible summand per free ℤ
//! generator in degree n plus one finite summand per torsion invariant of
//! H^{n+1}(ℤ), each with an explicit representative cocycle.

use std::sync::Arc;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Zero};

use crate::cochain::{assemble_matrices, same_space, total_basis, Cochain, TotalCochain};
use crate::complex::Simplex;
use crate::matrix::IntMatrix;
use crate::ring::Ring;
use crate::snf::{kernel_basis, reduce, solve_mod_n, LinearSystem};
use crate::space::SemiSimplicialSpace;
use crate::{Error, Result};

/// H^n with an explicit generating set: `generators[..torsion.len()]`
/// generate the cyclic summands in the order of `torsion`, the rest are a
/// basis of the free part (for ℚ/ℤ: representatives of the divisible
/// summands).
#[derive(Debug, Clone)]
pub struct CohomologyGroup {
    pub degree: usize,
    pub ring: Ring,
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
    pub generators: Vec<TotalCochain>,
    space: Arc<SemiSimplicialSpace>,
    presenter: Option<Presenter>,
}

/// Coordinates of a cocycle's class against the group's generators:
/// `torsion[i]` is reduced modulo the i-th invariant factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyClass {
    pub degree: usize,
    pub ring: Ring,
    pub torsion: Vec<BigInt>,
    pub free: Vec<BigRational>,
}

impl CohomologyClass {
    pub fn is_zero(&self) -> bool {
        self.torsion.iter().all(|x| x.is_zero()) && self.free.iter().all(|x| x.is_zero())
    }
}

/// The data needed to map cocycles to classes: a basis of the cocycle
/// lattice (as a factored system) and the unimodular change U_W that
/// diagonalizes the coboundary relations.
#[derive(Debug, Clone)]
struct Presenter {
    basis: Vec<(usize, Simplex)>,
    lattice: LinearSystem,
    u_w: IntMatrix,
    torsion_pos: Vec<(usize, BigInt)>,
    free_pos: Vec<usize>,
}

pub(crate) fn cochain_vector_rat(c: &TotalCochain, basis: &[(usize, Simplex)]) -> Vec<BigRational> {
    basis
        .iter()
        .map(|(p, s)| c.part(*p).map_or_else(BigRational::zero, |c| c.value(s)))
        .collect()
}

pub(crate) fn cochain_vector_int(c: &TotalCochain, basis: &[(usize, Simplex)]) -> Vec<BigInt> {
    cochain_vector_rat(c, basis)
        .iter()
        .map(|x| x.to_integer())
        .collect()
}

pub(crate) fn cochain_from_rat(
    space: &Arc<SemiSimplicialSpace>,
    n: usize,
    ring: Ring,
    basis: &[(usize, Simplex)],
    v: &[BigRational],
) -> Result<TotalCochain> {
    assert_eq!(basis.len(), v.len());
    let mut out = TotalCochain::zero(space.clone(), n, ring);
    let mut at = 0;
    while at < basis.len() {
        let p = basis[at].0;
        let mut pairs = Vec::new();
        while at < basis.len() && basis[at].0 == p {
            if !v[at].is_zero() {
                pairs.push((basis[at].1.clone(), v[at].clone()));
            }
            at += 1;
        }
        out = out.with_part(Cochain::from_values(space.clone(), n - p, p, ring, pairs)?)?;
    }
    Ok(out)
}

pub(crate) fn cochain_from_int(
    space: &Arc<SemiSimplicialSpace>,
    n: usize,
    ring: Ring,
    basis: &[(usize, Simplex)],
    v: &[BigInt],
) -> Result<TotalCochain> {
    let v: Vec<BigRational> = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    cochain_from_rat(space, n, ring, basis, &v)
}

fn common_denominator(v: &[BigRational]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Presentation of ℤ^s modulo the column span of the relation matrix,
/// where s counts the columns of `lattice_mat` (a basis of the cocycle
/// lattice) and every relation column must lie in that lattice.
fn present_quotient(
    space: &Arc<SemiSimplicialSpace>,
    n: usize,
    ring: Ring,
    basis: Vec<(usize, Simplex)>,
    lattice_mat: &IntMatrix,
    relations: &[Vec<BigInt>],
) -> Result<CohomologyGroup> {
    let s = lattice_mat.cols;
    let lattice = LinearSystem::new(lattice_mat);
    let coords: Vec<Vec<BigInt>> = relations
        .iter()
        .map(|r| {
            lattice
                .solve_int(r)
                .expect("relations lie in the cocycle lattice")
        })
        .collect();
    let w = IntMatrix::from_cols(&coords, s);
    let parts = reduce(&w, true, true, false, false);
    let rank = parts.rank();
    let diag = parts.diagonal();
    let u_w = parts.u.unwrap();
    let u_w_inv = parts.u_inv.unwrap();

    let torsion_pos: Vec<(usize, BigInt)> = (0..rank)
        .filter(|&i| !diag[i].is_one())
        .map(|i| (i, diag[i].clone()))
        .collect();
    let free_pos: Vec<usize> = (rank..s).collect();

    let mut generators = Vec::new();
    for (j, _) in &torsion_pos {
        let vec = lattice_mat.mul_vec(&u_w_inv.col(*j));
        generators.push(cochain_from_int(space, n, ring, &basis, &vec)?);
    }
    for j in &free_pos {
        let vec = lattice_mat.mul_vec(&u_w_inv.col(*j));
        generators.push(cochain_from_int(space, n, ring, &basis, &vec)?);
    }

    Ok(CohomologyGroup {
        degree: n,
        ring,
        free_rank: free_pos.len(),
        torsion: torsion_pos.iter().map(|(_, d)| d.clone()).collect(),
        generators,
        space: space.clone(),
        presenter: Some(Presenter {
            basis,
            lattice,
            u_w,
            torsion_pos,
            free_pos,
        }),
    })
}

fn integral_from_matrices(
    space: &Arc<SemiSimplicialSpace>,
    n: usize,
    m_prev: Option<&IntMatrix>,
    m_n: &IntMatrix,
) -> Result<CohomologyGroup> {
    let basis = total_basis(space, n);
    let k = kernel_basis(m_n);
    let k_mat = IntMatrix::from_cols(&k, basis.len());
    let relations: Vec<Vec<BigInt>> = match m_prev {
        None => Vec::new(),
        Some(m) => (0..m.cols).map(|j| m.col(j)).collect(),
    };
    present_quotient(space, n, Ring::Int, basis, &k_mat, &relations)
}

fn modular_from_matrices(
    space: &Arc<SemiSimplicialSpace>,
    n: usize,
    m_prev: Option<&IntMatrix>,
    m_n: &IntMatrix,
    modulus: u32,
) -> Result<CohomologyGroup> {
    let basis = total_basis(space, n);
    let count = basis.len();
    let big_m = BigInt::from(modulus);

    // Mod-m cocycles, as a lattice in ℤ^count: x with δx ≡ 0 comes from a
    // kernel element (x, y) of [δ | m·I]; the projection is injective, so
    // the projected columns are a basis.
    let mut scaled = IntMatrix::zeros(m_n.rows, m_n.rows);
    for i in 0..m_n.rows {
        scaled.set(i, i, big_m.clone());
    }
    let augmented = m_n.hstack(&scaled);
    let lifted: Vec<Vec<BigInt>> = kernel_basis(&augmented)
        .into_iter()
        .map(|col| col[..count].to_vec())
        .collect();
    let l_mat = IntMatrix::from_cols(&lifted, count);

    // Relations: coboundaries plus m·(basis vector) for every slot.
    let mut relations: Vec<Vec<BigInt>> = match m_prev {
        None => Vec::new(),
        Some(m) => (0..m.cols).map(|j| m.col(j)).collect(),
    };
    for i in 0..count {
        let mut e = vec![BigInt::zero(); count];
        e[i] = big_m.clone();
        relations.push(e);
    }

    let group = present_quotient(space, n, Ring::ModN(modulus), basis, &l_mat, &relations)?;
    assert_eq!(group.free_rank, 0, "finite coefficients leave no free part");
    Ok(group)
}

fn check_degree_bound(space: &SemiSimplicialSpace, needed: usize) -> Result<()> {
    if needed > space.truncation() {
        return Err(Error::validation(format!(
            "cohomology at this degree needs truncation ≥ {needed}, space has {}",
            space.truncation()
        )));
    }
    Ok(())
}

fn circle_cohomology(space: &Arc<SemiSimplicialSpace>, n: usize) -> Result<CohomologyGroup> {
    // The structural description needs the integral answer one degree up.
    check_degree_bound(space, n + 2)?;
    let ms = assemble_matrices(space, n + 1)?;
    let at_n = integral_from_matrices(space, n, (n > 0).then(|| &ms[n - 1]), &ms[n])?;
    let above = integral_from_matrices(space, n + 1, Some(&ms[n]), &ms[n + 1])?;

    let basis_n = total_basis(space, n);
    let basis_above = total_basis(space, n + 1);
    let delta_n = LinearSystem::new(&ms[n]);

    let mut generators = Vec::new();
    // A torsion class t of order m upstairs yields the representative w/m,
    // where δw = m·t; its mod-1 reduction is a cocycle of order m here.
    for (j, order) in above.torsion.iter().enumerate() {
        let t = &above.generators[j];
        let rhs = cochain_vector_int(&t.scale_by_int(order), &basis_above);
        let w = delta_n
            .solve_int(&rhs)
            .expect("a torsion class times its order is a coboundary");
        let scaled: Vec<BigRational> = w
            .iter()
            .map(|x| BigRational::new(x.clone(), order.clone()))
            .collect();
        generators.push(cochain_from_rat(space, n, Ring::QModZ, &basis_n, &scaled)?);
    }
    // Each free integral generator spans a divisible summand; 1/2 of it is
    // a sample nonzero element (the summand has no finite generating set).
    for g in &at_n.generators[at_n.torsion.len()..] {
        let half = g
            .cast(Ring::Rat)?
            .scale(&BigRational::new(BigInt::one(), BigInt::from(2)))?;
        generators.push(half.cast(Ring::QModZ)?);
    }

    Ok(CohomologyGroup {
        degree: n,
        ring: Ring::QModZ,
        free_rank: at_n.free_rank,
        torsion: above.torsion.clone(),
        generators,
        space: space.clone(),
        presenter: None,
    })
}

pub fn cohomology(space: &Arc<SemiSimplicialSpace>, ring: Ring, n: usize) -> Result<CohomologyGroup> {
    match ring {
        Ring::QModZ => return circle_cohomology(space, n),
        _ => check_degree_bound(space, n + 1)?,
    }
    let ms = assemble_matrices(space, n)?;
    let m_prev = (n > 0).then(|| &ms[n - 1]);
    match ring {
        Ring::Int => integral_from_matrices(space, n, m_prev, &ms[n]),
        Ring::ModN(m) => modular_from_matrices(space, n, m_prev, &ms[n], m),
        Ring::Rat => {
            let int = integral_from_matrices(space, n, m_prev, &ms[n])?;
            let generators = int.generators[int.torsion.len()..]
                .iter()
                .map(|g| g.cast(Ring::Rat))
                .collect::<Result<Vec<_>>>()?;
            Ok(CohomologyGroup {
                degree: n,
                ring: Ring::Rat,
                free_rank: int.free_rank,
                torsion: Vec::new(),
                generators,
                space: space.clone(),
                presenter: int.presenter,
            })
        }
        Ring::QModZ => unreachable!(),
    }
}

impl CohomologyGroup {
    pub fn space(&self) -> &Arc<SemiSimplicialSpace> {
        &self.space
    }

    /// Coordinates of a cocycle's class against the generators. Supported
    /// over ℤ, ℤ/n and ℚ; ℚ/ℤ groups are structural and answer membership
    /// questions through `is_coboundary` and `bockstein` instead.
    pub fn class_coordinates(&self, c: &TotalCochain) -> Result<CohomologyClass> {
        if !same_space(&self.space, c.space()) {
            return Err(Error::validation("cocycle lives on a different space"));
        }
        if c.ring() != self.ring {
            return Err(Error::validation(format!(
                "cocycle ring {} does not match group ring {}",
                c.ring(),
                self.ring
            )));
        }
        if c.degree() != self.degree {
            return Err(Error::validation(format!(
                "cocycle degree {} does not match group degree {}",
                c.degree(),
                self.degree
            )));
        }
        if !c.delta()?.is_zero() {
            return Err(Error::math("class of a non-cocycle requested"));
        }
        let presenter = self.presenter.as_ref().ok_or_else(|| {
            Error::validation("Q/Z cohomology is structural and has no coordinate map")
        })?;

        let rat = cochain_vector_rat(c, &presenter.basis);
        let denom = common_denominator(&rat);
        let ints: Vec<BigInt> = rat
            .iter()
            .map(|x| (x * BigRational::from_integer(denom.clone())).to_integer())
            .collect();
        let w = presenter
            .lattice
            .solve_int(&ints)
            .ok_or_else(|| Error::math("cocycle does not lie in the computed cocycle lattice"))?;
        let tilde = presenter.u_w.mul_vec(&w);
        let torsion = presenter
            .torsion_pos
            .iter()
            .map(|(j, d)| tilde[*j].mod_floor(d))
            .collect();
        let free = presenter
            .free_pos
            .iter()
            .map(|j| BigRational::new(tilde[*j].clone(), denom.clone()))
            .collect();
        Ok(CohomologyClass {
            degree: self.degree,
            ring: self.ring,
            torsion,
            free,
        })
    }
}

/// Decide whether the cocycle `c` is δ of something, and if so return one
/// primitive (canonical: free parameters zero).
pub fn is_coboundary(c: &TotalCochain) -> Result<Option<TotalCochain>> {
    let space = c.space().clone();
    let n = c.degree();
    let ring = c.ring();
    check_degree_bound(&space, n + 1)?;
    if !c.delta()?.is_zero() {
        return Err(Error::math("is_coboundary needs a cocycle as input"));
    }
    if n == 0 {
        // Nothing maps into degree 0; only the zero cochain qualifies.
        return Ok(c.is_zero().then(|| TotalCochain::zero(space, 0, ring)));
    }
    let ms = assemble_matrices(&space, n - 1)?;
    let m = &ms[n - 1];
    let basis_n = total_basis(&space, n);
    let basis_prev = total_basis(&space, n - 1);
    let answer = match ring {
        Ring::Int => {
            let b = cochain_vector_int(c, &basis_n);
            LinearSystem::new(m).solve_int(&b).map(|y| {
                y.iter()
                    .map(|x| BigRational::from_integer(x.clone()))
                    .collect::<Vec<_>>()
            })
        }
        Ring::Rat => {
            let b = cochain_vector_rat(c, &basis_n);
            LinearSystem::new(m).solve_rat(&b)
        }
        Ring::ModN(modulus) => {
            let b = cochain_vector_int(c, &basis_n);
            solve_mod_n(m, &b, modulus).map(|y| {
                y.iter()
                    .map(|x| BigRational::from_integer(x.clone()))
                    .collect::<Vec<_>>()
            })
        }
        Ring::QModZ => {
            let b = cochain_vector_rat(c, &basis_n);
            LinearSystem::new(m).solve_mod1(&b)
        }
    };
    answer
        .map(|y| cochain_from_rat(&space, n - 1, ring, &basis_prev, &y))
        .transpose()
}

/// Connecting map of ℤ → ℚ → ℚ/ℤ: lift the stored representatives (already
/// in [0,1)) to ℚ and return δ of the lift, an integral cocycle one degree
/// up. Different lifts change the answer by a coboundary only.
pub fn bockstein(c: &TotalCochain) -> Result<TotalCochain> {
    if c.ring() != Ring::QModZ {
        return Err(Error::validation("bockstein expects Q/Z coefficients"));
    }
    check_degree_bound(c.space(), c.degree() + 1)?;
    let lift = c.cast(Ring::Rat)?;
    let boundary = lift.delta()?;
    for (_, part) in boundary.parts() {
        for (_, v) in part.support() {
            if !v.is_integer() {
                return Err(Error::math("bockstein needs a cocycle: δ(lift) is not integral"));
            }
        }
    }
    boundary.cast(Ring::Int)
}

/// Decide whether a rational cocycle class comes from an integral one; on
/// success return the integral representative c − δy.
pub fn is_integral_class(c: &TotalCochain) -> Result<Option<TotalCochain>> {
    if c.ring() != Ring::Rat {
        return Err(Error::validation("is_integral_class expects Q coefficients"));
    }
    let space = c.space().clone();
    let n = c.degree();
    check_degree_bound(&space, n + 1)?;
    if !c.delta()?.is_zero() {
        return Err(Error::math("is_integral_class needs a cocycle as input"));
    }
    let integral = |t: &TotalCochain| {
        t.parts()
            .all(|(_, part)| part.support().all(|(_, v)| v.is_integer()))
    };
    if n == 0 {
        return integral(c).then(|| c.cast(Ring::Int)).transpose();
    }
    let ms = assemble_matrices(&space, n - 1)?;
    let basis_n = total_basis(&space, n);
    let basis_prev = total_basis(&space, n - 1);
    let b = cochain_vector_rat(c, &basis_n);
    let Some(y) = LinearSystem::new(&ms[n - 1]).solve_mod1(&b) else {
        return Ok(None);
    };
    let primitive = cochain_from_rat(&space, n - 1, Ring::Rat, &basis_prev, &y)?;
    let z = c.sub(&primitive.delta()?);
    assert!(integral(&z), "mod-1 solve left a fractional part");
    Ok(Some(z.cast(Ring::Int)?))
}
