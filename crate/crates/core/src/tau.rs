//! The comparison sequence between a tower's circle cohomology and the
//! cohomology of its base level, with S¹ truncated to (1/n)ℤ/ℤ so that
//! every group is finite:
//!
//!   H¹(X_•) →τ₁ H¹(X₀) →τ₂ E →τ₃ H²(X_•) →τ₄ H²(X₀)
//!
//! E is the group of extension data: pairs (c, β) with c ∈ C⁰(X₂),
//! β ∈ C¹(X₁) satisfying the degree-2 cocycle condition with the C²(X₀)
//! slot removed (dβ = 0, dc + ∂β = 0, ∂c = 0), modulo the gauge
//! (c, β) ↦ (c + ∂σ, β − dσ) for σ ∈ C⁰(X₁). τ₁ and τ₄ restrict to the
//! base level, τ₂ sends a line cocycle L to (0, ∂L), τ₃ completes (c, β)
//! to the total cocycle (c, β, 0). The report checks image = kernel at
//! the three interior nodes by enumerating every element.
//!
//! Everything is computed with values scaled by n, i.e. as plain ℤ/n
//! linear algebra.

use std::collections::BTreeSet;
use std::sync::Arc;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, ToPrimitive, Zero};

use crate::cochain::{assemble_matrices, total_basis, Cochain};
use crate::complex::Simplex;
use crate::matrix::IntMatrix;
use crate::ring::Ring;
use crate::snf::{kernel_basis, reduce, LinearSystem};
use crate::space::SemiSimplicialSpace;
use crate::{Error, Result};

const ENUMERATION_CAP: u64 = 200_000;

/// Finite abelian group ℤ/n-span of a constraint kernel modulo relation
/// columns, with canonical coordinates and full enumeration.
struct ModGroup {
    lattice_mat: IntMatrix,
    lattice: LinearSystem,
    u_w: IntMatrix,
    orders: Vec<(usize, BigInt)>,
    gens: Vec<Vec<BigInt>>,
}

impl ModGroup {
    fn new(constraints: &IntMatrix, mut relations: Vec<Vec<BigInt>>, n: &BigInt) -> Result<Self> {
        let vars = constraints.cols;
        let mut scaled = IntMatrix::zeros(constraints.rows, constraints.rows);
        for i in 0..constraints.rows {
            scaled.set(i, i, n.clone());
        }
        let augmented = constraints.hstack(&scaled);
        let lifted: Vec<Vec<BigInt>> = kernel_basis(&augmented)
            .into_iter()
            .map(|col| col[..vars].to_vec())
            .collect();
        let lattice_mat = IntMatrix::from_cols(&lifted, vars);
        let lattice = LinearSystem::new(&lattice_mat);

        for i in 0..vars {
            let mut e = vec![BigInt::zero(); vars];
            e[i] = n.clone();
            relations.push(e);
        }
        let coords: Vec<Vec<BigInt>> = relations
            .iter()
            .map(|r| {
                lattice
                    .solve_int(r)
                    .expect("relations lie in the mod-n cocycle lattice")
            })
            .collect();
        let s = lattice_mat.cols;
        let w = IntMatrix::from_cols(&coords, s);
        let parts = reduce(&w, true, true, false, false);
        let rank = parts.rank();
        assert_eq!(rank, s, "n-fold relations leave no free part");
        let diag = parts.diagonal();
        let u_w_inv = parts.u_inv.unwrap();

        let orders: Vec<(usize, BigInt)> = (0..rank)
            .filter(|&i| !diag[i].is_one())
            .map(|i| (i, diag[i].clone()))
            .collect();
        let gens = orders
            .iter()
            .map(|(i, _)| lattice_mat.mul_vec(&u_w_inv.col(*i)))
            .collect();
        let g = ModGroup {
            lattice_mat,
            lattice,
            u_w: parts.u.unwrap(),
            orders,
            gens,
        };
        if g.size() > ENUMERATION_CAP {
            return Err(Error::validation(format!(
                "group of order {} is too large to enumerate",
                g.size()
            )));
        }
        Ok(g)
    }

    fn size(&self) -> u64 {
        self.orders
            .iter()
            .map(|(_, d)| d.to_u64().unwrap_or(u64::MAX))
            .product()
    }

    /// Canonical coordinates of a vector that satisfies the constraints
    /// mod n.
    fn coords(&self, v: &[BigInt]) -> Vec<BigInt> {
        let w = self
            .lattice
            .solve_int(v)
            .expect("vector satisfies the constraints mod n");
        let t = self.u_w.mul_vec(&w);
        self.orders
            .iter()
            .map(|(i, d)| t[*i].mod_floor(d))
            .collect()
    }

    /// One representative vector per element, keyed by its coordinates.
    fn elements(&self) -> Vec<(Vec<BigInt>, Vec<BigInt>)> {
        let vars = self.lattice_mat.rows;
        let mut out = Vec::new();
        let mut tuple: Vec<BigInt> = vec![BigInt::zero(); self.orders.len()];
        loop {
            let mut vector = vec![BigInt::zero(); vars];
            for (a, g) in tuple.iter().zip(&self.gens) {
                for (x, y) in vector.iter_mut().zip(g) {
                    *x += a * y;
                }
            }
            out.push((tuple.clone(), vector));
            let mut digit = 0;
            loop {
                if digit == tuple.len() {
                    return out;
                }
                tuple[digit] += 1;
                if tuple[digit] < self.orders[digit].1 {
                    break;
                }
                tuple[digit] = BigInt::zero();
                digit += 1;
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Op {
    D,
    Partial,
}

/// Matrix of d or ∂ out of the (k, p) cochains, columns indexed by the
/// canonical simplex order.
fn operator(space: &Arc<SemiSimplicialSpace>, k: usize, p: usize, op: Op) -> Result<IntMatrix> {
    let src: Vec<Simplex> = space.level(p).simplices_of_dim(k).cloned().collect();
    let (rk, rp) = match op {
        Op::D => (k + 1, p),
        Op::Partial => (k, p + 1),
    };
    let dst: Vec<Simplex> = space.level(rp).simplices_of_dim(rk).cloned().collect();
    let mut m = IntMatrix::zeros(dst.len(), src.len());
    for (j, s) in src.iter().enumerate() {
        let e = Cochain::from_values(
            space.clone(),
            k,
            p,
            Ring::Int,
            [(s.clone(), BigRational::one())],
        )?;
        let image = match op {
            Op::D => e.d(),
            Op::Partial => e.partial()?,
        };
        for (i, t) in dst.iter().enumerate() {
            let v = image.value(t);
            if !v.is_zero() {
                m.set(i, j, v.to_integer());
            }
        }
    }
    Ok(m)
}

fn place(dst: &mut IntMatrix, block: &IntMatrix, r0: usize, c0: usize) {
    for i in 0..block.rows {
        for j in 0..block.cols {
            let v = block.get(i, j).clone();
            if !v.is_zero() {
                dst.set(r0 + i, c0 + j, v);
            }
        }
    }
}

fn columns(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.cols).map(|j| m.col(j)).collect()
}

/// Per-node exactness report for the five-term comparison sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauReport {
    pub modulus: u32,
    /// Orders of H¹(X_•), H¹(X₀), E, H²(X_•), H²(X₀).
    pub sizes: [u64; 5],
    /// Image = kernel at H¹(X₀), at E, at H²(X_•).
    pub exact_at: [bool; 3],
}

impl TauReport {
    pub fn exact(&self) -> bool {
        self.exact_at.iter().all(|b| *b)
    }
}

fn image_equals_kernel(
    src: &ModGroup,
    f: &IntMatrix,
    mid: &ModGroup,
    g: &IntMatrix,
    dst: &ModGroup,
) -> bool {
    let image: BTreeSet<Vec<BigInt>> = src
        .elements()
        .into_iter()
        .map(|(_, v)| mid.coords(&f.mul_vec(&v)))
        .collect();
    let kernel: BTreeSet<Vec<BigInt>> = mid
        .elements()
        .into_iter()
        .filter(|(_, v)| dst.coords(&g.mul_vec(v)).iter().all(Zero::is_zero))
        .map(|(t, _)| t)
        .collect();
    image == kernel
}

pub fn tau_maps(space: &Arc<SemiSimplicialSpace>, n: u32) -> Result<TauReport> {
    if n < 2 {
        return Err(Error::validation("coefficient modulus must be at least 2"));
    }
    if space.truncation() < 3 {
        return Err(Error::validation(
            "truncation must be at least 3 for the comparison sequence",
        ));
    }
    let m = BigInt::from(n);
    let ms = assemble_matrices(space, 2)?;

    let d0 = operator(space, 0, 0, Op::D)?;
    let d1 = operator(space, 1, 0, Op::D)?;
    let d2 = operator(space, 2, 0, Op::D)?;

    let h1_total = ModGroup::new(&ms[1], columns(&ms[0]), &m)?;
    let h1_base = ModGroup::new(&d1, columns(&d0), &m)?;
    let h2_total = ModGroup::new(&ms[2], columns(&ms[1]), &m)?;
    let h2_base = ModGroup::new(&d2, columns(&d1), &m)?;

    // The extension group E: variables [c ∈ C⁰(X₂) | β ∈ C¹(X₁)].
    let v2 = space.level(2).count_of_dim(0);
    let e1 = space.level(1).count_of_dim(1);
    let d_beta = operator(space, 1, 1, Op::D)?;
    let d_c = operator(space, 0, 2, Op::D)?;
    let partial_beta = operator(space, 1, 1, Op::Partial)?;
    let partial_c = operator(space, 0, 2, Op::Partial)?;
    let (r1, r2, r3) = (d_beta.rows, d_c.rows, partial_c.rows);
    let mut constraints = IntMatrix::zeros(r1 + r2 + r3, v2 + e1);
    place(&mut constraints, &d_beta, 0, v2);
    place(&mut constraints, &d_c, r1, 0);
    place(&mut constraints, &partial_beta, r1, v2);
    place(&mut constraints, &partial_c, r1 + r2, 0);

    let partial_sigma = operator(space, 0, 1, Op::Partial)?;
    let d_sigma = operator(space, 0, 1, Op::D)?;
    let gauge: Vec<Vec<BigInt>> = (0..space.level(1).count_of_dim(0))
        .map(|j| {
            let mut col: Vec<BigInt> = partial_sigma.col(j);
            col.extend(d_sigma.col(j).into_iter().map(|x| -x));
            col
        })
        .collect();
    let middle = ModGroup::new(&constraints, gauge, &m)?;

    // Map matrices between the variable spaces.
    let c1_total = total_basis(space, 1).len();
    let c2_total = total_basis(space, 2).len();
    let (c1_base, c2_base) = (d1.cols, d2.cols);

    let mut t1 = IntMatrix::zeros(c1_base, c1_total);
    for i in 0..c1_base {
        t1.set(i, i, BigInt::one());
    }
    let mut t2 = IntMatrix::zeros(v2 + e1, c1_base);
    place(&mut t2, &operator(space, 1, 0, Op::Partial)?, v2, 0);
    let mut t3 = IntMatrix::zeros(c2_total, v2 + e1);
    for i in 0..v2 {
        t3.set(c2_base + e1 + i, i, BigInt::one());
    }
    for j in 0..e1 {
        t3.set(c2_base + j, v2 + j, BigInt::one());
    }
    let mut t4 = IntMatrix::zeros(c2_base, c2_total);
    for i in 0..c2_base {
        t4.set(i, i, BigInt::one());
    }

    let exact_at = [
        image_equals_kernel(&h1_total, &t1, &h1_base, &t2, &middle),
        image_equals_kernel(&h1_base, &t2, &middle, &t3, &h2_total),
        image_equals_kernel(&middle, &t3, &h2_total, &t4, &h2_base),
    ];
    Ok(TauReport {
        modulus: n,
        sizes: [
            h1_total.size(),
            h1_base.size(),
            middle.size(),
            h2_total.size(),
            h2_base.size(),
        ],
        exact_at,
    })
}
