//! Smith normal form over ℤ and the linear solvers built on it.
//!
//! The reduction tracks the unimodular row/column operations, so a
//! decomposition U·A·V = D comes with U, V and their inverses. Pivoting is
//! deterministic: smallest absolute value wins, ties broken by (row, col)
//! position, so every run of the engine produces identical bases.
//!
//! All solvers return the canonical particular solution with free
//! parameters set to zero; in particular, solving against something that
//! is exactly a coboundary reproduces zero leftovers everywhere downstream.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};

use crate::matrix::IntMatrix;

#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

pub(crate) struct SnfParts {
    pub d: IntMatrix,
    pub u: Option<IntMatrix>,
    pub u_inv: Option<IntMatrix>,
    pub v: Option<IntMatrix>,
    pub v_inv: Option<IntMatrix>,
}

impl SnfParts {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Diagonalize by unimodular row/column operations, mirroring each
/// operation into whichever transform matrices were requested.
pub(crate) fn reduce(
    a: &IntMatrix,
    need_u: bool,
    need_u_inv: bool,
    need_v: bool,
    need_v_inv: bool,
) -> SnfParts {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = need_u.then(|| IntMatrix::identity(m));
    let mut u_inv = need_u_inv.then(|| IntMatrix::identity(m));
    let mut v = need_v.then(|| IntMatrix::identity(n));
    let mut v_inv = need_v_inv.then(|| IntMatrix::identity(n));

    macro_rules! swap_rows {
        ($a:expr, $b:expr) => {
            d.swap_rows($a, $b);
            if let Some(u) = u.as_mut() {
                u.swap_rows($a, $b);
            }
            if let Some(ui) = u_inv.as_mut() {
                ui.swap_cols($a, $b);
            }
        };
    }
    macro_rules! swap_cols {
        ($a:expr, $b:expr) => {
            d.swap_cols($a, $b);
            if let Some(v) = v.as_mut() {
                v.swap_cols($a, $b);
            }
            if let Some(vi) = v_inv.as_mut() {
                vi.swap_rows($a, $b);
            }
        };
    }
    // row[t] += f · row[s]
    macro_rules! row_add {
        ($t:expr, $s:expr, $f:expr) => {
            let f: BigInt = $f;
            d.row_add($t, $s, &f);
            if let Some(u) = u.as_mut() {
                u.row_add($t, $s, &f);
            }
            if let Some(ui) = u_inv.as_mut() {
                ui.col_add($s, $t, &(-f));
            }
        };
    }
    // col[t] += f · col[s]
    macro_rules! col_add {
        ($t:expr, $s:expr, $f:expr) => {
            let f: BigInt = $f;
            d.col_add($t, $s, &f);
            if let Some(v) = v.as_mut() {
                v.col_add($t, $s, &f);
            }
            if let Some(vi) = v_inv.as_mut() {
                vi.row_add($s, $t, &(-f));
            }
        };
    }

    let lim = m.min(n);
    let mut t = 0;
    'diag: while t < lim {
        loop {
            // Deterministic pivot: minimal |entry|, ties by (row, col). A
            // later ±1 can never beat an earlier one, so stop at the first.
            let mut pivot: Option<(BigInt, usize, usize)> = None;
            'scan: for i in t..m {
                for j in t..n {
                    let x = d.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    let ax = x.abs();
                    if pivot.as_ref().is_none_or(|(best, _, _)| ax < *best) {
                        let found_unit = ax.is_one();
                        pivot = Some((ax, i, j));
                        if found_unit {
                            break 'scan;
                        }
                    }
                }
            }
            let Some((_, pi, pj)) = pivot else {
                break 'diag; // remaining submatrix is zero
            };
            swap_rows!(t, pi);
            swap_cols!(t, pj);

            let mut clean = true;
            for r in t + 1..m {
                let x = d.get(r, t).clone();
                if x.is_zero() {
                    continue;
                }
                let q = x.div_floor(d.get(t, t));
                row_add!(r, t, -q);
                if !d.get(r, t).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue; // smaller residues exist; re-pick the pivot
            }
            for c in t + 1..n {
                let x = d.get(t, c).clone();
                if x.is_zero() {
                    continue;
                }
                let q = x.div_floor(d.get(t, t));
                col_add!(c, t, -q);
                if !d.get(t, c).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Row and column t are clear. Make the pivot divide the rest of
            // the submatrix before moving on, so the diagonal forms a chain.
            let pivot_val = d.get(t, t).clone();
            let mut fixed = false;
            'scan: for i in t + 1..m {
                for j in t + 1..n {
                    if !d.get(i, j).mod_floor(&pivot_val).is_zero() {
                        row_add!(t, i, BigInt::one());
                        fixed = true;
                        break 'scan;
                    }
                }
            }
            if !fixed {
                break;
            }
        }
        t += 1;
    }

    for i in 0..lim {
        if d.get(i, i).is_negative() {
            d.negate_row(i);
            if let Some(u) = u.as_mut() {
                u.negate_row(i);
            }
            if let Some(ui) = u_inv.as_mut() {
                ui.negate_col(i);
            }
        }
    }

    SnfParts {
        d,
        u,
        u_inv,
        v,
        v_inv,
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let parts = reduce(a, true, true, true, true);
    SmithDecomposition {
        u: parts.u.unwrap(),
        d: parts.d,
        v: parts.v.unwrap(),
        u_inv: parts.u_inv.unwrap(),
        v_inv: parts.v_inv.unwrap(),
    }
}

/// Basis of the integer kernel of A: the columns of V beyond the rank.
/// The result is a basis of the full kernel lattice (V is unimodular, so
/// the lattice it spans is saturated).
pub fn kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let parts = reduce(a, false, false, true, false);
    let rank = parts.rank();
    let v = parts.v.unwrap();
    (rank..a.cols).map(|j| v.col(j)).collect()
}

/// A factored integer matrix ready to answer many right-hand sides.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    rows: usize,
    cols: usize,
    diag: Vec<BigInt>,
    rank: usize,
    u: IntMatrix,
    v: IntMatrix,
}

impl LinearSystem {
    pub fn new(a: &IntMatrix) -> Self {
        let parts = reduce(a, true, false, true, false);
        let diag = parts.diagonal();
        let rank = parts.rank();
        LinearSystem {
            rows: a.rows,
            cols: a.cols,
            diag,
            rank,
            u: parts.u.unwrap(),
            v: parts.v.unwrap(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Solve A·x = b over ℤ. Free parameters are set to zero.
    pub fn solve_int(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(b.len(), self.rows);
        let ub = self.u.mul_vec(b);
        let mut xt = vec![BigInt::zero(); self.cols];
        for (i, ubi) in ub.iter().enumerate() {
            if i < self.rank {
                let (q, r) = ubi.div_rem(&self.diag[i]);
                if !r.is_zero() {
                    return None;
                }
                xt[i] = q;
            } else if !ubi.is_zero() {
                return None;
            }
        }
        Some(self.v.mul_vec(&xt))
    }

    /// Solve A·x = b over ℚ.
    pub fn solve_rat(&self, b: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(b.len(), self.rows);
        let ub = self.u.mul_vec_rat(b);
        let mut xt = vec![BigRational::zero(); self.cols];
        for (i, ubi) in ub.iter().enumerate() {
            if i < self.rank {
                xt[i] = ubi / BigRational::from_integer(self.diag[i].clone());
            } else if !ubi.is_zero() {
                return None;
            }
        }
        Some(self.v.mul_vec_rat(&xt))
    }

    /// Solve A·x ≡ b (mod 1) for rational x: possible iff the rows of U·b
    /// against zero diagonal entries are integers.
    pub fn solve_mod1(&self, b: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(b.len(), self.rows);
        let ub = self.u.mul_vec_rat(b);
        let mut xt = vec![BigRational::zero(); self.cols];
        for (i, ubi) in ub.iter().enumerate() {
            if i < self.rank {
                xt[i] = ubi / BigRational::from_integer(self.diag[i].clone());
            } else if !ubi.is_integer() {
                return None;
            }
        }
        Some(self.v.mul_vec_rat(&xt))
    }
}

/// Solve A·x ≡ b (mod n) over ℤ/n; the result has entries in [0, n).
pub fn solve_mod_n(a: &IntMatrix, b: &[BigInt], n: u32) -> Option<Vec<BigInt>> {
    let big_n = BigInt::from(n);
    let mut scaled = IntMatrix::zeros(a.rows, a.rows);
    for i in 0..a.rows {
        scaled.set(i, i, big_n.clone());
    }
    let augmented = a.hstack(&scaled);
    let x = LinearSystem::new(&augmented).solve_int(b)?;
    Some(
        x[..a.cols]
            .iter()
            .map(|xi| xi.mod_floor(&big_n))
            .collect(),
    )
}
