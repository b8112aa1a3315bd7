//! Central extensions of a finite groupoid by ℤ/m, built from locally
//! constant gerbe data: arrows are pairs (x, λ) with
//! (x, λ)(y, μ) = (xy, λ + μ + m·c(x, y)), which is associative exactly
//! when the associator ∂c vanishes.
//!
//! On a nerve every level is a discrete complex, so a gerbe cocycle there
//! has only its C⁰(X₂) component and the β = b = 0 hypothesis is
//! automatic.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, ToPrimitive};

use crate::cochain::Cochain;
use crate::gerbe::GerbeCocycle;
use crate::groupoid::{Arrow, FiniteGroupoid};
use crate::ring::Ring;
use crate::space::NerveSpace;
use crate::{Error, Result};

/// g = ∂c for a locally constant c ∈ C⁰(X₂, ℚ/ℤ). The extension built
/// from c exists iff g = 0; ∂g = 0 always, and g vanishes on every triple
/// (1_{s(y)}, y, 1_{t(y)}) whether or not c is a cocycle.
pub fn associator(c: &Cochain) -> Result<Cochain> {
    if c.ring() != Ring::QModZ || (c.k(), c.p()) != (0, 2) {
        return Err(Error::validation(
            "associator expects a Q/Z-valued cochain of bidegree (0, 2)",
        ));
    }
    if !c.d().is_zero() {
        return Err(Error::math("cochain is not locally constant (dc ≠ 0)"));
    }
    c.partial()
}

#[derive(Debug, Clone)]
pub struct CentralExtension {
    pub groupoid: FiniteGroupoid,
    pub modulus: u32,
}

impl CentralExtension {
    /// Index of the extension arrow (x, λ).
    pub fn arrow(&self, x: usize, lambda: u32) -> usize {
        x * self.modulus as usize + lambda as usize
    }

    pub fn split(&self, r: usize) -> (usize, u32) {
        let m = self.modulus as usize;
        (r / m, (r % m) as u32)
    }
}

/// The obstructed branch carries the associator instead of a groupoid.
#[derive(Debug, Clone)]
pub enum ExtensionOutcome {
    Built(CentralExtension),
    Obstructed(Cochain),
}

impl ExtensionOutcome {
    pub fn built(self) -> Result<CentralExtension> {
        match self {
            ExtensionOutcome::Built(e) => Ok(e),
            ExtensionOutcome::Obstructed(_) => {
                Err(Error::math("extension is obstructed by a nonzero associator"))
            }
        }
    }
}

/// Multiplication table of R₁ = X₁ × ℤ/m over the nerve's groupoid.
/// `modulus` must clear every denominator of c; identities and inverses
/// are rederived by the groupoid constructor, and centrality of the
/// kernel ℤ/m is checked exhaustively.
pub fn build_extension(
    nerve: &NerveSpace,
    gerbe: &GerbeCocycle,
    modulus: u32,
) -> Result<ExtensionOutcome> {
    if gerbe.cocycle().space() != &nerve.space {
        return Err(Error::validation("gerbe does not live on this nerve"));
    }
    if modulus == 0 {
        return Err(Error::validation("modulus must be positive"));
    }
    let m = modulus as usize;
    let base = &nerve.groupoid;
    let zero;
    let c = match gerbe.cocycle().part(2) {
        Some(c) => c,
        None => {
            zero = Cochain::zero(nerve.space.clone(), 0, 2, Ring::QModZ);
            &zero
        }
    };

    // m·c as an integer table on composable pairs.
    let big_m = BigRational::from_integer(BigInt::from(m));
    let mut scaled = BTreeMap::new();
    for (x, arrow_x) in base.arrows().iter().enumerate() {
        for (y, arrow_y) in base.arrows().iter().enumerate() {
            if arrow_x.dst != arrow_y.src {
                continue;
            }
            let v = nerve
                .vertex(2, &[x, y])
                .expect("composable pairs index level 2");
            let val = c.value(&crate::complex::Simplex::vertex(v)) * &big_m;
            if !val.is_integer() {
                return Err(Error::validation(format!(
                    "c({}, {}) = {} does not lie in (1/{m})ℤ/ℤ",
                    arrow_x.name,
                    arrow_y.name,
                    c.value(&crate::complex::Simplex::vertex(v)),
                )));
            }
            scaled.insert((x, y), val.to_integer().mod_floor(&BigInt::from(m)));
        }
    }

    let g = associator(c)?;
    if !g.is_zero() {
        return Ok(ExtensionOutcome::Obstructed(g));
    }

    let arrows: Vec<Arrow> = base
        .arrows()
        .iter()
        .flat_map(|a| {
            (0..m).map(move |l| Arrow {
                name: format!("({},{l})", a.name),
                src: a.src,
                dst: a.dst,
            })
        })
        .collect();
    let mut compose = BTreeMap::new();
    for (&(x, y), k) in &scaled {
        let xy = base.compose(x, y).unwrap();
        let k = k.to_usize().unwrap();
        for l1 in 0..m {
            for l2 in 0..m {
                compose.insert((x * m + l1, y * m + l2), xy * m + (l1 + l2 + k) % m);
            }
        }
    }
    let groupoid = FiniteGroupoid::new(base.objects().to_vec(), arrows, compose)?;

    // Central kernel: kernel elements (1_u, λ) commute across every arrow.
    for u in 0..base.objects().len() {
        let e = base.identity_of(u);
        for lambda in 0..m {
            let k_src = e * m + lambda;
            for r in 0..groupoid.arrows().len() {
                if groupoid.source(r) != u {
                    continue;
                }
                let v = groupoid.target(r);
                let k_dst = base.identity_of(v) * m + lambda;
                if groupoid.compose(k_src, r) != groupoid.compose(r, k_dst) {
                    return Err(Error::math(format!(
                        "kernel element λ = {lambda} at object {u} is not central"
                    )));
                }
            }
        }
    }

    Ok(ExtensionOutcome::Built(CentralExtension { groupoid, modulus }))
}
