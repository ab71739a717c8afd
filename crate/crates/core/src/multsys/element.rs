use serde::Serialize;

use super::MultSystem;
use crate::error::{Error, Result};
use crate::fp::FpVector;

/// An element `a = (r_ij)` of `V_{n,d}(𝒜)`, stored as one flat vector in the
/// system's coordinate layout. `level` is a lower bound for the true level;
/// equality and hashing look at the entries only.
#[derive(Clone, Debug, Serialize)]
pub struct VElement {
    level: usize,
    entries: FpVector,
}

impl PartialEq for VElement {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl Eq for VElement {}

impl std::hash::Hash for VElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.entries.hash(state);
    }
}

/// A formal unit `1 + a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct UElement {
    a: VElement,
}

impl VElement {
    pub fn zero(sys: &MultSystem) -> Self {
        VElement {
            level: sys.rank() + 1,
            entries: FpVector::zeros(sys.field(), sys.total_dim()),
        }
    }

    /// Wraps a flat vector, computing its exact level.
    pub fn from_vector(sys: &MultSystem, entries: FpVector) -> Self {
        assert_eq!(entries.len(), sys.total_dim(), "element length mismatch");
        let mut v = VElement { level: 1, entries };
        v.normalize(sys);
        v
    }

    /// Element with the single coordinate `r_ij = value`.
    pub fn single(sys: &MultSystem, i: usize, j: usize, value: &FpVector) -> Self {
        let mut e = FpVector::zeros(sys.field(), sys.total_dim());
        let r = sys.range(i, j);
        assert_eq!(value.len(), r.len(), "entry dimension mismatch");
        for x in value.support() {
            e.set(r.start + x, value.get(x));
        }
        VElement::from_vector(sys, e)
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn entries(&self) -> &FpVector {
        &self.entries
    }

    pub fn entry(&self, sys: &MultSystem, i: usize, j: usize) -> FpVector {
        let r = sys.range(i, j);
        self.entries.slice(r.start, r.end)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_zero()
    }

    /// Recomputes the exact level (`n + 1` for zero).
    pub fn normalize(&mut self, sys: &MultSystem) {
        self.level = match self.entries.first_nonzero() {
            None => sys.rank() + 1,
            Some(x) => sys.level_of_index(x),
        };
    }

    /// Drops every coordinate of level `> max_level`.
    pub fn truncate(&self, sys: &MultSystem, max_level: usize) -> VElement {
        let end = sys.level_start(max_level + 1);
        let mut e = self.entries.clone();
        for x in e.support() {
            if x >= end {
                e.set(x, 0);
            }
        }
        VElement::from_vector(sys, e)
    }
}

pub fn v_add(sys: &MultSystem, a: &VElement, b: &VElement) -> VElement {
    let mut e = a.entries.clone();
    e.add_assign(&b.entries);
    let mut out = VElement {
        level: a.level.min(b.level),
        entries: e,
    };
    if out.entries.is_zero() {
        out.level = sys.rank() + 1;
    }
    out
}

pub fn v_neg(a: &VElement) -> VElement {
    VElement {
        level: a.level,
        entries: a.entries.negated(),
    }
}

/// `u_ij = Σ_k μ(r_ik ⊗ r'_kj)`.
pub fn v_mul(sys: &MultSystem, a: &VElement, b: &VElement) -> VElement {
    let mut out = FpVector::zeros(sys.field(), sys.total_dim());
    if !a.is_zero() && !b.is_zero() {
        for t in sys.terms() {
            let ra = sys.coord_range(t.left);
            let rb = sys.coord_range(t.right);
            let ro = sys.coord_range(t.out);
            let x = a.entries.slice(ra.start, ra.end);
            let y = b.entries.slice(rb.start, rb.end);
            if x.is_zero() || y.is_zero() {
                continue;
            }
            let (i, k, j) = t.key;
            let z = sys.pairing(i, k, j).apply(&x, &y);
            for c in z.support() {
                out.add_at(ro.start + c, z.get(c));
            }
        }
    }
    let level = if out.is_zero() {
        sys.rank() + 1
    } else {
        (a.level + b.level).min(sys.rank() + 1)
    };
    VElement {
        level,
        entries: out,
    }
}

impl UElement {
    pub fn identity(sys: &MultSystem) -> Self {
        UElement {
            a: VElement::zero(sys),
        }
    }

    pub fn from_v(a: VElement) -> Self {
        UElement { a }
    }

    pub fn a(&self) -> &VElement {
        &self.a
    }

    pub fn level(&self) -> usize {
        self.a.level
    }

    /// Copy with the exact level recomputed.
    pub fn normalized(&self, sys: &MultSystem) -> UElement {
        let mut a = self.a.clone();
        a.normalize(sys);
        UElement { a }
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_zero()
    }

    pub fn entry(&self, sys: &MultSystem, i: usize, j: usize) -> FpVector {
        self.a.entry(sys, i, j)
    }
}

/// `(1+a)(1+b) = 1 + a + b + ab`.
pub fn u_mul(sys: &MultSystem, u: &UElement, v: &UElement) -> UElement {
    let s = v_add(sys, &u.a, &v.a);
    let ab = v_mul(sys, &u.a, &v.a);
    UElement {
        a: v_add(sys, &s, &ab),
    }
}

/// `(1+a)⁻¹ = 1 + Σ_{i≥1} (−a)^i`; the sum stops because `a` is nilpotent.
pub fn u_inv(sys: &MultSystem, u: &UElement) -> UElement {
    let neg = v_neg(&u.a);
    let mut power = neg.clone();
    let mut acc = VElement::zero(sys);
    while !power.is_zero() {
        acc = v_add(sys, &acc, &power);
        power = v_mul(sys, &power, &neg);
    }
    UElement { a: acc }
}

/// `u⁻¹ v⁻¹ u v`.
pub fn u_comm(sys: &MultSystem, u: &UElement, v: &UElement) -> UElement {
    let vu = u_mul(sys, v, u);
    let uv = u_mul(sys, u, v);
    u_mul(sys, &u_inv(sys, &vu), &uv)
}

pub fn u_pow(sys: &MultSystem, u: &UElement, mut k: u64) -> UElement {
    let mut base = u.clone();
    let mut acc = UElement::identity(sys);
    while k > 0 {
        if k & 1 == 1 {
            acc = u_mul(sys, &acc, &base);
        }
        base = u_mul(sys, &base, &base);
        k >>= 1;
    }
    acc
}

/// Default bound on the number of free coordinates in `enumerate_u`.
pub const ENUMERATION_BOUND: usize = 20;

/// All elements of `U_{n,d}(𝒜)`, ordered by their integer code (digits of
/// level-1 coordinates least significant).
pub fn enumerate_u(sys: &MultSystem, d: usize, bound: usize) -> Result<Vec<UElement>> {
    let start = sys.level_start(d.max(1));
    let total = sys.total_dim();
    let free = total - start;
    if sys.total_dim() > bound {
        return Err(Error::TooLarge(format!(
            "system of total dimension {} exceeds the enumeration bound {bound}",
            sys.total_dim()
        )));
    }
    let p = sys.p() as u64;
    let count = p.pow(free as u32);
    let mut out = Vec::with_capacity(count as usize);
    for mut code in 0..count {
        let mut e = FpVector::zeros(sys.field(), total);
        for x in start..total {
            e.set(x, (code % p) as u32);
            code /= p;
        }
        out.push(UElement::from_v(VElement::from_vector(sys, e)));
    }
    Ok(out)
}
