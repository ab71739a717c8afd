use serde::Serialize;

use crate::error::{Error, Result};
use crate::fp::{BilinearMap, Fp, FpVector};
use crate::group::{GroupLike, Subgroup};

/// Largest `|G|² · dim` for which 2-cochains are materialized.
pub const MAX_COCHAIN2_ENTRIES: usize = 1 << 20;

/// A normalized 1-cochain `G → 𝔽_p^cod`, stored densely by element index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Cochain1 {
    #[serde(skip)]
    field: Fp,
    order: usize,
    cod: usize,
    values: Vec<u32>,
}

/// A 2-cochain `G × G → 𝔽_p^cod`; `values[(g·|G| + h)·cod + k]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Cochain2 {
    #[serde(skip)]
    field: Fp,
    order: usize,
    cod: usize,
    values: Vec<u32>,
}

impl Cochain1 {
    pub fn zero(field: Fp, order: usize, cod: usize) -> Self {
        Cochain1 {
            field,
            order,
            cod,
            values: vec![0; order * cod],
        }
    }

    /// Builds from a value function; the value at the identity must be 0.
    pub fn from_fn(field: Fp, order: usize, cod: usize, f: impl Fn(usize) -> FpVector) -> Self {
        let mut c = Self::zero(field, order, cod);
        for g in 0..order {
            let v = f(g);
            assert_eq!(v.len(), cod, "cochain value has the wrong dimension");
            for k in 0..cod {
                c.values[g * cod + k] = v.get(k);
            }
        }
        assert!(c.is_normalized(), "1-cochains must vanish at the identity");
        c
    }

    /// A scalar cochain from its values by element.
    pub fn from_scalars(field: Fp, values: Vec<u32>) -> Self {
        let order = values.len();
        let values = values.into_iter().map(|x| field.reduce(x as u64)).collect();
        let c = Cochain1 {
            field,
            order,
            cod: 1,
            values,
        };
        assert!(c.is_normalized(), "1-cochains must vanish at the identity");
        c
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn value(&self, g: usize, k: usize) -> u32 {
        self.values[g * self.cod + k]
    }

    pub fn get(&self, g: usize) -> FpVector {
        FpVector::from_entries(self.field, &self.values[g * self.cod..(g + 1) * self.cod])
    }

    pub fn set(&mut self, g: usize, v: &FpVector) {
        assert!(g != 0 || v.is_zero(), "1-cochains must vanish at the identity");
        for k in 0..self.cod {
            self.values[g * self.cod + k] = v.get(k);
        }
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&x| x == 0)
    }

    pub fn is_normalized(&self) -> bool {
        self.values[..self.cod].iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Cochain1) -> Cochain1 {
        self.check_same(other);
        let f = self.field;
        Cochain1 {
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f.add(a, b)).collect(),
            ..*self
        }
    }

    pub fn scaled(&self, c: u32) -> Cochain1 {
        let f = self.field;
        Cochain1 {
            values: self.values.iter().map(|&a| f.mul(a, c)).collect(),
            ..*self
        }
    }

    pub fn neg(&self) -> Cochain1 {
        self.scaled(self.field.neg(1))
    }

    /// The scalar cochain of coordinate `k`.
    pub fn component(&self, k: usize) -> Cochain1 {
        let values = (0..self.order).map(|g| self.value(g, k)).collect();
        Cochain1 {
            field: self.field,
            order: self.order,
            cod: 1,
            values,
        }
    }

    /// Reassembles a vector-valued cochain from scalar components.
    pub fn from_components(field: Fp, order: usize, parts: &[Cochain1]) -> Cochain1 {
        let cod = parts.len();
        let mut c = Cochain1::zero(field, order, cod);
        for (k, part) in parts.iter().enumerate() {
            assert_eq!(part.cod, 1);
            for g in 0..order {
                c.values[g * cod + k] = part.values[g];
            }
        }
        c
    }

    /// Whether `c(gh) = c(g) + c(h)` for all `g, h`.
    pub fn is_homomorphism<G: GroupLike + ?Sized>(&self, g: &G) -> bool {
        d1(g, self).is_zero()
    }

    fn check_same(&self, other: &Cochain1) {
        assert_eq!(
            (self.field, self.order, self.cod),
            (other.field, other.order, other.cod),
            "cochains over different groups or coefficients"
        );
    }
}

impl Cochain2 {
    pub fn zero(field: Fp, order: usize, cod: usize) -> Result<Self> {
        let n = order * order * cod;
        if n > MAX_COCHAIN2_ENTRIES {
            return Err(Error::TooLarge(format!(
                "2-cochain on a group of order {order} with {cod} coordinates"
            )));
        }
        Ok(Cochain2 {
            field,
            order,
            cod,
            values: vec![0; n],
        })
    }

    pub fn from_fn(
        field: Fp,
        order: usize,
        cod: usize,
        f: impl Fn(usize, usize) -> FpVector,
    ) -> Result<Self> {
        let mut c = Self::zero(field, order, cod)?;
        for g in 0..order {
            for h in 0..order {
                let v = f(g, h);
                for k in 0..cod {
                    c.values[(g * order + h) * cod + k] = v.get(k);
                }
            }
        }
        Ok(c)
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn value(&self, g: usize, h: usize, k: usize) -> u32 {
        self.values[(g * self.order + h) * self.cod + k]
    }

    pub fn set_value(&mut self, g: usize, h: usize, k: usize, v: u32) {
        self.values[(g * self.order + h) * self.cod + k] = v;
    }

    pub fn get(&self, g: usize, h: usize) -> FpVector {
        let at = (g * self.order + h) * self.cod;
        FpVector::from_entries(self.field, &self.values[at..at + self.cod])
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&x| x == 0)
    }

    pub fn is_normalized(&self) -> bool {
        (0..self.order).all(|x| {
            (0..self.cod).all(|k| self.value(0, x, k) == 0 && self.value(x, 0, k) == 0)
        })
    }

    pub fn add(&self, other: &Cochain2) -> Cochain2 {
        assert_eq!(
            (self.field, self.order, self.cod),
            (other.field, other.order, other.cod),
            "cochains over different groups or coefficients"
        );
        let f = self.field;
        Cochain2 {
            field: f,
            order: self.order,
            cod: self.cod,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }

    pub fn scaled(&self, c: u32) -> Cochain2 {
        let f = self.field;
        Cochain2 {
            field: f,
            order: self.order,
            cod: self.cod,
            values: self.values.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn neg(&self) -> Cochain2 {
        self.scaled(self.field.neg(1))
    }

    pub fn sub(&self, other: &Cochain2) -> Cochain2 {
        self.add(&other.neg())
    }

    pub fn component(&self, k: usize) -> Cochain2 {
        let n = self.order * self.order;
        Cochain2 {
            field: self.field,
            order: self.order,
            cod: 1,
            values: (0..n).map(|x| self.values[x * self.cod + k]).collect(),
        }
    }
}

/// `(∂a)(g,h) = a(g) + a(h) − a(gh)`, trivial action.
pub fn d1<G: GroupLike + ?Sized>(g: &G, a: &Cochain1) -> Cochain2 {
    let f = a.field;
    let n = g.order();
    assert_eq!(a.order, n, "cochain is not on this group");
    let cod = a.cod;
    let mut out = Cochain2::zero(f, n, cod).expect("1-cochain group within the 2-cochain cap");
    for x in 0..n {
        for y in 0..n {
            let xy = g.mul(x, y);
            for k in 0..cod {
                let v = f.sub(f.add(a.value(x, k), a.value(y, k)), a.value(xy, k));
                out.values[(x * n + y) * cod + k] = v;
            }
        }
    }
    out
}

/// Whether `∂a = c`, without building `∂a`.
pub fn has_coboundary<G: GroupLike + ?Sized>(g: &G, a: &Cochain1, c: &Cochain2) -> bool {
    let f = a.field;
    let n = g.order();
    let cod = a.cod;
    if a.order != n || c.order != n || c.cod != cod {
        return false;
    }
    for x in 0..n {
        for y in 0..n {
            let xy = g.mul(x, y);
            for k in 0..cod {
                let v = f.sub(f.add(a.value(x, k), a.value(y, k)), a.value(xy, k));
                if c.values[(x * n + y) * cod + k] != v {
                    return false;
                }
            }
        }
    }
    true
}

/// `(∂c)(g,h,k) = c(h,k) − c(gh,k) + c(g,hk) − c(g,h)`, flattened as
/// `((g·|G| + h)·|G| + k)·cod + t`.
pub fn d2<G: GroupLike + ?Sized>(g: &G, c: &Cochain2) -> Result<Vec<u32>> {
    let f = c.field;
    let n = g.order();
    assert_eq!(c.order, n, "cochain is not on this group");
    let cod = c.cod;
    if n * n * n * cod > 16 * MAX_COCHAIN2_ENTRIES {
        return Err(Error::TooLarge(format!("3-cochain on a group of order {n}")));
    }
    let mut out = vec![0u32; n * n * n * cod];
    for x in 0..n {
        for y in 0..n {
            let xy = g.mul(x, y);
            for z in 0..n {
                let yz = g.mul(y, z);
                for t in 0..cod {
                    let v = f.add(
                        f.sub(c.value(y, z, t), c.value(xy, z, t)),
                        f.sub(c.value(x, yz, t), c.value(x, y, t)),
                    );
                    out[((x * n + y) * n + z) * cod + t] = v;
                }
            }
        }
    }
    Ok(out)
}

/// Whether `d2 c = 0`. With `f = d2 c`, the 3-cocycle identity gives
/// `f(x,y,zs) = f(x,y,z)` whenever `f(·,·,s) = 0`, so it suffices to test
/// `z` over the generators together with `f(x,y,1) = c(y,1) − c(xy,1) = 0`.
pub fn is_cocycle<G: GroupLike + ?Sized>(g: &G, c: &Cochain2) -> bool {
    let f = c.field;
    let n = g.order();
    for x in 0..n {
        for t in 0..c.cod {
            if c.value(x, 0, t) != c.value(0, 0, t) {
                return false;
            }
        }
    }
    for &z in g.generators() {
        for x in 0..n {
            for y in 0..n {
                let xy = g.mul(x, y);
                let yz = g.mul(y, z);
                for t in 0..c.cod {
                    let lhs = f.add(c.value(y, z, t), c.value(x, yz, t));
                    let rhs = f.add(c.value(xy, z, t), c.value(x, y, t));
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// `(a ∪ b)(g,h) = μ(a(g) ⊗ b(h))`.
pub fn cup(a: &Cochain1, b: &Cochain1, mu: &BilinearMap) -> Result<Cochain2> {
    let (da, db, dc) = mu.dims();
    if a.cod != da || b.cod != db || a.order != b.order {
        return Err(Error::InvalidArgument(format!(
            "cup of cochains with dims {} and {} through a pairing of shape {:?}",
            a.cod,
            b.cod,
            mu.dims()
        )));
    }
    let n = a.order;
    let f = a.field;
    let mut out = Cochain2::zero(f, n, dc)?;
    if mu.is_zero() {
        return Ok(out);
    }
    for g in 0..n {
        let ag = &a.values[g * da..(g + 1) * da];
        if ag.iter().all(|&v| v == 0) {
            continue;
        }
        for h in 0..n {
            let bh = &b.values[h * db..(h + 1) * db];
            let base = (g * n + h) * dc;
            mu.apply_slices(ag, bh, &mut out.values[base..base + dc]);
        }
    }
    Ok(out)
}

/// `a ∘ π` for a projection `π: G → Q`.
pub fn inflate1(a: &Cochain1, projection: &[usize]) -> Cochain1 {
    let n = projection.len();
    let mut out = Cochain1::zero(a.field, n, a.cod);
    for (x, &q) in projection.iter().enumerate() {
        for k in 0..a.cod {
            out.values[x * a.cod + k] = a.value(q, k);
        }
    }
    out
}

/// `c ∘ (π × π)`.
pub fn inflate2(c: &Cochain2, projection: &[usize]) -> Result<Cochain2> {
    let n = projection.len();
    let mut out = Cochain2::zero(c.field, n, c.cod)?;
    for (x, &qx) in projection.iter().enumerate() {
        for (y, &qy) in projection.iter().enumerate() {
            for k in 0..c.cod {
                out.values[(x * n + y) * c.cod + k] = c.value(qx, qy, k);
            }
        }
    }
    Ok(out)
}

/// Restriction to `H`, indexed by position in `H.elements()`.
pub fn restrict1(a: &Cochain1, h: &Subgroup) -> Cochain1 {
    let elems = h.elements();
    let mut out = Cochain1::zero(a.field, elems.len(), a.cod);
    for (i, &x) in elems.iter().enumerate() {
        for k in 0..a.cod {
            out.values[i * a.cod + k] = a.value(x, k);
        }
    }
    out
}
