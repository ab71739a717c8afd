use serde::Serialize;

use super::{Echelon, Fp, FpVector};

/// A subspace of 𝔽_p^ambient stored by its reduced echelon basis, so equal
/// subspaces compare equal.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Subspace {
    #[serde(skip)]
    field: Fp,
    ambient: usize,
    basis: Vec<FpVector>,
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Subspace")
            .field("ambient", &self.ambient)
            .field("basis", &self.basis)
            .finish()
    }
}

impl Subspace {
    pub fn zero(field: Fp, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(field: Fp, ambient: usize) -> Self {
        let basis = (0..ambient).map(|i| FpVector::unit(field, ambient, i)).collect();
        Subspace {
            field,
            ambient,
            basis,
        }
    }

    pub fn span(field: Fp, ambient: usize, vectors: &[FpVector]) -> Self {
        let mut e = Echelon::new(field, ambient);
        for v in vectors {
            e.insert(v);
        }
        Self::from_echelon(e)
    }

    pub fn from_echelon(e: Echelon) -> Self {
        let (field, ambient) = (e.field(), e.dim());
        Subspace {
            field,
            ambient,
            basis: e.into_rows(),
        }
    }

    fn echelon(&self) -> Echelon {
        let mut e = Echelon::new(self.field, self.ambient);
        for v in &self.basis {
            e.insert(v);
        }
        e
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[FpVector] {
        &self.basis
    }

    pub fn reduce(&self, v: &FpVector) -> FpVector {
        self.echelon().reduce(v)
    }

    pub fn contains(&self, v: &FpVector) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        let e = self.echelon();
        other.basis.iter().all(|v| e.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        self.check(other);
        let mut e = self.echelon();
        for v in &other.basis {
            e.insert(v);
        }
        Self::from_echelon(e)
    }

    /// Intersection via the block trick: echelonize rows `[u | u]` and
    /// `[w | 0]`; rows of the form `[0 | x]` span the intersection.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        self.check(other);
        let n = self.ambient;
        let zero = FpVector::zeros(self.field, n);
        let mut e = Echelon::new(self.field, 2 * n);
        for u in &self.basis {
            e.insert(&u.concat(u));
        }
        for w in &other.basis {
            e.insert(&w.concat(&zero));
        }
        let out: Vec<FpVector> = e
            .rows()
            .iter()
            .zip(e.pivots())
            .filter(|(_, &p)| p >= n)
            .map(|(r, _)| r.slice(n, 2 * n))
            .collect();
        Subspace::span(self.field, n, &out)
    }

    /// Vectors of `self`'s basis completing a basis of `sub` to one of
    /// `self`; their classes form a basis of `self / sub`.
    pub fn quotient_basis(&self, sub: &Subspace) -> Vec<FpVector> {
        self.check(sub);
        let mut e = sub.echelon();
        let mut out = Vec::new();
        for v in &self.basis {
            if e.insert(v) {
                out.push(v.clone());
            }
        }
        out
    }

    fn check(&self, other: &Subspace) {
        assert_eq!(self.field, other.field, "subspace field mismatch");
        assert_eq!(self.ambient, other.ambient, "subspace ambient mismatch");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intersect_examples() {
        let f = Fp::new(2).unwrap();
        let e1 = FpVector::unit(f, 3, 0);
        let e2 = FpVector::unit(f, 3, 1);
        let a = Subspace::span(f, 3, std::slice::from_ref(&e1));
        let b = Subspace::span(f, 3, &[e1.clone(), e2.clone()]);
        assert_eq!(a.intersect(&b), a);

        let c = Subspace::span(f, 3, &[FpVector::from_entries(f, &[1, 1, 0])]);
        assert_eq!(a.intersect(&c).dim(), 0);
        assert_eq!(b.intersect(&c), c);
        assert_eq!(a.sum(&c), b);
    }

    #[test]
    fn quotient_basis_completes() {
        let f = Fp::new(3).unwrap();
        let full = Subspace::full(f, 3);
        let sub = Subspace::span(f, 3, &[FpVector::from_entries(f, &[1, 2, 0])]);
        let q = full.quotient_basis(&sub);
        assert_eq!(q.len(), 2);
        let mut all = q.clone();
        all.extend(sub.basis().iter().cloned());
        assert_eq!(Subspace::span(f, 3, &all), full);
    }
}
