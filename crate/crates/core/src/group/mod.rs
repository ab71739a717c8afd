//! Finite p-groups: table-backed groups, subgroups, quotients and the
//! p-Zassenhaus filtration.

mod filtration;
mod finite;
mod spec;
mod subgroup;
mod word;

pub use filtration::{
    elementary_quotient_basis, lower_central_series, zassenhaus_lazard, zassenhaus_recursive,
    Filtration, QuotientBasis,
};
pub use finite::{FiniteGroup, Quotient, MAX_ORDER};
pub use spec::{build_group, GroupSpec};
pub use subgroup::{
    closure, commutator_subgroup, is_normal, normal_closure, power_subgroup, product, Subgroup,
};
pub use word::parse_word;

/// Minimal interface shared by table-backed groups and implicitly given
/// groups such as U(𝒜). Elements are indices in `0..order()`, with the
/// identity at index 0.
pub trait GroupLike: Sync {
    fn prime(&self) -> u32;
    fn order(&self) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;
    fn inv(&self, a: usize) -> usize;
    fn generators(&self) -> &[usize];

    fn identity(&self) -> usize {
        0
    }

    fn pow(&self, a: usize, mut k: u64) -> usize {
        let mut base = a;
        let mut acc = self.identity();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// `a⁻¹ b⁻¹ a b`.
    fn comm(&self, a: usize, b: usize) -> usize {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(self.inv(ba), ab)
    }

    /// `x⁻¹ a x`.
    fn conj(&self, a: usize, x: usize) -> usize {
        self.mul(self.inv(x), self.mul(a, x))
    }

    fn element_order(&self, a: usize) -> u64 {
        let mut k = 1;
        let mut x = a;
        while x != self.identity() {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }
}

impl<T: GroupLike + ?Sized> GroupLike for &T {
    fn prime(&self) -> u32 {
        (**self).prime()
    }

    fn order(&self) -> usize {
        (**self).order()
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        (**self).mul(a, b)
    }

    fn inv(&self, a: usize) -> usize {
        (**self).inv(a)
    }

    fn generators(&self) -> &[usize] {
        (**self).generators()
    }
}
