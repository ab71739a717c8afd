use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{GroupLike, Subgroup};
use crate::error::{Error, Result};
use crate::fp::is_prime;

/// Largest order of a table-backed group.
pub const MAX_ORDER: usize = 4096;

/// A finite group stored by its full multiplication table. Index 0 is the
/// identity; indices are assigned in breadth-first order over the
/// generators, so `label(x)` is a shortest word for `x`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiniteGroup {
    p: u32,
    order: usize,
    mult: Vec<u16>,
    inv: Vec<u16>,
    generators: Vec<usize>,
    generator_names: Vec<String>,
    /// BFS tree: `tree[x] = (parent, generator position)` with
    /// `x = parent · generators[pos]`; the identity maps to itself.
    tree: Vec<(usize, usize)>,
    #[serde(skip)]
    digest: String,
}

/// A quotient group together with the projection from its parent.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FiniteGroup,
    pub projection: Vec<usize>,
    /// Coset representatives: the minimal parent index in each coset.
    pub section: Vec<usize>,
}

impl FiniteGroup {
    /// Closes `generators` under `mul` and tabulates the result. Returns the
    /// group and the payload of every element in index order.
    pub fn from_generators<T, F>(
        p: u32,
        identity: T,
        generators: &[T],
        names: Vec<String>,
        mul: F,
    ) -> Result<(FiniteGroup, Vec<T>)>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        if !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        assert_eq!(generators.len(), names.len(), "one name per generator");
        let mut index: HashMap<T, usize> = HashMap::new();
        let mut elems = vec![identity.clone()];
        let mut tree = vec![(0usize, 0usize)];
        index.insert(identity, 0);
        // right_gen[x * ngens + s] = x · g_s
        let ngens = generators.len();
        let mut right_gen: Vec<usize> = Vec::new();
        let mut head = 0;
        while head < elems.len() {
            for (s, g) in generators.iter().enumerate() {
                let y = mul(&elems[head], g);
                let next = elems.len();
                let id = *index.entry(y.clone()).or_insert(next);
                if id == next {
                    if next >= MAX_ORDER {
                        return Err(Error::TooLarge(format!(
                            "group exceeds the order cap {MAX_ORDER}"
                        )));
                    }
                    elems.push(y);
                    tree.push((head, s));
                }
                right_gen.push(id);
            }
            head += 1;
        }
        let order = elems.len();
        let mut mult = vec![0u16; order * order];
        for a in 0..order {
            mult[a * order] = a as u16;
        }
        // a·b = (a·parent(b))·g, filled in BFS order of b.
        for b in 1..order {
            let (pb, s) = tree[b];
            for a in 0..order {
                let ap = mult[a * order + pb] as usize;
                mult[a * order + b] = right_gen[ap * ngens + s] as u16;
            }
        }
        let gens = right_gen[..ngens].to_vec();
        let group = Self::from_table(p, order, mult, gens, names, tree)?;
        Ok((group, elems))
    }

    fn from_table(
        p: u32,
        order: usize,
        mult: Vec<u16>,
        generators: Vec<usize>,
        generator_names: Vec<String>,
        tree: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let mut inv = vec![0u16; order];
        for a in 0..order {
            let row = &mult[a * order..(a + 1) * order];
            let b = row
                .iter()
                .position(|&x| x == 0)
                .ok_or_else(|| Error::InvariantViolation("element without inverse".into()))?;
            inv[a] = b as u16;
        }
        if !is_p_power(order, p) {
            return Err(Error::InvalidArgument(format!(
                "group of order {order} is not a {p}-group"
            )));
        }
        let mut g = FiniteGroup {
            p,
            order,
            mult,
            inv,
            generators,
            generator_names,
            tree,
            digest: String::new(),
        };
        g.digest = g.compute_digest();
        Ok(g)
    }

    fn compute_digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.p.to_le_bytes());
        h.update((self.order as u64).to_le_bytes());
        for &x in &self.mult {
            h.update(x.to_le_bytes());
        }
        hex::encode(h.finalize())
    }

    /// Restores derived fields after deserialization and validates the table.
    pub fn validated(mut self) -> Result<Self> {
        if self.mult.len() != self.order * self.order || self.inv.len() != self.order {
            return Err(Error::Parse("group table has the wrong size".into()));
        }
        if self.mult.iter().any(|&x| x as usize >= self.order) {
            return Err(Error::Parse("group table entry out of range".into()));
        }
        for a in 0..self.order {
            if self.mul(0, a) != a
                || self.mul(a, 0) != a
                || self.mul(a, self.inv[a] as usize) != 0
            {
                return Err(Error::Parse("group table violates the group axioms".into()));
            }
        }
        self.digest = self.compute_digest();
        Ok(self)
    }

    /// Sampled associativity check plus exact identity and inverse checks.
    pub fn check_axioms(&self, samples: usize) -> bool {
        let n = self.order;
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % n as u64) as usize
        };
        for _ in 0..samples {
            let (a, b, c) = (next(), next(), next());
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return false;
            }
        }
        (0..n).all(|a| self.mul(a, 0) == a && self.mul(0, a) == a && self.mul(a, self.inv(a)) == 0)
    }

    pub fn digest(&self) -> &str {
        &self.digest
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    /// A shortest word in the generators for `x`, e.g. `x1*x2*x2`.
    pub fn label(&self, x: usize) -> String {
        let mut letters = Vec::new();
        let mut cur = x;
        while cur != 0 {
            let (parent, s) = self.tree[cur];
            letters.push(self.generator_names[s].clone());
            cur = parent;
        }
        if letters.is_empty() {
            return "1".into();
        }
        letters.reverse();
        letters.join("*")
    }

    /// Spanning tree over generator positions (see field docs).
    pub fn tree(&self) -> &[(usize, usize)] {
        &self.tree
    }

    /// Elements listed in breadth-first order; parents precede children.
    pub fn bfs_order(&self) -> impl Iterator<Item = usize> {
        0..self.order
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::whole(self)
    }

    /// The quotient by a normal subgroup. Coset representatives are minimal
    /// indices, and the quotient's generators are the images of ours.
    pub fn quotient(&self, n: &Subgroup) -> Result<Quotient> {
        if !super::is_normal(self, n) {
            return Err(Error::NotNormal);
        }
        let order = self.order;
        let mut projection = vec![usize::MAX; order];
        let mut section = Vec::new();
        for g in 0..order {
            if projection[g] != usize::MAX {
                continue;
            }
            let c = section.len();
            section.push(g);
            for &x in n.elements() {
                projection[self.mul(g, x)] = c;
            }
        }
        let q = section.len();
        // Re-index cosets in BFS order over the image generators so the
        // quotient carries a consistent spanning tree.
        let gens: Vec<usize> = self.generators.iter().map(|&s| projection[s]).collect();
        let mut new_index = vec![usize::MAX; q];
        let mut order_list = vec![0usize];
        let mut tree = vec![(0usize, 0usize)];
        new_index[0] = 0;
        let mut head = 0;
        while head < order_list.len() {
            let c = order_list[head];
            for (s, &gc) in gens.iter().enumerate() {
                let y = projection[self.mul(section[c], section[gc])];
                if new_index[y] == usize::MAX {
                    new_index[y] = order_list.len();
                    order_list.push(y);
                    tree.push((head, s));
                }
            }
            head += 1;
        }
        debug_assert_eq!(order_list.len(), q);
        let mut mult = vec![0u16; q * q];
        for (a_new, &a) in order_list.iter().enumerate() {
            for (b_new, &b) in order_list.iter().enumerate() {
                let c = projection[self.mul(section[a], section[b])];
                mult[a_new * q + b_new] = new_index[c] as u16;
            }
        }
        let projection: Vec<usize> = projection.iter().map(|&c| new_index[c]).collect();
        let section: Vec<usize> = order_list.iter().map(|&c| section[c]).collect();
        let generators = gens.iter().map(|&c| new_index[c]).collect();
        let group = FiniteGroup::from_table(
            self.p,
            q,
            mult,
            generators,
            self.generator_names.clone(),
            tree,
        )?;
        Ok(Quotient {
            group,
            projection,
            section,
        })
    }

    /// Image of a subgroup under a projection onto `self`.
    pub fn image_of(&self, projection: &[usize], h: &Subgroup) -> Subgroup {
        let gens: Vec<usize> = h.generators().iter().map(|&x| projection[x]).collect();
        super::closure(self, &gens)
    }
}

fn is_p_power(mut n: usize, p: u32) -> bool {
    let p = p as usize;
    while n > 1 && n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

impl GroupLike for FiniteGroup {
    fn prime(&self) -> u32 {
        self.p
    }

    fn order(&self) -> usize {
        self.order
    }

    #[inline]
    fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b] as usize
    }

    #[inline]
    fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    fn generators(&self) -> &[usize] {
        &self.generators
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.order == other.order
            && self.mult == other.mult
            && self.generators == other.generators
            && self.generator_names == other.generator_names
    }
}

impl Eq for FiniteGroup {}
