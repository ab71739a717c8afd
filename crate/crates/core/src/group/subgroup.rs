use super::GroupLike;

/// A subgroup of a `GroupLike` parent: sorted element indices, a membership
/// bitset and a generating set.
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent_order: usize,
    elems: Vec<usize>,
    bits: Vec<u64>,
    gens: Vec<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.parent_order == other.parent_order && self.elems == other.elems
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    pub fn trivial(parent_order: usize) -> Self {
        let mut bits = vec![0u64; parent_order.div_ceil(64)];
        bits[0] |= 1;
        Subgroup {
            parent_order,
            elems: vec![0],
            bits,
            gens: Vec::new(),
        }
    }

    pub fn whole<G: GroupLike + ?Sized>(g: &G) -> Self {
        let n = g.order();
        let mut bits = vec![!0u64; n.div_ceil(64)];
        if !n.is_multiple_of(64) {
            *bits.last_mut().unwrap() = (1u64 << (n % 64)) - 1;
        }
        Subgroup {
            parent_order: n,
            elems: (0..n).collect(),
            bits,
            gens: g.generators().to_vec(),
        }
    }

    /// Builds from an element set already known to be a subgroup, choosing
    /// a generating set greedily in index order.
    pub fn from_elements<G: GroupLike + ?Sized>(g: &G, elems: &[usize]) -> Self {
        let mut h = Subgroup::trivial(g.order());
        for &x in elems {
            if !h.contains(x) {
                h = extend(g, &h, &[x]);
            }
        }
        debug_assert_eq!(h.order(), elems.len(), "element set is not a subgroup");
        h
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        (self.bits[x >> 6] >> (x & 63)) & 1 == 1
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elems.len() == 1
    }

    /// Sorted element indices.
    pub fn elements(&self) -> &[usize] {
        &self.elems
    }

    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elems.len() <= other.elems.len() && self.elems.iter().all(|&x| other.contains(x))
    }

    pub fn intersect<G: GroupLike + ?Sized>(&self, g: &G, other: &Subgroup) -> Subgroup {
        let common: Vec<usize> = self
            .elems
            .iter()
            .copied()
            .filter(|&x| other.contains(x))
            .collect();
        Subgroup::from_elements(g, &common)
    }

    fn insert_raw(&mut self, x: usize) -> bool {
        let (w, b) = (x >> 6, x & 63);
        if (self.bits[w] >> b) & 1 == 1 {
            return false;
        }
        self.bits[w] |= 1 << b;
        true
    }
}

/// `⟨h, extra⟩`. Old elements only need right multiplication by the new
/// generators; new elements by all of them.
fn extend<G: GroupLike + ?Sized>(g: &G, h: &Subgroup, extra: &[usize]) -> Subgroup {
    let mut out = h.clone();
    let new_gens: Vec<usize> = extra.iter().copied().filter(|&x| !h.contains(x)).collect();
    if new_gens.is_empty() {
        return out;
    }
    out.gens.extend(new_gens.iter().copied());
    let mut fresh: Vec<usize> = Vec::new();
    for &x in &h.elems {
        for &s in &new_gens {
            let y = g.mul(x, s);
            if out.insert_raw(y) {
                fresh.push(y);
            }
        }
    }
    let all_gens = out.gens.clone();
    let mut head = 0;
    while head < fresh.len() {
        let x = fresh[head];
        for &s in &all_gens {
            let y = g.mul(x, s);
            if out.insert_raw(y) {
                fresh.push(y);
            }
        }
        head += 1;
    }
    out.elems.extend(fresh);
    out.elems.sort_unstable();
    out
}

/// Subgroup generated by `seeds`.
pub fn closure<G: GroupLike + ?Sized>(g: &G, seeds: &[usize]) -> Subgroup {
    let mut h = Subgroup::trivial(g.order());
    for &s in seeds {
        if !h.contains(s) {
            h = extend(g, &h, &[s]);
        }
    }
    h
}

fn make_normal<G: GroupLike + ?Sized>(g: &G, mut h: Subgroup) -> Subgroup {
    let mut k = 0;
    while k < h.gens.len() {
        let x = h.gens[k];
        for &s in g.generators() {
            let c = g.conj(x, s);
            if !h.contains(c) {
                h = extend(g, &h, &[c]);
            }
        }
        k += 1;
    }
    h
}

/// Smallest normal subgroup containing `seeds`.
pub fn normal_closure<G: GroupLike + ?Sized>(g: &G, seeds: &[usize]) -> Subgroup {
    make_normal(g, closure(g, seeds))
}

pub fn is_normal<G: GroupLike + ?Sized>(g: &G, h: &Subgroup) -> bool {
    h.gens
        .iter()
        .all(|&x| g.generators().iter().all(|&s| h.contains(g.conj(x, s))))
}

/// `[H, K]`. For normal `H` and `K` this is the normal closure of the
/// commutators of their generators; otherwise all element pairs are used.
pub fn commutator_subgroup<G: GroupLike + ?Sized>(g: &G, h: &Subgroup, k: &Subgroup) -> Subgroup {
    if is_normal(g, h) && is_normal(g, k) {
        let mut seeds = Vec::new();
        for &x in &h.gens {
            for &y in &k.gens {
                seeds.push(g.comm(x, y));
            }
        }
        normal_closure(g, &seeds)
    } else {
        let mut out = Subgroup::trivial(g.order());
        for &x in &h.elems {
            for &y in &k.elems {
                let c = g.comm(x, y);
                if !out.contains(c) {
                    out = extend(g, &out, &[c]);
                }
            }
        }
        out
    }
}

/// `H^k`: the subgroup generated by all k-th powers of elements of `H`.
pub fn power_subgroup<G: GroupLike + ?Sized>(g: &G, h: &Subgroup, k: u64) -> Subgroup {
    let mut out = Subgroup::trivial(g.order());
    for &x in &h.elems {
        let y = g.pow(x, k);
        if !out.contains(y) {
            out = extend(g, &out, &[y]);
        }
    }
    out
}

/// `HK`, computed as the closure of the union of generating sets; callers
/// use it for normal factors, where this is the product set.
pub fn product<G: GroupLike + ?Sized>(g: &G, h: &Subgroup, k: &Subgroup) -> Subgroup {
    if h.elems.len() >= k.elems.len() {
        extend(g, h, &k.gens)
    } else {
        extend(g, k, &h.gens)
    }
}
