use std::collections::HashMap;

use super::{commutator_subgroup, power_subgroup, product, GroupLike, Subgroup};
use crate::error::{Error, Result};
use crate::fp::{Fp, FpVector};

/// A descending chain `terms[0] = G_(1) ⊇ terms[1] = G_(2) ⊇ …` ending in
/// the trivial subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    terms: Vec<Subgroup>,
}

impl Filtration {
    pub fn new(terms: Vec<Subgroup>) -> Self {
        assert!(!terms.is_empty(), "a filtration has at least one term");
        assert!(terms.last().unwrap().is_trivial(), "a filtration ends at 1");
        Filtration { terms }
    }

    /// `G_(k)` for `k ≥ 1`; indices past the end give the trivial term.
    pub fn term(&self, k: usize) -> &Subgroup {
        assert!(k >= 1, "filtration terms are indexed from 1");
        &self.terms[(k - 1).min(self.terms.len() - 1)]
    }

    pub fn terms(&self) -> &[Subgroup] {
        &self.terms
    }

    /// Number of stored terms, the last being trivial.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn orders(&self) -> Vec<usize> {
        self.terms.iter().map(|t| t.order()).collect()
    }

    /// Smallest `k` with `x ∉ G_(k+1)`, i.e. the depth of `x`; `None` for
    /// the identity.
    pub fn depth(&self, x: usize) -> Option<usize> {
        if x == 0 {
            return None;
        }
        (1..=self.terms.len()).find(|&k| !self.term(k + 1).contains(x))
    }
}

/// `G_1 = G`, `G_{i+1} = [G_i, G]`, until the trivial group.
pub fn lower_central_series<G: GroupLike + ?Sized>(g: &G) -> Vec<Subgroup> {
    let whole = Subgroup::whole(g);
    let mut series = vec![whole.clone()];
    while !series.last().unwrap().is_trivial() {
        let next = commutator_subgroup(g, series.last().unwrap(), &whole);
        if next == *series.last().unwrap() {
            panic!("lower central series stabilised above 1: group is not nilpotent");
        }
        series.push(next);
    }
    series
}

fn step_guard(n: usize, order: usize) {
    assert!(
        n <= 2 * order + 8,
        "filtration failed to reach 1: group is not a p-group"
    );
}

/// `G_(n) = G_(⌈n/p⌉)^p · Π_{i+j=n} [G_(i), G_(j)]`, term by term.
pub fn zassenhaus_recursive<G: GroupLike + ?Sized>(g: &G) -> Filtration {
    let p = g.prime() as usize;
    let mut terms = vec![Subgroup::whole(g)];
    let mut n = 2;
    while !terms.last().unwrap().is_trivial() {
        step_guard(n, g.order());
        let mut t = power_subgroup(g, &terms[n.div_ceil(p) - 1], p as u64);
        for i in 1..=n / 2 {
            let c = commutator_subgroup(g, &terms[i - 1], &terms[n - i - 1]);
            t = product(g, &t, &c);
        }
        terms.push(t);
        n += 1;
    }
    Filtration::new(terms)
}

/// `G_(n) = Π_{i p^k ≥ n} G_i^{p^k}` with `G_i` the lower central series.
/// Only the smallest admissible `i` matters for each `k`.
pub fn zassenhaus_lazard<G: GroupLike + ?Sized>(g: &G) -> Filtration {
    let p = g.prime() as usize;
    let lcs = lower_central_series(g);
    let lcs_term = |i: usize| &lcs[(i - 1).min(lcs.len() - 1)];
    let mut powers: HashMap<(usize, u32), Subgroup> = HashMap::new();
    let mut terms = vec![Subgroup::whole(g)];
    let mut n = 2;
    while !terms.last().unwrap().is_trivial() {
        step_guard(n, g.order());
        let mut t = Subgroup::trivial(g.order());
        let mut k = 0u32;
        loop {
            let pk = p.pow(k);
            let i = n.div_ceil(pk);
            let key = (i.min(lcs.len()), k);
            let pw = powers
                .entry(key)
                .or_insert_with(|| power_subgroup(g, lcs_term(i), pk as u64))
                .clone();
            t = product(g, &t, &pw);
            // Once i = 1 larger k only gives smaller G^{p^k}.
            if i == 1 {
                break;
            }
            k += 1;
        }
        terms.push(t);
        n += 1;
    }
    Filtration::new(terms)
}

/// An 𝔽_p-basis of an elementary abelian section `H/K` together with the
/// coordinates of every element of `H`.
#[derive(Clone, Debug)]
pub struct QuotientBasis {
    field: Fp,
    basis: Vec<usize>,
    coords: HashMap<usize, FpVector>,
}

impl QuotientBasis {
    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `x`, or `None` if `x ∉ H`.
    pub fn coords(&self, x: usize) -> Option<&FpVector> {
        self.coords.get(&x)
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    /// Some element of `H` with the given coordinates.
    pub fn element<G: GroupLike + ?Sized>(&self, g: &G, v: &FpVector) -> usize {
        let mut x = g.identity();
        for (t, &b) in self.basis.iter().enumerate() {
            x = g.mul(x, g.pow(b, v.get(t) as u64));
        }
        x
    }
}

/// Basis of `H/K` for `K ⊴ H` with elementary abelian quotient. Elements of
/// `seeds` lying in `H` are tried first, then `H` in index order.
pub fn elementary_quotient_basis<G: GroupLike + ?Sized>(
    g: &G,
    h: &Subgroup,
    k: &Subgroup,
    seeds: &[usize],
) -> Result<QuotientBasis> {
    let p = g.prime();
    let field = Fp::new(p)?;
    if !k.is_subgroup_of(h) {
        return Err(Error::InvalidArgument("K is not contained in H".into()));
    }
    for &x in k.generators() {
        for &s in h.generators() {
            if !k.contains(g.conj(x, s)) {
                return Err(Error::NotNormal);
            }
        }
    }
    for &a in h.generators() {
        if !k.contains(g.pow(a, p as u64)) {
            return Err(Error::NotElementary);
        }
        for &b in h.generators() {
            if !k.contains(g.comm(a, b)) {
                return Err(Error::NotElementary);
            }
        }
    }
    let mut dim = 0;
    let mut ratio = h.order() / k.order();
    while ratio > 1 {
        ratio /= p as usize;
        dim += 1;
    }
    let mut coords: HashMap<usize, FpVector> = HashMap::with_capacity(h.order());
    for &x in k.elements() {
        coords.insert(x, FpVector::zeros(field, dim));
    }
    let mut basis = Vec::with_capacity(dim);
    let candidates = seeds
        .iter()
        .copied()
        .filter(|&x| h.contains(x))
        .chain(h.elements().iter().copied());
    for x in candidates {
        if basis.len() == dim {
            break;
        }
        if coords.contains_key(&x) {
            continue;
        }
        let t = basis.len();
        basis.push(x);
        let layer: Vec<(usize, FpVector)> = coords.iter().map(|(&y, c)| (y, c.clone())).collect();
        let mut xe = g.identity();
        for e in 1..p {
            xe = g.mul(xe, x);
            for (y, c) in &layer {
                let mut c2 = c.clone();
                c2.set(t, e);
                coords.insert(g.mul(*y, xe), c2);
            }
        }
    }
    debug_assert_eq!(coords.len(), h.order());
    Ok(QuotientBasis {
        field,
        basis,
        coords,
    })
}
