//! Homomorphisms `G → U(𝒜)` and `G → Ū(𝒜)` and their enumeration.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp::{Fp, FpVector};
use crate::group::{FiniteGroup, GroupLike, Subgroup};
use crate::multsys::{Embedding, MultSystem, UElement, UGroup, VElement};

/// Default cap on candidate generator tuples examined per system.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Codomain of a representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    /// `U(𝒜)`.
    Full,
    /// `Ū(𝒜) = U(𝒜)/Z(𝒜)`.
    Bar,
}

impl Target {
    /// The implicit group of codes for this target.
    pub fn group(self, sys: &MultSystem) -> Result<UGroup> {
        match self {
            Target::Full => UGroup::full(sys),
            Target::Bar => UGroup::bar(sys),
        }
    }

    pub fn top_level(self, sys: &MultSystem) -> usize {
        match self {
            Target::Full => sys.rank(),
            Target::Bar => sys.rank() - 1,
        }
    }
}

/// A homomorphism from a finite group into `U(𝒜)` or `Ū(𝒜)`, stored as the
/// code (see [`UGroup`]) of the image of every element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    system: MultSystem,
    target: Target,
    generators: Vec<usize>,
    images: Vec<usize>,
}

impl Representation {
    /// Extends generator images along the spanning tree of `g` and checks
    /// every Cayley edge.
    pub fn from_generator_codes(
        g: &FiniteGroup,
        sys: &MultSystem,
        target: Target,
        u: &UGroup,
        generators: &[usize],
    ) -> Result<Self> {
        let images = extend_along_tree(g, u, generators, usize::MAX)
            .ok_or_else(|| Error::NotHomomorphism("a Cayley edge is violated".into()))?;
        Ok(Representation {
            system: sys.clone(),
            target,
            generators: generators.to_vec(),
            images,
        })
    }

    /// Same as [`Representation::from_generator_codes`] with explicit units.
    pub fn from_generator_elements(
        g: &FiniteGroup,
        sys: &MultSystem,
        target: Target,
        generators: &[UElement],
    ) -> Result<Self> {
        if generators.len() != g.generators().len() {
            return Err(Error::InvalidArgument(format!(
                "{} generator images for {} generators",
                generators.len(),
                g.generators().len()
            )));
        }
        let u = target.group(sys)?;
        let codes: Vec<usize> = generators.iter().map(|x| u.code_of(x)).collect();
        Self::from_generator_codes(g, sys, target, &u, &codes)
    }

    /// A representation given by the images of all elements. The map is
    /// checked on every pair.
    pub fn from_images(
        g: &FiniteGroup,
        sys: &MultSystem,
        target: Target,
        u: &UGroup,
        images: Vec<usize>,
    ) -> Result<Self> {
        if images.len() != g.order() || images[0] != 0 {
            return Err(Error::NotHomomorphism("bad image table".into()));
        }
        let rep = Representation {
            system: sys.clone(),
            target,
            generators: g.generators().iter().map(|&s| images[s]).collect(),
            images,
        };
        if !rep.is_multiplicative(g, u) {
            return Err(Error::NotHomomorphism("multiplication table check failed".into()));
        }
        Ok(rep)
    }

    /// The trivial representation.
    pub fn trivial(g: &FiniteGroup, sys: &MultSystem, target: Target) -> Self {
        Representation {
            system: sys.clone(),
            target,
            generators: vec![0; g.generators().len()],
            images: vec![0; g.order()],
        }
    }

    pub fn system(&self) -> &MultSystem {
        &self.system
    }

    pub fn target(&self) -> Target {
        self.target
    }

    pub fn generator_codes(&self) -> &[usize] {
        &self.generators
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn image_code(&self, x: usize) -> usize {
        self.images[x]
    }

    /// Flat coordinates of `ρ(x) - 1` (entries above the target level are 0).
    pub fn image_vector(&self, x: usize) -> FpVector {
        code_to_vector(self.system.field(), self.system.total_dim(), self.images[x])
    }

    pub fn image(&self, x: usize) -> UElement {
        UElement::from_v(VElement::from_vector(&self.system, self.image_vector(x)))
    }

    /// The `(i, j)` entry of `ρ(x)`.
    pub fn entry(&self, x: usize, i: usize, j: usize) -> FpVector {
        let v = self.image_vector(x);
        let r = self.system.range(i, j);
        v.slice(r.start, r.end)
    }

    /// Full multiplication-table check: `ρ(gh) = ρ(g)ρ(h)` for all pairs.
    pub fn is_multiplicative(&self, g: &FiniteGroup, u: &UGroup) -> bool {
        let n = g.order();
        self.images.len() == n
            && (0..n)
                .into_par_iter()
                .all(|a| (0..n).all(|b| self.images[g.mul(a, b)] == u.mul(self.images[a], self.images[b])))
    }

    pub fn kernel(&self, g: &FiniteGroup) -> Subgroup {
        let elems: Vec<usize> = (0..g.order()).filter(|&x| self.images[x] == 0).collect();
        Subgroup::from_elements(g, &elems)
    }

    pub fn is_trivial(&self) -> bool {
        self.images.iter().all(|&c| c == 0)
    }

    /// The composite `G → U(𝒜) → Ū(𝒜)`.
    pub fn project(&self) -> Representation {
        match self.target {
            Target::Bar => self.clone(),
            Target::Full => {
                let modulus = (self.system.p() as u64).pow(self.system.level_start(self.system.rank()) as u32);
                let cut = |c: &usize| (*c as u64 % modulus) as usize;
                Representation {
                    system: self.system.clone(),
                    target: Target::Bar,
                    generators: self.generators.iter().map(cut).collect(),
                    images: self.images.iter().map(cut).collect(),
                }
            }
        }
    }

    /// The composite with an embedding `U(𝒜̄) → U(𝒜)` of one rank higher.
    pub fn embed(&self, big: &MultSystem, e: &Embedding) -> Result<Representation> {
        if self.target != Target::Full || big.rank() != self.system.rank() + 1 {
            return Err(Error::InvalidArgument("embedding needs a U(A)-valued rep one rank down".into()));
        }
        let field = self.system.field();
        let len = self.system.total_dim();
        let map = |c: &usize| vector_to_code(&e.map_vector(&code_to_vector(field, len, *c)));
        Ok(Representation {
            system: big.clone(),
            target: Target::Full,
            generators: self.generators.iter().map(map).collect(),
            images: self.images.iter().map(map).collect(),
        })
    }

    /// Serializable form with generator images as flat entry vectors.
    pub fn to_record(&self) -> RepresentationRecord {
        let field = self.system.field();
        let len = self.system.total_dim();
        RepresentationRecord {
            system: self.system.clone(),
            target: self.target,
            generator_images: self
                .generators
                .iter()
                .map(|&c| code_to_vector(field, len, c).entries())
                .collect(),
        }
    }

    pub fn from_record(g: &FiniteGroup, record: &RepresentationRecord) -> Result<Self> {
        let sys = &record.system;
        let u = record.target.group(sys)?;
        let field = sys.field();
        let mut codes = Vec::with_capacity(record.generator_images.len());
        for v in &record.generator_images {
            if v.len() != sys.total_dim() {
                return Err(Error::Parse("generator image of wrong length".into()));
            }
            codes.push(vector_to_code(&FpVector::from_entries(field, v)));
        }
        if codes.len() != g.generators().len() {
            return Err(Error::Parse("wrong number of generator images".into()));
        }
        Self::from_generator_codes(g, sys, record.target, &u, &codes)
    }
}

/// JSON form of a [`Representation`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationRecord {
    pub system: MultSystem,
    pub target: Target,
    pub generator_images: Vec<Vec<u32>>,
}

/// Flat coordinates of a code (digit `k` is coordinate `k`).
pub fn code_to_vector(field: Fp, len: usize, code: usize) -> FpVector {
    let p = field.p() as u64;
    let mut v = FpVector::zeros(field, len);
    let mut c = code as u64;
    let mut k = 0;
    while c > 0 {
        v.set(k, (c % p) as u32);
        c /= p;
        k += 1;
    }
    v
}

/// Inverse of [`code_to_vector`].
pub fn vector_to_code(v: &FpVector) -> usize {
    let p = v.field().p() as u64;
    let mut code = 0u64;
    for k in (0..v.len()).rev() {
        code = code * p + v.get(k) as u64;
    }
    code as usize
}

/// Images of all elements from generator images, reduced modulo
/// `U_{n,level+1}`, or `None` if some Cayley edge disagrees.
fn extend_along_tree(
    g: &FiniteGroup,
    u: &UGroup,
    generators: &[usize],
    level: usize,
) -> Option<Vec<usize>> {
    let cut = |c: usize| if level >= u.top_level() { c } else { u.truncate(c, level) };
    let tree = g.tree();
    let mut images = vec![0usize; g.order()];
    for x in 1..g.order() {
        let (parent, s) = tree[x];
        images[x] = cut(u.mul(images[parent], generators[s]));
    }
    for x in 0..g.order() {
        for (s, &gen) in g.generators().iter().enumerate() {
            if images[g.mul(x, gen)] != cut(u.mul(images[x], generators[s])) {
                return None;
            }
        }
    }
    Some(images)
}

/// All homomorphisms from `g` into one target, by generator images.
#[derive(Clone, Debug)]
pub struct HomEnumeration {
    /// Generator-image codes, in lexicographic order of the digit tuples.
    pub homs: Vec<Vec<usize>>,
    /// Candidate tuples examined across all levels.
    pub candidates: u64,
    /// Set when the budget cut the search short; `homs` is then partial.
    pub truncated: bool,
}

/// Enumerates `Hom(G, U(𝒜))` (or `Ū(𝒜)`) level by level: the images modulo
/// `U_{n,d+1}` must already define a homomorphism into `U/U_{n,d+1}` before
/// the level-`d+1` digits are chosen.
pub fn enumerate_homs(g: &FiniteGroup, u: &UGroup, budget: u64) -> HomEnumeration {
    let r = g.generators().len();
    let p = u.prime() as u64;
    let mut frontier: Vec<Vec<usize>> = vec![vec![0; r]];
    let mut candidates = 0u64;
    let mut truncated = false;
    for d in 1..=u.top_level() {
        let start = u.level_start(d);
        let width = u.level_start(d + 1) - start;
        if width == 0 {
            continue;
        }
        let per_gen = p.checked_pow(width as u32);
        let per_partial = per_gen.and_then(|x| x.checked_pow(r as u32));
        let remaining = budget.saturating_sub(candidates);
        let Some(per_partial) = per_partial.filter(|&x| x <= remaining) else {
            truncated = true;
            frontier.clear();
            break;
        };
        let fits = (remaining / per_partial.max(1)) as usize;
        if frontier.len() > fits {
            frontier.truncate(fits);
            truncated = true;
        }
        candidates += frontier.len() as u64 * per_partial;
        let per_gen = per_gen.unwrap_or(1);
        let step = p.pow(start as u32);
        frontier = frontier
            .par_iter()
            .map(|partial| {
                let mut out = Vec::new();
                let mut cand = partial.clone();
                for t in 0..per_partial {
                    let mut rest = t;
                    for j in 0..r {
                        cand[j] = partial[j] + ((rest % per_gen) * step) as usize;
                        rest /= per_gen;
                    }
                    if extend_along_tree(g, u, &cand, d).is_some() {
                        out.push(cand.clone());
                    }
                }
                out
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect();
        if truncated {
            break;
        }
    }
    if truncated && u.top_level() > 0 {
        // tuples from an interrupted level are kept only if already complete
        frontier.retain(|c| extend_along_tree(g, u, c, usize::MAX).is_some());
    }
    HomEnumeration {
        homs: frontier,
        candidates,
        truncated,
    }
}

/// All representations of `g` into the given target of `sys`.
pub fn enumerate_reps(
    g: &FiniteGroup,
    sys: &MultSystem,
    target: Target,
    budget: u64,
) -> Result<(Vec<Representation>, HomEnumeration)> {
    let u = target.group(sys)?;
    let e = enumerate_homs(g, &u, budget);
    let reps = e
        .homs
        .par_iter()
        .map(|gens| Representation::from_generator_codes(g, sys, target, &u, gens))
        .collect::<Result<Vec<_>>>()?;
    Ok((reps, e))
}
