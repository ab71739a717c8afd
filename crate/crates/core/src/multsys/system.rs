use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp::{BilinearMap, Fp, FpVector};

/// A rank-n multiplicative system: spaces `A_ij = 𝔽_p^{dims(i,j)}` for
/// `1 ≤ i < j ≤ n+1` with associative pairings `μ_ijk: A_ij ⊗ A_jk → A_ik`.
///
/// Coordinates `(i, j)` are laid out by level `j - i` and then by `i`; an
/// element of `V(𝒜)` is one flat vector of all coordinates in that order.
#[derive(Clone, Debug)]
pub struct MultSystem {
    field: Fp,
    n: usize,
    dims: Vec<usize>,
    pairings: BTreeMap<(usize, usize, usize), BilinearMap>,
    coords: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    level_start: Vec<usize>,
    terms: Vec<Term>,
}

/// One summand of the product: `out[i,j] += μ(a[i,k] ⊗ b[k,j])`.
#[derive(Clone, Debug)]
pub(crate) struct Term {
    pub left: usize,
    pub right: usize,
    pub out: usize,
    pub key: (usize, usize, usize),
}

impl PartialEq for MultSystem {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.n == other.n
            && self.dims == other.dims
            && self.pairings == other.pairings
    }
}

impl Eq for MultSystem {}

impl std::hash::Hash for MultSystem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.hash(state);
        self.n.hash(state);
        self.dims.hash(state);
        self.pairings.hash(state);
    }
}

/// Position of `(i, j)` in the level-major coordinate order.
pub(crate) fn coord_id(n: usize, i: usize, j: usize) -> usize {
    let level = j - i;
    let before: usize = (1..level).map(|l| n + 1 - l).sum();
    before + i - 1
}

fn all_coords(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for level in 1..=n {
        for i in 1..=n + 1 - level {
            out.push((i, i + level));
        }
    }
    out
}

impl MultSystem {
    /// Builds a system, filling absent pairings with zero maps, and checks
    /// associativity on all basis triples.
    pub fn new(
        field: Fp,
        n: usize,
        dims: BTreeMap<(usize, usize), usize>,
        pairings: BTreeMap<(usize, usize, usize), BilinearMap>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSystem("rank must be at least 1".into()));
        }
        let coords = all_coords(n);
        let mut dim_vec = vec![0usize; coords.len()];
        for (&(i, j), &d) in &dims {
            if !(1 <= i && i < j && j <= n + 1) {
                return Err(Error::InvalidSystem(format!("space ({i},{j}) out of range")));
            }
            dim_vec[coord_id(n, i, j)] = d;
        }
        for &(i, j) in &coords {
            if !dims.contains_key(&(i, j)) {
                return Err(Error::InvalidSystem(format!("missing dimension of A_{{{i},{j}}}")));
            }
        }
        let dim_of = |i: usize, j: usize| dim_vec[coord_id(n, i, j)];
        let mut full = BTreeMap::new();
        for i in 1..=n + 1 {
            for j in i + 1..=n + 1 {
                for k in j + 1..=n + 1 {
                    let shape = (dim_of(i, j), dim_of(j, k), dim_of(i, k));
                    let m = match pairings.get(&(i, j, k)) {
                        Some(m) => {
                            if m.dims() != shape || m.field() != field {
                                return Err(Error::InvalidSystem(format!(
                                    "pairing ({i},{j},{k}) has shape {:?}, expected {shape:?}",
                                    m.dims()
                                )));
                            }
                            m.clone()
                        }
                        None => BilinearMap::zero(field, shape.0, shape.1, shape.2),
                    };
                    full.insert((i, j, k), m);
                }
            }
        }
        for key in pairings.keys() {
            if !full.contains_key(key) {
                return Err(Error::InvalidSystem(format!("pairing {key:?} out of range")));
            }
        }
        let mut offsets = Vec::with_capacity(coords.len());
        let mut level_start = vec![0usize; n + 2];
        let mut acc = 0;
        for (c, &(i, j)) in coords.iter().enumerate() {
            if i == 1 {
                level_start[j - i] = acc;
            }
            offsets.push(acc);
            acc += dim_vec[c];
        }
        level_start[n + 1] = acc;
        let mut terms = Vec::new();
        for (&(i, k, j), m) in &full {
            if !m.is_zero() {
                terms.push(Term {
                    left: coord_id(n, i, k),
                    right: coord_id(n, k, j),
                    out: coord_id(n, i, j),
                    key: (i, k, j),
                });
            }
        }
        let sys = MultSystem {
            field,
            n,
            dims: dim_vec,
            pairings: full,
            coords,
            offsets,
            level_start,
            terms,
        };
        if let Some(q) = sys.associativity_violation() {
            return Err(Error::InvalidSystem(format!(
                "pairings are not associative on {q:?}"
            )));
        }
        Ok(sys)
    }

    /// All spaces `𝔽_p`, all pairings the field multiplication; `U(𝒜)` is
    /// then the unitriangular `(n+1)×(n+1)` matrix group.
    pub fn standard(p: u32, n: usize) -> Result<Self> {
        let field = Fp::new(p)?;
        let mut dims = BTreeMap::new();
        for (i, j) in all_coords(n) {
            dims.insert((i, j), 1);
        }
        let mut pairings = BTreeMap::new();
        for i in 1..=n + 1 {
            for j in i + 1..=n + 1 {
                for k in j + 1..=n + 1 {
                    pairings.insert((i, j, k), BilinearMap::field_product(field));
                }
            }
        }
        Self::new(field, n, dims, pairings)
    }

    /// First quadruple `(i, j, k, l)` where associativity fails.
    pub fn associativity_violation(&self) -> Option<(usize, usize, usize, usize)> {
        let n1 = self.n + 1;
        for i in 1..=n1 {
            for j in i + 1..=n1 {
                for k in j + 1..=n1 {
                    for l in k + 1..=n1 {
                        if !self.associative_at(i, j, k, l) {
                            return Some((i, j, k, l));
                        }
                    }
                }
            }
        }
        None
    }

    fn associative_at(&self, i: usize, j: usize, k: usize, l: usize) -> bool {
        let (ijk, ikl) = (&self.pairings[&(i, j, k)], &self.pairings[&(i, k, l)]);
        let (jkl, ijl) = (&self.pairings[&(j, k, l)], &self.pairings[&(i, j, l)]);
        tensor_associative(ijk, ikl, jkl, ijl, self.field)
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn dim(&self, i: usize, j: usize) -> usize {
        self.dims[coord_id(self.n, i, j)]
    }

    pub fn pairing(&self, i: usize, j: usize, k: usize) -> &BilinearMap {
        &self.pairings[&(i, j, k)]
    }

    pub fn pairings(&self) -> &BTreeMap<(usize, usize, usize), BilinearMap> {
        &self.pairings
    }

    pub fn dims_map(&self) -> BTreeMap<(usize, usize), usize> {
        self.coords
            .iter()
            .enumerate()
            .map(|(c, &ij)| (ij, self.dims[c]))
            .collect()
    }

    /// Total dimension `Σ dim A_ij`.
    pub fn total_dim(&self) -> usize {
        self.level_start[self.n + 1]
    }

    /// Coordinates in layout order.
    pub fn coords(&self) -> &[(usize, usize)] {
        &self.coords
    }

    /// Flat index range of `A_ij` inside an element vector.
    pub fn range(&self, i: usize, j: usize) -> std::ops::Range<usize> {
        let c = coord_id(self.n, i, j);
        self.offsets[c]..self.offsets[c] + self.dims[c]
    }

    pub(crate) fn coord_range(&self, c: usize) -> std::ops::Range<usize> {
        self.offsets[c]..self.offsets[c] + self.dims[c]
    }

    /// Flat index where level `d` starts (`d = n+1` gives the total).
    pub fn level_start(&self, d: usize) -> usize {
        self.level_start[d.clamp(1, self.n + 1)]
    }

    /// Level `j - i` of the coordinate holding flat index `x`.
    pub fn level_of_index(&self, x: usize) -> usize {
        (1..=self.n).rev().find(|&d| self.level_start[d] <= x).unwrap_or(1)
    }

    pub(crate) fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Adds `A_{i,n+1} = 𝔽_p` with zero pairings into the new column.
    pub fn embed_lower_rank(&self) -> Result<(MultSystem, Embedding)> {
        let n = self.n + 1;
        let mut dims = self.dims_map();
        for i in 1..=n {
            dims.insert((i, n + 1), 1);
        }
        let pairings = self.pairings.clone();
        let big = MultSystem::new(self.field, n, dims, pairings)?;
        let mut map = Vec::with_capacity(self.total_dim());
        for &(i, j) in &self.coords {
            map.extend(big.range(i, j));
        }
        let target_dim = big.total_dim();
        Ok((big, Embedding { map, target_dim }))
    }
}

/// Injection `U(𝒜̄) → U(𝒜)` padding the new column with zeros.
#[derive(Clone, Debug)]
pub struct Embedding {
    /// `map[x]` is the flat index in the big system of small index `x`.
    map: Vec<usize>,
    target_dim: usize,
}

impl Embedding {
    pub fn map_vector(&self, v: &FpVector) -> FpVector {
        let mut out = FpVector::zeros(v.field(), self.target_dim);
        for x in v.support() {
            out.set(self.map[x], v.get(x));
        }
        out
    }

    pub fn index_map(&self) -> &[usize] {
        &self.map
    }
}

/// `μ_ikl(μ_ijk(a⊗b)⊗c) = μ_ijl(a⊗μ_jkl(b⊗c))` on all basis triples.
pub(crate) fn tensor_associative(
    ijk: &BilinearMap,
    ikl: &BilinearMap,
    jkl: &BilinearMap,
    ijl: &BilinearMap,
    f: Fp,
) -> bool {
    let (da, db, dik) = ijk.dims();
    let (_, dc, dout) = ikl.dims();
    let djl = jkl.dims().2;
    for a in 0..da {
        for b in 0..db {
            for c in 0..dc {
                for o in 0..dout {
                    let mut lhs = 0u32;
                    for m in 0..dik {
                        lhs = f.add(lhs, f.mul(ijk.get(a, b, m), ikl.get(m, c, o)));
                    }
                    let mut rhs = 0u32;
                    for m in 0..djl {
                        rhs = f.add(rhs, f.mul(jkl.get(b, c, m), ijl.get(a, m, o)));
                    }
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemJson {
    p: u32,
    n: usize,
    dims: BTreeMap<String, usize>,
    pairings: BTreeMap<String, Vec<Vec<Vec<u32>>>>,
}

fn parse_key<const K: usize>(s: &str) -> Result<[usize; K]> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Parse(format!("bad index key '{s}'")))?;
    parts
        .try_into()
        .map_err(|_| Error::Parse(format!("bad index key '{s}'")))
}

impl Serialize for MultSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let dims = self
            .dims_map()
            .into_iter()
            .map(|((i, j), d)| (format!("{i},{j}"), d))
            .collect();
        let pairings = self
            .pairings
            .iter()
            .map(|(&(i, j, k), m)| (format!("{i},{j},{k}"), m.to_nested()))
            .collect();
        SystemJson {
            p: self.p(),
            n: self.n,
            dims,
            pairings,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = SystemJson::deserialize(d)?;
        MultSystem::from_json_parts(raw).map_err(D::Error::custom)
    }
}

impl MultSystem {
    fn from_json_parts(raw: SystemJson) -> Result<Self> {
        let field = Fp::new(raw.p)?;
        let mut dims = BTreeMap::new();
        for (k, d) in raw.dims {
            let [i, j] = parse_key::<2>(&k)?;
            dims.insert((i, j), d);
        }
        let mut pairings = BTreeMap::new();
        for (k, t) in raw.pairings {
            let [i, j, l] = parse_key::<3>(&k)?;
            let get = |a: usize, b: usize| {
                dims.get(&(a, b))
                    .copied()
                    .ok_or_else(|| Error::InvalidSystem(format!("pairing {k} references unknown space")))
            };
            let shape = (get(i, j)?, get(j, l)?, get(i, l)?);
            pairings.insert((i, j, l), BilinearMap::from_nested(field, shape, &t)?);
        }
        MultSystem::new(field, raw.n, dims, pairings)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("system serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SystemJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json_parts(raw)
    }
}
