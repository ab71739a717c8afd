use std::collections::{BTreeMap, VecDeque};

use rand::Rng;

use super::MultSystem;
use crate::error::{Error, Result};
use crate::fp::{BilinearMap, Fp};

/// Stream of rank-n systems over `𝔽_p` with `dim A_{1,n+1} = 1` and every
/// other `dim A_ij` in `1..=max_dim`.
///
/// The standard system comes first (when requested). After it, dimension
/// signatures are visited by their largest entry and then lexicographically,
/// and within a signature the pairing tensors run lexicographically over
/// the triples `(i,j,k)`. Only associative assignments are kept; the copy of
/// the standard system is skipped.
pub struct Catalog {
    field: Fp,
    n: usize,
    include_standard: bool,
    standard: Option<MultSystem>,
    signatures: Vec<Vec<usize>>,
    next_signature: usize,
    buffer: VecDeque<MultSystem>,
    started: bool,
}

impl Catalog {
    pub fn new(p: u32, n: usize, max_dim: usize) -> Result<Self> {
        Self::with_options(p, n, max_dim, true, None)
    }

    /// `max_total_dim` drops signatures whose `Σ dim A_ij` exceeds it, i.e.
    /// keeps systems with `|U(𝒜)| ≤ p^max_total_dim`.
    pub fn with_options(
        p: u32,
        n: usize,
        max_dim: usize,
        include_standard: bool,
        max_total_dim: Option<usize>,
    ) -> Result<Self> {
        let field = Fp::new(p)?;
        if n == 0 {
            return Err(Error::InvalidArgument("rank must be at least 1".into()));
        }
        if max_dim == 0 {
            return Err(Error::InvalidArgument("max_dim must be at least 1".into()));
        }
        let free = free_coords(n).len();
        let mut signatures = Vec::new();
        let mut sig = vec![1usize; free];
        'outer: loop {
            let total: usize = sig.iter().sum::<usize>() + 1;
            if max_total_dim.is_none_or(|m| total <= m) {
                signatures.push(sig.clone());
            }
            let mut pos = free;
            loop {
                if pos == 0 {
                    break 'outer;
                }
                pos -= 1;
                if sig[pos] < max_dim {
                    sig[pos] += 1;
                    sig[pos + 1..].iter_mut().for_each(|s| *s = 1);
                    continue 'outer;
                }
            }
        }
        signatures.sort_by(|a, b| {
            let ma = a.iter().max().copied().unwrap_or(1);
            let mb = b.iter().max().copied().unwrap_or(1);
            ma.cmp(&mb).then_with(|| a.cmp(b))
        });
        let standard = if include_standard {
            Some(MultSystem::standard(p, n)?)
        } else {
            None
        };
        Ok(Catalog {
            field,
            n,
            include_standard,
            standard,
            signatures,
            next_signature: 0,
            buffer: VecDeque::new(),
            started: false,
        })
    }

    /// Number of dimension signatures still to be expanded.
    pub fn remaining_signatures(&self) -> usize {
        self.signatures.len() - self.next_signature
    }

    fn expand(&mut self, sig: &[usize]) {
        let n = self.n;
        let mut dims = BTreeMap::new();
        for (&(i, j), &d) in free_coords(n).iter().zip(sig) {
            dims.insert((i, j), d);
        }
        dims.insert((1, n + 1), 1);
        let all_ones = sig.iter().all(|&d| d == 1);
        let search = Search::new(self.field, n, &dims);
        let skip_standard = self.include_standard && all_ones;
        let field = self.field;
        let shapes = search_shapes(n, &dims);
        let buffer = &mut self.buffer;
        search.run(|tensors| {
            if skip_standard && tensors.iter().all(|t| t.len() == 1 && t[0] == 1) {
                return;
            }
            let mut pairings = BTreeMap::new();
            for (&(key, shape), t) in shapes.iter().zip(tensors) {
                let m = BilinearMap::from_flat(field, shape, t.clone())
                    .expect("catalog tensor has the declared shape");
                pairings.insert(key, m);
            }
            let sys = MultSystem::new(field, n, dims.clone(), pairings)
                .expect("catalog search keeps only associative systems");
            buffer.push_back(sys);
        });
    }
}

impl Iterator for Catalog {
    type Item = MultSystem;

    fn next(&mut self) -> Option<MultSystem> {
        if !self.started {
            self.started = true;
            if let Some(s) = self.standard.take() {
                return Some(s);
            }
        }
        while self.buffer.is_empty() {
            if self.next_signature >= self.signatures.len() {
                return None;
            }
            let sig = self.signatures[self.next_signature].clone();
            self.next_signature += 1;
            self.expand(&sig);
        }
        self.buffer.pop_front()
    }
}

/// Coordinates other than `(1, n+1)`, in lexicographic order.
fn free_coords(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 1..=n + 1 {
        for j in i + 1..=n + 1 {
            if (i, j) != (1, n + 1) {
                out.push((i, j));
            }
        }
    }
    out
}

type Shape = ((usize, usize, usize), (usize, usize, usize));

fn search_shapes(n: usize, dims: &BTreeMap<(usize, usize), usize>) -> Vec<Shape> {
    let mut out = Vec::new();
    for i in 1..=n + 1 {
        for j in i + 1..=n + 1 {
            for k in j + 1..=n + 1 {
                out.push(((i, j, k), (dims[&(i, j)], dims[&(j, k)], dims[&(i, k)])));
            }
        }
    }
    out
}

/// Backtracking over the pairing tensors of one signature.
struct Search {
    field: Fp,
    shapes: Vec<Shape>,
    /// `checks[t]`: quadruples whose last triple (in search order) is `t`,
    /// as indices `(ijk, ikl, jkl, ijl)`.
    checks: Vec<Vec<[usize; 4]>>,
}

impl Search {
    fn new(field: Fp, n: usize, dims: &BTreeMap<(usize, usize), usize>) -> Self {
        let shapes = search_shapes(n, dims);
        let index: BTreeMap<(usize, usize, usize), usize> =
            shapes.iter().enumerate().map(|(t, s)| (s.0, t)).collect();
        let mut checks = vec![Vec::new(); shapes.len()];
        for i in 1..=n + 1 {
            for j in i + 1..=n + 1 {
                for k in j + 1..=n + 1 {
                    for l in k + 1..=n + 1 {
                        let q = [
                            index[&(i, j, k)],
                            index[&(i, k, l)],
                            index[&(j, k, l)],
                            index[&(i, j, l)],
                        ];
                        let last = *q.iter().max().unwrap();
                        checks[last].push(q);
                    }
                }
            }
        }
        Search {
            field,
            shapes,
            checks,
        }
    }

    fn run(&self, mut emit: impl FnMut(&[Vec<u32>])) {
        let mut tensors: Vec<Vec<u32>> = self
            .shapes
            .iter()
            .map(|&(_, (a, b, c))| vec![0u32; a * b * c])
            .collect();
        self.descend(0, &mut tensors, &mut emit);
    }

    fn descend(&self, t: usize, tensors: &mut Vec<Vec<u32>>, emit: &mut impl FnMut(&[Vec<u32>])) {
        if t == self.shapes.len() {
            emit(tensors);
            return;
        }
        let p = self.field.p();
        tensors[t].iter_mut().for_each(|x| *x = 0);
        loop {
            if self.checks[t].iter().all(|q| self.associative(tensors, q)) {
                self.descend(t + 1, tensors, emit);
            }
            // lexicographic successor, first entry most significant
            let tensor = &mut tensors[t];
            let mut pos = tensor.len();
            let mut carried_out = true;
            while pos > 0 {
                pos -= 1;
                tensor[pos] += 1;
                if tensor[pos] < p {
                    carried_out = false;
                    break;
                }
                tensor[pos] = 0;
            }
            if carried_out {
                return;
            }
        }
    }

    fn associative(&self, tensors: &[Vec<u32>], q: &[usize; 4]) -> bool {
        let f = self.field;
        let (ijk, ikl, jkl, ijl) = (&tensors[q[0]], &tensors[q[1]], &tensors[q[2]], &tensors[q[3]]);
        let (da, db, dik) = self.shapes[q[0]].1;
        let (_, dc, dout) = self.shapes[q[1]].1;
        let djl = self.shapes[q[2]].1 .2;
        for a in 0..da {
            for b in 0..db {
                for c in 0..dc {
                    for o in 0..dout {
                        let mut lhs = 0u32;
                        for m in 0..dik {
                            let x = ijk[(a * db + b) * dik + m];
                            if x != 0 {
                                lhs = f.add(lhs, f.mul(x, ikl[(m * dc + c) * dout + o]));
                            }
                        }
                        let mut rhs = 0u32;
                        for m in 0..djl {
                            let x = jkl[(b * dc + c) * djl + m];
                            if x != 0 {
                                rhs = f.add(rhs, f.mul(x, ijl[(a * djl + m) * dout + o]));
                            }
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
}

/// A random associative system: dimensions uniform in `1..=max_dim` (with
/// `dim A_{1,n+1} = 1`), each pairing zero with probability 1/2 and
/// otherwise uniform. Non-associative draws are rejected; after many
/// rejections the all-zero pairing assignment is returned.
pub fn random_system<R: Rng + ?Sized>(
    rng: &mut R,
    p: u32,
    n: usize,
    max_dim: usize,
) -> Result<MultSystem> {
    let field = Fp::new(p)?;
    if n == 0 || max_dim == 0 {
        return Err(Error::InvalidArgument("rank and max_dim must be positive".into()));
    }
    let mut dims = BTreeMap::new();
    for (i, j) in free_coords(n) {
        dims.insert((i, j), rng.random_range(1..=max_dim));
    }
    dims.insert((1, n + 1), 1);
    let shapes = search_shapes(n, &dims);
    for _ in 0..1000 {
        let mut pairings = BTreeMap::new();
        for &(key, (a, b, c)) in &shapes {
            if rng.random_bool(0.5) {
                continue;
            }
            let t = (0..a * b * c).map(|_| rng.random_range(0..p)).collect();
            pairings.insert(key, BilinearMap::from_flat(field, (a, b, c), t)?);
        }
        match MultSystem::new(field, n, dims.clone(), pairings) {
            Ok(sys) => return Ok(sys),
            Err(Error::InvalidSystem(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    MultSystem::new(field, n, dims, BTreeMap::new())
}
