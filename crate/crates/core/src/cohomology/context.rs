use std::sync::OnceLock;

use super::cochain::{has_coboundary, Cochain1, Cochain2, MAX_COCHAIN2_ENTRIES};
use crate::error::{Error, Result};
use crate::fp::{Echelon, Fp, FpVector, Subspace};
use crate::group::GroupLike;

/// Largest group order for which the cocycle space `Z²` is computed.
pub const MAX_H2_ORDER: usize = 256;

/// Mod-p cohomology of one finite group in degrees 1 and 2.
///
/// A normalized 2-cocycle is determined by its values `c(x, s)` on pairs
/// (element, generator): `c(g, hs) = c(g, h) + c(gh, s) − c(h, s)`. Those
/// values ("edge coordinates", index `x·d + s`) are the working coordinates
/// for coboundaries, classes and `Z²`.
pub struct Cohomology<G: GroupLike> {
    group: G,
    field: Fp,
    gens: Vec<usize>,
    /// BFS order from the identity over right multiplication by `gens`.
    bfs: Vec<usize>,
    /// `parent[h] = (h', s)` with `h = h'·gens[s]`.
    parent: Vec<(usize, usize)>,
    /// Edge vectors of `∂δ_y`, tagged by `y`.
    b2: Echelon,
    h1: Vec<Cochain1>,
    z2: OnceLock<Vec<FpVector>>,
    h2: OnceLock<H2Data>,
}

struct H2Data {
    reps: Vec<FpVector>,
    residuals: Echelon,
}

impl<G: GroupLike> Cohomology<G> {
    pub fn new(group: G) -> Result<Self> {
        let field = Fp::new(group.prime())?;
        let n = group.order();
        let mut gens: Vec<usize> = Vec::new();
        for &s in group.generators() {
            if s != group.identity() && !gens.contains(&s) {
                gens.push(s);
            }
        }
        let d = gens.len();
        let mut parent = vec![(usize::MAX, usize::MAX); n];
        parent[0] = (0, 0);
        let mut bfs = vec![0usize];
        let mut head = 0;
        while head < bfs.len() {
            let x = bfs[head];
            head += 1;
            for (si, &s) in gens.iter().enumerate() {
                let y = group.mul(x, s);
                if parent[y].0 == usize::MAX {
                    parent[y] = (x, si);
                    bfs.push(y);
                }
            }
        }
        if bfs.len() != n {
            return Err(Error::InvariantViolation(
                "generators do not generate the group".into(),
            ));
        }
        let dim = n * d;
        let mut b2 = Echelon::tracked(field, dim, n);
        let mut h1 = Vec::new();
        for y in 1..n {
            let mut v = FpVector::zeros(field, dim);
            for (si, &s) in gens.iter().enumerate() {
                v.add_at(y * d + si, 1);
                if s == y {
                    for x in 0..n {
                        v.add_at(x * d + si, 1);
                    }
                }
                let x = group.mul(y, group.inv(s));
                v.add_at(x * d + si, field.neg(1));
            }
            if let Some(rel) = b2.insert_tagged(&v, y) {
                // ∂(δ_y − Σ rel·δ) = 0: a homomorphism
                let mut a = rel.negated();
                a.add_at(y, 1);
                h1.push(Cochain1::from_scalars(field, a.entries()));
            }
        }
        Ok(Cohomology {
            group,
            field,
            gens,
            bfs,
            parent,
            b2,
            h1,
            z2: OnceLock::new(),
            h2: OnceLock::new(),
        })
    }

    pub fn group(&self) -> &G {
        &self.group
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    /// Generators used for edge coordinates (duplicates and 1 removed).
    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    /// Length of edge-coordinate vectors.
    pub fn edge_dim(&self) -> usize {
        self.group.order() * self.gens.len()
    }

    /// Basis of `H¹(G, 𝔽_p) = Hom(G, 𝔽_p)`.
    pub fn h1(&self) -> &[Cochain1] {
        &self.h1
    }

    pub fn h1_dim(&self) -> usize {
        self.h1.len()
    }

    /// Coordinates of a homomorphism: its values on the generators.
    pub fn hom_coords(&self, a: &Cochain1) -> FpVector {
        assert_eq!(a.cod(), 1);
        let v: Vec<u32> = self.gens.iter().map(|&s| a.value(s, 0)).collect();
        FpVector::from_entries(self.field, &v)
    }

    /// `H¹` as a subspace of generator-value space.
    pub fn h1_subspace(&self) -> Subspace {
        let vs: Vec<FpVector> = self.h1.iter().map(|a| self.hom_coords(a)).collect();
        Subspace::span(self.field, self.gens.len(), &vs)
    }

    /// The homomorphism with given generator values, if one exists.
    pub fn hom_from_coords(&self, v: &FpVector) -> Option<Cochain1> {
        let n = self.group.order();
        let mut vals = vec![0u32; n];
        for &y in &self.bfs[1..] {
            let (x, s) = self.parent[y];
            vals[y] = self.field.add(vals[x], v.get(s));
        }
        let a = Cochain1::from_scalars(self.field, vals);
        a.is_homomorphism(&self.group).then_some(a)
    }

    /// Edge coordinates of component `k` of a 2-cochain.
    pub fn edge_vector(&self, c: &Cochain2, k: usize) -> FpVector {
        let d = self.gens.len();
        let mut v = FpVector::zeros(self.field, self.edge_dim());
        for x in 0..self.group.order() {
            for (si, &s) in self.gens.iter().enumerate() {
                let val = c.value(x, s, k);
                if val != 0 {
                    v.set(x * d + si, val);
                }
            }
        }
        v
    }

    /// Edge coordinates of `c ∘ (π × π)` without materializing it.
    pub fn inflated_edge_vector(&self, c: &Cochain2, projection: &[usize], k: usize) -> FpVector {
        let d = self.gens.len();
        let mut v = FpVector::zeros(self.field, self.edge_dim());
        for x in 0..self.group.order() {
            for (si, &s) in self.gens.iter().enumerate() {
                let val = c.value(projection[x], projection[s], k);
                if val != 0 {
                    v.set(x * d + si, val);
                }
            }
        }
        v
    }

    /// Canonical representative of the class of a cocycle modulo `B²`
    /// (all coordinates concatenated). Two cocycles are cohomologous iff
    /// their residuals agree.
    pub fn class_residual(&self, c: &Cochain2) -> FpVector {
        let mut out = FpVector::zeros(self.field, 0);
        for k in 0..c.cod() {
            out = out.concat(&self.b2.reduce(&self.edge_vector(c, k)));
        }
        out
    }

    /// Residual of the inflation of a cocycle on a quotient.
    pub fn inflated_residual(&self, c: &Cochain2, projection: &[usize]) -> FpVector {
        let mut out = FpVector::zeros(self.field, 0);
        for k in 0..c.cod() {
            out = out.concat(&self.b2.reduce(&self.inflated_edge_vector(c, projection, k)));
        }
        out
    }

    /// Some `a` with `∂a = c` (free choices zero), or `None` if `c` is not a
    /// coboundary. The answer is verified on all pairs.
    pub fn solve_coboundary(&self, c: &Cochain2) -> Option<Cochain1> {
        let n = self.group.order();
        let mut parts = Vec::with_capacity(c.cod());
        for k in 0..c.cod() {
            let (res, comb) = self.b2.reduce_tracked(&self.edge_vector(c, k));
            if !res.is_zero() {
                return None;
            }
            let mut vals = comb.entries();
            vals[0] = 0;
            parts.push(Cochain1::from_scalars(self.field, vals));
        }
        let a = Cochain1::from_components(self.field, n, &parts);
        has_coboundary(&self.group, &a, c).then_some(a)
    }

    pub fn is_coboundary(&self, c: &Cochain2) -> bool {
        self.solve_coboundary(c).is_some()
    }

    /// Edge-coordinate basis of `Z²(G, 𝔽_p)`.
    pub fn z2_basis(&self) -> Result<&[FpVector]> {
        let n = self.group.order();
        if n > MAX_H2_ORDER || n * n > MAX_COCHAIN2_ENTRIES {
            return Err(Error::TooLarge(format!("H² of a group of order {n}")));
        }
        Ok(self.z2.get_or_init(|| self.compute_z2()))
    }

    fn compute_z2(&self) -> Vec<FpVector> {
        let f = self.field;
        let n = self.group.order();
        let d = self.gens.len();
        let dim = n * d;
        let mut constraints = Echelon::new(f, dim);
        for si in 0..d {
            constraints.insert(&FpVector::unit(f, dim, si));
        }
        let mut expr: Vec<FpVector> = vec![FpVector::zeros(f, dim); n];
        for g in 1..n {
            // expr[h] = c(g, h) in terms of the edge unknowns
            expr[0] = FpVector::zeros(f, dim);
            for &h in &self.bfs[1..] {
                let (h0, s) = self.parent[h];
                let mut e = expr[h0].clone();
                e.add_at(self.group.mul(g, h0) * d + s, 1);
                e.add_at(h0 * d + s, f.neg(1));
                expr[h] = e;
            }
            for h0 in 0..n {
                for (si, &s) in self.gens.iter().enumerate() {
                    let h = self.group.mul(h0, s);
                    if self.parent[h] == (h0, si) {
                        continue;
                    }
                    let mut e = expr[h].clone();
                    e.sub_assign(&expr[h0]);
                    e.add_at(self.group.mul(g, h0) * d + si, f.neg(1));
                    e.add_at(h0 * d + si, 1);
                    if !e.is_zero() {
                        constraints.insert(&e);
                    }
                }
            }
        }
        constraints.kernel_basis()
    }

    /// The scalar cocycle with the given edge coordinates.
    pub fn cocycle_from_edges(&self, u: &FpVector) -> Result<Cochain2> {
        let f = self.field;
        let n = self.group.order();
        let d = self.gens.len();
        let mut c = Cochain2::zero(f, n, 1)?;
        for g in 0..n {
            for &h in &self.bfs[1..] {
                let (h0, s) = self.parent[h];
                let v = f.add(
                    c.value(g, h0, 0),
                    f.sub(u.get(self.group.mul(g, h0) * d + s), u.get(h0 * d + s)),
                );
                c.set_value(g, h, 0, v);
            }
        }
        Ok(c)
    }

    fn h2_data(&self) -> Result<&H2Data> {
        if let Some(h) = self.h2.get() {
            return Ok(h);
        }
        let z2 = self.z2_basis()?;
        let mut probe = Echelon::new(self.field, self.edge_dim());
        let reps: Vec<FpVector> = z2
            .iter()
            .filter(|u| probe.insert(&self.b2.reduce(u)))
            .cloned()
            .collect();
        let mut residuals = Echelon::tracked(self.field, self.edge_dim(), reps.len());
        for (t, u) in reps.iter().enumerate() {
            residuals.insert_tagged(&self.b2.reduce(u), t);
        }
        Ok(self.h2.get_or_init(|| H2Data {
            reps,
            residuals,
        }))
    }

    /// `dim H²(G, 𝔽_p)`.
    pub fn h2_dim(&self) -> Result<usize> {
        Ok(self.h2_data()?.reps.len())
    }

    /// Representative cocycles of a basis of `H²(G, 𝔽_p)`.
    pub fn h2_basis(&self) -> Result<Vec<Cochain2>> {
        self.h2_data()?
            .reps
            .iter()
            .map(|u| self.cocycle_from_edges(u))
            .collect()
    }

    /// Coordinates of the class of a scalar cocycle in `h2_basis()`.
    pub fn h2_coords(&self, c: &Cochain2) -> Result<FpVector> {
        assert_eq!(c.cod(), 1, "scalar cocycle expected");
        let data = self.h2_data()?;
        let r = self.b2.reduce(&self.edge_vector(c, 0));
        let (res, comb) = data.residuals.reduce_tracked(&r);
        if !res.is_zero() {
            return Err(Error::InvariantViolation("not a cocycle".into()));
        }
        Ok(comb)
    }

    /// The residual space of `H²`: the span of all class residuals.
    pub fn h2_residual_space(&self) -> Result<Subspace> {
        let data = self.h2_data()?;
        let vs: Vec<FpVector> = data.reps.iter().map(|u| self.b2.reduce(u)).collect();
        Ok(Subspace::span(self.field, self.edge_dim(), &vs))
    }
}
