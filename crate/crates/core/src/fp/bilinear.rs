use crate::error::{Error, Result};

use super::{Fp, FpVector};

/// A bilinear map 𝔽_p^a × 𝔽_p^b → 𝔽_p^c given by its structure tensor:
/// `μ(e_i ⊗ f_j) = Σ_k t[i][j][k] g_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BilinearMap {
    field: Fp,
    dim_a: usize,
    dim_b: usize,
    dim_c: usize,
    tensor: Vec<u32>,
}

impl BilinearMap {
    pub fn zero(field: Fp, dim_a: usize, dim_b: usize, dim_c: usize) -> Self {
        BilinearMap {
            field,
            dim_a,
            dim_b,
            dim_c,
            tensor: vec![0; dim_a * dim_b * dim_c],
        }
    }

    /// Multiplication of 𝔽_p with itself.
    pub fn field_product(field: Fp) -> Self {
        let mut m = Self::zero(field, 1, 1, 1);
        m.tensor[0] = 1;
        m
    }

    /// Builds from a flat tensor in `(i, j, k)` row-major order.
    pub fn from_flat(field: Fp, dims: (usize, usize, usize), tensor: Vec<u32>) -> Result<Self> {
        let (a, b, c) = dims;
        if tensor.len() != a * b * c {
            return Err(Error::InvalidSystem(format!(
                "tensor has {} entries, expected {}",
                tensor.len(),
                a * b * c
            )));
        }
        if let Some(&x) = tensor.iter().find(|&&x| x >= field.p()) {
            return Err(Error::InvalidSystem(format!(
                "tensor entry {x} out of range for p = {}",
                field.p()
            )));
        }
        Ok(BilinearMap {
            field,
            dim_a: a,
            dim_b: b,
            dim_c: c,
            tensor,
        })
    }

    pub fn from_nested(field: Fp, dims: (usize, usize, usize), t: &[Vec<Vec<u32>>]) -> Result<Self> {
        let (a, b, c) = dims;
        let shape_ok = t.len() == a && t.iter().all(|r| r.len() == b && r.iter().all(|s| s.len() == c));
        if !shape_ok {
            return Err(Error::InvalidSystem(format!(
                "tensor shape does not match dimensions {a}x{b}x{c}"
            )));
        }
        let flat = t.iter().flatten().flatten().copied().collect();
        Self::from_flat(field, dims, flat)
    }

    pub fn to_nested(&self) -> Vec<Vec<Vec<u32>>> {
        (0..self.dim_a)
            .map(|i| {
                (0..self.dim_b)
                    .map(|j| (0..self.dim_c).map(|k| self.get(i, j, k)).collect())
                    .collect()
            })
            .collect()
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.dim_a, self.dim_b, self.dim_c)
    }

    pub fn flat(&self) -> &[u32] {
        &self.tensor
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> u32 {
        self.tensor[(i * self.dim_b + j) * self.dim_c + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: u32) {
        self.tensor[(i * self.dim_b + j) * self.dim_c + k] = v % self.field.p();
    }

    pub fn is_zero(&self) -> bool {
        self.tensor.iter().all(|&x| x == 0)
    }

    pub fn apply(&self, x: &FpVector, y: &FpVector) -> FpVector {
        let mut out = FpVector::zeros(self.field, self.dim_c);
        self.apply_into(x, y, &mut out);
        out
    }

    /// `out += μ(x ⊗ y)`.
    pub fn apply_into(&self, x: &FpVector, y: &FpVector, out: &mut FpVector) {
        assert_eq!(x.len(), self.dim_a, "left argument dimension mismatch");
        assert_eq!(y.len(), self.dim_b, "right argument dimension mismatch");
        let f = self.field;
        let ys = y.support();
        for i in x.support() {
            let xi = x.get(i);
            for &j in &ys {
                let c = f.mul(xi, y.get(j));
                let base = (i * self.dim_b + j) * self.dim_c;
                for k in 0..self.dim_c {
                    let t = self.tensor[base + k];
                    if t != 0 {
                        out.add_at(k, f.mul(c, t));
                    }
                }
            }
        }
    }

    /// `out += μ(x ⊗ y)` on raw coordinate slices.
    pub fn apply_slices(&self, x: &[u32], y: &[u32], out: &mut [u32]) {
        assert_eq!((x.len(), y.len(), out.len()), (self.dim_a, self.dim_b, self.dim_c), "dimension mismatch");
        let f = self.field;
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let c = f.mul(xi, yj);
                let base = (i * self.dim_b + j) * self.dim_c;
                for (k, o) in out.iter_mut().enumerate() {
                    let t = self.tensor[base + k];
                    if t != 0 {
                        *o = f.add(*o, f.mul(c, t));
                    }
                }
            }
        }
    }

    /// Block-diagonal sum on direct sums: `(a+b)⊗(c+d) ↦ μ(a⊗c) + ν(b⊗d)`,
    /// with domains and codomain the direct sums of the respective spaces.
    pub fn direct_sum(&self, other: &BilinearMap) -> BilinearMap {
        let (a1, b1, c1) = self.dims();
        let (a2, b2, c2) = other.dims();
        let mut m = BilinearMap::zero(self.field, a1 + a2, b1 + b2, c1 + c2);
        for i in 0..a1 {
            for j in 0..b1 {
                for k in 0..c1 {
                    m.set(i, j, k, self.get(i, j, k));
                }
            }
        }
        for i in 0..a2 {
            for j in 0..b2 {
                for k in 0..c2 {
                    m.set(a1 + i, b1 + j, c1 + k, other.get(i, j, k));
                }
            }
        }
        m
    }

    /// Like `direct_sum`, but both blocks land in one shared codomain of
    /// dimension `c`: `(a+b)⊗(c+d) ↦ μ(a⊗c) + ν(b⊗d)`.
    pub fn direct_sum_shared_codomain(&self, other: &BilinearMap) -> BilinearMap {
        let (a1, b1, c) = self.dims();
        let (a2, b2, c2) = other.dims();
        assert_eq!(c, c2, "shared codomain dimension mismatch");
        let f = self.field;
        let mut m = BilinearMap::zero(f, a1 + a2, b1 + b2, c);
        for i in 0..a1 {
            for j in 0..b1 {
                for k in 0..c {
                    m.set(i, j, k, self.get(i, j, k));
                }
            }
        }
        for i in 0..a2 {
            for j in 0..b2 {
                for k in 0..c {
                    m.set(a1 + i, b1 + j, k, other.get(i, j, k));
                }
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apply_is_bilinear() {
        let f = Fp::new(3).unwrap();
        let mut m = BilinearMap::zero(f, 2, 2, 1);
        m.set(0, 1, 0, 1);
        m.set(1, 0, 0, 2);
        let x = FpVector::from_entries(f, &[1, 1]);
        let y = FpVector::from_entries(f, &[2, 1]);
        // 1·1·1 + 1·2·2 = 5 = 2
        assert_eq!(m.apply(&x, &y).entries(), vec![2]);
        let x2 = x.scaled(2);
        assert_eq!(m.apply(&x2, &y).entries(), vec![1]);
    }

    #[test]
    fn nested_round_trip() {
        let f = Fp::new(2).unwrap();
        let m = BilinearMap::from_nested(f, (1, 2, 1), &[vec![vec![1], vec![0]]]).unwrap();
        assert_eq!(m.to_nested(), vec![vec![vec![1], vec![0]]]);
        assert!(BilinearMap::from_nested(f, (1, 1, 1), &[vec![vec![2]]]).is_err());
    }
}
