//! Unit groups of truncated free algebras over 𝔽_p. The group generated by
//! `1 + x_i` modulo words of length `m` is the quotient `S/S_(m)` of the free
//! pro-p group on `d` generators, and its degree filtration is the
//! Zassenhaus filtration; both facts are exercised by tests rather than
//! assumed elsewhere.

use crate::error::{Error, Result};
use crate::fp::Fp;
use crate::group::{FiniteGroup, Filtration, Subgroup};

/// The free associative 𝔽_p-algebra on `d` letters modulo words of length
/// `≥ m`. Elements are dense coefficient vectors indexed by words, grouped
/// by length; a word of length `k` is read as a base-`d` number.
#[derive(Clone, Debug)]
pub struct TruncatedFreeAlgebra {
    field: Fp,
    d: usize,
    m: usize,
    offsets: Vec<usize>,
}

impl TruncatedFreeAlgebra {
    pub fn new(p: u32, d: usize, m: usize) -> Result<Self> {
        let field = Fp::new(p)?;
        if d == 0 || m == 0 {
            return Err(Error::InvalidArgument("need d ≥ 1 and m ≥ 1".into()));
        }
        let mut offsets = vec![0usize];
        let mut width = 1usize;
        for _ in 0..m {
            let last = *offsets.last().unwrap();
            offsets.push(
                last.checked_add(width)
                    .ok_or_else(|| Error::TooLarge("truncated algebra".into()))?,
            );
            width = width
                .checked_mul(d)
                .ok_or_else(|| Error::TooLarge("truncated algebra".into()))?;
        }
        if offsets[m] > 1 << 20 {
            return Err(Error::TooLarge(format!("algebra of dimension {}", offsets[m])));
        }
        Ok(TruncatedFreeAlgebra {
            field,
            d,
            m,
            offsets,
        })
    }

    pub fn dim(&self) -> usize {
        self.offsets[self.m]
    }

    pub fn num_gens(&self) -> usize {
        self.d
    }

    pub fn trunc_degree(&self) -> usize {
        self.m
    }

    /// Range of coefficient indices holding words of length `k`.
    pub fn degree_range(&self, k: usize) -> std::ops::Range<usize> {
        self.offsets[k]..self.offsets[k + 1]
    }

    pub fn one(&self) -> Vec<u32> {
        let mut v = vec![0; self.dim()];
        v[0] = 1;
        v
    }

    /// `1 + x_i` (letters numbered from 0).
    pub fn one_plus_letter(&self, i: usize) -> Vec<u32> {
        let mut v = self.one();
        if self.m > 1 {
            v[self.offsets[1] + i] = 1;
        }
        v
    }

    pub fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut out = vec![0u32; self.dim()];
        for k1 in 0..self.m {
            for (w1, &x) in a[self.degree_range(k1)].iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for k2 in 0..self.m - k1 {
                    let shift = self.d.pow(k2 as u32);
                    let base = self.offsets[k1 + k2] + w1 * shift;
                    for (w2, &y) in b[self.degree_range(k2)].iter().enumerate() {
                        if y != 0 {
                            let t = &mut out[base + w2];
                            *t = f.add(*t, f.mul(x, y));
                        }
                    }
                }
            }
        }
        out
    }

    /// Lowest positive degree with a nonzero coefficient.
    pub fn valuation(&self, a: &[u32]) -> Option<usize> {
        (1..self.m).find(|&k| a[self.degree_range(k)].iter().any(|&x| x != 0))
    }
}

/// `S/S_(m)` realized inside the truncated algebra.
#[derive(Clone, Debug)]
pub struct MagnusGroup {
    pub group: FiniteGroup,
    pub algebra: TruncatedFreeAlgebra,
    series: Vec<Vec<u32>>,
}

impl MagnusGroup {
    /// The truncated series representing element `x`.
    pub fn series_of(&self, x: usize) -> &[u32] {
        &self.series[x]
    }
}

pub fn build_magnus_group(p: u32, d: usize, m: usize) -> Result<MagnusGroup> {
    let algebra = TruncatedFreeAlgebra::new(p, d, m)?;
    let gens: Vec<Vec<u32>> = (0..d).map(|i| algebra.one_plus_letter(i)).collect();
    let names = (1..=d).map(|i| format!("x{i}")).collect();
    let (group, series) =
        FiniteGroup::from_generators(p, algebra.one(), &gens, names, |a, b| algebra.mul(a, b))?;
    Ok(MagnusGroup {
        group,
        algebra,
        series,
    })
}

/// `terms[k-1] = {x : x ≡ 1 modulo degree k}`.
pub fn degree_filtration(g: &MagnusGroup) -> Filtration {
    let m = g.algebra.trunc_degree();
    let mut terms = Vec::new();
    for k in 1..=m.max(1) {
        let elems: Vec<usize> = (0..g.series.len())
            .filter(|&x| match g.algebra.valuation(&g.series[x]) {
                None => true,
                Some(v) => v >= k,
            })
            .collect();
        terms.push(Subgroup::from_elements(&g.group, &elems));
        if elems.len() == 1 {
            break;
        }
    }
    Filtration::new(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupLike;

    #[test]
    fn small_magnus_orders() {
        assert_eq!(build_magnus_group(2, 2, 2).unwrap().group.order(), 4);
        assert_eq!(build_magnus_group(2, 2, 3).unwrap().group.order(), 32);
        assert_eq!(build_magnus_group(2, 1, 3).unwrap().group.order(), 4);
    }

    #[test]
    fn generator_squares_in_char_two() {
        let mg = build_magnus_group(2, 2, 4).unwrap();
        let x1 = mg.group.generators()[0];
        assert_eq!(mg.group.element_order(x1), 4);
        let sq = mg.group.mul(x1, x1);
        // (1+x)² = 1 + x²
        let s = mg.series_of(sq);
        assert_eq!(mg.algebra.valuation(s), Some(2));
    }
}
