use super::{Fp, FpVector};

/// Incrementally maintained reduced row echelon form.
///
/// Rows are kept fully reduced and sorted by pivot column. When built with
/// `tracked`, every row also carries a tag vector recording it as a linear
/// combination of the inserted vectors (by insertion tag index).
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Fp,
    dim: usize,
    tag_dim: usize,
    rows: Vec<FpVector>,
    tags: Vec<FpVector>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: Fp, dim: usize) -> Self {
        Self::tracked(field, dim, 0)
    }

    pub fn tracked(field: Fp, dim: usize, tag_dim: usize) -> Self {
        Echelon {
            field,
            dim,
            tag_dim,
            rows: Vec::new(),
            tags: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[FpVector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` in place against the current rows and returns the
    /// combination of tags subtracted, i.e. `v_in = v_out + Σ c·tag`.
    fn reduce_inner(&self, v: &mut FpVector, mut acc: Option<&mut FpVector>) {
        let f = self.field;
        for (k, &c) in self.pivots.iter().enumerate() {
            let coef = v.get(c);
            if coef != 0 {
                v.add_scaled(&self.rows[k], f.neg(coef));
                if let Some(a) = acc.as_deref_mut() {
                    a.add_scaled(&self.tags[k], coef);
                }
            }
        }
    }

    pub fn reduce(&self, v: &FpVector) -> FpVector {
        let mut out = v.clone();
        self.reduce_inner(&mut out, None);
        out
    }

    /// Returns `(residual, combination)` with
    /// `v = residual + Σ combination[t] · inserted[t]`.
    pub fn reduce_tracked(&self, v: &FpVector) -> (FpVector, FpVector) {
        let mut out = v.clone();
        let mut acc = FpVector::zeros(self.field, self.tag_dim);
        self.reduce_inner(&mut out, Some(&mut acc));
        (out, acc)
    }

    pub fn contains(&self, v: &FpVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts `v`; returns true when the rank grew.
    pub fn insert(&mut self, v: &FpVector) -> bool {
        debug_assert_eq!(self.tag_dim, 0, "use insert_tagged on tracked echelons");
        self.insert_with(v, None).is_none()
    }

    /// Inserts `v` labelled by tag index `tag`. If `v` is dependent, returns
    /// the relation `v = Σ c·inserted`, expressed as a tag vector.
    pub fn insert_tagged(&mut self, v: &FpVector, tag: usize) -> Option<FpVector> {
        self.insert_with(v, Some(tag))
    }

    fn insert_with(&mut self, v: &FpVector, tag: Option<usize>) -> Option<FpVector> {
        assert_eq!(v.len(), self.dim, "echelon dimension mismatch");
        let f = self.field;
        let mut row = v.clone();
        let mut t = FpVector::zeros(f, self.tag_dim);
        self.reduce_inner(&mut row, Some(&mut t));
        // row = v - Σ t·inserted
        let pivot = match row.first_nonzero() {
            None => return Some(t),
            Some(c) => c,
        };
        let mut t_row = t.negated();
        if let Some(i) = tag {
            t_row.add_at(i, 1);
        }
        let s = f.inv(row.get(pivot));
        row.scale(s);
        t_row.scale(s);
        for k in 0..self.rows.len() {
            let coef = self.rows[k].get(pivot);
            if coef != 0 {
                let c = f.neg(coef);
                self.rows[k].add_scaled(&row, c);
                self.tags[k].add_scaled(&t_row, c);
            }
        }
        let at = self.pivots.partition_point(|&q| q < pivot);
        self.pivots.insert(at, pivot);
        self.rows.insert(at, row);
        self.tags.insert(at, t_row);
        None
    }

    /// Basis of `{x : row·x = 0 for every row}`, one vector per non-pivot
    /// column (that column set to 1).
    pub fn kernel_basis(&self) -> Vec<FpVector> {
        let f = self.field;
        let mut out = Vec::new();
        let mut next_pivot = 0;
        for c in 0..self.dim {
            if next_pivot < self.pivots.len() && self.pivots[next_pivot] == c {
                next_pivot += 1;
                continue;
            }
            let mut v = FpVector::zeros(f, self.dim);
            v.set(c, 1);
            for (k, &q) in self.pivots.iter().enumerate() {
                let x = self.rows[k].get(c);
                if x != 0 {
                    v.set(q, f.neg(x));
                }
            }
            out.push(v);
        }
        out
    }

    pub fn into_rows(self) -> Vec<FpVector> {
        self.rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tracked_reduction_reconstructs_input() {
        let f = Fp::new(3).unwrap();
        let inputs = [
            FpVector::from_entries(f, &[1, 2, 0, 1]),
            FpVector::from_entries(f, &[0, 1, 1, 2]),
            FpVector::from_entries(f, &[1, 0, 0, 0]),
        ];
        let mut e = Echelon::tracked(f, 4, 3);
        for (i, v) in inputs.iter().enumerate() {
            assert!(e.insert_tagged(v, i).is_none());
        }
        let target = FpVector::from_entries(f, &[2, 2, 2, 1]);
        let (res, comb) = e.reduce_tracked(&target);
        let mut rebuilt = res.clone();
        for (i, v) in inputs.iter().enumerate() {
            rebuilt.add_scaled(v, comb.get(i));
        }
        assert_eq!(rebuilt, target);
    }

    #[test]
    fn dependent_insert_reports_relation() {
        let f = Fp::new(2).unwrap();
        let mut e = Echelon::tracked(f, 2, 2);
        let v = FpVector::from_entries(f, &[1, 1]);
        assert!(e.insert_tagged(&v, 0).is_none());
        let rel = e.insert_tagged(&v, 1).unwrap();
        assert_eq!(rel.entries(), vec![1, 0]);
    }
}
