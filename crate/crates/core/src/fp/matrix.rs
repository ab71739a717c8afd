use std::fmt;

use serde::Serialize;

use super::{Echelon, Fp, FpVector, Subspace};

/// A dense row-major matrix over 𝔽_p.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FpMatrix {
    #[serde(skip)]
    field: Fp,
    rows: usize,
    cols: usize,
    #[serde(rename = "entries")]
    data: Vec<FpVector>,
}

impl FpMatrix {
    pub fn zeros(field: Fp, rows: usize, cols: usize) -> Self {
        FpMatrix {
            field,
            rows,
            cols,
            data: vec![FpVector::zeros(field, cols); rows],
        }
    }

    pub fn identity(field: Fp, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: Fp, cols: usize, rows: Vec<FpVector>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length mismatch");
        }
        FpMatrix {
            field,
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    pub fn from_entries(field: Fp, entries: &[Vec<u32>]) -> Self {
        let cols = entries.first().map_or(0, |r| r.len());
        let rows = entries
            .iter()
            .map(|r| FpVector::from_entries(field, r))
            .collect();
        Self::from_rows(field, cols, rows)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: Fp, rows: usize, columns: &[FpVector]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for i in c.support() {
                m.set(i, j, c.get(i));
            }
        }
        m
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i].set(j, v);
    }

    pub fn row(&self, i: usize) -> &FpVector {
        &self.data[i]
    }

    pub fn row_vectors(&self) -> &[FpVector] {
        &self.data
    }

    pub fn column(&self, j: usize) -> FpVector {
        let mut c = FpVector::zeros(self.field, self.rows);
        for i in 0..self.rows {
            let x = self.get(i, j);
            if x != 0 {
                c.set(i, x);
            }
        }
        c
    }

    pub fn entries(&self) -> Vec<Vec<u32>> {
        self.data.iter().map(|r| r.entries()).collect()
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for (i, r) in self.data.iter().enumerate() {
            for j in r.support() {
                t.set(j, i, r.get(j));
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &FpVector) -> FpVector {
        assert_eq!(x.len(), self.cols, "dimension mismatch");
        let mut out = FpVector::zeros(self.field, self.rows);
        for (i, r) in self.data.iter().enumerate() {
            let d = r.dot(x);
            if d != 0 {
                out.set(i, d);
            }
        }
        out
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for (i, r) in self.data.iter().enumerate() {
            for k in r.support() {
                out.data[i].add_scaled(&other.data[k], r.get(k));
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.field, self.cols);
        for r in &self.data {
            e.insert(r);
        }
        e.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_zero())
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}{:?}", self.field.p(), self.entries())
    }
}

/// Reduced row echelon form, rank and pivot columns.
pub fn rref(m: &FpMatrix) -> (FpMatrix, usize, Vec<usize>) {
    let mut e = Echelon::new(m.field, m.cols);
    for r in &m.data {
        e.insert(r);
    }
    let rank = e.rank();
    let pivots = e.pivots().to_vec();
    let mut rows = e.into_rows();
    rows.resize(m.rows, FpVector::zeros(m.field, m.cols));
    (FpMatrix::from_rows(m.field, m.cols, rows), rank, pivots)
}

/// Column-space solver for `m·x = b`, reusable across right-hand sides.
///
/// Columns are inserted greedily; the particular solution is supported on
/// the first maximal independent set of columns, which are exactly the
/// pivot columns of `rref(m)`. Free variables are therefore zero.
#[derive(Clone, Debug)]
pub struct LinearSolver {
    cols: usize,
    rows: usize,
    echelon: Echelon,
    relations: Vec<FpVector>,
}

impl LinearSolver {
    pub fn new(m: &FpMatrix) -> Self {
        Self::from_columns(m.field, m.rows, &(0..m.cols).map(|j| m.column(j)).collect::<Vec<_>>())
    }

    pub fn from_columns(field: Fp, rows: usize, columns: &[FpVector]) -> Self {
        let cols = columns.len();
        let mut echelon = Echelon::tracked(field, rows, cols);
        let mut relations = Vec::new();
        for (j, c) in columns.iter().enumerate() {
            if let Some(mut rel) = echelon.insert_tagged(c, j) {
                // c_j = Σ rel·c  =>  e_j - rel ∈ ker
                rel.scale(field.neg(1));
                rel.add_at(j, 1);
                relations.push(rel);
            }
        }
        LinearSolver {
            cols,
            rows,
            echelon,
            relations,
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn solve(&self, b: &FpVector) -> Option<FpVector> {
        assert_eq!(b.len(), self.rows, "dimension mismatch");
        let (res, comb) = self.echelon.reduce_tracked(b);
        res.is_zero().then_some(comb)
    }

    pub fn in_image(&self, b: &FpVector) -> bool {
        self.echelon.contains(b)
    }

    /// Kernel vectors, one per non-pivot column, with that column set to 1.
    pub fn kernel_vectors(&self) -> &[FpVector] {
        &self.relations
    }

    pub fn num_unknowns(&self) -> usize {
        self.cols
    }

    pub fn image(&self) -> &Echelon {
        &self.echelon
    }
}

pub fn solve(m: &FpMatrix, b: &FpVector) -> Option<FpVector> {
    LinearSolver::new(m).solve(b)
}

pub fn kernel_basis(m: &FpMatrix) -> Subspace {
    let s = LinearSolver::new(m);
    Subspace::span(m.field, m.cols, s.kernel_vectors())
}

pub fn image_basis(m: &FpMatrix) -> Subspace {
    let cols: Vec<FpVector> = (0..m.cols).map(|j| m.column(j)).collect();
    Subspace::span(m.field, m.rows, &cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Fp {
        Fp::new(2).unwrap()
    }

    #[test]
    fn rref_examples() {
        let id = FpMatrix::identity(f2(), 2);
        let (r, rank, piv) = rref(&id);
        assert_eq!(r, id);
        assert_eq!(rank, 2);
        assert_eq!(piv, vec![0, 1]);

        let f3 = Fp::new(3).unwrap();
        let z = FpMatrix::zeros(f3, 3, 3);
        let (r, rank, _) = rref(&z);
        assert_eq!(r, z);
        assert_eq!(rank, 0);

        let m = FpMatrix::from_entries(f2(), &[vec![1, 1], vec![1, 1]]);
        let (r, rank, piv) = rref(&m);
        assert_eq!(r.entries(), vec![vec![1, 1], vec![0, 0]]);
        assert_eq!(rank, 1);
        assert_eq!(piv, vec![0]);
    }

    #[test]
    fn solve_examples() {
        let f = f2();
        let id = FpMatrix::identity(f, 3);
        let b = FpVector::from_entries(f, &[1, 0, 1]);
        assert_eq!(solve(&id, &b), Some(b.clone()));
        assert_eq!(solve(&FpMatrix::zeros(f, 3, 3), &b), None);

        let m = FpMatrix::from_entries(f, &[vec![1, 1]]);
        let x = solve(&m, &FpVector::from_entries(f, &[1])).unwrap();
        assert_eq!(x.entries(), vec![1, 0]);
    }

    #[test]
    fn kernel_examples() {
        let f = f2();
        assert_eq!(kernel_basis(&FpMatrix::identity(f, 3)).dim(), 0);
        let k = kernel_basis(&FpMatrix::from_entries(f, &[vec![1, 1]]));
        assert_eq!(k.basis().len(), 1);
        assert_eq!(k.basis()[0].entries(), vec![1, 1]);
    }

    #[test]
    fn solution_satisfies_system_mod_5() {
        let f = Fp::new(5).unwrap();
        let m = FpMatrix::from_entries(f, &[vec![1, 2, 3, 4], vec![2, 4, 1, 0], vec![3, 1, 4, 4]]);
        let x0 = FpVector::from_entries(f, &[1, 3, 0, 2]);
        let b = m.mul_vec(&x0);
        let x = solve(&m, &b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
        for k in kernel_basis(&m).basis() {
            assert!(m.mul_vec(k).is_zero());
        }
    }
}
