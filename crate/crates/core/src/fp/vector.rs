use std::fmt;

use serde::{Serialize, Serializer};

use super::Fp;

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// p = 2: one bit per entry, unused high bits of the last word are zero.
    Bits(Vec<u64>),
    Words(Vec<u32>),
}

/// A dense vector over 𝔽_p. For p = 2 the entries are bit-packed so that
/// row operations are word-wide XORs.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpVector {
    field: Fp,
    len: usize,
    repr: Repr,
}

impl FpVector {
    pub fn zeros(field: Fp, len: usize) -> Self {
        let repr = if field.p() == 2 {
            Repr::Bits(vec![0; len.div_ceil(64)])
        } else {
            Repr::Words(vec![0; len])
        };
        FpVector { field, len, repr }
    }

    pub fn unit(field: Fp, len: usize, i: usize) -> Self {
        let mut v = Self::zeros(field, len);
        v.set(i, 1);
        v
    }

    /// Builds a vector from arbitrary integers, reducing them mod p.
    pub fn from_entries(field: Fp, entries: &[u32]) -> Self {
        let mut v = Self::zeros(field, entries.len());
        for (i, &e) in entries.iter().enumerate() {
            v.set(i, e % field.p());
        }
        v
    }

    #[inline]
    pub fn field(&self) -> Fp {
        self.field
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> u32 {
        debug_assert!(i < self.len);
        match &self.repr {
            Repr::Bits(w) => ((w[i >> 6] >> (i & 63)) & 1) as u32,
            Repr::Words(w) => w[i],
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: u32) {
        debug_assert!(i < self.len && value < self.field.p());
        match &mut self.repr {
            Repr::Bits(w) => {
                let mask = 1u64 << (i & 63);
                if value & 1 == 1 {
                    w[i >> 6] |= mask;
                } else {
                    w[i >> 6] &= !mask;
                }
            }
            Repr::Words(w) => w[i] = value,
        }
    }

    /// `self[i] += value`.
    #[inline]
    pub fn add_at(&mut self, i: usize, value: u32) {
        match &mut self.repr {
            Repr::Bits(w) => w[i >> 6] ^= ((value & 1) as u64) << (i & 63),
            Repr::Words(w) => w[i] = self.field.add(w[i], value),
        }
    }

    pub fn entries(&self) -> Vec<u32> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Bits(w) => w.iter().all(|&x| x == 0),
            Repr::Words(w) => w.iter().all(|&x| x == 0),
        }
    }

    pub fn first_nonzero(&self) -> Option<usize> {
        match &self.repr {
            Repr::Bits(w) => w
                .iter()
                .enumerate()
                .find(|(_, &x)| x != 0)
                .map(|(k, &x)| k * 64 + x.trailing_zeros() as usize),
            Repr::Words(w) => w.iter().position(|&x| x != 0),
        }
    }

    /// Indices of nonzero entries, ascending.
    pub fn support(&self) -> Vec<usize> {
        match &self.repr {
            Repr::Bits(w) => {
                let mut out = Vec::new();
                for (k, &word) in w.iter().enumerate() {
                    let mut x = word;
                    while x != 0 {
                        out.push(k * 64 + x.trailing_zeros() as usize);
                        x &= x - 1;
                    }
                }
                out
            }
            Repr::Words(w) => (0..w.len()).filter(|&i| w[i] != 0).collect(),
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &FpVector, c: u32) {
        assert_eq!(self.len, other.len, "vector length mismatch");
        assert_eq!(self.field, other.field, "vector field mismatch");
        let f = self.field;
        if c.is_multiple_of(f.p()) {
            return;
        }
        match (&mut self.repr, &other.repr) {
            (Repr::Bits(a), Repr::Bits(b)) => {
                for (x, y) in a.iter_mut().zip(b) {
                    *x ^= *y;
                }
            }
            (Repr::Words(a), Repr::Words(b)) => {
                for (x, &y) in a.iter_mut().zip(b) {
                    if y != 0 {
                        *x = f.add(*x, f.mul(c, y));
                    }
                }
            }
            _ => unreachable!("representation follows the field"),
        }
    }

    pub fn add_assign(&mut self, other: &FpVector) {
        self.add_scaled(other, 1);
    }

    pub fn sub_assign(&mut self, other: &FpVector) {
        let c = self.field.neg(1);
        self.add_scaled(other, c);
    }

    pub fn scale(&mut self, c: u32) {
        let f = self.field;
        let c = c % f.p();
        match &mut self.repr {
            Repr::Bits(w) => {
                if c == 0 {
                    w.iter_mut().for_each(|x| *x = 0);
                }
            }
            Repr::Words(w) => w.iter_mut().for_each(|x| *x = f.mul(*x, c)),
        }
    }

    pub fn scaled(&self, c: u32) -> FpVector {
        let mut v = self.clone();
        v.scale(c);
        v
    }

    pub fn negated(&self) -> FpVector {
        self.scaled(self.field.neg(1))
    }

    pub fn dot(&self, other: &FpVector) -> u32 {
        assert_eq!(self.len, other.len, "vector length mismatch");
        let f = self.field;
        match (&self.repr, &other.repr) {
            (Repr::Bits(a), Repr::Bits(b)) => {
                let ones: u32 = a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum();
                ones & 1
            }
            (Repr::Words(a), Repr::Words(b)) => {
                let s: u64 = a.iter().zip(b).map(|(&x, &y)| x as u64 * y as u64).sum();
                f.reduce(s)
            }
            _ => unreachable!(),
        }
    }

    /// Concatenation `[self | other]`.
    pub fn concat(&self, other: &FpVector) -> FpVector {
        let mut v = FpVector::zeros(self.field, self.len + other.len);
        for i in self.support() {
            v.set(i, self.get(i));
        }
        for i in other.support() {
            v.set(self.len + i, other.get(i));
        }
        v
    }

    pub fn slice(&self, start: usize, end: usize) -> FpVector {
        let mut v = FpVector::zeros(self.field, end - start);
        for i in start..end {
            let x = self.get(i);
            if x != 0 {
                v.set(i - start, x);
            }
        }
        v
    }
}

impl fmt::Debug for FpVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}{:?}", self.field.p(), self.entries())
    }
}

impl Serialize for FpVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries().serialize(s)
    }
}
