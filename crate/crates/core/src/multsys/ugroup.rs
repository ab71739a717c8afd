use super::{MultSystem, UElement, VElement};
use crate::error::{Error, Result};
use crate::fp::FpVector;
use crate::group::GroupLike;

/// Largest number of elements a `UGroup` may index.
pub const MAX_CODE_SPACE: u64 = 1 << 40;

/// `U(𝒜)` (or `Ū(𝒜) = U(𝒜)/Z(𝒜)`) as an implicit group on integer codes.
///
/// The code of `1 + a` is `Σ_k a_k p^k` over the flat coordinates of `a`,
/// so level-1 digits are least significant and `U_{n,d}(𝒜)` is the set of
/// codes divisible by `p^{level_start(d)}`. Multiplication uses per-pairing
/// lookup tables; for `p = 2` codes are bitmasks and addition is XOR.
#[derive(Clone, Debug)]
pub struct UGroup {
    p: u32,
    n: usize,
    top_level: usize,
    digits: usize,
    order: usize,
    gens: Vec<usize>,
    level_start: Vec<usize>,
    pw: Vec<u64>,
    terms: Vec<CodeTerm>,
}

#[derive(Clone, Debug)]
struct CodeTerm {
    left: (usize, usize),
    right: (usize, usize),
    out_start: usize,
    /// Indexed by `x + y·p^{left width}`; entries are codes local to the
    /// output block (for p = 2, already shifted into place).
    table: Vec<u64>,
}

const MAX_TABLE: u64 = 1 << 20;

impl UGroup {
    /// The full group `U(𝒜)`.
    pub fn full(sys: &MultSystem) -> Result<Self> {
        Self::new(sys, sys.rank())
    }

    /// `Ū(𝒜)`: coordinates of level `n` are dropped.
    pub fn bar(sys: &MultSystem) -> Result<Self> {
        Self::new(sys, sys.rank() - 1)
    }

    /// The quotient `U(𝒜)/U_{n,top+1}(𝒜)`.
    pub fn new(sys: &MultSystem, top_level: usize) -> Result<Self> {
        let p = sys.p();
        let n = sys.rank();
        let top_level = top_level.min(n);
        let digits = sys.level_start(top_level + 1);
        let bits = (digits as f64) * (p as f64).log2();
        if bits > (MAX_CODE_SPACE as f64).log2() {
            return Err(Error::TooLarge(format!(
                "U(A) with {digits} coordinates over F_{p}"
            )));
        }
        let mut pw = vec![1u64; digits + 1];
        for k in 1..=digits {
            pw[k] = pw[k - 1] * p as u64;
        }
        let mut terms = Vec::new();
        for t in sys.terms() {
            let (i, k, j) = t.key;
            if j - i > top_level {
                continue;
            }
            let m = sys.pairing(i, k, j);
            let (ra, rb, ro) = (sys.range(i, k), sys.range(k, j), sys.range(i, j));
            let (wa, wb) = (ra.len(), rb.len());
            let size = (p as u64).pow((wa + wb) as u32);
            if size > MAX_TABLE {
                return Err(Error::TooLarge(format!("pairing table of size {size}")));
            }
            let field = sys.field();
            let mut table = vec![0u64; size as usize];
            for y in 0..(p as u64).pow(wb as u32) {
                let yv = decode_vec(field, y, wb);
                for x in 0..(p as u64).pow(wa as u32) {
                    let xv = decode_vec(field, x, wa);
                    let z = m.apply(&xv, &yv);
                    let mut code = 0u64;
                    for c in (0..z.len()).rev() {
                        code = code * p as u64 + z.get(c) as u64;
                    }
                    if p == 2 {
                        code <<= ro.start;
                    }
                    table[(x + y * (p as u64).pow(wa as u32)) as usize] = code;
                }
            }
            terms.push(CodeTerm {
                left: (ra.start, wa),
                right: (rb.start, wb),
                out_start: ro.start,
                table,
            });
        }
        let level_start = (1..=top_level + 1).map(|d| sys.level_start(d)).collect();
        let order = pw[digits] as usize;
        Ok(UGroup {
            p,
            n,
            top_level,
            digits,
            order,
            gens: (0..digits).map(|k| pw[k] as usize).collect(),
            level_start,
            pw,
            terms,
        })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn top_level(&self) -> usize {
        self.top_level
    }

    pub fn digits(&self) -> usize {
        self.digits
    }

    /// First digit of level `d` (for `d > top_level`, the digit count).
    pub fn level_start(&self, d: usize) -> usize {
        self.level_start[d.clamp(1, self.top_level + 1) - 1]
    }

    /// Whether `code ∈ U_{n,d}`.
    pub fn in_level(&self, code: usize, d: usize) -> bool {
        (code as u64).is_multiple_of(self.pw[self.level_start(d)])
    }

    /// Exact level of a code: the level of its lowest nonzero digit.
    pub fn level(&self, code: usize) -> usize {
        (1..=self.top_level)
            .find(|&d| !self.in_level(code, d + 1))
            .unwrap_or(self.n + 1)
    }

    /// Reduction modulo `U_{n,d+1}`.
    pub fn truncate(&self, code: usize, d: usize) -> usize {
        (code as u64 % self.pw[self.level_start(d + 1)]) as usize
    }

    /// Number of codes of levels `≤ d`, i.e. `|U/U_{n,d+1}|`.
    pub fn truncated_order(&self, d: usize) -> usize {
        self.pw[self.level_start(d + 1)] as usize
    }

    #[inline]
    fn block(&self, code: u64, start: usize, width: usize) -> u64 {
        if self.p == 2 {
            (code >> start) & ((1u64 << width) - 1)
        } else {
            (code / self.pw[start]) % self.pw[width]
        }
    }

    /// Digitwise `a + b`.
    fn add(&self, a: u64, b: u64) -> u64 {
        if self.p == 2 {
            return a ^ b;
        }
        let p = self.p as u64;
        let (mut a, mut b) = (a, b);
        let mut out = 0u64;
        let mut scale = 1u64;
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * scale;
            a /= p;
            b /= p;
            scale *= p;
        }
        out
    }

    fn neg(&self, a: u64) -> u64 {
        if self.p == 2 {
            return a;
        }
        let p = self.p as u64;
        let mut a = a;
        let mut out = 0u64;
        let mut scale = 1u64;
        while a > 0 {
            out += ((p - a % p) % p) * scale;
            a /= p;
            scale *= p;
        }
        out
    }

    /// The product `ab` in `V(𝒜)` (without the `a + b` part).
    fn vmul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        let mut acc = 0u64;
        for t in &self.terms {
            let x = self.block(a, t.left.0, t.left.1);
            if x == 0 {
                continue;
            }
            let y = self.block(b, t.right.0, t.right.1);
            if y == 0 {
                continue;
            }
            let z = t.table[(x + y * self.pw[t.left.1]) as usize];
            if self.p == 2 {
                acc ^= z;
            } else if z != 0 {
                acc = self.add(acc, z * self.pw[t.out_start]);
            }
        }
        acc
    }

    /// Flat vector of a code.
    pub fn to_element(&self, sys: &MultSystem, code: usize) -> UElement {
        let field = sys.field();
        let mut e = FpVector::zeros(field, sys.total_dim());
        let mut c = code as u64;
        let p = self.p as u64;
        let mut k = 0;
        while c > 0 {
            let d = (c % p) as u32;
            if d != 0 {
                e.set(k, d);
            }
            c /= p;
            k += 1;
        }
        UElement::from_v(VElement::from_vector(sys, e))
    }

    /// Code of an element; coordinates above the top level are dropped.
    pub fn code_of(&self, u: &UElement) -> usize {
        let e = u.a().entries();
        let mut code = 0u64;
        for k in (0..self.digits).rev() {
            code = code * self.p as u64 + e.get(k) as u64;
        }
        code as usize
    }
}

fn decode_vec(field: crate::fp::Fp, mut code: u64, width: usize) -> FpVector {
    let p = field.p() as u64;
    let mut v = FpVector::zeros(field, width);
    for k in 0..width {
        v.set(k, (code % p) as u32);
        code /= p;
    }
    v
}

impl GroupLike for UGroup {
    fn prime(&self) -> u32 {
        self.p
    }

    fn order(&self) -> usize {
        self.order
    }

    #[inline]
    fn mul(&self, a: usize, b: usize) -> usize {
        let (a, b) = (a as u64, b as u64);
        let s = self.add(a, b);
        self.add(s, self.vmul(a, b)) as usize
    }

    fn inv(&self, a: usize) -> usize {
        let neg = self.neg(a as u64);
        let mut power = neg;
        let mut acc = 0u64;
        while power != 0 {
            acc = self.add(acc, power);
            power = self.vmul(power, neg);
        }
        acc as usize
    }

    fn generators(&self) -> &[usize] {
        &self.gens
    }
}
