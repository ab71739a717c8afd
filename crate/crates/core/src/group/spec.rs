use serde::{Deserialize, Serialize};

use super::FiniteGroup;
use crate::error::{Error, Result};
use crate::fp::{is_prime, Fp};
use crate::magnus::build_magnus_group;

/// Declarative description of a group, as accepted on the command line and
/// stored in workspaces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GroupSpec {
    /// The unit group generated by `1 + x_i` in the free 𝔽_p-algebra on
    /// `d` letters truncated at degree `m`.
    Magnus { p: u32, d: usize, m: usize },
    /// ℤ/order with `order` a power of `p`.
    Cyclic { p: u32, order: usize },
    /// Upper unitriangular `size × size` matrices over 𝔽_p generated by the
    /// given matrices, or by the elementary matrices `1 + E_{i,i+1}`.
    MatrixUnipotent {
        p: u32,
        size: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<Vec<Vec<u32>>>>,
    },
}

impl GroupSpec {
    pub fn prime(&self) -> u32 {
        match self {
            GroupSpec::Magnus { p, .. }
            | GroupSpec::Cyclic { p, .. }
            | GroupSpec::MatrixUnipotent { p, .. } => *p,
        }
    }

    /// Short human-readable name, e.g. `magnus(2,2,4)`.
    pub fn name(&self) -> String {
        match self {
            GroupSpec::Magnus { p, d, m } => format!("magnus({p},{d},{m})"),
            GroupSpec::Cyclic { p, order } => format!("cyclic({p},{order})"),
            GroupSpec::MatrixUnipotent {
                p,
                size,
                generators,
            } => match generators {
                None => format!("unipotent({p},{size})"),
                Some(g) => format!("unipotent({p},{size};{} gens)", g.len()),
            },
        }
    }
}

pub fn build_group(spec: &GroupSpec) -> Result<FiniteGroup> {
    if !is_prime(spec.prime()) {
        return Err(Error::InvalidPrime(spec.prime()));
    }
    match spec {
        GroupSpec::Magnus { p, d, m } => Ok(build_magnus_group(*p, *d, *m)?.group),
        GroupSpec::Cyclic { p, order } => build_cyclic(*p, *order),
        GroupSpec::MatrixUnipotent {
            p,
            size,
            generators,
        } => build_unipotent(*p, *size, generators.as_deref()),
    }
}

fn build_cyclic(p: u32, order: usize) -> Result<FiniteGroup> {
    let mut n = order;
    while n > 1 && n.is_multiple_of(p as usize) {
        n /= p as usize;
    }
    if order == 0 || n != 1 {
        return Err(Error::InvalidArgument(format!(
            "cyclic order {order} is not a power of {p}"
        )));
    }
    let (g, _) = FiniteGroup::from_generators(p, 0usize, &[1 % order], vec!["x1".into()], |a, b| {
        (a + b) % order
    })?;
    Ok(g)
}

fn build_unipotent(p: u32, size: usize, gens: Option<&[Vec<Vec<u32>>]>) -> Result<FiniteGroup> {
    if size < 1 {
        return Err(Error::InvalidArgument("matrix size must be at least 1".into()));
    }
    let f = Fp::new(p)?;
    let identity: Vec<u32> = (0..size * size)
        .map(|k| (k / size == k % size) as u32)
        .collect();
    let mats: Vec<Vec<u32>> = match gens {
        None => (0..size.saturating_sub(1))
            .map(|i| {
                let mut m = identity.clone();
                m[i * size + i + 1] = 1;
                m
            })
            .collect(),
        Some(gs) => gs
            .iter()
            .map(|g| flatten_unitriangular(g, size, p))
            .collect::<Result<_>>()?,
    };
    let names = (1..=mats.len()).map(|i| format!("x{i}")).collect();
    let (g, _) = FiniteGroup::from_generators(p, identity, &mats, names, |a, b| {
        let mut c = vec![0u32; size * size];
        for i in 0..size {
            for k in i..size {
                let aik = a[i * size + k];
                if aik == 0 {
                    continue;
                }
                for j in k..size {
                    c[i * size + j] = f.add(c[i * size + j], f.mul(aik, b[k * size + j]));
                }
            }
        }
        c
    })?;
    Ok(g)
}

fn flatten_unitriangular(m: &[Vec<u32>], size: usize, p: u32) -> Result<Vec<u32>> {
    if m.len() != size || m.iter().any(|r| r.len() != size) {
        return Err(Error::InvalidArgument(format!("generator is not {size}x{size}")));
    }
    let mut out = Vec::with_capacity(size * size);
    for (i, row) in m.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            let ok = x < p && (j > i || x == (i == j) as u32);
            if !ok {
                return Err(Error::InvalidArgument(
                    "generator is not upper unitriangular over F_p".into(),
                ));
            }
            out.push(x);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupLike;

    #[test]
    fn spec_json_shape() {
        let s: GroupSpec = serde_json::from_str(r#"{"kind":"magnus","p":2,"d":2,"m":4}"#).unwrap();
        assert_eq!(s, GroupSpec::Magnus { p: 2, d: 2, m: 4 });
        let c: GroupSpec = serde_json::from_str(r#"{"kind":"cyclic","p":2,"order":4}"#).unwrap();
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"kind":"cyclic","p":2,"order":4}"#);
        let u: GroupSpec =
            serde_json::from_str(r#"{"kind":"matrix-unipotent","p":2,"size":3}"#).unwrap();
        assert_eq!(build_group(&u).unwrap().generators().len(), 2);
    }

    #[test]
    fn unipotent_orders() {
        let g3 = build_unipotent(2, 3, None).unwrap();
        assert_eq!(g3.order(), 8);
        let g4 = build_unipotent(2, 4, None).unwrap();
        assert_eq!(g4.order(), 64);
        assert!(build_cyclic(2, 6).is_err());
    }
}
