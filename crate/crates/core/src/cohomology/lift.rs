use super::cochain::{Cochain1, Cochain2};
use super::context::Cohomology;
use crate::error::{Error, Result};
use crate::fp::FpVector;
use crate::group::{FiniteGroup, GroupLike};
use crate::rep::{code_to_vector, vector_to_code, Representation, Target};
use crate::multsys::UGroup;

/// Result of trying to lift `ρ̄: G → Ū(𝒜)` to `ρ: G → U(𝒜)`.
#[derive(Clone, Debug)]
pub enum LiftOutcome {
    Lifted(Representation),
    /// The obstruction `m(g, h)`, the `A_{1,n+1}` part of `ρ₀(g)ρ₀(h)` for
    /// the zero-padded set-lift `ρ₀`; its class is nonzero.
    Obstructed(Cochain2),
}

impl LiftOutcome {
    pub fn lifted(self) -> Option<Representation> {
        match self {
            LiftOutcome::Lifted(r) => Some(r),
            LiftOutcome::Obstructed(_) => None,
        }
    }

    pub fn is_lifted(&self) -> bool {
        matches!(self, LiftOutcome::Lifted(_))
    }
}

/// The 2-cocycle `m` with `ρ₀(g)ρ₀(h) = ρ₀(gh)·(1 + m(g,h))` where `ρ₀`
/// pads `ρ̄` with a zero `(1, n+1)` entry.
pub fn lift_obstruction(g: &FiniteGroup, rbar: &Representation) -> Result<Cochain2> {
    if rbar.target() != Target::Bar {
        return Err(Error::InvalidArgument("obstruction of a U(A)-valued rep".into()));
    }
    lift_obstruction_in(g, rbar, &UGroup::full(rbar.system())?)
}

fn lift_obstruction_in(g: &FiniteGroup, rbar: &Representation, u: &UGroup) -> Result<Cochain2> {
    let sys = rbar.system();
    let n = sys.rank();
    let field = sys.field();
    let top = sys.range(1, n + 1);
    let shift = (sys.p() as u64).pow(top.start as u32) as usize;
    let images = rbar.images();
    let p = sys.p() as usize;
    let mut m = Cochain2::zero(field, g.order(), top.len())?;
    for a in 0..g.order() {
        for b in 0..g.order() {
            let mut corner = u.mul(images[a], images[b]) / shift;
            for k in 0..top.len() {
                m.set_value(a, b, k, (corner % p) as u32);
                corner /= p;
            }
        }
    }
    Ok(m)
}

/// Lifts `ρ̄` through the central extension `1 → A_{1,n+1} → U(𝒜) → Ū(𝒜)`.
///
/// The lift is `ρ(g) = ρ₀(g)·(1 + c(g))` with `∂c = −m` solved with free
/// variables zero; it exists exactly when the class of `m` vanishes.
pub fn lift_through_center<H: GroupLike>(
    g: &FiniteGroup,
    coh: &Cohomology<H>,
    rbar: &Representation,
) -> Result<LiftOutcome> {
    if rbar.target() != Target::Bar {
        return Err(Error::InvalidArgument("obstruction of a U(A)-valued rep".into()));
    }
    lift_through_center_in(g, coh, rbar, &UGroup::full(rbar.system())?)
}

/// [`lift_through_center`] with `U(𝒜)` supplied by the caller, for loops
/// over many representations into the same system.
pub(crate) fn lift_through_center_in<H: GroupLike>(
    g: &FiniteGroup,
    coh: &Cohomology<H>,
    rbar: &Representation,
    u: &UGroup,
) -> Result<LiftOutcome> {
    if coh.group().order() != g.order() {
        return Err(Error::InvalidArgument("cohomology of a different group".into()));
    }
    let m = lift_obstruction_in(g, rbar, u)?;
    let Some(c) = coh.solve_coboundary(&m.neg()) else {
        return Ok(LiftOutcome::Obstructed(m));
    };
    let rho = with_center_in(g, rbar, &c, u)?;
    Ok(LiftOutcome::Lifted(rho))
}

/// `g ↦ ρ₀(g)·(1 + c(g))` for a cochain `c` into `A_{1,n+1}`; errors unless
/// the result is a homomorphism. Works for a `Bar` rep (zero padding) or a
/// `Full` rep (whose top entry is shifted by `c`).
pub fn with_center(g: &FiniteGroup, rep: &Representation, c: &Cochain1) -> Result<Representation> {
    with_center_in(g, rep, c, &UGroup::full(rep.system())?)
}

fn with_center_in(g: &FiniteGroup, rep: &Representation, c: &Cochain1, u: &UGroup) -> Result<Representation> {
    let sys = rep.system();
    let n = sys.rank();
    let field = sys.field();
    let top = sys.range(1, n + 1);
    if c.cod() != top.len() || c.order() != g.order() {
        return Err(Error::InvalidArgument("central cochain of wrong shape".into()));
    }
    let shift = (sys.p() as u64).pow(top.start as u32) as usize;
    let images: Vec<usize> = (0..g.order())
        .map(|x| {
            let base = rep.image_code(x) % shift;
            let mut t = code_to_vector(field, top.len(), rep.image_code(x) / shift);
            t.add_assign(&c.get(x));
            base + vector_to_code(&t) * shift
        })
        .collect();
    let gens: Vec<usize> = g.generators().iter().map(|&s| images[s]).collect();
    let rho = Representation::from_generator_codes(g, sys, Target::Full, u, &gens)?;
    if rho.images() != images.as_slice() {
        return Err(Error::NotHomomorphism("central twist is not multiplicative".into()));
    }
    Ok(rho)
}

/// Reads the `(1, n+1)` entry of a `U(𝒜)`-valued rep as a 1-cochain.
pub fn corner_cochain(rep: &Representation, order: usize) -> Cochain1 {
    let sys = rep.system();
    let n = sys.rank();
    let field = sys.field();
    let top = sys.range(1, n + 1);
    Cochain1::from_fn(field, order, top.len(), |x| {
        let v: FpVector = rep.image_vector(x);
        v.slice(top.start, top.end)
    })
}
