//! Normalized mod-p cochains in degrees 1 and 2 with trivial action:
//! coboundaries, cup products through bilinear pairings, `H¹`, `H²`,
//! inflation, restriction, transgression and lifting through the center
//! of `U(𝒜)`.

mod cochain;
mod context;
mod extension;
mod lift;

pub use cochain::{
    cup, d1, d2, has_coboundary, inflate1, inflate2, is_cocycle, restrict1, Cochain1, Cochain2,
    MAX_COCHAIN2_ENTRIES,
};
pub use context::{Cohomology, MAX_H2_ORDER};
pub use extension::{Extension, FiveTerm, TrgSign};
pub use lift::{corner_cochain, lift_obstruction, lift_through_center, with_center, LiftOutcome};
pub(crate) use lift::lift_through_center_in;
