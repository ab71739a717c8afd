use serde::{Deserialize, Serialize};

use super::cochain::{inflate1, Cochain1, Cochain2};
use super::context::Cohomology;
use crate::error::{Error, Result};
use crate::fp::{Echelon, FpVector, LinearSolver, Subspace};
use crate::group::{
    commutator_subgroup, elementary_quotient_basis, power_subgroup, product, FiniteGroup,
    GroupLike, Quotient, QuotientBasis, Subgroup,
};

/// Which of the two opposite transgression cocycles to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrgSign {
    /// `φ(s(q₁)s(q₂)s(q₁q₂)⁻¹)`.
    Literal,
    /// `φ(s(q₁q₂)(s(q₁)s(q₂))⁻¹)`, the negative of `Literal`.
    Negated,
}

/// A group `G` with a normal subgroup `N`, the quotient `G/N`, and the
/// pieces of the five-term sequence
/// `0 → H¹(G/N) → H¹(G) → H¹(N)^G → H²(G/N) → H²(G)`.
///
/// Characters of `N` are linear functionals on `N/Φ(N)`, given as vectors
/// in the coordinates of `frattini()`.
pub struct Extension {
    n: Subgroup,
    quotient: Quotient,
    frattini: QuotientBasis,
    invariant: Subspace,
    g_coh: Cohomology<FiniteGroup>,
    q_coh: Cohomology<FiniteGroup>,
    sign: TrgSign,
}

/// Dimensions and exactness flags of the five-term sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiveTerm {
    pub h1_quotient: usize,
    pub h1_group: usize,
    pub h1_normal_invariant: usize,
    pub h2_quotient: usize,
    pub inflation_injective: bool,
    pub exact_at_h1_group: bool,
    pub exact_at_h1_normal: bool,
    pub exact_at_h2_quotient: bool,
}

impl FiveTerm {
    pub fn is_exact(&self) -> bool {
        self.inflation_injective
            && self.exact_at_h1_group
            && self.exact_at_h1_normal
            && self.exact_at_h2_quotient
    }
}

impl Extension {
    pub fn new(g: &FiniteGroup, n: &Subgroup, sign: TrgSign) -> Result<Self> {
        let quotient = g.quotient(n)?;
        let p = g.prime();
        let phi = product(g, &power_subgroup(g, n, p as u64), &commutator_subgroup(g, n, n));
        let frattini = elementary_quotient_basis(g, n, &phi, &[])?;
        let field = frattini.field();
        let m = frattini.dim();
        // φ is G-invariant iff it kills coords(x⁻¹bx) − coords(b) for the
        // basis elements b and generators x of G.
        let mut moved = Echelon::new(field, m);
        for &x in g.generators() {
            for (i, &b) in frattini.basis().iter().enumerate() {
                let mut w = frattini.coords(g.conj(b, x)).expect("N is normal").clone();
                w.add_at(i, field.neg(1));
                moved.insert(&w);
            }
        }
        let invariant = Subspace::span(field, m, &moved.kernel_basis());
        let g_coh = Cohomology::new(g.clone())?;
        let q_coh = Cohomology::new(quotient.group.clone())?;
        Ok(Extension {
            n: n.clone(),
            quotient,
            frattini,
            invariant,
            g_coh,
            q_coh,
            sign,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        self.g_coh.group()
    }

    pub fn normal(&self) -> &Subgroup {
        &self.n
    }

    pub fn quotient(&self) -> &Quotient {
        &self.quotient
    }

    /// Basis of `N/Φ(N)` with coordinates of every element of `N`.
    pub fn frattini(&self) -> &QuotientBasis {
        &self.frattini
    }

    pub fn group_cohomology(&self) -> &Cohomology<FiniteGroup> {
        &self.g_coh
    }

    pub fn quotient_cohomology(&self) -> &Cohomology<FiniteGroup> {
        &self.q_coh
    }

    pub fn sign(&self) -> TrgSign {
        self.sign
    }

    /// `H¹(N)^{G/N}`: the `G`-invariant characters of `N`.
    pub fn invariant_characters(&self) -> &Subspace {
        &self.invariant
    }

    /// `φ(x)` for `x ∈ N`.
    pub fn character_value(&self, phi: &FpVector, x: usize) -> u32 {
        let c = self
            .frattini
            .coords(x)
            .unwrap_or_else(|| panic!("element {x} is not in N"));
        phi.dot(c)
    }

    pub fn is_invariant(&self, phi: &FpVector) -> bool {
        self.invariant.contains(phi)
    }

    /// Restriction of a homomorphism `G → 𝔽_p` to a character of `N`.
    pub fn restrict_hom(&self, a: &Cochain1) -> FpVector {
        let v: Vec<u32> = self.frattini.basis().iter().map(|&b| a.value(b, 0)).collect();
        FpVector::from_entries(self.frattini.field(), &v)
    }

    /// The transgression cocycle built from the canonical section.
    pub fn trg(&self, phi: &FpVector) -> Result<Cochain2> {
        self.trg_with_section(phi, &self.quotient.section)
    }

    /// The transgression cocycle for an arbitrary section with `s(1) = 1`.
    pub fn trg_with_section(&self, phi: &FpVector, section: &[usize]) -> Result<Cochain2> {
        if phi.len() != self.frattini.dim() {
            return Err(Error::InvalidArgument("character has the wrong dimension".into()));
        }
        if !self.is_invariant(phi) {
            return Err(Error::InvalidArgument("character is not G-invariant".into()));
        }
        let q = &self.quotient.group;
        let g = self.g_coh.group();
        if section.len() != q.order()
            || section[0] != g.identity()
            || section.iter().enumerate().any(|(c, &x)| self.quotient.projection[x] != c)
        {
            return Err(Error::InvalidArgument("not a normalized section".into()));
        }
        let f = self.frattini.field();
        let mut c = Cochain2::zero(f, q.order(), 1)?;
        for q1 in 0..q.order() {
            for q2 in 0..q.order() {
                let s12 = section[q.mul(q1, q2)];
                let x = g.mul(g.mul(section[q1], section[q2]), g.inv(s12));
                let v = self.character_value(phi, x);
                let v = match self.sign {
                    TrgSign::Literal => v,
                    TrgSign::Negated => f.neg(v),
                };
                c.set_value(q1, q2, 0, v);
            }
        }
        Ok(c)
    }

    fn trg_residuals(&self) -> Result<Vec<FpVector>> {
        self.invariant
            .basis()
            .iter()
            .map(|phi| Ok(self.q_coh.class_residual(&self.trg(phi)?)))
            .collect()
    }

    /// Image of `trg` in the residual space of `H²(G/N)`.
    pub fn trg_image(&self) -> Result<Subspace> {
        let rs = self.trg_residuals()?;
        Ok(Subspace::span(self.q_coh.field(), self.q_coh.edge_dim(), &rs))
    }

    /// `ker(H²(G/N) → H²(G))` in the residual space of `H²(G/N)`.
    pub fn inflation_kernel(&self) -> Result<Subspace> {
        let field = self.q_coh.field();
        let reps = self.q_coh.h2_basis()?;
        let images: Vec<FpVector> = reps
            .iter()
            .map(|z| self.g_coh.inflated_residual(z, &self.quotient.projection))
            .collect();
        let solver = LinearSolver::from_columns(field, self.g_coh.edge_dim(), &images);
        let vs: Vec<FpVector> = solver
            .kernel_vectors()
            .iter()
            .map(|comb| {
                let mut acc = FpVector::zeros(field, self.q_coh.edge_dim());
                for (j, z) in reps.iter().enumerate() {
                    let c = comb.get(j);
                    if c != 0 {
                        acc.add_scaled(&self.q_coh.class_residual(z), c);
                    }
                }
                acc
            })
            .collect();
        Ok(Subspace::span(field, self.q_coh.edge_dim(), &vs))
    }

    /// Whether the inflation of a cocycle on `G/N` is a coboundary on `G`.
    pub fn inflates_to_zero(&self, alpha: &Cochain2) -> bool {
        self.g_coh
            .inflated_residual(alpha, &self.quotient.projection)
            .is_zero()
    }

    /// The unique invariant character with `trg(φ) ~ α`.
    pub fn trg_inverse(&self, alpha: &Cochain2) -> Result<FpVector> {
        if alpha.cod() != 1 || alpha.order() != self.quotient.group.order() {
            return Err(Error::InvalidArgument("scalar 2-cocycle on G/N expected".into()));
        }
        if !self.inflates_to_zero(alpha) {
            return Err(Error::NotTransgressive(
                "class does not vanish on inflation to G".into(),
            ));
        }
        let rs = self.trg_residuals()?;
        let solver = LinearSolver::from_columns(self.q_coh.field(), self.q_coh.edge_dim(), &rs);
        let comb = solver.solve(&self.q_coh.class_residual(alpha)).ok_or_else(|| {
            Error::NotTransgressive("class vanishes on inflation but is not a transgression".into())
        })?;
        if !solver.kernel_vectors().is_empty() {
            return Err(Error::InvariantViolation("transgression is not injective".into()));
        }
        let field = self.frattini.field();
        let mut phi = FpVector::zeros(field, self.frattini.dim());
        for (i, b) in self.invariant.basis().iter().enumerate() {
            phi.add_scaled(b, comb.get(i));
        }
        Ok(phi)
    }

    /// Exactness of the five-term sequence at its middle terms, by
    /// comparing subspaces.
    pub fn five_term(&self) -> Result<FiveTerm> {
        let field = self.q_coh.field();
        let projection = &self.quotient.projection;
        let g_gens = self.g_coh.generators().len();

        // H¹(G/N) → H¹(G)
        let inflated: Vec<FpVector> = self
            .q_coh
            .h1()
            .iter()
            .map(|a| self.g_coh.hom_coords(&inflate1(a, projection)))
            .collect();
        let im_inf1 = Subspace::span(field, g_gens, &inflated);
        let inflation_injective = im_inf1.dim() == self.q_coh.h1_dim();

        // H¹(G) → H¹(N)^G
        let h1g = self.g_coh.h1();
        let restricted: Vec<FpVector> = h1g.iter().map(|a| self.restrict_hom(a)).collect();
        let res_solver =
            LinearSolver::from_columns(field, self.frattini.dim(), &restricted);
        let ker_res: Vec<FpVector> = res_solver
            .kernel_vectors()
            .iter()
            .map(|comb| {
                let mut acc = FpVector::zeros(field, g_gens);
                for (j, a) in h1g.iter().enumerate() {
                    acc.add_scaled(&self.g_coh.hom_coords(a), comb.get(j));
                }
                acc
            })
            .collect();
        let ker_res = Subspace::span(field, g_gens, &ker_res);
        let exact_at_h1_group = ker_res == im_inf1;

        // H¹(N)^G → H²(G/N)
        let im_res = Subspace::span(field, self.frattini.dim(), &restricted);
        let rs = self.trg_residuals()?;
        let trg_solver = LinearSolver::from_columns(field, self.q_coh.edge_dim(), &rs);
        let ker_trg: Vec<FpVector> = trg_solver
            .kernel_vectors()
            .iter()
            .map(|comb| {
                let mut acc = FpVector::zeros(field, self.frattini.dim());
                for (i, b) in self.invariant.basis().iter().enumerate() {
                    acc.add_scaled(b, comb.get(i));
                }
                acc
            })
            .collect();
        let ker_trg = Subspace::span(field, self.frattini.dim(), &ker_trg);
        let restrictions_invariant = restricted.iter().all(|r| self.is_invariant(r));
        let exact_at_h1_normal = restrictions_invariant && ker_trg == im_res;

        // H²(G/N) → H²(G)
        let exact_at_h2_quotient = self.trg_image()? == self.inflation_kernel()?;

        Ok(FiveTerm {
            h1_quotient: self.q_coh.h1_dim(),
            h1_group: self.g_coh.h1_dim(),
            h1_normal_invariant: self.invariant.dim(),
            h2_quotient: self.q_coh.h2_dim()?,
            inflation_injective,
            exact_at_h1_group,
            exact_at_h1_normal,
            exact_at_h2_quotient,
        })
    }
}
