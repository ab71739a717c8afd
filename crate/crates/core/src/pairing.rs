//! The pairing `N/N∩G_(n+1) × ker(Φⁿ(G/N) → H²(G/N∩G_(n+1))) → 𝔽_p`,
//! computed through the transgression and through lifted representations.

use rayon::prelude::*;
use serde::Serialize;

use crate::cohomology::{
    corner_cochain, inflate2, lift_through_center, with_center, Cohomology, Extension, FiveTerm,
    LiftOutcome, TrgSign,
};
use crate::error::{Error, Result};
use crate::fp::{Echelon, Fp, FpMatrix, FpVector, LinearSolver, Subspace};
use crate::group::{zassenhaus_recursive, FiniteGroup, GroupLike, Subgroup};
use crate::massey::{dwyer_to_system, massey_value, phi_sum_witness, DefiningSystem};
use crate::multsys::{Catalog, UGroup};
use crate::rep::{enumerate_homs, Representation, Target, DEFAULT_BUDGET};

/// Outcome vocabulary for theorem-backed checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Established,
    /// The witnessed data do not suffice; never a counterexample.
    Inconclusive,
    /// A theorem-backed identity failed: an implementation bug.
    Falsified,
}

impl Verdict {
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Falsified, _) | (_, Falsified) => Falsified,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Established,
        }
    }

    fn check(ok: bool) -> Verdict {
        if ok {
            Verdict::Established
        } else {
            Verdict::Falsified
        }
    }
}

/// Where witnesses for the right-hand side come from.
#[derive(Clone, Debug)]
pub struct WitnessOptions {
    /// Catalog bound `D` on the dimensions of the spaces `A_ij`.
    pub catalog_dim: usize,
    pub max_total_dim: Option<usize>,
    /// Hom-enumeration budget per system.
    pub budget: u64,
    pub sign: TrgSign,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions {
            catalog_dim: 1,
            max_total_dim: None,
            budget: DEFAULT_BUDGET,
            sign: TrgSign::Negated,
        }
    }
}

/// One right-hand generator: a witnessed class in the kernel.
#[derive(Clone, Debug)]
pub struct RightGen {
    pub witness: DefiningSystem,
    /// `ρ̄_M` on `G/N`.
    pub rbar: Representation,
    /// Canonical lift of `ρ̄_M` pulled back to `G/N∩G_(n+1)`.
    pub lift: Representation,
    /// Class of the Massey value in `H²(G/N)` (residual coordinates).
    pub residual: FpVector,
    /// `trg⁻¹(α)` as a character of `N/N∩G_(n+1)`.
    pub character: FpVector,
}

/// The three kernels into Φⁿ(G/N), H²(G/N∩G_(n+1)) and H²(G), restricted
/// to the witnessed span; they should coincide.
#[derive(Clone, Debug, Serialize)]
pub struct KernelComparison {
    pub witnessed_dim: usize,
    pub ker_to_phi_of_reduced: usize,
    pub ker_to_h2_of_reduced: usize,
    pub ker_to_h2_of_group: usize,
    pub equal: bool,
}

/// A pairing context `(G, N, n)` with `N ⊴ G`, `N ≤ G_(n)`.
pub struct PairingContext {
    group: FiniteGroup,
    n: usize,
    normal: Subgroup,
    /// `G → G' = G/(N ∩ G_(n+1))`.
    to_reduced: Vec<usize>,
    /// `G' → G/N`.
    reduced_to_quotient: Vec<usize>,
    ext: Extension,
    left_basis: Vec<usize>,
    right: Vec<RightGen>,
    matrix: FpMatrix,
    trg_rep_agreement_checked: usize,
    trg_rep_failures: usize,
    opposite_sign_failures: usize,
    second_lift_failures: usize,
    kernels: KernelComparison,
    five_term: FiveTerm,
    stats: WitnessStats,
}

/// How the witnessed span was obtained.
#[derive(Clone, Debug, Default, Serialize)]
pub struct WitnessStats {
    pub systems: usize,
    pub homs: usize,
    pub nonzero_values: usize,
    pub truncated: bool,
}

struct Candidate {
    witness: DefiningSystem,
    residual: FpVector,
    reduced: FpVector,
    group: FpVector,
}

impl PairingContext {
    pub fn new(g: &FiniteGroup, normal: &Subgroup, n: usize, opts: &WitnessOptions) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument("pairing contexts need n >= 2".into()));
        }
        if !crate::group::is_normal(g, normal) {
            return Err(Error::NotNormal);
        }
        let z = zassenhaus_recursive(g);
        if !normal.is_subgroup_of(z.term(n)) {
            return Err(Error::InvalidArgument(format!("N is not contained in G_({n})")));
        }
        let k = normal.intersect(g, z.term(n + 1));
        let reduced = g.quotient(&k)?;
        let n_red = reduced.group.image_of(&reduced.projection, normal);
        let ext = Extension::new(&reduced.group, &n_red, opts.sign)?;
        let q = ext.quotient().group.clone();
        let reduced_to_quotient = ext.quotient().projection.clone();
        let to_quotient: Vec<usize> = reduced.projection.iter().map(|&x| reduced_to_quotient[x]).collect();
        let field = Fp::new(g.prime())?;

        let q_coh = ext.quotient_cohomology();
        let r_coh = ext.group_cohomology();
        let g_coh = Cohomology::new(g)?;

        // Witnessed Massey values on G/N with their inflations.
        let (candidates, stats) = collect_candidates(&q, q_coh, n, opts, |c| {
            (
                r_coh.inflated_residual(c, &reduced_to_quotient),
                g_coh.inflated_residual(c, &to_quotient),
            )
        })?;

        // A basis of the witnessed span (with both inflations attached).
        let width = r_coh.edge_dim() + g_coh.edge_dim() + q_coh.edge_dim();
        let mut span = Echelon::new(field, width);
        let mut basis: Vec<&Candidate> = Vec::new();
        for c in &candidates {
            if span.insert(&c.reduced.concat(&c.group).concat(&c.residual)) {
                basis.push(c);
            }
        }
        let res_dim = q_coh.edge_dim();
        let witnessed = Subspace::span(field, res_dim, &basis.iter().map(|c| c.residual.clone()).collect::<Vec<_>>());
        let ker_reduced = kernel_of(field, res_dim, &basis, |c| &c.reduced);
        let ker_group = kernel_of(field, res_dim, &basis, |c| &c.group);
        let kernels = KernelComparison {
            witnessed_dim: witnessed.dim(),
            ker_to_phi_of_reduced: ker_reduced.0.dim(),
            ker_to_h2_of_reduced: ker_reduced.0.dim(),
            ker_to_h2_of_group: ker_group.0.dim(),
            equal: ker_reduced.0 == ker_group.0,
        };

        // Right generators: one witness per kernel combination.
        let mut right = Vec::new();
        let mut right_span = Echelon::new(field, res_dim);
        for comb in &ker_reduced.1 {
            let parts: Vec<(&Candidate, u32)> = basis
                .iter()
                .enumerate()
                .filter(|(i, _)| comb.get(*i) != 0)
                .map(|(i, c)| (*c, comb.get(i)))
                .collect();
            let witness = combine(&parts)?;
            let value = massey_value(q_coh, &witness)?;
            if !right_span.insert(&value.residual) {
                continue;
            }
            right.push(make_right_gen(&ext, &reduced.group, &q, witness, value.residual, &value.cocycle)?);
        }
        let five_term = ext.five_term()?;

        let left_basis: Vec<usize> = ext
            .frattini()
            .basis()
            .iter()
            .map(|&x| reduced.section[x])
            .collect();
        let mut ctx = PairingContext {
            group: g.clone(),
            n,
            normal: normal.clone(),
            to_reduced: reduced.projection.clone(),
            reduced_to_quotient,
            ext,
            left_basis,
            right,
            matrix: FpMatrix::zeros(field, 0, 0),
            trg_rep_agreement_checked: 0,
            trg_rep_failures: 0,
            opposite_sign_failures: 0,
            second_lift_failures: 0,
            kernels,
            five_term,
            stats,
        };
        ctx.fill_matrix()?;
        // ⟨σ̄,α⟩ = −ρ_{1,n+1}(σ̄) on every element of N and every individually
        // transgressive witness, not only the basis.
        let extra: Vec<RightGen> = candidates
            .iter()
            .filter(|c| c.reduced.is_zero() && !c.residual.is_zero())
            .map(|c| {
                let value = massey_value(ctx.ext.quotient_cohomology(), &c.witness)?;
                make_right_gen(&ctx.ext, &reduced.group, &q, c.witness.clone(), c.residual.clone(), &value.cocycle)
            })
            .collect::<Result<_>>()?;
        ctx.check_trg_rep_agreement(&extra)?;
        let all = ctx.right.clone();
        ctx.check_trg_rep_agreement(&all)?;
        Ok(ctx)
    }

    fn fill_matrix(&mut self) -> Result<()> {
        let field = Fp::new(self.group.prime())?;
        let mut m = FpMatrix::zeros(field, self.left_basis.len(), self.right.len());
        for (i, &sigma) in self.left_basis.iter().enumerate() {
            for j in 0..self.right.len() {
                m.set(i, j, self.pair_via_trg(sigma, j)?);
            }
        }
        self.matrix = m;
        Ok(())
    }

    fn check_trg_rep_agreement(&mut self, gens: &[RightGen]) -> Result<()> {
        let field = Fp::new(self.group.prime())?;
        let reduced = self.ext.group();
        let twist = self.ext.group_cohomology().h1().first().cloned();
        let sigmas: Vec<usize> = self.normal.elements().to_vec();
        let (checked, bad, opposite, second): (usize, usize, usize, usize) = gens
            .par_iter()
            .map(|gen| {
                let corner = corner_cochain(&gen.lift, reduced.order());
                let twisted = twist.as_ref().map(|h| with_center(reduced, &gen.lift, h));
                let mut out = (0, 0, 0, 0);
                for &s in &sigmas {
                    let x = self.to_reduced[s];
                    let via_trg = self.ext.character_value(&gen.character, x);
                    let via_rep = field.neg(corner.value(x, 0));
                    out.0 += 1;
                    if via_trg != via_rep {
                        out.1 += 1;
                    }
                    if field.neg(via_trg) != via_rep {
                        out.2 += 1;
                    }
                    if let Some(Ok(t)) = &twisted {
                        if field.neg(corner_cochain(t, reduced.order()).value(x, 0)) != via_rep {
                            out.3 += 1;
                        }
                    } else if let Some(Err(_)) = &twisted {
                        out.3 += 1;
                    }
                }
                out
            })
            .reduce(|| (0, 0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2, a.3 + b.3));
        self.trg_rep_agreement_checked += checked;
        self.trg_rep_failures += bad;
        self.opposite_sign_failures += opposite;
        self.second_lift_failures += second;
        Ok(())
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn normal(&self) -> &Subgroup {
        &self.normal
    }

    pub fn extension(&self) -> &Extension {
        &self.ext
    }

    /// Elements of `N` whose images form a basis of `N/N∩G_(n+1)`.
    pub fn left_basis(&self) -> &[usize] {
        &self.left_basis
    }

    pub fn right_gens(&self) -> &[RightGen] {
        &self.right
    }

    pub fn matrix(&self) -> &FpMatrix {
        &self.matrix
    }

    pub fn stats(&self) -> &WitnessStats {
        &self.stats
    }

    pub fn kernels(&self) -> &KernelComparison {
        &self.kernels
    }

    pub fn five_term(&self) -> &FiveTerm {
        &self.five_term
    }

    /// Map `G → G/N∩G_(n+1)`.
    pub fn to_reduced(&self) -> &[usize] {
        &self.to_reduced
    }

    /// Map `G/N∩G_(n+1) → G/N`.
    pub fn reduced_to_quotient(&self) -> &[usize] {
        &self.reduced_to_quotient
    }

    /// Coordinates of `σ̄ ∈ N/N∩G_(n+1)` in the left basis.
    pub fn left_coords(&self, sigma: usize) -> Result<FpVector> {
        self.ext
            .frattini()
            .coords(self.to_reduced[sigma])
            .cloned()
            .ok_or_else(|| Error::InvalidArgument("element is not in N".into()))
    }

    /// `⟨σ̄, α_j⟩ = trg⁻¹(α_j)(σ̄)`.
    pub fn pair_via_trg(&self, sigma: usize, j: usize) -> Result<u32> {
        if !self.normal.contains(sigma) {
            return Err(Error::InvalidArgument("element is not in N".into()));
        }
        Ok(self.ext.character_value(&self.right[j].character, self.to_reduced[sigma]))
    }

    /// `−ρ_{1,n+1}(σ̄)` for the canonical lift of `ρ̄_{M_j}`.
    pub fn pair_via_rep(&self, sigma: usize, j: usize) -> Result<u32> {
        if !self.normal.contains(sigma) {
            return Err(Error::InvalidArgument("element is not in N".into()));
        }
        let lift = &self.right[j].lift;
        let v = lift.image_vector(self.to_reduced[sigma]);
        let sys = lift.system();
        let top = sys.range(1, sys.rank() + 1);
        Ok(sys.field().neg(v.get(top.start)))
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// Established when the rows of the matrix are independent.
    pub fn left_nondegenerate(&self) -> Verdict {
        if self.rank() == self.left_basis.len() {
            Verdict::Established
        } else {
            Verdict::Inconclusive
        }
    }

    /// Every nonzero class of the right span pairs nontrivially with some
    /// `σ̄`: the class-to-column map is well defined and injective.
    pub fn right_nondegenerate(&self) -> Verdict {
        let field = self.matrix.field();
        let res_dim = self.ext.quotient_cohomology().edge_dim();
        let cols: Vec<FpVector> = (0..self.right.len()).map(|j| self.matrix.column(j)).collect();
        let res: Vec<FpVector> = self.right.iter().map(|r| r.residual.clone()).collect();
        let both: Vec<FpVector> = res.iter().zip(&cols).map(|(r, c)| r.concat(c)).collect();
        let r1 = Subspace::span(field, res_dim, &res).dim();
        let r2 = Subspace::span(field, self.left_basis.len(), &cols).dim();
        let r3 = Subspace::span(field, res_dim + self.left_basis.len(), &both).dim();
        Verdict::check(r1 == r2 && r2 == r3)
    }

    pub fn trg_rep_agreement(&self) -> Verdict {
        Verdict::check(self.trg_rep_failures == 0 && self.second_lift_failures == 0)
    }

    pub fn summary(&self) -> PairingSummary {
        let left = self.left_nondegenerate();
        let right = self.right_nondegenerate();
        let perfect = if left == Verdict::Established && right == Verdict::Established {
            Verdict::check(self.left_basis.len() == self.rank() && self.rank() == self.right.len())
        } else {
            left.and(right)
        };
        PairingSummary {
            n: self.n,
            normal_order: self.normal.order(),
            left_dim: self.left_basis.len(),
            left_basis: self.left_basis.iter().map(|&x| self.group.label(x)).collect(),
            right_dim: self.right.len(),
            rank: self.rank(),
            matrix: self.matrix.entries(),
            sign: self.ext.sign(),
            trg_rep_pairs: self.trg_rep_agreement_checked,
            trg_rep_failures: self.trg_rep_failures,
            second_lift_failures: self.second_lift_failures,
            opposite_sign_also_validates: self.opposite_sign_failures == 0,
            kernels: self.kernels.clone(),
            five_term: self.five_term.clone(),
            witnesses: self.stats.clone(),
            left_nondegenerate: left,
            right_nondegenerate: right,
            trg_rep_agreement: self.trg_rep_agreement(),
            kernel_equalities: Verdict::check(self.kernels.equal),
            five_term_exact: Verdict::check(self.five_term.is_exact()),
            perfect,
        }
    }
}

/// Serializable digest of a pairing context.
#[derive(Clone, Debug, Serialize)]
pub struct PairingSummary {
    pub n: usize,
    pub normal_order: usize,
    pub left_dim: usize,
    pub left_basis: Vec<String>,
    pub right_dim: usize,
    pub rank: usize,
    pub matrix: Vec<Vec<u32>>,
    pub sign: TrgSign,
    pub trg_rep_pairs: usize,
    pub trg_rep_failures: usize,
    pub second_lift_failures: usize,
    pub opposite_sign_also_validates: bool,
    pub kernels: KernelComparison,
    pub five_term: FiveTerm,
    pub witnesses: WitnessStats,
    pub left_nondegenerate: Verdict,
    pub right_nondegenerate: Verdict,
    pub trg_rep_agreement: Verdict,
    pub kernel_equalities: Verdict,
    pub five_term_exact: Verdict,
    pub perfect: Verdict,
}

impl PairingSummary {
    /// Conjunction of the theorem-backed checks and the left verdict.
    pub fn overall(&self) -> Verdict {
        self.left_nondegenerate
            .and(self.right_nondegenerate)
            .and(self.trg_rep_agreement)
            .and(self.kernel_equalities)
            .and(self.five_term_exact)
            .and(self.perfect)
    }
}

fn collect_candidates(
    q: &FiniteGroup,
    q_coh: &Cohomology<FiniteGroup>,
    n: usize,
    opts: &WitnessOptions,
    inflate: impl Fn(&crate::cohomology::Cochain2) -> (FpVector, FpVector) + Sync,
) -> Result<(Vec<Candidate>, WitnessStats)> {
    let catalog = Catalog::with_options(q.prime(), n, opts.catalog_dim, true, opts.max_total_dim)?;
    let mut stats = WitnessStats::default();
    let mut out = Vec::new();
    for sys in catalog {
        stats.systems += 1;
        let ubar = UGroup::bar(&sys)?;
        let homs = enumerate_homs(q, &ubar, opts.budget);
        stats.truncated |= homs.truncated;
        stats.homs += homs.homs.len();
        let found: Vec<Option<Candidate>> = homs
            .homs
            .par_iter()
            .map(|h| -> Result<Option<Candidate>> {
                let rbar = Representation::from_generator_codes(q, &sys, Target::Bar, &ubar, h)?;
                let witness = dwyer_to_system(q, &rbar)?;
                let value = massey_value(q_coh, &witness)?;
                if value.is_zero_class() {
                    return Ok(None);
                }
                let (reduced, group) = inflate(&value.cocycle);
                Ok(Some(Candidate {
                    witness,
                    residual: value.residual,
                    reduced,
                    group,
                }))
            })
            .collect::<Result<_>>()?;
        for c in found.into_iter().flatten() {
            stats.nonzero_values += 1;
            out.push(c);
        }
    }
    Ok((out, stats))
}

/// Kernel of `span(residuals) → span(images)` as a subspace of residual
/// space, plus coefficient vectors over `basis` spanning it.
fn kernel_of(
    field: Fp,
    res_dim: usize,
    basis: &[&Candidate],
    image: impl Fn(&Candidate) -> &FpVector,
) -> (Subspace, Vec<FpVector>) {
    if basis.is_empty() {
        return (Subspace::zero(field, res_dim), Vec::new());
    }
    let rows = image(basis[0]).len();
    let cols: Vec<FpVector> = basis.iter().map(|c| image(c).clone()).collect();
    let solver = LinearSolver::from_columns(field, rows, &cols);
    let combos = solver.kernel_vectors().to_vec();
    let vs: Vec<FpVector> = combos
        .iter()
        .map(|comb| {
            let mut acc = FpVector::zeros(field, res_dim);
            for (i, c) in basis.iter().enumerate() {
                acc.add_scaled(&c.residual, comb.get(i));
            }
            acc
        })
        .collect();
    (Subspace::span(field, res_dim, &vs), combos)
}

/// `Σ c_i M_i` as a single defining system (scaling the first row, then
/// direct sums).
fn combine(parts: &[(&Candidate, u32)]) -> Result<DefiningSystem> {
    let mut acc: Option<DefiningSystem> = None;
    for (cand, c) in parts {
        let w = scale_witness(&cand.witness, *c);
        acc = Some(match acc {
            None => w,
            Some(a) => phi_sum_witness(&a, &w)?,
        });
    }
    acc.ok_or_else(|| Error::InvalidArgument("empty combination".into()))
}

/// Multiplies every `a_1j` by `c`, which scales the Massey value by `c`.
pub fn scale_witness(m: &DefiningSystem, c: u32) -> DefiningSystem {
    if c == 1 {
        return m.clone();
    }
    let cochains = m
        .cochains()
        .iter()
        .map(|(&(i, j), a)| ((i, j), if i == 1 { a.scaled(c) } else { a.clone() }))
        .collect();
    DefiningSystem::new(m.system(), m.order(), cochains).expect("same shape")
}

fn make_right_gen(
    ext: &Extension,
    reduced: &FiniteGroup,
    q: &FiniteGroup,
    witness: DefiningSystem,
    residual: FpVector,
    cocycle: &crate::cohomology::Cochain2,
) -> Result<RightGen> {
    let rbar = crate::massey::dwyer_to_rep(q, &witness)?;
    let character = ext.trg_inverse(cocycle)?;
    let pulled = pull_back(reduced, &ext.quotient().projection, &rbar)?;
    let lift = match lift_through_center(reduced, ext.group_cohomology(), &pulled)? {
        LiftOutcome::Lifted(r) => r,
        LiftOutcome::Obstructed(_) => {
            return Err(Error::InvariantViolation(
                "a transgressive class has no lift on G/(N ∩ G_(n+1))".into(),
            ))
        }
    };
    Ok(RightGen {
        witness,
        rbar,
        lift,
        residual,
        character,
    })
}

/// `ρ ∘ π` for a projection `π: G → Q`.
pub fn pull_back(g: &FiniteGroup, projection: &[usize], rep: &Representation) -> Result<Representation> {
    let u = rep.target().group(rep.system())?;
    let images = projection.iter().map(|&x| rep.image_code(x)).collect();
    Representation::from_images(g, rep.system(), rep.target(), &u, images)
}

/// The pairing induced on `coker(α) × ker(β)` by two nested contexts
/// `N₁ ≤ N₂` over the same group, where `α` is induced by inclusion and
/// `β` by inflation along `G/N₁ → G/N₂`.
#[derive(Clone, Debug, Serialize)]
pub struct CokerKerPairing {
    pub coker_dim: usize,
    pub ker_dim: usize,
    pub rank: usize,
    pub matrix: Vec<Vec<u32>>,
    /// Pairs `(r, t)` on which `⟨α(r), t⟩₂ = ⟨r, β(t)⟩₁` was checked.
    pub commutativity_pairs: usize,
    pub commutativity_failures: usize,
    pub nondegenerate: Verdict,
}

pub fn coker_ker_pairing(small: &PairingContext, big: &PairingContext) -> Result<CokerKerPairing> {
    let g = small.group();
    if g != big.group() || small.n() != big.n() || !small.normal().is_subgroup_of(big.normal()) {
        return Err(Error::InvalidArgument("contexts are not nested over one group".into()));
    }
    let field = Fp::new(g.prime())?;
    let q1 = &small.ext.quotient().group;
    // G/N₁ → G/N₂ through preimages in G.
    let to_q1 = |x: usize| small.reduced_to_quotient[small.to_reduced[x]];
    let to_q2 = |x: usize| big.reduced_to_quotient[big.to_reduced[x]];
    let mut q1_to_q2 = vec![usize::MAX; q1.order()];
    for x in 0..g.order() {
        q1_to_q2[to_q1(x)] = to_q2(x);
    }
    let q1_coh = small.ext.quotient_cohomology();

    // β on the right generators of the big context.
    let mut beta_res = Vec::new();
    let mut beta_chars = Vec::new();
    for t in big.right_gens() {
        let value = massey_value(big.ext.quotient_cohomology(), &t.witness)?;
        let inflated = inflate2(&value.cocycle, &q1_to_q2)?;
        beta_res.push(q1_coh.class_residual(&inflated));
        beta_chars.push(small.ext.trg_inverse(&inflated)?);
    }

    // Commutativity on all of N₁ against all right generators.
    let mut pairs = 0;
    let mut failures = 0;
    for &r in small.normal().elements() {
        for (j, phi) in beta_chars.iter().enumerate() {
            pairs += 1;
            let lhs = big.pair_via_trg(r, j)?;
            let rhs = small.ext.character_value(phi, small.to_reduced[r]);
            if lhs != rhs {
                failures += 1;
            }
        }
    }

    // coker(α) in the left coordinates of the big context.
    let left2 = big.left_basis().len();
    let alpha_img: Vec<FpVector> = small
        .left_basis()
        .iter()
        .map(|&r| big.left_coords(r))
        .collect::<Result<_>>()?;
    let alpha_span = Subspace::span(field, left2, &alpha_img);
    let coker = Subspace::full(field, left2).quotient_basis(&alpha_span);

    // ker(β) as functionals on the big left space.
    let res1_dim = q1_coh.edge_dim();
    let solver = LinearSolver::from_columns(field, res1_dim, &beta_res);
    let res2_dim = big.ext.quotient_cohomology().edge_dim();
    let mut ker = Echelon::new(field, res2_dim + left2);
    for comb in solver.kernel_vectors() {
        let mut v = FpVector::zeros(field, res2_dim + left2);
        for (j, t) in big.right_gens().iter().enumerate() {
            let c = comb.get(j);
            if c != 0 {
                v.add_scaled(&t.residual.concat(&big.matrix().column(j)), c);
            }
        }
        ker.insert(&v);
    }
    let functionals: Vec<FpVector> = ker
        .rows()
        .iter()
        .filter(|v| !v.slice(0, res2_dim).is_zero())
        .map(|v| v.slice(res2_dim, res2_dim + left2))
        .collect();
    let mut m = FpMatrix::zeros(field, coker.len(), functionals.len());
    for (a, u) in coker.iter().enumerate() {
        for (b, f) in functionals.iter().enumerate() {
            m.set(a, b, u.dot(f));
        }
    }
    // α(N₁) must pair trivially with ker(β).
    let descends = alpha_img.iter().all(|r| functionals.iter().all(|f| r.dot(f) == 0));
    let rank = m.rank();
    let nondegenerate = if failures > 0 || !descends {
        Verdict::Falsified
    } else if rank == coker.len() && rank == functionals.len() {
        Verdict::Established
    } else {
        Verdict::Inconclusive
    };
    Ok(CokerKerPairing {
        coker_dim: coker.len(),
        ker_dim: functionals.len(),
        rank,
        matrix: m.entries(),
        commutativity_pairs: pairs,
        commutativity_failures: failures,
        nondegenerate,
    })
}
