//! Kernel intersections over catalogs of multiplicative systems, explicit
//! separation of elements outside `G_(n+1)`, and the report combining both
//! sides of the kernel/pairing equivalence.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cohomology::TrgSign;
use crate::error::{Error, Result};
use crate::fp::FpVector;
use crate::group::{
    build_group, elementary_quotient_basis, zassenhaus_recursive, Filtration, FiniteGroup,
    GroupLike, GroupSpec, Subgroup,
};
use crate::magnus::build_magnus_group;
use crate::multsys::{Catalog, MultSystem, UGroup};
use crate::pairing::{pull_back, PairingContext, PairingSummary, Verdict, WitnessOptions};
use crate::rep::{
    code_to_vector, enumerate_homs, vector_to_code, Representation, RepresentationRecord, Target,
    DEFAULT_BUDGET,
};

/// Version of the report layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Catalog parameters for kernel intersections and witness searches.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogParams {
    pub catalog_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_total_dim: Option<usize>,
    pub budget: u64,
}

impl Default for CatalogParams {
    fn default() -> Self {
        CatalogParams {
            catalog_dim: 1,
            max_total_dim: None,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// A system that shrank the running intersection.
#[derive(Clone, Debug, Serialize)]
pub struct NeededSystem {
    /// Position in the catalog stream (0 is the standard system).
    pub index: usize,
    pub dims: BTreeMap<String, usize>,
    pub order_after: usize,
}

/// Result of intersecting the kernels of all homomorphisms into `U(𝒜)` for
/// the rank-`n` catalog.
#[derive(Clone, Debug)]
pub struct KernelIntersection {
    pub rank: usize,
    pub intersection: Subgroup,
    /// `G_(n+1)`, the lower bound.
    pub target: Subgroup,
    pub systems_examined: usize,
    pub reps_examined: usize,
    pub needed: Vec<NeededSystem>,
    pub standard_sufficed: bool,
    pub truncated: bool,
    /// Reps whose kernel missed `G_(n+1)`, or whose image in `Ū` missed `G_(n)`.
    pub invariant_violations: usize,
}

impl KernelIntersection {
    pub fn reached_target(&self) -> bool {
        self.intersection == self.target
    }

    pub fn verdict(&self) -> Verdict {
        if self.invariant_violations > 0 || !self.target.is_subgroup_of(&self.intersection) {
            Verdict::Falsified
        } else if self.reached_target() {
            Verdict::Established
        } else {
            Verdict::Inconclusive
        }
    }
}

fn dims_record(sys: &MultSystem) -> BTreeMap<String, usize> {
    sys.dims_map()
        .into_iter()
        .map(|((i, j), d)| (format!("{i},{j}"), d))
        .collect()
}

/// `⋂ ker(ρ: G → U(𝒜))` over the rank-`n` catalog, stopping once the
/// intersection reaches `G_(n+1)`.
pub fn intersect_kernels(
    g: &FiniteGroup,
    z: &Filtration,
    n: usize,
    params: &CatalogParams,
) -> Result<KernelIntersection> {
    let target = z.term(n + 1).clone();
    let lower = z.term(n).clone();
    let mut mask = vec![true; g.order()];
    let mut out = KernelIntersection {
        rank: n,
        intersection: g.whole(),
        target,
        systems_examined: 0,
        reps_examined: 0,
        needed: Vec::new(),
        standard_sufficed: false,
        truncated: false,
        invariant_violations: 0,
    };
    let catalog = Catalog::with_options(g.prime(), n, params.catalog_dim, true, params.max_total_dim)?;
    for (index, sys) in catalog.enumerate() {
        if out.reached_target() {
            break;
        }
        out.systems_examined += 1;
        let u = UGroup::full(&sys)?;
        let homs = enumerate_homs(g, &u, params.budget);
        out.truncated |= homs.truncated;
        let before = mask.iter().filter(|&&b| b).count();
        let bar_cut = u.truncated_order(n - 1);
        for h in &homs.homs {
            let rep = Representation::from_generator_codes(g, &sys, Target::Full, &u, h)?;
            out.reps_examined += 1;
            let images = rep.images();
            if out.target.elements().iter().any(|&x| images[x] != 0)
                || lower.elements().iter().any(|&x| images[x] % bar_cut != 0)
            {
                out.invariant_violations += 1;
            }
            for (x, keep) in mask.iter_mut().enumerate() {
                *keep &= images[x] == 0;
            }
        }
        let after = mask.iter().filter(|&&b| b).count();
        if after < before {
            let elems: Vec<usize> = (0..g.order()).filter(|&x| mask[x]).collect();
            out.intersection = Subgroup::from_elements(g, &elems);
            out.needed.push(NeededSystem {
                index,
                dims: dims_record(&sys),
                order_after: after,
            });
        }
        if index == 0 && out.reached_target() {
            out.standard_sufficed = true;
        }
    }
    Ok(out)
}

/// How a separating representation was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeparationRoute {
    /// A character of `G/G_(2)` through the rank-1 standard system.
    Character,
    /// A witnessed Massey class pairing nontrivially with `σ̄`, lifted.
    Massey,
}

#[derive(Clone, Debug)]
pub enum Separation {
    /// `σ ∈ G_(n+1)`: every rank-`n` rep is trivial on it.
    Impossible,
    Found {
        rep: Representation,
        depth: usize,
        route: SeparationRoute,
    },
    /// No witnessed class pairs nontrivially with `σ̄` at this catalog bound.
    Inconclusive { depth: usize, catalog_dim: usize },
}

/// Separates elements from the identity by rank-`n` representations,
/// caching one pairing context per depth.
pub struct Separator<'g> {
    g: &'g FiniteGroup,
    z: Filtration,
    n: usize,
    opts: WitnessOptions,
    contexts: BTreeMap<usize, PairingContext>,
}

impl<'g> Separator<'g> {
    pub fn new(g: &'g FiniteGroup, n: usize, opts: WitnessOptions) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("rank must be at least 1".into()));
        }
        Ok(Separator {
            g,
            z: zassenhaus_recursive(g),
            n,
            opts,
            contexts: BTreeMap::new(),
        })
    }

    pub fn filtration(&self) -> &Filtration {
        &self.z
    }

    /// The pairing context `(G, G_(k), k)`, built on first use.
    pub fn context(&mut self, k: usize) -> Result<&PairingContext> {
        if !self.contexts.contains_key(&k) {
            let ctx = PairingContext::new(self.g, self.z.term(k), k, &self.opts)?;
            self.contexts.insert(k, ctx);
        }
        Ok(&self.contexts[&k])
    }

    pub fn separate(&mut self, sigma: usize) -> Result<Separation> {
        let g = self.g;
        if sigma >= g.order() {
            return Err(Error::InvalidArgument(format!("no element {sigma}")));
        }
        let depth = self.z.depth(sigma).unwrap_or(usize::MAX);
        if depth > self.n {
            return Ok(Separation::Impossible);
        }
        let (rep, route) = if depth == 1 {
            (self.character_rep(sigma)?, SeparationRoute::Character)
        } else {
            let ctx = self.context(depth)?;
            let mut found = None;
            for j in 0..ctx.right_gens().len() {
                if ctx.pair_via_trg(sigma, j)? != 0 {
                    found = Some(j);
                    break;
                }
            }
            let Some(j) = found else {
                return Ok(Separation::Inconclusive {
                    depth,
                    catalog_dim: self.opts.catalog_dim,
                });
            };
            let rep = pull_back(g, ctx.to_reduced(), &ctx.right_gens()[j].lift)?;
            (rep, SeparationRoute::Massey)
        };
        let rep = embed_to_rank(&rep, self.n)?;
        let u = UGroup::full(rep.system())?;
        if !rep.is_multiplicative(g, &u) {
            return Err(Error::InvariantViolation("separating map is not a homomorphism".into()));
        }
        if rep.image_code(sigma) == 0 {
            return Err(Error::InvariantViolation("separating map is trivial on the element".into()));
        }
        Ok(Separation::Found { rep, depth, route })
    }

    /// `ρ(x) = 1 + f(x)` in the rank-1 standard system for a character
    /// `f` of `G/G_(2)` with `f(σ̄) = 1`.
    fn character_rep(&self, sigma: usize) -> Result<Representation> {
        let g = self.g;
        let basis = elementary_quotient_basis(g, &g.whole(), self.z.term(2), &[sigma])?;
        let sys = MultSystem::standard(g.prime(), 1)?;
        let u = UGroup::full(&sys)?;
        let field = sys.field();
        let c = basis.coords(sigma).expect("every element has coordinates");
        let t = c.first_nonzero().expect("σ lies outside G_(2)");
        let scale = field.inv(c.get(t));
        let images: Vec<usize> = (0..g.order())
            .map(|x| {
                let v = field.mul(basis.coords(x).expect("coordinates").get(t), scale);
                vector_to_code(&FpVector::from_entries(field, &[v]))
            })
            .collect();
        Representation::from_images(g, &sys, Target::Full, &u, images)
    }
}

/// Pads a representation up to rank `n` through the standard embeddings.
pub fn embed_to_rank(rep: &Representation, n: usize) -> Result<Representation> {
    let mut rep = rep.clone();
    while rep.system().rank() < n {
        let (big, e) = rep.system().embed_lower_rank()?;
        rep = rep.embed(&big, &e)?;
    }
    Ok(rep)
}

/// Input of [`run_theorem_harness`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarnessConfig {
    pub group: GroupSpec,
    pub n: usize,
    #[serde(default)]
    pub catalog: CatalogParams,
    #[serde(default = "default_sign")]
    pub sign: TrgSign,
    /// Separate every element outside `G_(n+1)` (otherwise none).
    #[serde(default = "default_true")]
    pub separate_all: bool,
}

fn default_sign() -> TrgSign {
    TrgSign::Negated
}

fn default_true() -> bool {
    true
}

impl HarnessConfig {
    pub fn new(group: GroupSpec, n: usize) -> Self {
        HarnessConfig {
            group,
            n,
            catalog: CatalogParams::default(),
            sign: TrgSign::Negated,
            separate_all: true,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupSummary {
    pub name: String,
    pub digest: String,
    pub p: u32,
    pub order: usize,
    pub generators: Vec<String>,
}

/// Status of the hypothesis `R ≤ S_(n)` for `G = S/R`.
#[derive(Clone, Debug, Serialize)]
pub struct HypothesisCheck {
    /// `exact`, `assumed` (only the order test `|G/G_(n)| = |S/S_(n)|` was
    /// possible), `violated`, or `unknown`.
    pub status: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelReport {
    pub rank: usize,
    pub target_order: usize,
    pub intersection_order: usize,
    pub intersection: Vec<String>,
    pub systems_examined: usize,
    pub reps_examined: usize,
    pub needed_systems: Vec<NeededSystem>,
    pub standard_sufficed: bool,
    pub truncated: bool,
    pub invariant_violations: usize,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingLevel {
    pub rank: usize,
    pub summary: PairingSummary,
    /// Left non-degeneracy of the pairing at this rank.
    pub statement_pairing: Verdict,
    /// Kernel intersection at this rank equals `G_(k+1)`.
    pub statement_kernels: Verdict,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparationWitness {
    pub element: String,
    pub depth: usize,
    pub route: SeparationRoute,
    pub image: Vec<u32>,
    pub representation: RepresentationRecord,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparationReport {
    pub attempted: usize,
    pub separated: usize,
    pub inconclusive: Vec<String>,
    pub by_route: BTreeMap<String, usize>,
    pub witnesses: Vec<SeparationWitness>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdicts {
    pub main_theorem: Verdict,
    pub kernel_pairing_equivalence: Verdict,
    pub trivial_on_deep_terms: Verdict,
    pub pairing_identities: Verdict,
    pub separation: Verdict,
    pub overall: Verdict,
}

/// Output of [`run_theorem_harness`]. Field order is the serialization
/// order; `timings_ms` is the only nondeterministic part.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub group: GroupSummary,
    pub n: usize,
    pub catalog: CatalogParams,
    pub sign: TrgSign,
    pub filtration_orders: Vec<usize>,
    pub zassenhaus_term: Vec<String>,
    pub hypothesis: HypothesisCheck,
    pub levels: Vec<LevelReport>,
    pub pairings: Vec<PairingLevel>,
    pub separation: Option<SeparationReport>,
    pub verdicts: Verdicts,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u64>>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The report without timings; identical configurations give identical
    /// output.
    pub fn to_canonical_json(&self) -> String {
        let mut r = self.clone();
        r.timings_ms = None;
        r.to_json()
    }

    /// 0 when everything is established, 2 when something is inconclusive,
    /// 1 when a theorem-backed check failed.
    pub fn exit_code(&self) -> i32 {
        match self.verdicts.overall {
            Verdict::Established => 0,
            Verdict::Inconclusive => 2,
            Verdict::Falsified => 1,
        }
    }
}

fn hypothesis(spec: Option<&GroupSpec>, g: &FiniteGroup, z: &Filtration, n: usize) -> HypothesisCheck {
    if let Some(GroupSpec::Magnus { m, .. }) = spec {
        return if *m >= n {
            HypothesisCheck {
                status: "exact".into(),
                detail: format!("R = S_({m}) lies in S_({n})"),
            }
        } else {
            HypothesisCheck {
                status: "violated".into(),
                detail: format!("R = S_({m}) is not contained in S_({n})"),
            }
        };
    }
    let d = log_p(g.order() / z.term(2).order(), g.prime());
    let quotient = g.order() / z.term(n).order();
    match build_magnus_group(g.prime(), d, n) {
        Ok(free) if free.group.order() == quotient => HypothesisCheck {
            status: "assumed".into(),
            detail: format!("|G/G_({n})| = |S/S_({n})| = {quotient} for S free of rank {d}"),
        },
        Ok(free) => HypothesisCheck {
            status: "violated".into(),
            detail: format!(
                "|G/G_({n})| = {quotient} but |S/S_({n})| = {} for S free of rank {d}",
                free.group.order()
            ),
        },
        Err(e) => HypothesisCheck {
            status: "unknown".into(),
            detail: format!("free quotient not computable: {e}"),
        },
    }
}

fn log_p(mut x: usize, p: u32) -> usize {
    let mut k = 0;
    while x > 1 {
        x /= p as usize;
        k += 1;
    }
    k
}

fn labels(g: &FiniteGroup, h: &Subgroup) -> Vec<String> {
    let mut e = h.elements().to_vec();
    e.sort_unstable();
    e.iter().map(|&x| g.label(x)).collect()
}

/// Runs the full pipeline for a group given by its spec.
pub fn run_theorem_harness(config: &HarnessConfig) -> Result<VerificationReport> {
    let g = build_group(&config.group)?;
    run_on_group(&g, &config.group.name(), Some(&config.group), config)
}

/// Runs the full pipeline on an already built group.
pub fn run_on_group(
    g: &FiniteGroup,
    name: &str,
    spec: Option<&GroupSpec>,
    config: &HarnessConfig,
) -> Result<VerificationReport> {
    let n = config.n;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let mut timings = BTreeMap::new();
    let clock = Instant::now();
    let z = zassenhaus_recursive(g);
    let filtration_orders: Vec<usize> = (1..=n + 1).map(|k| z.term(k).order()).collect();
    let hyp = hypothesis(spec, g, &z, n);
    timings.insert("filtration".to_string(), clock.elapsed().as_millis() as u64);

    // Kernel side, every rank up to n.
    let clock = Instant::now();
    let mut levels = Vec::new();
    let mut intersections = BTreeMap::new();
    for k in 1..=n {
        let ki = intersect_kernels(g, &z, k, &config.catalog)?;
        let verdict = ki.verdict();
        intersections.insert(k, verdict);
        levels.push(LevelReport {
            rank: k,
            target_order: ki.target.order(),
            intersection_order: ki.intersection.order(),
            intersection: labels(g, &ki.intersection),
            systems_examined: ki.systems_examined,
            reps_examined: ki.reps_examined,
            needed_systems: ki.needed.clone(),
            standard_sufficed: ki.standard_sufficed,
            truncated: ki.truncated,
            invariant_violations: ki.invariant_violations,
            verdict,
        });
    }
    timings.insert("kernels".to_string(), clock.elapsed().as_millis() as u64);

    // Pairing side, ranks 2..n.
    let clock = Instant::now();
    let opts = WitnessOptions {
        catalog_dim: config.catalog.catalog_dim,
        max_total_dim: config.catalog.max_total_dim,
        budget: config.catalog.budget,
        sign: config.sign,
    };
    let mut separator = Separator::new(g, n, opts)?;
    let mut pairings = Vec::new();
    for k in 2..=n {
        let summary = separator.context(k)?.summary();
        let statement_pairing = summary.left_nondegenerate;
        let statement_kernels = intersections[&k];
        pairings.push(PairingLevel {
            rank: k,
            agree: statement_pairing == statement_kernels
                || statement_pairing != Verdict::Established && statement_kernels != Verdict::Established,
            summary,
            statement_pairing,
            statement_kernels,
        });
    }
    timings.insert("pairings".to_string(), clock.elapsed().as_millis() as u64);

    // Separation of every element outside G_(n+1).
    let clock = Instant::now();
    let separation = if config.separate_all {
        let mut report = SeparationReport {
            attempted: 0,
            separated: 0,
            inconclusive: Vec::new(),
            by_route: BTreeMap::new(),
            witnesses: Vec::new(),
            verdict: Verdict::Established,
        };
        for sigma in 1..g.order() {
            match separator.separate(sigma)? {
                Separation::Impossible => {}
                Separation::Found { rep, depth, route } => {
                    report.attempted += 1;
                    report.separated += 1;
                    let key = serde_json::to_value(route)?.as_str().unwrap_or_default().to_string();
                    *report.by_route.entry(key).or_default() += 1;
                    let len = rep.system().total_dim();
                    report.witnesses.push(SeparationWitness {
                        element: g.label(sigma),
                        depth,
                        route,
                        image: code_to_vector(rep.system().field(), len, rep.image_code(sigma)).entries(),
                        representation: rep.to_record(),
                    });
                }
                Separation::Inconclusive { .. } => {
                    report.attempted += 1;
                    report.inconclusive.push(g.label(sigma));
                }
            }
        }
        if !report.inconclusive.is_empty() {
            report.verdict = Verdict::Inconclusive;
        }
        Some(report)
    } else {
        None
    };
    timings.insert("separation".to_string(), clock.elapsed().as_millis() as u64);

    let top = intersections[&n];
    let separation_verdict = separation.as_ref().map_or(Verdict::Established, |s| s.verdict);
    let mut main_theorem = top.and(separation_verdict);
    if hyp.status == "violated" && main_theorem == Verdict::Falsified {
        main_theorem = Verdict::Inconclusive;
    }
    let trivial_on_deep_terms = if levels.iter().any(|l| l.invariant_violations > 0) {
        Verdict::Falsified
    } else {
        Verdict::Established
    };
    let pairing_identities = pairings.iter().fold(Verdict::Established, |acc, p| {
        let s = &p.summary;
        acc.and(s.right_nondegenerate).and(s.trg_rep_agreement).and(s.kernel_equalities).and(s.five_term_exact)
    });
    let kernel_pairing_equivalence = if pairings.iter().all(|p| p.agree) {
        pairings.iter().fold(Verdict::Established, |acc, p| acc.and(p.statement_pairing))
    } else {
        Verdict::Inconclusive
    };
    let overall = main_theorem
        .and(kernel_pairing_equivalence)
        .and(trivial_on_deep_terms)
        .and(pairing_identities)
        .and(levels.iter().fold(Verdict::Established, |a, l| a.and(l.verdict)));
    Ok(VerificationReport {
        schema_version: SCHEMA_VERSION,
        group: GroupSummary {
            name: name.to_string(),
            digest: g.digest().to_string(),
            p: g.prime(),
            order: g.order(),
            generators: g.generator_names().to_vec(),
        },
        n,
        catalog: config.catalog.clone(),
        sign: config.sign,
        filtration_orders,
        zassenhaus_term: labels(g, z.term(n + 1)),
        hypothesis: hyp,
        levels,
        pairings,
        separation,
        verdicts: Verdicts {
            main_theorem,
            kernel_pairing_equivalence,
            trivial_on_deep_terms,
            pairing_identities,
            separation: separation_verdict,
            overall,
        },
        timings_ms: Some(timings),
    })
}
