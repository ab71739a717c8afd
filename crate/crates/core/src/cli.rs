//! Command-line front end: argument parsing, the on-disk workspace and
//! text rendering. The binary is a thin wrapper around [`run`].

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cohomology::TrgSign;
use crate::error::{Error, Result};
use crate::group::{
    build_group, normal_closure, parse_word, zassenhaus_lazard, zassenhaus_recursive, FiniteGroup,
    GroupLike, GroupSpec,
};
use crate::magnus::{build_magnus_group, degree_filtration};
use crate::pairing::{PairingContext, PairingSummary, Verdict, WitnessOptions};
use crate::rep::{code_to_vector, RepresentationRecord, DEFAULT_BUDGET};
use crate::verifier::{run_on_group, CatalogParams, HarnessConfig, Separation, SeparationRoute, Separator};

#[derive(Parser, Debug)]
#[command(name = "zassenhaus", version, about = "Zassenhaus filtrations and kernel intersections of finite p-groups")]
pub struct Cli {
    /// Directory holding groups/, systems/ and reports/.
    #[arg(long, global = true, default_value = "zassenhaus-workspace")]
    pub workspace: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Group construction and storage.
    Group {
        #[command(subcommand)]
        action: GroupAction,
    },
    /// Zassenhaus filtration orders by one or all algorithms.
    Filtration {
        group: String,
        #[arg(long, value_enum, default_value_t = Algorithm::All)]
        algorithm: Algorithm,
    },
    /// Kernel intersections, pairings and separation for one rank.
    Verify {
        group: String,
        #[arg(long = "rank-n")]
        n: usize,
        #[command(flatten)]
        catalog: CatalogArgs,
    },
    /// A representation nontrivial on the given element.
    Separate {
        group: String,
        /// Word over x1..xd, e.g. `[x1,x2]` or `x1^2*x2`.
        element: String,
        #[arg(long = "rank-n")]
        n: usize,
        #[command(flatten)]
        catalog: CatalogArgs,
    },
    /// The pairing between N/N∩G_(n+1) and the witnessed classes.
    Pairing {
        group: String,
        #[arg(long = "rank-n")]
        n: usize,
        /// Normal closure of these words; G_(n) when absent.
        #[arg(long = "subgroup", value_delimiter = ';')]
        subgroup: Vec<String>,
        #[command(flatten)]
        catalog: CatalogArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum GroupAction {
    /// Builds a group from flags or a spec file and stores it.
    Build(BuildArgs),
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    /// JSON group spec, e.g. {"kind":"magnus","p":2,"d":2,"m":4}.
    #[arg(long, conflicts_with_all = ["kind", "p", "gens", "trunc", "order", "size"])]
    pub spec: Option<String>,
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    #[arg(long)]
    pub p: Option<u32>,
    /// Number of generators (magnus).
    #[arg(long)]
    pub gens: Option<usize>,
    /// Truncation degree (magnus).
    #[arg(long)]
    pub trunc: Option<usize>,
    /// Group order (cyclic).
    #[arg(long)]
    pub order: Option<usize>,
    /// Matrix size (matrix-unipotent).
    #[arg(long)]
    pub size: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Magnus,
    Cyclic,
    MatrixUnipotent,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Recursive,
    Lazard,
    Degree,
    All,
}

#[derive(Args, Debug, Clone)]
pub struct CatalogArgs {
    /// Largest entry dimension in the system catalog.
    #[arg(long = "catalog-dim", default_value_t = 1)]
    pub catalog_dim: usize,
    #[arg(long = "max-total-dim")]
    pub max_total_dim: Option<usize>,
    /// Candidate tuples per system before truncation.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, value_enum, default_value_t = SignArg::Negated)]
    pub sign: SignArg,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Negated,
    Literal,
}

impl CatalogArgs {
    fn params(&self) -> CatalogParams {
        CatalogParams {
            catalog_dim: self.catalog_dim,
            max_total_dim: self.max_total_dim,
            budget: self.budget,
        }
    }

    fn sign(&self) -> TrgSign {
        match self.sign {
            SignArg::Negated => TrgSign::Negated,
            SignArg::Literal => TrgSign::Literal,
        }
    }

    fn witness_options(&self) -> WitnessOptions {
        WitnessOptions {
            catalog_dim: self.catalog_dim,
            max_total_dim: self.max_total_dim,
            budget: self.budget,
            sign: self.sign(),
        }
    }
}

/// What the workspace stores under `groups/<digest>.json`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRecord {
    pub id: String,
    pub name: String,
    pub spec: GroupSpec,
    pub order: usize,
    pub generators: Vec<String>,
    pub filtration_orders: Vec<usize>,
}

/// Cached filtration, `groups/<digest>.filtration.json`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationRecord {
    pub id: String,
    pub orders: BTreeMap<String, Vec<usize>>,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeparationRecord {
    pub group: String,
    pub element: String,
    pub n: usize,
    /// `found`, `impossible` or `inconclusive`.
    pub outcome: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub route: Option<SeparationRoute>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representation: Option<RepresentationRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingRecord {
    pub group: String,
    pub subgroup: Vec<String>,
    pub summary: PairingSummary,
}

/// On-disk store with content-addressed file names.
pub struct Workspace {
    root: PathBuf,
}

impl Workspace {
    pub fn open(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        for sub in ["groups", "systems", "reports"] {
            fs::create_dir_all(root.join(sub))?;
        }
        Ok(Workspace { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn write_json<T: Serialize>(&self, path: PathBuf, value: &T) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        fs::write(&path, text)?;
        Ok(path)
    }

    fn read_json<T: for<'de> Deserialize<'de>>(&self, path: &Path) -> Result<T> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    /// Writes `value` under `dir/` named by the hash of its JSON.
    pub fn store_addressed<T: Serialize>(&self, dir: &str, value: &T) -> Result<PathBuf> {
        let text = serde_json::to_string_pretty(value)?;
        let name = hex::encode(&Sha256::digest(text.as_bytes())[..8]);
        self.write_json(self.root.join(dir).join(format!("{name}.json")), value)
    }

    pub fn store_group(&self, spec: &GroupSpec) -> Result<(GroupRecord, FiniteGroup)> {
        let g = build_group(spec)?;
        let record = GroupRecord {
            id: g.digest().to_string(),
            name: spec.name(),
            spec: spec.clone(),
            order: g.order(),
            generators: g.generator_names().to_vec(),
            filtration_orders: zassenhaus_recursive(&g).orders(),
        };
        self.write_json(self.group_path(&record.id), &record)?;
        Ok((record, g))
    }

    fn group_path(&self, id: &str) -> PathBuf {
        self.root.join("groups").join(format!("{id}.json"))
    }

    fn filtration_path(&self, id: &str) -> PathBuf {
        self.root.join("groups").join(format!("{id}.filtration.json"))
    }

    /// Stored groups whose id starts with `prefix`.
    fn matching_ids(&self, prefix: &str) -> Result<Vec<String>> {
        let mut ids = Vec::new();
        for entry in fs::read_dir(self.root.join("groups"))? {
            let name = entry?.file_name().to_string_lossy().into_owned();
            if let Some(id) = name.strip_suffix(".json") {
                if !id.contains('.') && id.starts_with(prefix) {
                    ids.push(id.to_string());
                }
            }
        }
        ids.sort();
        Ok(ids)
    }

    pub fn load_group(&self, id: &str) -> Result<(GroupRecord, FiniteGroup)> {
        let record: GroupRecord = self.read_json(&self.group_path(id))?;
        let g = build_group(&record.spec)?;
        if g.digest() != record.id {
            return Err(Error::InvariantViolation(format!(
                "stored group {id} rebuilds with digest {}",
                g.digest()
            )));
        }
        Ok((record, g))
    }

    /// Resolves a stored id (or unique prefix), an inline spec such as
    /// `magnus(2,2,4)`, or a JSON spec; inline specs are stored on the way.
    pub fn resolve(&self, text: &str) -> Result<(GroupRecord, FiniteGroup)> {
        let text = text.trim();
        if text.starts_with('{') {
            let spec: GroupSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
            return self.store_group(&spec);
        }
        if text.contains('(') {
            return self.store_group(&parse_spec(text)?);
        }
        match self.matching_ids(text)?.as_slice() {
            [id] => self.load_group(id),
            [] => Err(Error::UnknownId(text.to_string())),
            _ => Err(Error::UnknownId(format!("{text} is ambiguous"))),
        }
    }

    pub fn cached_filtration(&self, id: &str) -> Result<Option<FiltrationRecord>> {
        let path = self.filtration_path(id);
        if !path.exists() {
            return Ok(None);
        }
        self.read_json(&path).map(Some)
    }

    pub fn store_filtration(&self, record: &FiltrationRecord) -> Result<PathBuf> {
        self.write_json(self.filtration_path(&record.id), record)
    }
}

/// Parses `magnus(p,d,m)`, `cyclic(p,order)` or `unipotent(p,size)`.
pub fn parse_spec(text: &str) -> Result<GroupSpec> {
    let bad = || Error::Parse(format!("cannot read group spec {text:?}"));
    let (kind, rest) = text.trim().split_once('(').ok_or_else(bad)?;
    let args = rest.strip_suffix(')').ok_or_else(bad)?;
    let nums: Vec<usize> = args
        .split(',')
        .map(|s| s.trim().parse().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let p = |x: usize| u32::try_from(x).map_err(|_| bad());
    match (kind.trim(), nums.as_slice()) {
        ("magnus", &[pp, d, m]) => Ok(GroupSpec::Magnus { p: p(pp)?, d, m }),
        ("cyclic", &[pp, order]) => Ok(GroupSpec::Cyclic { p: p(pp)?, order }),
        ("unipotent" | "matrix-unipotent", &[pp, size]) => Ok(GroupSpec::MatrixUnipotent {
            p: p(pp)?,
            size,
            generators: None,
        }),
        _ => Err(bad()),
    }
}

fn spec_from_flags(args: &BuildArgs) -> Result<GroupSpec> {
    if let Some(s) = &args.spec {
        return serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()));
    }
    let missing = |flag: &str| Error::Parse(format!("missing --{flag}"));
    let p = args.p.ok_or_else(|| missing("p"))?;
    match args.kind.unwrap_or(Kind::Magnus) {
        Kind::Magnus => Ok(GroupSpec::Magnus {
            p,
            d: args.gens.ok_or_else(|| missing("gens"))?,
            m: args.trunc.ok_or_else(|| missing("trunc"))?,
        }),
        Kind::Cyclic => Ok(GroupSpec::Cyclic {
            p,
            order: args.order.ok_or_else(|| missing("order"))?,
        }),
        Kind::MatrixUnipotent => Ok(GroupSpec::MatrixUnipotent {
            p,
            size: args.size.ok_or_else(|| missing("size"))?,
            generators: None,
        }),
    }
}

/// Result of one command: what to print and the exit code.
pub struct Outcome {
    pub json: serde_json::Value,
    pub text: String,
    pub code: i32,
}

fn filtration_table(g: &FiniteGroup, spec: &GroupSpec, algorithm: Algorithm) -> Result<BTreeMap<String, Vec<usize>>> {
    let mut orders = BTreeMap::new();
    if matches!(algorithm, Algorithm::Recursive | Algorithm::All) {
        orders.insert("recursive".to_string(), zassenhaus_recursive(g).orders());
    }
    if matches!(algorithm, Algorithm::Lazard | Algorithm::All) {
        orders.insert("lazard".to_string(), zassenhaus_lazard(g).orders());
    }
    if matches!(algorithm, Algorithm::Degree | Algorithm::All) {
        match spec {
            GroupSpec::Magnus { p, d, m } => {
                let mg = build_magnus_group(*p, *d, *m)?;
                orders.insert("degree".to_string(), degree_filtration(&mg).orders());
            }
            _ if algorithm == Algorithm::Degree => {
                return Err(Error::InvalidArgument("the degree filtration needs a magnus group".into()))
            }
            _ => {}
        }
    }
    Ok(orders)
}

fn run_command(cli: &Cli) -> Result<Outcome> {
    let ws = Workspace::open(&cli.workspace)?;
    match &cli.command {
        Command::Group {
            action: GroupAction::Build(args),
        } => {
            let spec = spec_from_flags(args)?;
            let (record, _) = ws.store_group(&spec)?;
            let text = format!(
                "{} id {}\norder {}\nfiltration orders {:?}\n",
                record.name, record.id, record.order, record.filtration_orders
            );
            Ok(Outcome {
                json: serde_json::to_value(&record)?,
                text,
                code: 0,
            })
        }
        Command::Filtration { group, algorithm } => {
            let (record, g) = ws.resolve(group)?;
            let orders = filtration_table(&g, &record.spec, *algorithm)?;
            let agree = orders.values().all(|o| Some(o) == orders.values().next());
            let fresh = FiltrationRecord {
                id: record.id.clone(),
                orders,
                agree,
            };
            let cache_matches = match ws.cached_filtration(&record.id)? {
                Some(cached) if cached.orders.keys().all(|k| fresh.orders.contains_key(k)) => {
                    cached.orders.iter().all(|(k, v)| &fresh.orders[k] == v)
                }
                _ => true,
            };
            if !cache_matches {
                return Err(Error::InvariantViolation(format!(
                    "cached filtration of {} disagrees with recomputation",
                    record.id
                )));
            }
            ws.store_filtration(&fresh)?;
            let mut text = format!("{}\n", record.name);
            for (alg, o) in &fresh.orders {
                let _ = writeln!(text, "  {alg:<10} {o:?}");
            }
            let verdict = if !agree {
                "disagree".to_string()
            } else {
                format!("{}-way agree", fresh.orders.len())
            };
            let _ = writeln!(text, "{verdict}");
            let mut json = serde_json::to_value(&fresh)?;
            json["verdict"] = verdict.into();
            Ok(Outcome {
                json,
                text,
                code: if agree { 0 } else { 1 },
            })
        }
        Command::Verify { group, n, catalog } => {
            let (record, g) = ws.resolve(group)?;
            let config = HarnessConfig {
                group: record.spec.clone(),
                n: *n,
                catalog: catalog.params(),
                sign: catalog.sign(),
                separate_all: true,
            };
            let report = run_on_group(&g, &record.name, Some(&record.spec), &config)?;
            let canonical: serde_json::Value = serde_json::from_str(&report.to_canonical_json())?;
            let path = ws.store_addressed("reports", &canonical)?;
            for w in report.separation.iter().flat_map(|s| &s.witnesses) {
                ws.store_addressed("systems", &w.representation.system)?;
            }
            let text = render_report(&report, &path);
            Ok(Outcome {
                json: serde_json::from_str(&report.to_json())?,
                text,
                code: report.exit_code(),
            })
        }
        Command::Separate {
            group,
            element,
            n,
            catalog,
        } => {
            let (record, g) = ws.resolve(group)?;
            let sigma = parse_word(&g, element)?;
            let mut sep = Separator::new(&g, *n, catalog.witness_options())?;
            let mut out = SeparationRecord {
                group: record.id.clone(),
                element: element.clone(),
                n: *n,
                outcome: String::new(),
                depth: None,
                route: None,
                image: None,
                representation: None,
            };
            let code = match sep.separate(sigma)? {
                Separation::Impossible => {
                    out.outcome = "impossible".into();
                    0
                }
                Separation::Found { rep, depth, route } => {
                    out.outcome = "found".into();
                    out.depth = Some(depth);
                    out.route = Some(route);
                    let len = rep.system().total_dim();
                    out.image = Some(code_to_vector(rep.system().field(), len, rep.image_code(sigma)).entries());
                    ws.store_addressed("systems", rep.system())?;
                    out.representation = Some(rep.to_record());
                    0
                }
                Separation::Inconclusive { depth, .. } => {
                    out.outcome = format!("inconclusive(D={})", catalog.catalog_dim);
                    out.depth = Some(depth);
                    2
                }
            };
            let path = ws.store_addressed("reports", &out)?;
            let mut text = format!("{} in {}: {}\n", element, record.name, out.outcome);
            if let (Some(d), Some(r), Some(img)) = (out.depth, out.route, &out.image) {
                let _ = writeln!(text, "  depth {d}, route {r:?}, image coordinates {img:?}");
            }
            let _ = writeln!(text, "  written to {}", path.display());
            Ok(Outcome {
                json: serde_json::to_value(&out)?,
                text,
                code,
            })
        }
        Command::Pairing {
            group,
            n,
            subgroup,
            catalog,
        } => {
            let (record, g) = ws.resolve(group)?;
            let normal = if subgroup.is_empty() {
                zassenhaus_recursive(&g).term(*n).clone()
            } else {
                let seeds = subgroup.iter().map(|w| parse_word(&g, w)).collect::<Result<Vec<_>>>()?;
                normal_closure(&g, &seeds)
            };
            let ctx = PairingContext::new(&g, &normal, *n, &catalog.witness_options())?;
            let out = PairingRecord {
                group: record.id.clone(),
                subgroup: subgroup.clone(),
                summary: ctx.summary(),
            };
            let path = ws.store_addressed("reports", &out)?;
            let s = &out.summary;
            let mut text = format!(
                "{} n={} |N|={}: left dim {}, right dim {}, rank {}\n",
                record.name, n, s.normal_order, s.left_dim, s.right_dim, s.rank
            );
            for row in &s.matrix {
                let _ = writeln!(text, "  {row:?}");
            }
            let _ = writeln!(
                text,
                "left {:?}, right {:?}, trg/rep {:?}, kernels {:?}, five-term {:?}",
                s.left_nondegenerate, s.right_nondegenerate, s.trg_rep_agreement, s.kernel_equalities, s.five_term_exact
            );
            let _ = writeln!(text, "  written to {}", path.display());
            let code = match s.overall() {
                Verdict::Established => 0,
                Verdict::Inconclusive => 2,
                Verdict::Falsified => 1,
            };
            Ok(Outcome {
                json: serde_json::to_value(&out)?,
                text,
                code,
            })
        }
    }
}

fn render_report(r: &crate::verifier::VerificationReport, path: &Path) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "{} (order {}, p = {}), n = {}", r.group.name, r.group.order, r.group.p, r.n);
    let _ = writeln!(t, "filtration orders {:?}", r.filtration_orders);
    let _ = writeln!(t, "hypothesis: {} ({})", r.hypothesis.status, r.hypothesis.detail);
    for l in &r.levels {
        let _ = writeln!(
            t,
            "rank {}: intersection order {} (G_({}) order {}), systems examined {}, standard alone {}: {:?}",
            l.rank,
            l.intersection_order,
            l.rank + 1,
            l.target_order,
            l.systems_examined,
            if l.standard_sufficed { "sufficed" } else { "did not suffice" },
            l.verdict
        );
    }
    for p in &r.pairings {
        let _ = writeln!(
            t,
            "pairing k={}: rank {}, left {:?}, kernels {:?}, agree {}",
            p.rank, p.summary.rank, p.statement_pairing, p.statement_kernels, p.agree
        );
    }
    if let Some(s) = &r.separation {
        let _ = writeln!(t, "separated {}/{} elements outside G_({})", s.separated, s.attempted, r.n + 1);
    }
    let _ = writeln!(t, "verdict: {:?}", r.verdicts.overall);
    let _ = writeln!(t, "report written to {}", path.display());
    t
}

/// Parses `args`, runs the command and prints the result. Returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 3 } else { 0 };
        }
    };
    if let Some(j) = cli.jobs {
        // Fails only if a pool already exists, in which case it is reused.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    match run_command(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("json value")),
                Format::Text => print!("{}", out.text),
            }
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
