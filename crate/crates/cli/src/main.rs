use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use thomason::coeff::{CoeffSystem, Kind, Representation, Variance};
use thomason::complexes::{
    bw_direct_complex, cohomology, homology, low_degree_limit, thomason_cochain_complex,
};
use thomason::exactalg::{HomologyGroup, RingTag, Scalar, Q, Z};
use thomason::fibration::{
    fiber_is_coreflective, fibration_e2, fibration_e2_homology, grothendieck_construction, is_grothendieck_fibration,
    SplitFibration,
};
use thomason::fincat::FinCat;
use thomason::io;
use thomason::kan::{colim_e2, leray_e2, E2Page};
use thomason::simplex::{nerve_level, nondegenerate_level};
use thomason::verify::run_acceptance;
use thomason::Error;

const THREADS_VAR: &str = "THOMASON_THREADS";

#[derive(Parser)]
#[command(name = "thomason", version)]
#[command(about = "Cohomology of finite categories with coefficients in natural systems")]
struct Cli {
    /// Output format; `text` prints a human-readable summary
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Ring {
    #[value(name = "Z")]
    Z,
    #[value(name = "Q")]
    Q,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FibrationTask {
    Check,
    E2,
    Locality,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate input files, printing their canonical JSON form
    Validate {
        #[arg(long)]
        category: Option<PathBuf>,
        /// Coefficient system on --category
        #[arg(long, requires = "category")]
        coeff: Option<PathBuf>,
        #[arg(long)]
        functor: Option<PathBuf>,
        /// Strict functor into Cat over --category
        #[arg(long, requires = "category")]
        pseudofunctor: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "Z")]
        ring: Ring,
    },
    /// Count (and optionally list) the n-simplices of the nerve
    Nerve {
        #[arg(long)]
        category: PathBuf,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        nondegenerate: bool,
        /// Include the simplex keys
        #[arg(long)]
        list: bool,
    },
    /// Thomason cohomology in one degree (homology with --homology)
    Cohomology(DegreeArgs),
    /// Thomason homology in one degree
    Homology(DegreeArgs),
    /// Compare the Baues-Wirsching complex with the pulled-back Thomason complex
    CompareBw {
        #[arg(long)]
        category: PathBuf,
        /// A baues-wirsching coefficient system
        #[arg(long)]
        coeff: PathBuf,
        #[arg(long, value_enum, default_value = "Z")]
        ring: Ring,
        /// Highest cochain degree compared
        #[arg(long, default_value_t = 4)]
        top: usize,
    },
    /// lim (covariant) or colim (contravariant) against H^0 / H_0
    Limit {
        #[arg(long)]
        category: PathBuf,
        #[arg(long)]
        coeff: PathBuf,
        #[arg(long, value_enum, default_value = "Z")]
        ring: Ring,
    },
    /// E2 page of the spectral sequence of a functor u: E -> B
    LerayE2 {
        #[arg(long)]
        functor: PathBuf,
        /// Coefficient system on the source of --functor
        #[arg(long)]
        coeff: PathBuf,
        #[arg(long)]
        pmax: usize,
        #[arg(long)]
        qmax: usize,
        #[arg(long)]
        homology: bool,
    },
    /// Reports on the Grothendieck construction of a strict functor
    Fibration {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        pseudofunctor: PathBuf,
        #[arg(value_enum, default_value = "check")]
        task: FibrationTask,
        /// Coefficient system on the base, pulled back to the total category
        /// (constant rank 1 when omitted)
        #[arg(long)]
        coeff: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        pmax: usize,
        #[arg(long, default_value_t = 2)]
        qmax: usize,
        #[arg(long)]
        homology: bool,
    },
    /// Run the acceptance suite on a seeded corpus
    Verify {
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(clap::Args)]
struct DegreeArgs {
    #[arg(long)]
    category: PathBuf,
    #[arg(long)]
    coeff: PathBuf,
    #[arg(long, value_enum, default_value = "Z")]
    ring: Ring,
    #[arg(long)]
    degree: usize,
    /// Use the normalized complex
    #[arg(long)]
    normalized: bool,
    /// Compute homology instead of cohomology
    #[arg(long)]
    homology: bool,
}

/// A library error together with the input it concerns.
struct Failure {
    error: Error,
    context: String,
}

type Outcome<T> = std::result::Result<T, Failure>;

trait Context<T> {
    fn context(self, what: impl FnOnce() -> String) -> Outcome<T>;
}

impl<T> Context<T> for thomason::Result<T> {
    fn context(self, what: impl FnOnce() -> String) -> Outcome<T> {
        self.map_err(|error| Failure { error, context: what() })
    }
}

fn shown(p: &Path) -> String {
    p.display().to_string()
}

fn category(path: &Path) -> Outcome<Arc<FinCat>> {
    io::read_category(path).map(Arc::new).context(|| shown(path))
}

fn coefficient<S: Scalar>(path: &Path, base: &Arc<FinCat>) -> Outcome<CoeffSystem<S>> {
    io::read_coefficient(path, base).context(|| shown(path))
}

fn fibration(base: &Path, g: &Path) -> Outcome<SplitFibration> {
    let b = category(base)?;
    let v = io::load_json(g).context(|| shown(g))?;
    let functor = io::parse_strict_functor(&v, &b, &io::base_dir(g)).context(|| shown(g))?;
    grothendieck_construction(functor).context(|| shown(g))
}

fn group_json(degree: usize, g: &HomologyGroup) -> Value {
    let mut v = serde_json::to_value(g).expect("homology groups serialize");
    v.as_object_mut().expect("object").insert("degree".into(), json!(degree));
    v
}

/// Display form of a group computed over `ring`; over ℚ only the dimension matters.
fn group_text(g: &HomologyGroup, ring: RingTag) -> String {
    match (ring, g.free_rank) {
        (RingTag::Integers, _) => g.to_string(),
        (RingTag::Rationals, 0) => "0".into(),
        (RingTag::Rationals, 1) => "Q".into(),
        (RingTag::Rationals, r) => format!("Q^{r}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(n) = std::env::var(THREADS_VAR) {
        match n.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("{THREADS_VAR} must be a positive integer, got `{n}`");
                return ExitCode::from(1);
            }
        }
    }
    let format = cli.format;
    match catch_unwind(AssertUnwindSafe(|| run(cli.command))) {
        Ok(Ok(Report { json, text, failed })) => {
            match (format, text) {
                (Format::Text, Some(t)) => print!("{t}"),
                _ => println!("{}", serde_json::to_string_pretty(&json).expect("reports serialize")),
            }
            // a failing acceptance criterion is a defect, not a usage error
            if failed {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Ok(Err(f)) => {
            let code = if f.error.is_internal() { 2 } else { 1 };
            let diagnostic = json!({
                "error": f.error.kind(),
                "message": f.error.to_string(),
                "context": f.context,
            });
            eprintln!("{}", serde_json::to_string_pretty(&diagnostic).expect("diagnostics serialize"));
            ExitCode::from(code)
        }
        Err(_) => {
            eprintln!("{}", json!({"error": "Internal", "message": "panic", "context": "see above"}));
            ExitCode::from(2)
        }
    }
}

struct Report {
    json: Value,
    text: Option<String>,
    failed: bool,
}

impl Report {
    fn json(json: Value) -> Report {
        Report { json, text: None, failed: false }
    }

    fn with_text(json: Value, text: String) -> Report {
        Report { json, text: Some(text), failed: false }
    }
}

fn run(command: Command) -> Outcome<Report> {
    match command {
        Command::Validate { category: c, coeff, functor, pseudofunctor, ring } => {
            validate(c.as_deref(), coeff.as_deref(), functor.as_deref(), pseudofunctor.as_deref(), ring)
        }
        Command::Nerve { category: c, dim, nondegenerate, list } => {
            let cat = category(&c)?;
            let level = if nondegenerate { nondegenerate_level(&cat, dim) } else { nerve_level(&cat, dim) };
            let mut out = json!({ "dim": dim, "nondegenerate": nondegenerate, "count": level.len() });
            if list {
                out["simplices"] = level.iter().map(|s| json!(s.key(&cat))).collect();
            }
            let text = format!("{} {}simplices of dimension {dim}\n", level.len(), if nondegenerate { "nondegenerate " } else { "" });
            Ok(Report::with_text(out, text))
        }
        Command::Cohomology(a) => {
            let homology = a.homology;
            degree(a, homology)
        }
        Command::Homology(a) => degree(a, true),
        Command::CompareBw { category: c, coeff, ring, top } => match ring {
            Ring::Z => compare_bw::<Z>(&c, &coeff, top),
            Ring::Q => compare_bw::<Q>(&c, &coeff, top),
        },
        Command::Limit { category: c, coeff, ring } => match ring {
            Ring::Z => limit::<Z>(&c, &coeff),
            Ring::Q => limit::<Q>(&c, &coeff),
        },
        Command::LerayE2 { functor, coeff, pmax, qmax, homology } => {
            let u = io::read_functor(&functor).context(|| shown(&functor))?;
            let t = coefficient::<Q>(&coeff, u.source())?;
            let page = if homology { colim_e2(&u, &t, pmax, qmax) } else { leray_e2(&u, &t, pmax, qmax) }
                .context(|| format!("{} over {}", shown(&coeff), shown(&functor)))?;
            Ok(page_report(page))
        }
        Command::Fibration { base, pseudofunctor, task, coeff, pmax, qmax, homology } => {
            fibration_task(&base, &pseudofunctor, task, coeff.as_deref(), pmax, qmax, homology)
        }
        Command::Verify { seed } => {
            let results = run_acceptance(seed);
            let mut text = String::new();
            for r in &results {
                text.push_str(&format!(
                    "{} {:>2}  {:<66} {:>6} ms  {}\n",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.id,
                    r.title,
                    r.millis,
                    r.detail
                ));
            }
            let passed = results.iter().filter(|r| r.passed).count();
            text.push_str(&format!("{passed}/{} criteria passed\n", results.len()));
            let all = passed == results.len();
            let json = json!({ "seed": seed, "passed": all, "criteria": results });
            Ok(Report { json, text: Some(text), failed: !all })
        }
    }
}

fn validate(c: Option<&Path>, coeff: Option<&Path>, functor: Option<&Path>, g: Option<&Path>, ring: Ring) -> Outcome<Report> {
    let mut out = serde_json::Map::new();
    if let Some(c) = c {
        let cat = category(c)?;
        out.insert("category".into(), io::category_to_json(&cat));
        if let Some(t) = coeff {
            let v = match ring {
                Ring::Z => io::coefficient_to_json(&coefficient::<Z>(t, &cat)?),
                Ring::Q => io::coefficient_to_json(&coefficient::<Q>(t, &cat)?),
            };
            out.insert("coeff".into(), v);
        }
        if let Some(g) = g {
            let v = io::load_json(g).context(|| shown(g))?;
            let functor = io::parse_strict_functor(&v, &cat, &io::base_dir(g)).context(|| shown(g))?;
            out.insert("pseudofunctor".into(), io::strict_functor_to_json(&functor));
        }
    }
    if let Some(u) = functor {
        let f = io::read_functor(u).context(|| shown(u))?;
        out.insert("functor".into(), io::functor_to_json(&f));
    }
    if out.is_empty() {
        return Err(Failure { error: Error::Parse("nothing to validate".into()), context: "arguments".into() });
    }
    out.insert("valid".into(), json!(true));
    Ok(Report::json(Value::Object(out)))
}

fn degree(a: DegreeArgs, homology_side: bool) -> Outcome<Report> {
    let cat = category(&a.category)?;
    let g = match a.ring {
        Ring::Z => degree_in::<Z>(&cat, &a, homology_side)?,
        Ring::Q => degree_in::<Q>(&cat, &a, homology_side)?,
    };
    let ring = match a.ring {
        Ring::Z => RingTag::Integers,
        Ring::Q => RingTag::Rationals,
    };
    let text = format!("{}{} = {}\n", if homology_side { "H_" } else { "H^" }, a.degree, group_text(&g, ring));
    Ok(Report::with_text(group_json(a.degree, &g), text))
}

fn degree_in<S: Scalar>(cat: &Arc<FinCat>, a: &DegreeArgs, homology_side: bool) -> Outcome<HomologyGroup> {
    let t = coefficient::<S>(&a.coeff, cat)?;
    let what = || format!("degree {} with {}", a.degree, shown(&a.coeff));
    if a.normalized {
        // the normalized complex must be built one degree past the requested one
        let groups = thomason::complexes::homology_groups(&side(&t, homology_side).context(what)?, a.degree, true).context(what)?;
        return Ok(groups[a.degree].clone());
    }
    if homology_side {
        homology(&t, a.degree).context(what)
    } else {
        cohomology(&t, a.degree).context(what)
    }
}

/// `t` itself after checking its variance matches the requested side.
fn side<S: Scalar>(t: &CoeffSystem<S>, homology_side: bool) -> thomason::Result<CoeffSystem<S>> {
    match (t.variance(), homology_side) {
        (Variance::Covariant, false) | (Variance::Contravariant, true) => Ok(t.clone()),
        (_, true) => Err(Error::VarianceMismatch { expected: "contravariant" }),
        (_, false) => Err(Error::VarianceMismatch { expected: "covariant" }),
    }
}

fn compare_bw<S: Scalar>(c: &Path, coeff: &Path, top: usize) -> Outcome<Report> {
    let cat = category(c)?;
    let t = coefficient::<S>(coeff, &cat)?;
    let what = || shown(coeff);
    let pulled = match t.representation() {
        Representation::PulledBack(p) if p.kind() == Kind::BauesWirsching && t.variance() == Variance::Covariant => p,
        _ => {
            return Err(Failure {
                error: Error::UnsupportedCoefficientKind("compare-bw needs a covariant baues-wirsching system".into()),
                context: what(),
            })
        }
    };
    let fc = pulled.factorization().expect("baues-wirsching systems carry their factorization category");
    let direct = bw_direct_complex(fc, pulled.data(), top).context(what)?;
    let th = thomason_cochain_complex(&t, top).context(what)?;
    let (a, b) = (direct.complex(), th.complex());
    let degrees: Vec<Value> = (0..a.diffs().len().min(b.diffs().len()))
        .map(|k| {
            json!({
                "degree": k,
                "dims": [a.dims()[k], a.dims()[k + 1]],
                "equal": a.diffs()[k] == b.diffs()[k],
            })
        })
        .collect();
    let equal = a == b;
    if !equal {
        return Err(Failure {
            error: Error::Internal("Baues-Wirsching and Thomason complexes differ".into()),
            context: serde_json::to_string(&degrees).expect("serializes"),
        });
    }
    let groups: Vec<Value> = (0..top)
        .map(|n| a.homology(n).map(|h| group_json(n, &h.group)))
        .collect::<thomason::Result<_>>()
        .context(what)?;
    Ok(Report::json(json!({ "equal": equal, "top": top, "degrees": degrees, "cohomology": groups })))
}

fn limit<S: Scalar>(c: &Path, coeff: &Path) -> Outcome<Report> {
    let cat = category(c)?;
    let t = coefficient::<S>(coeff, &cat)?;
    let what = || shown(coeff);
    let lim = low_degree_limit(&t).context(what)?;
    let (name, h0) = match t.variance() {
        Variance::Covariant => ("lim", cohomology(&t, 0).context(what)?),
        Variance::Contravariant => ("colim", homology(&t, 0).context(what)?),
    };
    if lim != h0 {
        return Err(Failure { error: Error::Internal(format!("{name} = {lim} but degree 0 gives {h0}")), context: what() });
    }
    let text = format!("{name} = {}\n", group_text(&lim, S::RING));
    Ok(Report::with_text(json!({ "kind": name, "value": lim, "equals_degree_zero": true }), text))
}

fn page_text(page: &E2Page) -> String {
    let mut s = String::new();
    for q in (0..=page.qmax).rev() {
        s.push_str(&format!("q={q:<2}|"));
        for p in 0..=page.pmax {
            s.push_str(&format!(" {:>8}", group_text(&page.grid[p][q], page.ring)));
        }
        s.push('\n');
    }
    s.push_str("     +");
    s.push_str(&"-".repeat(9 * (page.pmax + 1)));
    s.push('\n');
    let abut: Vec<String> = page.abutment.iter().map(|g| group_text(g, page.ring)).collect();
    s.push_str(&format!("abutment: {}\n", abut.join(", ")));
    s
}

fn page_report(page: E2Page) -> Report {
    let check = page.check();
    let text = format!("{}all checks hold: {}\n", page_text(&page), check.all_hold());
    Report::with_text(json!({ "page": page, "check": check }), text)
}

fn fibration_task(
    base: &Path,
    g: &Path,
    task: FibrationTask,
    coeff: Option<&Path>,
    pmax: usize,
    qmax: usize,
    homology_side: bool,
) -> Outcome<Report> {
    let fib = fibration(base, g)?;
    let variance = if homology_side { Variance::Contravariant } else { Variance::Covariant };
    let on_base = match coeff {
        Some(p) => coefficient::<Q>(p, fib.base())?,
        None => CoeffSystem::constant(fib.base().clone(), 1, variance),
    };
    let what = || coeff.map(shown).unwrap_or_else(|| "constant coefficients".into());
    let t = fib.pull_back(&on_base).context(what)?;
    let b = fib.base();
    match task {
        FibrationTask::Check => {
            let check = is_grothendieck_fibration(fib.projection());
            let fibers: Vec<Value> = b
                .object_ids()
                .map(|x| {
                    Ok(json!({
                        "object": b.obj_name(x),
                        "fiber_objects": fib.functor().fiber(x).num_objects(),
                        "fiber_morphisms": fib.functor().fiber(x).num_morphisms(),
                        "coreflective": fiber_is_coreflective(fib.projection(), x)?,
                    }))
                })
                .collect::<thomason::Result<_>>()
                .context(|| shown(g))?;
            let text = format!(
                "total category: {} objects, {} morphisms; fibration: {}\n",
                fib.total().num_objects(),
                fib.total().num_morphisms(),
                check.is_fibration()
            );
            let json = json!({
                "total": { "objects": fib.total().num_objects(), "morphisms": fib.total().num_morphisms() },
                "check": check,
                "fibers": fibers,
            });
            Ok(Report::with_text(json, text))
        }
        FibrationTask::E2 => {
            let page = if homology_side { fibration_e2_homology(&fib, &t, pmax, qmax) } else { fibration_e2(&fib, &t, pmax, qmax) }
                .context(what)?;
            Ok(page_report(page))
        }
        FibrationTask::Locality => {
            if homology_side {
                return Err(Failure {
                    error: Error::VarianceMismatch { expected: "covariant" },
                    context: "locality compares cohomology".into(),
                });
            }
            let reports = b
                .object_ids()
                .flat_map(|x| (0..=qmax).map(move |q| (x, q)))
                .map(|(x, q)| fib.locality(&t, x, q))
                .collect::<thomason::Result<Vec<_>>>()
                .context(what)?;
            let all = reports.iter().all(|r| r.is_isomorphism);
            Ok(Report::json(json!({ "all_isomorphisms": all, "reports": reports })))
        }
    }
}
