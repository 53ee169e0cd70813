//! `unimaps`: exact Weingarten integrals, genus coefficients and their identity checks.

mod output;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use output::{expression, expression_json, Format, Output};
use unitary_maps::expansion::{
    alternated_tuples, bounds_check, cumulant_haar, genus_coefficient, genus_coefficient_by_maps,
    hurwitz_reduction, master_operator_check, moment_haar, relation_grid, renormalized_cumulant,
    tutte_check, tutte_check_tensor, BoundConstants, GenusCache,
};
use unitary_maps::maps::{enumerate_maps, MapSelection};
use unitary_maps::ncpoly::{Letter, Word};
use unitary_maps::oracle::{self, MatrixTuple};
use unitary_maps::walks::monotone_triple_hurwitz;
use unitary_maps::weingarten::{series_error, weingarten_exact, weingarten_series_partial};
use unitary_maps::{Error, Permutation, SignVector};

const GRAMMAR: &str = "\
Words are whitespace-separated letters: u<k>, u<k>^-1, a<j>, a<j>*.
Permutations use cycle notation on 1..n, e.g. \"(1 2)(3 4)\"; signs are strings like \"+-+-\".";

#[derive(Parser)]
#[command(name = "unimaps", version, about = "Exact Haar-unitary integrals and maps of unitary type", after_help = GRAMMAR)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Pretty, global = true)]
    format: Format,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Cap on the number of sign-compatible pairings iterated for one tuple.
    #[arg(long, default_value_t = 10_000_000, global = true)]
    max_work: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weingarten function Wg_N on a conjugacy class.
    Wg(WgArgs),
    /// E[Tr P_1 ... Tr P_l] over independent Haar unitaries.
    Moment(ExactArgs),
    /// Joint cumulant of Tr P_1, .., Tr P_l.
    Cumulant(CumulantArgs),
    /// Coefficient of N^{-2g} in the renormalized cumulant.
    GenusCoeff(GenusArgs),
    /// Maps of unitary type with given white vertices and signs.
    EnumerateMaps(MapArgs),
    /// Monotone triple Hurwitz number.
    Hurwitz(HurwitzArgs),
    /// Tutte-type recursion for the genus coefficients.
    TutteCheck(TutteArgs),
    /// Reduction of alternated genus coefficients to Hurwitz numbers.
    HurwitzCheck(HurwitzCheckArgs),
    /// Coefficient bound in the formal expansion.
    BoundsCheck(BoundsArgs),
    /// Planar two-point relation with the master operator.
    MasterCheck(MasterArgs),
    /// Monte Carlo estimate compared with the exact value.
    McVerify(McArgs),
}

#[derive(Args)]
struct WgArgs {
    #[arg(long)]
    q: usize,
    #[arg(long)]
    n: usize,
    /// Cycle type such as "2+1"; alternatively give --pi.
    #[arg(long, conflicts_with = "pi")]
    class: Option<String>,
    #[arg(long)]
    pi: Option<String>,
    /// Also report the partial sum of the 1/N series up to this many steps.
    #[arg(long)]
    series: Option<usize>,
}

#[derive(Args)]
struct ExactArgs {
    #[arg(long)]
    n: usize,
    #[arg(required = true)]
    words: Vec<String>,
}

#[derive(Args)]
struct CumulantArgs {
    #[arg(long)]
    n: usize,
    /// Multiply by N^{l-2}.
    #[arg(long)]
    renormalized: bool,
    #[arg(required = true)]
    words: Vec<String>,
}

#[derive(Args)]
struct GenusArgs {
    #[arg(long)]
    g: u32,
    /// Sum over explicitly enumerated maps instead of walk counts.
    #[arg(long)]
    by_maps: bool,
    #[arg(required = true)]
    words: Vec<String>,
}

#[derive(Args)]
struct MapArgs {
    /// Number of labels 1..L.
    #[arg(long)]
    labels: usize,
    #[arg(long)]
    eps: String,
    #[arg(long)]
    rho: String,
    /// Colors per label, comma separated; all 1 by default.
    #[arg(long, value_delimiter = ',')]
    colors: Option<Vec<u32>>,
    /// Total number of black vertices.
    #[arg(long, conflicts_with = "genus", required_unless_present = "genus")]
    r: Option<usize>,
    #[arg(long)]
    genus: Option<u32>,
    #[arg(long)]
    connected: bool,
}

#[derive(Args)]
struct HurwitzArgs {
    #[arg(long)]
    m: usize,
    #[arg(long, default_value = "()")]
    rho: String,
    #[arg(long, default_value = "()")]
    gamma: String,
    #[arg(long, default_value = "()")]
    sigma: String,
    #[arg(long, conflicts_with = "g", required_unless_present = "g")]
    r: Option<usize>,
    /// Genus; fixes the walk length.
    #[arg(long)]
    g: Option<u32>,
}

#[derive(Args)]
struct TutteArgs {
    #[arg(long)]
    g: Option<u32>,
    /// Color of the unitary letter the recursion acts on.
    #[arg(long, default_value_t = 1)]
    color: u32,
    /// Run every tuple of the standard grid up to --g (default 2).
    #[arg(long)]
    grid: bool,
    #[arg(long, default_value_t = 6)]
    max_degree: usize,
    #[arg(long, default_value_t = 3)]
    max_l: usize,
    #[arg(long, default_value_t = 2)]
    max_colors: usize,
    words: Vec<String>,
}

#[derive(Args)]
struct HurwitzCheckArgs {
    #[arg(long)]
    g: Option<u32>,
    /// Run every alternated tuple with at most --max-m pairs and --max-l words.
    #[arg(long)]
    grid: bool,
    #[arg(long, default_value_t = 4)]
    max_m: usize,
    #[arg(long, default_value_t = 2)]
    max_l: usize,
    words: Vec<String>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    g: u32,
    /// Potential monomials q_j, one flag per monomial.
    #[arg(long = "q", required = true)]
    qs: Vec<String>,
    /// Multiplicities n_j, comma separated.
    #[arg(long = "mult", value_delimiter = ',', required = true)]
    mult: Vec<usize>,
    #[arg(required = true)]
    words: Vec<String>,
}

#[derive(Args)]
struct MasterArgs {
    p1: String,
    p2: String,
}

#[derive(Args)]
struct McArgs {
    /// One flag per word; the estimate is of the product of their traces.
    #[arg(long = "word", required = true)]
    words: Vec<String>,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON file {"N": .., "A": {"1": [[[re, im], ..], ..]}}.
    #[arg(long)]
    matrices: Option<PathBuf>,
    /// Estimate the joint cumulant instead of the moment.
    #[arg(long)]
    cumulant: bool,
    /// Acceptance radius in standard errors.
    #[arg(long, default_value_t = 4.0)]
    sigma: f64,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Engine(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

type Outcome = Result<Output, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn parse_words(texts: &[String]) -> Result<Vec<Word>, Failure> {
    texts
        .iter()
        .map(|t| Word::parse(t).map_err(Failure::from))
        .collect()
}

/// `|S^(ε)|` for the tuple: the product over colors of `(m_c!)²`.
fn pairing_count(words: &[Word]) -> BigUint {
    let mut per_color: BTreeMap<u32, usize> = BTreeMap::new();
    for x in words.iter().flat_map(|w| w.letters()) {
        if let Letter::U(c) = x {
            *per_color.entry(*c).or_default() += 1;
        }
    }
    per_color.values().map(|&m| factorial(m).pow(2)).product()
}

fn factorial(m: usize) -> BigUint {
    (1..=m).map(BigUint::from).product()
}

fn guard(work: BigUint, max_work: u64) -> Result<(), Failure> {
    if work > BigUint::from(max_work) {
        return Err(Error::WorkLimit(format!(
            "{work} pairings to iterate, cap is {max_work}; raise --max-work"
        ))
        .into());
    }
    Ok(())
}

fn class_permutation(q: usize, class: &str) -> Result<Permutation, Failure> {
    let parts: Vec<usize> = class
        .split('+')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("bad class {class:?}, expected e.g. \"2+1\"")))
        })
        .collect::<Result<_, _>>()?;
    if parts.iter().sum::<usize>() != q || parts.contains(&0) {
        return Err(usage(format!("class {class:?} is not a partition of {q}")));
    }
    let mut cycles = Vec::new();
    let mut next = 1u32;
    for p in parts {
        cycles.push((next..next + p as u32).collect::<Vec<u32>>());
        next += p as u32;
    }
    Ok(Permutation::from_cycles((1..=q as u32).collect(), &cycles)?)
}

fn wg(a: &WgArgs) -> Outcome {
    let pi = match (&a.class, &a.pi) {
        (Some(c), _) => class_permutation(a.q, c)?,
        (None, Some(p)) => Permutation::parse_on_range(p, a.q)?,
        (None, None) => Permutation::id(a.q),
    };
    let value = weingarten_exact(&pi, a.n)?;
    let mut j = json!({ "q": a.q, "n": a.n, "class": pi.cycle_type(), "value": value.to_string() });
    let mut pretty = value.to_string();
    let mut header = vec!["q", "n", "class", "value"];
    let class: Vec<String> = pi.cycle_type().iter().map(|c| c.to_string()).collect();
    let mut row = vec![
        a.q.to_string(),
        a.n.to_string(),
        class.join("+"),
        value.to_string(),
    ];
    if let Some(r) = a.series {
        let partial = weingarten_series_partial(&pi, a.n, r)?;
        let err = series_error(&pi, a.n, r)?;
        j["series"] = json!({ "steps": r, "partial": partial.to_string(), "error": err });
        pretty = format!("{value}\npartial sum to {r} steps: {partial}\nerror: {err:e}");
        header.extend(["partial", "error"]);
        row.extend([partial.to_string(), format!("{err:e}")]);
    }
    Ok(Output::new(j, pretty).table(&header, vec![row]))
}

fn genus_coeff(a: &GenusArgs, max_work: u64) -> Outcome {
    let words = parse_words(&a.words)?;
    guard(pairing_count(&words), max_work)?;
    let c = if a.by_maps {
        genus_coefficient_by_maps(a.g, &words)?
    } else {
        genus_coefficient(a.g, &words)?
    };
    let mut out = expression(&c.value);
    out.json = json!({ "g": c.g, "l": c.l, "value": expression_json(&c.value) });
    Ok(out)
}

fn enumerate(a: &MapArgs, max_work: u64) -> Outcome {
    let rho = Permutation::parse_on_range(&a.rho, a.labels)?;
    let eps = SignVector::parse(&a.eps)?;
    if eps.signs().len() != a.labels {
        return Err(usage(format!(
            "--eps has {} signs for {} labels",
            eps.signs().len(),
            a.labels
        )));
    }
    let colors = a.colors.clone().unwrap_or_else(|| vec![1; a.labels]);
    let mut per_color: BTreeMap<u32, usize> = BTreeMap::new();
    for (s, c) in eps.signs().iter().zip(&colors) {
        if *s > 0 {
            *per_color.entry(*c).or_default() += 1;
        }
    }
    guard(
        per_color.values().map(|&m| factorial(m).pow(2)).product(),
        max_work,
    )?;
    let selection = match (a.r, a.genus) {
        (Some(r), _) => MapSelection::BlackVertices(r),
        (None, Some(g)) => MapSelection::Genus(g),
        (None, None) => return Err(usage("one of --r, --genus is required")),
    };
    let maps = enumerate_maps(&rho, &eps, &colors, selection, a.connected)?;
    let mut rows = Vec::new();
    let mut pretty = Vec::new();
    for m in &maps {
        let d = m.diagnostics()?;
        let walks: Vec<String> = m
            .walks()
            .iter()
            .map(|(c, w)| {
                let steps: Vec<String> = w
                    .steps()
                    .iter()
                    .map(|t| format!("({} {})", t.a, t.b))
                    .collect();
                format!("{c}:{}", steps.join(""))
            })
            .collect();
        rows.push(vec![
            m.pi().to_string(),
            walks.join(" "),
            d.phi.to_string(),
            d.genus.to_string(),
        ]);
        pretty.push(format!(
            "π = {}  walks = [{}]  φ = {}  genus {}",
            m.pi(),
            walks.join(" "),
            d.phi,
            d.genus
        ));
    }
    let j = Value::Array(maps.iter().map(|m| m.to_json()).collect());
    pretty.push(format!("{} maps", maps.len()));
    Ok(Output::new(j, pretty.join("\n")).table(&["pi", "walks", "phi", "genus"], rows))
}

fn hurwitz(a: &HurwitzArgs) -> Outcome {
    let p = |s: &str| Permutation::parse_on_range(s, a.m);
    let (rho, gamma, sigma) = (p(&a.rho)?, p(&a.gamma)?, p(&a.sigma)?);
    let r = match (a.r, a.g) {
        (Some(r), _) => Some(r),
        (None, Some(g)) => {
            let r = unitary_maps::walks::hurwitz_length(&rho, &gamma, &sigma, g as i64);
            (r >= 0).then_some(r as usize)
        }
        (None, None) => return Err(usage("one of --r, --g is required")),
    };
    let count = match r {
        Some(r) => monotone_triple_hurwitz(&rho, &gamma, &sigma, r)?,
        None => BigUint::from(0u32),
    };
    let j = json!({ "m": a.m, "r": r, "count": count.to_string() });
    let r_text = r.map_or("-".to_string(), |r| r.to_string());
    Ok(Output::new(j, count.to_string()).table(
        &["m", "r", "count"],
        vec![vec![a.m.to_string(), r_text, count.to_string()]],
    ))
}

fn tutte(a: &TutteArgs, max_work: u64) -> Outcome {
    let cache = GenusCache::new();
    if a.grid {
        let top = a.g.unwrap_or(2);
        let grid = relation_grid(a.max_degree, a.max_l, a.max_colors);
        for (t, _) in &grid {
            guard(pairing_count(t), max_work)?;
        }
        let (mut checks, mut failures) = (0usize, Vec::new());
        for (t, c) in &grid {
            for g in 0..=top {
                let mut results = vec![tutte_check_tensor(g, t, *c, &cache)?];
                if let Ok(x) = tutte_check(g, t, *c, &cache) {
                    results.push(x);
                }
                for x in results {
                    checks += 1;
                    if !x.equal {
                        let words: Vec<String> = t.iter().map(|w| w.to_string()).collect();
                        failures.push(
                            json!({ "g": g, "color": c, "words": words, "check": x.to_json() }),
                        );
                    }
                }
            }
        }
        let j = json!({ "tuples": grid.len(), "checks": checks, "failures": failures });
        let pretty = format!(
            "{} tuples, {checks} identities, {} failures",
            grid.len(),
            failures.len()
        );
        let row = vec![
            grid.len().to_string(),
            checks.to_string(),
            failures.len().to_string(),
        ];
        return Ok(Output::new(j, pretty)
            .table(&["tuples", "checks", "failures"], vec![row])
            .failed(!failures.is_empty()));
    }
    let g =
        a.g.ok_or_else(|| usage("--g is required unless --grid is given"))?;
    let words = parse_words(&a.words)?;
    if words.is_empty() {
        return Err(usage("give the words of the tuple or --grid"));
    }
    guard(pairing_count(&words), max_work)?;
    let tensor = tutte_check_tensor(g, &words, a.color, &cache)?;
    let theorem = tutte_check(g, &words, a.color, &cache).ok();
    let ok = tensor.equal && theorem.as_ref().is_none_or(|x| x.equal);
    let j = json!({
        "g": g,
        "color": a.color,
        "tensor": tensor.to_json(),
        "expanded": theorem.as_ref().map(|x| x.to_json()),
        "equal": ok,
    });
    let mut pretty = format!(
        "tensor form: {}\n  lhs = {}\n  rhs = {}",
        verdict(tensor.equal),
        tensor.lhs,
        tensor.rhs
    );
    let mut rows = vec![vec![
        "tensor".into(),
        tensor.lhs.to_string(),
        tensor.rhs.to_string(),
        tensor.equal.to_string(),
    ]];
    match &theorem {
        Some(x) => {
            pretty.push_str(&format!(
                "\nexpanded form: {}\n  lhs = {}\n  rhs = {}",
                verdict(x.equal),
                x.lhs,
                x.rhs
            ));
            rows.push(vec![
                "expanded".into(),
                x.lhs.to_string(),
                x.rhs.to_string(),
                x.equal.to_string(),
            ]);
        }
        None => pretty
            .push_str("\nexpanded form: not applicable (needs degree at least 4 in the color)"),
    }
    Ok(Output::new(j, pretty)
        .table(&["form", "lhs", "rhs", "equal"], rows)
        .failed(!ok))
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "holds"
    } else {
        "FAILS"
    }
}

fn hurwitz_check(a: &HurwitzCheckArgs, max_work: u64) -> Outcome {
    let tuples: Vec<Vec<Word>> = if a.grid {
        let mut v = Vec::new();
        for m in 1..=a.max_m {
            for l in 1..=a.max_l.min(m) {
                for generic in [false, true] {
                    v.extend(alternated_tuples(m, l, generic));
                }
            }
        }
        v
    } else {
        let words = parse_words(&a.words)?;
        if words.is_empty() {
            return Err(usage("give the words of the tuple or --grid"));
        }
        vec![words]
    };
    let top = a.g.unwrap_or(1);
    let genera: Vec<u32> = if a.grid || a.g.is_none() {
        (0..=top).collect()
    } else {
        vec![top]
    };
    let mut rows = Vec::new();
    let mut results = Vec::new();
    let mut bad = 0;
    for t in &tuples {
        // the reduction sums over pairs (ρ, σ) in S_m × S_m
        let m: usize = t.iter().map(Word::degree).sum::<usize>() / 2;
        guard(factorial(m).pow(2), max_work)?;
        for &g in &genera {
            let reduced = hurwitz_reduction(g, t)?;
            let direct = genus_coefficient(g, t)?.value;
            let equal = reduced == direct;
            bad += usize::from(!equal);
            let words: Vec<String> = t.iter().map(|w| w.to_string()).collect();
            rows.push(vec![
                words.join(" | "),
                g.to_string(),
                reduced.to_string(),
                direct.to_string(),
                equal.to_string(),
            ]);
            results.push(json!({
                "words": words,
                "g": g,
                "hurwitz": reduced.to_string(),
                "maps": direct.to_string(),
                "equal": equal,
            }));
        }
    }
    let pretty = if tuples.len() == 1 {
        rows.iter()
            .map(|r| format!("g={}: {} ({})", r[1], r[2], verdict(r[4] == "true")))
            .collect::<Vec<_>>()
            .join("\n")
    } else {
        format!("{} checks, {bad} mismatches", rows.len())
    };
    let j = json!({ "checks": results, "mismatches": bad });
    Ok(Output::new(j, pretty)
        .table(&["words", "g", "hurwitz", "maps", "equal"], rows)
        .failed(bad > 0))
}

fn bounds(a: &BoundsArgs, max_work: u64) -> Outcome {
    let qs = parse_words(&a.qs)?;
    let words = parse_words(&a.words)?;
    if qs.len() != a.mult.len() {
        return Err(usage(format!(
            "{} monomials --q but {} multiplicities --mult",
            qs.len(),
            a.mult.len()
        )));
    }
    let mut all = words.clone();
    for (q, &k) in qs.iter().zip(&a.mult) {
        all.extend(std::iter::repeat_n(q.clone(), k));
    }
    guard(pairing_count(&all), max_work)?;
    let cache = GenusCache::new();
    let b = bounds_check(a.g, &words, &qs, &a.mult, &cache)?;
    let nu = qs.iter().map(Word::degree).max().unwrap_or(0);
    let radius = BoundConstants::radius(qs.len(), nu);
    let mut j = b.to_json();
    j["radius"] = json!(radius);
    let lhs = b.lhs.to_f64().unwrap_or(f64::NAN);
    let pretty = format!(
        "{} ≤ {:e}: {}\nconvergence radius R_V = {radius:e}",
        b.lhs,
        b.rhs,
        verdict(b.holds)
    );
    let row = vec![
        b.lhs.to_string(),
        format!("{lhs:e}"),
        format!("{:e}", b.rhs),
        b.holds.to_string(),
        format!("{radius:e}"),
    ];
    Ok(Output::new(j, pretty)
        .table(&["lhs", "lhs_approx", "rhs", "holds", "radius"], vec![row])
        .failed(!b.holds))
}

fn master(a: &MasterArgs, max_work: u64) -> Outcome {
    let p1 = Word::parse(&a.p1)?;
    let p2 = Word::parse(&a.p2)?;
    guard(pairing_count(&[p1.clone(), p2.clone()]), max_work)?;
    let c = master_operator_check(&p1, &p2, &GenusCache::new())?;
    let pretty = format!("{}\n  lhs = {}\n  rhs = {}", verdict(c.equal), c.lhs, c.rhs);
    let row = vec![c.lhs.to_string(), c.rhs.to_string(), c.equal.to_string()];
    Ok(Output::new(c.to_json(), pretty)
        .table(&["lhs", "rhs", "equal"], vec![row])
        .failed(!c.equal))
}

fn mc_verify(a: &McArgs, max_work: u64) -> Outcome {
    let words = parse_words(&a.words)?;
    guard(pairing_count(&words), max_work)?;
    let tuple = match &a.matrices {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            let v: Value = serde_json::from_str(&text)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let t = MatrixTuple::from_json(&v)?;
            if t.n != a.n {
                return Err(usage(format!(
                    "--n {} but the matrices are {}x{}",
                    a.n, t.n, t.n
                )));
            }
            t
        }
        None => MatrixTuple::empty(a.n),
    };
    let rows = oracle::sample_traces(&words, &tuple, a.samples, a.seed)?;
    let (report, exact) = if a.cumulant {
        (
            oracle::cumulant_report(&rows, words.len()),
            cumulant_haar(&words, a.n)?,
        )
    } else {
        (oracle::moment_report(&rows), moment_haar(&words, a.n)?)
    };
    let target = exact.evaluate(&tuple.a, a.n)?;
    let report = report.with_target(target);
    let ok = report.within(a.sigma);
    let mut j = report.to_json();
    j["exact"] = json!(exact.to_string());
    j["within"] = json!(ok);
    let d = report.sigma_distance.unwrap_or(f64::NAN);
    let pretty = format!(
        "estimate {:.6} ± {:.2e} over {} samples\nexact    {:.6} = {exact}\ndistance {d:.2}σ: {}",
        report.estimate,
        report.stderr,
        report.samples,
        target,
        verdict(ok)
    );
    let row = vec![
        report.estimate.re.to_string(),
        report.estimate.im.to_string(),
        report.stderr.to_string(),
        target.re.to_string(),
        target.im.to_string(),
        d.to_string(),
        ok.to_string(),
    ];
    Ok(Output::new(j, pretty)
        .table(
            &[
                "estimate_re",
                "estimate_im",
                "stderr",
                "target_re",
                "target_im",
                "sigma_distance",
                "within",
            ],
            vec![row],
        )
        .failed(!ok))
}

fn run(cli: &Cli) -> Outcome {
    let w = cli.max_work;
    match &cli.command {
        Command::Wg(a) => wg(a),
        Command::Moment(a) => {
            let words = parse_words(&a.words)?;
            guard(pairing_count(&words), w)?;
            Ok(expression(&moment_haar(&words, a.n)?))
        }
        Command::Cumulant(a) => {
            let words = parse_words(&a.words)?;
            guard(pairing_count(&words), w)?;
            let t = if a.renormalized {
                renormalized_cumulant(&words, a.n)?
            } else {
                cumulant_haar(&words, a.n)?
            };
            Ok(expression(&t))
        }
        Command::GenusCoeff(a) => genus_coeff(a, w),
        Command::EnumerateMaps(a) => enumerate(a, w),
        Command::Hurwitz(a) => hurwitz(a),
        Command::TutteCheck(a) => tutte(a, w),
        Command::HurwitzCheck(a) => hurwitz_check(a, w),
        Command::BoundsCheck(a) => bounds(a, w),
        Command::MasterCheck(a) => master(a, w),
        Command::McVerify(a) => mc_verify(a, w),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("error: cannot start {t} threads: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = out.write(cli.format, &mut stdout) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(if out.failed { 2 } else { 0 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\n{GRAMMAR}");
            ExitCode::from(1)
        }
        Err(Failure::Engine(e)) => {
            eprintln!("error: {e}");
            if matches!(e, Error::Parse { .. }) {
                eprintln!("\n{GRAMMAR}");
            }
            ExitCode::from(1)
        }
    }
}
