mod input;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use wronski::dependence::{decide, distinct_order_reduction, format_matrix, least_order_sides};
use wronski::fermat::{degree_report, fermat_report, Checks, FermatConfig, Tails};
use wronski::rational::fmt_rat;
use wronski::vandermonde::{
    eval_v, eval_v_tilde, key_identity_sides, rec_sign_check, translation_invariance_check, zero_set_certify,
    CertifyOptions, ColumnTuple, Direction, Variant,
};
use wronski::wordcomb::{
    enumerate_full_sets_capped, foliation_ratio, full_set_size, full_set_weight, min_weight_for_size,
    weight_density, DEFAULT_ENUMERATION_CAP,
};
use wronski::wronskian::{
    eval_wronskian, is_geometric, GeometricMode, WronskianCombination, DEFAULT_EXACT_BUDGET, DEFAULT_TRIALS,
};
use wronski::{Error, ExponentOrder, Polynomial, WordSet};

const SCHEMA: &str = "wronski/1";
const DEFAULT_SEED: u64 = 0;

#[derive(Parser)]
#[command(name = "wronski", version, about = "Generalized Wronskians, full sets and Vandermonde determinants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads (0 uses all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Maximum number of full sets enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// List the full sets of size m over p letters.
    Fullsets {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        m: usize,
    },
    /// Size, order, weight, multidegree and characteristic sequence of a word set.
    Stats {
        /// Words as letter lists, e.g. "[[1],[2],[1,2]]".
        #[arg(long)]
        set: String,
        #[arg(long)]
        p: Option<usize>,
    },
    /// Evaluate a pure generalized Wronskian on polynomials.
    Wronskian {
        #[arg(long)]
        set: String,
        #[arg(long)]
        p: Option<usize>,
        #[arg(required = true)]
        exprs: Vec<String>,
    },
    /// Decide whether a Wronskian (or a combination) is geometric.
    Geometric {
        #[arg(long, conflicts_with = "combination", required_unless_present = "combination")]
        set: Option<String>,
        #[arg(long)]
        p: Option<usize>,
        /// JSON combination {"m": .., "p": .., "terms": [{"coeff": "1/2", "set": [[1,0]]}]}.
        #[arg(long)]
        combination: Option<String>,
        #[arg(long, value_enum, default_value_t = GeoMode::Exact)]
        mode: GeoMode,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_EXACT_BUDGET)]
        budget: usize,
    },
    /// Decide linear independence of polynomials.
    Indep {
        #[arg(long)]
        p: usize,
        #[arg(required = true)]
        exprs: Vec<String>,
    },
    /// Transform an independent family to one with distinct series orders.
    Reduce {
        #[arg(long)]
        p: usize,
        #[arg(required = true)]
        exprs: Vec<String>,
    },
    /// Evaluate a geometric Vandermonde determinant or check one of its identities.
    Vandermonde {
        #[arg(long)]
        set: String,
        #[arg(long)]
        p: Option<usize>,
        /// Columns as rows of rationals, e.g. "[[1,2],[\"1/2\",0]]".
        #[arg(long, conflicts_with = "symbolic")]
        cols: Option<String>,
        /// Use the reduced determinant with an implicit zero column.
        #[arg(long)]
        tilde: bool,
        /// Use symbolic columns x_{l,k}.
        #[arg(long)]
        symbolic: bool,
        #[arg(long, value_enum)]
        check: Option<VCheck>,
        /// Exponent tuples for the key identity, e.g. "[[0,0],[1,0],[0,2]]".
        #[arg(long)]
        alphas: Option<String>,
    },
    /// Certify the zero-set description of geometric Vandermonde determinants.
    Certify {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value_t = VariantArg::A)]
        variant: VariantArg,
        #[arg(long, value_enum, default_value_t = DirectionArg::Both)]
        direction: DirectionArg,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Sampling grid (raised to at least 2(m+1)).
        #[arg(long, default_value_t = 0)]
        grid: u32,
    },
    /// Checks on the Fermat hypersurface.
    Fermat {
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        delta: u32,
        #[arg(long, value_enum, default_value_t = FCheck::All)]
        check: FCheck,
        #[arg(long, value_enum, default_value_t = TailsArg::Symbolic)]
        tails: TailsArg,
        /// Also list which degrees up to this bound exceed the threshold.
        #[arg(long)]
        max_delta: Option<u32>,
    },
    /// Growth of the canonical full sets U_n.
    Asymptotics {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        n: u32,
        /// Constant C of the foliation ratio.
        #[arg(long)]
        c: Option<u128>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GeoMode {
    Exact,
    Randomized,
}

#[derive(Clone, Copy, ValueEnum)]
enum VCheck {
    Translation,
    Rec,
    Key,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    A,
    B,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Forward,
    Converse,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum FCheck {
    Factor,
    Restrict,
    Fminus,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum TailsArg {
    Symbolic,
    Random,
}

/// What a subcommand produced: a JSON body, its text rendering, and whether a property
/// that should hold was refuted.
struct Outcome {
    body: Value,
    text: String,
    refuted: bool,
}

impl Outcome {
    fn ok(body: Value, text: String) -> Self {
        Outcome { body, text, refuted: false }
    }
}

fn set_json(u: &WordSet) -> Value {
    json!(u.exponents())
}

fn enumerate(p: usize, m: usize, g: &Global) -> Result<Outcome, Error> {
    let sets = enumerate_full_sets_capped(p, m, g.cap)?;
    let text = sets.iter().map(|u| u.to_string()).collect::<Vec<_>>().join("\n");
    let body = json!({ "p": p, "m": m, "count": sets.len(), "sets": sets.iter().map(set_json).collect::<Vec<_>>() });
    Ok(Outcome::ok(body, text))
}

fn stats(set: &str, p: Option<usize>) -> Result<Outcome, Error> {
    let u = input::word_set(set, p)?;
    let s = u.stats();
    let text = format!(
        "set {u}\nm {}\norder {}\nweight {}\nbeta {:?}\ncharseq {}\nadmissible {}\nfull {}",
        s.m,
        s.k,
        s.w,
        s.beta,
        s.charseq,
        u.is_admissible(),
        u.is_full()
    );
    let body = json!({
        "set": set_json(&u),
        "p": u.p(),
        "m": s.m,
        "order": s.k,
        "weight": s.w,
        "beta": s.beta,
        "charseq": s.charseq.0,
        "admissible": u.is_admissible(),
        "full": u.is_full(),
    });
    Ok(Outcome::ok(body, text))
}

fn wronskian(set: &str, p: Option<usize>, exprs: &[String]) -> Result<Outcome, Error> {
    let u = input::word_set(set, p)?;
    let fs = input::polynomials(exprs, u.p())?;
    let w = eval_wronskian(&u, &fs)?;
    let body = json!({ "set": set_json(&u), "wronskian": w.to_string() });
    Ok(Outcome::ok(body, w.to_string()))
}

fn geometric(
    set: Option<&str>,
    p: Option<usize>,
    combination: Option<&str>,
    mode: GeoMode,
    trials: usize,
    budget: usize,
    g: &Global,
) -> Result<Outcome, Error> {
    let w = match (set, combination) {
        (Some(s), _) => WronskianCombination::pure(input::word_set(s, p)?)?,
        (None, Some(c)) => serde_json::from_str(c).map_err(|e| Error::Invalid(format!("combination: {e}")))?,
        (None, None) => return Err(Error::Invalid("pass --set or --combination".into())),
    };
    let mode = match mode {
        GeoMode::Exact => GeometricMode::Exact { budget },
        GeoMode::Randomized => GeometricMode::Randomized { trials, seed: g.seed },
    };
    let report = is_geometric(&w, mode)?;
    // A pure Wronskian of a full set is always geometric.
    let refuted = !report.geometric && w.terms().len() == 1 && w.terms()[0].1.is_full();
    let mut text = format!("geometric {}", report.geometric);
    if let Some(c) = &report.counterexample {
        text.push_str(&format!(
            "\ncounterexample g = {}\n  f = [{}]\n  at ({})\n  W(g f) = {}\n  g^(m+1) W(f) = {}",
            c.g,
            c.fs.join(", "),
            c.point.join(", "),
            c.lhs,
            c.rhs
        ));
    }
    let mut body = serde_json::to_value(&report).expect("serializable");
    body["combination"] = serde_json::to_value(&w).expect("serializable");
    body["seed"] = json!(g.seed);
    Ok(Outcome { body, text, refuted })
}

fn indep(p: usize, exprs: &[String], g: &Global) -> Result<Outcome, Error> {
    let fs = input::polynomials(exprs, p)?;
    let r = decide(&fs, g.cap)?;
    let text = match &r.witness {
        Some(w) => format!("independent\nwitness {}\nrank {}", WordSet::from_exponents(p, w)?, r.rank),
        None => format!("dependent\nrank {}", r.rank),
    };
    let body = serde_json::to_value(&r).expect("serializable");
    Ok(Outcome::ok(body, text))
}

fn reduce(p: usize, exprs: &[String]) -> Result<Outcome, Error> {
    let fs = input::polynomials(exprs, p)?;
    let order = ExponentOrder::default();
    let r = distinct_order_reduction(&fs, order)?;
    let ts: Vec<String> = r.ts.iter().map(Polynomial::to_string).collect();
    let orders: Vec<Option<Vec<u32>>> = r.ts.iter().map(|t| t.series_order(p, order)).collect();
    let a = format_matrix(&r.a);
    let verified = r.verify(&fs, order);
    let mut text = ts.join("\n");
    text.push_str("\nA =");
    for row in &a {
        text.push_str(&format!("\n  [{}]", row.join(", ")));
    }
    text.push_str(&format!("\nverified {verified}"));
    let body = json!({ "ts": ts, "orders": orders, "a": a, "steps": r.steps, "verified": verified });
    Ok(Outcome { body, text, refuted: !verified })
}

#[allow(clippy::too_many_arguments)]
fn vandermonde(
    set: &str,
    p: Option<usize>,
    cols: Option<&str>,
    tilde: bool,
    symbolic: bool,
    check: Option<VCheck>,
    alphas: Option<&str>,
) -> Result<Outcome, Error> {
    let u = input::word_set(set, p)?;
    if let Some(check) = check {
        let (name, holds, extra) = match check {
            VCheck::Translation => ("translation", translation_invariance_check(&u)?, Value::Null),
            VCheck::Rec => ("rec", rec_sign_check(&u)?, Value::Null),
            VCheck::Key => {
                let alphas = alphas.ok_or_else(|| Error::Invalid("--check key needs --alphas".into()))?;
                let alphas = input::exponent_rows(alphas)?;
                let (lhs, rhs) = key_identity_sides(&u, &alphas)?;
                let order = ExponentOrder::default();
                let tails = vec![Polynomial::zero(u.p()); alphas.len()];
                let least = least_order_sides(&u, &alphas, &tails, order);
                let least = match least {
                    Ok((expected, found)) => json!({ "expected": expected, "found": found }),
                    Err(Error::Inapplicable(_)) => Value::Null,
                    Err(e) => return Err(e),
                };
                (
                    "key",
                    lhs == rhs,
                    json!({ "wronskian_at_one": fmt_rat(&lhs), "vandermonde": fmt_rat(&rhs), "least_order": least }),
                )
            }
        };
        let mut body = json!({ "set": set_json(&u), "check": name, "holds": holds });
        let mut text = format!("{name} {}", if holds { "holds" } else { "FAILS" });
        if let Value::Object(m) = extra {
            let side = |k: &str| m[k].as_str().unwrap_or_default().to_string();
            text.push_str(&format!("\nW_U(z^alpha)(1) = {}\nV_U(alpha) = {}", side("wronskian_at_one"), side("vandermonde")));
            for (k, v) in m {
                body[k] = v;
            }
        }
        return Ok(Outcome { body, text, refuted: !holds });
    }
    let count = if tilde { u.len() } else { u.len() + 1 };
    let (tuple, names) = if symbolic {
        (ColumnTuple::symbolic(u.p(), count), ColumnTuple::symbolic_names(u.p(), count))
    } else {
        let cols = cols.ok_or_else(|| Error::Invalid("pass --cols or --symbolic".into()))?;
        let rows = input::rational_rows(cols)?;
        (ColumnTuple::from_rationals(u.p(), &rows)?, Vec::new())
    };
    let v = if tilde { eval_v_tilde(&u, &tuple)? } else { eval_v(&u, &tuple)? };
    let value = if symbolic { v.to_string_with(&names) } else { v.to_string() };
    let body = json!({ "set": set_json(&u), "tilde": tilde, "symbolic": symbolic, "value": value });
    Ok(Outcome::ok(body, value))
}

fn certify(
    p: usize,
    m: usize,
    variant: VariantArg,
    direction: DirectionArg,
    samples: usize,
    grid: u32,
    g: &Global,
) -> Result<Outcome, Error> {
    let variant = match variant {
        VariantArg::A => Variant::A,
        VariantArg::B => Variant::B,
    };
    let direction = match direction {
        DirectionArg::Forward => Direction::Forward,
        DirectionArg::Converse => Direction::Converse,
        DirectionArg::Both => Direction::Both,
    };
    let opts = CertifyOptions { samples, seed: g.seed, grid, cap: g.cap };
    let r = match zero_set_certify(p, m, variant, direction, &opts) {
        Ok(r) => r,
        Err(Error::Refuted(msg)) => {
            eprintln!("PROPERTY REFUTED: {msg}");
            let body = json!({ "p": p, "m": m, "passed": false, "refuted": msg, "seed": g.seed });
            return Ok(Outcome { body, text: format!("REFUTED: {msg}"), refuted: true });
        }
        Err(e) => return Err(e),
    };
    let t = &r.totals;
    let passed = r.passed();
    let text = format!(
        "variant {:?} p={} m={} grid={}\nfull sets {}\nconverse patterns vanishing {}/{}\nforward witnesses {}/{}\n{}",
        r.variant,
        r.p,
        r.m,
        r.grid,
        t.full_sets,
        t.patterns_vanishing,
        t.patterns,
        t.witnesses,
        t.samples,
        if passed { "certified" } else { "FAILED" }
    );
    let mut body = serde_json::to_value(&r).expect("serializable");
    body["direction"] = serde_json::to_value(direction).expect("serializable");
    body["passed"] = json!(passed);
    body["seed"] = json!(g.seed);
    Ok(Outcome { body, text, refuted: !passed })
}

fn fermat(
    n: usize,
    p: usize,
    delta: u32,
    check: FCheck,
    tails: TailsArg,
    max_delta: Option<u32>,
    g: &Global,
) -> Result<Outcome, Error> {
    let cfg = FermatConfig::new(n, p, delta)?;
    let checks = match check {
        FCheck::Factor => Checks { factor: true, restrict: false, fminus: false },
        FCheck::Restrict => Checks { factor: false, restrict: true, fminus: false },
        FCheck::Fminus => Checks { factor: false, restrict: false, fminus: true },
        FCheck::All => Checks::ALL,
    };
    let tails = match tails {
        TailsArg::Symbolic => Tails::Symbolic,
        TailsArg::Random => Tails::Random { seed: g.seed },
    };
    let r = fermat_report(&cfg, checks, tails)?;
    let passed = r.passed();
    let mut text = format!(
        "N={} p={} delta={} threshold {} meets {}\nF+ {} sets, F- {} sets",
        n, p, delta, r.threshold, r.meets_threshold, r.fplus, r.fminus
    );
    for s in &r.sets {
        let u = WordSet::from_exponents(p, &s.set)?;
        text.push_str(&format!("\n{} {u} order {}", s.part, s.order));
        if let Some(e) = &s.factor_exponents {
            text.push_str(&format!(" factor {e:?}"));
        }
        if let Some(b) = s.multidegree_is_beta {
            text.push_str(&format!(" multidegree {}", if b { "ok" } else { "FAIL" }));
        }
        if let Some(b) = s.restriction_identity {
            text.push_str(&format!(" restrict {}", if b { "ok" } else { "FAIL" }));
        }
        if let Some(b) = s.fminus_vanishes {
            text.push_str(&format!(" vanishes {}", if b { "ok" } else { "FAIL" }));
        }
    }
    let mut body = serde_json::to_value(&r).expect("serializable");
    if let Some(max) = max_delta {
        let d = degree_report(n, p, max)?;
        text.push_str(&format!("\nleast qualifying delta {}", d.least_qualifying_delta));
        body["degrees"] = serde_json::to_value(&d).expect("serializable");
    }
    body["passed"] = json!(passed);
    body["seed"] = json!(g.seed);
    Ok(Outcome { body, text, refuted: !passed })
}

fn asymptotics(p: usize, n: u32, c: Option<u128>) -> Result<Outcome, Error> {
    if p == 0 || n == 0 {
        return Err(Error::Invalid("p and n must be positive".into()));
    }
    let size = full_set_size(p, n);
    let weight = full_set_weight(p, n);
    let density = weight_density(p, n);
    let (seq, w_min) = min_weight_for_size(p, size);
    let mut text = format!(
        "|U_n| {size}\nw(U_n) {weight}\nw/(n|U_n|) {}\nleast weight of size |U_n| {w_min} charseq {seq}",
        fmt_rat(&density)
    );
    let mut body = json!({
        "p": p,
        "n": n,
        "size": size.to_string(),
        "weight": weight.to_string(),
        "density": fmt_rat(&density),
        "limit": fmt_rat(&wronski::rational::frac(p as i64, p as i64 + 1)),
        "min_weight": w_min.to_string(),
    });
    if let Some(c) = c {
        let f = foliation_ratio(p, c, n)?;
        text.push_str(&format!("\nfoliation ratio {} (r = {})", fmt_rat(&f.ratio), f.r));
        body["c"] = json!(c.to_string());
        body["foliation"] = json!({ "r": f.r.to_string(), "ratio": fmt_rat(&f.ratio) });
    }
    Ok(Outcome::ok(body, text))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Fullsets { .. } => "fullsets",
        Command::Stats { .. } => "stats",
        Command::Wronskian { .. } => "wronskian",
        Command::Geometric { .. } => "geometric",
        Command::Indep { .. } => "indep",
        Command::Reduce { .. } => "reduce",
        Command::Vandermonde { .. } => "vandermonde",
        Command::Certify { .. } => "certify",
        Command::Fermat { .. } => "fermat",
        Command::Asymptotics { .. } => "asymptotics",
    }
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let g = &cli.global;
    match &cli.command {
        Command::Fullsets { p, m } => enumerate(*p, *m, g),
        Command::Stats { set, p } => stats(set, *p),
        Command::Wronskian { set, p, exprs } => wronskian(set, *p, exprs),
        Command::Geometric { set, p, combination, mode, trials, budget } => {
            geometric(set.as_deref(), *p, combination.as_deref(), *mode, *trials, *budget, g)
        }
        Command::Indep { p, exprs } => indep(*p, exprs, g),
        Command::Reduce { p, exprs } => reduce(*p, exprs),
        Command::Vandermonde { set, p, cols, tilde, symbolic, check, alphas } => {
            vandermonde(set, *p, cols.as_deref(), *tilde, *symbolic, *check, alphas.as_deref())
        }
        Command::Certify { p, m, variant, direction, samples, grid } => {
            certify(*p, *m, *variant, *direction, *samples, *grid, g)
        }
        Command::Fermat { n, p, delta, check, tails, max_delta } => {
            fermat(*n, *p, *delta, *check, *tails, *max_delta, g)
        }
        Command::Asymptotics { p, n, c } => asymptotics(*p, *n, *c),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.global.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.global.jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(out) => {
            match cli.global.format {
                Format::Text => println!("{}", out.text),
                Format::Json => {
                    let mut obj = Map::new();
                    obj.insert("schema".into(), json!(SCHEMA));
                    obj.insert("command".into(), json!(command_name(&cli.command)));
                    if let Value::Object(body) = out.body {
                        obj.extend(body);
                    }
                    println!("{}", serde_json::to_string(&Value::Object(obj)).expect("serializable"));
                }
            }
            if out.refuted {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Refuted(_) => 1,
                ref e if e.is_resource_limit() => 3,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}
