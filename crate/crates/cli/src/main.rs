mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use hlmoments::algebra::{parse_rational, render_rational, to_f64, Rational};
use hlmoments::group::{aut_order, count_injective_homs_with, enumerate_subgroups_with, eval_specialized, GroupBounds, PGroup};
use hlmoments::identities::{self, CaseParams, IdentityCase, IdentityId, Manifest, Status, Strategy, VerificationReport};
use hlmoments::moments::{conjecture_table, moment, moment_float, ConjectureKind, Flavor, MomentQuery};
use hlmoments::{c_coeff, parse_partition, rlambda_poly, Error, Partition};

use output::{emit, emit_error, Bounds, Format, Meta, Report};

const DEFAULT_SEED: u64 = 20240917;

/// Exact R-basis coefficients, u-averages of finite abelian p-groups,
/// brute-force group oracles and the identity suite.
///
/// Exit codes: 0 success, 1 verification failure, 2 usage error,
/// 3 resource bound exceeded.
#[derive(Parser, Debug)]
#[command(name = "hlmoments", version, propagate_version = true)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Seed for random-point identity checks (default: the manifest seed).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Largest group order the oracles will enumerate.
    #[arg(long, global = true, env = "HLMOMENTS_MAX_GROUP_ORDER", default_value_t = 4096)]
    max_group_order: u64,

    /// Largest number of subgroups the oracles will store.
    #[arg(long, global = true, env = "HLMOMENTS_MAX_SUBGROUPS", default_value_t = 1_000_000)]
    max_subgroups: u64,

    /// Largest number of generator-image tuples the injection oracle visits.
    #[arg(long, global = true, env = "HLMOMENTS_MAX_TUPLES", default_value_t = 50_000_000)]
    max_tuples: u64,

    /// Highest power of z an identity check may expand to (at most 12).
    #[arg(long, global = true, env = "HLMOMENTS_MAX_TRUNC", default_value_t = identities::MAX_TRUNC)]
    max_trunc: usize,

    /// Progress on stderr; repeat for more.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the coefficient C_{λ,μ}(q) of R_μ in the expansion of x^λ.
    Coeff {
        /// Partition, e.g. "2,1,1" or "1^2 2^1".
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        /// Evaluate at this rational value of q.
        #[arg(long)]
        eval_at: Option<String>,
    },
    /// u-average of x^λ over abelian p-groups, or over groups of type S.
    Moments {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        p: u64,
        /// Nonnegative; must be an integer unless --float.
        #[arg(long, default_value = "0")]
        u: String,
        #[arg(long)]
        type_s: bool,
        /// Double-precision evaluation, allowing real u.
        #[arg(long)]
        float: bool,
        /// Label the value with the conjecture it predicts.
        #[arg(long, value_enum)]
        conjecture: Option<ConjectureArg>,
    },
    /// Compare a brute-force group count with its closed form.
    Oracle {
        #[arg(long, value_enum)]
        check: OracleCheck,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// Subgroup type (subgroups) or target group type (injections).
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
        #[arg(long)]
        p: u64,
    },
    /// Run identity checks: the whole default grid, one id's grid, or one
    /// case given by parameters.
    Verify(VerifyArgs),
    /// Predicted moment values.
    Table {
        #[arg(long, value_enum)]
        conjecture: ConjectureArg,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        lambda: String,
        /// One or more primes, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "3")]
        p: Vec<u64>,
        /// Rank for the type-S table.
        #[arg(long, default_value_t = 0)]
        u: i64,
        /// Rectangle width for the Selmer table.
        #[arg(long, default_value_t = 1)]
        ell: usize,
        /// Rectangle height for the Selmer table.
        #[arg(long, default_value_t = 1)]
        m: usize,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Every case in the manifest.
    #[arg(long, conflicts_with = "id")]
    all: bool,
    /// Identity id, e.g. QBIN or UMOY_ABELIAN; repeatable.
    #[arg(long, value_parser = parse_id)]
    id: Vec<IdentityId>,
    /// Manifest file to use instead of the built-in grid.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Stop starting new cases after this many seconds.
    #[arg(long)]
    budget_secs: Option<u64>,
    #[arg(long, value_enum)]
    strategy: Option<StrategyArg>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    p: Option<u64>,
    /// Highest power of z compared.
    #[arg(long)]
    zmax: Option<usize>,
    /// Highest total degree compared in the alphabet variables.
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    alphabet: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    a_zero: bool,
}

impl VerifyArgs {
    fn params(&self) -> Option<CaseParams> {
        let p = CaseParams {
            n: self.n,
            k: self.k,
            lambda: self.lambda.clone(),
            ell: self.ell,
            p: self.p,
            trunc: self.zmax,
            degree: self.degree,
            alphabet: self.alphabet,
            samples: self.samples,
            seed: None,
            a_zero: self.a_zero.then_some(true),
        };
        (p != CaseParams::default()).then_some(p)
    }
}

fn parse_id(s: &str) -> Result<IdentityId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OracleCheck {
    Subgroups,
    Injections,
    Aut,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConjectureArg {
    ClassImaginary,
    ClassReal,
    Sha,
    Selmer,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    SymbolicExact,
    TruncatedSeries,
    RandomPoint,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::SymbolicExact => Strategy::SymbolicExact,
            StrategyArg::TruncatedSeries => Strategy::TruncatedSeries,
            StrategyArg::RandomPoint => Strategy::RandomPoint,
        }
    }
}

enum Failure {
    Usage(String),
    Resource(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code_and_kind(&self) -> (u8, &'static str) {
        match self {
            Failure::Usage(_) => (2, "usage"),
            Failure::Resource(_) => (3, "resource"),
            Failure::Lib(Error::Resource(_)) => (3, "resource"),
            Failure::Lib(_) => (2, "usage"),
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Resource(m) => m.clone(),
            Failure::Lib(e) => e.to_string(),
        }
    }
}

fn partition_arg(name: &str, s: &str) -> Result<Partition, Failure> {
    parse_partition(s).map_err(|e| Failure::Usage(format!("--{name}: {e}")))
}

fn rational_arg(name: &str, s: &str) -> Result<Rational, Failure> {
    parse_rational(s).map_err(|e| Failure::Usage(format!("--{name}: {e}")))
}

fn int_json(c: &BigInt) -> Value {
    match c.to_i64() {
        Some(v) => json!(v),
        None => json!(c.to_string()),
    }
}

fn value_name(v: impl ValueEnum) -> String {
    v.to_possible_value().expect("no skipped variants").get_name().to_string()
}

fn pass_word(ok: bool) -> &'static str {
    if ok { "PASS" } else { "FAIL" }
}

fn cmd_coeff(lambda: &str, mu: &str, eval_at: Option<&str>) -> Result<(Report, u8), Failure> {
    let lambda = partition_arg("lambda", lambda)?;
    let mu = partition_arg("mu", mu)?;
    let c = c_coeff(&lambda, &mu);
    let poly = c.as_polynomial().expect("C is a polynomial in q").clone();
    let mut coeffs: Vec<Value> = poly.coeffs().iter().map(int_json).collect();
    if coeffs.is_empty() {
        coeffs.push(json!(0));
    }
    let rendered = c.render();
    let mut json = json!({ "lambda": lambda.to_string(), "mu": mu.to_string(), "coeffs": coeffs, "rendered": rendered });
    let mut text = vec![format!("C[{lambda} / {mu}](q) = {rendered}"), format!("coefficients: {}", Value::Array(coeffs.clone()))];
    let (header, rows) = if let Some(at) = eval_at {
        let x = rational_arg("eval-at", at)?;
        let v = c.eval(&x).map_err(Error::from)?;
        json["eval_at"] = json!(render_rational(&x));
        json["value"] = json!(render_rational(&v));
        json["value_float"] = json!(to_f64(&v));
        text = vec![render_rational(&v)];
        (vec!["lambda", "mu", "q", "value"], vec![vec![lambda.to_string(), mu.to_string(), render_rational(&x), render_rational(&v)]])
    } else {
        let rows = coeffs.iter().enumerate().map(|(k, a)| vec![lambda.to_string(), mu.to_string(), k.to_string(), a.to_string()]).collect();
        (vec!["lambda", "mu", "power", "coefficient"], rows)
    };
    Ok((Report { json, header, rows, text }, 0))
}

fn context_label(kind: ConjectureArg) -> &'static str {
    match kind {
        ConjectureArg::ClassImaginary => "conjectural: p-parts of class groups of imaginary quadratic fields (u = 0)",
        ConjectureArg::ClassReal => "conjectural: p-parts of class groups of real quadratic fields (u = 1)",
        ConjectureArg::Sha => "conjectural: p-parts of Tate-Shafarevich groups of elliptic curves of rank u",
        ConjectureArg::Selmer => "conjectural: p-Selmer groups of elliptic curves",
    }
}

fn cmd_moments(lambda: &str, p: u64, u: &str, type_s: bool, float: bool, conjecture: Option<ConjectureArg>) -> Result<(Report, u8), Failure> {
    let lambda = partition_arg("lambda", lambda)?;
    let flavor = if type_s { Flavor::TypeS } else { Flavor::Abelian };
    let (exact, approx) = if float {
        let uf: f64 = match parse_rational(u) {
            Ok(r) => to_f64(&r),
            Err(_) => u.parse().map_err(|_| Failure::Usage(format!("--u: not a number: {u:?}")))?,
        };
        (None, moment_float(&lambda, p, uf, flavor)?)
    } else {
        let ur = rational_arg("u", u)?;
        let v = moment(&MomentQuery { lambda: lambda.clone(), p, u: ur, flavor })?;
        let f = to_f64(&v);
        (Some(render_rational(&v)), f)
    };
    let label = conjecture.map(context_label);
    let outside = p == 2 && matches!(conjecture, Some(ConjectureArg::ClassImaginary | ConjectureArg::ClassReal));
    if outside {
        eprintln!("warning: p = 2 is outside the range the prediction is stated for");
    }
    let json = json!({
        "lambda": lambda.to_string(),
        "p": p,
        "u": u,
        "flavor": flavor,
        "value": exact,
        "value_float": approx,
        "context": label,
        "outside_stated_range": outside,
    });
    let shown = exact.clone().unwrap_or_else(|| format!("{approx}"));
    let integral = exact.as_deref().is_some_and(|e| !e.contains('/'));
    let mut text = vec![if exact.is_some() && !integral { format!("{shown} ≈ {approx}") } else { shown.clone() }];
    if let Some(l) = label {
        text.push(l.to_string());
    }
    let row = vec![lambda.to_string(), p.to_string(), u.to_string(), format!("{flavor:?}"), exact.unwrap_or_default(), approx.to_string()];
    Ok((Report { json, header: vec!["lambda", "p", "u", "flavor", "value", "value_float"], rows: vec![row], text }, 0))
}

fn cmd_oracle(check: OracleCheck, lambda: &str, mu: Option<&str>, p: u64, bounds: &GroupBounds) -> Result<(Report, u8), Failure> {
    let lambda = partition_arg("lambda", lambda)?;
    let need_mu = || -> Result<Partition, Failure> {
        let s = mu.ok_or_else(|| Failure::Usage("--mu is required for this check".into()))?;
        partition_arg("mu", s)
    };
    let (mu, oracle, formula): (Option<Partition>, Rational, Rational) = match check {
        OracleCheck::Subgroups => {
            let mu = need_mu()?;
            let h = PGroup::with_bounds(&lambda, p, bounds)?;
            let count = if lambda.contains(&mu) { enumerate_subgroups_with(&h, bounds)?.get(&mu).copied().unwrap_or(0) } else { 0 };
            let formula = c_coeff(&lambda, &mu).eval(&Rational::from_integer(p.into())).map_err(Error::from)?;
            (Some(mu), Rational::from_integer(count.into()), formula)
        }
        OracleCheck::Injections => {
            let mu = need_mu()?;
            let h = PGroup::with_bounds(&mu, p, bounds)?;
            let count = count_injective_homs_with(&lambda, &h, bounds)?;
            let r = rlambda_poly(&lambda, None).map_err(Error::from)?;
            (Some(mu), Rational::from_integer(count.into()), eval_specialized(&r, &h)?)
        }
        OracleCheck::Aut => {
            let h = PGroup::with_bounds(&lambda, p, bounds)?;
            let count = count_injective_homs_with(&lambda, &h, bounds)?;
            (None, Rational::from_integer(count.into()), aut_order(&lambda, p))
        }
    };
    let ok = oracle == formula;
    let check_name = value_name(check);
    let mu_s = mu.as_ref().map(|m| m.to_string());
    let json = json!({
        "check": check_name,
        "lambda": lambda.to_string(),
        "mu": mu_s,
        "p": p,
        "oracle": render_rational(&oracle),
        "formula": render_rational(&formula),
        "pass": ok,
    });
    let text = vec![format!("{} vs {} {}", render_rational(&oracle), render_rational(&formula), pass_word(ok))];
    let row = vec![check_name, lambda.to_string(), mu_s.unwrap_or_default(), p.to_string(), render_rational(&oracle), render_rational(&formula), pass_word(ok).into()];
    let report = Report { json, header: vec!["check", "lambda", "mu", "p", "oracle", "formula", "result"], rows: vec![row], text };
    Ok((report, if ok { 0 } else { 1 }))
}

fn default_strategy(id: IdentityId, params: &CaseParams) -> Strategy {
    match id {
        IdentityId::FiniteQbinhl if params.n.unwrap_or(0) >= 4 => Strategy::RandomPoint,
        IdentityId::Qbin | IdentityId::FiniteQbinhl | IdentityId::Csq => Strategy::SymbolicExact,
        _ => Strategy::TruncatedSeries,
    }
}

fn params_summary(p: &CaseParams) -> String {
    let v = serde_json::to_value(p).expect("serializable");
    v.as_object()
        .map(|m| m.iter().map(|(k, v)| format!("{k}={}", v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string()))).collect::<Vec<_>>().join(" "))
        .unwrap_or_default()
}

fn cmd_verify(args: &VerifyArgs, seed: Option<u64>, max_trunc: usize, verbose: u8) -> Result<(Report, u8), Failure> {
    let manifest = match &args.manifest {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("--manifest {}: {e}", path.display())))?;
            Manifest::parse(&text)?
        }
        None => Manifest::builtin(),
    };
    let adhoc = args.params().is_some();
    let mut cases: Vec<IdentityCase> = match args.params() {
        Some(params) => {
            let [id] = args.id[..] else {
                return Err(Failure::Usage("case parameters need exactly one --id".into()));
            };
            let strategy = args.strategy.map(Strategy::from).unwrap_or_else(|| default_strategy(id, &params));
            let mut case = IdentityCase::new(id, strategy, params);
            if case.strategy == Strategy::RandomPoint {
                case.params.seed = Some(manifest.seed);
            }
            vec![case]
        }
        None if args.all => manifest.select(&[]),
        None if !args.id.is_empty() => manifest.select(&args.id),
        None => return Err(Failure::Usage("give --all, or --id with optional case parameters".into())),
    };
    if cases.is_empty() {
        return Err(Failure::Usage("the manifest has no cases for the requested ids".into()));
    }
    for case in &mut cases {
        if let Some(s) = seed {
            if case.strategy == Strategy::RandomPoint {
                case.params.seed = Some(s);
            }
        }
        if let Some(t) = case.params.trunc {
            if t > max_trunc {
                return Err(Failure::Resource(format!("resource bound exceeded: max_trunc = {max_trunc} (needed {t})")));
            }
        }
    }
    let reports = identities::run_suite(&cases, args.budget_secs.map(Duration::from_secs));
    if verbose > 0 {
        for r in &reports {
            eprintln!("{} {:?} {} ms", r.case.id, r.status, r.elapsed_ms);
        }
    }
    let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
    let resource_only = reports.iter().all(|r| r.pass || r.resource_bound.is_some()) && reports.iter().any(|r| r.resource_bound.is_some());
    let bad_params = adhoc && reports.iter().any(|r| r.status == Status::Error && r.resource_bound.is_none());
    let exit = if reports.iter().all(|r| r.pass) {
        0
    } else if bad_params {
        2
    } else if resource_only {
        3
    } else {
        1
    };
    let summary = json!({
        "total": reports.len(),
        "passed": count(Status::Pass),
        "failed": count(Status::Fail),
        "errors": count(Status::Error),
        "skipped": count(Status::Skipped),
        "manifest_version": manifest.version,
    });
    let text = reports.iter().map(text_line).chain(std::iter::once(format!("{}/{} passed", count(Status::Pass), reports.len()))).collect();
    let rows = reports.iter().map(csv_row).collect();
    let json = json!({ "summary": summary, "reports": reports });
    let header = vec!["id", "strategy", "params", "status", "coefficients_compared", "mismatch_at", "lhs", "rhs", "error", "elapsed_ms"];
    Ok((Report { json, header, rows, text }, exit))
}

fn text_line(r: &VerificationReport) -> String {
    let mut line = format!("{:<7} {:<14} {} ({} coefficients, {} ms)", format!("{:?}", r.status).to_uppercase(), r.case.id, params_summary(&r.case.params), r.coefficients_compared, r.elapsed_ms);
    if let Some(m) = &r.mismatch {
        line += &format!("\n        first mismatch at {:?} = {:?}: lhs {} / rhs {}", m.variables, m.exponents, m.lhs, m.rhs);
    }
    if let Some(e) = &r.error {
        line += &format!("\n        {e}");
    }
    line
}

fn csv_row(r: &VerificationReport) -> Vec<String> {
    let (at, lhs, rhs) = match &r.mismatch {
        Some(m) => (format!("{:?}={:?}", m.variables, m.exponents), m.lhs.clone(), m.rhs.clone()),
        None => Default::default(),
    };
    vec![
        r.case.id.to_string(),
        format!("{:?}", r.case.strategy),
        params_summary(&r.case.params),
        format!("{:?}", r.status).to_uppercase(),
        r.coefficients_compared.to_string(),
        at,
        lhs,
        rhs,
        r.error.clone().unwrap_or_default(),
        r.elapsed_ms.to_string(),
    ]
}

fn cmd_table(kind: ConjectureArg, lambda: &str, primes: &[u64], u: i64, ell: usize, m: usize) -> Result<(Report, u8), Failure> {
    let lambda = partition_arg("lambda", lambda)?;
    let kind_value = match kind {
        ConjectureArg::ClassImaginary => ConjectureKind::ClassGroupImaginary,
        ConjectureArg::ClassReal => ConjectureKind::ClassGroupReal,
        ConjectureArg::Sha => ConjectureKind::Sha { u },
        ConjectureArg::Selmer => ConjectureKind::Selmer { ell, m },
    };
    let mut values = Vec::new();
    for &p in primes {
        values.push(conjecture_table(kind_value, &lambda, p)?);
    }
    let mut rows = Vec::new();
    let mut text = vec![context_label(kind).to_string()];
    let mut entries = Vec::new();
    for v in &values {
        let f = to_f64(&v.value);
        if v.outside_stated_range {
            eprintln!("warning: p = {} is outside the range the prediction is stated for", v.p);
        }
        rows.push(vec![
            value_name(kind),
            v.lambda.to_string(),
            v.p.to_string(),
            render_rational(&v.value),
            f.to_string(),
            v.conjectural.to_string(),
            v.outside_stated_range.to_string(),
        ]);
        let flag = if v.outside_stated_range { "  [outside stated range]" } else { "" };
        text.push(format!("p = {}: {} ≈ {f}{flag}", v.p, render_rational(&v.value)));
        entries.push(json!({
            "kind": v.kind,
            "lambda": v.lambda.to_string(),
            "p": v.p,
            "value": render_rational(&v.value),
            "value_float": f,
            "conjectural": v.conjectural,
            "outside_stated_range": v.outside_stated_range,
        }));
    }
    let json = json!({ "context": context_label(kind), "rows": entries });
    let header = vec!["conjecture", "lambda", "p", "value", "value_float", "conjectural", "outside_stated_range"];
    Ok((Report { json, header, rows, text }, 0))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let bounds = GroupBounds { max_group_order: cli.max_group_order, max_subgroups: cli.max_subgroups, max_tuples: cli.max_tuples };
    let meta = Meta {
        command: std::env::args().skip(1).collect(),
        version: hlmoments::VERSION,
        seed: cli.seed.unwrap_or(DEFAULT_SEED),
        bounds: Bounds { max_group_order: bounds.max_group_order, max_subgroups: bounds.max_subgroups, max_tuples: bounds.max_tuples, max_trunc: cli.max_trunc },
    };
    let outcome = match &cli.command {
        Command::Coeff { lambda, mu, eval_at } => cmd_coeff(lambda, mu, eval_at.as_deref()),
        Command::Moments { lambda, p, u, type_s, float, conjecture } => cmd_moments(lambda, *p, u, *type_s, *float, *conjecture),
        Command::Oracle { check, lambda, mu, p } => cmd_oracle(*check, lambda, mu.as_deref(), *p, &bounds),
        Command::Verify(args) => cmd_verify(args, cli.seed, cli.max_trunc.min(identities::MAX_TRUNC), cli.verbose),
        Command::Table { conjecture, lambda, p, u, ell, m } => cmd_table(*conjecture, lambda, p, *u, *ell, *m),
    };
    match outcome {
        Ok((report, code)) => {
            if let Err(e) = emit(cli.format, &meta, &report) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(code)
        }
        Err(f) => {
            let (code, kind) = f.code_and_kind();
            emit_error(cli.format, &meta, kind, &f.message());
            ExitCode::from(code)
        }
    }
}
