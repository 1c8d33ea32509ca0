use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use hyp2mzv::atoms::{eval_closedform, AtomCache};
use hyp2mzv::basetable::{BaseKey, BaseTable, Family};
use hyp2mzv::db::{self, IdentityRecord};
use hyp2mzv::error::Error;
use hyp2mzv::fitter::{fit_graded, monomial_basis, DEFAULT_HEIGHT};
use hyp2mzv::fl;
use hyp2mzv::oracle::eval_series;
use hyp2mzv::parser::{parse_closedform, parse_series};
use hyp2mzv::reducer::{populate_base_table, reduce};

#[derive(Parser)]
#[command(name = "hyp2mzv", version, about = "Reduce hypergeometric and central-binomial series to multiple zeta values")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text", env = "HYP2MZV_FORMAT")]
    format: Format,
    /// Working precision in decimal digits.
    #[arg(long, global = true, default_value_t = 40, env = "HYP2MZV_PREC")]
    prec: u32,
    /// Identity database (JSON lines). Defaults to the bundled corpus.
    #[arg(long, global = true, env = "HYP2MZV_DB")]
    db: Option<PathBuf>,
    /// Base table (JSON lines). Defaults to the bundled table.
    #[arg(long, global = true, env = "HYP2MZV_TABLE")]
    table: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Reduce a series to a closed form.
    Reduce {
        expr: String,
        /// Print the rewrite steps.
        #[arg(long)]
        trace: bool,
    },
    /// Evaluate a series or closed form numerically.
    Eval { expr: String },
    /// Check identities of the database numerically.
    Verify {
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        id: Option<String>,
        #[arg(long)]
        all: bool,
        /// Store verified digits and timestamps back into the database file.
        #[arg(long)]
        record: bool,
    },
    /// Search a closed form for a series by integer relation.
    Fit {
        expr: String,
        #[arg(long)]
        weight: u32,
        #[arg(long, default_value_t = 4)]
        level: u8,
        #[arg(long, default_value_t = DEFAULT_HEIGHT)]
        height: u64,
    },
    /// Run the Fourier-Legendre consistency checks.
    FlCheck {
        /// Coefficient pairs in the Parseval sum.
        #[arg(long, default_value_t = 10_000)]
        terms: usize,
    },
    /// Fit the base-sum table.
    TableBuild {
        /// Largest weight to fit.
        #[arg(long, default_value_t = 5)]
        max_weight: u32,
        /// Extra keys as k,family,m (e.g. -1,even,6).
        #[arg(long = "also", allow_hyphen_values = true)]
        also: Vec<String>,
        /// Output file.
        #[arg(long, default_value = "data/base_table.jsonl")]
        out: PathBuf,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Syntax { .. } | Error::Semantic(_) | Error::PoleInRange(_) => 2,
        Error::Divergent(_) | Error::Terminating(_) => 3,
        Error::UnmatchedShape(_) | Error::PoleOffLattice(_) | Error::TableMiss(_) | Error::NoRelation(_) => 4,
        Error::Precision(_) | Error::UnknownId(_) | Error::Io(_) => 1,
    }
}

struct Out {
    text: String,
    json: serde_json::Value,
    code: u8,
}

impl Out {
    fn ok(text: String, json: serde_json::Value) -> Self {
        Out { text, json, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Text => println!("{}", out.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("json output")),
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            match cli.format {
                Format::Text => eprintln!("error [{}]: {e}", e.code()),
                Format::Json => println!("{}", json!({ "error": e.code(), "message": e.to_string() })),
            }
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: &Cli) -> Result<Out, Error> {
    match &cli.cmd {
        Cmd::Reduce { expr, trace } => cmd_reduce(cli, expr, *trace),
        Cmd::Eval { expr } => cmd_eval(cli, expr),
        Cmd::Verify { id, all, record } => cmd_verify(cli, id.as_deref(), *all, *record),
        Cmd::Fit { expr, weight, level, height } => cmd_fit(cli, expr, *weight, *level, *height),
        Cmd::FlCheck { terms } => cmd_fl_check(*terms),
        Cmd::TableBuild { max_weight, also, out } => cmd_table_build(*max_weight, also, out),
    }
}

fn load_table(cli: &Cli) -> Result<BaseTable, Error> {
    match &cli.table {
        Some(p) => {
            let mut t = BaseTable::load(p)?;
            for e in hyp2mzv::basetable::published_entries() {
                t.insert(e);
            }
            Ok(t)
        }
        None => Ok(BaseTable::builtin()),
    }
}

fn load_db(cli: &Cli) -> Result<Vec<IdentityRecord>, Error> {
    match &cli.db {
        Some(p) => {
            AtomCache::load(&cache_path(p))?;
            db::load(p)
        }
        None => Ok(db::builtin()),
    }
}

/// Atom values live next to the database.
fn cache_path(db: &Path) -> PathBuf {
    db.with_file_name("atom_cache.jsonl")
}

fn cmd_reduce(cli: &Cli, expr: &str, trace: bool) -> Result<Out, Error> {
    let spec = parse_series(expr)?;
    let table = load_table(cli)?;
    let (form, tr) = reduce(&spec, &table)?;
    let mut text = form.to_text();
    if trace {
        for s in &tr.steps {
            text.push_str(&format!("\n  {:<10} {}  ->  {}   [+ {}]", s.rule.id(), s.before, s.after, s.contribution.to_text()));
        }
    }
    let mut j = json!({ "input": spec.to_text(), "result": form.to_text() });
    if trace {
        j["trace"] = tr.to_json();
    }
    Ok(Out::ok(text, j))
}

fn cmd_eval(cli: &Cli, expr: &str) -> Result<Out, Error> {
    // a series through the oracle, otherwise a closed form through the atoms
    let (input, v) = match parse_series(expr) {
        Ok(spec) => (spec.to_text(), eval_series(&spec, cli.prec)?),
        Err(series_err) => match parse_closedform(expr) {
            Ok(cf) => (cf.to_text(), eval_closedform(&cf, cli.prec)?),
            Err(_) => return Err(series_err),
        },
    };
    let s = if v.im.contains_zero() { v.re.to_decimal(cli.prec) } else { v.to_text(cli.prec) };
    Ok(Out::ok(s.clone(), json!({ "input": input, "value": s, "digits": cli.prec })))
}

fn cmd_verify(cli: &Cli, id: Option<&str>, all: bool, record: bool) -> Result<Out, Error> {
    let mut recs = load_db(cli)?;
    let chosen: Vec<usize> = if all {
        (0..recs.len()).collect()
    } else {
        let id = id.unwrap_or_default();
        db::find(&recs, id)?;
        recs.iter().position(|r| r.id == id).into_iter().collect()
    };
    let prec = cli.prec;
    let results: Vec<_> = chosen.par_iter().map(|&i| (i, recs[i].verify(prec))).collect();
    let mut lines = Vec::new();
    let mut rows = Vec::new();
    let mut passed = 0;
    for (i, res) in &results {
        let r = &recs[*i];
        match res {
            Ok(v) => {
                passed += v.passed as usize;
                lines.push(format!(
                    "{:<6} {}  residual {:.3e}  (tol {:.0e}, weight {})",
                    r.id,
                    if v.passed { "PASS" } else { "FAIL" },
                    v.residual,
                    v.tolerance,
                    r.weight
                ));
                rows.push(json!({ "id": r.id, "pass": v.passed, "residual": v.residual, "tolerance": v.tolerance }));
            }
            Err(e) => {
                lines.push(format!("{:<6} FAIL  {} ({e})", r.id, e.code()));
                rows.push(json!({ "id": r.id, "pass": false, "error": e.code(), "message": e.to_string() }));
            }
        }
    }
    let total = results.len();
    lines.push(format!("{passed}/{total} pass"));
    if record {
        let Some(path) = &cli.db else {
            return Err(Error::Io("--record needs --db".into()));
        };
        let now = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        for (i, res) in &results {
            if matches!(res, Ok(v) if v.passed) {
                recs[*i].verified_digits = prec;
                recs[*i].verified_at = Some(now);
            }
        }
        db::save(path, &recs)?;
        let mut atoms = std::collections::BTreeSet::new();
        for r in &recs {
            atoms.extend(r.closed_form()?.atoms());
            atoms.extend(r.factor()?.atoms());
        }
        let cache = cache_path(path);
        if cache.exists() {
            std::fs::remove_file(&cache)?;
        }
        AtomCache::append(&cache, &atoms.into_iter().collect::<Vec<_>>(), prec)?;
    }
    let code = if passed == total { 0 } else { 5 };
    Ok(Out { text: lines.join("\n"), json: json!({ "results": rows, "passed": passed, "total": total }), code })
}

fn cmd_fit(cli: &Cli, expr: &str, weight: u32, level: u8, height: u64) -> Result<Out, Error> {
    let spec = parse_series(expr)?;
    let target = |d: u32| eval_series(&spec, d).map(|v| v.re);
    let basis = monomial_basis(weight, level);
    match fit_graded(&target, &basis, cli.prec, height) {
        Ok(f) => Ok(Out::ok(f.to_text(), json!({ "input": spec.to_text(), "result": f.to_text(), "basis_size": basis.len() }))),
        Err(Error::NoRelation(msg)) => Err(Error::NoRelation(format!(
            "{msg}; a basis of {} monomials usually needs about {} digits, try a larger --prec",
            basis.len(),
            advised_digits(basis.len(), height)
        ))),
        Err(e) => Err(e),
    }
}

/// Rough precision for detecting a relation of the given height over n + 1 numbers.
fn advised_digits(n: usize, height: u64) -> u32 {
    ((n as f64 + 1.0) * (height as f64).log10()).ceil() as u32 + 10
}

fn cmd_fl_check(terms: usize) -> Result<Out, Error> {
    let ortho = fl::orthogonality_error(20);
    let (_, li4, li5) = fl::lifted_chain(10 + 2 * fl::TAIL_WINDOW + 1);
    let tails = fl::NestedTails::new(20);
    let mut lift_err: f64 = 0.0;
    for n in 1..=10 {
        lift_err = lift_err.max((li4.coeffs[n] - tails.li4_coeff(n)).abs());
        lift_err = lift_err.max((li5.coeffs[n] - tails.li5_coeff(n)).abs());
    }
    let p = fl::parseval_check(terms, true);
    let checks = [
        ("legendre orthogonality (i, j <= 20)", ortho, 1e-12),
        ("lifted vs closed-form coefficients (n <= 10)", lift_err, 1e-12),
        ("parseval pairing", p.residual, 1e-8),
    ];
    let ok = checks.iter().all(|(_, v, t)| v < t) && fl::pairing_weight_identity();
    let mut text: Vec<String> =
        checks.iter().map(|(n, v, t)| format!("{} {n}: {v:.3e} (tol {t:.0e})", if v < t { "PASS" } else { "FAIL" })).collect();
    text.push(format!("parseval lhs {:.15} rhs {:.15} over {} terms", p.lhs, p.rhs, p.terms));
    let j = json!({
        "orthogonality": ortho,
        "lift": lift_err,
        "parseval": { "lhs": p.lhs, "rhs": p.rhs, "residual": p.residual, "terms": p.terms },
        "pass": ok,
    });
    Ok(Out { text: text.join("\n"), json: j, code: if ok { 0 } else { 5 } })
}

fn table_keys(max_weight: u32) -> Vec<BaseKey> {
    let mut keys = vec![BaseKey::pair(), BaseKey::triple_a(), BaseKey::triple_b()];
    for (k, m0) in [(-1, 2), (-2, 3), (2, 1)] {
        for fam in [Family::Odd, Family::Even] {
            let mut m = m0;
            while BaseKey::new(k, fam, m).weight() <= max_weight {
                keys.push(BaseKey::new(k, fam, m));
                m += 1;
            }
        }
    }
    keys
}

/// Digits for a fit: enough for the basis size at the default height.
fn fit_digits(key: &BaseKey) -> u32 {
    match key.weight() {
        0..=4 => 60,
        5 => 90,
        _ => 140,
    }
}

fn cmd_table_build(max_weight: u32, also: &[String], out: &Path) -> Result<Out, Error> {
    let mut keys = table_keys(max_weight);
    for a in also {
        let parts: Vec<&str> = a.split(',').map(str::trim).collect();
        let [k, f, m] = parts[..] else {
            return Err(Error::Semantic(format!("expected k,family,m but got '{a}'")));
        };
        let k = k.parse().map_err(|_| Error::Semantic(format!("bad k '{k}'")))?;
        let m = m.parse().map_err(|_| Error::Semantic(format!("bad m '{m}'")))?;
        keys.push(BaseKey::new(k, Family::parse(f)?, m));
    }
    let published: Vec<BaseKey> = hyp2mzv::basetable::published_entries().into_iter().map(|e| e.key).collect();
    keys.retain(|k| !published.contains(k));
    let results: Vec<_> = keys.par_iter().map(|k| (*k, populate_base_table(*k, fit_digits(k)))).collect();
    let mut table = BaseTable::new();
    let mut lines = Vec::new();
    let mut failed = 0;
    for (k, r) in results {
        match r {
            Ok(e) => {
                lines.push(format!("{k} = {}", e.value.to_text()));
                table.insert(e);
            }
            Err(e) => {
                failed += 1;
                lines.push(format!("{k} FAILED {}", e.code()));
            }
        }
    }
    table.save(out)?;
    lines.push(format!("{} entries written to {}, {failed} failed", table.len(), out.display()));
    let code = if failed == 0 { 0 } else { 4 };
    Ok(Out { text: lines.join("\n"), json: json!({ "written": table.len(), "failed": failed }), code })
}

