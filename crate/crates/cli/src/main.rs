use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use quandle_hilbert::braid::{
    coloring_count, dominant_coloring_count, BraidWord, DEFAULT_STATE_BUDGET,
};
use quandle_hilbert::catalog::{
    self, enumerate_quandles, identify, table_degree, table_report, RowReport,
};
use quandle_hilbert::error::{Axiom, ErrorClass};
use quandle_hilbert::invariants::{dim_q, exp_q, inn_group, pi0, subquandles, DEFAULT_GROUP_CAP};
use quandle_hilbert::polyfit::{
    fit_hilbert, genfunc, threshold, FitCertificate, IntValuedPoly, RationalGenFunc, MIN_SURPLUS,
};
use quandle_hilbert::quandle::QuandleFile;
use quandle_hilbert::series::{dominant_series, graded_series, GradedSeries};
use quandle_hilbert::stats::{burnside_exact, covariance, moment, monte_carlo_mean};
use quandle_hilbert::{Error, Quandle};

#[derive(Parser)]
#[command(
    name = "quandle",
    version,
    about = "Orbit counts, Hilbert polynomials and coloring statistics for finite quandles"
)]
struct Cli {
    /// State budget, in packed tuples
    #[arg(long, global = true, default_value_t = DEFAULT_STATE_BUDGET)]
    budget: u64,
    /// Output format; each command has its own default
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Suppress diagnostics on stderr
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Check the quandle axioms
    Validate { quandle: String },
    /// Components, exponent, dimension, sub-quandles and inner group order
    Invariants { quandle: String },
    /// Orbit counts a_0..a_N
    Series(SeriesArgs),
    /// Eventual polynomial of the series, with its certificate
    Hilbert(SeriesArgs),
    /// Generating function of the series
    Genfunc(SeriesArgs),
    /// Colorings of the closure of a braid
    Color {
        quandle: String,
        #[arg(long)]
        strands: usize,
        /// Signed generator indices, e.g. "1 -2 1"
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long)]
        dominant: bool,
    },
    /// Average number of colorings over the braid group
    Avg {
        quandle: String,
        #[arg(long)]
        strands: usize,
        #[arg(long, conflicts_with_all = ["samples", "walk", "seed"])]
        exact: bool,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 64)]
        walk: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// k-th moment of the coloring count
    Moments {
        quandle: String,
        #[arg(long)]
        strands: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Recompute the catalog table
    Table,
    /// One quandle per isomorphism class of the given order
    Enumerate {
        #[arg(long)]
        order: usize,
        /// Write one JSON file per class here
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SeriesArgs {
    quandle: String,
    /// Highest degree; defaults to 10 for up to three elements and 8 beyond
    #[arg(long)]
    max_degree: Option<usize>,
    #[arg(long)]
    dominant: bool,
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<String, Failure>;

struct Ctx {
    budget: u64,
    format: Option<Format>,
    quiet: bool,
}

impl Ctx {
    fn note(&self, msg: &str) {
        if !self.quiet {
            eprintln!("{msg}");
        }
    }

    fn format(&self, allowed: &[Format], default: Format) -> Result<Format, Failure> {
        let f = self.format.unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            Err(Failure::Usage(
                "this command does not support the requested --format".into(),
            ))
        }
    }
}

fn load(source: &str) -> Result<(String, Quandle), Failure> {
    if let Some(name) = source.strip_prefix("catalog:") {
        let e = catalog::builtin(name)?;
        return Ok((e.name.to_string(), e.quandle));
    }
    let text = fs::read_to_string(source).map_err(|e| Failure::Usage(format!("{source}: {e}")))?;
    let file = QuandleFile::from_json(&text)?;
    let q = file.to_quandle()?;
    let name = file.name.unwrap_or_else(|| {
        Path::new(source)
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default()
    });
    Ok((name, q))
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

fn poly_json(p: &IntValuedPoly) -> Value {
    let (num, den) = p.to_monomial();
    json!({
        "binomial": strings(p.coeffs()),
        "monomial_over_denominator": {"num": strings(&num), "den": den.to_string()},
        "display": p.to_string(),
    })
}

fn eta_json(g: &RationalGenFunc) -> Value {
    json!({"numerator": strings(g.numerator()), "den_power": g.den_power(), "display": g.to_string()})
}

fn series_for(ctx: &Ctx, q: &Quandle, args: &SeriesArgs) -> Result<GradedSeries, Failure> {
    let n = args.max_degree.unwrap_or_else(|| table_degree(q.size()));
    let s = if args.dominant {
        dominant_series(q, n, ctx.budget)?
    } else {
        graded_series(q, n, ctx.budget)?
    };
    if s.truncated {
        ctx.note(&format!(
            "budget reached: series stops at degree {}",
            s.values.len() as i64 - 1
        ));
    }
    Ok(s)
}

fn series(ctx: &Ctx, args: &SeriesArgs) -> Outcome {
    let fmt = ctx.format(&[Format::Json, Format::Csv], Format::Json)?;
    let (name, q) = load(&args.quandle)?;
    let s = series_for(ctx, &q, args)?;
    Ok(match fmt {
        Format::Csv => {
            let mut out = String::from("n,value\n");
            for (n, v) in s.values.iter().enumerate() {
                out.push_str(&format!("{n},{v}\n"));
            }
            out
        }
        _ => pretty(&json!({
            "quandle": name,
            "dominant": args.dominant,
            "requested": s.requested,
            "truncated": s.truncated,
            "values": strings(&s.values),
        })),
    })
}

/// Fits without assuming a degree, then checks the detected degree against
/// `dim − 1` (or `|π₀| − 1` for the dominant series).
fn fit(
    ctx: &Ctx,
    q: &Quandle,
    args: &SeriesArgs,
) -> Result<(GradedSeries, IntValuedPoly, FitCertificate), Failure> {
    let s = series_for(ctx, q, args)?;
    let (p, mut cert) = fit_hilbert(&s, None, MIN_SURPLUS)?;
    let expected = if args.dominant {
        Some(pi0(q).len() as i64 - 1)
    } else {
        match dim_q(q) {
            Ok(d) => Some(d as i64 - 1),
            Err(e) if e.class() == ErrorClass::Resource => None,
            Err(e) => return Err(e.into()),
        }
    };
    cert.degree_matches_dim = expected.map(|e| e == p.degree());
    cert.certified = cert.surplus >= MIN_SURPLUS && cert.degree_matches_dim == Some(true);
    if !cert.certified {
        ctx.note("fit is uncertified");
    }
    Ok((s, p, cert))
}

fn hilbert(ctx: &Ctx, args: &SeriesArgs) -> Outcome {
    ctx.format(&[Format::Json], Format::Json)?;
    let (name, q) = load(&args.quandle)?;
    let (s, p, cert) = fit(ctx, &q, args)?;
    let eta = genfunc(&s, &p, cert.n0)?;
    let (num, den) = p.to_monomial();
    Ok(pretty(&json!({
        "quandle": name,
        "dominant": args.dominant,
        "poly_binomial": strings(p.coeffs()),
        "poly_monomial_over_denominator": {"num": strings(&num), "den": den.to_string()},
        "display": p.to_string(),
        "threshold": threshold(&eta),
        "certificate": {
            "n0": cert.n0,
            "surplus": cert.surplus,
            "dim_check": cert.degree_matches_dim,
            "certified": cert.certified,
        },
    })))
}

fn genfunc_cmd(ctx: &Ctx, args: &SeriesArgs) -> Outcome {
    ctx.format(&[Format::Json], Format::Json)?;
    let (name, q) = load(&args.quandle)?;
    let (s, p, cert) = fit(ctx, &q, args)?;
    let eta = genfunc(&s, &p, cert.n0)?;
    let mut v = eta_json(&eta);
    v["quandle"] = json!(name);
    v["dominant"] = json!(args.dominant);
    Ok(pretty(&v))
}

fn validate(ctx: &Ctx, source: &str) -> Outcome {
    ctx.format(&[Format::Json], Format::Json)?;
    let (name, q) = load(source)?;
    Ok(pretty(
        &json!({"valid": true, "quandle": name, "size": q.size()}),
    ))
}

fn invariants(ctx: &Ctx, source: &str) -> Outcome {
    ctx.format(&[Format::Json], Format::Json)?;
    let (name, q) = load(source)?;
    let lattice = subquandles(&q)?;
    let inn_order = match inn_group(&q, DEFAULT_GROUP_CAP) {
        Ok(g) => json!(g.order()),
        Err(Error::GroupTooLarge(_)) => json!("cap-exceeded"),
        Err(e) => return Err(e.into()),
    };
    let subs: Vec<String> = lattice
        .subsets()
        .iter()
        .map(|m| format!("{m:#x}"))
        .collect();
    Ok(pretty(&json!({
        "quandle": name,
        "pi0": pi0(&q),
        "exp": exp_q(&q)?,
        "dim": dim_q(&q)?,
        "subquandles": subs,
        "inn_order": inn_order,
    })))
}

fn color(ctx: &Ctx, source: &str, strands: usize, word: &str, dominant: bool) -> Outcome {
    let fmt = ctx.format(&[Format::Json, Format::Csv], Format::Csv)?;
    let (name, q) = load(source)?;
    let w = BraidWord::parse(strands, word)?;
    let count = if dominant {
        dominant_coloring_count(&q, &w, ctx.budget)?
    } else {
        coloring_count(&q, &w, ctx.budget)?
    };
    Ok(match fmt {
        Format::Json => pretty(&json!({
            "quandle": name,
            "strands": strands,
            "word": w.to_string(),
            "dominant": dominant,
            "count": count.to_string(),
        })),
        _ => format!("{count}\n"),
    })
}

fn avg(
    ctx: &Ctx,
    source: &str,
    strands: usize,
    samples: Option<u64>,
    walk: usize,
    seed: u64,
) -> Outcome {
    ctx.format(&[Format::Json], Format::Json)?;
    let (name, q) = load(source)?;
    let v = match samples {
        None => {
            let r = burnside_exact(&q, strands, DEFAULT_GROUP_CAP)?;
            json!({
                "quandle": name,
                "strands": strands,
                "method": "exact",
                "group_order": r.group_order.to_string(),
                "fixed_point_total": r.fixed_point_total.to_string(),
                "average_fixed_points": r.average_fixed_points.to_string(),
                "orbit_count": r.orbit_count.to_string(),
                "equal": r.equal,
            })
        }
        Some(s) => {
            let e = monte_carlo_mean(&q, strands, s, walk, seed, ctx.budget)?;
            json!({
                "quandle": name,
                "strands": strands,
                "method": "monte_carlo",
                "samples": e.samples.to_string(),
                "walk_length": e.walk_length,
                "seed": e.seed.to_string(),
                "rng": e.rng,
                "mean": e.mean.to_string(),
                "sample_variance": e.sample_variance.to_string(),
                "standard_error": format!("{:.6}", e.standard_error()),
            })
        }
    };
    Ok(pretty(&v))
}

fn moments(ctx: &Ctx, source: &str, strands: usize, k: usize) -> Outcome {
    ctx.format(&[Format::Json], Format::Json)?;
    let (name, q) = load(source)?;
    let m = moment(&q, strands, k, ctx.budget)?;
    let mut v = json!({"quandle": name, "strands": strands, "k": k, "moment": m.to_string()});
    if k == 2 {
        let c = covariance(&q, &q, strands, ctx.budget)?;
        v["mean"] = json!(c.mean_q.to_string());
        v["variance"] = json!(c.covariance.to_string());
    }
    Ok(pretty(&v))
}

fn table(ctx: &Ctx) -> Outcome {
    let fmt = ctx.format(&[Format::Md, Format::Json], Format::Md)?;
    let rows = table_report(ctx.budget)?;
    Ok(match fmt {
        Format::Json => pretty(&Value::Array(rows.iter().map(row_json).collect())),
        _ => {
            let mut out = String::from("| Q | size | dim | P | P_dom | eta | printed | note |\n");
            out.push_str("|---|---|---|---|---|---|---|---|\n");
            for r in &rows {
                let d = r.discrepancies();
                let status = if d.is_empty() {
                    "agrees".to_string()
                } else {
                    d.join("; ")
                };
                out.push_str(&format!(
                    "| {} | {} | {} | {} | {} | {} | {} | {} |\n",
                    r.name,
                    r.size,
                    r.dim,
                    r.graded.poly,
                    r.dominant.poly,
                    r.graded.eta,
                    status,
                    r.annotation.unwrap_or("")
                ));
            }
            out
        }
    })
}

fn row_json(r: &RowReport) -> Value {
    json!({
        "name": r.name,
        "size": r.size,
        "dim": r.dim,
        "components": r.components,
        "p": poly_json(&r.graded.poly),
        "p_dom": poly_json(&r.dominant.poly),
        "eta": eta_json(&r.graded.eta),
        "threshold": r.graded.threshold,
        "printed": {
            "p": r.published.p.to_string(),
            "p_dom": r.published.p_dom.to_string(),
            "eta": r.published.eta.to_string(),
        },
        "matches": r.matches(),
        "discrepancies": r.discrepancies(),
        "annotation": r.annotation,
    })
}

fn enumerate(ctx: &Ctx, order: usize, out: Option<&Path>) -> Outcome {
    ctx.format(&[Format::Json], Format::Json)?;
    let classes = enumerate_quandles(order)?;
    let files: Vec<QuandleFile> = classes
        .iter()
        .enumerate()
        .map(|(i, q)| {
            let name = identify(q)
                .map(str::to_string)
                .unwrap_or_else(|| format!("order{order}_class{i}"));
            QuandleFile::new(Some(name), q)
        })
        .collect();
    match out {
        None => Ok(pretty(&json!({"order": order, "classes": files}))),
        Some(dir) => {
            fs::create_dir_all(dir)
                .map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
            let mut written = Vec::new();
            for (i, f) in files.iter().enumerate() {
                let path = dir.join(format!("order{order}_{i}.json"));
                fs::write(&path, f.to_json() + "\n")
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                written.push(path.display().to_string());
            }
            Ok(pretty(
                &json!({"order": order, "classes": files.len(), "files": written}),
            ))
        }
    }
}

/// Variant name of a library error, e.g. `AxiomViolation`.
fn kind(e: &Error) -> String {
    let debug = format!("{e:?}");
    debug
        .split(|c: char| !c.is_alphanumeric() && c != '_')
        .next()
        .unwrap_or_default()
        .to_string()
}

fn error_json(e: &Error) -> Value {
    let class = match e.class() {
        ErrorClass::Domain => "domain",
        ErrorClass::Resource => "resource",
    };
    let mut v = json!({"error": kind(e), "class": class, "message": e.to_string()});
    if let Error::AxiomViolation { axiom, witness } = e {
        let a = match axiom {
            Axiom::Q1 => "Q1",
            Axiom::Q2 => "Q2",
            Axiom::Q3 => "Q3",
        };
        v["axiom"] = json!(a);
        v["witness"] = json!(witness);
    }
    v
}

fn run(cli: Cli) -> Outcome {
    let ctx = Ctx {
        budget: cli.budget,
        format: cli.format,
        quiet: cli.quiet,
    };
    match &cli.command {
        Command::Validate { quandle } => validate(&ctx, quandle),
        Command::Invariants { quandle } => invariants(&ctx, quandle),
        Command::Series(a) => series(&ctx, a),
        Command::Hilbert(a) => hilbert(&ctx, a),
        Command::Genfunc(a) => genfunc_cmd(&ctx, a),
        Command::Color {
            quandle,
            strands,
            word,
            dominant,
        } => color(&ctx, quandle, *strands, word, *dominant),
        Command::Avg {
            quandle,
            strands,
            exact: _,
            samples,
            walk,
            seed,
        } => avg(&ctx, quandle, *strands, *samples, *walk, *seed),
        Command::Moments {
            quandle,
            strands,
            k,
        } => moments(&ctx, quandle, *strands, *k),
        Command::Table => table(&ctx),
        Command::Enumerate { order, out } => enumerate(&ctx, *order, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let quiet = cli.quiet;
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            if !out.ends_with('\n') {
                println!();
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Lib(e)) => {
            println!("{}", pretty(&error_json(&e)));
            if !quiet {
                eprintln!("error: {e}");
            }
            match e.class() {
                ErrorClass::Domain => ExitCode::from(1),
                ErrorClass::Resource => ExitCode::from(2),
            }
        }
    }
}
