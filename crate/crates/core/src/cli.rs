//! Command-line front end behind the `mlie` binary.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input,
//! 3 not applicable.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::catalog::{
    make_algebra, make_algebra_by_name, table1_derivation, CatalogKey, CatalogName, MetricVariant, Params,
};
use crate::curvature::{einstein_classify, RicciRoute};
use crate::doubleext::{check_admissible, decompose, extend};
use crate::error::{Error, Result};
use crate::io::{catalog_export, read_algebra_path, read_extension_path, write_algebra, write_extension};
use crate::liealg::{
    center, derivation_defect, derivation_space, derived_ideal, find_nonzero_trace_derivation, LieAlgebra,
};
use crate::pseudolin::{classify_subspace, signature, Gram, Matrix, Subspace};
use crate::search::{run_search, SearchSpec, SearchTarget};
use crate::tol;
use crate::verify::{self, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NOT_APPLICABLE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "mlie",
    version,
    about = "Ricci curvature of left-invariant metrics on Lie algebras"
)]
pub struct Cli {
    /// Relative tolerance for curvature verdicts [default: 1e-8]
    #[arg(long, global = true, env = "MLIE_TOL")]
    pub tol: Option<f64>,
    /// Relative tolerance for rank and degeneracy decisions [default: 1e-9]
    #[arg(long, global = true)]
    pub rank_tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ricci curvature and Einstein verdict of an algebra file with a metric.
    Ricci {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Export a catalog algebra, or list the catalog.
    Catalog {
        #[arg(long)]
        list: bool,
        /// Algebra name, e.g. L5_6 or EX8.
        #[arg(required_unless_present = "list")]
        name: Option<String>,
        /// Metric variant followed by key=value parameters, e.g. `m56 mu=1 eps=-1`.
        args: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build the double extension of an extension-data file.
    DoubleExtend {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a Lorentzian Ricci-flat nilpotent algebra as a double extension.
    Decompose {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the reproducibility suite.
    VerifyPaper {
        /// Restrict to a group; repeatable.
        #[arg(long)]
        only: Vec<String>,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Derivation algebra and a nonzero-trace derivation.
    Derivations { path: PathBuf },
    /// Search for an Einstein or Ricci-flat metric of a given signature.
    Search {
        /// Catalog algebra name.
        #[arg(long, conflicts_with = "file", required_unless_present = "file")]
        catalog: Option<String>,
        /// Algebra file; any metric in it is ignored.
        #[arg(long)]
        file: Option<PathBuf>,
        /// `ricci-flat` or `einstein`.
        #[arg(long, default_value = "ricci-flat")]
        target: SearchTarget,
        /// Number of negative directions [default: 1].
        #[arg(long, default_value_t = 1)]
        minus: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = 2000)]
        max_iters: usize,
        #[arg(long, default_value_t = 0.1)]
        step0: f64,
        /// Convergence threshold on the normalized residual.
        #[arg(long, default_value_t = 1e-6)]
        residual_tol: f64,
        /// Write the best metric as an algebra file.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Classify the center and derived ideal against the metric.
    Classify {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Which::Both)]
        subspace: Which,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Center,
    Derived,
    Both,
}

struct Ctx<'a> {
    tol: f64,
    rank_tol: f64,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn say(&mut self, s: &str) -> Result<()> {
        self.out.write_all(s.as_bytes())?;
        Ok(())
    }

    fn note(&mut self, s: &str) -> Result<()> {
        self.err.write_all(s.as_bytes())?;
        Ok(())
    }

    /// Write to `path`, or to standard output when there is none.
    fn emit(&mut self, path: Option<&Path>, text: &str) -> Result<()> {
        match path {
            Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
            None => self.say(text),
        }
    }
}

/// Runs a parsed command and returns the exit code. Errors are reported on `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut ctx = Ctx {
        tol: cli.tol.unwrap_or(tol::EINSTEIN),
        rank_tol: cli.rank_tol.unwrap_or(tol::LINALG),
        out,
        err,
    };
    for (flag, v) in [("--tol", ctx.tol), ("--rank-tol", ctx.rank_tol)] {
        if !(v > 0.0 && v.is_finite()) {
            let _ = writeln!(ctx.err, "error: {flag} must be positive and finite");
            return EXIT_INVALID;
        }
    }
    match dispatch(&cli.command, &mut ctx) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotApplicable(_) => EXIT_NOT_APPLICABLE,
        _ => EXIT_INVALID,
    }
}

fn dispatch(cmd: &Command, ctx: &mut Ctx) -> Result<i32> {
    match cmd {
        Command::Ricci { path, json } => cmd_ricci(ctx, path, *json),
        Command::Catalog { list: true, .. } => cmd_catalog_list(ctx),
        Command::Catalog { name, args, output, .. } => {
            cmd_catalog(ctx, name.as_deref().unwrap_or_default(), args, output.as_deref())
        }
        Command::DoubleExtend { input, output } => cmd_double_extend(ctx, input, output.as_deref()),
        Command::Decompose { input, output } => cmd_decompose(ctx, input, output.as_deref()),
        Command::VerifyPaper { only, seed, json } => cmd_verify_paper(ctx, only, *seed, *json),
        Command::Derivations { path } => cmd_derivations(ctx, path),
        Command::Search {
            catalog,
            file,
            target,
            minus,
            seed,
            restarts,
            max_iters,
            step0,
            residual_tol,
            output,
        } => {
            let algebra = match (catalog, file) {
                (Some(name), _) => make_algebra_by_name(name)?,
                (None, Some(path)) => read_algebra_path(path)?.algebra,
                (None, None) => return Err(Error::InvalidInput("give --catalog or --file".into())),
            };
            let n = algebra.dim();
            if *minus > n {
                return Err(Error::InvalidInput(format!("--minus {minus} exceeds dimension {n}")));
            }
            let mut spec = SearchSpec::new(algebra, *target, (*minus, n - minus));
            spec.seed = *seed;
            spec.restarts = *restarts;
            spec.max_iters = *max_iters;
            spec.step0 = *step0;
            spec.tol = *residual_tol;
            cmd_search(ctx, &spec, output.as_deref())
        }
        Command::Classify { path, subspace } => cmd_classify(ctx, path, *subspace),
    }
}

fn fmt_matrix(m: &Matrix) -> String {
    let mut s = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format!("{:>13.6e}", m[(i, j)])).collect();
        let _ = writeln!(s, "  {}", row.join(" "));
    }
    s
}

fn to_rows(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

fn cmd_ricci(ctx: &mut Ctx, path: &Path, json: bool) -> Result<i32> {
    let doc = read_algebra_path(path)?;
    let m = doc.metric_algebra()?;
    let sig = signature(m.gram(), ctx.rank_tol)?;
    let r = einstein_classify(&m, ctx.tol);
    let route = match r.route {
        RicciRoute::Nilpotent => "nilpotent",
        RicciRoute::Definition => "definition",
    };
    if json {
        let v = serde_json::json!({
            "dim": m.dim(),
            "signature": [sig.minus, sig.plus, sig.null],
            "route": route,
            "verdict": r.verdict.name(),
            "lambda": r.einstein_lambda,
            "scalar": r.scalar,
            "flat": r.flat,
            "einstein_residual": r.einstein_residual,
            "cross_check": r.cross_check,
            "curvature_max": r.curvature_max,
            "scale": r.scale,
            "ricci": to_rows(&r.ricci),
        });
        let mut text = serde_json::to_string_pretty(&v).map_err(|e| Error::Io(e.to_string()))?;
        text.push('\n');
        ctx.say(&text)?;
        return Ok(EXIT_OK);
    }
    let mut s = String::new();
    let _ = writeln!(s, "dim                {}", m.dim());
    let _ = writeln!(s, "signature          {sig}");
    let _ = writeln!(s, "route              {route}");
    let _ = writeln!(s, "verdict            {}", r.verdict.name());
    match r.einstein_lambda {
        Some(l) => {
            let _ = writeln!(s, "lambda             {l}");
        }
        None => s.push_str("lambda             -\n"),
    }
    let _ = writeln!(s, "scalar             {:e}", r.scalar);
    let _ = writeln!(s, "flat               {}", r.flat);
    let _ = writeln!(s, "einstein residual  {:e}", r.einstein_residual);
    let _ = writeln!(s, "cross check        {:e}", r.cross_check);
    let _ = writeln!(s, "curvature max      {:e}", r.curvature_max);
    let _ = writeln!(s, "scale              {:e}", r.scale);
    s.push_str("ricci operator\n");
    s.push_str(&fmt_matrix(&r.ricci));
    ctx.say(&s)?;
    Ok(EXIT_OK)
}

fn cmd_catalog_list(ctx: &mut Ctx) -> Result<i32> {
    let mut s = String::new();
    for name in CatalogName::ALL {
        let variants = name.variants();
        if name.is_example() {
            let _ = writeln!(s, "{:<5} dim {}  fixed example metric", name.as_str(), name.dim());
        } else if variants.is_empty() {
            let _ = writeln!(s, "{:<5} dim {}  no metric variant", name.as_str(), name.dim());
        } else {
            for v in variants {
                let _ = writeln!(
                    s,
                    "{:<5} dim {}  {:<5} params [{}]  {}",
                    name.as_str(),
                    name.dim(),
                    v.as_str(),
                    v.params().join(", "),
                    v.constraints()
                );
            }
        }
    }
    ctx.say(&s)?;
    Ok(EXIT_OK)
}

fn parse_params(args: &[String]) -> Result<Params> {
    let mut params = Params::new();
    for a in args {
        let (k, v) = a
            .split_once('=')
            .ok_or_else(|| Error::BadParams(format!("expected key=value, got `{a}`")))?;
        let x: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::BadParams(format!("`{v}` is not a number (parameter {k})")))?;
        if params.insert(k.trim().to_string(), x).is_some() {
            return Err(Error::BadParams(format!("parameter `{k}` given twice")));
        }
    }
    Ok(params)
}

fn cmd_catalog(ctx: &mut Ctx, name: &str, args: &[String], output: Option<&Path>) -> Result<i32> {
    let name: CatalogName = name.parse()?;
    let (variant, rest) = match args.first() {
        Some(first) if !first.contains('=') => (Some(first.parse::<MetricVariant>()?), &args[1..]),
        _ => (None, args),
    };
    let params = parse_params(rest)?;
    let text = if variant.is_none() && !name.is_example() {
        // Bare algebra, no metric.
        if !params.is_empty() {
            return Err(Error::BadParams(format!(
                "{name} takes parameters only through a metric variant"
            )));
        }
        write_algebra(&make_algebra(name), None, Some(&format!("catalog {name}")))
    } else {
        catalog_export(&CatalogKey {
            name,
            metric_variant: variant,
            params,
        })?
    };
    ctx.emit(output, &text)?;
    Ok(EXIT_OK)
}

fn cmd_double_extend(ctx: &mut Ctx, input: &Path, output: Option<&Path>) -> Result<i32> {
    let doc = read_extension_path(input)?;
    for w in &doc.warnings {
        ctx.note(&format!("warning: {w}\n"))?;
    }
    let adm = check_admissible(&doc.data, ctx.rank_tol);
    ctx.note(&format!(
        "lie {} (residual {:e}), nilpotent {}, einstein {} (trace residual {:e})\n",
        adm.is_lie, adm.lie_residual, adm.is_nilpotent, adm.is_einstein, adm.trace_residual
    ))?;
    let m = extend(&doc.data)?;
    let comment = format!("double extension of {} (v_dim {})", input.display(), doc.data.v_dim());
    ctx.emit(output, &write_algebra(m.algebra(), Some(m.gram()), Some(&comment)))?;
    Ok(EXIT_OK)
}

fn cmd_decompose(ctx: &mut Ctx, input: &Path, output: Option<&Path>) -> Result<i32> {
    let doc = read_algebra_path(input)?;
    let m = doc.metric_algebra()?;
    match decompose(&m, ctx.rank_tol)? {
        None => {
            ctx.say("none: the center contains no isotropic vector\n")?;
            Ok(EXIT_NOT_APPLICABLE)
        }
        Some(dec) => {
            ctx.note(&format!(
                "v_dim {}, model residual {:e}\n",
                dec.data.v_dim(),
                dec.model_residual
            ))?;
            let comment = format!("decomposition of {}", input.display());
            ctx.emit(
                output,
                &write_extension(&dec.data, Some(&dec.basis_change), Some(&comment)),
            )?;
            Ok(EXIT_OK)
        }
    }
}

fn cmd_verify_paper(ctx: &mut Ctx, only: &[String], seed: u64, json: bool) -> Result<i32> {
    let cfg = VerifyConfig {
        tol: ctx.tol,
        rank_tol: ctx.rank_tol,
        seed,
        only: only.to_vec(),
    };
    let rows = verify::run(&cfg)?;
    if json {
        let mut text = serde_json::to_string_pretty(&rows).map_err(|e| Error::Io(e.to_string()))?;
        text.push('\n');
        ctx.say(&text)?;
    } else {
        ctx.say(&verify::render(&rows))?;
    }
    Ok(if rows.iter().all(|r| r.pass) {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}

/// Catalog algebra of dimension at most five whose structure constants coincide with `a`, if any.
fn recognize(a: &LieAlgebra, tol: f64) -> Option<CatalogName> {
    CatalogName::ALL
        .into_iter()
        .filter(|n| !n.is_example() && n.dim() == a.dim())
        .find(|&n| {
            let b = make_algebra(n);
            let scale = a.max_abs().max(b.max_abs()).max(1.0);
            let same = a
                .upper_brackets()
                .zip(b.upper_brackets())
                .all(|((_, _, u), (_, _, v))| (u - v).amax() <= tol * scale);
            same
        })
}

fn cmd_derivations(ctx: &mut Ctx, path: &Path) -> Result<i32> {
    let doc = read_algebra_path(path)?;
    let a = &doc.algebra;
    let space = derivation_space(a, ctx.rank_tol);
    let mut s = String::new();
    let _ = writeln!(s, "derivation space dimension  {}", space.len());
    if let Some(name) = recognize(a, ctx.rank_tol) {
        if let Ok(d) = table1_derivation(name) {
            let diag: Vec<String> = d.matrix.diagonal().iter().map(|x| x.to_string()).collect();
            let _ = writeln!(
                s,
                "catalog algebra {name}: listed derivation diag({}), trace {}, defect {:e}",
                diag.join(", "),
                d.trace(),
                derivation_defect(a, &d.matrix)
            );
        }
    }
    match find_nonzero_trace_derivation(a, ctx.rank_tol) {
        Some(d) => {
            let _ = writeln!(
                s,
                "nonzero-trace derivation   trace {}, defect {:e}",
                d.trace(),
                derivation_defect(a, &d.matrix)
            );
            s.push_str(&fmt_matrix(&d.matrix));
        }
        None => s.push_str("nonzero-trace derivation   none\n"),
    }
    ctx.say(&s)?;
    Ok(EXIT_OK)
}

fn cmd_search(ctx: &mut Ctx, spec: &SearchSpec, output: Option<&Path>) -> Result<i32> {
    let r = run_search(spec)?;
    let mut s = String::new();
    let _ = writeln!(s, "target             {}", spec.target);
    let _ = writeln!(
        s,
        "signature          ({}, {})",
        spec.signature_target.0, spec.signature_target.1
    );
    let _ = writeln!(s, "converged          {}", r.converged);
    let _ = writeln!(s, "residual           {:e}", r.residual);
    let _ = writeln!(s, "raw residual       {:e}", r.raw_residual);
    let _ = writeln!(s, "iterations         {}", r.iterations);
    let _ = writeln!(s, "restart            {}", r.restart);
    if let Some(g) = &r.best_gram {
        s.push_str("metric\n");
        s.push_str(&fmt_matrix(g.matrix()));
        if let Some(p) = output {
            let comment = format!("search {} seed {} restart {}", spec.target, spec.seed, r.restart);
            ctx.emit(Some(p), &write_algebra(&spec.algebra, Some(g), Some(&comment)))?;
        }
    }
    ctx.say(&s)?;
    Ok(EXIT_OK)
}

fn describe(ctx: &Ctx, label: &str, f: &Subspace, gram: Option<&Gram>) -> Result<String> {
    let mut s = format!("{label:<14} dim {}", f.dim());
    if let Some(g) = gram {
        let c = classify_subspace(g, f, ctx.rank_tol)?;
        let _ = write!(s, "  {}  signature {}", c.tag, c.signature);
        if c.null_dim > 0 {
            let _ = write!(s, "  null dim {}", c.null_dim);
        }
    }
    s.push('\n');
    Ok(s)
}

fn cmd_classify(ctx: &mut Ctx, path: &Path, which: Which) -> Result<i32> {
    let doc = read_algebra_path(path)?;
    let a = &doc.algebra;
    let g = doc.metric.as_ref();
    let z = center(a, ctx.rank_tol);
    let d = derived_ideal(a, ctx.rank_tol);
    let mut s = String::new();
    if g.is_none() {
        s.push_str("no metric in file: dimensions only\n");
    }
    if which != Which::Derived {
        s.push_str(&describe(ctx, "center", &z, g)?);
    }
    if which != Which::Center {
        s.push_str(&describe(ctx, "derived ideal", &d, g)?);
    }
    if which == Which::Both {
        let _ = writeln!(s, "center in derived ideal: residual {:e}", z.inclusion_residual(&d));
    }
    ctx.say(&s)?;
    Ok(EXIT_OK)
}
