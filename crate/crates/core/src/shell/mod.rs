//! The `firmfrob` command line: reading and writing documents, and the
//! `check`, `convert`, `cosep`, `casimir` and `gen` commands.

pub mod format;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use crate::algcore::{check_associativity, check_firm_algebra, check_nondegenerate, verify_local_units};
use crate::coalgcore::check_coalgebra;
use crate::error::{Error, Result};
use crate::exactla::FieldSpec;
use crate::families::{
    gen_comatrix, gen_graded_smash, gen_grouplike_integers, gen_trunc_poly, grouplike_bundle,
    grouplike_local_units, GradedAlgebraData, GroupTable, MAX_GROUP_ORDER,
};
use crate::frobcore::{
    build_from_cosep, casimir_from_delta, cosep_solve, multiplier_to_element, section_check, Side,
};
use crate::modcomod::{induced_action, induced_coaction, verify_roundtrips, Samples};
use crate::report::CheckReport;
use crate::suite::{run_suite, SuiteCheck, SuiteOptions};

pub use format::{
    parse_document, serialize_document, AlgebraFile, BundleFile, CasimirFile, Document, ReportFile,
    FORMAT,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "firmfrob", version, about = "Exact checks for firm Frobenius bundles")]
pub struct Cli {
    /// Seed for sampled (co)modules and morphisms.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Window size for locally-finite generators.
    #[arg(long, global = true, default_value_t = 5)]
    pub window: usize,
    /// Largest subset size in local-unit checks.
    #[arg(long, global = true, default_value_t = 2)]
    pub max_subset: usize,
    /// Run checks on the thread pool.
    #[arg(long, global = true, default_value_t = true, action = clap::ArgAction::Set)]
    pub parallel: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    #[value(name = "mod-to-comod", alias = "mod->comod")]
    ModToComod,
    #[value(name = "comod-to-mod", alias = "comod->mod")]
    ComodToMod,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a suite of checks on a bundle, algebra or coalgebra file.
    Check {
        path: PathBuf,
        #[arg(long, default_value = "all")]
        suite: String,
        /// Defaults to the input path with extension `report.json`.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Turn a module into a comodule or back, over a bundle.
    Convert {
        direction: Direction,
        input: PathBuf,
        bundle: PathBuf,
        out: PathBuf,
        #[arg(long)]
        verify_roundtrip: bool,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Build a bundle from a coseparable coalgebra.
    Cosep {
        coalgebra: PathBuf,
        out: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Emit the Casimir multiplier of a bundle and rebuild Δ from it.
    Casimir {
        bundle: PathBuf,
        out: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Generate an example file.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
}

#[derive(Debug, Subcommand)]
pub enum Family {
    /// Functions on a finite group, or on the integers cut to a window.
    Grouplike {
        #[arg(long, conflicts_with_all = ["table", "integers"])]
        order: Option<usize>,
        /// A JSON file holding the multiplication table as an array of arrays.
        #[arg(long, conflicts_with = "integers")]
        table: Option<PathBuf>,
        #[arg(long)]
        integers: bool,
        #[arg(long, default_value = "q")]
        field: String,
        out: PathBuf,
    },
    /// The comatrix coalgebra on n×n matrix units.
    Comatrix {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "q")]
        field: String,
        out: PathBuf,
    },
    /// The smash product of a cyclic group algebra with its dual.
    Smash {
        #[arg(long)]
        order: usize,
        #[arg(long, default_value = "q")]
        field: String,
        out: PathBuf,
    },
    /// k[x]/(x²) with the coproduct Δ(1) = 1⊗x + x⊗1, Δ(x) = x⊗x.
    Truncpoly {
        #[arg(long, default_value = "q")]
        field: String,
        out: PathBuf,
    },
}

/// `q`, `Q`, `rationals`, or a prime written `f5`, `F5` or `5`.
pub fn parse_field(text: &str) -> Result<FieldSpec> {
    match text {
        "q" | "Q" | "rationals" => Ok(FieldSpec::Rationals),
        _ => {
            let digits = text.strip_prefix(['f', 'F']).unwrap_or(text);
            let p: u32 = digits
                .parse()
                .map_err(|_| Error::Parse(format!("unknown field {text:?}")))?;
            FieldSpec::prime(p).map_err(|e| Error::Parse(e.to_string()))
        }
    }
}

fn input_hash(bytes: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for b in bytes {
        h.update(b);
    }
    format!("sha256:{}", hex::encode(h.finalize()))
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn read_document(path: &Path) -> Result<(Document, Vec<u8>)> {
    let bytes = read(path)?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let doc = parse_document(text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        Error::MalformedScalar { text, reason } => Error::MalformedScalar {
            text,
            reason: format!("{reason} in {}", path.display()),
        },
        other => other,
    })?;
    Ok((doc, bytes))
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn write_document(path: &Path, doc: &Document) -> Result<()> {
    write_atomic(path, &serialize_document(doc))
}

struct Context {
    opts: SuiteOptions,
    window: usize,
}

impl Context {
    fn finish(
        &self,
        command: &str,
        mut report: CheckReport,
        hash: String,
        report_path: Option<&Path>,
    ) -> Result<i32> {
        report.provenance.input_hash = Some(hash);
        report.provenance.seed = Some(self.opts.seed);
        report.provenance.max_subset = Some(self.opts.max_subset);
        print_report(&report, 0);
        if let Some(p) = report_path {
            write_document(
                p,
                &Document::Report(ReportFile {
                    command: command.to_string(),
                    report: report.clone(),
                }),
            )?;
        }
        Ok(if report.passed() { EXIT_PASS } else { EXIT_FAIL })
    }
}

/// Prints the top-level checks, expanding only the ones that did not pass.
fn print_report(r: &CheckReport, depth: usize) {
    let mut out = std::io::stdout().lock();
    write_tree(&mut out, r, depth);
}

fn write_tree(out: &mut impl Write, r: &CheckReport, depth: usize) {
    if writeln!(out, "{}{r}", "  ".repeat(depth)).is_err() {
        return;
    }
    if depth == 0 || !r.passed() {
        for c in &r.children {
            write_tree(out, c, depth + 1);
        }
    }
}

fn refusal(check: &str, e: Error) -> Result<CheckReport> {
    match e {
        Error::Refused(r) => Ok(*r),
        Error::DegeneracyLeak(m) => Ok(CheckReport::refused(check, m, None)),
        other => Err(other),
    }
}

fn check_algebra_file(a: &AlgebraFile, checks: &[SuiteCheck], ctx: &Context) -> Result<CheckReport> {
    let mut children = Vec::new();
    for c in checks {
        children.push(match c {
            SuiteCheck::Associativity => check_associativity(&a.algebra),
            SuiteCheck::Nondegenerate => check_nondegenerate(&a.algebra),
            SuiteCheck::Firmness => check_firm_algebra(&a.algebra).0,
            SuiteCheck::LocalUnits => {
                let family = match (&a.local_units, a.algebra.unit()) {
                    (Some(f), _) => crate::algcore::LocalUnitFamily::new(f.elements.clone(), ctx.opts.max_subset),
                    (None, Some(u)) => crate::algcore::LocalUnitFamily::new(vec![u], ctx.opts.max_subset),
                    (None, None) => {
                        children.push(CheckReport::refused(
                            "local-units",
                            "no unit and no local-unit family supplied",
                            None,
                        ));
                        continue;
                    }
                };
                verify_local_units(&a.algebra, &family, None)
            }
            _ => continue,
        });
    }
    if children.is_empty() {
        return Err(Error::Parse("the suite has no check that applies to an algebra".into()));
    }
    Ok(CheckReport::aggregate("suite", children))
}

fn cmd_check(path: &Path, suite: &str, report: Option<&Path>, ctx: &Context) -> Result<i32> {
    let checks = SuiteCheck::parse_suite(suite)?;
    let (doc, bytes) = read_document(path)?;
    let rep = match &doc {
        Document::Bundle(file) => {
            let opts = SuiteOptions {
                local_units: file.local_units.clone(),
                ..ctx.opts.clone()
            };
            let mut rep = run_suite(&file.bundle, &checks, &opts);
            let attached = !file.modules.is_empty() || !file.comodules.is_empty();
            if attached && checks.contains(&SuiteCheck::Roundtrips) {
                let samples = Samples {
                    modules: file.modules.clone(),
                    comodules: file.comodules.clone(),
                };
                let mut r = verify_roundtrips(&file.bundle, &samples);
                r.check = "attached-roundtrips".into();
                let mut children = rep.children;
                children.push(r);
                let provenance = rep.provenance;
                rep = CheckReport::aggregate("suite", children);
                rep.provenance = provenance;
            }
            rep
        }
        Document::Algebra(a) => check_algebra_file(a, &checks, ctx)?,
        Document::Coalgebra(c) => {
            if !checks.contains(&SuiteCheck::Coalgebra) {
                return Err(Error::Parse("the suite has no check that applies to a coalgebra".into()));
            }
            CheckReport::aggregate("suite", vec![check_coalgebra(c)])
        }
        other => {
            return Err(Error::Parse(format!(
                "{}: cannot check a {} document",
                path.display(),
                other.kind()
            )))
        }
    };
    ctx.finish("check", rep, input_hash(&[&bytes]), report)
}

fn read_bundle(path: &Path) -> Result<(BundleFile, Vec<u8>)> {
    match read_document(path)? {
        (Document::Bundle(b), bytes) => Ok((b, bytes)),
        (other, _) => Err(Error::Parse(format!(
            "{}: expected a bundle document, found {}",
            path.display(),
            other.kind()
        ))),
    }
}

fn cmd_convert(
    direction: Direction,
    input: &Path,
    bundle_path: &Path,
    out: &Path,
    verify: bool,
    report: Option<&Path>,
    ctx: &Context,
) -> Result<i32> {
    let (file, bundle_bytes) = read_bundle(bundle_path)?;
    let b = &file.bundle;
    let (doc, input_bytes) = read_document(input)?;
    let hash = input_hash(&[&input_bytes, &bundle_bytes]);
    let mut children = Vec::new();
    let result = match (direction, doc) {
        (Direction::ModToComod, Document::Module(m)) => match induced_coaction(b, &m) {
            Ok(c) => {
                children.push(CheckReport::pass("induced-coaction"));
                if verify {
                    children.push(match induced_action(b, &c) {
                        Ok(back) if back == m => CheckReport::pass("roundtrip"),
                        Ok(_) => CheckReport::refused("roundtrip", "Φ(Ψ(M)) differs from M", None),
                        Err(e) => refusal("roundtrip", e)?,
                    });
                }
                Some(Document::Comodule(c))
            }
            Err(e) => {
                children.push(refusal("induced-coaction", e)?);
                None
            }
        },
        (Direction::ComodToMod, Document::Comodule(c)) => match induced_action(b, &c) {
            Ok(m) => {
                children.push(CheckReport::pass("induced-action"));
                if verify {
                    children.push(match induced_coaction(b, &m) {
                        Ok(back) if back == c => CheckReport::pass("roundtrip"),
                        Ok(_) => CheckReport::refused("roundtrip", "Ψ(Φ(N)) differs from N", None),
                        Err(e) => refusal("roundtrip", e)?,
                    });
                }
                Some(Document::Module(m))
            }
            Err(e) => {
                children.push(refusal("induced-action", e)?);
                None
            }
        },
        (d, doc) => {
            let want = if d == Direction::ModToComod { "module" } else { "comodule" };
            return Err(Error::Parse(format!(
                "{}: expected a {want} document, found {}",
                input.display(),
                doc.kind()
            )));
        }
    };
    let rep = CheckReport::aggregate("convert", children);
    if let (Some(doc), true) = (&result, rep.passed()) {
        write_document(out, doc)?;
    }
    ctx.finish("convert", rep, hash, report)
}

fn cmd_cosep(path: &Path, out: &Path, report: Option<&Path>, ctx: &Context) -> Result<i32> {
    let (doc, bytes) = read_document(path)?;
    let hash = input_hash(&[&bytes]);
    let coalg = match doc {
        Document::Coalgebra(c) => c,
        Document::Bundle(b) => b.bundle.coalgebra().clone(),
        other => {
            return Err(Error::Parse(format!(
                "{}: expected a coalgebra document, found {}",
                path.display(),
                other.kind()
            )))
        }
    };
    let nu = match cosep_solve(&coalg) {
        Ok(Some(nu)) => nu,
        Ok(None) => {
            let rep = CheckReport::refused(
                "cosep",
                "not coseparable: no bicolinear retraction of Δ exists",
                None,
            );
            return ctx.finish("cosep", rep, hash, report);
        }
        Err(e) => return ctx.finish("cosep", refusal("cosep", e)?, hash, report),
    };
    let bundle = match build_from_cosep(&coalg, &nu) {
        Ok(b) => b,
        Err(e) => return ctx.finish("cosep", refusal("cosep", e)?, hash, report),
    };
    let mut rep = run_suite(&bundle, &SuiteCheck::ALL, &ctx.opts);
    let provenance = rep.provenance.clone();
    let mut children = rep.children;
    children.push(section_check(&bundle, bundle.coalgebra().comul()));
    rep = CheckReport::aggregate("cosep", children);
    rep.provenance = provenance;
    write_document(out, &Document::Bundle(BundleFile::new(bundle)))?;
    ctx.finish("cosep", rep, hash, report)
}

fn cmd_casimir(path: &Path, out: &Path, report: Option<&Path>, ctx: &Context) -> Result<i32> {
    let (file, bytes) = read_bundle(path)?;
    let hash = input_hash(&[&bytes]);
    let b = &file.bundle;
    let pair = match casimir_from_delta(b) {
        Ok(p) => p,
        Err(e) => return ctx.finish("casimir", refusal("casimir", e)?, hash, report),
    };
    let mut elements = Vec::with_capacity(b.dim());
    for r in 0..b.dim() {
        let left = multiplier_to_element(b.algebra(), &pair, r, Side::Left);
        let right = multiplier_to_element(b.algebra(), &pair, r, Side::Right);
        match (left, right) {
            (Ok(Some(l)), Ok(Some(rt))) => elements.push((l, rt)),
            (Err(e), _) | (_, Err(e)) => return ctx.finish("casimir", refusal("casimir", e)?, hash, report),
            _ => {
                let rep = CheckReport::refused(
                    "casimir",
                    format!("e is not in the ideal R⊗R at r = {}", b.labels()[r]),
                    None,
                );
                return ctx.finish("casimir", rep, hash, report);
            }
        }
    }
    let mut rep = run_suite(b, &[SuiteCheck::Casimir], &ctx.opts);
    rep.check = "casimir".into();
    write_document(
        out,
        &Document::Casimir(CasimirFile {
            field: b.field(),
            labels: b.labels().to_vec(),
            pair,
            elements,
            report: rep.clone(),
        }),
    )?;
    ctx.finish("casimir", rep, hash, report)
}

fn cmd_gen(family: &Family, ctx: &Context) -> Result<i32> {
    let check_order = |n: usize| {
        if n == 0 || n > MAX_GROUP_ORDER {
            Err(Error::Parse(format!("order must lie in 1..={MAX_GROUP_ORDER}, got {n}")))
        } else {
            Ok(n)
        }
    };
    let max_subset = ctx.opts.max_subset;
    let (doc, out) = match family {
        Family::Grouplike {
            order,
            table,
            integers,
            field,
            out,
        } => {
            let f = parse_field(field)?;
            if *integers {
                let lf = gen_grouplike_integers(f);
                let mut file = BundleFile::new(lf.window_bundle(ctx.window)?);
                file.local_units = Some(lf.window_local_units(ctx.window, max_subset)?);
                (Document::Bundle(file), out)
            } else {
                let n = match (order, table) {
                    (Some(n), None) => check_order(*n)?,
                    (None, Some(path)) => {
                        let bytes = read(path)?;
                        let rows: Vec<Vec<usize>> = serde_json::from_slice(&bytes).map_err(|e| {
                            Error::Parse(format!(
                                "{}: line {} column {}: {e}",
                                path.display(),
                                e.line(),
                                e.column()
                            ))
                        })?;
                        let g = GroupTable::new(rows).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                        check_order(g.order())?
                    }
                    _ => return Err(Error::Parse("grouplike needs --order, --table or --integers".into())),
                };
                let mut file = BundleFile::new(grouplike_bundle(n, f));
                file.local_units = Some(grouplike_local_units(n, f, max_subset));
                (Document::Bundle(file), out)
            }
        }
        Family::Comatrix { n, field, out } => {
            if *n == 0 {
                return Err(Error::Parse("comatrix needs n ≥ 1".into()));
            }
            (Document::Coalgebra(gen_comatrix(*n, parse_field(field)?)?), out)
        }
        Family::Smash { order, field, out } => {
            let group = GroupTable::cyclic(check_order(*order)?)?;
            let graded = GradedAlgebraData::group_algebra(group, parse_field(field)?)?;
            let s = gen_graded_smash(&graded, max_subset)?;
            (
                Document::Algebra(AlgebraFile {
                    algebra: s.algebra,
                    local_units: Some(s.local_units),
                }),
                out,
            )
        }
        Family::Truncpoly { field, out } => (
            Document::Bundle(BundleFile::new(gen_trunc_poly(parse_field(field)?))),
            out,
        ),
    };
    write_document(out, &doc)?;
    let _ = writeln!(std::io::stdout(), "wrote {} document to {}", doc.kind(), out.display());
    Ok(EXIT_PASS)
}

fn dispatch(cli: &Cli) -> Result<i32> {
    let ctx = Context {
        opts: SuiteOptions {
            seed: cli.seed,
            max_subset: cli.max_subset,
            ..SuiteOptions::default()
        },
        window: cli.window,
    };
    match &cli.command {
        Command::Check { path, suite, report } => {
            let report = report.clone().unwrap_or_else(|| path.with_extension("report.json"));
            cmd_check(path, suite, Some(&report), &ctx)
        }
        Command::Convert {
            direction,
            input,
            bundle,
            out,
            verify_roundtrip,
            report,
        } => cmd_convert(*direction, input, bundle, out, *verify_roundtrip, report.as_deref(), &ctx),
        Command::Cosep { coalgebra, out, report } => cmd_cosep(coalgebra, out, report.as_deref(), &ctx),
        Command::Casimir { bundle, out, report } => cmd_casimir(bundle, out, report.as_deref(), &ctx),
        Command::Gen { family } => cmd_gen(family, &ctx),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Refused(_) | Error::DegeneracyLeak(_) => EXIT_FAIL,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    let outcome = if cli.parallel {
        dispatch(&cli)
    } else {
        match rayon::ThreadPoolBuilder::new().num_threads(1).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(Error::Parse(e.to_string())),
        }
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            if let Error::Refused(r) = &e {
                print_report(r, 0);
            }
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
