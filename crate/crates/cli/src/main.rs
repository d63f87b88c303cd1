//! `trilie`: checks and constructions on 3-Lie algebras from JSON files.
//!
//! Reports go to stdout as one JSON document, summaries to stderr. Exit
//! status is 0 when every check passes, 1 on violations or failed
//! mathematical preconditions, 2 on unreadable or malformed input.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use trilie::families::{
    self, check_reynolds_sampled, default_samples, materialize_window, GradedFamily, Laurent, Omega, OmegaIndex,
    PartialAlgebra, Window,
};
use trilie::format::{self as fmt, write_json};
use trilie::nsnr::{self, NijenhuisOp, ReynoldsOp};
use trilie::repcoh::{check_2cocycle, check_representation, cohomology_dims, twisted_semidirect, CohomologyRow};
use trilie::threelie::{check_derivation, check_fundamental_identity, check_homomorphism};
use trilie::trbo::{self, TwistedRbo};
use trilie::{Error, Report};

#[derive(Parser)]
#[command(name = "trilie", version, about = "Exact checks and constructions for 3-Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an identity on a structure read from a file.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Build a derived structure.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Twisted Rota-Baxter operators.
    #[command(subcommand)]
    Trbo(TrboCmd),
    /// Cohomology dimensions of a representation.
    Cohomology {
        rep: PathBuf,
        #[arg(long, default_value_t = 2)]
        nmax: usize,
    },
    /// The Laurent and ω∞ families.
    Family {
        #[arg(value_enum)]
        family: FamilyName,
        #[command(subcommand)]
        action: FamilyCmd,
    },
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Fundamental identity of an algebra file.
    Fi { algebra: PathBuf },
    /// Derivation property of an endomorphism file.
    Derivation { endo: PathBuf },
    /// Representation identities of a representation file.
    Rep { rep: PathBuf },
    /// 2-cocycle identity of the Φ in a context file.
    Cocycle { context: PathBuf },
    /// Nijenhuis identity of an endomorphism file.
    Nijenhuis { endo: PathBuf },
    /// Reynolds identity of an endomorphism file, plus the R-bracket properties when it holds.
    Reynolds { endo: PathBuf },
    /// NS-3-Lie axioms of an NS file.
    Ns { ns: PathBuf },
}

#[derive(Args)]
struct Emit {
    /// Write the constructed structure to this file.
    #[arg(long)]
    emit: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Twisted semidirect product of a context.
    Semidirect {
        context: PathBuf,
        #[command(flatten)]
        emit: Emit,
    },
    /// The identity as a twisted operator for the Nijenhuis deformation (g_N, ρ_N, Φ_N).
    DeformN {
        endo: PathBuf,
        #[command(flatten)]
        emit: Emit,
    },
    /// The bracket induced by a Reynolds operator.
    ReynoldsBracket {
        endo: PathBuf,
        #[command(flatten)]
        emit: Emit,
    },
    /// NS-3-Lie algebra induced by a twisted operator.
    NsFromTrbo {
        operator: PathBuf,
        #[command(flatten)]
        emit: Emit,
    },
    /// NS-3-Lie algebra induced by a Nijenhuis operator.
    NsFromNijenhuis {
        endo: PathBuf,
        #[command(flatten)]
        emit: Emit,
    },
    /// NS-3-Lie algebra induced by a Reynolds operator.
    NsFromReynolds {
        endo: PathBuf,
        #[command(flatten)]
        emit: Emit,
    },
    /// A Reynolds operator as a twisted operator for (ad, −bracket).
    TrboFromReynolds {
        endo: PathBuf,
        #[command(flatten)]
        emit: Emit,
    },
}

#[derive(Subcommand)]
enum TrboCmd {
    /// The defining identity and the graph criterion.
    Check { operator: PathBuf },
    /// Induced bracket on V and the representation ϱ on g.
    Induce {
        operator: PathBuf,
        #[command(flatten)]
        emit: Emit,
    },
    /// Dimensions of the operator's cohomology.
    Cohomology {
        operator: PathBuf,
        #[arg(long, default_value_t = 2)]
        nmax: usize,
    },
    /// Gauge the operator by an admissible 1-cocycle.
    Gauge {
        file: PathBuf,
        #[command(flatten)]
        emit: Emit,
    },
    /// Formal deformations.
    #[command(subcommand)]
    Deform(DeformCmd),
}

#[derive(Subcommand)]
enum DeformCmd {
    /// Check that each direction deforms the operator.
    Check { file: PathBuf },
    /// Check that two directions are equivalent via X.
    Equiv { file: PathBuf },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum FamilyName {
    Laurent,
    Omega,
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// Reynolds identity on all valid triples of distinct generators with indices in a range.
    Reynolds {
        /// Inclusive range `a..b`; for ω∞ both mode and weight run over it.
        #[arg(long, allow_hyphen_values = true, default_value = "-5..6")]
        range: String,
        /// Check only this many triples, drawn with `--seed`.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Materialize a finite window and run the restricted checks.
    Window {
        #[arg(long, allow_hyphen_values = true)]
        lo: i64,
        #[arg(long, allow_hyphen_values = true)]
        hi: i64,
        /// Weight bounds for ω∞; default to `--lo`/`--hi`.
        #[arg(long, allow_hyphen_values = true)]
        a_lo: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        a_hi: Option<i64>,
        #[command(flatten)]
        emit: Emit,
    },
}

/// Everything a command prints.
struct Output {
    command: String,
    reports: Vec<Report>,
    data: Map<String, Value>,
}

impl Output {
    fn new(command: &str) -> Self {
        Output {
            command: command.into(),
            reports: Vec::new(),
            data: Map::new(),
        }
    }

    fn report(mut self, r: Report) -> Self {
        self.reports.push(r);
        self
    }

    fn with(mut self, key: &str, value: Value) -> Self {
        self.data.insert(key.into(), value);
        self
    }

    fn passed(&self) -> bool {
        self.reports.iter().all(Report::passed)
    }

    fn emit(self, emit: &Emit, value: Value) -> trilie::Result<Self> {
        let out = match &emit.emit {
            Some(path) => {
                write_json(path, &value)?;
                self.with("emitted", json!(path.display().to_string()))
            }
            None => self,
        };
        Ok(out.with("result", value))
    }
}

fn input_error(e: &Error) -> bool {
    e.is_input_error() || matches!(e, Error::DimensionMismatch(_) | Error::DegreeCap { .. } | Error::ResourceCap(_))
}

fn print(out: &Output, extra: Option<(&str, Value)>) {
    let outcome = match &extra {
        Some(_) => "error",
        None if out.passed() => "pass",
        None => "fail",
    };
    let mut doc = Map::new();
    doc.insert("command".into(), json!(out.command));
    doc.insert("outcome".into(), json!(outcome));
    doc.insert("reports".into(), serde_json::to_value(&out.reports).expect("reports serialize"));
    for (k, v) in &out.data {
        doc.insert(k.clone(), v.clone());
    }
    if let Some((k, v)) = extra {
        doc.insert(k.into(), v);
    }
    println!("{}", serde_json::to_string_pretty(&Value::Object(doc)).expect("serializes"));
    for r in &out.reports {
        eprintln!("{}", r.summary());
    }
}

fn configure_workers() -> Result<(), String> {
    let Ok(raw) = std::env::var("TRILIE_WORKERS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("TRILIE_WORKERS must be a positive integer, found {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_workers() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let name = command_name(&cli.command);
    match run(cli.command) {
        Ok(out) => {
            print(&out, None);
            ExitCode::from(if out.passed() { 0 } else { 1 })
        }
        Err(Error::VerificationFailed { subject, report }) => {
            let out = Output::new(&name).report(*report);
            print(&out, None);
            eprintln!("{subject} failed verification");
            ExitCode::from(1)
        }
        Err(e) => {
            print(&Output::new(&name), Some(("error", json!(e.to_string()))));
            eprintln!("error: {e}");
            ExitCode::from(if input_error(&e) { 2 } else { 1 })
        }
    }
}

fn command_name(c: &Command) -> String {
    let s = match c {
        Command::Check(c) => match c {
            CheckCmd::Fi { .. } => "check fi",
            CheckCmd::Derivation { .. } => "check derivation",
            CheckCmd::Rep { .. } => "check rep",
            CheckCmd::Cocycle { .. } => "check cocycle",
            CheckCmd::Nijenhuis { .. } => "check nijenhuis",
            CheckCmd::Reynolds { .. } => "check reynolds",
            CheckCmd::Ns { .. } => "check ns",
        },
        Command::Construct(c) => match c {
            ConstructCmd::Semidirect { .. } => "construct semidirect",
            ConstructCmd::DeformN { .. } => "construct deform-n",
            ConstructCmd::ReynoldsBracket { .. } => "construct reynolds-bracket",
            ConstructCmd::NsFromTrbo { .. } => "construct ns-from-trbo",
            ConstructCmd::NsFromNijenhuis { .. } => "construct ns-from-nijenhuis",
            ConstructCmd::NsFromReynolds { .. } => "construct ns-from-reynolds",
            ConstructCmd::TrboFromReynolds { .. } => "construct trbo-from-reynolds",
        },
        Command::Trbo(c) => match c {
            TrboCmd::Check { .. } => "trbo check",
            TrboCmd::Induce { .. } => "trbo induce",
            TrboCmd::Cohomology { .. } => "trbo cohomology",
            TrboCmd::Gauge { .. } => "trbo gauge",
            TrboCmd::Deform(DeformCmd::Check { .. }) => "trbo deform check",
            TrboCmd::Deform(DeformCmd::Equiv { .. }) => "trbo deform equiv",
        },
        Command::Cohomology { .. } => "cohomology",
        Command::Family { family, action } => {
            let f = match family {
                FamilyName::Laurent => "laurent",
                FamilyName::Omega => "omega",
            };
            let a = match action {
                FamilyCmd::Reynolds { .. } => "reynolds",
                FamilyCmd::Window { .. } => "window",
            };
            return format!("family {f} {a}");
        }
    };
    s.into()
}

fn rows_json(rows: &[CohomologyRow]) -> Value {
    serde_json::to_value(rows).expect("rows serialize")
}

fn run(command: Command) -> trilie::Result<Output> {
    let name = command_name(&command);
    let out = Output::new(&name);
    match command {
        Command::Check(c) => run_check(c, out),
        Command::Construct(c) => run_construct(c, out),
        Command::Trbo(c) => run_trbo(c, out),
        Command::Cohomology { rep, nmax } => {
            let rep = fmt::load_rep(&rep)?.verify_all()?;
            Ok(out.with("rows", rows_json(&cohomology_dims(&rep, nmax)?)))
        }
        Command::Family { family, action } => match family {
            FamilyName::Laurent => run_family(&Laurent, action, out, |lo, hi, _| families::laurent_window(lo, hi)),
            FamilyName::Omega => run_family(&Omega, action, out, |lo, hi, a| {
                families::omega_window((lo, hi), a.unwrap_or((lo, hi)))
            }),
        },
    }
}

fn load_nijenhuis(path: &Path) -> trilie::Result<NijenhuisOp> {
    let (a, n) = fmt::load_endo(path)?;
    NijenhuisOp::new(a.verify()?, n)?.verify()
}

fn load_reynolds(path: &Path) -> trilie::Result<ReynoldsOp> {
    let (a, r) = fmt::load_endo(path)?;
    ReynoldsOp::new(a.verify()?, r)?.verify()
}

fn run_check(c: CheckCmd, out: Output) -> trilie::Result<Output> {
    Ok(match c {
        CheckCmd::Fi { algebra } => out.report(check_fundamental_identity(&fmt::load_algebra(&algebra)?)),
        CheckCmd::Derivation { endo } => {
            let (a, d) = fmt::load_endo(&endo)?;
            out.report(check_derivation(&a, &d)?)
        }
        CheckCmd::Rep { rep } => {
            let rep = fmt::load_rep(&rep)?;
            out.report(check_fundamental_identity(rep.carrier())).report(check_representation(&rep))
        }
        CheckCmd::Cocycle { context } => {
            let ctx = fmt::load_context(&context)?;
            let rep = ctx.rep().clone().verify_all()?;
            out.report(check_2cocycle(&rep, ctx.phi())?)
        }
        CheckCmd::Nijenhuis { endo } => {
            let (a, n) = fmt::load_endo(&endo)?;
            out.report(nsnr::check_nijenhuis(&a.verify()?, &n)?)
        }
        CheckCmd::Reynolds { endo } => {
            let (a, r) = fmt::load_endo(&endo)?;
            let a = a.verify()?;
            let report = nsnr::check_reynolds(&a, &r)?;
            if report.passed() {
                let op = ReynoldsOp::new(a, r)?.verify()?;
                out.report(report).report(nsnr::check_reynolds_bracket(&op)?)
            } else {
                out.report(report)
            }
        }
        CheckCmd::Ns { ns } => out.report(nsnr::check_ns_axioms(&fmt::load_ns(&ns)?)),
    })
}

fn run_construct(c: ConstructCmd, out: Output) -> trilie::Result<Output> {
    match c {
        ConstructCmd::Semidirect { context, emit } => {
            let ctx = fmt::load_context(&context)?.verify_all()?;
            let s = twisted_semidirect(&ctx)?;
            out.report(check_fundamental_identity(&s)).emit(&emit, fmt::algebra_to_json(&s))
        }
        ConstructCmd::DeformN { endo, emit } => {
            let op = nsnr::nijenhuis_trbo(&load_nijenhuis(&endo)?)?;
            let gn = op.context().algebra();
            out.report(check_fundamental_identity(gn))
                .report(check_representation(op.context().rep()))
                .report(check_2cocycle(op.context().rep(), op.context().phi())?)
                .report(trbo::check_twisted_rbo(&op)?)
                .emit(&emit, fmt::operator_to_json(&op))
        }
        ConstructCmd::ReynoldsBracket { endo, emit } => {
            let op = load_reynolds(&endo)?;
            let b = nsnr::reynolds_bracket(&op)?;
            out.report(nsnr::check_reynolds_bracket(&op)?).emit(&emit, fmt::algebra_to_json(&b))
        }
        ConstructCmd::NsFromTrbo { operator, emit } => {
            let op = fmt::load_operator(&operator)?.verify_all()?;
            let ns = nsnr::ns_from_trbo(&op)?;
            out.report(nsnr::check_ns_axioms(&ns)).emit(&emit, fmt::ns_to_json(&ns))
        }
        ConstructCmd::NsFromNijenhuis { endo, emit } => {
            let ns = nsnr::ns_from_nijenhuis(&load_nijenhuis(&endo)?)?;
            out.report(nsnr::check_ns_axioms(&ns)).emit(&emit, fmt::ns_to_json(&ns))
        }
        ConstructCmd::NsFromReynolds { endo, emit } => {
            let ns = nsnr::ns_from_reynolds(&load_reynolds(&endo)?)?;
            out.report(nsnr::check_ns_axioms(&ns)).emit(&emit, fmt::ns_to_json(&ns))
        }
        ConstructCmd::TrboFromReynolds { endo, emit } => {
            let op = nsnr::trbo_from_reynolds(&load_reynolds(&endo)?)?;
            out.report(trbo::check_twisted_rbo(&op)?).emit(&emit, fmt::operator_to_json(&op))
        }
    }
}

fn deformation_reports(out: Output, op: &TwistedRbo, frak: &trilie::Matrix, label: &str) -> trilie::Result<Output> {
    let r = trbo::check_deformation(op, frak)?;
    let mut out = out;
    for rep in r.reports() {
        let mut rep = rep.clone();
        rep.subject = format!("{label}: {}", rep.subject);
        out = out.report(rep);
    }
    Ok(out)
}

fn run_trbo(c: TrboCmd, out: Output) -> trilie::Result<Output> {
    match c {
        TrboCmd::Check { operator } => {
            let op = fmt::load_operator(&operator)?;
            let op = TwistedRbo::new(op.context().clone().verify_all()?, op.matrix().clone())?;
            Ok(out.report(trbo::check_twisted_rbo(&op)?).report(trbo::graph_closure_check(&op)?))
        }
        TrboCmd::Induce { operator, emit } => {
            let op = fmt::load_operator(&operator)?.verify_all()?;
            let induced = trbo::induced_bracket(&op)?;
            let varrho = trbo::induced_rep_varrho(&op)?;
            out.report(check_fundamental_identity(&induced))
                .report(check_homomorphism(&induced, op.context().algebra(), op.matrix())?)
                .report(check_representation(&varrho))
                .with("varrho", fmt::rep_to_json(&varrho))
                .emit(&emit, fmt::algebra_to_json(&induced))
        }
        TrboCmd::Cohomology { operator, nmax } => {
            let op = fmt::load_operator(&operator)?.verify_all()?;
            Ok(out.with("rows", rows_json(&trbo::trbo_cohomology_dims(&op, nmax)?)))
        }
        TrboCmd::Gauge { file, emit } => {
            let (op, f) = fmt::load_gauge(&file)?;
            let gauged = trbo::t_admissible_gauge(&op.verify_all()?, &f)?;
            out.report(trbo::check_twisted_rbo(&gauged)?).emit(&emit, fmt::operator_to_json(&gauged))
        }
        TrboCmd::Deform(DeformCmd::Check { file }) => {
            let d = fmt::load_deformation(&file)?;
            let op = d.operator.verify_all()?;
            let out = deformation_reports(out, &op, &d.frak_t, "frak_T")?;
            match &d.frak_t2 {
                Some(f2) => deformation_reports(out, &op, f2, "frak_T2"),
                None => Ok(out),
            }
        }
        TrboCmd::Deform(DeformCmd::Equiv { file }) => {
            let d = fmt::load_deformation(&file)?;
            let missing = |what: &str| Error::Format {
                location: file.display().to_string(),
                message: format!("equivalence needs \"{what}\""),
            };
            let f2 = d.frak_t2.as_ref().ok_or_else(|| missing("frak_T2"))?;
            let (x, y) = d.x.as_ref().ok_or_else(|| missing("X"))?;
            let op = d.operator.verify_all()?;
            let out = deformation_reports(out, &op, &d.frak_t, "frak_T")?;
            let out = deformation_reports(out, &op, f2, "frak_T2")?;
            if !out.passed() {
                return Ok(out);
            }
            Ok(out.report(trbo::check_deformation_equivalence(&op, &d.frak_t, f2, x, y)?))
        }
    }
}

fn parse_range(s: &str) -> trilie::Result<(i64, i64)> {
    let bad = || Error::Format {
        location: "--range".into(),
        message: format!("expected \"a..b\" with a <= b, found {s:?}"),
    };
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let (a, b): (i64, i64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

/// Generators for a range: exponents for Laurent, the square grid for ω∞.
trait RangeGenerators: GradedFamily {
    fn generators(&self, lo: i64, hi: i64) -> Vec<Self::Index>;
    fn index_json(&self, i: Self::Index) -> Value;
}

impl RangeGenerators for Laurent {
    fn generators(&self, lo: i64, hi: i64) -> Vec<i64> {
        (lo..=hi).collect()
    }

    fn index_json(&self, i: i64) -> Value {
        json!(i)
    }
}

impl RangeGenerators for Omega {
    fn generators(&self, lo: i64, hi: i64) -> Vec<OmegaIndex> {
        (lo..=hi).flat_map(|m| (lo..=hi).map(move |a| OmegaIndex::new(m, a))).collect()
    }

    fn index_json(&self, i: OmegaIndex) -> Value {
        json!({"m": i.m, "a": i.a})
    }
}

fn run_family<F: RangeGenerators>(
    family: &F,
    action: FamilyCmd,
    out: Output,
    window: impl Fn(i64, i64, Option<(i64, i64)>) -> trilie::Result<Window<F::Index>>,
) -> trilie::Result<Output> {
    match action {
        FamilyCmd::Reynolds { range, samples, seed } => {
            let (lo, hi) = parse_range(&range)?;
            let mut triples = default_samples(family, &family.generators(lo, hi));
            let total = triples.len();
            if let Some(n) = samples {
                triples = families::subsample(&triples, n, seed);
            }
            let sample_json: Vec<Value> = triples
                .iter()
                .map(|t| Value::Array(t.iter().map(|&i| family.index_json(i)).collect()))
                .collect();
            let report = check_reynolds_sampled(family, &triples)?;
            Ok(out
                .report(report)
                .with("valid_triples", json!(total))
                .with("samples", Value::Array(sample_json)))
        }
        FamilyCmd::Window { lo, hi, a_lo, a_hi, emit } => {
            if lo > hi {
                return Err(Error::Format {
                    location: "--lo/--hi".into(),
                    message: format!("empty window {lo}..{hi}"),
                });
            }
            let a_bounds = match (a_lo, a_hi) {
                (None, None) => None,
                (l, h) => Some((l.unwrap_or(lo), h.unwrap_or(hi))),
            };
            let w = window(lo, hi, a_bounds)?;
            let p = materialize_window(family, &w);
            let out = window_reports(family, &p, out)?;
            out.emit(&emit, fmt::algebra_to_json(p.algebra()))
        }
    }
}

fn window_reports<F: RangeGenerators>(family: &F, p: &PartialAlgebra<F::Index>, out: Output) -> trilie::Result<Output> {
    let gens = p.window().indices();
    let generators: Vec<Value> = gens.iter().map(|&g| family.index_json(g)).collect();
    let escaping: Vec<Value> = p
        .escaping()
        .iter()
        .map(|&(i, j, k)| json!([i + 1, j + 1, k + 1]))
        .collect();
    let all: Vec<usize> = (0..p.dim()).collect();
    let mut out = out
        .report(p.check_fi_restricted(&all))
        .with("generators", Value::Array(generators))
        .with("escaping", Value::Array(escaping));
    match p.reynolds_matrix(family) {
        Ok(_) => {
            out = out
                .report(p.check_reynolds_restricted(family)?)
                .report(p.compare_reynolds_bracket_with_induced(family)?);
        }
        Err(e) => out = out.with("reynolds", json!(e.to_string())),
    }
    Ok(out)
}
