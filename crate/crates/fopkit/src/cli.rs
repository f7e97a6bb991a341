//! The `fopkit` command line.
//!
//! Exit codes: 0 verified or true, 1 counterexample or false, 2 usage or
//! parse error, 3 budget exceeded.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use fopkit_core::eval::{eval_fo, eval_so, is_consistent, Assignment};
use fopkit_core::fop::{validate_fop, Fop, DEFAULT_EXCLUSIVITY_BOUND};
use fopkit_core::formula::Formula;
use fopkit_core::harness::{check_superfluous_wrt_fop, directed_harness, longest_path_harness, HarnessReport};
use fopkit_core::problems::reductions::{autoreduction, AUTOREDUCIBLE};
use fopkit_core::problems::{catalog, problem, DecisionProblem, Monotonicity, Problem, DIRECTED_PAIRS};
use fopkit_core::structure::{enumerate_structures, Limits, StructureSpace};
use fopkit_core::uniformity::{
    check_conjunction, Conjunction, Inconclusive, Mode, Options, Outcome, UniformityQuery, UniformityReport, Verdict,
};
use fopkit_core::vocab::Vocabulary;
use fopkit_core::{Error, DEFAULT_BUDGET};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::io::{self, print_fop, print_structure, ParseError, Registry};
use crate::parallel;
use crate::report::{self, Format, Record};

#[derive(Debug, Parser)]
#[command(
    name = "fopkit",
    version,
    about = "Finite structures, first-order projections and uniformity checks"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Largest structure size for bounded checks.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u32).range(2..))]
    pub size_bound: u32,
    /// Largest number of structures or relation tables one search may visit.
    #[arg(long, global = true, env = "FOPKIT_BUDGET")]
    pub budget: Option<u64>,
    /// Uniformity strategy: search completions or run the witness builder.
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Exhaustive)]
    pub mode: ModeArg,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=256))]
    pub workers: u64,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Report layout.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    pub format: FormatArg,
    /// Extra vocabulary declarations (`.fovoc`).
    #[arg(long = "vocab-file", global = true)]
    pub vocab_files: Vec<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Constructive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Tsv,
}

#[derive(Debug, Args)]
pub struct Evaluation {
    #[arg(long)]
    pub structure: PathBuf,
    #[arg(long)]
    pub formula: PathBuf,
    /// Values of free variables, `x=1,y=2`.
    #[arg(long, value_delimiter = ',', value_parser = parse_binding)]
    pub assign: Vec<(String, u32)>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluates a first-order formula in a structure.
    Eval(Evaluation),
    /// Evaluates a formula with a second-order quantifier prefix.
    EvalSo(Evaluation),
    /// Prints the image of a structure under a fop.
    ApplyFop {
        #[arg(long)]
        fop: PathBuf,
        #[arg(long)]
        structure: PathBuf,
    },
    /// Checks the projective shape and guard exclusivity of a fop.
    ValidateFop {
        #[arg(long)]
        fop: PathBuf,
        #[arg(long, default_value_t = DEFAULT_EXCLUSIVITY_BOUND)]
        exclusivity_bound: u32,
    },
    /// Checks pulled-back literals against images up to the size bound.
    PullbackCheck {
        #[arg(long)]
        fop: PathBuf,
        #[arg(long, default_value_t = DEFAULT_EXCLUSIVITY_BOUND)]
        exclusivity_bound: u32,
    },
    /// Searches for a size-m structure satisfying a formula.
    Consistency {
        #[arg(long)]
        formula: PathBuf,
        /// Vocabulary name; defaults to the problem's.
        #[arg(long, required_unless_present = "problem")]
        vocab: Option<String>,
        /// Restrict the search to structures in this problem.
        #[arg(long)]
        problem: Option<String>,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        m: u32,
        #[arg(long, value_delimiter = ',', value_parser = parse_binding)]
        assign: Vec<(String, u32)>,
    },
    /// Checks (n,k)-uniformity of a catalog problem at the given sizes.
    Uniformity {
        #[arg(long)]
        problem: String,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        n: u32,
        #[arg(long)]
        k: usize,
        /// Sizes: `3,4`, `7..8` (inclusive) or a mix.
        #[arg(long, value_parser = parse_sizes)]
        m: Sizes,
        /// Check a single conjunction instead of all of them.
        #[arg(long)]
        probe: Option<PathBuf>,
        /// Search every completion even for monotone problems.
        #[arg(long)]
        no_shortcut: bool,
    },
    /// Prints the padding autoreduction of a problem.
    Autoreduce {
        #[arg(long)]
        problem: String,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        n: u32,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Checks that every image of a fop satisfies a universal sentence.
    Superfluous {
        #[arg(long)]
        psi: PathBuf,
        #[arg(long)]
        fop: PathBuf,
    },
    /// Compares deciders on restricted domains.
    #[command(subcommand)]
    Harness(HarnessCommand),
    /// Lists the problem catalog.
    Catalog,
}

#[derive(Debug, Subcommand)]
pub enum HarnessCommand {
    /// Longest path against Hamiltonian path on unit-length instances.
    LongestPath,
    /// Directed against undirected deciders on symmetric graphs.
    Directed {
        /// A directed problem; all pairs when omitted.
        #[arg(long)]
        problem: Option<String>,
    },
    /// Deciders against logical definitions: every structure of size 2 and
    /// seeded samples of size 3.
    Definitions {
        #[arg(long)]
        problem: Option<String>,
        #[arg(long, default_value_t = 200)]
        samples: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sizes(pub Vec<u32>);

fn parse_sizes(s: &str) -> Result<Sizes, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        let bound = |x: &str| x.trim().parse::<u32>().map_err(|e| format!("bad size `{x}`: {e}"));
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (bound(a)?, bound(b.trim_start_matches('='))?);
                if a > b {
                    return Err(format!("empty range `{part}`"));
                }
                out.extend(a..=b);
            }
            None => out.push(bound(part)?),
        }
    }
    out.dedup();
    Ok(Sizes(out))
}

fn parse_binding(s: &str) -> Result<(String, u32), String> {
    let (v, e) = s
        .split_once('=')
        .ok_or_else(|| format!("expected `name=value`, found `{s}`"))?;
    let e = e.parse().map_err(|err| format!("bad value in `{s}`: {err}"))?;
    Ok((v.trim().to_string(), e))
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Parse(PathBuf, ParseError),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => f.write_str(m),
            Failure::Parse(p, e) => write!(f, "{}:{e}", p.display()),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Core(Error::BudgetExceeded { .. }) => 3,
            _ => 2,
        }
    }
}

type Outcome_ = Result<(Vec<Record>, i32), Failure>;

struct Context {
    registry: Registry,
    global: Global,
}

impl Context {
    fn read(&self, path: &Path) -> Result<String, Failure> {
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    }

    fn parsed<T>(&self, path: &Path, f: impl FnOnce(&str) -> io::Result<T>) -> Result<T, Failure> {
        let text = self.read(path)?;
        f(&text).map_err(|e| Failure::Parse(path.to_path_buf(), e))
    }

    fn budget(&self) -> u64 {
        self.global.budget.unwrap_or(DEFAULT_BUDGET)
    }

    fn workers(&self) -> usize {
        self.global.workers as usize
    }

    fn fop(&self, path: &Path, bound: u32) -> Result<Fop, Failure> {
        let q = self.parsed(path, |t| io::parse_fop_query(t, &self.registry))?;
        Ok(Fop::new(q, bound)?)
    }

    fn formula(&self, path: &Path, voc: &Vocabulary) -> Result<Formula, Failure> {
        self.parsed(path, |t| io::parse_formula(t, voc))
    }
}

fn problem_named(name: &str) -> Result<Problem, Failure> {
    problem(name).map_err(|_| {
        let names: Vec<String> = catalog().iter().map(|p| p.name().to_string()).collect();
        Failure::Usage(format!("unknown problem `{name}`; known: {}", names.join(", ")))
    })
}

fn truth(value: bool) -> i32 {
    if value {
        0
    } else {
        1
    }
}

/// Parses `argv` (program name first), runs the command and writes the
/// report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let format = match cli.global.format {
        FormatArg::Text => Format::Text,
        FormatArg::Tsv => Format::Tsv,
    };
    let mut ctx = Context {
        registry: Registry::default(),
        global: cli.global,
    };
    let result = load_vocabularies(&mut ctx).and_then(|_| dispatch(&ctx, cli.command, out));
    match result {
        Ok((records, code)) => {
            let _ = out.write_all(report::render(&records, format).as_bytes());
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.code()
        }
    }
}

fn load_vocabularies(ctx: &mut Context) -> Result<(), Failure> {
    for path in ctx.global.vocab_files.clone() {
        let text = ctx.read(&path)?;
        ctx.registry.load(&text).map_err(|e| Failure::Parse(path.clone(), e))?;
    }
    Ok(())
}

fn dispatch(ctx: &Context, command: Command, out: &mut dyn Write) -> Outcome_ {
    match command {
        Command::Eval(e) => evaluate(ctx, e, false),
        Command::EvalSo(e) => evaluate(ctx, e, true),
        Command::ApplyFop { fop, structure } => {
            let fop = ctx.fop(&fop, DEFAULT_EXCLUSIVITY_BOUND)?;
            let a = ctx.parsed(&structure, |t| io::parse_structure(t, &ctx.registry))?;
            let image = fop.apply(&a)?;
            let _ = writeln!(out, "{}", print_structure(&image));
            Ok((Vec::new(), 0))
        }
        Command::ValidateFop { fop, exclusivity_bound } => {
            let q = ctx.parsed(&fop, |t| io::parse_fop_query(t, &ctx.registry))?;
            let report = validate_fop(&q, exclusivity_bound);
            let head = Record::new(if report.is_valid() { "VALID" } else { "INVALID" })
                .field("fop", &q.name)
                .field("bound", exclusivity_bound);
            let mut records = vec![head];
            for (sym, why) in &report.shape_errors {
                records.push(Record::new("SHAPE").field("symbol", sym).field("reason", why));
            }
            for v in &report.violations {
                let pairs =
                    |xs: &[(String, u32)]| xs.iter().map(|(a, b)| format!("{a}:{b}")).collect::<Vec<_>>().join(",");
                records.push(
                    Record::new("OVERLAP")
                        .field("symbol", &v.symbol)
                        .field("guards", format!("{},{}", v.guards.0, v.guards.1))
                        .field("size", v.size)
                        .field("assignment", pairs(&v.assignment))
                        .field("constants", pairs(&v.constants)),
                );
            }
            Ok((records, truth(report.is_valid())))
        }
        Command::PullbackCheck { fop, exclusivity_bound } => {
            let fop = ctx.fop(&fop, exclusivity_bound)?;
            let size_bound = ctx.global.size_bound;
            let r = parallel::check_pullback(&fop, size_bound, ctx.budget(), ctx.workers())?;
            Ok((
                report::pullback_records(fop.name(), size_bound, &r),
                truth(r.mismatch.is_none()),
            ))
        }
        Command::Consistency {
            formula,
            vocab,
            problem,
            m,
            assign,
        } => {
            let p = problem.as_deref().map(problem_named).transpose()?;
            let voc = match (&vocab, &p) {
                (Some(v), _) => ctx
                    .registry
                    .get(v)
                    .ok_or_else(|| Failure::Usage(format!("unknown vocabulary `{v}`")))?,
                (None, Some(p)) => p.vocabulary().clone(),
                (None, None) => unreachable!("clap requires one of them"),
            };
            let f = ctx.formula(&formula, &voc)?;
            let asg: Assignment = assign.into_iter().collect();
            let within = p.as_ref().map(|p| p as &dyn DecisionProblem);
            Ok(match is_consistent(&voc, &f, &asg, m, within, ctx.budget())? {
                Some(s) => (
                    vec![Record::new("CONSISTENT")
                        .field("m", m)
                        .field("structure", print_structure(&s))],
                    0,
                ),
                None => (vec![Record::new("INCONSISTENT").field("m", m)], 1),
            })
        }
        Command::Uniformity {
            problem,
            n,
            k,
            m,
            probe,
            no_shortcut,
        } => uniformity(ctx, &problem, n, k, m.0, probe.as_deref(), no_shortcut),
        Command::Autoreduce { problem, n, output } => {
            if !AUTOREDUCIBLE.contains(&problem.as_str()) {
                return Err(Failure::Usage(format!(
                    "no autoreduction for `{problem}`; available: {}",
                    AUTOREDUCIBLE.join(", ")
                )));
            }
            let text = print_fop(&autoreduction(&problem, n)?);
            match output {
                Some(path) => fs::write(&path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
                None => {
                    let _ = out.write_all(text.as_bytes());
                }
            }
            Ok((Vec::new(), 0))
        }
        Command::Superfluous { psi, fop } => {
            let fop = ctx.fop(&fop, DEFAULT_EXCLUSIVITY_BOUND)?;
            let psi = ctx.formula(&psi, fop.target())?;
            let r = check_superfluous_wrt_fop(&psi, &fop, ctx.global.size_bound, ctx.budget())?;
            Ok((report::superfluity_records(&r, fop.name()), truth(r.is_superfluous())))
        }
        Command::Harness(h) => harness(ctx, h),
        Command::Catalog => {
            let records = catalog()
                .iter()
                .map(|p| {
                    let mono = match p.monotonicity() {
                        Monotonicity::Increasing => "increasing",
                        Monotonicity::Decreasing => "decreasing",
                        Monotonicity::None => "none",
                    };
                    Record::new("PROBLEM")
                        .field("name", p.name())
                        .field("vocab", p.vocabulary().name())
                        .field("class", p.class())
                        .field("monotone", mono)
                        .field("definition", if p.definition().is_some() { "yes" } else { "no" })
                        .field(
                            "autoreducible",
                            if AUTOREDUCIBLE.contains(&p.name()) { "yes" } else { "no" },
                        )
                })
                .collect();
            Ok((records, 0))
        }
    }
}

fn evaluate(ctx: &Context, e: Evaluation, second_order: bool) -> Outcome_ {
    let a = ctx.parsed(&e.structure, |t| io::parse_structure(t, &ctx.registry))?;
    let f = ctx.formula(&e.formula, a.vocabulary())?;
    let asg: Assignment = e.assign.into_iter().collect();
    let value = if second_order {
        eval_so(&a, &f, &asg, ctx.budget())?
    } else {
        eval_fo(&a, &f, &asg)?
    };
    Ok((vec![Record::new("RESULT").word(value)], truth(value)))
}

fn uniformity(
    ctx: &Context,
    name: &str,
    n: u32,
    k: usize,
    sizes: Vec<u32>,
    probe: Option<&Path>,
    no_shortcut: bool,
) -> Outcome_ {
    let p = problem_named(name)?;
    let (mode, mode_name) = match ctx.global.mode {
        ModeArg::Exhaustive => (Mode::Exhaustive, "exhaustive"),
        ModeArg::Constructive => (Mode::Constructive, "constructive"),
    };
    let q = UniformityQuery {
        n,
        k,
        m_range: sizes,
        options: Options {
            mode,
            monotone_shortcut: !no_shortcut,
            budget: ctx.budget(),
        },
    };
    q.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let (report, probe_text) = match probe {
        None => (parallel::check_uniformity(&p, &q, ctx.workers())?, None),
        Some(path) => {
            let f = ctx.formula(path, p.vocabulary())?;
            let mut verdicts = Vec::new();
            for &m in &q.m_range {
                let c = Conjunction::from_formula(p.vocabulary().clone(), &f, m)?;
                if c.items().len() > k {
                    return Err(Failure::Usage(format!(
                        "the probe has {} items, more than k = {k}",
                        c.items().len()
                    )));
                }
                let v = match check_conjunction(&p, &c, &q.options)? {
                    Outcome::Contradictory => Verdict::Uniform { conjunctions: 0 },
                    Outcome::Witnessed(_) => Verdict::Uniform { conjunctions: 1 },
                    Outcome::Refuted(cx) => Verdict::Counterexample(Box::new(cx)),
                    Outcome::Inconclusive(c, why) => Verdict::Inconclusive(c, why),
                };
                verdicts.push((m, v));
            }
            let report = UniformityReport {
                problem: p.name().to_string(),
                n,
                k,
                verdicts,
            };
            (report, Some(f.to_string()))
        }
    };
    let code = uniformity_code(&report);
    Ok((
        report::uniformity_records(&report, mode_name, probe_text.as_deref()),
        code,
    ))
}

fn uniformity_code(r: &UniformityReport) -> i32 {
    let verdicts = || r.verdicts.iter().map(|(_, v)| v);
    if verdicts().any(|v| matches!(v, Verdict::Counterexample(_))) {
        1
    } else if verdicts().any(|v| matches!(v, Verdict::Inconclusive(_, Inconclusive::Budget { .. }))) {
        3
    } else if verdicts().any(|v| matches!(v, Verdict::Inconclusive(..))) {
        1
    } else {
        0
    }
}

fn harness(ctx: &Context, h: HarnessCommand) -> Outcome_ {
    let bound = ctx.global.size_bound;
    let mut records = Vec::new();
    let mut passed = true;
    let mut add = |name: &str, r: HarnessReport| {
        passed &= r.passed();
        records.extend(report::harness_records(name, bound, &r));
    };
    match h {
        HarnessCommand::LongestPath => add("longest-path", longest_path_harness(bound, ctx.budget())?),
        HarnessCommand::Directed { problem } => {
            let pairs: Vec<_> = DIRECTED_PAIRS
                .iter()
                .filter(|(d, _)| problem.as_deref().is_none_or(|p| p == *d))
                .collect();
            if pairs.is_empty() {
                let names: Vec<&str> = DIRECTED_PAIRS.iter().map(|(d, _)| *d).collect();
                return Err(Failure::Usage(format!(
                    "no undirected version known; available: {}",
                    names.join(", ")
                )));
            }
            for (d, u) in pairs {
                let r = directed_harness(&problem_named(d)?, &problem_named(u)?, bound)?;
                add(&format!("directed:{d}"), r);
            }
        }
        HarnessCommand::Definitions { problem, samples } => {
            let problems: Vec<Problem> = match problem {
                Some(name) => vec![problem_named(&name)?],
                None => catalog().into_iter().filter(|p| p.definition().is_some()).collect(),
            };
            for p in problems {
                let r = definitions_harness(&p, samples, ctx.global.seed, ctx.global.budget)?;
                add(&format!("definitions:{}", p.name()), r);
            }
        }
    }
    Ok((records, truth(passed)))
}

/// Decider against definition on every structure of size 2 and on `samples`
/// structures of size 3 drawn with the seed.
pub fn definitions_harness(p: &Problem, samples: u64, seed: u64, budget: Option<u64>) -> Result<HarnessReport, Error> {
    let def = p
        .definition()
        .ok_or_else(|| Error::InvalidQuery(format!("`{}` has no logical definition", p.name())))?;
    let mut report = HarnessReport::default();
    let mut check = |a: &fopkit_core::Structure| -> Result<(), Error> {
        let b = budget.unwrap_or_else(|| p.definition_budget(a.size()));
        report.checked += 1;
        if p.accepts(a)? != eval_so(a, &def, &Assignment::new(), b)? {
            report.disagreements.push(a.clone());
        }
        Ok(())
    };
    for a in enumerate_structures(p.vocabulary().clone(), 2, Limits::default())? {
        check(&a)?;
    }
    let space = StructureSpace::full(p.vocabulary().clone(), 3)?;
    let count = space.count_within(u64::MAX)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        check(&space.nth(rng.gen_range(0..count)))?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_lists() {
        assert_eq!(parse_sizes("3,4").unwrap(), Sizes(vec![3, 4]));
        assert_eq!(parse_sizes("7..8").unwrap(), Sizes(vec![7, 8]));
        assert_eq!(parse_sizes("2,4..=5").unwrap(), Sizes(vec![2, 4, 5]));
        assert!(parse_sizes("5..4").is_err());
        assert!(parse_sizes("x").is_err());
    }

    #[test]
    fn bindings() {
        assert_eq!(parse_binding("x=3").unwrap(), ("x".to_string(), 3));
        assert!(parse_binding("x").is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(
            run(["fopkit", "uniformity", "--problem", "reach"], &mut out, &mut err),
            2
        );
        assert_eq!(run(["fopkit", "--help"], &mut out, &mut err), 0);
        let mut err = Vec::new();
        assert_eq!(
            run(
                [
                    "fopkit",
                    "uniformity",
                    "--problem",
                    "sat",
                    "--n",
                    "3",
                    "--k",
                    "1",
                    "--m",
                    "3"
                ],
                &mut out,
                &mut err
            ),
            2
        );
        assert!(String::from_utf8(err).unwrap().contains("unknown problem"));
    }
}
