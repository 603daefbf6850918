use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use counterpoint::continuum::{self, CirclePoint, Rational};
use counterpoint::dichotomy::{Dichotomy, PolarityReport};
use counterpoint::extension::{extended_symmetries, preservation_check, Embedding, LinkageMode, PreservationReport};
use counterpoint::oracle::{compare, oracle_symmetries, OracleComparison};
use counterpoint::report::{self, ExpectedTable, ExtensionMode};
use counterpoint::symmetry::{symmetries_at, CountingKernel, SuccessorSet};
use counterpoint::zmod::Modulus;
use counterpoint::Error;

const THREADS_ENV: &str = "COUNTERPOINT_THREADS";

#[derive(Parser)]
#[command(
    name = "counterpoint",
    version,
    about = "Counterpoint symmetries of strong dichotomies"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Quasipolarities and strongness of a dichotomy.
    Analyze(DichotomyArgs),
    /// Counterpoint symmetries and admitted successors of consonant intervals.
    Symmetries {
        #[command(flatten)]
        dichotomy: DichotomyArgs,
        #[command(flatten)]
        intervals: IntervalArgs,
        /// Cantus firmus of the interval.
        #[arg(long, default_value_t = 0)]
        cantus: u32,
        /// List the admitted successors.
        #[arg(long)]
        successors: bool,
    },
    /// Extended symmetries along an embedding `Z_n → Z_an`.
    Extend {
        #[command(flatten)]
        dichotomy: DichotomyArgs,
        /// Consonant interval in the source.
        #[arg(short)]
        k: u32,
        /// Scale factor `a`.
        #[arg(short = 'a', long, default_value_t = 2)]
        factor: u32,
        /// Target dichotomy in `Z_an` (list or preset).
        #[arg(short = 'T', long)]
        target: String,
        #[arg(long, default_value_t = LinkageMode::Interval)]
        linkage: LinkageMode,
    },
    /// Reproduce the `U0` table up to `Z_512`.
    Table1(Table1Args),
    /// Measure-maximizing counterpoint on the circle.
    Continuum(ContinuumArgs),
    /// Full-group brute force against the parametric search (n ≤ 16).
    Oracle {
        #[command(flatten)]
        dichotomy: DichotomyArgs,
        #[command(flatten)]
        intervals: IntervalArgs,
    },
}

#[derive(Args)]
struct DichotomyArgs {
    /// Modulus `n`.
    #[arg(short = 'n')]
    modulus: u32,
    /// Consonances: `0,2,3` or a preset (`X6`, `X12`, `U0`..`U8`).
    #[arg(short = 'S')]
    set: String,
}

impl DichotomyArgs {
    fn load(&self) -> Result<Dichotomy, Error> {
        Dichotomy::parse(Modulus::new(self.modulus)?, &self.set)
    }
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct IntervalArgs {
    /// A consonant interval.
    #[arg(short)]
    k: Option<u32>,
    /// Every consonant interval.
    #[arg(long)]
    all_k: bool,
}

impl IntervalArgs {
    fn resolve(&self, d: &Dichotomy) -> Vec<u32> {
        match self.k {
            Some(k) => vec![k],
            None => d.members().to_vec(),
        }
    }
}

#[derive(Args)]
struct Table1Args {
    #[arg(long, default_value_t = ExtensionMode::Chained)]
    mode: ExtensionMode,
    /// Also run the other extension mode and compare.
    #[arg(long)]
    compare: bool,
    #[arg(long, default_value_t = LinkageMode::Interval)]
    linkage: LinkageMode,
    /// Number of doubling steps (default from the expected-values file).
    #[arg(long)]
    depth: Option<usize>,
    /// Expected-values JSON file (default: bundled reference).
    #[arg(long)]
    expected: Option<PathBuf>,
    /// Exit 2 when any cell differs from the expected values.
    #[arg(long)]
    strict: bool,
    /// With --strict, ignore cells of rows marked disputed.
    #[arg(long, requires = "strict")]
    allow_disputed: bool,
}

#[derive(Args)]
#[group(id = "point", required = true, multiple = false)]
struct PointArgs {
    /// Consonance as a fraction of the octave, e.g. `3/8`.
    #[arg(short)]
    k: Option<String>,
    /// Consonance in semitones, on the quarter-tone grid.
    #[arg(long, allow_hyphen_values = true)]
    semitones: Option<String>,
    /// Check the qualitative features over the grid `j/den`, `0 ≤ j < den/2`.
    #[arg(long)]
    verify_claims: bool,
}

#[derive(Args)]
struct ContinuumArgs {
    #[command(flatten)]
    point: PointArgs,
    /// Grid denominator for --verify-claims.
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(i64).range(2..=100_000))]
    grid: i64,
}

#[derive(Debug)]
enum Failure {
    Input(Error),
    Io(io::Error),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.into())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let mut out = io::stdout().lock();
    match run(&cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Mismatch(msg)) => {
            let _ = out.flush();
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli, out: &mut impl Write) -> Outcome {
    match &cli.command {
        Command::Analyze(args) => analyze(args, cli.format, out),
        Command::Symmetries {
            dichotomy,
            intervals,
            cantus,
            successors,
        } => symmetries(dichotomy, intervals, *cantus, *successors, cli.format, out),
        Command::Extend {
            dichotomy,
            k,
            factor,
            target,
            linkage,
        } => extend(dichotomy, *k, *factor, target, *linkage, cli.format, out),
        Command::Table1(args) => table1(args, cli.format, out),
        Command::Continuum(args) => continuum_cmd(args, cli.format, out),
        Command::Oracle { dichotomy, intervals } => oracle(dichotomy, intervals, cli.format, out),
    }
}

fn write_json<T: Serialize + ?Sized>(value: &T, out: &mut impl Write) -> Outcome {
    serde_json::to_writer_pretty(&mut *out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn write_csv(header: &[&str], rows: Vec<Vec<String>>, out: &mut impl Write) -> Outcome {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

fn joined<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct AnalyzeOutput<'a> {
    modulus: u32,
    #[serde(serialize_with = "report::ser_display")]
    dichotomy: &'a Dichotomy,
    #[serde(flatten)]
    report: PolarityReport,
}

fn analyze(args: &DichotomyArgs, format: Format, out: &mut impl Write) -> Outcome {
    let d = args.load()?;
    let report = d.find_quasipolarities();
    match format {
        Format::Json => write_json(
            &AnalyzeOutput {
                modulus: d.modulus().get(),
                dichotomy: &d,
                report,
            },
            out,
        ),
        Format::Csv => write_csv(
            &["modulus", "dichotomy", "quasipolarities", "strong", "polarity"],
            vec![vec![
                d.modulus().get().to_string(),
                d.to_string(),
                joined(&report.quasipolarities),
                report.strong.to_string(),
                report.polarity.map(|p| p.to_string()).unwrap_or_default(),
            ]],
            out,
        ),
        Format::Table => {
            writeln!(out, "dichotomy {{{d}}} in {}", d.modulus())?;
            writeln!(
                out,
                "quasipolarities ({}): {}",
                report.quasipolarities.len(),
                joined(&report.quasipolarities)
            )?;
            match report.polarity {
                Some(p) => writeln!(out, "strong, polarity {p}")?,
                None => writeln!(out, "not strong")?,
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct SymmetriesOutput {
    modulus: u32,
    cantus: u32,
    interval: u32,
    #[serde(serialize_with = "report::ser_display_vec")]
    symmetries: Vec<counterpoint::CounterpointSymmetry>,
    cardinality: u64,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt_vec")]
    successors: Option<Vec<counterpoint::DualNumber>>,
}

fn ser_opt_vec<S: serde::Serializer>(v: &Option<Vec<counterpoint::DualNumber>>, s: S) -> Result<S::Ok, S::Error> {
    report::ser_display_vec(v.as_deref().unwrap_or(&[]), s)
}

fn symmetries(
    args: &DichotomyArgs,
    intervals: &IntervalArgs,
    cantus: u32,
    with_successors: bool,
    format: Format,
    out: &mut impl Write,
) -> Outcome {
    let d = args.load()?;
    if cantus >= d.modulus().get() {
        return Err(Error::Parse(format!("cantus {cantus} is not a residue mod {}", d.modulus())).into());
    }
    let kernel = CountingKernel::new(&d);
    let sets: Vec<SuccessorSet> = intervals
        .resolve(&d)
        .into_iter()
        .map(|k| symmetries_at(&kernel, cantus, k))
        .collect::<Result<_, _>>()?;
    let outputs: Vec<SymmetriesOutput> = sets
        .into_iter()
        .map(|s| SymmetriesOutput {
            modulus: d.modulus().get(),
            cantus,
            interval: s.interval,
            successors: with_successors.then(|| s.successors.clone()),
            cardinality: s.cardinality,
            symmetries: s.symmetries,
        })
        .collect();
    match format {
        Format::Json => write_json(&outputs, out),
        Format::Csv => {
            let mut header = vec!["modulus", "cantus", "interval", "symmetries", "cardinality"];
            if with_successors {
                header.push("successors");
            }
            let rows = outputs
                .iter()
                .map(|o| {
                    let mut r = vec![
                        o.modulus.to_string(),
                        o.cantus.to_string(),
                        o.interval.to_string(),
                        joined(&o.symmetries),
                        o.cardinality.to_string(),
                    ];
                    if let Some(s) = &o.successors {
                        r.push(joined(s));
                    }
                    r
                })
                .collect();
            write_csv(&header, rows, out)
        }
        Format::Table => {
            for o in &outputs {
                writeln!(
                    out,
                    "{}+e.{}: {}  |succ| = {}",
                    o.cantus,
                    o.interval,
                    joined(&o.symmetries),
                    o.cardinality
                )?;
                if let Some(s) = &o.successors {
                    writeln!(out, "  successors: {}", joined(s))?;
                }
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct ExtendOutput {
    factor: u32,
    source_modulus: u32,
    target_modulus: u32,
    linkage: LinkageMode,
    interval: u32,
    target_interval: u32,
    #[serde(serialize_with = "report::ser_display_vec")]
    parents: Vec<counterpoint::CounterpointSymmetry>,
    candidates: usize,
    #[serde(serialize_with = "report::ser_display_vec")]
    symmetries: Vec<counterpoint::CounterpointSymmetry>,
    cardinality: u64,
    preservation: PreservationReport,
}

fn extend(
    args: &DichotomyArgs,
    k: u32,
    factor: u32,
    target: &str,
    linkage: LinkageMode,
    format: Format,
    out: &mut impl Write,
) -> Outcome {
    let source = args.load()?;
    let big = factor
        .checked_mul(source.modulus().get())
        .ok_or(Error::InvalidModulus(u32::MAX))?;
    let target = Dichotomy::parse(Modulus::new(big)?, target)?;
    let parents = counterpoint::counterpoint_symmetries(&source, k)?;
    let embedding = Embedding::new(factor, source, target)?;
    let step = extended_symmetries(&parents.symmetries, &embedding, k, linkage)?;
    let o = ExtendOutput {
        factor,
        source_modulus: step.source_modulus.get(),
        target_modulus: step.target_modulus.get(),
        linkage,
        interval: k,
        target_interval: step.extended.interval,
        candidates: step.candidates,
        cardinality: step.extended.cardinality,
        preservation: preservation_check(&step),
        parents: step.parents,
        symmetries: step.extended.symmetries,
    };
    match format {
        Format::Json => write_json(&o, out),
        Format::Csv => write_csv(
            &[
                "factor",
                "interval",
                "target_interval",
                "parents",
                "symmetries",
                "cardinality",
                "preserved",
            ],
            vec![vec![
                o.factor.to_string(),
                o.interval.to_string(),
                o.target_interval.to_string(),
                joined(&o.parents),
                joined(&o.symmetries),
                o.cardinality.to_string(),
                o.preservation.holds.to_string(),
            ]],
            out,
        ),
        Format::Table => {
            writeln!(
                out,
                "Z_{} -> Z_{} by {}, {} linkage",
                o.source_modulus, o.target_modulus, o.factor, o.linkage
            )?;
            writeln!(out, "parents of 0+e.{}: {}", o.interval, joined(&o.parents))?;
            writeln!(
                out,
                "extended at 0+e.{}: {}  |succ| = {}  ({} candidates)",
                o.target_interval,
                joined(&o.symmetries),
                o.cardinality,
                o.candidates
            )?;
            writeln!(
                out,
                "successors preserved: {}",
                if o.preservation.holds { "yes" } else { "NO" }
            )?;
            Ok(())
        }
    }
}

fn table1(args: &Table1Args, format: Format, out: &mut impl Write) -> Outcome {
    let mut expected = match &args.expected {
        Some(path) => ExpectedTable::from_json(&fs::read_to_string(path)?)?,
        None => ExpectedTable::reference(),
    };
    if let Some(depth) = args.depth {
        expected.depth = depth;
    }
    let report = report::table1(&expected, args.mode, args.linkage, args.compare)?;
    match format {
        Format::Json => write_json(&report, out)?,
        Format::Csv => {
            let rows = report
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.interval.to_string(),
                        joined(&r.level0.symmetries),
                        r.level0.cardinality.to_string(),
                        joined(&r.extended.symmetries),
                        r.extended.cardinality.to_string(),
                        r.translation_invariant.to_string(),
                    ]
                })
                .collect();
            write_csv(
                &[
                    "interval",
                    "symmetries",
                    "cardinality",
                    "extended",
                    "extended_cardinality",
                    "translation_invariant",
                ],
                rows,
                out,
            )?
        }
        Format::Table => write!(out, "{}", report::render_table1(&report))?,
    }
    if args.strict {
        let counted = if args.allow_disputed {
            report.undisputed_discrepancies().count()
        } else {
            report.discrepancies.len()
        };
        if counted > 0 {
            return Err(Failure::Mismatch(format!(
                "{counted} cell(s) differ from expected values"
            )));
        }
    }
    if let Some(r) = report.rows.iter().find(|r| !r.translation_invariant) {
        return Err(Failure::Mismatch(format!(
            "interval {}: final translation not scaled from level 0",
            r.interval
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct PointOutput {
    k: CirclePoint,
    #[serde(serialize_with = "report::ser_display")]
    measure: RationalText,
    maximizers: Vec<continuum::CircleSymmetry>,
    h1_ranks: Vec<usize>,
    #[serde(serialize_with = "report::ser_display")]
    successors: continuum::ArcSet,
}

struct RationalText(Rational);

impl std::fmt::Display for RationalText {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

fn continuum_cmd(args: &ContinuumArgs, format: Format, out: &mut impl Write) -> Outcome {
    let point = &args.point;
    if point.verify_claims {
        let grid = continuum::grid(args.grid, (args.grid + 1) / 2);
        let claims = continuum::verify_claims(&grid)?;
        match format {
            Format::Json => write_json(&claims, out)?,
            Format::Csv => write_csv(
                &["claim", "holds", "failures"],
                claims
                    .iter()
                    .map(|c| vec![c.name.to_string(), c.holds.to_string(), joined(&c.failures)])
                    .collect(),
                out,
            )?,
            Format::Table => {
                for c in &claims {
                    write!(out, "{:<4} {}", if c.holds { "ok" } else { "FAIL" }, c.name)?;
                    if !c.holds {
                        write!(out, "  (fails at {})", joined(&c.failures))?;
                    }
                    writeln!(out)?;
                }
            }
        }
        let failed = claims.iter().filter(|c| !c.holds).count();
        if failed > 0 {
            return Err(Failure::Mismatch(format!("{failed} claim(s) fail on the grid")));
        }
        return Ok(());
    }
    let k = match (&point.k, &point.semitones) {
        (Some(k), _) => k.parse::<CirclePoint>()?,
        (_, Some(s)) => CirclePoint::from_semitones(continuum::parse_rational(s)?)?,
        _ => unreachable!("clap requires one of the point arguments"),
    };
    let m = continuum::maximizers(k)?;
    let o = PointOutput {
        k,
        measure: RationalText(m.measure),
        h1_ranks: m.symmetries.iter().map(continuum::h1_rank).collect(),
        successors: continuum::continuous_successors(k)?,
        maximizers: m.symmetries,
    };
    match format {
        Format::Json => write_json(&o, out),
        Format::Csv => write_csv(
            &["k", "measure", "maximizers", "h1_ranks", "successors"],
            vec![vec![
                o.k.to_string(),
                o.measure.to_string(),
                joined(&o.maximizers),
                joined(&o.h1_ranks),
                o.successors.to_string(),
            ]],
            out,
        ),
        Format::Table => {
            writeln!(out, "k = {}", o.k)?;
            writeln!(out, "maximizers: {}", joined(&o.maximizers))?;
            writeln!(out, "measure: {}", o.measure)?;
            writeln!(out, "successors: {}", o.successors)?;
            writeln!(out, "H1 ranks: {}", joined(&o.h1_ranks))?;
            Ok(())
        }
    }
}

fn oracle(args: &DichotomyArgs, intervals: &IntervalArgs, format: Format, out: &mut impl Write) -> Outcome {
    let d = args.load()?;
    let results: Vec<OracleComparison> = intervals
        .resolve(&d)
        .into_iter()
        .map(|k| {
            let o = oracle_symmetries(&d, k)?;
            let fam = counterpoint::counterpoint_symmetries(&d, k)?;
            Ok(compare(&o, &fam, &d))
        })
        .collect::<Result<_, Error>>()?;
    match format {
        Format::Json => write_json(&results, out)?,
        Format::Csv => write_csv(
            &[
                "interval",
                "family_maximum",
                "oracle_maximum",
                "oracle_maximizers",
                "outside_family",
                "matches",
            ],
            results
                .iter()
                .map(|c| {
                    vec![
                        c.interval.to_string(),
                        c.family_maximum.to_string(),
                        c.oracle_maximum.to_string(),
                        c.oracle_maximizers.to_string(),
                        c.outside_family.to_string(),
                        c.matches().to_string(),
                    ]
                })
                .collect(),
            out,
        )?,
        Format::Table => {
            for c in &results {
                writeln!(
                    out,
                    "k = {:>2}  family {:>4}  oracle {:>4}  maximizers {:>3} ({} with cantus translation)  {}",
                    c.interval,
                    c.family_maximum,
                    c.oracle_maximum,
                    c.oracle_maximizers,
                    c.outside_family,
                    if c.matches() { "match" } else { "MISMATCH" }
                )?;
            }
        }
    }
    let bad: Vec<u32> = results.iter().filter(|c| !c.matches()).map(|c| c.interval).collect();
    if !bad.is_empty() {
        return Err(Failure::Mismatch(format!("oracle disagrees at k = {bad:?}")));
    }
    Ok(())
}
