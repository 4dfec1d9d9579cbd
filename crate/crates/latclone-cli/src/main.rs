//! Command-line front end: load or pick a lattice, build the generator
//! system over a ground set, run the verification suites, and write
//! reports. Output files go through atomic writes; stdout carries the
//! primary document of each subcommand and all progress text goes to
//! stderr, so piping the JSON elsewhere stays clean.
//!
//! Exit codes: 0 success (a verify run with no FAIL verdicts, even if some
//! are INCONCLUSIVE), 1 verify found a FAIL, 2 the input fails validation,
//! 3 malformed JSON, 4 unreadable or unwritable files.

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use latclone_core::classify::spoilt_inventory;
use latclone_core::dot;
use latclone_core::embedding::{verify_embedding_with, DEFAULT_TERM_BUDGET};
use latclone_core::family::{check_noncovering, independent_family, singleton_family, DISTINGUISHED};
use latclone_core::fixtures;
use latclone_core::generators::GenError;
use latclone_core::io::{
    read_json, write_text_atomic, FamilyDoc, IoError, LatticeDoc, MediatorDoc, OpDoc, SystemDoc,
};
use latclone_core::report::{
    manifest_hash, ConstructionStats, RunManifest, DETERMINISM_NOTE, SCHEMA_VERSION,
};
use latclone_core::when4_suite;
use latclone_core::{
    run_lemma_suites_with, Bounds, FiniteLattice, GeneratorSystem, IndexFamily, Operation,
    RunReport, SuiteConfig, Verdict,
};

/// Ground sets larger than this are refused outright; tables grow with the
/// cube of the ground size and anything bigger is not desk scale.
const GROUND_CAP: usize = 250;

#[derive(Parser)]
#[command(
    name = "latclone",
    version,
    about = "Embed a finite lattice into the clone lattice over a finite set and verify it"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a lattice file (and family, if given) is well formed
    Validate(InputArgs),
    /// Construct the gadget operations and print or save them as JSON
    Build(BuildArgs),
    /// Run verification suites and emit a report with a manifest hash
    Verify(VerifyArgs),
    /// Export the lattice and its clone-fragment image as DOT graphs
    Export(ExportArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Lattice: a JSON file, or builtin:{one,chain2,chain3,b2,m3,n5}
    #[arg(long, value_name = "FILE|builtin:NAME")]
    lattice: String,
    /// Index family: singleton, independent, or a JSON file
    #[arg(long, default_value = "singleton", value_name = "STRATEGY|FILE")]
    family: String,
}

#[derive(Args)]
struct BoundsArgs {
    /// Composition depth explored by the closure enumeration
    #[arg(long, default_value_t = Bounds::default().depth)]
    depth: usize,
    /// Largest arity enumerated
    #[arg(long, default_value_t = Bounds::default().max_arity)]
    max_arity: usize,
    /// Cap on distinct operations kept per arity slice
    #[arg(long, default_value_t = Bounds::default().budget)]
    budget: usize,
}

impl BoundsArgs {
    fn bounds(&self) -> Bounds {
        Bounds {
            max_arity: self.max_arity,
            depth: self.depth,
            budget: self.budget,
            ..Bounds::default()
        }
    }
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Destination file; stdout when omitted
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    bounds: BoundsArgs,
    /// Which suites to run
    #[arg(long, value_enum, default_value_t = SuiteSel::All)]
    suite: SuiteSel,
    /// Destination for the JSON report; stdout when omitted
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Corrupt one generator table before verifying, e.g. phi:1 (test only)
    #[arg(long, value_name = "KIND:INDEX")]
    fault_inject: Option<String>,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    bounds: BoundsArgs,
    /// Directory receiving lattice.dot and image.dot; with no --out only
    /// the Hasse diagram is computed and printed to stdout
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Dot)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteSel {
    Lemmas,
    When4,
    Embedding,
    All,
}

impl SuiteSel {
    fn includes_lemmas(self) -> bool {
        matches!(self, SuiteSel::Lemmas | SuiteSel::All)
    }

    fn includes_when4(self) -> bool {
        matches!(self, SuiteSel::When4 | SuiteSel::All)
    }

    fn includes_embedding(self) -> bool {
        matches!(self, SuiteSel::Embedding | SuiteSel::All)
    }

    fn names(self) -> Vec<String> {
        let mut names = Vec::new();
        if self.includes_lemmas() {
            names.push("lemmas".to_string());
        }
        if self.includes_when4() {
            names.push("when4".to_string());
        }
        if self.includes_embedding() {
            names.push("embedding".to_string());
        }
        names
    }
}

/// Everything that stops a run, paired with the exit code it maps to.
#[derive(Debug)]
enum CliError {
    Io(IoError),
    Invalid(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(e) => e.fmt(f),
            CliError::Invalid(msg) => f.write_str(msg),
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::Io(e)
    }
}

impl From<GenError> for CliError {
    fn from(e: GenError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(IoError::Parse { .. }) => 3,
            CliError::Io(IoError::Io { .. }) => 4,
            _ => 2,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate(args) => cmd_validate(&args),
        Command::Build(args) => cmd_build(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Export(args) => cmd_export(&args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn load_lattice(spec: &str) -> Result<FiniteLattice, CliError> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return fixtures::by_name(name).ok_or_else(|| {
            CliError::Invalid(format!(
                "unknown builtin lattice {name:?}; the builtins are one, chain2, chain3, b2, m3, n5"
            ))
        });
    }
    let doc: LatticeDoc = read_json(Path::new(spec))?;
    Ok(doc.into_lattice()?)
}

fn load_family(spec: &str, lattice: &FiniteLattice) -> Result<IndexFamily, CliError> {
    let family = match spec {
        "singleton" => singleton_family(lattice.size()).map_err(IoError::from)?,
        "independent" => {
            independent_family(lattice.size(), GROUND_CAP).map_err(IoError::from)?
        }
        path => read_json::<FamilyDoc>(Path::new(path))?.into_family()?,
    };
    if family.len() != lattice.size() {
        return Err(CliError::Invalid(format!(
            "the family indexes {} sets but the lattice has {} elements",
            family.len(),
            lattice.size()
        )));
    }
    Ok(family)
}

fn load_system(input: &InputArgs) -> Result<GeneratorSystem, CliError> {
    let lattice = load_lattice(&input.lattice)?;
    let family = load_family(&input.family, &lattice)?;
    Ok(GeneratorSystem::build(lattice, family)?)
}

/// Short label for reports: the builtin name, or the file stem.
fn lattice_label(spec: &str) -> String {
    match spec.strip_prefix("builtin:") {
        Some(name) => name.to_string(),
        None => Path::new(spec)
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| spec.to_string()),
    }
}

fn require_format(actual: Format, required: Format, what: &str) -> Result<(), CliError> {
    if actual != required {
        let name = match required {
            Format::Json => "json",
            Format::Dot => "dot",
        };
        return Err(CliError::Invalid(format!("{what} is only available as {name}")));
    }
    Ok(())
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => Ok(write_text_atomic(path, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_validate(input: &InputArgs) -> Result<u8, CliError> {
    let lattice = load_lattice(&input.lattice)?;
    eprintln!(
        "lattice ok: {} elements, bottom {}, top {}",
        lattice.size(),
        lattice.name(lattice.bottom()),
        lattice.name(lattice.top())
    );
    let family = load_family(&input.family, &lattice)?;
    let covering = check_noncovering(&family);
    if let Some(&p) = covering.violations.first() {
        return Err(CliError::Invalid(format!(
            "family is not non-covering: A_{p} is covered by the other sets"
        )));
    }
    eprintln!(
        "family ok: ground size {}, {} index sets, non-covering",
        family.ground().size(),
        family.len()
    );
    Ok(0)
}

fn cmd_build(args: &BuildArgs) -> Result<u8, CliError> {
    require_format(args.format, Format::Json, "the construction document")?;
    let sys = load_system(&args.input)?;
    let covering = check_noncovering(sys.family());
    let doc = SystemDoc {
        lattice: LatticeDoc::from_lattice(sys.lattice()),
        family: FamilyDoc::from_family(sys.family()),
        phis: sys.phis().iter().map(OpDoc::from_op).collect(),
        mediators: sys
            .m_triples()
            .iter()
            .zip(sys.m_ops())
            .map(|(&(p, q1, q2), op)| MediatorDoc { p, q1, q2, op: OpDoc::from_op(op) })
            .collect(),
        noncovering_witnesses: covering.witnesses.iter().map(|w| w.expect("built systems are non-covering")).collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("documents serialize");
    text.push('\n');
    emit(args.out.as_deref(), &text)?;
    eprintln!(
        "built {} phis and {} mediators over ground size {}",
        sys.phis().len(),
        sys.m_count(),
        sys.ground_size()
    );
    Ok(0)
}

fn construction_stats(sys: &GeneratorSystem, family_label: &str) -> ConstructionStats {
    let in_range =
        |op: &Operation| op.table().iter().all(|v| DISTINGUISHED.contains(v));
    let covering = check_noncovering(sys.family());
    ConstructionStats {
        elements: sys.lattice().size(),
        ground_size: sys.ground_size(),
        family: family_label.to_string(),
        phi_count: sys.phis().len(),
        mediator_count: sys.m_count(),
        noncovering_witnesses: covering
            .witnesses
            .iter()
            .map(|w| w.expect("built systems are non-covering"))
            .collect(),
        range_ok: sys.phis().iter().all(in_range) && sys.m_ops().iter().all(in_range),
    }
}

fn parse_fault(spec: &str) -> Result<usize, CliError> {
    let bad = || {
        CliError::Invalid(format!(
            "fault spec {spec:?} is not of the form phi:INDEX"
        ))
    };
    let (kind, index) = spec.split_once(':').ok_or_else(bad)?;
    if kind != "phi" {
        return Err(bad());
    }
    index.parse().map_err(|_| bad())
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8, CliError> {
    require_format(args.format, Format::Json, "the verification report")?;
    let bounds = args.bounds.bounds();
    let mut sys = load_system(&args.input)?;
    if let Some(spec) = &args.fault_inject {
        let p = parse_fault(spec)?;
        let point = sys.inject_phi_fault(p)?;
        eprintln!("fault injected: phi_{p} corrupted at ground point {point}");
    }

    let label = lattice_label(&args.input.lattice);
    let lattice_doc =
        serde_json::to_string(&LatticeDoc::from_lattice(sys.lattice())).expect("lattices serialize");
    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        lattice_source: args.input.lattice.clone(),
        lattice_hash: latclone_core::report::hash_hex(lattice_doc.as_bytes()),
        family: args.input.family.clone(),
        suites: args.suite.names(),
        bounds,
        fault_inject: args.fault_inject.clone(),
        determinism: DETERMINISM_NOTE.to_string(),
    };

    let construction = construction_stats(&sys, &args.input.family);
    eprintln!(
        "constructed: {} elements, ground {}, {} mediators, range {}",
        construction.elements,
        construction.ground_size,
        construction.mediator_count,
        if construction.range_ok { "ok" } else { "VIOLATED" }
    );

    let inventory = if args.suite.includes_lemmas() || args.suite.includes_embedding() {
        eprintln!(
            "enumerating closure to arity {} depth {} budget {}",
            bounds.max_arity, bounds.depth, bounds.budget
        );
        Some(spoilt_inventory(&sys, &bounds))
    } else {
        None
    };

    let lemmas = if args.suite.includes_lemmas() {
        let config = SuiteConfig { bounds, ..SuiteConfig::default() };
        let outcomes =
            run_lemma_suites_with(&sys, inventory.as_ref().expect("built above"), &config);
        for o in &outcomes {
            eprintln!("lemma suite {}: {:?} over {} instances", o.name, o.verdict, o.instances);
        }
        Some(outcomes)
    } else {
        None
    };

    let when4 = if args.suite.includes_when4() {
        let report = when4_suite(&sys, &bounds, DEFAULT_TERM_BUDGET);
        eprintln!(
            "when4: {:?} over {} representations ({} instances)",
            report.verdict, report.checked_representations, report.instances
        );
        Some(report)
    } else {
        None
    };

    let embedding = if args.suite.includes_embedding() {
        let report = verify_embedding_with(
            &sys,
            &label,
            inventory.as_ref().expect("built above"),
            &bounds,
        );
        eprintln!(
            "embedding: {} FAIL, {} INCONCLUSIVE over {} ideals",
            report.fail_count,
            report.inconclusive_count,
            report.ideals.len()
        );
        Some(report)
    } else {
        None
    };

    let mut fail_count = 0;
    let mut inconclusive_count = 0;
    if !construction.range_ok {
        fail_count += 1;
    }
    let mut tally = |verdict: Verdict| match verdict {
        Verdict::Fail => fail_count += 1,
        Verdict::Inconclusive => inconclusive_count += 1,
        Verdict::Pass => {}
    };
    for o in lemmas.iter().flatten() {
        tally(o.verdict);
    }
    if let Some(w) = &when4 {
        tally(w.verdict);
        for o in &w.anchored {
            tally(o.verdict);
        }
    }
    if let Some(e) = &embedding {
        fail_count += e.fail_count;
        inconclusive_count += e.inconclusive_count;
    }

    let report = RunReport {
        schema_version: SCHEMA_VERSION,
        manifest_hash: manifest_hash(&manifest),
        manifest,
        construction: Some(construction),
        lemmas,
        when4,
        embedding,
        fail_count,
        inconclusive_count,
    };
    emit(args.out.as_deref(), &report.to_json())?;

    if inconclusive_count > 0 {
        eprintln!(
            "note: {inconclusive_count} INCONCLUSIVE verdicts; raise --budget, --depth or --max-arity to settle them"
        );
    }
    if fail_count > 0 {
        eprintln!("verdict: FAIL ({fail_count} failing checks)");
        Ok(1)
    } else {
        eprintln!("verdict: PASS (manifest {})", report.manifest_hash);
        Ok(0)
    }
}

fn cmd_export(args: &ExportArgs) -> Result<u8, CliError> {
    require_format(args.format, Format::Dot, "graph export")?;
    let sys = load_system(&args.input)?;
    let hasse = dot::lattice_dot(sys.lattice());
    let Some(dir) = &args.out else {
        print!("{hasse}");
        return Ok(0);
    };
    std::fs::create_dir_all(dir).map_err(|source| IoError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let bounds = args.bounds.bounds();
    let label = lattice_label(&args.input.lattice);
    let inventory = spoilt_inventory(&sys, &bounds);
    let report = verify_embedding_with(&sys, &label, &inventory, &bounds);
    let signatures: Vec<Vec<usize>> = report
        .ideals
        .iter()
        .map(|ideal| ideal.signature.clone())
        .collect();
    let image = dot::image_dot(sys.lattice(), &signatures);
    write_text_atomic(&dir.join("lattice.dot"), &hasse)?;
    write_text_atomic(&dir.join("image.dot"), &image)?;
    eprintln!(
        "wrote {} and {}",
        dir.join("lattice.dot").display(),
        dir.join("image.dot").display()
    );
    Ok(0)
}
