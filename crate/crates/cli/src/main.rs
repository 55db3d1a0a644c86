//! `ontobench`: run the completeness and expressiveness pipeline, or one
//! stage of it.

use std::collections::BTreeSet;
use std::fmt::Display;
use std::io::IsTerminal;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;

use ontobench_core::alignment::{load_alignments, suggest_alignments, Facet, OntologyId, OntologyRef};
use ontobench_core::dataset::{load_associations, load_dataset, select_representative, Dataset, System};
use ontobench_core::model::Symbol;
use ontobench_core::report::{
    convert_brick_class_to_tags, emit_reports, load_brick, load_exclusions, load_haystack, run_pipeline, Format, PipelineError,
    ReportBundle, RunConfig,
};

#[derive(Parser)]
#[command(name = "ontobench", version, about = "Measure how well Haystack and Brick cover a dataset of BAS point types")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the whole pipeline and write the reports.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output_dir` from the config.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Overrides `formats` from the config; repeat or comma-separate.
        #[arg(long, value_delimiter = ',')]
        format: Vec<Format>,
    },
    /// Load a directory of Trio def libraries.
    ParseHaystack {
        dir: PathBuf,
        /// Show one def and its supertype closure.
        #[arg(long)]
        def: Option<String>,
    },
    /// Load a Brick schema file.
    ParseBrick {
        file: PathBuf,
        /// Show one class, its closure and tags.
        #[arg(long)]
        class: Option<String>,
    },
    #[command(subcommand)]
    Dataset(DatasetCommand),
    #[command(subcommand)]
    Align(AlignCommand),
    /// Completeness rates and gaps for a run config.
    Completeness {
        #[arg(long)]
        config: PathBuf,
        /// Limit output to one ontology.
        #[arg(long)]
        ontology: Option<OntologyId>,
    },
    /// Relationship mappings for a run config.
    Expressiveness {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        ontology: Option<OntologyId>,
    },
    /// Haystack-style tags for a Brick class.
    ConvertTags {
        #[arg(long)]
        brick: PathBuf,
        class: String,
        /// Only the class's own tags, not its ancestors'.
        #[arg(long)]
        declared_only: bool,
    },
}

#[derive(Subcommand)]
enum DatasetCommand {
    /// Check a dataset file and print its vocabularies.
    Validate {
        file: PathBuf,
        #[arg(long)]
        associations: Option<PathBuf>,
    },
    /// Pick the representative point types.
    Select {
        file: PathBuf,
        /// Target systems; defaults to the five HVAC systems.
        #[arg(long, value_delimiter = ',')]
        systems: Vec<System>,
        #[arg(long)]
        exclusions: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Ontologies {
    #[arg(long)]
    haystack: PathBuf,
    #[arg(long)]
    brick: PathBuf,
}

#[derive(Subcommand)]
enum AlignCommand {
    /// Load alignment tables and check every target against the ontologies.
    Check {
        #[command(flatten)]
        ontologies: Ontologies,
        #[arg(required = true)]
        tables: Vec<PathBuf>,
    },
    /// Candidate targets for a token.
    Suggest {
        #[command(flatten)]
        ontologies: Ontologies,
        #[arg(long)]
        facet: Facet,
        #[arg(long)]
        ontology: OntologyId,
        #[arg(long, default_value_t = 10)]
        limit: usize,
        token: String,
    },
}

/// An error with the process exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Failure {
        Failure { code: e.exit_code() as u8, message: e.to_string() }
    }
}

/// Config and parse errors from the individual stages exit with 1.
fn input_error(e: impl Display) -> Failure {
    Failure { code: 1, message: e.to_string() }
}

fn color() -> bool {
    std::env::var_os("ONTOBENCH_NO_COLOR").is_none() && std::io::stderr().is_terminal()
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .write_style(if color() { env_logger::WriteStyle::Auto } else { env_logger::WriteStyle::Never })
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // bad arguments are a config error; 2 is reserved for integrity failures
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if color() {
                eprintln!("\x1b[1;31merror\x1b[0m: {}", f.message);
            } else {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Run { config, output, format } => run(&config, output, format),
        Command::ParseHaystack { dir, def } => parse_haystack(&dir, def.as_deref()),
        Command::ParseBrick { file, class } => parse_brick(&file, class.as_deref()),
        Command::Dataset(DatasetCommand::Validate { file, associations }) => dataset_validate(&file, associations.as_deref()),
        Command::Dataset(DatasetCommand::Select { file, systems, exclusions }) => dataset_select(&file, systems, exclusions.as_deref()),
        Command::Align(AlignCommand::Check { ontologies, tables }) => align_check(&ontologies, &tables),
        Command::Align(AlignCommand::Suggest { ontologies, facet, ontology, limit, token }) => {
            align_suggest(&ontologies, facet, ontology, limit, &token)
        }
        Command::Completeness { config, ontology } => {
            let bundle = pipeline(&config)?;
            print_completeness(&bundle, ontology);
            Ok(())
        }
        Command::Expressiveness { config, ontology } => {
            let bundle = pipeline(&config)?;
            print_expressiveness(&bundle, ontology);
            Ok(())
        }
        Command::ConvertTags { brick, class, declared_only } => convert_tags(&brick, &class, declared_only),
    }
}

fn pipeline(config: &Path) -> Result<ReportBundle, Failure> {
    let cfg = RunConfig::load(config)?;
    info!("running {}", config.display());
    Ok(run_pipeline(&cfg)?)
}

fn run(config: &Path, output: Option<PathBuf>, formats: Vec<Format>) -> Result<(), Failure> {
    let mut cfg = RunConfig::load(config)?;
    if let Some(dir) = output {
        // a directory given on the command line is relative to the working directory
        cfg.output_dir = std::env::current_dir().map_err(input_error)?.join(dir);
    }
    if !formats.is_empty() {
        cfg.formats = formats;
    }
    let bundle = run_pipeline(&cfg)?;
    let written = emit_reports(&bundle, &cfg.formats, &cfg.output_path())?;
    println!("config hash {}", bundle.metadata.config_hash);
    println!("representative set: {} point types", bundle.selection.len());
    print_rates(&bundle, None);
    print_expressiveness_totals(&bundle, None);
    if !bundle.warnings.is_empty() {
        eprintln!("{} warning(s); set RUST_LOG=info to list them", bundle.warnings.len());
    }
    for w in &bundle.warnings {
        info!("{w}");
    }
    println!("wrote {} file(s) to {}", written.len(), cfg.output_path().display());
    Ok(())
}

fn parse_haystack(dir: &Path, def: Option<&str>) -> Result<(), Failure> {
    let ns = load_haystack(dir)?;
    println!("{} defs", ns.len());
    for (lib, version) in ns.lib_versions() {
        let n = ns.libs().get(&lib).map_or(0, Vec::len);
        println!("  {lib} {version}: {n}");
    }
    if let Some(name) = def {
        let sym = Symbol::parse(name).map_err(input_error)?;
        let d = ns.get(&sym).ok_or_else(|| input_error(format!("no def {name}")))?;
        let sup: Vec<String> = d.supertypes.iter().map(|s| s.to_string()).collect();
        println!("{name} ({}): is {}", d.lib, sup.join(", "));
        let closure = ns.supertype_closure(&sym).map_err(input_error)?;
        println!("closure: {}", closure.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(" "));
    }
    Ok(())
}

fn parse_brick(file: &Path, class: Option<&str>) -> Result<(), Failure> {
    let schema = load_brick(file)?;
    println!("Brick {} ({} classes)", schema.version.as_deref().unwrap_or("unknown version"), schema.classes.len());
    for (root, n) in schema.class_count_by_root() {
        println!("  {}: {n}", root.name());
    }
    let paired = schema.relationships.values().filter(|r| r.inverse.is_some()).count();
    println!("{} relationships, {paired} with an inverse", schema.relationships.len());
    if !schema.warnings.is_empty() {
        println!("{} warning(s)", schema.warnings.len());
    }
    if let Some(name) = class {
        let iri = schema.expand(name);
        let c = schema.class(&iri).ok_or_else(|| input_error(format!("unknown class {name}")))?;
        println!("{} under {}", iri, c.root.name());
        let closure = schema.closure(&iri).map_err(input_error)?;
        println!("closure: {}", closure.iter().map(|i| i.local_name()).collect::<Vec<_>>().join(" "));
        let tags = schema.class_tags(&iri, true).map_err(input_error)?;
        println!("tags: {}", tags.iter().map(|t| t.as_str()).collect::<Vec<_>>().join(" "));
    }
    Ok(())
}

fn read_dataset(file: &Path, associations: Option<&Path>) -> Result<Dataset, Failure> {
    let ds = load_dataset(file).map_err(input_error)?;
    match associations {
        Some(a) => {
            let assoc = load_associations(a).map_err(input_error)?;
            Dataset::new(ds.points, assoc).map_err(input_error)
        }
        None => Ok(ds),
    }
}

fn dataset_validate(file: &Path, associations: Option<&Path>) -> Result<(), Failure> {
    let ds = read_dataset(file, associations)?;
    println!("{} point types, {} associations", ds.len(), ds.associations.len());
    for (s, n) in ds.system_counts() {
        println!("  {}: {n}", s.label());
    }
    println!("equipment classes: {}", ds.equipment_classes.len());
    println!("equipment types: {}", ds.equipment_types.len());
    println!("point classes: {}", ds.point_classes.len());
    println!("services: {}", ds.services.len());
    Ok(())
}

fn dataset_select(file: &Path, systems: Vec<System>, exclusions: Option<&Path>) -> Result<(), Failure> {
    let ds = read_dataset(file, None)?;
    let targets: BTreeSet<System> = if systems.is_empty() {
        System::ALL.into_iter().filter(|s| *s != System::Other).collect()
    } else {
        systems.into_iter().collect()
    };
    let exclusions = match exclusions {
        Some(p) => load_exclusions(p)?,
        None => Vec::new(),
    };
    let rs = select_representative(&ds, &targets, &exclusions);
    for p in &rs.selected {
        println!("selected\t{}\t{}", p.system.slug(), p.name);
    }
    for r in &rs.rejected {
        println!("rejected\t{}\t{}\t{}", r.point.system.slug(), r.point.name, r.reason);
    }
    for s in rs.per_system() {
        eprintln!("{}: {} selected, {} rejected", s.system.label(), s.selected, s.rejected);
    }
    for w in &rs.warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}

fn align_check(o: &Ontologies, tables: &[PathBuf]) -> Result<(), Failure> {
    let ns = load_haystack(&o.haystack)?;
    let brick = load_brick(&o.brick)?;
    let table = load_alignments(tables, &ns, &brick).map_err(input_error)?;
    for ont in OntologyId::ALL {
        let entries: Vec<_> = table.entries().filter(|e| e.ontology == ont).collect();
        let gaps = entries.iter().filter(|e| e.target.is_none()).count();
        println!("{}: {} entries, {} mapped, {gaps} gaps", ont.label(), entries.len(), entries.len() - gaps);
    }
    Ok(())
}

fn align_suggest(o: &Ontologies, facet: Facet, ont: OntologyId, limit: usize, token: &str) -> Result<(), Failure> {
    let ns;
    let brick;
    let target = match ont {
        OntologyId::Haystack => {
            ns = load_haystack(&o.haystack)?;
            OntologyRef::Haystack(&ns)
        }
        OntologyId::Brick => {
            brick = load_brick(&o.brick)?;
            OntologyRef::Brick(&brick)
        }
    };
    let found = suggest_alignments(token, facet, target, limit);
    if found.is_empty() {
        println!("no candidates for {token:?}");
    }
    for s in found {
        println!("{}\t{:?}", s.target, s.rank);
    }
    Ok(())
}

fn convert_tags(brick: &Path, class: &str, declared_only: bool) -> Result<(), Failure> {
    let schema = load_brick(brick)?;
    let iri = schema.expand(class);
    let conv = convert_brick_class_to_tags(&schema, &iri, !declared_only).map_err(input_error)?;
    println!("{}", conv.tags.iter().map(|t| t.as_str()).collect::<Vec<_>>().join(" "));
    for w in &conv.warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}

fn wanted(only: Option<OntologyId>, ont: OntologyId) -> bool {
    only.is_none_or(|o| o == ont)
}

fn print_rates(b: &ReportBundle, only: Option<OntologyId>) {
    for c in b.completeness.iter().filter(|c| wanted(only, c.ontology)) {
        println!("{} completeness (% maps / % maps or partially maps):", c.ontology.label());
        for r in &c.rows {
            println!("  {:<15} {:>3} {:>3}   ({} selected)", r.label(), r.pct_maps, r.pct_maps_or_partial, r.selected);
        }
    }
}

fn print_completeness(b: &ReportBundle, only: Option<OntologyId>) {
    print_rates(b, only);
    for c in b.completeness.iter().filter(|c| wanted(only, c.ontology)) {
        println!("{} gaps:", c.ontology.label());
        for g in &c.gaps {
            let sig = if g.significant { "significant" } else { "" };
            println!("  {:<9} {:<15} {:<28} {:>4} {sig}", g.gap_type, g.classification, g.concept, g.count);
        }
        if !c.unresolved.is_empty() {
            println!("  {} token(s) without an alignment entry", c.unresolved.len());
        }
    }
}

fn print_expressiveness_totals(b: &ReportBundle, only: Option<OntologyId>) {
    for e in b.expressiveness.ontologies.iter().filter(|e| wanted(only, e.ontology)) {
        println!("{} expressiveness: {}/{} = {}%", e.ontology.label(), e.mapped, e.total, e.pct);
    }
}

fn print_expressiveness(b: &ReportBundle, only: Option<OntologyId>) {
    print_expressiveness_totals(b, only);
    for e in b.expressiveness.ontologies.iter().filter(|e| wanted(only, e.ontology)) {
        println!("{}:", e.ontology.label());
        for r in &e.rows {
            let path: Vec<String> = r.path.iter().map(|s| s.to_string()).collect();
            println!(
                "  {:<14} {:<22} {} -> {}: {} [{}]{}",
                r.key.system.label(),
                r.key.kind.label(),
                r.key.endpoints.0,
                r.key.endpoints.1,
                r.label,
                path.join(";"),
                r.reason.as_deref().map(|x| format!(" ({x})")).unwrap_or_default()
            );
        }
    }
}
