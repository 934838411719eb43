use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use geoext::algo1::{
    enumerate_outputs, geometric_outputs, m_violation, run_deterministic, ExtensionResult, SearchInput,
    SearchOptions, DEFAULT_BUDGET,
};
use geoext::canon::is_isomorphic;
use geoext::extend::{standard_forms, StandardForm};
use geoext::family::set_representation;
use geoext::io::{self, Document, FamilyDoc, LatticeDoc, NodeLabels};
use geoext::verify::brute_force_best;
use geoext::{fixtures, AtomSet, Error, FinitePoset, SetFamily};
use serde_json::{json, Value};

/// Geometric extensions of finite semimodular lattices.
///
/// INPUT arguments are JSON files, or names of bundled fixtures such as
/// FIX-L7. Set LATTICE_LOG (e.g. `info`, `debug`) for trace output.
#[derive(Parser, Debug)]
#[command(name = "geoext", version)]
struct Cli {
    /// Worker threads for the search and the oracle.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Scheduler seed; results never depend on it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Also write the JSON result to FILE.
    #[arg(long, global = true, value_name = "FILE")]
    json: Option<PathBuf>,
    /// Write Hasse diagrams of the input and outputs to FILE.
    #[arg(long, global = true, value_name = "FILE")]
    dot: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report lattice, semimodularity, atomisticity, length and |J|.
    Check { input: String },
    /// Print the atom-set family of an atomistic lattice or poset.
    Represent { input: String },
    /// List standard forms with up to BUDGET extra inserted atoms.
    Forms {
        input: String,
        #[arg(long, default_value_t = 0)]
        budget: usize,
    },
    /// Run the insertion search on a lattice, or on a family given with its
    /// embedded copy of the lattice.
    Enumerate {
        input: String,
        /// Emit every output class, not only those satisfying the
        /// augmentation condition.
        #[arg(long)]
        all: bool,
        /// Replay the choices in FILE (a JSON list of atom-label lists).
        #[arg(long, value_name = "FILE")]
        script: Option<String>,
        /// Search node cap.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Embedded lattice family, when INPUT is a family.
        #[arg(long, value_name = "FILE")]
        embedded: Option<String>,
    },
    /// Smallest geometric extensions of a semimodular lattice.
    Best {
        input: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Test the one-atom augmentation condition on a family.
    #[command(name = "check-M", alias = "check-m")]
    CheckM { input: String },
    /// Exhaustive smallest-extension search used as a cross-check.
    OracleBest {
        input: String,
        #[arg(long, default_value_t = 50_000_000)]
        cap: usize,
    },
    /// Print the Hasse diagram in DOT format.
    Dot { input: String },
    /// Decide whether two inputs are isomorphic as posets.
    Iso { first: String, second: String },
}

/// Failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Parse(_)
            | Error::IndexOutOfRange { .. }
            | Error::DuplicateCover(..)
            | Error::SelfLoop(_)
            | Error::Cycle(_)
            | Error::RedundantEdge { .. }
            | Error::NotBounded { .. }
            | Error::MalformedFamily(_)
            | Error::UniverseTooLarge(_)
            | Error::IllegalChoice { .. }
            | Error::ScriptExhausted { .. }
            | Error::NotSubset(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn malformed(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

/// What a subcommand produced: text for stdout, diagrams, and whether the
/// tested property held.
struct Outcome {
    stdout: String,
    json: Option<Value>,
    dots: Vec<String>,
    holds: bool,
}

impl Outcome {
    fn json(value: Value) -> Outcome {
        Outcome { stdout: serde_json::to_string_pretty(&value).expect("json"), json: Some(value), dots: Vec::new(), holds: true }
    }
}

fn read_source(spec: &str) -> Result<String, Failure> {
    if Path::new(spec).exists() {
        return fs::read_to_string(spec).map_err(|e| malformed(format!("{spec}: {e}")));
    }
    fixtures::source(spec)
        .map(str::to_owned)
        .ok_or_else(|| malformed(format!("{spec}: no such file or fixture")))
}

fn read_document(spec: &str) -> Result<Document, Failure> {
    io::parse_document(&read_source(spec)?).map_err(|e| malformed(format!("{spec}: {e}")))
}

fn read_lattice_doc(spec: &str) -> Result<LatticeDoc, Failure> {
    match read_document(spec)? {
        Document::Lattice(d) => Ok(d),
        Document::Family(_) => Err(malformed(format!("{spec}: expected a lattice document"))),
    }
}

fn read_family(spec: &str) -> Result<SetFamily, Failure> {
    match read_document(spec)? {
        Document::Family(d) => Ok(d.family()?),
        Document::Lattice(_) => Err(malformed(format!("{spec}: expected a family document"))),
    }
}

fn family_value(f: &SetFamily) -> Value {
    serde_json::to_value(FamilyDoc::from(f)).expect("json")
}

fn poset_names(doc: &LatticeDoc) -> Vec<String> {
    doc.labels.clone().unwrap_or_else(|| (0..doc.n).map(|x| x.to_string()).collect())
}

fn cmd_check(input: &str) -> Result<Outcome, Failure> {
    let doc = read_lattice_doc(input)?;
    let poset = doc.poset()?;
    let names = poset_names(&doc);
    let mut lines = Vec::new();
    let mut holds = true;
    let atomistic = match poset.atomistic_violation() {
        None => "yes".to_string(),
        Some((x, y)) => format!("no (elements {} and {})", names[x], names[y]),
    };
    let mut report = json!({
        "elements": poset.n(),
        "length": poset.length(),
        "atoms": poset.atoms().len(),
        "join_irreducibles": poset.join_irreducibles().len(),
        "atomistic": poset.is_atomistic(),
    });
    match doc.lattice() {
        Ok(l) => {
            lines.push("lattice: yes".to_string());
            match l.semimodularity_violation() {
                None => lines.push("semimodular: yes".to_string()),
                Some((a, b, c)) => {
                    holds = false;
                    lines.push(format!("semimodular: no ({} ≺ {}, with {})", names[a], names[b], names[c]));
                }
            }
            lines.push(format!("atomistic: {atomistic}"));
            lines.push(format!("geometric: {}", if l.is_geometric() { "yes" } else { "no" }));
            report["lattice"] = json!(true);
            report["semimodular"] = json!(l.is_semimodular());
            report["geometric"] = json!(l.is_geometric());
        }
        Err(e) => {
            holds = false;
            lines.push(format!("lattice: no ({e})"));
            lines.push(format!("atomistic: {atomistic}"));
            report["lattice"] = json!(false);
        }
    }
    lines.push(format!("length: {}", poset.length()));
    lines.push(format!("join-irreducibles: {}", poset.join_irreducibles().len()));
    lines.push(format!("atoms: {}", poset.atoms().len()));
    let dot = io::poset_dot(&poset, "input", NodeLabels::Names(&names));
    Ok(Outcome { stdout: lines.join("\n"), json: Some(report), dots: vec![dot], holds })
}

fn cmd_represent(input: &str) -> Result<Outcome, Failure> {
    let doc = read_lattice_doc(input)?;
    let poset: FinitePoset = doc.poset()?;
    let rep = set_representation(&poset)?;
    let mut out = Outcome::json(family_value(&rep.family));
    out.dots.push(io::poset_dot(&poset, "input", NodeLabels::Sets(&rep.element_sets)));
    out.dots.push(io::family_dot(&rep.family, "representation"));
    Ok(out)
}

fn cmd_forms(input: &str, budget: usize) -> Result<Outcome, Failure> {
    let l = read_lattice_doc(input)?.lattice()?;
    let forms = standard_forms(&l, budget)?;
    let docs: Vec<LatticeDoc> = forms.iter().map(LatticeDoc::from_form).collect();
    let mut out = Outcome::json(serde_json::to_value(&docs).expect("json"));
    out.dots = forms
        .iter()
        .enumerate()
        .map(|(i, f)| io::poset_dot(f.lattice().poset(), &format!("form{i}"), NodeLabels::Index))
        .collect();
    Ok(out)
}

/// Search input from a lattice (via its minimal form) or from a family plus
/// its embedded lattice family.
fn search_input(input: &str, embedded: Option<&str>) -> Result<SearchInput, Failure> {
    match read_document(input)? {
        Document::Lattice(doc) => Ok(StandardForm::minimal(&doc.lattice()?)?.search_input()?),
        Document::Family(doc) => {
            let sp = doc.family()?;
            let t = match embedded {
                Some(e) => read_family(e)?,
                None => sp.clone(),
            };
            if !t.is_subfamily_of(&sp) {
                return Err(malformed("embedded family is not contained in the input family"));
            }
            Ok(SearchInput { length: t.length(), embedding: t.sets().to_vec(), embedded: t, sp })
        }
    }
}

fn read_script(spec: &str) -> Result<Vec<AtomSet>, Failure> {
    serde_json::from_str(&read_source(spec)?).map_err(|e| malformed(format!("{spec}: {e}")))
}

fn cmd_enumerate(
    input: &str,
    all: bool,
    script: Option<&str>,
    embedded: Option<&str>,
    options: SearchOptions,
) -> Result<Outcome, Failure> {
    let si = search_input(input, embedded)?;
    let mut dots = vec![io::family_dot(&si.sp, "input")];
    if let Some(script) = script {
        let choices = read_script(script)?;
        let (family, trace) = run_deterministic(&si, &choices)?;
        for entry in &trace {
            log::info!("step {} k={} t={} inserted {}", entry.step, entry.k, entry.t, entry.set);
        }
        dots.push(io::family_dot(&family, "output"));
        let value = json!({ "family": family_value(&family), "trace": trace });
        let mut out = Outcome::json(value);
        out.dots = dots;
        return Ok(out);
    }
    let e = enumerate_outputs(&si, options)?;
    let classes = if all { e.classes.clone() } else { geometric_outputs(&e)? };
    for v in &e.violations {
        log::warn!("{v}");
    }
    dots.extend(classes.iter().enumerate().map(|(i, f)| io::family_dot(f, &format!("output{i}"))));
    let value = json!({
        "classes": classes.iter().map(family_value).collect::<Vec<_>>(),
        "terminals": e.terminals,
        "nodes": e.nodes,
        "truncated": e.truncated,
    });
    let mut out = Outcome::json(value);
    out.dots = dots;
    Ok(out)
}

fn result_value(r: &ExtensionResult) -> Value {
    json!({
        "family": family_value(&r.family),
        "geometric": r.geometric,
        "size": r.size,
        "atoms": r.atoms,
        "length": r.length,
        "embedding": r.embedding,
        "trace": r.trace,
    })
}

fn cmd_best(input: &str, options: SearchOptions) -> Result<Outcome, Failure> {
    let l = read_lattice_doc(input)?.lattice()?;
    let results = geoext::best_extensions(&l, options)?;
    for r in &results {
        for entry in &r.trace {
            log::info!("step {} k={} t={} inserted {}", entry.step, entry.k, entry.t, entry.set);
        }
    }
    let mut out = Outcome::json(Value::Array(results.iter().map(result_value).collect()));
    out.dots.push(io::poset_dot(l.poset(), "input", NodeLabels::Index));
    out.dots.extend(results.iter().enumerate().map(|(i, r)| io::family_dot(&r.family, &format!("best{i}"))));
    Ok(out)
}

fn cmd_check_m(input: &str) -> Result<Outcome, Failure> {
    let f = read_family(input)?;
    let witness = m_violation(&f)?;
    let value = json!({
        "holds": witness.is_none(),
        "witness": witness.map(|(x, a)| json!({ "set": x, "atom": a })),
    });
    let mut out = Outcome::json(value);
    out.holds = witness.is_none();
    out.dots.push(io::family_dot(&f, "input"));
    Ok(out)
}

fn cmd_oracle(input: &str, cap: usize) -> Result<Outcome, Failure> {
    let l = read_lattice_doc(input)?.lattice()?;
    let r = brute_force_best(&l, cap)?;
    let value = json!({
        "family": family_value(&r.family),
        "depth": r.depth,
        "added": r.added,
        "tried": r.tried,
        "size": r.family.len(),
    });
    let mut out = Outcome::json(value);
    out.dots.push(io::family_dot(&r.family, "oracle"));
    Ok(out)
}

fn cmd_dot(input: &str) -> Result<Outcome, Failure> {
    let text = match read_document(input)? {
        Document::Lattice(doc) => {
            let p = doc.poset()?;
            io::poset_dot(&p, "input", NodeLabels::Names(&poset_names(&doc)))
        }
        Document::Family(doc) => io::family_dot(&doc.family()?, "input"),
    };
    Ok(Outcome { stdout: text.trim_end().to_string(), json: None, dots: Vec::new(), holds: true })
}

fn as_poset(spec: &str) -> Result<FinitePoset, Failure> {
    match read_document(spec)? {
        Document::Lattice(doc) => Ok(doc.poset()?),
        Document::Family(doc) => Ok(doc.family()?.to_poset()?),
    }
}

fn cmd_iso(first: &str, second: &str) -> Result<Outcome, Failure> {
    let iso = is_isomorphic(&as_poset(first)?, &as_poset(second)?);
    Ok(Outcome { stdout: iso.to_string(), json: Some(json!(iso)), dots: Vec::new(), holds: iso })
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    if let Some(seed) = cli.seed {
        log::debug!("scheduler seed {seed}");
    }
    let options = |budget| SearchOptions { budget, workers: cli.workers.max(1) };
    match &cli.command {
        Command::Check { input } => cmd_check(input),
        Command::Represent { input } => cmd_represent(input),
        Command::Forms { input, budget } => cmd_forms(input, *budget),
        Command::Enumerate { input, all, script, budget, embedded } => {
            cmd_enumerate(input, *all, script.as_deref(), embedded.as_deref(), options(*budget))
        }
        Command::Best { input, budget } => cmd_best(input, options(*budget)),
        Command::CheckM { input } => cmd_check_m(input),
        Command::OracleBest { input, cap } => cmd_oracle(input, *cap),
        Command::Dot { input } => cmd_dot(input),
        Command::Iso { first, second } => cmd_iso(first, second),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure { code: 2, message: format!("{}: {e}", path.display()) })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("LATTICE_LOG", "warn")).init();
    let cli = Cli::parse();
    let outcome = run(&cli).and_then(|out| {
        if let (Some(path), Some(value)) = (&cli.json, &out.json) {
            write_file(path, &serde_json::to_string_pretty(value).expect("json"))?;
        }
        if let Some(path) = &cli.dot {
            write_file(path, &out.dots.join("\n"))?;
        }
        Ok(out)
    });
    match outcome {
        Ok(out) => {
            println!("{}", out.stdout);
            if out.holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
