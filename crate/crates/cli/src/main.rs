//! `conepda`: Schreier graphs, cone types, pushdown automata and grammars for
//! word problems of pairs of groups.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 budget exhausted or answer unknown.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use conepda_core::backends::{build_schreier_capped, Backend, CosetSpace};
use conepda_core::cones::{classify_cone_types, Certificate, ConeTypeTable};
use conepda_core::gallery;
use conepda_core::grammar::{
    cyk_member, diagonal_distance_check, CnfProduction, Derivation, fixtures as grammars, to_cnf, triangulate, Cfg, CnfGrammar, GrammarClass,
};
use conepda_core::pda::{
    build_pda_from_cones, dihedral_example, finite_index_lift, pda_to_cfg, translate_pda, Budget, LiftTable, Pda, Verdict,
};
use conepda_core::regular::{
    finite_index_check, fixtures as dfas, kappa_homomorphism, reduce_dfa, schreier_to_dfa, Dfa, IndexCheck,
    SchreierAutomaton,
};
use conepda_core::verify::{
    self, differential_test, overall, CosetOracle, DiffOptions, PathOracle, PdaAcceptor, Status, VerificationReport,
};
use conepda_core::words::invert_word;
use conepda_core::{Error, LabelledGraph, VertexId};

const ENV_MEMORY: &str = "CONEPDA_MAX_MEMORY";

#[derive(Parser)]
#[command(name = "conepda", version, about = "Word problems of pairs of groups: graphs, cones, automata, grammars")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Built-in examples: figure1, triangulation, comb, z2, xw, dihedral.
    Examples(ExamplesArgs),
    /// Explores a Schreier graph and prints it in text form.
    BuildGraph(BuildGraphArgs),
    /// Classifies cone types; prints CERTIFIED or UNSTABLE with the growth table.
    Cones(ConesArgs),
    /// Synthesizes a pushdown automaton from certified cone types.
    BuildPda(BuildPdaArgs),
    /// Runs an automaton on a word.
    RunPda(RunPdaArgs),
    /// Automaton for a finitely generated subgroup through a substitution.
    TranslatePda(TranslatePdaArgs),
    /// Lifts an automaton from a finite-index subgroup.
    LiftPda(LiftPdaArgs),
    /// Grammar generating the language of an automaton.
    PdaToCfg(PdaToCfgArgs),
    /// Grammar tools.
    Grammar(GrammarArgs),
    /// Finite-index tools: automata from Schreier graphs, reduction, coset map.
    Regular(RegularArgs),
    /// Runs the differential verification suites.
    Verify(VerifyArgs),
    /// Writes a graph or automaton as DOT.
    ExportDot(ExportDotArgs),
}

/// Graph source: a backend expanded to a radius, or a graph file.
#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct Source {
    /// Backend: rule:NAME[:W=..], cyclic:N, free:GEN;GEN, or a long `backend ...` form.
    #[arg(long)]
    backend: Option<String>,
    /// Graph in text form.
    #[arg(long)]
    graph: Option<PathBuf>,
}

#[derive(Args)]
struct ExamplesArgs {
    /// Example name, or `list`.
    name: String,
    /// Write the example's graphs as DOT.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct BuildGraphArgs {
    #[arg(long)]
    backend: String,
    #[arg(long)]
    radius: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConesArgs {
    #[command(flatten)]
    source: Source,
    /// Largest level checked by the classifier.
    #[arg(long)]
    radius: usize,
    /// Truncation depth of the cone codes.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    depth: u64,
    /// Centre vertices (default: the root).
    #[arg(long = "center")]
    centers: Vec<String>,
    /// Print the full table.
    #[arg(long)]
    table: bool,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct BuildPdaArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    radius: usize,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    depth: u64,
    #[arg(long = "center")]
    centers: Vec<String>,
    /// Start vertex x₀ (default: the root).
    #[arg(long)]
    x0: Option<String>,
    /// End vertex y₀ (default: the root).
    #[arg(long)]
    y0: Option<String>,
    /// Write the automaton here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Differential test against the oracle up to this length.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    verify: Option<u64>,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args, Clone, Copy)]
struct BudgetArgs {
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_steps: u64,
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
    max_stack: u64,
}

impl BudgetArgs {
    fn budget(self) -> Budget {
        Budget::new(self.max_steps as usize, self.max_stack as usize)
    }
}

#[derive(Args)]
struct RunPdaArgs {
    #[arg(long)]
    pda: PathBuf,
    /// Space-separated letters; `eps` for the empty word.
    #[arg(long)]
    word: String,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct TranslatePdaArgs {
    #[arg(long)]
    pda: PathBuf,
    /// New alphabet, e.g. "c c^ d d^".
    #[arg(long)]
    alphabet: String,
    /// Letter images `c=a a`; an inverse letter defaults to the inverse image.
    #[arg(long = "map", required = true)]
    maps: Vec<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("lift_input").required(true).args(["pda", "example"])))]
struct LiftPdaArgs {
    #[arg(long, requires = "table")]
    pda: Option<PathBuf>,
    /// Coset table in text form.
    #[arg(long, requires = "pda")]
    table: Option<PathBuf>,
    /// Built-in lift; only `dihedral`.
    #[arg(long)]
    example: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PdaToCfgArgs {
    #[arg(long)]
    pda: PathBuf,
    /// Convert to Chomsky normal form.
    #[arg(long)]
    cnf: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GrammarArgs {
    #[arg(value_enum)]
    action: GrammarAction,
    #[arg(long)]
    grammar: PathBuf,
    #[arg(long)]
    word: Option<String>,
    /// Graph for check-diagonals (backend or file).
    #[arg(long)]
    backend: Option<String>,
    #[arg(long, conflicts_with = "backend")]
    graph: Option<PathBuf>,
    #[arg(long, default_value_t = 12)]
    radius: usize,
    /// Triangulation as DOT.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GrammarAction {
    Cnf,
    Classify,
    Member,
    Triangulate,
    CheckDiagonals,
}

#[derive(Args)]
struct RegularArgs {
    #[arg(value_enum)]
    action: RegularAction,
    #[arg(long)]
    backend: Option<String>,
    #[arg(long)]
    dfa: Option<PathBuf>,
    /// Radius cap for closing the Schreier graph.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    cap: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegularAction {
    Build,
    Reduce,
    Kappa,
    Index,
}

#[derive(Args)]
struct VerifyArgs {
    /// figure1, comb, z2, xw, dihedral, free-subgroup or all.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    max_len: u64,
    #[arg(long)]
    json: Option<PathBuf>,
    /// Enumerate every word even above the sampling threshold.
    #[arg(long)]
    exhaustive: bool,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
}

#[derive(Args)]
#[command(group(ArgGroup::new("dot_input").required(true).args(["backend", "graph", "dfa", "pda"])))]
struct ExportDotArgs {
    #[arg(long, requires = "radius")]
    backend: Option<String>,
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    dfa: Option<PathBuf>,
    #[arg(long)]
    pda: Option<PathBuf>,
    #[arg(long)]
    radius: Option<usize>,
    /// Draw each pair of mutually inverse edges once.
    #[arg(long)]
    fold: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::UnknownSymbol(_) | Error::UnknownVertex(_) => 2,
            Error::ArenaExhausted(_) | Error::InfiniteIndex(_) => 3,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure { code: 1, message: format!("cannot write {}: {e}", path.display()) })
}

/// Writes to `out` or standard output.
fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn max_vertices() -> Result<usize, Failure> {
    match std::env::var(ENV_MEMORY) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| usage(format!("{ENV_MEMORY} must be a positive vertex count, got `{v}`"))),
        Err(_) => Ok(usize::MAX),
    }
}

fn parse_backend(spec: &str) -> Result<Backend, Failure> {
    Backend::parse(spec, &|p: &str| fs::read_to_string(p).map_err(|e| Error::Parse { line: 0, message: format!("{p}: {e}") }))
        .map_err(|e| usage(format!("--backend: {e}")))
}

fn graph_from_file(path: &Path) -> Result<LabelledGraph, Failure> {
    Ok(LabelledGraph::parse_text(&read(path)?)?.0)
}

fn vertex(g: &LabelledGraph, flag: &str, name: Option<&str>) -> Result<VertexId, Failure> {
    match name {
        None => Ok(g.root()),
        Some(n) => g.vertex(n).ok_or_else(|| usage(format!("{flag}: unknown vertex `{n}`"))),
    }
}

fn centers(g: &LabelledGraph, names: &[String]) -> Result<Vec<VertexId>, Failure> {
    if names.is_empty() {
        return Ok(vec![g.root()]);
    }
    names.iter().map(|n| vertex(g, "--center", Some(n))).collect()
}

/// The graph of `source`, explored far enough for the classifier.
fn load_graph(source: &Source, radius: usize, depth: usize) -> Result<(LabelledGraph, Option<Backend>), Failure> {
    match (&source.backend, &source.graph) {
        (Some(spec), None) => {
            let b = parse_backend(spec)?;
            let g = build_schreier_capped(&b, gallery::build_radius(radius, depth), max_vertices()?)?;
            Ok((g, Some(b)))
        }
        (None, Some(path)) => Ok((graph_from_file(path)?, None)),
        _ => Err(usage("give exactly one of --backend, --graph")),
    }
}

fn status_line(t: &ConeTypeTable) -> String {
    match &t.status {
        Certificate::Certified { depth } => {
            format!("CERTIFIED {} cone types (radius {}, depth {depth})", t.type_count(), t.max_radius)
        }
        Certificate::Unstable { max_radius, reason } => format!("UNSTABLE at radius {max_radius}: {reason}"),
    }
}

fn growth_table(t: &ConeTypeTable) -> String {
    let mut s = String::from("level  classes  cones\n");
    for (n, classes) in t.growth.iter().enumerate() {
        let cones = t.cones_per_level.get(n).copied().unwrap_or(0);
        s.push_str(&format!("{n:>5}  {classes:>7}  {cones:>5}\n"));
    }
    s
}

fn json_text<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value).map(|s| s + "\n").map_err(|e| Failure { code: 1, message: e.to_string() })
}

fn cmd_cones(a: &ConesArgs) -> Outcome {
    let depth = a.depth as usize;
    let (g, _) = load_graph(&a.source, a.radius, depth)?;
    let c = centers(&g, &a.centers)?;
    let t = classify_cone_types(&g, &c, a.radius, depth)?;
    println!("{}", status_line(&t));
    print!("{}", growth_table(&t));
    if a.table && t.is_certified() {
        print!("{}", t.to_text(&g));
    }
    if let Some(p) = &a.json {
        write(p, &json_text(&t)?)?;
    }
    Ok(0)
}

fn print_report(r: &VerificationReport) {
    let status = match r.status {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Unknown => "UNKNOWN",
    };
    let mode = match &r.sample {
        Some(s) => format!("sampled {} (seed {})", s.size, s.seed),
        None if r.words_tested > 0 => format!("{} words", r.words_tested),
        None => format!("{} checks", r.checks.len()),
    };
    println!(
        "{status} {} vs {} len<={} {mode}: agree {} disagree {} unknown {}",
        r.construction, r.oracle, r.max_len, r.agree, r.disagree, r.unknown
    );
    if let Some(c) = &r.counterexample {
        println!("  counterexample `{}`: construction {:?}, oracle {:?}", c.word, c.construction, c.oracle);
    }
    if let Some(w) = &r.first_unknown {
        println!("  first unknown `{w}`");
    }
    for c in r.checks.iter().filter(|c| !c.passed || r.words_tested == 0) {
        println!("  {} {}: {}", if c.passed { "ok" } else { "FAILED" }, c.name, c.detail);
    }
}

fn exit_for(status: Status) -> u8 {
    match status {
        Status::Pass => 0,
        Status::Fail => 1,
        Status::Unknown => 3,
    }
}

fn cmd_build_pda(a: &BuildPdaArgs) -> Outcome {
    let depth = a.depth as usize;
    let (g, backend) = load_graph(&a.source, a.radius, depth)?;
    let c = centers(&g, &a.centers)?;
    let x0 = vertex(&g, "--x0", a.x0.as_deref())?;
    let y0 = vertex(&g, "--y0", a.y0.as_deref())?;
    let t = classify_cone_types(&g, &c, a.radius, depth)?;
    println!("{}", status_line(&t));
    if !t.is_certified() {
        print!("{}", growth_table(&t));
        return Ok(1);
    }
    let m = build_pda_from_cones(&t, &g, x0, y0)?;
    println!(
        "automaton: {} states, {} stack symbols, {} transitions, deterministic {}",
        m.state_count(),
        m.stack_symbol_count(),
        m.transition_count(),
        m.is_deterministic()
    );
    emit(a.out.as_deref(), &m.to_text())?;
    let Some(n) = a.verify else { return Ok(0) };
    let n = n as usize;
    let pda = PdaAcceptor { pda: &m, budget: a.budget.budget() };
    let opts = DiffOptions::default();
    let report = match (&backend, x0 == g.root() && y0 == g.root()) {
        (Some(b), true) => differential_test("build_pda_from_cones", &pda, "coset", &CosetOracle(b), b.alphabet(), n, &opts),
        _ => {
            let oracle = PathOracle { graph: &g, from: x0, to: y0 };
            differential_test("build_pda_from_cones", &pda, "graph-walk", &oracle, g.alphabet(), n, &opts)
        }
    };
    print_report(&report);
    Ok(exit_for(report.status))
}

fn cmd_run_pda(a: &RunPdaArgs) -> Outcome {
    let m = Pda::parse_text(&read(&a.pda)?)?;
    let w = m.alphabet().parse_word(&a.word).map_err(|e| usage(format!("--word: {e}")))?;
    let v = m.accepts(&w, a.budget.budget());
    println!("{}", serde_json::to_value(v).map(|x| x.as_str().unwrap_or("").to_string()).unwrap_or_default());
    Ok(if v == Verdict::Unknown { 3 } else { 0 })
}

fn cmd_translate(a: &TranslatePdaArgs) -> Outcome {
    let m = Pda::parse_text(&read(&a.pda)?)?;
    let small = conepda_core::Alphabet::parse(&a.alphabet).map_err(|e| usage(format!("--alphabet: {e}")))?;
    let mut images = vec![None; small.len()];
    for spec in &a.maps {
        let (letter, word) = spec.split_once('=').ok_or_else(|| usage(format!("--map: expected `x=word`, got `{spec}`")))?;
        let x = small.letter(letter.trim()).ok_or_else(|| usage(format!("--map: unknown letter `{letter}`")))?;
        let u = m.alphabet().parse_word(word).map_err(|e| usage(format!("--map: {e}")))?;
        images[x.index()] = Some(u);
    }
    // Letters without an explicit image take the inverse of their partner's.
    for x in small.letters() {
        if images[x.index()].is_none() {
            if let Some(u) = small.inverse(x).and_then(|y| images[y.index()].clone()) {
                images[x.index()] = Some(invert_word(m.alphabet(), &u)?);
            }
        }
    }
    let u = images
        .into_iter()
        .enumerate()
        .map(|(i, u)| u.ok_or_else(|| usage(format!("--map: no image for `{}`", small.names()[i]))))
        .collect::<Result<Vec<_>, _>>()?;
    let t = translate_pda(&m, &small, &u)?;
    eprintln!("translated: {} states, deterministic {}", t.state_count(), t.is_deterministic());
    emit(a.out.as_deref(), &t.to_text())?;
    Ok(0)
}

fn cmd_lift(a: &LiftPdaArgs) -> Outcome {
    let (m, table) = match (&a.example, &a.pda, &a.table) {
        (Some(name), None, None) if name == "dihedral" => dihedral_example()?,
        (Some(name), None, None) => return Err(usage(format!("--example: unknown lift `{name}`"))),
        (None, Some(p), Some(t)) => {
            let m = Pda::parse_text(&read(p)?)?;
            let table = LiftTable::parse_text(&read(t)?, m.alphabet())?;
            (m, table)
        }
        _ => return Err(usage("give --example, or both --pda and --table")),
    };
    let lifted = finite_index_lift(&m, &table)?;
    eprintln!("lifted: {} states, deterministic {}", lifted.state_count(), lifted.is_deterministic());
    emit(a.out.as_deref(), &lifted.to_text())?;
    Ok(0)
}

fn cmd_pda_to_cfg(a: &PdaToCfgArgs) -> Outcome {
    let m = Pda::parse_text(&read(&a.pda)?)?;
    let g = pda_to_cfg(&m);
    if g.rules.is_empty() {
        eprintln!("language is empty");
    }
    let text = if a.cnf && !g.rules.is_empty() { to_cnf(&g)?.to_cfg().to_text() } else { g.to_text() };
    emit(a.out.as_deref(), &text)?;
    Ok(0)
}

fn load_cnf(path: &Path) -> Result<CnfGrammar, Failure> {
    Ok(to_cnf(&Cfg::parse_text(&read(path)?)?)?)
}

/// Sentential forms along a derivation, starting after the start symbol.
fn sentential_forms(g: &CnfGrammar, d: &Derivation) -> Vec<String> {
    let mut form = vec![g.variables[g.start].clone()];
    let mut out = Vec::new();
    for step in &d.steps {
        let p = step.position;
        match step.production {
            CnfProduction::Binary(_, l, r) => {
                form.splice(p..=p, [g.variables[l].clone(), g.variables[r].clone()]);
            }
            CnfProduction::Terminal(_, a) => form[p] = format!("'{}'", g.terminals.name(a)),
            CnfProduction::Epsilon => form.clear(),
        }
        out.push(if form.is_empty() { "ε".to_string() } else { form.join(" ") });
    }
    out
}

fn cmd_grammar(a: &GrammarArgs) -> Outcome {
    let word = |g: &CnfGrammar| -> Result<Vec<conepda_core::Letter>, Failure> {
        let w = a.word.as_deref().ok_or_else(|| usage("--word is required for this action"))?;
        g.terminals.parse_word(w).map_err(|e| usage(format!("--word: {e}")))
    };
    match a.action {
        GrammarAction::Cnf => {
            print!("{}", load_cnf(&a.grammar)?.to_cfg().to_text());
            Ok(0)
        }
        GrammarAction::Classify => {
            let g = Cfg::parse_text(&read(&a.grammar)?)?;
            let c = match g.classify() {
                GrammarClass::RightLinear => "right-linear",
                GrammarClass::Linear => "linear",
                GrammarClass::General => "general",
            };
            println!("{c}");
            Ok(0)
        }
        GrammarAction::Member => {
            let g = load_cnf(&a.grammar)?;
            let w = word(&g)?;
            match cyk_member(&g, &w) {
                Some(d) => {
                    println!("member");
                    for form in sentential_forms(&g, &d) {
                        println!("  => {form}");
                    }
                }
                None => println!("not a member"),
            }
            Ok(0)
        }
        GrammarAction::Triangulate => {
            let g = load_cnf(&a.grammar)?;
            let w = word(&g)?;
            let d = cyk_member(&g, &w).ok_or(Error::NotInLanguage)?;
            let tri = triangulate(&g, &w, &d)?;
            for x in &tri.diagonals {
                println!("({}, {}, {})", x.from, g.variables[x.var], x.to);
            }
            if let Some(p) = &a.dot {
                write(p, &tri.to_dot(&g))?;
            }
            Ok(0)
        }
        GrammarAction::CheckDiagonals => {
            let g = load_cnf(&a.grammar)?;
            let w = word(&g)?;
            let graph = match (&a.backend, &a.graph) {
                (Some(spec), None) => build_schreier_capped(&parse_backend(spec)?, a.radius, max_vertices()?)?,
                (None, Some(p)) => graph_from_file(p)?,
                _ => return Err(usage("check-diagonals needs one of --backend, --graph")),
            };
            let ok = diagonal_distance_check(&g, &graph, graph.root(), &w)?;
            println!("{}", if ok { "bounds hold" } else { "bound violated" });
            Ok(if ok { 0 } else { 1 })
        }
    }
}

fn cmd_regular(a: &RegularArgs) -> Outcome {
    let cap = a.cap as usize;
    let backend = || -> Result<Backend, Failure> {
        parse_backend(a.backend.as_deref().ok_or_else(|| usage("--backend is required for this action"))?)
    };
    let dfa = || -> Result<Dfa, Failure> {
        let p = a.dfa.as_deref().ok_or_else(|| usage("--dfa is required for this action"))?;
        Ok(Dfa::parse_text(&read(p)?)?)
    };
    match a.action {
        RegularAction::Build => match schreier_to_dfa(&backend()?, cap) {
            SchreierAutomaton::Finite(d) => {
                eprintln!("closed: {} states", d.state_count());
                emit(a.out.as_deref(), &d.to_text())?;
                Ok(0)
            }
            SchreierAutomaton::Witness(w) => {
                println!("unknown: {} vertices explored, {} on the frontier at radius {}", w.explored, w.frontier, w.radius);
                Ok(3)
            }
        },
        RegularAction::Reduce => {
            let r = reduce_dfa(&dfa()?)?;
            emit(a.out.as_deref(), &r.to_text())?;
            Ok(0)
        }
        RegularAction::Kappa => {
            let d = dfa()?;
            let k = kappa_homomorphism(&d, &backend()?)?;
            print!("{}", k.to_text(&d));
            Ok(if k.homomorphism && k.surjective && k.root_preserved { 0 } else { 1 })
        }
        RegularAction::Index => match finite_index_check(&backend()?, cap) {
            IndexCheck::Finite { index } => {
                println!("finite {index}");
                Ok(0)
            }
            IndexCheck::Unknown { radius, explored } => {
                println!("unknown (no closure within radius {radius}, {explored} vertices)");
                Ok(3)
            }
        },
    }
}

#[derive(serde::Serialize)]
struct SuiteRun<'a> {
    suite: &'a str,
    max_len: usize,
    status: Status,
    reports: &'a [VerificationReport],
}

fn cmd_verify(a: &VerifyArgs) -> Outcome {
    let opts = DiffOptions { exhaustive: a.exhaustive, seed: a.seed, ..DiffOptions::default() };
    if a.suite != "all" && !verify::SUITES.contains(&a.suite.as_str()) {
        return Err(usage(format!("--suite: unknown suite `{}`; expected {} or all", a.suite, verify::SUITES.join(", "))));
    }
    let reports = verify::run_suite(&a.suite, a.max_len as usize, &opts)?;
    for r in &reports {
        print_report(r);
    }
    let status = overall(&reports);
    if let Some(p) = &a.json {
        write(p, &json_text(&SuiteRun { suite: &a.suite, max_len: a.max_len as usize, status, reports: &reports })?)?;
    }
    Ok(exit_for(status))
}

fn pda_dot(m: &Pda) -> String {
    let esc = |s: &str| s.replace('\\', "\\\\").replace('"', "\\\"");
    let mut s = String::from("digraph pda {\n  rankdir=LR;\n  __start [shape=point];\n");
    for q in 0..m.state_count() {
        let shape = if m.finals().contains(&q) { "doublecircle" } else { "circle" };
        s.push_str(&format!("  \"{}\" [shape={shape}];\n", esc(m.state_name(q))));
    }
    s.push_str(&format!("  __start -> \"{}\";\n", esc(m.state_name(m.initial()))));
    for (&(p, a, z), targets) in m.transitions() {
        let a = a.map_or("ε".to_string(), |a| m.alphabet().name(a).to_string());
        let z = z.map_or("ε".to_string(), |z| m.stack_name(z).to_string());
        for (q, push) in targets {
            let push = if push.is_empty() {
                "ε".to_string()
            } else {
                push.iter().map(|&x| m.stack_name(x)).collect::<Vec<_>>().join(" ")
            };
            s.push_str(&format!(
                "  \"{}\" -> \"{}\" [label=\"{}, {} / {}\"];\n",
                esc(m.state_name(p)),
                esc(m.state_name(*q)),
                esc(&a),
                esc(&z),
                esc(&push)
            ));
        }
    }
    s.push_str("}\n");
    s
}

fn cmd_export_dot(a: &ExportDotArgs) -> Outcome {
    let text = if let Some(spec) = &a.backend {
        let radius = a.radius.ok_or_else(|| usage("--backend needs --radius"))?;
        let g = build_schreier_capped(&parse_backend(spec)?, radius, max_vertices()?)?;
        g.to_dot("schreier", a.fold, &BTreeSet::from([g.root()]))
    } else if let Some(p) = &a.graph {
        let (g, finals) = LabelledGraph::parse_text(&read(p)?)?;
        g.to_dot("graph", a.fold, &finals)
    } else if let Some(p) = &a.dfa {
        Dfa::parse_text(&read(p)?)?.to_dot("dfa")
    } else if let Some(p) = &a.pda {
        pda_dot(&Pda::parse_text(&read(p)?)?)
    } else {
        return Err(usage("give one of --backend, --graph, --dfa, --pda"));
    };
    emit(a.out.as_deref(), &text)?;
    Ok(0)
}

const EXAMPLES: &[(&str, &str)] = &[
    ("figure1", "Z2 over {a}: Schreier graph and two automata accepting a^(2n)"),
    ("triangulation", "six-letter worked derivation and its polygon triangulation"),
    ("comb", "comb lattice: certified cone types and a deterministic automaton"),
    ("z2", "plane grid: cone types never stabilize"),
    ("xw", "two-strand graph X_W over the labelled line Y"),
    ("dihedral", "infinite dihedral group lifted from its index-2 cyclic subgroup"),
];

fn cmd_examples(a: &ExamplesArgs) -> Outcome {
    match a.name.as_str() {
        "list" => {
            for (name, about) in EXAMPLES {
                println!("{name:<10} {about}");
            }
            Ok(0)
        }
        "figure1" => {
            let space = gallery::two_element();
            let SchreierAutomaton::Finite(x) = schreier_to_dfa(&space, 4) else {
                return Err(Failure { code: 1, message: "Z2 Schreier graph did not close".into() });
            };
            let (a1, a2) = (dfas::parity_pair(), dfas::parity_cycle());
            for (name, d) in [("schreier", &x), ("a1", &a1), ("a2", &a2)] {
                let lang: Vec<String> = d.language_up_to(6).iter().map(|w| d.graph().alphabet().format_word(w)).collect();
                println!("{name}: {} states, accepts up to length 6: {}", d.state_count(), lang.join(", "));
            }
            let k = kappa_homomorphism(&a2, &space)?;
            print!("kappa on a2:\n{}", k.to_text(&a2));
            if let Some(p) = &a.dot {
                let text = [x.to_dot("schreier"), a1.to_dot("a1"), a2.to_dot("a2")].concat();
                write(p, &text)?;
            }
            Ok(0)
        }
        "triangulation" => {
            let (g, w, d) = grammars::worked_derivation();
            let tri = triangulate(&g, &w, &d)?;
            print!("{}", g.to_cfg().to_text());
            println!("word {}", g.terminals.format_word(&w));
            for x in &tri.diagonals {
                println!("({}, {}, {})", x.from, g.variables[x.var], x.to);
            }
            if let Some(p) = &a.dot {
                write(p, &tri.to_dot(&g))?;
            }
            Ok(0)
        }
        "comb" | "z2" => {
            let (space, radius) = if a.name == "comb" { (gallery::comb(), 2) } else { (parse_backend("rule:z2")?, 8) };
            let g = build_schreier_capped(&space, gallery::build_radius(radius, 1), max_vertices()?)?;
            let t = classify_cone_types(&g, &[g.root()], radius, 1)?;
            println!("{}", status_line(&t));
            print!("{}", growth_table(&t));
            if let Some(p) = &a.dot {
                let small = build_schreier_capped(&space, 4, max_vertices()?)?;
                write(p, &small.to_dot(&a.name, true, &BTreeSet::from([small.root()])))?;
            }
            Ok(0)
        }
        "xw" => {
            let r = verify::transitivity_counterexample_suite(8);
            print_report(&r);
            if let Some(p) = &a.dot {
                let xw = build_schreier_capped(&parse_backend("rule:x_w")?, 6, max_vertices()?)?;
                let y = build_schreier_capped(&parse_backend("rule:y_line")?, 6, max_vertices()?)?;
                let text = [xw.to_dot("x_w", true, &BTreeSet::new()), y.to_dot("y", true, &BTreeSet::new())].concat();
                write(p, &text)?;
            }
            Ok(exit_for(r.status))
        }
        "dihedral" => {
            let (m, table) = dihedral_example()?;
            print!("{}", table.to_text(m.alphabet()));
            let lifted = finite_index_lift(&m, &table)?;
            println!("lifted: {} states, deterministic {}", lifted.state_count(), lifted.is_deterministic());
            if let Some(p) = &a.dot {
                write(p, &pda_dot(&lifted))?;
            }
            Ok(0)
        }
        other => {
            let names: Vec<&str> = EXAMPLES.iter().map(|e| e.0).collect();
            Err(usage(format!("unknown example `{other}`; expected one of {} or list", names.join(", "))))
        }
    }
}

fn cmd_build_graph(a: &BuildGraphArgs) -> Outcome {
    let g = build_schreier_capped(&parse_backend(&a.backend)?, a.radius, max_vertices()?)?;
    let s = g.check_structure();
    eprintln!(
        "{} vertices, {} edges, closed {}, deterministic {}, symmetric {}",
        g.vertex_count(),
        g.edge_count(),
        g.is_closed(),
        s.deterministic,
        s.symmetric
    );
    emit(a.out.as_deref(), &g.to_text())?;
    Ok(0)
}

fn run(cli: Cli) -> Outcome {
    match &cli.command {
        Command::Examples(a) => cmd_examples(a),
        Command::BuildGraph(a) => cmd_build_graph(a),
        Command::Cones(a) => cmd_cones(a),
        Command::BuildPda(a) => cmd_build_pda(a),
        Command::RunPda(a) => cmd_run_pda(a),
        Command::TranslatePda(a) => cmd_translate(a),
        Command::LiftPda(a) => cmd_lift(a),
        Command::PdaToCfg(a) => cmd_pda_to_cfg(a),
        Command::Grammar(a) => cmd_grammar(a),
        Command::Regular(a) => cmd_regular(a),
        Command::Verify(a) => cmd_verify(a),
        Command::ExportDot(a) => cmd_export_dot(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
