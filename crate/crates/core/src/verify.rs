//! Differential testing of constructed acceptors against independent oracles,
//! and the named regression suites.

use std::collections::BTreeSet;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::backends::{build_schreier, word_problem_oracle, CosetSpace, FreeGroupSubgroupBackend, Rule, RuleBackend};
use crate::cones::classify_cone_types;
use crate::error::{Error, Result};
use crate::gallery;
use crate::grammar::{cyk_member, to_cnf, CnfGrammar};
use crate::graph::{LabelledGraph, VertexId};
use crate::pda::{dihedral_example, finite_index_lift, pda_to_cfg, translate_pda, Budget, Pda, Verdict};
use crate::regular::{fixtures as dfas, reduce_dfa, schreier_to_dfa, Dfa, SchreierAutomaton};
use crate::words::{free_reduce, words_of_length, Alphabet, Letter, Word};

/// A membership procedure; `Unknown` only for budget-capped runs.
pub trait Acceptor: Sync {
    fn verdict(&self, w: &[Letter]) -> Verdict;
}

fn decide(b: bool) -> Verdict {
    if b {
        Verdict::Accept
    } else {
        Verdict::Reject
    }
}

impl<F: Fn(&[Letter]) -> bool + Sync> Acceptor for F {
    fn verdict(&self, w: &[Letter]) -> Verdict {
        decide(self(w))
    }
}

impl Acceptor for Dfa {
    fn verdict(&self, w: &[Letter]) -> Verdict {
        decide(self.accepts(w))
    }
}

/// A pushdown automaton run under a fixed budget.
pub struct PdaAcceptor<'a> {
    pub pda: &'a Pda,
    pub budget: Budget,
}

impl Acceptor for PdaAcceptor<'_> {
    fn verdict(&self, w: &[Letter]) -> Verdict {
        self.pda.accepts(w, self.budget)
    }
}

/// CYK membership.
pub struct GrammarAcceptor<'a>(pub &'a CnfGrammar);

impl Acceptor for GrammarAcceptor<'_> {
    fn verdict(&self, w: &[Letter]) -> Verdict {
        decide(cyk_member(self.0, w).is_some())
    }
}

/// `ψ(w) ∈ K`, acting on cosets.
pub struct CosetOracle<'a, S: CosetSpace + ?Sized>(pub &'a S);

impl<S: CosetSpace + ?Sized> Acceptor for CosetOracle<'_, S> {
    fn verdict(&self, w: &[Letter]) -> Verdict {
        decide(word_problem_oracle(self.0, w))
    }
}

/// `y ∈ x^w` in an explored graph; leaving the explored region is unknown.
pub struct PathOracle<'a> {
    pub graph: &'a LabelledGraph,
    pub from: VertexId,
    pub to: VertexId,
}

impl Acceptor for PathOracle<'_> {
    fn verdict(&self, w: &[Letter]) -> Verdict {
        match self.graph.step(self.from, w) {
            Ok(ends) => decide(ends.contains(&self.to)),
            Err(_) => Verdict::Unknown,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled,
    Property,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub word: String,
    pub construction: Verdict,
    pub oracle: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleInfo {
    pub size: usize,
    pub seed: u64,
}

/// A named yes/no property checked by a suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub construction: String,
    pub oracle: String,
    pub max_len: usize,
    pub mode: Mode,
    pub words_tested: u64,
    pub sample: Option<SampleInfo>,
    pub agree: u64,
    pub disagree: u64,
    pub unknown: u64,
    /// Shortlex-least disagreement.
    pub counterexample: Option<Counterexample>,
    /// Shortlex-least word with an unknown verdict.
    pub first_unknown: Option<String>,
    pub checks: Vec<Check>,
    pub status: Status,
}

impl VerificationReport {
    fn finish(mut self) -> Self {
        self.status = if self.disagree > 0 || self.checks.iter().any(|c| !c.passed) {
            Status::Fail
        } else if self.unknown > 0 {
            Status::Unknown
        } else {
            Status::Pass
        };
        self
    }

    /// Report made of property checks only.
    pub fn from_checks(construction: &str, oracle: &str, max_len: usize, checks: Vec<Check>) -> Self {
        let agree = checks.iter().filter(|c| c.passed).count() as u64;
        VerificationReport {
            construction: construction.into(),
            oracle: oracle.into(),
            max_len,
            mode: Mode::Property,
            words_tested: 0,
            sample: None,
            agree,
            disagree: checks.len() as u64 - agree,
            unknown: 0,
            counterexample: None,
            first_unknown: None,
            checks,
            status: Status::Pass,
        }
        .finish()
    }

    /// A construction that could not be built is a failed report.
    pub fn failed(construction: &str, oracle: &str, max_len: usize, error: &Error) -> Self {
        VerificationReport::from_checks(
            construction,
            oracle,
            max_len,
            vec![Check { name: "construct".into(), passed: false, detail: error.to_string() }],
        )
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DiffOptions {
    /// Word count above which words are sampled instead of enumerated.
    pub sample_threshold: u64,
    pub sample_size: usize,
    pub seed: u64,
    /// Never sample.
    pub exhaustive: bool,
}

impl Default for DiffOptions {
    fn default() -> Self {
        DiffOptions { sample_threshold: 1_000_000, sample_size: 200_000, seed: 0x5eed, exhaustive: false }
    }
}

#[derive(Default)]
struct Tally {
    agree: u64,
    disagree: u64,
    unknown: u64,
    /// (length, rank) keys give shortlex order.
    counterexample: Option<((usize, u128), Verdict, Verdict)>,
    first_unknown: Option<(usize, u128)>,
}

impl Tally {
    fn add(mut self, key: (usize, u128), a: Verdict, b: Verdict) -> Self {
        if a == Verdict::Unknown || b == Verdict::Unknown {
            self.unknown += 1;
            if self.first_unknown.map_or(true, |k| key < k) {
                self.first_unknown = Some(key);
            }
        } else if a == b {
            self.agree += 1;
        } else {
            self.disagree += 1;
            if self.counterexample.map_or(true, |c| key < c.0) {
                self.counterexample = Some((key, a, b));
            }
        }
        self
    }

    fn merge(self, other: Tally) -> Tally {
        let pick = |x: Option<((usize, u128), Verdict, Verdict)>, y: Option<((usize, u128), Verdict, Verdict)>| match (x, y) {
            (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
            (a, b) => a.or(b),
        };
        Tally {
            agree: self.agree + other.agree,
            disagree: self.disagree + other.disagree,
            unknown: self.unknown + other.unknown,
            counterexample: pick(self.counterexample, other.counterexample),
            first_unknown: match (self.first_unknown, other.first_unknown) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            },
        }
    }
}

fn decode(k: usize, n: usize, mut idx: u128) -> Word {
    let mut w = vec![Letter(0); n];
    for slot in w.iter_mut().rev() {
        *slot = Letter((idx % k as u128) as u16);
        idx /= k as u128;
    }
    w
}

fn rank(k: usize, w: &[Letter]) -> u128 {
    w.iter().fold(0u128, |r, a| r * k as u128 + a.0 as u128)
}

/// Number of words of length `≤ max_len` over `k` letters, saturating.
pub fn word_count(k: usize, max_len: usize) -> u128 {
    (0..=max_len).fold(0u128, |s, n| s.saturating_add((k as u128).saturating_pow(n as u32)))
}

/// Compares two acceptors on every word up to `max_len`, or on a uniform
/// sample when there are more than `opts.sample_threshold` words.
pub fn differential_test(
    construction: &str,
    a: &dyn Acceptor,
    oracle: &str,
    b: &dyn Acceptor,
    alphabet: &Alphabet,
    max_len: usize,
    opts: &DiffOptions,
) -> VerificationReport {
    let k = alphabet.len();
    let total = word_count(k, max_len);
    let sampled = !opts.exhaustive && total > opts.sample_threshold as u128;
    let check = |key: (usize, u128), w: &[Letter]| Tally::default().add(key, a.verdict(w), b.verdict(w));
    let (tally, tested, sample) = if sampled {
        let words = sample_words(k, max_len, opts.sample_size, opts.seed);
        let tally = words
            .par_iter()
            .map(|w| check((w.len(), rank(k, w)), w))
            .reduce(Tally::default, Tally::merge);
        (tally, words.len() as u64, Some(SampleInfo { size: words.len(), seed: opts.seed }))
    } else {
        let mut tally = Tally::default();
        for n in 0..=max_len {
            let count = (k as u128).pow(n as u32);
            let part = if count < 64 {
                words_of_length(k, n).enumerate().map(|(i, w)| check((n, i as u128), &w)).fold(Tally::default(), Tally::merge)
            } else {
                (0..count as u64)
                    .into_par_iter()
                    .map(|i| check((n, i as u128), &decode(k, n, i as u128)))
                    .reduce(Tally::default, Tally::merge)
            };
            tally = tally.merge(part);
        }
        (tally, total as u64, None)
    };
    let show = |(n, i): (usize, u128)| alphabet.format_word(&decode(k, n, i));
    VerificationReport {
        construction: construction.into(),
        oracle: oracle.into(),
        max_len,
        mode: if sampled { Mode::Sampled } else { Mode::Exhaustive },
        words_tested: tested,
        sample,
        agree: tally.agree,
        disagree: tally.disagree,
        unknown: tally.unknown,
        counterexample: tally.counterexample.map(|(key, x, y)| Counterexample { word: show(key), construction: x, oracle: y }),
        first_unknown: tally.first_unknown.map(show),
        checks: Vec::new(),
        status: Status::Pass,
    }
    .finish()
}

/// Distinct words drawn uniformly from all words of length `≤ max_len`,
/// returned in shortlex order.
pub fn sample_words(k: usize, max_len: usize, size: usize, seed: u64) -> Vec<Word> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = (0..=max_len).map(|n| (k as f64).powi(n as i32)).collect();
    let lengths = WeightedIndex::new(&weights).expect("positive weights");
    let mut out = BTreeSet::new();
    for _ in 0..size {
        let n = lengths.sample(&mut rng);
        let w: Word = (0..n).map(|_| Letter(rng.gen_range(0..k) as u16)).collect();
        out.insert((n, w));
    }
    out.into_iter().map(|(_, w)| w).collect()
}

/// Budget used for synthesized automata in the suites.
pub fn suite_budget(max_len: usize) -> Budget {
    Budget::new(100_000, (max_len + 4).max(14))
}

pub const SUITES: &[&str] = &["figure1", "comb", "z2", "xw", "dihedral", "free-subgroup"];

/// Constructions claiming a language identity; each must appear in some suite.
pub const CONSTRUCTIONS: &[&str] = &[
    "schreier_to_dfa",
    "reduce_dfa",
    "build_pda_from_cones",
    "pda_to_cfg",
    "translate_pda",
    "finite_index_lift",
    "classify_cone_types",
];

/// Runs a suite by name (`all` runs every suite in order).
pub fn run_suite(name: &str, max_len: usize, opts: &DiffOptions) -> Result<Vec<VerificationReport>> {
    match name {
        "all" => {
            let mut out = Vec::new();
            for s in SUITES {
                out.extend(run_suite(s, max_len, opts)?);
            }
            Ok(out)
        }
        "figure1" => Ok(two_element_suite(max_len, opts)),
        "comb" => Ok(synthesis_suite(&["comb"], max_len, opts)),
        "z2" => Ok(vec![z2_report()]),
        "xw" => Ok(xw_reports(max_len)),
        "dihedral" => Ok(vec![dihedral_report(max_len, opts)]),
        "free-subgroup" => Ok(free_subgroup_suite(max_len, opts)),
        other => Err(Error::Unsupported(format!("unknown suite `{other}`; expected one of {} or all", SUITES.join(", ")))),
    }
}

/// Overall status: any failure fails, otherwise any unknown is unknown.
pub fn overall(reports: &[VerificationReport]) -> Status {
    if reports.iter().any(|r| r.status == Status::Fail) {
        Status::Fail
    } else if reports.iter().any(|r| r.status == Status::Unknown) {
        Status::Unknown
    } else {
        Status::Pass
    }
}

fn two_element_suite(max_len: usize, opts: &DiffOptions) -> Vec<VerificationReport> {
    let space = gallery::two_element();
    let alphabet = space.alphabet().clone();
    let oracle = CosetOracle(&space);
    let mut out = Vec::new();
    match schreier_to_dfa(&space, 4) {
        SchreierAutomaton::Finite(d) => {
            out.push(differential_test("schreier_to_dfa:z2", &d, "coset:z2", &oracle, &alphabet, max_len, opts));
        }
        SchreierAutomaton::Witness(w) => out.push(VerificationReport::from_checks(
            "schreier_to_dfa:z2",
            "closure",
            max_len,
            vec![Check { name: "closes".into(), passed: false, detail: format!("{w:?}") }],
        )),
    }
    out.push(differential_test("dfa:parity-pair", &dfas::parity_pair(), "coset:z2", &oracle, &alphabet, max_len, opts));
    out.push(differential_test("dfa:parity-cycle", &dfas::parity_cycle(), "coset:z2", &oracle, &alphabet, max_len, opts));
    match reduce_dfa(&dfas::parity_cycle()) {
        Ok(r) => out.push(differential_test("reduce_dfa:parity-cycle", &r, "coset:z2", &oracle, &alphabet, max_len, opts)),
        Err(e) => out.push(VerificationReport::failed("reduce_dfa:parity-cycle", "coset:z2", max_len, &e)),
    }
    // symmetric letters a, a^ both mapping to the generator
    let sym = crate::backends::FiniteGroupBackend::cyclic_symmetric(2).expect("valid order");
    if let SchreierAutomaton::Finite(d) = schreier_to_dfa(&sym, 4) {
        out.push(differential_test(
            "schreier_to_dfa:z2-symmetric",
            &d,
            "even-length",
            &|w: &[Letter]| w.len() % 2 == 0,
            sym.alphabet(),
            max_len.min(12),
            opts,
        ));
    }
    out.extend(synthesis_suite(&["z2"], max_len, opts));
    let g = build_schreier(&space, 2);
    if let Ok((_, m)) = crate::pda::synthesize_from_graph(&g, &[g.root()], 0, 1, g.root(), g.root()) {
        if let SchreierAutomaton::Finite(d) = schreier_to_dfa(&space, 4) {
            let pda = PdaAcceptor { pda: &m, budget: suite_budget(max_len) };
            out.push(differential_test("build_pda_from_cones:z2", &pda, "schreier_to_dfa:z2", &d, &alphabet, max_len, opts));
        }
        let cfg = pda_to_cfg(&m);
        match to_cnf(&cfg) {
            Ok(c) => out.push(differential_test("pda_to_cfg:z2", &GrammarAcceptor(&c), "coset:z2", &oracle, &alphabet, max_len, opts)),
            Err(e) => out.push(VerificationReport::failed("pda_to_cfg:z2", "coset:z2", max_len, &e)),
        }
    }
    out
}

/// Synthesized automata of the named gallery fixtures against coset oracles.
pub fn synthesis_suite(names: &[&str], max_len: usize, opts: &DiffOptions) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    for fx in gallery::synthesis_fixtures().into_iter().filter(|f| names.contains(&f.name)) {
        let construction = format!("build_pda_from_cones:{}", fx.name);
        let oracle_id = format!("coset:{}", fx.name);
        match fx.synthesize() {
            Ok((_, _, m)) => {
                let pda = PdaAcceptor { pda: &m, budget: suite_budget(max_len) };
                let mut r = differential_test(
                    &construction,
                    &pda,
                    &oracle_id,
                    &CosetOracle(&fx.space),
                    fx.space.alphabet(),
                    max_len,
                    opts,
                );
                r.checks.push(Check {
                    name: "deterministic".into(),
                    passed: m.is_deterministic(),
                    detail: format!("{} states, {} transitions", m.state_count(), m.transition_count()),
                });
                out.push(r.finish());
            }
            Err(e) => out.push(VerificationReport::failed(&construction, &oracle_id, max_len, &e)),
        }
    }
    out
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), passed, detail: detail.into() }
}

/// The plane grid is not context-free: class counts keep growing; the line is.
pub fn z2_report() -> VerificationReport {
    let mut checks = Vec::new();
    let grid = build_schreier(&RuleBackend::new(Rule::Z2), gallery::build_radius(8, 1));
    match classify_cone_types(&grid, &[grid.root()], 8, 1) {
        Ok(t) => {
            checks.push(check("z2-unstable", !t.is_certified(), format!("{:?}", t.status)));
            let growth = &t.growth[1..=8.min(t.growth.len() - 1)];
            let increasing = growth.len() == 8 && growth.windows(2).all(|p| p[0] < p[1]);
            checks.push(check("z2-growth-increasing", increasing, format!("{growth:?}")));
        }
        Err(e) => checks.push(check("z2-classify", false, e.to_string())),
    }
    let line = build_schreier(&RuleBackend::new(Rule::Line), gallery::build_radius(2, 1));
    match classify_cone_types(&line, &[line.root()], 2, 1) {
        Ok(t) => checks.push(check("line-certified", t.is_certified(), format!("{} types", t.type_count()))),
        Err(e) => checks.push(check("line-classify", false, e.to_string())),
    }
    VerificationReport::from_checks("classify_cone_types:z2", "growth", 8, checks)
}

fn strand_key(name: &str) -> Option<(i64, i64)> {
    RuleBackend::parse_key(name)
}

/// Two-strand graph `X_W` against the line `Y`: classification, the 2-to-1
/// quotient, and `K_W ⊂ K` of index 2 on loop words.
pub fn transitivity_counterexample_suite(max_len: usize) -> VerificationReport {
    let mut checks = Vec::new();
    let xw_space = RuleBackend::new(Rule::XW(crate::backends::quadratic_w()));
    let y_space = RuleBackend::new(Rule::YLine);
    let xw = build_schreier(&xw_space, gallery::build_radius(8, 1));
    match classify_cone_types(&xw, &[xw.root()], 8, 1) {
        Ok(t) => checks.push(check("xw-not-stable-at-8", !t.is_certified(), format!("{:?}; growth {:?}", t.status, t.growth))),
        Err(e) => checks.push(check("xw-classify", false, e.to_string())),
    }
    let y = build_schreier(&y_space, gallery::build_radius(2, 1));
    match classify_cone_types(&y, &[y.root()], 2, 1) {
        Ok(t) => checks.push(check("y-certified", t.is_certified(), format!("{} types", t.type_count()))),
        Err(e) => checks.push(check("y-classify", false, e.to_string())),
    }

    // quotient (k, l) ↦ k on the radius-8 ball
    let ball_x = build_schreier(&xw_space, 8);
    let ball_y = build_schreier(&y_space, 8);
    let project = |v: VertexId| -> Option<VertexId> {
        let (k, _) = strand_key(ball_x.name(v))?;
        ball_y.vertex(&format!("({k},0)"))
    };
    let mut edges = 0usize;
    let mut label_preserving = true;
    for x in ball_x.vertices() {
        for &(a, z) in ball_x.out_edges(x) {
            edges += 1;
            match (project(x), project(z)) {
                (Some(px), Some(pz)) if ball_y.has_edge(px, a, pz) => {}
                _ => label_preserving = false,
            }
        }
    }
    checks.push(check("quotient-label-preserving", label_preserving, format!("{edges} edges in the radius-8 ball")));
    let two_to_one = ball_y.vertices().all(|v| {
        let k = strand_key(ball_y.name(v)).map(|p| p.0);
        ball_x.vertices().filter(|&x| strand_key(ball_x.name(x)).map(|p| p.0) == k).count() == 2
    });
    checks.push(check("quotient-two-to-one", two_to_one, format!("{} vertices over {}", ball_x.vertex_count(), ball_y.vertex_count())));

    // loop words: every X_W loop is a Y loop; Y loops split into two cosets
    let len = max_len.min(10);
    let mut x_loops = 0u64;
    let mut y_loops = 0u64;
    let mut contained = true;
    let mut other_strand = 0u64;
    for w in crate::words::words_up_to(4, len) {
        let in_y = word_problem_oracle(&y_space, &w);
        let end = xw_space.act_word(&xw_space.root(), &w);
        if end == (0, 0) {
            x_loops += 1;
            contained &= in_y;
        }
        if in_y {
            y_loops += 1;
            if end == (0, 1) {
                other_strand += 1;
            }
        }
    }
    checks.push(check("kw-contained-in-k", contained, format!("{x_loops} loop words of X_W up to length {len}")));
    checks.push(check(
        "kw-index-two",
        x_loops + other_strand == y_loops && other_strand > 0 && x_loops > 0,
        format!("{y_loops} loop words of Y = {x_loops} on strand 0 + {other_strand} on strand 1"),
    ));
    VerificationReport::from_checks("transitivity-counterexamples", "rule-traces", len, checks)
}

fn xw_reports(max_len: usize) -> Vec<VerificationReport> {
    vec![transitivity_counterexample_suite(max_len)]
}

/// `D∞ = ⟨a, b | a², b²⟩`: trivial iff cancelling equal neighbours empties the word.
pub fn dihedral_trivial(w: &[Letter]) -> bool {
    let mut stack: Vec<Letter> = Vec::new();
    for &x in w {
        if stack.last() == Some(&x) {
            stack.pop();
        } else {
            stack.push(x);
        }
    }
    stack.is_empty()
}

fn dihedral_report(max_len: usize, opts: &DiffOptions) -> VerificationReport {
    let built = dihedral_example().and_then(|(m, table)| finite_index_lift(&m, &table).map(|l| (l, table)));
    match built {
        Ok((lifted, table)) => {
            let pda = PdaAcceptor { pda: &lifted, budget: suite_budget(max_len) };
            let mut r = differential_test(
                "finite_index_lift:dihedral",
                &pda,
                "dihedral-normal-form",
                &dihedral_trivial,
                &table.alphabet,
                max_len,
                opts,
            );
            r.checks.push(check("deterministic", lifted.is_deterministic(), format!("{} states", lifted.state_count())));
            r.finish()
        }
        Err(e) => VerificationReport::failed("finite_index_lift:dihedral", "dihedral-normal-form", max_len, &e),
    }
}

/// Translator input: the free-group automaton and `u(c) = aa`, `u(c^) = a^a^`,
/// `u(d) = b`, `u(d^) = b^`.
pub fn squares_translation() -> Result<(Pda, Alphabet, Vec<Word>)> {
    let (_, _, m) = gallery::synthesis_fixtures()
        .into_iter()
        .find(|f| f.name == "f2-tree")
        .expect("gallery has the free tree")
        .synthesize()?;
    let big = m.alphabet().clone();
    let small = Alphabet::free(&["c", "d"]);
    let u = vec![big.parse_word("a a")?, big.parse_word("a^ a^")?, big.parse_word("b")?, big.parse_word("b^")?];
    let t = translate_pda(&m, &small, &u)?;
    Ok((t, small, u))
}

fn free_subgroup_suite(max_len: usize, opts: &DiffOptions) -> Vec<VerificationReport> {
    let mut out = synthesis_suite(&["f2-tree", "f2-cyclic", "f2-index-2"], max_len, opts);
    let len = max_len.min(8);
    match squares_translation() {
        Ok((t, small, u)) => {
            let free = FreeGroupSubgroupBackend::new(Alphabet::free(&["a", "b"]), &[]).expect("symmetric alphabet");
            let oracle = |w: &[Letter]| {
                let image: Word = w.iter().flat_map(|b| u[b.index()].clone()).collect();
                word_problem_oracle(&free, &image)
            };
            let pda = PdaAcceptor { pda: &t, budget: suite_budget(2 * len) };
            let mut r = differential_test("translate_pda:squares", &pda, "folding", &oracle, &small, len, opts);
            r.checks.push(check("deterministic", t.is_deterministic(), format!("{} states", t.state_count())));
            out.push(r.finish());
        }
        Err(e) => out.push(VerificationReport::failed("translate_pda:squares", "folding", len, &e)),
    }
    // grammar of the free-group automaton, on short words (CYK is cubic)
    let tree = gallery::free_tree();
    if let Some(Ok((_, _, m))) = gallery::synthesis_fixtures().into_iter().find(|f| f.name == "f2-tree").map(|f| f.synthesize()) {
        let glen = max_len.min(6);
        match to_cnf(&pda_to_cfg(&m)) {
            Ok(c) => out.push(differential_test(
                "pda_to_cfg:f2-tree",
                &GrammarAcceptor(&c),
                "free-reduction",
                &|w: &[Letter]| free_reduce(tree.alphabet(), w).is_empty(),
                tree.alphabet(),
                glen,
                opts,
            )),
            Err(e) => out.push(VerificationReport::failed("pda_to_cfg:f2-tree", "free-reduction", glen, &e)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_acceptors_agree() {
        let alpha = Alphabet::plain(&["a", "b"]).unwrap();
        let f = |w: &[Letter]| w.len() % 3 == 0;
        let r = differential_test("f", &f, "f", &f, &alpha, 8, &DiffOptions::default());
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.words_tested, 511);
        assert_eq!(r.agree, 511);
    }

    #[test]
    fn minimal_counterexample_is_shortlex_least() {
        let alpha = Alphabet::plain(&["a", "b"]).unwrap();
        let a = |w: &[Letter]| w.iter().filter(|x| x.0 == 1).count() < 2;
        let b = |_: &[Letter]| true;
        let r = differential_test("a", &a, "b", &b, &alpha, 9, &DiffOptions::default());
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.counterexample.unwrap().word, "b b");
        // words of length ≤ 9 with at least two b's
        let expected: u64 = (0..=9u32).map(|n| (1u64 << n) - 1 - n as u64).sum();
        assert_eq!(r.disagree, expected);
    }

    #[test]
    fn unknowns_are_reported() {
        let alpha = Alphabet::plain(&["a"]).unwrap();
        struct Half;
        impl Acceptor for Half {
            fn verdict(&self, w: &[Letter]) -> Verdict {
                if w.len() > 3 {
                    Verdict::Unknown
                } else {
                    Verdict::Accept
                }
            }
        }
        let yes = |_: &[Letter]| true;
        let r = differential_test("half", &Half, "yes", &yes, &alpha, 6, &DiffOptions::default());
        assert_eq!((r.agree, r.unknown, r.status), (4, 3, Status::Unknown));
        assert_eq!(r.first_unknown.as_deref(), Some("a a a a"));
    }

    #[test]
    fn sampling_above_threshold() {
        let alpha = Alphabet::free(&["a", "b"]);
        let opts = DiffOptions { sample_threshold: 1000, sample_size: 500, seed: 7, exhaustive: false };
        let f = |w: &[Letter]| w.len() % 2 == 0;
        let r = differential_test("f", &f, "f", &f, &alpha, 10, &opts);
        assert_eq!(r.mode, Mode::Sampled);
        let s = r.sample.clone().unwrap();
        assert_eq!(s.seed, 7);
        assert!(s.size <= 500 && s.size > 400);
        let again = differential_test("f", &f, "f", &f, &alpha, 10, &opts);
        assert_eq!(again, r);
        let lens: Vec<usize> = sample_words(4, 10, 500, 7).iter().map(Vec::len).collect();
        assert!(lens.windows(2).all(|p| p[0] <= p[1]));
        // nearly all mass sits on the longest words
        assert!(lens.iter().filter(|&&n| n == 10).count() > 300);
    }

    #[test]
    fn registry_covers_constructions() {
        let reports = run_suite("all", 6, &DiffOptions::default()).unwrap();
        for c in CONSTRUCTIONS {
            assert!(
                reports.iter().any(|r| r.construction.split(':').next() == Some(*c)),
                "no suite covers {c}"
            );
        }
        for r in &reports {
            assert_eq!(r.status, Status::Pass, "{r:?}");
        }
        assert!(run_suite("nope", 4, &DiffOptions::default()).is_err());
    }

    #[test]
    fn report_serializes() {
        let reports = run_suite("dihedral", 5, &DiffOptions::default()).unwrap();
        let json = serde_json::to_value(&reports).unwrap();
        assert_eq!(json[0]["status"], "pass");
        assert_eq!(json[0]["mode"], "exhaustive");
        assert_eq!(json[0]["words_tested"], 63);
    }
}
