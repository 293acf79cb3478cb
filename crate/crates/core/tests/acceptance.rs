//! Acceptance run: one line per criterion with its time limit.
//!
//! Built with `harness = false`; exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use conepda_core::backends::{
    build_schreier, spanning_tree_generators, word_problem_oracle, CosetSpace, FiniteGroupBackend,
    FreeGroupSubgroupBackend,
};
use conepda_core::grammar::{
    cyk_member, cyk_tree, diagonal_distance_check, diagonal_distance_check_with, fixtures, min_yield, to_cnf, triangulate,
    CnfGrammar, Derivation,
};
use conepda_core::pda::{synthesize_from_graph, Budget, Verdict};
use conepda_core::regular::{self, finite_index_check, kappa_homomorphism, schreier_to_dfa, IndexCheck, SchreierAutomaton};
use conepda_core::verify::{self, differential_test, DiffOptions, PathOracle, PdaAcceptor, Status};
use conepda_core::words::{free_reduce, words_up_to, Alphabet, Letter, Word};
use conepda_core::{gallery, LabelledGraph};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn exhaustive() -> DiffOptions {
    DiffOptions { exhaustive: true, ..DiffOptions::default() }
}

fn report_ok(r: &verify::VerificationReport) -> Result<(), String> {
    ensure(r.status == Status::Pass && r.unknown == 0, || {
        format!(
            "{} vs {}: {} disagree, {} unknown, counterexample {:?}, checks {:?}",
            r.construction, r.oracle, r.disagree, r.unknown, r.counterexample, r.checks
        )
    })
}

fn dfa_of(space: &impl CosetSpace, cap: usize) -> Result<regular::Dfa, String> {
    match schreier_to_dfa(space, cap) {
        SchreierAutomaton::Finite(d) => Ok(d),
        SchreierAutomaton::Witness(w) => Err(format!("no closure: {w:?}")),
    }
}

fn two_element_regression() -> Outcome {
    let z2 = FiniteGroupBackend::cyclic_plain(2).map_err(|e| e.to_string())?;
    let g = build_schreier(&z2, 4);
    ensure(g.is_closed() && g.vertex_count() == 2, || format!("{} vertices", g.vertex_count()))?;
    let d = dfa_of(&z2, 4)?;
    let (_, m) = synthesize_from_graph(&g, &[g.root()], 0, 1, g.root(), g.root()).map_err(|e| e.to_string())?;
    let expected: BTreeSet<Word> = (0..=6).step_by(2).map(|n| vec![Letter(0); n]).collect();
    let dfa_lang: BTreeSet<Word> = words_up_to(1, 6).filter(|w| d.accepts(w)).collect();
    let pda_lang: BTreeSet<Word> =
        words_up_to(1, 6).filter(|w| m.accepts(w, Budget::default()) == Verdict::Accept).collect();
    ensure(dfa_lang == expected && pda_lang == expected, || "language over {a} differs".into())?;

    // with the symmetric letters a, a^ both sent to t: all 127 words of length ≤ 6
    let sym = FiniteGroupBackend::cyclic_symmetric(2).map_err(|e| e.to_string())?;
    let gs = build_schreier(&sym, 4);
    let ds = dfa_of(&sym, 4)?;
    let (_, ms) = synthesize_from_graph(&gs, &[gs.root()], 0, 1, gs.root(), gs.root()).map_err(|e| e.to_string())?;
    let mut words = 0;
    for w in words_up_to(2, 6) {
        words += 1;
        let even = w.len() % 2 == 0;
        ensure(ds.accepts(&w) == even, || format!("dfa on {}", sym.alphabet().format_word(&w)))?;
        let v = ms.accepts(&w, Budget::default());
        ensure(v == if even { Verdict::Accept } else { Verdict::Reject }, || format!("pda on {}", sym.alphabet().format_word(&w)))?;
        if w.iter().all(|a| a.0 == 0) {
            ensure(even == expected.contains(&w), || "a-words differ".into())?;
        }
    }
    ensure(words == 127 && gs.vertex_count() == 2, || format!("{words} words"))?;
    Ok(format!("2 states; DFA and PDA accept exactly a^(2n), n <= 3, among {words} words"))
}

fn prop_regular() -> Outcome {
    let alphabet = Alphabet::free(&["a"]);
    for k in [2usize, 3, 5] {
        let space = FreeGroupSubgroupBackend::new(alphabet.clone(), &[vec![Letter(0); k]]).map_err(|e| e.to_string())?;
        let check = finite_index_check(&space, 8);
        ensure(check == IndexCheck::Finite { index: k }, || format!("k={k}: {check:?}"))?;
        let d = dfa_of(&space, 8)?;
        for w in words_up_to(2, 10) {
            let sum: i64 = w.iter().map(|a| if a.0 == 0 { 1 } else { -1 }).sum();
            ensure(d.accepts(&w) == (sum.rem_euclid(k as i64) == 0), || format!("k={k} on {}", alphabet.format_word(&w)))?;
        }
    }
    let f2a = gallery::free_cyclic();
    let check = finite_index_check(&f2a, 8);
    ensure(matches!(check, IndexCheck::Unknown { .. }), || format!("(F2,<a>): {check:?}"))?;
    let fx = gallery::synthesis_fixtures().into_iter().find(|f| f.name == "f2-cyclic").unwrap();
    let (_, table, _) = fx.synthesize().map_err(|e| e.to_string())?;
    ensure(table.is_certified(), || format!("{:?}", table.status))?;
    Ok(format!("finite(2), finite(3), finite(5) exact to length 10; (F2,<a>) unknown at cap 8, {} cone types", table.type_count()))
}

fn kappa() -> Outcome {
    let a2 = regular::fixtures::parity_cycle();
    let z2 = FiniteGroupBackend::cyclic_plain(2).map_err(|e| e.to_string())?;
    let k = kappa_homomorphism(&a2, &z2).map_err(|e| e.to_string())?;
    ensure(k.root_preserved, || "root not preserved".into())?;
    ensure(k.homomorphism, || "not label preserving".into())?;
    ensure(k.surjective, || "not surjective".into())?;
    ensure(!k.injective, || "injective".into())?;
    ensure(k.schreier.vertex_count() == 2, || "schreier graph size".into())?;
    Ok("surjective, non-injective, label-preserving, o -> K".into())
}

fn synthesis() -> Outcome {
    let mut summary = Vec::new();
    for fx in gallery::synthesis_fixtures() {
        let (_, table, m) = fx.synthesize().map_err(|e| format!("{}: {e}", fx.name))?;
        ensure(table.is_certified(), || format!("{}: {:?}", fx.name, table.status))?;
        ensure(m.is_deterministic(), || format!("{} is not deterministic", fx.name))?;
        let graph = build_schreier(&fx.space, 10);
        let oracle = PathOracle { graph: &graph, from: graph.root(), to: graph.root() };
        let pda = PdaAcceptor { pda: &m, budget: Budget::new(100_000, 14) };
        let r = differential_test(fx.name, &pda, "graph-walk", &oracle, fx.space.alphabet(), 10, &exhaustive());
        report_ok(&r)?;
        summary.push(format!("{} ({} words)", fx.name, r.words_tested));
    }
    Ok(summary.join(", "))
}

fn translator() -> Outcome {
    let (t, small, u) = verify::squares_translation().map_err(|e| e.to_string())?;
    ensure(t.is_deterministic(), || "translated automaton is not deterministic".into())?;
    // folding oracle for H = ⟨a², b⟩ and K ∩ H = {1}
    let big = Alphabet::free(&["a", "b"]);
    let h = FreeGroupSubgroupBackend::new(big.clone(), &[big.parse_word("a a").unwrap(), big.parse_word("b").unwrap()])
        .map_err(|e| e.to_string())?;
    let k = FreeGroupSubgroupBackend::new(big.clone(), &[]).map_err(|e| e.to_string())?;
    let image = |w: &[Letter]| -> Word { w.iter().flat_map(|b| u[b.index()].clone()).collect() };
    for w in words_up_to(4, 8).step_by(97) {
        ensure(h.contains(&image(&w)), || "image outside H".into())?;
    }
    let oracle = |w: &[Letter]| word_problem_oracle(&k, &image(w));
    let pda = PdaAcceptor { pda: &t, budget: Budget::new(100_000, 20) };
    let r = differential_test("translate_pda", &pda, "folding", &oracle, &small, 8, &exhaustive());
    report_ok(&r)?;
    Ok(format!("{} words agree, deterministic", r.agree))
}

fn lift() -> Outcome {
    let r = verify::run_suite("dihedral", 8, &exhaustive()).map_err(|e| e.to_string())?;
    report_ok(&r[0])?;
    Ok(format!("{} words agree with the dihedral normal form", r[0].agree))
}

fn random_members(g: &CnfGrammar, rng: &mut ChaCha8Rng, count: usize, max_len: usize) -> Vec<Word> {
    let k = g.terminals.len();
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < count && tries < 2_000_000 {
        tries += 1;
        let n = rng.gen_range(2..=max_len);
        let w: Word = (0..n).map(|_| Letter(rng.gen_range(0..k) as u16)).collect();
        if cyk_member(g, &w).is_some() {
            out.push(w);
        }
    }
    out
}

fn triangulations() -> Outcome {
    let (g, w, d) = fixtures::worked_derivation();
    let tri = triangulate(&g, &w, &d).map_err(|e| e.to_string())?;
    let got: BTreeSet<(usize, String, usize)> =
        tri.diagonals.iter().map(|x| (x.from, g.variables[x.var].clone(), x.to)).collect();
    let want: BTreeSet<(usize, String, usize)> =
        [(0, "T1", 2), (2, "T^1", 6), (3, "T^2", 6), (3, "T3", 5)].iter().map(|&(a, v, b)| (a, v.to_string(), b)).collect();
    ensure(got == want, || format!("diagonals {got:?}"))?;
    ensure(tri.is_valid(), || "worked example not a triangulation".into())?;

    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let grammars = [fixtures::even_a(), fixtures::dyck_f2(), fixtures::zero_sum(), fixtures::comb_loops()];
    let mut tested = 0;
    for cfg in &grammars {
        let g = to_cnf(cfg).map_err(|e| e.to_string())?;
        for w in random_members(&g, &mut rng, 50, 10) {
            let d = cyk_member(&g, &w).ok_or("member lost")?;
            let tri = triangulate(&g, &w, &d).map_err(|e| e.to_string())?;
            ensure(tri.is_valid(), || format!("invalid triangulation of {}", g.terminals.format_word(&w)))?;
            for x in &tri.diagonals {
                ensure(cyk_tree(&g, x.var, &w[x.from..x.to]).is_some(), || "diagonal subword not derivable".into())?;
            }
            let tree = cyk_tree(&g, g.start, &w).ok_or("no tree")?;
            let left = triangulate(&g, &w, &Derivation::leftmost(&tree)).map_err(|e| e.to_string())?;
            ensure(left == tri, || "leftmost and rightmost replays differ".into())?;
            tested += 1;
        }
    }
    ensure(tested == 200, || format!("only {tested} words sampled"))?;
    Ok(format!("worked example exact; {tested} random words triangulated"))
}

fn distance_bounds() -> Outcome {
    let cases: Vec<(&str, LabelledGraph, CnfGrammar)> = vec![
        ("z2", build_schreier(&gallery::two_element(), 3), to_cnf(&fixtures::even_a()).map_err(|e| e.to_string())?),
        ("f2-tree", build_schreier(&gallery::free_tree(), 6), to_cnf(&fixtures::dyck_f2()).map_err(|e| e.to_string())?),
        ("comb", build_schreier(&gallery::comb(), 6), to_cnf(&fixtures::comb_loops()).map_err(|e| e.to_string())?),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    let mut failures = 0usize;
    let mut killing = 0usize;
    let mut variables = 0usize;
    for (name, graph, g) in &cases {
        let words = random_members(g, &mut rng, 50, 10);
        ensure(words.len() == 50, || format!("{name}: {} loop words", words.len()))?;
        for w in &words {
            ensure(word_problem_oracle_graph(graph, w), || format!("{name}: not a loop"))?;
            let ok = diagonal_distance_check(g, graph, graph.root(), w).map_err(|e| e.to_string())?;
            ensure(ok, || format!("{name}: bound violated on {}", g.terminals.format_word(w)))?;
        }
        let m = min_yield(g);
        let bounds: Vec<usize> = (0..g.variables.len()).map(|t| m.of(t)).collect();
        let lowered: Vec<usize> = bounds.iter().map(|b| b.saturating_sub(1)).collect();
        for w in &words {
            if !diagonal_distance_check_with(g, graph, graph.root(), w, &lowered).map_err(|e| e.to_string())? {
                failures += 1;
            }
        }
        // single-variable mutations, reported for information
        for t in 0..bounds.len() {
            if bounds[t] == 0 {
                continue;
            }
            variables += 1;
            let mut one = bounds.clone();
            one[t] -= 1;
            let mut killed = false;
            for w in &words {
                if !diagonal_distance_check_with(g, graph, graph.root(), w, &one).map_err(|e| e.to_string())? {
                    killed = true;
                    break;
                }
            }
            killing += usize::from(killed);
        }
    }
    ensure(failures > 0, || "lowering every m(T) by one produced no failure".into())?;
    Ok(format!(
        "150 loop words within bounds; lowered bounds fail on {failures} words; single-variable mutations detected for {killing}/{variables} variables"
    ))
}

fn word_problem_oracle_graph(g: &LabelledGraph, w: &[Letter]) -> bool {
    g.step_det(g.root(), w).ok().flatten() == Some(g.root())
}

fn negative_examples() -> Outcome {
    let z2 = verify::z2_report();
    report_ok(&z2)?;
    let xw = verify::transitivity_counterexample_suite(10);
    report_ok(&xw)?;
    let growth = z2.checks.iter().find(|c| c.name == "z2-growth-increasing").map(|c| c.detail.clone()).unwrap_or_default();
    Ok(format!("Z^2 unstable, class counts {growth}; X_W not stable at 8; Y certified; quotient 2-to-1 and label preserving"))
}

fn spanning_trees() -> Outcome {
    let mut notes = Vec::new();
    // 2-cycle over {a, a^}, and the 2-vertex graph where a and b both swap
    let one = FiniteGroupBackend::cyclic_symmetric(2).map_err(|e| e.to_string())?;
    let two = FiniteGroupBackend::new(Alphabet::free(&["a", "b"]), vec![vec![0, 1], vec![1, 0]], &[0], vec![1, 1, 1, 1])
        .map_err(|e| e.to_string())?;
    for (name, space) in [("one generator", one), ("two generators", two)] {
        let g = build_schreier(&space, 4);
        let gens = spanning_tree_generators(&g).map_err(|e| e.to_string())?;
        let alphabet = g.alphabet().clone();
        let sub = FreeGroupSubgroupBackend::new(alphabet.clone(), &gens).map_err(|e| e.to_string())?;
        let mut reduced = 0;
        for w in words_up_to(alphabet.len(), 6) {
            if free_reduce(&alphabet, &w).len() != w.len() {
                continue;
            }
            reduced += 1;
            let sum: i64 = w.iter().map(|a| if a.0 % 2 == 0 { 1 } else { -1 }).sum();
            ensure(sub.contains(&w) == (sum % 2 == 0), || format!("{name}: {}", alphabet.format_word(&w)))?;
        }
        notes.push(format!("{name}: {} generators, {reduced} reduced words", gens.len()));
    }
    Ok(notes.join("; "))
}

fn main() {
    let criteria: Vec<(&str, u64, fn() -> Outcome)> = vec![
        ("two-element regression", 1, two_element_regression),
        ("finite index both ways", 5, prop_regular),
        ("coset map homomorphism", 1, kappa),
        ("cone-type synthesis", 60, synthesis),
        ("translator", 30, translator),
        ("finite-index lift", 30, lift),
        ("polygon triangulation", 30, triangulations),
        ("diagonal distance bound", 60, distance_bounds),
        ("negative examples", 120, negative_examples),
        ("spanning-tree generators", 5, spanning_trees),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*limit);
        let (ok, note) = match outcome {
            Ok(note) if in_time => (true, note),
            Ok(note) => (false, format!("too slow; {note}")),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!(
            "{} {:>2} {name} [{:.2}s / {limit}s] {note}",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
