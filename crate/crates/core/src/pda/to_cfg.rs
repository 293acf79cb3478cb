//! Grammar for the language of a pushdown automaton (triple construction).
//!
//! The automaton is first normalized: a bottom marker `⊥` is pushed under the
//! start symbol, empty-stack moves become moves on `⊥`, and every final state
//! may pop `⊥` into a fresh accepting state. Acceptance then coincides with
//! emptying the stack, and variables `[p X q]` derive the words read while
//! going from `p` to `q` and removing `X`.

use std::collections::{HashMap, VecDeque};

use super::{Pda, StateId};
use crate::grammar::{Cfg, Symbol};
use crate::words::Letter;

struct Move {
    input: Option<Letter>,
    to: StateId,
    push: Vec<usize>,
}

/// Grammar generating `L(m)`, reduced; an empty language yields a grammar
/// whose start symbol has no rules.
pub fn pda_to_cfg(m: &Pda) -> Cfg {
    let n = m.state_count();
    let (s0, acc) = (n, n + 1);
    let bottom = m.stack_symbol_count();
    let mut moves: HashMap<(StateId, usize), Vec<Move>> = HashMap::new();
    moves.entry((s0, bottom)).or_default().push(Move { input: None, to: m.initial(), push: vec![bottom, m.start_symbol()] });
    for (&(p, a, z), targets) in m.transitions() {
        for (q, zeta) in targets {
            let (key, push) = match z {
                Some(z) => ((p, z), zeta.clone()),
                None => ((p, bottom), std::iter::once(bottom).chain(zeta.iter().copied()).collect()),
            };
            moves.entry(key).or_default().push(Move { input: a, to: *q, push });
        }
    }
    for &f in m.finals() {
        moves.entry((f, bottom)).or_default().push(Move { input: None, to: acc, push: vec![] });
    }
    let state_name = |q: StateId| -> String {
        match q {
            q if q == s0 => "s0".into(),
            q if q == acc => "acc".into(),
            q => m.state_name(q).to_string(),
        }
    };
    let symbol_name = |z: usize| if z == bottom { "⊥".to_string() } else { m.stack_name(z).to_string() };

    let mut g = Cfg::new(m.alphabet().clone(), "S");
    let mut ids: HashMap<(StateId, usize, StateId), usize> = HashMap::new();
    let mut todo: VecDeque<(StateId, usize, StateId)> = VecDeque::new();
    let mut var = |g: &mut Cfg, todo: &mut VecDeque<(StateId, usize, StateId)>, t: (StateId, usize, StateId)| -> usize {
        *ids.entry(t).or_insert_with(|| {
            todo.push_back(t);
            g.variable(&format!("[{},{},{}]", state_name(t.0), symbol_name(t.1), state_name(t.2)))
        })
    };
    let top = var(&mut g, &mut todo, (s0, bottom, acc));
    g.add_rule(g.start, vec![Symbol::V(top)]);
    let all_states: Vec<StateId> = (0..n + 2).collect();
    while let Some((p, x, q)) = todo.pop_front() {
        let lhs = var(&mut g, &mut todo, (p, x, q));
        let Some(ms) = moves.get(&(p, x)) else { continue };
        for mv in ms {
            let head: Vec<Symbol> = mv.input.map(Symbol::T).into_iter().collect();
            if mv.push.is_empty() {
                if mv.to == q {
                    g.add_rule(lhs, head);
                }
                continue;
            }
            // pushed symbols are popped top first: Y_k, …, Y_1
            let order: Vec<usize> = mv.push.iter().rev().copied().collect();
            let k = order.len();
            let mut mids = vec![0usize; k - 1];
            loop {
                let mut rhs = head.clone();
                let mut from = mv.to;
                for (i, &y) in order.iter().enumerate() {
                    let to = if i + 1 == k { q } else { all_states[mids[i]] };
                    rhs.push(Symbol::V(var(&mut g, &mut todo, (from, y, to))));
                    from = to;
                }
                g.add_rule(lhs, rhs);
                // next tuple of intermediate states
                let mut i = 0;
                while i < mids.len() {
                    mids[i] += 1;
                    if mids[i] < all_states.len() {
                        break;
                    }
                    mids[i] = 0;
                    i += 1;
                }
                if i == mids.len() {
                    break;
                }
            }
        }
    }
    g.reduce().unwrap_or_else(|_| Cfg::new(m.alphabet().clone(), "S"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backends::{build_schreier, FiniteGroupBackend, FreeGroupSubgroupBackend};
    use crate::pda::synthesize_from_graph;
    use crate::words::{free_reduce, words_up_to, Alphabet};

    #[test]
    fn empty_automaton() {
        let m = Pda::new(Alphabet::plain(&["a"]).unwrap(), "p", "z");
        let g = pda_to_cfg(&m);
        assert!(g.rules.is_empty());
        assert!(g.language_up_to(6).is_empty());
    }

    #[test]
    fn two_vertex_graph_grammar() {
        let z2 = build_schreier(&FiniteGroupBackend::cyclic_plain(2).unwrap(), 2);
        let (_, m) = synthesize_from_graph(&z2, &[z2.root()], 0, 1, z2.root(), z2.root()).unwrap();
        let g = pda_to_cfg(&m);
        let lang = g.language_up_to(10);
        let expected: std::collections::BTreeSet<Vec<Letter>> = (0..=10).step_by(2).map(|n| vec![Letter(0); n]).collect();
        assert_eq!(lang, expected);
    }

    #[test]
    fn dyck_grammar_from_automaton() {
        let tree = build_schreier(&FreeGroupSubgroupBackend::new(Alphabet::free(&["a", "b"]), &[]).unwrap(), 6);
        let (_, m) = synthesize_from_graph(&tree, &[tree.root()], 1, 1, tree.root(), tree.root()).unwrap();
        let g = pda_to_cfg(&m);
        let lang = g.language_up_to(6);
        for w in words_up_to(4, 6) {
            assert_eq!(lang.contains(&w), free_reduce(tree.alphabet(), &w).is_empty());
        }
        let back = Cfg::parse_text(&g.to_text()).unwrap();
        assert_eq!(back.language_up_to(4), g.language_up_to(4));
    }
}
