//! Pushdown automata: definition, bounded simulation and text format.
//!
//! The stack is a word over the stack alphabet with its top at the right. A
//! transition keyed by a stack symbol replaces that top symbol; a transition
//! keyed by `ε` fires only on an empty stack. A word is accepted when a final
//! state is reached with empty stack and exhausted input.

mod lift;
mod synth;
mod to_cfg;
mod translate;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{Alphabet, Letter};

/// Word as a whitespace-free tag for generated state names, e.g. `a,b^`.
pub(crate) fn word_tag(alphabet: &Alphabet, w: &[Letter]) -> String {
    w.iter().map(|&a| alphabet.name(a)).collect::<Vec<_>>().join(",")
}

pub use lift::{dihedral_example, finite_index_lift, LiftTable};
pub use synth::{build_pda_from_cones, synthesize_from_graph};
pub use to_cfg::pda_to_cfg;
pub use translate::translate_pda;

pub type StateId = usize;
pub type StackSym = usize;

/// Outcome of a bounded run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accept,
    Reject,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_steps: usize,
    pub max_stack: usize,
}

impl Budget {
    pub fn new(max_steps: usize, max_stack: usize) -> Self {
        Budget { max_steps, max_stack }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_steps: 100_000, max_stack: 64 }
    }
}

/// `(state, input or ε, top or ε)`.
pub type TransitionKey = (StateId, Option<Letter>, Option<StackSym>);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PdaConfiguration {
    pub state: StateId,
    /// Rightmost symbol is the top.
    pub stack: Vec<StackSym>,
    pub position: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pda {
    alphabet: Alphabet,
    states: Vec<String>,
    state_index: HashMap<String, StateId>,
    stack_symbols: Vec<String>,
    stack_index: HashMap<String, StackSym>,
    initial: StateId,
    finals: BTreeSet<StateId>,
    start_symbol: StackSym,
    delta: BTreeMap<TransitionKey, Vec<(StateId, Vec<StackSym>)>>,
    deterministic: OnceLock<bool>,
}

impl Pda {
    /// A PDA with one initial state and one start symbol, no transitions.
    pub fn new(alphabet: Alphabet, initial: &str, start_symbol: &str) -> Self {
        let mut m = Pda {
            alphabet,
            states: Vec::new(),
            state_index: HashMap::new(),
            stack_symbols: Vec::new(),
            stack_index: HashMap::new(),
            initial: 0,
            finals: BTreeSet::new(),
            start_symbol: 0,
            delta: BTreeMap::new(),
            deterministic: OnceLock::new(),
        };
        m.initial = m.add_state(initial);
        m.start_symbol = m.add_stack_symbol(start_symbol);
        m
    }

    pub fn add_state(&mut self, name: &str) -> StateId {
        if let Some(&q) = self.state_index.get(name) {
            return q;
        }
        self.states.push(name.to_string());
        self.state_index.insert(name.to_string(), self.states.len() - 1);
        self.states.len() - 1
    }

    pub fn add_stack_symbol(&mut self, name: &str) -> StackSym {
        if let Some(&z) = self.stack_index.get(name) {
            return z;
        }
        self.stack_symbols.push(name.to_string());
        self.stack_index.insert(name.to_string(), self.stack_symbols.len() - 1);
        self.stack_symbols.len() - 1
    }

    pub fn set_final(&mut self, q: StateId, on: bool) {
        if on {
            self.finals.insert(q);
        } else {
            self.finals.remove(&q);
        }
    }

    pub fn set_initial(&mut self, q: StateId) {
        self.initial = q;
    }

    /// Adds `(to, push) ∈ δ(from, input, top)`; duplicates are ignored.
    pub fn add_transition(
        &mut self,
        from: StateId,
        input: Option<Letter>,
        top: Option<StackSym>,
        to: StateId,
        push: Vec<StackSym>,
    ) {
        self.deterministic = OnceLock::new();
        let entry = self.delta.entry((from, input, top)).or_default();
        if !entry.iter().any(|(q, z)| *q == to && *z == push) {
            entry.push((to, push));
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn stack_symbol_count(&self) -> usize {
        self.stack_symbols.len()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q]
    }

    pub fn stack_name(&self, z: StackSym) -> &str {
        &self.stack_symbols[z]
    }

    pub fn state(&self, name: &str) -> Option<StateId> {
        self.state_index.get(name).copied()
    }

    pub fn stack_symbol(&self, name: &str) -> Option<StackSym> {
        self.stack_index.get(name).copied()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn finals(&self) -> &BTreeSet<StateId> {
        &self.finals
    }

    pub fn start_symbol(&self) -> StackSym {
        self.start_symbol
    }

    pub fn transitions(&self) -> impl Iterator<Item = (&TransitionKey, &Vec<(StateId, Vec<StackSym>)>)> {
        self.delta.iter()
    }

    pub fn transition_count(&self) -> usize {
        self.delta.values().map(Vec::len).sum()
    }

    pub fn delta(&self, q: StateId, input: Option<Letter>, top: Option<StackSym>) -> &[(StateId, Vec<StackSym>)] {
        self.delta.get(&(q, input, top)).map_or(&[], Vec::as_slice)
    }

    pub fn initial_configuration(&self) -> PdaConfiguration {
        PdaConfiguration { state: self.initial, stack: vec![self.start_symbol], position: 0 }
    }

    /// `|δ(p,a,z)| + |δ(p,ε,z)| ≤ 1` for all `p`, `a`, `z ∈ Z ∪ {ε}`.
    pub fn is_deterministic(&self) -> bool {
        *self.deterministic.get_or_init(|| self.check_deterministic())
    }

    fn check_deterministic(&self) -> bool {
        let mut keys: BTreeSet<(StateId, Option<StackSym>)> = BTreeSet::new();
        for &(q, _, z) in self.delta.keys() {
            keys.insert((q, z));
        }
        keys.into_iter().all(|(q, z)| {
            let eps = self.delta(q, None, z).len();
            eps <= 1 && self.alphabet.letters().all(|a| self.delta(q, Some(a), z).len() + eps <= 1)
        })
    }

    /// Bounded search of the configuration graph.
    pub fn accepts(&self, w: &[Letter], budget: Budget) -> Verdict {
        if self.is_deterministic() {
            self.run_deterministic(w, budget)
        } else {
            self.search(w, budget)
        }
    }

    fn is_accepting(&self, c: &PdaConfiguration, len: usize) -> bool {
        c.position == len && c.stack.is_empty() && self.finals.contains(&c.state)
    }

    fn run_deterministic(&self, w: &[Letter], budget: Budget) -> Verdict {
        let mut c = self.initial_configuration();
        for _ in 0..=budget.max_steps {
            if self.is_accepting(&c, w.len()) {
                return Verdict::Accept;
            }
            let top = c.stack.last().copied();
            let letter = w.get(c.position).copied();
            let step = letter
                .and_then(|a| self.delta(c.state, Some(a), top).first().map(|t| (t, 1)))
                .or_else(|| self.delta(c.state, None, top).first().map(|t| (t, 0)));
            let Some(((q, push), advance)) = step else {
                return Verdict::Reject;
            };
            if top.is_some() {
                c.stack.pop();
            }
            c.stack.extend_from_slice(push);
            if c.stack.len() > budget.max_stack {
                return Verdict::Unknown;
            }
            c.state = *q;
            c.position += advance;
        }
        Verdict::Unknown
    }

    fn search(&self, w: &[Letter], budget: Budget) -> Verdict {
        let start = self.initial_configuration();
        let mut seen: HashSet<PdaConfiguration> = HashSet::from([start.clone()]);
        let mut todo = vec![start];
        let mut pruned = false;
        let mut steps = 0usize;
        while let Some(c) = todo.pop() {
            if self.is_accepting(&c, w.len()) {
                return Verdict::Accept;
            }
            steps += 1;
            if steps > budget.max_steps {
                return Verdict::Unknown;
            }
            let top = c.stack.last().copied();
            let mut moves: Vec<(&(StateId, Vec<StackSym>), usize)> =
                self.delta(c.state, None, top).iter().map(|t| (t, 0)).collect();
            if let Some(&a) = w.get(c.position) {
                moves.extend(self.delta(c.state, Some(a), top).iter().map(|t| (t, 1)));
            }
            for ((q, push), advance) in moves {
                let mut stack = c.stack.clone();
                if top.is_some() {
                    stack.pop();
                }
                stack.extend_from_slice(push);
                if stack.len() > budget.max_stack {
                    pruned = true;
                    continue;
                }
                let next = PdaConfiguration { state: *q, stack, position: c.position + advance };
                if seen.insert(next.clone()) {
                    todo.push(next);
                }
            }
        }
        if pruned {
            Verdict::Unknown
        } else {
            Verdict::Reject
        }
    }

    /// Text form: `alphabet`, `state q [initial] [final]`, `stack z [start]`,
    /// `trans q a|eps z|eps -> q' word|eps`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "alphabet {}", self.alphabet.declaration());
        for (q, name) in self.states.iter().enumerate() {
            let mut line = format!("state {name}");
            if q == self.initial {
                line.push_str(" initial");
            }
            if self.finals.contains(&q) {
                line.push_str(" final");
            }
            let _ = writeln!(s, "{line}");
        }
        for (z, name) in self.stack_symbols.iter().enumerate() {
            let _ = writeln!(s, "stack {name}{}", if z == self.start_symbol { " start" } else { "" });
        }
        for (&(p, a, z), targets) in &self.delta {
            let a = a.map_or("eps", |a| self.alphabet.name(a));
            let z = z.map_or("eps", |z| &self.stack_symbols[z]);
            for (q, push) in targets {
                let word = if push.is_empty() {
                    "eps".to_string()
                } else {
                    push.iter().map(|&x| self.stack_symbols[x].as_str()).collect::<Vec<_>>().join(" ")
                };
                let _ = writeln!(s, "trans {} {a} {z} -> {} {word}", self.states[p], self.states[*q]);
            }
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Pda> {
        let mut alphabet = None;
        let mut states: Vec<(String, bool, bool)> = Vec::new();
        let mut stacks: Vec<(String, bool)> = Vec::new();
        let mut trans: Vec<(usize, Vec<String>)> = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let ln = ln + 1;
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens[0] {
                "alphabet" => alphabet = Some(Alphabet::parse(line["alphabet".len()..].trim())?),
                "state" => {
                    let name = tokens.get(1).ok_or_else(|| Error::parse(ln, "missing state name"))?;
                    let mut initial = false;
                    let mut fin = false;
                    for t in &tokens[2..] {
                        match *t {
                            "initial" => initial = true,
                            "final" => fin = true,
                            other => return Err(Error::parse(ln, format!("unknown state flag `{other}`"))),
                        }
                    }
                    states.push((name.to_string(), initial, fin));
                }
                "stack" => {
                    let name = tokens.get(1).ok_or_else(|| Error::parse(ln, "missing stack symbol"))?;
                    let start = match tokens.get(2) {
                        None => false,
                        Some(&"start") => true,
                        Some(other) => return Err(Error::parse(ln, format!("unknown stack flag `{other}`"))),
                    };
                    stacks.push((name.to_string(), start));
                }
                "trans" => trans.push((ln, tokens[1..].iter().map(|t| t.to_string()).collect())),
                other => return Err(Error::parse(ln, format!("unknown keyword `{other}`"))),
            }
        }
        let alphabet = alphabet.ok_or_else(|| Error::parse(0, "missing `alphabet` line"))?;
        let initial = states.iter().find(|s| s.1).ok_or_else(|| Error::parse(0, "no initial state"))?.0.clone();
        let start = stacks.iter().find(|s| s.1).ok_or_else(|| Error::parse(0, "no start stack symbol"))?.0.clone();
        let mut m = Pda::new(alphabet, &initial, &start);
        for (name, _, fin) in &states {
            let q = m.add_state(name);
            m.set_final(q, *fin);
        }
        for (name, _) in &stacks {
            m.add_stack_symbol(name);
        }
        for (ln, t) in trans {
            if t.len() < 5 || t[3] != "->" {
                return Err(Error::parse(ln, "expected `trans q a z -> q' word`"));
            }
            let state = |name: &str| m.state(name).ok_or_else(|| Error::UnknownSymbol(format!("state `{name}` at line {ln}")));
            let stack = |name: &str| {
                m.stack_symbol(name).ok_or_else(|| Error::UnknownSymbol(format!("stack symbol `{name}` at line {ln}")))
            };
            let p = state(&t[0])?;
            let a = match t[1].as_str() {
                "eps" | "ε" => None,
                name => Some(m.alphabet.letter(name).ok_or_else(|| Error::UnknownSymbol(format!("letter `{name}` at line {ln}")))?),
            };
            let z = match t[2].as_str() {
                "eps" | "ε" => None,
                name => Some(stack(name)?),
            };
            let q = state(&t[4])?;
            let push = if t.len() == 6 && (t[5] == "eps" || t[5] == "ε") {
                Vec::new()
            } else {
                t[5..].iter().map(|x| stack(x)).collect::<Result<Vec<_>>>()?
            };
            m.add_transition(p, a, z, q, push);
        }
        Ok(m)
    }
}

/// Shortcut for a bounded membership test.
pub fn pda_accepts(m: &Pda, w: &[Letter], budget: Budget) -> Verdict {
    m.accepts(w, budget)
}

pub fn pda_is_deterministic(m: &Pda) -> bool {
    m.is_deterministic()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::words_up_to;

    /// `{aⁿbⁿ}` with an explicit bottom marker.
    fn anbn() -> Pda {
        let alpha = Alphabet::plain(&["a", "b"]).unwrap();
        let mut m = Pda::new(alpha, "p", "z");
        let p = m.initial();
        let q = m.add_state("q");
        let f = m.add_state("f");
        m.set_final(f, true);
        let z = m.start_symbol();
        let x = m.add_stack_symbol("x");
        m.add_transition(p, Some(Letter(0)), Some(z), p, vec![z, x]);
        m.add_transition(p, Some(Letter(0)), Some(x), p, vec![x, x]);
        m.add_transition(p, Some(Letter(1)), Some(x), q, vec![]);
        m.add_transition(q, Some(Letter(1)), Some(x), q, vec![]);
        m.add_transition(p, None, Some(z), f, vec![]);
        m.add_transition(q, None, Some(z), f, vec![]);
        m
    }

    #[test]
    fn anbn_matches_counting() {
        let m = anbn();
        assert!(!m.is_deterministic());
        let budget = Budget::new(10_000, 20);
        for w in words_up_to(2, 8) {
            let na = w.iter().take_while(|a| a.0 == 0).count();
            let expected = w.len() == 2 * na && w[na..].iter().all(|a| a.0 == 1);
            assert_eq!(m.accepts(&w, budget) == Verdict::Accept, expected, "{w:?}");
            assert_ne!(m.accepts(&w, budget), Verdict::Unknown);
        }
        assert_eq!(m.accepts(&[Letter(0), Letter(0), Letter(1), Letter(1)], budget), Verdict::Accept);
        assert_eq!(m.accepts(&[Letter(0), Letter(0), Letter(1)], budget), Verdict::Reject);
    }

    #[test]
    fn empty_word_with_pop() {
        let alpha = Alphabet::plain(&["a"]).unwrap();
        let mut m = Pda::new(alpha, "q0", "z0");
        m.set_final(0, true);
        m.add_transition(0, None, Some(0), 0, vec![]);
        assert_eq!(m.accepts(&[], Budget::default()), Verdict::Accept);
        assert_eq!(m.accepts(&[Letter(0)], Budget::default()), Verdict::Reject);
    }

    #[test]
    fn determinism_rules() {
        let alpha = Alphabet::plain(&["a"]).unwrap();
        let m = Pda::new(alpha.clone(), "p", "z");
        assert!(m.is_deterministic());
        let mut m = Pda::new(alpha, "p", "z");
        let x = m.add_state("x");
        let y = m.add_state("y");
        m.add_transition(0, Some(Letter(0)), Some(0), x, vec![]);
        assert!(m.is_deterministic());
        m.add_transition(0, None, Some(0), y, vec![]);
        assert!(!m.is_deterministic());
    }

    #[test]
    fn budgets_give_unknown() {
        // ε-loop that keeps pushing
        let alpha = Alphabet::plain(&["a"]).unwrap();
        let mut m = Pda::new(alpha, "p", "z");
        m.add_transition(0, None, Some(0), 0, vec![0, 0]);
        assert_eq!(m.accepts(&[], Budget::new(1000, 10)), Verdict::Unknown);
        // nondeterministic twin also reports unknown
        m.add_transition(0, None, Some(0), 0, vec![]);
        assert_eq!(m.accepts(&[], Budget::new(1000, 10)), Verdict::Unknown);
        // ε-cycle without growth is closed by memoization
        let alpha = Alphabet::plain(&["a"]).unwrap();
        let mut m = Pda::new(alpha, "p", "z");
        let q = m.add_state("q");
        m.add_transition(0, None, Some(0), q, vec![0]);
        m.add_transition(q, None, Some(0), 0, vec![0]);
        m.add_transition(q, None, Some(0), q, vec![0, 0]);
        assert_eq!(m.accepts(&[], Budget::new(1000, 10)), Verdict::Unknown);
    }

    #[test]
    fn text_round_trip() {
        let m = anbn();
        let text = m.to_text();
        let back = Pda::parse_text(&text).unwrap();
        assert_eq!(back.to_text(), text);
        for w in words_up_to(2, 6) {
            assert_eq!(back.accepts(&w, Budget::default()), m.accepts(&w, Budget::default()));
        }
        assert!(Pda::parse_text("alphabet a\nstate p initial\nstack z start\ntrans p b z -> p eps\n").is_err());
        assert!(matches!(Pda::parse_text("state p initial\n"), Err(Error::Parse { .. })));
    }
}
