//! Lift from a finite-index subgroup: an automaton for `(H, K)` becomes one
//! for `(G, K)` by tracking the current right coset `Hg` in the state.

use std::collections::{BTreeSet, VecDeque};

use super::translate::{skeleton, stack_keys};
use super::{Pda, StackSym, StateId};
use crate::backends::{build_schreier, Rule, RuleBackend};
use crate::error::{Error, Result};
use crate::pda::synthesize_from_graph;
use crate::words::{Alphabet, Letter, Word};

/// Coset data for the lift.
///
/// `reps[0]` is `1_G`. For every representative `g` and letter `b` of the
/// `G`-alphabet, `entries[g][b] = (ḡ, u)` with `g·ψ'(b) = ψ(u)·ḡ`, where `u`
/// is a word over the alphabet of the automaton being lifted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftTable {
    pub alphabet: Alphabet,
    pub reps: Vec<String>,
    pub entries: Vec<Vec<(usize, Word)>>,
}

impl LiftTable {
    fn validate(&self, m: &Pda) -> Result<()> {
        if self.reps.is_empty() || self.entries.len() != self.reps.len() {
            return Err(Error::InvalidTable("one row of entries per representative".into()));
        }
        for (g, row) in self.entries.iter().enumerate() {
            if row.len() != self.alphabet.len() {
                return Err(Error::InvalidTable(format!("row {} has {} entries", self.reps[g], row.len())));
            }
            for (bar, u) in row {
                if *bar >= self.reps.len() {
                    return Err(Error::InvalidTable(format!("unknown representative index {bar}")));
                }
                if u.iter().any(|a| a.index() >= m.alphabet().len()) {
                    return Err(Error::InvalidTable("word outside the automaton's alphabet".into()));
                }
            }
        }
        // the coset action of each letter is a permutation of the representatives
        for b in 0..self.alphabet.len() {
            let images: BTreeSet<usize> = self.entries.iter().map(|row| row[b].0).collect();
            if images.len() != self.reps.len() {
                return Err(Error::InvalidTable(format!(
                    "letter {} does not permute the cosets",
                    self.alphabet.name(Letter(b as u16))
                )));
            }
        }
        Ok(())
    }

    /// Composition check `(g·b)·b' ` against a supplied evaluation of words in `G`.
    ///
    /// `eval(rep, letters, inner)` must return true iff
    /// `rep·ψ'(letters) = ψ(inner)·rep'` for the representative reached.
    pub fn spot_check(&self, eval: impl Fn(usize, &[Letter], &[Letter], usize) -> bool) -> Result<()> {
        for g in 0..self.reps.len() {
            for b in self.alphabet.letters() {
                for b2 in self.alphabet.letters() {
                    let (g1, u1) = &self.entries[g][b.index()];
                    let (g2, u2) = &self.entries[*g1][b2.index()];
                    let mut u = u1.clone();
                    u.extend(u2);
                    if !eval(g, &[b, b2], &u, *g2) {
                        return Err(Error::InvalidTable(format!(
                            "{}·{} {} does not compose",
                            self.reps[g],
                            self.alphabet.name(b),
                            self.alphabet.name(b2)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

impl LiftTable {
    /// Text form: `alphabet …`, `reps 1 g …`, and one
    /// `entry <rep> <letter> -> <rep'> <word|eps>` per representative and letter;
    /// words are over `inner`, the alphabet of the automaton being lifted.
    pub fn to_text(&self, inner: &Alphabet) -> String {
        let mut s = format!("alphabet {}\nreps {}\n", self.alphabet.declaration(), self.reps.join(" "));
        for (g, row) in self.entries.iter().enumerate() {
            for (b, (bar, u)) in row.iter().enumerate() {
                let u = if u.is_empty() { "eps".to_string() } else { inner.format_word(u) };
                s.push_str(&format!(
                    "entry {} {} -> {} {u}\n",
                    self.reps[g],
                    self.alphabet.name(Letter(b as u16)),
                    self.reps[*bar]
                ));
            }
        }
        s
    }

    pub fn parse_text(text: &str, inner: &Alphabet) -> Result<LiftTable> {
        let mut alphabet: Option<Alphabet> = None;
        let mut reps: Vec<String> = Vec::new();
        let mut raw: Vec<(usize, String, String, String, String)> = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let ln = ln + 1;
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            match head {
                "alphabet" => alphabet = Some(Alphabet::parse(rest)?),
                "reps" => reps = rest.split_whitespace().map(str::to_string).collect(),
                "entry" => {
                    let (lhs, rhs) = rest.split_once("->").ok_or_else(|| Error::parse(ln, "expected `entry g b -> g' u`"))?;
                    let l: Vec<&str> = lhs.split_whitespace().collect();
                    let (bar, u) = rhs.trim().split_once(char::is_whitespace).unwrap_or((rhs.trim(), "eps"));
                    if l.len() != 2 || bar.is_empty() {
                        return Err(Error::parse(ln, "expected `entry g b -> g' u`"));
                    }
                    raw.push((ln, l[0].into(), l[1].into(), bar.into(), u.trim().into()));
                }
                other => return Err(Error::parse(ln, format!("unknown keyword `{other}`"))),
            }
        }
        let alphabet = alphabet.ok_or_else(|| Error::parse(0, "missing `alphabet` line"))?;
        if reps.is_empty() {
            return Err(Error::parse(0, "missing `reps` line"));
        }
        let mut entries: Vec<Vec<Option<(usize, Word)>>> = vec![vec![None; alphabet.len()]; reps.len()];
        let rep = |ln: usize, r: &str| {
            reps.iter().position(|x| x == r).ok_or_else(|| Error::parse(ln, format!("unknown representative `{r}`")))
        };
        for (ln, g, b, bar, u) in raw {
            let g = rep(ln, &g)?;
            let b = alphabet.letter(&b).ok_or_else(|| Error::parse(ln, format!("unknown letter `{b}`")))?;
            let bar = rep(ln, &bar)?;
            let u = inner.parse_word(&u).map_err(|e| Error::parse(ln, e.to_string()))?;
            entries[g][b.index()] = Some((bar, u));
        }
        let entries = entries
            .into_iter()
            .enumerate()
            .map(|(g, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(b, e)| {
                        e.ok_or_else(|| {
                            Error::InvalidTable(format!("no entry for {} {}", reps[g], alphabet.name(Letter(b as u16))))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LiftTable { alphabet, reps, entries })
    }
}

/// Automaton over the table's alphabet accepting `L(G, K, ψ')` from one for `L(H, K, ψ)`.
///
/// Letters whose image word is empty only move the coset. When `m` is
/// deterministic such a letter is deferred past `m`'s forced ε-moves, except
/// at a final state with empty stack where acceptance must stay reachable.
pub fn finite_index_lift(m: &Pda, table: &LiftTable) -> Result<Pda> {
    table.validate(m)?;
    let deterministic = m.is_deterministic();
    let mut out = skeleton(m, table.alphabet.clone());
    let plain_name = |p: StateId, g: usize| format!("{}@{}", m.state_name(p), table.reps[g]);
    let memory_name = |p: StateId, g: usize, v: &[Letter]| {
        format!("{}@{}[{}]", m.state_name(p), table.reps[g], super::word_tag(m.alphabet(), v))
    };
    let start = out.add_state(&plain_name(m.initial(), 0));
    out.set_initial(start);
    for &f in m.finals() {
        let q = out.add_state(&plain_name(f, 0));
        out.set_final(q, true);
    }
    let all_keys: Vec<Option<StackSym>> =
        std::iter::once(None).chain((0..m.stack_symbol_count()).map(Some)).collect();

    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
    enum Node {
        Plain(StateId, usize),
        Memory(StateId, usize, Word),
    }
    let mut seen: BTreeSet<Node> = BTreeSet::from([Node::Plain(m.initial(), 0)]);
    let mut todo: VecDeque<Node> = VecDeque::from([Node::Plain(m.initial(), 0)]);
    let mut visit = |out: &mut Pda, todo: &mut VecDeque<Node>, node: Node| -> StateId {
        let id = match &node {
            Node::Plain(p, g) => out.add_state(&plain_name(*p, *g)),
            Node::Memory(p, g, v) => out.add_state(&memory_name(*p, *g, v)),
        };
        if seen.insert(node.clone()) {
            todo.push_back(node);
        }
        id
    };
    let after = |q: StateId, g: usize, rest: &[Letter]| {
        if rest.is_empty() {
            Node::Plain(q, g)
        } else {
            Node::Memory(q, g, rest.to_vec())
        }
    };
    while let Some(node) = todo.pop_front() {
        match node {
            Node::Plain(p, g) => {
                let here = out.add_state(&plain_name(p, g));
                for z in stack_keys(m, p) {
                    for (q, zeta) in m.delta(p, None, z) {
                        let t = visit(&mut out, &mut todo, Node::Plain(*q, g));
                        out.add_transition(here, None, z, t, zeta.clone());
                    }
                }
                for b in table.alphabet.letters() {
                    let (bar, u) = &table.entries[g][b.index()];
                    if u.is_empty() {
                        for &z in &all_keys {
                            let forced = !m.delta(p, None, z).is_empty();
                            let keep_acceptance = z.is_none() && m.finals().contains(&p);
                            if deterministic && forced && !keep_acceptance {
                                continue;
                            }
                            let t = visit(&mut out, &mut todo, Node::Plain(p, *bar));
                            out.add_transition(here, Some(b), z, t, z.into_iter().collect());
                        }
                    } else {
                        for z in stack_keys(m, p) {
                            for (q, zeta) in m.delta(p, Some(u[0]), z) {
                                let t = visit(&mut out, &mut todo, after(*q, *bar, &u[1..]));
                                out.add_transition(here, Some(b), z, t, zeta.clone());
                            }
                        }
                    }
                }
            }
            Node::Memory(p, g, v) => {
                let here = out.add_state(&memory_name(p, g, &v));
                for z in stack_keys(m, p) {
                    for (q, zeta) in m.delta(p, None, z) {
                        let t = visit(&mut out, &mut todo, Node::Memory(*q, g, v.clone()));
                        out.add_transition(here, None, z, t, zeta.clone());
                    }
                    for (q, zeta) in m.delta(p, Some(v[0]), z) {
                        let t = visit(&mut out, &mut todo, after(*q, g, &v[1..]));
                        out.add_transition(here, None, z, t, zeta.clone());
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Infinite dihedral group `⟨a, b | a², b²⟩` over its index-2 subgroup
/// `⟨ab⟩ ≅ Z` with `K = {1}`.
///
/// Returns the automaton for `Z` over `{c, c^}` (`c ↦ ab`) and the coset table
/// for representatives `{1, a}`.
pub fn dihedral_example() -> Result<(Pda, LiftTable)> {
    let line = build_schreier(&RuleBackend::new(Rule::Line), 8);
    let (_, m) = synthesize_from_graph(&line, &[line.root()], 2, 1, line.root(), line.root())?;
    let m = m.with_alphabet(Alphabet::free(&["c"]))?;
    let c = Letter(0);
    let c_inv = Letter(1);
    let table = LiftTable {
        alphabet: Alphabet::plain(&["a", "b"])?,
        reps: vec!["1".into(), "a".into()],
        entries: vec![
            // 1·a = a ∈ H·a;  1·b = (ba)·a = ψ(c^)·a
            vec![(1, vec![]), (1, vec![c_inv])],
            // a·a = 1;  a·b = ψ(c)
            vec![(0, vec![]), (0, vec![c])],
        ],
    };
    Ok((m, table))
}

impl Pda {
    /// Same automaton with input letters renamed positionally.
    pub fn with_alphabet(&self, alphabet: Alphabet) -> Result<Pda> {
        if alphabet.len() != self.alphabet().len() {
            return Err(Error::InvalidTable("alphabets differ in size".into()));
        }
        let mut out = self.clone();
        out.alphabet = alphabet;
        Ok(out)
    }
}
