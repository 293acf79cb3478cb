//! Chomsky normal form and shortest yields.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{Cfg, Production, Symbol};
use crate::error::{Error, Result};
use crate::words::{Alphabet, Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CnfProduction {
    /// `T ⊢ U Û`
    Binary(usize, usize, usize),
    /// `T ⊢ a`
    Terminal(usize, Letter),
    /// `S ⊢ ε`
    Epsilon,
}

impl CnfProduction {
    pub fn lhs(&self, start: usize) -> usize {
        match *self {
            CnfProduction::Binary(t, _, _) | CnfProduction::Terminal(t, _) => t,
            CnfProduction::Epsilon => start,
        }
    }
}

/// Grammar with rules `T ⊢ U Û`, `T ⊢ a`, and possibly `S ⊢ ε` with `S`
/// absent from all right-hand sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfGrammar {
    pub terminals: Alphabet,
    pub variables: Vec<String>,
    pub start: usize,
    pub binary: Vec<(usize, usize, usize)>,
    pub unary: Vec<(usize, Letter)>,
    pub start_eps: bool,
}

impl CnfGrammar {
    /// Checks the normal-form shape of a general grammar and converts it.
    pub fn from_cfg_exact(g: &Cfg) -> Option<CnfGrammar> {
        let mut out = CnfGrammar {
            terminals: g.terminals.clone(),
            variables: g.variables.clone(),
            start: g.start,
            binary: Vec::new(),
            unary: Vec::new(),
            start_eps: false,
        };
        for r in &g.rules {
            match r.rhs.as_slice() {
                [] if r.lhs == g.start => out.start_eps = true,
                [Symbol::T(a)] => out.unary.push((r.lhs, *a)),
                [Symbol::V(u), Symbol::V(v)] => out.binary.push((r.lhs, *u, *v)),
                _ => return None,
            }
        }
        if out.start_eps && out.binary.iter().any(|&(_, u, v)| u == g.start || v == g.start) {
            return None;
        }
        Some(out)
    }

    pub fn to_cfg(&self) -> Cfg {
        let mut g = Cfg { terminals: self.terminals.clone(), variables: self.variables.clone(), start: self.start, rules: Vec::new() };
        if self.start_eps {
            g.add_rule(self.start, vec![]);
        }
        for &(t, u, v) in &self.binary {
            g.add_rule(t, vec![Symbol::V(u), Symbol::V(v)]);
        }
        for &(t, a) in &self.unary {
            g.add_rule(t, vec![Symbol::T(a)]);
        }
        g
    }

    pub fn variable(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    /// All productions in a fixed order.
    pub fn productions(&self) -> Vec<CnfProduction> {
        let mut out = Vec::new();
        if self.start_eps {
            out.push(CnfProduction::Epsilon);
        }
        out.extend(self.binary.iter().map(|&(t, u, v)| CnfProduction::Binary(t, u, v)));
        out.extend(self.unary.iter().map(|&(t, a)| CnfProduction::Terminal(t, a)));
        out
    }

    pub fn has_production(&self, p: CnfProduction) -> bool {
        match p {
            CnfProduction::Binary(t, u, v) => self.binary.contains(&(t, u, v)),
            CnfProduction::Terminal(t, a) => self.unary.contains(&(t, a)),
            CnfProduction::Epsilon => self.start_eps,
        }
    }

    /// `L_T` up to `max_len` for every variable `T`, indexed `[T][len]`.
    pub fn languages_by_variable(&self, max_len: usize) -> Vec<Vec<BTreeSet<Word>>> {
        let n = self.variables.len();
        let mut lang: Vec<Vec<BTreeSet<Word>>> = vec![vec![BTreeSet::new(); max_len + 1]; n];
        if max_len >= 1 {
            for &(t, a) in &self.unary {
                lang[t][1].insert(vec![a]);
            }
        }
        for len in 2..=max_len {
            for &(t, u, v) in &self.binary {
                let mut add = BTreeSet::new();
                for i in 1..len {
                    for x in &lang[u][i] {
                        for y in &lang[v][len - i] {
                            let mut w = x.clone();
                            w.extend_from_slice(y);
                            add.insert(w);
                        }
                    }
                }
                lang[t][len].extend(add);
            }
        }
        if self.start_eps {
            lang[self.start][0].insert(Vec::new());
        }
        lang
    }

    pub fn language_up_to(&self, max_len: usize) -> BTreeSet<Word> {
        self.languages_by_variable(max_len).swap_remove(self.start).into_iter().flatten().collect()
    }
}

/// Converts to CNF: reduce, fresh start (if the start occurs on a right-hand
/// side), ε-elimination, unit elimination, terminal lifting, binarization,
/// final reduction.
pub fn to_cnf(g: &Cfg) -> Result<CnfGrammar> {
    let g = g.reduce()?;
    if let Some(c) = CnfGrammar::from_cfg_exact(&g) {
        return Ok(c);
    }
    let mut g = g;
    // START
    if g.rules.iter().any(|r| r.rhs.contains(&Symbol::V(g.start))) {
        let mut name = format!("{}0", g.variables[g.start]);
        while g.variables.contains(&name) {
            name.push('\'');
        }
        let s0 = g.variable(&name);
        let old = g.start;
        g.start = s0;
        g.add_rule(s0, vec![Symbol::V(old)]);
    }
    // DEL
    let n = g.variables.len();
    let mut nullable = vec![false; n];
    loop {
        let mut changed = false;
        for r in &g.rules {
            if !nullable[r.lhs] && r.rhs.iter().all(|s| matches!(s, Symbol::V(v) if nullable[*v])) {
                nullable[r.lhs] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut rules: BTreeSet<Production> = BTreeSet::new();
    for r in &g.rules {
        let opt: Vec<usize> =
            r.rhs.iter().enumerate().filter(|(_, s)| matches!(s, Symbol::V(v) if nullable[*v])).map(|(i, _)| i).collect();
        for mask in 0u64..(1u64 << opt.len()) {
            let rhs: Vec<Symbol> = r
                .rhs
                .iter()
                .enumerate()
                .filter(|(i, _)| opt.iter().position(|o| o == i).is_none_or(|k| mask & (1 << k) == 0))
                .map(|(_, s)| *s)
                .collect();
            if !rhs.is_empty() {
                rules.insert(Production { lhs: r.lhs, rhs });
            }
        }
    }
    let start_eps = nullable[g.start];
    // UNIT
    let mut unit_edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    for r in &rules {
        if let [Symbol::V(b)] = r.rhs.as_slice() {
            unit_edges[r.lhs].push(*b);
        }
    }
    let unit: Vec<BTreeSet<usize>> = (0..n)
        .map(|a| {
            let mut seen = BTreeSet::from([a]);
            let mut stack = vec![a];
            while let Some(x) = stack.pop() {
                for &y in &unit_edges[x] {
                    if seen.insert(y) {
                        stack.push(y);
                    }
                }
            }
            seen
        })
        .collect();
    let mut non_unit: BTreeMap<usize, Vec<Vec<Symbol>>> = BTreeMap::new();
    for r in &rules {
        if !matches!(r.rhs.as_slice(), [Symbol::V(_)]) {
            non_unit.entry(r.lhs).or_default().push(r.rhs.clone());
        }
    }
    let mut flat: BTreeSet<Production> = BTreeSet::new();
    for a in 0..n {
        for b in &unit[a] {
            for rhs in non_unit.get(b).into_iter().flatten() {
                flat.insert(Production { lhs: a, rhs: rhs.clone() });
            }
        }
    }
    // TERM and BIN
    let mut variables = g.variables.clone();
    let fresh = |variables: &mut Vec<String>, base: String| -> usize {
        let mut name = base;
        while variables.contains(&name) {
            name.push('\'');
        }
        variables.push(name);
        variables.len() - 1
    };
    let mut lifted: HashMap<Letter, usize> = HashMap::new();
    let mut out = CnfGrammar {
        terminals: g.terminals.clone(),
        variables: Vec::new(),
        start: g.start,
        binary: Vec::new(),
        unary: Vec::new(),
        start_eps,
    };
    let mut pairs: HashMap<(usize, usize), usize> = HashMap::new();
    for r in flat {
        if let [Symbol::T(a)] = r.rhs.as_slice() {
            out.unary.push((r.lhs, *a));
            continue;
        }
        let mut vars: Vec<usize> = Vec::with_capacity(r.rhs.len());
        for s in &r.rhs {
            vars.push(match *s {
                Symbol::V(v) => v,
                Symbol::T(a) => *lifted.entry(a).or_insert_with(|| {
                    let v = fresh(&mut variables, format!("X_{}", g.terminals.name(a)));
                    out.unary.push((v, a));
                    v
                }),
            });
        }
        // right-nested binarization, sharing suffix variables
        let mut right = vars[vars.len() - 1];
        for i in (1..vars.len() - 1).rev() {
            right = *pairs.entry((vars[i], right)).or_insert_with(|| {
                let v = fresh(&mut variables, format!("{}_{}", g.variables[r.lhs], i));
                out.binary.push((v, vars[i], right));
                v
            });
        }
        out.binary.push((r.lhs, vars[0], right));
    }
    out.variables = variables;
    out.binary.sort_unstable();
    out.binary.dedup();
    out.unary.sort_unstable();
    out.unary.dedup();
    let reduced = out.to_cfg().reduce()?;
    CnfGrammar::from_cfg_exact(&reduced).ok_or_else(|| Error::Unsupported("normal form conversion failed".into()))
}

/// Shortest yields `m(T)` and their maximum `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinYield {
    /// `None` for variables that generate nothing.
    pub per_variable: Vec<Option<usize>>,
    pub max: usize,
}

impl MinYield {
    pub fn of(&self, t: usize) -> usize {
        self.per_variable[t].unwrap_or(usize::MAX)
    }
}

/// Least fixpoint: `T ⊢ a` seeds 1, `T ⊢ U Û` relaxes to `m(U) + m(Û)`.
pub fn min_yield(g: &CnfGrammar) -> MinYield {
    let mut m: Vec<Option<usize>> = vec![None; g.variables.len()];
    for &(t, _) in &g.unary {
        m[t] = Some(1);
    }
    loop {
        let mut changed = false;
        for &(t, u, v) in &g.binary {
            if let (Some(a), Some(b)) = (m[u], m[v]) {
                if m[t].is_none_or(|c| a + b < c) {
                    m[t] = Some(a + b);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    if g.start_eps {
        m[g.start] = Some(0);
    }
    let max = m.iter().flatten().copied().max().unwrap_or(0);
    MinYield { per_variable: m, max }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::fixtures;
    use crate::words::{free_reduce, words_up_to};

    fn cfg(text: &str) -> Cfg {
        Cfg::parse_text(text).unwrap()
    }

    #[test]
    fn already_cnf_is_kept() {
        let g = cfg("alphabet a b\nstart S\nrule S -> A B\nrule A -> 'a'\nrule B -> 'b'\n");
        let c = to_cnf(&g).unwrap();
        assert_eq!(c.variables, vec!["S", "A", "B"]);
        assert_eq!(c.binary, vec![(0, 1, 2)]);
        let m = min_yield(&c);
        assert_eq!(m.per_variable, vec![Some(2), Some(1), Some(1)]);
        assert_eq!(m.max, 2);
    }

    #[test]
    fn nested_and_parity_grammars() {
        let g = cfg("alphabet a a^\nstart S\nrule S -> 'a' S 'a^'\nrule S -> eps\n");
        let c = to_cnf(&g).unwrap();
        assert!(c.start_eps);
        let lang = c.language_up_to(8);
        let expected: BTreeSet<Word> =
            (0..=4).map(|n| [vec![Letter(0); n], vec![Letter(1); n]].concat()).collect();
        assert_eq!(lang, expected);
        let g = cfg("alphabet a\nstart S\nrule S -> S S\nrule S -> 'a' 'a'\nrule S -> eps\n");
        let c = to_cnf(&g).unwrap();
        let lang = c.language_up_to(10);
        let expected: BTreeSet<Word> = (0..=10).step_by(2).map(|n| vec![Letter(0); n]).collect();
        assert_eq!(lang, expected);
        assert!(!c.binary.iter().any(|&(_, u, v)| u == c.start || v == c.start));
    }

    #[test]
    fn empty_language() {
        let g = cfg("alphabet a\nstart S\nrule S -> 'a' S\n");
        assert_eq!(to_cnf(&g), Err(Error::EmptyLanguage));
    }

    #[test]
    fn dyck_yields_match_enumeration() {
        let g = fixtures::dyck_f2();
        let c = to_cnf(&g).unwrap();
        let alpha = c.terminals.clone();
        let lang = c.language_up_to(6);
        for w in words_up_to(4, 6) {
            assert_eq!(lang.contains(&w), free_reduce(&alpha, &w).is_empty());
        }
        let m = min_yield(&c);
        let by_var = c.languages_by_variable(6);
        for t in 0..c.variables.len() {
            let shortest = (0..=6).find(|&l| !by_var[t][l].is_empty());
            assert_eq!(shortest, m.per_variable[t].filter(|&x| x <= 6), "{}", c.variables[t]);
        }
    }
}
