//! Context-free grammars, Chomsky normal form, membership with derivations,
//! polygon triangulations and the diagonal distance verifier.

mod cnf;
mod cyk;
pub mod fixtures;
mod triangulate;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{Alphabet, Letter};

pub use cnf::{min_yield, to_cnf, CnfGrammar, CnfProduction, MinYield};
pub use cyk::{cyk_member, cyk_tree, Derivation, DerivationStep, ParseTree};
pub use triangulate::{
    diagonal_distance_check, diagonal_distance_check_with, triangulate, Diagonal, PolygonTriangulation,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    T(Letter),
    V(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Production {
    pub lhs: usize,
    pub rhs: Vec<Symbol>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cfg {
    pub terminals: Alphabet,
    pub variables: Vec<String>,
    pub start: usize,
    pub rules: Vec<Production>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GrammarClass {
    RightLinear,
    Linear,
    General,
}

impl Cfg {
    pub fn new(terminals: Alphabet, start: &str) -> Self {
        Cfg { terminals, variables: vec![start.to_string()], start: 0, rules: Vec::new() }
    }

    /// Index of variable `name`, declaring it if new.
    pub fn variable(&mut self, name: &str) -> usize {
        if let Some(i) = self.variables.iter().position(|v| v == name) {
            return i;
        }
        self.variables.push(name.to_string());
        self.variables.len() - 1
    }

    pub fn add_rule(&mut self, lhs: usize, rhs: Vec<Symbol>) {
        let p = Production { lhs, rhs };
        if !self.rules.contains(&p) {
            self.rules.push(p);
        }
    }

    /// Adds a rule from names: quoted or known terminals, anything else a variable.
    pub fn rule(&mut self, lhs: &str, rhs: &[&str]) -> Result<()> {
        let l = self.variable(lhs);
        let mut out = Vec::new();
        for t in rhs {
            out.push(self.symbol(t)?);
        }
        self.add_rule(l, out);
        Ok(())
    }

    fn symbol(&mut self, token: &str) -> Result<Symbol> {
        if let Some(name) = token.strip_prefix('\'').and_then(|t| t.strip_suffix('\'')) {
            return self
                .terminals
                .letter(name)
                .map(Symbol::T)
                .ok_or_else(|| Error::UnknownSymbol(format!("terminal `{name}`")));
        }
        Ok(Symbol::V(self.variable(token)))
    }

    /// Variables that derive some terminal word.
    pub fn generating(&self) -> Vec<bool> {
        let mut gen = vec![false; self.variables.len()];
        loop {
            let mut changed = false;
            for r in &self.rules {
                if !gen[r.lhs] && r.rhs.iter().all(|s| matches!(s, Symbol::T(_)) || matches!(s, Symbol::V(v) if gen[*v])) {
                    gen[r.lhs] = true;
                    changed = true;
                }
            }
            if !changed {
                return gen;
            }
        }
    }

    /// Drops non-generating and unreachable variables, renumbering the rest.
    pub fn reduce(&self) -> Result<Cfg> {
        let gen = self.generating();
        if !gen[self.start] {
            return Err(Error::EmptyLanguage);
        }
        let useful_rules: Vec<&Production> =
            self.rules.iter().filter(|r| gen[r.lhs] && r.rhs.iter().all(|s| !matches!(s, Symbol::V(v) if !gen[*v]))).collect();
        let mut reach = vec![false; self.variables.len()];
        reach[self.start] = true;
        let mut stack = vec![self.start];
        while let Some(v) = stack.pop() {
            for r in useful_rules.iter().filter(|r| r.lhs == v) {
                for s in &r.rhs {
                    if let Symbol::V(u) = s {
                        if !reach[*u] {
                            reach[*u] = true;
                            stack.push(*u);
                        }
                    }
                }
            }
        }
        let mut map = vec![usize::MAX; self.variables.len()];
        let mut variables = Vec::new();
        for (i, name) in self.variables.iter().enumerate() {
            if reach[i] {
                map[i] = variables.len();
                variables.push(name.clone());
            }
        }
        let mut out = Cfg { terminals: self.terminals.clone(), variables, start: map[self.start], rules: Vec::new() };
        for r in useful_rules.into_iter().filter(|r| reach[r.lhs]) {
            let rhs = r.rhs.iter().map(|s| if let Symbol::V(v) = s { Symbol::V(map[*v]) } else { *s }).collect();
            out.add_rule(map[r.lhs], rhs);
        }
        Ok(out)
    }

    /// Words of `L` up to `max_len`; empty set for an empty language.
    pub fn language_up_to(&self, max_len: usize) -> BTreeSet<Vec<Letter>> {
        match to_cnf(self) {
            Ok(c) => c.language_up_to(max_len),
            Err(_) => BTreeSet::new(),
        }
    }

    /// Syntactic shape: right linear, linear or general.
    pub fn classify(&self) -> GrammarClass {
        let mut class = GrammarClass::RightLinear;
        for r in &self.rules {
            let vars: Vec<usize> =
                r.rhs.iter().enumerate().filter(|(_, s)| matches!(s, Symbol::V(_))).map(|(i, _)| i).collect();
            match vars.len() {
                0 => {}
                1 if vars[0] + 1 == r.rhs.len() => {}
                1 => class = GrammarClass::Linear,
                _ => return GrammarClass::General,
            }
        }
        class
    }

    /// Text form: `alphabet …`, `start S`, `rule S -> A 'a' B`, `rule S -> eps`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "alphabet {}", self.terminals.declaration());
        let _ = writeln!(s, "start {}", self.variables[self.start]);
        for r in &self.rules {
            let rhs = if r.rhs.is_empty() {
                "eps".to_string()
            } else {
                r.rhs.iter().map(|x| self.symbol_text(*x)).collect::<Vec<_>>().join(" ")
            };
            let _ = writeln!(s, "rule {} -> {rhs}", self.variables[r.lhs]);
        }
        s
    }

    pub fn symbol_text(&self, x: Symbol) -> String {
        match x {
            Symbol::T(a) => format!("'{}'", self.terminals.name(a)),
            Symbol::V(v) => self.variables[v].clone(),
        }
    }

    pub fn parse_text(text: &str) -> Result<Cfg> {
        let mut terminals = None;
        let mut start = None;
        let mut rules: Vec<(usize, String, Vec<String>)> = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let ln = ln + 1;
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            match head {
                "alphabet" => terminals = Some(Alphabet::parse(rest.trim())?),
                "start" => start = Some(rest.trim().to_string()),
                "rule" => {
                    let (lhs, rhs) = rest.split_once("->").ok_or_else(|| Error::parse(ln, "expected `rule A -> …`"))?;
                    let rhs: Vec<String> = match rhs.trim() {
                        "eps" | "ε" => Vec::new(),
                        r => r.split_whitespace().map(str::to_string).collect(),
                    };
                    rules.push((ln, lhs.trim().to_string(), rhs));
                }
                other => return Err(Error::parse(ln, format!("unknown keyword `{other}`"))),
            }
        }
        let terminals = terminals.ok_or_else(|| Error::parse(0, "missing `alphabet` line"))?;
        let start = start.ok_or_else(|| Error::parse(0, "missing `start` line"))?;
        let mut g = Cfg::new(terminals, &start);
        for (ln, lhs, rhs) in rules {
            let refs: Vec<&str> = rhs.iter().map(String::as_str).collect();
            g.rule(&lhs, &refs).map_err(|e| Error::parse(ln, e.to_string()))?;
        }
        Ok(g)
    }
}

/// Syntactic classification of a grammar.
pub fn is_regular_grammar(g: &Cfg) -> GrammarClass {
    g.classify()
}
