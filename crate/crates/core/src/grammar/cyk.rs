//! CYK membership with parse trees and derivations.

use super::cnf::{CnfGrammar, CnfProduction};
use crate::error::{Error, Result};
use crate::words::Letter;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseTree {
    Empty,
    Leaf { var: usize, letter: Letter },
    Node { var: usize, left: Box<ParseTree>, right: Box<ParseTree> },
}

impl ParseTree {
    pub fn var(&self) -> Option<usize> {
        match self {
            ParseTree::Empty => None,
            ParseTree::Leaf { var, .. } | ParseTree::Node { var, .. } => Some(*var),
        }
    }

    pub fn yield_word(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<Letter>) {
        match self {
            ParseTree::Empty => {}
            ParseTree::Leaf { letter, .. } => out.push(*letter),
            ParseTree::Node { left, right, .. } => {
                left.collect(out);
                right.collect(out);
            }
        }
    }

    fn production(&self) -> CnfProduction {
        match self {
            ParseTree::Empty => CnfProduction::Epsilon,
            ParseTree::Leaf { var, letter } => CnfProduction::Terminal(*var, *letter),
            ParseTree::Node { var, left, right } => {
                CnfProduction::Binary(*var, left.var().unwrap(), right.var().unwrap())
            }
        }
    }
}

/// One rewriting step: the variable at `position` of the sentential form is
/// replaced by the right-hand side of `production`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DerivationStep {
    pub position: usize,
    pub production: CnfProduction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub steps: Vec<DerivationStep>,
}

enum Item<'t> {
    Pending(&'t ParseTree),
    Done,
}

impl Derivation {
    fn from_tree(tree: &ParseTree, rightmost: bool) -> Derivation {
        if *tree == ParseTree::Empty {
            return Derivation { steps: vec![DerivationStep { position: 0, production: CnfProduction::Epsilon }] };
        }
        let mut form = vec![Item::Pending(tree)];
        let mut steps = Vec::new();
        loop {
            let pick = if rightmost {
                form.iter().rposition(|x| matches!(x, Item::Pending(_)))
            } else {
                form.iter().position(|x| matches!(x, Item::Pending(_)))
            };
            let Some(p) = pick else { break };
            let Item::Pending(t) = form[p] else { unreachable!() };
            steps.push(DerivationStep { position: p, production: t.production() });
            match t {
                ParseTree::Node { left, right, .. } => {
                    form.splice(p..=p, [Item::Pending(left), Item::Pending(right)]);
                }
                _ => form[p] = Item::Done,
            }
        }
        Derivation { steps }
    }

    pub fn rightmost(tree: &ParseTree) -> Derivation {
        Derivation::from_tree(tree, true)
    }

    pub fn leftmost(tree: &ParseTree) -> Derivation {
        Derivation::from_tree(tree, false)
    }

    /// Replays the steps from the start symbol, returning the parse tree.
    pub fn replay(&self, g: &CnfGrammar) -> Result<ParseTree> {
        enum Slot {
            Var(usize, usize),
            Letter,
        }
        // arena of tree nodes: (var, production chosen)
        let mut chosen: Vec<(usize, Option<CnfProduction>, Vec<usize>)> = vec![(g.start, None, Vec::new())];
        let mut form = vec![Slot::Var(g.start, 0)];
        for (k, step) in self.steps.iter().enumerate() {
            let bad = |msg: &str| Error::InvalidDerivation(format!("step {}: {msg}", k + 1));
            if !g.has_production(step.production) {
                return Err(bad("production not in the grammar"));
            }
            let Some(Slot::Var(var, node)) = form.get(step.position) else {
                return Err(bad("position does not hold a variable"));
            };
            let (var, node) = (*var, *node);
            if step.production.lhs(g.start) != var {
                return Err(bad("left-hand side does not match"));
            }
            chosen[node].1 = Some(step.production);
            match step.production {
                CnfProduction::Binary(_, u, v) => {
                    let a = chosen.len();
                    chosen.push((u, None, Vec::new()));
                    chosen.push((v, None, Vec::new()));
                    chosen[node].2 = vec![a, a + 1];
                    form.splice(step.position..=step.position, [Slot::Var(u, a), Slot::Var(v, a + 1)]);
                }
                CnfProduction::Terminal(..) => form[step.position] = Slot::Letter,
                CnfProduction::Epsilon => {
                    if node != 0 {
                        return Err(bad("ε only at the start"));
                    }
                    form.remove(step.position);
                }
            }
        }
        if form.iter().any(|s| matches!(s, Slot::Var(..))) {
            return Err(Error::InvalidDerivation("derivation leaves variables".into()));
        }
        fn build(chosen: &[(usize, Option<CnfProduction>, Vec<usize>)], i: usize) -> ParseTree {
            match chosen[i].1.unwrap() {
                CnfProduction::Epsilon => ParseTree::Empty,
                CnfProduction::Terminal(var, letter) => ParseTree::Leaf { var, letter },
                CnfProduction::Binary(var, _, _) => ParseTree::Node {
                    var,
                    left: Box::new(build(chosen, chosen[i].2[0])),
                    right: Box::new(build(chosen, chosen[i].2[1])),
                },
            }
        }
        Ok(build(&chosen, 0))
    }
}

#[derive(Clone, Copy)]
enum Back {
    Leaf(Letter),
    Split(usize, usize, usize),
}

/// Parse tree of `w` from variable `root`, if any.
pub fn cyk_tree(g: &CnfGrammar, root: usize, w: &[Letter]) -> Option<ParseTree> {
    let n = w.len();
    if n == 0 {
        return (g.start_eps && root == g.start).then_some(ParseTree::Empty);
    }
    let v = g.variables.len();
    let idx = |i: usize, l: usize, t: usize| (i * (n + 1) + l) * v + t;
    let mut back: Vec<Option<Back>> = vec![None; n * (n + 1) * v];
    for (i, &a) in w.iter().enumerate() {
        for &(t, b) in &g.unary {
            if a == b {
                back[idx(i, 1, t)] = Some(Back::Leaf(a));
            }
        }
    }
    for l in 2..=n {
        for i in 0..=n - l {
            for k in 1..l {
                for &(t, x, y) in &g.binary {
                    if back[idx(i, l, t)].is_none() && back[idx(i, k, x)].is_some() && back[idx(i + k, l - k, y)].is_some() {
                        back[idx(i, l, t)] = Some(Back::Split(k, x, y));
                    }
                }
            }
        }
    }
    back[idx(0, n, root)]?;
    fn build(back: &[Option<Back>], idx: &dyn Fn(usize, usize, usize) -> usize, i: usize, l: usize, t: usize) -> ParseTree {
        match back[idx(i, l, t)].unwrap() {
            Back::Leaf(letter) => ParseTree::Leaf { var: t, letter },
            Back::Split(k, x, y) => ParseTree::Node {
                var: t,
                left: Box::new(build(back, idx, i, k, x)),
                right: Box::new(build(back, idx, i + k, l - k, y)),
            },
        }
    }
    Some(build(&back, &idx, 0, n, root))
}

/// Membership with a rightmost derivation as witness.
pub fn cyk_member(g: &CnfGrammar, w: &[Letter]) -> Option<Derivation> {
    cyk_tree(g, g.start, w).map(|t| Derivation::rightmost(&t))
}
