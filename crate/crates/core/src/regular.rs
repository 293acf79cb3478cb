//! Finite index: Schreier graphs as finite automata, useful-state reduction,
//! the coset map from an accepting automaton onto the Schreier graph, and
//! index detection by ball closure.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::backends::{build_schreier, CosetSpace};
use crate::error::{Error, Result};
use crate::graph::{LabelledGraph, VertexId};
use crate::words::{Letter, Word};

/// Deterministic finite automaton `(X, o, F)`: the root of the graph is `o`.
#[derive(Clone, Debug)]
pub struct Dfa {
    graph: LabelledGraph,
    finals: BTreeSet<VertexId>,
}

impl Dfa {
    /// Wraps a finite deterministic graph; frontier vertices are rejected.
    pub fn new(graph: LabelledGraph, finals: BTreeSet<VertexId>) -> Result<Dfa> {
        if !graph.check_structure().deterministic {
            let v = graph
                .vertices()
                .find(|&v| graph.out_edges(v).windows(2).any(|p| p[0].0 == p[1].0))
                .unwrap();
            return Err(Error::NotDeterministic(graph.name(v).to_string()));
        }
        if let Some(v) = graph.frontier().next() {
            return Err(Error::FrontierEscape(graph.name(v).to_string()));
        }
        if let Some(v) = finals.iter().find(|v| v.index() >= graph.vertex_count()) {
            return Err(Error::UnknownVertex(format!("#{}", v.0)));
        }
        Ok(Dfa { graph, finals })
    }

    pub fn graph(&self) -> &LabelledGraph {
        &self.graph
    }

    pub fn initial(&self) -> VertexId {
        self.graph.root()
    }

    pub fn finals(&self) -> &BTreeSet<VertexId> {
        &self.finals
    }

    pub fn state_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// State reached from `o` by `w`, if the path exists.
    pub fn run(&self, w: &[Letter]) -> Option<VertexId> {
        w.iter().try_fold(self.initial(), |v, &a| self.graph.successor(v, a))
    }

    pub fn accepts(&self, w: &[Letter]) -> bool {
        self.run(w).is_some_and(|v| self.finals.contains(&v))
    }

    /// Accepted words up to `max_len`, by walking the automaton.
    pub fn language_up_to(&self, max_len: usize) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        let mut layer = vec![(self.initial(), Vec::new())];
        for len in 0..=max_len {
            let mut next = Vec::new();
            for (v, w) in layer {
                if self.finals.contains(&v) {
                    out.insert(w.clone());
                }
                if len < max_len {
                    for &(a, y) in self.graph.out_edges(v) {
                        let mut w2 = w.clone();
                        w2.push(a);
                        next.push((y, w2));
                    }
                }
            }
            layer = next;
        }
        out
    }

    /// Graph text form followed by one `final v` line per final state.
    pub fn to_text(&self) -> String {
        let mut s = self.graph.to_text();
        for &f in &self.finals {
            s.push_str(&format!("final {}\n", self.graph.name(f)));
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Dfa> {
        let (graph, finals) = LabelledGraph::parse_text(text)?;
        Dfa::new(graph, finals)
    }

    pub fn to_dot(&self, name: &str) -> String {
        self.graph.to_dot(name, false, &self.finals)
    }

    /// BFS-first word from `o` to every reachable state.
    fn access_words(&self) -> Vec<Option<Word>> {
        let mut words: Vec<Option<Word>> = vec![None; self.state_count()];
        words[self.initial().index()] = Some(Vec::new());
        let mut queue = VecDeque::from([self.initial()]);
        while let Some(v) = queue.pop_front() {
            let w = words[v.index()].clone().unwrap();
            for &(a, y) in self.graph.out_edges(v) {
                if words[y.index()].is_none() {
                    let mut w2 = w.clone();
                    w2.push(a);
                    words[y.index()] = Some(w2);
                    queue.push_back(y);
                }
            }
        }
        words
    }
}

/// The Schreier graph did not close within the cap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfiniteIndexWitness {
    pub radius: usize,
    pub explored: usize,
    pub frontier: usize,
}

#[derive(Clone, Debug)]
pub enum SchreierAutomaton {
    Finite(Dfa),
    Witness(InfiniteIndexWitness),
}

/// `(X, o, {o})` when the Schreier graph closes within `radius_cap`.
pub fn schreier_to_dfa<S: CosetSpace + ?Sized>(space: &S, radius_cap: usize) -> SchreierAutomaton {
    let g = build_schreier(space, radius_cap);
    if g.is_closed() {
        let root = g.root();
        SchreierAutomaton::Finite(Dfa::new(g, BTreeSet::from([root])).expect("Schreier graphs are deterministic"))
    } else {
        SchreierAutomaton::Witness(InfiniteIndexWitness {
            radius: radius_cap,
            explored: g.vertex_count(),
            frontier: g.frontier().count(),
        })
    }
}

/// Keeps the states on some accepting path from `o`, under their old names.
pub fn reduce_dfa(d: &Dfa) -> Result<Dfa> {
    let g = &d.graph;
    let n = g.vertex_count();
    let mut reach = vec![false; n];
    reach[d.initial().index()] = true;
    let mut stack = vec![d.initial()];
    while let Some(v) = stack.pop() {
        for &(_, y) in g.out_edges(v) {
            if !reach[y.index()] {
                reach[y.index()] = true;
                stack.push(y);
            }
        }
    }
    let mut coreach = vec![false; n];
    let mut stack: Vec<VertexId> = d.finals.iter().copied().collect();
    for f in &stack {
        coreach[f.index()] = true;
    }
    while let Some(v) = stack.pop() {
        for &(_, x) in g.in_edges(v) {
            if !coreach[x.index()] {
                coreach[x.index()] = true;
                stack.push(x);
            }
        }
    }
    let useful: Vec<bool> = (0..n).map(|i| reach[i] && coreach[i]).collect();
    if !useful[d.initial().index()] {
        return Err(Error::EmptyLanguage);
    }
    let mut out = LabelledGraph::new(g.alphabet().clone());
    let mut map = vec![None; n];
    for v in g.vertices().filter(|v| useful[v.index()]) {
        map[v.index()] = Some(out.add_vertex(g.name(v)));
    }
    for x in g.vertices() {
        let Some(x2) = map[x.index()] else { continue };
        for &(a, y) in g.out_edges(x) {
            if let Some(y2) = map[y.index()] {
                out.add_edge(x2, a, y2);
            }
        }
    }
    out.set_root(map[d.initial().index()].unwrap());
    let finals = d.finals.iter().filter_map(|f| map[f.index()]).collect();
    Dfa::new(out, finals)
}

/// The coset map `κ` from automaton states to Schreier-graph vertices.
#[derive(Clone, Debug)]
pub struct Kappa {
    pub schreier: LabelledGraph,
    /// `map[y]` is `κ(y)` for every automaton state `y`.
    pub map: Vec<VertexId>,
    pub root_preserved: bool,
    pub homomorphism: bool,
    pub surjective: bool,
    pub injective: bool,
}

impl Kappa {
    /// Classes `κ⁻¹(v)` as state names, one line per Schreier vertex.
    pub fn to_text(&self, d: &Dfa) -> String {
        let mut s = String::new();
        for v in self.schreier.vertices() {
            let pre: Vec<&str> =
                d.graph.vertices().filter(|y| self.map[y.index()] == v).map(|y| d.graph.name(y)).collect();
            s.push_str(&format!("{} <- {}\n", self.schreier.name(v), pre.join(" ")));
        }
        s.push_str(&format!(
            "root_preserved {}\nhomomorphism {}\nsurjective {}\ninjective {}\n",
            self.root_preserved, self.homomorphism, self.surjective, self.injective
        ));
        s
    }
}

/// Extra access words checked per state when testing well-definedness.
const ALTERNATIVES: usize = 5;

/// Builds `κ(y) = Kψ(w)` for the BFS-first `w ∈ L_{o,y}(d)`.
///
/// The automaton language is compared with the word problem exactly, on the
/// product of `d` with the Schreier graph; well-definedness is then tested on
/// up to five further access words per state. The index must be finite: the
/// Schreier graph is explored out to the number of states of `d`.
pub fn kappa_homomorphism<S: CosetSpace + ?Sized>(d: &Dfa, space: &S) -> Result<Kappa> {
    if space.alphabet() != d.graph.alphabet() {
        return Err(Error::Unsupported("automaton and coset space use different alphabets".into()));
    }
    let cap = d.state_count();
    let x = build_schreier(space, cap);
    if !x.is_closed() {
        return Err(Error::InfiniteIndex(cap));
    }
    let alphabet = d.graph.alphabet();
    // product walk: states of d (None = dead) paired with cosets
    let start = (Some(d.initial()), x.root());
    let mut seen: HashMap<(Option<VertexId>, VertexId), Word> = HashMap::from([(start, Vec::new())]);
    let mut queue = VecDeque::from([start]);
    while let Some((y, v)) = queue.pop_front() {
        let w = seen[&(y, v)].clone();
        let accepted = y.is_some_and(|y| d.finals.contains(&y));
        if accepted != (v == x.root()) {
            return Err(Error::LanguageMismatch(alphabet.format_word(&w)));
        }
        for a in alphabet.letters() {
            let next = (y.and_then(|y| d.graph.successor(y, a)), x.successor(v, a).unwrap());
            if !seen.contains_key(&next) {
                let mut w2 = w.clone();
                w2.push(a);
                seen.insert(next, w2);
                queue.push_back(next);
            }
        }
    }

    let access = d.access_words();
    let coset = |w: &[Letter]| x.step_det(x.root(), w).ok().flatten().expect("closed Schreier graph");
    let mut map = Vec::with_capacity(d.state_count());
    for y in d.graph.vertices() {
        let w = access[y.index()]
            .as_ref()
            .ok_or_else(|| Error::Unsupported(format!("state `{}` is unreachable", d.graph.name(y))))?;
        map.push(coset(w));
    }
    for y in d.graph.vertices() {
        let mut alternatives: Vec<Word> = Vec::new();
        for &(a, p) in d.graph.in_edges(y) {
            let mut w = access[p.index()].clone().unwrap();
            w.push(a);
            if Some(&w) != access[y.index()].as_ref() && !alternatives.contains(&w) {
                alternatives.push(w);
            }
        }
        if let Some(c) = shortest_cycle(&d.graph, y) {
            let mut w = access[y.index()].clone().unwrap();
            w.extend(c);
            alternatives.push(w);
        }
        for w in alternatives.iter().take(ALTERNATIVES) {
            if d.run(w) == Some(y) && coset(w) != map[y.index()] {
                return Err(Error::NotWellDefined(d.graph.name(y).to_string()));
            }
        }
    }

    let homomorphism = d
        .graph
        .vertices()
        .all(|y| d.graph.out_edges(y).iter().all(|&(a, z)| x.has_edge(map[y.index()], a, map[z.index()])));
    let image: BTreeSet<VertexId> = map.iter().copied().collect();
    Ok(Kappa {
        root_preserved: map[d.initial().index()] == x.root(),
        homomorphism,
        surjective: image.len() == x.vertex_count(),
        injective: image.len() == map.len(),
        schreier: x,
        map,
    })
}

fn shortest_cycle(g: &LabelledGraph, y: VertexId) -> Option<Word> {
    let mut prev: HashMap<VertexId, (VertexId, Letter)> = HashMap::new();
    let mut queue = VecDeque::new();
    for &(a, z) in g.out_edges(y) {
        if z == y {
            return Some(vec![a]);
        }
        if let std::collections::hash_map::Entry::Vacant(e) = prev.entry(z) {
            e.insert((y, a));
            queue.push_back(z);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &(a, z) in g.out_edges(v) {
            if z == y {
                let mut w = vec![a];
                let mut cur = v;
                while cur != y {
                    let (p, b) = prev[&cur];
                    w.push(b);
                    cur = p;
                }
                w.reverse();
                return Some(w);
            }
            if let std::collections::hash_map::Entry::Vacant(e) = prev.entry(z) {
                e.insert((v, a));
                queue.push_back(z);
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum IndexCheck {
    Finite { index: usize },
    Unknown { radius: usize, explored: usize },
}

/// `finite(n)` iff the Schreier graph closes with `n` vertices within `cap`.
pub fn finite_index_check<S: CosetSpace + ?Sized>(space: &S, cap: usize) -> IndexCheck {
    match schreier_to_dfa(space, cap) {
        SchreierAutomaton::Finite(d) => IndexCheck::Finite { index: d.state_count() },
        SchreierAutomaton::Witness(w) => IndexCheck::Unknown { radius: w.radius, explored: w.explored },
    }
}

/// Automata of the two-element example: the Schreier graph of `Z₂` over
/// `Σ = {a}`, and two automata accepting `{a^{2n}}`.
pub mod fixtures {
    use super::*;
    use crate::words::Alphabet;

    fn cycle(names: &[&str], finals: &[&str]) -> Dfa {
        let mut g = LabelledGraph::new(Alphabet::plain(&["a"]).unwrap());
        let ids: Vec<VertexId> = names.iter().map(|n| g.add_vertex(*n)).collect();
        for i in 0..ids.len() {
            g.add_edge(ids[i], Letter(0), ids[(i + 1) % ids.len()]);
        }
        g.set_root(ids[0]);
        let finals = finals.iter().map(|f| g.vertex(f).unwrap()).collect();
        Dfa::new(g, finals).unwrap()
    }

    /// Two states, `o` final.
    pub fn parity_pair() -> Dfa {
        cycle(&["o", "p"], &["o"])
    }

    /// The cycle `o → u → f → l → o` with finals `{o, f}`.
    pub fn parity_cycle() -> Dfa {
        cycle(&["o", "u", "f", "l"], &["o", "f"])
    }

    /// Six-cycle over `{a, a^}` with finals `{0, 3}`: exponent sum divisible by 3.
    pub fn unrolled_mod3() -> Dfa {
        let alphabet = Alphabet::free(&["a"]);
        let mut g = LabelledGraph::new(alphabet);
        let ids: Vec<VertexId> = (0..6).map(|i| g.add_vertex(i.to_string())).collect();
        for i in 0..6 {
            g.add_edge(ids[i], Letter(0), ids[(i + 1) % 6]);
            g.add_edge(ids[(i + 1) % 6], Letter(1), ids[i]);
        }
        g.set_root(ids[0]);
        Dfa::new(g, BTreeSet::from([ids[0], ids[3]])).unwrap()
    }
}
