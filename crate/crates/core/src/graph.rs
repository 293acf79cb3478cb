//! Rooted, edge-labelled directed graphs with path semantics.
//!
//! A graph may be a finite window onto an infinite one: vertices in the
//! *frontier* can have outgoing edges that were never materialized. Path
//! operations report [`Error::FrontierEscape`] instead of truncating silently.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{Alphabet, Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Structure {
    pub deterministic: bool,
    pub fully_labelled: bool,
    pub symmetric: bool,
}

impl Structure {
    pub fn fully_deterministic(&self) -> bool {
        self.deterministic && self.fully_labelled
    }
}

#[derive(Clone, Debug)]
pub struct LabelledGraph {
    alphabet: Alphabet,
    names: Vec<String>,
    index: HashMap<String, VertexId>,
    out: Vec<Vec<(Letter, VertexId)>>,
    inc: Vec<Vec<(Letter, VertexId)>>,
    frontier: Vec<bool>,
    root: VertexId,
}

impl LabelledGraph {
    pub fn new(alphabet: Alphabet) -> Self {
        LabelledGraph {
            alphabet,
            names: Vec::new(),
            index: HashMap::new(),
            out: Vec::new(),
            inc: Vec::new(),
            frontier: Vec::new(),
            root: VertexId(0),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Returns the existing vertex with this name or creates it.
    pub fn add_vertex(&mut self, name: impl Into<String>) -> VertexId {
        let name = name.into();
        if let Some(&v) = self.index.get(&name) {
            return v;
        }
        let v = VertexId(self.names.len() as u32);
        self.index.insert(name.clone(), v);
        self.names.push(name);
        self.out.push(Vec::new());
        self.inc.push(Vec::new());
        self.frontier.push(false);
        v
    }

    /// Inserts `(x, a, y)`; returns false if that exact triple already exists.
    pub fn add_edge(&mut self, x: VertexId, a: Letter, y: VertexId) -> bool {
        if self.out[x.index()].contains(&(a, y)) {
            return false;
        }
        let pos = self.out[x.index()].partition_point(|e| *e < (a, y));
        self.out[x.index()].insert(pos, (a, y));
        let pos = self.inc[y.index()].partition_point(|e| *e < (a, x));
        self.inc[y.index()].insert(pos, (a, x));
        true
    }

    pub fn set_root(&mut self, root: VertexId) {
        self.root = root;
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn set_frontier(&mut self, v: VertexId, on: bool) {
        self.frontier[v.index()] = on;
    }

    pub fn is_frontier(&self, v: VertexId) -> bool {
        self.frontier[v.index()]
    }

    pub fn frontier(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices().filter(|v| self.is_frontier(*v))
    }

    pub fn is_closed(&self) -> bool {
        !self.frontier.iter().any(|&f| f)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.names.len() as u32).map(VertexId)
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.index.get(name).copied()
    }

    pub fn vertex_or_err(&self, name: &str) -> Result<VertexId> {
        self.vertex(name).ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.index()]
    }

    /// Outgoing edges of `v` as `(label, target)`, sorted.
    pub fn out_edges(&self, v: VertexId) -> &[(Letter, VertexId)] {
        &self.out[v.index()]
    }

    /// Ingoing edges of `v` as `(label, source)`, sorted.
    pub fn in_edges(&self, v: VertexId) -> &[(Letter, VertexId)] {
        &self.inc[v.index()]
    }

    /// First `a`-successor of `v`; the unique one in a deterministic graph.
    pub fn successor(&self, v: VertexId, a: Letter) -> Option<VertexId> {
        let edges = &self.out[v.index()];
        let i = edges.partition_point(|e| e.0 < a);
        edges.get(i).filter(|e| e.0 == a).map(|e| e.1)
    }

    pub fn predecessor(&self, v: VertexId, a: Letter) -> Option<VertexId> {
        let edges = &self.inc[v.index()];
        let i = edges.partition_point(|e| e.0 < a);
        edges.get(i).filter(|e| e.0 == a).map(|e| e.1)
    }

    pub fn has_edge(&self, x: VertexId, a: Letter, y: VertexId) -> bool {
        self.out[x.index()].binary_search(&(a, y)).is_ok()
    }

    /// Neighbours in the symmetrized (non-oriented) edge relation.
    pub fn neighbours(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.out[v.index()].iter().chain(self.inc[v.index()].iter()).map(|e| e.1)
    }

    /// Deterministic / fully labelled / symmetric flags.
    ///
    /// Full labelling is only asserted off the frontier.
    pub fn check_structure(&self) -> Structure {
        let k = self.alphabet.len();
        let mut deterministic = true;
        let mut fully_labelled = true;
        for v in self.vertices() {
            let edges = self.out_edges(v);
            let distinct = edges.windows(2).filter(|p| p[0].0 != p[1].0).count() + usize::from(!edges.is_empty());
            if distinct != edges.len() {
                deterministic = false;
            }
            if !self.is_frontier(v) && distinct != k {
                fully_labelled = false;
            }
        }
        let symmetric = self.alphabet.is_symmetric()
            && self.vertices().all(|x| {
                self.out_edges(x)
                    .iter()
                    .all(|&(a, y)| self.has_edge(y, self.alphabet.inverse(a).unwrap(), x))
            });
        Structure { deterministic, fully_labelled, symmetric }
    }

    /// At most one ingoing edge per label at every vertex.
    pub fn is_codeterministic(&self) -> bool {
        self.vertices().all(|v| self.in_edges(v).windows(2).all(|p| p[0].0 != p[1].0))
    }

    /// The set `x^w` of endpoints of paths from `x` labelled `w`.
    pub fn step(&self, x: VertexId, w: &[Letter]) -> Result<BTreeSet<VertexId>> {
        let mut current: BTreeSet<VertexId> = BTreeSet::from([x]);
        for &a in w {
            let mut next = BTreeSet::new();
            for &v in &current {
                self.extend_by(v, a, &mut next)?;
            }
            current = next;
        }
        Ok(current)
    }

    fn extend_by(&self, v: VertexId, a: Letter, into: &mut BTreeSet<VertexId>) -> Result<()> {
        let before = into.len();
        let edges = &self.out[v.index()];
        let i = edges.partition_point(|e| e.0 < a);
        let mut found = false;
        for e in edges[i..].iter().take_while(|e| e.0 == a) {
            into.insert(e.1);
            found = true;
        }
        if !found && self.is_frontier(v) {
            return Err(Error::FrontierEscape(self.name(v).to_string()));
        }
        let _ = before;
        Ok(())
    }

    /// Deterministic step: `Ok(None)` when no path with label `w` exists.
    pub fn step_det(&self, x: VertexId, w: &[Letter]) -> Result<Option<VertexId>> {
        let mut v = x;
        for &a in w {
            match self.successor(v, a) {
                Some(y) => v = y,
                None if self.is_frontier(v) => {
                    return Err(Error::FrontierEscape(self.name(v).to_string()))
                }
                None => return Ok(None),
            }
        }
        Ok(Some(v))
    }

    /// `{ w : |w| ≤ max_len, y ∈ x^w }`, by exhaustive walk enumeration.
    pub fn enumerate_loop_language(&self, x: VertexId, y: VertexId, max_len: usize) -> Result<BTreeSet<Word>> {
        let mut found = BTreeSet::new();
        let mut word = Vec::new();
        self.walk(&BTreeSet::from([x]), y, max_len, &mut word, &mut found)?;
        Ok(found)
    }

    fn walk(
        &self,
        current: &BTreeSet<VertexId>,
        target: VertexId,
        budget: usize,
        word: &mut Word,
        found: &mut BTreeSet<Word>,
    ) -> Result<()> {
        if current.contains(&target) {
            found.insert(word.clone());
        }
        if budget == 0 {
            return Ok(());
        }
        for a in self.alphabet.letters() {
            let mut next = BTreeSet::new();
            for &v in current {
                self.extend_by(v, a, &mut next)?;
            }
            if next.is_empty() {
                continue;
            }
            word.push(a);
            self.walk(&next, target, budget - 1, word, found)?;
            word.pop();
        }
        Ok(())
    }

    /// Breadth-first distances `d(·, F)` in the symmetrized edge relation,
    /// computed inside the explored region.
    pub fn distances_from(&self, sources: &[VertexId]) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s.index()].is_none() {
                dist[s.index()] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[v.index()].unwrap();
            for u in self.neighbours(v) {
                if dist[u.index()].is_none() {
                    dist[u.index()] = Some(d + 1);
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    /// `B(F, n) = { x : d(x, F) ≤ n }`.
    ///
    /// Fails if the ball reaches a frontier vertex before radius `n`, since its
    /// unexplored neighbours could belong to the ball.
    pub fn ball(&self, centers: &[VertexId], radius: usize) -> Result<GraphBall> {
        if centers.is_empty() {
            return Err(Error::Unsupported("ball needs a nonempty centre set".into()));
        }
        let dist = self.distances_from(centers);
        let mut members = Vec::new();
        for v in self.vertices() {
            if let Some(d) = dist[v.index()] {
                if d <= radius {
                    if d < radius && self.is_frontier(v) {
                        return Err(Error::FrontierEscape(self.name(v).to_string()));
                    }
                    members.push((v, d));
                }
            }
        }
        Ok(GraphBall { centers: centers.to_vec(), radius, members })
    }

    /// Graphviz rendering. With `fold_symmetric`, each pair `(x,a,y)`,
    /// `(y,a⁻¹,x)` is drawn once, using the lower-indexed label.
    pub fn to_dot(&self, name: &str, fold_symmetric: bool, finals: &BTreeSet<VertexId>) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{}\" {{", escape(name));
        let _ = writeln!(s, "  rankdir=LR;");
        let _ = writeln!(s, "  __start [shape=point];");
        for v in self.vertices() {
            let shape = if finals.contains(&v) { "doublecircle" } else { "circle" };
            let style = if self.is_frontier(v) { ", style=dashed" } else { "" };
            let _ = writeln!(s, "  \"{}\" [shape={shape}{style}];", escape(self.name(v)));
        }
        let _ = writeln!(s, "  __start -> \"{}\";", escape(self.name(self.root)));
        for x in self.vertices() {
            for &(a, y) in self.out_edges(x) {
                if fold_symmetric {
                    if let Some(inv) = self.alphabet.inverse(a) {
                        if inv < a && self.has_edge(y, inv, x) {
                            continue;
                        }
                    }
                }
                let _ = writeln!(
                    s,
                    "  \"{}\" -> \"{}\" [label=\"{}\"];",
                    escape(self.name(x)),
                    escape(self.name(y)),
                    escape(self.alphabet.name(a))
                );
            }
        }
        s.push_str("}\n");
        s
    }

    /// Line-oriented text form: `alphabet …`, `root v`, `vertex v`, `edge x a y`,
    /// `frontier v`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "alphabet {}", self.alphabet.declaration());
        let _ = writeln!(s, "root {}", self.name(self.root));
        for v in self.vertices() {
            if self.out_edges(v).is_empty() && self.in_edges(v).is_empty() {
                let _ = writeln!(s, "vertex {}", self.name(v));
            }
        }
        for x in self.vertices() {
            for &(a, y) in self.out_edges(x) {
                let _ = writeln!(s, "edge {} {} {}", self.name(x), self.alphabet.name(a), self.name(y));
            }
        }
        for v in self.frontier() {
            let _ = writeln!(s, "frontier {}", self.name(v));
        }
        s
    }

    /// Parses the text form; `final v` lines are returned separately.
    pub fn parse_text(text: &str) -> Result<(LabelledGraph, BTreeSet<VertexId>)> {
        let mut graph: Option<LabelledGraph> = None;
        let mut root: Option<String> = None;
        let mut finals = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let ln = ln + 1;
            let mut parts = line.split_whitespace();
            let keyword = parts.next().unwrap();
            let rest: Vec<&str> = parts.collect();
            if keyword == "alphabet" {
                if graph.is_some() {
                    return Err(Error::parse(ln, "duplicate alphabet"));
                }
                let alphabet = Alphabet::parse(&rest.join(" ")).map_err(|e| Error::parse(ln, e.to_string()))?;
                graph = Some(LabelledGraph::new(alphabet));
                continue;
            }
            let g = graph.as_mut().ok_or_else(|| Error::parse(ln, "`alphabet` must come first"))?;
            match (keyword, rest.as_slice()) {
                ("root", [v]) => {
                    g.add_vertex(*v);
                    root = Some(v.to_string());
                }
                ("vertex", [v]) => {
                    g.add_vertex(*v);
                }
                ("frontier", [v]) => {
                    let v = g.add_vertex(*v);
                    g.set_frontier(v, true);
                }
                ("final", [v]) => finals.push(g.add_vertex(*v)),
                ("edge", [x, a, y]) => {
                    let label = g
                        .alphabet
                        .letter(a)
                        .ok_or_else(|| Error::parse(ln, format!("unknown label `{a}`")))?;
                    let x = g.add_vertex(*x);
                    let y = g.add_vertex(*y);
                    g.add_edge(x, label, y);
                }
                _ => return Err(Error::parse(ln, format!("cannot parse `{line}`"))),
            }
        }
        let mut g = graph.ok_or_else(|| Error::parse(0, "missing `alphabet` line"))?;
        let root = root.ok_or_else(|| Error::parse(0, "missing `root` line"))?;
        let r = g.vertex(&root).unwrap();
        g.set_root(r);
        Ok((g, finals.into_iter().collect()))
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// The ball `B(F, n)` with per-member distances.
#[derive(Clone, Debug)]
pub struct GraphBall {
    pub centers: Vec<VertexId>,
    pub radius: usize,
    pub members: Vec<(VertexId, usize)>,
}

impl GraphBall {
    pub fn contains(&self, v: VertexId) -> bool {
        self.members.iter().any(|m| m.0 == v)
    }

    pub fn vertices(&self) -> BTreeSet<VertexId> {
        self.members.iter().map(|m| m.0).collect()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}
