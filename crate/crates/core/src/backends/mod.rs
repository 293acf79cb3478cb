//! Coset spaces realizing pairs `(G, K, ψ)` and the Schreier graphs they span.

mod cover;
mod finite;
mod free;
mod rules;

use std::collections::{HashMap, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

pub use cover::{cover_is_local_bijection, fundamental_group_sample, spanning_tree_generators, universal_cover_map};
pub use finite::FiniteGroupBackend;
pub use free::{FreeGroupSubgroupBackend, FreeKey};
pub use rules::{quadratic_w, Rule, RuleBackend};

use crate::error::{Error, Result};
use crate::graph::{LabelledGraph, VertexId};
use crate::words::{Alphabet, Letter};

/// Right cosets `K\G` with the action `Kg ↦ Kg·ψ(a)`.
///
/// Keys must be canonical: equal keys exactly when the cosets are equal.
pub trait CosetSpace: Sync {
    type Key: Clone + Eq + Hash + Debug + Send + Sync;

    fn alphabet(&self) -> &Alphabet;
    fn root(&self) -> Self::Key;
    fn act(&self, key: &Self::Key, a: Letter) -> Self::Key;
    /// Whitespace-free vertex name for the key.
    fn describe(&self, key: &Self::Key) -> String;

    fn act_word(&self, key: &Self::Key, w: &[Letter]) -> Self::Key {
        w.iter().fold(key.clone(), |k, &a| self.act(&k, a))
    }
}

/// `ψ(w) ∈ K`, decided by acting with `w` on the root coset.
pub fn word_problem_oracle<S: CosetSpace + ?Sized>(space: &S, w: &[Letter]) -> bool {
    space.act_word(&space.root(), w) == space.root()
}

/// Breadth-first Schreier graph out to `radius` (distance along outgoing edges).
///
/// Vertices whose edges leave the explored region are put on the frontier; a
/// graph without frontier is the whole (finite) Schreier graph.
pub fn build_schreier<S: CosetSpace + ?Sized>(space: &S, radius: usize) -> LabelledGraph {
    build_schreier_capped(space, radius, usize::MAX).expect("uncapped build cannot exhaust")
}

/// As [`build_schreier`], failing with `ArenaExhausted` past `max_vertices`.
pub fn build_schreier_capped<S: CosetSpace + ?Sized>(
    space: &S,
    radius: usize,
    max_vertices: usize,
) -> Result<LabelledGraph> {
    let alphabet = space.alphabet().clone();
    let letters: Vec<Letter> = alphabet.letters().collect();
    let mut graph = LabelledGraph::new(alphabet);
    let mut ids: HashMap<S::Key, VertexId> = HashMap::new();
    let mut keys: Vec<S::Key> = Vec::new();
    let mut depth: Vec<usize> = Vec::new();

    let add = |graph: &mut LabelledGraph, key: S::Key, d: usize, keys: &mut Vec<S::Key>, depth: &mut Vec<usize>| {
        let mut name = space.describe(&key);
        if graph.vertex(&name).is_some() {
            name = format!("{name}#{}", keys.len());
        }
        let v = graph.add_vertex(name);
        keys.push(key);
        depth.push(d);
        v
    };

    let root = space.root();
    let r = add(&mut graph, root.clone(), 0, &mut keys, &mut depth);
    ids.insert(root, r);
    graph.set_root(r);
    let mut queue = VecDeque::from([r]);
    while let Some(v) = queue.pop_front() {
        let d = depth[v.index()];
        for &a in &letters {
            let target = space.act(&keys[v.index()], a);
            let u = match ids.get(&target) {
                Some(&u) => u,
                None if d < radius => {
                    if keys.len() >= max_vertices {
                        return Err(Error::ArenaExhausted(max_vertices));
                    }
                    let u = add(&mut graph, target.clone(), d + 1, &mut keys, &mut depth);
                    ids.insert(target, u);
                    queue.push_back(u);
                    u
                }
                None => {
                    graph.set_frontier(v, true);
                    continue;
                }
            };
            graph.add_edge(v, a, u);
        }
    }
    Ok(graph)
}

/// A backend chosen at run time (command line, fixtures).
pub enum Backend {
    Free(FreeGroupSubgroupBackend),
    Finite(FiniteGroupBackend),
    Rule(RuleBackend),
}

/// Key of a [`Backend`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BackendKey {
    Free(FreeKey),
    Finite(usize),
    Rule((i64, i64)),
}

impl CosetSpace for Backend {
    type Key = BackendKey;

    fn alphabet(&self) -> &Alphabet {
        match self {
            Backend::Free(b) => b.alphabet(),
            Backend::Finite(b) => b.alphabet(),
            Backend::Rule(b) => b.alphabet(),
        }
    }

    fn root(&self) -> BackendKey {
        match self {
            Backend::Free(b) => BackendKey::Free(b.root()),
            Backend::Finite(b) => BackendKey::Finite(b.root()),
            Backend::Rule(b) => BackendKey::Rule(b.root()),
        }
    }

    fn act(&self, key: &BackendKey, a: Letter) -> BackendKey {
        match (self, key) {
            (Backend::Free(b), BackendKey::Free(k)) => BackendKey::Free(b.act(k, a)),
            (Backend::Finite(b), BackendKey::Finite(k)) => BackendKey::Finite(b.act(k, a)),
            (Backend::Rule(b), BackendKey::Rule(k)) => BackendKey::Rule(b.act(k, a)),
            _ => panic!("key from a different backend"),
        }
    }

    fn describe(&self, key: &BackendKey) -> String {
        match (self, key) {
            (Backend::Free(b), BackendKey::Free(k)) => b.describe(k),
            (Backend::Finite(b), BackendKey::Finite(k)) => b.describe(k),
            (Backend::Rule(b), BackendKey::Rule(k)) => b.describe(k),
            _ => panic!("key from a different backend"),
        }
    }
}

impl Backend {
    /// Parses a backend description.
    ///
    /// Accepted forms: `rule:NAME[:W=1,2]`, `free:GEN;GEN` over `a a^ b b^`,
    /// `cyclic:N`, and the long forms `backend free-subgroup alphabet … gens "…" …`,
    /// `backend finite table FILE subgroup 0 …`, `backend rule NAME [W=…]`.
    /// `read_file` resolves table paths.
    pub fn parse(spec: &str, read_file: &dyn Fn(&str) -> Result<String>) -> Result<Backend> {
        let spec = spec.trim();
        if let Some(rest) = spec.strip_prefix("rule:") {
            let mut parts = rest.splitn(2, ':');
            let name = parts.next().unwrap_or_default();
            return Ok(Backend::Rule(RuleBackend::parse(name, parts.next())?));
        }
        if let Some(rest) = spec.strip_prefix("cyclic:") {
            let n: usize = rest.parse().map_err(|_| Error::parse(0, format!("bad order `{rest}`")))?;
            return Ok(Backend::Finite(FiniteGroupBackend::cyclic_plain(n)?));
        }
        if let Some(rest) = spec.strip_prefix("free:") {
            let alphabet = Alphabet::free(&["a", "b"]);
            let gens = rest
                .split(';')
                .filter(|g| !g.trim().is_empty())
                .map(|g| alphabet.parse_word(g.trim()))
                .collect::<Result<Vec<_>>>()?;
            return Ok(Backend::Free(FreeGroupSubgroupBackend::new(alphabet, &gens)?));
        }
        let tokens = tokenize(spec)?;
        let mut it = tokens.iter().map(String::as_str).peekable();
        if it.peek() == Some(&"backend") {
            it.next();
        }
        match it.next() {
            Some("free-subgroup") => {
                let mut names = Vec::new();
                let mut gens = Vec::new();
                let mut mode = "";
                for tok in it {
                    match tok {
                        "alphabet" | "gens" => mode = if tok == "alphabet" { "a" } else { "g" },
                        _ if mode == "a" => names.push(tok.to_string()),
                        _ if mode == "g" => gens.push(tok.to_string()),
                        _ => return Err(Error::parse(0, format!("unexpected `{tok}`"))),
                    }
                }
                let alphabet = Alphabet::parse(&names.join(" "))?;
                let gens = gens.iter().map(|g| alphabet.parse_word(g)).collect::<Result<Vec<_>>>()?;
                Ok(Backend::Free(FreeGroupSubgroupBackend::new(alphabet, &gens)?))
            }
            Some("finite") => {
                let mut table = None;
                let mut subgroup = Vec::new();
                let mut mode = "";
                for tok in it {
                    match tok {
                        "table" | "subgroup" => mode = tok,
                        _ if mode == "table" => table = Some(tok.to_string()),
                        _ if mode == "subgroup" => subgroup.push(
                            tok.parse::<usize>().map_err(|_| Error::parse(0, format!("bad element `{tok}`")))?,
                        ),
                        _ => return Err(Error::parse(0, format!("unexpected `{tok}`"))),
                    }
                }
                let path = table.ok_or_else(|| Error::parse(0, "missing `table <file>`"))?;
                let text = read_file(&path)?;
                Ok(Backend::Finite(FiniteGroupBackend::parse_table(&text, &subgroup)?))
            }
            Some("rule") => {
                let name = it.next().ok_or_else(|| Error::parse(0, "missing rule name"))?;
                let params: Vec<&str> = it.collect();
                let params = if params.is_empty() { None } else { Some(params.join(",")) };
                Ok(Backend::Rule(RuleBackend::parse(name, params.as_deref())?))
            }
            _ => Err(Error::parse(0, format!("unknown backend `{spec}`"))),
        }
    }
}

/// Whitespace tokenizer honouring double quotes.
fn tokenize(s: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '"' {
            chars.next();
            let mut tok = String::new();
            loop {
                match chars.next() {
                    Some('"') => break,
                    Some(ch) => tok.push(ch),
                    None => return Err(Error::parse(0, "unterminated quote")),
                }
            }
            out.push(tok);
        } else {
            let mut tok = String::new();
            while let Some(&ch) = chars.peek() {
                if ch.is_whitespace() {
                    break;
                }
                tok.push(ch);
                chars.next();
            }
            out.push(tok);
        }
    }
    Ok(out)
}
