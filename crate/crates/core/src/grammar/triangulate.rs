//! Diagonal triangulations of the polygon of a derived word, and the
//! distance bound along diagonals in a graph whose loop language the
//! grammar generates.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use super::cnf::{min_yield, CnfGrammar};
use super::cyk::{cyk_member, cyk_tree, Derivation, ParseTree};
use crate::error::{Error, Result};
use crate::graph::{LabelledGraph, VertexId};
use crate::words::Letter;

/// Oriented labelled diagonal `(t_from, T, t_to)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Diagonal {
    pub from: usize,
    pub var: usize,
    pub to: usize,
}

/// Polygon `t₀ … tₙ` with edges labelled by the letters of `word` and the
/// closing edge `(t₀, S, tₙ)`, plus inserted diagonals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonTriangulation {
    pub word: Vec<Letter>,
    pub diagonals: Vec<Diagonal>,
}

impl PolygonTriangulation {
    /// Non-crossing, one diagonal per vertex pair, none between neighbours,
    /// and exactly `n − 2` of them.
    pub fn is_valid(&self) -> bool {
        let n = self.word.len();
        if n < 2 {
            return self.diagonals.is_empty();
        }
        let mut pairs: Vec<(usize, usize)> = self.diagonals.iter().map(|d| (d.from, d.to)).collect();
        pairs.sort_unstable();
        let before = pairs.len();
        pairs.dedup();
        if pairs.len() != before || pairs.len() != n - 2 {
            return false;
        }
        if pairs.iter().any(|&(i, j)| j < i + 2 || j > n || (i == 0 && j == n)) {
            return false;
        }
        pairs.iter().all(|&(a, b)| pairs.iter().all(|&(c, d)| !((a < c && c < b && b < d) || (c < a && a < d && d < b))))
    }

    pub fn to_dot(&self, g: &CnfGrammar) -> String {
        let n = self.word.len();
        let mut s = String::from("digraph polygon {\n  layout=circo;\n");
        for i in 0..=n {
            let _ = writeln!(s, "  t{i};");
        }
        for (i, a) in self.word.iter().enumerate() {
            let _ = writeln!(s, "  t{i} -> t{} [label=\"{}\"];", i + 1, g.terminals.name(*a));
        }
        let _ = writeln!(s, "  t0 -> t{n} [label=\"{}\"];", g.variables[g.start]);
        for d in &self.diagonals {
            let _ = writeln!(s, "  t{} -> t{} [label=\"{}\", style=dashed];", d.from, d.to, g.variables[d.var]);
        }
        s.push_str("}\n");
        s
    }
}

fn spans(tree: &ParseTree, start: usize, out: &mut Vec<Diagonal>) -> usize {
    match tree {
        ParseTree::Empty => 0,
        ParseTree::Leaf { .. } => 1,
        ParseTree::Node { left, right, .. } => {
            let l = spans(left, start, out);
            let r = spans(right, start + l, out);
            if l >= 2 {
                out.push(Diagonal { from: start, var: left.var().unwrap(), to: start + l });
            }
            if r >= 2 {
                out.push(Diagonal { from: start + l, var: right.var().unwrap(), to: start + l + r });
            }
            l + r
        }
    }
}

/// Replays `derivation`; each binary step `T ⊢ U Û` splitting the yield of
/// `T` at `j` contributes `(i, U, j)` and `(j, Û, k)` when non-adjacent.
pub fn triangulate(g: &CnfGrammar, w: &[Letter], derivation: &Derivation) -> Result<PolygonTriangulation> {
    let tree = derivation.replay(g)?;
    if tree.yield_word() != w {
        return Err(Error::InvalidDerivation("derivation yields a different word".into()));
    }
    let mut diagonals = Vec::new();
    spans(&tree, 0, &mut diagonals);
    diagonals.sort_unstable();
    for d in &diagonals {
        if cyk_tree(g, d.var, &w[d.from..d.to]).is_none() {
            return Err(Error::InvalidDerivation(format!("{} does not derive its subword", g.variables[d.var])));
        }
    }
    Ok(PolygonTriangulation { word: w.to_vec(), diagonals })
}

fn bounded_distance(graph: &LabelledGraph, x: VertexId, y: VertexId, limit: usize) -> Result<bool> {
    let mut dist: HashMap<VertexId, usize> = HashMap::from([(x, 0)]);
    let mut queue = VecDeque::from([x]);
    while let Some(v) = queue.pop_front() {
        if v == y {
            return Ok(true);
        }
        let d = dist[&v];
        if d == limit {
            continue;
        }
        if graph.is_frontier(v) {
            return Err(Error::FrontierEscape(graph.name(v).to_string()));
        }
        for u in graph.neighbours(v) {
            if !dist.contains_key(&u) {
                dist.insert(u, d + 1);
                queue.push_back(u);
            }
        }
    }
    Ok(false)
}

/// For the triangulation of `w` from its CYK derivation, checks
/// `d(x^{a₁…aᵢ}, x^{a₁…aⱼ}) ≤ m(T)` on every diagonal `(i, T, j)`.
pub fn diagonal_distance_check(g: &CnfGrammar, graph: &LabelledGraph, x: VertexId, w: &[Letter]) -> Result<bool> {
    let m = min_yield(g);
    let bounds: Vec<usize> = (0..g.variables.len()).map(|t| m.of(t)).collect();
    diagonal_distance_check_with(g, graph, x, w, &bounds)
}

/// As [`diagonal_distance_check`] with caller-supplied bounds per variable.
pub fn diagonal_distance_check_with(
    g: &CnfGrammar,
    graph: &LabelledGraph,
    x: VertexId,
    w: &[Letter],
    bounds: &[usize],
) -> Result<bool> {
    let derivation = cyk_member(g, w).ok_or(Error::NotInLanguage)?;
    let tri = triangulate(g, w, &derivation)?;
    let mut path = vec![x];
    for i in 0..w.len() {
        let next = graph.step_det(path[i], &w[i..=i])?.ok_or(Error::NotInLanguage)?;
        path.push(next);
    }
    for d in &tri.diagonals {
        if !bounded_distance(graph, path[d.from], path[d.to], bounds[d.var])? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backends::{build_schreier, FiniteGroupBackend, FreeGroupSubgroupBackend};
    use crate::grammar::{fixtures, to_cnf};
    use crate::words::Alphabet;
    use proptest::prelude::*;

    #[test]
    fn worked_example() {
        let (g, w, d) = fixtures::worked_derivation();
        let tri = triangulate(&g, &w, &d).unwrap();
        let named: Vec<(usize, &str, usize)> =
            tri.diagonals.iter().map(|x| (x.from, g.variables[x.var].as_str(), x.to)).collect();
        assert_eq!(named, vec![(0, "T1", 2), (2, "T^1", 6), (3, "T^2", 6), (3, "T3", 5)]);
        assert!(tri.is_valid());
        assert!(tri.to_dot(&g).contains("t0 -> t6"));
    }

    #[test]
    fn short_words_have_no_diagonals() {
        let g = to_cnf(&fixtures::even_a()).unwrap();
        let w = vec![Letter(0); 2];
        let tri = triangulate(&g, &w, &cyk_member(&g, &w).unwrap()).unwrap();
        assert!(tri.diagonals.is_empty());
        let other = vec![Letter(0); 4];
        assert!(matches!(triangulate(&g, &other, &cyk_member(&g, &w).unwrap()), Err(Error::InvalidDerivation(_))));
    }

    #[test]
    fn two_vertex_distances() {
        let g = to_cnf(&fixtures::even_a()).unwrap();
        let z2 = build_schreier(&FiniteGroupBackend::cyclic_plain(2).unwrap(), 2);
        assert!(diagonal_distance_check(&g, &z2, z2.root(), &[Letter(0); 4]).unwrap());
        assert_eq!(diagonal_distance_check(&g, &z2, z2.root(), &[Letter(0); 3]), Err(Error::NotInLanguage));
        // lowering every bound by one breaks the odd-span diagonals
        let m = min_yield(&g);
        let lowered: Vec<usize> = (0..g.variables.len()).map(|t| m.of(t).saturating_sub(1)).collect();
        assert!(!diagonal_distance_check_with(&g, &z2, z2.root(), &[Letter(0); 6], &lowered).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn dyck_triangulations(half in proptest::collection::vec(0u16..4, 1..=5), seed in any::<u64>()) {
            let g = to_cnf(&fixtures::dyck_f2()).unwrap();
            let alpha = g.terminals.clone();
            // w = v v⁻¹ with a random insertion point rotates into other shapes
            let v: Vec<Letter> = half.iter().map(|&x| Letter(x)).collect();
            let mut w = v.clone();
            w.extend(crate::words::invert_word(&alpha, &v).unwrap());
            let cut = (seed as usize) % (w.len() + 1);
            let mut w2 = w[cut..].to_vec();
            w2.extend_from_slice(&w[..cut]);
            let d = cyk_member(&g, &w2).unwrap();
            let tri = triangulate(&g, &w2, &d).unwrap();
            prop_assert!(tri.is_valid());
            let t = cyk_tree(&g, g.start, &w2).unwrap();
            let left = triangulate(&g, &w2, &Derivation::leftmost(&t)).unwrap();
            prop_assert_eq!(left, tri);
            let tree = build_schreier(&FreeGroupSubgroupBackend::new(Alphabet::free(&["a", "b"]), &[]).unwrap(), 6);
            prop_assert!(diagonal_distance_check(&g, &tree, tree.root(), &w2).unwrap());
        }
    }
}
