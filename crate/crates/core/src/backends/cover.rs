//! Universal cover, fundamental group samples and spanning-tree generators.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{LabelledGraph, VertexId};
use crate::words::{invert_word, reduced_unchecked, Letter, ReducedWord, Word};

fn require_cover_preconditions(g: &LabelledGraph) -> Result<()> {
    let s = g.check_structure();
    if !s.symmetric {
        return Err(Error::NotSymmetric);
    }
    if !s.deterministic {
        let v = g
            .vertices()
            .find(|&v| g.out_edges(v).windows(2).any(|p| p[0].0 == p[1].0))
            .map(|v| g.name(v).to_string())
            .unwrap_or_default();
        return Err(Error::NotDeterministic(v));
    }
    Ok(())
}

/// `Φ(w) = o^w` for a reduced word `w`.
pub fn universal_cover_map(g: &LabelledGraph, w: &ReducedWord) -> Result<VertexId> {
    require_cover_preconditions(g)?;
    g.step_det(g.root(), w)?.ok_or_else(|| Error::NotDeterministic(g.name(g.root()).to_string()))
}

/// The edges of the tree at `w` map bijectively onto the edges at `Φ(w)`.
pub fn cover_is_local_bijection(g: &LabelledGraph, w: &ReducedWord) -> Result<bool> {
    let x = universal_cover_map(g, w)?;
    if g.is_frontier(x) {
        return Err(Error::FrontierEscape(g.name(x).to_string()));
    }
    let alphabet = g.alphabet();
    // Tree edges at w are one per letter; their images are x's edges per letter.
    let images: BTreeSet<(Letter, VertexId)> =
        alphabet.letters().filter_map(|a| g.successor(x, a).map(|y| (a, y))).collect();
    Ok(images.len() == alphabet.len() && g.out_edges(x).len() == alphabet.len())
}

/// `{ w reduced, |w| ≤ max_len : o^w = o }`.
pub fn fundamental_group_sample(g: &LabelledGraph, max_len: usize) -> Result<BTreeSet<ReducedWord>> {
    require_cover_preconditions(g)?;
    let mut out = BTreeSet::new();
    let mut word = Vec::new();
    walk_reduced(g, g.root(), max_len, &mut word, &mut out)?;
    Ok(out)
}

fn walk_reduced(
    g: &LabelledGraph,
    v: VertexId,
    budget: usize,
    word: &mut Word,
    out: &mut BTreeSet<ReducedWord>,
) -> Result<()> {
    if v == g.root() {
        out.insert(reduced_unchecked(word.clone()));
    }
    if budget == 0 {
        return Ok(());
    }
    let alphabet = g.alphabet();
    for a in alphabet.letters() {
        if word.last().is_some_and(|&l| alphabet.inverse(l) == Some(a)) {
            continue;
        }
        let u = match g.successor(v, a) {
            Some(u) => u,
            None if g.is_frontier(v) => return Err(Error::FrontierEscape(g.name(v).to_string())),
            None => continue,
        };
        word.push(a);
        walk_reduced(g, u, budget - 1, word, out)?;
        word.pop();
    }
    Ok(())
}

/// Free generators of the fundamental group from a breadth-first spanning tree.
///
/// The tree is grown from the root, visiting edges in label order. Each
/// non-tree pair `{e, e⁻¹}` is oriented so that its source comes first in
/// tree order (ties by label), and contributes
/// `ℓ(o→e⁻) · ℓ(e) · ℓ(e⁺→o)`.
pub fn spanning_tree_generators(g: &LabelledGraph) -> Result<Vec<Word>> {
    if !g.check_structure().symmetric {
        return Err(Error::NotSymmetric);
    }
    let alphabet = g.alphabet();
    let n = g.vertex_count();
    let mut order = vec![usize::MAX; n];
    let mut parent: Vec<Option<(VertexId, Letter)>> = vec![None; n];
    let mut path: Vec<Word> = vec![Vec::new(); n];
    let root = g.root();
    order[root.index()] = 0;
    let mut seen = 1;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &(a, u) in g.out_edges(v) {
            if order[u.index()] == usize::MAX {
                order[u.index()] = seen;
                seen += 1;
                parent[u.index()] = Some((v, a));
                let mut p = path[v.index()].clone();
                p.push(a);
                path[u.index()] = p;
                queue.push_back(u);
            }
        }
    }
    if seen != n {
        return Err(Error::NotConnected);
    }
    let is_tree_edge = |x: VertexId, a: Letter, y: VertexId| {
        parent[y.index()] == Some((x, a)) || parent[x.index()] == Some((y, alphabet.inverse(a).unwrap()))
    };
    let mut chosen: Vec<((usize, Letter), Word)> = Vec::new();
    for x in g.vertices() {
        for &(a, y) in g.out_edges(x) {
            if is_tree_edge(x, a, y) {
                continue;
            }
            let inv = alphabet.inverse(a).unwrap();
            let key = (order[x.index()], a);
            let partner = (order[y.index()], inv);
            // Loops `(x,a,x)` pair with `(x,a⁻¹,x)`; keep the smaller label.
            if partner < key {
                continue;
            }
            let mut w = path[x.index()].clone();
            w.push(a);
            w.extend(invert_word(alphabet, &path[y.index()])?);
            chosen.push((key, w));
        }
    }
    chosen.sort();
    Ok(chosen.into_iter().map(|(_, w)| w).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backends::{build_schreier, FiniteGroupBackend, FreeGroupSubgroupBackend, Rule, RuleBackend};
    use crate::words::{free_reduce, group_multiply, Alphabet};

    fn two_vertex() -> LabelledGraph {
        build_schreier(&FiniteGroupBackend::cyclic_symmetric(2).unwrap(), 3)
    }

    fn cycle(k: usize) -> LabelledGraph {
        build_schreier(&FiniteGroupBackend::cyclic_symmetric(k).unwrap(), k)
    }

    #[test]
    fn cover_map_examples() {
        let comb = build_schreier(&RuleBackend::new(Rule::Comb), 6);
        let alpha = comb.alphabet().clone();
        assert_eq!(universal_cover_map(&comb, &ReducedWord::empty()).unwrap(), comb.root());
        let w = free_reduce(&alpha, &alpha.parse_word("b a b^").unwrap());
        assert_eq!(universal_cover_map(&comb, &w).unwrap(), comb.root());
        assert!(cover_is_local_bijection(&comb, &w).unwrap());
        let z2 = two_vertex();
        let aa = free_reduce(z2.alphabet(), &z2.alphabet().parse_word("a a").unwrap());
        assert_eq!(universal_cover_map(&z2, &aa).unwrap(), z2.root());
        let plain = build_schreier(&FiniteGroupBackend::cyclic_plain(2).unwrap(), 2);
        assert_eq!(universal_cover_map(&plain, &ReducedWord::empty()), Err(Error::NotSymmetric));
    }

    #[test]
    fn fundamental_group_examples() {
        let tree = build_schreier(&FreeGroupSubgroupBackend::new(Alphabet::free(&["a", "b"]), &[]).unwrap(), 5);
        assert_eq!(fundamental_group_sample(&tree, 4).unwrap(), BTreeSet::from([ReducedWord::empty()]));
        let z2 = two_vertex();
        let alpha = z2.alphabet().clone();
        let got: BTreeSet<String> = fundamental_group_sample(&z2, 2).unwrap().iter().map(|w| alpha.format_word(w)).collect();
        assert_eq!(got, BTreeSet::from(["ε".to_string(), "a a".into(), "a^ a^".into()]));
        let comb = build_schreier(&RuleBackend::new(Rule::Comb), 6);
        let calpha = comb.alphabet().clone();
        let sample = fundamental_group_sample(&comb, 4).unwrap();
        let bab = free_reduce(&calpha, &calpha.parse_word("b a b^").unwrap());
        assert!(sample.contains(&bab));
        // exhaustive trace oracle over the coordinate rules
        let rules = RuleBackend::new(Rule::Comb);
        use crate::backends::CosetSpace;
        for w in crate::words::words_up_to(4, 4) {
            if crate::words::is_reduced(&calpha, &w) {
                let closes = rules.act_word(&(0, 0), &w) == (0, 0);
                assert_eq!(sample.contains(&reduced_unchecked(w)), closes);
            }
        }
        // closed under inversion and products that stay short
        for x in &sample {
            let inv = free_reduce(&calpha, &invert_word(&calpha, x).unwrap());
            assert!(sample.contains(&inv));
            for y in &sample {
                let p = group_multiply(&calpha, x, y);
                if p.len() <= 4 {
                    assert!(sample.contains(&p));
                }
            }
        }
    }

    #[test]
    fn spanning_tree_examples() {
        let z2 = two_vertex();
        let alpha = z2.alphabet().clone();
        let gens: Vec<String> = spanning_tree_generators(&z2).unwrap().iter().map(|w| alpha.format_word(w)).collect();
        assert_eq!(gens, vec!["a^ a^".to_string()]);
        let five = cycle(5);
        let gens: Vec<String> = spanning_tree_generators(&five).unwrap().iter().map(|w| alpha.format_word(w)).collect();
        assert_eq!(gens.len(), 1);
        let w = alpha.parse_word(&gens[0]).unwrap();
        let r = free_reduce(&alpha, &w);
        let exp: i32 = r.iter().map(|a| if a.0 == 0 { 1 } else { -1 }).sum();
        assert_eq!(exp.abs(), 5);
        assert_eq!(r.len(), 5);
        let f2 = FreeGroupSubgroupBackend::new(Alphabet::free(&["a", "b"]), &[]).unwrap();
        let tree = build_schreier(&f2, 3);
        assert!(spanning_tree_generators(&tree).unwrap().is_empty());
        let plain = build_schreier(&FiniteGroupBackend::cyclic_plain(2).unwrap(), 2);
        assert_eq!(spanning_tree_generators(&plain), Err(Error::NotSymmetric));
    }

    #[test]
    fn index_two_generators() {
        // Schreier graph of the index-2 subgroup of F₂ where `a` swaps sheets.
        let f2 = FreeGroupSubgroupBackend::new(
            Alphabet::free(&["a", "b"]),
            &[vec![Letter(0), Letter(0)], vec![Letter(2)], vec![Letter(0), Letter(2), Letter(1)]],
        )
        .unwrap();
        let g = build_schreier(&f2, 4);
        assert!(g.is_closed());
        assert_eq!(g.vertex_count(), 2);
        let alpha = g.alphabet().clone();
        let gens: Vec<String> = spanning_tree_generators(&g).unwrap().iter().map(|w| alpha.format_word(w)).collect();
        assert_eq!(gens, vec!["a^ a^", "b", "a b a^"]);
        for w in spanning_tree_generators(&g).unwrap() {
            assert_eq!(g.step_det(g.root(), &w).unwrap(), Some(g.root()));
        }
    }
}
