//! Pushdown automaton from a certified cone-type table.
//!
//! States are `F` together with the canonical boundary positions of the cone
//! representatives; the stack holds one second-order type per level above
//! `F`. Inside `F` the stack stays empty, so the start symbol is popped by an
//! initial ε-move and acceptance at `y0` needs nothing further.

use std::collections::HashMap;

use super::{Pda, StackSym, StateId};
use crate::cones::{classify_cone_types, Certificate, ConeTypeTable, Tau};
use crate::error::{Error, Result};
use crate::graph::{LabelledGraph, VertexId};

struct Names<'a> {
    table: &'a ConeTypeTable,
    g: &'a LabelledGraph,
}

impl Names<'_> {
    fn cone_state(m: &mut Pda, j: usize, p: usize) -> StateId {
        m.add_state(&format!("C{j}.{p}"))
    }

    fn tau(m: &mut Pda, t: Tau) -> StackSym {
        m.add_stack_symbol(&format!("t{}.{}.{}", t.from, t.to, t.index))
    }

    fn center(&self, m: &mut Pda, x: VertexId) -> StateId {
        m.add_state(self.g.name(x))
    }

    fn position(&self, j: usize, v: VertexId) -> Result<usize> {
        self.table
            .representative(j)
            .boundary
            .iter()
            .position(|&b| b == v)
            .ok_or_else(|| Error::NotCertified(format!("{} is not on the boundary of type {j}", self.g.name(v))))
    }
}

fn step(g: &LabelledGraph, x: VertexId, a: crate::words::Letter) -> Result<Option<VertexId>> {
    match g.successor(x, a) {
        Some(y) => Ok(Some(y)),
        None if g.is_frontier(x) => Err(Error::FrontierEscape(g.name(x).to_string())),
        None => Ok(None),
    }
}

/// Automaton accepting `L_{x0,y0}` built from a certified table for `F ∋ x0, y0`.
pub fn build_pda_from_cones(table: &ConeTypeTable, g: &LabelledGraph, x0: VertexId, y0: VertexId) -> Result<Pda> {
    if let Certificate::Unstable { reason, .. } = &table.status {
        return Err(Error::NotCertified(reason.clone()));
    }
    let centers = &table.centers;
    for v in [x0, y0] {
        if !centers.contains(&v) {
            return Err(Error::NotCertified(format!("{} is not in the centre set", g.name(v))));
        }
    }
    let names = Names { table, g };
    let dist = |v: VertexId| table.distance[v.index()];
    let mut m = Pda::new(g.alphabet().clone(), g.name(x0), g.name(x0));
    for &x in centers {
        let q = names.center(&mut m, x);
        let z = m.add_stack_symbol(g.name(x));
        m.add_transition(q, None, Some(z), q, vec![]);
    }
    let y0_state = names.center(&mut m, y0);
    m.set_final(y0_state, true);
    for j in 1..=table.type_count() {
        for p in 0..table.representative(j).boundary.len() {
            Names::cone_state(&mut m, j, p);
        }
    }
    for t in table.taus() {
        Names::tau(&mut m, t);
    }

    let letters: Vec<_> = g.alphabet().letters().collect();
    for &x in centers {
        let q = names.center(&mut m, x);
        for &a in &letters {
            let Some(y) = step(g, x, a)? else { continue };
            if centers.contains(&y) {
                let r = names.center(&mut m, y);
                m.add_transition(q, Some(a), None, r, vec![]);
            } else {
                let (&(j, p), &t) = table
                    .phi
                    .get(&y)
                    .zip(table.tau.get(&y))
                    .ok_or_else(|| Error::NotCertified(format!("{} was not classified", g.name(y))))?;
                let r = Names::cone_state(&mut m, j, p);
                let z = Names::tau(&mut m, t);
                m.add_transition(q, Some(a), None, r, vec![z]);
            }
        }
    }

    let mut inward_cache: HashMap<(Tau, usize, usize), StateId> = HashMap::new();
    for j in 1..=table.type_count() {
        let rep = table.representative(j);
        let incoming: Vec<Tau> = table.taus().into_iter().filter(|t| t.to == j).collect();
        for (p, &x) in rep.boundary.iter().enumerate() {
            let q = Names::cone_state(&mut m, j, p);
            let dx = dist(x).unwrap();
            for &a in &letters {
                let Some(y) = step(g, x, a)? else { continue };
                let dy = dist(y).ok_or_else(|| Error::FrontierEscape(g.name(y).to_string()))?;
                if dy == dx {
                    let r = Names::cone_state(&mut m, j, names.position(j, y)?);
                    for &t in &incoming {
                        let z = Names::tau(&mut m, t);
                        m.add_transition(q, Some(a), Some(z), r, vec![z]);
                    }
                } else if dy == dx + 1 {
                    let slot = rep
                        .successors
                        .iter()
                        .find(|s| s.boundary.contains(&y))
                        .ok_or_else(|| Error::NotCertified(format!("{} lies in no successor slot", g.name(y))))?;
                    let r = Names::cone_state(&mut m, slot.class, slot.image_of(y).unwrap());
                    let pushed = Names::tau(&mut m, Tau { from: j, to: slot.class, index: slot.index });
                    for &t in &incoming {
                        let z = Names::tau(&mut m, t);
                        m.add_transition(q, Some(a), Some(z), r, vec![z, pushed]);
                    }
                } else {
                    for &t in &incoming {
                        let r = match inward_cache.get(&(t, p, a.index())) {
                            Some(&r) => r,
                            None => {
                                let slot = table.slot(t);
                                let xt = slot.preimage_of(p).unwrap();
                                let yt = step(g, xt, a)?.ok_or_else(|| {
                                    Error::NotCertified(format!("{} has no {}-edge", g.name(xt), g.alphabet().name(a)))
                                })?;
                                let r = if t.from == 0 {
                                    if !centers.contains(&yt) {
                                        return Err(Error::NotCertified(format!("{} should lie in F", g.name(yt))));
                                    }
                                    names.center(&mut m, yt)
                                } else {
                                    Names::cone_state(&mut m, t.from, names.position(t.from, yt)?)
                                };
                                inward_cache.insert((t, p, a.index()), r);
                                r
                            }
                        };
                        let z = Names::tau(&mut m, t);
                        m.add_transition(q, Some(a), Some(z), r, vec![]);
                    }
                }
            }
        }
    }
    Ok(m)
}

/// Classifies cones around `centers` and synthesizes the automaton.
pub fn synthesize_from_graph(
    g: &LabelledGraph,
    centers: &[VertexId],
    max_radius: usize,
    depth: usize,
    x0: VertexId,
    y0: VertexId,
) -> Result<(ConeTypeTable, Pda)> {
    let table = classify_cone_types(g, centers, max_radius, depth)?;
    let m = build_pda_from_cones(&table, g, x0, y0)?;
    Ok((table, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backends::{build_schreier, FiniteGroupBackend, FreeGroupSubgroupBackend, Rule, RuleBackend};
    use crate::pda::{Budget, Verdict};
    use crate::words::{free_reduce, words_up_to, Alphabet};

    fn check_against_loops(g: &LabelledGraph, m: &Pda, max_len: usize) {
        let oracle = g.enumerate_loop_language(g.root(), g.root(), max_len).unwrap();
        for w in words_up_to(g.alphabet().len(), max_len) {
            let v = m.accepts(&w, Budget::new(10_000, w.len() + 4));
            assert_ne!(v, Verdict::Unknown);
            assert_eq!(v == Verdict::Accept, oracle.contains(&w), "{}", g.alphabet().format_word(&w));
        }
    }

    #[test]
    fn two_vertex_graph_gives_even_words() {
        let g = build_schreier(&FiniteGroupBackend::cyclic_plain(2).unwrap(), 2);
        let o = g.root();
        let (_, m) = synthesize_from_graph(&g, &[o], 0, 1, o, o).unwrap();
        assert!(m.is_deterministic());
        for n in 0..=10 {
            let w = vec![crate::words::Letter(0); n];
            assert_eq!(m.accepts(&w, Budget::default()) == Verdict::Accept, n % 2 == 0);
        }
    }

    #[test]
    fn tree_gives_dyck() {
        let g = build_schreier(&FreeGroupSubgroupBackend::new(Alphabet::free(&["a", "b"]), &[]).unwrap(), 6);
        let o = g.root();
        let (table, m) = synthesize_from_graph(&g, &[o], 1, 1, o, o).unwrap();
        assert_eq!(table.type_count(), 4);
        assert!(m.is_deterministic());
        for w in words_up_to(4, 6) {
            let expected = free_reduce(g.alphabet(), &w).is_empty();
            assert_eq!(m.accepts(&w, Budget::new(1000, 10)) == Verdict::Accept, expected);
        }
    }

    #[test]
    fn comb_and_cycle_match_loops() {
        let g = build_schreier(&RuleBackend::new(Rule::Comb), 7);
        let (_, m) = synthesize_from_graph(&g, &[g.root()], 2, 1, g.root(), g.root()).unwrap();
        assert!(m.is_deterministic());
        check_against_loops(&g, &m, 6);
        let c = build_schreier(&FiniteGroupBackend::cyclic_symmetric(5).unwrap(), 5);
        let (_, m) = synthesize_from_graph(&c, &[c.root()], 1, 1, c.root(), c.root()).unwrap();
        check_against_loops(&c, &m, 7);
    }

    #[test]
    fn rejects_unstable_and_foreign_endpoints() {
        let g = build_schreier(&RuleBackend::new(Rule::Z2), 8);
        let r = synthesize_from_graph(&g, &[g.root()], 3, 1, g.root(), g.root());
        assert!(matches!(r, Err(Error::NotCertified(_))));
        let line = build_schreier(&RuleBackend::new(Rule::Line), 8);
        let table = classify_cone_types(&line, &[line.root()], 2, 1).unwrap();
        let other = line.successor(line.root(), crate::words::Letter(0)).unwrap();
        assert!(matches!(build_pda_from_cones(&table, &line, line.root(), other), Err(Error::NotCertified(_))));
    }

    #[test]
    fn two_centres_give_paths_between_them() {
        // L_{x0,y0} on the line with F = {0, 1}: words of exponent sum 1
        let line = build_schreier(&RuleBackend::new(Rule::Line), 9);
        let o = line.root();
        let one = line.successor(o, crate::words::Letter(0)).unwrap();
        let (_, m) = synthesize_from_graph(&line, &[o, one], 2, 1, o, one).unwrap();
        for w in words_up_to(2, 7) {
            let sum: i32 = w.iter().map(|a| if a.0 == 0 { 1 } else { -1 }).sum();
            assert_eq!(m.accepts(&w, Budget::new(1000, 12)) == Verdict::Accept, sum == 1);
        }
    }
}
