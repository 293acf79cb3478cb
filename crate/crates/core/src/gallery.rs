//! Named example pairs `(G, K, ψ)` with the parameters that certify their cone
//! structure, shared by the verification suites, the acceptance run and the
//! command line.

use crate::backends::{build_schreier_capped, Backend, FiniteGroupBackend, FreeGroupSubgroupBackend, Rule, RuleBackend};
use crate::cones::ConeTypeTable;
use crate::error::Result;
use crate::graph::LabelledGraph;
use crate::pda::{synthesize_from_graph, Pda};
use crate::words::{Alphabet, Letter};

/// A coset space together with classifier radius and truncation depth.
pub struct SynthesisFixture {
    pub name: &'static str,
    pub space: Backend,
    pub max_radius: usize,
    pub depth: usize,
}

/// Exploration radius the classifier needs for `max_radius` and `depth`.
pub fn build_radius(max_radius: usize, depth: usize) -> usize {
    max_radius + depth + 4
}

impl SynthesisFixture {
    /// Schreier graph, certified table and automaton with `x₀ = y₀ = o`.
    pub fn synthesize(&self) -> Result<(LabelledGraph, ConeTypeTable, Pda)> {
        synthesize_space(&self.space, self.max_radius, self.depth, usize::MAX)
    }
}

/// Builds the Schreier graph far enough for the classifier and synthesizes
/// the automaton for the word problem.
pub fn synthesize_space(
    space: &Backend,
    max_radius: usize,
    depth: usize,
    max_vertices: usize,
) -> Result<(LabelledGraph, ConeTypeTable, Pda)> {
    let g = build_schreier_capped(space, build_radius(max_radius, depth), max_vertices)?;
    let o = g.root();
    let (table, m) = synthesize_from_graph(&g, &[o], max_radius, depth, o, o)?;
    Ok((g, table, m))
}

fn word(alphabet: &Alphabet, text: &str) -> Vec<Letter> {
    alphabet.parse_word(text).expect("fixture words use declared letters")
}

/// `Z₂` over `Σ = {a}`, `K = {1}`.
pub fn two_element() -> Backend {
    Backend::Finite(FiniteGroupBackend::cyclic_plain(2).expect("valid order"))
}

/// `F₂` with `K = {1}`: the Cayley tree.
pub fn free_tree() -> Backend {
    Backend::Free(FreeGroupSubgroupBackend::new(Alphabet::free(&["a", "b"]), &[]).expect("symmetric alphabet"))
}

/// `F₂` with `K = ⟨a⟩`.
pub fn free_cyclic() -> Backend {
    let alphabet = Alphabet::free(&["a", "b"]);
    let gens = [word(&alphabet, "a")];
    Backend::Free(FreeGroupSubgroupBackend::new(alphabet, &gens).expect("symmetric alphabet"))
}

/// `F₂` with the index-2 subgroup of words with even `a`-exponent sum.
pub fn free_index_two() -> Backend {
    let alphabet = Alphabet::free(&["a", "b"]);
    let gens = [word(&alphabet, "a a"), word(&alphabet, "b"), word(&alphabet, "a b a^")];
    Backend::Free(FreeGroupSubgroupBackend::new(alphabet, &gens).expect("symmetric alphabet"))
}

pub fn comb() -> Backend {
    Backend::Rule(RuleBackend::new(Rule::Comb))
}

/// The five pairs whose automata are synthesized from cone types.
pub fn synthesis_fixtures() -> Vec<SynthesisFixture> {
    vec![
        SynthesisFixture { name: "z2", space: two_element(), max_radius: 0, depth: 1 },
        SynthesisFixture { name: "f2-tree", space: free_tree(), max_radius: 1, depth: 1 },
        SynthesisFixture { name: "comb", space: comb(), max_radius: 2, depth: 1 },
        SynthesisFixture { name: "f2-cyclic", space: free_cyclic(), max_radius: 1, depth: 1 },
        SynthesisFixture { name: "f2-index-2", space: free_index_two(), max_radius: 1, depth: 1 },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_certify_and_are_deterministic() {
        for fx in synthesis_fixtures() {
            let (_, table, m) = fx.synthesize().unwrap_or_else(|e| panic!("{}: {e}", fx.name));
            assert!(table.is_certified(), "{}", fx.name);
            assert!(m.is_deterministic(), "{}", fx.name);
        }
    }
}
