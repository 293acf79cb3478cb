//! Subgroups of free groups via Stallings folding.

use std::collections::{HashMap, VecDeque};

use super::CosetSpace;
use crate::error::{Error, Result};
use crate::words::{free_reduce, Alphabet, Letter, Word};

/// Coset of `K` in `F_Σ`: a vertex of the folded core plus a reduced tail
/// hanging off it in the attached tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeKey {
    pub vertex: u32,
    pub tail: Word,
}

/// `(F_Σ, K)` for `K` given by finitely many generators.
#[derive(Clone, Debug)]
pub struct FreeGroupSubgroupBackend {
    alphabet: Alphabet,
    generators: Vec<Word>,
    /// `core[v][a]` is the `a`-neighbour of core vertex `v`, if any.
    core: Vec<Vec<Option<u32>>>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut x = x;
        while self.0[x] != r {
            let next = self.0[x];
            self.0[x] = r;
            x = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            let (lo, hi) = (a.min(b), a.max(b));
            self.0[hi] = lo;
        }
    }
}

impl FreeGroupSubgroupBackend {
    pub fn new(alphabet: Alphabet, generators: &[Word]) -> Result<Self> {
        if !alphabet.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let generators: Vec<Word> = generators
            .iter()
            .map(|g| free_reduce(&alphabet, g).into_word())
            .filter(|g| !g.is_empty())
            .collect();

        // Bouquet of generator loops at vertex 0, both orientations stored.
        let mut edges: Vec<(usize, Letter, usize)> = Vec::new();
        let mut count = 1usize;
        for g in &generators {
            let mut prev = 0usize;
            for (i, &a) in g.iter().enumerate() {
                let next = if i + 1 == g.len() {
                    0
                } else {
                    count += 1;
                    count - 1
                };
                edges.push((prev, a, next));
                edges.push((next, alphabet.inverse(a).unwrap(), prev));
                prev = next;
            }
        }

        let mut uf = UnionFind((0..count).collect());
        loop {
            let mut seen: HashMap<(usize, Letter), usize> = HashMap::new();
            let mut changed = false;
            for &(x, a, y) in &edges {
                let x = uf.find(x);
                let y = uf.find(y);
                match seen.get(&(x, a)) {
                    Some(&t) if uf.find(t) != y => {
                        uf.union(t, y);
                        changed = true;
                    }
                    Some(_) => {}
                    None => {
                        seen.insert((x, a), y);
                    }
                }
            }
            if !changed {
                break;
            }
        }

        let k = alphabet.len();
        let mut adj: HashMap<usize, Vec<Option<usize>>> = HashMap::new();
        adj.entry(uf.find(0)).or_insert_with(|| vec![None; k]);
        for &(x, a, y) in &edges {
            let (x, y) = (uf.find(x), uf.find(y));
            adj.entry(x).or_insert_with(|| vec![None; k])[a.index()] = Some(y);
        }

        // Renumber by breadth-first search in label order so the numbering
        // does not depend on generator order.
        let base = uf.find(0);
        let mut number: HashMap<usize, u32> = HashMap::from([(base, 0)]);
        let mut order = vec![base];
        let mut queue = VecDeque::from([base]);
        while let Some(v) = queue.pop_front() {
            for u in adj[&v].iter().flatten() {
                if !number.contains_key(u) {
                    number.insert(*u, order.len() as u32);
                    order.push(*u);
                    queue.push_back(*u);
                }
            }
        }
        let core = order
            .iter()
            .map(|v| adj[v].iter().map(|t| t.map(|u| number[&u])).collect())
            .collect();
        Ok(FreeGroupSubgroupBackend { alphabet, generators, core })
    }

    pub fn generators(&self) -> &[Word] {
        &self.generators
    }

    pub fn core_size(&self) -> usize {
        self.core.len()
    }

    /// Transition table of the folded core, indexed `[vertex][letter]`.
    pub fn core_table(&self) -> &[Vec<Option<u32>>] {
        &self.core
    }

    /// `w ∈ K`.
    pub fn contains(&self, w: &[Letter]) -> bool {
        let k = self.act_word(&self.root(), w);
        k == self.root()
    }
}

impl CosetSpace for FreeGroupSubgroupBackend {
    type Key = FreeKey;

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn root(&self) -> FreeKey {
        FreeKey { vertex: 0, tail: Vec::new() }
    }

    fn act(&self, key: &FreeKey, a: Letter) -> FreeKey {
        let mut next = key.clone();
        match next.tail.last() {
            Some(&last) if self.alphabet.inverse(a) == Some(last) => {
                next.tail.pop();
            }
            Some(_) => next.tail.push(a),
            None => match self.core[key.vertex as usize][a.index()] {
                Some(u) => next.vertex = u,
                None => next.tail.push(a),
            },
        }
        next
    }

    fn describe(&self, key: &FreeKey) -> String {
        let mut s = format!("c{}", key.vertex);
        for (i, &a) in key.tail.iter().enumerate() {
            s.push(if i == 0 { ':' } else { '.' });
            s.push_str(self.alphabet.name(a));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{words_up_to, invert_word};
    use proptest::prelude::*;

    fn f2() -> Alphabet {
        Alphabet::free(&["a", "b"])
    }

    fn backend(gens: &[&str]) -> FreeGroupSubgroupBackend {
        let a = f2();
        let gens: Vec<Word> = gens.iter().map(|g| a.parse_word(g).unwrap()).collect();
        FreeGroupSubgroupBackend::new(a, &gens).unwrap()
    }

    /// Membership oracle for `⟨a²,b⟩`: reduced words whose `a`-blocks all have even exponent.
    fn in_a2_b(alpha: &Alphabet, w: &[Letter]) -> bool {
        let r = free_reduce(alpha, w);
        let mut run = 0i32;
        for &x in r.iter() {
            match alpha.name(x) {
                "a" => run += 1,
                "a^" => run -= 1,
                _ => {
                    if run % 2 != 0 {
                        return false;
                    }
                    run = 0;
                }
            }
        }
        run % 2 == 0
    }

    #[test]
    fn folding_examples() {
        let k = backend(&["a b a^"]);
        assert_eq!(k.core_size(), 2);
        let k = backend(&["a a", "b"]);
        assert_eq!(k.core_size(), 2);
        let alpha = f2();
        for w in words_up_to(4, 6) {
            assert_eq!(k.contains(&w), in_a2_b(&alpha, &w), "{}", alpha.format_word(&w));
        }
        // trivial subgroup: the tree
        let t = backend(&[]);
        assert_eq!(t.core_size(), 1);
        assert!(t.contains(&alpha.parse_word("a b b^ a^").unwrap()));
        assert!(!t.contains(&alpha.parse_word("a b a^ b^").unwrap()));
    }

    #[test]
    fn folded_core_is_deterministic() {
        let k = backend(&["a b a^ b^", "a a b", "b b b"]);
        let alpha = f2();
        for (v, row) in k.core_table().iter().enumerate() {
            for a in alpha.letters() {
                if let Some(u) = row[a.index()] {
                    let back = k.core_table()[u as usize][alpha.inverse(a).unwrap().index()];
                    assert_eq!(back, Some(v as u32));
                }
            }
        }
    }

    #[test]
    fn generators_are_members_and_inverses_cancel() {
        let k = backend(&["a b a^ b^", "a a b"]);
        let alpha = f2();
        for g in k.generators() {
            assert!(k.contains(g));
            assert!(k.contains(&invert_word(&alpha, g).unwrap()));
        }
        for w in words_up_to(4, 5) {
            let key = k.act_word(&k.root(), &w);
            let back = k.act_word(&key, &invert_word(&alpha, &w).unwrap());
            assert_eq!(back, k.root());
        }
    }

    proptest! {
        /// Generator order never changes the canonical key function.
        #[test]
        fn folding_is_confluent(perm in Just(vec![0usize, 1, 2]).prop_shuffle(), words in proptest::collection::vec(proptest::collection::vec(0u16..4, 0..8), 0..20)) {
            let gens = ["a b a^ b^", "a a b", "b a b"];
            let base = backend(&gens);
            let permuted: Vec<&str> = perm.iter().map(|&i| gens[i]).collect();
            let other = backend(&permuted);
            prop_assert_eq!(base.core_table(), other.core_table());
            for w in words {
                let w: Word = w.into_iter().map(Letter).collect();
                prop_assert_eq!(base.act_word(&base.root(), &w), other.act_word(&other.root(), &w));
            }
        }
    }
}
