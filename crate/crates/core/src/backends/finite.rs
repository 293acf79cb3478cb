//! Finite groups given by a multiplication table.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::CosetSpace;
use crate::error::{Error, Result};
use crate::words::{Alphabet, Letter};

/// Full associativity check up to this order; sampled beyond.
const FULL_CHECK_ORDER: usize = 64;

#[derive(Clone, Debug)]
pub struct FiniteGroupBackend {
    alphabet: Alphabet,
    table: Vec<Vec<usize>>,
    identity: usize,
    subgroup: Vec<usize>,
    psi: Vec<usize>,
    /// Smallest element of the coset `K·g`, per `g`.
    coset_min: Vec<usize>,
}

impl FiniteGroupBackend {
    pub fn new(alphabet: Alphabet, table: Vec<Vec<usize>>, subgroup: &[usize], psi: Vec<usize>) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidGroup("table must be square with entries below its order".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        for x in 0..n {
            if !(0..n).any(|y| table[x][y] == identity && table[y][x] == identity) {
                return Err(Error::InvalidGroup(format!("element {x} has no inverse")));
            }
        }
        let assoc = |(x, y, z): (usize, usize, usize)| table[table[x][y]][z] == table[x][table[y][z]];
        let ok = if n <= FULL_CHECK_ORDER {
            (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| assoc((x, y, z)))))
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            (0..100_000).all(|_| assoc((rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))))
        };
        if !ok {
            return Err(Error::InvalidGroup("multiplication is not associative".into()));
        }
        if psi.len() != alphabet.len() || psi.iter().any(|&g| g >= n) {
            return Err(Error::InvalidGroup("ψ must map every letter to an element".into()));
        }
        let mut subgroup: Vec<usize> = subgroup.to_vec();
        if !subgroup.contains(&identity) {
            subgroup.push(identity);
        }
        subgroup.sort_unstable();
        subgroup.dedup();
        if subgroup.iter().any(|&x| x >= n) {
            return Err(Error::InvalidGroup("subgroup element out of range".into()));
        }
        for &x in &subgroup {
            for &y in &subgroup {
                if subgroup.binary_search(&table[x][y]).is_err() {
                    return Err(Error::InvalidGroup("subgroup is not closed under multiplication".into()));
                }
            }
        }
        let coset_min = (0..n).map(|g| subgroup.iter().map(|&k| table[k][g]).min().unwrap()).collect();
        Ok(FiniteGroupBackend { alphabet, table, identity, subgroup, psi, coset_min })
    }

    /// `Z_n = ⟨t⟩` over `Σ = {a}` with `ψ(a) = t` and `K = {1}`.
    pub fn cyclic_plain(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("order must be positive".into()));
        }
        let alphabet = Alphabet::plain(&["a"])?;
        FiniteGroupBackend::new(alphabet, cyclic_table(n), &[0], vec![1 % n])
    }

    /// `Z_n` over `Σ = {a, a^}` with `ψ(a) = t`, `ψ(a^) = t⁻¹`, `K = {1}`.
    pub fn cyclic_symmetric(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("order must be positive".into()));
        }
        let alphabet = Alphabet::free(&["a"]);
        FiniteGroupBackend::new(alphabet, cyclic_table(n), &[0], vec![1 % n, (n - 1) % n])
    }

    /// Table file: `alphabet …`, one `psi <letter> <element>` per letter,
    /// and one `row …` per element.
    pub fn parse_table(text: &str, subgroup: &[usize]) -> Result<Self> {
        let mut alphabet = None;
        let mut psi_lines = Vec::new();
        let mut rows = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let ln = ln + 1;
            let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            match head {
                "alphabet" => alphabet = Some(Alphabet::parse(rest)?),
                "psi" => {
                    let parts: Vec<&str> = rest.split_whitespace().collect();
                    if parts.len() != 2 {
                        return Err(Error::parse(ln, "expected `psi <letter> <element>`"));
                    }
                    let g = parts[1].parse::<usize>().map_err(|_| Error::parse(ln, "bad element"))?;
                    psi_lines.push((ln, parts[0].to_string(), g));
                }
                "row" => rows.push(
                    rest.split_whitespace()
                        .map(|t| t.parse::<usize>().map_err(|_| Error::parse(ln, format!("bad entry `{t}`"))))
                        .collect::<Result<Vec<_>>>()?,
                ),
                _ => return Err(Error::parse(ln, format!("unknown keyword `{head}`"))),
            }
        }
        let alphabet = alphabet.ok_or_else(|| Error::parse(0, "missing `alphabet` line"))?;
        let mut psi = vec![usize::MAX; alphabet.len()];
        for (ln, name, g) in psi_lines {
            let a = alphabet.letter(&name).ok_or_else(|| Error::parse(ln, format!("unknown letter `{name}`")))?;
            psi[a.index()] = g;
        }
        FiniteGroupBackend::new(alphabet, rows, subgroup, psi)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn multiply(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn subgroup(&self) -> &[usize] {
        &self.subgroup
    }

    pub fn psi(&self, a: Letter) -> usize {
        self.psi[a.index()]
    }
}

fn cyclic_table(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|x| (0..n).map(|y| (x + y) % n).collect()).collect()
}

impl CosetSpace for FiniteGroupBackend {
    type Key = usize;

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn root(&self) -> usize {
        self.coset_min[self.identity]
    }

    fn act(&self, key: &usize, a: Letter) -> usize {
        self.coset_min[self.table[*key][self.psi[a.index()]]]
    }

    fn describe(&self, key: &usize) -> String {
        format!("g{key}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backends::{build_schreier, word_problem_oracle};
    use crate::words::words_up_to;

    /// Symmetric group S3 as permutations of {0,1,2}, elements in lexicographic order.
    fn s3() -> (Vec<Vec<usize>>, Vec<[usize; 3]>) {
        let perms: Vec<[usize; 3]> =
            vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        // (x·y)(i) = y(x(i)): right action, matching right cosets.
        let table = perms
            .iter()
            .map(|x| perms.iter().map(|y| idx([y[x[0]], y[x[1]], y[x[2]]])).collect())
            .collect();
        (table, perms)
    }

    #[test]
    fn validates_group_axioms() {
        let alpha = Alphabet::plain(&["a"]).unwrap();
        let bad = vec![vec![0, 1], vec![0, 1]];
        assert!(FiniteGroupBackend::new(alpha.clone(), bad, &[0], vec![1]).is_err());
        let not_closed = FiniteGroupBackend::new(alpha.clone(), cyclic_table(4), &[0, 1], vec![1]);
        assert!(matches!(not_closed, Err(Error::InvalidGroup(_))));
        assert!(FiniteGroupBackend::new(alpha, cyclic_table(4), &[0, 2], vec![1]).is_ok());
    }

    #[test]
    fn cosets_of_s3() {
        let (table, perms) = s3();
        let alpha = Alphabet::plain(&["s", "t"]).unwrap();
        // s = (0 1), t = (0 1 2); K = ⟨(1 2)⟩ has index 3.
        let s = perms.iter().position(|p| *p == [1, 0, 2]).unwrap();
        let t = perms.iter().position(|p| *p == [1, 2, 0]).unwrap();
        let k = perms.iter().position(|p| *p == [0, 2, 1]).unwrap();
        let g = FiniteGroupBackend::new(alpha.clone(), table, &[k], vec![s, t]).unwrap();
        let x = build_schreier(&g, 6);
        assert!(x.is_closed());
        assert_eq!(x.vertex_count(), 3);
        // oracle: K fixes point 0, so ψ(w) ∈ K iff the product fixes 0
        for w in words_up_to(2, 8) {
            let mut p = 0usize;
            for a in &w {
                let perm = if a.0 == 0 { perms[s] } else { perms[t] };
                p = perm[p];
            }
            assert_eq!(word_problem_oracle(&g, &w), p == 0);
        }
    }

    #[test]
    fn table_text() {
        let g = FiniteGroupBackend::parse_table("alphabet a a^\npsi a 1\npsi a^ 2\nrow 0 1 2\nrow 1 2 0\nrow 2 0 1\n", &[0])
            .unwrap();
        assert_eq!(g.order(), 3);
        assert!(FiniteGroupBackend::parse_table("alphabet a\nrow 0\n", &[0]).is_err());
    }
}
