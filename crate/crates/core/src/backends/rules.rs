//! Infinite Schreier graphs given by coordinate rules on integer pairs.

use std::collections::BTreeSet;

use super::CosetSpace;
use crate::error::{Error, Result};
use crate::words::{Alphabet, Letter};

/// Crossing set `W ⊂ Z` of the two-strand graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CrossingSet {
    /// `{ k(|k|+1) : k ∈ Z }`.
    Quadratic,
    Explicit(BTreeSet<i64>),
}

impl CrossingSet {
    pub fn contains(&self, k: i64) -> bool {
        match self {
            CrossingSet::Quadratic => {
                let m = k.unsigned_abs();
                let n = (m as f64).sqrt() as u64;
                (n.saturating_sub(1)..=n + 1).any(|n| n * (n + 1) == m)
            }
            CrossingSet::Explicit(w) => w.contains(&k),
        }
    }
}

/// The quadratic crossing set.
pub fn quadratic_w() -> CrossingSet {
    CrossingSet::Quadratic
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    /// Cayley graph of `Z²`: `a` moves `x`, `b` moves `y`.
    Z2,
    /// Comb lattice: `a` moves along the axis and is a loop off it, `b` moves up.
    Comb,
    /// Cayley graph of `Z` over `{a, a^}`.
    Line,
    /// Line with both `a` and `b` stepping right.
    YLine,
    /// Two strands `Z × {0,1}`; `b` crosses strands at `k ∈ W`.
    XW(CrossingSet),
}

#[derive(Clone, Debug)]
pub struct RuleBackend {
    rule: Rule,
    alphabet: Alphabet,
}

impl RuleBackend {
    pub fn new(rule: Rule) -> Self {
        let alphabet = match rule {
            Rule::Line => Alphabet::free(&["a"]),
            _ => Alphabet::free(&["a", "b"]),
        };
        RuleBackend { rule, alphabet }
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    /// `name` is one of `z2`, `comb`, `line`, `y_line`, `x_w`; `params` may set
    /// `W=quadratic` or `W=k1,k2,…` for `x_w`.
    pub fn parse(name: &str, params: Option<&str>) -> Result<Self> {
        let rule = match name {
            "z2" => Rule::Z2,
            "comb" => Rule::Comb,
            "line" => Rule::Line,
            "y_line" | "y" => Rule::YLine,
            "x_w" => {
                let w = match params.map(str::trim) {
                    None | Some("") | Some("W=quadratic") => CrossingSet::Quadratic,
                    Some(p) => {
                        let list = p.strip_prefix("W=").ok_or_else(|| Error::parse(0, format!("bad rule parameter `{p}`")))?;
                        let set = list
                            .split(',')
                            .map(|t| t.trim().parse::<i64>().map_err(|_| Error::parse(0, format!("bad integer `{t}`"))))
                            .collect::<Result<BTreeSet<i64>>>()?;
                        if set.is_empty() {
                            return Err(Error::parse(0, "W must be nonempty"));
                        }
                        CrossingSet::Explicit(set)
                    }
                };
                Rule::XW(w)
            }
            _ => return Err(Error::parse(0, format!("unknown rule `{name}`"))),
        };
        if params.is_some() && !matches!(rule, Rule::XW(_)) {
            return Err(Error::parse(0, format!("rule `{name}` takes no parameters")));
        }
        Ok(RuleBackend::new(rule))
    }

    /// Inverse of the `(k,l)` vertex naming.
    pub fn parse_key(name: &str) -> Option<(i64, i64)> {
        let inner = name.strip_prefix('(')?.strip_suffix(')')?;
        let (x, y) = inner.split_once(',')?;
        Some((x.parse().ok()?, y.parse().ok()?))
    }
}

impl CosetSpace for RuleBackend {
    type Key = (i64, i64);

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn root(&self) -> (i64, i64) {
        (0, 0)
    }

    fn act(&self, &(x, y): &(i64, i64), a: Letter) -> (i64, i64) {
        // letters: 0 = a, 1 = a^, 2 = b, 3 = b^
        match (&self.rule, a.0) {
            (Rule::Z2, 0) => (x + 1, y),
            (Rule::Z2, 1) => (x - 1, y),
            (Rule::Z2, 2) => (x, y + 1),
            (Rule::Z2, _) => (x, y - 1),
            (Rule::Comb, 0) if y == 0 => (x + 1, 0),
            (Rule::Comb, 1) if y == 0 => (x - 1, 0),
            (Rule::Comb, 0 | 1) => (x, y),
            (Rule::Comb, 2) => (x, y + 1),
            (Rule::Comb, _) => (x, y - 1),
            (Rule::Line | Rule::YLine, 0 | 2) => (x + 1, y),
            (Rule::Line | Rule::YLine, _) => (x - 1, y),
            (Rule::XW(_), 0) => (x + 1, y),
            (Rule::XW(_), 1) => (x - 1, y),
            (Rule::XW(w), 2) => (x + 1, if w.contains(x) { 1 - y } else { y }),
            (Rule::XW(w), _) => (x - 1, if w.contains(x - 1) { 1 - y } else { y }),
        }
    }

    fn describe(&self, &(x, y): &(i64, i64)) -> String {
        format!("({x},{y})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backends::build_schreier;

    #[test]
    fn quadratic_set() {
        let members: Vec<i64> = (-15..=15).filter(|&k| CrossingSet::Quadratic.contains(k)).collect();
        assert_eq!(members, vec![-12, -6, -2, 0, 2, 6, 12]);
    }

    #[test]
    fn actions_are_invertible() {
        for rule in [Rule::Z2, Rule::Comb, Rule::Line, Rule::YLine, Rule::XW(CrossingSet::Quadratic)] {
            let b = RuleBackend::new(rule);
            let alpha = b.alphabet().clone();
            for x in -8..=8 {
                for y in [-2i64, -1, 0, 1, 2] {
                    let y = if matches!(b.rule(), Rule::XW(_)) { y.rem_euclid(2) } else { y };
                    for a in alpha.letters() {
                        let there = b.act(&(x, y), a);
                        assert_eq!(b.act(&there, alpha.inverse(a).unwrap()), (x, y));
                    }
                }
            }
        }
    }

    #[test]
    fn z2_and_comb_balls() {
        let z2 = build_schreier(&RuleBackend::new(Rule::Z2), 4);
        let ball = z2.ball(&[z2.root()], 1).unwrap();
        assert_eq!(ball.len(), 5);
        let comb = build_schreier(&RuleBackend::new(Rule::Comb), 5);
        let ball = comb.ball(&[comb.root()], 2).unwrap();
        let names: BTreeSet<(i64, i64)> =
            ball.vertices().iter().map(|&v| RuleBackend::parse_key(comb.name(v)).unwrap()).collect();
        let expected: BTreeSet<(i64, i64)> =
            (-2..=2i64).flat_map(|k| (-2..=2i64).map(move |l| (k, l))).filter(|(k, l)| k.abs() + l.abs() <= 2).collect();
        assert_eq!(names, expected);
    }

    #[test]
    fn parse_rules() {
        assert!(RuleBackend::parse("comb", None).is_ok());
        assert!(RuleBackend::parse("comb", Some("W=1")).is_err());
        let b = RuleBackend::parse("x_w", Some("W=0,3")).unwrap();
        assert_eq!(b.act(&(3, 0), Letter(2)), (4, 1));
        assert!(RuleBackend::parse("x_w", Some("W=")).is_err());
        assert!(RuleBackend::parse("hex", None).is_err());
    }
}
