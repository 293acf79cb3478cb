//! Grammars shipped for the triangulation and distance checks.

use super::cnf::{CnfGrammar, CnfProduction};
use super::cyk::{Derivation, DerivationStep};
use super::Cfg;
use crate::words::{Alphabet, Letter};

fn parse(text: &str) -> Cfg {
    Cfg::parse_text(text).expect("fixture grammar")
}

/// Even-length words over `{a}`: the loop language of the two-vertex graph.
pub fn even_a() -> Cfg {
    parse(
        "alphabet a\nstart S\n\
         rule S -> A O\nrule S -> eps\n\
         rule E -> A O\n\
         rule O -> E A\nrule O -> 'a'\n\
         rule A -> 'a'\n",
    )
}

/// Words over `{a, a^, b, b^}` that freely reduce to the empty word.
pub fn dyck_f2() -> Cfg {
    parse(
        "alphabet a a^ b b^\nstart S\n\
         rule S -> eps\nrule S -> S S\n\
         rule S -> 'a' S 'a^'\nrule S -> 'a^' S 'a'\n\
         rule S -> 'b' S 'b^'\nrule S -> 'b^' S 'b'\n",
    )
}

/// Words over `{a, a^}` with exponent sum zero: loops of the line.
pub fn zero_sum() -> Cfg {
    parse(
        "alphabet a a^\nstart S\n\
         rule S -> eps\nrule S -> S S\n\
         rule S -> 'a' S 'a^'\nrule S -> 'a^' S 'a'\n",
    )
}

/// Loops at the origin of the comb lattice: `P` and `N` are loops inside the
/// upper and lower teeth that never go below (above) their base point.
pub fn comb_loops() -> Cfg {
    parse(
        "alphabet a a^ b b^\nstart S\n\
         rule S -> eps\nrule S -> S S\n\
         rule S -> 'a' S 'a^'\nrule S -> 'a^' S 'a'\n\
         rule S -> 'b' P 'b^'\nrule S -> 'b^' N 'b'\n\
         rule P -> eps\nrule P -> P P\nrule P -> 'a'\nrule P -> 'a^'\nrule P -> 'b' P 'b^'\n\
         rule N -> eps\nrule N -> N N\nrule N -> 'a'\nrule N -> 'a^'\nrule N -> 'b^' N 'b'\n",
    )
}

/// The six-letter worked example: grammar, word `a₁…a₆` and its rightmost derivation.
pub fn worked_derivation() -> (CnfGrammar, Vec<Letter>, Derivation) {
    let terminals = Alphabet::plain(&["a1", "a2", "a3", "a4", "a5", "a6"]).expect("distinct letters");
    let names = ["S", "T1", "T^1", "T2", "T^2", "T3", "T^3", "T4", "T^4", "T5", "T^5"];
    let v = |n: &str| names.iter().position(|x| *x == n).unwrap();
    let binary = vec![
        (v("S"), v("T1"), v("T^1")),
        (v("T^1"), v("T2"), v("T^2")),
        (v("T^2"), v("T3"), v("T^3")),
        (v("T3"), v("T4"), v("T^4")),
        (v("T1"), v("T5"), v("T^5")),
    ];
    let unary = vec![
        (v("T^3"), Letter(5)),
        (v("T^4"), Letter(4)),
        (v("T4"), Letter(3)),
        (v("T2"), Letter(2)),
        (v("T^5"), Letter(1)),
        (v("T5"), Letter(0)),
    ];
    let g = CnfGrammar {
        terminals,
        variables: names.iter().map(|s| s.to_string()).collect(),
        start: 0,
        binary,
        unary,
        start_eps: false,
    };
    let b = |t: &str, x: &str, y: &str| CnfProduction::Binary(v(t), v(x), v(y));
    let t = |x: &str, a: u16| CnfProduction::Terminal(v(x), Letter(a));
    // (position in the sentential form, production), rightmost variable first
    let steps = vec![
        (0, b("S", "T1", "T^1")),
        (1, b("T^1", "T2", "T^2")),
        (2, b("T^2", "T3", "T^3")),
        (3, t("T^3", 5)),
        (2, b("T3", "T4", "T^4")),
        (3, t("T^4", 4)),
        (2, t("T4", 3)),
        (1, t("T2", 2)),
        (0, b("T1", "T5", "T^5")),
        (1, t("T^5", 1)),
        (0, t("T5", 0)),
    ];
    let derivation =
        Derivation { steps: steps.into_iter().map(|(position, production)| DerivationStep { position, production }).collect() };
    let w = (0..6).map(Letter).collect();
    (g, w, derivation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{to_cnf, GrammarClass};

    #[test]
    fn fixture_languages() {
        let even = even_a().language_up_to(10);
        assert!(even.iter().all(|w| w.len() % 2 == 0));
        assert_eq!(even.len(), 6);
        let zs = zero_sum();
        let alpha = zs.terminals.clone();
        let lang = zs.language_up_to(8);
        for w in crate::words::words_up_to(2, 8) {
            let sum: i32 = w.iter().map(|a| if a.0 == 0 { 1 } else { -1 }).sum();
            assert_eq!(lang.contains(&w), sum == 0, "{}", alpha.format_word(&w));
        }
        let comb = crate::backends::RuleBackend::new(crate::backends::Rule::Comb);
        let lang = to_cnf(&comb_loops()).unwrap().language_up_to(6);
        for w in crate::words::words_up_to(4, 6) {
            assert_eq!(lang.contains(&w), crate::backends::word_problem_oracle(&comb, &w));
        }
        assert_eq!(dyck_f2().classify(), GrammarClass::General);
        let (g, w, d) = worked_derivation();
        assert_eq!(d.replay(&g).unwrap().yield_word(), w);
        assert!(to_cnf(&g.to_cfg()).is_ok());
    }
}
