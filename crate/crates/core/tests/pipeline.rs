//! End-to-end properties over the synthesis gallery: automata, their text
//! forms and the grammars derived from them agree with the coset oracle.

use std::sync::OnceLock;

use conepda_core::backends::{word_problem_oracle, CosetSpace};
use conepda_core::gallery::{self, synthesis_fixtures};
use conepda_core::grammar::{cyk_member, to_cnf, CnfGrammar};
use conepda_core::pda::{pda_to_cfg, Budget, Pda, Verdict};
use conepda_core::Letter;
use proptest::prelude::*;

struct Built {
    name: &'static str,
    space: conepda_core::backends::Backend,
    pda: Pda,
    reparsed: Pda,
}

fn gallery_automata() -> &'static [Built] {
    static CELL: OnceLock<Vec<Built>> = OnceLock::new();
    CELL.get_or_init(|| {
        synthesis_fixtures()
            .into_iter()
            .map(|fx| {
                let (_, _, pda) = fx.synthesize().expect("gallery certifies");
                let reparsed = Pda::parse_text(&pda.to_text()).expect("text form parses");
                Built { name: fx.name, space: fx.space, pda, reparsed }
            })
            .collect()
    })
}

fn tree_grammar() -> &'static CnfGrammar {
    static CELL: OnceLock<CnfGrammar> = OnceLock::new();
    CELL.get_or_init(|| {
        let (_, _, m) = gallery::synthesize_space(&gallery::free_tree(), 1, 1, usize::MAX).unwrap();
        to_cnf(&pda_to_cfg(&m)).unwrap()
    })
}

fn word(k: usize, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((0..k as u16).prop_map(Letter), 0..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn synthesized_automata_decide_the_word_problem(i in 0usize..5, raw in word(4, 24)) {
        let b = &gallery_automata()[i];
        let k = b.space.alphabet().len();
        let w: Vec<Letter> = raw.into_iter().map(|a| Letter(a.0 % k as u16)).collect();
        let expected = word_problem_oracle(&b.space, &w);
        let got = b.pda.accepts(&w, Budget::new(100_000, 64));
        prop_assert_eq!(got == Verdict::Accept, expected, "{}", b.name);
        prop_assert_eq!(b.reparsed.accepts(&w, Budget::new(100_000, 64)), got);
    }

    #[test]
    fn derived_grammar_matches_free_reduction(w in word(4, 8)) {
        let g = tree_grammar();
        let expected = word_problem_oracle(&gallery::free_tree(), &w);
        prop_assert_eq!(cyk_member(g, &w).is_some(), expected);
    }
}
