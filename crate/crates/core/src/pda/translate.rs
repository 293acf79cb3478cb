//! Substitution translator: reads `b` and feeds `u(b)` to the inner automaton.
//!
//! Pending suffixes of `u(b)` are kept in the state. Only reachable
//! `(state, suffix)` pairs are materialized.

use std::collections::{BTreeSet, VecDeque};

use super::{Pda, StackSym, StateId};
use crate::error::{Error, Result};
use crate::words::{Alphabet, Letter, Word};

/// Distinct stack keys (including `ε`) used by transitions out of `p`.
pub(super) fn stack_keys(m: &Pda, p: StateId) -> BTreeSet<Option<StackSym>> {
    m.transitions().filter(|((q, _, _), _)| *q == p).map(|((_, _, z), _)| *z).collect()
}

/// Copy of `m`'s states and stack symbols into a fresh automaton over `alphabet`.
pub(super) fn skeleton(m: &Pda, alphabet: Alphabet) -> Pda {
    let mut out = Pda::new(alphabet, m.state_name(m.initial()), m.stack_name(m.start_symbol()));
    for z in 0..m.stack_symbol_count() {
        out.add_stack_symbol(m.stack_name(z));
    }
    out
}

/// Automaton over `alphabet` accepting `{ b₁…bₙ : u(b₁)…u(bₙ) ∈ L(m) }`.
///
/// `u[b]` is the image of letter `b`; images must be nonempty words over
/// `m`'s alphabet. Determinism of `m` is preserved.
pub fn translate_pda(m: &Pda, alphabet: &Alphabet, u: &[Word]) -> Result<Pda> {
    if u.len() != alphabet.len() {
        return Err(Error::InvalidTable(format!("expected {} images, got {}", alphabet.len(), u.len())));
    }
    for (b, img) in u.iter().enumerate() {
        if img.is_empty() {
            return Err(Error::EmptyImage(alphabet.name(Letter(b as u16)).to_string()));
        }
        if img.iter().any(|a| a.index() >= m.alphabet().len()) {
            return Err(Error::UnknownSymbol(format!("image of {}", alphabet.name(Letter(b as u16)))));
        }
    }
    let mut out = skeleton(m, alphabet.clone());
    let plain: Vec<StateId> = (0..m.state_count()).map(|p| out.add_state(m.state_name(p))).collect();
    for &f in m.finals() {
        out.set_final(plain[f], true);
    }
    let sym = |z: &Vec<StackSym>| z.clone();
    let mut pending: VecDeque<(StateId, Word)> = VecDeque::new();
    let mut seen: BTreeSet<(StateId, Word)> = BTreeSet::new();
    let remember = |out: &mut Pda, pending: &mut VecDeque<(StateId, Word)>, seen: &mut BTreeSet<(StateId, Word)>, q: StateId, v: &[Letter]| {
        let name = format!("{}[{}]", m.state_name(q), super::word_tag(m.alphabet(), v));
        let id = out.add_state(&name);
        if seen.insert((q, v.to_vec())) {
            pending.push_back((q, v.to_vec()));
        }
        id
    };
    for p in 0..m.state_count() {
        for z in stack_keys(m, p) {
            for (q, zeta) in m.delta(p, None, z) {
                out.add_transition(plain[p], None, z, plain[*q], sym(zeta));
            }
            for (b, img) in u.iter().enumerate() {
                let b = Some(Letter(b as u16));
                for (q, zeta) in m.delta(p, Some(img[0]), z) {
                    let target = if img.len() == 1 {
                        plain[*q]
                    } else {
                        remember(&mut out, &mut pending, &mut seen, *q, &img[1..])
                    };
                    out.add_transition(plain[p], b, z, target, sym(zeta));
                }
            }
        }
    }
    while let Some((p, v)) = pending.pop_front() {
        let here = out.state(&format!("{}[{}]", m.state_name(p), super::word_tag(m.alphabet(), &v))).unwrap();
        for z in stack_keys(m, p) {
            for (q, zeta) in m.delta(p, None, z) {
                let target = remember(&mut out, &mut pending, &mut seen, *q, &v);
                out.add_transition(here, None, z, target, sym(zeta));
            }
            for (q, zeta) in m.delta(p, Some(v[0]), z) {
                let target = if v.len() == 1 {
                    plain[*q]
                } else {
                    remember(&mut out, &mut pending, &mut seen, *q, &v[1..])
                };
                out.add_transition(here, None, z, target, sym(zeta));
            }
        }
    }
    Ok(out)
}
