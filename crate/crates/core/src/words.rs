//! Alphabets with a fixed-point-free involution, words, and free reduction.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A letter of an [`Alphabet`], identified by its declaration index.
///
/// Letters compare by declaration order; canonical codes downstream rely on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter(pub u16);

impl Letter {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

pub type Word = Vec<Letter>;

/// Finite label set, optionally carrying a proper involution `a ↦ a⁻¹`.
///
/// The involution is stored explicitly and never inferred from letter names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    inverse: Option<Vec<Letter>>,
}

impl Alphabet {
    /// Alphabet without involution (semigroup presentations such as `Σ = {a}`).
    pub fn plain<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        check_names(&names)?;
        Ok(Alphabet { names, inverse: None })
    }

    /// Alphabet built from `(a, a⁻¹)` pairs, declared in order `a, a⁻¹, b, b⁻¹, …`.
    pub fn symmetric<S: AsRef<str>>(pairs: &[(S, S)]) -> Result<Self> {
        let mut names = Vec::with_capacity(pairs.len() * 2);
        let mut inverse = Vec::with_capacity(pairs.len() * 2);
        for (i, (a, b)) in pairs.iter().enumerate() {
            names.push(a.as_ref().to_string());
            names.push(b.as_ref().to_string());
            inverse.push(Letter((2 * i + 1) as u16));
            inverse.push(Letter((2 * i) as u16));
        }
        check_names(&names)?;
        Ok(Alphabet { names, inverse: Some(inverse) })
    }

    /// Free-group alphabet `x, x^` for each generator name.
    pub fn free<S: AsRef<str>>(generators: &[S]) -> Self {
        let pairs: Vec<(String, String)> = generators
            .iter()
            .map(|g| (g.as_ref().to_string(), format!("{}^", g.as_ref())))
            .collect();
        Alphabet::symmetric(&pairs).expect("generator names must be distinct")
    }

    /// Parses the body of an `alphabet` declaration, e.g. `a a^ b b^` or `a b`.
    ///
    /// A token `x^` declares the involution partner of `x`. Either every letter
    /// has a partner or none does.
    pub fn parse(text: &str) -> Result<Self> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.is_empty() {
            return Err(Error::parse(0, "empty alphabet"));
        }
        let hatted: Vec<&str> = tokens.iter().copied().filter(|t| t.ends_with('^')).collect();
        if hatted.is_empty() {
            return Alphabet::plain(&tokens);
        }
        let mut pairs = Vec::new();
        for t in &tokens {
            if t.ends_with('^') {
                let base = &t[..t.len() - 1];
                if !tokens.contains(&base) {
                    return Err(Error::parse(0, format!("`{t}` has no partner `{base}`")));
                }
            } else {
                let partner = format!("{t}^");
                if !tokens.contains(&partner.as_str()) {
                    return Err(Error::parse(0, format!("`{t}` has no partner `{partner}`")));
                }
                pairs.push((t.to_string(), partner));
            }
        }
        // keep declaration order of the first member of each pair
        let mut alphabet = Alphabet::symmetric(&pairs)?;
        let mut order: Vec<String> = Vec::new();
        for t in &tokens {
            order.push(t.to_string());
        }
        alphabet.reorder(&order);
        Ok(alphabet)
    }

    fn reorder(&mut self, order: &[String]) {
        let old: Vec<Letter> = order.iter().map(|n| self.letter(n).unwrap()).collect();
        let mut new_index = vec![Letter(0); self.names.len()];
        for (new, &o) in old.iter().enumerate() {
            new_index[o.index()] = Letter(new as u16);
        }
        if let Some(inv) = &self.inverse {
            let mut new_inv = vec![Letter(0); inv.len()];
            for (o, &i) in inv.iter().enumerate() {
                new_inv[new_index[o].index()] = new_index[i.index()];
            }
            self.inverse = Some(new_inv);
        }
        self.names = order.to_vec();
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn is_symmetric(&self) -> bool {
        self.inverse.is_some()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.names.len()).map(|i| Letter(i as u16))
    }

    pub fn name(&self, a: Letter) -> &str {
        &self.names[a.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn letter(&self, name: &str) -> Option<Letter> {
        self.names.iter().position(|n| n == name).map(|i| Letter(i as u16))
    }

    pub fn inverse(&self, a: Letter) -> Option<Letter> {
        self.inverse.as_ref().map(|inv| inv[a.index()])
    }

    /// Parses a whitespace-separated word; `eps`, `ε` and the empty string denote ε.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "eps" || text == "ε" {
            return Ok(Vec::new());
        }
        text.split_whitespace()
            .map(|t| self.letter(t).ok_or_else(|| Error::UnknownSymbol(t.to_string())))
            .collect()
    }

    pub fn format_word(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "ε".to_string();
        }
        w.iter().map(|&a| self.name(a)).collect::<Vec<_>>().join(" ")
    }

    /// The textual declaration, inverse of [`Alphabet::parse`].
    pub fn declaration(&self) -> String {
        self.names.join(" ")
    }
}

fn check_names(names: &[String]) -> Result<()> {
    for (i, n) in names.iter().enumerate() {
        if n.is_empty() || n.chars().any(char::is_whitespace) {
            return Err(Error::parse(0, format!("invalid letter name `{n}`")));
        }
        if names[..i].contains(n) {
            return Err(Error::parse(0, format!("duplicate letter `{n}`")));
        }
    }
    Ok(())
}

/// A word without factors `a a⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct ReducedWord(Word);

impl ReducedWord {
    pub fn empty() -> Self {
        ReducedWord(Vec::new())
    }

    pub fn as_slice(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_word(self) -> Word {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::ops::Deref for ReducedWord {
    type Target = [Letter];
    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

/// Iterated cancellation of adjacent `a a⁻¹` pairs, done in one stack pass.
///
/// Over an alphabet without involution nothing cancels.
pub fn free_reduce(alphabet: &Alphabet, w: &[Letter]) -> ReducedWord {
    let mut out: Word = Vec::with_capacity(w.len());
    for &a in w {
        match (out.last(), alphabet.inverse(a)) {
            (Some(&last), Some(inv)) if last == inv => {
                out.pop();
            }
            _ => out.push(a),
        }
    }
    ReducedWord(out)
}

pub fn is_reduced(alphabet: &Alphabet, w: &[Letter]) -> bool {
    w.windows(2).all(|p| alphabet.inverse(p[0]) != Some(p[1]))
}

/// `a₁⋯aₙ ↦ aₙ⁻¹⋯a₁⁻¹`.
pub fn invert_word(alphabet: &Alphabet, w: &[Letter]) -> Result<Word> {
    w.iter().rev().map(|&a| alphabet.inverse(a).ok_or(Error::NotSymmetric)).collect()
}

/// Product in the free group: reduced concatenation.
pub fn group_multiply(alphabet: &Alphabet, v: &ReducedWord, w: &ReducedWord) -> ReducedWord {
    let mut out = v.0.clone();
    for &a in w.as_slice() {
        match (out.last(), alphabet.inverse(a)) {
            (Some(&last), Some(inv)) if last == inv => {
                out.pop();
            }
            _ => out.push(a),
        }
    }
    ReducedWord(out)
}

/// Wraps a word already known to be reduced.
pub fn reduced_unchecked(w: Word) -> ReducedWord {
    ReducedWord(w)
}

/// All words of length exactly `n` over `k` letters in lexicographic order.
pub fn words_of_length(k: usize, n: usize) -> impl Iterator<Item = Word> {
    let total = (k as u128).pow(n as u32);
    (0..total).map(move |mut idx| {
        let mut w = vec![Letter(0); n];
        for slot in w.iter_mut().rev() {
            *slot = Letter((idx % k as u128) as u16);
            idx /= k as u128;
        }
        w
    })
}

/// All words of length at most `n`, shortlex.
pub fn words_up_to(k: usize, n: usize) -> impl Iterator<Item = Word> {
    (0..=n).flat_map(move |len| words_of_length(k, len))
}

/// Display helper pairing a word with its alphabet.
pub struct Show<'a>(pub &'a Alphabet, pub &'a [Letter]);

impl fmt::Display for Show<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.format_word(self.1))
    }
}
