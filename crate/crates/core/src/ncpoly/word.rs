use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{Permutation, SignVector};

/// One generator of the free algebra: `u_i`, `u_i⁻¹`, `a_j` or `a_j*`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Letter {
    U(u32),
    UInv(u32),
    A(u32),
    AStar(u32),
}

impl Letter {
    pub fn is_unitary(self) -> bool {
        matches!(self, Letter::U(_) | Letter::UInv(_))
    }

    /// Color of a unitary letter.
    pub fn color(self) -> Option<u32> {
        match self {
            Letter::U(c) | Letter::UInv(c) => Some(c),
            _ => None,
        }
    }

    /// `+1` for `u`, `-1` for `u⁻¹`, `0` for deterministic letters.
    pub fn sign(self) -> i8 {
        match self {
            Letter::U(_) => 1,
            Letter::UInv(_) => -1,
            _ => 0,
        }
    }

    pub fn adjoint(self) -> Letter {
        match self {
            Letter::U(c) => Letter::UInv(c),
            Letter::UInv(c) => Letter::U(c),
            Letter::A(j) => Letter::AStar(j),
            Letter::AStar(j) => Letter::A(j),
        }
    }

    pub fn parse(token: &str) -> Option<Letter> {
        let index = |s: &str| -> Option<u32> {
            if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            s.parse().ok().filter(|&k| k > 0)
        };
        if let Some(rest) = token.strip_prefix('u') {
            if let Some(k) = rest.strip_suffix("^-1").or_else(|| rest.strip_suffix('*')) {
                return index(k).map(Letter::UInv);
            }
            return index(rest).map(Letter::U);
        }
        if let Some(rest) = token.strip_prefix('a') {
            if let Some(k) = rest.strip_suffix('*') {
                return index(k).map(Letter::AStar);
            }
            return index(rest).map(Letter::A);
        }
        None
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::U(c) => write!(f, "u{c}"),
            Letter::UInv(c) => write!(f, "u{c}^-1"),
            Letter::A(j) => write!(f, "a{j}"),
            Letter::AStar(j) => write!(f, "a{j}*"),
        }
    }
}

impl Serialize for Letter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Letter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Letter::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("bad letter {s:?}")))
    }
}

/// A monomial of the free algebra. No relation between `u` and `u⁻¹` is applied.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Parses whitespace-separated letters; `1` (alone) is the empty word.
    pub fn parse(text: &str) -> Result<Self> {
        let mut letters = Vec::new();
        let mut offset = 0;
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens == ["1"] {
            return Ok(Word::empty());
        }
        for token in tokens {
            let pos = text[offset..].find(token).map_or(offset, |k| k + offset);
            offset = pos + token.len();
            letters.push(Letter::parse(token).ok_or_else(|| Error::Parse {
                pos,
                msg: format!("unknown letter {token:?}"),
            })?);
        }
        Ok(Word(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of unitary letters of every color.
    pub fn degree(&self) -> usize {
        self.0.iter().filter(|l| l.is_unitary()).count()
    }

    pub fn degree_in(&self, color: u32) -> usize {
        self.0.iter().filter(|l| l.color() == Some(color)).count()
    }

    pub fn degree_plus(&self, color: u32) -> usize {
        self.0.iter().filter(|&&l| l == Letter::U(color)).count()
    }

    pub fn degree_minus(&self, color: u32) -> usize {
        self.0.iter().filter(|&&l| l == Letter::UInv(color)).count()
    }

    pub fn is_deterministic(&self) -> bool {
        self.degree() == 0
    }

    /// Colors present, sorted.
    pub fn colors(&self) -> Vec<u32> {
        let mut c: Vec<u32> = self.0.iter().filter_map(|l| l.color()).collect();
        c.sort_unstable();
        c.dedup();
        c
    }

    pub fn adjoint(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.adjoint()).collect())
    }

    /// Moves the first `k` letters to the end.
    pub fn rotate(&self, k: usize) -> Word {
        if self.0.is_empty() {
            return self.clone();
        }
        let k = k % self.0.len();
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn slice(&self, from: usize, to: usize) -> Word {
        Word(self.0[from..to].to_vec())
    }

    /// Moves the trailing deterministic letters to the front, so the word ends in a
    /// unitary letter; `None` for degree 0.
    pub fn rotate_to_unitary_end(&self) -> Option<Word> {
        self.0
            .iter()
            .rposition(|l| l.is_unitary())
            .map(|k| self.rotate(k + 1))
    }

    /// The lexicographically least rotation.
    pub fn canonical_rotation(&self) -> Word {
        Word(canonical_cyclic(&self.0))
    }
}

pub(crate) fn canonical_cyclic(letters: &[Letter]) -> Vec<Letter> {
    let n = letters.len();
    let mut best = 0;
    for k in 1..n {
        let better = (0..n)
            .map(|i| letters[(k + i) % n].cmp(&letters[(best + i) % n]))
            .find(|o| o.is_ne())
            == Some(std::cmp::Ordering::Less);
        if better {
            best = k;
        }
    }
    let mut v = letters[best..].to_vec();
    v.extend_from_slice(&letters[..best]);
    v
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(Letter::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl std::str::FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Word::parse(s)
    }
}

/// `P = M₁ u^{ε₁}_{t₁} M₂ u^{ε₂}_{t₂} ··· M_d u^{ε_d}_{t_d}` for a word ending in a unitary letter.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WordDecomposition {
    pub m: Vec<Word>,
    pub eps: Vec<i8>,
    pub colors: Vec<u32>,
}

impl WordDecomposition {
    pub fn reassemble(&self) -> Word {
        let mut v = Vec::new();
        for ((mi, &e), &c) in self.m.iter().zip(&self.eps).zip(&self.colors) {
            v.extend_from_slice(&mi.0);
            v.push(if e > 0 { Letter::U(c) } else { Letter::UInv(c) });
        }
        Word(v)
    }

    pub fn degree(&self) -> usize {
        self.eps.len()
    }
}

/// Decomposes a word; if it does not end in a unitary letter it is rotated
/// first by the smallest rotation that does.
pub fn decompose(word: &Word) -> Result<WordDecomposition> {
    let w = word
        .rotate_to_unitary_end()
        .ok_or_else(|| Error::Precondition(format!("deterministic-only word {word}")))?;
    let mut m = Vec::new();
    let mut eps = Vec::new();
    let mut colors = Vec::new();
    let mut current = Vec::new();
    for &l in &w.0 {
        match l {
            Letter::U(c) | Letter::UInv(c) => {
                m.push(Word(std::mem::take(&mut current)));
                eps.push(l.sign());
                colors.push(c);
            }
            _ => current.push(l),
        }
    }
    Ok(WordDecomposition { m, eps, colors })
}

/// The combined labelled data of a tuple of words of positive degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TupleStructure {
    /// Consecutive cycles of lengths `deg P₁, deg P₂, ..` on `{1, .., deg P}`.
    pub gamma: Permutation,
    pub m: Vec<Word>,
    pub eps: SignVector,
    pub colors: Vec<u32>,
    /// Degree of each word.
    pub blocks: Vec<usize>,
}

impl TupleStructure {
    pub fn degree(&self) -> usize {
        self.m.len()
    }

    /// Labels (1-based) of the given color.
    pub fn labels_of_color(&self, color: u32) -> Vec<u32> {
        self.colors
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == color)
            .map(|(k, _)| k as u32 + 1)
            .collect()
    }

    pub fn distinct_colors(&self) -> Vec<u32> {
        let mut c = self.colors.clone();
        c.sort_unstable();
        c.dedup();
        c
    }
}

/// `γ_P` as consecutive full cycles whose endpoints are the cumulative degrees.
pub fn gamma_of_tuple(words: &[Word]) -> Result<Permutation> {
    Ok(tuple_structure(words)?.gamma)
}

pub fn gamma_from_blocks(blocks: &[usize]) -> Permutation {
    let total: usize = blocks.iter().sum();
    let mut cycles = Vec::new();
    let mut start = 1u32;
    for &b in blocks {
        cycles.push((start..start + b as u32).collect::<Vec<u32>>());
        start += b as u32;
    }
    Permutation::from_cycles(crate::perm::range(total), &cycles).unwrap()
}

pub fn tuple_structure(words: &[Word]) -> Result<TupleStructure> {
    let mut m = Vec::new();
    let mut eps = Vec::new();
    let mut colors = Vec::new();
    let mut blocks = Vec::new();
    for w in words {
        if w.is_deterministic() {
            return Err(Error::Precondition(format!("degree-0 entry {w}")));
        }
        let d = decompose(w)?;
        blocks.push(d.degree());
        m.extend(d.m);
        eps.extend(d.eps);
        colors.extend(d.colors);
    }
    Ok(TupleStructure {
        gamma: gamma_from_blocks(&blocks),
        m,
        eps: SignVector::on_range(eps)?,
        colors,
        blocks,
    })
}
