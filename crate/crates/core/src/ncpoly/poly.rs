use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::word::Word;
use crate::coeff::{is_one, Coeff};
use crate::error::{Error, Result};

/// Finite linear combination of words with Gaussian-rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct NCPolynomial {
    terms: BTreeMap<Word, Coeff>,
}

impl NCPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(word: Word) -> Self {
        Self::term(Coeff::one(), word)
    }

    pub fn term(c: Coeff, word: Word) -> Self {
        let mut p = Self::zero();
        p.add_term(c, word);
        p
    }

    pub fn add_term(&mut self, c: Coeff, word: Word) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Coeff)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &Word) -> Coeff {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(c.clone(), w.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Coeff::int(-1)))
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        let mut out = Self::zero();
        for (w, d) in &self.terms {
            out.add_term(c * d, w.clone());
        }
        out
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        self.scale(&Coeff::real(r.clone()))
    }

    /// Concatenation product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(c1 * c2, w1.concat(w2));
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(c.conj(), w.adjoint());
        }
        out
    }

    /// Parses `coeff * word + coeff * word - ...`; a bare word has coefficient 1.
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = Self::zero();
        let mut sign = 1i64;
        let mut current: Vec<&str> = Vec::new();
        let flush = |tokens: &mut Vec<&str>, sign: i64, out: &mut Self| -> Result<()> {
            if tokens.is_empty() {
                return Err(Error::Parse {
                    pos: 0,
                    msg: "empty term".into(),
                });
            }
            let (c, word_tokens) = match tokens.iter().position(|&t| t == "*") {
                Some(1) => (Coeff::parse(tokens[0])?, &tokens[2..]),
                Some(_) => {
                    return Err(Error::Parse {
                        pos: 0,
                        msg: "a term is `coeff * word`".into(),
                    })
                }
                None => (Coeff::one(), &tokens[..]),
            };
            let word = Word::parse(&word_tokens.join(" "))?;
            out.add_term(&c * &Coeff::int(sign), word);
            tokens.clear();
            Ok(())
        };
        for token in text.split_whitespace() {
            match token {
                "+" | "-" => {
                    if !current.is_empty() {
                        flush(&mut current, sign, &mut out)?;
                    }
                    sign = if token == "-" { -1 } else { 1 };
                }
                _ => current.push(token),
            }
        }
        if !current.is_empty() {
            flush(&mut current, sign, &mut out)?;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<JsonTerm> = self
            .terms
            .iter()
            .map(|(w, c)| JsonTerm {
                coeff: [c.re.to_string(), c.im.to_string()],
                word: w.0.iter().map(|l| l.to_string()).collect(),
            })
            .collect();
        serde_json::json!({ "terms": terms })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let parsed: JsonPoly = serde_json::from_value(value.clone()).map_err(|e| Error::Parse {
            pos: 0,
            msg: e.to_string(),
        })?;
        let mut out = Self::zero();
        for t in parsed.terms {
            let re = json_rational(&t.coeff[0])?;
            let im = json_rational(&t.coeff[1])?;
            let word = Word::parse(&t.word.join(" "))?;
            out.add_term(Coeff::new(re, im), word);
        }
        Ok(out)
    }
}

fn json_rational(v: &serde_json::Value) -> Result<BigRational> {
    let text = match v {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Number(n) => n.to_string(),
        _ => String::new(),
    };
    crate::coeff::parse_rational(&text).ok_or_else(|| Error::Parse {
        pos: 0,
        msg: format!("bad coefficient {v}"),
    })
}

#[derive(Serialize)]
struct JsonTerm {
    coeff: [String; 2],
    word: Vec<String>,
}

#[derive(Deserialize)]
struct JsonPoly {
    terms: Vec<JsonTermIn>,
}

#[derive(Deserialize)]
struct JsonTermIn {
    coeff: [serde_json::Value; 2],
    word: Vec<String>,
}

impl From<Word> for NCPolynomial {
    fn from(w: Word) -> Self {
        Self::monomial(w)
    }
}

fn write_terms<'a, K: fmt::Display + 'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (K, &'a Coeff)>,
) -> fmt::Result {
    let mut first = true;
    for (k, c) in terms {
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        if is_one(c) {
            write!(f, "{k}")?;
        } else {
            write!(f, "{c} * {k}")?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for NCPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter())
    }
}

/// Element of `A ⊗ A` stored as a combination of word pairs.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TensorPolynomial {
    terms: BTreeMap<(Word, Word), Coeff>,
}

impl TensorPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, c: Coeff, left: Word, right: Word) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((left, right)) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Word, Word), &Coeff)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((a, b), c) in &other.terms {
            out.add_term(c.clone(), a.clone(), b.clone());
        }
        out
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        let mut out = Self::zero();
        for ((a, b), d) in &self.terms {
            out.add_term(c * d, a.clone(), b.clone());
        }
        out
    }

    /// `(P ⊗ Q)`-style multiplication on each side: `(x ⊗ y) ↦ (l x ⊗ y r)`.
    pub fn sandwich(&self, left: &Word, right: &Word) -> Self {
        let mut out = Self::zero();
        for ((a, b), c) in &self.terms {
            out.add_term(c.clone(), left.concat(a), b.concat(right));
        }
        out
    }
}

struct Pair<'a>(&'a (Word, Word));

impl fmt::Display for Pair<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⊗ {}", self.0 .0, self.0 .1)
    }
}

impl fmt::Display for TensorPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().map(|(k, c)| (Pair(k), c)))
    }
}
