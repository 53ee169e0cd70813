use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use super::word::{canonical_cyclic, Letter, Word};
use crate::coeff::{is_one, Coeff};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Sorted multiset of rotation-canonical nonempty cyclic words: `∏ tr(w)`.
pub type TraceKey = Vec<Vec<Letter>>;

/// Formal combination of products of normalized traces `tr(w) = Tr(w)/N`.
///
/// The empty key is the constant 1; `tr(1) = 1` so empty words never appear in keys.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TraceExpression {
    terms: BTreeMap<TraceKey, Coeff>,
}

/// Canonical key of `∏ tr(w)` over the given words.
pub fn trace_key<I, W>(words: I) -> TraceKey
where
    I: IntoIterator<Item = W>,
    W: AsRef<[Letter]>,
{
    let mut key: TraceKey = words
        .into_iter()
        .filter(|w| !w.as_ref().is_empty())
        .map(|w| canonical_cyclic(w.as_ref()))
        .collect();
    key.sort();
    key
}

fn merge_keys(a: &TraceKey, b: &TraceKey) -> TraceKey {
    let mut k = a.clone();
    k.extend(b.iter().cloned());
    k.sort();
    k
}

impl TraceExpression {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Coeff) -> Self {
        let mut t = Self::zero();
        t.add_term(TraceKey::new(), c);
        t
    }

    pub fn one() -> Self {
        Self::constant(Coeff::one())
    }

    /// `∏ tr(w)` over the words.
    pub fn product_of_traces(words: &[Word]) -> Self {
        let mut t = Self::zero();
        t.add_term(trace_key(words.iter().map(|w| &w.0[..])), Coeff::one());
        t
    }

    pub fn add_term(&mut self, key: TraceKey, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
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

    pub(crate) fn from_integer_counts(counts: HashMap<TraceKey, num_bigint::BigInt>) -> Self {
        let mut t = Self::zero();
        for (k, n) in counts {
            t.add_term(k, Coeff::real(BigRational::from_integer(n)));
        }
        t
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TraceKey, &Coeff)> {
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

    pub fn coefficient(&self, key: &TraceKey) -> Coeff {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&Coeff::int(-1))
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        let mut out = Self::zero();
        for (k, d) in &self.terms {
            out.add_term(k.clone(), c * d);
        }
        out
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        self.scale(&Coeff::real(r.clone()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                out.add_term(merge_keys(k1, k2), c1 * c2);
            }
        }
        out
    }

    /// Complex conjugate: `conj(tr(w)) = tr(w*)` and conjugated coefficients.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            let words: Vec<Word> = k.iter().map(|w| Word(w.clone()).adjoint()).collect();
            out.add_term(trace_key(words.iter().map(|w| &w.0[..])), c.conj());
        }
        out
    }

    /// `Σ |c|` with `|c|` replaced by `|re| + |im|`; bounds `|T|` whenever every `|tr| ≤ 1`.
    pub fn abs_coefficient_sum(&self) -> BigRational {
        self.terms
            .values()
            .fold(BigRational::zero(), |acc, c| acc + c.abs_surrogate())
    }

    /// Numeric value with `tr(w) = Tr(w(letters))/N`.
    pub fn evaluate_with(
        &self,
        n: usize,
        letter: &dyn Fn(Letter) -> Option<DMatrix<Complex64>>,
    ) -> Result<Complex64> {
        let mut cache: HashMap<Vec<Letter>, Complex64> = HashMap::new();
        let mut total = Complex64::new(0.0, 0.0);
        for (key, c) in &self.terms {
            let mut value = c.to_complex();
            for w in key {
                let t = match cache.get(w) {
                    Some(&t) => t,
                    None => {
                        let mut m = DMatrix::<Complex64>::identity(n, n);
                        for &l in w {
                            let x = letter(l).ok_or_else(|| {
                                Error::Precondition(format!("no matrix for letter {l}"))
                            })?;
                            if x.nrows() != n || x.ncols() != n {
                                return Err(Error::Dimension(format!(
                                    "matrix for {l} is {}x{}, expected {n}x{n}",
                                    x.nrows(),
                                    x.ncols()
                                )));
                            }
                            m *= x;
                        }
                        let t = m.trace() / n as f64;
                        cache.insert(w.clone(), t);
                        t
                    }
                };
                value *= t;
            }
            total += value;
        }
        Ok(total)
    }

    /// Numeric value for deterministic letters `a_j ↦ A[j]`, `a_j* ↦ A[j]*`.
    pub fn evaluate(&self, a: &BTreeMap<u32, DMatrix<Complex64>>, n: usize) -> Result<Complex64> {
        self.evaluate_with(n, &|l| match l {
            Letter::A(j) => a.get(&j).cloned(),
            Letter::AStar(j) => a.get(&j).map(|m| m.adjoint()),
            _ => None,
        })
    }
}

/// `tr_σ(M) = ∏_{cycles (i₁ i₂ ..)} tr(M_{i₁} M_{i₂} ..)` where `domain(σ) = {1, .., |M|}`.
pub fn trace_of_permutation(sigma: &Permutation, m: &[Word]) -> Result<TraceExpression> {
    if sigma.domain() != crate::perm::range(m.len()).as_slice() {
        return Err(Error::DomainMismatch(format!(
            "permutation on {:?} cannot index {} words",
            sigma.domain(),
            m.len()
        )));
    }
    let words: Vec<Vec<Letter>> = sigma
        .cycles()
        .iter()
        .map(|c| {
            c.iter()
                .flat_map(|&i| m[i as usize - 1].0.iter().copied())
                .collect()
        })
        .collect();
    let mut t = TraceExpression::zero();
    t.add_term(trace_key(&words), Coeff::one());
    Ok(t)
}

/// Same as [`trace_of_permutation`] for a dense permutation of `{0, .., |M|-1}`.
pub(crate) fn dense_trace_key(p: &[usize], m: &[Word]) -> TraceKey {
    let words: Vec<Vec<Letter>> = crate::perm::dense::cycles(p)
        .iter()
        .map(|c| c.iter().flat_map(|&i| m[i].0.iter().copied()).collect())
        .collect();
    trace_key(&words)
}

pub fn format_key(key: &TraceKey) -> String {
    if key.is_empty() {
        return "1".into();
    }
    key.iter()
        .map(|w| format!("tr({})", Word(w.clone())))
        .collect::<Vec<_>>()
        .join(" ")
}

impl TraceExpression {
    /// Each term as `coeff * tr(a1 a2) tr(a3)`, with a unit coefficient left out.
    pub fn term_strings(&self) -> Vec<String> {
        self.terms
            .iter()
            .map(|(k, c)| {
                if k.is_empty() {
                    c.to_string()
                } else if is_one(c) {
                    format_key(k)
                } else {
                    format!("{c} * {}", format_key(k))
                }
            })
            .collect()
    }
}

impl fmt::Display for TraceExpression {
    /// Terms joined by ` + `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", self.term_strings().join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn trace_of_permutation_examples() {
        let m = [w("a1"), w("a2")];
        let t = trace_of_permutation(&Permutation::id(2), &m).unwrap();
        assert_eq!(t, TraceExpression::product_of_traces(&m));
        assert_eq!(t.to_string(), "tr(a1) tr(a2)");
        let t =
            trace_of_permutation(&Permutation::parse_on_range("(1 2)", 2).unwrap(), &m).unwrap();
        assert_eq!(t.to_string(), "tr(a1 a2)");
        let e = [Word::empty(), Word::empty()];
        let t =
            trace_of_permutation(&Permutation::parse_on_range("(1 2)", 2).unwrap(), &e).unwrap();
        assert_eq!(t, TraceExpression::one());
        assert!(trace_of_permutation(&Permutation::id(3), &m).is_err());
    }

    #[test]
    fn rotated_words_merge() {
        let mut t = TraceExpression::product_of_traces(&[w("a1 a2 a3")]);
        t.add_assign(&TraceExpression::product_of_traces(&[w("a3 a1 a2")]));
        assert_eq!(t.len(), 1);
        assert_eq!(
            t.coefficient(&trace_key([&w("a2 a3 a1").0[..]])),
            Coeff::int(2)
        );
    }

    #[test]
    fn evaluation_examples() {
        let mut a = BTreeMap::new();
        a.insert(1, DMatrix::<Complex64>::identity(3, 3));
        let t = TraceExpression::product_of_traces(&[w("a1")]);
        assert!((t.evaluate(&a, 3).unwrap() - 1.0).norm() < 1e-15);

        let mut a = BTreeMap::new();
        let d = |x: f64, y: f64| {
            DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
                Complex64::new(x, 0.0),
                Complex64::new(y, 0.0),
            ]))
        };
        a.insert(1, d(1.0, 0.0));
        a.insert(2, d(0.0, 1.0));
        let t = TraceExpression::product_of_traces(&[w("a1"), w("a2")]);
        assert!((t.evaluate(&a, 2).unwrap() - 0.25).norm() < 1e-15);
        assert_eq!(
            TraceExpression::zero().evaluate(&a, 2).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        assert!(t.evaluate(&a, 3).is_err());
    }

    #[test]
    fn conj_uses_adjoint_words() {
        let t = TraceExpression::product_of_traces(&[w("a1 a2")])
            .scale(&Coeff::new(rat(1, 2), rat(1, 3)));
        let c = t.conj();
        assert_eq!(c.to_string(), "1/2-1/3i * tr(a1* a2*)");
        assert_eq!(c.conj(), t);
    }
}
