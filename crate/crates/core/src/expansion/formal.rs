use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::genus::GenusCache;
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::ncpoly::{NCPolynomial, TraceExpression, Word};

/// `V = Σ_i z_i c_i q_i` with formal parameters `z_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Potential {
    terms: Vec<(Coeff, Word)>,
}

impl Potential {
    pub fn new(terms: Vec<(Coeff, Word)>) -> Result<Self> {
        for (_, q) in &terms {
            if q.is_deterministic() {
                return Err(Error::Precondition(format!(
                    "potential term {q} has no unitary letter"
                )));
            }
        }
        Ok(Self { terms })
    }

    /// One `z_i` per monomial, with unit coefficients.
    pub fn from_monomials(qs: &[Word]) -> Result<Self> {
        Self::new(qs.iter().map(|q| (Coeff::one(), q.clone())).collect())
    }

    pub fn k(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[(Coeff, Word)] {
        &self.terms
    }

    /// `ν = max deg q_i`.
    pub fn nu(&self) -> usize {
        self.terms
            .iter()
            .map(|(_, q)| q.degree())
            .max()
            .unwrap_or(0)
    }

    /// `D V` as a polynomial in `z`: entry `i` is `c_i D_color(q_i)`.
    pub(crate) fn cyclic_derivatives(&self, color: u32) -> Vec<NCPolynomial> {
        self.terms
            .iter()
            .map(|(c, q)| {
                crate::ncpoly::cyclic_derivative(&NCPolynomial::term(c.clone(), q.clone()), color)
            })
            .collect()
    }
}

/// Coefficients of `M^(g)_{V,l}(P)` in the monomials `z^n`, up to `|n| ≤ z_cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalCumulant {
    pub g: u32,
    pub l: usize,
    pub z_cap: usize,
    /// `n ↦ [z^n] M^(g)_{V,l}(P)`, already divided by `n!`.
    pub coefficients: BTreeMap<Vec<usize>, TraceExpression>,
}

impl FormalCumulant {
    pub fn coefficient(&self, n: &[usize]) -> TraceExpression {
        self.coefficients.get(n).cloned().unwrap_or_default()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: serde_json::Map<String, serde_json::Value> = self
            .coefficients
            .iter()
            .map(|(n, t)| {
                let key = n
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                (key, serde_json::Value::String(t.to_string()))
            })
            .collect();
        serde_json::json!({ "g": self.g, "l": self.l, "z_cap": self.z_cap, "coefficients": coeffs })
    }
}

/// Multi-indices `n ∈ ℕ^k` with `|n| ≤ cap`, by total then lexicographically.
pub fn multi_indices(k: usize, cap: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for total in 0..=cap {
        for c in crate::maps::compositions(total, k) {
            out.push(c);
        }
    }
    out
}

pub(crate) fn multi_factorial(n: &[usize]) -> BigInt {
    n.iter()
        .map(|&x| (1..=x as u64).map(BigInt::from).product::<BigInt>())
        .product()
}

/// `q_n = (q₁ × n₁, .., q_k × n_k)` and the scalar `∏ c_i^{n_i}`.
pub(crate) fn repeated(v: &Potential, n: &[usize]) -> (Vec<Word>, Coeff) {
    let mut words = Vec::new();
    let mut c = Coeff::one();
    for ((ci, q), &ni) in v.terms.iter().zip(n) {
        for _ in 0..ni {
            words.push(q.clone());
            c = &c * ci;
        }
    }
    (words, c)
}

/// `[z^n] M^(g)_{V,l}(P) = M^(g)_{|n|+l}(q_n, P) / n!`.
pub fn formal_coefficient(
    g: u32,
    words: &[Word],
    v: &Potential,
    n: &[usize],
    cache: &GenusCache,
) -> Result<TraceExpression> {
    if n.len() != v.k() {
        return Err(Error::Precondition(format!(
            "multi-index of length {} for a potential with {} terms",
            n.len(),
            v.k()
        )));
    }
    let (mut all, c) = repeated(v, n);
    all.extend(words.iter().cloned());
    let value = cache.get(g, &all)?;
    let fact = BigRational::from_integer(multi_factorial(n));
    Ok(value
        .scale(&c)
        .scale_rational(&(BigRational::from_integer(1.into()) / fact)))
}

pub fn formal_cumulant(
    g: u32,
    words: &[Word],
    v: &Potential,
    z_cap: usize,
) -> Result<FormalCumulant> {
    let cache = GenusCache::new();
    let mut coefficients = BTreeMap::new();
    for n in multi_indices(v.k(), z_cap) {
        let t = formal_coefficient(g, words, v, &n, &cache)?;
        if !t.is_zero() {
            coefficients.insert(n, t);
        }
    }
    Ok(FormalCumulant {
        g,
        l: words.len(),
        z_cap,
        coefficients,
    })
}
