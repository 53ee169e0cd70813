use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::Serialize;

use super::setup::Setup;
use crate::coeff::Coeff;
use crate::error::Result;
use crate::maps::compositions;
use crate::maps::{enumerate_maps, MapSelection};
use crate::ncpoly::{
    dense_trace_key, trace_of_permutation, NCPolynomial, TraceExpression, TraceKey, Word,
};
use crate::walks::{count_connected, count_dense, UnionFind, WalkPart};

/// `M^(g)_l(P₁, .., P_l)`, the order-`N^{−2g}` term of the renormalized cumulant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusCoefficient {
    pub g: u32,
    pub l: usize,
    pub value: TraceExpression,
}

#[derive(Serialize)]
struct GenusJson {
    g: u32,
    l: usize,
    value: String,
}

impl GenusCoefficient {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(GenusJson {
            g: self.g,
            l: self.l,
            value: self.value.to_string(),
        })
        .unwrap()
    }
}

/// Value forced on tuples containing a deterministic entry: the renormalized cumulant of a
/// constant is `tr(Q)` alone and vanishes jointly with anything else.
fn degenerate(g: u32, words: &[Word]) -> Option<TraceExpression> {
    if words.is_empty() {
        return Some(TraceExpression::zero());
    }
    if !words.iter().any(Word::is_deterministic) {
        return None;
    }
    Some(if words.len() == 1 && g == 0 {
        TraceExpression::product_of_traces(words)
    } else {
        TraceExpression::zero()
    })
}

fn sign(k: usize) -> BigInt {
    if k.is_multiple_of(2) {
        BigInt::from(1)
    } else {
        BigInt::from(-1)
    }
}

/// `(−1)^{m+l} Σ_C (−1)^{c(φ_C)} tr_{φ_C}(M)` over connected nondecreasing genus-`g` maps
/// with `ρ = γ⁻¹`.
///
/// For each sign-compatible `π` the walk length is fixed by the Euler relation, so only
/// walk counts are needed: plain counts when `⟨γ, π⟩` is already transitive, a
/// connectivity-tracking count otherwise.
pub fn genus_coefficient(g: u32, words: &[Word]) -> Result<GenusCoefficient> {
    let l = words.len();
    let value = match degenerate(g, words) {
        Some(v) => v,
        None => match Setup::new(words)? {
            None => TraceExpression::zero(),
            Some(setup) => genus_sum(g, &setup),
        },
    };
    Ok(GenusCoefficient { g, l, value })
}

fn genus_sum(g: u32, setup: &Setup) -> TraceExpression {
    let (m, l) = (setup.m(), setup.l());
    let n = setup.ts.degree();
    let terms = crate::par_map(setup.pis(), |choice| {
        let phi = setup.phi(&choice.pi);
        let cphi = crate::perm::dense::num_cycles(&phi);
        let r = l as i64 + cphi as i64 - m as i64 - 2 + 2 * g as i64;
        if r < 0 {
            return None;
        }
        let r = r as usize;
        let mut uf = UnionFind::new(n);
        uf.union_perm(&setup.gamma);
        uf.union_perm(&choice.pi);
        let k = setup.blocks.len();
        let mut count = BigUint::zero();
        if uf.blocks() == 1 {
            for split in compositions(r, k) {
                let mut c = BigUint::from(1u32);
                for (t, &rc) in choice.targets.iter().zip(&split) {
                    c *= count_dense(t, rc);
                    if c.is_zero() {
                        break;
                    }
                }
                count += c;
            }
        } else {
            for split in compositions(r, k) {
                let parts: Vec<WalkPart> = setup
                    .blocks
                    .iter()
                    .zip(&choice.targets)
                    .zip(&split)
                    .map(|((b, t), &rc)| WalkPart {
                        positions: b.plus.clone(),
                        target: t.clone(),
                        r: rc,
                    })
                    .collect();
                count += count_connected(&parts, &mut uf.clone());
            }
        }
        if count.is_zero() {
            return None;
        }
        let weight = sign(m + l + cphi) * BigInt::from(count);
        Some((dense_trace_key(&phi, &setup.ts.m), weight))
    });
    let mut acc: HashMap<TraceKey, BigInt> = HashMap::new();
    for (k, w) in terms.into_iter().flatten() {
        *acc.entry(k).or_insert_with(BigInt::zero) += w;
    }
    TraceExpression::from_integer_counts(acc)
}

/// The same coefficient computed from the explicit list of maps.
pub fn genus_coefficient_by_maps(g: u32, words: &[Word]) -> Result<GenusCoefficient> {
    let l = words.len();
    if let Some(value) = degenerate(g, words) {
        return Ok(GenusCoefficient { g, l, value });
    }
    let ts = crate::ncpoly::tuple_structure(words)?;
    let m = ts.degree() / 2;
    let rho = ts.gamma.inverse();
    let maps = enumerate_maps(&rho, &ts.eps, &ts.colors, MapSelection::Genus(g), true)?;
    let mut value = TraceExpression::zero();
    for map in maps {
        let phi = map.phi();
        let s = if (m + l + phi.num_cycles()).is_multiple_of(2) {
            1
        } else {
            -1
        };
        value = value.add(&trace_of_permutation(&phi, &ts.m)?.scale(&Coeff::int(s)));
    }
    Ok(GenusCoefficient { g, l, value })
}

/// Multilinear extension to polynomial arguments.
pub fn genus_coefficient_poly(
    g: u32,
    polys: &[NCPolynomial],
    cache: &GenusCache,
) -> Result<TraceExpression> {
    let lists: Vec<Vec<(Word, Coeff)>> = polys
        .iter()
        .map(|p| p.terms().map(|(w, c)| (w.clone(), c.clone())).collect())
        .collect();
    let mut total = TraceExpression::zero();
    for choice in crate::maps::cartesian(&lists) {
        let words: Vec<Word> = choice.iter().map(|(w, _)| w.clone()).collect();
        let c = choice.iter().fold(Coeff::one(), |acc, (_, c)| &acc * c);
        total.add_assign(&cache.get(g, &words)?.scale(&c));
    }
    Ok(total)
}

/// Memoized [`genus_coefficient`] keyed by the exact argument tuple.
#[derive(Default)]
pub struct GenusCache {
    memo: Mutex<HashMap<(u32, Vec<Word>), TraceExpression>>,
}

impl GenusCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// `M^(g)` with `M^(−1) = 0` folded in through `g: i64`.
    pub fn get_signed(&self, g: i64, words: &[Word]) -> Result<TraceExpression> {
        if g < 0 {
            return Ok(TraceExpression::zero());
        }
        self.get(g as u32, words)
    }

    pub fn get(&self, g: u32, words: &[Word]) -> Result<TraceExpression> {
        let key = (g, words.to_vec());
        if let Some(v) = self.memo.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let v = genus_coefficient(g, words)?.value;
        self.memo.lock().unwrap().insert(key, v.clone());
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.memo.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn tr(words: &[&str]) -> TraceExpression {
        TraceExpression::product_of_traces(&words.iter().map(|s| w(s)).collect::<Vec<_>>())
    }

    #[test]
    fn planar_hciz_term() {
        let m = genus_coefficient(0, &[w("a1 u1 a2 u1^-1")]).unwrap();
        assert_eq!(m.value, tr(&["a1", "a2"]));
        assert!(genus_coefficient(0, &[w("a1 u1")]).unwrap().value.is_zero());
        assert!(genus_coefficient(0, &[w("a1 u1^-1")])
            .unwrap()
            .value
            .is_zero());
    }

    #[test]
    fn single_word_has_no_higher_genus() {
        for g in 1..=3 {
            assert!(genus_coefficient(g, &[w("a1 u1 a2 u1^-1")])
                .unwrap()
                .value
                .is_zero());
        }
    }

    #[test]
    fn degenerate_conventions() {
        assert_eq!(genus_coefficient(0, &[w("a1")]).unwrap().value, tr(&["a1"]));
        assert_eq!(
            genus_coefficient(0, &[w("1")]).unwrap().value,
            TraceExpression::one()
        );
        assert!(genus_coefficient(1, &[w("a1")]).unwrap().value.is_zero());
        assert!(genus_coefficient(0, &[w("a1"), w("u1 u1^-1")])
            .unwrap()
            .value
            .is_zero());
        assert!(genus_coefficient(0, &[]).unwrap().value.is_zero());
    }

    #[test]
    fn fast_and_enumerated_agree() {
        let cases: &[&[&str]] = &[
            &["a1 u1 a2 u1^-1"],
            &["a1 u1 a2 u1 a3 u1^-1 a4 u1^-1"],
            &["a1 u1 a2 u1^-1 a3 u1 a4 u1^-1"],
            &["a1 u1 a2 u1^-1", "a3 u1 a4 u1^-1"],
            &["a1 u1 a2 u1", "a3 u1^-1 a4 u1^-1"],
            &["a1 u1", "a2 u1^-1"],
            &["a1 u1", "a2 u1^-1 a3 u1 a4 u1^-1"],
            &["a1 u1 a2 u1^-1 a3 u2 a4 u2^-1"],
            &["a1 u1 a2 u2", "a3 u1^-1 a4 u2^-1"],
            &["u1 u1 u1^-1", "u1^-1"],
            &["a1 u1", "a2 u1", "a3 u1^-1 a4 u1^-1"],
        ];
        for tuple in cases {
            let words: Vec<Word> = tuple.iter().map(|s| w(s)).collect();
            for g in 0..=2 {
                let fast = genus_coefficient(g, &words).unwrap();
                let slow = genus_coefficient_by_maps(g, &words).unwrap();
                assert_eq!(fast, slow, "{tuple:?} g={g}");
            }
        }
    }

    #[test]
    fn two_point_planar_term() {
        // M^(0)(a1 u a2 u⁻¹, a3 u a4 u⁻¹) from the two planar pairings that connect the words
        let v = genus_coefficient(0, &[w("a1 u1 a2 u1^-1"), w("a3 u1 a4 u1^-1")])
            .unwrap()
            .value;
        assert!(!v.is_zero());
        let c = genus_coefficient_by_maps(0, &[w("a1 u1 a2 u1^-1"), w("a3 u1 a4 u1^-1")]).unwrap();
        assert_eq!(v, c.value);
    }
}
