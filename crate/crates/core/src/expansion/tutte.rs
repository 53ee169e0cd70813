use serde::Serialize;

use super::formal::{multi_factorial, repeated, Potential};
use super::genus::GenusCache;
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::ncpoly::{
    cyclic_derivative, nc_derivative, Letter, NCPolynomial, TraceExpression, Word,
};

/// Both sides of an identity between genus coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub lhs: TraceExpression,
    pub rhs: TraceExpression,
    pub equal: bool,
}

#[derive(Serialize)]
struct IdentityJson {
    lhs: String,
    rhs: String,
    equal: bool,
}

impl IdentityCheck {
    pub fn new(lhs: TraceExpression, rhs: TraceExpression) -> Self {
        let equal = lhs == rhs;
        Self { lhs, rhs, equal }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(IdentityJson {
            lhs: self.lhs.to_string(),
            rhs: self.rhs.to_string(),
            equal: self.equal,
        })
        .unwrap()
    }
}

/// Subsets of `{0, .., n-1}` as sorted index lists, by bitmask.
fn subsets(n: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    (0u32..1 << n)
        .map(|mask| {
            let (a, b): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| mask >> i & 1 == 1);
            (a, b)
        })
        .collect()
}

fn pick(words: &[Word], idx: &[usize]) -> Vec<Word> {
    idx.iter().map(|&i| words[i].clone()).collect()
}

fn with(mut v: Vec<Word>, extra: Word) -> Vec<Word> {
    v.push(extra);
    v
}

fn check_degree(words: &[Word], color: u32) -> Result<()> {
    let d: usize = words.iter().map(|w| w.degree_in(color)).sum();
    if d < 4 {
        return Err(Error::Precondition(format!(
            "the relation needs at least two pairs of u{color}, the tuple has degree {d}"
        )));
    }
    Ok(())
}

/// `Σ_{g₁+g₂=g} Σ_{I ⊆ [l−1]} M^(g₁)(P_I, A) M^(g₂)(P_{I^c}, B)`.
fn split_sum(
    cache: &GenusCache,
    g: u32,
    rest: &[Word],
    a: &Word,
    b: &Word,
) -> Result<TraceExpression> {
    let mut out = TraceExpression::zero();
    for (i, ic) in subsets(rest.len()) {
        for g1 in 0..=g {
            let left = cache.get(g1, &with(pick(rest, &i), a.clone()))?;
            if left.is_zero() {
                continue;
            }
            let right = cache.get(g - g1, &with(pick(rest, &ic), b.clone()))?;
            out.add_assign(&left.mul(&right));
        }
    }
    Ok(out)
}

/// The recursion on the last letter: for `P = (P₁, .., P_{l−1}, P_l u)` compares `M^(g)_l(P)`
/// with the sum over all ways of splitting at a `u` or `u⁻¹` of the same color.
pub fn tutte_check(
    g: u32,
    words: &[Word],
    color: u32,
    cache: &GenusCache,
) -> Result<IdentityCheck> {
    let (last, rest) = words
        .split_last()
        .ok_or_else(|| Error::Precondition("empty tuple".into()))?;
    if last.letters().last() != Some(&Letter::U(color)) {
        return Err(Error::Precondition(format!(
            "the last word must end in u{color}"
        )));
    }
    check_degree(words, color)?;
    let u = Word(vec![Letter::U(color)]);
    let pl = last.slice(0, last.len() - 1);
    let lhs = cache.get(g, words)?;
    let mut rhs = TraceExpression::zero();
    let gm1 = g as i64 - 1;
    for (k, &x) in pl.letters().iter().enumerate() {
        let q = pl.slice(0, k);
        let r = pl.slice(k + 1, pl.len());
        let (a, b, s) = if x == Letter::U(color) {
            (q.concat(&u), r.concat(&u), -1)
        } else if x == Letter::UInv(color) {
            (q, r, 1)
        } else {
            continue;
        };
        let mut term = cache.get_signed(gm1, &with(with(rest.to_vec(), a.clone()), b.clone()))?;
        term.add_assign(&split_sum(cache, g, rest, &a, &b)?);
        rhs.add_assign(&term.scale(&Coeff::int(s)));
    }
    for (j, pj) in rest.iter().enumerate() {
        let others: Vec<Word> = rest
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, w)| w.clone())
            .collect();
        for (k, &x) in pj.letters().iter().enumerate() {
            let q = pj.slice(0, k);
            let r = pj.slice(k + 1, pj.len());
            let (merged, s) = if x == Letter::U(color) {
                (r.concat(&q).concat(&u).concat(last), -1)
            } else if x == Letter::UInv(color) {
                (r.concat(&q).concat(&pl), 1)
            } else {
                continue;
            };
            rhs.add_assign(
                &cache
                    .get(g, &with(others.clone(), merged))?
                    .scale(&Coeff::int(s)),
            );
        }
    }
    Ok(IdentityCheck::new(lhs, rhs))
}

/// Linear extension over the last argument.
fn m_last(
    cache: &GenusCache,
    g: i64,
    fixed: &[Word],
    last: &NCPolynomial,
) -> Result<TraceExpression> {
    let mut out = TraceExpression::zero();
    for (w, c) in last.terms() {
        out.add_assign(
            &cache
                .get_signed(g, &with(fixed.to_vec(), w.clone()))?
                .scale(c),
        );
    }
    Ok(out)
}

/// The same recursion written with `∂` and `D`, for an arbitrary last word:
/// `Σ M⊗M(P_I ⊗ P_{I^c} # ∂P_l) = −M^(g−1)(P₁ ⊗ .. ⊗ ∂P_l) − Σ_j M^(g)(.. P̌_j .. ⊗ (D P_j)P_l)`.
pub fn tutte_check_tensor(
    g: u32,
    words: &[Word],
    color: u32,
    cache: &GenusCache,
) -> Result<IdentityCheck> {
    let (last, rest) = words
        .split_last()
        .ok_or_else(|| Error::Precondition("empty tuple".into()))?;
    check_degree(words, color)?;
    let d = nc_derivative(&NCPolynomial::monomial(last.clone()), color);
    let mut lhs = TraceExpression::zero();
    let mut rhs = TraceExpression::zero();
    for ((q1, q2), c) in d.terms() {
        lhs.add_assign(&split_sum(cache, g, rest, q1, q2)?.scale(c));
        let args = with(with(rest.to_vec(), q1.clone()), q2.clone());
        rhs.add_assign(&cache.get_signed(g as i64 - 1, &args)?.scale(&-c));
    }
    let last_poly = NCPolynomial::monomial(last.clone());
    for (j, pj) in rest.iter().enumerate() {
        let others: Vec<Word> = rest
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, w)| w.clone())
            .collect();
        let dp = cyclic_derivative(&NCPolynomial::monomial(pj.clone()), color).mul(&last_poly);
        rhs.add_assign(&m_last(cache, g as i64, &others, &dp)?.neg());
    }
    Ok(IdentityCheck::new(lhs, rhs))
}

/// `[z^n]` of the recursion with a potential `V = Σ z_i c_i q_i`.
pub fn tutte_check_potential(
    g: u32,
    words: &[Word],
    v: &Potential,
    n: &[usize],
    color: u32,
    cache: &GenusCache,
) -> Result<IdentityCheck> {
    if n.len() != v.k() {
        return Err(Error::Precondition(
            "multi-index length differs from the number of z's".into(),
        ));
    }
    let (last, rest) = words
        .split_last()
        .ok_or_else(|| Error::Precondition("empty tuple".into()))?;
    let (qn, _) = repeated(v, n);
    check_degree(&[qn, words.to_vec()].concat(), color)?;
    // [z^n] M^(g)_V(args) = c^n M^(g)(q_n, args) / n!
    let coef = |g: i64, n: &[usize], args: &[Word]| -> Result<TraceExpression> {
        let (mut all, c) = repeated(v, n);
        all.extend_from_slice(args);
        let inv = num_rational::BigRational::new(1.into(), multi_factorial(n));
        Ok(cache.get_signed(g, &all)?.scale(&c).scale_rational(&inv))
    };
    let splits: Vec<(Vec<usize>, Vec<usize>)> =
        super::formal::multi_indices(n.len(), n.iter().sum())
            .into_iter()
            .filter(|n1| n1.iter().zip(n).all(|(a, b)| a <= b))
            .map(|n1| {
                let n2 = n.iter().zip(&n1).map(|(a, b)| a - b).collect();
                (n1, n2)
            })
            .collect();
    let d = nc_derivative(&NCPolynomial::monomial(last.clone()), color);
    let mut lhs = TraceExpression::zero();
    let mut rhs = TraceExpression::zero();
    for ((q1, q2), c) in d.terms() {
        for (i, ic) in subsets(rest.len()) {
            for g1 in 0..=g {
                for (n1, n2) in &splits {
                    let left = coef(g1 as i64, n1, &with(pick(rest, &i), q1.clone()))?;
                    if left.is_zero() {
                        continue;
                    }
                    let right = coef((g - g1) as i64, n2, &with(pick(rest, &ic), q2.clone()))?;
                    lhs.add_assign(&left.mul(&right).scale(c));
                }
            }
        }
        let args = with(with(rest.to_vec(), q1.clone()), q2.clone());
        rhs.add_assign(&coef(g as i64 - 1, n, &args)?.scale(&-c));
    }
    let last_poly = NCPolynomial::monomial(last.clone());
    for (j, dq) in v.cyclic_derivatives(color).iter().enumerate() {
        if n[j] == 0 {
            continue;
        }
        let mut nj = n.to_vec();
        nj[j] -= 1;
        for (w, c) in dq.mul(&last_poly).terms() {
            lhs.add_assign(&coef(g as i64, &nj, &with(rest.to_vec(), w.clone()))?.scale(c));
        }
    }
    for (j, pj) in rest.iter().enumerate() {
        let others: Vec<Word> = rest
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, w)| w.clone())
            .collect();
        let dp = cyclic_derivative(&NCPolynomial::monomial(pj.clone()), color).mul(&last_poly);
        for (w, c) in dp.terms() {
            rhs.add_assign(&coef(g as i64, n, &with(others.clone(), w.clone()))?.scale(&-c));
        }
    }
    Ok(IdentityCheck::new(lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn ws(s: &[&str]) -> Vec<Word> {
        s.iter().map(|x| w(x)).collect()
    }

    #[test]
    fn one_word_planar() {
        let cache = GenusCache::new();
        let c = tutte_check(0, &ws(&["a1 u1 a2 u1"]), 1, &cache);
        assert!(
            c.is_err(),
            "a single pair is below the range of the relation"
        );
        for s in [
            "a1 u1^-1 a2 u1 a3 u1^-1 a4 u1",
            "a1 u1 a2 u1^-1 a3 u1^-1 a4 u1",
            "a1 u1^-1 a2 u1^-1 a3 u1 a4 u1",
        ] {
            for g in 0..=1 {
                let c = tutte_check(g, &ws(&[s]), 1, &cache).unwrap();
                assert!(c.equal, "{s} g={g}: {} vs {}", c.lhs, c.rhs);
                let t = tutte_check_tensor(g, &ws(&[s]), 1, &cache).unwrap();
                assert!(t.equal, "tensor {s} g={g}: {} vs {}", t.lhs, t.rhs);
            }
        }
    }

    #[test]
    fn two_words_genus_one() {
        let cache = GenusCache::new();
        for tuple in [
            ["a1 u1 a2 u1^-1", "a3 u1 a4 u1^-1 a5 u1"],
            ["a1 u1^-1 a2 u1^-1", "a3 u1 a4 u1"],
        ] {
            let t = ws(&tuple);
            for g in 0..=2 {
                let c = tutte_check(g, &t, 1, &cache);
                if let Ok(c) = c {
                    assert!(c.equal, "{tuple:?} g={g}: {} vs {}", c.lhs, c.rhs);
                }
                let c = tutte_check_tensor(g, &t, 1, &cache).unwrap();
                assert!(c.equal, "tensor {tuple:?} g={g}: {} vs {}", c.lhs, c.rhs);
            }
        }
    }

    #[test]
    fn no_inverse_letters_means_no_inverse_sums() {
        let cache = GenusCache::new();
        let t = ws(&["a1 u1 a2 u1", "a3 u1^-1 a4 u1^-1"]);
        let c = tutte_check_tensor(0, &[t[1].clone(), t[0].clone()], 1, &cache).unwrap();
        assert!(c.equal);
    }

    #[test]
    fn with_potential() {
        let cache = GenusCache::new();
        let v = Potential::from_monomials(&[w("a5 u1 a6 u1^-1")]).unwrap();
        let p = ws(&["a1 u1 a2 u1^-1"]);
        for n in 0..=2 {
            for g in 0..=1 {
                match tutte_check_potential(g, &p, &v, &[n], 1, &cache) {
                    Ok(c) => assert!(c.equal, "n={n} g={g}: {} vs {}", c.lhs, c.rhs),
                    Err(_) => assert_eq!(n, 0),
                }
            }
        }
    }
}
