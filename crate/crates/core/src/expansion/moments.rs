use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::setup::Setup;
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::ncpoly::{dense_trace_key, TraceExpression, TraceKey, Word};
use crate::weingarten::weingarten_table;

/// `E[Tr P₁ ··· Tr P_l]` under independent Haar unitaries of size `n`, as a combination of
/// normalized traces of the deterministic letters with exact coefficients at this `n`.
///
/// Deterministic entries factor out as `N·tr(P_i)`.
pub fn moment_haar(words: &[Word], n: usize) -> Result<TraceExpression> {
    if n == 0 {
        return Err(Error::Precondition("N must be positive".into()));
    }
    let nn = BigRational::from_integer(BigInt::from(n));
    let mut factor = TraceExpression::one();
    let mut random = Vec::new();
    for w in words {
        if w.is_deterministic() {
            factor = factor.mul(
                &TraceExpression::product_of_traces(std::slice::from_ref(w)).scale_rational(&nn),
            );
        } else {
            random.push(w.clone());
        }
    }
    if random.is_empty() {
        return Ok(factor);
    }
    let Some(setup) = Setup::new(&random)? else {
        return Ok(TraceExpression::zero());
    };
    let mut tables = Vec::new();
    for b in &setup.blocks {
        let q = b.plus.len();
        if n < q {
            return Err(Error::Precondition(format!(
                "N = {n} is below the {q} unitary pairs of one color; the Weingarten formula needs N ≥ {q}"
            )));
        }
        tables.push(weingarten_table(q, n)?);
    }
    let terms = crate::par_map(setup.pis(), |choice| {
        let phi = setup.phi(&choice.pi);
        let mut w = num_traits::pow(nn.clone(), crate::perm::dense::num_cycles(&phi));
        for (t, target) in tables.iter().zip(&choice.targets) {
            w *= t.value_dense(target);
        }
        (dense_trace_key(&phi, &setup.ts.m), w)
    });
    let mut acc: HashMap<TraceKey, BigRational> = HashMap::new();
    for (k, w) in terms {
        if !w.is_zero() {
            *acc.entry(k).or_insert_with(BigRational::zero) += w;
        }
    }
    let mut out = TraceExpression::zero();
    for (k, w) in acc {
        out.add_term(k, Coeff::real(w));
    }
    Ok(out.mul(&factor))
}

/// The joint cumulant `W_l = c_l(Tr P₁, .., Tr P_l)` under Haar measure.
pub fn cumulant_haar(words: &[Word], n: usize) -> Result<TraceExpression> {
    super::cumulants_from_moments(words.len(), |idx| {
        let sub: Vec<Word> = idx.iter().map(|&i| words[i].clone()).collect();
        moment_haar(&sub, n)
    })
}

/// `N^{l−2} W_l`, the quantity whose `1/N²` expansion has the genus coefficients as terms.
pub fn renormalized_cumulant(words: &[Word], n: usize) -> Result<TraceExpression> {
    Ok(cumulant_haar(words, n)?.scale_rational(&renormalization(n, words.len())))
}

/// `N^{l−2}` as an exact rational.
pub(crate) fn renormalization(n: usize, l: usize) -> BigRational {
    let nn = BigRational::from_integer(BigInt::from(n));
    if l >= 2 {
        num_traits::pow(nn, l - 2)
    } else {
        BigRational::one() / nn
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
    fn first_hciz_moment() {
        for n in 1..5 {
            let m = moment_haar(&[w("a1 u1 a2 u1^-1")], n).unwrap();
            let want = TraceExpression::product_of_traces(&[w("a1"), w("a2")])
                .scale_rational(&rat(n as i64, 1));
            assert_eq!(m, want);
        }
    }

    #[test]
    fn trace_pairs() {
        assert_eq!(
            moment_haar(&[w("u1"), w("u1^-1")], 3).unwrap(),
            TraceExpression::one()
        );
        assert!(moment_haar(&[w("u1")], 3).unwrap().is_zero());
        // E|Tr U²|² = 2 for N ≥ 2
        assert_eq!(
            moment_haar(&[w("u1 u1"), w("u1^-1 u1^-1")], 2).unwrap(),
            TraceExpression::constant(Coeff::int(2))
        );
        assert_eq!(
            moment_haar(&[w("a1"), w("1")], 3).unwrap(),
            TraceExpression::product_of_traces(&[w("a1")]).scale_rational(&rat(9, 1))
        );
    }

    #[test]
    fn independent_colors_factor() {
        let joint = moment_haar(&[w("a1 u1 a2 u1^-1 a3 u2 a4 u2^-1")], 3).unwrap();
        // E_U2 first: Tr(a1 U1 a2 U1* a3 U2 a4 U2*) → tr(a4) Tr(a1 U1 a2 U1* a3)
        let want = TraceExpression::product_of_traces(&[w("a4"), w("a2"), w("a3 a1")])
            .scale_rational(&rat(3, 1));
        assert_eq!(joint, want);
    }

    #[test]
    fn cumulant_of_trace_pair() {
        let c = cumulant_haar(&[w("u1"), w("u1^-1")], 4).unwrap();
        assert_eq!(c, TraceExpression::one());
        let c = cumulant_haar(&[w("a1"), w("a2 u1 a3 u1^-1")], 4).unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn refuses_small_n() {
        assert!(moment_haar(&[w("u1 u1 u1^-1 u1^-1")], 1).is_err());
        assert!(moment_haar(&[w("u1 u1 u1^-1 u1^-1")], 2).is_ok());
    }

    #[test]
    fn unitary_words_do_not_see_deterministic_letters() {
        for k in 1..=3 {
            let mut s = vec!["u1"; k];
            s.extend(vec!["u1^-1"; k]);
            let m = moment_haar(&[w(&s.join(" "))], 4).unwrap();
            assert!(m.terms().all(|(key, _)| key.is_empty()));
        }
    }
}
