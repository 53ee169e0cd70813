use num_bigint::BigInt;
use num_traits::Zero;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::ncpoly::{trace_of_permutation, Letter, TraceExpression, Word};
use crate::perm::{dense, range, Permutation};
use crate::walks::monotone_hurwitz_by_genus;

/// `B₁ u C₁ u⁻¹ ··· B_k u C_k u⁻¹` read off a word whose unitary letters alternate
/// between `u_color` and its inverse, after rotating it to end in `u⁻¹`.
fn alternated_parts(w: &Word, color: u32) -> Option<(Vec<Word>, Vec<Word>)> {
    let letters = w.letters();
    let end = letters.iter().position(|&x| x == Letter::UInv(color))?;
    let rotated = w.rotate(end + 1);
    let (mut b, mut c) = (Vec::new(), Vec::new());
    let mut cur = Vec::new();
    let mut expect_plus = true;
    for &x in rotated.letters() {
        match x {
            Letter::U(k) if k == color && expect_plus => {
                b.push(Word(std::mem::take(&mut cur)));
                expect_plus = false;
            }
            Letter::UInv(k) if k == color && !expect_plus => {
                c.push(Word(std::mem::take(&mut cur)));
                expect_plus = true;
            }
            Letter::U(_) | Letter::UInv(_) => return None,
            _ => cur.push(x),
        }
    }
    Some((b, c))
}

fn perm(images: &[usize]) -> Permutation {
    let n = images.len();
    Permutation::from_images(range(n), images.iter().map(|&x| x as u32 + 1).collect()).unwrap()
}

/// `M^(g)_l(P)` for alternated monomials through monotone triple Hurwitz numbers:
///
/// `(−1)^{m+l} Σ_{ρ,σ ∈ S_m} (−1)^{c(ρ)+c(σ)} tr_ρ(B) tr_σ(C) h_g(ρ⁻¹, γ̃, σ⁻¹)`
///
/// where `m` counts the pairs `u ·· u⁻¹`, `B` and `C` list the blocks in front of each `u`
/// and each `u⁻¹`, and `γ̃` sends a pair to the next pair of the same word.
pub fn hurwitz_reduction(g: u32, words: &[Word]) -> Result<TraceExpression> {
    let color = words
        .iter()
        .flat_map(|w| w.letters().iter().filter_map(|x| x.color()))
        .next()
        .ok_or_else(|| Error::Precondition("no unitary letter in the tuple".into()))?;
    let (mut b, mut c, mut blocks) = (Vec::new(), Vec::new(), Vec::new());
    for w in words {
        let (bw, cw) = alternated_parts(w, color)
            .ok_or_else(|| Error::Precondition(format!("{w} is not alternated in u{color}")))?;
        blocks.push(bw.len());
        b.extend(bw);
        c.extend(cw);
    }
    let m = b.len();
    let l = words.len();
    let gamma_t = crate::ncpoly::gamma_from_blocks(&blocks);
    let all = dense::all_permutations(m);
    let rhos: Vec<(Permutation, TraceExpression)> = all
        .iter()
        .map(|p| {
            let p = perm(p);
            let t = trace_of_permutation(&p, &b).unwrap();
            (p, t)
        })
        .collect();
    let terms = crate::par_map(all.clone(), |s| -> Result<TraceExpression> {
        let sigma = perm(&s);
        let tc = trace_of_permutation(&sigma, &c)?;
        let sigma_inv = sigma.inverse();
        let mut out = TraceExpression::zero();
        for (rho, tb) in &rhos {
            let h = monotone_hurwitz_by_genus(&rho.inverse(), &gamma_t, &sigma_inv, g as i64)?;
            if h.is_zero() {
                continue;
            }
            let parity = m + l + rho.num_cycles() + sigma.num_cycles();
            let mut k = BigInt::from(h);
            if parity % 2 == 1 {
                k = -k;
            }
            out.add_assign(&tb.mul(&tc).scale(&Coeff::real(k.into())));
        }
        Ok(out)
    });
    let mut total = TraceExpression::zero();
    for t in terms {
        total.add_assign(&t?);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::genus_coefficient;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn single_pair() {
        let v = hurwitz_reduction(0, &[w("a1 u1 a2 u1^-1")]).unwrap();
        assert_eq!(v, TraceExpression::product_of_traces(&[w("a1"), w("a2")]));
    }

    #[test]
    fn agrees_with_genus_coefficient() {
        let cases: &[&[&str]] = &[
            &["a1 u1 a2 u1^-1 a3 u1 a4 u1^-1"],
            &["a2 u1^-1 a3 u1 a4 u1^-1 a1 u1"],
            &["a1 u1 a2 u1^-1", "a3 u1 a4 u1^-1"],
            &["u1 a1 u1^-1 a2 u1 u1^-1", "a3 u1 a4 u1^-1"],
        ];
        for tuple in cases {
            let ws: Vec<Word> = tuple.iter().map(|s| w(s)).collect();
            for g in 0..=1 {
                assert_eq!(
                    hurwitz_reduction(g, &ws).unwrap(),
                    genus_coefficient(g, &ws).unwrap().value,
                    "{tuple:?} g={g}"
                );
            }
        }
    }

    #[test]
    fn three_pairs() {
        for l in 1..=2 {
            for t in crate::expansion::alternated_tuples(3, l, true) {
                for g in 0..=1 {
                    assert_eq!(
                        hurwitz_reduction(g, &t).unwrap(),
                        genus_coefficient(g, &t).unwrap().value
                    );
                }
            }
        }
    }

    #[test]
    fn rejects_non_alternated() {
        assert!(hurwitz_reduction(0, &[w("a1 u1 u1 a2 u1^-1 u1^-1")]).is_err());
        assert!(hurwitz_reduction(0, &[w("a1 u1 a2 u2^-1")]).is_err());
        assert!(hurwitz_reduction(0, &[w("a1 a2")]).is_err());
    }
}
