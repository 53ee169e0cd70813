use super::genus::GenusCache;
use crate::error::Result;
use crate::ncpoly::{Letter, Word};

/// Outcome of the structural identities of `M^(g)` on one tuple.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructuralReport {
    /// `M(.., P_l Q) = M(.., Q P_l)` for every rotation of every entry.
    pub traciality: bool,
    /// Invariance under permuting the entries.
    pub symmetry: bool,
    /// `M(.., u* P_l u) = M(.., P_l)` and the same with `u` and `u*` exchanged.
    pub conjugation_by_u: bool,
    /// `M(P*) = conj M(P)`.
    pub adjoint: bool,
}

impl StructuralReport {
    pub fn all(&self) -> bool {
        self.traciality && self.symmetry && self.conjugation_by_u && self.adjoint
    }
}

pub fn structural_checks(g: u32, words: &[Word], cache: &GenusCache) -> Result<StructuralReport> {
    let base = cache.get(g, words)?;
    let mut report = StructuralReport::default();

    let mut ok = true;
    for (i, w) in words.iter().enumerate() {
        for k in 1..w.len() {
            let mut t = words.to_vec();
            t[i] = w.rotate(k);
            ok &= cache.get(g, &t)? == base;
        }
    }
    report.traciality = ok;

    let mut ok = true;
    let l = words.len();
    if l >= 2 {
        let mut t = words.to_vec();
        t.reverse();
        ok &= cache.get(g, &t)? == base;
        let mut t = words.to_vec();
        t.rotate_left(1);
        ok &= cache.get(g, &t)? == base;
        let mut t = words.to_vec();
        t.swap(0, 1);
        ok &= cache.get(g, &t)? == base;
    }
    report.symmetry = ok;

    let mut ok = true;
    let mut colors: Vec<u32> = words.iter().flat_map(Word::colors).collect();
    colors.sort_unstable();
    colors.dedup();
    if colors.is_empty() {
        colors.push(1);
    }
    for &c in &colors {
        for (left, right) in [
            (Letter::UInv(c), Letter::U(c)),
            (Letter::U(c), Letter::UInv(c)),
        ] {
            let mut t = words.to_vec();
            let last = t.pop().unwrap();
            let mut v = vec![left];
            v.extend_from_slice(last.letters());
            v.push(right);
            t.push(Word(v));
            ok &= cache.get(g, &t)? == base;
        }
    }
    report.conjugation_by_u = ok;

    let adj: Vec<Word> = words.iter().map(Word::adjoint).collect();
    report.adjoint = cache.get(g, &adj)? == base.conj();
    Ok(report)
}
