use crate::ncpoly::{Letter, Word};

/// Sequences of unitary letters with `pairs[c]` copies of both `u_{c+1}` and `u_{c+1}⁻¹`.
pub fn balanced_skeletons(pairs: &[usize]) -> Vec<Vec<Letter>> {
    fn go(left: &mut Vec<[usize; 2]>, cur: &mut Vec<Letter>, out: &mut Vec<Vec<Letter>>) {
        if left.iter().all(|x| x[0] == 0 && x[1] == 0) {
            out.push(cur.clone());
            return;
        }
        for c in 0..left.len() {
            for s in 0..2 {
                if left[c][s] == 0 {
                    continue;
                }
                left[c][s] -= 1;
                let color = c as u32 + 1;
                cur.push(if s == 0 {
                    Letter::U(color)
                } else {
                    Letter::UInv(color)
                });
                go(left, cur, out);
                cur.pop();
                left[c][s] += 1;
            }
        }
    }
    let mut left: Vec<[usize; 2]> = pairs.iter().map(|&p| [p, p]).collect();
    let mut out = Vec::new();
    go(&mut left, &mut Vec::new(), &mut out);
    out
}

/// Cuts `seq` into `1..=max_l` consecutive nonempty words. With `generic`, a fresh
/// deterministic letter `a_k` is put in front of every unitary letter, so that every
/// tuple with the same skeleton is a specialization of the generic one.
pub fn split_tuples(seq: &[Letter], max_l: usize, generic: bool) -> Vec<Vec<Word>> {
    let n = seq.len();
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    // cut sets are subsets of the n−1 interior gaps
    for mask in 0u32..1 << (n - 1) {
        if mask.count_ones() as usize + 1 > max_l {
            continue;
        }
        let mut words = Vec::new();
        let mut cur = Vec::new();
        for (i, &x) in seq.iter().enumerate() {
            if generic {
                cur.push(Letter::A(i as u32 + 1));
            }
            cur.push(x);
            if i + 1 == n || mask >> i & 1 == 1 {
                words.push(Word(std::mem::take(&mut cur)));
            }
        }
        out.push(words);
    }
    out
}

/// Tuples of total unitary degree `≤ max_degree` with at most `max_l` entries and at most
/// `max_colors` colors, each paired with a color of unitary degree at least 4. Both the bare
/// skeleton and the version with generic deterministic letters are produced.
pub fn relation_grid(max_degree: usize, max_l: usize, max_colors: usize) -> Vec<(Vec<Word>, u32)> {
    let mut out = Vec::new();
    let mut pair_lists: Vec<Vec<usize>> = Vec::new();
    for k in 1..=max_colors {
        for total in k..=max_degree / 2 {
            for c in crate::maps::compositions(total - k, k) {
                pair_lists.push(c.iter().map(|x| x + 1).collect());
            }
        }
    }
    for pairs in pair_lists {
        let colors: Vec<u32> = (0..pairs.len())
            .filter(|&c| pairs[c] >= 2)
            .map(|c| c as u32 + 1)
            .collect();
        if colors.is_empty() {
            continue;
        }
        for seq in balanced_skeletons(&pairs) {
            for generic in [false, true] {
                for t in split_tuples(&seq, max_l, generic) {
                    for &c in &colors {
                        out.push((t.clone(), c));
                    }
                }
            }
        }
    }
    out
}

/// Tuples of alternated monomials `B₁uC₁u⁻¹ ··· ` with `m` pairs in total split into `l`
/// words, with fresh blocks `a_k` (generic) or empty blocks.
pub fn alternated_tuples(m: usize, l: usize, generic: bool) -> Vec<Vec<Word>> {
    let mut out = Vec::new();
    for parts in crate::maps::compositions(m - l, l) {
        let mut next = 1u32;
        let mut words = Vec::new();
        for p in parts {
            let mut v = Vec::new();
            for _ in 0..p + 1 {
                for x in [Letter::U(1), Letter::UInv(1)] {
                    if generic {
                        v.push(Letter::A(next));
                        next += 1;
                    }
                    v.push(x);
                }
            }
            words.push(Word(v));
        }
        out.push(words);
    }
    out
}
