//! Weakly monotone transposition walks, transitivity, and monotone Hurwitz numbers.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::perm::{dense, Permutation, Transposition};

/// Transpositions `(τ₁, .., τ_r)` with `val(τ₁) ≤ .. ≤ val(τ_r)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct MonotoneWalk {
    steps: Vec<Transposition>,
}

impl MonotoneWalk {
    pub fn new(steps: Vec<Transposition>) -> Result<Self> {
        if steps.windows(2).any(|w| w[0].value() > w[1].value()) {
            let values: Vec<u32> = steps.iter().map(Transposition::value).collect();
            return Err(Error::Precondition(format!(
                "walk values {values:?} are not nondecreasing"
            )));
        }
        Ok(Self { steps })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn steps(&self) -> &[Transposition] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn values(&self) -> Vec<u32> {
        self.steps.iter().map(Transposition::value).collect()
    }

    /// `τ_r ··· τ₁` as a permutation of `domain`.
    pub fn product(&self, domain: &[u32]) -> Result<Permutation> {
        let mut images = domain.to_vec();
        for t in &self.steps {
            if domain.binary_search(&t.a).is_err() || domain.binary_search(&t.b).is_err() {
                return Err(Error::DomainMismatch(format!(
                    "step {t} leaves the label set"
                )));
            }
            for y in images.iter_mut() {
                *y = t.swap(*y);
            }
        }
        Permutation::from_images(domain.to_vec(), images)
    }

    /// Drops the last step.
    pub fn without_last(&self) -> Self {
        Self {
            steps: self.steps[..self.steps.len().saturating_sub(1)].to_vec(),
        }
    }
}

fn dense_of(p: &Permutation) -> Vec<usize> {
    let d = p.domain();
    p.images()
        .iter()
        .map(|y| d.binary_search(y).unwrap())
        .collect()
}

fn distance(a: &[usize], b: &[usize]) -> usize {
    // minimal number of transpositions turning b into a
    a.len() - dense::num_cycles(&dense::compose(a, &dense::inverse(b)))
}

fn reachable(target: &[usize], current: &[usize], remaining: usize) -> bool {
    let d = distance(target, current);
    d <= remaining && (remaining - d).is_multiple_of(2)
}

fn dense_enumerate(target: &[usize], r: usize) -> Vec<Vec<(usize, usize)>> {
    fn go(
        target: &[usize],
        r: usize,
        current: &mut Vec<usize>,
        steps: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        let remaining = r - steps.len();
        if !reachable(target, current, remaining) {
            return;
        }
        if remaining == 0 {
            out.push(steps.clone());
            return;
        }
        let n = target.len();
        let vmin = steps.last().map_or(1, |s| s.1);
        for a in 0..n {
            for b in (a + 1).max(vmin)..n {
                for y in current.iter_mut() {
                    *y = swap(*y, a, b);
                }
                steps.push((a, b));
                go(target, r, current, steps, out);
                steps.pop();
                for y in current.iter_mut() {
                    *y = swap(*y, a, b);
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..target.len()).collect();
    go(target, r, &mut current, &mut Vec::new(), &mut out);
    out
}

#[inline]
fn swap(y: usize, a: usize, b: usize) -> usize {
    if y == a {
        b
    } else if y == b {
        a
    } else {
        y
    }
}

/// All monotone walks of length `r` on `domain(target)` with product `target`,
/// in lexicographic order of the step sequence.
pub fn enumerate_monotone_walks(target: &Permutation, r: usize) -> Vec<MonotoneWalk> {
    let labels = target.domain();
    dense_enumerate(&dense_of(target), r)
        .into_iter()
        .map(|steps| MonotoneWalk {
            steps: steps
                .into_iter()
                .map(|(a, b)| Transposition {
                    a: labels[a],
                    b: labels[b],
                })
                .collect(),
        })
        .collect()
}

type CountKey = (Vec<u8>, u16, u8);

thread_local! {
    static COUNT_MEMO: RefCell<HashMap<CountKey, BigUint>> = RefCell::new(HashMap::new());
}

/// Walks of length `r`, all values `≤ vmax`, with product `sigma`.
fn dense_count(
    sigma: &[usize],
    r: usize,
    vmax: usize,
    memo: &mut HashMap<CountKey, BigUint>,
) -> BigUint {
    let id: Vec<usize> = (0..sigma.len()).collect();
    if !reachable(sigma, &id, r) || sigma.iter().enumerate().any(|(x, &y)| x != y && x > vmax) {
        return BigUint::zero();
    }
    if r == 0 {
        return BigUint::one();
    }
    let key = (
        sigma.iter().map(|&x| x as u8).collect(),
        r as u16,
        vmax as u8,
    );
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let mut total = BigUint::zero();
    for b in 1..=vmax {
        for a in 0..b {
            // τ_r ··· τ₁ = σ  ⇒  τ_{r-1} ··· τ₁ = τ_r σ
            let prev: Vec<usize> = sigma.iter().map(|&y| swap(y, a, b)).collect();
            total += dense_count(&prev, r - 1, b, memo);
        }
    }
    memo.insert(key, total.clone());
    total
}

pub(crate) fn count_dense(target: &[usize], r: usize) -> BigUint {
    if target.len() <= 1 {
        return if r == 0 {
            BigUint::one()
        } else {
            BigUint::zero()
        };
    }
    COUNT_MEMO.with(|m| dense_count(target, r, target.len() - 1, &mut m.borrow_mut()))
}

/// `w^r(Id, target)`: the number of monotone walks of length `r` with product `target`.
pub fn count_monotone_walks(target: &Permutation, r: usize) -> BigUint {
    count_dense(&dense_of(target), r)
}

/// Union-find over `{0, .., n-1}`.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    blocks: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            blocks: n,
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
            self.blocks -= 1;
        }
    }

    pub fn union_perm(&mut self, p: &[usize]) {
        for (x, &y) in p.iter().enumerate() {
            self.union(x, y);
        }
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    /// Block index of every element, numbered by first occurrence.
    pub fn labels(&mut self) -> Vec<u8> {
        let mut seen: HashMap<usize, u8> = HashMap::new();
        (0..self.parent.len())
            .map(|x| {
                let r = self.find(x);
                let next = seen.len() as u8;
                *seen.entry(r).or_insert(next)
            })
            .collect()
    }
}

/// True iff the group generated by `generators` acts transitively on `labels`.
pub fn is_transitive(generators: &[Permutation], labels: &[u32]) -> Result<bool> {
    if labels.is_empty() {
        return Err(Error::Precondition("empty label set".into()));
    }
    let mut uf = UnionFind::new(labels.len());
    for g in generators {
        if g.domain() != labels {
            return Err(Error::DomainMismatch(
                "generator on a different label set".into(),
            ));
        }
        uf.union_perm(&dense_of(g));
    }
    Ok(uf.blocks() == 1)
}

/// One color's share of a walk count: monotone walks on `positions` (dense ids of the
/// ambient set, increasing) with product `target` (dense on `0..positions.len()`).
#[derive(Clone, Debug)]
pub(crate) struct WalkPart {
    pub positions: Vec<usize>,
    pub target: Vec<usize>,
    pub r: usize,
}

/// Counts tuples of walks (one per part) whose transpositions, together with the
/// starting partition, connect the ambient set.
pub(crate) fn count_connected(parts: &[WalkPart], start: &mut UnionFind) -> BigUint {
    type Key = (u8, Vec<u8>, u8, u8, Vec<u8>);
    struct Ctx<'a> {
        parts: &'a [WalkPart],
        memo: HashMap<Key, BigUint>,
    }
    fn go(
        ctx: &mut Ctx,
        c: usize,
        p: Vec<usize>,
        k: usize,
        vmin: usize,
        labels: Vec<u8>,
    ) -> BigUint {
        if c == ctx.parts.len() {
            return if labels.iter().all(|&b| b == 0) {
                BigUint::one()
            } else {
                BigUint::zero()
            };
        }
        let part = &ctx.parts[c];
        if !reachable(&part.target, &p, part.r - k) {
            return BigUint::zero();
        }
        if k == part.r {
            let next = ctx.parts.get(c + 1).map_or(0, |q| q.target.len());
            return go(ctx, c + 1, (0..next).collect(), 0, 1, labels);
        }
        let key = (
            c as u8,
            p.iter().map(|&x| x as u8).collect(),
            k as u8,
            vmin as u8,
            labels.clone(),
        );
        if let Some(v) = ctx.memo.get(&key) {
            return v.clone();
        }
        let n = part.target.len();
        let mut total = BigUint::zero();
        for b in vmin.max(1)..n {
            for a in 0..b {
                let q: Vec<usize> = p.iter().map(|&y| swap(y, a, b)).collect();
                let (x, y) = (part.positions[a], part.positions[b]);
                let merged = if labels[x] == labels[y] {
                    labels.clone()
                } else {
                    let (lo, hi) = (labels[x].min(labels[y]), labels[x].max(labels[y]));
                    relabel(&labels, lo, hi)
                };
                total += go(ctx, c, q, k + 1, b, merged);
            }
        }
        ctx.memo.insert(key, total.clone());
        total
    }
    fn relabel(labels: &[u8], keep: u8, drop: u8) -> Vec<u8> {
        let mapped: Vec<u8> = labels
            .iter()
            .map(|&l| if l == drop { keep } else { l })
            .collect();
        let mut seen: Vec<u8> = Vec::new();
        mapped
            .iter()
            .map(|&l| match seen.iter().position(|&s| s == l) {
                Some(k) => k as u8,
                None => {
                    seen.push(l);
                    (seen.len() - 1) as u8
                }
            })
            .collect()
    }
    let mut ctx = Ctx {
        parts,
        memo: HashMap::new(),
    };
    let first = parts.first().map_or(0, |q| q.target.len());
    go(&mut ctx, 0, (0..first).collect(), 0, 1, start.labels())
}

/// `h^r(ρ, γ, σ)`: monotone walks with `τ_r ··· τ₁ = ργσ` such that
/// `⟨γ, ρ, σ, τ₁, .., τ_r⟩` is transitive.
pub fn monotone_triple_hurwitz(
    rho: &Permutation,
    gamma: &Permutation,
    sigma: &Permutation,
    r: usize,
) -> Result<BigUint> {
    let target = rho.compose(&gamma.compose(sigma)?)?;
    let n = target.len();
    if n == 0 {
        return Err(Error::Precondition("empty label set".into()));
    }
    let mut uf = UnionFind::new(n);
    for g in [rho, gamma, sigma] {
        uf.union_perm(&dense_of(g));
    }
    let t = dense_of(&target);
    if uf.blocks() == 1 {
        return Ok(count_dense(&t, r));
    }
    let part = WalkPart {
        positions: (0..n).collect(),
        target: t,
        r,
    };
    Ok(count_connected(&[part], &mut uf))
}

/// `h_g(ρ, γ, σ)` with `r = c(γ) + c(ρ) + c(σ) − m − 2 + 2g`; zero when `r < 0`.
pub fn monotone_hurwitz_by_genus(
    rho: &Permutation,
    gamma: &Permutation,
    sigma: &Permutation,
    g: i64,
) -> Result<BigUint> {
    let r = hurwitz_length(rho, gamma, sigma, g);
    if r < 0 {
        return Ok(BigUint::zero());
    }
    monotone_triple_hurwitz(rho, gamma, sigma, r as usize)
}

/// The walk length forced by the genus: `c(γ) + c(ρ) + c(σ) − m − 2 + 2g`.
pub fn hurwitz_length(rho: &Permutation, gamma: &Permutation, sigma: &Permutation, g: i64) -> i64 {
    (gamma.num_cycles() + rho.num_cycles() + sigma.num_cycles()) as i64 - rho.len() as i64 - 2
        + 2 * g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::range;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse_on_range(s, n).unwrap()
    }

    fn brute_force(target: &Permutation, r: usize) -> Vec<MonotoneWalk> {
        let n = target.len() as u32;
        let all: Vec<Transposition> = (1..=n)
            .flat_map(|b| (1..b).map(move |a| Transposition { a, b }))
            .collect();
        if all.is_empty() {
            return if r == 0 {
                vec![MonotoneWalk::empty()]
            } else {
                vec![]
            };
        }
        let mut out = Vec::new();
        let mut idx = vec![0usize; r];
        loop {
            let steps: Vec<Transposition> = idx.iter().map(|&k| all[k]).collect();
            if let Ok(w) = MonotoneWalk::new(steps) {
                if w.product(target.domain()).unwrap() == *target {
                    out.push(w);
                }
            }
            let mut k = 0;
            loop {
                if k == r {
                    out.sort();
                    return out;
                }
                idx[k] += 1;
                if idx[k] < all.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    #[test]
    fn enumeration_examples() {
        let w = enumerate_monotone_walks(&Permutation::id(1), 0);
        assert_eq!(w, vec![MonotoneWalk::empty()]);
        let w = enumerate_monotone_walks(&p("(1 2)", 2), 1);
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].steps(), &[Transposition { a: 1, b: 2 }]);
        let w = enumerate_monotone_walks(&Permutation::id(3), 2);
        let pairs: Vec<(u32, u32)> = w.iter().map(|w| (w.steps()[0].a, w.steps()[0].b)).collect();
        assert_eq!(pairs, vec![(1, 2), (1, 3), (2, 3)]);
        assert!(w.iter().all(|w| w.steps()[0] == w.steps()[1]));
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for n in 1..=4 {
            for t in dense::all_permutations(n) {
                let target =
                    Permutation::from_images(range(n), t.iter().map(|&x| x as u32 + 1).collect())
                        .unwrap();
                for r in 0..=4 {
                    let got = enumerate_monotone_walks(&target, r);
                    assert_eq!(got, brute_force(&target, r), "{target:?} r={r}");
                    assert_eq!(count_monotone_walks(&target, r), BigUint::from(got.len()));
                }
            }
        }
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_monotone_walks(&Permutation::id(1), 0), BigUint::one());
        for r in 0..12 {
            let expected = if r % 2 == 0 { 1u32 } else { 0 };
            assert_eq!(
                count_monotone_walks(&Permutation::id(2), r),
                expected.into()
            );
        }
        assert_eq!(count_monotone_walks(&Permutation::id(3), 2), 3u32.into());
    }

    #[test]
    fn walks_on_arbitrary_labels() {
        let t = Permutation::parse("(2 7)", vec![2, 5, 7]).unwrap();
        let w = enumerate_monotone_walks(&t, 1);
        assert_eq!(w[0].steps(), &[Transposition { a: 2, b: 7 }]);
        assert_eq!(w[0].product(&[2, 5, 7]).unwrap(), t);
    }

    #[test]
    fn non_monotone_walk_is_rejected() {
        let steps = vec![
            Transposition::new(2, 6).unwrap(),
            Transposition::new(1, 2).unwrap(),
        ];
        assert!(MonotoneWalk::new(steps).is_err());
    }

    #[test]
    fn transitivity_examples() {
        assert!(is_transitive(&[p("(1 2)", 3), p("(2 3)", 3)], &range(3)).unwrap());
        assert!(!is_transitive(&[p("(1 2)", 3)], &range(3)).unwrap());
        assert!(is_transitive(&[], &range(1)).unwrap());
        assert!(is_transitive(&[], &[]).is_err());
    }

    #[test]
    fn hurwitz_examples() {
        let id2 = Permutation::id(2);
        let c = p("(1 2)", 2);
        assert_eq!(
            monotone_triple_hurwitz(&c, &c, &id2, 0).unwrap(),
            BigUint::one()
        );
        assert_eq!(
            monotone_triple_hurwitz(&id2, &id2, &id2, 0).unwrap(),
            BigUint::zero()
        );
        assert_eq!(
            monotone_triple_hurwitz(&id2, &id2, &id2, 2).unwrap(),
            BigUint::one()
        );
        let id1 = Permutation::id(1);
        assert_eq!(
            monotone_hurwitz_by_genus(&id1, &id1, &id1, 0).unwrap(),
            BigUint::one()
        );
        assert_eq!(
            monotone_hurwitz_by_genus(&id2, &id2, &id2, 0).unwrap(),
            BigUint::one()
        );
        // c = 1 + 1 + 1 − 2 − 2 < 0
        assert_eq!(
            monotone_hurwitz_by_genus(&c, &c, &c, 0).unwrap(),
            BigUint::zero()
        );
    }

    #[test]
    fn connected_count_matches_filtered_enumeration() {
        for n in 2..=4 {
            for g in dense::all_permutations(n) {
                let gamma =
                    Permutation::from_images(range(n), g.iter().map(|&x| x as u32 + 1).collect())
                        .unwrap();
                let id = Permutation::id(n);
                for r in 0..=4 {
                    let target = gamma.clone();
                    let filtered = enumerate_monotone_walks(&target, r)
                        .into_iter()
                        .filter(|w| {
                            let mut gens = vec![gamma.clone()];
                            for t in w.steps() {
                                gens.push(t.to_permutation(range(n)).unwrap());
                            }
                            is_transitive(&gens, &range(n)).unwrap()
                        })
                        .count();
                    let got = monotone_triple_hurwitz(&id, &gamma, &id, r).unwrap();
                    assert_eq!(got, BigUint::from(filtered), "{gamma:?} r={r}");
                }
            }
        }
    }
}
