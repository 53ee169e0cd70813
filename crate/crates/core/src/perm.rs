//! Permutations on finite sets of positive integer labels.
//!
//! Label sets are arbitrary (stored sorted), so restricting to a subset such
//! as `{1, .., 2m-1} \ {j}` keeps the original labels.

use std::fmt;

use crate::error::{Error, Result};

/// A bijection of a finite label set onto itself.
///
/// Composition follows the functional convention: `a.compose(&b)` maps `x` to `a(b(x))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    domain: Vec<u32>,
    images: Vec<u32>,
}

fn check_domain(domain: &[u32]) -> Result<()> {
    if domain.contains(&0) {
        return Err(Error::InvalidPermutation("labels must be positive".into()));
    }
    if domain.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidPermutation(
            "domain must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// The label set `{1, .., n}`.
pub fn range(n: usize) -> Vec<u32> {
    (1..=n as u32).collect()
}

impl Permutation {
    pub fn identity(domain: Vec<u32>) -> Result<Self> {
        check_domain(&domain)?;
        Ok(Self {
            images: domain.clone(),
            domain,
        })
    }

    /// Identity on `{1, .., n}`.
    pub fn id(n: usize) -> Self {
        let d = range(n);
        Self {
            images: d.clone(),
            domain: d,
        }
    }

    /// Builds from one-line notation: `images[k]` is the image of `domain[k]`.
    pub fn from_images(domain: Vec<u32>, images: Vec<u32>) -> Result<Self> {
        check_domain(&domain)?;
        if images.len() != domain.len() {
            return Err(Error::InvalidPermutation(
                "image count differs from domain".into(),
            ));
        }
        let mut seen = vec![false; domain.len()];
        for &y in &images {
            match domain.binary_search(&y) {
                Ok(k) if !seen[k] => seen[k] = true,
                Ok(_) => return Err(Error::InvalidPermutation(format!("{y} is hit twice"))),
                Err(_) => {
                    return Err(Error::InvalidPermutation(format!(
                        "{y} is outside the domain"
                    )))
                }
            }
        }
        Ok(Self { domain, images })
    }

    pub fn from_cycles(domain: Vec<u32>, cycles: &[Vec<u32>]) -> Result<Self> {
        check_domain(&domain)?;
        let mut images = domain.clone();
        let mut seen = vec![false; domain.len()];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                let pos = domain
                    .binary_search(&x)
                    .map_err(|_| Error::InvalidPermutation(format!("{x} is outside the domain")))?;
                if seen[pos] {
                    return Err(Error::InvalidPermutation(format!("{x} appears twice")));
                }
                seen[pos] = true;
                images[pos] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Self { domain, images })
    }

    /// Parses cycle notation such as `"(1 3 4 6)(2 5)"` (commas also accepted).
    /// `"()"` or the empty string is the identity.
    pub fn parse(text: &str, domain: Vec<u32>) -> Result<Self> {
        let cycles = parse_cycles(text)?;
        Self::from_cycles(domain, &cycles)
    }

    /// Parses cycle notation on the smallest range `{1, .., n}` containing every label.
    pub fn parse_on_range(text: &str, n: usize) -> Result<Self> {
        Self::parse(text, range(n))
    }

    pub fn transposition(domain: Vec<u32>, a: u32, b: u32) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidPermutation(
                "transposition needs distinct labels".into(),
            ));
        }
        Self::from_cycles(domain, &[vec![a, b]])
    }

    pub fn domain(&self) -> &[u32] {
        &self.domain
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    pub fn get(&self, x: u32) -> Option<u32> {
        self.domain.binary_search(&x).ok().map(|k| self.images[k])
    }

    /// Image of `x`. Panics when `x` is outside the domain.
    pub fn apply(&self, x: u32) -> u32 {
        self.get(x)
            .unwrap_or_else(|| panic!("label {x} outside permutation domain"))
    }

    pub fn is_identity(&self) -> bool {
        self.domain == self.images
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.len()];
        for (k, &y) in self.images.iter().enumerate() {
            let pos = self.domain.binary_search(&y).unwrap();
            images[pos] = self.domain[k];
        }
        Self {
            domain: self.domain.clone(),
            images,
        }
    }

    fn same_domain(&self, other: &Self) -> Result<()> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch(format!(
                "{:?} vs {:?}",
                self.domain, other.domain
            )));
        }
        Ok(())
    }

    /// `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.same_domain(other)?;
        let images = other.images.iter().map(|&y| self.apply(y)).collect();
        Ok(Self {
            domain: self.domain.clone(),
            images,
        })
    }

    /// Equality that refuses to compare permutations on different domains.
    pub fn try_eq(&self, other: &Self) -> Result<bool> {
        self.same_domain(other)?;
        Ok(self.images == other.images)
    }

    /// Cycles, each starting at its minimum, sorted by minimum. Fixed points included.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                cycle.push(self.domain[k]);
                k = self.domain.binary_search(&self.images[k]).unwrap();
            }
            out.push(cycle);
        }
        out
    }

    /// c(σ): number of cycles including fixed points.
    pub fn num_cycles(&self) -> usize {
        let mut seen = vec![false; self.len()];
        let mut count = 0;
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                k = self.domain.binary_search(&self.images[k]).unwrap();
            }
        }
        count
    }

    /// Cycle lengths in non-increasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    /// `g⁻¹ σ g`.
    pub fn conjugate(&self, g: &Self) -> Result<Self> {
        g.inverse().compose(&self.compose(g)?)
    }

    /// Restriction to an invariant subset.
    pub fn restrict(&self, subset: &[u32]) -> Result<Self> {
        let mut b = subset.to_vec();
        b.sort_unstable();
        b.dedup();
        let mut images = Vec::with_capacity(b.len());
        for &x in &b {
            let y = self
                .get(x)
                .ok_or_else(|| Error::DomainMismatch(format!("{x} not in domain")))?;
            if b.binary_search(&y).is_err() {
                return Err(Error::Precondition(format!(
                    "subset is not invariant: {x} maps to {y}"
                )));
            }
            images.push(y);
        }
        Ok(Self { domain: b, images })
    }

    /// First-return map `Tr(σ; B)(x) = σ^p(x)` with `p ≥ 1` minimal such that `σ^p(x) ∈ B`.
    pub fn trace_restrict(&self, subset: &[u32]) -> Result<Self> {
        let mut b = subset.to_vec();
        b.sort_unstable();
        b.dedup();
        if b.is_empty() {
            return Err(Error::Precondition("trace onto an empty set".into()));
        }
        let mut images = Vec::with_capacity(b.len());
        for &x in &b {
            if self.get(x).is_none() {
                return Err(Error::DomainMismatch(format!("{x} not in domain")));
            }
            let mut y = self.apply(x);
            while b.binary_search(&y).is_err() {
                y = self.apply(y);
            }
            images.push(y);
        }
        Ok(Self { domain: b, images })
    }

    /// Same cycle structure on a new label set, matched in increasing order.
    pub fn relabel_onto(&self, new_domain: &[u32]) -> Result<Self> {
        if new_domain.len() != self.len() {
            return Err(Error::DomainMismatch(
                "relabel target has wrong size".into(),
            ));
        }
        let images = self
            .images
            .iter()
            .map(|y| new_domain[self.domain.binary_search(y).unwrap()])
            .collect();
        Self::from_images(new_domain.to_vec(), images)
    }

    /// Power `σ^k` for `k ≥ 0`.
    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self {
            domain: self.domain.clone(),
            images: self.domain.clone(),
        };
        for _ in 0..k {
            out = self.compose(&out).unwrap();
        }
        out
    }
}

pub(crate) fn parse_cycles(text: &str) -> Result<Vec<Vec<u32>>> {
    let mut cycles = Vec::new();
    let mut current: Option<Vec<u32>> = None;
    let mut number = String::new();
    let mut number_start = 0;
    let flush = |number: &mut String, current: &mut Option<Vec<u32>>, pos: usize| -> Result<()> {
        if number.is_empty() {
            return Ok(());
        }
        let value: u32 = number.parse().map_err(|_| Error::Parse {
            pos,
            msg: format!("bad label {number:?}"),
        })?;
        match current {
            Some(c) => c.push(value),
            None => {
                return Err(Error::Parse {
                    pos,
                    msg: "label outside parentheses".into(),
                })
            }
        }
        number.clear();
        Ok(())
    };
    for (pos, ch) in text.char_indices() {
        match ch {
            '0'..='9' => {
                if number.is_empty() {
                    number_start = pos;
                }
                number.push(ch);
            }
            '(' => {
                flush(&mut number, &mut current, number_start)?;
                if current.is_some() {
                    return Err(Error::Parse {
                        pos,
                        msg: "nested '('".into(),
                    });
                }
                current = Some(Vec::new());
            }
            ')' => {
                flush(&mut number, &mut current, number_start)?;
                match current.take() {
                    Some(c) if !c.is_empty() => cycles.push(c),
                    Some(_) => {}
                    None => {
                        return Err(Error::Parse {
                            pos,
                            msg: "unmatched ')'".into(),
                        })
                    }
                }
            }
            ' ' | ',' | '\t' => flush(&mut number, &mut current, number_start)?,
            _ => {
                return Err(Error::Parse {
                    pos,
                    msg: format!("unexpected character {ch:?}"),
                })
            }
        }
    }
    if number.is_empty() && current.is_none() {
        Ok(cycles)
    } else {
        Err(Error::Parse {
            pos: text.len(),
            msg: "unterminated cycle".into(),
        })
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation without fixed points; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(u32::to_string).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {:?}", self, self.domain)
    }
}

/// Signs `ε: I → {+1, -1}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SignVector {
    domain: Vec<u32>,
    signs: Vec<i8>,
}

impl SignVector {
    pub fn new(domain: Vec<u32>, signs: Vec<i8>) -> Result<Self> {
        check_domain(&domain)?;
        if domain.len() != signs.len() {
            return Err(Error::DomainMismatch(
                "sign count differs from domain".into(),
            ));
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Precondition("signs must be +1 or -1".into()));
        }
        Ok(Self { domain, signs })
    }

    /// Signs on `{1, .., n}`.
    pub fn on_range(signs: Vec<i8>) -> Result<Self> {
        Self::new(range(signs.len()), signs)
    }

    /// Parses a string of `+` and `-` characters on `{1, .., n}`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut signs = Vec::new();
        for (pos, ch) in text.chars().enumerate() {
            match ch {
                '+' => signs.push(1),
                '-' => signs.push(-1),
                _ => {
                    return Err(Error::Parse {
                        pos,
                        msg: format!("expected '+' or '-', found {ch:?}"),
                    })
                }
            }
        }
        Self::on_range(signs)
    }

    pub fn domain(&self) -> &[u32] {
        &self.domain
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn sign(&self, x: u32) -> Option<i8> {
        self.domain.binary_search(&x).ok().map(|k| self.signs[k])
    }

    pub fn plus_set(&self) -> Vec<u32> {
        self.select(1)
    }

    pub fn minus_set(&self) -> Vec<u32> {
        self.select(-1)
    }

    fn select(&self, s: i8) -> Vec<u32> {
        self.domain
            .iter()
            .zip(&self.signs)
            .filter(|(_, &e)| e == s)
            .map(|(&x, _)| x)
            .collect()
    }

    pub fn is_balanced(&self) -> bool {
        self.signs.iter().map(|&s| s as i64).sum::<i64>() == 0
    }

    pub fn restrict(&self, subset: &[u32]) -> Result<Self> {
        let mut signs = Vec::with_capacity(subset.len());
        for &x in subset {
            signs.push(
                self.sign(x)
                    .ok_or_else(|| Error::DomainMismatch(format!("{x} not in domain")))?,
            );
        }
        Self::new(subset.to_vec(), signs)
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.signs {
            write!(f, "{}", if s > 0 { '+' } else { '-' })?;
        }
        Ok(())
    }
}

/// True iff `π(ε⁻¹(+1)) = ε⁻¹(-1)`.
pub fn is_sign_compatible(pi: &Permutation, eps: &SignVector) -> Result<bool> {
    if pi.domain() != eps.domain() {
        return Err(Error::DomainMismatch(
            "permutation and signs differ in domain".into(),
        ));
    }
    Ok(pi
        .domain()
        .iter()
        .zip(eps.signs())
        .all(|(&x, &s)| s < 0 || eps.sign(pi.apply(x)) == Some(-1))
        && eps.is_balanced())
}

/// `π^(ε) = π² restricted to ε⁻¹(+1)`.
pub fn pi_eps(pi: &Permutation, eps: &SignVector) -> Result<Permutation> {
    if !is_sign_compatible(pi, eps)? {
        return Err(Error::Precondition(format!(
            "{pi} is not sign-compatible with {eps}"
        )));
    }
    let plus = eps.plus_set();
    let images = plus.iter().map(|&x| pi.apply(pi.apply(x))).collect();
    Permutation::from_images(plus, images)
}

/// A transposition stored with `a < b`; its value is `b`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Transposition {
    pub a: u32,
    pub b: u32,
}

impl Transposition {
    pub fn new(i: u32, j: u32) -> Result<Self> {
        if i == j {
            return Err(Error::Precondition(
                "transposition needs distinct labels".into(),
            ));
        }
        Ok(Self {
            a: i.min(j),
            b: i.max(j),
        })
    }

    pub fn value(&self) -> u32 {
        self.b
    }

    pub fn swap(&self, x: u32) -> u32 {
        if x == self.a {
            self.b
        } else if x == self.b {
            self.a
        } else {
            x
        }
    }

    pub fn to_permutation(&self, domain: Vec<u32>) -> Result<Permutation> {
        Permutation::transposition(domain, self.a, self.b)
    }
}

impl fmt::Display for Transposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {})", self.a, self.b)
    }
}

/// Dense helpers on `{0, .., n-1}` used by the enumeration loops.
pub(crate) mod dense {
    pub fn inverse(p: &[usize]) -> Vec<usize> {
        let mut inv = vec![0; p.len()];
        for (i, &y) in p.iter().enumerate() {
            inv[y] = i;
        }
        inv
    }

    /// `(a ∘ b)(x) = a(b(x))`.
    pub fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
        b.iter().map(|&y| a[y]).collect()
    }

    pub fn num_cycles(p: &[usize]) -> usize {
        let mut seen = vec![false; p.len()];
        let mut count = 0;
        for s in 0..p.len() {
            if !seen[s] {
                count += 1;
                let mut k = s;
                while !seen[k] {
                    seen[k] = true;
                    k = p[k];
                }
            }
        }
        count
    }

    pub fn cycles(p: &[usize]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; p.len()];
        let mut out = Vec::new();
        for s in 0..p.len() {
            if !seen[s] {
                let mut c = Vec::new();
                let mut k = s;
                while !seen[k] {
                    seen[k] = true;
                    c.push(k);
                    k = p[k];
                }
                out.push(c);
            }
        }
        out
    }

    /// Cycle lengths in non-increasing order.
    pub fn cycle_type(p: &[usize]) -> Vec<usize> {
        let mut t: Vec<usize> = cycles(p).iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    /// All permutations of `{0, .., n-1}` in lexicographic one-line order.
    pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(cur.clone());
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }
}
