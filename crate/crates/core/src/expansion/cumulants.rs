use std::collections::HashMap;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ncpoly::TraceExpression;

/// The ring operations the moment–cumulant recursion needs.
pub trait CumulantValue: Clone {
    fn zero() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn from_int(n: i64) -> Self;
}

impl CumulantValue for TraceExpression {
    fn zero() -> Self {
        TraceExpression::zero()
    }
    fn add(&self, other: &Self) -> Self {
        TraceExpression::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        TraceExpression::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        TraceExpression::mul(self, other)
    }
    fn from_int(n: i64) -> Self {
        TraceExpression::constant(crate::coeff::Coeff::int(n))
    }
}

macro_rules! numeric_cumulant_value {
    ($t:ty, $from:expr) => {
        impl CumulantValue for $t {
            fn zero() -> Self {
                <$t as Zero>::zero()
            }
            fn add(&self, other: &Self) -> Self {
                self.clone() + other.clone()
            }
            fn sub(&self, other: &Self) -> Self {
                self.clone() - other.clone()
            }
            fn mul(&self, other: &Self) -> Self {
                self.clone() * other.clone()
            }
            fn from_int(n: i64) -> Self {
                $from(n)
            }
        }
    };
}

numeric_cumulant_value!(f64, |n: i64| n as f64);
numeric_cumulant_value!(Complex64, |n: i64| Complex64::new(n as f64, 0.0));
numeric_cumulant_value!(BigRational, |n: i64| BigRational::from_integer(n.into()));

/// All set partitions of `{0, .., n-1}` as restricted-growth strings, in lexicographic order.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let top = if cur.is_empty() { 0 } else { max + 1 };
        for b in 0..=top {
            cur.push(b);
            go(n, cur, max.max(b), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::with_capacity(n), 0, &mut out);
    out
}

/// Blocks of a restricted-growth string as index lists.
pub fn blocks_of(rgs: &[usize]) -> Vec<Vec<usize>> {
    let k = rgs.iter().copied().max().map_or(0, |m| m + 1);
    let mut blocks = vec![Vec::new(); k];
    for (i, &b) in rgs.iter().enumerate() {
        blocks[b].push(i);
    }
    blocks
}

pub const MAX_CUMULANT_ORDER: usize = 8;

/// `c_l(X₁, .., X_l)` from the recursion `c(S) = m(S) − Σ_{|Π| ≥ 2} ∏_{B∈Π} c(B)`.
///
/// `moment` receives a sorted list of indices into the tuple and returns the joint moment of
/// those entries; each subset is requested once.
pub fn cumulants_from_moments<T, F>(l: usize, mut moment: F) -> Result<T>
where
    T: CumulantValue,
    F: FnMut(&[usize]) -> Result<T>,
{
    if l > MAX_CUMULANT_ORDER {
        return Err(Error::Precondition(format!(
            "cumulants of order {l} > {MAX_CUMULANT_ORDER} are not supported"
        )));
    }
    if l == 0 {
        return Ok(T::zero());
    }
    let mut moments: HashMap<u32, T> = HashMap::new();
    let mut cumulants: HashMap<u32, T> = HashMap::new();
    for mask in 1u32..(1 << l) {
        let idx: Vec<usize> = (0..l).filter(|&i| mask >> i & 1 == 1).collect();
        moments.insert(mask, moment(&idx)?);
    }
    // increasing popcount guarantees every proper sub-block is done
    let mut masks: Vec<u32> = (1u32..(1 << l)).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    for mask in masks {
        let idx: Vec<usize> = (0..l).filter(|&i| mask >> i & 1 == 1).collect();
        let mut c = moments[&mask].clone();
        for rgs in set_partitions(idx.len()).into_iter().skip(1) {
            let mut prod: Option<T> = None;
            for block in blocks_of(&rgs) {
                let bm = block.iter().fold(0u32, |acc, &k| acc | 1 << idx[k]);
                let cb = &cumulants[&bm];
                prod = Some(match prod {
                    None => cb.clone(),
                    Some(p) => p.mul(cb),
                });
            }
            c = c.sub(&prod.unwrap());
        }
        cumulants.insert(mask, c);
    }
    Ok(cumulants.remove(&((1u32 << l) - 1)).unwrap())
}

/// `Σ_Π μ(Π, 1̂) ∏ m(B)`, the closed form of the recursion, with `μ(Π, 1̂) = (−1)^{k−1}(k−1)!`.
pub fn cumulant_closed_form<T, F>(l: usize, mut moment: F) -> Result<T>
where
    T: CumulantValue,
    F: FnMut(&[usize]) -> Result<T>,
{
    let mut total = T::zero();
    for rgs in set_partitions(l) {
        let blocks = blocks_of(&rgs);
        let k = blocks.len() as i64;
        let mobius: i64 = (1..k).product::<i64>() * if k % 2 == 1 { 1 } else { -1 };
        let mut prod = T::from_int(mobius);
        for b in &blocks {
            prod = prod.mul(&moment(b)?);
        }
        total = total.add(&prod);
    }
    Ok(total)
}

/// Numeric helper: plug-in cumulant from per-sample values, shared across subsets.
pub fn empirical_cumulant(samples: &[Vec<Complex64>], l: usize) -> Complex64 {
    let count = samples.len() as f64;
    cumulants_from_moments::<Complex64, _>(l, |idx| {
        let mut s = Complex64::new(0.0, 0.0);
        for x in samples {
            s += idx.iter().fold(Complex64::one(), |acc, &i| acc * x[i]);
        }
        Ok(s / count)
    })
    .unwrap()
}
