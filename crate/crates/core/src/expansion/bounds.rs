use num_rational::BigRational;
use serde::Serialize;

use super::formal::multi_factorial;
use super::genus::GenusCache;
use crate::coeff::{rat_to_f64, Coeff};
use crate::error::{Error, Result};
use crate::ncpoly::{TraceExpression, Word};

/// `A_k = C_k = √6 π^{1/4} 2^{k+3}`, `B_k = 3·4^{k+1}`, `D_{k,ν} = 4k(4e^{1/e})^ν`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundConstants {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl BoundConstants {
    pub fn new(k: usize, nu: usize) -> Self {
        let a = 6f64.sqrt() * std::f64::consts::PI.powf(0.25) * 2f64.powi(k as i32 + 3);
        let b = 3.0 * 4f64.powi(k as i32 + 1);
        let d = 4.0
            * k as f64
            * (4.0 * std::f64::consts::E.powf(1.0 / std::f64::consts::E)).powi(nu as i32);
        Self { a, b, c: a, d }
    }

    /// `R_V = min(½(4A_k D)⁻¹, 1/(2kν(4A_k + 2^{k+2}/B_k)^ν))`, a radius in `‖z‖_∞` inside
    /// which the formal cumulants converge. Not claimed to be sharp.
    pub fn radius(k: usize, nu: usize) -> f64 {
        let c = Self::new(k, nu);
        let first = 0.5 / (4.0 * c.a * c.d);
        let base = 4.0 * c.a + 2f64.powi(k as i32 + 2) / c.b;
        let second = 1.0 / (2.0 * k as f64 * nu as f64 * base.powi(nu as i32));
        first.min(second)
    }
}

pub fn catalan(n: usize) -> f64 {
    // c_{n+1} = c_n · 2(2n+1)/(n+2)
    (0..n).fold(1.0, |c, i| c * 2.0 * (2 * i + 1) as f64 / (i + 2) as f64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundCheck {
    /// `Σ |coefficients| / n!` of `M^(g)(q_n, P)`.
    pub lhs: BigRational,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Serialize)]
struct BoundJson {
    lhs: String,
    lhs_approx: f64,
    rhs: f64,
    holds: bool,
}

impl BoundCheck {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(BoundJson {
            lhs: self.lhs.to_string(),
            lhs_approx: rat_to_f64(&self.lhs),
            rhs: self.rhs,
            holds: self.holds,
        })
        .unwrap()
    }
}

/// Compares `|M^(g)_{|n|+l}(q_n, P)| / n!` with
/// `A^{l(m+ν|n|)} B^{−l} C^{g(m+ν|n|)} D^{|n|} ∏ c_{deg P_i} ∏ c_{n_j}`, `m = deg P`.
///
/// The left side is the sum of absolute coefficients, an upper bound for the value at any
/// matrices of norm at most one.
pub fn bounds_check(
    g: u32,
    words: &[Word],
    qs: &[Word],
    n: &[usize],
    cache: &GenusCache,
) -> Result<BoundCheck> {
    if qs.len() != n.len() || qs.is_empty() {
        return Err(Error::Precondition(
            "need one multiplicity per q and at least one q".into(),
        ));
    }
    let k = qs.len();
    let nu = qs.iter().map(Word::degree).max().unwrap();
    let mut all = Vec::new();
    for (q, &c) in qs.iter().zip(n) {
        all.extend(std::iter::repeat_n(q.clone(), c));
    }
    all.extend_from_slice(words);
    let value = cache.get(g, &all)?;
    let lhs = value.abs_coefficient_sum() / BigRational::from_integer(multi_factorial(n));
    let consts = BoundConstants::new(k, nu);
    let l = words.len() as i32;
    let m: usize = words.iter().map(Word::degree).sum();
    let size = (m + nu * n.iter().sum::<usize>()) as i32;
    let mut rhs = consts.a.powi(l * size) * consts.b.powi(-l) * consts.c.powi(g as i32 * size);
    rhs *= consts.d.powi(n.iter().sum::<usize>() as i32);
    rhs *= words.iter().map(|w| catalan(w.degree())).product::<f64>();
    rhs *= n.iter().map(|&x| catalan(x)).product::<f64>();
    let holds = rat_to_f64(&lhs) <= rhs;
    Ok(BoundCheck { lhs, rhs, holds })
}

/// Value of a trace expression when every normalized trace is replaced by 1.
pub fn unit_trace_value(t: &TraceExpression) -> Coeff {
    t.terms().fold(Coeff::zero(), |acc, (_, c)| &acc + c)
}

/// `|M^(0)_1(P)| ≤ 1` after replacing every trace by 1, with `|·|` the `|re|+|im|` surrogate.
pub fn planar_unit_trace_bound(word: &Word, cache: &GenusCache) -> Result<(Coeff, bool)> {
    let v = unit_trace_value(&cache.get(0, std::slice::from_ref(word))?);
    let ok = v.abs_surrogate() <= BigRational::from_integer(1.into());
    Ok((v, ok))
}
