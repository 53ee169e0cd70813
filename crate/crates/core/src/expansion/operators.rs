use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;

use super::genus::GenusCache;
use super::tutte::IdentityCheck;
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::ncpoly::{
    cyclic_derivative, nc_derivative, reduced_laplacian, Letter, NCPolynomial, TensorPolynomial,
    TraceExpression, Word,
};

/// Representative of `w` modulo rotation and `u u⁻¹ = u⁻¹ u = 1`: free reduction of the
/// unitary letters, then cyclic reduction, then the least rotation.
pub fn group_normal_form(w: &Word) -> Word {
    let mut stack: Vec<Letter> = Vec::with_capacity(w.len());
    for &x in w.letters() {
        match stack.last() {
            Some(&y) if x.is_unitary() && y == x.adjoint() => {
                stack.pop();
            }
            _ => stack.push(x),
        }
    }
    let (mut lo, mut hi) = (0, stack.len());
    while hi - lo >= 2 && stack[lo].is_unitary() && stack[hi - 1] == stack[lo].adjoint() {
        lo += 1;
        hi -= 1;
    }
    Word(stack[lo..hi].to_vec()).canonical_rotation()
}

fn reduce_tensor(t: &TensorPolynomial) -> TensorPolynomial {
    let mut out = TensorPolynomial::zero();
    for ((a, b), c) in t.terms() {
        out.add_term(c.clone(), group_normal_form(a), group_normal_form(b));
    }
    out
}

/// `∂_i D_i P` and `deg⁺_i(P) P⊗1 + deg⁻_i(P) 1⊗P + Δ_i P` as elements of `A ⊗ A`.
pub fn gradient_trick_sides(p: &Word, color: u32) -> (TensorPolynomial, TensorPolynomial) {
    let lhs = nc_derivative(
        &cyclic_derivative(&NCPolynomial::monomial(p.clone()), color),
        color,
    );
    let mut rhs = reduced_laplacian(p, color);
    rhs.add_term(
        Coeff::int(p.degree_plus(color) as i64),
        p.clone(),
        Word::empty(),
    );
    rhs.add_term(
        Coeff::int(p.degree_minus(color) as i64),
        Word::empty(),
        p.clone(),
    );
    (lhs, rhs)
}

/// The two sides agree under every bilinear form that is tracial in each slot and respects
/// `u u⁻¹ = 1`, which is the same as agreeing after [`group_normal_form`] on both factors.
pub fn gradient_trick_universal(p: &Word, color: u32) -> bool {
    let (lhs, rhs) = gradient_trick_sides(p, color);
    reduce_tensor(&lhs) == reduce_tensor(&rhs)
}

/// `μ₂(X ⊗ Y) = M^(0)_2(P₁, X) τ(Y) + τ(X) M^(0)_2(P₁, Y)` with `τ = M^(0)_1`.
fn mu2(p1: &Word, t: &TensorPolynomial, cache: &GenusCache) -> Result<TraceExpression> {
    let mut out = TraceExpression::zero();
    for ((x, y), c) in t.terms() {
        let mut v = cache
            .get(0, &[p1.clone(), x.clone()])?
            .mul(&cache.get(0, std::slice::from_ref(y))?);
        v.add_assign(
            &cache
                .get(0, std::slice::from_ref(x))?
                .mul(&cache.get(0, &[p1.clone(), y.clone()])?),
        );
        out.add_assign(&v.scale(c));
    }
    Ok(out)
}

/// The gradient-trick identity under the form built from the planar coefficients.
pub fn gradient_trick_with_cumulants(
    p1: &Word,
    p: &Word,
    color: u32,
    cache: &GenusCache,
) -> Result<IdentityCheck> {
    let (lhs, rhs) = gradient_trick_sides(p, color);
    Ok(IdentityCheck::new(
        mu2(p1, &lhs, cache)?,
        mu2(p1, &rhs, cache)?,
    ))
}

fn colors_of(words: &[&Word]) -> Vec<u32> {
    let mut c: Vec<u32> = words.iter().flat_map(|w| w.colors()).collect();
    c.sort_unstable();
    c.dedup();
    c
}

/// Planar two-point relation with the master operator at zero potential:
///
/// `M^(0)_2(P₁ ⊗ P₂) + M^(0)_2(P₁ ⊗ Π T̄_τ P₂) = −M^(0)_1(Σ_i (D_i P₁)(D_i P₂)) / deg P₂`
///
/// with `τ = M^(0)_1` and `T_τ = (Id ⊗ τ + τ ⊗ Id) Δ`.
pub fn master_operator_check(p1: &Word, p2: &Word, cache: &GenusCache) -> Result<IdentityCheck> {
    let d = p2.degree();
    if d == 0 {
        return Err(Error::Precondition(format!(
            "{p2} has degree 0, the operator D⁻¹ is undefined on it"
        )));
    }
    let inv = BigRational::new(1.into(), (d as i64).into());
    let mut lhs = cache.get(0, &[p1.clone(), p2.clone()])?;
    let mut rhs_poly = NCPolynomial::zero();
    for c in colors_of(&[p1, p2]) {
        let lap = reduced_laplacian(p2, c);
        lhs.add_assign(&mu2(p1, &lap, cache)?.scale_rational(&inv));
        let a = cyclic_derivative(&NCPolynomial::monomial(p1.clone()), c);
        let b = cyclic_derivative(&NCPolynomial::monomial(p2.clone()), c);
        rhs_poly = rhs_poly.add(&a.mul(&b));
    }
    let mut rhs = TraceExpression::zero();
    for (w, c) in rhs_poly.terms() {
        rhs.add_assign(&cache.get(0, std::slice::from_ref(w))?.scale(c));
    }
    Ok(IdentityCheck::new(lhs, rhs.neg().scale_rational(&inv)))
}

/// A numeric polynomial with complex coefficients.
pub type NumericPolynomial = BTreeMap<Word, Complex64>;

pub fn numeric_xi_norm(p: &NumericPolynomial, xi: f64) -> f64 {
    p.iter()
        .map(|(w, c)| c.norm() * xi.powi(w.degree() as i32))
        .sum()
}

/// `T̄_τ P = Σ_i (Id ⊗ τ + τ ⊗ Id) Δ_i P / deg P` on each monomial of positive degree.
pub fn regularized_t(p: &NumericPolynomial, tau: &dyn Fn(&Word) -> Complex64) -> NumericPolynomial {
    let mut out = NumericPolynomial::new();
    for (w, &c) in p {
        let d = w.degree();
        if d == 0 {
            continue;
        }
        let scale = c / d as f64;
        for color in w.colors() {
            for ((x, y), k) in reduced_laplacian(w, color).terms() {
                let k = k.to_complex() * scale;
                *out.entry(x.clone()).or_default() += k * tau(y);
                *out.entry(y.clone()).or_default() += k * tau(x);
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormSample {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `‖T̄_τ P‖_{ξ₂} ≤ 2‖τ‖_{ξ₁} ξ₁/(ξ₂ − ξ₁) ‖P‖_{ξ₂}` on each sample. `tau_norm` is
/// `sup_w |τ(w)| ξ₁^{−deg w}`, which is 1 for a unital functional bounded by 1 on monomials.
pub fn operator_norm_bound_check(
    tau: &dyn Fn(&Word) -> Complex64,
    tau_norm: f64,
    xi1: f64,
    xi2: f64,
    samples: &[NumericPolynomial],
) -> Result<Vec<NormSample>> {
    if !(1.0 <= xi1 && xi1 < xi2) {
        return Err(Error::Precondition(format!(
            "need 1 ≤ ξ₁ < ξ₂, got ξ₁ = {xi1}, ξ₂ = {xi2}"
        )));
    }
    let factor = 2.0 * tau_norm * xi1 / (xi2 - xi1);
    Ok(samples
        .iter()
        .map(|p| {
            let lhs = numeric_xi_norm(&regularized_t(p, tau), xi2);
            let rhs = factor * numeric_xi_norm(p, xi2);
            // relative slack for rounding in the two sums
            NormSample {
                lhs,
                rhs,
                holds: lhs <= rhs * (1.0 + 1e-12),
            }
        })
        .collect())
}
