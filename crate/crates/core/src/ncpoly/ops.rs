use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{NCPolynomial, TensorPolynomial};
use super::word::{Letter, Word};
use crate::coeff::Coeff;
use crate::error::{Error, Result};

/// `∂_i P = Σ_{P=Q u R} Qu ⊗ R − Σ_{P=Q u⁻¹ R} Q ⊗ u⁻¹R`.
pub fn nc_derivative(p: &NCPolynomial, color: u32) -> TensorPolynomial {
    let mut out = TensorPolynomial::zero();
    for (w, c) in p.terms() {
        for (k, &l) in w.0.iter().enumerate() {
            if l == Letter::U(color) {
                out.add_term(c.clone(), w.slice(0, k + 1), w.slice(k + 1, w.len()));
            } else if l == Letter::UInv(color) {
                out.add_term(-c, w.slice(0, k), w.slice(k, w.len()));
            }
        }
    }
    out
}

/// `D_i P = Σ_{P=Q u R} R Q u − Σ_{P=Q u⁻¹ R} u⁻¹ R Q`.
pub fn cyclic_derivative(p: &NCPolynomial, color: u32) -> NCPolynomial {
    let mut out = NCPolynomial::zero();
    for (w, c) in p.terms() {
        for (k, &l) in w.0.iter().enumerate() {
            if l == Letter::U(color) {
                out.add_term(c.clone(), w.rotate(k + 1));
            } else if l == Letter::UInv(color) {
                out.add_term(-c, w.rotate(k));
            }
        }
    }
    out
}

/// The reduced Laplacian `Δ_i P`, implemented term by term from its four-sum definition.
pub fn reduced_laplacian(p: &Word, color: u32) -> TensorPolynomial {
    let u = Letter::U(color);
    let uinv = Letter::UInv(color);
    let uw = Word(vec![u]);
    let uinvw = Word(vec![uinv]);
    let mut out = TensorPolynomial::zero();
    for (k, &l) in p.0.iter().enumerate() {
        let outer = if l == u {
            1
        } else if l == uinv {
            -1
        } else {
            continue;
        };
        // P = P₁ x P₂  ⇒  P₂P₁
        let p1 = p.slice(0, k);
        let p2 = p.slice(k + 1, p.len());
        let cyc = p2.concat(&p1);
        for (j, &m) in cyc.0.iter().enumerate() {
            let q1 = cyc.slice(0, j);
            let q2 = cyc.slice(j + 1, cyc.len());
            match (outer, m == u, m == uinv) {
                (1, true, _) => out.add_term(Coeff::one(), q1.concat(&uw), q2.concat(&uw)),
                (1, _, true) => out.add_term(Coeff::int(-1), q1, q2),
                (-1, true, _) => out.add_term(Coeff::int(-1), q1, q2),
                (-1, _, true) => out.add_term(Coeff::one(), uinvw.concat(&q1), uinvw.concat(&q2)),
                _ => {}
            }
        }
    }
    out
}

/// The number operator `D P = deg_i(P)·P` on monomials, extended linearly.
pub fn degree_operator(p: &NCPolynomial, color: u32) -> NCPolynomial {
    let mut out = NCPolynomial::zero();
    for (w, c) in p.terms() {
        out.add_term(c * &Coeff::int(w.degree_in(color) as i64), w.clone());
    }
    out
}

/// `‖P‖_ξ = Σ |c_w| ξ^{deg w}` with `|c|` replaced by `|re| + |im|`.
pub fn xi_norm(p: &NCPolynomial, xi: &BigRational) -> Result<BigRational> {
    if xi < &BigRational::one() {
        return Err(Error::Precondition("ξ must be at least 1".into()));
    }
    let mut total = BigRational::zero();
    for (w, c) in p.terms() {
        total += c.abs_surrogate() * num_traits::pow(xi.clone(), w.degree());
    }
    Ok(total)
}
