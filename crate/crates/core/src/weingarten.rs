//! The unitary Weingarten function at a fixed dimension `N`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ncpoly::{trace_of_permutation, TraceExpression, Word};
use crate::perm::{dense, pi_eps, Permutation, SignVector};
use crate::walks::count_dense;

/// `Wg_N` on `S_q`, one exact value per cycle type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeingartenTable {
    pub q: usize,
    pub n: usize,
    pub values: BTreeMap<Vec<usize>, BigRational>,
}

/// Integer partitions of `q` as non-increasing part lists, in reverse lexicographic order.
pub fn partitions(q: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=rest.min(max)).rev() {
            cur.push(k);
            go(rest - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(q, q, &mut Vec::new(), &mut out);
    out
}

/// A dense permutation with the given cycle type, cycles on consecutive points.
fn representative(shape: &[usize]) -> Vec<usize> {
    let mut p = Vec::new();
    let mut start = 0;
    for &len in shape {
        for k in 0..len {
            p.push(start + (k + 1) % len);
        }
        start += len;
    }
    p
}

impl WeingartenTable {
    /// Solves `Σ_μ A[λ][μ] Wg(μ) = [λ = 1^q]` with `A[λ][μ] = Σ_{π ∈ C_μ} N^{c(σ_λ π⁻¹)}`.
    pub fn build(q: usize, n: usize) -> Result<Self> {
        if n < q {
            return Err(Error::Precondition(format!(
                "Weingarten table needs N ≥ q, got N = {n}, q = {q}"
            )));
        }
        let shapes = partitions(q);
        let index: HashMap<Vec<usize>, usize> = shapes
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        let k = shapes.len();
        let perms = dense::all_permutations(q);
        let classes: Vec<usize> = perms.iter().map(|p| index[&dense::cycle_type(p)]).collect();
        let powers: Vec<BigInt> = (0..=q)
            .map(|c| num_traits::pow(BigInt::from(n), c))
            .collect();
        let mut a = vec![vec![BigInt::zero(); k + 1]; k];
        for (row, shape) in shapes.iter().enumerate() {
            let sigma = representative(shape);
            for (p, &cls) in perms.iter().zip(&classes) {
                let c = dense::num_cycles(&dense::compose(&sigma, &dense::inverse(p)));
                a[row][cls] += &powers[c];
            }
        }
        // right-hand side: the identity class is the last partition
        a[k - 1][k] = BigInt::one();
        let solution = solve_integer_system(a)?;
        let values = shapes.into_iter().zip(solution).collect();
        Ok(Self { q, n, values })
    }

    pub fn value(&self, pi: &Permutation) -> Result<BigRational> {
        if pi.len() != self.q {
            return Err(Error::DomainMismatch(format!(
                "permutation of {} points in a table for S_{}",
                pi.len(),
                self.q
            )));
        }
        Ok(self.values[&pi.cycle_type()].clone())
    }

    pub(crate) fn value_dense(&self, p: &[usize]) -> &BigRational {
        &self.values[&dense::cycle_type(p)]
    }
}

/// Fraction-free elimination on an augmented integer matrix, then rational back-substitution.
fn solve_integer_system(mut a: Vec<Vec<BigInt>>) -> Result<Vec<BigRational>> {
    let k = a.len();
    let mut prev = BigInt::one();
    for col in 0..k {
        let pivot = (col..k)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::Precondition("singular Gram system".into()))?;
        a.swap(col, pivot);
        for r in col + 1..k {
            for c in col + 1..=k {
                let v = &a[col][col] * &a[r][c] - &a[r][col] * &a[col][c];
                a[r][c] = v / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[col][col].clone();
    }
    let mut x = vec![BigRational::zero(); k];
    for r in (0..k).rev() {
        let mut acc = BigRational::from_integer(a[r][k].clone());
        for c in r + 1..k {
            acc -= BigRational::from_integer(a[r][c].clone()) * &x[c];
        }
        x[r] = acc / BigRational::from_integer(a[r][r].clone());
    }
    Ok(x)
}

type TableCache = Mutex<HashMap<(usize, usize), Arc<WeingartenTable>>>;

fn table_cache() -> &'static TableCache {
    static CACHE: OnceLock<TableCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Cached table for `(q, N)`.
pub fn weingarten_table(q: usize, n: usize) -> Result<Arc<WeingartenTable>> {
    if let Some(t) = table_cache().lock().unwrap().get(&(q, n)) {
        return Ok(t.clone());
    }
    let t = Arc::new(WeingartenTable::build(q, n)?);
    table_cache().lock().unwrap().insert((q, n), t.clone());
    Ok(t)
}

/// `Wg_N(π)` exactly; `Wg` on the empty permutation is 1.
pub fn weingarten_exact(pi: &Permutation, n: usize) -> Result<BigRational> {
    weingarten_table(pi.len(), n)?.value(pi)
}

/// `Σ_{r=0}^{R} (−1)^r w^r(Id, π) / N^{r+q}`.
pub fn weingarten_series_partial(pi: &Permutation, n: usize, big_r: usize) -> Result<BigRational> {
    let q = pi.len();
    if n < q {
        return Err(Error::Precondition(format!(
            "series needs N ≥ q, got N = {n}, q = {q}"
        )));
    }
    let dense_pi: Vec<usize> = pi
        .images()
        .iter()
        .map(|y| pi.domain().binary_search(y).unwrap())
        .collect();
    let nn = BigInt::from(n);
    let mut total = BigRational::zero();
    let mut denom = num_traits::pow(nn.clone(), q);
    for r in 0..=big_r {
        let w = BigInt::from(count_dense(&dense_pi, r));
        let term = BigRational::new(if r % 2 == 0 { w } else { -w }, denom.clone());
        total += term;
        denom *= &nn;
    }
    Ok(total)
}

/// The summand of the moment formula for one `π ∈ S^(ε)`:
/// `(Tr_{γπ⁻¹}(M) = N^{c(γπ⁻¹)} tr_{γπ⁻¹}(M), Wg_N(π^(ε)))`.
pub fn moment_weight(
    gamma: &Permutation,
    pi: &Permutation,
    eps: &SignVector,
    m: &[Word],
    n: usize,
) -> Result<(TraceExpression, BigRational)> {
    let pe = pi_eps(pi, eps)?;
    let wg = weingarten_exact(&pe, n)?;
    let phi = gamma.compose(&pi.inverse())?;
    let scale = BigRational::from_integer(num_traits::pow(BigInt::from(n), phi.num_cycles()));
    let trace = trace_of_permutation(&phi, m)?.scale_rational(&scale);
    Ok((trace, wg))
}

/// `|partial(π, N, R) − Wg_N(π)|` as a float, for convergence reports.
pub fn series_error(pi: &Permutation, n: usize, big_r: usize) -> Result<f64> {
    let diff = weingarten_series_partial(pi, n, big_r)? - weingarten_exact(pi, n)?;
    Ok(crate::coeff::rat_to_f64(&diff.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;
    use crate::perm::range;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse_on_range(s, n).unwrap()
    }

    #[test]
    fn partitions_of_small_numbers() {
        assert_eq!(partitions(0), vec![Vec::<usize>::new()]);
        assert_eq!(partitions(3), vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
        let counts: Vec<usize> = (0..=8).map(|q| partitions(q).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
    }

    #[test]
    fn exact_values() {
        for n in 1..=9 {
            assert_eq!(
                weingarten_exact(&Permutation::id(1), n).unwrap(),
                rat(1, n as i64)
            );
        }
        for n in 2..=9i64 {
            assert_eq!(
                weingarten_exact(&Permutation::id(2), n as usize).unwrap(),
                rat(1, n * n - 1)
            );
            assert_eq!(
                weingarten_exact(&p("(1 2)", 2), n as usize).unwrap(),
                rat(-1, n * (n * n - 1))
            );
        }
        assert_eq!(weingarten_exact(&Permutation::id(0), 3).unwrap(), rat(1, 1));
        assert!(weingarten_exact(&Permutation::id(3), 2).is_err());
    }

    #[test]
    fn q3_closed_forms() {
        // known rational functions of N on S_3
        for n in 3..=8i64 {
            let d = n * (n * n - 1) * (n * n - 4);
            let n = n as usize;
            let nn = n as i64;
            assert_eq!(
                weingarten_exact(&Permutation::id(3), n).unwrap(),
                rat(nn * nn - 2, d)
            );
            assert_eq!(
                weingarten_exact(&p("(1 2)", 3), n).unwrap(),
                rat(-1, (nn * nn - 1) * (nn * nn - 4))
            );
            assert_eq!(weingarten_exact(&p("(1 2 3)", 3), n).unwrap(), rat(2, d));
        }
    }

    #[test]
    fn orthogonality() {
        for q in 1..=4 {
            for n in q..=q + 3 {
                let t = weingarten_table(q, n).unwrap();
                let perms = dense::all_permutations(q);
                for sigma in &perms {
                    let mut s = BigRational::zero();
                    for pi in &perms {
                        let c = dense::num_cycles(&dense::compose(sigma, &dense::inverse(pi)));
                        s += t.value_dense(pi)
                            * BigRational::from_integer(num_traits::pow(BigInt::from(n), c));
                    }
                    let expected = if dense::num_cycles(sigma) == q { 1 } else { 0 };
                    assert_eq!(s, rat(expected, 1), "q={q} n={n} sigma={sigma:?}");
                }
            }
        }
    }

    #[test]
    fn series_examples() {
        for big_r in 0..6 {
            assert_eq!(
                weingarten_series_partial(&Permutation::id(1), 4, big_r).unwrap(),
                rat(1, 4)
            );
        }
        for k in 0..4u32 {
            let n = 3i64;
            let mut expected = BigRational::zero();
            for j in 0..=k {
                expected += rat(1, n.pow(2 + 2 * j));
            }
            let got =
                weingarten_series_partial(&Permutation::id(2), 3, 2 * k as usize + 1).unwrap();
            assert_eq!(got, expected);
        }
        assert_eq!(
            weingarten_series_partial(&p("(1 2)", 2), 5, 1).unwrap(),
            rat(-1, 125)
        );
    }

    #[test]
    fn series_converges() {
        for q in 1..=3 {
            for pi in dense::all_permutations(q) {
                let perm =
                    Permutation::from_images(range(q), pi.iter().map(|&x| x as u32 + 1).collect())
                        .unwrap();
                let err = series_error(&perm, 2 * q, 40).unwrap();
                assert!(err < 1e-10, "q={q} pi={perm} err={err}");
            }
        }
    }

    #[test]
    fn moment_weight_examples() {
        let gamma = p("(1 2)", 2);
        let pi = p("(1 2)", 2);
        let eps = SignVector::parse("+-").unwrap();
        let m = [Word::parse("a1").unwrap(), Word::parse("a2").unwrap()];
        let (t, wg) = moment_weight(&gamma, &pi, &eps, &m, 5).unwrap();
        assert_eq!(
            t,
            TraceExpression::product_of_traces(&m).scale_rational(&rat(25, 1))
        );
        assert_eq!(wg, rat(1, 5));

        let empty = [Word::empty(), Word::empty()];
        let (t, wg) = moment_weight(&Permutation::id(2), &pi, &eps, &empty, 4).unwrap();
        assert_eq!(t, TraceExpression::constant(crate::coeff::Coeff::int(4)));
        assert_eq!(wg, rat(1, 4));

        let bad = SignVector::parse("++").unwrap();
        assert!(moment_weight(&gamma, &pi, &bad, &m, 4).is_err());
    }
}
