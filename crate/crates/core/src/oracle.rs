//! Monte Carlo estimates of Haar integrals, used to cross-check the exact formulas.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expansion::{empirical_cumulant, MAX_CUMULANT_ORDER};
use crate::ncpoly::{Letter, Word};

pub type CMatrix = DMatrix<Complex64>;

/// ChaCha20 keyed by `seed`, on stream `stream`.
pub fn rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut r = ChaCha20Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Uniform on the open interval `(0, 1)` from the top 53 bits.
fn open_uniform(r: &mut impl RngCore) -> f64 {
    ((r.next_u64() >> 11) as f64 + 0.5) / (1u64 << 53) as f64
}

/// Standard complex Gaussian `(x + iy)/√2` with `x, y` from one Box–Muller draw.
pub fn complex_gaussian(r: &mut impl RngCore) -> Complex64 {
    let u1 = open_uniform(r);
    let u2 = open_uniform(r);
    let rad = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * u2;
    Complex64::new(rad * theta.cos(), rad * theta.sin()) / std::f64::consts::SQRT_2
}

pub fn gaussian_matrix(n: usize, r: &mut impl RngCore) -> CMatrix {
    // column-major fill, so the draw order is fixed by n alone
    DMatrix::from_fn(n, n, |_, _| complex_gaussian(r))
}

/// Haar unitary from the QR decomposition of a Gaussian matrix, with the phases of `R`'s
/// diagonal moved into `Q` so that the factorization is the one with positive `R_ii`.
pub fn haar_unitary(n: usize, r: &mut impl RngCore) -> CMatrix {
    let z = gaussian_matrix(n, r);
    let qr = z.qr();
    let mut q = qr.q();
    let rr = qr.r();
    for j in 0..n {
        let d = rr[(j, j)];
        let norm = d.norm();
        let phase = if norm > 0.0 {
            d / norm
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn sample_haar(n: usize, seed: u64) -> Result<CMatrix> {
    if n == 0 {
        return Err(Error::Precondition("N must be positive".into()));
    }
    Ok(haar_unitary(n, &mut rng(seed, 0)))
}

pub fn operator_norm(m: &CMatrix) -> f64 {
    m.clone()
        .singular_values()
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

/// A Gaussian matrix rescaled to operator norm `scale`.
pub fn random_contraction(n: usize, scale: f64, r: &mut impl RngCore) -> CMatrix {
    let g = gaussian_matrix(n, r);
    let s = operator_norm(&g);
    g * Complex64::new(scale / s, 0.0)
}

/// `diag(a, a, ..)` of size `n`; `n` must be a multiple of the block size.
pub fn block_diagonal(a: &CMatrix, n: usize) -> Result<CMatrix> {
    let b = a.nrows();
    if b == 0 || !n.is_multiple_of(b) {
        return Err(Error::Dimension(format!(
            "{n} is not a multiple of the block size {b}"
        )));
    }
    let mut m = CMatrix::zeros(n, n);
    for k in 0..n / b {
        m.view_mut((k * b, k * b), (b, b)).copy_from(a);
    }
    Ok(m)
}

/// Deterministic matrices `A_j` of a common size.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixTuple {
    pub n: usize,
    pub a: BTreeMap<u32, CMatrix>,
}

impl MatrixTuple {
    pub fn new(n: usize, a: BTreeMap<u32, CMatrix>) -> Result<Self> {
        for (j, m) in &a {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::Dimension(format!(
                    "A{j} is {}x{}, expected {n}x{n}",
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        Ok(Self { n, a })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            a: BTreeMap::new(),
        }
    }

    /// Every `‖A_j‖ ≤ 1`, up to rounding.
    pub fn is_bounded(&self) -> bool {
        self.a.values().all(|m| operator_norm(m) <= 1.0 + 1e-12)
    }

    /// `{"N": 4, "A": {"1": [[[re, im], ..], ..]}}` with rows listed first.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = |msg: &str| Error::Parse {
            pos: 0,
            msg: msg.to_string(),
        };
        let n = v
            .get("N")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| bad("missing integer field N"))? as usize;
        let mut a = BTreeMap::new();
        if let Some(obj) = v.get("A") {
            let obj = obj.as_object().ok_or_else(|| bad("A must be an object"))?;
            for (k, rows) in obj {
                let j: u32 = k
                    .parse()
                    .map_err(|_| bad("matrix keys must be letter indices"))?;
                let rows = rows
                    .as_array()
                    .ok_or_else(|| bad("a matrix must be a list of rows"))?;
                let mut m = CMatrix::zeros(rows.len(), rows.len());
                for (i, row) in rows.iter().enumerate() {
                    let row = row.as_array().ok_or_else(|| bad("a row must be a list"))?;
                    if row.len() != rows.len() {
                        return Err(Error::Dimension(format!("A{j} is not square")));
                    }
                    for (c, e) in row.iter().enumerate() {
                        let pair = e
                            .as_array()
                            .filter(|p| p.len() == 2)
                            .ok_or_else(|| bad("entries are [re, im]"))?;
                        let re = pair[0].as_f64().ok_or_else(|| bad("re must be a number"))?;
                        let im = pair[1].as_f64().ok_or_else(|| bad("im must be a number"))?;
                        m[(i, c)] = Complex64::new(re, im);
                    }
                }
                a.insert(j, m);
            }
        }
        Self::new(n, a)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let a: serde_json::Map<String, serde_json::Value> = self
            .a
            .iter()
            .map(|(j, m)| {
                let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
                    .map(|i| {
                        (0..m.ncols())
                            .map(|c| [m[(i, c)].re, m[(i, c)].im])
                            .collect()
                    })
                    .collect();
                (j.to_string(), serde_json::to_value(rows).unwrap())
            })
            .collect();
        serde_json::json!({ "N": self.n, "A": a })
    }
}

/// The ordered product of the letters of `w`, with `u⁻¹` as the conjugate transpose.
pub fn evaluate_word(w: &Word, u: &BTreeMap<u32, CMatrix>, a: &MatrixTuple) -> Result<CMatrix> {
    let n = a.n;
    let mut m = CMatrix::identity(n, n);
    for &l in w.letters() {
        let x = match l {
            Letter::U(c) | Letter::UInv(c) => u.get(&c),
            Letter::A(j) | Letter::AStar(j) => a.a.get(&j),
        }
        .ok_or_else(|| Error::Precondition(format!("no matrix for letter {l}")))?;
        if x.nrows() != n || x.ncols() != n {
            return Err(Error::Dimension(format!(
                "matrix for {l} is {}x{}, expected {n}x{n}",
                x.nrows(),
                x.ncols()
            )));
        }
        match l {
            Letter::UInv(_) | Letter::AStar(_) => m *= x.adjoint(),
            _ => m *= x,
        }
    }
    Ok(m)
}

/// Estimate with its standard error and, once a target is attached, the distance to it in
/// units of the standard error.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleReport {
    pub estimate: Complex64,
    pub stderr: f64,
    pub samples: usize,
    pub target: Option<Complex64>,
    pub sigma_distance: Option<f64>,
}

#[derive(Serialize)]
struct ReportJson {
    estimate: [f64; 2],
    stderr: f64,
    samples: usize,
    target: Option<[f64; 2]>,
    sigma_distance: Option<f64>,
}

impl SampleReport {
    pub fn with_target(mut self, target: Complex64) -> Self {
        let diff = (self.estimate - target).norm();
        // floor for quantities that do not fluctuate, where the spread is pure rounding
        let floor = 1e-12 * (1.0 + target.norm());
        let d = if diff <= floor {
            0.0
        } else if self.stderr > 0.0 {
            diff / self.stderr.max(floor)
        } else {
            f64::INFINITY
        };
        self.target = Some(target);
        self.sigma_distance = Some(d);
        self
    }

    /// Within `k` standard errors of the target.
    pub fn within(&self, k: f64) -> bool {
        self.sigma_distance.is_some_and(|d| d <= k)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ReportJson {
            estimate: [self.estimate.re, self.estimate.im],
            stderr: self.stderr,
            samples: self.samples,
            target: self.target.map(|t| [t.re, t.im]),
            sigma_distance: self.sigma_distance,
        })
        .unwrap()
    }
}

pub const BATCHES: usize = 16;

/// Per-sample values `(Tr P₁, .., Tr P_l)` under independent Haar unitaries, one per color.
///
/// Batch `b` draws from stream `b` of `seed`, so the output does not depend on the number
/// of threads.
pub fn sample_traces(
    words: &[Word],
    a: &MatrixTuple,
    samples: usize,
    seed: u64,
) -> Result<Vec<Vec<Vec<Complex64>>>> {
    let mut colors: Vec<u32> = words.iter().flat_map(Word::colors).collect();
    colors.sort_unstable();
    colors.dedup();
    let sizes: Vec<usize> = (0..BATCHES)
        .map(|b| samples / BATCHES + usize::from(b < samples % BATCHES))
        .collect();
    let batches = crate::par_map(
        sizes.into_iter().enumerate().collect(),
        |(b, size)| -> Result<Vec<Vec<Complex64>>> {
            let mut r = rng(seed, b as u64);
            let mut out = Vec::with_capacity(size);
            for _ in 0..size {
                let u: BTreeMap<u32, CMatrix> = colors
                    .iter()
                    .map(|&c| (c, haar_unitary(a.n, &mut r)))
                    .collect();
                let mut row = Vec::with_capacity(words.len());
                for w in words {
                    row.push(evaluate_word(w, &u, a)?.trace());
                }
                out.push(row);
            }
            Ok(out)
        },
    );
    batches.into_iter().collect()
}

fn mean_and_stderr(values: &[Complex64]) -> (Complex64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<Complex64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|x| (x - mean).norm_sqr()).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn check_samples(samples: usize) -> Result<()> {
    if samples < BATCHES.max(2) {
        return Err(Error::Precondition(format!(
            "need at least {} samples",
            BATCHES.max(2)
        )));
    }
    Ok(())
}

/// Estimate of `E[Tr P₁ ··· Tr P_l]`, with the standard error of the mean of the product.
pub fn empirical_moment(
    words: &[Word],
    a: &MatrixTuple,
    samples: usize,
    seed: u64,
) -> Result<SampleReport> {
    check_samples(samples)?;
    let rows = sample_traces(words, a, samples, seed)?;
    Ok(moment_report(&rows))
}

pub fn moment_report(rows: &[Vec<Vec<Complex64>>]) -> SampleReport {
    let products: Vec<Complex64> = rows.iter().flatten().map(|r| r.iter().product()).collect();
    let (estimate, stderr) = mean_and_stderr(&products);
    SampleReport {
        estimate,
        stderr,
        samples: products.len(),
        target: None,
        sigma_distance: None,
    }
}

/// Plug-in estimate of `c_l(Tr P₁, .., Tr P_l)`. The standard error is `sd/√n` for `l = 1`
/// and comes from the spread of the per-batch estimates otherwise.
pub fn empirical_joint_cumulant(
    words: &[Word],
    a: &MatrixTuple,
    samples: usize,
    seed: u64,
) -> Result<SampleReport> {
    check_samples(samples)?;
    if words.is_empty() || words.len() > MAX_CUMULANT_ORDER {
        return Err(Error::Precondition(format!(
            "cumulant order must be in 1..={MAX_CUMULANT_ORDER}"
        )));
    }
    let rows = sample_traces(words, a, samples, seed)?;
    Ok(cumulant_report(&rows, words.len()))
}

pub fn cumulant_report(rows: &[Vec<Vec<Complex64>>], l: usize) -> SampleReport {
    let all: Vec<Vec<Complex64>> = rows.iter().flatten().cloned().collect();
    let estimate = empirical_cumulant(&all, l);
    let stderr = if l == 1 {
        let xs: Vec<Complex64> = all.iter().map(|r| r[0]).collect();
        mean_and_stderr(&xs).1
    } else {
        let per_batch: Vec<Complex64> = rows.iter().map(|b| empirical_cumulant(b, l)).collect();
        mean_and_stderr(&per_batch).1
    };
    SampleReport {
        estimate,
        stderr,
        samples: all.len(),
        target: None,
        sigma_distance: None,
    }
}
