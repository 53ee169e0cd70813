use crate::error::Result;
use crate::ncpoly::{tuple_structure, TupleStructure, Word};
use crate::perm::dense;

/// The `+` and `−` labels (0-based) of one color.
#[derive(Clone, Debug)]
pub(crate) struct ColorBlock {
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
}

/// A sign-compatible `π` in dense form together with `π_c^(ε)` for each color,
/// indexed inside that color's `+` labels.
pub(crate) struct PiChoice {
    pub pi: Vec<usize>,
    pub targets: Vec<Vec<usize>>,
}

pub(crate) struct Setup {
    pub ts: TupleStructure,
    pub blocks: Vec<ColorBlock>,
    /// `γ` in dense form.
    pub gamma: Vec<usize>,
}

impl Setup {
    /// `None` when some color is unbalanced, so that `S^(ε)` is empty.
    pub fn new(words: &[Word]) -> Result<Option<Self>> {
        let ts = tuple_structure(words)?;
        let mut blocks = Vec::new();
        for c in ts.distinct_colors() {
            let mut plus = Vec::new();
            let mut minus = Vec::new();
            for (k, (&col, &s)) in ts.colors.iter().zip(ts.eps.signs()).enumerate() {
                if col == c {
                    if s > 0 {
                        plus.push(k)
                    } else {
                        minus.push(k)
                    }
                }
            }
            if plus.len() != minus.len() {
                return Ok(None);
            }
            blocks.push(ColorBlock { plus, minus });
        }
        let gamma = ts.gamma.images().iter().map(|&x| x as usize - 1).collect();
        Ok(Some(Self { ts, blocks, gamma }))
    }

    pub fn m(&self) -> usize {
        self.ts.degree() / 2
    }

    pub fn l(&self) -> usize {
        self.ts.blocks.len()
    }

    /// Every color-preserving sign-compatible `π`, colors varying slowest first.
    pub fn pis(&self) -> Vec<PiChoice> {
        let n = self.ts.degree();
        let mut out = vec![PiChoice {
            pi: vec![usize::MAX; n],
            targets: Vec::new(),
        }];
        for b in &self.blocks {
            let q = b.plus.len();
            let perms = dense::all_permutations(q);
            let mut next = Vec::with_capacity(out.len() * perms.len() * perms.len());
            for partial in &out {
                for f in &perms {
                    for g in &perms {
                        let mut pi = partial.pi.clone();
                        for k in 0..q {
                            pi[b.plus[k]] = b.minus[f[k]];
                            pi[b.minus[k]] = b.plus[g[k]];
                        }
                        let mut targets = partial.targets.clone();
                        targets.push((0..q).map(|k| g[f[k]]).collect());
                        next.push(PiChoice { pi, targets });
                    }
                }
            }
            out = next;
        }
        out
    }

    /// `φ = γ π⁻¹` in dense form.
    pub fn phi(&self, pi: &[usize]) -> Vec<usize> {
        dense::compose(&self.gamma, &dense::inverse(pi))
    }
}
