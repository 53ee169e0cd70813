use std::collections::BTreeMap;

use super::{build_map, UnitaryTypeMap};
use crate::error::{Error, Result};
use crate::perm::{dense, Permutation, SignVector, Transposition};
use crate::walks::{MonotoneWalk, UnionFind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HalfEdge {
    /// The white half-edge carrying a label of `I`.
    White(u32),
    /// Slot `1..=4` of black vertex `vertex` (numbered from 1 within its color);
    /// slots 1 and 3 are ingoing, 2 and 4 outgoing.
    Black { color: u32, vertex: usize, slot: u8 },
}

/// The underlying oriented map: vertex rotation `σ̃` and edge involution `α̃` on all
/// half-edges, white ones first in label order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Incidence {
    half_edges: Vec<HalfEdge>,
    white_colors: Vec<u32>,
    sigma: Vec<usize>,
    alpha: Vec<usize>,
    outgoing: Vec<bool>,
}

impl Incidence {
    pub fn from_map(map: &UnitaryTypeMap) -> Self {
        let labels = map.labels();
        let mut half_edges: Vec<HalfEdge> = labels.iter().map(|&x| HalfEdge::White(x)).collect();
        let mut outgoing: Vec<bool> = map.eps().signs().iter().map(|&s| s > 0).collect();
        let mut sigma: Vec<usize> = labels
            .iter()
            .map(|&x| labels.binary_search(&map.rho().apply(x)).unwrap())
            .collect();
        let mut black_base = BTreeMap::new();
        for (&c, w) in map.walks() {
            for k in 1..=w.len() {
                let base = half_edges.len();
                black_base.insert((c, k), base);
                for slot in 1..=4u8 {
                    half_edges.push(HalfEdge::Black {
                        color: c,
                        vertex: k,
                        slot,
                    });
                    outgoing.push(slot % 2 == 0);
                    sigma.push(base + slot as usize % 4);
                }
            }
        }
        let n = half_edges.len();
        let mut alpha: Vec<usize> = (0..n).collect();
        let mut join = |a: usize, b: usize| {
            alpha[a] = b;
            alpha[b] = a;
        };
        let white = |x: u32| labels.binary_search(&x).unwrap();
        for (&c, w) in map.walks() {
            // free outgoing half-edge currently carrying each label of this color
            let mut free: BTreeMap<u32, usize> = labels
                .iter()
                .filter(|&&x| map.color_of(x) == Some(c) && map.eps().sign(x) == Some(1))
                .map(|&x| (x, white(x)))
                .collect();
            for (k, t) in w.steps().iter().enumerate() {
                let base = black_base[&(c, k + 1)];
                join(free[&t.a], base);
                join(free[&t.b], base + 2);
                free.insert(t.b, base + 1);
                free.insert(t.a, base + 3);
            }
            for (x, h) in free {
                join(h, white(map.pi().inverse().apply(x)));
            }
        }
        Self {
            half_edges,
            white_colors: map.colors().to_vec(),
            sigma,
            alpha,
            outgoing,
        }
    }

    pub fn half_edges(&self) -> &[HalfEdge] {
        &self.half_edges
    }

    pub fn is_outgoing(&self, h: usize) -> bool {
        self.outgoing[h]
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }

    /// `φ̃ = σ̃⁻¹ α̃`: the next half-edge counterclockwise around the face on the left.
    pub fn face_permutation(&self) -> Vec<usize> {
        let inv = dense::inverse(&self.sigma);
        self.alpha.iter().map(|&y| inv[y]).collect()
    }

    fn white_count(&self) -> usize {
        self.white_colors.len()
    }

    fn white_label(&self, h: usize) -> Option<u32> {
        match self.half_edges[h] {
            HalfEdge::White(x) => Some(x),
            HalfEdge::Black { .. } => None,
        }
    }

    /// Label of every half-edge: the first white half-edge met when turning clockwise
    /// around its left face. Checks that labels preserve orientation.
    pub fn labels(&self) -> Result<Vec<u32>> {
        let n = self.half_edges.len();
        let mut out = Vec::with_capacity(n);
        for h in 0..n {
            let mut k = h;
            let mut steps = 0;
            let label = loop {
                if let Some(x) = self.white_label(k) {
                    break x;
                }
                k = self.alpha[self.sigma[k]];
                steps += 1;
                if steps > n {
                    return Err(Error::InvalidMap(format!(
                        "face of {:?} meets no white vertex",
                        self.half_edges[h]
                    )));
                }
            };
            if self.outgoing[k] != self.outgoing[h] {
                return Err(Error::InvalidMap(format!(
                    "{:?} inherits label {label} of opposite orientation",
                    self.half_edges[h]
                )));
            }
            out.push(label);
        }
        Ok(out)
    }

    /// Reads `(ρ, ε, colors, π, walks)` back from the incidence structure.
    pub fn to_perm_data(&self) -> Result<UnitaryTypeMap> {
        let labels = self.labels()?;
        let w = self.white_count();
        let domain: Vec<u32> = (0..w).map(|h| self.white_label(h).unwrap()).collect();
        let rho = Permutation::from_images(
            domain.clone(),
            (0..w)
                .map(|h| {
                    self.white_label(self.sigma[h]).ok_or_else(|| {
                        Error::InvalidMap("white vertex rotation reaches a black half-edge".into())
                    })
                })
                .collect::<Result<Vec<_>>>()?,
        )?;
        let eps = SignVector::new(
            domain.clone(),
            (0..w)
                .map(|h| if self.outgoing[h] { 1 } else { -1 })
                .collect(),
        )?;
        let pi = Permutation::from_images(domain, (0..w).map(|h| labels[self.alpha[h]]).collect())?;
        let mut steps: BTreeMap<u32, BTreeMap<usize, Transposition>> = BTreeMap::new();
        for (h, he) in self.half_edges.iter().enumerate() {
            if let HalfEdge::Black {
                color,
                vertex,
                slot: 2,
            } = *he
            {
                let t = Transposition::new(labels[h], labels[h + 2])?;
                steps.entry(color).or_default().insert(vertex, t);
            }
        }
        let walks = steps
            .into_iter()
            .map(|(c, s)| Ok((c, MonotoneWalk::new(s.into_values().collect())?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        build_map(rho, eps, self.white_colors.clone(), pi, walks)
    }

    /// `φ_C`: for each white half-edge, the next white half-edge around its left face.
    pub fn white_face_permutation(&self) -> Result<Permutation> {
        let phi = self.face_permutation();
        let w = self.white_count();
        let domain: Vec<u32> = (0..w).map(|h| self.white_label(h).unwrap()).collect();
        let images = (0..w)
            .map(|h| {
                let mut k = phi[h];
                while k >= w {
                    k = phi[k];
                }
                self.white_label(k).unwrap()
            })
            .collect();
        Permutation::from_images(domain, images)
    }

    /// Connected components of the underlying graph, by graph search.
    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.half_edges.len());
        uf.union_perm(&self.sigma);
        uf.union_perm(&self.alpha);
        uf.blocks()
    }

    /// Genus from `V − E + F = 2C − 2g` on the full map.
    pub fn genus(&self) -> i64 {
        let v = dense::num_cycles(&self.sigma) as i64;
        let e = self.half_edges.len() as i64 / 2;
        let f = dense::num_cycles(&self.face_permutation()) as i64;
        (2 * self.component_count() as i64 - (v - e + f)) / 2
    }
}

/// Label of every half-edge of the map.
pub fn propagate_labels(map: &UnitaryTypeMap) -> Result<BTreeMap<HalfEdge, u32>> {
    let inc = Incidence::from_map(map);
    let labels = inc.labels()?;
    Ok(inc.half_edges.iter().copied().zip(labels).collect())
}
