//! Maps of unitary type, stored as permutational data `(ρ, ε, colors, π, walks)`.
//!
//! The embedded graph is recovered on demand by [`Incidence`], which is how labels are
//! propagated to black half-edges and how the round trip is checked.

mod enumerate;
mod incidence;
mod surgery;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{is_sign_compatible, pi_eps, Permutation, SignVector, Transposition};
use crate::walks::{MonotoneWalk, UnionFind};

pub(crate) use enumerate::{cartesian, compositions};
pub use enumerate::{enumerate_maps, MapSelection};
pub use incidence::{propagate_labels, HalfEdge, Incidence};
pub use surgery::{cut_black, cut_white, distinguished_label, Cut, CutCase};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitaryTypeMap {
    rho: Permutation,
    eps: SignVector,
    colors: Vec<u32>,
    pi: Permutation,
    walks: BTreeMap<u32, MonotoneWalk>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapDiagnostics {
    pub phi: Permutation,
    pub genus: u32,
    pub components: usize,
    pub connected: bool,
    pub nondecreasing: bool,
    pub black_count: BTreeMap<u32, usize>,
}

/// Validates the permutational data and builds the map.
///
/// `colors[k]` is the color of the `k`-th label of `rho.domain()`. Colors without an
/// entry in `walks` get the empty walk.
pub fn build_map(
    rho: Permutation,
    eps: SignVector,
    colors: Vec<u32>,
    pi: Permutation,
    walks: BTreeMap<u32, MonotoneWalk>,
) -> Result<UnitaryTypeMap> {
    let labels = rho.domain();
    if eps.domain() != labels || pi.domain() != labels {
        return Err(Error::DomainMismatch(
            "ρ, ε and π must share a label set".into(),
        ));
    }
    if colors.len() != labels.len() {
        return Err(Error::DomainMismatch(
            "one color per label is required".into(),
        ));
    }
    let color_of = |x: u32| colors[labels.binary_search(&x).unwrap()];
    for &x in labels {
        if color_of(pi.apply(x)) != color_of(x) {
            return Err(Error::InvalidMap(format!(
                "π joins labels {x} and {} of different colors",
                pi.apply(x)
            )));
        }
    }
    let mut palette: Vec<u32> = colors.clone();
    palette.sort_unstable();
    palette.dedup();
    for c in walks.keys() {
        if !palette.contains(c) {
            return Err(Error::InvalidMap(format!("walk for absent color {c}")));
        }
    }
    let mut full_walks = BTreeMap::new();
    for &c in &palette {
        let subset: Vec<u32> = labels
            .iter()
            .copied()
            .filter(|&x| color_of(x) == c)
            .collect();
        let eps_c = eps.restrict(&subset)?;
        let pi_c = pi.restrict(&subset)?;
        if !is_sign_compatible(&pi_c, &eps_c)? {
            return Err(Error::InvalidMap(format!(
                "π is not sign-compatible with ε on color {c}"
            )));
        }
        let target = pi_eps(&pi_c, &eps_c)?;
        let walk = walks.get(&c).cloned().unwrap_or_default();
        let product = walk.product(target.domain()).map_err(|_| {
            Error::InvalidMap(format!(
                "walk of color {c} leaves the outgoing labels of that color"
            ))
        })?;
        if product != target {
            return Err(Error::InvalidMap(format!(
                "walk of color {c} composes to {product}, expected π^(ε) = {target}"
            )));
        }
        full_walks.insert(c, walk);
    }
    Ok(UnitaryTypeMap {
        rho,
        eps,
        colors,
        pi,
        walks: full_walks,
    })
}

impl UnitaryTypeMap {
    /// Single-color convenience constructor.
    pub fn new(
        rho: Permutation,
        eps: SignVector,
        pi: Permutation,
        walk: MonotoneWalk,
    ) -> Result<Self> {
        let colors = vec![1; rho.len()];
        let mut walks = BTreeMap::new();
        if !rho.is_empty() {
            walks.insert(1, walk);
        }
        build_map(rho, eps, colors, pi, walks)
    }

    pub fn labels(&self) -> &[u32] {
        self.rho.domain()
    }

    pub fn rho(&self) -> &Permutation {
        &self.rho
    }

    pub fn eps(&self) -> &SignVector {
        &self.eps
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn color_of(&self, x: u32) -> Option<u32> {
        self.labels().binary_search(&x).ok().map(|k| self.colors[k])
    }

    pub fn pi(&self) -> &Permutation {
        &self.pi
    }

    pub fn walks(&self) -> &BTreeMap<u32, MonotoneWalk> {
        &self.walks
    }

    /// Total number of black vertices.
    pub fn black_vertices(&self) -> usize {
        self.walks.values().map(MonotoneWalk::len).sum()
    }

    /// Number of edges between white vertices counted as in Euler's relation: `|I| / 2`.
    pub fn m(&self) -> usize {
        self.labels().len() / 2
    }

    /// `φ = ρ⁻¹π⁻¹`.
    pub fn phi(&self) -> Permutation {
        self.rho.inverse().compose(&self.pi.inverse()).unwrap()
    }

    /// Orbits of `⟨ρ, π, τ's⟩` on the label set, each sorted, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<u32>> {
        let labels = self.labels();
        let idx = |x: u32| labels.binary_search(&x).unwrap();
        let mut uf = UnionFind::new(labels.len());
        for &x in labels {
            uf.union(idx(x), idx(self.rho.apply(x)));
            uf.union(idx(x), idx(self.pi.apply(x)));
        }
        for w in self.walks.values() {
            for t in w.steps() {
                uf.union(idx(t.a), idx(t.b));
            }
        }
        let block = uf.labels();
        let count = block.iter().map(|&b| b as usize + 1).max().unwrap_or(0);
        let mut out = vec![Vec::new(); count];
        for (k, &b) in block.iter().enumerate() {
            out[b as usize].push(labels[k]);
        }
        out
    }

    pub fn diagnostics(&self) -> Result<MapDiagnostics> {
        let phi = self.phi();
        let components = self.orbits().len();
        let euler = self.rho.num_cycles() as i64 + phi.num_cycles() as i64
            - self.m() as i64
            - self.black_vertices() as i64;
        let twice_genus = 2 * components as i64 - euler;
        if twice_genus < 0 || twice_genus % 2 != 0 {
            return Err(Error::InvalidMap(format!(
                "Euler relation gives 2g = {twice_genus} for {components} components"
            )));
        }
        let nondecreasing = self
            .walks
            .values()
            .all(|w| w.values().windows(2).all(|v| v[0] <= v[1]));
        Ok(MapDiagnostics {
            phi,
            genus: (twice_genus / 2) as u32,
            components,
            connected: components <= 1,
            nondecreasing,
            black_count: self.walks.iter().map(|(&c, w)| (c, w.len())).collect(),
        })
    }

    pub fn genus(&self) -> Result<u32> {
        Ok(self.diagnostics()?.genus)
    }

    /// Restriction to a union of orbits, keeping the walk steps inside it.
    pub fn restrict_to(&self, subset: &[u32]) -> Result<Self> {
        let mut sub = subset.to_vec();
        sub.sort_unstable();
        let colors: Vec<u32> = sub.iter().map(|&x| self.color_of(x).unwrap()).collect();
        let mut walks = BTreeMap::new();
        for (&c, w) in &self.walks {
            if !colors.contains(&c) {
                continue;
            }
            let steps: Vec<Transposition> = w
                .steps()
                .iter()
                .copied()
                .filter(|t| sub.binary_search(&t.a).is_ok())
                .collect();
            walks.insert(c, MonotoneWalk::new(steps)?);
        }
        build_map(
            self.rho.restrict(&sub)?,
            self.eps.restrict(&sub)?,
            colors,
            self.pi.restrict(&sub)?,
            walks,
        )
    }

    /// Connected components as separate maps, ordered by least label.
    pub fn components(&self) -> Result<Vec<Self>> {
        self.orbits().iter().map(|o| self.restrict_to(o)).collect()
    }

    pub fn incidence(&self) -> Incidence {
        Incidence::from_map(self)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let json = MapJson {
            labels: self.labels().to_vec(),
            rho: self.rho.to_string(),
            eps: self.eps.signs().to_vec(),
            colors: self.colors.clone(),
            pi: self.pi.to_string(),
            walks: self
                .walks
                .iter()
                .map(|(c, w)| {
                    (
                        c.to_string(),
                        w.steps().iter().map(|t| [t.a, t.b]).collect(),
                    )
                })
                .collect(),
        };
        serde_json::to_value(json).expect("map serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let j: MapJson = serde_json::from_value(value.clone()).map_err(|e| Error::Parse {
            pos: 0,
            msg: e.to_string(),
        })?;
        let rho = Permutation::parse(&j.rho, j.labels.clone())?;
        let pi = Permutation::parse(&j.pi, j.labels.clone())?;
        let eps = SignVector::new(j.labels.clone(), j.eps)?;
        let mut walks = BTreeMap::new();
        for (c, steps) in j.walks {
            let color: u32 = c.parse().map_err(|_| Error::Parse {
                pos: 0,
                msg: format!("bad color key {c:?}"),
            })?;
            let steps = steps
                .into_iter()
                .map(|[a, b]| Transposition::new(a, b))
                .collect::<Result<Vec<_>>>()?;
            walks.insert(color, MonotoneWalk::new(steps)?);
        }
        build_map(rho, eps, j.colors, pi, walks)
    }
}

#[derive(Serialize, Deserialize)]
struct MapJson {
    labels: Vec<u32>,
    rho: String,
    eps: Vec<i8>,
    colors: Vec<u32>,
    pi: String,
    walks: BTreeMap<String, Vec<[u32; 2]>>,
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn figure_map() -> UnitaryTypeMap {
        let rho = Permutation::parse_on_range("(1 4 3 7)(5 6)(2 8)", 8).unwrap();
        let eps = SignVector::parse("++--++--").unwrap();
        let pi = Permutation::parse_on_range("(1 7 6 8 2 4)(3 5)", 8).unwrap();
        let walk = MonotoneWalk::new(vec![
            Transposition::new(1, 2).unwrap(),
            Transposition::new(2, 6).unwrap(),
        ])
        .unwrap();
        UnitaryTypeMap::new(rho, eps, pi, walk).unwrap()
    }

    #[test]
    fn figure_example() {
        let map = figure_map();
        let d = map.diagnostics().unwrap();
        assert_eq!(
            d.phi,
            Permutation::parse_on_range("(3 6)(4 8 5)", 8).unwrap()
        );
        assert_eq!(d.phi.num_cycles(), 5);
        assert_eq!(d.genus, 0);
        assert!(d.connected && d.nondecreasing);
        assert_eq!(map.walks()[&1].values(), vec![2, 6]);
    }

    #[test]
    fn one_edge_map() {
        let map = UnitaryTypeMap::new(
            Permutation::parse_on_range("(1 2)", 2).unwrap(),
            SignVector::parse("+-").unwrap(),
            Permutation::parse_on_range("(1 2)", 2).unwrap(),
            MonotoneWalk::empty(),
        )
        .unwrap();
        let d = map.diagnostics().unwrap();
        assert_eq!((d.genus, d.connected), (0, true));
    }

    #[test]
    fn invalid_data_is_rejected() {
        let rho = Permutation::parse_on_range("(1 4 3 7)(5 6)(2 8)", 8).unwrap();
        let eps = SignVector::parse("++--++--").unwrap();
        let pi = Permutation::parse_on_range("(1 7 6 8 2 4)(3 5)", 8).unwrap();
        let reversed = vec![
            Transposition::new(2, 6).unwrap(),
            Transposition::new(1, 2).unwrap(),
        ];
        assert!(MonotoneWalk::new(reversed).is_err());
        let short = MonotoneWalk::new(vec![Transposition::new(1, 2).unwrap()]).unwrap();
        assert!(UnitaryTypeMap::new(rho.clone(), eps.clone(), pi.clone(), short).is_err());
        let bad_eps = SignVector::parse("+-+-+-+-").unwrap();
        assert!(UnitaryTypeMap::new(rho, bad_eps, pi, MonotoneWalk::empty()).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let map = figure_map();
        let j = map.to_json();
        assert_eq!(j["rho"], "(1 4 3 7)(2 8)(5 6)");
        assert_eq!(j["walks"]["1"], serde_json::json!([[1, 2], [2, 6]]));
        assert_eq!(UnitaryTypeMap::from_json(&j).unwrap(), map);
    }
}
