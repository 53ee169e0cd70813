//! The two cuts that remove the edge or black vertex at the largest outgoing label.

use super::{build_map, UnitaryTypeMap};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::walks::MonotoneWalk;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CutCase {
    /// `j` or `d` is a fixed point of `φ` (white cut only); `g' = g`.
    PhiFixedPoint,
    /// `j` and `d` share a white vertex and the result is connected; `g' = g − 1`.
    SameVertexConnected,
    /// `j` and `d` share a white vertex and the result splits in two; genera add up to `g`.
    SameVertexSplit,
    /// `j` and `d` sit on different white vertices; `g' = g`.
    DifferentVertices,
}

#[derive(Clone, Debug)]
pub struct Cut {
    /// `(d, j)`: the distinguished label and its partner.
    pub labels: (u32, u32),
    pub case: CutCase,
    /// Connected components of the cut map, ordered by least label.
    pub pieces: Vec<UnitaryTypeMap>,
}

/// The largest outgoing label `d`, which every cut is centered on.
pub fn distinguished_label(map: &UnitaryTypeMap) -> Option<u32> {
    map.eps().plus_set().into_iter().max()
}

fn last_step_moves(map: &UnitaryTypeMap, d: u32) -> bool {
    let c = map.color_of(d).unwrap();
    map.walks()[&c].steps().last().is_some_and(|t| t.b == d)
}

fn same_cycle(rho: &Permutation, a: u32, b: u32) -> bool {
    let mut x = rho.apply(a);
    while x != a {
        if x == b {
            return true;
        }
        x = rho.apply(x);
    }
    false
}

fn classify(rho: &Permutation, d: u32, j: u32, pieces: usize) -> CutCase {
    if !same_cycle(rho, d, j) {
        CutCase::DifferentVertices
    } else if pieces >= 2 {
        CutCase::SameVertexSplit
    } else {
        CutCase::SameVertexConnected
    }
}

/// Removes the white-white edge `{j, d}` with `j = π(d)` and cuts along it:
/// `π' = π|_{I∖{j,d}}`, `ρ' = Tr(ρ (j d); I∖{j,d})`.
pub fn cut_white(map: &UnitaryTypeMap) -> Result<Cut> {
    let d =
        distinguished_label(map).ok_or_else(|| Error::Precondition("map has no labels".into()))?;
    if last_step_moves(map, d) {
        return Err(Error::Precondition(format!(
            "the last black vertex moves {d}; use the black cut"
        )));
    }
    let j = map.pi().apply(d);
    let rest: Vec<u32> = map
        .labels()
        .iter()
        .copied()
        .filter(|&x| x != d && x != j)
        .collect();
    let rho = map.rho();
    let fixed = rho.apply(d) == j || rho.apply(j) == d;
    if rest.is_empty() {
        return Ok(Cut {
            labels: (d, j),
            case: CutCase::PhiFixedPoint,
            pieces: Vec::new(),
        });
    }
    let swap = Permutation::transposition(map.labels().to_vec(), j, d)?;
    let rho2 = rho.compose(&swap)?.trace_restrict(&rest)?;
    let colors: Vec<u32> = rest.iter().map(|&x| map.color_of(x).unwrap()).collect();
    let walks = map
        .walks()
        .iter()
        .filter(|(c, _)| colors.contains(c))
        .map(|(&c, w)| (c, w.clone()))
        .collect();
    let cut = build_map(
        rho2,
        map.eps().restrict(&rest)?,
        colors,
        map.pi().restrict(&rest)?,
        walks,
    )?;
    let pieces = cut.components()?;
    let case = if fixed {
        CutCase::PhiFixedPoint
    } else {
        classify(rho, d, j, pieces.len())
    };
    Ok(Cut {
        labels: (d, j),
        case,
        pieces,
    })
}

/// Removes the last black vertex `τ_r = (j d)`: `π' = τ_r π`, `ρ' = ρ τ_r`.
pub fn cut_black(map: &UnitaryTypeMap) -> Result<Cut> {
    let d =
        distinguished_label(map).ok_or_else(|| Error::Precondition("map has no labels".into()))?;
    if !last_step_moves(map, d) {
        return Err(Error::Precondition(format!(
            "the last black vertex does not move {d}; use the white cut"
        )));
    }
    let c = map.color_of(d).unwrap();
    let walk: &MonotoneWalk = &map.walks()[&c];
    let j = walk.steps().last().unwrap().a;
    let tau = Permutation::transposition(map.labels().to_vec(), j, d)?;
    let mut walks = map.walks().clone();
    walks.insert(c, walk.without_last());
    let cut = build_map(
        map.rho().compose(&tau)?,
        map.eps().clone(),
        map.colors().to_vec(),
        tau.compose(map.pi())?,
        walks,
    )?;
    let pieces = cut.components()?;
    Ok(Cut {
        labels: (d, j),
        case: classify(map.rho(), d, j, pieces.len()),
        pieces,
    })
}
