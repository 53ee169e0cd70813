use std::collections::BTreeMap;

use super::{build_map, UnitaryTypeMap};
use crate::error::{Error, Result};
use crate::perm::{dense, pi_eps, Permutation, SignVector};
use crate::walks::{enumerate_monotone_walks, MonotoneWalk, UnionFind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapSelection {
    /// Exactly `r` black vertices in total.
    BlackVertices(usize),
    /// Genus `g`.
    Genus(u32),
}

/// Every sign-compatible `π` on the labels, respecting colors, in lexicographic
/// one-line order.
pub(crate) fn sign_compatible_permutations(eps: &SignVector, colors: &[u32]) -> Vec<Permutation> {
    let labels = eps.domain();
    let mut palette: Vec<u32> = colors.to_vec();
    palette.sort_unstable();
    palette.dedup();
    let mut partial: Vec<Vec<u32>> = vec![labels.to_vec()];
    for c in palette {
        let of_color = |s: i8| -> Vec<u32> {
            labels
                .iter()
                .zip(colors)
                .filter(|&(&x, &k)| k == c && eps.sign(x) == Some(s))
                .map(|(&x, _)| x)
                .collect()
        };
        let (plus, minus) = (of_color(1), of_color(-1));
        if plus.len() != minus.len() {
            return Vec::new();
        }
        let q = plus.len();
        let perms = dense::all_permutations(q);
        let mut next = Vec::with_capacity(partial.len() * perms.len() * perms.len());
        for images in &partial {
            for f in &perms {
                for g in &perms {
                    let mut im = images.clone();
                    for k in 0..q {
                        im[labels.binary_search(&plus[k]).unwrap()] = minus[f[k]];
                        im[labels.binary_search(&minus[k]).unwrap()] = plus[g[k]];
                    }
                    next.push(im);
                }
            }
        }
        partial = next;
    }
    partial.sort();
    partial
        .into_iter()
        .map(|im| Permutation::from_images(labels.to_vec(), im).unwrap())
        .collect()
}

/// All ways to pick one element per list, last list varying fastest.
pub(crate) fn cartesian<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for l in lists {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                l.iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect();
    }
    out
}

/// Weak compositions of `r` into `k` parts, lexicographic.
pub(crate) fn compositions(r: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return if r == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=r {
        for mut rest in compositions(r - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All nondecreasing maps with the given `ρ`, `ε`, colors, selected by black-vertex
/// count or genus, ordered by `π` and then by walk.
pub fn enumerate_maps(
    rho: &Permutation,
    eps: &SignVector,
    colors: &[u32],
    selection: MapSelection,
    connected_only: bool,
) -> Result<Vec<UnitaryTypeMap>> {
    if eps.domain() != rho.domain() || colors.len() != rho.len() {
        return Err(Error::DomainMismatch(
            "ρ, ε and colors must share a label set".into(),
        ));
    }
    let pis = sign_compatible_permutations(eps, colors);
    let per_pi = crate::par_map(pis, |pi| {
        maps_for_pi(rho, eps, colors, &pi, selection, connected_only)
    });
    let mut out = Vec::new();
    for maps in per_pi {
        out.extend(maps?);
    }
    Ok(out)
}

fn maps_for_pi(
    rho: &Permutation,
    eps: &SignVector,
    colors: &[u32],
    pi: &Permutation,
    selection: MapSelection,
    connected_only: bool,
) -> Result<Vec<UnitaryTypeMap>> {
    let labels = rho.domain();
    let mut palette: Vec<u32> = colors.to_vec();
    palette.sort_unstable();
    palette.dedup();
    let mut targets = Vec::new();
    for &c in &palette {
        let subset: Vec<u32> = labels
            .iter()
            .zip(colors)
            .filter(|&(_, &k)| k == c)
            .map(|(&x, _)| x)
            .collect();
        targets.push(pi_eps(&pi.restrict(&subset)?, &eps.restrict(&subset)?)?);
    }
    let phi_cycles = rho.inverse().compose(&pi.inverse())?.num_cycles();
    let mut uf = UnionFind::new(labels.len());
    for (k, &x) in labels.iter().enumerate() {
        uf.union(k, labels.binary_search(&rho.apply(x)).unwrap());
        uf.union(k, labels.binary_search(&pi.apply(x)).unwrap());
    }
    let base_orbits = uf.blocks();
    let euler_base = rho.num_cycles() as i64 + phi_cycles as i64 - (labels.len() / 2) as i64;
    let plan: Vec<(usize, Option<usize>)> = match selection {
        MapSelection::BlackVertices(r) => vec![(r, None)],
        MapSelection::Genus(g) => {
            let max_c = if connected_only { 1 } else { base_orbits };
            (1..=max_c)
                .rev()
                .filter_map(|c| {
                    let r = euler_base - 2 * c as i64 + 2 * g as i64;
                    (r >= 0).then_some((r as usize, Some(c)))
                })
                .collect()
        }
    };
    let mut out = Vec::new();
    for (r, want_components) in plan {
        for split in compositions(r, palette.len()) {
            let lists: Vec<Vec<MonotoneWalk>> = targets
                .iter()
                .zip(&split)
                .map(|(t, &rc)| enumerate_monotone_walks(t, rc))
                .collect();
            for choice in cartesian(&lists) {
                let walks: BTreeMap<u32, MonotoneWalk> =
                    palette.iter().copied().zip(choice).collect();
                let map = build_map(rho.clone(), eps.clone(), colors.to_vec(), pi.clone(), walks)?;
                let components = map.orbits().len();
                let keep = match want_components {
                    Some(c) => components == c,
                    None => !connected_only || components == 1,
                };
                if keep {
                    out.push(map);
                }
            }
        }
    }
    Ok(out)
}
