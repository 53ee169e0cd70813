//! wasm-bindgen front end for the demo page in `www/`.

use unitary_maps::expansion::{genus_coefficient, moment_haar};
use unitary_maps::ncpoly::Word;
use unitary_maps::weingarten::weingarten_exact;
use unitary_maps::Permutation;
use wasm_bindgen::prelude::*;

/// Largest number of unitary pairs the page accepts, to keep the tab responsive.
const MAX_PAIRS: usize = 6;

fn words(text: &str) -> Result<Vec<Word>, String> {
    let ws: Vec<Word> = text
        .split(['|', '\n'])
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| Word::parse(s).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    if ws.is_empty() {
        return Err("enter at least one word".into());
    }
    let pairs = ws.iter().map(Word::degree).sum::<usize>() / 2;
    if pairs > MAX_PAIRS {
        return Err(format!(
            "{pairs} unitary pairs; the demo stops at {MAX_PAIRS}"
        ));
    }
    Ok(ws)
}

/// `Wg_N` on the class with cycle type `class`, e.g. `"2+1"`.
pub fn weingarten_text(n: usize, class: &str) -> Result<String, String> {
    let parts: Vec<usize> = class
        .split('+')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad cycle type {class:?}"))
        })
        .collect::<Result<_, _>>()?;
    if parts.contains(&0) {
        return Err("cycle lengths must be positive".into());
    }
    let q: usize = parts.iter().sum();
    if q > 8 {
        return Err("the demo stops at q = 8".into());
    }
    let mut cycles = Vec::new();
    let mut next = 1u32;
    for p in parts {
        cycles.push((next..next + p as u32).collect::<Vec<u32>>());
        next += p as u32;
    }
    let pi =
        Permutation::from_cycles((1..=q as u32).collect(), &cycles).map_err(|e| e.to_string())?;
    weingarten_exact(&pi, n)
        .map(|v| v.to_string())
        .map_err(|e| e.to_string())
}

/// `E[Tr P₁ ··· Tr P_l]`, words separated by `|`.
pub fn moment_text(n: usize, text: &str) -> Result<String, String> {
    moment_haar(&words(text)?, n)
        .map(|t| t.to_string())
        .map_err(|e| e.to_string())
}

/// `M^(g)` of the tuple, words separated by `|`.
pub fn genus_text(g: u32, text: &str) -> Result<String, String> {
    genus_coefficient(g, &words(text)?)
        .map(|c| c.value.to_string())
        .map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn weingarten(n: usize, class: &str) -> Result<String, JsError> {
    weingarten_text(n, class).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn moment(n: usize, words: &str) -> Result<String, JsError> {
    moment_text(n, words).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn genus(g: u32, words: &str) -> Result<String, JsError> {
    genus_text(g, words).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn page_operations() {
        assert_eq!(weingarten_text(5, "1+1").unwrap(), "1/24");
        assert_eq!(weingarten_text(5, "2").unwrap(), "-1/120");
        assert!(weingarten_text(5, "2+x").is_err());
        assert_eq!(
            moment_text(4, "a1 u1 a2 u1^-1").unwrap(),
            "4 * tr(a1) tr(a2)"
        );
        assert_eq!(genus_text(0, "u1 | u1^-1").unwrap(), "1");
        assert!(genus_text(0, "").is_err());
        assert!(genus_text(
            0,
            "u1 u1 u1 u1 u1 u1 u1 u1^-1 u1^-1 u1^-1 u1^-1 u1^-1 u1^-1 u1^-1"
        )
        .is_err());
    }
}
