//! Ádám's relation: `C_n(A) ≅ C_n(B)` whenever `B = r·A` (folded) for a unit
//! `r` of `Z_n`. Sufficient for isomorphism, necessary only in special cases
//! (e.g. `k = 2`), so normal forms are sound but incomplete fingerprints.

use serde::Serialize;

use crate::graph::{gcd, CirculantGraph};

/// Canonical representative of a graph's Ádám orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdamNormalForm {
    pub graph: CirculantGraph,
    /// Unit `r` with `fold(r·jumps) = canonical.jumps`.
    pub multiplier: usize,
    pub canonical: CirculantGraph,
}

impl AdamNormalForm {
    pub fn canonical_jumps(&self) -> &[usize] {
        self.canonical.jumps()
    }
}

/// Units of `Z_n`, ascending.
pub fn units(n: usize) -> impl Iterator<Item = usize> {
    (1..n.max(2)).filter(move |&r| gcd(r, n) == 1)
}

/// Sorted folded image of the jump set under multiplication by `r`.
fn image(g: &CirculantGraph, r: usize) -> Vec<usize> {
    let n = g.n();
    let mut out: Vec<usize> = g
        .jumps()
        .iter()
        .map(|&a| {
            let v = (a as u128 * r as u128 % n as u128) as usize;
            v.min(n - v)
        })
        .collect();
    out.sort_unstable();
    out
}

/// Smallest unit `r` mapping the jumps of `g1` onto those of `g2`, or `None`
/// (also when `n` or `k` differ).
pub fn adam_equivalent(g1: &CirculantGraph, g2: &CirculantGraph) -> Option<usize> {
    if g1.n() != g2.n() || g1.k() != g2.k() {
        return None;
    }
    units(g1.n()).find(|&r| image(g1, r) == g2.jumps())
}

/// Lexicographically least folded jump set over all units; ties go to the
/// smallest multiplier.
pub fn normal_form(g: &CirculantGraph) -> AdamNormalForm {
    let mut best = g.jumps().to_vec();
    let mut multiplier = 1;
    for r in units(g.n()) {
        let img = image(g, r);
        if img < best {
            best = img;
            multiplier = r;
        }
    }
    let jumps: Vec<i64> = best.iter().map(|&a| a as i64).collect();
    let canonical = CirculantGraph::new(g.n(), &jumps).expect("unit image of a valid jump set");
    AdamNormalForm { graph: g.clone(), multiplier, canonical }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, j: &[i64]) -> CirculantGraph {
        CirculantGraph::new(n, j).unwrap()
    }

    #[test]
    fn c13_witness() {
        assert_eq!(adam_equivalent(&g(13, &[1, 6]), &g(13, &[2, 1])), Some(2));
        assert_eq!(adam_equivalent(&g(13, &[1, 6]), &g(13, &[1, 6])), Some(1));
        assert_eq!(adam_equivalent(&g(13, &[1, 6]), &g(14, &[1, 6])), None);
        assert_eq!(adam_equivalent(&g(13, &[1, 6]), &g(13, &[1, 2, 6])), None);
    }

    #[test]
    fn inverse_witness() {
        let (a, b) = (g(13, &[1, 6]), g(13, &[2, 1]));
        let r = adam_equivalent(&a, &b).unwrap();
        let inv = units(13).find(|&s| s * r % 13 == 1).unwrap();
        assert_eq!(image(&b, inv), a.jumps());
        assert!(adam_equivalent(&b, &a).is_some());
    }

    #[test]
    fn c8_normal_form() {
        let nf = normal_form(&g(8, &[2, 1, 4]));
        assert_eq!(nf.canonical_jumps(), &[1, 2, 4]);
        assert_eq!(nf.multiplier, 1);
        let nf = normal_form(&g(8, &[3, 2, 4]));
        assert_eq!(nf.canonical_jumps(), &[1, 2, 4]);
        assert_eq!(nf.multiplier, 3);
    }

    #[test]
    fn scaled_family_maps_to_one_two_half() {
        // C_n(a, 2a, n/2) with a a unit
        let nf = normal_form(&g(14, &[3, 6, 7]));
        assert_eq!(nf.canonical_jumps(), &[1, 2, 7]);
        let r = adam_equivalent(&g(14, &[3, 6, 7]), &g(14, &[1, 2, 7])).unwrap();
        assert_eq!(r * 3 % 14, 1);
    }

    #[test]
    fn c13_2_5_scan() {
        let nf = normal_form(&g(13, &[2, 5]));
        // 5*(2,5) = (10, 25) -> (3, 1)
        assert_eq!(nf.canonical_jumps(), &[1, 3]);
        assert_eq!(nf.multiplier, 5);
        assert_eq!(image(&g(13, &[2, 5]), nf.multiplier), vec![1, 3]);
    }
}
