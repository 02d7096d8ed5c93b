//! Laplacian spectrum of circulants in closed form, diameter by BFS, and the
//! genus-based upper bound on algebraic connectivity.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::CirculantGraph;

/// `λ_j = Σ (2 - 2cos(2π a j / n))` over the jumps below `n/2`, plus
/// `1 - (-1)^j` for a half jump. Indexed by `j`, unsorted.
pub fn laplacian_eigenvalues(g: &CirculantGraph) -> Vec<f64> {
    let n = g.n();
    let full: Vec<usize> = g.jumps().iter().copied().filter(|&a| 2 * a != n).collect();
    (0..n)
        .map(|j| {
            let mut lambda: f64 = full
                .iter()
                .map(|&a| {
                    // reduce a*j first so the angle stays small for large n
                    let t = (a as u128 * j as u128 % n as u128) as f64;
                    2.0 - 2.0 * (2.0 * PI * t / n as f64).cos()
                })
                .sum();
            if g.has_half_jump() && j % 2 == 1 {
                lambda += 2.0;
            }
            lambda
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AlgebraicConnectivity {
    pub value: f64,
    pub connected: bool,
}

/// Second smallest Laplacian eigenvalue; exactly 0 for disconnected graphs.
pub fn algebraic_connectivity(g: &CirculantGraph) -> AlgebraicConnectivity {
    if !g.is_connected() {
        return AlgebraicConnectivity { value: 0.0, connected: false };
    }
    let value = laplacian_eigenvalues(g)
        .into_iter()
        .skip(1)
        .fold(f64::INFINITY, f64::min);
    AlgebraicConnectivity { value, connected: true }
}

/// Eccentricity of vertex 0, which is every vertex's.
pub fn diameter(g: &CirculantGraph) -> Result<usize> {
    let dist = g.bfs_distances(0);
    if dist.contains(&usize::MAX) {
        return Err(Error::Disconnected { graph: g.literal(), components: g.components() });
    }
    Ok(dist.into_iter().max().unwrap_or(0))
}

/// `(6g+2)Δ / (√(n/2) − 3(g+2))`, meaningful for `n ≥ 18(g+2)²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConnectivityBound {
    pub genus: usize,
    /// `None` when the denominator is not positive.
    pub value: Option<f64>,
    pub valid: bool,
}

pub fn boshier_bound(g: &CirculantGraph, genus: usize) -> ConnectivityBound {
    let n = g.n() as f64;
    let gg = genus as f64;
    let denominator = (n / 2.0).sqrt() - 3.0 * (gg + 2.0);
    let value = (denominator > 0.0).then(|| (6.0 * gg + 2.0) * g.degree() as f64 / denominator);
    let valid = value.is_some() && g.n() >= 18 * (genus + 2) * (genus + 2);
    ConnectivityBound { genus, value, valid }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpectralReport {
    pub n: usize,
    pub jumps: Vec<usize>,
    pub algebraic_connectivity: f64,
    pub diameter: usize,
    /// `4 / (n D)`, a lower bound on the algebraic connectivity.
    pub lower_bound_four: f64,
    pub boshier_bound: ConnectivityBound,
    pub max_degree: usize,
}

/// Full report; the graph must be connected.
pub fn spectral_report(g: &CirculantGraph, genus: usize) -> Result<SpectralReport> {
    let diameter = diameter(g)?;
    Ok(SpectralReport {
        n: g.n(),
        jumps: g.jumps().to_vec(),
        algebraic_connectivity: algebraic_connectivity(g).value,
        diameter,
        lower_bound_four: 4.0 / (g.n() as f64 * diameter as f64),
        boshier_bound: boshier_bound(g, genus),
        max_degree: g.degree(),
    })
}

/// Second-jump column as printed for `n = 2^8 ... 2^19`.
const PRINTED_SECOND_JUMP: [usize; 12] = [15, 21, 31, 44, 63, 89, 127, 180, 255, 361, 511, 723];

fn isqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// One row of the table for `C_{2^j}(1, s-1, s)`, `s = ⌊√(2^j)⌋`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RemarkRow {
    pub j: u32,
    pub n: usize,
    pub second_jump: usize,
    pub third_jump: usize,
    /// The printed second jump, where the table has one.
    pub printed_second_jump: Option<usize>,
    pub report: SpectralReport,
    /// Diameter of `C_n(1, s-1)`, the graph without its third jump. The
    /// printed `D(G)` column agrees with this, not with `report.diameter`.
    pub two_jump_diameter: usize,
    /// `96 / (√2 √n − 18)`: the bound for genus 1 and degree 6.
    pub closed_form_bound: f64,
}

/// The graphs are toroidal (`1 + (s-1) = s`), so the bound uses genus 1.
pub fn remark_table(exponents: &[u32]) -> Result<Vec<RemarkRow>> {
    exponents
        .iter()
        .map(|&j| {
            if !(4..usize::BITS - 1).contains(&j) {
                return Err(Error::BadParameter(format!("need 16 <= 2^j, got j = {j}")));
            }
            let n = 1usize << j;
            let s = isqrt(n);
            let g = CirculantGraph::new(n, &[1, s as i64 - 1, s as i64])?;
            Ok(RemarkRow {
                j,
                n,
                second_jump: s - 1,
                third_jump: s,
                printed_second_jump: j
                    .checked_sub(8)
                    .and_then(|i| PRINTED_SECOND_JUMP.get(i as usize).copied()),
                report: spectral_report(&g, 1)?,
                two_jump_diameter: diameter(&CirculantGraph::new(n, &[1, s as i64 - 1])?)?,
                closed_form_bound: 96.0 / (2f64.sqrt() * (n as f64).sqrt() - 18.0),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, j: &[i64]) -> CirculantGraph {
        CirculantGraph::new(n, j).unwrap()
    }

    #[test]
    fn cycle_spectrum() {
        let ev = laplacian_eigenvalues(&g(10, &[1]));
        assert_eq!(ev[0], 0.0);
        for (j, l) in ev.iter().enumerate() {
            assert!((l - (2.0 - 2.0 * (2.0 * PI * j as f64 / 10.0).cos())).abs() < 1e-12);
        }
    }

    #[test]
    fn trace_identity() {
        for (n, j) in [(12, vec![1, 6]), (13, vec![2, 5]), (16, vec![1, 3, 8])] {
            let c = g(n, &j);
            let sum: f64 = laplacian_eigenvalues(&c).iter().sum();
            assert!((sum - 2.0 * c.edge_count() as f64).abs() < 1e-9 * sum);
        }
    }

    #[test]
    fn connectivity_values() {
        let a = algebraic_connectivity(&g(256, &[1, 15, 16]));
        assert!((a.value - 0.286858).abs() < 1e-5);
        assert!((algebraic_connectivity(&g(512, &[1, 21, 22])).value - 0.134179).abs() < 1e-5);
        assert!((algebraic_connectivity(&g(4096, &[1, 63, 64])).value - 0.0189651).abs() < 1e-6);
        let d = algebraic_connectivity(&g(10, &[2, 4]));
        assert_eq!((d.value, d.connected), (0.0, false));
    }

    #[test]
    fn diameters() {
        assert_eq!(diameter(&g(256, &[1, 15, 16])).unwrap(), 10);
        assert_eq!(diameter(&g(2048, &[1, 44, 45])).unwrap(), 33);
        assert_eq!(diameter(&g(256, &[1, 15])).unwrap(), 16);
        assert_eq!(diameter(&g(2048, &[1, 44])).unwrap(), 35);
        assert_eq!(diameter(&g(11, &[1])).unwrap(), 5);
        assert!(diameter(&g(10, &[2])).is_err());
    }

    #[test]
    fn bound_values() {
        let b = boshier_bound(&g(256, &[1, 15, 16]), 1);
        assert!(b.valid);
        assert!((b.value.unwrap() - 20.7459).abs() < 1e-3);
        let b = boshier_bound(&g(524288, &[1, 723, 724]), 1);
        assert!((b.value.unwrap() - 0.0954274).abs() < 1e-6);
        let b = boshier_bound(&g(128, &[1, 10, 11]), 1);
        assert!(!b.valid);
        assert!(boshier_bound(&g(64, &[1, 7, 8]), 1).value.is_none());
    }

    #[test]
    fn table_rows() {
        let rows = remark_table(&[8, 13, 14]).unwrap();
        assert_eq!((rows[0].second_jump, rows[0].report.diameter), (15, 10));
        assert_eq!(rows[0].two_jump_diameter, 16);
        assert!((rows[0].report.lower_bound_four - 4.0 / 2560.0).abs() < 1e-12);
        assert_eq!((rows[1].report.diameter, rows[1].two_jump_diameter), (60, 89));
        assert!((rows[1].report.algebraic_connectivity - 0.00942163).abs() < 1e-5);
        assert_eq!(rows[2].printed_second_jump, Some(127));
        assert!(rows[2].report.diameter > 0);
        assert!(remark_table(&[3]).is_err());
    }
}
