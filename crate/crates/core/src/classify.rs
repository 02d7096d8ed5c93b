//! Genus rules for circulant graphs and their aggregation into a single
//! verdict with provenance.

use serde::Serialize;

use crate::adam::{normal_form, AdamNormalForm};
use crate::embed::certify;
use crate::error::{Error, Result};
use crate::graph::{gcd, CirculantGraph};

/// Identifier of a rule that contributed to a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Rule {
    PlanarCycle,
    PlanarHeuberger,
    Genus1K2,
    Genus1K3Sum,
    Genus1K3Tube,
    Genus1C8,
    LowerboundEuler,
    LowerboundTrianglefree,
    LowerboundNonplanar,
    LowerboundKAtLeast4,
    LowerboundK3NotToroidal,
    UpperComplete,
    UpperBipartite,
    UpperCertified,
    ExactQuadfamily,
    ExactBoundsMeet,
}

/// How condition (ii) of the planarity classification is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlanarityReading {
    /// `a_2 = n/2` with `a_1` even: the prism `C_{4t+2}(2, 2t+1)`.
    Corrected,
    /// `a_2 = n/2` with `2 | a_2`, as printed.
    Printed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GenusBounds {
    pub graph: CirculantGraph,
    pub lower: usize,
    pub upper: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<usize>,
    pub provenance: Vec<Rule>,
    pub normal_form: AdamNormalForm,
}

fn require_connected(g: &CirculantGraph) -> Result<()> {
    if g.is_connected() {
        Ok(())
    } else {
        Err(Error::Disconnected { graph: g.literal(), components: g.components() })
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

/// Planarity test under either reading of condition (ii).
pub fn is_planar_with(g: &CirculantGraph, reading: PlanarityReading) -> Result<bool> {
    require_connected(g)?;
    let c = normal_form(g).canonical;
    let n = c.n();
    Ok(match c.jumps() {
        [_] => true,
        &[a1, a2] => {
            let twice = |x: usize, y: usize| {
                let t = 2 * x % n;
                y == t || y == (n - t) % n
            };
            let doubling = n.is_multiple_of(2) && (twice(a1, a2) || twice(a2, a1));
            let prism = 2 * a2 == n
                && match reading {
                    PlanarityReading::Corrected => a1 % 2 == 0,
                    PlanarityReading::Printed => a2 % 2 == 0,
                };
            doubling || prism
        }
        _ => false,
    })
}

pub fn is_planar(g: &CirculantGraph) -> Result<bool> {
    is_planar_with(g, PlanarityReading::Corrected)
}

/// Which genus-one family a graph belongs to, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TorusFamily {
    /// `k = 2`, not planar: square tessellation (or the Möbius ladder).
    Square,
    /// `k = 3` with `x + y ≡ z` for signed distinct jumps: triangulation.
    Triangulated { x: i64, y: i64, z: i64 },
    /// `C_n(u, 2u, n/2)` with `n/2` odd and `u` a unit.
    AntiprismTube { unit: usize },
    /// Ádám-equivalent to `C_8(1,2,4)`.
    C8 { unit: usize },
}

/// Signed distinct jumps `x + y ≡ z (mod n)`; when `n/2` is involved it is
/// returned as `z`.
pub(crate) fn sum_relation(g: &CirculantGraph) -> Option<(i64, i64, i64)> {
    let n = g.n() as i64;
    let j: Vec<i64> = g.jumps().iter().map(|&a| a as i64).collect();
    if j.len() != 3 {
        return None;
    }
    let half = g.has_half_jump().then_some(n / 2);
    // put the half jump (if any) last so it ends up as z
    let order: [usize; 3] = if half == Some(j[0]) {
        [1, 2, 0]
    } else if half == Some(j[1]) {
        [0, 2, 1]
    } else {
        [0, 1, 2]
    };
    let (p, q, r) = (j[order[0]], j[order[1]], j[order[2]]);
    for sp in [1, -1] {
        for sq in [1, -1] {
            let (x, y) = (sp * p, sq * q);
            let s = (x + y).rem_euclid(n);
            if s == r || s == (n - r) % n {
                return Some((x, y, s));
            }
        }
    }
    None
}

pub fn torus_family(g: &CirculantGraph) -> Result<Option<TorusFamily>> {
    require_connected(g)?;
    let n = g.n();
    Ok(match g.k() {
        2 if !is_planar(g)? => Some(TorusFamily::Square),
        3 => {
            if let Some((x, y, z)) = sum_relation(g) {
                Some(TorusFamily::Triangulated { x, y, z })
            } else if let Some(unit) = antiprism_tube_unit(g) {
                Some(TorusFamily::AntiprismTube { unit })
            } else if n == 8 {
                let c8 = CirculantGraph::new(8, &[1, 2, 4])?;
                crate::adam::adam_equivalent(&c8, g).map(|unit| TorusFamily::C8 { unit })
            } else {
                None
            }
        }
        _ => None,
    })
}

/// For `C_n(u, ±2u, n/2)` with `n/2` odd and `u` a unit, returns `u`.
fn antiprism_tube_unit(g: &CirculantGraph) -> Option<usize> {
    let n = g.n();
    if !g.has_half_jump() || (n / 2).is_multiple_of(2) || g.k() != 3 {
        return None;
    }
    let (p, q) = (g.jumps()[0], g.jumps()[1]);
    for (u, other) in [(p, q), (q, p)] {
        let t = 2 * u % n;
        if gcd(u, n) == 1 && (other == t || other == n - t) {
            return Some(u);
        }
    }
    None
}

pub fn genus_one(g: &CirculantGraph) -> Result<bool> {
    Ok(torus_family(g)?.is_some())
}

fn is_complete_bipartite(g: &CirculantGraph) -> Option<usize> {
    let n = g.n();
    if !n.is_multiple_of(2) {
        return None;
    }
    let m = n / 2;
    let odd: Vec<usize> = (1..=m).step_by(2).collect();
    (g.jumps() == odd.as_slice()).then_some(m)
}

pub fn lower_bound(g: &CirculantGraph) -> Result<(usize, Vec<Rule>)> {
    require_connected(g)?;
    let (n, k, e) = (g.n() as i64, g.k() as i64, g.edge_count() as i64);
    let mut best = 0i64;
    let mut rules = Vec::new();
    let mut consider = |value: i64, rule: Rule, rules: &mut Vec<Rule>| {
        if value > 0 {
            rules.push(rule);
            best = best.max(value);
        }
    };
    consider(ceil_div(e - 3 * (n - 2), 6), Rule::LowerboundEuler, &mut rules);
    if !g.has_triangle_relation() && !g.has_half_jump() {
        consider(ceil_div(n * k - 2 * n + 4, 4), Rule::LowerboundTrianglefree, &mut rules);
    }
    if !is_planar(g)? {
        consider(1, Rule::LowerboundNonplanar, &mut rules);
    }
    if k >= 4 {
        consider(2, Rule::LowerboundKAtLeast4, &mut rules);
    }
    if k == 3 && !genus_one(g)? {
        consider(2, Rule::LowerboundK3NotToroidal, &mut rules);
    }
    Ok((best as usize, rules))
}

/// Upper bound from the complete graph, `K_{m,m}`, and any certified embedding.
pub fn upper_bound(g: &CirculantGraph) -> Result<(usize, Vec<Rule>)> {
    require_connected(g)?;
    let n = g.n();
    let mut best = ceil_div((n as i64 - 3) * (n as i64 - 4), 12).max(0) as usize;
    let mut rules = vec![Rule::UpperComplete];
    if let Some(m) = is_complete_bipartite(g) {
        let b = ceil_div((m as i64 - 2).pow(2), 4) as usize;
        if b <= best {
            best = b;
            rules.push(Rule::UpperBipartite);
        }
    }
    if let Some((_, report)) = certify(g)? {
        if report.genus <= best {
            best = report.genus;
            rules.push(Rule::UpperCertified);
        }
    }
    Ok((best, rules))
}

pub fn classify(g: &CirculantGraph) -> Result<GenusBounds> {
    require_connected(g)?;
    let nf = normal_form(g);
    let c = &nf.canonical;
    let (lower, mut provenance) = lower_bound(c)?;
    let (upper, upper_rules) = upper_bound(c)?;
    provenance.extend(upper_rules);
    let mut exact = None;
    if c.k() == 1 {
        exact = Some(0);
        provenance.push(Rule::PlanarCycle);
    } else if is_planar(c)? {
        exact = Some(0);
        provenance.push(Rule::PlanarHeuberger);
    } else if let Some(fam) = torus_family(c)? {
        exact = Some(1);
        provenance.push(match fam {
            TorusFamily::Square => Rule::Genus1K2,
            TorusFamily::Triangulated { .. } => Rule::Genus1K3Sum,
            TorusFamily::AntiprismTube { .. } => Rule::Genus1K3Tube,
            TorusFamily::C8 { .. } => Rule::Genus1C8,
        });
    } else if let Some(cert) = quad_family_member(g) {
        // the certificate is only trusted once its embedding traces all-quad
        if upper == cert.genus && lower == cert.genus {
            exact = Some(cert.genus);
            provenance.push(Rule::ExactQuadfamily);
        }
    }
    if exact.is_none() && lower == upper {
        exact = Some(lower);
        provenance.push(Rule::ExactBoundsMeet);
    }
    if let Some(x) = exact {
        debug_assert!(lower <= x && x <= upper, "{g}: {lower} <= {x} <= {upper}");
    }
    Ok(GenusBounds { graph: g.clone(), lower, upper, exact, provenance, normal_form: nf })
}

/// Quadrilateral-family data: `n = 2^r l` and jumps ordered by decreasing
/// 2-adic valuation, the single odd jump last.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadCertificate {
    pub n: usize,
    pub r: u32,
    pub l: usize,
    pub order: Vec<usize>,
    /// Valuations `r_i` of the even jumps, strictly decreasing.
    pub exponents: Vec<u32>,
    /// Odd parts `l_i` of the even jumps.
    pub odd_parts: Vec<usize>,
    /// Whether consecutive jumps also satisfy `a_i ≠ ±2 a_{i+1}`.
    pub strict: bool,
    /// `(nk - 2n + 4) / 4`
    pub genus: usize,
}

/// Valuation structure without the `a_i ≠ ±2 a_{i+1}` condition: the layout
/// the tube construction works on.
pub fn quad_layout(g: &CirculantGraph) -> Option<QuadCertificate> {
    let (n, k) = (g.n(), g.k());
    if k < 3 || !g.is_connected() || g.has_half_jump() {
        return None;
    }
    let r = n.trailing_zeros();
    let l = n >> r;
    let mut order = g.jumps().to_vec();
    order.sort_by_key(|&a| (std::cmp::Reverse(a.trailing_zeros()), a));
    let exponents: Vec<u32> = order[..k - 1].iter().map(|a| a.trailing_zeros()).collect();
    let odd_last = order[k - 1] % 2 == 1;
    let chain = exponents.windows(2).all(|w| w[0] > w[1])
        && exponents.iter().all(|&e| e >= 1 && e < r);
    if !odd_last || !chain {
        return None;
    }
    let odd_parts = order[..k - 1].iter().map(|&a| a >> a.trailing_zeros()).collect();
    let strict = order.windows(2).all(|w| {
        let t = 2 * w[1] % n;
        w[0] != t && w[0] != (n - t) % n
    }) && !g.has_triangle_relation();
    let genus = (n * k - 2 * n + 4) / 4;
    Some(QuadCertificate { n, r, l, order, exponents, odd_parts, strict, genus })
}

/// Certificate of membership in the all-quadrilateral family, or `None`.
pub fn quad_family_member(g: &CirculantGraph) -> Option<QuadCertificate> {
    quad_layout(g).filter(|c| c.strict)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HighGenusFamily {
    pub m: usize,
    pub graph: CirculantGraph,
    pub lower_bound: usize,
    pub connected: bool,
    /// `gcd(n, a_1, a_2, a_3)`
    pub components: usize,
}

/// `C_n(a_1,a_2,a_3)` with `n = (2m+1)(2m+2)(2m+3)` and genus at least
/// `2m(m+1)^2 + 1`. Connectivity is reported, not assumed.
pub fn high_genus_family(m: usize) -> Result<HighGenusFamily> {
    if m < 2 {
        return Err(Error::BadParameter(format!("m = {m}, expected m >= 2")));
    }
    let n = (2 * m + 1) * (2 * m + 2) * (2 * m + 3);
    let a1 = (2 * m + 2) * (2 * m + 3);
    let a2 = (2 * m + 1) * (2 * m + 2) * (m + 1);
    let a3 = (2 * m + 2) * (2 * m + 3) * (m + 1);
    let graph = CirculantGraph::new(n, &[a1 as i64, a2 as i64, a3 as i64])?;
    let components = graph.jump_gcd();
    Ok(HighGenusFamily {
        m,
        lower_bound: 2 * m * (m + 1) * (m + 1) + 1,
        connected: components == 1,
        components,
        graph,
    })
}

/// One row of the 32-vertex family figure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyRow {
    pub k: usize,
    /// Multipliers of the odd residues per jump, e.g. `[1, 2, 8]`.
    pub scales: Vec<usize>,
    /// Genus the row asserts.
    pub genus: usize,
    pub members: Vec<CirculantGraph>,
}

/// Rows of the figure listing the `n`-vertex circulants whose genus follows
/// from the planar, toroidal and quadrilateral rules. `I` is the set of odd
/// residues; `s (I - {±x})` drops the members equal to `±s x` after scaling,
/// so an exclusion of an even value removes nothing.
pub fn family_table(n: usize) -> Result<Vec<FamilyRow>> {
    if n < 32 || !n.is_multiple_of(16) {
        return Err(Error::BadParameter(format!("family table needs 16 | n and n >= 32, got {n}")));
    }
    let odd: Vec<usize> = (1..n).step_by(2).collect();
    let genus = |k: usize| (n * k - 2 * n + 4) / 4;
    // (scales, genus, whether the second jump excludes ±a_1)
    let shapes: [(&[usize], usize, bool); 8] = [
        (&[1], 0, false),
        (&[1, 2], 1, true),
        (&[1, 4], 1, false),
        (&[1, 8], 1, false),
        (&[1, 2, 4], genus(3), true),
        (&[1, 2, 8], genus(3), true),
        (&[1, 4, 8], genus(3), false),
        (&[1, 2, 4, 8], genus(4), true),
    ];
    let mut rows = Vec::new();
    for (scales, g, exclude) in shapes {
        let mut members = std::collections::BTreeSet::new();
        let mut stack: Vec<Vec<usize>> = vec![vec![]];
        while let Some(prefix) = stack.pop() {
            let i = prefix.len();
            if i == scales.len() {
                let jumps: Vec<i64> = prefix.iter().map(|&a| a as i64).collect();
                if let Ok(graph) = CirculantGraph::new(n, &jumps) {
                    if graph.k() == scales.len() {
                        members.insert(graph.jumps().to_vec());
                    }
                }
                continue;
            }
            for &u in &odd {
                let value = u * scales[i] % n;
                let excluded = |x: usize| {
                    let t = scales[i] * x % n;
                    value == t || value == (n - t) % n
                };
                if i == 1 && exclude && excluded(prefix[0]) {
                    continue;
                }
                let mut next = prefix.clone();
                next.push(value);
                stack.push(next);
            }
        }
        let members = members
            .into_iter()
            .map(|j| CirculantGraph::new(n, &j.iter().map(|&a| a as i64).collect::<Vec<_>>()))
            .collect::<Result<Vec<_>>>()?;
        rows.push(FamilyRow { k: scales.len(), scales: scales.to_vec(), genus: g, members });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, j: &[i64]) -> CirculantGraph {
        CirculantGraph::new(n, j).unwrap()
    }

    #[test]
    fn planar_examples() {
        assert!(is_planar(&g(8, &[1, 2])).unwrap());
        assert!(is_planar(&g(10, &[2, 5])).unwrap());
        assert!(is_planar(&g(10, &[3, 4])).unwrap());
        assert!(is_planar(&g(4, &[1, 2])).unwrap());
        assert!(!is_planar(&g(5, &[1, 2])).unwrap());
        assert!(!is_planar(&g(8, &[1, 4])).unwrap());
        assert!(is_planar_with(&g(8, &[1, 4]), PlanarityReading::Printed).unwrap());
        assert!(!is_planar_with(&g(10, &[2, 5]), PlanarityReading::Printed).unwrap());
        assert!(matches!(is_planar(&g(10, &[2, 4])), Err(Error::Disconnected { .. })));
    }

    #[test]
    fn genus_one_examples() {
        assert!(genus_one(&g(13, &[1, 6])).unwrap());
        assert!(genus_one(&g(8, &[1, 2, 4])).unwrap());
        assert!(genus_one(&g(8, &[2, 3, 4])).unwrap());
        assert!(genus_one(&g(7, &[1, 2, 3])).unwrap());
        assert!(genus_one(&g(10, &[3, 4, 5])).unwrap());
        assert!(!genus_one(&g(12, &[1, 2, 6])).unwrap());
        assert!(!genus_one(&g(9, &[1, 2, 4])).unwrap());
        assert!(!genus_one(&g(8, &[1, 2])).unwrap());
    }

    #[test]
    fn bounds_examples() {
        assert_eq!(lower_bound(&g(32, &[8, 2, 3])).unwrap().0, 9);
        assert_eq!(lower_bound(&g(7, &[1, 2, 3])).unwrap().0, 1);
        assert_eq!(upper_bound(&g(7, &[1, 2, 3])).unwrap().0, 1);
        assert_eq!(upper_bound(&g(3, &[1])).unwrap().0, 0);
        let (u, rules) = upper_bound(&g(8, &[1, 3])).unwrap();
        assert_eq!(u, 1);
        assert!(rules.contains(&Rule::UpperBipartite));
        assert_eq!(is_complete_bipartite(&g(6, &[1, 3])), Some(3));
        assert_eq!(is_complete_bipartite(&g(10, &[1, 3, 5])), Some(5));
    }

    #[test]
    fn classify_examples() {
        let b = classify(&g(32, &[8, 2, 3])).unwrap();
        assert_eq!(b.exact, Some(9));
        assert!(b.provenance.contains(&Rule::ExactQuadfamily));
        assert_eq!(classify(&g(13, &[1, 6])).unwrap().exact, Some(1));
        assert_eq!(classify(&g(8, &[1, 2])).unwrap().exact, Some(0));
        assert_eq!(classify(&g(13, &[1])).unwrap().exact, Some(0));
    }

    #[test]
    fn quad_certificates() {
        let c = quad_family_member(&g(32, &[8, 2, 3])).unwrap();
        assert_eq!((c.r, c.l), (5, 1));
        assert_eq!(c.order, vec![8, 2, 3]);
        assert_eq!(c.exponents, vec![3, 1]);
        assert_eq!(c.genus, 9);
        assert!(quad_family_member(&g(7, &[1, 2, 3])).is_none());
        assert!(quad_family_member(&g(64, &[16, 4, 2, 3])).is_none());
        assert!(quad_layout(&g(64, &[16, 4, 2, 3])).is_some());
        assert_eq!(quad_family_member(&g(128, &[16, 24, 2, 3])).unwrap().genus, 65);
    }

    #[test]
    fn high_genus() {
        let f = high_genus_family(2).unwrap();
        assert_eq!(f.graph.n(), 210);
        assert_eq!(f.graph.jumps(), &[42, 84, 90]);
        assert_eq!(f.lower_bound, 37);
        assert_eq!(f.components, 6);
        assert!(!f.connected);
        assert_eq!(high_genus_family(3).unwrap().lower_bound, 97);
        assert!(high_genus_family(1).is_err());
    }

    #[test]
    fn table_rows() {
        let rows = family_table(32).unwrap();
        let genera: Vec<usize> = rows.iter().map(|r| r.genus).collect();
        assert_eq!(genera, vec![0, 1, 1, 1, 9, 9, 9, 17]);
        assert!(rows.iter().all(|r| !r.members.is_empty()));
        assert_eq!(rows[0].members.len(), 8);
    }
}
