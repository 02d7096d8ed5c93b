//! Circulant graphs `C_n(a_1, ..., a_k)` on the vertex set `Z_n`.
//!
//! Jumps are folded into `[1, n/2]` and sorted at construction, so every
//! other module can rely on the normalized form.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Folds a (possibly negative) residue into the jump range `[0, n/2]`.
pub fn fold(value: i64, n: usize) -> usize {
    let r = value.rem_euclid(n as i64) as usize;
    r.min(n - r)
}

/// A circulant graph with normalized jumps `1 <= a_1 < ... < a_k <= n/2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct CirculantGraph {
    n: usize,
    jumps: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    jumps: Vec<i64>,
}

impl TryFrom<GraphRepr> for CirculantGraph {
    type Error = Error;

    fn try_from(r: GraphRepr) -> Result<Self> {
        CirculantGraph::new(r.n, &r.jumps)
    }
}

impl From<CirculantGraph> for GraphRepr {
    fn from(g: CirculantGraph) -> Self {
        GraphRepr {
            n: g.n,
            jumps: g.jumps.iter().map(|&a| a as i64).collect(),
        }
    }
}

impl CirculantGraph {
    /// Builds `C_n(raw_jumps)`, folding each jump `a` to `min(a mod n, n - a mod n)`.
    pub fn new(n: usize, raw_jumps: &[i64]) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewVertices(n));
        }
        if raw_jumps.is_empty() {
            return Err(Error::NoJumps);
        }
        let mut jumps = Vec::with_capacity(raw_jumps.len());
        for &raw in raw_jumps {
            let a = fold(raw, n);
            if a == 0 {
                return Err(Error::ZeroJump { n, jump: raw });
            }
            if jumps.contains(&a) {
                return Err(Error::DuplicateJump { n, jump: raw, folded: a });
            }
            jumps.push(a);
        }
        jumps.sort_unstable();
        Ok(CirculantGraph { n, jumps })
    }

    /// The cycle `C_n(1)`.
    pub fn cycle(n: usize) -> Result<Self> {
        Self::new(n, &[1])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn jumps(&self) -> &[usize] {
        &self.jumps
    }

    pub fn k(&self) -> usize {
        self.jumps.len()
    }

    /// True when `a_k = n/2`, which merges the two darts of that jump.
    pub fn has_half_jump(&self) -> bool {
        2 * self.jumps[self.jumps.len() - 1] == self.n
    }

    pub fn degree(&self) -> usize {
        if self.has_half_jump() {
            2 * self.k() - 1
        } else {
            2 * self.k()
        }
    }

    pub fn edge_count(&self) -> usize {
        self.n * self.degree() / 2
    }

    /// Signed steps leaving any vertex, in the canonical order
    /// `+a_1, -a_1, +a_2, -a_2, ...`; a half jump contributes a single `+n/2`.
    pub fn steps(&self) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.degree());
        for &a in &self.jumps {
            out.push(a as i64);
            if 2 * a != self.n {
                out.push(-(a as i64));
            }
        }
        out
    }

    /// Canonical representative of a signed step: `-n/2` is written `+n/2`,
    /// everything else is reduced into `(-n/2, n/2]`.
    pub fn canonical_step(&self, step: i64) -> i64 {
        let n = self.n as i64;
        let r = step.rem_euclid(n);
        if 2 * r <= n {
            r
        } else {
            r - n
        }
    }

    /// Index of a signed step within [`CirculantGraph::steps`].
    pub fn step_index(&self, step: i64) -> Option<usize> {
        let s = self.canonical_step(step);
        let a = s.unsigned_abs() as usize;
        let pos = self.jumps.binary_search(&a).ok()?;
        // the half jump can only be the last one, so no earlier index is merged
        let base = 2 * pos;
        if 2 * a == self.n || s > 0 {
            Some(base)
        } else {
            Some(base + 1)
        }
    }

    pub fn add(&self, x: usize, step: i64) -> usize {
        (x as i64 + step).rem_euclid(self.n as i64) as usize
    }

    fn check_vertex(&self, x: usize) -> Result<()> {
        if x >= self.n {
            Err(Error::VertexOutOfRange { vertex: x, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Neighbours `x ± a_i mod n`, in step order (duplicates from `n/2` merged).
    pub fn neighbors(&self, x: usize) -> Result<Vec<usize>> {
        self.check_vertex(x)?;
        Ok(self.steps().into_iter().map(|s| self.add(x, s)).collect())
    }

    /// Each undirected edge once, as `(x, x + a_i)`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for &a in &self.jumps {
            let count = if 2 * a == self.n { self.n / 2 } else { self.n };
            for x in 0..count {
                out.push((x, (x + a) % self.n));
            }
        }
        out
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let steps = self.steps();
        (0..self.n)
            .map(|x| steps.iter().map(|&s| self.add(x, s)).collect())
            .collect()
    }

    pub fn are_adjacent(&self, x: usize, y: usize) -> bool {
        let diff = fold(y as i64 - x as i64, self.n);
        self.jumps.binary_search(&diff).is_ok()
    }

    /// `gcd(n, a_1, ..., a_k)`, the number of connected components.
    pub fn jump_gcd(&self) -> usize {
        self.jumps.iter().fold(self.n, |d, &a| gcd(d, a))
    }

    pub fn is_connected(&self) -> bool {
        self.jump_gcd() == 1
    }

    pub fn components(&self) -> ComponentStructure {
        let d = self.jump_gcd();
        let quotient = if d == 1 {
            self.clone()
        } else {
            let scaled: Vec<i64> = self.jumps.iter().map(|&a| (a / d) as i64).collect();
            // n/d >= 3 unless a component is a single edge or vertex
            CirculantGraph::new(self.n / d, &scaled).unwrap_or_else(|_| CirculantGraph {
                n: self.n / d,
                jumps: self.jumps.iter().map(|&a| a / d).collect(),
            })
        };
        ComponentStructure { d, quotient }
    }

    /// Component labels from breadth-first search; label = smallest vertex of the component.
    pub fn bfs_components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n];
        let steps = self.steps();
        for root in 0..self.n {
            if label[root] != usize::MAX {
                continue;
            }
            label[root] = root;
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &s in &steps {
                    let w = self.add(u, s);
                    if label[w] == usize::MAX {
                        label[w] = root;
                        queue.push_back(w);
                    }
                }
            }
        }
        label
    }

    /// Distances from vertex 0 (`usize::MAX` when unreachable).
    pub fn bfs_distances(&self, root: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        let steps = self.steps();
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &s in &steps {
                let w = self.add(u, s);
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Whether some signed relation `±a_i ± a_j ± a_l ≡ 0 (mod n)` holds,
    /// indices allowed to repeat. Equivalent to the graph containing a triangle.
    pub fn has_triangle_relation(&self) -> bool {
        let steps = self.steps();
        steps.iter().any(|&s| {
            steps.iter().any(|&t| {
                let sum = s + t;
                sum.rem_euclid(self.n as i64) != 0 && self.step_index(sum).is_some()
            })
        })
    }

    /// Literal form `n:a1,...,ak`.
    pub fn literal(&self) -> String {
        self.to_string()
    }

    /// The graph `C_n(r * jumps)` obtained by multiplying every jump by `r`.
    pub fn scaled(&self, r: usize) -> Result<CirculantGraph> {
        let raw: Vec<i64> = self
            .jumps
            .iter()
            .map(|&a| ((a as u128 * r as u128) % self.n as u128) as i64)
            .collect();
        CirculantGraph::new(self.n, &raw)
    }
}

impl fmt::Display for CirculantGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.n)?;
        for (i, a) in self.jumps.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl FromStr for CirculantGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadLiteral(s.to_string());
        let (n, jumps) = s.trim().split_once(':').ok_or_else(bad)?;
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        let jumps = jumps
            .split(',')
            .map(|j| j.trim().parse::<i64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        CirculantGraph::new(n, &jumps)
    }
}

/// Component structure of a (possibly disconnected) circulant graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentStructure {
    /// Number of components, `gcd(n, a_1, ..., a_k)`.
    pub d: usize,
    /// Every component is isomorphic to `C_{n/d}(a_1/d, ..., a_k/d)`.
    pub quotient: CirculantGraph,
}

impl ComponentStructure {
    /// Component index of `x`; vertices share a component iff they agree mod `d`.
    pub fn residue_of(&self, x: usize) -> usize {
        x % self.d
    }
}

/// Ladder of minimal multiples for an ordered jump prefix `a_1, ..., a_s`.
///
/// `bounds[0]` is the order of `a_1` in `Z_n`; `bounds[i]` is the least
/// `t >= 1` with `t * a_{i+1}` in the subgroup generated by the earlier jumps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ladder {
    pub n: usize,
    pub jumps: Vec<usize>,
    /// `gcd(n, a_1, ..., a_s)`.
    pub d: usize,
    pub bounds: Vec<usize>,
    /// `prefix_gcd[i] = gcd(n, a_1, ..., a_i)`, with `prefix_gcd[0] = n`.
    prefix_gcd: Vec<usize>,
}

/// Coordinates `x = r + sum m_i a_i` with `0 <= m_i < L_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Decomposition {
    pub r: usize,
    pub coefficients: Vec<usize>,
}

impl Ladder {
    pub fn new(n: usize, jumps: &[usize]) -> Ladder {
        let mut prefix_gcd = vec![n];
        for &a in jumps {
            let last = *prefix_gcd.last().unwrap();
            prefix_gcd.push(gcd(last, a));
        }
        let bounds = jumps
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                // subgroup <a_1..a_i> of Z_n is the multiples of prefix_gcd[i]
                let g = prefix_gcd[i];
                (1..=n).find(|t| (t * a) % g == 0).unwrap_or(n)
            })
            .collect();
        Ladder {
            n,
            jumps: jumps.to_vec(),
            d: *prefix_gcd.last().unwrap(),
            bounds,
            prefix_gcd,
        }
    }

    pub fn decompose(&self, x: usize) -> Decomposition {
        let n = self.n;
        let r = x % self.d;
        let mut rest = (x - r) % n;
        let mut coefficients = vec![0; self.jumps.len()];
        for i in (0..self.jumps.len()).rev() {
            let a = self.jumps[i];
            let g = self.prefix_gcd[i];
            let m = (0..self.bounds[i])
                .find(|&m| ((rest + n - (m * a) % n) % n).is_multiple_of(g))
                .expect("ladder coefficient exists");
            coefficients[i] = m;
            rest = (rest + n - (m * a) % n) % n;
        }
        debug_assert_eq!(rest, 0);
        Decomposition { r, coefficients }
    }

    pub fn compose(&self, dec: &Decomposition) -> usize {
        dec.coefficients
            .iter()
            .zip(&self.jumps)
            .fold(dec.r % self.n, |acc, (&m, &a)| (acc + m * a) % self.n)
    }
}

/// Decomposes `x` against the first `prefix_len` (sorted) jumps of `g`.
pub fn decompose(g: &CirculantGraph, prefix_len: usize, x: usize) -> Result<Decomposition> {
    if prefix_len == 0 || prefix_len > g.k() {
        return Err(Error::BadPrefix { prefix_len, k: g.k() });
    }
    g.check_vertex(x)?;
    Ok(Ladder::new(g.n(), &g.jumps()[..prefix_len]).decompose(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, j: &[i64]) -> CirculantGraph {
        CirculantGraph::new(n, j).unwrap()
    }

    #[test]
    fn construction_examples() {
        let c = g(13, &[1, 6]);
        assert_eq!((c.degree(), c.edge_count()), (4, 26));
        let c = g(8, &[1, 2, 4]);
        assert_eq!((c.degree(), c.edge_count()), (5, 20));
        assert_eq!(g(10, &[12]).jumps(), &[2]);
        assert_eq!(g(8, &[2, 1, 4]).jumps(), &[1, 2, 4]);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(CirculantGraph::new(2, &[1]), Err(Error::TooFewVertices(2))));
        assert!(matches!(CirculantGraph::new(8, &[8]), Err(Error::ZeroJump { .. })));
        assert!(matches!(CirculantGraph::new(8, &[1, 7]), Err(Error::DuplicateJump { .. })));
        assert!(matches!(CirculantGraph::new(8, &[]), Err(Error::NoJumps)));
    }

    #[test]
    fn neighbor_examples() {
        let mut nb = g(13, &[1, 6]).neighbors(0).unwrap();
        nb.sort();
        assert_eq!(nb, vec![1, 6, 7, 12]);
        let mut nb = g(8, &[1, 2, 4]).neighbors(0).unwrap();
        nb.sort();
        assert_eq!(nb, vec![1, 2, 4, 6, 7]);
        let mut nb = g(6, &[1, 3]).neighbors(2).unwrap();
        nb.sort();
        assert_eq!(nb, vec![1, 3, 5]);
        assert!(g(6, &[1, 3]).neighbors(6).is_err());
    }

    #[test]
    fn connectivity_and_components() {
        assert!(g(13, &[1, 6]).is_connected());
        assert!(!g(32, &[8, 2]).is_connected());
        assert!(!g(10, &[2, 4]).is_connected());
        let c = g(32, &[8, 2]).components();
        assert_eq!(c.d, 2);
        assert_eq!(c.quotient, g(16, &[4, 1]));
        let c = g(12, &[4, 6]).components();
        assert_eq!(c.d, 2);
        assert_eq!(c.quotient, g(6, &[2, 3]));
        assert_eq!(g(13, &[1, 6]).components().quotient, g(13, &[1, 6]));
    }

    #[test]
    fn triangle_examples() {
        assert!(g(7, &[1, 2, 3]).has_triangle_relation());
        assert!(!g(32, &[8, 2, 3]).has_triangle_relation());
        assert!(g(5, &[1, 2]).has_triangle_relation());
        // 6 + 6 + 1 = 13: the cycle 0, 6, 12 closes through jump 1
        assert!(g(13, &[1, 6]).has_triangle_relation());
        // 3 * 16 = 48: a triangle from a single repeated jump
        assert!(g(48, &[16, 5]).has_triangle_relation());
    }

    #[test]
    fn ladder_examples() {
        let c = g(32, &[8, 2, 3]);
        let ladder = Ladder::new(32, &[8, 2]);
        assert_eq!(ladder.bounds, vec![4, 4]);
        assert_eq!(ladder.d, 2);
        let zero = decompose(&c, 2, 0).unwrap();
        assert_eq!(zero, Decomposition { r: 0, coefficients: vec![0, 0] });
        for x in 0..32 {
            let dec = ladder.decompose(x);
            assert_eq!(ladder.compose(&dec), x);
        }
        assert!(decompose(&c, 0, 1).is_err());
        assert!(decompose(&c, 4, 1).is_err());
    }

    #[test]
    fn step_indices_match_steps() {
        for c in [g(8, &[1, 2, 4]), g(13, &[1, 6]), g(6, &[1, 3])] {
            for (i, s) in c.steps().into_iter().enumerate() {
                assert_eq!(c.step_index(s), Some(i));
            }
        }
        let c = g(8, &[1, 2, 4]);
        assert_eq!(c.step_index(-4), Some(4));
        assert_eq!(c.step_index(3), None);
    }

    #[test]
    fn literal_round_trip() {
        let c: CirculantGraph = "32:8,2,3".parse().unwrap();
        assert_eq!(c.jumps(), &[2, 3, 8]);
        assert_eq!(c.literal(), "32:2,3,8");
        assert!("32".parse::<CirculantGraph>().is_err());
        assert!("x:1".parse::<CirculantGraph>().is_err());
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, r#"{"n":32,"jumps":[2,3,8]}"#);
        let back: CirculantGraph = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }
}
