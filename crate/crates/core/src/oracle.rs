//! Brute-force ground truth for tiny graphs. Nothing here reuses the
//! classification rules; the genus search only consults a traced embedding
//! as a starting incumbent.

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::classify::{is_planar_with, PlanarityReading};
use crate::embed::certify;
use crate::error::{Error, Result};
use crate::graph::{gcd, CirculantGraph, Decomposition, Ladder};

/// Limits for the exhaustive searches.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OracleBudget {
    pub max_vertices: usize,
    pub max_degree: usize,
    pub max_rotation_nodes: u64,
    pub time_cap: Duration,
}

impl OracleBudget {
    /// Genus search: up to 10 vertices of degree 4, or 8 of degree 5.
    pub fn genus() -> Self {
        OracleBudget {
            max_vertices: 10,
            max_degree: 5,
            max_rotation_nodes: 50_000_000,
            time_cap: Duration::from_secs(120),
        }
    }

    pub fn isomorphism() -> Self {
        OracleBudget {
            max_vertices: 12,
            max_degree: 12,
            max_rotation_nodes: 10_000_000,
            time_cap: Duration::from_secs(60),
        }
    }

    fn admits(&self, g: &CirculantGraph) -> bool {
        g.n() <= self.max_vertices
            && g.degree() <= self.max_degree
            && (g.degree() <= 4 || g.n() <= 8)
    }
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self::genus()
    }
}

/// Three-valued answer: the oracle never guesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "camelCase")]
pub enum OracleOutcome<T> {
    Value { value: T },
    /// The search started but hit its node or time cap.
    Unknown { nodes: u64, incumbent: Option<T> },
    /// Refused up front.
    OverBudget { reason: String },
}

impl<T: Copy> OracleOutcome<T> {
    pub fn value(&self) -> Option<T> {
        match self {
            OracleOutcome::Value { value } => Some(*value),
            _ => None,
        }
    }
}

/// Length of a shortest cycle, `None` for a perfect matching (`C_n(n/2)` and
/// friends). One BFS root suffices since circulants are vertex-transitive.
pub fn girth(g: &CirculantGraph) -> Option<usize> {
    let n = g.n();
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    dist[0] = 0;
    let mut queue = VecDeque::from([0]);
    let mut best: Option<usize> = None;
    let adjacency = g.adjacency();
    while let Some(u) = queue.pop_front() {
        for &w in &adjacency[u] {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                parent[w] = u;
                queue.push_back(w);
            } else if parent[u] != w && parent[w] != u {
                let len = dist[u] + dist[w] + 1;
                best = Some(best.map_or(len, |b| b.min(len)));
            }
        }
    }
    best
}

fn euler_lower_bound(g: &CirculantGraph) -> usize {
    // faces have length >= girth, so f <= 2e / girth
    let (v, e) = (g.n() as i64, g.edge_count() as i64);
    let l = girth(g).unwrap_or(usize::MAX).min(2 * e as usize).max(3) as i64;
    let twice = (2 - v + e - 2 * e / l).max(0);
    ((twice + 1) / 2) as usize
}

struct GenusSearch<'a> {
    g: &'a CirculantGraph,
    deg: usize,
    reverse: Vec<usize>,
    order: Vec<usize>,
    /// candidate cyclic orders (dart indices) for the first vertex and the rest
    first_choices: Vec<Vec<usize>>,
    choices: Vec<Vec<usize>>,
    succ: Vec<usize>,
    assigned: Vec<bool>,
    girth: usize,
    prune: bool,
    floor: usize,
    best: Option<usize>,
    nodes: u64,
    budget: OracleBudget,
    started: Instant,
    aborted: bool,
}

const UNSET: usize = usize::MAX;

impl GenusSearch<'_> {
    /// Closed faces, plus the most faces the open darts could still form.
    ///
    /// Darts at unassigned vertices start chains of known successors; each
    /// chain ends inside one future face, and every face has at least
    /// `girth` darts. A face either holds a chain that long or is built from
    /// shorter chains only.
    fn face_bound(&self) -> (usize, usize) {
        let total = self.succ.len();
        let mut in_chain = vec![false; total];
        let (mut long, mut short_darts) = (0, 0);
        for start in 0..total {
            if self.assigned[start / self.deg] {
                continue;
            }
            let (mut d, mut len) = (start, 1);
            in_chain[d] = true;
            loop {
                let next = self.succ[self.reverse[d]];
                if next == UNSET {
                    break;
                }
                d = next;
                in_chain[d] = true;
                len += 1;
            }
            if len >= self.girth {
                long += 1;
            } else {
                short_darts += len;
            }
        }
        let mut closed = 0;
        for start in 0..total {
            if in_chain[start] {
                continue;
            }
            let mut d = start;
            loop {
                in_chain[d] = true;
                d = self.succ[self.reverse[d]];
                if d == start {
                    break;
                }
            }
            closed += 1;
        }
        (closed, closed + long + short_darts / self.girth)
    }

    fn genus_for(&self, faces: usize) -> i64 {
        let (v, e) = (self.g.n() as i64, self.g.edge_count() as i64);
        2 - v + e - faces as i64
    }

    fn run(&mut self, depth: usize) {
        self.nodes += 1;
        if self.nodes > self.budget.max_rotation_nodes
            || (self.nodes.is_multiple_of(4096) && self.started.elapsed() > self.budget.time_cap)
        {
            self.aborted = true;
        }
        if self.aborted || self.best.is_some_and(|b| b <= self.floor && self.prune) {
            return;
        }
        if depth == self.order.len() {
            let (faces, _) = self.face_bound();
            let twice = self.genus_for(faces);
            debug_assert!(twice >= 0 && twice % 2 == 0);
            let genus = (twice / 2) as usize;
            if self.best.is_none_or(|b| genus < b) {
                self.best = Some(genus);
            }
            return;
        }
        if self.prune && depth > 0 {
            if let Some(best) = self.best {
                let (_, optimistic) = self.face_bound();
                let twice = self.genus_for(optimistic).max(0);
                if (twice + 1) / 2 >= best as i64 {
                    return;
                }
            }
        }
        let v = self.order[depth];
        let choices =
            if depth == 0 { self.first_choices.clone() } else { self.choices.clone() };
        for cyc in choices {
            for i in 0..self.deg {
                self.succ[v * self.deg + cyc[i]] = v * self.deg + cyc[(i + 1) % self.deg];
            }
            self.assigned[v] = true;
            self.run(depth + 1);
            self.assigned[v] = false;
            if self.aborted {
                break;
            }
        }
        for i in 0..self.deg {
            self.succ[v * self.deg + i] = UNSET;
        }
    }
}

/// Cyclic orders of `0..deg` with `0` first.
fn cyclic_orders(deg: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut rest: Vec<usize> = (1..deg).collect();
    permute(&mut rest, 0, &mut out);
    out.into_iter().map(|p| std::iter::once(0).chain(p).collect()).collect()
}

fn permute(xs: &mut Vec<usize>, i: usize, out: &mut Vec<Vec<usize>>) {
    if i == xs.len() {
        out.push(xs.clone());
        return;
    }
    for j in i..xs.len() {
        xs.swap(i, j);
        permute(xs, i + 1, out);
        xs.swap(i, j);
    }
}

fn bfs_order(g: &CirculantGraph) -> Vec<usize> {
    let mut seen = vec![false; g.n()];
    let mut order = Vec::with_capacity(g.n());
    let mut queue = VecDeque::from([0]);
    let adjacency = g.adjacency();
    seen[0] = true;
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &w in &adjacency[u] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    order
}

fn genus_search(g: &CirculantGraph, budget: OracleBudget, prune: bool) -> Result<OracleOutcome<usize>> {
    if !g.is_connected() {
        return Err(Error::Disconnected { graph: g.literal(), components: g.components() });
    }
    let floor = euler_lower_bound(g);
    let incumbent = if prune {
        certify(g)?.map(|(_, report)| report.genus)
    } else {
        None
    };
    if prune && incumbent == Some(floor) {
        return Ok(OracleOutcome::Value { value: floor });
    }
    if !budget.admits(g) {
        return Ok(OracleOutcome::OverBudget {
            reason: format!(
                "{g}: n = {}, degree = {} exceeds the search budget",
                g.n(),
                g.degree()
            ),
        });
    }
    let deg = g.degree();
    let steps = g.steps();
    let reverse = (0..g.n() * deg)
        .map(|id| {
            let (v, s) = (id / deg, steps[id % deg]);
            let w = g.add(v, s);
            w * deg + g.step_index(-s).expect("reverse step")
        })
        .collect();
    let choices = cyclic_orders(deg);
    // a mirror image has the same genus: keep one of each mirror pair at the root
    let first_choices =
        choices.iter().filter(|c| deg < 3 || c[1] < c[deg - 1]).cloned().collect();
    let mut search = GenusSearch {
        g,
        deg,
        reverse,
        order: bfs_order(g),
        first_choices,
        choices,
        succ: vec![UNSET; g.n() * deg],
        assigned: vec![false; g.n()],
        girth: girth(g).unwrap_or(2).max(3),
        prune,
        floor,
        best: incumbent,
        nodes: 0,
        budget,
        started: Instant::now(),
        aborted: false,
    };
    search.run(0);
    Ok(if search.aborted {
        OracleOutcome::Unknown { nodes: search.nodes, incumbent: search.best }
    } else {
        OracleOutcome::Value { value: search.best.expect("at least one rotation system") }
    })
}

/// Exact minimum genus over all rotation systems, by depth-first search with
/// partial-face pruning.
pub fn min_genus_bruteforce(g: &CirculantGraph, budget: OracleBudget) -> Result<OracleOutcome<usize>> {
    genus_search(g, budget, true)
}

/// The same search with pruning, seeding and the Euler floor all disabled.
pub fn min_genus_unpruned(g: &CirculantGraph, budget: OracleBudget) -> Result<OracleOutcome<usize>> {
    genus_search(g, budget, false)
}

struct IsoSearch<'a> {
    a: &'a [Vec<bool>],
    b: &'a [Vec<bool>],
    order: Vec<usize>,
    map: Vec<usize>,
    used: Vec<bool>,
    nodes: u64,
    cap: u64,
}

impl IsoSearch<'_> {
    fn extend(&mut self, depth: usize) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return None;
        }
        if depth == self.order.len() {
            return Some(true);
        }
        let u = self.order[depth];
        for w in 0..self.b.len() {
            if self.used[w] {
                continue;
            }
            let consistent = self.order[..depth]
                .iter()
                .all(|&x| self.a[u][x] == self.b[w][self.map[x]]);
            if !consistent {
                continue;
            }
            self.map[u] = w;
            self.used[w] = true;
            match self.extend(depth + 1) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            self.used[w] = false;
        }
        Some(false)
    }
}

/// Exact isomorphism test by backtracking over vertex bijections.
pub fn isomorphic_bruteforce(
    g1: &CirculantGraph,
    g2: &CirculantGraph,
    budget: OracleBudget,
) -> OracleOutcome<bool> {
    if g1.n() != g2.n() || g1.degree() != g2.degree() {
        return OracleOutcome::Value { value: false };
    }
    if g1.n() > budget.max_vertices {
        return OracleOutcome::OverBudget {
            reason: format!("n = {} exceeds {}", g1.n(), budget.max_vertices),
        };
    }
    if g1.jumps() == g2.jumps() {
        return OracleOutcome::Value { value: true };
    }
    let n = g1.n();
    let matrix = |g: &CirculantGraph| -> Vec<Vec<bool>> {
        (0..n).map(|x| (0..n).map(|y| g.are_adjacent(x, y)).collect()).collect()
    };
    let (a, b) = (matrix(g1), matrix(g2));
    let mut order = bfs_order(g1);
    let mut placed = vec![false; n];
    for &x in &order {
        placed[x] = true;
    }
    order.extend((0..n).filter(|&x| !placed[x]));
    let mut search = IsoSearch {
        a: &a,
        b: &b,
        order,
        map: vec![0; n],
        used: vec![false; n],
        nodes: 0,
        cap: budget.max_rotation_nodes,
    };
    // g2 is vertex-transitive, so 0 may be sent to 0
    search.used[0] = true;
    match search.extend(1) {
        Some(value) => OracleOutcome::Value { value },
        None => OracleOutcome::Unknown { nodes: search.nodes, incumbent: None },
    }
}

/// Brute-force check of the ladder decomposition against the first
/// `prefix_len` jumps: subgroups are built by closure, every box point is
/// composed by hand, and the library's `decompose` must invert the map.
pub fn verify_decomposition(g: &CirculantGraph, prefix_len: usize) -> bool {
    if prefix_len == 0 || prefix_len > g.k() {
        return false;
    }
    let n = g.n();
    let jumps = &g.jumps()[..prefix_len];
    let mut subgroup = vec![false; n];
    subgroup[0] = true;
    let mut bounds = Vec::new();
    for &a in jumps {
        let t = (1..=n).find(|&t| subgroup[t * a % n]).expect("n * a = 0");
        bounds.push(t);
        // close the subgroup under +a
        let mut frontier: Vec<usize> = (0..n).filter(|&x| subgroup[x]).collect();
        while let Some(x) = frontier.pop() {
            let y = (x + a) % n;
            if !subgroup[y] {
                subgroup[y] = true;
                frontier.push(y);
            }
        }
    }
    let d = jumps.iter().fold(n, |acc, &a| gcd(acc, a));
    let volume: usize = bounds.iter().product();
    if d * volume != n || subgroup.iter().filter(|&&s| s).count() != volume {
        return false;
    }
    let ladder = Ladder::new(n, jumps);
    if ladder.bounds != bounds || ladder.d != d {
        return false;
    }
    let mut hit = vec![false; n];
    let mut coefficients = vec![0usize; prefix_len];
    for r in 0..d {
        loop {
            let x = jumps.iter().zip(&coefficients).fold(r, |acc, (&a, &m)| (acc + m * a) % n);
            if hit[x] || x % d != r {
                return false;
            }
            hit[x] = true;
            let dec = Decomposition { r, coefficients: coefficients.clone() };
            if ladder.decompose(x) != dec || ladder.compose(&dec) != x {
                return false;
            }
            // odometer over the box
            let mut i = 0;
            while i < prefix_len {
                coefficients[i] += 1;
                if coefficients[i] < bounds[i] {
                    break;
                }
                coefficients[i] = 0;
                i += 1;
            }
            if i == prefix_len {
                break;
            }
        }
    }
    hit.into_iter().all(|h| h)
}

/// A connected graph on which the printed and corrected planarity readings
/// are compared with the oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlanarityCheck {
    pub graph: CirculantGraph,
    pub printed: bool,
    pub corrected: bool,
    pub oracle_planar: Option<bool>,
}

impl PlanarityCheck {
    pub fn printed_agrees(&self) -> Option<bool> {
        self.oracle_planar.map(|p| p == self.printed)
    }

    pub fn corrected_agrees(&self) -> Option<bool> {
        self.oracle_planar.map(|p| p == self.corrected)
    }
}

/// Every connected `k = 2` graph with `n <= max_n` on which the two readings
/// of the half-jump planarity condition differ, settled by the oracle.
pub fn planarity_reading_sweep(max_n: usize, budget: OracleBudget) -> Result<Vec<PlanarityCheck>> {
    let mut out = Vec::new();
    for n in 4..=max_n {
        for a in 1..=n / 2 {
            for b in a + 1..=n / 2 {
                let g = CirculantGraph::new(n, &[a as i64, b as i64])?;
                if !g.is_connected() {
                    continue;
                }
                let printed = is_planar_with(&g, PlanarityReading::Printed)?;
                let corrected = is_planar_with(&g, PlanarityReading::Corrected)?;
                if printed == corrected {
                    continue;
                }
                let oracle_planar = min_genus_bruteforce(&g, budget)?.value().map(|v| v == 0);
                out.push(PlanarityCheck { graph: g, printed, corrected, oracle_planar });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, j: &[i64]) -> CirculantGraph {
        CirculantGraph::new(n, j).unwrap()
    }

    fn oracle(n: usize, j: &[i64]) -> usize {
        min_genus_bruteforce(&g(n, j), OracleBudget::genus()).unwrap().value().unwrap()
    }

    #[test]
    fn small_genera() {
        assert_eq!(oracle(5, &[1, 2]), 1);
        assert_eq!(oracle(6, &[1, 3]), 1);
        assert_eq!(oracle(8, &[1, 2]), 0);
        assert_eq!(oracle(8, &[1, 3]), 1);
        assert_eq!(oracle(7, &[1]), 0);
    }

    #[test]
    fn pruning_is_sound() {
        for (n, j) in [(5, vec![1, 2]), (6, vec![1, 3]), (6, vec![1, 2]), (7, vec![1, 3])] {
            let budget = OracleBudget::genus();
            let a = min_genus_bruteforce(&g(n, &j), budget).unwrap().value();
            let b = min_genus_unpruned(&g(n, &j), budget).unwrap().value();
            assert_eq!(a, b, "{n} {j:?}");
        }
    }

    #[test]
    fn degree_six_by_matching_bounds() {
        assert_eq!(oracle(7, &[1, 2, 3]), 1);
    }

    #[test]
    fn refuses_over_budget() {
        let out = min_genus_bruteforce(&g(12, &[1, 2, 4]), OracleBudget::genus()).unwrap();
        assert!(matches!(out, OracleOutcome::OverBudget { .. }));
        let tiny = OracleBudget { max_rotation_nodes: 5, ..OracleBudget::genus() };
        let out = min_genus_bruteforce(&g(9, &[1, 3]), tiny).unwrap();
        assert!(matches!(out, OracleOutcome::Unknown { .. }));
        assert!(min_genus_bruteforce(&g(8, &[2, 4]), OracleBudget::genus()).is_err());
    }

    #[test]
    fn girths() {
        assert_eq!(girth(&g(7, &[1, 2, 3])), Some(3));
        assert_eq!(girth(&g(32, &[8, 2, 3])), Some(4));
        assert_eq!(girth(&g(13, &[1, 6])), Some(3)); // 0 -> 6 -> 12 -> 0
        assert_eq!(girth(&g(9, &[1])), Some(9));
        assert_eq!(girth(&g(6, &[3])), None);
        assert_eq!(girth(&g(6, &[1, 3])), Some(4));
    }

    #[test]
    fn isomorphisms() {
        let b = OracleBudget::isomorphism();
        assert_eq!(isomorphic_bruteforce(&g(8, &[1, 2, 4]), &g(8, &[3, 2, 4]), b).value(), Some(true));
        assert_eq!(isomorphic_bruteforce(&g(8, &[1, 2]), &g(8, &[1, 3]), b).value(), Some(false));
        assert_eq!(isomorphic_bruteforce(&g(8, &[1, 2]), &g(8, &[1, 2]), b).value(), Some(true));
        assert_eq!(isomorphic_bruteforce(&g(8, &[2]), &g(8, &[1, 3]), b).value(), Some(false));
        // two disjoint 4-cycles vs. themselves under another labeling
        assert_eq!(isomorphic_bruteforce(&g(8, &[2]), &g(8, &[2]), b).value(), Some(true));
    }

    #[test]
    fn decompositions() {
        assert!(verify_decomposition(&g(32, &[8, 2, 3]), 2));
        assert!(verify_decomposition(&g(32, &[8, 2, 3]), 3));
        assert!(verify_decomposition(&g(17, &[1]), 1));
        assert!(verify_decomposition(&g(12, &[4, 6]), 2));
        assert!(!verify_decomposition(&g(12, &[4, 6]), 3));
    }
}
