//! All-quadrilateral embeddings of the quad family: graphs whose jumps, taken
//! in order of decreasing 2-adic valuation, are `b_1, ..., b_{k-1}` (even,
//! strictly decreasing valuations below that of `n`) followed by an odd `b_k`.
//!
//! The embedding is built by induction on `k`. The prefix graph
//! `H = C_n(b_1, ..., b_{k-1})` splits into `d` isomorphic components, each
//! embedded with quadrilaterals only. Components holding odd multiples of
//! `b_k` get the mirror orientation, then square faces of even components
//! are joined to their `±b_k` translates by prism tubes carrying the `b_k`
//! edges.

use std::collections::{HashMap, HashSet};

use crate::embed::rotation::{Dart, RotationSystem};
use crate::error::{Error, Result};
use crate::graph::{gcd, CirculantGraph, Ladder};

fn mod_inverse(a: usize, m: usize) -> Option<usize> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i64 % m as i64, m as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i64) as usize)
}

/// Tube placement report for one induction level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TubeLevel {
    /// Jump carried by the tubes of this level.
    pub jump: usize,
    /// Number of components of the prefix graph before splicing.
    pub components: usize,
    pub tubes: usize,
}

/// Result of the inductive assembly.
#[derive(Clone, Debug)]
pub(crate) struct Assembly {
    pub rs: RotationSystem,
    /// Lifted prefix embedding of the top level, before any tube is spliced.
    pub pre_splice: Option<RotationSystem>,
    pub levels: Vec<TubeLevel>,
}

/// Inner levels hand this many alternative embeddings to the level above,
/// which need not accept the first one.
const INNER_ALTERNATIVES: usize = 64;

/// Builds the rotation system level by level; `reverse_odd = false` skips the
/// orientation reversal (used to exhibit the hexagonal failure mode).
pub(crate) fn assemble(n: usize, order: &[usize], reverse_odd: bool) -> Result<Assembly> {
    let mut found = candidates(n, order, reverse_odd, 1)?;
    Ok(found.swap_remove(0))
}

fn candidates(n: usize, order: &[usize], reverse_odd: bool, want: usize) -> Result<Vec<Assembly>> {
    let jumps: Vec<i64> = order.iter().map(|&a| a as i64).collect();
    let graph = CirculantGraph::new(n, &jumps)?;
    let k = order.len();
    if k == 2 {
        let (x, y) = (order[0] as i64, order[1] as i64);
        let rs = RotationSystem::uniform(graph, &[x, y, -x, -y])?;
        return Ok(vec![Assembly { rs, pre_splice: None, levels: Vec::new() }]);
    }
    let last = order[k - 1];
    let prefix = &order[..k - 1];
    let d = prefix.iter().fold(n, |acc, &a| gcd(acc, a));
    if d % 2 != 0 {
        return Err(Error::Assembly(format!(
            "prefix {prefix:?} of {graph} has an odd number ({d}) of components"
        )));
    }
    let inv = mod_inverse(last % d, d).ok_or_else(|| {
        Error::Assembly(format!("jump {last} does not cycle the {d} components of the prefix"))
    })?;
    let quotient_order: Vec<usize> = prefix.iter().map(|&a| a / d).collect();
    let inner_all = candidates(n / d, &quotient_order, reverse_odd, INNER_ALTERNATIVES)?;
    let prefix_graph = CirculantGraph::new(n, &jumps[..k - 1])?;
    let component = |x: usize| (x % d) * inv % d;

    let mut out = Vec::new();
    let mut last_err = None;
    for inner in inner_all {
        let prefix_rs = lift(&inner.rs, &prefix_graph, d, last, reverse_odd, &component)?;
        let layer = Layer::new(&prefix_rs, &graph, order, d, &component, reverse_odd);
        let mut placements = layer.offset_placements(want - out.len());
        if placements.len() < want - out.len() && reverse_odd {
            match layer.search(want - out.len() - placements.len()) {
                Ok(p) => placements.extend(p),
                Err(e) => last_err = Some(e),
            }
        }
        for tubes in placements {
            let rs = layer.splice(&tubes)?;
            if reverse_odd && rs.faces().iter().any(|f| f.len() != 4) {
                continue;
            }
            let mut levels = inner.levels.clone();
            levels.push(TubeLevel { jump: last, components: d, tubes: tubes.len() });
            out.push(Assembly { rs, pre_splice: Some(prefix_rs.clone()), levels });
        }
        if out.len() >= want {
            break;
        }
    }
    if out.is_empty() {
        return Err(last_err.unwrap_or_else(|| Error::Assembly("no tube placement".into())));
    }
    Ok(out)
}

/// Component `t` (the one holding `t * last`) carries a translated copy of
/// the quotient embedding, mirrored when `t` is odd.
fn lift(
    inner: &RotationSystem,
    prefix_graph: &CirculantGraph,
    d: usize,
    last: usize,
    reverse_odd: bool,
    component: &dyn Fn(usize) -> usize,
) -> Result<RotationSystem> {
    let n = prefix_graph.n();
    let mut rotation: Vec<Vec<i64>> = vec![Vec::new(); n];
    for (x, slot) in rotation.iter_mut().enumerate() {
        let t = component(x);
        let base = (t * last) % n;
        let y = ((x + n - base) % n) / d;
        let mut cycle: Vec<i64> = inner.rotation_at(y).iter().map(|&s| s * d as i64).collect();
        if reverse_odd && t % 2 == 1 {
            cycle.reverse();
        }
        *slot = cycle;
    }
    RotationSystem::new(prefix_graph.clone(), rotation)
}

/// Vertices of the square `{P, P+u, P+u+v, P+v}`.
fn square(n: usize, p: usize, u: i64, v: i64) -> [usize; 4] {
    let add = |x: usize, s: i64| (x as i64 + s).rem_euclid(n as i64) as usize;
    [p, add(p, u), add(add(p, u), v), add(p, v)]
}

/// A quadrilateral of an even component joined to its translate by `step`.
#[derive(Clone, Copy, Debug)]
struct Tube {
    lower: usize,
    upper: usize,
    step: i64,
}

/// One splicing step: the lifted prefix embedding and its faces.
struct Layer<'a> {
    prefix_rs: &'a RotationSystem,
    graph: &'a CirculantGraph,
    order: &'a [usize],
    faces: Vec<Vec<Dart>>,
    of_dart: HashMap<Dart, usize>,
    even: Vec<bool>,
    d: usize,
    // without reversal the translate is matched by vertex set only
    strict: bool,
}

impl<'a> Layer<'a> {
    fn new(
        prefix_rs: &'a RotationSystem,
        graph: &'a CirculantGraph,
        order: &'a [usize],
        d: usize,
        component: &dyn Fn(usize) -> usize,
        strict: bool,
    ) -> Self {
        let faces = prefix_rs.faces();
        let mut of_dart = HashMap::new();
        for (i, f) in faces.iter().enumerate() {
            for &dart in f {
                of_dart.insert(dart, i);
            }
        }
        let even = (0..graph.n()).map(|x| component(x).is_multiple_of(2)).collect();
        Layer { prefix_rs, graph, order, faces, of_dart, even, d, strict }
    }

    fn n(&self) -> usize {
        self.graph.n()
    }

    fn last(&self) -> i64 {
        self.order[self.order.len() - 1] as i64
    }

    fn corners(&self, face: usize) -> Vec<usize> {
        self.faces[face].iter().map(|d| d.vertex).collect()
    }

    /// The quadrilateral face with exactly these corners.
    fn face_with(&self, corners: &[usize]) -> Option<usize> {
        let pg = self.prefix_rs.graph();
        let mut want = corners.to_vec();
        want.sort_unstable();
        for i in 0..corners.len() {
            let (a, b) = (corners[i], corners[(i + 1) % corners.len()]);
            let dart = Dart { vertex: a, step: pg.canonical_step(b as i64 - a as i64) };
            if let Some(&fi) = self.of_dart.get(&dart) {
                let mut got = self.corners(fi);
                got.sort_unstable();
                if self.faces[fi].len() == 4 && got == want {
                    return Some(fi);
                }
            }
        }
        None
    }

    /// Tube from face `lower` to its translate by `step`, which must be a face
    /// traversed the opposite way.
    fn tube(&self, lower: usize, step: i64) -> Option<Tube> {
        let pg = self.prefix_rs.graph();
        let face = &self.faces[lower];
        if face.len() != 4 || !face.iter().all(|d| self.even[d.vertex]) {
            return None;
        }
        if !self.strict {
            let moved: Vec<usize> = face.iter().map(|d| pg.add(d.vertex, step)).collect();
            return self.face_with(&moved).map(|upper| Tube { lower, upper, step });
        }
        let moved = |d: &Dart| Dart { vertex: pg.add(d.vertex, step), step: d.step }.reversed(pg);
        let &upper = self.of_dart.get(&moved(&face[0]))?;
        (self.faces[upper].len() == 4
            && face.iter().all(|d| self.of_dart.get(&moved(d)) == Some(&upper)))
        .then_some(Tube { lower, upper, step })
    }

    /// Plus bases with even ladder coefficients on the companion and side
    /// jumps; minus squares are those bases shifted by a common offset, the
    /// offset `-(side + companion)` first.
    fn offset_placements(&self, want: usize) -> Vec<Vec<Tube>> {
        let (n, k, d) = (self.n(), self.order.len(), self.d);
        let side = self.order[k - 2] as i64;
        let ladder = Ladder::new(n, &self.order[..k - 1]);
        let mut out = Vec::new();
        for j in 0..k - 2 {
            let companion = self.order[j] as i64;
            let plus: Vec<usize> = (0..n)
                .filter(|&x| self.even[x])
                .filter(|&x| {
                    let c = ladder.decompose(x).coefficients;
                    c[j].is_multiple_of(2) && c[k - 2].is_multiple_of(2)
                })
                .collect();
            let Some(plus_tubes) = self.squares_to_tubes(&plus, 0, side, companion, self.last())
            else {
                continue;
            };
            let first = (-(side + companion)).rem_euclid(n as i64) as usize;
            let offsets = std::iter::once(first).chain((0..n).step_by(d).filter(|&c| c != first));
            for offset in offsets {
                let Some(minus) = self.squares_to_tubes(&plus, offset, side, companion, -self.last())
                else {
                    continue;
                };
                let mut tubes = plus_tubes.clone();
                tubes.extend(minus);
                if self.faces_distinct(&tubes) {
                    out.push(tubes);
                    if out.len() >= want {
                        return out;
                    }
                }
            }
        }
        out
    }

    fn squares_to_tubes(
        &self,
        bases: &[usize],
        offset: usize,
        side: i64,
        companion: i64,
        step: i64,
    ) -> Option<Vec<Tube>> {
        bases
            .iter()
            .map(|&p| {
                let corners = square(self.n(), (p + offset) % self.n(), side, companion);
                self.tube(self.face_with(&corners)?, step)
            })
            .collect()
    }

    fn faces_distinct(&self, tubes: &[Tube]) -> bool {
        let mut used = HashSet::new();
        tubes.iter().all(|t| used.insert(t.lower) && used.insert(t.upper))
    }

    /// Exact cover: every even vertex gets one `+last` tube and one `-last`
    /// tube, and no face hosts two tubes.
    fn search(&self, limit: usize) -> Result<Vec<Vec<Tube>>> {
        let last = self.last();
        let candidates: Vec<Tube> = [last, -last]
            .iter()
            .flat_map(|&s| (0..self.faces.len()).filter_map(move |f| self.tube(f, s)))
            .collect();
        let items: Vec<(usize, usize)> =
            (0..self.n()).filter(|&x| self.even[x]).flat_map(|x| [(x, 0), (x, 1)]).collect();
        let mut options: HashMap<(usize, usize), Vec<usize>> =
            items.iter().map(|&i| (i, Vec::new())).collect();
        for (c, t) in candidates.iter().enumerate() {
            let sign = usize::from(t.step < 0);
            for v in self.corners(t.lower) {
                options.get_mut(&(v, sign)).unwrap().push(c);
            }
        }
        let mut search = CoverSearch {
            layer: self,
            options,
            candidates,
            covered: HashSet::new(),
            used_faces: HashSet::new(),
            chosen: Vec::new(),
            nodes: 0,
            limit,
            found: Vec::new(),
        };
        search.solve(&items);
        if search.found.is_empty() {
            return Err(Error::Assembly(format!(
                "no tube placement for jump {last} over {} ({} nodes searched)",
                self.prefix_rs.graph(),
                search.nodes
            )));
        }
        let CoverSearch { found, candidates, .. } = search;
        Ok(found.into_iter().map(|sol| sol.iter().map(|&c| candidates[c]).collect()).collect())
    }

    /// Cuts every tube face open and inserts the `±last` darts so that each
    /// face edge and its translate bound a quadrilateral wall.
    fn splice(&self, tubes: &[Tube]) -> Result<RotationSystem> {
        let pg = self.prefix_rs.graph();
        let mut rotation: Vec<Vec<i64>> = self.prefix_rs.rotation().to_vec();
        for t in tubes {
            for (face, s) in [(t.lower, t.step), (t.upper, -t.step)] {
                for dart in &self.faces[face] {
                    let corner = dart.head(pg);
                    let after = dart.reversed(pg).step;
                    let cycle = &mut rotation[corner];
                    let pos = cycle.iter().position(|&x| x == after).unwrap();
                    cycle.insert(pos + 1, self.graph.canonical_step(s));
                }
            }
        }
        RotationSystem::new(self.graph.clone(), rotation)
    }
}

const SEARCH_NODE_CAP: usize = 200_000;

struct CoverSearch<'a> {
    layer: &'a Layer<'a>,
    options: HashMap<(usize, usize), Vec<usize>>,
    candidates: Vec<Tube>,
    covered: HashSet<(usize, usize)>,
    used_faces: HashSet<usize>,
    chosen: Vec<usize>,
    nodes: usize,
    limit: usize,
    found: Vec<Vec<usize>>,
}

impl CoverSearch<'_> {
    fn fits(&self, c: usize, sign: usize) -> bool {
        let t = &self.candidates[c];
        !self.used_faces.contains(&t.lower)
            && !self.used_faces.contains(&t.upper)
            && self.layer.corners(t.lower).iter().all(|&v| !self.covered.contains(&(v, sign)))
    }

    /// Depth-first exact cover; returns true once `limit` solutions are found
    /// or the node budget runs out.
    fn solve(&mut self, items: &[(usize, usize)]) -> bool {
        self.nodes += 1;
        if self.nodes > SEARCH_NODE_CAP {
            return true;
        }
        let mut best: Option<((usize, usize), Vec<usize>)> = None;
        for &item in items {
            if self.covered.contains(&item) {
                continue;
            }
            let fit: Vec<usize> =
                self.options[&item].iter().copied().filter(|&c| self.fits(c, item.1)).collect();
            if best.as_ref().is_none_or(|(_, b)| fit.len() < b.len()) {
                let empty = fit.is_empty();
                best = Some((item, fit));
                if empty {
                    break;
                }
            }
        }
        let Some((item, fit)) = best else {
            self.found.push(self.chosen.clone());
            return self.found.len() >= self.limit;
        };
        for c in fit {
            let t = self.candidates[c];
            let cs = self.layer.corners(t.lower);
            for &v in &cs {
                self.covered.insert((v, item.1));
            }
            self.used_faces.insert(t.lower);
            self.used_faces.insert(t.upper);
            self.chosen.push(c);
            if self.solve(items) {
                return true;
            }
            self.chosen.pop();
            self.used_faces.remove(&t.lower);
            self.used_faces.remove(&t.upper);
            for &v in &cs {
                self.covered.remove(&(v, item.1));
            }
        }
        false
    }
}
