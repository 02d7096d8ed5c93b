//! Search for quadrangular embeddings invariant under translation by a
//! period `p | n`: faces are chosen for the darts at vertices `0..p` and
//! repeated around the cycle. Small periods keep the search tiny while still
//! reaching embeddings the tube construction cannot.

use crate::embed::rotation::RotationSystem;
use crate::graph::CirculantGraph;

struct Search<'a> {
    g: &'a CirculantGraph,
    p: usize,
    steps: Vec<i64>,
    used: Vec<bool>,
    succ: Vec<Option<usize>>,
    pred: Vec<Option<usize>>,
    nodes: usize,
    cap: usize,
}

impl Search<'_> {
    fn deg(&self) -> usize {
        self.steps.len()
    }

    fn class(&self, v: i64) -> usize {
        v.rem_euclid(self.p as i64) as usize
    }

    fn index(&self, s: i64) -> Option<usize> {
        self.g.step_index(s)
    }

    /// Would linking `a -> b` at class `v` close a rotation cycle early?
    fn closes_early(&self, v: usize, a: usize, b: usize) -> bool {
        let deg = self.deg();
        let (mut len, mut x) = (1, b);
        while let Some(y) = self.succ[v * deg + x] {
            len += 1;
            x = y;
            if x == a {
                return len != deg;
            }
        }
        false
    }

    /// Places the quadrilateral starting at dart `first` with second and
    /// third steps `i2`, `i3`; returns the undo record, or `None` (with the
    /// state untouched) when it conflicts with the partial rotation.
    fn place(&mut self, first: usize, i2: usize, i3: usize) -> Option<Placed> {
        let deg = self.deg();
        let v0 = (first / deg) as i64;
        let (s1, s2, s3) = (self.steps[first % deg], self.steps[i2], self.steps[i3]);
        let i4 = self.index(-(s1 + s2 + s3))?;
        let ids = [first % deg, i2, i3, i4];
        let ss = ids.map(|i| self.steps[i]);
        let mut at = [v0; 4];
        for k in 1..4 {
            at[k] = at[k - 1] + ss[k - 1];
        }
        let darts = [0, 1, 2, 3].map(|k| self.class(at[k]) * deg + ids[k]);
        if (0..4).any(|a| self.used[darts[a]] || (0..a).any(|b| darts[a] == darts[b])) {
            return None;
        }
        let mut linked = Vec::with_capacity(4);
        for k in 0..4 {
            let w = self.class(at[(k + 1) % 4]);
            let a = self.index(-ss[k]).expect("reverse of a step");
            let b = ids[(k + 1) % 4];
            if a == b
                || self.succ[w * deg + a].is_some()
                || self.pred[w * deg + b].is_some()
                || self.closes_early(w, a, b)
            {
                self.unlink(&linked);
                return None;
            }
            self.succ[w * deg + a] = Some(b);
            self.pred[w * deg + b] = Some(a);
            linked.push((w * deg + a, w * deg + b));
        }
        for &d in &darts {
            self.used[d] = true;
        }
        Some(Placed { darts, linked })
    }

    fn unlink(&mut self, linked: &[(usize, usize)]) {
        for &(s, p) in linked {
            self.succ[s] = None;
            self.pred[p] = None;
        }
    }

    fn undo(&mut self, placed: Placed) {
        for d in placed.darts {
            self.used[d] = false;
        }
        self.unlink(&placed.linked);
    }

    /// Next step after arriving at class `w` along reversed step `back`:
    /// forced when the rotation there already has that link.
    fn next_steps(&self, w: usize, back: i64) -> std::ops::Range<usize> {
        let deg = self.deg();
        let a = self.index(-back).expect("reverse of a step");
        match self.succ[w * deg + a] {
            Some(b) => b..b + 1,
            None => 0..deg,
        }
    }

    /// Completions still open to dart `d`, counting at most `limit`.
    fn options(&mut self, d: usize, limit: usize) -> Vec<(usize, usize)> {
        let deg = self.deg();
        let v0 = (d / deg) as i64;
        let s1 = self.steps[d % deg];
        let mut out = Vec::new();
        for i2 in self.next_steps(self.class(v0 + s1), s1) {
            let s2 = self.steps[i2];
            for i3 in self.next_steps(self.class(v0 + s1 + s2), s2) {
                if let Some(p) = self.place(d, i2, i3) {
                    self.undo(p);
                    out.push((i2, i3));
                    if out.len() >= limit {
                        return out;
                    }
                }
            }
        }
        out
    }

    fn solve(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.cap {
            return false;
        }
        // branch on the dart with the fewest completions; any dart with
        // none left means this branch is dead
        let mut best: Option<(usize, Vec<(usize, usize)>)> = None;
        for d in 0..self.used.len() {
            if self.used[d] {
                continue;
            }
            let limit = best.as_ref().map_or(usize::MAX, |b| b.1.len());
            let opts = self.options(d, limit);
            if opts.is_empty() {
                return false;
            }
            if best.as_ref().is_none_or(|b| opts.len() < b.1.len()) {
                let single = opts.len() == 1;
                best = Some((d, opts));
                if single {
                    break;
                }
            }
        }
        let Some((first, opts)) = best else {
            return true;
        };
        for (i2, i3) in opts {
            let Some(placed) = self.place(first, i2, i3) else { continue };
            if self.solve() {
                return true;
            }
            self.undo(placed);
            if self.nodes > self.cap {
                return false;
            }
        }
        false
    }
}

struct Placed {
    darts: [usize; 4],
    linked: Vec<(usize, usize)>,
}

/// A quadrangular embedding of `g` invariant under `x -> x + period`, if the
/// depth-first search finds one within `node_cap` nodes.
pub fn periodic_quadrangulation(
    g: &CirculantGraph,
    period: usize,
    node_cap: usize,
) -> Option<RotationSystem> {
    if period == 0 || !g.n().is_multiple_of(period) || g.has_half_jump() {
        return None;
    }
    let steps = g.steps();
    let deg = steps.len();
    let mut search = Search {
        g,
        p: period,
        steps,
        used: vec![false; period * deg],
        succ: vec![None; period * deg],
        pred: vec![None; period * deg],
        nodes: 0,
        cap: node_cap,
    };
    if !search.solve() {
        return None;
    }
    let rotation = (0..g.n())
        .map(|v| {
            let base = (v % period) * deg;
            let mut cycle = vec![0];
            while cycle.len() < deg {
                cycle.push(search.succ[base + cycle[cycle.len() - 1]].expect("complete rotation"));
            }
            cycle.into_iter().map(|i| search.steps[i]).collect()
        })
        .collect();
    RotationSystem::new(g.clone(), rotation).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_period_four_quadrangulation() {
        let g = CirculantGraph::new(32, &[1, 4, 6, 8]).unwrap();
        assert!(periodic_quadrangulation(&g, 1, 10_000).is_none());
        let rs = periodic_quadrangulation(&g, 4, 100_000).unwrap();
        let rep = rs.trace().unwrap();
        assert!(rep.all_faces_of_size(4));
        assert_eq!(rep.genus, 17);
    }

    #[test]
    fn square_torus_is_period_one() {
        let g = CirculantGraph::new(13, &[1, 5]).unwrap();
        let rep = periodic_quadrangulation(&g, 1, 1_000).unwrap().trace().unwrap();
        assert_eq!((rep.genus, rep.f), (1, 13));
    }

    #[test]
    fn triangles_never_quadrangulate_k3() {
        // C_7(1,2,3): degree 6 on 7 vertices would need 21/2 faces
        let g = CirculantGraph::new(7, &[1, 2, 3]).unwrap();
        assert!(periodic_quadrangulation(&g, 7, 100_000).is_none());
    }
}
