//! Explicit embeddings of the classified families.

use crate::classify::{is_planar, quad_layout, torus_family, QuadCertificate, TorusFamily};
use crate::embed::periodic::periodic_quadrangulation;
use crate::embed::quad::{self, TubeLevel};
use crate::embed::rotation::{EmbeddingReport, RotationSystem};
use crate::error::{Error, Result};
use crate::graph::{gcd, CirculantGraph};

fn wrong(g: &CirculantGraph, constructor: &'static str) -> Error {
    Error::WrongFamily { graph: g.literal(), constructor }
}

fn on(n: usize, jumps: &[i64]) -> Result<CirculantGraph> {
    CirculantGraph::new(n, jumps)
}

/// The unique rotation of a cycle: planar, two faces.
pub fn embed_cycle(g: &CirculantGraph) -> Result<RotationSystem> {
    if g.k() != 1 || !g.is_connected() {
        return Err(wrong(g, "embed_cycle"));
    }
    let a = g.jumps()[0] as i64;
    RotationSystem::uniform(g.clone(), &[a, -a])
}

/// Planar `k = 2` graphs: the antiprism `C_n(u, 2u)` and the prism
/// `C_n(a, n/2)` with `a` even and `n/2` odd.
pub fn embed_planar_k2(g: &CirculantGraph) -> Result<RotationSystem> {
    if g.k() != 2 || !g.is_connected() || !is_planar(g)? {
        return Err(wrong(g, "embed_planar_k2"));
    }
    let n = g.n();
    let (a1, a2) = (g.jumps()[0], g.jumps()[1]);
    if n == 4 {
        // K_4
        let rotation = (0..4).map(|v| if v % 2 == 0 { vec![1, -1, 2] } else { vec![1, 2, -1] });
        return RotationSystem::new(g.clone(), rotation.collect());
    }
    let doubles = |x: usize, y: usize| {
        let t = 2 * x % n;
        y == t || y == n - t
    };
    for (u, v) in [(a1, a2), (a2, a1)] {
        if n.is_multiple_of(2) && doubles(u, v) && gcd(u, n) == 1 {
            let rotation = (0..n)
                .map(|v| if v % 2 == 0 { vec![2, -2, -1, 1] } else { vec![2, 1, -1, -2] })
                .collect();
            return RotationSystem::new(on(n, &[1, 2])?, rotation)?.relabel(u);
        }
    }
    let m = n / 2;
    if a2 == m && a1 % 2 == 0 && m % 2 == 1 {
        let c = a1 / 2;
        let u = if c % 2 == 1 { c } else { c + m };
        let (h, two) = (m as i64, 2i64);
        let rotation = (0..n)
            .map(|v| if v % 2 == 0 { vec![h, two, -two] } else { vec![two, h, -two] })
            .collect();
        return RotationSystem::new(on(n, &[2, m as i64])?, rotation)?.relabel(u);
    }
    Err(wrong(g, "embed_planar_k2"))
}

/// Genus-one `k = 2` graphs: the square tessellation `(+a_1, +a_2, -a_1, -a_2)`,
/// or the Möbius ladder layout when `a_2 = n/2`.
pub fn embed_torus_square(g: &CirculantGraph) -> Result<RotationSystem> {
    if torus_family(g)? != Some(TorusFamily::Square) {
        return Err(wrong(g, "embed_torus_square"));
    }
    let n = g.n();
    let (a1, a2) = (g.jumps()[0] as i64, g.jumps()[1] as i64);
    if !g.has_half_jump() {
        return RotationSystem::uniform(g.clone(), &[a1, a2, -a1, -a2]);
    }
    // cubic and not the prism, so a_1 is a unit: C_n(1, n/2) relabelled
    let m = n / 2;
    let h = m as i64;
    let rotation =
        (0..n).map(|v| if v < m { vec![1, -1, h] } else { vec![1, h, -1] }).collect();
    RotationSystem::new(on(n, &[1, h])?, rotation)?.relabel(a1 as usize)
}

/// `k = 3` with `x + y ≡ z`: the triangulated torus `(x, z, y, -x, -z, -y)`;
/// when `z = n/2` the half diagonal sits in one of two positions.
pub fn embed_torus_triangulated(g: &CirculantGraph) -> Result<RotationSystem> {
    let Some(TorusFamily::Triangulated { x, y, z }) = torus_family(g)? else {
        return Err(wrong(g, "embed_torus_triangulated"));
    };
    let n = g.n();
    if !g.has_half_jump() {
        return RotationSystem::uniform(g.clone(), &[x, z, y, -x, -z, -y]);
    }
    let h = z;
    let rotation = (0..n)
        .map(|v| if v < n / 2 { vec![x, h, y, -x, -y] } else { vec![x, y, -x, h, -y] })
        .collect();
    RotationSystem::new(g.clone(), rotation)
}

/// `C_n(u, 2u, n/2)` with `n/2` odd: the antiprism wrapped into a tube.
pub fn embed_antiprism_tube(g: &CirculantGraph) -> Result<RotationSystem> {
    let Some(TorusFamily::AntiprismTube { unit }) = torus_family(g)? else {
        return Err(wrong(g, "embed_antiprism_tube"));
    };
    let n = g.n();
    let m = (n / 2) as i64;
    let rotation = (0..n)
        .map(|v| if v % 2 == 0 { vec![2, m, -2, -1, 1] } else { vec![2, 1, -1, -2, m] })
        .collect();
    RotationSystem::new(on(n, &[1, 2, m])?, rotation)?.relabel(unit)
}

/// A genus-one embedding of `C_8(1,2,4)`.
pub fn embed_c8_124() -> RotationSystem {
    let rotation = vec![
        vec![1, 4, -1, -2, 2],
        vec![1, 2, -2, 4, -1],
        vec![1, -1, -2, 4, 2],
        vec![1, 2, 4, -2, -1],
        vec![1, 4, -1, -2, 2],
        vec![1, -2, 4, 2, -1],
        vec![1, -1, -2, 4, 2],
        vec![1, -2, 2, 4, -1],
    ];
    let g = CirculantGraph::new(8, &[1, 2, 4]).expect("valid graph");
    RotationSystem::new(g, rotation).expect("valid rotation")
}

/// Result of the tube construction.
#[derive(Clone, Debug)]
pub struct QuadAssembly {
    pub rotation: RotationSystem,
    /// Lifted embedding of `C_n(a_1, ..., a_{k-1})` before the last tubes.
    pub pre_splice: RotationSystem,
    pub levels: Vec<TubeLevel>,
}

/// Runs the tube construction for `cert`. With `reverse_odd = false` the
/// orientation reversal is skipped and the result is returned untraced.
pub fn assemble_quad_family(
    g: &CirculantGraph,
    cert: &QuadCertificate,
    reverse_odd: bool,
) -> Result<QuadAssembly> {
    let mut sorted = cert.order.clone();
    sorted.sort_unstable();
    if cert.n != g.n() || sorted != g.jumps() {
        return Err(Error::Assembly(format!("certificate does not describe {g}")));
    }
    let a = quad::assemble(g.n(), &cert.order, reverse_odd)?;
    let pre_splice = a.pre_splice.expect("k >= 3 has a splice level");
    Ok(QuadAssembly { rotation: a.rs, pre_splice, levels: a.levels })
}

/// All-quadrilateral embedding of genus `(nk - 2n + 4)/4`; any other face
/// size is a hard error carrying the offending face.
pub fn embed_quad_family(g: &CirculantGraph, cert: &QuadCertificate) -> Result<RotationSystem> {
    let rotation = match assemble_quad_family(g, cert, true) {
        Ok(a) => a.rotation,
        Err(e) => periodic_fallback(g).ok_or(e)?,
    };
    let report = rotation.trace()?;
    if let Some(face) = report.faces.iter().find(|f| f.len() != 4) {
        return Err(Error::Assembly(format!("face of size {}: {face:?}", face.len())));
    }
    debug_assert_eq!(report.genus, cert.genus);
    Ok(rotation)
}

const PERIODIC_NODE_CAP: usize = 50_000;

/// Translation-periodic quadrangulation with the smallest period (a divisor of
/// `n`, at most 16) the bounded search can settle.
fn periodic_fallback(g: &CirculantGraph) -> Option<RotationSystem> {
    (1..=16)
        .filter(|p| g.n().is_multiple_of(*p))
        .find_map(|p| periodic_quadrangulation(g, p, PERIODIC_NODE_CAP))
}

/// Routes `g` to whichever constructor applies; `None` when none does.
pub fn certify(g: &CirculantGraph) -> Result<Option<(RotationSystem, EmbeddingReport)>> {
    if !g.is_connected() {
        return Err(Error::Disconnected { graph: g.literal(), components: g.components() });
    }
    let rs = if g.k() == 1 {
        Some(embed_cycle(g)?)
    } else if is_planar(g)? {
        Some(embed_planar_k2(g)?)
    } else if let Some(family) = torus_family(g)? {
        Some(match family {
            TorusFamily::Square => embed_torus_square(g)?,
            TorusFamily::Triangulated { .. } => embed_torus_triangulated(g)?,
            TorusFamily::AntiprismTube { .. } => embed_antiprism_tube(g)?,
            TorusFamily::C8 { unit } => embed_c8_124().relabel(unit)?,
        })
    } else if let Some(cert) = quad_layout(g) {
        embed_quad_family(g, &cert).ok()
    } else {
        None
    };
    rs.map(|rs| {
        let report = rs.trace()?;
        Ok((rs, report))
    })
    .transpose()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, j: &[i64]) -> CirculantGraph {
        CirculantGraph::new(n, j).unwrap()
    }

    fn genus(rs: &RotationSystem) -> usize {
        let r = rs.trace().unwrap();
        assert!(r.euler_holds());
        r.genus
    }

    #[test]
    fn cycles() {
        for n in [3, 6, 13] {
            let r = embed_cycle(&g(n, &[1])).unwrap().trace().unwrap();
            assert_eq!((r.genus, r.f), (0, 2));
        }
        assert!(embed_cycle(&g(6, &[1, 2])).is_err());
    }

    #[test]
    fn planar_k2() {
        let r = embed_planar_k2(&g(10, &[1, 2])).unwrap().trace().unwrap();
        assert_eq!(r.genus, 0);
        assert_eq!(r.face_sizes.get(&3), Some(&10));
        assert_eq!(r.face_sizes.get(&5), Some(&2));
        for (n, j) in [(10, vec![2, 5]), (8, vec![1, 2]), (4, vec![1, 2]), (14, vec![4, 7]), (10, vec![3, 4])] {
            assert_eq!(genus(&embed_planar_k2(&g(n, &j)).unwrap()), 0, "{n} {j:?}");
        }
        assert!(embed_planar_k2(&g(5, &[1, 2])).is_err());
    }

    #[test]
    fn square_tori() {
        for (n, j) in [(13, vec![1, 6]), (5, vec![1, 2]), (9, vec![1, 3]), (8, vec![1, 4]), (12, vec![5, 6])] {
            let r = embed_torus_square(&g(n, &j)).unwrap().trace().unwrap();
            assert_eq!(r.genus, 1, "{n} {j:?}");
            if j[1] as usize * 2 != n {
                assert!(r.all_faces_of_size(4));
                assert_eq!(r.f, n);
            }
        }
    }

    #[test]
    fn triangulated_tori() {
        let r = embed_torus_triangulated(&g(7, &[1, 2, 3])).unwrap().trace().unwrap();
        assert_eq!((r.genus, r.f), (1, 14));
        assert!(r.all_faces_of_size(3));
        let r = embed_torus_triangulated(&g(13, &[1, 5, 6])).unwrap().trace().unwrap();
        assert_eq!((r.genus, r.f), (1, 26));
        assert_eq!(genus(&embed_torus_triangulated(&g(256, &[1, 15, 16])).unwrap()), 1);
        for (n, j) in [(10, vec![2, 3, 5]), (13, vec![2, 5, 6]), (14, vec![1, 6, 7]), (16, vec![3, 5, 8])] {
            assert_eq!(genus(&embed_torus_triangulated(&g(n, &j)).unwrap()), 1, "{n} {j:?}");
        }
    }

    #[test]
    fn antiprism_tubes() {
        for (n, j) in [(10, vec![1, 2, 5]), (14, vec![1, 2, 7]), (10, vec![3, 4, 5]), (18, vec![5, 8, 9])] {
            assert_eq!(genus(&embed_antiprism_tube(&g(n, &j)).unwrap()), 1, "{n} {j:?}");
        }
    }

    #[test]
    fn c8() {
        let r = embed_c8_124().trace().unwrap();
        assert_eq!((r.v, r.e, r.f, r.genus), (8, 20, 12, 1));
        assert_eq!(r.face_sizes.iter().map(|(s, c)| s * c).sum::<usize>(), 40);
        let (rs, rep) = certify(&g(8, &[2, 3, 4])).unwrap().unwrap();
        assert_eq!(rs.graph(), &g(8, &[2, 3, 4]));
        assert_eq!(rep.genus, 1);
    }

    #[test]
    fn certify_dispatch() {
        assert_eq!(certify(&g(13, &[1, 6])).unwrap().unwrap().1.genus, 1);
        assert_eq!(certify(&g(7, &[1, 2, 3])).unwrap().unwrap().1.genus, 1);
        assert!(certify(&g(9, &[1, 2, 4])).unwrap().is_none());
        assert_eq!(certify(&g(32, &[8, 2, 3])).unwrap().unwrap().1.genus, 9);
        assert!(certify(&g(10, &[2, 4])).is_err());
    }

    #[test]
    fn quad_family_c32() {
        let c = g(32, &[8, 2, 3]);
        let cert = quad_layout(&c).unwrap();
        let rep = embed_quad_family(&c, &cert).unwrap().trace().unwrap();
        assert_eq!(rep.genus, 9);
        assert_eq!(rep.face_sizes, [(4, 48)].into_iter().collect());

        let a = assemble_quad_family(&c, &cert, true).unwrap();
        let pre = &a.pre_splice;
        // component of 0 and the component of 3 are mirror images
        let mirrored: Vec<i64> = pre.rotation_at(0).iter().rev().copied().collect();
        assert_eq!(pre.rotation_at(3), &mirrored[..]);
        let faces = pre.faces();
        assert_eq!(faces.len(), 32);
        assert!(faces.iter().all(|f| f.len() == 4));
    }

    #[test]
    fn quad_family_needs_matching_certificate() {
        let cert = quad_layout(&g(32, &[8, 2, 3])).unwrap();
        assert!(assemble_quad_family(&g(32, &[8, 2, 5]), &cert, true).is_err());
    }

    #[test]
    fn periodic_fallback_reaches_wraparound_members() {
        let c = g(32, &[1, 4, 6, 8]);
        let cert = quad_layout(&c).unwrap();
        assert!(assemble_quad_family(&c, &cert, true).is_err());
        let rep = embed_quad_family(&c, &cert).unwrap().trace().unwrap();
        assert_eq!(rep.genus, 17);
        assert!(rep.all_faces_of_size(4));
    }
}
