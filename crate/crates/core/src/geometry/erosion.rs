//! Geometric difference (erosion) of convex bodies.
//!
//! A -. B = { x : x + B subset A }. A compact convex A is exactly the
//! intersection of its supporting halfplanes <n_i, x> <= c_i, so
//!
//!   x + B subset A  <=>  <n_i, x> <= c_i - h_B(n_i)  for every facet i,
//!
//! which makes the erosion the (possibly empty) polyhedron cut out by the
//! shifted facets. Full-dimensional polygons contribute one halfplane per
//! edge; segments and points are pinned by two pairs of opposing supports,
//! so the same formula stays exact for degenerate bodies.

use super::{cross, dot, norm, sub, ConvexBody, Direction, Pt};

/// Unit outward normal plus offset: the halfplane <n, x> <= c.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Halfplane {
    pub n: Pt,
    pub c: f64,
}

/// Supporting halfplanes whose intersection is exactly the body.
pub(crate) fn supporting_halfplanes(body: &ConvexBody) -> Vec<Halfplane> {
    let pts = body.planar();
    match pts.len() {
        1 => {
            let p = pts[0];
            vec![
                Halfplane { n: [1.0, 0.0], c: p[0] },
                Halfplane { n: [-1.0, 0.0], c: -p[0] },
                Halfplane { n: [0.0, 1.0], c: p[1] },
                Halfplane { n: [0.0, -1.0], c: -p[1] },
            ]
        }
        2 => {
            let (a, b) = (pts[0], pts[1]);
            let u = sub(b, a);
            let len = norm(u);
            let u = [u[0] / len, u[1] / len];
            let n = [-u[1], u[0]];
            vec![
                Halfplane { n, c: dot(n, a) },
                Halfplane { n: [-n[0], -n[1]], c: -dot(n, a) },
                Halfplane { n: u, c: dot(u, b) },
                Halfplane { n: [-u[0], -u[1]], c: -dot(u, a) },
            ]
        }
        k => {
            // CCW polygon: edge p -> q has outward normal (dy, -dx).
            let mut out = Vec::with_capacity(k);
            for i in 0..k {
                let p = pts[i];
                let q = pts[(i + 1) % k];
                let e = sub(q, p);
                let len = norm(e);
                let n = [e[1] / len, -e[0] / len];
                out.push(Halfplane { n, c: dot(n, p) });
            }
            out
        }
    }
}

/// Erosion of `a` by `b`; `None` when the constraint system is infeasible.
///
/// Vertices of the (bounded) feasible polyhedron are recovered as the
/// pairwise boundary intersections that satisfy every constraint; tolerance
/// on feasibility is kept an order below the Hukuhara existence slack so a
/// spurious near-feasible vertex cannot flip an existence verdict.
pub(crate) fn erode(a: &ConvexBody, b: &ConvexBody) -> Option<ConvexBody> {
    let planes: Vec<Halfplane> = supporting_halfplanes(a)
        .into_iter()
        .map(|hp| Halfplane {
            n: hp.n,
            c: hp.c - b.support_pt(hp.n),
        })
        .collect();
    let feas = 1e-10 * (1.0 + a.body_norm());

    let mut candidates: Vec<Pt> = Vec::new();
    let m = planes.len();
    for i in 0..m {
        for j in (i + 1)..m {
            let p = match line_intersection(planes[i], planes[j]) {
                Some(p) => p,
                None => continue,
            };
            if planes.iter().all(|hp| dot(hp.n, p) <= hp.c + feas) {
                candidates.push(p);
            }
        }
    }
    if candidates.is_empty() {
        return None;
    }
    Some(ConvexBody::from_planar(a.dim(), candidates))
}

/// Intersection of the boundary lines of two halfplanes with unit normals;
/// `None` for (near-)parallel lines.
fn line_intersection(h1: Halfplane, h2: Halfplane) -> Option<Pt> {
    let det = h1.n[0] * h2.n[1] - h1.n[1] * h2.n[0];
    if det.abs() < 1e-12 {
        return None;
    }
    Some([
        (h1.c * h2.n[1] - h2.c * h1.n[1]) / det,
        (h1.n[0] * h2.c - h2.n[0] * h1.c) / det,
    ])
}

/// Evenly spaced planar unit directions (used by grid cross-checks).
pub fn grid_directions(count: usize) -> Vec<Direction> {
    (0..count)
        .map(|k| Direction::from_angle(k as f64 * std::f64::consts::TAU / count as f64))
        .collect()
}

/// Debug aid: checks that the canonical polygon is strictly convex CCW.
#[allow(dead_code)]
pub(crate) fn is_strictly_ccw(body: &ConvexBody) -> bool {
    let pts = body.planar();
    if pts.len() < 3 {
        return true;
    }
    (0..pts.len()).all(|i| {
        cross(
            pts[i],
            pts[(i + 1) % pts.len()],
            pts[(i + 2) % pts.len()],
        ) > 0.0
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::hukuhara_eps;

    #[test]
    fn interval_erosion() {
        let a = ConvexBody::interval(2.0, 6.0).unwrap();
        let b = ConvexBody::interval(2.0, 5.0).unwrap();
        let e = a.geometric_difference(&b).unwrap().unwrap();
        assert_eq!(e.endpoints().unwrap(), (0.0, 1.0));

        let a2 = ConvexBody::interval(0.0, 1.0).unwrap();
        let b2 = ConvexBody::interval(0.0, 2.0).unwrap();
        assert!(a2.geometric_difference(&b2).unwrap().is_none());
    }

    #[test]
    fn square_erosion() {
        let a = ConvexBody::square([0.0, 0.0], 4.0).unwrap();
        let b = ConvexBody::square([0.0, 0.0], 2.0).unwrap();
        let e = a.geometric_difference(&b).unwrap().unwrap();
        assert_eq!(e, ConvexBody::square([0.0, 0.0], 2.0).unwrap());
    }

    #[test]
    fn hukuhara_examples() {
        let a = ConvexBody::interval(2.0, 6.0).unwrap();
        let b = ConvexBody::interval(2.0, 5.0).unwrap();
        let c = a.hukuhara_difference(&b).unwrap().unwrap();
        assert_eq!(c.endpoints().unwrap(), (0.0, 1.0));

        // A - A = {0}
        let tri = ConvexBody::new(2, &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let z = tri.hukuhara_difference(&tri).unwrap().unwrap();
        assert!(z.approx_eq(&ConvexBody::zero(2).unwrap(), 1e-12));

        // A - {0} = A
        let z0 = ConvexBody::zero(2).unwrap();
        assert_eq!(tri.hukuhara_difference(&z0).unwrap().unwrap(), tri);

        // triangle minus its 90-degree rotation: erosion reconstructs short
        let rot = ConvexBody::new(2, &[vec![0.0, 0.0], vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        assert!(tri.hukuhara_difference(&rot).unwrap().is_none());
        // and the gap the reconstruction test sees is genuinely positive
        if let Some(e) = tri.geometric_difference(&rot).unwrap() {
            let rebuilt = e.minkowski_sum(&rot).unwrap();
            assert!(rebuilt.hausdorff_distance(&tri).unwrap() > hukuhara_eps(&tri));
        }
    }

    #[test]
    fn degenerate_erosions_are_exact() {
        // point minus point
        let p = ConvexBody::point(&[3.0, -1.0]).unwrap();
        let q = ConvexBody::point(&[1.0, 1.0]).unwrap();
        let e = p.geometric_difference(&q).unwrap().unwrap();
        assert_eq!(e, ConvexBody::point(&[2.0, -2.0]).unwrap());
        // point minus non-point is empty
        let seg = ConvexBody::new(2, &[vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert!(p.geometric_difference(&seg).unwrap().is_none());

        // segment minus parallel shorter segment
        let long = ConvexBody::new(2, &[vec![0.0, 0.0], vec![3.0, 0.0]]).unwrap();
        let e2 = long.geometric_difference(&seg).unwrap().unwrap();
        assert_eq!(e2, ConvexBody::new(2, &[vec![0.0, 0.0], vec![2.0, 0.0]]).unwrap());
        // segment minus transverse segment is empty
        let vert = ConvexBody::new(2, &[vec![0.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(long.geometric_difference(&vert).unwrap().is_none());

        // full polygon eroded to a point: A - A for a triangle
        let tri = ConvexBody::new(2, &[vec![0.0, 0.0], vec![2.0, 0.0], vec![0.0, 2.0]]).unwrap();
        let z = tri.geometric_difference(&tri).unwrap().unwrap();
        assert!(z.approx_eq(&ConvexBody::zero(2).unwrap(), 1e-9));
    }

    #[test]
    fn erosion_against_constructed_sum() {
        // A = B + C  =>  A -. B = C, exactly recovered
        let b = ConvexBody::new(2, &[vec![0.0, 0.0], vec![1.0, 0.2], vec![0.3, 1.0]]).unwrap();
        let c = ConvexBody::square([0.5, -0.25], 1.5).unwrap();
        let a = b.minkowski_sum(&c).unwrap();
        let e = a.geometric_difference(&b).unwrap().unwrap();
        assert!(e.approx_eq(&c, 1e-10));
        assert!(a.hukuhara_difference(&b).unwrap().unwrap().approx_eq(&c, 1e-10));
    }
}
