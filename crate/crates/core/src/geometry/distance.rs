//! Point-to-body and Hausdorff distances.
//!
//! Point-to-body distance runs a Gilbert-style support iteration: keep a
//! simplex of at most three body vertices, project the query point onto it
//! exactly, and refine with the support vertex in the direction of the
//! residual until no support vertex improves past 1e-12 stationarity. On a
//! polytope each step picks a new vertex, so the loop terminates.

use super::{add, cross, dot, norm, sub, ConvexBody, Pt};

const STATIONARY_EPS: f64 = 1e-12;

/// Closest point of a simplex (1..=3 points) to `q`, together with the
/// vertices of the minimal face containing it.
fn closest_on_simplex(simplex: &[Pt], q: Pt) -> (Pt, Vec<Pt>) {
    match simplex.len() {
        1 => (simplex[0], vec![simplex[0]]),
        2 => closest_on_segment(simplex[0], simplex[1], q),
        _ => closest_on_triangle(simplex[0], simplex[1], simplex[2], q),
    }
}

fn closest_on_segment(a: Pt, b: Pt, q: Pt) -> (Pt, Vec<Pt>) {
    let ab = sub(b, a);
    let len2 = dot(ab, ab);
    if len2 == 0.0 {
        return (a, vec![a]);
    }
    let t = dot(sub(q, a), ab) / len2;
    if t <= 0.0 {
        (a, vec![a])
    } else if t >= 1.0 {
        (b, vec![b])
    } else {
        (add(a, [t * ab[0], t * ab[1]]), vec![a, b])
    }
}

fn closest_on_triangle(a: Pt, b: Pt, c: Pt, q: Pt) -> (Pt, Vec<Pt>) {
    // Degenerate triangles reduce to the best edge.
    let area = cross(a, b, c);
    let scale = norm(sub(b, a)).max(norm(sub(c, a))).max(1.0);
    if area.abs() <= f64::EPSILON * scale * scale {
        let (p1, f1) = closest_on_segment(a, b, q);
        let (p2, f2) = closest_on_segment(a, c, q);
        let (p3, f3) = closest_on_segment(b, c, q);
        let d1 = norm(sub(q, p1));
        let d2 = norm(sub(q, p2));
        let d3 = norm(sub(q, p3));
        return if d1 <= d2 && d1 <= d3 {
            (p1, f1)
        } else if d2 <= d3 {
            (p2, f2)
        } else {
            (p3, f3)
        };
    }
    // Inside test via consistent orientation of the three edge turns.
    let s1 = cross(a, b, q) * area.signum();
    let s2 = cross(b, c, q) * area.signum();
    let s3 = cross(c, a, q) * area.signum();
    if s1 >= 0.0 && s2 >= 0.0 && s3 >= 0.0 {
        return (q, vec![a, b, c]);
    }
    let (p1, f1) = closest_on_segment(a, b, q);
    let (p2, f2) = closest_on_segment(b, c, q);
    let (p3, f3) = closest_on_segment(c, a, q);
    let d1 = norm(sub(q, p1));
    let d2 = norm(sub(q, p2));
    let d3 = norm(sub(q, p3));
    if d1 <= d2 && d1 <= d3 {
        (p1, f1)
    } else if d2 <= d3 {
        (p2, f2)
    } else {
        (p3, f3)
    }
}

/// Euclidean distance from `q` to the body.
pub(crate) fn point_body_distance(q: Pt, body: &ConvexBody) -> f64 {
    let pts = body.planar();
    if pts.len() == 1 {
        return norm(sub(q, pts[0]));
    }
    let eps = STATIONARY_EPS * (1.0 + norm(q) + body.body_norm());

    // Seed with the support vertex toward q from the vertex centroid.
    let seed_dir = sub(q, body.vertex_centroid());
    let mut simplex = vec![support_vertex(pts, seed_dir)];
    // Each iteration either terminates or adds a strictly better support
    // vertex; bound the loop defensively anyway.
    for _ in 0..(pts.len() + 4) {
        let (v, face) = closest_on_simplex(&simplex, q);
        let dir = sub(q, v);
        let dist = norm(dir);
        if dist <= eps {
            return 0.0;
        }
        let s = support_vertex(pts, dir);
        // No vertex extends farther along dir than the current closest
        // point: stationarity reached.
        if dot(dir, sub(s, v)) <= eps * dist {
            return dist;
        }
        simplex = face;
        if !simplex.iter().any(|p| p == &s) {
            simplex.push(s);
        } else {
            return dist;
        }
        if simplex.len() > 3 {
            simplex.remove(0);
        }
    }
    let (v, _) = closest_on_simplex(&simplex, q);
    norm(sub(q, v))
}

fn support_vertex(pts: &[Pt], dir: Pt) -> Pt {
    let mut best = pts[0];
    let mut best_val = dot(best, dir);
    for p in &pts[1..] {
        let val = dot(*p, dir);
        if val > best_val {
            best_val = val;
            best = *p;
        }
    }
    best
}

/// Directed Hausdorff sup_{a in A} d(a, B); the sup of a convex function
/// over A is attained at a vertex.
pub(crate) fn directed(a: &ConvexBody, b: &ConvexBody) -> f64 {
    a.planar()
        .iter()
        .map(|p| point_body_distance(*p, b))
        .fold(0.0, f64::max)
}

pub(crate) fn hausdorff(a: &ConvexBody, b: &ConvexBody) -> f64 {
    directed(a, b).max(directed(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Direction;

    #[test]
    fn interval_hausdorff() {
        let a = ConvexBody::interval(0.0, 1.0).unwrap();
        let b = ConvexBody::interval(2.0, 5.0).unwrap();
        assert_eq!(a.hausdorff_distance(&b).unwrap(), 4.0);
        assert_eq!(a.hausdorff_distance(&a).unwrap(), 0.0);
    }

    #[test]
    fn nested_squares_hausdorff() {
        let small = ConvexBody::square([0.0, 0.0], 2.0).unwrap();
        let big = ConvexBody::square([0.0, 0.0], 4.0).unwrap();
        // farthest vertex (2,2) projects to (1,1)
        let d = small.hausdorff_distance(&big).unwrap();
        assert!((d - 2.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn interior_point_distance_zero() {
        let sq = ConvexBody::square([0.0, 0.0], 2.0).unwrap();
        assert_eq!(sq.point_distance(&[0.3, -0.7]).unwrap(), 0.0);
        assert!(sq.contains(&[1.0, 1.0], 1e-9).unwrap());
        assert!(!sq.contains(&[1.1, 1.0], 1e-9).unwrap());
    }

    #[test]
    fn exterior_point_distance_matches_edge_projection() {
        let sq = ConvexBody::square([0.0, 0.0], 2.0).unwrap();
        assert!((sq.point_distance(&[3.0, 0.0]).unwrap() - 2.0).abs() < 1e-12);
        assert!((sq.point_distance(&[2.0, 2.0]).unwrap() - 2.0f64.sqrt()).abs() < 1e-12);
        let seg = ConvexBody::new(2, &[vec![0.0, 0.0], vec![2.0, 0.0]]).unwrap();
        assert!((seg.point_distance(&[1.0, 1.5]).unwrap() - 1.5).abs() < 1e-12);
        assert!((seg.point_distance(&[-3.0, 4.0]).unwrap() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn hausdorff_equals_support_gap_on_direction_grid() {
        // For convex compacts, h(A,B) = sup_w |h_A(w) - h_B(w)|; a 720
        // direction grid reproduces it up to grid resolution.
        let a = ConvexBody::new(2, &[vec![0.0, 0.0], vec![2.0, 0.2], vec![1.0, 1.5]]).unwrap();
        let b = ConvexBody::square([0.5, 0.1], 1.6).unwrap();
        let h = a.hausdorff_distance(&b).unwrap();
        let mut grid_sup: f64 = 0.0;
        for k in 0..720 {
            let w = Direction::from_angle(k as f64 * std::f64::consts::TAU / 720.0);
            grid_sup = grid_sup.max((a.support(&w) - b.support(&w)).abs());
        }
        let grid_err = 5e-3 * (a.body_norm() + b.body_norm()) + 1e-9;
        assert!(grid_sup <= h + 1e-12);
        assert!(h - grid_sup <= grid_err, "h={h} grid={grid_sup}");
    }
}
