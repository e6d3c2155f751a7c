//! Independent brute-force oracles.
//!
//! Everything here recomputes quantities the main modules produce, through
//! deliberately different code paths: scalar endpoint recursions instead of
//! body arithmetic, exhaustive selection enumeration instead of Minkowski
//! formulas, grid/edge-normal halfplane erosion instead of the facet-based
//! one, and edge-projection distances instead of the support iteration.
//! The verification suites and acceptance tests compare against these.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::ConvexBody;

/// Cap on tree depth for the enumeration oracles.
pub const ORACLE_DEPTH_CAP: usize = 12;

// ---------------------------------------------------------------------------
// scalar interval BSDE oracle
// ---------------------------------------------------------------------------

/// Endpoints of an affine-driver interval BSDE solution, per level per node.
#[derive(Debug, Clone, Serialize)]
pub struct IntervalSolution {
    pub steps: usize,
    pub horizon: f64,
    pub beta: f64,
    pub g: (f64, f64),
    /// `lo[k][idx]`, `hi[k][idx]` for levels 0..=N.
    pub lo: Vec<Vec<f64>>,
    pub hi: Vec<Vec<f64>>,
}

/// Solves the d=1 BSDE with driver f(t, A) = beta A + [g_lo, g_hi],
/// beta >= 0, by the scalar backward endpoint recursion: the fixed point
/// satisfies per node
///
///   y = (mean of children) + dt (beta y + g)
///
/// for each endpoint separately, i.e. y = (mean + dt g) / (1 - dt beta).
/// Pure f64 arithmetic, no set operations.
pub fn interval_endpoint_recursion(
    steps: usize,
    horizon: f64,
    beta: f64,
    g: (f64, f64),
    terminal_lo: &[f64],
    terminal_hi: &[f64],
) -> Result<IntervalSolution> {
    if steps == 0 || steps > ORACLE_DEPTH_CAP {
        return Err(Error::InvalidParameter(format!(
            "oracle depth must be in 1..={ORACLE_DEPTH_CAP}, got {steps}"
        )));
    }
    if beta < 0.0 {
        return Err(Error::InvalidParameter(
            "the endpoint recursion needs beta >= 0 (interval endpoints would swap)".into(),
        ));
    }
    if g.0 > g.1 {
        return Err(Error::InvalidParameter("driver interval reversed".into()));
    }
    let atoms = 1usize << steps;
    if terminal_lo.len() != atoms || terminal_hi.len() != atoms {
        return Err(Error::InvalidParameter(format!(
            "terminal endpoint vectors must have {atoms} entries"
        )));
    }
    if terminal_lo.iter().zip(terminal_hi).any(|(l, h)| l > h) {
        return Err(Error::InvalidParameter("terminal interval reversed".into()));
    }
    let dt = horizon / steps as f64;
    let denom = 1.0 - dt * beta;
    if denom <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "dt * beta = {} >= 1: implicit step not solvable",
            dt * beta
        )));
    }
    let mut lo = vec![Vec::new(); steps + 1];
    let mut hi = vec![Vec::new(); steps + 1];
    lo[steps] = terminal_lo.to_vec();
    hi[steps] = terminal_hi.to_vec();
    for k in (0..steps).rev() {
        let half = 1usize << k;
        lo[k] = (0..half)
            .map(|i| {
                let mean = 0.5 * (lo[k + 1][i] + lo[k + 1][i | half]);
                (mean + dt * g.0) / denom
            })
            .collect();
        hi[k] = (0..half)
            .map(|i| {
                let mean = 0.5 * (hi[k + 1][i] + hi[k + 1][i | half]);
                (mean + dt * g.1) / denom
            })
            .collect();
    }
    Ok(IntervalSolution {
        steps,
        horizon,
        beta,
        g,
        lo,
        hi,
    })
}

// ---------------------------------------------------------------------------
// selection enumeration for the set-valued Ito integral (d = 1)
// ---------------------------------------------------------------------------

/// Per-atom value ranges of the Ito integral of an interval-valued process,
/// by exhaustive enumeration of per-node endpoint selections.
#[derive(Debug, Clone, Serialize)]
pub struct ItoEnumeration {
    pub to_index: usize,
    /// (min, max) of the enumerated selection integrals per terminal atom.
    pub ranges: Vec<(f64, f64)>,
    pub selections: u64,
}

/// Enumerates every adapted endpoint selection of an interval process
/// `psi[k][idx] = (lo, hi)` on a depth-`steps` tree with horizon T and sums
/// the +-sqrt(dt)-signed picks along each path.
pub fn enumerate_interval_ito(
    steps: usize,
    horizon: f64,
    psi: &[Vec<(f64, f64)>],
    to_index: usize,
) -> Result<ItoEnumeration> {
    if steps == 0 || steps > ORACLE_DEPTH_CAP || to_index > steps {
        return Err(Error::InvalidParameter(format!(
            "bad enumeration sizes: steps {steps}, to {to_index}"
        )));
    }
    let nodes: usize = (0..to_index).map(|k| 1usize << k).sum();
    if nodes > 20 {
        return Err(Error::EnumerationCap {
            needed: 1u128 << nodes,
            cap: 1 << 20,
        });
    }
    let sqrt_dt = (horizon / steps as f64).sqrt();
    let atoms = 1usize << to_index;
    let mut ranges = vec![(f64::INFINITY, f64::NEG_INFINITY); atoms];
    // global node order: level k node i at position offset(k) + i
    let offset: Vec<usize> = (0..to_index).map(|k| (1usize << k) - 1).collect();
    for mask in 0u64..(1u64 << nodes) {
        for (idx, range) in ranges.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in 0..to_index {
                let node = idx & ((1 << k) - 1);
                let (lo, hi) = psi[k][node];
                let pick = if mask >> (offset[k] + node) & 1 == 1 {
                    hi
                } else {
                    lo
                };
                let sign = if idx & (1 << k) != 0 { 1.0 } else { -1.0 };
                acc += pick * sign * sqrt_dt;
            }
            range.0 = range.0.min(acc);
            range.1 = range.1.max(acc);
        }
    }
    Ok(ItoEnumeration {
        to_index,
        ranges,
        selections: 1 << nodes,
    })
}

// ---------------------------------------------------------------------------
// independent planar geometry (edge projections, standalone hull)
// ---------------------------------------------------------------------------

type P2 = [f64; 2];

fn d2(a: P2, b: P2) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Standalone monotone-chain hull (CCW, no tolerance games); local to the
/// oracle so the checks do not lean on the library hull.
pub fn hull2(points: &[P2]) -> Vec<P2> {
    let mut pts: Vec<P2> = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| d2(*a, *b) <= 1e-12);
    if pts.len() <= 2 {
        return pts;
    }
    let turn = |o: P2, a: P2, b: P2| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut lower: Vec<P2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && turn(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<P2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && turn(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn point_segment_distance(q: P2, a: P2, b: P2) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    if len2 == 0.0 {
        return d2(q, a);
    }
    let t = (((q[0] - a[0]) * ab[0] + (q[1] - a[1]) * ab[1]) / len2).clamp(0.0, 1.0);
    d2(q, [a[0] + t * ab[0], a[1] + t * ab[1]])
}

/// Distance from a point to the hull of `verts` by inside test plus edge
/// projections (no support iteration).
pub fn point_hull_distance(q: P2, verts: &[P2]) -> f64 {
    let hull = hull2(verts);
    match hull.len() {
        0 => f64::INFINITY,
        1 => d2(q, hull[0]),
        2 => point_segment_distance(q, hull[0], hull[1]),
        n => {
            let inside = (0..n).all(|i| {
                let a = hull[i];
                let b = hull[(i + 1) % n];
                (b[0] - a[0]) * (q[1] - a[1]) - (b[1] - a[1]) * (q[0] - a[0]) >= -1e-12
            });
            if inside {
                return 0.0;
            }
            (0..n)
                .map(|i| point_segment_distance(q, hull[i], hull[(i + 1) % n]))
                .fold(f64::INFINITY, f64::min)
        }
    }
}

/// Hausdorff distance between two vertex clouds' hulls via edge-projection
/// distances.
pub fn hausdorff_brute(a: &[P2], b: &[P2]) -> f64 {
    let d_ab = a
        .iter()
        .map(|p| point_hull_distance(*p, b))
        .fold(0.0f64, f64::max);
    let d_ba = b
        .iter()
        .map(|p| point_hull_distance(*p, a))
        .fold(0.0f64, f64::max);
    d_ab.max(d_ba)
}

fn planar_verts(body: &ConvexBody) -> Vec<P2> {
    body.vertices()
        .iter()
        .map(|v| if v.len() == 1 { [v[0], 0.0] } else { [v[0], v[1]] })
        .collect()
}

// ---------------------------------------------------------------------------
// grid + edge-normal erosion and the independent Hukuhara verdict
// ---------------------------------------------------------------------------

/// Erosion of A by B through an independent halfplane path: directions are
/// a fixed angular grid together with A's edge normals (computed directly
/// from the vertex cycle), feasibility is decided on a candidate grid of
/// pairwise line intersections. Returns the feasible vertex cloud.
pub fn erosion_via_grid(a: &ConvexBody, b: &ConvexBody, grid: usize) -> Option<Vec<P2>> {
    let va = planar_verts(a);
    let vb = planar_verts(b);
    let support = |verts: &[P2], w: P2| -> f64 {
        verts
            .iter()
            .map(|p| p[0] * w[0] + p[1] * w[1])
            .fold(f64::NEG_INFINITY, f64::max)
    };

    let mut dirs: Vec<P2> = (0..grid)
        .map(|k| {
            let th = k as f64 * std::f64::consts::TAU / grid as f64;
            [th.cos(), th.sin()]
        })
        .collect();
    // A's own supporting directions, so the intersection is exact and not
    // just an outer grid approximation.
    let hull_a = hull2(&va);
    let m = hull_a.len();
    if m == 1 {
        dirs.extend_from_slice(&[[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]);
    } else {
        for i in 0..m {
            let p = hull_a[i];
            let q = hull_a[(i + 1) % m];
            let e = [q[0] - p[0], q[1] - p[1]];
            let len = e[0].hypot(e[1]);
            if len == 0.0 {
                continue;
            }
            dirs.push([e[1] / len, -e[0] / len]);
            if m == 2 {
                // a segment also needs the reverse side and the end caps
                dirs.push([-e[1] / len, e[0] / len]);
                dirs.push([e[0] / len, e[1] / len]);
                dirs.push([-e[0] / len, -e[1] / len]);
            }
        }
    }

    let planes: Vec<(P2, f64)> = dirs
        .iter()
        .map(|w| (*w, support(&va, *w) - support(&vb, *w)))
        .collect();
    let feas = 1e-10 * (1.0 + support(&va, [1.0, 0.0]).abs().max(1.0))
        .max(1e-10 * (1.0 + va.iter().map(|p| p[0].hypot(p[1])).fold(0.0, f64::max)));

    let mut cands: Vec<P2> = Vec::new();
    for i in 0..planes.len() {
        for j in (i + 1)..planes.len() {
            let (n1, c1) = planes[i];
            let (n2, c2) = planes[j];
            let det = n1[0] * n2[1] - n1[1] * n2[0];
            if det.abs() < 1e-9 {
                continue;
            }
            let p = [
                (c1 * n2[1] - c2 * n1[1]) / det,
                (n1[0] * c2 - n2[0] * c1) / det,
            ];
            if planes
                .iter()
                .all(|(n, c)| n[0] * p[0] + n[1] * p[1] <= c + feas)
            {
                cands.push(p);
            }
        }
    }
    if cands.is_empty() {
        None
    } else {
        Some(hull2(&cands))
    }
}

/// The Hukuhara existence verdict through the oracle path: grid erosion,
/// vertex-cloud Minkowski sum, brute Hausdorff reconstruction test.
pub fn hukuhara_verdict_via_grid(a: &ConvexBody, b: &ConvexBody, grid: usize) -> bool {
    let e = match erosion_via_grid(a, b, grid) {
        Some(e) => e,
        None => return false,
    };
    let vb = planar_verts(b);
    let mut sums = Vec::with_capacity(e.len() * vb.len());
    for p in &e {
        for q in &vb {
            sums.push([p[0] + q[0], p[1] + q[1]]);
        }
    }
    let eps = 1e-9 * a.body_norm().max(1.0);
    hausdorff_brute(&sums, &planar_verts(a)) <= eps
}
