//! Exact arithmetic and metric geometry for nonempty compact convex subsets
//! of R^d, d in {1, 2}.
//!
//! Bodies are stored as canonical vertex lists (V-representation). All
//! operations are pure; a body is immutable after construction. Internally
//! every body lives in the plane: a 1-dimensional body is a point or a
//! segment on the x-axis, which lets the 2D hull / distance / erosion code
//! handle both dimensions through one path.

mod distance;
mod erosion;

pub use erosion::grid_directions;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Canonicalization tolerance: absolute vertex dedup / collinearity slack.
pub const CANON_TOL: f64 = 1e-10;

/// Internal planar point.
pub(crate) type Pt = [f64; 2];

#[inline]
pub(crate) fn dot(a: Pt, b: Pt) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub(crate) fn sub(a: Pt, b: Pt) -> Pt {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub(crate) fn add(a: Pt, b: Pt) -> Pt {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
pub(crate) fn norm(a: Pt) -> f64 {
    a[0].hypot(a[1])
}

/// Signed double area of the triangle (a, b, c); positive for a left turn.
#[inline]
pub(crate) fn cross(a: Pt, b: Pt, c: Pt) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

/// A unit direction in R^d.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    dim: usize,
    v: Pt,
}

impl Direction {
    /// Builds a direction from components, normalizing to unit length.
    pub fn new(components: &[f64]) -> Result<Self> {
        let dim = components.len();
        if dim == 0 || dim > 2 {
            return Err(Error::UnsupportedDimension(dim));
        }
        let v = embed(components);
        let n = norm(v);
        if !n.is_finite() || n == 0.0 {
            return Err(Error::InvalidParameter(
                "direction must be a nonzero finite vector".into(),
            ));
        }
        Ok(Self {
            dim,
            v: [v[0] / n, v[1] / n],
        })
    }

    /// Planar direction from an angle (dim 2).
    pub fn from_angle(theta: f64) -> Self {
        Self {
            dim: 2,
            v: [theta.cos(), theta.sin()],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub(crate) fn pt(&self) -> Pt {
        self.v
    }

    pub fn components(&self) -> Vec<f64> {
        self.v[..self.dim].to_vec()
    }
}

fn embed(coords: &[f64]) -> Pt {
    match coords.len() {
        1 => [coords[0], 0.0],
        _ => [coords[0], coords[1]],
    }
}

/// A nonempty compact convex subset of R^d given by its extreme points.
///
/// Canonical form (enforced by every constructor):
/// - vertices deduplicated within [`CANON_TOL`], only extreme points kept;
/// - a single point, or a segment with lexicographically ordered endpoints,
///   or a polygon in strict counterclockwise order starting at the
///   lexicographically smallest vertex;
/// - dim-1 bodies lie on the x-axis.
///
/// Two bodies built from vertex sets describing the same set (within
/// tolerance) therefore compare equal.
#[derive(Debug, Clone)]
pub struct ConvexBody {
    dim: usize,
    pts: Vec<Pt>,
    tol: f64,
}

impl PartialEq for ConvexBody {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.pts == other.pts
    }
}

impl ConvexBody {
    /// Builds a body from raw vertices (each of length `dim`); the convex
    /// hull of the input is taken and canonicalized.
    pub fn new(dim: usize, vertices: &[Vec<f64>]) -> Result<Self> {
        if dim == 0 || dim > 2 {
            return Err(Error::UnsupportedDimension(dim));
        }
        if vertices.is_empty() {
            return Err(Error::EmptyVertices);
        }
        let mut pts = Vec::with_capacity(vertices.len());
        for v in vertices {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidBody("non-finite vertex coordinate".into()));
            }
            pts.push(embed(v));
        }
        Ok(Self::from_planar(dim, pts))
    }

    /// Internal constructor from planar points (already embedded).
    pub(crate) fn from_planar(dim: usize, pts: Vec<Pt>) -> Self {
        let pts = canonical_hull(pts, CANON_TOL);
        debug_assert!(!pts.is_empty());
        Self {
            dim,
            pts,
            tol: CANON_TOL,
        }
    }

    /// The closed interval [lo, hi] in R^1.
    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::InvalidParameter(format!(
                "invalid interval [{lo}, {hi}]"
            )));
        }
        Ok(Self::from_planar(1, vec![[lo, 0.0], [hi, 0.0]]))
    }

    /// A single point in R^d.
    pub fn point(coords: &[f64]) -> Result<Self> {
        Self::new(coords.len(), &[coords.to_vec()])
    }

    /// The singleton {0} in R^d.
    pub fn zero(dim: usize) -> Result<Self> {
        Self::point(&vec![0.0; dim])
    }

    /// Axis-aligned square of the given side length centered at `center`.
    pub fn square(center: [f64; 2], side: f64) -> Result<Self> {
        if !(side.is_finite() && side >= 0.0) {
            return Err(Error::InvalidParameter(format!("invalid side {side}")));
        }
        let r = side / 2.0;
        let [cx, cy] = center;
        Self::new(
            2,
            &[
                vec![cx - r, cy - r],
                vec![cx + r, cy - r],
                vec![cx + r, cy + r],
                vec![cx - r, cy + r],
            ],
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Canonical vertices, one `Vec<f64>` of length `dim` per extreme point.
    pub fn vertices(&self) -> Vec<Vec<f64>> {
        self.pts.iter().map(|p| p[..self.dim].to_vec()).collect()
    }

    pub(crate) fn planar(&self) -> &[Pt] {
        &self.pts
    }

    pub fn vertex_count(&self) -> usize {
        self.pts.len()
    }

    pub fn is_point(&self) -> bool {
        self.pts.len() == 1
    }

    /// Interval endpoints (lo, hi) of a dim-1 body.
    pub fn endpoints(&self) -> Result<(f64, f64)> {
        if self.dim != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: self.dim,
            });
        }
        let lo = self.pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
        let hi = self
            .pts
            .iter()
            .map(|p| p[0])
            .fold(f64::NEG_INFINITY, f64::max);
        Ok((lo, hi))
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(())
    }

    /// Support value sup { <w, x> : x in A }; exact for polytopes.
    pub fn support(&self, w: &Direction) -> f64 {
        let wv = w.pt();
        self.pts
            .iter()
            .map(|p| dot(*p, wv))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Support over a raw (not necessarily unit) planar direction.
    pub(crate) fn support_pt(&self, w: Pt) -> f64 {
        self.pts
            .iter()
            .map(|p| dot(*p, w))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Minkowski sum A + B = {a + b}: hull of pairwise vertex sums.
    pub fn minkowski_sum(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let mut sums = Vec::with_capacity(self.pts.len() * other.pts.len());
        for a in &self.pts {
            for b in &other.pts {
                sums.push(add(*a, *b));
            }
        }
        Ok(Self::from_planar(self.dim, sums))
    }

    /// Scalar multiple alpha * A; alpha < 0 reflects the body.
    pub fn scale(&self, alpha: f64) -> Self {
        let pts = self
            .pts
            .iter()
            .map(|p| [alpha * p[0], alpha * p[1]])
            .collect();
        Self::from_planar(self.dim, pts)
    }

    /// Translate by a vector of length `dim`.
    pub fn translate(&self, shift: &[f64]) -> Result<Self> {
        if shift.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: shift.len(),
            });
        }
        let s = embed(shift);
        let pts = self.pts.iter().map(|p| add(*p, s)).collect();
        Ok(Self::from_planar(self.dim, pts))
    }

    /// ||A|| = h(A, {0}) = max vertex Euclidean norm.
    pub fn body_norm(&self) -> f64 {
        self.pts.iter().map(|p| norm(*p)).fold(0.0, f64::max)
    }

    /// Centroid of the vertex list (a point of the body; used for probes).
    pub(crate) fn vertex_centroid(&self) -> Pt {
        let n = self.pts.len() as f64;
        let mut c = [0.0, 0.0];
        for p in &self.pts {
            c = add(c, *p);
        }
        [c[0] / n, c[1] / n]
    }

    /// Euclidean distance from a point (length `dim`) to the body.
    pub fn point_distance(&self, q: &[f64]) -> Result<f64> {
        if q.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: q.len(),
            });
        }
        Ok(distance::point_body_distance(embed(q), self))
    }

    /// Membership within `slack`.
    pub fn contains(&self, q: &[f64], slack: f64) -> Result<bool> {
        Ok(self.point_distance(q)? <= slack)
    }

    /// Hausdorff distance h(A, B) = max of the two directed distances; each
    /// directed distance is the max over vertices of point-to-body distance.
    pub fn hausdorff_distance(&self, other: &Self) -> Result<f64> {
        self.check_same_dim(other)?;
        Ok(distance::hausdorff(self, other))
    }

    /// Directed Hausdorff distance sup_{a in A} d(a, B); zero iff A is
    /// contained in B.
    pub fn directed_hausdorff(&self, other: &Self) -> Result<f64> {
        self.check_same_dim(other)?;
        Ok(distance::directed(self, other))
    }

    /// Geometric difference (erosion) A -. B = { x : x + B subset A }.
    /// Returns `None` when the erosion is empty. Exact for d in {1, 2}.
    pub fn geometric_difference(&self, other: &Self) -> Result<Option<Self>> {
        self.check_same_dim(other)?;
        Ok(erosion::erode(self, other))
    }

    /// Hukuhara difference: the unique C with A = B + C, when it exists.
    ///
    /// Computed as the erosion E = A -. B followed by the reconstruction
    /// test h(E + B, A) <= eps with eps = 1e-9 * max(1, ||A||); `None`
    /// signals that no such C exists.
    pub fn hukuhara_difference(&self, other: &Self) -> Result<Option<Self>> {
        self.check_same_dim(other)?;
        let eroded = match erosion::erode(self, other) {
            Some(e) => e,
            None => return Ok(None),
        };
        let eps = hukuhara_eps(self);
        let rebuilt = eroded.minkowski_sum(other)?;
        if distance::hausdorff(&rebuilt, self) <= eps {
            Ok(Some(eroded))
        } else {
            Ok(None)
        }
    }

    /// Equality of sets within `tol` (Hausdorff).
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim == other.dim && distance::hausdorff(self, other) <= tol
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }
}

/// Existence slack for the Hukuhara reconstruction test, scale-robust.
pub fn hukuhara_eps(a: &ConvexBody) -> f64 {
    1e-9 * a.body_norm().max(1.0)
}

/// Probability-weighted Minkowski average sum_i w_i * bodies_i.
///
/// Weights must be nonnegative and sum to 1 within 1e-12. This is the
/// Aumann integral of a finite convex-valued map over a finite measure
/// space.
pub fn weighted_minkowski_average(bodies: &[ConvexBody], weights: &[f64]) -> Result<ConvexBody> {
    if bodies.is_empty() {
        return Err(Error::EmptyVertices);
    }
    if bodies.len() != weights.len() {
        return Err(Error::InvalidParameter(format!(
            "{} bodies vs {} weights",
            bodies.len(),
            weights.len()
        )));
    }
    let dim = bodies[0].dim;
    if weights.iter().any(|w| *w < -1e-15 || !w.is_finite()) {
        return Err(Error::InvalidParameter("negative weight".into()));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "weights sum to {total}, expected 1"
        )));
    }
    let mut acc = ConvexBody::zero(dim)?;
    for (body, w) in bodies.iter().zip(weights) {
        if body.dim != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: body.dim,
            });
        }
        acc = acc.minkowski_sum(&body.scale(*w))?;
    }
    Ok(acc)
}

/// Canonical hull of planar points: dedup within `tol`, Andrew monotone
/// chain with strict turns (no three collinear within `tol`), CCW order,
/// lexicographically smallest vertex first.
fn canonical_hull(mut pts: Vec<Pt>, tol: f64) -> Vec<Pt> {
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // Cluster-dedup: near-duplicates need not be adjacent in lex order
    // (coordinate jitter can interleave clusters), so scan against all
    // kept points. Keeps the lexicographically smallest representative.
    let mut kept: Vec<Pt> = Vec::with_capacity(pts.len());
    for p in pts {
        if !kept.iter().any(|q| norm(sub(p, *q)) <= tol) {
            kept.push(p);
        }
    }
    let pts = kept;
    if pts.len() == 1 {
        return pts;
    }

    // Collinearity test: perpendicular deviation of the middle point from
    // the chord is within tol (cross = deviation * chord length).
    let turn_eps = |o: Pt, b: Pt| tol * norm(sub(b, o));

    let mut lower: Vec<Pt> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2
            && cross(lower[lower.len() - 2], lower[lower.len() - 1], p)
                <= turn_eps(lower[lower.len() - 2], p)
        {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Pt> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2
            && cross(upper[upper.len() - 2], upper[upper.len() - 1], p)
                <= turn_eps(upper[upper.len() - 2], p)
        {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    let mut hull = lower;
    hull.extend(upper);
    if hull.len() < 2 {
        // All input points collinear within tolerance: keep the two
        // lexicographic extremes (or a single point).
        let first = pts[0];
        let last = pts[pts.len() - 1];
        if norm(sub(last, first)) <= tol {
            return vec![first];
        }
        return vec![first, last];
    }
    // hull starts at the lexicographic minimum by construction of the chain
    hull
}

#[derive(Serialize, Deserialize)]
struct BodyWire {
    dim: usize,
    vertices: Vec<Vec<f64>>,
}

impl Serialize for ConvexBody {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        BodyWire {
            dim: self.dim,
            vertices: self.vertices(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ConvexBody {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = BodyWire::deserialize(deserializer)?;
        ConvexBody::new(wire.dim, &wire.vertices).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri() -> ConvexBody {
        ConvexBody::new(2, &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap()
    }

    #[test]
    fn canonical_form_is_input_order_independent() {
        let a = ConvexBody::new(
            2,
            &[
                vec![0.0, 1.0],
                vec![1.0, 0.0],
                vec![0.0, 0.0],
                vec![0.5, 0.25], // interior
                vec![0.5, 0.5],  // on an edge
            ],
        )
        .unwrap();
        assert_eq!(a, tri());
        assert_eq!(a.vertex_count(), 3);
    }

    #[test]
    fn support_examples() {
        let a = ConvexBody::interval(-2.0, 3.0).unwrap();
        assert_eq!(a.support(&Direction::new(&[1.0]).unwrap()), 3.0);

        let sq = ConvexBody::square([0.0, 0.0], 2.0).unwrap();
        assert_eq!(sq.support(&Direction::new(&[1.0, 0.0]).unwrap()), 1.0);

        let w = Direction::new(&[1.0, 1.0]).unwrap();
        // max over the three vertices of <w, v> = 1/sqrt(2)
        let expect = 1.0 / 2.0f64.sqrt();
        assert!((tri().support(&w) - expect).abs() < 1e-15);
    }

    #[test]
    fn minkowski_sum_examples() {
        let a = ConvexBody::interval(0.0, 1.0).unwrap();
        let b = ConvexBody::interval(2.0, 5.0).unwrap();
        let s = a.minkowski_sum(&b).unwrap();
        assert_eq!(s.endpoints().unwrap(), (2.0, 6.0));

        let sq = ConvexBody::square([0.0, 0.0], 2.0).unwrap();
        let s2 = sq.minkowski_sum(&sq).unwrap();
        assert_eq!(s2, ConvexBody::square([0.0, 0.0], 4.0).unwrap());

        // triangle + horizontal segment: hull of the six pairwise sums
        let seg = ConvexBody::new(2, &[vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let s3 = tri().minkowski_sum(&seg).unwrap();
        let expect = ConvexBody::new(
            2,
            &[vec![0.0, 0.0], vec![2.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]],
        )
        .unwrap();
        assert_eq!(s3, expect);
    }

    #[test]
    fn scale_examples() {
        let a = ConvexBody::interval(0.0, 1.0).unwrap();
        assert_eq!(a.scale(1.0), a);
        assert_eq!(a.scale(-1.0).endpoints().unwrap(), (-1.0, 0.0));
        let sq = ConvexBody::square([0.0, 0.0], 2.0).unwrap();
        assert_eq!(sq.scale(0.5), ConvexBody::square([0.0, 0.0], 1.0).unwrap());
    }

    #[test]
    fn support_additive_under_minkowski_sum() {
        let a = tri();
        let b = ConvexBody::square([0.25, -0.5], 3.0).unwrap();
        let s = a.minkowski_sum(&b).unwrap();
        for k in 0..32 {
            let w = Direction::from_angle(k as f64 * std::f64::consts::TAU / 32.0);
            assert!((s.support(&w) - (a.support(&w) + b.support(&w))).abs() < 1e-12);
        }
    }

    #[test]
    fn body_norm_examples() {
        assert_eq!(ConvexBody::interval(-2.0, 3.0).unwrap().body_norm(), 3.0);
        assert_eq!(ConvexBody::zero(2).unwrap().body_norm(), 0.0);
        assert!((tri().body_norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn weighted_average_examples() {
        let b1 = ConvexBody::interval(0.0, 2.0).unwrap();
        let b2 = ConvexBody::interval(4.0, 6.0).unwrap();
        let avg = weighted_minkowski_average(&[b1.clone(), b2], &[0.5, 0.5]).unwrap();
        assert_eq!(avg.endpoints().unwrap(), (2.0, 4.0));

        let single = weighted_minkowski_average(&[b1.clone()], &[1.0]).unwrap();
        assert_eq!(single, b1);

        let sq = ConvexBody::square([0.0, 0.0], 4.0).unwrap();
        let pt = ConvexBody::point(&[8.0, 8.0]).unwrap();
        let avg2 = weighted_minkowski_average(&[sq, pt], &[0.25, 0.75]).unwrap();
        assert_eq!(avg2, ConvexBody::square([6.0, 6.0], 1.0).unwrap());
    }

    #[test]
    fn weighted_average_rejects_bad_weights() {
        let b = ConvexBody::interval(0.0, 1.0).unwrap();
        assert!(weighted_minkowski_average(&[b.clone(), b.clone()], &[0.7, 0.7]).is_err());
        assert!(weighted_minkowski_average(&[b.clone()], &[-1.0]).is_err());
        assert!(weighted_minkowski_average(&[b], &[0.5, 0.5]).is_err());
    }

    #[test]
    fn dim_mismatch_rejected() {
        let a = ConvexBody::interval(0.0, 1.0).unwrap();
        let b = ConvexBody::square([0.0, 0.0], 1.0).unwrap();
        assert!(a.minkowski_sum(&b).is_err());
        assert!(a.hausdorff_distance(&b).is_err());
    }

    #[test]
    fn serde_round_trip_recanonicalizes() {
        let a = tri();
        let js = serde_json::to_string(&a).unwrap();
        let back: ConvexBody = serde_json::from_str(&js).unwrap();
        assert_eq!(a, back);

        // raw JSON with redundant vertices canonicalizes on load
        let raw = r#"{"dim":1,"vertices":[[1.0],[0.0],[0.5],[1.0]]}"#;
        let b: ConvexBody = serde_json::from_str(raw).unwrap();
        assert_eq!(b, ConvexBody::interval(0.0, 1.0).unwrap());
    }

    #[test]
    fn unsupported_dimension_rejected() {
        assert!(ConvexBody::new(3, &[vec![0.0, 0.0, 0.0]]).is_err());
        assert!(ConvexBody::new(0, &[vec![]]).is_err());
    }
}
