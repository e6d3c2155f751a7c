//! Set-valued random variables and processes on the scenario tree.
//!
//! A `SetRV` assigns a convex body to every atom of one level; a
//! `SetProcess` is one `SetRV` per level. On a finite space the Aumann
//! machinery collapses to per-atom convex geometry: expectations are
//! weighted Minkowski averages, selections are per-atom vertex choices, and
//! decomposable hulls decouple across atoms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{weighted_minkowski_average, ConvexBody};
use crate::tree::{FiltrationTree, VectorRV};

/// Default cap on the number of enumerated vertex selections.
pub const DEFAULT_SELECTION_CAP: u64 = 1_000_000;

/// A set-valued random variable measurable at `level`: one body per atom.
#[derive(Debug, Clone, PartialEq)]
pub struct SetRV {
    pub level: usize,
    pub bodies: Vec<ConvexBody>,
}

impl SetRV {
    pub fn new(level: usize, bodies: Vec<ConvexBody>) -> Result<Self> {
        if bodies.len() != 1usize << level {
            return Err(Error::InvalidParameter(format!(
                "level {level} needs {} bodies, got {}",
                1usize << level,
                bodies.len()
            )));
        }
        let dim = bodies[0].dim();
        if let Some(b) = bodies.iter().find(|b| b.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: b.dim(),
            });
        }
        Ok(Self { level, bodies })
    }

    pub fn constant(level: usize, body: ConvexBody) -> Self {
        Self {
            level,
            bodies: vec![body; 1 << level],
        }
    }

    pub fn from_fn(level: usize, mut f: impl FnMut(usize) -> ConvexBody) -> Self {
        Self {
            level,
            bodies: (0..1usize << level).map(|i| f(i)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.bodies[0].dim()
    }

    pub fn body(&self, idx: usize) -> &ConvexBody {
        &self.bodies[idx]
    }

    /// Atom-wise Minkowski sum.
    pub fn minkowski_sum(&self, other: &SetRV) -> Result<SetRV> {
        if self.level != other.level {
            return Err(Error::LevelOutOfRange {
                level: other.level,
                max: self.level,
            });
        }
        let bodies = self
            .bodies
            .iter()
            .zip(&other.bodies)
            .map(|(a, b)| a.minkowski_sum(b))
            .collect::<Result<_>>()?;
        SetRV::new(self.level, bodies)
    }

    /// Largest per-atom Hausdorff distance to another variable.
    pub fn max_hausdorff(&self, other: &SetRV) -> Result<f64> {
        if self.level != other.level {
            return Err(Error::LevelOutOfRange {
                level: other.level,
                max: self.level,
            });
        }
        let mut worst: f64 = 0.0;
        for (a, b) in self.bodies.iter().zip(&other.bodies) {
            worst = worst.max(a.hausdorff_distance(b)?);
        }
        Ok(worst)
    }
}

/// An adapted set-valued process: slice k is a level-k `SetRV`.
#[derive(Debug, Clone, PartialEq)]
pub struct SetProcess {
    pub slices: Vec<SetRV>,
}

impl SetProcess {
    pub fn new(slices: Vec<SetRV>) -> Result<Self> {
        let dim = slices.first().map(|s| s.dim()).unwrap_or(0);
        for (k, s) in slices.iter().enumerate() {
            if s.level != k {
                return Err(Error::InvalidParameter(format!(
                    "slice {k} sits at level {}",
                    s.level
                )));
            }
            if s.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: s.dim(),
                });
            }
        }
        Ok(Self { slices })
    }

    pub fn constant(body: ConvexBody, level_count: usize) -> Self {
        Self {
            slices: (0..level_count)
                .map(|k| SetRV::constant(k, body.clone()))
                .collect(),
        }
    }

    pub fn from_fn(level_count: usize, mut f: impl FnMut(usize, usize) -> ConvexBody) -> Self {
        Self {
            slices: (0..level_count)
                .map(|k| SetRV::from_fn(k, |i| f(k, i)))
                .collect(),
        }
    }

    pub fn level_count(&self) -> usize {
        self.slices.len()
    }

    pub fn dim(&self) -> usize {
        self.slices[0].dim()
    }

    pub fn body(&self, level: usize, idx: usize) -> &ConvexBody {
        &self.slices[level].bodies[idx]
    }

    /// Largest per-atom Hausdorff distance across shared levels.
    pub fn max_hausdorff(&self, other: &SetProcess) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (a, b) in self.slices.iter().zip(&other.slices) {
            worst = worst.max(a.max_hausdorff(b)?);
        }
        Ok(worst)
    }
}

/// Aumann expectation: the probability-weighted Minkowski average over
/// atoms, which on a finite space is the set of expectations of all
/// selections.
pub fn aumann_expectation(x: &SetRV) -> Result<ConvexBody> {
    let w = 1.0 / x.bodies.len() as f64;
    weighted_minkowski_average(&x.bodies, &vec![w; x.bodies.len()])
}

/// Set-valued conditional expectation E[X | F_j]: per level-j atom the
/// weighted Minkowski average of the descendant bodies, computed by
/// successive sibling averaging (exact by associativity of Minkowski sums
/// and scalar distributivity).
pub fn conditional_expectation_set(x: &SetRV, to_level: usize) -> Result<SetRV> {
    if to_level > x.level {
        return Err(Error::LevelOutOfRange {
            level: to_level,
            max: x.level,
        });
    }
    let mut bodies = x.bodies.clone();
    let mut level = x.level;
    while level > to_level {
        let half = 1usize << (level - 1);
        let mut next = Vec::with_capacity(half);
        for i in 0..half {
            let down = bodies[i].scale(0.5);
            let up = bodies[i | half].scale(0.5);
            next.push(down.minkowski_sum(&up)?);
        }
        bodies = next;
        level -= 1;
    }
    SetRV::new(to_level, bodies)
}

/// Atom-wise Hukuhara difference X1 (-) X2; `None` as soon as one atom
/// fails the existence test.
pub fn hukuhara_set_rv(x1: &SetRV, x2: &SetRV) -> Result<Option<SetRV>> {
    if x1.level != x2.level {
        return Err(Error::LevelOutOfRange {
            level: x2.level,
            max: x1.level,
        });
    }
    let mut bodies = Vec::with_capacity(x1.bodies.len());
    for (a, b) in x1.bodies.iter().zip(&x2.bodies) {
        match a.hukuhara_difference(b)? {
            Some(c) => bodies.push(c),
            None => return Ok(None),
        }
    }
    Ok(Some(SetRV::new(x1.level, bodies)?))
}

/// L^2 distance (E[h^2(X1, X2)])^{1/2} under the uniform atom weights.
pub fn distance_h2(x1: &SetRV, x2: &SetRV) -> Result<f64> {
    if x1.level != x2.level {
        return Err(Error::LevelOutOfRange {
            level: x2.level,
            max: x1.level,
        });
    }
    let p = 1.0 / x1.bodies.len() as f64;
    let mut acc = 0.0;
    for (a, b) in x1.bodies.iter().zip(&x2.bodies) {
        let h = a.hausdorff_distance(b)?;
        acc += p * h * h;
    }
    Ok(acc.sqrt())
}

/// Closed decomposable hull of a finite family of vector random variables,
/// realized per atom: the body of attained values {f_i(atom)}.
///
/// With `convexify` the per-atom convex hull is taken (the case of a convex
/// abstract family). Without it the attained values must already be in
/// convex position, since bodies carry extreme points only.
pub fn dec_hull_atoms(members: &[VectorRV], convexify: bool) -> Result<SetRV> {
    let first = members.first().ok_or(Error::EmptyVertices)?;
    let level = first.level;
    let dim = first.dim;
    if members.iter().any(|m| m.level != level || m.dim != dim) {
        return Err(Error::InvalidParameter(
            "family members must share level and dim".into(),
        ));
    }
    let mut bodies = Vec::with_capacity(1 << level);
    for idx in 0..1usize << level {
        let values: Vec<Vec<f64>> = members.iter().map(|m| m.values[idx].clone()).collect();
        let body = ConvexBody::new(dim, &values)?;
        if !convexify {
            let mut deduped = values.clone();
            deduped.sort_by(|a, b| a.partial_cmp(b).unwrap());
            deduped.dedup_by(|a, b| {
                a.iter()
                    .zip(b.iter())
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum::<f64>()
                    .sqrt()
                    <= body.tol()
            });
            if deduped.len() != body.vertex_count() {
                return Err(Error::InvalidParameter(
                    "attained values are not in convex position; pass convexify".into(),
                ));
            }
        }
        bodies.push(body);
    }
    SetRV::new(level, bodies)
}

/// Number of vertex selections of `x` (product of per-atom vertex counts).
pub fn selection_count(x: &SetRV) -> u128 {
    x.bodies
        .iter()
        .fold(1u128, |acc, b| acc.saturating_mul(b.vertex_count() as u128))
}

/// All selections assigning one vertex of its body to each atom.
pub fn vertex_selections(x: &SetRV, cap: u64) -> Result<Vec<VectorRV>> {
    let total = selection_count(x);
    if total > cap as u128 {
        return Err(Error::EnumerationCap { needed: total, cap });
    }
    let verts: Vec<Vec<Vec<f64>>> = x.bodies.iter().map(|b| b.vertices()).collect();
    let mut out = Vec::with_capacity(total as usize);
    let mut digits = vec![0usize; verts.len()];
    loop {
        let values: Vec<Vec<f64>> = digits
            .iter()
            .enumerate()
            .map(|(i, &d)| verts[i][d].clone())
            .collect();
        out.push(VectorRV::new(x.level, x.dim(), values)?);
        // mixed-radix increment
        let mut pos = 0;
        loop {
            if pos == digits.len() {
                return Ok(out);
            }
            digits[pos] += 1;
            if digits[pos] < verts[pos].len() {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SetRVWire {
    level: usize,
    bodies: BTreeMap<String, ConvexBody>,
}

impl Serialize for SetRV {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let tree =
            FiltrationTree::new(self.level.max(1), 1.0).map_err(serde::ser::Error::custom)?;
        let bodies = self
            .bodies
            .iter()
            .enumerate()
            .map(|(i, b)| (tree.path_string(self.level, i), b.clone()))
            .collect();
        SetRVWire {
            level: self.level,
            bodies,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SetRV {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = SetRVWire::deserialize(d)?;
        let tree = FiltrationTree::new(wire.level.max(1), 1.0).map_err(D::Error::custom)?;
        let mut bodies: Vec<Option<ConvexBody>> = vec![None; 1 << wire.level];
        for (path, body) in wire.bodies {
            let (level, idx) = tree.parse_path(&path).map_err(D::Error::custom)?;
            if level != wire.level {
                return Err(D::Error::custom(format!(
                    "path `{path}` is not at level {}",
                    wire.level
                )));
            }
            bodies[idx] = Some(body);
        }
        let bodies: Vec<ConvexBody> = bodies
            .into_iter()
            .enumerate()
            .map(|(i, b)| b.ok_or_else(|| D::Error::custom(format!("missing node index {i}"))))
            .collect::<std::result::Result<_, _>>()?;
        SetRV::new(wire.level, bodies).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Direction;
    use crate::tree::cond_exp_vector;

    fn interval(lo: f64, hi: f64) -> ConvexBody {
        ConvexBody::interval(lo, hi).unwrap()
    }

    #[test]
    fn aumann_expectation_examples() {
        let constant = SetRV::constant(2, interval(1.0, 3.0));
        assert_eq!(aumann_expectation(&constant).unwrap(), interval(1.0, 3.0));

        let two = SetRV::new(1, vec![interval(0.0, 2.0), interval(4.0, 6.0)]).unwrap();
        assert_eq!(aumann_expectation(&two).unwrap(), interval(2.0, 4.0));
    }

    #[test]
    fn aumann_expectation_matches_selection_hull() {
        // brute-force oracle: hull of expectations over all vertex selections
        let x = SetRV::new(
            2,
            vec![
                ConvexBody::square([0.0, 0.0], 2.0).unwrap(),
                ConvexBody::square([1.0, -1.0], 1.0).unwrap(),
                ConvexBody::new(2, &[vec![0.0, 0.0], vec![2.0, 0.0], vec![0.0, 2.0]]).unwrap(),
                ConvexBody::point(&[-1.0, 3.0]).unwrap(),
            ],
        )
        .unwrap();
        let expect = aumann_expectation(&x).unwrap();

        let selections = vertex_selections(&x, DEFAULT_SELECTION_CAP).unwrap();
        assert_eq!(selections.len(), 4 * 4 * 3);
        let means: Vec<Vec<f64>> = selections
            .iter()
            .map(|f| cond_exp_vector(f, 0).unwrap().values[0].clone())
            .collect();
        let hull = ConvexBody::new(2, &means).unwrap();
        assert!(expect.approx_eq(&hull, 1e-12));
    }

    #[test]
    fn conditional_expectation_examples() {
        let x = SetRV::new(1, vec![interval(0.0, 2.0), interval(4.0, 6.0)]).unwrap();
        let parent = conditional_expectation_set(&x, 0).unwrap();
        assert_eq!(parent.bodies[0], interval(2.0, 4.0));
        assert_eq!(conditional_expectation_set(&x, 1).unwrap(), x);
        assert!(conditional_expectation_set(&x, 2).is_err());

        // per-atom integral identity: scale(p_D, E[X|G](D)) == sum over
        // descendants of p * X
        let y = SetRV::new(
            2,
            vec![
                interval(0.0, 1.0),
                interval(-2.0, 0.5),
                interval(1.0, 4.0),
                interval(0.0, 0.0),
            ],
        )
        .unwrap();
        let e = conditional_expectation_set(&y, 1).unwrap();
        for parent_idx in 0..2 {
            let lhs = e.bodies[parent_idx].scale(0.5);
            let rhs = y.bodies[parent_idx]
                .scale(0.25)
                .minkowski_sum(&y.bodies[parent_idx | 2].scale(0.25))
                .unwrap();
            assert!(lhs.approx_eq(&rhs, 1e-12));
        }
    }

    #[test]
    fn hukuhara_set_rv_examples() {
        let x = SetRV::new(1, vec![interval(0.0, 3.0), interval(-1.0, 1.0)]).unwrap();
        let z = hukuhara_set_rv(&x, &x).unwrap().unwrap();
        for b in &z.bodies {
            assert!(b.approx_eq(&ConvexBody::zero(1).unwrap(), 1e-12));
        }

        // cancellation: (X1 + X2) - X2 == X1 per atom
        let x2 = SetRV::new(1, vec![interval(1.0, 2.0), interval(0.0, 4.0)]).unwrap();
        let sum = x.minkowski_sum(&x2).unwrap();
        let back = hukuhara_set_rv(&sum, &x2).unwrap().unwrap();
        assert!(back.max_hausdorff(&x).unwrap() <= 1e-12);

        // one failing atom poisons the whole difference
        let narrow = SetRV::new(1, vec![interval(0.0, 10.0), interval(0.0, 0.1)]).unwrap();
        assert!(hukuhara_set_rv(&narrow, &x).unwrap().is_none());
    }

    #[test]
    fn distance_h2_examples() {
        let a = SetRV::constant(1, interval(0.0, 1.0));
        let b = SetRV::constant(1, interval(2.0, 5.0));
        assert_eq!(distance_h2(&a, &a).unwrap(), 0.0);
        assert!((distance_h2(&a, &b).unwrap() - 4.0).abs() < 1e-15);

        let c = SetRV::new(1, vec![interval(0.0, 1.0), interval(0.0, 2.0)]).unwrap();
        let d = SetRV::new(1, vec![interval(3.0, 4.0), interval(5.0, 7.0)]).unwrap();
        let h1 = 3.0f64;
        let h2 = 5.0f64;
        let expect = ((h1 * h1 + h2 * h2) / 2.0).sqrt();
        assert!((distance_h2(&c, &d).unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn dec_hull_examples() {
        let f = VectorRV::constant(2, &[1.5]);
        let single = dec_hull_atoms(&[f.clone()], false).unwrap();
        assert!(single.bodies.iter().all(|b| b.is_point()));

        let zero = VectorRV::constant(2, &[0.0]);
        let one = VectorRV::constant(2, &[1.0]);
        let seg = dec_hull_atoms(&[zero, one], true).unwrap();
        assert!(seg.bodies.iter().all(|b| *b == interval(0.0, 1.0)));

        // interior member rejected without convexify
        let mid = VectorRV::constant(2, &[0.5]);
        let zero = VectorRV::constant(2, &[0.0]);
        let one = VectorRV::constant(2, &[1.0]);
        assert!(dec_hull_atoms(&[zero, mid, one], false).is_err());
    }

    #[test]
    fn vertex_selection_counts() {
        let singleton = SetRV::constant(2, ConvexBody::point(&[1.0]).unwrap());
        assert_eq!(vertex_selections(&singleton, 10).unwrap().len(), 1);

        let ivs = SetRV::new(1, vec![interval(0.0, 1.0), interval(2.0, 3.0)]).unwrap();
        assert_eq!(vertex_selections(&ivs, 10).unwrap().len(), 4);

        let tri = ConvexBody::new(2, &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let tris = SetRV::constant(2, tri);
        assert_eq!(selection_count(&tris), 81);
        assert_eq!(vertex_selections(&tris, 100).unwrap().len(), 81);
        assert!(matches!(
            vertex_selections(&tris, 80),
            Err(Error::EnumerationCap { needed: 81, cap: 80 })
        ));
    }

    #[test]
    fn selection_additivity_per_atom() {
        // hulls of selection sums match the Minkowski-sum hulls per atom
        let a = SetRV::new(1, vec![interval(0.0, 1.0), interval(-1.0, 2.0)]).unwrap();
        let b = SetRV::new(1, vec![interval(2.0, 3.0), interval(0.0, 0.5)]).unwrap();
        let sum = a.minkowski_sum(&b).unwrap();
        let sel_a = vertex_selections(&a, 100).unwrap();
        let sel_b = vertex_selections(&b, 100).unwrap();
        for idx in 0..2 {
            let mut pts = Vec::new();
            for fa in &sel_a {
                for fb in &sel_b {
                    pts.push(vec![fa.values[idx][0] + fb.values[idx][0]]);
                }
            }
            let hull = ConvexBody::new(1, &pts).unwrap();
            assert!(hull.approx_eq(&sum.bodies[idx], 1e-12));
        }
    }

    #[test]
    fn jensen_contraction_small_case() {
        let x1 = SetRV::new(
            1,
            vec![
                ConvexBody::square([0.0, 0.0], 2.0).unwrap(),
                ConvexBody::point(&[3.0, 1.0]).unwrap(),
            ],
        )
        .unwrap();
        let x2 = SetRV::new(
            1,
            vec![
                ConvexBody::square([1.0, 1.0], 1.0).unwrap(),
                ConvexBody::square([-1.0, 0.0], 4.0).unwrap(),
            ],
        )
        .unwrap();
        let e1 = conditional_expectation_set(&x1, 0).unwrap();
        let e2 = conditional_expectation_set(&x2, 0).unwrap();
        let lhs = e1.bodies[0].hausdorff_distance(&e2.bodies[0]).unwrap();
        let rhs = 0.5
            * (x1.bodies[0].hausdorff_distance(&x2.bodies[0]).unwrap().powi(2)
                + x1.bodies[1].hausdorff_distance(&x2.bodies[1]).unwrap().powi(2));
        assert!(lhs * lhs <= rhs + 1e-9);
    }

    #[test]
    fn set_rv_serde_round_trip() {
        let x = SetRV::new(
            1,
            vec![
                interval(0.0, 1.0),
                ConvexBody::interval(-2.0, 0.0).unwrap(),
            ],
        )
        .unwrap();
        let js = serde_json::to_string(&x).unwrap();
        let back: SetRV = serde_json::from_str(&js).unwrap();
        assert_eq!(x, back);
    }

    #[test]
    fn support_of_cond_exp_is_average_of_supports() {
        let x = SetRV::new(
            1,
            vec![
                ConvexBody::new(2, &[vec![0.0, 0.0], vec![2.0, 0.2], vec![1.0, 1.5]]).unwrap(),
                ConvexBody::square([0.5, 0.1], 1.6).unwrap(),
            ],
        )
        .unwrap();
        let e = conditional_expectation_set(&x, 0).unwrap();
        for k in 0..24 {
            let w = Direction::from_angle(k as f64 * std::f64::consts::TAU / 24.0);
            let avg = 0.5 * (x.bodies[0].support(&w) + x.bodies[1].support(&w));
            assert!((e.bodies[0].support(&w) - avg).abs() < 1e-12);
        }
    }
}
