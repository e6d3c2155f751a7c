//! The set-valued integrals, in exact per-atom form.
//!
//! On a finite tree the closed decomposable hull behind each integral
//! decouples across the atoms of the target level, and along a fixed path
//! the per-node selection choices are free. The time and Ito integrals of a
//! set-valued process therefore reduce to per-atom Minkowski sums of scaled
//! bodies along the path (validated against selection-enumeration oracles),
//! while the integrals of a process family reduce to the per-atom set of
//! member integral values, convexified for a convex family.

use crate::error::{Error, Result};
use crate::geometry::ConvexBody;
use crate::set_random::{SetProcess, SetRV};
use crate::tree::{FiltrationTree, VectorProcess};

/// A finite (or convex-hull-of-finite) family of integrand processes.
#[derive(Debug, Clone)]
pub struct ProcessFamily {
    pub members: Vec<VectorProcess>,
    /// Interpret the family as the convex hull of its members.
    pub convex: bool,
}

impl ProcessFamily {
    pub fn new(members: Vec<VectorProcess>, convex: bool) -> Result<Self> {
        let first = members.first().ok_or(Error::EmptyVertices)?;
        let (dim, levels) = (first.dim, first.level_count());
        if members
            .iter()
            .any(|m| m.dim != dim || m.level_count() != levels)
        {
            return Err(Error::InvalidParameter(
                "family members must share dim and level range".into(),
            ));
        }
        Ok(Self { members, convex })
    }

    pub fn dim(&self) -> usize {
        self.members[0].dim
    }

    pub fn level_count(&self) -> usize {
        self.members[0].level_count()
    }
}

/// A finite (or convex-hull-of-finite) set of representer pairs (x, z):
/// initial value plus predictable integrand.
#[derive(Debug, Clone)]
pub struct RepresenterSet {
    pub members: Vec<(Vec<f64>, VectorProcess)>,
    pub convex: bool,
}

impl RepresenterSet {
    pub fn new(members: Vec<(Vec<f64>, VectorProcess)>, convex: bool) -> Result<Self> {
        let first = members.first().ok_or(Error::EmptyVertices)?;
        let (dim, levels) = (first.1.dim, first.1.level_count());
        if members
            .iter()
            .any(|(x, z)| x.len() != dim || z.dim != dim || z.level_count() != levels)
        {
            return Err(Error::InvalidParameter(
                "representer pairs must share dim and level range".into(),
            ));
        }
        Ok(Self { members, convex })
    }

    pub fn dim(&self) -> usize {
        self.members[0].1.dim
    }

    /// pi_xi: the initial values of the pairs.
    pub fn initial_values(&self) -> Vec<Vec<f64>> {
        self.members.iter().map(|(x, _)| x.clone()).collect()
    }

    /// Hull of pi_xi as a body (used against M_0).
    pub fn initial_hull(&self) -> Result<ConvexBody> {
        ConvexBody::new(self.dim(), &self.initial_values())
    }

    /// pi_z: the integrand family, inheriting the convex flag.
    pub fn integrand_family(&self) -> Result<ProcessFamily> {
        ProcessFamily::new(
            self.members.iter().map(|(_, z)| z.clone()).collect(),
            self.convex,
        )
    }
}

#[inline]
fn path_node(idx: usize, level: usize) -> usize {
    idx & ((1usize << level) - 1)
}

/// Aumann time integral over the window [from, to): per level-`to` atom the
/// Minkowski sum of dt * Phi_j(node_j) along the path. Adapted, and exactly
/// additive over time splits.
pub fn aumann_time_integral(
    tree: &FiltrationTree,
    phi: &SetProcess,
    from: usize,
    to: usize,
) -> Result<SetRV> {
    tree.check_level(to)?;
    if from > to {
        return Err(Error::InvalidParameter(format!(
            "window [{from}, {to}) is empty-reversed"
        )));
    }
    if phi.level_count() < to {
        return Err(Error::MissingNode(format!(
            "process has {} levels, window needs {}",
            phi.level_count(),
            to
        )));
    }
    let dim = phi.dim();
    let dt = tree.dt();
    let bodies = (0..1usize << to)
        .map(|idx| {
            let mut acc = ConvexBody::zero(dim)?;
            for j in from..to {
                acc = acc.minkowski_sum(&phi.body(j, path_node(idx, j)).scale(dt))?;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    SetRV::new(to, bodies)
}

/// Set-valued Ito integral over [from, to): per level-`to` atom the
/// Minkowski sum of dB_{j+1} * Psi_j(node_j); dB < 0 reflects the body.
pub fn set_ito_integral_window(
    tree: &FiltrationTree,
    psi: &SetProcess,
    from: usize,
    to: usize,
) -> Result<SetRV> {
    tree.check_level(to)?;
    if from > to {
        return Err(Error::InvalidParameter(format!(
            "window [{from}, {to}) is empty-reversed"
        )));
    }
    if psi.level_count() < to {
        return Err(Error::MissingNode(format!(
            "process has {} levels, window needs {}",
            psi.level_count(),
            to
        )));
    }
    let dim = psi.dim();
    let bodies = (0..1usize << to)
        .map(|idx| {
            let mut acc = ConvexBody::zero(dim)?;
            for j in from..to {
                let db = tree.increment(j + 1, idx);
                acc = acc.minkowski_sum(&psi.body(j, path_node(idx, j)).scale(db))?;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    SetRV::new(to, bodies)
}

/// Set-valued Ito integral over [0, to).
pub fn set_ito_integral(tree: &FiltrationTree, psi: &SetProcess, to: usize) -> Result<SetRV> {
    set_ito_integral_window(tree, psi, 0, to)
}

/// Generalized Aumann-Ito integral of a process family over [from, to):
/// per atom the values of the member integrals, convexified when the family
/// is convex. Interior members are absorbed into the hull either way, since
/// bodies carry extreme points only.
pub fn generalized_ito_integral_window(
    tree: &FiltrationTree,
    family: &ProcessFamily,
    from: usize,
    to: usize,
) -> Result<SetRV> {
    tree.check_level(to)?;
    if family.level_count() < to {
        return Err(Error::MissingNode(format!(
            "family has {} levels, window needs {}",
            family.level_count(),
            to
        )));
    }
    let dim = family.dim();
    let integrals: Vec<_> = family
        .members
        .iter()
        .map(|z| crate::tree::window_ito_integral(tree, z, from, to))
        .collect::<Result<_>>()?;
    let bodies = (0..1usize << to)
        .map(|idx| {
            let pts: Vec<Vec<f64>> = integrals.iter().map(|i| i.values[idx].clone()).collect();
            ConvexBody::new(dim, &pts)
        })
        .collect::<Result<Vec<_>>>()?;
    SetRV::new(to, bodies)
}

pub fn generalized_ito_integral(
    tree: &FiltrationTree,
    family: &ProcessFamily,
    to: usize,
) -> Result<SetRV> {
    generalized_ito_integral_window(tree, family, 0, to)
}

/// Extended integral of a representer set: per atom the values
/// x + integral(z), keeping track of the initial values.
pub fn extended_integral(
    tree: &FiltrationTree,
    reps: &RepresenterSet,
    to: usize,
) -> Result<SetRV> {
    tree.check_level(to)?;
    let dim = reps.dim();
    let integrals: Vec<_> = reps
        .members
        .iter()
        .map(|(_, z)| crate::tree::discrete_ito_integral(tree, z, to))
        .collect::<Result<_>>()?;
    let bodies = (0..1usize << to)
        .map(|idx| {
            let pts: Vec<Vec<f64>> = reps
                .members
                .iter()
                .zip(&integrals)
                .map(|((x, _), i)| {
                    x.iter()
                        .zip(&i.values[idx])
                        .map(|(a, b)| a + b)
                        .collect()
                })
                .collect();
            ConvexBody::new(dim, &pts)
        })
        .collect::<Result<Vec<_>>>()?;
    SetRV::new(to, bodies)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::VectorProcess;

    fn interval(lo: f64, hi: f64) -> ConvexBody {
        ConvexBody::interval(lo, hi).unwrap()
    }

    #[test]
    fn time_integral_examples() {
        let tree = FiltrationTree::new(2, 1.0).unwrap();

        let zero = SetProcess::constant(ConvexBody::zero(1).unwrap(), 2);
        let i0 = aumann_time_integral(&tree, &zero, 0, 2).unwrap();
        assert!(i0
            .bodies
            .iter()
            .all(|b| b.approx_eq(&ConvexBody::zero(1).unwrap(), 1e-15)));

        // constant G over a window of length tau gives tau * G
        let g = interval(-1.0, 2.0);
        let cg = SetProcess::constant(g.clone(), 2);
        let i1 = aumann_time_integral(&tree, &cg, 1, 2).unwrap();
        for b in &i1.bodies {
            assert!(b.approx_eq(&g.scale(0.5), 1e-15));
        }

        // deterministic alternation [0,1], [1,3] with dt = 1/2
        let phi = SetProcess::from_fn(2, |k, _| {
            if k == 0 {
                interval(0.0, 1.0)
            } else {
                interval(1.0, 3.0)
            }
        });
        let i2 = aumann_time_integral(&tree, &phi, 0, 2).unwrap();
        for b in &i2.bodies {
            assert!(b.approx_eq(&interval(0.5, 2.0), 1e-15));
        }
    }

    #[test]
    fn time_integral_splits_exactly() {
        let tree = FiltrationTree::new(3, 0.9).unwrap();
        let phi = SetProcess::from_fn(3, |k, i| interval(-(k as f64), (i + 1) as f64));
        let whole = aumann_time_integral(&tree, &phi, 0, 3).unwrap();
        let first = aumann_time_integral(&tree, &phi, 0, 2).unwrap();
        let second = aumann_time_integral(&tree, &phi, 2, 3).unwrap();
        for idx in 0..8 {
            let lhs = &whole.bodies[idx];
            let rhs = first.bodies[idx & 0b11]
                .minkowski_sum(&second.bodies[idx])
                .unwrap();
            assert!(lhs.approx_eq(&rhs, 1e-12));
        }
    }

    #[test]
    fn ito_integral_examples() {
        let tree = FiltrationTree::new(2, 1.0).unwrap();

        let zero = SetProcess::constant(ConvexBody::zero(1).unwrap(), 2);
        let i0 = set_ito_integral(&tree, &zero, 2).unwrap();
        assert!(i0
            .bodies
            .iter()
            .all(|b| b.approx_eq(&ConvexBody::zero(1).unwrap(), 1e-15)));

        // singleton {c} reduces to the vector integral c * B
        let c = SetProcess::constant(ConvexBody::point(&[2.0]).unwrap(), 2);
        let i1 = set_ito_integral(&tree, &c, 2).unwrap();
        for idx in 0..4 {
            let expect = 2.0 * tree.brownian(2, idx);
            let (lo, hi) = i1.bodies[idx].endpoints().unwrap();
            assert!((lo - expect).abs() < 1e-14 && (hi - expect).abs() < 1e-14);
        }

        // Psi = [1,2]: per-atom sum of +-dB-scaled intervals
        let psi = SetProcess::constant(interval(1.0, 2.0), 2);
        let i2 = set_ito_integral(&tree, &psi, 2).unwrap();
        let r = 1.0 / 2.0f64.sqrt();
        // UU: [1,2]r + [1,2]r = [2r, 4r]; UD: [1,2]r + [-2,-1]r = [-r, r]
        assert!(i2.bodies[0b11].approx_eq(&interval(2.0 * r, 4.0 * r), 1e-14));
        assert!(i2.bodies[0b01].approx_eq(&interval(-r, r), 1e-14));
        assert!(i2.bodies[0b10].approx_eq(&interval(-r, r), 1e-14));
        assert!(i2.bodies[0b00].approx_eq(&interval(-4.0 * r, -2.0 * r), 1e-14));
    }

    #[test]
    fn generalized_integral_examples() {
        let tree = FiltrationTree::new(2, 1.0).unwrap();

        let zero = ProcessFamily::new(vec![VectorProcess::zero(1, 2)], true).unwrap();
        let i0 = generalized_ito_integral(&tree, &zero, 2).unwrap();
        assert!(i0.bodies.iter().all(|b| b.is_point()));

        let z1 = VectorProcess::constant(&[1.0], 2);
        let z2 = VectorProcess::new(1, vec![vec![vec![-1.0]], vec![vec![0.5], vec![2.0]]]).unwrap();
        let fam = ProcessFamily::new(vec![z1.clone(), z2.clone()], true).unwrap();
        let i = generalized_ito_integral(&tree, &fam, 2).unwrap();
        let v1 = crate::tree::discrete_ito_integral(&tree, &z1, 2).unwrap();
        let v2 = crate::tree::discrete_ito_integral(&tree, &z2, 2).unwrap();
        for idx in 0..4 {
            let a = v1.values[idx][0];
            let b = v2.values[idx][0];
            assert!(i.bodies[idx].approx_eq(&interval(a.min(b), a.max(b)), 1e-14));
        }
    }

    #[test]
    fn extended_integral_examples() {
        let tree = FiltrationTree::new(2, 1.0).unwrap();

        // pure initial value: constant singleton
        let r0 = RepresenterSet::new(vec![(vec![3.0], VectorProcess::zero(1, 2))], true).unwrap();
        let i0 = extended_integral(&tree, &r0, 2).unwrap();
        for b in &i0.bodies {
            let (lo, hi) = b.endpoints().unwrap();
            assert_eq!((lo, hi), (3.0, 3.0));
        }

        // {0} x Z coincides with the generalized integral
        let z1 = VectorProcess::constant(&[1.0], 2);
        let z2 = VectorProcess::constant(&[-0.5], 2);
        let fam = ProcessFamily::new(vec![z1.clone(), z2.clone()], true).unwrap();
        let rz = RepresenterSet::new(
            vec![(vec![0.0], z1.clone()), (vec![0.0], z2.clone())],
            true,
        )
        .unwrap();
        for k in 0..=2 {
            let a = extended_integral(&tree, &rz, k).unwrap();
            let b = generalized_ito_integral(&tree, &fam, k).unwrap();
            assert!(a.max_hausdorff(&b).unwrap() <= 1e-14);
        }

        // two pairs: per-atom segments joining the two values
        let r2 = RepresenterSet::new(
            vec![(vec![1.0], z1.clone()), (vec![-1.0], z2)],
            true,
        )
        .unwrap();
        let i2 = extended_integral(&tree, &r2, 2).unwrap();
        let v1 = crate::tree::discrete_ito_integral(&tree, &z1, 2).unwrap();
        for idx in 0..4 {
            let a = 1.0 + v1.values[idx][0];
            let b = -1.0 - 0.5 * tree.brownian(2, idx);
            assert!(i2.bodies[idx].approx_eq(&interval(a.min(b), a.max(b)), 1e-14));
        }
    }

    #[test]
    fn ito_additivity_and_hukuhara_pass_through() {
        let tree = FiltrationTree::new(3, 1.5).unwrap();
        let psi2 = SetProcess::from_fn(3, |k, i| interval(-1.0 - k as f64, i as f64));
        let delta = SetProcess::from_fn(3, |k, i| interval(0.0, 0.5 + (k + i) as f64 * 0.25));
        let psi1 = SetProcess::new(
            (0..3)
                .map(|k| psi2.slices[k].minkowski_sum(&delta.slices[k]).unwrap())
                .collect(),
        )
        .unwrap();

        for to in 1..=3usize {
            let i1 = set_ito_integral(&tree, &psi1, to).unwrap();
            let i2 = set_ito_integral(&tree, &psi2, to).unwrap();
            let id = set_ito_integral(&tree, &delta, to).unwrap();
            // additivity
            let sum = i2.minkowski_sum(&id).unwrap();
            assert!(i1.max_hausdorff(&sum).unwrap() <= 1e-12);
            // Hukuhara difference of the integrals recovers the integral of
            // the per-node differences
            let diff = crate::set_random::hukuhara_set_rv(&i1, &i2).unwrap().unwrap();
            assert!(diff.max_hausdorff(&id).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn generalized_integral_subadditive_in_time() {
        let tree = FiltrationTree::new(3, 1.0).unwrap();
        let members: Vec<VectorProcess> = (0..3)
            .map(|m| {
                VectorProcess::new(
                    1,
                    (0..3)
                        .map(|k| {
                            (0..1usize << k)
                                .map(|i| vec![0.3 * m as f64 - 0.2 * k as f64 + 0.1 * i as f64])
                                .collect()
                        })
                        .collect(),
                )
                .unwrap()
            })
            .collect();
        let fam = ProcessFamily::new(members, true).unwrap();
        let whole = generalized_ito_integral(&tree, &fam, 3).unwrap();
        let head = generalized_ito_integral_window(&tree, &fam, 0, 1).unwrap();
        let tail = generalized_ito_integral_window(&tree, &fam, 1, 3).unwrap();
        for idx in 0..8 {
            let rhs = head.bodies[idx & 1].minkowski_sum(&tail.bodies[idx]).unwrap();
            // inclusion: every vertex of the whole integral is in the split sum
            assert!(whole.bodies[idx].directed_hausdorff(&rhs).unwrap() <= 1e-9);
        }
    }
}
