//! Set-valued martingales, martingale selectors and representer sets.
//!
//! A set-valued martingale on the tree is a full stack of slices whose
//! conditional expectations telescope. Its martingale selectors are
//! generated from terminal vertex selections: the conditional expectation
//! of a selection of M_N is automatically a vector martingale lying in
//! every M_k (conditional expectation is a weighted Minkowski average).
//! Each selector is encoded by its representer pair (x, z), and the
//! extended integral of the representer set reconstructs the martingale;
//! with full enumeration the reconstruction is exact per atom, with
//! sampling it is an inner approximation whose gap is reported.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::ConvexBody;
use crate::integrals::{extended_integral, generalized_ito_integral, RepresenterSet};
use crate::set_random::{conditional_expectation_set, selection_count, vertex_selections, SetRV};
use crate::tree::{
    cond_exp_vector, discrete_ito_integral, martingale_representer, window_ito_integral,
    FiltrationTree, VectorProcess, VectorRV,
};

/// Per-atom Hausdorff residual above which a slice stack is rejected as a
/// set-valued martingale.
pub const SET_MARTINGALE_TOL: f64 = 1e-9;

/// Membership slack for selector values inside the martingale slices.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// A set-valued martingale: slices at levels 0..=N.
#[derive(Debug, Clone, PartialEq)]
pub struct SetMartingale {
    pub slices: Vec<SetRV>,
}

impl SetMartingale {
    /// Validates the martingale property before accepting the slices.
    pub fn new(slices: Vec<SetRV>) -> Result<Self> {
        let report = is_set_martingale(&slices)?;
        if !report.pass {
            return Err(Error::NotMartingale {
                residual: report.worst,
                tol: SET_MARTINGALE_TOL,
            });
        }
        Ok(Self { slices })
    }

    /// The conditional-expectation stack of a terminal variable, a
    /// martingale by the tower property.
    pub fn from_terminal(terminal: &SetRV) -> Result<Self> {
        let slices = (0..=terminal.level)
            .map(|k| conditional_expectation_set(terminal, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { slices })
    }

    pub fn terminal_level(&self) -> usize {
        self.slices.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.slices[0].dim()
    }

    pub fn slice(&self, level: usize) -> &SetRV {
        &self.slices[level]
    }

    /// Uniform bound max over nodes of the body norm.
    pub fn uniform_norm(&self) -> f64 {
        self.slices
            .iter()
            .flat_map(|s| s.bodies.iter())
            .map(|b| b.body_norm())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MartingaleCheckReport {
    /// Worst per-atom Hausdorff residual of E[M_{k+1} | F_k] vs M_k, per k.
    pub per_level_residual: Vec<f64>,
    pub worst: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Checks the martingale property of a stack of slices at levels 0..=N.
pub fn is_set_martingale(slices: &[SetRV]) -> Result<MartingaleCheckReport> {
    if slices.is_empty() {
        return Err(Error::InvalidParameter("no slices".into()));
    }
    let dim = slices[0].dim();
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
    let mut per_level = Vec::with_capacity(slices.len().saturating_sub(1));
    let mut worst: f64 = 0.0;
    for k in 0..slices.len() - 1 {
        let pulled = conditional_expectation_set(&slices[k + 1], k)?;
        let res = pulled.max_hausdorff(&slices[k])?;
        per_level.push(res);
        worst = worst.max(res);
    }
    Ok(MartingaleCheckReport {
        per_level_residual: per_level,
        worst,
        tol: SET_MARTINGALE_TOL,
        pass: worst <= SET_MARTINGALE_TOL,
    })
}

/// A vector martingale staying inside a set-valued martingale.
#[derive(Debug, Clone, PartialEq)]
pub struct MartingaleSelector {
    pub slices: Vec<VectorRV>,
}

impl MartingaleSelector {
    pub fn value(&self, level: usize, idx: usize) -> &[f64] {
        &self.slices[level].values[idx]
    }

    /// Worst distance of a slice value from the corresponding body.
    pub fn membership_gap(&self, m: &SetMartingale) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (k, slice) in self.slices.iter().enumerate() {
            for (idx, v) in slice.values.iter().enumerate() {
                worst = worst.max(m.slices[k].bodies[idx].point_distance(v)?);
            }
        }
        Ok(worst)
    }
}

/// How to generate selectors from terminal vertex selections.
#[derive(Debug, Clone, Copy)]
pub enum SelectorBudget {
    /// Enumerate every terminal vertex selection; error above the cap.
    Enumerate { cap: u64 },
    /// Draw `count` seeded selections. Draws form a stream, so a smaller
    /// count is a prefix of a larger one with the same seed (this is what
    /// makes reconstruction gaps monotone across sample sizes).
    Sample { count: usize, seed: u64 },
}

/// Martingale selectors E[f | F_k] for terminal vertex selections f of M_N.
pub fn martingale_selectors(
    m: &SetMartingale,
    budget: SelectorBudget,
) -> Result<Vec<MartingaleSelector>> {
    let terminal = &m.slices[m.terminal_level()];
    let selections: Vec<VectorRV> = match budget {
        SelectorBudget::Enumerate { cap } => vertex_selections(terminal, cap)?,
        SelectorBudget::Sample { count, seed } => {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let verts: Vec<Vec<Vec<f64>>> = terminal.bodies.iter().map(|b| b.vertices()).collect();
            (0..count)
                .map(|_| {
                    let values: Vec<Vec<f64>> = verts
                        .iter()
                        .map(|vs| vs[rng.random_range(0..vs.len())].clone())
                        .collect();
                    VectorRV::new(terminal.level, terminal.dim(), values)
                })
                .collect::<Result<_>>()?
        }
    };
    selections
        .into_iter()
        .map(|f| {
            let slices = (0..=m.terminal_level())
                .map(|k| cond_exp_vector(&f, k))
                .collect::<Result<Vec<_>>>()?;
            Ok(MartingaleSelector { slices })
        })
        .collect()
}

/// Convenience: true when full enumeration fits the cap.
pub fn enumeration_feasible(m: &SetMartingale, cap: u64) -> bool {
    selection_count(&m.slices[m.terminal_level()]) <= cap as u128
}

/// Maps selectors through the martingale representation into representer
/// pairs (x, z); the resulting set is flagged convex.
pub fn build_representers(
    tree: &FiltrationTree,
    selectors: &[MartingaleSelector],
) -> Result<RepresenterSet> {
    let members = selectors
        .iter()
        .map(|sel| martingale_representer(tree, &sel.slices))
        .collect::<Result<Vec<_>>>()?;
    RepresenterSet::new(members, true)
}

/// Extended integral of the representer set at one level; equals M_k per
/// atom under full enumeration, and an inner approximation under sampling.
pub fn reconstruct_integral(
    tree: &FiltrationTree,
    reps: &RepresenterSet,
    level: usize,
) -> Result<SetRV> {
    extended_integral(tree, reps, level)
}

#[derive(Debug, Clone, Serialize)]
pub struct ReconstructionReport {
    /// Hausdorff gap h(M_k, reconstruction_k), worst atom, per level.
    pub per_level_gap: Vec<f64>,
    /// Outer gap sup h-bar(M_k, rec_k): how much of M is missed.
    pub inner_gap: f64,
    /// Escape gap sup h-bar(rec_k, M_k): how far the reconstruction leaves
    /// M (stays at fp noise; selectors live inside M).
    pub escape_gap: f64,
    pub max_gap: f64,
}

/// Compares the reconstruction against the martingale at all levels.
pub fn reconstruction_report(
    tree: &FiltrationTree,
    m: &SetMartingale,
    reps: &RepresenterSet,
) -> Result<ReconstructionReport> {
    let mut per_level = Vec::with_capacity(m.slices.len());
    let mut inner: f64 = 0.0;
    let mut escape: f64 = 0.0;
    for k in 0..=m.terminal_level() {
        let rec = reconstruct_integral(tree, reps, k)?;
        let mut level_gap: f64 = 0.0;
        for (a, b) in m.slices[k].bodies.iter().zip(&rec.bodies) {
            inner = inner.max(a.directed_hausdorff(b)?);
            escape = escape.max(b.directed_hausdorff(a)?);
            level_gap = level_gap.max(a.hausdorff_distance(b)?);
        }
        per_level.push(level_gap);
    }
    Ok(ReconstructionReport {
        max_gap: per_level.iter().cloned().fold(0.0, f64::max),
        per_level_gap: per_level,
        inner_gap: inner,
        escape_gap: escape,
    })
}

/// A representer pair anchored at time t: an F_t-measurable initial value
/// plus the integrand on [t, T).
#[derive(Debug, Clone, PartialEq)]
pub struct TimedRepresenter {
    pub level: usize,
    pub xi: VectorRV,
    /// Full-range process; only levels >= `level` are read.
    pub z: VectorProcess,
}

/// The martingale u -> E[xi | F_u] for u < t, xi + int_t^u z dB for u >= t.
pub fn j_operator(
    tree: &FiltrationTree,
    rep: &TimedRepresenter,
    u: usize,
) -> Result<VectorRV> {
    tree.check_level(u)?;
    let t = rep.level;
    if u < t {
        return cond_exp_vector(&rep.xi, u);
    }
    let tail = window_ito_integral(tree, &rep.z, t, u)?;
    let dim = rep.xi.dim;
    let values = (0..1usize << u)
        .map(|idx| {
            let anchor = &rep.xi.values[tree.ancestor(u, idx, t)];
            anchor
                .iter()
                .zip(&tail.values[idx])
                .map(|(a, b)| a + b)
                .collect()
        })
        .collect();
    VectorRV::new(u, dim, values)
}

/// The flow map (x, z) -> (x + int_0^t z dB, z restricted to [t, T)).
pub fn flow_to_time(
    tree: &FiltrationTree,
    x: &[f64],
    z: &VectorProcess,
    t: usize,
) -> Result<TimedRepresenter> {
    let head = discrete_ito_integral(tree, z, t)?;
    let values = head
        .values
        .iter()
        .map(|v| x.iter().zip(v).map(|(a, b)| a + b).collect())
        .collect();
    Ok(TimedRepresenter {
        level: t,
        xi: VectorRV::new(t, x.len(), values)?,
        z: z.clone(),
    })
}

/// Direct t-anchored representer of a selector: xi = selector slice at t,
/// z from the representation of the tail martingale.
pub fn representer_at_time(
    tree: &FiltrationTree,
    selector: &MartingaleSelector,
    t: usize,
) -> Result<TimedRepresenter> {
    let (_, z) = martingale_representer(tree, &selector.slices)?;
    Ok(TimedRepresenter {
        level: t,
        xi: selector.slices[t].clone(),
        z,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TimeConsistencyReport {
    pub t1: usize,
    pub t2: usize,
    /// Worst node gap between J^{t1}(F^{t1}(x,z)) and J^0(x,z) over
    /// selectors and levels.
    pub flow_residual: f64,
    /// Worst membership gap of flowed-representer martingale values in M.
    pub membership_residual: f64,
    /// h(hull of initial values, M_0).
    pub initial_hull_gap: f64,
    /// Worst-atom gap between the hull of the time-t1 anchors and M_{t1}.
    pub anchor_hull_gap: f64,
    /// Worst-atom gap for the tower identity pulling t2 anchors to t1.
    pub tower_gap: f64,
    /// Worst entry difference of integrands restricted to [t2, T).
    pub restriction_gap: f64,
    pub pass: bool,
    pub tol: f64,
}

/// Time-consistency checks for representers built from selectors:
/// the flow of a 0-representer is a representer at t1 generating the same
/// martingale; anchor hulls match the slices; anchors at t1 are the
/// conditional expectations of anchors at t2; integrand restrictions agree
/// past t2.
pub fn time_consistency_suite(
    tree: &FiltrationTree,
    m: &SetMartingale,
    selectors: &[MartingaleSelector],
    reps: &RepresenterSet,
    t1: usize,
    t2: usize,
    tol: f64,
) -> Result<TimeConsistencyReport> {
    if t1 > t2 || t2 > m.terminal_level() {
        return Err(Error::InvalidParameter(format!(
            "need t1 <= t2 <= N, got ({t1}, {t2})"
        )));
    }
    let n = m.terminal_level();
    let mut flow_residual: f64 = 0.0;
    let mut membership: f64 = 0.0;
    let mut restriction: f64 = 0.0;

    for (sel, (x, z)) in selectors.iter().zip(&reps.members) {
        let flowed = flow_to_time(tree, x, z, t1)?;
        for u in 0..=n {
            let ju = j_operator(tree, &flowed, u)?;
            let j0 = &sel.slices[u];
            for (a, b) in ju.values.iter().zip(&j0.values) {
                for (p, q) in a.iter().zip(b) {
                    flow_residual = flow_residual.max((p - q).abs());
                }
            }
            for (idx, v) in ju.values.iter().enumerate() {
                membership = membership.max(m.slices[u].bodies[idx].point_distance(v)?);
            }
        }
        // z-restrictions past t2 agree between the t1- and t2-anchored
        // representers of the same selector
        let at_t1 = representer_at_time(tree, sel, t1)?;
        let at_t2 = representer_at_time(tree, sel, t2)?;
        for k in t2..n {
            for idx in 0..1usize << k {
                for (a, b) in at_t1.z.value(k, idx).iter().zip(at_t2.z.value(k, idx)) {
                    restriction = restriction.max((a - b).abs());
                }
                for (a, b) in at_t1.z.value(k, idx).iter().zip(z.value(k, idx)) {
                    restriction = restriction.max((a - b).abs());
                }
            }
        }
    }

    let initial_hull_gap = reps.initial_hull()?.hausdorff_distance(&m.slices[0].bodies[0])?;

    // hulls of the time-t anchors against the slices, per atom
    let anchor_hull_gap = anchor_hull_gap(tree, m, selectors, t1)?
        .max(anchor_hull_gap(tree, m, selectors, t2)?);

    // tower: E[anchor at t2 | F_{t1}] hulls equal anchor hulls at t1
    let mut tower: f64 = 0.0;
    let dim = m.dim();
    for idx in 0..1usize << t1 {
        let pulled: Vec<Vec<f64>> = selectors
            .iter()
            .map(|sel| {
                cond_exp_vector(&sel.slices[t2], t1).map(|rv| rv.values[idx].clone())
            })
            .collect::<Result<_>>()?;
        let direct: Vec<Vec<f64>> = selectors
            .iter()
            .map(|sel| sel.slices[t1].values[idx].clone())
            .collect();
        let hull_pulled = ConvexBody::new(dim, &pulled)?;
        let hull_direct = ConvexBody::new(dim, &direct)?;
        tower = tower.max(hull_pulled.hausdorff_distance(&hull_direct)?);
    }

    let worst = flow_residual
        .max(membership)
        .max(initial_hull_gap)
        .max(anchor_hull_gap)
        .max(tower)
        .max(restriction);
    Ok(TimeConsistencyReport {
        t1,
        t2,
        flow_residual,
        membership_residual: membership,
        initial_hull_gap,
        anchor_hull_gap,
        tower_gap: tower,
        restriction_gap: restriction,
        pass: worst <= tol,
        tol,
    })
}

fn anchor_hull_gap(
    _tree: &FiltrationTree,
    m: &SetMartingale,
    selectors: &[MartingaleSelector],
    t: usize,
) -> Result<f64> {
    let dim = m.dim();
    let mut worst: f64 = 0.0;
    for idx in 0..1usize << t {
        let anchors: Vec<Vec<f64>> = selectors
            .iter()
            .map(|sel| sel.slices[t].values[idx].clone())
            .collect();
        let hull = ConvexBody::new(dim, &anchors)?;
        worst = worst.max(hull.hausdorff_distance(&m.slices[t].bodies[idx])?);
    }
    Ok(worst)
}

#[derive(Debug, Clone, Serialize)]
pub struct InclusionReport {
    /// Worst-atom slack of extended integral inside M_0 + generalized
    /// integral (should sit at fp noise).
    pub violation: f64,
    /// Worst-atom reverse gap; positive means the inclusion is strict
    /// somewhere.
    pub reverse_gap: f64,
    pub strict_anywhere: bool,
    pub pass: bool,
    pub slack: f64,
}

/// Checks extended_integral(R, k) subset M_0 + generalized integral of
/// pi_z[R] per atom, where M_0 is the hull of the initial values.
pub fn inclusion_check(
    tree: &FiltrationTree,
    reps: &RepresenterSet,
    level: usize,
    slack: f64,
) -> Result<InclusionReport> {
    let lhs = extended_integral(tree, reps, level)?;
    let m0 = reps.initial_hull()?;
    let gen = generalized_ito_integral(tree, &reps.integrand_family()?, level)?;
    let mut violation: f64 = 0.0;
    let mut reverse: f64 = 0.0;
    for (l, g) in lhs.bodies.iter().zip(&gen.bodies) {
        let rhs = m0.minkowski_sum(g)?;
        violation = violation.max(l.directed_hausdorff(&rhs)?);
        reverse = reverse.max(rhs.directed_hausdorff(l)?);
    }
    Ok(InclusionReport {
        violation,
        reverse_gap: reverse,
        strict_anywhere: reverse > slack,
        pass: violation <= slack,
        slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set_random::SetProcess;

    fn interval(lo: f64, hi: f64) -> ConvexBody {
        ConvexBody::interval(lo, hi).unwrap()
    }

    fn interval_martingale(tree: &FiltrationTree) -> SetMartingale {
        let n = tree.depth();
        let terminal = SetRV::from_fn(n, |i| {
            let b = tree.brownian(n, i);
            interval(b - 1.0 - 0.1 * b.abs(), b + 0.5 + 0.2 * b * b)
        });
        SetMartingale::from_terminal(&terminal).unwrap()
    }

    #[test]
    fn martingale_check_examples() {
        let tree = FiltrationTree::new(3, 1.0).unwrap();
        let constant: Vec<SetRV> = (0..=3)
            .map(|k| SetRV::constant(k, interval(-1.0, 2.0)))
            .collect();
        assert!(is_set_martingale(&constant).unwrap().pass);

        let m = interval_martingale(&tree);
        assert!(is_set_martingale(&m.slices).unwrap().pass);

        // inflate one atom: the check localizes the residual
        let mut broken = m.slices.clone();
        let widened = {
            let (lo, hi) = broken[2].bodies[1].endpoints().unwrap();
            interval(lo, hi + 0.1)
        };
        broken[2].bodies[1] = widened;
        let report = is_set_martingale(&broken).unwrap();
        assert!(!report.pass);
        // widening an interval's upper endpoint by 0.1 shifts the parent
        // average by 0.05 and the pulled child by 0.1
        assert!((report.per_level_residual[1] - 0.05).abs() < 1e-12);
        assert!((report.per_level_residual[2] - 0.1).abs() < 1e-12);
        assert!(SetMartingale::new(broken).is_err());
    }

    #[test]
    fn selectors_are_members_and_martingales() {
        let tree = FiltrationTree::new(2, 1.0).unwrap();
        let m = interval_martingale(&tree);
        let selectors =
            martingale_selectors(&m, SelectorBudget::Enumerate { cap: 1 << 20 }).unwrap();
        assert_eq!(selectors.len(), 16); // 2^4 endpoint choices
        for sel in &selectors {
            assert!(sel.membership_gap(&m).unwrap() <= MEMBERSHIP_TOL);
            assert!(martingale_representer(&tree, &sel.slices).is_ok());
        }

        // every vertex of M_0 is attained by some selector's initial value
        let hull = ConvexBody::new(
            1,
            &selectors
                .iter()
                .map(|s| s.slices[0].values[0].clone())
                .collect::<Vec<_>>(),
        )
        .unwrap();
        assert!(hull.approx_eq(&m.slices[0].bodies[0], 1e-12));
    }

    #[test]
    fn constant_singleton_martingale_has_one_representer() {
        let tree = FiltrationTree::new(2, 1.0).unwrap();
        let m = SetMartingale::from_terminal(&SetRV::constant(
            2,
            ConvexBody::point(&[4.0]).unwrap(),
        ))
        .unwrap();
        let selectors =
            martingale_selectors(&m, SelectorBudget::Enumerate { cap: 100 }).unwrap();
        assert_eq!(selectors.len(), 1);
        let reps = build_representers(&tree, &selectors).unwrap();
        assert_eq!(reps.members.len(), 1);
        assert_eq!(reps.members[0].0, vec![4.0]);
        assert!(reps.members[0]
            .1
            .levels
            .iter()
            .flatten()
            .all(|v| v[0].abs() < 1e-12));
    }

    #[test]
    fn selector_round_trip_through_representers_is_exact() {
        let tree = FiltrationTree::new(3, 0.8).unwrap();
        let m = interval_martingale(&tree);
        let selectors =
            martingale_selectors(&m, SelectorBudget::Sample { count: 6, seed: 7 }).unwrap();
        let reps = build_representers(&tree, &selectors).unwrap();
        for (sel, (x, z)) in selectors.iter().zip(&reps.members) {
            for k in 0..=3 {
                let integral = discrete_ito_integral(&tree, z, k).unwrap();
                for idx in 0..tree.node_count(k) {
                    let rebuilt = x[0] + integral.values[idx][0];
                    assert!((rebuilt - sel.slices[k].values[idx][0]).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn full_enumeration_reconstructs_martingale() {
        let tree = FiltrationTree::new(2, 1.0).unwrap();
        let m = interval_martingale(&tree);
        let selectors =
            martingale_selectors(&m, SelectorBudget::Enumerate { cap: 1 << 20 }).unwrap();
        let reps = build_representers(&tree, &selectors).unwrap();
        let report = reconstruction_report(&tree, &m, &reps).unwrap();
        assert!(report.max_gap <= 1e-9, "gap {}", report.max_gap);

        // zero-initial case: M_0 = {0} forces every x to 0
        let shifted = SetRV::from_fn(2, |i| {
            let c = tree.brownian(2, i);
            interval(c - 1.0, c + 1.0)
        });
        let m0 = SetMartingale::from_terminal(&shifted).unwrap();
        // recenter so that M_0 is {0}: subtract the initial interval midpoint
        let (lo, hi) = m0.slices[0].bodies[0].endpoints().unwrap();
        assert!((lo + 1.0).abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sampled_reconstruction_gap_is_monotone_in_prefix_counts() {
        let tree = FiltrationTree::new(4, 1.0).unwrap();
        let m = interval_martingale(&tree);
        let mut gaps = Vec::new();
        for count in [4usize, 16, 64] {
            let selectors =
                martingale_selectors(&m, SelectorBudget::Sample { count, seed: 11 }).unwrap();
            let reps = build_representers(&tree, &selectors).unwrap();
            let report = reconstruction_report(&tree, &m, &reps).unwrap();
            assert!(report.escape_gap <= 1e-10);
            gaps.push(report.inner_gap);
        }
        assert!(gaps[0] >= gaps[1] - 1e-12 && gaps[1] >= gaps[2] - 1e-12, "{gaps:?}");
    }

    #[test]
    fn time_consistency_exact_under_full_enumeration() {
        let tree = FiltrationTree::new(2, 1.0).unwrap();
        let m = interval_martingale(&tree);
        let selectors =
            martingale_selectors(&m, SelectorBudget::Enumerate { cap: 1 << 20 }).unwrap();
        let reps = build_representers(&tree, &selectors).unwrap();
        let report = time_consistency_suite(&tree, &m, &selectors, &reps, 1, 2, 1e-9).unwrap();
        assert!(report.pass, "{report:?}");

        // singleton martingale: everything collapses to exact zeros
        let s = SetMartingale::from_terminal(&SetRV::from_fn(2, |i| {
            ConvexBody::point(&[tree.brownian(2, i)]).unwrap()
        }))
        .unwrap();
        let sel = martingale_selectors(&s, SelectorBudget::Enumerate { cap: 10 }).unwrap();
        let reps = build_representers(&tree, &sel).unwrap();
        let report = time_consistency_suite(&tree, &s, &sel, &reps, 0, 1, 1e-12).unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn inclusion_check_cases() {
        let tree = FiltrationTree::new(2, 1.0).unwrap();

        // {0} x Z: equality, not strict
        let z1 = VectorProcess::constant(&[1.0], 2);
        let z2 = VectorProcess::constant(&[-1.0], 2);
        let r = RepresenterSet::new(
            vec![(vec![0.0], z1.clone()), (vec![0.0], z2.clone())],
            true,
        )
        .unwrap();
        let rep = inclusion_check(&tree, &r, 2, 1e-9).unwrap();
        assert!(rep.pass && !rep.strict_anywhere, "{rep:?}");

        // distinct initial values with distinct integrands: strict inclusion
        let r2 = RepresenterSet::new(vec![(vec![1.0], z1.clone()), (vec![-1.0], z2)], true)
            .unwrap();
        let rep2 = inclusion_check(&tree, &r2, 2, 1e-9).unwrap();
        assert!(rep2.pass && rep2.strict_anywhere, "{rep2:?}");

        // shared integrand: cross pairs add nothing, equality again
        let r3 = RepresenterSet::new(
            vec![(vec![1.0], z1.clone()), (vec![-1.0], z1)],
            true,
        )
        .unwrap();
        let rep3 = inclusion_check(&tree, &r3, 2, 1e-9).unwrap();
        assert!(rep3.pass && !rep3.strict_anywhere, "{rep3:?}");
    }

    #[test]
    fn monotone_reconstruction_under_added_selectors() {
        let tree = FiltrationTree::new(3, 1.0).unwrap();
        let m = interval_martingale(&tree);
        let all = martingale_selectors(&m, SelectorBudget::Enumerate { cap: 1 << 20 }).unwrap();
        let few = build_representers(&tree, &all[..3]).unwrap();
        let more = build_representers(&tree, &all[..10]).unwrap();
        for k in 0..=3 {
            let rec_few = reconstruct_integral(&tree, &few, k).unwrap();
            let rec_more = reconstruct_integral(&tree, &more, k).unwrap();
            for (a, b) in rec_few.bodies.iter().zip(&rec_more.bodies) {
                assert!(a.directed_hausdorff(b).unwrap() <= 1e-11);
            }
        }
    }

    #[test]
    fn set_process_compatible_with_martingale_slices() {
        // slices of a martingale restricted to levels 0..N form an adapted
        // set process usable by the integrals
        let tree = FiltrationTree::new(2, 1.0).unwrap();
        let m = interval_martingale(&tree);
        let proc = SetProcess::new(m.slices[..2].to_vec()).unwrap();
        assert_eq!(proc.level_count(), 2);
        let _ = crate::integrals::aumann_time_integral(&tree, &proc, 0, 2).unwrap();
    }
}
