//! Binary scenario tree approximating a 1-dimensional Brownian motion.
//!
//! A depth-N tree carries the uniform measure on its 2^N terminal atoms;
//! every step moves by +-sqrt(dt) with dt = T/N, so increments are
//! conditionally centered and the filtration at level k is generated by the
//! level-k nodes.
//!
//! Node encoding: a level-k node is an index in 0..2^k whose bit j (from 0)
//! records whether step j+1 went up. The path string spells the steps
//! chronologically, e.g. "UDU"; the root is "".

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard cap on tree depth (memory on dense levels is 2^depth).
pub const MAX_DEPTH: usize = 24;

/// Residual above which a candidate vector process is rejected as a
/// martingale.
pub const MARTINGALE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiltrationTree {
    #[serde(rename = "steps")]
    depth: usize,
    horizon: f64,
    #[serde(skip, default)]
    dt: f64,
    #[serde(skip, default)]
    sqrt_dt: f64,
}

impl FiltrationTree {
    pub fn new(depth: usize, horizon: f64) -> Result<Self> {
        if depth == 0 || depth > MAX_DEPTH {
            return Err(Error::InvalidParameter(format!(
                "depth must be in 1..={MAX_DEPTH}, got {depth}"
            )));
        }
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        let dt = horizon / depth as f64;
        Ok(Self {
            depth,
            horizon,
            dt,
            sqrt_dt: dt.sqrt(),
        })
    }

    /// Restores derived fields after deserialization.
    pub fn from_config(depth: usize, horizon: f64) -> Result<Self> {
        Self::new(depth, horizon)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn sqrt_dt(&self) -> f64 {
        self.sqrt_dt
    }

    pub fn time(&self, level: usize) -> f64 {
        level as f64 * self.dt
    }

    pub fn node_count(&self, level: usize) -> usize {
        1usize << level
    }

    /// Probability of each level-`level` atom (uniform tree).
    pub fn atom_prob(&self, level: usize) -> f64 {
        1.0 / (1u64 << level) as f64
    }

    pub fn check_level(&self, level: usize) -> Result<()> {
        if level > self.depth {
            return Err(Error::LevelOutOfRange {
                level,
                max: self.depth,
            });
        }
        Ok(())
    }

    /// Children (down, up) at level `level + 1` of a level-`level` node.
    pub fn children(&self, level: usize, idx: usize) -> (usize, usize) {
        (idx, idx | (1 << level))
    }

    /// Ancestor of a level-`level` node at `at_level <= level`.
    pub fn ancestor(&self, _level: usize, idx: usize, at_level: usize) -> usize {
        idx & ((1usize << at_level) - 1)
    }

    /// Sign (+-1) of the step taken into a level-`level` node (level >= 1).
    pub fn step_sign(&self, level: usize, idx: usize) -> f64 {
        if idx & (1 << (level - 1)) != 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Brownian increment of the step into a level-`level` node.
    pub fn increment(&self, level: usize, idx: usize) -> f64 {
        self.step_sign(level, idx) * self.sqrt_dt
    }

    /// Walk value B_{t_level} at a node.
    pub fn brownian(&self, level: usize, idx: usize) -> f64 {
        let ups = (idx & ((1usize << level) - 1)).count_ones() as i64;
        let signed = 2 * ups - level as i64;
        signed as f64 * self.sqrt_dt
    }

    pub fn path_string(&self, level: usize, idx: usize) -> String {
        (0..level)
            .map(|j| if idx & (1 << j) != 0 { 'U' } else { 'D' })
            .collect()
    }

    /// Parses a path like "UDU" into (level, index); "" is the root.
    pub fn parse_path(&self, path: &str) -> Result<(usize, usize)> {
        let level = path.len();
        self.check_level(level)?;
        let mut idx = 0usize;
        for (j, ch) in path.chars().enumerate() {
            match ch {
                'U' | 'u' => idx |= 1 << j,
                'D' | 'd' => {}
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "path char `{other}` (want U or D)"
                    )))
                }
            }
        }
        Ok((level, idx))
    }
}

/// An R^d-valued random variable measurable at a given level: one value per
/// level-k node.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorRV {
    pub level: usize,
    pub dim: usize,
    /// Dense node-indexed values, `values.len() == 2^level`.
    pub values: Vec<Vec<f64>>,
}

impl VectorRV {
    pub fn new(level: usize, dim: usize, values: Vec<Vec<f64>>) -> Result<Self> {
        if values.len() != 1usize << level {
            return Err(Error::InvalidParameter(format!(
                "level {level} needs {} values, got {}",
                1usize << level,
                values.len()
            )));
        }
        if values.iter().any(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: values.iter().map(|v| v.len()).find(|l| *l != dim).unwrap_or(dim),
            });
        }
        Ok(Self { level, dim, values })
    }

    pub fn constant(level: usize, value: &[f64]) -> Self {
        Self {
            level,
            dim: value.len(),
            values: vec![value.to_vec(); 1 << level],
        }
    }

    pub fn from_fn(level: usize, dim: usize, mut f: impl FnMut(usize) -> Vec<f64>) -> Self {
        Self {
            level,
            dim,
            values: (0..1usize << level).map(|i| f(i)).collect(),
        }
    }

    pub fn value(&self, idx: usize) -> &[f64] {
        &self.values[idx]
    }
}

/// A predictable R^d-valued process: one value per node on levels
/// 0..len-1 (the integrand at step k+1 is read at the level-k node).
#[derive(Debug, Clone, PartialEq)]
pub struct VectorProcess {
    pub dim: usize,
    /// `levels[k]` has 2^k entries.
    pub levels: Vec<Vec<Vec<f64>>>,
}

impl VectorProcess {
    pub fn new(dim: usize, levels: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        for (k, lv) in levels.iter().enumerate() {
            if lv.len() != 1usize << k {
                return Err(Error::InvalidParameter(format!(
                    "process level {k} needs {} nodes, got {}",
                    1usize << k,
                    lv.len()
                )));
            }
            if lv.iter().any(|v| v.len() != dim) {
                return Err(Error::DimensionMismatch { expected: dim, got: 0 });
            }
        }
        Ok(Self { dim, levels })
    }

    pub fn zero(dim: usize, level_count: usize) -> Self {
        Self {
            dim,
            levels: (0..level_count)
                .map(|k| vec![vec![0.0; dim]; 1 << k])
                .collect(),
        }
    }

    pub fn constant(value: &[f64], level_count: usize) -> Self {
        Self {
            dim: value.len(),
            levels: (0..level_count)
                .map(|k| vec![value.to_vec(); 1 << k])
                .collect(),
        }
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn value(&self, level: usize, idx: usize) -> &[f64] {
        &self.levels[level][idx]
    }
}

/// Conditional expectation E[x | F_j]: probability-weighted average of `x`
/// over the level-k descendants of each level-j node.
pub fn cond_exp_vector(x: &VectorRV, to_level: usize) -> Result<VectorRV> {
    if to_level > x.level {
        return Err(Error::LevelOutOfRange {
            level: to_level,
            max: x.level,
        });
    }
    let mut values = x.values.clone();
    let mut level = x.level;
    while level > to_level {
        let half = 1usize << (level - 1);
        let mut next = Vec::with_capacity(half);
        for i in 0..half {
            let down = &values[i];
            let up = &values[i | half];
            next.push(
                down.iter()
                    .zip(up)
                    .map(|(a, b)| 0.5 * (a + b))
                    .collect::<Vec<f64>>(),
            );
        }
        values = next;
        level -= 1;
    }
    Ok(VectorRV {
        level: to_level,
        dim: x.dim,
        values,
    })
}

/// Discrete Ito integral sum_{j < t_index} z(node_j) * dB_{j+1}, evaluated
/// at every level-`t_index` node; a martingale null at zero.
pub fn discrete_ito_integral(
    tree: &FiltrationTree,
    z: &VectorProcess,
    t_index: usize,
) -> Result<VectorRV> {
    tree.check_level(t_index)?;
    if z.level_count() < t_index {
        return Err(Error::MissingNode(format!(
            "process has {} levels, integral needs {}",
            z.level_count(),
            t_index
        )));
    }
    window_ito_integral(tree, z, 0, t_index)
}

/// Ito integral over the window [from, to): sum_{from <= j < to} z_j dB_{j+1},
/// as a level-`to` random variable.
pub fn window_ito_integral(
    tree: &FiltrationTree,
    z: &VectorProcess,
    from: usize,
    to: usize,
) -> Result<VectorRV> {
    tree.check_level(to)?;
    if from > to {
        return Err(Error::InvalidParameter(format!(
            "window [{from}, {to}) is empty-reversed"
        )));
    }
    let dim = z.dim;
    let values = (0..1usize << to)
        .map(|idx| {
            let mut acc = vec![0.0; dim];
            for j in from..to {
                let node = idx & ((1 << j) - 1);
                let db = tree.increment(j + 1, idx);
                for (a, zi) in acc.iter_mut().zip(&z.levels[j][node]) {
                    *a += zi * db;
                }
            }
            acc
        })
        .collect();
    VectorRV::new(to, dim, values)
}

/// Martingale representation: for a vector martingale y (slices at levels
/// 0..=L), returns the initial value x and the unique predictable z with
/// y_k = x + sum_{j<k} z_j dB_{j+1} at every node, exactly.
pub fn martingale_representer(
    tree: &FiltrationTree,
    slices: &[VectorRV],
) -> Result<(Vec<f64>, VectorProcess)> {
    if slices.is_empty() {
        return Err(Error::InvalidParameter("no martingale slices".into()));
    }
    let dim = slices[0].dim;
    for (k, s) in slices.iter().enumerate() {
        if s.level != k || s.dim != dim {
            return Err(Error::InvalidParameter(
                "slices must sit at levels 0..=L with a common dim".into(),
            ));
        }
    }
    // Martingale check: parent value is the mean of its children.
    let mut worst: f64 = 0.0;
    for k in 0..slices.len() - 1 {
        let half = 1usize << k;
        for i in 0..half {
            let down = &slices[k + 1].values[i];
            let up = &slices[k + 1].values[i | half];
            for ((d, u), v) in down.iter().zip(up).zip(&slices[k].values[i]) {
                worst = worst.max((0.5 * (d + u) - v).abs());
            }
        }
    }
    if worst > MARTINGALE_TOL {
        return Err(Error::NotMartingale {
            residual: worst,
            tol: MARTINGALE_TOL,
        });
    }

    let x = slices[0].values[0].clone();
    let denom = 2.0 * tree.sqrt_dt();
    let levels = (0..slices.len() - 1)
        .map(|k| {
            let half = 1usize << k;
            (0..half)
                .map(|i| {
                    let down = &slices[k + 1].values[i];
                    let up = &slices[k + 1].values[i | half];
                    up.iter().zip(down).map(|(u, d)| (u - d) / denom).collect()
                })
                .collect()
        })
        .collect();
    Ok((x, VectorProcess { dim, levels }))
}

/// Path-keyed wire form shared by [`VectorRV`] and single levels of
/// [`VectorProcess`].
#[derive(Serialize, Deserialize)]
struct VectorRVWire {
    level: usize,
    values: BTreeMap<String, Vec<f64>>,
}

impl Serialize for VectorRV {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let tree = FiltrationTree::new(self.level.max(1), 1.0).map_err(serde::ser::Error::custom)?;
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| (tree.path_string(self.level, i), v.clone()))
            .collect();
        VectorRVWire {
            level: self.level,
            values,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for VectorRV {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = VectorRVWire::deserialize(d)?;
        let tree = FiltrationTree::new(wire.level.max(1), 1.0).map_err(D::Error::custom)?;
        let count = 1usize << wire.level;
        let mut values = vec![Vec::new(); count];
        let mut dim = None;
        for (path, v) in wire.values {
            let (level, idx) = tree.parse_path(&path).map_err(D::Error::custom)?;
            if level != wire.level {
                return Err(D::Error::custom(format!(
                    "path `{path}` is not at level {}",
                    wire.level
                )));
            }
            if *dim.get_or_insert(v.len()) != v.len() {
                return Err(D::Error::custom("inconsistent value dimensions"));
            }
            values[idx] = v;
        }
        if values.iter().any(|v| v.is_empty()) && dim != Some(0) {
            return Err(D::Error::custom("value map is not total"));
        }
        VectorRV::new(wire.level, dim.unwrap_or(0), values).map_err(D::Error::custom)
    }
}
