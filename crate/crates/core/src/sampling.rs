//! Seeded random generators for bodies, variables, processes and problems.
//!
//! All randomized suites draw from a single ChaCha stream created from the
//! scenario seed, so runs are reproducible byte for byte.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::geometry::ConvexBody;
use crate::set_random::{SetProcess, SetRV};
use crate::tree::VectorProcess;

pub fn rng_from_seed(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

pub fn random_interval(rng: &mut impl Rng, scale: f64) -> ConvexBody {
    let a = rng.random_range(-scale..scale);
    let b = rng.random_range(-scale..scale);
    ConvexBody::interval(a.min(b), a.max(b)).unwrap()
}

/// Hull of 3..=8 points in a disc; occasionally collapses to a segment or
/// point, which is intended (degenerate bodies are legal everywhere).
pub fn random_polygon(rng: &mut impl Rng, scale: f64) -> ConvexBody {
    let n = rng.random_range(3..=8);
    let cx = rng.random_range(-scale..scale);
    let cy = rng.random_range(-scale..scale);
    let pts: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let r = rng.random_range(0.0..scale);
            let th = rng.random_range(0.0..std::f64::consts::TAU);
            vec![cx + r * th.cos(), cy + r * th.sin()]
        })
        .collect();
    ConvexBody::new(2, &pts).unwrap()
}

/// Random body of the given dimension; roughly one in eight is degenerate
/// (point or axis segment).
pub fn random_body(rng: &mut impl Rng, dim: usize, scale: f64) -> ConvexBody {
    let roll: f64 = rng.random();
    if dim == 1 {
        if roll < 0.12 {
            let p = rng.random_range(-scale..scale);
            return ConvexBody::point(&[p]).unwrap();
        }
        return random_interval(rng, scale);
    }
    if roll < 0.06 {
        let p = vec![
            rng.random_range(-scale..scale),
            rng.random_range(-scale..scale),
        ];
        ConvexBody::point(&p).unwrap()
    } else if roll < 0.12 {
        let a = vec![
            rng.random_range(-scale..scale),
            rng.random_range(-scale..scale),
        ];
        let b = vec![
            rng.random_range(-scale..scale),
            rng.random_range(-scale..scale),
        ];
        ConvexBody::new(2, &[a, b]).unwrap()
    } else {
        random_polygon(rng, scale)
    }
}

pub fn random_set_rv(rng: &mut impl Rng, level: usize, dim: usize, scale: f64) -> SetRV {
    SetRV::from_fn(level, |_| random_body(rng, dim, scale))
}

pub fn random_set_process(
    rng: &mut impl Rng,
    level_count: usize,
    dim: usize,
    scale: f64,
) -> SetProcess {
    SetProcess::from_fn(level_count, |_, _| random_body(rng, dim, scale))
}

pub fn random_vector_process(
    rng: &mut impl Rng,
    level_count: usize,
    dim: usize,
    scale: f64,
) -> VectorProcess {
    VectorProcess::new(
        dim,
        (0..level_count)
            .map(|k| {
                (0..1usize << k)
                    .map(|_| (0..dim).map(|_| rng.random_range(-scale..scale)).collect())
                    .collect()
            })
            .collect(),
    )
    .unwrap()
}

/// Interval-valued terminal condition whose endpoints depend on the walk's
/// terminal value through smooth nonlinearities.
pub fn interval_terminal_of_walk(
    tree: &crate::tree::FiltrationTree,
    width: f64,
    tilt: f64,
) -> SetRV {
    let n = tree.depth();
    SetRV::from_fn(n, |i| {
        let b = tree.brownian(n, i);
        let lo = tilt * b - width - 0.1 * b * b;
        let hi = tilt * b + width + 0.2 * b.abs();
        ConvexBody::interval(lo, hi).unwrap()
    })
}
