//! Derivative-free maximization: downhill simplex with seeded random
//! restarts. The witness objectives are smooth in a handful of angles, so
//! this converges quickly and stays fully deterministic for a given seed.

use crate::scalar::{real, Real};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Result of one simplex run or a restart sweep.
#[derive(Debug, Clone)]
pub struct OptimResult<T> {
    pub value: T,
    pub point: Vec<T>,
}

/// Nelder–Mead minimization from a single start point.
///
/// Uses the standard reflection/expansion/contraction/shrink coefficients
/// (1, 2, 1/2, 1/2) and stops when the simplex function spread falls below
/// `tol` or after `max_iter` iterations.
pub fn nelder_mead_min<T, F>(f: &mut F, x0: &[T], step: T, tol: T, max_iter: usize) -> OptimResult<T>
where
    T: Real,
    F: FnMut(&[T]) -> T,
{
    let n = x0.len();
    assert!(n >= 1, "need at least one parameter");
    let mut simplex: Vec<Vec<T>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += step;
        simplex.push(p);
    }
    let mut values: Vec<T> = simplex.iter().map(|p| f(p)).collect();

    let half = real::<T>(0.5);
    let two = real::<T>(2.0);
    for _ in 0..max_iter {
        // Order: best first.
        let mut idx: Vec<usize> = (0..=n).collect();
        idx.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
        let reorder_points: Vec<Vec<T>> = idx.iter().map(|&i| simplex[i].clone()).collect();
        let reorder_vals: Vec<T> = idx.iter().map(|&i| values[i]).collect();
        simplex = reorder_points;
        values = reorder_vals;

        if values[n] - values[0] < tol {
            break;
        }

        let mut centroid = vec![T::zero(); n];
        for p in simplex.iter().take(n) {
            for (c, x) in centroid.iter_mut().zip(p) {
                *c += *x;
            }
        }
        let inv = T::one() / real::<T>(n as f64);
        for c in &mut centroid {
            *c *= inv;
        }

        let worst = simplex[n].clone();
        let blend = |a: T, from: &[T], to: &[T]| -> Vec<T> {
            from.iter()
                .zip(to)
                .map(|(&c, &w)| c + a * (c - w))
                .collect()
        };

        let reflected = blend(T::one(), &centroid, &worst);
        let fr = f(&reflected);
        if fr < values[0] {
            let expanded = blend(two, &centroid, &worst);
            let fe = f(&expanded);
            if fe < fr {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = reflected;
            values[n] = fr;
        } else {
            let (contracted, fc) = if fr < values[n] {
                let c = blend(half, &centroid, &worst);
                let v = f(&c);
                (c, v)
            } else {
                let c = blend(-half, &centroid, &worst);
                let v = f(&c);
                (c, v)
            };
            if fc < values[n].min(fr) {
                simplex[n] = contracted;
                values[n] = fc;
            } else {
                // Shrink toward the best vertex.
                let best = simplex[0].clone();
                for i in 1..=n {
                    for j in 0..n {
                        simplex[i][j] = best[j] + half * (simplex[i][j] - best[j]);
                    }
                    values[i] = f(&simplex[i]);
                }
            }
        }
    }

    let mut best = 0;
    for i in 1..=n {
        if values[i] < values[best] {
            best = i;
        }
    }
    OptimResult {
        value: values[best],
        point: simplex[best].clone(),
    }
}

/// Configuration for the restart sweep.
#[derive(Debug, Clone, Copy)]
pub struct RestartConfig<T> {
    pub n_restarts: usize,
    pub seed: u64,
    pub tol: T,
    pub max_iter: usize,
    /// Restart starting points are drawn uniformly from [lo, hi]^n.
    pub lo: T,
    pub hi: T,
}

impl<T: Real> Default for RestartConfig<T> {
    fn default() -> Self {
        Self {
            n_restarts: 64,
            seed: 0x5eed,
            tol: real(1e-10),
            max_iter: 4000,
            lo: T::zero(),
            hi: real::<T>(2.0) * T::PI(),
        }
    }
}

/// Maximize `f` over `n_params` parameters with seeded random restarts.
///
/// Restart 0 always starts from the origin of the box midpoint; later
/// restarts draw uniformly from the box. Ties keep the earliest restart, so
/// the result is deterministic for a given seed.
pub fn maximize_restarts<T, F>(f: F, n_params: usize, cfg: &RestartConfig<T>) -> OptimResult<T>
where
    T: Real,
    F: Fn(&[T]) -> T,
{
    let mut neg = |x: &[T]| -f(x);
    let step = (cfg.hi - cfg.lo) * real::<T>(0.15);
    let mut best: Option<OptimResult<T>> = None;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for r in 0..cfg.n_restarts.max(1) {
        let x0: Vec<T> = if r == 0 {
            vec![T::zero(); n_params]
        } else {
            (0..n_params)
                .map(|_| cfg.lo + (cfg.hi - cfg.lo) * T::sample_unit(&mut rng))
                .collect()
        };
        let run = nelder_mead_min(&mut neg, &x0, step, cfg.tol, cfg.max_iter);
        let run = OptimResult {
            value: -run.value,
            point: run.point,
        };
        best = Some(match best {
            None => run,
            Some(b) if run.value > b.value => run,
            Some(b) => b,
        });
    }
    best.unwrap()
}
